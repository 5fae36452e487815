//! One-round discrete Voronoi game in the plane.
//!
//! Two players compete for a finite set of voters. The first player places
//! `k` points, the second player answers with a single point, and every voter
//! sides with the closest placed point, ties favoring the first player. This
//! crate provides:
//!
//! - placement strategies for the first player, based on convex-position
//!   epsilon nets and on compressed quadtrees, under both the Euclidean and
//!   the taxicab metric,
//! - an exact best-response oracle for the second player,
//! - generators for voter instances, and
//! - a verification harness that replays every guarantee on concrete
//!   instances using exact rational arithmetic.
//!
//! All decisions are made over arbitrary-precision rationals; floating point
//! appears only as a sound interval filter in front of exact predicates.

pub mod angles;
pub mod centerpoint;
pub mod convexnet;
pub mod flow;
pub mod geometry;
pub mod instance;
pub mod lp;
pub mod num;
pub mod rectnet;
pub mod sixsplit;

pub use centerpoint::{centerpoint, halfplane_depth};
pub use convexnet::{
    audit_convex_net, build_convex_net, build_convex_net_with, eps_table, Decomposition, EpsNet,
    EpsPlan, NetError, PluginRegistry,
};
pub use geometry::{
    cell_distance, dist_key, evaluate_game, orient, plus_region, GameError, GameResult, Metric,
    PlusRegion, Point, Square, WeightedPointSet,
};
pub use instance::{FileError, Instance, Placement, Response, RoundReport};
pub use num::{decimal_string, format_rat, frac, parse_rat, rat, Rat};
pub use rectnet::{
    median_point_net, rect_eps_table, rect_net_quality, search_rect_net, RectNet, SearchMode,
};
pub use sixsplit::{six_split, verify_six_split, SixSplit, SixSplitError, SplitBudget};
