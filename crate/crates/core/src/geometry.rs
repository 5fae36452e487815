//! Points, metrics, squares, and exact game evaluation.

use crate::num::{Ival, Rat};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// A point in the plane with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Point {
        Point { x, y }
    }

    /// Displacement `self - o` as a coordinate pair.
    pub fn sub(&self, o: &Point) -> (Rat, Rat) {
        (&self.x - &o.x, &self.y - &o.y)
    }

    /// Approximate coordinates for heuristics and display.
    pub fn to_f64(&self) -> (f64, f64) {
        (crate::num::rat_to_f64(&self.x), crate::num::rat_to_f64(&self.y))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", crate::num::format_rat(&self.x), crate::num::format_rat(&self.y))
    }
}

/// Distance metric for the game.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    L2,
    L1,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::L2 => write!(f, "l2"),
            Metric::L1 => write!(f, "l1"),
        }
    }
}

/// Comparable distance key: the squared Euclidean distance under [`Metric::L2`]
/// and the taxicab distance under [`Metric::L1`]. Both are exact rationals and
/// order pairs of points identically to the true metric distance.
pub fn dist_key(metric: Metric, a: &Point, b: &Point) -> Rat {
    let (dx, dy) = a.sub(b);
    match metric {
        Metric::L2 => &dx * &dx + &dy * &dy,
        Metric::L1 => dx.abs() + dy.abs(),
    }
}

/// Interval version of [`dist_key`] for filtered comparisons.
pub fn dist_key_ival(metric: Metric, a: (Ival, Ival), b: (Ival, Ival)) -> Ival {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    match metric {
        Metric::L2 => dx.sq() + dy.sq(),
        Metric::L1 => {
            let ax = abs_ival(dx);
            let ay = abs_ival(dy);
            ax + ay
        }
    }
}

fn abs_ival(v: Ival) -> Ival {
    if v.lo >= 0.0 {
        v
    } else if v.hi <= 0.0 {
        -v
    } else {
        Ival { lo: 0.0, hi: (-v.lo).max(v.hi) }
    }
}

/// Sign of the cross product `(b - a) x (c - a)`: `Greater` when the triple
/// turns left, `Less` when it turns right, `Equal` when collinear.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Ordering {
    let (ux, uy) = b.sub(a);
    let (vx, vy) = c.sub(a);
    (&ux * &vy).cmp(&(&uy * &vx))
}

/// Axis-aligned square given by its lower-left anchor and side length.
/// Membership is half open: `[x0, x0 + size) x [y0, y0 + size)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Square {
    pub x0: Rat,
    pub y0: Rat,
    pub size: Rat,
}

impl Square {
    pub fn new(x0: Rat, y0: Rat, size: Rat) -> Square {
        Square { x0, y0, size }
    }

    pub fn contains(&self, p: &Point) -> bool {
        let x1 = &self.x0 + &self.size;
        let y1 = &self.y0 + &self.size;
        p.x >= self.x0 && p.x < x1 && p.y >= self.y0 && p.y < y1
    }

    pub fn center(&self) -> Point {
        let half = &self.size / crate::num::rat(2);
        Point::new(&self.x0 + &half, &self.y0 + &half)
    }

    /// The square of the same size displaced by `(dx, dy)` multiples of the
    /// side length.
    pub fn neighbor(&self, dx: i64, dy: i64) -> Square {
        Square {
            x0: &self.x0 + &self.size * crate::num::rat(dx),
            y0: &self.y0 + &self.size * crate::num::rat(dy),
            size: self.size.clone(),
        }
    }
}

/// The plus-shaped union of a square and its four axis neighbors of the same
/// size.
#[derive(Clone, Debug)]
pub struct PlusRegion {
    pub arms: [Square; 5],
}

/// Builds the plus region centered on `s`: the square itself first, then the
/// right, left, upper, and lower neighbors.
pub fn plus_region(s: &Square) -> PlusRegion {
    PlusRegion {
        arms: [s.clone(), s.neighbor(1, 0), s.neighbor(-1, 0), s.neighbor(0, 1), s.neighbor(0, -1)],
    }
}

impl PlusRegion {
    pub fn contains(&self, p: &Point) -> bool {
        self.arms.iter().any(|a| a.contains(p))
    }
}

/// Distance key between the closures of two squares: zero when they touch or
/// overlap, otherwise the key of the closest pair of boundary points.
pub fn cell_distance(metric: Metric, a: &Square, b: &Square) -> Rat {
    let gap = |a0: &Rat, asz: &Rat, b0: &Rat, bsz: &Rat| -> Rat {
        let left = b0 - &(a0 + asz);
        let right = a0 - &(b0 + bsz);
        let zero = Rat::zero();
        if left > zero {
            left
        } else if right > zero {
            right
        } else {
            zero
        }
    };
    let gx = gap(&a.x0, &a.size, &b.x0, &b.size);
    let gy = gap(&a.y0, &a.size, &b.y0, &b.size);
    match metric {
        Metric::L2 => &gx * &gx + &gy * &gy,
        Metric::L1 => gx + gy,
    }
}

/// Errors arising while building point sets or scoring games.
#[derive(Debug, thiserror::Error)]
pub enum GameError {
    #[error("point set has {points} points but {weights} weights")]
    LengthMismatch { points: usize, weights: usize },
    #[error("weight of point {index} is not positive")]
    NonPositiveWeight { index: usize },
    #[error("duplicate point at indices {0} and {1}")]
    DuplicatePoint(usize, usize),
    #[error("player placement is empty")]
    EmptyPlacement,
    #[error("second player's point coincides with first player's point {0}")]
    OverlappingPlacement(usize),
}

/// A finite set of distinct weighted points. Weights are positive rationals;
/// the unweighted game uses weight one everywhere.
#[derive(Clone, Debug)]
pub struct WeightedPointSet {
    points: Vec<Point>,
    weights: Vec<Rat>,
    total: Rat,
}

impl WeightedPointSet {
    pub fn new(points: Vec<Point>, weights: Vec<Rat>) -> Result<WeightedPointSet, GameError> {
        if points.len() != weights.len() {
            return Err(GameError::LengthMismatch { points: points.len(), weights: weights.len() });
        }
        if let Some(i) = weights.iter().position(|w| !w.is_positive()) {
            return Err(GameError::NonPositiveWeight { index: i });
        }
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&i, &j| points[i].cmp(&points[j]));
        for w in order.windows(2) {
            if points[w[0]] == points[w[1]] {
                return Err(GameError::DuplicatePoint(w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        let total = weights.iter().sum();
        Ok(WeightedPointSet { points, weights, total })
    }

    pub fn unweighted(points: Vec<Point>) -> Result<WeightedPointSet, GameError> {
        let n = points.len();
        WeightedPointSet::new(points, vec![crate::num::rat(1); n])
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn weight(&self, i: usize) -> &Rat {
        &self.weights[i]
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn total(&self) -> &Rat {
        &self.total
    }

    /// Restriction to the given voter indices, keeping their weights.
    pub fn subset(&self, indices: &[usize]) -> WeightedPointSet {
        let points = indices.iter().map(|&i| self.points[i].clone()).collect();
        let weights: Vec<Rat> = indices.iter().map(|&i| self.weights[i].clone()).collect();
        let total = weights.iter().sum();
        WeightedPointSet { points, weights, total }
    }
}

/// Outcome of one play of the game: how much voter mass each player captured
/// and which voters the second player took.
#[derive(Clone, Debug)]
pub struct GameResult {
    pub p_mass: Rat,
    pub q_mass: Rat,
    pub q_indices: Vec<usize>,
}

/// Scores a finished game exactly. Each voter goes to its nearest placed
/// point; the first player wins every tie. Fails if `p` is empty or `q`
/// coincides with a point of `p`.
pub fn evaluate_game(
    voters: &WeightedPointSet,
    p: &[Point],
    q: &Point,
    metric: Metric,
) -> Result<GameResult, GameError> {
    if p.is_empty() {
        return Err(GameError::EmptyPlacement);
    }
    if let Some(i) = p.iter().position(|x| x == q) {
        return Err(GameError::OverlappingPlacement(i));
    }
    let mut p_mass = Rat::zero();
    let mut q_mass = Rat::zero();
    let mut q_indices = Vec::new();
    for (i, v) in voters.points().iter().enumerate() {
        let dq = dist_key(metric, v, q);
        let mut p_wins = false;
        for pp in p {
            if dist_key(metric, v, pp) <= dq {
                p_wins = true;
                break;
            }
        }
        if p_wins {
            p_mass += voters.weight(i);
        } else {
            q_mass += voters.weight(i);
            q_indices.push(i);
        }
    }
    Ok(GameResult { p_mass, q_mass, q_indices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, rat};

    fn pt(x: i64, y: i64) -> Point {
        Point::new(rat(x), rat(y))
    }

    #[test]
    fn distance_keys() {
        let a = pt(0, 0);
        let b = pt(3, 4);
        assert_eq!(dist_key(Metric::L2, &a, &b), rat(25));
        assert_eq!(dist_key(Metric::L1, &a, &b), rat(7));
        let c = Point::new(frac(1, 2), frac(-1, 3));
        assert_eq!(dist_key(Metric::L1, &a, &c), frac(5, 6));
    }

    #[test]
    fn orientation() {
        assert_eq!(orient(&pt(0, 0), &pt(1, 0), &pt(0, 1)), Ordering::Greater);
        assert_eq!(orient(&pt(0, 0), &pt(0, 1), &pt(1, 0)), Ordering::Less);
        assert_eq!(orient(&pt(0, 0), &pt(1, 1), &pt(2, 2)), Ordering::Equal);
    }

    #[test]
    fn ties_go_to_first_player() {
        let voters = WeightedPointSet::unweighted(vec![pt(0, 0)]).unwrap();
        let p = [pt(1, 0)];
        let q = pt(-1, 0);
        let r = evaluate_game(&voters, &p, &q, Metric::L2).unwrap();
        assert_eq!(r.p_mass, rat(1));
        assert_eq!(r.q_mass, rat(0));
        assert!(r.q_indices.is_empty());
    }

    #[test]
    fn strictly_closer_second_player_wins() {
        let voters = WeightedPointSet::unweighted(vec![pt(0, 0), pt(10, 0)]).unwrap();
        let p = [pt(1, 0)];
        let q = pt(9, 0);
        let r = evaluate_game(&voters, &p, &q, Metric::L2).unwrap();
        assert_eq!(r.p_mass, rat(1));
        assert_eq!(r.q_mass, rat(1));
        assert_eq!(r.q_indices, vec![1]);
    }

    #[test]
    fn overlap_and_empty_are_rejected() {
        let voters = WeightedPointSet::unweighted(vec![pt(0, 0)]).unwrap();
        assert!(matches!(
            evaluate_game(&voters, &[], &pt(1, 1), Metric::L2),
            Err(GameError::EmptyPlacement)
        ));
        assert!(matches!(
            evaluate_game(&voters, &[pt(1, 1)], &pt(1, 1), Metric::L2),
            Err(GameError::OverlappingPlacement(0))
        ));
    }

    #[test]
    fn weighted_scoring() {
        let voters =
            WeightedPointSet::new(vec![pt(0, 0), pt(4, 0)], vec![frac(1, 2), frac(3, 2)]).unwrap();
        let r = evaluate_game(&voters, &[pt(1, 0)], &pt(3, 0), Metric::L2).unwrap();
        assert_eq!(r.p_mass, frac(1, 2));
        assert_eq!(r.q_mass, frac(3, 2));
    }

    #[test]
    fn duplicate_points_rejected() {
        let err = WeightedPointSet::unweighted(vec![pt(1, 2), pt(0, 0), pt(1, 2)]).unwrap_err();
        assert!(matches!(err, GameError::DuplicatePoint(0, 2)));
    }

    #[test]
    fn square_membership_is_half_open() {
        let s = Square::new(rat(0), rat(0), rat(2));
        assert!(s.contains(&pt(0, 0)));
        assert!(s.contains(&pt(1, 1)));
        assert!(!s.contains(&pt(2, 0)));
        assert!(!s.contains(&pt(0, 2)));
        assert_eq!(s.center(), pt(1, 1));
    }

    #[test]
    fn plus_region_shape() {
        let s = Square::new(rat(0), rat(0), rat(2));
        let plus = plus_region(&s);
        assert!(plus.contains(&pt(3, 1)));
        assert!(plus.contains(&pt(-1, 0)));
        assert!(plus.contains(&pt(1, 3)));
        assert!(plus.contains(&pt(1, -1)));
        assert!(!plus.contains(&pt(3, 3)));
    }

    #[test]
    fn square_gap_distance() {
        let a = Square::new(rat(0), rat(0), rat(1));
        let b = Square::new(rat(3), rat(4), rat(1));
        assert_eq!(cell_distance(Metric::L2, &a, &b), rat(13));
        assert_eq!(cell_distance(Metric::L1, &a, &b), rat(5));
        let c = Square::new(rat(1), rat(0), rat(1));
        assert_eq!(cell_distance(Metric::L2, &a, &c), rat(0));
    }
}
