//! Exact two-variable linear programming by randomized incremental insertion.
//!
//! Used to pick a canonical point inside an intersection of halfplanes. All
//! arithmetic is rational, so feasibility answers are exact. The feasible
//! region is always intersected with an explicit bounding box, which keeps
//! every intermediate subproblem bounded.

use crate::geometry::Point;
use crate::num::Rat;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The closed constraint `a.0 * x + a.1 * y <= b`.
#[derive(Clone, Debug)]
pub struct Halfplane {
    pub a: (Rat, Rat),
    pub b: Rat,
}

impl Halfplane {
    pub fn new(ax: Rat, ay: Rat, b: Rat) -> Halfplane {
        Halfplane { a: (ax, ay), b }
    }

    pub fn satisfied_by(&self, p: &Point) -> bool {
        &self.a.0 * &p.x + &self.a.1 * &p.y <= self.b
    }
}

/// Closed axis-aligned search box for the LP.
#[derive(Clone, Debug)]
pub struct Box2 {
    pub x_min: Rat,
    pub x_max: Rat,
    pub y_min: Rat,
    pub y_max: Rat,
}

impl Box2 {
    pub fn new(x_min: Rat, x_max: Rat, y_min: Rat, y_max: Rat) -> Box2 {
        Box2 { x_min, x_max, y_min, y_max }
    }

    fn halfplanes(&self) -> [Halfplane; 4] {
        [
            Halfplane::new(crate::num::rat(-1), Rat::zero(), -self.x_min.clone()),
            Halfplane::new(crate::num::rat(1), Rat::zero(), self.x_max.clone()),
            Halfplane::new(Rat::zero(), crate::num::rat(-1), -self.y_min.clone()),
            Halfplane::new(Rat::zero(), crate::num::rat(1), self.y_max.clone()),
        ]
    }
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("constraint system is infeasible")]
    Infeasible,
}

/// Returns the lexicographically smallest point (minimum `x`, then minimum
/// `y`) inside `bounds` that satisfies every constraint, or reports that no
/// such point exists.
pub fn lex_min_point(bounds: &Box2, constraints: &[Halfplane]) -> Result<Point, LpError> {
    if bounds.x_min > bounds.x_max || bounds.y_min > bounds.y_max {
        return Err(LpError::Infeasible);
    }
    let mut all: Vec<Halfplane> = bounds.halfplanes().to_vec();
    let mut order: Vec<usize> = Vec::new();
    for h in constraints {
        if h.a.0.is_zero() && h.a.1.is_zero() {
            if h.b.is_negative() {
                return Err(LpError::Infeasible);
            }
            continue;
        }
        order.push(all.len());
        all.push(h.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    order.shuffle(&mut rng);

    let mut current = Point::new(bounds.x_min.clone(), bounds.y_min.clone());
    // The box constraints are active from the start; insert the rest one at a
    // time, re-solving on the line of each violated constraint.
    let mut active: Vec<usize> = vec![0, 1, 2, 3];
    for idx in order {
        if !all[idx].satisfied_by(&current) {
            current = solve_on_line(&all, &active, idx)?;
        }
        active.push(idx);
    }
    Ok(current)
}

/// Lexicographic minimum over the line `a . x = b` of constraint `idx`,
/// subject to the constraints in `active`. Every call is bounded because
/// `active` always contains the box.
fn solve_on_line(all: &[Halfplane], active: &[usize], idx: usize) -> Result<Point, LpError> {
    let h = &all[idx];
    let (ax, ay) = (&h.a.0, &h.a.1);
    // Anchor point on the line and the direction along it.
    let p0 = if ax.abs() >= ay.abs() {
        Point::new(&h.b / ax, Rat::zero())
    } else {
        Point::new(Rat::zero(), &h.b / ay)
    };
    let d = (-ay.clone(), ax.clone());

    // Want the smallest x, then smallest y, along p(t) = p0 + t d. Decide
    // which end of the feasible t interval that is.
    let want_low_t = if d.0.is_positive() {
        true
    } else if d.0.is_negative() {
        false
    } else {
        d.1.is_positive()
    };

    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    for &j in active {
        let g = &all[j];
        let coeff = &g.a.0 * &d.0 + &g.a.1 * &d.1;
        let rhs = &g.b - (&g.a.0 * &p0.x + &g.a.1 * &p0.y);
        if coeff.is_zero() {
            if rhs.is_negative() {
                return Err(LpError::Infeasible);
            }
            continue;
        }
        let bound = &rhs / &coeff;
        if coeff.is_positive() {
            if hi.as_ref().is_none_or(|cur| bound < *cur) {
                hi = Some(bound);
            }
        } else if lo.as_ref().is_none_or(|cur| bound > *cur) {
            lo = Some(bound);
        }
    }
    let (lo, hi) = match (lo, hi) {
        (Some(l), Some(u)) => (l, u),
        // The box bounds every line it meets in both directions.
        _ => return Err(LpError::Infeasible),
    };
    if lo > hi {
        return Err(LpError::Infeasible);
    }
    let t = if want_low_t { lo } else { hi };
    Ok(Point::new(&p0.x + &t * &d.0, &p0.y + &t * &d.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, rat};

    fn bx() -> Box2 {
        Box2::new(rat(-10), rat(10), rat(-10), rat(10))
    }

    #[test]
    fn box_alone_gives_corner() {
        let p = lex_min_point(&bx(), &[]).unwrap();
        assert_eq!(p, Point::new(rat(-10), rat(-10)));
    }

    #[test]
    fn halfplane_cuts_corner() {
        // x + y >= 1, i.e. -x - y <= -1.
        let cs = vec![Halfplane::new(rat(-1), rat(-1), rat(-1))];
        let p = lex_min_point(&bx(), &cs).unwrap();
        assert_eq!(p, Point::new(rat(-9), rat(10)));
        assert!(cs[0].satisfied_by(&p));
    }

    #[test]
    fn single_point_region() {
        let cs = vec![
            Halfplane::new(rat(1), rat(0), frac(1, 3)),
            Halfplane::new(rat(-1), rat(0), frac(-1, 3)),
            Halfplane::new(rat(0), rat(1), frac(2, 7)),
            Halfplane::new(rat(0), rat(-1), frac(-2, 7)),
        ];
        let p = lex_min_point(&bx(), &cs).unwrap();
        assert_eq!(p, Point::new(frac(1, 3), frac(2, 7)));
    }

    #[test]
    fn infeasible_detected() {
        let cs = vec![
            Halfplane::new(rat(1), rat(0), rat(-1)),
            Halfplane::new(rat(-1), rat(0), rat(0)),
        ];
        assert_eq!(lex_min_point(&bx(), &cs).unwrap_err(), LpError::Infeasible);
        let outside = vec![Halfplane::new(rat(-1), rat(0), rat(-50))];
        assert_eq!(lex_min_point(&bx(), &outside).unwrap_err(), LpError::Infeasible);
    }

    #[test]
    fn zero_normal_constraints() {
        let trivially_true = vec![Halfplane::new(rat(0), rat(0), rat(3))];
        assert!(lex_min_point(&bx(), &trivially_true).is_ok());
        let trivially_false = vec![Halfplane::new(rat(0), rat(0), rat(-3))];
        assert_eq!(lex_min_point(&bx(), &trivially_false).unwrap_err(), LpError::Infeasible);
    }

    #[test]
    fn matches_vertex_enumeration_on_random_systems() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..60 {
            let mut cs = Vec::new();
            for _ in 0..8 {
                let ax = rat(rng.gen_range(-5..=5));
                let ay = rat(rng.gen_range(-5..=5));
                let b = rat(rng.gen_range(-8..=20));
                cs.push(Halfplane::new(ax, ay, b));
            }
            let got = lex_min_point(&bx(), &cs);
            let want = brute_lex_min(&bx(), &cs);
            match (got, want) {
                (Ok(p), Some(q)) => assert_eq!(p, q),
                (Err(LpError::Infeasible), None) => {}
                (g, w) => panic!("mismatch: {g:?} vs {w:?}"),
            }
        }
    }

    /// Lexicographic minimum by checking every pairwise line intersection.
    fn brute_lex_min(bounds: &Box2, cs: &[Halfplane]) -> Option<Point> {
        let mut all: Vec<Halfplane> = bounds.halfplanes().to_vec();
        all.extend(cs.iter().cloned());
        let mut best: Option<Point> = None;
        let mut consider = |p: Point| {
            if all.iter().all(|c| c.satisfied_by(&p)) {
                let better = match &best {
                    None => true,
                    Some(b) => (&p.x, &p.y) < (&b.x, &b.y),
                };
                if better {
                    best = Some(p);
                }
            }
        };
        for i in 0..all.len() {
            for j in (i + 1)..all.len() {
                let (a1, b1) = (&all[i].a, &all[i].b);
                let (a2, b2) = (&all[j].a, &all[j].b);
                let det = &a1.0 * &a2.1 - &a1.1 * &a2.0;
                if det.is_zero() {
                    continue;
                }
                let x = (b1 * &a2.1 - &a1.1 * b2) / &det;
                let y = (&a1.0 * b2 - b1 * &a2.0) / &det;
                consider(Point::new(x, y));
            }
        }
        best
    }
}
