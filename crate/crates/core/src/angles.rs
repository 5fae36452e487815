//! Exact angular order and cone predicates for rational direction vectors.
//!
//! Directions are nonzero rational vectors compared by angle counterclockwise
//! from `(1, 0)`, without ever normalizing or leaving the rationals.

use crate::num::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

/// A nonzero direction vector; only its angle matters.
pub type Dir = (Rat, Rat);

/// 0 for angles in `[0, pi)`, 1 for `[pi, 2 pi)`.
pub fn half(d: &Dir) -> u8 {
    if d.1.is_positive() || (d.1.is_zero() && d.0.is_positive()) {
        0
    } else {
        1
    }
}

pub fn cross(a: &Dir, b: &Dir) -> Rat {
    &a.0 * &b.1 - &a.1 * &b.0
}

pub fn dot(a: &Dir, b: &Dir) -> Rat {
    &a.0 * &b.0 + &a.1 * &b.1
}

/// Counterclockwise angular order starting at direction `(1, 0)`.
pub fn dir_cmp(a: &Dir, b: &Dir) -> Ordering {
    match half(a).cmp(&half(b)) {
        Ordering::Equal => {
            let c = cross(a, b);
            if c.is_positive() {
                Ordering::Less
            } else if c.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        }
        other => other,
    }
}

pub fn rot90ccw(d: &Dir) -> Dir {
    (-d.1.clone(), d.0.clone())
}

pub fn opp(d: &Dir) -> Dir {
    (-d.0.clone(), -d.1.clone())
}

/// A direction strictly between `a` and `b` counterclockwise, for a gap of at
/// most half a turn. Antipodal (or equal) inputs get a quarter turn from `a`.
pub fn between(a: &Dir, b: &Dir) -> Dir {
    let c = cross(a, b);
    if c.is_positive() {
        (&a.0 + &b.0, &a.1 + &b.1)
    } else {
        rot90ccw(a)
    }
}

/// Whether `d` lies in the closed cone spanned counterclockwise from `a` to
/// `b`, for a cone angle strictly below half a turn.
pub fn in_closed_cone(a: &Dir, b: &Dir, d: &Dir) -> bool {
    !cross(a, d).is_negative() && !cross(d, b).is_negative() && {
        // Exclude the antipodal sliver: inside the cone the dot product with
        // at least one generator is positive.
        dot(a, d).is_positive() || dot(b, d).is_positive()
    }
}

/// Primitive integer vector with the same direction, usable as a hash key.
pub fn canon(d: &Dir) -> (BigInt, BigInt) {
    let scale = d.0.denom().lcm(d.1.denom());
    let nx = d.0.numer() * (&scale / d.0.denom());
    let ny = d.1.numer() * (&scale / d.1.denom());
    let g = nx.gcd(&ny);
    if g.is_zero() {
        (nx, ny)
    } else {
        (nx / &g, ny / &g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, rat};

    fn d(x: i64, y: i64) -> Dir {
        (rat(x), rat(y))
    }

    #[test]
    fn full_circle_order() {
        let dirs =
            [d(1, 0), d(2, 1), d(0, 1), d(-1, 1), d(-1, 0), d(-1, -1), d(0, -1), d(1, -1)];
        for w in dirs.windows(2) {
            assert_eq!(dir_cmp(&w[0], &w[1]), Ordering::Less, "{w:?}");
        }
        assert_eq!(dir_cmp(&d(3, 1), &d(6, 2)), Ordering::Equal);
        assert_eq!(dir_cmp(&d(1, 1), &d(-1, -1)), Ordering::Less);
    }

    #[test]
    fn between_lands_inside() {
        let cases = [(d(1, 0), d(0, 1)), (d(1, 1), d(-1, 1)), (d(0, -1), d(1, 0))];
        for (a, b) in cases {
            let m = between(&a, &b);
            assert!(cross(&a, &m).is_positive());
            assert!(cross(&m, &b).is_positive());
        }
        // Antipodal gap: quarter turn.
        let m = between(&d(1, 0), &d(-1, 0));
        assert_eq!(dir_cmp(&m, &d(0, 1)), Ordering::Equal);
    }

    #[test]
    fn cone_membership() {
        let a = d(1, 0);
        let b = d(0, 1);
        assert!(in_closed_cone(&a, &b, &d(1, 1)));
        assert!(in_closed_cone(&a, &b, &d(1, 0)));
        assert!(in_closed_cone(&a, &b, &d(0, 1)));
        assert!(!in_closed_cone(&a, &b, &d(-1, 1)));
        assert!(!in_closed_cone(&a, &b, &d(-1, -1)));
        assert!(!in_closed_cone(&a, &b, &d(1, -1)));
        assert!(!in_closed_cone(&a, &b, &d(-1, 0)));
        assert!(!in_closed_cone(&a, &b, &d(0, -1)));
    }

    #[test]
    fn canonical_directions() {
        assert_eq!(canon(&(frac(2, 3), frac(-4, 3))), (1.into(), (-2).into()));
        assert_eq!(canon(&(rat(6), rat(4))), (3.into(), 2.into()));
        assert_eq!(canon(&(rat(0), frac(-7, 2))), (0.into(), (-1).into()));
    }
}
