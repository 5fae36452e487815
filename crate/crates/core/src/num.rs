//! Exact rational scalars plus a floating-point interval filter.
//!
//! Every quantity that decides a comparison anywhere in this crate is a
//! [`Rat`] (arbitrary-precision rational). Hot paths first evaluate the same
//! expression in outward-rounded `f64` interval arithmetic ([`Ival`]) and fall
//! back to the exact rational computation only when the interval straddles
//! zero, so results are bit-exact while most comparisons stay cheap.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::str::FromStr;

/// Exact rational number. All geometry in this crate is computed over these.
pub type Rat = num_rational::BigRational;

/// Shorthand for a rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for the rational `n / d`. Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Errors produced when parsing rational literals.
#[derive(Debug, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRatError(pub String);

/// Parses an exact rational from a decimal string (`"-12.5"`), an integer
/// string (`"42"`), or a fraction string (`"3/7"`). No precision is lost:
/// `"0.1"` becomes exactly 1/10.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let t = s.trim();
    let err = || ParseRatError(s.to_string());
    if t.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = t.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(den.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rat::new(n, d));
    }
    let (sign, body) = match t.as_bytes()[0] {
        b'-' => (-1, &t[1..]),
        b'+' => (1, &t[1..]),
        _ => (1, t),
    };
    if body.is_empty() {
        return Err(err());
    }
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let n = if digits.is_empty() {
        BigInt::zero()
    } else {
        BigInt::from_str(&digits).map_err(|_| err())?
    };
    let d = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(Rat::new(BigInt::from(sign) * n, d))
}

/// Canonical text form used in instance files: `"p/q"` fully reduced, or just
/// `"p"` when the denominator is one. `parse_rat(&format_rat(x)) == x` always.
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Renders `x` as a fixed-point decimal with `places` fractional digits,
/// rounding half to even. Used for the human-readable column of bound tables.
pub fn decimal_string(x: &Rat, places: u32) -> String {
    let neg = x.is_negative();
    let abs = x.abs();
    let scale = BigInt::from(10u32).pow(places);
    let scaled = abs * Rat::from_integer(scale.clone());
    let (q, r) = num_integer::Integer::div_rem(scaled.numer(), scaled.denom());
    let mut q: BigInt = q;
    let twice_r: BigInt = r * 2;
    match twice_r.cmp(scaled.denom()) {
        Ordering::Greater => q += 1,
        Ordering::Equal => {
            if num_integer::Integer::is_odd(&q) {
                q += 1;
            }
        }
        Ordering::Less => {}
    }
    let digits = q.to_string();
    let places = places as usize;
    let padded = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let split = padded.len() - places;
    let body = if places == 0 {
        padded
    } else {
        format!("{}.{}", &padded[..split], &padded[split..])
    };
    if neg && !body.bytes().all(|b| b == b'0' || b == b'.') {
        format!("-{body}")
    } else {
        body
    }
}

/// Best-effort `f64` value of a rational, for heuristics and diagnostics only.
pub fn rat_to_f64(x: &Rat) -> f64 {
    let i = Ival::from_rat(x);
    0.5 * (i.lo + i.hi)
}

/// Rational lower and upper bounds on `sqrt(x)` with absolute error at most
/// `2^-shift` times the denominator scale. Requires `x >= 0`.
pub fn sqrt_bounds(x: &Rat, shift: u32) -> (Rat, Rat) {
    assert!(!x.is_negative(), "sqrt_bounds needs a nonnegative input");
    // sqrt(n/d) = sqrt(n*d) / d; scale by 4^shift so the integer sqrt carries
    // `shift` extra bits.
    let n = x.numer().magnitude().clone();
    let d = x.denom().magnitude().clone();
    let scaled: BigUint = (&n * &d) << (2 * shift);
    let root = scaled.sqrt();
    let den = BigInt::from(d) << shift;
    let lo = Rat::new(BigInt::from(root.clone()), den.clone());
    let hi = Rat::new(BigInt::from(root + 1u32), den);
    (lo, hi)
}

fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let bits = x.to_bits();
    if x > 0.0 {
        f64::from_bits(bits + 1)
    } else {
        f64::from_bits(bits - 1)
    }
}

fn next_down(x: f64) -> f64 {
    -next_up(-x)
}

/// Closed `f64` interval with outward rounding, guaranteed to contain the
/// exact value of the expression it mirrors.
#[derive(Clone, Copy, Debug)]
pub struct Ival {
    pub lo: f64,
    pub hi: f64,
}

impl Ival {
    pub const ZERO: Ival = Ival { lo: 0.0, hi: 0.0 };

    /// Interval for a value exactly representable in `f64` (small integers,
    /// dyadics). The caller asserts exactness.
    pub fn exact(x: f64) -> Ival {
        debug_assert!(x.is_finite());
        Ival { lo: x, hi: x }
    }

    pub fn from_rat(x: &Rat) -> Ival {
        let n = bigint_to_ival(x.numer());
        let d = bigint_to_ival(x.denom());
        n / d
    }

    fn widen(self) -> Ival {
        Ival { lo: next_down(self.lo), hi: next_up(self.hi) }
    }

    pub fn sq(self) -> Ival {
        if self.lo >= 0.0 {
            Ival { lo: self.lo * self.lo, hi: self.hi * self.hi }.widen()
        } else if self.hi <= 0.0 {
            Ival { lo: self.hi * self.hi, hi: self.lo * self.lo }.widen()
        } else {
            let m = (-self.lo).max(self.hi);
            Ival { lo: 0.0, hi: m * m }.widen()
        }
    }

    /// Square root; the input is semantically nonnegative, so a slightly
    /// negative lower bound is clamped to zero.
    pub fn sqrt(self) -> Ival {
        let lo = if self.lo <= 0.0 { 0.0 } else { next_down(self.lo.sqrt()) };
        let hi = if self.hi <= 0.0 { 0.0 } else { next_up(self.hi.sqrt()) };
        Ival { lo, hi }
    }

    /// Sign of every value in the interval, or `None` if it is ambiguous.
    pub fn sign(self) -> Option<Ordering> {
        if self.lo > 0.0 {
            Some(Ordering::Greater)
        } else if self.hi < 0.0 {
            Some(Ordering::Less)
        } else if self.lo == 0.0 && self.hi == 0.0 {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn cmp_ival(self, o: Ival) -> Option<Ordering> {
        (self - o).sign()
    }
}

impl std::ops::Add for Ival {
    type Output = Ival;

    fn add(self, o: Ival) -> Ival {
        Ival { lo: self.lo + o.lo, hi: self.hi + o.hi }.widen()
    }
}

impl std::ops::Sub for Ival {
    type Output = Ival;

    fn sub(self, o: Ival) -> Ival {
        Ival { lo: self.lo - o.hi, hi: self.hi - o.lo }.widen()
    }
}

impl std::ops::Neg for Ival {
    type Output = Ival;

    fn neg(self) -> Ival {
        Ival { lo: -self.hi, hi: -self.lo }
    }
}

impl std::ops::Mul for Ival {
    type Output = Ival;

    fn mul(self, o: Ival) -> Ival {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in c {
            if v.is_nan() {
                return Ival { lo: f64::NEG_INFINITY, hi: f64::INFINITY };
            }
            lo = lo.min(v);
            hi = hi.max(v);
        }
        Ival { lo, hi }.widen()
    }
}

impl std::ops::Div for Ival {
    type Output = Ival;

    fn div(self, o: Ival) -> Ival {
        if o.lo <= 0.0 && o.hi >= 0.0 {
            return Ival { lo: f64::NEG_INFINITY, hi: f64::INFINITY };
        }
        let c = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in c {
            if v.is_nan() {
                return Ival { lo: f64::NEG_INFINITY, hi: f64::INFINITY };
            }
            lo = lo.min(v);
            hi = hi.max(v);
        }
        Ival { lo, hi }.widen()
    }
}

fn bigint_to_ival(x: &BigInt) -> Ival {
    match x.to_f64() {
        Some(v) if v.is_finite() => {
            // BigInt -> f64 conversion rounds; pad generously.
            let mut iv = Ival { lo: v, hi: v };
            for _ in 0..2 {
                iv = iv.widen();
            }
            iv
        }
        _ => match x.sign() {
            Sign::Minus => Ival { lo: f64::NEG_INFINITY, hi: f64::MIN },
            _ => Ival { lo: f64::MAX, hi: f64::INFINITY },
        },
    }
}

/// A rational paired with a cached enclosing interval, for filtered predicates.
#[derive(Clone, Debug)]
pub struct RatF {
    pub q: Rat,
    pub f: Ival,
}

impl RatF {
    pub fn new(q: Rat) -> RatF {
        let f = Ival::from_rat(&q);
        RatF { q, f }
    }

    pub fn zero() -> RatF {
        RatF { q: Rat::zero(), f: Ival::ZERO }
    }
}

/// Compares two rationals through their cached intervals, falling back to the
/// exact comparison only when the intervals overlap.
pub fn cmp_filtered(a: &RatF, b: &RatF) -> Ordering {
    match a.f.cmp_ival(b.f) {
        Some(o) => o,
        None => a.q.cmp(&b.q),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_decimal_and_fraction() {
        assert_eq!(parse_rat("0.125").unwrap(), frac(1, 8));
        assert_eq!(parse_rat("-12.5").unwrap(), frac(-25, 2));
        assert_eq!(parse_rat("3/7").unwrap(), frac(3, 7));
        assert_eq!(parse_rat("-3/7").unwrap(), frac(-3, 7));
        assert_eq!(parse_rat("42").unwrap(), rat(42));
        assert_eq!(parse_rat("+0.3").unwrap(), frac(3, 10));
        assert!(parse_rat("").is_err());
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("1.2.3").is_err());
        assert!(parse_rat("abc").is_err());
    }

    #[test]
    fn format_round_trips() {
        for x in [frac(3, 7), rat(-4), frac(-25, 2), Rat::zero(), frac(22, 11)] {
            assert_eq!(parse_rat(&format_rat(&x)).unwrap(), x);
        }
        assert_eq!(format_rat(&frac(22, 11)), "2");
        assert_eq!(format_rat(&frac(-3, 9)), "-1/3");
    }

    #[test]
    fn decimal_half_even() {
        assert_eq!(decimal_string(&frac(1, 3), 6), "0.333333");
        assert_eq!(decimal_string(&frac(2, 3), 6), "0.666667");
        assert_eq!(decimal_string(&frac(165, 8), 6), "20.625000");
        assert_eq!(decimal_string(&frac(10, 21), 6), "0.476190");
        // Exact ties round to the even neighbor.
        assert_eq!(decimal_string(&frac(5, 10_000_000), 6), "0.000000");
        assert_eq!(decimal_string(&frac(15, 10_000_000), 6), "0.000002");
        assert_eq!(decimal_string(&frac(25, 10_000_000), 6), "0.000002");
        assert_eq!(decimal_string(&frac(-1, 2), 0), "0");
        assert_eq!(decimal_string(&frac(-3, 2), 0), "-2");
        assert_eq!(decimal_string(&rat(7), 2), "7.00");
    }

    #[test]
    fn interval_contains_exact_value() {
        let a = frac(1, 3);
        let b = frac(-7, 11);
        let ia = Ival::from_rat(&a);
        let ib = Ival::from_rat(&b);
        let sum = &a + &b;
        let isum = ia + ib;
        let (slo, shi) = (Rat::from_float(isum.lo).unwrap(), Rat::from_float(isum.hi).unwrap());
        assert!(slo <= sum && sum <= shi);
        let prod = &a * &b;
        let iprod = ia * ib;
        let (plo, phi) = (Rat::from_float(iprod.lo).unwrap(), Rat::from_float(iprod.hi).unwrap());
        assert!(plo <= prod && prod <= phi);
    }

    #[test]
    fn interval_sign_is_conservative() {
        let tiny = Rat::new(BigInt::one(), BigInt::from(10u8).pow(40));
        let i = Ival::from_rat(&tiny);
        match i.sign() {
            Some(Ordering::Greater) | None => {}
            s => panic!("unsound sign {s:?}"),
        }
        assert_eq!((Ival::exact(2.0) - Ival::exact(1.0)).sign(), Some(Ordering::Greater));
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let x = frac(2, 1);
        let (lo, hi) = sqrt_bounds(&x, 30);
        assert!(&lo * &lo <= x);
        assert!(&hi * &hi >= x);
        assert!(&hi - &lo < frac(1, 1 << 29));
        let (lo0, hi0) = sqrt_bounds(&rat(0), 10);
        assert!(lo0.is_zero());
        assert!(hi0 > Rat::zero());
    }

    #[test]
    fn filtered_compare_matches_exact() {
        let xs = [frac(1, 3), frac(2, 6), frac(-5, 4), rat(0), frac(7, 2)];
        for a in &xs {
            for b in &xs {
                let fa = RatF::new(a.clone());
                let fb = RatF::new(b.clone());
                assert_eq!(cmp_filtered(&fa, &fb), a.cmp(b));
            }
        }
    }
}
