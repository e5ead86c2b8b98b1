//! Fixed-point ball arithmetic with rigorous error radii.
//!
//! A [`PreciseReal`] is a midpoint `mid·2^-prec` together with a radius
//! `rad·2^-prec`; the true value always lies in `[mid − rad, mid + rad]·2^-prec`.
//! Every operation widens the radius enough to account for its own rounding, so a
//! comparison that succeeds on the balls is a certified comparison of the reals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;
/// Precision ceiling for retry loops.
pub const MAX_PRECISION: u32 = 4096;
/// Smallest accepted working precision.
pub const MIN_PRECISION: u32 = 64;

#[derive(Clone, Debug)]
pub struct PreciseReal {
    mid: BigInt,
    rad: BigUint,
    prec: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid decimal literal {0:?}")]
pub struct ParseDecimalError(pub String);

impl PreciseReal {
    pub fn zero(prec: u32) -> Self {
        PreciseReal { mid: BigInt::zero(), rad: BigUint::zero(), prec }
    }

    pub fn from_int(value: impl Into<BigInt>, prec: u32) -> Self {
        PreciseReal { mid: value.into() << prec, rad: BigUint::zero(), prec }
    }

    pub fn from_ratio(value: &BigRational, prec: u32) -> Self {
        let scaled = value.numer() << prec;
        let (q, r) = scaled.div_mod_floor(value.denom());
        let rad = if r.is_zero() { BigUint::zero() } else { BigUint::one() };
        PreciseReal { mid: q, rad, prec }
    }

    /// Ball `[lo, hi]·2^-prec`.
    fn from_bounds(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        let mid: BigInt = (&lo + &hi) >> 1u32;
        let rad = (&hi - &mid).magnitude().clone();
        PreciseReal { mid, rad, prec }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    fn lower_ulps(&self) -> BigInt {
        &self.mid - BigInt::from(self.rad.clone())
    }

    fn upper_ulps(&self) -> BigInt {
        &self.mid + BigInt::from(self.rad.clone())
    }

    /// Re-expresses the ball at another precision; going down widens the radius.
    pub fn with_precision(&self, prec: u32) -> Self {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let shift = prec - self.prec;
                PreciseReal { mid: &self.mid << shift, rad: &self.rad << shift, prec }
            }
            Ordering::Less => {
                let shift = self.prec - prec;
                let mid = &self.mid >> shift;
                let rad = ceil_shr(&self.rad, shift) + 1u32;
                PreciseReal { mid, rad, prec }
            }
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let prec = self.prec.max(other.prec);
        (self.with_precision(prec), other.with_precision(prec))
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.mid, self.prec)
    }

    /// Upper bound on the distance between the midpoint and the true value.
    pub fn error_bound(&self) -> f64 {
        let r = BigInt::from(self.rad.clone());
        ratio_to_f64(&r, self.prec) * (1.0 + 1e-12)
    }

    /// Midpoint as an exact rational.
    pub fn midpoint(&self) -> BigRational {
        BigRational::new(self.mid.clone(), BigInt::one() << self.prec)
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(self.lower_ulps(), BigInt::one() << self.prec)
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(self.upper_ulps(), BigInt::one() << self.prec)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lower_ulps().is_positive() && !self.upper_ulps().is_negative()
    }

    pub fn is_certainly_positive(&self) -> bool {
        self.lower_ulps().is_positive()
    }

    pub fn is_certainly_negative(&self) -> bool {
        self.upper_ulps().is_negative()
    }

    /// Certified ordering, or `None` when the balls overlap.
    pub fn certified_cmp(&self, other: &Self) -> Option<Ordering> {
        let (a, b) = self.aligned(other);
        if a.upper_ulps() < b.lower_ulps() {
            Some(Ordering::Less)
        } else if a.lower_ulps() > b.upper_ulps() {
            Some(Ordering::Greater)
        } else if a.rad.is_zero() && b.rad.is_zero() && a.mid == b.mid {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certified ordering against an exact rational.
    pub fn certified_cmp_ratio(&self, value: &BigRational) -> Option<Ordering> {
        let lower = self.lower();
        let upper = self.upper();
        if upper < *value {
            Some(Ordering::Less)
        } else if lower > *value {
            Some(Ordering::Greater)
        } else if lower == upper {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Whether `|self − other|` is certainly below `2^-bits`.
    pub fn certainly_within(&self, other: &Self, bits: u32) -> bool {
        let diff = self - other;
        let bound = diff.mid.magnitude() + &diff.rad;
        // |diff| ≤ bound·2^-prec < 2^-bits
        let limit = if diff.prec >= bits { BigUint::one() << (diff.prec - bits) } else { BigUint::zero() };
        bound < limit
    }

    /// Multiplication by `2^k`.
    pub fn mul_pow2(&self, k: i32) -> Self {
        if k >= 0 {
            PreciseReal { mid: &self.mid << k as u32, rad: &self.rad << k as u32, prec: self.prec }
        } else {
            let s = (-k) as u32;
            PreciseReal { mid: &self.mid >> s, rad: ceil_shr(&self.rad, s) + 1u32, prec: self.prec }
        }
    }

    pub fn mul_int(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        PreciseReal { mid: &self.mid * &k, rad: &self.rad * k.magnitude(), prec: self.prec }
    }

    pub fn div_int(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        assert!(!k.is_zero(), "division by zero");
        let (mid, rem) = self.mid.div_mod_floor(&k);
        let kmag = k.magnitude();
        let mut rad = self.rad.div_ceil(kmag);
        if !rem.is_zero() {
            rad += 1u32;
        }
        PreciseReal { mid, rad, prec: self.prec }
    }

    /// Quotient; panics if the divisor ball contains zero.
    pub fn div(&self, other: &Self) -> Self {
        let (x, y) = self.aligned(other);
        let p = x.prec;
        let ym = y.mid.magnitude().clone();
        assert!(ym > y.rad, "division by a ball containing zero");
        let num = &x.mid << p;
        let mid = num.div_floor(&y.mid);
        // |x/y − X/Y| ≤ 2^p (r1|m2| + |m1| r2) / (|m2| (|m2| − r2)) ulps.
        let err_num = ((&x.rad * &ym) + (x.mid.magnitude() * &y.rad)) << p;
        let err_den = &ym * (&ym - &y.rad);
        let rad = err_num.div_ceil(&err_den) + 1u32;
        PreciseReal { mid, rad, prec: p }
    }

    /// Smallest ball containing both balls.
    pub fn hull(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let lo = a.lower_ulps().min(b.lower_ulps());
        let hi = a.upper_ulps().max(b.upper_ulps());
        PreciseReal::from_bounds(lo, hi, a.prec)
    }

    /// Enclosure of `max(self, other)`.
    pub fn max(&self, other: &Self) -> Self {
        match self.certified_cmp(other) {
            Some(std::cmp::Ordering::Less) => other.clone(),
            Some(_) => self.clone(),
            None => self.hull(other),
        }
    }

    pub fn abs(&self) -> Self {
        let lo = self.lower_ulps();
        let hi = self.upper_ulps();
        if !lo.is_negative() {
            self.clone()
        } else if !hi.is_positive() {
            -self
        } else {
            let top = lo.magnitude().max(hi.magnitude()).clone();
            PreciseReal::from_bounds(BigInt::zero(), BigInt::from(top), self.prec)
        }
    }

    /// Square root; the negative part of the ball, if any, is clamped to zero.
    pub fn sqrt(&self) -> Self {
        let p = self.prec;
        let lo = self.lower_ulps().max(BigInt::zero());
        let hi = self.upper_ulps().max(BigInt::zero());
        let s_lo = (lo << p).sqrt();
        let s_hi = (hi << p).sqrt() + 1u32;
        PreciseReal::from_bounds(s_lo, s_hi, p)
    }

    pub fn exp(&self) -> Self {
        let p = self.prec;
        let lo = exp_point(&self.lower_ulps(), p);
        let hi = exp_point(&self.upper_ulps(), p);
        PreciseReal::from_bounds(lo.lower_ulps(), hi.upper_ulps(), p)
    }

    /// Natural logarithm; panics unless the ball is strictly positive.
    pub fn ln(&self) -> Self {
        assert!(self.is_certainly_positive(), "logarithm of a non-positive ball");
        let p = self.prec;
        let lo = ln_point(&self.lower_ulps(), p);
        let hi = ln_point(&self.upper_ulps(), p);
        PreciseReal::from_bounds(lo.lower_ulps(), hi.upper_ulps(), p)
    }

    pub fn cosh(&self) -> Self {
        (&self.exp() + &(-self).exp()).mul_pow2(-1)
    }

    /// `ln(x + √(x² − 1))`; the part of the ball below 1 is clamped to 1.
    pub fn arccosh(&self) -> Self {
        let one = PreciseReal::from_int(1, self.prec);
        let x = if self.lower_ulps() < one.mid {
            let hi = self.upper_ulps().max(one.mid.clone());
            PreciseReal::from_bounds(one.mid.clone(), hi, self.prec)
        } else {
            self.clone()
        };
        let inner = &(&x * &x) - &one;
        (&x + &inner.sqrt()).ln()
    }

    /// Decimal rendering of the midpoint with `sig` significant digits.
    ///
    /// Values with magnitude below 1e-4 use exponent notation (`6.1e-17`).
    pub fn to_decimal_string(&self, sig: usize) -> String {
        format_decimal(&self.mid, self.prec, sig.max(1))
    }
}

impl fmt::Display for PreciseReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().unwrap_or(20);
        write!(f, "{}", self.to_decimal_string(sig))
    }
}

impl<'a> Add<&'a PreciseReal> for &'a PreciseReal {
    type Output = PreciseReal;
    fn add(self, rhs: &PreciseReal) -> PreciseReal {
        let (a, b) = self.aligned(rhs);
        PreciseReal { mid: a.mid + b.mid, rad: a.rad + b.rad, prec: a.prec }
    }
}

impl<'a> Sub<&'a PreciseReal> for &'a PreciseReal {
    type Output = PreciseReal;
    fn sub(self, rhs: &PreciseReal) -> PreciseReal {
        let (a, b) = self.aligned(rhs);
        PreciseReal { mid: a.mid - b.mid, rad: a.rad + b.rad, prec: a.prec }
    }
}

impl<'a> Mul<&'a PreciseReal> for &'a PreciseReal {
    type Output = PreciseReal;
    fn mul(self, rhs: &PreciseReal) -> PreciseReal {
        let (a, b) = self.aligned(rhs);
        let p = a.prec;
        let full = &a.mid * &b.mid;
        let mid = &full >> p;
        let spread = a.mid.magnitude() * &b.rad + b.mid.magnitude() * &a.rad + &a.rad * &b.rad;
        let mut rad = ceil_shr(&spread, p);
        if (&mid << p) != full {
            rad += 1u32;
        }
        PreciseReal { mid, rad, prec: p }
    }
}

impl Add for PreciseReal {
    type Output = PreciseReal;
    fn add(self, rhs: PreciseReal) -> PreciseReal {
        &self + &rhs
    }
}

impl Sub for PreciseReal {
    type Output = PreciseReal;
    fn sub(self, rhs: PreciseReal) -> PreciseReal {
        &self - &rhs
    }
}

impl Mul for PreciseReal {
    type Output = PreciseReal;
    fn mul(self, rhs: PreciseReal) -> PreciseReal {
        &self * &rhs
    }
}

impl Neg for &PreciseReal {
    type Output = PreciseReal;
    fn neg(self) -> PreciseReal {
        PreciseReal { mid: -&self.mid, rad: self.rad.clone(), prec: self.prec }
    }
}

impl Neg for PreciseReal {
    type Output = PreciseReal;
    fn neg(self) -> PreciseReal {
        -&self
    }
}

fn ceil_shr(x: &BigUint, shift: u32) -> BigUint {
    if shift == 0 {
        return x.clone();
    }
    let mask = (BigUint::one() << shift) - 1u32;
    (x + mask) >> shift
}

fn ratio_to_f64(m: &BigInt, prec: u32) -> f64 {
    let bits = m.bits();
    if bits <= 1000 {
        m.to_f64().unwrap_or(0.0) * (-(prec as f64)).exp2()
    } else {
        let drop = bits - 60;
        (m >> drop).to_f64().unwrap_or(0.0) * (drop as f64 - prec as f64).exp2()
    }
}

/// `e^x` for the exact fixed-point value `x·2^-prec`.
fn exp_point(x: &BigInt, prec: u32) -> PreciseReal {
    if x.is_zero() {
        return PreciseReal::from_int(1, prec);
    }
    let approx = ratio_to_f64(x, prec);
    let halvings = (approx.abs() + 1.0).log2().ceil().max(0.0) as u32 + 8;
    let growth = if approx > 0.0 { (approx * std::f64::consts::LOG2_E).ceil() as u32 } else { 0 };
    let guard = halvings + growth + 48;
    let wp = prec + guard;
    // y = x / 2^halvings, exact at precision wp; |y| < 2^-8.
    let y = PreciseReal { mid: x << (guard - halvings), rad: BigUint::zero(), prec: wp };
    let mut sum = PreciseReal::from_int(1, wp);
    let mut term = PreciseReal::from_int(1, wp);
    let mut n: u32 = 1;
    loop {
        term = (&term * &y).div_int(n);
        sum = &sum + &term;
        if term.mid.magnitude() <= &BigUint::one() {
            // Remaining tail ≤ |term|·|y|/(1 − |y|) < |term|.
            sum.rad += &term.rad + 1u32;
            break;
        }
        n += 1;
    }
    for _ in 0..halvings {
        sum = &sum * &sum;
    }
    sum.with_precision(prec)
}

/// `atanh(z) = z + z³/3 + …` for `0 ≤ z ≤ 1/3`.
fn atanh_small(z: &PreciseReal) -> PreciseReal {
    let z2 = z * z;
    let mut power = z.clone();
    let mut sum = z.clone();
    let mut k: u32 = 1;
    loop {
        power = &power * &z2;
        let term = power.div_int(2 * k + 1);
        sum = &sum + &term;
        if power.mid.magnitude() <= &BigUint::one() {
            // Tail ≤ |z|^{2k+3}/(1 − z²) < |power|.
            sum.rad += &power.rad + 1u32;
            break;
        }
        k += 1;
    }
    sum
}

fn ln2(prec: u32) -> PreciseReal {
    let third = PreciseReal::from_ratio(&BigRational::new(1.into(), 3.into()), prec);
    atanh_small(&third).mul_int(2)
}

/// `ln x` for the exact, strictly positive fixed-point value `x·2^-prec`.
fn ln_point(x: &BigInt, prec: u32) -> PreciseReal {
    debug_assert!(x.is_positive());
    // x·2^-prec = u·2^k with u ∈ [1, 2).
    let k = x.bits() as i64 - 1 - prec as i64;
    let wp = prec + 64 + k.max(0) as u32 + 64 - (k.unsigned_abs().leading_zeros());
    let shift = wp as i64 - prec as i64 - k;
    debug_assert!(shift >= 0);
    let u = PreciseReal { mid: x << shift as u32, rad: BigUint::zero(), prec: wp };
    let one = PreciseReal::from_int(1, wp);
    let z = (&u - &one).div(&(&u + &one));
    let ln_u = atanh_small(&z).mul_int(2);
    let result = &ln_u + &ln2(wp).mul_int(k);
    result.with_precision(prec)
}

fn format_decimal(mid: &BigInt, prec: u32, sig: usize) -> String {
    if mid.is_zero() {
        return "0".to_string();
    }
    let negative = mid.sign() == Sign::Minus;
    let mag = BigInt::from(mid.magnitude().clone());
    let denom = BigInt::one() << prec;
    // initial guess for floor(log10 |v|)
    let log2v = mag.bits() as f64 - 1.0 - prec as f64;
    let mut e10 = (log2v * std::f64::consts::LOG10_2).floor() as i64;
    let lower_bound = BigInt::from(10u32).pow(sig as u32 - 1);
    let upper_bound = BigInt::from(10u32).pow(sig as u32);
    let digits = loop {
        let k = sig as i64 - 1 - e10;
        let (num, den) = if k >= 0 {
            (&mag * BigInt::from(10u32).pow(k as u32), denom.clone())
        } else {
            (mag.clone(), &denom * BigInt::from(10u32).pow((-k) as u32))
        };
        // round half up
        let n = ((num << 1u32) + &den).div_floor(&(den << 1u32));
        if n >= upper_bound {
            e10 += 1;
        } else if n < lower_bound {
            e10 -= 1;
        } else {
            break n.to_string();
        }
    };
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if e10 < -4 {
        out.push_str(&digits[..1]);
        if sig > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        out.push_str(&format!("e{e10}"));
    } else if e10 < 0 {
        out.push_str("0.");
        out.push_str(&"0".repeat((-e10 - 1) as usize));
        out.push_str(&digits);
    } else {
        let int_len = e10 as usize + 1;
        if int_len >= sig {
            out.push_str(&digits);
            out.push_str(&"0".repeat(int_len - sig));
        } else {
            out.push_str(&digits[..int_len]);
            out.push('.');
            out.push_str(&digits[int_len..]);
        }
    }
    out
}

/// Parses a decimal literal such as `4.6`, `-0.125` or `1e-3` exactly.
pub fn parse_decimal(s: &str) -> Result<BigRational, ParseDecimalError> {
    let err = || ParseDecimalError(s.to_string());
    let t = s.trim();
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => (&t[..pos], t[pos + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (negative, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = digits.parse().map_err(|_| err())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    Ok(if scale >= 0 {
        BigRational::from_integer(numer * ten.pow(scale as u32))
    } else {
        BigRational::new(numer, ten.pow((-scale) as u32))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: &PreciseReal, expected: f64, tol: f64) {
        assert!((x.to_f64() - expected).abs() <= tol, "{} vs {expected}", x.to_f64());
    }

    fn r(num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    #[test]
    fn exp_and_ln_match_reference_values() {
        let p = 256;
        close(&PreciseReal::from_int(1, p).exp(), std::f64::consts::E, 1e-15);
        close(&PreciseReal::from_int(-5, p).exp(), 6.737946999085467e-3, 1e-18);
        close(&PreciseReal::from_int(2, p).ln(), std::f64::consts::LN_2, 1e-16);
        close(&PreciseReal::from_ratio(&r(112, 3), p).neg().exp(), 6.114195798462956e-17, 1e-30);
        close(&PreciseReal::from_int(1000, p).ln(), 1000f64.ln(), 1e-13);
        close(&PreciseReal::from_ratio(&r(1, 1000), p).ln(), (0.001f64).ln(), 1e-14);
    }

    #[test]
    fn exp_ln_round_trip_is_tight() {
        let p = 256;
        for v in [r(1, 7), r(5, 2), r(-37, 3), r(40, 1)] {
            let x = PreciseReal::from_ratio(&v, p);
            let y = x.exp().ln();
            assert!(x.certainly_within(&y, 200), "{v}");
            assert!(y.error_bound() < 1e-60);
        }
    }

    #[test]
    fn arccosh_of_two_is_ln_two_plus_sqrt_three() {
        let p = 256;
        let a = PreciseReal::from_int(2, p).arccosh();
        let three = PreciseReal::from_int(3, p);
        let b = (&PreciseReal::from_int(2, p) + &three.sqrt()).ln();
        assert!(a.certainly_within(&b, 240));
        close(&a, 1.3169578969248166, 1e-15);
        assert!(PreciseReal::from_int(1, p).arccosh().certainly_within(&PreciseReal::zero(p), 240));
    }

    #[test]
    fn sqrt_and_division() {
        let p = 128;
        let two = PreciseReal::from_int(2, p);
        let s = two.sqrt();
        let sq = &s * &s;
        assert!(sq.certainly_within(&two, 120));
        let q = PreciseReal::from_int(1, p).div(&PreciseReal::from_int(3, p));
        assert_eq!(q.certified_cmp_ratio(&r(1, 3)), None);
        assert_eq!(q.certified_cmp_ratio(&r(1, 2)), Some(Ordering::Less));
        assert_eq!(q.certified_cmp_ratio(&r(1, 4)), Some(Ordering::Greater));
    }

    #[test]
    fn radius_reflects_precision() {
        let lo = PreciseReal::from_int(5, 64).exp();
        let hi = PreciseReal::from_int(5, 1024).exp();
        assert!(lo.error_bound() > hi.error_bound());
        assert!(hi.error_bound() < 1e-290);
        assert_eq!(lo.certified_cmp(&hi), None);
    }

    #[test]
    fn decimal_formatting() {
        let p = 256;
        assert_eq!(PreciseReal::from_int(2, p).to_decimal_string(5), "2.0000");
        assert_eq!(PreciseReal::from_ratio(&r(-1, 8), p).to_decimal_string(3), "-0.125");
        assert_eq!(PreciseReal::from_ratio(&r(123456, 1), p).to_decimal_string(3), "123000");
        let tiny = PreciseReal::from_ratio(&r(112, 3), p).neg().exp();
        assert_eq!(tiny.to_decimal_string(4), "6.114e-17");
        assert_eq!(PreciseReal::from_ratio(&r(1, 1000), p).to_decimal_string(2), "0.0010");
        assert_eq!(PreciseReal::from_ratio(&r(99999, 100000), p).to_decimal_string(3), "1.00");
    }

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_decimal("4.6").unwrap(), r(23, 5));
        assert_eq!(parse_decimal("-0.125").unwrap(), r(-1, 8));
        assert_eq!(parse_decimal("5").unwrap(), r(5, 1));
        assert_eq!(parse_decimal("1e-3").unwrap(), r(1, 1000));
        assert_eq!(parse_decimal(".5").unwrap(), r(1, 2));
        assert!(parse_decimal("abc").is_err());
        assert!(parse_decimal("").is_err());
        assert!(parse_decimal("1.2.3").is_err());
    }
}
