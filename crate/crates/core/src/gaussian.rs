//! Exact Gaussian integers and 2×2 matrices over them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// An element `re + im·i` of ℤ[i] with arbitrary-size parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInt { re: re.into(), im: im.into() }
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn i() -> Self {
        Self::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianInt { re: self.re.clone(), im: -&self.im }
    }

    /// `re² + im²`.
    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Representative of `±self` whose first nonzero component is positive.
    ///
    /// Traces in PSL(2, ℂ) are only defined up to sign; all class keys use this form.
    pub fn canonical_sign(&self) -> Self {
        let negate = if self.re.is_zero() { self.im.is_negative() } else { self.re.is_negative() };
        if negate {
            -self
        } else {
            self.clone()
        }
    }

    /// Whether `self = ±other`.
    pub fn eq_up_to_sign(&self, other: &Self) -> bool {
        self == other || *self == -other
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "{}-{}i", self.re, -&self.im)
                } else {
                    write!(f, "{}+{}i", self.re, self.im)
                }
            }
        }
    }
}

impl From<i64> for GaussianInt {
    fn from(re: i64) -> Self {
        GaussianInt::new(re, 0)
    }
}

impl<'a> Add<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Add for GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: GaussianInt) -> GaussianInt {
        &self + &rhs
    }
}

impl<'a> Sub<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn sub(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Sub for GaussianInt {
    type Output = GaussianInt;
    fn sub(self, rhs: GaussianInt) -> GaussianInt {
        &self - &rhs
    }
}

impl<'a> Mul<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt { re: &self.re * &rhs.re - &self.im * &rhs.im, im: &self.re * &rhs.im + &self.im * &rhs.re }
    }
}

impl Mul for GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: GaussianInt) -> GaussianInt {
        &self * &rhs
    }
}

impl Neg for &GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt { re: -&self.re, im: -&self.im }
    }
}

impl Neg for GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        -&self
    }
}

/// Row-major 2×2 matrix `[[a, b], [c, d]]` over ℤ[i].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix2 {
    pub a: GaussianInt,
    pub b: GaussianInt,
    pub c: GaussianInt,
    pub d: GaussianInt,
}

impl Matrix2 {
    pub fn new(a: GaussianInt, b: GaussianInt, c: GaussianInt, d: GaussianInt) -> Self {
        Matrix2 { a, b, c, d }
    }

    /// Builds a matrix from `(re, im)` pairs, row-major.
    pub fn from_parts(entries: [(i64, i64); 4]) -> Self {
        let [a, b, c, d] = entries.map(|(re, im)| GaussianInt::new(re, im));
        Matrix2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::from_parts([(1, 0), (0, 0), (0, 0), (1, 0)])
    }

    pub fn det(&self) -> GaussianInt {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> GaussianInt {
        &self.a + &self.d
    }

    pub fn neg(&self) -> Self {
        Matrix2 { a: -&self.a, b: -&self.b, c: -&self.c, d: -&self.d }
    }

    /// Equality in PSL: `self = ±other`.
    pub fn eq_projective(&self, other: &Self) -> bool {
        self == other || *self == other.neg()
    }

    pub fn entries(&self) -> [&GaussianInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Largest modulus among the four entries, as an `f64` (used for growth bounds).
    pub fn max_entry_modulus(&self) -> f64 {
        self.entries().iter().map(|e| bigint_to_f64(&e.norm()).sqrt()).fold(0.0, f64::max)
    }

    pub fn is_identity_projective(&self) -> bool {
        self.eq_projective(&Matrix2::identity())
    }
}

impl<'a> Mul<&'a Matrix2> for &'a Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: &Matrix2) -> Matrix2 {
        Matrix2 {
            a: &(&self.a * &rhs.a) + &(&self.b * &rhs.c),
            b: &(&self.a * &rhs.b) + &(&self.b * &rhs.d),
            c: &(&self.c * &rhs.a) + &(&self.d * &rhs.c),
            d: &(&self.c * &rhs.b) + &(&self.d * &rhs.d),
        }
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: Matrix2) -> Matrix2 {
        &self * &rhs
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

pub(crate) fn bigint_to_f64(x: &BigInt) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_exact() {
        let a = GaussianInt::new(3, -2);
        let b = GaussianInt::new(-1, 5);
        assert_eq!(&a * &b, GaussianInt::new(7, 17));
        assert_eq!(&a + &b, GaussianInt::new(2, 3));
        assert_eq!(&a - &b, GaussianInt::new(4, -7));
        assert_eq!(a.norm(), BigInt::from(13));
        assert_eq!(&a * &a.conj(), GaussianInt::new(13, 0));
    }

    #[test]
    fn canonical_sign_rule() {
        assert_eq!(GaussianInt::new(-4, 0).canonical_sign(), GaussianInt::new(4, 0));
        assert_eq!(GaussianInt::new(0, -3).canonical_sign(), GaussianInt::new(0, 3));
        assert_eq!(GaussianInt::new(-1, 3).canonical_sign(), GaussianInt::new(1, -3));
        assert_eq!(GaussianInt::new(1, -3).canonical_sign(), GaussianInt::new(1, -3));
    }

    #[test]
    fn display() {
        assert_eq!(GaussianInt::new(1, 3).to_string(), "1+3i");
        assert_eq!(GaussianInt::new(1, -3).to_string(), "1-3i");
        assert_eq!(GaussianInt::new(0, -2).to_string(), "-2i");
        assert_eq!(GaussianInt::new(-4, 0).to_string(), "-4");
    }

    #[test]
    fn large_entries_do_not_overflow() {
        let big = GaussianInt::new(BigInt::from(i64::MAX), BigInt::from(i64::MAX));
        let sq = &big * &big;
        assert_eq!(sq.re, BigInt::zero());
        assert_eq!(sq.im, BigInt::from(i64::MAX) * BigInt::from(i64::MAX) * 2);
    }
}
