//! The reference plane `P` over the imaginary axis and its images under words.
//!
//! For `M = [[a, b], [c, d]]` with determinant 1, the image of the axis `Re z = 0`
//! is `{w : A|w|² − βw − β̄w̄ + 2Re(a b̄) = 0}` with `A = 2Re(d c̄)`, `β = d ā + b̄ c`.
//! It is a line when `A = 0`, otherwise a circle of radius `1/|A|` centred at `β̄/A`.
//! The inversive distance to the axis is then `|Re β| = |Re(a d̄ + b c̄)|`, an integer,
//! and the distance between the two planes is its arccosh when it exceeds 1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::gaussian::{GaussianInt, Matrix2};
use crate::lengths::Cutoff;
use crate::real::PreciseReal;
use crate::word::Word;

/// A point of ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_int(z: &GaussianInt) -> Self {
        GaussRat { re: BigRational::from_integer(z.re.clone()), im: BigRational::from_integer(z.im.clone()) }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        GaussRat { re: &self.re * k, im: &self.im * k }
    }

    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

/// Boundary at infinity of a vertical plane (line) or hemisphere (circle).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundaryCircle {
    Line { point: GaussRat, direction: GaussRat },
    Circle { center: GaussRat, radius_sq: BigRational },
}

impl BoundaryCircle {
    /// Whether `w` lies on the boundary curve.
    pub fn contains(&self, w: &GaussRat) -> bool {
        match self {
            BoundaryCircle::Line { point, direction } => {
                let dx = &w.re - &point.re;
                let dy = &w.im - &point.im;
                &dx * &direction.im == &dy * &direction.re
            }
            BoundaryCircle::Circle { center, radius_sq } => {
                let dx = &w.re - &center.re;
                let dy = &w.im - &center.im;
                &(&dx * &dx + &dy * &dy) == radius_sq
            }
        }
    }

    /// Squared inversive distance to the imaginary axis; `None` for lines, which
    /// always meet the axis at ∞ (possibly only asymptotically).
    pub fn inversive_sq_to_axis(&self) -> Option<BigRational> {
        match self {
            BoundaryCircle::Line { .. } => None,
            BoundaryCircle::Circle { center, radius_sq } => Some(&center.re * &center.re / radius_sq),
        }
    }
}

fn cross_terms(m: &Matrix2) -> (BigInt, GaussianInt, BigInt) {
    let big_a = BigInt::from(2) * (&m.d * &m.c.conj()).re;
    let beta = &(&m.d * &m.a.conj()) + &(&m.b.conj() * &m.c);
    let k = (&m.b * &m.a.conj()).re;
    (big_a, beta, k)
}

/// Image of the axis `{0, i, ∞}` under `m`.
pub fn image_plane(m: &Matrix2) -> BoundaryCircle {
    let (big_a, beta, k) = cross_terms(m);
    if big_a.is_zero() {
        // Re(β w) = Re(b ā)
        let beta_conj = GaussRat::from_int(&beta.conj());
        let nb = BigRational::from_integer(beta.norm());
        let point = beta_conj.scale(&(BigRational::from_integer(k) / nb));
        let direction = GaussRat::from_int(&(&GaussianInt::i() * &beta.conj()));
        BoundaryCircle::Line { point, direction }
    } else {
        let a = BigRational::from_integer(big_a.clone());
        let center = GaussRat::from_int(&beta.conj()).scale(&(BigRational::one() / &a));
        let num = beta.norm() - BigInt::from(2) * &big_a * k;
        let radius_sq = BigRational::new(num, &big_a * &big_a);
        BoundaryCircle::Circle { center, radius_sq }
    }
}

/// `cosh` of the distance between `P` and `m(P)` when they are disjoint, i.e.
/// `|Re(a d̄ + b c̄)|`; values ≤ 1 mean the planes meet or are asymptotic.
pub fn plane_cosh(m: &Matrix2) -> BigInt {
    let s = &(&m.a * &m.d.conj()) + &(&m.b * &m.c.conj());
    s.re.abs()
}

pub fn plane_distance_of(m: &Matrix2, prec: u32) -> PreciseReal {
    let c = plane_cosh(m);
    if c <= BigInt::one() {
        PreciseReal::zero(prec)
    } else {
        PreciseReal::from_int(c, prec + 32).arccosh().with_precision(prec)
    }
}

pub fn plane_distance(word: &Word, prec: u32) -> PreciseReal {
    plane_distance_of(&word.matrix(), prec)
}

/// Whether `d(P, m(P)) < D`.
pub fn plane_below(m: &Matrix2, cutoff: &Cutoff) -> Result<bool> {
    let c = plane_cosh(m);
    if c <= BigInt::one() {
        return Ok(true);
    }
    cutoff.inversive_below(&BigRational::from_integer(&c * &c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{theta, Base, Letter};
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn mobius(m: &Matrix2, z: &GaussRat) -> Option<GaussRat> {
        let a = GaussRat::from_int(&m.a);
        let b = GaussRat::from_int(&m.b);
        let c = GaussRat::from_int(&m.c);
        let d = GaussRat::from_int(&m.d);
        let mul =
            |x: &GaussRat, y: &GaussRat| GaussRat::new(&x.re * &y.re - &x.im * &y.im, &x.re * &y.im + &x.im * &y.re);
        let add = |x: &GaussRat, y: &GaussRat| GaussRat::new(&x.re + &y.re, &x.im + &y.im);
        let num = add(&mul(&a, z), &b);
        let den = add(&mul(&c, z), &d);
        let n = den.norm();
        if n.is_zero() {
            return None;
        }
        let conj = GaussRat::new(den.re.clone(), -den.im.clone());
        Some(mul(&num, &conj).scale(&(BigRational::one() / n)))
    }

    fn axis_points() -> Vec<GaussRat> {
        [(0, 1), (1, 1), (2, 1), (-3, 2), (5, 7)]
            .iter()
            .map(|&(n, d)| GaussRat::new(BigRational::zero(), rat(n, d)))
            .collect()
    }

    fn word_of(idx: &[usize]) -> Word {
        Word::new(idx.iter().map(|&i| Letter::ALL[i]).collect())
    }

    #[test]
    fn identity_theta_and_s_give_lines() {
        let id = image_plane(&Matrix2::identity());
        assert!(matches!(id, BoundaryCircle::Line { .. }));
        for p in axis_points() {
            assert!(id.contains(&p));
        }
        let th = image_plane(&theta());
        for p in axis_points() {
            assert!(th.contains(&p));
        }
        let s = image_plane(&Base::S.matrix());
        assert!(s.contains(&GaussRat::new(rat(1, 1), rat(0, 1))));
        assert!(s.contains(&GaussRat::new(rat(1, 1), rat(1, 1))));
        assert!(!s.contains(&GaussRat::new(rat(0, 1), rat(0, 1))));
    }

    #[test]
    fn reference_distances() {
        assert_eq!(plane_distance_of(&theta(), 128).to_f64(), 0.0);
        assert_eq!(plane_distance_of(&Base::S.matrix(), 128).to_f64(), 0.0);
        let w: Word = "SSR1".parse().unwrap();
        let d = plane_distance(&w, 128).to_f64();
        assert!((0.0..=2.6339158).contains(&d), "{d}");
    }

    #[test]
    fn integer_formula_matches_circle_geometry() {
        let mut checked = 0;
        for a in 0..9 {
            for b in 0..9 {
                for c in 0..9 {
                    let m = word_of(&[a, b, c]).matrix();
                    let circle = image_plane(&m);
                    for p in axis_points() {
                        if let Some(w) = mobius(&m, &p) {
                            assert!(circle.contains(&w));
                        }
                    }
                    if let Some(i_sq) = circle.inversive_sq_to_axis() {
                        let c = plane_cosh(&m);
                        assert_eq!(i_sq, BigRational::from_integer(&c * &c));
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 100);
    }

    #[test]
    fn terminal_twist_does_not_change_distance() {
        for a in 0..9 {
            for b in 0..9 {
                let w = word_of(&[a, b, 1]);
                let base = plane_cosh(&w.matrix());
                for t in 0..3 {
                    let with_twist = &w.matrix() * &crate::word::theta_pow(t);
                    assert_eq!(plane_cosh(&with_twist), base);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn distance_bounded_by_length(idx in proptest::collection::vec(0usize..9, 3..9)) {
            let w = word_of(&idx);
            let d = plane_distance(&w, 128);
            let l = crate::lengths::translation_length(&w.trace(), 128);
            prop_assert!(d.certified_cmp(&l) != Some(std::cmp::Ordering::Greater));
        }
    }
}
