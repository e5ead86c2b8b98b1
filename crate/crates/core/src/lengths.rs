//! Translation lengths, the τ reparametrization and certified cutoff tests.
//!
//! For a trace `t`, `τ = 2cosh(l/2) = (|t+2| + |t−2|)/2`, so the ordering of lengths
//! is the ordering of `√N₁ + √N₂` with integers `N₁ = |t+2|²`, `N₂ = |t−2|²`.
//! [`TauKey`] compares such sums exactly; transcendental evaluation is only needed
//! for the values themselves and for comparisons against a decimal cutoff.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Result, SystoleError};
use crate::gaussian::{bigint_to_f64, GaussianInt};
use crate::real::{parse_decimal, PreciseReal, MAX_PRECISION};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementKind {
    Parabolic,
    EllipticOrIdentity,
    Loxodromic,
}

pub fn classify_element(trace: &GaussianInt) -> ElementKind {
    if !trace.is_real() {
        return ElementKind::Loxodromic;
    }
    let two = BigInt::from(2);
    let r = trace.re.abs();
    match r.cmp(&two) {
        Ordering::Equal => ElementKind::Parabolic,
        Ordering::Less => ElementKind::EllipticOrIdentity,
        Ordering::Greater => ElementKind::Loxodromic,
    }
}

/// The filter `|tr| > 2` applied to word classes.
pub fn trace_exceeds_two(trace: &GaussianInt) -> bool {
    trace.norm() > BigInt::from(4)
}

/// Exact key for `τ = (√n1 + √n2)/2`.
///
/// Ordering and equality are those of the real number τ, so two traces with
/// the same translation length compare equal even when the pairs differ.
#[derive(Clone, Debug)]
pub struct TauKey {
    n1: BigInt,
    n2: BigInt,
}

impl TauKey {
    pub fn from_trace(trace: &GaussianInt) -> Self {
        let two = GaussianInt::new(2, 0);
        let n1 = (trace + &two).norm();
        let n2 = (trace - &two).norm();
        if n1 <= n2 {
            TauKey { n1, n2 }
        } else {
            TauKey { n1: n2, n2: n1 }
        }
    }

    /// Key with `τ = c`.
    pub fn integer(c: i64) -> Self {
        TauKey { n1: BigInt::zero(), n2: BigInt::from(4 * c * c) }
    }

    pub fn parts(&self) -> (&BigInt, &BigInt) {
        (&self.n1, &self.n2)
    }

    /// τ as a ball.
    pub fn tau(&self, prec: u32) -> PreciseReal {
        let a = PreciseReal::from_int(self.n1.clone(), prec).sqrt();
        let b = PreciseReal::from_int(self.n2.clone(), prec).sqrt();
        (&a + &b).mul_pow2(-1)
    }

    /// `2·arccosh(τ/2)`.
    pub fn length(&self, prec: u32) -> PreciseReal {
        let wp = prec + 32;
        self.tau(wp).mul_pow2(-1).arccosh().mul_pow2(1).with_precision(prec)
    }

    /// Smallest integer `c` with `τ ≤ c`.
    pub fn ceiling(&self) -> i64 {
        let approx = self.tau(64).to_f64().ceil() as i64;
        let mut c = approx.max(2);
        while *self > TauKey::integer(c) {
            c += 1;
        }
        while c > 2 && *self <= TauKey::integer(c - 1) {
            c -= 1;
        }
        c
    }
}

impl PartialEq for TauKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for TauKey {}

impl PartialOrd for TauKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TauKey {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.n1 == other.n1 && self.n2 == other.n2 {
            return Ordering::Equal;
        }
        // √a+√b vs √c+√d  ⇔  (a+b−c−d) + √(4ab) vs √(4cd)
        let e = &self.n1 + &self.n2 - &other.n1 - &other.n2;
        let p = BigInt::from(4) * &self.n1 * &self.n2;
        let q = BigInt::from(4) * &other.n1 * &other.n2;
        cmp_int_plus_sqrt(&e, &p, &q)
    }
}

impl fmt::Display for TauKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(√{}+√{})/2", self.n1, self.n2)
    }
}

/// Compares `e + √p` with `√q` exactly (`p, q ≥ 0`).
fn cmp_int_plus_sqrt(e: &BigInt, p: &BigInt, q: &BigInt) -> Ordering {
    if !e.is_negative() {
        // both sides ≥ 0: compare squares, e² + p + 2e√p vs q
        let f = q - e * e - p;
        if e.is_zero() {
            return p.cmp(q);
        }
        if f.is_negative() {
            return Ordering::Greater;
        }
        let lhs = BigInt::from(4) * e * e * p;
        lhs.cmp(&(&f * &f))
    } else {
        // √p vs |e| + √q
        let g = p - e * e - q;
        if g.is_negative() {
            return Ordering::Less;
        }
        let rhs = BigInt::from(4) * e * e * q;
        (&g * &g).cmp(&rhs)
    }
}

/// `2·Re arccosh(t/2)`; zero for parabolic and elliptic traces.
pub fn translation_length(trace: &GaussianInt, prec: u32) -> PreciseReal {
    match classify_element(trace) {
        ElementKind::Loxodromic => TauKey::from_trace(trace).length(prec),
        _ => PreciseReal::zero(prec),
    }
}

/// `τ(l) = 2cosh(l/2)`.
pub fn tau_of_length(l: &PreciseReal) -> PreciseReal {
    l.mul_pow2(-1).cosh().mul_pow2(1)
}

/// Runs `f` at doubling precision until it certifies an ordering.
pub fn certify<F>(start: u32, what: impl Fn() -> String, f: F) -> Result<Ordering>
where
    F: Fn(u32) -> Option<Ordering>,
{
    let mut prec = start;
    loop {
        if let Some(ord) = f(prec) {
            return Ok(ord);
        }
        if prec >= MAX_PRECISION {
            return Err(SystoleError::UncertifiedComparison { what: what(), max_precision: MAX_PRECISION });
        }
        prec = (prec * 2).min(MAX_PRECISION);
    }
}

/// A length cutoff `D`, held as the exact rational parsed from its decimal form.
#[derive(Clone, Debug)]
pub struct Cutoff {
    text: String,
    value: BigRational,
    precision: u32,
    tau_cache: OnceLock<PreciseReal>,
    cosh_sq_cache: OnceLock<PreciseReal>,
    tau_f64: OnceLock<f64>,
    cosh_sq_f64: OnceLock<f64>,
}

impl Cutoff {
    pub fn parse(text: &str, precision: u32) -> Result<Self> {
        let value = parse_decimal(text).map_err(|e| SystoleError::InvalidConfig(e.to_string()))?;
        if !value.is_positive() {
            return Err(SystoleError::InvalidConfig(format!("cutoff must be positive, got {text}")));
        }
        Ok(Cutoff {
            text: text.trim().to_string(),
            value,
            precision,
            tau_cache: OnceLock::new(),
            cosh_sq_cache: OnceLock::new(),
            tau_f64: OnceLock::new(),
            cosh_sq_f64: OnceLock::new(),
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn as_real(&self, prec: u32) -> PreciseReal {
        PreciseReal::from_ratio(&self.value, prec)
    }

    /// `2cosh(D/2)`, the τ value of the cutoff.
    pub fn tau_bound(&self, prec: u32) -> PreciseReal {
        if prec == self.precision {
            return self.tau_cache.get_or_init(|| self.compute_tau_bound(prec)).clone();
        }
        self.compute_tau_bound(prec)
    }

    fn compute_tau_bound(&self, prec: u32) -> PreciseReal {
        tau_of_length(&self.as_real(prec + 16)).with_precision(prec)
    }

    /// `cosh²(D)`.
    pub fn cosh_sq_bound(&self, prec: u32) -> PreciseReal {
        if prec == self.precision {
            return self.cosh_sq_cache.get_or_init(|| self.compute_cosh_sq(prec)).clone();
        }
        self.compute_cosh_sq(prec)
    }

    fn compute_cosh_sq(&self, prec: u32) -> PreciseReal {
        let c = self.as_real(prec + 16).cosh();
        (&c * &c).with_precision(prec)
    }

    /// Whether the length with key `key` is below `D`.
    pub fn length_below(&self, key: &TauKey) -> Result<bool> {
        // f64 evaluation is good to ~1e-15 relative; only near-ties go to the balls.
        let tau = (bigint_to_f64(&key.n1).sqrt() + bigint_to_f64(&key.n2).sqrt()) / 2.0;
        let bound = *self.tau_f64.get_or_init(|| self.tau_bound(self.precision).to_f64());
        if tau.is_finite() && (tau - bound).abs() > 1e-9 * bound {
            return Ok(tau < bound);
        }
        let ord = certify(
            self.precision,
            || format!("τ {key} against cutoff {}", self.text),
            |p| key.tau(p).certified_cmp(&self.tau_bound(p)),
        )?;
        Ok(ord == Ordering::Less)
    }

    /// Whether `arccosh(√i_sq) < D`, i.e. `i_sq < cosh²(D)`.
    pub fn inversive_below(&self, i_sq: &BigRational) -> Result<bool> {
        let x = num_traits::ToPrimitive::to_f64(i_sq).unwrap_or(f64::INFINITY);
        let bound = *self.cosh_sq_f64.get_or_init(|| self.cosh_sq_bound(self.precision).to_f64());
        if x.is_finite() && (x - bound).abs() > 1e-9 * bound {
            return Ok(x < bound);
        }
        let ord = certify(
            self.precision,
            || format!("inversive distance² {i_sq} against cutoff {}", self.text),
            |p| self.cosh_sq_bound(p).certified_cmp_ratio(i_sq).map(Ordering::reverse),
        )?;
        Ok(ord == Ordering::Less)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(re: i64, im: i64) -> GaussianInt {
        GaussianInt::new(re, im)
    }

    #[test]
    fn reference_lengths() {
        assert!(translation_length(&g(2, 0), 128).to_f64() == 0.0);
        assert!(translation_length(&g(-2, 0), 128).to_f64() == 0.0);
        assert!(translation_length(&g(1, 0), 128).to_f64() == 0.0);
        let l4 = translation_length(&g(4, 0), 256);
        let closed = (2.0 + 3f64.sqrt()).ln() * 2.0;
        assert!((l4.to_f64() - closed).abs() < 1e-14);
        assert!((l4.to_f64() - 2.6339157938).abs() < 1e-9);
        let l = translation_length(&g(1, 3), 256).to_f64();
        assert!((l - 2.4529).abs() < 1e-3, "{l}");
    }

    #[test]
    fn classification() {
        assert_eq!(classify_element(&g(2, 0)), ElementKind::Parabolic);
        assert_eq!(classify_element(&g(-2, 0)), ElementKind::Parabolic);
        assert_eq!(classify_element(&g(1, 1)), ElementKind::Loxodromic);
        assert_eq!(classify_element(&g(1, 0)), ElementKind::EllipticOrIdentity);
        assert_eq!(classify_element(&g(0, 0)), ElementKind::EllipticOrIdentity);
        assert_eq!(classify_element(&g(-3, 0)), ElementKind::Loxodromic);
        assert!(!trace_exceeds_two(&g(1, 1)));
        assert!(trace_exceeds_two(&g(1, 2)));
    }

    #[test]
    fn tau_inverts_length_on_real_traces() {
        assert!((tau_of_length(&PreciseReal::zero(128)).to_f64() - 2.0).abs() < 1e-30);
        for t in 3..40i64 {
            let l = translation_length(&g(t, 0), 256);
            let tau = tau_of_length(&l);
            assert!(tau.certainly_within(&PreciseReal::from_int(t, 256), 200), "t={t}");
        }
    }

    #[test]
    fn exact_ceiling() {
        assert_eq!(TauKey::from_trace(&g(4, 0)).ceiling(), 4);
        assert_eq!(TauKey::from_trace(&g(-7, 0)).ceiling(), 7);
        assert_eq!(TauKey::from_trace(&g(1, 10)).ceiling(), 11);
        assert_eq!(TauKey::integer(11), TauKey::from_trace(&g(11, 0)));
    }

    #[test]
    fn pure_power_lengths_increase() {
        let mut prev = TauKey::from_trace(&g(1, 3));
        for k in 4..=40 {
            let next = TauKey::from_trace(&g(1, k));
            assert!(next > prev, "k={k}");
            assert_eq!(next, TauKey::from_trace(&g(-1, k)));
            prev = next;
        }
    }

    #[test]
    fn modulus_closed_form() {
        // |z|² for z = t/2 + √(t²/4 − 1), t = 1 + ki
        for k in 3..=20 {
            let kf = k as f64;
            let l = translation_length(&g(1, k), 128).to_f64();
            let direct = (l / 2.0).exp().powi(2);
            let q = kf.powi(4) + 10.0 * kf * kf + 9.0;
            let a = 0.5 * (2.0 * kf / (kf * kf + 3.0)).atan();
            let closed = (kf * kf + 1.0) / 4.0 + q.sqrt() / 4.0 + 0.5 * q.powf(0.25) * (a.sin() + kf * a.cos());
            assert!((direct - closed).abs() < 1e-9 * closed, "k={k}");
        }
    }

    #[test]
    fn cutoff_membership() {
        let d = Cutoff::parse("4.6", 128).unwrap();
        assert!(d.length_below(&TauKey::from_trace(&g(9, 0))).unwrap());
        assert!(d.length_below(&TauKey::from_trace(&g(10, 0))).unwrap());
        assert!(!d.length_below(&TauKey::from_trace(&g(11, 0))).unwrap());
        assert!(d.inversive_below(&BigRational::from_integer(1.into())).unwrap());
        assert!(!d.inversive_below(&BigRational::from_integer(3000.into())).unwrap());
        assert!(Cutoff::parse("-1", 128).is_err());
        assert!(Cutoff::parse("x", 128).is_err());
    }

    proptest! {
        #[test]
        fn key_order_matches_numeric_order(a in -60i64..60, b in -60i64..60, c in -60i64..60, d in -60i64..60) {
            let k1 = TauKey::from_trace(&g(a, b));
            let k2 = TauKey::from_trace(&g(c, d));
            let t1 = k1.tau(512);
            let t2 = k2.tau(512);
            match t1.certified_cmp(&t2) {
                Some(ord) => prop_assert_eq!(k1.cmp(&k2), ord),
                None => prop_assert_eq!(k1.cmp(&k2), Ordering::Equal),
            }
        }

        #[test]
        fn length_is_sign_invariant(a in -200i64..200, b in -200i64..200) {
            prop_assert_eq!(TauKey::from_trace(&g(a, b)), TauKey::from_trace(&g(-a, -b)));
        }
    }
}
