//! Certified bound on the part of the expected-systole series beyond the head.
//!
//! With head spectrum `l_1 < … < l_n`, cumulative rate `R = R_n`, next length
//! `l_{n+1}` and `c = ⌈τ(l_{n+1})⌉`, the tail splits as `S_e = A + B₁ + B₂`:
//!
//! * `A  = 2arccosh(c/2)·e^{−R}`
//! * `B₁ = e^{−R}·2arccosh((c+1)/2)·e^{−Λ}`, where `Λ` is the total rate of the
//!   classes with `τ ∈ [τ(l_{n+1}), c)`
//! * `B₂ = 2e^{−R}·e^{c−(Λ+1)}·Σ_{k>c} arccosh((k+1)/2)·e^{−k}`
//!
//! `B₂` as written charges one class of rate 1 per integer step beyond `c` but
//! discounts an extra `e^{−1}` against the window; the recount without that
//! discount, `e·B₂`, is carried alongside and the larger of the two is used.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::classes::ClassRecord;
use crate::enumerate::{enumerate_words, EnumerationConfig};
use crate::error::{Result, SystoleError};
use crate::lengths::{Cutoff, TauKey};
use crate::real::{parse_decimal, PreciseReal};
use crate::spectrum::{assemble_spectrum, partial_sum_sc, survival_probability, total_rate, SpectrumEntry};
use crate::word::Word;

/// Published value of `B₁`, reported for comparison only.
pub const B1_REFERENCE: &str = "7.51077e-19";

/// Spellings of the ten window classes at `D = 4.6`, in the published notation.
pub const REFERENCE_WINDOW_WORDS: [&str; 10] = [
    "SSSSSSSSSS1",
    "SSSSSSSSSS2",
    "SSL2L2S1",
    "SSL1L1S1",
    "SSL2L2R1",
    "SSR1R1L2",
    "SSSL2L2R2",
    "SSSR1R1L1",
    "SSSS1S1R",
    "SSSS2S2L",
];

const GUARD: u32 = 32;

/// The first length past the head spectrum and the classes in its τ-window.
#[derive(Clone, Debug)]
pub struct NextLength {
    pub key: TauKey,
    pub length: PreciseReal,
    pub tau: PreciseReal,
    /// `⌈τ(l_{n+1})⌉`.
    pub ceiling: i64,
    /// Classes with `τ ∈ [τ(l_{n+1}), ceiling)`.
    pub window: Vec<ClassRecord>,
    pub window_rate: BigRational,
    /// Cutoff of the enumeration used to find it.
    pub cutoff: String,
}

/// Finds `l_{n+1}` from an enumeration at `cutoff` (which must exceed the head's).
///
/// The first `head.len()` lengths of that enumeration must coincide with `head`.
pub fn find_next_length(head: &[SpectrumEntry], cutoff: &Cutoff) -> Result<NextLength> {
    let prec = cutoff.precision();
    let e = enumerate_words(&EnumerationConfig::new(cutoff.clone()))?;
    let spectrum = assemble_spectrum(&e.classes, prec)?;
    let n = head.len();
    if spectrum.len() <= n {
        return Err(SystoleError::InsufficientCutoff {
            cutoff: cutoff.text().to_string(),
            reason: format!("only {} lengths below it, need {}", spectrum.len(), n + 1),
        });
    }
    for (a, b) in head.iter().zip(&spectrum) {
        if a.key != b.key || a.rate != b.rate {
            return Err(SystoleError::AnchorFailure(format!("head length {} differs between cutoffs", a.index)));
        }
    }
    let next = &spectrum[n];
    let ceiling = next.key.ceiling();
    let tau_bound = cutoff.tau_bound(prec);
    if tau_bound.certified_cmp(&PreciseReal::from_int(ceiling, prec)) != Some(Ordering::Greater) {
        return Err(SystoleError::InsufficientCutoff {
            cutoff: cutoff.text().to_string(),
            reason: format!("2cosh(D/2) does not exceed ⌈τ(l_{})⌉ = {ceiling}", n + 1),
        });
    }
    let upper = TauKey::integer(ceiling);
    let window: Vec<ClassRecord> = spectrum[n..]
        .iter()
        .flat_map(|s| s.classes.iter())
        .filter(|c| *c.tau_key() >= next.key && *c.tau_key() < upper)
        .cloned()
        .collect();
    let window_rate = window.iter().fold(BigRational::zero(), |acc, c| acc + c.rate());
    Ok(NextLength {
        key: next.key.clone(),
        length: next.length.clone(),
        tau: next.key.tau(prec),
        ceiling,
        window,
        window_rate,
        cutoff: cutoff.text().to_string(),
    })
}

fn arccosh_half(k: i64, prec: u32) -> PreciseReal {
    PreciseReal::from_ratio(&BigRational::new(BigInt::from(k), BigInt::from(2)), prec).arccosh()
}

/// `A = 2arccosh(c/2)·e^{−R}`.
pub fn term_a(r: &BigRational, ceiling: i64, prec: u32) -> PreciseReal {
    let wp = prec + GUARD;
    (arccosh_half(ceiling, wp).mul_int(2) * survival_probability(r, wp)).with_precision(prec)
}

/// `B₁ = e^{−R}·2arccosh((c+1)/2)·e^{−Λ}`.
pub fn term_b1(r: &BigRational, ceiling: i64, window_rate: &BigRational, prec: u32) -> PreciseReal {
    let wp = prec + GUARD;
    let v =
        survival_probability(r, wp) * arccosh_half(ceiling + 1, wp).mul_int(2) * survival_probability(window_rate, wp);
    v.with_precision(prec)
}

/// `Σ_{k>c} arccosh((k+1)/2)·e^{−k}` with a certified remainder.
///
/// Uses `arccosh((k+1)/2) ≤ ln(k+1) ≤ k` and `Σ_{k>K} k e^{−k} ≤ 2(K+1)e^{−(K+1)}`.
pub fn tail_series(ceiling: i64, prec: u32) -> PreciseReal {
    let wp = prec + GUARD;
    let limit = BigRational::new(BigInt::one(), BigInt::one() << (prec / 2 + 16));
    let mut sum = PreciseReal::zero(wp);
    let mut k = ceiling + 1;
    loop {
        let term = arccosh_half(k + 1, wp) * PreciseReal::from_int(-k, wp).exp();
        sum = &sum + &term;
        let rem = PreciseReal::from_int(-(k + 1), wp).exp().mul_int(2 * (k + 1));
        if rem.upper() < limit {
            let widened = &sum + &rem;
            return sum.hull(&widened).with_precision(prec);
        }
        k += 1;
    }
}

/// The displayed form `2e^{−R}·e^{c−(Λ+1)}·Σ_{k>c} arccosh((k+1)/2)e^{−k}`.
pub fn term_b2(r: &BigRational, ceiling: i64, window_rate: &BigRational, prec: u32) -> PreciseReal {
    let wp = prec + GUARD;
    let shift = BigRational::from_integer(BigInt::from(ceiling)) - window_rate - BigRational::one();
    let factor = PreciseReal::from_ratio(&shift, wp).exp();
    (survival_probability(r, wp).mul_int(2) * factor * tail_series(ceiling, wp)).with_precision(prec)
}

/// `e·B₂`: one class of rate 1 per step, without the extra discount.
pub fn term_b2_recount(r: &BigRational, ceiling: i64, window_rate: &BigRational, prec: u32) -> PreciseReal {
    let wp = prec + GUARD;
    (term_b2(r, ceiling, window_rate, wp) * PreciseReal::from_int(1, wp).exp()).with_precision(prec)
}

/// Whether the window classes are exactly the reference window classes, matched by
/// `(m, canonical trace)`, each with `λ = 1/2`.
pub fn window_matches_reference(window: &[ClassRecord]) -> bool {
    let mut expected: Vec<(usize, String)> = REFERENCE_WINDOW_WORDS
        .iter()
        .map(|s| {
            let rec = ClassRecord::from_word(&s.parse::<Word>().expect("valid spelling"));
            (rec.m(), rec.canonical_trace().to_string())
        })
        .collect();
    let mut got: Vec<(usize, String)> = window.iter().map(|c| (c.m(), c.canonical_trace().to_string())).collect();
    expected.sort();
    got.sort();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    got == expected && window.iter().all(|c| c.rate() == half)
}

#[derive(Clone, Debug)]
pub struct SystoleReport {
    pub cutoff: String,
    pub tail_cutoff: String,
    pub precision: u32,
    pub spectrum: Vec<SpectrumEntry>,
    pub n_classes: usize,
    pub s_c: PreciseReal,
    pub cum_rate: BigRational,
    pub next: NextLength,
    pub a: PreciseReal,
    pub b1_self: PreciseReal,
    pub b1_reference: BigRational,
    pub b2: PreciseReal,
    pub b2_recount: PreciseReal,
    pub s_e: PreciseReal,
    pub lower: PreciseReal,
    pub upper: PreciseReal,
    pub lambda_set_ok: bool,
}

/// Default cutoffs tried when looking for `l_{n+1}`: `D + 0.4`, `D + 0.8`, ….
fn tail_cutoffs(d: &BigRational) -> Vec<String> {
    (1..=6)
        .map(|i| {
            let v = d + BigRational::new(BigInt::from(2 * i), BigInt::from(5));
            // decimal rendering of a value with denominator dividing 10^k
            let scaled = (&v * BigRational::from_integer(BigInt::from(10).pow(6))).to_integer();
            let s = format!("{:07}", scaled);
            let (int, frac) = s.split_at(s.len() - 6);
            format!("{}.{}", int, frac.trim_end_matches('0')).trim_end_matches('.').to_string()
        })
        .collect()
}

pub fn expected_systole(cutoff: &Cutoff, tail_cutoff: Option<&str>) -> Result<SystoleReport> {
    let e = enumerate_words(&EnumerationConfig::new(cutoff.clone()))?;
    expected_systole_from(cutoff, &e.classes, tail_cutoff)
}

/// Same as [`expected_systole`] with the head classes already enumerated at `cutoff`.
pub fn expected_systole_from(
    cutoff: &Cutoff,
    classes: &[ClassRecord],
    tail_cutoff: Option<&str>,
) -> Result<SystoleReport> {
    let prec = cutoff.precision();
    let spectrum = assemble_spectrum(classes, prec)?;
    if spectrum.is_empty() {
        return Err(SystoleError::InsufficientCutoff {
            cutoff: cutoff.text().to_string(),
            reason: "no lengths below the cutoff".into(),
        });
    }
    let next = match tail_cutoff {
        Some(t) => {
            let tc = Cutoff::parse(t, prec)?;
            if tc.value() <= cutoff.value() {
                return Err(SystoleError::InvalidConfig("tail cutoff must exceed the cutoff".into()));
            }
            find_next_length(&spectrum, &tc)?
        }
        None => {
            let mut last = None;
            for t in tail_cutoffs(cutoff.value()) {
                match find_next_length(&spectrum, &Cutoff::parse(&t, prec)?) {
                    Ok(n) => {
                        last = Some(Ok(n));
                        break;
                    }
                    Err(err @ SystoleError::InsufficientCutoff { .. }) => last = Some(Err(err)),
                    Err(err) => return Err(err),
                }
            }
            last.expect("at least one tail cutoff")?
        }
    };
    let r = total_rate(&spectrum);
    let s_c = partial_sum_sc(&spectrum, prec);
    let a = term_a(&r, next.ceiling, prec);
    let b1_self = term_b1(&r, next.ceiling, &next.window_rate, prec);
    let b1_reference = parse_decimal(B1_REFERENCE).expect("constant parses");
    let b2 = term_b2(&r, next.ceiling, &next.window_rate, prec);
    let b2_recount = term_b2_recount(&r, next.ceiling, &next.window_rate, prec);
    let b1_max = b1_self.max(&PreciseReal::from_ratio(&b1_reference, prec));
    let s_e = &(&a + &b1_max) + &b2.max(&b2_recount);
    let upper = &s_c + &s_e;
    let lambda_set_ok = window_matches_reference(&next.window);
    Ok(SystoleReport {
        cutoff: cutoff.text().to_string(),
        tail_cutoff: next.cutoff.clone(),
        precision: prec,
        n_classes: spectrum.iter().map(|s| s.classes.len()).sum(),
        lower: s_c.clone(),
        s_c,
        cum_rate: r,
        spectrum,
        next,
        a,
        b1_self,
        b1_reference,
        b2,
        b2_recount,
        s_e,
        upper,
        lambda_set_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn rel(x: &PreciseReal, expected: f64) -> f64 {
        (x.to_f64() / expected - 1.0).abs()
    }

    #[test]
    fn tail_terms_at_reference_parameters() {
        let big_r = r(112, 3);
        let five = r(5, 1);
        assert!(rel(&term_a(&big_r, 11, 256), 2.9220e-16) < 5e-3);
        assert!(rel(&term_b1(&big_r, 11, &five, 256), 2.0416e-18) < 1e-3);
        assert!(rel(&term_b2(&big_r, 11, &five, 256), 4.58795e-19) < 5e-3);
        let b2 = term_b2(&big_r, 11, &five, 256).to_f64();
        let rc = term_b2_recount(&big_r, 11, &five, 256).to_f64();
        assert!((rc / b2 - std::f64::consts::E).abs() < 1e-12);
    }

    #[test]
    fn a_vanishes_at_ceiling_two() {
        assert!(term_a(&r(3, 1), 2, 128).to_f64().abs() < 1e-30);
    }

    #[test]
    fn series_truncation() {
        let full = tail_series(11, 256);
        let first = arccosh_half(13, 256) * PreciseReal::from_int(-12, 256).exp();
        assert!(first.certified_cmp(&full) == Some(Ordering::Less));
        assert!(full.error_bound() < 1e-30);
        let bound40 = 2.0 * 41.0 * (-41.0f64).exp();
        assert!(bound40 < 1e-15);
    }

    #[test]
    fn tail_cutoff_candidates() {
        let d = parse_decimal("4.6").unwrap();
        assert_eq!(tail_cutoffs(&d)[0], "5");
        assert_eq!(tail_cutoffs(&d)[1], "5.4");
        assert_eq!(tail_cutoffs(&parse_decimal("4").unwrap())[0], "4.4");
    }

    #[test]
    fn reference_window_is_consistent() {
        let recs: Vec<ClassRecord> =
            REFERENCE_WINDOW_WORDS.iter().map(|s| ClassRecord::from_word(&s.parse().unwrap())).collect();
        assert!(window_matches_reference(&recs));
        assert!(!window_matches_reference(&recs[1..]));
    }
}
