//! Distinct lengths, aggregated Poisson rates and the partial sum `S_c`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::classes::ClassRecord;
use crate::error::{Result, SystoleError};
use crate::lengths::TauKey;
use crate::real::PreciseReal;

/// Guard bits used for intermediate evaluations.
const GUARD: u32 = 32;

#[derive(Clone, Debug)]
pub struct SpectrumEntry {
    /// 1-based position in the ordered spectrum.
    pub index: usize,
    pub key: TauKey,
    pub length: PreciseReal,
    pub classes: Vec<ClassRecord>,
    /// `Λ_i`, the sum of `λ` over the entry's classes.
    pub rate: BigRational,
    /// `R_i = Λ_1 + … + Λ_i`.
    pub cum_rate: BigRational,
    /// `p_i = e^{−R_{i−1}} − e^{−R_i}`.
    pub probability: PreciseReal,
}

/// `e^{−R}`: the probability that no class of cumulative rate `R` occurs.
pub fn survival_probability(r: &BigRational, prec: u32) -> PreciseReal {
    assert!(!r.is_negative(), "negative cumulative rate");
    if r.is_zero() {
        return PreciseReal::from_int(1, prec);
    }
    (-PreciseReal::from_ratio(r, prec + GUARD)).exp().with_precision(prec)
}

/// Groups classes by length and attaches rates and probabilities.
pub fn assemble_spectrum(classes: &[ClassRecord], prec: u32) -> Result<Vec<SpectrumEntry>> {
    let mut sorted = classes.to_vec();
    sorted.sort();
    sorted.dedup();

    let mut groups: Vec<Vec<ClassRecord>> = Vec::new();
    for c in sorted {
        match groups.last_mut() {
            Some(g) if g[0].tau_key() == c.tau_key() => g.push(c),
            _ => groups.push(vec![c]),
        }
    }

    let wp = prec + GUARD;
    let mut entries: Vec<SpectrumEntry> = Vec::with_capacity(groups.len());
    let mut cum = BigRational::zero();
    let mut prev_survival = PreciseReal::from_int(1, wp);
    for (i, group) in groups.into_iter().enumerate() {
        let rate = group.iter().fold(BigRational::zero(), |acc, c| acc + c.rate());
        cum += &rate;
        let survival = survival_probability(&cum, wp);
        let probability = (&prev_survival - &survival).with_precision(prec);
        prev_survival = survival;
        let key = group[0].tau_key().clone();
        entries.push(SpectrumEntry {
            index: i + 1,
            length: key.length(prec),
            key,
            classes: group,
            rate,
            cum_rate: cum.clone(),
            probability,
        });
    }
    check_gaps(&entries, prec)?;
    Ok(entries)
}

/// Consecutive lengths must be certifiably ordered with a gap of at least ten
/// times the merge threshold `2^{−prec/2}`.
fn check_gaps(entries: &[SpectrumEntry], prec: u32) -> Result<()> {
    let threshold = BigRational::new(BigInt::from(10), BigInt::one() << (prec / 2));
    for pair in entries.windows(2) {
        let gap = &pair[1].length - &pair[0].length;
        if gap.lower() <= threshold {
            return Err(SystoleError::UncertifiedComparison {
                what: format!("gap between lengths {} and {}", pair[0].index, pair[1].index),
                max_precision: prec,
            });
        }
    }
    Ok(())
}

/// `S_c = Σ p_i·l_i`.
pub fn partial_sum_sc(spectrum: &[SpectrumEntry], prec: u32) -> PreciseReal {
    let wp = prec + GUARD;
    let mut sum = PreciseReal::zero(wp);
    for e in spectrum {
        let l = e.key.length(wp);
        let p = if e.index == 1 {
            PreciseReal::from_int(1, wp) - survival_probability(&e.cum_rate, wp)
        } else {
            let before = &e.cum_rate - &e.rate;
            &survival_probability(&before, wp) - &survival_probability(&e.cum_rate, wp)
        };
        sum = &sum + &(&p * &l);
    }
    sum.with_precision(prec)
}

/// Cumulative rate of the whole spectrum.
pub fn total_rate(spectrum: &[SpectrumEntry]) -> BigRational {
    spectrum.last().map(|e| e.cum_rate.clone()).unwrap_or_else(BigRational::zero)
}
