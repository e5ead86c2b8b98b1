//! Word classes: canonical representatives, cardinalities and Poisson rates.
//!
//! A class is determined by the twist sequence of the normal form up to rotation
//! and reversal. Each normal-form sequence has exactly `3^m` preimages among the
//! `9^m` words, so `|[w]| = 3^m × (size of the dihedral orbit of the sequence)`
//! and `λ = |[w]| / (2m·3^m) = orbit / 2m`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;

use crate::gaussian::GaussianInt;
use crate::lengths::TauKey;
use crate::real::PreciseReal;
use crate::word::Word;

/// Least rotation or reversed rotation of a twist sequence, and the number of
/// distinct sequences in its dihedral orbit.
pub fn canonical_twists(twists: &[u8]) -> (Vec<u8>, usize) {
    let m = twists.len();
    let mut orbit: Vec<Vec<u8>> = Vec::with_capacity(2 * m);
    let mut reversed = twists.to_vec();
    reversed.reverse();
    for seq in [twists.to_vec(), reversed] {
        for k in 0..m.max(1) {
            let mut r = seq.clone();
            r.rotate_left(k % m.max(1));
            orbit.push(r);
        }
    }
    orbit.sort_unstable();
    orbit.dedup();
    let size = orbit.len();
    (orbit.swap_remove(0), size)
}

/// Canonical representative of the class of `word`, over `{S, Sθ, Sθ²}`.
pub fn canonicalize(word: &Word) -> Word {
    let nf = word.normal_form();
    let twists = nf.twists().expect("normal form is reduced");
    Word::from_twists(&canonical_twists(&twists).0)
}

/// `|[w]|` for a word of any spelling.
pub fn class_cardinality(word: &Word) -> BigInt {
    let twists = word.normal_form().twists().expect("normal form is reduced");
    let (_, orbit) = canonical_twists(&twists);
    BigInt::from(3u32).pow(twists.len() as u32) * BigInt::from(orbit)
}

/// Every class of words of length `m`, in canonical order.
pub fn classes_of_length(m: usize) -> Vec<ClassRecord> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let mut twists = vec![0u8; m];
    loop {
        let (canon, _) = canonical_twists(&twists);
        if seen.insert(canon.clone()) {
            out.push(ClassRecord::from_twists(&canon));
        }
        // odometer over Z3^m
        let mut i = 0;
        while i < m && twists[i] == 2 {
            twists[i] = 0;
            i += 1;
        }
        if i == m {
            break;
        }
        twists[i] += 1;
    }
    out.sort_by(|a, b| a.twists().cmp(b.twists()));
    out
}

#[derive(Clone, Debug)]
pub struct ClassRecord {
    representative: Word,
    twists: Vec<u8>,
    canonical_trace: GaussianInt,
    orbit: usize,
    key: TauKey,
}

impl ClassRecord {
    pub fn from_word(word: &Word) -> Self {
        let twists = word.normal_form().twists().expect("normal form is reduced");
        ClassRecord::from_twists(&twists)
    }

    pub fn from_twists(twists: &[u8]) -> Self {
        let (canon, orbit) = canonical_twists(twists);
        let representative = Word::from_twists(&canon);
        let canonical_trace = representative.trace().canonical_sign();
        let key = TauKey::from_trace(&canonical_trace);
        ClassRecord { representative, twists: canon, canonical_trace, orbit, key }
    }

    pub fn representative(&self) -> &Word {
        &self.representative
    }

    /// Canonical twist sequence; the class identity.
    pub fn twists(&self) -> &[u8] {
        &self.twists
    }

    pub fn m(&self) -> usize {
        self.twists.len()
    }

    pub fn canonical_trace(&self) -> &GaussianInt {
        &self.canonical_trace
    }

    pub fn orbit_size(&self) -> usize {
        self.orbit
    }

    pub fn cardinality(&self) -> BigInt {
        BigInt::from(3u32).pow(self.m() as u32) * BigInt::from(self.orbit)
    }

    /// `λ = |[w]| / (2m·3^m)`.
    pub fn rate(&self) -> BigRational {
        BigRational::new(BigInt::from(self.orbit), BigInt::from(2 * self.m()))
    }

    pub fn tau_key(&self) -> &TauKey {
        &self.key
    }

    pub fn length(&self, prec: u32) -> PreciseReal {
        self.key.length(prec)
    }
}

impl PartialEq for ClassRecord {
    fn eq(&self, other: &Self) -> bool {
        self.twists == other.twists
    }
}

impl Eq for ClassRecord {}

impl PartialOrd for ClassRecord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by length, then `m`, then representative.
impl Ord for ClassRecord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key
            .cmp(&other.key)
            .then(self.m().cmp(&other.m()))
            .then_with(|| self.representative.to_string().cmp(&other.representative.to_string()))
    }
}

impl fmt::Display for ClassRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] m={} tr=±({}) λ={}", self.representative, self.m(), self.canonical_trace, self.rate())
    }
}
