//! Monte-Carlo sampling of random gluings and their short-cycle statistics.
//!
//! A complex on `n` blocks is a uniform perfect matching of the `4n` face slots
//! (slot `4v + f` is face `f` of block `v`) with an independent uniform twist in
//! `ℤ/3` per glued pair. A simple cycle of the dual graph is read as a word one
//! letter per block: entering through face `f_in` and leaving through `f_out`
//! along an edge with twist `t` gives the letter with gauge pair
//! `(A(f_in), t − A(f_out))`, where `A(f) = f mod 3`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classes::{classes_of_length, ClassRecord};
use crate::gaussian::GaussianInt;
use crate::word::{Letter, Word};

pub const DEGREE: usize = 4;

#[derive(Clone, Debug)]
pub struct GluedComplex {
    n: usize,
    partner: Vec<usize>,
    /// Twist of the pair containing each slot (equal on both slots of a pair).
    twist: Vec<u8>,
}

/// Census key: cycle length and canonical trace.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleKey {
    pub m: usize,
    pub trace: (BigInt, BigInt),
}

impl CycleKey {
    pub fn new(m: usize, trace: &GaussianInt) -> Self {
        let t = trace.canonical_sign();
        CycleKey { m, trace: (t.re, t.im) }
    }

    pub fn trace(&self) -> GaussianInt {
        GaussianInt::new(self.trace.0.clone(), self.trace.1.clone())
    }
}

pub type CycleCensus = BTreeMap<CycleKey, u64>;

fn face_class(f: usize) -> u8 {
    (f % 3) as u8
}

pub fn sample_complex(n: usize, seed: u64) -> GluedComplex {
    sample_complex_stream(n, seed, 0)
}

/// Sample drawn from stream `stream` of the generator keyed by `seed`; distinct
/// streams are independent.
pub fn sample_complex_stream(n: usize, seed: u64, stream: u64) -> GluedComplex {
    assert!(n >= 2, "need at least two blocks");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut slots: Vec<usize> = (0..DEGREE * n).collect();
    slots.shuffle(&mut rng);
    let mut partner = vec![0; DEGREE * n];
    let mut twist = vec![0; DEGREE * n];
    for pair in slots.chunks(2) {
        let t = rng.gen_range(0..3u8);
        partner[pair[0]] = pair[1];
        partner[pair[1]] = pair[0];
        twist[pair[0]] = t;
        twist[pair[1]] = t;
    }
    GluedComplex { n, partner, twist }
}

impl GluedComplex {
    /// Complex from an explicit matching of the `4n` slots and a twist per slot.
    pub fn from_pairing(partner: Vec<usize>, twist: Vec<u8>) -> Result<Self, String> {
        let len = partner.len();
        if len == 0 || !len.is_multiple_of(DEGREE) || twist.len() != len {
            return Err(format!("need 4n slots and as many twists, got {len} and {}", twist.len()));
        }
        for s in 0..len {
            let p = partner[s];
            if p >= len || p == s || partner[p] != s {
                return Err(format!("slot {s} is not matched exactly once"));
            }
            if twist[s] > 2 || twist[s] != twist[p] {
                return Err(format!("slot {s} has an inconsistent twist"));
            }
        }
        Ok(GluedComplex { n: len / DEGREE, partner, twist })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partner(&self, slot: usize) -> usize {
        self.partner[slot]
    }

    pub fn twist(&self, slot: usize) -> u8 {
        self.twist[slot]
    }

    /// Whether some face of a block is glued to another face of the same block.
    pub fn has_loop(&self) -> bool {
        (0..DEGREE * self.n).any(|s| self.partner[s] / DEGREE == s / DEGREE)
    }

    /// Whether the dual graph has no loops and no multiple edges.
    pub fn is_simple(&self) -> bool {
        for v in 0..self.n {
            let mut nbrs: Vec<usize> = (0..DEGREE).map(|f| self.partner[DEGREE * v + f] / DEGREE).collect();
            if nbrs.contains(&v) {
                return false;
            }
            nbrs.sort_unstable();
            if nbrs.windows(2).any(|w| w[0] == w[1]) {
                return false;
            }
        }
        true
    }

    /// Letter read at a block entered through slot `in_slot` and left through `out_slot`.
    fn letter(&self, in_slot: usize, out_slot: usize) -> Letter {
        let a = face_class(in_slot % DEGREE);
        let b = (self.twist[out_slot] + 3 - face_class(out_slot % DEGREE)) % 3;
        Letter::from_gauge_pair(a, b)
    }

    /// Word of a cycle given as its sequence of exit slots.
    pub fn cycle_word(&self, exits: &[usize]) -> Word {
        let m = exits.len();
        let letters = (0..m)
            .map(|k| {
                let prev = exits[(k + m - 1) % m];
                self.letter(self.partner[prev], exits[k])
            })
            .collect();
        Word::new(letters)
    }

    /// Calls `visit` once per simple cycle of length `3..=max_m`, with its exit slots
    /// listed from the cycle's least block.
    pub fn for_each_cycle(&self, max_m: usize, mut visit: impl FnMut(&[usize])) {
        let mut on_path = vec![false; self.n];
        let mut exits: Vec<usize> = Vec::with_capacity(max_m);
        for root in 0..self.n {
            on_path[root] = true;
            for f in 0..DEGREE {
                let out = DEGREE * root + f;
                exits.push(out);
                self.extend(root, out, max_m, &mut on_path, &mut exits, &mut visit);
                exits.pop();
            }
            on_path[root] = false;
        }
    }

    fn extend(
        &self,
        root: usize,
        first_out: usize,
        max_m: usize,
        on_path: &mut [bool],
        exits: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]),
    ) {
        let last_out = *exits.last().expect("nonempty path");
        let in_slot = self.partner[last_out];
        let v = in_slot / DEGREE;
        if v == root {
            // each cycle is met in both directions; keep one
            if exits.len() >= 3 && first_out < in_slot {
                visit(exits);
            }
            return;
        }
        if v < root || on_path[v] || exits.len() >= max_m {
            return;
        }
        on_path[v] = true;
        for f in 0..DEGREE {
            let out = DEGREE * v + f;
            if out == in_slot {
                continue;
            }
            exits.push(out);
            self.extend(root, first_out, max_m, on_path, exits, visit);
            exits.pop();
        }
        on_path[v] = false;
    }
}

pub fn cycle_census(complex: &GluedComplex, max_m: usize) -> CycleCensus {
    let mut census = CycleCensus::new();
    complex.for_each_cycle(max_m, |exits| {
        let word = complex.cycle_word(exits);
        *census.entry(CycleKey::new(exits.len(), &word.trace())).or_default() += 1;
    });
    census
}

/// `Σλ` over the classes of each key with `3 ≤ m ≤ max_m`.
pub fn predicted_rates(max_m: usize) -> BTreeMap<CycleKey, BigRational> {
    let mut out: BTreeMap<CycleKey, BigRational> = BTreeMap::new();
    for m in 3..=max_m {
        for c in classes_of_length(m) {
            let key = CycleKey::new(m, c.canonical_trace());
            *out.entry(key).or_insert_with(BigRational::zero) += c.rate();
        }
    }
    out
}

/// Expected number of `m`-cycles on `n` blocks divided by its limit `3^m/2m`.
pub fn finite_size_factor(n: usize, m: usize) -> f64 {
    (0..m).map(|j| (DEGREE * (n - j)) as f64 / (DEGREE * n - 1 - 2 * j) as f64).product()
}

#[derive(Clone, Debug)]
pub struct RateRow {
    pub key: CycleKey,
    pub mean: f64,
    pub variance: f64,
    /// Standard error of the mean.
    pub stderr: f64,
    pub predicted: BigRational,
}

impl RateRow {
    pub fn predicted_f64(&self) -> f64 {
        self.predicted.to_f64().unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Debug)]
pub struct SimulationTable {
    pub n: usize,
    pub samples: usize,
    pub max_m: usize,
    pub seed: u64,
    pub rows: Vec<RateRow>,
    /// `counts[s][i]` is the count of `rows[i].key` in sample `s`.
    pub counts: Vec<Vec<u32>>,
    pub simple_samples: usize,
}

impl SimulationTable {
    /// Sample covariance of the counts of rows `i` and `j`.
    pub fn covariance(&self, i: usize, j: usize) -> f64 {
        let s = self.counts.len() as f64;
        let (mi, mj) = (self.rows[i].mean, self.rows[j].mean);
        let sum: f64 = self.counts.iter().map(|c| (c[i] as f64 - mi) * (c[j] as f64 - mj)).sum();
        sum / (s - 1.0)
    }

    /// Standard error of [`Self::covariance`], from the spread of the centred products.
    pub fn covariance_stderr(&self, i: usize, j: usize) -> f64 {
        let s = self.counts.len() as f64;
        let (mi, mj) = (self.rows[i].mean, self.rows[j].mean);
        let prods: Vec<f64> = self.counts.iter().map(|c| (c[i] as f64 - mi) * (c[j] as f64 - mj)).collect();
        let mean = prods.iter().sum::<f64>() / s;
        let var = prods.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (s - 1.0);
        (var / s).sqrt()
    }

    pub fn row_index(&self, key: &CycleKey) -> Option<usize> {
        self.rows.iter().position(|r| &r.key == key)
    }
}

/// Per-key empirical mean and variance over `samples` complexes; replica `s` uses
/// stream `s` of the generator keyed by `seed`.
pub fn empirical_rates(samples: usize, n: usize, max_m: usize, seed: u64) -> SimulationTable {
    let predicted = predicted_rates(max_m);
    let keys: Vec<CycleKey> = predicted.keys().cloned().collect();
    let index: BTreeMap<&CycleKey, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let results: Vec<(Vec<u32>, bool)> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let complex = sample_complex_stream(n, seed, s as u64);
            let census = cycle_census(&complex, max_m);
            let mut row = vec![0u32; keys.len()];
            for (k, v) in census {
                row[index[&k]] = v as u32;
            }
            (row, complex.is_simple())
        })
        .collect();
    let simple_samples = results.iter().filter(|r| r.1).count();
    let counts: Vec<Vec<u32>> = results.into_iter().map(|r| r.0).collect();
    let s = samples as f64;
    let rows = keys
        .into_iter()
        .enumerate()
        .map(|(i, key)| {
            let mean = counts.iter().map(|c| c[i] as f64).sum::<f64>() / s;
            let variance = counts.iter().map(|c| (c[i] as f64 - mean).powi(2)).sum::<f64>() / (s - 1.0);
            let stderr = (variance / s).sqrt();
            let predicted = predicted[&key].clone();
            RateRow { key, mean, variance, stderr, predicted }
        })
        .collect();
    SimulationTable { n, samples, max_m, seed, rows, counts, simple_samples }
}

/// Class of the word read along a cycle.
pub fn cycle_class(complex: &GluedComplex, exits: &[usize]) -> ClassRecord {
    ClassRecord::from_word(&complex.cycle_word(exits))
}
