//! Enumeration of all word classes with translation length below a cutoff.
//!
//! Every class other than the pure powers `S^m` has a normal-form rotation that
//! starts with a twisted letter. The search therefore grows stems over
//! `{S, Sθ, Sθ²}` from the roots `Sθ` and `Sθ²`, extending a stem only while the
//! distance between `P` and its image stays below `D`. The pure powers and their
//! one-letter closures are handled by [`prune_parabolic_family`].

use std::collections::{BTreeMap, HashMap};

use log::{debug, info, warn};
use num_bigint::BigInt;
use rayon::prelude::*;

use crate::classes::ClassRecord;
use crate::error::{Result, SystoleError};
use crate::gaussian::{GaussianInt, Matrix2};
use crate::lengths::{classify_element, trace_exceeds_two, Cutoff, ElementKind, TauKey};
use crate::plane::plane_below;
use crate::word::{Letter, Word};

pub const DEFAULT_MAX_WORD_LENGTH: usize = 64;

#[derive(Clone, Debug)]
pub struct EnumerationConfig {
    pub cutoff: Cutoff,
    pub max_word_length: usize,
}

impl EnumerationConfig {
    pub fn new(cutoff: Cutoff) -> Self {
        EnumerationConfig { cutoff, max_word_length: DEFAULT_MAX_WORD_LENGTH }
    }

    pub fn parse(d: &str, precision: u32) -> Result<Self> {
        Ok(EnumerationConfig::new(Cutoff::parse(d, precision)?))
    }
}

/// Outcome of the membership test for one word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Member,
    /// Parabolic, elliptic or the identity.
    NotLoxodromic,
    /// Loxodromic, shorter than `D`, but `|tr| ≤ 2`.
    SmallTrace,
    TooLong,
}

pub fn membership(trace: &GaussianInt, cutoff: &Cutoff) -> Result<Membership> {
    if classify_element(trace) != ElementKind::Loxodromic {
        return Ok(Membership::NotLoxodromic);
    }
    if !cutoff.length_below(&TauKey::from_trace(trace))? {
        return Ok(Membership::TooLong);
    }
    if !trace_exceeds_two(trace) {
        return Ok(Membership::SmallTrace);
    }
    Ok(Membership::Member)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyDecision {
    Extend,
    Close,
}

/// Decision for a parabolic stem.
///
/// A pure power `S^k` is extended while `k < 3` or `l(S^kθ) < D`; by the
/// monotonicity of `l(S^kθ)` (and `l(S^kθ²) = l(S^kθ)`) no longer power can close
/// to a member once this fails. Any other parabolic stem is closed: its
/// continuations are reached from a rotation that starts with a twisted letter.
pub fn prune_parabolic_family(stem: &Word, cutoff: &Cutoff) -> Result<FamilyDecision> {
    let pure = stem.letters().iter().all(|l| *l == Letter::s(0));
    if !pure {
        return Ok(FamilyDecision::Close);
    }
    let k = stem.len();
    if k < 3 {
        return Ok(FamilyDecision::Extend);
    }
    let trace = GaussianInt::new(1, k as i64);
    if cutoff.length_below(&TauKey::from_trace(&trace))? {
        Ok(FamilyDecision::Extend)
    } else {
        Ok(FamilyDecision::Close)
    }
}

/// Classes found by [`enumerate_words`], sorted by (length, m, representative).
#[derive(Clone, Debug, Default)]
pub struct Enumeration {
    pub classes: Vec<ClassRecord>,
    /// Loxodromic words below the cutoff rejected by the `|tr| > 2` filter.
    pub excluded: Vec<(Word, GaussianInt)>,
    pub stems_visited: usize,
    pub max_stem_length: usize,
}

struct Stem {
    twists: Vec<u8>,
    matrix: Matrix2,
}

enum Found {
    Class(ClassRecord),
    Excluded(Word, GaussianInt),
}

fn examine(twists: &[u8], matrix: &Matrix2, cutoff: &Cutoff) -> Result<Option<Found>> {
    if twists.len() < 3 {
        return Ok(None);
    }
    let trace = matrix.trace();
    Ok(match membership(&trace, cutoff)? {
        Membership::Member => Some(Found::Class(ClassRecord::from_twists(twists))),
        Membership::SmallTrace => Some(Found::Excluded(Word::from_twists(twists), trace)),
        _ => None,
    })
}

pub fn enumerate_words(config: &EnumerationConfig) -> Result<Enumeration> {
    let cutoff = &config.cutoff;
    let cap = config.max_word_length.max(3);
    let mut found: Vec<Found> = Vec::new();
    let mut stems_visited = 0usize;

    // Pure powers and their closures S^{k-1}·Sθ^j.
    let mut k = 1usize;
    loop {
        let stem = Word::from_twists(&vec![0; k]);
        for j in 1..=2u8 {
            let mut t = vec![0u8; k];
            t[k - 1] = j;
            let closure = Word::from_twists(&t);
            if let Some(f) = examine(&t, &closure.matrix(), cutoff)? {
                found.push(f);
            }
        }
        stems_visited += 1;
        if prune_parabolic_family(&stem, cutoff)? == FamilyDecision::Close {
            break;
        }
        k += 1;
        if k > cap {
            return Err(SystoleError::CapExceeded { max_word_length: cap });
        }
    }

    // Stems rooted at a twisted letter, pruned by plane distance.
    let mut frontier: Vec<Stem> =
        [1u8, 2].iter().map(|&j| Stem { twists: vec![j], matrix: Letter::s(j).matrix().clone() }).collect();
    let mut depth = 1usize;
    let mut max_stem_length = k;
    while !frontier.is_empty() {
        stems_visited += frontier.len();
        max_stem_length = max_stem_length.max(depth);
        let results: Vec<Result<(Option<Found>, Vec<Stem>)>> = frontier
            .par_iter()
            .map(|stem| {
                let hit = examine(&stem.twists, &stem.matrix, cutoff)?;
                let mut children = Vec::new();
                if plane_below(&stem.matrix, cutoff)? {
                    if depth >= cap {
                        return Err(SystoleError::CapExceeded { max_word_length: cap });
                    }
                    for letter in Letter::REDUCED {
                        let mut twists = stem.twists.clone();
                        twists.push(letter.twist);
                        children.push(Stem { twists, matrix: &stem.matrix * letter.matrix() });
                    }
                }
                Ok((hit, children))
            })
            .collect();
        let mut next = Vec::new();
        for r in results {
            let (hit, children) = r?;
            found.extend(hit);
            next.extend(children);
        }
        debug!("depth {depth}: {} stems, {} extended", stems_visited, next.len());
        frontier = next;
        depth += 1;
    }

    let mut classes: BTreeMap<Vec<u8>, ClassRecord> = BTreeMap::new();
    let mut excluded: BTreeMap<Vec<u8>, (Word, GaussianInt)> = BTreeMap::new();
    for f in found {
        match f {
            Found::Class(c) => {
                classes.entry(c.twists().to_vec()).or_insert(c);
            }
            Found::Excluded(w, t) => {
                let rec = ClassRecord::from_word(&w);
                excluded.entry(rec.twists().to_vec()).or_insert((rec.representative().clone(), t));
            }
        }
    }
    for (w, t) in excluded.values() {
        warn!("excluded by |tr| > 2 filter: {w} (trace {t})");
    }
    let mut classes: Vec<ClassRecord> = classes.into_values().collect();
    classes.sort();
    info!("D = {}: {} classes from {} stems", cutoff.text(), classes.len(), stems_visited);
    Ok(Enumeration { classes, excluded: excluded.into_values().collect(), stems_visited, max_stem_length })
}

/// Class found by brute force together with the number of words spelling it.
#[derive(Clone, Debug)]
pub struct BruteForceClass {
    pub record: ClassRecord,
    pub word_count: BigInt,
}

/// All members among the `9^m` words with `3 ≤ m ≤ max_m`, grouped by class.
pub fn brute_force_words(max_m: usize, cutoff: &Cutoff) -> Result<BTreeMap<Vec<u8>, BruteForceClass>> {
    let prefixes: Vec<(usize, usize)> = (0..9).flat_map(|a| (0..9).map(move |b| (a, b))).collect();
    let partials: Vec<Result<HashMap<Vec<u8>, u64>>> = prefixes
        .par_iter()
        .map(|&(a, b)| {
            let mut counts: HashMap<Vec<u8>, u64> = HashMap::new();
            let mut memo: HashMap<GaussianInt, bool> = HashMap::new();
            let mut letters = vec![Letter::ALL[a], Letter::ALL[b]];
            let m0 = Letter::ALL[a].matrix() * Letter::ALL[b].matrix();
            walk(&mut letters, &m0, max_m, cutoff, &mut memo, &mut counts)?;
            Ok(counts)
        })
        .collect();
    let mut total: BTreeMap<Vec<u8>, u64> = BTreeMap::new();
    for p in partials {
        for (k, v) in p? {
            *total.entry(k).or_default() += v;
        }
    }
    Ok(total
        .into_iter()
        .map(|(k, v)| {
            let record = ClassRecord::from_twists(&k);
            (k, BruteForceClass { record, word_count: BigInt::from(v) })
        })
        .collect())
}

fn walk(
    letters: &mut Vec<Letter>,
    matrix: &Matrix2,
    max_m: usize,
    cutoff: &Cutoff,
    memo: &mut HashMap<GaussianInt, bool>,
    counts: &mut HashMap<Vec<u8>, u64>,
) -> Result<()> {
    if letters.len() >= 3 {
        let trace = matrix.trace().canonical_sign();
        let member = match memo.get(&trace) {
            Some(&v) => v,
            None => {
                let v = membership(&trace, cutoff)? == Membership::Member;
                memo.insert(trace, v);
                v
            }
        };
        if member {
            let rec = ClassRecord::from_word(&Word::new(letters.clone()));
            *counts.entry(rec.twists().to_vec()).or_default() += 1;
        }
    }
    if letters.len() == max_m {
        return Ok(());
    }
    for l in Letter::ALL {
        letters.push(l);
        let next = matrix * l.matrix();
        walk(letters, &next, max_m, cutoff, memo, counts)?;
        letters.pop();
    }
    Ok(())
}
