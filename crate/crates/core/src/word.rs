//! Words over the nine letters `Xθ^j` (`X ∈ {S, R, L}`, `j ∈ {0, 1, 2}`) and their
//! matrix semantics in PSL(2, ℤ[i]).
//!
//! Every letter can be written as `±θ^{-a}·S·θ^{b}` for a unique pair
//! `(a, b) ∈ ℤ/3 × ℤ/3` (its *gauge pair*). Consequently any word is conjugate,
//! by a power of θ, to a word that only uses the letters `S`, `Sθ`, `Sθ²`; that
//! word is its [normal form](Word::normal_form). The normal form is what class
//! representatives and the enumeration work with.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::gaussian::{GaussianInt, Matrix2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    S,
    R,
    L,
}

impl Base {
    pub const ALL: [Base; 3] = [Base::S, Base::R, Base::L];

    pub fn symbol(self) -> char {
        match self {
            Base::S => 'S',
            Base::R => 'R',
            Base::L => 'L',
        }
    }

    pub fn matrix(self) -> Matrix2 {
        match self {
            Base::S => Matrix2::from_parts([(1, 0), (1, 0), (0, 0), (1, 0)]),
            Base::R => Matrix2::from_parts([(-1, 0), (0, 1), (-1, 1), (0, 1)]),
            Base::L => Matrix2::from_parts([(0, 1), (0, 1), (1, 1), (1, 0)]),
        }
    }
}

/// The order-3 (projectively) twist `θ = [[0, i], [i, 1]]`.
pub fn theta() -> Matrix2 {
    Matrix2::from_parts([(0, 0), (0, 1), (0, 1), (1, 0)])
}

/// `θ^k` for `k` taken mod 3.
pub fn theta_pow(k: u8) -> Matrix2 {
    match k % 3 {
        0 => Matrix2::identity(),
        1 => theta(),
        _ => &theta() * &theta(),
    }
}

/// One letter `base·θ^twist`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub base: Base,
    pub twist: u8,
}

impl Letter {
    /// All nine letters in lexicographic order.
    pub const ALL: [Letter; 9] = [
        Letter::new(Base::S, 0),
        Letter::new(Base::S, 1),
        Letter::new(Base::S, 2),
        Letter::new(Base::R, 0),
        Letter::new(Base::R, 1),
        Letter::new(Base::R, 2),
        Letter::new(Base::L, 0),
        Letter::new(Base::L, 1),
        Letter::new(Base::L, 2),
    ];

    /// The three letters of the normal-form alphabet: `S`, `Sθ`, `Sθ²`.
    pub const REDUCED: [Letter; 3] = [Letter::new(Base::S, 0), Letter::new(Base::S, 1), Letter::new(Base::S, 2)];

    pub const fn new(base: Base, twist: u8) -> Self {
        Letter { base, twist: twist % 3 }
    }

    pub const fn s(twist: u8) -> Self {
        Letter::new(Base::S, twist)
    }

    pub fn index(self) -> usize {
        let b = match self.base {
            Base::S => 0,
            Base::R => 1,
            Base::L => 2,
        };
        3 * b + self.twist as usize
    }

    /// `(a, b)` with `self = ±θ^{-a}·S·θ^{b}`.
    pub fn gauge_pair(self) -> (u8, u8) {
        let t = self.twist;
        match self.base {
            Base::S => (0, t),
            Base::L => (1, (t + 2) % 3),
            Base::R => (2, (t + 1) % 3),
        }
    }

    pub fn from_gauge_pair(a: u8, b: u8) -> Self {
        match a % 3 {
            0 => Letter::new(Base::S, b),
            1 => Letter::new(Base::L, b + 1),
            _ => Letter::new(Base::R, b + 2),
        }
    }

    /// The letter read when the same gluing is crossed in the opposite direction.
    ///
    /// On gauge pairs this is `(a, b) ↦ (−b, −a)`; together with reversal of the
    /// letter order it preserves the trace up to sign.
    pub fn mirror(self) -> Self {
        let (a, b) = self.gauge_pair();
        Letter::from_gauge_pair((3 - b) % 3, (3 - a) % 3)
    }

    pub fn matrix(self) -> &'static Matrix2 {
        static TABLE: OnceLock<Vec<Matrix2>> = OnceLock::new();
        let table = TABLE.get_or_init(|| Letter::ALL.iter().map(|l| &l.base.matrix() * &theta_pow(l.twist)).collect());
        &table[self.index()]
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base.symbol())?;
        if self.twist != 0 {
            write!(f, "{}", self.twist)?;
        }
        Ok(())
    }
}

/// Exact matrix `Xθ^j` of a letter.
pub fn letter_matrix(letter: Letter) -> Matrix2 {
    letter.matrix().clone()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseWordError {
    #[error("empty word")]
    Empty,
    #[error("unexpected character {ch:?} at position {pos}")]
    UnexpectedChar { ch: char, pos: usize },
}

/// An ordered sequence of letters; its matrix is the left-to-right product.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    /// Normal-form word `S θ^{c_1} · … · S θ^{c_m}` from its twist sequence.
    pub fn from_twists(twists: &[u8]) -> Self {
        Word { letters: twists.iter().map(|&c| Letter::s(c)).collect() }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, letter: Letter) {
        self.letters.push(letter);
    }

    pub fn matrix(&self) -> Matrix2 {
        word_matrix(self)
    }

    pub fn trace(&self) -> GaussianInt {
        word_trace(self)
    }

    /// Whether every letter has base `S`.
    pub fn is_reduced(&self) -> bool {
        self.letters.iter().all(|l| l.base == Base::S)
    }

    /// Twist sequence of a reduced word; `None` if some letter is not `S`-based.
    pub fn twists(&self) -> Option<Vec<u8>> {
        self.is_reduced().then(|| self.letters.iter().map(|l| l.twist).collect())
    }

    /// The θ-conjugate word over `{S, Sθ, Sθ²}`.
    ///
    /// Writing letter `k` as `θ^{-a_k} S θ^{b_k}`, the normal form has twists
    /// `c_k = b_k − a_{k+1}` (indices cyclic), and its matrix is
    /// `±θ^{a_1}·matrix(self)·θ^{-a_1}`.
    pub fn normal_form(&self) -> Word {
        let pairs: Vec<(u8, u8)> = self.letters.iter().map(|l| l.gauge_pair()).collect();
        let m = pairs.len();
        let twists: Vec<u8> = (0..m).map(|k| (pairs[k].1 + 3 - pairs[(k + 1) % m].0) % 3).collect();
        Word::from_twists(&twists)
    }

    /// The word read along the same closed path in the opposite direction.
    pub fn reversed(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.mirror()).collect() }
    }

    /// Cyclic rotation starting at position `k`.
    pub fn rotated(&self, k: usize) -> Word {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            letters.rotate_left(k % self.letters.len());
        }
        Word { letters }
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word::new(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = ParseWordError;

    /// Parses e.g. `"SSR1"` (= `S·S·Rθ`); a digit `1`/`2` after a letter is its twist.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut letters: Vec<Letter> = Vec::with_capacity(s.len());
        for (pos, ch) in s.chars().enumerate() {
            match ch {
                'S' => letters.push(Letter::new(Base::S, 0)),
                'R' => letters.push(Letter::new(Base::R, 0)),
                'L' => letters.push(Letter::new(Base::L, 0)),
                '1' | '2' => match letters.last_mut() {
                    Some(last) if last.twist == 0 => {
                        last.twist = if ch == '1' { 1 } else { 2 };
                    }
                    _ => return Err(ParseWordError::UnexpectedChar { ch, pos }),
                },
                _ => return Err(ParseWordError::UnexpectedChar { ch, pos }),
            }
        }
        if letters.is_empty() {
            return Err(ParseWordError::Empty);
        }
        Ok(Word { letters })
    }
}

/// Exact ordered product of the letter matrices.
pub fn word_matrix(word: &Word) -> Matrix2 {
    word.letters.iter().fold(Matrix2::identity(), |acc, l| &acc * l.matrix())
}

/// `a + d` of [`word_matrix`]; the sign depends on the SL representative.
pub fn word_trace(word: &Word) -> GaussianInt {
    word_matrix(word).trace()
}
