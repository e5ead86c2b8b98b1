//! Helpers shared by the integration tests.
#![allow(dead_code)]

use argmin::core::{CostFunction, Error, Executor, State};
use argmin::solver::neldermead::NelderMead;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use systole::gaussian::Matrix2;
use systole::word::{Letter, Word};

pub type C = (f64, f64);

fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cadd(a: C, b: C) -> C {
    (a.0 + b.0, a.1 + b.1)
}

fn conj(a: C) -> C {
    (a.0, -a.1)
}

fn scale(a: C, k: f64) -> C {
    (a.0 * k, a.1 * k)
}

fn norm(a: C) -> f64 {
    a.0 * a.0 + a.1 * a.1
}

pub fn to_c(m: &Matrix2) -> [C; 4] {
    m.entries().map(|z| (z.re.to_f64().unwrap(), z.im.to_f64().unwrap()))
}

/// Action on upper half-space: `(z, t) ↦ (a q + b)(c q + d)^{-1}` with `q = z + t j`.
pub fn act(m: &[C; 4], z: C, t: f64) -> (C, f64) {
    let [a, b, c, d] = *m;
    let cz_d = cadd(cmul(c, z), d);
    let den = norm(cz_d) + norm(c) * t * t;
    let num = cadd(cmul(cadd(cmul(a, z), b), conj(cz_d)), scale(cmul(a, conj(c)), t * t));
    ((num.0 / den, num.1 / den), t / den)
}

/// `cosh d − 1` between two points of upper half-space.
fn cosh_minus_one(p: (C, f64), q: (C, f64)) -> f64 {
    let dz = (p.0 .0 - q.0 .0, p.0 .1 - q.0 .1);
    (norm(dz) + (p.1 - q.1).powi(2)) / (2.0 * p.1 * q.1)
}

/// Points `(iy, e^s)` of the plane over the imaginary axis.
pub fn reference_point(y: f64, s: f64) -> (C, f64) {
    ((0.0, y), s.exp())
}

struct PlanePair {
    m: [C; 4],
}

impl PlanePair {
    fn eval(&self, p: &[f64]) -> f64 {
        let a = reference_point(p[0], p[1]);
        let (z, t) = reference_point(p[2], p[3]);
        cosh_minus_one(a, act(&self.m, z, t))
    }
}

impl CostFunction for PlanePair {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> Result<f64, Error> {
        Ok(self.eval(p))
    }
}

fn minimize_from(pair: &PlanePair, start: Vec<f64>, step: f64) -> (f64, Vec<f64>) {
    let mut simplex = vec![start.clone()];
    for i in 0..4 {
        let mut v = start.clone();
        v[i] += step;
        simplex.push(v);
    }
    let solver = NelderMead::new(simplex).with_sd_tolerance(1e-16).unwrap();
    let res = Executor::new(PlanePair { m: pair.m }, solver).configure(|s| s.max_iters(20_000)).run().unwrap();
    let state = res.state();
    (state.get_best_cost(), state.get_best_param().unwrap().clone())
}

/// Grid search followed by repeated Nelder–Mead descents.
pub fn oracle_distance(m: &Matrix2) -> f64 {
    let pair = PlanePair { m: to_c(m) };
    let ys: Vec<f64> = (-8..=8).map(|i| (i as f64 * 0.5).sinh()).collect();
    let ss: Vec<f64> = (-6..=6).map(|i| i as f64).collect();
    let points: Vec<(f64, f64)> = ys.iter().flat_map(|&y| ss.iter().map(move |&s| (y, s))).collect();
    let mut grid: Vec<(f64, Vec<f64>)> = Vec::new();
    for &(y1, s1) in &points {
        for &(y2, s2) in &points {
            let p = vec![y1, s1, y2, s2];
            grid.push((pair.eval(&p), p));
        }
    }
    grid.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = f64::INFINITY;
    for (_, start) in grid.into_iter().take(4) {
        let (mut cost, mut p) = minimize_from(&pair, start, 0.5);
        for step in [0.1, 0.01, 0.001] {
            (cost, p) = minimize_from(&pair, p, step);
        }
        best = best.min(cost);
    }
    (1.0 + best).acosh()
}

pub fn random_word(rng: &mut ChaCha8Rng) -> Word {
    let len = rng.gen_range(2..=5);
    Word::new((0..len).map(|_| Letter::ALL[rng.gen_range(0..9)]).collect())
}

/// Parses a word written with the letter symbols, e.g. `"SSR1"`.
pub fn w(s: &str) -> Word {
    s.parse().unwrap()
}

/// `S^k` followed by `tail`.
pub fn s_power(k: usize, tail: &str) -> Word {
    w(&format!("{}{}", "S".repeat(k), tail))
}
