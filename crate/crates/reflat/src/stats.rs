//! Involution combinatorics and capture-recapture estimators.
//!
//! A complete classification with dual links is an involution on N
//! elements; its fixed points are the self-dual classes. Counting
//! involutions gives the expected number of self-duals (about √N), and a
//! partial sample of p elements with m complete dual pairs and s self-duals
//! estimates the population as p²/(2m) or (p/s)².

use num_bigint::BigUint;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::db::ClassDatabase;
use crate::error::{Error, Result};

/// Exact involution count `Z_N` together with the distribution `n_S` over
/// fixed-point counts `S ≡ N (mod 2)`; `Σ n_S = Z_N`.
pub fn involution_counts(n: usize) -> (BigUint, Vec<(usize, BigUint)>) {
    let z = involution_numbers(n);
    let zn = z[n].clone();
    // n_S = N! / (S! · 2^k · k!) with k = (N − S)/2 transpositions
    let mut factorial = vec![BigUint::from(1u32); n + 1];
    for i in 1..=n {
        factorial[i] = &factorial[i - 1] * BigUint::from(i as u32);
    }
    let mut dist = Vec::new();
    let mut s = n % 2;
    while s <= n {
        let k = (n - s) / 2;
        let denom = &factorial[s] * (BigUint::from(1u32) << k) * &factorial[k];
        dist.push((s, &factorial[n] / denom));
        s += 2;
    }
    (zn, dist)
}

/// `Z_0..=Z_n` by the recurrence `Z_k = Z_{k-1} + (k-1) Z_{k-2}`.
fn involution_numbers(n: usize) -> Vec<BigUint> {
    let mut z = vec![BigUint::from(1u32); (n + 1).max(2)];
    for k in 2..=n {
        z[k] = &z[k - 1] + BigUint::from((k - 1) as u64) * &z[k - 2];
    }
    z.truncate(n + 1);
    z
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpectationMode {
    /// `N · Z_{N-1} / Z_N`, via big integers for moderate N and by the
    /// exact ratio iteration `r_k = 1 / (1 + (k-1) r_{k-1})` in floating
    /// point for huge N (only the ratio is needed, never Z itself).
    Exact,
    /// `√N − 1/2 + 1/(3 √N)`.
    Asymptotic,
}

/// Expected number of fixed points of a uniform random involution on N
/// elements.
pub fn expected_self_duals(n: u64, mode: ExpectationMode) -> f64 {
    match mode {
        ExpectationMode::Asymptotic => {
            let r = (n as f64).sqrt();
            r - 0.5 + 1.0 / (3.0 * r)
        }
        ExpectationMode::Exact => {
            if n <= 20_000 {
                let z = involution_numbers(n as usize);
                let scale = BigUint::from(10u32).pow(30);
                let q = (&z[n as usize - 1] * scale) / &z[n as usize];
                let ratio = parse_biguint_f64(&q) / 1e30;
                n as f64 * ratio
            } else {
                let mut r = 1.0f64; // Z_0 / Z_1
                for k in 2..=n {
                    r = 1.0 / (1.0 + (k - 1) as f64 * r);
                }
                n as f64 * r
            }
        }
    }
}

fn parse_biguint_f64(x: &BigUint) -> f64 {
    x.to_string().parse().expect("decimal float")
}

/// The two population estimators; absent when a denominator vanishes.
pub fn estimate_population(p: u64, m: u64, s: u64) -> (Option<f64>, Option<f64>) {
    let est_pairs = (m > 0).then(|| (p as f64) * (p as f64) / (2.0 * m as f64));
    let est_self = (s > 0).then(|| {
        let r = p as f64 / s as f64;
        r * r
    });
    (est_pairs, est_self)
}

/// Six-significant-figure scientific notation, e.g. `2.68615e+08`.
pub fn format_estimate(x: f64) -> String {
    let s = format!("{x:.5e}");
    let (mant, exp) = s.split_once('e').expect("exponent in float format");
    let e: i32 = exp.parse().expect("integer exponent");
    format!("{mant}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleReport {
    pub p: usize,
    /// Dual pairs with both members in the sample.
    pub m: usize,
    /// Self-dual records in the sample.
    pub s: usize,
    pub est_pairs: Option<f64>,
    pub est_self: Option<f64>,
    pub seed: u64,
}

/// Sampling order: uniform without replacement, or the records with the
/// fewest lattice points first (the bias of samples taken from a
/// classification in progress).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMode {
    Uniform,
    OrderedByPoints,
}

/// Draw `p` records and count recaptured dual pairs and self-duals.
/// Deterministic for a fixed seed.
pub fn sample_and_estimate(
    db: &ClassDatabase,
    p: usize,
    seed: u64,
    mode: SampleMode,
) -> Result<SampleReport> {
    let n = db.len();
    if p > n {
        return Err(Error::SampleTooLarge { requested: p, available: n });
    }
    let chosen: Vec<usize> = match mode {
        SampleMode::Uniform => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut idx: Vec<usize> = (0..n).collect();
            // partial Fisher–Yates: only the first p slots are needed
            for i in 0..p {
                let j = rng.gen_range(i..n);
                idx.swap(i, j);
            }
            idx.truncate(p);
            idx
        }
        SampleMode::OrderedByPoints => {
            let mut sized: Vec<(usize, usize)> = (0..n)
                .map(|i| {
                    let poly = db.key(i).to_polytope().expect("decodable key");
                    (poly.lattice_points().len(), i)
                })
                .collect();
            sized.sort_unstable();
            sized.into_iter().take(p).map(|(_, i)| i).collect()
        }
    };
    let mut in_sample = vec![false; n];
    for &i in &chosen {
        in_sample[i] = true;
    }
    let mut m = 0;
    let mut s = 0;
    for &i in &chosen {
        let d = db.dual_of(i);
        if d == i {
            s += 1;
        } else if d < i && in_sample[d] {
            m += 1;
        }
    }
    let (est_pairs, est_self) = estimate_population(p as u64, m as u64, s as u64);
    Ok(SampleReport { p, m, s, est_pairs, est_self, seed })
}
