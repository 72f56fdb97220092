//! Independent checks on the integration engine.
//!
//! Exact route: for sorted lengths `u_1 <= ... <= u_n`, introduce slacks
//! `v_i >= 0` by `u_i = u_{i-1} + v_i` below the first window (`i < k`) and
//! `u_i = u_{i-k+1} + ... + u_{i-1} + v_i` from then on. The map `v -> u` is
//! unit lower-triangular, the window inequalities become `v >= 0`, and only
//! `u_n <= 1` remains. Writing `u_n = sum c_j v_j`, the ordered region is a
//! simplex of volume `1 / (n! prod c_j)`, so the probability is `1 / prod c_j`.
//!
//! Numeric route: a midpoint rule straight from the definition, used only
//! for `n <= 4`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::engine::KGonQuery;
use crate::error::{domain, Result};
use crate::ratio::{ExactInteger, ExactRatio};

/// Coefficients of the largest length in terms of the slack variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionCoeffs {
    pub n: usize,
    pub k: usize,
    pub c: Vec<ExactInteger>,
}

impl SubstitutionCoeffs {
    pub fn product(&self) -> ExactInteger {
        self.c.iter().product()
    }
}

pub fn substitution_coefficients(query: KGonQuery) -> SubstitutionCoeffs {
    let (n, k) = (query.n(), query.k());
    // rows[i][j]: coefficient of v_j in u_i
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![BigInt::zero(); n];
        row[i] = BigInt::one();
        let first = if i + 1 < k { i.saturating_sub(1) } else { i + 1 - k };
        if i > 0 {
            for prev in &rows[first..i] {
                for (acc, x) in row.iter_mut().zip(prev) {
                    *acc += x;
                }
            }
        }
        rows.push(row);
    }
    SubstitutionCoeffs { n, k, c: rows.pop().expect("n >= 1") }
}

/// `1 / prod c_j`; exactly 1 when `n < k`.
pub fn probability_oracle(query: KGonQuery) -> ExactRatio {
    ExactRatio::reciprocal_of(&substitution_coefficients(query).product()).expect("coefficients are >= 1")
}

/// Midpoint-rule estimate of the probability, for `k <= n <= 4`.
///
/// The `n - 1` smaller lengths are placed on a `resolution^(n-1)` midpoint
/// grid; the largest is integrated analytically, contributing
/// `max(0, 1 - max(u_{n-1}, u_{n-k+1} + ... + u_{n-1}))`. The grid sum runs
/// over nondecreasing index tuples, with ties weighted by the number of
/// distinct permutations, which equals the sum over the whole cube with the
/// outer values sorted.
pub fn grid_volume_estimate(query: KGonQuery, resolution: usize) -> Result<f64> {
    let (n, k) = (query.n(), query.k());
    if n > 4 {
        return Err(domain(format!("grid estimate is limited to n <= 4, got {n}")));
    }
    if n < k {
        return Err(domain(format!("grid estimate needs n >= k, got n = {n}, k = {k}")));
    }
    if resolution < 16 {
        return Err(domain(format!("grid resolution must be >= 16, got {resolution}")));
    }
    let outer = n - 1;
    let partials: Vec<f64> = (0..resolution)
        .into_par_iter()
        .map(|first| {
            let mut idx = [0usize; 3];
            idx[0] = first;
            let mut acc = 0.0;
            accumulate(&mut idx, 1, outer, k, resolution, &mut acc);
            acc
        })
        .collect();
    // Sequential reduction keeps the result independent of the thread count.
    let total: f64 = partials.iter().sum();
    Ok(n as f64 * total / (resolution as f64).powi(outer as i32))
}

fn accumulate(idx: &mut [usize; 3], depth: usize, outer: usize, k: usize, res: usize, acc: &mut f64) {
    if depth < outer {
        for i in idx[depth - 1]..res {
            idx[depth] = i;
            accumulate(idx, depth + 1, outer, k, res, acc);
        }
        return;
    }
    let mut u = [0.0f64; 3];
    for (x, &i) in u.iter_mut().zip(&idx[..outer]) {
        *x = (i as f64 + 0.5) / res as f64;
    }
    let u = &u[..outer];
    for j in k - 1..outer {
        if u[j + 1 - k..j].iter().sum::<f64>() > u[j] {
            return;
        }
    }
    let window: f64 = u[outer + 1 - k..].iter().sum();
    let lower = window.max(u[outer - 1]);
    let length = (1.0 - lower).max(0.0);
    if length > 0.0 {
        *acc += permutations(&idx[..outer]) * length;
    }
}

/// Distinct orderings of a sorted index tuple.
fn permutations(sorted: &[usize]) -> f64 {
    let fact = |m: usize| (1..=m).product::<usize>() as f64;
    let mut denom = 1.0;
    let mut run = 1;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            denom *= fact(run);
            run = 1;
        }
    }
    denom *= fact(run);
    fact(sorted.len()) / denom
}
