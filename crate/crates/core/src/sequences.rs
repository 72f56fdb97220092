//! k-step Fibonacci-type sequences and the closed-form probabilities they
//! produce.
//!
//! A sequence with window `k` starts `1, 1` and every later term is the sum
//! of the previous `min(i - 1, k - 1)` terms. `k = 3` gives Fibonacci,
//! `k = 4` gives Tribonacci (`1, 1, 2, 4, 7, 13, ...`).

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{domain, Result};
use crate::ratio::{ExactInteger, ExactRatio};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SequenceSpec {
    k: usize,
    count: usize,
}

impl SequenceSpec {
    pub fn new(k: usize, count: usize) -> Result<Self> {
        if k < 2 {
            return Err(domain(format!("sequence window k must be >= 2, got {k}")));
        }
        if count < 1 {
            return Err(domain("sequence count must be >= 1"));
        }
        Ok(Self { k, count })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

/// The first `spec.count()` terms of the window-`k` sequence.
pub fn kbonacci(spec: SequenceSpec) -> Vec<ExactInteger> {
    let width = spec.k - 1;
    let mut terms: Vec<BigInt> = Vec::with_capacity(spec.count);
    // Running sum of the last `width` terms.
    let mut window = BigInt::from(0u32);
    for i in 0..spec.count {
        let next = if i < 2 { BigInt::one() } else { window.clone() };
        window += &next;
        if i >= width {
            window -= &terms[i - width];
        }
        terms.push(next);
    }
    terms
}

fn fibonacci(count: usize) -> Vec<ExactInteger> {
    kbonacci(SequenceSpec { k: 3, count })
}

fn tribonacci(count: usize) -> Vec<ExactInteger> {
    kbonacci(SequenceSpec { k: 4, count })
}

/// `F_1 * F_2 * ... * F_n`.
pub fn fibonorial(n: usize) -> Result<ExactInteger> {
    if n < 1 {
        return Err(domain("fibonorial needs n >= 1"));
    }
    Ok(fibonacci(n).iter().product())
}

/// Probability that no three of `n` uniform sticks form a triangle:
/// `1 / (F_1 ... F_n)`.
pub fn p_no_triangle(n: usize) -> Result<ExactRatio> {
    ExactRatio::reciprocal_of(&fibonorial(n)?)
}

/// Probability that no four of `n` uniform sticks form a quadrilateral:
/// `1 / ((T_n - T_{n-2}) * T_1 ... T_{n-1})`.
///
/// The formula is used from `n = 3` on, where it already evaluates to 1.
pub fn p_no_quadrilateral(n: usize) -> Result<ExactRatio> {
    if n < 1 {
        return Err(domain("p_no_quadrilateral needs n >= 1"));
    }
    if n < 3 {
        return Ok(ExactRatio::one());
    }
    let t = tribonacci(n);
    let correction = &t[n - 1] - &t[n - 3];
    let prefix: BigInt = t[..n - 1].iter().product();
    ExactRatio::reciprocal_of(&(correction * prefix))
}

/// Probability that `n` uniform sticks cannot form an `n`-gon: `1 / (n-1)!`.
pub fn p_cannot_ngon(n: usize) -> Result<ExactRatio> {
    if n < 2 {
        return Err(domain("p_cannot_ngon needs n >= 2"));
    }
    let factorial: BigInt = (1..n).map(BigInt::from).product();
    ExactRatio::reciprocal_of(&factorial)
}
