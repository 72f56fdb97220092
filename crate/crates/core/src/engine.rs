//! Exact no-k-gon probabilities by successive exponential integration.
//!
//! Writing the sorted lengths as normalized cumulative sums of unit-rate
//! exponentials `X_1, X_2, ...`, the window condition
//! `U_(i) + ... + U_(i+k-2) <= U_(i+k-1)` becomes
//!
//! ```text
//! (k-2)(X_1 + ... + X_i) + (k-3) X_{i+1} + ... + 1 X_{i+k-3} + 0 X_{i+k-2} <= X_{i+k-1}
//! ```
//!
//! so `X_k, ..., X_n` each have a lower bound that is linear in the earlier
//! variables and `X_1, ..., X_{k-1}` are free. Integrating `X_n` first, then
//! `X_{n-1}`, and so on, the integrand always stays of the form
//!
//! ```text
//! exp(-(a (x_1 + ... + x_m) + b_1 x_{m+1} + ... + b_{k-2} x_{m+k-2})) / divisor
//! ```
//!
//! and each integration is a fixed integer update of `(a, b, divisor)`. For
//! `k = 3` the pair `(a, b_1)` runs through consecutive Fibonacci numbers; for
//! `k = 4` the triple `(a, b_1, b_2)` is the `(R, S, T)` Tribonacci system.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{domain, Error, Result};
use crate::ratio::{ExactInteger, ExactRatio};

/// `n` sticks, forbid every `k`-gon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KGonQuery {
    n: usize,
    k: usize,
}

impl KGonQuery {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 1 {
            return Err(domain("number of sticks n must be >= 1"));
        }
        if k < 3 {
            return Err(domain(format!("polygon size k must be >= 3, got {k}")));
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// True when fewer than `k` sticks exist, so the event is certain.
    pub fn is_vacuous(&self) -> bool {
        self.n < self.k
    }
}

/// Exponent coefficients of the partially integrated density.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffState {
    k: usize,
    prefix_len: usize,
    a: ExactInteger,
    b: Vec<ExactInteger>,
    divisor: ExactInteger,
}

impl CoeffState {
    /// Builds a state from raw parts, checking the structural invariants.
    pub fn from_parts(
        k: usize,
        prefix_len: usize,
        a: ExactInteger,
        b: Vec<ExactInteger>,
        divisor: ExactInteger,
    ) -> Result<Self> {
        let one = BigInt::one();
        if k < 3 {
            return Err(domain(format!("polygon size k must be >= 3, got {k}")));
        }
        if prefix_len < 1 {
            return Err(domain("prefix_len must be >= 1"));
        }
        if b.len() != k - 2 {
            return Err(domain(format!("expected {} trailing coefficients, got {}", k - 2, b.len())));
        }
        if a < one || divisor < one || b.iter().any(|x| *x < one) {
            return Err(domain("coefficients and divisor must be >= 1"));
        }
        Ok(Self { k, prefix_len, a, b, divisor })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of leading variables that share the coefficient `a`.
    pub fn prefix_len(&self) -> usize {
        self.prefix_len
    }

    pub fn a(&self) -> &ExactInteger {
        &self.a
    }

    /// Coefficients of the `k - 2` trailing variables, in variable order.
    pub fn b(&self) -> &[ExactInteger] {
        &self.b
    }

    pub fn divisor(&self) -> &ExactInteger {
        &self.divisor
    }

    /// Integrates out the innermost constrained variable.
    ///
    /// With `t = b_{k-2}` (the coefficient of the variable being removed):
    /// `divisor *= t`, `a' = a + (k-2) t`, `b_1' = a + (k-3) t`, and
    /// `b_{j+1}' = b_j + (k-3-j) t` for `1 <= j <= k-3`.
    pub fn step(&self) -> Result<CoeffState> {
        if self.prefix_len < 2 {
            return Err(Error::Contract(format!(
                "step needs prefix_len >= 2, state has {}",
                self.prefix_len
            )));
        }
        let k = self.k;
        let t = &self.b[k - 3];
        let weight = |w: usize| t * BigInt::from(w);

        let mut b = Vec::with_capacity(k - 2);
        b.push(&self.a + weight(k - 3));
        for j in 1..=k - 3 {
            b.push(&self.b[j - 1] + weight(k - 3 - j));
        }
        Ok(CoeffState {
            k,
            prefix_len: self.prefix_len - 1,
            a: &self.a + weight(k - 2),
            b,
            divisor: &self.divisor * t,
        })
    }

    /// `divisor * a * b_1 * ... * b_{k-2}`: the reciprocal of the probability
    /// once only the `k - 1` free variables remain.
    pub fn final_denominator(&self) -> ExactInteger {
        let coeffs: BigInt = self.b.iter().product();
        &self.divisor * &self.a * coeffs
    }
}

/// Uniform starting state: every exponent coefficient is 1.
pub fn init_state(query: KGonQuery) -> Result<CoeffState> {
    if query.is_vacuous() {
        return Err(domain(format!(
            "engine needs n >= k, got n = {}, k = {}",
            query.n, query.k
        )));
    }
    let k = query.k;
    Ok(CoeffState {
        k,
        prefix_len: query.n - (k - 2),
        a: BigInt::one(),
        b: vec![BigInt::one(); k - 2],
        divisor: BigInt::one(),
    })
}

/// Every state from the initial one through the last constrained
/// integration (`n - k + 1` steps).
pub fn coefficient_trace(query: KGonQuery) -> Result<Vec<CoeffState>> {
    let mut state = init_state(query)?;
    let steps = query.n - (query.k - 1);
    let mut trace = Vec::with_capacity(steps + 1);
    for _ in 0..steps {
        let next = state.step()?;
        trace.push(state);
        state = next;
    }
    trace.push(state);
    Ok(trace)
}

/// Exact probability that no `k` of `n` uniform sticks form a `k`-gon.
pub fn probability(query: KGonQuery) -> ExactRatio {
    if query.is_vacuous() {
        return ExactRatio::one();
    }
    let mut state = init_state(query).expect("query is not vacuous");
    for _ in 0..query.n - (query.k - 1) {
        state = state.step().expect("prefix_len stays >= 2 until the last step");
    }
    debug_assert_eq!(state.prefix_len, 1);
    ExactRatio::reciprocal_of(&state.final_denominator()).expect("denominator is positive")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[u64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn state(k: usize, prefix_len: usize, a: u64, b: &[u64], div: u64) -> CoeffState {
        CoeffState::from_parts(k, prefix_len, BigInt::from(a), ints(b), BigInt::from(div)).unwrap()
    }

    fn q(n: usize, k: usize) -> KGonQuery {
        KGonQuery::new(n, k).unwrap()
    }

    #[test]
    fn query_domain() {
        assert!(KGonQuery::new(0, 3).is_err());
        assert!(KGonQuery::new(5, 2).is_err());
        assert!(q(4, 7).is_vacuous());
        assert!(!q(7, 7).is_vacuous());
    }

    #[test]
    fn init_state_examples() {
        assert_eq!(init_state(q(3, 3)).unwrap(), state(3, 2, 1, &[1], 1));
        assert_eq!(init_state(q(6, 4)).unwrap(), state(4, 4, 1, &[1, 1], 1));
        assert_eq!(init_state(q(5, 5)).unwrap(), state(5, 2, 1, &[1, 1, 1], 1));
        assert!(matches!(init_state(q(2, 3)), Err(Error::Domain(_))));
    }

    #[test]
    fn step_examples() {
        // first integration of the uniform exponent: 2(x_1 + ... + x_{n-2}) + x_{n-1}
        assert_eq!(state(3, 5, 1, &[1], 1).step().unwrap(), state(3, 4, 2, &[1], 1));
        assert_eq!(state(3, 5, 2, &[1], 1).step().unwrap(), state(3, 4, 3, &[2], 1));
        // R_3 = 5, S_3 = 4, T_3 = 2
        assert_eq!(state(4, 5, 3, &[2, 1], 1).step().unwrap(), state(4, 4, 5, &[4, 2], 1));
        // k = 4 from uniform: 3(x_1..x_{n-3}) + 2 x_{n-2} + x_{n-1}
        assert_eq!(state(4, 5, 1, &[1, 1], 1).step().unwrap(), state(4, 4, 3, &[2, 1], 1));
    }

    #[test]
    fn step_multiplies_divisor_by_removed_coefficient() {
        let s = state(5, 3, 4, &[3, 2, 5], 7).step().unwrap();
        assert_eq!(s.divisor(), &BigInt::from(35));
        // a + 3t, a + 2t, b_1 + 1t, b_2 + 0t
        assert_eq!(s.a(), &BigInt::from(19));
        assert_eq!(s.b(), &ints(&[14, 8, 2])[..]);
    }

    #[test]
    fn step_requires_a_remaining_constraint() {
        let last = state(3, 1, 5, &[3], 2);
        assert!(matches!(last.step(), Err(Error::Contract(_))));
    }

    #[test]
    fn from_parts_checks_invariants() {
        assert!(CoeffState::from_parts(4, 2, BigInt::from(1), ints(&[1]), BigInt::from(1)).is_err());
        assert!(CoeffState::from_parts(3, 2, BigInt::from(0), ints(&[1]), BigInt::from(1)).is_err());
        assert!(CoeffState::from_parts(3, 0, BigInt::from(1), ints(&[1]), BigInt::from(1)).is_err());
    }

    #[test]
    fn probability_examples() {
        assert_eq!(probability(q(3, 3)), ExactRatio::new(1, 2).unwrap());
        assert_eq!(probability(q(5, 4)), ExactRatio::new(1, 40).unwrap());
        assert_eq!(probability(q(4, 7)), ExactRatio::one());
        assert_eq!(probability(q(1, 3)), ExactRatio::one());
    }

    #[test]
    fn trace_examples() {
        let t = coefficient_trace(q(5, 3)).unwrap();
        let b1: Vec<_> = t.iter().map(|s| s.b()[0].clone()).collect();
        assert_eq!(b1, ints(&[1, 1, 2, 3]));

        let t = coefficient_trace(q(7, 4)).unwrap();
        let b2: Vec<_> = t.iter().map(|s| s.b()[1].clone()).collect();
        assert_eq!(&b2[..4], &ints(&[1, 1, 2, 4])[..]);
        assert_eq!(b2, ints(&[1, 1, 2, 4, 7]));

        assert_eq!(coefficient_trace(q(3, 3)).unwrap().len(), 2);
        assert!(coefficient_trace(q(3, 4)).is_err());
    }
}
