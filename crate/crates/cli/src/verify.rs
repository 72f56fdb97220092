//! Cross-method identity checks behind `pickup verify`.

use pickup_sticks::{
    coefficient_trace, kbonacci, p_cannot_ngon, p_no_quadrilateral, p_no_triangle, probability_oracle, ExactInteger, ExactRatio,
    KGonQuery, SequenceSpec,
};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// `(n, k)` of the first disagreement.
    pub failed_at: Option<(usize, usize)>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub max_n: usize,
    pub max_k: usize,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

fn q(n: usize, k: usize) -> KGonQuery {
    KGonQuery::new(n, k).expect("n >= 1, k >= 3")
}

fn compare<'a>(
    name: String,
    pairs: impl IntoIterator<Item = (usize, usize)>,
    mut lhs: impl FnMut(usize, usize) -> ExactRatio + 'a,
    mut rhs: impl FnMut(usize, usize) -> ExactRatio + 'a,
) -> Check {
    let mut count = 0;
    for (n, k) in pairs {
        let (a, b) = (lhs(n, k), rhs(n, k));
        if a != b {
            return Check {
                name,
                passed: false,
                failed_at: Some((n, k)),
                detail: format!("mismatch at (n={n}, k={k}): {a} vs {b}"),
            };
        }
        count += 1;
    }
    let detail = if count == 1 { "1 case".to_owned() } else { format!("{count} cases") };
    Check { name, passed: true, failed_at: None, detail }
}

fn trace_check(name: String, n: usize, k: usize, rule: impl Fn(usize, &[Vec<ExactInteger>]) -> bool) -> Check {
    let trace = coefficient_trace(q(n, k)).expect("n >= k");
    let rows: Vec<Vec<_>> = trace
        .iter()
        .map(|s| std::iter::once(s.a().clone()).chain(s.b().iter().cloned()).collect())
        .collect();
    match (1..rows.len()).find(|&j| !rule(j, &rows)) {
        None => Check { name, passed: true, failed_at: None, detail: format!("{} steps", rows.len() - 1) },
        Some(j) => Check {
            name,
            passed: false,
            failed_at: Some((n, k)),
            detail: format!("identity fails after step {j}"),
        },
    }
}

/// Runs every identity for `n <= max_n`, `3 <= k <= max_k`, using `engine`
/// as the integration engine under test.
pub fn run_verify(max_n: usize, max_k: usize, engine: &dyn Fn(KGonQuery) -> ExactRatio) -> VerifyReport {
    let mut checks = Vec::new();
    let eng = |n, k| engine(q(n, k));

    checks.push(compare(
        format!("engine(n,3) = 1/(F_1...F_n) for n = 1..{max_n}"),
        (1..=max_n).map(|n| (n, 3)),
        eng,
        |n, _| p_no_triangle(n).expect("n >= 1"),
    ));
    if max_k >= 4 {
        checks.push(compare(
            format!("engine(n,4) = 1/((T_n - T_(n-2)) T_1...T_(n-1)) for n = 1..{max_n}"),
            (1..=max_n).map(|n| (n, 4)),
            eng,
            |n, _| p_no_quadrilateral(n).expect("n >= 1"),
        ));
    }
    checks.push(compare(
        format!("engine(n,k) = oracle(n,k) for n = 1..{max_n}, k = 3..{max_k}"),
        (3..=max_k).flat_map(|k| (1..=max_n).map(move |n| (n, k))),
        eng,
        |n, k| probability_oracle(q(n, k)),
    ));
    for k in 3..=max_k {
        checks.push(compare(
            format!("engine({k},{k}) = 1/{}!", k - 1),
            [(k, k)],
            eng,
            |n, _| p_cannot_ngon(n).expect("n >= 2"),
        ));
    }
    if max_n >= 3 {
        let fib = kbonacci(SequenceSpec::new(3, max_n + 2).expect("valid"));
        checks.push(trace_check(
            format!("k=3 coefficient trace is (F_(j+2), F_(j+1)) for n = {max_n}"),
            max_n,
            3,
            |j, rows| rows[j][0] == fib[j + 1] && rows[j][1] == fib[j],
        ));
    }
    if max_n >= 4 && max_k >= 4 {
        let trib = kbonacci(SequenceSpec::new(4, max_n).expect("valid"));
        checks.push(trace_check(
            format!("k=4 coefficient trace: R_j - S_j = T_(j-1), T_j = S_(j-1) = Tribonacci for n = {max_n}"),
            max_n,
            4,
            |j, rows| {
                let (prev, cur) = (&rows[j - 1], &rows[j]);
                &cur[0] - &cur[1] == prev[2] && cur[2] == prev[1] && cur[2] == trib[j]
            },
        ));
    }

    let passed = checks.iter().all(|c| c.passed);
    VerifyReport { max_n, max_k, passed, checks }
}
