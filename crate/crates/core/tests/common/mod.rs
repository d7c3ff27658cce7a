//! Reference implementations used as oracles. They work directly on the
//! formula tree and on dense integer matrices, sharing no code with the
//! counting, contraction or reduction paths under test.

#![allow(dead_code)]

use std::collections::HashMap;

use zhcount::evaluator::ExactMatrix;
use zhcount::formula::{Formula, SatCompareInstance};
use zhcount::scalar::ExactScalar;

pub fn truth(f: &Formula, env: &HashMap<String, bool>) -> bool {
    match f {
        Formula::Var(x) => env[x],
        Formula::Const(b) => *b,
        Formula::Not(c) => !truth(c, env),
        Formula::And(l, r) => truth(l, env) && truth(r, env),
        Formula::Or(l, r) => truth(l, env) || truth(r, env),
        Formula::Implies(l, r) => !truth(l, env) || truth(r, env),
        Formula::Iff(l, r) => truth(l, env) == truth(r, env),
    }
}

/// Every assignment of `vars`, first variable most significant, in
/// lexicographic order.
pub fn assignments(vars: &[String]) -> Vec<HashMap<String, bool>> {
    let n = vars.len();
    (0..1u32 << n)
        .map(|a| vars.iter().enumerate().map(|(i, v)| (v.clone(), (a >> (n - 1 - i)) & 1 == 1)).collect())
        .collect()
}

pub fn models(f: &Formula, vars: &[String]) -> Vec<String> {
    assignments(vars)
        .into_iter()
        .filter(|env| truth(f, env))
        .map(|env| vars.iter().map(|v| if env[v] { '1' } else { '0' }).collect())
        .collect()
}

pub fn count(f: &Formula, vars: &[String]) -> u64 {
    models(f, vars).len() as u64
}

/// Residual count of `f` over `rest` with the leading variables fixed.
pub fn residual_count(f: &Formula, fixed: &HashMap<String, bool>, rest: &[String]) -> u64 {
    assignments(rest)
        .into_iter()
        .filter(|env| {
            let mut all = fixed.clone();
            all.extend(env.clone());
            truth(f, &all)
        })
        .count() as u64
}

pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// For each valuation of x (lexicographic), the pair (#psi, #rho).
pub fn instance_counts(inst: &SatCompareInstance) -> Vec<(u64, u64)> {
    let (n, m) = (inst.n(), inst.m());
    assignments(&names("x", n))
        .into_iter()
        .map(|v| {
            (residual_count(inst.psi(), &v, &names("y", m)), residual_count(inst.rho(), &v, &names("z", m)))
        })
        .collect()
}

/// The first x valuation with equal residual counts, as bits.
pub fn sat_compare_oracle(inst: &SatCompareInstance) -> Option<Vec<bool>> {
    let n = inst.n();
    instance_counts(inst)
        .iter()
        .position(|(a, b)| a == b)
        .map(|i| (0..n).map(|j| (i >> (n - 1 - j)) & 1 == 1).collect())
}

pub fn int(v: i64) -> ExactScalar {
    ExactScalar::from(v)
}

/// A dense row-major integer matrix from an exact matrix with integer
/// entries.
pub fn dense_int(m: &ExactMatrix) -> Vec<Vec<i64>> {
    (0..1u64 << m.n_out())
        .map(|r| {
            (0..1u64 << m.n_in())
                .map(|c| {
                    let v = m.get(r, c);
                    let (num, e) = v.as_dyadic().expect("integer entry");
                    assert_eq!(e, 0, "integer entry");
                    i64::try_from(num).expect("small entry")
                })
                .collect()
        })
        .collect()
}

pub fn dense_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    a.iter()
        .map(|row| (0..b[0].len()).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect())
        .collect()
}

pub fn dense_transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}
