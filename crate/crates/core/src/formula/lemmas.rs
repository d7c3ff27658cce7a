//! Counting problems and counting-preserving constructions on formulae.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{count_sat_with, fresh_name, parse, positional_vars, Formula, FormulaError, Limits};

/// A Compare#SAT instance: `phi` over `x`, `psi` over `y`, `|x| = |y|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompareInstance {
    pub phi: Formula,
    pub x: Vec<String>,
    pub psi: Formula,
    pub y: Vec<String>,
}

impl CompareInstance {
    pub fn new(phi: Formula, x: Vec<String>, psi: Formula, y: Vec<String>) -> Result<Self, FormulaError> {
        if x.len() != y.len() {
            return Err(FormulaError::Instance(format!(
                "variable lists differ in length ({} vs {})",
                x.len(),
                y.len()
            )));
        }
        check_subset(&phi, &x)?;
        check_subset(&psi, &y)?;
        Ok(CompareInstance { phi, x, psi, y })
    }
}

fn check_subset(phi: &Formula, vars: &[String]) -> Result<(), FormulaError> {
    match phi.vars().into_iter().find(|v| !vars.contains(v)) {
        Some(v) => Err(FormulaError::UnlistedVariable(v)),
        None => Ok(()),
    }
}

pub fn compare_sharp_sat(inst: &CompareInstance, limits: &Limits) -> Result<bool, FormulaError> {
    Ok(count_sat_with(&inst.phi, &inst.x, limits)? == count_sat_with(&inst.psi, &inst.y, limits)?)
}

/// Result of [`concat_formulae`]: `count(formula, vars)` written in binary is
/// `count(phi)` followed by `count(psi)` padded to `low_bits` digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concat {
    pub formula: Formula,
    pub vars: Vec<String>,
    pub low_bits: usize,
}

/// `(phi ∧ z) ∨ (x1 ∧ … ∧ xn ∧ psi ∧ ¬z ∧ z')` over `x ++ y ++ [z, z']`.
///
/// Variables of `psi` that collide with `x`, and the two selector variables,
/// get fresh `_`-prefixed names.
pub fn concat_formulae(phi: &Formula, x: &[String], psi: &Formula, y: &[String]) -> Concat {
    let mut used: BTreeSet<String> = x.iter().cloned().collect();
    used.extend(phi.vars());
    used.extend(y.iter().cloned());
    used.extend(psi.vars());

    let xs: BTreeSet<&String> = x.iter().collect();
    let mut renaming = BTreeMap::new();
    for v in y.iter().cloned().chain(psi.vars()) {
        if xs.contains(&v) && !renaming.contains_key(&v) {
            let fresh = fresh_name("y", &used);
            used.insert(fresh.clone());
            renaming.insert(v, fresh);
        }
    }
    let psi = psi.rename(&renaming);
    let y: Vec<String> = y.iter().map(|v| renaming.get(v).cloned().unwrap_or_else(|| v.clone())).collect();

    let z = fresh_name("z", &used);
    used.insert(z.clone());
    let z2 = fresh_name("z", &used);

    let high = Formula::and(phi.clone(), Formula::var(&z));
    let low = Formula::and_all(
        x.iter()
            .map(Formula::var)
            .chain([psi, Formula::not(Formula::var(&z)), Formula::var(&z2)]),
    );
    let mut vars = x.to_vec();
    vars.extend(y.iter().cloned());
    vars.push(z);
    vars.push(z2);
    Concat { formula: Formula::or(high, low), vars, low_bits: y.len() + 1 }
}

/// Combines two Compare#SAT instances into one that holds iff both hold.
pub fn concat_compare(first: &CompareInstance, second: &CompareInstance) -> CompareInstance {
    let rho = concat_formulae(&first.phi, &first.x, &second.phi, &second.x);
    let tau = concat_formulae(&first.psi, &first.y, &second.psi, &second.y);
    CompareInstance { phi: rho.formula, x: rho.vars, psi: tau.formula, y: tau.vars }
}

/// A formula over `vars` with exactly `k` satisfying assignments, for
/// `0 <= k <= 2^n`.
///
/// With `a_0 … a_n` the `n + 1` binary digits of `k` (most significant
/// first) the result is `¬l(a0) → (x1 ⋈a1 (x2 ⋈a2 … (xn ∧ l(an))))` where
/// `⋈0 = ∧`, `⋈1 = ∨` and `l` maps digits to constants.
pub fn formula_with_count(vars: &[String], k: &BigInt) -> Result<Formula, FormulaError> {
    let n = vars.len();
    let bound = BigInt::one() << n;
    if k.is_negative() || *k > bound {
        return Err(FormulaError::OutOfRange(format!("count {k} for {n} variables")));
    }
    // digit a_i has weight 2^(n - i)
    let digit = |i: usize| k.bit((n - i) as u64);
    let lit = |i: usize| Formula::Const(digit(i));
    let body = if n == 0 {
        lit(0)
    } else {
        let innermost = Formula::and(Formula::var(&vars[n - 1]), lit(n));
        (1..n).rev().fold(innermost, |inner, i| {
            let x = Formula::var(&vars[i - 1]);
            if digit(i) {
                Formula::or(x, inner)
            } else {
                Formula::and(x, inner)
            }
        })
    };
    Ok(Formula::implies(Formula::not(lit(0)), body))
}

/// A SAT&Compare#SAT instance: `psi` over `x1..xn, y1..ym` and `rho` over
/// `x1..xn, z1..zm`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatCompareInstance {
    n: usize,
    m: usize,
    psi: Formula,
    rho: Formula,
}

impl SatCompareInstance {
    pub fn new(n: usize, m: usize, psi: Formula, rho: Formula) -> Result<Self, FormulaError> {
        let inst = SatCompareInstance { n, m, psi, rho };
        let mut xy = inst.x_vars();
        xy.extend(inst.y_vars());
        check_subset(&inst.psi, &xy)?;
        let mut xz = inst.x_vars();
        xz.extend(inst.z_vars());
        check_subset(&inst.rho, &xz)?;
        Ok(inst)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn psi(&self) -> &Formula {
        &self.psi
    }

    pub fn rho(&self) -> &Formula {
        &self.rho
    }

    pub fn x_vars(&self) -> Vec<String> {
        positional_vars("x", self.n)
    }

    pub fn y_vars(&self) -> Vec<String> {
        positional_vars("y", self.m)
    }

    pub fn z_vars(&self) -> Vec<String> {
        positional_vars("z", self.m)
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceRepr {
    n: usize,
    m: usize,
    psi: String,
    rho: String,
}

impl Serialize for SatCompareInstance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        InstanceRepr { n: self.n, m: self.m, psi: self.psi.to_string(), rho: self.rho.to_string() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SatCompareInstance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = InstanceRepr::deserialize(d)?;
        let psi = parse(&r.psi).map_err(D::Error::custom)?;
        let rho = parse(&r.rho).map_err(D::Error::custom)?;
        SatCompareInstance::new(r.n, r.m, psi, rho).map_err(D::Error::custom)
    }
}
