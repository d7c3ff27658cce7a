//! Clause-list normal form, the 0-1 word codec and DIMACS I/O.

use std::collections::BTreeSet;
use std::fmt;

use super::{positional_vars, Formula, FormulaError, Limits};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

/// By variable, `x` before `¬x`.
impl Ord for Literal {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.var, !self.positive).cmp(&(other.var, !other.positive))
    }
}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, positive: false }
    }
}

/// A conjunction of clauses over an ordered variable list. Clauses are kept
/// sorted and free of repeated literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    variables: Vec<String>,
    clauses: Vec<Vec<Literal>>,
}

impl CnfFormula {
    pub fn new(variables: Vec<String>, clauses: Vec<Vec<Literal>>) -> Result<Self, FormulaError> {
        let n = variables.len();
        let mut seen = BTreeSet::new();
        for v in &variables {
            if !seen.insert(v) {
                return Err(FormulaError::DuplicateVariable(v.clone()));
            }
        }
        let clauses = clauses
            .into_iter()
            .map(|c| {
                if let Some(l) = c.iter().find(|l| l.var >= n) {
                    return Err(FormulaError::LiteralOutOfRange { index: l.var, n });
                }
                let set: BTreeSet<Literal> = c.into_iter().collect();
                Ok(set.into_iter().collect())
            })
            .collect::<Result<_, _>>()?;
        Ok(CnfFormula { variables, clauses })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// The formula as an AST: `(l ∨ l ∨ …) ∧ …`, empty clause `F`, no clauses `T`.
    pub fn to_formula(&self) -> Formula {
        Formula::and_all(self.clauses.iter().map(|c| {
            Formula::or_all(c.iter().map(|l| {
                let v = Formula::var(self.variables[l.var].clone());
                if l.positive {
                    v
                } else {
                    Formula::not(v)
                }
            }))
        }))
    }

    pub fn satisfied_by(&self, bit: impl Fn(usize) -> bool) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| bit(l.var) == l.positive))
    }

    /// Brute-force count over this formula's own variable list.
    pub fn count_sat(&self, limits: &Limits) -> Result<u64, FormulaError> {
        let n = self.num_vars();
        limits.check_vars(n)?;
        Ok((0..1u64 << n)
            .filter(|&a| self.satisfied_by(|i| super::packed_bit(a, n, i)))
            .count() as u64)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars(), self.num_clauses());
        for c in &self.clauses {
            for l in c {
                let idx = l.var as i64 + 1;
                out.push_str(&format!("{} ", if l.positive { idx } else { -idx }));
            }
            out.push_str("0\n");
        }
        out
    }

    /// Parses DIMACS CNF. Variables are named `x1..xn`.
    pub fn from_dimacs(src: &str) -> Result<Self, FormulaError> {
        let bad = |m: &str| FormulaError::Dimacs(m.to_string());
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for line in src.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if line.starts_with('%') {
                break;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                match parts.as_slice() {
                    ["cnf", n, m] => {
                        let n = n.parse().map_err(|_| bad("bad variable count"))?;
                        let m = m.parse().map_err(|_| bad("bad clause count"))?;
                        header = Some((n, m));
                    }
                    _ => return Err(bad("expected `p cnf <vars> <clauses>`")),
                }
                continue;
            }
            let (n, _) = header.ok_or_else(|| bad("clause before header"))?;
            for tok in line.split_whitespace() {
                let x: i64 = tok.parse().map_err(|_| bad(&format!("bad literal `{tok}`")))?;
                if x == 0 {
                    clauses.push(std::mem::take(&mut current));
                    continue;
                }
                let var = x.unsigned_abs() as usize - 1;
                if var >= n {
                    return Err(bad(&format!("literal {x} exceeds declared {n} variables")));
                }
                current.push(Literal { var, positive: x > 0 });
            }
        }
        let (n, m) = header.ok_or_else(|| bad("missing header"))?;
        if !current.is_empty() {
            clauses.push(current);
        }
        if clauses.len() != m {
            return Err(bad(&format!("header declares {m} clauses, found {}", clauses.len())));
        }
        CnfFormula::new(positional_vars("x", n), clauses)
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

#[derive(Debug, Clone)]
enum Nnf {
    Lit(String, bool),
    Const(bool),
    And(Box<Nnf>, Box<Nnf>),
    Or(Box<Nnf>, Box<Nnf>),
}

fn nnf(f: &Formula, positive: bool) -> Nnf {
    let and = |a, b| Nnf::And(Box::new(a), Box::new(b));
    let or = |a, b| Nnf::Or(Box::new(a), Box::new(b));
    match f {
        Formula::Var(x) => Nnf::Lit(x.clone(), positive),
        Formula::Const(b) => Nnf::Const(*b == positive),
        Formula::Not(c) => nnf(c, !positive),
        Formula::And(l, r) if positive => and(nnf(l, true), nnf(r, true)),
        Formula::And(l, r) => or(nnf(l, false), nnf(r, false)),
        Formula::Or(l, r) if positive => or(nnf(l, true), nnf(r, true)),
        Formula::Or(l, r) => and(nnf(l, false), nnf(r, false)),
        Formula::Implies(l, r) if positive => or(nnf(l, false), nnf(r, true)),
        Formula::Implies(l, r) => and(nnf(l, true), nnf(r, false)),
        Formula::Iff(l, r) if positive => {
            and(or(nnf(l, false), nnf(r, true)), or(nnf(l, true), nnf(r, false)))
        }
        Formula::Iff(l, r) => and(or(nnf(l, true), nnf(r, true)), or(nnf(l, false), nnf(r, false))),
    }
}

type Clauses = Vec<BTreeSet<Literal>>;

fn distribute(f: &Nnf, index: &dyn Fn(&str) -> usize, cap: usize) -> Result<Clauses, FormulaError> {
    Ok(match f {
        Nnf::Lit(x, p) => vec![BTreeSet::from([Literal { var: index(x), positive: *p }])],
        Nnf::Const(true) => vec![],
        Nnf::Const(false) => vec![BTreeSet::new()],
        Nnf::And(l, r) => {
            let mut out = distribute(l, index, cap)?;
            out.extend(distribute(r, index, cap)?);
            if out.len() > cap {
                return Err(FormulaError::SizeBlowup { max: cap });
            }
            dedup(out)
        }
        Nnf::Or(l, r) => {
            let (a, b) = (distribute(l, index, cap)?, distribute(r, index, cap)?);
            if a.len().saturating_mul(b.len()) > cap {
                return Err(FormulaError::SizeBlowup { max: cap });
            }
            let mut out = Vec::with_capacity(a.len() * b.len());
            for ca in &a {
                for cb in &b {
                    out.push(ca.union(cb).copied().collect());
                }
            }
            dedup(out)
        }
    })
}

fn dedup(clauses: Clauses) -> Clauses {
    let mut seen = BTreeSet::new();
    clauses.into_iter().filter(|c| seen.insert(c.clone())).collect()
}

/// Converts to CNF over exactly `vars`, with no auxiliary variables, so the
/// model count over `vars` is unchanged. Expansion is distributive and may be
/// exponential; `limits.max_clauses` bounds it.
pub fn to_cnf(phi: &Formula, vars: &[String], limits: &Limits) -> Result<CnfFormula, FormulaError> {
    limits.check_vars(vars.len())?;
    // validates membership and uniqueness
    super::Compiled::new(phi, vars)?;
    let index = |x: &str| vars.iter().position(|v| v == x).expect("checked above");
    let clauses = distribute(&nnf(&phi.simplify(), true), &index, limits.max_clauses)?;
    CnfFormula::new(vars.to_vec(), clauses.into_iter().map(|c| c.into_iter().collect()).collect())
}

/// A 0-1 word of length `2k²`, read as `k` blocks of `2k` symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word01 {
    bits: Vec<bool>,
    k: usize,
}

impl Word01 {
    pub fn from_bits(bits: Vec<bool>) -> Result<Self, FormulaError> {
        let len = bits.len();
        if !len.is_multiple_of(2) {
            return Err(FormulaError::BadLength(len));
        }
        let half = len / 2;
        let k = (half as f64).sqrt().round() as usize;
        if k * k != half {
            return Err(FormulaError::BadLength(len));
        }
        Ok(Word01 { bits, k })
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Symbols in pairs and clauses separated, e.g. `10 00 00  00 10 01`.
    pub fn grouped(&self) -> String {
        let pair = |i: usize| format!("{}{}", self.bits[i] as u8, self.bits[i + 1] as u8);
        (0..self.k)
            .map(|c| (0..self.k).map(|j| pair(2 * (c * self.k + j))).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("  ")
    }
}

impl fmt::Display for Word01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", b as u8)?;
        }
        Ok(())
    }
}

/// Parses a `0`/`1` string; whitespace is ignored.
impl std::str::FromStr for Word01 {
    type Err = FormulaError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(FormulaError::Parse { pos: 0, msg: format!("`{other}` is not 0 or 1") }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Word01::from_bits(bits)
    }
}

/// The 0-1 encoding: with `k = max(m, n)`, pad with `k - m` clauses
/// `(x1 ∨ ¬x1)`, append the fresh literals `x_{n+1} … x_k` to every clause,
/// then emit two flags per variable per clause (`x_i` present, `¬x_i` present).
pub fn encode01(cnf: &CnfFormula) -> Word01 {
    let (n, m) = (cnf.num_vars(), cnf.num_clauses());
    let k = n.max(m);
    let mut clauses: Vec<Vec<Literal>> = cnf.clauses().to_vec();
    clauses.extend((m..k).map(|_| vec![Literal::pos(0), Literal::neg(0)]));
    let mut bits = vec![false; 2 * k * k];
    for (c, clause) in clauses.iter().enumerate() {
        let block = &mut bits[2 * k * c..2 * k * (c + 1)];
        for l in clause {
            block[2 * l.var + usize::from(!l.positive)] = true;
        }
        for j in n..k {
            block[2 * j] = true;
        }
    }
    Word01 { bits, k }
}

/// Reads a word back as `k` clauses on `x1..xk`. Zero flags contribute no
/// literal (a `False` disjunct changes nothing).
pub fn decode01(w: &Word01) -> CnfFormula {
    let k = w.k;
    let clauses = (0..k)
        .map(|c| {
            let block = &w.bits[2 * k * c..2 * k * (c + 1)];
            (0..k)
                .flat_map(|j| {
                    let pos = block[2 * j].then_some(Literal::pos(j));
                    let neg = block[2 * j + 1].then_some(Literal::neg(j));
                    pos.into_iter().chain(neg)
                })
                .collect()
        })
        .collect();
    CnfFormula::new(positional_vars("x", k), clauses).expect("indices bounded by k")
}
