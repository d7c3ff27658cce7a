//! Boolean formulae, brute-force model counting, and the counting-preserving
//! surgeries used by the reductions.

mod cnf;
mod lemmas;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

pub use cnf::{decode01, encode01, to_cnf, CnfFormula, Literal, Word01};
pub use lemmas::{
    compare_sharp_sat, concat_compare, concat_formulae, formula_with_count, CompareInstance,
    Concat, SatCompareInstance,
};
pub use parse::parse;

/// Default cap on brute-force enumeration.
pub const DEFAULT_MAX_VARS: usize = 20;
/// Hard ceiling: assignments are enumerated as `u64` bit patterns.
pub const ABSOLUTE_MAX_VARS: usize = 62;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("variable `{0}` has no value")]
    UnassignedVariable(String),
    #[error("variable `{0}` is not in the variable list")]
    UnlistedVariable(String),
    #[error("duplicate variable `{0}` in variable list")]
    DuplicateVariable(String),
    #[error("{n} variables exceed the brute-force bound of {max}")]
    TooManyVariables { n: usize, max: usize },
    #[error("CNF expansion exceeds {max} clauses")]
    SizeBlowup { max: usize },
    #[error("{0} is out of range")]
    OutOfRange(String),
    #[error("word of length {0} is not of the form 2k^2")]
    BadLength(usize),
    #[error("literal refers to variable index {index} but only {n} variables exist")]
    LiteralOutOfRange { index: usize, n: usize },
    #[error("malformed DIMACS: {0}")]
    Dimacs(String),
    #[error("malformed instance: {0}")]
    Instance(String),
}

/// Runtime bounds for the exponential procedures in this module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_vars: usize,
    pub max_clauses: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_vars: DEFAULT_MAX_VARS, max_clauses: 1 << 16 }
    }
}

impl Limits {
    pub fn check_vars(&self, n: usize) -> Result<(), FormulaError> {
        let max = self.max_vars.min(ABSOLUTE_MAX_VARS);
        if n > max {
            Err(FormulaError::TooManyVariables { n, max })
        } else {
            Ok(())
        }
    }
}

/// A (possibly partial) assignment of truth values to variable names.
pub type Valuation = BTreeMap<String, bool>;

/// Builds the valuation mapping `vars[i]` to `bits[i]`.
pub fn valuation_from_bits(vars: &[String], bits: &[bool]) -> Valuation {
    vars.iter().cloned().zip(bits.iter().copied()).collect()
}

/// Boolean formula over named variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(String),
    Const(bool),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Formula::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Self {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    /// Left-nested conjunction; the empty conjunction is `T`.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Self {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::Const(true))
    }

    /// Left-nested disjunction; the empty disjunction is `F`.
    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Self {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::Const(false))
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_vars(&mut |v| {
            out.insert(v.to_string());
        });
        out
    }

    /// Variables in order of first occurrence, left to right.
    pub fn var_order(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.visit_vars(&mut |v| {
            if seen.insert(v.to_string()) {
                out.push(v.to_string());
            }
        });
        out
    }

    fn visit_vars(&self, f: &mut impl FnMut(&str)) {
        match self {
            Formula::Var(v) => f(v),
            Formula::Const(_) => {}
            Formula::Not(c) => c.visit_vars(f),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                l.visit_vars(f);
                r.visit_vars(f);
            }
        }
    }

    /// Number of occurrences of each variable.
    pub fn occurrences(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        self.visit_vars(&mut |v| *out.entry(v.to_string()).or_insert(0) += 1);
        out
    }

    pub fn eval(&self, v: &Valuation) -> Result<bool, FormulaError> {
        Ok(match self {
            Formula::Var(x) => {
                *v.get(x).ok_or_else(|| FormulaError::UnassignedVariable(x.clone()))?
            }
            Formula::Const(b) => *b,
            Formula::Not(c) => !c.eval(v)?,
            Formula::And(l, r) => l.eval(v)? & r.eval(v)?,
            Formula::Or(l, r) => l.eval(v)? | r.eval(v)?,
            Formula::Implies(l, r) => !l.eval(v)? | r.eval(v)?,
            Formula::Iff(l, r) => l.eval(v)? == r.eval(v)?,
        })
    }

    /// Applies a partial valuation and folds constants.
    pub fn substitute(&self, v: &Valuation) -> Formula {
        match self {
            Formula::Var(x) => match v.get(x) {
                Some(&b) => Formula::Const(b),
                None => self.clone(),
            },
            Formula::Const(_) => self.clone(),
            Formula::Not(c) => fold_not(c.substitute(v)),
            Formula::And(l, r) => fold_and(l.substitute(v), r.substitute(v)),
            Formula::Or(l, r) => fold_or(l.substitute(v), r.substitute(v)),
            Formula::Implies(l, r) => fold_implies(l.substitute(v), r.substitute(v)),
            Formula::Iff(l, r) => fold_iff(l.substitute(v), r.substitute(v)),
        }
    }

    /// Constant folding only.
    pub fn simplify(&self) -> Formula {
        self.substitute(&Valuation::new())
    }

    pub fn rename(&self, map: &BTreeMap<String, String>) -> Formula {
        match self {
            Formula::Var(x) => Formula::Var(map.get(x).cloned().unwrap_or_else(|| x.clone())),
            Formula::Const(_) => self.clone(),
            Formula::Not(c) => Formula::not(c.rename(map)),
            Formula::And(l, r) => Formula::and(l.rename(map), r.rename(map)),
            Formula::Or(l, r) => Formula::or(l.rename(map), r.rename(map)),
            Formula::Implies(l, r) => Formula::implies(l.rename(map), r.rename(map)),
            Formula::Iff(l, r) => Formula::iff(l.rename(map), r.rename(map)),
        }
    }

    pub fn as_const(&self) -> Option<bool> {
        match self {
            Formula::Const(b) => Some(*b),
            _ => None,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(_) => 5,
            Formula::Var(_) | Formula::Const(_) => 6,
        }
    }
}

fn fold_not(c: Formula) -> Formula {
    match c {
        Formula::Const(b) => Formula::Const(!b),
        c => Formula::not(c),
    }
}

fn fold_and(l: Formula, r: Formula) -> Formula {
    match (l.as_const(), r.as_const()) {
        (Some(false), _) | (_, Some(false)) => Formula::Const(false),
        (Some(true), _) => r,
        (_, Some(true)) => l,
        _ => Formula::and(l, r),
    }
}

fn fold_or(l: Formula, r: Formula) -> Formula {
    match (l.as_const(), r.as_const()) {
        (Some(true), _) | (_, Some(true)) => Formula::Const(true),
        (Some(false), _) => r,
        (_, Some(false)) => l,
        _ => Formula::or(l, r),
    }
}

fn fold_implies(l: Formula, r: Formula) -> Formula {
    match (l.as_const(), r.as_const()) {
        (Some(false), _) | (_, Some(true)) => Formula::Const(true),
        (Some(true), _) => r,
        (_, Some(false)) => fold_not(l),
        _ => Formula::implies(l, r),
    }
}

fn fold_iff(l: Formula, r: Formula) -> Formula {
    match (l.as_const(), r.as_const()) {
        (Some(true), _) => r,
        (Some(false), _) => fold_not(r),
        (_, Some(true)) => l,
        (_, Some(false)) => fold_not(l),
        _ => Formula::iff(l, r),
    }
}

/// Prints in the textual grammar with the minimum of parentheses; the
/// output parses back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, c: &Formula, paren: bool) -> fmt::Result {
            if paren {
                write!(f, "({})", c)
            } else {
                write!(f, "{}", c)
            }
        }
        let p = self.precedence();
        match self {
            Formula::Var(x) => write!(f, "{}", x),
            Formula::Const(true) => write!(f, "T"),
            Formula::Const(false) => write!(f, "F"),
            Formula::Not(c) => {
                write!(f, "~")?;
                child(f, c, c.precedence() < p)
            }
            Formula::Implies(l, r) => {
                child(f, l, l.precedence() <= p)?;
                write!(f, " -> ")?;
                child(f, r, r.precedence() < p)
            }
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Iff(l, r) => {
                let op = match self {
                    Formula::And(..) => "&",
                    Formula::Or(..) => "|",
                    _ => "<->",
                };
                child(f, l, l.precedence() < p)?;
                write!(f, " {} ", op)?;
                child(f, r, r.precedence() <= p)
            }
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = FormulaError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// A formula with variables resolved to positions in an ordered list, for
/// fast repeated evaluation on bit-packed assignments.
#[derive(Debug, Clone)]
pub(crate) enum Compiled {
    Var(usize),
    Const(bool),
    Not(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
    Implies(Box<Compiled>, Box<Compiled>),
    Iff(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    pub(crate) fn new(phi: &Formula, vars: &[String]) -> Result<Self, FormulaError> {
        let index: BTreeMap<&str, usize> =
            vars.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        if index.len() != vars.len() {
            let mut seen = BTreeSet::new();
            let dup = vars.iter().find(|v| !seen.insert(v.as_str())).unwrap();
            return Err(FormulaError::DuplicateVariable(dup.clone()));
        }
        fn go(f: &Formula, index: &BTreeMap<&str, usize>) -> Result<Compiled, FormulaError> {
            let bx = |f: &Formula| go(f, index).map(Box::new);
            Ok(match f {
                Formula::Var(x) => Compiled::Var(
                    *index.get(x.as_str()).ok_or_else(|| FormulaError::UnlistedVariable(x.clone()))?,
                ),
                Formula::Const(b) => Compiled::Const(*b),
                Formula::Not(c) => Compiled::Not(bx(c)?),
                Formula::And(l, r) => Compiled::And(bx(l)?, bx(r)?),
                Formula::Or(l, r) => Compiled::Or(bx(l)?, bx(r)?),
                Formula::Implies(l, r) => Compiled::Implies(bx(l)?, bx(r)?),
                Formula::Iff(l, r) => Compiled::Iff(bx(l)?, bx(r)?),
            })
        }
        go(phi, &index)
    }

    /// `bit(i)` gives the value of variable `i`.
    pub(crate) fn eval_with(&self, bit: &impl Fn(usize) -> bool) -> bool {
        match self {
            Compiled::Var(i) => bit(*i),
            Compiled::Const(b) => *b,
            Compiled::Not(c) => !c.eval_with(bit),
            Compiled::And(l, r) => l.eval_with(bit) && r.eval_with(bit),
            Compiled::Or(l, r) => l.eval_with(bit) || r.eval_with(bit),
            Compiled::Implies(l, r) => !l.eval_with(bit) || r.eval_with(bit),
            Compiled::Iff(l, r) => l.eval_with(bit) == r.eval_with(bit),
        }
    }
}

/// Reads variable `i` of an `n`-variable assignment packed so that the
/// first variable is the most significant bit. Counting the packed value
/// upwards therefore walks assignments in lexicographic order.
#[inline]
pub(crate) fn packed_bit(assignment: u64, n: usize, i: usize) -> bool {
    (assignment >> (n - 1 - i)) & 1 == 1
}

/// Unpacks an assignment into a bit vector, first variable first.
pub fn unpack_bits(assignment: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| packed_bit(assignment, n, i)).collect()
}

/// Counts the assignments to `vars` that satisfy `phi`, by enumeration.
pub fn count_sat(phi: &Formula, vars: &[String]) -> Result<u64, FormulaError> {
    count_sat_with(phi, vars, &Limits::default())
}

pub fn count_sat_with(phi: &Formula, vars: &[String], limits: &Limits) -> Result<u64, FormulaError> {
    limits.check_vars(vars.len())?;
    let compiled = Compiled::new(phi, vars)?;
    let n = vars.len();
    let total = 1u64 << n;
    let count_range = |lo: u64, hi: u64| {
        (lo..hi).filter(|&a| compiled.eval_with(&|i| packed_bit(a, n, i))).count() as u64
    };
    if n < 14 {
        return Ok(count_range(0, total));
    }
    const CHUNK: u64 = 1 << 12;
    Ok((0..total / CHUNK)
        .into_par_iter()
        .map(|c| count_range(c * CHUNK, (c + 1) * CHUNK))
        .sum())
}

/// Canonical positional variable names `prefix1..prefixN`.
pub fn positional_vars(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{}{}", prefix, i)).collect()
}

/// A name with the reserved `_` prefix that does not occur in `used`.
pub(crate) fn fresh_name(stem: &str, used: &BTreeSet<String>) -> String {
    (0..)
        .map(|i| format!("_{}{}", stem, i))
        .find(|c| !used.contains(c))
        .expect("unbounded supply of names")
}
