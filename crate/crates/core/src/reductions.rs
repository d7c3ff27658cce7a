//! Diagram builders for the StateEq, ContainsEntry and circuit-extraction
//! reductions, each with an exact semantic contract.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoder::{counting_state, encode_formula, gate_gadget, minus_one, EncodeError, GateBlock};
use crate::evaluator::{EvalError, Evaluator};
use crate::formula::{
    count_sat_with, formula_with_count, positional_vars, valuation_from_bits, Formula, FormulaError,
    Limits, SatCompareInstance,
};
use crate::graph::{
    compose, compose_all, tensor, tensor_all, Diagram, DiagramBuilder, GeneratorKind, Side,
};
use crate::scalar::ExactScalar;

use GeneratorKind::*;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("malformed dyadic value: {0}")]
    BadDyadic(String),
    #[error("self-check failed at v = {v}: diagram gives {got}, counts give {expected}")]
    SelfCheck { v: String, got: String, expected: String },
}

/// Two diagrams with matching boundaries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateEqInstance {
    pub d1: Diagram,
    pub d2: Diagram,
}

/// `c / 2^d` in lowest terms: `c` odd, or `(c, d) = (0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DyadicK {
    c: i64,
    d: u32,
}

impl DyadicK {
    pub fn new(mut c: i64, mut d: u32) -> Self {
        if c == 0 {
            return DyadicK { c: 0, d: 0 };
        }
        while d > 0 && c % 2 == 0 {
            c /= 2;
            d -= 1;
        }
        DyadicK { c, d }
    }

    pub fn integer(c: i64) -> Self {
        DyadicK::new(c, 0)
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn value(&self) -> ExactScalar {
        ExactScalar::dyadic(self.c, self.d)
    }
}

impl fmt::Display for DyadicK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 0 {
            write!(f, "{}", self.c)
        } else {
            write!(f, "{}/2^{}", self.c, self.d)
        }
    }
}

/// Accepts `c`, `c/2^d` and `c/N` with `N` a power of two.
impl FromStr for DyadicK {
    type Err = ReductionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ReductionError::BadDyadic(s.to_string());
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            None => return s.parse().map(DyadicK::integer).map_err(|_| bad()),
            Some(p) => p,
        };
        let c: i64 = num.trim().parse().map_err(|_| bad())?;
        let den = den.trim();
        let d = if let Some(exp) = den.strip_prefix("2^") {
            exp.parse().map_err(|_| bad())?
        } else {
            let n: u64 = den.parse().map_err(|_| bad())?;
            if !n.is_power_of_two() {
                return Err(bad());
            }
            n.trailing_zeros()
        };
        if d > 62 {
            return Err(bad());
        }
        Ok(DyadicK::new(c, d))
    }
}

impl<'de> Deserialize<'de> for DyadicK {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            c: i64,
            d: u32,
        }
        let r = Repr::deserialize(de)?;
        Ok(DyadicK::new(r.c, r.d))
    }
}

/// `IS_TRUE ∘ D_phi` with `|0⟩ + |1⟩` on the trailing `extra` inputs, so
/// that the leading inputs stay open and plugging `|v⟩` there gives the
/// count of the residual formula.
fn residual_count(phi: &Formula, open: &[String], extra: &[String]) -> Result<Diagram, ReductionError> {
    let vars: Vec<String> = open.iter().chain(extra).cloned().collect();
    let d = encode_formula(phi, &vars)?;
    Ok(compose(&gate_gadget(GateBlock::IsTrue), &compose(&d, &feed_both(open.len(), extra.len()))?)?)
}

/// `n` open wires next to `m` copies of `|0⟩ + |1⟩`.
fn feed_both(n: usize, m: usize) -> Diagram {
    let both = gate_gadget(GateBlock::Both);
    tensor(&Diagram::identity(n), &tensor_all(std::iter::repeat_n(&both, m)))
}

impl From<crate::graph::GraphError> for ReductionError {
    fn from(e: crate::graph::GraphError) -> Self {
        ReductionError::Eval(EvalError::Graph(e))
    }
}

/// `D1` counts the residual models of `psi` over `y`, `D2` those of `rho`
/// over `z`, both as functions of the open `x` wires.
pub fn build_state_eq(inst: &SatCompareInstance) -> Result<StateEqInstance, ReductionError> {
    let x = inst.x_vars();
    Ok(StateEqInstance {
        d1: residual_count(inst.psi(), &x, &inst.y_vars())?,
        d2: residual_count(inst.rho(), &x, &inst.z_vars())?,
    })
}

/// The raw antisymmetric cap: white not on the first wire, dark not, then
/// a white cap. Denotes `√2 (⟨01| - ⟨10|)`.
pub fn antisymmetric_cap_raw() -> Diagram {
    let mut b = DiagramBuilder::new();
    let (a, c) = (b.input(), b.input());
    let zn = b.add_node(WhiteNot);
    let xn = b.add_node(DarkNot);
    let cap = b.add_node(WhiteSpider);
    b.attach(zn, a);
    b.wire(zn, xn);
    b.wire(xn, cap);
    b.attach(cap, c);
    b.build()
}

/// `⟨01| - ⟨10|`.
pub fn antisymmetric_cap() -> Diagram {
    tensor(&antisymmetric_cap_raw(), &crate::encoder::inv_sqrt2())
}

/// `c / 2^d` as a scalar diagram: `|c|` as the count of a formula read
/// through `IS_TRUE`, `d` stars, and a sign gadget when `c < 0`.
pub fn dyadic_scalar(k: DyadicK) -> Result<Diagram, ReductionError> {
    let c = k.c().unsigned_abs();
    let bits = 64 - c.leading_zeros() as usize;
    let vars = positional_vars("u", bits);
    let phi = formula_with_count(&vars, &BigInt::from(c))?;
    let magnitude = compose(&gate_gadget(GateBlock::IsTrue), &counting_state(&phi, &vars)?)?;
    let mut parts = vec![magnitude, Diagram::stars(k.d() as usize)];
    if k.c() < 0 {
        parts.push(minus_one());
    }
    Ok(tensor_all(&parts))
}

/// The ContainsEntry diagram.
///
/// For `k ∈ {0, 1}` plugging `|v⟩` into the inputs gives
/// `#ρ(v) - #ψ(v) + k`. Otherwise the `k = 1` diagram is scaled by `k`,
/// which has the entry `k` exactly where the `k = 1` diagram has `1`.
pub fn build_contains_entry(inst: &SatCompareInstance, k: DyadicK) -> Result<Diagram, ReductionError> {
    let core = contains_entry_core(inst, k.c() != 0)?;
    let d = if k.c() == 0 || (k.c() == 1 && k.d() == 0) {
        core
    } else {
        tensor(&core, &dyadic_scalar(k)?)
    };
    self_check(inst, k, &d)?;
    Ok(d)
}

fn contains_entry_core(inst: &SatCompareInstance, plus_one: bool) -> Result<Diagram, ReductionError> {
    let (n, m) = (inst.n(), inst.m());
    let x = inst.x_vars();
    let y = positional_vars("y", m + 1);
    let z = positional_vars("z", m + 1);
    let y_last = Formula::var(&y[m]);
    let z_last = Formula::var(&z[m]);

    let psi = Formula::and(inst.psi().clone(), Formula::not(y_last));
    let mut rho = Formula::and(inst.rho().clone(), Formula::not(z_last));
    if plus_one {
        rho = Formula::or(rho, Formula::and_all(z.iter().map(Formula::var)));
    }

    let branch = |phi: &Formula, extra: &[String]| -> Result<Diagram, ReductionError> {
        let vars: Vec<String> = x.iter().chain(extra).cloned().collect();
        let d = encode_formula(phi, &vars)?;
        Ok(compose(&d, &feed_both(n, m + 1))?)
    };
    let both_branches = tensor(&branch(&psi, &y)?, &branch(&rho, &z)?);

    // fan each x wire out to both branches; branch inputs are
    // (x for psi) ++ (x for rho)
    let mut fan = DiagramBuilder::new();
    let spiders: Vec<_> = (0..n)
        .map(|_| {
            let s = fan.add_node(WhiteSpider);
            let i = fan.input();
            fan.attach(s, i);
            s
        })
        .collect();
    for _copy in 0..2 {
        for &s in &spiders {
            let o = fan.output();
            fan.attach(s, o);
        }
    }
    let fan = fan.build();

    Ok(tensor(
        &compose_all([&antisymmetric_cap(), &both_branches, &fan])?,
        &Diagram::stars(m + 1),
    ))
}

/// Evaluates one deterministic `v` and compares with brute-force counts.
fn self_check(inst: &SatCompareInstance, k: DyadicK, d: &Diagram) -> Result<(), ReductionError> {
    let limits = Limits::default();
    if inst.n() > 20 || inst.m() > limits.max_vars {
        return Ok(());
    }
    let v: Vec<bool> = (0..inst.n()).map(|i| i % 2 == 1).collect();
    let val = valuation_from_bits(&inst.x_vars(), &v);
    let cpsi = count_sat_with(&inst.psi().substitute(&val), &inst.y_vars(), &limits)?;
    let crho = count_sat_with(&inst.rho().substitute(&val), &inst.z_vars(), &limits)?;
    let diff = ExactScalar::from(crho as i64 - cpsi as i64);
    let expected = if k.c() == 0 { diff } else { (diff + ExactScalar::one()) * k.value() };
    let got = Evaluator::default()
        .apply_basis(d, &v, Side::In)?
        .as_scalar()
        .expect("no outputs");
    if got != expected {
        return Err(ReductionError::SelfCheck {
            v: v.iter().map(|&b| if b { '1' } else { '0' }).collect(),
            got: got.pretty(),
            expected: expected.pretty(),
        });
    }
    Ok(())
}

/// A `1 → 1` diagram denoting `[[a0, a1], [a1, -a0]]` where `a1` is the
/// model count of `phi` and `a0 = 2^n - a1`.
///
/// The counting state of `phi` controls, through a white spider, two
/// controlled-Z couplings on the target wire: the target passes a white
/// not, a coupling, an H-box, a coupling and an H-box. For control `c`
/// this is `X^c Z^c Z`, so the sum is `a0 Z + a1 X`.
pub fn build_circuit_extraction(phi: &Formula, vars: &[String]) -> Result<Diagram, ReductionError> {
    let mut b = DiagramBuilder::new();
    let control = b.input();
    let target = b.input();
    let out = b.output();
    let fan = b.add_node(WhiteSpider);
    b.attach(fan, control);
    let not = b.add_node(WhiteNot);
    b.attach(not, target);
    let mut prev = not;
    for _ in 0..2 {
        let site = b.add_node(WhiteSpider);
        let link = b.add_node(HBox);
        let had = b.add_node(HBox);
        b.wire(prev, site);
        b.wire(site, link);
        b.wire(link, fan);
        b.wire(site, had);
        prev = had;
    }
    b.attach(prev, out);
    b.add_node(Star);
    let block = b.build();
    let state = counting_state(phi, vars)?;
    Ok(compose(&block, &tensor(&state, &Diagram::identity(1)))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::{evaluate, ExactMatrix};
    use crate::formula::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn worked() -> SatCompareInstance {
        SatCompareInstance::new(1, 2, f("x1 | y1 | ~y2"), f("~(z1 & (z2 | x1))")).unwrap()
    }

    fn row(values: &[i64]) -> ExactMatrix {
        ExactMatrix::from_rows(&[values])
    }

    #[test]
    fn state_eq_worked_example() {
        let inst = build_state_eq(&worked()).unwrap();
        assert_eq!(evaluate(&inst.d1).unwrap(), row(&[3, 4]));
        assert_eq!(evaluate(&inst.d2).unwrap(), row(&[3, 2]));
    }

    #[test]
    fn contains_entry_worked_example() {
        let d = build_contains_entry(&worked(), DyadicK::integer(0)).unwrap();
        assert_eq!(evaluate(&d).unwrap(), row(&[0, -2]));
        let d = build_contains_entry(&worked(), DyadicK::integer(1)).unwrap();
        assert_eq!(evaluate(&d).unwrap(), row(&[1, -1]));
        let k = DyadicK::new(3, 2);
        let d = build_contains_entry(&worked(), k).unwrap();
        let m = evaluate(&d).unwrap();
        assert_eq!(m.get(0, 0), k.value());
        assert_eq!(m.get(0, 1), -k.value());
    }

    #[test]
    fn caps() {
        let raw = evaluate(&antisymmetric_cap_raw()).unwrap();
        assert_eq!(raw.get(0, 0b01), ExactScalar::sqrt2());
        assert_eq!(raw.get(0, 0b10), -ExactScalar::sqrt2());
        assert_eq!(raw.nnz(), 2);
        assert_eq!(evaluate(&antisymmetric_cap()).unwrap(), row(&[0, 1, -1, 0]));
    }

    #[test]
    fn dyadic_scalars() {
        for (c, d) in [(3, 2), (-3, 2), (1, 0), (-1, 0), (5, 0), (-7, 3), (1, 5), (0, 0)] {
            let k = DyadicK::new(c, d);
            let v = evaluate(&dyadic_scalar(k).unwrap()).unwrap().as_scalar().unwrap();
            assert_eq!(v, ExactScalar::dyadic(c, d), "{k}");
        }
        assert_eq!(
            evaluate(&dyadic_scalar(DyadicK::new(3, 2)).unwrap()).unwrap().as_scalar().unwrap(),
            ExactScalar::new(3, 0, 2)
        );
    }

    #[test]
    fn dyadic_parsing() {
        assert_eq!("3/2^2".parse::<DyadicK>().unwrap(), DyadicK::new(3, 2));
        assert_eq!("3/4".parse::<DyadicK>().unwrap(), DyadicK::new(3, 2));
        assert_eq!("-1".parse::<DyadicK>().unwrap(), DyadicK::integer(-1));
        assert_eq!("6/8".parse::<DyadicK>().unwrap(), DyadicK::new(3, 2));
        assert_eq!("0/2^3".parse::<DyadicK>().unwrap(), DyadicK::new(0, 0));
        assert!("1/3".parse::<DyadicK>().is_err());
        assert!("x".parse::<DyadicK>().is_err());
        let k: DyadicK = serde_json::from_str(r#"{"c":4,"d":3}"#).unwrap();
        assert_eq!((k.c(), k.d()), (1, 1));
        assert_eq!(k.to_string(), "1/2^1");
    }

    #[test]
    fn circuit_extraction_examples() {
        let d = build_circuit_extraction(&f("(x1 & x2) & (x1 & ~x3)"), &positional_vars("x", 3)).unwrap();
        assert_eq!(evaluate(&d).unwrap(), ExactMatrix::from_rows(&[&[7, 1], &[1, -7]]));
        let d = build_circuit_extraction(&Formula::Const(false), &positional_vars("x", 1)).unwrap();
        assert_eq!(evaluate(&d).unwrap(), ExactMatrix::from_rows(&[&[2, 0], &[0, -2]]));
    }
}
