//! Brute-force decision procedures for the diagram problems and for
//! SAT&Compare#SAT.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::evaluator::{EvalError, Evaluator};
use crate::formula::{count_sat_with, unpack_bits, valuation_from_bits, FormulaError, Limits, SatCompareInstance, Valuation};
use crate::graph::{Diagram, Side};
use crate::scalar::ExactScalar;

/// Default bound on the number of wires enumerated over.
pub const DEFAULT_MAX_ENUMERATED: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("diagram has {inputs} inputs and {outputs} outputs, not a scalar")]
    NotScalar { inputs: usize, outputs: usize },
    #[error("boundaries differ: {0:?} vs {1:?} (inputs, outputs)")]
    ArityMismatch((usize, usize), (usize, usize)),
    #[error("{wires} wires exceed the enumeration bound of {max}")]
    TooManyWires { wires: usize, max: usize },
}

/// `(output bits, input bits)` of a matrix entry.
pub type Position = (Vec<bool>, Vec<bool>);

/// A decision with its witness, in the shape printed by the command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub answer: bool,
    pub witness: Option<String>,
    pub entry: Option<ExactScalar>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Solver {
    pub evaluator: Evaluator,
    pub max_enumerated: usize,
}

impl Default for Solver {
    fn default() -> Self {
        Solver { evaluator: Evaluator::default(), max_enumerated: DEFAULT_MAX_ENUMERATED }
    }
}

fn arity(d: &Diagram) -> (usize, usize) {
    (d.n_inputs(), d.n_outputs())
}

impl Solver {
    fn check_enumerable(&self, wires: usize) -> Result<(), SolveError> {
        if wires > self.max_enumerated {
            Err(SolveError::TooManyWires { wires, max: self.max_enumerated })
        } else {
            Ok(())
        }
    }

    pub fn scalar_diagram(&self, d: &Diagram) -> Result<ExactScalar, SolveError> {
        if d.n_inputs() + d.n_outputs() > 0 {
            return Err(SolveError::NotScalar { inputs: d.n_inputs(), outputs: d.n_outputs() });
        }
        Ok(self.evaluator.evaluate(d)?.as_scalar().expect("no boundary"))
    }

    /// The lexicographically first basis state `v` with
    /// `⟦d1⟧|v⟩ = ⟦d2⟧|v⟩`.
    pub fn solve_state_eq(&self, d1: &Diagram, d2: &Diagram) -> Result<Option<Vec<bool>>, SolveError> {
        if arity(d1) != arity(d2) {
            return Err(SolveError::ArityMismatch(arity(d1), arity(d2)));
        }
        let n = d1.n_inputs();
        self.check_enumerable(n)?;
        let ev = self.evaluator;
        let found = (0..1u64 << n)
            .into_par_iter()
            .map(|a| {
                let v = unpack_bits(a, n);
                let eq = || -> Result<bool, EvalError> {
                    Ok(ev.apply_basis(d1, &v, Side::In)? == ev.apply_basis(d2, &v, Side::In)?)
                };
                (a, eq())
            })
            .find_first(|(_, r)| !matches!(r, Ok(false)));
        match found {
            None => Ok(None),
            Some((_, Err(e))) => Err(e.into()),
            Some((a, Ok(_))) => Ok(Some(unpack_bits(a, n))),
        }
    }

    /// The first position `(row, col)` holding exactly `k`, scanning
    /// columns in lexicographic order and rows within a column.
    pub fn solve_contains_entry(
        &self,
        d: &Diagram,
        k: &ExactScalar,
    ) -> Result<Option<Position>, SolveError> {
        let (n_in, n_out) = arity(d);
        self.check_enumerable(n_in)?;
        self.check_enumerable(n_out)?;
        let ev = self.evaluator;
        let found = (0..1u64 << n_in)
            .into_par_iter()
            .map(|col| {
                let hit = || -> Result<Option<u64>, EvalError> {
                    let column = ev.apply_basis(d, &unpack_bits(col, n_in), Side::In)?;
                    let row = column.positions_of(k).next().map(|(row, _)| row);
                    Ok(row)
                };
                (col, hit())
            })
            .find_first(|(_, r)| !matches!(r, Ok(None)));
        match found {
            None => Ok(None),
            Some((_, Err(e))) => Err(e.into()),
            Some((col, Ok(Some(row)))) => Ok(Some((unpack_bits(row, n_out), unpack_bits(col, n_in)))),
            Some((_, Ok(None))) => unreachable!("filtered above"),
        }
    }

    pub fn compare_diagrams(&self, d1: &Diagram, d2: &Diagram) -> Result<bool, SolveError> {
        if arity(d1) != arity(d2) {
            return Err(SolveError::ArityMismatch(arity(d1), arity(d2)));
        }
        Ok(self.evaluator.evaluate(d1)? == self.evaluator.evaluate(d2)?)
    }

    pub fn is_zero(&self, d: &Diagram) -> Result<bool, SolveError> {
        Ok(self.evaluator.evaluate(d)?.is_zero())
    }
}

/// The first valuation of `x1..xn`, in lexicographic order, under which the
/// residual counts of `psi` over `y` and `rho` over `z` agree.
pub fn solve_sat_compare(inst: &SatCompareInstance, limits: &Limits) -> Result<Option<Valuation>, FormulaError> {
    Ok(sat_compare_bits(inst, limits)?.map(|v| valuation_from_bits(&inst.x_vars(), &v)))
}

/// [`solve_sat_compare`] with the witness as a bit vector over `x1..xn`.
pub fn sat_compare_bits(inst: &SatCompareInstance, limits: &Limits) -> Result<Option<Vec<bool>>, FormulaError> {
    let n = inst.n();
    limits.check_vars(n)?;
    limits.check_vars(inst.m())?;
    let (x, y, z) = (inst.x_vars(), inst.y_vars(), inst.z_vars());
    let found = (0..1u64 << n)
        .into_par_iter()
        .map(|a| {
            let val = valuation_from_bits(&x, &unpack_bits(a, n));
            let eq = || -> Result<bool, FormulaError> {
                Ok(count_sat_with(&inst.psi().substitute(&val), &y, limits)?
                    == count_sat_with(&inst.rho().substitute(&val), &z, limits)?)
            };
            (a, eq())
        })
        .find_first(|(_, r)| !matches!(r, Ok(false)));
    match found {
        None => Ok(None),
        Some((_, Err(e))) => Err(e),
        Some((a, Ok(_))) => Ok(Some(unpack_bits(a, n))),
    }
}

pub fn scalar_diagram(d: &Diagram) -> Result<ExactScalar, SolveError> {
    Solver::default().scalar_diagram(d)
}

pub fn solve_state_eq(d1: &Diagram, d2: &Diagram) -> Result<Option<Vec<bool>>, SolveError> {
    Solver::default().solve_state_eq(d1, d2)
}

pub fn solve_contains_entry(d: &Diagram, k: &ExactScalar) -> Result<Option<Position>, SolveError> {
    Solver::default().solve_contains_entry(d, k)
}

pub fn compare_diagrams(d1: &Diagram, d2: &Diagram) -> Result<bool, SolveError> {
    Solver::default().compare_diagrams(d1, d2)
}

pub fn is_zero(d: &Diagram) -> Result<bool, SolveError> {
    Solver::default().is_zero(d)
}

/// Bits as a `0`/`1` string.
pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl Verdict {
    pub fn absent() -> Self {
        Verdict { answer: false, witness: None, entry: None }
    }

    pub fn yes(witness: &[bool], entry: Option<ExactScalar>) -> Self {
        Verdict { answer: true, witness: Some(bits_to_string(witness)), entry }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::{counting_state, gate_gadget, GateBlock};
    use crate::formula::{parse, positional_vars};
    use crate::graph::{compose, tensor, GeneratorKind};
    use crate::reductions::{build_contains_entry, build_state_eq, DyadicK};

    fn f(s: &str) -> crate::formula::Formula {
        parse(s).unwrap()
    }

    fn worked() -> SatCompareInstance {
        SatCompareInstance::new(1, 2, f("x1 | y1 | ~y2"), f("~(z1 & (z2 | x1))")).unwrap()
    }

    #[test]
    fn scalars() {
        assert_eq!(scalar_diagram(&Diagram::star()).unwrap(), ExactScalar::half());
        assert_eq!(scalar_diagram(&Diagram::empty()).unwrap(), ExactScalar::one());
        let loop_ = compose(
            &Diagram::generator(GeneratorKind::WhiteSpider, 1, 0),
            &Diagram::generator(GeneratorKind::WhiteSpider, 0, 1),
        )
        .unwrap();
        assert_eq!(scalar_diagram(&loop_).unwrap(), ExactScalar::from(2i64));
        assert!(matches!(scalar_diagram(&Diagram::identity(1)), Err(SolveError::NotScalar { .. })));
    }

    #[test]
    fn state_eq() {
        let inst = build_state_eq(&worked()).unwrap();
        assert_eq!(solve_state_eq(&inst.d1, &inst.d2).unwrap(), Some(vec![false]));
        assert_eq!(solve_state_eq(&inst.d1, &inst.d1).unwrap(), Some(vec![false]));
        // (3 4) against the constant 5 = IS_TRUE ∘ counting state of a 5-model formula
        let five = compose(
            &gate_gadget(GateBlock::IsTrue),
            &counting_state(&f("u1 | u2 & u3"), &positional_vars("u", 3)).unwrap(),
        )
        .unwrap();
        let const5 = tensor(&five, &crate::encoder::discard());
        assert_eq!(solve_state_eq(&inst.d1, &const5).unwrap(), None);
        assert!(solve_state_eq(&inst.d1, &Diagram::identity(1)).is_err());
    }

    #[test]
    fn contains_entry() {
        let d = build_contains_entry(&worked(), DyadicK::integer(0)).unwrap();
        assert_eq!(solve_contains_entry(&d, &ExactScalar::zero()).unwrap(), Some((vec![], vec![false])));
        let id = Diagram::identity(1);
        assert_eq!(solve_contains_entry(&id, &ExactScalar::one()).unwrap(), Some((vec![false], vec![false])));
        assert_eq!(solve_contains_entry(&id, &ExactScalar::half()).unwrap(), None);
        // zero entries are implicit: the first zero of the identity is at row 1, col 0
        assert_eq!(solve_contains_entry(&id, &ExactScalar::zero()).unwrap(), Some((vec![true], vec![false])));
    }

    #[test]
    fn compare_and_zero() {
        let a = counting_state(&f("x1 & x2"), &positional_vars("x", 2)).unwrap();
        let b = counting_state(&f("y1 & ~y2"), &["y1".into(), "y2".into()]).unwrap();
        let c = counting_state(&f("y1"), &["y1".into(), "y2".into()]).unwrap();
        assert!(compare_diagrams(&a, &a).unwrap());
        assert!(compare_diagrams(&a, &b).unwrap());
        assert!(!compare_diagrams(&a, &c).unwrap());
        let zero = compose(&gate_gadget(GateBlock::IsTrue), &gate_gadget(GateBlock::False)).unwrap();
        assert!(is_zero(&zero).unwrap());
        assert!(!is_zero(&a).unwrap());
    }

    #[test]
    fn sat_compare() {
        let lim = Limits::default();
        let v = solve_sat_compare(&worked(), &lim).unwrap().unwrap();
        assert_eq!(v, Valuation::from([("x1".to_string(), false)]));
        let same = SatCompareInstance::new(2, 1, f("x1 & y1 | x2"), f("x1 & z1 | x2")).unwrap();
        assert_eq!(sat_compare_bits(&same, &lim).unwrap(), Some(vec![false, false]));
        let never = SatCompareInstance::new(1, 1, f("T"), f("F")).unwrap();
        assert_eq!(sat_compare_bits(&never, &lim).unwrap(), None);
    }
}
