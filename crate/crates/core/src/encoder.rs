//! Boolean formulae as diagrams built from the logic-gate blocks.
//!
//! Every block carries its own star generators, so its matrix is exactly
//! the declared target with no leftover scalar.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::evaluator::ExactMatrix;
use crate::formula::{Formula, FormulaError};
use crate::graph::{compose, compose_all, tensor, tensor_all, Diagram, DiagramBuilder, Endpoint, GeneratorKind};

use GeneratorKind::*;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateBlock {
    True,
    False,
    Both,
    IsTrue,
    Not,
    Copy,
    And,
    Or,
}

impl GateBlock {
    pub const ALL: [GateBlock; 8] = [
        GateBlock::True,
        GateBlock::False,
        GateBlock::Both,
        GateBlock::IsTrue,
        GateBlock::Not,
        GateBlock::Copy,
        GateBlock::And,
        GateBlock::Or,
    ];

    /// The matrix the block must evaluate to.
    pub fn target(self) -> ExactMatrix {
        match self {
            GateBlock::True => ExactMatrix::from_rows(&[&[0], &[1]]),
            GateBlock::False => ExactMatrix::from_rows(&[&[1], &[0]]),
            GateBlock::Both => ExactMatrix::from_rows(&[&[1], &[1]]),
            GateBlock::IsTrue => ExactMatrix::from_rows(&[&[0, 1]]),
            GateBlock::Not => ExactMatrix::from_rows(&[&[0, 1], &[1, 0]]),
            GateBlock::Copy => ExactMatrix::from_rows(&[&[1, 0], &[0, 0], &[0, 0], &[0, 1]]),
            GateBlock::And => ExactMatrix::from_rows(&[&[1, 1, 1, 0], &[0, 0, 0, 1]]),
            GateBlock::Or => ExactMatrix::from_rows(&[&[1, 0, 0, 0], &[0, 1, 1, 1]]),
        }
    }
}

impl fmt::Display for GateBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateBlock::True => "TRUE",
            GateBlock::False => "FALSE",
            GateBlock::Both => "BOTH",
            GateBlock::IsTrue => "IS_TRUE",
            GateBlock::Not => "NOT",
            GateBlock::Copy => "COPY",
            GateBlock::And => "AND",
            GateBlock::Or => "OR",
        })
    }
}

pub fn gate_gadget(g: GateBlock) -> Diagram {
    let star = Diagram::star();
    match g {
        GateBlock::True => tensor(&star, &Diagram::generator(DarkNot, 0, 1)),
        GateBlock::False => tensor(&star, &Diagram::generator(DarkSpider, 0, 1)),
        GateBlock::Both => Diagram::generator(WhiteSpider, 0, 1),
        GateBlock::IsTrue => tensor(&star, &Diagram::generator(DarkNot, 1, 0)),
        GateBlock::Not => tensor(&Diagram::generator(DarkNot, 1, 1), &inv_sqrt2()),
        GateBlock::Copy => Diagram::generator(WhiteSpider, 1, 2),
        GateBlock::And => tensor(
            &star,
            &compose(&Diagram::generator(HBox, 1, 1), &Diagram::generator(HBox, 2, 1))
                .expect("arities match"),
        ),
        GateBlock::Or => {
            let not = gate_gadget(GateBlock::Not);
            compose_all([&not, &gate_gadget(GateBlock::And), &tensor(&not, &not)]).expect("arities match")
        }
    }
}

/// `1/√2`: a legless dark spider (`2√2`) next to two stars.
pub fn inv_sqrt2() -> Diagram {
    tensor(&Diagram::generator(DarkSpider, 0, 0), &Diagram::stars(2))
}

/// The effect `⟨0| + ⟨1|`.
pub fn discard() -> Diagram {
    Diagram::generator(WhiteSpider, 1, 0)
}

/// The scalar `-1`: the state `2|1⟩` closed against `⟨0| - ⟨1|`, halved.
pub fn minus_one() -> Diagram {
    let mut b = DiagramBuilder::new();
    let x = b.add_node(DarkNot);
    let z = b.add_node(WhiteNot);
    b.wire(x, z);
    b.add_node(Star);
    b.build()
}

/// How many times each variable is read.
fn count_reads(f: &Formula, reads: &mut BTreeMap<String, usize>) {
    match f {
        Formula::Var(x) => *reads.entry(x.clone()).or_insert(0) += 1,
        Formula::Const(_) => {}
        Formula::Not(c) => count_reads(c, reads),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
            count_reads(l, reads);
            count_reads(r, reads);
        }
    }
}

struct Emitter {
    b: DiagramBuilder,
    /// Unconsumed wire ends carrying each variable.
    sources: BTreeMap<String, Vec<Endpoint>>,
}

impl Emitter {
    /// Places a block's nodes and returns the wire end carrying its output.
    /// Every argument is a wire end that must be connected exactly once.
    fn constant(&mut self, value: bool) -> Endpoint {
        let n = self.b.add_node(if value { DarkNot } else { DarkSpider });
        self.b.add_node(Star);
        self.b.port(n)
    }

    fn not(&mut self, a: Endpoint) -> Endpoint {
        let n = self.b.add_node(DarkNot);
        self.b.add_node(DarkSpider);
        self.b.add_node(Star);
        self.b.add_node(Star);
        self.b.attach(n, a);
        self.b.port(n)
    }

    fn and(&mut self, a: Endpoint, c: Endpoint) -> Endpoint {
        let h2 = self.b.add_node(HBox);
        let h1 = self.b.add_node(HBox);
        self.b.add_node(Star);
        self.b.attach(h2, a);
        self.b.attach(h2, c);
        self.b.wire(h2, h1);
        self.b.port(h1)
    }

    fn or(&mut self, a: Endpoint, c: Endpoint) -> Endpoint {
        let (na, nc) = (self.not(a), self.not(c));
        let conj = self.and(na, nc);
        self.not(conj)
    }

    fn copy(&mut self, a: Endpoint) -> (Endpoint, Endpoint) {
        let z = self.b.add_node(WhiteSpider);
        self.b.attach(z, a);
        (self.b.port(z), self.b.port(z))
    }

    fn emit(&mut self, f: &Formula) -> Endpoint {
        match f {
            Formula::Var(x) => self.sources.get_mut(x).and_then(|s| s.pop()).expect("one source per read"),
            Formula::Const(v) => self.constant(*v),
            Formula::Not(c) => {
                let a = self.emit(c);
                self.not(a)
            }
            Formula::And(l, r) => {
                let (a, c) = (self.emit(l), self.emit(r));
                self.and(a, c)
            }
            Formula::Or(l, r) => {
                let (a, c) = (self.emit(l), self.emit(r));
                self.or(a, c)
            }
            Formula::Implies(l, r) => {
                let a = self.emit(l);
                let na = self.not(a);
                let c = self.emit(r);
                self.or(na, c)
            }
            Formula::Iff(l, r) => {
                // (a → c) ∧ (c → a) with a and c each computed once
                let (a1, a2) = {
                    let a = self.emit(l);
                    self.copy(a)
                };
                let (c1, c2) = {
                    let c = self.emit(r);
                    self.copy(c)
                };
                let na1 = self.not(a1);
                let fwd = self.or(na1, c1);
                let nc2 = self.not(c2);
                let bwd = self.or(nc2, a2);
                self.and(fwd, bwd)
            }
        }
    }
}

fn check_vars(phi: &Formula, vars: &[String]) -> Result<(), FormulaError> {
    let mut seen = BTreeSet::new();
    for v in vars {
        if !seen.insert(v) {
            return Err(FormulaError::DuplicateVariable(v.clone()));
        }
    }
    match phi.vars().into_iter().find(|v| !seen.contains(v)) {
        Some(v) => Err(FormulaError::UnlistedVariable(v)),
        None => Ok(()),
    }
}

/// The diagram of `phi`: one input per variable in `vars`, one output.
///
/// A variable read once is wired straight to its use, one read several
/// times goes through a single white spider, and an unread one ends in
/// [`discard`].
pub fn encode_formula(phi: &Formula, vars: &[String]) -> Result<Diagram, EncodeError> {
    check_vars(phi, vars)?;
    let mut reads = BTreeMap::new();
    count_reads(phi, &mut reads);
    let mut em = Emitter { b: DiagramBuilder::new(), sources: BTreeMap::new() };
    for v in vars {
        let input = em.b.input();
        let k = reads.get(v).copied().unwrap_or(0);
        let ends = match k {
            0 => {
                let z = em.b.add_node(WhiteSpider);
                em.b.attach(z, input);
                Vec::new()
            }
            1 => vec![input],
            _ => {
                let z = em.b.add_node(WhiteSpider);
                em.b.attach(z, input);
                (0..k).map(|_| em.b.port(z)).collect()
            }
        };
        // popped from the back, so reverse to consume in reading order
        em.sources.insert(v.clone(), ends.into_iter().rev().collect());
    }
    let out = em.emit(phi);
    let o = em.b.output();
    em.b.connect(out, o);
    Ok(em.b.build())
}

/// `count·|1⟩ + (2^n - count)·|0⟩`: the formula with every input fed by
/// `|0⟩ + |1⟩`.
pub fn counting_state(phi: &Formula, vars: &[String]) -> Result<Diagram, EncodeError> {
    let d = encode_formula(phi, vars)?;
    let both = gate_gadget(GateBlock::Both);
    let states = tensor_all(std::iter::repeat_n(&both, vars.len()));
    Ok(compose(&d, &states).expect("arities match"))
}
