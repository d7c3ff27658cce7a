//! Exact matrix interpretation of diagrams by tensor contraction.

mod matrix;
mod tensor;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

pub use matrix::{bit_string, matrix_compose, matrix_tensor, pack_bits, parse_bits, ExactMatrix};

use crate::graph::{Diagram, Endpoint, GeneratorKind, GraphError, Side};
use crate::scalar::ExactScalar;
use tensor::{contract, Tensor};

/// Default bound on `n_in + n_out` for a full evaluation.
pub const DEFAULT_MAX_BOUNDARY: usize = 22;
/// Dark spiders, dark nots and H-boxes are expanded densely, so their
/// degree is bounded.
pub const MAX_DENSE_LEGS: usize = 24;
const MAX_RANK: usize = 63;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{wires} boundary wires exceed the evaluation bound of {max}")]
    TooManyWires { wires: usize, max: usize },
    #[error("intermediate tensor of rank {rank} exceeds {max}")]
    RankTooLarge { rank: usize, max: usize },
    #[error("{kind} node with {legs} legs exceeds the dense bound of {max}")]
    GeneratorTooLarge { kind: GeneratorKind, legs: usize, max: usize },
    #[error("a star has no legs, got {0}")]
    BadArity(usize),
    #[error("arity mismatch: expected {expected} wires, found {found}")]
    ArityMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ContractionOrder {
    /// Repeatedly contract the pair whose result has the fewest open
    /// indices, breaking ties by the product of stored entries.
    #[default]
    Greedy,
    /// Contract edges in the order they are listed in the diagram.
    Sequential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Evaluator {
    pub order: ContractionOrder,
    pub max_boundary: usize,
}

impl Default for Evaluator {
    fn default() -> Self {
        Evaluator { order: ContractionOrder::Greedy, max_boundary: DEFAULT_MAX_BOUNDARY }
    }
}

/// Nonzero entries of a generator with `legs` legs, keyed by leg bits
/// (leg `j` at bit `j`).
fn generator_entries(kind: GeneratorKind, legs: usize) -> Result<Vec<(u64, ExactScalar)>, EvalError> {
    let all = if legs == 0 { 0 } else { u64::MAX >> (64 - legs) };
    let dense = |f: &dyn Fn(u64) -> ExactScalar| -> Result<Vec<(u64, ExactScalar)>, EvalError> {
        if legs > MAX_DENSE_LEGS {
            return Err(EvalError::GeneratorTooLarge { kind, legs, max: MAX_DENSE_LEGS });
        }
        Ok((0..1u64 << legs).map(|k| (k, f(k))).filter(|(_, v)| !v.is_zero()).collect())
    };
    // √2^(3-N) on the allowed parity: the expansion of √2 (|+…+⟩⟨+…+| ± |−…−⟩⟨−…−|)
    let dark = || ExactScalar::sqrt2_pow(3 - legs as i64);
    match kind {
        GeneratorKind::WhiteSpider if legs == 0 => Ok(vec![(0, ExactScalar::from(2i64))]),
        GeneratorKind::WhiteSpider => Ok(vec![(0, ExactScalar::one()), (all, ExactScalar::one())]),
        GeneratorKind::WhiteNot if legs == 0 => Ok(vec![]),
        GeneratorKind::WhiteNot => Ok(vec![(0, ExactScalar::one()), (all, -ExactScalar::one())]),
        GeneratorKind::DarkSpider => {
            dense(&|k| if k.count_ones() % 2 == 0 { dark() } else { ExactScalar::zero() })
        }
        GeneratorKind::DarkNot => {
            dense(&|k| if k.count_ones() % 2 == 1 { dark() } else { ExactScalar::zero() })
        }
        GeneratorKind::HBox => {
            dense(&|k| if k == all { -ExactScalar::one() } else { ExactScalar::one() })
        }
        GeneratorKind::Star if legs == 0 => Ok(vec![(0, ExactScalar::half())]),
        GeneratorKind::Star => Err(EvalError::BadArity(legs)),
    }
}

/// The matrix of a single generator with `m` inputs and `n` outputs.
pub fn interpret_generator(kind: GeneratorKind, m: usize, n: usize) -> Result<ExactMatrix, EvalError> {
    if m + n >= 64 {
        return Err(EvalError::GeneratorTooLarge { kind, legs: m + n, max: 63 });
    }
    let mut out = ExactMatrix::zeros(n, m);
    for (k, v) in generator_entries(kind, m + n)? {
        // legs 0..m are the inputs, m..m+n the outputs
        let col = k & ((1u64 << m) - 1);
        let row = k >> m;
        out.set(reverse_bits(row, n), reverse_bits(col, m), v);
    }
    Ok(out)
}

/// Reverses the low `n` bits, turning leg order into most-significant-first.
fn reverse_bits(x: u64, n: usize) -> u64 {
    if n == 0 {
        0
    } else {
        x.reverse_bits() >> (64 - n)
    }
}

/// The tensor of a node whose legs carry `legs`; an index listed twice is a
/// self-loop and is traced out.
fn node_tensor(kind: GeneratorKind, legs: &[usize]) -> Result<Tensor, EvalError> {
    let mut positions: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (p, &i) in legs.iter().enumerate() {
        positions.entry(i).or_default().push(p);
    }
    let kept: Vec<(usize, usize)> =
        positions.iter().filter(|(_, ps)| ps.len() == 1).map(|(&i, ps)| (i, ps[0])).collect();
    let loops: Vec<(usize, usize)> =
        positions.values().filter(|ps| ps.len() == 2).map(|ps| (ps[0], ps[1])).collect();
    debug_assert!(positions.values().all(|ps| ps.len() <= 2));

    let mut map: HashMap<u64, ExactScalar> = HashMap::new();
    for (k, v) in generator_entries(kind, legs.len())? {
        let bit = |p: usize| (k >> p) & 1;
        if loops.iter().any(|&(p, q)| bit(p) != bit(q)) {
            continue;
        }
        let key = kept.iter().enumerate().fold(0, |acc, (j, &(_, p))| acc | (bit(p) << j));
        *map.entry(key).or_default() += v;
    }
    Ok(Tensor::from_map(kept.into_iter().map(|(i, _)| i).collect(), map))
}

impl Evaluator {
    pub fn with_order(order: ContractionOrder) -> Self {
        Evaluator { order, ..Evaluator::default() }
    }

    /// `⟦d⟧`, exactly.
    pub fn evaluate(&self, d: &Diagram) -> Result<ExactMatrix, EvalError> {
        d.check()?;
        let wires = d.n_inputs() + d.n_outputs();
        if wires > self.max_boundary {
            return Err(EvalError::TooManyWires { wires, max: self.max_boundary });
        }

        let mut boundary_index: HashMap<(Side, usize), usize> = HashMap::new();
        for (side, list) in [(Side::In, d.inputs()), (Side::Out, d.outputs())] {
            for &pos in list {
                let next = boundary_index.len();
                boundary_index.insert((side, pos), next);
            }
        }
        let mut next_index = boundary_index.len();
        let mut legs: BTreeMap<usize, Vec<usize>> = d.nodes().keys().map(|&id| (id, Vec::new())).collect();
        let mut tensors: Vec<Tensor> = Vec::new();
        // per edge, the index it introduces (None for boundary-boundary wires)
        let mut edge_index: Vec<Option<usize>> = Vec::with_capacity(d.edges().len());
        let bidx = |e: &Endpoint| match *e {
            Endpoint::Boundary { boundary, pos } => boundary_index[&(boundary, pos)],
            Endpoint::Port { .. } => unreachable!("called on boundary ends only"),
        };
        for (a, b) in d.edges() {
            match (a.node(), b.node()) {
                (Some(u), Some(v)) => {
                    let i = next_index;
                    next_index += 1;
                    legs.get_mut(&u).expect("validated").push(i);
                    legs.get_mut(&v).expect("validated").push(i);
                    edge_index.push(Some(i));
                }
                (Some(u), None) => {
                    legs.get_mut(&u).expect("validated").push(bidx(b));
                    edge_index.push(None);
                }
                (None, Some(v)) => {
                    legs.get_mut(&v).expect("validated").push(bidx(a));
                    edge_index.push(None);
                }
                (None, None) => {
                    let one = ExactScalar::one();
                    tensors.push(Tensor::from_map(
                        vec![bidx(a), bidx(b)],
                        HashMap::from([(0b00, one.clone()), (0b11, one)]),
                    ));
                    edge_index.push(None);
                }
            }
        }
        for (id, kind) in d.nodes() {
            tensors.push(node_tensor(*kind, &legs[id])?);
        }

        let rest = match self.order {
            ContractionOrder::Greedy => contract_greedy(tensors)?,
            ContractionOrder::Sequential => contract_sequential(tensors, &edge_index)?,
        };
        let mut rest = rest;
        rest.sort_by_key(|t| (t.rank(), t.idx.first().copied()));
        let mut total = Tensor::scalar(ExactScalar::one());
        for t in &rest {
            check_rank(total.rank() + t.rank())?;
            total = contract(&total, t);
        }

        let n_out = d.n_outputs();
        let n_in = d.n_inputs();
        let pos_of: HashMap<usize, usize> = total.idx.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let out_bits: Vec<usize> = d.outputs().iter().map(|&p| pos_of[&boundary_index[&(Side::Out, p)]]).collect();
        let in_bits: Vec<usize> = d.inputs().iter().map(|&p| pos_of[&boundary_index[&(Side::In, p)]]).collect();
        let read = |k: u64, bits: &[usize]| bits.iter().fold(0u64, |acc, &p| (acc << 1) | ((k >> p) & 1));
        let mut m = ExactMatrix::zeros(n_out, n_in);
        for (k, v) in total.entries() {
            m.add_to(read(k, &out_bits), read(k, &in_bits), v);
        }
        Ok(m)
    }

    /// `⟦d⟧|v⟩` for `side = In`, `⟨v|⟦d⟧` for `side = Out`, computed by
    /// plugging basis states into the diagram before contraction.
    pub fn apply_basis(&self, d: &Diagram, v: &[bool], side: Side) -> Result<ExactMatrix, EvalError> {
        let plugged = d.plug(side, v).map_err(|e| match e {
            GraphError::ArityMismatch { expected, found } => EvalError::ArityMismatch { expected, found },
            e => EvalError::Graph(e),
        })?;
        self.evaluate(&plugged)
    }
}

fn check_rank(rank: usize) -> Result<(), EvalError> {
    if rank > MAX_RANK {
        Err(EvalError::RankTooLarge { rank, max: MAX_RANK })
    } else {
        Ok(())
    }
}

fn shared_count(a: &Tensor, b: &Tensor) -> usize {
    a.idx.iter().filter(|i| b.idx.contains(i)).count()
}

fn contract_greedy(tensors: Vec<Tensor>) -> Result<Vec<Tensor>, EvalError> {
    let mut live: Vec<Option<(Tensor, usize)>> =
        tensors.into_iter().map(|t| { let n = t.nnz(); Some((t, n)) }).collect();
    loop {
        let mut owners: HashMap<usize, Vec<usize>> = HashMap::new();
        for (s, t) in live.iter().enumerate() {
            if let Some((t, _)) = t {
                for &i in &t.idx {
                    owners.entry(i).or_default().push(s);
                }
            }
        }
        let pairs: BTreeSet<(usize, usize)> =
            owners.values().filter(|o| o.len() == 2).map(|o| (o[0].min(o[1]), o[0].max(o[1]))).collect();
        let best = pairs
            .into_iter()
            .map(|(a, b)| {
                let (ta, na) = live[a].as_ref().expect("live");
                let (tb, nb) = live[b].as_ref().expect("live");
                let rank = ta.rank() + tb.rank() - 2 * shared_count(ta, tb);
                ((rank, na.saturating_mul(*nb), a, b), (a, b))
            })
            .min();
        let Some(((rank, ..), (a, b))) = best else { break };
        check_rank(rank)?;
        let (ta, _) = live[a].take().expect("live");
        let (tb, _) = live[b].take().expect("live");
        let t = contract(&ta, &tb);
        let n = t.nnz();
        live.push(Some((t, n)));
    }
    Ok(live.into_iter().flatten().map(|(t, _)| t).collect())
}

fn contract_sequential(tensors: Vec<Tensor>, edge_index: &[Option<usize>]) -> Result<Vec<Tensor>, EvalError> {
    let mut live: Vec<Option<Tensor>> = tensors.into_iter().map(Some).collect();
    for &i in edge_index.iter().flatten() {
        let holders: Vec<usize> = live
            .iter()
            .enumerate()
            .filter(|(_, t)| t.as_ref().is_some_and(|t| t.idx.contains(&i)))
            .map(|(s, _)| s)
            .collect();
        // a self-loop was traced inside its node, and an index already
        // contracted away has no holders
        if let [a, b] = holders[..] {
            let (ta, tb) = (live[a].take().expect("live"), live[b].take().expect("live"));
            check_rank(ta.rank() + tb.rank() - 2 * shared_count(&ta, &tb))?;
            live.push(Some(contract(&ta, &tb)));
        }
    }
    Ok(live.into_iter().flatten().collect())
}

/// Evaluates with the default evaluator.
pub fn evaluate(d: &Diagram) -> Result<ExactMatrix, EvalError> {
    Evaluator::default().evaluate(d)
}

/// [`Evaluator::apply_basis`] with the default evaluator.
pub fn apply_basis(d: &Diagram, v: &[bool], side: Side) -> Result<ExactMatrix, EvalError> {
    Evaluator::default().apply_basis(d, v, side)
}
