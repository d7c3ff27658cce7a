//! Open multigraphs over the six generators of the phase-free ZH calculus.
//!
//! Generators are symmetric tensors, so a node has no input/output split:
//! its arity is its degree and port indices only serve to tell edges apart.
//! The split exists only at the boundary, where `inputs` and `outputs` list
//! the boundary positions in wire order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GeneratorKind {
    #[serde(rename = "Z")]
    WhiteSpider,
    #[serde(rename = "X")]
    DarkSpider,
    #[serde(rename = "ZNot")]
    WhiteNot,
    #[serde(rename = "XNot")]
    DarkNot,
    #[serde(rename = "H")]
    HBox,
    Star,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 6] = [
        GeneratorKind::WhiteSpider,
        GeneratorKind::DarkSpider,
        GeneratorKind::WhiteNot,
        GeneratorKind::DarkNot,
        GeneratorKind::HBox,
        GeneratorKind::Star,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            GeneratorKind::WhiteSpider => "Z",
            GeneratorKind::DarkSpider => "X",
            GeneratorKind::WhiteNot => "ZNot",
            GeneratorKind::DarkNot => "XNot",
            GeneratorKind::HBox => "H",
            GeneratorKind::Star => "Star",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    In,
    Out,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::In => "in",
            Side::Out => "out",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Endpoint {
    Port { node: NodeId, port: usize },
    Boundary { boundary: Side, pos: usize },
}

impl Endpoint {
    pub fn port(node: NodeId, port: usize) -> Self {
        Endpoint::Port { node, port }
    }

    pub fn boundary(side: Side, pos: usize) -> Self {
        Endpoint::Boundary { boundary: side, pos }
    }

    pub fn node(&self) -> Option<NodeId> {
        match *self {
            Endpoint::Port { node, .. } => Some(node),
            Endpoint::Boundary { .. } => None,
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Port { node, port } => write!(f, "{node}.{port}"),
            Endpoint::Boundary { boundary, pos } => write!(f, "{boundary}[{pos}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    StarWithLegs(NodeId),
    /// A listed boundary position that is not in exactly one edge.
    BoundaryDegree { side: Side, pos: usize, degree: usize },
    /// An edge touches a boundary position missing from the input/output list.
    UnlistedBoundary { side: Side, pos: usize },
    DuplicateBoundary { side: Side, pos: usize },
    MissingNode(NodeId),
    DuplicatePort { node: NodeId, port: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::StarWithLegs(id) => write!(f, "star node {id} has legs"),
            Violation::BoundaryDegree { side, pos, degree } => {
                write!(f, "boundary {side}[{pos}] appears in {degree} edges")
            }
            Violation::UnlistedBoundary { side, pos } => {
                write!(f, "boundary {side}[{pos}] is used but not listed")
            }
            Violation::DuplicateBoundary { side, pos } => {
                write!(f, "boundary {side}[{pos}] is listed twice")
            }
            Violation::MissingNode(id) => write!(f, "edge refers to missing node {id}"),
            Violation::DuplicatePort { node, port } => {
                write!(f, "port {port} of node {node} is used twice")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("arity mismatch: expected {expected} wires, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("invalid diagram: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("malformed diagram JSON: {0}")]
    Json(String),
}

/// An open diagram. See the module docs for the conventions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Diagram {
    nodes: BTreeMap<NodeId, GeneratorKind>,
    edges: Vec<(Endpoint, Endpoint)>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

impl Diagram {
    /// The empty diagram, denoting the scalar 1.
    pub fn empty() -> Self {
        Diagram::default()
    }

    /// Assembles a diagram from raw parts without checking it.
    pub fn from_parts(
        nodes: BTreeMap<NodeId, GeneratorKind>,
        edges: Vec<(Endpoint, Endpoint)>,
        inputs: Vec<usize>,
        outputs: Vec<usize>,
    ) -> Self {
        Diagram { nodes, edges, inputs, outputs }
    }

    /// `n` parallel wires.
    pub fn identity(n: usize) -> Self {
        let mut b = DiagramBuilder::new();
        for _ in 0..n {
            let i = b.input();
            let o = b.output();
            b.connect(i, o);
        }
        b.build()
    }

    /// A single generator with `m` input legs and `n` output legs.
    pub fn generator(kind: GeneratorKind, m: usize, n: usize) -> Self {
        let mut b = DiagramBuilder::new();
        let v = b.add_node(kind);
        for _ in 0..m {
            let i = b.input();
            b.connect(i, Endpoint::port(v, 0));
        }
        for _ in 0..n {
            let o = b.output();
            b.connect(Endpoint::port(v, 0), o);
        }
        // connect above reuses port 0 as a placeholder; renumber
        b.renumber_ports();
        b.build()
    }

    /// A lone star, the scalar 1/2.
    pub fn star() -> Self {
        Diagram::generator(GeneratorKind::Star, 0, 0)
    }

    /// `k` stars, the scalar `2^-k`.
    pub fn stars(k: usize) -> Self {
        let mut b = DiagramBuilder::new();
        for _ in 0..k {
            b.add_node(GeneratorKind::Star);
        }
        b.build()
    }

    pub fn nodes(&self) -> &BTreeMap<NodeId, GeneratorKind> {
        &self.nodes
    }

    pub fn edges(&self) -> &[(Endpoint, Endpoint)] {
        &self.edges
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn n_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn n_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn kind(&self, id: NodeId) -> Option<GeneratorKind> {
        self.nodes.get(&id).copied()
    }

    /// Number of edge ends on each node; a self-loop counts twice.
    pub fn degrees(&self) -> BTreeMap<NodeId, usize> {
        let mut deg: BTreeMap<NodeId, usize> = self.nodes.keys().map(|&id| (id, 0)).collect();
        for (a, b) in &self.edges {
            for e in [a, b] {
                if let Some(id) = e.node() {
                    *deg.entry(id).or_insert(0) += 1;
                }
            }
        }
        deg
    }

    pub fn count_kind(&self, kind: GeneratorKind) -> usize {
        self.nodes.values().filter(|&&k| k == kind).count()
    }

    /// Lists every broken invariant; empty iff the diagram is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = BTreeSet::new();
        let mut listed: BTreeMap<(Side, usize), usize> = BTreeMap::new();
        for (side, list) in [(Side::In, &self.inputs), (Side::Out, &self.outputs)] {
            for &pos in list.iter() {
                if listed.insert((side, pos), 0).is_some() {
                    out.insert(Violation::DuplicateBoundary { side, pos });
                }
            }
        }
        let mut ports = BTreeSet::new();
        for (a, b) in &self.edges {
            for e in [a, b] {
                match *e {
                    Endpoint::Port { node, port } => {
                        match self.nodes.get(&node) {
                            None => {
                                out.insert(Violation::MissingNode(node));
                            }
                            Some(GeneratorKind::Star) => {
                                out.insert(Violation::StarWithLegs(node));
                            }
                            Some(_) => {}
                        }
                        if !ports.insert((node, port)) {
                            out.insert(Violation::DuplicatePort { node, port });
                        }
                    }
                    Endpoint::Boundary { boundary, pos } => match listed.get_mut(&(boundary, pos)) {
                        Some(d) => *d += 1,
                        None => {
                            out.insert(Violation::UnlistedBoundary { side: boundary, pos });
                        }
                    },
                }
            }
        }
        for ((side, pos), degree) in listed {
            if degree != 1 {
                out.insert(Violation::BoundaryDegree { side, pos, degree });
            }
        }
        out.into_iter().collect()
    }

    pub fn check(&self) -> Result<(), GraphError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(GraphError::Invalid(v))
        }
    }

    /// Renumbers nodes to `0..` in id order and boundary positions to
    /// `0..` in list order, and sorts the edge ends. The denotation is
    /// unchanged.
    pub fn normalized(&self) -> Diagram {
        let ids: BTreeMap<NodeId, NodeId> =
            self.nodes.keys().enumerate().map(|(i, &id)| (id, i)).collect();
        let ins: BTreeMap<usize, usize> = self.inputs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let outs: BTreeMap<usize, usize> =
            self.outputs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let map = |e: Endpoint| match e {
            Endpoint::Port { node, port } => Endpoint::port(ids[&node], port),
            Endpoint::Boundary { boundary: Side::In, pos } => Endpoint::boundary(Side::In, ins[&pos]),
            Endpoint::Boundary { boundary: Side::Out, pos } => Endpoint::boundary(Side::Out, outs[&pos]),
        };
        Diagram {
            nodes: self.nodes.iter().map(|(id, &k)| (ids[id], k)).collect(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| {
                    let (a, b) = (map(a), map(b));
                    if b < a {
                        (b, a)
                    } else {
                        (a, b)
                    }
                })
                .collect(),
            inputs: (0..self.inputs.len()).collect(),
            outputs: (0..self.outputs.len()).collect(),
        }
    }

    /// Shifts node ids by `offset`; boundary positions are made consecutive.
    fn shifted(&self, offset: NodeId) -> Diagram {
        let d = self.normalized();
        let shift = |e: Endpoint| match e {
            Endpoint::Port { node, port } => Endpoint::port(node + offset, port),
            b => b,
        };
        Diagram {
            nodes: d.nodes.iter().map(|(&id, &k)| (id + offset, k)).collect(),
            edges: d.edges.iter().map(|&(a, b)| (shift(a), shift(b))).collect(),
            inputs: d.inputs,
            outputs: d.outputs,
        }
    }

    /// The same diagram with inputs and outputs exchanged. Since every
    /// generator is symmetric under transposition this denotes the
    /// transpose.
    pub fn transpose(&self) -> Diagram {
        let flip = |e: Endpoint| match e {
            Endpoint::Boundary { boundary: Side::In, pos } => Endpoint::boundary(Side::Out, pos),
            Endpoint::Boundary { boundary: Side::Out, pos } => Endpoint::boundary(Side::In, pos),
            p => p,
        };
        Diagram {
            nodes: self.nodes.clone(),
            edges: self.edges.iter().map(|&(a, b)| (flip(a), flip(b))).collect(),
            inputs: self.outputs.clone(),
            outputs: self.inputs.clone(),
        }
    }

    /// Replaces the boundary wires on `side` by computational basis states
    /// (`side = In`) or effects (`side = Out`): a star next to a one-legged
    /// dark spider for `0` or dark not for `1`.
    pub fn plug(&self, side: Side, bits: &[bool]) -> Result<Diagram, GraphError> {
        let list = match side {
            Side::In => &self.inputs,
            Side::Out => &self.outputs,
        };
        if list.len() != bits.len() {
            return Err(GraphError::ArityMismatch { expected: list.len(), found: bits.len() });
        }
        let mut d = self.normalized();
        let mut next = d.nodes.len();
        let mut plugged = BTreeMap::new();
        for (pos, &bit) in bits.iter().enumerate() {
            let kind = if bit { GeneratorKind::DarkNot } else { GeneratorKind::DarkSpider };
            d.nodes.insert(next, kind);
            d.nodes.insert(next + 1, GeneratorKind::Star);
            plugged.insert(pos, next);
            next += 2;
        }
        for (a, b) in d.edges.iter_mut() {
            for e in [a, b] {
                if let Endpoint::Boundary { boundary, pos } = *e {
                    if boundary == side {
                        *e = Endpoint::port(plugged[&pos], 0);
                    }
                }
            }
        }
        match side {
            Side::In => d.inputs.clear(),
            Side::Out => d.outputs.clear(),
        }
        Ok(d)
    }
}

/// `d1 ∘ d2`: the outputs of `d2` are fed into the inputs of `d1`, so the
/// result denotes `⟦d1⟧·⟦d2⟧`.
///
/// Wires that pass straight through are spliced. A closed loop made only of
/// boundary wires becomes a white spider with no legs, which denotes 2, the
/// trace of the identity.
pub fn compose(d1: &Diagram, d2: &Diagram) -> Result<Diagram, GraphError> {
    if d2.n_outputs() != d1.n_inputs() {
        return Err(GraphError::ArityMismatch { expected: d1.n_inputs(), found: d2.n_outputs() });
    }
    d1.check()?;
    d2.check()?;
    let lower = d2.shifted(0);
    let upper = d1.shifted(lower.nodes.len());

    #[derive(Clone, Copy, PartialEq, Eq)]
    enum Atom {
        Term(Endpoint),
        Mid(usize),
    }
    let lower_atom = |e: Endpoint| match e {
        Endpoint::Boundary { boundary: Side::Out, pos } => Atom::Mid(pos),
        e => Atom::Term(e),
    };
    let upper_atom = |e: Endpoint| match e {
        Endpoint::Boundary { boundary: Side::In, pos } => Atom::Mid(pos),
        e => Atom::Term(e),
    };
    let edges: Vec<[Atom; 2]> = lower
        .edges
        .iter()
        .map(|&(a, b)| [lower_atom(a), lower_atom(b)])
        .chain(upper.edges.iter().map(|&(a, b)| [upper_atom(a), upper_atom(b)]))
        .collect();

    // each mid-point is touched by exactly two edge ends
    let mut at_mid: Vec<Vec<(usize, usize)>> = vec![Vec::new(); d1.n_inputs()];
    for (i, e) in edges.iter().enumerate() {
        for (end, atom) in e.iter().enumerate() {
            if let Atom::Mid(p) = atom {
                at_mid[*p].push((i, end));
            }
        }
    }

    let mut nodes = lower.nodes.clone();
    nodes.extend(upper.nodes.iter().map(|(&k, &v)| (k, v)));
    let mut next_id = nodes.len();
    let mut out_edges = Vec::new();
    let mut used = vec![false; edges.len()];

    // walks from an edge end through mid-points to the terminal at the far
    // side; `None` when the walk closes up on itself
    let follow = |mut edge: usize, mut end: usize, used: &mut Vec<bool>| -> Option<Endpoint> {
        loop {
            used[edge] = true;
            let other = 1 - end;
            match edges[edge][other] {
                Atom::Term(t) => return Some(t),
                Atom::Mid(p) => {
                    let &(e2, end2) = at_mid[p]
                        .iter()
                        .find(|&&(e, en)| (e, en) != (edge, other))
                        .expect("validated boundary has degree one on both sides");
                    if used[e2] {
                        return None;
                    }
                    edge = e2;
                    end = end2;
                }
            }
        }
    };

    for i in 0..edges.len() {
        if used[i] {
            continue;
        }
        for (end, atom) in edges[i].iter().enumerate() {
            if let Atom::Term(start) = *atom {
                let finish = follow(i, end, &mut used).expect("a path from a terminal ends at one");
                out_edges.push((start, finish));
                break;
            }
        }
    }
    for i in 0..edges.len() {
        if !used[i] {
            follow(i, 0, &mut used);
            nodes.insert(next_id, GeneratorKind::WhiteSpider);
            next_id += 1;
        }
    }

    // boundaries of the result: inputs of d2, outputs of d1
    Ok(Diagram { nodes, edges: out_edges, inputs: lower.inputs, outputs: upper.outputs }.normalized())
}

/// Composes a list of diagrams right to left: `chain([a, b, c]) = a ∘ b ∘ c`.
pub fn compose_all<'a>(ds: impl IntoIterator<Item = &'a Diagram>) -> Result<Diagram, GraphError> {
    let ds: Vec<&Diagram> = ds.into_iter().collect();
    let mut iter = ds.into_iter().rev();
    let first = match iter.next() {
        Some(d) => d.clone(),
        None => return Ok(Diagram::empty()),
    };
    iter.try_fold(first, |acc, d| compose(d, &acc))
}

/// Disjoint union; the boundaries of `d1` come first.
pub fn tensor(d1: &Diagram, d2: &Diagram) -> Diagram {
    let a = d1.shifted(0);
    let offset = a.nodes.keys().next_back().map_or(0, |&m| m + 1);
    let b = d2.shifted(offset);
    let (ni, no) = (a.inputs.len(), a.outputs.len());
    let lift = |e: Endpoint| match e {
        Endpoint::Boundary { boundary: Side::In, pos } => Endpoint::boundary(Side::In, pos + ni),
        Endpoint::Boundary { boundary: Side::Out, pos } => Endpoint::boundary(Side::Out, pos + no),
        p => p,
    };
    let mut nodes = a.nodes;
    nodes.extend(b.nodes);
    let mut edges = a.edges;
    edges.extend(b.edges.iter().map(|&(x, y)| (lift(x), lift(y))));
    Diagram {
        nodes,
        edges,
        inputs: (0..ni + b.inputs.len()).collect(),
        outputs: (0..no + b.outputs.len()).collect(),
    }
}

pub fn tensor_all<'a>(ds: impl IntoIterator<Item = &'a Diagram>) -> Diagram {
    ds.into_iter().fold(Diagram::empty(), |acc, d| tensor(&acc, d))
}

/// Incremental construction with automatic port numbering.
#[derive(Debug, Clone, Default)]
pub struct DiagramBuilder {
    diagram: Diagram,
    next_port: BTreeMap<NodeId, usize>,
}

impl DiagramBuilder {
    pub fn new() -> Self {
        DiagramBuilder::default()
    }

    pub fn add_node(&mut self, kind: GeneratorKind) -> NodeId {
        let id = self.diagram.nodes.keys().next_back().map_or(0, |&m| m + 1);
        self.diagram.nodes.insert(id, kind);
        id
    }

    /// A fresh port on `node`.
    pub fn port(&mut self, node: NodeId) -> Endpoint {
        let p = self.next_port.entry(node).or_insert(0);
        *p += 1;
        Endpoint::port(node, *p - 1)
    }

    /// Appends an input wire end.
    pub fn input(&mut self) -> Endpoint {
        let pos = self.diagram.inputs.len();
        self.diagram.inputs.push(pos);
        Endpoint::boundary(Side::In, pos)
    }

    /// Appends an output wire end.
    pub fn output(&mut self) -> Endpoint {
        let pos = self.diagram.outputs.len();
        self.diagram.outputs.push(pos);
        Endpoint::boundary(Side::Out, pos)
    }

    pub fn connect(&mut self, a: Endpoint, b: Endpoint) {
        self.diagram.edges.push((a, b));
    }

    /// Adds an edge between fresh ports of two nodes.
    pub fn wire(&mut self, a: NodeId, b: NodeId) {
        let (pa, pb) = (self.port(a), self.port(b));
        self.connect(pa, pb);
    }

    /// Adds an edge from a fresh port of `node` to `e`.
    pub fn attach(&mut self, node: NodeId, e: Endpoint) {
        let p = self.port(node);
        self.connect(p, e);
    }

    /// Gives every edge end on a node its own port number, in edge order.
    fn renumber_ports(&mut self) {
        self.next_port.clear();
        let mut edges = std::mem::take(&mut self.diagram.edges);
        for (a, b) in edges.iter_mut() {
            for e in [a, b] {
                if let Endpoint::Port { node, .. } = *e {
                    *e = self.port(node);
                }
            }
        }
        self.diagram.edges = edges;
    }

    pub fn build(self) -> Diagram {
        self.diagram
    }
}

#[derive(Serialize, Deserialize)]
struct NodeRepr {
    id: NodeId,
    kind: GeneratorKind,
}

#[derive(Serialize, Deserialize)]
struct DiagramRepr {
    nodes: Vec<NodeRepr>,
    edges: Vec<(Endpoint, Endpoint)>,
    inputs: Vec<Endpoint>,
    outputs: Vec<Endpoint>,
}

impl Serialize for Diagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        DiagramRepr {
            nodes: self.nodes.iter().map(|(&id, &kind)| NodeRepr { id, kind }).collect(),
            edges: self.edges.clone(),
            inputs: self.inputs.iter().map(|&p| Endpoint::boundary(Side::In, p)).collect(),
            outputs: self.outputs.iter().map(|&p| Endpoint::boundary(Side::Out, p)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Diagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = DiagramRepr::deserialize(d)?;
        let mut nodes = BTreeMap::new();
        for n in r.nodes {
            if nodes.insert(n.id, n.kind).is_some() {
                return Err(D::Error::custom(format!("duplicate node id {}", n.id)));
            }
        }
        let side_list = |eps: Vec<Endpoint>, side: Side| {
            eps.into_iter()
                .map(|e| match e {
                    Endpoint::Boundary { boundary, pos } if boundary == side => Ok(pos),
                    other => Err(D::Error::custom(format!("`{other}` is not an {side} boundary"))),
                })
                .collect::<Result<Vec<_>, _>>()
        };
        Ok(Diagram {
            nodes,
            edges: r.edges,
            inputs: side_list(r.inputs, Side::In)?,
            outputs: side_list(r.outputs, Side::Out)?,
        })
    }
}

impl Diagram {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Diagram, GraphError> {
        serde_json::from_str(s).map_err(|e| GraphError::Json(e.to_string()))
    }
}
