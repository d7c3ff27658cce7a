//! Seeded generators for formulae, instances and diagrams.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{positional_vars, CnfFormula, Formula, Literal, SatCompareInstance};
use crate::graph::{Diagram, DiagramBuilder, Endpoint, GeneratorKind};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A formula over `vars` with at most `depth` levels of connectives.
pub fn random_formula<R: Rng>(rng: &mut R, vars: &[String], depth: u32) -> Formula {
    let leaf = |rng: &mut R| {
        if vars.is_empty() || rng.gen_ratio(1, 8) {
            Formula::Const(rng.gen())
        } else {
            Formula::var(vars.choose(rng).expect("non-empty").clone())
        }
    };
    if depth == 0 || rng.gen_ratio(1, 4) {
        return leaf(rng);
    }
    let sub = |rng: &mut R| random_formula(rng, vars, depth - 1);
    match rng.gen_range(0..9) {
        0 | 1 => Formula::not(sub(rng)),
        2 | 3 => Formula::and(sub(rng), sub(rng)),
        4 | 5 => Formula::or(sub(rng), sub(rng)),
        6 | 7 => Formula::implies(sub(rng), sub(rng)),
        _ => Formula::iff(sub(rng), sub(rng)),
    }
}

/// A SAT&Compare#SAT instance with `n <= n_max` and `m <= m_max`.
pub fn random_instance<R: Rng>(rng: &mut R, n_max: usize, m_max: usize) -> SatCompareInstance {
    let n = rng.gen_range(0..=n_max);
    let m = rng.gen_range(0..=m_max);
    let x = positional_vars("x", n);
    let xy: Vec<String> = x.iter().cloned().chain(positional_vars("y", m)).collect();
    let xz: Vec<String> = x.iter().cloned().chain(positional_vars("z", m)).collect();
    let psi = random_formula(rng, &xy, 3);
    let rho = random_formula(rng, &xz, 3);
    SatCompareInstance::new(n, m, psi, rho).expect("variables drawn from the instance lists")
}

/// `count` instances from `seed`.
pub fn instance_corpus(seed: u64, count: usize, n_max: usize, m_max: usize) -> Vec<SatCompareInstance> {
    let mut rng = rng_from_seed(seed);
    (0..count).map(|_| random_instance(&mut rng, n_max, m_max)).collect()
}

/// A CNF with `n <= n_max` variables and `m <= m_max` clauses of up to
/// three literals.
pub fn random_cnf<R: Rng>(rng: &mut R, n_max: usize, m_max: usize) -> CnfFormula {
    let n = rng.gen_range(0..=n_max);
    let m = rng.gen_range(0..=m_max);
    let clauses = (0..m)
        .map(|_| {
            if n == 0 {
                return Vec::new();
            }
            (0..rng.gen_range(0..=3)).map(|_| Literal { var: rng.gen_range(0..n), positive: rng.gen() }).collect()
        })
        .collect();
    CnfFormula::new(positional_vars("x", n), clauses).expect("indices drawn below n")
}

/// A well-formed diagram with the given boundary and at most `max_nodes`
/// nodes of degree at most three. Self-loops, parallel edges and wires
/// joining two boundary points all occur.
pub fn random_diagram<R: Rng>(rng: &mut R, n_in: usize, n_out: usize, max_nodes: usize) -> Diagram {
    let mut b = DiagramBuilder::new();
    let mut stubs: Vec<Endpoint> = Vec::new();
    for _ in 0..n_in {
        stubs.push(b.input());
    }
    for _ in 0..n_out {
        stubs.push(b.output());
    }
    let mut legged = Vec::new();
    for _ in 0..rng.gen_range(0..=max_nodes) {
        let kind = *GeneratorKind::ALL.choose(rng).expect("non-empty");
        let id = b.add_node(kind);
        if kind != GeneratorKind::Star {
            legged.push(id);
            for _ in 0..rng.gen_range(0..=3) {
                stubs.push(b.port(id));
            }
        }
    }
    if stubs.len() % 2 == 1 {
        let id = match legged.choose(rng) {
            Some(&id) => id,
            None => b.add_node(GeneratorKind::WhiteSpider),
        };
        stubs.push(b.port(id));
    }
    stubs.shuffle(rng);
    for pair in stubs.chunks(2) {
        b.connect(pair[0], pair[1]);
    }
    b.build()
}
