use rand::Rng;

use zhcount::evaluator::{
    apply_basis, evaluate, interpret_generator, matrix_compose, matrix_tensor, ContractionOrder, Evaluator,
    ExactMatrix,
};
use zhcount::graph::{compose, tensor, Diagram, GeneratorKind, Side};
use zhcount::random::{random_diagram, rng_from_seed};
use zhcount::scalar::ExactScalar;

/// Entry of a generator straight from its definition: spiders over the
/// computational basis, dark ones over the ± basis.
fn generator_entry(kind: GeneratorKind, bits: &[bool]) -> ExactScalar {
    let n = bits.len() as i64;
    let ones = bits.iter().filter(|&&b| b).count() as i64;
    let all0 = ones == 0;
    let all1 = ones == n;
    let sign = |b: bool| ExactScalar::from_int(if b { 1 } else { 0 });
    match kind {
        GeneratorKind::WhiteSpider => sign(all0) + sign(all1),
        GeneratorKind::WhiteNot => sign(all0) - sign(all1),
        // √2 · (⟨b|+⟩^⊗N ± ⟨b|−⟩^⊗N) with ⟨b|±⟩ = (±1)^b / √2
        GeneratorKind::DarkSpider | GeneratorKind::DarkNot => {
            let minus = ExactScalar::from_int(if ones % 2 == 0 { 1 } else { -1 });
            let s = if kind == GeneratorKind::DarkSpider { ExactScalar::one() + minus } else { ExactScalar::one() - minus };
            ExactScalar::sqrt2_pow(1 - n) * s
        }
        // (-1) raised to the product of all the bits, the empty product being 1
        GeneratorKind::HBox => ExactScalar::from_int(if all1 { -1 } else { 1 }),
        GeneratorKind::Star => ExactScalar::half(),
    }
}

#[test]
fn generators_match_their_definitions() {
    for kind in GeneratorKind::ALL {
        for m in 0..=3 {
            for n in 0..=3 {
                if kind == GeneratorKind::Star && m + n > 0 {
                    continue;
                }
                let direct = interpret_generator(kind, m, n).unwrap();
                let via_graph = evaluate(&Diagram::generator(kind, m, n)).unwrap();
                assert_eq!(direct, via_graph, "{kind} {m}->{n}");
                for row in 0..1u64 << n {
                    for col in 0..1u64 << m {
                        let bits: Vec<bool> = (0..n)
                            .map(|i| row >> (n - 1 - i) & 1 == 1)
                            .chain((0..m).map(|i| col >> (m - 1 - i) & 1 == 1))
                            .collect();
                        assert_eq!(direct.get(row, col), generator_entry(kind, &bits), "{kind} {m}->{n} at {row},{col}");
                    }
                }
            }
        }
    }
}

#[test]
fn hbox_one_to_one() {
    assert_eq!(evaluate(&Diagram::generator(GeneratorKind::HBox, 1, 1)).unwrap(), ExactMatrix::from_rows(&[&[1, 1], &[1, -1]]));
}

#[test]
fn empty_diagram_is_one() {
    assert_eq!(evaluate(&Diagram::empty()).unwrap().as_scalar(), Some(ExactScalar::one()));
}

#[test]
fn functoriality_under_both_orders() {
    let mut rng = rng_from_seed(77);
    let evs = [Evaluator::with_order(ContractionOrder::Greedy), Evaluator::with_order(ContractionOrder::Sequential)];
    for _ in 0..200 {
        let (a, b, c) = (rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(0..=3));
        let d2 = random_diagram(&mut rng, a, b, 6);
        let d1 = random_diagram(&mut rng, b, c, 6);
        for ev in &evs {
            let (m1, m2) = (ev.evaluate(&d1).unwrap(), ev.evaluate(&d2).unwrap());
            assert_eq!(ev.evaluate(&compose(&d1, &d2).unwrap()).unwrap(), matrix_compose(&m1, &m2).unwrap());
            assert_eq!(ev.evaluate(&tensor(&d1, &d2)).unwrap(), matrix_tensor(&m1, &m2));
        }
    }
}

#[test]
fn orders_agree() {
    let mut rng = rng_from_seed(5);
    let seq = Evaluator::with_order(ContractionOrder::Sequential);
    for _ in 0..200 {
        let (i, o) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
        let d = random_diagram(&mut rng, i, o, 8);
        assert_eq!(evaluate(&d).unwrap(), seq.evaluate(&d).unwrap());
    }
}

#[test]
fn plugging_inputs_selects_a_column() {
    let mut rng = rng_from_seed(6);
    for _ in 0..60 {
        let d = random_diagram(&mut rng, 2, 2, 6);
        let m = evaluate(&d).unwrap();
        for col in 0..4u64 {
            let v = [col & 2 != 0, col & 1 != 0];
            let got = apply_basis(&d, &v, Side::In).unwrap();
            for row in 0..4 {
                assert_eq!(got.get(row, 0), m.get(row, col));
            }
        }
    }
}

#[test]
fn boundary_limit_is_enforced() {
    let ev = Evaluator { max_boundary: 3, ..Evaluator::default() };
    assert!(ev.evaluate(&Diagram::identity(2)).is_err());
    assert!(ev.evaluate(&Diagram::generator(GeneratorKind::WhiteSpider, 1, 2)).is_ok());
}

#[test]
fn sparse_counting_state_stays_small() {
    // 2^12 entries of which only two are nonzero
    let d = Diagram::generator(GeneratorKind::WhiteSpider, 0, 12);
    let m = evaluate(&d).unwrap();
    assert_eq!(m.nnz(), 2);
    assert_eq!(m.get(0, 0), ExactScalar::one());
    assert_eq!(m.get(4095, 0), ExactScalar::one());
}

#[test]
fn matrix_json_round_trip() {
    let m = evaluate(&Diagram::generator(GeneratorKind::DarkNot, 1, 2)).unwrap();
    let back: ExactMatrix = serde_json::from_str(&m.to_json()).unwrap();
    assert_eq!(back, m);
}
