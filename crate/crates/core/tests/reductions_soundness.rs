mod common;

use rand::Rng;

use common::{count, dense_int, dense_mul, dense_transpose, instance_counts, names, sat_compare_oracle};
use zhcount::evaluator::{apply_basis, evaluate};
use zhcount::formula::{parse, SatCompareInstance};
use zhcount::graph::{Diagram, GeneratorKind, Side};
use zhcount::random::{instance_corpus, random_formula, rng_from_seed};
use zhcount::reductions::{
    antisymmetric_cap, antisymmetric_cap_raw, build_circuit_extraction, build_contains_entry, build_state_eq,
    dyadic_scalar, DyadicK, StateEqInstance,
};
use zhcount::scalar::ExactScalar;

fn pure(d: &Diagram) -> bool {
    d.validate().is_empty() && d.nodes().values().all(|k| GeneratorKind::ALL.contains(k))
}

fn column_bits(i: usize, n: usize) -> Vec<bool> {
    (0..n).map(|j| i >> (n - 1 - j) & 1 == 1).collect()
}

#[test]
fn state_eq_diagrams_are_the_count_vectors() {
    for inst in instance_corpus(1, 60, 3, 3) {
        let se = build_state_eq(&inst).unwrap();
        assert!(pure(&se.d1) && pure(&se.d2));
        let (m1, m2) = (evaluate(&se.d1).unwrap(), evaluate(&se.d2).unwrap());
        for (i, (p, r)) in instance_counts(&inst).into_iter().enumerate() {
            assert_eq!(m1.get(0, i as u64), ExactScalar::from(p));
            assert_eq!(m2.get(0, i as u64), ExactScalar::from(r));
        }
    }
}

#[test]
fn contains_entry_values() {
    let ks = [DyadicK::integer(0), DyadicK::integer(1), DyadicK::new(3, 2), DyadicK::new(-5, 1), DyadicK::integer(2)];
    for inst in instance_corpus(2, 40, 3, 2) {
        let counts = instance_counts(&inst);
        for k in ks {
            let d = build_contains_entry(&inst, k).unwrap();
            assert!(pure(&d));
            assert_eq!((d.n_inputs(), d.n_outputs()), (inst.n(), 0));
            for (i, &(p, r)) in counts.iter().enumerate() {
                let got = apply_basis(&d, &column_bits(i, inst.n()), Side::In).unwrap().as_scalar().unwrap();
                let diff = r as i64 - p as i64;
                let want = if k.d() == 0 && (k.c() == 0 || k.c() == 1) {
                    ExactScalar::from(diff + k.c())
                } else {
                    ExactScalar::from(diff + 1) * k.value()
                };
                assert_eq!(got, want, "k = {k}");
                // the entry equals k exactly when the counts agree
                assert_eq!(got == k.value(), p == r, "k = {k}");
            }
        }
    }
}

#[test]
fn caps_and_scalars() {
    let raw = evaluate(&antisymmetric_cap_raw()).unwrap();
    assert_eq!(raw.get(0, 1), ExactScalar::sqrt2());
    assert_eq!(raw.get(0, 2), -ExactScalar::sqrt2());
    assert!(raw.get(0, 0).is_zero() && raw.get(0, 3).is_zero());
    assert_eq!(dense_int(&evaluate(&antisymmetric_cap()).unwrap()), vec![vec![0, 1, -1, 0]]);
    for (c, d) in [(0, 0), (1, 0), (-1, 0), (3, 2), (-7, 3), (12, 0), (1, 5)] {
        let k = DyadicK::new(c, d);
        let s = evaluate(&dyadic_scalar(k).unwrap()).unwrap().as_scalar().unwrap();
        assert_eq!(s, ExactScalar::dyadic(c, d), "{c}/2^{d}");
    }
}

#[test]
fn dyadic_k_text() {
    assert_eq!("3/4".parse::<DyadicK>().unwrap(), DyadicK::new(3, 2));
    assert_eq!("6/2^3".parse::<DyadicK>().unwrap(), DyadicK::new(3, 2));
    assert_eq!("-2".parse::<DyadicK>().unwrap(), DyadicK::integer(-2));
    assert!("1/3".parse::<DyadicK>().is_err());
    assert_eq!(DyadicK::new(4, 3).to_string(), "1/2^1");
}

#[test]
fn circuit_extraction_is_proportional_to_a_unitary() {
    let mut rng = rng_from_seed(19);
    let mut corpus = vec![(parse("(x1 & x2) & (x1 & ~x3)").unwrap(), names("x", 3)), (parse("F").unwrap(), names("x", 1))];
    for _ in 0..60 {
        let vars = names("x", rng.gen_range(0..=4));
        corpus.push((random_formula(&mut rng, &vars, 4), vars));
    }
    for (phi, vars) in corpus {
        let d = build_circuit_extraction(&phi, &vars).unwrap();
        assert!(pure(&d));
        let m = dense_int(&evaluate(&d).unwrap());
        let a1 = count(&phi, &vars) as i64;
        let a0 = (1i64 << vars.len()) - a1;
        assert_eq!(m, vec![vec![a0, a1], vec![a1, -a0]], "{phi}");
        let n2 = a0 * a0 + a1 * a1;
        assert_eq!(dense_mul(&m, &dense_transpose(&m)), vec![vec![n2, 0], vec![0, n2]]);
    }
}

#[test]
fn worked_instance_round_trips_as_json() {
    let inst = SatCompareInstance::new(1, 2, parse("x1 | y1 | ~y2").unwrap(), parse("~(z1 & (z2 | x1))").unwrap()).unwrap();
    let back: SatCompareInstance = serde_json::from_str(&serde_json::to_string(&inst).unwrap()).unwrap();
    assert_eq!(back, inst);
    let se = build_state_eq(&inst).unwrap();
    let se_back: StateEqInstance = serde_json::from_str(&serde_json::to_string(&se).unwrap()).unwrap();
    assert_eq!(evaluate(&se_back.d1).unwrap(), evaluate(&se.d1).unwrap());
    assert_eq!(sat_compare_oracle(&inst), Some(vec![false]));
}
