mod common;

use std::collections::HashMap;

use proptest::prelude::*;
use rand::Rng;

use common::{count, names, truth};
use zhcount::formula::{
    concat_formulae, count_sat, decode01, encode01, formula_with_count, parse, to_cnf, CnfFormula, Formula,
    Limits, Valuation,
};
use zhcount::random::{random_cnf, random_formula, rng_from_seed};

fn formula_on(vars: Vec<String>, depth: u32) -> impl Strategy<Value = Formula> {
    any::<u64>().prop_map(move |seed| random_formula(&mut rng_from_seed(seed), &vars, depth))
}

fn cnf(n_max: usize, m_max: usize) -> impl Strategy<Value = CnfFormula> {
    any::<u64>().prop_map(move |seed| random_cnf(&mut rng_from_seed(seed), n_max, m_max))
}

#[test]
fn concatenation_law_exhaustive_corpus() {
    let mut rng = rng_from_seed(31);
    for _ in 0..300 {
        let (x, y) = (names("x", rng.gen_range(0..=3)), names("y", rng.gen_range(0..=3)));
        let phi = random_formula(&mut rng, &x, 3);
        let psi = random_formula(&mut rng, &y, 3);
        let c = concat_formulae(&phi, &x, &psi, &y);
        assert_eq!(c.vars.len(), x.len() + y.len() + 2);
        assert_eq!(
            count(&c.formula, &c.vars),
            count(&phi, &x) * (1 << (y.len() + 1)) + count(&psi, &y),
            "{phi} / {psi}"
        );
    }
}

#[test]
fn concatenation_with_clashing_names() {
    let x = names("x", 2);
    let c = concat_formulae(&parse("x1 | x2").unwrap(), &x, &parse("x1 & ~x2").unwrap(), &x);
    assert_eq!(count(&c.formula, &c.vars), 3 * 8 + 1);
}

#[test]
fn every_count_is_realised() {
    for n in 0..=4 {
        let xs = names("x", n);
        for k in 0..=1u64 << n {
            let phi = formula_with_count(&xs, &k.into()).unwrap();
            assert_eq!(count(&phi, &xs), k, "n = {n}, k = {k}");
            assert_eq!(count_sat(&phi, &xs).unwrap(), k);
        }
    }
    assert!(formula_with_count(&names("x", 2), &5u64.into()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn count_sat_matches_oracle(phi in formula_on(names("x", 5), 4)) {
        let xs = names("x", 5);
        prop_assert_eq!(count_sat(&phi, &xs).unwrap(), count(&phi, &xs));
    }

    #[test]
    fn codec_count_law(c in cnf(4, 4)) {
        let (n, m) = (c.num_vars(), c.num_clauses());
        let k = n.max(m);
        let w = encode01(&c);
        prop_assert_eq!(w.bits().len(), 2 * k * k);
        let back = decode01(&w);
        let before = count(&c.to_formula(), c.variables());
        let after = count(&back.to_formula(), &names("x", k));
        // Padding clauses only reach the fresh variables, each of which is
        // then forced true; the other assignments of the fresh variables
        // satisfy everything when m > n.
        let extra = ((1u64 << (k - n)) - 1) << n;
        if m <= n {
            prop_assert_eq!(after, before);
        } else {
            prop_assert_eq!(after, before + extra);
        }
        prop_assert_eq!(encode01(&back), w);
    }

    #[test]
    fn substitution_is_coherent(phi in formula_on(names("x", 4), 4), mask in 0u32..16, bits in 0u32..16) {
        let xs = names("x", 4);
        let total: HashMap<String, bool> =
            xs.iter().enumerate().map(|(i, v)| (v.clone(), bits >> i & 1 == 1)).collect();
        let partial: Valuation =
            xs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| (v.clone(), total[v])).collect();
        let full: Valuation = total.iter().map(|(k, v)| (k.clone(), *v)).collect();
        prop_assert_eq!(phi.substitute(&partial).eval(&full).unwrap(), truth(&phi, &total));
    }

    #[test]
    fn to_cnf_keeps_the_count(phi in formula_on(names("x", 4), 3)) {
        let xs = names("x", 4);
        let c = to_cnf(&phi, &xs, &Limits::default()).unwrap();
        prop_assert_eq!(count(&c.to_formula(), c.variables()), count(&phi, &xs));
        prop_assert_eq!(CnfFormula::from_dimacs(&c.to_dimacs()).unwrap().count_sat(&Limits::default()).unwrap(),
            count(&phi, &xs));
    }

    #[test]
    fn display_parses_back(phi in formula_on(names("v", 4), 4)) {
        prop_assert_eq!(parse(&phi.to_string()).unwrap(), phi);
    }

    #[test]
    fn simplify_keeps_meaning(phi in formula_on(names("x", 4), 4)) {
        let xs = names("x", 4);
        prop_assert_eq!(count(&phi.simplify(), &xs), count(&phi, &xs));
    }
}

#[test]
fn enumeration_bound_is_configurable() {
    let xs = names("x", 6);
    let tight = Limits { max_vars: 5, ..Limits::default() };
    assert!(zhcount::formula::count_sat_with(&Formula::Const(true), &xs, &tight).is_err());
    assert_eq!(zhcount::formula::count_sat_with(&Formula::Const(true), &xs, &Limits::default()).unwrap(), 64);
}
