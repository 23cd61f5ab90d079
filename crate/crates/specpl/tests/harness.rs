use std::collections::BTreeMap;

use proptest::prelude::*;
use specpl::harness::{
    cost_compare, differential_check, generate_inputs, run_call, show_args, shrink, GenError, GeneratorConfig, Outcome,
};
use specpl_core::ast::{parse_program, parse_term, Term};
use specpl_core::concrete::SolveOptions;
use specpl_core::spec_lang::{arg_var, input_substitution, parse_specs, FormalSpec};

const EFFACE: &str = "
efface(X,[H|T],[H|TEff]) :- efface(X,T,TEff), not(X=H).
efface(X,[X|T],T).
";

/// The cut makes the first clause commit even when the element differs.
const EFFACE_RED: &str = "
efface(X,[_|T],T) :- !.
efface(X,[H|T],[H|TEff]) :- efface(X,T,TEff).
";

fn spec(text: &str) -> FormalSpec {
    parse_specs(text).unwrap().remove(0)
}

fn efface_spec() -> FormalSpec {
    spec("efface in(X:gr, T:list(gr), TEff:var) sol(sol =< 1) sexpr(T)")
}

fn small() -> GeneratorConfig {
    GeneratorConfig {
        samples: 20,
        exhaustive_len: 2,
        max_list_len: 4,
        ..GeneratorConfig::default()
    }
}

fn t(s: &str) -> Term {
    parse_term(s).unwrap()
}

#[test]
fn exhaustive_part_contains_small_inputs() {
    let inputs = generate_inputs(&efface_spec(), &GeneratorConfig::default()).unwrap();
    for (x, list) in [(1, vec![]), (1, vec![1]), (2, vec![1, 2]), (3, vec![3, 3, 3, 3])] {
        let found = inputs
            .iter()
            .any(|a| a[0] == Term::Int(x) && a[1] == Term::int_list(&list) && a[2].is_var());
        assert!(found, "efface({x},{list:?},_) missing");
    }
    // 3 elements, lists up to length 4 over 3 values
    let exhaustive = 3 * (1 + 3 + 9 + 27 + 81);
    assert_eq!(inputs.len(), exhaustive + 200);
}

#[test]
fn variable_arguments_are_fresh_and_distinct() {
    let s = spec("p in(A:var, B:var)");
    let cfg = GeneratorConfig {
        samples: 5,
        ..GeneratorConfig::default()
    };
    for args in generate_inputs(&s, &cfg).unwrap() {
        assert!(args[0].is_var() && args[1].is_var());
        assert_ne!(args[0], args[1]);
    }
}

#[test]
fn seeded_samples_are_reproducible() {
    let s = efface_spec();
    let cfg = GeneratorConfig {
        seed: 42,
        ..GeneratorConfig::default()
    };
    assert_eq!(generate_inputs(&s, &cfg).unwrap(), generate_inputs(&s, &cfg).unwrap());
    let other = GeneratorConfig { seed: 43, ..cfg.clone() };
    assert_ne!(generate_inputs(&s, &cfg).unwrap(), generate_inputs(&s, &other).unwrap());
}

#[test]
fn bad_configurations_and_empty_inputs() {
    let bad = GeneratorConfig {
        exhaustive_len: 9,
        ..GeneratorConfig::default()
    };
    assert!(matches!(generate_inputs(&efface_spec(), &bad), Err(GenError::Config(_))));
    let empty = GeneratorConfig {
        ints: 3..=1,
        ..GeneratorConfig::default()
    };
    assert!(matches!(generate_inputs(&efface_spec(), &empty), Err(GenError::Config(_))));
}

#[test]
fn identical_programs_agree() {
    let p = parse_program(EFFACE).unwrap();
    let r = differential_check(&p, &p, &efface_spec(), &small(), &SolveOptions::default()).unwrap();
    assert_eq!(r.mismatches, 0);
    assert_eq!(r.equal, r.inputs.len());
    assert!(r.witness.is_none());
    assert!((r.mean_inference_ratio - 1.0).abs() < 1e-9);
}

#[test]
fn red_cut_is_caught_with_a_small_witness() {
    let (a, b) = (parse_program(EFFACE).unwrap(), parse_program(EFFACE_RED).unwrap());
    let r = differential_check(&a, &b, &efface_spec(), &small(), &SolveOptions::default()).unwrap();
    assert!(r.mismatches > 0);
    let w = r.witness.unwrap();
    // shrinking reaches a one-element list whose element differs from X
    let list = w.args[1].as_list().unwrap();
    assert_eq!(list.len(), 1, "{}", show_args("efface", &w.args));
    assert_ne!(list[0], &w.args[0]);
}

#[test]
fn shrink_moves_toward_small_inputs() {
    let (a, b) = (parse_program(EFFACE).unwrap(), parse_program(EFFACE_RED).unwrap());
    let big = [t("3"), t("[2,3,1,2]"), t("R")];
    let s = shrink(&a, &b, &efface_spec(), &big, &SolveOptions::default());
    assert!(s[1].as_list().unwrap().len() < 4);
}

#[test]
fn run_call_reports_errors_and_budget() {
    let p = parse_program("p(X) :- X > 0.\nloop(X) :- loop(X).").unwrap();
    let (o, _) = run_call(&p, "p", &[t("Y")], &SolveOptions::default());
    assert!(matches!(o, Outcome::Error(_)));
    let opts = SolveOptions {
        budget: 100,
        ..SolveOptions::default()
    };
    let (o, _) = run_call(&p, "loop", &[t("1")], &opts);
    assert_eq!(o, Outcome::Inconclusive);
}

#[test]
fn cost_buckets_report_residual_choice_points() {
    let original = parse_program(EFFACE).unwrap();
    let special = parse_program("efface(X1,[X1|X3],X3) :- !.\nefface(X1,[X4|X2],[X4|X3]) :- efface(X1,X2,X3).").unwrap();
    let buckets: Vec<(usize, Vec<Vec<Term>>)> = [3usize, 6, 12]
        .iter()
        .map(|&n| {
            let l: Vec<i64> = (1..=n as i64).collect();
            (n, vec![vec![Term::Int(n as i64), Term::int_list(&l), t("R")]])
        })
        .collect();
    let c = cost_compare(&original, &special, "efface", &buckets, &SolveOptions::default());
    let res: Vec<(u64, u64)> = c.buckets.iter().map(|b| (b.original_residual, b.specialized_residual)).collect();
    assert_eq!(res, [(2, 0), (5, 0), (11, 0)]);
    assert!(c.specialized_constant() && c.original_grows_linearly() && !c.original_constant());
}

fn admissible(s: &FormalSpec, args: &[Term]) -> bool {
    let theta: BTreeMap<String, Term> = args.iter().enumerate().map(|(k, t)| (arg_var(k), t.clone())).collect();
    input_substitution(s).models(&theta)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn generated_inputs_satisfy_the_spec(seed in any::<u64>(), which in 0usize..4) {
        let s = spec([
            "efface in(X:gr, T:list(gr), TEff:var)",
            "efface in(X:gr, T:any, TEff:list(gr))",
            "m in(X:var, L:list(int))",
            "p in(A:ngv, B:novar, C:atom)",
        ][which]);
        let cfg = GeneratorConfig { seed, samples: 30, exhaustive_len: 1, ..GeneratorConfig::default() };
        for args in generate_inputs(&s, &cfg).unwrap() {
            prop_assert!(admissible(&s, &args), "{}", show_args(&s.name, &args));
        }
    }
}
