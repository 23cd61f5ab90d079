use alloc::string::String;
use alloc::vec::Vec;

use super::*;
use crate::ast::parse_program;
use crate::normal_form::normalize_program;
use crate::spec_lang::parse_specs;

const EFFACE: &str = "
efface(X,[H|T],[H|TEff]) :- efface(X,T,TEff), not(X=H).
efface(X,[X|T],T).
";

const EFFACE_SPECS: &str = "
efface
  in(X:gr, T:list(gr), TEff:var)
  out(_, _, list(gr))
  srel(TEff_out = T_in-1)
  sol(sol =< 1)
  sexpr(T)
efface
  in(X:gr, T:any, TEff:list(gr))
  out(_, list(gr), _)
  srel(TEff_in = T_out-1)
  sol(sol =< TEff_in+1)
  sexpr(TEff)
";

const APPEND: &str = "
append([],L,L).
append([H|L1],L2,[H|L3]) :- append(L1,L2,L3).
";

const APPEND_SPEC: &str = "
append
  in(L1:list(gr), L2:list(gr), L3:var)
  out(_, _, list(gr))
  srel(L3_out = L1_in + L2_in)
  sol(sol =< 1)
  sexpr(L1)
";

fn analyze(src: &str, specs: &str) -> Analysis {
    let p = normalize_program(&parse_program(src).unwrap()).unwrap();
    analyze_program(&p, &parse_specs(specs).unwrap())
}

fn rejected_components(a: &AnnotatedProcedure) -> Vec<String> {
    match &a.verdict {
        Verdict::Accepted => Vec::new(),
        Verdict::Rejected(rs) => rs.iter().map(|r| r.component.clone()).collect(),
    }
}

#[test]
fn efface_specs_are_accepted() {
    let a = analyze(EFFACE, EFFACE_SPECS);
    assert_eq!(a.procedures.len(), 2);
    for p in &a.procedures {
        assert!(p.verdict.accepted(), "{}", p.dump());
    }
}

#[test]
fn efface_zero_solutions_is_rejected() {
    let bad = "efface in(X:gr, T:list(gr), TEff:var) out(_, _, list(gr)) sol(sol = 0) sexpr(T)";
    let a = analyze(EFFACE, bad);
    assert_eq!(rejected_components(&a.procedures[0]), ["E_sol"]);
}

#[test]
fn efface_wrong_size_relation_is_rejected() {
    let bad = "efface in(X:gr, T:list(gr), TEff:var) out(_, _, list(gr)) srel(TEff_out = T_in) sol(sol =< 1) sexpr(T)";
    let a = analyze(EFFACE, bad);
    assert_eq!(rejected_components(&a.procedures[0]), ["E_ref_out"]);
}

#[test]
fn recursion_without_size_expression_is_rejected() {
    let bad = "efface in(X:gr, T:list(gr), TEff:var) sol(sol =< 1)";
    let a = analyze(EFFACE, bad);
    assert_eq!(rejected_components(&a.procedures[0]), ["termination"]);
}

#[test]
fn mutual_recursion_is_rejected() {
    let src = "even([]).\neven([_|T]) :- odd(T).\nodd([_|T]) :- even(T).";
    let a = analyze(src, "even in(L:list(gr)) sexpr(L)\nodd in(L:list(gr)) sexpr(L)");
    assert!(a.procedures.iter().all(|p| rejected_components(p).contains(&String::from("termination"))));
}

#[test]
fn wrong_size_expression_is_rejected() {
    let bad = "efface in(X:gr, T:list(gr), TEff:var) sol(sol =< 1) sexpr(X)";
    let a = analyze(EFFACE, bad);
    assert!(rejected_components(&a.procedures[0]).contains(&String::from("termination")));
}

#[test]
fn append_is_accepted_and_surely_succeeds() {
    let a = analyze(APPEND, APPEND_SPEC);
    let p = &a.procedures[0];
    assert!(p.verdict.accepted(), "{}", p.dump());
    assert!(a.table.get(0).strengthened);
    assert!(p.result.fully_deterministic(), "{}", p.dump());
}

#[test]
fn efface_first_directionality_is_deterministic_but_may_fail() {
    let a = analyze(EFFACE, EFFACE_SPECS);
    let p = &a.procedures[0];
    assert!(p.result.deterministic());
    assert!(!p.result.surely_succeeds());
    assert!(!a.table.get(0).strengthened);
    // the recursive clause and the fact are exclusive
    assert!(exclusive_pair(&p.clauses, 0, 1), "{}", p.dump());
}

#[test]
fn after_list_decomposition_head_is_ground() {
    let a = analyze(EFFACE, EFFACE_SPECS);
    let c = &a.procedures[0].clauses[0];
    let b = &c.points[1];
    assert_eq!(b.beta_out.mode_of("X4"), crate::abstract_domain::Mode::GROUND);
    assert!(b.deterministic());
    assert!(!b.surely_succeeds());
}

#[test]
fn call_without_matching_spec_is_rejected() {
    let src = "p(X) :- q(X).\nq(a).";
    let a = analyze(src, "p in(X:var)\nq in(X:gr)");
    assert!(rejected_components(&a.procedures[0]).contains(&String::from("call")));
}

#[test]
fn nonground_negation_is_flagged() {
    let src = "p(X, Y) :- not(X = Y).";
    let a = analyze(src, "p in(X:gr, Y:any) sol(sol =< 1)");
    assert!(a.procedures[0].warnings.iter().any(|w| w.starts_with("unsound-negation-risk")));
}

