use alloc::string::String;

use super::*;
use crate::ast::parse_program;
use crate::spec_lang::parse_specs;

const EFFACE: &str = "
efface(X,[H|T],[H|TEff]) :- efface(X,T,TEff), not(X=H).
efface(X,[X|T],T).
";

const EFFACE_SPEC: &str = "
efface
  in(X:gr, T:list(gr), TEff:any)
  out(_, _, list(gr))
  sol(sol =< 1)
  sexpr(T)
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

fn run(src: &str, spec: &str) -> Specialization {
    let p = parse_program(src).unwrap();
    let s = parse_specs(spec).unwrap();
    match specialize(&p, &s, 0) {
        Ok(s) => s,
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn efface_golden() {
    let s = run(EFFACE, EFFACE_SPEC);
    let text = procedure_text(&s.output);
    assert_eq!(
        text,
        "efface(X1,[X1|X2],X3) :- !, X2=X3.\nefface(X1,[X4|X2],[X4|X3]) :- efface(X1,X2,X3).\n",
        "{}",
        s.trace
    );
}

#[test]
fn efface_intermediate_steps() {
    let s = run(EFFACE, EFFACE_SPEC);
    let t = &s.trace;
    assert!(t.of_step('C').any(|s| s.applied() && s.rule == Some(1)), "{t}");
    let d = t.text_after('D').unwrap();
    assert!(d.contains("X2=[X4|X5],X4=X1,X5=X3") || d.contains("X2=[X4|X5], X4=X1, X5=X3"), "{t}");
    assert!(t.of_step('E').any(|s| s.applied() && s.rule == Some(2)), "{t}");
    assert!(t.of_step('F').all(|s| !s.applied()), "{t}");
    assert!(t.of_step('F').count() >= 1, "{t}");
    assert!(t.of_step('G').any(|s| s.applied() && s.rule == Some(5)), "{t}");
}

#[test]
fn append_golden() {
    let s = run(APPEND, APPEND_SPEC);
    assert_eq!(
        procedure_text(&s.output),
        "append([X4|X1],X2,[X4|X3]) :- append(X1,X2,X3), !.\nappend(_,X2,X2).\n",
        "{}",
        s.trace
    );
}

#[test]
fn replay_reproduces_output() {
    let s = run(EFFACE, EFFACE_SPEC);
    assert_eq!(s.trace.replay(&s.normalized), s.output);
}

#[test]
fn rule_violation_is_reported() {
    let s = run(EFFACE, EFFACE_SPEC);
    // swapping the clauses back would place the cut clause after the other
    let e = rule_reorder_clauses(&s.annotated, 0, 1).unwrap_err();
    assert_eq!(e.rule, 1);
    assert!(e.failed.starts_with("no_cut"));
}

#[test]
fn rejected_spec_stops_specialization() {
    let p = parse_program(EFFACE).unwrap();
    let s = parse_specs("efface in(X:gr, T:list(gr), TEff:any) sol(sol = 0) sexpr(T)").unwrap();
    assert!(matches!(specialize(&p, &s, 0), Err(TransformError::Rejected { .. })));
}

#[test]
fn assume_green_strips_cuts() {
    let p = parse_program("m(X,[X|_]) :- !.\nm(X,[_|T]) :- m(X,T).").unwrap();
    let out = strip_green_cuts(&p.procedures[0], CutMode::AssumeGreen, &mut |_, _| Ok(())).unwrap();
    assert!(out.clauses.iter().all(|c| !c.has_cut()));
    let err = strip_green_cuts(&p.procedures[0], CutMode::Verified, &mut |_, _| Err(String::from("m(a,[a,a])")));
    assert!(matches!(err, Err(TransformError::RedCut { clause: 1, .. })));
}
