use specpl_core::ast::{parse_program, print_program};
use specpl_core::normal_form::validate_normal_form;
use specpl_core::spec_lang::parse_specs;
use specpl_core::transformer::{procedure_text, specialize, Specialization, TransformError};

const EFFACE: &str = "
efface(X,[H|T],[H|TEff]) :- efface(X,T,TEff), not(X=H).
efface(X,[X|T],T).
";

const APPEND: &str = "
append([],L,L).
append([H|L1],L2,[H|L3]) :- append(L1,L2,L3).
";

fn run(src: &str, spec: &str) -> Specialization {
    let p = parse_program(src).unwrap();
    let s = parse_specs(spec).unwrap();
    specialize(&p, &s, 0).unwrap_or_else(|e| panic!("{e}"))
}

#[test]
fn efface_ground_list_any_result() {
    let s = run(EFFACE, "efface in(X:gr, T:list(gr), TEff:any) out(_, _, list(gr)) sol(sol =< 1) sexpr(T)");
    assert_eq!(
        procedure_text(&s.output),
        "efface(X1,[X1|X2],X3) :- !, X2=X3.\nefface(X1,[X4|X2],[X4|X3]) :- efface(X1,X2,X3).\n"
    );
}

#[test]
fn efface_var_result_moves_the_cut() {
    // X3 is a fresh variable, so X2=X3 surely succeeds and the cut passes it
    let s = run(
        EFFACE,
        "efface in(X:gr, T:list(gr), TEff:var) out(_, _, list(gr)) srel(TEff_out = T_in-1) sol(sol =< 1) sexpr(T)",
    );
    assert!(s.trace.of_step('F').any(|x| x.applied()), "{}", s.trace);
    assert_eq!(
        procedure_text(&s.output),
        "efface(X1,[X1|X3],X3) :- !.\nefface(X1,[X4|X2],[X4|X3]) :- efface(X1,X2,X3).\n"
    );
}

#[test]
fn append_cut_after_recursive_call() {
    let s = run(
        APPEND,
        "append in(L1:list(gr), L2:list(gr), L3:var) out(_, _, list(gr)) srel(L3_out = L1_in + L2_in) sol(sol =< 1) sexpr(L1)",
    );
    assert_eq!(
        procedure_text(&s.output),
        "append([X4|X1],X2,[X4|X3]) :- append(X1,X2,X3), !.\nappend(_,X2,X2).\n"
    );
}

#[test]
fn nondeterministic_direction_keeps_clause_order() {
    let s = run(
        EFFACE,
        "efface in(X:gr, T:any, TEff:list(gr)) out(_, list(gr), _) srel(TEff_in = T_out-1) sol(sol =< TEff_in+1) sexpr(TEff)",
    );
    assert!(s.trace.of_step('C').all(|x| !x.applied()), "{}", s.trace);
    assert!(s.output.clauses.iter().all(|c| !c.has_cut()));
}

#[test]
fn final_code_is_normal_and_replayable() {
    let s = run(EFFACE, "efface in(X:gr, T:list(gr), TEff:any) sol(sol =< 1) sexpr(T)");
    validate_normal_form(&s.final_normalized).unwrap();
    assert_eq!(s.trace.replay(&s.normalized), s.output);
}

#[test]
fn output_program_round_trips_through_the_printer() {
    let src = parse_program(APPEND).unwrap();
    let s = run(APPEND, "append in(L1:list(gr), L2:list(gr), L3:var) sol(sol =< 1) sexpr(L1)");
    let out = s.output_program(&src);
    let once = print_program(&parse_program(&print_program(&out)).unwrap());
    let twice = print_program(&parse_program(&once).unwrap());
    assert_eq!(once, twice);
    assert_eq!(parse_program(&once).unwrap().clause_count(), out.clause_count());
}

#[test]
fn wrong_spec_is_rejected_with_component() {
    let p = parse_program(EFFACE).unwrap();
    let specs = parse_specs("efface in(X:gr, T:list(gr), TEff:var) out(_, _, list(gr)) srel(TEff_out = T_in) sexpr(T)").unwrap();
    match specialize(&p, &specs, 0) {
        Err(TransformError::Rejected { reasons, .. }) => {
            assert!(reasons.iter().any(|r| r.component == "E_ref_out"), "{reasons:?}")
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn missing_procedure() {
    let p = parse_program(APPEND).unwrap();
    let specs = parse_specs("nope in(X:gr)").unwrap();
    assert!(matches!(specialize(&p, &specs, 0), Err(TransformError::NoProcedure(_))));
}
