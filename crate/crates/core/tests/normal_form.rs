use specpl_core::ast::{parse_program, parse_term, Literal, PredId};
use specpl_core::concrete::{solve, SolveOptions};
use specpl_core::normal_form::{normalize_program, undefined_calls, validate_normal_form, NormalizeError};
use specpl_core::transformer::procedure_text;

#[test]
fn efface_normal_form() {
    let p = parse_program(
        "efface(X,[H|T],[H|TEff]) :- efface(X,T,TEff), not(X=H).\nefface(X,[X|T],T).",
    )
    .unwrap();
    let n = normalize_program(&p).unwrap();
    let e = n.get(&PredId::new("efface", 3)).unwrap();
    assert_eq!(
        procedure_text(e),
        "efface(X1,X2,X3) :- X2=[X4|X5], X3=[X4|X6], efface(X1,X5,X6), not(X1=X4).\n\
         efface(X1,X2,X3) :- X2=[X1|X3].\n"
    );
    validate_normal_form(e).unwrap();
}

#[test]
fn nested_terms_are_flattened() {
    let p = parse_program("p(f(g(X),[a]), X).").unwrap();
    let n = normalize_program(&p).unwrap();
    let c = &n.procedures[0].clauses[0];
    assert!(c.body.iter().all(|l| matches!(l, Literal::UnifyVarVar(..) | Literal::UnifyVarFunctor(..))));
    validate_normal_form(&n.procedures[0]).unwrap();
}

#[test]
fn disjunction_becomes_auxiliary_procedure() {
    let p = parse_program("p(X) :- (X = a ; X = b).").unwrap();
    let n = normalize_program(&p).unwrap();
    assert!(n.procedures.len() >= 2);
    for proc_ in &n.procedures {
        validate_normal_form(proc_).unwrap();
    }
    assert!(undefined_calls(&n).is_empty());
}

#[test]
fn if_then_else_is_rejected() {
    let e = parse_program("p(X) :- (X = a -> true ; fail).").unwrap_err();
    assert!(e.msg.contains("->"));
}

#[test]
fn cut_inside_disjunction_is_rejected() {
    let p = parse_program("p(X) :- (X = a, ! ; X = b).").unwrap();
    assert!(matches!(normalize_program(&p), Err(NormalizeError::Unsupported { .. })));
}

#[test]
fn normalization_keeps_answers() {
    let src = "
rev([],A,A).
rev([H|T],A,R) :- rev(T,[H|A],R).
p(X,Y) :- (X = 1 ; X = 2), Y = f(X).
";
    let p = parse_program(src).unwrap();
    let n = normalize_program(&p).unwrap();
    for goal in ["rev([1,2,3],[],R)", "p(X,Y)", "p(2,f(Z))", "rev(L,[],[1])"] {
        let g = parse_term(goal).unwrap();
        let opts = SolveOptions {
            budget: 500,
            ..SolveOptions::default()
        };
        let a = solve(&p, &g, &opts).unwrap().0;
        let b = solve(&n, &g, &opts).unwrap().0;
        assert_eq!(a.answers, b.answers, "{goal}");
    }
}
