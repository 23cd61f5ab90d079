use specpl_core::ast::{parse_program, parse_term, print_term};
use specpl_core::concrete::{solve, AnswerSequence, CostCounters, SolveError, SolveOptions, Terminator};

const EFFACE: &str = "
efface(X,[H|T],[H|TEff]) :- efface(X,T,TEff), not(X=H).
efface(X,[X|T],T).
";

fn query(src: &str, goal: &str, opts: &SolveOptions) -> (AnswerSequence, CostCounters) {
    let p = parse_program(src).unwrap();
    solve(&p, &parse_term(goal).unwrap(), opts).unwrap()
}

fn answers(src: &str, goal: &str, var: &str) -> Vec<String> {
    let (seq, _) = query(src, goal, &SolveOptions::default());
    assert!(seq.is_complete());
    seq.answers.iter().map(|a| print_term(a.get(var).unwrap())).collect()
}

#[test]
fn efface_removes_first_occurrence() {
    assert_eq!(answers(EFFACE, "efface(1,[2,1],R)", "R"), ["[2]"]);
    assert_eq!(answers(EFFACE, "efface(1,[1,2,1],R)", "R"), ["[2,1]"]);
    assert!(answers(EFFACE, "efface(3,[1,2],R)", "R").is_empty());
}

#[test]
fn efface_backwards_enumerates_insertions() {
    assert_eq!(answers(EFFACE, "efface(1,T,[2])", "T"), ["[2,1]", "[1,2]"]);
}

#[test]
fn answers_come_in_depth_first_order() {
    let src = "m(X,[X|_]).\nm(X,[_|T]) :- m(X,T).";
    assert_eq!(answers(src, "m(X,[a,b,c])", "X"), ["a", "b", "c"]);
}

#[test]
fn cut_prunes_later_clauses_and_alternatives() {
    let src = "m(X,[X|_]) :- !.\nm(X,[_|T]) :- m(X,T).";
    assert_eq!(answers(src, "m(X,[a,b,c])", "X"), ["a"]);
    let src = "p(X) :- q(X), !.\np(0).\nq(1).\nq(2).";
    assert_eq!(answers(src, "p(X)", "X"), ["1"]);
}

#[test]
fn cut_inside_negation_is_local() {
    let src = "p(X) :- not(q(X)).\nq(1) :- !.\nq(2).";
    assert_eq!(query(src, "p(3)", &SolveOptions::default()).0.len(), 1);
    assert_eq!(query(src, "p(1)", &SolveOptions::default()).0.len(), 0);
}

#[test]
fn unbound_variables_are_named_consistently() {
    let (seq, _) = query("p(X,Y,X).", "p(A,B,C)", &SolveOptions::default());
    let a = &seq.answers[0];
    assert_eq!(a.get("A"), a.get("C"));
    assert_ne!(a.get("A"), a.get("B"));
}

#[test]
fn arithmetic_and_comparison() {
    let src = "len([],0).\nlen([_|T],N) :- len(T,M), N is M+1.";
    assert_eq!(answers(src, "len([a,b,c],N)", "N"), ["3"]);
    let p = parse_program("p(X) :- X > 1.").unwrap();
    let e = solve(&p, &parse_term("p(Y)").unwrap(), &SolveOptions::default()).unwrap_err();
    assert!(matches!(e, SolveError::Instantiation(_)));
}

#[test]
fn undefined_predicate_is_an_error() {
    let p = parse_program("p :- q.").unwrap();
    let e = solve(&p, &parse_term("p").unwrap(), &SolveOptions::default()).unwrap_err();
    assert!(matches!(e, SolveError::Undefined(_)));
}

#[test]
fn budget_exhaustion_is_reported() {
    let opts = SolveOptions {
        budget: 50,
        ..SolveOptions::default()
    };
    let (seq, c) = query("loop :- loop.", "loop", &opts);
    assert_eq!(seq.terminator, Terminator::BudgetExhausted);
    assert!(c.inferences <= 51);
}

#[test]
fn residual_choice_points_of_efface() {
    // original efface leaves one alternative per list element
    let (_, c) = query(EFFACE, "efface(5,[1,2,3,4,5],R)", &SolveOptions::default());
    assert_eq!(c.residual_choicepoints_after_first_answer, 4);
    let special = "efface(X1,[X1|X2],X3) :- !, X2=X3.\nefface(X1,[X4|X2],[X4|X3]) :- efface(X1,X2,X3).";
    let (_, c) = query(special, "efface(5,[1,2,3,4,5],R)", &SolveOptions::default());
    assert_eq!(c.residual_choicepoints_after_first_answer, 0);
}

#[test]
fn first_argument_indexing_avoids_choice_points() {
    let src = "app([],L,L).\napp([H|T],L,[H|R]) :- app(T,L,R).";
    let plain = query(src, "app([1,2],[3],R)", &SolveOptions::default()).1;
    let indexed = query(
        src,
        "app([1,2],[3],R)",
        &SolveOptions {
            model_indexing: true,
            ..SolveOptions::default()
        },
    )
    .1;
    assert!(plain.choicepoints_created > 0);
    assert_eq!(indexed.choicepoints_created, 0);
}
