//! Rule applications at positions where the side condition is violated.
//! Each is offered to the rule, which should refuse it, and is also
//! forced through and checked for a changed answer sequence.

use std::fmt;

use specpl_core::analyzer::{analyze_procedure, analyze_program, AnnotatedProcedure};
use specpl_core::ast::{parse_program, Procedure};
use specpl_core::concrete::SolveOptions;
use specpl_core::normal_form::normalize_program;
use specpl_core::spec_lang::parse_specs;
use specpl_core::transformer::*;

use super::diff::{differential_check, show_args};
use super::gen::GeneratorConfig;

const EFFACE: &str = "
efface(X,[H|T],[H|TEff]) :- efface(X,T,TEff), not(X=H).
efface(X,[X|T],T).
";

const EFFACE_SPEC: &str = "efface in(X:gr, T:list(gr), TEff:any) out(_, _, list(gr)) sol(sol =< 1) sexpr(T)";

const MEMBER: &str = "
member(X,[X|_]).
member(X,[_|T]) :- member(X,T).
";

const MEMBER_GEN: &str = "member in(X:var, L:list(gr)) sol(sol =< L_in) sexpr(L)";

const APPEND: &str = "
append([],L,L).
append([H|L1],L2,[H|L3]) :- append(L1,L2,L3).
";

const APPEND_SPEC: &str = "append in(L1:list(gr), L2:list(gr), L3:var) out(_, _, list(gr)) srel(L3_out = L1_in + L2_in) sol(sol =< 1) sexpr(L1)";

const APPEND_SPLIT: &str = "append in(L1:var, L2:var, L3:list(gr)) sol(sol =< L3_in + 1) sexpr(L3)";

const FIRST: &str = "
p(X, Y, L) :- X = 1, !, member(Y, L).
p(_, 3, _).
member(X,[X|_]).
member(X,[_|T]) :- member(X,T).
";

const FIRST_SPEC: &str = "
p in(X:gr, Y:var, L:list(gr))
member in(X:var, L:list(gr)) sol(sol =< L_in) sexpr(L)
";

const PARTITION: &str = "
partition([], _, [], []).
partition([X|L], Y, [X|L1], L2) :- X =< Y, partition(L, Y, L1, L2).
partition([X|L], Y, L1, [X|L2]) :- X > Y, partition(L, Y, L1, L2).
";

const PARTITION_SPEC: &str =
    "partition in(L:list(int), Y:int, L1:var, L2:var) out(_, _, list(int), list(int)) srel(L1_out + L2_out = L_in) sexpr(L)";

/// Where the mutant starts from.
#[derive(Clone, Copy)]
enum Base {
    /// The normalized source.
    Normalized,
    /// The specialized procedure before denormalization.
    Specialized,
}

struct Mutant {
    rule: u8,
    label: &'static str,
    source: &'static str,
    specs: &'static str,
    base: Base,
    attempt: fn(&AnnotatedProcedure) -> Result<RuleOutcome, RuleError>,
    force: fn(&Procedure) -> Procedure,
}

fn mutants() -> Vec<Mutant> {
    vec![
        Mutant {
            rule: 1,
            label: "swap the clauses of member with unbound element",
            source: MEMBER,
            specs: MEMBER_GEN,
            base: Base::Normalized,
            attempt: |ap| rule_reorder_clauses(ap, 0, 1),
            force: |p| Edit::SwapClauses(0, 1).apply(p),
        },
        Mutant {
            rule: 1,
            label: "swap the clauses of append splitting a list",
            source: APPEND,
            specs: APPEND_SPLIT,
            base: Base::Normalized,
            attempt: |ap| rule_reorder_clauses(ap, 0, 1),
            force: |p| Edit::SwapClauses(0, 1).apply(p),
        },
        Mutant {
            rule: 2,
            label: "cut after the head of member with unbound element",
            source: MEMBER,
            specs: MEMBER_GEN,
            base: Base::Normalized,
            attempt: |ap| rule_insert_cut(ap, 0, 1),
            force: |p| Edit::InsertCut { clause: 0, at: 1 }.apply(p),
        },
        Mutant {
            rule: 2,
            label: "cut at the start of the recursive efface clause",
            source: EFFACE,
            specs: EFFACE_SPEC,
            base: Base::Normalized,
            attempt: |ap| rule_insert_cut(ap, 0, 0),
            force: |p| Edit::InsertCut { clause: 0, at: 0 }.apply(p),
        },
        Mutant {
            rule: 2,
            label: "cut of specialized efface moved one literal left",
            source: EFFACE,
            specs: EFFACE_SPEC,
            base: Base::Specialized,
            attempt: |ap| rule_insert_cut(ap, 0, 1),
            force: |p| {
                let cut = p.clauses[0].body.iter().position(|l| l.is_cut()).unwrap();
                let mut q = p.clone();
                q.clauses[0].body.swap(cut - 1, cut);
                q
            },
        },
        Mutant {
            rule: 3,
            label: "drop the recursive clause after the efface cut",
            source: EFFACE,
            specs: EFFACE_SPEC,
            base: Base::Specialized,
            attempt: |ap| rule_eliminate_dead_code(ap, 0),
            force: |p| Edit::RemoveClausesAfter(0).apply(p),
        },
        Mutant {
            rule: 3,
            label: "drop the base clause after the append cut",
            source: APPEND,
            specs: APPEND_SPEC,
            base: Base::Specialized,
            attempt: |ap| rule_eliminate_dead_code(ap, 0),
            force: |p| Edit::RemoveClausesAfter(0).apply(p),
        },
        Mutant {
            rule: 4,
            label: "move the efface cut past a may-fail unification",
            source: EFFACE,
            specs: EFFACE_SPEC,
            base: Base::Specialized,
            attempt: |ap| rule_move_cut_backwards(ap, 0),
            force: |p| {
                let cut = p.clauses[0].body.iter().position(|l| l.is_cut()).unwrap();
                Edit::MoveCutRight { clause: 0, cut }.apply(p)
            },
        },
        Mutant {
            rule: 4,
            label: "move a cut past a nondeterministic call",
            source: FIRST,
            specs: FIRST_SPEC,
            base: Base::Normalized,
            attempt: |ap| rule_move_cut_backwards(ap, 0),
            force: |p| {
                let cut = p.clauses[0].body.iter().position(|l| l.is_cut()).unwrap();
                Edit::MoveCutRight { clause: 0, cut }.apply(p)
            },
        },
        Mutant {
            rule: 5,
            label: "remove the negation of the recursive efface clause",
            source: EFFACE,
            specs: EFFACE_SPEC,
            base: Base::Normalized,
            attempt: |ap| {
                let i = ap.clauses[0].clause.body.len() - 1;
                rule_remove_useless_literal(ap, 0, i)
            },
            force: |p| {
                let i = p.clauses[0].body.len() - 1;
                Edit::RemoveLiteral { clause: 0, literal: i }.apply(p)
            },
        },
        Mutant {
            rule: 5,
            label: "remove the comparison of partition",
            source: PARTITION,
            specs: PARTITION_SPEC,
            base: Base::Normalized,
            attempt: |ap| rule_remove_useless_literal(ap, 1, 2),
            force: |p| Edit::RemoveLiteral { clause: 1, literal: 2 }.apply(p),
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutantOutcome {
    pub rule: u8,
    pub label: &'static str,
    /// The violated check, when the rule refused.
    pub refused: Option<String>,
    /// The forced application changed some answer sequence.
    pub caught: bool,
    pub witness: Option<String>,
}

impl MutantOutcome {
    pub fn safe(&self) -> bool {
        self.refused.is_some() || self.caught
    }
}

impl fmt::Display for MutantOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule {} {}: ", self.rule, self.label)?;
        match &self.refused {
            Some(c) => write!(f, "refused ({c})")?,
            None => f.write_str("accepted")?,
        }
        write!(f, ", forced {}", if self.caught { "mismatch" } else { "no mismatch" })?;
        if let Some(w) = &self.witness {
            write!(f, " on {w}")?;
        }
        Ok(())
    }
}

fn run(m: &Mutant, cfg: &GeneratorConfig, opts: &SolveOptions) -> MutantOutcome {
    let program = parse_program(m.source).expect("mutant source parses");
    let specs = parse_specs(m.specs).expect("mutant spec parses");
    let norm = normalize_program(&program).expect("mutant source normalizes");
    let analysis = analyze_program(&norm, &specs);
    let pred = specs[0].pred();
    let base = match m.base {
        Base::Normalized => norm.get(&pred).unwrap().clone(),
        Base::Specialized => specialize(&program, &specs, 0).expect("base specializes").final_normalized,
    };
    let ap = analyze_procedure(&norm, &base, &analysis.table, 0);
    let refused = (m.attempt)(&ap).err().map(|e| e.failed);
    let mut mutated = norm.clone();
    mutated.insert((m.force)(&base));
    let report = differential_check(&program, &mutated, &specs[0], cfg, opts).expect("mutant inputs");
    MutantOutcome {
        rule: m.rule,
        label: m.label,
        refused,
        caught: report.mismatches > 0,
        witness: report.witness.map(|w| show_args(&specs[0].name, &w.args)),
    }
}

/// Runs every mutant: at least two per rule.
pub fn mutation_suite(cfg: &GeneratorConfig, opts: &SolveOptions) -> Vec<MutantOutcome> {
    mutants().iter().map(|m| run(m, cfg, opts)).collect()
}
