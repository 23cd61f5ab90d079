//! Concrete counterparts of the abstract-sequence checks, evaluated by
//! running clause prefixes and single literals on real inputs.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use specpl_core::abstract_sequence::AbstractSequence;
use specpl_core::analyzer::{AnnotatedClause, AnnotatedProcedure};
use specpl_core::ast::{Literal, Program, Term};
use specpl_core::concrete::{solve, SolveOptions, Substitution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Property {
    Deterministic,
    FullyDeterministic,
    SurelySucceeds,
    TestLiteral,
    Exclusive,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Deterministic => "deterministic",
            Property::FullyDeterministic => "fully_deterministic",
            Property::SurelySucceeds => "surely_succeeds",
            Property::TestLiteral => "test_literal",
            Property::Exclusive => "exclusive",
        })
    }
}

/// A property the analysis claimed for one sequence, with the concrete
/// runs that were checked against it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub location: String,
    pub property: Property,
    pub runs: usize,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SoundnessReport {
    /// Abstract sequences examined, claimed properties or not.
    pub sequences: usize,
    pub claims: Vec<Claim>,
}

impl SoundnessReport {
    pub fn violations(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| c.counterexample.is_some())
    }

    pub fn merge(&mut self, other: SoundnessReport) {
        self.sequences += other.sequences;
        self.claims.extend(other.claims);
    }
}

/// Concrete state of a clause: a binding for each clause variable.
type State = Vec<(String, Term)>;

fn conj(goals: Vec<Term>) -> Term {
    goals
        .into_iter()
        .rev()
        .reduce(|acc, g| Term::compound(",", vec![g, acc]))
        .unwrap_or_else(|| Term::atom("true"))
}

/// Answers of `lits` from `state`, as states over `vars`. `None` when the
/// run raises an error or exhausts the budget.
fn run(program: &Program, vars: &[String], state: &State, lits: &[Literal], opts: &SolveOptions) -> Option<Vec<State>> {
    let mut goals: Vec<Term> = state
        .iter()
        .map(|(v, t)| Term::compound("=", vec![Term::var(v), t.clone()]))
        .collect();
    goals.extend(lits.iter().map(Literal::to_term));
    // mention every clause variable so all of them are reported
    goals.extend(vars.iter().map(|v| Term::compound("=", vec![Term::var(v), Term::var(v)])));
    let goal = conj(goals);
    let (seq, _) = solve(program, &goal, opts).ok()?;
    if !seq.is_complete() {
        return None;
    }
    Some(seq.answers.into_iter().map(|s| restrict(&s, vars)).collect())
}

fn restrict(s: &Substitution, vars: &[String]) -> State {
    vars.iter()
        .map(|v| (v.clone(), s.get(v).cloned().unwrap_or_else(|| Term::var(v))))
        .collect()
}

fn show(state: &State) -> String {
    let parts: Vec<String> = state
        .iter()
        .map(|(v, t)| format!("{v}={}", specpl_core::ast::print_term(t)))
        .collect();
    parts.join(", ")
}

struct ClauseRuns<'a> {
    program: &'a Program,
    ac: &'a AnnotatedClause,
    vars: Vec<String>,
    opts: &'a SolveOptions,
    memo: RefCell<HashMap<(Vec<Term>, usize), Option<Vec<State>>>>,
}

impl ClauseRuns<'_> {
    fn entry(&self, args: &[Term]) -> State {
        args.iter()
            .enumerate()
            .map(|(k, t)| (format!("X{}", k + 1), t.clone()))
            .collect()
    }

    /// Answers of the first `i` body literals.
    fn prefix(&self, args: &[Term], i: usize) -> Option<Vec<State>> {
        let key = (args.to_vec(), i);
        if let Some(r) = self.memo.borrow().get(&key) {
            return r.clone();
        }
        let r = run(self.program, &self.vars, &self.entry(args), &self.ac.clause.body[..i], self.opts);
        self.memo.borrow_mut().insert(key, r.clone());
        r
    }
}

/// Inputs that reach clause `k`: no earlier clause executes its cut.
fn reaching(all: &[ClauseRuns], k: usize, inputs: &[Vec<Term>]) -> Vec<Vec<Term>> {
    inputs
        .iter()
        .filter(|args| {
            all[..k].iter().all(|r| {
                let Some(c) = r.ac.first_cut() else { return true };
                matches!(r.prefix(args, c), Some(a) if a.is_empty())
            })
        })
        .cloned()
        .collect()
}

fn count_claims(seq: &AbstractSequence, with_test: bool) -> Vec<Property> {
    let mut out = Vec::new();
    if seq.deterministic() {
        out.push(Property::Deterministic);
    }
    if seq.fully_deterministic() {
        out.push(Property::FullyDeterministic);
    }
    if seq.surely_succeeds() {
        out.push(Property::SurelySucceeds);
    }
    if with_test && seq.test_literal() {
        out.push(Property::TestLiteral);
    }
    out
}

fn answers_violate(p: Property, n: usize) -> bool {
    match p {
        Property::Deterministic => n > 1,
        Property::FullyDeterministic => n != 1,
        Property::SurelySucceeds => n == 0,
        _ => false,
    }
}

/// Checks every point, literal and clause-pair sequence of `ap` against
/// concrete runs on `inputs`, which must satisfy the spec's input.
pub fn check_procedure(program: &Program, ap: &AnnotatedProcedure, inputs: &[Vec<Term>], opts: &SolveOptions) -> SoundnessReport {
    let mut report = SoundnessReport::default();
    let name = ap.procedure.pred.to_string();
    let all: Vec<ClauseRuns> = ap
        .clauses
        .iter()
        .map(|ac| ClauseRuns {
            program,
            ac,
            vars: ac.clause.vars(),
            opts,
            memo: RefCell::default(),
        })
        .collect();
    let reach: Vec<Vec<Vec<Term>>> = (0..all.len()).map(|k| reaching(&all, k, inputs)).collect();
    for (k, ac) in ap.clauses.iter().enumerate() {
        let (reach, runs) = (&reach[k], &all[k]);
        for (i, seq) in ac.points.iter().enumerate() {
            report.sequences += 1;
            for p in count_claims(seq, false) {
                let mut claim = Claim {
                    location: format!("{name} clause {} point {i}", k + 1),
                    property: p,
                    runs: 0,
                    counterexample: None,
                };
                for args in reach {
                    let Some(a) = runs.prefix(args, i) else { continue };
                    claim.runs += 1;
                    if answers_violate(p, a.len()) {
                        claim.counterexample = Some(format!("{} gives {} answers", show(&runs.entry(args)), a.len()));
                        break;
                    }
                }
                report.claims.push(claim);
            }
        }
        for (i, seq) in ac.literals.iter().enumerate() {
            if ac.clause.body[i].is_cut() {
                continue;
            }
            report.sequences += 1;
            let claims = count_claims(seq, true);
            if claims.is_empty() {
                continue;
            }
            let mut states = Vec::new();
            for args in reach {
                if let Some(s) = runs.prefix(args, i) {
                    states.extend(s);
                }
            }
            states.sort();
            states.dedup();
            // answers of the literal and of the empty goal from each state
            let outcomes: Vec<(State, Vec<State>, Vec<State>)> = states
                .into_iter()
                .filter_map(|st| {
                    let a = run(program, &runs.vars, &st, &ac.clause.body[i..=i], opts)?;
                    let same = run(program, &runs.vars, &st, &[], opts).unwrap_or_default();
                    Some((st, a, same))
                })
                .collect();
            for p in claims {
                let mut claim = Claim {
                    location: format!("{name} clause {} literal {}", k + 1, i + 1),
                    property: p,
                    runs: 0,
                    counterexample: None,
                };
                for (st, a, same) in &outcomes {
                    claim.runs += 1;
                    let bad = if p == Property::TestLiteral {
                        !(a.is_empty() || a == same)
                    } else {
                        answers_violate(p, a.len())
                    };
                    if bad {
                        claim.counterexample = Some(format!("from {} gives {} answers", show(st), a.len()));
                        break;
                    }
                }
                report.claims.push(claim);
            }
        }
    }
    for k in 0..ap.clauses.len() {
        for z in k + 1..ap.clauses.len() {
            let (a, b) = (&ap.clauses[k], &ap.clauses[z]);
            let (ra, rb) = (&all[k], &all[z]);
            for (i, seq) in a.points.iter().enumerate() {
                report.sequences += 1;
                if !seq.exclusive(&b.result) {
                    continue;
                }
                let mut claim = Claim {
                    location: format!("{name} clause {} point {i}, clause {}", k + 1, z + 1),
                    property: Property::Exclusive,
                    runs: 0,
                    counterexample: None,
                };
                for args in &reach[z] {
                    let (Some(x), Some(y)) = (ra.prefix(args, i), rb.prefix(args, b.clause.body.len())) else {
                        continue;
                    };
                    claim.runs += 1;
                    if !x.is_empty() && !y.is_empty() {
                        claim.counterexample = Some(format!("both succeed on {}", show(&ra.entry(args))));
                        break;
                    }
                }
                report.claims.push(claim);
            }
        }
    }
    report
}
