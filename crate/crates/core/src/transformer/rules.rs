//! The five transformation rules with their side conditions checked
//! against the annotations of the procedure.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Check, Edit};
use crate::analyzer::AnnotatedProcedure;
use crate::ast::Procedure;

/// A rule application that passed its checks.
#[derive(Debug, Clone)]
pub struct RuleOutcome {
    pub procedure: Procedure,
    pub edit: Edit,
    pub checks: Vec<Check>,
}

/// A rule whose side condition does not hold.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("rule {rule}: condition violated: {failed}")]
pub struct RuleError {
    pub rule: u8,
    /// The first failing check.
    pub failed: String,
    pub checks: Vec<Check>,
}

fn conclude(rule: u8, ap: &AnnotatedProcedure, edit: Edit, checks: Vec<Check>) -> Result<RuleOutcome, RuleError> {
    if let Some(bad) = checks.iter().find(|c| !c.holds) {
        return Err(RuleError {
            rule,
            failed: format!("{}({})", bad.name, bad.at),
            checks,
        });
    }
    Ok(RuleOutcome {
        procedure: edit.apply(&ap.procedure),
        edit,
        checks,
    })
}

fn clause_at(k: usize) -> String {
    format!("clause {}", k + 1)
}

fn point_at(k: usize, i: usize) -> String {
    format!("clause {} point {}", k + 1, i)
}

/// Rule 1: swaps clauses `i` and `j`. Every clause of the block between
/// them must be deterministic and cut-free, and the clauses pairwise
/// exclusive.
pub fn rule_reorder_clauses(ap: &AnnotatedProcedure, i: usize, j: usize) -> Result<RuleOutcome, RuleError> {
    let (lo, hi) = (i.min(j), i.max(j));
    let mut checks = Vec::new();
    for k in lo..=hi {
        let c = &ap.clauses[k];
        checks.push(Check::new("deterministic", clause_at(k), c.result.deterministic()));
        checks.push(Check::new("no_cut", clause_at(k), !c.clause.has_cut()));
    }
    for k in lo..=hi {
        for l in k + 1..=hi {
            let ex = ap.clauses[k].result.exclusive(&ap.clauses[l].result);
            checks.push(Check::new("exclusive", format!("{}, {}", clause_at(k), clause_at(l)), ex));
        }
    }
    conclude(1, ap, Edit::SwapClauses(i, j), checks)
}

/// Rule 2: inserts a cut after the first `i` literals of clause `k`. The
/// prefix must be deterministic and exclusive with every later clause.
pub fn rule_insert_cut(ap: &AnnotatedProcedure, k: usize, i: usize) -> Result<RuleOutcome, RuleError> {
    let c = &ap.clauses[k];
    let p = &c.points[i];
    let mut checks = vec_of([Check::new("deterministic", point_at(k, i), p.deterministic())]);
    for z in k + 1..ap.clauses.len() {
        let ex = p.exclusive(&ap.clauses[z].result);
        checks.push(Check::new("exclusive", format!("{}, {}", point_at(k, i), clause_at(z)), ex));
    }
    conclude(2, ap, Edit::InsertCut { clause: k, at: i }, checks)
}

/// Rule 3: removes the clauses after `k` when the prefix before the first
/// cut of clause `k` surely succeeds.
pub fn rule_eliminate_dead_code(ap: &AnnotatedProcedure, k: usize) -> Result<RuleOutcome, RuleError> {
    let c = &ap.clauses[k];
    let checks = match c.first_cut() {
        None => vec_of([Check::new("has_cut", clause_at(k), false)]),
        Some(i) => vec_of([
            Check::new("has_cut", clause_at(k), true),
            Check::new("surely_succeeds", point_at(k, i), c.points[i].surely_succeeds()),
        ]),
    };
    conclude(3, ap, Edit::RemoveClausesAfter(k), checks)
}

/// Rule 4: moves the first cut of clause `k` one literal to the right when
/// that literal is fully deterministic where it stands.
pub fn rule_move_cut_backwards(ap: &AnnotatedProcedure, k: usize) -> Result<RuleOutcome, RuleError> {
    let c = &ap.clauses[k];
    let Some(i) = c.first_cut() else {
        return conclude(4, ap, Edit::MoveCutRight { clause: k, cut: 0 }, vec_of([Check::new("has_cut", clause_at(k), false)]));
    };
    let at_end = i + 1 >= c.clause.body.len();
    let mut checks = vec_of([Check::new("literal_after_cut", point_at(k, i + 1), !at_end)]);
    if !at_end {
        let fd = c.literals[i + 1].fully_deterministic();
        checks.push(Check::new(
            "fully_deterministic",
            format!("clause {} literal {}", k + 1, i + 2),
            fd,
        ));
    }
    conclude(4, ap, Edit::MoveCutRight { clause: k, cut: i }, checks)
}

/// Rule 5: removes literal `i` of clause `k` when it is a test that
/// surely succeeds for the inputs reaching it, including inputs narrowed by
/// cuts of earlier clauses.
pub fn rule_remove_useless_literal(ap: &AnnotatedProcedure, k: usize, i: usize) -> Result<RuleOutcome, RuleError> {
    let c = &ap.clauses[k];
    let l = &c.literals[i];
    let at = format!("clause {} literal {}", k + 1, i + 1);
    let mut checks = vec_of([
        Check::new("not_cut", at.clone(), !c.clause.body[i].is_cut()),
        Check::new("test_literal", at.clone(), l.test_literal()),
        Check::new("fully_deterministic", at, l.fully_deterministic()),
    ]);
    for z in 0..k {
        if ap.clauses[z].exclusion().is_some() {
            checks.push(Check::new("cut_surely_executed", format!("{} on its refined inputs", clause_at(z)), true));
        }
    }
    conclude(5, ap, Edit::RemoveLiteral { clause: k, literal: i }, checks)
}

fn vec_of<const N: usize>(cs: [Check; N]) -> Vec<Check> {
    cs.into_iter().collect()
}
