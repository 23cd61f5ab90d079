//! Answer-preserving transformations of annotated procedures and the
//! specialization pipeline built from them.

mod denormalize;
mod pipeline;
mod rules;
#[cfg(test)]
mod tests;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{print_clause, Clause, Literal, Procedure};

pub use denormalize::{denormalize_clause, step_semantic_denormalize};
pub use pipeline::{specialize, step_semantic_normalize, strip_green_cuts, CutMode, Specialization, TransformError};
pub use rules::{
    rule_eliminate_dead_code, rule_insert_cut, rule_move_cut_backwards, rule_remove_useless_literal,
    rule_reorder_clauses, RuleError, RuleOutcome,
};

/// A condition evaluated to justify (or decline) a rule application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    /// Predicate name, e.g. `deterministic` or `exclusive`.
    pub name: String,
    /// Operands, e.g. `clause 1 point 2, clause 2`.
    pub at: String,
    pub holds: bool,
}

impl Check {
    pub fn new(name: &str, at: String, holds: bool) -> Check {
        Check {
            name: name.to_string(),
            at,
            holds,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}) = {}", self.name, self.at, self.holds)
    }
}

/// A syntactic edit of a procedure. Positions are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Edit {
    SwapClauses(usize, usize),
    /// Replaces the non-fresh arguments of `X = f(..)` by the new variables
    /// and adds `New = Old` right after it.
    Decompose { clause: usize, literal: usize, fresh: Vec<Option<String>> },
    /// Inserts `!` before body position `at`.
    InsertCut { clause: usize, at: usize },
    RemoveClausesAfter(usize),
    /// Swaps the cut at `cut` with the literal to its right.
    MoveCutRight { clause: usize, cut: usize },
    RemoveLiteral { clause: usize, literal: usize },
    Denormalize,
}

impl Edit {
    pub fn apply(&self, p: &Procedure) -> Procedure {
        let mut out = p.clone();
        match self {
            Edit::SwapClauses(i, j) => out.clauses.swap(*i, *j),
            Edit::Decompose { clause, literal, fresh } => {
                let body = &mut out.clauses[*clause].body;
                if let Literal::UnifyVarFunctor(x, f, args) = body[*literal].clone() {
                    let mut new_args = args.clone();
                    let mut extra = Vec::new();
                    for (k, nv) in fresh.iter().enumerate() {
                        if let Some(nv) = nv {
                            new_args[k] = nv.clone();
                            extra.push(Literal::UnifyVarVar(nv.clone(), args[k].clone()));
                        }
                    }
                    body[*literal] = Literal::UnifyVarFunctor(x, f, new_args);
                    for (n, l) in extra.into_iter().enumerate() {
                        body.insert(literal + 1 + n, l);
                    }
                }
            }
            Edit::InsertCut { clause, at } => out.clauses[*clause].body.insert(*at, Literal::Cut),
            Edit::RemoveClausesAfter(k) => out.clauses.truncate(k + 1),
            Edit::MoveCutRight { clause, cut } => out.clauses[*clause].body.swap(*cut, cut + 1),
            Edit::RemoveLiteral { clause, literal } => {
                out.clauses[*clause].body.remove(*literal);
            }
            Edit::Denormalize => out = step_semantic_denormalize(p),
        }
        out
    }
}

impl fmt::Display for Edit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Edit::SwapClauses(i, j) => write!(f, "swap clauses {} and {}", i + 1, j + 1),
            Edit::Decompose { clause, literal, .. } => {
                write!(f, "decompose literal {} of clause {}", literal + 1, clause + 1)
            }
            Edit::InsertCut { clause, at } => write!(f, "insert cut after literal {} of clause {}", at, clause + 1),
            Edit::RemoveClausesAfter(k) => write!(f, "remove clauses after clause {}", k + 1),
            Edit::MoveCutRight { clause, cut } => {
                write!(f, "move cut of clause {} past literal {}", clause + 1, cut + 2)
            }
            Edit::RemoveLiteral { clause, literal } => {
                write!(f, "remove literal {} of clause {}", literal + 1, clause + 1)
            }
            Edit::Denormalize => f.write_str("fold unifications into heads"),
        }
    }
}

/// One entry of a [`TransformationTrace`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    /// Pipeline step, `A` to `H`.
    pub step: char,
    /// Transformation rule 1 to 5, when the step is a rule application.
    pub rule: Option<u8>,
    /// The edit performed; `None` when declined or informational.
    pub edit: Option<Edit>,
    pub checks: Vec<Check>,
    pub note: String,
    /// Procedure text before and after the step.
    pub before: String,
    pub after: String,
}

impl TraceStep {
    pub fn applied(&self) -> bool {
        self.edit.is_some()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransformationTrace {
    pub steps: Vec<TraceStep>,
}

impl TransformationTrace {
    /// Re-applies the recorded edits to `normalized`, the Step A output.
    pub fn replay(&self, normalized: &Procedure) -> Procedure {
        self.steps
            .iter()
            .filter_map(|s| s.edit.as_ref())
            .fold(normalized.clone(), |p, e| e.apply(&p))
    }

    /// Steps of one pipeline stage.
    pub fn of_step(&self, step: char) -> impl Iterator<Item = &TraceStep> {
        self.steps.iter().filter(move |s| s.step == step)
    }

    /// Procedure text after the last step of `step` or earlier.
    pub fn text_after(&self, step: char) -> Option<&str> {
        self.steps.iter().rev().find(|s| s.step <= step).map(|s| s.after.as_str())
    }
}

impl fmt::Display for TransformationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            let rule = s.rule.map(|r| format!(" rule {r}")).unwrap_or_default();
            match &s.edit {
                Some(e) => writeln!(f, "[{}]{rule} applied: {e}", s.step)?,
                None => writeln!(f, "[{}]{rule} declined", s.step)?,
            }
            if !s.note.is_empty() {
                writeln!(f, "  {}", s.note)?;
            }
            for c in &s.checks {
                writeln!(f, "  check {c}")?;
            }
            if s.edit.is_some() || s.rule.is_none() {
                writeln!(f, "  after:")?;
                for line in s.after.lines() {
                    writeln!(f, "    {line}")?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn procedure_text(p: &Procedure) -> String {
    let mut s = String::new();
    for c in &p.clauses {
        s.push_str(&print_clause(c));
        s.push('\n');
    }
    s
}

/// Index of the variable `X<k>` in a normalized clause.
pub(crate) fn var_number(v: &str) -> Option<usize> {
    v.strip_prefix('X').and_then(|d| d.parse().ok())
}

pub(crate) fn max_var(c: &Clause) -> usize {
    c.vars().iter().filter_map(|v| var_number(v)).max().unwrap_or(0)
}

pub(crate) fn is_test_candidate(l: &Literal) -> bool {
    match l {
        Literal::Not(_) => true,
        Literal::Call(n, a) => crate::ast::is_test_builtin(n, a.len()),
        _ => false,
    }
}
