//! Verification of procedures against their specifications by abstract
//! execution, producing per-clause annotations for the transformer.

mod clause;
mod procedure;
#[cfg(test)]
mod tests;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::abstract_domain::{AbsSubst, SizeVar};
use crate::abstract_sequence::AbstractSequence;
use crate::ast::{Clause, PredId, Procedure, Program};
use crate::linear::{q, Constraint, LinExpr};
use crate::spec_lang::{arg_var, spec_to_abstract_sequence, FormalSpec};

pub use procedure::{analyze_procedure, exclusive_pair};

/// A specification together with its abstract sequence.
#[derive(Debug, Clone)]
pub struct SpecEntry {
    pub spec: FormalSpec,
    pub seq: AbstractSequence,
    /// `sol >= 1` was established by induction and added to `seq`.
    pub strengthened: bool,
}

/// All specifications of a program, in declaration order.
#[derive(Debug, Clone, Default)]
pub struct SpecTable {
    entries: Vec<SpecEntry>,
}

impl SpecTable {
    pub fn new(specs: &[FormalSpec]) -> Self {
        SpecTable {
            entries: specs
                .iter()
                .map(|s| SpecEntry {
                    spec: s.clone(),
                    seq: spec_to_abstract_sequence(s),
                    strengthened: false,
                })
                .collect(),
        }
    }

    pub fn entries(&self) -> &[SpecEntry] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &SpecEntry {
        &self.entries[i]
    }

    /// Indices of the specs of `pred`.
    pub fn for_pred<'a>(&'a self, pred: &'a PredId) -> impl Iterator<Item = usize> + 'a {
        (0..self.entries.len()).filter(move |&i| &self.entries[i].spec.pred() == pred)
    }

    /// First spec of `pred` whose input description covers `call`, a
    /// description over `X1..Xn`.
    pub fn lookup(&self, pred: &PredId, call: &AbsSubst) -> Option<usize> {
        let call = call.forget_size_vars(|_| false);
        self.for_pred(pred)
            .find(|&i| call.leq(&self.entries[i].seq.beta_in.forget_size_vars(|_| false)))
    }

    /// Adds `sol >= 1` to spec `i`.
    pub fn strengthen(&mut self, i: usize) {
        let e = &mut self.entries[i];
        e.seq.e_sol.add(Constraint::ge(LinExpr::var(SizeVar::Sol), LinExpr::constant(q(1))));
        e.strengthened = true;
    }
}

/// Why a procedure does not meet its spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    /// `beta_in`, `beta_out`, `U`, `E_sol`, `E_ref_out`, `call`,
    /// `termination` or `builtin`.
    pub component: String,
    pub detail: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.component, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Rejected(Vec<Rejection>),
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

/// A clause with the abstract sequences of its prefixes.
#[derive(Debug, Clone)]
pub struct AnnotatedClause {
    pub clause: Clause,
    /// Clause input over the head variables, after exclusions.
    pub entry: AbsSubst,
    /// `points[i]` describes the execution of the first `i` literals, with
    /// inputs at clause entry.
    pub points: Vec<AbstractSequence>,
    /// `literals[i]` describes literal `i` alone, with the state before it
    /// as input.
    pub literals: Vec<AbstractSequence>,
    /// `exact[i]`: `points[i].beta_ref` is exactly the set of inputs for
    /// which the first `i` literals succeed.
    pub exact: Vec<bool>,
    /// The whole clause over the head variables.
    pub result: AbstractSequence,
    /// Every input is excluded by a cut of an earlier clause.
    pub unreachable: bool,
}

impl AnnotatedClause {
    pub fn first_cut(&self) -> Option<usize> {
        self.clause.body.iter().position(|l| l.is_cut())
    }

    /// The first cut is reached for every input.
    pub fn cut_surely_executed(&self) -> bool {
        match self.first_cut() {
            Some(c) => self.points[c].surely_succeeds(),
            None => false,
        }
    }

    /// Inputs for which the first cut is certainly reached.
    pub fn exclusion(&self) -> Option<AbsSubst> {
        let c = self.first_cut()?;
        if self.unreachable || !self.exact[c] || self.points[c].beta_ref.is_bottom() {
            return None;
        }
        let head: Vec<String> = (0..self.clause.args.len()).map(arg_var).collect();
        Some(self.points[c].beta_ref.project(&head))
    }

    /// Every input in the clause's `beta_ref` has an answer.
    pub fn succeeds_on_ref(&self) -> bool {
        !self.unreachable && self.exact.last().copied().unwrap_or(true) && !self.result.beta_ref.is_bottom()
    }

    pub fn dump(&self) -> String {
        use alloc::format;
        let mut s = format!("clause {}\n", crate::ast::print_clause(&self.clause));
        if self.unreachable {
            s.push_str("  unreachable\n");
            return s;
        }
        for (i, p) in self.points.iter().enumerate() {
            let lit = if i == 0 {
                String::from("entry")
            } else {
                crate::ast::print_literal(&self.clause.body[i - 1])
            };
            s.push_str(&format!("-- after {lit} (exact={})\n", self.exact[i]));
            s.push_str(&p.dump());
        }
        s
    }
}

/// A procedure analysed under one of its specs.
#[derive(Debug, Clone)]
pub struct AnnotatedProcedure {
    pub procedure: Procedure,
    pub spec_index: usize,
    pub clauses: Vec<AnnotatedClause>,
    pub result: AbstractSequence,
    pub verdict: Verdict,
    pub warnings: Vec<String>,
}

impl AnnotatedProcedure {
    pub fn dump(&self) -> String {
        use alloc::format;
        let mut s = format!("procedure {} spec #{}\n", self.procedure.pred, self.spec_index);
        for c in &self.clauses {
            s.push_str(&c.dump());
        }
        s.push_str("-- procedure\n");
        s.push_str(&self.result.dump());
        match &self.verdict {
            Verdict::Accepted => s.push_str("verdict: accepted\n"),
            Verdict::Rejected(rs) => {
                for r in rs {
                    s.push_str(&format!("verdict: rejected ({r})\n"));
                }
            }
        }
        for w in &self.warnings {
            s.push_str(&format!("warning: {w}\n"));
        }
        s
    }
}

/// Result of analysing a whole program.
#[derive(Debug, Clone)]
pub struct Analysis {
    /// The specs, with established sure-success facts added.
    pub table: SpecTable,
    pub procedures: Vec<AnnotatedProcedure>,
}

impl Analysis {
    pub fn all_accepted(&self) -> bool {
        self.procedures.iter().all(|p| p.verdict.accepted())
    }

    pub fn get(&self, pred: &PredId) -> impl Iterator<Item = &AnnotatedProcedure> {
        let pred = pred.clone();
        self.procedures.iter().filter(move |p| p.procedure.pred == pred)
    }
}

/// Analyses every procedure that has a spec, under each of its specs.
///
/// Sure success is then established inductively where possible: a spec is
/// strengthened with `sol >= 1` when the procedure still meets it under
/// the assumption that recursive calls do.
pub fn analyze_program(program: &Program, specs: &[FormalSpec]) -> Analysis {
    let mut table = SpecTable::new(specs);
    let targets: Vec<(usize, &Procedure)> = (0..table.entries().len())
        .filter_map(|i| program.get(&table.get(i).spec.pred()).map(|p| (i, p)))
        .collect();
    let mut changed = true;
    let mut rounds = 0;
    while changed && rounds < 8 {
        changed = false;
        rounds += 1;
        for &(i, p) in &targets {
            if table.get(i).strengthened || !self_recursive_only(program, &p.pred) {
                continue;
            }
            if !analyze_procedure(program, p, &table, i).verdict.accepted() {
                continue;
            }
            let mut trial = table.clone();
            trial.strengthen(i);
            if analyze_procedure(program, p, &trial, i).verdict.accepted() {
                table = trial;
                changed = true;
            }
        }
    }
    let procedures = targets
        .iter()
        .map(|&(i, p)| analyze_procedure(program, p, &table, i))
        .collect();
    Analysis { table, procedures }
}

/// `pred` is not reachable from any procedure it calls other than itself.
pub(crate) fn self_recursive_only(program: &Program, pred: &PredId) -> bool {
    let Some(p) = program.get(pred) else { return false };
    p.calls()
        .iter()
        .filter(|c| *c != pred)
        .all(|c| !reaches(program, c, pred))
}

pub(crate) fn reaches(program: &Program, from: &PredId, to: &PredId) -> bool {
    let mut seen = alloc::collections::BTreeSet::new();
    let mut stack = alloc::vec![from.clone()];
    while let Some(p) = stack.pop() {
        if &p == to {
            return true;
        }
        if !seen.insert(p.clone()) {
            continue;
        }
        if let Some(pr) = program.get(&p) {
            stack.extend(pr.calls());
        }
    }
    false
}
