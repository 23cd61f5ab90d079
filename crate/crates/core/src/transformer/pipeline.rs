//! Steps A to H: the specialization strategy.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::rules::*;
use super::{is_test_candidate, max_var, procedure_text, Check, Edit, TraceStep, TransformationTrace};
use crate::analyzer::{analyze_procedure, analyze_program, reaches, AnnotatedProcedure, Rejection, SpecTable, Verdict};
use crate::ast::{Literal, PredId, Procedure, Program};
use crate::normal_form::{normalize_program, NormalizeError};
use crate::spec_lang::FormalSpec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error("no procedure {0}")]
    NoProcedure(PredId),
    #[error("{pred} does not meet its spec: {}", show_reasons(.reasons))]
    Rejected { pred: PredId, reasons: Vec<Rejection> },
    #[error("cut {cut} of clause {clause} is not green: answers differ for {witness}")]
    RedCut { clause: usize, cut: usize, witness: String },
}

fn show_reasons(rs: &[Rejection]) -> String {
    let v: Vec<String> = rs.iter().map(|r| r.to_string()).collect();
    v.join("; ")
}

/// Output of [`specialize`].
#[derive(Debug, Clone)]
pub struct Specialization {
    pub pred: PredId,
    pub spec_index: usize,
    /// Step A output.
    pub normalized: Procedure,
    /// Before Step H.
    pub final_normalized: Procedure,
    /// The specialized procedure.
    pub output: Procedure,
    /// Auxiliary procedures introduced by normalization, still called by
    /// the output.
    pub aux: Vec<Procedure>,
    pub trace: TransformationTrace,
    /// Annotations of `final_normalized`.
    pub annotated: AnnotatedProcedure,
    pub warnings: Vec<String>,
}

impl Specialization {
    /// `program` with the target procedure replaced by the output.
    pub fn output_program(&self, program: &Program) -> Program {
        let mut p = program.clone();
        p.insert(self.output.clone());
        for a in &self.aux {
            if p.get(&a.pred).is_none() {
                p.procedures.push(super::step_semantic_denormalize(a));
            }
        }
        p
    }
}

struct Run<'a> {
    program: &'a Program,
    table: &'a SpecTable,
    spec_index: usize,
    cur: Procedure,
    ap: AnnotatedProcedure,
    trace: TransformationTrace,
}

impl<'a> Run<'a> {
    fn annotate(&self, p: &Procedure) -> AnnotatedProcedure {
        analyze_procedure(self.program, p, self.table, self.spec_index)
    }

    fn record(&mut self, step: char, rule: Option<u8>, edit: Option<Edit>, checks: Vec<Check>, note: String) {
        let before = procedure_text(&self.cur);
        if let Some(e) = &edit {
            self.cur = e.apply(&self.cur);
            self.ap = self.annotate(&self.cur);
        }
        let after = procedure_text(&self.cur);
        self.trace.steps.push(TraceStep {
            step,
            rule,
            edit,
            checks,
            note,
            before,
            after,
        });
    }

    fn apply(&mut self, step: char, rule: u8, r: Result<RuleOutcome, RuleError>) -> bool {
        match r {
            Ok(o) => {
                self.record(step, Some(rule), Some(o.edit), o.checks, String::new());
                true
            }
            Err(e) => {
                let note = format!("condition violated: {}", e.failed);
                self.record(step, Some(rule), None, e.checks, note);
                false
            }
        }
    }

    fn last(&self) -> usize {
        self.cur.clauses.len() - 1
    }

    /// A literal that Rule 5 may later remove.
    fn removable_candidate(&self, k: usize, i: usize) -> bool {
        let l = &self.cur.clauses[k].body[i];
        is_test_candidate(l)
            || (l.is_unification() && {
                let s = &self.ap.clauses[k].literals[i];
                s.test_literal() && !s.surely_fails()
            })
    }

    fn step_c(&mut self) {
        if self.cur.clauses.len() < 2 {
            return;
        }
        let cand = |r: &Self, k: usize| (0..r.cur.clauses[k].body.len()).any(|i| r.removable_candidate(k, i));
        let last = self.last();
        if cand(self, last) {
            return;
        }
        if let Some(k) = (0..last).find(|&k| cand(self, k)) {
            let r = rule_reorder_clauses(&self.ap, k, last);
            self.apply('C', 1, r);
        }
    }

    fn step_d(&mut self) {
        for k in 0..self.last() {
            let mut i = 0;
            while i < self.cur.clauses[k].body.len() {
                if let Some(edit) = self.decomposition(k, i) {
                    let note = format!("split may-fail unification {}", crate::ast::print_literal(&self.cur.clauses[k].body[i]));
                    self.record('D', None, Some(edit), Vec::new(), note);
                }
                i += 1;
            }
        }
    }

    fn decomposition(&self, k: usize, i: usize) -> Option<Edit> {
        let c = &self.cur.clauses[k];
        let Literal::UnifyVarFunctor(_, _, args) = &c.body[i] else { return None };
        let s = &self.ap.clauses[k].literals[i];
        if args.is_empty() || s.surely_succeeds() || s.surely_fails() {
            return None;
        }
        let mut seen: Vec<String> = Vec::new();
        for a in &c.args {
            a.collect_vars(&mut seen);
        }
        for l in &c.body[..i] {
            l.to_term().collect_vars(&mut seen);
        }
        let mut next = max_var(c);
        let fresh: Vec<Option<String>> = args
            .iter()
            .map(|a| {
                if seen.contains(a) {
                    next += 1;
                    Some(format!("X{next}"))
                } else {
                    None
                }
            })
            .collect();
        fresh.iter().any(Option::is_some).then_some(Edit::Decompose { clause: k, literal: i, fresh })
    }

    fn step_e(&mut self) {
        for k in 0..self.last() {
            if self.cur.clauses[k].has_cut() {
                continue;
            }
            let len = self.cur.clauses[k].body.len();
            let mut last_err = None;
            let mut done = false;
            for i in 0..=len {
                match rule_insert_cut(&self.ap, k, i) {
                    Ok(o) => {
                        self.record('E', Some(2), Some(o.edit), o.checks, String::new());
                        done = true;
                        break;
                    }
                    Err(e) => last_err = Some(e),
                }
            }
            if !done {
                if let Some(e) = last_err {
                    let note = format!("no prefix of clause {} qualifies: {}", k + 1, e.failed);
                    self.record('E', Some(2), None, e.checks, note);
                }
            }
        }
        let mut k = 0;
        while k < self.last() {
            if self.cur.clauses[k].has_cut() && self.ap.clauses[k].cut_surely_executed() {
                let r = rule_eliminate_dead_code(&self.ap, k);
                self.apply('E', 3, r);
            }
            k += 1;
        }
    }

    fn step_f(&mut self) {
        for k in 0..self.cur.clauses.len() {
            loop {
                let Some(c) = self.cur.clauses[k].body.iter().position(|l| l.is_cut()) else { break };
                if c + 1 >= self.cur.clauses[k].body.len() {
                    break;
                }
                match rule_move_cut_backwards(&self.ap, k) {
                    Ok(o) => {
                        let trial = o.edit.apply(&self.cur);
                        let ap = self.annotate(&trial);
                        if let Some(r) = blocking(&ap.verdict) {
                            let note = format!("declined: after the move {r}");
                            self.record('F', Some(4), None, o.checks, note);
                            break;
                        }
                        self.record('F', Some(4), Some(o.edit), o.checks, String::new());
                    }
                    Err(e) => {
                        let note = format!("the cut cannot be moved: {}", e.failed);
                        self.record('F', Some(4), None, e.checks, note);
                        break;
                    }
                }
            }
        }
    }

    fn step_g(&mut self) {
        let refined: Vec<usize> = (0..self.cur.clauses.len())
            .filter(|&z| self.ap.clauses[z].exclusion().is_some())
            .collect();
        if !refined.is_empty() && refined[0] < self.last() {
            let names: Vec<String> = refined.iter().map(|z| format!("{}", z + 1)).collect();
            let note = format!("inputs of later clauses narrowed by the cuts of clauses {}", names.join(", "));
            self.record('G', None, None, Vec::new(), note);
        }
        for k in 0..self.cur.clauses.len() {
            let mut i = 0;
            while i < self.cur.clauses[k].body.len() {
                if self.cur.clauses[k].body[i].is_cut() || !self.removable_candidate(k, i) {
                    i += 1;
                    continue;
                }
                let r = rule_remove_useless_literal(&self.ap, k, i);
                let explicit = is_test_candidate(&self.cur.clauses[k].body[i]);
                match r {
                    Ok(_) => {
                        self.apply('G', 5, r);
                    }
                    Err(_) if !explicit => i += 1,
                    Err(_) => {
                        self.apply('G', 5, r);
                        i += 1;
                    }
                }
            }
        }
    }
}

fn blocking(v: &Verdict) -> Option<String> {
    match v {
        Verdict::Accepted => None,
        Verdict::Rejected(rs) => rs
            .iter()
            .find(|r| matches!(r.component.as_str(), "termination" | "call" | "builtin" | "beta_out" | "U"))
            .map(|r| r.to_string()),
    }
}

/// Specializes the procedure of `specs[spec_index]` for the inputs that
/// spec describes. The other specs are used for the called procedures.
pub fn specialize(program: &Program, specs: &[FormalSpec], spec_index: usize) -> Result<Specialization, TransformError> {
    let pred = specs[spec_index].pred();
    let source = program.get(&pred).ok_or_else(|| TransformError::NoProcedure(pred.clone()))?;
    let norm = normalize_program(program)?;
    let analysis = analyze_program(&norm, specs);
    let mut reasons = Vec::new();
    for ap in &analysis.procedures {
        let relevant = (ap.procedure.pred == pred && ap.spec_index == spec_index)
            || (ap.procedure.pred != pred && reaches(&norm, &pred, &ap.procedure.pred));
        if let (true, Verdict::Rejected(rs)) = (relevant, &ap.verdict) {
            for r in rs {
                reasons.push(Rejection {
                    component: r.component.clone(),
                    detail: format!("{}: {}", ap.procedure.pred, r.detail),
                });
            }
        }
    }
    if !reasons.is_empty() {
        return Err(TransformError::Rejected { pred, reasons });
    }
    let start = norm.get(&pred).unwrap().clone();
    let table = &analysis.table;
    let ap = analyze_procedure(&norm, &start, table, spec_index);
    let mut run = Run {
        program: &norm,
        table,
        spec_index,
        cur: start.clone(),
        ap,
        trace: TransformationTrace::default(),
    };
    run.trace.steps.push(TraceStep {
        step: 'A',
        rule: None,
        edit: None,
        checks: Vec::new(),
        note: String::from("syntactic normalization"),
        before: procedure_text(source),
        after: procedure_text(&start),
    });
    let strengthened = if table.get(spec_index).strengthened { ", sol >= 1 established" } else { "" };
    run.record('B', None, None, Vec::new(), format!("annotated: spec accepted{strengthened}"));
    run.step_c();
    run.step_d();
    run.step_e();
    run.step_f();
    run.step_g();
    let final_normalized = run.cur.clone();
    let annotated = run.ap.clone();
    run.record('H', None, Some(Edit::Denormalize), Vec::new(), String::from("semantic denormalization"));
    let prefix = format!("{}__", pred.name);
    let output = run.cur.clone();
    let called = output.calls();
    let aux = norm
        .procedures
        .iter()
        .filter(|p| p.pred.name.starts_with(&prefix) && called.iter().any(|c| reaches(&norm, c, &p.pred)))
        .cloned()
        .collect();
    Ok(Specialization {
        pred,
        spec_index,
        normalized: start,
        final_normalized,
        output,
        aux,
        trace: run.trace,
        warnings: annotated.warnings.clone(),
        annotated,
    })
}

/// Step D on its own: splits may-fail structure unifications of every
/// clause but the last.
pub fn step_semantic_normalize(program: &Program, ap: &AnnotatedProcedure, table: &SpecTable) -> Procedure {
    let mut run = Run {
        program,
        table,
        spec_index: ap.spec_index,
        cur: ap.procedure.clone(),
        ap: ap.clone(),
        trace: TransformationTrace::default(),
    };
    run.step_d();
    run.cur
}

/// How cuts already present in the source are treated before
/// specialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutMode {
    Off,
    /// Every cut is taken to be green and removed.
    AssumeGreen,
    /// A cut is removed when `verify` finds no difference without it.
    Verified,
}

/// Removes source cuts. In [`CutMode::Verified`], `verify(with, without)`
/// compares the two procedures and returns a witness input when their
/// answers differ.
pub fn strip_green_cuts(
    p: &Procedure,
    mode: CutMode,
    verify: &mut dyn FnMut(&Procedure, &Procedure) -> Result<(), String>,
) -> Result<Procedure, TransformError> {
    match mode {
        CutMode::Off => Ok(p.clone()),
        CutMode::AssumeGreen => {
            let mut out = p.clone();
            for c in &mut out.clauses {
                c.body.retain(|l| !l.is_cut());
            }
            Ok(out)
        }
        CutMode::Verified => {
            let mut cur = p.clone();
            for k in 0..p.clauses.len() {
                let mut n = 0;
                while let Some(i) = cur.clauses[k].body.iter().position(|l| l.is_cut()) {
                    n += 1;
                    let mut without = cur.clone();
                    without.clauses[k].body.remove(i);
                    verify(&cur, &without).map_err(|witness| TransformError::RedCut {
                        clause: k + 1,
                        cut: n,
                        witness,
                    })?;
                    cur = without;
                }
            }
            Ok(cur)
        }
    }
}
