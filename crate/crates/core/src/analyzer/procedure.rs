//! Combination of clause results into the sequence of a procedure.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::clause::{head_vars, ClauseRun, Ctx, Findings};
use super::{AnnotatedClause, AnnotatedProcedure, Rejection, SpecTable, Verdict};
use crate::abstract_domain::{AbsSubst, LinSys, Norm, SizeVar};
use crate::abstract_sequence::AbstractSequence;
use crate::ast::{Functor, Procedure, Program};
use crate::linear::{q, Constraint, LinExpr};
use crate::spec_lang::arg_var;

type Lin = LinExpr<SizeVar>;

fn sol() -> Lin {
    Lin::var(SizeVar::Sol)
}

/// Analyses `proc_` under spec `spec_index` of `table`.
pub fn analyze_procedure(program: &Program, proc_: &Procedure, table: &SpecTable, spec_index: usize) -> AnnotatedProcedure {
    let entry = table.get(spec_index);
    let ctx = Ctx {
        program,
        table,
        pred: proc_.pred.clone(),
        spec: Some(entry),
        exclusions: Vec::new(),
        depth: 0,
    };
    let n = proc_.pred.arity;
    let norms: Vec<Option<Norm>> = (0..n).map(|k| Some(entry.seq.beta_out.norm_of_var(&arg_var(k)))).collect();
    let (clauses, mut result, findings) = combine(&ctx, proc_, &entry.seq.beta_in, &norms);
    if result.coverage_failure(&entry.seq) == Some("E_sol") {
        if let Some(e) = split_sol(&ctx, proc_, &entry.seq.beta_in, &norms) {
            let mut alt = result.clone();
            alt.e_sol = e.conjoin(&result.e_sol).without_redundancy();
            result = alt;
        }
    }
    let mut problems = findings.problems;
    if let Some(component) = result.coverage_failure(&entry.seq) {
        problems.push(Rejection {
            component: component.into(),
            detail: coverage_detail(component, &result, &entry.seq, &entry.spec),
        });
    }
    let verdict = if problems.is_empty() {
        Verdict::Accepted
    } else {
        Verdict::Rejected(problems)
    };
    AnnotatedProcedure {
        procedure: proc_.clone(),
        spec_index,
        clauses,
        result,
        verdict,
        warnings: findings.warnings,
    }
}

fn coverage_detail(
    component: &str,
    got: &AbstractSequence,
    want: &AbstractSequence,
    spec: &crate::spec_lang::FormalSpec,
) -> String {
    let show = |s: &LinSys| -> String {
        let v: Vec<String> = s.constraints().iter().map(|c| spec.show_constraint(c)).collect();
        v.join(", ")
    };
    match component {
        "E_sol" => {
            let sys = got.sol_system().project(|v| matches!(v, SizeVar::Sol | SizeVar::In(_)));
            format!("derived {{{}}} does not imply {{{}}}", show(&sys), show(&want.e_sol))
        }
        "E_ref_out" => format!(
            "derived {{{}}} does not imply {{{}}}",
            show(&got.e_ref_out),
            show(&want.e_ref_out)
        ),
        "beta_out" => String::from("computed answers are not described by out(...)"),
        "U" => String::from("an argument declared ground may be instantiated"),
        _ => format!("{component} not covered"),
    }
}

/// Runs every clause on `beta_in` and combines the results.
pub(crate) fn combine(
    ctx: &Ctx<'_>,
    proc_: &Procedure,
    beta_in: &AbsSubst,
    out_norms: &[Option<Norm>],
) -> (Vec<AnnotatedClause>, AbstractSequence, Findings) {
    let n = proc_.pred.arity;
    let mut findings = Findings::default();
    let mut clauses: Vec<AnnotatedClause> = Vec::new();
    let mut exclusions: Vec<AbsSubst> = ctx.exclusions.clone();
    for c in &proc_.clauses {
        let sub = Ctx {
            program: ctx.program,
            table: ctx.table,
            pred: ctx.pred.clone(),
            spec: ctx.spec,
            exclusions: exclusions.clone(),
            depth: ctx.depth,
        };
        let mut run = ClauseRun::new(&sub, n);
        let ac = run.run(c, beta_in, out_norms);
        findings.problems.extend(run.findings.problems);
        for w in run.findings.warnings {
            if !findings.warnings.contains(&w) {
                findings.warnings.push(w);
            }
        }
        if let Some(e) = ac.exclusion() {
            exclusions.push(e);
        }
        clauses.push(ac);
    }
    let result = procedure_sequence(beta_in, &clauses, n);
    (clauses, result, findings)
}

/// Clauses `k < z` never both contribute answers for one input.
pub fn exclusive_pair(clauses: &[AnnotatedClause], k: usize, z: usize) -> bool {
    let (a, b) = (&clauses[k], &clauses[z]);
    a.unreachable || b.unreachable || a.clause.has_cut() || a.result.exclusive(&b.result)
}

fn live(c: &AnnotatedClause) -> bool {
    !c.unreachable && !c.result.beta_ref.is_bottom() && !c.result.surely_fails()
}

fn procedure_sequence(beta_in: &AbsSubst, clauses: &[AnnotatedClause], n: usize) -> AbstractSequence {
    let head = head_vars(n);
    let alive: Vec<usize> = (0..clauses.len()).filter(|&k| live(&clauses[k])).collect();
    if alive.is_empty() {
        return AbstractSequence::failure(beta_in);
    }
    let fold = |f: &dyn Fn(&AnnotatedClause) -> AbsSubst| -> AbsSubst {
        let mut it = alive.iter().map(|&k| f(&clauses[k]));
        let first = it.next().unwrap();
        it.fold(first, |a, b| a.lub(&b))
    };
    let beta_ref = fold(&|c| c.result.beta_ref.clone());
    let beta_out = fold(&|c| c.result.beta_out.clone());
    let mut untouched: alloc::collections::BTreeSet<String> = head.iter().cloned().collect();
    for &k in &alive {
        untouched.retain(|v| clauses[k].result.untouched.contains(v));
    }
    let mut e_ref_out = clauses[alive[0]].result.e_ref_out.clone();
    for &k in &alive[1..] {
        e_ref_out = e_ref_out.hull(&clauses[k].result.e_ref_out);
    }
    let sure = surely_succeeds(beta_in, clauses, &head);
    let exclusive = alive
        .iter()
        .enumerate()
        .all(|(x, &k)| alive[x + 1..].iter().all(|&z| exclusive_pair(clauses, k, z)));
    let in_only = |v: &SizeVar| matches!(v, SizeVar::Sol | SizeVar::In(_));
    let mut e_sol = if exclusive {
        let mut h = LinSys::from_constraints([Constraint::eq(sol(), Lin::zero())]);
        for &k in &alive {
            let s = clauses[k].result.sol_system().project(in_only);
            h = h.hull(&s);
        }
        h
    } else {
        let mut total = Some(Lin::zero());
        for &k in &alive {
            let r = &clauses[k].result;
            let sys = r.sol_system();
            let bounds = sys.upper_bounds(&SizeVar::Sol, |v| matches!(v, SizeVar::In(_)));
            let valid = |u: &Lin| beta_in.constraints().entails(&Constraint::ge(u.clone(), Lin::zero()));
            let pick = bounds
                .iter()
                .find(|u| u.is_constant())
                .or_else(|| bounds.iter().find(|u| valid(u)))
                .cloned();
            total = match (total, pick) {
                (Some(t), Some(u)) => Some(t.plus(&u)),
                _ => None,
            };
        }
        let mut e = LinSys::new();
        if let Some(t) = total {
            e.add(Constraint::le(sol(), t));
        }
        e
    };
    e_sol.add(Constraint::ge(sol(), Lin::zero()));
    if sure {
        e_sol.add(Constraint::ge(sol(), Lin::constant(q(1))));
    }
    let (beta_ref, beta_fails) = if sure {
        (beta_in.clone(), Vec::new())
    } else {
        (beta_ref, procedure_fails(clauses, &alive))
    };
    AbstractSequence {
        beta_in: beta_in.clone(),
        beta_ref,
        beta_fails,
        untouched,
        beta_out,
        e_ref_out: e_ref_out.without_redundancy(),
        e_sol: e_sol.without_redundancy(),
    }
}

/// Inputs on which every live clause is known to fail.
fn procedure_fails(clauses: &[AnnotatedClause], alive: &[usize]) -> Vec<AbsSubst> {
    let mut acc: Vec<Option<AbsSubst>> = vec![None];
    for &k in alive {
        let fs = &clauses[k].result.beta_fails;
        if fs.is_empty() {
            return Vec::new();
        }
        let mut next = Vec::new();
        for a in &acc {
            for f in fs {
                let g = match a {
                    None => f.clone(),
                    Some(a) => a.glb(f),
                };
                if !g.is_bottom() {
                    next.push(Some(g));
                }
            }
        }
        next.truncate(16);
        acc = next;
    }
    let mut seq = AbstractSequence::identity(&AbsSubst::new());
    seq.beta_fails.clear();
    for f in acc.into_iter().flatten() {
        seq.add_fail(f);
    }
    seq.beta_fails
}

/// Every input has at least one answer: the input space splits into cases
/// each covered by the success set of a clause that is reached on it.
fn surely_succeeds(beta_in: &AbsSubst, clauses: &[AnnotatedClause], head: &[String]) -> bool {
    for c in clauses {
        if let Some(k) = c.first_cut() {
            if !c.unreachable && !c.literals[k + 1..].iter().all(|l| l.surely_succeeds()) {
                return false;
            }
        }
    }
    let winners: Vec<&AnnotatedClause> = clauses.iter().filter(|c| c.succeeds_on_ref()).collect();
    if winners.is_empty() {
        return false;
    }
    let split: Vec<&String> = head
        .iter()
        .filter(|v| {
            let nd = beta_in.var_node(v).unwrap();
            nd.frame.is_none()
                && nd.ty.is_list()
                && nd.mode.is_nonvar()
                && winners
                    .iter()
                    .any(|c| c.result.beta_ref.var_node(v).map(|m| m.frame.is_some()).unwrap_or(false))
        })
        .take(2)
        .collect();
    list_cases(beta_in, head, &split)
        .iter()
        .filter(|c| !c.is_bottom())
        .all(|c| winners.iter().any(|w| c.leq(&w.result.beta_ref)))
}

/// `beta_in` split by the principal functor (`[]` or `[_|_]`) of `vars`.
fn list_cases(beta_in: &AbsSubst, head: &[String], vars: &[&String]) -> Vec<AbsSubst> {
    let mut cases = vec![beta_in.clone()];
    for v in vars {
        let mut next = Vec::new();
        for c in &cases {
            next.push(c.unify_var_functor(v, &Functor::nil(), &[]).beta);
            let (h, t) = (String::from("_H"), String::from("_T"));
            next.push(c.unify_var_functor(v, &Functor::cons(), &[h, t]).beta.project(head));
        }
        cases = next;
    }
    cases.retain(|c| !c.is_bottom());
    cases
}

/// Answer-count bounds obtained by analysing the clauses separately on
/// empty and non-empty values of the list arguments, where bounds such as
/// `sol =< L_in - 1` become valid.
fn split_sol(ctx: &Ctx<'_>, proc_: &Procedure, beta_in: &AbsSubst, norms: &[Option<Norm>]) -> Option<LinSys> {
    let head = head_vars(proc_.pred.arity);
    let split: Vec<&String> = head
        .iter()
        .filter(|v| {
            let nd = beta_in.var_node(v).unwrap();
            nd.frame.is_none() && nd.ty.is_list() && nd.mode.is_nonvar()
        })
        .take(2)
        .collect();
    if split.is_empty() {
        return None;
    }
    let in_only = |v: &SizeVar| matches!(v, SizeVar::Sol | SizeVar::In(_));
    let mut hull: Option<LinSys> = None;
    for case in list_cases(beta_in, &head, &split) {
        let (_, r, _) = combine(ctx, proc_, &case, norms);
        let s = r.sol_system().project(in_only);
        hull = Some(match hull {
            None => s,
            Some(h) => h.hull(&s),
        });
    }
    hull
}
