//! Folding leading unifications back into clause heads.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::var_number;
use crate::ast::{Clause, Literal, Procedure, Term};

pub fn step_semantic_denormalize(p: &Procedure) -> Procedure {
    Procedure::new(p.pred.clone(), p.clauses.iter().map(denormalize_clause).collect())
}

fn resolve(t: &Term, sigma: &BTreeMap<String, Term>) -> Term {
    match t {
        Term::Var(v) => match sigma.get(v) {
            Some(u) => resolve(u, sigma),
            None => t.clone(),
        },
        Term::Compound(f, args) => Term::Compound(f.clone(), args.iter().map(|a| resolve(a, sigma)).collect()),
        _ => t.clone(),
    }
}

fn occurs(v: &str, t: &Term) -> bool {
    t.vars().iter().any(|w| w == v)
}

/// Binds the variable side of `a = b`, preferring to replace the left-hand
/// side. `false` when neither side is an unbound variable.
fn bind(a: Term, b: Term, sigma: &mut BTreeMap<String, Term>) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) if x == y => true,
        (Term::Var(x), t) if !occurs(&x, &t) => {
            sigma.insert(x, t);
            true
        }
        (t, Term::Var(y)) if !occurs(&y, &t) => {
            sigma.insert(y, t);
            true
        }
        _ => false,
    }
}

/// Moves the unifications before the first other literal into the head,
/// names the tail variable of a folded structure after the argument it
/// replaced, and writes singleton variables as `_`.
pub fn denormalize_clause(c: &Clause) -> Clause {
    let mut sigma = BTreeMap::new();
    let mut k = 0;
    while k < c.body.len() {
        let ok = match &c.body[k] {
            Literal::UnifyVarVar(x, y) => {
                let (a, b) = (resolve(&Term::var(x), &sigma), resolve(&Term::var(y), &sigma));
                bind(a, b, &mut sigma)
            }
            Literal::UnifyVarFunctor(x, f, args) => {
                let a = resolve(&Term::var(x), &sigma);
                let t = resolve(&f.apply(args.iter().map(|v| Term::var(v)).collect()), &sigma);
                matches!(a, Term::Var(_)) && bind(a, t, &mut sigma)
            }
            _ => false,
        };
        if !ok {
            break;
        }
        k += 1;
    }
    let head: Vec<Term> = c.args.iter().map(|a| resolve(a, &sigma)).collect();
    let body: Vec<Literal> = c.body[k..].iter().map(|l| substitute_literal(l, &sigma)).collect();
    let mut out = Clause::new(&c.name, head, body);
    out = rename_tails(&out, c.args.len());
    anonymize_singletons(&out)
}

fn substitute_literal(l: &Literal, sigma: &BTreeMap<String, Term>) -> Literal {
    if sigma.is_empty() {
        return l.clone();
    }
    let t = resolve(&l.to_term(), sigma);
    let all_vars = |args: &[String]| args.iter().all(|a| matches!(resolve(&Term::var(a), sigma), Term::Var(_)));
    let name = |v: &String| match resolve(&Term::var(v), sigma) {
        Term::Var(w) => w,
        _ => unreachable!(),
    };
    match l {
        Literal::Cut => Literal::Cut,
        Literal::Not(inner) => Literal::Not(alloc::boxed::Box::new(substitute_literal(inner, sigma))),
        Literal::UnifyVarVar(x, y) if all_vars(&[x.clone(), y.clone()]) => Literal::UnifyVarVar(name(x), name(y)),
        Literal::Call(f, args) if all_vars(args) => Literal::Call(f.clone(), args.iter().map(name).collect()),
        Literal::UnifyVarFunctor(x, f, args) if all_vars(args) && all_vars(core::slice::from_ref(x)) => {
            Literal::UnifyVarFunctor(name(x), f.clone(), args.iter().map(name).collect())
        }
        _ => Literal::Goal(t),
    }
}

/// `p(.., [H|T], ..)` at position `k` with `Xk` gone: `T` becomes `Xk`.
fn rename_tails(c: &Clause, n: usize) -> Clause {
    let mut c = c.clone();
    for k in 0..n {
        let name = alloc::format!("X{}", k + 1);
        let used = c.vars();
        if used.contains(&name) {
            continue;
        }
        let tail = match &c.args[k] {
            Term::Compound(_, args) => match args.last() {
                Some(Term::Var(v)) => Some(v.clone()),
                _ => None,
            },
            _ => None,
        };
        if let Some(v) = tail {
            if var_number(&v).map(|j| j > n).unwrap_or(false) {
                c = c.rename(&|w| if w == v { Some(name.clone()) } else { None });
            }
        }
    }
    c
}

fn anonymize_singletons(c: &Clause) -> Clause {
    let mut count: BTreeMap<String, usize> = BTreeMap::new();
    let mut bump = |t: &Term| {
        let mut vs = Vec::new();
        collect_all(t, &mut vs);
        for v in vs {
            *count.entry(v).or_default() += 1;
        }
    };
    for a in &c.args {
        bump(a);
    }
    for l in &c.body {
        bump(&l.to_term());
    }
    c.rename(&|v| if count.get(v) == Some(&1) { Some(String::from("_")) } else { None })
}

fn collect_all(t: &Term, out: &mut Vec<String>) {
    match t {
        Term::Var(v) => out.push(v.clone()),
        Term::Compound(_, args) => args.iter().for_each(|a| collect_all(a, out)),
        _ => {}
    }
}
