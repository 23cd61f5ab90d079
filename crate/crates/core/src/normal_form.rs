//! Syntactic normalisation into flat clauses over `X1..Xm`, and a checker for
//! that form.
//!
//! Head patterns become explicit unifications at the front of the body,
//! nested terms are flattened outermost-first with fresh variables,
//! disjunctions become auxiliary predicates `<pred>__disj<k>` and compound
//! negated goals become `not(<pred>__not<k>(..))`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::ast::{Clause, Functor, Literal, PredId, Procedure, Program, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormalizeError {
    #[error("{pred}: unsupported construct: {what}")]
    Unsupported { pred: String, what: String },
}

/// Normalises every procedure, appending the auxiliary procedures after
/// the procedure that introduced them.
pub fn normalize_program(p: &Program) -> Result<Program, NormalizeError> {
    let mut out = Program::new();
    for proc_ in &p.procedures {
        let (main, aux) = normalize_procedure(proc_)?;
        out.procedures.push(main);
        out.procedures.extend(aux);
    }
    Ok(out)
}

/// Normalises one procedure; the second component holds the auxiliary
/// procedures created for disjunctions and compound negations.
pub fn normalize_procedure(pr: &Procedure) -> Result<(Procedure, Vec<Procedure>), NormalizeError> {
    let mut aux = AuxTable::new(&pr.pred.name);
    let mut clauses = Vec::new();
    for c in &pr.clauses {
        clauses.push(normalize_clause(c, &mut aux)?);
    }
    let mut aux_procs = Vec::new();
    for (name, arity, cls) in aux.done {
        let p = Procedure::new(PredId::new(&name, arity), cls);
        let (np, more) = normalize_procedure(&p)?;
        aux_procs.push(np);
        aux_procs.extend(more);
    }
    Ok((Procedure::new(pr.pred.clone(), clauses), aux_procs))
}

struct AuxTable {
    base: String,
    disj: usize,
    not: usize,
    done: Vec<(String, usize, Vec<Clause>)>,
}

impl AuxTable {
    fn new(base: &str) -> Self {
        AuxTable {
            base: base.to_string(),
            disj: 0,
            not: 0,
            done: Vec::new(),
        }
    }
}

struct ClauseCtx<'a> {
    map: BTreeMap<String, String>,
    fresh: usize,
    out: Vec<Literal>,
    /// Occurrence counts of source variables over the whole clause.
    occurrences: BTreeMap<String, usize>,
    aux: &'a mut AuxTable,
}

fn count_occurrences(t: &Term, m: &mut BTreeMap<String, usize>) {
    match t {
        Term::Var(v) => *m.entry(v.clone()).or_insert(0) += 1,
        Term::Compound(_, args) => args.iter().for_each(|a| count_occurrences(a, m)),
        _ => {}
    }
}

impl ClauseCtx<'_> {
    fn fresh(&mut self) -> String {
        self.fresh += 1;
        format!("\u{1}f{}", self.fresh)
    }

    fn var(&mut self, v: &str) -> String {
        if let Some(n) = self.map.get(v) {
            return n.clone();
        }
        let n = self.fresh();
        self.map.insert(v.to_string(), n.clone());
        n
    }

    /// Emits `x = t` as flat unifications, outermost-first.
    fn unify_var_term(&mut self, x: &str, t: &Term) {
        match t {
            Term::Var(v) => {
                let y = self.var(v);
                if y == x {
                    let z = self.fresh();
                    self.out.push(Literal::UnifyVarVar(z, y));
                } else {
                    self.out.push(Literal::UnifyVarVar(x.to_string(), y));
                }
            }
            Term::Int(i) => self
                .out
                .push(Literal::UnifyVarFunctor(x.to_string(), Functor::Int(*i), Vec::new())),
            Term::Atom(a) => self.out.push(Literal::UnifyVarFunctor(
                x.to_string(),
                Functor::Atom(a.clone(), 0),
                Vec::new(),
            )),
            Term::Compound(f, args) => {
                let (names, pending) = self.flat_args(args);
                self.out.push(Literal::UnifyVarFunctor(
                    x.to_string(),
                    Functor::Atom(f.clone(), args.len()),
                    names,
                ));
                self.emit_pending(pending);
            }
        }
    }

    /// Variable names for `args`, pairwise distinct; nonvariable and
    /// repeated arguments get fresh variables and are returned as pending
    /// unifications.
    fn flat_args(&mut self, args: &[Term]) -> (Vec<String>, Vec<(String, Term)>) {
        let mut names: Vec<String> = Vec::new();
        let mut pending = Vec::new();
        for a in args {
            match a {
                Term::Var(v) => {
                    let n = self.var(v);
                    if names.contains(&n) {
                        let z = self.fresh();
                        pending.push((z.clone(), a.clone()));
                        names.push(z);
                    } else {
                        names.push(n);
                    }
                }
                _ => {
                    let z = self.fresh();
                    pending.push((z.clone(), a.clone()));
                    names.push(z);
                }
            }
        }
        (names, pending)
    }

    fn emit_pending(&mut self, pending: Vec<(String, Term)>) {
        for (z, t) in pending {
            self.unify_var_term(&z, &t);
        }
    }

    fn goal(&mut self, t: &Term) -> Result<(), NormalizeError> {
        match t {
            Term::Atom(a) if a == "!" => self.out.push(Literal::Cut),
            Term::Compound(f, args) if f == "," && args.len() == 2 => {
                self.goal(&args[0])?;
                self.goal(&args[1])?;
            }
            Term::Compound(f, args) if f == "=" && args.len() == 2 => {
                match (&args[0], &args[1]) {
                    (Term::Var(a), rhs) => {
                        let x = self.var(a);
                        self.unify_var_term(&x, rhs);
                    }
                    (lhs, Term::Var(b)) => {
                        let y = self.var(b);
                        self.unify_var_term(&y, lhs);
                    }
                    (l, r) => {
                        let z = self.fresh();
                        self.unify_var_term(&z, l);
                        self.unify_var_term(&z, r);
                    }
                }
            }
            Term::Compound(f, args) if (f == "not" || f == "\\+") && args.len() == 1 => {
                let lit = self.negation(&args[0])?;
                self.out.push(lit);
            }
            Term::Compound(f, args) if f == ";" && args.len() == 2 => {
                let call = self.disjunction(t)?;
                self.out.push(call);
            }
            Term::Atom(a) => self.out.push(Literal::Call(a.clone(), Vec::new())),
            Term::Compound(f, args) => {
                let (names, pending) = self.flat_args(args);
                self.emit_pending(pending);
                self.out.push(Literal::Call(f.clone(), names));
            }
            Term::Var(v) => return Err(self.unsupported(format!("variable goal `{v}`"))),
            Term::Int(i) => return Err(self.unsupported(format!("integer goal `{i}`"))),
        }
        Ok(())
    }

    fn unsupported(&self, what: String) -> NormalizeError {
        NormalizeError::Unsupported {
            pred: self.aux.base.clone(),
            what,
        }
    }

    fn literal(&mut self, l: &Literal) -> Result<(), NormalizeError> {
        match l {
            Literal::Goal(t) => self.goal(t),
            other => self.goal(&other.to_term()),
        }
    }

    /// Source variables of `t` that also occur elsewhere in the clause, in
    /// order of first occurrence in `t`.
    fn shared_vars(&self, t: &Term) -> Vec<String> {
        let mut inner = BTreeMap::new();
        count_occurrences(t, &mut inner);
        t.vars()
            .into_iter()
            .filter(|v| self.occurrences.get(v).copied().unwrap_or(0) > inner[v])
            .collect()
    }

    fn negation(&mut self, g: &Term) -> Result<Literal, NormalizeError> {
        let shared = self.shared_vars(g);
        let mut probe = ClauseCtx {
            map: self.map.clone(),
            fresh: self.fresh,
            out: Vec::new(),
            occurrences: self.occurrences.clone(),
            aux: &mut *self.aux,
        };
        let simple = !contains_control(g) && probe.goal(g).is_ok() && probe.out.len() == 1;
        if simple {
            let lit = probe.out.pop().unwrap();
            self.map = probe.map;
            self.fresh = probe.fresh;
            if lit.is_cut() {
                return Err(self.unsupported("cut inside negation".into()));
            }
            return Ok(Literal::Not(Box::new(lit)));
        }
        self.aux.not += 1;
        let name = format!("{}__not{}", self.aux.base, self.aux.not);
        let call = self.aux_call(&name, &shared);
        let clause = Clause::new(
            &name,
            shared.iter().map(|v| Term::var(v)).collect(),
            alloc::vec![Literal::Goal(g.clone())],
        );
        if contains_cut(g) {
            return Err(self.unsupported("cut inside negation".into()));
        }
        self.aux.done.push((name, shared.len(), alloc::vec![clause]));
        Ok(Literal::Not(Box::new(call)))
    }

    fn disjunction(&mut self, t: &Term) -> Result<Literal, NormalizeError> {
        if contains_cut(t) {
            return Err(self.unsupported("cut inside disjunction".into()));
        }
        let shared = self.shared_vars(t);
        self.aux.disj += 1;
        let name = format!("{}__disj{}", self.aux.base, self.aux.disj);
        let mut alts = Vec::new();
        let mut cur = t;
        while let Term::Compound(f, args) = cur {
            if f != ";" || args.len() != 2 {
                break;
            }
            alts.push(args[0].clone());
            cur = &args[1];
        }
        alts.push(cur.clone());
        let clauses = alts
            .into_iter()
            .map(|alt| {
                Clause::new(
                    &name,
                    shared.iter().map(|v| Term::var(v)).collect(),
                    alloc::vec![Literal::Goal(alt)],
                )
            })
            .collect();
        let call = self.aux_call(&name, &shared);
        self.aux.done.push((name, shared.len(), clauses));
        Ok(call)
    }

    fn aux_call(&mut self, name: &str, shared: &[String]) -> Literal {
        let args = shared.iter().map(|v| self.var(v)).collect();
        Literal::Call(name.to_string(), args)
    }
}

fn contains_cut(t: &Term) -> bool {
    match t {
        Term::Atom(a) => a == "!",
        Term::Compound(f, args) if matches!(f.as_str(), "," | ";") => {
            args.iter().any(contains_cut)
        }
        _ => false,
    }
}

fn contains_control(t: &Term) -> bool {
    matches!(t, Term::Compound(f, args) if (f == "," || f == ";") && args.len() == 2)
}

fn normalize_clause(c: &Clause, aux: &mut AuxTable) -> Result<Clause, NormalizeError> {
    let mut occurrences = BTreeMap::new();
    for a in &c.args {
        count_occurrences(a, &mut occurrences);
    }
    for l in &c.body {
        count_occurrences(&l.to_term(), &mut occurrences);
    }
    let mut ctx = ClauseCtx {
        map: BTreeMap::new(),
        fresh: 0,
        out: Vec::new(),
        occurrences,
        aux,
    };
    let n = c.args.len();
    let heads: Vec<String> = (1..=n).map(|i| format!("\u{1}h{i}")).collect();
    let mut pending = Vec::new();
    for (i, a) in c.args.iter().enumerate() {
        match a {
            Term::Var(v) if !ctx.map.contains_key(v) => {
                ctx.map.insert(v.clone(), heads[i].clone());
            }
            _ => pending.push((heads[i].clone(), a.clone())),
        }
    }
    ctx.emit_pending(pending);
    for l in &c.body {
        ctx.literal(l)?;
    }
    let clause = Clause::new(
        &c.name,
        heads.iter().map(|h| Term::var(h)).collect(),
        ctx.out,
    );
    Ok(canonical_names(&clause))
}

/// Renames variables to `X1..Xm` in order of first occurrence.
pub fn canonical_names(c: &Clause) -> Clause {
    let order = c.vars();
    let table: BTreeMap<&str, String> = order
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), format!("X{}", i + 1)))
        .collect();
    c.rename(&|v| table.get(v).cloned())
}

/// Checks the normalised-form constraints, reporting the first violation.
pub fn validate_normal_form(pr: &Procedure) -> Result<(), String> {
    for (k, c) in pr.clauses.iter().enumerate() {
        validate_clause(c).map_err(|e| format!("clause {}: {e}", k + 1))?;
    }
    Ok(())
}

pub fn validate_clause(c: &Clause) -> Result<(), String> {
    let mut seen: Vec<&str> = Vec::new();
    for (i, a) in c.args.iter().enumerate() {
        let Term::Var(v) = a else {
            return Err(format!("head argument {} is not a variable", i + 1));
        };
        if seen.contains(&v.as_str()) {
            return Err("head variables not distinct".into());
        }
        seen.push(v);
    }
    for l in &c.body {
        check_literal(l)?;
    }
    for (i, v) in c.vars().iter().enumerate() {
        if *v != format!("X{}", i + 1) {
            return Err(format!("variable `{v}` should be named X{}", i + 1));
        }
    }
    Ok(())
}

fn distinct(vs: &[String]) -> bool {
    vs.iter().enumerate().all(|(i, v)| !vs[..i].contains(v))
}

fn check_literal(l: &Literal) -> Result<(), String> {
    match l {
        Literal::UnifyVarVar(x, y) if x == y => Err(format!("literal {x}={y} repeats a variable")),
        Literal::UnifyVarFunctor(_, f, args) if !distinct(args) || args.len() != f.arity() => {
            Err(format!("arguments of {} not distinct", crate::ast::print_literal(l)))
        }
        Literal::Call(_, args) if !distinct(args) => {
            Err(format!("arguments of {} not distinct", crate::ast::print_literal(l)))
        }
        Literal::Not(inner) => match **inner {
            Literal::Cut => Err("cut inside negation".into()),
            _ => check_literal(inner),
        },
        Literal::Goal(t) => Err(format!("unnormalised goal {}", crate::ast::print_term(t))),
        _ => Ok(()),
    }
}

/// Called predicates that are neither defined nor builtin.
pub fn undefined_calls(p: &Program) -> Vec<PredId> {
    let mut out = Vec::new();
    for proc_ in &p.procedures {
        for q in proc_.calls() {
            if p.get(&q).is_none() && !crate::ast::is_builtin(&q.name, q.arity) && !out.contains(&q) {
                out.push(q);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{parse_program, print_program};

    fn norm(src: &str) -> String {
        print_program(&normalize_program(&parse_program(src).unwrap()).unwrap())
    }

    #[test]
    fn efface_matches_step_a() {
        let out = norm(
            "efface(X,[H|T],[H|TEff]) :- efface(X,T,TEff), not(X=H).\nefface(X,[X|T],T).",
        );
        assert_eq!(
            out,
            "efface(X1,X2,X3) :- X2=[X4|X5], X3=[X4|X6], efface(X1,X5,X6), not(X1=X4).\n\
             efface(X1,X2,X3) :- X2=[X1|X3].\n"
        );
    }

    #[test]
    fn append_normalizes() {
        let out = norm("append([],L,L).\nappend([H|L1],L2,[H|L3]) :- append(L1,L2,L3).");
        assert_eq!(
            out,
            "append(X1,X2,X3) :- X1=[], X3=X2.\n\
             append(X1,X2,X3) :- X1=[X4|X5], X3=[X4|X6], append(X5,X2,X6).\n"
        );
    }

    #[test]
    fn constant_head() {
        assert_eq!(norm("p(a)."), "p(X1) :- X1=a.\n");
    }

    #[test]
    fn disjunction_becomes_aux() {
        let out = norm("p(X) :- (X=a ; X=b).");
        assert_eq!(
            out,
            "p(X1) :- p__disj1(X1).\np__disj1(X1) :- X1=a.\np__disj1(X1) :- X1=b.\n"
        );
    }

    #[test]
    fn compound_negation_becomes_aux() {
        let out = norm("p(X) :- not((X=a, q)).\nq.");
        assert!(out.starts_with("p(X1) :- not(p__not1(X1)).\np__not1(X1) :- X1=a, q.\n"), "{out}");
    }

    #[test]
    fn nested_terms_outermost_first() {
        let out = norm("p(f(g(X),[Y]),X,Y).");
        assert_eq!(
            out,
            "p(X1,X2,X3) :- X1=f(X4,X5), X4=g(X2), X5=[X3|X6], X6=[].\n"
        );
    }

    #[test]
    fn repeated_variables_split() {
        assert_eq!(norm("p(X,X)."), "p(X1,X2) :- X2=X1.\n");
        assert_eq!(norm("p(X) :- q(X,X), X=X."), "p(X1) :- X2=X1, q(X1,X2), X3=X1.\n");
        assert_eq!(norm("p :- a=b."), "p :- X1=a, X1=b.\n");
    }

    #[test]
    fn cut_in_disjunction_rejected() {
        let p = parse_program("p :- (q, ! ; r).").unwrap();
        assert!(normalize_program(&p).is_err());
    }

    #[test]
    fn validator() {
        let ok = normalize_program(&parse_program("efface(X,[X|T],T).").unwrap()).unwrap();
        assert!(validate_normal_form(&ok.procedures[0]).is_ok());
        let bad = parse_program("p(X1,X1).").unwrap();
        assert_eq!(
            validate_normal_form(&bad.procedures[0]).unwrap_err(),
            "clause 1: head variables not distinct"
        );
        let cyc = parse_program("p(X1) :- X1=f(X1).").unwrap();
        let cyc = Procedure::new(
            cyc.procedures[0].pred.clone(),
            alloc::vec![Clause::new(
                "p",
                alloc::vec![Term::var("X1")],
                alloc::vec![Literal::UnifyVarFunctor(
                    "X1".into(),
                    Functor::Atom("f".into(), 1),
                    alloc::vec!["X1".into()]
                )]
            )],
        );
        assert!(validate_normal_form(&cyc).is_ok());
    }

    #[test]
    fn idempotent() {
        let src = "efface(X,[H|T],[H|TEff]) :- efface(X,T,TEff), not(X=H).\nefface(X,[X|T],T).\n\
                   p(X) :- (X=a ; X=b), q(f(X), 3).\nq(_, _).";
        let once = normalize_program(&parse_program(src).unwrap()).unwrap();
        let twice = normalize_program(&once).unwrap();
        assert_eq!(print_program(&once), print_program(&twice));
    }
}
