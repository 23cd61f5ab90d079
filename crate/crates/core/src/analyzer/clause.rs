//! Abstract execution of a clause body, literal by literal.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{reaches, AnnotatedClause, Rejection, SpecEntry, SpecTable};
use crate::abstract_domain::{AbsSubst, Idx, LinSys, Mode, Norm, SizeVar, TypeExpr, UnifyOutcome};
use crate::abstract_sequence::AbstractSequence;
use crate::ast::{is_builtin, is_comparison, print_literal, Clause, Functor, Literal, PredId, Program};
use crate::linear::{q, Constraint, LinExpr};
use crate::spec_lang::arg_var;

type Lin = LinExpr<SizeVar>;

fn sol() -> Lin {
    Lin::var(SizeVar::Sol)
}

fn sol_le(k: i128) -> Constraint<SizeVar> {
    Constraint::le(sol(), Lin::constant(q(k)))
}

fn sol_ge(k: i128) -> Constraint<SizeVar> {
    Constraint::ge(sol(), Lin::constant(q(k)))
}

fn is_entry_var(v: &SizeVar) -> bool {
    matches!(v, SizeVar::In(_))
}

/// What a clause analysis needs to know about its surroundings.
pub(crate) struct Ctx<'a> {
    pub program: &'a Program,
    pub table: &'a SpecTable,
    pub pred: PredId,
    /// The spec under analysis; `None` for auxiliary predicates.
    pub spec: Option<&'a SpecEntry>,
    /// Inputs for which the cut of an earlier clause is surely reached.
    pub exclusions: Vec<AbsSubst>,
    pub depth: usize,
}

#[derive(Default)]
pub(crate) struct Findings {
    pub problems: Vec<Rejection>,
    pub warnings: Vec<String>,
}

impl Findings {
    fn reject(&mut self, component: &str, detail: String) {
        let r = Rejection {
            component: component.to_string(),
            detail,
        };
        if !self.problems.contains(&r) {
            self.problems.push(r);
        }
    }

    fn warn(&mut self, w: String) {
        if !self.warnings.contains(&w) {
            self.warnings.push(w);
        }
    }
}

pub(crate) fn head_vars(n: usize) -> Vec<String> {
    (0..n).map(arg_var).collect()
}

/// Splits list-typed head arguments into `[]` and `[_|_]` cases where an
/// exclusion distinguishes them and drops the excluded cases. `None` when
/// every input is excluded.
pub(crate) fn refine_entry(beta_in: &AbsSubst, exclusions: &[AbsSubst], head: &[String]) -> Option<AbsSubst> {
    let excluded = |b: &AbsSubst| b.is_bottom() || exclusions.iter().any(|e| b.leq(e));
    if excluded(beta_in) {
        return None;
    }
    if exclusions.is_empty() {
        return Some(beta_in.clone());
    }
    let split: Vec<&String> = head
        .iter()
        .filter(|v| {
            let n = beta_in.var_node(v).unwrap();
            n.frame.is_none()
                && n.ty.is_list()
                && n.mode.is_nonvar()
                && exclusions
                    .iter()
                    .any(|e| e.var_node(v).map(|m| m.frame.is_some()).unwrap_or(false))
        })
        .take(3)
        .collect();
    if split.is_empty() {
        return Some(beta_in.clone());
    }
    let mut cases = vec![beta_in.clone()];
    for v in split {
        let mut next = Vec::new();
        for c in &cases {
            next.push(c.unify_var_functor(v, &Functor::nil(), &[]).beta);
            let h = "_H".to_string();
            let t = "_T".to_string();
            next.push(c.unify_var_functor(v, &Functor::cons(), &[h, t]).beta.project(head));
        }
        cases = next;
    }
    cases.retain(|c| !excluded(c));
    let mut it = cases.into_iter();
    let first = it.next()?;
    Some(it.fold(first, |a, b| a.lub(&b)))
}

pub(crate) struct ClauseRun<'c, 'a> {
    ctx: &'c Ctx<'a>,
    head: Vec<String>,
    next_aux: u32,
    pub findings: Findings,
}

impl<'c, 'a> ClauseRun<'c, 'a> {
    pub fn new(ctx: &'c Ctx<'a>, arity: usize) -> Self {
        ClauseRun {
            ctx,
            head: head_vars(arity),
            next_aux: 0,
            findings: Findings::default(),
        }
    }

    fn fresh_aux(&mut self) -> SizeVar {
        self.next_aux += 1;
        SizeVar::Aux(self.next_aux)
    }

    /// Runs the clause on `beta_in`, a description over the head variables
    /// with `In(k)` tied to argument sizes. `out_norms` gives the norm used
    /// for `Out(k)`; `None` entries fall back to the argument's own norm.
    pub fn run(&mut self, clause: &Clause, beta_in: &AbsSubst, out_norms: &[Option<Norm>]) -> AnnotatedClause {
        let n = clause.args.len();
        let Some(entry) = refine_entry(beta_in, &self.ctx.exclusions, &self.head) else {
            return unreachable_clause(clause, beta_in);
        };
        let mut state = entry.clone();
        for v in clause.vars() {
            if !state.has_var(&v) {
                state.add_fresh_var(&v);
            }
        }
        let mut point = AbstractSequence::identity(&state);
        let mut points = vec![point.clone()];
        let mut literals = Vec::new();
        let mut exact = vec![true];
        for lit in &clause.body {
            let (l, lit_exact) = self.exec(&state, &point, lit);
            let ok = lit_exact || l.surely_succeeds();
            point = if lit.is_cut() {
                after_cut(&point)
            } else {
                self.compose(&point, &l, lit)
            };
            state = l.beta_out.forget_size_vars(|v| !matches!(v, SizeVar::Aux(_)));
            point.beta_out = state.clone();
            exact.push(exact.last().copied().unwrap() && ok);
            literals.push(l);
            points.push(point.clone());
        }
        let result = self.clause_result(&entry, &point, &state, n, out_norms);
        AnnotatedClause {
            clause: clause.clone(),
            entry,
            points,
            literals,
            exact,
            result,
            unreachable: false,
        }
    }

    fn clause_result(
        &self,
        entry: &AbsSubst,
        last: &AbstractSequence,
        state: &AbsSubst,
        n: usize,
        out_norms: &[Option<Norm>],
    ) -> AbstractSequence {
        let head = &self.head;
        let mut fin = state.clone();
        if !fin.is_bottom() {
            for k in 0..n {
                let v = arg_var(k);
                let norm = out_norms.get(k).copied().flatten().unwrap_or_else(|| fin.norm_of_var(&v));
                let i = fin.idx(&v).unwrap();
                if let Some(e) = fin.size_under(i, norm) {
                    fin.add_constraint(Constraint::eq(Lin::var(SizeVar::Out(k)), e));
                }
            }
        }
        let e_ref_out = if fin.is_bottom() {
            LinSys::new()
        } else {
            fin.constraints()
                .project(|v| matches!(v, SizeVar::In(_) | SizeVar::Out(_)))
        };
        let beta_ref = last.beta_ref.project(head);
        AbstractSequence {
            beta_in: entry.clone(),
            beta_ref,
            beta_fails: last.beta_fails.clone(),
            untouched: last.untouched.iter().filter(|v| head.contains(v)).cloned().collect(),
            beta_out: fin.project(head),
            e_ref_out,
            e_sol: last.e_sol.clone(),
        }
    }

    /// Head variables not instantiated by the prefix described by `point`.
    fn untouched_head(&self, point: &AbstractSequence) -> Vec<String> {
        self.head.iter().filter(|v| point.untouched.contains(*v)).cloned().collect()
    }

    /// Every variable's term is determined by the clause input: it lies
    /// inside the term of a head variable that is still untouched.
    fn determined(&self, state: &AbsSubst, point: &AbstractSequence, vars: &[String]) -> bool {
        let mut reach: BTreeSet<Idx> = BTreeSet::new();
        for v in self.untouched_head(point) {
            if let Some(i) = state.idx(&v) {
                reach.extend(state.descendants(i));
            }
        }
        vars.iter().all(|v| state.idx(v).map(|i| reach.contains(&state.find(i))).unwrap_or(false))
    }

    /// Sequential composition of the prefix `p` with literal `l`.
    fn compose(&mut self, p: &AbstractSequence, l: &AbstractSequence, lit: &Literal) -> AbstractSequence {
        let mut out = p.clone();
        out.untouched = p.untouched.intersection(&l.untouched).cloned().collect();
        if p.beta_ref.is_bottom() || l.surely_fails() {
            out.beta_ref = AbsSubst::bottom();
            out.beta_out = AbsSubst::bottom();
            out.e_sol = LinSys::from_constraints([sol_le(0), sol_ge(0)]);
            return out;
        }
        let uh = self.untouched_head(p);
        if !l.refines_nothing() {
            let view = l.beta_ref.project(&uh);
            out.beta_ref = p.beta_ref.glb(&view);
            if self.determined(&l.beta_in, p, &lit.vars()) {
                for f in &l.beta_fails {
                    out.add_fail(l.beta_in.glb(f).project(&uh));
                }
            }
        }
        out.e_sol = compose_sol(p, l);
        out
    }

    fn exec(&mut self, state: &AbsSubst, point: &AbstractSequence, lit: &Literal) -> (AbstractSequence, bool) {
        if state.is_bottom() || point.beta_ref.is_bottom() {
            return (AbstractSequence::failure(state), true);
        }
        match lit {
            Literal::UnifyVarVar(x, y) => {
                let out = state.unify_var_var(x, y);
                self.unification(state, point, lit, out)
            }
            Literal::UnifyVarFunctor(x, f, args) => {
                let out = state.unify_var_functor(x, f, args);
                self.unification(state, point, lit, out)
            }
            Literal::Cut => (AbstractSequence::identity(state), true),
            Literal::Not(inner) => (self.negation(state, point, inner, true), false),
            Literal::Call(name, args) if is_builtin(name, args.len()) => self.builtin(state, point, lit, name, args),
            Literal::Call(name, args) => self.call(state, point, lit, name, args),
            Literal::Goal(t) => {
                self.findings
                    .reject("call", format!("goal {} is not in normal form", crate::ast::print_term(t)));
                (pessimistic(state, &lit.vars()), false)
            }
        }
    }

    fn unification(
        &mut self,
        state: &AbsSubst,
        point: &AbstractSequence,
        lit: &Literal,
        out: UnifyOutcome,
    ) -> (AbstractSequence, bool) {
        let vars = lit.vars();
        let mut seq = AbstractSequence::from_unification(state, &out);
        if !seq.surely_fails() && !self.ctx.exclusions.is_empty() {
            let uh = self.untouched_head(point);
            let cand = point.beta_ref.project(&self.head).glb(&seq.beta_ref.project(&uh));
            if self.ctx.exclusions.iter().any(|e| cand.leq(e)) {
                let mut f = AbstractSequence::failure(state);
                f.untouched = seq.untouched.clone();
                seq = f;
            }
        }
        let exact = out.sure_success || out.sure_failure || {
            let det = |v: &String| self.determined(state, point, core::slice::from_ref(v));
            vars.iter().all(|v| {
                let fresh = state.mode_of(v) == Mode::VAR
                    && state.var_node(v).map(|n| n.lin).unwrap_or(false)
                    && vars.iter().filter(|w| *w != v).all(|w| !state.vars_share(v, w));
                fresh || (state.mode_of(v).is_ground() && det(v))
            })
        };
        (seq, exact)
    }

    /// `not(inner)`. `warn` reports possibly nonground negation.
    fn negation(&mut self, state: &AbsSubst, point: &AbstractSequence, inner: &Literal, warn: bool) -> AbstractSequence {
        let vars = inner.vars();
        let ground = vars.iter().all(|v| state.has_var(v) && state.mode_of(v).is_ground());
        if warn && !ground {
            self.findings.warn(format!(
                "unsound-negation-risk: not({}) may be called with nonground arguments",
                print_literal(inner)
            ));
        }
        let (il, _) = self.exec(state, point, inner);
        if il.surely_fails() {
            return AbstractSequence::identity(state);
        }
        if il.surely_succeeds() {
            return AbstractSequence::failure(state);
        }
        let mut s = AbstractSequence::identity(state);
        s.e_sol = LinSys::from_constraints([sol_le(1), sol_ge(0)]);
        if ground && inner.is_unification() {
            s.beta_fails = vec![il.beta_ref.clone()];
        }
        s
    }

    fn builtin(
        &mut self,
        state: &AbsSubst,
        point: &AbstractSequence,
        lit: &Literal,
        name: &str,
        args: &[String],
    ) -> (AbstractSequence, bool) {
        let ground = |v: &String| state.has_var(v) && state.mode_of(v).is_ground();
        match name {
            "true" => (AbstractSequence::identity(state), true),
            "fail" | "false" => (AbstractSequence::failure(state), true),
            _ if is_comparison(name) => {
                if !args.iter().all(ground) {
                    self.findings.reject(
                        "builtin",
                        format!("{} may be called with nonground arguments", print_literal(lit)),
                    );
                }
                (test_sequence(state), false)
            }
            "==" => {
                let (x, y) = (&args[0], &args[1]);
                if ground(x) && ground(y) {
                    let out = state.unify_var_var(x, y);
                    let r = self.unification(state, point, lit, out);
                    return r;
                }
                let same = state.idx(x).map(|i| state.find(i)) == state.idx(y).map(|i| state.find(i));
                if same {
                    (AbstractSequence::identity(state), true)
                } else {
                    (test_sequence(state), false)
                }
            }
            "\\==" | "\\=" => {
                let inner = Literal::UnifyVarVar(args[0].clone(), args[1].clone());
                let warn = name == "\\=";
                (self.negation(state, point, &inner, warn), false)
            }
            "is" => (self.arith(state, lit, args), false),
            _ => {
                self.findings
                    .reject("builtin", format!("{} is not supported here", print_literal(lit)));
                (pessimistic(state, args), false)
            }
        }
    }

    fn arith(&mut self, state: &AbsSubst, lit: &Literal, args: &[String]) -> AbstractSequence {
        let (lhs, rhs) = (&args[0], &args[1]);
        if !state.mode_of(rhs).is_ground() {
            self.findings.reject(
                "builtin",
                format!("{} may evaluate a nonground expression", print_literal(lit)),
            );
        }
        let tmp = "_IsValue";
        let mut s = state.clone();
        s.add_var(tmp, Mode::GROUND, TypeExpr::Int, true);
        let out = s.unify_var_var(lhs, tmp);
        if out.sure_failure {
            return AbstractSequence::failure(state);
        }
        let mut seq = test_sequence(state);
        seq.untouched = state.vars().filter(|v| !out.touched.contains(*v)).cloned().collect();
        seq.beta_out = out.beta.remove_var(tmp);
        seq
    }

    fn call(
        &mut self,
        state: &AbsSubst,
        point: &AbstractSequence,
        lit: &Literal,
        name: &str,
        args: &[String],
    ) -> (AbstractSequence, bool) {
        let _ = point;
        let callee = PredId::new(name, args.len());
        let renamed = to_positional(state, args);
        let seq = match self.ctx.table.lookup(&callee, &renamed) {
            Some(i) => self.ctx.table.get(i).seq.clone(),
            None if self.ctx.table.for_pred(&callee).next().is_none() && self.ctx.program.get(&callee).is_some() => {
                match self.auxiliary(&callee, &renamed) {
                    Some(s) => s,
                    None => return (pessimistic(state, args), false),
                }
            }
            None => {
                self.findings.reject(
                    "call",
                    format!("no spec of {callee} covers the call {}", print_literal(lit)),
                );
                return (pessimistic(state, args), false);
            }
        };
        if callee == self.ctx.pred {
            self.check_termination(state, args);
        } else if reaches(self.ctx.program, &callee, &self.ctx.pred) {
            self.findings.reject(
                "termination",
                format!("{callee} and {} are mutually recursive", self.ctx.pred),
            );
        }
        let l = self.apply(state, args, &seq);
        let exact = l.surely_succeeds();
        (l, exact)
    }

    /// Analyses a predicate without a spec for the input at one call site.
    fn auxiliary(&mut self, callee: &PredId, call: &AbsSubst) -> Option<AbstractSequence> {
        if self.ctx.depth > 6 || reaches(self.ctx.program, callee, &self.ctx.pred) {
            self.findings.reject(
                "termination",
                format!("{callee} has no spec and is recursive or reaches {}", self.ctx.pred),
            );
            return None;
        }
        let proc_ = self.ctx.program.get(callee)?;
        let mut beta_in = call.clone();
        for k in 0..callee.arity {
            if let Some(e) = beta_in.size_of_var(&arg_var(k)) {
                beta_in.add_constraint(Constraint::eq(Lin::var(SizeVar::In(k)), e));
            }
        }
        let sub = Ctx {
            program: self.ctx.program,
            table: self.ctx.table,
            pred: callee.clone(),
            spec: None,
            exclusions: Vec::new(),
            depth: self.ctx.depth + 1,
        };
        let norms = vec![None; callee.arity];
        let (_, seq, findings) = super::procedure::combine(&sub, proc_, &beta_in, &norms);
        for p in findings.problems {
            self.findings.reject(&p.component, format!("in {callee}: {}", p.detail));
        }
        for w in findings.warnings {
            self.findings.warn(w);
        }
        Some(seq)
    }

    fn check_termination(&mut self, state: &AbsSubst, args: &[String]) {
        let Some(spec) = self.ctx.spec else {
            self.findings
                .reject("termination", format!("recursive call to {} without a spec", self.ctx.pred));
            return;
        };
        let Some(k) = spec.spec.sexpr_index() else {
            self.findings
                .reject("termination", format!("{} is recursive but its spec has no sexpr", self.ctx.pred));
            return;
        };
        let norm = spec.seq.beta_in.norm_of_var(&arg_var(k));
        let ok = state
            .idx(&args[k])
            .and_then(|i| state.size_under(i, norm))
            .map(|e| {
                state
                    .constraints()
                    .entails(&Constraint::le(e, Lin::var(SizeVar::In(k)).plus_const(q(-1))))
            })
            .unwrap_or(false);
        if !ok {
            self.findings.reject(
                "termination",
                format!(
                    "cannot show that {} in a recursive call is smaller than {} at entry",
                    args[k],
                    spec.spec.args[k].name
                ),
            );
        }
    }

    /// Applies a callee sequence over `X1..Xn` to the call `args`.
    fn apply(&mut self, state: &AbsSubst, args: &[String], seq: &AbstractSequence) -> AbstractSequence {
        let n = args.len();
        let mut pre = state.clone();
        let mut a_in = vec![None; n];
        for k in 0..n {
            let norm = seq.beta_in.norm_of_var(&arg_var(k));
            let i = pre.idx(&args[k]).unwrap();
            if let Some(e) = pre.size_under(i, norm) {
                let a = self.fresh_aux();
                pre.add_constraint(Constraint::eq(Lin::var(a), e));
                a_in[k] = Some(a);
            }
        }
        let to_actual = |v: &str| -> Option<String> {
            v.strip_prefix('X')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&j| j >= 1 && j <= n)
                .map(|j| args[j - 1].clone())
        };
        let nonground: Vec<String> = args.iter().filter(|a| !pre.mode_of(a).is_ground()).cloned().collect();
        let inst = pre.instantiate_vars(&nonground);
        let spec_out = seq.beta_out.forget_size_vars(|_| false).rename_vars(&to_actual);
        let mut post = inst.glb(&spec_out);
        if post.is_bottom() || seq.surely_fails() {
            return AbstractSequence::failure(&pre);
        }
        let mut a_out = vec![None; n];
        for k in 0..n {
            let norm = seq.beta_out.norm_of_var(&arg_var(k));
            let i = post.idx(&args[k]).unwrap();
            if let Some(e) = post.size_under(i, norm) {
                let b = self.fresh_aux();
                post.add_constraint(Constraint::eq(Lin::var(b), e));
                a_out[k] = Some(b);
            }
        }
        let map = |v: &SizeVar| -> Option<SizeVar> {
            match v {
                SizeVar::In(k) => a_in.get(*k).copied().flatten(),
                SizeVar::Out(k) => a_out.get(*k).copied().flatten(),
                SizeVar::Sol => Some(SizeVar::Sol),
                _ => None,
            }
        };
        let mapped = |c: &Constraint<SizeVar>| -> Option<Constraint<SizeVar>> {
            if c.expr.vars().all(|v| map(v).is_some()) {
                Some(c.map_vars(&|v| map(v).unwrap()))
            } else {
                None
            }
        };
        for c in seq.e_ref_out.constraints() {
            if let Some(m) = mapped(c) {
                post.add_constraint(m);
            }
        }
        let mut e_sol = LinSys::from_constraints([sol_ge(0)]);
        for c in seq.e_sol.constraints() {
            if let Some(m) = mapped(c) {
                e_sol.add(m);
            }
        }
        let arg_idx: Vec<Idx> = args.iter().map(|a| pre.idx(a).unwrap()).collect();
        let untouched: BTreeSet<String> = pre
            .vars()
            .filter(|v| {
                let i = pre.idx(v).unwrap();
                pre.mode_of(v).is_ground() || !arg_idx.iter().any(|&a| pre.shares(i, a))
            })
            .cloned()
            .collect();
        let strip = |b: &AbsSubst| b.forget_size_vars(|_| false).rename_vars(&to_actual);
        let refines = !seq.refines_nothing();
        let beta_ref = if refines { pre.glb(&strip(&seq.beta_ref)) } else { pre.clone() };
        let beta_fails = seq.beta_fails.iter().map(strip).collect();
        AbstractSequence {
            beta_in: pre,
            beta_ref,
            beta_fails,
            untouched,
            beta_out: post,
            e_ref_out: LinSys::new(),
            e_sol,
        }
    }
}

/// State restricted to the call arguments, renamed to `X1..Xn`.
pub(crate) fn to_positional(state: &AbsSubst, args: &[String]) -> AbsSubst {
    state
        .project(args)
        .rename_vars(&|v| args.iter().position(|a| a == v).map(arg_var))
        .forget_size_vars(|_| false)
}

/// A test that may fail and never binds.
fn test_sequence(state: &AbsSubst) -> AbstractSequence {
    let mut s = AbstractSequence::identity(state);
    s.e_sol = LinSys::from_constraints([sol_le(1), sol_ge(0)]);
    s
}

/// Nothing known beyond the instantiation of `vars`.
fn pessimistic(state: &AbsSubst, vars: &[String]) -> AbstractSequence {
    let mut s = AbstractSequence::identity(state);
    let vars: Vec<String> = vars.iter().filter(|v| state.has_var(v)).cloned().collect();
    s.beta_out = state.instantiate_vars(&vars);
    s.untouched = state.vars().filter(|v| state.mode_of(v).is_ground()).cloned().collect();
    s.e_sol = LinSys::from_constraints([sol_ge(0)]);
    s
}

fn unreachable_clause(clause: &Clause, beta_in: &AbsSubst) -> AnnotatedClause {
    let f = AbstractSequence::failure(beta_in);
    let len = clause.body.len();
    AnnotatedClause {
        clause: clause.clone(),
        entry: beta_in.clone(),
        points: vec![f.clone(); len + 1],
        literals: vec![f.clone(); len],
        exact: vec![false; len + 1],
        result: f,
        unreachable: true,
    }
}

/// Effect of a cut on the answer count of the prefix before it.
fn after_cut(p: &AbstractSequence) -> AbstractSequence {
    let mut out = p.clone();
    let sys = p.sol_system();
    let mut e = LinSys::from_constraints([sol_ge(0), sol_le(1)]);
    if sys.entails(&sol_ge(1)) {
        e.add(sol_ge(1));
    }
    if sys.entails(&sol_le(0)) {
        e.add(sol_le(0));
    }
    out.e_sol = e;
    out
}

/// Answer-count bounds of a prefix followed by one literal, over `sol`
/// and the entry sizes.
fn compose_sol(p: &AbstractSequence, l: &AbstractSequence) -> LinSys {
    let lit_sys = l
        .e_sol
        .conjoin(l.beta_in.constraints())
        .conjoin(p.beta_in.constraints())
        .project(|v| *v == SizeVar::Sol || is_entry_var(v));
    let pre_sys = p.sol_system().project(|v| *v == SizeVar::Sol || is_entry_var(v));
    let ub_l = lit_sys.upper_bounds(&SizeVar::Sol, is_entry_var);
    let lb_l = lit_sys.lower_bounds(&SizeVar::Sol, is_entry_var);
    let ub_p = pre_sys.upper_bounds(&SizeVar::Sol, is_entry_var);
    let lb_p = pre_sys.lower_bounds(&SizeVar::Sol, is_entry_var);
    let valid = |u: &Lin| p.beta_in.constraints().entails(&Constraint::ge(u.clone(), Lin::zero()));
    let p_det = p.deterministic();
    let p_one = p.fully_deterministic();
    let l_det = l.deterministic();
    let l_sure = l.surely_succeeds();
    let mut e = LinSys::from_constraints([sol_ge(0)]);
    if p_one {
        for u in ub_l.iter().filter(|u| valid(u)) {
            e.add(Constraint::le(sol(), u.clone()));
        }
        for lo in &lb_l {
            e.add(Constraint::ge(sol(), lo.clone()));
        }
        return e;
    }
    if l_det {
        for u in &ub_p {
            e.add(Constraint::le(sol(), u.clone()));
        }
    }
    if p_det {
        for u in ub_l.iter().filter(|u| valid(u)) {
            e.add(Constraint::le(sol(), u.clone()));
        }
    }
    if let Some(c) = ub_p.iter().find(|u| u.is_constant()) {
        let c = c.eval(&|_| q(0));
        if c >= q(0) {
            for u in ub_l.iter().filter(|u| valid(u)) {
                e.add(Constraint::le(sol(), u.scale(c)));
            }
        }
    }
    if l_sure {
        for lo in &lb_p {
            e.add(Constraint::ge(sol(), lo.clone()));
        }
    }
    e
}
