//! Reference interpreter: depth-first, left-to-right resolution with cut,
//! negation as failure, integer arithmetic, an inference budget and
//! choice-point counters.
//!
//! The interpreter runs general (non-normalised) clauses as well, so it can
//! compare a source program with its normalised and specialised versions.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::rc::Rc;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{Clause, PredId, Program, Term};

/// Bindings for the query variables, in order of first occurrence in the
/// query.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution(pub Vec<(String, Term)>);

impl Substitution {
    pub fn get(&self, var: &str) -> Option<&Term> {
        self.0.iter().find(|(v, _)| v == var).map(|(_, t)| t)
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}/{}", crate::ast::print_term(t))?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Terminator {
    Complete,
    /// Reserved for a loop detector; the interpreter never produces it.
    Bottom,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AnswerSequence {
    pub answers: Vec<Substitution>,
    pub terminator: Terminator,
}

impl AnswerSequence {
    pub fn len(&self) -> usize {
        self.answers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.answers.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.terminator == Terminator::Complete
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct CostCounters {
    /// Successful head unifications, i.e. clause bodies entered.
    pub inferences: u64,
    pub choicepoints_created: u64,
    pub max_live_choicepoints: u64,
    /// Live choice points when the first answer is produced; zero when
    /// there is no answer.
    pub residual_choicepoints_after_first_answer: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("undefined predicate {0}")]
    Undefined(PredId),
    #[error("arguments are not sufficiently instantiated in {0}")]
    Instantiation(String),
    #[error("type error: `{0}` is not an integer expression")]
    NotANumber(String),
    #[error("arithmetic error: {0}")]
    Arithmetic(&'static str),
    #[error("unification would create a cyclic term")]
    CyclicTerm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Maximum number of inferences before giving up.
    pub budget: u64,
    pub occur_check: bool,
    /// Pre-select clauses on the principal functor of a bound first
    /// argument.
    pub model_indexing: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            budget: 1_000_000,
            occur_check: true,
            model_indexing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum RT {
    Var(usize),
    Int(i64),
    Atom(Rc<str>),
    Str(Rc<str>, Rc<[RT]>),
}

struct CompiledClause {
    nvars: usize,
    head: Vec<RT>,
    body: Vec<RT>,
    first_functor: Option<(Rc<str>, usize)>,
}

struct CompiledProc {
    clauses: Vec<CompiledClause>,
}

/// Compiles a term, numbering variables through `vars`.
fn compile(t: &Term, vars: &mut BTreeMap<String, usize>) -> RT {
    match t {
        Term::Var(v) => {
            let n = vars.len();
            RT::Var(*vars.entry(v.clone()).or_insert(n))
        }
        Term::Int(i) => RT::Int(*i),
        Term::Atom(a) => RT::Atom(a.as_str().into()),
        Term::Compound(f, args) => RT::Str(
            f.as_str().into(),
            args.iter().map(|a| compile(a, vars)).collect(),
        ),
    }
}

fn principal(t: &RT) -> Option<(Rc<str>, usize)> {
    match t {
        RT::Var(_) => None,
        RT::Int(i) => Some((format!("{i}").into(), usize::MAX)),
        RT::Atom(a) => Some((a.clone(), 0)),
        RT::Str(f, args) => Some((f.clone(), args.len())),
    }
}

fn compile_clause(c: &Clause) -> CompiledClause {
    let mut vars = BTreeMap::new();
    let head: Vec<RT> = c.args.iter().map(|a| compile(a, &mut vars)).collect();
    let body = c.body.iter().map(|l| compile(&l.to_term(), &mut vars)).collect();
    let first_functor = head.first().and_then(principal);
    CompiledClause {
        nvars: vars.len(),
        head,
        body,
        first_functor,
    }
}

/// Goal continuation: a persistent list of goals with their cut barriers.
struct Frame {
    goal: RT,
    cutb: usize,
    next: Cont,
}

type Cont = Option<Rc<Frame>>;

impl Drop for Frame {
    fn drop(&mut self) {
        let mut next = self.next.take();
        while let Some(rc) = next {
            match Rc::try_unwrap(rc) {
                Ok(mut f) => next = f.next.take(),
                Err(_) => break,
            }
        }
    }
}

enum CpKind {
    Clauses {
        pred: usize,
        args: Rc<[RT]>,
        cands: Rc<[usize]>,
        next: usize,
        cont: Cont,
    },
    Alt {
        cont: Cont,
    },
}

struct ChoicePoint {
    trail_mark: usize,
    store_mark: usize,
    kind: CpKind,
}

enum Stop {
    Budget,
    Error(SolveError),
}

impl From<SolveError> for Stop {
    fn from(e: SolveError) -> Self {
        Stop::Error(e)
    }
}

struct Machine<'p> {
    procs: Vec<CompiledProc>,
    index: BTreeMap<(&'p str, usize), usize>,
    store: Vec<Option<RT>>,
    trail: Vec<usize>,
    cps: Vec<ChoicePoint>,
    opts: SolveOptions,
    counters: CostCounters,
}

impl<'p> Machine<'p> {
    fn new(p: &'p Program, opts: SolveOptions) -> Self {
        let mut index = BTreeMap::new();
        let mut procs = Vec::new();
        for (i, pr) in p.procedures.iter().enumerate() {
            index.insert((pr.pred.name.as_str(), pr.pred.arity), i);
            procs.push(CompiledProc {
                clauses: pr.clauses.iter().map(compile_clause).collect(),
            });
        }
        Machine {
            procs,
            index,
            store: Vec::new(),
            trail: Vec::new(),
            cps: Vec::new(),
            opts,
            counters: CostCounters::default(),
        }
    }

    fn deref(&self, t: &RT) -> RT {
        let mut cur = t.clone();
        while let RT::Var(v) = cur {
            match &self.store[v] {
                Some(b) => cur = b.clone(),
                None => return RT::Var(v),
            }
        }
        cur
    }

    fn fresh_vars(&mut self, n: usize) -> usize {
        let base = self.store.len();
        self.store.resize(base + n, None);
        base
    }

    fn instantiate(t: &RT, base: usize) -> RT {
        match t {
            RT::Var(v) => RT::Var(base + v),
            RT::Str(f, args) => RT::Str(
                f.clone(),
                args.iter().map(|a| Self::instantiate(a, base)).collect(),
            ),
            other => other.clone(),
        }
    }

    fn occurs(&self, v: usize, t: &RT) -> bool {
        let mut stack = alloc::vec![t.clone()];
        while let Some(t) = stack.pop() {
            match self.deref(&t) {
                RT::Var(w) if w == v => return true,
                RT::Str(_, args) => stack.extend(args.iter().cloned()),
                _ => {}
            }
        }
        false
    }

    fn bind(&mut self, v: usize, t: RT) -> Result<bool, SolveError> {
        if self.occurs(v, &t) {
            return if self.opts.occur_check {
                Ok(false)
            } else {
                Err(SolveError::CyclicTerm)
            };
        }
        self.store[v] = Some(t);
        self.trail.push(v);
        Ok(true)
    }

    fn unify(&mut self, a: &RT, b: &RT) -> Result<bool, SolveError> {
        let mut stack = alloc::vec![(a.clone(), b.clone())];
        while let Some((a, b)) = stack.pop() {
            let (a, b) = (self.deref(&a), self.deref(&b));
            match (&a, &b) {
                (RT::Var(x), RT::Var(y)) if x == y => {}
                (RT::Var(x), _) => {
                    if !self.bind(*x, b.clone())? {
                        return Ok(false);
                    }
                }
                (_, RT::Var(y)) => {
                    if !self.bind(*y, a.clone())? {
                        return Ok(false);
                    }
                }
                (RT::Int(x), RT::Int(y)) if x == y => {}
                (RT::Atom(x), RT::Atom(y)) if x == y => {}
                (RT::Str(f, xs), RT::Str(g, ys)) if f == g && xs.len() == ys.len() => {
                    for (x, y) in xs.iter().zip(ys.iter()) {
                        stack.push((x.clone(), y.clone()));
                    }
                }
                _ => return Ok(false),
            }
        }
        Ok(true)
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            self.store[v] = None;
        }
    }

    fn identical(&self, a: &RT, b: &RT) -> bool {
        match (self.deref(a), self.deref(b)) {
            (RT::Var(x), RT::Var(y)) => x == y,
            (RT::Int(x), RT::Int(y)) => x == y,
            (RT::Atom(x), RT::Atom(y)) => x == y,
            (RT::Str(f, xs), RT::Str(g, ys)) => {
                f == g
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys.iter()).all(|(x, y)| self.identical(x, y))
            }
            _ => false,
        }
    }

    fn eval(&self, t: &RT) -> Result<i64, SolveError> {
        match self.deref(t) {
            RT::Int(i) => Ok(i),
            RT::Var(_) => Err(SolveError::Instantiation("arithmetic".into())),
            RT::Str(f, args) if args.len() == 2 => {
                let x = self.eval(&args[0])?;
                let y = self.eval(&args[1])?;
                let r = match &*f {
                    "+" => x.checked_add(y),
                    "-" => x.checked_sub(y),
                    "*" => x.checked_mul(y),
                    "//" | "/" => {
                        if y == 0 {
                            return Err(SolveError::Arithmetic("division by zero"));
                        }
                        x.checked_div(y)
                    }
                    "mod" => {
                        if y == 0 {
                            return Err(SolveError::Arithmetic("division by zero"));
                        }
                        x.checked_rem_euclid(y)
                    }
                    _ => return Err(SolveError::NotANumber(self.show(t))),
                };
                r.ok_or(SolveError::Arithmetic("integer overflow"))
            }
            RT::Str(f, args) if args.len() == 1 && &*f == "-" => self
                .eval(&args[0])?
                .checked_neg()
                .ok_or(SolveError::Arithmetic("integer overflow")),
            _ => Err(SolveError::NotANumber(self.show(t))),
        }
    }

    fn show(&self, t: &RT) -> String {
        crate::ast::print_term(&self.resolve(t, &mut BTreeMap::new()))
    }

    fn resolve(&self, t: &RT, names: &mut BTreeMap<usize, String>) -> Term {
        match self.deref(t) {
            RT::Var(v) => {
                let n = names.len() + 1;
                Term::Var(names.entry(v).or_insert_with(|| format!("_{n}")).clone())
            }
            RT::Int(i) => Term::Int(i),
            RT::Atom(a) => Term::Atom(a.to_string()),
            RT::Str(f, args) => Term::Compound(
                f.to_string(),
                args.iter().map(|a| self.resolve(a, names)).collect(),
            ),
        }
    }

    fn push_cp(&mut self, kind: CpKind) {
        self.cps.push(ChoicePoint {
            trail_mark: self.trail.len(),
            store_mark: self.store.len(),
            kind,
        });
        self.counters.choicepoints_created += 1;
        self.counters.max_live_choicepoints =
            self.counters.max_live_choicepoints.max(self.cps.len() as u64);
    }

    fn candidates(&self, pred: usize, args: &[RT]) -> Vec<usize> {
        let clauses = &self.procs[pred].clauses;
        let key = if self.opts.model_indexing {
            args.first().and_then(|a| principal(&self.deref(a)))
        } else {
            None
        };
        (0..clauses.len())
            .filter(|&i| match (&key, &clauses[i].first_functor) {
                (Some(k), Some(f)) => k == f,
                _ => true,
            })
            .collect()
    }

    /// Unifies the head of a clause with the call arguments and returns the
    /// body continuation on success.
    fn try_clause(
        &mut self,
        pred: usize,
        ci: usize,
        args: &[RT],
        cutb: usize,
        next: &Cont,
    ) -> Result<Option<Cont>, Stop> {
        let nvars = self.procs[pred].clauses[ci].nvars;
        let base = self.fresh_vars(nvars);
        for k in 0..args.len() {
            let h = Self::instantiate(&self.procs[pred].clauses[ci].head[k], base);
            if !self.unify(&h, &args[k])? {
                return Ok(None);
            }
        }
        self.counters.inferences += 1;
        if self.counters.inferences > self.opts.budget {
            return Err(Stop::Budget);
        }
        let mut cont = next.clone();
        for g in self.procs[pred].clauses[ci].body.iter().rev() {
            cont = Some(Rc::new(Frame {
                goal: Self::instantiate(g, base),
                cutb,
                next: cont,
            }));
        }
        Ok(Some(cont))
    }

    /// Resumes the most recent choice point above `base`.
    fn backtrack(&mut self, base: usize) -> Result<Option<Cont>, Stop> {
        loop {
            if self.cps.len() <= base {
                return Ok(None);
            }
            let top = self.cps.len() - 1;
            let (tm, sm) = (self.cps[top].trail_mark, self.cps[top].store_mark);
            self.undo(tm);
            self.store.truncate(sm);
            match &mut self.cps[top].kind {
                CpKind::Alt { cont } => {
                    let c = cont.take();
                    self.cps.pop();
                    return Ok(Some(c));
                }
                CpKind::Clauses {
                    pred,
                    args,
                    cands,
                    next,
                    cont,
                } => {
                    let (pred, args, ci, cont) = (*pred, args.clone(), cands[*next], cont.clone());
                    *next += 1;
                    if *next == cands.len() {
                        self.cps.pop();
                    }
                    if let Some(c) = self.try_clause(pred, ci, &args, top, &cont)? {
                        return Ok(Some(c));
                    }
                }
            }
        }
    }

    /// Executes one goal; `None` means failure.
    fn step(&mut self, frame: Rc<Frame>) -> Result<Option<Cont>, Stop> {
        let next = frame.next.clone();
        let cutb = frame.cutb;
        let goal = self.deref(&frame.goal);
        let (name, args): (Rc<str>, Rc<[RT]>) = match &goal {
            RT::Atom(a) => (a.clone(), Rc::from(Vec::new())),
            RT::Str(f, args) => (f.clone(), args.clone()),
            RT::Var(_) => return Err(SolveError::Instantiation("goal".into()).into()),
            RT::Int(i) => return Err(SolveError::NotANumber(format!("{i}")).into()),
        };
        let ok = |b: bool| if b { Some(next.clone()) } else { None };
        Ok(match (&*name, args.len()) {
            ("!", 0) => {
                self.cps.truncate(cutb);
                Some(next)
            }
            ("true", 0) => Some(next),
            ("fail", 0) | ("false", 0) => None,
            (",", 2) => Some(Some(Rc::new(Frame {
                goal: args[0].clone(),
                cutb,
                next: Some(Rc::new(Frame {
                    goal: args[1].clone(),
                    cutb,
                    next,
                })),
            }))),
            (";", 2) => {
                self.push_cp(CpKind::Alt {
                    cont: Some(Rc::new(Frame {
                        goal: args[1].clone(),
                        cutb,
                        next: next.clone(),
                    })),
                });
                Some(Some(Rc::new(Frame {
                    goal: args[0].clone(),
                    cutb,
                    next,
                })))
            }
            ("=", 2) => ok(self.unify(&args[0], &args[1])?),
            ("\\=", 2) => {
                let mark = self.trail.len();
                let r = self.unify(&args[0], &args[1])?;
                self.undo(mark);
                ok(!r)
            }
            ("==", 2) => ok(self.identical(&args[0], &args[1])),
            ("\\==", 2) => ok(!self.identical(&args[0], &args[1])),
            ("<", 2) => ok(self.eval(&args[0])? < self.eval(&args[1])?),
            (">", 2) => ok(self.eval(&args[0])? > self.eval(&args[1])?),
            ("=<", 2) => ok(self.eval(&args[0])? <= self.eval(&args[1])?),
            (">=", 2) => ok(self.eval(&args[0])? >= self.eval(&args[1])?),
            ("=:=", 2) => ok(self.eval(&args[0])? == self.eval(&args[1])?),
            ("=\\=", 2) => ok(self.eval(&args[0])? != self.eval(&args[1])?),
            ("is", 2) => {
                let v = self.eval(&args[1])?;
                ok(self.unify(&args[0], &RT::Int(v))?)
            }
            ("not", 1) | ("\\+", 1) => ok(!self.succeeds_once(&args[0])?),
            (n, arity) => {
                let Some(&pred) = self.index.get(&(n, arity)) else {
                    return Err(SolveError::Undefined(PredId::new(n, arity)).into());
                };
                let cands = self.candidates(pred, &args);
                if cands.is_empty() {
                    return Ok(None);
                }
                let barrier = self.cps.len();
                if cands.len() > 1 {
                    self.push_cp(CpKind::Clauses {
                        pred,
                        args: args.clone(),
                        cands: cands.clone().into(),
                        next: 1,
                        cont: next.clone(),
                    });
                }
                self.try_clause(pred, cands[0], &args, barrier, &next)?
            }
        })
    }

    /// Runs `cont` until it is empty (an answer) or every alternative above
    /// `base` is exhausted.
    fn exec(&mut self, mut cont: Cont, base: usize) -> Result<bool, Stop> {
        loop {
            let Some(frame) = cont else {
                return Ok(true);
            };
            match self.step(frame)? {
                Some(c) => cont = c,
                None => match self.backtrack(base)? {
                    Some(c) => cont = c,
                    None => return Ok(false),
                },
            }
        }
    }

    /// Negation as failure: bindings made while proving `goal` are undone.
    fn succeeds_once(&mut self, goal: &RT) -> Result<bool, Stop> {
        let (tm, sm) = (self.trail.len(), self.store.len());
        let base = self.cps.len();
        let cont = Some(Rc::new(Frame {
            goal: goal.clone(),
            cutb: base,
            next: None,
        }));
        let r = self.exec(cont, base);
        self.cps.truncate(base);
        self.undo(tm);
        self.store.truncate(sm);
        r
    }
}

/// Runs `goal` against `p` and returns every answer in order.
pub fn solve(
    p: &Program,
    goal: &Term,
    opts: &SolveOptions,
) -> Result<(AnswerSequence, CostCounters), SolveError> {
    let mut m = Machine::new(p, *opts);
    let mut vars = BTreeMap::new();
    let g = compile(goal, &mut vars);
    m.fresh_vars(vars.len());
    let qvars: Vec<(String, usize)> = goal
        .vars()
        .into_iter()
        .map(|v| {
            let i = vars[&v];
            (v, i)
        })
        .collect();
    let mut answers = Vec::new();
    let mut found = m.exec(
        Some(Rc::new(Frame {
            goal: g,
            cutb: 0,
            next: None,
        })),
        0,
    );
    let terminator = loop {
        match found {
            Ok(true) => {
                if answers.is_empty() {
                    m.counters.residual_choicepoints_after_first_answer = m.cps.len() as u64;
                }
                let mut names = BTreeMap::new();
                answers.push(Substitution(
                    qvars
                        .iter()
                        .map(|(v, i)| (v.clone(), m.resolve(&RT::Var(*i), &mut names)))
                        .collect(),
                ));
                found = match m.backtrack(0) {
                    Ok(Some(c)) => m.exec(c, 0),
                    Ok(None) => Ok(false),
                    Err(e) => Err(e),
                };
            }
            Ok(false) => break Terminator::Complete,
            Err(Stop::Budget) => break Terminator::BudgetExhausted,
            Err(Stop::Error(e)) => return Err(e),
        }
    };
    Ok((
        AnswerSequence {
            answers,
            terminator,
        },
        m.counters,
    ))
}

/// Calls `pred` on the given argument tuple.
pub fn solve_call(
    p: &Program,
    pred: &str,
    args: &[Term],
    opts: &SolveOptions,
) -> Result<(AnswerSequence, CostCounters), SolveError> {
    solve(p, &Term::compound(pred, args.to_vec()), opts)
}

/// Most general unifier of two terms, fully resolved, or `None` when the
/// terms do not unify.
pub fn unify(t1: &Term, t2: &Term, occur_check: bool) -> Result<Option<BTreeMap<String, Term>>, SolveError> {
    let prog = Program::new();
    let mut m = Machine::new(
        &prog,
        SolveOptions {
            occur_check,
            ..SolveOptions::default()
        },
    );
    let mut vars = BTreeMap::new();
    let a = compile(t1, &mut vars);
    let b = compile(t2, &mut vars);
    m.fresh_vars(vars.len());
    if !m.unify(&a, &b)? {
        return Ok(None);
    }
    let names: BTreeMap<usize, String> = vars.iter().map(|(n, i)| (*i, n.clone())).collect();
    let mut out = BTreeMap::new();
    for (name, &i) in &vars {
        if m.store[i].is_some() {
            let mut nm = names.clone();
            out.insert(name.clone(), m.resolve(&RT::Var(i), &mut nm));
        }
    }
    Ok(Some(out))
}

/// True for a nil-terminated list term.
pub fn is_proper_list(t: &Term) -> bool {
    t.as_list().is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{parse_program, parse_term};

    const EFFACE: &str = "efface(X,[H|T],[H|TEff]) :- efface(X,T,TEff), not(X=H).\nefface(X,[X|T],T).\n";
    const EFFACE_SPEC: &str = "efface(X1,[X1|X2],X3) :- !, X2=X3.\nefface(X1,[X4|X2],[X4|X3]) :- efface(X1,X2,X3).\n";

    fn run(src: &str, q: &str) -> (AnswerSequence, CostCounters) {
        solve(&parse_program(src).unwrap(), &parse_term(q).unwrap(), &SolveOptions::default()).unwrap()
    }

    fn show(a: &AnswerSequence) -> Vec<String> {
        a.answers.iter().map(|s| alloc::format!("{s}")).collect()
    }

    #[test]
    fn efface_answers() {
        let (a, _) = run(EFFACE, "efface(1,[2,1],R)");
        assert_eq!(show(&a), ["{R/[2]}"]);
        assert!(a.is_complete());
        let (b, c) = run(EFFACE_SPEC, "efface(1,[2,1],R)");
        assert_eq!(a, b);
        assert_eq!(c.residual_choicepoints_after_first_answer, 0);
    }

    #[test]
    fn append_fact() {
        let (a, _) = run("append([],L,L).\nappend([H|L1],L2,[H|L3]) :- append(L1,L2,L3).", "append([],[a],L)");
        assert_eq!(show(&a), ["{L/[a]}"]);
    }

    #[test]
    fn multiple_answers_in_order() {
        let (a, _) = run("m(X,[X|_]).\nm(X,[_|T]) :- m(X,T).", "m(X,[1,2,3])");
        assert_eq!(show(&a), ["{X/1}", "{X/2}", "{X/3}"]);
    }

    #[test]
    fn cut_prunes_clauses_and_left_goals() {
        let src = "p(1).\np(2).\nq(X) :- p(X), !.\nq(3).";
        let (a, _) = run(src, "q(X)");
        assert_eq!(show(&a), ["{X/1}"]);
    }

    #[test]
    fn negation_binds_nothing() {
        let (a, _) = run("p(1).", "not(not(p(X)))");
        assert_eq!(show(&a), ["{X/_1}"]);
        let (b, _) = run("p(1).", "\\+ p(2)");
        assert_eq!(b.len(), 1);
    }

    #[test]
    fn arithmetic() {
        let (a, _) = run("len([],0).\nlen([_|T],N) :- len(T,M), N is M+1.", "len([a,b,c],N)");
        assert_eq!(show(&a), ["{N/3}"]);
        let p = parse_program("p(X) :- X < 1.").unwrap();
        assert!(matches!(
            solve(&p, &parse_term("p(_)").unwrap(), &SolveOptions::default()),
            Err(SolveError::Instantiation(_))
        ));
    }

    #[test]
    fn budget() {
        let p = parse_program("loop :- loop.").unwrap();
        let opts = SolveOptions { budget: 100, ..SolveOptions::default() };
        let (a, c) = solve(&p, &parse_term("loop").unwrap(), &opts).unwrap();
        assert_eq!(a.terminator, Terminator::BudgetExhausted);
        assert_eq!(c.inferences, 101);
    }

    #[test]
    fn undefined_predicate() {
        let p = parse_program("p :- q.").unwrap();
        assert!(matches!(
            solve(&p, &parse_term("p").unwrap(), &SolveOptions::default()),
            Err(SolveError::Undefined(_))
        ));
    }

    #[test]
    fn unify_mgu() {
        let x = parse_term("X").unwrap();
        let fy = parse_term("f(Y)").unwrap();
        let s = unify(&x, &fy, true).unwrap().unwrap();
        assert_eq!(s["X"], fy);
        assert!(unify(&x, &parse_term("f(X)").unwrap(), true).unwrap().is_none());
        assert_eq!(
            unify(&x, &parse_term("f(X)").unwrap(), false),
            Err(SolveError::CyclicTerm)
        );
        let s = unify(&parse_term("[H|T]").unwrap(), &parse_term("[1,2]").unwrap(), true)
            .unwrap()
            .unwrap();
        assert_eq!(s["H"], Term::Int(1));
        assert_eq!(s["T"], Term::int_list(&[2]));
    }

    #[test]
    fn residual_choicepoints_grow_for_source_efface() {
        for n in [5usize, 10] {
            let list: Vec<String> = (1..=n).map(|i| alloc::format!("{i}")).collect();
            let q = alloc::format!("efface({n},[{}],R)", list.join(","));
            let (_, c) = run(EFFACE, &q);
            assert_eq!(c.residual_choicepoints_after_first_answer, (n - 1) as u64);
            let (_, c) = run(EFFACE_SPEC, &q);
            assert_eq!(c.residual_choicepoints_after_first_answer, 0);
        }
    }

    #[test]
    fn indexing_suppresses_choicepoints() {
        let src = "append([],L,L).\nappend([H|L1],L2,[H|L3]) :- append(L1,L2,L3).";
        let p = parse_program(src).unwrap();
        let q = parse_term("append([1,2,3],[4],L)").unwrap();
        let (_, plain) = solve(&p, &q, &SolveOptions::default()).unwrap();
        let opts = SolveOptions { model_indexing: true, ..SolveOptions::default() };
        let (_, idx) = solve(&p, &q, &opts).unwrap();
        assert_eq!(plain.residual_choicepoints_after_first_answer, 1);
        assert_eq!(idx.choicepoints_created, 0);
    }
}
