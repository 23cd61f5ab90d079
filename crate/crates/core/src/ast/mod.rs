//! Concrete syntax of the accepted Prolog subset.
//!
//! Clauses keep their head arguments as general terms and their body as a
//! sequence of [`Literal`]s. A body straight out of the parser holds
//! `Cut` and `Goal` literals only; [`crate::normal_form`] rewrites it into
//! the flat literal forms.

mod parse;
mod print;

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

pub use parse::{parse_program, parse_term, ParseError};
pub use print::{print_clause, print_literal, print_program, print_term};

/// A Prolog term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Int(i64),
    Atom(String),
    /// Functor name and arguments; the argument list is never empty.
    Compound(String, Vec<Term>),
}

pub const NIL: &str = "[]";
pub const CONS: &str = ".";

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn atom(name: &str) -> Term {
        Term::Atom(name.to_string())
    }

    pub fn compound(name: &str, args: Vec<Term>) -> Term {
        if args.is_empty() {
            Term::Atom(name.to_string())
        } else {
            Term::Compound(name.to_string(), args)
        }
    }

    pub fn nil() -> Term {
        Term::Atom(NIL.to_string())
    }

    pub fn cons(head: Term, tail: Term) -> Term {
        Term::Compound(CONS.to_string(), alloc::vec![head, tail])
    }

    /// Builds `[items... | tail]`.
    pub fn list_with_tail(items: Vec<Term>, tail: Term) -> Term {
        items
            .into_iter()
            .rev()
            .fold(tail, |acc, item| Term::cons(item, acc))
    }

    pub fn list(items: Vec<Term>) -> Term {
        Term::list_with_tail(items, Term::nil())
    }

    pub fn int_list(items: &[i64]) -> Term {
        Term::list(items.iter().map(|&i| Term::Int(i)).collect())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    /// Principal functor for atomic and compound terms.
    pub fn functor(&self) -> Option<Functor> {
        match self {
            Term::Var(_) => None,
            Term::Int(i) => Some(Functor::Int(*i)),
            Term::Atom(a) => Some(Functor::Atom(a.clone(), 0)),
            Term::Compound(f, args) => Some(Functor::Atom(f.clone(), args.len())),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Compound(_, args) => args,
            _ => &[],
        }
    }

    /// Variables in left-to-right order of first occurrence.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Compound(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            _ => {}
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
            _ => true,
        }
    }

    /// Elements and tail of a (possibly partial) list spine.
    pub fn list_spine(&self) -> (Vec<&Term>, &Term) {
        let mut items = Vec::new();
        let mut cur = self;
        while let Term::Compound(f, args) = cur {
            if f != CONS || args.len() != 2 {
                break;
            }
            items.push(&args[0]);
            cur = &args[1];
        }
        (items, cur)
    }

    /// Elements of a nil-terminated list.
    pub fn as_list(&self) -> Option<Vec<&Term>> {
        let (items, tail) = self.list_spine();
        match tail {
            Term::Atom(a) if a == NIL => Some(items),
            _ => None,
        }
    }

    /// Applies a variable renaming/substitution.
    pub fn substitute(&self, f: &impl Fn(&str) -> Option<Term>) -> Term {
        match self {
            Term::Var(v) => f(v).unwrap_or_else(|| self.clone()),
            Term::Compound(name, args) => {
                Term::Compound(name.clone(), args.iter().map(|a| a.substitute(f)).collect())
            }
            _ => self.clone(),
        }
    }

    /// Number of function-symbol occurrences.
    pub fn term_size(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Compound(_, args) => 1 + args.iter().map(Term::term_size).sum::<usize>(),
            _ => 1,
        }
    }
}

/// The principal functor of a non-variable term; integer constants are
/// their own functor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Functor {
    Atom(String, usize),
    Int(i64),
}

impl Functor {
    pub fn arity(&self) -> usize {
        match self {
            Functor::Atom(_, n) => *n,
            Functor::Int(_) => 0,
        }
    }

    pub fn nil() -> Functor {
        Functor::Atom(NIL.to_string(), 0)
    }

    pub fn cons() -> Functor {
        Functor::Atom(CONS.to_string(), 2)
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, Functor::Atom(n, 0) if n == NIL)
    }

    pub fn is_cons(&self) -> bool {
        matches!(self, Functor::Atom(n, 2) if n == CONS)
    }

    /// Builds the term `f(args)`.
    pub fn apply(&self, args: Vec<Term>) -> Term {
        match self {
            Functor::Int(i) => Term::Int(*i),
            Functor::Atom(name, _) => Term::compound(name, args),
        }
    }
}

impl fmt::Display for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Functor::Int(i) => write!(f, "{i}"),
            Functor::Atom(name, n) => write!(f, "{name}/{n}"),
        }
    }
}

/// A body literal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    /// `X = Y`
    UnifyVarVar(String, String),
    /// `X = f(Y1, ..., Yn)`
    UnifyVarFunctor(String, Functor, Vec<String>),
    /// `p(Y1, ..., Yn)`, including builtins such as `<` or `is`.
    Call(String, Vec<String>),
    Cut,
    Not(Box<Literal>),
    /// Arbitrary goal; only present before normalisation.
    Goal(Term),
}

use alloc::boxed::Box;

impl Literal {
    /// The goal term this literal executes.
    pub fn to_term(&self) -> Term {
        match self {
            Literal::UnifyVarVar(x, y) => {
                Term::compound("=", alloc::vec![Term::var(x), Term::var(y)])
            }
            Literal::UnifyVarFunctor(x, f, args) => Term::compound(
                "=",
                alloc::vec![
                    Term::var(x),
                    f.apply(args.iter().map(|a| Term::var(a)).collect())
                ],
            ),
            Literal::Call(name, args) => {
                Term::compound(name, args.iter().map(|a| Term::var(a)).collect())
            }
            Literal::Cut => Term::atom("!"),
            Literal::Not(inner) => Term::compound("not", alloc::vec![inner.to_term()]),
            Literal::Goal(t) => t.clone(),
        }
    }

    /// Variables of the literal in order of first occurrence.
    pub fn vars(&self) -> Vec<String> {
        self.to_term().vars()
    }

    pub fn is_cut(&self) -> bool {
        matches!(self, Literal::Cut)
    }

    pub fn is_unification(&self) -> bool {
        matches!(
            self,
            Literal::UnifyVarVar(..) | Literal::UnifyVarFunctor(..)
        )
    }
}

/// Predicate name and arity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PredId {
    pub name: String,
    pub arity: usize,
}

impl PredId {
    pub fn new(name: &str, arity: usize) -> PredId {
        PredId {
            name: name.to_string(),
            arity,
        }
    }
}

impl fmt::Display for PredId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

impl core::str::FromStr for PredId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, arity) = s
            .rsplit_once('/')
            .ok_or_else(|| alloc::format!("expected name/arity, got `{s}`"))?;
        let arity = arity
            .parse()
            .map_err(|_| alloc::format!("bad arity in `{s}`"))?;
        Ok(PredId::new(name, arity))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub name: String,
    pub args: Vec<Term>,
    pub body: Vec<Literal>,
}

impl Clause {
    pub fn new(name: &str, args: Vec<Term>, body: Vec<Literal>) -> Clause {
        Clause {
            name: name.to_string(),
            args,
            body,
        }
    }

    pub fn pred(&self) -> PredId {
        PredId::new(&self.name, self.args.len())
    }

    pub fn head(&self) -> Term {
        Term::compound(&self.name, self.args.clone())
    }

    /// Variables of head and body in order of first occurrence.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        for a in &self.args {
            a.collect_vars(&mut out);
        }
        for l in &self.body {
            l.to_term().collect_vars(&mut out);
        }
        out
    }

    pub fn cut_positions(&self) -> Vec<usize> {
        self.body
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_cut())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn has_cut(&self) -> bool {
        self.body.iter().any(Literal::is_cut)
    }

    /// Renames variables through `f`, leaving unmapped names unchanged.
    pub fn rename(&self, f: &impl Fn(&str) -> Option<String>) -> Clause {
        let sub = |v: &str| f(v).map(Term::Var);
        Clause {
            name: self.name.clone(),
            args: self.args.iter().map(|a| a.substitute(&sub)).collect(),
            body: self.body.iter().map(|l| rename_literal(l, f)).collect(),
        }
    }
}

fn rename_literal(l: &Literal, f: &impl Fn(&str) -> Option<String>) -> Literal {
    let r = |v: &String| f(v).unwrap_or_else(|| v.clone());
    match l {
        Literal::UnifyVarVar(x, y) => Literal::UnifyVarVar(r(x), r(y)),
        Literal::UnifyVarFunctor(x, fun, args) => {
            Literal::UnifyVarFunctor(r(x), fun.clone(), args.iter().map(r).collect())
        }
        Literal::Call(name, args) => Literal::Call(name.clone(), args.iter().map(r).collect()),
        Literal::Cut => Literal::Cut,
        Literal::Not(inner) => Literal::Not(Box::new(rename_literal(inner, f))),
        Literal::Goal(t) => Literal::Goal(t.substitute(&|v| f(v).map(Term::Var))),
    }
}

/// A nonempty, ordered sequence of clauses for one predicate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Procedure {
    pub pred: PredId,
    pub clauses: Vec<Clause>,
}

impl Procedure {
    pub fn new(pred: PredId, clauses: Vec<Clause>) -> Procedure {
        Procedure { pred, clauses }
    }

    pub fn calls(&self) -> Vec<PredId> {
        let mut out = Vec::new();
        for c in &self.clauses {
            for l in &c.body {
                collect_calls(l, &mut out);
            }
        }
        out
    }
}

fn collect_calls(l: &Literal, out: &mut Vec<PredId>) {
    match l {
        Literal::Call(name, args) => {
            let p = PredId::new(name, args.len());
            if !out.contains(&p) {
                out.push(p);
            }
        }
        Literal::Not(inner) => collect_calls(inner, out),
        _ => {}
    }
}

/// Procedures in order of first definition.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Program {
    pub procedures: Vec<Procedure>,
}

impl Program {
    pub fn new() -> Program {
        Program::default()
    }

    pub fn get(&self, pred: &PredId) -> Option<&Procedure> {
        self.procedures.iter().find(|p| &p.pred == pred)
    }

    pub fn get_mut(&mut self, pred: &PredId) -> Option<&mut Procedure> {
        self.procedures.iter_mut().find(|p| &p.pred == pred)
    }

    /// Appends a clause to its procedure, creating the procedure if needed.
    pub fn add_clause(&mut self, clause: Clause) {
        let pred = clause.pred();
        match self.get_mut(&pred) {
            Some(p) => p.clauses.push(clause),
            None => self.procedures.push(Procedure::new(pred, alloc::vec![clause])),
        }
    }

    /// Replaces (or appends) a procedure.
    pub fn insert(&mut self, proc_: Procedure) {
        match self.get_mut(&proc_.pred) {
            Some(p) => *p = proc_,
            None => self.procedures.push(proc_),
        }
    }

    pub fn preds(&self) -> impl Iterator<Item = &PredId> {
        self.procedures.iter().map(|p| &p.pred)
    }

    pub fn clause_count(&self) -> usize {
        self.procedures.iter().map(|p| p.clauses.len()).sum()
    }
}

/// Builtins understood by the interpreter and the analyser.
pub const BUILTINS: &[(&str, usize)] = &[
    ("=", 2),
    ("\\=", 2),
    ("==", 2),
    ("\\==", 2),
    ("<", 2),
    (">", 2),
    ("=<", 2),
    (">=", 2),
    ("=:=", 2),
    ("=\\=", 2),
    ("is", 2),
    ("true", 0),
    ("fail", 0),
    ("false", 0),
    ("not", 1),
    ("\\+", 1),
];

pub fn is_builtin(name: &str, arity: usize) -> bool {
    BUILTINS.iter().any(|&(n, a)| n == name && a == arity)
}

/// Arithmetic comparison builtins.
pub fn is_comparison(name: &str) -> bool {
    matches!(name, "<" | ">" | "=<" | ">=" | "=:=" | "=\\=")
}

/// Builtins that never bind a variable.
pub fn is_test_builtin(name: &str, arity: usize) -> bool {
    arity == 2 && (is_comparison(name) || matches!(name, "==" | "\\==" | "\\="))
}
