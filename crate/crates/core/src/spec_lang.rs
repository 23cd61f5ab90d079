//! Formal specifications of procedures.
//!
//! ```text
//! efface
//!   in(X:gr, T:list(gr), TEff:var)
//!   out(_, _, list(gr))
//!   srel(TEff_out = T_in-1)
//!   sol(sol =< 1)
//!   sexpr(T)
//! ```
//!
//! Blocks start with a predicate name (optionally `name/arity`) followed by
//! `in(...)` and any of `out(...)`, `srel(...)`, `sol(...)`, `sexpr(...)`.
//! `%` starts a comment.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::abstract_domain::{AbsSubst, LinSys, Mode, SizeVar, TypeExpr};
use crate::abstract_sequence::AbstractSequence;
use crate::ast::PredId;
use crate::linear::{q, Constraint, LinExpr, Q};

/// Argument description token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    Mode(Mode),
    Int,
    Atom,
    List(Box<Pattern>),
}

impl Pattern {
    /// Mode and type described. `list(gr)` is a ground term of type
    /// `list(any)`.
    pub fn mode_type(&self) -> (Mode, TypeExpr) {
        match self {
            Pattern::Mode(m) => (*m, TypeExpr::Any),
            Pattern::Int => (Mode::GROUND, TypeExpr::Int),
            Pattern::Atom => (Mode::GROUND, TypeExpr::Atom),
            Pattern::List(p) => {
                let (m, t) = p.mode_type();
                let m = if m.is_ground() { Mode::GROUND } else { Mode::NOVAR };
                (m, TypeExpr::list(t))
            }
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Mode(m) => f.write_str(m.name()),
            Pattern::Int => f.write_str("int"),
            Pattern::Atom => f.write_str("atom"),
            Pattern::List(p) => write!(f, "list({p})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgSpec {
    pub name: String,
    pub pattern: Pattern,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSpec {
    pub name: String,
    pub args: Vec<ArgSpec>,
    /// Output refinement per argument; `None` is `_`.
    pub out: Vec<Option<Pattern>>,
    /// Over `In(k)` and `Out(k)`.
    pub srel: Vec<Constraint<SizeVar>>,
    /// Over `Sol` and `In(k)`.
    pub sol: Vec<Constraint<SizeVar>>,
    /// Argument whose input size decreases through recursive calls.
    pub sexpr: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("spec line {line}: {msg}")]
pub struct SpecError {
    pub line: usize,
    pub msg: String,
}

impl FormalSpec {
    pub fn pred(&self) -> PredId {
        PredId::new(&self.name, self.args.len())
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn arg_index(&self, name: &str) -> Option<usize> {
        self.args.iter().position(|a| a.name == name)
    }

    /// Index of the induction parameter.
    pub fn sexpr_index(&self) -> Option<usize> {
        self.sexpr.as_ref().and_then(|n| self.arg_index(n))
    }

    fn size_name(&self, v: &SizeVar) -> String {
        match v {
            SizeVar::Sol => "sol".to_string(),
            SizeVar::In(k) => format!("{}_in", self.args[*k].name),
            SizeVar::Out(k) => format!("{}_out", self.args[*k].name),
            other => format!("{other}"),
        }
    }

    pub fn show_constraint(&self, c: &Constraint<SizeVar>) -> String {
        format!("{}", c.map_vars(&|v| self.size_name(v)))
    }
}

impl fmt::Display for FormalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.name)?;
        let ins: Vec<String> = self.args.iter().map(|a| format!("{}:{}", a.name, a.pattern)).collect();
        writeln!(f, "  in({})", ins.join(", "))?;
        if self.out.iter().any(Option::is_some) {
            let outs: Vec<String> = self
                .out
                .iter()
                .map(|o| o.as_ref().map_or("_".to_string(), |p| format!("{p}")))
                .collect();
            writeln!(f, "  out({})", outs.join(", "))?;
        }
        if !self.srel.is_empty() {
            let cs: Vec<String> = self.srel.iter().map(|c| self.show_constraint(c)).collect();
            writeln!(f, "  srel({})", cs.join(", "))?;
        }
        if !self.sol.is_empty() {
            let cs: Vec<String> = self.sol.iter().map(|c| self.show_constraint(c)).collect();
            writeln!(f, "  sol({})", cs.join(", "))?;
        }
        if let Some(s) = &self.sexpr {
            writeln!(f, "  sexpr({s})")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- lexer

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(i128),
    Sym(&'static str),
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, SpecError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let src = raw.split('%').next().unwrap_or("");
        let cs: Vec<char> = src.chars().collect();
        let mut i = 0;
        while i < cs.len() {
            let c = cs[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_alphabetic() || c == '_' {
                let st = i;
                while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(cs[st..i].iter().collect()), line));
            } else if c.is_ascii_digit() {
                let st = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = cs[st..i].iter().collect();
                let v = s.parse().map_err(|_| SpecError {
                    line,
                    msg: format!("number too large: {s}"),
                })?;
                out.push((Tok::Num(v), line));
            } else {
                let rest: String = cs[i..].iter().take(2).collect();
                let sym = ["=<", ">=", "\\="]
                    .into_iter()
                    .find(|s| rest.starts_with(s))
                    .or_else(|| ["(", ")", ",", ":", "/", "+", "-", "*", "=", "<", ">"].into_iter().find(|s| rest.starts_with(s)));
                match sym {
                    Some(s) => {
                        out.push((Tok::Sym(s), line));
                        i += s.len();
                    }
                    None => {
                        return Err(SpecError {
                            line,
                            msg: format!("unexpected character `{c}`"),
                        })
                    }
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------- parser

struct P {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl P {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or(self.toks.last())
            .map_or(1, |(_, l)| *l)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SpecError> {
        Err(SpecError {
            line: self.line(),
            msg: msg.into(),
        })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, s: &'static str) -> Result<(), SpecError> {
        match self.peek() {
            Some(Tok::Sym(x)) if *x == s => {
                self.pos += 1;
                Ok(())
            }
            other => {
                let got = format!("{other:?}");
                self.err(format!("expected `{s}`, found {got}"))
            }
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn ident(&mut self) -> Result<String, SpecError> {
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            other => {
                self.pos -= 1;
                self.err(format!("expected a name, found {other:?}"))
            }
        }
    }

    fn pattern(&mut self) -> Result<Pattern, SpecError> {
        let name = self.ident()?;
        match name.as_str() {
            "int" => Ok(Pattern::Int),
            "atom" => Ok(Pattern::Atom),
            "list" => {
                self.expect("(")?;
                let p = self.pattern()?;
                self.expect(")")?;
                Ok(Pattern::List(Box::new(p)))
            }
            m => match Mode::from_name(m) {
                Some(mode) if m != "bot" => Ok(Pattern::Mode(mode)),
                _ => {
                    self.pos -= 1;
                    self.err(format!("unknown mode or type `{m}`"))
                }
            },
        }
    }

    /// Comma-separated items up to the closing parenthesis.
    fn items<T>(&mut self, mut item: impl FnMut(&mut P) -> Result<T, SpecError>) -> Result<Vec<T>, SpecError> {
        self.expect("(")?;
        let mut out = Vec::new();
        if self.is_sym(")") {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.is_sym(",") {
                self.pos += 1;
            } else {
                self.expect(")")?;
                return Ok(out);
            }
        }
    }

    fn lin_atom(&mut self, args: &[ArgSpec]) -> Result<LinExpr<SizeVar>, SpecError> {
        match self.next() {
            Some(Tok::Num(n)) => {
                if self.is_sym("*") {
                    self.pos += 1;
                    let e = self.lin_atom(args)?;
                    return Ok(e.scale(q(n)));
                }
                Ok(LinExpr::constant(q(n)))
            }
            Some(Tok::Ident(s)) => size_var(&s, args)
                .map(LinExpr::var)
                .or_else(|m| {
                    self.pos -= 1;
                    self.err(m)
                }),
            Some(Tok::Sym("(")) => {
                let e = self.lin_expr(args)?;
                self.expect(")")?;
                Ok(e)
            }
            Some(Tok::Sym("-")) => Ok(self.lin_atom(args)?.scale(-Q::from_integer(1))),
            other => {
                self.pos -= 1;
                self.err(format!("expected a size expression, found {other:?}"))
            }
        }
    }

    fn lin_expr(&mut self, args: &[ArgSpec]) -> Result<LinExpr<SizeVar>, SpecError> {
        let mut e = self.lin_atom(args)?;
        loop {
            if self.is_sym("+") {
                self.pos += 1;
                e = e.plus(&self.lin_atom(args)?);
            } else if self.is_sym("-") {
                self.pos += 1;
                e = e.minus(&self.lin_atom(args)?);
            } else {
                return Ok(e);
            }
        }
    }

    fn constraint(&mut self, args: &[ArgSpec]) -> Result<Constraint<SizeVar>, SpecError> {
        let l = self.lin_expr(args)?;
        let op = match self.next() {
            Some(Tok::Sym(s)) if ["=<", "<", "=", ">=", ">"].contains(&s) => s,
            other => {
                self.pos -= 1;
                return self.err(format!("expected a comparison, found {other:?}"));
            }
        };
        let r = self.lin_expr(args)?;
        Ok(match op {
            "=<" => Constraint::le(l, r),
            "<" => Constraint::lt(l, r),
            "=" => Constraint::eq(l, r),
            ">=" => Constraint::ge(l, r),
            _ => Constraint::lt(r, l),
        }
        .normalized())
    }
}

fn size_var(s: &str, args: &[ArgSpec]) -> Result<SizeVar, String> {
    if s == "sol" {
        return Ok(SizeVar::Sol);
    }
    let (base, out) = if let Some(b) = s.strip_suffix("_in") {
        (b, false)
    } else if let Some(b) = s.strip_suffix("_out") {
        (b, true)
    } else {
        return Err(format!("size variable `{s}` must end in `_in` or `_out`"));
    };
    let k = args
        .iter()
        .position(|a| a.name == base)
        .ok_or_else(|| format!("undeclared argument `{base}` in `{s}`"))?;
    Ok(if out { SizeVar::Out(k) } else { SizeVar::In(k) })
}

/// Parses every specification block of a spec file.
pub fn parse_specs(text: &str) -> Result<Vec<FormalSpec>, SpecError> {
    let mut p = P { toks: lex(text)?, pos: 0 };
    let mut specs = Vec::new();
    while p.peek().is_some() {
        let name = p.ident()?;
        let mut arity = None;
        if p.is_sym("/") {
            p.pos += 1;
            match p.next() {
                Some(Tok::Num(n)) => arity = Some(n as usize),
                _ => return p.err("expected an arity after `/`"),
            }
        }
        let mut spec = FormalSpec {
            name,
            args: Vec::new(),
            out: Vec::new(),
            srel: Vec::new(),
            sol: Vec::new(),
            sexpr: None,
        };
        let mut seen = BTreeSet::new();
        while let (Some(Tok::Ident(kw)), Some((Tok::Sym("("), _))) = (p.peek().cloned(), p.toks.get(p.pos + 1)) {
            if !seen.insert(kw.clone()) {
                return p.err(format!("duplicate `{kw}` section"));
            }
            if kw != "in" && spec.args.is_empty() && seen.len() == 1 {
                return p.err("a spec must start with `in(...)`");
            }
            p.pos += 1;
            match kw.as_str() {
                "in" => {
                    spec.args = p.items(|p| {
                        let name = p.ident()?;
                        p.expect(":")?;
                        Ok(ArgSpec {
                            name,
                            pattern: p.pattern()?,
                        })
                    })?;
                    let mut names = BTreeSet::new();
                    if let Some(a) = spec.args.iter().find(|a| !names.insert(a.name.clone())) {
                        return p.err(format!("argument `{}` declared twice", a.name));
                    }
                }
                "out" => {
                    let args = spec.args.clone();
                    let outs = p.items(|p| {
                        if matches!(p.peek(), Some(Tok::Ident(s)) if s == "_") {
                            p.pos += 1;
                            return Ok(None);
                        }
                        // optional `Name:` prefix
                        if let (Some(Tok::Ident(n)), Some((Tok::Sym(":"), _))) = (p.peek().cloned(), p.toks.get(p.pos + 1)) {
                            if !args.iter().any(|a| a.name == n) {
                                return p.err(format!("undeclared argument `{n}`"));
                            }
                            p.pos += 2;
                        }
                        p.pattern().map(Some)
                    })?;
                    if outs.len() != spec.args.len() {
                        return p.err(format!(
                            "arity mismatch: in has {} arguments, out has {}",
                            spec.args.len(),
                            outs.len()
                        ));
                    }
                    spec.out = outs;
                }
                "srel" => {
                    let args = spec.args.clone();
                    spec.srel = p.items(|p| p.constraint(&args))?;
                    if spec.srel.iter().any(|c| c.expr.coeffs.contains_key(&SizeVar::Sol)) {
                        return p.err("`sol` may only appear in `sol(...)`");
                    }
                }
                "sol" => {
                    let args = spec.args.clone();
                    spec.sol = p.items(|p| p.constraint(&args))?;
                    if spec.sol.iter().any(|c| c.expr.coeffs.keys().any(|v| matches!(v, SizeVar::Out(_)))) {
                        return p.err("`sol(...)` may only mention `sol` and input sizes");
                    }
                }
                "sexpr" => {
                    let v = p.items(|p| p.ident())?;
                    if v.len() != 1 || spec.arg_index(&v[0]).is_none() {
                        return p.err("`sexpr` takes one declared argument name");
                    }
                    spec.sexpr = Some(v[0].clone());
                }
                other => return p.err(format!("unknown section `{other}`")),
            }
        }
        if !seen.contains("in") {
            return p.err(format!("spec for `{}` has no `in(...)`", spec.name));
        }
        if let Some(n) = arity {
            if n != spec.args.len() {
                return p.err(format!("arity mismatch: {}/{} declares {} arguments", spec.name, n, spec.args.len()));
            }
        }
        if spec.out.is_empty() {
            spec.out = alloc::vec![None; spec.args.len()];
        }
        specs.push(spec);
    }
    Ok(specs)
}

/// Positional variable name of argument `k` (0-based).
pub fn arg_var(k: usize) -> String {
    format!("X{}", k + 1)
}

/// Input description of a spec over `X1..Xn`. Variable arguments are
/// distinct and share with nothing; other possibly nonground arguments may
/// share with each other. `In(k)` is tied to the size of argument `k`.
pub fn input_substitution(s: &FormalSpec) -> AbsSubst {
    let mut beta = AbsSubst::new();
    for (k, a) in s.args.iter().enumerate() {
        let (m, t) = a.pattern.mode_type();
        beta.add_var(&arg_var(k), m, t, m.is_var() || m.is_ground());
    }
    for (k, a) in s.args.iter().enumerate() {
        for (j, b) in s.args.iter().enumerate().skip(k + 1) {
            let (ma, mb) = (a.pattern.mode_type().0, b.pattern.mode_type().0);
            if !ma.is_var() && !mb.is_var() && !ma.is_ground() && !mb.is_ground() {
                beta.allow_sharing(&arg_var(k), &arg_var(j));
            }
        }
    }
    let mut beta = beta.project(&(0..s.arity()).map(arg_var).collect::<Vec<_>>());
    for k in 0..s.arity() {
        if let Some(e) = beta.size_of_var(&arg_var(k)) {
            beta.add_constraint(Constraint::eq(LinExpr::var(SizeVar::In(k)), e));
        }
    }
    beta
}

/// Output description: the instantiation closure of the input refined by
/// `out(...)`, with `Out(k)` tied to argument sizes.
pub fn output_substitution(s: &FormalSpec, beta_in: &AbsSubst) -> AbsSubst {
    let vars: Vec<String> = (0..s.arity()).map(arg_var).collect();
    let mut out = beta_in.instantiate_vars(&vars);
    for (k, o) in s.out.iter().enumerate() {
        if let Some(p) = o {
            let (m, t) = p.mode_type();
            let mut r = AbsSubst::new();
            r.add_var(&arg_var(k), m, t, m.is_ground());
            out = out.glb(&r);
        }
    }
    for k in 0..s.arity() {
        if let Some(e) = out.size_of_var(&arg_var(k)) {
            out.add_constraint(Constraint::eq(LinExpr::var(SizeVar::Out(k)), e));
        }
    }
    out
}

pub fn spec_to_abstract_sequence(s: &FormalSpec) -> AbstractSequence {
    let beta_in = input_substitution(s);
    let beta_out = output_substitution(s, &beta_in);
    let untouched = s
        .args
        .iter()
        .enumerate()
        .filter(|(_, a)| a.pattern.mode_type().0.is_ground())
        .map(|(k, _)| arg_var(k))
        .collect();
    let mut e_sol = LinSys::from_constraints(s.sol.iter().cloned());
    e_sol.add(Constraint::ge(LinExpr::var(SizeVar::Sol), LinExpr::zero()));
    AbstractSequence {
        beta_ref: beta_in.clone(),
        beta_in,
        beta_fails: Vec::new(),
        untouched,
        beta_out,
        e_ref_out: LinSys::from_constraints(s.srel.iter().cloned()),
        e_sol,
    }
}

/// Checks a parsed spec against the arity of the procedure it describes.
pub fn check_arity(s: &FormalSpec, arity: usize) -> Result<(), SpecError> {
    if s.arity() == arity {
        Ok(())
    } else {
        Err(SpecError {
            line: 0,
            msg: format!("arity mismatch: spec for {} has {} arguments, procedure has {arity}", s.name, s.arity()),
        })
    }
}

/// Normalizes constraints so that specs compare structurally.
pub fn same_constraints(a: &[Constraint<SizeVar>], b: &[Constraint<SizeVar>]) -> bool {
    let na: BTreeSet<_> = a.iter().cloned().map(Constraint::normalized).collect();
    let nb: BTreeSet<_> = b.iter().cloned().map(Constraint::normalized).collect();
    na == nb
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPEC1: &str = "efface\n  in(X:gr,T:list(gr),TEff:var)\n  out(_, _, list(gr))\n  srel(TEff_out = T_in-1)\n  sol(sol =< 1)\n  sexpr(T)\n";
    const SPEC2: &str = "efface\n  in(X:gr,T:any,TEff:list(gr))\n  out(_, list(gr), _)\n  srel(TEff_in = T_out-1)\n  sol(sol =< TEff_in+1)\n  sexpr(TEff)\n";

    #[test]
    fn efface_specs_parse() {
        let s = &parse_specs(SPEC1).unwrap()[0];
        assert_eq!(s.pred(), PredId::new("efface", 3));
        assert_eq!(s.args[1].pattern.mode_type(), (Mode::GROUND, TypeExpr::list(TypeExpr::Any)));
        assert_eq!(s.args[2].pattern.mode_type().0, Mode::VAR);
        assert_eq!(s.out[2], Some(Pattern::List(Box::new(Pattern::Mode(Mode::GROUND)))));
        assert_eq!(s.sexpr.as_deref(), Some("T"));
        assert!(same_constraints(
            &s.srel,
            &[Constraint::eq(
                LinExpr::var(SizeVar::Out(2)),
                LinExpr::var(SizeVar::In(1)).plus_const(q(-1))
            )]
        ));
        let b = spec_to_abstract_sequence(s);
        assert!(b.deterministic());

        let s2 = &parse_specs(SPEC2).unwrap()[0];
        assert_eq!(s2.sexpr_index(), Some(2));
        assert!(!spec_to_abstract_sequence(s2).deterministic());
    }

    #[test]
    fn minimal_block_defaults() {
        let specs = parse_specs("p in(X:gr) sol(sol=<1)\nq/2 in(A:any,B:var)").unwrap();
        assert_eq!(specs.len(), 2);
        assert_eq!(specs[0].out, alloc::vec![None]);
        assert!(specs[0].srel.is_empty() && specs[0].sexpr.is_none());
        assert_eq!(specs[1].pred(), PredId::new("q", 2));
    }

    #[test]
    fn errors_are_reported() {
        let e = parse_specs("p in(X:foo)").unwrap_err();
        assert!(e.msg.contains("unknown mode or type"), "{e}");
        let e = parse_specs("p in(X:gr) out(_,_)").unwrap_err();
        assert!(e.msg.contains("arity mismatch"), "{e}");
        let e = parse_specs("p in(X:gr) sol(sol =< Y_in)").unwrap_err();
        assert!(e.msg.contains("undeclared"), "{e}");
        let e = parse_specs("p/2 in(X:gr)").unwrap_err();
        assert!(e.msg.contains("arity mismatch"), "{e}");
    }

    #[test]
    fn print_parse_round_trip() {
        for text in [SPEC1, SPEC2, "p in(X:int,Y:list(list(atom)),Z:gv) sol(sol = 1, sol >= 0)"] {
            let s = parse_specs(text).unwrap();
            let printed = format!("{}", s[0]);
            let again = parse_specs(&printed).unwrap();
            assert_eq!(s[0].args, again[0].args);
            assert_eq!(s[0].out, again[0].out);
            assert!(same_constraints(&s[0].srel, &again[0].srel), "{printed}");
            assert!(same_constraints(&s[0].sol, &again[0].sol), "{printed}");
            assert_eq!(s[0].sexpr, again[0].sexpr);
        }
    }

    #[test]
    fn sequence_invariants() {
        for text in [SPEC1, SPEC2] {
            let b = spec_to_abstract_sequence(&parse_specs(text).unwrap()[0]);
            assert!(b.beta_ref.leq(&b.beta_in));
            assert!(!b.beta_out.is_bottom());
        }
        let b = spec_to_abstract_sequence(&parse_specs("p in(X:gr) sol(sol=1)").unwrap()[0]);
        assert!(b.fully_deterministic());
    }

    #[test]
    fn output_refines_instantiated_input() {
        let s = &parse_specs(SPEC1).unwrap()[0];
        let b = spec_to_abstract_sequence(s);
        assert_eq!(b.beta_out.mode_of("X3"), Mode::GROUND);
        assert_eq!(b.beta_out.type_of("X3"), TypeExpr::list(TypeExpr::Any));
        assert!(b.untouched.contains("X1") && b.untouched.contains("X2"));
        assert!(!b.untouched.contains("X3"));
    }
}
