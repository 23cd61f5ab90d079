//! Tokenizer and operator-precedence parser for the accepted subset.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Clause, Literal, Program, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    QName(String),
    Var(String),
    Int(i64),
    Punct(char),
    End,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
    /// No layout text between this token and the previous one.
    glued: bool,
}

const SYMBOL_CHARS: &str = "+-*/\\^<>=~:.?@#&$";

pub(crate) fn is_symbol_char(c: char) -> bool {
    SYMBOL_CHARS.contains(c)
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    _src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
            _src: src,
        }
    }

    fn peek(&self, off: usize) -> Option<char> {
        self.chars.get(self.pos + off).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek(0)?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn err(&self, line: usize, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            line,
            col,
            msg: msg.into(),
        }
    }

    /// Skips layout and comments; returns whether anything was skipped.
    fn skip_layout(&mut self) -> Result<bool, ParseError> {
        let start = self.pos;
        loop {
            match self.peek(0) {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('%') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                Some('/') if self.peek(1) == Some('*') => {
                    let (l, c) = (self.line, self.col);
                    self.bump();
                    self.bump();
                    loop {
                        match self.bump() {
                            None => return Err(self.err(l, c, "unterminated block comment")),
                            Some('*') if self.peek(0) == Some('/') => {
                                self.bump();
                                break;
                            }
                            _ => {}
                        }
                    }
                }
                _ => break,
            }
        }
        Ok(self.pos != start)
    }

    fn tokens(mut self) -> Result<Vec<Token>, ParseError> {
        let mut out = Vec::new();
        loop {
            let skipped = self.skip_layout()?;
            let (line, col) = (self.line, self.col);
            let glued = !skipped && !out.is_empty();
            let Some(c) = self.peek(0) else {
                out.push(Token {
                    tok: Tok::Eof,
                    line,
                    col,
                    glued,
                });
                return Ok(out);
            };
            let tok = if c.is_ascii_digit() {
                let mut s = String::new();
                while let Some(d) = self.peek(0).filter(char::is_ascii_digit) {
                    s.push(d);
                    self.bump();
                }
                let v = s
                    .parse::<i64>()
                    .map_err(|_| self.err(line, col, "integer literal out of range"))?;
                Tok::Int(v)
            } else if c == '_' || c.is_uppercase() {
                Tok::Var(self.ident())
            } else if c.is_alphabetic() {
                Tok::Name(self.ident())
            } else if c == '\'' {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(self.err(line, col, "unterminated quoted atom")),
                        Some('\'') if self.peek(0) == Some('\'') => {
                            self.bump();
                            s.push('\'');
                        }
                        Some('\'') => break,
                        Some('\\') => match self.bump() {
                            Some('n') => s.push('\n'),
                            Some('t') => s.push('\t'),
                            Some('\\') => s.push('\\'),
                            Some('\'') => s.push('\''),
                            _ => return Err(self.err(line, col, "bad escape in quoted atom")),
                        },
                        Some(ch) => s.push(ch),
                    }
                }
                Tok::QName(s)
            } else if c == '.'
                && self
                    .peek(1)
                    .map_or(true, |n| n.is_whitespace() || n == '%')
            {
                self.bump();
                Tok::End
            } else if is_symbol_char(c) {
                let mut s = String::new();
                while let Some(d) = self.peek(0).filter(|&d| is_symbol_char(d)) {
                    if d == '.' && s.len() > 0 && self.peek(1).map_or(true, char::is_whitespace)
                    {
                        break;
                    }
                    s.push(d);
                    self.bump();
                }
                Tok::Name(s)
            } else {
                self.bump();
                match c {
                    '!' | ';' => Tok::Name(c.to_string()),
                    '(' | ')' | '[' | ']' | '|' | ',' => Tok::Punct(c),
                    _ => return Err(self.err(line, col, format!("unexpected character `{c}`"))),
                }
            };
            out.push(Token {
                tok,
                line,
                col,
                glued,
            });
        }
    }

    fn ident(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek(0).filter(|c| c.is_alphanumeric() || *c == '_') {
            s.push(c);
            self.bump();
        }
        s
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum OpType {
    Xfx,
    Xfy,
    Yfx,
    Fy,
}

pub(crate) fn infix_op(name: &str) -> Option<(u32, OpType)> {
    Some(match name {
        ":-" => (1200, OpType::Xfx),
        ";" => (1100, OpType::Xfy),
        "->" => (1050, OpType::Xfy),
        "," => (1000, OpType::Xfy),
        "=" | "\\=" | "==" | "\\==" | "<" | ">" | "=<" | ">=" | "is" | "=:=" | "=\\=" => {
            (700, OpType::Xfx)
        }
        "+" | "-" => (500, OpType::Yfx),
        "*" | "/" | "//" | "mod" => (400, OpType::Yfx),
        _ => return None,
    })
}

pub(crate) fn prefix_op(name: &str) -> Option<(u32, OpType)> {
    match name {
        "\\+" => Some((900, OpType::Fy)),
        "-" => Some((200, OpType::Fy)),
        _ => None,
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    fresh: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_at(&self, t: &Token, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: t.line,
            col: t.col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        let t = self.next();
        if t.tok == Tok::Punct(c) {
            Ok(())
        } else {
            Err(self.err_at(&t, format!("expected `{c}`")))
        }
    }

    fn starts_term(t: &Tok) -> bool {
        match t {
            Tok::Name(n) => infix_op(n).is_none() || prefix_op(n).is_some(),
            Tok::QName(_) | Tok::Var(_) | Tok::Int(_) => true,
            Tok::Punct(c) => matches!(c, '(' | '['),
            _ => false,
        }
    }

    fn parse(&mut self, max: u32) -> Result<Term, ParseError> {
        let (mut left, mut left_prec) = self.primary(max)?;
        loop {
            let t = self.peek().clone();
            let name = match &t.tok {
                Tok::Name(n) => n.clone(),
                Tok::Punct(',') => ",".to_string(),
                _ => break,
            };
            let Some((p, ty)) = infix_op(&name) else {
                break;
            };
            let (lmax, rmax) = match ty {
                OpType::Xfx => (p - 1, p - 1),
                OpType::Xfy => (p - 1, p),
                _ => (p, p - 1),
            };
            if p > max || left_prec > lmax {
                break;
            }
            if name == "->" {
                return Err(self.err_at(&t, "unsupported construct `->`"));
            }
            self.next();
            let right = self.parse(rmax)?;
            left = Term::Compound(name, alloc::vec![left, right]);
            left_prec = p;
        }
        Ok(left)
    }

    fn primary(&mut self, max: u32) -> Result<(Term, u32), ParseError> {
        let t = self.next();
        match t.tok.clone() {
            Tok::Int(i) => Ok((Term::Int(i), 0)),
            Tok::Var(v) => {
                if v == "_" {
                    self.fresh += 1;
                    Ok((Term::Var(format!("_G{}", self.fresh)), 0))
                } else {
                    Ok((Term::Var(v), 0))
                }
            }
            Tok::Punct('(') => {
                let inner = self.parse(1200)?;
                self.expect(')')?;
                Ok((inner, 0))
            }
            Tok::Punct('[') => {
                if self.peek().tok == Tok::Punct(']') {
                    self.next();
                    return self.after_name(super::NIL.to_string(), &t);
                }
                let mut items = alloc::vec![self.parse(999)?];
                while self.peek().tok == Tok::Punct(',') {
                    self.next();
                    items.push(self.parse(999)?);
                }
                let tail = if self.peek().tok == Tok::Punct('|') {
                    self.next();
                    self.parse(999)?
                } else {
                    Term::nil()
                };
                self.expect(']')?;
                Ok((Term::list_with_tail(items, tail), 0))
            }
            Tok::QName(n) => self.after_name(n, &t),
            Tok::Name(n) => {
                let nt = self.peek().clone();
                if n == "-" && nt.glued {
                    if let Tok::Int(i) = nt.tok {
                        self.next();
                        return Ok((Term::Int(-i), 0));
                    }
                }
                if nt.tok == Tok::Punct('(') && nt.glued {
                    return self.after_name(n, &t);
                }
                if n == "->" {
                    return Err(self.err_at(&t, "unsupported construct `->`"));
                }
                if let Some((p, _)) = prefix_op(&n) {
                    if Self::starts_term(&nt.tok) && !matches!(&nt.tok, Tok::Name(m) if infix_op(m).is_some() && prefix_op(m).is_none())
                    {
                        let p = p.min(max);
                        let arg = self.parse(p)?;
                        return Ok((Term::Compound(n, alloc::vec![arg]), p));
                    }
                }
                Ok((Term::Atom(n), 0))
            }
            Tok::End => Err(self.err_at(&t, "unexpected end of clause")),
            Tok::Eof => Err(self.err_at(&t, "unexpected end of input")),
            Tok::Punct(c) => Err(self.err_at(&t, format!("unexpected `{c}`"))),
        }
    }

    /// An atom name, possibly followed by a parenthesised argument list.
    fn after_name(&mut self, name: String, start: &Token) -> Result<(Term, u32), ParseError> {
        let nt = self.peek().clone();
        if nt.tok != Tok::Punct('(') || !nt.glued {
            return Ok((Term::Atom(name), 0));
        }
        self.next();
        if self.peek().tok == Tok::Punct(')') {
            return Err(self.err_at(start, format!("compound `{name}()` has no arguments")));
        }
        let mut args = alloc::vec![self.parse(999)?];
        while self.peek().tok == Tok::Punct(',') {
            self.next();
            args.push(self.parse(999)?);
        }
        self.expect(')')?;
        Ok((Term::Compound(name, args), 0))
    }
}

fn tokenize(text: &str) -> Result<Parser, ParseError> {
    Ok(Parser {
        toks: Lexer::new(text).tokens()?,
        pos: 0,
        fresh: 0,
    })
}

/// Parses a sequence of clauses.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let mut p = tokenize(text)?;
    let mut prog = Program::new();
    while p.peek().tok != Tok::Eof {
        let start = p.peek().clone();
        let t = p.parse(1200)?;
        let end = p.next();
        if end.tok != Tok::End {
            return Err(p.err_at(&end, "expected `.` at end of clause"));
        }
        prog.add_clause(term_to_clause(t).map_err(|m| p.err_at(&start, m))?);
    }
    Ok(prog)
}

/// Parses a single term, with an optional terminating `.`.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = tokenize(text)?;
    let t = p.parse(1200)?;
    let end = p.next();
    match end.tok {
        Tok::Eof => Ok(t),
        Tok::End if p.peek().tok == Tok::Eof => Ok(t),
        _ => Err(p.err_at(&end, "trailing input after term")),
    }
}

fn term_to_clause(t: Term) -> Result<Clause, String> {
    let (head, body) = match t {
        Term::Compound(ref f, ref args) if f == ":-" && args.len() == 2 => {
            (args[0].clone(), Some(args[1].clone()))
        }
        _ => (t, None),
    };
    let (name, args) = match head {
        Term::Atom(a) => (a, Vec::new()),
        Term::Compound(f, args) => (f, args),
        Term::Var(_) => return Err("clause head is a variable".into()),
        Term::Int(_) => return Err("clause head is an integer".into()),
    };
    let mut lits = Vec::new();
    if let Some(b) = body {
        flatten_body(b, &mut lits)?;
    }
    Ok(Clause {
        name,
        args,
        body: lits,
    })
}

fn flatten_body(t: Term, out: &mut Vec<Literal>) -> Result<(), String> {
    match t {
        Term::Compound(ref f, ref args) if f == "," && args.len() == 2 => {
            flatten_body(args[0].clone(), out)?;
            flatten_body(args[1].clone(), out)
        }
        Term::Atom(ref a) if a == "!" => {
            out.push(Literal::Cut);
            Ok(())
        }
        Term::Var(v) => Err(format!("variable `{v}` used as a goal")),
        Term::Int(i) => Err(format!("integer `{i}` used as a goal")),
        t => {
            out.push(Literal::Goal(t));
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fact_with_list_pattern() {
        let p = parse_program("efface(X,[X|T],T).").unwrap();
        assert_eq!(p.clause_count(), 1);
        let c = &p.procedures[0].clauses[0];
        assert_eq!(c.args.len(), 3);
        assert!(c.body.is_empty());
        assert_eq!(
            c.args[1],
            Term::cons(Term::var("X"), Term::var("T"))
        );
    }

    #[test]
    fn zero_arity_fact() {
        let p = parse_program("p.").unwrap();
        assert_eq!(p.procedures[0].pred.arity, 0);
    }

    #[test]
    fn disjunction_kept_as_goal() {
        let p = parse_program("p :- (q ; r).").unwrap();
        let body = &p.procedures[0].clauses[0].body;
        assert_eq!(
            body,
            &[Literal::Goal(Term::compound(
                ";",
                alloc::vec![Term::atom("q"), Term::atom("r")]
            ))]
        );
    }

    #[test]
    fn if_then_rejected() {
        let e = parse_program("p :- (q -> r ; s).").unwrap_err();
        assert!(e.msg.contains("->"));
        assert_eq!((e.line, e.col), (1, 9));
    }

    #[test]
    fn empty_args_rejected() {
        let e = parse_program("p :- foo().").unwrap_err();
        assert!(e.msg.contains("no arguments"));
    }

    #[test]
    fn error_position_is_reported() {
        let e = parse_program("p.\nq :- r(.").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn negative_numbers_and_minus() {
        assert_eq!(parse_term("-3").unwrap(), Term::Int(-3));
        assert_eq!(
            parse_term("- 3").unwrap(),
            Term::compound("-", alloc::vec![Term::Int(3)])
        );
        assert_eq!(
            parse_term("a-1").unwrap(),
            Term::compound("-", alloc::vec![Term::atom("a"), Term::Int(1)])
        );
    }

    #[test]
    fn operators_and_comments() {
        let p = parse_program(
            "% leading\nmax(X,Y,X) :- X >= Y, /* inline */ !.\nmax(_,Y,Y).",
        )
        .unwrap();
        let c = &p.procedures[0].clauses;
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].body[1], Literal::Cut);
        assert_ne!(c[1].args[0], c[1].args[1]);
    }

    #[test]
    fn negation_forms() {
        let t = parse_term("\\+ X = a").unwrap();
        assert_eq!(
            t,
            Term::compound(
                "\\+",
                alloc::vec![Term::compound("=", alloc::vec![Term::var("X"), Term::atom("a")])]
            )
        );
    }

    #[test]
    fn quoted_atoms() {
        assert_eq!(parse_term("'hello world'").unwrap(), Term::atom("hello world"));
        assert_eq!(parse_term("'it''s'").unwrap(), Term::atom("it's"));
    }
}
