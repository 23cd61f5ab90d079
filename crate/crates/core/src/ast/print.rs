//! Pretty-printer producing text that [`super::parse_program`] reads back.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::parse::{infix_op, is_symbol_char, prefix_op, OpType};
use super::{Clause, Literal, Program, Term, CONS, NIL};

fn atom_needs_quotes(a: &str) -> bool {
    if a == NIL || a == "!" || a == ";" {
        return false;
    }
    let mut chars = a.chars();
    match chars.next() {
        None => true,
        Some(c) if c.is_lowercase() => !a.chars().all(|c| c.is_alphanumeric() || c == '_'),
        Some(_) => !a.chars().all(is_symbol_char) || a == ".",
    }
}

fn print_atom(a: &str) -> String {
    if atom_needs_quotes(a) {
        let mut s = String::from("'");
        for c in a.chars() {
            match c {
                '\'' => s.push_str("''"),
                '\\' => s.push_str("\\\\"),
                '\n' => s.push_str("\\n"),
                '\t' => s.push_str("\\t"),
                c => s.push(c),
            }
        }
        s.push('\'');
        s
    } else {
        String::from(a)
    }
}

/// Joins operator and operand, adding a space where the two would otherwise
/// lex as one token.
fn glue(out: &mut String, piece: &str) {
    let last = out.chars().last();
    let first = piece.chars().next();
    if let (Some(l), Some(f)) = (last, first) {
        let alnum = |c: char| c.is_alphanumeric() || c == '_';
        if (is_symbol_char(l) && is_symbol_char(f)) || (alnum(l) && alnum(f)) || (l == ',' && f == ',') {
            out.push(' ');
        }
    }
    out.push_str(piece);
}

fn term_prec(t: &Term, max: u32, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(v),
        Term::Int(i) => {
            let s = format!("{i}");
            glue(out, &s);
        }
        Term::Atom(a) => {
            let s = print_atom(a);
            if infix_op(a).is_some() || prefix_op(a).is_some() {
                if max < 1200 && !out.is_empty() {
                    out.push('(');
                    out.push_str(&s);
                    out.push(')');
                    return;
                }
            }
            glue(out, &s);
        }
        Term::Compound(f, args) if f == CONS && args.len() == 2 => {
            let (items, tail) = t.list_spine();
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                term_prec(item, 999, out);
            }
            if !matches!(tail, Term::Atom(a) if a == NIL) {
                out.push('|');
                term_prec(tail, 999, out);
            }
            out.push(']');
        }
        Term::Compound(f, args) if args.len() == 2 && infix_op(f).is_some() => {
            let (p, ty) = infix_op(f).unwrap();
            let (lmax, rmax) = match ty {
                OpType::Xfx => (p - 1, p - 1),
                OpType::Xfy => (p - 1, p),
                _ => (p, p - 1),
            };
            let paren = p > max;
            if paren {
                glue(out, "(");
            }
            term_prec(&args[0], lmax, out);
            let alpha = f.chars().all(|c| c.is_alphanumeric());
            if alpha {
                out.push(' ');
                out.push_str(f);
                out.push(' ');
            } else {
                glue(out, &print_atom(f));
            }
            term_prec(&args[1], rmax, out);
            if paren {
                out.push(')');
            }
        }
        Term::Compound(f, args) if args.len() == 1 && prefix_op(f).is_some() => {
            let (p, _) = prefix_op(f).unwrap();
            let paren = p > max;
            if paren {
                glue(out, "(");
            }
            glue(out, f);
            // keep `- 1` distinct from the integer `-1`, and `\+ (a,b)` readable
            if matches!(args[0], Term::Int(_)) || f.chars().all(is_symbol_char) {
                out.push(' ');
            }
            term_prec(&args[0], p, out);
            if paren {
                out.push(')');
            }
        }
        Term::Compound(f, args) => {
            glue(out, &print_atom(f));
            out.push('(');
            for (k, a) in args.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                term_prec(a, 999, out);
            }
            out.push(')');
        }
    }
}

pub fn print_term(t: &Term) -> String {
    let mut s = String::new();
    term_prec(t, 1200, &mut s);
    s
}

fn arg_term(t: &Term) -> String {
    let mut s = String::new();
    term_prec(t, 999, &mut s);
    s
}

pub fn print_literal(l: &Literal) -> String {
    match l {
        Literal::Cut => String::from("!"),
        Literal::Not(inner) => format!("not({})", print_literal(inner)),
        other => arg_term(&other.to_term()),
    }
}

pub fn print_clause(c: &Clause) -> String {
    let mut s = arg_term(&c.head());
    if !c.body.is_empty() {
        s.push_str(" :- ");
        let lits: Vec<String> = c.body.iter().map(print_literal).collect();
        s.push_str(&lits.join(", "));
    }
    s.push('.');
    s
}

pub fn print_program(p: &Program) -> String {
    let mut s = String::new();
    for proc_ in &p.procedures {
        for c in &proc_.clauses {
            s.push_str(&print_clause(c));
            s.push('\n');
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::super::parse_program;
    use super::*;
    use alloc::vec;

    #[test]
    fn list_sugar() {
        let t = Term::cons(Term::atom("a"), Term::nil());
        assert_eq!(print_term(&t), "[a]");
        let p = Term::cons(Term::var("H"), Term::var("T"));
        assert_eq!(print_term(&p), "[H|T]");
    }

    #[test]
    fn normalized_clause_layout() {
        let c = Clause::new(
            "efface",
            vec![Term::var("X1"), Term::var("X2"), Term::var("X3")],
            vec![
                Literal::UnifyVarFunctor(
                    "X2".into(),
                    super::super::Functor::cons(),
                    vec!["X4".into(), "X5".into()],
                ),
                Literal::Call("efface".into(), vec!["X1".into(), "X5".into(), "X6".into()]),
                Literal::Not(alloc::boxed::Box::new(Literal::UnifyVarVar(
                    "X1".into(),
                    "X4".into(),
                ))),
            ],
        );
        assert_eq!(
            print_clause(&c),
            "efface(X1,X2,X3) :- X2=[X4|X5], efface(X1,X5,X6), not(X1=X4)."
        );
    }

    #[test]
    fn operators_round_trip() {
        let src = "p(X,Y) :- X=<Y, Y is X+1*2, \\+ X==Y, Z= -1, W=(a:-b), V= - 1, (q;r).\n";
        let p = parse_program(src).unwrap();
        let printed = print_program(&p);
        assert_eq!(parse_program(&printed).unwrap(), p, "{printed}");
    }

    #[test]
    fn quoting() {
        assert_eq!(print_term(&Term::atom("hello world")), "'hello world'");
        assert_eq!(print_term(&Term::atom("[]")), "[]");
        assert_eq!(print_term(&Term::atom("Abc")), "'Abc'");
    }
}
