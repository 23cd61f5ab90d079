//! Type expressions: `any`, `int`, `atom` and nil-terminated lists.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use core::fmt;

use crate::ast::{Term, NIL};

/// `List(t)` describes complete lists whose elements have type `t`;
/// `List(Bot)` therefore only describes `[]`. Partial lists are `Any`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeExpr {
    Any,
    Int,
    Atom,
    List(Box<TypeExpr>),
    Bot,
}

impl TypeExpr {
    pub fn list(t: TypeExpr) -> TypeExpr {
        TypeExpr::List(Box::new(t))
    }

    pub fn glb(&self, other: &TypeExpr) -> TypeExpr {
        use TypeExpr::*;
        match (self, other) {
            (Any, t) | (t, Any) => t.clone(),
            (Bot, _) | (_, Bot) => Bot,
            (Int, Int) => Int,
            (Atom, Atom) => Atom,
            (List(a), List(b)) => TypeExpr::list(a.glb(b)),
            // `[]` is an atom
            (Atom, List(_)) | (List(_), Atom) => TypeExpr::list(Bot),
            _ => Bot,
        }
    }

    pub fn lub(&self, other: &TypeExpr) -> TypeExpr {
        use TypeExpr::*;
        match (self, other) {
            (Bot, t) | (t, Bot) => t.clone(),
            (Int, Int) => Int,
            (Atom, Atom) => Atom,
            (List(a), List(b)) => TypeExpr::list(a.lub(b)),
            (Atom, List(b)) | (List(b), Atom) if **b == Bot => Atom,
            _ => Any,
        }
    }

    pub fn leq(&self, other: &TypeExpr) -> bool {
        use TypeExpr::*;
        match (self, other) {
            (Bot, _) | (_, Any) => true,
            (Int, Int) | (Atom, Atom) => true,
            (List(a), List(b)) => a.leq(b),
            (List(a), Atom) => **a == Bot,
            _ => false,
        }
    }

    pub fn is_bot(&self) -> bool {
        *self == TypeExpr::Bot
    }

    pub fn is_list(&self) -> bool {
        matches!(self, TypeExpr::List(_))
    }

    /// Element type of a list type.
    pub fn elem(&self) -> Option<&TypeExpr> {
        match self {
            TypeExpr::List(t) => Some(t),
            _ => None,
        }
    }

    /// True when every term of this type is nonvariable.
    pub fn is_nonvar(&self) -> bool {
        !matches!(self, TypeExpr::Any)
    }

    pub fn admits(&self, t: &Term) -> bool {
        match self {
            TypeExpr::Any => true,
            TypeExpr::Bot => false,
            TypeExpr::Int => matches!(t, Term::Int(_)),
            TypeExpr::Atom => matches!(t, Term::Atom(_)),
            TypeExpr::List(e) => t
                .as_list()
                .is_some_and(|items| items.iter().all(|i| e.admits(i))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            TypeExpr::Any => "any".into(),
            TypeExpr::Int => "int".into(),
            TypeExpr::Atom => "atom".into(),
            TypeExpr::Bot => "bot".into(),
            TypeExpr::List(e) => format!("list({})", e.name()),
        }
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Does the principal functor `name/arity` (or an integer) agree with `t`?
pub fn functor_fits(t: &TypeExpr, f: &crate::ast::Functor) -> bool {
    use crate::ast::Functor;
    match t {
        TypeExpr::Any => true,
        TypeExpr::Bot => false,
        TypeExpr::Int => matches!(f, Functor::Int(_)),
        TypeExpr::Atom => matches!(f, Functor::Atom(_, 0)),
        TypeExpr::List(e) => f.is_nil() || (f.is_cons() && !e.is_bot()),
    }
}

/// Most precise type describing a term whose principal functor is `f`.
pub fn functor_type(f: &crate::ast::Functor) -> TypeExpr {
    use crate::ast::Functor;
    match f {
        Functor::Int(_) => TypeExpr::Int,
        Functor::Atom(n, 0) if n == NIL => TypeExpr::list(TypeExpr::Bot),
        Functor::Atom(_, 0) => TypeExpr::Atom,
        _ => TypeExpr::Any,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_and_meets() {
        let li = TypeExpr::list(TypeExpr::Int);
        let la = TypeExpr::list(TypeExpr::Any);
        assert_eq!(la.glb(&li), li);
        assert_eq!(TypeExpr::Int.glb(&TypeExpr::Atom), TypeExpr::Bot);
        assert!(li.leq(&la));
        assert!(li.leq(&TypeExpr::Any));
        assert_eq!(TypeExpr::list(TypeExpr::Bot).lub(&li), li);
    }

    #[test]
    fn membership() {
        let t = crate::ast::Term::int_list(&[1, 2]);
        assert!(TypeExpr::list(TypeExpr::Int).admits(&t));
        assert!(!TypeExpr::list(TypeExpr::Atom).admits(&t));
        let partial = crate::ast::Term::cons(crate::ast::Term::Int(1), crate::ast::Term::var("T"));
        assert!(!TypeExpr::list(TypeExpr::Any).admits(&partial));
        assert!(TypeExpr::list(TypeExpr::Bot).admits(&crate::ast::Term::nil()));
    }
}
