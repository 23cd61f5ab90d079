//! Abstract substitutions: modes, types, sharing, linearity, frames and
//! linear size relations.

mod lattice;
mod mode;
mod subst;
mod types;
mod unify;

pub use mode::Mode;
pub use subst::{sz, AbsSubst, Idx, Lin, LinSys, Node, Norm, SizeVar};
pub use types::{functor_fits, functor_type, TypeExpr};
pub use unify::UnifyOutcome;

#[cfg(test)]
mod tests;
