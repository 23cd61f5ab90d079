//! Abstract sequences: descriptions of sets of (input, answer sequence)
//! pairs, and the determinacy, success, test and exclusivity checks.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::abstract_domain::{AbsSubst, LinSys, SizeVar, UnifyOutcome};
use crate::linear::{q, Constraint, LinExpr};

/// Upper limit on the number of failure descriptions kept.
pub const MAX_FAILS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractSequence {
    pub beta_in: AbsSubst,
    /// Inputs that may have at least one answer.
    pub beta_ref: AbsSubst,
    /// Inputs known to have no answer.
    pub beta_fails: Vec<AbsSubst>,
    /// Variables of `beta_in` whose terms are never instantiated.
    pub untouched: BTreeSet<String>,
    pub beta_out: AbsSubst,
    pub e_ref_out: LinSys,
    /// Bounds on `sol`, the number of answers.
    pub e_sol: LinSys,
}

fn sol() -> LinExpr<SizeVar> {
    LinExpr::var(SizeVar::Sol)
}

impl AbstractSequence {
    /// The sequence of a computation that returns its input once.
    pub fn identity(beta: &AbsSubst) -> Self {
        AbstractSequence {
            beta_in: beta.clone(),
            beta_ref: beta.clone(),
            beta_fails: Vec::new(),
            untouched: beta.vars().cloned().collect(),
            beta_out: beta.clone(),
            e_ref_out: LinSys::new(),
            e_sol: LinSys::from_constraints([Constraint::eq(sol(), LinExpr::constant(q(1)))]),
        }
    }

    /// The sequence of a unification literal, from its abstract outcome.
    pub fn from_unification(beta: &AbsSubst, out: &UnifyOutcome) -> Self {
        let untouched: BTreeSet<String> = beta.vars().filter(|v| !out.touched.contains(*v)).cloned().collect();
        if out.sure_failure {
            let mut b = Self::failure(beta);
            b.untouched = untouched;
            return b;
        }
        let beta_ref = if out.sure_success {
            beta.clone()
        } else {
            let keep: Vec<String> = untouched.iter().cloned().collect();
            beta.glb(&out.beta.project(&keep))
        };
        let k = LinExpr::constant(q(1));
        let e_sol = if out.sure_success {
            LinSys::from_constraints([Constraint::eq(sol(), k)])
        } else {
            LinSys::from_constraints([Constraint::le(sol(), k)])
        };
        AbstractSequence {
            beta_in: beta.clone(),
            beta_ref,
            beta_fails: Vec::new(),
            untouched,
            beta_out: out.beta.clone(),
            e_ref_out: LinSys::new(),
            e_sol,
        }
    }

    /// The sequence of a computation that always fails.
    pub fn failure(beta: &AbsSubst) -> Self {
        AbstractSequence {
            beta_in: beta.clone(),
            beta_ref: AbsSubst::bottom(),
            beta_fails: alloc::vec![beta.clone()],
            untouched: beta.vars().cloned().collect(),
            beta_out: AbsSubst::bottom(),
            e_ref_out: LinSys::new(),
            e_sol: LinSys::from_constraints([Constraint::eq(sol(), LinExpr::zero())]),
        }
    }

    /// `E_sol` together with what the input description knows about sizes.
    pub fn sol_system(&self) -> LinSys {
        let mut e = self.e_sol.conjoin(self.beta_in.constraints());
        e.add(Constraint::ge(sol(), LinExpr::zero()));
        e
    }

    fn sol_entails(&self, c: Constraint<SizeVar>) -> bool {
        self.sol_system().entails(&c)
    }

    pub fn refines_nothing(&self) -> bool {
        self.beta_fails.is_empty() && self.beta_in.leq(&self.beta_ref)
    }

    /// At most one answer.
    pub fn deterministic(&self) -> bool {
        self.beta_ref.is_bottom() || self.sol_entails(Constraint::le(sol(), LinExpr::constant(q(1))))
    }

    /// Exactly one answer.
    pub fn fully_deterministic(&self) -> bool {
        self.refines_nothing() && self.sol_entails(Constraint::eq(sol(), LinExpr::constant(q(1))))
    }

    /// At least one answer.
    pub fn surely_succeeds(&self) -> bool {
        self.refines_nothing() && self.sol_entails(Constraint::ge(sol(), LinExpr::constant(q(1))))
    }

    /// Never produces an answer.
    pub fn surely_fails(&self) -> bool {
        self.beta_ref.is_bottom()
            || self.beta_fails.iter().any(|f| self.beta_in.leq(f))
            || self.sol_entails(Constraint::le(sol(), LinExpr::zero()))
    }

    /// Either fails or returns its input unchanged.
    pub fn test_literal(&self) -> bool {
        self.deterministic() && self.beta_ref.vars().all(|v| self.untouched.contains(v))
    }

    /// Never both succeed on the same input.
    pub fn exclusive(&self, other: &AbstractSequence) -> bool {
        if self.surely_fails() || other.surely_fails() {
            return true;
        }
        let both = self.beta_ref.glb(&other.beta_ref);
        both.is_bottom()
            || self.beta_fails.iter().any(|f| both.leq(f))
            || other.beta_fails.iter().any(|f| both.leq(f))
    }

    /// Every pair described by `self` is described by `spec`.
    pub fn covered_by(&self, spec: &AbstractSequence) -> bool {
        self.coverage_failure(spec).is_none()
    }

    /// The first component that fails the coverage check, by name.
    pub fn coverage_failure(&self, spec: &AbstractSequence) -> Option<&'static str> {
        let strip = |b: &AbsSubst| b.forget_size_vars(|_| false);
        if !strip(&spec.beta_in).leq(&strip(&self.beta_in)) {
            return Some("beta_in");
        }
        if !self.beta_out.is_bottom() && !strip(&self.beta_out).leq(&strip(&spec.beta_out)) {
            return Some("beta_out");
        }
        if !spec.untouched.iter().all(|v| self.untouched.contains(v)) {
            return Some("U");
        }
        if !self.sol_system().entails_all(&spec.e_sol) {
            return Some("E_sol");
        }
        let known = self.e_ref_out.conjoin(self.beta_in.constraints());
        if !self.beta_ref.is_bottom() && !known.entails_all(&spec.e_ref_out) {
            return Some("E_ref_out");
        }
        None
    }

    /// Adds a failure description, merging when there are too many.
    pub fn add_fail(&mut self, f: AbsSubst) {
        if f.is_bottom() || self.beta_fails.iter().any(|g| f.leq(g)) {
            return;
        }
        self.beta_fails.retain(|g| !g.leq(&f));
        self.beta_fails.push(f);
        if self.beta_fails.len() > MAX_FAILS {
            let b = self.beta_fails.pop().unwrap();
            let a = self.beta_fails.pop().unwrap();
            self.beta_fails.push(a.lub(&b));
        }
    }

    /// Labelled text form: `in:`, `ref:`, `fails:`, `U:`, `out:`, `srel:`,
    /// `sol:`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let indent = |s: &AbsSubst| -> String {
            let mut t = String::new();
            for line in format!("{s}").lines() {
                t.push_str("  ");
                t.push_str(line);
                t.push('\n');
            }
            t
        };
        out.push_str("in:\n");
        out.push_str(&indent(&self.beta_in));
        out.push_str("ref:\n");
        out.push_str(&indent(&self.beta_ref));
        out.push_str(&format!("fails: {}\n", self.beta_fails.len()));
        for f in &self.beta_fails {
            out.push_str(&indent(f));
        }
        let u: Vec<&str> = self.untouched.iter().map(|s| s.as_str()).collect();
        out.push_str(&format!("U: {{{}}}\n", u.join(", ")));
        out.push_str("out:\n");
        out.push_str(&indent(&self.beta_out));
        out.push_str(&format!("srel: {}\n", self.e_ref_out));
        out.push_str(&format!("sol: {}\n", self.e_sol));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstract_domain::{Mode, TypeExpr};
    use crate::ast::Functor;
    use alloc::string::ToString;

    fn sol_le(k: i128) -> LinSys {
        LinSys::from_constraints([Constraint::le(sol(), LinExpr::constant(q(k)))])
    }

    fn ground_list(v: &str) -> AbsSubst {
        AbsSubst::from_vars(&[(v, Mode::GROUND, TypeExpr::list(TypeExpr::Any), true)], &[])
    }

    fn literal(beta: &AbsSubst, x: &str, f: Functor, args: &[&str]) -> AbstractSequence {
        let args: Vec<String> = args.iter().map(|a| a.to_string()).collect();
        AbstractSequence::from_unification(beta, &beta.unify_var_functor(x, &f, &args))
    }

    #[test]
    fn determinacy_from_sol() {
        let mut b = AbstractSequence::identity(&AbsSubst::new());
        b.e_sol = sol_le(1);
        assert!(b.deterministic());
        b.e_sol = LinSys::from_constraints([Constraint::eq(sol(), LinExpr::zero())]);
        assert!(b.deterministic());
        b.e_sol = LinSys::from_constraints([Constraint::le(
            sol(),
            LinExpr::var(SizeVar::In(2)).plus_const(q(1)),
        )]);
        assert!(!b.deterministic());
    }

    #[test]
    fn fresh_construction_is_fully_deterministic() {
        let mut beta = AbsSubst::new();
        beta.add_fresh_var("X3");
        beta.add_fresh_var("X4");
        beta.add_fresh_var("X6");
        let b = literal(&beta, "X3", Functor::cons(), &["X4", "X6"]);
        assert!(b.fully_deterministic());
        assert!(b.surely_succeeds());
        assert!(!b.test_literal());
    }

    #[test]
    fn list_decomposition_may_fail() {
        let mut beta = ground_list("X2");
        beta.add_fresh_var("X4");
        beta.add_fresh_var("X5");
        let b = literal(&beta, "X2", Functor::cons(), &["X4", "X5"]);
        assert!(b.deterministic());
        assert!(!b.fully_deterministic());
        let nil = literal(&ground_list("X2"), "X2", Functor::nil(), &[]);
        assert!(b.exclusive(&nil));
        assert!(nil.exclusive(&b));
        assert!(!b.exclusive(&b));
    }

    #[test]
    fn failures_are_exclusive_with_anything() {
        let beta = ground_list("X1");
        let f = AbstractSequence::failure(&beta);
        let id = AbstractSequence::identity(&beta);
        assert!(f.exclusive(&id));
        assert!(id.test_literal());
        assert!(id.covered_by(&id));
        let mut loose = id.clone();
        loose.e_sol = sol_le(2);
        let mut tight = id.clone();
        tight.e_sol = sol_le(1);
        assert!(!loose.covered_by(&tight));
        assert!(tight.covered_by(&loose));
    }

    #[test]
    fn fails_list_stays_bounded() {
        let mut b = AbstractSequence::identity(&AbsSubst::new());
        for k in 0..10 {
            let mut f = AbsSubst::new();
            f.add_var(&alloc::format!("V{k}"), Mode::GROUND, TypeExpr::Int, true);
            b.add_fail(f);
        }
        assert!(b.beta_fails.len() <= MAX_FAILS);
    }

    #[test]
    fn dump_has_all_sections() {
        let d = AbstractSequence::identity(&ground_list("X1")).dump();
        for label in ["in:", "ref:", "fails:", "U:", "out:", "srel:", "sol:"] {
            assert!(d.contains(label), "{label}");
        }
    }
}
