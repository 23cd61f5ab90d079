//! Abstract unification `X = Y` and `X = f(Y1..Yn)`.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::mode::Mode;
use super::subst::{AbsSubst, Bottom, Idx, Node};
use super::types::{functor_fits, functor_type, TypeExpr};
use crate::ast::Functor;

/// Result of an abstract unification.
#[derive(Debug, Clone)]
pub struct UnifyOutcome {
    pub beta: AbsSubst,
    /// Succeeds for every input.
    pub sure_success: bool,
    /// Fails for every input.
    pub sure_failure: bool,
    /// Variables whose terms may be further instantiated.
    pub touched: BTreeSet<String>,
}

impl UnifyOutcome {
    fn failed() -> Self {
        UnifyOutcome {
            beta: AbsSubst::bottom(),
            sure_success: false,
            sure_failure: true,
            touched: BTreeSet::new(),
        }
    }
}

impl AbsSubst {
    pub fn unify_var_var(&self, x: &str, y: &str) -> UnifyOutcome {
        if self.bottom {
            return UnifyOutcome::failed();
        }
        let mut s = self.clone();
        ensure_var(&mut s, x);
        ensure_var(&mut s, y);
        let (a, b) = (s.sv[x], s.sv[y]);
        s.run_unify(a, b)
    }

    pub fn unify_var_functor(&self, x: &str, f: &Functor, args: &[String]) -> UnifyOutcome {
        if self.bottom {
            return UnifyOutcome::failed();
        }
        let mut s = self.clone();
        ensure_var(&mut s, x);
        for a in args {
            ensure_var(&mut s, a);
        }
        let kids: Vec<Idx> = args.iter().map(|a| s.find(s.sv[a.as_str()])).collect();
        let mut node = Node::new(Mode::NOVAR, functor_type(f), false);
        node.frame = Some((f.clone(), kids));
        let t = s.fresh_node(node);
        if s.close().is_err() {
            return UnifyOutcome::failed();
        }
        let a = s.sv[x];
        s.run_unify(a, t)
    }

    fn run_unify(mut self, a: Idx, b: Idx) -> UnifyOutcome {
        let mut touched_idx = BTreeSet::new();
        self.touched_pair(a, b, &mut touched_idx, &mut BTreeSet::new());
        let touched: BTreeSet<String> = self
            .sv
            .iter()
            .filter(|(_, &i)| touched_idx.contains(&self.find(i)))
            .map(|(v, _)| v.clone())
            .collect();
        let mut sure = true;
        let res = self.unify_nodes(a, b, &mut sure).and_then(|_| self.close());
        match res {
            Err(Bottom) => UnifyOutcome::failed(),
            Ok(()) => {
                self.compress();
                UnifyOutcome {
                    beta: self,
                    sure_success: sure,
                    sure_failure: false,
                    touched,
                }
            }
        }
    }

    fn touch(&self, x: Idx, out: &mut BTreeSet<Idx>) {
        if !self.node(x).mode.is_ground() {
            out.insert(self.find(x));
            out.extend(self.sharers(x));
        }
    }

    /// Indices whose terms may change when `a` and `b` are unified.
    fn touched_pair(&self, a: Idx, b: Idx, out: &mut BTreeSet<Idx>, seen: &mut BTreeSet<(Idx, Idx)>) {
        let (a, b) = (self.find(a), self.find(b));
        if a == b || !seen.insert((a, b)) {
            return;
        }
        let (na, nb) = (self.node(a), self.node(b));
        match (&na.frame, &nb.frame) {
            (Some((fa, ca)), Some((fb, cb))) => {
                if fa == fb {
                    for (x, y) in ca.iter().zip(cb) {
                        self.touched_pair(*x, *y, out, seen);
                    }
                }
            }
            (Some(_), None) => self.touched_leaf_frame(b, a, out),
            (None, Some(_)) => self.touched_leaf_frame(a, b, out),
            (None, None) => {
                let (ma, mb) = (na.mode, nb.mode);
                if ma.is_var() && mb.is_nonvar() {
                    self.touch(a, out);
                } else if mb.is_var() && ma.is_nonvar() {
                    self.touch(b, out);
                } else {
                    self.touch(a, out);
                    self.touch(b, out);
                }
            }
        }
    }

    fn touched_leaf_frame(&self, l: Idx, f: Idx, out: &mut BTreeSet<Idx>) {
        let ml = self.node(l).mode;
        if ml.is_var() {
            self.touch(l, out);
            return;
        }
        self.touch(l, out);
        for c in self.children(f) {
            self.touch(c, out);
        }
    }

    /// Sharers of `v` lose groundness certainty and possibly linearity when
    /// `v` is bound to the term at `t`.
    fn weaken_sharers(&mut self, v: Idx, t: Idx) {
        let excl = self.descendants(t);
        let t_ground = self.node(t).mode.is_ground();
        let t_lin = self.node(t).lin;
        for s in self.sharers(v) {
            if excl.contains(&s) {
                continue;
            }
            let keep_lin = t_ground || (t_lin && !self.shares(s, t));
            let n = self.node_mut(s);
            n.mode = n.mode.instantiated();
            n.lin = n.lin && keep_lin;
        }
    }

    fn share_closure(&self, x: Idx) -> Vec<Idx> {
        let mut v = self.leaves(x);
        for l in v.clone() {
            v.extend(self.partners(l));
        }
        v
    }

    pub(crate) fn unify_nodes(&mut self, a: Idx, b: Idx, sure: &mut bool) -> Result<(), Bottom> {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return Ok(());
        }
        let fa = self.node(a).frame.clone();
        let fb = self.node(b).frame.clone();
        match (fa, fb) {
            (Some((f1, c1)), Some((f2, c2))) => {
                if f1 != f2 {
                    return Err(Bottom);
                }
                let (na, nb) = (self.node(a).clone(), self.node(b).clone());
                let mode = na.mode.unify(nb.mode).glb(Mode::NOVAR);
                let ty = na.ty.glb(&nb.ty);
                if mode.is_bottom() || ty.is_bot() {
                    return Err(Bottom);
                }
                let lin = mode.is_ground() || (na.lin && nb.lin && !self.shares(a, b));
                let mut info = Node::new(mode, ty, lin);
                info.frame = Some((f1, c1.clone()));
                self.merge_into(b, a, info);
                for (x, y) in c1.iter().zip(&c2) {
                    self.unify_nodes(*x, *y, sure)?;
                }
                Ok(())
            }
            (Some(_), None) => self.unify_leaf_frame(b, a, sure),
            (None, Some(_)) => self.unify_leaf_frame(a, b, sure),
            (None, None) => self.unify_leaves(a, b, sure),
        }
    }

    fn unify_leaf_frame(&mut self, l: Idx, f: Idx, sure: &mut bool) -> Result<(), Bottom> {
        if self.descendants(f).contains(&l) {
            return Err(Bottom);
        }
        let nl = self.node(l).clone();
        let functor = self.node(f).frame.as_ref().unwrap().0.clone();
        if nl.mode.is_var() {
            if self.shares(l, f) {
                *sure = false;
            }
            self.weaken_sharers(l, f);
            let info = self.node(f).clone();
            self.merge_into(l, f, info);
            return Ok(());
        }
        if !functor_fits(&nl.ty, &functor) {
            if nl.mode.is_nonvar() || nl.ty != TypeExpr::Any {
                return Err(Bottom);
            }
        }
        let forced = functor.is_nil() && nl.ty == TypeExpr::list(TypeExpr::Bot);
        if !forced {
            *sure = false;
        }
        if nl.mode.may_be_var() {
            self.weaken_sharers(l, f);
        }
        self.decompose(l, &functor);
        self.unify_nodes(l, f, sure)
    }

    fn unify_leaves(&mut self, a: Idx, b: Idx, sure: &mut bool) -> Result<(), Bottom> {
        let (na, nb) = (self.node(a).clone(), self.node(b).clone());
        if na.mode.is_var() || nb.mode.is_var() {
            let (v, t) = if na.mode.is_var() { (a, b) } else { (b, a) };
            let nt = self.node(t).clone();
            if !nt.mode.is_var() && self.shares(v, t) {
                *sure = false;
            }
            let sv_ = self.share_closure(v);
            let st = self.share_closure(t);
            self.weaken_sharers(v, t);
            for &x in &sv_ {
                for &y in &st {
                    self.add_pair(x, y);
                }
            }
            let lin = self.node(t).lin;
            let mut info = self.node(t).clone();
            info.lin = lin;
            self.merge_into(v, t, info);
            return Ok(());
        }
        *sure = false;
        let mode = na.mode.unify(nb.mode);
        let ty = na.ty.glb(&nb.ty);
        if mode.is_bottom() || ty.is_bot() {
            return Err(Bottom);
        }
        let lin = mode.is_ground() || (na.lin && nb.lin && !self.shares(a, b));
        let sa = self.share_closure(a);
        let sb = self.share_closure(b);
        self.weaken_sharers(a, b);
        self.weaken_sharers(b, a);
        for &x in &sa {
            for &y in &sb {
                self.add_pair(x, y);
            }
        }
        if !na.lin {
            for &x in &sb {
                for &y in &sb {
                    self.add_pair(x, y);
                }
            }
        }
        if !nb.lin {
            for &x in &sa {
                for &y in &sa {
                    self.add_pair(x, y);
                }
            }
        }
        self.merge_into(b, a, Node::new(mode, ty, lin));
        Ok(())
    }
}

fn ensure_var(s: &mut AbsSubst, v: &str) {
    if !s.has_var(v) {
        s.add_fresh_var(v);
    }
}
