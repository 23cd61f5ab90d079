//! Ordering, meet and join of abstract substitutions, and the concretization
//! test.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::mode::Mode;
use super::subst::{AbsSubst, Idx, Node, Norm, SizeVar};
use crate::ast::Term;
use crate::linear::{q, Constraint, LinExpr};

impl AbsSubst {
    /// Greatest lower bound. The domains may differ; the result covers both.
    pub fn glb(&self, other: &AbsSubst) -> AbsSubst {
        if self.bottom || other.bottom {
            return AbsSubst::bottom();
        }
        let mut s = self.clone();
        let off = s.next;
        for (i, n) in &other.nodes {
            let mut n = n.clone();
            if let Some((_, kids)) = n.frame.as_mut() {
                for k in kids.iter_mut() {
                    *k += off;
                }
            }
            s.nodes.insert(i + off, n);
        }
        s.next = off + other.next;
        s.e = s.e.conjoin(&other.e.map_vars(&|v| match v {
            SizeVar::Idx(i) => SizeVar::Idx(i + off),
            o => *o,
        }));
        // `s.ps` now holds only side-one pairs; the final set is rebuilt below
        s.ps.clear();
        let mut work: Vec<(Idx, Idx)> = Vec::new();
        for (v, &i) in &other.sv {
            match self.sv.get(v) {
                Some(&j) => work.push((j, i + off)),
                None => {
                    s.sv.insert(v.clone(), i + off);
                }
            }
        }
        while let Some((a, b)) = work.pop() {
            let (a, b) = (s.find(a), s.find(b));
            if a == b {
                continue;
            }
            let (na, nb) = (s.nodes[&a].clone(), s.nodes[&b].clone());
            let frame = match (&na.frame, &nb.frame) {
                (Some((f1, c1)), Some((f2, c2))) => {
                    if f1 != f2 {
                        return AbsSubst::bottom();
                    }
                    work.extend(c1.iter().copied().zip(c2.iter().copied()));
                    na.frame.clone()
                }
                (Some(_), None) => na.frame.clone(),
                (None, f) => f.clone(),
            };
            let mode = na.mode.glb(nb.mode);
            let ty = na.ty.glb(&nb.ty);
            if mode.is_bottom() || ty.is_bot() {
                return AbsSubst::bottom();
            }
            let mut info = Node::new(mode, ty, na.lin || nb.lin);
            info.frame = frame;
            s.merge_into(b, a, info);
        }
        if s.has_cycle() {
            return AbsSubst::bottom();
        }
        // covers: the original indices each result index stands for
        let mut covers: [BTreeMap<Idx, BTreeSet<Idx>>; 2] = [BTreeMap::new(), BTreeMap::new()];
        for i in 0..self.next {
            if self.nodes.contains_key(&i) {
                covers[0].entry(s.find(i)).or_default().insert(i);
            }
        }
        for &i in other.nodes.keys() {
            covers[1].entry(s.find(i + off)).or_default().insert(i);
        }
        let sides = [self, other];
        let mut inherited: [BTreeMap<Idx, BTreeSet<Idx>>; 2] = [BTreeMap::new(), BTreeMap::new()];
        for k in 0..2 {
            let roots: Vec<Idx> = s.sv.values().map(|&i| s.find(i)).collect();
            let mut stack: Vec<(Idx, BTreeSet<Idx>)> = roots.into_iter().map(|r| (r, BTreeSet::new())).collect();
            let mut visited = BTreeSet::new();
            while let Some((x, parent)) = stack.pop() {
                let own = covers[k].get(&x).cloned().unwrap_or_default();
                let cov = if own.is_empty() { parent } else { own };
                let entry = inherited[k].entry(x).or_default();
                let before = entry.len();
                entry.extend(cov.iter().copied());
                if !visited.insert(x) && entry.len() == before {
                    continue;
                }
                for c in s.children(x) {
                    stack.push((c, cov.clone()));
                }
            }
        }
        let mut leaves: Vec<Idx> = s
            .nodes
            .iter()
            .filter(|(_, n)| n.frame.is_none() && !n.mode.is_ground())
            .map(|(&i, _)| i)
            .collect();
        leaves.sort();
        for x in 0..leaves.len() {
            for y in x + 1..leaves.len() {
                let (p, r) = (leaves[x], leaves[y]);
                let keep = (0..2).all(|k| {
                    let (cp, cr) = (inherited[k].get(&p), inherited[k].get(&r));
                    match (cp, cr) {
                        (Some(cp), Some(cr)) if !cp.is_empty() && !cr.is_empty() => cp
                            .iter()
                            .all(|&a| cr.iter().all(|&b| a == b || sides[k].shares(a, b))),
                        _ => true,
                    }
                });
                if keep {
                    s.ps.insert((p, r));
                }
            }
        }
        for k in 0..2 {
            for (&x, cov) in &inherited[k] {
                if cov.iter().any(|c| sides[k].nodes[c].lin) {
                    if let Some(n) = s.nodes.get_mut(&x) {
                        n.lin = true;
                    }
                }
            }
        }
        s.normalize();
        s
    }

    fn has_cycle(&self) -> bool {
        // colours: absent = white, false = on stack, true = done
        fn visit(s: &AbsSubst, i: Idx, col: &mut BTreeMap<Idx, bool>) -> bool {
            match col.get(&i) {
                Some(false) => return true,
                Some(true) => return false,
                None => {}
            }
            col.insert(i, false);
            for c in s.children(i) {
                if visit(s, c, col) {
                    return true;
                }
            }
            col.insert(i, true);
            false
        }
        let mut col = BTreeMap::new();
        let ids: Vec<Idx> = self.nodes.keys().copied().collect();
        ids.into_iter().any(|i| visit(self, i, &mut col))
    }

    /// `self` describes no more than `other`.
    pub fn leq(&self, other: &AbsSubst) -> bool {
        if self.bottom {
            return true;
        }
        if other.bottom {
            return !self.e.satisfiable();
        }
        let mut h: BTreeMap<Idx, Idx> = BTreeMap::new();
        for (v, &i2) in &other.sv {
            let Some(&i1) = self.sv.get(v) else {
                return false;
            };
            if !self.embed(other, i2, i1, &mut h) {
                return false;
            }
        }
        let dom: Vec<Idx> = h.keys().copied().collect();
        for (x, &a) in dom.iter().enumerate() {
            for &b in &dom[x + 1..] {
                if !other.shares(a, b) && self.shares(h[&a], h[&b]) {
                    return false;
                }
            }
        }
        let mut mapped = Vec::new();
        for c in other.e.constraints() {
            let mut expr = LinExpr::constant(c.expr.constant);
            for (v, k) in &c.expr.coeffs {
                let term = match v {
                    SizeVar::Idx(i) => match h.get(i).and_then(|&j| self.size_under(j, other.nodes[i].norm)) {
                        Some(e) => e,
                        None => return false,
                    },
                    o => LinExpr::var(*o),
                };
                expr = expr.plus(&term.scale(*k));
            }
            mapped.push(Constraint { expr, rel: c.rel });
        }
        mapped.iter().all(|c| self.e.entails(c))
    }

    /// Size of the term at `i` under `norm`, through frames when `i` itself
    /// is measured differently.
    pub(crate) fn size_under(&self, i: Idx, norm: Norm) -> Option<LinExpr<SizeVar>> {
        let n = &self.nodes[&i];
        if norm == Norm::None {
            return None;
        }
        if n.norm == norm {
            return Some(LinExpr::var(SizeVar::Idx(i)));
        }
        let (f, kids) = n.frame.as_ref()?;
        match norm {
            Norm::ListLength if f.is_nil() => Some(LinExpr::zero()),
            Norm::ListLength if f.is_cons() => Some(self.size_under(kids[1], norm)?.plus_const(q(1))),
            Norm::TermSize if n.mode.is_ground() => {
                let mut e = LinExpr::constant(q(1));
                for &k in kids {
                    e = e.plus(&self.size_under(k, norm)?);
                }
                Some(e)
            }
            _ => None,
        }
    }

    fn embed(&self, other: &AbsSubst, i2: Idx, i1: Idx, h: &mut BTreeMap<Idx, Idx>) -> bool {
        if let Some(&j) = h.get(&i2) {
            return j == i1;
        }
        h.insert(i2, i1);
        let (n1, n2) = (&self.nodes[&i1], &other.nodes[&i2]);
        if !n1.mode.leq(n2.mode) || !n1.ty.leq(&n2.ty) {
            return false;
        }
        if n2.lin && !n1.lin && !n1.mode.is_ground() {
            return false;
        }
        match (&n2.frame, &n1.frame) {
            (None, _) => true,
            (Some((f2, c2)), Some((f1, c1))) => {
                f1 == f2 && c2.iter().zip(c1).all(|(&a, &b)| self.embed(other, a, b, h))
            }
            (Some(_), None) => false,
        }
    }

    /// Least upper bound over the common variables.
    pub fn lub(&self, other: &AbsSubst) -> AbsSubst {
        if self.bottom {
            return other.clone();
        }
        if other.bottom {
            return self.clone();
        }
        let mut s = AbsSubst::new();
        let mut pairs: BTreeMap<(Idx, Idx), Idx> = BTreeMap::new();
        for (v, &i1) in &self.sv {
            if let Some(&i2) = other.sv.get(v) {
                let r = lub_build(self, other, i1, i2, &mut s, &mut pairs);
                s.sv.insert(v.clone(), r);
            }
        }
        let plist: Vec<((Idx, Idx), Idx)> = pairs.iter().map(|(&k, &v)| (k, v)).collect();
        for (x, &((a1, a2), p)) in plist.iter().enumerate() {
            for &((b1, b2), r) in &plist[x + 1..] {
                let leaf = |i: Idx| s.nodes[&i].frame.is_none() && !s.nodes[&i].mode.is_ground();
                if leaf(p) && leaf(r) && (self.shares(a1, b1) || other.shares(a2, b2)) {
                    s.ps.insert((p.min(r), p.max(r)));
                }
            }
        }
        // size constraints of each side, expressed over the result indices
        const AUX: u32 = 1 << 24;
        let side = |src: &AbsSubst, pick: &dyn Fn((Idx, Idx)) -> Idx| {
            let mut e = src.e.map_vars(&|v| match v {
                SizeVar::Idx(i) => SizeVar::Aux(AUX + i),
                o => *o,
            });
            for (&k, &p) in &pairs {
                let i = pick(k);
                let np = s.nodes[&p].norm;
                if let Some(size) = src.size_under(i, np) {
                    let size = size.map_vars(&|v| match v {
                        SizeVar::Idx(j) => SizeVar::Aux(AUX + j),
                        o => *o,
                    });
                    e.add(Constraint::eq(LinExpr::var(SizeVar::Idx(p)), size));
                }
            }
            e.project(|v| !matches!(v, SizeVar::Aux(a) if *a >= AUX))
        };
        let e1 = side(self, &|k| k.0);
        let e2 = side(other, &|k| k.1);
        s.e = e1.hull(&e2);
        s.normalize();
        s
    }

    /// Does the concrete substitution `theta` (variable to term) belong to
    /// the concretization?
    pub fn models(&self, theta: &BTreeMap<String, Term>) -> bool {
        if self.bottom {
            return false;
        }
        let mut assign: BTreeMap<Idx, Term> = BTreeMap::new();
        for (v, &i) in &self.sv {
            let t = theta.get(v).cloned().unwrap_or_else(|| Term::var(v));
            if !self.assign(i, &t, &mut assign) {
                return false;
            }
        }
        let ids: Vec<Idx> = assign.keys().copied().collect();
        for &i in &ids {
            let (n, t) = (&self.nodes[&i], &assign[&i]);
            if !n.mode.admits(t) || !n.ty.admits(t) {
                return false;
            }
            if n.lin && !is_linear(t) {
                return false;
            }
        }
        for (x, &a) in ids.iter().enumerate() {
            for &b in &ids[x + 1..] {
                if !self.shares(a, b) && shares_var(&assign[&a], &assign[&b]) {
                    return false;
                }
            }
        }
        let mut e = self.e.clone();
        for &i in &ids {
            if let Some(m) = self.nodes[&i].norm.measure(&assign[&i]) {
                e.add(Constraint::eq(
                    LinExpr::var(SizeVar::Idx(i)),
                    LinExpr::constant(q(m)),
                ));
            } else if self.nodes[&i].norm != Norm::None {
                return false;
            }
        }
        e.satisfiable()
    }

    fn assign(&self, i: Idx, t: &Term, out: &mut BTreeMap<Idx, Term>) -> bool {
        if let Some(prev) = out.get(&i) {
            return prev == t;
        }
        out.insert(i, t.clone());
        match &self.nodes[&i].frame {
            None => true,
            Some((f, kids)) => {
                if t.functor().as_ref() != Some(f) {
                    return false;
                }
                kids.iter().zip(t.args()).all(|(&k, a)| self.assign(k, a, out))
            }
        }
    }

    /// Structural equality of concretizations.
    pub fn equivalent(&self, other: &AbsSubst) -> bool {
        self.leq(other) && other.leq(self)
    }

    /// Mode of a variable as the lattice element `{G, V, N}` subset.
    pub fn var_mode(&self, v: &str) -> Mode {
        self.mode_of(v)
    }
}

fn lub_build(
    a: &AbsSubst,
    b: &AbsSubst,
    i1: Idx,
    i2: Idx,
    s: &mut AbsSubst,
    pairs: &mut BTreeMap<(Idx, Idx), Idx>,
) -> Idx {
    if let Some(&r) = pairs.get(&(i1, i2)) {
        return r;
    }
    let (n1, n2) = (&a.nodes[&i1], &b.nodes[&i2]);
    let node = Node::new(n1.mode.lub(n2.mode), n1.ty.lub(&n2.ty), n1.lin && n2.lin);
    let r = s.fresh_node(node);
    pairs.insert((i1, i2), r);
    if let (Some((f1, c1)), Some((f2, c2))) = (&n1.frame, &n2.frame) {
        if f1 == f2 {
            let kids: Vec<Idx> = c1
                .iter()
                .zip(c2)
                .map(|(&x, &y)| lub_build(a, b, x, y, s, pairs))
                .collect();
            s.nodes.get_mut(&r).unwrap().frame = Some((f1.clone(), kids));
        }
    }
    r
}

fn is_linear(t: &Term) -> bool {
    fn walk<'a>(t: &'a Term, seen: &mut BTreeSet<&'a str>) -> bool {
        match t {
            Term::Var(v) => seen.insert(v.as_str()),
            Term::Compound(_, args) => args.iter().all(|a| walk(a, seen)),
            _ => true,
        }
    }
    walk(t, &mut BTreeSet::new())
}

fn shares_var(a: &Term, b: &Term) -> bool {
    let va = a.vars();
    b.vars().iter().any(|v| va.contains(v))
}

impl AbsSubst {
    /// The most precise description of a single concrete substitution.
    pub fn abstraction(theta: &BTreeMap<String, Term>) -> AbsSubst {
        let mut s = AbsSubst::new();
        let mut leaves: BTreeMap<String, Idx> = BTreeMap::new();
        for (v, t) in theta {
            let i = build_exact(&mut s, t, &mut leaves);
            s.sv.insert(v.clone(), i);
        }
        s.normalize();
        s
    }
}

fn exact_type(t: &Term) -> super::types::TypeExpr {
    use super::types::TypeExpr;
    match t {
        Term::Int(_) => TypeExpr::Int,
        Term::Atom(a) if a == crate::ast::NIL => TypeExpr::list(TypeExpr::Bot),
        Term::Atom(_) => TypeExpr::Atom,
        _ => match t.as_list() {
            Some(items) => TypeExpr::list(
                items
                    .iter()
                    .fold(TypeExpr::Bot, |acc, x| acc.lub(&exact_type(x))),
            ),
            None => TypeExpr::Any,
        },
    }
}

fn build_exact(s: &mut AbsSubst, t: &Term, leaves: &mut BTreeMap<String, Idx>) -> Idx {
    if let Term::Var(v) = t {
        if let Some(&i) = leaves.get(v) {
            return i;
        }
        let i = s.fresh_node(Node::new(Mode::VAR, super::types::TypeExpr::Any, true));
        leaves.insert(v.clone(), i);
        return i;
    }
    let kids: Vec<Idx> = t.args().iter().map(|a| build_exact(s, a, leaves)).collect();
    let mut node = Node::new(Mode::of_term(t), exact_type(t), is_linear(t));
    node.frame = Some((t.functor().unwrap(), kids));
    s.fresh_node(node)
}
