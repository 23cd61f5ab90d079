//! Abstract substitutions over indices: same-value map, frames, modes,
//! types, possible sharing, linearity and size constraints.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::mode::Mode;
use super::types::{functor_fits, functor_type, TypeExpr};
use crate::ast::{Functor, Term};
use crate::linear::{q, Constraint, LinExpr, System};

pub type Idx = u32;

/// Variables of the size constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SizeVar {
    /// Number of answers.
    Sol,
    /// Size of the term at an index.
    Idx(Idx),
    /// Size of argument `k` (0-based) at procedure entry.
    In(usize),
    /// Size of argument `k` at procedure exit.
    Out(usize),
    /// Scratch variable.
    Aux(u32),
}

impl fmt::Display for SizeVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SizeVar::Sol => f.write_str("sol"),
            SizeVar::Idx(i) => write!(f, "sz({i})"),
            SizeVar::In(k) => write!(f, "X{}_in", k + 1),
            SizeVar::Out(k) => write!(f, "X{}_out", k + 1),
            SizeVar::Aux(k) => write!(f, "aux{k}"),
        }
    }
}

pub type LinSys = System<SizeVar>;
pub type Lin = LinExpr<SizeVar>;

pub fn sz(i: Idx) -> Lin {
    Lin::var(SizeVar::Idx(i))
}

/// Size measure attached to an index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Norm {
    None,
    /// Number of elements of a complete list.
    ListLength,
    /// Number of symbol occurrences of a ground term.
    TermSize,
}

impl Norm {
    pub fn of(mode: Mode, ty: &TypeExpr) -> Norm {
        if ty.is_list() {
            Norm::ListLength
        } else if mode.is_ground() {
            Norm::TermSize
        } else {
            Norm::None
        }
    }

    /// Measure of a concrete term, when defined.
    pub fn measure(self, t: &Term) -> Option<i128> {
        match self {
            Norm::None => None,
            Norm::ListLength => t.as_list().map(|l| l.len() as i128),
            Norm::TermSize => t.is_ground().then(|| t.term_size() as i128),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Node {
    pub frame: Option<(Functor, Vec<Idx>)>,
    pub mode: Mode,
    pub ty: TypeExpr,
    pub lin: bool,
    /// Norm under which `E` constrains this index.
    pub(crate) norm: Norm,
}

impl Node {
    pub fn new(mode: Mode, ty: TypeExpr, lin: bool) -> Node {
        let norm = Norm::of(mode, &ty);
        Node {
            frame: None,
            mode,
            ty,
            lin: lin || mode.is_ground(),
            norm,
        }
    }
}

/// An abstract substitution, or bottom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbsSubst {
    pub(crate) bottom: bool,
    pub(crate) sv: BTreeMap<String, Idx>,
    pub(crate) nodes: BTreeMap<Idx, Node>,
    /// Possible-sharing pairs `(i, j)` with `i < j`.
    pub(crate) ps: BTreeSet<(Idx, Idx)>,
    pub(crate) e: LinSys,
    pub(crate) next: Idx,
    /// Forwarding of merged indices; empty between operations.
    pub(crate) fwd: BTreeMap<Idx, Idx>,
}

#[derive(Debug)]
pub(crate) struct Bottom;

impl Default for AbsSubst {
    fn default() -> Self {
        Self::new()
    }
}

impl AbsSubst {
    /// The empty substitution (no variables).
    pub fn new() -> Self {
        AbsSubst {
            bottom: false,
            sv: BTreeMap::new(),
            nodes: BTreeMap::new(),
            ps: BTreeSet::new(),
            e: LinSys::new(),
            next: 0,
            fwd: BTreeMap::new(),
        }
    }

    pub fn bottom() -> Self {
        AbsSubst {
            bottom: true,
            ..Self::new()
        }
    }

    pub fn is_bottom(&self) -> bool {
        self.bottom
    }

    /// Adds a variable bound to a fresh index that shares with nothing.
    pub fn add_var(&mut self, name: &str, mode: Mode, ty: TypeExpr, lin: bool) -> Idx {
        let i = self.fresh_node(Node::new(mode, ty, lin));
        self.sv.insert(name.to_string(), i);
        i
    }

    /// Adds a free, unaliased variable.
    pub fn add_fresh_var(&mut self, name: &str) -> Idx {
        self.add_var(name, Mode::VAR, TypeExpr::Any, true)
    }

    /// Binds `name` to the same index as `other`.
    pub fn alias_var(&mut self, name: &str, other: &str) {
        let i = self.sv[other];
        self.sv.insert(name.to_string(), i);
    }

    /// Declares that the terms of two variables may share.
    pub fn allow_sharing(&mut self, x: &str, y: &str) {
        let (a, b) = (self.sv[x], self.sv[y]);
        for la in self.leaves(a) {
            for lb in self.leaves(b) {
                self.add_pair(la, lb);
            }
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = &String> {
        self.sv.keys()
    }

    pub fn has_var(&self, v: &str) -> bool {
        self.sv.contains_key(v)
    }

    pub fn idx(&self, v: &str) -> Option<Idx> {
        self.sv.get(v).map(|&i| self.find(i))
    }

    pub fn node(&self, i: Idx) -> &Node {
        &self.nodes[&self.find(i)]
    }

    pub(crate) fn node_mut(&mut self, i: Idx) -> &mut Node {
        let i = self.find(i);
        self.nodes.get_mut(&i).unwrap()
    }

    pub fn var_node(&self, v: &str) -> Option<&Node> {
        self.idx(v).map(|i| self.node(i))
    }

    pub fn mode_of(&self, v: &str) -> Mode {
        self.var_node(v).map_or(Mode::ANY, |n| n.mode)
    }

    pub fn type_of(&self, v: &str) -> TypeExpr {
        self.var_node(v).map_or(TypeExpr::Any, |n| n.ty.clone())
    }

    pub fn constraints(&self) -> &LinSys {
        &self.e
    }

    pub fn add_constraint(&mut self, c: Constraint<SizeVar>) {
        self.e.add(c);
    }

    pub fn set_constraints(&mut self, e: LinSys) {
        self.e = e;
    }

    pub fn indices(&self) -> impl Iterator<Item = Idx> + '_ {
        self.nodes.keys().copied()
    }

    pub fn norm_of_var(&self, v: &str) -> Norm {
        self.var_node(v).map_or(Norm::None, |n| n.norm)
    }

    /// Size expression of a variable's term, when its norm is defined.
    pub fn size_of_var(&self, v: &str) -> Option<Lin> {
        let i = self.idx(v)?;
        (self.node(i).norm != Norm::None).then(|| sz(i))
    }

    pub(crate) fn find(&self, mut i: Idx) -> Idx {
        while let Some(&j) = self.fwd.get(&i) {
            i = j;
        }
        i
    }

    pub(crate) fn fresh_node(&mut self, node: Node) -> Idx {
        let i = self.next;
        self.next += 1;
        let norm = node.norm;
        self.nodes.insert(i, node);
        self.add_norm_bounds(i, norm);
        i
    }

    fn add_norm_bounds(&mut self, i: Idx, norm: Norm) {
        match norm {
            Norm::None => {}
            Norm::ListLength => self.e.add(Constraint::ge(sz(i), Lin::zero())),
            Norm::TermSize => self.e.add(Constraint::ge(sz(i), Lin::constant(q(1)))),
        }
    }

    pub(crate) fn children(&self, i: Idx) -> Vec<Idx> {
        match &self.node(i).frame {
            Some((_, cs)) => cs.iter().map(|&c| self.find(c)).collect(),
            None => Vec::new(),
        }
    }

    /// `i` and all indices below it through frames.
    pub(crate) fn descendants(&self, i: Idx) -> BTreeSet<Idx> {
        let mut out = BTreeSet::new();
        let mut stack = alloc::vec![self.find(i)];
        while let Some(x) = stack.pop() {
            if out.insert(x) {
                stack.extend(self.children(x));
            }
        }
        out
    }

    /// Frameless, possibly nonground indices at or below `i`.
    pub(crate) fn leaves(&self, i: Idx) -> Vec<Idx> {
        self.descendants(i)
            .into_iter()
            .filter(|&d| self.nodes[&d].frame.is_none() && !self.nodes[&d].mode.is_ground())
            .collect()
    }

    pub(crate) fn add_pair(&mut self, a: Idx, b: Idx) {
        let (a, b) = (self.find(a), self.find(b));
        if a == b || self.nodes[&a].mode.is_ground() || self.nodes[&b].mode.is_ground() {
            return;
        }
        self.ps.insert((a.min(b), a.max(b)));
    }

    pub(crate) fn has_pair(&self, a: Idx, b: Idx) -> bool {
        self.ps.contains(&(a.min(b), a.max(b)))
    }

    /// Possible-sharing partners of an index.
    pub(crate) fn partners(&self, a: Idx) -> Vec<Idx> {
        self.ps
            .iter()
            .filter_map(|&(x, y)| {
                let (x, y) = (self.find(x), self.find(y));
                if x == a {
                    Some(y)
                } else if y == a {
                    Some(x)
                } else {
                    None
                }
            })
            .collect()
    }

    /// May the terms at `a` and `b` have a variable in common?
    pub fn shares(&self, a: Idx, b: Idx) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if self.node(a).mode.is_ground() || self.node(b).mode.is_ground() {
            return false;
        }
        let da: Vec<Idx> = self
            .descendants(a)
            .into_iter()
            .filter(|d| !self.nodes[d].mode.is_ground())
            .collect();
        let db: Vec<Idx> = self
            .descendants(b)
            .into_iter()
            .filter(|d| !self.nodes[d].mode.is_ground())
            .collect();
        da.iter()
            .any(|x| db.iter().any(|y| x == y || self.has_pair(*x, *y)))
    }

    pub fn vars_share(&self, x: &str, y: &str) -> bool {
        match (self.idx(x), self.idx(y)) {
            (Some(a), Some(b)) => self.shares(a, b),
            _ => true,
        }
    }

    /// Indices other than `a` that may share a variable with `a`.
    pub(crate) fn sharers(&self, a: Idx) -> Vec<Idx> {
        let a = self.find(a);
        self.nodes
            .keys()
            .copied()
            .filter(|&b| b != a && self.shares(a, b))
            .collect()
    }

    /// Moves sharing pairs on framed indices down to their leaves.
    pub(crate) fn push_down(&mut self) {
        loop {
            let framed: Vec<(Idx, Idx)> = self
                .ps
                .iter()
                .copied()
                .filter(|&(a, b)| {
                    self.nodes.get(&a).is_some_and(|n| n.frame.is_some())
                        || self.nodes.get(&b).is_some_and(|n| n.frame.is_some())
                })
                .collect();
            if framed.is_empty() {
                return;
            }
            for (a, b) in framed {
                self.ps.remove(&(a, b));
                for la in self.leaves(a) {
                    for lb in self.leaves(b) {
                        self.add_pair(la, lb);
                    }
                }
            }
        }
    }

    /// Gives the frameless index `i` a frame with fresh children derived from
    /// what is known about `i`.
    pub(crate) fn decompose(&mut self, i: Idx, f: &Functor) {
        let i = self.find(i);
        let n = self.nodes[&i].clone();
        let child_mode = if n.mode.is_ground() {
            Mode::GROUND
        } else {
            Mode::ANY
        };
        let tys: Vec<TypeExpr> = match (&n.ty, f.is_cons()) {
            (TypeExpr::List(e), true) => alloc::vec![(**e).clone(), n.ty.clone()],
            _ => alloc::vec![TypeExpr::Any; f.arity()],
        };
        let kids: Vec<Idx> = tys
            .into_iter()
            .map(|t| self.fresh_node(Node::new(child_mode, t, n.lin)))
            .collect();
        for p in self.partners(i) {
            for &k in &kids {
                self.add_pair(k, p);
            }
        }
        if !n.lin {
            for (x, &a) in kids.iter().enumerate() {
                for &b in &kids[x + 1..] {
                    self.add_pair(a, b);
                }
            }
        }
        self.ps.retain(|&(a, b)| a != i && b != i);
        self.nodes.get_mut(&i).unwrap().frame = Some((f.clone(), kids));
    }

    /// Redirects `x` to `y`, which takes the description `info`. Size
    /// constraints carry over where the norm is unchanged.
    pub(crate) fn merge_into(&mut self, x: Idx, y: Idx, mut info: Node) {
        let (x, y) = (self.find(x), self.find(y));
        if x == y {
            return;
        }
        let nx = self.nodes.remove(&x).unwrap();
        let ny_norm = self.nodes[&y].norm;
        let nn = Norm::of(info.mode, &info.ty);
        if ny_norm != nn {
            self.e = self.e.eliminate(&SizeVar::Idx(y));
        }
        if nx.norm == nn && nn != Norm::None {
            if ny_norm == nn {
                self.e.add(Constraint::eq(sz(x), sz(y)));
                self.e = self.e.eliminate(&SizeVar::Idx(x));
            } else {
                self.e = self
                    .e
                    .map_vars(&|v| if *v == SizeVar::Idx(x) { SizeVar::Idx(y) } else { *v });
            }
        } else {
            self.e = self.e.eliminate(&SizeVar::Idx(x));
        }
        info.norm = nn;
        self.add_norm_bounds(y, nn);
        self.nodes.insert(y, info);
        self.fwd.insert(x, y);
        let pairs: Vec<(Idx, Idx)> = self.ps.iter().copied().filter(|&(a, b)| a == x || b == x).collect();
        for (a, b) in pairs {
            self.ps.remove(&(a, b));
            let other = if a == x { b } else { a };
            self.add_pair(y, other);
        }
    }

    /// Propagates information between frames, modes, types, linearity,
    /// sharing and sizes until stable.
    pub(crate) fn close(&mut self) -> Result<(), Bottom> {
        if self.bottom {
            return Err(Bottom);
        }
        for _ in 0..64 {
            let before = (self.nodes.clone(), self.ps.clone());
            let ids: Vec<Idx> = self.nodes.keys().copied().collect();
            for &i in &ids {
                self.close_node(i)?;
            }
            self.push_down();
            let ground: Vec<Idx> = ids.iter().copied().filter(|i| self.nodes[i].mode.is_ground()).collect();
            self.ps.retain(|(a, b)| !ground.contains(a) && !ground.contains(b));
            if (self.nodes.clone(), self.ps.clone()) == before {
                break;
            }
        }
        for i in self.nodes.keys().copied().collect::<Vec<_>>() {
            self.size_equations(i);
        }
        if !self.e.satisfiable() {
            return Err(Bottom);
        }
        Ok(())
    }

    fn close_node(&mut self, i: Idx) -> Result<(), Bottom> {
        let mut n = self.nodes[&i].clone();
        if let Some((f, kids)) = n.frame.clone() {
            let kids: Vec<Idx> = kids.iter().map(|&k| self.find(k)).collect();
            if kids.contains(&i) {
                return Err(Bottom);
            }
            n.mode = n.mode.glb(Mode::NOVAR);
            if !functor_fits(&n.ty, &f) {
                return Err(Bottom);
            }
            n.ty = n.ty.glb(&functor_type(&f));
            if f.is_cons() {
                if let TypeExpr::List(tail_elems) = &self.nodes[&kids[1]].ty {
                    let up = TypeExpr::list(self.nodes[&kids[0]].ty.lub(tail_elems));
                    n.ty = n.ty.glb(&up);
                }
            }
            let kid_modes: Vec<Mode> = kids.iter().map(|k| self.nodes[k].mode).collect();
            if kid_modes.iter().all(|m| m.is_ground()) {
                n.mode = n.mode.glb(Mode::GROUND);
            } else if kid_modes.iter().any(|m| m.is_nonground()) {
                n.mode = n.mode.glb(Mode::NGV);
            }
            let kids_lin = kids.iter().all(|k| self.nodes[k].lin)
                && kids.iter().enumerate().all(|(x, &a)| {
                    kids[x + 1..].iter().all(|&b| a != b || self.nodes[&a].mode.is_ground())
                        && kids[x + 1..].iter().all(|&b| !self.shares(a, b))
                });
            if kids_lin {
                n.lin = true;
            }
            for (pos, &k) in kids.iter().enumerate() {
                let mut kn = self.nodes[&k].clone();
                if n.mode.is_ground() {
                    kn.mode = kn.mode.glb(Mode::GROUND);
                }
                if n.lin {
                    kn.lin = true;
                }
                if let (TypeExpr::List(e), true) = (&n.ty, f.is_cons()) {
                    kn.ty = if pos == 0 { kn.ty.glb(e) } else { kn.ty.glb(&n.ty) };
                }
                self.set_node(k, kn)?;
            }
            n.frame = Some((f, kids));
        }
        if n.ty.is_nonvar() {
            n.mode = n.mode.glb(Mode::NOVAR);
        }
        if n.mode.is_ground() {
            n.lin = true;
        }
        self.set_node(i, n)
    }

    fn set_node(&mut self, i: Idx, mut n: Node) -> Result<(), Bottom> {
        if n.mode.is_bottom() || n.ty.is_bot() {
            return Err(Bottom);
        }
        if n.frame.is_some() && n.mode.is_var() {
            return Err(Bottom);
        }
        let nn = Norm::of(n.mode, &n.ty);
        if nn != n.norm {
            self.e = self.e.eliminate(&SizeVar::Idx(i));
            n.norm = nn;
            self.add_norm_bounds(i, nn);
        }
        self.nodes.insert(i, n);
        Ok(())
    }

    fn size_equations(&mut self, i: Idx) {
        let n = &self.nodes[&i];
        let Some((_, kids)) = &n.frame else { return };
        let kids: Vec<Idx> = kids.iter().map(|&k| self.find(k)).collect();
        let norm = n.norm;
        if norm == Norm::None {
            return;
        }
        let mut node = n.clone();
        node.norm = Norm::None;
        if let Some((f, _)) = &node.frame {
            let f = f.clone();
            node.frame = Some((f, kids));
        }
        // measure through the frame as if `i` had no size variable
        self.nodes.insert(i, node);
        let rhs = self.size_under(i, norm);
        self.nodes.get_mut(&i).unwrap().norm = norm;
        if let Some(rhs) = rhs {
            self.e.add(Constraint::eq(sz(i), rhs));
        }
    }

    /// Rewrites forwarded indices, drops unreachable ones and renumbers
    /// canonically.
    pub(crate) fn compress(&mut self) {
        if self.bottom {
            *self = Self::bottom();
            return;
        }
        let sv: BTreeMap<String, Idx> = self.sv.iter().map(|(v, &i)| (v.clone(), self.find(i))).collect();
        let mut order: Vec<Idx> = Vec::new();
        let mut seen = BTreeSet::new();
        for &root in sv.values() {
            let mut stack = alloc::vec![root];
            while let Some(x) = stack.pop() {
                if !seen.insert(x) {
                    continue;
                }
                order.push(x);
                let kids = self.children(x);
                stack.extend(kids.into_iter().rev());
            }
        }
        let renum: BTreeMap<Idx, Idx> = order.iter().enumerate().map(|(k, &i)| (i, k as Idx)).collect();
        let mut e = self.e.clone();
        for &i in self.nodes.keys() {
            if !renum.contains_key(&i) {
                e = e.eliminate(&SizeVar::Idx(i));
            }
        }
        let r = |i: &Idx| renum[&self.find(*i)];
        let mut nodes = BTreeMap::new();
        for &i in &order {
            let mut n = self.nodes[&i].clone();
            if let Some((f, kids)) = n.frame.take() {
                n.frame = Some((f, kids.iter().map(r).collect()));
            }
            nodes.insert(renum[&i], n);
        }
        let mut ps = BTreeSet::new();
        for &(a, b) in &self.ps {
            let (a, b) = (self.find(a), self.find(b));
            if let (Some(&x), Some(&y)) = (renum.get(&a), renum.get(&b)) {
                if x != y {
                    ps.insert((x.min(y), x.max(y)));
                }
            }
        }
        self.e = e.map_vars(&|v| match v {
            SizeVar::Idx(i) => SizeVar::Idx(renum[i]),
            other => *other,
        });
        self.sv = sv.into_iter().map(|(v, i)| (v, renum[&i])).collect();
        self.nodes = nodes;
        self.ps = ps;
        self.next = order.len() as Idx;
        self.fwd.clear();
    }

    /// Runs [`Self::close`] and [`Self::compress`], turning into bottom on
    /// contradiction.
    pub(crate) fn normalize(&mut self) {
        if self.close().is_err() {
            *self = Self::bottom();
        } else {
            self.compress();
        }
    }

    /// Builds a substitution from per-variable descriptions; nonground
    /// variables listed in `sharing` may share with each other.
    pub fn from_vars(vars: &[(&str, Mode, TypeExpr, bool)], sharing: &[(&str, &str)]) -> Self {
        let mut s = Self::new();
        for (v, m, t, l) in vars {
            s.add_var(v, *m, t.clone(), *l);
        }
        for (x, y) in sharing {
            s.allow_sharing(x, y);
        }
        s.normalize();
        s
    }

    /// Restriction to the listed variables.
    pub fn project(&self, vars: &[String]) -> Self {
        if self.bottom {
            return self.clone();
        }
        let mut s = self.clone();
        s.sv.retain(|v, _| vars.contains(v));
        s.compress();
        s
    }

    pub fn remove_var(&self, v: &str) -> Self {
        let mut s = self.clone();
        s.sv.remove(v);
        s.compress();
        s
    }

    /// Renames variables; unmapped variables keep their names.
    pub fn rename_vars(&self, f: &impl Fn(&str) -> Option<String>) -> Self {
        let mut s = self.clone();
        s.sv = self
            .sv
            .iter()
            .map(|(v, &i)| (f(v).unwrap_or_else(|| v.clone()), i))
            .collect();
        s.compress();
        s
    }

    /// Substitutes size variables other than index sizes.
    pub fn map_size_vars(&self, f: &impl Fn(&SizeVar) -> SizeVar) -> Self {
        let mut s = self.clone();
        s.e = self.e.map_vars(f);
        s
    }

    /// Eliminates the listed non-index size variables from `E`.
    pub fn forget_size_vars(&self, keep: impl Fn(&SizeVar) -> bool) -> Self {
        let mut s = self.clone();
        s.e = self.e.project(|v| matches!(v, SizeVar::Idx(_)) || keep(v));
        s
    }

    /// Marks the terms of `vars` as possibly further instantiated, as after a
    /// call that may bind them.
    pub fn instantiate_vars(&self, vars: &[String]) -> Self {
        if self.bottom {
            return self.clone();
        }
        let mut s = self.clone();
        let mut hit: BTreeSet<Idx> = BTreeSet::new();
        for v in vars {
            if let Some(i) = s.idx(v) {
                for d in s.descendants(i) {
                    if !s.nodes[&d].mode.is_ground() {
                        hit.insert(d);
                        hit.extend(s.sharers(d));
                    }
                }
            }
        }
        let leaves: Vec<Idx> = hit
            .iter()
            .copied()
            .filter(|&i| s.nodes[&i].frame.is_none() && !s.nodes[&i].mode.is_ground())
            .collect();
        for &i in &hit {
            let n = s.nodes.get_mut(&i).unwrap();
            n.mode = n.mode.instantiated();
            n.lin = n.mode.is_ground();
        }
        for (x, &a) in leaves.iter().enumerate() {
            for &b in &leaves[x + 1..] {
                s.add_pair(a, b);
            }
        }
        s.normalize();
        s
    }

    /// Every variable's description, for display and comparisons.
    pub fn describe_var(&self, v: &str) -> Option<(Mode, TypeExpr, bool)> {
        self.var_node(v).map(|n| (n.mode, n.ty.clone(), n.lin))
    }
}

impl fmt::Display for AbsSubst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bottom {
            return writeln!(f, "bottom");
        }
        let sv: Vec<String> = self.sv.iter().map(|(v, i)| format!("{v}->{i}")).collect();
        writeln!(f, "sv={{{}}}", sv.join(", "))?;
        for (i, n) in &self.nodes {
            let frm = match &n.frame {
                None => "-".to_string(),
                Some((fun, kids)) => {
                    let ks: Vec<String> = kids.iter().map(|k| format!("{k}")).collect();
                    match fun {
                        Functor::Int(v) => format!("{v}"),
                        Functor::Atom(name, 0) => crate::ast::print_term(&Term::atom(name)),
                        Functor::Atom(name, _) if fun.is_cons() => {
                            let _ = name;
                            format!("[{}|{}]", ks[0], ks[1])
                        }
                        Functor::Atom(name, _) => format!("{name}({})", ks.join(",")),
                    }
                }
            };
            writeln!(
                f,
                "{i}: mode={} type={} frm={} lin={}",
                n.mode,
                n.ty,
                frm,
                if n.lin { "yes" } else { "no" }
            )?;
        }
        let ps: Vec<String> = self.ps.iter().map(|(a, b)| format!("({a},{b})")).collect();
        writeln!(f, "ps={{{}}}", ps.join(", "))?;
        writeln!(f, "E={}", self.e)
    }
}

