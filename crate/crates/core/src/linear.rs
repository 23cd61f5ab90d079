//! Conjunctions of linear constraints over rational variables, with
//! Fourier-Motzkin elimination, satisfiability and entailment.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Q = Ratio<i128>;

/// Constraint count beyond which the hull falls back to the weak join.
const HULL_LIMIT: usize = 200;

pub fn q(n: i128) -> Q {
    Q::from_integer(n)
}

/// `sum(coeffs[v] * v) + constant`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinExpr<V: Ord> {
    pub coeffs: BTreeMap<V, Q>,
    pub constant: Q,
}

impl<V: Ord + Clone> LinExpr<V> {
    pub fn zero() -> Self {
        LinExpr {
            coeffs: BTreeMap::new(),
            constant: Q::zero(),
        }
    }

    pub fn constant(c: Q) -> Self {
        LinExpr {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn var(v: V) -> Self {
        let mut e = Self::zero();
        e.coeffs.insert(v, Q::one());
        e
    }

    pub fn term(v: V, c: Q) -> Self {
        let mut e = Self::zero();
        e.add_term(v, c);
        e
    }

    pub fn add_term(&mut self, v: V, c: Q) {
        let entry = self.coeffs.entry(v.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&v);
        }
    }

    pub fn coeff(&self, v: &V) -> Q {
        self.coeffs.get(v).copied().unwrap_or_else(Q::zero)
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut e = self.clone();
        for (v, c) in &other.coeffs {
            e.add_term(v.clone(), *c);
        }
        e.constant += other.constant;
        e
    }

    pub fn scale(&self, k: Q) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        LinExpr {
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), *c * k)).collect(),
            constant: self.constant * k,
        }
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scale(-Q::one()))
    }

    pub fn plus_const(&self, c: Q) -> Self {
        let mut e = self.clone();
        e.constant += c;
        e
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = &V> {
        self.coeffs.keys()
    }

    /// Replaces `v` by `by`.
    pub fn substitute(&self, v: &V, by: &Self) -> Self {
        let c = self.coeff(v);
        if c.is_zero() {
            return self.clone();
        }
        let mut e = self.clone();
        e.coeffs.remove(v);
        e.plus(&by.scale(c))
    }

    pub fn map_vars<W: Ord + Clone>(&self, f: &impl Fn(&V) -> W) -> LinExpr<W> {
        let mut e = LinExpr::constant(self.constant);
        for (v, c) in &self.coeffs {
            e.add_term(f(v), *c);
        }
        e
    }

    pub fn eval(&self, val: &impl Fn(&V) -> Q) -> Q {
        self.coeffs
            .iter()
            .fold(self.constant, |acc, (v, c)| acc + *c * val(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rel {
    /// `expr <= 0`
    Le,
    /// `expr < 0`
    Lt,
    /// `expr = 0`
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint<V: Ord> {
    pub expr: LinExpr<V>,
    pub rel: Rel,
}

impl<V: Ord + Clone> Constraint<V> {
    /// `lhs <= rhs`
    pub fn le(lhs: LinExpr<V>, rhs: LinExpr<V>) -> Self {
        Constraint {
            expr: lhs.minus(&rhs),
            rel: Rel::Le,
        }
    }

    /// `lhs < rhs`
    pub fn lt(lhs: LinExpr<V>, rhs: LinExpr<V>) -> Self {
        Constraint {
            expr: lhs.minus(&rhs),
            rel: Rel::Lt,
        }
    }

    /// `lhs >= rhs`
    pub fn ge(lhs: LinExpr<V>, rhs: LinExpr<V>) -> Self {
        Self::le(rhs, lhs)
    }

    /// `lhs = rhs`
    pub fn eq(lhs: LinExpr<V>, rhs: LinExpr<V>) -> Self {
        Constraint {
            expr: lhs.minus(&rhs),
            rel: Rel::Eq,
        }
    }

    /// Scales to coprime integer coefficients, keeping the direction.
    /// Inequalities leave the constant out of the gcd so that parallel
    /// bounds share a coefficient vector.
    pub fn normalized(mut self) -> Self {
        let eq = self.rel == Rel::Eq;
        let parts: Vec<Q> = self
            .expr
            .coeffs
            .values()
            .copied()
            .chain(eq.then_some(self.expr.constant))
            .collect();
        let den = parts.iter().fold(1i128, |d, c| d.lcm(c.denom()));
        let g = parts.iter().fold(0i128, |g, c| g.gcd(&(c * Q::from_integer(den)).to_integer()));
        if g == 0 {
            return self;
        }
        let mut k = Q::new(den, g.abs());
        if eq {
            if let Some((_, c)) = self.expr.coeffs.iter().next() {
                if c.is_negative() {
                    k = -k;
                }
            }
        }
        self.expr = self.expr.scale(k);
        self
    }

    /// Truth value when the constraint mentions no variable.
    pub fn trivial(&self) -> Option<bool> {
        if !self.expr.is_constant() {
            return None;
        }
        let c = self.expr.constant;
        Some(match self.rel {
            Rel::Le => c <= Q::zero(),
            Rel::Lt => c < Q::zero(),
            Rel::Eq => c.is_zero(),
        })
    }

    pub fn holds(&self, val: &impl Fn(&V) -> Q) -> bool {
        let x = self.expr.eval(val);
        match self.rel {
            Rel::Le => x <= Q::zero(),
            Rel::Lt => x < Q::zero(),
            Rel::Eq => x.is_zero(),
        }
    }

    pub fn map_vars<W: Ord + Clone>(&self, f: &impl Fn(&V) -> W) -> Constraint<W> {
        Constraint {
            expr: self.expr.map_vars(f),
            rel: self.rel,
        }
    }

    /// The negation, as a disjunction of constraints.
    fn negation(&self) -> Vec<Constraint<V>> {
        let neg = self.expr.scale(-Q::one());
        match self.rel {
            Rel::Le => alloc::vec![Constraint { expr: neg, rel: Rel::Lt }],
            Rel::Lt => alloc::vec![Constraint { expr: neg, rel: Rel::Le }],
            Rel::Eq => alloc::vec![
                Constraint { expr: self.expr.clone(), rel: Rel::Lt },
                Constraint { expr: neg, rel: Rel::Lt },
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum HullVar<V> {
    Orig(V),
    A(V),
    B(V),
    Lambda,
}

/// A conjunction of constraints. The empty system is `true`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct System<V: Ord> {
    cs: Vec<Constraint<V>>,
    /// Set once a trivially false constraint has been added.
    contradiction: bool,
}

impl<V: Ord + Clone> Default for System<V> {
    fn default() -> Self {
        Self::new()
    }
}

impl<V: Ord + Clone> System<V> {
    pub fn new() -> Self {
        System {
            cs: Vec::new(),
            contradiction: false,
        }
    }

    pub fn falsum() -> Self {
        System {
            cs: Vec::new(),
            contradiction: true,
        }
    }

    pub fn from_constraints(cs: impl IntoIterator<Item = Constraint<V>>) -> Self {
        let mut s = Self::new();
        for c in cs {
            s.add(c);
        }
        s
    }

    pub fn constraints(&self) -> &[Constraint<V>] {
        &self.cs
    }

    pub fn is_trivially_false(&self) -> bool {
        self.contradiction
    }

    pub fn add(&mut self, c: Constraint<V>) {
        let c = c.normalized();
        match c.trivial() {
            Some(true) => {}
            Some(false) => {
                self.contradiction = true;
                self.cs.clear();
            }
            None => {
                if !self.contradiction && !self.cs.contains(&c) {
                    self.cs.push(c);
                }
            }
        }
    }

    pub fn conjoin(&self, other: &Self) -> Self {
        let mut s = self.clone();
        if other.contradiction {
            return Self::falsum();
        }
        for c in &other.cs {
            s.add(c.clone());
        }
        s
    }

    pub fn vars(&self) -> Vec<V> {
        let mut out: Vec<V> = Vec::new();
        for c in &self.cs {
            for v in c.expr.vars() {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        }
        out.sort();
        out
    }

    pub fn mentions(&self, v: &V) -> bool {
        self.cs.iter().any(|c| !c.expr.coeff(v).is_zero())
    }

    /// Existentially quantifies `v` away.
    pub fn eliminate(&self, v: &V) -> Self {
        if self.contradiction {
            return self.clone();
        }
        if let Some(pos) = self
            .cs
            .iter()
            .position(|c| c.rel == Rel::Eq && !c.expr.coeff(v).is_zero())
        {
            // v = -(rest)/coeff
            let eq = &self.cs[pos];
            let k = eq.expr.coeff(v);
            let mut rest = eq.expr.clone();
            rest.coeffs.remove(v);
            let by = rest.scale(-Q::one() / k);
            let mut out = Self::new();
            for (i, c) in self.cs.iter().enumerate() {
                if i != pos {
                    out.add(Constraint {
                        expr: c.expr.substitute(v, &by),
                        rel: c.rel,
                    });
                }
            }
            return out;
        }
        let mut out = Self::new();
        let (mut lower, mut upper) = (Vec::new(), Vec::new());
        for c in &self.cs {
            let k = c.expr.coeff(v);
            if k.is_zero() {
                out.add(c.clone());
            } else if k.is_positive() {
                upper.push(c);
            } else {
                lower.push(c);
            }
        }
        for u in &upper {
            for l in &lower {
                let ku = u.expr.coeff(v);
                let kl = -l.expr.coeff(v);
                let expr = u.expr.scale(kl).plus(&l.expr.scale(ku));
                let rel = if u.rel == Rel::Lt || l.rel == Rel::Lt {
                    Rel::Lt
                } else {
                    Rel::Le
                };
                out.add(Constraint { expr, rel });
            }
        }
        out.prune();
        out
    }

    /// Keeps, for each coefficient vector and relation, the tightest bound.
    fn prune(&mut self) {
        let mut best: BTreeMap<(BTreeMap<V, Q>, bool), (Q, Rel)> = BTreeMap::new();
        let mut eqs = Vec::new();
        for c in self.cs.drain(..) {
            if c.rel == Rel::Eq {
                eqs.push(c);
                continue;
            }
            let key = (c.expr.coeffs.clone(), true);
            let e = best.entry(key).or_insert((c.expr.constant, c.rel));
            // expr + k <= 0 is tighter for larger k
            if c.expr.constant > e.0 || (c.expr.constant == e.0 && c.rel == Rel::Lt) {
                *e = (c.expr.constant, c.rel);
            }
        }
        self.cs = eqs;
        for ((coeffs, _), (constant, rel)) in best {
            self.cs.push(Constraint {
                expr: LinExpr { coeffs, constant },
                rel,
            });
        }
    }

    /// Keeps only constraints over variables satisfying `keep`.
    pub fn project(&self, keep: impl Fn(&V) -> bool) -> Self {
        let mut s = self.clone();
        for v in self.vars() {
            if !keep(&v) {
                s = s.eliminate(&v);
            }
        }
        s
    }

    /// Equalities are substituted away, then inequalities go through
    /// Fourier-Motzkin elimination with Chernikov's rule: after `k`
    /// eliminations a combination of more than `k + 1` original rows is
    /// redundant and dropped.
    pub fn satisfiable(&self) -> bool {
        if self.contradiction {
            return false;
        }
        let mut s = self.clone();
        while let Some(v) = s
            .cs
            .iter()
            .find(|c| c.rel == Rel::Eq)
            .and_then(|c| c.expr.vars().next().cloned())
        {
            s = s.eliminate(&v);
            if s.contradiction {
                return false;
            }
        }
        let mut rows: Vec<(Constraint<V>, Vec<usize>)> = s.cs.iter().cloned().enumerate().map(|(i, c)| (c, alloc::vec![i])).collect();
        for (k, v) in s.vars().iter().enumerate() {
            let (mut next, mut upper, mut lower) = (Vec::new(), Vec::new(), Vec::new());
            for r in rows {
                let c = r.0.expr.coeff(v);
                if c.is_zero() {
                    next.push(r);
                } else if c.is_positive() {
                    upper.push(r);
                } else {
                    lower.push(r);
                }
            }
            for (u, hu) in &upper {
                for (l, hl) in &lower {
                    let mut hist = hu.clone();
                    for h in hl {
                        if !hist.contains(h) {
                            hist.push(*h);
                        }
                    }
                    if hist.len() > k + 2 {
                        continue;
                    }
                    let (ku, kl) = (u.expr.coeff(v), -l.expr.coeff(v));
                    let rel = if u.rel == Rel::Lt || l.rel == Rel::Lt { Rel::Lt } else { Rel::Le };
                    let c = Constraint {
                        expr: u.expr.scale(kl).plus(&l.expr.scale(ku)),
                        rel,
                    }
                    .normalized();
                    match c.trivial() {
                        Some(false) => return false,
                        Some(true) => {}
                        None => next.push((c, hist)),
                    }
                }
            }
            rows = next;
        }
        true
    }

    /// True when every rational solution satisfies `c`.
    pub fn entails(&self, c: &Constraint<V>) -> bool {
        c.negation().into_iter().all(|n| {
            let mut s = self.clone();
            s.add(n);
            !s.satisfiable()
        })
    }

    pub fn entails_all(&self, other: &Self) -> bool {
        if other.contradiction {
            return !self.satisfiable();
        }
        other.cs.iter().all(|c| self.entails(c))
    }

    pub fn map_vars<W: Ord + Clone>(&self, f: &impl Fn(&V) -> W) -> System<W> {
        if self.contradiction {
            return System::falsum();
        }
        System::from_constraints(self.cs.iter().map(|c| c.map_vars(f)))
    }

    pub fn holds(&self, val: &impl Fn(&V) -> Q) -> bool {
        !self.contradiction && self.cs.iter().all(|c| c.holds(val))
    }

    /// Constraints of `self` that `other` also entails: a sound
    /// over-approximation of the disjunction of the two systems.
    pub fn weak_join(&self, other: &Self) -> Self {
        if !self.satisfiable() {
            return other.clone();
        }
        if !other.satisfiable() {
            return self.clone();
        }
        let mut out = Self::new();
        for c in &self.cs {
            if other.entails(c) {
                out.add(c.clone());
            }
        }
        for c in &other.cs {
            if self.entails(c) {
                out.add(c.clone());
            }
        }
        out
    }

    /// Closed convex hull of the union of the two systems, tightened with
    /// the strict constraints both sides share. Falls back to
    /// [`System::weak_join`] when elimination grows too large.
    pub fn hull(&self, other: &Self) -> Self {
        if !self.satisfiable() {
            return other.clone();
        }
        if !other.satisfiable() {
            return self.clone();
        }
        let weak = self.weak_join(other);
        let mut vars = self.vars();
        for v in other.vars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        let lam = LinExpr::var(HullVar::Lambda);
        let mut sys: System<HullVar<V>> = System::new();
        let scaled = |c: &Constraint<V>, side: fn(V) -> HullVar<V>, weight: &LinExpr<HullVar<V>>| {
            let mut e = weight.scale(c.expr.constant);
            for (v, k) in &c.expr.coeffs {
                e.add_term(side(v.clone()), *k);
            }
            let rel = if c.rel == Rel::Eq { Rel::Eq } else { Rel::Le };
            Constraint { expr: e, rel }
        };
        for c in &self.cs {
            sys.add(scaled(c, HullVar::A, &lam));
        }
        let rest = LinExpr::constant(Q::one()).minus(&lam);
        for c in &other.cs {
            sys.add(scaled(c, HullVar::B, &rest));
        }
        sys.add(Constraint::ge(lam.clone(), LinExpr::zero()));
        sys.add(Constraint::le(lam, LinExpr::constant(Q::one())));
        for v in &vars {
            // x = a + b
            let a = LinExpr::var(HullVar::Orig(v.clone()))
                .minus(&LinExpr::var(HullVar::B(v.clone())));
            sys = System::from_constraints(sys.cs.iter().map(|c| Constraint {
                expr: c.expr.substitute(&HullVar::A(v.clone()), &a),
                rel: c.rel,
            }));
        }
        let mut elim: Vec<HullVar<V>> = vars.iter().map(|v| HullVar::B(v.clone())).collect();
        elim.push(HullVar::Lambda);
        for v in &elim {
            let (pos, neg) = sys.cs.iter().fold((0, 0), |(p, n), c| {
                let k = c.expr.coeff(v);
                (p + k.is_positive() as usize, n + k.is_negative() as usize)
            });
            if pos * neg > HULL_LIMIT {
                return weak;
            }
            sys = sys.eliminate(v);
            if sys.cs.len() > HULL_LIMIT {
                return weak;
            }
        }
        let mut out: System<V> = System::new();
        for c in &sys.cs {
            if c.expr.vars().all(|v| matches!(v, HullVar::Orig(_))) {
                out.add(c.map_vars(&|v| match v {
                    HullVar::Orig(x) => x.clone(),
                    _ => unreachable!(),
                }));
            }
        }
        let out = out.conjoin(&weak);
        if out.cs.len() > HULL_LIMIT / 4 {
            return weak;
        }
        out.without_redundancy()
    }

    /// Drops constraints implied by the others.
    pub fn without_redundancy(&self) -> Self {
        let mut cs = self.cs.clone();
        let mut i = 0;
        while i < cs.len() {
            let rest: Vec<Constraint<V>> = cs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, c)| c.clone()).collect();
            if System::from_constraints(rest.clone()).entails(&cs[i]) {
                cs = rest;
            } else {
                i += 1;
            }
        }
        System { cs, contradiction: self.contradiction }
    }

    /// Upper bounds `v <= e` implied by the system, with `e` over the other
    /// variables kept by `keep`.
    pub fn upper_bounds(&self, v: &V, keep: impl Fn(&V) -> bool) -> Vec<LinExpr<V>> {
        let proj = self.project(|w| w == v || keep(w));
        let mut out = Vec::new();
        for c in proj.cs {
            let k = c.expr.coeff(v);
            if k.is_positive() || (c.rel == Rel::Eq && !k.is_zero()) {
                let mut rest = c.expr.clone();
                rest.coeffs.remove(v);
                out.push(rest.scale(-Q::one() / k));
            }
        }
        out
    }

    /// Lower bounds `v >= e`, as for [`System::upper_bounds`].
    pub fn lower_bounds(&self, v: &V, keep: impl Fn(&V) -> bool) -> Vec<LinExpr<V>> {
        let proj = self.project(|w| w == v || keep(w));
        let mut out = Vec::new();
        for c in proj.cs {
            let k = c.expr.coeff(v);
            if k.is_negative() || (c.rel == Rel::Eq && !k.is_zero()) {
                let mut rest = c.expr.clone();
                rest.coeffs.remove(v);
                out.push(rest.scale(-Q::one() / k));
            }
        }
        out
    }
}

fn fmt_q(f: &mut fmt::Formatter<'_>, x: &Q) -> fmt::Result {
    if x.is_integer() {
        write!(f, "{}", x.numer())
    } else {
        write!(f, "{}/{}", x.numer(), x.denom())
    }
}

impl<V: Ord + Clone + fmt::Display> fmt::Display for LinExpr<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.coeffs {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            if !mag.is_one() {
                fmt_q(f, &mag)?;
                f.write_str("*")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        if first {
            fmt_q(f, &self.constant)?;
        } else if !self.constant.is_zero() {
            f.write_str(if self.constant.is_negative() { " - " } else { " + " })?;
            fmt_q(f, &self.constant.abs())?;
        }
        Ok(())
    }
}

impl<V: Ord + Clone + fmt::Display> fmt::Display for Constraint<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // print as `vars rel constant`
        let mut lhs = self.expr.clone();
        let rhs = -lhs.constant;
        lhs.constant = Q::zero();
        let op = match self.rel {
            Rel::Le => "=<",
            Rel::Lt => "<",
            Rel::Eq => "=",
        };
        write!(f, "{lhs} {op} ")?;
        fmt_q(f, &rhs)
    }
}

impl<V: Ord + Clone + fmt::Display> fmt::Display for System<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.contradiction {
            return f.write_str("{false}");
        }
        let parts: Vec<String> = self.cs.iter().map(|c| alloc::format!("{c}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = LinExpr<&'static str>;
    type C = Constraint<&'static str>;

    fn v(n: &'static str) -> E {
        E::var(n)
    }

    fn k(n: i128) -> E {
        E::constant(q(n))
    }

    #[test]
    fn hull_of_two_points_is_the_segment() {
        let a = System::from_constraints([C::eq(v("x"), k(2)), C::eq(v("y"), k(2))]);
        let b = System::from_constraints([C::eq(v("x"), k(1)), C::eq(v("y"), k(1))]);
        let h = a.hull(&b);
        assert!(h.entails(&C::eq(v("x"), v("y"))));
        assert!(h.entails(&C::le(v("x"), k(2))));
        assert!(h.entails(&C::ge(v("x"), k(1))));
        assert!(!h.entails(&C::eq(v("x"), k(1))));
    }

    #[test]
    fn entails_through_equality() {
        // sol = T - 1, T >= 1  |=  sol >= 0
        let s = System::from_constraints([
            C::eq(v("sol"), v("T").plus(&k(-1))),
            C::ge(v("T"), k(1)),
        ]);
        assert!(s.entails(&C::ge(v("sol"), k(0))));
        assert!(!s.entails(&C::ge(v("sol"), k(1))));
    }

    #[test]
    fn entails_bounds() {
        let s = System::from_constraints([C::le(v("sol"), k(1))]);
        assert!(s.entails(&C::le(v("sol"), k(1))));
        let s2 = System::from_constraints([C::le(v("sol"), v("TEff").plus(&k(1)))]);
        assert!(!s2.entails(&C::le(v("sol"), k(1))));
    }

    #[test]
    fn strict_inequalities() {
        let s = System::from_constraints([C::lt(v("x"), k(0)), C::ge(v("x"), k(0))]);
        assert!(!s.satisfiable());
        let s = System::from_constraints([C::le(v("x"), k(0)), C::ge(v("x"), k(0))]);
        assert!(s.satisfiable());
        assert!(s.entails(&C::eq(v("x"), k(0))));
    }

    #[test]
    fn projection_keeps_relation() {
        // a = b + 1, b = c + 1  => a = c + 2
        let s = System::from_constraints([
            C::eq(v("a"), v("b").plus(&k(1))),
            C::eq(v("b"), v("c").plus(&k(1))),
        ]);
        let p = s.project(|x| *x != "b");
        assert!(p.entails(&C::eq(v("a"), v("c").plus(&k(2)))));
        assert!(!p.mentions(&"b"));
    }

    #[test]
    fn weak_join_keeps_common() {
        let a = System::from_constraints([C::le(v("x"), k(1)), C::ge(v("x"), k(0))]);
        let b = System::from_constraints([C::le(v("x"), k(0)), C::ge(v("x"), k(0))]);
        let j = a.weak_join(&b);
        assert!(j.entails(&C::le(v("x"), k(1))));
        assert!(j.entails(&C::ge(v("x"), k(0))));
        assert!(!j.entails(&C::le(v("x"), k(0))));
    }

    #[test]
    fn bounds_extraction() {
        let s = System::from_constraints([
            C::le(v("sol"), v("n").plus(&k(1))),
            C::ge(v("sol"), k(0)),
        ]);
        let ub = s.upper_bounds(&"sol", |x| *x == "n");
        assert_eq!(ub, alloc::vec![v("n").plus(&k(1))]);
    }

    #[test]
    fn display() {
        let c = C::le(v("sol"), v("n").plus(&k(1)));
        assert_eq!(alloc::format!("{c}"), "-n + sol =< 1");
    }
}
