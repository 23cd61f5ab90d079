use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;

use proptest::prelude::*;

use super::*;
use crate::ast::{parse_term, Functor, Term};
use crate::concrete;
use crate::linear::{q, Constraint};

fn theta(pairs: &[(&str, &str)]) -> BTreeMap<String, Term> {
    pairs
        .iter()
        .map(|(v, t)| (v.to_string(), parse_term(t).unwrap()))
        .collect()
}

fn s(v: &str) -> String {
    v.to_string()
}

#[test]
fn abstraction_models_its_source() {
    let th = theta(&[("X", "[1,2|T]"), ("Y", "f(T,A)"), ("Z", "[a,b]")]);
    let b = AbsSubst::abstraction(&th);
    assert!(b.models(&th));
    assert!(b.vars_share("X", "Y"));
    assert!(!b.vars_share("X", "Z"));
    assert_eq!(b.mode_of("Z"), Mode::GROUND);
    assert_eq!(b.type_of("Z"), TypeExpr::list(TypeExpr::Atom));
    let bad = theta(&[("X", "[1,2|T]"), ("Y", "f(T,A)"), ("Z", "[a]")]);
    assert!(!b.models(&bad));
}

#[test]
fn var_var_binding_of_fresh_vars_is_sure() {
    let mut b = AbsSubst::new();
    b.add_fresh_var("X");
    b.add_fresh_var("Y");
    let out = b.unify_var_var("X", "Y");
    assert!(out.sure_success);
    assert!(out.beta.vars_share("X", "Y"));
    assert_eq!(out.beta.mode_of("X"), Mode::VAR);
}

#[test]
fn list_head_test_on_ground_list() {
    let b = AbsSubst::from_vars(
        &[("L", Mode::GROUND, TypeExpr::list(TypeExpr::Int), true)],
        &[],
    );
    let out = b.unify_var_functor("L", &Functor::cons(), &[s("H"), s("T")]);
    assert!(!out.sure_success && !out.sure_failure);
    let beta = out.beta;
    assert_eq!(beta.mode_of("H"), Mode::GROUND);
    assert_eq!(beta.type_of("H"), TypeExpr::Int);
    assert_eq!(beta.type_of("T"), TypeExpr::list(TypeExpr::Int));
    // sz(L) = 1 + sz(T)
    let (l, t) = (beta.size_of_var("L").unwrap(), beta.size_of_var("T").unwrap());
    assert!(beta
        .constraints()
        .entails(&Constraint::eq(l, t.plus_const(q(1)))));
}

#[test]
fn nil_against_cons_fails_surely() {
    let mut b = AbsSubst::new();
    b.add_fresh_var("H");
    b.add_fresh_var("T");
    let c = b.unify_var_functor("L", &Functor::cons(), &[s("H"), s("T")]).beta;
    let out = c.unify_var_functor("L", &Functor::nil(), &[]);
    assert!(out.sure_failure);
    assert!(out.beta.is_bottom());
}

#[test]
fn binding_output_var_to_ground_term_is_sure() {
    let b = AbsSubst::from_vars(
        &[
            ("A", Mode::GROUND, TypeExpr::Any, true),
            ("R", Mode::VAR, TypeExpr::Any, true),
        ],
        &[],
    );
    let out = b.unify_var_var("R", "A");
    assert!(out.sure_success);
    assert_eq!(out.beta.mode_of("R"), Mode::GROUND);
    assert!(out.touched.contains("R"));
    assert!(!out.touched.contains("A"));
}

#[test]
fn lub_and_glb_basic_laws() {
    let a = AbsSubst::abstraction(&theta(&[("X", "[1]"), ("Y", "Z")]));
    let b = AbsSubst::abstraction(&theta(&[("X", "[]"), ("Y", "a")]));
    let j = a.lub(&b);
    assert!(a.leq(&j) && b.leq(&j));
    assert_eq!(j.type_of("X"), TypeExpr::list(TypeExpr::Int));
    assert_eq!(j.mode_of("Y"), Mode::GV);
    let m = j.glb(&a);
    assert!(m.equivalent(&a));
    assert!(a.glb(&b).is_bottom());
}

#[test]
fn dump_lists_nodes_sharing_and_sizes() {
    let b = AbsSubst::abstraction(&theta(&[("X", "[A|B]")]));
    let text = b.to_string();
    assert!(text.contains("frm=[1|2]"), "{text}");
    assert!(text.contains("ps={}"));
}

// random terms over a small vocabulary

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0i64..3).prop_map(Term::Int),
        prop_oneof![Just("a"), Just("[]")].prop_map(Term::atom),
        prop_oneof![Just("A"), Just("B"), Just("C")].prop_map(Term::var),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(h, t)| Term::cons(h, t)),
            (inner.clone(), inner).prop_map(|(x, y)| Term::compound("f", vec![x, y])),
        ]
    })
}

fn arb_theta() -> impl Strategy<Value = BTreeMap<String, Term>> {
    (arb_term(), arb_term(), arb_term()).prop_map(|(x, y, z)| {
        let mut m = BTreeMap::new();
        m.insert(s("X"), x);
        m.insert(s("Y"), y);
        m.insert(s("Z"), z);
        m
    })
}

fn apply(th: &BTreeMap<String, Term>, mgu: &BTreeMap<String, Term>) -> BTreeMap<String, Term> {
    th.iter()
        .map(|(v, t)| (v.clone(), t.substitute(&|n| mgu.get(n).cloned())))
        .collect()
}

fn check_unify(th: &BTreeMap<String, Term>, beta: &AbsSubst, lhs: &Term, out: &UnifyOutcome) -> Result<(), TestCaseError> {
    let _ = beta;
    let rhs = th["X"].clone();
    let mgu = concrete::unify(&rhs, lhs, true).unwrap();
    match mgu {
        None => prop_assert!(!out.sure_success, "sure success but concrete failure"),
        Some(m) => {
            prop_assert!(!out.sure_failure, "sure failure but concrete success");
            let after = apply(th, &m);
            prop_assert!(out.beta.models(&after), "post state not modelled:\n{:?}\n{}", after, out.beta);
            for (v, t) in th {
                if &after[v] != t {
                    prop_assert!(out.touched.contains(v), "{} changed but not touched", v);
                }
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn abstraction_is_exact(th in arb_theta()) {
        prop_assert!(AbsSubst::abstraction(&th).models(&th));
    }

    #[test]
    fn lub_is_an_upper_bound(a in arb_theta(), b in arb_theta()) {
        let (x, y) = (AbsSubst::abstraction(&a), AbsSubst::abstraction(&b));
        let j = x.lub(&y);
        prop_assert!(j.models(&a), "{}", j);
        prop_assert!(j.models(&b), "{}", j);
        prop_assert!(x.leq(&j));
    }

    #[test]
    fn glb_keeps_common_members(a in arb_theta(), b in arb_theta()) {
        let (x, y) = (AbsSubst::abstraction(&a), AbsSubst::abstraction(&b));
        let j = x.lub(&y);
        let m = j.glb(&x);
        prop_assert!(m.models(&a), "{}", m);
    }

    #[test]
    fn var_var_unification_is_sound(a in arb_theta(), b in arb_theta(), pick in any::<bool>()) {
        let beta = AbsSubst::abstraction(&a).lub(&AbsSubst::abstraction(&b));
        let th = if pick { a } else { b };
        let out = beta.unify_var_var("X", "Y");
        check_unify(&th, &beta, &th["Y"].clone(), &out)?;
    }

    #[test]
    fn var_functor_unification_is_sound(a in arb_theta(), b in arb_theta(), cons in any::<bool>()) {
        let beta = AbsSubst::abstraction(&a).lub(&AbsSubst::abstraction(&b));
        let f = if cons { Functor::cons() } else { Functor::Atom(s("f"), 2) };
        let out = beta.unify_var_functor("X", &f, &[s("Y"), s("Z")]);
        let lhs = f.apply(vec![a["Y"].clone(), a["Z"].clone()]);
        check_unify(&a, &beta, &lhs, &out)?;
    }
}

#[test]
fn sizes_survive_lub() {
    let a = AbsSubst::abstraction(&theta(&[("X", "[1,2]"), ("Y", "[3,4]")]));
    let b = AbsSubst::abstraction(&theta(&[("X", "[1]"), ("Y", "[3]")]));
    let j = a.lub(&b);
    let (x, y) = (j.size_of_var("X").unwrap(), j.size_of_var("Y").unwrap());
    assert!(j.constraints().entails(&Constraint::eq(x, y)), "{j}");
}

