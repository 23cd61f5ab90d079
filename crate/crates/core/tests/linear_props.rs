//! Invariants of the linear constraint engine checked on integer points of
//! a small box.

use proptest::prelude::*;
use specpl_core::linear::{q, Constraint, LinExpr, System, Q};

const R: i64 = 3;

fn row() -> impl Strategy<Value = ([i64; 3], i64, bool)> {
    ([-2i64..=2, -2i64..=2, -2i64..=2], -4i64..=4, prop::bool::weighted(0.2))
}

fn constraint((coef, rhs, eq): ([i64; 3], i64, bool)) -> Constraint<u8> {
    let mut e = LinExpr::zero();
    for (i, c) in coef.iter().enumerate() {
        e.add_term(i as u8, q(*c as i128));
    }
    let r = LinExpr::constant(q(rhs as i128));
    if eq {
        Constraint::eq(e, r)
    } else {
        Constraint::le(e, r)
    }
}

fn system(rows: &[([i64; 3], i64, bool)]) -> System<u8> {
    let mut out: Vec<Constraint<u8>> = rows.iter().copied().map(constraint).collect();
    for v in 0..3u8 {
        out.push(Constraint::le(LinExpr::var(v), LinExpr::constant(q(R as i128))));
        out.push(Constraint::ge(LinExpr::var(v), LinExpr::constant(q(-R as i128))));
    }
    System::from_constraints(out)
}

fn points() -> impl Iterator<Item = [Q; 3]> {
    (-R..=R).flat_map(|a| (-R..=R).flat_map(move |b| (-R..=R).map(move |c| [a, b, c].map(|x| q(x as i128)))))
}

fn at(p: &[Q; 3]) -> impl Fn(&u8) -> Q + '_ {
    move |v| p[*v as usize]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn points_of_a_system_satisfy_what_it_entails(rows in prop::collection::vec(row(), 1..4), query in row()) {
        let s = system(&rows);
        let c = constraint((query.0, query.1, false));
        if s.entails(&c) {
            for p in points().filter(|p| s.holds(&at(p))) {
                prop_assert!(c.holds(&at(&p)));
            }
        }
    }

    #[test]
    fn a_satisfying_point_makes_the_system_satisfiable(rows in prop::collection::vec(row(), 1..4)) {
        let s = system(&rows);
        if points().any(|p| s.holds(&at(&p))) {
            prop_assert!(s.satisfiable());
        }
    }

    #[test]
    fn elimination_keeps_every_point(rows in prop::collection::vec(row(), 1..4), v in 0u8..3) {
        let s = system(&rows);
        let e = s.eliminate(&v);
        prop_assert!(!e.mentions(&v));
        for p in points().filter(|p| s.holds(&at(p))) {
            prop_assert!(e.holds(&at(&p)));
        }
    }

    #[test]
    fn hull_contains_both_arguments(a in prop::collection::vec(row(), 1..3), b in prop::collection::vec(row(), 1..3)) {
        let (sa, sb) = (system(&a), system(&b));
        let h = sa.hull(&sb);
        for p in points().filter(|p| sa.holds(&at(p)) || sb.holds(&at(p))) {
            prop_assert!(h.holds(&at(&p)));
        }
        let w = sa.weak_join(&sb);
        for p in points().filter(|p| sa.holds(&at(p)) || sb.holds(&at(p))) {
            prop_assert!(w.holds(&at(&p)));
        }
    }

    #[test]
    fn redundancy_removal_is_equivalent(rows in prop::collection::vec(row(), 1..4)) {
        let s = system(&rows);
        let r = s.without_redundancy();
        for p in points() {
            prop_assert_eq!(s.holds(&at(&p)), r.holds(&at(&p)));
        }
    }
}

#[test]
fn entailment_of_a_chain() {
    // x <= y, y <= 2 entails x <= 2 but not x >= 0
    let x = || LinExpr::var(0u8);
    let y = || LinExpr::var(1u8);
    let s = System::from_constraints([Constraint::le(x(), y()), Constraint::le(y(), LinExpr::constant(q(2)))]);
    assert!(s.entails(&Constraint::le(x(), LinExpr::constant(q(2)))));
    assert!(!s.entails(&Constraint::ge(x(), LinExpr::constant(q(0)))));
    assert!(System::<u8>::falsum().entails(&Constraint::ge(x(), LinExpr::constant(q(0)))));
}
