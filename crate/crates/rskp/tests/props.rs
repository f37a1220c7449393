//! Property tests for the notation system and the formula syntax.

use proptest::prelude::*;
use rskp::ord::{
    below_eps_omega_plus_1, compare, e_tower, natural_sum, normalize_cnf, parse_ord,
    Cmp, Ord as OrdN,
};
use rskp::syntax::{parse_formula, Formula, RsTerm};

fn ord_strategy() -> impl Strategy<Value = OrdN> {
    let leaf = prop_oneof![
        (0u64..6).prop_map(OrdN::Nat),
        Just(OrdN::Omega),
    ];
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| OrdN::OmegaPow(Box::new(e))),
            inner.clone().prop_map(|e| OrdN::Eps(Box::new(e))),
            prop::collection::vec(inner, 2..4).prop_map(OrdN::Sum),
        ]
    })
}

fn le(a: &OrdN, b: &OrdN) -> bool {
    compare(a, b) != Cmp::Greater
}

proptest! {
    #[test]
    fn compare_is_reflexive(a in ord_strategy()) {
        prop_assert_eq!(compare(&a, &a), Cmp::Equal);
    }

    #[test]
    fn compare_is_antisymmetric(a in ord_strategy(), b in ord_strategy()) {
        prop_assert_eq!(compare(&a, &b), compare(&b, &a).rev());
    }

    #[test]
    fn compare_is_transitive(a in ord_strategy(), b in ord_strategy(), c in ord_strategy()) {
        if le(&a, &b) && le(&b, &c) {
            prop_assert!(le(&a, &c));
        }
    }

    #[test]
    fn natural_sum_commutes(a in ord_strategy(), b in ord_strategy()) {
        prop_assert_eq!(compare(&natural_sum(&a, &b), &natural_sum(&b, &a)), Cmp::Equal);
    }

    #[test]
    fn natural_sum_associates(a in ord_strategy(), b in ord_strategy(), c in ord_strategy()) {
        let l = natural_sum(&natural_sum(&a, &b), &c);
        let r = natural_sum(&a, &natural_sum(&b, &c));
        prop_assert_eq!(compare(&l, &r), Cmp::Equal);
    }

    #[test]
    fn natural_sum_is_strictly_monotone(a in ord_strategy(), b in ord_strategy(), c in ord_strategy()) {
        if compare(&a, &b) == Cmp::Less {
            prop_assert_eq!(compare(&natural_sum(&a, &c), &natural_sum(&b, &c)), Cmp::Less);
        }
    }

    #[test]
    fn zero_is_a_natural_sum_identity(a in ord_strategy()) {
        prop_assert_eq!(compare(&natural_sum(&a, &OrdN::Nat(0)), &a), Cmp::Equal);
    }

    #[test]
    fn normalization_preserves_value_and_is_idempotent(a in ord_strategy()) {
        let n = normalize_cnf(&a);
        prop_assert_eq!(compare(&n, &a), Cmp::Equal);
        prop_assert_eq!(normalize_cnf(&n), n);
    }

    #[test]
    fn display_roundtrips_by_value(a in ord_strategy()) {
        let back = parse_ord(&a.to_string()).unwrap();
        prop_assert_eq!(compare(&back, &a), Cmp::Equal);
    }

    #[test]
    fn tower_witness_is_least(a in ord_strategy()) {
        let (flag, idx) = below_eps_omega_plus_1(&a);
        match (flag, idx) {
            (true, Some(n)) => {
                prop_assert_eq!(compare(&a, &e_tower(n)), Cmp::Less);
                if n > 0 {
                    prop_assert!(compare(&a, &e_tower(n - 1)) != Cmp::Less);
                }
            }
            (false, None) => {
                for n in 0..8 {
                    prop_assert!(compare(&a, &e_tower(n)) != Cmp::Less);
                }
            }
            other => prop_assert!(false, "inconsistent witness {:?}", other),
        }
    }
}

// Formula generation: a compact seeded builder keeps binder indices valid.

fn term_from(seed: &mut u64, binders: usize) -> RsTerm {
    *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
    let pick = (*seed >> 33) as usize;
    if binders > 0 && pick % 3 == 0 {
        return rskp::syntax::vr(pick % binders);
    }
    match pick % 3 {
        0 => rskp::syntax::cempty(),
        1 => rskp::syntax::comega(),
        _ => RsTerm::Const(rskp::hfset::HFSet::singleton(rskp::hfset::HFSet::empty())),
    }
}

fn formula_from(seed: &mut u64, depth: usize, binders: usize) -> Formula {
    *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
    let pick = (*seed >> 33) as usize;
    if depth == 0 {
        let l = term_from(seed, binders);
        let r = term_from(seed, binders);
        return if pick % 2 == 0 {
            rskp::syntax::mem(l, r)
        } else {
            rskp::syntax::nmem(l, r)
        };
    }
    match pick % 6 {
        0 => rskp::syntax::and(
            formula_from(seed, depth - 1, binders),
            formula_from(seed, depth - 1, binders),
        ),
        1 => rskp::syntax::or(
            formula_from(seed, depth - 1, binders),
            formula_from(seed, depth - 1, binders),
        ),
        2 => rskp::syntax::ball(
            term_from(seed, 0),
            formula_from(seed, depth - 1, binders + 1),
        ),
        3 => rskp::syntax::bex(
            term_from(seed, 0),
            formula_from(seed, depth - 1, binders + 1),
        ),
        4 => rskp::syntax::all(formula_from(seed, depth - 1, binders + 1)),
        _ => rskp::syntax::ex(formula_from(seed, depth - 1, binders + 1)),
    }
}

proptest! {
    #[test]
    fn negation_is_an_involution(seed in any::<u64>(), depth in 0usize..4) {
        let mut s = seed;
        let f = formula_from(&mut s, depth, 0);
        prop_assert_eq!(f.negate().negate(), f.clone());
        prop_assert_eq!(f.is_delta0(), f.negate().is_delta0());
        prop_assert!(f.is_closed());
    }

    #[test]
    fn formula_display_roundtrips(seed in any::<u64>(), depth in 0usize..4) {
        let mut s = seed;
        let f = formula_from(&mut s, depth, 0);
        let back = parse_formula(&f.to_string()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn instantiation_commutes_with_negation(seed in any::<u64>(), depth in 0usize..3) {
        let mut s = seed;
        let body = formula_from(&mut s, depth, 1);
        let t = rskp::syntax::cempty();
        let f = rskp::syntax::ex(body);
        if let (Some(a), Some(b)) = (
            rskp::syntax::child_term(&f, &t),
            rskp::syntax::child_term(&f.negate(), &t),
        ) {
            prop_assert_eq!(a.negate(), b);
        }
    }
}
