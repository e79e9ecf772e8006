mod common;

use common::*;
use hf_core::exterior::{all_blades, eta, omega};
use hf_core::lefschetz::{op_h, op_l, op_lambda};
use hf_core::{Integer, Multivector};
use proptest::prelude::*;

fn genus_and_pair() -> impl Strategy<Value = (usize, Multivector<Integer>, Multivector<Integer>)> {
    (1usize..=5).prop_flat_map(|g| (Just(g), multivector(g), multivector(g)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn wedge_matches_index_lists((_, a, b) in genus_and_pair()) {
        prop_assert_eq!(to_ref(&a.wedge(&b).unwrap()), ref_wedge(&to_ref(&a), &to_ref(&b)));
    }

    #[test]
    fn contract_matches_index_lists((_, a, b) in genus_and_pair()) {
        prop_assert_eq!(to_ref(&a.contract(&b).unwrap()), ref_contract(&to_ref(&a), &to_ref(&b)));
    }

    #[test]
    fn contraction_by_a_product_nests(
        (a, b, x) in (1usize..=5).prop_flat_map(|g| (multivector(g), multivector(g), multivector(g)))
    ) {
        prop_assert_eq!(a.wedge(&b).unwrap().contract(&x).unwrap(), a.contract(&b.contract(&x).unwrap()).unwrap());
    }

    #[test]
    fn signed_leibniz(
        (g, p, a, b, v) in (1usize..=5).prop_flat_map(|g| (0..=2 * g).prop_flat_map(move |p| {
            (Just(g), Just(p), homogeneous(g, p), multivector(g), 1..=2 * g)
        }))
    ) {
        let v = Multivector::<Integer>::basis_vector(g, v);
        let sign = small(if p % 2 == 0 { 1 } else { -1 });
        let lhs = v.contract(&a.wedge(&b).unwrap()).unwrap();
        let rhs = v.contract(&a).unwrap().wedge(&b).unwrap() + a.wedge(&v.contract(&b).unwrap()).unwrap().scale(&sign);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn commutator_on_random_elements((g, a, _) in genus_and_pair()) {
        let w = omega::<Integer>(g);
        let lhs = w.contract(&w.wedge(&a).unwrap()).unwrap() - w.wedge(&w.contract(&a).unwrap()).unwrap();
        prop_assert_eq!(lhs, op_h(&a));
    }

    #[test]
    fn sl2_relations_on_random_elements((_, a, _) in genus_and_pair()) {
        let (lam, l, h) = (op_lambda(&a), op_l(&a), op_h(&a));
        prop_assert_eq!(op_lambda(&h) - op_h(&lam), lam.scale(&small(-2)));
        prop_assert_eq!(op_l(&h) - op_h(&l), l.scale(&small(2)));
        prop_assert_eq!(op_lambda(&l) - op_l(&lam), h);
    }

    #[test]
    fn swap_lemma(
        (g, p, xi, k) in (1usize..=5).prop_flat_map(|g| (0..=2 * g).prop_flat_map(move |p| {
            (Just(g), Just(p), homogeneous(g, p), 0..=g)
        }))
    ) {
        let eta_at = |n: i64| if (0..=g as i64).contains(&n) { eta::<Integer>(n as usize, g) } else { Multivector::zero(g) };
        let lhs = xi.contract(&eta_at(k as i64)).unwrap();
        let mut rhs = Multivector::zero(g);
        for l in 0..=g as i64 {
            rhs = rhs + eta_at(l).contract(&xi).unwrap().wedge(&eta_at(k as i64 - p as i64 + l)).unwrap();
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn star_exchanges_wedge_and_contraction(
        (g, a, v) in (1usize..=5).prop_flat_map(|g| (Just(g), multivector(g), 1..=2 * g))
    ) {
        let v = Multivector::<Integer>::basis_vector(g, v);
        prop_assert_eq!(v.wedge(&a).unwrap().star(), v.contract(&a.star()).unwrap());
        prop_assert_eq!(v.contract(&a).unwrap().star(), -v.wedge(&a.star()).unwrap());
    }

    #[test]
    fn star_squares_to_sign(
        (g, p, a) in (1usize..=5).prop_flat_map(|g| (0..=2 * g).prop_flat_map(move |p| (Just(g), Just(p), homogeneous(g, p))))
    ) {
        let sign = small(if (g + p) % 2 == 0 { 1 } else { -1 });
        prop_assert_eq!(a.star().star(), a.scale(&sign));
    }
}

#[test]
fn star_is_contraction_into_the_volume_form() {
    for g in 1..=4 {
        let vol = to_ref(&eta::<Integer>(g, g));
        for b in all_blades(g) {
            let a = Multivector::<Integer>::blade(g, b);
            assert_eq!(
                to_ref(&a.star()),
                ref_contract(&to_ref(&a), &vol),
                "g={g} {b:?}"
            );
        }
    }
}

#[test]
fn eta_products_are_binomial_multiples() {
    for g in 1..=6 {
        for i in 0..=g {
            for j in 0..=g {
                let c = num_integer::binomial(i + j, i) as i64;
                let rhs = eta::<Integer>(i + j, g).scale(&small(c));
                assert_eq!(
                    eta::<Integer>(i, g).wedge(&eta(j, g)).unwrap(),
                    rhs,
                    "g={g} i={i} j={j}"
                );
            }
        }
    }
}

#[test]
fn eta_is_the_divided_power_of_omega() {
    // η_k · k! = ω^k, checked against index-list wedges.
    for g in 1..=4 {
        let w = to_ref(&omega::<Integer>(g));
        let mut power: common::Ref = [(vec![], 1)].into_iter().collect();
        let mut fact = 1;
        for k in 0..=g {
            let expected: common::Ref = to_ref(&eta::<Integer>(k, g))
                .into_iter()
                .map(|(b, c)| (b, c * fact))
                .collect();
            assert_eq!(power, expected, "g={g} k={k}");
            power = ref_wedge(&power, &w);
            fact *= k as i64 + 1;
        }
    }
}
