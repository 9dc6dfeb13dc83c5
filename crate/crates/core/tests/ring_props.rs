use num_bigint::BigInt;
use proptest::prelude::*;

use motivic_cover::realization::{euler, zeta};
use motivic_cover::ring::{projective_class, RingElement};

fn element() -> impl Strategy<Value = RingElement> {
    prop::collection::vec((1u64..=12, 0u32..=4, -5i64..=5), 0..6).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(n, k, c)| RingElement::monomial(c, n, k))
            .fold(RingElement::zero(), |acc, t| acc + t)
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #[test]
    fn addition_is_an_abelian_group(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &RingElement::zero(), a.clone());
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(-(-a.clone()), a);
    }

    #[test]
    fn multiplication_is_commutative_and_associative(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &RingElement::one(), a.clone());
        prop_assert!((&a * &RingElement::zero()).is_zero());
    }

    #[test]
    fn distributivity(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn powers_match_repeated_products(a in element(), e in 0u32..4) {
        let mut p = RingElement::one();
        for _ in 0..e {
            p = &p * &a;
        }
        prop_assert_eq!(a.pow(e), p);
    }

    #[test]
    fn basis_product(a in 1u64..=30, b in 1u64..=30, j in 0u32..3, k in 0u32..3) {
        let g = gcd(a, b);
        let lhs = &RingElement::monomial(1, a, j) * &RingElement::monomial(1, b, k);
        prop_assert_eq!(lhs, RingElement::monomial(g, a * b / g, j + k));
    }

    #[test]
    fn render_parse_round_trip(a in element()) {
        let text = a.to_string();
        let back: RingElement = text.parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn euler_is_a_ring_homomorphism(a in element(), b in element()) {
        prop_assert_eq!(euler(&(&a + &b)), euler(&a) + euler(&b));
        prop_assert_eq!(euler(&(&a * &b)), euler(&a) * euler(&b));
        prop_assert_eq!(euler(&RingElement::one()), BigInt::from(1));
    }

    #[test]
    fn zeta_turns_sums_into_products(a in element(), b in element()) {
        prop_assert_eq!(zeta(&(&a + &b)), zeta(&a) * zeta(&b));
        prop_assert_eq!(zeta(&-a.clone()), zeta(&a).inv());
    }

    #[test]
    fn zeta_ignores_lefschetz(a in element(), k in 0u32..3) {
        let shifted = &a * &RingElement::lefschetz().pow(k);
        prop_assert_eq!(zeta(&shifted), zeta(&a));
    }

    #[test]
    fn zeta_degree_is_minus_euler(a in element()) {
        prop_assert_eq!(zeta(&a).degree(), -euler(&a));
    }
}

#[test]
fn parses_common_forms() {
    let x: RingElement = "[mu_2]*(L-1)^2 - 3*L + [mu_6]".parse().unwrap();
    let expected = &RingElement::mu(2) * &RingElement::torus(2) - RingElement::monomial(3, 1, 1) + RingElement::mu(6);
    assert_eq!(x, expected);
    assert!("[mu_0]".parse::<RingElement>().is_err());
    assert!("L +".parse::<RingElement>().is_err());
}

#[test]
fn projective_classes() {
    assert_eq!(projective_class(0), RingElement::one());
    assert_eq!(projective_class(2), "L^2+L+1".parse().unwrap());
    assert_eq!(euler(&projective_class(5)), BigInt::from(6));
}
