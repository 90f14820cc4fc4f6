use core_ideals::field::binomial_mod_p;
use core_ideals::{FieldElement, FieldSpec, Monomial, TermOrder};
use proptest::prelude::*;
use std::sync::OnceLock;

fn fields() -> &'static [FieldSpec] {
    static F: OnceLock<Vec<FieldSpec>> = OnceLock::new();
    F.get_or_init(|| {
        vec![
            FieldSpec::new(2, 16).unwrap(),
            FieldSpec::new(3, 8).unwrap(),
            FieldSpec::new(3, 11).unwrap(),
            FieldSpec::prime(101).unwrap(),
            FieldSpec::prime(65521).unwrap(),
            FieldSpec::new(2, 20).unwrap(),
            FieldSpec::new(5, 3).unwrap(),
        ]
    })
}

fn elem(f: &FieldSpec, x: u64) -> FieldElement {
    let digits: Vec<u64> = {
        let mut v = Vec::new();
        let mut x = x % f.size();
        for _ in 0..f.degree() {
            v.push(x % f.characteristic());
            x /= f.characteristic();
        }
        v
    };
    f.from_coeffs(&digits)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn field_axioms(k in 0usize..7, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = &fields()[k];
        let (a, b, c) = (elem(f, a), elem(f, b), elem(f, c));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.mul(a, f.one()), a);
        if !a.is_zero() {
            let inv = f.inv(a).unwrap();
            prop_assert_eq!(f.mul(a, inv), f.one());
            prop_assert_eq!(f.div(f.mul(b, a), a).unwrap(), b);
        } else {
            prop_assert!(f.inv(a).is_err());
        }
    }

    #[test]
    fn frobenius_is_additive(k in 0usize..7, a in any::<u64>(), b in any::<u64>()) {
        let f = &fields()[k];
        let p = f.characteristic();
        let (a, b) = (elem(f, a), elem(f, b));
        prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
        prop_assert_eq!(f.pow(a, f.size()), a);
    }

    #[test]
    fn term_orders_are_multiplicative(
        a in proptest::collection::vec(0u32..6, 4),
        b in proptest::collection::vec(0u32..6, 4),
        c in proptest::collection::vec(0u32..6, 4),
        which in 0usize..4,
    ) {
        let order = [TermOrder::Grevlex, TermOrder::Lex, TermOrder::BlockElimination { split: 1 }, TermOrder::BlockElimination { split: 2 }][which];
        let (a, b, c) = (
            Monomial::from_exponents(&a).unwrap(),
            Monomial::from_exponents(&b).unwrap(),
            Monomial::from_exponents(&c).unwrap(),
        );
        let ac = a.checked_mul(&c).unwrap();
        let bc = b.checked_mul(&c).unwrap();
        prop_assert_eq!(order.cmp(&a, &b), order.cmp(&ac, &bc));
        prop_assert!(order.cmp(&Monomial::one(), &a) != std::cmp::Ordering::Greater);
    }
}

fn exact_binomial(n: u64, k: u64) -> u128 {
    let fact = |m: u64| (1..=m as u128).product::<u128>();
    fact(n) / (fact(k) * fact(n - k))
}

#[test]
fn binomials_match_factorials() {
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 101, 65521] {
        for n in 0..=20u64 {
            for k in 0..=n {
                let expect = (exact_binomial(n, k) % p as u128) as u64;
                assert_eq!(binomial_mod_p(n, k, p).unwrap(), expect, "C({n},{k}) mod {p}");
            }
        }
    }
    assert!(binomial_mod_p(3, 4, 5).is_err());
}
