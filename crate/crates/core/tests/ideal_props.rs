mod common;

use common::*;
use core_ideals::{Ring, RingExt};
use proptest::prelude::*;

fn rings() -> [Ring; 2] {
    [ring(101, 1, &["x", "y"], &[]), ring(2, 16, &["x", "y", "z"], &["z^3"])]
}

fn gens(nvars: usize) -> impl Strategy<Value = Vec<RawPoly>> {
    proptest::collection::vec(raw_poly(nvars, 3, 3), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn colon_adjunction(k in 0usize..2, a in gens(3), b in gens(3), c in gens(3)) {
        let r = &rings()[k];
        let nv = r.nvars();
        let trim = |g: &Vec<RawPoly>| -> Vec<RawPoly> {
            g.iter().map(|p| p.iter().map(|(e, c)| (e[..nv].to_vec(), *c)).collect()).collect()
        };
        let a = primary(r, &trim(&a), 4);
        let b = ideal(r, &trim(&b));
        let c = ideal(r, &trim(&c));
        prop_assume!(!b.is_zero());
        let q = a.colon(&b).unwrap();
        prop_assert!(q.contains_ideal(&a).unwrap());
        prop_assert!(a.contains_ideal(&q.product(&b).unwrap()).unwrap());
        prop_assert_eq!(
            a.contains_ideal(&c.product(&b).unwrap()).unwrap(),
            q.contains_ideal(&c).unwrap()
        );
        prop_assert!(q.equals(&a.colon_elimination(&b).unwrap()).unwrap());
    }

    #[test]
    fn intersections(k in 0usize..2, a in gens(3), b in gens(3), c in gens(3), d in gens(3)) {
        let r = &rings()[k];
        let nv = r.nvars();
        let trim = |g: &Vec<RawPoly>| -> Vec<RawPoly> {
            g.iter().map(|p| p.iter().map(|(e, c)| (e[..nv].to_vec(), *c)).collect()).collect()
        };
        let a = primary(r, &trim(&a), 4);
        let b = primary(r, &trim(&b), 3);
        let c = primary(r, &trim(&c), 4);
        let ab = a.intersect(&b).unwrap();
        prop_assert!(ab.equals(&b.intersect(&a).unwrap()).unwrap());
        prop_assert!(ab.equals(&a.intersect_elimination(&b).unwrap()).unwrap());
        prop_assert!(a.contains_ideal(&ab).unwrap() && b.contains_ideal(&ab).unwrap());
        prop_assert!(ab.contains_ideal(&a.product(&b).unwrap()).unwrap());
        let left = ab.intersect(&c).unwrap();
        let right = a.intersect(&b.intersect(&c).unwrap()).unwrap();
        prop_assert!(left.equals(&right).unwrap());
        // modular law with A' = C·D ⊆ C
        let a2 = c.product(&ideal(r, &trim(&d))).unwrap();
        let lhs = a2.sum(&b).unwrap().intersect(&c).unwrap();
        let rhs = a2.sum(&b.intersect(&c).unwrap()).unwrap();
        prop_assert!(lhs.equals(&rhs).unwrap());
    }

    #[test]
    fn powers_and_sums(k in 0usize..2, a in gens(3), b in gens(3)) {
        let r = &rings()[k];
        let nv = r.nvars();
        let trim = |g: &Vec<RawPoly>| -> Vec<RawPoly> {
            g.iter().map(|p| p.iter().map(|(e, c)| (e[..nv].to_vec(), *c)).collect()).collect()
        };
        let a = ideal(r, &trim(&a));
        let b = ideal(r, &trim(&b));
        let a2 = a.product(&a).unwrap();
        prop_assert!(a.power(2).unwrap().equals(&a2).unwrap());
        prop_assert!(a.power(3).unwrap().equals(&a2.product(&a).unwrap()).unwrap());
        prop_assert!(a.power(1).unwrap().equals(&a).unwrap());
        let s = a.sum(&b).unwrap();
        prop_assert!(s.equals(&b.sum(&a).unwrap()).unwrap());
        prop_assert!(s.contains_ideal(&a).unwrap() && s.contains_ideal(&b).unwrap());
        prop_assert!(a.product(&b).unwrap().equals(&b.product(&a).unwrap()).unwrap());
    }
}

#[test]
fn intersections_away_from_the_origin() {
    let r = ring(101, 1, &["x", "y"], &[]);
    let at_origin = r.parse_ideal("x^2, y").unwrap();
    let elsewhere = r.parse_ideal("x - 1, y^2").unwrap();
    let both = at_origin.intersect(&elsewhere).unwrap();
    assert!(both.equals(&at_origin.intersect_elimination(&elsewhere).unwrap()).unwrap());
    assert_eq!(both.colength().unwrap(), Some(4));
}

#[test]
fn inhomogeneous_primary_intersection() {
    // y^3 is not in the first ideal although its staircase stops in degree 2
    let r = ring(2, 16, &["x", "y", "z"], &["z^3"]);
    let a = r.parse_ideal("x, z^2, yz, y^3 + z").unwrap();
    let b = r.parse_ideal("xy, yz^2, xz^2, y^2z, x^2z, y^3, x^3").unwrap();
    let ab = a.intersect(&b).unwrap();
    assert!(ab.equals(&a.intersect_elimination(&b).unwrap()).unwrap());
    assert!(a.contains_ideal(&ab).unwrap());
    assert_eq!(ab.colength().unwrap(), Some(10));
}
