#![allow(dead_code)]

use std::sync::Arc;

use core_ideals::{FieldSpec, Ideal, Monomial, Polynomial, Ring, RingExt, RingSpec, Term};
use proptest::prelude::*;

pub fn ring(p: u64, e: u32, vars: &[&str], quotient: &[&str]) -> Ring {
    RingSpec::parse(Arc::new(FieldSpec::new(p, e).unwrap()), vars, quotient).unwrap()
}

/// (exponents, coefficient seed) pairs.
pub type RawPoly = Vec<(Vec<u32>, u64)>;

pub fn raw_poly(nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = RawPoly> {
    proptest::collection::vec(
        (proptest::collection::vec(0..=max_deg, nvars), any::<u64>()),
        1..=max_terms,
    )
    .prop_map(move |terms| {
        terms
            .into_iter()
            .map(|(mut e, c)| {
                while e.iter().sum::<u32>() > max_deg {
                    let k = e.iter().position(|&x| x > 0).unwrap();
                    e[k] -= 1;
                }
                if e.iter().sum::<u32>() == 0 {
                    e[0] = 1;
                }
                (e, c)
            })
            .collect()
    })
}

pub fn build(ring: &Ring, raw: &RawPoly) -> Polynomial {
    let field = ring.field();
    let terms = raw
        .iter()
        .map(|(e, c)| Term {
            coeff: field.from_int((*c % field.characteristic().max(2)) as i64 + 1),
            mono: Monomial::from_exponents(e).unwrap(),
        })
        .collect();
    ring.poly_ring().from_terms(terms)
}

pub fn ideal(ring: &Ring, raws: &[RawPoly]) -> Ideal {
    ring.ideal(raws.iter().map(|r| build(ring, r)).collect()).unwrap()
}

/// The ideal plus m^k, so that it is m-primary.
pub fn primary(ring: &Ring, raws: &[RawPoly], k: u32) -> Ideal {
    ideal(ring, raws).sum(&ring.maximal_power(k).unwrap()).unwrap()
}
