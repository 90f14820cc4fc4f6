mod common;

use common::*;
use core_ideals::engine::{kn_binomial, kn_bruteforce, kn_general, DEFAULT_T_MAX};
use core_ideals::{GeneralElementConfig, Ideal, Ring, RingExt};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_raw(rng: &mut ChaCha8Rng, nvars: usize, max_deg: u32) -> RawPoly {
    let terms = rng.gen_range(1..=2);
    (0..terms)
        .map(|_| {
            let deg = rng.gen_range(1..=max_deg);
            let mut e = vec![0u32; nvars];
            for _ in 0..deg {
                e[rng.gen_range(0..nvars)] += 1;
            }
            (e, rng.gen())
        })
        .collect()
}

/// I with up to four generators and J generated by one or two random
/// combinations of them.
fn instance(r: &Ring, rng: &mut ChaCha8Rng, max_deg: u32) -> (Ideal, Ideal) {
    loop {
        let (i, j) = draw(r, rng, max_deg);
        if !i.is_zero() && !j.is_zero() {
            return (i, j);
        }
    }
}

fn draw(r: &Ring, rng: &mut ChaCha8Rng, max_deg: u32) -> (Ideal, Ideal) {
    let ngens = rng.gen_range(2..=4);
    let raws: Vec<RawPoly> = (0..ngens).map(|_| random_raw(rng, r.nvars(), max_deg)).collect();
    let i = ideal(r, &raws);
    let field = r.field();
    let poly = r.poly_ring();
    let nj = rng.gen_range(1..=2);
    let jg = (0..nj)
        .map(|_| {
            i.gens().iter().fold(core_ideals::Polynomial::zero(), |acc, g| {
                let c = field.from_int(rng.gen_range(0..field.characteristic() as i64));
                poly.add(&acc, &poly.scale(g, c))
            })
        })
        .collect();
    (i, r.ideal(jg).unwrap())
}

#[test]
fn general_matches_binomial_on_random_ideals() {
    let rings = [
        ring(2, 16, &["x", "y", "z"], &[]),
        ring(3, 8, &["x", "y", "z"], &[]),
        ring(101, 1, &["x", "y", "z"], &[]),
        ring(2, 16, &["x", "y"], &["y^3"]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = GeneralElementConfig::default();
    let mut checked = 0;
    for k in 0..60 {
        let r = &rings[k % rings.len()];
        let (i, j) = instance(r, &mut rng, 4);
        let n = 1 + k % 3;
        let general = kn_general(&j, &i, n, &cfg, &[k as u64], DEFAULT_T_MAX).unwrap().kn;
        let binom = kn_binomial(&j, &i, n).unwrap();
        assert!(general.equals(&binom).unwrap(), "instance {k}: I = {i:?}, J = {j:?}, n = {n}");
        checked += 1;
    }
    assert!(checked >= 50);
}

#[test]
fn bruteforce_matches_binomial_on_small_fields() {
    let rings = [
        ring(2, 1, &["x", "y"], &[]),
        ring(3, 1, &["x", "y"], &[]),
        ring(2, 1, &["x", "y", "z"], &["z^2"]),
        ring(3, 1, &["x", "y", "z"], &[]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..24 {
        let r = &rings[k % rings.len()];
        let (i, j) = instance(r, &mut rng, 3);
        let n = 1 + k % 2;
        let brute = kn_bruteforce(&j, &i, n).unwrap();
        let binom = kn_binomial(&j, &i, n).unwrap();
        assert!(brute.equals(&binom).unwrap(), "instance {k}: I = {i:?}, J = {j:?}, n = {n}");
    }
}

#[test]
fn first_power_is_the_ideal() {
    let r = ring(2, 16, &["x", "y", "z"], &["z^3"]);
    let i = r.parse_ideal("x^2, y^2, xz, yz").unwrap();
    let j = r.parse_ideal("x^2, y^2").unwrap();
    assert!(kn_binomial(&j, &i, 1).unwrap().equals(&i).unwrap());
    let two = kn_binomial(&j, &i, 2).unwrap();
    let cfg = GeneralElementConfig::default();
    assert!(two.equals(&kn_general(&j, &i, 2, &cfg, &[], DEFAULT_T_MAX).unwrap().kn).unwrap());
    assert!(!two.equals(&i.power(2).unwrap()).unwrap());
}
