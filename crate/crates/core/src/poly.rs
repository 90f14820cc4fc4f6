//! Sparse multivariate polynomials over GF(p^e).
//!
//! A [`Polynomial`] is plain data: terms sorted strictly descending by the
//! term order of the [`PolyRing`] that produced it. All arithmetic goes
//! through the ring, which owns the field and the order.

use std::cmp::Ordering;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::monomial::{Monomial, TermOrder, MAX_DEGREE, MAX_VARS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: FieldElement,
    pub mono: Monomial,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub(crate) fn from_sorted(terms: Vec<Term>) -> Self {
        Polynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub(crate) fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.mono)
    }

    pub fn leading_coeff(&self) -> Option<FieldElement> {
        self.terms.first().map(|t| t.coeff)
    }

    /// Largest total degree of a term; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.mono.degree()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some(t) => self.terms.iter().all(|s| s.mono.degree() == t.mono.degree()),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.mono.is_one())
    }

    /// Whether every term avoids variables `from..`.
    pub fn uses_only_vars_below(&self, from: usize) -> bool {
        self.terms
            .iter()
            .all(|t| t.mono.exponents()[from..].iter().all(|&e| e == 0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Polynomial ring k[x_0, .., x_{n-1}] with a fixed term order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    field: Arc<FieldSpec>,
    nvars: usize,
    order: TermOrder,
}

impl PolyRing {
    pub fn new(field: Arc<FieldSpec>, nvars: usize, order: TermOrder) -> Result<Self> {
        if nvars > MAX_VARS {
            return Err(Error::TooManyVariables(nvars));
        }
        if let TermOrder::BlockElimination { split } = order {
            if split > nvars {
                return Err(Error::InvalidArgument(format!(
                    "block split {split} exceeds {nvars} variables"
                )));
            }
        }
        Ok(PolyRing {
            field,
            nvars,
            order,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    /// Same field and variables, different order.
    pub fn with_order(&self, order: TermOrder) -> Result<PolyRing> {
        PolyRing::new(self.field.clone(), self.nvars, order)
    }

    pub fn constant(&self, c: FieldElement) -> Polynomial {
        self.monomial(Monomial::one(), c)
    }

    pub fn one(&self) -> Polynomial {
        self.constant(FieldElement::ONE)
    }

    pub fn var(&self, i: usize) -> Polynomial {
        assert!(i < self.nvars, "variable index out of range");
        self.monomial(Monomial::var(i), FieldElement::ONE)
    }

    pub fn monomial(&self, mono: Monomial, coeff: FieldElement) -> Polynomial {
        if coeff.is_zero() {
            Polynomial::zero()
        } else {
            Polynomial::from_sorted(vec![Term { coeff, mono }])
        }
    }

    /// Sorts, merges equal monomials and drops zero coefficients.
    pub fn from_terms(&self, mut terms: Vec<Term>) -> Polynomial {
        let order = self.order;
        terms.sort_by(|a, b| order.cmp(&b.mono, &a.mono));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.mono == t.mono => {
                    last.coeff = self.field.add(last.coeff, t.coeff);
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        Polynomial::from_sorted(out)
    }

    /// Re-sorts a polynomial of another ring with the same variable count
    /// under this ring's order.
    pub fn reorder(&self, f: &Polynomial) -> Polynomial {
        self.from_terms(f.terms.clone())
    }

    /// Checks the canonical-form invariants against this ring.
    pub fn is_valid(&self, f: &Polynomial) -> bool {
        let in_ring = f.terms.iter().all(|t| {
            !t.coeff.is_zero()
                && self.field.contains(t.coeff)
                && t.mono.exponents()[self.nvars..].iter().all(|&e| e == 0)
        });
        let sorted = f
            .terms
            .windows(2)
            .all(|w| self.order.cmp(&w[0].mono, &w[1].mono) == Ordering::Greater);
        in_ring && sorted
    }

    pub fn add(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        let mut out = Vec::with_capacity(f.len() + g.len());
        self.merge_into(&mut out, &f.terms, FieldElement::ONE, &Monomial::one(), &g.terms);
        Polynomial::from_sorted(out)
    }

    pub fn neg(&self, f: &Polynomial) -> Polynomial {
        Polynomial::from_sorted(
            f.terms
                .iter()
                .map(|t| Term {
                    coeff: self.field.neg(t.coeff),
                    mono: t.mono,
                })
                .collect(),
        )
    }

    pub fn sub(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        let mut out = Vec::with_capacity(f.len() + g.len());
        let minus_one = self.field.neg(FieldElement::ONE);
        self.merge_into(&mut out, &f.terms, minus_one, &Monomial::one(), &g.terms);
        Polynomial::from_sorted(out)
    }

    pub fn scale(&self, f: &Polynomial, c: FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial::from_sorted(
            f.terms
                .iter()
                .map(|t| Term {
                    coeff: self.field.mul(t.coeff, c),
                    mono: t.mono,
                })
                .collect(),
        )
    }

    /// c * m * f.
    pub fn mul_term(&self, f: &Polynomial, c: FieldElement, m: &Monomial) -> Result<Polynomial> {
        if c.is_zero() || f.is_zero() {
            return Ok(Polynomial::zero());
        }
        check_degree(f.total_degree() + m.degree())?;
        Ok(Polynomial::from_sorted(
            f.terms
                .iter()
                .map(|t| Term {
                    coeff: self.field.mul(t.coeff, c),
                    mono: t.mono.mul_unchecked(m),
                })
                .collect(),
        ))
    }

    pub fn mul(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        if f.is_zero() || g.is_zero() {
            return Ok(Polynomial::zero());
        }
        check_degree(f.total_degree() + g.total_degree())?;
        let (small, large) = if f.len() <= g.len() { (f, g) } else { (g, f) };
        if small.len() == 1 {
            let t = small.terms[0];
            return self.mul_term(large, t.coeff, &t.mono);
        }
        let mut terms = Vec::with_capacity(f.len() * g.len());
        for a in &small.terms {
            for b in &large.terms {
                terms.push(Term {
                    coeff: self.field.mul(a.coeff, b.coeff),
                    mono: a.mono.mul_unchecked(&b.mono),
                });
            }
        }
        Ok(self.from_terms(terms))
    }

    pub fn pow(&self, f: &Polynomial, k: u32) -> Result<Polynomial> {
        let mut acc = self.one();
        let mut base = f.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// Scales to leading coefficient one.
    pub fn monic(&self, f: &Polynomial) -> Polynomial {
        match f.leading_coeff() {
            None => Polynomial::zero(),
            Some(c) if c.is_one() => f.clone(),
            Some(c) => self.scale(f, self.field.inv(c).expect("nonzero leading coefficient")),
        }
    }

    /// Ring-checked arithmetic: both operands must be canonical elements of
    /// this ring.
    pub fn try_arith(&self, op: PolyOp, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        if !self.is_valid(f) || !self.is_valid(g) {
            return Err(Error::RingMismatch);
        }
        match op {
            PolyOp::Add => Ok(self.add(f, g)),
            PolyOp::Sub => Ok(self.sub(f, g)),
            PolyOp::Mul => self.mul(f, g),
        }
    }

    /// Appends `f + c * m * g` to `out`. Both inputs are sorted slices; the
    /// caller guarantees `m * g` stays under the degree cap.
    pub(crate) fn merge_into(
        &self,
        out: &mut Vec<Term>,
        f: &[Term],
        c: FieldElement,
        m: &Monomial,
        g: &[Term],
    ) {
        let field = &*self.field;
        let order = self.order;
        let (mut i, mut j) = (0, 0);
        while i < f.len() && j < g.len() {
            let gm = g[j].mono.mul_unchecked(m);
            match order.cmp(&f[i].mono, &gm) {
                Ordering::Greater => {
                    out.push(f[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push(Term {
                        coeff: field.mul(c, g[j].coeff),
                        mono: gm,
                    });
                    j += 1;
                }
                Ordering::Equal => {
                    let s = field.add(f[i].coeff, field.mul(c, g[j].coeff));
                    if !s.is_zero() {
                        out.push(Term { coeff: s, mono: gm });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&f[i..]);
        for t in &g[j..] {
            out.push(Term {
                coeff: field.mul(c, t.coeff),
                mono: t.mono.mul_unchecked(m),
            });
        }
    }

    /// Σ λ_j g_j with λ_j uniform in the field; returns the combination
    /// and the coefficients drawn.
    pub fn random_linear_combination<R: Rng + ?Sized>(
        &self,
        gens: &[Polynomial],
        rng: &mut R,
    ) -> Result<(Polynomial, Vec<FieldElement>)> {
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        if self.field.is_small() {
            log::warn!(
                "field of size {} is below the genericity threshold",
                self.field.size()
            );
        }
        let lambdas: Vec<FieldElement> = gens.iter().map(|_| self.field.random(rng)).collect();
        let mut acc = Polynomial::zero();
        for (g, &l) in gens.iter().zip(&lambdas) {
            acc = self.add(&acc, &self.scale(g, l));
        }
        Ok((acc, lambdas))
    }

    /// Canonical text: terms in descending order joined by " + ", factors
    /// joined by `*`, coefficient 1 omitted.
    pub fn format(&self, f: &Polynomial, names: &[String]) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::with_capacity(f.len());
        for t in &f.terms {
            let mono = format_monomial(&t.mono, names);
            let coeff = if self.field.is_prime_subfield(t.coeff) {
                self.field.format(t.coeff)
            } else {
                format!("({})", self.field.format(t.coeff))
            };
            parts.push(match (mono.is_empty(), t.coeff.is_one()) {
                (true, _) => coeff,
                (false, true) => mono,
                (false, false) => format!("{coeff}*{mono}"),
            });
        }
        parts.join(" + ")
    }
}

pub(crate) fn check_degree(d: u32) -> Result<()> {
    if d > MAX_DEGREE {
        Err(Error::DegreeOverflow(format!(
            "degree {d} exceeds the cap {MAX_DEGREE}"
        )))
    } else {
        Ok(())
    }
}

pub fn format_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, name) in names.iter().enumerate() {
        match m.exponent(i) {
            0 => {}
            1 => parts.push(name.clone()),
            e => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    fn ring(p: u64, e: u32, n: usize) -> PolyRing {
        PolyRing::new(Arc::new(FieldSpec::new(p, e).unwrap()), n, TermOrder::Grevlex).unwrap()
    }

    fn names(n: usize) -> Vec<String> {
        ["x", "y", "z", "w"][..n].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn add_zero_is_identity() {
        let r = ring(5, 1, 2);
        let f = r.add(&r.var(0), &r.constant(r.field().from_int(3)));
        assert_eq!(r.add(&f, &Polynomial::zero()), f);
    }

    #[test]
    fn freshman_dream_char_two() {
        let r = ring(2, 1, 2);
        let s = r.add(&r.var(0), &r.var(1));
        let sq = r.mul(&s, &s).unwrap();
        assert_eq!(r.format(&sq, &names(2)), "x^2 + y^2");
    }

    #[test]
    fn difference_of_squares_char_three() {
        let r = ring(3, 1, 2);
        let (x, y) = (r.var(0), r.var(1));
        let f = r.mul(&r.add(&x, &y), &r.sub(&x, &y)).unwrap();
        assert_eq!(r.format(&f, &names(2)), "x^2 + 2*y^2");
    }

    #[test]
    fn ring_mismatch_detected() {
        let r2 = ring(3, 1, 2);
        let r3 = ring(3, 1, 3);
        let z = r3.var(2);
        assert_eq!(
            r2.try_arith(PolyOp::Add, &r2.var(0), &z),
            Err(Error::RingMismatch)
        );
        assert!(r3.try_arith(PolyOp::Mul, &r3.var(0), &z).is_ok());
    }

    #[test]
    fn random_combination_is_deterministic() {
        let r = ring(2, 16, 3);
        let gens = vec![
            r.mul(&r.var(0), &r.var(0)).unwrap(),
            r.mul(&r.var(1), &r.var(1)).unwrap(),
        ];
        let a = r
            .random_linear_combination(&gens, &mut ChaCha8Rng::seed_from_u64(9))
            .unwrap();
        let b = r
            .random_linear_combination(&gens, &mut ChaCha8Rng::seed_from_u64(9))
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.1.len(), 2);
        assert!(r
            .random_linear_combination(&[], &mut ChaCha8Rng::seed_from_u64(9))
            .is_err());
    }

    #[test]
    fn single_generator_combination_is_a_multiple() {
        let r = ring(2, 16, 2);
        let x2 = r.mul(&r.var(0), &r.var(0)).unwrap();
        let (b, l) = r
            .random_linear_combination(std::slice::from_ref(&x2), &mut ChaCha8Rng::seed_from_u64(1))
            .unwrap();
        assert_eq!(b, r.scale(&x2, l[0]));
    }

    #[test]
    fn all_four_terms_survive_with_high_probability() {
        // Each λ vanishes with probability 2^-16; over 1000 seeds the
        // expected number of dropped terms is about 0.06.
        let r = ring(2, 16, 3);
        let m = |e: &[u32]| r.monomial(Monomial::from_exponents(e).unwrap(), FieldElement::ONE);
        let gens = vec![m(&[2, 0, 0]), m(&[0, 2, 0]), m(&[1, 0, 1]), m(&[0, 1, 1])];
        let full = (0..1000u64)
            .filter(|&s| {
                let (b, _) = r
                    .random_linear_combination(&gens, &mut ChaCha8Rng::seed_from_u64(s))
                    .unwrap();
                b.len() == 4
            })
            .count();
        assert!(full >= 995, "only {full} of 1000 had four terms");
    }

    fn naive_mul(r: &PolyRing, f: &Polynomial, g: &Polynomial) -> Polynomial {
        let mut acc: HashMap<Monomial, FieldElement> = HashMap::new();
        for a in f.terms() {
            for b in g.terms() {
                let m = a.mono.checked_mul(&b.mono).unwrap();
                let c = r.field().mul(a.coeff, b.coeff);
                let e = acc.entry(m).or_insert(FieldElement::ZERO);
                *e = r.field().add(*e, c);
            }
        }
        r.from_terms(
            acc.into_iter()
                .map(|(mono, coeff)| Term { coeff, mono })
                .collect(),
        )
    }

    fn random_poly(r: &PolyRing, rng: &mut ChaCha8Rng, max_terms: usize) -> Polynomial {
        let n = rng.gen_range(0..=max_terms);
        let terms = (0..n)
            .map(|_| {
                let exps: Vec<u32> = (0..r.nvars()).map(|_| rng.gen_range(0..4)).collect();
                Term {
                    coeff: r.field().random(rng),
                    mono: Monomial::from_exponents(&exps).unwrap(),
                }
            })
            .collect();
        r.from_terms(terms)
    }

    #[test]
    fn multiplication_matches_naive_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for (p, e) in [(2, 16), (3, 8), (101, 1)] {
            let r = ring(p, e, 3);
            for _ in 0..60 {
                let f = random_poly(&r, &mut rng, 20);
                let g = random_poly(&r, &mut rng, 20);
                let prod = r.mul(&f, &g).unwrap();
                assert!(r.is_valid(&prod));
                assert_eq!(prod, naive_mul(&r, &f, &g));
                assert_eq!(prod, r.mul(&g, &f).unwrap());
            }
        }
    }

    #[test]
    fn multiplication_distributes() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let r = ring(3, 11, 3);
        for _ in 0..40 {
            let f = random_poly(&r, &mut rng, 8);
            let g = random_poly(&r, &mut rng, 8);
            let h = random_poly(&r, &mut rng, 8);
            let lhs = r.mul(&f, &r.add(&g, &h)).unwrap();
            let rhs = r.add(&r.mul(&f, &g).unwrap(), &r.mul(&f, &h).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let r = ring(5, 1, 2);
        let f = r.add(&r.var(0), &r.scale(&r.var(1), r.field().from_int(2)));
        let mut acc = r.one();
        for k in 0..6 {
            assert_eq!(r.pow(&f, k).unwrap(), acc);
            acc = r.mul(&acc, &f).unwrap();
        }
    }
}
