//! Ideals of R = P/Q, represented by generator lifts to P and a lazily
//! computed reduced Gröbner basis of (generators) + Q.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use once_cell::sync::OnceCell;

use crate::error::{Error, Result};
use crate::finite::{image_of_product, FiniteQuotient};
use crate::groebner::{buchberger, buchberger_tracking, GroebnerBasis};
use crate::monomial::{Monomial, TermOrder};
use crate::poly::{PolyRing, Polynomial, Term};
use crate::ring::{combinatorial_dimension, Ring, RingExt};

/// Largest exponent tried when cutting a non-m-primary ideal down to its
/// m-primary component.
pub const LOCALIZE_MAX_POWER: u32 = 64;

#[derive(Clone)]
pub struct Ideal {
    ring: Ring,
    gens: Vec<Polynomial>,
    gb: OnceCell<Arc<GroebnerBasis>>,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|g| self.ring.format(g)).collect();
        write!(f, "({})", gens.join(", "))
    }
}

impl Ideal {
    /// Generators are reduced modulo Q; those that vanish are dropped.
    pub fn new(ring: Ring, gens: Vec<Polynomial>) -> Result<Ideal> {
        let poly = ring.poly_ring();
        let mut out: Vec<Polynomial> = Vec::with_capacity(gens.len());
        for g in gens {
            if !poly.is_valid(&g) {
                return Err(Error::RingMismatch);
            }
            let g = ring.reduce(&g)?;
            if !g.is_zero() && !out.contains(&g) {
                out.push(g);
            }
        }
        Ok(Ideal {
            ring,
            gens: out,
            gb: OnceCell::new(),
        })
    }

    fn with_basis(ring: Ring, gens: Vec<Polynomial>, gb: GroebnerBasis) -> Ideal {
        Ideal {
            ring,
            gens,
            gb: OnceCell::with_value(Arc::new(gb)),
        }
    }

    /// The ideal whose reduced basis (over P, Q included) is `gb`.
    fn from_basis(ring: Ring, gb: GroebnerBasis) -> Result<Ideal> {
        let mut gens = Vec::new();
        for g in gb.elements() {
            let r = ring.reduce(g)?;
            if !r.is_zero() {
                gens.push(r);
            }
        }
        Ok(Ideal::with_basis(ring, gens, gb))
    }

    /// Generators in the given order, each dropped when it lies in the ideal
    /// of Q and the generators kept before it.
    pub fn interreduced(ring: Ring, gens: Vec<Polynomial>) -> Result<Ideal> {
        let draft = Ideal::new(ring.clone(), gens)?;
        let (gb, kept) = buchberger_tracking(
            ring.poly_ring(),
            ring.quotient_gb().elements(),
            &draft.gens,
        )?;
        let gens = draft
            .gens
            .into_iter()
            .zip(kept)
            .filter_map(|(g, k)| k.then_some(g))
            .collect();
        Ok(Ideal::with_basis(ring, gens, gb))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    /// Reduced basis of gens + Q in grevlex.
    pub fn gb(&self) -> Result<&GroebnerBasis> {
        let gb = self.gb.get_or_try_init(|| {
            let mut all: Vec<Polynomial> = self.ring.quotient_gb().elements().to_vec();
            all.extend(self.gens.iter().cloned());
            buchberger(self.ring.poly_ring(), &all).map(Arc::new)
        })?;
        Ok(gb)
    }

    /// Basis elements not lying in Q: the canonical description of the
    /// ideal in R.
    pub fn basis_in_ring(&self) -> Result<Vec<Polynomial>> {
        let q = self.ring.quotient_gb();
        let mut out = Vec::new();
        for g in self.gb()?.elements() {
            if !q.contains(self.ring.poly_ring(), g)? {
                out.push(g.clone());
            }
        }
        Ok(out)
    }

    pub fn basis_strings(&self) -> Result<Vec<String>> {
        Ok(self.basis_in_ring()?.iter().map(|g| self.ring.format(g)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.gb()?.is_unit())
    }

    fn check_ring(&self, other: &Ideal) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        if !self.ring.poly_ring().is_valid(f) {
            return Err(Error::RingMismatch);
        }
        self.gb()?.contains(self.ring.poly_ring(), f)
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        self.check_ring(other)?;
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Ideal equality: identical reduced bases.
    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        self.check_ring(other)?;
        Ok(self.gb()?.elements() == other.gb()?.elements())
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(self.ring.clone(), gens)
    }

    /// Ideal generated by all pairwise products, interreduced.
    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        let poly = self.ring.poly_ring();
        let mut gens: Vec<Polynomial> = Vec::with_capacity(self.gens.len() * other.gens.len());
        for f in &self.gens {
            for g in &other.gens {
                let h = poly.monic(&self.ring.reduce(&poly.mul(f, g)?)?);
                if !h.is_zero() && !gens.contains(&h) {
                    gens.push(h);
                }
            }
        }
        gens.sort_by_key(|g| g.total_degree());
        Ideal::interreduced(self.ring.clone(), gens)
    }

    pub fn power(&self, n: u32) -> Result<Ideal> {
        if n == 0 {
            return Ok(self.ring.unit_ideal());
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    /// `self ∩ other`. Linear algebra in a finite quotient when both ideals
    /// are zero-dimensional, elimination otherwise.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        if self.contains_ideal(other)? {
            return Ok(other.clone());
        }
        if other.contains_ideal(self)? {
            return Ok(self.clone());
        }
        if self.is_zero_dimensional()? && other.is_zero_dimensional()? {
            return self.intersect_finite(other);
        }
        self.intersect_elimination(other)
    }

    /// `self ∩ other` by eliminating t from t·(A + Q) + (1 − t)·(B + Q).
    pub fn intersect_elimination(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        let q = self.ring.quotient_gb().elements();
        let a: Vec<Polynomial> = q.iter().chain(&self.gens).cloned().collect();
        let b: Vec<Polynomial> = q.iter().chain(&other.gens).cloned().collect();
        let gb = eliminate_intersection(self.ring.poly_ring(), &a, &b)?;
        Ideal::from_basis(self.ring.clone(), gb)
    }

    fn intersect_finite(&self, other: &Ideal) -> Result<Ideal> {
        let poly = self.ring.poly_ring();
        let (ga, gb) = (self.gb()?, other.gb()?);
        let qa = FiniteQuotient::of_basis(poly, ga)?.expect("zero-dimensional");
        let qb = FiniteQuotient::of_basis(poly, gb)?.expect("zero-dimensional");
        let product;
        let base = match (self.power_of_m_inside()?, other.power_of_m_inside()?) {
            (Some(ka), Some(kb)) => FiniteQuotient::truncated(poly, self.ring.quotient_gb(), ka.max(kb))?,
            _ => {
                product = self.product(other)?;
                FiniteQuotient::of_basis(poly, product.gb()?)?.expect("zero-dimensional")
            }
        };
        let graded = is_homogeneous_basis(ga) && is_homogeneous_basis(gb);
        let na = qa.monomial_normal_forms(base.monomials().iter().copied())?;
        let nb = qb.monomial_normal_forms(base.monomials().iter().copied())?;
        let monos = base.monomials();
        let image = |i: usize, k: usize| if k == 0 { na[&monos[i]].clone() } else { nb[&monos[i]].clone() };
        let result = base.kernel_extension(2, image, graded)?;
        Ideal::from_basis(self.ring.clone(), result)
    }

    /// `self : other`. For zero-dimensional `self` the colon is the kernel of
    /// multiplication by the generators of `other` on P/(self + Q);
    /// otherwise it is an intersection of colons by single elements.
    pub fn colon(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        if other.is_zero() {
            return Err(Error::ZeroColon);
        }
        if self.contains_ideal(other)? {
            return Ok(self.ring.unit_ideal());
        }
        if self.is_zero_dimensional()? {
            return self.colon_finite(other);
        }
        self.colon_elimination(other)
    }

    /// `self : other` as ∩ over generators f of ((self + Q) ∩ (f)) / f.
    pub fn colon_elimination(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        if other.is_zero() {
            return Err(Error::ZeroColon);
        }
        let mut acc: Option<Ideal> = None;
        for f in &other.gens {
            let c = self.colon_element(f)?;
            acc = Some(match acc {
                None => c,
                Some(a) => a.intersect_elimination(&c)?,
            });
        }
        Ok(acc.expect("nonzero ideal has a generator"))
    }

    /// `self : f` by elimination and exact division.
    pub fn colon_element(&self, f: &Polynomial) -> Result<Ideal> {
        let poly = self.ring.poly_ring();
        let f = self.ring.reduce(f)?;
        if f.is_zero() {
            return Err(Error::ZeroColon);
        }
        if self.contains(&f)? {
            return Ok(self.ring.unit_ideal());
        }
        let inter = eliminate_intersection(poly, self.gb()?.elements(), std::slice::from_ref(&f))?;
        let mut quotients = Vec::with_capacity(inter.len());
        for g in inter.elements() {
            let q = exact_divide(poly, g, &f)?;
            if !self.contains(&poly.mul(&q, &f)?)? {
                return Err(Error::InexactDivision);
            }
            quotients.push(q);
        }
        Ideal::new(self.ring.clone(), quotients)
    }

    fn colon_finite(&self, other: &Ideal) -> Result<Ideal> {
        let poly = self.ring.poly_ring();
        let field = poly.field();
        let ga = self.gb()?;
        let base = FiniteQuotient::of_basis(poly, ga)?.expect("zero-dimensional");
        let graded = is_homogeneous_basis(ga) && other.gens.iter().all(|g| g.is_homogeneous());
        let mut wanted: HashSet<Monomial> = HashSet::new();
        for u in base.monomials() {
            for g in &other.gens {
                wanted.extend(g.terms().iter().map(|t| t.mono.mul_unchecked(u)));
            }
        }
        let table = base.monomial_normal_forms(wanted)?;
        let monos = base.monomials();
        let image = |i: usize, k: usize| image_of_product(field, &table, &monos[i], &other.gens[k]);
        let result = base.kernel_extension(other.gens.len(), image, graded)?;
        let c = Ideal::from_basis(self.ring.clone(), result)?;
        debug_assert!(c.contains_ideal(self).unwrap_or(false));
        Ok(c)
    }

    /// Krull dimension of R / self.
    pub fn krull_dim(&self) -> Result<usize> {
        let gb = self.gb()?;
        if gb.is_unit() {
            return Err(Error::EmptyVariety);
        }
        Ok(combinatorial_dimension(&gb.leading_monomials(), self.ring.nvars()))
    }

    /// dim R − dim R/self.
    pub fn height(&self) -> Result<usize> {
        Ok(self.ring.dim() - self.krull_dim()?)
    }

    /// Finitely many standard monomials and not the unit ideal.
    pub fn is_zero_dimensional(&self) -> Result<bool> {
        let gb = self.gb()?;
        if gb.is_unit() {
            return Ok(false);
        }
        let leads = gb.leading_monomials();
        Ok((0..self.ring.nvars()).all(|i| leads.iter().any(|m| m.pure_power_var() == Some(i))))
    }

    /// Radical equal to m: zero-dimensional with every variable nilpotent
    /// modulo the ideal.
    pub fn is_m_primary(&self) -> Result<bool> {
        if !self.is_zero_dimensional()? {
            return Ok(false);
        }
        let gb = self.gb()?;
        if gb.elements().iter().all(|g| g.is_homogeneous()) {
            return Ok(true);
        }
        let poly = self.ring.poly_ring();
        let len = self.colength()?.expect("zero-dimensional");
        let one = poly.field().one();
        for i in 0..self.ring.nvars() {
            let x = Monomial::var(i);
            let mut v = gb.normal_form(poly, &poly.var(i))?;
            let mut steps = 1;
            while !v.is_zero() {
                if steps > len {
                    return Ok(false);
                }
                v = gb.normal_form(poly, &poly.mul_term(&v, one, &x)?)?;
                steps += 1;
            }
        }
        Ok(true)
    }

    /// Standard monomials of self + Q, if finitely many.
    pub fn standard_monomials(&self) -> Result<Option<Vec<Monomial>>> {
        let poly = self.ring.poly_ring();
        Ok(FiniteQuotient::of_basis(poly, self.gb()?)?.map(|q| q.monomials().to_vec()))
    }

    /// Length of R / self, if finite.
    pub fn colength(&self) -> Result<Option<usize>> {
        Ok(self.standard_monomials()?.map(|s| s.len()))
    }

    /// Smallest k with m^k ⊆ self, or `None` when self is not m-primary.
    pub fn power_of_m_inside(&self) -> Result<Option<u32>> {
        if !self.is_m_primary()? {
            return Ok(None);
        }
        let stairs = self.standard_monomials()?.expect("zero-dimensional");
        let top = stairs.iter().map(|m| m.degree()).max().unwrap_or(0);
        let mut k = top + 1;
        while !self.contains_ideal(&self.ring.maximal_power(k)?)? {
            k += 1;
        }
        Ok(Some(k))
    }

    /// Contraction of the ideal generated in the local ring at m: the ideal
    /// itself when m-primary, otherwise self + m^M for the least M with
    /// m^M ⊆ self + m^(M+1), which by Nakayama puts m^M in the local ideal.
    pub fn localize(&self) -> Result<Ideal> {
        if self.is_m_primary()? {
            return Ok(self.clone());
        }
        let ring = &self.ring;
        for m in 0..=LOCALIZE_MAX_POWER {
            let probe = self.sum(&ring.maximal_power(m + 1)?)?;
            let stairs = probe.standard_monomials()?.expect("contains a power of m");
            if stairs.iter().all(|s| s.degree() < m) {
                let mut gens = self.gens.clone();
                gens.extend(ring.maximal_power(m)?.gens.iter().cloned());
                return Ideal::interreduced(ring.clone(), gens);
            }
        }
        Err(Error::NonLocal)
    }
}

fn is_homogeneous_basis(gb: &GroebnerBasis) -> bool {
    gb.elements().iter().all(|g| g.is_homogeneous())
}

fn shift_into(ext: &PolyRing, f: &Polynomial) -> Polynomial {
    ext.from_terms(
        f.terms()
            .iter()
            .map(|t| Term {
                coeff: t.coeff,
                mono: t.mono.shifted_up(1),
            })
            .collect(),
    )
}

/// Reduced grevlex basis of (A) ∩ (B) in `ring`, via an auxiliary variable
/// placed first under a block order.
fn eliminate_intersection(ring: &PolyRing, a: &[Polynomial], b: &[Polynomial]) -> Result<GroebnerBasis> {
    let ext = PolyRing::new(
        ring.field_arc().clone(),
        ring.nvars() + 1,
        TermOrder::BlockElimination { split: 1 },
    )?;
    let t = ext.var(0);
    let one_minus_t = ext.sub(&ext.one(), &t);
    let mut gens = Vec::with_capacity(a.len() + b.len());
    for f in a {
        gens.push(ext.mul(&t, &shift_into(&ext, f))?);
    }
    for f in b {
        gens.push(ext.mul(&one_minus_t, &shift_into(&ext, f))?);
    }
    let gb = buchberger(&ext, &gens)?;
    let mut out: Vec<Polynomial> = gb
        .elements()
        .iter()
        .filter(|g| g.leading_monomial().is_some_and(|m| m.exponent(0) == 0))
        .map(|g| {
            ring.from_terms(
                g.terms()
                    .iter()
                    .map(|t| Term {
                        coeff: t.coeff,
                        mono: t.mono.shifted_down(1),
                    })
                    .collect(),
            )
        })
        .collect();
    out.sort_by(|x, y| ring.order().cmp(x.leading_monomial().unwrap(), y.leading_monomial().unwrap()));
    Ok(GroebnerBasis::from_reduced(ring.order(), out))
}

/// `g / f` in P; fails unless f divides g.
fn exact_divide(ring: &PolyRing, g: &Polynomial, f: &Polynomial) -> Result<Polynomial> {
    let field = ring.field();
    let lf = *f.leading_term().ok_or(Error::ZeroColon)?;
    let inv = field.inv(lf.coeff)?;
    let mut rem = g.clone();
    let mut quotient = Vec::new();
    while let Some(t) = rem.leading_term().copied() {
        let m = lf.mono.quotient_of(&t.mono).ok_or(Error::InexactDivision)?;
        let c = field.mul(t.coeff, inv);
        quotient.push(Term { coeff: c, mono: m });
        rem = ring.sub(&rem, &ring.mul_term(f, c, &m)?);
    }
    Ok(ring.from_terms(quotient))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::ring::RingSpec;

    fn ring(p: u64, e: u32, vars: &[&str], q: &[&str]) -> Ring {
        RingSpec::parse(Arc::new(FieldSpec::new(p, e).unwrap()), vars, q).unwrap()
    }

    #[test]
    fn basic_operations() {
        let r = ring(101, 1, &["x", "y"], &[]);
        let x = r.parse_ideal("x").unwrap();
        let y = r.parse_ideal("y").unwrap();
        assert!(x.intersect(&y).unwrap().equals(&r.parse_ideal("xy").unwrap()).unwrap());
        assert!(x.product(&y).unwrap().equals(&r.parse_ideal("xy").unwrap()).unwrap());
        let m = r.maximal_ideal();
        assert_eq!(m.power(2).unwrap().num_gens(), 3);
        let a = r.parse_ideal("x^2, xy").unwrap();
        assert!(a.intersect(&y).unwrap().equals(&r.parse_ideal("xy").unwrap()).unwrap());
        let x2 = r.parse_ideal("x^2").unwrap();
        assert!(x2.colon(&x).unwrap().equals(&x).unwrap());
        assert_eq!(x.krull_dim().unwrap(), 1);
        assert!(!x.is_m_primary().unwrap());
        assert!(m.is_m_primary().unwrap());
    }

    #[test]
    fn finite_and_elimination_paths_agree() {
        let r = ring(2, 16, &["x", "y", "z"], &["z^3"]);
        let i = r.parse_ideal("x^2, y^2, xz, yz").unwrap();
        let j = r.parse_ideal("x^2, y^2").unwrap();
        let j3 = j.power(3).unwrap();
        let i2 = i.power(2).unwrap();
        let fast = j3.colon(&i2).unwrap();
        let slow = j3.colon_elimination(&i2).unwrap();
        assert!(fast.equals(&slow).unwrap());
        let k = r.parse_ideal("x^2 + y^2 + xz, y^2 + yz").unwrap();
        let fast = j.intersect(&k).unwrap();
        let slow = j.intersect_elimination(&k).unwrap();
        assert!(fast.equals(&slow).unwrap());
        assert_eq!(r.dim(), 2);
        assert_eq!(i.height().unwrap(), 2);
    }

    #[test]
    fn inhomogeneous_colon_agrees() {
        let r = ring(7, 1, &["x", "y"], &[]);
        let a = r.parse_ideal("x^3 + y^4, x y^2 + y^3 + x^2 y, y^5").unwrap();
        assert!(a.is_m_primary().unwrap());
        let b = r.parse_ideal("x + y^2, y^2").unwrap();
        let fast = a.colon(&b).unwrap();
        let slow = a.colon_elimination(&b).unwrap();
        assert!(fast.equals(&slow).unwrap());
    }

    #[test]
    fn localization_cuts_far_components() {
        let r = ring(101, 1, &["x", "y"], &[]);
        // (x(x-1), y) has a component at (1, 0).
        let a = r.parse_ideal("x^2 - x, y").unwrap();
        assert!(!a.is_m_primary().unwrap());
        let l = a.localize().unwrap();
        assert!(l.equals(&r.maximal_ideal()).unwrap());
        let unit = r.parse_ideal("x + 1").unwrap().localize().unwrap();
        assert!(unit.is_unit().unwrap());
    }
}
