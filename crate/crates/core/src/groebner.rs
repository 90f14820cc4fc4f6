//! Multivariate division and Buchberger's algorithm.
//!
//! Pairs are processed smallest lcm degree first and pruned with the
//! Gebauer–Möller installation (product and chain criteria). The queue may
//! also carry input generators, which lets a single run report which
//! generators were already implied by earlier ones.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::monomial::{Monomial, TermOrder};
use crate::poly::{check_degree, PolyRing, Polynomial, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    order: TermOrder,
    elements: Vec<Polynomial>,
    reduced: bool,
}

impl GroebnerBasis {
    pub fn order(&self) -> TermOrder {
        self.order
    }

    /// Elements sorted ascending by leading monomial.
    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<Polynomial> {
        self.elements
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Whether the basis generates the unit ideal.
    pub fn is_unit(&self) -> bool {
        self.elements
            .iter()
            .any(|g| g.leading_monomial().is_some_and(|m| m.is_one()))
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements
            .iter()
            .filter_map(|g| g.leading_monomial().copied())
            .collect()
    }

    pub fn normal_form(&self, ring: &PolyRing, f: &Polynomial) -> Result<Polynomial> {
        debug_assert_eq!(ring.order(), self.order);
        let reducers = Reducers::new(self.elements.iter().map(|g| ring.monic(g)).collect());
        reduce(ring, f.clone(), &reducers, true)
    }

    pub fn contains(&self, ring: &PolyRing, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(ring, f)?.is_zero())
    }

    /// A basis assumed to be reduced already (e.g. read back from a cache).
    pub(crate) fn from_reduced(order: TermOrder, elements: Vec<Polynomial>) -> Self {
        GroebnerBasis {
            order,
            elements,
            reduced: true,
        }
    }
}

/// Remainder of `f` on division by `divisors`, in the given order: the first
/// divisor (in list order) whose leading monomial divides the current term
/// is used.
pub fn normal_form(ring: &PolyRing, f: &Polynomial, divisors: &[Polynomial]) -> Result<Polynomial> {
    let monic: Vec<Polynomial> = divisors
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| ring.monic(g))
        .collect();
    reduce(ring, f.clone(), &Reducers::new(monic), true)
}

pub fn is_member(ring: &PolyRing, f: &Polynomial, gb: &GroebnerBasis) -> Result<bool> {
    gb.contains(ring, f)
}

/// Equality of the ideals generated by two reduced bases.
pub fn ideal_equal(a: &GroebnerBasis, b: &GroebnerBasis) -> Result<bool> {
    if a.order != b.order {
        return Err(Error::OrderMismatch);
    }
    Ok(a.elements == b.elements)
}

pub fn s_polynomial(ring: &PolyRing, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    let (Some(lf), Some(lg)) = (f.leading_term(), g.leading_term()) else {
        return Ok(Polynomial::zero());
    };
    let l = lf.mono.lcm(&lg.mono);
    check_degree(l.degree())?;
    let field = ring.field();
    let a = ring.mul_term(f, field.inv(lf.coeff)?, &lf.mono.quotient_of(&l).unwrap())?;
    let b = ring.mul_term(g, field.inv(lg.coeff)?, &lg.mono.quotient_of(&l).unwrap())?;
    Ok(ring.sub(&a, &b))
}

/// Every S-polynomial reduces to zero modulo the basis.
pub fn satisfies_buchberger_criterion(ring: &PolyRing, gb: &GroebnerBasis) -> Result<bool> {
    let els = gb.elements();
    for i in 0..els.len() {
        for j in i + 1..els.len() {
            let s = s_polynomial(ring, &els[i], &els[j])?;
            if !normal_form(ring, &s, els)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn buchberger(ring: &PolyRing, gens: &[Polynomial]) -> Result<GroebnerBasis> {
    Ok(buchberger_tracking(ring, &[], gens)?.0)
}

/// Reduced basis of `fixed ∪ gens`, plus, for every entry of `gens`, whether
/// it was needed: an entry is marked `false` when it already lay in the
/// ideal generated by `fixed` and the entries kept before it.
pub(crate) fn buchberger_tracking(
    ring: &PolyRing,
    fixed: &[Polynomial],
    gens: &[Polynomial],
) -> Result<(GroebnerBasis, Vec<bool>)> {
    let mut b = Builder::new(ring);
    for f in fixed {
        let h = reduce(ring, f.clone(), &b.reducers, true)?;
        if !h.is_zero() {
            b.insert(h);
        }
    }
    let mut kept = vec![false; gens.len()];
    for (idx, g) in gens.iter().enumerate() {
        if let Some(m) = g.leading_monomial() {
            b.queue.push(Reverse(Job {
                degree: g.total_degree().max(m.degree()),
                kind: JobKind::Generator,
                i: idx,
                j: 0,
            }));
        }
    }
    while let Some(Reverse(job)) = b.queue.pop() {
        if b.unit {
            break;
        }
        match job.kind {
            JobKind::Pair => {
                let s = b.s_poly(job.i, job.j)?;
                let h = reduce(ring, s, &b.reducers, true)?;
                if !h.is_zero() {
                    b.insert(h);
                }
            }
            JobKind::Generator => {
                let h = reduce(ring, gens[job.i].clone(), &b.reducers, true)?;
                if !h.is_zero() {
                    kept[job.i] = true;
                    b.insert(h);
                }
            }
        }
    }
    Ok((b.finish()?, kept))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum JobKind {
    Pair,
    Generator,
}

/// Queue entry; ordered by degree, pairs before generators, then indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Job {
    degree: u32,
    kind: JobKind,
    i: usize,
    j: usize,
}

/// Monic polynomials used for division, with leading data cached.
struct Reducers {
    polys: Vec<Polynomial>,
    leads: Vec<Monomial>,
    masks: Vec<u32>,
    /// Positions into the vectors above that currently take part.
    active: Vec<usize>,
}

impl Reducers {
    fn new(polys: Vec<Polynomial>) -> Self {
        let leads: Vec<Monomial> = polys.iter().map(|p| *p.leading_monomial().unwrap()).collect();
        let masks = leads.iter().map(|m| m.support_mask()).collect();
        let active = (0..polys.len()).collect();
        Reducers {
            polys,
            leads,
            masks,
            active,
        }
    }

    #[inline]
    fn find(&self, m: &Monomial) -> Option<usize> {
        let mask = m.support_mask();
        self.active
            .iter()
            .copied()
            .find(|&k| self.masks[k] & !mask == 0 && self.leads[k].divides(m))
    }
}

/// Full (or top-only) reduction of `f` by monic reducers.
fn reduce(ring: &PolyRing, f: Polynomial, red: &Reducers, full: bool) -> Result<Polynomial> {
    let field = ring.field();
    let check = !ring.order().is_degree_compatible();
    let mut cur = f.into_terms();
    let mut buf: Vec<Term> = Vec::with_capacity(cur.len());
    let mut rem: Vec<Term> = Vec::new();
    let mut start = 0;
    while start < cur.len() {
        let t = cur[start];
        match red.find(&t.mono) {
            Some(k) => {
                let g = red.polys[k].terms();
                let q = red.leads[k].quotient_of(&t.mono).unwrap();
                if check {
                    check_degree(q.degree() + red.polys[k].total_degree())?;
                }
                buf.clear();
                ring.merge_into(&mut buf, &cur[start + 1..], field.neg(t.coeff), &q, &g[1..]);
                std::mem::swap(&mut cur, &mut buf);
                start = 0;
            }
            None => {
                if !full {
                    rem.extend_from_slice(&cur[start..]);
                    break;
                }
                rem.push(t);
                start += 1;
            }
        }
    }
    Ok(Polynomial::from_sorted(rem))
}

struct Builder<'a> {
    ring: &'a PolyRing,
    basis: Vec<Polynomial>,
    leads: Vec<Monomial>,
    live: Vec<bool>,
    queue: BinaryHeap<Reverse<Job>>,
    reducers: Reducers,
    unit: bool,
}

impl<'a> Builder<'a> {
    fn new(ring: &'a PolyRing) -> Self {
        Builder {
            ring,
            basis: Vec::new(),
            leads: Vec::new(),
            live: Vec::new(),
            queue: BinaryHeap::new(),
            reducers: Reducers::new(Vec::new()),
            unit: false,
        }
    }

    fn s_poly(&self, i: usize, j: usize) -> Result<Polynomial> {
        let l = self.leads[i].lcm(&self.leads[j]);
        if l.degree() > crate::monomial::MAX_DEGREE {
            return Err(Error::DegreeOverflow(format!(
                "S-pair ({i}, {j}) has lcm degree {}",
                l.degree()
            )));
        }
        let qi = self.leads[i].quotient_of(&l).unwrap();
        let qj = self.leads[j].quotient_of(&l).unwrap();
        let gi = self.basis[i].terms();
        let gj = self.basis[j].terms();
        let ring = self.ring;
        let a = ring.mul_term(&Polynomial::from_sorted(gi[1..].to_vec()), crate::field::FieldElement::ONE, &qi)?;
        let mut out = Vec::with_capacity(gi.len() + gj.len());
        ring.merge_into(&mut out, a.terms(), ring.field().neg(crate::field::FieldElement::ONE), &qj, &gj[1..]);
        Ok(Polynomial::from_sorted(out))
    }

    /// Adds a nonzero, fully reduced polynomial and updates the pair queue.
    fn insert(&mut self, h: Polynomial) {
        let h = self.ring.monic(&h);
        let lead = *h.leading_monomial().unwrap();
        if lead.is_one() {
            self.unit = true;
        }
        let k = self.basis.len();

        // Chain criterion among the new pairs, then the product criterion.
        let cands: Vec<(usize, Monomial)> = (0..k)
            .filter(|&i| self.live[i])
            .map(|i| (i, self.leads[i].lcm(&lead)))
            .collect();
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        for (idx, &(i, l)) in cands.iter().enumerate() {
            let coprime = self.leads[i].is_coprime(&lead);
            let dominated = cands[idx + 1..].iter().any(|(_, l2)| l2.divides(&l))
                || kept.iter().any(|(_, l2, _)| l2.divides(&l));
            if coprime || !dominated {
                kept.push((i, l, coprime));
            }
        }

        // Old pairs made redundant by the new leading monomial.
        let leads = &self.leads;
        self.queue.retain(|Reverse(job)| {
            if job.kind != JobKind::Pair {
                return true;
            }
            let lij = leads[job.i].lcm(&leads[job.j]);
            !lead.divides(&lij)
                || leads[job.i].lcm(&lead) == lij
                || leads[job.j].lcm(&lead) == lij
        });

        for i in 0..k {
            if self.live[i] && lead.divides(&self.leads[i]) {
                self.live[i] = false;
            }
        }
        for (i, l, coprime) in kept {
            if !coprime {
                self.queue.push(Reverse(Job {
                    degree: l.degree(),
                    kind: JobKind::Pair,
                    i,
                    j: k,
                }));
            }
        }

        self.basis.push(h.clone());
        self.leads.push(lead);
        self.live.push(true);
        self.reducers.polys.push(h);
        self.reducers.leads.push(lead);
        self.reducers.masks.push(lead.support_mask());
        self.reducers.active = (0..=k).filter(|&i| self.live[i]).collect();
    }

    fn finish(self) -> Result<GroebnerBasis> {
        let ring = self.ring;
        let order = ring.order();
        if self.unit {
            return Ok(GroebnerBasis {
                order,
                elements: vec![ring.one()],
                reduced: true,
            });
        }
        let mut minimal: Vec<Polynomial> = self
            .basis
            .into_iter()
            .zip(self.live)
            .filter_map(|(p, live)| live.then_some(p))
            .collect();
        minimal.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
        let mut reduced = Vec::with_capacity(minimal.len());
        for i in 0..minimal.len() {
            let others: Vec<Polynomial> = minimal
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| p.clone())
                .collect();
            let lead = minimal[i].terms()[0];
            let tail = Polynomial::from_sorted(minimal[i].terms()[1..].to_vec());
            let tail = reduce(ring, tail, &Reducers::new(others), true)?;
            let mut terms = Vec::with_capacity(tail.len() + 1);
            terms.push(lead);
            terms.extend_from_slice(tail.terms());
            reduced.push(Polynomial::from_sorted(terms));
        }
        Ok(GroebnerBasis {
            order,
            elements: reduced,
            reduced: true,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use std::sync::Arc;

    fn ring(p: u64, n: usize) -> PolyRing {
        PolyRing::new(Arc::new(FieldSpec::prime(p).unwrap()), n, TermOrder::Grevlex).unwrap()
    }

    #[test]
    fn twisted_cubic() {
        let r = ring(101, 4);
        let v: Vec<_> = (0..4).map(|i| r.var(i)).collect();
        let m = |a: usize, b: usize| r.mul(&v[a], &v[b]).unwrap();
        let gens = vec![
            r.sub(&m(0, 2), &m(1, 1)),
            r.sub(&m(1, 3), &m(2, 2)),
            r.sub(&m(0, 3), &m(1, 2)),
        ];
        let gb = buchberger(&r, &gens).unwrap();
        assert_eq!(gb.len(), 3);
        assert!(satisfies_buchberger_criterion(&r, &gb).unwrap());
    }

    #[test]
    fn unit_ideal_detected() {
        let r = ring(7, 2);
        let x = r.var(0);
        let f = r.add(&x, &r.one());
        let gb = buchberger(&r, &[x, f]).unwrap();
        assert!(gb.is_unit());
        assert_eq!(gb.len(), 1);
    }

    #[test]
    fn redundant_generators_flagged() {
        let r = ring(2, 2);
        let x = r.var(0);
        let y = r.var(1);
        let x2 = r.mul(&x, &x).unwrap();
        let xy = r.mul(&x, &y).unwrap();
        let (gb, kept) = buchberger_tracking(&r, &[], &[x2.clone(), x.clone(), xy]).unwrap();
        assert_eq!(gb.elements(), std::slice::from_ref(&x));
        assert_eq!(kept, vec![false, true, false]);
        let (_, kept) = buchberger_tracking(&r, &[x], &[x2, y]).unwrap();
        assert_eq!(kept, vec![false, true]);
    }

    #[test]
    fn lex_elimination() {
        let r = PolyRing::new(Arc::new(FieldSpec::prime(101).unwrap()), 2, TermOrder::Lex).unwrap();
        let x = r.var(0);
        let y = r.var(1);
        // x - y^2, y^3 - 1 => basis contains a pure y polynomial
        let g1 = r.sub(&x, &r.pow(&y, 2).unwrap());
        let g2 = r.sub(&r.pow(&y, 3).unwrap(), &r.one());
        let gb = buchberger(&r, &[g1, g2]).unwrap();
        assert!(gb.elements().iter().any(|g| g.uses_only_vars_below(2) && g.terms().iter().all(|t| t.mono.exponent(0) == 0)));
        assert!(satisfies_buchberger_criterion(&r, &gb).unwrap());
    }
}
