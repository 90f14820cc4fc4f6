//! Linear algebra in finite-dimensional quotients P/D with D zero-dimensional.
//!
//! If W ⊆ P/D is a subspace closed under multiplication, the reduced
//! Gröbner basis of D + W follows from an echelon form of W: its leading
//! monomials together with those of D generate the initial ideal, and the
//! remaining standard monomials span the quotient. Colons and
//! intersections of zero-dimensional ideals are such kernels.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::groebner::GroebnerBasis;
use crate::monomial::Monomial;
use crate::poly::{PolyRing, Polynomial, Term};

/// Refuse quotients larger than this many standard monomials.
pub const MAX_STANDARD_MONOMIALS: usize = 4_000_000;

/// Coordinates on the standard monomials, sorted by index.
pub(crate) type Sparse = Vec<(u32, FieldElement)>;

/// Map images kept per block, counted in 8-byte entries with three per
/// vector header; the rest are recomputed.
const IMAGE_CACHE_ENTRIES: usize = 1 << 25;

pub(crate) struct FiniteQuotient<'a> {
    ring: &'a PolyRing,
    /// Monomials of this degree and above lie in D.
    bound: Option<u32>,
    reducers: Vec<Polynomial>,
    leads: Vec<Monomial>,
    /// Standard monomials, ascending in the term order.
    monos: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// Degree beyond which every monomial lies in D, when D is homogeneous.
    zero_above: Option<u32>,
}

impl<'a> FiniteQuotient<'a> {
    /// `None` when the basis does not describe a zero-dimensional ideal.
    pub fn of_basis(ring: &'a PolyRing, gb: &'a GroebnerBasis) -> Result<Option<Self>> {
        let leads = gb.leading_monomials();
        let covered = leads.iter().any(|m| m.is_one())
            || (0..ring.nvars()).all(|i| leads.iter().any(|m| m.pure_power_var() == Some(i)));
        if !covered {
            return Ok(None);
        }
        let homogeneous = gb.elements().iter().all(|g| g.is_homogeneous());
        let mut q = FiniteQuotient {
            ring,
            bound: None,
            reducers: gb.elements().to_vec(),
            leads,
            monos: Vec::new(),
            index: HashMap::new(),
            zero_above: None,
        };
        q.enumerate()?;
        if homogeneous {
            q.zero_above = Some(q.monos.iter().map(|m| m.degree()).max().unwrap_or(0));
        }
        Ok(Some(q))
    }

    pub fn truncated(ring: &'a PolyRing, q: &'a GroebnerBasis, bound: u32) -> Result<Self> {
        let mut fq = FiniteQuotient {
            ring,
            bound: Some(bound),
            reducers: q.elements().to_vec(),
            leads: q.leading_monomials(),
            monos: Vec::new(),
            index: HashMap::new(),
            zero_above: Some(bound.saturating_sub(1)),
        };
        fq.enumerate()?;
        Ok(fq)
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monos
    }

    fn is_standard(&self, m: &Monomial) -> bool {
        if self.bound.is_some_and(|b| m.degree() >= b) {
            return false;
        }
        !self.leads.iter().any(|l| l.divides(m))
    }

    fn enumerate(&mut self) -> Result<()> {
        let n = self.ring.nvars();
        let one = Monomial::one();
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        if self.is_standard(&one) {
            seen.insert(one);
            queue.push_back(one);
        }
        while let Some(m) = queue.pop_front() {
            for i in 0..n {
                let next = m.mul_unchecked(&Monomial::var(i));
                if !seen.contains(&next) && self.is_standard(&next) {
                    seen.insert(next);
                    queue.push_back(next);
                    if seen.len() > MAX_STANDARD_MONOMIALS {
                        return Err(Error::InvalidArgument(format!(
                            "quotient has more than {MAX_STANDARD_MONOMIALS} standard monomials"
                        )));
                    }
                }
            }
        }
        let order = self.ring.order();
        let mut monos: Vec<Monomial> = seen.into_iter().collect();
        monos.sort_by(|a, b| order.cmp(a, b));
        self.index = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        self.monos = monos;
        Ok(())
    }

    /// Normal forms of the given monomials (and of everything their
    /// reduction passes through), as coordinates on the standard monomials.
    pub fn monomial_normal_forms<I>(&self, wanted: I) -> Result<HashMap<Monomial, Sparse>>
    where
        I: IntoIterator<Item = Monomial>,
    {
        let field = self.ring.field();
        let mut memo: HashMap<Monomial, Sparse> = HashMap::new();
        let mut stack: Vec<Monomial> = Vec::new();
        for w in wanted {
            if memo.contains_key(&w) {
                continue;
            }
            stack.push(w);
            while let Some(&u) = stack.last() {
                if memo.contains_key(&u) {
                    stack.pop();
                    continue;
                }
                if let Some(&i) = self.index.get(&u) {
                    memo.insert(u, vec![(i as u32, field.one())]);
                    stack.pop();
                    continue;
                }
                if self.zero_above.is_some_and(|d| u.degree() > d) {
                    memo.insert(u, Vec::new());
                    stack.pop();
                    continue;
                }
                let mask = u.support_mask();
                let k = (0..self.leads.len())
                    .find(|&k| self.leads[k].support_mask() & !mask == 0 && self.leads[k].divides(&u))
                    .expect("non-standard monomial has a divisor among the leads");
                let g = &self.reducers[k];
                let q = self.leads[k].quotient_of(&u).expect("divides");
                let mut missing = false;
                for t in &g.terms()[1..] {
                    let v = t.mono.mul_unchecked(&q);
                    if !memo.contains_key(&v) {
                        stack.push(v);
                        missing = true;
                    }
                }
                if missing {
                    continue;
                }
                let scale = field.neg(field.inv(g.terms()[0].coeff)?);
                let mut acc: Vec<(u32, FieldElement)> = Vec::new();
                for t in &g.terms()[1..] {
                    let c = field.mul(scale, t.coeff);
                    for &(i, x) in &memo[&t.mono.mul_unchecked(&q)] {
                        acc.push((i, field.mul(c, x)));
                    }
                }
                memo.insert(u, combine(field, acc));
                stack.pop();
            }
        }
        Ok(memo)
    }

    /// Reduced basis of D + W, where W is the common kernel of `nmaps` linear
    /// maps on P/D. `image(i, k)` is the image of the i-th standard monomial
    /// under map k; images are computed when needed and not kept. The kernel must be closed under multiplication by
    /// the variables. With `graded` set, images of monomials of different
    /// degrees must have disjoint supports, which lets each degree be
    /// solved separately.
    pub fn kernel_extension<F>(&self, nmaps: usize, image: F, graded: bool) -> Result<GroebnerBasis>
    where
        F: Fn(usize, usize) -> Sparse + Sync,
    {
        let field = self.ring.field();
        let mut blocks = Vec::new();
        let mut start = 0;
        while start < self.monos.len() {
            let mut end = start + 1;
            if graded {
                while end < self.monos.len() && self.monos[end].degree() == self.monos[start].degree() {
                    end += 1;
                }
            } else {
                end = self.monos.len();
            }
            blocks.push((start, end));
            start = end;
        }
        let solved: Vec<BlockSolution> = blocks
            .par_iter()
            .map(|&(s, e)| solve_block(field, nmaps, &image, s, e, IMAGE_CACHE_ENTRIES))
            .collect::<Result<_>>()?;

        // Representatives u ≡ Σ c p (mod D + W) for kernel-leading monomials u.
        let mut rewrite: HashMap<Monomial, Vec<(Monomial, FieldElement)>> = HashMap::new();
        let mut standard: Vec<Monomial> = Vec::new();
        for b in solved {
            standard.extend(b.pivots.iter().map(|&j| self.monos[j]));
            for (j, rep) in b.dependent {
                let rep = rep.into_iter().map(|(p, c)| (self.monos[p], c)).collect();
                rewrite.insert(self.monos[j], rep);
            }
        }
        self.assemble(&standard, &rewrite)
    }

    fn assemble(
        &self,
        standard: &[Monomial],
        rewrite: &HashMap<Monomial, Vec<(Monomial, FieldElement)>>,
    ) -> Result<GroebnerBasis> {
        let ring = self.ring;
        let order = ring.order();
        let field = ring.field();
        if standard.is_empty() {
            return Ok(GroebnerBasis::from_reduced(order, vec![ring.one()]));
        }
        let std_set: HashSet<Monomial> = standard.iter().copied().collect();
        let mut minimal: HashSet<Monomial> = HashSet::new();
        for s in standard {
            for i in 0..ring.nvars() {
                let m = s.mul_unchecked(&Monomial::var(i));
                if std_set.contains(&m) {
                    continue;
                }
                let all_std = (0..ring.nvars())
                    .all(|j| m.exponent(j) == 0 || std_set.contains(&m.quotient_of_var(j)));
                if all_std {
                    minimal.insert(m);
                }
            }
        }
        let outside: Vec<Monomial> = minimal
            .iter()
            .filter(|m| !self.index.contains_key(m))
            .copied()
            .collect();
        let nfs = self.monomial_normal_forms(outside)?;
        let mut elements = Vec::with_capacity(minimal.len());
        for m in minimal {
            let mut terms = vec![Term {
                coeff: field.one(),
                mono: m,
            }];
            if let Some(rep) = rewrite.get(&m) {
                for &(p, c) in rep {
                    terms.push(Term {
                        coeff: field.neg(c),
                        mono: p,
                    });
                }
            } else {
                for &(i, c) in &nfs[&m] {
                    let t = self.monos[i as usize];
                    if std_set.contains(&t) {
                        terms.push(Term {
                            coeff: field.neg(c),
                            mono: t,
                        });
                    } else if let Some(rep) = rewrite.get(&t) {
                        for &(p, d) in rep {
                            terms.push(Term {
                                coeff: field.neg(field.mul(c, d)),
                                mono: p,
                            });
                        }
                    }
                }
            }
            elements.push(ring.from_terms(terms));
        }
        elements.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
        Ok(GroebnerBasis::from_reduced(order, elements))
    }
}

struct BlockSolution {
    /// Columns independent of all earlier ones.
    pivots: Vec<usize>,
    /// Column j equals the listed combination of pivot columns.
    dependent: Vec<(usize, Vec<(usize, FieldElement)>)>,
}

/// Columns processed in ascending order; each either extends the span of
/// the earlier ones or is recorded as a combination of the pivot columns.
///
/// The common kernel is the kernel of a random combination of the maps,
/// cut down by each map in turn. The coefficients only affect speed.
fn solve_block<F>(
    field: &FieldSpec,
    nmaps: usize,
    image: &F,
    start: usize,
    end: usize,
    cache_limit: usize,
) -> Result<BlockSolution>
where
    F: Fn(usize, usize) -> Sparse + Sync,
{
    let mut rng = ChaCha8Rng::seed_from_u64(((start as u64) << 32) ^ end as u64);
    let weights: Vec<FieldElement> = (0..nmaps).map(|_| field.random(&mut rng)).collect();

    let cached = AtomicUsize::new(0);
    let (combined, cache): (Vec<Sparse>, Vec<Option<Vec<Sparse>>>) = (start..end)
        .into_par_iter()
        .map(|j| {
            let images: Vec<Sparse> = (0..nmaps).map(|k| image(j, k)).collect();
            let mut acc = Vec::new();
            for (img, &w) in images.iter().zip(&weights) {
                acc.extend(img.iter().map(|&(i, c)| (i, field.mul(w, c))));
            }
            let size: usize = images.iter().map(|v| v.len() + 3).sum();
            let keep = cached.fetch_add(size, Ordering::Relaxed) + size <= cache_limit;
            (combine(field, acc), keep.then_some(images))
        })
        .unzip();
    let mut space = kernel(field, &combined)?;
    drop(combined);
    for k in 0..nmaps {
        if space.is_empty() {
            break;
        }
        let mut support: Vec<u32> = space.iter().flat_map(|v| v.iter().map(|&(j, _)| j)).collect();
        support.sort_unstable();
        support.dedup();
        let cols: HashMap<u32, Sparse> = support
            .into_par_iter()
            .filter(|&j| cache[j as usize].is_none())
            .map(|j| (j, image(start + j as usize, k)))
            .collect();
        let column = |j: u32| match &cache[j as usize] {
            Some(images) => &images[k],
            None => &cols[&j],
        };
        let images: Vec<Vec<(u32, FieldElement)>> = space
            .iter()
            .map(|v| {
                v.iter()
                    .flat_map(|&(j, c)| column(j).iter().map(move |&(i, d)| (i, field.mul(c, d))))
                    .collect()
            })
            .collect();
        let ker = kernel(field, &images)?;
        space = ker
            .iter()
            .map(|combo| {
                let mut acc = Vec::new();
                for &(b, c) in combo {
                    acc.extend(space[b as usize].iter().map(|&(j, d)| (j, field.mul(c, d))));
                }
                combine(field, acc)
            })
            .collect();
    }
    Ok(echelon_by_last(field, end - start, start, space))
}

/// Spanning set of the linear relations among `vectors`, each relation
/// given by its coefficients. Entries may repeat.
fn kernel(field: &FieldSpec, vectors: &[Vec<(u32, FieldElement)>]) -> Result<Vec<Sparse>> {
    let mut rows: HashMap<u32, usize> = HashMap::new();
    for v in vectors {
        for &(i, _) in v {
            let next = rows.len();
            rows.entry(i).or_insert(next);
        }
    }
    let nrows = rows.len();
    let mut basis: Vec<EchelonRow> = Vec::new();
    // input index of each basis row, in order
    let mut pivots: Vec<u32> = Vec::new();
    let mut out = Vec::new();
    for (j, src) in vectors.iter().enumerate() {
        let src = combine(field, src.clone());
        if src.is_empty() {
            out.push(vec![(j as u32, field.one())]);
            continue;
        }
        let mut v = vec![FieldElement::ZERO; nrows];
        for &(i, c) in &src {
            v[rows[&i]] = c;
        }
        let mut acc = vec![FieldElement::ZERO; pivots.len()];
        for b in &basis {
            let c = v[b.pivot];
            if c.is_zero() {
                continue;
            }
            field.sub_scaled(&mut v[b.pivot..], c, &b.vector[b.pivot..]);
            field.sub_scaled(&mut acc, field.neg(c), &b.combo);
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => {
                let mut rel: Sparse = pivots
                    .iter()
                    .zip(&acc)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(&p, &c)| (p, field.neg(c)))
                    .collect();
                rel.push((j as u32, field.one()));
                out.push(rel);
            }
            Some(pivot) => {
                let inv = field.inv(v[pivot])?;
                for x in v.iter_mut().skip(pivot) {
                    *x = field.mul(*x, inv);
                }
                let mut combo: Vec<FieldElement> = acc.iter().map(|&c| field.neg(field.mul(c, inv))).collect();
                combo.push(inv);
                basis.push(EchelonRow {
                    pivot,
                    vector: v,
                    combo,
                });
                pivots.push(j as u32);
            }
        }
    }
    Ok(out)
}

struct EchelonRow {
    pivot: usize,
    vector: Vec<FieldElement>,
    /// This row as a combination of the inputs that became pivots so far.
    combo: Vec<FieldElement>,
}

/// Reduced echelon form of a subspace of F^width, leading entry last.
/// Leading positions are the dependent columns, the others the pivots.
fn echelon_by_last(field: &FieldSpec, width: usize, offset: usize, space: Vec<Sparse>) -> BlockSolution {
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    let mut lead_of: Vec<Option<usize>> = vec![None; width];
    for sparse in space {
        let mut v = vec![FieldElement::ZERO; width];
        for (j, c) in sparse {
            v[j as usize] = field.add(v[j as usize], c);
        }
        for (p, lead) in lead_of.iter().enumerate().rev() {
            let (Some(r), c) = (*lead, v[p]) else {
                continue;
            };
            if c.is_zero() {
                continue;
            }
            field.sub_scaled(&mut v[..=p], c, &rows[r][..=p]);
        }
        let Some(last) = v.iter().rposition(|x| !x.is_zero()) else {
            continue;
        };
        let inv = field.inv(v[last]).expect("nonzero entry");
        for x in v.iter_mut().take(last + 1) {
            *x = field.mul(*x, inv);
        }
        for row in rows.iter_mut() {
            let c = row[last];
            if c.is_zero() {
                continue;
            }
            field.sub_scaled(&mut row[..=last], c, &v[..=last]);
        }
        lead_of[last] = Some(rows.len());
        rows.push(v);
    }
    let mut out = BlockSolution {
        pivots: Vec::new(),
        dependent: Vec::new(),
    };
    for (j, lead) in lead_of.iter().enumerate() {
        match lead {
            None => out.pivots.push(offset + j),
            Some(r) => {
                let rep = rows[*r][..j]
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(p, &c)| (offset + p, field.neg(c)))
                    .collect();
                out.dependent.push((offset + j, rep));
            }
        }
    }
    out
}

/// Sums entries with equal index and drops zeros.
pub(crate) fn combine(field: &FieldSpec, mut acc: Vec<(u32, FieldElement)>) -> Sparse {
    acc.sort_unstable_by_key(|&(i, _)| i);
    let mut out: Sparse = Vec::with_capacity(acc.len());
    for (i, c) in acc {
        match out.last_mut() {
            Some((j, d)) if *j == i => *d = field.add(*d, c),
            _ => out.push((i, c)),
        }
        if out.last().is_some_and(|(_, d)| d.is_zero()) {
            out.pop();
        }
    }
    out
}

/// Coordinates of `Σ c·u·m` over the terms c·m of `f`, for a fixed monomial u.
pub(crate) fn image_of_product(
    field: &FieldSpec,
    table: &HashMap<Monomial, Sparse>,
    u: &Monomial,
    f: &Polynomial,
) -> Sparse {
    let mut acc = Vec::new();
    for t in f.terms() {
        for &(i, x) in &table[&t.mono.mul_unchecked(u)] {
            acc.push((i, field.mul(t.coeff, x)));
        }
    }
    combine(field, acc)
}
