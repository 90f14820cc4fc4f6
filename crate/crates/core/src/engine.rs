//! K_n, L_n, adjoint colons, cores, and the checks built on them.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::binomial_mod_p;
use crate::ideal::Ideal;
use crate::poly::Polynomial;
use crate::reductions::{
    analytic_spread, element_reduction_number, general_elements, general_minimal_reduction,
    reduction_number, s_invariant, stream, GeneralElementConfig, ReductionDatum,
};
use crate::ring::RingExt;

pub const DEFAULT_T_MAX: usize = 25;
pub const DEFAULT_WINDOW: usize = 3;
/// Upper bound on reductions intersected by a single core run.
pub const MAX_CORE_REDUCTIONS: usize = 64;
pub const BRUTE_FORCE_LIMIT: u128 = 1_000_000;

fn require_positive(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("n must be positive".into()))
    } else {
        Ok(())
    }
}

/// All compositions of `n` into `parts` nonnegative parts.
fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; parts];
    fn rec(i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for v in (0..=left).rev() {
            cur[i] = v;
            rec(i + 1, left - v, cur, out);
        }
    }
    if parts > 0 {
        rec(0, n, &mut cur, &mut out);
    }
    out
}

/// K_n from the explicit generating set: with f = gens(J) ++ gens(I) and
/// t = μ(J), every product f^ν with |ν| = n whose coefficient
/// ∏_{t ≤ j < m−1} C(n − Σ_{i<j} ν_i, ν_j) is nonzero in k.
pub fn kn_binomial(j: &Ideal, i: &Ideal, n: usize) -> Result<Ideal> {
    require_positive(n)?;
    if !i.contains_ideal(j)? {
        return Err(Error::NotContained);
    }
    let ring = i.ring();
    let poly = ring.poly_ring();
    let p = ring.field().characteristic();
    let f: Vec<&Polynomial> = j.gens().iter().chain(i.gens()).collect();
    let t = j.num_gens();
    let m = f.len();
    // powers[k][e] = f_k^e modulo Q
    let mut powers: Vec<Vec<Polynomial>> = Vec::with_capacity(m);
    for g in &f {
        let mut row = vec![poly.one()];
        for e in 1..=n {
            row.push(ring.reduce(&poly.mul(&row[e - 1], g)?)?);
        }
        powers.push(row);
    }
    let mut gens = Vec::new();
    for nu in compositions(n, m) {
        let mut prefix: u64 = nu[..t].iter().map(|&v| v as u64).sum();
        let mut nonzero = true;
        for &v in &nu[t..m.saturating_sub(1).max(t)] {
            if binomial_mod_p(n as u64 - prefix, v as u64, p)? == 0 {
                nonzero = false;
                break;
            }
            prefix += v as u64;
        }
        if !nonzero {
            continue;
        }
        let mut prod = poly.one();
        for (k, &e) in nu.iter().enumerate() {
            if e > 0 {
                prod = ring.reduce(&poly.mul(&prod, &powers[k][e])?)?;
            }
        }
        let prod = poly.monic(&prod);
        if !prod.is_zero() && !gens.contains(&prod) {
            gens.push(prod);
        }
    }
    gens.sort_by_key(|g: &Polynomial| g.total_degree());
    Ideal::interreduced(ring.clone(), gens)
}

/// Result of the incremental computation of K_n.
#[derive(Clone, Debug)]
pub struct KnResult {
    pub kn: Ideal,
    /// Number of general elements b_i whose (J, b_i)^n were summed.
    pub elements_used: usize,
}

fn kn_general_run(j: &Ideal, i: &Ideal, n: usize, cfg: &GeneralElementConfig, path: &[u64], t_max: usize) -> Result<KnResult> {
    let ring = i.ring();
    let mut acc: Option<Ideal> = None;
    for t in 0..=t_max {
        let mut p = path.to_vec();
        p.extend([stream::ELEMENT, t as u64]);
        let b = general_elements(i, 1, cfg, &p)?.elements.remove(0);
        let term = j.sum(&ring.ideal(vec![b])?)?.power(n as u32)?;
        match acc {
            None => acc = Some(term),
            Some(c) => {
                if c.contains_ideal(&term)? {
                    return Ok(KnResult {
                        kn: c,
                        elements_used: t,
                    });
                }
                let mut gens = c.gens().to_vec();
                gens.extend(term.gens().iter().cloned());
                acc = Some(Ideal::interreduced(ring.clone(), gens)?);
            }
        }
    }
    Err(Error::KnNotStabilized { n, t_max })
}

/// K_n as Σ_{i ≤ t} (J, b_i)^n for general b_i, stopping at the first t
/// where adding b_{t+1} changes nothing. Repeated with independent
/// sub-seeds; the runs must agree.
pub fn kn_general(
    j: &Ideal,
    i: &Ideal,
    n: usize,
    cfg: &GeneralElementConfig,
    path: &[u64],
    t_max: usize,
) -> Result<KnResult> {
    require_positive(n)?;
    cfg.validate()?;
    if !i.contains_ideal(j)? {
        return Err(Error::NotContained);
    }
    let runs: Vec<KnResult> = (0..cfg.repeats)
        .into_par_iter()
        .map(|k| {
            let mut p = path.to_vec();
            p.extend([stream::KN, n as u64, k as u64]);
            kn_general_run(j, i, n, cfg, &p, t_max)
        })
        .collect::<Result<_>>()?;
    for r in &runs[1..] {
        if !r.kn.equals(&runs[0].kn)? {
            return Err(Error::Genericity("K_n".into()));
        }
    }
    Ok(runs.into_iter().next().expect("repeats >= 2"))
}

/// Σ_b (J, b)^n over every b = Σ λ_j f_j with λ in the prime field. Only
/// meaningful as K_n when the prime field is large relative to n.
pub fn kn_bruteforce(j: &Ideal, i: &Ideal, n: usize) -> Result<Ideal> {
    require_positive(n)?;
    if !i.contains_ideal(j)? {
        return Err(Error::NotContained);
    }
    let ring = i.ring();
    let field = ring.field();
    let poly = ring.poly_ring();
    let p = field.characteristic();
    let m = i.num_gens() as u32;
    let count = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
    if count > BRUTE_FORCE_LIMIT {
        return Err(Error::BruteForceInfeasible(count));
    }
    let jpowers: Vec<Ideal> = (0..=n).map(|e| j.power(e as u32)).collect::<Result<_>>()?;
    let mut gens: Vec<Polynomial> = jpowers[n].gens().to_vec();
    let mut digits = vec![0u64; m as usize];
    for _ in 0..count {
        let mut b = Polynomial::zero();
        for (d, f) in digits.iter().zip(i.gens()) {
            b = poly.add(&b, &poly.scale(f, field.from_int(*d as i64)));
        }
        if !b.is_zero() {
            let mut bk = poly.one();
            for k in 1..=n {
                bk = ring.reduce(&poly.mul(&bk, &b)?)?;
                for g in jpowers[n - k].gens() {
                    let h = poly.monic(&ring.reduce(&poly.mul(g, &bk)?)?);
                    if !h.is_zero() && !gens.contains(&h) {
                        gens.push(h);
                    }
                }
            }
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < p {
                break;
            }
            *d = 0;
        }
    }
    gens.sort_by_key(|g| g.total_degree());
    Ideal::interreduced(ring.clone(), gens)
}

/// L_n = J^(n+1) : K_n.
pub fn ln_from_kn(j: &Ideal, kn: &Ideal, n: usize) -> Result<Ideal> {
    let jn1 = j.power(n as u32 + 1)?;
    require_local(&jn1)?;
    jn1.colon(kn)
}

pub fn ln_ideal(
    j: &Ideal,
    i: &Ideal,
    n: usize,
    cfg: &GeneralElementConfig,
    path: &[u64],
    t_max: usize,
) -> Result<Ideal> {
    let kn = kn_general(j, i, n, cfg, path, t_max)?;
    ln_from_kn(j, &kn.kn, n)
}

/// J^(n+1) : I^n.
pub fn adjoint_colon(j: &Ideal, i: &Ideal, n: usize) -> Result<Ideal> {
    if !i.contains_ideal(j)? {
        return Err(Error::NotContained);
    }
    let jn1 = j.power(n as u32 + 1)?;
    require_local(&jn1)?;
    jn1.colon(&i.power(n as u32)?)
}

fn require_local(a: &Ideal) -> Result<()> {
    if a.is_m_primary()? {
        Ok(())
    } else {
        Err(Error::NonLocal)
    }
}

/// Parameters shared by the core computations.
#[derive(Clone, Debug)]
pub struct CoreParams {
    pub cfg: GeneralElementConfig,
    pub window: usize,
    pub t_max: usize,
}

impl Default for CoreParams {
    fn default() -> Self {
        CoreParams {
            cfg: GeneralElementConfig::default(),
            window: DEFAULT_WINDOW,
            t_max: DEFAULT_T_MAX,
        }
    }
}

/// Lower and upper bounds for the core attached to one reduction.
#[derive(Clone, Debug)]
pub struct Sandwich {
    /// J^(n+1) : I^n.
    pub lower: Ideal,
    pub kn: Ideal,
    /// L_n(J).
    pub upper: Ideal,
    pub lower_strict: bool,
    pub upper_strict: bool,
    /// n ≥ max(r_J(I) − ℓ + g, 0), under which the bounds are guaranteed.
    pub guaranteed: bool,
}

#[derive(Clone, Debug)]
pub struct CoreReport {
    pub core: Ideal,
    pub requested_n: usize,
    /// n actually used for the bounds (at least s).
    pub n: usize,
    pub s: usize,
    pub ell: usize,
    pub height: usize,
    pub reductions: Vec<ReductionDatum>,
    pub bounds: Vec<Sandwich>,
    /// Some reduction had equal lower and upper bounds, which pins the core.
    pub pinched: bool,
    pub log: Vec<String>,
}

impl CoreReport {
    pub fn certification(&self) -> &'static str {
        if self.pinched {
            "sandwich-certified"
        } else {
            "sandwich-inconclusive, window-certified"
        }
    }
}

fn sandwich(
    datum: &ReductionDatum,
    core: &Ideal,
    n: usize,
    threshold: usize,
    params: &CoreParams,
    path: &[u64],
) -> Result<Sandwich> {
    let i = &datum.i;
    let lower = adjoint_colon(&datum.j, i, n)?;
    let kn = kn_general(&datum.j, i, n, &params.cfg, path, params.t_max)?.kn;
    let upper = ln_from_kn(&datum.j, &kn, n)?;
    let guaranteed = n >= threshold;
    let lower_ok = core.contains_ideal(&lower)?;
    let upper_ok = upper.contains_ideal(core)?;
    if guaranteed && !(lower_ok && upper_ok) {
        return Err(Error::TheoremViolation(
            "core candidate violates the sandwich bounds".into(),
        ));
    }
    Ok(Sandwich {
        lower_strict: lower_ok && !lower.equals(core)?,
        upper_strict: upper_ok && !upper.equals(core)?,
        lower,
        kn,
        upper,
        guaranteed,
    })
}

fn require_m_primary(i: &Ideal) -> Result<()> {
    if i.is_m_primary()? {
        Ok(())
    } else {
        Err(Error::NonLocal)
    }
}

/// One run of the adaptive intersection, drawing at least `min_reductions`.
fn core_run(i: &Ideal, n: usize, params: &CoreParams, path: &[u64], min_reductions: usize) -> Result<CoreReport> {
    require_m_primary(i)?;
    let cfg = &params.cfg;
    let ell = analytic_spread(i)?;
    let height = i.height()?;
    let draw = |k: usize| -> Result<ReductionDatum> {
        let mut p = path.to_vec();
        p.push(k as u64);
        general_minimal_reduction(i, cfg, &p)
    };
    let mut log = Vec::new();
    let first = draw(0)?;
    let mut sp = path.to_vec();
    sp.push(stream::S_INVARIANT);
    let s = s_invariant(i, &first.j, cfg, &sp)?;
    let n_used = if n == 0 { s } else { n.max(s) };
    if n != 0 && n_used != n {
        log.push(format!("n raised from {n} to s = {s}"));
    }
    let mut current = first.j.clone();
    let mut reductions = vec![first];
    let mut stable = 0;
    while stable < params.window || reductions.len() < min_reductions {
        if reductions.len() >= MAX_CORE_REDUCTIONS {
            return Err(Error::CoreNotStabilized(reductions.len()));
        }
        let d = draw(reductions.len())?;
        let next = current.intersect(&d.j)?;
        if next.equals(&current)? {
            stable += 1;
        } else {
            stable = 0;
            current = next;
        }
        reductions.push(d);
    }
    for d in &reductions {
        if d.rejected > 0 {
            log.push(format!("{} sample(s) rejected as non-reductions", d.rejected));
        }
        if d.localized {
            log.push("sampled reduction cut down to its m-primary component".into());
        }
    }
    let core = current;
    let bounds: Vec<Sandwich> = reductions
        .par_iter()
        .enumerate()
        .map(|(k, d)| {
            let threshold = (d.r + height).saturating_sub(ell);
            let mut p = path.to_vec();
            p.extend([stream::KN, k as u64]);
            sandwich(d, &core, n_used, threshold, params, &p)
        })
        .collect::<Result<_>>()?;
    let mut pinched = false;
    for b in &bounds {
        if b.lower.equals(&b.upper)? {
            pinched = true;
        }
    }
    Ok(CoreReport {
        core,
        requested_n: n,
        n: n_used,
        s,
        ell,
        height,
        reductions,
        bounds,
        pinched,
        log,
    })
}

fn core_runs(i: &Ideal, n: usize, params: &CoreParams, min_reductions: usize) -> Result<Vec<CoreReport>> {
    params.cfg.validate()?;
    let runs: Vec<CoreReport> = (0..params.cfg.repeats)
        .into_par_iter()
        .map(|k| core_run(i, n, params, &[stream::CORE, k as u64], min_reductions))
        .collect::<Result<_>>()?;
    for r in &runs[1..] {
        if !r.core.equals(&runs[0].core)? {
            return Err(Error::Genericity("core".into()));
        }
        if r.s != runs[0].s {
            return Err(Error::Genericity("s".into()));
        }
    }
    Ok(runs)
}

/// core(I) as the intersection of general minimal reductions, stopping once
/// `window` consecutive new reductions leave it unchanged; every reduction
/// used is checked against its lower and upper bounds at n (raised to s if
/// smaller; n = 0 means n = s). The whole computation runs `repeats` times
/// independently.
pub fn core(i: &Ideal, n: usize, params: &CoreParams) -> Result<CoreReport> {
    let mut runs = core_runs(i, n, params, 1)?;
    let mut first = runs.remove(0);
    first
        .log
        .push(format!("core agreed across {} independent runs", runs.len() + 1));
    Ok(first)
}

#[derive(Clone, Debug)]
pub struct ChainVerdict {
    pub n: usize,
    pub r: usize,
    pub ell: usize,
    pub height: usize,
    /// max(r − ℓ + g, 0).
    pub threshold: usize,
    pub lower: Ideal,
    pub core: Ideal,
    pub upper: Ideal,
    pub lower_contained: bool,
    pub upper_contained: bool,
    pub lower_strict: bool,
    pub upper_strict: bool,
}

/// J^(n+1) : I^n ⊆ core(I) ⊆ L_n(J) for a general minimal reduction J,
/// with strictness. A failed containment is an error when n is at least
/// the threshold and is reported otherwise. n = 0 means n = s.
pub fn check_inclusion_chain(i: &Ideal, n: usize, params: &CoreParams) -> Result<ChainVerdict> {
    let report = core(i, n, params)?;
    let n = if n == 0 { report.n } else { n };
    let d = &report.reductions[0];
    let (lower, upper) = if report.n == n {
        (report.bounds[0].lower.clone(), report.bounds[0].upper.clone())
    } else {
        let lower = adjoint_colon(&d.j, i, n)?;
        let upper = ln_ideal(&d.j, i, n, &params.cfg, &[stream::CORE, u64::MAX], params.t_max)?;
        (lower, upper)
    };
    let core = report.core.clone();
    let threshold = (d.r + report.height).saturating_sub(report.ell);
    let lower_contained = core.contains_ideal(&lower)?;
    let upper_contained = upper.contains_ideal(&core)?;
    if n >= threshold && !(lower_contained && upper_contained) {
        return Err(Error::TheoremViolation(
            "core candidate violates the sandwich bounds".into(),
        ));
    }
    Ok(ChainVerdict {
        n,
        r: d.r,
        ell: report.ell,
        height: report.height,
        threshold,
        lower_strict: lower_contained && !lower.equals(&core)?,
        upper_strict: upper_contained && !upper.equals(&core)?,
        lower,
        core,
        upper,
        lower_contained,
        upper_contained,
    })
}

#[derive(Clone, Debug)]
pub struct ConjectureVerdict {
    pub core: Ideal,
    pub n: usize,
    pub ell: usize,
    /// Entry j−1: whether ∩_{i ≤ j} L_n(J_i) equals the core.
    pub equal: Vec<bool>,
    /// The partial intersections from the first run.
    pub partial: Vec<Ideal>,
    /// The first run, with its reductions and bounds.
    pub report: CoreReport,
}

/// Compares ∩_{i ≤ j} L_n(J_i) with core(I) for j = 1..ℓ and general
/// minimal reductions J_i; the verdicts must agree across runs. n = 0
/// means n = s.
pub fn check_conjecture(i: &Ideal, n: usize, params: &CoreParams) -> Result<ConjectureVerdict> {
    require_m_primary(i)?;
    let ell = analytic_spread(i)?;
    let runs = core_runs(i, n, params, ell)?;
    let mut verdicts: Vec<(Vec<bool>, Vec<Ideal>)> = Vec::new();
    for r in &runs {
        let mut acc = r.bounds[0].upper.clone();
        let mut equal = vec![acc.equals(&r.core)?];
        let mut partial = vec![acc.clone()];
        for b in &r.bounds[1..ell] {
            acc = acc.intersect(&b.upper)?;
            equal.push(acc.equals(&r.core)?);
            partial.push(acc.clone());
        }
        verdicts.push((equal, partial));
    }
    for v in &verdicts[1..] {
        if v.0 != verdicts[0].0 {
            return Err(Error::Genericity("partial intersections of L_n".into()));
        }
    }
    let (equal, partial) = verdicts.swap_remove(0);
    let first = runs.into_iter().next().expect("repeats >= 2");
    Ok(ConjectureVerdict {
        core: first.core.clone(),
        n: first.n,
        ell,
        equal,
        partial,
        report: first,
    })
}

#[derive(Clone, Debug)]
pub struct StabilizationReport {
    pub s: usize,
    pub r: usize,
    /// (n, L_n) for n = s, s+1, s+2.
    pub ln: Vec<(usize, Ideal)>,
    /// (n, K_n).
    pub kn: Vec<(usize, Ideal)>,
    /// First n from which J^(n+1) : I^n is checked to be constant.
    pub adjoint_from: usize,
    pub adjoint: Ideal,
}

/// L_n = L_s and J^(n−s) K_s = K_n for n = s, s+1, s+2, and constancy of
/// J^(n+1) : I^n for three consecutive n from max(r − ℓ + g, 0).
pub fn check_stabilization(j: &Ideal, i: &Ideal, params: &CoreParams) -> Result<StabilizationReport> {
    require_m_primary(i)?;
    require_m_primary(j)?;
    let cfg = &params.cfg;
    let r = reduction_number(j, i, cfg.n_max)?;
    let s = s_invariant(i, j, cfg, &[stream::S_INVARIANT])?;
    let violation = |what: String| Err(Error::TheoremViolation(what));
    let mut kn = Vec::new();
    let mut ln = Vec::new();
    for n in s.max(1)..=s + 2 {
        let k = kn_general(j, i, n, cfg, &[stream::KN], params.t_max)?.kn;
        let l = ln_from_kn(j, &k, n)?;
        kn.push((n, k));
        ln.push((n, l));
    }
    for (n, l) in &ln[1..] {
        if !l.equals(&ln[0].1)? {
            return violation(format!("L_{n} differs from L_{}", ln[0].0));
        }
    }
    let base = kn[0].0;
    for (n, k) in &kn[1..] {
        let lhs = j.power((n - base) as u32)?.product(&kn[0].1)?;
        if !lhs.equals(k)? {
            return violation(format!("J^{} K_{base} differs from K_{n}", n - base));
        }
    }
    let ell = analytic_spread(i)?;
    let height = i.height()?;
    let from = (r + height).saturating_sub(ell).max(1);
    let adj: Vec<Ideal> = (from..from + 3).map(|n| adjoint_colon(j, i, n)).collect::<Result<_>>()?;
    for (k, a) in adj.iter().enumerate().skip(1) {
        if !a.equals(&adj[0])? {
            return violation(format!(
                "J^(n+1) : I^n changes between n = {from} and n = {}",
                from + k
            ));
        }
    }
    Ok(StabilizationReport {
        s,
        r,
        ln,
        kn,
        adjoint_from: from,
        adjoint: adj.into_iter().next().expect("three values"),
    })
}

/// r_J((J, b)) for `count` sampled general b, each of which must be at most s.
pub fn check_element_bound(
    i: &Ideal,
    j: &Ideal,
    s: usize,
    count: usize,
    cfg: &GeneralElementConfig,
) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let b = general_elements(i, 1, cfg, &[stream::ELEMENT, u64::MAX, k as u64])?
            .elements
            .remove(0);
        let r = element_reduction_number(j, &b, cfg.n_max)?;
        if r > s {
            return Err(Error::TheoremViolation(format!(
                "r_J((J, b)) = {r} exceeds s = {s}"
            )));
        }
        out.push(r);
    }
    Ok(out)
}
