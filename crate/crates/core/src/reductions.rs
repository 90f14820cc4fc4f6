//! General elements, general minimal reductions, reduction numbers and the
//! stabilization index s.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldElement, DEFAULT_FIELD_FLOOR};
use crate::ideal::Ideal;
use crate::poly::Polynomial;
use crate::ring::RingExt;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_REPEATS: usize = 2;
pub const DEFAULT_N_MAX: usize = 20;

/// Stream tags keeping the random draws of different computations apart.
pub mod stream {
    pub const REDUCTION: u64 = 1;
    pub const S_INVARIANT: u64 = 2;
    pub const KN: u64 = 3;
    pub const CORE: u64 = 4;
    pub const CONJECTURE: u64 = 5;
    pub const ELEMENT: u64 = 6;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralElementConfig {
    pub seed: u64,
    /// Independent re-samplings used to certify genericity; at least 2.
    pub repeats: usize,
    /// Fields smaller than this trigger a warning.
    pub field_floor: u64,
    pub n_max: usize,
}

impl Default for GeneralElementConfig {
    fn default() -> Self {
        GeneralElementConfig {
            seed: DEFAULT_SEED,
            repeats: DEFAULT_REPEATS,
            field_floor: DEFAULT_FIELD_FLOOR,
            n_max: DEFAULT_N_MAX,
        }
    }
}

impl GeneralElementConfig {
    pub fn with_seed(seed: u64) -> Self {
        GeneralElementConfig {
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.repeats < 2 {
            return Err(Error::InvalidArgument(format!(
                "repeats must be at least 2, got {}",
                self.repeats
            )));
        }
        Ok(())
    }

    /// Deterministic sub-seed for the draw addressed by `path`.
    pub fn sub_seed(&self, path: &[u64]) -> u64 {
        path.iter().fold(splitmix64(self.seed), |acc, &x| splitmix64(acc ^ splitmix64(x)))
    }

    pub fn rng(&self, path: &[u64]) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.sub_seed(path))
    }

    /// The same configuration rooted at a derived seed.
    pub fn derive(&self, path: &[u64]) -> Self {
        GeneralElementConfig {
            seed: self.sub_seed(path),
            ..self.clone()
        }
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Random combinations of the generators of an ideal, with the λ-matrix.
#[derive(Clone, Debug)]
pub struct GeneralElements {
    pub elements: Vec<Polynomial>,
    /// Row i holds the coefficients of element i on `gens(I)`.
    pub lambdas: Vec<Vec<FieldElement>>,
}

pub fn general_elements(
    i: &Ideal,
    t: usize,
    cfg: &GeneralElementConfig,
    path: &[u64],
) -> Result<GeneralElements> {
    if i.is_zero() {
        return Err(Error::EmptyGenerators);
    }
    let ring = i.ring();
    if ring.field().size() < cfg.field_floor {
        log::warn!(
            "field of size {} is below the configured floor {}",
            ring.field().size(),
            cfg.field_floor
        );
    }
    let mut rng = cfg.rng(path);
    let mut elements = Vec::with_capacity(t);
    let mut lambdas = Vec::with_capacity(t);
    for _ in 0..t {
        let (b, l) = ring.poly_ring().random_linear_combination(i.gens(), &mut rng)?;
        elements.push(b);
        lambdas.push(l);
    }
    Ok(GeneralElements { elements, lambdas })
}

/// ℓ(I) for m-primary I, which is dim R.
pub fn analytic_spread(i: &Ideal) -> Result<usize> {
    if !i.is_m_primary()? {
        return Err(Error::AnalyticSpreadUnsupported);
    }
    Ok(i.ring().dim())
}

/// Least n ≤ n_max with I^(n+1) = J I^n.
pub fn reduction_number(j: &Ideal, i: &Ideal, n_max: usize) -> Result<usize> {
    if !i.contains_ideal(j)? {
        return Err(Error::NotContained);
    }
    let mut power = i.ring().unit_ideal();
    for n in 0..=n_max {
        let next = power.product(i)?;
        let lower = j.product(&power)?;
        if lower.contains_ideal(&next)? {
            return Ok(n);
        }
        power = next;
    }
    Err(Error::NotAReduction { last_n: n_max })
}

#[derive(Clone, Debug)]
pub struct ReductionDatum {
    pub j: Ideal,
    pub i: Ideal,
    /// r_J(I).
    pub r: usize,
    pub lambdas: Vec<Vec<FieldElement>>,
    /// Whether J had to be cut down to its m-primary component.
    pub localized: bool,
    /// Samples rejected before this one.
    pub rejected: usize,
}

/// J generated by ℓ(I) general elements of I, verified to be a reduction.
/// A sample that is not a reduction is discarded and the next sub-seed
/// tried, up to `repeats` samples.
pub fn general_minimal_reduction(
    i: &Ideal,
    cfg: &GeneralElementConfig,
    path: &[u64],
) -> Result<ReductionDatum> {
    cfg.validate()?;
    let ell = analytic_spread(i)?;
    for attempt in 0..cfg.repeats {
        let mut p = path.to_vec();
        p.extend([stream::REDUCTION, attempt as u64]);
        let sample = general_elements(i, ell, cfg, &p)?;
        let raw = i.ring().ideal(sample.elements)?;
        let localized = !raw.is_m_primary()?;
        let j = match raw.localize() {
            Ok(j) => j,
            Err(Error::NonLocal) => {
                log::warn!("sample {attempt} is not m-primary locally; resampling");
                continue;
            }
            Err(e) => return Err(e),
        };
        match reduction_number(&j, i, cfg.n_max) {
            Ok(r) => {
                return Ok(ReductionDatum {
                    j,
                    i: i.clone(),
                    r,
                    lambdas: sample.lambdas,
                    localized,
                    rejected: attempt,
                })
            }
            Err(Error::NotAReduction { .. }) => {
                log::warn!("sample {attempt} is not a reduction; resampling");
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::NoReductionFound)
}

/// r_J((J, b)) for a single element b.
pub fn element_reduction_number(j: &Ideal, b: &Polynomial, n_max: usize) -> Result<usize> {
    let jb = j.sum(&j.ring().ideal(vec![b.clone()])?)?;
    reduction_number(j, &jb, n_max)
}

/// s = r_J((J, b)) for a general element b of I, sampled `repeats` times;
/// all samples must agree.
pub fn s_invariant(i: &Ideal, j: &Ideal, cfg: &GeneralElementConfig, path: &[u64]) -> Result<usize> {
    cfg.validate()?;
    let mut value = None;
    for k in 0..cfg.repeats {
        let mut p = path.to_vec();
        p.extend([stream::S_INVARIANT, k as u64]);
        let b = general_elements(i, 1, cfg, &p)?.elements.remove(0);
        let r = element_reduction_number(j, &b, cfg.n_max)?;
        match value {
            None => value = Some(r),
            Some(v) if v != r => return Err(Error::Genericity("s".into())),
            Some(_) => {}
        }
    }
    Ok(value.expect("repeats >= 2"))
}
