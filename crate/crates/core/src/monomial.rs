//! Monomials with fixed-width exponent vectors and the supported term orders.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Upper bound on the number of ring variables (including auxiliary
/// elimination variables).
pub const MAX_VARS: usize = 12;

/// Hard cap on total degree; exceeding it is an error, never a wrap.
pub const MAX_DEGREE: u32 = 1_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u32; MAX_VARS],
    degree: u32,
}

impl Default for Monomial {
    fn default() -> Self {
        Self::one()
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.exps.iter().rposition(|&e| e != 0).map_or(0, |i| i + 1);
        write!(f, "{:?}", &self.exps[..last])
    }
}

impl Monomial {
    pub const fn one() -> Self {
        Monomial {
            exps: [0; MAX_VARS],
            degree: 0,
        }
    }

    pub fn var(i: usize) -> Self {
        let mut m = Self::one();
        m.exps[i] = 1;
        m.degree = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Self> {
        if exps.len() > MAX_VARS {
            return Err(Error::TooManyVariables(exps.len()));
        }
        let mut m = Self::one();
        let mut degree: u64 = 0;
        for (slot, &e) in m.exps.iter_mut().zip(exps) {
            *slot = e;
            degree += e as u64;
        }
        if degree > MAX_DEGREE as u64 {
            return Err(Error::DegreeOverflow(format!(
                "monomial of degree {degree} exceeds {MAX_DEGREE}"
            )));
        }
        m.degree = degree as u32;
        Ok(m)
    }

    pub fn exponents(&self) -> &[u32; MAX_VARS] {
        &self.exps
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    /// Bit i set iff variable i occurs.
    pub fn support_mask(&self) -> u32 {
        self.exps
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &e)| if e > 0 { acc | (1 << i) } else { acc })
    }

    /// Product, or `None` if the result would exceed [`MAX_DEGREE`].
    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        let degree = self.degree + other.degree;
        if degree > MAX_DEGREE {
            return None;
        }
        Some(self.mul_unchecked(other))
    }

    /// Product without the degree cap check; callers bound the degree.
    #[inline]
    pub(crate) fn mul_unchecked(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (a, b) in exps.iter_mut().zip(other.exps.iter()) {
            *a += *b;
        }
        Monomial {
            exps,
            degree: self.degree + other.degree,
        }
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let mut exps = other.exps;
        for (a, b) in exps.iter_mut().zip(self.exps.iter()) {
            *a -= *b;
        }
        Some(Monomial {
            exps,
            degree: other.degree - self.degree,
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        let mut degree = 0;
        for (a, b) in exps.iter_mut().zip(other.exps.iter()) {
            *a = (*a).max(*b);
            degree += *a;
        }
        Monomial { exps, degree }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(other.exps.iter())
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Index of the single variable if this is a pure power x_i^k, k >= 1.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    /// `self / x_i`; the exponent of `x_i` must be positive.
    pub(crate) fn quotient_of_var(&self, i: usize) -> Monomial {
        debug_assert!(self.exps[i] > 0);
        let mut m = *self;
        m.exps[i] -= 1;
        m.degree -= 1;
        m
    }

    /// Moves every exponent `by` slots up (for adjoining leading variables).
    pub(crate) fn shifted_up(&self, by: usize) -> Monomial {
        let mut exps = [0; MAX_VARS];
        exps[by..].copy_from_slice(&self.exps[..MAX_VARS - by]);
        Monomial {
            exps,
            degree: self.degree,
        }
    }

    /// Inverse of [`Monomial::shifted_up`]; the dropped slots must be zero.
    pub(crate) fn shifted_down(&self, by: usize) -> Monomial {
        debug_assert!(self.exps[..by].iter().all(|&e| e == 0));
        let mut exps = [0; MAX_VARS];
        exps[..MAX_VARS - by].copy_from_slice(&self.exps[by..]);
        Monomial {
            exps,
            degree: self.degree,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TermOrder {
    #[default]
    Grevlex,
    Lex,
    /// Variables `0..split` dominate the rest; grevlex inside each block.
    BlockElimination { split: usize },
}

impl TermOrder {
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            TermOrder::Grevlex => {
                a.degree.cmp(&b.degree).then_with(|| revlex_tail(&a.exps, &b.exps))
            }
            TermOrder::Lex => a.exps.cmp(&b.exps),
            TermOrder::BlockElimination { split } => {
                let (a1, a2) = a.exps.split_at(split);
                let (b1, b2) = b.exps.split_at(split);
                grevlex_slice(a1, b1).then_with(|| grevlex_slice(a2, b2))
            }
        }
    }

    /// Whether the order refines total degree.
    pub fn is_degree_compatible(&self) -> bool {
        matches!(self, TermOrder::Grevlex)
    }
}

/// The grevlex tie-break for equal degrees: the monomial with the smaller
/// exponent in the last differing variable is larger.
#[inline]
fn revlex_tail(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

fn grevlex_slice(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| revlex_tail(a, b))
}
