//! Quotient rings R = k[x_1..x_d]/Q and their maximal ideal m = (x_1..x_d).

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::groebner::{buchberger, GroebnerBasis};
use crate::ideal::Ideal;
use crate::monomial::{Monomial, TermOrder};
use crate::parse;
use crate::poly::{PolyRing, Polynomial};

/// Shared handle; ideals keep one of these.
pub type Ring = Arc<RingSpec>;

pub struct RingSpec {
    field: Arc<FieldSpec>,
    vars: Vec<String>,
    quotient: Vec<Polynomial>,
    poly: PolyRing,
    quotient_gb: GroebnerBasis,
    dim: usize,
}

impl fmt::Debug for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl PartialEq for RingSpec {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.vars == other.vars && self.quotient_gb == other.quotient_gb
    }
}

impl Eq for RingSpec {}

impl RingSpec {
    pub fn new(field: Arc<FieldSpec>, vars: Vec<String>, quotient: Vec<Polynomial>) -> Result<Ring> {
        if vars.is_empty() {
            return Err(Error::InvalidRing("no variables".into()));
        }
        let mut seen = HashSet::new();
        for v in &vars {
            if !parse::is_identifier(v) {
                return Err(Error::InvalidRing(format!("invalid variable name {v:?}")));
            }
            if v == parse::FIELD_GENERATOR {
                return Err(Error::InvalidRing(format!(
                    "{v:?} is reserved for the field generator"
                )));
            }
            if !seen.insert(v.as_str()) {
                return Err(Error::InvalidRing(format!("duplicate variable {v:?}")));
            }
        }
        let poly = PolyRing::new(field.clone(), vars.len(), TermOrder::Grevlex)?;
        if quotient.iter().any(|q| !poly.is_valid(q)) {
            return Err(Error::RingMismatch);
        }
        let quotient: Vec<Polynomial> = quotient.into_iter().filter(|q| !q.is_zero()).collect();
        let quotient_gb = buchberger(&poly, &quotient)?;
        if quotient_gb.is_unit() {
            return Err(Error::InvalidRing("the quotient ideal is the unit ideal".into()));
        }
        let dim = combinatorial_dimension(&quotient_gb.leading_monomials(), vars.len());
        Ok(Arc::new(RingSpec {
            field,
            vars,
            quotient,
            poly,
            quotient_gb,
            dim,
        }))
    }

    /// Parses variable names and quotient generators given as text.
    pub fn parse(field: Arc<FieldSpec>, vars: &[&str], quotient: &[&str]) -> Result<Ring> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let poly = PolyRing::new(field.clone(), names.len(), TermOrder::Grevlex)?;
        let q = quotient
            .iter()
            .map(|s| parse::parse_polynomial(&poly, &names, s))
            .collect::<Result<Vec<_>>>()?;
        RingSpec::new(field, names, q)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// The quotient generators as given (zeros dropped).
    pub fn quotient(&self) -> &[Polynomial] {
        &self.quotient
    }

    pub fn poly_ring(&self) -> &PolyRing {
        &self.poly
    }

    pub fn quotient_gb(&self) -> &GroebnerBasis {
        &self.quotient_gb
    }

    /// Krull dimension of R.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_polynomial_ring(&self) -> bool {
        self.quotient_gb.is_empty()
    }

    pub fn var(&self, i: usize) -> Polynomial {
        self.poly.var(i)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn parse_poly(&self, s: &str) -> Result<Polynomial> {
        parse::parse_polynomial(&self.poly, &self.vars, s)
    }

    /// Comma-separated list of polynomials.
    pub fn parse_polys(&self, s: &str) -> Result<Vec<Polynomial>> {
        parse::parse_polynomial_list(&self.poly, &self.vars, s)
    }

    pub fn format(&self, f: &Polynomial) -> String {
        self.poly.format(f, &self.vars)
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let s = crate::poly::format_monomial(m, &self.vars);
        if s.is_empty() {
            "1".into()
        } else {
            s
        }
    }

    /// Normal form modulo Q.
    pub fn reduce(&self, f: &Polynomial) -> Result<Polynomial> {
        self.quotient_gb.normal_form(&self.poly, f)
    }

    pub fn describe(&self) -> String {
        let field = if self.field.degree() == 1 {
            format!("GF({})", self.field.characteristic())
        } else {
            format!("GF({}^{})", self.field.characteristic(), self.field.degree())
        };
        let base = format!("{field}[{}]", self.vars.join(","));
        if self.quotient.is_empty() {
            base
        } else {
            let q: Vec<String> = self.quotient.iter().map(|q| self.format(q)).collect();
            format!("{base}/({})", q.join(", "))
        }
    }
}

/// Convenience constructors for ideals of a shared ring.
pub trait RingExt {
    fn ideal(&self, gens: Vec<Polynomial>) -> Result<Ideal>;
    fn parse_ideal(&self, s: &str) -> Result<Ideal>;
    fn zero_ideal(&self) -> Ideal;
    fn unit_ideal(&self) -> Ideal;
    fn maximal_ideal(&self) -> Ideal;
    /// m^k.
    fn maximal_power(&self, k: u32) -> Result<Ideal>;
}

impl RingExt for Ring {
    fn ideal(&self, gens: Vec<Polynomial>) -> Result<Ideal> {
        Ideal::new(self.clone(), gens)
    }

    fn parse_ideal(&self, s: &str) -> Result<Ideal> {
        Ideal::new(self.clone(), self.parse_polys(s)?)
    }

    fn zero_ideal(&self) -> Ideal {
        Ideal::new(self.clone(), Vec::new()).expect("empty generator list is valid")
    }

    fn unit_ideal(&self) -> Ideal {
        Ideal::new(self.clone(), vec![self.poly.one()]).expect("constant is valid")
    }

    fn maximal_ideal(&self) -> Ideal {
        let gens = (0..self.nvars()).map(|i| self.var(i)).collect();
        Ideal::new(self.clone(), gens).expect("variables are valid")
    }

    fn maximal_power(&self, k: u32) -> Result<Ideal> {
        let monos = monomials_of_degree(self.nvars(), k);
        let gens = monos
            .into_iter()
            .map(|m| self.poly.monomial(m, self.field.one()))
            .collect();
        Ideal::new(self.clone(), gens)
    }
}

/// All monomials of total degree `k` in `n` variables.
pub(crate) fn monomials_of_degree(n: usize, k: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; n];
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == exps.len() {
            exps[i] = left;
            out.push(Monomial::from_exponents(exps).expect("bounded"));
            return;
        }
        for e in (0..=left).rev() {
            exps[i] = e;
            rec(i + 1, left - e, exps, out);
        }
    }
    if n > 0 {
        rec(0, k, &mut exps, &mut out);
    }
    out
}

/// Dimension of k[x]/M for the monomial ideal M generated by `leads`: the
/// largest set of variables containing the support of no generator.
pub(crate) fn combinatorial_dimension(leads: &[Monomial], nvars: usize) -> usize {
    if leads.iter().any(|m| m.is_one()) {
        return 0;
    }
    let masks: Vec<u32> = leads.iter().map(|m| m.support_mask()).collect();
    let mut best = 0;
    for s in 0u32..(1 << nvars) {
        let size = s.count_ones() as usize;
        if size > best && masks.iter().all(|&m| m & !s != 0) {
            best = size;
        }
    }
    best
}
