//! Spec files: a ring, named ideals, and run options, one `key = value`
//! per line.
//!
//! ```text
//! # comments start with '#'
//! char = 2
//! ext_degree = 16
//! vars = x, y, z
//! quotient = z^3
//! ideal I = x^2, y^2, xz, yz
//! seed = 42
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;
use std::sync::Arc;

use core_ideals::field::{default_extension_degree, is_prime};
use core_ideals::parse::{parse_polynomial, FIELD_GENERATOR};
use core_ideals::{Error, FieldSpec, Ideal, PolyRing, Polynomial, Ring, RingSpec, TermOrder};

/// Run options that may also be given on the command line.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub seed: Option<u64>,
    pub repeats: Option<usize>,
    pub n: Option<usize>,
    pub n_max: Option<usize>,
    pub t_max: Option<usize>,
    pub window: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct SpecFile {
    pub ring: Ring,
    /// Named ideals in file order.
    pub ideals: Vec<(String, Ideal)>,
    pub options: Options,
}

impl PartialEq for SpecFile {
    fn eq(&self, other: &Self) -> bool {
        self.ring.field() == other.ring.field()
            && self.ring.vars() == other.ring.vars()
            && self.ring.quotient() == other.ring.quotient()
            && self.options == other.options
            && self.ideals.len() == other.ideals.len()
            && self
                .ideals
                .iter()
                .zip(&other.ideals)
                .all(|(a, b)| a.0 == b.0 && a.1.gens() == b.1.gens())
    }
}

const KEYS: [&str; 12] = [
    "char",
    "ext_degree",
    "modulus",
    "vars",
    "quotient",
    "ideal",
    "seed",
    "repeats",
    "n",
    "n_max",
    "t_max",
    "window",
];

struct Entry<'a> {
    line: usize,
    /// 1-based column of the first byte of `value`.
    column: usize,
    value: &'a str,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Moves a parse error inside `e.value` to file coordinates.
fn relocate(e: Error, at: &Entry) -> Error {
    match e {
        Error::Parse {
            line: 1,
            column,
            message,
        } => err(at.line, at.column + column - 1, message),
        other => err(at.line, at.column, other.to_string()),
    }
}

fn number<T: std::str::FromStr>(e: &Entry, key: &str) -> Result<T, Error> {
    e.value
        .parse()
        .map_err(|_| err(e.line, e.column, format!("{key} must be a nonnegative integer")))
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<SpecFile, Error> {
        Self::parse_with(text, None)
    }

    /// `field_ext` replaces the extension degree given in the file.
    pub fn parse_with(text: &str, field_ext: Option<u32>) -> Result<SpecFile, Error> {
        let mut single: Vec<(&str, Entry)> = Vec::new();
        let mut ideals: Vec<(String, Entry)> = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let Some(eq) = body.find('=') else {
                return Err(err(line, 1, "expected `key = value`"));
            };
            let lhs = body[..eq].trim();
            let rest = &body[eq + 1..];
            let value = rest.trim();
            let column = eq + 2 + (rest.len() - rest.trim_start().len());
            let entry = Entry {
                line,
                column,
                value,
            };
            let mut words = lhs.split_whitespace();
            let key = words.next().unwrap_or("");
            if key == "ideal" {
                let (Some(name), None) = (words.next(), words.next()) else {
                    return Err(err(line, 1, "expected `ideal <Name> = <generators>`"));
                };
                if !core_ideals::parse::is_identifier(name) {
                    return Err(err(line, 1, format!("invalid ideal name {name:?}")));
                }
                if ideals.iter().any(|(n, _)| n == name) {
                    return Err(err(line, 1, format!("duplicate ideal {name:?}")));
                }
                ideals.push((name.to_string(), entry));
                continue;
            }
            if words.next().is_some() || !KEYS.contains(&key) {
                return Err(err(line, 1, format!("unknown key {lhs:?}")));
            }
            if single.iter().any(|(k, _)| *k == key) {
                return Err(err(line, 1, format!("duplicate key {key:?}")));
            }
            single.push((key, entry));
        }
        let get = |key: &str| single.iter().find(|(k, _)| *k == key).map(|(_, e)| e);

        let Some(char_entry) = get("char") else {
            return Err(err(1, 1, "missing key \"char\""));
        };
        let p: u64 = number(char_entry, "char")?;
        if !is_prime(p) {
            return Err(err(char_entry.line, char_entry.column, format!("{p} is not prime")));
        }
        let e = match (field_ext, get("ext_degree")) {
            (Some(e), _) => e,
            (None, Some(entry)) => number(entry, "ext_degree")?,
            (None, None) => default_extension_degree(p),
        };
        let modulus = match get("modulus") {
            Some(entry) => Some(parse_modulus(p, entry)?),
            None => None,
        };
        let field = FieldSpec::with_modulus(p, e, modulus).map_err(|x| match get("modulus") {
            Some(entry) => relocate(x, entry),
            None => err(char_entry.line, char_entry.column, x.to_string()),
        })?;
        let field = Arc::new(field);

        let Some(vars_entry) = get("vars") else {
            return Err(err(1, 1, "missing key \"vars\""));
        };
        let vars: Vec<String> = vars_entry
            .value
            .split(',')
            .map(|v| v.trim().to_string())
            .collect();
        let mut seen = HashSet::new();
        for v in &vars {
            if !seen.insert(v) {
                return Err(err(vars_entry.line, vars_entry.column, format!("duplicate variable {v:?}")));
            }
        }
        let poly = PolyRing::new(field.clone(), vars.len(), TermOrder::Grevlex)
            .map_err(|x| relocate(x, vars_entry))?;
        let quotient = match get("quotient") {
            Some(entry) => core_ideals::parse::parse_polynomial_list(&poly, &vars, entry.value)
                .map_err(|x| relocate(x, entry))?,
            None => Vec::new(),
        };
        let ring = RingSpec::new(field, vars, quotient).map_err(|x| match get("quotient") {
            Some(entry) if matches!(x, Error::InvalidRing(ref m) if m.contains("unit")) => {
                relocate(x, entry)
            }
            _ => relocate(x, vars_entry),
        })?;

        if ideals.is_empty() {
            return Err(err(1, 1, "no ideal given"));
        }
        let mut named = Vec::new();
        for (name, entry) in &ideals {
            let gens = ring.parse_polys(entry.value).map_err(|x| relocate(x, entry))?;
            if gens.is_empty() {
                return Err(err(entry.line, entry.column, format!("ideal {name} has no generators")));
            }
            let ideal = Ideal::new(ring.clone(), gens).map_err(|x| relocate(x, entry))?;
            named.push((name.clone(), ideal));
        }

        let opt = |key: &str| -> Result<Option<usize>, Error> {
            get(key).map(|e| number(e, key)).transpose()
        };
        let options = Options {
            seed: get("seed").map(|e| number(e, "seed")).transpose()?,
            repeats: opt("repeats")?,
            n: opt("n")?,
            n_max: opt("n_max")?,
            t_max: opt("t_max")?,
            window: opt("window")?,
        };
        Ok(SpecFile {
            ring,
            ideals: named,
            options,
        })
    }

    pub fn ideal(&self, name: &str) -> Option<&Ideal> {
        self.ideals.iter().find(|(n, _)| n == name).map(|(_, i)| i)
    }

    /// Canonical text form; parsing it gives back an equal spec.
    pub fn to_text(&self) -> String {
        let ring = &self.ring;
        let field = ring.field();
        let mut out = String::new();
        let _ = writeln!(out, "char = {}", field.characteristic());
        let _ = writeln!(out, "ext_degree = {}", field.degree());
        if field.degree() > 1 {
            let _ = writeln!(out, "modulus = {}", field.modulus_string());
        }
        let _ = writeln!(out, "vars = {}", ring.vars().join(", "));
        let q: Vec<String> = ring.quotient().iter().map(|f| ring.format(f)).collect();
        let _ = writeln!(out, "quotient = {}", q.join(", "));
        for (name, ideal) in &self.ideals {
            let mut gens: Vec<String> = ideal.gens().iter().map(|f| ring.format(f)).collect();
            if gens.is_empty() {
                gens.push("0".into());
            }
            let _ = writeln!(out, "ideal {name} = {}", gens.join(", "));
        }
        let o = &self.options;
        let lines = [
            ("seed", o.seed.map(|v| v.to_string())),
            ("repeats", o.repeats.map(|v| v.to_string())),
            ("n", o.n.map(|v| v.to_string())),
            ("n_max", o.n_max.map(|v| v.to_string())),
            ("t_max", o.t_max.map(|v| v.to_string())),
            ("window", o.window.map(|v| v.to_string())),
        ];
        for (k, v) in lines {
            if let Some(v) = v {
                let _ = writeln!(out, "{k} = {v}");
            }
        }
        out
    }
}

/// A monic polynomial in `a` over GF(p), e.g. `a^16+a^5+a^3+a^2+1`.
fn parse_modulus(p: u64, entry: &Entry) -> Result<Vec<u64>, Error> {
    let base = Arc::new(FieldSpec::prime(p).map_err(|x| relocate(x, entry))?);
    let ring = PolyRing::new(base.clone(), 1, TermOrder::Grevlex).map_err(|x| relocate(x, entry))?;
    let f: Polynomial = parse_polynomial(&ring, &[FIELD_GENERATOR.to_string()], entry.value)
        .map_err(|x| relocate(x, entry))?;
    let deg = f.total_degree() as usize;
    let mut coeffs = vec![0u64; deg + 1];
    for t in f.terms() {
        coeffs[t.mono.degree() as usize] = t.coeff.encoding();
    }
    Ok(coeffs)
}
