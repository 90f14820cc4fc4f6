//! Exact arithmetic in GF(p^e).
//!
//! Elements are stored as the integer whose base-p digits are the
//! coordinates with respect to the power basis 1, a, a^2, ... of the
//! defining modulus. Fields of at most 2^18 elements get exp/log tables.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// Fields smaller than this are flagged as unreliable for genericity checks.
pub const SMALL_FIELD_THRESHOLD: u64 = 1 << 10;

/// Default extension degrees are chosen so that p^e reaches this size.
pub const DEFAULT_FIELD_FLOOR: u64 = 1 << 16;

const TABLE_LIMIT: u64 = 1 << 18;

/// Low-weight irreducible moduli, `(p, e, [(exponent, coefficient)])`,
/// leading term t^e implied. For GF(2^16) the modulus is
/// t^16 + t^5 + t^3 + t^2 + 1.
type Modulus = (u64, u32, &'static [(u32, u64)]);

#[rustfmt::skip]
pub(crate) const IRREDUCIBLE_TABLE: &[Modulus] = &[
    (2, 1, &[]),
    (2, 2, &[(0, 1), (1, 1)]),
    (2, 3, &[(0, 1), (1, 1)]),
    (2, 4, &[(0, 1), (1, 1)]),
    (2, 5, &[(0, 1), (2, 1)]),
    (2, 6, &[(0, 1), (1, 1)]),
    (2, 7, &[(0, 1), (1, 1)]),
    (2, 8, &[(0, 1), (1, 1), (2, 1), (7, 1)]),
    (2, 9, &[(0, 1), (1, 1)]),
    (2, 10, &[(0, 1), (3, 1)]),
    (2, 11, &[(0, 1), (2, 1)]),
    (2, 12, &[(0, 1), (3, 1)]),
    (2, 13, &[(0, 1), (1, 1), (2, 1), (5, 1)]),
    (2, 14, &[(0, 1), (5, 1)]),
    (2, 15, &[(0, 1), (1, 1)]),
    (2, 16, &[(0, 1), (2, 1), (3, 1), (5, 1)]),
    (2, 17, &[(0, 1), (3, 1)]),
    (2, 18, &[(0, 1), (3, 1)]),
    (2, 19, &[(0, 1), (1, 1), (2, 1), (5, 1)]),
    (2, 20, &[(0, 1), (3, 1)]),
    (2, 21, &[(0, 1), (2, 1)]),
    (2, 22, &[(0, 1), (1, 1)]),
    (2, 23, &[(0, 1), (5, 1)]),
    (2, 24, &[(0, 1), (1, 1), (2, 1), (7, 1)]),
    (2, 25, &[(0, 1), (3, 1)]),
    (2, 26, &[(0, 1), (1, 1), (2, 1), (6, 1)]),
    (2, 27, &[(0, 1), (1, 1), (2, 1), (5, 1)]),
    (2, 28, &[(0, 1), (1, 1)]),
    (2, 29, &[(0, 1), (2, 1)]),
    (2, 30, &[(0, 1), (1, 1)]),
    (2, 31, &[(0, 1), (3, 1)]),
    (2, 32, &[(0, 1), (1, 1), (2, 1), (22, 1)]),
    (3, 1, &[]),
    (3, 2, &[(0, 1)]),
    (3, 3, &[(0, 1), (1, 2)]),
    (3, 4, &[(0, 2), (1, 1)]),
    (3, 5, &[(0, 1), (1, 2)]),
    (3, 6, &[(0, 2), (1, 1)]),
    (3, 7, &[(0, 1), (2, 2)]),
    (3, 8, &[(0, 2), (2, 1)]),
    (3, 9, &[(0, 1), (4, 2)]),
    (3, 10, &[(0, 1), (2, 2)]),
    (3, 11, &[(0, 1), (2, 2)]),
    (3, 12, &[(0, 2), (2, 1)]),
    (3, 13, &[(0, 1), (1, 2)]),
    (3, 14, &[(0, 2), (1, 1)]),
    (3, 15, &[(0, 1), (2, 2)]),
    (3, 16, &[(0, 2), (4, 1)]),
    (3, 17, &[(0, 1), (1, 2)]),
    (3, 18, &[(0, 2), (7, 1)]),
    (3, 19, &[(0, 1), (2, 2)]),
    (3, 20, &[(0, 2), (5, 1)]),
    (3, 21, &[(0, 1), (5, 2)]),
    (3, 22, &[(0, 1), (4, 2)]),
    (3, 23, &[(0, 1), (3, 2)]),
    (3, 24, &[(0, 2), (4, 1)]),
    (3, 25, &[(0, 1), (3, 2)]),
    (3, 26, &[(0, 1), (2, 2)]),
    (3, 27, &[(0, 1), (7, 2)]),
    (3, 28, &[(0, 2), (2, 1)]),
    (3, 29, &[(0, 1), (4, 2)]),
    (3, 30, &[(0, 2), (1, 1)]),
    (3, 31, &[(0, 1), (5, 2)]),
    (3, 32, &[(0, 2), (5, 1)]),
    (5, 1, &[]),
    (5, 2, &[(0, 2)]),
    (5, 3, &[(0, 1), (1, 1)]),
    (5, 4, &[(0, 2)]),
    (5, 5, &[(0, 1), (1, 4)]),
    (5, 6, &[(0, 2), (1, 1)]),
    (5, 7, &[(0, 1), (1, 1)]),
    (5, 8, &[(0, 2)]),
    (5, 9, &[(0, 1), (4, 4)]),
    (5, 10, &[(0, 2), (2, 4)]),
    (5, 11, &[(0, 1), (1, 2)]),
    (5, 12, &[(0, 4), (1, 1)]),
    (5, 13, &[(0, 1), (6, 1)]),
    (5, 14, &[(0, 2), (2, 3)]),
    (5, 15, &[(0, 1), (2, 2)]),
    (5, 16, &[(0, 2)]),
    (5, 17, &[(0, 1), (3, 1)]),
    (5, 18, &[(0, 1), (1, 1)]),
    (5, 19, &[(0, 1), (9, 1)]),
    (5, 20, &[(0, 2), (4, 4)]),
    (5, 21, &[(0, 1), (1, 4)]),
    (5, 22, &[(0, 1), (1, 1)]),
    (5, 23, &[(0, 1), (2, 1)]),
    (5, 24, &[(0, 2), (4, 1)]),
    (5, 25, &[(0, 1), (7, 2)]),
    (5, 26, &[(0, 2), (12, 3)]),
    (5, 27, &[(0, 1), (1, 1)]),
    (5, 28, &[(0, 2), (4, 3)]),
    (5, 29, &[(0, 1), (6, 1)]),
    (5, 30, &[(0, 2), (4, 1)]),
    (5, 31, &[(0, 1), (1, 1)]),
    (5, 32, &[(0, 2)]),
    (7, 1, &[]),
    (7, 2, &[(0, 1)]),
    (7, 3, &[(0, 2)]),
    (7, 4, &[(0, 1), (1, 1)]),
    (7, 5, &[(0, 1), (1, 3)]),
    (7, 6, &[(0, 2)]),
    (7, 7, &[(0, 1), (1, 6)]),
    (7, 8, &[(0, 3), (1, 1)]),
    (7, 9, &[(0, 2)]),
    (7, 10, &[(0, 3), (1, 2)]),
    (7, 11, &[(0, 1), (1, 4)]),
    (7, 12, &[(0, 2), (3, 1)]),
    (7, 13, &[(0, 1), (2, 3)]),
    (7, 14, &[(0, 1), (1, 3)]),
    (7, 15, &[(0, 2), (3, 2)]),
    (7, 16, &[(0, 3), (1, 2)]),
    (7, 17, &[(0, 1), (1, 4)]),
    (7, 18, &[(0, 2)]),
    (7, 19, &[(0, 1), (2, 6)]),
    (7, 20, &[(0, 3), (2, 2)]),
    (7, 21, &[(0, 2), (3, 6)]),
    (7, 22, &[(0, 1), (2, 4)]),
    (7, 23, &[(0, 1), (4, 3)]),
    (7, 24, &[(0, 3), (3, 1)]),
    (7, 25, &[(0, 1), (4, 1)]),
    (7, 26, &[(0, 1), (4, 3)]),
    (7, 27, &[(0, 2)]),
    (7, 28, &[(0, 3), (10, 2)]),
    (7, 29, &[(0, 1), (1, 3)]),
    (7, 30, &[(0, 3), (3, 2)]),
    (7, 31, &[(0, 1), (2, 6)]),
    (7, 32, &[(0, 1), (1, 3)]),
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// The integer encoding of the coordinate vector (digit i is the
    /// coefficient of a^i).
    pub fn encoding(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn is_one(self) -> bool {
        self.0 == 1
    }
}

#[derive(Clone)]
struct Tables {
    /// exp[i] = g^i for i in [0, 2(q-1)).
    exp: Vec<u32>,
    /// log[x] for x != 0.
    log: Vec<u32>,
    /// zech[k] = log(1 + g^k), u32::MAX where 1 + g^k = 0. Only for odd p
    /// and e > 1.
    zech: Vec<u32>,
}

/// The coefficient field GF(p^e) together with its defining modulus.
#[derive(Clone)]
pub struct FieldSpec {
    p: u64,
    e: u32,
    modulus: Vec<u64>,
    size: u64,
    tables: Option<Tables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {}", self.p, self.e, self.modulus_string())
    }
}

impl FieldSpec {
    /// GF(p^e) with the built-in modulus for `(p, e)`, or the first monic
    /// irreducible found by a deterministic search when `p` is not tabled.
    pub fn new(p: u64, e: u32) -> Result<Self> {
        Self::with_modulus(p, e, None)
    }

    /// The prime field GF(p).
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    /// GF(p^e) with an explicit modulus (coefficients low to high, monic of
    /// degree e) or the default one.
    pub fn with_modulus(p: u64, e: u32, modulus: Option<Vec<u64>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p >= 1 << 31 {
            return Err(Error::InvalidField(format!("characteristic {p} too large")));
        }
        if e == 0 {
            return Err(Error::InvalidField("extension degree must be at least 1".into()));
        }
        let size = checked_pow(p, e)
            .filter(|&q| q < 1 << 62)
            .ok_or_else(|| Error::InvalidField(format!("GF({p}^{e}) is too large")))?;
        let modulus = match modulus {
            Some(m) => {
                let mut m: Vec<u64> = m.into_iter().map(|c| c % p).collect();
                trim(&mut m);
                if m.len() != e as usize + 1 || m[e as usize] != 1 {
                    return Err(Error::InvalidField(format!(
                        "modulus must be monic of degree {e}"
                    )));
                }
                if !is_irreducible(&m, p) {
                    return Err(Error::InvalidField("modulus is not irreducible".into()));
                }
                m
            }
            None => default_modulus(p, e),
        };
        let mut field = FieldSpec {
            p,
            e,
            modulus,
            size,
            tables: None,
        };
        if size <= TABLE_LIMIT && size > 2 {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    /// GF(p^e) with e the smallest degree for which p^e >= 2^16.
    pub fn with_default_degree(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Self::new(p, default_extension_degree(p))
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// p^e.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// Coefficients of the modulus, low to high.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn is_small(&self) -> bool {
        self.size < SMALL_FIELD_THRESHOLD
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// The class of `a` (the root of the modulus). In a prime field this is
    /// the residue of the modulus' root, i.e. minus its constant term.
    pub fn generator(&self) -> FieldElement {
        if self.e == 1 {
            FieldElement((self.p - self.modulus[0]) % self.p)
        } else {
            FieldElement(self.p)
        }
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u64)
    }

    /// Builds an element from coordinates w.r.t. the power basis.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElement {
        let mut acc = self.zero();
        let mut power = self.one();
        let gen = self.generator();
        for &c in coeffs {
            acc = self.add(acc, self.mul(self.from_int((c % self.p) as i64), power));
            power = self.mul(power, gen);
        }
        acc
    }

    /// Coordinates w.r.t. the power basis, `e` entries.
    pub fn coeffs(&self, x: FieldElement) -> Vec<u64> {
        let mut v = x.0;
        (0..self.e)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    /// Whether the encoding denotes an element (no digit overflow).
    pub fn contains(&self, x: FieldElement) -> bool {
        x.0 < self.size
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if self.e == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= self.p { s - self.p } else { s });
        }
        match &self.tables {
            Some(t) if !t.zech.is_empty() => {
                if a.0 == 0 {
                    return b;
                }
                if b.0 == 0 {
                    return a;
                }
                let order = (self.size - 1) as u32;
                let (la, lb) = (t.log[a.0 as usize], t.log[b.0 as usize]);
                let k = if lb >= la { lb - la } else { lb + order - la };
                match t.zech[k as usize] {
                    u32::MAX => FieldElement::ZERO,
                    z => FieldElement(t.exp[(la + z) as usize] as u64),
                }
            }
            _ => self.add_digits(a, b),
        }
    }

    fn add_digits(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        while x != 0 || y != 0 {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 {
            return a;
        }
        if self.e == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        if let Some(t) = &self.tables {
            if a.0 == 0 {
                return a;
            }
            let half = ((self.size - 1) / 2) as u32;
            return FieldElement(t.exp[(t.log[a.0 as usize] + half) as usize] as u64);
        }
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        while x != 0 {
            let d = x % self.p;
            out += ((self.p - d) % self.p) * place;
            place *= self.p;
            x /= self.p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    /// x[i] -= c * y[i] over the common length.
    pub fn sub_scaled(&self, x: &mut [FieldElement], c: FieldElement, y: &[FieldElement]) {
        if c.is_zero() {
            return;
        }
        match &self.tables {
            Some(t) if self.p == 2 && y.len() >= 256 => {
                // multiplication by c is GF(2)-linear: one table per byte of y
                let lc = t.log[c.0 as usize] as usize;
                let chunks = (self.e as usize).div_ceil(8);
                let mut table = vec![0u64; chunks * 256];
                for (k, part) in table.chunks_mut(256).enumerate() {
                    for bit in 0..8 {
                        let b = 1usize << bit;
                        let v = (1u64 << (8 * k + bit)) as usize;
                        let cb = if v < t.log.len() { t.exp[lc + t.log[v] as usize] as u64 } else { 0 };
                        for i in 0..b {
                            part[b | i] = part[i] ^ cb;
                        }
                    }
                }
                for (x, y) in x.iter_mut().zip(y) {
                    let mut m = 0;
                    let mut v = y.0 as usize;
                    let mut k = 0;
                    while v != 0 {
                        m ^= table[k * 256 + (v & 0xff)];
                        v >>= 8;
                        k += 1;
                    }
                    x.0 ^= m;
                }
            }
            Some(t) if self.p == 2 => {
                let lc = t.log[c.0 as usize] as usize;
                for (x, y) in x.iter_mut().zip(y) {
                    if y.0 != 0 {
                        x.0 ^= t.exp[lc + t.log[y.0 as usize] as usize] as u64;
                    }
                }
            }
            Some(t) if self.e == 1 => {
                let lc = t.log[c.0 as usize] as usize;
                for (x, y) in x.iter_mut().zip(y) {
                    if y.0 != 0 {
                        let m = t.exp[lc + t.log[y.0 as usize] as usize] as u64;
                        x.0 = if x.0 >= m { x.0 - m } else { x.0 + self.p - m };
                    }
                }
            }
            _ => {
                let nc = self.neg(c);
                for (x, y) in x.iter_mut().zip(y) {
                    if y.0 != 0 {
                        *x = self.add(*x, self.mul(nc, *y));
                    }
                }
            }
        }
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        if let Some(t) = &self.tables {
            let i = t.log[a.0 as usize] + t.log[b.0 as usize];
            return FieldElement(t.exp[i as usize] as u64);
        }
        self.mul_slow(a, b)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::ZeroDivisor);
        }
        if let Some(t) = &self.tables {
            let q1 = (self.size - 1) as u32;
            let l = t.log[a.0 as usize];
            return Ok(FieldElement(t.exp[((q1 - l) % q1) as usize] as u64));
        }
        Ok(self.pow(a, self.size - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut k: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// A uniformly random element.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(0..self.size))
    }

    /// Canonical text form: an integer for prime fields, otherwise a
    /// polynomial in the generator symbol `a` such as `a^3+a+1`.
    pub fn format(&self, x: FieldElement) -> String {
        if self.e == 1 {
            return x.0.to_string();
        }
        let coeffs = self.coeffs(x);
        let mut parts = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            parts.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                (_, false) => format!("{c}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    /// Whether `x` lies in the prime subfield.
    pub fn is_prime_subfield(&self, x: FieldElement) -> bool {
        x.0 < self.p
    }

    pub fn modulus_string(&self) -> String {
        let mut parts = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            parts.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                (_, false) => format!("{c}*{mono}"),
            });
        }
        parts.join(" + ")
    }

    fn mul_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.p;
        let e = self.e as usize;
        if e == 1 {
            return FieldElement(((a.0 as u128 * b.0 as u128) % p as u128) as u64);
        }
        if p == 2 {
            let mut prod: u128 = 0;
            let (x, mut y) = (a.0 as u128, b.0);
            let mut shift = 0;
            while y != 0 {
                if y & 1 == 1 {
                    prod ^= x << shift;
                }
                y >>= 1;
                shift += 1;
            }
            let m: u128 = self
                .modulus
                .iter()
                .enumerate()
                .fold(0, |acc, (i, &c)| acc | ((c as u128) << i));
            for i in (e..2 * e).rev() {
                if (prod >> i) & 1 == 1 {
                    prod ^= m << (i - e);
                }
            }
            return FieldElement(prod as u64);
        }
        let da = self.coeffs(a);
        let db = self.coeffs(b);
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for i in (e..2 * e - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for (k, &m) in self.modulus.iter().enumerate().take(e) {
                prod[i - e + k] = (prod[i - e + k] + (p - c) * m) % p;
            }
            prod[i] = 0;
        }
        let mut out = 0;
        for &d in prod[..e].iter().rev() {
            out = out * p + d;
        }
        FieldElement(out)
    }

    fn build_tables(&self) -> Tables {
        let q = self.size;
        let order = q - 1;
        let factors = prime_factors(order);
        let gen = (2..q)
            .map(FieldElement)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| self.pow_slow(g, order / r) != self.one())
            })
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = self.one();
        for i in 0..order as usize {
            exp[i] = x.0 as u32;
            exp[i + order as usize] = x.0 as u32;
            log[x.0 as usize] = i as u32;
            x = self.mul_slow(x, gen);
        }
        let mut zech = Vec::new();
        if self.p != 2 && self.e > 1 {
            zech = (0..order as usize)
                .map(|k| match self.add_digits(self.one(), FieldElement(exp[k] as u64)) {
                    FieldElement(0) => u32::MAX,
                    v => log[v.0 as usize],
                })
                .collect();
        }
        Tables { exp, log, zech }
    }

    fn pow_slow(&self, a: FieldElement, mut k: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            k >>= 1;
        }
        acc
    }
}

/// Smallest e with p^e >= 2^16.
pub fn default_extension_degree(p: u64) -> u32 {
    let mut e = 1;
    let mut q = p;
    while q < DEFAULT_FIELD_FLOOR {
        q = q.saturating_mul(p);
        e += 1;
    }
    e
}

/// C(n, k) mod p by Lucas' theorem.
pub fn binomial_mod_p(n: u64, k: u64, p: u64) -> Result<u64> {
    if k > n {
        return Err(Error::InvalidBinomial { n, k });
    }
    let (mut n, mut k) = (n, k);
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return Ok(0);
        }
        acc = mulmod(acc, small_binomial_mod(ni, ki, p), p);
        n /= p;
        k /= p;
    }
    Ok(acc % p)
}

/// C(n, k) mod p for n < p.
fn small_binomial_mod(n: u64, k: u64, p: u64) -> u64 {
    let k = k.min(n - k);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = mulmod(num, (n - i) % p, p);
        den = mulmod(den, (i + 1) % p, p);
    }
    mulmod(num, powmod(den, p - 2, p), p)
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while k > 0 {
        if k & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        k >>= 1;
    }
    acc
}

fn checked_pow(p: u64, e: u32) -> Option<u64> {
    (0..e).try_fold(1u64, |acc, _| acc.checked_mul(p))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn default_modulus(p: u64, e: u32) -> Vec<u64> {
    if let Some((_, _, terms)) = IRREDUCIBLE_TABLE
        .iter()
        .find(|(tp, te, _)| *tp == p && *te == e)
    {
        let mut m = vec![0; e as usize + 1];
        m[e as usize] = 1;
        for &(i, c) in terms.iter() {
            m[i as usize] = c;
        }
        return m;
    }
    search_modulus(p, e)
}

/// First monic irreducible of degree e in increasing order of the encoding
/// of its lower coefficients.
fn search_modulus(p: u64, e: u32) -> Vec<u64> {
    let mut lower = vec![0u64; e as usize];
    loop {
        let mut m = lower.clone();
        m.push(1);
        if m[0] != 0 && is_irreducible(&m, p) {
            return m;
        }
        for d in lower.iter_mut() {
            *d += 1;
            if *d < p {
                break;
            }
            *d = 0;
        }
    }
}

// ---- GF(p)[t] helpers for the irreducibility test ----

fn trim(f: &mut Vec<u64>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let inv_lead = powmod(m[dm], p - 2, p);
    while r.len() > dm {
        let c = mulmod(*r.last().unwrap(), inv_lead, p);
        let shift = r.len() - 1 - dm;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mulmod(c, mi, p)) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mulmod(x, y, p)) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_powmod(base: &[u64], mut k: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while k > 0 {
        if k & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        k >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// x^(p^k) mod m.
fn frobenius_power(k: u32, m: &[u64], p: u64) -> Vec<u64> {
    let mut x = vec![0, 1];
    for _ in 0..k {
        x = poly_powmod(&x, p, m, p);
    }
    x
}

/// Irreducibility of a monic polynomial over GF(p): a root search for
/// degree <= 3, Rabin's test otherwise.
pub(crate) fn is_irreducible(m: &[u64], p: u64) -> bool {
    let e = m.len() - 1;
    if e == 0 {
        return false;
    }
    if e == 1 {
        return true;
    }
    if e <= 3 {
        return (0..p).all(|x| {
            let v = m.iter().rev().fold(0u64, |acc, &c| (mulmod(acc, x, p) + c) % p);
            v != 0
        });
    }
    let sub = |mut f: Vec<u64>| {
        f.resize(f.len().max(2), 0);
        f[1] = (f[1] + p - 1) % p;
        trim(&mut f);
        f
    };
    if !sub(frobenius_power(e as u32, m, p)).is_empty() {
        return false;
    }
    prime_factors(e as u64).into_iter().all(|q| {
        let h = sub(frobenius_power((e as u64 / q) as u32, m, p));
        poly_gcd(&h, m, p).len() == 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gf2_one_plus_one() {
        let f = FieldSpec::prime(2).unwrap();
        assert_eq!(f.add(f.one(), f.one()), f.zero());
    }

    #[test]
    fn gf16_t_times_t_cubed() {
        // t^4 = t + 1 modulo t^4 + t + 1.
        let f = FieldSpec::with_modulus(2, 4, Some(vec![1, 1, 0, 0, 1])).unwrap();
        let t = f.generator();
        let t3 = f.from_coeffs(&[0, 0, 0, 1]);
        assert_eq!(f.mul(t, t3), f.from_coeffs(&[1, 1]));
    }

    #[test]
    fn gf3_self_division() {
        let f = FieldSpec::prime(3).unwrap();
        let two = f.from_int(2);
        assert_eq!(f.div(two, two).unwrap(), f.one());
        assert_eq!(f.div(two, f.zero()), Err(Error::ZeroDivisor));
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial_mod_p(4, 2, 2).unwrap(), 0);
        assert_eq!(binomial_mod_p(7, 0, 5).unwrap(), 1);
        assert_eq!(binomial_mod_p(5, 2, 3).unwrap(), 1);
        assert!(binomial_mod_p(2, 3, 3).is_err());
    }

    #[test]
    fn table_entries_are_irreducible() {
        for &(p, e, _) in IRREDUCIBLE_TABLE {
            let m = default_modulus(p, e);
            assert!(is_irreducible(&m, p), "GF({p}^{e}) modulus");
        }
        assert_eq!(
            default_modulus(2, 16),
            vec![1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]
        );
    }

    #[test]
    fn reducible_moduli_rejected() {
        // t^4 + 1 = (t + 1)^4 over GF(2); t^4 + t^2 + 1 = (t^2 + t + 1)^2.
        assert!(FieldSpec::with_modulus(2, 4, Some(vec![1, 0, 0, 0, 1])).is_err());
        assert!(FieldSpec::with_modulus(2, 4, Some(vec![1, 0, 1, 0, 1])).is_err());
        assert!(FieldSpec::new(4, 1).is_err());
    }

    #[test]
    fn default_degrees() {
        assert_eq!(default_extension_degree(2), 16);
        assert_eq!(default_extension_degree(3), 11);
        assert_eq!(default_extension_degree(101), 3);
        assert_eq!(default_extension_degree(65537), 1);
    }

    #[test]
    fn tabled_and_slow_paths_agree() {
        let f = FieldSpec::new(3, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let a = f.random(&mut rng);
            let b = f.random(&mut rng);
            assert_eq!(f.mul(a, b), f.mul_slow(a, b));
        }
    }

    #[test]
    fn untabled_fields_have_inverses() {
        for (p, e) in [(2, 24), (3, 13), (101, 3), (5, 9)] {
            let f = FieldSpec::new(p, e).unwrap();
            assert!(f.tables.is_none());
            let mut rng = ChaCha8Rng::seed_from_u64(p + e as u64);
            for _ in 0..200 {
                let a = f.random(&mut rng);
                if a.is_zero() {
                    continue;
                }
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
        }
    }

    #[test]
    fn formatting() {
        let f = FieldSpec::new(2, 16).unwrap();
        let x = f.from_coeffs(&[1, 1, 0, 1]);
        assert_eq!(f.format(x), "a^3+a+1");
        let g = FieldSpec::new(3, 2).unwrap();
        assert_eq!(g.format(g.from_coeffs(&[2, 2])), "2*a+2");
        assert_eq!(FieldSpec::prime(101).unwrap().format(FieldElement(57)), "57");
    }

    #[test]
    fn zech_addition_matches_digits() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, e) in [(3, 8), (3, 11), (5, 3), (7, 2)] {
            let f = FieldSpec::new(p, e).unwrap();
            for _ in 0..5000 {
                let (a, b) = (f.random(&mut rng), f.random(&mut rng));
                assert_eq!(f.add(a, b), f.add_digits(a, b));
                assert_eq!(f.add(a, f.neg(a)), f.zero());
            }
            assert_eq!(f.add(f.one(), f.neg(f.one())), f.zero());
        }
    }

    #[test]
    fn sub_scaled_matches_elementwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (p, e) in [(2, 16), (2, 20), (2, 3), (101, 1), (3, 11), (2, 1)] {
            let f = FieldSpec::new(p, e).unwrap();
            for len in [0, 5, 300] {
                let x: Vec<FieldElement> = (0..len).map(|_| f.random(&mut rng)).collect();
                let mut y: Vec<FieldElement> = (0..len).map(|_| f.random(&mut rng)).collect();
                if len > 0 {
                    y[0] = f.zero();
                }
                let c = f.random(&mut rng);
                let mut got = x.clone();
                f.sub_scaled(&mut got, c, &y);
                let want: Vec<FieldElement> = x.iter().zip(&y).map(|(&a, &b)| f.sub(a, f.mul(c, b))).collect();
                assert_eq!(got, want, "GF({p}^{e}) len {len}");
            }
        }
    }
}
