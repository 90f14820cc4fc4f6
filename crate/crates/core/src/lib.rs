//! Exact computation of reductions, reduction numbers, the ideals K_n and
//! L_n, and cores of m-primary ideals in quotients of polynomial rings over
//! finite fields.

pub mod engine;
pub mod error;
pub mod field;
mod finite;
pub mod groebner;
pub mod ideal;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod reductions;
pub mod ring;

pub use error::{Error, ErrorClass, Result};
pub use field::{FieldElement, FieldSpec};
pub use groebner::GroebnerBasis;
pub use ideal::Ideal;
pub use monomial::{Monomial, TermOrder};
pub use poly::{PolyRing, Polynomial, Term};
pub use ring::{Ring, RingExt, RingSpec};
pub use reductions::{GeneralElementConfig, ReductionDatum};
pub use engine::{CoreParams, CoreReport};
