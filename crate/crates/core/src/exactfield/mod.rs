//! Exact arithmetic over GF(p^m), in sparse polynomial rings over it, and in
//! their fraction fields.

mod fraction;
mod gcd;
mod gf;
mod poly;

use thiserror::Error;

pub use fraction::{common_denominator, field_arith, ArithOp, FieldElement, Substitution};
pub use gcd::{content_in, multipoly_gcd, multipoly_lcm, primitive_part_in, pseudo_remainder};
pub use gf::{is_irreducible_by_trial_division, is_prime, lowest_irreducible, prime_power, Gf, GfElem, MAX_FIELD_ORDER};
pub use poly::{Monomial, MultiPoly, Ring};

pub(crate) use poly::same_ring;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1, got {0}")]
    BadExtensionDegree(u32),
    #[error("GF({p}^{m}) exceeds the supported field size")]
    FieldTooLarge { p: u32, m: u32 },
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("operands live in different rings")]
    MixedRings,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not a p-th power")]
    NotAPthPower,
}
