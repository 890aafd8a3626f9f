//! Spectral classification of fiber coordinates.
//!
//! For `t ∈ F_q` the matrix `L_t` has characteristic polynomial
//! `T² − 3tT + 1` with discriminant `9t² − 4`, so `t` is hyperbolic,
//! parabolic, or elliptic according to whether the discriminant is a nonzero
//! square, zero, or a non-square. A hyperbolic `t` is *maximally hyperbolic*
//! when its eigenvalue `λ_t` generates `F_q^*`; those are the fibers on which
//! one rotation acts transitively, and there are exactly `φ(q−1)/2` of them.

use crate::ff::PrimeField;
use crate::nt::{self, Factorization};
use crate::{Error, Result};

/// Guard for the exhaustive maximal-hyperbolicity count.
pub const COUNT_LIMIT: u64 = 1_000_000;

/// Classification of `t`, with the eigenvalue and its multiplicative order
/// in the hyperbolic case.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpectralClass {
    Hyperbolic { lambda: u64, order: u64 },
    Parabolic,
    Elliptic,
}

impl SpectralClass {
    pub fn kind(&self) -> &'static str {
        match self {
            SpectralClass::Hyperbolic { .. } => "hyperbolic",
            SpectralClass::Parabolic => "parabolic",
            SpectralClass::Elliptic => "elliptic",
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, SpectralClass::Hyperbolic { .. })
    }

    pub fn lambda(&self) -> Option<u64> {
        match self {
            SpectralClass::Hyperbolic { lambda, .. } => Some(*lambda),
            _ => None,
        }
    }

    pub fn order(&self) -> Option<u64> {
        match self {
            SpectralClass::Hyperbolic { order, .. } => Some(*order),
            _ => None,
        }
    }
}

/// `9t² − 4`, the discriminant of `T² − 3tT + 1`.
#[inline]
pub fn discriminant(k: &PrimeField, t: u64) -> u64 {
    k.sub(k.mul(k.reduce(9), k.mul(t, t)), k.reduce(4))
}

/// The eigenvalue `(3t + √(9t²−4))/2` under the canonical square root, or
/// `None` when `t` is not hyperbolic. Its inverse is the conjugate root
/// `3t − λ`.
pub fn eigenvalue(k: &PrimeField, t: u64) -> Option<u64> {
    let d = discriminant(k, t);
    if d == 0 {
        return None;
    }
    let r = k.sqrt(d)?;
    Some(k.mul(k.add(k.mul(3, t), r), k.half()))
}

/// Full classification; computes the eigenvalue order for hyperbolic `t`.
pub fn classify(k: &PrimeField, t: u64, f: &Factorization) -> SpectralClass {
    let d = discriminant(k, t);
    if d == 0 {
        return SpectralClass::Parabolic;
    }
    match k.sqrt(d) {
        None => SpectralClass::Elliptic,
        Some(r) => {
            let lambda = k.mul(k.add(k.mul(3, t), r), k.half());
            let order = nt::multiplicative_order(k, lambda, f);
            SpectralClass::Hyperbolic { lambda, order }
        }
    }
}

/// Whether `t` is hyperbolic with a primitive-root eigenvalue. The answer
/// does not depend on the square-root tie-break: `λ` generates `F_q^*` iff
/// `λ⁻¹` does.
pub fn is_max_hyperbolic(k: &PrimeField, t: u64, f: &Factorization) -> bool {
    match eigenvalue(k, t) {
        None => false,
        Some(lambda) => nt::is_primitive_root(k, lambda, f),
    }
}

/// Exhaustive count of maximally hyperbolic `t ∈ F_q`; equals `φ(q−1)/2`.
/// (The image of `λ ↦ (λ + λ⁻¹)/3` meets `t = 0` only at `q = 5`, which is
/// why the scan includes zero.)
pub fn count_max_hyperbolic(k: &PrimeField, f: &Factorization) -> Result<u64> {
    let q = k.q();
    if q > COUNT_LIMIT {
        return Err(Error::TooLargeForEnumeration {
            q,
            limit: COUNT_LIMIT,
        });
    }
    Ok((0..q).filter(|&t| is_max_hyperbolic(k, t, f)).count() as u64)
}
