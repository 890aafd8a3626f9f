//! Path finding in the rotation graph of Markoff triples over a prime field.
//!
//! The solutions of `X² + Y² + Z² = 3XYZ` in `F_q` (minus the origin) form a
//! graph whose edges are the three rotations `ρ₁, ρ₂, ρ₃`. Each rotation fixes
//! one coordinate and moves the other two by a determinant-one linear map, so
//! walking along a fiber is multiplication in `F_q^*` in disguise. Given the
//! factorization of `q − 1`, an explicit word in the rotations joining two
//! points can therefore be computed with three discrete logarithms plus a few
//! short random walks — far below the generic cost one would want from an
//! expander-graph hash built on this family.
//!
//! The crate is organized bottom-up:
//!
//! - [`ff`] — prime-field arithmetic (`F_q`, square roots, quadratics)
//! - [`nt`] — factorization, primitive-root tests, Pohlig–Hellman DLP
//! - [`surface`] — Markoff points, rotations, involutions, fiber matrices
//! - [`classify`] — hyperbolic/parabolic/elliptic trichotomy and maximal
//!   hyperbolicity
//! - [`fiber_dlp`] — the rotation exponent linking two points of a fiber
//! - [`pathfinder`] — end-to-end path and loop construction with verifiable
//!   certificates
//! - [`experiments`] — the randomness-hypothesis measurement harness

pub mod classify;
pub mod experiments;
pub mod ff;
pub mod fiber_dlp;
pub mod nt;
pub mod pathfinder;
pub mod surface;

pub use classify::SpectralClass;
pub use experiments::{CensusResult, ExperimentResult, FiberCensusRow};
pub use ff::PrimeField;
pub use nt::{Factorization, PartialFactorization};
pub use pathfinder::{PathCertificate, PathOptions, PathWord, Step, Waypoints};
pub use surface::{Axis, MarkoffPoint};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is below the minimum supported characteristic 5")]
    ModulusTooSmall(u64),
    #[error("modulus {0} does not fit the 63-bit arithmetic backend")]
    ModulusTooLarge(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("({x},{y},{z}) is not a nonzero point of the surface mod {q}")]
    NotOnSurface { q: u64, x: u64, y: u64, z: u64 },
    #[error("{0} has no discrete logarithm to the requested base")]
    NoDiscreteLog(u64),
    #[error("points disagree in coordinate {axis}: {a} vs {b}")]
    NotSameFiber { axis: Axis, a: u64, b: u64 },
    #[error("fiber coordinate {0} is not maximally hyperbolic")]
    NotMaxHyperbolic(u64),
    #[error("refusing exhaustive enumeration: q={q} exceeds the limit {limit}")]
    TooLargeForEnumeration { q: u64, limit: u64 },
    #[error("random walk found no maximally hyperbolic coordinate in {0} steps")]
    WalkTimeout(u64),
    #[error("no admissible connecting fiber among {0} proposals")]
    FiberTimeout(u64),
    #[error("search gave up after {0} restarts")]
    SearchExhausted(u32),
    #[error("cannot parse point {0:?}: expected \"x,y,z\"")]
    BadPointFormat(String),
    #[error("invalid certificate: {0}")]
    BadCertificate(String),
}
