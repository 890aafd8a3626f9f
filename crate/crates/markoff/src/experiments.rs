//! Measurement harness for the two randomness hypotheses behind the path
//! finder, plus the exact small-field censuses.
//!
//! Sampled experiments draw each trial from its own ChaCha substream
//! (`set_stream(trial)`) of the master seed, so results are reproducible
//! and independent of the parallel schedule; aggregation is exact integer
//! summation.

use rayon::prelude::*;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{self, is_max_hyperbolic, SpectralClass};
use crate::ff::PrimeField;
use crate::nt::Factorization;
use crate::surface::{self, Axis};
use crate::{Error, Result};

/// Guard for the exhaustive fiber census.
pub const FIBER_CENSUS_LIMIT: u64 = 1009;

/// Guard for the full-surface census.
pub const SURFACE_CENSUS_LIMIT: u64 = 10_000;

/// One sampled experiment: a theoretical rate against a measured one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExperimentResult {
    pub q: u64,
    pub samples: u64,
    pub seed: u64,
    pub theory: f64,
    pub measured: f64,
}

impl ExperimentResult {
    pub const CSV_HEADER: &'static str = "q,theory,measured,samples,seed";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.6},{:.6},{},{}",
            self.q, self.theory, self.measured, self.samples, self.seed
        )
    }
}

/// Mean number of random `ρ₁/ρ₃` steps from a random point until the
/// y-coordinate is maximally hyperbolic (the start point is tested first, so
/// zero-length walks count). Theory column: `2(q−1)/φ(q−1)`.
pub fn heur1_mean_walk(
    k: &PrimeField,
    f: &Factorization,
    samples: u64,
    seed: u64,
) -> ExperimentResult {
    assert!(samples >= 1);
    let total: u64 = (0..samples)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let mut p = surface::random_point(k, &mut rng);
            let mut steps = 0u64;
            while !is_max_hyperbolic(k, p.y(), f) {
                let axis = if rng.random_bool(0.5) { Axis::X } else { Axis::Z };
                p = p.rho(k, axis);
                steps += 1;
            }
            steps
        })
        .sum();
    ExperimentResult {
        q: k.q(),
        samples,
        seed,
        theory: 2.0 * f.n() as f64 / f.euler_phi() as f64,
        measured: total as f64 / samples as f64,
    }
}

/// Fraction of random `(t, a, b) ∈ (F_q^*)³` for which `t` is maximally
/// hyperbolic and both attaching quadratics `F(t, a, Z)`, `F(t, Y, b)`
/// split. Theory column: `φ(q−1)/(8(q−1))`.
pub fn heur2_rate(k: &PrimeField, f: &Factorization, samples: u64, seed: u64) -> ExperimentResult {
    assert!(samples >= 1);
    let hits: u64 = (0..samples)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let q = k.q();
            let t = rng.random_range(1..q);
            let a = rng.random_range(1..q);
            let b = rng.random_range(1..q);
            let splits = |s: u64| k.legendre(attaching_discriminant(k, t, s)) >= 0;
            (is_max_hyperbolic(k, t, f) && splits(a) && splits(b)) as u64
        })
        .sum();
    ExperimentResult {
        q: k.q(),
        samples,
        seed,
        theory: f.euler_phi() as f64 / (8.0 * f.n() as f64),
        measured: hits as f64 / samples as f64,
    }
}

/// Discriminant `9s²t² − 4(t² + s²)` of the quadratic attaching the fiber of
/// `t` to coordinate value `s`.
fn attaching_discriminant(k: &PrimeField, t: u64, s: u64) -> u64 {
    let t2 = k.mul(t, t);
    let s2 = k.mul(s, s);
    k.sub(k.mul(k.reduce(9), k.mul(s2, t2)), k.mul(k.reduce(4), k.add(t2, s2)))
}

/// The exact census of the surface: affine and closure point counts, plus
/// the count of points whose x-coordinate is maximally hyperbolic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CensusResult {
    pub q: u64,
    /// Affine solutions of the surface equation, the origin included.
    /// This is `q² + 3q + 1` for `q ≡ 1 (mod 4)` and `q² − 3q + 1` otherwise.
    pub affine_points: u64,
    /// Points of the projective closure: the affine count plus the `3q`
    /// points at infinity (the three coordinate lines of `XYZ = 0`). The
    /// census column of the reference tables follows this convention.
    pub points: u64,
    /// Affine points whose x-coordinate is maximally hyperbolic.
    pub gen_points: u64,
    /// `points / q²` (closure count).
    pub surface_ratio: f64,
    /// `gen_points / q²`.
    pub gen_ratio: f64,
    /// `φ(q−1) / (2(q−1))`.
    pub theory: f64,
}

/// Exhaustive surface census by looping `(x, y)` and counting quadratic
/// roots in `z`.
pub fn heur1a_census(k: &PrimeField, f: &Factorization) -> Result<CensusResult> {
    let q = k.q();
    if q > SURFACE_CENSUS_LIMIT {
        return Err(Error::TooLargeForEnumeration {
            q,
            limit: SURFACE_CENSUS_LIMIT,
        });
    }
    let table = surface::sqrt_table(k);
    let four = k.reduce(4);
    let mut affine_points = 0u64;
    let mut gen_points = 0u64;
    for x in 0..q {
        let max_hyp = is_max_hyperbolic(k, x, f);
        let x2 = k.mul(x, x);
        let tx = k.mul(3, x);
        let mut on_fiber = 0u64;
        for y in 0..q {
            let b = k.neg(k.mul(tx, y));
            let c = k.add(x2, k.mul(y, y));
            let disc = k.sub(k.mul(b, b), k.mul(four, c));
            let roots = match table[disc as usize] {
                None => 0,
                Some(0) => 1,
                Some(_) => 2,
            };
            on_fiber += roots;
        }
        affine_points += on_fiber;
        if max_hyp {
            gen_points += on_fiber;
        }
    }
    let points = affine_points + 3 * q;
    let qq = (q * q) as f64;
    Ok(CensusResult {
        q,
        affine_points,
        points,
        gen_points,
        surface_ratio: points as f64 / qq,
        gen_ratio: gen_points as f64 / qq,
        theory: f.euler_phi() as f64 / (2.0 * f.n() as f64),
    })
}

/// One fiber of the census: the coordinate value, its class, and the number
/// of surface points above it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiberCensusRow {
    pub x0: u64,
    pub class: SpectralClass,
    pub size: u64,
}

/// Exhaustive fiber sizes over `x0 ∈ F_q^*`. Hyperbolic fibers carry `q−1`
/// points, elliptic ones `q+1`.
pub fn exact_fiber_census(k: &PrimeField, f: &Factorization) -> Result<Vec<FiberCensusRow>> {
    let q = k.q();
    if q > FIBER_CENSUS_LIMIT {
        return Err(Error::TooLargeForEnumeration {
            q,
            limit: FIBER_CENSUS_LIMIT,
        });
    }
    let table = surface::sqrt_table(k);
    let four = k.reduce(4);
    let mut rows = Vec::with_capacity((q - 1) as usize);
    for x0 in 1..q {
        let x2 = k.mul(x0, x0);
        let tx = k.mul(3, x0);
        let mut size = 0u64;
        for y in 0..q {
            let b = k.neg(k.mul(tx, y));
            let c = k.add(x2, k.mul(y, y));
            let disc = k.sub(k.mul(b, b), k.mul(four, c));
            size += match table[disc as usize] {
                None => 0,
                Some(0) => 1,
                Some(_) => 2,
            };
        }
        rows.push(FiberCensusRow {
            x0,
            class: classify::classify(k, x0, f),
            size,
        });
    }
    Ok(rows)
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}
