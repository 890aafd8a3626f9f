//! The rotation exponent linking two points of a shared maximally
//! hyperbolic fiber.
//!
//! On such a fiber the rotation acts transitively, and diagonalizing the
//! fiber matrix turns "how many rotation steps from P to Q" into one
//! discrete logarithm: with `U = [[1, −λ⁻¹], [−1, λ]]` the first row of
//! `U·v_Q = diag(λⁿ, λ⁻ⁿ)·U·v_P` reads `λⁿ = (y_Q − z_Q/λ)/(y_P − z_P/λ)`.
//! The sign of `n` depends on which eigenvalue the square root picked and on
//! the orientation of the rotation, so the result is verified with a fibral
//! power and replaced by `q−1−n` when the orientation is flipped.

use crate::classify::{self, SpectralClass};
use crate::ff::PrimeField;
use crate::nt::{self, Factorization};
use crate::surface::{Axis, MarkoffPoint};
use crate::{Error, Result};

/// Least `n ≥ 0` with `ρ_axis^n(p) = q_pt`, requiring that both points share
/// a maximally hyperbolic coordinate on `axis`.
pub fn markoff_dlp(
    k: &PrimeField,
    f: &Factorization,
    p: &MarkoffPoint,
    q_pt: &MarkoffPoint,
    axis: Axis,
) -> Result<u64> {
    let t = p.coord(axis);
    if q_pt.coord(axis) != t {
        return Err(Error::NotSameFiber {
            axis,
            a: t,
            b: q_pt.coord(axis),
        });
    }
    let lambda = match classify::classify(k, t, f) {
        SpectralClass::Hyperbolic { lambda, order } if order == k.q() - 1 => lambda,
        _ => return Err(Error::NotMaxHyperbolic(t)),
    };

    // cyclic swap so the fixed coordinate plays the x role: the moving pair
    // (in the "y, z" slots of the diagonalization) is (y,z) / (z,x) / (x,y)
    let (yp, zp) = moving_pair(p, axis);
    let (yq, zq) = moving_pair(q_pt, axis);

    let lambda_inv = k.inv(lambda).expect("eigenvalue is nonzero");
    let num = k.sub(yq, k.mul(zq, lambda_inv));
    let den = k.sub(yp, k.mul(zp, lambda_inv));
    let b = if den != 0 {
        k.mul(num, k.inv(den).expect("nonzero"))
    } else {
        // second row of the diagonalization; both rows cannot vanish for a
        // nonzero point on the fiber
        let num2 = k.sub(k.mul(lambda, zq), yq);
        let den2 = k.sub(k.mul(lambda, zp), yp);
        assert!(den2 != 0, "degenerate fiber point ({yp}, {zp})");
        k.mul(num2, k.inv(den2).expect("nonzero"))
    };

    let n = nt::dlp(k, lambda, b, f)?;
    if p.rho_pow(k, axis, n as i64) == *q_pt {
        return Ok(n);
    }
    let flipped = (k.q() - 1 - n) % (k.q() - 1);
    assert_eq!(
        p.rho_pow(k, axis, flipped as i64),
        *q_pt,
        "fibral exponent verified in neither orientation"
    );
    Ok(flipped)
}

fn moving_pair(p: &MarkoffPoint, axis: Axis) -> (u64, u64) {
    match axis {
        Axis::X => (p.y(), p.z()),
        Axis::Y => (p.z(), p.x()),
        Axis::Z => (p.x(), p.y()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::is_max_hyperbolic;
    use crate::nt::factor;
    use crate::surface::is_on_surface;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn setup(q: u64) -> (PrimeField, Factorization) {
        (PrimeField::new(q).unwrap(), factor(q - 1))
    }

    fn pt(k: &PrimeField, x: u64, y: u64, z: u64) -> MarkoffPoint {
        MarkoffPoint::new(k, x, y, z).unwrap()
    }

    /// A point on the `axis = t` fiber, found by scanning the free coordinate.
    fn fiber_point(k: &PrimeField, axis: Axis, t: u64, skip: u64) -> MarkoffPoint {
        let mut seen = 0;
        for u in 0..k.q() {
            let b = k.neg(k.mul(k.mul(3, t), u));
            let c = k.add(k.mul(t, t), k.mul(u, u));
            for root in k.solve_monic_quadratic(b, c) {
                let (x, y, z) = match axis {
                    Axis::X => (t, u, root),
                    Axis::Y => (u, t, root),
                    Axis::Z => (root, u, t),
                };
                if is_on_surface(k, x, y, z) {
                    if seen == skip {
                        return pt(k, x, y, z);
                    }
                    seen += 1;
                }
            }
        }
        panic!("no point on the {axis}-fiber of {t}");
    }

    #[test]
    fn worked_example_exponents() {
        let (k, f) = setup(70687);
        let p1 = pt(&k, 45506, 40902, 10340);
        let p2 = pt(&k, 29896, 40902, 935);
        let q2 = pt(&k, 29896, 595, 19535);
        let q1 = pt(&k, 11229, 2424, 19535);

        assert_eq!(markoff_dlp(&k, &f, &p1, &p2, Axis::Y).unwrap(), 26986);
        assert_eq!(markoff_dlp(&k, &f, &p2, &q2, Axis::X).unwrap(), 30287);
        assert_eq!(markoff_dlp(&k, &f, &q2, &q1, Axis::Z).unwrap(), 65193);
    }

    #[test]
    fn identity_exponent() {
        let (k, f) = setup(70687);
        let p = pt(&k, 45506, 40902, 10340);
        assert_eq!(markoff_dlp(&k, &f, &p, &p, Axis::Y).unwrap(), 0);
    }

    #[test]
    fn precondition_errors() {
        let (k, f) = setup(70687);
        let p1 = pt(&k, 45506, 40902, 10340);
        let q1 = pt(&k, 11229, 2424, 19535);
        assert!(matches!(
            markoff_dlp(&k, &f, &p1, &q1, Axis::Y),
            Err(Error::NotSameFiber { .. })
        ));

        // y = 18 has eigenvalue order 4158, so its fiber is not maximal
        let p = pt(&k, 45506, 18, 40902);
        let r = p.rho(&k, Axis::Y);
        assert!(!is_max_hyperbolic(&k, 18, &f));
        assert!(matches!(
            markoff_dlp(&k, &f, &p, &r, Axis::Y),
            Err(Error::NotMaxHyperbolic(18))
        ));

        // elliptic coordinate: z = 56858
        let p = pt(&k, 11229, 5772, 56858);
        let r = p.rho(&k, Axis::Z);
        assert!(matches!(
            markoff_dlp(&k, &f, &p, &r, Axis::Z),
            Err(Error::NotMaxHyperbolic(56858))
        ));
    }

    #[test]
    fn round_trip_random_fibers() {
        let (k, f) = setup(70687);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let axis = Axis::ALL[rng.random_range(0..3usize)];
            let t = loop {
                let t = rng.random_range(1..k.q());
                if is_max_hyperbolic(&k, t, &f) {
                    break t;
                }
            };
            let p = fiber_point(&k, axis, t, rng.random_range(0..5u64));
            let n = rng.random_range(0..k.q() - 1);
            let q_pt = p.rho_pow(&k, axis, n as i64);
            assert_eq!(markoff_dlp(&k, &f, &p, &q_pt, axis).unwrap(), n);
        }
    }

    #[test]
    fn orbit_covers_fiber_small_q() {
        // on a maximally hyperbolic fiber the rotation orbit has size q−1
        for q in [5u64, 7, 11, 13, 101] {
            let (k, f) = setup(q);
            for t in 1..q {
                if !is_max_hyperbolic(&k, t, &f) {
                    continue;
                }
                let p = fiber_point(&k, Axis::X, t, 0);
                let mut orbit = vec![p];
                let mut cur = p;
                loop {
                    cur = cur.rho(&k, Axis::X);
                    if cur == p {
                        break;
                    }
                    orbit.push(cur);
                }
                assert_eq!(orbit.len() as u64, q - 1, "q={q} t={t}");
            }
        }
    }

    #[test]
    fn diagonalization_rows_never_degenerate() {
        // z = λ·y forces x = 0 off the surface, so the first row suffices
        let (k, f) = setup(70687);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let t = loop {
                let t = rng.random_range(1..k.q());
                if is_max_hyperbolic(&k, t, &f) {
                    break t;
                }
            };
            let lambda = classify::eigenvalue(&k, t).unwrap();
            let li = k.inv(lambda).unwrap();
            let p = fiber_point(&k, Axis::X, t, rng.random_range(0..3u64));
            let (y, z) = (p.y(), p.z());
            assert_ne!(k.sub(y, k.mul(z, li)), 0);
            assert_ne!(k.sub(k.mul(lambda, z), y), 0);
        }
    }
}
