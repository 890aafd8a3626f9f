//! End-to-end path construction in the rotation graph.
//!
//! The pipeline: walk the start point with `ρ₁/ρ₃` until its y-coordinate is
//! maximally hyperbolic, walk the end point backwards with `ρ₁⁻¹/ρ₂⁻¹` until
//! its z-coordinate is, sample a maximally hyperbolic x-value whose fiber
//! meets both (two solvable quadratics), then close the three fibral gaps
//! with one discrete logarithm each. The output is a [`PathCertificate`]
//! whose word is re-applied and checked before it is returned, and which
//! records the seed so any run can be replayed exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::is_max_hyperbolic;
use crate::ff::PrimeField;
use crate::fiber_dlp::markoff_dlp;
use crate::nt::Factorization;
use crate::surface::{self, Axis, MarkoffPoint};
use crate::{Error, Result};

/// One `ρ_axis^exponent` factor of a path word.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Step {
    pub axis: Axis,
    pub exponent: i64,
}

/// An ordered product of rotation powers, applied left to right.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PathWord {
    steps: Vec<Step>,
}

impl PathWord {
    pub fn new() -> Self {
        PathWord::default()
    }

    pub fn from_steps<I: IntoIterator<Item = (Axis, i64)>>(steps: I) -> Self {
        let mut w = PathWord::new();
        for (axis, exponent) in steps {
            w.push(axis, exponent);
        }
        w
    }

    /// Appends one step; zero exponents are dropped.
    pub fn push(&mut self, axis: Axis, exponent: i64) {
        if exponent != 0 {
            self.steps.push(Step { axis, exponent });
        }
    }

    pub fn append(&mut self, other: &PathWord) {
        self.steps.extend_from_slice(&other.steps);
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Total number of single rotations the word expands to (`Σ |e|`).
    pub fn rotation_count(&self) -> u128 {
        self.steps
            .iter()
            .map(|s| s.exponent.unsigned_abs() as u128)
            .sum()
    }

    /// Left-to-right application via fibral powers.
    pub fn apply(&self, k: &PrimeField, start: MarkoffPoint) -> MarkoffPoint {
        self.steps
            .iter()
            .fold(start, |p, s| p.rho_pow(k, s.axis, s.exponent))
    }

    /// Reversed word with negated exponents: `w · w.inverse()` is trivial.
    pub fn inverse(&self) -> PathWord {
        PathWord {
            steps: self
                .steps
                .iter()
                .rev()
                .map(|s| Step {
                    axis: s.axis,
                    exponent: -s.exponent,
                })
                .collect(),
        }
    }

    /// Merges adjacent steps with equal generator and drops vanishing ones,
    /// cascading to a fixpoint. Application semantics are unchanged.
    pub fn simplify(&self) -> PathWord {
        let mut out: Vec<(Axis, i128)> = Vec::with_capacity(self.steps.len());
        for s in &self.steps {
            match out.last_mut() {
                Some((axis, acc)) if *axis == s.axis => {
                    *acc += s.exponent as i128;
                    if *acc == 0 {
                        out.pop();
                    }
                }
                _ => out.push((s.axis, s.exponent as i128)),
            }
        }
        PathWord {
            steps: out
                .into_iter()
                .map(|(axis, e)| Step {
                    axis,
                    exponent: i64::try_from(e).expect("merged exponent exceeds i64"),
                })
                .collect(),
        }
    }
}

impl std::fmt::Display for PathWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.steps.is_empty() {
            return f.write_str("(empty)");
        }
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "rho{}^{}", s.axis.index(), s.exponent)?;
        }
        Ok(())
    }
}

/// Direction of a random walk: forward rotations or their inverses.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WalkDirection {
    Forward,
    Inverse,
}

/// Applies random generators from `gens` until `target` names a maximally
/// hyperbolic coordinate, returning the reached point and the word taken.
/// The start point itself counts as a candidate (the word may be empty).
#[allow(clippy::too_many_arguments)]
pub fn walk_to_max_hyperbolic<R: Rng + ?Sized>(
    k: &PrimeField,
    f: &Factorization,
    start: MarkoffPoint,
    gens: &[Axis],
    target: Axis,
    direction: WalkDirection,
    rng: &mut R,
    max_steps: u64,
) -> Result<(MarkoffPoint, PathWord)> {
    assert!(!gens.is_empty());
    let mut p = start;
    let mut word = PathWord::new();
    let mut steps = 0u64;
    loop {
        if is_max_hyperbolic(k, p.coord(target), f) {
            return Ok((p, word));
        }
        if steps == max_steps {
            return Err(Error::WalkTimeout(max_steps));
        }
        let axis = if gens.len() == 1 {
            gens[0]
        } else {
            gens[rng.random_range(0..gens.len())]
        };
        match direction {
            WalkDirection::Forward => {
                p = p.rho(k, axis);
                word.push(axis, 1);
            }
            WalkDirection::Inverse => {
                p = p.rho_inv(k, axis);
                word.push(axis, -1);
            }
        }
        steps += 1;
    }
}

/// A maximally hyperbolic x-value together with the quadratic roots that
/// attach it to the fibers of `a` (via `z0`) and `b` (via `y0`).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ConnectingFiber {
    pub x: u64,
    pub z0: u64,
    pub y0: u64,
}

/// Draws proposals from `propose` until one is maximally hyperbolic and both
/// `F(x, a, Z)` and `F(x, Y, b)` split; roots are the canonical (least)
/// ones.
pub fn find_connecting_fiber_with(
    k: &PrimeField,
    f: &Factorization,
    a: u64,
    b: u64,
    propose: &mut dyn FnMut() -> u64,
    max_tries: u64,
) -> Result<ConnectingFiber> {
    for _ in 0..max_tries {
        let x = propose();
        debug_assert!(x >= 1 && x < k.q());
        if !is_max_hyperbolic(k, x, f) {
            continue;
        }
        let Some(z0) = least_fiber_root(k, x, a) else {
            continue;
        };
        let Some(y0) = least_fiber_root(k, x, b) else {
            continue;
        };
        return Ok(ConnectingFiber { x, z0, y0 });
    }
    Err(Error::FiberTimeout(max_tries))
}

/// Uniform random proposals over `F_q^*`.
pub fn find_connecting_fiber<R: Rng + ?Sized>(
    k: &PrimeField,
    f: &Factorization,
    a: u64,
    b: u64,
    rng: &mut R,
    max_tries: u64,
) -> Result<ConnectingFiber> {
    let q = k.q();
    find_connecting_fiber_with(k, f, a, b, &mut || rng.random_range(1..q), max_tries)
}

/// Least root of `W² − 3xt·W + (x² + t²)`, i.e. of `F` with two coordinates
/// pinned.
fn least_fiber_root(k: &PrimeField, x: u64, t: u64) -> Option<u64> {
    let b = k.neg(k.mul(k.mul(3, x), t));
    let c = k.add(k.mul(x, x), k.mul(t, t));
    k.solve_monic_quadratic(b, c).first().copied()
}

/// Tuning knobs for [`find_path`] / [`find_loop`].
#[derive(Clone, Debug)]
pub struct PathOptions {
    /// Use only `ρ₁` in both walks instead of random generator choices.
    pub simple_walk: bool,
    /// Walk step cap; default `64·(q−1)/φ(q−1)·ln ln q`.
    pub max_walk_steps: Option<u64>,
    /// Fiber proposal cap; default `64·8·(q−1)/φ(q−1)`.
    pub max_fiber_tries: Option<u64>,
    /// Full-pipeline restarts after a timeout.
    pub max_restarts: u32,
}

impl Default for PathOptions {
    fn default() -> Self {
        PathOptions {
            simple_walk: false,
            max_walk_steps: None,
            max_fiber_tries: None,
            max_restarts: 8,
        }
    }
}

pub fn default_walk_cap(k: &PrimeField, f: &Factorization) -> u64 {
    let ratio = f.n() as f64 / f.euler_phi() as f64;
    let ll = (k.q() as f64).ln().ln().max(1.0);
    (64.0 * ratio * ll).ceil().max(64.0) as u64
}

pub fn default_fiber_cap(f: &Factorization) -> u64 {
    let ratio = f.n() as f64 / f.euler_phi() as f64;
    (64.0 * 8.0 * ratio).ceil().max(64.0) as u64
}

/// The intermediate stops of a successful run: the two walk endpoints and
/// the two points planted on the connecting fiber.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Waypoints {
    pub p_prime: MarkoffPoint,
    pub p_double_prime: MarkoffPoint,
    pub q_double_prime: MarkoffPoint,
    pub q_prime: MarkoffPoint,
}

/// A verified walk certificate: applying `word` to `start` yields `end`.
/// The seed replays the construction exactly.
#[derive(Clone, PartialEq, Debug)]
pub struct PathCertificate {
    pub q: u64,
    pub start: MarkoffPoint,
    pub end: MarkoffPoint,
    pub word: PathWord,
    pub waypoints: Option<Waypoints>,
    pub seed: u64,
}

impl PathCertificate {
    /// Re-applies the word and checks the endpoints.
    pub fn verify(&self, k: &PrimeField) -> bool {
        k.q() == self.q && self.word.apply(k, self.start) == self.end
    }

    /// Stable JSON form; all integers are decimal strings so 53-bit JSON
    /// consumers cannot truncate them.
    pub fn to_json(&self) -> String {
        let dto = CertificateDto {
            q: self.q.to_string(),
            start: point_dto(&self.start),
            end: point_dto(&self.end),
            word: self
                .word
                .steps()
                .iter()
                .map(|s| [s.axis.index().to_string(), s.exponent.to_string()])
                .collect(),
            waypoints: self.waypoints.as_ref().map(|w| WaypointsDto {
                p_prime: point_dto(&w.p_prime),
                p_double_prime: point_dto(&w.p_double_prime),
                q_double_prime: point_dto(&w.q_double_prime),
                q_prime: point_dto(&w.q_prime),
            }),
            seed: self.seed.to_string(),
            verified: true,
        };
        serde_json::to_string(&dto).expect("certificate serialization cannot fail")
    }

    /// Parses and validates a certificate: the modulus must be prime, every
    /// point must lie on the surface, and the word is re-verified.
    pub fn from_json(s: &str) -> Result<PathCertificate> {
        let dto: CertificateDto =
            serde_json::from_str(s).map_err(|e| Error::BadCertificate(e.to_string()))?;
        let q = parse_u64(&dto.q)?;
        let k = PrimeField::new(q)?;
        let start = parse_point(&k, &dto.start)?;
        let end = parse_point(&k, &dto.end)?;
        let mut word = PathWord::new();
        for [axis, exponent] in &dto.word {
            let idx: u8 = axis
                .parse()
                .map_err(|_| Error::BadCertificate(format!("bad generator index {axis:?}")))?;
            let axis = Axis::from_index(idx)
                .ok_or_else(|| Error::BadCertificate(format!("bad generator index {idx}")))?;
            let exponent: i64 = exponent
                .parse()
                .map_err(|_| Error::BadCertificate(format!("bad exponent {exponent:?}")))?;
            word.push(axis, exponent);
        }
        let waypoints = match &dto.waypoints {
            None => None,
            Some(w) => Some(Waypoints {
                p_prime: parse_point(&k, &w.p_prime)?,
                p_double_prime: parse_point(&k, &w.p_double_prime)?,
                q_double_prime: parse_point(&k, &w.q_double_prime)?,
                q_prime: parse_point(&k, &w.q_prime)?,
            }),
        };
        let seed = parse_u64(&dto.seed)?;
        Ok(PathCertificate {
            q,
            start,
            end,
            word,
            waypoints,
            seed,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct CertificateDto {
    q: String,
    start: [String; 3],
    end: [String; 3],
    word: Vec<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    waypoints: Option<WaypointsDto>,
    seed: String,
    verified: bool,
}

#[derive(Serialize, Deserialize)]
struct WaypointsDto {
    p_prime: [String; 3],
    p_double_prime: [String; 3],
    q_double_prime: [String; 3],
    q_prime: [String; 3],
}

fn point_dto(p: &MarkoffPoint) -> [String; 3] {
    [p.x().to_string(), p.y().to_string(), p.z().to_string()]
}

fn parse_u64(s: &str) -> Result<u64> {
    s.parse()
        .map_err(|_| Error::BadCertificate(format!("bad integer {s:?}")))
}

fn parse_point(k: &PrimeField, c: &[String; 3]) -> Result<MarkoffPoint> {
    MarkoffPoint::new(k, parse_u64(&c[0])?, parse_u64(&c[1])?, parse_u64(&c[2])?)
}

/// Computes a verified path certificate from `start` to `end`.
///
/// Walks and fiber proposals are driven by a ChaCha stream seeded with
/// `seed`; a timeout restarts the pipeline on the same stream, up to
/// `max_restarts` times.
pub fn find_path(
    k: &PrimeField,
    f: &Factorization,
    start: MarkoffPoint,
    end: MarkoffPoint,
    seed: u64,
    options: &PathOptions,
) -> Result<PathCertificate> {
    debug_assert_eq!(f.n(), k.q() - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let walk_cap = options.max_walk_steps.unwrap_or_else(|| default_walk_cap(k, f));
    let fiber_cap = options
        .max_fiber_tries
        .unwrap_or_else(|| default_fiber_cap(f));
    for _ in 0..=options.max_restarts {
        match attempt_path(k, f, start, end, &mut rng, walk_cap, fiber_cap, options.simple_walk) {
            Ok((word, waypoints)) => {
                return Ok(PathCertificate {
                    q: k.q(),
                    start,
                    end,
                    word,
                    waypoints: Some(waypoints),
                    seed,
                });
            }
            Err(Error::WalkTimeout(_)) | Err(Error::FiberTimeout(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::SearchExhausted(options.max_restarts))
}

#[allow(clippy::too_many_arguments)]
fn attempt_path<R: Rng + ?Sized>(
    k: &PrimeField,
    f: &Factorization,
    start: MarkoffPoint,
    end: MarkoffPoint,
    rng: &mut R,
    walk_cap: u64,
    fiber_cap: u64,
    simple_walk: bool,
) -> Result<(PathWord, Waypoints)> {
    let forward_gens: &[Axis] = if simple_walk {
        &[Axis::X]
    } else {
        &[Axis::X, Axis::Z]
    };
    let backward_gens: &[Axis] = if simple_walk {
        &[Axis::X]
    } else {
        &[Axis::X, Axis::Y]
    };

    let (p_prime, forward_word) = walk_to_max_hyperbolic(
        k,
        f,
        start,
        forward_gens,
        Axis::Y,
        WalkDirection::Forward,
        rng,
        walk_cap,
    )?;
    let (q_prime, backward_word) = walk_to_max_hyperbolic(
        k,
        f,
        end,
        backward_gens,
        Axis::Z,
        WalkDirection::Inverse,
        rng,
        walk_cap,
    )?;

    let a = p_prime.y();
    let b = q_prime.z();
    let fiber = find_connecting_fiber(k, f, a, b, rng, fiber_cap)?;
    let p_double = MarkoffPoint::new(k, fiber.x, a, fiber.z0)
        .expect("fiber quadratic root lies on the surface");
    let q_double = MarkoffPoint::new(k, fiber.x, fiber.y0, b)
        .expect("fiber quadratic root lies on the surface");

    let exp_a = markoff_dlp(k, f, &p_prime, &p_double, Axis::Y)?;
    let exp_c = markoff_dlp(k, f, &p_double, &q_double, Axis::X)?;
    let exp_b = markoff_dlp(k, f, &q_double, &q_prime, Axis::Z)?;

    let mut word = forward_word;
    word.push(Axis::Y, exp_a as i64);
    word.push(Axis::X, exp_c as i64);
    word.push(Axis::Z, exp_b as i64);
    word.append(&backward_word.inverse());

    assert_eq!(word.apply(k, start), end, "certificate failed to verify");
    Ok((
        word,
        Waypoints {
            p_prime,
            p_double_prime: p_double,
            q_double_prime: q_double,
            q_prime,
        },
    ))
}

/// A verified non-trivial loop based at `base`: two independent paths
/// through a random intermediate point, concatenated and simplified;
/// retried if they cancel exactly.
pub fn find_loop(
    k: &PrimeField,
    f: &Factorization,
    base: MarkoffPoint,
    seed: u64,
    options: &PathOptions,
) -> Result<PathCertificate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..=options.max_restarts {
        let via = surface::random_point(k, &mut rng);
        let out_seed = rng.random::<u64>();
        let back_seed = rng.random::<u64>();
        let outbound = find_path(k, f, base, via, out_seed, options)?;
        let inbound = find_path(k, f, via, base, back_seed, options)?;
        let mut word = outbound.word;
        word.append(&inbound.word);
        let word = word.simplify();
        if word.is_empty() {
            continue;
        }
        assert_eq!(word.apply(k, base), base, "loop failed to verify");
        return Ok(PathCertificate {
            q: k.q(),
            start: base,
            end: base,
            word,
            waypoints: None,
            seed,
        });
    }
    Err(Error::SearchExhausted(options.max_restarts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nt::factor;
    use proptest::prelude::*;

    fn setup(q: u64) -> (PrimeField, Factorization) {
        (PrimeField::new(q).unwrap(), factor(q - 1))
    }

    fn pt(k: &PrimeField, x: u64, y: u64, z: u64) -> MarkoffPoint {
        MarkoffPoint::new(k, x, y, z).unwrap()
    }

    #[test]
    fn apply_worked_example_word() {
        let (k, _) = setup(70687);
        let p = pt(&k, 45506, 13064, 18);
        let word = PathWord::from_steps([
            (Axis::X, 2),
            (Axis::Y, 26986),
            (Axis::X, 30287),
            (Axis::Z, 65193),
            (Axis::X, 15),
        ]);
        assert_eq!(word.apply(&k, p).coords(), [11229, 5772, 56858]);

        // a second run of the same pipeline wrote down different exponents
        let word2 = PathWord::from_steps([
            (Axis::X, 2),
            (Axis::Y, 26703),
            (Axis::X, 52102),
            (Axis::Z, 29583),
            (Axis::X, 15),
        ]);
        assert_eq!(word2.apply(&k, p).coords(), [11229, 5772, 56858]);

        // and the reverse direction composes into a loop
        let q_pt = pt(&k, 11229, 5772, 56858);
        let back = PathWord::from_steps([
            (Axis::X, 3),
            (Axis::Y, 389),
            (Axis::X, 14491),
            (Axis::Z, 39906),
            (Axis::X, 11),
        ]);
        assert_eq!(back.apply(&k, q_pt), p);

        let mut looped = word.clone();
        looped.append(&back);
        let looped = looped.simplify();
        assert_eq!(looped.apply(&k, p), p);
        let exps: Vec<(u8, i64)> = looped
            .steps()
            .iter()
            .map(|s| (s.axis.index(), s.exponent))
            .collect();
        assert_eq!(
            exps,
            vec![
                (1, 2),
                (2, 26986),
                (1, 30287),
                (3, 65193),
                (1, 18),
                (2, 389),
                (1, 14491),
                (3, 39906),
                (1, 11)
            ]
        );
    }

    #[test]
    fn word_basics() {
        let (k, _) = setup(70687);
        let p = pt(&k, 45506, 13064, 18);
        assert_eq!(PathWord::new().apply(&k, p), p);

        let w = PathWord::from_steps([(Axis::X, 7), (Axis::Y, -3), (Axis::Z, 2)]);
        let mut round = w.clone();
        round.append(&w.inverse());
        assert_eq!(round.apply(&k, p), p);
        assert_eq!(round.simplify(), PathWord::new());
        assert_eq!(w.rotation_count(), 12);
    }

    #[test]
    fn simplify_rules() {
        let a = PathWord::from_steps([(Axis::X, 3), (Axis::X, 15)]);
        assert_eq!(a.simplify(), PathWord::from_steps([(Axis::X, 18)]));

        let b = PathWord::from_steps([(Axis::X, 5), (Axis::X, -5)]);
        assert_eq!(b.simplify(), PathWord::new());

        let c = PathWord::from_steps([(Axis::X, 2), (Axis::Y, 3)]);
        assert_eq!(c.simplify(), c);

        // cancellation cascades across the seam
        let d = PathWord::from_steps([(Axis::X, 2), (Axis::Y, 3), (Axis::Y, -3), (Axis::X, -2)]);
        assert_eq!(d.simplify(), PathWord::new());
    }

    #[test]
    fn walk_reproduces_worked_example() {
        let (k, f) = setup(70687);
        let mut rng = ChaCha8Rng::seed_from_u64(0);

        let p = pt(&k, 45506, 13064, 18);
        let (p_prime, w) = walk_to_max_hyperbolic(
            &k,
            &f,
            p,
            &[Axis::X],
            Axis::Y,
            WalkDirection::Forward,
            &mut rng,
            1000,
        )
        .unwrap();
        assert_eq!(p_prime.coords(), [45506, 40902, 10340]);
        assert_eq!(w, PathWord::from_steps([(Axis::X, 1), (Axis::X, 1)]));

        let q = pt(&k, 11229, 5772, 56858);
        let (q_prime, w) = walk_to_max_hyperbolic(
            &k,
            &f,
            q,
            &[Axis::X],
            Axis::Z,
            WalkDirection::Inverse,
            &mut rng,
            1000,
        )
        .unwrap();
        assert_eq!(q_prime.coords(), [11229, 2424, 19535]);
        assert_eq!(w.len(), 15);
        assert!(w.steps().iter().all(|s| s.exponent == -1));

        // already-maximal target: empty word
        let (same, w) = walk_to_max_hyperbolic(
            &k,
            &f,
            p_prime,
            &[Axis::X],
            Axis::Y,
            WalkDirection::Forward,
            &mut rng,
            1000,
        )
        .unwrap();
        assert_eq!(same, p_prime);
        assert!(w.is_empty());

        // a zero-step budget times out from a non-maximal start
        assert_eq!(
            walk_to_max_hyperbolic(
                &k,
                &f,
                p,
                &[Axis::X],
                Axis::Y,
                WalkDirection::Forward,
                &mut rng,
                0,
            ),
            Err(Error::WalkTimeout(0))
        );
    }

    #[test]
    fn connecting_fiber_forced_proposals() {
        let (k, f) = setup(70687);
        let script = [29628u64, 19562, 43036, 6057, 29896];
        let mut i = 0;
        let mut propose = || {
            let x = script[i];
            i += 1;
            x
        };
        let cf =
            find_connecting_fiber_with(&k, &f, 40902, 19535, &mut propose, 10).unwrap();
        assert_eq!(i, 5, "accepted on the fifth proposal");
        assert_eq!(cf, ConnectingFiber { x: 29896, z0: 935, y0: 595 });

        // exhausting the budget on rejected proposals times out
        let mut j = 0;
        let mut propose = || {
            j += 1;
            29628u64
        };
        assert_eq!(
            find_connecting_fiber_with(&k, &f, 40902, 19535, &mut propose, 3),
            Err(Error::FiberTimeout(3))
        );
    }

    #[test]
    fn connecting_fiber_postconditions() {
        let (k, f) = setup(70687);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let a = rng.random_range(1..k.q());
            let b = rng.random_range(1..k.q());
            if let Ok(cf) = find_connecting_fiber(&k, &f, a, b, &mut rng, 10_000) {
                assert!(is_max_hyperbolic(&k, cf.x, &f));
                assert!(MarkoffPoint::new(&k, cf.x, a, cf.z0).is_ok());
                assert!(MarkoffPoint::new(&k, cf.x, cf.y0, b).is_ok());
            }
        }
    }

    #[test]
    fn find_path_end_to_end() {
        let (k, f) = setup(70687);
        let p = pt(&k, 45506, 13064, 18);
        let q = pt(&k, 11229, 5772, 56858);
        let cert = find_path(&k, &f, p, q, 12345, &PathOptions::default()).unwrap();
        assert!(cert.verify(&k));
        assert_eq!(cert.start, p);
        assert_eq!(cert.end, q);
        assert_eq!(cert.seed, 12345);
        let wp = cert.waypoints.unwrap();
        assert!(is_max_hyperbolic(&k, wp.p_prime.y(), &f));
        assert!(is_max_hyperbolic(&k, wp.q_prime.z(), &f));
        assert_eq!(wp.p_double_prime.x(), wp.q_double_prime.x());

        // identical seed, identical certificate
        let again = find_path(&k, &f, p, q, 12345, &PathOptions::default()).unwrap();
        assert_eq!(again, cert);

        // simple-walk mode reproduces the pinned walk endpoints
        let opts = PathOptions {
            simple_walk: true,
            ..PathOptions::default()
        };
        let cert = find_path(&k, &f, p, q, 999, &opts).unwrap();
        let wp = cert.waypoints.unwrap();
        assert_eq!(wp.p_prime.coords(), [45506, 40902, 10340]);
        assert_eq!(wp.q_prime.coords(), [11229, 2424, 19535]);
    }

    #[test]
    fn find_path_same_endpoints() {
        let (k, f) = setup(70687);
        let p = pt(&k, 45506, 13064, 18);
        let cert = find_path(&k, &f, p, p, 7, &PathOptions::default()).unwrap();
        assert!(cert.verify(&k));
        assert_eq!(cert.word.apply(&k, p), p);
    }

    #[test]
    fn find_loop_nontrivial() {
        let (k, f) = setup(70687);
        let p = pt(&k, 45506, 13064, 18);
        let cert = find_loop(&k, &f, p, 31337, &PathOptions::default()).unwrap();
        assert_eq!(cert.start, cert.end);
        assert!(!cert.word.is_empty());
        assert!(cert.verify(&k));
        // simplified form: no adjacent steps share a generator
        assert!(cert
            .word
            .steps()
            .windows(2)
            .all(|w| w[0].axis != w[1].axis));
    }

    #[test]
    fn certificate_json_round_trip() {
        let (k, f) = setup(70687);
        let p = pt(&k, 45506, 13064, 18);
        let q = pt(&k, 11229, 5772, 56858);
        let cert = find_path(&k, &f, p, q, 5, &PathOptions::default()).unwrap();
        let json = cert.to_json();
        let back = PathCertificate::from_json(&json).unwrap();
        assert_eq!(back, cert);
        assert!(back.verify(&k));
        // integers travel as strings
        assert!(json.contains("\"q\":\"70687\""));
        assert!(json.contains("\"verified\":true"));

        assert!(PathCertificate::from_json("{").is_err());
        let bad = json.replace("45506", "45507");
        match PathCertificate::from_json(&bad) {
            Err(Error::NotOnSurface { .. }) => {}
            other => panic!("expected NotOnSurface, got {other:?}"),
        }

        // loop certificates carry no waypoints and still round-trip
        let lp = find_loop(&k, &f, p, 64, &PathOptions::default()).unwrap();
        let back = PathCertificate::from_json(&lp.to_json()).unwrap();
        assert_eq!(back, lp);
        assert!(back.waypoints.is_none());
        assert!(back.verify(&k));
    }

    #[test]
    fn walk_statistics_in_expected_band() {
        // mean forward-walk length at q = 70687 over 10³ seeded runs
        let (k, f) = setup(70687);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let cap = default_walk_cap(&k, &f);
        let mut total = 0u64;
        for _ in 0..1000 {
            let p = surface::random_point(&k, &mut rng);
            let (_, w) = walk_to_max_hyperbolic(
                &k,
                &f,
                p,
                &[Axis::X, Axis::Z],
                Axis::Y,
                WalkDirection::Forward,
                &mut rng,
                cap,
            )
            .unwrap();
            total += w.len() as u64;
        }
        let mean = total as f64 / 1000.0;
        assert!((6.0..=16.0).contains(&mean), "mean walk length {mean}");
    }

    #[test]
    fn connecting_fiber_acceptance_rate() {
        // production predicate vs the measured acceptance probability:
        // 10⁵ proposals with fresh random (a, b) each
        let (k, f) = setup(70687);
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let mut accepted = 0u64;
        let total = 100_000u64;
        for _ in 0..total {
            let a = rng.random_range(1..k.q());
            let b = rng.random_range(1..k.q());
            if find_connecting_fiber(&k, &f, a, b, &mut rng, 1).is_ok() {
                accepted += 1;
            }
        }
        let rate = accepted as f64 / total as f64;
        assert!((rate - 0.0306).abs() <= 0.005, "acceptance rate {rate}");
    }

    #[test]
    fn simplify_survey_random_words() {
        // bulk sweep: 10⁴ random words leave the endpoint unchanged
        let (k, _) = setup(101);
        let mut rng = ChaCha8Rng::seed_from_u64(404);
        for _ in 0..10_000 {
            let p = surface::random_point(&k, &mut rng);
            let len = rng.random_range(0..16usize);
            let word = PathWord::from_steps((0..len).map(|_| {
                (
                    Axis::ALL[rng.random_range(0..3usize)],
                    rng.random_range(-30i64..=30),
                )
            }));
            assert_eq!(word.apply(&k, p), word.simplify().apply(&k, p));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn simplify_preserves_semantics(raw in proptest::collection::vec((1u8..=3, -40i64..=40), 0..24)) {
            let (k, _) = setup(101);
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            let p = surface::random_point(&k, &mut rng);
            let word = PathWord::from_steps(
                raw.into_iter().map(|(i, e)| (Axis::from_index(i).unwrap(), e)),
            );
            let simplified = word.simplify();
            prop_assert_eq!(word.apply(&k, p), simplified.apply(&k, p));
            // fixpoint shape: no zero exponents, no adjacent equal generators
            prop_assert!(simplified.steps().iter().all(|s| s.exponent != 0));
            prop_assert!(simplified.steps().windows(2).all(|w| w[0].axis != w[1].axis));
        }

        #[test]
        fn inverse_word_returns_home(raw in proptest::collection::vec((1u8..=3, -20i64..=20), 0..12)) {
            let (k, _) = setup(101);
            let mut rng = ChaCha8Rng::seed_from_u64(2);
            let p = surface::random_point(&k, &mut rng);
            let word = PathWord::from_steps(
                raw.into_iter().map(|(i, e)| (Axis::from_index(i).unwrap(), e)),
            );
            let there = word.apply(&k, p);
            prop_assert_eq!(word.inverse().apply(&k, there), p);
        }
    }
}
