//! The Markoff surface `X² + Y² + Z² = 3XYZ` over `F_q`.
//!
//! Vertices are the nonzero solutions. Each rotation `ρ_k` fixes one
//! coordinate and moves the complementary pair by the determinant-one matrix
//! `L_t = [[3t, −1], [1, 0]]` evaluated at the fixed coordinate, which is
//! what makes fibral powers (and hence fibral discrete logs) cheap. The
//! coordinate conventions are pinned by the rotation formulas
//!
//! ```text
//! ρ₁(x,y,z) = (x, z, 3xz − y)
//! ρ₂(x,y,z) = (3xy − z, y, x)
//! ρ₃(x,y,z) = (y, 3yz − x, z)
//! ```
//!
//! so `ρ₁` acts on the pair `(z, y)` by `L_x`, `ρ₂` on `(x, z)` by `L_y`,
//! and `ρ₃` on `(y, x)` by `L_z`.

use std::fmt;

use rand::Rng;

use crate::ff::PrimeField;
use crate::{Error, Result};

/// Guard for the exhaustive point enumeration.
pub const ENUMERATION_LIMIT: u64 = 10_000;

/// A coordinate axis, doubling as the index of the rotation that fixes it
/// (`ρ₁` fixes x, `ρ₂` fixes y, `ρ₃` fixes z).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// 1-based rotation index.
    pub fn index(self) -> u8 {
        match self {
            Axis::X => 1,
            Axis::Y => 2,
            Axis::Z => 3,
        }
    }

    pub fn from_index(i: u8) -> Option<Axis> {
        match i {
            1 => Some(Axis::X),
            2 => Some(Axis::Y),
            3 => Some(Axis::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// Whether `(x, y, z)` is a nonzero point of the surface.
pub fn is_on_surface(k: &PrimeField, x: u64, y: u64, z: u64) -> bool {
    if x == 0 && y == 0 && z == 0 {
        return false;
    }
    let lhs = k.add(k.add(k.mul(x, x), k.mul(y, y)), k.mul(z, z));
    let rhs = k.mul(k.mul(3, x), k.mul(y, z));
    lhs == rhs
}

/// A point of the surface with canonical coordinates, excluding the origin.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct MarkoffPoint {
    x: u64,
    y: u64,
    z: u64,
}

impl MarkoffPoint {
    /// Validates the surface equation (after canonical reduction).
    pub fn new(k: &PrimeField, x: u64, y: u64, z: u64) -> Result<Self> {
        let (x, y, z) = (k.reduce(x), k.reduce(y), k.reduce(z));
        if !is_on_surface(k, x, y, z) {
            return Err(Error::NotOnSurface { q: k.q(), x, y, z });
        }
        Ok(MarkoffPoint { x, y, z })
    }

    /// Internal constructor for coordinates produced by surface-preserving
    /// maps.
    fn from_parts(k: &PrimeField, x: u64, y: u64, z: u64) -> Self {
        debug_assert!(is_on_surface(k, x, y, z));
        MarkoffPoint { x, y, z }
    }

    pub fn x(self) -> u64 {
        self.x
    }

    pub fn y(self) -> u64 {
        self.y
    }

    pub fn z(self) -> u64 {
        self.z
    }

    pub fn coord(self, axis: Axis) -> u64 {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
            Axis::Z => self.z,
        }
    }

    pub fn coords(self) -> [u64; 3] {
        [self.x, self.y, self.z]
    }

    /// Parses the CLI form `"x,y,z"`.
    pub fn parse(k: &PrimeField, s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::BadPointFormat(s.to_string()));
        }
        let mut vals = [0u64; 3];
        for (v, part) in vals.iter_mut().zip(&parts) {
            *v = part
                .parse::<u64>()
                .map_err(|_| Error::BadPointFormat(s.to_string()))?;
        }
        MarkoffPoint::new(k, vals[0], vals[1], vals[2])
    }

    /// The rotation fixing `axis`.
    pub fn rho(self, k: &PrimeField, axis: Axis) -> Self {
        let MarkoffPoint { x, y, z } = self;
        let vieta = |a: u64, b: u64, c: u64| k.sub(k.mul(k.mul(3, a), b), c);
        match axis {
            Axis::X => Self::from_parts(k, x, z, vieta(x, z, y)),
            Axis::Y => Self::from_parts(k, vieta(x, y, z), y, x),
            Axis::Z => Self::from_parts(k, y, vieta(y, z, x), z),
        }
    }

    /// Inverse rotation: `ρ₁⁻¹(x,y,z) = (x, 3xy − z, y)` and cyclically.
    pub fn rho_inv(self, k: &PrimeField, axis: Axis) -> Self {
        let MarkoffPoint { x, y, z } = self;
        let vieta = |a: u64, b: u64, c: u64| k.sub(k.mul(k.mul(3, a), b), c);
        match axis {
            Axis::X => Self::from_parts(k, x, vieta(x, y, z), y),
            Axis::Y => Self::from_parts(k, z, y, vieta(y, z, x)),
            Axis::Z => Self::from_parts(k, vieta(z, x, y), x, z),
        }
    }

    /// `ρ_axis^n` in `O(log |n|)` via powers of the fiber matrix. Negative
    /// exponents use the inverse matrix `[[0, 1], [−1, 3t]]`.
    pub fn rho_pow(self, k: &PrimeField, axis: Axis, n: i64) -> Self {
        let t = self.coord(axis);
        let m = if n >= 0 {
            FiberMatrix::new(k, t)
        } else {
            FiberMatrix::inverse_of(k, t)
        };
        let mp = m.pow(k, n.unsigned_abs());
        let MarkoffPoint { x, y, z } = self;
        match axis {
            Axis::X => {
                let (zn, yn) = mp.apply(k, (z, y));
                Self::from_parts(k, x, yn, zn)
            }
            Axis::Y => {
                let (xn, zn) = mp.apply(k, (x, z));
                Self::from_parts(k, xn, y, zn)
            }
            Axis::Z => {
                let (yn, xn) = mp.apply(k, (y, x));
                Self::from_parts(k, xn, yn, z)
            }
        }
    }

    /// Vieta involution replacing the `axis` coordinate by the second root.
    pub fn sigma(self, k: &PrimeField, axis: Axis) -> Self {
        let MarkoffPoint { x, y, z } = self;
        let vieta = |a: u64, b: u64, c: u64| k.sub(k.mul(k.mul(3, a), b), c);
        match axis {
            Axis::X => Self::from_parts(k, vieta(y, z, x), y, z),
            Axis::Y => Self::from_parts(k, x, vieta(x, z, y), z),
            Axis::Z => Self::from_parts(k, x, y, vieta(x, y, z)),
        }
    }
}

impl fmt::Display for MarkoffPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.x, self.y, self.z)
    }
}

/// The matrix `L_t = [[3t, −1], [1, 0]]` (determinant one) realizing
/// rotation action along a fiber.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FiberMatrix {
    m: [[u64; 2]; 2],
}

impl FiberMatrix {
    pub fn new(k: &PrimeField, t: u64) -> Self {
        FiberMatrix {
            m: [[k.mul(3, t), k.neg(1)], [1, 0]],
        }
    }

    /// `L_t⁻¹ = [[0, 1], [−1, 3t]]`; no entry inversions needed since
    /// `det L_t = 1`.
    pub fn inverse_of(k: &PrimeField, t: u64) -> Self {
        FiberMatrix {
            m: [[0, 1], [k.neg(1), k.mul(3, t)]],
        }
    }

    pub fn entries(&self) -> [[u64; 2]; 2] {
        self.m
    }

    pub fn det(&self, k: &PrimeField) -> u64 {
        k.sub(
            k.mul(self.m[0][0], self.m[1][1]),
            k.mul(self.m[0][1], self.m[1][0]),
        )
    }

    fn matmul(k: &PrimeField, a: &[[u64; 2]; 2], b: &[[u64; 2]; 2]) -> [[u64; 2]; 2] {
        let mut out = [[0u64; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = k.add(k.mul(a[i][0], b[0][j]), k.mul(a[i][1], b[1][j]));
            }
        }
        out
    }

    pub fn pow(&self, k: &PrimeField, mut n: u64) -> FiberMatrix {
        let mut acc = [[1, 0], [0, 1]];
        let mut base = self.m;
        while n > 0 {
            if n & 1 == 1 {
                acc = Self::matmul(k, &acc, &base);
            }
            base = Self::matmul(k, &base, &base);
            n >>= 1;
        }
        FiberMatrix { m: acc }
    }

    pub fn apply(&self, k: &PrimeField, v: (u64, u64)) -> (u64, u64) {
        (
            k.add(k.mul(self.m[0][0], v.0), k.mul(self.m[0][1], v.1)),
            k.add(k.mul(self.m[1][0], v.0), k.mul(self.m[1][1], v.1)),
        )
    }
}

/// Uniform-ish random point: draw `(x, y)`, solve the quadratic in `z`,
/// retry until a root exists, and pick one of the roots uniformly. Never
/// returns the origin.
pub fn random_point<R: Rng + ?Sized>(k: &PrimeField, rng: &mut R) -> MarkoffPoint {
    let q = k.q();
    loop {
        let x = rng.random_range(0..q);
        let y = rng.random_range(0..q);
        let b = k.neg(k.mul(k.mul(3, x), y));
        let c = k.add(k.mul(x, x), k.mul(y, y));
        let roots = k.solve_monic_quadratic(b, c);
        if roots.is_empty() {
            continue;
        }
        let z = if roots.len() == 2 {
            roots[rng.random_range(0..2usize)]
        } else {
            roots[0]
        };
        if x == 0 && y == 0 && z == 0 {
            continue;
        }
        return MarkoffPoint::from_parts(k, x, y, z);
    }
}

/// All points of the surface minus the origin, by looping `(x, y)` and
/// solving for `z`. Refuses fields beyond [`ENUMERATION_LIMIT`].
pub fn enumerate_points(k: &PrimeField) -> Result<Vec<MarkoffPoint>> {
    let q = k.q();
    if q > ENUMERATION_LIMIT {
        return Err(Error::TooLargeForEnumeration {
            q,
            limit: ENUMERATION_LIMIT,
        });
    }
    let table = sqrt_table(k);
    let half = (q + 1) >> 1;
    let mut points = Vec::new();
    for x in 0..q {
        let x2 = k.mul(x, x);
        let tx = k.mul(3, x);
        for y in 0..q {
            let b = k.neg(k.mul(tx, y));
            let c = k.add(x2, k.mul(y, y));
            let disc = k.sub(k.mul(b, b), k.mul(k.reduce(4), c));
            let Some(r) = table[disc as usize] else {
                continue;
            };
            let z1 = k.mul(k.sub(r, b), half);
            if !(x == 0 && y == 0 && z1 == 0) {
                points.push(MarkoffPoint::from_parts(k, x, y, z1));
            }
            if r != 0 {
                let z2 = k.mul(k.neg(k.add(b, r)), half);
                points.push(MarkoffPoint::from_parts(k, x, y, z2));
            }
        }
    }
    Ok(points)
}

/// Canonical square roots of every residue (`None` marks non-residues);
/// `O(q)` space, used by the exhaustive censuses.
pub(crate) fn sqrt_table(k: &PrimeField) -> Vec<Option<u64>> {
    let q = k.q() as usize;
    let mut table = vec![None; q];
    // ascending r, so the first root recorded is the canonical (smaller) one
    for r in 0..k.q() {
        let s = k.mul(r, r) as usize;
        if table[s].is_none() {
            table[s] = Some(r);
        }
    }
    table
}
