//! Prime-field arithmetic.
//!
//! Elements of `F_q` are canonical residues in `[0, q)` stored as `u64`;
//! products pass through `u128`, so every prime below `2^63` is supported
//! without an arbitrary-precision backend. Callers are expected to hand in
//! canonical residues (use [`PrimeField::reduce`] at boundaries).

use crate::nt;
use crate::{Error, Result};

/// The prime field `F_q`, `q ≥ 5`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    /// Largest supported modulus (63 bits).
    pub const MAX_MODULUS: u64 = (1 << 63) - 1;

    /// Builds the field, rejecting composite moduli and characteristics
    /// below 5.
    pub fn new(q: u64) -> Result<Self> {
        if q < 5 {
            return Err(Error::ModulusTooSmall(q));
        }
        if q > Self::MAX_MODULUS {
            return Err(Error::ModulusTooLarge(q));
        }
        if !nt::is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(PrimeField { q })
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Canonical residue of an arbitrary `u64`.
    #[inline]
    pub fn reduce(&self, n: u64) -> u64 {
        n % self.q
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        if a >= b {
            a - b
        } else {
            a + (self.q - b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.q);
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.q && b < self.q);
        (a as u128 * b as u128 % self.q as u128) as u64
    }

    /// `a^e` by square-and-multiply; the wide exponent admits anything up
    /// to `q²`.
    pub fn pow(&self, a: u64, mut e: u128) -> u64 {
        debug_assert!(a < self.q);
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; zero is a domain error.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, (self.q - 2) as u128))
    }

    /// Euler-criterion value: `+1` for a nonzero square, `-1` for a
    /// non-square, `0` for zero.
    pub fn legendre(&self, a: u64) -> i32 {
        if a == 0 {
            return 0;
        }
        let s = self.pow(a, ((self.q - 1) / 2) as u128);
        if s == 1 {
            1
        } else {
            debug_assert_eq!(s, self.q - 1);
            -1
        }
    }

    /// Canonical square root (the smaller of the two), or `None` for a
    /// non-residue. Tonelli–Shanks, with the single-exponentiation path for
    /// `q ≡ 3 (mod 4)`.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return Some(0);
        }
        if self.legendre(a) != 1 {
            return None;
        }
        let r = if self.q % 4 == 3 {
            self.pow(a, ((self.q + 1) / 4) as u128)
        } else {
            self.tonelli_shanks(a)
        };
        debug_assert_eq!(self.mul(r, r), a);
        Some(r.min(self.q - r))
    }

    fn tonelli_shanks(&self, a: u64) -> u64 {
        let q = self.q;
        let s = (q - 1).trailing_zeros();
        let m = (q - 1) >> s;
        let mut n = 2;
        while self.legendre(n) != -1 {
            n += 1;
        }
        let mut c = self.pow(n, m as u128);
        let mut t = self.pow(a, m as u128);
        let mut r = self.pow(a, m.div_ceil(2) as u128);
        let mut k = s;
        while t != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(k - i - 1) {
                b = self.mul(b, b);
            }
            r = self.mul(r, b);
            c = self.mul(b, b);
            t = self.mul(t, c);
            k = i;
        }
        r
    }

    /// All roots of `T² + bT + c`, sorted ascending (0, 1 or 2 of them).
    pub fn solve_monic_quadratic(&self, b: u64, c: u64) -> Vec<u64> {
        let four = self.reduce(4);
        let disc = self.sub(self.mul(b, b), self.mul(four, c));
        match self.sqrt(disc) {
            None => Vec::new(),
            Some(0) => vec![self.mul(self.neg(b), self.half())],
            Some(r) => {
                let half = self.half();
                let r1 = self.mul(self.sub(r, b), half);
                let r2 = self.mul(self.neg(self.add(b, r)), half);
                if r1 <= r2 {
                    vec![r1, r2]
                } else {
                    vec![r2, r1]
                }
            }
        }
    }

    /// The residue of 1/2.
    #[inline]
    pub(crate) fn half(&self) -> u64 {
        (self.q + 1) >> 1
    }
}
