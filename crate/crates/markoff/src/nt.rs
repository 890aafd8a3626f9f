//! Integer factorization, Euler phi, primitive-root testing, and discrete
//! logarithms in `F_q^*`.
//!
//! Factoring is trial division up to 10⁶ followed by Brent's variant of
//! Pollard rho with recursive splitting; every reported prime passes a
//! deterministic Miller–Rabin check. The discrete log is generic
//! Pohlig–Hellman: baby-step/giant-step inside each prime-order subgroup
//! (switching to Pollard rho for logs past a table cap) and CRT
//! recombination.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::ff::PrimeField;
use crate::{Error, Result};

/// Trial-division ceiling used by [`factor`] before rho splitting takes over.
pub const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// Baby-step table cap; larger prime-order subgroups use rho-for-logs.
const BSGS_TABLE_CAP: u64 = 1 << 26;

// --------------------------------------------------------------------------
// primality and small primes
// --------------------------------------------------------------------------

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller–Rabin over the 12-prime base set (valid for all
/// 64-bit inputs).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes `≤ limit` by sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
    }
    primes
}

fn trial_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_DIVISION_BOUND))
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    a %= m;
    let mut acc = 1u64 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` mod `m` for coprime inputs (extended Euclid).
fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    debug_assert_eq!(old_r, 1, "inputs must be coprime");
    old_s.rem_euclid(m as i128) as u64
}

// --------------------------------------------------------------------------
// factorization
// --------------------------------------------------------------------------

/// A complete prime factorization `n = ∏ pᵢ^eᵢ` with strictly increasing
/// primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// The `(prime, exponent)` pairs, primes strictly increasing.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// `φ(n) = ∏ pᵢ^(eᵢ−1)·(pᵢ−1)`.
    pub fn euler_phi(&self) -> u64 {
        let mut phi = 1u64;
        for &(p, e) in &self.factors {
            phi *= p - 1;
            for _ in 1..e {
                phi *= p;
            }
        }
        phi
    }
}

/// Complete factorization of `n ≥ 1`.
pub fn factor(n: u64) -> Factorization {
    assert!(n >= 1, "factor(0) is undefined");
    cost::record_factor();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut m = n;

    if m > 1 && m.is_multiple_of(2) {
        let tz = m.trailing_zeros();
        factors.push((2, tz));
        m >>= tz;
    }

    // Trial division, bailing out as soon as the cofactor is certified prime.
    if m > 1 && !is_prime(m) {
        for &p in trial_primes().iter().skip(1) {
            if p * p > m {
                break;
            }
            if m.is_multiple_of(p) {
                let mut e = 0u32;
                while m.is_multiple_of(p) {
                    m /= p;
                    e += 1;
                }
                factors.push((p, e));
                if m == 1 || is_prime(m) {
                    break;
                }
            }
        }
    }

    if m > 1 {
        if is_prime(m) {
            factors.push((m, 1));
        } else {
            let mut parts = Vec::new();
            split_composite(m, &mut parts);
            parts.sort_unstable();
            let mut it = parts.into_iter().peekable();
            while let Some(p) = it.next() {
                let mut e = 1u32;
                while it.peek() == Some(&p) {
                    it.next();
                    e += 1;
                }
                factors.push((p, e));
            }
        }
    }

    debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
    debug_assert_eq!(
        factors
            .iter()
            .fold(1u128, |acc, &(p, e)| acc * (p as u128).pow(e)),
        n as u128
    );
    Factorization { n, factors }
}

fn split_composite(n: u64, out: &mut Vec<u64>) {
    if is_prime(n) {
        out.push(n);
        return;
    }
    let mut c = 1u64;
    let d = loop {
        let d = pollard_brent(n, c);
        if d > 1 && d < n {
            break d;
        }
        c += 1;
    };
    split_composite(d, out);
    split_composite(n / d, out);
}

/// Brent's cycle variant of Pollard rho; returns a factor of `n` (possibly
/// `n` itself on a failed round — callers retry with another `c`).
fn pollard_brent(n: u64, c: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let step = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
    let mut y = 2u64;
    let mut g = 1u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut x = 0u64;
    let mut ys = 0u64;
    const BATCH: u64 = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = step(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += BATCH;
        }
        r <<= 1;
    }
    if g == n {
        // replay the last batch one step at a time
        loop {
            ys = step(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    g
}

/// The part of a factorization reachable with primes `≤ bound`, plus the
/// unfactored cofactor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFactorization {
    n: u64,
    found: Vec<(u64, u32)>,
    cofactor: u64,
    bound: u64,
}

impl PartialFactorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn found(&self) -> &[(u64, u32)] {
        &self.found
    }

    /// Unfactored part; every prime dividing it exceeds the bound.
    pub fn cofactor(&self) -> u64 {
        self.cofactor
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Upper bound on the chance that [`probable_primitive_root`] accepts a
    /// uniformly random non-generator: `1 − (1 − 1/B)^k`, where `k` bounds
    /// the number of prime factors of the cofactor (each exceeds `B`).
    pub fn miss_probability_bound(&self) -> f64 {
        if self.cofactor == 1 {
            return 0.0;
        }
        let b = self.bound.max(2) as f64;
        let k = ((self.cofactor as f64).ln() / b.ln()).ceil();
        1.0 - (1.0 - 1.0 / b).powf(k)
    }
}

/// Finds all prime factors `≤ bound` of `n` by trial division.
pub fn factor_up_to(n: u64, bound: u64) -> PartialFactorization {
    assert!(n >= 1);
    let mut found: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    let primes: Vec<u64> = if bound <= TRIAL_DIVISION_BOUND {
        let all = trial_primes();
        let cut = all.partition_point(|&p| p <= bound);
        all[..cut].to_vec()
    } else {
        primes_up_to(bound)
    };
    for &p in &primes {
        if (p as u128) * (p as u128) > m as u128 {
            break;
        }
        if m.is_multiple_of(p) {
            let mut e = 0u32;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            found.push((p, e));
        }
    }
    // a surviving cofactor below the bound is prime (no factor up to its root)
    if m > 1 && m <= bound {
        found.push((m, 1));
        m = 1;
    }
    PartialFactorization {
        n,
        found,
        cofactor: m,
        bound,
    }
}

// --------------------------------------------------------------------------
// orders and primitive roots
// --------------------------------------------------------------------------

/// Whether `λ` generates `F_q^*`: `λ^((q−1)/p) ≠ 1` for every prime
/// `p | q − 1`.
pub fn is_primitive_root(k: &PrimeField, lambda: u64, f: &Factorization) -> bool {
    debug_assert_eq!(f.n(), k.q() - 1);
    if lambda == 0 {
        return false;
    }
    f.primes()
        .all(|p| k.pow(lambda, (f.n() / p) as u128) != 1)
}

/// One-sided primitive-root test from a partial factorization: `false` means
/// definitely not a generator; `true` means no prime below the bound rules
/// it out.
pub fn probable_primitive_root(k: &PrimeField, lambda: u64, pf: &PartialFactorization) -> bool {
    debug_assert_eq!(pf.n(), k.q() - 1);
    if lambda == 0 {
        return false;
    }
    pf.found()
        .iter()
        .all(|&(p, _)| k.pow(lambda, (pf.n() / p) as u128) != 1)
}

/// Least `n ≥ 1` with `λⁿ = 1`, computed by stripping primes of `q − 1`.
pub fn multiplicative_order(k: &PrimeField, lambda: u64, f: &Factorization) -> u64 {
    debug_assert_eq!(f.n(), k.q() - 1);
    assert!(lambda != 0, "zero is not in the multiplicative group");
    let mut order = f.n();
    for &(p, e) in f.factors() {
        for _ in 0..e {
            if order.is_multiple_of(p) && k.pow(lambda, (order / p) as u128) == 1 {
                order /= p;
            } else {
                break;
            }
        }
    }
    debug_assert_eq!(k.pow(lambda, order as u128), 1);
    order
}

// --------------------------------------------------------------------------
// discrete logarithm
// --------------------------------------------------------------------------

/// Least `n ≥ 0` with `baseⁿ = target`, or [`Error::NoDiscreteLog`] when the
/// target lies outside `⟨base⟩`. Pohlig–Hellman over the factorization of
/// `q − 1`.
pub fn dlp(k: &PrimeField, base: u64, target: u64, f: &Factorization) -> Result<u64> {
    debug_assert_eq!(f.n(), k.q() - 1);
    cost::record_dlp();
    if base == 0 || target == 0 {
        return Err(Error::NoDiscreteLog(target));
    }
    let order = multiplicative_order(k, base, f);
    // F_q^* is cyclic, so ⟨base⟩ is exactly the elements of order dividing ord(base)
    if k.pow(target, order as u128) != 1 {
        return Err(Error::NoDiscreteLog(target));
    }

    let mut residue = 0u64;
    let mut modulus = 1u64;
    for &(p, _) in f.factors() {
        let mut pe = 1u64;
        let mut e = 0u32;
        let mut o = order;
        while o.is_multiple_of(p) {
            o /= p;
            pe *= p;
            e += 1;
        }
        if e == 0 {
            continue;
        }
        let g_i = k.pow(base, (order / pe) as u128);
        let h_i = k.pow(target, (order / pe) as u128);
        let x_i = dlog_prime_power(k, g_i, h_i, p, e)?;
        (residue, modulus) = crt_combine(residue, modulus, x_i, pe);
    }
    debug_assert_eq!(k.pow(base, residue as u128), target);
    Ok(residue)
}

/// x ≡ r1 (mod m1), x ≡ r2 (mod m2) for coprime moduli.
fn crt_combine(r1: u64, m1: u64, r2: u64, m2: u64) -> (u64, u64) {
    let inv = mod_inverse(m1 % m2, m2);
    let diff = (r2 + m2 - r1 % m2) % m2;
    let t = mul_mod(diff, inv, m2);
    ((r1 as u128 + m1 as u128 * t as u128) as u64, m1 * m2)
}

/// Discrete log in a subgroup of order `p^e`, digit by digit in base `p`.
fn dlog_prime_power(k: &PrimeField, g: u64, h: u64, p: u64, e: u32) -> Result<u64> {
    let gamma = k.pow(g, p.pow(e - 1) as u128);
    let g_inv = k.inv(g).expect("subgroup generator is nonzero");
    let mut x = 0u64;
    for j in 0..e {
        let rest = k.mul(h, k.pow(g_inv, x as u128));
        let target = k.pow(rest, p.pow(e - 1 - j) as u128);
        let digit = dlog_prime_order(k, gamma, target, p)?;
        x += digit * p.pow(j);
    }
    Ok(x)
}

fn dlog_prime_order(k: &PrimeField, g: u64, h: u64, p: u64) -> Result<u64> {
    dlog_prime_order_capped(k, g, h, p, BSGS_TABLE_CAP)
}

/// Log in the order-`p` subgroup generated by `g` (`p` prime, or `g = 1`).
fn dlog_prime_order_capped(k: &PrimeField, g: u64, h: u64, p: u64, cap: u64) -> Result<u64> {
    if g == 1 {
        return if h == 1 {
            Ok(0)
        } else {
            Err(Error::NoDiscreteLog(h))
        };
    }
    if h == 1 {
        return Ok(0);
    }
    let mut m = p.isqrt();
    if m * m < p {
        m += 1;
    }
    if m <= cap {
        bsgs(k, g, h, p, m)
    } else {
        pollard_rho_log(k, g, h, p)
    }
}

fn bsgs(k: &PrimeField, g: u64, h: u64, p: u64, m: u64) -> Result<u64> {
    let mut table: HashMap<u64, u64> = HashMap::with_capacity(m as usize);
    let mut e = 1u64;
    for j in 0..m {
        table.entry(e).or_insert(j);
        e = k.mul(e, g);
    }
    let stride = k
        .inv(k.pow(g, m as u128))
        .expect("subgroup generator is nonzero");
    let mut gamma = h;
    for i in 0..=m {
        if let Some(&j) = table.get(&gamma) {
            return Ok((i * m + j) % p);
        }
        gamma = k.mul(gamma, stride);
    }
    Err(Error::NoDiscreteLog(h))
}

/// Pollard rho for logs (three-way partition walk) in the order-`p`
/// subgroup. Deterministic restart schedule; only reached past the BSGS cap.
fn pollard_rho_log(k: &PrimeField, g: u64, h: u64, p: u64) -> Result<u64> {
    for attempt in 1..=64u64 {
        let a0 = attempt.wrapping_mul(0x9E3779B97F4A7C15) % p;
        let b0 = attempt.wrapping_mul(0xD1B54A32D192ED03) % p;
        let start = k.mul(k.pow(g, a0 as u128), k.pow(h, b0 as u128));

        let advance = |x: u64, a: u64, b: u64| -> (u64, u64, u64) {
            match x % 3 {
                0 => (k.mul(x, x), mul_mod(2, a, p), mul_mod(2, b, p)),
                1 => (k.mul(x, g), (a + 1) % p, b),
                _ => (k.mul(x, h), a, (b + 1) % p),
            }
        };

        let (mut x1, mut a1, mut b1) = (start, a0, b0);
        let (mut x2, mut a2, mut b2) = (start, a0, b0);
        loop {
            (x1, a1, b1) = advance(x1, a1, b1);
            (x2, a2, b2) = advance(x2, a2, b2);
            (x2, a2, b2) = advance(x2, a2, b2);
            if x1 == x2 {
                break;
            }
        }
        // g^a1 h^b1 = g^a2 h^b2  →  n·(b1 − b2) ≡ a2 − a1 (mod p)
        let db = (b1 + p - b2) % p;
        if db == 0 {
            continue;
        }
        let da = (a2 + p - a1) % p;
        let n = mul_mod(da, mod_inverse(db, p), p);
        if k.pow(g, n as u128) == h {
            return Ok(n);
        }
    }
    Err(Error::NoDiscreteLog(h))
}

// --------------------------------------------------------------------------
// cost accounting
// --------------------------------------------------------------------------

/// Thread-local tallies of factorization and discrete-log invocations, for
/// checking the cost profile of higher-level pipelines.
pub mod cost {
    use std::cell::Cell;

    thread_local! {
        static FACTOR_CALLS: Cell<u64> = const { Cell::new(0) };
        static DLP_CALLS: Cell<u64> = const { Cell::new(0) };
    }

    pub fn reset() {
        FACTOR_CALLS.with(|c| c.set(0));
        DLP_CALLS.with(|c| c.set(0));
    }

    pub fn factor_calls() -> u64 {
        FACTOR_CALLS.with(|c| c.get())
    }

    pub fn dlp_calls() -> u64 {
        DLP_CALLS.with(|c| c.get())
    }

    pub(crate) fn record_factor() {
        FACTOR_CALLS.with(|c| c.set(c.get() + 1));
    }

    pub(crate) fn record_dlp() {
        DLP_CALLS.with(|c| c.set(c.get() + 1));
    }
}
