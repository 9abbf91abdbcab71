// SPDX-License-Identifier: Apache-2.0

//! Integer factorization: trial division up to 10^6, then Pollard rho with
//! Brent's cycle detection.
//!
//! Rho runs with fixed seeds (`x0 = 2`, `c = 1, 2, 3, ...`) so that the
//! output for a given input never depends on timing or thread scheduling,
//! except when a time budget cuts the search short.

use std::sync::OnceLock;
use std::time::Instant;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::prime::{is_prime_u64, primality, Primality};
use super::{gcd_u64, mul_mod, sieve_primes};

/// Trial division bound.
pub const TRIAL_BOUND: u64 = 1_000_000;

fn trial_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve_primes(TRIAL_BOUND))
}

/// One Brent rho attempt on odd composite `n < 2^64`.
fn rho_brent_u64(n: u64, c: u64) -> Option<u64> {
    const BATCH: u64 = 128;
    let f = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut x;
    let mut ys;
    let mut g;
    loop {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        loop {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += BATCH;
            if k >= r || g != 1 {
                break;
            }
        }
        r *= 2;
        if g != 1 || r > 1 << 26 {
            break;
        }
    }
    if g == n {
        // backtrack one step at a time
        loop {
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g != 1 {
                break;
            }
        }
    }
    (g != 1 && g != n).then_some(g)
}

/// Splits an odd composite `n < 2^64` into a nontrivial factor.
fn split_u64(n: u64) -> u64 {
    let r = (n as f64).sqrt() as u64;
    for cand in [r.saturating_sub(1), r, r + 1] {
        if cand > 1 && cand.checked_mul(cand) == Some(n) {
            return cand;
        }
    }
    for c in 1.. {
        if let Some(d) = rho_brent_u64(n, c) {
            return d;
        }
    }
    unreachable!()
}

fn push_factor(out: &mut Vec<(u64, u32)>, p: u64, e: u32) {
    if let Some(entry) = out.iter_mut().find(|(q, _)| *q == p) {
        entry.1 += e;
    } else {
        out.push((p, e));
    }
}

fn factor_cofactor_u64(n: u64, out: &mut Vec<(u64, u32)>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        push_factor(out, n, 1);
        return;
    }
    let d = split_u64(n);
    factor_cofactor_u64(d, out);
    factor_cofactor_u64(n / d, out);
}

/// Complete factorization of a machine integer as sorted `(prime, exponent)`
/// pairs. `factor_u64(1)` is empty; `n = 0` has no factorization and returns
/// an empty list as well, so callers must reject it first.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    for &p in trial_primes() {
        if p * p > n {
            break;
        }
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    factor_cofactor_u64(n, &mut out);
    out.sort_unstable();
    out
}

/// Factorization possibly cut short by a time budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFactorization {
    /// Prime factors found so far, sorted, with the primality verdict of each.
    pub factors: Vec<(BigUint, u32, Primality)>,
    /// Composite parts that could not be split within the budget.
    pub unfactored: Vec<BigUint>,
}

impl PartialFactorization {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_empty()
    }
}

fn rho_brent_big(n: &BigUint, c: u64, deadline: Option<Instant>) -> Option<BigUint> {
    const BATCH: u64 = 256;
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let abs_diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut x;
    let mut ys;
    let mut g;
    loop {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        loop {
            ys = y.clone();
            for _ in 0..BATCH.min(r - k) {
                y = f(&y);
                q = q * abs_diff(&x, &y) % n;
            }
            g = q.gcd(n);
            k += BATCH;
            if k >= r || !g.is_one() {
                break;
            }
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return None;
            }
        }
        r *= 2;
        if !g.is_one() {
            break;
        }
        if deadline.is_some_and(|d| Instant::now() >= d) {
            return None;
        }
    }
    if g == *n {
        loop {
            ys = f(&ys);
            g = abs_diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (g != *n).then_some(g)
}

fn isqrt_exact(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Factors `n` by trial division then rho, stopping rho work once `deadline`
/// passes. Without a deadline the factorization is always complete.
pub fn factor_with_deadline(n: &BigUint, deadline: Option<Instant>) -> PartialFactorization {
    let mut found: Vec<(BigUint, u32, Primality)> = Vec::new();
    let mut unfactored = Vec::new();
    if n.is_zero() || n.is_one() {
        return PartialFactorization { factors: found, unfactored };
    }
    let mut rest = n.clone();
    if let Some(small) = rest.to_u64() {
        let factors = factor_u64(small).into_iter().map(|(p, e)| (BigUint::from(p), e, Primality::Prime)).collect();
        return PartialFactorization { factors, unfactored };
    }
    for &p in trial_primes() {
        if (&rest % p).is_zero() {
            let mut e = 0;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            found.push((BigUint::from(p), e, Primality::Prime));
        }
        if rest.to_u64().is_some() {
            break;
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(small) = m.to_u64() {
            for (p, e) in factor_u64(small) {
                merge(&mut found, BigUint::from(p), e, Primality::Prime);
            }
            continue;
        }
        let verdict = primality(&m);
        if verdict.is_prime() {
            merge(&mut found, m, 1, verdict);
            continue;
        }
        if let Some(r) = isqrt_exact(&m) {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        let mut split = None;
        for c in 1u64.. {
            if deadline.is_some_and(|d| Instant::now() >= d) {
                break;
            }
            if let Some(d) = rho_brent_big(&m, c, deadline) {
                split = Some(d);
                break;
            }
        }
        match split {
            Some(d) => {
                let other = &m / &d;
                stack.push(d);
                stack.push(other);
            }
            None => unfactored.push(m),
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    unfactored.sort();
    PartialFactorization { factors: found, unfactored }
}

fn merge(found: &mut Vec<(BigUint, u32, Primality)>, p: BigUint, e: u32, v: Primality) {
    if let Some(entry) = found.iter_mut().find(|(q, _, _)| *q == p) {
        entry.1 += e;
    } else {
        found.push((p, e, v));
    }
}
