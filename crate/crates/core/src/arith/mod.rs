// SPDX-License-Identifier: Apache-2.0

//! Exact integer primitives: factorization, primality, Kronecker symbols and
//! the multiplicative statistics derived from a factorization.

mod factor;
mod kronecker;
mod prime;

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{domain, Result};

pub use factor::{factor_u64, factor_with_deadline, PartialFactorization, TRIAL_BOUND};
pub use kronecker::{kronecker, kronecker_big};
pub use prime::{is_prime, is_prime_u64, primality, Primality};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd_u64(a, b) * b
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

/// Floor of the square root.
pub fn isqrt_u64(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

pub(crate) fn isqrt_big(n: &BigUint) -> BigUint {
    n.sqrt()
}

/// Natural log of `n` without overflowing `f64`; `ln 0` is `-inf`.
pub fn ln_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return n.to_u64().map_or(f64::NEG_INFINITY, |v| (v as f64).ln());
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().expect("64 bits after shift") as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Primes up to and including `limit`.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Smallest-prime-factor table for `0..=limit` (entries 0 and 1 are 0).
pub fn smallest_prime_factors(limit: u64) -> Vec<u32> {
    let limit = limit as usize;
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// A positive integer together with its complete prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInteger {
    value: BigUint,
    factors: Vec<(BigUint, u32)>,
    /// Set when some factor above 2^64 is only a probable prime.
    probable: bool,
}

impl FactoredInteger {
    /// Builds from a factor list, checking every invariant.
    pub fn from_factors(factors: Vec<(BigUint, u32)>) -> Result<Self> {
        let mut value = BigUint::one();
        let mut probable = false;
        for (i, (p, e)) in factors.iter().enumerate() {
            if *e == 0 {
                return domain(format!("exponent of {p} is zero"));
            }
            if i > 0 && factors[i - 1].0 >= *p {
                return domain("primes must be strictly increasing");
            }
            match primality(p) {
                Primality::Composite => return domain(format!("{p} is not prime")),
                Primality::ProbablePrime => probable = true,
                Primality::Prime => {}
            }
            value *= p.pow(*e);
        }
        Ok(FactoredInteger { value, factors, probable })
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    /// `true` when a listed factor is a Baillie-PSW probable prime.
    pub fn is_probable(&self) -> bool {
        self.probable
    }

    /// Ω: prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    /// ω: distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn radical(&self) -> BigUint {
        self.factors.iter().map(|(p, _)| p).product()
    }

    /// τ: number of positive divisors.
    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|(_, e)| *e as u64 + 1).product()
    }

    /// The factors as machine integers, when they all fit.
    pub fn to_u64_factors(&self) -> Option<Vec<(u64, u32)>> {
        self.factors.iter().map(|(p, e)| p.to_u64().map(|p| (p, *e))).collect()
    }
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.factors.iter().map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") }).collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Complete factorization of a positive integer.
pub fn factor(n: &BigUint) -> Result<FactoredInteger> {
    if n.is_zero() {
        return domain("cannot factor 0");
    }
    let partial = factor_with_deadline(n, None);
    debug_assert!(partial.is_complete());
    let probable = partial.factors.iter().any(|(_, _, v)| *v == Primality::ProbablePrime);
    Ok(FactoredInteger {
        value: n.clone(),
        factors: partial.factors.into_iter().map(|(p, e, _)| (p, e)).collect(),
        probable,
    })
}

/// Factorization of a signed machine integer; rejects `n <= 0`.
pub fn factor_i64(n: i64) -> Result<FactoredInteger> {
    if n <= 0 {
        return domain(format!("cannot factor {n}: argument must be positive"));
    }
    factor(&BigUint::from(n as u64))
}

/// Ω(n) for a machine integer.
pub fn big_omega_u64(n: u64) -> u32 {
    factor_u64(n).iter().map(|(_, e)| e).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn factor_rejects_nonpositive() {
        assert!(matches!(factor_i64(0), Err(crate::Error::Domain(_))));
        assert!(matches!(factor_i64(-7), Err(crate::Error::Domain(_))));
        assert!(factor(&BigUint::zero()).is_err());
    }

    #[test]
    fn factored_statistics() {
        let f = factor_i64(720).unwrap();
        assert_eq!(f.to_string(), "2^4 * 3^2 * 5");
        assert_eq!(f.big_omega(), 7);
        assert_eq!(f.omega(), 3);
        assert_eq!(f.radical(), BigUint::from(30u32));
        assert_eq!(f.divisor_count(), 30);
        let one = factor_i64(1).unwrap();
        assert!(one.factors().is_empty());
        assert_eq!(one.to_string(), "1");
    }

    #[test]
    fn from_factors_validates() {
        let ok = FactoredInteger::from_factors(vec![(2u32.into(), 2), (3u32.into(), 1)]).unwrap();
        assert_eq!(ok.value(), &BigUint::from(12u32));
        assert!(FactoredInteger::from_factors(vec![(4u32.into(), 1)]).is_err());
        assert!(FactoredInteger::from_factors(vec![(3u32.into(), 1), (2u32.into(), 1)]).is_err());
        assert!(FactoredInteger::from_factors(vec![(3u32.into(), 0)]).is_err());
    }

    #[test]
    fn helpers() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
        assert_eq!(isqrt_u64(u64::MAX), 4_294_967_295);
        assert_eq!(isqrt_u64(99), 9);
        assert_eq!(sieve_primes(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        let spf = smallest_prime_factors(30);
        assert_eq!(spf[30], 2);
        assert_eq!(spf[29], 29);
        assert_eq!(lcm_u64(4, 6), 12);
    }

    proptest! {
        #[test]
        fn factor_is_idempotent(n in 1u64..u64::MAX) {
            let f = factor(&BigUint::from(n)).unwrap();
            prop_assert_eq!(f.value(), &BigUint::from(n));
            let again = FactoredInteger::from_factors(f.factors().to_vec()).unwrap();
            prop_assert_eq!(&again, &f);
        }

        #[test]
        fn big_omega_at_most_log2(n in 2u64..1_000_000_000_000) {
            let omega = big_omega_u64(n);
            prop_assert!(1u128 << omega <= n as u128);
        }
    }
}
