// SPDX-License-Identifier: Apache-2.0

//! Primality testing.
//!
//! Below 2^64 the Miller-Rabin test with the first twelve prime bases is a
//! proof. Above that we run Baillie-PSW (strong base-2 test plus a strong
//! Lucas test with Selfridge parameters); no counterexample is known, but the
//! verdict is reported as [`Primality::ProbablePrime`].

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::kronecker::jacobi_big;
use super::{isqrt_big, mul_mod, pow_mod};

/// Outcome of a primality test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Primality {
    /// Proven prime (deterministic test).
    Prime,
    /// Passed Baillie-PSW; not proven.
    ProbablePrime,
    Composite,
}

impl Primality {
    pub fn is_prime(self) -> bool {
        !matches!(self, Primality::Composite)
    }
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

const SMALL_PRIMES: [u64; 25] =
    [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

/// Deterministic primality test for machine integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Classifies `n`, proving primality whenever `n < 2^64`.
pub fn primality(n: &BigUint) -> Primality {
    if let Some(small) = n.to_u64() {
        return if is_prime_u64(small) { Primality::Prime } else { Primality::Composite };
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return Primality::Composite;
        }
    }
    if baillie_psw(n) {
        Primality::ProbablePrime
    } else {
        Primality::Composite
    }
}

/// `true` iff `n` is prime (or a Baillie-PSW probable prime above 2^64).
pub fn is_prime(n: &BigUint) -> bool {
    primality(n).is_prime()
}

/// Baillie-PSW test for odd `n` without small factors.
pub(crate) fn baillie_psw(n: &BigUint) -> bool {
    strong_probable_prime(n, &BigUint::from(2u32)) && strong_lucas_probable_prime(n)
}

pub(crate) fn strong_probable_prime(n: &BigUint, base: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    let mut x = base.modpow(&d, n);
    if x == one || x == n_minus_one {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n_minus_one {
            return true;
        }
    }
    false
}

fn is_perfect_square(n: &BigUint) -> bool {
    let r = isqrt_big(n);
    &r * &r == *n
}

/// Strong Lucas probable-prime test, Selfridge method A (P = 1).
pub(crate) fn strong_lucas_probable_prime(n: &BigUint) -> bool {
    if is_perfect_square(n) {
        return false;
    }
    let n_int = BigInt::from_biguint(Sign::Plus, n.clone());
    // Selfridge: first D in 5, -7, 9, -11, ... with (D/n) = -1.
    let mut d_abs: i64 = 5;
    let mut sign: i64 = 1;
    let d = loop {
        let candidate = BigInt::from(sign * d_abs);
        match jacobi_big(&candidate, &n_int) {
            -1 => break sign * d_abs,
            0 => {
                let g = candidate.gcd(&n_int);
                if g != n_int {
                    return false;
                }
            }
            _ => {}
        }
        d_abs += 2;
        sign = -sign;
    };
    let p = BigInt::one();
    let q = BigInt::from((1 - d) / 4);
    let d_big = BigInt::from(d);

    let n_plus_one = n + 1u32;
    let s = n_plus_one.trailing_zeros().unwrap_or(0);
    let k = &n_plus_one >> s;

    let reduce = |x: BigInt| -> BigInt { x.mod_floor(&n_int) };
    let half = |x: BigInt| -> BigInt {
        let x = if x.is_odd() { x + &n_int } else { x };
        (x >> 1usize).mod_floor(&n_int)
    };

    // Left-to-right binary ladder over k computing U_k, V_k, Q^k.
    let mut u = BigInt::zero();
    let mut v = BigInt::from(2);
    let mut qk = BigInt::one();
    let bits = k.bits();
    for i in (0..bits).rev() {
        // double
        u = reduce(&u * &v);
        v = reduce(&v * &v - (&qk << 1usize));
        qk = reduce(&qk * &qk);
        if k.bit(i) {
            let u_next = half(&p * &u + &v);
            let v_next = half(&d_big * &u + &p * &v);
            u = u_next;
            v = v_next;
            qk = reduce(&qk * &q);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = reduce(&v * &v - (&qk << 1usize));
        if v.is_zero() {
            return true;
        }
        qk = reduce(&qk * &qk);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn small_values_match_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime_u64(n), trial_is_prime(n), "n = {n}");
        }
    }

    #[test]
    fn named_examples() {
        assert!(!is_prime_u64(1));
        assert!(is_prime_u64(5741));
        assert!(trial_is_prime(5741));
        // Carmichael number 3 * 11 * 17
        assert!(!is_prime_u64(561));
        assert_eq!(3 * 11 * 17, 561);
    }

    #[test]
    fn strong_pseudoprimes_are_rejected() {
        // strong pseudoprime to the nine prime bases 2..=23
        assert!(!is_prime_u64(3_825_123_056_546_413_051));
        // largest prime below 2^64
        assert!(is_prime_u64(18_446_744_073_709_551_557));
    }

    #[test]
    fn big_mersenne_numbers() {
        let one = BigUint::one();
        for (e, prime) in [(61u32, true), (67, false), (89, true), (107, true), (127, true), (128, false)] {
            let m = (&one << e as usize) - &one;
            let verdict = primality(&m);
            if prime {
                assert_eq!(verdict, if e <= 63 { Primality::Prime } else { Primality::ProbablePrime }, "2^{e}-1");
            } else {
                assert_eq!(verdict, Primality::Composite, "2^{e}-1");
            }
        }
    }

    #[test]
    fn big_semiprimes_are_composite() {
        let p = BigUint::from(18_446_744_073_709_551_557u64);
        let q = BigUint::from(4_294_967_311u64);
        assert_eq!(primality(&(&p * &q)), Primality::Composite);
        assert_eq!(primality(&(&p * &p)), Primality::Composite);
    }

    #[test]
    fn lucas_rejects_base_two_pseudoprimes() {
        // 2047 = 23 * 89 is a strong pseudoprime to base 2 only.
        let n = BigUint::from(2047u32);
        assert!(strong_probable_prime(&n, &BigUint::from(2u32)));
        assert!(!strong_lucas_probable_prime(&n));
        // 5459 = 53 * 103 is a strong Lucas pseudoprime; base 2 rejects it.
        let n = BigUint::from(5459u32);
        assert!(strong_lucas_probable_prime(&n));
        assert!(!strong_probable_prime(&n, &BigUint::from(2u32)));
    }

    proptest! {
        #[test]
        fn bpsw_agrees_with_deterministic_test(n in 101u64..u64::MAX) {
            if n % 2 == 1 && SMALL_PRIMES.iter().all(|p| n % p != 0) {
                prop_assert_eq!(baillie_psw(&BigUint::from(n)), is_prime_u64(n));
            }
        }
    }
}
