// SPDX-License-Identifier: Apache-2.0

//! Jacobi and Kronecker symbols.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Jacobi symbol `(a/n)` for odd positive `n`, over `u128`.
fn jacobi_u128(a: u128, n: u128) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut a = a % n;
    let mut n = n;
    let mut acc = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            acc = -acc;
        }
        // reciprocity
        if a % 4 == 3 && n % 4 == 3 {
            acc = -acc;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        acc
    } else {
        0
    }
}

/// Kronecker symbol `(a/2)`.
fn kronecker_two(a: i128) -> i8 {
    if a % 2 == 0 {
        0
    } else {
        match a.rem_euclid(8) {
            1 | 7 => 1,
            _ => -1,
        }
    }
}

/// Kronecker symbol `(a/n)` for arbitrary integers.
///
/// Completely multiplicative in both arguments; `(a/0) = 1` iff `a = ±1`,
/// and `(a/-1)` is the sign of `a` (with `(0/-1) = 1`).
pub fn kronecker(a: i64, n: i64) -> i8 {
    let a = a as i128;
    let mut n = n as i128;
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut acc = 1i8;
    if n < 0 {
        n = -n;
        if a < 0 {
            acc = -acc;
        }
    }
    let tz = n.trailing_zeros();
    if tz > 0 {
        let k2 = kronecker_two(a);
        if k2 == 0 {
            return 0;
        }
        if tz % 2 == 1 {
            acc *= k2;
        }
        n >>= tz;
    }
    let a_mod = a.rem_euclid(n) as u128;
    acc * jacobi_u128(a_mod, n as u128)
}

/// Jacobi symbol over big integers; `n` must be odd and positive.
pub(crate) fn jacobi_big(a: &BigInt, n: &BigInt) -> i8 {
    debug_assert!(n.is_positive() && n.is_odd());
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut acc = 1i8;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let n8 = (&n % 8u32).to_u32().unwrap_or(0);
        if tz % 2 == 1 && (n8 == 3 || n8 == 5) {
            acc = -acc;
        }
        let a4 = (&a % 4u32).to_u32().unwrap_or(0);
        if a4 == 3 && n8 % 4 == 3 {
            acc = -acc;
        }
        std::mem::swap(&mut a, &mut n);
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        acc
    } else {
        0
    }
}

/// Kronecker symbol `(a/n)` for big integers.
pub fn kronecker_big(a: &BigInt, n: &BigInt) -> i8 {
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut acc = 1i8;
    let mut n = n.clone();
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            acc = -acc;
        }
    }
    let tz = n.trailing_zeros().unwrap_or(0);
    if tz > 0 {
        let a8 = a.mod_floor(&BigInt::from(8)).to_i128().unwrap_or(0);
        let k2 = kronecker_two(a8);
        if k2 == 0 {
            return 0;
        }
        if tz % 2 == 1 {
            acc *= k2;
        }
        n >>= tz;
    }
    acc * jacobi_big(a, &n)
}
