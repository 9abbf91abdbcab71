// SPDX-License-Identifier: Apache-2.0

//! Arithmetic in `O_K / fO_K` and the pre-class group
//! `PreCl(O_f) = (O_K/fO_K)^× / (Z/fZ)^×`, together with `ψ`, `L` and `ℓ`.
//!
//! Elements are pairs `(a, b)` meaning `a + b·τ_D` reduced mod `f`.

mod precl;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::arith::{factor_u64, gcd_u64, inv_mod, kronecker, lcm_u64, mul_mod};
use crate::error::{domain, Error, Result};
use crate::quadfield::QuadField;

pub(crate) use precl::PreClCache;
pub use precl::{
    precl_presentation, precl_structure, precl_structure_with_budget, prime_power_precl, PreClPresentation,
    PrimePowerPreCl, DEFAULT_ENUMERATION_BUDGET,
};

/// Largest conductor accepted; keeps every product below `2^128`.
pub const MAX_CONDUCTOR: u64 = 1 << 40;

fn check_conductor(f: u64) -> Result<()> {
    if f == 0 {
        return domain("conductor must be at least 1");
    }
    if f > MAX_CONDUCTOR {
        return domain(format!("conductor {f} exceeds the supported bound 2^40"));
    }
    Ok(())
}

/// The ring `O_K / fO_K` in the basis `{1, τ_D}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueRing {
    d: i64,
    disc: i64,
    f: u64,
    // τ² = t·τ + n, with n reduced mod f
    t: u64,
    n: u64,
}

impl ResidueRing {
    pub fn new(field: &QuadField, f: u64) -> Result<Self> {
        check_conductor(f)?;
        let (t, n) = field.tau_relation();
        Ok(ResidueRing { d: field.d(), disc: field.disc(), f, t: t as u64, n: n.rem_euclid(f as i64) as u64 })
    }

    pub fn modulus(&self) -> u64 {
        self.f
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn element(&self, a: i64, b: i64) -> ResidueElement {
        let f = self.f as i64;
        ResidueElement { ring: *self, a: a.rem_euclid(f) as u64, b: b.rem_euclid(f) as u64 }
    }

    pub fn element_big(&self, a: &BigInt, b: &BigInt) -> ResidueElement {
        let f = BigInt::from(self.f);
        let reduce = |x: &BigInt| x.mod_floor(&f).to_u64().expect("residue below modulus");
        ResidueElement { ring: *self, a: reduce(a), b: reduce(b) }
    }

    pub fn one(&self) -> ResidueElement {
        self.element(1, 0)
    }

    pub fn tau(&self) -> ResidueElement {
        self.element(0, 1)
    }

    /// `√D` in the `τ` basis: `τ` itself or `2τ − 1`.
    pub fn sqrt_d(&self) -> ResidueElement {
        if self.t == 0 {
            self.element(0, 1)
        } else {
            self.element(-1, 2)
        }
    }

    pub(crate) fn mul_raw(&self, x: (u64, u64), y: (u64, u64)) -> (u64, u64) {
        let f = self.f as u128;
        let (a, b, c, d) = (x.0 as u128, x.1 as u128, y.0 as u128, y.1 as u128);
        let bd = b * d % f;
        let rational = (a * c + bd * self.n as u128) % f;
        let tau = (a * d + b * c + bd * self.t as u128) % f;
        (rational as u64, tau as u64)
    }

    pub(crate) fn pow_raw(&self, mut x: (u64, u64), mut n: u64) -> (u64, u64) {
        let mut acc = (1 % self.f, 0);
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul_raw(acc, x);
            }
            x = self.mul_raw(x, x);
            n >>= 1;
        }
        acc
    }

    /// `N(a + bτ) = a² + t·ab − n·b²` mod `f`.
    pub(crate) fn norm_raw(&self, a: u64, b: u64) -> u64 {
        let f = self.f as u128;
        let (a, b) = (a as u128, b as u128);
        let neg_n = (f - self.n as u128) % f;
        ((a * a + self.t as u128 * a % f * b + neg_n * (b * b % f)) % f) as u64
    }

    /// `ψ(f) = #PreCl(O_f)`.
    pub fn psi(&self) -> u64 {
        factor_u64(self.f).into_iter().map(|(p, k)| psi_prime_power_disc(self.disc, p, k)).product()
    }

    /// Canonical representative `(a', b')` of the PreCl class of the unit
    /// `a + bτ`: the lexicographically least `(b', a')` among `c·(a + bτ)`
    /// with `gcd(c, f) = 1`.
    pub(crate) fn canonical(&self, a: u64, b: u64) -> (u64, u64) {
        let f = self.f;
        if b == 0 {
            return (1 % f, 0);
        }
        let g = gcd_u64(b, f);
        let m = f / g;
        let c0 = inv_mod(b / g % m, m).expect("b/g is a unit modulo f/g");
        if radical_divides(g, m) {
            // every lift c0 + t·m is prime to f, and a is prime to g
            return (mul_mod(c0, a, m), g);
        }
        let best = (0..g)
            .map(|t| c0 + t * m)
            .filter(|&c| gcd_u64(c, f) == 1)
            .map(|c| mul_mod(c, a, f))
            .min()
            .expect("some lift of c0 is prime to f");
        (best, g)
    }
}

/// Every prime factor of `g` divides `m`.
fn radical_divides(mut g: u64, m: u64) -> bool {
    loop {
        let d = gcd_u64(g, m);
        if d == 1 {
            return g == 1;
        }
        while g.is_multiple_of(d) {
            g /= d;
        }
    }
}

fn psi_prime_power_disc(disc: i64, p: u64, k: u32) -> u64 {
    let below = p.pow(k - 1);
    match kronecker(disc, p as i64) {
        1 => below * (p - 1),
        -1 => below * (p + 1),
        _ => below * p,
    }
}

/// `a + b·τ_D` in `O_K / fO_K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueElement {
    ring: ResidueRing,
    a: u64,
    b: u64,
}

impl ResidueElement {
    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn modulus(&self) -> u64 {
        self.ring.f
    }

    pub fn norm(&self) -> u64 {
        self.ring.norm_raw(self.a, self.b)
    }

    pub fn is_unit(&self) -> bool {
        gcd_u64(self.norm(), self.ring.f) == 1
    }

    /// Lies in the image of `Z`.
    pub fn is_rational(&self) -> bool {
        self.b == 0
    }

    fn raw(&self) -> (u64, u64) {
        (self.a, self.b)
    }

    fn with(&self, (a, b): (u64, u64)) -> Self {
        ResidueElement { ring: self.ring, a, b }
    }

    pub fn mul(&self, other: &ResidueElement) -> Result<ResidueElement> {
        if self.ring != other.ring {
            return domain(format!(
                "modulus mismatch: {} mod {} in Q(sqrt({})) vs {} mod {} in Q(sqrt({}))",
                self, self.ring.f, self.ring.d, other, other.ring.f, other.ring.d
            ));
        }
        Ok(self.with(self.ring.mul_raw(self.raw(), other.raw())))
    }

    pub fn pow(&self, n: u64) -> ResidueElement {
        self.with(self.ring.pow_raw(self.raw(), n))
    }
}

impl fmt::Display for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*tau", self.a, self.b)
    }
}

pub fn res_mul(x: &ResidueElement, y: &ResidueElement) -> Result<ResidueElement> {
    x.mul(y)
}

pub fn res_pow(x: &ResidueElement, n: u64) -> ResidueElement {
    x.pow(n)
}

/// A class in `PreCl(O_f)`, represented by a unit of `O_K / fO_K`.
/// Equality is equality of classes.
#[derive(Debug, Clone, Copy)]
pub struct PreClElement {
    rep: ResidueElement,
    canonical: bool,
}

impl PreClElement {
    pub fn new(rep: ResidueElement) -> Result<Self> {
        if !rep.is_unit() {
            return domain(format!("{rep} is not a unit modulo {}", rep.modulus()));
        }
        Ok(PreClElement { rep, canonical: false })
    }

    pub fn rep(&self) -> &ResidueElement {
        &self.rep
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// Canonical `(a, b)` of the class.
    pub fn label(&self) -> (u64, u64) {
        if self.canonical {
            return self.rep.raw();
        }
        self.rep.ring.canonical(self.rep.a, self.rep.b)
    }

    pub fn canonicalize(&self) -> PreClElement {
        PreClElement { rep: self.rep.with(self.label()), canonical: true }
    }

    /// The class of an integer prime to `f`.
    pub fn is_identity(&self) -> bool {
        self.rep.is_rational()
    }

    pub fn mul(&self, other: &PreClElement) -> Result<PreClElement> {
        Ok(PreClElement { rep: self.rep.mul(&other.rep)?, canonical: false })
    }

    pub fn pow(&self, n: u64) -> PreClElement {
        PreClElement { rep: self.rep.pow(n), canonical: false }
    }
}

impl PartialEq for PreClElement {
    fn eq(&self, other: &Self) -> bool {
        self.rep.ring == other.rep.ring && self.label() == other.label()
    }
}

impl Eq for PreClElement {}

/// Order of `x` in `PreCl(O_f)`, by descent through the divisors of `ψ(f)`.
pub fn precl_order(x: &PreClElement) -> u64 {
    let ring = x.rep.ring;
    let mut n = ring.psi();
    for (q, _) in factor_u64(n) {
        while n.is_multiple_of(q) && ring.pow_raw(x.rep.raw(), n / q).1 == 0 {
            n /= q;
        }
    }
    n
}

/// `ψ(p^k) = p^k − (Δ_K/p)·p^(k−1)`.
pub fn psi_prime_power(field: &QuadField, p: u64, k: u32) -> u64 {
    psi_prime_power_disc(field.disc(), p, k)
}

/// `ψ(f) = f ∏_{p | f} (1 − (Δ_K/p)/p)`.
pub fn psi(field: &QuadField, f: u64) -> Result<u64> {
    check_conductor(f)?;
    Ok(factor_u64(f).into_iter().map(|(p, k)| psi_prime_power(field, p, k)).product())
}

/// `L(f) = lcm{ψ(p^k) : p^k ∥ f}`.
pub fn big_l(field: &QuadField, f: u64) -> Result<u64> {
    check_conductor(f)?;
    Ok(factor_u64(f).into_iter().fold(1, |acc, (p, k)| lcm_u64(acc, psi_prime_power(field, p, k))))
}

/// The class generating the image `𝒰_f` of `O_K^×` in `PreCl(O_f)`: `ε` for
/// real fields, `τ` for `D ∈ {−1, −3}` (a primitive 4th or 6th root of unity)
/// and `1` otherwise.
pub fn unit_image(field: &QuadField, f: u64) -> Result<PreClElement> {
    let ring = ResidueRing::new(field, f)?;
    let rep = if field.is_real() {
        let (a, b) = field.fundamental_unit()?.tau_coords();
        ring.element_big(&a, &b)
    } else if matches!(field.d(), -1 | -3) {
        ring.tau()
    } else {
        ring.one()
    };
    PreClElement::new(rep)
}

/// `ℓ(f) = #𝒰_f`. Real fields: the least `ℓ` with `ε^ℓ ∈ O_f`, found by
/// iterating multiplication by `ε` mod `f`. Imaginary fields: the order of
/// the root-of-unity class.
pub fn ell(field: &QuadField, f: u64) -> Result<u64> {
    let image = unit_image(field, f)?;
    if !field.is_real() {
        return Ok(precl_order(&image));
    }
    let ring = *image.rep.ring();
    let eps = image.rep.raw();
    let bound = 2 * ring.psi();
    let mut x = eps;
    for l in 1..=bound {
        if x.1 == 0 {
            return Ok(l);
        }
        x = ring.mul_raw(x, eps);
    }
    Err(Error::Invariant(format!("no power of epsilon up to {bound} lies in O_{f} for {field}")))
}

#[cfg(test)]
mod tests;
