// SPDX-License-Identifier: Apache-2.0

//! Quadratic fields `K = Q(√D)`: discriminant, integral basis, splitting of
//! rational primes and the fundamental unit.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{factor_u64, is_prime_u64, isqrt_u64, kronecker};
use crate::error::{domain, Error, Result};
use crate::residue::PreClCache;

/// Which generator of the ring of integers is used as `τ_D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TauKind {
    /// `τ = √D`, for `D ≡ 2, 3 (mod 4)`.
    SqrtD,
    /// `τ = (1 + √D)/2`, for `D ≡ 1 (mod 4)`.
    HalfOnePlusSqrtD,
}

/// How a rational prime decomposes in `O_K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

/// Largest `|D|` accepted; keeps `4D` and the residue arithmetic in range.
pub const MAX_ABS_D: i64 = 1 << 40;

/// A quadratic field, identified by its squarefree radicand `D`.
///
/// The class number and the fundamental unit are computed lazily and cached;
/// the caches are safe to populate from several threads.
#[derive(Clone)]
pub struct QuadField {
    d: i64,
    disc: i64,
    tau_kind: TauKind,
    pub(crate) class_number: OnceLock<u64>,
    pub(crate) precl_cache: PreClCache,
    unit: OnceLock<std::result::Result<FundamentalUnit, Error>>,
}

impl PartialEq for QuadField {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d
    }
}

impl Eq for QuadField {}

impl fmt::Debug for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuadField")
            .field("d", &self.d)
            .field("disc", &self.disc)
            .field("tau_kind", &self.tau_kind)
            .finish()
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.d)
    }
}

impl QuadField {
    /// The field `Q(√D)` for squarefree `D ∉ {0, 1}`.
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return domain(format!("D = {d} does not define a quadratic field"));
        }
        if d.unsigned_abs() > MAX_ABS_D as u64 {
            return domain(format!("|D| = {} exceeds the supported bound 2^40", d.unsigned_abs()));
        }
        if let Some((p, _)) = factor_u64(d.unsigned_abs()).into_iter().find(|&(_, e)| e > 1) {
            return domain(format!("D = {d} is not squarefree ({p}^2 divides it)"));
        }
        let (disc, tau_kind) =
            if d.rem_euclid(4) == 1 { (d, TauKind::HalfOnePlusSqrtD) } else { (4 * d, TauKind::SqrtD) };
        Ok(QuadField {
            d,
            disc,
            tau_kind,
            class_number: OnceLock::new(),
            precl_cache: PreClCache::default(),
            unit: OnceLock::new(),
        })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// The field discriminant `Δ_K`.
    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn tau_kind(&self) -> TauKind {
        self.tau_kind
    }

    pub fn is_real(&self) -> bool {
        self.d > 0
    }

    /// `(t, n)` with `τ² = t·τ + n`.
    pub fn tau_relation(&self) -> (i64, i64) {
        match self.tau_kind {
            TauKind::SqrtD => (0, self.d),
            TauKind::HalfOnePlusSqrtD => (1, (self.d - 1) / 4),
        }
    }

    /// Kronecker symbol `(Δ_K / n)`.
    pub fn kronecker(&self, n: i64) -> i8 {
        kronecker(self.disc, n)
    }

    /// Splitting type of the prime `p`; composite `p` is a domain error.
    pub fn splitting_type(&self, p: u64) -> Result<SplittingType> {
        if !is_prime_u64(p) {
            return domain(format!("{p} is not prime"));
        }
        Ok(self.splitting_of_prime(p))
    }

    /// Splitting type for a `p` already known to be prime.
    pub(crate) fn splitting_of_prime(&self, p: u64) -> SplittingType {
        match kronecker(self.disc, p as i64) {
            1 => SplittingType::Split,
            -1 => SplittingType::Inert,
            _ => SplittingType::Ramified,
        }
    }

    /// `true` iff no prime factor of `f` splits in `K`.
    pub fn is_split_free(&self, f: u64) -> bool {
        factor_u64(f).iter().all(|&(p, _)| self.splitting_of_prime(p) != SplittingType::Split)
    }

    /// The fundamental unit `ε > 1` of `O_K` (real fields only).
    pub fn fundamental_unit(&self) -> Result<&FundamentalUnit> {
        if !self.is_real() {
            return domain(format!("{self} is imaginary and has no fundamental unit"));
        }
        self.unit.get_or_init(|| FundamentalUnit::compute(self)).as_ref().map_err(Clone::clone)
    }

    /// `δ = 1` if `N(ε) = +1`, `δ = 2` if `N(ε) = -1`.
    pub fn delta_exponent(&self) -> Result<u64> {
        let unit = self.fundamental_unit()?;
        Ok(if unit.norm == 1 { 1 } else { 2 })
    }

    /// `#O_K^×` for imaginary fields.
    pub fn unit_group_size(&self) -> Result<u64> {
        if self.is_real() {
            return domain(format!("{self} is real; its unit group is infinite"));
        }
        Ok(match self.d {
            -3 => 6,
            -1 => 4,
            _ => 2,
        })
    }
}

/// The fundamental unit `ε = (u2 + v2·√D)/2 > 1` of a real quadratic field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FundamentalUnit {
    d: i64,
    #[serde(serialize_with = "crate::experiments::report::ser_display")]
    u2: BigInt,
    #[serde(serialize_with = "crate::experiments::report::ser_display")]
    v2: BigInt,
    norm: i8,
}

/// Continued-fraction steps allowed before giving up.
const MAX_CF_STEPS: usize = 50_000_000;

impl FundamentalUnit {
    fn compute(field: &QuadField) -> Result<Self> {
        let d = field.d;
        let (trace, n) = field.tau_relation();
        let root = isqrt_u64(d as u64) as i64;
        // complete quotient (P + √D)/Q of τ
        let (mut p_cf, mut q_cf): (i64, i64) = match field.tau_kind {
            TauKind::SqrtD => (0, 1),
            TauKind::HalfOnePlusSqrtD => (1, 2),
        };
        let (mut p_prev, mut p_cur) = (BigInt::zero(), BigInt::one());
        let (mut q_prev, mut q_cur) = (BigInt::one(), BigInt::zero());
        let trace_big = BigInt::from(trace);
        let n_big = BigInt::from(n);
        let q_start = q_cf;
        for _ in 0..MAX_CF_STEPS {
            let a = (p_cf + root).div_euclid(q_cf);
            let p_next = a * &p_cur + &p_prev;
            let q_next = a * &q_cur + &q_prev;
            (p_prev, p_cur) = (p_cur, p_next);
            (q_prev, q_cur) = (q_cur, q_next);
            let p_new = a * q_cf - p_cf;
            let q_new = (d - p_new * p_new) / q_cf;
            (p_cf, q_cf) = (p_new, q_new);
            // The convergent has norm ±Q_{k+1}/Q_0, so only a return of the
            // denominator to its start can signal a unit.
            if q_cf != q_start {
                continue;
            }
            // N(p - qτ) = p² - t·pq - n·q²
            let norm = &p_cur * &p_cur - &trace_big * &p_cur * &q_cur - &n_big * &q_cur * &q_cur;
            if norm.abs().is_one() {
                // ε = p - q·τ' = (p - q·t) + q·τ
                let a_coord = &p_cur - &q_cur * &trace_big;
                let b_coord = q_cur.clone();
                let (u2, v2) = match field.tau_kind {
                    TauKind::SqrtD => (a_coord * 2, b_coord * 2),
                    TauKind::HalfOnePlusSqrtD => (a_coord * 2 + &b_coord, b_coord),
                };
                let norm = if norm.is_one() { 1 } else { -1 };
                return Ok(FundamentalUnit { d, u2, v2, norm });
            }
        }
        Err(Error::Resource(format!(
            "fundamental unit of Q(sqrt({d})) not found within {MAX_CF_STEPS} continued-fraction steps"
        )))
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// Rational coordinate `u` of `ε = u + v√D`.
    pub fn u(&self) -> BigRational {
        BigRational::new(self.u2.clone(), BigInt::from(2))
    }

    /// Rational coordinate `v` of `ε = u + v√D`.
    pub fn v(&self) -> BigRational {
        BigRational::new(self.v2.clone(), BigInt::from(2))
    }

    /// `(2u, 2v)`: the integer coordinates of `2ε`.
    pub fn doubled(&self) -> (&BigInt, &BigInt) {
        (&self.u2, &self.v2)
    }

    /// `N(ε) ∈ {+1, -1}`.
    pub fn norm(&self) -> i8 {
        self.norm
    }

    /// Coordinates `(a, b)` with `ε = a + b·τ_D`.
    pub fn tau_coords(&self) -> (BigInt, BigInt) {
        if self.d.rem_euclid(4) == 1 {
            ((&self.u2 - &self.v2) / 2, self.v2.clone())
        } else {
            (&self.u2 / 2, &self.v2 / 2)
        }
    }

    /// `(U_m, V_m)` with `2ε^m = U_m + V_m·√D`.
    pub fn doubled_power(&self, mut m: u64) -> (BigInt, BigInt) {
        let d = BigInt::from(self.d);
        // (x1 + y1√D)/2 · (x2 + y2√D)/2 = (x + y√D)/2
        let mul = |(x1, y1): &(BigInt, BigInt), (x2, y2): &(BigInt, BigInt)| {
            ((x1 * x2 + &d * y1 * y2) / 2, (x1 * y2 + x2 * y1) / 2)
        };
        let mut acc = (BigInt::from(2), BigInt::zero());
        let mut base = (self.u2.clone(), self.v2.clone());
        while m > 0 {
            if m & 1 == 1 {
                acc = mul(&acc, &base);
            }
            m >>= 1;
            if m > 0 {
                base = mul(&base, &base);
            }
        }
        acc
    }

    /// Exact check of `u² - D·v² = N(ε)`, i.e. `u2² - D·v2² = 4·N(ε)`.
    pub fn satisfies_norm_equation(&self) -> bool {
        &self.u2 * &self.u2 - BigInt::from(self.d) * &self.v2 * &self.v2 == BigInt::from(4 * self.norm as i64)
    }

    /// Approximate value, for display.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let u = self.u2.to_f64().unwrap_or(f64::INFINITY);
        let v = self.v2.to_f64().unwrap_or(f64::INFINITY);
        (u + v * (self.d as f64).sqrt()) / 2.0
    }
}

impl fmt::Display for FundamentalUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.u2.is_even() && self.v2.is_even() {
            write!(f, "{} + {}*sqrt({})", &self.u2 / 2, &self.v2 / 2, self.d)
        } else {
            write!(f, "({} + {}*sqrt({}))/2", self.u2, self.v2, self.d)
        }
    }
}
