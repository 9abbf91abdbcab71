// SPDX-License-Identifier: Apache-2.0

//! Elasticity of the order `O_f`: the sandwich
//! `½ Dav Cl(O_f) ≤ ρ(O_f) ≤ max{1, ½ Dav Cl(O_f) + (3/2) Ω(f)}` for split-free
//! `f`, with `Dav PrinCl ≤ Dav Cl ≤ h_K Dav PrinCl`, and `ρ = ∞` as soon as a
//! prime factor of `f` splits.

mod hfd;

use std::fmt;

use num_rational::Rational64;
use serde::{Serialize, Serializer};

use crate::abelian::{davenport, quotient_structure, AbelianGroup, DavenportResult, DEFAULT_DAVENPORT_BUDGET};
use crate::arith::{big_omega_u64, factor_u64, is_prime_u64};
use crate::classnum::class_number;
use crate::error::{domain, Error, Result};
use crate::experiments::report::{ser_display, FieldId};
use crate::quadfield::{QuadField, SplittingType};
use crate::residue::{ell, precl_presentation, psi, DEFAULT_ENUMERATION_BUDGET};

pub use hfd::{conditions, hfd_check, roskam_condition, roskam_elasticity_cap, HfdCondition, HfdVerdict, Verdict};

/// Budgets for the enumerations behind an elasticity interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElasticityOptions {
    /// Cap on `ψ(p^k)` for explicit PreCl enumeration.
    pub enumeration_budget: u64,
    /// Largest group order for brute-force Davenport constants.
    pub davenport_budget: u64,
}

impl Default for ElasticityOptions {
    fn default() -> Self {
        ElasticityOptions { enumeration_budget: DEFAULT_ENUMERATION_BUDGET, davenport_budget: DEFAULT_DAVENPORT_BUDGET }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpperBound {
    Finite(Rational64),
    Infinite,
}

impl UpperBound {
    pub fn finite(&self) -> Option<Rational64> {
        match self {
            UpperBound::Finite(r) => Some(*r),
            UpperBound::Infinite => None,
        }
    }
}

impl fmt::Display for UpperBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpperBound::Finite(r) => write!(f, "{r}"),
            UpperBound::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for UpperBound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ser_display(self, s)
    }
}

/// Quantities the interval was derived from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    pub class_number: Option<u64>,
    pub psi: u64,
    pub ell: Option<u64>,
    pub big_omega: u32,
    /// Invariant factors of `PrinCl(O_f)`, when enumerated.
    pub princl: Option<AbelianGroup>,
    pub davenport: Option<DavenportResult>,
    /// A split prime dividing `f`, if any.
    pub split_prime: Option<u64>,
    pub notes: Vec<String>,
}

/// `lower ≤ ρ(O_f) ≤ upper`, exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElasticityInterval {
    pub field: FieldId,
    pub conductor: u64,
    #[serde(serialize_with = "ser_display")]
    pub lower: Rational64,
    pub upper: UpperBound,
    /// `ρ(O_f) = ∞`; `lower` is then only the trivial bound 1.
    pub infinite: bool,
    pub diagnostics: Diagnostics,
}

impl ElasticityInterval {
    pub fn is_exact(&self) -> bool {
        self.upper == UpperBound::Finite(self.lower)
    }
}

impl fmt::Display for ElasticityInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.infinite {
            write!(f, "rho(O_{}) = inf", self.conductor)
        } else {
            write!(f, "{} <= rho(O_{}) <= {}", self.lower, self.conductor, self.upper)
        }
    }
}

pub fn princl_structure(field: &QuadField, f: u64) -> Result<AbelianGroup> {
    princl_structure_with_budget(field, f, DEFAULT_ENUMERATION_BUDGET)
}

/// `PrinCl(O_f) ≅ PreCl(O_f) / 𝒰_f`: the PreCl presentation plus one relation
/// killing the unit class.
pub fn princl_structure_with_budget(field: &QuadField, f: u64, budget: u64) -> Result<AbelianGroup> {
    let mut p = precl_presentation(field, f, budget)?;
    p.presentation.add_relation(p.unit_image)?;
    quotient_structure(&p.presentation)
}

pub fn elasticity_interval(field: &QuadField, f: u64) -> Result<ElasticityInterval> {
    elasticity_interval_with(field, f, &ElasticityOptions::default())
}

fn half(n: u64) -> Rational64 {
    Rational64::new(n as i64, 2)
}

fn one() -> Rational64 {
    Rational64::from_integer(1)
}

pub fn elasticity_interval_with(field: &QuadField, f: u64, opts: &ElasticityOptions) -> Result<ElasticityInterval> {
    let psi_f = psi(field, f)?;
    let factors = factor_u64(f);
    let mut diag = Diagnostics {
        class_number: None,
        psi: psi_f,
        ell: None,
        big_omega: big_omega_u64(f),
        princl: None,
        davenport: None,
        split_prime: factors.iter().map(|&(p, _)| p).find(|&p| field.splitting_of_prime(p) == SplittingType::Split),
        notes: Vec::new(),
    };
    let interval = |lower, upper, infinite, diagnostics| ElasticityInterval {
        field: field.into(),
        conductor: f,
        lower,
        upper,
        infinite,
        diagnostics,
    };
    if let Some(p) = diag.split_prime {
        diag.notes.push(format!("{p} splits in {field}, so rho is infinite"));
        return Ok(interval(one(), UpperBound::Infinite, true, diag));
    }
    let h = class_number(field)?;
    diag.class_number = Some(h);
    if f == 1 {
        // ρ(O_K) = max{1, ½ Dav Cl(O_K)}; only #Cl = h is known
        let (dav_lo, dav_hi) = davenport_over_groups_of_order(h, opts.davenport_budget);
        if dav_lo != dav_hi {
            diag.notes.push(format!("Cl(O_K) structure unknown; Dav taken over all groups of order {h}"));
        }
        let lower = half(dav_lo).max(one());
        let upper = half(dav_hi).max(one());
        return Ok(interval(lower, UpperBound::Finite(upper), false, diag));
    }

    let l = ell(field, f)?;
    diag.ell = Some(l);
    let (dav_lo, dav_hi) = match princl_structure_with_budget(field, f, opts.enumeration_budget) {
        Ok(g) => {
            let dav = davenport(&g, opts.davenport_budget);
            if g.order() != psi_f / l {
                return Err(Error::Invariant(format!(
                    "#PrinCl(O_{f}) = {} but psi/ell = {psi_f}/{l} in {field}",
                    g.order()
                )));
            }
            diag.princl = Some(g);
            diag.davenport = Some(dav);
            (dav.lower, dav.upper)
        }
        Err(Error::Resource(msg)) => {
            let n = psi_f / l;
            if factors.len() == 1 && factors[0].0 > 3 {
                diag.notes.push(format!("{msg}; PrinCl taken cyclic of order {n} (p > 3)"));
                (n, n)
            } else {
                diag.notes.push(format!("{msg}; Dav taken over all groups of order {n}"));
                davenport_over_groups_of_order(n, opts.davenport_budget)
            }
        }
        Err(e) => return Err(e),
    };
    let mut lower = half(dav_lo).max(one());
    if let [(p, 1)] = factors[..] {
        if p > 3 {
            let sharpened = Rational64::new(psi_f as i64, 2 * l as i64);
            if sharpened > lower {
                diag.notes.push(format!("lower bound raised to psi(p)/(2 ell(p)) = {sharpened}"));
                lower = sharpened;
            }
        }
    }
    let upper = (Rational64::new((h * dav_hi) as i64, 2) + Rational64::new(3 * diag.big_omega as i64, 2)).max(one());
    if lower > upper {
        return Err(Error::Invariant(format!("elasticity interval [{lower}, {upper}] for O_{f} in {field} is empty")));
    }
    Ok(interval(lower, UpperBound::Finite(upper), false, diag))
}

/// Range of Davenport bounds over every abelian group of order `n`.
fn davenport_over_groups_of_order(n: u64, budget: u64) -> (u64, u64) {
    if n > 1 && is_prime_u64(n) || n == 1 {
        return (n, n);
    }
    let groups = AbelianGroup::all_of_order(n);
    let lo = groups.iter().map(|g| davenport(g, budget).lower).min().unwrap_or(1);
    // Dav G ≤ #G, attained by the cyclic group
    (lo, n)
}

/// `ρ(O_f) = ∞` iff some prime factor of `f` splits.
pub fn has_infinite_elasticity(field: &QuadField, f: u64) -> Result<bool> {
    if f == 0 {
        return domain("conductor must be at least 1");
    }
    Ok(!field.is_split_free(f))
}
