// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use num_rational::Rational64;
use serde::Serialize;

use super::elasticity_interval;
use crate::arith::{factor_u64, is_prime_u64};
use crate::classnum::class_number;
use crate::error::{domain, Error, Result};
use crate::experiments::report::FieldId;
use crate::quadfield::{QuadField, SplittingType};
use crate::residue::{ell, psi, unit_image};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Hfd,
    NotHfd,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Hfd => "HFD",
            Verdict::NotHfd => "NOT_HFD",
        })
    }
}

/// One hypothesis of the half-factoriality criterion and whether it holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HfdCondition {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl HfdCondition {
    fn new(name: &str, holds: bool, detail: impl Into<String>) -> Self {
        HfdCondition { name: name.to_string(), holds, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HfdVerdict {
    pub field: FieldId,
    pub conductor: u64,
    pub verdict: Verdict,
    /// The conditions evaluated on the branch `f` falls into, in order;
    /// the verdict is HFD iff all of them hold.
    pub reasons: Vec<HfdCondition>,
}

/// Condition names, one per hypothesis.
pub mod conditions {
    pub const CLASS_NUMBER: &str = "class_number_1_or_2";
    pub const IMAGINARY_UNIQUE: &str = "imaginary_order_is_Z[sqrt(-3)]";
    pub const SHAPE: &str = "conductor_is_p_or_2p";
    pub const P_INERT: &str = "p_inert";
    pub const P_ODD: &str = "p_greater_than_2";
    pub const TWO_INERT: &str = "2_inert";
    pub const EPS_GENERATES_P: &str = "epsilon_generates_PreCl(O_p)";
    pub const THREE_NMID: &str = "3_does_not_divide_p_plus_1";
    pub const EPS_GENERATES_2: &str = "epsilon_generates_PreCl(O_2)";
}

use conditions::*;

/// `ε` generates `PreCl(O_q)`, i.e. `ℓ(q) = ψ(q)`.
fn eps_generates(field: &QuadField, q: u64) -> Result<(bool, String)> {
    let (l, s) = (ell(field, q)?, psi(field, q)?);
    Ok((l == s, format!("ell({q}) = {l}, psi({q}) = {s}")))
}

/// Half-factoriality of `O_f`. Maximal orders follow Carlitz (`h_K ≤ 2`);
/// imaginary nonmaximal orders are HFD only for `Z[√−3]`; real nonmaximal
/// orders follow the `f = p` / `f = 2p` criterion.
pub fn hfd_check(field: &QuadField, f: u64) -> Result<HfdVerdict> {
    if f == 0 {
        return domain("conductor must be at least 1");
    }
    let mut reasons = Vec::new();
    if f == 1 || field.is_real() {
        let h = class_number(field)?;
        reasons.push(HfdCondition::new(CLASS_NUMBER, h <= 2, format!("h_K = {h}")));
    }
    if f > 1 && !field.is_real() {
        let holds = field.d() == -3 && f == 2;
        reasons.push(HfdCondition::new(IMAGINARY_UNIQUE, holds, format!("(D, f) = ({}, {f})", field.d())));
    }
    if f > 1 && field.is_real() {
        real_conditions(field, f, &mut reasons)?;
    }
    let verdict = if reasons.iter().all(|c| c.holds) { Verdict::Hfd } else { Verdict::NotHfd };
    Ok(HfdVerdict { field: field.into(), conductor: f, verdict, reasons })
}

fn real_conditions(field: &QuadField, f: u64, reasons: &mut Vec<HfdCondition>) -> Result<()> {
    let factors = factor_u64(f);
    let p = match factors[..] {
        [(p, 1)] => Some(p),
        [(2, 1), (p, 1)] => Some(p),
        _ => None,
    };
    let Some(p) = p else {
        reasons.push(HfdCondition::new(SHAPE, false, format!("f = {f} is neither a prime nor twice an odd prime")));
        return Ok(());
    };
    let two_p = f != p;
    let shape = if two_p { format!("f = 2*{p}") } else { format!("f = {p}") };
    reasons.push(HfdCondition::new(SHAPE, true, shape));
    let p_type = field.splitting_of_prime(p);
    reasons.push(HfdCondition::new(P_INERT, p_type == SplittingType::Inert, format!("{p} is {p_type:?}")));
    if !two_p {
        if p_type == SplittingType::Inert {
            let (holds, detail) = eps_generates(field, p)?;
            reasons.push(HfdCondition::new(EPS_GENERATES_P, holds, detail));
        }
        return Ok(());
    }
    reasons.push(HfdCondition::new(P_ODD, p > 2, format!("p = {p}")));
    let two_type = field.splitting_of_prime(2);
    reasons.push(HfdCondition::new(TWO_INERT, two_type == SplittingType::Inert, format!("2 is {two_type:?}")));
    if p_type != SplittingType::Inert || two_type != SplittingType::Inert {
        return Ok(());
    }
    reasons.push(HfdCondition::new(THREE_NMID, (p + 1) % 3 != 0, format!("p + 1 = {}", p + 1)));
    let (holds, detail) = eps_generates(field, 2)?;
    reasons.push(HfdCondition::new(EPS_GENERATES_2, holds, detail));
    let (holds, detail) = eps_generates(field, p)?;
    reasons.push(HfdCondition::new(EPS_GENERATES_P, holds, detail));
    Ok(())
}

/// The multiplicative order of `ε` in `(O_K/pO_K)^×` is exactly `δ(p+1)`,
/// for `p` inert in the real field `K`.
pub fn roskam_condition(field: &QuadField, p: u64) -> Result<bool> {
    if !field.is_real() {
        return domain(format!("{field} is not real"));
    }
    match field.splitting_type(p)? {
        SplittingType::Inert => {}
        t => return domain(format!("{p} is {t:?} in {field}, not inert")),
    }
    let n = field.delta_exponent()? * (p + 1);
    let eps = *unit_image(field, p)?.rep();
    let is_one = |m: u64| {
        let x = eps.pow(m);
        (x.a(), x.b()) == (1, 0)
    };
    if !is_one(n) {
        return Ok(false);
    }
    Ok(factor_u64(n).iter().all(|&(q, _)| !is_one(n / q)))
}

/// `h_K + 3/2`, after checking that the elasticity interval of `O_p` lies
/// below it and that `ℓ(p) ≥ (p+1)/2`.
pub fn roskam_elasticity_cap(field: &QuadField, p: u64) -> Result<Rational64> {
    if !is_prime_u64(p) || !roskam_condition(field, p)? {
        return domain(format!("Roskam's condition fails for p = {p} in {field}"));
    }
    let h = class_number(field)?;
    let cap = Rational64::from_integer(h as i64) + Rational64::new(3, 2);
    let interval = elasticity_interval(field, p)?;
    let upper =
        interval.upper.finite().ok_or_else(|| Error::Invariant(format!("rho(O_{p}) infinite for inert {p}")))?;
    if upper > cap {
        return Err(Error::Invariant(format!("upper bound {upper} for rho(O_{p}) exceeds h_K + 3/2 = {cap}")));
    }
    let l = ell(field, p)?;
    if 2 * l < p + 1 {
        return Err(Error::Invariant(format!("ell({p}) = {l} < (p+1)/2 under Roskam's condition")));
    }
    Ok(cap)
}
