// SPDX-License-Identifier: Apache-2.0

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;

use super::report::{ser_display, ScanReport};
use crate::arith::{factor_with_deadline, kronecker_big, ln_big, primality, Primality};
use crate::error::{domain, Result};
use crate::quadfield::QuadField;

/// Largest prime factor of `v_m` found within the budget that is inert in
/// the field. Factoring works on `v_m / 2` when `v_m` is even.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InertFactor {
    #[serde(serialize_with = "ser_display")]
    pub p: BigUint,
    pub primality: Primality,
}

/// `2ε^m = u_m + v_m √D`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PellRecord {
    pub m: u64,
    #[serde(serialize_with = "ser_display")]
    pub u_m: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub v_m: BigInt,
    /// `v_m / 2` when `v_m` is even.
    #[serde(serialize_with = "ser_opt_display")]
    pub half: Option<BigUint>,
    pub half_primality: Option<Primality>,
    pub half_pell_prime: bool,
    /// The half-Pell number is prime and that prime is inert.
    pub inert_half_pell_prime: bool,
    pub inert_prime_factor: Option<InertFactor>,
    pub factorization_complete: bool,
    /// `ln p / ln v_m` for the inert factor `p`.
    pub empirical_delta: Option<f64>,
}

fn ser_opt_display<S: serde::Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.collect_str(x),
        None => s.serialize_none(),
    }
}

fn is_inert(field: &QuadField, p: &BigUint) -> bool {
    kronecker_big(&BigInt::from(field.disc()), &BigInt::from(p.clone())) == -1
}

fn record(field: &QuadField, m: u64, u: BigInt, v: BigInt, factor_budget: Duration) -> PellRecord {
    let v_abs = v.magnitude().clone();
    let half = v.is_even().then(|| &v_abs >> 1u32);
    let half_primality = half.as_ref().map(primality);
    let half_pell_prime = half_primality.is_some_and(Primality::is_prime);
    let target = half.clone().unwrap_or_else(|| v_abs.clone());
    let (mut factors, complete) = if half_pell_prime {
        (vec![(target.clone(), half_primality.unwrap())], true)
    } else if target <= BigUint::one() {
        (Vec::new(), true)
    } else {
        let partial = factor_with_deadline(&target, Some(Instant::now() + factor_budget));
        let complete = partial.is_complete();
        (partial.factors.into_iter().map(|(p, _, c)| (p, c)).collect(), complete)
    };
    if half.is_some() {
        factors.push((BigUint::from(2u32), Primality::Prime));
    }
    let inert_prime_factor = factors
        .into_iter()
        .filter(|(p, c)| c.is_prime() && is_inert(field, p))
        .max_by(|a, b| a.0.cmp(&b.0))
        .map(|(p, primality)| InertFactor { p, primality });
    let empirical_delta = inert_prime_factor.as_ref().and_then(|f| {
        let denom = ln_big(&v_abs);
        (denom > 0.0).then(|| ln_big(&f.p) / denom)
    });
    PellRecord {
        m,
        inert_half_pell_prime: half_pell_prime && is_inert(field, half.as_ref().unwrap()),
        u_m: u,
        v_m: v,
        half,
        half_primality,
        half_pell_prime,
        inert_prime_factor,
        factorization_complete: complete,
        empirical_delta,
    }
}

/// Records for `m = 1..=m_max`, from the trace recurrence
/// `w_{m+1} = T·w_m − N·w_{m−1}` with `T = u_2`, `N = N(ε)`.
pub fn pell_records(field: &QuadField, m_max: u64, factor_budget: Duration) -> Result<Vec<PellRecord>> {
    if !field.is_real() {
        return domain(format!("{field} is imaginary; the Pell sequence needs a real field"));
    }
    let eps = field.fundamental_unit()?;
    let (u2, v2) = eps.doubled();
    let norm = BigInt::from(eps.norm());
    let (mut prev, mut cur) = ((BigInt::from(2), BigInt::zero()), (u2.clone(), v2.clone()));
    let mut out = Vec::with_capacity(m_max as usize);
    for m in 1..=m_max {
        out.push(record(field, m, cur.0.clone(), cur.1.clone(), factor_budget));
        let next = (u2 * &cur.0 - &norm * &prev.0, u2 * &cur.1 - &norm * &prev.1);
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(out)
}

/// Pell campaign: one row per [`PellRecord`]; the norm identity
/// `u_m² − D v_m² = 4 N(ε)^m` and agreement with direct powering at `m_max`
/// are checked.
pub fn pell_scan(field: &QuadField, m_max: u64, factor_budget: Duration) -> Result<ScanReport> {
    let start = Instant::now();
    let records = pell_records(field, m_max, factor_budget)?;
    let eps = field.fundamental_unit()?;
    let d = BigInt::from(field.d());
    let mut report = ScanReport::new("pell_scan", Some(field))
        .param("m_max", m_max)
        .param("factor_budget_s", factor_budget.as_secs_f64());
    for r in &records {
        let rhs = BigInt::from(4) * BigInt::from(eps.norm()).pow(r.m as u32);
        if &r.u_m * &r.u_m - &d * &r.v_m * &r.v_m != rhs {
            report.violation("pell_norm", format!("m = {}: u^2 - D v^2 != 4 N^m", r.m));
        }
    }
    if let Some(last) = records.last() {
        if eps.doubled_power(last.m) != (last.u_m.clone(), last.v_m.clone()) {
            report.violation("pell_recurrence", format!("m = {}: recurrence disagrees with powering", last.m));
        }
    }
    let indices = |pred: fn(&PellRecord) -> bool| records.iter().filter(|r| pred(r)).map(|r| r.m).collect::<Vec<_>>();
    let incomplete = indices(|r| !r.factorization_complete);
    report = report
        .param("half_pell_prime_indices", indices(|r| r.half_pell_prime))
        .param("inert_half_pell_prime_indices", indices(|r| r.inert_half_pell_prime))
        .param("incomplete_factorizations", incomplete);
    for r in &records {
        report.rows.push(json!(r));
    }
    Ok(report.finish(start.elapsed()))
}
