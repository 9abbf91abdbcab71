// SPDX-License-Identifier: Apache-2.0

use std::time::Instant;

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::json;

use super::checks::{inert_primes_up_to, lcm_of_successors};
use super::report::{ser_display, ScanReport};
use crate::arith::lcm_u64;
use crate::error::{domain, Result};
use crate::quadfield::QuadField;
use crate::residue::big_l;

/// Largest `x` searched exhaustively over all `n ≤ x²`.
pub const EXHAUSTIVE_MX_LIMIT: u64 = 2000;

/// The `n ≤ x²` with the most inert primes `p ≤ x` satisfying `(p+1) | n`
/// (least such `n` on ties).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MxResult {
    pub x: u64,
    /// `None` when no inert prime `p ≤ x` exists.
    pub m_x: Option<u64>,
    pub count: usize,
    pub witnesses: Vec<u64>,
    /// Exhaustive search; otherwise a heuristic lower bound on the maximum.
    pub certified: bool,
}

/// Inert `p ≤ x` with `(p+1) | n`.
pub fn mx_witnesses(field: &QuadField, x: u64, n: u64) -> Vec<u64> {
    inert_primes_up_to(field, x).into_iter().filter(|p| n.is_multiple_of(p + 1)).collect()
}

pub fn mx_search(field: &QuadField, x: u64) -> Result<MxResult> {
    if x < 2 {
        return domain("x must be at least 2");
    }
    let primes = inert_primes_up_to(field, x);
    let limit = x * x;
    let (best, certified) = if x <= EXHAUSTIVE_MX_LIMIT {
        let mut counts = vec![0u16; limit as usize + 1];
        for &p in &primes {
            for n in (p + 1..=limit).step_by(p as usize + 1) {
                counts[n as usize] += 1;
            }
        }
        let (n, &c) = counts.iter().enumerate().skip(1).max_by_key(|&(n, &c)| (c, std::cmp::Reverse(n))).unwrap();
        ((c > 0).then_some(n as u64), true)
    } else {
        (heuristic_mx(&primes, limit), false)
    };
    let witnesses = best.map(|n| mx_witnesses(field, x, n)).unwrap_or_default();
    Ok(MxResult { x, m_x: best, count: witnesses.len(), witnesses, certified })
}

/// Greedy lcm over `p + 1` in increasing order, compared with every single
/// class `n = p + 1`.
fn heuristic_mx(primes: &[u64], limit: u64) -> Option<u64> {
    let count = |n: u64| primes.iter().filter(|&&p| n.is_multiple_of(p + 1)).count();
    let mut greedy = 1u64;
    for &p in primes {
        let next = lcm_u64(greedy, p + 1);
        if next <= limit {
            greedy = next;
        }
    }
    let mut candidates: Vec<u64> = primes.iter().map(|p| p + 1).collect();
    if greedy > 1 {
        candidates.push(greedy);
    }
    candidates.into_iter().max_by_key(|&n| (count(n), std::cmp::Reverse(n)))
}

/// `g = ∏ witnesses`, with `L(g)` and the checks `L(g) | M_x ≤ x²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalResult {
    pub x: u64,
    #[serde(serialize_with = "ser_display")]
    pub g: BigUint,
    pub l_g: u64,
    pub m_x: Option<u64>,
    pub witnesses: Vec<u64>,
    pub divides_m_x: bool,
    pub within_x_squared: bool,
    pub squarefree_inert: bool,
    /// `log L(g) / (log log g · log log log g)`, when the denominator is positive.
    pub exponent: Option<f64>,
    /// Fewer than two witnesses.
    pub degenerate: bool,
    pub certified: bool,
}

pub fn extremal_lf_construct(field: &QuadField, x: u64) -> Result<ExtremalResult> {
    let mx = mx_search(field, x)?;
    let g: BigUint = mx.witnesses.iter().map(|&p| BigUint::from(p)).product();
    // the witnesses are distinct inert primes, so L(g) = lcm(p + 1)
    let l_g = lcm_of_successors(&mx.witnesses);
    let squarefree_inert =
        mx.witnesses.windows(2).all(|w| w[0] < w[1]) && mx.witnesses.iter().all(|&p| field.kronecker(p as i64) == -1);
    if let Some(g64) = u64::try_from(&g).ok().filter(|&g| g <= crate::residue::MAX_CONDUCTOR) {
        if g64 > 1 && big_l(field, g64)? != l_g {
            return Err(crate::Error::Invariant(format!("L({g64}) = {} but lcm(p + 1) = {l_g}", big_l(field, g64)?)));
        }
    }
    let ln_g = crate::arith::ln_big(&g);
    let exponent = (ln_g > 0.0 && ln_g.ln() > 1.0).then(|| (l_g as f64).ln() / (ln_g.ln() * ln_g.ln().ln()));
    Ok(ExtremalResult {
        x,
        divides_m_x: mx.m_x.is_some_and(|m| m % l_g == 0),
        within_x_squared: l_g <= x * x,
        squarefree_inert,
        exponent,
        degenerate: mx.witnesses.len() < 2,
        certified: mx.certified,
        m_x: mx.m_x,
        witnesses: mx.witnesses,
        g,
        l_g,
    })
}

/// One-row campaign around [`extremal_lf_construct`].
pub fn mx_campaign(field: &QuadField, x: u64) -> Result<ScanReport> {
    let start = Instant::now();
    let e = extremal_lf_construct(field, x)?;
    let mut report = ScanReport::new("mx_search", Some(field))
        .param("x", x)
        .param("mode", if e.certified { "exhaustive" } else { "heuristic" });
    if !e.degenerate {
        if !e.divides_m_x {
            report.violation("extremal_lf", format!("L(g) = {} does not divide M_x = {:?}", e.l_g, e.m_x));
        }
        if !e.within_x_squared {
            report.violation("extremal_lf", format!("L(g) = {} exceeds x^2", e.l_g));
        }
    }
    if !e.squarefree_inert {
        report.violation("extremal_lf", format!("g = {} is not a product of distinct inert primes", e.g));
    }
    report.rows.push(json!(e));
    Ok(report.finish(start.elapsed()))
}
