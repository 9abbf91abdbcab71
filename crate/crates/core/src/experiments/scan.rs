// SPDX-License-Identifier: Apache-2.0

use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::checks::{self, CheckResult};
use super::report::{ScanReport, Violation};
use crate::arith::factor_u64;
use crate::elasticity::{elasticity_interval_with, ElasticityOptions};
use crate::error::{domain, Error, Result};
use crate::quadfield::QuadField;
use crate::residue::{big_l, ell, precl_structure_with_budget, psi};

fn collect(violations: &mut Vec<Violation>, r: CheckResult) -> Result<()> {
    match r {
        Ok(Some(v)) => violations.push(v),
        Ok(None) | Err(Error::Resource(_)) => {}
        Err(e) => return Err(e),
    }
    Ok(())
}

fn scan_row(field: &QuadField, f: u64, budget: u64) -> Result<(Value, Vec<Violation>)> {
    let mut violations = Vec::new();
    let (s, l, el) = (psi(field, f)?, big_l(field, f)?, ell(field, f)?);
    let opts = ElasticityOptions { enumeration_budget: budget, ..Default::default() };
    let interval = elasticity_interval_with(field, f, &opts)?;
    let mut row = json!({
        "f": f,
        "psi": s,
        "L": l,
        "ell": el,
        "rho_lower": interval.lower.to_string(),
        "rho_upper": interval.upper.to_string(),
    });
    match precl_structure_with_budget(field, f, budget) {
        Ok(g) => {
            row["precl"] = json!(g.invariant_factors());
            row["L_over_exp"] = json!(l / g.exponent());
            collect(&mut violations, checks::exponent_divides_l(field, f, budget))?;
            collect(&mut violations, checks::precl_order_matches_psi(field, f, budget))?;
            collect(&mut violations, checks::princl_order(field, f, budget))?;
            if let [(p, k)] = factor_u64(f)[..] {
                if p > 3 {
                    collect(&mut violations, checks::precl_cyclic(field, p, k, budget))?;
                }
            }
        }
        Err(Error::Resource(msg)) => row["skipped"] = json!(msg),
        Err(e) => return Err(e),
    }
    row["princl"] = json!(interval.diagnostics.princl.as_ref().map(|g| g.invariant_factors().to_vec()));
    collect(&mut violations, checks::interval_well_formed(field, f))?;
    collect(&mut violations, checks::ell_characterizations_agree(field, f))?;
    Ok((row, violations))
}

/// Every split-free `f ≤ f_max` with `ψ`, `L`, `ℓ`, PreCl and PrinCl
/// structure and the elasticity interval; per-`f` invariants become
/// violations. Conductors whose PreCl exceeds `budget` are marked skipped.
pub fn scan_splitfree(field: &QuadField, f_max: u64, budget: u64) -> Result<ScanReport> {
    if f_max == 0 {
        return domain("f_max must be at least 1");
    }
    let start = Instant::now();
    let conductors: Vec<u64> = (1..=f_max).filter(|&f| field.is_split_free(f)).collect();
    let results = conductors.par_iter().map(|&f| scan_row(field, f, budget)).collect::<Result<Vec<_>>>()?;
    let mut report = ScanReport::new("scan_splitfree", Some(field)).param("f_max", f_max).param("budget", budget);
    // par_iter preserves order, so rows are sorted by f
    for (row, violations) in results {
        report.rows.push(row);
        for v in violations {
            report.violation(v.check, v.detail);
        }
    }
    Ok(report.finish(start.elapsed()))
}
