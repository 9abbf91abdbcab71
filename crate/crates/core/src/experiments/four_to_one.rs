// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::json;

use super::checks::prime_power_psi_values;
use super::report::ScanReport;
use crate::error::{domain, Result};
use crate::quadfield::QuadField;

/// Largest number of prime powers sharing one value of `L`.
pub const MAX_PREIMAGES: usize = 4;

/// For each `m ≤ m_max`, the prime powers `p^k ≤ pk_max` with
/// `L(p^k) = ψ(p^k) = m`; more than four is a violation. Since
/// `ψ(p^k) ≥ p^k/2`, the counts are complete once `pk_max ≥ 2·m_max`.
pub fn four_to_one_check(field: &QuadField, m_max: u64, pk_max: u64) -> Result<ScanReport> {
    if pk_max < m_max {
        return domain(format!("pk_max = {pk_max} must be at least m_max = {m_max}"));
    }
    let start = Instant::now();
    let mut preimages: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for (q, s) in prime_power_psi_values(field, pk_max) {
        if s <= m_max {
            preimages.entry(s).or_default().push(q);
        }
    }
    let mut report = ScanReport::new("four_to_one", Some(field))
        .param("m_max", m_max)
        .param("pk_max", pk_max)
        .param("complete", pk_max >= 2 * m_max);
    let mut max_count = 0;
    for (m, qs) in preimages.iter_mut() {
        qs.sort_unstable();
        max_count = max_count.max(qs.len());
        report.rows.push(json!({ "m": m, "count": qs.len(), "preimages": qs }));
        if qs.len() > MAX_PREIMAGES {
            report.violation("four_to_one", format!("{field}: m = {m} has {} prime-power preimages {qs:?}", qs.len()));
        }
    }
    Ok(report.param("max_count", max_count).finish(start.elapsed()))
}
