// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::checks::{self, CheckResult};
use super::four_to_one::four_to_one_check;
use super::mx::{extremal_lf_construct, mx_search};
use super::pell::pell_scan;
use super::report::{ScanReport, Violation};
use crate::abelian::AbelianGroup;
use crate::arith::sieve_primes;
use crate::elasticity::{hfd_check, Verdict};
use crate::error::{Error, Result};
use crate::quadfield::{QuadField, SplittingType};

/// Half-Pell prime indices `m ≤ 200` for `Q(√2)`.
pub const HALF_PELL_PRIME_INDICES: [u64; 15] = [2, 3, 5, 11, 13, 29, 41, 53, 59, 89, 97, 101, 167, 181, 191];
/// The subset whose half-Pell prime is inert in `Q(√2)`.
pub const INERT_HALF_PELL_PRIME_INDICES: [u64; 9] = [3, 5, 11, 13, 29, 53, 59, 101, 181];

/// Fields and ranges for [`verify_suite`]. Every key is optional in TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Squarefree `D` of each test field.
    pub fields: Vec<i64>,
    /// Conductor range for the exponent, order, PrinCl, `ℓ` and interval checks.
    pub f_max: u64,
    pub enumeration_budget: u64,
    pub cyclic_p_max: u64,
    pub cyclic_pk_max: u64,
    pub imaginary_p_max: u64,
    pub growth_f_min: u64,
    pub growth_f_max: u64,
    pub four_to_one_m_max: u64,
    pub four_to_one_pk_max: u64,
    /// Pell scan length for real fields (0 skips the scan).
    pub pell_m_max: u64,
    /// Seconds of factoring per Pell number.
    pub pell_factor_budget_s: f64,
    pub roskam_p_max: u64,
    pub mx_x_max: u64,
    pub psi_enumeration_f_max: u64,
    pub hfd_f_max: u64,
    /// Brute-force Davenport over every group of order up to this bound.
    pub davenport_order_max: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            fields: vec![-1, -3, -5, 2, 5],
            f_max: 2000,
            enumeration_budget: 1_000_000,
            cyclic_p_max: 50,
            cyclic_pk_max: 10_000,
            imaginary_p_max: 2000,
            growth_f_min: 10,
            growth_f_max: 5000,
            four_to_one_m_max: 10_000,
            four_to_one_pk_max: 100_000,
            pell_m_max: 200,
            pell_factor_budget_s: 0.05,
            roskam_p_max: 10_000,
            mx_x_max: 200,
            psi_enumeration_f_max: 300,
            hfd_f_max: 200,
            davenport_order_max: 36,
        }
    }
}

impl VerifyConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: VerifyConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.to_string()));
        if self.fields.is_empty() {
            return bad("fields must list at least one D");
        }
        if self.f_max == 0 {
            return bad("f_max must be at least 1");
        }
        if self.four_to_one_pk_max < self.four_to_one_m_max {
            return bad("four_to_one_pk_max must be at least four_to_one_m_max");
        }
        if self.growth_f_min > self.growth_f_max {
            return bad("growth_f_min exceeds growth_f_max");
        }
        if !(self.pell_factor_budget_s.is_finite() && self.pell_factor_budget_s >= 0.0) {
            return bad("pell_factor_budget_s must be a nonnegative number");
        }
        for &d in &self.fields {
            QuadField::new(d).map_err(|e| Error::Config(format!("field {d}: {e}")))?;
        }
        Ok(())
    }
}

/// Instances run, instances skipped for budget, and violations of one check.
#[derive(Default)]
struct Tally {
    instances: u64,
    skipped: u64,
    violations: Vec<Violation>,
}

impl Tally {
    fn add(&mut self, r: CheckResult) -> Result<()> {
        self.instances += 1;
        match r {
            Ok(None) => {}
            Ok(Some(v)) => self.violations.push(v),
            Err(Error::Resource(_)) => self.skipped += 1,
            Err(e) => return Err(e),
        }
        Ok(())
    }

    fn run<T: Sync + Send>(items: &[T], check: impl Fn(&T) -> CheckResult + Sync + Send) -> Result<Self> {
        let results: Vec<CheckResult> = items.par_iter().map(check).collect();
        let mut t = Tally::default();
        for r in results {
            t.add(r)?;
        }
        Ok(t)
    }
}

struct Suite {
    report: ScanReport,
}

impl Suite {
    fn record(&mut self, check: &str, d: Option<i64>, started: Instant, tally: Tally) {
        self.report.rows.push(json!({
            "check": check,
            "D": d,
            "instances": tally.instances,
            "skipped": tally.skipped,
            "violations": tally.violations.len(),
            "runtime_s": (started.elapsed().as_secs_f64() * 1000.0).round() / 1000.0,
        }));
        for v in tally.violations {
            self.report.violation(v.check, v.detail);
        }
    }
}

fn field_checks(suite: &mut Suite, cfg: &VerifyConfig, k: &QuadField) -> Result<()> {
    let d = Some(k.d());
    let budget = cfg.enumeration_budget;
    let splitfree: Vec<u64> = (1..=cfg.f_max).filter(|&f| k.is_split_free(f)).collect();
    let all_f: Vec<u64> = (1..=cfg.f_max).collect();

    let t = Instant::now();
    let tally = Tally::run(&splitfree, |&f| {
        checks::exponent_divides_l(k, f, budget).and_then(|v| {
            if v.is_some() {
                Ok(v)
            } else {
                checks::precl_order_matches_psi(k, f, budget)
            }
        })
    })?;
    suite.record("exponent_and_precl_order", d, t, tally);

    let t = Instant::now();
    let tally = Tally::run(&splitfree, |&f| checks::princl_order(k, f, budget))?;
    suite.record("princl_order", d, t, tally);

    let t = Instant::now();
    let tally = Tally::run(&all_f, |&f| checks::ell_characterizations_agree(k, f))?;
    suite.record("ell_characterizations", d, t, tally);

    let t = Instant::now();
    let tally = Tally::run(&all_f, |&f| checks::interval_well_formed(k, f))?;
    suite.record("interval_well_formed", d, t, tally);

    let t = Instant::now();
    let hfd_f: Vec<u64> = (1..=cfg.hfd_f_max).collect();
    let tally = Tally::run(&hfd_f, |&f| checks::hfd_consistent(k, f))?;
    suite.record("hfd_consistent", d, t, tally);

    let t = Instant::now();
    let mut prime_powers = Vec::new();
    for p in sieve_primes(cfg.cyclic_p_max).into_iter().filter(|&p| p > 3) {
        let (mut q, mut e) = (p, 1u32);
        while q <= cfg.cyclic_pk_max {
            prime_powers.push((p, e));
            q = q.saturating_mul(p);
            e += 1;
        }
    }
    let tally = Tally::run(&prime_powers, |&(p, e)| checks::precl_cyclic(k, p, e, budget))?;
    suite.record("cyclicity", d, t, tally);

    let t = Instant::now();
    let psi_f: Vec<u64> = (1..=cfg.psi_enumeration_f_max).collect();
    let tally = Tally::run(&psi_f, |&f| checks::psi_by_enumeration(k, f))?;
    suite.record("psi_enumeration", d, t, tally);

    let t = Instant::now();
    let report = four_to_one_check(k, cfg.four_to_one_m_max, cfg.four_to_one_pk_max)?;
    let tally = Tally { instances: report.rows.len() as u64, skipped: 0, violations: report.violations };
    suite.record("four_to_one", d, t, tally);

    let t = Instant::now();
    let mut tally = Tally::default();
    for x in 2..=cfg.mx_x_max {
        tally.add(mx_check(k, x))?;
    }
    suite.record("mx_extremal", d, t, tally);

    if k.is_real() {
        real_field_checks(suite, cfg, k)
    } else {
        let t = Instant::now();
        let primes: Vec<u64> = sieve_primes(cfg.imaginary_p_max)
            .into_iter()
            .filter(|&p| p > 3 && k.splitting_of_prime(p) != SplittingType::Split)
            .collect();
        let tally = Tally::run(&primes, |&p| checks::imaginary_lower_constant(k, p))?;
        suite.record("imaginary_lower_constant", d, t, tally);
        Ok(())
    }
}

fn real_field_checks(suite: &mut Suite, cfg: &VerifyConfig, k: &QuadField) -> Result<()> {
    let d = Some(k.d());
    let t = Instant::now();
    let growth_f: Vec<u64> = (cfg.growth_f_min.max(1)..=cfg.growth_f_max).filter(|&f| k.is_split_free(f)).collect();
    let tally = Tally::run(&growth_f, |&f| checks::growth(k, f))?;
    suite.record("growth", d, t, tally);

    let inert: Vec<u64> = checks::inert_primes_up_to(k, cfg.roskam_p_max);
    let t = Instant::now();
    let tally = Tally::run(&inert, |&p| checks::ell_divides_delta_p_plus_1(k, p))?;
    suite.record("ell_divides_delta_p_plus_1", d, t, tally);

    let t = Instant::now();
    let outcomes: Vec<Result<(bool, Option<Violation>)>> =
        inert.par_iter().map(|&p| checks::roskam_cap(k, p)).collect();
    let mut tally = Tally::default();
    let mut holding = 0u64;
    for o in outcomes {
        let (held, v) = o?;
        if held {
            holding += 1;
            tally.add(Ok(v))?;
        }
    }
    suite.record("roskam_cap", d, t, tally);
    suite.report.params.insert(format!("roskam_primes_D{}", k.d()), json!(holding));

    if cfg.pell_m_max > 0 {
        let t = Instant::now();
        let budget = Duration::from_secs_f64(cfg.pell_factor_budget_s);
        let report = pell_scan(k, cfg.pell_m_max, budget)?;
        let mut tally =
            Tally { instances: report.rows.len() as u64, skipped: 0, violations: report.violations.clone() };
        if k.d() == 2 {
            tally.add(pell_lists_match(&report, cfg.pell_m_max))?;
        }
        suite.record("pell", d, t, tally);
    }
    Ok(())
}

fn mx_check(k: &QuadField, x: u64) -> CheckResult {
    let e = extremal_lf_construct(k, x)?;
    let mx = mx_search(k, x)?;
    let fine = e.squarefree_inert && (e.degenerate || (e.divides_m_x && e.within_x_squared)) && mx.certified;
    if fine {
        return Ok(None);
    }
    Ok(Some(Violation { check: "mx_extremal".to_string(), detail: format!("{k}: x={x}: {e:?}") }))
}

fn pell_lists_match(report: &ScanReport, m_max: u64) -> CheckResult {
    let expect = |list: &[u64]| list.iter().copied().filter(|&m| m <= m_max).collect::<Vec<_>>();
    let got = |key: &str| serde_json::from_value::<Vec<u64>>(report.params[key].clone()).unwrap_or_default();
    let lists = [
        ("half_pell_prime_indices", expect(&HALF_PELL_PRIME_INDICES)),
        ("inert_half_pell_prime_indices", expect(&INERT_HALF_PELL_PRIME_INDICES)),
    ];
    for (key, want) in lists {
        let have = got(key);
        if have != want {
            return Ok(Some(Violation {
                check: "pell_indices".to_string(),
                detail: format!("{key}: {have:?} != {want:?}"),
            }));
        }
    }
    Ok(None)
}

/// The four fixed HFD verdicts.
fn hfd_examples(suite: &mut Suite) -> Result<()> {
    let t = Instant::now();
    let mut tally = Tally::default();
    for (d, f, want) in
        [(-3, 2, Verdict::Hfd), (-1, 2, Verdict::NotHfd), (-2, 2, Verdict::NotHfd), (2, 3, Verdict::Hfd)]
    {
        let k = QuadField::new(d)?;
        let got = hfd_check(&k, f)?.verdict;
        tally.add(Ok((got != want).then(|| Violation {
            check: "hfd_examples".to_string(),
            detail: format!("{k}, f={f}: {got:?}, expected {want:?}"),
        })))?;
    }
    suite.record("hfd_examples", None, t, tally);
    Ok(())
}

fn davenport_checks(suite: &mut Suite, cfg: &VerifyConfig) -> Result<()> {
    let t = Instant::now();
    let groups: Vec<AbelianGroup> = (1..=cfg.davenport_order_max).flat_map(AbelianGroup::all_of_order).collect();
    let tally = Tally::run(&groups, checks::davenport_bounds)?;
    suite.record("davenport", None, t, tally);
    Ok(())
}

/// Runs every invariant across the configured fields and ranges. One row
/// per (check, field); any violation fails the report.
pub fn verify_suite(cfg: &VerifyConfig) -> Result<ScanReport> {
    cfg.validate()?;
    let start = Instant::now();
    let params = serde_json::to_value(cfg).expect("config serializes");
    let mut suite = Suite { report: ScanReport::new("verify_suite", None) };
    if let serde_json::Value::Object(map) = params {
        suite.report.params = map;
    }
    davenport_checks(&mut suite, cfg)?;
    hfd_examples(&mut suite)?;
    for &d in &cfg.fields {
        let k = QuadField::new(d)?;
        field_checks(&mut suite, cfg, &k)?;
    }
    Ok(suite.report.finish(start.elapsed()))
}
