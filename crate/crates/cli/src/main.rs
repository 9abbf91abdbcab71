// SPDX-License-Identifier: Apache-2.0

//! `quadorder`: invariants of quadratic orders and the verification
//! campaigns, as JSON, CSV or aligned tables.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use quadorder::abelian::{davenport, ebk_upper, DEFAULT_DAVENPORT_BUDGET};
use quadorder::classnum::class_number;
use quadorder::elasticity::{elasticity_interval, hfd_check, princl_structure};
use quadorder::experiments::{four_to_one_check, mx_campaign, pell_scan, scan_splitfree, verify_suite, VerifyConfig};
use quadorder::residue::{big_l, ell, precl_structure, psi, DEFAULT_ENUMERATION_BUDGET};
use quadorder::{arith, AbelianGroup, Error, QuadField, ScanReport};

#[derive(Parser)]
#[command(name = "quadorder", version, about = "Invariants and elasticity of orders in quadratic fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Wall-clock limit for the whole command; exceeding it exits with 3.
    #[arg(long, value_name = "SECONDS", global = true)]
    budget: Option<f64>,
    /// Worker threads for campaigns (default: all cores).
    #[arg(long, value_name = "N", global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Discriminant, unit, class number and splitting data of Q(√D).
    #[command(allow_negative_numbers = true)]
    Field { d: i64 },
    /// ψ, L, ℓ and the PreCl / PrinCl structure of the order of conductor f.
    #[command(allow_negative_numbers = true)]
    Order { d: i64, f: u64 },
    /// Elasticity interval of the order of conductor f.
    #[command(allow_negative_numbers = true)]
    Elasticity { d: i64, f: u64 },
    /// Half-factoriality verdict with the conditions checked.
    #[command(allow_negative_numbers = true)]
    Hfd { d: i64, f: u64 },
    /// Davenport constant of C_{d1} x C_{d2} x ... (comma-separated orders).
    Davenport {
        #[arg(value_delimiter = ',', required = true)]
        orders: Vec<u64>,
        /// Largest group order computed by brute force.
        #[arg(long, default_value_t = DEFAULT_DAVENPORT_BUDGET)]
        exact_max: u64,
    },
    /// Every split-free conductor up to --fmax.
    #[command(allow_negative_numbers = true)]
    Scan {
        d: i64,
        #[arg(long)]
        fmax: u64,
        /// Largest PreCl enumerated per prime power.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        enum_budget: u64,
    },
    /// Prime powers sharing each value of L, for m up to --mmax.
    #[command(allow_negative_numbers = true)]
    FourToOne {
        d: i64,
        #[arg(long)]
        mmax: u64,
        /// Prime-power search bound (default 2·mmax, which makes counts complete).
        #[arg(long)]
        pkmax: Option<u64>,
    },
    /// Extremal L construction from the best n ≤ x².
    #[command(allow_negative_numbers = true)]
    Mx {
        d: i64,
        #[arg(long)]
        x: u64,
    },
    /// Pell-type sequence 2ε^m = u_m + v_m√D with primality and inert factors.
    #[command(allow_negative_numbers = true)]
    Pell {
        d: i64,
        #[arg(long)]
        mmax: u64,
        /// Seconds of factoring per v_m.
        #[arg(long, default_value_t = 2.0)]
        factor_budget: f64,
    },
    /// Every invariant over the configured fields (TOML; defaults if omitted).
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

const EXIT_VIOLATIONS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

fn field(d: i64) -> quadorder::Result<QuadField> {
    QuadField::new(d)
}

fn single(campaign: &str, k: Option<&QuadField>, row: serde_json::Value, start: Instant) -> ScanReport {
    let mut r = ScanReport::new(campaign, k);
    r.rows.push(row);
    r.finish(start.elapsed())
}

fn field_report(d: i64) -> quadorder::Result<ScanReport> {
    let start = Instant::now();
    let k = field(d)?;
    let (t, n) = k.tau_relation();
    let mut row = json!({
        "D": k.d(),
        "disc": k.disc(),
        "tau_relation": format!("tau^2 = {t} tau + {n}"),
        "real": k.is_real(),
        "class_number": class_number(&k)?,
    });
    if k.is_real() {
        let eps = k.fundamental_unit()?;
        row["fundamental_unit"] = json!(eps.to_string());
        row["unit_norm"] = json!(eps.norm());
        row["delta"] = json!(k.delta_exponent()?);
    } else {
        row["units"] = json!(k.unit_group_size()?);
    }
    let types: Vec<String> =
        arith::sieve_primes(30).into_iter().map(|p| format!("{p}:{:?}", k.splitting_type(p).expect("prime"))).collect();
    row["splitting_up_to_30"] = json!(types);
    Ok(single("field", Some(&k), row, start))
}

fn order_report(d: i64, f: u64) -> quadorder::Result<ScanReport> {
    let start = Instant::now();
    let k = field(d)?;
    let mut row = json!({
        "f": f,
        "split_free": k.is_split_free(f),
        "psi": psi(&k, f)?,
        "L": big_l(&k, f)?,
        "ell": ell(&k, f)?,
    });
    let precl = precl_structure(&k, f)?;
    row["precl"] = json!(precl.to_string());
    row["precl_exponent"] = json!(precl.exponent());
    row["princl"] = json!(princl_structure(&k, f)?.to_string());
    Ok(single("order", Some(&k), row, start))
}

fn elasticity_report(d: i64, f: u64) -> quadorder::Result<ScanReport> {
    let start = Instant::now();
    let k = field(d)?;
    let r = elasticity_interval(&k, f)?;
    let row = json!({
        "f": f,
        "interval": r.to_string(),
        "lower": r.lower.to_string(),
        "upper": r.upper.to_string(),
        "exact": r.is_exact(),
        "psi": r.diagnostics.psi,
        "ell": r.diagnostics.ell,
        "class_number": r.diagnostics.class_number,
        "princl": r.diagnostics.princl.as_ref().map(AbelianGroup::to_string),
        "davenport": r.diagnostics.davenport,
        "notes": r.diagnostics.notes,
    });
    Ok(single("elasticity", Some(&k), row, start))
}

fn hfd_report(d: i64, f: u64) -> quadorder::Result<ScanReport> {
    let start = Instant::now();
    let k = field(d)?;
    let v = hfd_check(&k, f)?;
    let mut r = ScanReport::new("hfd", Some(&k))
        .param("f", f)
        .param("verdict", serde_json::to_value(v.verdict).expect("serializable"));
    for c in &v.reasons {
        r.rows.push(json!({ "condition": c.name, "holds": c.holds, "detail": c.detail }));
    }
    Ok(r.finish(start.elapsed()))
}

fn davenport_report(orders: &[u64], exact_max: u64) -> quadorder::Result<ScanReport> {
    let start = Instant::now();
    let g = AbelianGroup::from_cyclic_orders(orders)?;
    let res = davenport(&g, exact_max);
    let row = json!({
        "group": g.to_string(),
        "invariant_factors": g.invariant_factors(),
        "order": g.order(),
        "lower": res.lower,
        "upper": res.upper,
        "exact": res.exact,
        "method": res.method,
        "ebk_upper": ebk_upper(&g),
    });
    Ok(single("davenport", None, row, start))
}

fn run(cmd: Command) -> quadorder::Result<ScanReport> {
    match cmd {
        Command::Field { d } => field_report(d),
        Command::Order { d, f } => order_report(d, f),
        Command::Elasticity { d, f } => elasticity_report(d, f),
        Command::Hfd { d, f } => hfd_report(d, f),
        Command::Davenport { orders, exact_max } => davenport_report(&orders, exact_max),
        Command::Scan { d, fmax, enum_budget } => scan_splitfree(&field(d)?, fmax, enum_budget),
        Command::FourToOne { d, mmax, pkmax } => {
            four_to_one_check(&field(d)?, mmax, pkmax.unwrap_or(mmax.saturating_mul(2)))
        }
        Command::Mx { d, x } => mx_campaign(&field(d)?, x),
        Command::Pell { d, mmax, factor_budget } => {
            if !(factor_budget.is_finite() && factor_budget >= 0.0) {
                return Err(Error::Config("--factor-budget must be a nonnegative number".into()));
            }
            pell_scan(&field(d)?, mmax, Duration::from_secs_f64(factor_budget))
        }
        Command::Verify { config } => {
            let cfg = match config {
                Some(path) => VerifyConfig::load(&path)?,
                None => VerifyConfig::default(),
            };
            verify_suite(&cfg)
        }
    }
}

/// Runs the command, giving up after `budget` if one is set.
fn run_with_budget(cmd: Command, budget: Option<Duration>) -> quadorder::Result<ScanReport> {
    let Some(limit) = budget else {
        return run(cmd);
    };
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let _ = tx.send(run(cmd));
    });
    rx.recv_timeout(limit)
        .map_err(|_| Error::Resource(format!("wall-clock budget of {:.3}s exceeded", limit.as_secs_f64())))?
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let budget = match cli.budget {
        Some(s) if s.is_finite() && s > 0.0 => Some(Duration::from_secs_f64(s)),
        Some(_) => {
            eprintln!("error: --budget must be a positive number of seconds");
            return ExitCode::from(EXIT_USAGE);
        }
        None => None,
    };
    match run_with_budget(cli.command, budget) {
        Ok(report) => {
            match cli.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Csv => print!("{}", report.to_csv()),
                Format::Table => println!("{}", report.to_table()),
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VIOLATIONS)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Resource(_) => EXIT_RESOURCE,
                Error::Invariant(_) => EXIT_VIOLATIONS,
                Error::Domain(_) | Error::Config(_) => EXIT_USAGE,
            })
        }
    }
}
