// SPDX-License-Identifier: Apache-2.0

//! Per-instance invariant checks shared by the scans and the verification
//! suite. `Ok(None)` is a pass; `Ok(Some(v))` a violation; `Err` means the
//! check could not be run.

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::Signed;

use super::report::Violation;
use crate::arith::{gcd_u64, lcm_u64};
use crate::elasticity::{elasticity_interval, hfd_check, UpperBound, Verdict};
use crate::error::Result;
use crate::quadfield::{QuadField, SplittingType};
use crate::residue::{
    big_l, ell, precl_order, precl_structure_with_budget, prime_power_precl, psi, unit_image, ResidueRing,
};

pub type CheckResult = Result<Option<Violation>>;

fn fail(check: &str, field: &QuadField, detail: String) -> CheckResult {
    Ok(Some(Violation { check: check.to_string(), detail: format!("{field}: {detail}") }))
}

/// Allowed values of `L(f) / Exp PreCl(O_f)`: the divisors of 12.
pub const EXPONENT_QUOTIENTS: [u64; 6] = [1, 2, 3, 4, 6, 12];

/// `Exp PreCl(O_f) | L(f) | 12·Exp PreCl(O_f)`.
pub fn exponent_divides_l(field: &QuadField, f: u64, budget: u64) -> CheckResult {
    let exp = precl_structure_with_budget(field, f, budget)?.exponent();
    let l = big_l(field, f)?;
    if l % exp != 0 || !EXPONENT_QUOTIENTS.contains(&(l / exp)) {
        return fail("exponent_divides_l", field, format!("f={f}: Exp PreCl = {exp}, L = {l}"));
    }
    Ok(None)
}

/// `#PreCl(O_f) = ψ(f)`.
pub fn precl_order_matches_psi(field: &QuadField, f: u64, budget: u64) -> CheckResult {
    let n = precl_structure_with_budget(field, f, budget)?.order();
    let s = psi(field, f)?;
    if n != s {
        return fail("precl_order", field, format!("f={f}: #PreCl = {n}, psi = {s}"));
    }
    Ok(None)
}

/// `PreCl(O_{p^k})` is cyclic (asserted for `p > 3`).
pub fn precl_cyclic(field: &QuadField, p: u64, k: u32, budget: u64) -> CheckResult {
    let t = prime_power_precl(field, p, k, budget)?;
    if !t.structure().is_cyclic() {
        return fail("cyclicity", field, format!("PreCl(O_{}) = {}", t.modulus(), t.structure()));
    }
    Ok(None)
}

/// `ψ(p)/(2ℓ(p)) ≥ p/12`, as an exact rational comparison.
pub fn imaginary_lower_constant(field: &QuadField, p: u64) -> CheckResult {
    let (s, l) = (psi(field, p)?, ell(field, p)?);
    let lhs = Rational64::new(s as i64, 2 * l as i64);
    let rhs = Rational64::new(p as i64, 12);
    if lhs < rhs {
        return fail("imaginary_lower_constant", field, format!("p={p}: psi/(2 ell) = {lhs} < p/12 = {rhs}"));
    }
    Ok(None)
}

/// With `2ε^ℓ = U + V√D` at `ℓ = ℓ(f)`: `V ≥ f` (that is, `2v ≥ f`) and
/// `ε^ℓ > f√D − 1`, both exact.
pub fn growth(field: &QuadField, f: u64) -> CheckResult {
    let l = ell(field, f)?;
    let (u, v) = field.fundamental_unit()?.doubled_power(l);
    let f_big = BigInt::from(f);
    if v < f_big {
        return fail("growth", field, format!("f={f}: ell={l}, 2v = {v} < f"));
    }
    // (U + V√D)/2 > f√D − 1  ⟺  U + 2 > (2f − V)√D
    let lhs: BigInt = &u + 2;
    let rhs_coeff: BigInt = &f_big * 2 - &v;
    let ok = !rhs_coeff.is_positive() || (lhs.is_positive() && &lhs * &lhs > &rhs_coeff * &rhs_coeff * field.d());
    if !ok {
        return fail("growth", field, format!("f={f}: epsilon^{l} <= f sqrt(D) - 1"));
    }
    Ok(None)
}

/// `#PrinCl(O_f) · ℓ(f) = ψ(f)`.
pub fn princl_order(field: &QuadField, f: u64, budget: u64) -> CheckResult {
    let g = crate::elasticity::princl_structure_with_budget(field, f, budget)?;
    let (s, l) = (psi(field, f)?, ell(field, f)?);
    if g.order() * l != s {
        return fail("princl_order", field, format!("f={f}: #PrinCl = {}, psi = {s}, ell = {l}", g.order()));
    }
    Ok(None)
}

/// `ℓ(f)` from the defining iteration equals the order of the unit class in
/// `PreCl(O_f)`.
pub fn ell_characterizations_agree(field: &QuadField, f: u64) -> CheckResult {
    let l = ell(field, f)?;
    let o = precl_order(&unit_image(field, f)?);
    if l != o {
        return fail("ell_characterizations", field, format!("f={f}: ell = {l}, order of unit class = {o}"));
    }
    Ok(None)
}

/// For `p` inert in a real field, `ℓ(p) | δ(p+1)`.
pub fn ell_divides_delta_p_plus_1(field: &QuadField, p: u64) -> CheckResult {
    let delta = field.delta_exponent()?;
    let l = ell(field, p)?;
    if !(delta * (p + 1)).is_multiple_of(l) {
        return fail("ell_divides_delta_p_plus_1", field, format!("p={p}: ell = {l}, delta = {delta}"));
    }
    Ok(None)
}

/// `1 ≤ lower ≤ upper`, infinite exactly when a prime factor splits.
pub fn interval_well_formed(field: &QuadField, f: u64) -> CheckResult {
    let r = elasticity_interval(field, f)?;
    let one = Rational64::from_integer(1);
    let ok = r.lower >= one
        && r.infinite == !field.is_split_free(f)
        && match r.upper {
            UpperBound::Finite(u) => !r.infinite && r.lower <= u,
            UpperBound::Infinite => r.infinite,
        };
    if !ok {
        return fail("interval_well_formed", field, format!("f={f}: {r}"));
    }
    Ok(None)
}

/// An HFD verdict forces the elasticity lower bound to be 1, and the
/// `p` / `2p` shape is necessary for nonmaximal HFD orders.
pub fn hfd_consistent(field: &QuadField, f: u64) -> CheckResult {
    let v = hfd_check(field, f)?;
    if v.verdict == Verdict::Hfd {
        let r = elasticity_interval(field, f)?;
        if r.lower != Rational64::from_integer(1) {
            return fail("hfd_consistent", field, format!("f={f}: HFD but rho >= {}", r.lower));
        }
        let shape = crate::arith::factor_u64(f);
        let p_or_2p = matches!(shape[..], [] | [(_, 1)] | [(2, 1), (_, 1)]);
        if !p_or_2p {
            return fail("hfd_consistent", field, format!("f={f}: HFD verdict for a conductor not of shape p or 2p"));
        }
    }
    Ok(None)
}

/// Number of distinct PreCl classes among all units mod `f`, by enumeration.
pub fn precl_order_by_enumeration(field: &QuadField, f: u64) -> Result<u64> {
    let ring = ResidueRing::new(field, f)?;
    let mut seen = std::collections::HashSet::new();
    for a in 0..f {
        for b in 0..f {
            if gcd_u64(ring.norm_raw(a, b), f) == 1 {
                seen.insert(ring.canonical(a, b));
            }
        }
    }
    Ok(seen.len() as u64)
}

/// `ψ(f)` equals the enumerated class count.
pub fn psi_by_enumeration(field: &QuadField, f: u64) -> CheckResult {
    let (n, s) = (precl_order_by_enumeration(field, f)?, psi(field, f)?);
    if n != s {
        return fail("psi_enumeration", field, format!("f={f}: enumerated {n} classes, psi = {s}"));
    }
    Ok(None)
}

/// Values of `ψ(p^k) = L(p^k)` on prime powers `2 ≤ p^k ≤ bound`, as `(p^k, ψ)`.
pub fn prime_power_psi_values(field: &QuadField, bound: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for p in crate::arith::sieve_primes(bound) {
        let mut q = p;
        let mut k = 1;
        while q <= bound {
            out.push((q, crate::residue::psi_prime_power(field, p, k)));
            if q > bound / p {
                break;
            }
            q *= p;
            k += 1;
        }
    }
    out
}

/// Inert primes `p ≤ x`.
pub fn inert_primes_up_to(field: &QuadField, x: u64) -> Vec<u64> {
    crate::arith::sieve_primes(x).into_iter().filter(|&p| field.splitting_of_prime(p) == SplittingType::Inert).collect()
}

/// `lcm(p + 1)` over the given primes.
pub fn lcm_of_successors(primes: &[u64]) -> u64 {
    primes.iter().fold(1, |acc, &p| lcm_u64(acc, p + 1))
}

/// When the Roskam condition holds at `p`: `ρ(O_p) ≤ h_K + 3/2` and
/// `2ℓ(p) ≥ p + 1`. Returns whether the condition held alongside the result.
pub fn roskam_cap(field: &QuadField, p: u64) -> Result<(bool, Option<Violation>)> {
    if !crate::elasticity::roskam_condition(field, p)? {
        return Ok((false, None));
    }
    let cap = crate::elasticity::roskam_elasticity_cap(field, p)?;
    let upper = elasticity_interval(field, p)?.upper.finite();
    let l = ell(field, p)?;
    if upper.is_none_or(|u| u > cap) || 2 * l < p + 1 {
        return Ok((true, fail("roskam_cap", field, format!("p={p}: upper = {upper:?}, cap = {cap}, ell = {l}"))?));
    }
    Ok((true, None))
}

/// `1 + Σ(d_i − 1) ≤ Dav G ≤ EBK bound`, `Dav C_n = n`, and the rank-2
/// exponent bound, with `Dav G` by brute force.
pub fn davenport_bounds(g: &crate::abelian::AbelianGroup) -> CheckResult {
    use crate::abelian::{davenport_bruteforce, davenport_lower_bound, ebk_upper, rank2_exponent_bound_check};
    let dav = davenport_bruteforce(g)?;
    let (lo, hi) = (davenport_lower_bound(g), ebk_upper(g));
    let mut problems = Vec::new();
    if dav < lo || dav > hi {
        problems.push(format!("Dav = {dav} outside [{lo}, {hi}]"));
    }
    if g.is_cyclic() && dav != g.order() {
        problems.push(format!("cyclic group with Dav = {dav}"));
    }
    if !rank2_exponent_bound_check(g) {
        problems.push("exponent times 2^rank2 does not divide 2 #G".to_string());
    }
    if problems.is_empty() {
        return Ok(None);
    }
    Ok(Some(Violation { check: "davenport".to_string(), detail: format!("{g}: {}", problems.join("; ")) }))
}
