// SPDX-License-Identifier: Apache-2.0

//! Class number `h_K` of the maximal order from reduced binary quadratic
//! forms of discriminant `Δ_K`.
//!
//! Imaginary fields: `h_K` is the number of reduced forms. Real fields: the
//! reduction operator `ρ` permutes the reduced indefinite forms and its
//! cycles are the proper (narrow) classes; `h_K` counts them up to
//! `(a, b, c) ↦ (−a, b, −c)`, which identifies a narrow class with its
//! product by the class of `√Δ_K`.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::arith::isqrt_u64;
use crate::error::{Error, Result};
use crate::quadfield::QuadField;

/// Default bound on `|Δ_K|` for [`class_number`].
pub const CLASSNUM_DISC_BOUND: u64 = 1_000_000;

/// The form `a x² + b xy + c y²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ReducedForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl ReducedForm {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// Reduction inequalities for the sign of `disc`, with exact integer
    /// comparisons against `√disc` in the indefinite case.
    pub fn is_reduced(&self, disc: i64) -> bool {
        let ReducedForm { a, b, c } = *self;
        if self.discriminant() != disc {
            return false;
        }
        if disc < 0 {
            a > 0 && b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
        } else {
            let two_a = 2 * a.abs();
            // 0 < b < √Δ, √Δ − b < 2|a| < √Δ + b
            b > 0
                && b * b < disc
                && (two_a + b) * (two_a + b) > disc
                && (two_a - b <= 0 || (two_a - b) * (two_a - b) < disc)
        }
    }

    fn negated(&self) -> ReducedForm {
        ReducedForm { a: -self.a, b: self.b, c: -self.c }
    }
}

impl fmt::Display for ReducedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// All reduced forms of discriminant `Δ_K`, sorted.
pub fn reduced_forms(field: &QuadField) -> Vec<ReducedForm> {
    let disc = field.disc();
    let mut out = Vec::new();
    if disc < 0 {
        let n = disc.unsigned_abs();
        // 3a² ≤ |Δ| for reduced forms
        let a_max = isqrt_u64(n / 3) as i64;
        for a in 1..=a_max {
            for b in -a + 1..=a {
                if (b - disc).rem_euclid(2) != 0 {
                    continue;
                }
                let num = b * b - disc;
                if num % (4 * a) != 0 {
                    continue;
                }
                let form = ReducedForm { a, b, c: num / (4 * a) };
                if form.is_reduced(disc) {
                    out.push(form);
                }
            }
        }
    } else {
        let root = isqrt_u64(disc as u64) as i64;
        for b in 1..=root {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - disc;
            // 2|a| ranges over (√Δ − b, √Δ + b)
            for abs_a in 1..=(root + b) / 2 {
                if num % (4 * abs_a) != 0 {
                    continue;
                }
                for a in [abs_a, -abs_a] {
                    let form = ReducedForm { a, b, c: num / (4 * a) };
                    if form.is_reduced(disc) {
                        out.push(form);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// `ρ(a, b, c) = (c, r, (r² − Δ)/4c)` with `r ≡ −b (mod 2c)` the largest
/// such value below `√Δ`; maps reduced indefinite forms to reduced forms.
pub fn rho(form: &ReducedForm, disc: i64) -> ReducedForm {
    let root = isqrt_u64(disc as u64) as i64;
    let m = 2 * form.c.abs();
    let r = root - (root + form.b).rem_euclid(m);
    ReducedForm { a: form.c, b: r, c: (r * r - disc) / (4 * form.c) }
}

/// The `ρ`-cycles of reduced indefinite forms, each starting at its least form.
pub fn rho_cycles(field: &QuadField) -> Result<Vec<Vec<ReducedForm>>> {
    let disc = field.disc();
    if disc < 0 {
        return crate::error::domain(format!("{field} is imaginary; rho cycles are for indefinite forms"));
    }
    let forms = reduced_forms(field);
    let index: HashMap<ReducedForm, usize> = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let mut visited = vec![false; forms.len()];
    let mut cycles = Vec::new();
    for start in 0..forms.len() {
        if visited[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !visited[i] {
            visited[i] = true;
            cycle.push(forms[i]);
            let next = rho(&forms[i], disc);
            i = *index.get(&next).ok_or_else(|| {
                Error::Invariant(format!("rho({}) = {next} is not a reduced form of discriminant {disc}", forms[i]))
            })?;
        }
        if i != start {
            return Err(Error::Invariant(format!("rho is not a permutation at {}", forms[start])));
        }
        cycles.push(cycle);
    }
    Ok(cycles)
}

/// `h_K`, cached on the field; `|Δ_K| ≤ 10^6`.
pub fn class_number(field: &QuadField) -> Result<u64> {
    class_number_with_bound(field, CLASSNUM_DISC_BOUND)
}

pub fn class_number_with_bound(field: &QuadField, bound: u64) -> Result<u64> {
    if let Some(&h) = field.class_number.get() {
        return Ok(h);
    }
    if field.disc().unsigned_abs() > bound {
        return Err(Error::Resource(format!(
            "|disc| = {} of {field} exceeds the class number bound {bound}",
            field.disc().unsigned_abs()
        )));
    }
    if field.disc() < 0 {
        return Ok(*field.class_number.get_or_init(|| reduced_forms(field).len() as u64));
    }
    let cycles = rho_cycles(field)?;
    let mut cycle_of = HashMap::new();
    for (i, cycle) in cycles.iter().enumerate() {
        for form in cycle {
            cycle_of.insert(*form, i);
        }
    }
    // pair each cycle with the cycle of its negation
    let mut wide = 0u64;
    for (i, cycle) in cycles.iter().enumerate() {
        let partner = cycle_of
            .get(&cycle[0].negated())
            .copied()
            .ok_or_else(|| Error::Invariant(format!("negation of {} is not reduced", cycle[0])))?;
        if partner >= i {
            wide += 1;
        }
    }
    Ok(*field.class_number.get_or_init(|| wide))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::kronecker;

    fn field(d: i64) -> QuadField {
        QuadField::new(d).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(class_number(&field(-1)).unwrap(), 1);
        assert_eq!(class_number(&field(-5)).unwrap(), 2);
        assert_eq!(reduced_forms(&field(-5)), vec![ReducedForm { a: 1, b: 0, c: 5 }, ReducedForm { a: 2, b: 2, c: 3 }]);
        assert_eq!(class_number(&field(2)).unwrap(), 1);
        assert_eq!(class_number(&field(10)).unwrap(), 2);
        assert_eq!(class_number(&field(79)).unwrap(), 3);
        assert_eq!(class_number(&field(-23)).unwrap(), 3);
    }

    #[test]
    fn heegner_fields_have_class_number_one() {
        for d in [-1, -2, -3, -7, -11, -19, -43, -67, -163] {
            let k = field(d);
            assert!([3, 4, 7, 8, 11, 19, 43, 67, 163].contains(&k.disc().unsigned_abs()));
            assert_eq!(class_number(&k).unwrap(), 1, "D={d}");
        }
        let ones =
            (2..200i64).filter_map(|n| QuadField::new(-n).ok()).filter(|k| class_number(k).unwrap() == 1).count();
        assert_eq!(ones, 8);
    }

    #[test]
    fn bound_is_enforced() {
        assert!(matches!(class_number_with_bound(&field(-1_000_003), 1000), Err(Error::Resource(_))));
    }

    #[test]
    fn every_enumerated_form_is_reduced() {
        for d in [-5i64, -23, -163, -2003, 2, 3, 5, 79, 94, 2003] {
            let k = field(d);
            for form in reduced_forms(&k) {
                assert!(form.is_reduced(k.disc()), "{form} D={d}");
            }
        }
    }

    /// `h = −(w / 2|Δ|) Σ_{a<|Δ|} (Δ/a)·a` for `Δ < 0`.
    fn analytic_imaginary(disc: i64) -> u64 {
        let n = disc.abs();
        let w = match disc {
            -3 => 6,
            -4 => 4,
            _ => 2,
        };
        let s: i64 = (1..n).map(|a| kronecker(disc, a) as i64 * a).sum();
        (-w * s / (2 * n)) as u64
    }

    /// `h·ln ε = −½ Σ_{a<Δ} (Δ/a) ln sin(πa/Δ)` for `Δ > 0`.
    fn analytic_real(k: &QuadField) -> u64 {
        let disc = k.disc();
        let s: f64 = (1..disc)
            .map(|a| kronecker(disc, a) as f64 * (std::f64::consts::PI * a as f64 / disc as f64).sin().ln())
            .sum();
        let reg = k.fundamental_unit().unwrap().to_f64().ln();
        (-0.5 * s / reg).round() as u64
    }

    #[test]
    fn matches_analytic_class_number_formula() {
        for n in 1..1500i64 {
            if let Ok(k) = QuadField::new(-n) {
                assert_eq!(class_number(&k).unwrap(), analytic_imaginary(k.disc()), "D={}", -n);
            }
            if let Ok(k) = QuadField::new(n) {
                if k.disc() < 3000 {
                    assert_eq!(class_number(&k).unwrap(), analytic_real(&k), "D={n}");
                }
            }
        }
    }

    #[test]
    fn cycles_partition_forms_and_match_unit_norm() {
        for d in 2..400i64 {
            let Ok(k) = QuadField::new(d) else { continue };
            let cycles = rho_cycles(&k).unwrap();
            let total: usize = cycles.iter().map(Vec::len).sum();
            assert_eq!(total, reduced_forms(&k).len());
            // narrow = wide iff N(ε) = −1
            let h = class_number(&k).unwrap() as usize;
            let narrow = if k.fundamental_unit().unwrap().norm() == -1 { h } else { 2 * h };
            assert_eq!(cycles.len(), narrow, "D={d}");
        }
    }
}
