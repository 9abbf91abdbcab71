// SPDX-License-Identifier: Apache-2.0

//! Structure of `PreCl(O_{p^k})` by closure over canonical class labels, and
//! of `PreCl(O_f)` as the product over `p^k ∥ f`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::{check_conductor, psi_prime_power, unit_image, ResidueRing};
use crate::abelian::{AbelianGroup, Presentation};
use crate::arith::factor_u64;
use crate::error::{Error, Result};
use crate::quadfield::QuadField;

/// Default cap on `ψ(p^k)` for explicit enumeration.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1_000_000;

/// `PreCl(O_{p^k})` with a presentation on explicit generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePowerPreCl {
    p: u64,
    k: u32,
    psi: u64,
    structure: AbelianGroup,
    generators: Vec<(u64, u64)>,
    presentation: Presentation,
    unit_coords: Vec<i64>,
}

impl PrimePowerPreCl {
    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent_of_p(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.k)
    }

    pub fn psi(&self) -> u64 {
        self.psi
    }

    /// Structure found by counting elements of each prime-power order.
    pub fn structure(&self) -> &AbelianGroup {
        &self.structure
    }

    /// Generators `a + bτ`, in the order used by [`Self::presentation`].
    pub fn generators(&self) -> &[(u64, u64)] {
        &self.generators
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// Coordinates of the generator of `𝒰_{p^k}` on [`Self::generators`].
    pub fn unit_coords(&self) -> &[i64] {
        &self.unit_coords
    }
}

/// Closure of a growing generating set. Element 0 is the identity; every
/// element carries one coordinate per generator.
struct Closure {
    ring: ResidueRing,
    reps: Vec<(u64, u64)>,
    index: HashMap<u64, u32>,
    coords: Vec<Vec<i64>>,
    generators: Vec<(u64, u64)>,
    relations: Vec<Vec<i64>>,
}

impl Closure {
    fn new(ring: ResidueRing) -> Self {
        let mut c = Closure {
            ring,
            reps: Vec::new(),
            index: HashMap::new(),
            coords: Vec::new(),
            generators: Vec::new(),
            relations: Vec::new(),
        };
        c.insert(ring.canonical(1 % ring.f, 0));
        c
    }

    fn code(&self, (a, b): (u64, u64)) -> u64 {
        b * self.ring.f + a
    }

    fn insert(&mut self, label: (u64, u64)) {
        let code = self.code(label);
        self.index.insert(code, self.reps.len() as u32);
        self.reps.push(label);
    }

    fn lookup(&self, x: (u64, u64)) -> Option<usize> {
        let label = self.ring.canonical(x.0, x.1);
        self.index.get(&self.code(label)).map(|&i| i as usize)
    }

    fn len(&self) -> usize {
        self.reps.len()
    }

    /// Extends the closure by `g`; records `m·e_g − coords(g^m)` where `m` is
    /// the least power of `g` landing in the previous subgroup.
    fn adjoin(&mut self, g: (u64, u64)) {
        if self.lookup(g).is_some() {
            return;
        }
        let h = self.len();
        let mut powers = vec![(1 % self.ring.f, 0)];
        let mut x = g;
        let landing = loop {
            if let Some(i) = self.lookup(x) {
                break i;
            }
            powers.push(x);
            x = self.ring.mul_raw(x, g);
        };
        let m = powers.len();
        let mut relation: Vec<i64> = self.coords.iter().map(|c| -c[landing]).collect();
        relation.push(m as i64);
        self.relations.push(relation);
        self.generators.push(g);
        let mut own = vec![0i64; h];
        for (i, &gi) in powers.iter().enumerate().skip(1) {
            for idx in 0..h {
                let y = self.ring.mul_raw(gi, self.reps[idx]);
                self.insert(self.ring.canonical(y.0, y.1));
                for c in self.coords.iter_mut() {
                    let v = c[idx];
                    c.push(v);
                }
                own.push(i as i64);
            }
        }
        self.coords.push(own);
    }

    fn presentation(&self) -> Presentation {
        let r = self.generators.len();
        let rows = self
            .relations
            .iter()
            .map(|row| {
                let mut row = row.clone();
                row.resize(r, 0);
                row
            })
            .collect();
        Presentation::new(r, rows)
    }

    /// Standard p-group recovery: with `N_j = #{x : x^(q^j) = 1}`, the number
    /// of cyclic `q`-factors of order at least `q^j` is `log_q(N_j / N_{j−1})`.
    fn structure_by_order_counting(&self, order: u64) -> Result<AbelianGroup> {
        let n = self.len();
        let mut parts = Vec::new();
        for (q, v) in factor_u64(order) {
            let power_map: Vec<usize> =
                self.reps.iter().map(|&x| self.lookup(self.ring.pow_raw(x, q)).expect("closure is a group")).collect();
            let mut at_depth = vec![0u64; v as usize + 1];
            for x in 0..n {
                let (mut y, mut j) = (x, 0usize);
                while y != 0 && j < v as usize {
                    y = power_map[y];
                    j += 1;
                }
                if y == 0 {
                    at_depth[j] += 1;
                }
            }
            let mut logs = Vec::with_capacity(at_depth.len());
            let mut count = 0u64;
            for c in at_depth {
                count += c;
                logs.push(exact_log(count, q).ok_or_else(|| {
                    Error::Invariant(format!("{count} elements of {q}-power order is not a power of {q}"))
                })?);
            }
            // factors of order ≥ q^j
            let at_least: Vec<u32> = logs.windows(2).map(|w| w[1] - w[0]).collect();
            for (j, &r) in at_least.iter().enumerate() {
                let next = at_least.get(j + 1).copied().unwrap_or(0);
                parts.extend(std::iter::repeat_n((q, j as u32 + 1), (r - next) as usize));
            }
        }
        Ok(AbelianGroup::from_elementary_divisors(&parts))
    }
}

fn exact_log(mut n: u64, q: u64) -> Option<u32> {
    let mut e = 0;
    while n > 1 {
        if !n.is_multiple_of(q) {
            return None;
        }
        n /= q;
        e += 1;
    }
    (n == 1).then_some(e)
}

fn build(field: &QuadField, p: u64, k: u32) -> Result<PrimePowerPreCl> {
    let q = p.pow(k);
    let ring = ResidueRing::new(field, q)?;
    let psi = psi_prime_power(field, p, k);
    let mut closure = Closure::new(ring);
    // every class has a representative a + p^j·τ with j < k (or is trivial)
    'outer: for b in (0..k).map(|j| p.pow(j)) {
        for a in 0..q {
            if closure.len() as u64 >= psi {
                break 'outer;
            }
            if ring.norm_raw(a, b) % p != 0 {
                closure.adjoin((a, b));
            }
        }
    }
    if closure.len() as u64 != psi {
        return Err(Error::Invariant(format!(
            "closure of PreCl(O_{q}) in {field} has {} classes, expected psi = {psi}",
            closure.len()
        )));
    }
    let structure = closure.structure_by_order_counting(psi)?;
    let unit = unit_image(field, q)?;
    let idx = closure.lookup((unit.rep().a(), unit.rep().b())).expect("unit class was enumerated");
    let unit_coords = closure.coords.iter().map(|c| c[idx]).collect();
    Ok(PrimePowerPreCl {
        p,
        k,
        psi,
        structure,
        presentation: closure.presentation(),
        generators: closure.generators,
        unit_coords,
    })
}

/// Per-field memo of prime-power tables.
#[derive(Default)]
pub(crate) struct PreClCache(Mutex<HashMap<u64, Arc<PrimePowerPreCl>>>);

impl PreClCache {
    fn get(&self, q: u64) -> Option<Arc<PrimePowerPreCl>> {
        self.0.lock().unwrap_or_else(|e| e.into_inner()).get(&q).cloned()
    }

    fn put(&self, q: u64, v: Arc<PrimePowerPreCl>) {
        self.0.lock().unwrap_or_else(|e| e.into_inner()).insert(q, v);
    }
}

impl Clone for PreClCache {
    fn clone(&self) -> Self {
        PreClCache(Mutex::new(self.0.lock().unwrap_or_else(|e| e.into_inner()).clone()))
    }
}

/// `PreCl(O_{p^k})`, enumerated if `ψ(p^k) ≤ budget`.
pub fn prime_power_precl(field: &QuadField, p: u64, k: u32, budget: u64) -> Result<Arc<PrimePowerPreCl>> {
    let q = p.pow(k);
    let psi = psi_prime_power(field, p, k);
    if psi > budget {
        return Err(Error::Resource(format!(
            "PreCl(O_{q}) in {field} has psi = {psi} classes, above the enumeration budget {budget} (p^k = {p}^{k})"
        )));
    }
    if let Some(hit) = field.precl_cache.get(q) {
        return Ok(hit);
    }
    let table = Arc::new(build(field, p, k)?);
    field.precl_cache.put(q, table.clone());
    Ok(table)
}

pub fn precl_structure(field: &QuadField, f: u64) -> Result<AbelianGroup> {
    precl_structure_with_budget(field, f, DEFAULT_ENUMERATION_BUDGET)
}

/// Invariant factors of `PreCl(O_f) ≅ ∏_{p^k ∥ f} PreCl(O_{p^k})`.
pub fn precl_structure_with_budget(field: &QuadField, f: u64, budget: u64) -> Result<AbelianGroup> {
    check_conductor(f)?;
    let mut parts = Vec::new();
    for (p, k) in factor_u64(f) {
        parts.extend(prime_power_precl(field, p, k, budget)?.structure.elementary_divisors());
    }
    Ok(AbelianGroup::from_elementary_divisors(&parts))
}

/// A presentation of `PreCl(O_f)` and the coordinates of the `𝒰_f` generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreClPresentation {
    pub presentation: Presentation,
    pub unit_image: Vec<i64>,
}

pub fn precl_presentation(field: &QuadField, f: u64, budget: u64) -> Result<PreClPresentation> {
    check_conductor(f)?;
    let mut presentation = Presentation::new(0, Vec::new());
    let mut unit_image = Vec::new();
    for (p, k) in factor_u64(f) {
        let t = prime_power_precl(field, p, k, budget)?;
        presentation = presentation.direct_sum(&t.presentation);
        unit_image.extend_from_slice(&t.unit_coords);
    }
    Ok(PreClPresentation { presentation, unit_image })
}
