// SPDX-License-Identifier: Apache-2.0

//! Finite abelian groups in invariant-factor form, their Davenport
//! constants, and quotients of finitely presented abelian groups.

mod davenport;
mod snf;

use std::fmt;

use serde::Serialize;

use crate::arith::factor_u64;
use crate::error::{domain, Result};

pub use davenport::{
    davenport, davenport_bruteforce, davenport_lower_bound, ebk_upper, rank2_exponent_bound_check, DavenportMethod,
    DavenportResult, BRUTE_FORCE_CAP, DEFAULT_DAVENPORT_BUDGET,
};
pub use snf::{quotient_structure, smith_diagonal, Presentation};

/// A finite abelian group `C_{d1} ⊕ ... ⊕ C_{dr}` with `d1 | d2 | ... | dr`
/// and every `di ≥ 2`. The empty list is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AbelianGroup {
    invariant_factors: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(invariant_factors: Vec<u64>) -> Result<Self> {
        if let Some(&d) = invariant_factors.iter().find(|&&d| d < 2) {
            return domain(format!("invariant factor {d} must be at least 2"));
        }
        if let Some(w) = invariant_factors.windows(2).find(|w| w[1] % w[0] != 0) {
            return domain(format!("{} does not divide {}", w[0], w[1]));
        }
        Ok(AbelianGroup { invariant_factors })
    }

    pub fn trivial() -> Self {
        AbelianGroup { invariant_factors: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Self {
        if n <= 1 {
            Self::trivial()
        } else {
            AbelianGroup { invariant_factors: vec![n] }
        }
    }

    /// Normal form of `C_{n1} ⊕ C_{n2} ⊕ ...` for arbitrary positive orders.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self> {
        let mut parts = Vec::new();
        for &n in orders {
            if n == 0 {
                return domain("cyclic factor of order 0 is infinite");
            }
            parts.extend(factor_u64(n));
        }
        Ok(Self::from_elementary_divisors(&parts))
    }

    /// Builds the group `⊕ C_{p^e}` from its elementary divisors `(p, e)`.
    pub fn from_elementary_divisors(parts: &[(u64, u32)]) -> Self {
        let mut by_prime: Vec<(u64, Vec<u32>)> = Vec::new();
        for &(p, e) in parts.iter().filter(|&&(_, e)| e > 0) {
            match by_prime.iter_mut().find(|(q, _)| *q == p) {
                Some((_, es)) => es.push(e),
                None => by_prime.push((p, vec![e])),
            }
        }
        let rank = by_prime.iter().map(|(_, es)| es.len()).max().unwrap_or(0);
        let mut factors = vec![1u64; rank];
        for (p, mut es) in by_prime {
            es.sort_unstable();
            // largest exponents go to the last invariant factors
            let offset = rank - es.len();
            for (i, e) in es.into_iter().enumerate() {
                factors[offset + i] *= p.pow(e);
            }
        }
        AbelianGroup { invariant_factors: factors }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    /// `(p, e)` pairs, sorted by prime then exponent.
    pub fn elementary_divisors(&self) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = self.invariant_factors.iter().flat_map(|&d| factor_u64(d)).collect();
        out.sort_unstable();
        out
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Number of even invariant factors.
    pub fn rank2(&self) -> usize {
        self.invariant_factors.iter().filter(|&&d| d % 2 == 0).count()
    }

    /// `r(G) = #G / Exp G`.
    pub fn r_ratio(&self) -> u64 {
        self.order() / self.exponent()
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.len() <= 1
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Diagonal presentation `Z^r / diag(d1, ..., dr)`.
    pub fn presentation(&self) -> Presentation {
        let r = self.rank();
        let relations = (0..r)
            .map(|i| {
                let mut row = vec![0i64; r];
                row[i] = self.invariant_factors[i] as i64;
                row
            })
            .collect();
        Presentation::new(r, relations)
    }

    /// Quotient by the subgroup generated by the given elements, each written
    /// in coordinates of the invariant-factor basis.
    pub fn quotient(&self, subgroup_generators: &[Vec<i64>]) -> Result<AbelianGroup> {
        let mut p = self.presentation();
        for g in subgroup_generators {
            p.add_relation(g.clone())?;
        }
        quotient_structure(&p)
    }

    /// Every abelian group of order exactly `n`, up to isomorphism.
    pub fn all_of_order(n: u64) -> Vec<AbelianGroup> {
        let mut shapes: Vec<Vec<(u64, u32)>> = vec![Vec::new()];
        for (p, k) in factor_u64(n) {
            let mut next = Vec::new();
            for partition in partitions(k) {
                for shape in &shapes {
                    let mut s = shape.clone();
                    s.extend(partition.iter().map(|&e| (p, e)));
                    next.push(s);
                }
            }
            shapes = next;
        }
        let mut groups: Vec<AbelianGroup> = shapes.iter().map(|s| Self::from_elementary_divisors(s)).collect();
        groups.sort();
        groups
    }

    /// Mixed-radix helpers for element enumeration: index ↔ coordinates.
    pub(crate) fn element_coords(&self, mut index: u64) -> Vec<u64> {
        self.invariant_factors
            .iter()
            .map(|&d| {
                let c = index % d;
                index /= d;
                c
            })
            .collect()
    }

    pub(crate) fn element_index(&self, coords: &[u64]) -> u64 {
        let mut index = 0;
        for (&c, &d) in coords.iter().zip(&self.invariant_factors).rev() {
            index = index * d + c;
        }
        index
    }
}

/// Partitions of `k` into positive parts.
fn partitions(k: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("C{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}
