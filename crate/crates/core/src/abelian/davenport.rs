// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::AbelianGroup;
use crate::error::{Error, Result};

/// Largest group order accepted by [`davenport_bruteforce`]; subset sums are
/// tracked in a `u64` bitmask.
pub const BRUTE_FORCE_CAP: u64 = 64;

/// Default group-order budget for [`davenport`]. The search proves that no
/// zero-sum-free sequence beats the rank bound, which costs well under a
/// second up to order 36 but up to minutes near the cap.
pub const DEFAULT_DAVENPORT_BUDGET: u64 = 36;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DavenportMethod {
    CyclicExact,
    BruteForce,
    BoundsOnly,
}

/// `lower ≤ Dav G ≤ upper`, with `exact` iff the two agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DavenportResult {
    pub lower: u64,
    pub upper: u64,
    pub exact: bool,
    pub method: DavenportMethod,
}

impl DavenportResult {
    fn exact(value: u64, method: DavenportMethod) -> Self {
        DavenportResult { lower: value, upper: value, exact: true, method }
    }

    pub fn value(&self) -> Option<u64> {
        self.exact.then_some(self.lower)
    }
}

/// Exact value when the group is cyclic or has order at most `budget`
/// (capped at [`BRUTE_FORCE_CAP`]); otherwise the rank lower bound and the
/// EBK upper bound.
pub fn davenport(g: &AbelianGroup, budget: u64) -> DavenportResult {
    if g.is_cyclic() {
        return DavenportResult::exact(g.order(), DavenportMethod::CyclicExact);
    }
    if g.order() <= budget.min(BRUTE_FORCE_CAP) {
        if let Ok(v) = davenport_bruteforce(g) {
            return DavenportResult::exact(v, DavenportMethod::BruteForce);
        }
    }
    let lower = davenport_lower_bound(g);
    let upper = ebk_upper(g).max(lower);
    DavenportResult { lower, upper, exact: lower == upper, method: DavenportMethod::BoundsOnly }
}

/// `1 + Σ (d_i − 1)`, realized by the sequence of basis elements with multiplicity.
pub fn davenport_lower_bound(g: &AbelianGroup) -> u64 {
    1 + g.invariant_factors().iter().map(|d| d - 1).sum::<u64>()
}

/// `1 +` the maximal length of a zero-sum-free sequence over `g`.
pub fn davenport_bruteforce(g: &AbelianGroup) -> Result<u64> {
    let n = g.order();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::Resource(format!(
            "brute-force Davenport limited to order {BRUTE_FORCE_CAP}, got {n} for {g}"
        )));
    }
    if n == 1 {
        return Ok(1);
    }
    let n = n as usize;
    let coords: Vec<Vec<u64>> = (0..n as u64).map(|i| g.element_coords(i)).collect();
    let mut add = vec![0u8; n * n];
    for i in 0..n {
        for j in 0..n {
            let sum: Vec<u64> =
                coords[i].iter().zip(&coords[j]).zip(g.invariant_factors()).map(|((x, y), d)| (x + y) % d).collect();
            add[i * n + j] = g.element_index(&sum) as u8;
        }
    }
    // the basis elements, each d_i − 1 times, are zero-sum free: only longer
    // sequences need to be searched for
    let known = (davenport_lower_bound(g) - 1) as u32;
    let mut search = ZeroSumFree { n, add, best: known, seen: HashMap::new() };
    search.extend(1, 0, 0);
    Ok(search.best as u64 + 1)
}

struct ZeroSumFree {
    n: usize,
    add: Vec<u8>,
    best: u32,
    // (subset-sum mask, last element) → longest prefix length that reached it
    seen: HashMap<(u64, u8), u32>,
}

impl ZeroSumFree {
    /// Sequences are nondecreasing in element index; `sums` is the set of
    /// nonempty subsequence sums (bit 0, the identity, is never set).
    fn extend(&mut self, start: usize, sums: u64, len: u32) {
        self.best = self.best.max(len);
        for x in start..self.n {
            let mut next = sums | (1u64 << x);
            let mut bits = sums;
            while bits != 0 {
                let s = bits.trailing_zeros() as usize;
                next |= 1u64 << self.add[s * self.n + x];
                bits &= bits - 1;
            }
            if next & 1 != 0 {
                continue;
            }
            // each further term adds at least one new subsequence sum
            let room = (self.n as u32 - 1) - next.count_ones();
            if len + 1 + room <= self.best {
                continue;
            }
            let key = (next, x as u8);
            match self.seen.get(&key) {
                Some(&l) if l > len => continue,
                _ => {
                    self.seen.insert(key, len + 1);
                }
            }
            self.extend(x, next, len + 1);
        }
    }
}

/// `floor(#G (1 + ln r) / r) = Exp G + floor(Exp G · ln r)` with `r = #G / Exp G`,
/// certified by rational enclosures of `ln r`. The trivial group gives 1.
pub fn ebk_upper(g: &AbelianGroup) -> u64 {
    let exp = g.exponent();
    let r = g.r_ratio();
    if r == 1 {
        return g.order();
    }
    let scale = BigRational::from_integer(BigInt::from(exp));
    let mut terms = 16;
    loop {
        let (lo, hi) = ln_enclosure(r, terms);
        let lo = (&scale * lo).floor().to_integer();
        let hi = (&scale * hi).floor().to_integer();
        if lo == hi || terms >= 1 << 14 {
            // hi is always a valid upper bound
            let extra: u64 = hi.try_into().expect("floor(exp·ln r) fits in u64");
            return exp + extra;
        }
        terms *= 2;
    }
}

/// Rational `lo < ln r < hi` from `ln r = e ln 2 + 2 atanh((m−1)/(m+1))`,
/// `r = 2^e m`, `1 ≤ m < 2`, and `ln 2 = 2 atanh(1/3)`.
fn ln_enclosure(r: u64, terms: usize) -> (BigRational, BigRational) {
    let e = 63 - r.leading_zeros() as u64;
    let pow = 1u64 << e;
    let y = BigRational::new(BigInt::from(r - pow), BigInt::from(r + pow));
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    let (l2_lo, l2_hi) = atanh_enclosure(&third, terms);
    let (m_lo, m_hi) = atanh_enclosure(&y, terms);
    let two = BigRational::from_integer(BigInt::from(2));
    let e = BigRational::from_integer(BigInt::from(e));
    let lo = &two * (&e * l2_lo + m_lo);
    let hi = &two * (&e * l2_hi + m_hi);
    (lo, hi)
}

/// Partial sum of `Σ y^(2k+1)/(2k+1)` and the geometric tail bound, for `0 ≤ y < 1`.
fn atanh_enclosure(y: &BigRational, terms: usize) -> (BigRational, BigRational) {
    if y.is_zero() {
        return (BigRational::zero(), BigRational::zero());
    }
    let y2 = y * y;
    let mut power = y.clone();
    let mut sum = BigRational::zero();
    for k in 0..terms {
        sum += &power / BigRational::from_integer(BigInt::from(2 * k + 1));
        power *= &y2;
    }
    let tail = &power / (BigRational::from_integer(BigInt::from(2 * terms + 1)) * (BigRational::one() - &y2));
    let hi = &sum + tail;
    (sum, hi)
}

/// `Exp G · 2^(rk₂ G)` divides `2 · #G`.
pub fn rank2_exponent_bound_check(g: &AbelianGroup) -> bool {
    let lhs = g.exponent() as u128 * (1u128 << g.rank2());
    (2 * g.order() as u128).is_multiple_of(lhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(f: &[u64]) -> AbelianGroup {
        AbelianGroup::new(f.to_vec()).unwrap()
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(davenport_bruteforce(&AbelianGroup::trivial()).unwrap(), 1);
        for n in 2..=12 {
            assert_eq!(davenport_bruteforce(&AbelianGroup::cyclic(n)).unwrap(), n);
        }
        assert_eq!(davenport_bruteforce(&g(&[2, 2])).unwrap(), 3);
        assert_eq!(davenport_bruteforce(&g(&[3, 3])).unwrap(), 5);
        assert_eq!(davenport_bruteforce(&g(&[2, 2, 2])).unwrap(), 4);
        assert_eq!(davenport_bruteforce(&g(&[2, 4])).unwrap(), 5);
        assert!(matches!(davenport_bruteforce(&AbelianGroup::cyclic(65)), Err(Error::Resource(_))));
    }

    /// Independent oracle for tiny groups: every sequence of length `k` over
    /// the group (with repetition, in any order) has a zero-sum subsequence.
    fn davenport_by_definition(g: &AbelianGroup) -> u64 {
        let n = g.order();
        let add = |x: u64, y: u64| {
            let (a, b) = (g.element_coords(x), g.element_coords(y));
            let s: Vec<u64> = a.iter().zip(&b).zip(g.invariant_factors()).map(|((p, q), d)| (p + q) % d).collect();
            g.element_index(&s)
        };
        (1..=n + 1)
            .find(|&k| {
                // all multisets of size k from the n elements
                let mut idx = vec![0u64; k as usize];
                loop {
                    let has_zero_sum = (1u32..(1 << k)).any(|mask| {
                        (0..k as usize).filter(|i| mask >> i & 1 == 1).fold(0, |acc, i| add(acc, idx[i])) == 0
                    });
                    if !has_zero_sum {
                        return false;
                    }
                    let mut pos = k as usize;
                    while pos > 0 && idx[pos - 1] == n - 1 {
                        pos -= 1;
                    }
                    if pos == 0 {
                        return true;
                    }
                    idx[pos - 1] += 1;
                    let v = idx[pos - 1];
                    for slot in idx.iter_mut().skip(pos) {
                        *slot = v;
                    }
                }
            })
            .unwrap()
    }

    #[test]
    fn brute_force_matches_definition_on_tiny_groups() {
        for f in [&[2u64][..], &[3], &[4], &[2, 2], &[5], &[6], &[2, 4], &[3, 3], &[2, 2, 2]] {
            let grp = g(f);
            assert_eq!(davenport_bruteforce(&grp).unwrap(), davenport_by_definition(&grp), "{grp}");
        }
    }

    #[test]
    fn davenport_dispatch() {
        let r = davenport(&AbelianGroup::trivial(), 64);
        assert_eq!((r.lower, r.exact, r.method), (1, true, DavenportMethod::CyclicExact));
        let r = davenport(&g(&[3, 3]), 64);
        assert_eq!((r.value(), r.method), (Some(5), DavenportMethod::BruteForce));
        let r = davenport(&g(&[10, 10]), 64);
        assert_eq!(r.method, DavenportMethod::BoundsOnly);
        assert_eq!(r.lower, 19);
        assert!(r.upper >= r.lower);
        for n in 1..=64 {
            assert_eq!(davenport(&AbelianGroup::cyclic(n), 64).value(), Some(n));
        }
    }

    #[test]
    fn ebk_examples() {
        assert_eq!(ebk_upper(&AbelianGroup::trivial()), 1);
        assert_eq!(ebk_upper(&AbelianGroup::cyclic(17)), 17);
        assert_eq!(ebk_upper(&g(&[2, 2])), 3);
        assert_eq!(ebk_upper(&g(&[3, 3])), 6);
        // 2 (1 + ln 8) = 6.15...
        assert_eq!(ebk_upper(&g(&[2, 2, 2, 2])), 6);
    }

    #[test]
    fn ln_enclosure_brackets_f64() {
        for r in 2..200u64 {
            let (lo, hi) = ln_enclosure(r, 16);
            let f = (r as f64).ln();
            let lo = lo.numer().to_string().parse::<f64>().unwrap() / lo.denom().to_string().parse::<f64>().unwrap();
            let hi = hi.numer().to_string().parse::<f64>().unwrap() / hi.denom().to_string().parse::<f64>().unwrap();
            assert!(lo <= f + 1e-12 && f <= hi + 1e-12, "r={r}");
            assert!(hi - lo < 1e-9);
        }
    }

    #[test]
    fn rank2_examples() {
        assert!(rank2_exponent_bound_check(&g(&[6])));
        assert!(rank2_exponent_bound_check(&g(&[2, 4])));
        assert!(rank2_exponent_bound_check(&g(&[2, 2, 2])));
        assert!(rank2_exponent_bound_check(&AbelianGroup::trivial()));
    }

    fn shape() -> impl Strategy<Value = AbelianGroup> {
        prop::collection::vec(1u64..12, 0..5).prop_map(|mults| {
            let mut factors = Vec::new();
            let mut d = 1u64;
            for m in mults {
                d *= m;
                if d >= 2 {
                    factors.push(d);
                }
            }
            AbelianGroup::new(factors).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn lemma_rank2_holds(grp in shape()) {
            prop_assert!(rank2_exponent_bound_check(&grp));
        }

        #[test]
        fn ebk_at_least_rank_bound(grp in shape()) {
            prop_assert!(ebk_upper(&grp) >= davenport_lower_bound(&grp) || grp.is_trivial());
        }
    }
}
