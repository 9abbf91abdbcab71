// SPDX-License-Identifier: Apache-2.0

use super::AbelianGroup;
use crate::error::{domain, Error, Result};

/// `Z^generators / ⟨relations⟩`, one relation per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: usize,
    relations: Vec<Vec<i64>>,
}

impl Presentation {
    pub fn new(generators: usize, relations: Vec<Vec<i64>>) -> Self {
        Presentation { generators, relations }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &[Vec<i64>] {
        &self.relations
    }

    pub fn add_relation(&mut self, row: Vec<i64>) -> Result<()> {
        if row.len() != self.generators {
            return domain(format!("relation has {} entries, expected {}", row.len(), self.generators));
        }
        self.relations.push(row);
        Ok(())
    }

    /// Presentation of the direct sum, generators of `self` first.
    pub fn direct_sum(&self, other: &Presentation) -> Presentation {
        let n = self.generators + other.generators;
        let mut relations = Vec::with_capacity(self.relations.len() + other.relations.len());
        for r in &self.relations {
            let mut row = r.clone();
            row.resize(n, 0);
            relations.push(row);
        }
        for r in &other.relations {
            let mut row = vec![0; self.generators];
            row.extend_from_slice(r);
            relations.push(row);
        }
        Presentation { generators: n, relations }
    }
}

fn overflow() -> Error {
    Error::Resource("integer overflow in Smith normal form".into())
}

/// Nonnegative Smith diagonal of `rows` (each of length `cols`), padded with
/// zeros to `min(rows, cols)` entries; consecutive entries divide each other.
// row operations read two rows of the same matrix; indices are clearer than iterators
#[allow(clippy::needless_range_loop)]
pub fn smith_diagonal(rows: &[Vec<i64>], cols: usize) -> Result<Vec<u128>> {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let r = a.len();
    let size = r.min(cols);
    let mut diag = vec![0u128; size];
    for t in 0..size {
        loop {
            let pivot = (t..r)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].unsigned_abs());
            let Some((pi, pj)) = pivot else {
                return Ok(diag);
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..r {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        let delta = q.checked_mul(a[t][j]).ok_or_else(overflow)?;
                        a[i][j] = a[i][j].checked_sub(delta).ok_or_else(overflow)?;
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        let delta = q.checked_mul(row[t]).ok_or_else(overflow)?;
                        row[j] = row[j].checked_sub(delta).ok_or_else(overflow)?;
                    }
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad_row = (t + 1..r).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
            match bad_row {
                Some(i) => {
                    for j in t..cols {
                        a[t][j] = a[t][j].checked_add(a[i][j]).ok_or_else(overflow)?;
                    }
                }
                None => break,
            }
        }
        diag[t] = a[t][t].unsigned_abs();
    }
    Ok(diag)
}

/// Invariant factors of a finitely presented abelian group; the group must be finite.
pub fn quotient_structure(p: &Presentation) -> Result<AbelianGroup> {
    if let Some(row) = p.relations.iter().find(|row| row.len() != p.generators) {
        return domain(format!("relation has {} entries, expected {}", row.len(), p.generators));
    }
    if p.generators == 0 {
        return Ok(AbelianGroup::trivial());
    }
    let diag = smith_diagonal(&p.relations, p.generators)?;
    if diag.len() < p.generators || diag.contains(&0) {
        return domain("presentation defines an infinite group");
    }
    let factors = diag
        .into_iter()
        .filter(|&d| d > 1)
        .map(|d| u64::try_from(d).map_err(|_| overflow()))
        .collect::<Result<Vec<u64>>>()?;
    AbelianGroup::new(factors).map_err(|e| Error::Invariant(format!("Smith diagonal not a divisor chain: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(f: &[u64]) -> AbelianGroup {
        AbelianGroup::new(f.to_vec()).unwrap()
    }

    #[test]
    fn quotient_examples() {
        // C4 / ⟨2⟩
        assert_eq!(AbelianGroup::cyclic(4).quotient(&[vec![2]]).unwrap(), g(&[2]));
        // C2 ⊕ C2 / ⟨(1,1)⟩
        assert_eq!(g(&[2, 2]).quotient(&[vec![1, 1]]).unwrap(), g(&[2]));
        // C12 / ⟨3⟩, the subgroup of order 4
        assert_eq!(AbelianGroup::cyclic(12).quotient(&[vec![3]]).unwrap(), g(&[3]));
        assert_eq!(AbelianGroup::cyclic(12).quotient(&[vec![1]]).unwrap(), AbelianGroup::trivial());
    }

    #[test]
    fn infinite_and_malformed_presentations() {
        assert!(quotient_structure(&Presentation::new(2, vec![vec![2, 0]])).is_err());
        assert!(quotient_structure(&Presentation::new(2, vec![vec![2]])).is_err());
        assert!(quotient_structure(&Presentation::new(1, vec![vec![0]])).is_err());
        let mut p = Presentation::new(1, vec![]);
        assert!(p.add_relation(vec![1, 2]).is_err());
    }

    #[test]
    fn non_diagonal_relations() {
        // Z^2 / ⟨(2,4), (6,8)⟩: det = -8, gcd of entries 2 → C2 ⊕ C4
        let p = Presentation::new(2, vec![vec![2, 4], vec![6, 8]]);
        assert_eq!(quotient_structure(&p).unwrap(), g(&[2, 4]));
        let p = Presentation::new(2, vec![vec![4, 0], vec![0, 6]]);
        assert_eq!(quotient_structure(&p).unwrap(), g(&[2, 12]));
        let sum = AbelianGroup::cyclic(3).presentation().direct_sum(&AbelianGroup::cyclic(4).presentation());
        assert_eq!(quotient_structure(&sum).unwrap(), g(&[12]));
    }

    /// Coset-counting oracle: |G / H| with H generated by `gens` inside `g`.
    fn quotient_order_by_enumeration(grp: &AbelianGroup, gens: &[Vec<i64>]) -> u64 {
        let n = grp.order();
        let reduce = |v: &[i64]| -> u64 {
            let c: Vec<u64> =
                v.iter().zip(grp.invariant_factors()).map(|(&x, &d)| x.rem_euclid(d as i64) as u64).collect();
            grp.element_index(&c)
        };
        let mut in_h = vec![false; n as usize];
        in_h[0] = true;
        let mut frontier = vec![0u64];
        while let Some(x) = frontier.pop() {
            let cx = grp.element_coords(x);
            for g in gens {
                let s: Vec<i64> = cx.iter().zip(g).map(|(&a, &b)| a as i64 + b).collect();
                let y = reduce(&s);
                if !in_h[y as usize] {
                    in_h[y as usize] = true;
                    frontier.push(y);
                }
            }
        }
        n / in_h.iter().filter(|&&b| b).count() as u64
    }

    proptest! {
        #[test]
        fn quotient_order_times_subgroup_is_ambient(
            d in prop::collection::vec(2u64..7, 1..4),
            gens in prop::collection::vec(prop::collection::vec(-6i64..6, 3), 0..3),
        ) {
            let grp = AbelianGroup::from_cyclic_orders(&d).unwrap();
            let r = grp.rank();
            let gens: Vec<Vec<i64>> = gens.into_iter().map(|v| v[..r].to_vec()).collect();
            let q = grp.quotient(&gens).unwrap();
            prop_assert_eq!(q.order(), quotient_order_by_enumeration(&grp, &gens));
        }
    }
}
