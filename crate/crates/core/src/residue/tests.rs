// SPDX-License-Identifier: Apache-2.0

use super::*;
use crate::abelian::{quotient_structure, AbelianGroup};
use proptest::prelude::*;

fn field(d: i64) -> QuadField {
    QuadField::new(d).unwrap()
}

const FIELDS: [i64; 5] = [-1, -3, -5, 2, 5];

/// Multiplication-by-(a + bτ) matrix on the basis {1, τ}, over the integers.
fn mult_matrix(field: &QuadField, a: i64, b: i64) -> [[i64; 2]; 2] {
    let (t, n) = field.tau_relation();
    [[a, b * n], [b, a + b * t]]
}

fn matrix_product(x: [[i64; 2]; 2], y: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut z = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            z[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    z
}

#[test]
fn multiplication_examples() {
    let r = ResidueRing::new(&field(2), 5).unwrap();
    let x = r.element(1, 1);
    let sq = res_mul(&x, &x).unwrap();
    assert_eq!((sq.a(), sq.b()), (3, 2));
    assert_eq!(res_pow(&x, 0), r.one());

    let k = field(5);
    let r = ResidueRing::new(&k, 3).unwrap();
    let x = r.element(1, 1);
    let sq = x.pow(2);
    assert_eq!((sq.a(), sq.b()), (2, 0));
    let m = matrix_product(mult_matrix(&k, 1, 1), mult_matrix(&k, 1, 1));
    assert_eq!((m[0][0].rem_euclid(3) as u64, m[1][0].rem_euclid(3) as u64), (sq.a(), sq.b()));

    let other = ResidueRing::new(&field(2), 7).unwrap().one();
    assert!(matches!(r.one().mul(&other), Err(Error::Domain(_))));
    let other_field = ResidueRing::new(&field(-1), 3).unwrap().one();
    assert!(r.one().mul(&other_field).is_err());
}

#[test]
fn multiplication_matches_matrix_model() {
    for d in FIELDS {
        let k = field(d);
        for f in [2u64, 7, 12, 25] {
            let r = ResidueRing::new(&k, f).unwrap();
            for (a, b, c, e) in [(1, 2, 3, 4), (5, 0, 2, 9), (11, 13, 17, 19), (0, 1, 0, 1)] {
                let z = r.element(a, b).mul(&r.element(c, e)).unwrap();
                let m = matrix_product(mult_matrix(&k, a, b), mult_matrix(&k, c, e));
                let want = r.element(m[0][0], m[1][0]);
                assert_eq!(z, want, "D={d} f={f}");
            }
        }
    }
}

#[test]
fn psi_and_l_examples() {
    assert_eq!(psi(&field(2), 1).unwrap(), 1);
    assert_eq!(psi(&field(2), 3).unwrap(), 4);
    assert_eq!(psi(&field(-1), 4).unwrap(), 4);
    assert!(psi(&field(2), 0).is_err());
    assert_eq!(big_l(&field(2), 1).unwrap(), 1);
    assert_eq!(big_l(&field(2), 12).unwrap(), 4);
    assert_eq!(big_l(&field(-1), 15).unwrap(), 4);
}

fn euler_phi(f: u64) -> u64 {
    (1..=f).filter(|&c| gcd_u64(c, f) == 1).count() as u64
}

#[test]
fn psi_matches_unit_count() {
    for d in FIELDS {
        let k = field(d);
        for f in 1..=60u64 {
            let r = ResidueRing::new(&k, f).unwrap();
            let units = (0..f)
                .flat_map(|a| (0..f).map(move |b| (a, b)))
                .filter(|&(a, b)| gcd_u64(r.norm_raw(a, b), f) == 1)
                .count() as u64;
            assert_eq!(psi(&k, f).unwrap(), units / euler_phi(f), "D={d} f={f}");
        }
    }
}

/// Lexicographically least (b', a') over all scalings by integers prime to f.
fn brute_force_label(r: &ResidueRing, a: u64, b: u64) -> (u64, u64) {
    let f = r.modulus();
    (1..=f)
        .filter(|&c| gcd_u64(c, f) == 1)
        .map(|c| (mul_mod(c, b, f), mul_mod(c, a, f)))
        .min()
        .map(|(b, a)| (a, b))
        .unwrap()
}

#[test]
fn canonical_labels_match_brute_force() {
    for d in FIELDS {
        let k = field(d);
        for f in 1..=60u64 {
            let r = ResidueRing::new(&k, f).unwrap();
            for a in 0..f {
                for b in 0..f {
                    if gcd_u64(r.norm_raw(a, b), f) == 1 {
                        assert_eq!(r.canonical(a, b), brute_force_label(&r, a, b), "D={d} f={f} {a}+{b}τ");
                    }
                }
            }
        }
    }
}

#[test]
fn precl_elements() {
    let r = ResidueRing::new(&field(-1), 3).unwrap();
    let i = PreClElement::new(r.tau()).unwrap();
    assert_eq!(precl_order(&i), 2);
    assert_eq!(precl_order(&PreClElement::new(r.one()).unwrap()), 1);
    assert!(PreClElement::new(r.element(0, 0)).is_err());
    // 2i and i are the same class
    let two_i = PreClElement::new(r.element(0, 2)).unwrap();
    assert_eq!(two_i, i);
    assert!(two_i.canonicalize().is_canonical());
    assert_eq!(two_i.canonicalize().label(), (0, 1));

    let k = field(2);
    let eps = unit_image(&k, 3).unwrap();
    assert_eq!(precl_order(&eps), 4);
    assert!(eps.pow(4).is_identity());
    assert!(!eps.pow(2).is_identity());
}

#[test]
fn ell_examples() {
    for d in FIELDS {
        assert_eq!(ell(&field(d), 1).unwrap(), 1);
    }
    assert_eq!(ell(&field(2), 2).unwrap(), 2);
    assert_eq!(ell(&field(2), 3).unwrap(), 4);
    assert_eq!(ell(&field(-1), 3).unwrap(), 2);
    assert_eq!(ell(&field(-5), 7).unwrap(), 1);
}

#[test]
fn ell_agrees_with_order_of_unit_class() {
    for d in FIELDS {
        let k = field(d);
        for f in 1..=500u64 {
            let l = ell(&k, f).unwrap();
            assert_eq!(l, precl_order(&unit_image(&k, f).unwrap()), "D={d} f={f}");
            assert_eq!(psi(&k, f).unwrap() % l, 0);
        }
    }
}

#[test]
fn ell_divides_delta_p_plus_one_for_inert_p() {
    let k = field(2);
    let delta = k.delta_exponent().unwrap();
    for p in crate::arith::sieve_primes(3000) {
        if k.kronecker(p as i64) == -1 {
            assert_eq!(delta * (p + 1) % ell(&k, p).unwrap(), 0, "p={p}");
        }
    }
}

#[test]
fn precl_structure_examples() {
    let c = |n| AbelianGroup::cyclic(n);
    assert_eq!(precl_structure(&field(2), 1).unwrap(), AbelianGroup::trivial());
    assert_eq!(precl_structure(&field(2), 3).unwrap(), c(4));
    assert_eq!(precl_structure(&field(2), 9).unwrap(), c(12));
    // 7 splits in Q(√2): PreCl(O_7) ≅ F_7^× × F_7^× / F_7^× ≅ C6
    assert_eq!(precl_structure(&field(2), 7).unwrap(), c(6));
    // ψ(4) = ψ(3) = 4 in Q(i)
    let g = precl_structure(&field(-1), 12).unwrap();
    assert_eq!(g.order(), 16);
    let err = precl_structure_with_budget(&field(2), 9 * 49, 20).unwrap_err();
    assert!(matches!(&err, Error::Resource(m) if m.contains("O_49")), "{err}");
}

/// Structure from the explicit enumeration oracle: orders of all elements.
fn structure_by_element_orders(k: &QuadField, f: u64) -> Vec<u64> {
    let r = ResidueRing::new(k, f).unwrap();
    let mut seen = std::collections::HashSet::new();
    let mut orders = Vec::new();
    for a in 0..f {
        for b in 0..f {
            if gcd_u64(r.norm_raw(a, b), f) == 1 && seen.insert(r.canonical(a, b)) {
                orders.push(precl_order(&PreClElement::new(r.element(a as i64, b as i64)).unwrap()));
            }
        }
    }
    orders.sort_unstable();
    orders
}

fn element_orders_of(g: &AbelianGroup) -> Vec<u64> {
    let mut orders: Vec<u64> = (0..g.order())
        .map(|i| {
            g.element_coords(i).iter().zip(g.invariant_factors()).map(|(&c, &d)| d / gcd_u64(c, d)).fold(1, lcm_u64)
        })
        .collect();
    orders.sort_unstable();
    orders
}

#[test]
fn structure_matches_presentation_and_element_orders() {
    for d in FIELDS {
        let k = field(d);
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64, 81, 121, 125] {
            let (p, e) = factor_u64(q)[0];
            let t = prime_power_precl(&k, p, e, DEFAULT_ENUMERATION_BUDGET).unwrap();
            assert_eq!(t.structure().order(), psi(&k, q).unwrap());
            assert_eq!(&quotient_structure(t.presentation()).unwrap(), t.structure(), "D={d} q={q}");
            if q <= 49 {
                assert_eq!(element_orders_of(t.structure()), structure_by_element_orders(&k, q), "D={d} q={q}");
            }
        }
    }
}

#[test]
fn exponent_witness_orders() {
    // 1 + 2√D at 2^k for D ≡ 2, 3 mod 4
    for d in [-1i64, -5, -2, 2, 3] {
        let k = field(d);
        for e in 3..=10u32 {
            let r = ResidueRing::new(&k, 1 << e).unwrap();
            let alpha = r.element(1, 2);
            let o = precl_order(&PreClElement::new(alpha).unwrap());
            assert!(o == 1 << (e - 2) || o == 1 << (e - 1), "D={d} 2^{e}: order {o}");
        }
    }
    // 1 + 3√D at 3^k, exact order 3^(k−1)
    for d in FIELDS.into_iter().chain([3, 7]) {
        let k = field(d);
        for e in 2..=7u32 {
            let r = ResidueRing::new(&k, 3u64.pow(e)).unwrap();
            let s = r.sqrt_d();
            let alpha = r.element(1 + 3 * s.a() as i64, 3 * s.b() as i64);
            assert_eq!(precl_order(&PreClElement::new(alpha).unwrap()), 3u64.pow(e - 1), "D={d} 3^{e}");
        }
    }
}

#[test]
fn cyclic_for_primes_above_three() {
    for d in FIELDS {
        let k = field(d);
        for q in [5u64, 7, 11, 13, 25, 49, 121, 125, 169, 343] {
            assert!(precl_structure(&k, q).unwrap().is_cyclic(), "D={d} q={q}");
        }
    }
}

proptest! {
    #[test]
    fn canonical_label_is_a_class_invariant(d_idx in 0usize..5, f in 2u64..400, a in 0u64..400, b in 0u64..400, c in 1u64..400) {
        let k = field(FIELDS[d_idx]);
        let r = ResidueRing::new(&k, f).unwrap();
        let x = r.element(a as i64, b as i64);
        prop_assume!(x.is_unit() && gcd_u64(c, f) == 1);
        let y = r.element((c * a) as i64, (c * b) as i64);
        prop_assert_eq!(r.canonical(x.a(), x.b()), r.canonical(y.a(), y.b()));
    }

    #[test]
    fn order_divides_psi_and_kills(d_idx in 0usize..5, f in 1u64..3000, a in 0u64..3000, b in 0u64..3000) {
        let k = field(FIELDS[d_idx]);
        let r = ResidueRing::new(&k, f).unwrap();
        let x = r.element(a as i64, b as i64);
        prop_assume!(x.is_unit());
        let x = PreClElement::new(x).unwrap();
        let o = precl_order(&x);
        prop_assert_eq!(r.psi() % o, 0);
        prop_assert!(x.pow(o).is_identity());
        prop_assert_eq!(psi(&k, f).unwrap(), r.psi());
    }
}
