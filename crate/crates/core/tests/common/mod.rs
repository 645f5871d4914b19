#![allow(dead_code)]

use std::f64::consts::PI;

use hsp_erasure::erasure::PromiseK;
use hsp_erasure::groups::{AbelianGroup, GroupElement};
use hsp_erasure::hsp::{builtin, make_coset_oracle, OracleSpec, BUILTIN_NAMES};
use num_complex::Complex64;

pub const SEEDS: [u64; 20] = [
    1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987, 1597, 2584, 4181, 6765, 10946,
];

/// `exp(2 pi i sum_j g_j h_j / a_j)` evaluated directly in floating point.
pub fn character(group: &AbelianGroup, g: &GroupElement, h: &GroupElement) -> Complex64 {
    let phase: f64 = group
        .factors()
        .iter()
        .zip(g.coords().iter().zip(h.coords()))
        .map(|(a, (x, y))| (x * y) as f64 / *a as f64)
        .sum();
    Complex64::from_polar(1.0, 2.0 * PI * phase)
}

/// Indices of the characters of `group` that are trivial on every element of `sub`.
pub fn brute_perp(group: &AbelianGroup, sub: &[GroupElement]) -> Vec<usize> {
    (0..group.order())
        .filter(|&i| {
            let x = group.element_at(i);
            sub.iter()
                .all(|h| (character(group, &x, h) - 1.0).norm() < 1e-9)
        })
        .collect()
}

pub fn all_instances() -> Vec<(String, OracleSpec)> {
    let mut out: Vec<(String, OracleSpec)> = BUILTIN_NAMES
        .iter()
        .map(|n| (n.to_string(), builtin(n).unwrap()))
        .collect();
    for g in ["Z4", "Z8", "Z2xZ4", "Z2xZ2"] {
        let group: AbelianGroup = g.parse().unwrap();
        for h in group.subgroups() {
            let bits = h.index().trailing_zeros() as usize;
            out.push((format!("{g} / {h}"), make_coset_oracle(&h, bits).unwrap()));
        }
    }
    out
}

pub fn intermediate(f: &OracleSpec) -> Vec<PromiseK> {
    f.group()
        .subgroups()
        .into_iter()
        .filter(|k| f.hidden().is_subgroup_of(k))
        .map(|k| PromiseK::new(k, f.hidden()).unwrap())
        .collect()
}
