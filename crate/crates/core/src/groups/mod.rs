//! Finite Abelian 2-groups in invariant-factor form.
//!
//! A group `Z/a_1 x ... x Z/a_m` with `a_1 | a_2 | ... | a_m` is stored by its
//! factor list. Elements are coordinate tuples; the integer index of an
//! element is its mixed-radix big-endian encoding, so index order and
//! lexicographic coordinate order coincide. Because every factor is a power
//! of two, the index is also the binary pattern the element occupies on a
//! qubit register.

mod subgroup;

pub use subgroup::{h_perp, kernel, reconstruct_subgroup, Subgroup, SubgroupBasis};

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported group order (bits).
const MAX_ORDER_BITS: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    factors: Vec<u64>,
    order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(Vec<u64>);

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl AbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidGroup(
                "at least one cyclic factor is required".into(),
            ));
        }
        if let Some(bad) = factors.iter().find(|a| **a == 0 || !a.is_power_of_two()) {
            return Err(Error::InvalidGroup(format!(
                "factor {bad} is not a power of two"
            )));
        }
        if let Some(w) = factors.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidGroup(format!(
                "factors must form a divisibility chain, {} does not divide {}",
                w[0], w[1]
            )));
        }
        let bits: u32 = factors.iter().map(|a| a.trailing_zeros()).sum();
        if bits > MAX_ORDER_BITS {
            return Err(Error::InvalidGroup(format!(
                "order 2^{bits} exceeds the supported 2^{MAX_ORDER_BITS}"
            )));
        }
        Ok(Self {
            factors,
            order: 1usize << bits,
        })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    /// The trivial group, written `Z1`.
    pub fn trivial() -> Self {
        Self {
            factors: vec![1],
            order: 1,
        }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Qubits needed to hold one element, `log2 |G|`.
    pub fn num_qubits(&self) -> usize {
        self.order.trailing_zeros() as usize
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.factors.len()])
    }

    pub fn element(&self, coords: impl Into<Vec<u64>>) -> Result<GroupElement> {
        let e = GroupElement(coords.into());
        self.check(&e)?;
        Ok(e)
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        e.0.len() == self.factors.len() && e.0.iter().zip(&self.factors).all(|(c, a)| c < a)
    }

    fn check(&self, e: &GroupElement) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::GroupMismatch {
                element: e.to_string(),
                group: self.to_string(),
            })
        }
    }

    /// Mixed-radix big-endian index of `e`. Panics if `e` is not in the group.
    pub fn index_of(&self, e: &GroupElement) -> usize {
        assert!(self.contains(e), "element {e} not in {self}");
        e.0.iter()
            .zip(&self.factors)
            .fold(0usize, |acc, (c, a)| acc * (*a as usize) + *c as usize)
    }

    pub fn element_at(&self, mut index: usize) -> GroupElement {
        assert!(index < self.order, "index {index} out of range for {self}");
        let mut coords = vec![0u64; self.factors.len()];
        for (c, a) in coords.iter_mut().zip(&self.factors).rev() {
            *c = (index % *a as usize) as u64;
            index /= *a as usize;
        }
        GroupElement(coords)
    }

    /// All elements in index (= lexicographic) order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(move |i| self.element_at(i))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub(crate) fn add_unchecked(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.factors)
                .map(|((x, y), m)| (x + y) % m)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(self.neg_unchecked(a))
    }

    pub(crate) fn neg_unchecked(&self, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.factors)
                .map(|(x, m)| (m - x) % m)
                .collect(),
        )
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, &self.neg_unchecked(b)))
    }

    /// `k * a`.
    pub fn scale(&self, a: &GroupElement, k: u64) -> Result<GroupElement> {
        self.check(a)?;
        Ok(GroupElement(
            a.0.iter()
                .zip(&self.factors)
                .map(|(x, m)| ((*x as u128 * k as u128) % *m as u128) as u64)
                .collect(),
        ))
    }

    pub fn order_of(&self, a: &GroupElement) -> u64 {
        a.0.iter()
            .zip(&self.factors)
            .map(|(x, m)| if *x == 0 { 1 } else { m / gcd(*x, *m) })
            .max()
            .unwrap_or(1)
    }

    /// Exponent of the character value: `chi_g(h) = exp(2 pi i k / e)` where
    /// `e` is the largest invariant factor and `k` is returned.
    fn chi_exponent(&self, g: &GroupElement, h: &GroupElement) -> u64 {
        let top = *self.factors.last().unwrap();
        let mut k: u128 = 0;
        for ((gi, hi), a) in g.0.iter().zip(&h.0).zip(&self.factors) {
            k += (*gi as u128) * (*hi as u128) * ((top / a) as u128);
        }
        (k % top as u128) as u64
    }

    /// Character `chi_g(h)`, the product of `omega_{a_i}^{g_i h_i}` over the
    /// cyclic factors.
    pub fn chi(&self, g: &GroupElement, h: &GroupElement) -> Result<Complex64> {
        self.check(g)?;
        self.check(h)?;
        let top = *self.factors.last().unwrap();
        let k = self.chi_exponent(g, h);
        Ok(Complex64::from_polar(1.0, 2.0 * PI * k as f64 / top as f64))
    }

    /// Exact test for `chi_g(h) == 1`.
    pub fn chi_is_trivial(&self, g: &GroupElement, h: &GroupElement) -> bool {
        self.chi_exponent(g, h) == 0
    }

    /// Every subgroup of the group, sorted by order and then by element list.
    pub fn subgroups(&self) -> Vec<Subgroup> {
        Subgroup::whole(self).subgroups()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "Z{a}")?;
        }
        Ok(())
    }
}

impl FromStr for AbelianGroup {
    type Err = Error;

    /// Parses `Z8`, `Z2xZ4`, `Z/8Z x Z/8Z` and similar spellings.
    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut factors = Vec::new();
        for part in cleaned.split(['x', 'X', '×']) {
            let digits = part
                .strip_prefix('Z')
                .map(|p| p.trim_start_matches('/').trim_end_matches('Z'))
                .ok_or_else(|| Error::InvalidGroup(format!("cannot parse factor {part:?}")))?;
            let n: u64 = digits
                .parse()
                .map_err(|_| Error::InvalidGroup(format!("cannot parse factor {part:?}")))?;
            factors.push(n);
        }
        Self::new(factors)
    }
}

impl Serialize for AbelianGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AbelianGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
