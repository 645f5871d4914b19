use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of computational basis states of `num_qubits` qubits,
/// `|i> -> |map[i]>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct BasisPermutation {
    map: Vec<usize>,
    num_qubits: usize,
}

impl TryFrom<Vec<usize>> for BasisPermutation {
    type Error = Error;

    fn try_from(map: Vec<usize>) -> Result<Self> {
        Self::new(map)
    }
}

impl From<BasisPermutation> for Vec<usize> {
    fn from(p: BasisPermutation) -> Self {
        p.map
    }
}

impl BasisPermutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        if !map.len().is_power_of_two() {
            return Err(Error::InvalidPermutation(format!(
                "length {} is not a power of two",
                map.len()
            )));
        }
        let mut hit = vec![false; map.len()];
        for &m in &map {
            if m >= map.len() || hit[m] {
                return Err(Error::InvalidPermutation(format!(
                    "{m} repeated or out of range"
                )));
            }
            hit[m] = true;
        }
        let num_qubits = map.len().trailing_zeros() as usize;
        Ok(Self { map, num_qubits })
    }

    pub fn identity(num_qubits: usize) -> Self {
        Self {
            map: (0..1 << num_qubits).collect(),
            num_qubits,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &m) in self.map.iter().enumerate() {
            inv[m] = i;
        }
        Self {
            map: inv,
            num_qubits: self.num_qubits,
        }
    }

    /// `next` applied after `self`.
    pub fn then(&self, next: &BasisPermutation) -> Result<Self> {
        if next.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: next.len(),
            });
        }
        Ok(Self {
            map: self.map.iter().map(|&m| next.map[m]).collect(),
            num_qubits: self.num_qubits,
        })
    }

    /// `self` on the leading qubits, `low` on the trailing ones.
    pub fn tensor(&self, low: &BasisPermutation) -> Self {
        let shift = low.num_qubits;
        let map = (0..self.len() * low.len())
            .map(|i| (self.map[i >> shift] << shift) | low.map[i & (low.len() - 1)])
            .collect();
        Self {
            map,
            num_qubits: self.num_qubits + low.num_qubits,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &m)| i == m)
    }

    /// If the permutation only relabels qubit wires, returns `wires` with
    /// input qubit `j` carried to output qubit `wires[j]` (qubit 0 = most
    /// significant bit).
    pub fn wire_permutation(&self) -> Option<Vec<usize>> {
        let n = self.num_qubits;
        if self.map[0] != 0 {
            return None;
        }
        let mut wires = Vec::with_capacity(n);
        for j in 0..n {
            let image = self.map[1 << (n - 1 - j)];
            if !image.is_power_of_two() {
                return None;
            }
            wires.push(n - 1 - image.trailing_zeros() as usize);
        }
        let mut sorted = wires.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != n {
            return None;
        }
        let consistent = (0..self.len()).all(|i| {
            let expect = (0..n)
                .filter(|j| (i >> (n - 1 - j)) & 1 == 1)
                .fold(0, |acc, j| acc | (1 << (n - 1 - wires[j])));
            self.map[i] == expect
        });
        consistent.then_some(wires)
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let d = self.len();
        let mut m = DMatrix::zeros(d, d);
        for (i, &j) in self.map.iter().enumerate() {
            m[(j, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(BasisPermutation::new(vec![0, 0]).is_err());
        assert!(BasisPermutation::new(vec![0, 1, 2]).is_err());
        assert!(BasisPermutation::new(vec![0, 2]).is_err());
    }

    #[test]
    fn inverse_composes_to_identity() {
        let p = BasisPermutation::new(vec![3, 0, 2, 1]).unwrap();
        assert!(p.then(&p.inverse()).unwrap().is_identity());
        assert!(p.inverse().then(&p).unwrap().is_identity());
    }

    #[test]
    fn wire_permutation_detection() {
        // swap of two qubits: |ab> -> |ba>
        let swap = BasisPermutation::new(vec![0, 2, 1, 3]).unwrap();
        assert_eq!(swap.wire_permutation(), Some(vec![1, 0]));
        assert_eq!(
            BasisPermutation::identity(3).wire_permutation(),
            Some(vec![0, 1, 2])
        );
        // a CNOT is a basis permutation but not a wire relabeling
        let cnot = BasisPermutation::new(vec![0, 1, 3, 2]).unwrap();
        assert_eq!(cnot.wire_permutation(), None);
    }

    #[test]
    fn tensor_acts_on_high_and_low_bits() {
        let x = BasisPermutation::new(vec![1, 0]).unwrap();
        let id = BasisPermutation::identity(1);
        assert_eq!(x.tensor(&id).as_slice(), &[2, 3, 0, 1]);
        assert_eq!(id.tensor(&x).as_slice(), &[1, 0, 3, 2]);
    }
}
