//! Small fixed gates.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::perm::BasisPermutation;

pub fn hadamard() -> DMatrix<Complex64> {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    DMatrix::from_row_slice(2, 2, &[h, h, h, -h])
}

/// Control on the first qubit, target on the second.
pub fn cnot() -> BasisPermutation {
    BasisPermutation::new(vec![0, 1, 3, 2]).expect("valid permutation")
}

pub fn swap() -> BasisPermutation {
    BasisPermutation::new(vec![0, 2, 1, 3]).expect("valid permutation")
}

/// `H^{(x) n}`.
pub fn hadamard_n(n: usize) -> DMatrix<Complex64> {
    (0..n).fold(DMatrix::identity(1, 1), |acc, _| acc.kronecker(&hadamard()))
}
