use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::layout::{extract, RegisterLayout, Split};
use super::measure::Distribution;
use super::perm::BasisPermutation;
use crate::error::{Error, Result};

/// Dense simulation is capped at this many qubits.
pub const MAX_QUBITS: usize = 12;

const STATE_TOL: f64 = 1e-10;
const UNITARY_TOL: f64 = 1e-10;
const EIGEN_FLOOR: f64 = -1e-9;

type C = Complex64;

/// An operator on a register subset: a dense unitary or a basis permutation.
#[derive(Clone, Debug)]
pub enum Operator {
    Dense(DMatrix<C>),
    Permutation(BasisPermutation),
}

impl From<DMatrix<C>> for Operator {
    fn from(m: DMatrix<C>) -> Self {
        Operator::Dense(m)
    }
}

impl From<BasisPermutation> for Operator {
    fn from(p: BasisPermutation) -> Self {
        Operator::Permutation(p)
    }
}

impl Operator {
    fn dim(&self) -> usize {
        match self {
            Operator::Dense(m) => m.nrows(),
            Operator::Permutation(p) => p.len(),
        }
    }
}

/// Density matrix over a named register layout.
#[derive(Clone, Debug)]
pub struct QuantumState {
    layout: RegisterLayout,
    rho: DMatrix<C>,
}

impl QuantumState {
    fn check_size(layout: &RegisterLayout) -> Result<()> {
        if layout.n_total() > MAX_QUBITS {
            return Err(Error::TooLarge(format!(
                "{} qubits exceed the dense limit of {MAX_QUBITS}",
                layout.n_total()
            )));
        }
        Ok(())
    }

    /// Validates trace and Hermiticity.
    pub fn from_density(layout: RegisterLayout, rho: DMatrix<C>) -> Result<Self> {
        Self::check_size(&layout)?;
        if rho.nrows() != layout.dim() || rho.ncols() != layout.dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.dim(),
                found: rho.nrows(),
            });
        }
        let tr = rho.trace();
        if (tr - C::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let herm = max_abs(&(&rho - rho.adjoint()));
        if herm > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {herm:.3e})"
            )));
        }
        Ok(Self { layout, rho })
    }

    pub fn from_pure(layout: RegisterLayout, amplitudes: &[C]) -> Result<Self> {
        Self::check_size(&layout)?;
        if amplitudes.len() != layout.dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.dim(),
                found: amplitudes.len(),
            });
        }
        let v = nalgebra::DVector::from_column_slice(amplitudes);
        let rho = &v * v.adjoint();
        Self::from_density(layout, rho)
    }

    pub fn basis(layout: RegisterLayout, index: usize) -> Result<Self> {
        Self::check_size(&layout)?;
        let d = layout.dim();
        if index >= d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: index,
            });
        }
        let mut rho = DMatrix::zeros(d, d);
        rho[(index, index)] = C::new(1.0, 0.0);
        Ok(Self { layout, rho })
    }

    /// All qubits in `|0>`.
    pub fn zero(layout: RegisterLayout) -> Result<Self> {
        Self::basis(layout, 0)
    }

    pub fn maximally_mixed(layout: RegisterLayout) -> Result<Self> {
        Self::check_size(&layout)?;
        let d = layout.dim();
        let rho = DMatrix::from_diagonal_element(d, d, C::new(1.0 / d as f64, 0.0));
        Ok(Self { layout, rho })
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    /// Same density matrix under a different register naming of the same
    /// qubits.
    pub fn relabel(&self, layout: RegisterLayout) -> Result<QuantumState> {
        if layout.n_total() != self.layout.n_total() {
            return Err(Error::DimensionMismatch {
                expected: self.layout.n_total(),
                found: layout.n_total(),
            });
        }
        Ok(Self {
            layout,
            rho: self.rho.clone(),
        })
    }

    pub fn rho(&self) -> &DMatrix<C> {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    /// `self (x) other`, with `other`'s registers appended after ours.
    pub fn tensor(&self, other: &QuantumState) -> Result<QuantumState> {
        let layout = self.layout.concat(&other.layout)?;
        Self::check_size(&layout)?;
        Ok(Self {
            layout,
            rho: self.rho.kronecker(&other.rho),
        })
    }

    /// Applies `op` to the named registers (concatenated in the given order).
    pub fn apply(&self, op: &Operator, targets: &[&str]) -> Result<QuantumState> {
        let qubits = self.layout.qubits_of(targets)?;
        self.apply_on_qubits(op, &qubits)
    }

    pub fn apply_unitary(&self, u: &DMatrix<C>, targets: &[&str]) -> Result<QuantumState> {
        self.apply(&Operator::Dense(u.clone()), targets)
    }

    pub fn apply_permutation(
        &self,
        p: &BasisPermutation,
        targets: &[&str],
    ) -> Result<QuantumState> {
        self.apply(&Operator::Permutation(p.clone()), targets)
    }

    pub fn apply_on_qubits(&self, op: &Operator, qubits: &[usize]) -> Result<QuantumState> {
        let expected = 1usize << qubits.len();
        if op.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: op.dim(),
            });
        }
        let n = self.layout.n_total();
        let rho = match op {
            Operator::Dense(u) => {
                let deviation =
                    max_abs(&(u * u.adjoint() - DMatrix::<C>::identity(expected, expected)));
                if deviation > UNITARY_TOL {
                    return Err(Error::NotUnitary { deviation });
                }
                let split = Split::new(n, qubits);
                let left = left_apply(&self.rho, u, &split);
                left_apply(&left.adjoint(), u, &split).adjoint()
            }
            Operator::Permutation(p) => {
                let mask = scatter(expected - 1, n, qubits);
                let full: Vec<usize> = (0..self.dim())
                    .map(|i| (i & !mask) | scatter(p.apply(extract(i, n, qubits)), n, qubits))
                    .collect();
                permute_full(&self.rho, &full)
            }
        };
        Ok(Self {
            layout: self.layout.clone(),
            rho,
        })
    }

    /// Exchanges the states of two qubits.
    pub fn swap_qubits(&self, a: usize, b: usize) -> Result<QuantumState> {
        let swap = BasisPermutation::new(vec![0, 2, 1, 3])?;
        self.apply_on_qubits(&Operator::Permutation(swap), &[a, b])
    }

    /// Reduced state on the named registers.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<QuantumState> {
        if keep.is_empty() {
            return Err(Error::InvalidLayout(
                "partial trace must keep at least one register".into(),
            ));
        }
        let (layout, old) = self.layout.restrict(keep)?;
        let rho = reduce(&self.rho, self.layout.n_total(), &old);
        Ok(Self { layout, rho })
    }

    /// Traces out `qubits` and puts every one of them into the single-qubit
    /// state `sigma`. The layout is unchanged.
    pub fn replace_qubits(&self, qubits: &[usize], sigma: &DMatrix<C>) -> Result<QuantumState> {
        if sigma.nrows() != 2 || sigma.ncols() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: sigma.nrows(),
            });
        }
        if qubits.is_empty() {
            return Ok(self.clone());
        }
        let n = self.layout.n_total();
        let others: Vec<usize> = (0..n).filter(|q| !qubits.contains(q)).collect();
        let reduced = reduce(&self.rho, n, &others);
        let d = self.dim();
        let rest_of: Vec<usize> = (0..d).map(|i| extract(i, n, &others)).collect();
        let bits_of: Vec<usize> = (0..d).map(|i| extract(i, n, qubits)).collect();
        let k = qubits.len();
        let factor = |a: usize, b: usize| -> C {
            (0..k).fold(C::new(1.0, 0.0), |acc, j| {
                let shift = k - 1 - j;
                acc * sigma[((a >> shift) & 1, (b >> shift) & 1)]
            })
        };
        let rho = DMatrix::from_fn(d, d, |i, j| {
            reduced[(rest_of[i], rest_of[j])] * factor(bits_of[i], bits_of[j])
        });
        Ok(Self {
            layout: self.layout.clone(),
            rho,
        })
    }

    /// Resets `qubits` to `|0>` by discarding their contents.
    pub fn reset_qubits(&self, qubits: &[usize]) -> Result<QuantumState> {
        self.replace_qubits(qubits, &ket0())
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.rho)
    }

    /// Von Neumann entropy in bits.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        entropy_of_spectrum(&self.eigenvalues())
    }

    /// `H(of | given) = H(of, given) - H(given)` in bits.
    pub fn conditional_entropy(&self, of: &[&str], given: &[&str]) -> Result<f64> {
        if of.iter().any(|a| given.contains(a)) {
            return Err(Error::InvalidLayout(
                "conditioning registers must be disjoint".into(),
            ));
        }
        let mut joint_names: Vec<&str> = given.to_vec();
        joint_names.extend_from_slice(of);
        let joint_qubits = self.layout.qubits_of(&joint_names)?;
        let joint = if joint_qubits.len() == self.layout.n_total() {
            self.von_neumann_entropy()?
        } else {
            self.partial_trace(&joint_names)?.von_neumann_entropy()?
        };
        let marginal = if given.is_empty() {
            0.0
        } else {
            self.partial_trace(given)?.von_neumann_entropy()?
        };
        Ok(joint - marginal)
    }

    pub fn purity(&self) -> f64 {
        // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
        self.rho.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Computational-basis outcome probabilities of one register.
    pub fn measure_distribution(&self, register: &str) -> Result<Distribution> {
        let qubits = self.layout.qubits(register)?;
        let n = self.layout.n_total();
        let mut probs = vec![0.0; 1 << qubits.len()];
        for i in 0..self.dim() {
            probs[extract(i, n, qubits)] += self.rho[(i, i)].re;
        }
        Distribution::new(probs)
    }

    /// Plain-text matrix dump for debugging.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in self.layout.registers() {
            let _ = writeln!(out, "# {} {:?}", r.name, r.qubits);
        }
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| {
                    let z = self.rho[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

/// Trace distance `1/2 ||a - b||_1`.
pub fn trace_distance(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let diff = &a.rho - &b.rho;
    Ok(0.5
        * hermitian_eigenvalues(&diff)
            .iter()
            .map(|l| l.abs())
            .sum::<f64>())
}

/// Uhlmann fidelity `(Tr sqrt(sqrt(a) b sqrt(a)))^2`.
pub fn fidelity(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let sqrt_a = hermitian_sqrt(&a.rho)?;
    let m = &sqrt_a * &b.rho * &sqrt_a;
    let root_sum: f64 = hermitian_eigenvalues(&m)
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .sum();
    Ok(root_sum * root_sum)
}

fn to_faer(m: &DMatrix<C>) -> faer::Mat<C> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub(crate) fn hermitian_eigenvalues(m: &DMatrix<C>) -> Vec<f64> {
    if m.nrows() == 1 {
        return vec![m[(0, 0)].re];
    }
    match to_faer(m).self_adjoint_eigenvalues(faer::Side::Lower) {
        Ok(v) => v,
        Err(_) => vec![f64::NAN; m.nrows()],
    }
}

/// Principal square root of a positive semidefinite Hermitian matrix.
fn hermitian_sqrt(m: &DMatrix<C>) -> Result<DMatrix<C>> {
    let eig = to_faer(m)
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::InvalidState(format!("eigendecomposition failed: {e:?}")))?;
    let (u, s) = (eig.U(), eig.S().column_vector());
    let d = m.nrows();
    Ok(DMatrix::from_fn(d, d, |i, j| {
        (0..d)
            .map(|k| u[(i, k)] * s[k].re.max(0.0).sqrt() * u[(j, k)].conj())
            .sum()
    }))
}

/// Shannon entropy of a spectrum in bits with `0 log 0 = 0`; eigenvalues in
/// `[-1e-9, 0)` are clamped to zero.
pub(crate) fn entropy_of_spectrum(values: &[f64]) -> Result<f64> {
    let mut h = 0.0;
    for &l in values {
        if l < EIGEN_FLOOR {
            return Err(Error::InvalidState(format!("negative eigenvalue {l:.3e}")));
        }
        if l > 0.0 {
            h -= l * l.log2();
        }
    }
    Ok(h.max(0.0))
}

pub(crate) fn ket0() -> DMatrix<C> {
    DMatrix::from_row_slice(
        2,
        2,
        &[C::new(1.0, 0.0), C::default(), C::default(), C::default()],
    )
}

pub(crate) fn mixed_qubit() -> DMatrix<C> {
    DMatrix::from_diagonal_element(2, 2, C::new(0.5, 0.0))
}

fn max_abs(m: &DMatrix<C>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn scatter(value: usize, n_total: usize, qubits: &[usize]) -> usize {
    let k = qubits.len();
    qubits
        .iter()
        .enumerate()
        .filter(|(j, _)| (value >> (k - 1 - j)) & 1 == 1)
        .fold(0, |acc, (_, q)| acc | (1 << (n_total - 1 - q)))
}

/// `(U (x) 1) rho` where `U` acts on the split's target qubits.
fn left_apply(rho: &DMatrix<C>, u: &DMatrix<C>, split: &Split) -> DMatrix<C> {
    let d = rho.nrows();
    let k = split.target.len();
    let mut out = DMatrix::zeros(d, d);
    let mut buf = vec![C::default(); k];
    for col in 0..d {
        for &r in &split.rest {
            for (t, b) in buf.iter_mut().enumerate() {
                *b = rho[(split.target[t] | r, col)];
            }
            for a in 0..k {
                let mut s = C::default();
                for (b, x) in buf.iter().enumerate() {
                    s += u[(a, b)] * x;
                }
                out[(split.target[a] | r, col)] = s;
            }
        }
    }
    out
}

fn permute_full(rho: &DMatrix<C>, full: &[usize]) -> DMatrix<C> {
    let d = rho.nrows();
    let mut out = DMatrix::zeros(d, d);
    for j in 0..d {
        for i in 0..d {
            out[(full[i], full[j])] = rho[(i, j)];
        }
    }
    out
}

/// Partial trace keeping `keep` (in that order).
fn reduce(rho: &DMatrix<C>, n_total: usize, keep: &[usize]) -> DMatrix<C> {
    let split = Split::new(n_total, keep);
    let k = split.target.len();
    DMatrix::from_fn(k, k, |a, b| {
        split
            .rest
            .iter()
            .map(|r| rho[(split.target[a] | r, split.target[b] | r)])
            .sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    fn hadamard() -> DMatrix<C> {
        DMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(1.0), c(-1.0)]) * c(FRAC_1_SQRT_2)
    }

    fn bell() -> QuantumState {
        let layout = RegisterLayout::sequential(&[("G", 1), ("S", 1)]).unwrap();
        let s = FRAC_1_SQRT_2;
        QuantumState::from_pure(layout, &[c(s), c(0.0), c(0.0), c(s)]).unwrap()
    }

    #[test]
    fn identity_leaves_state_unchanged() {
        let st = bell();
        let out = st.apply_unitary(&DMatrix::identity(2, 2), &["S"]).unwrap();
        assert!(trace_distance(&st, &out).unwrap() < 1e-12);
    }

    #[test]
    fn hadamard_on_zero() {
        let layout = RegisterLayout::sequential(&[("Q", 1)]).unwrap();
        let st = QuantumState::zero(layout).unwrap();
        let out = st.apply_unitary(&hadamard(), &["Q"]).unwrap();
        for z in out.rho().iter() {
            assert!((z - c(0.5)).norm() < 1e-12);
        }
    }

    #[test]
    fn cnot_flips_target() {
        let layout = RegisterLayout::sequential(&[("A", 1), ("B", 1)]).unwrap();
        let st = QuantumState::basis(layout, 0b10).unwrap();
        let cnot = BasisPermutation::new(vec![0, 1, 3, 2]).unwrap();
        let out = st.apply_permutation(&cnot, &["A", "B"]).unwrap();
        assert!((out.rho()[(3, 3)] - c(1.0)).norm() < 1e-15);
        // the same gate as a dense matrix
        let out2 = st.apply_unitary(&cnot.to_matrix(), &["A", "B"]).unwrap();
        assert!(trace_distance(&out, &out2).unwrap() < 1e-12);
    }

    #[test]
    fn rejects_bad_operators() {
        let st = bell();
        let not_unitary = DMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(0.0), c(1.0)]);
        assert!(matches!(
            st.apply_unitary(&not_unitary, &["G"]),
            Err(Error::NotUnitary { .. })
        ));
        assert!(matches!(
            st.apply_unitary(&DMatrix::identity(4, 4), &["G"]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn partial_trace_examples() {
        let st = bell();
        let g = st.partial_trace(&["G"]).unwrap();
        assert!((g.rho() - mixed_qubit()).iter().all(|z| z.norm() < 1e-12));
        assert!(st.partial_trace(&[]).is_err());

        let a = QuantumState::from_pure(
            RegisterLayout::sequential(&[("G", 1)]).unwrap(),
            &[c(0.6), c(0.8)],
        )
        .unwrap();
        let b = QuantumState::maximally_mixed(RegisterLayout::sequential(&[("S", 2)]).unwrap())
            .unwrap();
        let prod = a.tensor(&b).unwrap();
        assert!(trace_distance(&prod.partial_trace(&["G"]).unwrap(), &a).unwrap() < 1e-12);
        assert!(trace_distance(&prod.partial_trace(&["S"]).unwrap(), &b).unwrap() < 1e-12);
    }

    #[test]
    fn entropy_examples() {
        let layout = RegisterLayout::sequential(&[("Q", 1)]).unwrap();
        assert!(
            QuantumState::zero(layout.clone())
                .unwrap()
                .von_neumann_entropy()
                .unwrap()
                .abs()
                < 1e-12
        );
        let mixed = QuantumState::maximally_mixed(layout).unwrap();
        assert!((mixed.von_neumann_entropy().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conditional_entropy_examples() {
        let l = RegisterLayout::sequential(&[("G", 1), ("S", 1)]).unwrap();
        let mixed = QuantumState::maximally_mixed(l).unwrap();
        assert!((mixed.conditional_entropy(&["S"], &["G"]).unwrap() - 1.0).abs() < 1e-12);
        assert!((bell().conditional_entropy(&["S"], &["G"]).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_spectrum_is_rejected() {
        assert!(entropy_of_spectrum(&[1.1, -0.1]).is_err());
        assert!(entropy_of_spectrum(&[1.0, -1e-12]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn measurement_examples() {
        let l = RegisterLayout::sequential(&[("Q", 2)]).unwrap();
        let d = QuantumState::zero(l.clone())
            .unwrap()
            .measure_distribution("Q")
            .unwrap();
        assert_eq!(d.probs(), &[1.0, 0.0, 0.0, 0.0]);
        let d = QuantumState::maximally_mixed(l)
            .unwrap()
            .measure_distribution("Q")
            .unwrap();
        for p in d.probs() {
            assert!((p - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn distance_examples() {
        let l = RegisterLayout::sequential(&[("Q", 1)]).unwrap();
        let zero = QuantumState::basis(l.clone(), 0).unwrap();
        let one = QuantumState::basis(l.clone(), 1).unwrap();
        let mixed = QuantumState::maximally_mixed(l).unwrap();
        assert!(trace_distance(&zero, &zero).unwrap().abs() < 1e-12);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-12);
        assert!((trace_distance(&zero, &mixed).unwrap() - 0.5).abs() < 1e-12);
        assert!((fidelity(&zero, &zero).unwrap() - 1.0).abs() < 1e-9);
        assert!(fidelity(&zero, &one).unwrap().abs() < 1e-9);
        assert!((fidelity(&zero, &mixed).unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn replace_and_swap() {
        let st = bell();
        let reset = st.reset_qubits(&[1]).unwrap();
        // G keeps its reduced state, S becomes |0>
        assert!(
            trace_distance(
                &reset.partial_trace(&["G"]).unwrap(),
                &st.partial_trace(&["G"]).unwrap()
            )
            .unwrap()
                < 1e-12
        );
        assert!((reset.rho()[(0, 0)] - c(0.5)).norm() < 1e-12);
        assert!((reset.rho()[(2, 2)] - c(0.5)).norm() < 1e-12);

        let l = RegisterLayout::sequential(&[("A", 1), ("B", 1)]).unwrap();
        let st = QuantumState::basis(l, 0b10).unwrap();
        let sw = st.swap_qubits(0, 1).unwrap();
        assert!((sw.rho()[(1, 1)] - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn spectrum_of_sparse_pure_state() {
        // (1/4) sum_g |g, g> on 4 + 4 qubits
        let layout = RegisterLayout::sequential(&[("G", 4), ("S", 4)]).unwrap();
        let mut amp = vec![c(0.0); 256];
        for g in 0..16 {
            amp[(g << 4) | g] = c(0.25);
        }
        let st = QuantumState::from_pure(layout, &amp).unwrap();
        let ev = st.eigenvalues();
        assert!((ev.iter().cloned().fold(f64::MIN, f64::max) - 1.0).abs() < 1e-12);
        assert!(st.von_neumann_entropy().unwrap().abs() < 1e-9);
    }

    #[test]
    fn size_cap() {
        let l = RegisterLayout::sequential(&[("Q", MAX_QUBITS + 1)]).unwrap();
        assert!(matches!(QuantumState::zero(l), Err(Error::TooLarge(_))));
    }
}
