use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{BathSpec, ErasureTrace};
use crate::error::{Error, Result};

/// Largest bath simulated with the full joint density matrix.
pub const MAX_QUANTUM_BATH: usize = 8;

const BOUNDARY_TOL: f64 = 1e-12;
const CHECK_TOL: f64 = 1e-10;

type C = Complex64;

/// A finite window `[k_min, k_max]` of the work-storage ladder with levels
/// `E_k = k Delta`. The storage starts at `E_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LadderSpec {
    k_min: i64,
    k_max: i64,
}

impl LadderSpec {
    pub fn new(k_min: i64, k_max: i64) -> Result<Self> {
        if !(k_min < 0 && 0 < k_max) {
            return Err(Error::TruncationTooNarrow(format!(
                "window [{k_min}, {k_max}] must contain 0 strictly inside"
            )));
        }
        Ok(Self { k_min, k_max })
    }

    /// Window reaching one level past the largest displacement the `N`
    /// swaps can cause, `1 + 2 + ... + N`.
    pub fn for_bath(n: usize) -> Self {
        let reach = (n * (n + 1) / 2) as i64 + 1;
        Self {
            k_min: -reach,
            k_max: reach,
        }
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    pub fn k_max(&self) -> i64 {
        self.k_max
    }

    pub fn levels(&self) -> usize {
        (self.k_max - self.k_min + 1) as usize
    }

    fn level_of(&self, i: usize) -> i64 {
        self.k_min + i as i64
    }
}

/// `U^(l)` on storage (x) system (x) bath qubit `l`: exchanges
/// `|E_k, 0_S, 1_l>` with `|E_{k+l}, 1_S, 0_l>` and acts as the identity on
/// every other basis state, including pairs cut off by the window.
#[derive(Clone, Debug)]
pub struct SwapUnitary {
    ell: usize,
    ladder: LadderSpec,
}

impl SwapUnitary {
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn dim(&self) -> usize {
        self.ladder.levels() * 4
    }

    /// Image of the local basis state `((level * 2 + s) * 2 + b)`.
    pub fn apply(&self, index: usize) -> usize {
        let (level, s, b) = (index / 4, (index / 2) & 1, index & 1);
        let (level, s, b) = self.map(level, s, b);
        (level * 2 + s) * 2 + b
    }

    fn map(&self, level: usize, s: usize, b: usize) -> (usize, usize, usize) {
        let top = self.ladder.levels();
        match (s, b) {
            (0, 1) if level + self.ell < top => (level + self.ell, 1, 0),
            (1, 0) if level >= self.ell => (level - self.ell, 0, 1),
            _ => (level, s, b),
        }
    }

    pub fn to_dense(&self) -> DMatrix<C> {
        let d = self.dim();
        let mut u = DMatrix::zeros(d, d);
        for i in 0..d {
            u[(self.apply(i), i)] = C::new(1.0, 0.0);
        }
        u
    }

    /// Storage plus bath-qubit energy, in units of `Delta`.
    pub fn local_hamiltonian(&self) -> DMatrix<C> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |i, j| {
            if i != j {
                return C::default();
            }
            C::new(self.energy(i), 0.0)
        })
    }

    fn energy(&self, i: usize) -> f64 {
        self.ladder.level_of(i / 4) as f64 + (self.ell * (i & 1)) as f64
    }
}

fn max_abs(m: &DMatrix<C>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Builds `U^(ell)` on the given window and checks that it is unitary and
/// commutes with the joint Hamiltonian.
pub fn build_swap_unitary(ell: usize, ladder: LadderSpec) -> Result<SwapUnitary> {
    if ell == 0 || ell as i64 > ladder.k_max - ladder.k_min {
        return Err(Error::TruncationTooNarrow(format!(
            "a shift by {ell} does not fit in [{}, {}]",
            ladder.k_min, ladder.k_max
        )));
    }
    let u = SwapUnitary { ell, ladder };
    // U is a basis permutation and H is diagonal, so U U^dagger = 1 iff the
    // map is a bijection and ||[U, H]||_max = max_i |E_i - E_{U(i)}|.
    let d = u.dim();
    let mut hit = vec![false; d];
    for i in 0..d {
        let j = u.apply(i);
        if hit[j] {
            return Err(Error::NotUnitary { deviation: 1.0 });
        }
        hit[j] = true;
    }
    let comm = (0..d)
        .map(|i| (u.energy(i) - u.energy(u.apply(i))).abs())
        .fold(0.0, f64::max);
    if comm > CHECK_TOL {
        return Err(Error::InvalidState(format!(
            "U^({ell}) changes the energy ({comm:.3e})"
        )));
    }
    Ok(u)
}

/// Joint state of storage, system and bath as a sparse density matrix.
struct Joint {
    n: usize,
    ladder: LadderSpec,
    rho: BTreeMap<(usize, usize), C>,
}

impl Joint {
    fn split(&self, index: usize) -> (usize, usize, usize) {
        let bath = index & ((1 << self.n) - 1);
        let rest = index >> self.n;
        (rest / 2, rest & 1, bath)
    }

    fn join(&self, level: usize, s: usize, bath: usize) -> usize {
        ((level * 2 + s) << self.n) | bath
    }

    fn apply(&mut self, u: &SwapUnitary) {
        let bit = self.n - u.ell;
        let image = |idx: usize| {
            let (level, s, bath) = self.split(idx);
            let b = (bath >> bit) & 1;
            let (level, s, b) = u.map(level, s, b);
            self.join(level, s, (bath & !(1 << bit)) | (b << bit))
        };
        self.rho = self
            .rho
            .iter()
            .map(|(&(r, c), &v)| ((image(r), image(c)), v))
            .collect();
    }

    fn diagonal(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.rho
            .iter()
            .filter(|((r, c), _)| r == c)
            .map(|(&(r, _), v)| (r, v.re))
    }

    fn storage_energy(&self) -> f64 {
        self.diagonal()
            .map(|(i, p)| self.ladder.level_of(self.split(i).0) as f64 * p)
            .sum()
    }

    fn boundary_population(&self) -> f64 {
        let top = self.ladder.levels() - 1;
        self.diagonal()
            .filter(|(i, _)| {
                let level = self.split(*i).0;
                level == 0 || level == top
            })
            .map(|(_, p)| p)
            .sum()
    }

    fn system(&self) -> DMatrix<C> {
        let mut out = DMatrix::zeros(2, 2);
        for (&(r, c), v) in &self.rho {
            let (lr, sr, br) = self.split(r);
            let (lc, sc, bc) = self.split(c);
            if lr == lc && br == bc {
                out[(sr, sc)] += v;
            }
        }
        out
    }
}

fn check_system(sigma: &DMatrix<C>) -> Result<()> {
    if sigma.nrows() != 2 || sigma.ncols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: sigma.nrows(),
        });
    }
    let herm = max_abs(&(sigma - sigma.adjoint()));
    let tr = sigma.trace();
    let min_eig = crate::qstate::hermitian_eigenvalues(sigma)
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    if herm > CHECK_TOL || (tr - C::new(1.0, 0.0)).norm() > CHECK_TOL || min_eig < -CHECK_TOL {
        return Err(Error::InvalidState(
            "system state is not a density matrix".into(),
        ));
    }
    Ok(())
}

fn simulate(
    bath: &BathSpec,
    sigma: &DMatrix<C>,
    order: &[usize],
) -> Result<(ErasureTrace, DMatrix<C>)> {
    check_system(sigma)?;
    let n = bath.n();
    if n > MAX_QUANTUM_BATH {
        return Err(Error::TooLarge(format!(
            "quantum engine handles at most {MAX_QUANTUM_BATH} bath qubits, got {n}"
        )));
    }
    let ladder = LadderSpec::for_bath(n);
    let unitaries = (1..=n)
        .map(|l| build_swap_unitary(l, ladder))
        .collect::<Result<Vec<_>>>()?;
    let mut joint = Joint {
        n,
        ladder,
        rho: BTreeMap::new(),
    };
    let start = (-ladder.k_min) as usize;
    for bath_state in 0..1usize << n {
        let weight: f64 = (1..=n)
            .map(|l| {
                let q = bath.excited_population(l);
                if (bath_state >> (n - l)) & 1 == 1 {
                    q
                } else {
                    1.0 - q
                }
            })
            .product();
        for s in 0..2 {
            for t in 0..2 {
                let v = sigma[(s, t)] * weight;
                if v != C::default() {
                    let key = (
                        joint.join(start, s, bath_state),
                        joint.join(start, t, bath_state),
                    );
                    joint.rho.insert(key, v);
                }
            }
        }
    }

    let mut trace = ErasureTrace::new(sigma[(1, 1)].re);
    let mut energy = joint.storage_energy();
    for &l in order {
        joint.apply(&unitaries[l - 1]);
        let boundary = joint.boundary_population();
        if boundary > BOUNDARY_TOL {
            return Err(Error::TruncationTooNarrow(format!(
                "population {boundary:.3e} reached the edge of the ladder"
            )));
        }
        let after = joint.storage_energy();
        trace.push(l, joint.system()[(1, 1)].re, bath.to_bits(energy - after));
        energy = after;
    }
    Ok((trace, joint.system()))
}

/// Forward protocol on the full joint state, with the system starting in
/// `diag(1 - p_init, p_init)`.
pub fn run_quantum(bath: &BathSpec, p_init: f64) -> Result<ErasureTrace> {
    if !(0.0..=1.0).contains(&p_init) {
        return Err(Error::Config(format!(
            "population {p_init} is outside [0, 1]"
        )));
    }
    let sigma = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        C::new(1.0 - p_init, 0.0),
        C::new(p_init, 0.0),
    ]));
    Ok(simulate(bath, &sigma, &(1..=bath.n()).collect::<Vec<_>>())?.0)
}

/// Forward protocol from an arbitrary system state; also returns the final
/// reduced system state.
pub fn run_quantum_with_state(
    bath: &BathSpec,
    sigma: &DMatrix<C>,
) -> Result<(ErasureTrace, DMatrix<C>)> {
    simulate(bath, sigma, &(1..=bath.n()).collect::<Vec<_>>())
}

/// The ladder in reverse order on a pure system, on the full joint state.
pub fn run_quantum_reverse(bath: &BathSpec) -> Result<ErasureTrace> {
    let mut sigma = DMatrix::zeros(2, 2);
    sigma[(0, 0)] = C::new(1.0, 0.0);
    Ok(simulate(bath, &sigma, &(1..=bath.n()).rev().collect::<Vec<_>>())?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landauer::{reverse_extract, run_classical};

    #[test]
    fn swap_matrix_elements() {
        let ladder = LadderSpec::new(-5, 5).unwrap();
        let u = build_swap_unitary(2, ladder).unwrap();
        let zero = 5; // level index of E_0
                      // |E_0, 0, 1> -> |E_2, 1, 0>
        assert_eq!(u.apply((zero * 2) * 2 + 1), ((zero + 2) * 2 + 1) * 2);
        // |E_0, 0, 0> unchanged
        assert_eq!(u.apply((zero * 2) * 2), (zero * 2) * 2);
        // involution
        for i in 0..u.dim() {
            assert_eq!(u.apply(u.apply(i)), i);
        }
    }

    #[test]
    fn narrow_windows_are_rejected() {
        assert!(LadderSpec::new(0, 3).is_err());
        let ladder = LadderSpec::new(-1, 1).unwrap();
        assert!(matches!(
            build_swap_unitary(3, ladder),
            Err(Error::TruncationTooNarrow(_))
        ));
    }

    #[test]
    fn residual_matches_closed_form() {
        let bath = BathSpec::new(1, 1.0).unwrap();
        let t = run_quantum(&bath, 0.5).unwrap();
        let q = (-1f64).exp() / (1.0 + (-1f64).exp());
        assert!((t.residual - q).abs() < 1e-12);
    }

    #[test]
    fn zero_temperature_limit() {
        let bath = BathSpec::new(1, 50.0).unwrap();
        let t = run_quantum(&bath, 0.5).unwrap();
        assert!(t.residual < 1e-20);
        // work = Delta * p_init in energy units
        assert!((t.total_work - bath.to_bits(0.5)).abs() < 1e-9);
    }

    #[test]
    fn agrees_with_recursion() {
        for bd in [0.5, 1.0, 2.0] {
            let bath = BathSpec::new(6, bd).unwrap();
            let a = run_quantum(&bath, 0.5).unwrap();
            let b = run_classical(&bath, 0.5).unwrap();
            for (x, y) in a.steps.iter().zip(&b.steps) {
                assert!((x.p - y.p).abs() < 1e-10);
                assert!((x.work - y.work).abs() < 1e-10);
            }
            let r = run_quantum_reverse(&bath).unwrap();
            assert!((r.total_work - reverse_extract(&bath).total_work).abs() < 1e-10);
        }
    }

    #[test]
    fn coherences_are_removed() {
        let bath = BathSpec::new(3, 1.0).unwrap();
        let h = C::new(0.5, 0.0);
        let plus = DMatrix::from_row_slice(2, 2, &[h, h, h, h]);
        let (t, sigma) = run_quantum_with_state(&bath, &plus).unwrap();
        assert!(sigma[(0, 1)].norm() < 1e-12);
        assert!((t.residual - bath.excited_population(3)).abs() < 1e-12);
    }
}
