//! Explicit erasure of one qubit against a thermal bath of `N` gapped qubits
//! and a work-storage ladder.
//!
//! Energies are in units of the gap `Delta`; work is reported in units of
//! `k_B T ln 2`, so erasing one fully mixed qubit quasi-statically costs 1.

mod quantum;

pub use quantum::{
    build_swap_unitary, run_quantum, run_quantum_reverse, run_quantum_with_state, LadderSpec,
    SwapUnitary, MAX_QUANTUM_BATH,
};

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::error::{Error, Result};

/// `N` bath qubits, qubit `l` with gap `l Delta`, at inverse temperature
/// `beta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BathSpec {
    n: usize,
    beta_delta: f64,
}

impl BathSpec {
    pub fn new(n: usize, beta_delta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("the bath needs at least one qubit".into()));
        }
        if !(beta_delta > 0.0 && beta_delta.is_finite()) {
            return Err(Error::Config(format!(
                "beta*Delta must be positive, got {beta_delta}"
            )));
        }
        Ok(Self { n, beta_delta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta_delta(&self) -> f64 {
        self.beta_delta
    }

    /// Thermal excited population of bath qubit `ell`,
    /// `e^{-ell beta Delta} / (1 + e^{-ell beta Delta})`.
    pub fn excited_population(&self, ell: usize) -> f64 {
        excited_population(ell as f64 * self.beta_delta)
    }

    /// Work in `k_B T ln 2` for an energy in units of `Delta`.
    pub fn to_bits(&self, energy: f64) -> f64 {
        energy * self.beta_delta / LN_2
    }
}

fn excited_population(x: f64) -> f64 {
    1.0 / (1.0 + x.exp())
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    [p, 1.0 - p]
        .iter()
        .filter(|x| **x > 0.0)
        .map(|x| -x * x.log2())
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Step {
    /// Bath qubit used in this step.
    pub ell: usize,
    /// Excited population of the system after the step.
    pub p: f64,
    /// Work paid in this step, in `k_B T ln 2` (negative when extracted).
    pub work: f64,
    pub cumulative_work: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErasureTrace {
    pub initial_p: f64,
    pub steps: Vec<Step>,
    /// Excited population of the system at the end.
    pub residual: f64,
    pub total_work: f64,
}

impl ErasureTrace {
    fn new(initial_p: f64) -> Self {
        Self {
            initial_p,
            steps: Vec::new(),
            residual: initial_p,
            total_work: 0.0,
        }
    }

    fn push(&mut self, ell: usize, p: f64, work: f64) {
        self.total_work += work;
        self.residual = p;
        self.steps.push(Step {
            ell,
            p,
            work,
            cumulative_work: self.total_work,
        });
    }

    /// Landauer bound for the entropy change actually achieved,
    /// `H(p_initial) - H(p_final)`.
    pub fn entropy_drop(&self) -> f64 {
        binary_entropy(self.initial_p) - binary_entropy(self.residual)
    }
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Config(format!("population {p} is outside [0, 1]")))
    }
}

/// Population recursion: every state stays diagonal in the energy basis, so
/// step `ell` sets the excited population to `q_ell` and moves
/// `ell Delta (p - q_ell)` out of the storage.
fn ladder_recursion(
    bath: &BathSpec,
    p_init: f64,
    order: impl Iterator<Item = usize>,
) -> ErasureTrace {
    let mut trace = ErasureTrace::new(p_init);
    let mut p = p_init;
    for ell in order {
        let q = bath.excited_population(ell);
        trace.push(ell, q, bath.to_bits(ell as f64 * (p - q)));
        p = q;
    }
    trace
}

/// Forward protocol `U^(N) ... U^(1)` on a system with excited population
/// `p_init`.
pub fn run_classical(bath: &BathSpec, p_init: f64) -> Result<ErasureTrace> {
    check_p(p_init)?;
    Ok(ladder_recursion(bath, p_init, 1..=bath.n()))
}

/// Forward protocol that skips the bath qubits hotter than the system:
/// it starts at the first `ell_0` with `q_{ell_0} <= p_init`.
pub fn run_truncated(bath: &BathSpec, p_init: f64) -> Result<ErasureTrace> {
    if !(0.0..=0.5).contains(&p_init) {
        return Err(Error::Config(format!(
            "truncated protocol needs 0 <= p_init <= 1/2, got {p_init}"
        )));
    }
    let start = (1..=bath.n()).find(|&l| bath.excited_population(l) <= p_init);
    Ok(match start {
        Some(l0) => ladder_recursion(bath, p_init, l0..=bath.n()),
        None => ErasureTrace::new(p_init),
    })
}

/// The ladder run backwards, `ell = N` down to 1, on a pure system: work is
/// extracted into the storage while the system heats up.
pub fn reverse_extract(bath: &BathSpec) -> ErasureTrace {
    reverse_extract_from(bath, 0.0).expect("0 is a valid population")
}

pub fn reverse_extract_from(bath: &BathSpec, p_init: f64) -> Result<ErasureTrace> {
    check_p(p_init)?;
    Ok(ladder_recursion(bath, p_init, (1..=bath.n()).rev()))
}
