use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::witness::FactorizationWitness;
use super::WorkLedger;
use crate::error::{Error, Result};
use crate::hsp::{finish, measure_main, post_oracle_state, HspRunResult, OracleSpec};
use crate::qstate::{gates, mixed_qubit, trace_distance, Operator, QuantumState, RegisterLayout};

/// Largest register count (main, auxiliary and battery) for battery runs.
pub const MAX_BATTERY_QUBITS: usize = 12;

const FIDELITY_TOL: f64 = 1e-9;
const INVARIANCE_TOL: f64 = 1e-9;

/// Result of checking a witness against a state.
#[derive(Clone, Debug)]
pub struct Factorized {
    /// The `G1 S1` factor, with registers renamed `G` and `S`.
    pub rest: QuantumState,
    pub bell_count: usize,
    /// Fidelity of the `G2 S2` marginal with `ell` Bell pairs.
    pub fidelity: f64,
    /// Trace distance between the state and `rest (x) Bell block`.
    pub product_distance: f64,
}

struct Wires {
    g2: Vec<usize>,
    s1: Vec<usize>,
    s2: Vec<usize>,
}

fn wires(state: &QuantumState, w: &FactorizationWitness) -> Result<Wires> {
    let g = state.layout().qubits("G")?;
    let s = state.layout().qubits("S")?;
    if g.len() != w.n() || s.len() != w.m() {
        return Err(Error::DimensionMismatch {
            expected: w.n() + w.m(),
            found: g.len() + s.len(),
        });
    }
    let ell = w.ell();
    Ok(Wires {
        g2: g[g.len() - ell..].to_vec(),
        s1: s[..s.len() - ell].to_vec(),
        s2: s[s.len() - ell..].to_vec(),
    })
}

fn to_frame(state: &QuantumState, w: &FactorizationWitness) -> Result<QuantumState> {
    state
        .apply_permutation(w.u_g(), &["G"])?
        .apply_permutation(w.u_s(), &["S"])
}

fn restrict_gs(state: &QuantumState) -> Result<QuantumState> {
    if state.layout().registers().len() == 2 {
        Ok(state.clone())
    } else {
        state.partial_trace(&["G", "S"])
    }
}

/// Applies `U_G (x) U_S` and checks that the result is
/// `rho_{G1 S1} (x) (Bell pair)^{(x) ell}`.
pub fn verify_factorization(state: &QuantumState, w: &FactorizationWitness) -> Result<Factorized> {
    let t = to_frame(&restrict_gs(state)?, w)?;
    let ell = w.ell();
    let g = t.layout().qubits("G")?.to_vec();
    let s = t.layout().qubits("S")?.to_vec();
    let (g1, g2) = g.split_at(g.len() - ell);
    let (s1, s2) = s.split_at(s.len() - ell);
    let pairs: Vec<usize> = g2.iter().zip(s2).flat_map(|(a, b)| [*a, *b]).collect();
    let split = t.relabel(RegisterLayout::new(vec![
        ("G1".into(), g1.to_vec()),
        ("S1".into(), s1.to_vec()),
        ("B".into(), pairs),
    ])?)?;

    let block = split.partial_trace(&["B"])?;
    // |Phi> = 2^{-ell/2} sum_x |x_1 x_1 x_2 x_2 ...>
    let diag_index = |x: usize| {
        (0..ell)
            .filter(|j| (x >> (ell - 1 - j)) & 1 == 1)
            .fold(0, |acc, j| acc | (3 << (2 * (ell - 1 - j))))
    };
    let idx: Vec<usize> = (0..1usize << ell).map(diag_index).collect();
    let fidelity = idx
        .iter()
        .flat_map(|&a| idx.iter().map(move |&b| (a, b)))
        .map(|(a, b)| block.rho()[(a, b)].re)
        .sum::<f64>()
        / (1u64 << ell) as f64;
    if fidelity < 1.0 - FIDELITY_TOL {
        return Err(Error::Factorization {
            reason: format!("the G2 S2 block is not {ell} Bell pairs"),
            fidelity,
        });
    }

    let rest = split.partial_trace(&["G1", "S1"])?;
    let product_distance = if ell == 0 {
        0.0
    } else {
        let reordered = split.partial_trace(&["G1", "S1", "B"])?;
        trace_distance(&reordered, &rest.tensor(&block)?)?
    };
    if product_distance > FIDELITY_TOL {
        return Err(Error::Factorization {
            reason: format!(
                "state is not a product with the Bell block (distance {product_distance:.3e})"
            ),
            fidelity,
        });
    }
    let rest = rest.relabel(RegisterLayout::sequential(&[
        ("G", g1.len()),
        ("S", s1.len()),
    ])?)?;
    Ok(Factorized {
        rest,
        bell_count: ell,
        fidelity,
        product_distance,
    })
}

/// Resets every auxiliary qubit to `|0>` at a cost of one unit per qubit.
pub fn erase_brute_force(state: &QuantumState, ledger: &mut WorkLedger) -> Result<QuantumState> {
    let s = state.layout().qubits("S")?.to_vec();
    ledger.record(
        format!("brute-force erasure of {} S qubits", s.len()),
        s.len() as i64,
    );
    state.reset_qubits(&s)
}

fn check_main_unchanged(before: &QuantumState, after: &QuantumState) -> Result<()> {
    let d = trace_distance(
        &before.partial_trace(&["G"])?,
        &after.partial_trace(&["G"])?,
    )?;
    if d > INVARIANCE_TOL {
        return Err(Error::InvalidState(format!(
            "erasure changed the main register (trace distance {d:.3e})"
        )));
    }
    Ok(())
}

/// Erasure using the correlations with `G`: each Bell pair is rotated to
/// `|00>` and its `G` half is reverse-erased (gain of one unit), the
/// remaining `m - ell` auxiliary qubits are erased by brute force and
/// `U_G` is undone. Net cost `m - 2 ell`.
pub fn erase_side_info(
    state: &QuantumState,
    w: &FactorizationWitness,
    ledger: &mut WorkLedger,
) -> Result<QuantumState> {
    verify_factorization(state, w)?;
    let wires = wires(state, w)?;
    let mut t = to_frame(state, w)?;
    let cnot = Operator::Permutation(gates::cnot());
    let h = Operator::Dense(gates::hadamard());
    for (&a, &b) in wires.g2.iter().zip(&wires.s2) {
        t = t.apply_on_qubits(&cnot, &[a, b])?;
        t = t.apply_on_qubits(&h, &[a])?;
    }
    t = t.replace_qubits(&wires.g2, &mixed_qubit())?;
    ledger.record(
        format!("reverse erasure of {} G2 qubits", wires.g2.len()),
        -(wires.g2.len() as i64),
    );
    t = t.reset_qubits(&wires.s1)?;
    ledger.record(
        format!("brute-force erasure of {} S1 qubits", wires.s1.len()),
        wires.s1.len() as i64,
    );
    t = t.apply_permutation(&w.u_g().inverse(), &["G"])?;
    check_main_unchanged(state, &t)?;
    Ok(t)
}

/// A battery of `depleted` fully mixed qubits (register `Bd`) and `fueled`
/// pure qubits (register `Bf`).
pub fn battery_state(depleted: usize, fueled: usize) -> Result<QuantumState> {
    let d = QuantumState::maximally_mixed(RegisterLayout::sequential(&[("Bd", depleted)])?)?;
    let f = QuantumState::zero(RegisterLayout::sequential(&[("Bf", fueled)])?)?;
    d.tensor(&f)
}

/// Moves each Bell pair into the battery in exchange for one depleted and
/// one fueled battery qubit, then undoes `U_G (x) U_S`. The battery gains one
/// fueled-qubit equivalent per pair, recorded as `-ell`.
pub fn battery_swap(
    state: &QuantumState,
    w: &FactorizationWitness,
    ledger: &mut WorkLedger,
) -> Result<QuantumState> {
    let ell = w.ell();
    let layout = state.layout();
    let depleted = if layout.has("Bd") {
        layout.qubits("Bd")?.to_vec()
    } else {
        Vec::new()
    };
    let fueled = if layout.has("Bf") {
        layout.qubits("Bf")?.to_vec()
    } else {
        Vec::new()
    };
    if depleted.len() < ell || fueled.len() < ell {
        return Err(Error::InsufficientBattery {
            needed: ell,
            depleted: depleted.len(),
            fueled: fueled.len(),
        });
    }
    verify_factorization(state, w)?;
    let wires = wires(state, w)?;
    let mut t = to_frame(state, w)?;
    for j in 0..ell {
        t = t.swap_qubits(wires.g2[j], depleted[j])?;
        t = t.swap_qubits(wires.s2[j], fueled[j])?;
    }
    t = t
        .apply_permutation(&w.u_g().inverse(), &["G"])?
        .apply_permutation(&w.u_s().inverse(), &["S"])?;
    ledger.record(
        format!("battery charged with {ell} Bell pairs"),
        -(ell as i64),
    );
    check_main_unchanged(state, &t)?;
    Ok(t)
}

/// How the auxiliary register is reset after the oracle call.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Brute,
    SideInfo,
    Battery,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Brute, Strategy::SideInfo, Strategy::Battery];
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Brute => "brute",
            Strategy::SideInfo => "side-info",
            Strategy::Battery => "battery",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Strategy::Brute),
            "side-info" => Ok(Strategy::SideInfo),
            "battery" => Ok(Strategy::Battery),
            other => Err(Error::Config(format!(
                "unknown strategy {other:?}; expected brute, side-info or battery"
            ))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StrategyRun {
    pub strategy: Strategy,
    pub ell: usize,
    pub ledger: WorkLedger,
    pub result: HspRunResult,
}

/// The standard algorithm with the auxiliary register erased by `strategy`
/// right after the oracle call instead of being discarded.
pub fn run_with_strategy(
    f: &OracleSpec,
    strategy: Strategy,
    witness: Option<&FactorizationWitness>,
    shots: usize,
    seed: u64,
) -> Result<StrategyRun> {
    let post = post_oracle_state(f)?;
    let mut ledger = WorkLedger::new();
    let need = || {
        witness.ok_or_else(|| {
            Error::Config(format!("strategy {strategy} needs a factorization witness"))
        })
    };
    let (after, ell, qubits) = match strategy {
        Strategy::Brute => (erase_brute_force(&post, &mut ledger)?, 0, f.n() + f.m()),
        Strategy::SideInfo => {
            let w = need()?;
            (
                erase_side_info(&post, w, &mut ledger)?,
                w.ell(),
                f.n() + f.m(),
            )
        }
        Strategy::Battery => {
            let w = need()?;
            let ell = w.ell();
            let total = f.n() + f.m() + 2 * ell;
            if total > MAX_BATTERY_QUBITS {
                return Err(Error::TooLarge(format!(
                    "battery run needs {total} qubits, limit is {MAX_BATTERY_QUBITS}"
                )));
            }
            let with_battery = post.tensor(&battery_state(ell, ell)?)?;
            let swapped = battery_swap(&with_battery, w, &mut ledger)?;
            // the remaining S1 qubits are erased in the witness frame
            let framed = swapped.apply_permutation(w.u_s(), &["S"])?;
            let s1 = wires(&framed, w)?.s1;
            ledger.record(
                format!("brute-force erasure of {} S1 qubits", s1.len()),
                s1.len() as i64,
            );
            (framed.reset_qubits(&s1)?, ell, total)
        }
    };
    let dist = measure_main(&after.partial_trace(&["G"])?, f.group())?;
    let result = finish(f, dist, shots, seed, qubits)?;
    Ok(StrategyRun {
        strategy,
        ell,
        ledger,
        result,
    })
}

/// Identity witness on a single Bell pair, for tests and demonstrations.
#[cfg(test)]
fn bell_witness() -> FactorizationWitness {
    use crate::qstate::BasisPermutation;
    FactorizationWitness::new(
        BasisPermutation::identity(1),
        BasisPermutation::identity(1),
        1,
    )
    .unwrap()
}
