//! Oracle simplification: with a promised intermediate subgroup `K`, the
//! algorithm can run over `K` alone and skip the `2 ell` qubits that would
//! only ever hold Bell pairs.

use serde::Serialize;

use crate::erasure::{
    run_with_strategy, witness_from_promise_k, FactorizationWitness, PromiseK, Strategy, WorkLedger,
};
use crate::error::{Error, Result};
use crate::groups::{GroupElement, Subgroup, SubgroupBasis};
use crate::hsp::{measure_main, post_oracle_state, qft, solve, Access, HspRunResult, OracleSpec};
use crate::qstate::{BasisPermutation, Distribution, QuantumState, RegisterLayout};

/// The reduced instance over `K` together with what it was built from.
#[derive(Clone, Debug)]
pub struct SimplifiedOracle {
    base: OracleSpec,
    witness: FactorizationWitness,
    basis: SubgroupBasis,
    reduced: OracleSpec,
}

impl SimplifiedOracle {
    pub fn base(&self) -> &OracleSpec {
        &self.base
    }

    pub fn witness(&self) -> &FactorizationWitness {
        &self.witness
    }

    pub fn reduced_domain(&self) -> &Subgroup {
        self.basis.subgroup()
    }

    pub fn basis(&self) -> &SubgroupBasis {
        &self.basis
    }

    /// `f~` over `K` in the coordinates of [`SimplifiedOracle::basis`].
    pub fn reduced(&self) -> &OracleSpec {
        &self.reduced
    }

    pub fn qubit_savings(&self) -> usize {
        2 * self.witness.ell()
    }

    pub fn access(&self) -> Access {
        self.base.annotations().access
    }

    /// `(U_G (x) U_S) O_f (U_G^dagger (x) 1)` on all `n + m` qubits.
    pub fn composed_oracle(&self) -> BasisPermutation {
        let (m, table) = (self.base.m(), self.base.table());
        let (u_g, u_s) = (self.witness.u_g(), self.witness.u_s());
        let inv = u_g.inverse();
        let map = (0..self.base.group().order() << m)
            .map(|x| {
                let (gq, s) = (x >> m, x & ((1 << m) - 1));
                (gq << m) | u_s.apply(s ^ table[inv.apply(gq)])
            })
            .collect();
        BasisPermutation::new(map).expect("composition of bijections")
    }

    /// Checks that, for every `K`-register input with the auxiliary register
    /// in `|0>`, the composed oracle leaves `G2` and `S2` in `|0>` and writes
    /// `f~` into `S1`. Returns the number of inputs checked.
    pub fn check_bypass(&self) -> Result<usize> {
        let ell = self.witness.ell();
        let m = self.base.m();
        let c = self.composed_oracle();
        let mask = (1usize << ell) - 1;
        for a in 0..self.basis.abstract_group().order() {
            let out = c.apply((a << ell) << m);
            let (gq, s) = (out >> m, out & ((1 << m) - 1));
            if gq & mask != 0 || s & mask != 0 {
                return Err(Error::Factorization {
                    reason: format!("bypassed qubits are not |0> for input {a}"),
                    fidelity: f64::NAN,
                });
            }
            if gq >> ell != a || s >> ell != self.reduced.table()[a] {
                return Err(Error::Factorization {
                    reason: format!("composed oracle disagrees with the reduced table at {a}"),
                    fidelity: f64::NAN,
                });
            }
        }
        Ok(self.basis.abstract_group().order())
    }
}

/// Builds the reduced instance `f~ : K -> {0,1}^{m - ell}` from a witness
/// obtained from an intermediate subgroup.
pub fn build_simplified(f: &OracleSpec, w: &FactorizationWitness) -> Result<SimplifiedOracle> {
    let basis = w.k_basis().cloned().ok_or_else(|| {
        Error::Config("witness does not come from an intermediate subgroup".into())
    })?;
    let table = w.reduced_table(f.table())?;
    let hidden = basis.pull_back(f.hidden())?;
    let reduced = OracleSpec::new(
        basis.abstract_group().clone(),
        f.m() - w.ell(),
        table,
        hidden,
    )?;
    let so = SimplifiedOracle {
        base: f.clone(),
        witness: w.clone(),
        basis,
        reduced,
    };
    so.check_bypass()?;
    Ok(so)
}

/// Shorthand for [`build_simplified`] with the witness of `promise`.
pub fn simplify_with_promise(f: &OracleSpec, promise: &PromiseK) -> Result<SimplifiedOracle> {
    build_simplified(f, &witness_from_promise_k(f, promise)?)
}

/// Distribution over the abstract coordinates of `K` when the full-size
/// circuit is run with the composed oracle, `Q_K` on `G1`, and the bypassed
/// registers idle.
fn black_box_distribution(so: &SimplifiedOracle) -> Result<Distribution> {
    let ell = so.witness.ell();
    let (n, m) = (so.base.n(), so.base.m());
    let layout =
        RegisterLayout::sequential(&[("G1", n - ell), ("G2", ell), ("S1", m - ell), ("S2", ell)])?;
    let k_group = so.basis.abstract_group();
    let state = QuantumState::zero(layout)?
        .apply_unitary(&qft(k_group), &["G1"])?
        .apply_permutation(&so.composed_oracle(), &["G1", "G2", "S1", "S2"])?;
    if ell > 0 {
        let idle = state.partial_trace(&["G2", "S2"])?;
        if (idle.rho()[(0, 0)].re - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState("bypassed qubits left |0>".into()));
        }
    }
    let main = state.partial_trace(&["G1"])?;
    let main = main.relabel(RegisterLayout::sequential(&[("G", n - ell)])?)?;
    measure_main(&main, k_group)
}

/// Runs the reduced algorithm over `K`. In open-circuit mode only the
/// `log2|K| + m - ell` variable qubits are simulated; in black-box mode the
/// composed oracle is run on all `n + m` qubits. Samples and the recovered
/// subgroup are reported in the coordinates of `G`; the distribution is over
/// the abstract coordinates of `K`.
pub fn run_simplified(so: &SimplifiedOracle, shots: usize, seed: u64) -> Result<HspRunResult> {
    let (dist, qubits_used) = match so.access() {
        Access::OpenCircuit => {
            let reduced = &so.reduced;
            let st = post_oracle_state(reduced)?.partial_trace(&["G"])?;
            (
                measure_main(&st, reduced.group())?,
                reduced.n() + reduced.m(),
            )
        }
        Access::BlackBox => (black_box_distribution(so)?, so.base.n() + so.base.m()),
    };
    let reduced = &so.reduced;
    let f0 = reduced.eval(&reduced.group().identity());
    let solved = solve(reduced.group(), &dist, shots, seed, |r| {
        reduced.eval(r) == f0
    })?;
    let samples = solved
        .samples
        .iter()
        .map(|a| so.basis.decode(a))
        .collect::<Result<Vec<GroupElement>>>()?;
    Ok(HspRunResult {
        oracle_calls: samples.len(),
        samples,
        recovered: so.basis.push_forward(&solved.recovered)?,
        verified: solved.verified,
        classical_queries: solved.classical_queries,
        qubits_used,
        final_distribution: dist,
    })
}

/// Work account of the simplified run: brute-force erasure of the `m - ell`
/// auxiliary qubits it uses, plus one unit of credit for each of the `ell`
/// main-register qubits that stay pure and can be reverse-erased.
pub fn simplified_ledger(so: &SimplifiedOracle) -> WorkLedger {
    let ell = so.witness.ell() as i64;
    let mut ledger = WorkLedger::new();
    ledger.record(
        format!("brute-force erasure of {} reduced S qubits", so.reduced.m()),
        so.reduced.m() as i64,
    );
    ledger.record(format!("reverse erasure of {ell} idle G2 qubits"), -ell);
    ledger
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonRow {
    pub strategy: String,
    pub qubits: usize,
    pub oracle_calls: usize,
    pub ledger: i64,
    pub recovered: Vec<GroupElement>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StrategyComparison {
    pub ell: usize,
    pub rows: Vec<ComparisonRow>,
}

/// Runs brute-force erasure, side-information erasure and the simplified
/// algorithm on one instance and checks they agree: the two informed
/// strategies cost `m - 2 ell` and all three recover the same subgroup.
pub fn compare_strategies(
    f: &OracleSpec,
    promise: &PromiseK,
    shots: usize,
    seed: u64,
) -> Result<StrategyComparison> {
    let w = witness_from_promise_k(f, promise)?;
    let so = build_simplified(f, &w)?;
    let mut rows = Vec::new();
    for s in [Strategy::Brute, Strategy::SideInfo] {
        let run = run_with_strategy(f, s, Some(&w), shots, seed)?;
        rows.push(ComparisonRow {
            strategy: s.to_string(),
            qubits: run.result.qubits_used,
            oracle_calls: run.result.oracle_calls,
            ledger: run.ledger.total(),
            recovered: run.result.recovered.elements().to_vec(),
        });
    }
    let simple = run_simplified(&so, shots, seed)?;
    rows.push(ComparisonRow {
        strategy: "simplified".into(),
        qubits: simple.qubits_used,
        oracle_calls: simple.oracle_calls,
        ledger: simplified_ledger(&so).total(),
        recovered: simple.recovered.elements().to_vec(),
    });

    let ell = w.ell();
    let target = f.m() as i64 - 2 * ell as i64;
    if rows[1].ledger != target || rows[2].ledger != target {
        return Err(Error::InvalidState(format!(
            "informed ledgers {} and {} differ from m - 2 ell = {target}",
            rows[1].ledger, rows[2].ledger
        )));
    }
    if rows.iter().any(|r| r.recovered != rows[0].recovered) {
        return Err(Error::InvalidState(
            "strategies recovered different subgroups".into(),
        ));
    }
    Ok(StrategyComparison { ell, rows })
}
