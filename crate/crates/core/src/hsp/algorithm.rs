use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::oracle::OracleSpec;
use crate::error::{Error, Result};
use crate::groups::{kernel, AbelianGroup, GroupElement, Subgroup};
use crate::qstate::{BasisPermutation, Distribution, QuantumState, RegisterLayout};

/// The Fourier transform of `G`: column `g` is the character state
/// `|chi_g> = |G|^{-1/2} sum_h chi_g(h) |h>`.
pub fn qft(group: &AbelianGroup) -> DMatrix<Complex64> {
    let d = group.order();
    let norm = 1.0 / (d as f64).sqrt();
    let elems: Vec<GroupElement> = group.elements().collect();
    DMatrix::from_fn(d, d, |h, g| {
        group
            .chi(&elems[g], &elems[h])
            .expect("elements of the group")
            * norm
    })
}

/// Registers `G` (main) and `S` (auxiliary) for an oracle.
pub fn hsp_layout(f: &OracleSpec) -> RegisterLayout {
    RegisterLayout::sequential(&[("G", f.n()), ("S", f.m())]).expect("two disjoint registers")
}

/// `|g, s> -> |g, s xor f(g)>` on `n + m` qubits.
pub fn oracle_permutation(f: &OracleSpec) -> BasisPermutation {
    let m = f.m();
    let map = (0..f.group().order() << m)
        .map(|i| {
            let g = i >> m;
            (g << m) | ((i & ((1 << m) - 1)) ^ f.table()[g])
        })
        .collect();
    BasisPermutation::new(map).expect("xor with a table is a bijection")
}

pub fn apply_oracle(state: &QuantumState, f: &OracleSpec) -> Result<QuantumState> {
    let layout = state.layout();
    for (name, want) in [("G", f.n()), ("S", f.m())] {
        let have = layout.qubits(name)?.len();
        if have != want {
            return Err(Error::DimensionMismatch {
                expected: want,
                found: have,
            });
        }
    }
    state.apply_permutation(&oracle_permutation(f), &["G", "S"])
}

/// `O_f (Q_G (x) 1) |0, 0>`.
pub fn post_oracle_state(f: &OracleSpec) -> Result<QuantumState> {
    let start = QuantumState::zero(hsp_layout(f))?;
    let spread = start.apply_unitary(&qft(f.group()), &["G"])?;
    apply_oracle(&spread, f)
}

/// Applies `Q_G` to register `G` and returns its outcome distribution.
pub fn measure_main(state: &QuantumState, group: &AbelianGroup) -> Result<Distribution> {
    state
        .apply_unitary(&qft(group), &["G"])?
        .measure_distribution("G")
}

/// Exact outcome distribution of one run of the standard circuit.
pub fn final_distribution(f: &OracleSpec) -> Result<Distribution> {
    let reduced = post_oracle_state(f)?.partial_trace(&["G"])?;
    measure_main(&reduced, f.group())
}

/// Default shot budget, `8 log2 |G|`.
pub fn default_shots(group: &AbelianGroup) -> usize {
    (8 * group.num_qubits()).max(1)
}

#[derive(Clone, Debug, Serialize)]
pub struct HspRunResult {
    pub samples: Vec<GroupElement>,
    #[serde(serialize_with = "serialize_subgroup")]
    pub recovered: Subgroup,
    /// Whether `f` was checked to be constant on `recovered`.
    pub verified: bool,
    pub oracle_calls: usize,
    pub classical_queries: usize,
    pub qubits_used: usize,
    #[serde(serialize_with = "serialize_distribution")]
    pub final_distribution: Distribution,
}

fn serialize_subgroup<S: serde::Serializer>(h: &Subgroup, s: S) -> Result<S::Ok, S::Error> {
    h.elements().serialize(s)
}

fn serialize_distribution<S: serde::Serializer>(d: &Distribution, s: S) -> Result<S::Ok, S::Error> {
    d.probs().serialize(s)
}

/// Outcome of the sampling and post-processing loop.
pub(crate) struct Solved {
    pub samples: Vec<GroupElement>,
    pub recovered: Subgroup,
    pub verified: bool,
    pub classical_queries: usize,
}

/// Draws up to `shots` outcomes of `dist` over `group` and intersects the
/// kernels of the sampled characters. Each new candidate is checked through
/// `fixes`, which must report whether `f(r) = f(0)`; because the hidden
/// subgroup always lies inside the candidate, a candidate whose generators
/// all pass equals it and the loop stops.
pub(crate) fn solve(
    group: &AbelianGroup,
    dist: &Distribution,
    shots: usize,
    seed: u64,
    fixes: impl Fn(&GroupElement) -> bool,
) -> Result<Solved> {
    if shots == 0 {
        return Err(Error::Config("at least one shot is required".into()));
    }
    let draws = dist.sample(seed, shots)?;
    let mut samples = Vec::new();
    let mut candidate = Subgroup::whole(group);
    let mut checked: Option<Subgroup> = None;
    let mut classical_queries = 1; // f(0)
    let mut verified = false;
    for d in draws {
        let g = group.element_at(d);
        candidate = candidate.intersection(&kernel(group, &g)?)?;
        samples.push(g);
        if checked.as_ref() == Some(&candidate) {
            continue;
        }
        classical_queries += candidate.generators().len();
        let ok = candidate.generators().iter().all(&fixes);
        checked = Some(candidate.clone());
        if ok {
            verified = true;
            break;
        }
    }
    Ok(Solved {
        samples,
        recovered: candidate,
        verified,
        classical_queries,
    })
}

/// The standard algorithm: the final distribution is computed once exactly,
/// then shots are sampled from it with a seeded generator.
pub fn run_standard(f: &OracleSpec, shots: usize, seed: u64) -> Result<HspRunResult> {
    let dist = final_distribution(f)?;
    finish(f, dist, shots, seed, f.n() + f.m())
}

pub(crate) fn finish(
    f: &OracleSpec,
    dist: Distribution,
    shots: usize,
    seed: u64,
    qubits_used: usize,
) -> Result<HspRunResult> {
    let f0 = f.eval(&f.group().identity());
    let solved = solve(f.group(), &dist, shots, seed, |r| f.eval(r) == f0)?;
    Ok(HspRunResult {
        oracle_calls: solved.samples.len(),
        samples: solved.samples,
        recovered: solved.recovered,
        verified: solved.verified,
        classical_queries: solved.classical_queries,
        qubits_used,
        final_distribution: dist,
    })
}
