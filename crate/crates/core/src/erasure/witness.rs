use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::PromiseK;
use crate::error::{Error, Result};
use crate::groups::{AbelianGroup, Subgroup, SubgroupBasis};
use crate::hsp::OracleSpec;
use crate::qstate::BasisPermutation;

/// Local basis permutations `U_G`, `U_S` that turn the post-oracle state into
/// `rho_{G1 S1} (x) (Bell pair)^{(x) ell}`. `G2` and `S2` are the trailing
/// `ell` qubits of each register and qubit `j` of `G2` pairs with qubit `j`
/// of `S2`.
#[derive(Clone, Debug)]
pub struct FactorizationWitness {
    u_g: BasisPermutation,
    u_s: BasisPermutation,
    ell: usize,
    k: Option<SubgroupBasis>,
}

impl FactorizationWitness {
    pub fn new(u_g: BasisPermutation, u_s: BasisPermutation, ell: usize) -> Result<Self> {
        if ell > u_g.num_qubits() || ell > u_s.num_qubits() {
            return Err(Error::InvalidPermutation(format!(
                "{ell} Bell pairs do not fit in {} + {} qubits",
                u_g.num_qubits(),
                u_s.num_qubits()
            )));
        }
        Ok(Self {
            u_g,
            u_s,
            ell,
            k: None,
        })
    }

    pub fn u_g(&self) -> &BasisPermutation {
        &self.u_g
    }

    pub fn u_s(&self) -> &BasisPermutation {
        &self.u_s
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn n(&self) -> usize {
        self.u_g.num_qubits()
    }

    pub fn m(&self) -> usize {
        self.u_s.num_qubits()
    }

    /// The coordinates of `K` the `G1` register is written in, when the
    /// witness comes from an intermediate subgroup.
    pub fn k_basis(&self) -> Option<&SubgroupBasis> {
        self.k.as_ref()
    }

    /// Composes `U_G` with a relabeling `p` of the `G1` basis. The result
    /// still factors the same state but no longer carries a subgroup
    /// encoding.
    pub fn relabel_main(&self, p: &BasisPermutation) -> Result<Self> {
        if p.num_qubits() != self.n() - self.ell {
            return Err(Error::DimensionMismatch {
                expected: self.n() - self.ell,
                found: p.num_qubits(),
            });
        }
        let u_g = self
            .u_g
            .then(&p.tensor(&BasisPermutation::identity(self.ell)))?;
        Self::new(u_g, self.u_s.clone(), self.ell)
    }

    /// `f^(1)` as a table over the `G1` register.
    pub fn reduced_table(&self, table: &[usize]) -> Result<Vec<usize>> {
        check_conditions(table, self)?;
        let mut out = vec![0; 1 << (self.n() - self.ell)];
        for (g, &v) in table.iter().enumerate() {
            out[self.u_g.apply(g) >> self.ell] = self.u_s.apply(v) >> self.ell;
        }
        Ok(out)
    }

    pub fn to_file(&self, group: &AbelianGroup) -> WitnessFile {
        WitnessFile {
            group: group.clone(),
            codomain_bits: self.m(),
            ell: self.ell,
            u_g: self.u_g.clone(),
            u_s: self.u_s.clone(),
        }
    }

    pub fn load(path: impl AsRef<Path>, f: &OracleSpec) -> Result<Self> {
        let file: WitnessFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        file.into_witness(f)
    }
}

/// On-disk form of a witness.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessFile {
    pub group: AbelianGroup,
    pub codomain_bits: usize,
    pub ell: usize,
    pub u_g: BasisPermutation,
    pub u_s: BasisPermutation,
}

impl WitnessFile {
    /// Checks the witness against `f` before accepting it.
    pub fn into_witness(self, f: &OracleSpec) -> Result<FactorizationWitness> {
        if &self.group != f.group() || self.codomain_bits != f.m() {
            return Err(Error::Config(format!(
                "witness is for {} with {} output bits, oracle is {} with {}",
                self.group,
                self.codomain_bits,
                f.group(),
                f.m()
            )));
        }
        if self.u_g.num_qubits() != f.n() || self.u_s.num_qubits() != f.m() {
            return Err(Error::Config(
                "witness permutations have the wrong size".into(),
            ));
        }
        let w = FactorizationWitness::new(self.u_g, self.u_s, self.ell)?;
        check_conditions(f.table(), &w)?;
        Ok(w)
    }
}

fn table_failure(reason: String) -> Error {
    Error::Factorization {
        reason,
        fidelity: f64::NAN,
    }
}

/// The table-level factorization conditions: after relabeling, the trailing
/// `ell` bits of `U_S f(g)` equal those of `U_G g`, and the leading bits of
/// `U_S f(g)` depend only on the leading bits of `U_G g`.
pub fn check_conditions(table: &[usize], w: &FactorizationWitness) -> Result<()> {
    if table.len() != w.u_g.len() {
        return Err(Error::DimensionMismatch {
            expected: w.u_g.len(),
            found: table.len(),
        });
    }
    let mask = (1usize << w.ell) - 1;
    let mut f1: HashMap<usize, usize> = HashMap::new();
    for (g, &v) in table.iter().enumerate() {
        if v >= w.u_s.len() {
            return Err(table_failure(format!(
                "f({g}) = {v} does not fit the S register"
            )));
        }
        let (a, b) = (w.u_g.apply(g), w.u_s.apply(v));
        if a & mask != b & mask {
            return Err(table_failure(format!(
                "paired bits differ at g = {g}: G2 = {}, S2 = {}",
                a & mask,
                b & mask
            )));
        }
        let prev = *f1.entry(a >> w.ell).or_insert(b >> w.ell);
        if prev != b >> w.ell {
            return Err(table_failure(format!(
                "S1 depends on more than G1 at g = {g}: {prev} vs {}",
                b >> w.ell
            )));
        }
    }
    Ok(())
}

/// Builds the witness for a promised intermediate subgroup `K`:
/// `U_G |g> = |k_g> |[g]>` with `g = r + k_g` for the canonical coset
/// representative `r`, and `U_S` rewriting `f(g)` so that its trailing bits
/// carry the same coset index `[g]`.
pub fn witness_from_promise_k(f: &OracleSpec, promise: &PromiseK) -> Result<FactorizationWitness> {
    let group = f.group();
    let k = promise.k();
    if k.parent() != group {
        return Err(Error::NotASubgroup(format!(
            "K = {k} is not a subgroup of {group}"
        )));
    }
    if !f.hidden().is_subgroup_of(k) {
        return Err(Error::NotASubgroup(format!(
            "hidden subgroup {} is not contained in K = {k}",
            f.hidden()
        )));
    }
    let ell = promise.ell();
    if ell > f.m() {
        return Err(Error::Config(format!(
            "{ell} Bell pairs need at least {ell} output bits, the oracle has {}",
            f.m()
        )));
    }
    let basis = k.basis();
    let reps = k.coset_representatives();
    let coset_of: HashMap<_, usize> = reps.iter().cloned().zip(0..).collect();

    // per element: (coset index, abstract index of k_g, index of k_g in G)
    let parts: Vec<(usize, usize, usize)> = group
        .elements()
        .map(|g| {
            let (rep, kg) = k.coset_decompose(&g).expect("element of the group");
            let kg_index = group.index_of(&kg);
            let enc = basis.encode_index(kg_index).expect("k_g lies in K");
            (coset_of[&rep], enc, kg_index)
        })
        .collect();

    let mut coset_of_value: HashMap<usize, usize> = HashMap::new();
    for (&v, part) in f.table().iter().zip(&parts) {
        if *coset_of_value.entry(v).or_insert(part.0) != part.0 {
            return Err(Error::OracleValidation(format!(
                "f takes the value {v} on two different cosets of K"
            )));
        }
    }

    let u_g = BasisPermutation::new(parts.iter().map(|&(c, e, _)| (e << ell) | c).collect())?;

    let mask = (1usize << ell) - 1;
    let table = f.table();
    let aligned = parts
        .iter()
        .enumerate()
        .all(|(g, &(c, _, kg))| table[g] & mask == c && table[g] >> ell == table[kg] >> ell);
    let u_s = if aligned {
        BasisPermutation::identity(f.m())
    } else {
        let ranks: BTreeSet<usize> = parts.iter().map(|&(_, _, kg)| table[kg]).collect();
        let rank_of: HashMap<usize, usize> = ranks.into_iter().zip(0..).collect();
        let size = 1usize << f.m();
        let mut map = vec![usize::MAX; size];
        let mut used = vec![false; size];
        for (g, &(c, _, kg)) in parts.iter().enumerate() {
            let target = (rank_of[&table[kg]] << ell) | c;
            map[table[g]] = target;
            used[target] = true;
        }
        let mut free = (0..size).filter(|t| !used[*t]);
        for slot in map.iter_mut().filter(|s| **s == usize::MAX) {
            *slot = free.next().expect("as many free targets as unused values");
        }
        BasisPermutation::new(map)?
    };

    let mut w = FactorizationWitness::new(u_g, u_s, ell)?;
    check_conditions(table, &w)?;
    w.k = Some(basis);
    Ok(w)
}

/// Reads the hidden subgroup off a witness for `K = H`: the `G2` bits of
/// `U_G |0>` name the trivial coset, and `H` is everything that `U_G` sends
/// into that coset.
pub fn recover_subgroup_from_factorizer(
    group: &AbelianGroup,
    w: &FactorizationWitness,
) -> Result<Subgroup> {
    if w.n() != group.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: group.num_qubits(),
            found: w.n(),
        });
    }
    let ell = w.ell;
    let tag = w.u_g.apply(0) & ((1 << ell) - 1);
    let inv = w.u_g.inverse();
    let elements: Vec<_> = (0..1usize << (w.n() - ell))
        .map(|x| group.element_at(inv.apply((x << ell) | tag)))
        .collect();
    Subgroup::from_elements(group, &elements).map_err(|e| Error::Factorization {
        reason: format!("U_G does not factor out a subgroup: {e}"),
        fidelity: f64::NAN,
    })
}

/// Gate cost class of a witness's local transformations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformComplexity {
    /// Both permutations only relabel qubit wires.
    QubitSwaps,
    /// At least one is a general basis permutation.
    GeneralPermutation,
}

impl TransformComplexity {
    pub fn bound(&self) -> &'static str {
        match self {
            TransformComplexity::QubitSwaps => "O(log|K|)",
            TransformComplexity::GeneralPermutation => "O(n 2^n)",
        }
    }
}

pub fn classify_transform_complexity(w: &FactorizationWitness) -> TransformComplexity {
    if w.u_g.wire_permutation().is_some() && w.u_s.wire_permutation().is_some() {
        TransformComplexity::QubitSwaps
    } else {
        TransformComplexity::GeneralPermutation
    }
}
