//! Erasing the auxiliary register: brute force, with side information, and
//! through an information battery.

mod strategies;
mod witness;

pub use strategies::{
    battery_state, battery_swap, erase_brute_force, erase_side_info, run_with_strategy,
    verify_factorization, Factorized, Strategy, StrategyRun, MAX_BATTERY_QUBITS,
};
pub use witness::{
    check_conditions, classify_transform_complexity, recover_subgroup_from_factorizer,
    witness_from_promise_k, FactorizationWitness, TransformComplexity, WitnessFile,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{AbelianGroup, Subgroup};
use crate::qstate::QuantumState;

/// Signed work account in units of `k_B T ln 2`; positive amounts are costs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WorkLedger {
    entries: Vec<(String, i64)>,
}

impl WorkLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, label: impl Into<String>, amount: i64) {
        self.entries.push((label.into(), amount));
    }

    pub fn entries(&self) -> &[(String, i64)] {
        &self.entries
    }

    pub fn total(&self) -> i64 {
        self.entries.iter().map(|(_, a)| a).sum()
    }
}

/// Partial information about the hidden subgroup: a known `K` with
/// `H <= K <= G`.
#[derive(Clone, Debug)]
pub struct PromiseK {
    k: Subgroup,
}

impl PromiseK {
    pub fn new(k: Subgroup, hidden: &Subgroup) -> Result<Self> {
        if !hidden.is_subgroup_of(&k) {
            return Err(Error::NotASubgroup(format!(
                "hidden subgroup {hidden} is not contained in K = {k}"
            )));
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> &Subgroup {
        &self.k
    }

    /// Number of Bell pairs this promise lets one factor out,
    /// `log2 |G / K|`.
    pub fn ell(&self) -> usize {
        self.k.index().trailing_zeros() as usize
    }
}

/// `log2 |G / H|`, the largest number of Bell pairs in the post-oracle state.
pub fn ell_max(group: &AbelianGroup, hidden: &Subgroup) -> Result<usize> {
    if hidden.parent() != group {
        return Err(Error::NotASubgroup(format!(
            "{hidden} is not a subgroup of {group}"
        )));
    }
    Ok(hidden.index().trailing_zeros() as usize)
}

/// `H(S|G)` in bits: the least average work, in `k_B T ln 2`, needed to reset
/// `S` while leaving `G` untouched.
pub fn entropy_bound(state: &QuantumState) -> Result<f64> {
    state.conditional_entropy(&["S"], &["G"])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::RegisterLayout;

    #[test]
    fn ledger_sums_entries() {
        let mut l = WorkLedger::new();
        l.record("a", 3);
        l.record("b", -2);
        assert_eq!(l.total(), 1);
        assert_eq!(l.entries().len(), 2);
    }

    #[test]
    fn ell_max_examples() {
        let z8 = AbelianGroup::cyclic(8).unwrap();
        let h = Subgroup::span(&z8, &[z8.element([4]).unwrap()]).unwrap();
        assert_eq!(ell_max(&z8, &h).unwrap(), 2);
        assert_eq!(ell_max(&z8, &Subgroup::whole(&z8)).unwrap(), 0);
    }

    #[test]
    fn promise_requires_chain() {
        let z8 = AbelianGroup::cyclic(8).unwrap();
        let h = Subgroup::span(&z8, &[z8.element([4]).unwrap()]).unwrap();
        assert!(PromiseK::new(Subgroup::trivial(&z8), &h).is_err());
        assert_eq!(
            PromiseK::new(
                Subgroup::span(&z8, &[z8.element([2]).unwrap()]).unwrap(),
                &h
            )
            .unwrap()
            .ell(),
            1
        );
    }

    #[test]
    fn entropy_bound_of_products() {
        let l = RegisterLayout::sequential(&[("G", 1), ("S", 1)]).unwrap();
        let mixed = QuantumState::maximally_mixed(l.clone()).unwrap();
        assert!((entropy_bound(&mixed).unwrap() - 1.0).abs() < 1e-12);
        let pure = QuantumState::zero(l).unwrap();
        assert!(entropy_bound(&pure).unwrap().abs() < 1e-12);
    }
}
