use super::oracle::{Access, Annotations, OracleSpec};
use crate::error::{Error, Result};
use crate::groups::{AbelianGroup, Subgroup};

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &["pfa8", "pfa16", "dlog8-a3", "z2z4"];

/// Period finding on `Z/n`: `f(x) = fbar(x mod r)` with `fbar` injective and
/// values below `codomain_size`.
pub fn make_periodic_oracle(
    n: u64,
    codomain_size: usize,
    fbar: &[usize],
    r: u64,
) -> Result<OracleSpec> {
    if !codomain_size.is_power_of_two() {
        return Err(Error::OracleValidation(format!(
            "codomain size {codomain_size} is not a power of two"
        )));
    }
    let group = AbelianGroup::cyclic(n)?;
    if r == 0 || !n.is_multiple_of(r) {
        return Err(Error::OracleValidation(format!(
            "period {r} does not divide {n}"
        )));
    }
    if fbar.len() as u64 != r {
        return Err(Error::OracleValidation(format!(
            "one period holds {r} values, got {}",
            fbar.len()
        )));
    }
    let mut sorted = fbar.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != fbar.len() {
        return Err(Error::OracleValidation(
            "values on one period must be distinct".into(),
        ));
    }
    let table = (0..n).map(|x| fbar[(x % r) as usize]).collect();
    let hidden = Subgroup::span(&group, &[group.element([r % n])?])?;
    let m = codomain_size.trailing_zeros() as usize;
    OracleSpec::new(group, m, table, hidden)?.with_annotations(Annotations {
        period: Some(r),
        ..Annotations::default()
    })
}

/// Discrete logarithm over a cyclic group of order `n` with generator
/// `gamma` and `A = gamma^a`: `f(i, j) = gamma^i A^{-j}`, stored as the
/// exponent `(i - a j) mod n`. The hidden subgroup is generated by `(a, 1)`.
pub fn make_dlog_oracle(n: u64, a: u64) -> Result<OracleSpec> {
    if a >= n {
        return Err(Error::OracleValidation(format!(
            "exponent {a} out of range for order {n}"
        )));
    }
    let group = AbelianGroup::new(vec![n, n])?;
    let table = group
        .elements()
        .map(|e| {
            let (i, j) = (e.coords()[0], e.coords()[1]);
            ((i + n * n - a * j) % n) as usize
        })
        .collect();
    let hidden = Subgroup::span(&group, &[group.element([a, 1])?])?;
    OracleSpec::new(group, n.trailing_zeros() as usize, table, hidden)
}

/// The generic instance for a subgroup `H`: `f(g)` is the index of the coset
/// `g + H` among the sorted canonical representatives.
pub fn make_coset_oracle(hidden: &Subgroup, codomain_bits: usize) -> Result<OracleSpec> {
    let group = hidden.parent().clone();
    let reps = hidden.coset_representatives();
    let table = group
        .elements()
        .map(|g| {
            let (rep, _) = hidden.coset_decompose(&g).expect("element of the group");
            reps.binary_search(&rep).expect("canonical representative")
        })
        .collect();
    OracleSpec::new(group, codomain_bits, table, hidden.clone())
}

/// A concrete realization of the order-8 exponent encoding: `gamma = 2` in
/// the multiplicative group mod 17.
pub mod mod17 {
    pub const MODULUS: u64 = 17;
    pub const GAMMA: u64 = 2;
    pub const ORDER: u64 = 8;

    pub fn pow(base: u64, e: u64) -> u64 {
        (0..e).fold(1, |acc, _| acc * base % MODULUS)
    }

    /// `gamma^i * A^{-j}` with `A = gamma^a`.
    pub fn value(i: u64, j: u64, a: u64) -> u64 {
        let a_inv = pow(pow(GAMMA, a), MODULUS - 2);
        pow(GAMMA, i) * pow(a_inv, j) % MODULUS
    }
}

/// One of the named demonstration instances.
pub fn builtin(name: &str) -> Result<OracleSpec> {
    match name {
        "pfa8" => {
            // even to even, odd to odd
            let f = make_periodic_oracle(8, 8, &[2, 3, 4, 5], 4)?;
            let k = vec![f.group().element([2])?];
            with_k(f, k)
        }
        "pfa16" => {
            let f = make_periodic_oracle(16, 16, &[2, 3, 8, 9, 4, 5, 14, 15], 8)?;
            let k = vec![f.group().element([2])?];
            with_k(f, k)
        }
        "dlog8-a3" => {
            let f = make_dlog_oracle(8, 3)?;
            let k = vec![f.group().element([3, 1])?, f.group().element([2, 0])?];
            with_k(f, k)
        }
        "z2z4" => {
            let group: AbelianGroup = "Z2xZ4".parse()?;
            let table = group
                .elements()
                .map(|e| (2 * ((e.coords()[1] + 2 * e.coords()[0]) % 4) + 1) as usize)
                .collect();
            let hidden = Subgroup::span(&group, &[group.element([1, 2])?])?;
            OracleSpec::new(group, 3, table, hidden)
        }
        other => Err(Error::Config(format!(
            "unknown instance {other:?}; expected one of {}",
            BUILTIN_NAMES.join(", ")
        ))),
    }
}

fn with_k(f: OracleSpec, k: Vec<crate::groups::GroupElement>) -> Result<OracleSpec> {
    let mut ann = f.annotations().clone();
    ann.k_generators = Some(k);
    ann.access = Access::OpenCircuit;
    f.with_annotations(ann)
}
