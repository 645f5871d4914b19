//! The standard Abelian hidden subgroup algorithm.

mod algorithm;
mod instances;
mod oracle;

pub use algorithm::{
    apply_oracle, default_shots, final_distribution, hsp_layout, measure_main, oracle_permutation,
    post_oracle_state, qft, run_standard, HspRunResult,
};
pub(crate) use algorithm::{finish, solve};
pub use instances::{
    builtin, make_coset_oracle, make_dlog_oracle, make_periodic_oracle, mod17, BUILTIN_NAMES,
};
pub use oracle::{Access, Annotations, OracleFile, OracleSpec};
