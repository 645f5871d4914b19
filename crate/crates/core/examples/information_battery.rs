//! Stores the Bell pairs in a battery of depleted and fueled qubits instead
//! of erasing them.

use hsp_erasure::erasure::{run_with_strategy, witness_from_promise_k, PromiseK, Strategy};
use hsp_erasure::hsp::builtin;

fn main() -> hsp_erasure::Result<()> {
    let f = builtin("z2z4")?;
    for k in f.group().subgroups() {
        if !f.hidden().is_subgroup_of(&k) {
            continue;
        }
        let p = PromiseK::new(k, f.hidden())?;
        let w = witness_from_promise_k(&f, &p)?;
        let run = run_with_strategy(&f, Strategy::Battery, Some(&w), 24, 3)?;
        println!(
            "K = {:<28} ell = {}  ledger {:+}  recovered {}",
            p.k().to_string(),
            run.ell,
            run.ledger.total(),
            run.result.recovered
        );
    }
    Ok(())
}
