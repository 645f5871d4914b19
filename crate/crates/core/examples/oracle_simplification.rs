use hsp_erasure::erasure::PromiseK;
use hsp_erasure::hsp::builtin;
use hsp_erasure::simplify::{compare_strategies, run_simplified, simplify_with_promise};

fn main() -> hsp_erasure::Result<()> {
    let f = builtin("pfa8")?;
    let k = f.annotated_k()?.expect("pfa8 carries a K annotation");
    let p = PromiseK::new(k, f.hidden())?;

    let so = simplify_with_promise(&f, &p)?;
    println!(
        "reduced group {} with table {:?}",
        so.reduced().group(),
        so.reduced().table()
    );
    println!("{} qubits saved", so.qubit_savings());
    let r = run_simplified(&so, 16, 1)?;
    println!("recovered {} using {} qubits", r.recovered, r.qubits_used);

    let cmp = compare_strategies(&f, &p, 16, 1)?;
    println!(
        "{:<12} {:>6} {:>6} {:>6}",
        "strategy", "qubits", "calls", "ledger"
    );
    for row in cmp.rows {
        println!(
            "{:<12} {:>6} {:>6} {:>6}",
            row.strategy, row.qubits, row.oracle_calls, row.ledger
        );
    }
    Ok(())
}
