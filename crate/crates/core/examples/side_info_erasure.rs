use hsp_erasure::erasure::{run_with_strategy, witness_from_promise_k, PromiseK, Strategy};
use hsp_erasure::hsp::builtin;

fn main() -> hsp_erasure::Result<()> {
    let f = builtin("pfa16")?;
    let k = f.annotated_k()?.expect("pfa16 carries a K annotation");
    let w = witness_from_promise_k(&f, &PromiseK::new(k, f.hidden())?)?;
    for s in [Strategy::Brute, Strategy::SideInfo] {
        let run = run_with_strategy(&f, s, Some(&w), 32, 7)?;
        println!("{s}: ell = {}, recovered {}", run.ell, run.result.recovered);
        for (label, amount) in run.ledger.entries() {
            println!("  {amount:+3}  {label}");
        }
        println!("  total {}", run.ledger.total());
    }
    Ok(())
}
