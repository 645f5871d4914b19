use hsp_erasure::landauer::{
    binary_entropy, reverse_extract, run_classical, run_quantum, run_truncated, BathSpec,
};

fn main() -> hsp_erasure::Result<()> {
    let small = BathSpec::new(6, 1.0)?;
    let q = run_quantum(&small, 0.5)?;
    let c = run_classical(&small, 0.5)?;
    println!(
        "N = 6, bD = 1: residual {:.3e} (quantum) {:.3e} (classical)",
        q.residual, c.residual
    );

    println!("{:>7} {:>10} {:>10}", "N", "bD", "work");
    for n in [10, 100, 1_000, 10_000, 100_000] {
        let bath = BathSpec::new(n, 10.0 / n as f64)?;
        println!(
            "{n:>7} {:>10.1e} {:>10.6}",
            bath.beta_delta(),
            run_classical(&bath, 0.5)?.total_work
        );
    }

    let fine = BathSpec::new(10_000, 1e-3)?;
    let t = run_truncated(&fine, 0.25)?;
    println!(
        "truncated, p = 0.25: {:.5} (H = {:.5})",
        t.total_work,
        binary_entropy(0.25)
    );
    println!(
        "reverse extraction: {:.5}",
        reverse_extract(&fine).total_work
    );
    Ok(())
}
