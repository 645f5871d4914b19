//! Runs the standard algorithm on every built-in instance.

use hsp_erasure::hsp::{builtin, default_shots, run_standard, BUILTIN_NAMES};

fn main() -> hsp_erasure::Result<()> {
    for name in BUILTIN_NAMES {
        let f = builtin(name)?;
        let r = run_standard(&f, default_shots(f.group()), 42)?;
        let samples: Vec<String> = r.samples.iter().map(|s| s.to_string()).collect();
        println!("{name} over {}: samples {}", f.group(), samples.join(" "));
        println!(
            "  recovered {} (declared {}), {} oracle calls, {} qubits",
            r.recovered,
            f.hidden(),
            r.oracle_calls,
            r.qubits_used
        );
    }
    Ok(())
}
