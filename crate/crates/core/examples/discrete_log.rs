//! Discrete logarithm in the multiplicative group mod 17 as a hidden
//! subgroup problem over Z8 x Z8.

use hsp_erasure::hsp::{default_shots, make_dlog_oracle, mod17, run_standard};

fn main() -> hsp_erasure::Result<()> {
    let a = 5;
    let x = mod17::pow(mod17::GAMMA, a);
    println!(
        "find a with {}^a = {x} (mod {})",
        mod17::GAMMA,
        mod17::MODULUS
    );
    let f = make_dlog_oracle(mod17::ORDER, a)?;
    let r = run_standard(&f, default_shots(f.group()), 9)?;
    println!("hidden subgroup {}", r.recovered);
    // H is generated by (a, 1)
    let found = r
        .recovered
        .elements()
        .iter()
        .find(|e| e.coords()[1] == 1)
        .map(|e| e.coords()[0])
        .expect("H contains (a, 1)");
    println!(
        "a = {found}, check {}^{found} = {}",
        mod17::GAMMA,
        mod17::pow(mod17::GAMMA, found)
    );
    Ok(())
}
