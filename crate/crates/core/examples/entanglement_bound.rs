//! Conditional entropy of the post-oracle state against the number of
//! Bell pairs available from each intermediate subgroup.

use hsp_erasure::erasure::{ell_max, entropy_bound, PromiseK};
use hsp_erasure::hsp::{builtin, post_oracle_state};

fn main() -> hsp_erasure::Result<()> {
    let f = builtin("dlog8-a3")?;
    let st = post_oracle_state(&f)?;
    println!("H(S|G) = {:.6}", entropy_bound(&st)?);
    println!("ell_max = {}", ell_max(f.group(), f.hidden())?);
    for k in f.group().subgroups() {
        if f.hidden().is_subgroup_of(&k) {
            let p = PromiseK::new(k, f.hidden())?;
            let gens: Vec<String> = p.k().generators().iter().map(|g| g.to_string()).collect();
            println!(
                "  |K| = {:>2}  generators {:<16} ell = {}",
                p.k().order(),
                gens.join(" "),
                p.ell()
            );
        }
    }
    Ok(())
}
