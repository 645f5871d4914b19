//! A witness that factorizes the post-oracle state at K = H reveals H
//! without any measurement.

use hsp_erasure::erasure::{recover_subgroup_from_factorizer, witness_from_promise_k, PromiseK};
use hsp_erasure::hsp::{builtin, BUILTIN_NAMES};

fn main() -> hsp_erasure::Result<()> {
    for name in BUILTIN_NAMES {
        let f = builtin(name)?;
        let w = witness_from_promise_k(&f, &PromiseK::new(f.hidden().clone(), f.hidden())?)?;
        let h = recover_subgroup_from_factorizer(f.group(), &w)?;
        println!("{name}: ell = {}, H = {h}", w.ell());
        assert_eq!(&h, f.hidden());
    }
    Ok(())
}
