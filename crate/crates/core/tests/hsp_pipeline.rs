mod common;

use hsp_erasure::hsp::{
    builtin, default_shots, final_distribution, post_oracle_state, run_standard,
};

use common::{all_instances, character, SEEDS};

#[test]
fn final_distribution_is_uniform_on_h_perp() {
    for (name, f) in all_instances() {
        let perp = common::brute_perp(f.group(), f.hidden().elements());
        let d = final_distribution(&f).unwrap();
        for (i, p) in d.probs().iter().enumerate() {
            let want = if perp.contains(&i) {
                1.0 / perp.len() as f64
            } else {
                0.0
            };
            assert!(
                (p - want).abs() < 1e-9,
                "{name}: outcome {i} has {p}, want {want}"
            );
        }
    }
}

#[test]
fn post_oracle_state_is_the_coset_state() {
    // (1/|G|) sum_{g,g'} |g, f(g)><g', f(g')|
    for (name, f) in all_instances() {
        let st = post_oracle_state(&f).unwrap();
        let m = f.m();
        let norm = 1.0 / f.group().order() as f64;
        for (g, &fg) in f.table().iter().enumerate() {
            for (h, &fh) in f.table().iter().enumerate() {
                let v = st.rho()[((g << m) | fg, (h << m) | fh)];
                assert!((v.re - norm).abs() < 1e-10 && v.im.abs() < 1e-10, "{name}");
            }
        }
        assert!((st.purity() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn recovers_hidden_subgroup_for_every_seed() {
    for (name, f) in all_instances() {
        let shots = default_shots(f.group());
        for seed in SEEDS {
            let r = run_standard(&f, shots, seed).unwrap();
            assert_eq!(&r.recovered, f.hidden(), "{name}, seed {seed}");
            assert!(r.verified);
            assert!(r.oracle_calls <= shots);
            assert_eq!(r.qubits_used, f.n() + f.m());
            // every sample is a character trivial on H
            for s in &r.samples {
                for h in f.hidden().elements() {
                    assert!((character(f.group(), s, h) - 1.0).norm() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn runs_are_reproducible() {
    let f = builtin("dlog8-a3").unwrap();
    let a = run_standard(&f, 48, 42).unwrap();
    let b = run_standard(&f, 48, 42).unwrap();
    assert_eq!(a.samples, b.samples);
}
