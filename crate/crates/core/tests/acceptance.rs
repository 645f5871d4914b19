//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test --test acceptance`.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hsp_erasure::erasure::{
    check_conditions, entropy_bound, erase_side_info, recover_subgroup_from_factorizer,
    run_with_strategy, verify_factorization, witness_from_promise_k, PromiseK, Strategy,
    WorkLedger, MAX_BATTERY_QUBITS,
};
use hsp_erasure::groups::{AbelianGroup, Subgroup};
use hsp_erasure::hsp::{
    builtin, default_shots, final_distribution, make_coset_oracle, post_oracle_state, run_standard,
    Access, Annotations, OracleSpec, BUILTIN_NAMES,
};
use hsp_erasure::landauer::{
    binary_entropy, run_classical, run_quantum, run_truncated, BathSpec, MAX_QUANTUM_BATH,
};
use hsp_erasure::qstate::QuantumState;
use hsp_erasure::simplify::{run_simplified, simplified_ledger, simplify_with_promise};
use num_complex::Complex64;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{all_instances, intermediate, SEEDS};

const ENTROPY_TOL: f64 = 1e-9;
const INVARIANCE_TOL: f64 = 1e-9;
const RESIDUAL_TOL: f64 = 1e-10;
const ENGINE_TOL: f64 = 1e-10;
const FIDELITY_TOL: f64 = 1e-9;
const LANDAUER_SLACK: f64 = 1.02;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    ensure(elapsed.as_secs() < limit_s, || {
        format!("took {:.1} s, limit {limit_s} s", elapsed.as_secs_f64())
    })
}

fn builtins() -> Vec<(&'static str, OracleSpec)> {
    BUILTIN_NAMES
        .iter()
        .map(|n| (*n, builtin(n).unwrap()))
        .collect()
}

fn log2_index(sub: &Subgroup) -> i64 {
    (sub.parent().order() as f64 / sub.order() as f64)
        .log2()
        .round() as i64
}

fn c1_conditional_entropy() -> Outcome {
    let t = Instant::now();
    let mut cases: Vec<Subgroup> = Vec::new();
    for g in ["Z4", "Z8", "Z16", "Z2xZ4"] {
        let group: AbelianGroup = g.parse().unwrap();
        cases.extend(group.subgroups());
    }
    let big: AbelianGroup = "Z8xZ8".parse().unwrap();
    let pool: Vec<_> = big
        .subgroups()
        .into_iter()
        .filter(|h| h.order() >= 8)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    cases.extend(pool.choose_multiple(&mut rng, 5).cloned());

    let mut worst = 0.0f64;
    for h in &cases {
        let want = (h.parent().order() as f64 / h.order() as f64).log2();
        let f = make_coset_oracle(h, want.round() as usize).map_err(|e| e.to_string())?;
        let st = post_oracle_state(&f).map_err(|e| e.to_string())?;
        let got = -entropy_bound(&st).map_err(|e| e.to_string())?;
        worst = worst.max((got - want).abs());
        ensure((got - want).abs() <= ENTROPY_TOL, || {
            format!(
                "{} in {}: -H(S|G) = {got}, log2 index = {want}",
                h,
                h.parent()
            )
        })?;
    }
    within(t.elapsed(), 60)?;
    Ok(format!("{} subgroups, max error {worst:.1e}", cases.len()))
}

fn c2_side_info_ledger() -> Outcome {
    let mut pairs = 0;
    for (name, f) in builtins() {
        let post = post_oracle_state(&f).map_err(|e| e.to_string())?;
        for p in intermediate(&f) {
            let w = witness_from_promise_k(&f, &p).map_err(|e| e.to_string())?;
            let mut ledger = WorkLedger::new();
            erase_side_info(&post, &w, &mut ledger).map_err(|e| e.to_string())?;
            let want = f.m() as i64 - 2 * log2_index(p.k());
            ensure(ledger.total() == want, || {
                format!("{name}, K = {}: ledger {} != {want}", p.k(), ledger.total())
            })?;
            pairs += 1;
        }
    }
    let z2: AbelianGroup = "Z2".parse().unwrap();
    let bell = make_coset_oracle(&Subgroup::trivial(&z2), 1).unwrap();
    let p = PromiseK::new(Subgroup::trivial(&z2), bell.hidden()).unwrap();
    let w = witness_from_promise_k(&bell, &p).unwrap();
    let mut ledger = WorkLedger::new();
    erase_side_info(&post_oracle_state(&bell).unwrap(), &w, &mut ledger).unwrap();
    ensure(ledger.total() == -1, || {
        format!("Bell pair ledger {}", ledger.total())
    })?;
    Ok(format!("{pairs} (instance, K) pairs, Bell pair -1"))
}

fn c3_measurement_invariance() -> Outcome {
    let (mut runs, mut skipped, mut worst) = (0, 0, 0.0f64);
    for (name, f) in builtins() {
        let reference = final_distribution(&f).map_err(|e| e.to_string())?;
        let mut jobs = vec![(Strategy::Brute, None)];
        for p in intermediate(&f) {
            let w = witness_from_promise_k(&f, &p).map_err(|e| e.to_string())?;
            jobs.push((Strategy::SideInfo, Some(w.clone())));
            if f.n() + f.m() + 2 * p.ell() <= MAX_BATTERY_QUBITS {
                jobs.push((Strategy::Battery, Some(w)));
            } else {
                skipped += 1;
            }
        }
        for (s, w) in jobs {
            let run = run_with_strategy(&f, s, w.as_ref(), 1, 0).map_err(|e| e.to_string())?;
            for (a, b) in reference
                .probs()
                .iter()
                .zip(run.result.final_distribution.probs())
            {
                worst = worst.max((a - b).abs());
            }
            ensure(worst <= INVARIANCE_TOL, || {
                format!("{name} with {s}: deviation {worst:.2e}")
            })?;
            runs += 1;
        }
    }
    Ok(format!(
        "{runs} runs, max deviation {worst:.1e}, {skipped} battery runs above {MAX_BATTERY_QUBITS} qubits not simulated"
    ))
}

fn c4_hsp_correctness() -> Outcome {
    let t = Instant::now();
    let mut calls = 0;
    for (name, f) in builtins() {
        for seed in SEEDS {
            let r = run_standard(&f, default_shots(f.group()), seed).map_err(|e| e.to_string())?;
            ensure(&r.recovered == f.hidden(), || {
                format!("{name}, seed {seed}: recovered {}", r.recovered)
            })?;
            calls += r.oracle_calls;
        }
    }
    within(t.elapsed(), 300)?;
    Ok(format!(
        "{} instances x {} seeds, {calls} oracle calls",
        BUILTIN_NAMES.len(),
        SEEDS.len()
    ))
}

fn c5_simplification() -> Outcome {
    let mut pairs = 0;
    for (name, f) in builtins() {
        let post = post_oracle_state(&f).map_err(|e| e.to_string())?;
        let closed_f = f
            .clone()
            .with_annotations(Annotations {
                access: Access::BlackBox,
                ..f.annotations().clone()
            })
            .unwrap();
        for p in intermediate(&f) {
            let ell = p.ell();
            let open = simplify_with_promise(&f, &p).map_err(|e| e.to_string())?;
            let closed = simplify_with_promise(&closed_f, &p).map_err(|e| e.to_string())?;
            closed.check_bypass().map_err(|e| e.to_string())?;
            for seed in SEEDS {
                let r = run_simplified(&open, default_shots(f.group()), seed)
                    .map_err(|e| e.to_string())?;
                ensure(&r.recovered == f.hidden(), || {
                    format!("{name}, K = {}, seed {seed}", p.k())
                })?;
                ensure(r.qubits_used + 2 * ell == f.n() + f.m(), || {
                    format!("{name}, K = {}: {} qubits", p.k(), r.qubits_used)
                })?;
            }
            let rb =
                run_simplified(&closed, default_shots(f.group()), 1).map_err(|e| e.to_string())?;
            ensure(
                &rb.recovered == f.hidden() && rb.qubits_used == f.n() + f.m(),
                || format!("{name}, K = {}: black-box run", p.k()),
            )?;
            let w = open.witness();
            let mut side = WorkLedger::new();
            erase_side_info(&post, w, &mut side).map_err(|e| e.to_string())?;
            ensure(simplified_ledger(&open).total() == side.total(), || {
                format!(
                    "{name}, K = {}: ledgers {} vs {}",
                    p.k(),
                    simplified_ledger(&open).total(),
                    side.total()
                )
            })?;
            pairs += 1;
        }
    }
    Ok(format!(
        "{pairs} (instance, K) pairs x {} seeds",
        SEEDS.len()
    ))
}

fn c6_factorizer_recovery() -> Outcome {
    let instances = all_instances();
    for (name, f) in &instances {
        let p = PromiseK::new(f.hidden().clone(), f.hidden()).unwrap();
        let w = witness_from_promise_k(f, &p).map_err(|e| e.to_string())?;
        let h = recover_subgroup_from_factorizer(f.group(), &w).map_err(|e| e.to_string())?;
        ensure(&h == f.hidden(), || format!("{name}: recovered {h}"))?;
    }
    Ok(format!("{} instances", instances.len()))
}

fn c7_residual() -> Outcome {
    let q = |n: usize, bd: f64| {
        let x = (-(n as f64) * bd).exp();
        x / (1.0 + x)
    };
    let mut worst = 0.0f64;
    for n in 1..=MAX_QUANTUM_BATH {
        for bd in [0.5, 1.0, 2.0] {
            let bath = BathSpec::new(n, bd).unwrap();
            let a = run_quantum(&bath, 0.5).map_err(|e| e.to_string())?;
            let b = run_classical(&bath, 0.5).map_err(|e| e.to_string())?;
            worst = worst.max((a.residual - q(n, bd)).abs());
            ensure((a.residual - q(n, bd)).abs() <= RESIDUAL_TOL, || {
                format!("quantum N={n}, bD={bd}")
            })?;
            ensure((a.total_work - b.total_work).abs() <= ENGINE_TOL, || {
                format!("engines differ at N={n}, bD={bd}")
            })?;
            for (x, y) in a.steps.iter().zip(&b.steps) {
                ensure((x.p - y.p).abs() <= ENGINE_TOL, || {
                    format!("step {} at N={n}, bD={bd}", x.ell)
                })?;
            }
        }
    }
    for (n, bd) in [
        (1, 1.0),
        (10, 1.0),
        (100, 0.1),
        (1000, 0.01),
        (10_000, 1e-3),
    ] {
        let b = run_classical(&BathSpec::new(n, bd).unwrap(), 0.5).unwrap();
        worst = worst.max((b.residual - q(n, bd)).abs());
        ensure((b.residual - q(n, bd)).abs() <= RESIDUAL_TOL, || {
            format!("classical N={n}, bD={bd}")
        })?;
    }
    Ok(format!("max residual error {worst:.1e}"))
}

fn c8_landauer_convergence() -> Outcome {
    let t = Instant::now();
    let work = |n: usize, bd: f64| run_classical(&BathSpec::new(n, bd).unwrap(), 0.5).unwrap();
    // bD = N^(-1/2): the gap N bD grows, so the residual vanishes and the limit is 1
    let family: Vec<f64> = [64usize, 256, 1024, 4096, 16_384]
        .iter()
        .map(|&n| work(n, 1.0 / (n as f64).sqrt()).total_work)
        .collect();
    ensure(family.windows(2).all(|w| w[1] < w[0]), || {
        format!("not monotone: {family:?}")
    })?;
    ensure(family.iter().all(|w| *w > 1.0), || {
        format!("below 1: {family:?}")
    })?;
    let point = work(10_000, 1e-3);
    ensure(point.total_work <= LANDAUER_SLACK, || {
        format!("N=1e4, bD=1e-3: {}", point.total_work)
    })?;
    ensure(point.total_work >= point.entropy_drop(), || {
        "N=1e4 beats the entropy drop".into()
    })?;
    let h = binary_entropy(0.25);
    let tr =
        run_truncated(&BathSpec::new(10_000, 1e-3).unwrap(), 0.25).map_err(|e| e.to_string())?;
    ensure(tr.total_work <= LANDAUER_SLACK * h, || {
        format!("truncated {} vs H {h}", tr.total_work)
    })?;
    within(t.elapsed(), 30)?;
    let shown: Vec<_> = family.iter().map(|w| format!("{w:.5}")).collect();
    Ok(format!(
        "W(N, bD = N^-1/2) = {}; W(1e4, 1e-3) = {:.5}; truncated {:.5} vs H(0.25) = {h:.5}",
        shown.join(" > "),
        point.total_work,
        tr.total_work
    ))
}

fn state_from_table(f: &OracleSpec, table: &[usize]) -> QuantumState {
    let m = f.m();
    let mut amp = vec![Complex64::default(); f.group().order() << m];
    let a = 1.0 / (f.group().order() as f64).sqrt();
    for (g, &v) in table.iter().enumerate() {
        amp[(g << m) | v] = Complex64::new(a, 0.0);
    }
    QuantumState::from_pure(hsp_erasure::hsp::hsp_layout(f), &amp).unwrap()
}

fn c9_biconditional() -> Outcome {
    let mut witnesses = Vec::new();
    let mut min_fidelity = 1.0f64;
    for (name, f) in builtins() {
        let post = post_oracle_state(&f).map_err(|e| e.to_string())?;
        for p in intermediate(&f) {
            let w = witness_from_promise_k(&f, &p).map_err(|e| e.to_string())?;
            let fz = verify_factorization(&post, &w).map_err(|e| format!("{name}: {e}"))?;
            min_fidelity = min_fidelity.min(fz.fidelity);
            ensure(fz.fidelity >= 1.0 - FIDELITY_TOL, || {
                format!("{name}: fidelity {}", fz.fidelity)
            })?;
            if p.ell() > 0 {
                witnesses.push((name, f.clone(), w));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..10 {
        let (name, f, w) = &witnesses[i % witnesses.len()];
        let mut table = f.table().to_vec();
        let g = rng.random_range(0..table.len());
        let old = table[g];
        while table[g] == old {
            table[g] = rng.random_range(0..1usize << f.m());
        }
        ensure(check_conditions(&table, w).is_err(), || {
            format!("{name}: mutation {i} passed the conditions")
        })?;
        let st = state_from_table(f, &table);
        ensure(
            matches!(
                verify_factorization(&st, w),
                Err(hsp_erasure::Error::Factorization { .. })
            ),
            || format!("{name}: mutation {i} factored"),
        )?;
    }
    Ok(format!(
        "10 mutations rejected, min unmutated fidelity {min_fidelity:.12}"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "conditional entropy equals -log2 |G/H|",
            c1_conditional_entropy,
        ),
        (
            "side-information ledger is m - 2 log2 |G/K|",
            c2_side_info_ledger,
        ),
        (
            "erasure leaves the G measurement unchanged",
            c3_measurement_invariance,
        ),
        ("standard algorithm recovers H", c4_hsp_correctness),
        (
            "simplified algorithm matches the side-information run",
            c5_simplification,
        ),
        ("factorizer at K = H reveals H", c6_factorizer_recovery),
        ("Landauer residual population", c7_residual),
        ("Landauer work converges", c8_landauer_convergence),
        ("mutated tables fail to factor", c9_biconditional),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS: {title} ({detail}; {secs:.1} s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL: {title} ({detail}; {secs:.1} s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
