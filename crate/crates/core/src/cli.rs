//! Command implementations behind the `hsp-erasure` binary. Each command
//! returns the report text and the process exit code; errors map to exit
//! codes through [`Error::exit_code`].

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::erasure::{
    classify_transform_complexity, ell_max, entropy_bound, run_with_strategy,
    witness_from_promise_k, PromiseK, Strategy, WorkLedger,
};
use crate::error::{Error, Result};
use crate::groups::{GroupElement, Subgroup};
use crate::hsp::{builtin, default_shots, post_oracle_state, OracleSpec};
use crate::landauer::{
    reverse_extract_from, run_classical, run_quantum, run_truncated, BathSpec, ErasureTrace,
};
use crate::qstate::MAX_QUBITS;
use crate::simplify::{build_simplified, compare_strategies, run_simplified, simplified_ledger};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceSource {
    Builtin(String),
    File(PathBuf),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Config(format!(
                "unknown format {other:?}; expected json or csv"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub source: InstanceSource,
    pub strategy: Strategy,
    /// Generators of `K`, each a coordinate list.
    pub k_generators: Option<Vec<Vec<u64>>>,
    /// Shot budget; defaults to `8 log2 |G|`.
    pub shots: Option<usize>,
    pub seed: u64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

/// Report text and exit code of a finished command.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub report: String,
}

pub fn load_instance(source: &InstanceSource) -> Result<OracleSpec> {
    match source {
        InstanceSource::Builtin(name) => builtin(name),
        InstanceSource::File(path) => OracleSpec::load(path),
    }
}

/// Parses `"2"` or `"3,1;2,0"` into generator coordinate lists.
pub fn parse_k_generators(text: &str) -> Result<Vec<Vec<u64>>> {
    text.split(';')
        .map(|g| {
            g.split(',')
                .map(|c| {
                    c.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Config(format!("bad K generator coordinate {c:?}")))
                })
                .collect()
        })
        .collect()
}

fn promise_for(f: &OracleSpec, k_generators: Option<&[Vec<u64>]>) -> Result<PromiseK> {
    let k = match k_generators {
        Some(gens) => {
            let elems = gens
                .iter()
                .map(|c| f.group().element(c.clone()))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Config(e.to_string()))?;
            Subgroup::span(f.group(), &elems)?
        }
        None => f.annotated_k()?.ok_or_else(|| {
            Error::Config(
                "no intermediate subgroup: pass --k-generators or annotate the oracle".into(),
            )
        })?,
    };
    PromiseK::new(k, f.hidden()).map_err(|e| Error::Config(e.to_string()))
}

fn shots_for(f: &OracleSpec, shots: Option<usize>) -> Result<usize> {
    match shots {
        Some(0) => Err(Error::Config("shots must be at least 1".into())),
        Some(s) => Ok(s),
        None => Ok(default_shots(f.group())),
    }
}

fn source_label(source: &InstanceSource) -> String {
    match source {
        InstanceSource::Builtin(name) => name.clone(),
        InstanceSource::File(path) => path.display().to_string(),
    }
}

fn ledger_json(ledger: &WorkLedger) -> Value {
    json!({
        "entries": ledger.entries().iter().map(|(l, a)| json!({"label": l, "amount": a})).collect::<Vec<_>>(),
        "total": ledger.total(),
    })
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn distribution_csv(f: &OracleSpec, probs: &[f64], samples: &[GroupElement]) -> String {
    let mut out = String::from("index,element,probability,count\n");
    for (i, p) in probs.iter().enumerate() {
        let e = f.group().element_at(i);
        let count = samples.iter().filter(|s| **s == e).count();
        out.push_str(&format!("{i},\"{e}\",{p:.12},{count}\n"));
    }
    out
}

/// Runs the algorithm with the selected erasure strategy.
pub fn cmd_run(cfg: &RunConfig) -> Result<Outcome> {
    let f = load_instance(&cfg.source)?;
    let shots = shots_for(&f, cfg.shots)?;
    let witness = match cfg.strategy {
        Strategy::Brute => None,
        _ => Some(witness_from_promise_k(
            &f,
            &promise_for(&f, cfg.k_generators.as_deref())?,
        )?),
    };
    let run = run_with_strategy(&f, cfg.strategy, witness.as_ref(), shots, cfg.seed)?;
    let ok = &run.result.recovered == f.hidden();
    let report = match cfg.format {
        OutputFormat::Json => to_json(&json!({
            "schema": SCHEMA_VERSION,
            "command": "run",
            "instance": source_label(&cfg.source),
            "group": f.group().to_string(),
            "strategy": cfg.strategy.to_string(),
            "ell": run.ell,
            "shots": shots,
            "seed": cfg.seed,
            "samples": run.result.samples,
            "distribution": run.result.final_distribution.probs(),
            "recovered_subgroup": run.result.recovered.elements(),
            "hidden_subgroup": f.hidden().elements(),
            "verified": run.result.verified,
            "ledger": ledger_json(&run.ledger),
            "qubits": run.result.qubits_used,
            "oracle_calls": run.result.oracle_calls,
            "classical_queries": run.result.classical_queries,
        }))?,
        OutputFormat::Csv => distribution_csv(
            &f,
            run.result.final_distribution.probs(),
            &run.result.samples,
        ),
    };
    Ok(Outcome {
        exit_code: if ok { 0 } else { 1 },
        report,
    })
}

#[derive(Clone, Debug, Serialize)]
struct KRow {
    k_generators: Vec<GroupElement>,
    k_order: usize,
    ell: usize,
    predicted_ledger: i64,
    complexity: String,
}

/// Entanglement report: `H(S|G)`, `ell_max` and every intermediate subgroup
/// with its Bell-pair count and predicted erasure cost `m - 2 ell`.
pub fn cmd_entangle(source: &InstanceSource, format: OutputFormat) -> Result<Outcome> {
    let f = load_instance(source)?;
    let lmax = ell_max(f.group(), f.hidden())?;
    let conditional = if f.n() + f.m() <= MAX_QUBITS {
        Some(entropy_bound(&post_oracle_state(&f)?)?)
    } else {
        None
    };
    let mut rows = Vec::new();
    for k in f.group().subgroups() {
        if !f.hidden().is_subgroup_of(&k) {
            continue;
        }
        let promise = PromiseK::new(k, f.hidden())?;
        let w = witness_from_promise_k(&f, &promise)?;
        rows.push(KRow {
            k_generators: promise.k().generators().to_vec(),
            k_order: promise.k().order(),
            ell: promise.ell(),
            predicted_ledger: f.m() as i64 - 2 * promise.ell() as i64,
            complexity: classify_transform_complexity(&w).bound().to_string(),
        });
    }
    rows.sort_by(|a, b| {
        b.k_order
            .cmp(&a.k_order)
            .then(a.k_generators.cmp(&b.k_generators))
    });
    let report = match format {
        OutputFormat::Json => to_json(&json!({
            "schema": SCHEMA_VERSION,
            "command": "entangle",
            "instance": source_label(source),
            "group": f.group().to_string(),
            "hidden_subgroup": f.hidden().elements(),
            "m": f.m(),
            "ell_max": lmax,
            "conditional_entropy": conditional,
            "k_table": rows,
        }))?,
        OutputFormat::Csv => {
            let mut out = String::from("k_generators,k_order,ell,predicted_ledger,complexity\n");
            for r in &rows {
                let gens: Vec<String> = r.k_generators.iter().map(|g| g.to_string()).collect();
                out.push_str(&format!(
                    "\"{}\",{},{},{},{}\n",
                    gens.join(" "),
                    r.k_order,
                    r.ell,
                    r.predicted_ledger,
                    r.complexity
                ));
            }
            out
        }
    };
    Ok(Outcome {
        exit_code: 0,
        report,
    })
}

/// Runs the simplified algorithm and compares it with the two erasure
/// strategies on the full instance.
pub fn cmd_simplify(cfg: &RunConfig) -> Result<Outcome> {
    let f = load_instance(&cfg.source)?;
    let shots = shots_for(&f, cfg.shots)?;
    let promise = promise_for(&f, cfg.k_generators.as_deref())?;
    let w = witness_from_promise_k(&f, &promise)?;
    let so = build_simplified(&f, &w)?;
    let run = run_simplified(&so, shots, cfg.seed)?;
    let cmp = compare_strategies(&f, &promise, shots, cfg.seed)?;
    let ok = &run.recovered == f.hidden();
    let report = match cfg.format {
        OutputFormat::Json => to_json(&json!({
            "schema": SCHEMA_VERSION,
            "command": "simplify",
            "instance": source_label(&cfg.source),
            "group": f.group().to_string(),
            "k_subgroup": promise.k().elements(),
            "reduced_group": so.basis().abstract_group().to_string(),
            "reduced_table": so.reduced().table(),
            "access": f.annotations().access,
            "ell": w.ell(),
            "qubits": cmp.rows.iter().map(|r| (r.strategy.clone(), r.qubits)).collect::<std::collections::BTreeMap<_, _>>(),
            "ledger": cmp.rows.iter().map(|r| (r.strategy.clone(), r.ledger)).collect::<std::collections::BTreeMap<_, _>>(),
            "simplified_ledger": ledger_json(&simplified_ledger(&so)),
            "samples": run.samples,
            "recovered": run.recovered.elements(),
            "hidden_subgroup": f.hidden().elements(),
            "distribution": run.final_distribution.probs(),
        }))?,
        OutputFormat::Csv => {
            let mut out = String::from("strategy,qubits,oracle_calls,ledger\n");
            for r in &cmp.rows {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    r.strategy, r.qubits, r.oracle_calls, r.ledger
                ));
            }
            out
        }
    };
    Ok(Outcome {
        exit_code: if ok { 0 } else { 1 },
        report,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LandauerMode {
    Quantum,
    Classical,
    Truncated,
    Reverse,
}

impl std::str::FromStr for LandauerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quantum" => Ok(LandauerMode::Quantum),
            "classical" => Ok(LandauerMode::Classical),
            "truncated" => Ok(LandauerMode::Truncated),
            "reverse" => Ok(LandauerMode::Reverse),
            other => Err(Error::Config(format!(
                "unknown mode {other:?}; expected quantum, classical, truncated or reverse"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LandauerConfig {
    pub n: Vec<usize>,
    /// Explicit `beta Delta` values; ignored when `n_beta_delta` is set.
    pub beta_delta: Vec<f64>,
    /// Fixed product `N beta Delta`, giving `beta Delta = product / N`.
    pub n_beta_delta: Option<f64>,
    pub p_init: f64,
    pub mode: LandauerMode,
    pub format: OutputFormat,
}

fn landauer_trace(mode: LandauerMode, bath: &BathSpec, p_init: f64) -> Result<ErasureTrace> {
    match mode {
        LandauerMode::Quantum => run_quantum(bath, p_init),
        LandauerMode::Classical => run_classical(bath, p_init),
        LandauerMode::Truncated => run_truncated(bath, p_init),
        LandauerMode::Reverse => reverse_extract_from(bath, p_init),
    }
}

/// A single `(N, beta Delta)` point emits one CSV row per swap with columns
/// `step,p,cumulative_work` (step 0 is the initial state); several points
/// emit one summary row per point, `n,beta_delta,residual,total_work`.
pub fn cmd_landauer(cfg: &LandauerConfig) -> Result<Outcome> {
    if cfg.n.is_empty() {
        return Err(Error::Config("at least one --n value is required".into()));
    }
    let mut points = Vec::new();
    for &n in &cfg.n {
        match cfg.n_beta_delta {
            Some(prod) => points.push((n, prod / n as f64)),
            None => {
                if cfg.beta_delta.is_empty() {
                    return Err(Error::Config("pass --beta-delta or --n-beta-delta".into()));
                }
                points.extend(cfg.beta_delta.iter().map(|&b| (n, b)));
            }
        }
    }
    let mut traces = Vec::new();
    for &(n, bd) in &points {
        let bath = BathSpec::new(n, bd)?;
        traces.push((n, bd, landauer_trace(cfg.mode, &bath, cfg.p_init)?));
    }
    let report = match (cfg.format, traces.as_slice()) {
        (OutputFormat::Csv, [(_, _, t)]) => {
            let mut out = String::from("step,p,cumulative_work\n");
            out.push_str(&format!("0,{:.15e},{:.15e}\n", t.initial_p, 0.0));
            for (i, s) in t.steps.iter().enumerate() {
                out.push_str(&format!(
                    "{},{:.15e},{:.15e}\n",
                    i + 1,
                    s.p,
                    s.cumulative_work
                ));
            }
            out
        }
        (OutputFormat::Csv, _) => {
            let mut out = String::from("n,beta_delta,residual,total_work\n");
            for (n, bd, t) in &traces {
                out.push_str(&format!(
                    "{n},{bd:.15e},{:.15e},{:.15e}\n",
                    t.residual, t.total_work
                ));
            }
            out
        }
        (OutputFormat::Json, _) => to_json(&json!({
            "schema": SCHEMA_VERSION,
            "command": "landauer",
            "p_init": cfg.p_init,
            "points": traces.iter().map(|(n, bd, t)| json!({
                "n": n,
                "beta_delta": bd,
                "residual": t.residual,
                "total_work": t.total_work,
                "entropy_drop": t.entropy_drop(),
            })).collect::<Vec<_>>(),
        }))?,
    };
    Ok(Outcome {
        exit_code: 0,
        report,
    })
}

/// Writes `text` to `out` through a temporary file in the same directory
/// and a rename, or to stdout when `out` is `None`.
pub fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
                _ => PathBuf::from("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.persist(path).map_err(|e| Error::Io(e.error))?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(name: &str, strategy: Strategy) -> RunConfig {
        RunConfig {
            source: InstanceSource::Builtin(name.into()),
            strategy,
            k_generators: None,
            shots: None,
            seed: 11,
            format: OutputFormat::Json,
            out: None,
        }
    }

    #[test]
    fn parses_k_generators() {
        assert_eq!(parse_k_generators("2").unwrap(), vec![vec![2]]);
        assert_eq!(
            parse_k_generators("3,1;2,0").unwrap(),
            vec![vec![3, 1], vec![2, 0]]
        );
        assert!(parse_k_generators("x").is_err());
    }

    #[test]
    fn run_reports_ledger() {
        let out = cmd_run(&cfg("pfa8", Strategy::Brute)).unwrap();
        assert_eq!(out.exit_code, 0);
        let v: Value = serde_json::from_str(&out.report).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["ledger"]["total"], 3);
        let out = cmd_run(&cfg("pfa8", Strategy::SideInfo)).unwrap();
        let v: Value = serde_json::from_str(&out.report).unwrap();
        assert_eq!(v["ledger"]["total"], 1);
    }

    #[test]
    fn side_info_without_k_is_a_config_error() {
        let e = cmd_run(&cfg("z2z4", Strategy::SideInfo)).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn entangle_table() {
        let out =
            cmd_entangle(&InstanceSource::Builtin("pfa8".into()), OutputFormat::Json).unwrap();
        let v: Value = serde_json::from_str(&out.report).unwrap();
        assert_eq!(v["ell_max"], 2);
        let ells: Vec<u64> = v["k_table"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r["ell"].as_u64().unwrap())
            .collect();
        assert_eq!(ells, vec![0, 1, 2]);
        assert!((v["conditional_entropy"].as_f64().unwrap() + 2.0).abs() < 1e-9);
    }

    #[test]
    fn landauer_csv_shape() {
        let c = LandauerConfig {
            n: vec![3],
            beta_delta: vec![1.0],
            n_beta_delta: None,
            p_init: 0.5,
            mode: LandauerMode::Classical,
            format: OutputFormat::Csv,
        };
        let out = cmd_landauer(&c).unwrap();
        let lines: Vec<&str> = out.report.lines().collect();
        assert_eq!(lines[0], "step,p,cumulative_work");
        assert_eq!(lines.len(), 5);
    }
}
