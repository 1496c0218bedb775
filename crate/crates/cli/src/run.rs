use std::path::Path;
use std::time::Instant;

use junta_core::bits::binomial;
use junta_core::exactref::{exact_lambda, ground_truth, EXACT_CAP};
use junta_core::fourier::sig12;
use junta_core::oracles::{OracleProvider, SimulatedProvider};
use junta_core::prune::{estimate_lambdas, reduce_oracles, LambdaConfig};
use junta_core::report::{EstimateKind, EstimatorReport, TruthBlock, SCHEMA_VERSION};
use junta_core::{EstimateParams, EstimatorRegistry, FourierSpectrum, SeedStream};
use serde::Serialize;
use serde_json::json;

use crate::instance::{coords_1based, InstanceArgs};
use crate::{EstimateArgs, Failure};

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json(out: Option<&Path>, value: &impl Serialize) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure { code: 1, kind: "internal", message: e.to_string() })?;
    text.push('\n');
    emit(out, &text)
}

pub fn gen(args: &InstanceArgs, out: Option<&Path>) -> Result<(), Failure> {
    let inst = args.build()?;
    let t = inst.f.table().ok_or_else(|| Failure { code: 3, kind: "unsupported", message: "function too large to tabulate".into() })?;
    emit(out, &t.to_text())
}

pub fn fourier(args: &InstanceArgs, out: Option<&Path>) -> Result<(), Failure> {
    let inst = args.build()?;
    let spec = FourierSpectrum::of(&inst.f)?;
    let mut csv = spec.to_csv();
    csv.push_str(&format!("# sum_sq,{}\n", sig12(spec.total_weight())));
    emit(out, &csv)
}

fn exact_guard(f: &junta_core::BooleanFunction) -> Result<(), Failure> {
    if f.arity() > EXACT_CAP {
        return Err(Failure { code: 3, kind: "unsupported", message: format!("exact references need n ≤ {EXACT_CAP}, got {}", f.arity()) });
    }
    Ok(())
}

pub fn truth(args: &InstanceArgs, k_prime: Option<usize>, out: Option<&Path>) -> Result<(), Failure> {
    let inst = args.build()?;
    exact_guard(&inst.f)?;
    let k = args.k()?;
    let gt = ground_truth(&inst.f, k, k_prime)?;
    emit_json(
        out,
        &json!({
            "schema_version": SCHEMA_VERSION,
            "instance": inst.description,
            "k": k,
            "distance": gt.distance,
            "best_set": gt.best_set,
            "best_coords": coords_1based(gt.best_set),
            "subset_mass": gt.subset_mass,
            "mass_set": gt.mass_set,
            "mass_coords": coords_1based(gt.mass_set),
            "k_prime": k_prime,
            "distance_k_prime": gt.distance_k_prime,
        }),
    )
}

fn config_echo(command: &str, estimator: &str, a: &EstimateArgs) -> serde_json::Value {
    json!({
        "command": command,
        "estimator": estimator,
        "n": a.instance.n,
        "k": a.instance.k,
        "eps": a.eps,
        "seed": a.instance.seed,
        "plant": a.instance.plant,
        "gamma": a.instance.gamma,
        "kind": a.instance.kind,
        "input": a.instance.input.as_ref().map(|p| p.display().to_string()),
        "profile": if a.budget.verbatim { "verbatim" } else { "desk" },
        "budget": a.budget.budget(),
    })
}

pub fn estimate(command: &str, estimator: &str, a: &EstimateArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let inst = a.instance.build()?;
    let k = a.instance.k()?;
    let budget = a.budget.budget();
    let registry = EstimatorRegistry::with_defaults();
    let est = registry.get(estimator)?;
    let seeds = SeedStream::new(a.instance.seed).derive("estimator");
    let outcome = est.estimate(&inst.f, EstimateParams { k, eps: a.eps }, &SimulatedProvider::default(), &budget, seeds);

    let mut config = config_echo(command, estimator, a);
    config["instance"] = inst.description;
    let mut report = EstimatorReport {
        schema_version: SCHEMA_VERSION,
        estimator: estimator.to_string(),
        alpha: None,
        mass: None,
        query_count: inst.f.queries(),
        k_prime: 0,
        best_set: None,
        c_tilde: None,
        candidates_examined: None,
        branch_leaves: None,
        phase_diagnostics: Vec::new(),
        failed_stage: None,
        error: None,
        seed: a.instance.seed,
        config,
        truth: None,
        wall_time_ms: 0,
    };
    match outcome {
        Ok(e) => {
            match e.kind {
                EstimateKind::Distance => report.alpha = Some(e.value),
                EstimateKind::Mass => report.mass = Some(e.value),
            }
            report.k_prime = e.k_prime;
            report.best_set = e.best_set;
            report.c_tilde = e.c_tilde;
            report.candidates_examined = e.candidates_examined;
            report.branch_leaves = e.branch_leaves;
            if inst.f.arity() <= EXACT_CAP && inst.f.is_tabulable() {
                let kp = (estimator == "relaxed").then_some(e.k_prime.max(k));
                let exact = ground_truth(&inst.f, k, kp)?;
                let target = match e.kind {
                    EstimateKind::Distance => exact.distance,
                    EstimateKind::Mass => exact.subset_mass,
                };
                report.truth = Some(TruthBlock {
                    abs_error: (e.value - target).abs(),
                    exhaustive_queries: 2f64.powi(inst.f.arity() as i32) * binomial(inst.f.arity(), k),
                    exact,
                });
            }
            report.phase_diagnostics = e.phases;
        }
        Err(err) if err.is_probabilistic() => {
            report.failed_stage = Some(err.phase().unwrap_or("unknown").to_string());
            report.error = Some(err.to_string());
        }
        Err(err) => return Err(err.into()),
    }
    report.query_count = inst.f.queries();
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    emit_json(a.out.as_deref(), &report)
}

/// λ estimates on f's own coordinates plus the oracle-reduction outcome.
pub fn prune(a: &EstimateArgs) -> Result<(), Failure> {
    let inst = a.instance.build()?;
    let k = a.instance.k()?;
    let budget = a.budget.budget();
    let seeds = SeedStream::new(a.instance.seed).derive("prune");
    let n = inst.f.arity();

    let cfg = LambdaConfig::plan(n, k, a.eps * a.eps / (48.0 * n as f64), 0.05, &budget)?;
    let lambdas = estimate_lambdas(&inst.f, &cfg, seeds.derive("lambda"))?;
    let lambda_queries = inst.f.queries();
    let exact: Option<Vec<f64>> = (n <= EXACT_CAP)
        .then(|| FourierSpectrum::of(&inst.f).ok())
        .flatten()
        .map(|spec| (0..n).map(|i| exact_lambda(&spec, i, k)).collect());

    let provider = SimulatedProvider::default();
    let set = provider.provide(&inst.f, k, a.eps, &budget, seeds.derive("provider"))?;
    let reduced = reduce_oracles(&inst.f, &set, k, a.eps, 0.005, &budget, seeds.derive("reduce"))?;
    let kept = set.harness_mask(reduced.chosen.iter().copied());

    emit_json(
        a.out.as_deref(),
        &json!({
            "schema_version": SCHEMA_VERSION,
            "config": config_echo("prune", "prune", a),
            "lambda": {
                "levels": cfg.levels,
                "restrictions": cfg.restrictions,
                "samples": cfg.samples,
                "estimates": lambdas.values,
                "exact": exact,
                "queries": lambda_queries,
            },
            "reduce": {
                "oracles": set.len(),
                "rounds_planned": reduced.rounds_planned,
                "rounds_run": reduced.rounds_run,
                "zero_mass_rounds": reduced.zero_mass_rounds,
                "kept_coords": coords_1based(kept),
                "queries": inst.f.queries() - lambda_queries,
                "oracle_queries": set.queries(),
            },
        }),
    )
}
