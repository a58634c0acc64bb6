use std::fs;
use std::path::Path;

use cptdp::estimator::{convergence_study, DiscreteSampler};
use cptdp::functional::cpt_parts;
use cptdp::io::{load_distribution, load_model, load_spec};
use cptdp::seed::SEED_SCHEME;
use cptdp::{cpt_value_exact, cpt_value_quadrature, value_iteration, ValueFunction};
use serde::Serialize;

use crate::args::{EstimateArgs, EvaluateArgs, SolveArgs};
use crate::error::{CliError, CliResult};

pub fn require_file(path: &Path, what: &str) -> CliResult<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::new(
            "io",
            format!("{what} file {} does not exist", path.display()),
        ))
    }
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))
}

pub fn evaluate(args: &EvaluateArgs) -> CliResult<()> {
    require_file(&args.spec, "spec")?;
    require_file(&args.dist, "distribution")?;
    let spec = load_spec(&args.spec)?;
    let dist = load_distribution(&args.dist)?;
    let value = cpt_value_exact(&dist, &spec)?;
    println!("{value:?}");
    if args.parts {
        let parts = cpt_parts(&dist, &spec);
        println!("gain {:?}", parts.gain);
        println!("loss {:?}", parts.loss);
    }
    if let Some(tol) = args.quadrature_tol {
        let quad = cpt_value_quadrature(&dist, &spec, tol)?;
        println!("quadrature {quad:?}");
        println!("difference {:?}", (value - quad).abs());
    }
    Ok(())
}

#[derive(Serialize)]
struct EstimateReport<'a> {
    seed: u64,
    seed_scheme: &'a str,
    batch_seed: &'a str,
    repeats: usize,
    ns: &'a [usize],
    truth: f64,
}

pub fn estimate(args: &EstimateArgs) -> CliResult<()> {
    require_file(&args.spec, "spec")?;
    require_file(&args.dist, "distribution")?;
    let spec = load_spec(&args.spec)?;
    let dist = load_distribution(&args.dist)?;
    let label = args
        .dist
        .file_stem()
        .map_or_else(|| "distribution".to_string(), |s| s.to_string_lossy().into_owned());
    let sampler = DiscreteSampler::new(dist, label)?;
    let study = convergence_study(&sampler, &spec, &args.ns, args.repeats, args.seed)?;

    let report = EstimateReport {
        seed: args.seed,
        seed_scheme: SEED_SCHEME,
        batch_seed: "derive(seed, [n, repeat])",
        repeats: args.repeats,
        ns: &args.ns,
        truth: study.truth,
    };
    write_file(
        &args.out,
        "report.toml",
        &toml::to_string(&report).expect("report serializes"),
    )?;
    write_file(&args.out, "estimates.csv", &study.to_csv())?;
    write_file(&args.out, "summary.csv", &study.summary_csv())?;

    println!("truth {:?}", study.truth);
    println!("{:>10} {:>24} {:>24}", "n", "mean_abs_error", "median_abs_error");
    for s in &study.summary {
        println!("{:>10} {:>24e} {:>24e}", s.n, s.mean_abs_error, s.median_abs_error);
    }
    Ok(())
}

pub fn solve(args: &SolveArgs) -> CliResult<()> {
    require_file(&args.model, "model")?;
    require_file(&args.spec, "spec")?;
    let model = load_model(&args.model, false)?;
    let spec = load_spec(&args.spec)?;
    let result = value_iteration(&model, &spec, &model.terminal_values(), &args.solver.config())?;
    let report = result.report_toml(&model);
    match &args.out {
        Some(dir) => {
            write_file(dir, "report.toml", &report)?;
            write_file(dir, "residuals.csv", &result.residual_csv())?;
            println!(
                "converged = {}, iterations = {}, final_residual = {:?}",
                result.converged,
                result.iterations,
                result.final_residual()
            );
        }
        None => print!("{report}"),
    }
    Ok(())
}

/// Sup-norm distance, for comparing against the expected-cost oracle.
pub fn sup_gap(values: &ValueFunction, other: &[f64]) -> f64 {
    values
        .values()
        .iter()
        .zip(other)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}
