use std::time::Instant;

use cptdp::bellman::SolveResult;
use cptdp::generators::InstanceGenerator;
use cptdp::io::{load_spec, load_toml, model_to_toml};
use cptdp::seed::{derive_seed, SEED_SCHEME};
use cptdp::simplex::is_vertex;
use cptdp::{value_iteration, ValueFunction};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::args::BenchArgs;
use crate::commands::{require_file, sup_gap, write_file};
use crate::error::{CliError, CliResult};
use crate::oracle::expected_cost_values;

/// Corpus description: a master seed and groups of generated instances.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    #[serde(default)]
    pub seed: u64,
    pub group: Vec<Group>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Group {
    #[serde(default = "one")]
    pub instances: usize,
    pub generator: InstanceGenerator,
}

fn one() -> usize {
    1
}

struct Outcome {
    model_toml: Option<String>,
    result: SolveResult,
    states: usize,
    oracle_gap: Option<f64>,
    seconds: f64,
}

#[derive(Serialize)]
struct BenchReport<'a> {
    seed: u64,
    seed_scheme: &'a str,
    instance_seed: &'a str,
    instances: usize,
    tol: f64,
    max_iter: usize,
    simplex_resolution: usize,
    refine_steps: usize,
    deterministic_only: bool,
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:?}"))
}

pub fn bench(args: &BenchArgs) -> CliResult<()> {
    require_file(&args.config, "bench config")?;
    require_file(&args.spec, "spec")?;
    let config: BenchConfig = load_toml(&args.config)?;
    let spec = load_spec(&args.spec)?;
    let cfg = args.solver.config();
    cfg.validate()?;
    let master = args.seed.unwrap_or(config.seed);

    let mut jobs = Vec::new();
    for (g, group) in config.group.iter().enumerate() {
        for i in 0..group.instances {
            jobs.push((g, i, derive_seed(master, &[g as u64, i as u64])));
        }
    }
    if jobs.is_empty() {
        return Err(CliError::new("config", "bench config describes no instances"));
    }

    let outcomes: Vec<CliResult<Outcome>> = jobs
        .par_iter()
        .map(|&(g, _, seed)| {
            let model = config.group[g].generator.generate(seed)?;
            let start = Instant::now();
            let result = value_iteration(&model, &spec, &ValueFunction::zeros(model.num_states()), &cfg)?;
            let seconds = start.elapsed().as_secs_f64();
            let oracle_gap = spec
                .is_risk_neutral()
                .then(|| sup_gap(&result.value, &expected_cost_values(&model, cfg.tol * 1e-3, 1_000_000)));
            Ok(Outcome {
                model_toml: args.save_models.then(|| model_to_toml(&model)),
                result,
                states: model.num_states(),
                oracle_gap,
                seconds,
            })
        })
        .collect();

    let mut csv = String::from(
        "instance,group,generator,seed,states,iterations,converged,final_residual,residual_ratio,value_sup_norm,mixed_states,oracle_gap\n",
    );
    let mut timing = String::from("instance,wall_seconds\n");
    let (mut converged, mut worst_gap, mut mixed_total) = (0, None::<f64>, 0);
    for (idx, (outcome, &(g, _, seed))) in outcomes.into_iter().zip(&jobs).enumerate() {
        let o = outcome?;
        if let Some(text) = &o.model_toml {
            write_file(&args.out.join("models"), &format!("instance_{idx}.toml"), text)?;
        }
        let r = &o.result;
        let n = r.trace.len();
        let ratio = (n >= 2 && r.trace[n - 2] > 0.0).then(|| r.trace[n - 1] / r.trace[n - 2]);
        let mixed = r.policy.mixes().iter().filter(|m| !is_vertex(m)).count();
        csv.push_str(&format!(
            "{idx},{g},{},{seed},{},{},{},{:?},{},{:?},{mixed},{}\n",
            config.group[g].generator.label(),
            o.states,
            r.iterations,
            r.converged,
            r.final_residual(),
            opt(ratio),
            r.value.sup_norm(),
            opt(o.oracle_gap),
        ));
        timing.push_str(&format!("{idx},{:?}\n", o.seconds));
        converged += usize::from(r.converged);
        mixed_total += mixed;
        if let Some(gap) = o.oracle_gap {
            worst_gap = Some(worst_gap.map_or(gap, |w| w.max(gap)));
        }
    }

    let report = BenchReport {
        seed: master,
        seed_scheme: SEED_SCHEME,
        instance_seed: "derive(seed, [group, index])",
        instances: jobs.len(),
        tol: cfg.tol,
        max_iter: cfg.max_iter,
        simplex_resolution: cfg.simplex_resolution,
        refine_steps: cfg.refine_steps,
        deterministic_only: cfg.deterministic_only,
    };
    write_file(
        &args.out,
        "report.toml",
        &toml::to_string(&report).expect("report serializes"),
    )?;
    write_file(&args.out, "bench.csv", &csv)?;
    write_file(&args.out, "timing.csv", &timing)?;

    println!(
        "instances {}, converged {converged}, states with mixed policies {mixed_total}",
        jobs.len()
    );
    if let Some(gap) = worst_gap {
        println!("max sup-norm gap to expected-cost oracle {gap:?}");
    }
    Ok(())
}
