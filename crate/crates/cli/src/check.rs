use cptdp::diagnostics::{
    contraction_condition_check, default_z_family, empirical_contraction_modulus, k_step_contraction_probe,
    monotonicity_probe,
};
use cptdp::io::{load_model, load_spec, load_spec_unchecked};
use cptdp::mdp::{uniform_transience_check, validate_model};
use cptdp::{seed, Mode};

use crate::args::CheckArgs;
use crate::commands::{require_file, write_file};
use crate::error::CliResult;

const TRANSIENCE_HORIZON: usize = 10_000;
const TRANSIENCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
    Info,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
            Status::Info => "INFO",
        }
    }
}

pub struct Row {
    pub check: &'static str,
    pub status: Status,
    pub detail: String,
}

fn row(check: &'static str, status: Status, detail: impl Into<String>) -> Row {
    Row {
        check,
        status,
        detail: detail.into(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn check(args: &CheckArgs) -> CliResult<()> {
    require_file(&args.model, "model")?;
    require_file(&args.spec, "spec")?;
    let model = load_model(&args.model, args.allow_invalid)?;
    let spec = if args.allow_invalid {
        load_spec_unchecked(&args.spec)?
    } else {
        load_spec(&args.spec)?
    };
    let mut rows = Vec::new();

    let report = validate_model(&model);
    let model_ok = report.is_valid();
    rows.push(if model_ok {
        row(
            "model_validation",
            Status::Pass,
            format!("{} states", model.num_states()),
        )
    } else {
        let msgs: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        row("model_validation", Status::Fail, msgs.join("; "))
    });
    rows.push(match spec.validate() {
        Ok(()) => row("spec_validation", Status::Pass, ""),
        Err(e) => row("spec_validation", Status::Fail, e.to_string()),
    });

    if !model_ok {
        for name in ["monotonicity", "contraction_or_transience"] {
            rows.push(row(name, Status::Skip, "model invalid"));
        }
        return emit(args, &rows);
    }

    let probe_seed = |k: u64| seed::derive_seed(args.seed, &[k]);
    rows.push(match monotonicity_probe(&model, &spec, args.trials, probe_seed(0)) {
        Ok(r) if r.passed() => row(
            "monotonicity",
            Status::Pass,
            format!("0 violations in {} trials", r.trials),
        ),
        Ok(r) => {
            let v = &r.violations[0];
            row(
                "monotonicity",
                Status::Fail,
                format!(
                    "{} violations in {} trials; first at state {} mix {:?}: H(J) = {:?} > H(J') = {:?}",
                    r.violations.len(),
                    r.trials,
                    model.states[v.state].name,
                    v.mix,
                    v.lower,
                    v.upper
                ),
            )
        }
        Err(e) => row("monotonicity", Status::Fail, e.to_string()),
    });

    match model.mode {
        Mode::Discounted { alpha } => {
            let family = default_z_family(model.cost_bound, args.z_scale);
            let condition = contraction_condition_check(&spec, alpha, model.cost_bound, &family);
            let bound = match &condition {
                Ok(c) => {
                    let atoms: Vec<(f64, f64)> = c.worst.atoms().iter().map(|a| (a.value, a.mass)).collect();
                    let law = if atoms.len() <= 4 {
                        format!("{atoms:?}")
                    } else {
                        format!(
                            "{} atoms on [{:?}, {:?}]",
                            atoms.len(),
                            c.worst.min_value().unwrap_or(0.0),
                            c.worst.max_value().unwrap_or(0.0)
                        )
                    };
                    rows.push(row(
                        "contraction_condition",
                        if c.pass { Status::Pass } else { Status::Fail },
                        format!(
                            "beta_hat = {:?} at level {:?} with Z = {law} over {} laws",
                            c.beta_hat,
                            c.worst_level,
                            family.len()
                        ),
                    ));
                    c.pass.then_some(c.beta_hat)
                }
                Err(e) => {
                    rows.push(row("contraction_condition", Status::Fail, e.to_string()));
                    None
                }
            };
            rows.push(
                match empirical_contraction_modulus(&model, &spec, args.trials, probe_seed(1)) {
                    Ok(observed) => match bound {
                        Some(beta) if observed <= beta + 1e-6 => row(
                            "empirical_modulus",
                            Status::Pass,
                            format!("observed {observed:?} <= beta_hat {beta:?}"),
                        ),
                        Some(beta) => row(
                            "empirical_modulus",
                            Status::Fail,
                            format!("observed {observed:?} > beta_hat {beta:?}"),
                        ),
                        None => row(
                            "empirical_modulus",
                            Status::Info,
                            format!("observed {observed:?}, no bound"),
                        ),
                    },
                    Err(e) => row("empirical_modulus", Status::Fail, e.to_string()),
                },
            );
        }
        Mode::Transient { .. } => {
            rows.push(
                match uniform_transience_check(&model, TRANSIENCE_HORIZON, TRANSIENCE_TOL) {
                    Ok(r) if r.converged => row(
                        "uniform_transience",
                        Status::Pass,
                        format!("worst-case Pliska sum {:?}", r.bound),
                    ),
                    Ok(r) => row(
                        "uniform_transience",
                        Status::Fail,
                        format!(
                            "non-absorption sum still growing by {:?} after {TRANSIENCE_HORIZON} steps",
                            r.last_increment
                        ),
                    ),
                    Err(e) => row("uniform_transience", Status::Fail, e.to_string()),
                },
            );
            rows.push(
                match k_step_contraction_probe(&model, &spec, args.k_max, args.trials, probe_seed(2)) {
                    Ok(r) => match r.k {
                        Some(k) => row(
                            "k_step_contraction",
                            Status::Pass,
                            format!(
                                "K = {k}, modulus {:?}, xi = {:?}, u'(0) = {:?}",
                                r.moduli[k - 1],
                                r.xi,
                                r.slope_at_zero
                            ),
                        ),
                        None => row(
                            "k_step_contraction",
                            Status::Fail,
                            format!(
                                "no K <= {} with modulus below 1; last {:?}",
                                args.k_max,
                                r.moduli.last()
                            ),
                        ),
                    },
                    Err(e) => row("k_step_contraction", Status::Fail, e.to_string()),
                },
            );
        }
    }
    emit(args, &rows)
}

fn emit(args: &CheckArgs, rows: &[Row]) -> CliResult<()> {
    for r in rows {
        println!("{:<22} {:<4} {}", r.check, r.status.label(), r.detail);
    }
    if let Some(dir) = &args.out {
        let mut csv = String::from("check,status,detail\n");
        for r in rows {
            csv.push_str(&format!("{},{},{}\n", r.check, r.status.label(), csv_field(&r.detail)));
        }
        write_file(dir, "check.csv", &csv)?;
    }
    Ok(())
}
