//! CPT Bellman operators and value iteration.
//!
//! For a state `x`, action mix `a` and value function `J`, the one-step map
//! `H(x, a, J)` is the CPT functional (reference point 0) of the return
//! `g(x, a, d) + alpha J(f(x, a, d))` in discounted models, or of
//! `g + J(f)` restricted to non-absorbing successors in transient models.
//! `T_mu J (x) = H(x, mu(x), J)` and `T J (x)` is the infimum of `H` over the
//! action simplex.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functional::{staircase, CptParts, CptSpec};
use crate::mdp::{
    check_mix, return_distribution, return_distribution_unchecked, validate_model, MarkovModel, RandomizedPolicy,
    StateId, ValueFunction,
};
use crate::simplex::{golden_section, grid_mixes, is_vertex};
use crate::weighting::WeightingFunction;

/// Relative margin a candidate mix must beat the incumbent by; keeps
/// rounding noise from displacing an earlier (tie-break preferred) mix.
const IMPROVEMENT_MARGIN: f64 = 1e-14;

/// Width at which golden-section refinement stops.
const REFINE_WIDTH: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    /// Sup-norm residual at which value iteration stops.
    pub tol: f64,
    pub max_iter: usize,
    /// Grid step `1 / simplex_resolution` for mixes.
    pub simplex_resolution: usize,
    /// Golden-section refinement passes around the incumbent mix.
    pub refine_steps: usize,
    /// Search only pure actions.
    pub deterministic_only: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            tol: 1e-10,
            max_iter: 10_000,
            simplex_resolution: 10,
            refine_steps: 2,
            deterministic_only: false,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        if self.simplex_resolution == 0 {
            return Err(Error::InvalidConfig("simplex_resolution must be at least 1".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixChoice {
    pub value: f64,
    pub mix: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub value: ValueFunction,
    pub policy: RandomizedPolicy,
    /// Sup-norm residual of every sweep.
    pub trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

fn check_spec(spec: &CptSpec) -> Result<()> {
    if spec.reference_point != 0.0 {
        return Err(Error::NonzeroReference(spec.reference_point));
    }
    Ok(())
}

fn check_state(model: &MarkovModel, x: StateId) -> Result<()> {
    if x >= model.num_states() {
        return Err(Error::InvalidModel(format!("state index {x} out of range")));
    }
    Ok(())
}

/// `H(x, action_mix, J)`; zero at the absorbing state.
pub fn apply_h(model: &MarkovModel, x: StateId, action_mix: &[f64], j: &ValueFunction, spec: &CptSpec) -> Result<f64> {
    Ok(apply_h_parts(model, x, action_mix, j, spec)?.value())
}

/// Both integrals of `H(x, action_mix, J)`.
pub fn apply_h_parts(
    model: &MarkovModel,
    x: StateId,
    action_mix: &[f64],
    j: &ValueFunction,
    spec: &CptSpec,
) -> Result<CptParts> {
    check_spec(spec)?;
    check_state(model, x)?;
    if model.is_absorbing(x) {
        check_mix(model, x, action_mix)?;
        return Ok(CptParts { gain: 0.0, loss: 0.0 });
    }
    let z = return_distribution(model, x, action_mix, j)?;
    Ok(staircase(&z, spec))
}

fn h_unchecked(model: &MarkovModel, x: StateId, mix: &[f64], j: &ValueFunction, spec: &CptSpec) -> f64 {
    staircase(&return_distribution_unchecked(model, x, mix, j), spec).value()
}

/// With identity weightings `H` is affine in the mix, so some pure action
/// is optimal.
fn is_expected_utility(spec: &CptSpec) -> bool {
    spec.w_plus == WeightingFunction::Identity && spec.w_minus == WeightingFunction::Identity
}

fn improves(candidate: f64, best: f64) -> bool {
    candidate < best - IMPROVEMENT_MARGIN * best.abs().max(1.0)
}

/// Approximate `inf over mixes of H(x, mix, J)`.
///
/// Candidates, in tie-break order: every pure action (lowest index first),
/// the grid of mixes at resolution `1 / simplex_resolution` in ascending
/// lexicographic order, then `refine_steps` passes of golden-section search
/// along each pairwise mass transfer out of the incumbent, with the search
/// radius halved per pass. The result is never worse than any pure action.
/// The search is skipped when both weightings are the identity.
pub fn bellman_min(
    model: &MarkovModel,
    x: StateId,
    j: &ValueFunction,
    spec: &CptSpec,
    cfg: &SolveConfig,
) -> Result<MixChoice> {
    check_spec(spec)?;
    check_state(model, x)?;
    cfg.validate()?;
    j.check_len(model.num_states())?;
    Ok(bellman_min_unchecked(model, x, j, spec, cfg))
}

fn bellman_min_unchecked(
    model: &MarkovModel,
    x: StateId,
    j: &ValueFunction,
    spec: &CptSpec,
    cfg: &SolveConfig,
) -> MixChoice {
    let k = model.num_actions(x);
    let vertex = |a: usize| {
        let mut mix = vec![0.0; k];
        mix[a] = 1.0;
        mix
    };
    if model.is_absorbing(x) {
        return MixChoice {
            value: 0.0,
            mix: vertex(0),
        };
    }
    let h = |mix: &[f64]| h_unchecked(model, x, mix, j, spec);

    let mut best = MixChoice {
        value: h(&vertex(0)),
        mix: vertex(0),
    };
    for a in 1..k {
        let mix = vertex(a);
        let value = h(&mix);
        if improves(value, best.value) {
            best = MixChoice { value, mix };
        }
    }
    if cfg.deterministic_only || k == 1 || is_expected_utility(spec) {
        return best;
    }

    for mix in grid_mixes(k, cfg.simplex_resolution) {
        if is_vertex(&mix) {
            continue;
        }
        let value = h(&mix);
        if improves(value, best.value) {
            best = MixChoice { value, mix };
        }
    }

    let mut radius = 1.0 / cfg.simplex_resolution as f64;
    for _ in 0..cfg.refine_steps {
        for from in 0..k {
            for to in 0..k {
                if from == to {
                    continue;
                }
                let reach = best.mix[from].min(radius);
                if reach <= 0.0 {
                    continue;
                }
                let base = best.mix.clone();
                let shifted = |s: f64| {
                    let mut m = base.clone();
                    m[from] -= s;
                    m[to] += s;
                    if m[from] < 0.0 {
                        m[from] = 0.0;
                    }
                    m
                };
                let (s, value) = golden_section(|s| h(&shifted(s)), 0.0, reach, REFINE_WIDTH);
                if improves(value, best.value) {
                    best = MixChoice { value, mix: shifted(s) };
                }
            }
        }
        radius *= 0.5;
    }
    best
}

/// `T_mu J`.
pub fn apply_policy(
    model: &MarkovModel,
    policy: &RandomizedPolicy,
    j: &ValueFunction,
    spec: &CptSpec,
) -> Result<ValueFunction> {
    check_spec(spec)?;
    j.check_len(model.num_states())?;
    if policy.mixes().len() != model.num_states() {
        return Err(Error::DimensionMismatch {
            expected: model.num_states(),
            got: policy.mixes().len(),
        });
    }
    Ok(apply_policy_unchecked(model, policy, j, spec))
}

pub(crate) fn apply_policy_unchecked(
    model: &MarkovModel,
    policy: &RandomizedPolicy,
    j: &ValueFunction,
    spec: &CptSpec,
) -> ValueFunction {
    let values = (0..model.num_states())
        .map(|x| {
            if model.is_absorbing(x) {
                0.0
            } else {
                h_unchecked(model, x, policy.mix(x), j, spec)
            }
        })
        .collect();
    ValueFunction::new(values).expect("finite inputs give finite values")
}

/// One sweep of `T`: the minimised values and the minimising mixes.
pub fn bellman_sweep(
    model: &MarkovModel,
    j: &ValueFunction,
    spec: &CptSpec,
    cfg: &SolveConfig,
) -> Result<(ValueFunction, RandomizedPolicy)> {
    check_spec(spec)?;
    cfg.validate()?;
    j.check_len(model.num_states())?;
    Ok(sweep(model, j, spec, cfg))
}

fn sweep(
    model: &MarkovModel,
    j: &ValueFunction,
    spec: &CptSpec,
    cfg: &SolveConfig,
) -> (ValueFunction, RandomizedPolicy) {
    let choices: Vec<MixChoice> = (0..model.num_states())
        .into_par_iter()
        .map(|x| bellman_min_unchecked(model, x, j, spec, cfg))
        .collect();
    let values = choices.iter().map(|c| c.value).collect();
    let mixes = choices.into_iter().map(|c| c.mix).collect();
    (
        ValueFunction::new(values).expect("finite inputs give finite values"),
        RandomizedPolicy::from_mixes_unchecked(mixes),
    )
}

/// Iterates `J <- T J` from `j0` until the sup-norm residual is at most
/// `cfg.tol` or `cfg.max_iter` sweeps have run. In transient models the
/// absorbing state's value is held at 0.
pub fn value_iteration(
    model: &MarkovModel,
    spec: &CptSpec,
    j0: &ValueFunction,
    cfg: &SolveConfig,
) -> Result<SolveResult> {
    validate_model(model).into_result()?;
    check_spec(spec)?;
    spec.validate()?;
    cfg.validate()?;
    j0.check_len(model.num_states())?;

    let mut values = j0.values().to_vec();
    if let Some(a) = model.absorbing() {
        values[a] = 0.0;
    }
    let mut j = ValueFunction::new(values)?;
    let mut trace = Vec::new();
    let mut converged = false;
    let mut policy = RandomizedPolicy::uniform(model);
    while trace.len() < cfg.max_iter {
        let (next, mixes) = sweep(model, &j, spec, cfg);
        let residual = next.sup_distance(&j);
        trace.push(residual);
        j = next;
        policy = mixes;
        if residual <= cfg.tol {
            converged = true;
            break;
        }
    }
    Ok(SolveResult {
        value: j,
        policy,
        iterations: trace.len(),
        trace,
        converged,
    })
}

#[derive(Serialize)]
struct SolveReport<'a> {
    converged: bool,
    iterations: usize,
    final_residual: f64,
    states: Vec<StateReport<'a>>,
}

#[derive(Serialize)]
struct StateReport<'a> {
    name: &'a str,
    value: f64,
    actions: Vec<&'a str>,
    mix: &'a [f64],
}

impl SolveResult {
    pub fn final_residual(&self) -> f64 {
        self.trace.last().copied().unwrap_or(f64::NAN)
    }

    /// TOML report: convergence summary, then per-state value and policy.
    pub fn report_toml(&self, model: &MarkovModel) -> String {
        let report = SolveReport {
            converged: self.converged,
            iterations: self.iterations,
            final_residual: self.final_residual(),
            states: model
                .states
                .iter()
                .enumerate()
                .map(|(x, s)| StateReport {
                    name: &s.name,
                    value: self.value[x],
                    actions: s.actions.iter().map(|a| a.name.as_str()).collect(),
                    mix: self.policy.mix(x),
                })
                .collect(),
        };
        toml::to_string(&report).expect("report serializes")
    }

    /// `iteration,residual` with iterations counted from 1.
    pub fn residual_csv(&self) -> String {
        let mut out = String::from("iteration,residual\n");
        for (i, r) in self.trace.iter().enumerate() {
            out.push_str(&format!("{},{:?}\n", i + 1, r));
        }
        out
    }
}
