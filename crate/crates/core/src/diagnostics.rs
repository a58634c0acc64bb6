//! Numerical checks of the monotonicity and contraction properties of the
//! CPT Bellman operators.
//!
//! None of these prove anything: universally quantified conditions are
//! searched over random or structured families, and a pass means no
//! counterexample was found.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::bellman::{apply_h, apply_policy_unchecked};
use crate::distribution::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::functional::CptSpec;
use crate::mdp::{
    uniform_transience_check, validate_model, MarkovModel, Mode, RandomizedPolicy, StateId, ValueFunction,
};
use crate::seed;

/// Slack allowed before `H(J) > H(J')` counts as a violation.
pub const MONOTONICITY_SLACK: f64 = 1e-10;

/// Levels `c'` (as multiples of `c`) at which the contraction integral is
/// evaluated.
pub const CONTRACTION_LEVELS: [f64; 3] = [0.5, 1.0, 2.0];

/// A K-step modulus must be below `1 - K_STEP_MARGIN` to count.
pub const K_STEP_MARGIN: f64 = 1e-6;

const TRANSIENCE_HORIZON: usize = 10_000;
const TRANSIENCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityViolation {
    pub trial: usize,
    pub state: StateId,
    pub mix: Vec<f64>,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub trials: usize,
    pub violations: Vec<MonotonicityViolation>,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Typical magnitude of value functions on the model.
fn value_scale(model: &MarkovModel) -> f64 {
    match model.mode {
        Mode::Discounted { alpha } => model.cost_bound / (1.0 - alpha),
        Mode::Transient { .. } => model.cost_bound * model.num_states() as f64,
    }
}

fn random_values(model: &MarkovModel, rng: &mut ChaCha8Rng, scale: f64) -> Vec<f64> {
    (0..model.num_states())
        .map(|x| {
            if model.is_absorbing(x) {
                0.0
            } else {
                rng.gen_range(-scale..=scale)
            }
        })
        .collect()
}

/// A vertex one time in four, otherwise a flat-Dirichlet draw.
fn random_mix(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let mut mix = vec![0.0; k];
    if k == 1 || rng.gen_bool(0.25) {
        mix[rng.gen_range(0..k)] = 1.0;
        return mix;
    }
    for p in mix.iter_mut() {
        *p = -(1.0 - rng.gen::<f64>()).ln();
    }
    let total: f64 = mix.iter().sum();
    mix.iter_mut().for_each(|p| *p /= total);
    mix
}

fn random_policy(model: &MarkovModel, rng: &mut ChaCha8Rng) -> RandomizedPolicy {
    let mixes = model.states.iter().map(|s| random_mix(rng, s.actions.len())).collect();
    RandomizedPolicy::new(model, mixes).expect("normalized mixes")
}

fn active(model: &MarkovModel) -> Vec<StateId> {
    model.active_states().collect()
}

/// Searches for `J <= J'` with `H(x, a, J) > H(x, a, J')`.
///
/// Each trial draws `J`, a non-negative perturbation `J' - J`, a state and a
/// mix; trial 0 uses `J' = J`. The spec is used as given, without
/// validation, so that broken weightings can be probed.
pub fn monotonicity_probe(model: &MarkovModel, spec: &CptSpec, trials: usize, seed: u64) -> Result<MonotonicityReport> {
    validate_model(model).into_result()?;
    let states = active(model);
    if states.is_empty() {
        return Ok(MonotonicityReport {
            trials,
            violations: Vec::new(),
        });
    }
    let scale = value_scale(model);
    let mut violations = Vec::new();
    for trial in 0..trials {
        let mut rng = seed::rng_for(seed, &[trial as u64]);
        let lower = random_values(model, &mut rng, scale);
        let mut upper = lower.clone();
        if trial > 0 {
            for x in model.active_states() {
                if rng.gen_bool(0.5) {
                    upper[x] += rng.gen_range(0.0..=scale);
                }
            }
        }
        let x = states[rng.gen_range(0..states.len())];
        let mix = random_mix(&mut rng, model.num_actions(x));
        let h_lo = apply_h(model, x, &mix, &ValueFunction::new(lower)?, spec)?;
        let h_hi = apply_h(model, x, &mix, &ValueFunction::new(upper)?, spec)?;
        if h_lo > h_hi + MONOTONICITY_SLACK {
            violations.push(MonotonicityViolation {
                trial,
                state: x,
                mix,
                lower: h_lo,
                upper: h_hi,
            });
        }
    }
    Ok(MonotonicityReport { trials, violations })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionCheck {
    pub beta_hat: f64,
    pub pass: bool,
    pub worst: DiscreteDistribution,
    /// The level `c'` attaining `beta_hat`.
    pub worst_level: f64,
}

fn check_utility_slopes(spec: &CptSpec) -> Result<f64> {
    for (side, u) in [("gain", &spec.u_plus), ("loss", &spec.u_minus)] {
        let slope = u.slope_at_zero();
        if !slope.is_finite() {
            return Err(Error::ConditionViolated {
                condition: "utility slope bounded at zero",
                detail: format!("{side} utility {u:?} has unbounded derivative at 0"),
            });
        }
    }
    Ok(spec.u_plus.slope_at_zero().max(spec.u_minus.slope_at_zero()))
}

/// Structured family of non-negative laws on `[0, c * scale]`: point masses
/// on a 20-step grid, two-point laws `{0, top}` with the lower mass on a
/// `1e-3` grid, two-point laws on a 10-step grid with masses in tenths, and
/// uniform laws on 2, 3, 5, 10, 20 and 50 equally spaced points.
pub fn default_z_family(c: f64, scale: f64) -> Vec<DiscreteDistribution> {
    let top = c * scale;
    let law = |atoms: Vec<(f64, f64)>| DiscreteDistribution::new(atoms).expect("family laws are proper");
    let mut out = Vec::new();
    for i in 0..=20 {
        out.push(law(vec![(top * i as f64 / 20.0, 1.0)]));
    }
    for k in 1..1000 {
        let p = k as f64 / 1000.0;
        out.push(law(vec![(0.0, p), (top, 1.0 - p)]));
    }
    for i in 0..=10 {
        for j in (i + 1)..=10 {
            for k in 1..10 {
                let p = k as f64 / 10.0;
                out.push(law(vec![(top * i as f64 / 10.0, p), (top * j as f64 / 10.0, 1.0 - p)]));
            }
        }
    }
    for n in [2usize, 3, 5, 10, 20, 50] {
        let atoms = (0..n)
            .map(|i| (top * i as f64 / (n - 1) as f64, 1.0 / n as f64))
            .collect();
        out.push(DiscreteDistribution::sub_normalized(atoms).expect("uniform law"));
    }
    out
}

/// `int_0^h w+(P(Z < z)) u+'(h - z) dz + int_0^h w-(P(Z > z)) u-'(z) dz`
/// with `h = alpha * level`, integrated exactly: on each interval between
/// atoms the weights are constant and `u'` integrates to a difference of `u`.
pub fn contraction_integral(spec: &CptSpec, alpha: f64, level: f64, z: &DiscreteDistribution) -> f64 {
    let h = alpha * level;
    let z = z.merged();
    let atoms = z.atoms();
    let mut cuts = vec![0.0];
    cuts.extend(atoms.iter().map(|a| a.value).filter(|&v| v > 0.0 && v < h));
    cuts.push(h);

    let mut total = 0.0;
    for pair in cuts.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        if hi <= lo {
            continue;
        }
        let below: f64 = atoms.iter().filter(|a| a.value <= lo).map(|a| a.mass).sum();
        let above: f64 = atoms.iter().filter(|a| a.value >= hi).map(|a| a.mass).sum();
        let gain = spec.u_plus.value(h - lo) - spec.u_plus.value(h - hi);
        let loss = spec.u_minus.value(hi) - spec.u_minus.value(lo);
        total += spec.w_plus.value(below) * gain + spec.w_minus.value(above) * loss;
    }
    total
}

/// Largest `contraction_integral / c'` over `z_family` and the levels
/// `c' = c * CONTRACTION_LEVELS`; passes when below 1. Fails outright when a
/// utility has unbounded slope at zero.
pub fn contraction_condition_check(
    spec: &CptSpec,
    alpha: f64,
    c: f64,
    z_family: &[DiscreteDistribution],
) -> Result<ContractionCheck> {
    check_utility_slopes(spec)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain {
            what: "discount factor",
            value: alpha,
            domain: "(0, 1)",
        });
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::Domain {
            what: "cost bound",
            value: c,
            domain: "(0, inf)",
        });
    }
    if z_family.is_empty() {
        return Err(Error::InvalidConfig("empty Z family".into()));
    }
    if let Some(bad) = z_family
        .iter()
        .position(|z| !z.is_proper() || z.atoms().iter().any(|a| a.value < 0.0))
    {
        return Err(Error::InvalidDistribution(format!(
            "Z family member {bad} must be a proper law on [0, inf)"
        )));
    }

    let mut best: Option<(f64, usize, f64)> = None;
    for (i, z) in z_family.iter().enumerate() {
        for &m in &CONTRACTION_LEVELS {
            let level = c * m;
            let ratio = contraction_integral(spec, alpha, level, z) / level;
            if best.is_none_or(|(b, _, _)| ratio > b) {
                best = Some((ratio, i, level));
            }
        }
    }
    let (beta_hat, idx, worst_level) = best.expect("non-empty family");
    Ok(ContractionCheck {
        beta_hat,
        pass: beta_hat < 1.0,
        worst: z_family[idx].clone(),
        worst_level,
    })
}

struct Triple {
    lower: ValueFunction,
    upper: ValueFunction,
    policy: RandomizedPolicy,
}

/// Trial 0 shifts every active state up by a random amount, trial 1 down;
/// later trials perturb each active state independently.
fn draw_triple(model: &MarkovModel, master: u64, trial: usize) -> Triple {
    let mut rng = seed::rng_for(master, &[trial as u64]);
    let scale = value_scale(model);
    let lower = random_values(model, &mut rng, scale);
    let size = scale * 10f64.powf(rng.gen_range(-3.0..=0.0));
    let mut upper = lower.clone();
    for x in model.active_states() {
        upper[x] += match trial {
            0 => size,
            1 => -size,
            _ => size * rng.gen_range(-1.0..=1.0),
        };
    }
    let policy = random_policy(model, &mut rng);
    Triple {
        lower: ValueFunction::new(lower).expect("finite"),
        upper: ValueFunction::new(upper).expect("finite"),
        policy,
    }
}

/// Largest observed `||T_mu J - T_mu J'|| / ||J - J'||` over random triples.
pub fn empirical_contraction_modulus(model: &MarkovModel, spec: &CptSpec, trials: usize, seed: u64) -> Result<f64> {
    Ok(k_step_moduli(model, spec, 1, trials, seed)?[0])
}

fn k_step_moduli(model: &MarkovModel, spec: &CptSpec, k_max: usize, trials: usize, seed: u64) -> Result<Vec<f64>> {
    validate_model(model).into_result()?;
    if spec.reference_point != 0.0 {
        return Err(Error::NonzeroReference(spec.reference_point));
    }
    let mut moduli = vec![0.0f64; k_max];
    for trial in 0..trials {
        let t = draw_triple(model, seed, trial);
        let gap = t.lower.sup_distance(&t.upper);
        if gap == 0.0 {
            continue;
        }
        let (mut a, mut b) = (t.lower, t.upper);
        for m in moduli.iter_mut() {
            a = apply_policy_unchecked(model, &t.policy, &a, spec);
            b = apply_policy_unchecked(model, &t.policy, &b, spec);
            *m = m.max(a.sup_distance(&b) / gap);
        }
    }
    Ok(moduli)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KStepReport {
    /// Smallest `K` whose observed modulus is below `1 - K_STEP_MARGIN`.
    pub k: Option<usize>,
    /// Observed modulus for `K = 1..=k_max`.
    pub moduli: Vec<f64>,
    /// Largest `u'(0)` over the two utilities.
    pub slope_at_zero: f64,
    /// Smallest `xi` with `w(p) <= xi p` for both weightings.
    pub xi: f64,
    /// Worst-case Pliska sum over policies.
    pub pliska_bound: f64,
}

/// Checks the structural conditions for K-step contraction on a transient
/// model (bounded utility slope at zero, `w(p) <= xi p`, uniform
/// transience), then measures the K-step modulus of `T_mu` for
/// `K = 1..=k_max` over random triples `(J, J', mu)`.
pub fn k_step_contraction_probe(
    model: &MarkovModel,
    spec: &CptSpec,
    k_max: usize,
    trials: usize,
    seed: u64,
) -> Result<KStepReport> {
    if model.absorbing().is_none() {
        return Err(Error::WrongMode { expected: "transient" });
    }
    let slope_at_zero = check_utility_slopes(spec)?;
    let mut xi: f64 = 0.0;
    for (side, w) in [("gain", &spec.w_plus), ("loss", &spec.w_minus)] {
        match w.slope_bound() {
            Some(b) => xi = xi.max(b),
            None => {
                return Err(Error::ConditionViolated {
                    condition: "weighting slope bound w(p) <= xi p",
                    detail: format!("{side} weighting {w:?} has w(p)/p unbounded near 0"),
                })
            }
        }
    }
    validate_model(model).into_result()?;
    let transience = uniform_transience_check(model, TRANSIENCE_HORIZON, TRANSIENCE_TOL)?;
    if !transience.converged {
        return Err(Error::NotUniformlyTransient {
            horizon: TRANSIENCE_HORIZON,
            increment: transience.last_increment,
        });
    }
    let moduli = k_step_moduli(model, spec, k_max, trials, seed)?;
    let k = moduli.iter().position(|&m| m < 1.0 - K_STEP_MARGIN).map(|i| i + 1);
    Ok(KStepReport {
        k,
        moduli,
        slope_at_zero,
        xi,
        pliska_bound: transience.bound,
    })
}
