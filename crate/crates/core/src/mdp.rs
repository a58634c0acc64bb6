//! Finite Markov control models.
//!
//! States, per-state feasible actions and per-(state, action) disturbance
//! laws are enumerated explicitly. Each disturbance carries its mass, the
//! successor state `f(x, a, d)` and the stage cost `g(x, a, d)`.

use std::fmt;

use crate::distribution::{Atom, DiscreteDistribution};
use crate::error::{Error, Result};
use crate::MASS_TOLERANCE;

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct Disturbance {
    pub mass: f64,
    pub next: StateId,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Action {
    pub name: String,
    pub disturbances: Vec<Disturbance>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub name: String,
    pub actions: Vec<Action>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Discounted { alpha: f64 },
    Transient { absorbing: StateId },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkovModel {
    pub states: Vec<State>,
    /// Declared bound `c` on `|g|`.
    pub cost_bound: f64,
    pub mode: Mode,
    /// Terminal function `J-bar`; zero when absent.
    pub terminal: Option<Vec<f64>>,
}

impl MarkovModel {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_actions(&self, x: StateId) -> usize {
        self.states[x].actions.len()
    }

    pub fn absorbing(&self) -> Option<StateId> {
        match self.mode {
            Mode::Transient { absorbing } => Some(absorbing),
            Mode::Discounted { .. } => None,
        }
    }

    pub fn is_absorbing(&self, x: StateId) -> bool {
        self.absorbing() == Some(x)
    }

    /// Factor applied to the continuation value: `alpha` or 1.
    pub fn continuation_factor(&self) -> f64 {
        match self.mode {
            Mode::Discounted { alpha } => alpha,
            Mode::Transient { .. } => 1.0,
        }
    }

    /// Non-absorbing states, ascending.
    pub fn active_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(move |&x| !self.is_absorbing(x))
    }

    pub fn state_index(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s.name == name)
    }

    pub fn terminal_values(&self) -> ValueFunction {
        match &self.terminal {
            Some(v) => ValueFunction(v.clone()),
            None => ValueFunction::zeros(self.num_states()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NoStates,
    InvalidCostBound {
        bound: f64,
    },
    InvalidDiscount {
        alpha: f64,
    },
    UnknownAbsorbingState {
        index: StateId,
    },
    EmptyActionSet {
        state: String,
    },
    EmptyDisturbanceSet {
        state: String,
        action: String,
    },
    InvalidMass {
        state: String,
        action: String,
        disturbance: usize,
        mass: f64,
    },
    Normalization {
        state: String,
        action: String,
        total: f64,
    },
    UnknownSuccessor {
        state: String,
        action: String,
        disturbance: usize,
        next: StateId,
    },
    NonFiniteCost {
        state: String,
        action: String,
        disturbance: usize,
    },
    CostBound {
        state: String,
        action: String,
        disturbance: usize,
        cost: f64,
        bound: f64,
    },
    AbsorbingCost {
        state: String,
        action: String,
        disturbance: usize,
        cost: f64,
    },
    AbsorbingEscape {
        state: String,
        action: String,
        disturbance: usize,
        next: String,
    },
    TerminalLength {
        expected: usize,
        got: usize,
    },
    NonFiniteTerminal {
        state: String,
    },
    TerminalAtAbsorbing {
        value: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            NoStates => write!(f, "model has no states"),
            InvalidCostBound { bound } => write!(f, "cost bound {bound} must be positive and finite"),
            InvalidDiscount { alpha } => write!(f, "discount factor {alpha} must lie in (0, 1)"),
            UnknownAbsorbingState { index } => write!(f, "absorbing state index {index} does not exist"),
            EmptyActionSet { state } => write!(f, "state {state} has no feasible actions"),
            EmptyDisturbanceSet { state, action } => {
                write!(f, "({state}, {action}) has no disturbances")
            }
            InvalidMass {
                state,
                action,
                disturbance,
                mass,
            } => {
                write!(f, "({state}, {action}, {disturbance}) has invalid mass {mass}")
            }
            Normalization { state, action, total } => {
                write!(f, "disturbance law of ({state}, {action}) sums to {total}, expected 1")
            }
            UnknownSuccessor {
                state,
                action,
                disturbance,
                next,
            } => {
                write!(f, "({state}, {action}, {disturbance}) leads to unknown state {next}")
            }
            NonFiniteCost {
                state,
                action,
                disturbance,
            } => {
                write!(f, "({state}, {action}, {disturbance}) has a non-finite cost")
            }
            CostBound {
                state,
                action,
                disturbance,
                cost,
                bound,
            } => write!(
                f,
                "({state}, {action}, {disturbance}) has |cost| = {} above the bound {bound}",
                cost.abs()
            ),
            AbsorbingCost {
                state,
                action,
                disturbance,
                cost,
            } => write!(
                f,
                "absorbing state {state}: ({state}, {action}, {disturbance}) has cost {cost}, must be 0"
            ),
            AbsorbingEscape {
                state,
                action,
                disturbance,
                next,
            } => write!(
                f,
                "absorbing state {state}: ({state}, {action}, {disturbance}) leaves to {next}"
            ),
            TerminalLength { expected, got } => {
                write!(f, "terminal values have {got} entries, expected {expected}")
            }
            NonFiniteTerminal { state } => write!(f, "terminal value at {state} is not finite"),
            TerminalAtAbsorbing { value } => {
                write!(f, "terminal value at the absorbing state is {value}, must be 0")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            let msgs: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
            Err(Error::InvalidModel(msgs.join("; ")))
        }
    }
}

pub fn validate_model(model: &MarkovModel) -> ValidationReport {
    use Violation::*;
    let mut out = Vec::new();
    let n = model.num_states();
    if n == 0 {
        out.push(NoStates);
    }
    if !(model.cost_bound.is_finite() && model.cost_bound > 0.0) {
        out.push(InvalidCostBound {
            bound: model.cost_bound,
        });
    }
    let absorbing = match model.mode {
        Mode::Discounted { alpha } => {
            if !(alpha > 0.0 && alpha < 1.0) {
                out.push(InvalidDiscount { alpha });
            }
            None
        }
        Mode::Transient { absorbing } => {
            if absorbing >= n {
                out.push(UnknownAbsorbingState { index: absorbing });
                None
            } else {
                Some(absorbing)
            }
        }
    };

    for (x, state) in model.states.iter().enumerate() {
        if state.actions.is_empty() {
            out.push(EmptyActionSet {
                state: state.name.clone(),
            });
        }
        for action in &state.actions {
            let here = || (state.name.clone(), action.name.clone());
            if action.disturbances.is_empty() {
                let (state, action) = here();
                out.push(EmptyDisturbanceSet { state, action });
                continue;
            }
            let mut total = 0.0;
            for (d, dist) in action.disturbances.iter().enumerate() {
                if !(dist.mass.is_finite() && dist.mass >= 0.0) {
                    let (state, action) = here();
                    out.push(InvalidMass {
                        state,
                        action,
                        disturbance: d,
                        mass: dist.mass,
                    });
                } else {
                    total += dist.mass;
                }
                if dist.next >= n {
                    let (state, action) = here();
                    out.push(UnknownSuccessor {
                        state,
                        action,
                        disturbance: d,
                        next: dist.next,
                    });
                }
                if !dist.cost.is_finite() {
                    let (state, action) = here();
                    out.push(NonFiniteCost {
                        state,
                        action,
                        disturbance: d,
                    });
                } else if dist.cost.abs() > model.cost_bound {
                    let (state, action) = here();
                    out.push(CostBound {
                        state,
                        action,
                        disturbance: d,
                        cost: dist.cost,
                        bound: model.cost_bound,
                    });
                }
                if Some(x) == absorbing {
                    if dist.cost != 0.0 {
                        let (state, action) = here();
                        out.push(AbsorbingCost {
                            state,
                            action,
                            disturbance: d,
                            cost: dist.cost,
                        });
                    }
                    if dist.next != x {
                        let (state, action) = here();
                        let next = model
                            .states
                            .get(dist.next)
                            .map_or_else(|| dist.next.to_string(), |s| s.name.clone());
                        out.push(AbsorbingEscape {
                            state,
                            action,
                            disturbance: d,
                            next,
                        });
                    }
                }
            }
            if (total - 1.0).abs() > MASS_TOLERANCE {
                let (state, action) = here();
                out.push(Normalization { state, action, total });
            }
        }
    }

    if let Some(terminal) = &model.terminal {
        if terminal.len() != n {
            out.push(TerminalLength {
                expected: n,
                got: terminal.len(),
            });
        } else {
            for (x, v) in terminal.iter().enumerate() {
                if !v.is_finite() {
                    out.push(NonFiniteTerminal {
                        state: model.states[x].name.clone(),
                    });
                }
            }
            if let Some(a) = absorbing {
                if terminal[a] != 0.0 {
                    out.push(TerminalAtAbsorbing { value: terminal[a] });
                }
            }
        }
    }
    ValidationReport { violations: out }
}

/// A real-valued function on the states.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueFunction(Vec<f64>);

impl ValueFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index });
        }
        Ok(ValueFunction(values))
    }

    pub fn zeros(n: usize) -> Self {
        ValueFunction(vec![0.0; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sup_norm(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |self - other|`, reduced left to right.
    pub fn sup_distance(&self, other: &ValueFunction) -> f64 {
        self.0.iter().zip(&other.0).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.0.len(),
            });
        }
        Ok(())
    }
}

impl std::ops::Index<StateId> for ValueFunction {
    type Output = f64;

    fn index(&self, x: StateId) -> &f64 {
        &self.0[x]
    }
}

/// A stationary randomized policy: per state, a probability vector over the
/// state's feasible actions.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomizedPolicy {
    per_state: Vec<Vec<f64>>,
}

impl RandomizedPolicy {
    pub fn new(model: &MarkovModel, per_state: Vec<Vec<f64>>) -> Result<Self> {
        if per_state.len() != model.num_states() {
            return Err(Error::DimensionMismatch {
                expected: model.num_states(),
                got: per_state.len(),
            });
        }
        for (x, mix) in per_state.iter().enumerate() {
            check_mix(model, x, mix)?;
        }
        Ok(RandomizedPolicy { per_state })
    }

    pub fn deterministic(model: &MarkovModel, choice: &[usize]) -> Result<Self> {
        let per_state = choice
            .iter()
            .enumerate()
            .map(|(x, &a)| {
                let k = model.states.get(x).map_or(0, |s| s.actions.len());
                if a >= k {
                    return Err(Error::InvalidMix {
                        state: x,
                        reason: format!("action {a} not feasible ({k} actions)"),
                    });
                }
                let mut mix = vec![0.0; k];
                mix[a] = 1.0;
                Ok(mix)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(model, per_state)
    }

    pub fn uniform(model: &MarkovModel) -> Self {
        let per_state = model
            .states
            .iter()
            .map(|s| vec![1.0 / s.actions.len() as f64; s.actions.len()])
            .collect();
        RandomizedPolicy { per_state }
    }

    pub(crate) fn from_mixes_unchecked(per_state: Vec<Vec<f64>>) -> Self {
        RandomizedPolicy { per_state }
    }

    pub fn mix(&self, x: StateId) -> &[f64] {
        &self.per_state[x]
    }

    pub fn mixes(&self) -> &[Vec<f64>] {
        &self.per_state
    }
}

pub(crate) fn check_mix(model: &MarkovModel, x: StateId, mix: &[f64]) -> Result<()> {
    let k = model.num_actions(x);
    if mix.len() != k {
        return Err(Error::InvalidMix {
            state: x,
            reason: format!("{} weights for {k} feasible actions", mix.len()),
        });
    }
    if mix.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(Error::InvalidMix {
            state: x,
            reason: "weights must be finite and non-negative".into(),
        });
    }
    let total: f64 = mix.iter().sum();
    if (total - 1.0).abs() > MASS_TOLERANCE {
        return Err(Error::InvalidMix {
            state: x,
            reason: format!("weights sum to {total}"),
        });
    }
    Ok(())
}

/// Law of the one-step return `g(x, a, d) + factor * J(f(x, a, d))` with
/// `a ~ action_mix` and `d ~ P(. | x, a)`.
///
/// Atoms are listed per (action, disturbance) in model order, keeping
/// zero-weight actions, so that the law is affine in the mix atom by atom.
/// In transient mode, outcomes whose successor is the absorbing state are
/// left out and the result is sub-normalized.
pub fn return_distribution(
    model: &MarkovModel,
    x: StateId,
    action_mix: &[f64],
    j: &ValueFunction,
) -> Result<DiscreteDistribution> {
    if x >= model.num_states() {
        return Err(Error::InvalidModel(format!("state index {x} out of range")));
    }
    if model.is_absorbing(x) {
        return Err(Error::AbsorbingState(x));
    }
    j.check_len(model.num_states())?;
    check_mix(model, x, action_mix)?;
    Ok(return_distribution_unchecked(model, x, action_mix, j))
}

pub(crate) fn return_distribution_unchecked(
    model: &MarkovModel,
    x: StateId,
    action_mix: &[f64],
    j: &ValueFunction,
) -> DiscreteDistribution {
    let factor = model.continuation_factor();
    let absorbing = model.absorbing();
    let mut atoms = Vec::new();
    for (action, &weight) in model.states[x].actions.iter().zip(action_mix) {
        for d in &action.disturbances {
            if Some(d.next) == absorbing {
                continue;
            }
            atoms.push(Atom {
                value: d.cost + factor * j[d.next],
                mass: weight * d.mass,
            });
        }
    }
    DiscreteDistribution::from_atoms_unchecked(atoms, absorbing.is_some())
}

/// Outcome of a Pliska-sum computation.
#[derive(Debug, Clone, PartialEq)]
pub struct PliskaReport {
    /// `max_x sum_{k=0}^{K} P_x(x_{k+1} != x_A)`, a lower bound on the full sum.
    pub bound: f64,
    /// Last increment fell below the tolerance.
    pub converged: bool,
    pub last_increment: f64,
    /// Ratio of the last two increments, when defined.
    pub observed_ratio: Option<f64>,
    /// Per-state partial sums.
    pub per_state: Vec<f64>,
}

/// Partial Pliska sums `sum_{k=0}^{horizon} P_x(x_{k+1} != x_A)` under a
/// stationary policy, maximised over the starting state.
///
/// Computed exactly by the backward recursion
/// `V_k(x) = sum_y P_mu(x, y) [y != x_A] (1 + V_{k-1}(y))`, which yields the
/// forward occupancy sums for every start state at once.
pub fn pliska_check(model: &MarkovModel, policy: &RandomizedPolicy, horizon: usize, tol: f64) -> Result<PliskaReport> {
    let absorbing = model.absorbing().ok_or(Error::WrongMode { expected: "transient" })?;
    if policy.mixes().len() != model.num_states() {
        return Err(Error::DimensionMismatch {
            expected: model.num_states(),
            got: policy.mixes().len(),
        });
    }
    pliska_sums(model, absorbing, horizon, tol, |x, prev| {
        model.states[x]
            .actions
            .iter()
            .zip(policy.mix(x))
            .map(|(a, &p)| p * continuation(a, absorbing, prev))
            .sum()
    })
}

/// Worst case of the Pliska sum over all Markov policies, by the
/// max-non-absorption recursion over deterministic choices. Randomization
/// cannot exceed it since each step is affine in the action mix.
pub fn uniform_transience_check(model: &MarkovModel, horizon: usize, tol: f64) -> Result<PliskaReport> {
    let absorbing = model.absorbing().ok_or(Error::WrongMode { expected: "transient" })?;
    pliska_sums(model, absorbing, horizon, tol, |x, prev| {
        model.states[x]
            .actions
            .iter()
            .map(|a| continuation(a, absorbing, prev))
            .fold(f64::NEG_INFINITY, f64::max)
    })
}

fn continuation(action: &Action, absorbing: StateId, prev: &[f64]) -> f64 {
    action
        .disturbances
        .iter()
        .filter(|d| d.next != absorbing)
        .map(|d| d.mass * (1.0 + prev[d.next]))
        .sum()
}

fn pliska_sums<F>(model: &MarkovModel, absorbing: StateId, horizon: usize, tol: f64, step: F) -> Result<PliskaReport>
where
    F: Fn(StateId, &[f64]) -> f64,
{
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Domain {
            what: "tolerance",
            value: tol,
            domain: "(0, inf)",
        });
    }
    let n = model.num_states();
    let mut prev = vec![0.0; n];
    let mut last_increment = f64::INFINITY;
    let mut before_last = f64::NAN;
    for _ in 0..=horizon {
        let next: Vec<f64> = (0..n)
            .map(|x| if x == absorbing { 0.0 } else { step(x, &prev) })
            .collect();
        let inc = next.iter().zip(&prev).fold(0.0, |m, (a, b)| f64::max(m, a - b));
        before_last = last_increment;
        last_increment = inc;
        prev = next;
    }
    let observed_ratio = (before_last.is_finite() && before_last > 0.0).then(|| last_increment / before_last);
    Ok(PliskaReport {
        bound: prev.iter().copied().fold(0.0, f64::max),
        converged: last_increment < tol,
        last_increment,
        observed_ratio,
        per_state: prev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(mass: f64, next: StateId, cost: f64) -> Disturbance {
        Disturbance { mass, next, cost }
    }

    fn action(name: &str, d: Vec<Disturbance>) -> Action {
        Action {
            name: name.into(),
            disturbances: d,
        }
    }

    fn state(name: &str, actions: Vec<Action>) -> State {
        State {
            name: name.into(),
            actions,
        }
    }

    fn two_state_discounted() -> MarkovModel {
        MarkovModel {
            states: vec![
                state("s0", vec![action("a", vec![dist(0.3, 0, 1.0), dist(0.7, 1, 2.0)])]),
                state("s1", vec![action("a", vec![dist(1.0, 1, -1.0)])]),
            ],
            cost_bound: 2.0,
            mode: Mode::Discounted { alpha: 0.5 },
            terminal: None,
        }
    }

    fn absorbing_state(name: &str) -> State {
        state(name, vec![action("stay", vec![dist(1.0, 0, 0.0)])])
    }

    #[test]
    fn valid_model_has_no_violations() {
        assert!(validate_model(&two_state_discounted()).is_valid());
    }

    #[test]
    fn absorbing_cost_is_reported() {
        let m = MarkovModel {
            states: vec![
                state("goal", vec![action("stay", vec![dist(1.0, 0, 0.1)])]),
                state("s1", vec![action("go", vec![dist(1.0, 0, 1.0)])]),
            ],
            cost_bound: 1.0,
            mode: Mode::Transient { absorbing: 0 },
            terminal: None,
        };
        let report = validate_model(&m);
        assert_eq!(report.violations.len(), 1);
        assert!(matches!(&report.violations[0], Violation::AbsorbingCost { state, .. } if state == "goal"));
        assert!(report.violations[0].to_string().contains("goal"));
    }

    #[test]
    fn normalization_is_reported() {
        let mut m = two_state_discounted();
        m.states[0].actions[0].disturbances[1].mass = 0.68;
        let report = validate_model(&m);
        assert!(
            matches!(report.violations[..], [Violation::Normalization { total, .. }] if (total - 0.98).abs() < 1e-12)
        );
    }

    #[test]
    fn other_violations() {
        let mut m = two_state_discounted();
        m.cost_bound = 1.5;
        m.mode = Mode::Discounted { alpha: 1.0 };
        m.states[1].actions[0].disturbances[0].next = 5;
        m.terminal = Some(vec![0.0]);
        let v = validate_model(&m).violations;
        assert!(v.iter().any(|x| matches!(x, Violation::CostBound { .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::InvalidDiscount { .. })));
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::UnknownSuccessor { next: 5, .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::TerminalLength { .. })));
        assert!(validate_model(&m).into_result().is_err());
    }

    #[test]
    fn deterministic_unit_cost_return() {
        let m = MarkovModel {
            states: vec![state("s", vec![action("a", vec![dist(1.0, 0, 1.0)])])],
            cost_bound: 1.0,
            mode: Mode::Discounted { alpha: 0.9 },
            terminal: None,
        };
        let z = return_distribution(&m, 0, &[1.0], &ValueFunction::zeros(1)).unwrap();
        assert_eq!(z.atoms(), &[Atom { value: 1.0, mass: 1.0 }]);
    }

    #[test]
    fn two_disturbance_return() {
        // costs (1, 2), alpha 0.5, J(next) = (2, 4)
        let m = two_state_discounted();
        let j = ValueFunction::new(vec![2.0, 4.0]).unwrap();
        let z = return_distribution(&m, 0, &[1.0], &j).unwrap();
        assert_eq!(
            z.atoms(),
            &[Atom { value: 2.0, mass: 0.3 }, Atom { value: 4.0, mass: 0.7 }]
        );
        assert!(z.is_proper());
    }

    #[test]
    fn fully_absorbed_return_is_empty() {
        let m = MarkovModel {
            states: vec![
                absorbing_state("goal"),
                state("s1", vec![action("go", vec![dist(0.4, 0, 1.0), dist(0.6, 0, 0.5)])]),
            ],
            cost_bound: 1.0,
            mode: Mode::Transient { absorbing: 0 },
            terminal: None,
        };
        let z = return_distribution(&m, 1, &[1.0], &ValueFunction::zeros(2)).unwrap();
        assert_eq!(z.total_mass(), 0.0);
        assert!(z.atoms().is_empty());
        assert_eq!(
            return_distribution(&m, 0, &[1.0], &ValueFunction::zeros(2)),
            Err(Error::AbsorbingState(0))
        );
    }

    #[test]
    fn invalid_mix_rejected() {
        let m = two_state_discounted();
        let j = ValueFunction::zeros(2);
        assert!(return_distribution(&m, 0, &[0.5], &j).is_err());
        assert!(return_distribution(&m, 0, &[1.0, 0.0], &j).is_err());
        assert!(RandomizedPolicy::deterministic(&m, &[0, 1]).is_err());
    }

    fn geometric_chain() -> MarkovModel {
        MarkovModel {
            states: vec![
                absorbing_state("goal"),
                state("s", vec![action("a", vec![dist(0.5, 1, 1.0), dist(0.5, 0, 1.0)])]),
            ],
            cost_bound: 1.0,
            mode: Mode::Transient { absorbing: 0 },
            terminal: None,
        }
    }

    #[test]
    fn pliska_geometric_sum() {
        let m = geometric_chain();
        let r = pliska_check(&m, &RandomizedPolicy::uniform(&m), 45, 1e-12).unwrap();
        assert!(r.converged);
        assert!((r.bound - 1.0).abs() <= 1e-12);
        assert!((r.observed_ratio.unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn pliska_one_step_absorption() {
        let m = MarkovModel {
            states: vec![
                absorbing_state("goal"),
                state("s1", vec![action("a", vec![dist(1.0, 0, 1.0)])]),
                state("s2", vec![action("a", vec![dist(1.0, 0, 1.0)])]),
            ],
            cost_bound: 1.0,
            mode: Mode::Transient { absorbing: 0 },
            terminal: None,
        };
        let r = pliska_check(&m, &RandomizedPolicy::uniform(&m), 10, 1e-12).unwrap();
        assert_eq!(r.bound, 0.0);
        assert!(r.converged);
    }

    #[test]
    fn pliska_recurrent_class_never_converges() {
        let m = MarkovModel {
            states: vec![
                absorbing_state("goal"),
                state("s1", vec![action("a", vec![dist(1.0, 2, 1.0)])]),
                state("s2", vec![action("a", vec![dist(1.0, 1, 1.0)])]),
            ],
            cost_bound: 1.0,
            mode: Mode::Transient { absorbing: 0 },
            terminal: None,
        };
        for horizon in [10, 100, 1000] {
            let r = pliska_check(&m, &RandomizedPolicy::uniform(&m), horizon, 1e-9).unwrap();
            assert!(!r.converged);
            assert_eq!(r.bound, (horizon + 1) as f64);
        }
    }

    #[test]
    fn pliska_requires_transient() {
        let m = two_state_discounted();
        assert!(matches!(
            pliska_check(&m, &RandomizedPolicy::uniform(&m), 10, 1e-9),
            Err(Error::WrongMode { .. })
        ));
    }

    #[test]
    fn uniform_check_takes_worst_action() {
        let mut m = geometric_chain();
        m.states[1]
            .actions
            .push(action("linger", vec![dist(0.9, 1, 1.0), dist(0.1, 0, 1.0)]));
        let worst = uniform_transience_check(&m, 2000, 1e-12).unwrap();
        assert!(worst.converged);
        assert!((worst.bound - 9.0).abs() < 1e-9);
        let fast = pliska_check(&m, &RandomizedPolicy::deterministic(&m, &[0, 0]).unwrap(), 2000, 1e-12).unwrap();
        assert!((fast.bound - 1.0).abs() < 1e-9);
    }
}
