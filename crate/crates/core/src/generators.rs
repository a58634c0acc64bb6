//! Seeded instance generators for test corpora and benchmarks.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functional::CptSpec;
use crate::mdp::{validate_model, Action, Disturbance, MarkovModel, Mode, State};
use crate::seed;
use crate::utility::UtilityFunction;
use crate::weighting::WeightingFunction;

/// Mode of a generated random model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratedMode {
    Discounted {
        alpha: f64,
    },
    /// Adds an absorbing state `exit`; every (state, action) pair sends at
    /// least `exit_mass` to it.
    Transient {
        exit_mass: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceGenerator {
    RandomMdp {
        n_states: usize,
        n_actions: usize,
        n_disturbances: usize,
        cost_range: (f64, f64),
        mode: GeneratedMode,
    },
    /// Four compass moves on a `width x height` grid with an absorbing goal.
    /// The intended move happens with probability `1 - noise`, each other
    /// move with `noise / 3`; moves into a wall stay put.
    Gridworld {
        width: usize,
        height: usize,
        goal: (usize, usize),
        step_cost: f64,
        noise: f64,
    },
    /// One state, two actions: cost 1 surely, or cost 0 / 1.6 with masses
    /// 0.18 / 0.82, discounted at 0.5. Under [`crafted_spec`] a strict mix
    /// of the two actions beats both.
    CraftedRandomizedOptimality,
}

/// Spec paired with [`InstanceGenerator::CraftedRandomizedOptimality`]:
/// identity utilities, Tversky-Kahneman weightings with `delta` 0.61 (gains)
/// and 0.69 (losses).
pub fn crafted_spec() -> CptSpec {
    CptSpec::new(
        0.0,
        UtilityFunction::Identity,
        UtilityFunction::Identity,
        WeightingFunction::tversky_kahneman(0.61).expect("valid delta"),
        WeightingFunction::tversky_kahneman(0.69).expect("valid delta"),
    )
    .expect("valid spec")
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

/// Masses from a flat Dirichlet draw; the last entry absorbs rounding so the
/// total is 1 to machine precision.
fn random_masses(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    let mut m: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = m.iter().sum();
    m.iter_mut().for_each(|p| *p /= total);
    let head: f64 = m[..k - 1].iter().sum();
    m[k - 1] = (1.0 - head).max(0.0);
    m
}

impl InstanceGenerator {
    pub fn validate(&self) -> Result<()> {
        match *self {
            InstanceGenerator::RandomMdp {
                n_states,
                n_actions,
                n_disturbances,
                cost_range: (lo, hi),
                mode,
            } => {
                if n_states == 0 || n_actions == 0 || n_disturbances == 0 {
                    return Err(invalid("random_mdp counts must be positive"));
                }
                if !(lo.is_finite() && hi.is_finite() && lo <= hi && lo.abs().max(hi.abs()) > 0.0) {
                    return Err(invalid(format!("bad cost_range ({lo}, {hi})")));
                }
                match mode {
                    GeneratedMode::Discounted { alpha } if !(alpha > 0.0 && alpha < 1.0) => {
                        Err(invalid(format!("alpha {alpha} outside (0, 1)")))
                    }
                    GeneratedMode::Transient { exit_mass } if !(exit_mass > 0.0 && exit_mass <= 1.0) => {
                        Err(invalid(format!("exit_mass {exit_mass} outside (0, 1]")))
                    }
                    _ => Ok(()),
                }
            }
            InstanceGenerator::Gridworld {
                width,
                height,
                goal,
                step_cost,
                noise,
            } => {
                if width == 0 || height == 0 || width * height < 2 {
                    return Err(invalid("gridworld needs at least two cells"));
                }
                if goal.0 >= width || goal.1 >= height {
                    return Err(invalid(format!("goal {goal:?} outside {width}x{height} grid")));
                }
                if !(step_cost.is_finite() && step_cost > 0.0) {
                    return Err(invalid(format!("step_cost {step_cost} must be positive")));
                }
                if !(0.0..1.0).contains(&noise) {
                    return Err(invalid(format!("noise {noise} outside [0, 1)")));
                }
                Ok(())
            }
            InstanceGenerator::CraftedRandomizedOptimality => Ok(()),
        }
    }

    /// Builds the instance; a pure function of the parameters and `seed`.
    pub fn generate(&self, seed: u64) -> Result<MarkovModel> {
        self.validate()?;
        let model = match *self {
            InstanceGenerator::RandomMdp {
                n_states,
                n_actions,
                n_disturbances,
                cost_range,
                mode,
            } => random_mdp(n_states, n_actions, n_disturbances, cost_range, mode, seed),
            InstanceGenerator::Gridworld {
                width,
                height,
                goal,
                step_cost,
                noise,
            } => gridworld(width, height, goal, step_cost, noise),
            InstanceGenerator::CraftedRandomizedOptimality => crafted(),
        };
        validate_model(&model).into_result()?;
        Ok(model)
    }

    pub fn label(&self) -> &'static str {
        match self {
            InstanceGenerator::RandomMdp { .. } => "random_mdp",
            InstanceGenerator::Gridworld { .. } => "gridworld",
            InstanceGenerator::CraftedRandomizedOptimality => "crafted_randomized_optimality",
        }
    }
}

fn random_mdp(
    n_states: usize,
    n_actions: usize,
    n_disturbances: usize,
    (lo, hi): (f64, f64),
    mode: GeneratedMode,
    seed: u64,
) -> MarkovModel {
    let mut rng = seed::rng_for(seed, &[0]);
    let exit = n_states;
    let (total_states, model_mode, exit_mass) = match mode {
        GeneratedMode::Discounted { alpha } => (n_states, Mode::Discounted { alpha }, 0.0),
        GeneratedMode::Transient { exit_mass } => (n_states + 1, Mode::Transient { absorbing: exit }, exit_mass),
    };
    let mut states = Vec::with_capacity(total_states);
    for x in 0..n_states {
        let actions = (0..n_actions)
            .map(|a| {
                let masses = random_masses(&mut rng, n_disturbances);
                let mut disturbances: Vec<Disturbance> = masses
                    .into_iter()
                    .map(|m| Disturbance {
                        mass: m * (1.0 - exit_mass),
                        next: rng.gen_range(0..n_states),
                        cost: if lo == hi { lo } else { rng.gen_range(lo..=hi) },
                    })
                    .collect();
                if exit_mass > 0.0 {
                    disturbances.push(Disturbance {
                        mass: exit_mass,
                        next: exit,
                        cost: if lo == hi { lo } else { rng.gen_range(lo..=hi) },
                    });
                    let head: f64 = disturbances[..disturbances.len() - 1].iter().map(|d| d.mass).sum();
                    disturbances.last_mut().expect("non-empty").mass = 1.0 - head;
                }
                Action {
                    name: format!("a{a}"),
                    disturbances,
                }
            })
            .collect();
        states.push(State {
            name: format!("s{x}"),
            actions,
        });
    }
    if exit_mass > 0.0 {
        states.push(absorbing_state("exit", exit));
    }
    MarkovModel {
        states,
        cost_bound: lo.abs().max(hi.abs()),
        mode: model_mode,
        terminal: None,
    }
}

fn absorbing_state(name: &str, index: usize) -> State {
    State {
        name: name.into(),
        actions: vec![Action {
            name: "stay".into(),
            disturbances: vec![Disturbance {
                mass: 1.0,
                next: index,
                cost: 0.0,
            }],
        }],
    }
}

/// Cell `(col, row)` has index `row * width + col`.
fn gridworld(width: usize, height: usize, goal: (usize, usize), step_cost: f64, noise: f64) -> MarkovModel {
    const MOVES: [(&str, i64, i64); 4] = [("up", 0, -1), ("down", 0, 1), ("left", -1, 0), ("right", 1, 0)];
    let index = |c: usize, r: usize| r * width + c;
    let target = |c: usize, r: usize, (dc, dr): (i64, i64)| {
        let nc = c as i64 + dc;
        let nr = r as i64 + dr;
        if nc < 0 || nr < 0 || nc >= width as i64 || nr >= height as i64 {
            index(c, r)
        } else {
            index(nc as usize, nr as usize)
        }
    };
    let goal_index = index(goal.0, goal.1);
    let mut states = Vec::with_capacity(width * height);
    for r in 0..height {
        for c in 0..width {
            let name = format!("r{r}c{c}");
            if index(c, r) == goal_index {
                states.push(absorbing_state(&name, goal_index));
                continue;
            }
            let actions = MOVES
                .iter()
                .enumerate()
                .map(|(i, &(label, _, _))| Action {
                    name: label.into(),
                    disturbances: MOVES
                        .iter()
                        .enumerate()
                        .map(|(j, &(_, dc, dr))| Disturbance {
                            mass: if i == j { 1.0 - noise } else { noise / 3.0 },
                            next: target(c, r, (dc, dr)),
                            cost: step_cost,
                        })
                        .collect(),
                })
                .collect();
            states.push(State { name, actions });
        }
    }
    MarkovModel {
        states,
        cost_bound: step_cost,
        mode: Mode::Transient { absorbing: goal_index },
        terminal: None,
    }
}

fn crafted() -> MarkovModel {
    MarkovModel {
        states: vec![State {
            name: "s0".into(),
            actions: vec![
                Action {
                    name: "safe".into(),
                    disturbances: vec![Disturbance {
                        mass: 1.0,
                        next: 0,
                        cost: 1.0,
                    }],
                },
                Action {
                    name: "gamble".into(),
                    disturbances: vec![
                        Disturbance {
                            mass: 0.18,
                            next: 0,
                            cost: 0.0,
                        },
                        Disturbance {
                            mass: 0.82,
                            next: 0,
                            cost: 1.6,
                        },
                    ],
                },
            ],
        }],
        cost_bound: 1.6,
        mode: Mode::Discounted { alpha: 0.5 },
        terminal: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::uniform_transience_check;

    fn random(mode: GeneratedMode) -> InstanceGenerator {
        InstanceGenerator::RandomMdp {
            n_states: 20,
            n_actions: 4,
            n_disturbances: 3,
            cost_range: (-1.0, 2.0),
            mode,
        }
    }

    #[test]
    fn random_models_are_valid_and_reproducible() {
        let g = random(GeneratedMode::Discounted { alpha: 0.9 });
        for s in 0..5 {
            let m = g.generate(s).unwrap();
            assert_eq!(m.num_states(), 20);
            assert_eq!(m, g.generate(s).unwrap());
            assert_eq!(m.cost_bound, 2.0);
        }
        assert_ne!(g.generate(1).unwrap(), g.generate(2).unwrap());
    }

    #[test]
    fn random_transient_models_are_uniformly_transient() {
        let g = random(GeneratedMode::Transient { exit_mass: 0.2 });
        let m = g.generate(7).unwrap();
        assert_eq!(m.absorbing(), Some(20));
        let r = uniform_transience_check(&m, 1000, 1e-12).unwrap();
        assert!(r.converged);
        assert!(r.bound <= 4.0 + 1e-9);
    }

    #[test]
    fn gridworld_layout() {
        let g = InstanceGenerator::Gridworld {
            width: 5,
            height: 5,
            goal: (4, 4),
            step_cost: 1.0,
            noise: 0.1,
        };
        let m = g.generate(0).unwrap();
        assert_eq!(m.num_states(), 25);
        assert_eq!(m.absorbing(), Some(24));
        assert_eq!(m.states[0].actions[0].disturbances[0].next, 0);
        assert_eq!(m.states[0].actions[3].disturbances[3].next, 1);
    }

    #[test]
    fn noisy_gridworld_is_uniformly_transient() {
        // With noise 0.75 every move is uniform, so no policy can steer away
        // from the goal.
        let g = InstanceGenerator::Gridworld {
            width: 5,
            height: 5,
            goal: (4, 4),
            step_cost: 1.0,
            noise: 0.75,
        };
        let r = uniform_transience_check(&g.generate(0).unwrap(), 5000, 1e-10).unwrap();
        assert!(r.converged);
    }

    #[test]
    fn bad_parameters_are_rejected() {
        let g = InstanceGenerator::Gridworld {
            width: 3,
            height: 3,
            goal: (3, 0),
            step_cost: 1.0,
            noise: 0.1,
        };
        assert!(matches!(g.generate(0), Err(Error::InvalidConfig(_))));
        let g = random(GeneratedMode::Discounted { alpha: 1.0 });
        assert!(g.generate(0).is_err());
    }

    #[test]
    fn generator_round_trips_through_toml() {
        let g = random(GeneratedMode::Transient { exit_mass: 0.25 });
        let text = toml::to_string(&g).unwrap();
        let back: InstanceGenerator = toml::from_str(&text).unwrap();
        assert_eq!(g, back);
    }
}
