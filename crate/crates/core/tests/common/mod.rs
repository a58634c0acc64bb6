#![allow(dead_code)]

use cptdp::generators::{GeneratedMode, InstanceGenerator};
use cptdp::mdp::{Action, Disturbance, State};
use cptdp::{CptSpec, MarkovModel, Mode, UtilityFunction, WeightingFunction};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Plain expected-cost value iteration, written independently of the CPT
/// machinery. In transient models the step into the absorbing state
/// contributes nothing, matching the transient H mapping.
pub fn classical_value_iteration(model: &MarkovModel, tol: f64) -> Vec<f64> {
    let (alpha, absorbing) = match model.mode {
        Mode::Discounted { alpha } => (alpha, None),
        Mode::Transient { absorbing } => (1.0, Some(absorbing)),
    };
    let mut j = vec![0.0; model.states.len()];
    for _ in 0..1_000_000 {
        let next: Vec<f64> = model
            .states
            .iter()
            .enumerate()
            .map(|(x, s)| {
                if Some(x) == absorbing {
                    return 0.0;
                }
                s.actions
                    .iter()
                    .map(|a| {
                        a.disturbances
                            .iter()
                            .filter(|d| Some(d.next) != absorbing)
                            .map(|d| d.mass * (d.cost + alpha * j[d.next]))
                            .sum::<f64>()
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        let residual = next.iter().zip(&j).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        j = next;
        if residual <= tol {
            break;
        }
    }
    j
}

/// Single-action chain; successors `None` mean the absorbing state, which is
/// appended last. Stage costs are 1.
pub fn transient_chain(rows: &[&[(f64, Option<usize>)]]) -> MarkovModel {
    let a = rows.len();
    let mut states: Vec<State> = rows
        .iter()
        .enumerate()
        .map(|(x, row)| State {
            name: format!("s{x}"),
            actions: vec![Action {
                name: "go".into(),
                disturbances: row
                    .iter()
                    .map(|&(mass, next)| Disturbance {
                        mass,
                        next: next.unwrap_or(a),
                        cost: 1.0,
                    })
                    .collect(),
            }],
        })
        .collect();
    states.push(State {
        name: "absorbed".into(),
        actions: vec![Action {
            name: "stay".into(),
            disturbances: vec![Disturbance {
                mass: 1.0,
                next: a,
                cost: 0.0,
            }],
        }],
    });
    MarkovModel {
        states,
        cost_bound: 1.0,
        mode: Mode::Transient { absorbing: a },
        terminal: None,
    }
}

pub fn tk_spec(plus: f64, minus: f64) -> CptSpec {
    CptSpec::new(
        0.0,
        UtilityFunction::Identity,
        UtilityFunction::Identity,
        WeightingFunction::tversky_kahneman(plus).unwrap(),
        WeightingFunction::tversky_kahneman(minus).unwrap(),
    )
    .unwrap()
}

/// Power utilities 0.88, losses scaled by 2.25, TK weightings 0.61 / 0.69.
pub fn loss_averse_spec() -> CptSpec {
    let u = UtilityFunction::power(0.88).unwrap();
    CptSpec::new(
        0.0,
        u.clone(),
        UtilityFunction::scaled(u, 2.25).unwrap(),
        WeightingFunction::tversky_kahneman(0.61).unwrap(),
        WeightingFunction::tversky_kahneman(0.69).unwrap(),
    )
    .unwrap()
}

pub fn random_discounted(n_states: usize, alpha: f64) -> InstanceGenerator {
    InstanceGenerator::RandomMdp {
        n_states,
        n_actions: 4,
        n_disturbances: 3,
        cost_range: (0.0, 1.0),
        mode: GeneratedMode::Discounted { alpha },
    }
}

pub fn model_corpus() -> Vec<(String, MarkovModel)> {
    let mut out = Vec::new();
    for seed in 0..3 {
        out.push((
            format!("random_discounted_{seed}"),
            random_discounted(20, 0.9).generate(seed).unwrap(),
        ));
    }
    let signed = InstanceGenerator::RandomMdp {
        n_states: 8,
        n_actions: 3,
        n_disturbances: 4,
        cost_range: (-1.0, 1.0),
        mode: GeneratedMode::Discounted { alpha: 0.7 },
    };
    out.push(("random_signed_costs".into(), signed.generate(5).unwrap()));
    let transient = InstanceGenerator::RandomMdp {
        n_states: 10,
        n_actions: 3,
        n_disturbances: 3,
        cost_range: (-0.5, 1.0),
        mode: GeneratedMode::Transient { exit_mass: 0.2 },
    };
    for seed in 0..2 {
        out.push((format!("random_transient_{seed}"), transient.generate(seed).unwrap()));
    }
    let grid = InstanceGenerator::Gridworld {
        width: 5,
        height: 5,
        goal: (4, 4),
        step_cost: 1.0,
        noise: 0.1,
    };
    out.push(("gridworld_5x5".into(), grid.generate(0).unwrap()));
    out.push((
        "crafted_randomized_optimality".into(),
        InstanceGenerator::CraftedRandomizedOptimality.generate(0).unwrap(),
    ));
    out
}

pub fn random_weighting(rng: &mut ChaCha8Rng) -> WeightingFunction {
    match rng.gen_range(0..3) {
        0 => WeightingFunction::Identity,
        1 => WeightingFunction::tversky_kahneman(rng.gen_range(0.3..=1.0)).unwrap(),
        _ => {
            let k = rng.gen_range(1..6);
            let mut ps: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
            let mut ws: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
            ps.sort_by(f64::total_cmp);
            ws.sort_by(f64::total_cmp);
            let mut knots = vec![(0.0, 0.0)];
            knots.extend(ps.into_iter().zip(ws));
            knots.push((1.0, 1.0));
            knots.dedup_by(|a, b| a.0 == b.0);
            WeightingFunction::tabulated(knots).unwrap()
        }
    }
}

pub fn random_utility(rng: &mut ChaCha8Rng) -> UtilityFunction {
    let base = match rng.gen_range(0..2) {
        0 => UtilityFunction::Identity,
        _ => UtilityFunction::power(rng.gen_range(0.2..=1.0)).unwrap(),
    };
    if rng.gen_bool(0.5) {
        UtilityFunction::scaled(base, rng.gen_range(0.5..=3.0)).unwrap()
    } else {
        base
    }
}

pub fn random_spec(rng: &mut ChaCha8Rng) -> CptSpec {
    CptSpec::new(
        rng.gen_range(-1.0..=1.0),
        random_utility(rng),
        random_utility(rng),
        random_weighting(rng),
        random_weighting(rng),
    )
    .unwrap()
}

/// Between 1 and 10 atoms with values in `[-10, 10]`.
pub fn random_atoms(rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    let k = rng.gen_range(1..=10);
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.01..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut atoms: Vec<(f64, f64)> = raw.iter().map(|m| (rng.gen_range(-10.0..=10.0), m / total)).collect();
    let head: f64 = atoms[..k - 1].iter().map(|a| a.1).sum();
    atoms[k - 1].1 = 1.0 - head;
    atoms
}
