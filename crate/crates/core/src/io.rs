//! TOML file formats for models, specs and distributions.
//!
//! A model file looks like
//!
//! ```toml
//! cost_bound = 1.0
//! terminal_values = [0.0, 0.0]   # optional, one per state
//!
//! [mode]
//! kind = "transient"             # or "discounted" with `alpha = 0.9`
//! absorbing = "goal"
//!
//! [[states]]
//! name = "start"
//! [[states.actions]]
//! name = "go"
//! disturbances = [
//!     { mass = 0.5, next = "goal", cost = 1.0 },
//!     { mass = 0.5, next = "start", cost = 1.0 },
//! ]
//!
//! [[states]]
//! name = "goal"
//! [[states.actions]]
//! name = "stay"
//! disturbances = [{ mass = 1.0, next = "goal", cost = 0.0 }]
//! ```
//!
//! Successors and the absorbing state are referenced by name.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::distribution::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::functional::CptSpec;
use crate::mdp::{validate_model, Action, Disturbance, MarkovModel, Mode, State};
use crate::utility::UtilityFunction;
use crate::weighting::WeightingFunction;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    cost_bound: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    terminal_values: Option<Vec<f64>>,
    mode: ModeFile,
    states: Vec<StateFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ModeFile {
    Discounted { alpha: f64 },
    Transient { absorbing: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    name: String,
    actions: Vec<ActionFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionFile {
    name: String,
    disturbances: Vec<DisturbanceFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DisturbanceFile {
    mass: f64,
    next: String,
    cost: f64,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Parse(e.message().to_string() + &location(text, e.span())))
}

fn location(text: &str, span: Option<std::ops::Range<usize>>) -> String {
    match span {
        Some(r) => {
            let line = text[..r.start.min(text.len())].matches('\n').count() + 1;
            format!(" (line {line})")
        }
        None => String::new(),
    }
}

/// Parses a model without checking [`validate_model`]. Unknown or duplicate
/// state names are always errors.
pub fn model_from_toml(text: &str) -> Result<MarkovModel> {
    let file: ModelFile = parse(text)?;
    let mut index = HashMap::new();
    for (x, s) in file.states.iter().enumerate() {
        if index.insert(s.name.as_str(), x).is_some() {
            return Err(Error::Parse(format!("duplicate state name {:?}", s.name)));
        }
    }
    let lookup = |name: &str, context: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| Error::Parse(format!("{context} refers to unknown state {name:?}")))
    };
    let mode = match &file.mode {
        ModeFile::Discounted { alpha } => Mode::Discounted { alpha: *alpha },
        ModeFile::Transient { absorbing } => Mode::Transient {
            absorbing: lookup(absorbing, "mode.absorbing")?,
        },
    };
    let mut states = Vec::with_capacity(file.states.len());
    for s in &file.states {
        let mut actions = Vec::with_capacity(s.actions.len());
        for a in &s.actions {
            let mut disturbances = Vec::with_capacity(a.disturbances.len());
            for (d, dist) in a.disturbances.iter().enumerate() {
                let context = format!("state {:?} action {:?} disturbance {d}", s.name, a.name);
                disturbances.push(Disturbance {
                    mass: dist.mass,
                    next: lookup(&dist.next, &context)?,
                    cost: dist.cost,
                });
            }
            actions.push(Action {
                name: a.name.clone(),
                disturbances,
            });
        }
        states.push(State {
            name: s.name.clone(),
            actions,
        });
    }
    Ok(MarkovModel {
        states,
        cost_bound: file.cost_bound,
        mode,
        terminal: file.terminal_values,
    })
}

/// Reads a model file; unless `allow_invalid`, the first validation
/// violation is returned as an error.
pub fn load_model(path: &Path, allow_invalid: bool) -> Result<MarkovModel> {
    let model = model_from_toml(&read(path)?)?;
    if !allow_invalid {
        validate_model(&model).into_result()?;
    }
    Ok(model)
}

/// Serializes a model in the format read by [`model_from_toml`].
pub fn model_to_toml(model: &MarkovModel) -> String {
    let name = |x: usize| model.states.get(x).map_or_else(|| x.to_string(), |s| s.name.clone());
    let file = ModelFile {
        cost_bound: model.cost_bound,
        terminal_values: model.terminal.clone(),
        mode: match model.mode {
            Mode::Discounted { alpha } => ModeFile::Discounted { alpha },
            Mode::Transient { absorbing } => ModeFile::Transient {
                absorbing: name(absorbing),
            },
        },
        states: model
            .states
            .iter()
            .map(|s| StateFile {
                name: s.name.clone(),
                actions: s
                    .actions
                    .iter()
                    .map(|a| ActionFile {
                        name: a.name.clone(),
                        disturbances: a
                            .disturbances
                            .iter()
                            .map(|d| DisturbanceFile {
                                mass: d.mass,
                                next: name(d.next),
                                cost: d.cost,
                            })
                            .collect(),
                    })
                    .collect(),
            })
            .collect(),
    };
    toml::to_string(&file).expect("model serializes")
}

pub fn spec_from_toml(text: &str) -> Result<CptSpec> {
    parse(text)
}

/// Reads and validates a spec file.
pub fn load_spec(path: &Path) -> Result<CptSpec> {
    spec_from_toml(&read(path)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(default)]
    reference_point: f64,
    u_plus: UtilityFunction,
    u_minus: UtilityFunction,
    w_plus: WeightingFunction,
    w_minus: WeightingFunction,
}

/// Parses a spec without validating its components, so that diagnostics can
/// be run against deliberately broken weightings or utilities.
pub fn spec_from_toml_unchecked(text: &str) -> Result<CptSpec> {
    let raw: RawSpec = parse(text)?;
    Ok(CptSpec {
        reference_point: raw.reference_point,
        u_plus: raw.u_plus,
        u_minus: raw.u_minus,
        w_plus: raw.w_plus,
        w_minus: raw.w_minus,
    })
}

pub fn load_spec_unchecked(path: &Path) -> Result<CptSpec> {
    spec_from_toml_unchecked(&read(path)?)
}

pub fn spec_to_toml(spec: &CptSpec) -> String {
    toml::to_string(spec).expect("spec serializes")
}

pub fn distribution_from_toml(text: &str) -> Result<DiscreteDistribution> {
    parse(text)
}

/// Reads and validates a distribution file: `atoms = [[value, mass], ...]`
/// with optional `sub_normalized = true`.
pub fn load_distribution(path: &Path) -> Result<DiscreteDistribution> {
    distribution_from_toml(&read(path)?)
}

/// Reads any TOML-deserializable configuration.
pub fn load_toml<T: DeserializeOwned>(path: &Path) -> Result<T> {
    parse(&read(path)?)
}
