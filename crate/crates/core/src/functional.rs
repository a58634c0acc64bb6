//! Exact evaluation of the CPT functional on finite discrete laws.
//!
//! For a law `X` with reference point `b`,
//!
//! ```text
//! C(X) = int_0^inf w+(P(u+((X - b)+) > y)) dy - int_0^inf w-(P(u-((X - b)-) > y)) dy
//! ```
//!
//! For finite laws both integrands are right-continuous step functions that
//! vanish beyond the largest utility level, so each integral is a finite sum
//! of `(step width) * w(tail probability)`.

use serde::{Deserialize, Serialize};

use crate::distribution::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::utility::UtilityFunction;
use crate::weighting::WeightingFunction;

/// Reference point, utility pair and weighting pair.
///
/// Fields are public so that diagnostics can be pointed at deliberately
/// invalid specifications; [`CptSpec::new`] and deserialization validate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CptSpecFile")]
pub struct CptSpec {
    pub reference_point: f64,
    pub u_plus: UtilityFunction,
    pub u_minus: UtilityFunction,
    pub w_plus: WeightingFunction,
    pub w_minus: WeightingFunction,
}

#[derive(Debug, Clone, Deserialize)]
struct CptSpecFile {
    #[serde(default)]
    reference_point: f64,
    u_plus: UtilityFunction,
    u_minus: UtilityFunction,
    w_plus: WeightingFunction,
    w_minus: WeightingFunction,
}

impl TryFrom<CptSpecFile> for CptSpec {
    type Error = Error;

    fn try_from(f: CptSpecFile) -> Result<Self> {
        CptSpec::new(f.reference_point, f.u_plus, f.u_minus, f.w_plus, f.w_minus)
    }
}

impl CptSpec {
    pub fn new(
        reference_point: f64,
        u_plus: UtilityFunction,
        u_minus: UtilityFunction,
        w_plus: WeightingFunction,
        w_minus: WeightingFunction,
    ) -> Result<Self> {
        let spec = CptSpec {
            reference_point,
            u_plus,
            u_minus,
            w_plus,
            w_minus,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Reference point zero, identity utilities and weightings: `C(X) = E[X]`.
    pub fn risk_neutral() -> Self {
        CptSpec {
            reference_point: 0.0,
            u_plus: UtilityFunction::Identity,
            u_minus: UtilityFunction::Identity,
            w_plus: WeightingFunction::Identity,
            w_minus: WeightingFunction::Identity,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.reference_point.is_finite() {
            return Err(Error::Domain {
                what: "reference point",
                value: self.reference_point,
                domain: "finite reals",
            });
        }
        self.u_plus.validate().map_err(|e| in_field("u_plus", e))?;
        self.u_minus.validate().map_err(|e| in_field("u_minus", e))?;
        self.w_plus.validate().map_err(|e| in_field("w_plus", e))?;
        self.w_minus.validate().map_err(|e| in_field("w_minus", e))
    }

    pub fn is_risk_neutral(&self) -> bool {
        *self == CptSpec::risk_neutral()
    }
}

fn in_field(field: &str, e: Error) -> Error {
    match e {
        Error::InvalidUtility(m) => Error::InvalidUtility(format!("{field}: {m}")),
        Error::InvalidWeighting(m) => Error::InvalidWeighting(format!("{field}: {m}")),
        other => other,
    }
}

/// The two integrals of the functional, kept apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptParts {
    pub gain: f64,
    pub loss: f64,
}

impl CptParts {
    pub fn value(&self) -> f64 {
        self.gain - self.loss
    }
}

/// `C(X)` for a proper discrete law.
pub fn cpt_value_exact(dist: &DiscreteDistribution, spec: &CptSpec) -> Result<f64> {
    if !dist.is_proper() {
        return Err(Error::SubNormalized {
            total_mass: dist.total_mass(),
        });
    }
    Ok(staircase(dist, spec).value())
}

/// The same staircase sums with tail probabilities taken from a
/// sub-normalized law: mass missing from the law contributes to neither
/// integral.
pub fn cpt_value_subnormalized(dist: &DiscreteDistribution, spec: &CptSpec) -> f64 {
    staircase(dist, spec).value()
}

pub fn cpt_parts(dist: &DiscreteDistribution, spec: &CptSpec) -> CptParts {
    staircase(dist, spec)
}

pub(crate) fn staircase(dist: &DiscreteDistribution, spec: &CptSpec) -> CptParts {
    let b = spec.reference_point;
    let mut gains = Vec::new();
    let mut losses = Vec::new();
    let (mut gain_mass, mut loss_mass, mut flat_mass) = (0.0, 0.0, 0.0);
    for atom in dist.atoms() {
        let dev = atom.value - b;
        if dev > 0.0 {
            gains.push((spec.u_plus.value(dev), atom.mass));
            gain_mass += atom.mass;
        } else if dev < 0.0 {
            losses.push((spec.u_minus.value(-dev), atom.mass));
            loss_mass += atom.mass;
        } else {
            flat_mass += atom.mass;
        }
    }
    let total = law_mass(dist);
    CptParts {
        gain: tail_integral(&mut gains, loss_mass + flat_mass, total, &spec.w_plus),
        loss: tail_integral(&mut losses, gain_mass + flat_mass, total, &spec.w_minus),
    }
}

/// Mass of the whole law: exactly 1 for proper laws, whatever rounding the
/// individual masses carry.
pub(crate) fn law_mass(dist: &DiscreteDistribution) -> f64 {
    if dist.is_sub_normalized() {
        dist.total_mass()
    } else {
        1.0
    }
}

/// `int_0^inf w(P(Y > y)) dy` for the finite law given as `(level, mass)`
/// pairs, where `rest` is the mass of the law outside `levels` and `total`
/// the mass of the whole law.
///
/// Each tail is accumulated from whichever end is lighter: near 1 the
/// complement `total - P(Y <= y)` is far more accurate than a long sum, and
/// weightings with an infinite slope at 1 amplify the difference.
pub(crate) fn tail_integral(levels: &mut [(f64, f64)], rest: f64, total: f64, w: &WeightingFunction) -> f64 {
    levels.sort_by(|a, b| b.0.total_cmp(&a.0));
    // below[i]: mass of the law not in levels[..i].
    let mut below = vec![0.0; levels.len() + 1];
    below[levels.len()] = rest;
    for i in (0..levels.len()).rev() {
        below[i] = below[i + 1] + levels[i].1;
    }
    let mut sum = 0.0;
    let mut tail = 0.0;
    let mut i = 0;
    while i < levels.len() {
        let level = levels[i].0;
        if level <= 0.0 {
            break;
        }
        while i < levels.len() && levels[i].0 == level {
            tail += levels[i].1;
            i += 1;
        }
        let p = if below[i] < tail { total - below[i] } else { tail };
        let next = match levels.get(i) {
            Some(&(next, _)) if next > 0.0 => next,
            _ => 0.0,
        };
        sum += (level - next) * w.value(p);
    }
    sum
}
