//! Utility functions on non-negative magnitudes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UtilityFunction {
    Identity,
    /// `x^exponent` with `exponent` in `(0, 1]`.
    Power {
        exponent: f64,
    },
    /// `factor * base(x)`.
    Scaled {
        factor: f64,
        base: Box<UtilityFunction>,
    },
}

impl UtilityFunction {
    pub fn power(exponent: f64) -> Result<Self> {
        let u = UtilityFunction::Power { exponent };
        u.validate()?;
        Ok(u)
    }

    pub fn scaled(base: UtilityFunction, factor: f64) -> Result<Self> {
        let u = UtilityFunction::Scaled {
            factor,
            base: Box::new(base),
        };
        u.validate()?;
        Ok(u)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            UtilityFunction::Identity => Ok(()),
            UtilityFunction::Power { exponent } => {
                if exponent.is_finite() && *exponent > 0.0 && *exponent <= 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidUtility(format!(
                        "power exponent must lie in (0, 1], got {exponent}"
                    )))
                }
            }
            UtilityFunction::Scaled { factor, base } => {
                if !(factor.is_finite() && *factor > 0.0) {
                    return Err(Error::InvalidUtility(format!(
                        "scale factor must be positive, got {factor}"
                    )));
                }
                base.validate()
            }
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        check_magnitude("utility argument", x)?;
        Ok(self.value(x))
    }

    pub(crate) fn value(&self, x: f64) -> f64 {
        match self {
            UtilityFunction::Identity => x,
            UtilityFunction::Power { exponent } => x.powf(*exponent),
            UtilityFunction::Scaled { factor, base } => factor * base.value(x),
        }
    }

    /// `u'(x)`. Power utilities with exponent below one report `+inf` at zero.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        check_magnitude("utility argument", x)?;
        Ok(self.slope(x))
    }

    fn slope(&self, x: f64) -> f64 {
        match self {
            UtilityFunction::Identity => 1.0,
            UtilityFunction::Power { exponent } => {
                if *exponent == 1.0 {
                    1.0
                } else if x == 0.0 {
                    f64::INFINITY
                } else {
                    exponent * x.powf(exponent - 1.0)
                }
            }
            UtilityFunction::Scaled { factor, base } => factor * base.slope(x),
        }
    }

    pub fn inverse(&self, y: f64) -> Result<f64> {
        check_magnitude("utility value", y)?;
        Ok(self.inverse_value(y))
    }

    fn inverse_value(&self, y: f64) -> f64 {
        match self {
            UtilityFunction::Identity => y,
            UtilityFunction::Power { exponent } => y.powf(1.0 / exponent),
            UtilityFunction::Scaled { factor, base } => base.inverse_value(y / factor),
        }
    }

    /// `u'(0)`, possibly infinite.
    pub fn slope_at_zero(&self) -> f64 {
        self.slope(0.0)
    }
}

fn check_magnitude(what: &'static str, x: f64) -> Result<()> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain {
            what,
            value: x,
            domain: "[0, inf)",
        });
    }
    Ok(())
}
