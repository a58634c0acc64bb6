//! Probability weighting functions.
//!
//! A weighting function maps `[0, 1]` onto `[0, 1]`, is non-decreasing and
//! continuous, and fixes both endpoints. Three families are provided:
//! the identity, the Tversky-Kahneman form
//!
//! ```text
//! w(p) = p^d / (p^d + (1 - p)^d)^(1/d)
//! ```
//!
//! and piecewise-linear tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::MASS_TOLERANCE;

/// Grid size used to verify monotonicity of closed-form families and to
/// bound `w(x) / x` for families without an exact bound.
const CHECK_GRID: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightingFunction {
    Identity,
    TverskyKahneman {
        delta: f64,
    },
    /// Ascending `(p, w)` knots, linearly interpolated. The first knot must be
    /// `(0, 0)` and the last `(1, 1)`.
    Tabulated {
        knots: Vec<(f64, f64)>,
    },
}

impl WeightingFunction {
    pub fn tversky_kahneman(delta: f64) -> Result<Self> {
        let w = WeightingFunction::TverskyKahneman { delta };
        w.validate()?;
        Ok(w)
    }

    pub fn tabulated(knots: Vec<(f64, f64)>) -> Result<Self> {
        let w = WeightingFunction::Tabulated { knots };
        w.validate()?;
        Ok(w)
    }

    /// Builds a table checking only its shape (ascending abscissae, fixed
    /// endpoints), not monotonicity. Used to exercise the monotonicity probe
    /// against a deliberately broken weighting.
    pub fn tabulated_unchecked(knots: Vec<(f64, f64)>) -> Result<Self> {
        check_knot_shape(&knots)?;
        Ok(WeightingFunction::Tabulated { knots })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            WeightingFunction::Identity => Ok(()),
            WeightingFunction::TverskyKahneman { delta } => {
                if !(delta.is_finite() && *delta > 0.0) {
                    return Err(Error::InvalidWeighting(format!(
                        "Tversky-Kahneman delta must be positive, got {delta}"
                    )));
                }
                // The family stops being monotone for small delta (below ~0.279).
                let mut prev = 0.0;
                for i in 1..=CHECK_GRID {
                    let v = self.value(i as f64 / CHECK_GRID as f64);
                    if v < prev {
                        return Err(Error::InvalidWeighting(format!(
                            "Tversky-Kahneman delta {delta} is not monotone (decreases near p = {})",
                            i as f64 / CHECK_GRID as f64
                        )));
                    }
                    prev = v;
                }
                Ok(())
            }
            WeightingFunction::Tabulated { knots } => {
                check_knot_shape(knots)?;
                for pair in knots.windows(2) {
                    if pair[1].1 < pair[0].1 {
                        return Err(Error::InvalidWeighting(format!(
                            "table decreases between p = {} and p = {}",
                            pair[0].0, pair[1].0
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Evaluates `w(p)`, rejecting `p` outside `[0, 1]` beyond a `1e-12` slack.
    pub fn eval(&self, p: f64) -> Result<f64> {
        if !(-MASS_TOLERANCE..=1.0 + MASS_TOLERANCE).contains(&p) {
            return Err(Error::Domain {
                what: "probability",
                value: p,
                domain: "[0, 1]",
            });
        }
        Ok(self.value(p))
    }

    /// Unchecked evaluation; `p` is clamped to `[0, 1]`.
    pub(crate) fn value(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return 0.0;
        }
        if p >= 1.0 {
            return 1.0;
        }
        let v = match self {
            WeightingFunction::Identity => p,
            WeightingFunction::TverskyKahneman { delta } => {
                let a = p.powf(*delta);
                let b = (1.0 - p).powf(*delta);
                a / (a + b).powf(1.0 / delta)
            }
            WeightingFunction::Tabulated { knots } => {
                // first knot with abscissa >= p; p in (0, 1) so 1 <= idx < len
                let idx = knots.partition_point(|k| k.0 < p);
                let (p0, w0) = knots[idx - 1];
                let (p1, w1) = knots[idx];
                w0 + (w1 - w0) * (p - p0) / (p1 - p0)
            }
        };
        v.clamp(0.0, 1.0)
    }

    /// Smallest `xi` with `w(x) <= xi * x` on `(0, 1]`, or `None` when the
    /// ratio is unbounded near zero.
    ///
    /// Exact for the identity and for tables; for Tversky-Kahneman with
    /// `delta >= 1` the supremum is taken over a `1e-4` grid.
    pub fn slope_bound(&self) -> Option<f64> {
        match self {
            WeightingFunction::Identity => Some(1.0),
            WeightingFunction::TverskyKahneman { delta } => {
                if *delta < 1.0 {
                    return None;
                }
                let xi = (1..=CHECK_GRID)
                    .map(|i| {
                        let p = i as f64 / CHECK_GRID as f64;
                        self.value(p) / p
                    })
                    .fold(0.0, f64::max);
                Some(xi)
            }
            WeightingFunction::Tabulated { knots } => {
                // (a + b p) / p is monotone on each segment, so the supremum sits
                // on a knot or is the limit slope of the first segment at zero.
                let first = knots[1].1 / knots[1].0;
                Some(knots.iter().skip(1).map(|&(p, w)| w / p).fold(first, f64::max))
            }
        }
    }
}

fn check_knot_shape(knots: &[(f64, f64)]) -> Result<()> {
    if knots.len() < 2 {
        return Err(Error::InvalidWeighting(
            "a table needs at least the knots (0, 0) and (1, 1)".into(),
        ));
    }
    if knots.iter().any(|k| !k.0.is_finite() || !k.1.is_finite()) {
        return Err(Error::InvalidWeighting("table entries must be finite".into()));
    }
    if knots[0] != (0.0, 0.0) || knots[knots.len() - 1] != (1.0, 1.0) {
        return Err(Error::InvalidWeighting(
            "table must start at (0, 0) and end at (1, 1)".into(),
        ));
    }
    if knots.windows(2).any(|pair| pair[1].0 <= pair[0].0) {
        return Err(Error::InvalidWeighting(
            "table abscissae must be strictly ascending".into(),
        ));
    }
    if knots.iter().any(|k| !(0.0..=1.0).contains(&k.1)) {
        return Err(Error::InvalidWeighting("table values must lie in [0, 1]".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn families() -> Vec<WeightingFunction> {
        vec![
            WeightingFunction::Identity,
            WeightingFunction::tversky_kahneman(0.61).unwrap(),
            WeightingFunction::tversky_kahneman(1.7).unwrap(),
            WeightingFunction::tabulated(vec![(0.0, 0.0), (0.2, 0.35), (0.7, 0.6), (1.0, 1.0)]).unwrap(),
        ]
    }

    #[test]
    fn endpoints_are_exact() {
        for w in families() {
            assert_eq!(w.eval(0.0).unwrap(), 0.0);
            assert_eq!(w.eval(1.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn tk_unit_delta_is_identity() {
        let w = WeightingFunction::tversky_kahneman(1.0).unwrap();
        assert!((w.eval(0.3).unwrap() - 0.3).abs() <= 1e-15);
        for i in 0..=10_000 {
            let p = i as f64 / 10_000.0;
            assert!((w.eval(p).unwrap() - p).abs() <= 1e-12);
        }
    }

    #[test]
    fn tk_matches_high_precision_value() {
        // 50-digit evaluation of p^d / (p^d + (1-p)^d)^(1/d) at p = 0.5, d = 0.65
        let expected = 0.438_770_507_484_680_215_370_527_599_185_343_551_460_797_990_515_56;
        let w = WeightingFunction::tversky_kahneman(0.65).unwrap();
        assert!((w.eval(0.5).unwrap() - expected).abs() <= 1e-15);
    }

    #[test]
    fn rejects_out_of_range_probability() {
        let w = WeightingFunction::Identity;
        assert!(w.eval(-0.1).is_err());
        assert!(w.eval(1.5).is_err());
        assert!(w.eval(f64::NAN).is_err());
        assert_eq!(w.eval(1.0 + 1e-13).unwrap(), 1.0);
        assert_eq!(w.eval(-1e-13).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(WeightingFunction::tversky_kahneman(0.0).is_err());
        assert!(WeightingFunction::tversky_kahneman(-1.0).is_err());
        assert!(WeightingFunction::tversky_kahneman(0.2).is_err());
        assert!(WeightingFunction::tversky_kahneman(0.3).is_ok());
        assert!(WeightingFunction::tabulated(vec![(0.0, 0.0), (0.5, 0.8), (0.6, 0.2), (1.0, 1.0)]).is_err());
        assert!(WeightingFunction::tabulated(vec![(0.0, 0.1), (1.0, 1.0)]).is_err());
        assert!(WeightingFunction::tabulated(vec![(0.0, 0.0), (0.5, 0.5), (0.5, 0.6), (1.0, 1.0)]).is_err());
        assert!(WeightingFunction::tabulated_unchecked(vec![(0.0, 0.0), (0.5, 0.8), (0.6, 0.2), (1.0, 1.0)]).is_ok());
    }

    #[test]
    fn monotone_on_grid() {
        for w in families() {
            let mut prev = 0.0;
            for i in 0..=20_000 {
                let v = w.eval(i as f64 / 20_000.0).unwrap();
                assert!(v >= prev, "{w:?} decreases at {i}");
                prev = v;
            }
        }
    }

    #[test]
    fn tabulated_interpolates() {
        let w = WeightingFunction::tabulated(vec![(0.0, 0.0), (0.5, 0.3), (1.0, 1.0)]).unwrap();
        assert!((w.eval(0.25).unwrap() - 0.15).abs() < 1e-15);
        assert!((w.eval(0.5).unwrap() - 0.3).abs() < 1e-15);
        assert!((w.eval(0.75).unwrap() - 0.65).abs() < 1e-15);
    }

    #[test]
    fn slope_bounds() {
        assert_eq!(WeightingFunction::Identity.slope_bound(), Some(1.0));
        assert_eq!(WeightingFunction::tversky_kahneman(0.61).unwrap().slope_bound(), None);
        let table = WeightingFunction::tabulated(vec![(0.0, 0.0), (0.2, 0.5), (1.0, 1.0)]).unwrap();
        assert!((table.slope_bound().unwrap() - 2.5).abs() < 1e-15);
        let convex = WeightingFunction::tversky_kahneman(1.5).unwrap();
        let xi = convex.slope_bound().unwrap();
        for i in 1..=1000 {
            let p = i as f64 / 1000.0;
            assert!(convex.eval(p).unwrap() <= xi * p + 1e-12);
        }
    }
}
