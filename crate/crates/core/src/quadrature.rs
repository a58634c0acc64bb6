//! Adaptive Gauss-Kronrod evaluation of the CPT functional.
//!
//! Integrates both tail integrals numerically, scanning the atoms at every
//! node to obtain the tail probability, and splitting the domain at the
//! utility levels where the integrand jumps. It shares no code with the
//! staircase evaluation and serves as a cross-check for it.

#![allow(clippy::excessive_precision)]

use crate::distribution::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::functional::CptSpec;
use crate::utility::UtilityFunction;
use crate::weighting::WeightingFunction;

// 15-point Kronrod abscissae on [-1, 1] (non-negative half) and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// 7-point Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_SUBDIVISIONS: usize = 100_000;

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive bisection until each piece's Kronrod-Gauss difference is within
/// its share of `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let width = b - a;
    let mut stack = vec![(a, b)];
    let mut total = 0.0;
    let mut steps = 0;
    while let Some((lo, hi)) = stack.pop() {
        steps += 1;
        if steps > MAX_SUBDIVISIONS {
            return Err(Error::QuadratureNonConvergence(format!(
                "more than {MAX_SUBDIVISIONS} subdivisions on [{a}, {b}]"
            )));
        }
        let (value, err) = gauss_kronrod(f, lo, hi);
        let budget = tol * (hi - lo) / width;
        if err <= budget.max(f64::EPSILON * value.abs()) {
            total += value;
        } else {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                return Err(Error::QuadratureNonConvergence(format!(
                    "interval [{lo}, {hi}] cannot be split further"
                )));
            }
            stack.push((mid, hi));
            stack.push((lo, mid));
        }
    }
    Ok(total)
}

/// `C(X)` by quadrature, within `tol` of the exact value.
pub fn cpt_value_quadrature(dist: &DiscreteDistribution, spec: &CptSpec, tol: f64) -> Result<f64> {
    if !dist.is_proper() {
        return Err(Error::SubNormalized {
            total_mass: dist.total_mass(),
        });
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Domain {
            what: "tolerance",
            value: tol,
            domain: "(0, inf)",
        });
    }
    let b = spec.reference_point;
    let side = |sign: f64| -> Vec<(f64, f64)> {
        dist.atoms()
            .iter()
            .filter(|a| sign * (a.value - b) > 0.0)
            .map(|a| (sign * (a.value - b), a.mass))
            .collect()
    };
    let off_side = |sign: f64| -> f64 {
        dist.atoms()
            .iter()
            .filter(|a| sign * (a.value - b) <= 0.0)
            .map(|a| a.mass)
            .sum()
    };
    let gain = tail_quadrature(&side(1.0), off_side(1.0), &spec.u_plus, &spec.w_plus, 0.5 * tol)?;
    let loss = tail_quadrature(&side(-1.0), off_side(-1.0), &spec.u_minus, &spec.w_minus, 0.5 * tol)?;
    Ok(gain - loss)
}

/// Integrates `w(P(u(D) > y))` over `y >= 0`. The tail probability at each
/// node is the smaller of the direct sum and `1 - P(u(D) <= y)` (with
/// `off_side` counted in the latter), so tails near 1 keep full precision.
fn tail_quadrature(
    deviations: &[(f64, f64)],
    off_side: f64,
    u: &UtilityFunction,
    w: &WeightingFunction,
    tol: f64,
) -> Result<f64> {
    let levels: Vec<(f64, f64)> = deviations
        .iter()
        .map(|&(d, m)| Ok((u.eval(d)?, m)))
        .collect::<Result<_>>()?;
    let integrand = |y: f64| -> f64 {
        let above: f64 = levels.iter().filter(|l| l.0 > y).map(|l| l.1).sum();
        let not_above: f64 = off_side + levels.iter().filter(|l| l.0 <= y).map(|l| l.1).sum::<f64>();
        w.value(if not_above < above { 1.0 - not_above } else { above })
    };
    let mut breaks: Vec<f64> = levels.iter().map(|l| l.0).filter(|&y| y > 0.0).collect();
    breaks.push(0.0);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let pieces = breaks.len().saturating_sub(1).max(1) as f64;
    let mut total = 0.0;
    for pair in breaks.windows(2) {
        total += integrate(&integrand, pair[0], pair[1], tol / pieces)?;
    }
    Ok(total)
}
