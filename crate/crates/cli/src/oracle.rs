//! Expected-cost value iteration with no CPT machinery, for comparing
//! risk-neutral solves.

use cptdp::{MarkovModel, Mode};

/// Iterates `J(x) = min_a sum_d P(d) (g + alpha J(f))` until the sup-norm
/// change is at most `tol`. In transient models mass entering the absorbing
/// state contributes nothing.
pub fn expected_cost_values(model: &MarkovModel, tol: f64, max_iter: usize) -> Vec<f64> {
    let (alpha, absorbing) = match model.mode {
        Mode::Discounted { alpha } => (alpha, None),
        Mode::Transient { absorbing } => (1.0, Some(absorbing)),
    };
    let n = model.states.len();
    let mut j = vec![0.0; n];
    let mut next = vec![0.0; n];
    for _ in 0..max_iter {
        let mut change: f64 = 0.0;
        for (x, state) in model.states.iter().enumerate() {
            if Some(x) == absorbing {
                next[x] = 0.0;
                continue;
            }
            let mut best = f64::INFINITY;
            for action in &state.actions {
                let mut q = 0.0;
                for d in &action.disturbances {
                    if Some(d.next) != absorbing {
                        q += d.mass * (d.cost + alpha * j[d.next]);
                    }
                }
                best = best.min(q);
            }
            next[x] = best;
            change = change.max((best - j[x]).abs());
        }
        std::mem::swap(&mut j, &mut next);
        if change <= tol {
            break;
        }
    }
    j
}
