//! Search helpers over the probability simplex.

/// All mixes over `k` actions whose weights are multiples of `1 / resolution`,
/// in ascending lexicographic order.
pub fn grid_mixes(k: usize, resolution: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    let mut counts = vec![0usize; k];
    fill(&mut counts, 0, resolution, resolution, &mut out);
    out
}

fn fill(counts: &mut [usize], pos: usize, left: usize, resolution: usize, out: &mut Vec<Vec<f64>>) {
    if pos == counts.len() - 1 {
        counts[pos] = left;
        out.push(counts.iter().map(|&c| c as f64 / resolution as f64).collect());
        return;
    }
    for c in 0..=left {
        counts[pos] = c;
        fill(counts, pos + 1, left - c, resolution, out);
    }
}

pub fn is_vertex(mix: &[f64]) -> bool {
    mix.iter().filter(|&&p| p > 0.0).count() == 1
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a minimiser of `f` on `[lo, hi]`; returns the
/// best point evaluated and its value.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, width: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let (mut best_x, mut best_f) = if f2 < f1 { (x2, f2) } else { (x1, f1) };
    while hi - lo > width {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
            if f1 < best_f {
                best_x = x1;
                best_f = f1;
            }
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
            if f2 < best_f {
                best_x = x2;
                best_f = f2;
            }
        }
    }
    (best_x, best_f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts_and_order() {
        let g = grid_mixes(3, 4);
        assert_eq!(g.len(), 15);
        assert_eq!(g[0], vec![0.0, 0.0, 1.0]);
        assert_eq!(g[14], vec![1.0, 0.0, 0.0]);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        for mix in &g {
            assert!((mix.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
        assert_eq!(grid_mixes(4, 10).len(), 286);
        assert_eq!(grid_mixes(1, 7), vec![vec![1.0]]);
    }

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden_section(|t| (t - 0.3) * (t - 0.3) + 1.0, -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-8);
        assert!((fx - 1.0).abs() < 1e-15);
    }
}
