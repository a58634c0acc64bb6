//! Order-statistics estimator of the CPT functional from i.i.d. samples.
//!
//! With the sorted sample `X[1] <= ... <= X[n]`,
//!
//! ```text
//! C+ = sum_i u+((X[i] - b)+) * (w+((n + 1 - i) / n) - w+((n - i) / n))
//! C- = sum_i u-((X[i] - b)-) * (w-(i / n) - w-((i - 1) / n))
//! ```
//!
//! and the estimate is `C+ - C-`.

use rand::Rng;
use rayon::prelude::*;

use crate::distribution::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::functional::{cpt_value_exact, CptSpec};
use crate::seed;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    samples: Vec<f64>,
    seed: u64,
    source_label: String,
}

impl SampleBatch {
    pub fn new(samples: Vec<f64>, seed: u64, source_label: impl Into<String>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyBatch);
        }
        if let Some((index, &value)) = samples.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index, value });
        }
        Ok(SampleBatch {
            samples,
            seed,
            source_label: source_label.into(),
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorResult {
    pub value: f64,
    pub positive_part: f64,
    pub negative_part: f64,
    pub n: usize,
}

pub fn estimate_cpt(batch: &SampleBatch, spec: &CptSpec) -> EstimatorResult {
    let mut sorted = batch.samples.clone();
    // stable: equal values keep their original order
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let nf = n as f64;
    let b = spec.reference_point;

    let mut positive_part = 0.0;
    let mut negative_part = 0.0;
    // Runs of tied order statistics X[first..=last] share one utility, so their
    // weight increments telescope to a single difference.
    let mut start = 0;
    while start < n {
        let x = sorted[start];
        let mut end = start + 1;
        while end < n && sorted[end] == x {
            end += 1;
        }
        let (first, last) = (start + 1, end);
        let dev = x - b;
        if dev > 0.0 {
            let hi = spec.w_plus.value((n + 1 - first) as f64 / nf);
            let lo = spec.w_plus.value((n - last) as f64 / nf);
            positive_part += spec.u_plus.value(dev) * (hi - lo);
        } else if dev < 0.0 {
            let hi = spec.w_minus.value(last as f64 / nf);
            let lo = spec.w_minus.value((first - 1) as f64 / nf);
            negative_part += spec.u_minus.value(-dev) * (hi - lo);
        }
        start = end;
    }
    EstimatorResult {
        value: positive_part - negative_part,
        positive_part,
        negative_part,
        n,
    }
}

/// A seeded source of i.i.d. sample batches.
pub trait BatchSampler: Sync {
    fn draw(&self, n: usize, seed: u64) -> Result<SampleBatch>;

    /// The law being sampled, when it is known exactly.
    fn ground_truth(&self) -> Option<&DiscreteDistribution>;
}

/// Inverse-CDF sampling from a proper discrete law.
#[derive(Debug, Clone)]
pub struct DiscreteSampler {
    law: DiscreteDistribution,
    cumulative: Vec<f64>,
    label: String,
}

impl DiscreteSampler {
    pub fn new(law: DiscreteDistribution, label: impl Into<String>) -> Result<Self> {
        if !law.is_proper() {
            return Err(Error::SubNormalized {
                total_mass: law.total_mass(),
            });
        }
        let mut acc = 0.0;
        let cumulative = law
            .atoms()
            .iter()
            .map(|a| {
                acc += a.mass;
                acc
            })
            .collect();
        Ok(DiscreteSampler {
            law,
            cumulative,
            label: label.into(),
        })
    }
}

impl BatchSampler for DiscreteSampler {
    fn draw(&self, n: usize, seed: u64) -> Result<SampleBatch> {
        let mut rng = seed::rng_for(seed, &[]);
        let total = self.law.total_mass();
        let atoms = self.law.atoms();
        let samples = (0..n)
            .map(|_| {
                let u: f64 = rng.gen::<f64>() * total;
                let idx = self.cumulative.partition_point(|&c| c <= u);
                atoms[idx.min(atoms.len() - 1)].value
            })
            .collect();
        SampleBatch::new(samples, seed, self.label.clone())
    }

    fn ground_truth(&self) -> Option<&DiscreteDistribution> {
        Some(&self.law)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyRow {
    pub n: usize,
    pub repeat: usize,
    pub estimate: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSummary {
    pub n: usize,
    pub mean_abs_error: f64,
    pub median_abs_error: f64,
    pub std_abs_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub truth: f64,
    pub rows: Vec<StudyRow>,
    pub summary: Vec<ErrorSummary>,
}

impl ConvergenceStudy {
    /// `n,repeat,estimate,abs_error`, n ascending then repeat ascending.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,repeat,estimate,abs_error\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{:?},{:?}\n", r.n, r.repeat, r.estimate, r.abs_error));
        }
        out
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from("n,mean_abs_error,median_abs_error,std_abs_error\n");
        for s in &self.summary {
            out.push_str(&format!(
                "{},{:?},{:?},{:?}\n",
                s.n, s.mean_abs_error, s.median_abs_error, s.std_abs_error
            ));
        }
        out
    }
}

/// Seed used for batch `(n, repeat)` of a study with the given master seed.
pub fn study_seed(master: u64, n: usize, repeat: usize) -> u64 {
    seed::derive_seed(master, &[n as u64, repeat as u64])
}

/// Estimation error against the sampler's exact law, for each `n` in `ns`
/// over `repeats` independently seeded batches.
pub fn convergence_study<S: BatchSampler>(
    sampler: &S,
    spec: &CptSpec,
    ns: &[usize],
    repeats: usize,
    master_seed: u64,
) -> Result<ConvergenceStudy> {
    if ns.is_empty() || repeats == 0 {
        return Err(Error::InvalidStudy("need at least one n and one repeat".into()));
    }
    if ns.windows(2).any(|p| p[1] <= p[0]) || ns[0] == 0 {
        return Err(Error::InvalidStudy("ns must be positive and strictly ascending".into()));
    }
    let law = sampler.ground_truth().ok_or(Error::MissingGroundTruth)?;
    let truth = cpt_value_exact(law, spec)?;

    let jobs: Vec<(usize, usize)> = ns.iter().flat_map(|&n| (0..repeats).map(move |r| (n, r))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(n, repeat)| {
            let batch = sampler.draw(n, study_seed(master_seed, n, repeat))?;
            let estimate = estimate_cpt(&batch, spec).value;
            Ok(StudyRow {
                n,
                repeat,
                estimate,
                abs_error: (estimate - truth).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let summary = ns
        .iter()
        .map(|&n| {
            let mut errs: Vec<f64> = rows.iter().filter(|r| r.n == n).map(|r| r.abs_error).collect();
            summarize(n, &mut errs)
        })
        .collect();
    Ok(ConvergenceStudy { truth, rows, summary })
}

fn summarize(n: usize, errs: &mut [f64]) -> ErrorSummary {
    let k = errs.len() as f64;
    let mean = errs.iter().sum::<f64>() / k;
    let var = if errs.len() > 1 {
        errs.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (k - 1.0)
    } else {
        0.0
    };
    errs.sort_by(f64::total_cmp);
    let mid = errs.len() / 2;
    let median = if errs.len().is_multiple_of(2) {
        0.5 * (errs[mid - 1] + errs[mid])
    } else {
        errs[mid]
    };
    ErrorSummary {
        n,
        mean_abs_error: mean,
        median_abs_error: median,
        std_abs_error: var.sqrt(),
    }
}
