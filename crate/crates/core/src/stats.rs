//! Integer-valued empirical distributions and small descriptive helpers.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

/// Empirical pmf over `0, 1, 2, ...` with its trial count.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EmpiricalDist {
    counts: Vec<u64>,
    trials: u64,
}

impl EmpiricalDist {
    pub fn new() -> EmpiricalDist {
        EmpiricalDist::default()
    }

    /// From `counts[a]` = occurrences of outcome `a`.
    pub fn from_counts(mut counts: Vec<u64>) -> EmpiricalDist {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        let trials = counts.iter().sum();
        EmpiricalDist { counts, trials }
    }

    pub fn record(&mut self, outcome: usize) {
        if outcome >= self.counts.len() {
            self.counts.resize(outcome + 1, 0);
        }
        self.counts[outcome] += 1;
        self.trials += 1;
    }

    /// Adds the counts of `other`. Order of merging does not matter.
    pub fn merge(&mut self, other: &EmpiricalDist) {
        if other.counts.len() > self.counts.len() {
            self.counts.resize(other.counts.len(), 0);
        }
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        self.trials += other.trials;
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn is_empty(&self) -> bool {
        self.trials == 0
    }

    pub fn count(&self, a: usize) -> u64 {
        self.counts.get(a).copied().unwrap_or(0)
    }

    /// Counts indexed by outcome, up to the largest observed outcome.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// One past the largest observed outcome.
    pub fn support_len(&self) -> usize {
        self.counts.len()
    }

    pub fn pmf(&self, a: usize) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.count(a) as f64 / self.trials as f64
        }
    }

    /// Normal-approximation standard error `sqrt(p(1-p)/trials)` of `pmf(a)`.
    pub fn std_error(&self, a: usize) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let p = self.pmf(a);
        math::sqrt(p * (1.0 - p) / self.trials as f64)
    }

    pub fn mean(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        self.counts.iter().enumerate().map(|(a, &c)| a as f64 * c as f64).sum::<f64>() / self.trials as f64
    }

    /// Sample variance (denominator `trials - 1`).
    pub fn variance(&self) -> f64 {
        if self.trials < 2 {
            return 0.0;
        }
        let mean = self.mean();
        let ss: f64 = self
            .counts
            .iter()
            .enumerate()
            .map(|(a, &c)| c as f64 * (a as f64 - mean) * (a as f64 - mean))
            .sum();
        ss / (self.trials - 1) as f64
    }

    pub fn mean_std_error(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        math::sqrt(self.variance() / self.trials as f64)
    }
}

/// Mean and sample variance.
pub fn mean_variance(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, ss / (n - 1) as f64)
}

/// Pearson correlation of paired samples; `None` if either side is constant.
pub fn correlation(xs: &[f64], ys: &[f64]) -> Option<f64> {
    assert_eq!(xs.len(), ys.len());
    if xs.len() < 2 {
        return None;
    }
    let (mx, _) = mean_variance(xs);
    let (my, _) = mean_variance(ys);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        None
    } else {
        Some(sxy / math::sqrt(sxx * syy))
    }
}

/// Empirical quantile with linear interpolation; `q` in `[0, 1]`.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = math::floor(pos) as usize;
    let hi = math::ceil(pos) as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Sorted copy of the finite values.
pub fn sorted_finite(xs: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = xs.iter().copied().filter(|x| x.is_finite()).collect();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    v
}

/// Counts of each outcome among `0..bins`.
pub fn histogram(outcomes: impl IntoIterator<Item = usize>, bins: usize) -> Vec<u64> {
    let mut h = vec![0u64; bins];
    for o in outcomes {
        h[o] += 1;
    }
    h
}
