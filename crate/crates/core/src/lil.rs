//! Log spanning-tree counts along a coupled family of nested `G(n, p)`
//! graphs, normalized for the law of the iterated logarithm.
//!
//! For `X_n` the tree count of the restriction to `0..n`:
//!
//! * `mu_n = (n-1) ln p + (n-2) ln n` is `ln E X_n`;
//! * `sigma = sqrt(2(1-p)/p)`;
//! * `E*_n` is the edge count standardized as a `Bin(C(n,2), p)` variable;
//! * the LIL statistic is `(ln X_n - mu_n) / (sigma sqrt(2 ln ln n))`;
//! * the residual `(ln X_n - mu_n)/sigma - E*_n` stays bounded.

use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{invalid, Result};
use crate::graph::{gen_gnp, pair_count, CoupledGraphSource, Graph};
use crate::logvalue::LogValue;
use crate::math;
use crate::rng::derive_tagged;
use crate::stats::{quantile, sorted_finite};
use crate::tree_count::matrix_tree_log_count;

const CLT_STREAM: u64 = 0x636c_7400;
const SOURCE_STREAM: u64 = 0x7372_6300;

/// Smallest `n` with `ln ln n > 0` on the default grid.
pub const MIN_LIL_N: usize = 16;

fn check_open_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(invalid("p must lie in (0, 1)"))
    }
}

/// `ln(p^(n-1) n^(n-2))`.
pub fn mu_n(n: usize, p: f64) -> Result<f64> {
    check_open_probability(p)?;
    if n < 2 {
        return Err(invalid("n must be at least 2"));
    }
    let nf = n as f64;
    Ok((nf - 1.0) * math::ln(p) + (nf - 2.0) * math::ln(nf))
}

/// `sqrt(2(1-p)/p)`.
pub fn sigma(p: f64) -> Result<f64> {
    check_open_probability(p)?;
    Ok(math::sqrt(2.0 * (1.0 - p) / p))
}

/// `(|E| - C(n,2) p) / sqrt(C(n,2) p (1-p))`.
pub fn edge_zscore(g: &Graph, p: f64) -> Result<f64> {
    check_open_probability(p)?;
    let pairs = pair_count(g.n()) as f64;
    if pairs == 0.0 {
        return Err(invalid("graph has no vertex pairs"));
    }
    Ok((g.edge_count() as f64 - pairs * p) / math::sqrt(pairs * p * (1.0 - p)))
}

/// Grid and normalization for a trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LilConfig {
    p: f64,
    sigma: f64,
    grid_base: u32,
    n_min: usize,
    n_max: usize,
}

impl LilConfig {
    pub fn new(p: f64, grid_base: u32, n_min: usize, n_max: usize) -> Result<LilConfig> {
        let sigma = sigma(p)?;
        if grid_base < 2 {
            return Err(invalid("grid base must be an integer > 1"));
        }
        if n_min < MIN_LIL_N {
            return Err(invalid("n_min must be at least 16"));
        }
        let config = LilConfig {
            p,
            sigma,
            grid_base,
            n_min,
            n_max,
        };
        if config.grid().is_empty() {
            return Err(invalid("no grid point a^j lies in [n_min, n_max]"));
        }
        Ok(config)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn grid_base(&self) -> u32 {
        self.grid_base
    }

    pub fn n_min(&self) -> usize {
        self.n_min
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Powers `a^j` inside `[n_min, n_max]`.
    pub fn grid(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut v: usize = 1;
        while v <= self.n_max {
            if v >= self.n_min {
                out.push(v);
            }
            match v.checked_mul(self.grid_base as usize) {
                Some(next) => v = next,
                None => break,
            }
        }
        out
    }
}

/// One grid point of a trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub n: usize,
    pub edge_count: usize,
    pub e_star: f64,
    pub log_x: LogValue,
    pub mu: f64,
    /// `None` when the restriction is disconnected.
    pub lil_stat: Option<f64>,
    /// `None` when the restriction is disconnected.
    pub residual: Option<f64>,
}

impl TrajectoryPoint {
    /// `(ln X_n - mu_n)/sigma`, when defined.
    pub fn normalized(&self, sigma: f64) -> Option<f64> {
        self.log_x.ln_opt().map(|lx| (lx - self.mu) / sigma)
    }
}

/// Evaluates one restriction of the coupled graph.
pub fn trajectory_point(source: &CoupledGraphSource, config: &LilConfig, n: usize) -> Result<TrajectoryPoint> {
    let g = source.restrict(n)?;
    point_from_graph(&g, config)
}

fn point_from_graph(g: &Graph, config: &LilConfig) -> Result<TrajectoryPoint> {
    let n = g.n();
    let e_star = edge_zscore(g, config.p)?;
    let mu = mu_n(n, config.p)?;
    let log_x = matrix_tree_log_count(g);
    let normalized = log_x.ln_opt().map(|lx| (lx - mu) / config.sigma);
    let scale = math::sqrt(2.0 * math::ln(math::ln(n as f64)));
    Ok(TrajectoryPoint {
        n,
        edge_count: g.edge_count(),
        e_star,
        log_x,
        mu,
        lil_stat: normalized.map(|z| z / scale),
        residual: normalized.map(|z| z - e_star),
    })
}

/// Trajectory of the coupled source over the configured grid.
pub fn trajectory(source: &CoupledGraphSource, config: &LilConfig) -> Result<Vec<TrajectoryPoint>> {
    if (source.p() - config.p).abs() > 0.0 {
        return Err(invalid("source and config disagree on p"));
    }
    config.grid().into_iter().map(|n| trajectory_point(source, config, n)).collect()
}

/// Seed of coupled source `s`.
pub fn source_seed(seed: u64, s: u64) -> u64 {
    derive_tagged(seed, SOURCE_STREAM, s)
}

/// Seed of the `t`-th independent `G(n, p)` draw.
pub fn clt_trial_seed(seed: u64, t: u64) -> u64 {
    derive_tagged(seed, CLT_STREAM, t)
}

/// `sqrt(p) (ln X - mu_n + (1-p)/p)` for one `G(n, p)` draw, or `None` if
/// the draw is disconnected.
pub fn janson_clt_value(n: usize, p: f64, seed: u64) -> Result<Option<f64>> {
    let mu = mu_n(n, p)?;
    let g = gen_gnp(n, p, seed)?;
    Ok(matrix_tree_log_count(&g)
        .ln_opt()
        .map(|lx| math::sqrt(p) * (lx - mu + (1.0 - p) / p)))
}

/// Samples of the centered, scaled log count.
#[derive(Clone, Debug, PartialEq)]
pub struct CltSample {
    pub values: Vec<f64>,
    /// Disconnected draws, excluded from `values`.
    pub dropped: u64,
}

impl CltSample {
    pub fn merge(&mut self, other: CltSample) {
        self.values.extend(other.values);
        self.dropped += other.dropped;
    }
}

/// CLT draws for trials in `range`.
pub fn janson_clt_trials(n: usize, p: f64, seed: u64, range: Range<u64>) -> Result<CltSample> {
    if n < MIN_LIL_N {
        return Err(invalid("n must be at least 16"));
    }
    let mut out = CltSample {
        values: Vec::new(),
        dropped: 0,
    };
    for t in range {
        match janson_clt_value(n, p, clt_trial_seed(seed, t))? {
            Some(v) => out.values.push(v),
            None => out.dropped += 1,
        }
    }
    Ok(out)
}

pub fn janson_clt_sample(n: usize, p: f64, trials: u64, seed: u64) -> Result<CltSample> {
    if trials == 0 {
        return Err(invalid("trials must be positive"));
    }
    janson_clt_trials(n, p, seed, 0..trials)
}

/// Tail maxima of the LIL statistic across trajectories.
#[derive(Clone, Debug, PartialEq)]
pub struct LilSummary {
    pub n_tail: usize,
    /// Per trajectory: max LIL statistic over defined points with `n ≥ n_tail`.
    pub maxima: Vec<Option<f64>>,
    pub min: f64,
    pub median: f64,
    pub mean: f64,
    pub max: f64,
}

pub fn lil_supremum_report(trajectories: &[Vec<TrajectoryPoint>], n_tail: usize) -> Result<LilSummary> {
    if trajectories.is_empty() {
        return Err(invalid("no trajectories"));
    }
    let maxima: Vec<Option<f64>> = trajectories
        .iter()
        .map(|traj| {
            traj.iter()
                .filter(|pt| pt.n >= n_tail)
                .filter_map(|pt| pt.lil_stat)
                .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))))
        })
        .collect();
    let defined: Vec<f64> = maxima.iter().flatten().copied().collect();
    let sorted = sorted_finite(&defined);
    let mean = if sorted.is_empty() {
        f64::NAN
    } else {
        sorted.iter().sum::<f64>() / sorted.len() as f64
    };
    Ok(LilSummary {
        n_tail,
        maxima,
        min: sorted.first().copied().unwrap_or(f64::NAN),
        median: quantile(&sorted, 0.5),
        mean,
        max: sorted.last().copied().unwrap_or(f64::NAN),
    })
}
