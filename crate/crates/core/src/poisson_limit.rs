//! The overlap statistic `M = k(n-1) - |T_1 ∪ ... ∪ T_k|` of `k` independent
//! uniform spanning trees, its distance to `Po(k(k-1))`, and the two upper
//! bounds on `P[M = a]`.

use alloc::format;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{invalid, out_of_regime, Result};
use crate::graph::{require_connected, union_size, EdgeSet, Graph};
use crate::math;
use crate::rng::{derive_tagged, rng_from_seed};
use crate::stats::EmpiricalDist;
use crate::tree_count::{matrix_tree_log_count, weighted_log_count};
use crate::tree_sample::{tree_seed, weighted_wilson_with_rng, wilson_with_rng};

const TRIAL_STREAM: u64 = 0x6d6e_7472;
const TILTED_STREAM: u64 = 0x7469_6c74;

/// Poisson tail mass beyond the TV truncation point.
pub const TV_TAIL: f64 = 1e-12;

/// Largest admissible `alpha` (exclusive).
pub const ALPHA_MAX: f64 = 1.0 / 11.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoissonParams {
    lambda: f64,
}

impl PoissonParams {
    pub fn new(lambda: f64) -> Result<PoissonParams> {
        if lambda >= 0.0 && lambda.is_finite() {
            Ok(PoissonParams { lambda })
        } else {
            Err(invalid("poisson rate must be finite and nonnegative"))
        }
    }

    /// `Po(k(k-1))`, the limit law of the overlap of `k` trees.
    pub fn for_trees(k: usize) -> PoissonParams {
        PoissonParams {
            lambda: (k * k.saturating_sub(1)) as f64,
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// `(n, k, alpha)` with `alpha` in `(0, 1/11)`, and the thresholds derived
/// from it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlphaRegime {
    alpha: f64,
    n: usize,
    k: usize,
}

impl AlphaRegime {
    pub fn new(alpha: f64, n: usize, k: usize) -> Result<AlphaRegime> {
        if !(alpha > 0.0 && alpha < ALPHA_MAX) {
            return Err(out_of_regime(format!("alpha = {alpha} outside (0, 1/11)")));
        }
        if n < 2 || k == 0 {
            return Err(invalid("regime needs n >= 2 and k >= 1"));
        }
        Ok(AlphaRegime { alpha, n, k })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn n_pow(&self, e: f64) -> f64 {
        math::pow(self.n as f64, e)
    }

    /// `n^(3 alpha)`: the largest `a` covered by the refined bound.
    pub fn a_threshold(&self) -> f64 {
        self.n_pow(3.0 * self.alpha)
    }

    /// `n^(4 alpha)`: the max-degree cutoff for the trees.
    pub fn degree_threshold(&self) -> f64 {
        self.n_pow(4.0 * self.alpha)
    }

    /// Whether `k ≤ c · n^alpha`. The growth condition on `k` has no explicit
    /// constant, so this is a flag for reports rather than a hard check.
    pub fn k_within(&self, c: f64) -> bool {
        self.k as f64 <= c * self.n_pow(self.alpha)
    }

    pub fn covers(&self, a: usize) -> bool {
        a as f64 <= self.a_threshold()
    }

    /// Suggested slack `c · n^(11 alpha - 1)` for [`claim2_bound`].
    pub fn default_slack(&self, c: f64) -> f64 {
        c * self.n_pow(11.0 * self.alpha - 1.0)
    }
}

/// Seed of Monte Carlo trial `t`. Trials are independent of how they are
/// grouped into shards.
pub fn trial_seed(seed: u64, t: u64) -> u64 {
    derive_tagged(seed, TRIAL_STREAM, t)
}

fn overlap(g: &Graph, k: usize, seed: u64) -> usize {
    let trees: Vec<EdgeSet> = (0..k)
        .map(|i| wilson_with_rng(g, &mut rng_from_seed(tree_seed(seed, i))).into_edges())
        .collect();
    k * (g.n() - 1) - union_size(&trees)
}

/// One draw of `M` from `k` independent uniform spanning trees of `g`.
pub fn sample_mn(g: &Graph, k: usize, seed: u64) -> Result<usize> {
    if k == 0 {
        return Err(invalid("k must be positive"));
    }
    require_connected(g)?;
    Ok(overlap(g, k, seed))
}

/// Empirical law of `M` over the trials in `range`.
pub fn mn_trials(g: &Graph, k: usize, seed: u64, range: Range<u64>) -> Result<EmpiricalDist> {
    if k == 0 {
        return Err(invalid("k must be positive"));
    }
    require_connected(g)?;
    let mut dist = EmpiricalDist::new();
    for t in range {
        dist.record(overlap(g, k, trial_seed(seed, t)));
    }
    Ok(dist)
}

/// Splits `0..trials` into `shards` contiguous, nearly equal ranges.
pub fn shard_ranges(trials: u64, shards: usize) -> Vec<Range<u64>> {
    let shards = shards.max(1) as u64;
    let base = trials / shards;
    let extra = trials % shards;
    let mut start = 0;
    (0..shards)
        .map(|s| {
            let len = base + u64::from(s < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

/// Empirical law of `M` over `trials` replicates, computed shard by shard and
/// merged in shard order. The result does not depend on `shards`.
pub fn mn_distribution(g: &Graph, k: usize, trials: u64, seed: u64, shards: usize) -> Result<EmpiricalDist> {
    if trials == 0 {
        return Err(invalid("trials must be positive"));
    }
    if shards == 0 {
        return Err(invalid("shards must be positive"));
    }
    let mut total = EmpiricalDist::new();
    for range in shard_ranges(trials, shards) {
        total.merge(&mn_trials(g, k, seed, range)?);
    }
    Ok(total)
}

/// One importance-sampled draw of `M`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TiltedDraw {
    pub a: usize,
    /// `ln` of the uniform-to-tilted likelihood ratio of the whole `k`-tuple.
    pub log_ratio: f64,
}

/// `k` trees drawn in sequence, tree `i` from the weighted law that gives
/// edges already in `T_1 ∪ ... ∪ T_{i-1}` weight `beta`. Each draw carries
/// the likelihood ratio `Π_i Z_beta(U_{i-1}) / (tau(g) beta^{a_i})` back to
/// independent uniform trees, where `a_i = |T_i ∩ U_{i-1}|` and `Z_beta` is
/// the weighted tree count. `beta = 1` is plain sampling.
fn tilted_overlap(g: &Graph, k: usize, beta: f64, log_tau: f64, seed: u64) -> Result<TiltedDraw> {
    let first = wilson_with_rng(g, &mut rng_from_seed(tree_seed(seed, 0))).into_edges();
    let mut union = first;
    let mut log_ratio = 0.0;
    let mut a = 0;
    for i in 1..k {
        let weight = |e| if union.contains(e) { beta } else { 1.0 };
        let tree = if beta == 1.0 {
            wilson_with_rng(g, &mut rng_from_seed(tree_seed(seed, i))).into_edges()
        } else {
            let log_z = weighted_log_count(g, weight)?.ln();
            let tree = weighted_wilson_with_rng(g, weight, &mut rng_from_seed(tree_seed(seed, i))).into_edges();
            let shared = tree.iter().filter(|&e| union.contains(e)).count();
            log_ratio += log_z - log_tau - shared as f64 * math::ln(beta);
            tree
        };
        let next = union.union(&tree);
        a += union.len() + tree.len() - next.len();
        union = next;
    }
    Ok(TiltedDraw { a, log_ratio })
}

/// Seed of tilted trial `t`.
pub fn tilted_trial_seed(seed: u64, t: u64) -> u64 {
    derive_tagged(seed, TILTED_STREAM, t)
}

/// Importance-sampled draws of `M` for the trials in `range`, in trial order.
pub fn mn_tilted_trials(g: &Graph, k: usize, beta: f64, seed: u64, range: Range<u64>) -> Result<Vec<TiltedDraw>> {
    if k == 0 {
        return Err(invalid("k must be positive"));
    }
    if !(beta >= 1.0 && beta.is_finite()) {
        return Err(invalid("tilt must be finite and at least 1"));
    }
    require_connected(g)?;
    let log_tau = matrix_tree_log_count(g).ln();
    range
        .map(|t| tilted_overlap(g, k, beta, log_tau, tilted_trial_seed(seed, t)))
        .collect()
}

/// Likelihood-weighted estimate of `P[M = a]`, indexed by `a`.
pub fn tilted_pmf(draws: &[TiltedDraw]) -> Vec<f64> {
    let len = draws.iter().map(|d| d.a + 1).max().unwrap_or(0);
    let mut pmf = alloc::vec![0.0; len];
    for d in draws {
        pmf[d.a] += math::exp(d.log_ratio);
    }
    let t = draws.len() as f64;
    pmf.iter_mut().for_each(|p| *p /= t);
    pmf
}

/// `ln P[Po(lambda) = t]`.
pub fn poisson_log_pmf(params: PoissonParams, t: u64) -> f64 {
    let lambda = params.lambda;
    if lambda == 0.0 {
        return if t == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    -lambda + t as f64 * math::ln(lambda) - math::ln_factorial(t)
}

/// `P[Po(lambda) = t] = e^(-lambda) lambda^t / t!`.
pub fn poisson_pmf(params: PoissonParams, t: u64) -> f64 {
    math::exp(poisson_log_pmf(params, t))
}

/// Smallest `A` with `P[Po(lambda) > A] < TV_TAIL`.
pub fn poisson_truncation(params: PoissonParams) -> usize {
    let lambda = params.lambda;
    let t_max = math::ceil(lambda + 20.0 * math::sqrt(lambda) + 60.0) as usize;
    let pmf: Vec<f64> = (0..=t_max).map(|t| poisson_pmf(params, t as u64)).collect();
    // tail[a] = P[Po > a], accumulated from the far end
    let mut tail = alloc::vec![0.0; t_max + 1];
    for a in (0..t_max).rev() {
        tail[a] = tail[a + 1] + pmf[a + 1];
    }
    tail.iter().position(|&x| x < TV_TAIL).unwrap_or(t_max)
}

/// Total-variation comparison of an empirical law with a Poisson law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TvReport {
    /// Half the L1 distance.
    pub tv: f64,
    /// The raw L1 sum `Σ |p̂_a - q_a|`.
    pub l1: f64,
    /// Truncation point `A`.
    pub truncation: usize,
    /// `½ Σ_a sqrt(2 p̂_a (1 - p̂_a) / (π T))`: the TV expected from sampling
    /// noise alone, the Monte Carlo scale of `tv`.
    pub noise: f64,
}

/// TV distance, summing `|p̂_a - q_a|` up to the truncation point and adding
/// both tails beyond it as-is.
pub fn tv_distance(emp: &EmpiricalDist, params: PoissonParams) -> Result<TvReport> {
    if emp.is_empty() {
        return Err(invalid("empty empirical distribution"));
    }
    let truncation = poisson_truncation(params);
    let mut l1 = 0.0;
    let mut head_q = 0.0;
    for a in 0..=truncation {
        let q = poisson_pmf(params, a as u64);
        head_q += q;
        l1 += (emp.pmf(a) - q).abs();
    }
    let tail_q = (1.0 - head_q).max(0.0);
    let tail_p: f64 = (truncation + 1..emp.support_len()).map(|a| emp.pmf(a)).sum();
    l1 += tail_q + tail_p;
    let t = emp.trials() as f64;
    let noise = 0.5
        * (0..emp.support_len())
            .map(|a| {
                let p = emp.pmf(a);
                math::sqrt(2.0 * p * (1.0 - p) / (core::f64::consts::PI * t))
            })
            .sum::<f64>();
    Ok(TvReport {
        tv: 0.5 * l1,
        l1,
        truncation,
        noise,
    })
}

/// `ln((k(k-1))^a / a!)`.
pub fn claim1_log_bound(k: usize, a: u64) -> f64 {
    let rate = (k * k.saturating_sub(1)) as f64;
    if a == 0 {
        return 0.0;
    }
    if rate == 0.0 {
        return f64::NEG_INFINITY;
    }
    a as f64 * math::ln(rate) - math::ln_factorial(a)
}

/// `(k(k-1))^a / a!`, an upper bound on `P[M = a]` for any `n`. Not a pmf:
/// it exceeds 1 for small `a`.
pub fn claim1_bound(k: usize, a: u64) -> f64 {
    math::exp(claim1_log_bound(k, a))
}

/// `(1 + slack) P[Po(k(k-1)) = a]`, valid for `a ≤ n^(3 alpha)`.
pub fn claim2_bound(regime: &AlphaRegime, a: u64, slack: f64) -> Result<f64> {
    if !regime.covers(a as usize) {
        return Err(out_of_regime(format!(
            "a = {a} exceeds n^(3 alpha) = {:.6}",
            regime.a_threshold()
        )));
    }
    if !(slack >= 0.0) {
        return Err(invalid("slack must be nonnegative"));
    }
    Ok((1.0 + slack) * poisson_pmf(PoissonParams::for_trees(regime.k), a))
}

/// One row of the `M` report table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PmfRow {
    pub a: usize,
    pub count: u64,
    pub pmf: f64,
    pub std_error: f64,
    pub poisson: f64,
    pub claim1: f64,
    /// `None` when `a` is outside the regime (or no regime was given).
    pub claim2: Option<f64>,
}

/// Rows for `a = 0 ..= max(largest outcome, truncation point)`.
pub fn pmf_table(emp: &EmpiricalDist, k: usize, regime: Option<&AlphaRegime>, slack: f64) -> Vec<PmfRow> {
    let params = PoissonParams::for_trees(k);
    let last = emp.support_len().saturating_sub(1).max(poisson_truncation(params));
    (0..=last)
        .map(|a| PmfRow {
            a,
            count: emp.count(a),
            pmf: emp.pmf(a),
            std_error: emp.std_error(a),
            poisson: poisson_pmf(params, a as u64),
            claim1: claim1_bound(k, a as u64),
            claim2: regime.and_then(|r| claim2_bound(r, a as u64, slack).ok()),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::make_complete;
    use crate::Error;

    #[test]
    fn single_tree_has_no_overlap() {
        let g = make_complete(9).unwrap();
        for s in 0..20 {
            assert_eq!(sample_mn(&g, 1, s).unwrap(), 0);
        }
        let d = mn_distribution(&g, 1, 500, 3, 4).unwrap();
        assert_eq!(d.count(0), 500);
        assert_eq!(d.trials(), 500);
    }

    #[test]
    fn overlap_range() {
        let g = make_complete(3).unwrap();
        for s in 0..200 {
            let m = sample_mn(&g, 2, s).unwrap();
            assert!(m == 1 || m == 2);
        }
        let g = make_complete(7).unwrap();
        for s in 0..200 {
            assert!(sample_mn(&g, 4, s).unwrap() <= 3 * 6);
        }
    }

    #[test]
    fn triangle_law() {
        // exact: P[M=1] = 2/3, P[M=2] = 1/3
        let g = make_complete(3).unwrap();
        let d = mn_distribution(&g, 2, 100_000, 17, 3).unwrap();
        let se = libm::sqrt(2.0 / 9.0 / 1e5);
        assert!((d.pmf(1) - 2.0 / 3.0).abs() < 4.0 * se, "{}", d.pmf(1));
        assert_eq!(d.count(1) + d.count(2), 100_000);
    }

    #[test]
    fn shards_do_not_change_results() {
        let g = make_complete(20).unwrap();
        let one = mn_distribution(&g, 3, 2000, 5, 1).unwrap();
        let eight = mn_distribution(&g, 3, 2000, 5, 8).unwrap();
        assert_eq!(one, eight);
    }

    #[test]
    fn argument_errors() {
        let disconnected = crate::Graph::empty(3);
        assert_eq!(sample_mn(&disconnected, 2, 0).unwrap_err(), Error::Disconnected);
        let g = make_complete(3).unwrap();
        assert!(mn_distribution(&g, 2, 0, 0, 1).is_err());
        assert!(mn_distribution(&g, 0, 10, 0, 1).is_err());
        assert!(PoissonParams::new(-1.0).is_err());
    }

    #[test]
    fn shard_ranges_partition() {
        let rs = shard_ranges(10, 3);
        assert_eq!(rs, alloc::vec![0..4, 4..7, 7..10]);
        assert_eq!(shard_ranges(2, 4).iter().map(|r| r.end - r.start).sum::<u64>(), 2);
    }

    #[test]
    fn poisson_values() {
        let p0 = PoissonParams::new(0.0).unwrap();
        let p2 = PoissonParams::new(2.0).unwrap();
        assert_eq!(poisson_pmf(p0, 0), 1.0);
        assert_eq!(poisson_pmf(p0, 3), 0.0);
        assert!((poisson_pmf(p2, 2) - 2.0 * libm::exp(-2.0)).abs() < 1e-15);
        assert!((poisson_pmf(p2, 0) - libm::exp(-2.0)).abs() < 1e-15);
        assert_eq!(poisson_truncation(p0), 0);
        let a = poisson_truncation(p2);
        let tail: f64 = (a + 1..200).map(|t| poisson_pmf(p2, t as u64)).sum();
        let tail_before: f64 = (a..200).map(|t| poisson_pmf(p2, t as u64)).sum();
        assert!(tail < TV_TAIL && tail_before >= TV_TAIL, "A = {a}");
    }

    #[test]
    fn tv_examples() {
        let p2 = PoissonParams::new(2.0).unwrap();
        let point = EmpiricalDist::from_counts(alloc::vec![10]);
        let r = tv_distance(&point, p2).unwrap();
        assert!((r.tv - (1.0 - libm::exp(-2.0))).abs() < 1e-12);
        assert!((r.l1 - 2.0 * r.tv).abs() < 1e-15);

        // counts proportional to the truncated pmf
        let a = poisson_truncation(p2);
        let scale = 1e15;
        let counts: Vec<u64> = (0..=a).map(|t| libm::round(poisson_pmf(p2, t as u64) * scale) as u64).collect();
        let r = tv_distance(&EmpiricalDist::from_counts(counts), p2).unwrap();
        assert!(r.tv < 1e-12, "{}", r.tv);

        let k1 = EmpiricalDist::from_counts(alloc::vec![7]);
        assert_eq!(tv_distance(&k1, PoissonParams::for_trees(1)).unwrap().tv, 0.0);
        assert!(tv_distance(&EmpiricalDist::new(), p2).is_err());
    }

    #[test]
    fn claim1_values() {
        assert_eq!(claim1_bound(2, 0), 1.0);
        assert!((claim1_bound(2, 3) - 8.0 / 6.0).abs() < 1e-14);
        assert!((claim1_bound(2, 10) - 1024.0 / 3_628_800.0).abs() < 1e-17);
        assert_eq!(claim1_bound(1, 0), 1.0);
        assert_eq!(claim1_bound(1, 2), 0.0);
    }

    #[test]
    fn claim2_regime() {
        let r = AlphaRegime::new(0.05, 10_000, 2).unwrap();
        assert!((claim2_bound(&r, 0, 0.0).unwrap() - libm::exp(-2.0)).abs() < 1e-15);
        for a in 0..=3 {
            assert!(claim2_bound(&r, a, 0.0).is_ok());
        }
        assert!(matches!(claim2_bound(&r, 5, 0.0), Err(Error::OutOfRegime(_))));
        assert!(matches!(AlphaRegime::new(0.1, 100, 2), Err(Error::OutOfRegime(_))));
        assert!(AlphaRegime::new(0.0, 100, 2).is_err());
        let slack = r.default_slack(1.0);
        assert!((slack - libm::pow(1e4, -0.45)).abs() < 1e-15);
        assert!(!r.k_within(1.0));
        assert!(r.k_within(2.0));
    }
}
