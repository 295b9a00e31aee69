//! Moments and upper tails of the spanning-tree count `X` of `G(n, m)`.
//!
//! A fixed tree with `n - 1` edges appears in `G(n, m)` with probability
//! `(m)_{n-1} / (C(n,2))_{n-1}`, so `E X = n^(n-2) (m)_{n-1} / (C(n,2))_{n-1}`.
//! The `k`-th moment groups `k`-tuples of trees of `K_n` by the overlap `a`
//! of their union, which is where the Monte Carlo law of the overlap
//! statistic enters.

use alloc::format;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{invalid, out_of_regime, Result};
use crate::graph::{gen_gnm, pair_count};
use crate::logvalue::{LogSumExp, LogValue};
use crate::math;
use crate::poisson_limit::TiltedDraw;
use crate::rng::derive_tagged;
use crate::stats::EmpiricalDist;
use crate::tree_count::{cayley_log_count, matrix_tree_log_count};

const GNM_STREAM: u64 = 0x676e_6d00;

/// Default `delta` of the dense regime `delta n² ≤ m ≤ (1 - delta) n²`.
pub const DEFAULT_DELTA: f64 = 0.1;

/// `G(n, m)` parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GnmParams {
    n: usize,
    m: usize,
    delta: f64,
}

impl GnmParams {
    pub fn new(n: usize, m: usize) -> Result<GnmParams> {
        if n == 0 {
            return Err(invalid("n must be positive"));
        }
        if m > pair_count(n) {
            return Err(invalid("m exceeds n(n-1)/2"));
        }
        Ok(GnmParams {
            n,
            m,
            delta: DEFAULT_DELTA,
        })
    }

    /// Parameters with `m = round(p · C(n,2))`.
    pub fn with_density(n: usize, p: f64) -> Result<GnmParams> {
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid("density outside [0, 1]"));
        }
        GnmParams::new(n, libm::round(p * pair_count(n) as f64) as usize)
    }

    pub fn with_delta(mut self, delta: f64) -> Result<GnmParams> {
        if !(delta > 0.0 && delta < 0.5) {
            return Err(invalid("delta outside (0, 1/2)"));
        }
        self.delta = delta;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `m / C(n,2)`.
    pub fn p_m(&self) -> f64 {
        let total = pair_count(self.n);
        if total == 0 {
            0.0
        } else {
            self.m as f64 / total as f64
        }
    }

    /// `delta n² ≤ m ≤ (1 - delta) n²`.
    pub fn in_dense_regime(&self) -> bool {
        let n2 = (self.n * self.n) as f64;
        let m = self.m as f64;
        self.delta * n2 <= m && m <= (1.0 - self.delta) * n2
    }
}

/// How a regime violation is handled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegimePolicy {
    /// Log a warning and continue.
    Warn,
    /// Return [`crate::Error::OutOfRegime`].
    Enforce,
}

/// `ln (N)_l = Σ_{i<l} ln(N - i)`.
pub fn falling_factorial_log(big_n: u64, l: u64) -> Result<LogValue> {
    if l > big_n {
        return Err(invalid(format!("falling factorial ({big_n})_{l} needs l <= N")));
    }
    Ok(LogValue::Ln((0..l).map(|i| math::ln((big_n - i) as f64)).sum()))
}

/// `l ln N - l(l-1)/(2N)`, valid while `l³ ≤ N²`.
pub fn falling_factorial_estimate(big_n: u64, l: u64) -> Result<LogValue> {
    falling_factorial_estimate_within(big_n, l, 1.0)
}

/// As [`falling_factorial_estimate`], accepting `l³ ≤ factor · N²`.
pub fn falling_factorial_estimate_within(big_n: u64, l: u64, factor: f64) -> Result<LogValue> {
    if big_n == 0 {
        return Err(invalid("N must be positive"));
    }
    let (nf, lf) = (big_n as f64, l as f64);
    if lf * lf * lf > factor * nf * nf {
        return Err(out_of_regime(format!("l = {l} too large for N = {big_n} (need l^3 <= N^2)")));
    }
    Ok(LogValue::Ln(lf * math::ln(nf) - lf * (lf - 1.0) / (2.0 * nf)))
}

/// `ln ((m)_l / (C(n,2))_l)`: probability that a fixed `l`-edge set appears
/// in `G(n, m)`. Zero when `l > m`.
fn appearance_log_prob(params: &GnmParams, l: u64) -> LogValue {
    let total = pair_count(params.n) as u64;
    let m = params.m as u64;
    if l > m {
        return LogValue::Zero;
    }
    falling_factorial_log(m, l).expect("l <= m") / falling_factorial_log(total, l).expect("l <= m <= total")
}

/// Exact `E X` for `G(n, m)`.
pub fn expected_count_gnm(params: &GnmParams) -> LogValue {
    let l = (params.n - 1) as u64;
    cayley_log_count(params.n).expect("n >= 1") * appearance_log_prob(params, l)
}

/// `n^(n-2) p_m^(n-1) exp(-(1 - p_m)/p_m)`, the large-`n` form of `E X`.
pub fn expected_count_gnm_asymptotic(params: &GnmParams) -> Result<LogValue> {
    let p = params.p_m();
    if p <= 0.0 {
        return Err(invalid("p_m must be positive"));
    }
    let n = params.n as f64;
    Ok(cayley_log_count(params.n)? * LogValue::Ln((n - 1.0) * math::ln(p) - (1.0 - p) / p))
}

/// A moment estimate in log units, with the standard error of the log
/// (delta method: relative standard error of the linear-scale mean).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentEstimate {
    pub log: LogValue,
    pub se_log: f64,
}

/// Mean of weights `w` (given as logs) under probabilities `probs`, with
/// the standard error of a mean over `trials` iid draws.
fn weighted_mean(weights: &[(f64, LogValue)], trials: u64) -> MomentEstimate {
    let shift = weights
        .iter()
        .filter(|(p, _)| *p > 0.0)
        .filter_map(|(_, w)| w.ln_opt())
        .fold(f64::NEG_INFINITY, f64::max);
    if shift == f64::NEG_INFINITY {
        return MomentEstimate {
            log: LogValue::Zero,
            se_log: 0.0,
        };
    }
    let (mut first, mut second) = (0.0, 0.0);
    for &(p, w) in weights {
        let z = math::exp(w.ln() - shift);
        first += p * z;
        second += p * z * z;
    }
    let t = trials as f64;
    let variance = if trials > 1 {
        ((second - first * first) * t / (t - 1.0)).max(0.0)
    } else {
        0.0
    };
    MomentEstimate {
        log: LogValue::Ln(shift + math::ln(first)),
        se_log: math::sqrt(variance / t) / first,
    }
}

/// `E X^k` through the overlap law of `k` uniform trees of `K_n`:
/// `n^((n-2)k) Σ_a P[M = a] (m)_{(n-1)k-a} / (C(n,2))_{(n-1)k-a}`.
///
/// `mn_dist` must be the empirical overlap law for `K_n` with the same `n`
/// and `k`. Terms with `(n-1)k - a > m` vanish individually. The estimator
/// is a sample mean over the trials of `mn_dist`, and its standard error is
/// computed as such.
pub fn kth_moment_via_ma(params: &GnmParams, k: u32, mn_dist: &EmpiricalDist) -> Result<MomentEstimate> {
    if k == 0 {
        return Err(invalid("k must be positive"));
    }
    if mn_dist.is_empty() {
        return Err(invalid("empty overlap distribution"));
    }
    let edges = ((params.n - 1) as u64) * k as u64;
    let terms: Vec<(f64, LogValue)> = (0..mn_dist.support_len())
        .filter(|&a| mn_dist.count(a) > 0)
        .map(|a| {
            let w = match edges.checked_sub(a as u64) {
                Some(l) => appearance_log_prob(params, l),
                None => LogValue::Zero,
            };
            (mn_dist.pmf(a), w)
        })
        .collect();
    let mean = weighted_mean(&terms, mn_dist.trials());
    Ok(MomentEstimate {
        log: cayley_log_count(params.n)?.powi(k) * mean.log,
        se_log: mean.se_log,
    })
}

/// The tilt `C(n,2)/m` that roughly cancels the growth of the
/// appearance probability in `a`.
pub fn default_tilt(params: &GnmParams) -> f64 {
    if params.m == 0 {
        1.0
    } else {
        (pair_count(params.n) as f64 / params.m as f64).max(1.0)
    }
}

/// `E X^k` through the overlap law, with `P[M = a]` estimated by the
/// importance-sampled draws (see [`crate::poisson_limit::mn_tilted_trials`]).
/// The standard error is that of the sample mean of `ratio · weight(a)`.
pub fn kth_moment_via_ma_tilted(params: &GnmParams, k: u32, draws: &[TiltedDraw]) -> Result<MomentEstimate> {
    if k == 0 {
        return Err(invalid("k must be positive"));
    }
    if draws.is_empty() {
        return Err(invalid("no overlap draws"));
    }
    let edges = ((params.n - 1) as u64) * k as u64;
    let terms: Vec<LogValue> = draws
        .iter()
        .map(|d| match edges.checked_sub(d.a as u64) {
            Some(l) => LogValue::Ln(d.log_ratio) * appearance_log_prob(params, l),
            None => LogValue::Zero,
        })
        .collect();
    let mean = moment_from_log_counts(1, &terms)?;
    Ok(MomentEstimate {
        log: cayley_log_count(params.n)?.powi(k) * mean.log,
        se_log: mean.se_log,
    })
}

/// Seed of the `t`-th `G(n, m)` draw.
pub fn gnm_trial_seed(seed: u64, t: u64) -> u64 {
    derive_tagged(seed, GNM_STREAM, t)
}

/// Log tree counts of the `G(n, m)` draws in `range`.
pub fn gnm_log_counts(params: &GnmParams, seed: u64, range: Range<u64>) -> Vec<LogValue> {
    range
        .map(|t| {
            let g = gen_gnm(params.n, params.m, gnm_trial_seed(seed, t)).expect("validated params");
            matrix_tree_log_count(&g)
        })
        .collect()
}

/// Sample mean of `X^k` from log counts, aggregated with a max shift.
pub fn moment_from_log_counts(k: u32, log_counts: &[LogValue]) -> Result<MomentEstimate> {
    if log_counts.is_empty() {
        return Err(invalid("no samples"));
    }
    let t = log_counts.len() as f64;
    let mut acc = LogSumExp::new();
    for x in log_counts {
        acc.push(x.powi(k));
    }
    let LogValue::Ln(total) = acc.total() else {
        return Ok(MomentEstimate {
            log: LogValue::Zero,
            se_log: 0.0,
        });
    };
    let shift = log_counts.iter().filter_map(|x| x.ln_opt()).fold(f64::NEG_INFINITY, f64::max) * k as f64;
    let (mut first, mut second) = (0.0, 0.0);
    for x in log_counts {
        let z = math::exp(x.powi(k).ln() - shift);
        first += z;
        second += z * z;
    }
    first /= t;
    second /= t;
    let variance = if log_counts.len() > 1 {
        ((second - first * first) * t / (t - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(MomentEstimate {
        log: LogValue::Ln(total - math::ln(t)),
        se_log: math::sqrt(variance / t) / first,
    })
}

/// `E X^k` by direct sampling of `trials` graphs from `G(n, m)`.
pub fn kth_moment_direct_mc(params: &GnmParams, k: u32, trials: u64, seed: u64) -> Result<MomentEstimate> {
    if trials == 0 {
        return Err(invalid("trials must be positive"));
    }
    if k == 0 {
        return Err(invalid("k must be positive"));
    }
    moment_from_log_counts(k, &gnm_log_counts(params, seed, 0..trials))
}

/// Both estimates of `E X^k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentReport {
    pub k: u32,
    pub via_ma: MomentEstimate,
    pub direct: MomentEstimate,
}

impl MomentReport {
    /// `|via_ma - direct|` in units of the combined standard error of the logs.
    /// Two identical estimates are 0 apart even with zero error.
    pub fn discrepancy_sigmas(&self) -> f64 {
        let diff = match (self.via_ma.log, self.direct.log) {
            (LogValue::Zero, LogValue::Zero) => 0.0,
            (a, b) => (a.ln() - b.ln()).abs(),
        };
        if diff == 0.0 {
            return 0.0;
        }
        let se = math::sqrt(self.via_ma.se_log * self.via_ma.se_log + self.direct.se_log * self.direct.se_log);
        diff / se
    }
}

/// Empirical constant `Ĉ = (Ê X^k / (E X)^k)^(1/k)`, from the direct estimate.
pub fn moment_ratio_bound_check(
    params: &GnmParams,
    k: u32,
    report: &MomentReport,
    policy: RegimePolicy,
) -> Result<f64> {
    if k == 0 {
        return Err(invalid("k must be positive"));
    }
    if !params.in_dense_regime() {
        let msg = format!(
            "m = {} outside [{}n², {}n²] for n = {}",
            params.m,
            params.delta,
            1.0 - params.delta,
            params.n
        );
        match policy {
            RegimePolicy::Enforce => return Err(out_of_regime(msg)),
            RegimePolicy::Warn => log::warn!("{msg}"),
        }
    }
    let mean = expected_count_gnm(params);
    if mean.is_zero() || report.direct.log.is_zero() {
        return Err(invalid("tree count is identically zero"));
    }
    Ok(math::exp((report.direct.log.ln() - k as f64 * mean.ln()) / k as f64))
}

/// Markov's inequality on the `k`-th moment: `P[X ≥ K E X] ≤ (C/K)^k`.
pub fn markov_tail_bound(c: f64, big_k: f64, k: u32) -> Result<f64> {
    if !(c > 0.0) {
        return Err(invalid("C must be positive"));
    }
    if !(big_k > c) {
        return Err(invalid("K must exceed C"));
    }
    if k == 0 {
        return Err(invalid("k must be positive"));
    }
    Ok(math::pow(c / big_k, k as f64))
}

/// The tail bound with `K = C e^t` and `k = ⌈ln n⌉`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MarkovTail {
    pub k: u32,
    /// `K / C = e^t`.
    pub ratio: f64,
    /// `(C/K)^k = e^(-t k)`.
    pub exact: f64,
    /// `n^(-t)`, which dominates `exact`.
    pub bound: f64,
}

pub fn markov_tail_at(t: f64, n: usize) -> Result<MarkovTail> {
    if !(t > 0.0) {
        return Err(invalid("t must be positive"));
    }
    if n < 2 {
        return Err(invalid("n must be at least 2"));
    }
    let k = math::ceil(math::ln(n as f64)) as u32;
    let ratio = math::exp(t);
    Ok(MarkovTail {
        k,
        ratio,
        exact: markov_tail_bound(1.0, ratio, k)?,
        bound: math::pow(n as f64, -t),
    })
}

/// Frequency of `{ln X ≥ threshold}` with its binomial standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailFrequency {
    pub hits: u64,
    pub trials: u64,
    pub frequency: f64,
    pub std_error: f64,
}

pub fn tail_frequency(log_counts: &[LogValue], log_threshold: f64) -> TailFrequency {
    let trials = log_counts.len() as u64;
    let hits = log_counts.iter().filter(|x| x.ln() >= log_threshold).count() as u64;
    let frequency = if trials == 0 { 0.0 } else { hits as f64 / trials as f64 };
    let std_error = if trials == 0 {
        0.0
    } else {
        math::sqrt(frequency * (1.0 - frequency) / trials as f64)
    };
    TailFrequency {
        hits,
        trials,
        frequency,
        std_error,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;
    use alloc::vec;

    fn ln(x: f64) -> f64 {
        libm::log(x)
    }

    #[test]
    fn falling_factorials() {
        assert!((falling_factorial_log(5, 3).unwrap().ln() - ln(60.0)).abs() < 1e-14);
        assert_eq!(falling_factorial_log(9, 0).unwrap(), LogValue::ONE);
        assert!((falling_factorial_log(9, 1).unwrap().ln() - ln(9.0)).abs() < 1e-15);
        assert!(falling_factorial_log(3, 4).is_err());
    }

    #[test]
    fn falling_factorial_estimates() {
        for big_n in [1u64, 7, 1000] {
            for l in 0..=1 {
                let exact = falling_factorial_log(big_n, l).unwrap().ln();
                let est = falling_factorial_estimate(big_n, l).unwrap().ln();
                assert!((exact - est).abs() < 1e-12);
            }
        }
        let exact = falling_factorial_log(1_000_000, 1000).unwrap().ln();
        let est = falling_factorial_estimate(1_000_000, 1000).unwrap().ln();
        assert!((exact - est).abs() <= 2e-3);
        assert!(matches!(falling_factorial_estimate(100, 50), Err(Error::OutOfRegime(_))));
        assert!(falling_factorial_estimate_within(100, 50, 13.0).is_ok());
    }

    #[test]
    fn exact_means() {
        let p = GnmParams::new(4, 5).unwrap();
        assert!((expected_count_gnm(&p).ln() - ln(8.0)).abs() < 1e-12);
        let p = GnmParams::new(3, 2).unwrap();
        assert!(expected_count_gnm(&p).ln().abs() < 1e-14);
        for n in 2..12 {
            let p = GnmParams::new(n, n * (n - 1) / 2).unwrap();
            let diff = expected_count_gnm(&p).ln() - cayley_log_count(n).unwrap().ln();
            assert!(diff.abs() < 1e-10);
        }
        assert_eq!(expected_count_gnm(&GnmParams::new(5, 3).unwrap()), LogValue::Zero);
        assert!(GnmParams::new(4, 7).is_err());
    }

    #[test]
    fn asymptotic_mean() {
        let full = GnmParams::new(10, 45).unwrap();
        let diff = expected_count_gnm_asymptotic(&full).unwrap().ln() - expected_count_gnm(&full).ln();
        assert!(diff.abs() < 1e-10);
        let half = GnmParams::new(100, 2475).unwrap();
        let gap100 = (expected_count_gnm_asymptotic(&half).unwrap().ln() - expected_count_gnm(&half).ln()).abs();
        assert!(gap100 <= 10.0 / 100.0, "{gap100}");
        // at p_m = 1/2 the 1/n terms cancel and the gap falls like 1/n²
        let gap = |n: usize, p: f64| {
            let params = GnmParams::with_density(n, p).unwrap();
            (expected_count_gnm_asymptotic(&params).unwrap().ln() - expected_count_gnm(&params).ln()).abs()
        };
        assert!(gap(100, 0.5) / gap(400, 0.5) >= 4.0);
        let ratio = gap(100, 0.3) / gap(400, 0.3);
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
        assert!(gap(100, 0.3) <= 10.0 / 100.0);
        assert!(expected_count_gnm_asymptotic(&GnmParams::new(5, 0).unwrap()).is_err());
    }

    #[test]
    fn moment_identity_on_triangle() {
        // exact overlap law of two trees of K_3: P[M=1] = 2/3, P[M=2] = 1/3
        let params = GnmParams::new(3, 2).unwrap();
        let dist = EmpiricalDist::from_counts(vec![0, 2, 1]);
        let est = kth_moment_via_ma(&params, 2, &dist).unwrap();
        assert!(est.log.ln().abs() < 1e-14);
        let direct = kth_moment_direct_mc(&params, 2, 50, 9).unwrap();
        assert!(direct.log.ln().abs() < 1e-14);
        assert!(direct.se_log < 1e-12);
    }

    #[test]
    fn first_moment_collapses_to_exact_mean() {
        let params = GnmParams::new(12, 40).unwrap();
        let dist = EmpiricalDist::from_counts(vec![1000]);
        let est = kth_moment_via_ma(&params, 1, &dist).unwrap();
        assert!((est.log.ln() - expected_count_gnm(&params).ln()).abs() < 1e-12);
        assert_eq!(est.se_log, 0.0);
    }

    #[test]
    fn complete_graph_moments_are_deterministic() {
        let params = GnmParams::new(7, 21).unwrap();
        let est = kth_moment_direct_mc(&params, 3, 10, 1).unwrap();
        assert!((est.log.ln() - 3.0 * cayley_log_count(7).unwrap().ln()).abs() < 1e-10);
    }

    #[test]
    fn direct_first_moment_matches_exact_mean() {
        let params = GnmParams::new(20, 120).unwrap();
        let est = kth_moment_direct_mc(&params, 1, 10_000, 21).unwrap();
        let exact = expected_count_gnm(&params).ln();
        assert!((est.log.ln() - exact).abs() <= 3.0 * est.se_log, "{} vs {exact} ± {}", est.log.ln(), est.se_log);
    }

    #[test]
    fn ratio_check_regime() {
        let params = GnmParams::new(30, 100).unwrap();
        let est = kth_moment_direct_mc(&params, 1, 200, 2).unwrap();
        let report = MomentReport {
            k: 1,
            via_ma: est,
            direct: est,
        };
        let c = moment_ratio_bound_check(&params, 1, &report, RegimePolicy::Enforce).unwrap();
        assert!((c - 1.0).abs() < 0.05, "{c}");
        let sparse = GnmParams::new(30, 40).unwrap();
        assert!(matches!(
            moment_ratio_bound_check(&sparse, 1, &report, RegimePolicy::Enforce),
            Err(Error::OutOfRegime(_))
        ));
        assert!(moment_ratio_bound_check(&sparse, 1, &report, RegimePolicy::Warn).is_ok());
    }

    #[test]
    fn markov_bounds() {
        let n = 100usize;
        let k = libm::ceil(ln(n as f64)) as u32;
        let b = markov_tail_bound(1.0, libm::exp(1.0), k).unwrap();
        assert!(b <= 1.0 / n as f64 && b >= 1.0 / (n as f64 * libm::exp(1.0)));
        assert!(markov_tail_bound(1.0, 2.0, 0).is_err());
        assert!(markov_tail_bound(2.0, 2.0, 3).is_err());
        let at = markov_tail_at(2.0, 100).unwrap();
        assert_eq!(at.k, 5);
        assert!((at.bound - 1e-4).abs() < 1e-18);
        assert!(at.exact <= at.bound);
    }

    #[test]
    fn tail_frequency_counts() {
        let xs = [LogValue::Ln(1.0), LogValue::Ln(3.0), LogValue::Zero, LogValue::Ln(2.0)];
        let f = tail_frequency(&xs, 2.0);
        assert_eq!((f.hits, f.trials), (2, 4));
        assert_eq!(f.frequency, 0.5);
    }
}
