//! Summaries of trial batches: stopping-time estimates, log-log scaling
//! fits, growth-model comparison and goodness-of-fit tests.

use statrs::distribution::{ChiSquared, ContinuousCDF, StudentsT};
use thiserror::Error;

use crate::gossip::TrialResult;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("no samples")]
    Empty,
    #[error("{count} of {trials} trials hit the timeslot cap ({cap} timeslots); raise --max-timeslots")]
    Capped { count: usize, trials: usize, cap: u64 },
    #[error("trial reports n = {got}, expected {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("values must be positive and finite, got {0}")]
    NonPositive(f64),
    #[error("duplicate size n = {0}")]
    DuplicateSize(f64),
    #[error("scaling points need n >= 8, got {0}")]
    SizeTooSmall(usize),
    #[error("{0}")]
    Parameter(String),
}

/// Stopping-time summary of one batch. `hp_*` is the empirical
/// `(1 - 1/n)`-quantile, the surrogate for the high-probability time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoppingEstimate {
    pub mean_t: f64,
    pub mean_r: f64,
    pub hp_t: f64,
    pub hp_r: f64,
    pub trials: usize,
    /// Standard error of `mean_t`; divide by `n` for rounds.
    pub stderr_mean: f64,
}

/// Rank (1-based) of the order statistic used for the `1 - 1/n` quantile:
/// `ceil((1 - 1/n) * trials)`, at least 1.
pub fn hp_index(trials: usize, n: usize) -> usize {
    let n = n.max(1);
    ((trials * (n - 1)).div_ceil(n)).max(1)
}

/// Summarizes stopping times (in timeslots) of a batch on `n` nodes.
pub fn estimate_times(times: &[f64], n: usize) -> Result<StoppingEstimate, StatsError> {
    if times.is_empty() {
        return Err(StatsError::Empty);
    }
    if n == 0 {
        return Err(StatsError::Parameter("n must be positive".into()));
    }
    let k = times.len() as f64;
    let mean = times.iter().sum::<f64>() / k;
    let stderr_mean = if times.len() > 1 {
        let var = times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (k - 1.0);
        (var / k).sqrt()
    } else {
        0.0
    };
    let mut sorted = times.to_vec();
    sorted.sort_by(f64::total_cmp);
    let hp = sorted[hp_index(sorted.len(), n) - 1];
    let nf = n as f64;
    Ok(StoppingEstimate {
        mean_t: mean,
        mean_r: mean / nf,
        hp_t: hp,
        hp_r: hp / nf,
        trials: times.len(),
        stderr_mean,
    })
}

/// Summarizes a gossip batch. Capped trials make the estimate meaningless
/// and are rejected.
pub fn estimate_stopping(results: &[TrialResult], n: usize) -> Result<StoppingEstimate, StatsError> {
    if results.is_empty() {
        return Err(StatsError::Empty);
    }
    if let Some(r) = results.iter().find(|r| r.n != n) {
        return Err(StatsError::SizeMismatch { expected: n, got: r.n });
    }
    let capped: Vec<&TrialResult> = results.iter().filter(|r| r.capped).collect();
    if let Some(first) = capped.first() {
        return Err(StatsError::Capped { count: capped.len(), trials: results.len(), cap: first.t });
    }
    let times: Vec<f64> = results.iter().map(|r| r.t as f64).collect();
    estimate_times(&times, n)
}

/// Ordinary least squares fit of `ln value = intercept + slope * ln n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLogFit {
    pub slope: f64,
    /// 95% confidence interval for the slope (Student t, `k - 2` degrees of
    /// freedom).
    pub ci: (f64, f64),
    pub intercept: f64,
    pub residual_ss: f64,
}

pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Result<LogLogFit, StatsError> {
    if points.len() < 3 {
        return Err(StatsError::TooFewPoints { need: 3, got: points.len() });
    }
    for &(n, v) in points {
        for x in [n, v] {
            if !(x > 0.0 && x.is_finite()) {
                return Err(StatsError::NonPositive(x));
            }
        }
    }
    let mut ns: Vec<f64> = points.iter().map(|p| p.0).collect();
    ns.sort_by(f64::total_cmp);
    if let Some(w) = ns.windows(2).find(|w| w[0] == w[1]) {
        return Err(StatsError::DuplicateSize(w[0]));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual_ss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let df = k - 2.0;
    let se = (residual_ss / df / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, df)
        .map_err(|e| StatsError::Parameter(e.to_string()))?
        .inverse_cdf(0.975);
    Ok(LogLogFit { slope, ci: (slope - t * se, slope + t * se), intercept, residual_ss })
}

/// Mean-rounds scaling over several graph sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub points: Vec<(usize, StoppingEstimate)>,
    pub slope: f64,
    pub slope_ci: (f64, f64),
    pub intercept: f64,
}

impl ScalingReport {
    /// Fits `mean_r` against `n`. Needs three distinct sizes, each `>= 8`.
    pub fn new(mut points: Vec<(usize, StoppingEstimate)>) -> Result<Self, StatsError> {
        if let Some(&(n, _)) = points.iter().find(|(n, _)| *n < 8) {
            return Err(StatsError::SizeTooSmall(n));
        }
        points.sort_by_key(|p| p.0);
        let xy: Vec<(f64, f64)> = points.iter().map(|(n, e)| (*n as f64, e.mean_r)).collect();
        let fit = fit_loglog_slope(&xy)?;
        Ok(Self { points, slope: fit.slope, slope_ci: fit.ci, intercept: fit.intercept })
    }
}

/// One-parameter fits `value = c * f(n)` for `f(n) = n` and `f(n) = n ln n`,
/// done in log space so every size weighs the same.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthComparison {
    pub c_linear: f64,
    pub rss_linear: f64,
    pub c_nlogn: f64,
    pub rss_nlogn: f64,
}

impl GrowthComparison {
    pub fn prefers_nlogn(&self) -> bool {
        self.rss_nlogn < self.rss_linear
    }
}

fn fit_scale(points: &[(f64, f64)], f: impl Fn(f64) -> f64) -> (f64, f64) {
    let logs: Vec<f64> = points.iter().map(|&(n, v)| v.ln() - f(n).ln()).collect();
    let lc = logs.iter().sum::<f64>() / logs.len() as f64;
    (lc.exp(), logs.iter().map(|d| (d - lc).powi(2)).sum())
}

pub fn compare_growth_models(points: &[(f64, f64)]) -> Result<GrowthComparison, StatsError> {
    if points.len() < 2 {
        return Err(StatsError::TooFewPoints { need: 2, got: points.len() });
    }
    for &(n, v) in points {
        if !(n > 1.0 && v > 0.0 && v.is_finite()) {
            return Err(StatsError::NonPositive(if n > 1.0 { v } else { n }));
        }
    }
    let (c_linear, rss_linear) = fit_scale(points, |n| n);
    let (c_nlogn, rss_nlogn) = fit_scale(points, |n| n * n.ln());
    Ok(GrowthComparison { c_linear, rss_linear, c_nlogn, rss_nlogn })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    /// Bins after pooling, as `(observed, expected)` counts.
    pub bins: Vec<(u64, f64)>,
}

/// Pearson goodness-of-fit of `observed` counts against cell
/// probabilities `probs` (same length, summing to 1). Adjacent cells are
/// pooled left to right until each expected count reaches 5.
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> Result<ChiSquareResult, StatsError> {
    if observed.len() != probs.len() || observed.is_empty() {
        return Err(StatsError::Parameter("observed and probabilities must have equal nonzero length".into()));
    }
    let total_p: f64 = probs.iter().sum();
    if probs.iter().any(|&p| !(0.0..=1.0).contains(&p)) || (total_p - 1.0).abs() > 1e-9 {
        return Err(StatsError::Parameter(format!("cell probabilities must sum to 1, got {total_p}")));
    }
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return Err(StatsError::Empty);
    }
    let mut bins: Vec<(u64, f64)> = Vec::new();
    let mut cur = (0u64, 0.0f64);
    for (&o, &p) in observed.iter().zip(probs) {
        cur.0 += o;
        cur.1 += p * total as f64;
        if cur.1 >= 5.0 {
            bins.push(cur);
            cur = (0, 0.0);
        }
    }
    if cur.1 > 0.0 || cur.0 > 0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += cur.0;
                last.1 += cur.1;
            }
            None => bins.push(cur),
        }
    }
    if bins.len() < 2 {
        return Err(StatsError::TooFewPoints { need: 2, got: bins.len() });
    }
    let statistic: f64 = bins.iter().map(|&(o, e)| (o as f64 - e).powi(2) / e).sum();
    let df = bins.len() - 1;
    let p_value = ChiSquared::new(df as f64)
        .map_err(|e| StatsError::Parameter(e.to_string()))?
        .sf(statistic);
    Ok(ChiSquareResult { statistic, df, p_value, bins })
}

/// Standard deviation of an empirical frequency with success probability
/// `p` over `samples` draws.
pub fn binomial_sigma(p: f64, samples: usize) -> f64 {
    (p * (1.0 - p) / samples as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial(n: usize, t: u64, capped: bool) -> TrialResult {
        TrialResult {
            n,
            t,
            per_node_t: vec![Some(t); n],
            messages_sent: 0,
            helpful_received: 0,
            helpful_node_transmissions: 0,
            capped,
            final_ranks: vec![n; n],
            trace: None,
        }
    }

    #[test]
    fn constant_sample() {
        let rs: Vec<_> = (0..7).map(|_| trial(4, 12, false)).collect();
        let e = estimate_stopping(&rs, 4).unwrap();
        assert_eq!((e.mean_t, e.hp_t, e.stderr_mean, e.trials), (12.0, 12.0, 0.0, 7));
        assert_eq!((e.mean_r, e.hp_r), (3.0, 3.0));
    }

    #[test]
    fn hp_is_ceiling_order_statistic() {
        let rs: Vec<_> = (1..=100).rev().map(|t| trial(10, t, false)).collect();
        assert_eq!(estimate_stopping(&rs, 10).unwrap().hp_t, 90.0);
        assert_eq!(hp_index(100, 10), 90);
        assert_eq!(hp_index(101, 10), 91);
        assert_eq!(hp_index(1, 1), 1);
        assert_eq!(hp_index(3, 2), 2);
    }

    #[test]
    fn rejects_empty_and_capped() {
        assert_eq!(estimate_stopping(&[], 4), Err(StatsError::Empty));
        let rs = vec![trial(4, 10, false), trial(4, 99, true)];
        let err = estimate_stopping(&rs, 4).unwrap_err();
        assert_eq!(err, StatsError::Capped { count: 1, trials: 2, cap: 99 });
        assert!(err.to_string().contains("99"));
        assert!(matches!(estimate_stopping(&rs[..1], 5), Err(StatsError::SizeMismatch { .. })));
    }

    #[test]
    fn stderr_of_two_points() {
        let e = estimate_times(&[1.0, 3.0], 2).unwrap();
        // sample sd sqrt(2), over sqrt(2)
        assert!((e.stderr_mean - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exact_power_laws() {
        let sq: Vec<_> = [8.0, 16.0, 32.0].iter().map(|&n: &f64| (n, n * n)).collect();
        let f = fit_loglog_slope(&sq).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12);
        assert!((f.ci.0 - 2.0).abs() < 1e-6 && (f.ci.1 - 2.0).abs() < 1e-6);
        let lin: Vec<_> = [8.0, 16.0, 32.0, 64.0].iter().map(|&n: &f64| (n, 7.0 * n)).collect();
        let f = fit_loglog_slope(&lin).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-12);
        assert!((f.intercept - 7f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn nlogn_slope_window() {
        let pts: Vec<_> = [64.0, 128.0, 256.0, 512.0].iter().map(|&n: &f64| (n, n * n.ln())).collect();
        let s = fit_loglog_slope(&pts).unwrap().slope;
        // secants 1 + log2(ln 2n / ln n) range over 1.17 .. 1.23; OLS value from numpy
        assert!(s > 1.0 && s < 1.35, "{s}");
        assert!((s - 1.194_753_26).abs() < 1e-8, "{s}");
    }

    #[test]
    fn fit_rejects_bad_points() {
        assert!(matches!(fit_loglog_slope(&[(8.0, 1.0), (16.0, 2.0)]), Err(StatsError::TooFewPoints { .. })));
        assert!(matches!(
            fit_loglog_slope(&[(8.0, 1.0), (16.0, 0.0), (32.0, 1.0)]),
            Err(StatsError::NonPositive(_))
        ));
        assert!(matches!(
            fit_loglog_slope(&[(8.0, 1.0), (8.0, 2.0), (32.0, 1.0)]),
            Err(StatsError::DuplicateSize(_))
        ));
    }

    #[test]
    fn scaling_report_rules() {
        let e = |r: f64| StoppingEstimate { mean_t: r, mean_r: r, hp_t: r, hp_r: r, trials: 1, stderr_mean: 0.0 };
        assert!(matches!(
            ScalingReport::new(vec![(4, e(1.0)), (8, e(2.0)), (16, e(4.0))]),
            Err(StatsError::SizeTooSmall(4))
        ));
        let r = ScalingReport::new(vec![(32, e(4.0)), (8, e(1.0)), (16, e(2.0))]).unwrap();
        assert!((r.slope - 1.0).abs() < 1e-12);
        assert_eq!(r.points[0].0, 8);
    }

    #[test]
    fn growth_models() {
        let pts: Vec<_> = [16.0, 32.0, 64.0, 128.0].iter().map(|&n: &f64| (n, 2.0 * n * n.ln())).collect();
        let g = compare_growth_models(&pts).unwrap();
        assert!(g.prefers_nlogn());
        assert!((g.c_nlogn - 2.0).abs() < 1e-12 && g.rss_nlogn < 1e-20);
        let lin: Vec<_> = [16.0, 32.0, 64.0].iter().map(|&n: &f64| (n, 3.0 * n)).collect();
        assert!(!compare_growth_models(&lin).unwrap().prefers_nlogn());
    }

    #[test]
    fn chi_square_exact_fit_and_pooling() {
        let g = chi_square_gof(&[50, 30, 20], &[0.5, 0.3, 0.2]).unwrap();
        assert_eq!((g.statistic, g.df), (0.0, 2));
        assert!((g.p_value - 1.0).abs() < 1e-12);
        // last two cells expect 3 and 2 counts and pool into one.
        let g = chi_square_gof(&[95, 3, 2], &[0.95, 0.03, 0.02]).unwrap();
        assert_eq!(g.bins, vec![(95, 95.0), (5, 5.0)]);
        assert!(chi_square_gof(&[1, 2], &[0.5, 0.4]).is_err());
    }

    #[test]
    fn chi_square_p_value_matches_table() {
        // 9.210 is the 99% point of chi-square with 2 degrees of freedom.
        let obs = [100u64, 100, 100];
        let s = chi_square_gof(&obs, &[1.0 / 3.0; 3]).unwrap();
        assert!(s.p_value > 0.999);
        let p = ChiSquared::new(2.0).unwrap().sf(9.2103);
        assert!((p - 0.01).abs() < 1e-5);
    }

    #[test]
    fn binomial_sigma_value() {
        assert!((binomial_sigma(0.5, 100) - 0.05).abs() < 1e-15);
        assert_eq!(binomial_sigma(1.0, 10), 0.0);
    }
}
