//! Empirical first-order stochastic dominance.
//!
//! `X ⪯ Y` means `Pr(X <= t) >= Pr(Y <= t)` for every `t`. With samples the
//! two CDFs are only known up to the Dvoretzky-Kiefer-Wolfowitz band
//! `eps(m) = sqrt(ln(2 / a) / (2 m))`, which holds simultaneously for all `t`
//! with probability `1 - a`. Each side gets `a = 0.005`, so both bands hold
//! jointly with probability at least 99%, and a breach no larger than the
//! sum of the two bands is attributed to sampling noise.

use super::QueueError;

/// Samples required on each side.
pub const MIN_SAMPLES: usize = 1000;
/// Per-side DKW error probability.
pub const DKW_ALPHA: f64 = 0.005;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominanceReport {
    /// The claimed order survives at every grid point within `margin`.
    pub dominates: bool,
    /// Largest observed breach of the claimed order (0 if none).
    pub max_violation: f64,
    /// Sum of the two DKW half-widths.
    pub margin: f64,
    /// Grid point of the largest breach.
    pub worst_point: f64,
}

pub(crate) fn dkw_epsilon(samples: usize, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * samples as f64)).sqrt()
}

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Empirical CDF of sorted samples at `t`.
fn ecdf(sorted: &[f64], t: f64) -> f64 {
    sorted.partition_point(|&x| x <= t) as f64 / sorted.len() as f64
}

fn check_inputs(a: &[f64], b: &[f64], grid: &[f64]) -> Result<(), QueueError> {
    let got = a.len().min(b.len());
    if got < MIN_SAMPLES {
        return Err(QueueError::TooFewSamples { min: MIN_SAMPLES, got });
    }
    if grid.is_empty() || grid.iter().any(|t| !t.is_finite()) {
        return Err(QueueError::DegenerateGrid);
    }
    Ok(())
}

fn scan(a: &[f64], b: &[f64], grid: &[f64], gap: impl Fn(f64, f64) -> f64) -> DominanceReport {
    let (sa, sb) = (sorted(a), sorted(b));
    let margin = dkw_epsilon(a.len(), DKW_ALPHA) + dkw_epsilon(b.len(), DKW_ALPHA);
    let mut max_violation = 0.0;
    let mut worst_point = grid[0];
    for &t in grid {
        let g = gap(ecdf(&sa, t), ecdf(&sb, t));
        if g > max_violation {
            max_violation = g;
            worst_point = t;
        }
    }
    DominanceReport { dominates: max_violation <= margin, max_violation, margin, worst_point }
}

/// Tests `A ⪯ B` (A is stochastically no larger) on `grid`.
pub fn stochastic_order_check(a: &[f64], b: &[f64], grid: &[f64]) -> Result<DominanceReport, QueueError> {
    check_inputs(a, b, grid)?;
    Ok(scan(a, b, grid, |fa, fb| fb - fa))
}

/// Tests `A ≈ B`: both orders within the same margin.
pub fn equivalence_check(a: &[f64], b: &[f64], grid: &[f64]) -> Result<DominanceReport, QueueError> {
    check_inputs(a, b, grid)?;
    Ok(scan(a, b, grid, |fa, fb| (fa - fb).abs()))
}

/// `points` evaluation points spread over the pooled sample quantiles.
pub fn quantile_grid(a: &[f64], b: &[f64], points: usize) -> Vec<f64> {
    let mut pooled: Vec<f64> = a.iter().chain(b).copied().filter(|x| x.is_finite()).collect();
    if pooled.is_empty() || points == 0 {
        return Vec::new();
    }
    pooled.sort_by(f64::total_cmp);
    let mut grid: Vec<f64> = (0..points)
        .map(|i| pooled[((i as f64 + 0.5) / points as f64 * pooled.len() as f64) as usize])
        .collect();
    grid.dedup();
    grid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{exponential, geometric0, rng_from_seed};

    #[test]
    fn identical_samples_dominate() {
        let xs: Vec<f64> = (0..2000).map(f64::from).collect();
        let r = stochastic_order_check(&xs, &xs, &quantile_grid(&xs, &xs, 50)).unwrap();
        assert!(r.dominates);
        assert!(r.max_violation <= r.margin);
        assert!(equivalence_check(&xs, &xs, &[10.0]).unwrap().dominates);
    }

    #[test]
    fn faster_exponential_is_smaller() {
        let mut rng = rng_from_seed(1);
        let fast: Vec<f64> = (0..20_000).map(|_| exponential(&mut rng, 2.0)).collect();
        let slow: Vec<f64> = (0..20_000).map(|_| exponential(&mut rng, 1.0)).collect();
        let grid = quantile_grid(&fast, &slow, 100);
        assert!(stochastic_order_check(&fast, &slow, &grid).unwrap().dominates);
        let reverse = stochastic_order_check(&slow, &fast, &grid).unwrap();
        assert!(!reverse.dominates);
        assert!(reverse.max_violation > 0.2);
        assert!(!equivalence_check(&fast, &slow, &grid).unwrap().dominates);
    }

    #[test]
    fn geometric_below_exponential() {
        let mut rng = rng_from_seed(2);
        let geo: Vec<f64> = (0..20_000).map(|_| geometric0(&mut rng, 0.3) as f64).collect();
        let exp: Vec<f64> = (0..20_000).map(|_| exponential(&mut rng, 0.3)).collect();
        let grid: Vec<f64> = (0..40).map(f64::from).collect();
        assert!(stochastic_order_check(&geo, &exp, &grid).unwrap().dominates);
    }

    #[test]
    fn rejects_bad_inputs() {
        let xs = vec![1.0; 999];
        let ys = vec![1.0; 1000];
        assert!(matches!(stochastic_order_check(&xs, &ys, &[1.0]), Err(QueueError::TooFewSamples { .. })));
        assert_eq!(stochastic_order_check(&ys, &ys, &[]), Err(QueueError::DegenerateGrid));
        assert_eq!(stochastic_order_check(&ys, &ys, &[f64::NAN]), Err(QueueError::DegenerateGrid));
    }

    #[test]
    fn dkw_width() {
        // sqrt(ln(400) / 20000)
        assert!((dkw_epsilon(10_000, 0.005) - 0.017_306).abs() < 1e-5);
    }
}
