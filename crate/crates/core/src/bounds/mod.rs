//! Closed-form tail bounds and the samplers used to test them.
//!
//! Every bound is returned as a probability clamped to `[0, 1]`. Lower
//! bounds on `Pr(event)` and upper bounds on `Pr(event)` are named after the
//! event they describe; which direction applies is stated per function.
//! Transcendental functions come from `libm` so printed values match across
//! platforms.

use rand_core::RngCore;
use thiserror::Error;

use crate::rng::{exponential, geometric0, uniform_index};

mod check;

pub use check::{
    jackson_lengths, run_check, BoundCheck, CheckRow, Direction, COUPON_REL_TOL, JACKSON_CUSTOMERS,
    JACKSON_OBSERVE_AT, SIGMAS,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("alpha must exceed 1, got {0}")]
    Alpha(f64),
    #[error("probability must lie in (0, 1], got {0}")]
    Probability(f64),
    #[error("k must satisfy 0 < k < m / p (k = {k}, m = {m}, p = {p})")]
    Threshold { k: u64, m: u64, p: f64 },
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("rho must lie in [0, 1), got {0}")]
    Load(f64),
}

fn clamp01(x: f64) -> f64 {
    if x.is_nan() {
        0.0
    } else {
        x.clamp(0.0, 1.0)
    }
}

fn check_alpha(alpha: f64) -> Result<(), BoundError> {
    if alpha > 1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(BoundError::Alpha(alpha))
    }
}

fn check_p(p: f64) -> Result<(), BoundError> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(BoundError::Probability(p))
    }
}

/// Lower bound on `Pr(Y < alpha * E[Y])` for `Y` a sum of `n` i.i.d.
/// exponentials: `1 - (2 e^{-alpha/2})^n`.
pub fn exp_sum_below_bound(n: u32, alpha: f64) -> Result<f64, BoundError> {
    check_alpha(alpha)?;
    let base = 2.0 * libm::exp(-alpha / 2.0);
    Ok(clamp01(1.0 - libm::pow(base, f64::from(n))))
}

/// Lower bound on `Pr(X > k)` for `X` the number of independent trials with
/// success probability `p` needed to collect `m` successes:
/// `1 - (m / (e^{(m - kp)/m} k p))^{-m}`, evaluated as
/// `1 - (x e^{1 - x})^m` with `x = kp / m`.
pub fn geom_sum_exceeds_bound(m: u64, k: u64, p: f64) -> Result<f64, BoundError> {
    check_p(p)?;
    if m == 0 {
        return Err(BoundError::NonPositive("m"));
    }
    let x = k as f64 * p / m as f64;
    if k == 0 || x >= 1.0 {
        return Err(BoundError::Threshold { k, m, p });
    }
    let log_term = m as f64 * (libm::log(x) + 1.0 - x);
    Ok(clamp01(1.0 - libm::exp(log_term)))
}

/// Upper bound on `Pr(X >= 2 n alpha)` for `X` a sum of `n` independent
/// trial counts with success probability at least 1/2: `(2^{1.5 - alpha})^n`.
pub fn fair_geom_sum_tail_bound(n: u32, alpha: f64) -> Result<f64, BoundError> {
    check_alpha(alpha)?;
    Ok(clamp01(libm::exp2((1.5 - alpha) * f64::from(n))))
}

/// Expected draws to collect all `n` coupons: `n * H_n`.
pub fn coupon_expectation(n: u64) -> f64 {
    let h: f64 = (1..=n).rev().map(|i| 1.0 / i as f64).sum();
    n as f64 * h
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeomExpCdf {
    /// `Pr(G <= x)` for `G` counting failures before the first success.
    pub geom_cdf: f64,
    /// `Pr(E <= x)` for `E ~ Exp(p)`.
    pub exp_cdf: f64,
}

/// Both CDFs at `x`; the geometric one is never below the exponential one.
pub fn geom_exp_cdf_gap(p: f64, x: f64) -> Result<GeomExpCdf, BoundError> {
    check_p(p)?;
    if !(x >= 0.0) {
        return Err(BoundError::NonPositive("x"));
    }
    let geom_cdf = 1.0 - libm::pow(1.0 - p, x.floor() + 1.0);
    let exp_cdf = -libm::expm1(-p * x);
    Ok(GeomExpCdf { geom_cdf, exp_cdf })
}

/// Upper bounds on the two tails of a node's action count over `k` rounds
/// of the asynchronous model: `(Pr(Y <= k/2), Pr(Y >= 3k/2))` are at most
/// `(e^{-k/8}, e^{-k/12})`.
pub fn action_count_tail_bounds(k: f64) -> Result<(f64, f64), BoundError> {
    if !(k > 0.0) {
        return Err(BoundError::NonPositive("k"));
    }
    Ok((libm::exp(-k / 8.0), libm::exp(-k / 12.0)))
}

/// Lower bound on `Pr(t < 4 alpha n / mu)` for the time a tree of `n`
/// exponential servers with rate `mu`, one customer each, takes to drain:
/// `1 - 2 (2 e^{-alpha/2})^n`.
pub fn tree_drain_bound(n: u32, alpha: f64) -> Result<f64, BoundError> {
    check_alpha(alpha)?;
    let base = 2.0 * libm::exp(-alpha / 2.0);
    Ok(clamp01(1.0 - 2.0 * libm::pow(base, f64::from(n))))
}

/// Equilibrium probability that an M/M/1 queue with load `rho` holds `k`
/// customers: `rho^k (1 - rho)`.
pub fn stationary_queue_pmf(rho: f64, k: u64) -> Result<f64, BoundError> {
    if !(0.0..1.0).contains(&rho) {
        return Err(BoundError::Load(rho));
    }
    Ok(libm::pow(rho, k as f64) * (1.0 - rho))
}

/// Sum of `n` exponentials with rate `rate`.
pub fn sample_exp_sum<R: RngCore + ?Sized>(rng: &mut R, n: u32, rate: f64) -> f64 {
    (0..n).map(|_| exponential(rng, rate)).sum()
}

/// Number of trials with success probability `p` needed for `m` successes.
pub fn sample_trials_for_successes<R: RngCore + ?Sized>(rng: &mut R, m: u64, p: f64) -> u64 {
    (0..m).map(|_| geometric0(rng, p) + 1).sum()
}

/// Uniform draws from `n` coupons until every coupon has been seen.
pub fn sample_coupon_collection<R: RngCore + ?Sized>(rng: &mut R, n: usize) -> u64 {
    let mut seen = vec![false; n];
    let mut missing = n;
    let mut draws = 0;
    while missing > 0 {
        draws += 1;
        let c = uniform_index(rng, n);
        if !seen[c] {
            seen[c] = true;
            missing -= 1;
        }
    }
    draws
}

/// Actions of one fixed node during `k` rounds (`k n` timeslots) of the
/// asynchronous model on `n` nodes.
pub fn sample_action_count<R: RngCore + ?Sized>(rng: &mut R, n: usize, k: u64) -> u64 {
    (0..k * n as u64).filter(|_| uniform_index(rng, n) == 0).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn exp_sum_bound_values() {
        // (2/e)^10 evaluated with 30-digit arithmetic.
        let v = exp_sum_below_bound(10, 2.0).unwrap();
        assert!((v - (1.0 - 0.046_489_528_076_784_49)).abs() < 1e-15, "{v}");
        assert!((exp_sum_below_bound(400, 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(exp_sum_below_bound(10, 1.0), Err(BoundError::Alpha(1.0)));
        // base above 1 gives a negative raw value
        assert_eq!(exp_sum_below_bound(5, 1.1).unwrap(), 0.0);
    }

    #[test]
    fn geom_sum_bound_closed_form() {
        // x = kp/m = 1/2 for m = n/2, k = n^3/16, p = 4/n^2
        for n in [8u64, 16, 32, 64] {
            let v = geom_sum_exceeds_bound(n / 2, n * n * n / 16, 4.0 / (n * n) as f64).unwrap();
            let half = (0.5f64.ln() + 0.5) * n as f64 / 2.0;
            assert!((v - (1.0 - half.exp())).abs() < 1e-12);
            let sqrt_e_over_2 = 0.5f64 * 0.5f64.exp();
            assert!((v - (1.0 - sqrt_e_over_2.powf(n as f64 / 2.0))).abs() < 1e-12);
        }
        // m = 8, k = 40, p = 0.1: 1 - (e^{1/2} / 2)^8 = 1 - e^4 / 256
        let v = geom_sum_exceeds_bound(8, 40, 0.1).unwrap();
        assert!((v - (1.0 - 4f64.exp() / 256.0)).abs() < 1e-14);
        assert!(geom_sum_exceeds_bound(8, 80, 0.1).is_err());
        assert!(geom_sum_exceeds_bound(8, 0, 0.1).is_err());
        assert!(geom_sum_exceeds_bound(8, 1, 0.0).is_err());
    }

    #[test]
    fn fair_sum_bound_values() {
        assert_eq!(fair_geom_sum_tail_bound(10, 2.0).unwrap(), 1.0 / 32.0);
        assert_eq!(fair_geom_sum_tail_bound(7, 1.5).unwrap(), 1.0);
        assert_eq!(fair_geom_sum_tail_bound(7, 1.2).unwrap(), 1.0);
        assert!(fair_geom_sum_tail_bound(7, 0.5).is_err());
    }

    #[test]
    fn coupon_values() {
        assert_eq!(coupon_expectation(1), 1.0);
        assert!((coupon_expectation(3) - 5.5).abs() < 1e-15);
        assert_eq!(coupon_expectation(0), 0.0);
    }

    #[test]
    fn cdf_gap_values() {
        let g = geom_exp_cdf_gap(0.5, 1.0).unwrap();
        assert_eq!(g.geom_cdf, 0.75);
        assert!((g.exp_cdf - (1.0 - (-0.5f64).exp())).abs() < 1e-16);
        let z = geom_exp_cdf_gap(0.3, 0.0).unwrap();
        assert!((z.geom_cdf - 0.3).abs() < 1e-16);
        assert_eq!(z.exp_cdf, 0.0);
        for x in [0.0, 0.5, 3.0, 100.0] {
            assert_eq!(geom_exp_cdf_gap(1.0, x).unwrap().geom_cdf, 1.0);
        }
        assert!(geom_exp_cdf_gap(0.0, 1.0).is_err());
        assert!(geom_exp_cdf_gap(0.5, -1.0).is_err());
    }

    #[test]
    fn tree_bound_and_pmf() {
        let v = tree_drain_bound(16, 2.0).unwrap();
        assert!((v - (1.0 - 2.0 * (2.0 / std::f64::consts::E).powi(16))).abs() < 1e-15);
        assert_eq!(tree_drain_bound(2, 1.5).unwrap(), 0.0);
        assert_eq!(stationary_queue_pmf(0.5, 2).unwrap(), 0.125);
        assert!(stationary_queue_pmf(1.0, 0).is_err());
        let (lo, hi) = action_count_tail_bounds(24.0).unwrap();
        assert!((lo - (-3f64).exp()).abs() < 1e-16 && (hi - (-2f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn samplers_have_right_means() {
        let mut rng = rng_from_seed(11);
        let k = 20_000;
        let m: f64 = (0..k).map(|_| sample_trials_for_successes(&mut rng, 4, 0.25) as f64).sum::<f64>() / k as f64;
        assert!((m - 16.0).abs() < 0.3, "{m}");
        let c: f64 = (0..k).map(|_| sample_coupon_collection(&mut rng, 5) as f64).sum::<f64>() / k as f64;
        assert!((c - coupon_expectation(5)).abs() < 0.2, "{c}");
        let a: f64 = (0..2000).map(|_| sample_action_count(&mut rng, 8, 10) as f64).sum::<f64>() / 2000.0;
        assert!((a - 10.0).abs() < 0.3, "{a}");
        let e: f64 = (0..k).map(|_| sample_exp_sum(&mut rng, 3, 2.0)).sum::<f64>() / k as f64;
        assert!((e - 1.5).abs() < 0.03, "{e}");
    }
}
