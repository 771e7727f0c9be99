//! Monte Carlo comparison of each closed-form bound with its empirical tail
//! over a fixed grid of parameter points.

use std::fmt;
use std::str::FromStr;

use super::*;
use crate::parallel::par_map_indexed;
use crate::queue::{run_queue_trial, QueueNetwork};
use crate::rng::{mix_seed, rng_from_seed};
use crate::stats::binomial_sigma;

/// Allowed relative error of the simulated coupon-collection mean.
pub const COUPON_REL_TOL: f64 = 0.02;
/// Width of the sampling band, in binomial standard deviations.
pub const SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundCheck {
    ExpSum,
    GeomSum,
    FairGeomSum,
    Coupon,
    GeomExp,
    ActionCount,
    Jackson,
}

impl BoundCheck {
    pub const ALL: [BoundCheck; 7] = [
        BoundCheck::ExpSum,
        BoundCheck::GeomSum,
        BoundCheck::FairGeomSum,
        BoundCheck::Coupon,
        BoundCheck::GeomExp,
        BoundCheck::ActionCount,
        BoundCheck::Jackson,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundCheck::ExpSum => "exp-sum",
            BoundCheck::GeomSum => "geom-sum",
            BoundCheck::FairGeomSum => "fair-geom-sum",
            BoundCheck::Coupon => "coupon",
            BoundCheck::GeomExp => "geomexp",
            BoundCheck::ActionCount => "action-count",
            BoundCheck::Jackson => "jackson",
        }
    }
}

impl fmt::Display for BoundCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundCheck {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let names: Vec<&str> = Self::ALL.iter().map(|c| c.name()).collect();
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown check '{s}' (expected one of {})", names.join(", ")))
    }
}

/// How the empirical value must relate to the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `empirical >= bound - 3 sigma`
    Lower,
    /// `empirical <= bound + 3 sigma`
    Upper,
    /// `|empirical - bound| <= 3 sigma`
    TwoSided,
    /// `|empirical - bound| <= COUPON_REL_TOL * bound`
    Relative,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Lower => "lower",
            Direction::Upper => "upper",
            Direction::TwoSided => "two-sided",
            Direction::Relative => "relative",
        }
    }

    fn holds(self, bound: f64, empirical: f64, sigma: f64) -> bool {
        match self {
            Direction::Lower => empirical >= bound - SIGMAS * sigma,
            Direction::Upper => empirical <= bound + SIGMAS * sigma,
            Direction::TwoSided => (empirical - bound).abs() <= SIGMAS * sigma,
            Direction::Relative => (empirical - bound).abs() <= COUPON_REL_TOL * bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub check: BoundCheck,
    /// Parameter point, e.g. `n=10 alpha=2`.
    pub params: String,
    pub bound: f64,
    pub empirical: f64,
    pub sigma: f64,
    pub direction: Direction,
    pub holds: bool,
}

fn row(check: BoundCheck, params: String, bound: f64, empirical: f64, sigma: f64, direction: Direction) -> CheckRow {
    let holds = direction.holds(bound, empirical, sigma);
    CheckRow { check, params, bound, empirical, sigma, direction, holds }
}

fn frequency(samples: usize, seed: u64, mut hit: impl FnMut(&mut crate::rng::SimRng) -> bool) -> f64 {
    let mut rng = rng_from_seed(seed);
    (0..samples).filter(|_| hit(&mut rng)).count() as f64 / samples as f64
}

/// Time at which the warmed M/M/1 queue is observed.
pub const JACKSON_OBSERVE_AT: f64 = 20.0;
/// Poisson customers fed to the warmed queue; enough that the stream is
/// still running at the observation time.
pub const JACKSON_CUSTOMERS: u32 = 40;

/// Queue length at [`JACKSON_OBSERVE_AT`] of a warmed M/M/1 queue with
/// `mu = 1`, one per trial.
pub fn jackson_lengths(rho: f64, trials: usize, seed: u64, workers: usize) -> Result<Vec<usize>, BoundError> {
    let net = QueueNetwork::mm1_warm(rho, 1.0, JACKSON_CUSTOMERS).map_err(|_| BoundError::Load(rho))?;
    par_map_indexed(trials, workers, |k| {
        run_queue_trial(&net, mix_seed(seed, k as u64), true)
            .queue_length_at(0, JACKSON_OBSERVE_AT)
            .unwrap_or(0)
    })
    .map_err(|_| BoundError::NonPositive("workers"))
}

fn point_rows(check: BoundCheck, point: usize, samples: usize, seed: u64) -> Vec<CheckRow> {
    let s = mix_seed(seed, point as u64);
    match check {
        BoundCheck::ExpSum => {
            let (n, alpha) = [(4, 2.0), (8, 2.0), (10, 2.0), (16, 1.6), (6, 2.5), (10, 3.0)][point];
            let bound = exp_sum_below_bound(n, alpha).expect("grid alpha > 1");
            let emp = frequency(samples, s, |r| sample_exp_sum(r, n, 1.0) < alpha * n as f64);
            vec![row(check, format!("n={n} alpha={alpha}"), bound, emp, binomial_sigma(bound, samples), Direction::Lower)]
        }
        BoundCheck::GeomSum => {
            let (m, k, p) = [(8, 40, 0.1), (4, 20, 0.1), (8, 20, 0.2), (16, 100, 0.1), (2, 8, 0.125), (8, 256, 1.0 / 64.0)][point];
            let bound = geom_sum_exceeds_bound(m, k, p).expect("grid keeps k < m / p");
            let emp = frequency(samples, s, |r| sample_trials_for_successes(r, m, p) > k);
            vec![row(check, format!("m={m} k={k} p={p}"), bound, emp, binomial_sigma(bound, samples), Direction::Lower)]
        }
        BoundCheck::FairGeomSum => {
            let (n, alpha, p) = [(10, 2.0, 0.5), (10, 1.8, 0.5), (20, 1.7, 0.5), (8, 2.5, 0.5), (16, 2.0, 0.75), (4, 1.6, 0.5)][point];
            let bound = fair_geom_sum_tail_bound(n, alpha).expect("grid alpha > 1");
            let cut = 2.0 * n as f64 * alpha;
            let emp = frequency(samples, s, |r| sample_trials_for_successes(r, u64::from(n), p) as f64 >= cut);
            vec![row(check, format!("n={n} alpha={alpha} p={p}"), bound, emp, binomial_sigma(bound, samples), Direction::Upper)]
        }
        BoundCheck::Coupon => {
            let n = [8usize, 16, 32, 64, 128][point];
            let mut rng = rng_from_seed(s);
            let draws: Vec<f64> = (0..samples).map(|_| sample_coupon_collection(&mut rng, n) as f64).collect();
            let mean = draws.iter().sum::<f64>() / samples as f64;
            let var = draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (samples as f64 - 1.0).max(1.0);
            let sigma = (var / samples as f64).sqrt();
            vec![row(check, format!("n={n}"), coupon_expectation(n as u64), mean, sigma, Direction::Relative)]
        }
        BoundCheck::GeomExp => (0..10)
            .map(|j| {
                let p = (point + 1) as f64 / 10.0;
                let x = 0.5 * j as f64;
                let g = geom_exp_cdf_gap(p, x).expect("grid p in (0, 1]");
                row(check, format!("p={p} x={x}"), g.exp_cdf, g.geom_cdf, 0.0, Direction::Lower)
            })
            .collect(),
        BoundCheck::ActionCount => {
            let n = 16;
            let k = [8u64, 16, 24, 32, 48][point];
            let (lo_bound, hi_bound) = action_count_tail_bounds(k as f64).expect("k > 0");
            let mut rng = rng_from_seed(s);
            let counts: Vec<u64> = (0..samples).map(|_| sample_action_count(&mut rng, n, k)).collect();
            let lo = counts.iter().filter(|&&c| c as f64 <= 0.5 * k as f64).count() as f64 / samples as f64;
            let hi = counts.iter().filter(|&&c| c as f64 >= 1.5 * k as f64).count() as f64 / samples as f64;
            vec![
                row(check, format!("n={n} k={k} tail=low"), lo_bound, lo, binomial_sigma(lo_bound, samples), Direction::Upper),
                row(check, format!("n={n} k={k} tail=high"), hi_bound, hi, binomial_sigma(hi_bound, samples), Direction::Upper),
            ]
        }
        BoundCheck::Jackson => {
            let rho = [0.5, 0.25, 0.75][point];
            let lengths = jackson_lengths(rho, samples, s, 1).expect("grid rho in (0, 1)");
            (0..6u64)
                .map(|len| {
                    let pmf = stationary_queue_pmf(rho, len).expect("grid rho in (0, 1)");
                    let emp = lengths.iter().filter(|&&l| l as u64 == len).count() as f64 / samples as f64;
                    row(check, format!("rho={rho} length={len}"), pmf, emp, binomial_sigma(pmf, samples), Direction::TwoSided)
                })
                .collect()
        }
    }
}

fn points(check: BoundCheck) -> usize {
    match check {
        BoundCheck::ExpSum | BoundCheck::GeomSum | BoundCheck::FairGeomSum => 6,
        BoundCheck::Coupon | BoundCheck::ActionCount => 5,
        BoundCheck::GeomExp => 10,
        BoundCheck::Jackson => 3,
    }
}

/// Evaluates every grid point of `check` with `samples` Monte Carlo draws
/// per point. Point `i` uses seed `mix_seed(seed, i)`, so the rows do not
/// depend on `workers`.
pub fn run_check(check: BoundCheck, samples: usize, seed: u64, workers: usize) -> Result<Vec<CheckRow>, BoundError> {
    if samples < 2 {
        return Err(BoundError::NonPositive("samples - 1"));
    }
    let per_point = par_map_indexed(points(check), workers, |i| point_rows(check, i, samples, seed))
        .map_err(|_| BoundError::NonPositive("workers"))?;
    Ok(per_point.into_iter().flatten().collect())
}
