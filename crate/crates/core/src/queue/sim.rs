use std::cmp::Ordering;

use rand_core::RngCore;

use super::{Arrivals, DummyInit, QueueError, QueueNetwork, Scheduler, ServiceDist};
use crate::parallel::par_map_indexed;
use crate::rng::{exponential, geometric0, mix_seed, rng_from_seed, SimRng};

/// Dummy customers get ids from here up, so they sort after real ones.
const DUMMY_BASE: u32 = 1 << 31;

/// One customer's stay in one queue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Visit {
    pub customer: u32,
    pub dummy: bool,
    pub queue: usize,
    pub arrival: f64,
    pub departure: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueueTrialResult {
    /// Last real departure to the sink; 0 without customers.
    pub stopping_time: f64,
    /// Real departures to the sink, ascending.
    pub departures: Vec<f64>,
    /// Every visit in service order, when requested.
    pub visits: Option<Vec<Visit>>,
}

impl QueueTrialResult {
    /// Customers (dummies included) in `queue` at time `t`: arrived at or
    /// before `t` and not yet departed.
    pub fn queue_length_at(&self, queue: usize, t: f64) -> Option<usize> {
        let visits = self.visits.as_ref()?;
        Some(visits.iter().filter(|v| v.queue == queue && v.arrival <= t && t < v.departure).count())
    }

    /// Time real customers spent in `queue`, in service order.
    pub fn sojourns(&self, queue: usize) -> Option<Vec<f64>> {
        let visits = self.visits.as_ref()?;
        Some(
            visits
                .iter()
                .filter(|v| v.queue == queue && !v.dummy)
                .map(|v| v.departure - v.arrival)
                .collect(),
        )
    }
}

/// Departure times of a single FCFS queue: `d_i = max(a_i, d_{i-1}) + x_i`.
///
/// Arrivals are taken in the given order.
pub fn lindley(arrivals: &[f64], services: &[f64]) -> Vec<f64> {
    assert_eq!(arrivals.len(), services.len(), "one service time per arrival");
    let mut prev = f64::NEG_INFINITY;
    arrivals
        .iter()
        .zip(services)
        .map(|(&a, &x)| {
            prev = a.max(prev) + x;
            prev
        })
        .collect()
}

/// Queue length drawn from the M/M/1 equilibrium, `Pr(k) = rho^k (1 - rho)`.
pub fn sample_jackson_stationary<R: RngCore + ?Sized>(rho: f64, rng: &mut R) -> Result<u64, QueueError> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(QueueError::Parameter(format!("rho = {rho} must lie in (0, 1)")));
    }
    Ok(geometric0(rng, 1.0 - rho))
}

#[derive(Debug, Clone, Copy)]
struct Job {
    time: f64,
    /// 0 dummy at start, 1 resident, 2 arrival from elsewhere.
    class: u8,
    seq: u64,
    customer: u32,
    queue: usize,
}

impl Job {
    fn dummy(&self) -> bool {
        self.customer >= DUMMY_BASE
    }

    fn order(a: &Job, b: &Job) -> Ordering {
        a.time.total_cmp(&b.time).then(a.class.cmp(&b.class)).then(a.seq.cmp(&b.seq))
    }
}

fn service_time(service: ServiceDist, rng: &mut SimRng) -> f64 {
    match service {
        // Wait for a successful slot, then one slot in transit.
        ServiceDist::Geometric(p) => (geometric0(rng, p) + 1) as f64,
        ServiceDist::Exponential(rate) => exponential(rng, rate),
    }
}

/// Runs one trial.
///
/// Random draws happen in a fixed order: dummy counts per queue, Poisson
/// inter-arrival gaps, then service times queue by queue from the farthest
/// level inward, in service order.
pub fn run_queue_trial(net: &QueueNetwork, seed: u64, record_visits: bool) -> QueueTrialResult {
    let mut rng = rng_from_seed(seed);
    let mut pending: Vec<Vec<Job>> = vec![Vec::new(); net.nodes.len()];

    if let DummyInit::JacksonStationary(rho) = net.dummy_init {
        let mut next = DUMMY_BASE;
        for (q, jobs) in pending.iter_mut().enumerate() {
            let k = sample_jackson_stationary(rho, &mut rng).expect("rho validated by the network");
            for j in 0..k {
                jobs.push(Job { time: 0.0, class: 0, seq: j, customer: next, queue: q });
                next += 1;
            }
        }
    }

    match net.arrivals {
        Arrivals::Resident => {
            for (q, node) in net.nodes.iter().enumerate() {
                for (pos, &c) in node.residents.iter().enumerate() {
                    let seq = match net.scheduler {
                        Scheduler::WorkConserving => pos as u64,
                        Scheduler::OnePerLevel => u64::from(c),
                    };
                    pending[q].push(Job { time: 0.0, class: 1, seq, customer: c, queue: q });
                }
            }
        }
        Arrivals::AllAtFarthest => {
            let q = net.farthest_queue();
            for (pos, c) in net.entry_order().into_iter().enumerate() {
                pending[q].push(Job { time: 0.0, class: 1, seq: pos as u64, customer: c, queue: q });
            }
        }
        Arrivals::OpenPoisson(lambda) => {
            let q = net.farthest_queue();
            let mut t = 0.0;
            for c in net.entry_order() {
                t += exponential(&mut rng, lambda);
                pending[q].push(Job { time: t, class: 2, seq: u64::from(c), customer: c, queue: q });
            }
        }
    }

    let mut departures = Vec::with_capacity(net.customers());
    let mut visits = record_visits.then(Vec::new);
    let mut batch: Vec<Job> = Vec::new();
    for level in (1..=net.l_max()).rev() {
        let queues: Vec<usize> = (0..net.nodes.len()).filter(|&q| net.nodes[q].level == level).collect();
        let groups: Vec<&[usize]> = match net.scheduler {
            Scheduler::WorkConserving => queues.chunks(1).collect(),
            Scheduler::OnePerLevel => vec![&queues[..]],
        };
        for group in groups {
            batch.clear();
            for &q in group {
                batch.append(&mut pending[q]);
            }
            batch.sort_by(Job::order);
            let mut prev = 0.0f64;
            for job in &batch {
                let departure = job.time.max(prev) + service_time(net.service, &mut rng);
                prev = departure;
                if let Some(v) = &mut visits {
                    v.push(Visit {
                        customer: job.customer,
                        dummy: job.dummy(),
                        queue: job.queue,
                        arrival: job.time,
                        departure,
                    });
                }
                match net.nodes[job.queue].parent {
                    Some(p) => pending[p].push(Job {
                        time: departure,
                        class: 2,
                        seq: u64::from(job.customer),
                        customer: job.customer,
                        queue: p,
                    }),
                    None if !job.dummy() => departures.push(departure),
                    None => {}
                }
            }
        }
    }
    departures.sort_by(f64::total_cmp);
    QueueTrialResult { stopping_time: departures.last().copied().unwrap_or(0.0), departures, visits }
}

/// Runs `trials` trials; trial `k` uses seed `mix_seed(seed, k)`. The result
/// does not depend on `workers`.
pub fn run_queue_batch(
    net: &QueueNetwork,
    trials: usize,
    seed: u64,
    workers: usize,
    record_visits: bool,
) -> Result<Vec<QueueTrialResult>, QueueError> {
    if trials == 0 || workers == 0 {
        return Err(QueueError::NoTrials);
    }
    par_map_indexed(trials, workers, |k| run_queue_trial(net, mix_seed(seed, k as u64), record_visits))
        .map_err(|e| QueueError::Pool(e.to_string()))
}
