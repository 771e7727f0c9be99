//! Algebraic gossip trials.
//!
//! Node `i` starts knowing only its own value, i.e. the subspace
//! `span{e_i}`. In every timeslot one node acts: it picks a neighbor
//! uniformly and, depending on the [`Algorithm`], sends a random linear
//! combination of its subspace, requests one, or both. A trial stops when
//! every node's rank reaches `n`.
//!
//! # Timing
//!
//! Messages sent in a timeslot are built from the bases as they stood at the
//! start of that slot; receptions apply only afterwards. For `Exchange` this
//! means neither side sees the other's same-slot message.
//!
//! # Random stream
//!
//! Per timeslot the trial draws, in order: the actor (async) or, at the start
//! of each round, a Fisher-Yates permutation (sync); the partner; then the
//! coefficients of the actor-to-partner message and of the partner-to-actor
//! message, as the algorithm requires. A message that provably cannot help
//! is counted but its coefficients are never drawn: this covers receivers
//! that already have rank `n` and senders whose subspace was already found
//! inside the receiver's. Containment persists until the sender's own basis
//! grows, since a receiver's subspace never shrinks.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use rand_core::RngCore;
use thiserror::Error;

use crate::field::{FieldError, FieldSpec, Gf2Basis, RowSpace, SubspaceBasis};
use crate::graph::Graph;
use crate::parallel::par_map_indexed;
use crate::rng::{mix_seed, rng_from_seed, shuffle, uniform_index};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GossipError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("workers must be at least 1")]
    NoWorkers,
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TimeModel {
    /// One uniformly random node acts per timeslot.
    Async,
    /// Each round of `n` timeslots follows a fresh uniform permutation.
    Sync,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Push,
    Pull,
    Exchange,
}

macro_rules! named_enum {
    ($ty:ty, $($variant:path => $name:literal),+) => {
        impl $ty {
            pub fn name(self) -> &'static str {
                match self { $($variant => $name),+ }
            }
        }
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
        impl FromStr for $ty {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s.to_ascii_lowercase().as_str() {
                    $($name => Ok($variant),)+
                    _ => Err(format!("unknown {} {s:?}", stringify!($ty))),
                }
            }
        }
    };
}

named_enum!(TimeModel, TimeModel::Async => "async", TimeModel::Sync => "sync");
named_enum!(Algorithm, Algorithm::Push => "push", Algorithm::Pull => "pull", Algorithm::Exchange => "exchange");

/// Parameters of one gossip experiment.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub graph: Graph,
    pub field: FieldSpec,
    pub time_model: TimeModel,
    pub algorithm: Algorithm,
    pub seed: u64,
    /// Safety cap; `None` means `64 * max_degree * n^2`.
    pub max_timeslots: Option<u64>,
    /// Sync only: a node ignores a second message from the same sender
    /// within one round.
    pub drop_duplicate_round_msgs: bool,
    /// Keep the actor log and every rank increment.
    pub record_trace: bool,
}

impl SimConfig {
    pub fn new(
        graph: Graph,
        field: FieldSpec,
        time_model: TimeModel,
        algorithm: Algorithm,
        seed: u64,
    ) -> Self {
        Self {
            graph,
            field,
            time_model,
            algorithm,
            seed,
            max_timeslots: None,
            drop_duplicate_round_msgs: false,
            record_trace: false,
        }
    }

    pub fn default_cap(graph: &Graph) -> u64 {
        let n = graph.n() as u64;
        64 * graph.max_degree().max(1) as u64 * n * n
    }

    pub fn cap(&self) -> u64 {
        self.max_timeslots.unwrap_or_else(|| Self::default_cap(&self.graph))
    }

    pub fn validate(&self) -> Result<(), GossipError> {
        let n = self.graph.n() as u64;
        if self.cap() < n {
            return Err(GossipError::Config(format!(
                "max_timeslots ({}) must be at least n ({n})",
                self.cap()
            )));
        }
        if self.drop_duplicate_round_msgs && self.time_model != TimeModel::Sync {
            return Err(GossipError::Config(
                "dropping duplicate round messages requires the sync time model".into(),
            ));
        }
        if self.graph.n() > u32::MAX as usize {
            return Err(GossipError::Config("graph too large".into()));
        }
        Ok(())
    }
}

/// A node's rank increasing to `new_rank` at the end of `slot` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankEvent {
    pub slot: u64,
    pub node: u32,
    pub new_rank: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    /// Acting node of each timeslot, in order.
    pub actors: Vec<u32>,
    pub insertions: Vec<RankEvent>,
}

/// Outcome of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub n: usize,
    /// 1-based timeslot whose receptions completed the last node; the number
    /// of executed timeslots when `capped`.
    pub t: u64,
    /// Per-node completion timeslot; `None` if the node never completed.
    pub per_node_t: Vec<Option<u64>>,
    /// Every transmitted message, zero vectors and ignored duplicates included.
    pub messages_sent: u64,
    /// Messages that increased the receiver's rank.
    pub helpful_received: u64,
    /// Messages whose sender was helpful to the receiver when the slot began.
    pub helpful_node_transmissions: u64,
    pub capped: bool,
    /// Ranks at the end of the trial.
    pub final_ranks: Vec<usize>,
    pub trace: Option<Trace>,
}

impl TrialResult {
    /// Stopping time in rounds, `T / n`.
    pub fn rounds(&self) -> f64 {
        self.t as f64 / self.n as f64
    }
}

/// Runs one trial with `cfg.seed`.
pub fn run_trial(cfg: &SimConfig) -> Result<TrialResult, GossipError> {
    run_trial_seeded(cfg, cfg.seed)
}

/// Runs one trial with an explicit seed, choosing the GF(2) bitset basis when
/// `q = 2`.
pub fn run_trial_seeded(cfg: &SimConfig, seed: u64) -> Result<TrialResult, GossipError> {
    if cfg.field.q() == 2 {
        run_trial_generic::<Gf2Basis>(cfg, seed)
    } else {
        run_trial_generic::<SubspaceBasis>(cfg, seed)
    }
}

/// Runs one trial with the given subspace representation.
pub fn run_trial_generic<B: RowSpace>(cfg: &SimConfig, seed: u64) -> Result<TrialResult, GossipError> {
    cfg.validate()?;
    let n = cfg.graph.n();
    let bases = (0..n).map(|i| B::unit(cfg.field, n, i)).collect::<Result<Vec<B>, _>>()?;
    let mut engine = Engine {
        cfg,
        bases,
        rng: rng_from_seed(seed),
        slot: 0,
        complete: 0,
        per_node_t: vec![None; n],
        messages_sent: 0,
        helpful_received: 0,
        helpful_node_transmissions: 0,
        delivered: HashSet::new(),
        contained: HashMap::new(),
        trace: cfg.record_trace.then(Trace::default),
    };
    Ok(engine.run())
}

struct Engine<'a, B: RowSpace> {
    cfg: &'a SimConfig,
    bases: Vec<B>,
    rng: crate::rng::SimRng,
    /// 1-based index of the slot being executed.
    slot: u64,
    complete: usize,
    per_node_t: Vec<Option<u64>>,
    messages_sent: u64,
    helpful_received: u64,
    helpful_node_transmissions: u64,
    /// (sender, receiver) pairs already delivered this round.
    delivered: HashSet<(usize, usize)>,
    /// (sender, receiver) -> sender rank at which the sender's subspace was
    /// found inside the receiver's.
    contained: HashMap<(usize, usize), usize>,
    trace: Option<Trace>,
}

impl<B: RowSpace> Engine<'_, B> {
    fn run(&mut self) -> TrialResult {
        let n = self.cfg.graph.n();
        for v in 0..n {
            if self.bases[v].rank() == n {
                self.complete += 1;
                self.per_node_t[v] = Some(0);
            }
        }
        let cap = self.cfg.cap();
        let mut order: Vec<usize> = (0..n).collect();
        let mut last = 0;
        let mut capped = false;
        while self.complete < n {
            if self.slot == cap {
                capped = true;
                break;
            }
            let pos = (self.slot % n as u64) as usize;
            self.slot += 1;
            let actor = match self.cfg.time_model {
                TimeModel::Async => uniform_index(&mut self.rng, n),
                TimeModel::Sync => {
                    if pos == 0 {
                        shuffle(&mut self.rng, &mut order);
                        self.delivered.clear();
                    }
                    order[pos]
                }
            };
            if let Some(trace) = &mut self.trace {
                trace.actors.push(actor as u32);
            }
            let neighbors = self.cfg.graph.neighbors(actor);
            let partner = neighbors[uniform_index(&mut self.rng, neighbors.len())];
            match self.cfg.algorithm {
                Algorithm::Push => self.one_way(actor, partner),
                Algorithm::Pull => self.one_way(partner, actor),
                Algorithm::Exchange => self.exchange(actor, partner),
            }
            last = self.slot;
        }
        let t = if capped { self.slot } else { last };
        TrialResult {
            n,
            t,
            per_node_t: std::mem::take(&mut self.per_node_t),
            messages_sent: self.messages_sent,
            helpful_received: self.helpful_received,
            helpful_node_transmissions: self.helpful_node_transmissions,
            capped,
            final_ranks: self.bases.iter().map(RowSpace::rank).collect(),
            trace: self.trace.take(),
        }
    }

    /// Counts a message from `from` to `to` and reports whether its content
    /// needs to be materialized.
    fn admit(&mut self, from: usize, to: usize) -> bool {
        self.messages_sent += 1;
        if self.cfg.drop_duplicate_round_msgs && !self.delivered.insert((from, to)) {
            return false;
        }
        self.bases[to].rank() < self.bases[to].dim()
            && self.contained.get(&(from, to)) != Some(&self.bases[from].rank())
    }

    fn draw(&mut self, from: usize) -> B::Row {
        let mut row = self.bases[from].zero_row();
        self.bases[from]
            .random_combination_into(&mut self.rng, &mut row)
            .expect("every node holds at least its own value");
        row
    }

    fn sender_helpful(&mut self, from: usize, to: usize) -> bool {
        let helpful = self.bases[from].is_helpful(&self.bases[to]).expect("uniform dimension");
        if !helpful {
            self.contained.insert((from, to), self.bases[from].rank());
        }
        helpful
    }

    fn record_insertion(&mut self, node: usize) {
        let rank = self.bases[node].rank();
        if let Some(trace) = &mut self.trace {
            trace.insertions.push(RankEvent { slot: self.slot, node: node as u32, new_rank: rank as u32 });
        }
        self.helpful_received += 1;
        self.helpful_node_transmissions += 1;
        if rank == self.bases[node].dim() {
            self.complete += 1;
            self.per_node_t[node] = Some(self.slot);
        }
    }

    fn one_way(&mut self, from: usize, to: usize) {
        if !self.admit(from, to) {
            return;
        }
        let mut msg = self.draw(from);
        if self.bases[to].reduce_and_insert_row(&mut msg).inserted {
            self.record_insertion(to);
        } else if self.sender_helpful(from, to) {
            self.helpful_node_transmissions += 1;
        }
    }

    /// `a` acts and sends to `b`; `b` answers `a`. Both messages come from
    /// start-of-slot bases.
    fn exchange(&mut self, a: usize, b: usize) {
        let to_b = self.admit(a, b).then(|| self.draw(a));
        let to_a = self.admit(b, a).then(|| self.draw(b));

        // Reduce b's message against a first: a is untouched until the end
        // of the slot, and b's helpfulness must be judged on b's start state.
        let to_a = to_a.map(|mut msg| {
            self.bases[a].reduce(&mut msg);
            if B::row_is_zero(&msg) && self.sender_helpful(b, a) {
                self.helpful_node_transmissions += 1;
            }
            msg
        });
        if let Some(mut msg) = to_b {
            if self.bases[b].reduce_and_insert_row(&mut msg).inserted {
                self.record_insertion(b);
            } else if self.sender_helpful(a, b) {
                self.helpful_node_transmissions += 1;
            }
        }
        if let Some(msg) = to_a {
            if !B::row_is_zero(&msg) {
                self.bases[a].insert_reduced(&msg);
                self.record_insertion(a);
            }
        }
    }
}

/// Runs `trials` independent trials on `workers` threads.
///
/// Trial `k` uses seed [`mix_seed`]`(cfg.seed, k)`; the returned list is in
/// trial order and does not depend on `workers`.
pub fn run_batch(cfg: &SimConfig, trials: usize, workers: usize) -> Result<Vec<TrialResult>, GossipError> {
    run_batch_map(cfg, trials, workers, |r| r)
}

/// Like [`run_batch`], mapping each result before collection.
pub fn run_batch_map<T, F>(
    cfg: &SimConfig,
    trials: usize,
    workers: usize,
    map: F,
) -> Result<Vec<T>, GossipError>
where
    T: Send,
    F: Fn(TrialResult) -> T + Sync + Send,
{
    if trials == 0 {
        return Err(GossipError::NoTrials);
    }
    cfg.validate()?;
    if workers == 0 {
        return Err(GossipError::NoWorkers);
    }
    let one = |k: usize| run_trial_seeded(cfg, mix_seed(cfg.seed, k as u64)).map(&map);
    par_map_indexed(trials, workers, one)
        .map_err(|e| GossipError::Pool(e.to_string()))?
        .into_iter()
        .collect()
}

/// Number of timeslots in `window` (0-based slot indices) where `node` acted.
pub fn count_comm_actions(actors: &[u32], node: usize, window: Range<usize>) -> usize {
    let end = window.end.min(actors.len());
    let start = window.start.min(end);
    actors[start..end].iter().filter(|&&a| a as usize == node).count()
}

/// Actor sequence of the time model alone, without any gossip.
pub fn actor_schedule<R: RngCore + ?Sized>(
    time_model: TimeModel,
    n: usize,
    slots: usize,
    rng: &mut R,
) -> Vec<u32> {
    let mut order: Vec<u32> = (0..n as u32).collect();
    (0..slots)
        .map(|s| match time_model {
            TimeModel::Async => uniform_index(rng, n) as u32,
            TimeModel::Sync => {
                if s % n == 0 {
                    shuffle(rng, &mut order);
                }
                order[s % n]
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Topology;

    fn cfg(top: Topology, n: usize, q: u32, time: TimeModel, algo: Algorithm) -> SimConfig {
        SimConfig::new(Graph::generate(top, n).unwrap(), FieldSpec::new(q).unwrap(), time, algo, 5)
    }

    #[test]
    fn single_node_is_done_at_zero() {
        let g = crate::graph::load_edge_list("n 1\n").unwrap();
        let c = SimConfig::new(g, FieldSpec::new(2).unwrap(), TimeModel::Async, Algorithm::Exchange, 1);
        let r = run_trial(&c).unwrap();
        assert_eq!(r.t, 0);
        assert_eq!(r.per_node_t, vec![Some(0)]);
        assert_eq!(r.messages_sent, 0);
    }

    #[test]
    fn trial_invariants_hold() {
        for (top, n, q, time, algo) in [
            (Topology::Ring, 8, 2, TimeModel::Async, Algorithm::Exchange),
            (Topology::Star, 6, 3, TimeModel::Sync, Algorithm::Push),
            (Topology::Complete, 5, 5, TimeModel::Async, Algorithm::Pull),
            (Topology::Barbell, 8, 2, TimeModel::Sync, Algorithm::Exchange),
        ] {
            let mut c = cfg(top, n, q, time, algo);
            c.record_trace = true;
            let r = run_trial(&c).unwrap();
            assert!(!r.capped);
            assert_eq!(Some(r.t), r.per_node_t.iter().map(|t| t.unwrap()).max());
            assert_eq!(r.helpful_received as usize, n * (n - 1));
            assert!(r.helpful_received <= r.helpful_node_transmissions);
            assert!(r.helpful_node_transmissions <= r.messages_sent);
            assert!(r.final_ranks.iter().all(|&k| k == n));
            let trace = r.trace.unwrap();
            assert_eq!(trace.actors.len() as u64, r.t);
            for v in 0..n {
                let ranks: Vec<u32> =
                    trace.insertions.iter().filter(|e| e.node as usize == v).map(|e| e.new_rank).collect();
                assert_eq!(ranks, (2..=n as u32).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn same_seed_same_result() {
        let c = cfg(Topology::Ring, 10, 3, TimeModel::Async, Algorithm::Exchange);
        assert_eq!(run_trial(&c).unwrap(), run_trial(&c).unwrap());
    }

    #[test]
    fn cap_is_reported() {
        let mut c = cfg(Topology::Ring, 12, 2, TimeModel::Async, Algorithm::Push);
        c.max_timeslots = Some(12);
        let r = run_trial(&c).unwrap();
        assert!(r.capped);
        assert_eq!(r.t, 12);
        assert!(r.per_node_t.iter().all(Option::is_none));
        c.max_timeslots = Some(11);
        assert!(run_trial(&c).is_err());
    }

    #[test]
    fn duplicate_drop_needs_sync() {
        let mut c = cfg(Topology::Ring, 6, 2, TimeModel::Async, Algorithm::Exchange);
        c.drop_duplicate_round_msgs = true;
        assert!(run_trial(&c).is_err());
        c.time_model = TimeModel::Sync;
        let r = run_trial(&c).unwrap();
        assert!(!r.capped);
    }

    #[test]
    fn batch_rejects_zero_and_ignores_workers() {
        let c = cfg(Topology::Ring, 8, 2, TimeModel::Async, Algorithm::Exchange);
        assert_eq!(run_batch(&c, 0, 1).unwrap_err(), GossipError::NoTrials);
        let one = run_batch(&c, 10, 1).unwrap();
        let many = run_batch(&c, 10, 4).unwrap();
        assert_eq!(one, many);
        assert_ne!(one[0], one[1]);
    }

    #[test]
    fn comm_action_counts() {
        let mut rng = rng_from_seed(3);
        let actors = actor_schedule(TimeModel::Sync, 7, 7 * 5, &mut rng);
        for v in 0..7 {
            assert_eq!(count_comm_actions(&actors, v, 0..35), 5);
        }
        assert_eq!(count_comm_actions(&actors, 0, 0..0), 0);
        assert_eq!(count_comm_actions(&actors, 0, 28..100), 1);
    }

    #[test]
    fn names_parse() {
        assert_eq!("EXCHANGE".parse::<Algorithm>().unwrap(), Algorithm::Exchange);
        assert_eq!("sync".parse::<TimeModel>().unwrap(), TimeModel::Sync);
        assert!("gossip".parse::<Algorithm>().is_err());
    }
}
