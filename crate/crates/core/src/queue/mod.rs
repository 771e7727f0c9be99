//! Networks of FCFS single-server queues.
//!
//! A [`QueueNetwork`] is a forest of queues in which every customer moves
//! toward a sink: each queue forwards to its `parent`, and a queue without a
//! parent forwards out of the system. The same representation covers the
//! tree obtained from a BFS tree of a graph and the line obtained by merging
//! every level of that tree into one queue.
//!
//! Levels are 1-based and count hops to the sink: level-1 queues feed the
//! sink directly.
//!
//! The proof's systems map as follows:
//!
//! | system | construction |
//! |---|---|
//! | tree, all servers on | [`QueueNetwork::tree`] |
//! | tree, one server per level | `.with_scheduler(Scheduler::OnePerLevel)` |
//! | line | [`QueueNetwork::merge_tree_to_line`] |
//! | line, one customer moved back | [`QueueNetwork::move_customer_back`] |
//! | line, everyone at the far end | [`QueueNetwork::all_back`] |

mod dominance;
mod sim;

pub use dominance::{equivalence_check, quantile_grid, stochastic_order_check, DominanceReport};
pub use sim::{lindley, run_queue_batch, run_queue_trial, sample_jackson_stationary, QueueTrialResult, Visit};

use std::fmt;

use thiserror::Error;

use crate::graph::BfsTree;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QueueError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("utilization rho = {0} must be below 1")]
    Unstable(f64),
    #[error("level {0} has no customer to move")]
    EmptyLevel(usize),
    #[error("no level behind level {level} (l_max = {l_max})")]
    NoLevelBehind { level: usize, l_max: usize },
    #[error("operation requires a line network")]
    NotALine,
    #[error("at least {min} samples required per side (got {got})")]
    TooFewSamples { min: usize, got: usize },
    #[error("evaluation grid must be non-empty and finite")]
    DegenerateGrid,
    #[error("trials and workers must be at least 1")]
    NoTrials,
    #[error("thread pool: {0}")]
    Pool(String),
}

/// Service-time law of every server.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ServiceDist {
    /// Discrete time: the head customer leaves at the end of each slot with
    /// probability `p`; the wait is `Geom(p)` on `{0, 1, ...}` and one extra
    /// slot is spent in transit to the next queue.
    Geometric(f64),
    /// Continuous time: service `Exp(rate)`, no transit.
    Exponential(f64),
}

impl ServiceDist {
    pub fn rate(self) -> f64 {
        match self {
            ServiceDist::Geometric(p) | ServiceDist::Exponential(p) => p,
        }
    }

    fn validate(self) -> Result<(), QueueError> {
        match self {
            ServiceDist::Geometric(p) if !(p > 0.0 && p <= 1.0) => {
                Err(QueueError::Parameter(format!("geometric p = {p} must lie in (0, 1]")))
            }
            ServiceDist::Exponential(r) if !(r > 0.0 && r.is_finite()) => {
                Err(QueueError::Parameter(format!("exponential rate = {r} must be positive")))
            }
            _ => Ok(()),
        }
    }
}

/// Where the real customers start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Arrivals {
    /// In the queues listed as their residents.
    Resident,
    /// All residents, levels concatenated nearest-first, in the farthest queue.
    AllAtFarthest,
    /// Outside the system; they enter the farthest queue as a Poisson process
    /// of rate `lambda`, in resident order.
    OpenPoisson(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheduler {
    /// Every server works whenever its queue is nonempty.
    WorkConserving,
    /// Per level, only the server holding the customer that reached the level
    /// first works; initial residents go by customer id.
    OnePerLevel,
}

/// Extra customers present at time 0 that occupy servers but are not counted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DummyInit {
    None,
    /// Independent `Pr(k) = rho^k (1 - rho)` dummies in every queue.
    JacksonStationary(f64),
}

/// One FCFS queue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueueNode {
    /// Next queue toward the sink; `None` at level 1.
    pub parent: Option<usize>,
    pub level: usize,
    /// Customer ids waiting at time 0, head first.
    pub residents: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Tree,
    Line,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueueNetwork {
    pub shape: Shape,
    pub nodes: Vec<QueueNode>,
    pub service: ServiceDist,
    pub arrivals: Arrivals,
    pub scheduler: Scheduler,
    pub dummy_init: DummyInit,
}

/// How the BFS root enters a tree of queues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootRole {
    /// The root only collects: it has no queue, and its own customer is
    /// already home. `n - 1` customers, levels equal BFS depths.
    Sink,
    /// The root is a queue like any other and customers leave through it.
    /// `n` customers, level = BFS depth + 1.
    Server,
}

impl QueueNetwork {
    /// One queue per tree node with its node id as its single resident.
    ///
    /// Queue indices follow node ids (skipping the root under
    /// [`RootRole::Sink`]).
    pub fn tree(bfs: &BfsTree, role: RootRole, service: ServiceDist) -> Result<Self, QueueError> {
        service.validate()?;
        let ids: Vec<usize> = (0..bfs.n()).filter(|&v| role == RootRole::Server || v != bfs.root).collect();
        let mut index = vec![usize::MAX; bfs.n()];
        for (i, &v) in ids.iter().enumerate() {
            index[v] = i;
        }
        let nodes = ids
            .iter()
            .map(|&v| {
                let (parent, level) = match role {
                    RootRole::Sink => {
                        (bfs.parent[v].filter(|&p| p != bfs.root).map(|p| index[p]), bfs.depth[v])
                    }
                    RootRole::Server => (bfs.parent[v].map(|p| index[p]), bfs.depth[v] + 1),
                };
                QueueNode { parent, level, residents: vec![v as u32] }
            })
            .collect();
        Ok(Self {
            shape: Shape::Tree,
            nodes,
            service,
            arrivals: Arrivals::Resident,
            scheduler: Scheduler::WorkConserving,
            dummy_init: DummyInit::None,
        })
    }

    /// A line whose `l`-th entry (from 0) is the resident list of level `l + 1`.
    pub fn line(levels: Vec<Vec<u32>>, service: ServiceDist) -> Result<Self, QueueError> {
        service.validate()?;
        if levels.is_empty() {
            return Err(QueueError::Parameter("a line needs at least one queue".into()));
        }
        let nodes = levels
            .into_iter()
            .enumerate()
            .map(|(i, residents)| QueueNode { parent: i.checked_sub(1), level: i + 1, residents })
            .collect();
        Ok(Self {
            shape: Shape::Line,
            nodes,
            service,
            arrivals: Arrivals::Resident,
            scheduler: Scheduler::WorkConserving,
            dummy_init: DummyInit::None,
        })
    }

    /// A single exponential queue fed by `customers` Poisson arrivals at rate
    /// `lambda`, started from its equilibrium length.
    pub fn mm1_warm(lambda: f64, mu: f64, customers: u32) -> Result<Self, QueueError> {
        Self::line(vec![(0..customers).collect()], ServiceDist::Exponential(mu))?
            .with_arrivals(Arrivals::OpenPoisson(lambda))?
            .with_dummy_init(DummyInit::JacksonStationary(lambda / mu))
    }

    pub fn with_arrivals(mut self, arrivals: Arrivals) -> Result<Self, QueueError> {
        if let Arrivals::OpenPoisson(lambda) = arrivals {
            let ServiceDist::Exponential(mu) = self.service else {
                return Err(QueueError::Parameter(
                    "Poisson arrivals require exponential service".into(),
                ));
            };
            if !(lambda > 0.0) {
                return Err(QueueError::Parameter(format!("lambda = {lambda} must be positive")));
            }
            if lambda >= mu {
                return Err(QueueError::Unstable(lambda / mu));
            }
        }
        self.arrivals = arrivals;
        Ok(self)
    }

    pub fn with_scheduler(mut self, scheduler: Scheduler) -> Self {
        self.scheduler = scheduler;
        self
    }

    pub fn with_dummy_init(mut self, dummy_init: DummyInit) -> Result<Self, QueueError> {
        if let DummyInit::JacksonStationary(rho) = dummy_init {
            if !(rho > 0.0 && rho < 1.0) {
                return Err(QueueError::Parameter(format!("rho = {rho} must lie in (0, 1)")));
            }
        }
        self.dummy_init = dummy_init;
        Ok(self)
    }

    pub fn l_max(&self) -> usize {
        self.nodes.iter().map(|q| q.level).max().unwrap_or(0)
    }

    /// Number of real customers.
    pub fn customers(&self) -> usize {
        self.nodes.iter().map(|q| q.residents.len()).sum()
    }

    /// Residents of each level `1..=l_max`, ordered by customer id.
    pub fn level_populations(&self) -> Vec<Vec<u32>> {
        let mut levels = vec![Vec::new(); self.l_max()];
        for q in &self.nodes {
            levels[q.level - 1].extend_from_slice(&q.residents);
        }
        for l in &mut levels {
            l.sort_unstable();
        }
        levels
    }

    /// Merges every level into a single queue; residents keep id order.
    pub fn merge_tree_to_line(&self) -> Result<Self, QueueError> {
        let mut line = Self::line(self.level_populations(), self.service)?;
        line.arrivals = self.arrivals;
        line.dummy_init = self.dummy_init;
        Ok(line)
    }

    /// Moves the last customer of level `m` to the head of level `m + 1`.
    pub fn move_customer_back(&self, m: usize) -> Result<Self, QueueError> {
        if self.shape != Shape::Line {
            return Err(QueueError::NotALine);
        }
        let l_max = self.l_max();
        if m == 0 || m >= l_max {
            return Err(QueueError::NoLevelBehind { level: m, l_max });
        }
        let mut next = self.clone();
        let c = next.nodes[m - 1].residents.pop().ok_or(QueueError::EmptyLevel(m))?;
        next.nodes[m].residents.insert(0, c);
        Ok(next)
    }

    /// Applies [`QueueNetwork::move_customer_back`] at the nearest nonempty
    /// level until no move is left.
    pub fn all_back(&self) -> Result<Self, QueueError> {
        let mut net = self.clone();
        let l_max = net.l_max();
        while let Some(m) = (1..l_max).find(|&m| !net.nodes[m - 1].residents.is_empty()) {
            net = net.move_customer_back(m)?;
        }
        Ok(net)
    }

    /// Index of the queue farthest from the sink (smallest index on ties).
    pub fn farthest_queue(&self) -> usize {
        let l_max = self.l_max();
        self.nodes.iter().position(|q| q.level == l_max).unwrap_or(0)
    }

    /// All residents in the order [`Arrivals::AllAtFarthest`] and
    /// [`Arrivals::OpenPoisson`] feed them: nearest level first, queue order
    /// within a level.
    pub fn entry_order(&self) -> Vec<u32> {
        let mut order = Vec::with_capacity(self.customers());
        for level in 1..=self.l_max() {
            for q in self.nodes.iter().filter(|q| q.level == level) {
                order.extend_from_slice(&q.residents);
            }
        }
        order
    }
}

impl fmt::Display for Scheduler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheduler::WorkConserving => "wc",
            Scheduler::OnePerLevel => "level",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, Topology};

    const EXP: ServiceDist = ServiceDist::Exponential(1.0);

    fn bfs(top: Topology, n: usize) -> BfsTree {
        Graph::generate(top, n).unwrap().bfs_tree(0)
    }

    #[test]
    fn star_merges_to_one_queue() {
        let tree = QueueNetwork::tree(&bfs(Topology::Star, 6), RootRole::Sink, EXP).unwrap();
        assert_eq!(tree.customers(), 5);
        let line = tree.merge_tree_to_line().unwrap();
        assert_eq!(line.nodes.len(), 1);
        assert_eq!(line.nodes[0].residents, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn path_tree_is_already_a_line() {
        let tree = QueueNetwork::tree(&bfs(Topology::Path, 5), RootRole::Sink, EXP).unwrap();
        let line = tree.merge_tree_to_line().unwrap();
        assert_eq!(line.nodes, tree.nodes);
    }

    #[test]
    fn barbell_levels_preserved() {
        let tree = QueueNetwork::tree(&bfs(Topology::Barbell, 8), RootRole::Sink, EXP).unwrap();
        let line = tree.merge_tree_to_line().unwrap();
        let sizes: Vec<usize> = line.nodes.iter().map(|q| q.residents.len()).collect();
        assert_eq!(sizes, vec![3, 1, 3]);

        let served = QueueNetwork::tree(&bfs(Topology::Barbell, 8), RootRole::Server, EXP).unwrap();
        assert_eq!(served.customers(), 8);
        assert_eq!(served.l_max(), 4);
        assert_eq!(served.nodes[0].parent, None);
        assert_eq!(served.nodes[4].parent, Some(3));
    }

    #[test]
    fn moving_customers_back() {
        let line = QueueNetwork::line(vec![vec![1, 2], vec![]], EXP).unwrap();
        let moved = line.move_customer_back(1).unwrap();
        assert_eq!(moved.nodes[0].residents, vec![1]);
        assert_eq!(moved.nodes[1].residents, vec![2]);

        let single = QueueNetwork::line(vec![vec![1]], EXP).unwrap();
        assert!(matches!(single.move_customer_back(1), Err(QueueError::NoLevelBehind { .. })));
        let empty = QueueNetwork::line(vec![vec![], vec![3]], EXP).unwrap();
        assert_eq!(empty.move_customer_back(1), Err(QueueError::EmptyLevel(1)));
    }

    #[test]
    fn all_back_reaches_farthest_queue() {
        let line = QueueNetwork::line(vec![vec![1, 2], vec![3], vec![4, 5]], EXP).unwrap();
        let back = line.all_back().unwrap();
        assert!(back.nodes[..2].iter().all(|q| q.residents.is_empty()));
        assert_eq!(back.nodes[2].residents, vec![1, 2, 3, 4, 5]);
        assert_eq!(back.nodes[2].residents, line.entry_order());
    }

    #[test]
    fn poisson_needs_stable_exponential_queue() {
        let line = QueueNetwork::line(vec![vec![1]], EXP).unwrap();
        assert_eq!(line.clone().with_arrivals(Arrivals::OpenPoisson(1.0)), Err(QueueError::Unstable(1.0)));
        assert!(line.with_arrivals(Arrivals::OpenPoisson(0.5)).is_ok());
        let geom = QueueNetwork::line(vec![vec![1]], ServiceDist::Geometric(0.5)).unwrap();
        assert!(geom.with_arrivals(Arrivals::OpenPoisson(0.1)).is_err());
        assert!(QueueNetwork::line(vec![vec![1]], ServiceDist::Geometric(1.5)).is_err());
    }
}
