//! Undirected graphs, the named families used by the experiments, and BFS
//! spanning trees.
//!
//! Node ids are `0..n`. Adjacency lists are sorted, which makes every
//! traversal deterministic.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("{0}")]
    Constraint(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("self-loop at line {line}")]
    SelfLoop { line: usize },
    #[error("node {node} out of range at line {line} (n = {n})")]
    NodeOutOfRange { node: usize, n: usize, line: usize },
    #[error("graph is disconnected: node {unreachable} unreachable from node {from}")]
    Disconnected { from: usize, unreachable: usize },
    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),
    #[error("unknown topology {0:?}")]
    UnknownTopology(String),
}

/// The generated graph families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    Ring,
    Path,
    Star,
    Complete,
    /// Two cliques on `0..n/2` and `n/2..n` joined by the bridge
    /// `(n/2 - 1, n/2)`. The bridge endpoints have the maximum degree `n/2`,
    /// one less than the `n/2 + 1` sometimes quoted for this family.
    Barbell,
    /// Two cliques of `(n - 1)/2` nodes whose bridge runs through the middle
    /// node `(n - 1)/2`.
    ExtendedBarbell,
}

impl Topology {
    pub const ALL: [Topology; 6] = [
        Topology::Ring,
        Topology::Path,
        Topology::Star,
        Topology::Complete,
        Topology::Barbell,
        Topology::ExtendedBarbell,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Topology::Ring => "ring",
            Topology::Path => "path",
            Topology::Star => "star",
            Topology::Complete => "complete",
            Topology::Barbell => "barbell",
            Topology::ExtendedBarbell => "extended_barbell",
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Topology {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.replace('-', "_");
        Topology::ALL
            .into_iter()
            .find(|t| t.name() == key)
            .ok_or_else(|| GraphError::UnknownTopology(s.to_string()))
    }
}

/// A connected, simple, undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list, symmetrizing and deduplicating.
    ///
    /// Rejects self-loops, out-of-range endpoints and disconnected input.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Constraint("graph needs at least one node".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(GraphError::InvalidEdge(u, v));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Self::finish(adj)
    }

    fn finish(mut adj: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let g = Self { adj };
        g.check_connected()?;
        Ok(g)
    }

    fn check_connected(&self) -> Result<(), GraphError> {
        let dist = self.distances_from(0);
        let missing: Vec<usize> = (0..self.n()).filter(|&v| dist[v].is_none()).collect();
        match missing.first() {
            None => Ok(()),
            Some(&unreachable) => Err(GraphError::Disconnected { from: 0, unreachable }),
        }
    }

    /// Builds a member of a named family.
    pub fn generate(topology: Topology, n: usize) -> Result<Self, GraphError> {
        let need = |ok: bool, msg: &str| {
            if ok {
                Ok(())
            } else {
                Err(GraphError::Constraint(msg.to_string()))
            }
        };
        let mut edges = Vec::new();
        match topology {
            Topology::Ring => {
                need(n >= 3, "ring requires n >= 3")?;
                edges.extend((0..n).map(|i| (i, (i + 1) % n)));
            }
            Topology::Path => {
                need(n >= 2, "path requires n >= 2")?;
                edges.extend((0..n - 1).map(|i| (i, i + 1)));
            }
            Topology::Star => {
                need(n >= 2, "star requires n >= 2")?;
                edges.extend((1..n).map(|i| (0, i)));
            }
            Topology::Complete => {
                need(n >= 2, "complete requires n >= 2")?;
                clique(&mut edges, 0..n);
            }
            Topology::Barbell => {
                need(n >= 2, "barbell requires n >= 2")?;
                need(n.is_multiple_of(2), "barbell requires even n")?;
                let h = n / 2;
                clique(&mut edges, 0..h);
                clique(&mut edges, h..n);
                edges.push((h - 1, h));
            }
            Topology::ExtendedBarbell => {
                need(n % 2 == 1, "extended_barbell requires odd n")?;
                need(n >= 5, "extended_barbell requires n >= 5")?;
                let h = (n - 1) / 2;
                clique(&mut edges, 0..h);
                clique(&mut edges, h + 1..n);
                edges.push((h - 1, h));
                edges.push((h, h + 1));
            }
        }
        Self::from_edges(n, &edges)
    }

    /// Number of nodes.
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect()
    }

    /// Hop distances from `root`; `None` for unreachable nodes.
    pub fn distances_from(&self, root: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Shortest-path spanning tree rooted at `root`.
    ///
    /// Nodes are discovered in BFS order with neighbors scanned by increasing
    /// id, so each node's parent is its smallest-id neighbor one level up.
    ///
    /// # Panics
    /// If `root >= n`.
    pub fn bfs_tree(&self, root: usize) -> BfsTree {
        assert!(root < self.n(), "bfs root {root} out of range");
        let n = self.n();
        let mut parent = vec![None; n];
        let mut depth = vec![usize::MAX; n];
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if depth[v] == usize::MAX {
                    depth[v] = depth[u] + 1;
                    parent[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        let l_max = depth.iter().copied().max().unwrap_or(0);
        BfsTree { root, parent, depth, l_max }
    }

    /// Serializes in the edge-list format read by [`load_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

fn clique(edges: &mut Vec<(usize, usize)>, nodes: std::ops::Range<usize>) {
    for u in nodes.clone() {
        for v in u + 1..nodes.end {
            edges.push((u, v));
        }
    }
}

/// Parses the edge-list format: a header `n <count>`, then one `u v` pair per
/// line. Blank lines and `#` comments are ignored.
pub fn load_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut n: Option<usize> = None;
    let mut adj: Vec<Vec<usize>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| GraphError::Parse { line, msg: format!("expected an integer, found {s:?}") })
        };
        match n {
            None => {
                if fields.len() != 2 || fields[0] != "n" {
                    return Err(GraphError::Parse { line, msg: "expected header `n <count>`".into() });
                }
                let count = parse(fields[1])?;
                if count == 0 {
                    return Err(GraphError::Parse { line, msg: "n must be at least 1".into() });
                }
                n = Some(count);
                adj = vec![Vec::new(); count];
            }
            Some(count) => {
                if fields.len() != 2 {
                    return Err(GraphError::Parse { line, msg: "expected `u v`".into() });
                }
                let (u, v) = (parse(fields[0])?, parse(fields[1])?);
                for node in [u, v] {
                    if node >= count {
                        return Err(GraphError::NodeOutOfRange { node, n: count, line });
                    }
                }
                if u == v {
                    return Err(GraphError::SelfLoop { line });
                }
                adj[u].push(v);
                adj[v].push(u);
            }
        }
    }
    if n.is_none() {
        return Err(GraphError::Parse { line: 1, msg: "missing header `n <count>`".into() });
    }
    Graph::finish(adj)
}

/// Shortest-path spanning tree of a [`Graph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsTree {
    pub root: usize,
    /// `None` only at the root.
    pub parent: Vec<Option<usize>>,
    /// Hop distance from the root.
    pub depth: Vec<usize>,
    /// Largest depth.
    pub l_max: usize,
}

impl BfsTree {
    pub fn n(&self) -> usize {
        self.depth.len()
    }

    /// Number of nodes at each depth `0..=l_max`.
    pub fn level_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.l_max + 1];
        for &d in &self.depth {
            sizes[d] += 1;
        }
        sizes
    }
}
