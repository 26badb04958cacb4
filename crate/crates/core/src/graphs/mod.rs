//! Problem instances and an exact stable-set oracle.

mod alpha;
pub mod io;

use std::collections::BTreeSet;

use rand::Rng as _;
use thiserror::Error;

pub use alpha::{max_stable_set, MAX_ALPHA_NODES};

use crate::poly::QuotientContext;
use crate::rng;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({0}, {1}) has an endpoint outside 1..={2}")]
    EndpointOutOfRange(usize, usize, usize),
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("graph with {n} nodes exceeds the exact search limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("{0}")]
    Invalid(String),
}

/// Simple undirected graph on nodes `0..n` (rendered 1-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Edges are 0-based unordered pairs.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::EndpointOutOfRange(a + 1, b + 1, n));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a + 1));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self { n, edges: set })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self { n, edges }
    }

    /// Cycle `1-2-...-n-1`; `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 nodes");
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    /// Outer 5-cycle on 0..5, inner pentagram on 5..10, spokes `i -- i+5`.
    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        Self::new(10, outer.chain(inner).chain(spokes)).expect("valid petersen")
    }

    /// Erdős–Rényi G(n, p): each pair `(i, j)`, `i < j` in lexicographic
    /// order, is kept when a uniform draw from the `"gnp"` stream is below `p`.
    pub fn random_gnp(n: usize, p: f64, seed: u64) -> Self {
        let mut r = rng::stream(seed, "gnp");
        let mut edges = BTreeSet::new();
        for i in 0..n {
            for j in i + 1..n {
                if r.gen::<f64>() < p {
                    edges.insert((i, j));
                }
            }
        }
        Self { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// 0-based edges with `i < j`, sorted.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn is_stable(&self, nodes: &[usize]) -> bool {
        nodes
            .iter()
            .enumerate()
            .all(|(k, &a)| nodes[k + 1..].iter().all(|&b| a != b && !self.has_edge(a, b)))
    }

    pub fn context(&self) -> QuotientContext {
        let edges: Vec<_> = self.edges().collect();
        QuotientContext::new(self.n, &edges).expect("graph edges are valid")
    }

    /// Relabels node `i` to `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        Self::new(self.n, self.edges().map(|(a, b)| (perm[a], perm[b]))).expect("permutation")
    }
}
