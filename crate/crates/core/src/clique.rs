//! Bitset branch-and-bound maximum clique (greedy-coloring bound, in the
//! style of MCS/BBMC).
//!
//! The search is sequential and deterministic: the same graph, bounds and
//! budget always produce the same clique and node count.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Bitset {
    blocks: Vec<u64>,
}

impl Bitset {
    fn empty(len: usize) -> Self {
        Self {
            blocks: vec![0; len.div_ceil(64)],
        }
    }

    fn full(len: usize) -> Self {
        let mut b = Self::empty(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    #[inline]
    fn insert(&mut self, i: usize) {
        self.blocks[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    fn remove(&mut self, i: usize) {
        self.blocks[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    fn contains(&self, i: usize) -> bool {
        self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    fn count(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    #[inline]
    fn first(&self) -> Option<usize> {
        self.blocks
            .iter()
            .enumerate()
            .find(|(_, &b)| b != 0)
            .map(|(i, &b)| i * 64 + b.trailing_zeros() as usize)
    }

    fn intersect(&self, other: &Self) -> Self {
        Self {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    fn subtract_in_place(&mut self, other: &Self) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= !b;
        }
    }
}

/// Undirected simple graph with bitset adjacency rows.
#[derive(Debug, Clone)]
pub struct Graph {
    order: usize,
    adjacency: Vec<Bitset>,
}

impl Graph {
    pub fn new(order: usize) -> Self {
        Self {
            order,
            adjacency: vec![Bitset::empty(order); order],
        }
    }

    /// Graph on `0..order` with an edge wherever `adjacent(u, v)` holds.
    pub fn from_fn(order: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Self::new(order);
        for u in 0..order {
            for v in u + 1..order {
                if adjacent(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "self loops are not allowed");
        self.adjacency[u].insert(v);
        self.adjacency[v].insert(u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].count()
    }

    /// Subgraph induced by `vertices`, renumbered in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut g = Self::new(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            let row = &self.adjacency[u];
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if row.contains(v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SearchStatus {
    /// The whole tree was explored; the clique is maximum (or none larger
    /// than the floor exists).
    Complete,
    /// Stopped as soon as a clique of the target size appeared.
    TargetReached,
    /// Node budget ran out before the tree was exhausted.
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueOutcome {
    /// Largest clique found that beats the floor; empty if none did.
    pub clique: Vec<usize>,
    pub status: SearchStatus,
    pub nodes: u64,
    /// Budget consumed: each node costs one unit per 64 graph vertices.
    pub work: u64,
}

/// Search limits for [`max_clique`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CliqueLimits {
    /// Only cliques strictly larger than this are of interest.
    pub floor: usize,
    /// Stop once a clique of at least this size is found.
    pub target: Option<usize>,
    /// Maximum work: each search node costs one unit per 64 graph
    /// vertices, so the budget tracks running time across graph sizes.
    pub budget: u64,
}

impl Default for CliqueLimits {
    fn default() -> Self {
        Self {
            floor: 0,
            target: None,
            budget: u64::MAX,
        }
    }
}

struct Search<'g> {
    graph: &'g Graph,
    best: Vec<usize>,
    best_len: usize,
    target: usize,
    budget: u64,
    node_cost: u64,
    nodes: u64,
    work: u64,
    stop: Option<SearchStatus>,
}

impl Search<'_> {
    /// Greedy sequential coloring of `p`. Returns the vertices whose color is
    /// at least `kmin`, in non-decreasing color order, with their colors.
    fn color(&self, p: &Bitset, kmin: usize) -> (Vec<usize>, Vec<usize>) {
        let mut uncolored = p.clone();
        let mut order = Vec::new();
        let mut colors = Vec::new();
        let mut k = 0;
        while !uncolored.is_empty() {
            k += 1;
            let mut open = uncolored.clone();
            while let Some(v) = open.first() {
                uncolored.remove(v);
                open.remove(v);
                open.subtract_in_place(&self.graph.adjacency[v]);
                if k >= kmin {
                    order.push(v);
                    colors.push(k);
                }
            }
        }
        (order, colors)
    }

    fn expand(&mut self, clique: &mut Vec<usize>, mut p: Bitset) {
        self.nodes += 1;
        self.work += self.node_cost;
        if self.work > self.budget {
            self.stop = Some(SearchStatus::BudgetExhausted);
            return;
        }
        let kmin = (self.best_len + 1).saturating_sub(clique.len()).max(1);
        let (order, colors) = self.color(&p, kmin);
        for i in (0..order.len()).rev() {
            if self.stop.is_some() || clique.len() + colors[i] <= self.best_len {
                return;
            }
            let v = order[i];
            clique.push(v);
            let next = p.intersect(&self.graph.adjacency[v]);
            if next.is_empty() {
                if clique.len() > self.best_len {
                    self.best_len = clique.len();
                    self.best = clique.clone();
                    if self.best_len >= self.target {
                        self.stop = Some(SearchStatus::TargetReached);
                    }
                }
            } else {
                self.expand(clique, next);
            }
            clique.pop();
            p.remove(v);
        }
    }
}

/// Branch-and-bound maximum clique. Vertices are branched in reverse of
/// their index order, so callers control the ordering heuristic by how
/// they number the vertices.
pub fn max_clique(graph: &Graph, limits: CliqueLimits) -> CliqueOutcome {
    let mut search = Search {
        graph,
        best: Vec::new(),
        best_len: limits.floor,
        target: limits.target.unwrap_or(usize::MAX),
        budget: limits.budget,
        node_cost: graph.order().div_ceil(64).max(1) as u64,
        nodes: 0,
        work: 0,
        stop: None,
    };
    if limits.floor >= search.target {
        return CliqueOutcome {
            clique: Vec::new(),
            status: SearchStatus::Complete,
            nodes: 0,
            work: 0,
        };
    }
    if graph.order() > 0 {
        search.expand(&mut Vec::new(), Bitset::full(graph.order()));
    }
    let mut clique = search.best;
    clique.sort_unstable();
    CliqueOutcome {
        clique,
        status: search.stop.unwrap_or(SearchStatus::Complete),
        nodes: search.nodes,
        work: search.work,
    }
}
