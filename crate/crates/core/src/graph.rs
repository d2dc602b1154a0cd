//! Weighted simple undirected graphs, closed walks, and the shortest-path
//! metric used by the exact solvers.
//!
//! Vertices are dense ids `0..n`. Edge weights are nonnegative integers and
//! every computation in this crate is exact integer arithmetic.

use std::collections::VecDeque;

use thiserror::Error;

/// Edge and walk weight.
pub type Weight = u64;

/// Upper bound on the total edge weight of a graph.
///
/// Tours may traverse every edge twice and the matching works with signed
/// potentials, so the total is kept well below `i64::MAX`.
pub const MAX_TOTAL_WEIGHT: Weight = (i64::MAX / 4) as Weight;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for graph with {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("total edge weight exceeds {MAX_TOTAL_WEIGHT}")]
    WeightOverflow,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex {0} has no neighbors")]
    IsolatedVertex(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TourError {
    #[error("walk is empty")]
    Empty,
    #[error("walk is not closed: starts at {first}, ends at {last}")]
    NotClosed { first: usize, last: usize },
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(usize),
    #[error("step {step}: {{{from}, {to}}} is not an edge")]
    NonEdgeStep { step: usize, from: usize, to: usize },
    #[error("vertex {0} is never visited")]
    MissingVertex(usize),
    #[error("walk weight overflows")]
    WeightOverflow,
}

/// Simple undirected graph with nonnegative integer edge weights.
///
/// Immutable after construction. Adjacency lists are sorted by neighbor id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    vertex_count: usize,
    // (u, v, w) with u < v, sorted lexicographically
    edges: Vec<(usize, usize, Weight)>,
    adjacency: Vec<Vec<(usize, Weight)>>,
    total_weight: Weight,
}

impl WeightedGraph {
    /// Builds a graph from `(u, v, w)` triples. Endpoint order is irrelevant;
    /// self-loops, duplicate pairs and out-of-range ids are rejected.
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, Weight)>,
    {
        let mut list = Vec::new();
        let mut total: Weight = 0;
        for (a, b, w) in edges {
            for vertex in [a, b] {
                if vertex >= vertex_count {
                    return Err(GraphError::VertexOutOfRange {
                        vertex,
                        vertex_count,
                    });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            total = total
                .checked_add(w)
                .filter(|t| *t <= MAX_TOTAL_WEIGHT)
                .ok_or(GraphError::WeightOverflow)?;
            list.push((a.min(b), a.max(b), w));
        }
        list.sort_unstable();
        if let Some(pair) = list
            .windows(2)
            .find(|p| (p[0].0, p[0].1) == (p[1].0, p[1].1))
        {
            return Err(GraphError::DuplicateEdge(pair[0].0, pair[0].1));
        }

        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v, w) in &list {
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
        }
        for row in &mut adjacency {
            row.sort_unstable();
        }
        Ok(Self {
            vertex_count,
            edges: list,
            adjacency,
            total_weight: total,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v, w)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize, Weight)] {
        &self.edges
    }

    /// Neighbors of `v` with the connecting edge weight, ascending by id.
    pub fn neighbors(&self, v: usize) -> &[(usize, Weight)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn total_weight(&self) -> Weight {
        self.total_weight
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<Weight> {
        let row = self.adjacency.get(u)?;
        row.binary_search_by_key(&v, |&(n, _)| n)
            .ok()
            .map(|i| row[i].1)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.weight(u, v).is_some()
    }

    /// Subgraph induced on `keep`, with kernel id `i` standing for `keep[i]`.
    ///
    /// `keep` must hold distinct in-range ids.
    pub fn induced_subgraph(&self, keep: &[usize]) -> WeightedGraph {
        let mut new_id = vec![usize::MAX; self.vertex_count];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v, _)| new_id[u] != usize::MAX && new_id[v] != usize::MAX)
            .map(|&(u, v, w)| (new_id[u], new_id[v], w));
        WeightedGraph::new(keep.len(), edges).expect("induced subgraph of a valid graph is valid")
    }
}

/// True iff every vertex is reachable from vertex 0. Graphs with at most one
/// vertex are connected.
pub fn is_connected(g: &WeightedGraph) -> bool {
    let n = g.vertex_count();
    if n <= 1 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &(v, _) in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    reached == n
}

/// A closed walk through every vertex of its graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tour {
    vertices: Vec<usize>,
    weight: Weight,
}

impl Tour {
    pub(crate) fn from_parts(vertices: Vec<usize>, weight: Weight) -> Self {
        Self { vertices, weight }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.vertices
    }
}

/// Checks that `walk` is a closed walk of `g` visiting every vertex and
/// returns it with its weight. `(v)` is the zero-weight tour of a one-vertex
/// graph.
pub fn verify_tour(g: &WeightedGraph, walk: &[usize]) -> Result<Tour, TourError> {
    let (&first, &last) = match (walk.first(), walk.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(TourError::Empty),
    };
    let n = g.vertex_count();
    if let Some(&bad) = walk.iter().find(|&&v| v >= n) {
        return Err(TourError::UnknownVertex(bad));
    }
    if first != last {
        return Err(TourError::NotClosed { first, last });
    }
    let mut weight: Weight = 0;
    for (step, pair) in walk.windows(2).enumerate() {
        let w = g.weight(pair[0], pair[1]).ok_or(TourError::NonEdgeStep {
            step: step + 1,
            from: pair[0],
            to: pair[1],
        })?;
        weight = weight.checked_add(w).ok_or(TourError::WeightOverflow)?;
    }
    let mut seen = vec![false; n];
    for &v in walk {
        seen[v] = true;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(TourError::MissingVertex(missing));
    }
    Ok(Tour {
        vertices: walk.to_vec(),
        weight,
    })
}

/// The neighbor of `v` with the cheapest incident edge, ties broken by
/// smallest id, together with that weight.
pub fn min_incident_weight(g: &WeightedGraph, v: usize) -> Result<(usize, Weight), GraphError> {
    g.neighbors(v)
        .iter()
        .min_by_key(|&&(u, w)| (w, u))
        .copied()
        .ok_or(GraphError::IsolatedVertex(v))
}

/// All-pairs shortest-path distances with one recorded shortest path per pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<Weight>,
    // next[u * n + v]: first step on the recorded shortest u -> v path
    next: Vec<usize>,
}

impl DistanceMatrix {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> Weight {
        self.dist[u * self.n + v]
    }

    /// Vertex sequence of the recorded shortest path, both endpoints included.
    pub fn path(&self, u: usize, v: usize) -> Vec<usize> {
        let mut out = vec![u];
        let mut cur = u;
        while cur != v {
            cur = self.next[cur * self.n + v];
            out.push(cur);
        }
        out
    }

    /// Expands a cyclic vertex order into a closed walk of the underlying
    /// graph by joining consecutive vertices with their shortest paths.
    pub fn expand_cycle(&self, order: &[usize]) -> Vec<usize> {
        let Some(&start) = order.first() else {
            return Vec::new();
        };
        let mut walk = vec![start];
        for (i, &u) in order.iter().enumerate() {
            let v = order[(i + 1) % order.len()];
            walk.extend(self.path(u, v).into_iter().skip(1));
        }
        walk
    }

    /// Weight of the cyclic order measured in closure distances.
    pub fn cycle_weight(&self, order: &[usize]) -> Weight {
        if order.len() < 2 {
            return 0;
        }
        (0..order.len())
            .map(|i| self.get(order[i], order[(i + 1) % order.len()]))
            .sum()
    }
}

/// Shortest-path metric closure (Floyd–Warshall). Among equal-length paths,
/// the one through smaller intermediate ids is recorded.
pub fn metric_closure(g: &WeightedGraph) -> Result<DistanceMatrix, GraphError> {
    if !is_connected(g) {
        return Err(GraphError::Disconnected);
    }
    let n = g.vertex_count();
    const INF: Weight = Weight::MAX;
    let mut dist = vec![INF; n * n];
    let mut next = vec![usize::MAX; n * n];
    for v in 0..n {
        dist[v * n + v] = 0;
        next[v * n + v] = v;
    }
    for &(u, v, w) in g.edges() {
        dist[u * n + v] = w;
        dist[v * n + u] = w;
        next[u * n + v] = v;
        next[v * n + u] = u;
    }
    for k in 0..n {
        for i in 0..n {
            let dik = dist[i * n + k];
            if dik == INF {
                continue;
            }
            for j in 0..n {
                let dkj = dist[k * n + j];
                if dkj == INF {
                    continue;
                }
                if dik + dkj < dist[i * n + j] {
                    dist[i * n + j] = dik + dkj;
                    next[i * n + j] = next[i * n + k];
                }
            }
        }
    }
    Ok(DistanceMatrix { n, dist, next })
}
