//! Vertex covers: the matching-based 2-approximation used by the reduction,
//! exact minimum covers, and validation of user-supplied covers.

use itertools::Itertools;
use thiserror::Error;

use crate::graph::WeightedGraph;

/// Default vertex-count guard for [`exact_cover`].
pub const DEFAULT_EXACT_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoverKind {
    /// Endpoints of a maximal matching; at most twice the optimum.
    Approx2,
    /// Minimum cardinality.
    Exact,
    /// Supplied by the caller and checked.
    User,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("graph has {vertex_count} vertices, exact cover limit is {limit}")]
    TooLarge { vertex_count: usize, limit: usize },
    #[error("edge {{{0}, {1}}} is not covered")]
    NotACover(usize, usize),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(usize),
}

/// A set of vertices touching every edge of its graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexCover {
    vertices: Vec<usize>,
    kind: CoverKind,
}

impl VertexCover {
    /// Sorted, duplicate-free vertex ids.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn kind(&self) -> CoverKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Membership mask over `0..vertex_count`.
    pub fn mask(&self, vertex_count: usize) -> Vec<bool> {
        let mut mask = vec![false; vertex_count];
        for &v in &self.vertices {
            mask[v] = true;
        }
        mask
    }
}

/// Both endpoints of the greedy maximal matching obtained by scanning edges
/// in ascending `(u, v)` order.
pub fn approx_cover(g: &WeightedGraph) -> VertexCover {
    let mut taken = vec![false; g.vertex_count()];
    for &(u, v, _) in g.edges() {
        if !taken[u] && !taken[v] {
            taken[u] = true;
            taken[v] = true;
        }
    }
    VertexCover {
        vertices: (0..g.vertex_count()).filter(|&v| taken[v]).collect(),
        kind: CoverKind::Approx2,
    }
}

fn covers(g: &WeightedGraph, mask: &[bool]) -> bool {
    g.edges().iter().all(|&(u, v, _)| mask[u] || mask[v])
}

/// Minimum vertex cover by enumerating subsets in order of increasing size.
/// Refuses graphs with more than `limit` vertices.
pub fn exact_cover(g: &WeightedGraph, limit: usize) -> Result<VertexCover, CoverError> {
    let n = g.vertex_count();
    if n > limit {
        return Err(CoverError::TooLarge {
            vertex_count: n,
            limit,
        });
    }
    let mut mask = vec![false; n];
    for size in 0..=n {
        for subset in (0..n).combinations(size) {
            subset.iter().for_each(|&v| mask[v] = true);
            if covers(g, &mask) {
                return Ok(VertexCover {
                    vertices: subset,
                    kind: CoverKind::Exact,
                });
            }
            subset.iter().for_each(|&v| mask[v] = false);
        }
    }
    unreachable!("the full vertex set is always a cover")
}

/// Minimum vertex cover by a bounded search tree with iterative deepening:
/// some endpoint of the first uncovered edge must be in the cover.
///
/// Runs in `O(2^k * m)` for cover size `k`, so it scales to large sparse
/// graphs with small covers. Returns `None` when no cover of at most
/// `max_size` vertices exists.
pub fn exact_cover_branching(g: &WeightedGraph, max_size: usize) -> Option<VertexCover> {
    fn search(g: &WeightedGraph, mask: &mut [bool], budget: usize) -> bool {
        let Some(&(u, v, _)) = g.edges().iter().find(|&&(u, v, _)| !mask[u] && !mask[v]) else {
            return true;
        };
        if budget == 0 {
            return false;
        }
        for pick in [u, v] {
            mask[pick] = true;
            if search(g, mask, budget - 1) {
                return true;
            }
            mask[pick] = false;
        }
        false
    }

    let n = g.vertex_count();
    (0..=max_size.min(n)).find_map(|budget| {
        let mut mask = vec![false; n];
        search(g, &mut mask, budget).then(|| VertexCover {
            vertices: (0..n).filter(|&v| mask[v]).collect(),
            kind: CoverKind::Exact,
        })
    })
}

/// Accepts `vertices` as a cover of `g` if every edge has an endpoint in it.
pub fn validate_cover(g: &WeightedGraph, vertices: &[usize]) -> Result<VertexCover, CoverError> {
    let n = g.vertex_count();
    if let Some(&bad) = vertices.iter().find(|&&v| v >= n) {
        return Err(CoverError::UnknownVertex(bad));
    }
    let mut sorted = vertices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut mask = vec![false; n];
    sorted.iter().for_each(|&v| mask[v] = true);
    if let Some(&(u, v, _)) = g.edges().iter().find(|&&(u, v, _)| !mask[u] && !mask[v]) {
        return Err(CoverError::NotACover(u, v));
    }
    Ok(VertexCover {
        vertices: sorted,
        kind: CoverKind::User,
    })
}
