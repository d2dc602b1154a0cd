//! The hop graph: a bipartite graph between ordered pairs of distinct cover
//! vertices and the non-cover vertices.
//!
//! A non-cover vertex `s` adjacent to both `u` and `v` can be traversed by
//! the hop `(u, s, v)` instead of the cheapest loop `(w, s, w)`. The edge
//! `((u, v), s)` carries the extra cost of doing so,
//! `w(u, s) + w(s, v) - 2 * w_min(s)`, which is never negative.

use std::io::{self, Write};

use thiserror::Error;

use crate::cover::VertexCover;
use crate::graph::{min_incident_weight, Weight, WeightedGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HopGraphError {
    #[error("non-cover vertex {0} has no neighbors")]
    IsolatedNonCoverVertex(usize),
    #[error("{{{0}, {1}}} is not an edge")]
    NonEdge(usize, usize),
    #[error("hop endpoints must differ, got {0} twice")]
    DegenerateHop(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HopEdge {
    /// Index into [`HopGraph::x_nodes`].
    pub x: usize,
    /// Index into [`HopGraph::y_nodes`].
    pub y: usize,
    pub penalty: Weight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopGraph {
    x_nodes: Vec<(usize, usize)>,
    y_nodes: Vec<usize>,
    edges: Vec<HopEdge>,
}

impl HopGraph {
    /// Ordered cover pairs `(u, v)`, `u != v`, in lexicographic order.
    pub fn x_nodes(&self) -> &[(usize, usize)] {
        &self.x_nodes
    }

    /// Non-cover vertices in ascending order.
    pub fn y_nodes(&self) -> &[usize] {
        &self.y_nodes
    }

    /// Edges sorted by `(x, y)`.
    pub fn edges(&self) -> &[HopEdge] {
        &self.edges
    }

    /// Writes one `x:(u,v) y:s penalty:p` line per edge.
    pub fn write_dump<W: Write>(&self, mut out: W) -> io::Result<()> {
        for e in &self.edges {
            let (u, v) = self.x_nodes[e.x];
            writeln!(
                out,
                "x:({u},{v}) y:{} penalty:{}",
                self.y_nodes[e.y], e.penalty
            )?;
        }
        Ok(())
    }
}

/// Extra cost of traversing `s` by the hop `(u, s, v)` rather than by its
/// cheapest loop. Symmetric in `u` and `v`.
pub fn hop_penalty(
    g: &WeightedGraph,
    u: usize,
    s: usize,
    v: usize,
) -> Result<Weight, HopGraphError> {
    if u == v {
        return Err(HopGraphError::DegenerateHop(u));
    }
    let us = g.weight(u, s).ok_or(HopGraphError::NonEdge(u, s))?;
    let sv = g.weight(s, v).ok_or(HopGraphError::NonEdge(s, v))?;
    let (_, cheapest) = min_incident_weight(g, s).expect("s has neighbors u and v");
    Ok(us + sv - 2 * cheapest)
}

/// Builds the hop graph of `g` with respect to `cover`.
pub fn build_hop_graph(g: &WeightedGraph, cover: &VertexCover) -> Result<HopGraph, HopGraphError> {
    let n = g.vertex_count();
    let cover_ids = cover.vertices();
    let k = cover_ids.len();
    // position of each cover vertex within the sorted cover
    let mut rank = vec![usize::MAX; n];
    for (i, &c) in cover_ids.iter().enumerate() {
        rank[c] = i;
    }

    let x_nodes: Vec<(usize, usize)> = cover_ids
        .iter()
        .flat_map(|&u| {
            cover_ids
                .iter()
                .filter(move |&&v| v != u)
                .map(move |&v| (u, v))
        })
        .collect();
    debug_assert_eq!(x_nodes.len(), k * k.saturating_sub(1));
    let x_index = |i: usize, j: usize| i * (k - 1) + if j < i { j } else { j - 1 };

    let y_nodes: Vec<usize> = (0..n).filter(|&v| rank[v] == usize::MAX).collect();
    let mut edges = Vec::new();
    for (yi, &s) in y_nodes.iter().enumerate() {
        let (_, cheapest) =
            min_incident_weight(g, s).map_err(|_| HopGraphError::IsolatedNonCoverVertex(s))?;
        let around = g.neighbors(s);
        for &(u, wu) in around {
            for &(v, wv) in around {
                if u == v {
                    continue;
                }
                // neighbors of a non-cover vertex lie in the cover
                let (i, j) = (rank[u], rank[v]);
                assert!(
                    i != usize::MAX && j != usize::MAX,
                    "edge {{{s}, {u}}} or {{{s}, {v}}} is not covered"
                );
                let penalty = (wu + wv)
                    .checked_sub(2 * cheapest)
                    .expect("hop penalty is nonnegative");
                edges.push(HopEdge {
                    x: x_index(i, j),
                    y: yi,
                    penalty,
                });
            }
        }
    }
    edges.sort_unstable();
    Ok(HopGraph {
        x_nodes,
        y_nodes,
        edges,
    })
}
