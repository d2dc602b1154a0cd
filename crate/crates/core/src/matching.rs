//! Maximum-cardinality matchings of minimum cost in the hop graph.
//!
//! The solver runs successive shortest augmenting paths on the unit-capacity
//! network `source -> Y -> X -> sink`, with Dijkstra on reduced costs. All
//! penalties are nonnegative, so zero initial potentials are feasible. After
//! `k` augmentations the matching has minimum cost among all matchings of
//! size `k`; the loop stops once no augmenting path remains, at which point
//! the cardinality is maximum.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::graph::Weight;
use crate::hopgraph::{HopEdge, HopGraph};

/// Default edge-count guard for [`brute_force_matching`].
pub const DEFAULT_BRUTE_FORCE_LIMIT: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("hop graph has {edge_count} edges, brute-force limit is {limit}")]
    TooLarge { edge_count: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matching {
    /// `(x, y)` index pairs sorted by `x`.
    pub pairs: Vec<(usize, usize)>,
    pub cardinality: usize,
    pub total_cost: Weight,
}

impl Matching {
    fn from_edges<'a>(chosen: impl IntoIterator<Item = &'a HopEdge>) -> Self {
        let mut pairs = Vec::new();
        let mut total_cost = 0;
        for e in chosen {
            pairs.push((e.x, e.y));
            total_cost += e.penalty;
        }
        pairs.sort_unstable();
        Self {
            cardinality: pairs.len(),
            pairs,
            total_cost,
        }
    }

    /// Checks disjointness, that every pair is an edge, and the stored totals.
    pub fn is_valid_for(&self, edges: &[HopEdge]) -> bool {
        let mut xs: Vec<usize> = self.pairs.iter().map(|p| p.0).collect();
        let mut ys: Vec<usize> = self.pairs.iter().map(|p| p.1).collect();
        xs.sort_unstable();
        ys.sort_unstable();
        let disjoint = xs.windows(2).all(|w| w[0] != w[1]) && ys.windows(2).all(|w| w[0] != w[1]);
        let cost: Option<Weight> = self
            .pairs
            .iter()
            .map(|&(x, y)| {
                edges
                    .iter()
                    .filter(|e| e.x == x && e.y == y)
                    .map(|e| e.penalty)
                    .min()
            })
            .sum();
        disjoint && self.cardinality == self.pairs.len() && cost == Some(self.total_cost)
    }
}

const INF: i64 = i64::MAX;

struct Arc {
    to: usize,
    cost: i64,
    residual: bool,
    // index of the reverse arc
    twin: usize,
}

struct Network {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Self {
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
        }
    }

    fn link(&mut self, from: usize, to: usize, cost: i64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc {
            to,
            cost,
            residual: true,
            twin: id + 1,
        });
        self.arcs.push(Arc {
            to: from,
            cost: -cost,
            residual: false,
            twin: id,
        });
        self.out[from].push(id);
        self.out[to].push(id + 1);
        id
    }
}

fn solve(
    x_count: usize,
    y_count: usize,
    edges: &[HopEdge],
    mut on_step: impl FnMut(Matching),
) -> Matching {
    // node layout: source, y nodes, x nodes, sink
    let source = 0;
    let y_node = |y: usize| 1 + y;
    let x_node = |x: usize| 1 + y_count + x;
    let sink = 1 + y_count + x_count;
    let nodes = sink + 1;

    let mut net = Network::new(nodes);
    for y in 0..y_count {
        net.link(source, y_node(y), 0);
    }
    let edge_arcs: Vec<usize> = edges
        .iter()
        .map(|e| {
            let cost = i64::try_from(e.penalty).expect("penalty fits i64");
            net.link(y_node(e.y), x_node(e.x), cost)
        })
        .collect();
    for x in 0..x_count {
        net.link(x_node(x), sink, 0);
    }

    let current = |net: &Network| {
        Matching::from_edges(
            edges
                .iter()
                .zip(&edge_arcs)
                .filter(|(_, &arc)| !net.arcs[arc].residual)
                .map(|(e, _)| e),
        )
    };

    let mut potential = vec![0i64; nodes];
    let mut dist = vec![INF; nodes];
    let mut via = vec![usize::MAX; nodes];
    loop {
        dist.fill(INF);
        via.fill(usize::MAX);
        dist[source] = 0;
        let mut heap = BinaryHeap::from([Reverse((0i64, source))]);
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &a in &net.out[u] {
                let arc = &net.arcs[a];
                if !arc.residual {
                    continue;
                }
                let reduced = arc.cost + potential[u] - potential[arc.to];
                debug_assert!(reduced >= 0, "negative reduced cost");
                let nd = d + reduced;
                if nd < dist[arc.to] {
                    dist[arc.to] = nd;
                    via[arc.to] = a;
                    heap.push(Reverse((nd, arc.to)));
                }
            }
        }
        if dist[sink] == INF {
            break;
        }
        let reach = dist[sink];
        for (p, &d) in potential.iter_mut().zip(&dist) {
            *p += d.min(reach);
        }
        let mut v = sink;
        while v != source {
            let a = via[v];
            net.arcs[a].residual = false;
            let twin = net.arcs[a].twin;
            net.arcs[twin].residual = true;
            v = net.arcs[twin].to;
        }
        on_step(current(&net));
    }
    current(&net)
}

/// Maximum-cardinality matching of minimum total penalty in `h`.
pub fn min_cost_max_matching(h: &HopGraph) -> Matching {
    min_cost_max_bipartite(h.x_nodes().len(), h.y_nodes().len(), h.edges())
}

/// [`min_cost_max_matching`] on a bare bipartite edge list.
pub fn min_cost_max_bipartite(x_count: usize, y_count: usize, edges: &[HopEdge]) -> Matching {
    solve(x_count, y_count, edges, |_| {})
}

/// The intermediate matching after every augmentation, in order. Entry `k`
/// has cardinality `k + 1` and is of minimum cost among matchings of that
/// size.
pub fn augmentation_trace(x_count: usize, y_count: usize, edges: &[HopEdge]) -> Vec<Matching> {
    let mut steps = Vec::new();
    solve(x_count, y_count, edges, |m| steps.push(m));
    steps
}

/// Exhaustive search over all matchings; returns a maximum-cardinality,
/// minimum-cost one. Refuses more than `limit` edges.
pub fn brute_force_matching(h: &HopGraph, limit: usize) -> Result<Matching, MatchingError> {
    brute_force_bipartite(h.x_nodes().len(), h.y_nodes().len(), h.edges(), limit)
}

/// [`brute_force_matching`] on a bare bipartite edge list.
pub fn brute_force_bipartite(
    x_count: usize,
    y_count: usize,
    edges: &[HopEdge],
    limit: usize,
) -> Result<Matching, MatchingError> {
    let best = min_cost_by_cardinality(x_count, y_count, edges, limit)?;
    Ok(best.into_iter().next_back().flatten().unwrap_or_default())
}

/// For each cardinality `k`, a minimum-cost matching of size exactly `k`,
/// found by enumerating every matching. Index `k` is `None` when no matching
/// of that size exists.
pub fn min_cost_by_cardinality(
    x_count: usize,
    y_count: usize,
    edges: &[HopEdge],
    limit: usize,
) -> Result<Vec<Option<Matching>>, MatchingError> {
    if edges.len() > limit {
        return Err(MatchingError::TooLarge {
            edge_count: edges.len(),
            limit,
        });
    }

    struct Search<'a> {
        edges: &'a [HopEdge],
        x_used: Vec<bool>,
        y_used: Vec<bool>,
        chosen: Vec<usize>,
        best: Vec<Option<(Weight, Vec<usize>)>>,
    }

    impl Search<'_> {
        fn run(&mut self, next: usize, cost: Weight) {
            let k = self.chosen.len();
            if self.best[k].as_ref().is_none_or(|(c, _)| cost < *c) {
                self.best[k] = Some((cost, self.chosen.clone()));
            }
            for i in next..self.edges.len() {
                let e = self.edges[i];
                if self.x_used[e.x] || self.y_used[e.y] {
                    continue;
                }
                self.x_used[e.x] = true;
                self.y_used[e.y] = true;
                self.chosen.push(i);
                self.run(i + 1, cost + e.penalty);
                self.chosen.pop();
                self.x_used[e.x] = false;
                self.y_used[e.y] = false;
            }
        }
    }

    let mut search = Search {
        edges,
        x_used: vec![false; x_count],
        y_used: vec![false; y_count],
        chosen: Vec::new(),
        best: vec![None; x_count.min(y_count) + 1],
    };
    search.run(0, 0);
    let mut out: Vec<Option<Matching>> = search
        .best
        .into_iter()
        .map(|b| b.map(|(_, ids)| Matching::from_edges(ids.iter().map(|&i| &edges[i]))))
        .collect();
    while out.len() > 1 && out.last().is_some_and(Option::is_none) {
        out.pop();
    }
    Ok(out)
}
