//! Exact and heuristic GTSP solvers.
//!
//! A minimum closed walk through all vertices has the weight of a minimum
//! Hamiltonian cycle in the shortest-path metric closure, so every solver
//! works on the closure and expands the cycle back into a walk of the graph.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{metric_closure, verify_tour, DistanceMatrix, GraphError, Tour, Weight};
use crate::instance::GtspInstance;

/// Default vertex-count guard for [`solve_exact`].
pub const DEFAULT_EXACT_LIMIT: usize = 13;
/// Default vertex-count guard for [`solve_permutation_bruteforce`].
pub const DEFAULT_BRUTEFORCE_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("instance has no vertices")]
    EmptyGraph,
    #[error("graph is disconnected, no tour exists")]
    Disconnected,
    #[error("instance has {vertex_count} vertices, solver limit is {limit}")]
    TooLarge { vertex_count: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub tour: Tour,
    pub optimal: bool,
}

fn closure(inst: &GtspInstance, limit: Option<usize>) -> Result<DistanceMatrix, SolveError> {
    let n = inst.graph.vertex_count();
    if n == 0 {
        return Err(SolveError::EmptyGraph);
    }
    if let Some(limit) = limit.filter(|&l| n > l) {
        return Err(SolveError::TooLarge {
            vertex_count: n,
            limit,
        });
    }
    metric_closure(&inst.graph).map_err(|e| match e {
        GraphError::Disconnected => SolveError::Disconnected,
        other => unreachable!("metric closure failed: {other}"),
    })
}

fn finish(inst: &GtspInstance, d: &DistanceMatrix, order: &[usize], optimal: bool) -> SolveResult {
    let walk = d.expand_cycle(order);
    let tour = verify_tour(&inst.graph, &walk).expect("expanded cycle is a tour");
    debug_assert_eq!(tour.weight(), d.cycle_weight(order));
    SolveResult { tour, optimal }
}

/// Optimal tour by Held–Karp dynamic programming over subsets.
pub fn solve_exact(inst: &GtspInstance, limit: usize) -> Result<SolveResult, SolveError> {
    let d = closure(inst, Some(limit))?;
    let n = d.vertex_count();
    if n == 1 {
        return Ok(finish(inst, &d, &[0], true));
    }
    // paths start at 0; bit i of a mask stands for vertex i + 1
    let rest = n - 1;
    let full = (1usize << rest) - 1;
    const INF: Weight = Weight::MAX;
    let mut cost = vec![INF; (full + 1) * rest];
    let mut parent = vec![usize::MAX; (full + 1) * rest];
    for j in 0..rest {
        cost[(1 << j) * rest + j] = d.get(0, j + 1);
    }
    for mask in 1..=full {
        for j in 0..rest {
            let here = cost[mask * rest + j];
            if here == INF || mask & (1 << j) == 0 {
                continue;
            }
            for k in 0..rest {
                if mask & (1 << k) != 0 {
                    continue;
                }
                let next = mask | (1 << k);
                let cand = here + d.get(j + 1, k + 1);
                if cand < cost[next * rest + k] {
                    cost[next * rest + k] = cand;
                    parent[next * rest + k] = j;
                }
            }
        }
    }
    let last = (0..rest)
        .min_by_key(|&j| (cost[full * rest + j] + d.get(j + 1, 0), j))
        .expect("at least one vertex besides 0");

    let mut order = Vec::with_capacity(n);
    let (mut mask, mut j) = (full, last);
    while j != usize::MAX {
        order.push(j + 1);
        let p = parent[mask * rest + j];
        mask &= !(1 << j);
        j = p;
    }
    order.push(0);
    order.reverse();
    Ok(finish(inst, &d, &order, true))
}

/// Optimal tour by trying every vertex order. Only meant to cross-check
/// [`solve_exact`].
pub fn solve_permutation_bruteforce(
    inst: &GtspInstance,
    limit: usize,
) -> Result<SolveResult, SolveError> {
    let d = closure(inst, Some(limit))?;
    let n = d.vertex_count();
    let mut best: Option<(Weight, Vec<usize>)> = None;
    for perm in (1..n).permutations(n - 1) {
        let order: Vec<usize> = std::iter::once(0).chain(perm).collect();
        let w = d.cycle_weight(&order);
        if best.as_ref().is_none_or(|(b, _)| w < *b) {
            best = Some((w, order));
        }
    }
    let (_, order) = best.expect("at least the identity order");
    Ok(finish(inst, &d, &order, true))
}

fn nearest_neighbor_order(d: &DistanceMatrix, start: usize) -> Vec<usize> {
    let n = d.vertex_count();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut cur = start;
    visited[cur] = true;
    order.push(cur);
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !visited[v])
            .min_by_key(|&v| (d.get(cur, v), v))
            .unwrap();
        visited[next] = true;
        order.push(next);
        cur = next;
    }
    order
}

/// First-improvement 2-opt until no exchange shortens the cycle.
fn two_opt(d: &DistanceMatrix, order: &mut [usize]) {
    let n = order.len();
    if n < 4 {
        return;
    }
    let mut improved = true;
    while improved {
        improved = false;
        for i in 0..n - 1 {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b) = (order[i], order[i + 1]);
                let (c, e) = (order[j], order[(j + 1) % n]);
                if d.get(a, c) + d.get(b, e) < d.get(a, b) + d.get(c, e) {
                    order[i + 1..=j].reverse();
                    improved = true;
                }
            }
        }
    }
}

fn seeded_start(n: usize, seed: u64) -> usize {
    ChaCha8Rng::seed_from_u64(seed).gen_range(0..n)
}

/// Nearest-neighbor tour from a seed-chosen start vertex, without
/// improvement.
pub fn solve_nearest_neighbor(inst: &GtspInstance, seed: u64) -> Result<SolveResult, SolveError> {
    let d = closure(inst, None)?;
    let order = nearest_neighbor_order(&d, seeded_start(d.vertex_count(), seed));
    Ok(finish(inst, &d, &order, false))
}

/// Nearest-neighbor construction improved by 2-opt. Deterministic for a
/// fixed seed.
pub fn solve_heuristic(inst: &GtspInstance, seed: u64) -> Result<SolveResult, SolveError> {
    let d = closure(inst, None)?;
    let mut order = nearest_neighbor_order(&d, seeded_start(d.vertex_count(), seed));
    two_opt(&d, &mut order);
    Ok(finish(inst, &d, &order, false))
}
