//! The reduction itself and lifting of kernel tours.
//!
//! Given a vertex cover `C`, every vertex outside `C` is traversed by an
//! optimal tour either by a hop between two cover vertices or by a loop to
//! its cheapest neighbor. A minimum-cost maximum matching in the hop graph
//! picks the set `S` of non-cover vertices worth keeping; every other
//! non-cover vertex is deleted and its cheapest loop is charged to the
//! offset `delta`. The kernel is the subgraph induced on `C ∪ S`, and
//! `OPT(G) = OPT(G') + delta`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::cover::{approx_cover, exact_cover_branching, validate_cover, CoverError, VertexCover};
use crate::graph::{
    is_connected, min_incident_weight, verify_tour, Tour, TourError, Weight, WeightedGraph,
};
use crate::hopgraph::{build_hop_graph, HopGraph, HopGraphError};
use crate::instance::{content_lines, parse_lines, GtspInstance, ParseError};
use crate::matching::{min_cost_max_matching, Matching};

/// How the reduction obtains its vertex cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverStrategy {
    /// Greedy maximal matching, at most twice the minimum.
    Approx,
    /// A minimum cover. Exponential in the cover size only.
    Exact,
    /// Caller-supplied vertex ids, validated first.
    Given(Vec<usize>),
}

impl CoverStrategy {
    pub fn compute(&self, g: &WeightedGraph) -> Result<VertexCover, CoverError> {
        match self {
            CoverStrategy::Approx => Ok(approx_cover(g)),
            CoverStrategy::Exact => {
                let bound = approx_cover(g).len();
                Ok(exact_cover_branching(g, bound)
                    .expect("the approximate cover bounds the search"))
            }
            CoverStrategy::Given(ids) => validate_cover(g, ids),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("instance has no vertices")]
    EmptyGraph,
    #[error("graph is disconnected, no tour exists")]
    Disconnected,
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    HopGraph(#[from] HopGraphError),
    #[error("kernel has no budget (optimization mode)")]
    NotDecisionMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("invalid kernel tour: {0}")]
    InvalidKernelTour(#[source] TourError),
    #[error("anchor {0} does not occur on the tour")]
    AnchorNotOnTour(usize),
    #[error("lifted walk is not a tour of the original graph: {0}")]
    InvalidLiftedTour(#[source] TourError),
    #[error("lifted weight {actual} differs from kernel weight plus offset {expected}")]
    WeightMismatch { expected: Weight, actual: Weight },
}

/// The reduced instance plus everything needed to map solutions back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelResult {
    /// Subgraph induced on `C ∪ S`, with budget `W - delta` when the input
    /// is a feasible decision instance.
    pub kernel: GtspInstance,
    pub original_vertex_count: usize,
    pub original_budget: Option<Weight>,
    /// Twice the summed cheapest-loop weight of all deleted vertices.
    pub delta: Weight,
    /// Deleted vertex -> neighbor closing its cheapest loop (original ids).
    pub loop_map: BTreeMap<usize, usize>,
    /// Kernel vertex id -> original vertex id, ascending.
    pub id_map: Vec<usize>,
    /// The cover used, in original ids.
    pub cover: Vec<usize>,
    /// Set when the budget is smaller than `delta`: no tour can fit.
    pub infeasible: bool,
}

/// Intermediate objects of one reduction, for inspection and debugging.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub result: KernelResult,
    pub cover: VertexCover,
    pub hop_graph: HopGraph,
    pub matching: Matching,
}

impl KernelResult {
    pub fn cover_size(&self) -> usize {
        self.cover.len()
    }

    /// `W - delta`, possibly negative. `None` in optimization mode.
    pub fn reduced_budget(&self) -> Option<i128> {
        self.original_budget
            .map(|w| i128::from(w) - i128::from(self.delta))
    }
}

/// Applies the reduction to `inst`.
pub fn reduce(inst: &GtspInstance, strategy: &CoverStrategy) -> Result<KernelResult, KernelError> {
    reduce_detailed(inst, strategy).map(|r| r.result)
}

/// [`reduce`], keeping the cover, hop graph, and matching.
pub fn reduce_detailed(
    inst: &GtspInstance,
    strategy: &CoverStrategy,
) -> Result<Reduction, KernelError> {
    let g = &inst.graph;
    let n = g.vertex_count();
    if n == 0 {
        return Err(KernelError::EmptyGraph);
    }
    if !is_connected(g) {
        return Err(KernelError::Disconnected);
    }
    let cover = strategy.compute(g)?;
    // a single vertex is already a kernel; nothing outside a cover can be
    // anchored without neighbors
    if n == 1 {
        let hop_graph = build_hop_graph(g, &validate_cover(g, &[0])?)?;
        return Ok(Reduction {
            result: KernelResult {
                kernel: inst.clone(),
                original_vertex_count: 1,
                original_budget: inst.budget,
                delta: 0,
                loop_map: BTreeMap::new(),
                id_map: vec![0],
                cover: cover.vertices().to_vec(),
                infeasible: false,
            },
            cover,
            hop_graph,
            matching: Matching::default(),
        });
    }

    let hop_graph = build_hop_graph(g, &cover)?;
    let matching = min_cost_max_matching(&hop_graph);

    let mut keep = cover.mask(n);
    for &(_, y) in &matching.pairs {
        keep[hop_graph.y_nodes()[y]] = true;
    }
    let mut loop_map = BTreeMap::new();
    let mut delta: Weight = 0;
    for v in (0..n).filter(|&v| !keep[v]) {
        let (anchor, w) = min_incident_weight(g, v).expect("connected graph with n >= 2");
        loop_map.insert(v, anchor);
        delta += 2 * w;
    }
    let id_map: Vec<usize> = (0..n).filter(|&v| keep[v]).collect();
    let kernel_graph = g.induced_subgraph(&id_map);

    let infeasible = inst.budget.is_some_and(|w| w < delta);
    let budget = inst.budget.and_then(|w| w.checked_sub(delta));
    Ok(Reduction {
        result: KernelResult {
            kernel: GtspInstance {
                graph: kernel_graph,
                budget,
            },
            original_vertex_count: n,
            original_budget: inst.budget,
            delta,
            loop_map,
            id_map,
            cover: cover.vertices().to_vec(),
            infeasible,
        },
        cover,
        hop_graph,
        matching,
    })
}

/// Inserts the walk of original ids with a loop `(anchor, v, anchor)` for
/// every deleted vertex `v`, placed right after the anchor's first
/// occurrence.
fn splice_loops(kr: &KernelResult, kernel_tour: &Tour) -> Result<Vec<usize>, LiftError> {
    let mut by_anchor: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (&v, &anchor) in &kr.loop_map {
        by_anchor.entry(anchor).or_default().push(v);
    }
    let mut walk = Vec::with_capacity(kernel_tour.vertices().len() + 2 * kr.loop_map.len());
    for &kv in kernel_tour.vertices() {
        let v = kr.id_map[kv];
        walk.push(v);
        if let Some(deleted) = by_anchor.remove(&v) {
            for s in deleted {
                walk.push(s);
                walk.push(v);
            }
        }
    }
    match by_anchor.keys().next() {
        Some(&anchor) => Err(LiftError::AnchorNotOnTour(anchor)),
        None => Ok(walk),
    }
}

/// Turns a tour of the kernel (kernel ids) into a tour of the original
/// graph (original ids) of weight `kernel weight + delta`.
///
/// The original graph is not needed; the result is checked to be closed and
/// to visit every original vertex.
pub fn lift(kr: &KernelResult, kernel_walk: &[usize]) -> Result<Tour, LiftError> {
    let kernel_tour =
        verify_tour(&kr.kernel.graph, kernel_walk).map_err(LiftError::InvalidKernelTour)?;
    let walk = splice_loops(kr, &kernel_tour)?;
    let mut seen = vec![false; kr.original_vertex_count];
    for &v in &walk {
        seen[v] = true;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(LiftError::InvalidLiftedTour(TourError::MissingVertex(
            missing,
        )));
    }
    Ok(Tour::from_parts(walk, kernel_tour.weight() + kr.delta))
}

/// [`lift`], then verifies the result against the original graph and checks
/// that its weight is exactly `kernel weight + delta`.
pub fn lift_verified(
    kr: &KernelResult,
    original: &WeightedGraph,
    kernel_walk: &[usize],
) -> Result<Tour, LiftError> {
    let lifted = lift(kr, kernel_walk)?;
    let checked = verify_tour(original, lifted.vertices()).map_err(LiftError::InvalidLiftedTour)?;
    if checked.weight() != lifted.weight() {
        return Err(LiftError::WeightMismatch {
            expected: lifted.weight(),
            actual: checked.weight(),
        });
    }
    Ok(checked)
}

/// Whether a kernel tour of the given weight answers the decision instance
/// with yes; equivalently, whether its lift fits the original budget.
pub fn decide(kr: &KernelResult, kernel_tour_weight: Weight) -> Result<bool, KernelError> {
    let budget = kr.reduced_budget().ok_or(KernelError::NotDecisionMode)?;
    Ok(!kr.infeasible && i128::from(kernel_tour_weight) <= budget)
}

const META_MAGIC: &str = "gtsp-kernel-meta 1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetaError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unexpected end of metadata, expected {0}")]
    Truncated(&'static str),
    #[error("embedded kernel: {0}")]
    Kernel(#[from] ParseError),
    #[error("inconsistent metadata: {0}")]
    Inconsistent(String),
}

impl KernelResult {
    /// Serializes the result, including the kernel instance, as text.
    pub fn to_meta_text(&self) -> String {
        let mut out = String::new();
        let opt = |w: Option<Weight>| w.map_or_else(|| "-".to_string(), |w| w.to_string());
        writeln!(out, "{META_MAGIC}").unwrap();
        writeln!(out, "original_n {}", self.original_vertex_count).unwrap();
        writeln!(out, "budget {}", opt(self.original_budget)).unwrap();
        writeln!(out, "delta {}", self.delta).unwrap();
        writeln!(out, "infeasible {}", u8::from(self.infeasible)).unwrap();
        let mut cover = String::from("cover");
        for v in &self.cover {
            write!(cover, " {v}").unwrap();
        }
        writeln!(out, "{cover}").unwrap();
        writeln!(out, "id_map {}", self.id_map.len()).unwrap();
        for (k, v) in self.id_map.iter().enumerate() {
            writeln!(out, "{k} {v}").unwrap();
        }
        writeln!(out, "loop_map {}", self.loop_map.len()).unwrap();
        for (v, anchor) in &self.loop_map {
            writeln!(out, "{v} {anchor}").unwrap();
        }
        writeln!(out, "kernel").unwrap();
        out.push_str(&self.kernel.to_text());
        out
    }

    pub fn parse_meta(text: &str) -> Result<Self, MetaError> {
        let mut lines = content_lines(text);
        let mut next = |what: &'static str| lines.next().ok_or(MetaError::Truncated(what));

        let (line, magic) = next("header")?;
        if magic != META_MAGIC {
            return Err(syntax(line, format!("expected `{META_MAGIC}`")));
        }
        let original_vertex_count: usize = keyed(next("original_n")?, "original_n")?;
        let original_budget = {
            let (line, text) = next("budget")?;
            match field(line, text, "budget")? {
                "-" => None,
                t => Some(num(line, t)?),
            }
        };
        let delta: Weight = keyed(next("delta")?, "delta")?;
        let infeasible = match keyed::<u8>(next("infeasible")?, "infeasible")? {
            0 => false,
            1 => true,
            _ => return Err(MetaError::Inconsistent("infeasible must be 0 or 1".into())),
        };
        let cover = {
            let (line, text) = next("cover")?;
            let mut tokens = text.split_whitespace();
            if tokens.next() != Some("cover") {
                return Err(syntax(line, "expected `cover`"));
            }
            tokens
                .map(|t| num(line, t))
                .collect::<Result<Vec<usize>, _>>()?
        };
        let id_count: usize = keyed(next("id_map")?, "id_map")?;
        let mut id_map = Vec::with_capacity(id_count);
        for k in 0..id_count {
            let (line, (a, b)) = pair(next("id_map entry")?)?;
            if a != k {
                return Err(syntax(line, format!("expected kernel id {k}")));
            }
            id_map.push(b);
        }
        let loop_count: usize = keyed(next("loop_map")?, "loop_map")?;
        let mut loop_map = BTreeMap::new();
        for _ in 0..loop_count {
            let (line, (v, anchor)) = pair(next("loop_map entry")?)?;
            if loop_map.insert(v, anchor).is_some() {
                return Err(syntax(line, format!("vertex {v} listed twice")));
            }
        }
        let (line, text) = next("kernel")?;
        if text != "kernel" {
            return Err(syntax(line, "expected `kernel`"));
        }
        let kernel = parse_lines(lines)?;

        let kr = KernelResult {
            kernel,
            original_vertex_count,
            original_budget,
            delta,
            loop_map,
            id_map,
            cover,
            infeasible,
        };
        kr.check_consistency()?;
        Ok(kr)
    }

    fn check_consistency(&self) -> Result<(), MetaError> {
        let bad = |m: String| Err(MetaError::Inconsistent(m));
        let n = self.original_vertex_count;
        if self.id_map.len() != self.kernel.graph.vertex_count() {
            return bad("id_map size differs from kernel vertex count".into());
        }
        let mut owner = vec![false; n];
        for &v in self.id_map.iter().chain(self.loop_map.keys()) {
            if v >= n || std::mem::replace(&mut owner[v], true) {
                return bad(format!("vertex {v} out of range or mapped twice"));
            }
        }
        if owner.iter().any(|o| !o) {
            return bad("kernel and loop map do not cover all original vertices".into());
        }
        if self.id_map.windows(2).any(|w| w[0] >= w[1]) {
            return bad("id_map must be ascending".into());
        }
        if let Some((&v, &a)) = self
            .loop_map
            .iter()
            .find(|(_, &a)| self.id_map.binary_search(&a).is_err())
        {
            return bad(format!("anchor {a} of vertex {v} is not a kernel vertex"));
        }
        let expected_budget = match self.original_budget {
            Some(w) if w >= self.delta => Some(w - self.delta),
            _ => None,
        };
        let expected_infeasible = self.original_budget.is_some_and(|w| w < self.delta);
        if self.kernel.budget != expected_budget || self.infeasible != expected_infeasible {
            return bad("budget, delta, and infeasible flag disagree".into());
        }
        Ok(())
    }
}

fn syntax(line: usize, message: impl Into<String>) -> MetaError {
    MetaError::Syntax {
        line,
        message: message.into(),
    }
}

fn num<T: std::str::FromStr>(line: usize, token: &str) -> Result<T, MetaError> {
    token
        .parse()
        .map_err(|_| syntax(line, format!("invalid number `{token}`")))
}

fn field<'a>(line: usize, text: &'a str, key: &str) -> Result<&'a str, MetaError> {
    match text.split_whitespace().collect::<Vec<_>>()[..] {
        [k, value] if k == key => Ok(value),
        _ => Err(syntax(line, format!("expected `{key} <value>`"))),
    }
}

fn keyed<T: std::str::FromStr>((line, text): (usize, &str), key: &str) -> Result<T, MetaError> {
    num(line, field(line, text, key)?)
}

fn pair((line, text): (usize, &str)) -> Result<(usize, (usize, usize)), MetaError> {
    match text.split_whitespace().collect::<Vec<_>>()[..] {
        [a, b] => Ok((line, (num(line, a)?, num(line, b)?))),
        _ => Err(syntax(line, "expected two vertex ids")),
    }
}
