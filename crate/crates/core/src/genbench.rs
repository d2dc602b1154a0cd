//! Seeded instance generators and the kernel benchmark harness.

use std::fmt;
use std::io;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::cover::exact_cover_branching;
use crate::graph::{Weight, WeightedGraph};
use crate::instance::GtspInstance;
use crate::kernel::{reduce, CoverStrategy, KernelError};
use crate::solvers::{solve_exact, SolveError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Family {
    /// Random spanning tree plus independent extra edges.
    RandomConnected,
    /// Every edge touches a planted set of `cover_size` vertices.
    PlantedCover,
    Star,
    Path,
    Cycle,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::RandomConnected => "random_connected",
            Family::PlantedCover => "planted_cover",
            Family::Star => "star",
            Family::Path => "path",
            Family::Cycle => "cycle",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Probability `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Probability {
    pub num: u32,
    pub den: u32,
}

impl Probability {
    pub const fn new(num: u32, den: u32) -> Self {
        Self { num, den }
    }
}

impl FromStr for Probability {
    type Err = String;

    /// Accepts `a/b` or a bare `0` / `1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (num, den) = s.split_once('/').unwrap_or((s, "1"));
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("invalid probability `{s}`"))
        };
        let p = Probability::new(parse(num)?, parse(den)?);
        if p.den == 0 || p.num > p.den {
            return Err(format!("probability `{s}` must lie in [0, 1]"));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub edge_probability: Probability,
    /// Inclusive weight interval.
    pub weight_range: (Weight, Weight),
    /// Size of the planted cover; ignored by other families.
    pub cover_size: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        Self {
            family,
            n,
            edge_probability: Probability::new(1, 3),
            weight_range: (1, 20),
            cover_size: 1,
            seed,
        }
    }

    pub fn id(&self) -> String {
        match self.family {
            Family::PlantedCover => format!(
                "{}-n{}-k{}-s{}",
                self.family, self.n, self.cover_size, self.seed
            ),
            _ => format!("{}-n{}-s{}", self.family, self.n, self.seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}

fn invalid(msg: impl Into<String>) -> GenError {
    GenError::InvalidSpec(msg.into())
}

/// Generates a connected simple instance (optimization mode). Identical
/// specs give identical instances.
pub fn generate(spec: &GenSpec) -> Result<GtspInstance, GenError> {
    let n = spec.n;
    let (lo, hi) = spec.weight_range;
    let p = spec.edge_probability;
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    if lo > hi {
        return Err(invalid(format!("empty weight range {lo}..={hi}")));
    }
    if p.den == 0 || p.num > p.den {
        return Err(invalid("edge probability must lie in [0, 1]"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    match spec.family {
        Family::Star => pairs.extend((1..n).map(|v| (0, v))),
        Family::Path => pairs.extend((1..n).map(|v| (v - 1, v))),
        Family::Cycle => {
            if n < 3 {
                return Err(invalid("a cycle needs at least 3 vertices"));
            }
            pairs.extend((1..n).map(|v| (v - 1, v)));
            pairs.push((0, n - 1));
        }
        Family::RandomConnected => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut adjacent = vec![false; n * n];
            for i in 1..n {
                let (u, v) = (order[i], order[rng.gen_range(0..i)]);
                adjacent[u * n + v] = true;
                adjacent[v * n + u] = true;
                pairs.push((u, v));
            }
            for u in 0..n {
                for v in u + 1..n {
                    if !adjacent[u * n + v] && rng.gen_ratio(p.num, p.den) {
                        pairs.push((u, v));
                    }
                }
            }
        }
        Family::PlantedCover => {
            let k = spec.cover_size;
            if k == 0 || k > n {
                return Err(invalid(format!("cover size {k} must lie in 1..={n}")));
            }
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let (cover, independent) = order.split_at(k);
            let mut adjacent = vec![false; n * n];
            let add =
                |pairs: &mut Vec<(usize, usize)>, adjacent: &mut [bool], u: usize, v: usize| {
                    adjacent[u * n + v] = true;
                    adjacent[v * n + u] = true;
                    pairs.push((u, v));
                };
            for i in 1..k {
                let j = rng.gen_range(0..i);
                add(&mut pairs, &mut adjacent, cover[i], cover[j]);
            }
            for &s in independent {
                let c = cover[rng.gen_range(0..k)];
                add(&mut pairs, &mut adjacent, s, c);
            }
            for (i, &u) in cover.iter().enumerate() {
                for &v in cover[i + 1..].iter().chain(independent) {
                    if !adjacent[u * n + v] && rng.gen_ratio(p.num, p.den) {
                        add(&mut pairs, &mut adjacent, u, v);
                    }
                }
            }
        }
    }
    let edges: Vec<(usize, usize, Weight)> = pairs
        .into_iter()
        .map(|(u, v)| (u, v, rng.gen_range(lo..=hi)))
        .collect();
    let graph = WeightedGraph::new(n, edges).map_err(|e| invalid(e.to_string()))?;
    Ok(GtspInstance::optimization(graph))
}

/// Which cover the benchmark reduces with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BenchCover {
    Approx,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub cover: BenchCover,
    /// Run the exact solver on graphs with at most this many vertices.
    pub oracle_limit: usize,
    /// Compute the vertex cover number even when reducing with the
    /// approximate cover.
    pub compute_tau: bool,
    /// Measure wall-clock times; when off, timing columns are `-` and the
    /// CSV is byte-for-byte reproducible.
    pub timing: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            cover: BenchCover::Exact,
            oracle_limit: 10,
            compute_tau: true,
            timing: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRecord {
    pub id: String,
    pub family: Family,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub cover_size: usize,
    pub tau: Option<usize>,
    pub kernel_n: usize,
    pub kernel_m: usize,
    pub delta: Weight,
    pub reduce_us: Option<u128>,
    pub solve_direct_us: Option<u128>,
    pub solve_kernel_us: Option<u128>,
    pub opt_g: Option<Weight>,
    pub opt_kernel: Option<Weight>,
    /// Failed size or equivalence checks. Empty for a healthy record.
    pub violations: Vec<String>,
}

pub const CSV_HEADER: [&str; 15] = [
    "id",
    "family",
    "seed",
    "n",
    "m",
    "cover_size",
    "tau",
    "kernel_n",
    "kernel_m",
    "delta",
    "reduce_us",
    "solve_direct_us",
    "solve_kernel_us",
    "opt_g",
    "opt_kernel",
];

impl BenchRecord {
    fn csv_row(&self) -> [String; 15] {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map_or_else(|| "-".to_string(), T::to_string)
        }
        [
            self.id.clone(),
            self.family.to_string(),
            self.seed.to_string(),
            self.n.to_string(),
            self.m.to_string(),
            self.cover_size.to_string(),
            opt(&self.tau),
            self.kernel_n.to_string(),
            self.kernel_m.to_string(),
            self.delta.to_string(),
            opt(&self.reduce_us),
            opt(&self.solve_direct_us),
            opt(&self.solve_kernel_us),
            opt(&self.opt_g),
            opt(&self.opt_kernel),
        ]
    }

    /// Checks the kernel size bounds and, when both optima are known, that
    /// `OPT(G) = OPT(G') + delta`.
    fn validate(&mut self) {
        let c = self.cover_size;
        // a single-vertex graph has an empty cover but a one-vertex kernel
        if self.kernel_n > (c * c).max(1) {
            self.violations.push(format!(
                "kernel_n {} exceeds |C|^2 = {}",
                self.kernel_n,
                c * c
            ));
        }
        // the tau bounds need the reduction to have run on a minimum cover
        if let Some(t) = self.tau.filter(|&t| t == c) {
            let vertex_bound = t * t + t;
            let edge_bound = (2 * t * t * t).saturating_sub(t);
            if self.kernel_n > vertex_bound.max(1) {
                self.violations.push(format!(
                    "kernel_n {} exceeds tau^2 + tau = {vertex_bound}",
                    self.kernel_n
                ));
            }
            if self.kernel_m > edge_bound {
                self.violations.push(format!(
                    "kernel_m {} exceeds 2 tau^3 - tau = {edge_bound}",
                    self.kernel_m
                ));
            }
        }
        if let (Some(g), Some(k)) = (self.opt_g, self.opt_kernel) {
            if g != k + self.delta {
                self.violations.push(format!(
                    "OPT(G) = {g} but OPT(G') + delta = {}",
                    k + self.delta
                ));
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{id}: {source}")]
    Generate {
        id: String,
        #[source]
        source: GenError,
    },
    #[error("{id}: {source}")]
    Reduce {
        id: String,
        #[source]
        source: KernelError,
    },
    #[error("{id}: {source}")]
    Solve {
        id: String,
        #[source]
        source: SolveError,
    },
}

fn timed<T>(on: bool, f: impl FnOnce() -> T) -> (T, Option<u128>) {
    let start = Instant::now();
    let out = f();
    (out, on.then(|| start.elapsed().as_micros()))
}

/// Generates, reduces and (when small enough) solves a single instance.
pub fn bench_one(spec: &GenSpec, config: &BenchConfig) -> Result<BenchRecord, BenchError> {
    let id = spec.id();
    let inst = generate(spec).map_err(|source| BenchError::Generate {
        id: id.clone(),
        source,
    })?;
    let g = &inst.graph;
    let strategy = match config.cover {
        BenchCover::Approx => CoverStrategy::Approx,
        BenchCover::Exact => CoverStrategy::Exact,
    };
    let (kr, reduce_us) = timed(config.timing, || reduce(&inst, &strategy));
    let kr = kr.map_err(|source| BenchError::Reduce {
        id: id.clone(),
        source,
    })?;

    let tau = match config.cover {
        BenchCover::Exact => Some(kr.cover_size()),
        BenchCover::Approx if config.compute_tau => {
            exact_cover_branching(g, kr.cover_size()).map(|c| c.len())
        }
        BenchCover::Approx => None,
    };

    let solve = |target: &GtspInstance| -> Result<(Option<Weight>, Option<u128>), BenchError> {
        if target.graph.vertex_count() > config.oracle_limit {
            return Ok((None, None));
        }
        let (res, us) = timed(config.timing, || solve_exact(target, config.oracle_limit));
        let res = res.map_err(|source| BenchError::Solve {
            id: id.clone(),
            source,
        })?;
        Ok((Some(res.tour.weight()), us))
    };
    let (opt_g, solve_direct_us) = solve(&inst)?;
    let (opt_kernel, solve_kernel_us) = solve(&kr.kernel)?;

    let mut record = BenchRecord {
        id: id.clone(),
        family: spec.family,
        seed: spec.seed,
        n: g.vertex_count(),
        m: g.edge_count(),
        cover_size: kr.cover_size(),
        tau,
        kernel_n: kr.kernel.graph.vertex_count(),
        kernel_m: kr.kernel.graph.edge_count(),
        delta: kr.delta,
        reduce_us,
        solve_direct_us,
        solve_kernel_us,
        opt_g,
        opt_kernel,
        violations: Vec::new(),
    };
    record.validate();
    Ok(record)
}

/// Runs every spec, in parallel, and returns outcomes in spec order. A
/// failing instance does not stop the batch.
pub fn run_bench(specs: &[GenSpec], config: &BenchConfig) -> Vec<Result<BenchRecord, BenchError>> {
    specs
        .par_iter()
        .map(|spec| bench_one(spec, config))
        .collect()
}

/// Writes the header and one row per record.
pub fn write_csv<'a, W: io::Write>(
    out: W,
    records: impl IntoIterator<Item = &'a BenchRecord>,
) -> io::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for r in records {
        writer.write_record(r.csv_row())?;
    }
    writer.flush()
}

/// [`run_bench`] followed by [`write_csv`] of the successful records to
/// `output`.
pub fn run_bench_to_file(
    specs: &[GenSpec],
    config: &BenchConfig,
    output: &Path,
) -> io::Result<Vec<Result<BenchRecord, BenchError>>> {
    let outcomes = run_bench(specs, config);
    let file = std::fs::File::create(output)?;
    write_csv(
        io::BufWriter::new(file),
        outcomes.iter().filter_map(|o| o.as_ref().ok()),
    )?;
    Ok(outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::exact_cover;
    use crate::graph::is_connected;

    #[test]
    fn star_family() {
        let inst = generate(&GenSpec {
            weight_range: (1, 1),
            ..GenSpec::new(Family::Star, 4, 0)
        })
        .unwrap();
        assert_eq!(inst.graph.edges(), &[(0, 1, 1), (0, 2, 1), (0, 3, 1)]);
    }

    #[test]
    fn planted_cover_pins_tau() {
        let spec = GenSpec {
            cover_size: 3,
            ..GenSpec::new(Family::PlantedCover, 30, 5)
        };
        let inst = generate(&spec).unwrap();
        assert!(is_connected(&inst.graph));
        let tau = exact_cover_branching(&inst.graph, 3).expect("planted set is a cover");
        assert!(tau.len() <= 3);
    }

    #[test]
    fn generators_are_deterministic_and_connected() {
        for family in [
            Family::RandomConnected,
            Family::PlantedCover,
            Family::Path,
            Family::Cycle,
        ] {
            for seed in 0..10 {
                let spec = GenSpec {
                    cover_size: 2,
                    ..GenSpec::new(family, 9, seed)
                };
                let a = generate(&spec).unwrap();
                assert_eq!(a.to_text(), generate(&spec).unwrap().to_text());
                assert!(is_connected(&a.graph));
                if family == Family::PlantedCover {
                    assert!(exact_cover(&a.graph, 20).unwrap().len() <= 2);
                }
            }
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(generate(&GenSpec::new(Family::Cycle, 2, 0)).is_err());
        assert!(generate(&GenSpec::new(Family::Path, 0, 0)).is_err());
        let spec = GenSpec {
            cover_size: 0,
            ..GenSpec::new(Family::PlantedCover, 5, 0)
        };
        assert!(generate(&spec).is_err());
        let spec = GenSpec {
            weight_range: (5, 2),
            ..GenSpec::new(Family::Path, 5, 0)
        };
        assert!(generate(&spec).is_err());
    }

    #[test]
    fn probability_parsing() {
        assert_eq!("1/3".parse(), Ok(Probability::new(1, 3)));
        assert_eq!("1".parse(), Ok(Probability::new(1, 1)));
        assert!("3/2".parse::<Probability>().is_err());
        assert!("1/0".parse::<Probability>().is_err());
    }

    #[test]
    fn stars_reduce_to_one_vertex() {
        let config = BenchConfig {
            timing: false,
            ..BenchConfig::default()
        };
        let specs: Vec<GenSpec> = (0..5).map(|s| GenSpec::new(Family::Star, 8, s)).collect();
        for r in run_bench(&specs, &config) {
            let r = r.unwrap();
            assert_eq!(r.kernel_n, 1);
            assert!(r.violations.is_empty());
            assert_eq!(r.opt_g, Some(r.delta));
        }
    }

    #[test]
    fn csv_layout() {
        let config = BenchConfig {
            timing: false,
            ..BenchConfig::default()
        };
        let record = bench_one(&GenSpec::new(Family::Path, 3, 1), &config).unwrap();
        let mut out = Vec::new();
        write_csv(&mut out, [&record]).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 15);
        assert_eq!(&row[..4], &["path-n3-s1", "path", "1", "3"]);
        assert_eq!(&row[10..13], &["-", "-", "-"]);
    }
}
