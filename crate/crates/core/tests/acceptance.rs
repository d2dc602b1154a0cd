//! Acceptance criteria. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails. All checks are exact integer comparisons.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use gtsp_kernel::cover::{approx_cover, exact_cover, validate_cover};
use gtsp_kernel::genbench::{generate, Family, GenSpec};
use gtsp_kernel::graph::verify_tour;
use gtsp_kernel::hopgraph::{build_hop_graph, HopEdge};
use gtsp_kernel::kernel::{decide, lift, reduce, CoverStrategy, KernelResult};
use gtsp_kernel::matching::{brute_force_bipartite, min_cost_max_bipartite, min_cost_max_matching};
use gtsp_kernel::solvers::{
    solve_exact, solve_heuristic, solve_nearest_neighbor, solve_permutation_bruteforce,
};
use gtsp_kernel::{GtspInstance, Weight};
use rand::Rng;

use common::{corpus, random_tour, resum, rng, DENSITIES};

type Outcome = Result<String, String>;

fn opt(inst: &GtspInstance) -> Weight {
    solve_exact(inst, 13)
        .expect("oracle-sized instance")
        .tour
        .weight()
}

fn kernels(inst: &GtspInstance) -> Vec<(&'static str, KernelResult)> {
    vec![
        ("approx", reduce(inst, &CoverStrategy::Approx).unwrap()),
        ("exact", reduce(inst, &CoverStrategy::Exact).unwrap()),
    ]
}

/// Criterion 1: OPT(G) = OPT(G') + delta on >= 500 random connected instances, n <= 10.
fn kernel_equivalence() -> Outcome {
    let instances = corpus(500, 10, 1);
    let mut checks = 0;
    let mut shrunk = 0;
    for (i, inst) in instances.iter().enumerate() {
        let full = opt(inst);
        for (name, kr) in kernels(inst) {
            let reduced = opt(&kr.kernel);
            if full != reduced + kr.delta {
                return Err(format!(
                    "instance {i} ({name} cover): OPT(G) = {full}, OPT(G') = {reduced}, delta = {}",
                    kr.delta
                ));
            }
            checks += 1;
            shrunk += usize::from(kr.kernel.graph.vertex_count() < inst.graph.vertex_count());
        }
    }
    Ok(format!(
        "{} instances, {checks} reductions, {shrunk} strictly smaller kernels",
        instances.len()
    ))
}

/// Criterion 2: Tour of weight <= W in G iff one of weight <= W - delta in G'.
fn decision_equivalence() -> Outcome {
    let instances = corpus(500, 10, 1);
    let mut checks = 0;
    let mut infeasible = 0;
    for (i, inst) in instances.iter().enumerate() {
        let full = opt(inst);
        for budget in [full.checked_sub(1), Some(full), Some(full + 1)]
            .into_iter()
            .flatten()
        {
            let decision = GtspInstance::decision(inst.graph.clone(), budget);
            let yes_in_g = full <= budget;
            for (name, kr) in kernels(&decision) {
                let yes_in_kernel = decide(&kr, opt(&kr.kernel)).unwrap();
                if yes_in_g != yes_in_kernel {
                    return Err(format!("instance {i} ({name} cover), W = {budget}: G says {yes_in_g}, kernel says {yes_in_kernel}"));
                }
                infeasible += usize::from(kr.infeasible);
                checks += 1;
            }
        }
    }
    Ok(format!(
        "{checks} budget checks, {infeasible} flagged infeasible at reduction"
    ))
}

/// Criterion 3: Kernel size bounds on >= 200 planted-cover instances, tau in 1..=5,
/// n up to 60.
fn size_bounds() -> Outcome {
    let mut count = 0;
    let mut max_ratio = (0usize, 1usize);
    for k in 1..=5usize {
        for (j, n) in [10usize, 20, 30, 40, 50, 60].into_iter().enumerate() {
            for rep in 0..7u64 {
                let spec = GenSpec {
                    family: Family::PlantedCover,
                    n,
                    edge_probability: DENSITIES[(rep as usize + j) % DENSITIES.len()],
                    weight_range: (0, 20),
                    cover_size: k,
                    seed: 10_000 + 100 * k as u64 + 10 * j as u64 + rep,
                };
                let inst = generate(&spec).unwrap();
                let exact = reduce(&inst, &CoverStrategy::Exact).unwrap();
                let tau = exact.cover_size();
                if tau == 0 || tau > k {
                    return Err(format!("{}: tau = {tau} outside 1..={k}", spec.id()));
                }
                if n <= 20 && exact_cover(&inst.graph, 20).unwrap().len() != tau {
                    return Err(format!(
                        "{}: minimum cover size disagrees with enumeration",
                        spec.id()
                    ));
                }
                let (kn, km) = (
                    exact.kernel.graph.vertex_count(),
                    exact.kernel.graph.edge_count(),
                );
                if kn > tau * tau + tau || km > 2 * tau.pow(3) - tau {
                    return Err(format!(
                        "{}: tau = {tau}, kernel has {kn} vertices and {km} edges",
                        spec.id()
                    ));
                }
                let approx = reduce(&inst, &CoverStrategy::Approx).unwrap();
                let c = approx.cover_size();
                let an = approx.kernel.graph.vertex_count();
                if an > c * c {
                    return Err(format!(
                        "{}: |C| = {c}, approximate-cover kernel has {an} vertices",
                        spec.id()
                    ));
                }
                if kn * max_ratio.1 > max_ratio.0 * (tau * tau + tau) {
                    max_ratio = (kn, tau * tau + tau);
                }
                count += 1;
            }
        }
    }
    Ok(format!(
        "{count} instances, tightest vertex bound use {}/{}",
        max_ratio.0, max_ratio.1
    ))
}

/// Criterion 4: Lifting an alpha-approximate kernel tour gives an alpha-approximate
/// tour of G. Ratios compared by cross-multiplication.
fn alpha_preservation() -> Outcome {
    let instances = corpus(400, 10, 4);
    let mut rated = 0;
    let mut strict = 0;
    let mut degenerate = 0;
    for (i, inst) in instances.iter().enumerate() {
        let full = opt(inst);
        let kr = reduce(inst, &CoverStrategy::Approx).unwrap();
        let reduced = opt(&kr.kernel);
        let tours = [
            solve_heuristic(&kr.kernel, i as u64).unwrap().tour,
            solve_nearest_neighbor(&kr.kernel, i as u64).unwrap().tour,
        ];
        for t in tours {
            let lifted = lift(&kr, t.vertices()).map_err(|e| format!("instance {i}: {e}"))?;
            if reduced == 0 {
                if full != kr.delta || (t.weight() == 0 && lifted.weight() != full) {
                    return Err(format!(
                        "instance {i}: OPT(G') = 0 but OPT(G) = {full}, delta = {}",
                        kr.delta
                    ));
                }
                degenerate += 1;
                continue;
            }
            // alpha = t / OPT(G') >= 1; need lifted / OPT(G) <= alpha
            let (t_w, l_w) = (u128::from(t.weight()), u128::from(lifted.weight()));
            if t_w < u128::from(reduced) {
                return Err(format!("instance {i}: heuristic below optimum"));
            }
            if l_w * u128::from(reduced) > t_w * u128::from(full) {
                return Err(format!(
                    "instance {i}: lifted {l_w}/{full} exceeds alpha = {t_w}/{reduced}"
                ));
            }
            rated += 1;
            strict += usize::from(t_w > u128::from(reduced));
        }
    }
    if rated < 200 {
        return Err(format!("only {rated} kernel tours with OPT(G') > 0"));
    }
    Ok(format!(
        "{rated} rated tours ({strict} with alpha > 1), {degenerate} with OPT(G') = 0"
    ))
}

/// Criterion 5: Matching solver agrees with exhaustive enumeration on >= 300 hop
/// graphs with <= 22 edges.
fn matching_oracle() -> Outcome {
    let mut r = rng(5);
    let mut checked = 0;
    for i in 0..250 {
        let xs = r.gen_range(1..=8usize);
        let ys = r.gen_range(1..=8usize);
        let mut all: Vec<(usize, usize)> =
            (0..xs).flat_map(|x| (0..ys).map(move |y| (x, y))).collect();
        let keep = r.gen_range(0..=all.len().min(22));
        for j in 0..keep {
            let pick = r.gen_range(j..all.len());
            all.swap(j, pick);
        }
        let edges: Vec<HopEdge> = all[..keep]
            .iter()
            .map(|&(x, y)| HopEdge {
                x,
                y,
                penalty: r.gen_range(0..=6),
            })
            .collect();
        let fast = min_cost_max_bipartite(xs, ys, &edges);
        let slow = brute_force_bipartite(xs, ys, &edges, 22).unwrap();
        if !fast.is_valid_for(&edges)
            || (fast.cardinality, fast.total_cost) != (slow.cardinality, slow.total_cost)
        {
            return Err(format!(
                "random bipartite graph {i}: got {fast:?}, oracle {slow:?}"
            ));
        }
        checked += 1;
    }
    // hop graphs of real instances
    for inst in corpus(2000, 9, 55) {
        if checked >= 400 {
            break;
        }
        let c = approx_cover(&inst.graph);
        if inst.graph.vertex_count() < 2 {
            continue;
        }
        let h = build_hop_graph(&inst.graph, &c).unwrap();
        if h.edges().is_empty() || h.edges().len() > 22 {
            continue;
        }
        let fast = min_cost_max_matching(&h);
        let slow =
            brute_force_bipartite(h.x_nodes().len(), h.y_nodes().len(), h.edges(), 22).unwrap();
        if (fast.cardinality, fast.total_cost) != (slow.cardinality, slow.total_cost) {
            return Err(format!("hop graph: got {fast:?}, oracle {slow:?}"));
        }
        checked += 1;
    }
    if checked < 300 {
        return Err(format!("only {checked} graphs checked"));
    }
    Ok(format!("{checked} graphs"))
}

/// Criterion 6: Subset DP equals permutation enumeration on >= 500 instances, n <= 8.
fn oracle_cross_validation() -> Outcome {
    let instances = corpus(500, 8, 6);
    for (i, inst) in instances.iter().enumerate() {
        let dp = solve_exact(inst, 13).unwrap();
        let perm = solve_permutation_bruteforce(inst, 8).unwrap();
        if dp.tour.weight() != perm.tour.weight() {
            return Err(format!(
                "instance {i}: DP {} vs permutations {}",
                dp.tour.weight(),
                perm.tour.weight()
            ));
        }
        if resum(inst, dp.tour.vertices()) != dp.tour.weight() {
            return Err(format!("instance {i}: DP tour weight does not re-sum"));
        }
    }
    Ok(format!("{} instances", instances.len()))
}

/// Criterion 7: Every produced cover validates; approximate cover <= 2 * minimum.
fn cover_guarantees() -> Outcome {
    let instances = corpus(300, 14, 7);
    let mut worst = (0usize, 1usize);
    for (i, inst) in instances.iter().enumerate() {
        let g = &inst.graph;
        let approx = approx_cover(g);
        let exact = exact_cover(g, 20).unwrap();
        for c in [&approx, &exact] {
            validate_cover(g, c.vertices()).map_err(|e| format!("instance {i}: {e}"))?;
        }
        if approx.len() > 2 * exact.len() {
            return Err(format!(
                "instance {i}: |approx| = {} > 2 * {}",
                approx.len(),
                exact.len()
            ));
        }
        if approx.len() * worst.1 > worst.0 * exact.len().max(1) {
            worst = (approx.len(), exact.len().max(1));
        }
    }
    Ok(format!(
        "{} instances, worst ratio {}/{}",
        instances.len(),
        worst.0,
        worst.1
    ))
}

/// Criterion 8: lift(t) is a tour of G of weight weight(t) + delta for optimal,
/// heuristic, and arbitrary kernel tours.
fn lift_contract() -> Outcome {
    let instances = corpus(500, 10, 8);
    let mut r = rng(8);
    let mut lifted_count = 0;
    for (i, inst) in instances.iter().enumerate() {
        for (name, kr) in kernels(inst) {
            let tours = [
                solve_exact(&kr.kernel, 13).unwrap().tour,
                solve_heuristic(&kr.kernel, i as u64).unwrap().tour,
                random_tour(&kr.kernel, &mut r),
            ];
            for t in tours {
                let lifted =
                    lift(&kr, t.vertices()).map_err(|e| format!("instance {i} ({name}): {e}"))?;
                let checked = verify_tour(&inst.graph, lifted.vertices())
                    .map_err(|e| format!("instance {i} ({name}): lifted walk invalid: {e}"))?;
                if checked.weight() != t.weight() + kr.delta || lifted.weight() != checked.weight()
                {
                    return Err(format!(
                        "instance {i} ({name}): lifted weight {} != {} + {}",
                        checked.weight(),
                        t.weight(),
                        kr.delta
                    ));
                }
                lifted_count += 1;
            }
        }
    }
    Ok(format!("{lifted_count} kernel tours lifted"))
}

fn gtsp(args: &[&str], dir: &Path) -> Result<std::process::Output, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_gtsp"))
        .args(args)
        .current_dir(dir)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "gtsp {args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out)
}

fn same_bytes(dir: &Path, a: &str, b: &str) -> Result<(), String> {
    let (x, y) = (std::fs::read(dir.join(a)), std::fs::read(dir.join(b)));
    match (x, y) {
        (Ok(x), Ok(y)) if x == y && !x.is_empty() => Ok(()),
        _ => Err(format!("{a} and {b} differ")),
    }
}

/// Criterion 9: gen, reduce, and bench are byte-for-byte reproducible.
fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir = tmp.path();
    for run in ["a", "b"] {
        let inst = format!("inst_{run}.gtsp");
        gtsp(
            &[
                "gen",
                "--family",
                "planted_cover",
                "--n",
                "40",
                "--cover-size",
                "4",
                "--seed",
                "9",
                "--out",
                &inst,
            ],
            dir,
        )?;
        for cover in ["approx", "exact"] {
            gtsp(
                &[
                    "reduce",
                    &inst,
                    "--cover",
                    cover,
                    "--out",
                    &format!("kernel_{cover}_{run}.gtsp"),
                    "--meta",
                    &format!("kernel_{cover}_{run}.meta"),
                    "--emit-hopgraph",
                    &format!("hop_{cover}_{run}.txt"),
                ],
                dir,
            )?;
        }
        gtsp(
            &[
                "bench",
                "--family",
                "planted_cover",
                "--n",
                "8,30",
                "--count",
                "6",
                "--cover-size",
                "3",
                "--no-timing",
                "--out",
                &format!("bench_{run}.csv"),
            ],
            dir,
        )?;
    }
    same_bytes(dir, "inst_a.gtsp", "inst_b.gtsp")?;
    for cover in ["approx", "exact"] {
        same_bytes(
            dir,
            &format!("kernel_{cover}_a.gtsp"),
            &format!("kernel_{cover}_b.gtsp"),
        )?;
        same_bytes(
            dir,
            &format!("kernel_{cover}_a.meta"),
            &format!("kernel_{cover}_b.meta"),
        )?;
        same_bytes(
            dir,
            &format!("hop_{cover}_a.txt"),
            &format!("hop_{cover}_b.txt"),
        )?;
    }
    same_bytes(dir, "bench_a.csv", "bench_b.csv")?;
    Ok("gen, reduce (kernel, metadata, hop graph) and bench outputs identical across runs".into())
}

fn main() {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Check); 9] = [
        (
            "kernel equivalence OPT(G) = OPT(G') + delta",
            kernel_equivalence,
        ),
        (
            "decision equivalence for W in {OPT-1, OPT, OPT+1}",
            decision_equivalence,
        ),
        ("kernel size bounds", size_bounds),
        ("alpha-preservation under lifting", alpha_preservation),
        ("matching agrees with enumeration oracle", matching_oracle),
        (
            "subset DP agrees with permutation oracle",
            oracle_cross_validation,
        ),
        ("vertex cover guarantees", cover_guarantees),
        ("lift contract", lift_contract),
        ("determinism of gen/reduce/bench", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {}. {name}: {detail} ({secs:.1}s)", i + 1),
            Err(reason) => {
                failed += 1;
                println!("[FAIL] {}. {name}: {reason} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
