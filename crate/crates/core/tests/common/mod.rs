#![allow(dead_code)]

use gtsp_kernel::genbench::{generate, Family, GenSpec, Probability};
use gtsp_kernel::graph::{metric_closure, verify_tour, Tour, Weight};
use gtsp_kernel::GtspInstance;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DENSITIES: [Probability; 5] = [
    Probability::new(0, 1),
    Probability::new(1, 5),
    Probability::new(2, 5),
    Probability::new(3, 5),
    Probability::new(1, 1),
];

/// Seeded random connected instances with `1 <= n <= max_n`, weights in
/// `[0, 20]`, cycling through edge densities. Every fourth instance is a
/// planted-cover graph so that hops through non-cover vertices are common.
pub fn corpus(count: u64, max_n: usize, salt: u64) -> Vec<GtspInstance> {
    (0..count)
        .map(|i| {
            let n = 1 + (i as usize % max_n);
            let seed = salt.wrapping_mul(1_000_003).wrapping_add(i);
            let family = if i % 4 == 3 && n >= 2 {
                Family::PlantedCover
            } else {
                Family::RandomConnected
            };
            let spec = GenSpec {
                family,
                n,
                edge_probability: DENSITIES[(i as usize / max_n) % DENSITIES.len()],
                weight_range: (0, 20),
                cover_size: 1 + (i as usize / 7) % n.min(3),
                seed,
            };
            generate(&spec).expect("valid spec")
        })
        .collect()
}

/// A random tour of `inst`: a shuffled vertex order joined by shortest paths,
/// with an occasional detour back and forth along an edge.
pub fn random_tour(inst: &GtspInstance, rng: &mut ChaCha8Rng) -> Tour {
    let g = &inst.graph;
    let d = metric_closure(g).expect("connected");
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.shuffle(rng);
    let mut walk = d.expand_cycle(&order);
    if g.edge_count() > 0 && rng.gen_bool(0.5) {
        let pos = rng.gen_range(0..walk.len());
        let v = walk[pos];
        if let Some(&(u, _)) = g.neighbors(v).first() {
            walk.splice(pos + 1..pos + 1, [u, v]);
        }
    }
    verify_tour(g, &walk).expect("constructed walk is a tour")
}

/// Independent re-summation of a walk's weight.
pub fn resum(inst: &GtspInstance, walk: &[usize]) -> Weight {
    walk.windows(2)
        .map(|p| {
            inst.graph
                .edges()
                .iter()
                .find(|&&(u, v, _)| (u, v) == (p[0].min(p[1]), p[0].max(p[1])))
                .expect("step is an edge")
                .2
        })
        .sum()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
