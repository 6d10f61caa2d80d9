#![allow(dead_code)]

use makhc::reductions::{gen_random, RandomSpec};
use makhc::{heuristic_decomposition, Edge, Instance, Role};

pub fn unit_instance(n: usize, edges: &[(usize, usize)], demands: &[(usize, usize)], k: usize) -> Instance {
    Instance::new(
        n,
        edges.iter().map(|&(u, v)| Edge::new(u, v, 1)).collect(),
        vec![Role::Both; n],
        demands.to_vec(),
        k,
    )
    .unwrap()
}

pub fn path_edges(n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|i| (i - 1, i)).collect()
}

/// The random suite: seeded instances with at most 14 vertices, at most 12 hub
/// locations, k <= 4, weights <= 10 and heuristic width <= 4.
pub fn suite(count: usize) -> Vec<(u64, Instance)> {
    let mut out = Vec::with_capacity(count);
    let mut seed = 0u64;
    while out.len() < count {
        let spec = RandomSpec {
            n: 6 + (seed % 9) as usize,
            density: 0.1 + 0.05 * (seed % 3) as f64,
            weight_max: 10,
            num_demands: 2 + (seed % 5) as usize,
            k: 1 + (seed % 4) as usize,
            hub_fraction: 0.45,
            seed,
        };
        seed += 1;
        let Ok(inst) = gen_random(&spec) else { continue };
        if inst.hub_locations().len() > 12 || heuristic_decomposition(&inst).width() > 4 {
            continue;
        }
        out.push((spec.seed, inst));
    }
    out
}
