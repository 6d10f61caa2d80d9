//! Threshold greedy with a factor-3 guarantee.
//!
//! For a candidate radius `r`, repeatedly take the first unsatisfied demand,
//! open the first hub location inside its demand subgraph, and mark every
//! demand that hub serves within `3r`. Two demands picked in one pass cannot
//! share an optimal hub, so at `r = OPT` at most `k` hubs are opened.

use crate::distance::DistanceOracle;
use crate::error::{Error, Result};
use crate::evaluate::Solution;
use crate::instance::{Instance, Vertex};

pub fn greedy_three_approx(instance: &Instance, oracle: &DistanceOracle) -> Result<Solution> {
    let hubs = instance.hub_locations();
    let demands = instance.demands();
    let mut radii: Vec<u64> = demands
        .iter()
        .flat_map(|&(a, b)| hubs.iter().map(move |&h| oracle.via(a, h, b)))
        .collect();
    radii.sort_unstable();
    radii.dedup();

    for &r in &radii {
        if let Some(opened) = greedy_at(instance, oracle, &hubs, r) {
            return Solution::measured(instance, opened, Some(r), oracle);
        }
    }
    Err(Error::Infeasible("no candidate radius admits a greedy cover".into()))
}

fn greedy_at(instance: &Instance, oracle: &DistanceOracle, hubs: &[Vertex], r: u64) -> Option<Vec<Vertex>> {
    let demands = instance.demands();
    let mut satisfied = vec![false; demands.len()];
    let mut opened = Vec::new();
    while let Some(i) = satisfied.iter().position(|&s| !s) {
        if opened.len() == instance.k() {
            return None;
        }
        let (a, b) = demands[i];
        let h = *hubs.iter().find(|&&h| oracle.via(a, h, b) <= r)?;
        opened.push(h);
        for (j, &(a2, b2)) in demands.iter().enumerate() {
            if oracle.via(a2, h, b2) <= 3 * r {
                satisfied[j] = true;
            }
        }
    }
    Some(opened)
}
