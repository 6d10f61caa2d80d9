use serde::Serialize;

use crate::distance::DistanceOracle;
use crate::error::{Error, Result};
use crate::instance::{Demand, Instance, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Solution {
    /// Opened hubs in increasing order.
    pub hubs: Vec<Vertex>,
    /// Objective value measured in the weights of the instance it was evaluated on.
    pub value: u64,
    /// Radius at which the producing algorithm accepted, if it has one.
    pub r_used: Option<u64>,
    /// Serving hub per demand, in demand order.
    pub per_demand_hub: Vec<(Demand, Vertex)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub value: u64,
    pub per_demand_hub: Vec<(Demand, Vertex)>,
}

/// Exact objective `max_(a,b) min_h d(a,h) + d(h,b)` with the lowest-id
/// minimizing hub recorded per demand.
pub fn evaluate_solution(instance: &Instance, hubs: &[Vertex], oracle: &DistanceOracle) -> Result<Evaluation> {
    if hubs.is_empty() {
        return Err(Error::NoHubs);
    }
    if let Some(&h) = hubs.iter().find(|&&h| h >= instance.n() || !instance.is_hub(h)) {
        return Err(Error::InvalidParameter(format!("vertex {h} is not a hub location")));
    }
    let mut sorted = hubs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();

    let mut value = 0;
    let mut per_demand_hub = Vec::with_capacity(instance.demands().len());
    for &(a, b) in instance.demands() {
        let (cost, h) = sorted
            .iter()
            .map(|&h| (oracle.via(a, h, b), h))
            .min()
            .expect("nonempty hub set");
        value = value.max(cost);
        per_demand_hub.push(((a, b), h));
    }
    Ok(Evaluation { value, per_demand_hub })
}

impl Solution {
    pub fn measured(
        instance: &Instance,
        hubs: Vec<Vertex>,
        r_used: Option<u64>,
        oracle: &DistanceOracle,
    ) -> Result<Self> {
        let mut hubs = hubs;
        hubs.sort_unstable();
        hubs.dedup();
        let ev = evaluate_solution(instance, &hubs, oracle)?;
        Ok(Solution {
            hubs,
            value: ev.value,
            r_used,
            per_demand_hub: ev.per_demand_hub,
        })
    }
}
