//! Radius-dependent preprocessing: demand subgraphs, removal of vertices that
//! lie on no short demand path, and distance rescaling.

use fixedbitset::FixedBitSet;
use num_rational::Ratio;

use crate::distance::DistanceOracle;
use crate::error::{Error, Result};
use crate::instance::{Demand, Edge, Instance, Vertex};

/// Vertices `v` with `d(a, v) + d(v, b) <= r`.
pub fn demand_subgraph(demand: Demand, r: u64, oracle: &DistanceOracle) -> Vec<Vertex> {
    let (a, b) = demand;
    (0..oracle.n()).filter(|&v| oracle.via(a, v, b) <= r).collect()
}

/// Result of [`preprocess_remove`]: the induced instance plus the map from new
/// vertex ids back to the ids of the input instance.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub instance: Instance,
    pub original: Vec<Vertex>,
}

impl Reduced {
    pub fn identity(instance: &Instance) -> Self {
        Reduced {
            instance: instance.clone(),
            original: (0..instance.n()).collect(),
        }
    }

    pub fn to_original(&self, v: Vertex) -> Vertex {
        self.original[v]
    }
}

/// Removes every vertex that lies on no demand path of cost at most `r`.
///
/// Kept components without demand endpoints are dropped; the others are
/// reconnected through removed vertices. The budget is clamped to the number
/// of surviving hub locations. Any serving path of cost `<= r` survives
/// intact, so feasibility at radius `r` is unchanged; distances between kept
/// vertices may grow.
pub fn preprocess_remove(instance: &Instance, r: u64, oracle: &DistanceOracle) -> Result<Reduced> {
    let n = instance.n();
    let demands = instance.demands();
    if demands.iter().any(|&(a, b)| oracle.get(a, b) > r) {
        return Err(Error::RadiusInfeasible(r));
    }

    let mut keep = FixedBitSet::with_capacity(n);
    for v in 0..n {
        if demands.iter().any(|&(a, b)| oracle.via(a, v, b) <= r) {
            keep.insert(v);
        }
    }

    // Drop kept components that contain no demand endpoint.
    let adj = instance.adjacency();
    let mut comp = vec![usize::MAX; n];
    let mut ncomp = 0;
    for s in keep.ones() {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = ncomp;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[u] {
                if keep.contains(v) && comp[v] == usize::MAX {
                    comp[v] = ncomp;
                    stack.push(v);
                }
            }
        }
        ncomp += 1;
    }
    // Components holding demand endpoints are joined by shortest (fewest-edge)
    // bridges of removed vertices. Each demand can be served inside its own
    // component, so separated endpoints do not make the radius infeasible.
    let mut pending: Vec<bool> = vec![false; ncomp];
    for &(a, b) in demands {
        pending[comp[a]] = true;
        pending[comp[b]] = true;
    }
    let mut selected = FixedBitSet::with_capacity(n);
    let absorb = |c: usize, selected: &mut FixedBitSet, pending: &mut Vec<bool>| {
        pending[c] = false;
        for v in keep.ones().filter(|&v| comp[v] == c) {
            selected.insert(v);
        }
    };
    absorb(comp[demands[0].0], &mut selected, &mut pending);
    while pending.iter().any(|&p| p) {
        let mut parent = vec![usize::MAX; n];
        let mut queue: std::collections::VecDeque<Vertex> = selected.ones().collect();
        for v in selected.ones() {
            parent[v] = v;
        }
        let mut hit = None;
        'bfs: while let Some(u) = queue.pop_front() {
            for &(v, _) in &adj[u] {
                if parent[v] != usize::MAX {
                    continue;
                }
                parent[v] = u;
                if keep.contains(v) && pending[comp[v]] {
                    hit = Some(v);
                    break 'bfs;
                }
                queue.push_back(v);
            }
        }
        let v = hit.expect("input graph is connected");
        absorb(comp[v], &mut selected, &mut pending);
        let mut x = parent[v];
        while !selected.contains(x) {
            selected.insert(x);
            x = parent[x];
        }
    }

    let original: Vec<Vertex> = selected.ones().collect();
    let mut new_id = vec![usize::MAX; n];
    for (i, &v) in original.iter().enumerate() {
        new_id[v] = i;
    }
    let edges = instance
        .edges()
        .iter()
        .filter(|e| new_id[e.u] != usize::MAX && new_id[e.v] != usize::MAX)
        .map(|e| Edge::new(new_id[e.u], new_id[e.v], e.w))
        .collect();
    let roles = original.iter().map(|&v| instance.role(v)).collect();
    let new_demands = demands.iter().map(|&(a, b)| (new_id[a], new_id[b])).collect();
    let hubs = original.iter().filter(|&&v| instance.is_hub(v)).count();
    if hubs == 0 {
        return Err(Error::RadiusInfeasible(r));
    }
    let k = instance.k().min(hubs);
    let reduced = Instance::new(original.len(), edges, roles, new_demands, k)?;
    Ok(Reduced {
        instance: reduced,
        original,
    })
}

/// Raw scaled weight `ceil(3 n / (eps * a) * w)` with `eps` given exactly.
pub fn scaled_weight(w: u64, n: usize, epsilon: Ratio<u64>, a: u64) -> u64 {
    let num = 3u128 * n as u128 * *epsilon.denom() as u128 * w as u128;
    let den = *epsilon.numer() as u128 * a as u128;
    num.div_ceil(den) as u64
}

/// Rescales edge weights so the optimum is `O(n / eps)`.
///
/// `a` is the value of a feasible solution with `a <= 3 OPT`. The scale factor
/// `3n / (eps a)` is capped at 1, so instances whose optimum is already small
/// are returned unchanged. `a == 0` also returns the instance unchanged.
pub fn rescale(instance: &Instance, epsilon: Ratio<u64>, a: u64) -> Result<Instance> {
    if a == 0 {
        return Ok(instance.clone());
    }
    let n = instance.n() as u128;
    let factor_at_least_one = 3 * n * *epsilon.denom() as u128 >= *epsilon.numer() as u128 * a as u128;
    if factor_at_least_one {
        return Ok(instance.clone());
    }
    instance.map_weights(|w| scaled_weight(w, instance.n(), epsilon, a).max(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::all_pairs_distances;
    use crate::instance::Role;

    fn inst(n: usize, edges: &[(usize, usize, u64)], demands: &[Demand]) -> Instance {
        Instance::new(
            n,
            edges.iter().map(|&(u, v, w)| Edge::new(u, v, w)).collect(),
            vec![Role::Both; n],
            demands.to_vec(),
            1,
        )
        .unwrap()
    }

    #[test]
    fn demand_subgraph_single_edge() {
        let i = inst(2, &[(0, 1, 1)], &[(0, 1)]);
        let d = all_pairs_distances(&i).unwrap();
        assert_eq!(demand_subgraph((0, 1), 1, &d), vec![0, 1]);
    }

    #[test]
    fn self_demand_is_a_ball() {
        // star centred at 0 with leaves 1..=3, plus a tail 3-4
        let i = inst(5, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (3, 4, 1)], &[(0, 0)]);
        let d = all_pairs_distances(&i).unwrap();
        assert_eq!(demand_subgraph((0, 0), 2, &d), vec![0, 1, 2, 3]);
    }

    #[test]
    fn demand_subgraph_on_path() {
        // a=0, x=1, y=2, b=3
        let i = inst(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)], &[(0, 3)]);
        let d = all_pairs_distances(&i).unwrap();
        assert_eq!(demand_subgraph((0, 3), 3, &d), vec![0, 1, 2, 3]);
        assert!(demand_subgraph((0, 3), 2, &d).is_empty());
    }

    #[test]
    fn removal_drops_far_vertex() {
        // a=0 - b=1 - z=2
        let i = inst(3, &[(0, 1, 1), (1, 2, 1)], &[(0, 1)]);
        let d = all_pairs_distances(&i).unwrap();
        let red = preprocess_remove(&i, 1, &d).unwrap();
        assert_eq!(red.original, vec![0, 1]);
        assert_eq!(red.instance.n(), 2);
    }

    #[test]
    fn removal_is_fixpoint_when_everything_is_relevant() {
        let i = inst(3, &[(0, 1, 1), (1, 2, 1)], &[(0, 2)]);
        let d = all_pairs_distances(&i).unwrap();
        let red = preprocess_remove(&i, 2, &d).unwrap();
        assert_eq!(red.instance, i);
    }

    #[test]
    fn removal_reports_infeasible_radius() {
        let i = inst(3, &[(0, 1, 1), (1, 2, 1)], &[(0, 2)]);
        let d = all_pairs_distances(&i).unwrap();
        assert!(matches!(preprocess_remove(&i, 1, &d), Err(Error::RadiusInfeasible(1))));
    }

    #[test]
    fn separated_demands_are_bridged() {
        // 0 - 1 - 2 - 3 - 4 with demands (0, 0) and (4, 4) at radius 0
        let i = inst(5, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1)], &[(0, 0), (4, 4)]);
        let d = all_pairs_distances(&i).unwrap();
        let red = preprocess_remove(&i, 0, &d).unwrap();
        assert_eq!(red.original, vec![0, 1, 2, 3, 4]);

        // a shortcut through 5 is preferred
        let i = inst(
            6,
            &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (0, 5, 9), (5, 4, 9)],
            &[(0, 0), (4, 4)],
        );
        let d = all_pairs_distances(&i).unwrap();
        let red = preprocess_remove(&i, 0, &d).unwrap();
        assert_eq!(red.original, vec![0, 4, 5]);
    }

    #[test]
    fn scaled_weight_formula() {
        let one = Ratio::from_integer(1);
        assert_eq!(scaled_weight(1000, 2, one, 2000), 3);
        assert_eq!(scaled_weight(1, 2, one, 2), 3);
    }

    #[test]
    fn rescale_shrinks_heavy_instance_only() {
        let heavy = inst(2, &[(0, 1, 1000)], &[(0, 1)]);
        let out = rescale(&heavy, Ratio::from_integer(1), 2000).unwrap();
        assert_eq!(out.edges()[0].w, 3);

        let light = inst(2, &[(0, 1, 1)], &[(0, 1)]);
        assert_eq!(rescale(&light, Ratio::from_integer(1), 2).unwrap(), light);
        assert_eq!(rescale(&light, Ratio::from_integer(1), 0).unwrap(), light);
    }
}
