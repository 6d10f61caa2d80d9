use std::cmp::Reverse;
use std::collections::BinaryHeap;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::{Instance, Vertex};

pub const UNREACHABLE: u64 = u64::MAX;

/// All-pairs shortest-path distances, stored as a dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceOracle {
    n: usize,
    d: Vec<u64>,
}

impl DistanceOracle {
    #[inline]
    pub fn get(&self, u: Vertex, v: Vertex) -> u64 {
        self.d[u * self.n + v]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, u: Vertex) -> &[u64] {
        &self.d[u * self.n..(u + 1) * self.n]
    }

    /// Cost of routing demand `(a, b)` through `h`.
    #[inline]
    pub fn via(&self, a: Vertex, h: Vertex, b: Vertex) -> u64 {
        self.get(a, h) + self.get(h, b)
    }

    pub fn max_distance(&self) -> u64 {
        self.d.iter().copied().max().unwrap_or(0)
    }
}

/// Single-source Dijkstra over `adj`. When `allowed` is given, the search never
/// leaves that vertex set; unreached vertices get [`UNREACHABLE`].
pub fn dijkstra(adj: &[Vec<(Vertex, u64)>], src: Vertex, allowed: Option<&FixedBitSet>) -> Vec<u64> {
    let mut dist = vec![UNREACHABLE; adj.len()];
    if allowed.is_some_and(|a| !a.contains(src)) {
        return dist;
    }
    dist[src] = 0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0u64, src)));
    while let Some(Reverse((du, u))) = heap.pop() {
        if du > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            if allowed.is_some_and(|a| !a.contains(v)) {
                continue;
            }
            let nd = du + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((nd, v)));
            }
        }
    }
    dist
}

pub fn all_pairs_distances(instance: &Instance) -> Result<DistanceOracle> {
    let n = instance.n();
    let adj = instance.adjacency();
    let rows: Vec<Vec<u64>> = (0..n).into_par_iter().map(|s| dijkstra(&adj, s, None)).collect();
    let mut d = Vec::with_capacity(n * n);
    for (s, row) in rows.into_iter().enumerate() {
        if let Some(t) = row.iter().position(|&x| x == UNREACHABLE) {
            return Err(Error::Disconnected(s, t));
        }
        d.extend(row);
    }
    Ok(DistanceOracle { n, d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Edge, Role};

    fn build(n: usize, edges: &[(usize, usize, u64)]) -> Instance {
        Instance::new(
            n,
            edges.iter().map(|&(u, v, w)| Edge::new(u, v, w)).collect(),
            vec![Role::Both; n],
            vec![(0, 0)],
            1,
        )
        .unwrap()
    }

    #[test]
    fn single_edge() {
        let d = all_pairs_distances(&build(2, &[(0, 1, 5)])).unwrap();
        assert_eq!(d.get(0, 1), 5);
        assert_eq!(d.get(0, 0), 0);
    }

    #[test]
    fn path_composes() {
        let d = all_pairs_distances(&build(3, &[(0, 1, 1), (1, 2, 1)])).unwrap();
        assert_eq!(d.get(0, 2), 2);
    }

    #[test]
    fn four_cycle_opposite_corners() {
        let d = all_pairs_distances(&build(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)])).unwrap();
        // routes 0-1-2 and 0-3-2 both have length 2
        assert_eq!(d.get(0, 2), 2);
        assert_eq!(d.get(1, 3), 2);
    }

    #[test]
    fn restricted_search_stays_inside() {
        let inst = build(4, &[(0, 1, 1), (1, 2, 1), (0, 3, 5), (3, 2, 5)]);
        let mut allowed = FixedBitSet::with_capacity(4);
        allowed.insert(0);
        allowed.insert(3);
        allowed.insert(2);
        let dist = dijkstra(&inst.adjacency(), 0, Some(&allowed));
        assert_eq!(dist[2], 10);
        assert_eq!(dist[1], UNREACHABLE);
    }
}
