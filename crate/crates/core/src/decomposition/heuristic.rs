use std::collections::BTreeSet;

use super::TreeDecomposition;
use crate::instance::{Instance, Vertex};

/// Tree decomposition from a greedy min-fill elimination ordering.
///
/// Ties are broken by smaller degree, then smaller vertex id.
pub fn heuristic_decomposition(instance: &Instance) -> TreeDecomposition {
    let n = instance.n();
    let mut adj: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); n];
    for e in instance.edges() {
        adj[e.u].insert(e.v);
        adj[e.v].insert(e.u);
    }
    let mut eliminated = vec![false; n];
    let mut position = vec![usize::MAX; n];
    let mut bags: Vec<Vec<Vertex>> = Vec::with_capacity(n);

    for step in 0..n {
        let v = (0..n)
            .filter(|&v| !eliminated[v])
            .min_by_key(|&v| (fill_in(&adj, v), adj[v].len(), v))
            .expect("a vertex remains");
        let nbrs: Vec<Vertex> = adj[v].iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        for &a in &nbrs {
            adj[a].remove(&v);
        }
        adj[v].clear();
        eliminated[v] = true;
        position[v] = step;
        let mut bag = nbrs;
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
    }

    // Bag of step i hangs below the bag of its earliest-eliminated later neighbour.
    let order: Vec<Vertex> = {
        let mut o = vec![0; n];
        for v in 0..n {
            o[position[v]] = v;
        }
        o
    };
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for (step, bag) in bags.iter().enumerate().take(n.saturating_sub(1)) {
        let v = order[step];
        let parent = bag
            .iter()
            .filter(|&&u| u != v)
            .map(|&u| position[u])
            .min()
            .unwrap_or(step + 1);
        edges.push((step, parent));
    }
    TreeDecomposition { bags, edges }
}

fn fill_in(adj: &[BTreeSet<Vertex>], v: Vertex) -> usize {
    let nbrs: Vec<Vertex> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}
