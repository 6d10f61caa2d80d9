//! Tree decompositions: validation, a min-fill heuristic, conversion to nice
//! form and completion of bags into cliques.

mod heuristic;
mod nice;

use std::fmt;

use crate::distance::DistanceOracle;
use crate::error::Result;
use crate::instance::{Edge, Instance, Vertex};

pub use heuristic::heuristic_decomposition;
pub use nice::{make_nice, NiceNode, NiceTreeDecomposition, NodeKind};

/// A tree decomposition with bags indexed `0..bags.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<Vertex>>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Empty,
    NotATree,
    UnknownVertex {
        bag: usize,
        vertex: Vertex,
    },
    /// Property (i): a vertex appears in no bag.
    UncoveredVertex(Vertex),
    /// Property (ii): no bag holds both endpoints of an edge.
    UncoveredEdge(Vertex, Vertex),
    /// Property (iii): the bags holding a vertex are not connected.
    DisconnectedOccurrences(Vertex),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "decomposition has no bags"),
            Violation::NotATree => write!(f, "decomposition edges do not form a tree"),
            Violation::UnknownVertex { bag, vertex } => {
                write!(
                    f,
                    "bag {} names vertex {} which is not in the graph",
                    bag + 1,
                    vertex + 1
                )
            }
            Violation::UncoveredVertex(v) => write!(f, "(i) vertex {} is in no bag", v + 1),
            Violation::UncoveredEdge(u, v) => {
                write!(f, "(ii) edge ({}, {}) is contained in no bag", u + 1, v + 1)
            }
            Violation::DisconnectedOccurrences(v) => {
                write!(f, "(iii) bags containing vertex {} are not connected", v + 1)
            }
        }
    }
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    fn is_tree(&self) -> bool {
        let nb = self.bags.len();
        if self.edges.len() + 1 != nb || self.edges.iter().any(|&(a, b)| a >= nb || b >= nb) {
            return false;
        }
        let adj = self.neighbors();
        let mut seen = vec![false; nb];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(t) = stack.pop() {
            for &s in &adj[t] {
                if !seen[s] {
                    seen[s] = true;
                    count += 1;
                    stack.push(s);
                }
            }
        }
        count == nb
    }

    /// Restricts every bag to the kept vertices, renumbering them by `new_id`
    /// (`usize::MAX` marks a removed vertex).
    pub fn restrict(&self, new_id: &[usize]) -> TreeDecomposition {
        let bags = self
            .bags
            .iter()
            .map(|bag| {
                let mut b: Vec<Vertex> = bag.iter().map(|&v| new_id[v]).filter(|&v| v != usize::MAX).collect();
                b.sort_unstable();
                b
            })
            .collect();
        TreeDecomposition {
            bags,
            edges: self.edges.clone(),
        }
    }
}

/// Checks the three tree-decomposition properties and the tree shape.
pub fn validate(td: &TreeDecomposition, instance: &Instance) -> std::result::Result<(), Violation> {
    let n = instance.n();
    if td.bags.is_empty() {
        return Err(Violation::Empty);
    }
    if !td.is_tree() {
        return Err(Violation::NotATree);
    }
    for (i, bag) in td.bags.iter().enumerate() {
        if let Some(&v) = bag.iter().find(|&&v| v >= n) {
            return Err(Violation::UnknownVertex { bag: i, vertex: v });
        }
    }

    let mut occurrences: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            occurrences[v].push(i);
        }
    }
    if let Some(v) = occurrences.iter().position(Vec::is_empty) {
        return Err(Violation::UncoveredVertex(v));
    }

    for e in instance.edges() {
        let covered = occurrences[e.u].iter().any(|&t| td.bags[t].contains(&e.v));
        if !covered {
            return Err(Violation::UncoveredEdge(e.u, e.v));
        }
    }

    let adj = td.neighbors();
    let mut mark = vec![usize::MAX; td.bags.len()];
    for (v, occ) in occurrences.iter().enumerate() {
        for &t in occ {
            mark[t] = v;
        }
        let mut stack = vec![occ[0]];
        let mut seen = vec![false; td.bags.len()];
        seen[occ[0]] = true;
        let mut count = 1;
        while let Some(t) = stack.pop() {
            for &s in &adj[t] {
                if mark[s] == v && !seen[s] {
                    seen[s] = true;
                    count += 1;
                    stack.push(s);
                }
            }
        }
        if count != occ.len() {
            return Err(Violation::DisconnectedOccurrences(v));
        }
    }
    Ok(())
}

/// Makes every bag a clique whose edges have weight `d(u, v)`: missing pairs
/// are added and heavier parallel edges are shortened. Shortest-path distances
/// are unchanged.
pub fn complete_bags(instance: &Instance, ntd: &NiceTreeDecomposition, oracle: &DistanceOracle) -> Result<Instance> {
    let mut pairs = std::collections::BTreeSet::new();
    for node in ntd.nodes() {
        for (i, &u) in node.bag.iter().enumerate() {
            for &v in &node.bag[i + 1..] {
                pairs.insert((u.min(v), u.max(v)));
            }
        }
    }
    let mut edges: Vec<Edge> = instance
        .edges()
        .iter()
        .filter(|e| !pairs.contains(&(e.u.min(e.v), e.u.max(e.v))))
        .cloned()
        .collect();
    edges.extend(pairs.into_iter().map(|(u, v)| Edge::new(u, v, oracle.get(u, v))));
    instance.with_edges(edges)
}
