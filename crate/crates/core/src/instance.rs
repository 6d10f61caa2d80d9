//! Instance model for the multiple-allocation k-hub center problem.
//!
//! Vertices are `0..n` internally. The text format in [`crate::format`] uses
//! 1-based ids and converts at the boundary.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// A demand is an ordered pair of clients that must be routed through one hub.
pub type Demand = (Vertex, Vertex);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Role {
    Client,
    Hub,
    Both,
}

impl Role {
    pub fn is_client(self) -> bool {
        matches!(self, Role::Client | Role::Both)
    }

    pub fn is_hub(self) -> bool {
        matches!(self, Role::Hub | Role::Both)
    }

    pub fn from_flags(client: bool, hub: bool) -> Option<Role> {
        match (client, hub) {
            (true, true) => Some(Role::Both),
            (true, false) => Some(Role::Client),
            (false, true) => Some(Role::Hub),
            (false, false) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge {
    pub u: Vertex,
    pub v: Vertex,
    pub w: u64,
}

impl Edge {
    pub fn new(u: Vertex, v: Vertex, w: u64) -> Self {
        if u <= v {
            Edge { u, v, w }
        } else {
            Edge { u: v, v: u, w }
        }
    }
}

/// A validated, normalized instance.
///
/// Normalization: every edge is stored with `u < v`, parallel edges are merged
/// keeping the lightest weight, edges and demands are sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    edges: Vec<Edge>,
    roles: Vec<Role>,
    demands: Vec<Demand>,
    k: usize,
}

impl Instance {
    pub fn new(n: usize, edges: Vec<Edge>, roles: Vec<Role>, demands: Vec<Demand>, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInstance("graph has no vertices".into()));
        }
        if roles.len() != n {
            return Err(Error::InvalidInstance(format!(
                "expected {n} roles, got {}",
                roles.len()
            )));
        }
        let mut merged: BTreeMap<(Vertex, Vertex), u64> = BTreeMap::new();
        for e in edges {
            let e = Edge::new(e.u, e.v, e.w);
            if e.v >= n {
                return Err(Error::InvalidInstance(format!(
                    "edge ({}, {}) references a vertex outside 0..{n}",
                    e.u, e.v
                )));
            }
            if e.u == e.v {
                return Err(Error::InvalidInstance(format!("self-loop at vertex {}", e.u)));
            }
            if e.w == 0 {
                return Err(Error::InvalidInstance(format!(
                    "edge ({}, {}) has zero weight",
                    e.u, e.v
                )));
            }
            merged
                .entry((e.u, e.v))
                .and_modify(|w| *w = (*w).min(e.w))
                .or_insert(e.w);
        }
        let edges: Vec<Edge> = merged.into_iter().map(|((u, v), w)| Edge { u, v, w }).collect();

        let mut demands = demands;
        demands.sort_unstable();
        demands.dedup();
        if demands.is_empty() {
            return Err(Error::InvalidInstance("instance has no demands".into()));
        }
        for &(a, b) in &demands {
            if a >= n || b >= n {
                return Err(Error::InvalidInstance(format!(
                    "demand ({a}, {b}) references a vertex outside 0..{n}"
                )));
            }
            if !roles[a].is_client() || !roles[b].is_client() {
                return Err(Error::InvalidInstance(format!(
                    "demand ({a}, {b}) has an endpoint that is not a client"
                )));
            }
        }
        let hubs = roles.iter().filter(|r| r.is_hub()).count();
        if k == 0 || k > hubs {
            return Err(Error::InvalidInstance(format!(
                "budget k = {k} must satisfy 1 <= k <= |H| = {hubs}"
            )));
        }

        let inst = Instance {
            n,
            edges,
            roles,
            demands,
            k,
        };
        if let Some(v) = inst.first_unreachable() {
            return Err(Error::Disconnected(0, v));
        }
        Ok(inst)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn role(&self, v: Vertex) -> Role {
        self.roles[v]
    }

    pub fn demands(&self) -> &[Demand] {
        &self.demands
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_hub(&self, v: Vertex) -> bool {
        self.roles[v].is_hub()
    }

    pub fn is_client(&self, v: Vertex) -> bool {
        self.roles[v].is_client()
    }

    /// Hub locations in increasing vertex order.
    pub fn hub_locations(&self) -> Vec<Vertex> {
        (0..self.n).filter(|&v| self.is_hub(v)).collect()
    }

    pub fn clients(&self) -> Vec<Vertex> {
        (0..self.n).filter(|&v| self.is_client(v)).collect()
    }

    pub fn adjacency(&self) -> Vec<Vec<(Vertex, u64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push((e.v, e.w));
            adj[e.v].push((e.u, e.w));
        }
        adj
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let (a, b) = if u <= v { (u, v) } else { (v, u) };
        self.edges.binary_search_by(|e| (e.u, e.v).cmp(&(a, b))).is_ok()
    }

    /// Returns a copy with extra edges merged in. Existing edges keep the
    /// lighter of the two weights.
    pub fn with_extra_edges(&self, extra: impl IntoIterator<Item = Edge>) -> Result<Instance> {
        let mut edges = self.edges.clone();
        edges.extend(extra);
        Instance::new(self.n, edges, self.roles.clone(), self.demands.clone(), self.k)
    }

    /// Returns a copy with the edge list replaced by `edges`.
    pub fn with_edges(&self, edges: Vec<Edge>) -> Result<Instance> {
        Instance::new(self.n, edges, self.roles.clone(), self.demands.clone(), self.k)
    }

    /// Returns a copy with every edge weight replaced by `f(w)`.
    pub fn map_weights(&self, f: impl Fn(u64) -> u64) -> Result<Instance> {
        let edges = self.edges.iter().map(|e| Edge::new(e.u, e.v, f(e.w))).collect();
        Instance::new(self.n, edges, self.roles.clone(), self.demands.clone(), self.k)
    }

    fn first_unreachable(&self) -> Option<Vertex> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.iter().position(|&s| !s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Instance {
        Instance::new(
            3,
            vec![Edge::new(0, 1, 1), Edge::new(1, 2, 1)],
            vec![Role::Both; 3],
            vec![(2, 0), (0, 2), (0, 2)],
            1,
        )
        .unwrap()
    }

    #[test]
    fn demands_are_sorted_and_deduplicated() {
        assert_eq!(path3().demands(), &[(0, 2), (2, 0)]);
    }

    #[test]
    fn parallel_edges_keep_lightest() {
        let inst = Instance::new(
            2,
            vec![Edge::new(1, 0, 7), Edge::new(0, 1, 3)],
            vec![Role::Both; 2],
            vec![(0, 1)],
            1,
        )
        .unwrap();
        assert_eq!(inst.edges(), &[Edge { u: 0, v: 1, w: 3 }]);
        assert!(inst.has_edge(1, 0));
    }

    #[test]
    fn rejects_disconnected_graph() {
        let err = Instance::new(3, vec![Edge::new(0, 1, 1)], vec![Role::Both; 3], vec![(0, 1)], 1).unwrap_err();
        assert!(matches!(err, Error::Disconnected(0, 2)));
    }

    #[test]
    fn rejects_bad_budget_and_non_client_demand() {
        let edges = vec![Edge::new(0, 1, 1)];
        assert!(Instance::new(2, edges.clone(), vec![Role::Both; 2], vec![(0, 1)], 3).is_err());
        assert!(Instance::new(2, edges.clone(), vec![Role::Both; 2], vec![(0, 1)], 0).is_err());
        assert!(Instance::new(2, edges, vec![Role::Client, Role::Hub], vec![(0, 1)], 1).is_err());
    }

    #[test]
    fn rejects_zero_weight() {
        assert!(Instance::new(2, vec![Edge::new(0, 1, 0)], vec![Role::Both; 2], vec![(0, 0)], 1).is_err());
    }
}
