//! Instance generators: the hardness reductions from vertex cover, hitting set
//! and k-center, seeded random instances, grids, and the closed-form planar
//! parameter bounds.

use std::collections::BTreeSet;

use num_integer::Roots;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Edge, Instance, Role, Vertex};

/// Simple undirected graph given by vertex count and edge list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    pub n: usize,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: Vec<(Vertex, Vertex)>) -> Self {
        let mut edges: Vec<(Vertex, Vertex)> = edges
            .into_iter()
            .filter(|(u, v)| u != v)
            .map(|(u, v)| if u < v { (u, v) } else { (v, u) })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        SimpleGraph { n, edges }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn has_triangle(&self) -> bool {
        let set: BTreeSet<(Vertex, Vertex)> = self.edges.iter().copied().collect();
        self.edges.iter().any(|&(u, v)| {
            (0..self.n).any(|w| {
                let e = |a: Vertex, b: Vertex| set.contains(&(a.min(b), a.max(b)));
                w != u && w != v && e(u, w) && e(v, w)
            })
        })
    }

    /// Replaces every edge `(u, v)` by a path `u - u_e - v_e - v`.
    pub fn subdivide_three(&self) -> SimpleGraph {
        let mut edges = Vec::with_capacity(3 * self.edges.len());
        let mut next = self.n;
        for &(u, v) in &self.edges {
            let (ue, ve) = (next, next + 1);
            next += 2;
            edges.extend([(u, ue), (ue, ve), (ve, v)]);
        }
        SimpleGraph::new(next, edges)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn vertex_cover_size(&self) -> usize {
        // exhaustive; only for small test graphs
        (0..=self.n)
            .find(|&k| {
                (0u64..1 << self.n).any(|mask| {
                    mask.count_ones() as usize == k
                        && self
                            .edges
                            .iter()
                            .all(|&(u, v)| mask >> u & 1 == 1 || mask >> v & 1 == 1)
                })
            })
            .unwrap_or(self.n)
    }
}

/// Vertex cover instance as hub center: every vertex is a client and a hub
/// location and every edge is a demand. With `subdivide`, each edge is first
/// split into three (triangle-free, same planarity) and the budget becomes
/// `k + |E|`.
pub fn gen_from_vertex_cover(graph: &SimpleGraph, k: usize, subdivide: bool) -> Result<Instance> {
    let (g, budget) = if subdivide {
        (graph.subdivide_three(), k + graph.edges.len())
    } else {
        (graph.clone(), k)
    };
    let edges = g.edges.iter().map(|&(u, v)| Edge::new(u, v, 1)).collect();
    Instance::new(g.n, edges, vec![Role::Both; g.n], g.edges.clone(), budget)
}

/// Edges on the path joining consecutive element hubs in the hitting-set
/// construction.
pub const HS_CHAIN_LENGTH: usize = 10;

/// Layout of a hitting-set instance: which vertex plays which part.
#[derive(Clone, Debug)]
pub struct HittingSetLayout {
    /// `element_hub[e]` for each universe element, in universe order.
    pub element_hub: Vec<Vertex>,
    /// `(u_S, v_S)` per set, in family order.
    pub set_clients: Vec<(Vertex, Vertex)>,
}

/// Hitting set as hub center: one hub location per element, a client pair and
/// a demand per set, both clients adjacent to the hubs of the set's elements.
///
/// Consecutive element hubs are also joined by a path of
/// [`HS_CHAIN_LENGTH`] unit edges through fresh client vertices so the graph is
/// connected; the paths are long and of even length, so the cost-2 versus
/// cost-at-least-6 gap is unaffected.
pub fn gen_from_hitting_set(universe: &[u64], family: &[Vec<u64>], k: usize) -> Result<(Instance, HittingSetLayout)> {
    if family.is_empty() {
        return Err(Error::InvalidParameter("hitting set family is empty".into()));
    }
    if universe.is_empty() {
        return Err(Error::InvalidParameter("hitting set universe is empty".into()));
    }
    let index_of = |e: u64| universe.iter().position(|&x| x == e);
    let m = universe.len();
    let mut roles = vec![Role::Hub; m];
    let mut edges = Vec::new();
    let mut demands = Vec::new();
    let mut set_clients = Vec::new();
    for set in family {
        if set.is_empty() {
            return Err(Error::InvalidParameter(
                "hitting set family contains an empty set".into(),
            ));
        }
        let us = roles.len();
        let vs = us + 1;
        roles.extend([Role::Client, Role::Client]);
        for &e in set {
            let h =
                index_of(e).ok_or_else(|| Error::InvalidParameter(format!("element {e} is not in the universe")))?;
            edges.push(Edge::new(us, h, 1));
            edges.push(Edge::new(vs, h, 1));
        }
        demands.push((us, vs));
        set_clients.push((us, vs));
    }
    for h in 1..m {
        let mut prev = h - 1;
        for _ in 0..HS_CHAIN_LENGTH - 1 {
            let aux = roles.len();
            roles.push(Role::Client);
            edges.push(Edge::new(prev, aux, 1));
            prev = aux;
        }
        edges.push(Edge::new(prev, h, 1));
    }
    let n = roles.len();
    let inst = Instance::new(n, edges, roles, demands, k.min(m))?;
    Ok((
        inst,
        HittingSetLayout {
            element_hub: (0..m).collect(),
            set_clients,
        },
    ))
}

/// k-center as hub center: every vertex is a client and hub location with a
/// self-demand `(u, u)`.
pub fn gen_from_kcenter(n: usize, edges: &[Edge], k: usize) -> Result<Instance> {
    Instance::new(
        n,
        edges.to_vec(),
        vec![Role::Both; n],
        (0..n).map(|u| (u, u)).collect(),
        k,
    )
}

/// Parameters of [`gen_random`].
#[derive(Clone, Debug)]
pub struct RandomSpec {
    pub n: usize,
    /// Probability of each non-tree edge.
    pub density: f64,
    pub weight_max: u64,
    pub num_demands: usize,
    pub k: usize,
    /// Probability that a vertex is a hub location (it may also be a client).
    pub hub_fraction: f64,
    pub seed: u64,
}

/// Connected random instance: a random spanning tree plus independent extra
/// edges, uniform weights in `1..=weight_max`, random roles and demands.
/// Deterministic per seed.
pub fn gen_random(spec: &RandomSpec) -> Result<Instance> {
    if spec.n == 0 || spec.weight_max == 0 || spec.num_demands == 0 || spec.k == 0 {
        return Err(Error::InvalidParameter(
            "random generator parameters must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let mut edges = Vec::new();
    let mut present = BTreeSet::new();
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(&mut rng);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (u, v) = (order[i], order[j]);
        present.insert((u.min(v), u.max(v)));
        edges.push(Edge::new(u, v, rng.gen_range(1..=spec.weight_max)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present.contains(&(u, v)) && rng.gen_bool(spec.density.clamp(0.0, 1.0)) {
                edges.push(Edge::new(u, v, rng.gen_range(1..=spec.weight_max)));
            }
        }
    }

    let mut roles: Vec<Role> = (0..n)
        .map(|_| {
            let hub = rng.gen_bool(spec.hub_fraction.clamp(0.0, 1.0));
            let client = !hub || rng.gen_bool(0.5);
            Role::from_flags(client, hub).unwrap()
        })
        .collect();
    // guarantee k hub locations and at least one client
    let mut hubs = roles.iter().filter(|r| r.is_hub()).count();
    for role in roles.iter_mut() {
        if hubs >= spec.k {
            break;
        }
        if !role.is_hub() {
            *role = Role::Both;
            hubs += 1;
        }
    }
    if !roles.iter().any(|r| r.is_client()) {
        roles[0] = Role::Both;
    }
    let clients: Vec<Vertex> = (0..n).filter(|&v| roles[v].is_client()).collect();
    let demands = (0..spec.num_demands)
        .map(|_| (*clients.choose(&mut rng).unwrap(), *clients.choose(&mut rng).unwrap()))
        .collect();
    Instance::new(n, edges, roles, demands, spec.k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridDemands {
    /// Top-left to bottom-right and top-right to bottom-left.
    OppositeCorners,
    /// First to last vertex of every row.
    RowEnds,
    /// `(u, u)` for every vertex.
    SelfLoops,
}

impl std::str::FromStr for GridDemands {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corners" => Ok(GridDemands::OppositeCorners),
            "row-ends" => Ok(GridDemands::RowEnds),
            "self" => Ok(GridDemands::SelfLoops),
            other => Err(Error::InvalidParameter(format!(
                "unknown grid demand pattern '{other}'"
            ))),
        }
    }
}

/// Unweighted `rows x cols` grid; vertex `(i, j)` is `i * cols + j`.
pub fn gen_grid(rows: usize, cols: usize, pattern: GridDemands, k: usize) -> Result<Instance> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParameter("grid dimensions must be positive".into()));
    }
    let id = |i: usize, j: usize| i * cols + j;
    let mut edges = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if j + 1 < cols {
                edges.push(Edge::new(id(i, j), id(i, j + 1), 1));
            }
            if i + 1 < rows {
                edges.push(Edge::new(id(i, j), id(i + 1, j), 1));
            }
        }
    }
    let n = rows * cols;
    let demands = match pattern {
        GridDemands::OppositeCorners => vec![(id(0, 0), id(rows - 1, cols - 1)), (id(0, cols - 1), id(rows - 1, 0))],
        GridDemands::RowEnds => (0..rows).map(|i| (id(i, 0), id(i, cols - 1))).collect(),
        GridDemands::SelfLoops => (0..n).map(|v| (v, v)).collect(),
    };
    Instance::new(n, edges, vec![Role::Both; n], demands, k)
}

/// Closed-form bounds for unweighted planar instances with a solution of
/// value `r` using `k` hubs: the largest grid minor side `rho` and treewidth.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PlanarBounds {
    pub rho: f64,
    pub tw: f64,
    /// Smallest integers not below the real bounds.
    pub rho_ceil: u64,
    pub tw_ceil: u64,
    /// Whether `k` is a perfect square, making both bounds integers.
    pub exact: bool,
}

/// `rho <= sqrt(k) (2r + 1) + 2r` and `tw <= 6 sqrt(k) (2r + 1) + 12r + 1`.
pub fn planar_bounds(k: u64, r: u64) -> PlanarBounds {
    let side = 2 * r + 1;
    let sqrt_k = (k as f64).sqrt();
    let exact = k.sqrt() * k.sqrt() == k;
    let ceil_sqrt = |x: u128| {
        let s = x.sqrt();
        if s * s == x {
            s
        } else {
            s + 1
        }
    };
    let s = side as u128;
    let rho_ceil = ceil_sqrt(k as u128 * s * s) as u64 + 2 * r;
    let tw_ceil = ceil_sqrt(36 * k as u128 * s * s) as u64 + 12 * r + 1;
    PlanarBounds {
        rho: sqrt_k * side as f64 + 2.0 * r as f64,
        tw: 6.0 * sqrt_k * side as f64 + 12.0 * r as f64 + 1.0,
        rho_ceil,
        tw_ceil,
        exact,
    }
}
