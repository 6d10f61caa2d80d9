//! Coloring-independent data shared by every table entry at one radius.

use fixedbitset::FixedBitSet;
use rustc_hash::FxHashMap;

use super::color::{Color, Coloring};
use crate::arith::{ColorAlphabet, Magnitude};
use crate::decomposition::NiceTreeDecomposition;
use crate::distance::DistanceOracle;
use crate::instance::{Instance, Vertex};

/// Set of demand indices.
pub type DemandSet = FixedBitSet;

pub struct DpContext<'a> {
    pub instance: &'a Instance,
    pub oracle: &'a DistanceOracle,
    pub ntd: &'a NiceTreeDecomposition,
    pub alphabet: &'a ColorAlphabet,
    pub r: u64,
    /// Per node: demands that must be handled inside `G_t` unless a bag color
    /// already satisfies them.
    scope: Vec<DemandSet>,
    /// Per vertex: routing costs through it, ascending, with the prefix set of
    /// demands achieving each cost.
    satisfied_by: Vec<(Vec<u64>, Vec<DemandSet>)>,
    oplus_rows: FxHashMap<u64, Vec<Option<Magnitude>>>,
    /// Per vertex: magnitudes of `⊕` chains along fewest-edge shortest paths
    /// to a hub location within `r`.
    reachable: Vec<FixedBitSet>,
}

impl<'a> DpContext<'a> {
    pub fn new(
        instance: &'a Instance,
        oracle: &'a DistanceOracle,
        ntd: &'a NiceTreeDecomposition,
        alphabet: &'a ColorAlphabet,
    ) -> Self {
        let r = alphabet.r();
        let nd = instance.demands().len();
        let n = instance.n();

        let satisfied_by = (0..n)
            .map(|u| {
                let mut costs: Vec<(u64, usize)> = instance
                    .demands()
                    .iter()
                    .enumerate()
                    .map(|(i, &(a, b))| (oracle.via(a, u, b), i))
                    .collect();
                costs.sort_unstable();
                let mut levels = Vec::new();
                let mut sets: Vec<DemandSet> = Vec::new();
                let mut acc = DemandSet::with_capacity(nd);
                for (idx, &(c, i)) in costs.iter().enumerate() {
                    acc.insert(i);
                    if idx + 1 == costs.len() || costs[idx + 1].0 != c {
                        levels.push(c);
                        sets.push(acc.clone());
                    }
                }
                (levels, sets)
            })
            .collect();

        let scope = ntd
            .nodes()
            .iter()
            .enumerate()
            .map(|(t, node)| demand_scope(instance, oracle, ntd.subtree_vertices(t), &node.bag, r))
            .collect();

        let mut oplus_rows: FxHashMap<u64, Vec<Option<Magnitude>>> = FxHashMap::default();
        for node in ntd.nodes() {
            for (i, &u) in node.bag.iter().enumerate() {
                for &v in &node.bag[i + 1..] {
                    let d = oracle.get(u, v);
                    oplus_rows.entry(d).or_insert_with(|| alphabet.oplus_row(d));
                }
            }
        }
        for e in instance.edges() {
            oplus_rows.entry(e.w).or_insert_with(|| alphabet.oplus_row(e.w));
        }

        let reachable = chain_magnitudes(instance, oracle, alphabet, &oplus_rows, r);
        DpContext {
            instance,
            oracle,
            ntd,
            alphabet,
            r,
            scope,
            satisfied_by,
            oplus_rows,
            reachable,
        }
    }

    pub fn num_demands(&self) -> usize {
        self.instance.demands().len()
    }

    pub fn scope(&self, t: usize) -> &DemandSet {
        &self.scope[t]
    }

    /// `d(u, v) ⊕ value(m)` inside the alphabet.
    pub fn oplus(&self, u: Vertex, v: Vertex, m: Magnitude) -> Option<Magnitude> {
        self.oplus_rows[&self.oracle.get(u, v)][m as usize]
    }

    pub fn is_chain_magnitude(&self, u: Vertex, m: Magnitude) -> bool {
        self.reachable[u].contains(m as usize)
    }

    /// Nonzero magnitudes an `↑` color on `u` may take.
    pub fn up_magnitudes(&self, u: Vertex) -> impl Iterator<Item = Magnitude> + '_ {
        self.reachable[u].ones().filter(|&m| m > 0).map(|m| m as Magnitude)
    }

    /// Demands `(a, b)` with `d(a, u) + 2 value(m) + d(u, b) <= (1 + eps) 2r`.
    pub fn satisfied_via(&self, u: Vertex, m: Magnitude, into: &mut DemandSet) {
        let Some(budget) = self.alphabet.satisfy_budget(m) else {
            return;
        };
        let (levels, sets) = &self.satisfied_by[u];
        let idx = levels.partition_point(|&c| c <= budget);
        if idx > 0 {
            into.union_with(&sets[idx - 1]);
        }
    }

    /// `S_t(c)` for a bag and a coloring aligned with it.
    pub fn satisfied_set(&self, bag: &[Vertex], coloring: &Coloring) -> DemandSet {
        let mut s = DemandSet::with_capacity(self.num_demands());
        for (&u, &c) in bag.iter().zip(coloring.iter()) {
            self.satisfied_via(u, c.magnitude(), &mut s);
        }
        s
    }

    /// `D_t(c)` given `S_t(c)`.
    pub fn required_set(&self, t: usize, satisfied: &DemandSet) -> DemandSet {
        let mut d = self.scope[t].clone();
        d.difference_with(satisfied);
        d
    }

    pub fn color_value_f64(&self, c: Color) -> f64 {
        self.alphabet.to_f64(c.magnitude())
    }
}

/// For every vertex `u`, the magnitudes `d(x0, x1) ⊕ (d(x1, x2) ⊕ (... ⊕ 0))`
/// over paths `u = x0, x1, ..., h` that are fewest-edge shortest paths to a hub
/// location `h` with `d(u, h) <= r`. The colors of an optimal solution's
/// signature are of this form, so other magnitudes can be skipped.
fn chain_magnitudes(
    instance: &Instance,
    oracle: &DistanceOracle,
    alphabet: &ColorAlphabet,
    rows: &FxHashMap<u64, Vec<Option<Magnitude>>>,
    r: u64,
) -> Vec<FixedBitSet> {
    let n = instance.n();
    let adj = instance.adjacency();
    let mut reachable = vec![FixedBitSet::with_capacity(alphabet.len()); n];
    for h in instance.hub_locations() {
        let mut order: Vec<Vertex> = (0..n).filter(|&u| oracle.get(u, h) <= r).collect();
        order.sort_by_key(|&u| (oracle.get(u, h), u));
        // fewest edges among shortest paths to h
        let mut hops = vec![usize::MAX; n];
        let mut mags = vec![FixedBitSet::with_capacity(alphabet.len()); n];
        for &u in &order {
            if u == h {
                hops[u] = 0;
                mags[u].insert(0);
                continue;
            }
            let du = oracle.get(u, h);
            let next = |&&(v, w): &&(Vertex, u64)| w + oracle.get(v, h) == du;
            hops[u] = adj[u].iter().filter(next).map(|&(v, _)| hops[v] + 1).min().unwrap();
            for &(v, w) in adj[u].iter().filter(next) {
                if hops[v] + 1 != hops[u] {
                    continue;
                }
                let row = &rows[&w];
                let from: Vec<usize> = mags[v].ones().collect();
                for m in from {
                    if let Some(m2) = row[m] {
                        mags[u].insert(m2 as usize);
                    }
                }
            }
        }
        for u in order {
            reachable[u].union_with(&mags[u]);
        }
    }
    reachable
}

/// Demands with both endpoints in `G_t`, or exactly one endpoint in `G_t` and a
/// vertex `h` of `G_ab ∩ G_t` farther than `r/2` from every vertex of
/// `G_ab ∩ X_t`. The second clause is read symmetrically in the endpoints.
pub(super) fn demand_scope(
    instance: &Instance,
    oracle: &DistanceOracle,
    subtree: &FixedBitSet,
    bag: &[Vertex],
    r: u64,
) -> DemandSet {
    let demands = instance.demands();
    let mut scope = DemandSet::with_capacity(demands.len());
    for (i, &(a, b)) in demands.iter().enumerate() {
        let (ina, inb) = (subtree.contains(a), subtree.contains(b));
        let include = if ina && inb {
            true
        } else if ina != inb {
            let in_gab = |v: Vertex| oracle.via(a, v, b) <= r;
            let sep: Vec<Vertex> = bag.iter().copied().filter(|&x| in_gab(x)).collect();
            subtree
                .ones()
                .filter(|&h| in_gab(h))
                .any(|h| sep.iter().map(|&x| oracle.get(h, x)).min().is_none_or(|m| 2 * m > r))
        } else {
            false
        };
        if include {
            scope.insert(i);
        }
    }
    scope
}
