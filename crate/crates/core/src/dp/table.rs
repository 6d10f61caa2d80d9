//! Bottom-up evaluation of `A_t(c)` over a nice tree decomposition.

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::color::{Color, Coloring};
use super::context::{DemandSet, DpContext};
use crate::decomposition::NodeKind;
use crate::instance::Vertex;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Back {
    Leaf,
    Introduce { child: Coloring, opened: bool },
    Forget { child: Coloring },
    Join { left: Coloring, right: Coloring },
}

#[derive(Clone, Debug)]
pub struct Entry {
    /// `A_t(c)`: hubs opened inside `G_t`.
    pub hubs: u32,
    pub back: Back,
    /// `S_t(c)`.
    pub satisfied: DemandSet,
    /// `D_t(c)`.
    pub required: DemandSet,
}

pub type NodeTable = FxHashMap<Coloring, Entry>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DpStats {
    /// Candidate colorings that passed admissibility and the demand-inclusion test.
    pub colorings_expanded: u64,
    pub max_table: usize,
    pub total_entries: u64,
}

pub struct DpTables {
    pub tables: Vec<NodeTable>,
    /// Distinct colorings produced at each node, before budget pruning.
    pub expanded: Vec<u64>,
    pub stats: DpStats,
}

pub(super) struct Candidate {
    pub(super) coloring: Coloring,
    pub(super) hubs: u32,
    pub(super) back: Back,
    pub(super) satisfied: DemandSet,
    pub(super) required: DemandSet,
}

impl Candidate {
    fn tie_key(&self) -> (u32, &Coloring, Option<&Coloring>) {
        match &self.back {
            Back::Leaf => (self.hubs, &self.coloring, None),
            Back::Introduce { child, .. } | Back::Forget { child } => (self.hubs, child, None),
            Back::Join { left, right } => (self.hubs, left, Some(right)),
        }
    }
}

/// Options for [`run`].
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Drop entries whose hub count already exceeds this budget. Counts never
    /// decrease towards the root, so the root decision is unaffected.
    pub budget: Option<u32>,
}

pub fn run(ctx: &DpContext<'_>, opts: RunOptions) -> DpTables {
    let ntd = ctx.ntd;
    let mut tables: Vec<NodeTable> = Vec::with_capacity(ntd.len());
    let mut stats = DpStats::default();
    let mut expanded = Vec::with_capacity(ntd.len());
    for (t, node) in ntd.nodes().iter().enumerate() {
        let candidates: Vec<Candidate> = match node.kind {
            NodeKind::Leaf => vec![Candidate {
                coloring: Coloring::new(),
                hubs: 0,
                back: Back::Leaf,
                satisfied: DemandSet::with_capacity(ctx.num_demands()),
                required: ctx.required_set(t, &DemandSet::with_capacity(ctx.num_demands())),
            }],
            NodeKind::Introduce(u) => introduce(ctx, t, u, &tables[node.children[0]]),
            NodeKind::Forget(u) => forget(ctx, t, u, &tables[node.children[0]]),
            NodeKind::Join => join(ctx, t, &tables[node.children[0]], &tables[node.children[1]]),
        };
        stats.colorings_expanded += candidates.len() as u64;
        let mut table = NodeTable::default();
        for cand in candidates {
            match table.get(&cand.coloring) {
                Some(cur) if !better(&cand, cur) => {}
                _ => {
                    table.insert(
                        cand.coloring.clone(),
                        Entry {
                            hubs: cand.hubs,
                            back: cand.back,
                            satisfied: cand.satisfied,
                            required: cand.required,
                        },
                    );
                }
            }
        }
        expanded.push(table.len() as u64);
        if let Some(b) = opts.budget {
            table.retain(|_, e| e.hubs <= b);
        }
        stats.max_table = stats.max_table.max(table.len());
        stats.total_entries += table.len() as u64;
        tables.push(table);
    }
    DpTables {
        tables,
        expanded,
        stats,
    }
}

fn better(cand: &Candidate, cur: &Entry) -> bool {
    let cur_key = match &cur.back {
        Back::Leaf => (cur.hubs, None, None),
        Back::Introduce { child, .. } | Back::Forget { child } => (cur.hubs, Some(child), None),
        Back::Join { left, right } => (cur.hubs, Some(left), Some(right)),
    };
    let (h, c, r) = cand.tie_key();
    (h, Some(c), r) < cur_key
}

fn sorted_entries(table: &NodeTable) -> Vec<(&Coloring, &Entry)> {
    let mut v: Vec<_> = table.iter().collect();
    v.sort_unstable_by(|a, b| a.0.cmp(b.0));
    v
}

pub(super) fn introduce(ctx: &DpContext<'_>, t: usize, u: Vertex, child: &NodeTable) -> Vec<Candidate> {
    let bag = &ctx.ntd.node(t).bag;
    let child_bag = &ctx.ntd.node(ctx.ntd.node(t).children[0]).bag;
    let pos = bag.binary_search(&u).expect("introduced vertex is in the bag");
    let is_hub = ctx.instance.is_hub(u);
    let ups: Vec<u16> = ctx.up_magnitudes(u).collect();

    sorted_entries(child)
        .into_par_iter()
        .flat_map_iter(|(cprime, entry)| {
            let mut colors: Vec<Color> = Vec::new();
            if is_hub {
                colors.push(Color::down(0));
            }
            // ↓i needs a ↓j neighbour in the bag with i = d(u, v) ⊕ j
            let mut downs: Vec<u16> = child_bag
                .iter()
                .zip(cprime.iter())
                .filter(|(_, c)| c.is_down())
                .filter_map(|(&v, c)| ctx.oplus(u, v, c.magnitude()))
                .filter(|&m| m > 0 && ctx.is_chain_magnitude(u, m))
                .collect();
            downs.sort_unstable();
            downs.dedup();
            colors.extend(downs.into_iter().map(Color::down));
            colors.extend(ups.iter().map(|&m| Color::up(m)));

            let mut out = Vec::new();
            for color in colors {
                let mut satisfied = entry.satisfied.clone();
                ctx.satisfied_via(u, color.magnitude(), &mut satisfied);
                let required = ctx.required_set(t, &satisfied);
                if !required.is_subset(&entry.required) {
                    continue;
                }
                let mut base = cprime.clone();
                base.insert(pos, color);
                // a ↑j bag vertex whose path runs through u now stays inside G_t
                let flippable: Vec<usize> = if color.is_down() {
                    (0..base.len())
                        .filter(|&i| i != pos && base[i].is_up())
                        .filter(|&i| ctx.oplus(bag[i], u, color.magnitude()) == Some(base[i].magnitude()))
                        .collect()
                } else {
                    Vec::new()
                };
                let opened = color.is_open_hub();
                for mask in 0u32..(1u32 << flippable.len()) {
                    let mut coloring = base.clone();
                    for (b, &i) in flippable.iter().enumerate() {
                        if mask >> b & 1 == 1 {
                            coloring[i] = Color::down(coloring[i].magnitude());
                        }
                    }
                    out.push(Candidate {
                        coloring,
                        hubs: entry.hubs + opened as u32,
                        back: Back::Introduce {
                            child: cprime.clone(),
                            opened,
                        },
                        satisfied: satisfied.clone(),
                        required: required.clone(),
                    });
                }
            }
            out
        })
        .collect()
}

pub(super) fn forget(ctx: &DpContext<'_>, t: usize, u: Vertex, child: &NodeTable) -> Vec<Candidate> {
    let bag = &ctx.ntd.node(t).bag;
    let child_bag = &ctx.ntd.node(ctx.ntd.node(t).children[0]).bag;
    let pos = child_bag
        .binary_search(&u)
        .expect("forgotten vertex is in the child bag");

    sorted_entries(child)
        .into_par_iter()
        .filter_map(|(cprime, entry)| {
            let cu = cprime[pos];
            if cu.is_up() {
                // ↑i must continue through a ↑j bag vertex with i = d(u, v) ⊕ j
                let anchored = bag.iter().enumerate().any(|(i, &v)| {
                    let cv = cprime[if i < pos { i } else { i + 1 }];
                    cv.is_up() && ctx.oplus(u, v, cv.magnitude()) == Some(cu.magnitude())
                });
                if !anchored {
                    return None;
                }
            }
            let mut coloring = cprime.clone();
            coloring.remove(pos);
            let satisfied = ctx.satisfied_set(bag, &coloring);
            let required = ctx.required_set(t, &satisfied);
            let mut allowed = entry.required.clone();
            allowed.union_with(&entry.satisfied);
            if !required.is_subset(&allowed) {
                return None;
            }
            Some(Candidate {
                coloring,
                hubs: entry.hubs,
                back: Back::Forget { child: cprime.clone() },
                satisfied,
                required,
            })
        })
        .collect()
}

pub(super) fn join(ctx: &DpContext<'_>, t: usize, left: &NodeTable, right: &NodeTable) -> Vec<Candidate> {
    let bag = &ctx.ntd.node(t).bag;

    sorted_entries(left)
        .into_par_iter()
        .flat_map_iter(|(cl, el)| {
            // Positions where the left color is ↑i may pair with ↑i or ↓i on the right.
            let free: Vec<usize> = (0..cl.len()).filter(|&i| cl[i].is_up()).collect();
            let mut out = Vec::new();
            for mask in 0u32..(1u32 << free.len()) {
                let mut cr = Coloring::with_capacity(cl.len());
                let mut c = Coloring::with_capacity(cl.len());
                let mut bit = 0;
                for &x in cl.iter() {
                    if x.is_open_hub() {
                        cr.push(x);
                        c.push(x);
                    } else if x.is_down() {
                        cr.push(Color::up(x.magnitude()));
                        c.push(x);
                    } else {
                        let take_down = mask >> bit & 1 == 1;
                        bit += 1;
                        if take_down {
                            cr.push(Color::down(x.magnitude()));
                            c.push(Color::down(x.magnitude()));
                        } else {
                            cr.push(x);
                            c.push(x);
                        }
                    }
                }
                let Some(er) = right.get(&cr) else {
                    continue;
                };
                let satisfied = ctx.satisfied_set(bag, &c);
                let required = ctx.required_set(t, &satisfied);
                let mut allowed = el.required.clone();
                allowed.union_with(&er.required);
                if !required.is_subset(&allowed) {
                    continue;
                }
                let open = c.iter().filter(|x| x.is_open_hub()).count() as u32;
                out.push(Candidate {
                    coloring: c,
                    hubs: el.hubs + er.hubs - open,
                    back: Back::Join {
                        left: cl.clone(),
                        right: cr,
                    },
                    satisfied,
                    required,
                });
            }
            out
        })
        .collect()
}

impl DpTables {
    pub fn root_hubs(&self) -> Option<u32> {
        self.tables.last()?.get(&Coloring::new()).map(|e| e.hubs)
    }

    /// Hub set recorded for entry `(t, c)`, in increasing vertex order.
    pub fn reconstruct(
        &self,
        ntd: &crate::decomposition::NiceTreeDecomposition,
        t: usize,
        c: &Coloring,
    ) -> Option<Vec<Vertex>> {
        let mut hubs = Vec::new();
        let mut stack = vec![(t, c.clone())];
        while let Some((t, c)) = stack.pop() {
            let entry = self.tables[t].get(&c)?;
            let node = ntd.node(t);
            match &entry.back {
                Back::Leaf => {}
                Back::Introduce { child, opened } => {
                    if *opened {
                        if let NodeKind::Introduce(u) = node.kind {
                            hubs.push(u);
                        }
                    }
                    stack.push((node.children[0], child.clone()));
                }
                Back::Forget { child } => stack.push((node.children[0], child.clone())),
                Back::Join { left, right } => {
                    stack.push((node.children[0], left.clone()));
                    stack.push((node.children[1], right.clone()));
                }
            }
        }
        hubs.sort_unstable();
        hubs.dedup();
        Some(hubs)
    }
}
