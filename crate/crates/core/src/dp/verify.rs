use super::color::Coloring;
use super::context::DpContext;
use crate::distance::{dijkstra, UNREACHABLE};
use crate::instance::{Demand, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConditionViolation {
    /// A `↓i` vertex has no hub within `i` inside `G_t`.
    C1(Vertex),
    /// A required demand is not served within `(1 + eps) 2r`.
    C2(Demand),
}

/// Checks that `hubs` realizes entry `(t, c)`: every `↓i` bag vertex reaches a
/// hub within `i` using only vertices of `G_t`, and every demand of `D_t(c)` is
/// served within the radius bound.
pub fn verify_conditions(
    ctx: &DpContext<'_>,
    t: usize,
    coloring: &Coloring,
    hubs: &[Vertex],
) -> Result<(), ConditionViolation> {
    let node = ctx.ntd.node(t);
    let inside = ctx.ntd.subtree_vertices(t);
    let adj = ctx.instance.adjacency();
    for (&u, &c) in node.bag.iter().zip(coloring.iter()) {
        if c.is_up() {
            continue;
        }
        let dist = dijkstra(&adj, u, Some(inside));
        let ok = hubs
            .iter()
            .any(|&h| dist[h] != UNREACHABLE && ctx.alphabet.int_at_most(dist[h], c.magnitude()));
        if !ok {
            return Err(ConditionViolation::C1(u));
        }
    }

    let satisfied = ctx.satisfied_set(&node.bag, coloring);
    let required = ctx.required_set(t, &satisfied);
    let bound = ctx.alphabet.serve_bound();
    for i in required.ones() {
        let (a, b) = ctx.instance.demands()[i];
        let served = hubs.iter().any(|&h| ctx.oracle.via(a, h, b) <= bound);
        if !served {
            return Err(ConditionViolation::C2((a, b)));
        }
    }
    Ok(())
}
