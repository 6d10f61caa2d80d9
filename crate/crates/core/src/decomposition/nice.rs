use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use super::TreeDecomposition;
use crate::instance::Vertex;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Introduce(Vertex),
    Forget(Vertex),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted bag.
    pub bag: Vec<Vertex>,
    pub children: Vec<usize>,
}

/// Nice tree decomposition. Nodes are stored in postorder: every child has a
/// smaller index than its parent and the root is the last node.
#[derive(Clone, Debug)]
pub struct NiceTreeDecomposition {
    nodes: Vec<NiceNode>,
    height: usize,
    subtree: Vec<FixedBitSet>,
    n: usize,
}

impl NiceTreeDecomposition {
    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn node(&self, t: usize) -> &NiceNode {
        &self.nodes[t]
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Edges on the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.nodes
            .iter()
            .map(|t| t.bag.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    /// Vertices of `G_t`: the union of bags in the subtree rooted at `t`.
    pub fn subtree_vertices(&self, t: usize) -> &FixedBitSet {
        &self.subtree[t]
    }

    pub fn parent_of(&self) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.nodes.len()];
        for (t, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                parent[c] = Some(t);
            }
        }
        parent
    }

    pub fn to_plain(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|t| t.bag.clone()).collect();
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(t, node)| node.children.iter().map(move |&c| (c, t)))
            .collect();
        TreeDecomposition { bags, edges }
    }
}

struct Builder {
    nodes: Vec<NiceNode>,
}

impl Builder {
    fn push(&mut self, kind: NodeKind, bag: Vec<Vertex>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    fn introduce(&mut self, below: usize, v: Vertex) -> usize {
        let mut bag = self.nodes[below].bag.clone();
        let pos = bag.binary_search(&v).expect_err("introduced vertex already in bag");
        bag.insert(pos, v);
        self.push(NodeKind::Introduce(v), bag, vec![below])
    }

    fn forget(&mut self, below: usize, v: Vertex) -> usize {
        let mut bag = self.nodes[below].bag.clone();
        let pos = bag.binary_search(&v).expect("forgotten vertex in bag");
        bag.remove(pos);
        self.push(NodeKind::Forget(v), bag, vec![below])
    }

    /// Forget what `target` lacks, then introduce what it adds, both in vertex order.
    fn morph(&mut self, mut top: usize, target: &[Vertex]) -> usize {
        let current = self.nodes[top].bag.clone();
        for &v in current.iter().filter(|v| target.binary_search(v).is_err()) {
            top = self.forget(top, v);
        }
        for &v in target.iter().filter(|v| current.binary_search(v).is_err()) {
            top = self.introduce(top, v);
        }
        top
    }

    fn build(&mut self, td: &TreeDecomposition, adj: &[Vec<usize>], t: usize, parent: Option<usize>) -> usize {
        let mut bag = td.bags[t].clone();
        bag.sort_unstable();
        bag.dedup();
        let children: Vec<usize> = adj[t].iter().copied().filter(|&c| Some(c) != parent).collect();
        if children.is_empty() {
            let leaf = self.push(NodeKind::Leaf, Vec::new(), Vec::new());
            return self.morph(leaf, &bag);
        }
        let mut branches: VecDeque<usize> = children
            .into_iter()
            .map(|c| {
                let top = self.build(td, adj, c, Some(t));
                self.morph(top, &bag)
            })
            .collect();
        // Balanced pairing keeps join chains logarithmic in the degree.
        while branches.len() > 1 {
            let a = branches.pop_front().unwrap();
            let b = branches.pop_front().unwrap();
            let j = self.push(NodeKind::Join, bag.clone(), vec![a, b]);
            branches.push_back(j);
        }
        branches.pop_front().unwrap()
    }
}

/// Converts a tree decomposition into a nice one of the same width with an
/// empty root bag. The input bag of maximum size (lowest index on ties) is used
/// as the root region.
pub fn make_nice(td: &TreeDecomposition) -> NiceTreeDecomposition {
    let n = td.bags.iter().flatten().map(|&v| v + 1).max().unwrap_or(0);
    let mut b = Builder { nodes: Vec::new() };
    let top = if td.bags.is_empty() {
        b.push(NodeKind::Leaf, Vec::new(), Vec::new())
    } else {
        let adj = td.neighbors();
        let root = (0..td.bags.len())
            .max_by_key(|&t| (td.bags[t].len(), std::cmp::Reverse(t)))
            .unwrap();
        let top = b.build(td, &adj, root, None);
        b.morph(top, &[])
    };
    debug_assert_eq!(top, b.nodes.len() - 1);
    let nodes = b.nodes;

    let mut depth = vec![0usize; nodes.len()];
    let mut subtree: Vec<FixedBitSet> = Vec::with_capacity(nodes.len());
    for (t, node) in nodes.iter().enumerate() {
        let mut set = FixedBitSet::with_capacity(n);
        for &v in &node.bag {
            set.insert(v);
        }
        for &c in &node.children {
            set.union_with(&subtree[c]);
            depth[t] = depth[t].max(depth[c] + 1);
        }
        subtree.push(set);
    }
    let height = depth.last().copied().unwrap_or(0);
    NiceTreeDecomposition {
        nodes,
        height,
        subtree,
        n,
    }
}
