use serde::{Deserialize, Serialize};

use crate::classes::{ConstraintSet, DomainPoint, HypothesisClass, Label};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, Mask};
use crate::structure::reducing::{ReducingArray, ReductionWitness};

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenNode {
    pub id: NodeId,
    /// Parent and the index of the edge leading here.
    pub parent: Option<(NodeId, usize)>,
    pub points: Vec<DomainPoint>,
    pub array: Option<ReducingArray>,
    pub children: Vec<NodeId>,
}

impl GenNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// Rooted tree whose internal nodes carry a point tuple and a reducing
/// array labeling their child edges. Nodes are stored in creation order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralizedTree {
    nodes: Vec<GenNode>,
}

impl Default for GeneralizedTree {
    fn default() -> Self {
        Self::new()
    }
}

impl GeneralizedTree {
    /// A single leaf.
    pub fn new() -> Self {
        GeneralizedTree {
            nodes: vec![GenNode {
                id: 0,
                parent: None,
                points: Vec::new(),
                array: None,
                children: Vec::new(),
            }],
        }
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn nodes(&self) -> &[GenNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Result<&GenNode> {
        self.nodes
            .get(id)
            .ok_or_else(|| Error::Argument(format!("node {id} is not in the tree")))
    }

    pub fn leaves(&self) -> Vec<NodeId> {
        self.nodes.iter().filter(|n| n.is_leaf()).map(|n| n.id).collect()
    }

    /// Turns a leaf into an internal node with the witness's points and
    /// array, creating its `k + 1` children. Returns the new child ids.
    pub fn expand(&mut self, leaf: NodeId, witness: &ReductionWitness) -> Result<Vec<NodeId>> {
        if !self.node(leaf)?.is_leaf() {
            return Err(Error::Argument(format!("node {leaf} is not a leaf")));
        }
        let first = self.nodes.len();
        let kids: Vec<NodeId> = (first..first + witness.depth() + 1).collect();
        for (j, &c) in kids.iter().enumerate() {
            self.nodes.push(GenNode {
                id: c,
                parent: Some((leaf, j)),
                points: Vec::new(),
                array: None,
                children: Vec::new(),
            });
        }
        let node = &mut self.nodes[leaf];
        node.points = witness.points.clone();
        node.array = Some(witness.array.clone());
        node.children = kids.clone();
        Ok(kids)
    }

    /// `ba(v)`: all edge constraints on the root path, root first, with
    /// multiplicity.
    pub fn ancestor_set(&self, node: NodeId) -> Result<ConstraintSet> {
        self.node(node)?;
        let mut edges = Vec::new();
        let mut cur = node;
        while let Some((p, j)) = self.nodes[cur].parent {
            edges.push((p, j));
            cur = p;
        }
        let mut s = ConstraintSet::empty();
        for &(p, j) in edges.iter().rev() {
            let pn = &self.nodes[p];
            let array = pn.array.as_ref().expect("internal nodes carry arrays");
            for (i, &b) in array.tuple(j).iter().enumerate() {
                s.push(pn.points[i], b);
            }
        }
        Ok(s)
    }

    /// Number of edges from the root.
    pub fn node_depth(&self, node: NodeId) -> usize {
        let mut d = 0;
        let mut cur = node;
        while let Some((p, _)) = self.nodes[cur].parent {
            d += 1;
            cur = p;
        }
        d
    }

    pub fn depth(&self) -> usize {
        self.leaves().into_iter().map(|l| self.node_depth(l)).max().unwrap_or(0)
    }

    /// Largest total tuple length along a root-to-leaf path.
    pub fn height(&self) -> usize {
        self.leaves()
            .into_iter()
            .map(|l| self.ancestor_set(l).map(|s| s.len()).unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Structural check used after deserialising.
    pub fn validate(&self) -> Result<()> {
        for (i, n) in self.nodes.iter().enumerate() {
            if n.id != i {
                return Err(Error::Argument(format!("node {i} has id {}", n.id)));
            }
            if n.is_leaf() {
                continue;
            }
            let a = n
                .array
                .as_ref()
                .ok_or_else(|| Error::Argument(format!("internal node {i} has no array")))?;
            if a.depth() != n.points.len() || n.children.len() != a.depth() + 1 {
                return Err(Error::Argument(format!("node {i} has inconsistent arity")));
            }
            for (j, &c) in n.children.iter().enumerate() {
                if self.nodes.get(c).and_then(|cn| cn.parent) != Some((i, j)) {
                    return Err(Error::Argument(format!("child {c} of node {i} has a wrong parent")));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let t: GeneralizedTree = serde_json::from_str(s)?;
        t.validate()?;
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryNode {
    pub point: Option<DomainPoint>,
    /// Children at bits `-1` and `+1`.
    pub children: [Option<usize>; 2],
    /// The generalized-tree leaf this binary leaf stands for.
    pub origin: Option<NodeId>,
}

/// Incomplete binary tree; every internal node has both children.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryTree {
    pub nodes: Vec<BinaryNode>,
}

fn slot(b: Label) -> usize {
    match b {
        Label::Neg => 0,
        Label::Pos => 1,
    }
}

impl BinaryTree {
    /// `(origin leaf, ancestor set)` for every leaf, in node order.
    pub fn leaf_ancestor_sets(&self) -> Vec<(NodeId, ConstraintSet)> {
        let mut out = Vec::new();
        let mut stack = vec![(0usize, ConstraintSet::empty())];
        while let Some((i, s)) = stack.pop() {
            let n = &self.nodes[i];
            match n.point {
                None => out.push((n.origin.expect("leaves carry an origin"), s)),
                Some(x) => {
                    for b in [Label::Pos, Label::Neg] {
                        let mut t = s.clone();
                        t.push(x, b);
                        stack.push((n.children[slot(b)].expect("internal nodes are full"), t));
                    }
                }
            }
        }
        out.sort_by_key(|(o, _)| *o);
        out
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.point.is_none()).count()
    }
}

/// Replaces each internal node `v` by a chain `v'_1..v'_k` labeled
/// `x_1..x_k`: edge `i` of `v` hangs off `v'_i` at bit `b^i_i`, the chain
/// continues at `-b^i_i`, and edge `k+1` hangs off `v'_k` at `-b^k_k`.
pub fn gen_to_binary(tree: &GeneralizedTree) -> BinaryTree {
    let mut nodes = Vec::new();
    build_binary(tree, tree.root(), &mut nodes);
    BinaryTree { nodes }
}

fn build_binary(tree: &GeneralizedTree, v: NodeId, out: &mut Vec<BinaryNode>) -> usize {
    let gn = &tree.nodes()[v];
    let here = out.len();
    if gn.is_leaf() {
        out.push(BinaryNode {
            point: None,
            children: [None, None],
            origin: Some(v),
        });
        return here;
    }
    let array = gn.array.as_ref().expect("internal nodes carry arrays");
    let k = gn.points.len();
    let chain: Vec<usize> = (0..k)
        .map(|i| {
            out.push(BinaryNode {
                point: Some(gn.points[i]),
                children: [None, None],
                origin: None,
            });
            out.len() - 1
        })
        .collect();
    for i in 0..k {
        let b = array.tuple(i)[i];
        let sub = build_binary(tree, gn.children[i], out);
        out[chain[i]].children[slot(b)] = Some(sub);
        let next = if i + 1 < k {
            chain[i + 1]
        } else {
            build_binary(tree, gn.children[k], out)
        };
        out[chain[i]].children[slot(b.flip())] = Some(next);
    }
    here
}

/// The unique leaf `l` with `Ldim(G|ba(l)) = Ldim(G)`.
pub fn unique_full_ldim_leaf(class: &HypothesisClass, tree: &GeneralizedTree) -> Result<NodeId> {
    let lat = Lattice::new(class)?;
    unique_full_ldim_leaf_in(&lat, lat.full(), tree)
}

pub fn unique_full_ldim_leaf_in(lat: &Lattice, m: Mask, tree: &GeneralizedTree) -> Result<NodeId> {
    let d = lat.ldim(m);
    let mut hits = Vec::new();
    for l in tree.leaves() {
        if lat.ldim(lat.restrict_set(m, &tree.ancestor_set(l)?)) == d {
            hits.push(l);
        }
    }
    match hits.as_slice() {
        [l] => Ok(*l),
        [] => Err(Error::Contract(format!(
            "no leaf keeps Ldim {d}; the class is not irreducible enough for a tree of height {}",
            tree.height()
        ))),
        many => Err(Error::Contract(format!(
            "leaves {many:?} all keep Ldim {d}; the class is not irreducible enough"
        ))),
    }
}
