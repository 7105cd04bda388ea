//! Core immutable data types: rooted binary trees, tanglegrams, induced
//! substructures, scars, and tanglegram isomorphism.
//!
//! A tree here always has a designated root of degree 1 (the root edge is the
//! edge between the root and its single child), every other internal vertex
//! has degree 3, and leaves carry unique labels. A tanglegram joins two such
//! trees of equal leaf count by a perfect matching on leaves; labels are the
//! cross-tree join key, node ids are dense per tree and never leak across
//! trees.
//!
//! Trees store an ordered child pair, but the order is only a default drawing
//! hint; every semantic operation in this crate (isomorphism, induction,
//! crossing numbers) is independent of it.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Dense per-tree node identifier.
pub type NodeId = u32;

/// Matching edge identifier: index into [`Tanglegram::edges`].
pub type EdgeId = usize;

/// Sentinel for "no node" in parent/child slots.
pub const NO_NODE: NodeId = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("unknown leaf label {0:?}")]
    UnknownLabel(String),
    #[error("unknown matching edge id {0}")]
    UnknownEdge(EdgeId),
    #[error("selection must be nonempty")]
    EmptySelection,
    #[error("edge {0} is part of the inducing subset")]
    EdgeInSubset(EdgeId),
    #[error("leaf label {0:?} is empty or contains characters outside [A-Za-z0-9_]")]
    BadLabel(String),
    #[error("duplicate leaf label {0:?}")]
    DuplicateLabel(String),
    #[error("matching is not a perfect matching: {0}")]
    MatchingNotPerfect(String),
    #[error("malformed tree structure: {0}")]
    MalformedTree(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}

fn label_ok(label: &str) -> bool {
    !label.is_empty()
        && label
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// Recursive description of a tree below the root stub, used by builders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeSpec {
    Leaf(String),
    Branch(Box<TreeSpec>, Box<TreeSpec>),
}

impl TreeSpec {
    pub fn leaf(label: impl Into<String>) -> Self {
        TreeSpec::Leaf(label.into())
    }

    pub fn branch(a: TreeSpec, b: TreeSpec) -> Self {
        TreeSpec::Branch(Box::new(a), Box::new(b))
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            TreeSpec::Leaf(_) => 1,
            TreeSpec::Branch(a, b) => a.n_leaves() + b.n_leaves(),
        }
    }
}

/// Immutable rooted binary tree with a degree-1 root.
///
/// Node 0 is always the root. Leaves are the childless non-root nodes; each
/// carries a unique nonempty label over `[A-Za-z0-9_]`.
#[derive(Debug, Clone)]
pub struct Tree {
    parent: Vec<NodeId>,
    children: Vec<[NodeId; 2]>,
    labels: Vec<String>,
    depth: Vec<u32>,
    leaves: Vec<NodeId>,
    label_to_leaf: HashMap<String, NodeId>,
}

impl Tree {
    /// Builds a tree from raw parent/children arrays. Node ids must be dense,
    /// the root must be node 0, and all structural invariants are checked.
    pub fn from_arrays(
        parent: Vec<NodeId>,
        children: Vec<[NodeId; 2]>,
        labels: Vec<String>,
    ) -> Result<Self, ModelError> {
        let n = parent.len();
        if n < 2 || children.len() != n || labels.len() != n {
            return Err(ModelError::MalformedTree(format!(
                "need at least a root and one leaf, got {n} nodes"
            )));
        }
        if parent[0] != NO_NODE {
            return Err(ModelError::MalformedTree("node 0 must be the root".into()));
        }
        if children[0][0] == NO_NODE || children[0][1] != NO_NODE {
            return Err(ModelError::MalformedTree(
                "root must have exactly one child".into(),
            ));
        }
        for (v, ch) in children.iter().enumerate().skip(1) {
            let arity = ch.iter().filter(|&&c| c != NO_NODE).count();
            if arity == 1 {
                return Err(ModelError::MalformedTree(format!(
                    "node {v} has exactly one child; internal nodes need two"
                )));
            }
        }
        // Parent/child consistency plus reachability from the root.
        let mut seen = vec![false; n];
        let mut stack = vec![0 as NodeId];
        let mut reached = 0usize;
        while let Some(v) = stack.pop() {
            let vi = v as usize;
            if vi >= n || seen[vi] {
                return Err(ModelError::MalformedTree(format!(
                    "node {v} repeated or out of range while walking from root"
                )));
            }
            seen[vi] = true;
            reached += 1;
            for &c in &children[vi] {
                if c == NO_NODE {
                    continue;
                }
                if c as usize >= n || parent[c as usize] != v {
                    return Err(ModelError::MalformedTree(format!(
                        "child link {v}->{c} lacks a matching parent link"
                    )));
                }
                stack.push(c);
            }
        }
        if reached != n {
            return Err(ModelError::MalformedTree(format!(
                "{} of {n} nodes unreachable from root",
                n - reached
            )));
        }
        // Depths and leaf registry.
        let mut depth = vec![0u32; n];
        let mut order = vec![0 as NodeId];
        let mut i = 0;
        while i < order.len() {
            let v = order[i] as usize;
            i += 1;
            for &c in &children[v] {
                if c != NO_NODE {
                    depth[c as usize] = depth[v] + 1;
                    order.push(c);
                }
            }
        }
        let mut leaves = Vec::new();
        let mut label_to_leaf = HashMap::new();
        for v in 1..n {
            let is_leaf = children[v][0] == NO_NODE;
            if is_leaf {
                let label = &labels[v];
                if !label_ok(label) {
                    return Err(ModelError::BadLabel(label.clone()));
                }
                if label_to_leaf.insert(label.clone(), v as NodeId).is_some() {
                    return Err(ModelError::DuplicateLabel(label.clone()));
                }
                leaves.push(v as NodeId);
            } else if !labels[v].is_empty() {
                return Err(ModelError::MalformedTree(format!(
                    "internal node {v} carries label {:?}",
                    labels[v]
                )));
            }
        }
        if !labels[0].is_empty() {
            return Err(ModelError::MalformedTree("root carries a label".into()));
        }
        Ok(Tree {
            parent,
            children,
            labels,
            depth,
            leaves,
            label_to_leaf,
        })
    }

    /// Builds a tree from a recursive spec, adding the degree-1 root above it.
    pub fn from_spec(spec: &TreeSpec) -> Result<Self, ModelError> {
        let mut parent = vec![NO_NODE];
        let mut children = vec![[NO_NODE; 2]];
        let mut labels = vec![String::new()];
        fn add(
            spec: &TreeSpec,
            par: NodeId,
            parent: &mut Vec<NodeId>,
            children: &mut Vec<[NodeId; 2]>,
            labels: &mut Vec<String>,
        ) -> NodeId {
            let v = parent.len() as NodeId;
            parent.push(par);
            children.push([NO_NODE; 2]);
            labels.push(String::new());
            match spec {
                TreeSpec::Leaf(l) => labels[v as usize] = l.clone(),
                TreeSpec::Branch(a, b) => {
                    let ca = add(a, v, parent, children, labels);
                    children[v as usize][0] = ca;
                    let cb = add(b, v, parent, children, labels);
                    children[v as usize][1] = cb;
                }
            }
            v
        }
        let top = add(spec, 0, &mut parent, &mut children, &mut labels);
        children[0][0] = top;
        Tree::from_arrays(parent, children, labels)
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn num_nodes(&self) -> usize {
        self.parent.len()
    }

    pub fn n_leaves(&self) -> usize {
        self.leaves.len()
    }

    /// Leaf node ids in construction order.
    pub fn leaves(&self) -> &[NodeId] {
        &self.leaves
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        v != 0 && self.children[v as usize][0] == NO_NODE
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        let p = self.parent[v as usize];
        (p != NO_NODE).then_some(p)
    }

    /// The 0, 1 (root), or 2 children of `v`, in stored order.
    pub fn children(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.children[v as usize]
            .into_iter()
            .filter(|&c| c != NO_NODE)
    }

    pub fn child_pair(&self, v: NodeId) -> [NodeId; 2] {
        self.children[v as usize]
    }

    pub fn depth(&self, v: NodeId) -> u32 {
        self.depth[v as usize]
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v as usize]
    }

    pub fn leaf_by_label(&self, label: &str) -> Option<NodeId> {
        self.label_to_leaf.get(label).copied()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        (v as usize) < self.parent.len()
    }

    /// Internal nodes (branching vertices): non-root nodes with two children.
    pub fn internal_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (1..self.num_nodes() as NodeId).filter(|&v| !self.is_leaf(v))
    }

    /// Path from `v` up to the root, inclusive.
    pub fn root_path(&self, v: NodeId) -> Vec<NodeId> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            path.push(p);
            cur = p;
        }
        path
    }

    /// True iff `anc` lies on the path from `v` to the root (v counts as its
    /// own ancestor).
    pub fn is_ancestor(&self, anc: NodeId, v: NodeId) -> bool {
        let mut cur = v;
        loop {
            if cur == anc {
                return true;
            }
            match self.parent(cur) {
                Some(p) => cur = p,
                None => return false,
            }
        }
    }

    /// Leaf descendants of `v` in construction order.
    pub fn leaf_descendants(&self, v: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(w) = stack.pop() {
            if self.is_leaf(w) {
                out.push(w);
            } else {
                for c in self.children(w).collect::<Vec<_>>().into_iter().rev() {
                    stack.push(c);
                }
            }
        }
        out
    }

    /// The meet of `u` and `v` under the tree order: the root-side lowest
    /// common ancestor.
    pub fn meet(&self, u: NodeId, v: NodeId) -> Result<NodeId, ModelError> {
        if !self.contains(u) {
            return Err(ModelError::UnknownNode(u));
        }
        if !self.contains(v) {
            return Err(ModelError::UnknownNode(v));
        }
        let (mut a, mut b) = (u, v);
        while self.depth(a) > self.depth(b) {
            a = self.parent(a).unwrap();
        }
        while self.depth(b) > self.depth(a) {
            b = self.parent(b).unwrap();
        }
        while a != b {
            a = self.parent(a).unwrap();
            b = self.parent(b).unwrap();
        }
        Ok(a)
    }

    /// Label-ignoring canonical shape code; two trees have equal codes iff
    /// they are isomorphic as rooted binary trees.
    pub fn shape_code(&self) -> String {
        fn enc(t: &Tree, v: NodeId) -> String {
            if t.is_leaf(v) {
                return "x".to_string();
            }
            let mut parts: Vec<String> = t.children(v).map(|c| enc(t, c)).collect();
            parts.sort();
            format!("({})", parts.join(""))
        }
        let top = self.children(0).next().unwrap();
        enc(self, top)
    }

    /// Serializes the subtree below the root stub back into a spec.
    pub fn to_spec(&self) -> TreeSpec {
        fn build(t: &Tree, v: NodeId) -> TreeSpec {
            if t.is_leaf(v) {
                TreeSpec::Leaf(t.label(v).to_string())
            } else {
                let ch: Vec<NodeId> = t.children(v).collect();
                TreeSpec::branch(build(t, ch[0]), build(t, ch[1]))
            }
        }
        let top = self.children(0).next().unwrap();
        build(self, top)
    }

    /// All leaf orders realizable by a plane drawing, one per assignment of
    /// child-order choices, paired with the ordered-shape code the assignment
    /// induces. Exponential; meant for constant-size trees.
    fn oriented_orders(&self) -> Vec<(String, Vec<NodeId>)> {
        fn expand(t: &Tree, v: NodeId) -> Vec<(String, Vec<NodeId>)> {
            if t.is_leaf(v) {
                return vec![("x".to_string(), vec![v])];
            }
            let ch: Vec<NodeId> = t.children(v).collect();
            let left = expand(t, ch[0]);
            let right = expand(t, ch[1]);
            let mut out = Vec::with_capacity(left.len() * right.len() * 2);
            for (ea, oa) in &left {
                for (eb, ob) in &right {
                    let mut o1 = oa.clone();
                    o1.extend_from_slice(ob);
                    out.push((format!("({ea}{eb})"), o1));
                    let mut o2 = ob.clone();
                    o2.extend_from_slice(oa);
                    out.push((format!("({eb}{ea})"), o2));
                }
            }
            out
        }
        let top = self.children(0).next().unwrap();
        if self.is_leaf(top) {
            return vec![("x".to_string(), vec![top])];
        }
        expand(self, top)
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write_node(t: &Tree, v: NodeId, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if t.is_leaf(v) {
                return write!(f, "{}", t.label(v));
            }
            let ch: Vec<NodeId> = t.children(v).collect();
            write!(f, "(")?;
            write_node(t, ch[0], f)?;
            write!(f, ",")?;
            write_node(t, ch[1], f)?;
            write!(f, ")")
        }
        let top = self.children(0).next().unwrap();
        write_node(self, top, f)
    }
}

/// Two rooted binary trees of equal leaf count joined by a perfect matching.
///
/// Matching edges are indexed in construction order; each endpoint is a leaf
/// node id in its own tree.
#[derive(Debug, Clone)]
pub struct Tanglegram {
    left: Tree,
    right: Tree,
    edges: Vec<(NodeId, NodeId)>,
    left_edge_of: HashMap<NodeId, EdgeId>,
    right_edge_of: HashMap<NodeId, EdgeId>,
}

impl Tanglegram {
    /// Joins two trees by label pairs `(left leaf, right leaf)`.
    pub fn new(
        left: Tree,
        right: Tree,
        pairs: &[(String, String)],
    ) -> Result<Self, ModelError> {
        if left.n_leaves() != right.n_leaves() || pairs.len() != left.n_leaves() {
            return Err(ModelError::MatchingNotPerfect(format!(
                "{} left leaves, {} right leaves, {} pairs",
                left.n_leaves(),
                right.n_leaves(),
                pairs.len()
            )));
        }
        let mut edges = Vec::with_capacity(pairs.len());
        let mut left_edge_of = HashMap::new();
        let mut right_edge_of = HashMap::new();
        for (e, (ll, rl)) in pairs.iter().enumerate() {
            let ln = left
                .leaf_by_label(ll)
                .ok_or_else(|| ModelError::MatchingNotPerfect(format!("{ll:?} is not a left leaf")))?;
            let rn = right
                .leaf_by_label(rl)
                .ok_or_else(|| ModelError::MatchingNotPerfect(format!("{rl:?} is not a right leaf")))?;
            if left_edge_of.insert(ln, e).is_some() {
                return Err(ModelError::MatchingNotPerfect(format!(
                    "left leaf {ll:?} matched twice"
                )));
            }
            if right_edge_of.insert(rn, e).is_some() {
                return Err(ModelError::MatchingNotPerfect(format!(
                    "right leaf {rl:?} matched twice"
                )));
            }
            edges.push((ln, rn));
        }
        Ok(Tanglegram {
            left,
            right,
            edges,
            left_edge_of,
            right_edge_of,
        })
    }

    pub fn left(&self) -> &Tree {
        &self.left
    }

    pub fn right(&self) -> &Tree {
        &self.right
    }

    /// Number of matching edges (= leaves per side).
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Result<(NodeId, NodeId), ModelError> {
        self.edges.get(e).copied().ok_or(ModelError::UnknownEdge(e))
    }

    /// `(left label, right label)` of a matching edge.
    pub fn edge_labels(&self, e: EdgeId) -> (&str, &str) {
        let (l, r) = self.edges[e];
        (self.left.label(l), self.right.label(r))
    }

    pub fn edge_of_left_leaf(&self, v: NodeId) -> Option<EdgeId> {
        self.left_edge_of.get(&v).copied()
    }

    pub fn edge_of_right_leaf(&self, v: NodeId) -> Option<EdgeId> {
        self.right_edge_of.get(&v).copied()
    }

    pub fn edge_by_left_label(&self, label: &str) -> Option<EdgeId> {
        self.left.leaf_by_label(label).and_then(|v| self.edge_of_left_leaf(v))
    }

    /// The same tanglegram viewed from the other side: trees swapped and the
    /// matching transposed. Edge ids are preserved.
    pub fn mirror(&self) -> Tanglegram {
        let pairs: Vec<(String, String)> = self
            .edges
            .iter()
            .map(|&(l, r)| (self.right.label(r).to_string(), self.left.label(l).to_string()))
            .collect();
        Tanglegram::new(self.right.clone(), self.left.clone(), &pairs)
            .expect("mirror of a valid tanglegram is valid")
    }
}

/// An induced binary subtree `T[S]` together with the Steiner tree and the
/// bookkeeping connecting it back to the host.
#[derive(Debug, Clone)]
pub struct InducedSubtree {
    /// Selected host leaves, in host construction order.
    pub selected: Vec<NodeId>,
    /// Host nodes of the Steiner tree (union of root paths of `selected`).
    pub steiner: Vec<NodeId>,
    /// The contracted tree `T[S]`: Steiner tree with degree-2 vertices
    /// suppressed. Leaf labels carry over from the host.
    pub contracted: Tree,
    /// Contracted node id to host node id.
    pub vertex_map: Vec<NodeId>,
    /// For each contracted non-root node `v`, the host path representing the
    /// contracted edge `parent(v) -> v`, endpoints inclusive. Entry for the
    /// contracted root is empty.
    pub rep_paths: Vec<Vec<NodeId>>,
    /// Host node -> contracted child node whose representative path contains
    /// it strictly in the interior.
    path_owner: HashMap<NodeId, NodeId>,
    /// Host node -> contracted node, for kept nodes.
    host_to_contracted: HashMap<NodeId, NodeId>,
}

impl InducedSubtree {
    /// The contracted node a kept host node maps to.
    pub fn contracted_of_host(&self, host: NodeId) -> Option<NodeId> {
        self.host_to_contracted.get(&host).copied()
    }

    /// The contracted edge (keyed by its child node) whose representative
    /// path contains `host` strictly inside.
    pub fn owning_edge(&self, host: NodeId) -> Option<NodeId> {
        self.path_owner.get(&host).copied()
    }

    pub fn is_steiner(&self, host: NodeId) -> bool {
        self.host_to_contracted.contains_key(&host) || self.path_owner.contains_key(&host)
    }
}

/// Computes the induced binary subtree `T[S]` of `tree` on leaf label set `S`.
pub fn induce_subtree(tree: &Tree, labels: &[String]) -> Result<InducedSubtree, ModelError> {
    if labels.is_empty() {
        return Err(ModelError::EmptySelection);
    }
    let mut selected = Vec::with_capacity(labels.len());
    for l in labels {
        let v = tree
            .leaf_by_label(l)
            .ok_or_else(|| ModelError::UnknownLabel(l.clone()))?;
        selected.push(v);
    }
    selected.sort_unstable();
    selected.dedup();
    induce_subtree_nodes(tree, selected)
}

fn induce_subtree_nodes(tree: &Tree, selected: Vec<NodeId>) -> Result<InducedSubtree, ModelError> {
    let n = tree.num_nodes();
    let mut in_steiner = vec![false; n];
    for &s in &selected {
        let mut cur = s;
        loop {
            if in_steiner[cur as usize] {
                break;
            }
            in_steiner[cur as usize] = true;
            match tree.parent(cur) {
                Some(p) => cur = p,
                None => break,
            }
        }
    }
    let steiner: Vec<NodeId> = (0..n as NodeId).filter(|&v| in_steiner[v as usize]).collect();
    let in_selected = {
        let mut m = vec![false; n];
        for &s in &selected {
            m[s as usize] = true;
        }
        m
    };
    // Kept nodes: the root, selected leaves, and Steiner branching vertices.
    let keep = |v: NodeId| -> bool {
        if v == tree.root() || in_selected[v as usize] {
            return true;
        }
        tree.children(v).filter(|&c| in_steiner[c as usize]).count() == 2
    };

    let mut parent = vec![NO_NODE];
    let mut children = vec![[NO_NODE; 2]];
    let mut clabels = vec![String::new()];
    let mut vertex_map = vec![tree.root()];
    let mut rep_paths: Vec<Vec<NodeId>> = vec![Vec::new()];
    let mut path_owner = HashMap::new();
    let mut host_to_contracted = HashMap::new();
    host_to_contracted.insert(tree.root(), 0);

    // Walk down from each kept node through suppressed chains.
    let mut stack = vec![(tree.root(), 0 as NodeId)];
    while let Some((host, cnode)) = stack.pop() {
        let mut slot = 0;
        for c in tree.children(host) {
            if !in_steiner[c as usize] {
                continue;
            }
            // Descend until the next kept node, recording the path.
            let mut path = vec![host];
            let mut cur = c;
            while !keep(cur) {
                path.push(cur);
                let next = tree
                    .children(cur)
                    .find(|&w| in_steiner[w as usize])
                    .ok_or_else(|| {
                        ModelError::InternalInvariant(format!(
                            "suppressed node {cur} has no Steiner child"
                        ))
                    })?;
                cur = next;
            }
            path.push(cur);
            let cid = parent.len() as NodeId;
            parent.push(cnode);
            children.push([NO_NODE; 2]);
            clabels.push(if tree.is_leaf(cur) {
                tree.label(cur).to_string()
            } else {
                String::new()
            });
            vertex_map.push(cur);
            for &w in &path[1..path.len() - 1] {
                path_owner.insert(w, cid);
            }
            rep_paths.push(path);
            children[cnode as usize][slot] = cid;
            slot += 1;
            host_to_contracted.insert(cur, cid);
            stack.push((cur, cid));
        }
    }

    let contracted = Tree::from_arrays(parent, children, clabels)?;
    Ok(InducedSubtree {
        selected,
        steiner,
        contracted,
        vertex_map,
        rep_paths,
        path_owner,
        host_to_contracted,
    })
}

/// An induced subtanglegram `T[Z]` with both sides' induction bookkeeping.
#[derive(Debug, Clone)]
pub struct InducedSubtanglegram {
    /// Host matching edge ids, ascending; edge `i` of `sub` corresponds to
    /// `host_edges[i]`.
    pub host_edges: Vec<EdgeId>,
    pub left: InducedSubtree,
    pub right: InducedSubtree,
    pub sub: Tanglegram,
}

/// Restricts a tanglegram to a matching subset and contracts both trees.
pub fn induce_subtanglegram(tg: &Tanglegram, z: &[EdgeId]) -> Result<Tanglegram, ModelError> {
    Ok(induce_subtanglegram_full(tg, z)?.sub)
}

/// As [`induce_subtanglegram`], but also returns the per-side induction data
/// needed for scar computations.
pub fn induce_subtanglegram_full(
    tg: &Tanglegram,
    z: &[EdgeId],
) -> Result<InducedSubtanglegram, ModelError> {
    if z.is_empty() {
        return Err(ModelError::EmptySelection);
    }
    let mut host_edges = z.to_vec();
    host_edges.sort_unstable();
    host_edges.dedup();
    let mut left_labels = Vec::with_capacity(host_edges.len());
    let mut pairs = Vec::with_capacity(host_edges.len());
    let mut right_labels = Vec::with_capacity(host_edges.len());
    for &e in &host_edges {
        let (l, r) = tg.edge(e)?;
        left_labels.push(tg.left().label(l).to_string());
        right_labels.push(tg.right().label(r).to_string());
        pairs.push((
            tg.left().label(l).to_string(),
            tg.right().label(r).to_string(),
        ));
    }
    let left = induce_subtree(tg.left(), &left_labels)?;
    let right = induce_subtree(tg.right(), &right_labels)?;
    let sub = Tanglegram::new(left.contracted.clone(), right.contracted.clone(), &pairs)?;
    Ok(InducedSubtanglegram {
        host_edges,
        left,
        right,
        sub,
    })
}

/// The two scars an outside matching edge leaves on an induced subtanglegram.
///
/// On each side, the attach node is the first host node on the path from the
/// edge's leaf toward the root that belongs to the Steiner tree; it is always
/// interior to exactly one representative path, and the scar sits on the
/// contracted edge that path represents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScarRecord {
    /// The outside matching edge the scars were created for.
    pub edge: EdgeId,
    /// Scarred edge of the left contracted tree, keyed by its child node.
    pub left_scar: NodeId,
    /// Scarred edge of the right contracted tree, keyed by its child node.
    pub right_scar: NodeId,
    /// True iff the left scar lies on the root-edge of the left contracted tree.
    pub left_outside: bool,
    pub right_outside: bool,
    /// Host attach node on the left (interior of the scarred edge's path).
    pub left_attach: NodeId,
    pub right_attach: NodeId,
}

impl ScarRecord {
    pub fn scar_type(&self) -> ScarType {
        ScarType {
            left: self.left_scar,
            right: self.right_scar,
        }
    }
}

/// A pair of contracted-tree edges (each keyed by its child node): the left
/// and right scar positions of one outside matching edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScarType {
    pub left: NodeId,
    pub right: NodeId,
}

/// Computes the scars of outside edge `m` on the subtanglegram induced by the
/// edges of `ind`.
pub fn scar_of(
    tg: &Tanglegram,
    ind: &InducedSubtanglegram,
    m: EdgeId,
) -> Result<ScarRecord, ModelError> {
    if ind.host_edges.binary_search(&m).is_ok() {
        return Err(ModelError::EdgeInSubset(m));
    }
    let (lleaf, rleaf) = tg.edge(m)?;
    let (left_attach, left_scar) = attach_point(tg.left(), &ind.left, lleaf)?;
    let (right_attach, right_scar) = attach_point(tg.right(), &ind.right, rleaf)?;
    let left_root_child = ind.left.contracted.children(0).next().unwrap();
    let right_root_child = ind.right.contracted.children(0).next().unwrap();
    Ok(ScarRecord {
        edge: m,
        left_scar,
        right_scar,
        left_outside: left_scar == left_root_child,
        right_outside: right_scar == right_root_child,
        left_attach,
        right_attach,
    })
}

fn attach_point(
    tree: &Tree,
    ind: &InducedSubtree,
    leaf: NodeId,
) -> Result<(NodeId, NodeId), ModelError> {
    let mut cur = leaf;
    loop {
        if ind.is_steiner(cur) {
            let owner = ind.owning_edge(cur).ok_or_else(|| {
                ModelError::InternalInvariant(format!(
                    "attach node {cur} is a kept node, not interior to a representative path"
                ))
            })?;
            return Ok((cur, owner));
        }
        cur = tree.parent(cur).ok_or_else(|| {
            ModelError::InternalInvariant("walked past the root without hitting the Steiner tree".into())
        })?;
    }
}

/// A root- and matching-preserving isomorphism between two tanglegrams,
/// described by its action on leaf labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TanglegramIso {
    /// Left-tree leaf map as `(label in a, label in b)` pairs.
    pub left_leaves: Vec<(String, String)>,
    /// Right-tree leaf map as `(label in a, label in b)` pairs.
    pub right_leaves: Vec<(String, String)>,
}

impl TanglegramIso {
    pub fn left_image(&self, label: &str) -> Option<&str> {
        self.left_leaves
            .iter()
            .find(|(a, _)| a == label)
            .map(|(_, b)| b.as_str())
    }

    pub fn right_image(&self, label: &str) -> Option<&str> {
        self.right_leaves
            .iter()
            .find(|(a, _)| a == label)
            .map(|(_, b)| b.as_str())
    }
}

/// Minimal representation of a tanglegram: the lexicographically least
/// `(ordered left shape, ordered right shape, matching permutation)` over all
/// pairs of plane-realizable leaf orders. Equal minima characterize
/// isomorphism. Exponential in size; meant for constant-size instances
/// (detection classifies 4-edge subtanglegrams, fixtures stay at 8 or below).
fn minimal_representation(tg: &Tanglegram) -> (String, String, Vec<usize>, Vec<NodeId>, Vec<NodeId>) {
    let lefts = tg.left().oriented_orders();
    let rights = tg.right().oriented_orders();
    let min_l = lefts.iter().map(|(e, _)| e).min().unwrap().clone();
    let min_r = rights.iter().map(|(e, _)| e).min().unwrap().clone();
    let lcands: Vec<&(String, Vec<NodeId>)> = lefts.iter().filter(|(e, _)| *e == min_l).collect();
    let rcands: Vec<&(String, Vec<NodeId>)> = rights.iter().filter(|(e, _)| *e == min_r).collect();
    let mut best: Option<(Vec<usize>, &Vec<NodeId>, &Vec<NodeId>)> = None;
    for (_, lo) in &lcands {
        for (_, ro) in &rcands {
            let rpos: HashMap<NodeId, usize> =
                ro.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let perm: Vec<usize> = lo
                .iter()
                .map(|&l| {
                    let e = tg.edge_of_left_leaf(l).unwrap();
                    rpos[&tg.edges()[e].1]
                })
                .collect();
            match &best {
                Some((p, _, _)) if *p <= perm => {}
                _ => best = Some((perm, lo, ro)),
            }
        }
    }
    let (perm, lo, ro) = best.unwrap();
    (min_l, min_r, perm, lo.clone(), ro.clone())
}

/// Finds a root- and matching-preserving isomorphism from `a` to `b`, if one
/// exists. Intended for small instances (size 8 or below); cost grows as
/// `4^n` in the size `n`.
pub fn tanglegram_isomorphic(a: &Tanglegram, b: &Tanglegram) -> Option<TanglegramIso> {
    if a.size() != b.size() {
        return None;
    }
    let (la, ra, pa, loa, roa) = minimal_representation(a);
    let (lb, rb, pb, lob, rob) = minimal_representation(b);
    if la != lb || ra != rb || pa != pb {
        return None;
    }
    let left_leaves = loa
        .iter()
        .zip(&lob)
        .map(|(&x, &y)| (a.left().label(x).to_string(), b.left().label(y).to_string()))
        .collect();
    let right_leaves = roa
        .iter()
        .zip(&rob)
        .map(|(&x, &y)| (a.right().label(x).to_string(), b.right().label(y).to_string()))
        .collect();
    Some(TanglegramIso {
        left_leaves,
        right_leaves,
    })
}
