//! Obstruction detection: cross-responsible sets, standardized labelings,
//! scar types, safe pairs, and the associated graph with a planarity test.
//!
//! A 4-subset of the matching is cross-responsible when the subtanglegram it
//! induces is one of the two 1-crossing-critical tanglegrams: the balanced
//! kind (K1) or the caterpillar kind (K2). Enumeration walks all 4-subsets
//! and keeps those whose induced subtanglegram has crossing number exactly 1;
//! for size 4 that condition is equivalent to being one of the two kinds, and
//! the tree shapes (balanced vs caterpillar) tell them apart.
//!
//! Each hit is labeled with the standardized edge names used throughout the
//! construction: for the caterpillar kind the unique isomorphism onto the
//! fixture forces the labeling; the balanced kind has four automorphic
//! labelings and the lexicographically least (by host edge ids) is chosen.
//!
//! The planarity test is the classical edge-addition method: decompose into
//! biconnected components, seed each with a cycle, then repeatedly embed a
//! fragment with the fewest admissible faces, splitting the face it lands in;
//! a fragment with no admissible face certifies nonplanarity.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::gen::{build_family, Family};
use crate::layout::{exact_crt_with, CrtOptions, LayoutError};
use crate::model::{
    induce_subtanglegram_full, scar_of, tanglegram_isomorphic, EdgeId, InducedSubtanglegram,
    ModelError, NodeId, Tanglegram,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetectError {
    #[error("the two matching edges must be distinct")]
    SamePair,
    #[error("matching edge {0} belongs to the obstruction's edge set")]
    EdgeInObstruction(EdgeId),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

/// The two 1-crossing-critical kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    /// Balanced trees on both sides, middle edges swapped.
    K1,
    /// Caterpillar trees on both sides, matched outer-to-inner.
    K2,
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Kind::K1 => "K1",
            Kind::K2 => "K2",
        })
    }
}

/// Standardized names for an obstruction copy.
///
/// Matching edges: `e1..e4` for the balanced kind, `u1, u2, x, y` for the
/// caterpillar kind. Contracted-tree edges are keyed by their child node and
/// named per side (`1` = left, `2` = right): `a` is the root edge; for the
/// caterpillar kind `b, e` are the spine edges top-down and `c, d, f, g` the
/// leaf edges of `u2/u1, x, y, u1/u2` (outer leaf on the `c` end); for the
/// balanced kind `b, c` are the cherry edges and `f1..f8` the leaf edges in
/// `e1..e4` order, left side first.
#[derive(Debug, Clone)]
pub struct Labeling {
    edge_roles: HashMap<EdgeId, String>,
    roles_edge: HashMap<String, EdgeId>,
    left_edges: HashMap<NodeId, String>,
    right_edges: HashMap<NodeId, String>,
}

impl Labeling {
    /// Standardized name of a host matching edge in the copy.
    pub fn role_of(&self, e: EdgeId) -> Option<&str> {
        self.edge_roles.get(&e).map(|s| s.as_str())
    }

    /// Host matching edge carrying a standardized role.
    pub fn edge_with_role(&self, role: &str) -> Option<EdgeId> {
        self.roles_edge.get(role).copied()
    }

    /// Name of a left contracted-tree edge, keyed by its child node.
    pub fn left_edge_name(&self, child: NodeId) -> Option<&str> {
        self.left_edges.get(&child).map(|s| s.as_str())
    }

    pub fn right_edge_name(&self, child: NodeId) -> Option<&str> {
        self.right_edges.get(&child).map(|s| s.as_str())
    }
}

/// A cross-responsible set: a 4-subset of the matching inducing one of the
/// two critical kinds, with its standardized labeling and the induction
/// bookkeeping used by scar computations.
#[derive(Debug, Clone)]
pub struct CrossResponsibleSet {
    /// Host matching edge ids, ascending.
    pub edges: [EdgeId; 4],
    pub kind: Kind,
    pub labeling: Labeling,
    pub induced: InducedSubtanglegram,
}

fn is_balanced4(t: &crate::model::Tree) -> bool {
    let top = t.children(t.root()).next().unwrap();
    t.children(top).all(|c| !t.is_leaf(c))
}

/// Builds the balanced-kind labeling: pick `e1` so that `{e1, e2}` is the
/// left cherry containing it, `e3` is `e1`'s unique unsafe partner, and the
/// right cherries come out as `{e1, e4}` and `{e2, e3}`; of the four
/// automorphic assignments take the least by host edge-id tuple.
fn label_k1(ind: &InducedSubtanglegram) -> Labeling {
    let s = &ind.sub;
    let left_cherry = |i: usize, j: usize| {
        s.left().parent(s.edges()[i].0) == s.left().parent(s.edges()[j].0)
    };
    let right_cherry = |i: usize, j: usize| {
        s.right().parent(s.edges()[i].1) == s.right().parent(s.edges()[j].1)
    };
    let mut best: Option<[usize; 4]> = None;
    for e1 in 0..4 {
        let Some(e2) = (0..4).find(|&j| j != e1 && left_cherry(e1, j)) else {
            continue;
        };
        let Some(e3) =
            (0..4).find(|&j| j != e1 && !left_cherry(e1, j) && !right_cherry(e1, j))
        else {
            continue;
        };
        let e4 = 6 - e1 - e2 - e3;
        if e4 == e1 || e4 == e2 || e4 == e3 {
            continue;
        }
        if !(right_cherry(e1, e4) && right_cherry(e2, e3)) {
            continue;
        }
        let cand = [e1, e2, e3, e4];
        let host = cand.map(|i| ind.host_edges[i]);
        if best.is_none() || host < best.unwrap().map(|i| ind.host_edges[i]) {
            best = Some(cand);
        }
    }
    let assign = best.expect("a balanced-kind copy always admits the normalization");
    let mut edge_roles = HashMap::new();
    let mut roles_edge = HashMap::new();
    let mut left_edges = HashMap::new();
    let mut right_edges = HashMap::new();
    for (k, &sub_idx) in assign.iter().enumerate() {
        let name = format!("e{}", k + 1);
        edge_roles.insert(ind.host_edges[sub_idx], name.clone());
        roles_edge.insert(name, ind.host_edges[sub_idx]);
        // Leaf edges f1..f4 (left) and f5..f8 (right) in e1..e4 order.
        left_edges.insert(s.edges()[sub_idx].0, format!("f{}", k + 1));
        right_edges.insert(s.edges()[sub_idx].1, format!("f{}", k + 5));
    }
    let top_l = s.left().children(s.left().root()).next().unwrap();
    let top_r = s.right().children(s.right().root()).next().unwrap();
    left_edges.insert(top_l, "a1".into());
    right_edges.insert(top_r, "a2".into());
    // b = the cherry edge above e1's leaf, c = the other cherry edge.
    let lam = |k: usize| s.edges()[assign[k]];
    left_edges.insert(s.left().parent(lam(0).0).unwrap(), "b1".into());
    left_edges.insert(s.left().parent(lam(2).0).unwrap(), "c1".into());
    right_edges.insert(s.right().parent(lam(0).1).unwrap(), "b2".into());
    right_edges.insert(s.right().parent(lam(1).1).unwrap(), "c2".into());
    Labeling {
        edge_roles,
        roles_edge,
        left_edges,
        right_edges,
    }
}

/// Builds the caterpillar-kind labeling through the unique isomorphism onto
/// the fixture.
fn label_k2(ind: &InducedSubtanglegram) -> Labeling {
    let s = &ind.sub;
    let fixture = build_family(Family::K2, 0).expect("fixture");
    let iso = tanglegram_isomorphic(s, &fixture)
        .expect("a caterpillar-kind copy is isomorphic to the fixture");
    // Fixture left leaves l1..l4 carry roles u2, x, y, u1 top-down.
    let role_by_fixture_leaf: HashMap<&str, &str> =
        [("l1", "u2"), ("l2", "x"), ("l3", "y"), ("l4", "u1")]
            .into_iter()
            .collect();
    let mut edge_roles = HashMap::new();
    let mut roles_edge = HashMap::new();
    let mut sub_idx_of_role: HashMap<String, usize> = HashMap::new();
    for i in 0..4 {
        let llabel = s.left().label(s.edges()[i].0);
        let fixture_leaf = iso.left_image(llabel).unwrap();
        let role = role_by_fixture_leaf[fixture_leaf].to_string();
        edge_roles.insert(ind.host_edges[i], role.clone());
        roles_edge.insert(role.clone(), ind.host_edges[i]);
        sub_idx_of_role.insert(role, i);
    }
    let mut left_edges = HashMap::new();
    let mut right_edges = HashMap::new();
    // Left leaf edges: c1 above u2's leaf, d1 above x's, f1 above y's,
    // g1 above u1's; right side mirrors with u1 and u2 swapped.
    for (role, name_l, name_r) in [
        ("u2", "c1", "g2"),
        ("x", "d1", "d2"),
        ("y", "f1", "f2"),
        ("u1", "g1", "c2"),
    ] {
        let i = sub_idx_of_role[role];
        left_edges.insert(s.edges()[i].0, name_l.to_string());
        right_edges.insert(s.edges()[i].1, name_r.to_string());
    }
    // Spine edges top-down: a (root edge), b, e.
    fn spine(t: &crate::model::Tree) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut v = t.children(t.root()).next().unwrap();
        loop {
            out.push(v);
            match t.children(v).find(|&c| !t.is_leaf(c)) {
                Some(next) => v = next,
                None => break,
            }
        }
        out
    }
    for (sp, side, map) in [
        (spine(s.left()), "1", &mut left_edges),
        (spine(s.right()), "2", &mut right_edges),
    ] {
        debug_assert_eq!(sp.len(), 3);
        map.insert(sp[0], format!("a{side}"));
        map.insert(sp[1], format!("b{side}"));
        map.insert(sp[2], format!("e{side}"));
    }
    Labeling {
        edge_roles,
        roles_edge,
        left_edges,
        right_edges,
    }
}

/// Enumerates all cross-responsible sets of `tg`: 4-subsets whose induced
/// subtanglegram has crossing number exactly 1 (equivalently, induces one of
/// the two critical kinds). Sizes below 4 yield the empty list.
pub fn cross_responsible_sets(tg: &Tanglegram) -> Vec<CrossResponsibleSet> {
    let n = tg.size();
    let mut out = Vec::new();
    if n < 4 {
        return out;
    }
    let opts = CrtOptions {
        budget: None,
        size_cap: 4,
    };
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let edges = [a, b, c, d];
                    let ind = induce_subtanglegram_full(tg, &edges)
                        .expect("valid edge ids induce a valid subtanglegram");
                    let crt = exact_crt_with(&ind.sub, &opts)
                        .expect("size-4 instances are within the cap")
                        .value;
                    if crt != 1 {
                        continue;
                    }
                    let lb = is_balanced4(ind.sub.left());
                    let rb = is_balanced4(ind.sub.right());
                    let (kind, labeling) = match (lb, rb) {
                        (true, true) => (Kind::K1, label_k1(&ind)),
                        (false, false) => (Kind::K2, label_k2(&ind)),
                        _ => unreachable!(
                            "a size-4 tanglegram with crossing number 1 is one of the two critical kinds"
                        ),
                    };
                    out.push(CrossResponsibleSet {
                        edges,
                        kind,
                        labeling,
                        induced: ind,
                    });
                }
            }
        }
    }
    out
}

/// The scar type of outside edge `m` against the copy `x`: the standardized
/// names of the contracted edges carrying `m`'s left and right scars.
pub fn scar_type(
    tg: &Tanglegram,
    x: &CrossResponsibleSet,
    m: EdgeId,
) -> Result<(String, String), DetectError> {
    if x.edges.contains(&m) {
        return Err(DetectError::EdgeInObstruction(m));
    }
    let rec = scar_of(tg, &x.induced, m)?;
    let l = x
        .labeling
        .left_edge_name(rec.left_scar)
        .expect("every contracted edge is named")
        .to_string();
    let r = x
        .labeling
        .right_edge_name(rec.right_scar)
        .expect("every contracted edge is named")
        .to_string();
    Ok((l, r))
}

/// True iff the two matching edges' leaves form a cherry in at least one
/// tree; such pairs never cross in an optimal layout.
pub fn is_safe_pair(tg: &Tanglegram, e: EdgeId, f: EdgeId) -> Result<bool, DetectError> {
    if e == f {
        return Err(DetectError::SamePair);
    }
    let (le, re) = tg.edge(e)?;
    let (lf, rf) = tg.edge(f)?;
    Ok(tg.left().parent(le) == tg.left().parent(lf)
        || tg.right().parent(re) == tg.right().parent(rf))
}

/// A simple undirected graph on dense vertex ids.
#[derive(Debug, Clone)]
pub struct Graph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

/// The associated graph: both trees as plain graphs, the matching edges, and
/// one extra edge joining the two roots. Left-tree node `v` becomes vertex
/// `v`; right-tree node `v` becomes vertex `nodes(left) + v`. Max degree 3.
pub fn associated_graph(tg: &Tanglegram) -> Graph {
    let nl = tg.left().num_nodes();
    let nr = tg.right().num_nodes();
    let mut edges = Vec::with_capacity(nl + nr + tg.size() - 1);
    for v in 1..nl {
        edges.push((tg.left().parent(v as NodeId).unwrap() as usize, v));
    }
    for v in 1..nr {
        edges.push((
            nl + tg.right().parent(v as NodeId).unwrap() as usize,
            nl + v,
        ));
    }
    for &(l, r) in tg.edges() {
        edges.push((l as usize, nl + r as usize));
    }
    edges.push((tg.left().root() as usize, nl + tg.right().root() as usize));
    Graph { n: nl + nr, edges }
}

fn norm(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Splits a graph into biconnected components (edge sets) by the classic
/// lowpoint depth-first search.
fn biconnected_components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((b, i));
        adj[b].push((a, i));
    }
    struct St<'a> {
        adj: &'a [Vec<(usize, usize)>],
        edges: &'a [(usize, usize)],
        disc: Vec<usize>,
        low: Vec<usize>,
        timer: usize,
        stack: Vec<usize>,
        comps: Vec<Vec<(usize, usize)>>,
    }
    fn dfs(s: &mut St, v: usize, parent_edge: usize) {
        s.disc[v] = s.timer;
        s.low[v] = s.timer;
        s.timer += 1;
        for k in 0..s.adj[v].len() {
            let (w, ei) = s.adj[v][k];
            if ei == parent_edge {
                continue;
            }
            if s.disc[w] == usize::MAX {
                s.stack.push(ei);
                dfs(s, w, ei);
                s.low[v] = s.low[v].min(s.low[w]);
                if s.low[w] >= s.disc[v] {
                    let mut comp = Vec::new();
                    loop {
                        let e = s.stack.pop().unwrap();
                        comp.push(s.edges[e]);
                        if e == ei {
                            break;
                        }
                    }
                    s.comps.push(comp);
                }
            } else if s.disc[w] < s.disc[v] {
                s.stack.push(ei);
                s.low[v] = s.low[v].min(s.disc[w]);
            }
        }
    }
    let mut st = St {
        adj: &adj,
        edges,
        disc: vec![usize::MAX; n],
        low: vec![0; n],
        timer: 0,
        stack: Vec::new(),
        comps: Vec::new(),
    };
    for v in 0..n {
        if st.disc[v] == usize::MAX {
            dfs(&mut st, v, usize::MAX);
        }
    }
    st.comps
}

/// Any cycle of a biconnected component with at least as many edges as
/// vertices, as a vertex sequence.
fn find_cycle(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut parent = vec![usize::MAX; n];
    let mut visited = vec![false; n];
    fn dfs(
        u: usize,
        par: usize,
        adj: &[Vec<usize>],
        visited: &mut [bool],
        parent: &mut [usize],
    ) -> Option<(usize, usize)> {
        visited[u] = true;
        let mut skipped_parent = false;
        for &w in &adj[u] {
            if w == par && !skipped_parent {
                skipped_parent = true;
                continue;
            }
            if visited[w] {
                return Some((u, w));
            }
            parent[w] = u;
            if let Some(r) = dfs(w, u, adj, visited, parent) {
                return Some(r);
            }
        }
        None
    }
    let (u, w) = dfs(0, usize::MAX, adj, &mut visited, &mut parent)
        .expect("a biconnected component with a surplus edge contains a cycle");
    let mut cycle = vec![u];
    let mut cur = u;
    while cur != w {
        cur = parent[cur];
        cycle.push(cur);
    }
    cycle
}

/// Planarity of one biconnected component by iterative edge addition.
fn component_planar(comp: &[(usize, usize)]) -> bool {
    let mut verts: Vec<usize> = comp.iter().flat_map(|&(a, b)| [a, b]).collect();
    verts.sort_unstable();
    verts.dedup();
    let v = verts.len();
    let e = comp.len();
    if e <= 3 || v <= 4 {
        return true;
    }
    if e > 3 * v - 6 {
        return false;
    }
    let idx: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let es: Vec<(usize, usize)> = comp.iter().map(|&(a, b)| (idx[&a], idx[&b])).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); v];
    for &(a, b) in &es {
        adj[a].push(b);
        adj[b].push(a);
    }
    let cycle = find_cycle(&adj);
    let mut embedded: HashSet<(usize, usize)> = HashSet::new();
    for i in 0..cycle.len() {
        embedded.insert(norm(cycle[i], cycle[(i + 1) % cycle.len()]));
    }
    let mut in_h = vec![false; v];
    for &c in &cycle {
        in_h[c] = true;
    }
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle.iter().rev().copied().collect()];
    loop {
        // Fragments: chords between embedded vertices, and connected chunks
        // of not-yet-embedded vertices with their attachment points.
        let mut fragments: Vec<(Vec<usize>, Vec<usize>)> = Vec::new(); // (attachments, alpha path)
        for &(a, b) in &es {
            if !embedded.contains(&norm(a, b)) && in_h[a] && in_h[b] {
                fragments.push((vec![a.min(b), a.max(b)], vec![a, b]));
            }
        }
        let mut seen = vec![false; v];
        for s0 in 0..v {
            if in_h[s0] || seen[s0] {
                continue;
            }
            let mut q = VecDeque::from([s0]);
            seen[s0] = true;
            let mut chunk = vec![s0];
            let mut att: Vec<usize> = Vec::new();
            while let Some(u) = q.pop_front() {
                for &w in &adj[u] {
                    if in_h[w] {
                        att.push(w);
                    } else if !seen[w] {
                        seen[w] = true;
                        chunk.push(w);
                        q.push_back(w);
                    }
                }
            }
            att.sort_unstable();
            att.dedup();
            // A path through the chunk between two distinct attachments.
            let a0 = att[0];
            let mut prev: HashMap<usize, usize> = HashMap::new();
            let mut q = VecDeque::new();
            for &w in &adj[a0] {
                if !in_h[w] && chunk.contains(&w) && !prev.contains_key(&w) {
                    prev.insert(w, a0);
                    q.push_back(w);
                }
            }
            let mut path = Vec::new();
            'bfs: while let Some(u) = q.pop_front() {
                for &w in &adj[u] {
                    if in_h[w] {
                        if w != a0 {
                            let mut p = vec![w, u];
                            let mut cur = u;
                            while prev[&cur] != a0 {
                                cur = prev[&cur];
                                p.push(cur);
                            }
                            p.push(a0);
                            p.reverse();
                            path = p;
                            break 'bfs;
                        }
                    } else if !prev.contains_key(&w) {
                        prev.insert(w, u);
                        q.push_back(w);
                    }
                }
            }
            debug_assert!(!path.is_empty(), "biconnected fragments attach twice");
            fragments.push((att, path));
        }
        if fragments.is_empty() {
            return true;
        }
        // Embed a fragment with the fewest admissible faces.
        let mut choice: Option<(usize, usize)> = None; // (fragment idx, face idx)
        let mut best_count = usize::MAX;
        for (fi, (att, _)) in fragments.iter().enumerate() {
            let mut count = 0;
            let mut first_face = usize::MAX;
            for (i, f) in faces.iter().enumerate() {
                if att.iter().all(|a| f.contains(a)) {
                    count += 1;
                    if first_face == usize::MAX {
                        first_face = i;
                    }
                }
            }
            if count == 0 {
                return false;
            }
            if count < best_count {
                best_count = count;
                choice = Some((fi, first_face));
            }
        }
        let (fi, face_idx) = choice.unwrap();
        let path = fragments[fi].1.clone();
        let face = faces.swap_remove(face_idx);
        let i = face.iter().position(|&x| x == path[0]).unwrap();
        let j = face.iter().position(|&x| x == *path.last().unwrap()).unwrap();
        let m = face.len();
        let mut arc1 = Vec::new();
        let mut k = i;
        loop {
            arc1.push(face[k]);
            if k == j {
                break;
            }
            k = (k + 1) % m;
        }
        let mut arc2 = Vec::new();
        let mut k = j;
        loop {
            arc2.push(face[k]);
            if k == i {
                break;
            }
            k = (k + 1) % m;
        }
        let interior = &path[1..path.len() - 1];
        let mut f1 = arc1;
        f1.extend(interior.iter().rev());
        let mut f2 = arc2;
        f2.extend(interior.iter());
        faces.push(f1);
        faces.push(f2);
        for w in path.windows(2) {
            embedded.insert(norm(w[0], w[1]));
        }
        for &x in interior {
            in_h[x] = true;
        }
    }
}

/// True iff the simple graph is planar. Decomposes into biconnected
/// components and embeds each by edge addition; a graph is planar exactly
/// when all its biconnected components are.
pub fn is_planar_graph(g: &Graph) -> bool {
    let mut edges: Vec<(usize, usize)> = g
        .edges
        .iter()
        .map(|&(a, b)| norm(a, b))
        .filter(|&(a, b)| a != b)
        .collect();
    edges.sort_unstable();
    edges.dedup();
    if g.n <= 4 {
        return true;
    }
    biconnected_components(g.n, &edges)
        .iter()
        .all(|comp| component_planar(comp))
}

/// A diagnostic raised by [`validate_obstruction_lemmas`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Stable rule id: `k1-outside-scar`, `k1-no-leaf-scar`,
    /// `k2-scar-type-table`, or `k2-single-side-m`.
    pub rule: &'static str,
    /// Offending outside edge, if the rule concerns a single edge.
    pub edge: Option<EdgeId>,
    pub detail: String,
}

/// Scar types an outside edge may leave on a caterpillar-kind copy when the
/// copy is the unique obstruction.
pub const K2_ALLOWED_SCAR_TYPES: [(&str, &str); 9] = [
    ("a1", "a2"),
    ("a1", "b2"),
    ("b1", "a2"),
    ("a1", "c2"),
    ("c1", "a2"),
    ("b1", "c2"),
    ("c1", "b2"),
    ("d1", "f2"),
    ("f1", "d2"),
];

/// Checks the structural consequences of `x` being the unique
/// cross-responsible set: every outside edge of a balanced-kind copy has at
/// least one scar on a root edge and none on a leaf edge; every outside edge
/// of a caterpillar-kind copy has a scar type from the allowed table, and the
/// two table rows that touch the middle leaf edges are never both populated.
/// An empty result means all checks passed; violations signal either a caller
/// breaking the uniqueness precondition or an upstream bug.
pub fn validate_obstruction_lemmas(
    tg: &Tanglegram,
    x: &CrossResponsibleSet,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut m1 = Vec::new();
    let mut m2 = Vec::new();
    for m in 0..tg.size() {
        if x.edges.contains(&m) {
            continue;
        }
        let rec = scar_of(tg, &x.induced, m).expect("outside edges always scar");
        let lname = x.labeling.left_edge_name(rec.left_scar).unwrap();
        let rname = x.labeling.right_edge_name(rec.right_scar).unwrap();
        match x.kind {
            Kind::K1 => {
                if !rec.left_outside && !rec.right_outside {
                    out.push(Violation {
                        rule: "k1-outside-scar",
                        edge: Some(m),
                        detail: format!(
                            "edge {m} scars ({lname}, {rname}); neither is a root edge"
                        ),
                    });
                }
                if lname.starts_with('f') || rname.starts_with('f') {
                    out.push(Violation {
                        rule: "k1-no-leaf-scar",
                        edge: Some(m),
                        detail: format!("edge {m} scars a leaf edge: ({lname}, {rname})"),
                    });
                }
            }
            Kind::K2 => {
                if !K2_ALLOWED_SCAR_TYPES
                    .iter()
                    .any(|&(a, b)| a == lname && b == rname)
                {
                    out.push(Violation {
                        rule: "k2-scar-type-table",
                        edge: Some(m),
                        detail: format!("edge {m} has scar type ({lname}, {rname})"),
                    });
                }
                if (lname, rname) == ("d1", "f2") {
                    m1.push(m);
                } else if (lname, rname) == ("f1", "d2") {
                    m2.push(m);
                }
            }
        }
    }
    if !m1.is_empty() && !m2.is_empty() {
        out.push(Violation {
            rule: "k2-single-side-m",
            edge: None,
            detail: format!(
                "both middle scar classes populated: {} edge(s) on (d1, f2), {} on (f1, d2)",
                m1.len(),
                m2.len()
            ),
        });
    }
    out
}
