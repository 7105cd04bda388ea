//! Brute-force oracles shared by the integration tests.
//!
//! Everything here is deliberately naive and independent of the library's
//! algorithms: leaf orders are enumerated wholesale, crossings counted by the
//! quadratic definition, planarity decided by exhausting rotation systems,
//! and isomorphisms counted by trying every child correspondence. The tests
//! compare the library against these definitions.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tanglegram::detect::Graph;
use tanglegram::layout::LayoutRep;
use tanglegram::model::{EdgeId, NodeId, Tanglegram, Tree};

/// All leaf orders consistent with `tree`: both child arrangements are tried
/// at every internal node, giving 2^(internal nodes) orders.
pub fn consistent_orders(tree: &Tree) -> Vec<Vec<String>> {
    fn below(tree: &Tree, v: NodeId) -> Vec<Vec<String>> {
        if tree.is_leaf(v) {
            return vec![vec![tree.label(v).to_string()]];
        }
        let kids: Vec<NodeId> = tree.children(v).collect();
        if kids.len() == 1 {
            return below(tree, kids[0]);
        }
        let first = below(tree, kids[0]);
        let second = below(tree, kids[1]);
        let mut out = Vec::with_capacity(first.len() * second.len() * 2);
        for a in &first {
            for b in &second {
                let mut ab = a.clone();
                ab.extend(b.iter().cloned());
                out.push(ab);
                let mut ba = b.clone();
                ba.extend(a.iter().cloned());
                out.push(ba);
            }
        }
        out
    }
    below(tree, tree.root())
}

/// One uniformly drawn consistent order: a coin flip at every internal node.
pub fn random_order(tree: &Tree, seed: u64) -> Vec<String> {
    fn below(tree: &Tree, v: NodeId, rng: &mut ChaCha8Rng, out: &mut Vec<String>) {
        if tree.is_leaf(v) {
            out.push(tree.label(v).to_string());
            return;
        }
        let kids: Vec<NodeId> = tree.children(v).collect();
        if kids.len() == 1 {
            below(tree, kids[0], rng, out);
            return;
        }
        let (a, b) = if rng.gen::<u64>() % 2 == 0 {
            (kids[0], kids[1])
        } else {
            (kids[1], kids[0])
        };
        below(tree, a, rng, out);
        below(tree, b, rng, out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(tree.n_leaves());
    below(tree, tree.root(), &mut rng, &mut out);
    out
}

/// Crossing count straight from the definition: two matching edges cross iff
/// their endpoints compare in opposite directions in the two orders.
pub fn quadratic_crossings(tg: &Tanglegram, left: &[String], right: &[String]) -> usize {
    let lpos: HashMap<&str, usize> = left
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let rpos: HashMap<&str, usize> = right
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let spots: Vec<(usize, usize)> = tg
        .edges()
        .iter()
        .map(|&(l, r)| (lpos[tg.left().label(l)], rpos[tg.right().label(r)]))
        .collect();
    let mut count = 0;
    for i in 0..spots.len() {
        for j in i + 1..spots.len() {
            if (spots[i].0 < spots[j].0) != (spots[i].1 < spots[j].1) {
                count += 1;
            }
        }
    }
    count
}

/// Minimum crossing count over the full double enumeration of consistent
/// order pairs, with one witness.
pub fn brute_crt(tg: &Tanglegram) -> (usize, LayoutRep) {
    let lefts = consistent_orders(tg.left());
    let rights = consistent_orders(tg.right());
    let mut best = usize::MAX;
    let mut witness = None;
    for l in &lefts {
        for r in &rights {
            let c = quadratic_crossings(tg, l, r);
            if c < best {
                best = c;
                witness = Some(LayoutRep {
                    left_order: l.clone(),
                    right_order: r.clone(),
                });
            }
        }
    }
    (best, witness.expect("every tree admits an order"))
}

/// Number of faces traced by a rotation system (neighbor lists read as
/// clockwise orders). Darts are indexed by their slot in the rotation.
fn count_faces(rot: &[Vec<usize>], offset: &[usize], seen: &mut [bool]) -> i64 {
    seen.fill(false);
    let dart_id = |u: usize, v: usize| {
        offset[u] + rot[u].iter().position(|&w| w == v).unwrap()
    };
    let mut faces = 0;
    for (u, nb) in rot.iter().enumerate() {
        for (i, &first) in nb.iter().enumerate() {
            if seen[offset[u] + i] {
                continue;
            }
            faces += 1;
            let (mut a, mut b) = (u, first);
            loop {
                seen[dart_id(a, b)] = true;
                let idx = rot[b].iter().position(|&w| w == a).unwrap();
                let w = rot[b][(idx + 1) % rot[b].len()];
                (a, b) = (b, w);
                if (a, b) == (u, first) {
                    break;
                }
            }
        }
    }
    faces
}

/// Planarity of a connected graph by exhausting rotation systems: the graph
/// embeds in the plane iff some cyclic neighbor order at every vertex traces
/// V - E + F = 2 faces. Degree stays at most 3 here, so each vertex offers at
/// most two cyclic orders.
pub fn rotation_planar(g: &Graph) -> bool {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); g.n];
    for &(u, v) in &g.edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    assert!(adj.iter().all(|a| a.len() <= 3), "oracle expects max degree 3");
    let swappable: Vec<usize> = (0..g.n).filter(|&v| adj[v].len() == 3).collect();
    let faces_goal = 2 - g.n as i64 + g.edges.len() as i64;
    let mut offset = vec![0; g.n];
    for v in 1..g.n {
        offset[v] = offset[v - 1] + adj[v - 1].len();
    }
    let mut seen = vec![false; 2 * g.edges.len()];
    for mask in 0u64..(1u64 << swappable.len()) {
        let mut rot = adj.clone();
        for (i, &v) in swappable.iter().enumerate() {
            if mask >> i & 1 == 1 {
                rot[v].swap(1, 2);
            }
        }
        if count_faces(&rot, &offset, &mut seen) == faces_goal {
            return true;
        }
    }
    false
}

/// Leaf bijections of all isomorphisms from rooted tree `a` onto `b`, found
/// by trying both child correspondences at every internal node.
fn tree_isos(a: &Tree, b: &Tree) -> Vec<HashMap<String, String>> {
    fn go(a: &Tree, u: NodeId, b: &Tree, v: NodeId) -> Vec<Vec<(String, String)>> {
        match (a.is_leaf(u), b.is_leaf(v)) {
            (true, true) => vec![vec![(a.label(u).to_string(), b.label(v).to_string())]],
            (false, false) => {
                let ka: Vec<NodeId> = a.children(u).collect();
                let kb: Vec<NodeId> = b.children(v).collect();
                if ka.len() != kb.len() {
                    return Vec::new();
                }
                if ka.len() == 1 {
                    return go(a, ka[0], b, kb[0]);
                }
                let mut out = Vec::new();
                for (x, y) in [(0, 1), (1, 0)] {
                    for m0 in go(a, ka[0], b, kb[x]) {
                        for m1 in go(a, ka[1], b, kb[y]) {
                            let mut m = m0.clone();
                            m.extend(m1.iter().cloned());
                            out.push(m);
                        }
                    }
                }
                out
            }
            _ => Vec::new(),
        }
    }
    go(a, a.root(), b, b.root())
        .into_iter()
        .map(|pairs| pairs.into_iter().collect())
        .collect()
}

/// Number of tanglegram isomorphisms from `a` onto `b`: pairs of tree
/// isomorphisms that carry the matching onto the matching.
pub fn count_isomorphisms(a: &Tanglegram, b: &Tanglegram) -> usize {
    if a.size() != b.size() {
        return 0;
    }
    let lefts = tree_isos(a.left(), b.left());
    let rights = tree_isos(a.right(), b.right());
    let pairs_b: HashSet<(String, String)> = b
        .edges()
        .iter()
        .map(|&(l, r)| {
            (
                b.left().label(l).to_string(),
                b.right().label(r).to_string(),
            )
        })
        .collect();
    let mut count = 0;
    for fl in &lefts {
        for fr in &rights {
            let ok = a.edges().iter().all(|&(l, r)| {
                let lb = &fl[a.left().label(l)];
                let rb = &fr[a.right().label(r)];
                pairs_b.contains(&(lb.clone(), rb.clone()))
            });
            if ok {
                count += 1;
            }
        }
    }
    count
}

pub fn brute_isomorphic(a: &Tanglegram, b: &Tanglegram) -> bool {
    count_isomorphisms(a, b) > 0
}

/// Every 4-subset of matching edges whose induced subtanglegram is
/// isomorphic to one of the two obstruction fixtures, by definition-level
/// enumeration.
pub fn brute_cross_responsible(tg: &Tanglegram) -> Vec<Vec<EdgeId>> {
    use tanglegram::gen::{build_family, Family};
    use tanglegram::model::induce_subtanglegram;
    let k1 = build_family(Family::K1, 1).unwrap();
    let k2 = build_family(Family::K2, 1).unwrap();
    let n = tg.size();
    let mut found = Vec::new();
    if n < 4 {
        return found;
    }
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let z = vec![a, b, c, d];
                    let sub = induce_subtanglegram(tg, &z).unwrap();
                    if brute_isomorphic(&sub, &k1) || brute_isomorphic(&sub, &k2) {
                        found.push(z);
                    }
                }
            }
        }
    }
    found
}
