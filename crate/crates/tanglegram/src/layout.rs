//! Layouts and crossing numbers.
//!
//! A layout is a pair of leaf orders, one per tree, each consistent with its
//! tree (every subtree's leaves form a contiguous block). Both orders are
//! stored top-to-bottom as a viewer reads the drawing, so two matching edges
//! cross exactly when their left endpoints and right endpoints compare in
//! opposite directions; the crossing count of a layout is the number of such
//! inversions, counted here by merge sort.
//!
//! The exact tangle crossing number is found by enumerating the `2^(n-1)`
//! child-order assignments of the left tree depth-first and completing each
//! with an independent per-node minimization on the right: a pair of matching
//! edges crosses or not depending only on the swap decision at the right-tree
//! node where their right endpoints meet, so once the left order is fixed the
//! right tree's decisions decouple. Partially assigned left orders already
//! force a lower bound (the decided pairs' best case), which prunes the
//! search; the first branching decision is pinned to cut the mirror-image
//! half of the space.

use std::collections::HashMap;

use thiserror::Error;

use crate::model::{EdgeId, NodeId, Tanglegram, Tree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LayoutError {
    #[error("order is not a permutation of the tree's leaf labels: {0}")]
    NotAPermutation(String),
    #[error("{side} order is not consistent with the {side} tree")]
    InconsistentOrder { side: &'static str },
    #[error("tanglegram size {n} exceeds the solver size cap {cap}")]
    SizeOverCap { n: usize, cap: usize },
    #[error("unknown matching edge id {0}")]
    UnknownEdge(EdgeId),
}

/// A layout representation: leaf labels of each tree, top to bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutRep {
    pub left_order: Vec<String>,
    pub right_order: Vec<String>,
}

impl LayoutRep {
    /// The layout induced by construction order on both sides.
    pub fn natural(tg: &Tanglegram) -> LayoutRep {
        let side = |t: &Tree| {
            t.leaves()
                .iter()
                .map(|&v| t.label(v).to_string())
                .collect()
        };
        LayoutRep {
            left_order: side(tg.left()),
            right_order: side(tg.right()),
        }
    }

    /// True iff both orders are consistent with their trees.
    pub fn is_layout_of(&self, tg: &Tanglegram) -> Result<bool, LayoutError> {
        Ok(is_consistent(tg.left(), &self.left_order)?
            && is_consistent(tg.right(), &self.right_order)?)
    }
}

/// Result of an exact crossing-number search.
#[derive(Debug, Clone)]
pub struct CrtResult {
    /// Minimum crossing count found.
    pub value: usize,
    /// A layout attaining `value`.
    pub witness: LayoutRep,
    /// Search nodes visited.
    pub explored: u64,
    /// True iff the search ran to completion; false means the budget ran out
    /// and `value` is only an upper bound.
    pub optimal: bool,
}

/// Knobs for [`exact_crt_with`].
#[derive(Debug, Clone)]
pub struct CrtOptions {
    /// Maximum search nodes before giving up with `optimal = false`;
    /// `None` removes the limit.
    pub budget: Option<u64>,
    /// Largest instance size accepted.
    pub size_cap: usize,
}

impl Default for CrtOptions {
    fn default() -> Self {
        CrtOptions {
            budget: Some(10_000_000),
            size_cap: 18,
        }
    }
}

/// Positions of `tree`'s leaves in `order`, indexed by node id; errors unless
/// `order` is a permutation of the leaf labels.
fn leaf_positions(tree: &Tree, order: &[String]) -> Result<Vec<usize>, LayoutError> {
    if order.len() != tree.n_leaves() {
        return Err(LayoutError::NotAPermutation(format!(
            "expected {} labels, got {}",
            tree.n_leaves(),
            order.len()
        )));
    }
    let mut pos = vec![usize::MAX; tree.num_nodes()];
    for (i, label) in order.iter().enumerate() {
        let v = tree
            .leaf_by_label(label)
            .ok_or_else(|| LayoutError::NotAPermutation(format!("unknown label {label:?}")))?;
        if pos[v as usize] != usize::MAX {
            return Err(LayoutError::NotAPermutation(format!(
                "label {label:?} repeated"
            )));
        }
        pos[v as usize] = i;
    }
    Ok(pos)
}

/// True iff every subtree's leaves occupy a contiguous block of `order`.
pub fn is_consistent(tree: &Tree, order: &[String]) -> Result<bool, LayoutError> {
    let pos = leaf_positions(tree, order)?;
    // Bottom-up (min, max, count) per node; contiguous iff the range is full.
    let n = tree.num_nodes();
    let mut lo = vec![usize::MAX; n];
    let mut hi = vec![0usize; n];
    let mut cnt = vec![0usize; n];
    let mut bfs = vec![tree.root()];
    let mut i = 0;
    while i < bfs.len() {
        let v = bfs[i];
        i += 1;
        bfs.extend(tree.children(v));
    }
    for &v in bfs.iter().rev() {
        let vi = v as usize;
        if tree.is_leaf(v) {
            lo[vi] = pos[vi];
            hi[vi] = pos[vi];
            cnt[vi] = 1;
        } else {
            for c in tree.children(v) {
                let ci = c as usize;
                lo[vi] = lo[vi].min(lo[ci]);
                hi[vi] = hi[vi].max(hi[ci]);
                cnt[vi] += cnt[ci];
            }
            if hi[vi] - lo[vi] + 1 != cnt[vi] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn count_inversions(a: &mut [usize], buf: &mut [usize]) -> usize {
    let n = a.len();
    if n <= 1 {
        return 0;
    }
    let mid = n / 2;
    let (l, r) = a.split_at_mut(mid);
    let mut inv = count_inversions(l, buf) + count_inversions(r, buf);
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < l.len() && j < r.len() {
        if l[i] <= r[j] {
            buf[k] = l[i];
            i += 1;
        } else {
            inv += l.len() - i;
            buf[k] = r[j];
            j += 1;
        }
        k += 1;
    }
    buf[k..k + l.len() - i].copy_from_slice(&l[i..]);
    buf[k + l.len() - i..n].copy_from_slice(&r[j..]);
    a.copy_from_slice(&buf[..n]);
    inv
}

/// Number of matching-edge pairs drawn crossing under `rep`: pairs whose left
/// endpoints and right endpoints compare in opposite directions.
pub fn crossing_count(tg: &Tanglegram, rep: &LayoutRep) -> Result<usize, LayoutError> {
    let lpos = leaf_positions(tg.left(), &rep.left_order)?;
    let rpos = leaf_positions(tg.right(), &rep.right_order)?;
    let mut edges: Vec<(usize, usize)> = tg
        .edges()
        .iter()
        .map(|&(l, r)| (lpos[l as usize], rpos[r as usize]))
        .collect();
    edges.sort_unstable();
    let mut seq: Vec<usize> = edges.into_iter().map(|(_, r)| r).collect();
    let mut buf = vec![0usize; seq.len()];
    Ok(count_inversions(&mut seq, &mut buf))
}

/// All crossing matching-edge pairs under `rep`, each as an id pair `(a, b)`
/// with `a < b`, in lexicographic order.
pub fn crossing_pairs(tg: &Tanglegram, rep: &LayoutRep) -> Result<Vec<(EdgeId, EdgeId)>, LayoutError> {
    let lpos = leaf_positions(tg.left(), &rep.left_order)?;
    let rpos = leaf_positions(tg.right(), &rep.right_order)?;
    let n = tg.size();
    let mut out = Vec::new();
    for a in 0..n {
        let (la, ra) = tg.edges()[a];
        for b in a + 1..n {
            let (lb, rb) = tg.edges()[b];
            let lcmp = lpos[la as usize] < lpos[lb as usize];
            let rcmp = rpos[ra as usize] < rpos[rb as usize];
            if lcmp != rcmp {
                out.push((a, b));
            }
        }
    }
    Ok(out)
}

/// Per-pair geometry shared by the one-sided minimization and the exact
/// search: where a pair of matching edges meets on each side, and which edge
/// comes first under each tree's stored child order.
struct PairInfo {
    a: EdgeId,
    b: EdgeId,
    lmeet: NodeId,
    rmeet: NodeId,
    a_first_left: bool,
    a_first_right: bool,
}

/// Whether the subtree of `meet` containing `leaf` is the first stored child.
fn under_first_child(tree: &Tree, meet: NodeId, leaf: NodeId) -> bool {
    let mut cur = leaf;
    loop {
        let p = tree.parent(cur).expect("meet is an ancestor of leaf");
        if p == meet {
            return tree.child_pair(meet)[0] == cur;
        }
        cur = p;
    }
}

fn pair_infos(tg: &Tanglegram) -> Vec<PairInfo> {
    let n = tg.size();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n {
        let (la, ra) = tg.edges()[a];
        for b in a + 1..n {
            let (lb, rb) = tg.edges()[b];
            let lmeet = tg.left().meet(la, lb).unwrap();
            let rmeet = tg.right().meet(ra, rb).unwrap();
            out.push(PairInfo {
                a,
                b,
                lmeet,
                rmeet,
                a_first_left: under_first_child(tg.left(), lmeet, la),
                a_first_right: under_first_child(tg.right(), rmeet, ra),
            });
        }
    }
    out
}

/// Leaf order realized by flipping the stored child order at flagged nodes.
fn order_with_flips(tree: &Tree, flips: &[bool]) -> Vec<String> {
    let mut out = Vec::with_capacity(tree.n_leaves());
    let mut stack = vec![tree.root()];
    while let Some(v) = stack.pop() {
        if tree.is_leaf(v) {
            out.push(tree.label(v).to_string());
            continue;
        }
        let mut ch: Vec<NodeId> = tree.children(v).collect();
        if flips[v as usize] {
            ch.reverse();
        }
        for c in ch.into_iter().rev() {
            stack.push(c);
        }
    }
    out
}

/// Best completion on the right for a fully decided left side: per right
/// node, keep or flip the child order, whichever crosses fewer of the pairs
/// meeting there (ties keep the stored order). Returns (right flips by node
/// id, total crossings).
fn best_right_completion(
    tg: &Tanglegram,
    infos: &[PairInfo],
    left_before: impl Fn(&PairInfo) -> bool,
) -> (Vec<bool>, usize) {
    let rn = tg.right().num_nodes();
    let mut c0 = vec![0usize; rn];
    let mut c1 = vec![0usize; rn];
    for p in infos {
        let crosses_natural = left_before(p) != p.a_first_right;
        if crosses_natural {
            c0[p.rmeet as usize] += 1;
        } else {
            c1[p.rmeet as usize] += 1;
        }
    }
    let mut flips = vec![false; rn];
    let mut total = 0;
    for v in 0..rn {
        flips[v] = c1[v] < c0[v];
        total += c0[v].min(c1[v]);
    }
    (flips, total)
}

/// Minimizes crossings over right orders with the left order fixed; exact.
/// Returns the optimal right order and its crossing count.
pub fn optimize_one_side(
    tg: &Tanglegram,
    fixed_left: &[String],
) -> Result<(Vec<String>, usize), LayoutError> {
    if !is_consistent(tg.left(), fixed_left)? {
        return Err(LayoutError::InconsistentOrder { side: "left" });
    }
    let lpos = leaf_positions(tg.left(), fixed_left)?;
    let infos = pair_infos(tg);
    let (flips, total) = best_right_completion(tg, &infos, |p| {
        lpos[tg.edges()[p.a].0 as usize] < lpos[tg.edges()[p.b].0 as usize]
    });
    Ok((order_with_flips(tg.right(), &flips), total))
}

struct Search<'a> {
    tg: &'a Tanglegram,
    /// Left internal nodes in breadth-first order; index 0 is the topmost
    /// branching vertex, whose orientation is pinned.
    internal: Vec<NodeId>,
    /// Pair indices grouped by the search-order position of their left meet.
    pairs_at: Vec<Vec<usize>>,
    infos: Vec<PairInfo>,
    flips: Vec<bool>,
    c0: Vec<usize>,
    c1: Vec<usize>,
    lb: usize,
    best: usize,
    best_witness: Option<(Vec<bool>, Vec<bool>)>,
    explored: u64,
    budget: Option<u64>,
    truncated: bool,
}

impl<'a> Search<'a> {
    fn new(tg: &'a Tanglegram, budget: Option<u64>) -> Self {
        let infos = pair_infos(tg);
        let mut internal: Vec<NodeId> = Vec::new();
        let mut bfs = vec![tg.left().root()];
        let mut i = 0;
        while i < bfs.len() {
            let v = bfs[i];
            i += 1;
            if !tg.left().is_leaf(v) && v != tg.left().root() {
                internal.push(v);
            }
            bfs.extend(tg.left().children(v));
        }
        let slot: HashMap<NodeId, usize> =
            internal.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut pairs_at = vec![Vec::new(); internal.len()];
        for (pi, p) in infos.iter().enumerate() {
            pairs_at[slot[&p.lmeet]].push(pi);
        }
        Search {
            tg,
            internal,
            pairs_at,
            infos,
            flips: vec![false; tg.left().num_nodes()],
            c0: vec![0; tg.right().num_nodes()],
            c1: vec![0; tg.right().num_nodes()],
            lb: 0,
            best: usize::MAX,
            best_witness: None,
            explored: 0,
            budget: None,
            truncated: false,
        }
        .with_budget(budget)
    }

    fn with_budget(mut self, budget: Option<u64>) -> Self {
        self.budget = budget;
        self
    }

    fn pair_crosses_natural(&self, pi: usize, bit: bool) -> bool {
        let p = &self.infos[pi];
        (p.a_first_left != bit) != p.a_first_right
    }

    /// Applies the orientation `bit` at search position `uidx`, folding each
    /// newly decided pair into the per-right-node tallies and the bound.
    fn apply(&mut self, uidx: usize, bit: bool) {
        self.flips[self.internal[uidx] as usize] = bit;
        for i in 0..self.pairs_at[uidx].len() {
            let pi = self.pairs_at[uidx][i];
            let w = self.infos[pi].rmeet as usize;
            self.lb -= self.c0[w].min(self.c1[w]);
            if self.pair_crosses_natural(pi, bit) {
                self.c0[w] += 1;
            } else {
                self.c1[w] += 1;
            }
            self.lb += self.c0[w].min(self.c1[w]);
        }
    }

    fn undo(&mut self, uidx: usize, bit: bool) {
        for i in 0..self.pairs_at[uidx].len() {
            let pi = self.pairs_at[uidx][i];
            let w = self.infos[pi].rmeet as usize;
            self.lb -= self.c0[w].min(self.c1[w]);
            if self.pair_crosses_natural(pi, bit) {
                self.c0[w] -= 1;
            } else {
                self.c1[w] -= 1;
            }
            self.lb += self.c0[w].min(self.c1[w]);
        }
        self.flips[self.internal[uidx] as usize] = false;
    }

    fn record_if_better(&mut self) {
        if self.lb < self.best {
            self.best = self.lb;
            let rflips: Vec<bool> = (0..self.c0.len()).map(|v| self.c1[v] < self.c0[v]).collect();
            self.best_witness = Some((self.flips.clone(), rflips));
        }
    }

    /// Seeds the search with the all-natural assignment so truncated runs
    /// still return a witness.
    fn preseed(&mut self) {
        for uidx in 0..self.internal.len() {
            self.apply(uidx, false);
        }
        self.record_if_better();
        for uidx in (0..self.internal.len()).rev() {
            self.undo(uidx, false);
        }
    }

    fn dfs(&mut self, uidx: usize) {
        if self.best == 0 || self.truncated {
            return;
        }
        if uidx == self.internal.len() {
            self.record_if_better();
            return;
        }
        // The topmost decision is pinned: flipping every node mirrors the
        // whole left order and never changes the optimum.
        let bits: &[bool] = if uidx == 0 { &[false] } else { &[false, true] };
        for &bit in bits {
            if let Some(b) = self.budget {
                if self.explored >= b {
                    self.truncated = true;
                    return;
                }
            }
            self.explored += 1;
            self.apply(uidx, bit);
            if self.lb < self.best {
                self.dfs(uidx + 1);
            }
            self.undo(uidx, bit);
            if self.truncated {
                return;
            }
        }
    }

    fn witness_layout(&self) -> Option<LayoutRep> {
        let (lf, rf) = self.best_witness.as_ref()?;
        Some(LayoutRep {
            left_order: order_with_flips(self.tg.left(), lf),
            right_order: order_with_flips(self.tg.right(), rf),
        })
    }
}

/// Depth-weighted fanout: the side-swap heuristic's balance measure.
fn depth_weighted_fanout(t: &Tree) -> u64 {
    t.internal_nodes()
        .map(|v| t.depth(v) as u64 * t.leaf_descendants(v).len() as u64)
        .sum()
}

/// Exact tangle crossing number with default options (budget 10^7 search
/// nodes, size cap 18).
pub fn exact_crt(tg: &Tanglegram) -> Result<CrtResult, LayoutError> {
    exact_crt_with(tg, &CrtOptions::default())
}

/// Exact tangle crossing number: enumerates left-tree child orders with
/// branch and bound, completing each with the per-node right-side minimum.
pub fn exact_crt_with(tg: &Tanglegram, opts: &CrtOptions) -> Result<CrtResult, LayoutError> {
    let n = tg.size();
    if n > opts.size_cap {
        return Err(LayoutError::SizeOverCap {
            n,
            cap: opts.size_cap,
        });
    }
    // Enumerate the side whose decisions the bound feels earlier; the swap
    // changes performance only, never the value.
    if depth_weighted_fanout(tg.right()) < depth_weighted_fanout(tg.left()) {
        let mirrored = tg.mirror();
        let r = solve(&mirrored, opts.budget);
        return Ok(CrtResult {
            value: r.value,
            witness: LayoutRep {
                left_order: r.witness.right_order,
                right_order: r.witness.left_order,
            },
            explored: r.explored,
            optimal: r.optimal,
        });
    }
    Ok(solve(tg, opts.budget))
}

fn solve(tg: &Tanglegram, budget: Option<u64>) -> CrtResult {
    let mut s = Search::new(tg, budget);
    s.preseed();
    s.dfs(0);
    CrtResult {
        value: s.best,
        witness: s.witness_layout().expect("preseed always records a witness"),
        explored: s.explored,
        optimal: !s.truncated,
    }
}

/// A zero-crossing layout if one exists. Runs the exact search with the bound
/// capped at 1, so every branch that already forces a crossing is pruned.
pub fn planar_layout(tg: &Tanglegram) -> Option<LayoutRep> {
    let mut s = Search::new(tg, None);
    s.preseed();
    if s.best > 0 {
        // Only strictly better than 1 (= planar) is of interest.
        s.best = 1;
        s.best_witness = None;
        s.dfs(0);
    }
    if s.best == 0 {
        s.witness_layout()
    } else {
        None
    }
}

/// Restricts a layout to the endpoints of a matching subset; subsequences of
/// consistent orders stay consistent with the induced trees.
pub fn restrict_layout(
    tg: &Tanglegram,
    rep: &LayoutRep,
    z: &[EdgeId],
) -> Result<LayoutRep, LayoutError> {
    leaf_positions(tg.left(), &rep.left_order)?;
    leaf_positions(tg.right(), &rep.right_order)?;
    let mut keep_left = vec![false; tg.left().num_nodes()];
    let mut keep_right = vec![false; tg.right().num_nodes()];
    for &e in z {
        let (l, r) = tg.edge(e).map_err(|_| LayoutError::UnknownEdge(e))?;
        keep_left[l as usize] = true;
        keep_right[r as usize] = true;
    }
    let filter = |tree: &Tree, order: &[String], keep: &[bool]| {
        order
            .iter()
            .filter(|l| keep[tree.leaf_by_label(l).unwrap() as usize])
            .cloned()
            .collect()
    };
    Ok(LayoutRep {
        left_order: filter(tg.left(), &rep.left_order, &keep_left),
        right_order: filter(tg.right(), &rep.right_order, &keep_right),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{build_family, Family};

    fn quadratic_inversions(seq: &[usize]) -> usize {
        let mut c = 0;
        for i in 0..seq.len() {
            for j in i + 1..seq.len() {
                if seq[i] > seq[j] {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn inversion_counter_matches_quadratic_reference() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = 1 + (rng.gen_range(0..30u64) as usize);
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = rng.gen_range(0..=(i as u64)) as usize;
                perm.swap(i, j);
            }
            let expect = quadratic_inversions(&perm);
            let mut buf = vec![0; n];
            let mut work = perm.clone();
            assert_eq!(count_inversions(&mut work, &mut buf), expect);
        }
    }

    #[test]
    fn cherry_split_is_inconsistent_and_cherry_swap_is_consistent() {
        let k1 = build_family(Family::K1, 0).unwrap();
        let t = k1.left();
        let ord = |s: &[&str]| s.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        assert!(!is_consistent(t, &ord(&["l1", "l3", "l2", "l4"])).unwrap());
        assert!(is_consistent(t, &ord(&["l2", "l1", "l4", "l3"])).unwrap());
        assert!(is_consistent(t, &ord(&["l1", "l2", "l3", "l4"])).unwrap());
        assert!(matches!(
            is_consistent(t, &ord(&["l1", "l2", "l3", "l3"])),
            Err(LayoutError::NotAPermutation(_))
        ));
    }

    #[test]
    fn one_sided_minimum_for_the_balanced_fixture_is_one() {
        let k1 = build_family(Family::K1, 0).unwrap();
        let fixed: Vec<String> = ["l1", "l2", "l3", "l4"].map(String::from).to_vec();
        let (right, count) = optimize_one_side(&k1, &fixed).unwrap();
        assert_eq!(count, 1);
        let rep = LayoutRep {
            left_order: fixed,
            right_order: right,
        };
        assert_eq!(crossing_count(&k1, &rep).unwrap(), 1);
        assert!(rep.is_layout_of(&k1).unwrap());
    }

    #[test]
    fn one_sided_tie_keeps_the_stored_child_order() {
        use crate::model::{Tanglegram, Tree, TreeSpec};
        let left = Tree::from_spec(&TreeSpec::branch(
            TreeSpec::branch(TreeSpec::leaf("a"), TreeSpec::leaf("b")),
            TreeSpec::branch(TreeSpec::leaf("c"), TreeSpec::leaf("d")),
        ))
        .unwrap();
        let right = Tree::from_spec(&TreeSpec::branch(
            TreeSpec::branch(TreeSpec::leaf("p"), TreeSpec::leaf("q")),
            TreeSpec::branch(TreeSpec::leaf("r"), TreeSpec::leaf("s")),
        ))
        .unwrap();
        let pairs = [("a", "p"), ("d", "q"), ("b", "r"), ("c", "s")]
            .map(|(x, y)| (x.to_string(), y.to_string()));
        let tg = Tanglegram::new(left, right, &pairs).unwrap();
        let fixed: Vec<String> = ["a", "b", "c", "d"].map(String::from).to_vec();
        // At the right root both block orders force 2 crossings; the stored
        // order must win the tie.
        let (right_order, count) = optimize_one_side(&tg, &fixed).unwrap();
        assert_eq!(count, 2);
        assert_eq!(right_order, ["p", "q", "r", "s"].map(String::from).to_vec());
    }

    #[test]
    fn inconsistent_fixed_left_is_rejected() {
        let k1 = build_family(Family::K1, 0).unwrap();
        let fixed: Vec<String> = ["l1", "l3", "l2", "l4"].map(String::from).to_vec();
        assert!(matches!(
            optimize_one_side(&k1, &fixed),
            Err(LayoutError::InconsistentOrder { side: "left" })
        ));
    }

    #[test]
    fn crossing_numbers_of_the_critical_fixtures_are_one() {
        for fam in [Family::K1, Family::K2] {
            let tg = build_family(fam, 0).unwrap();
            let r = exact_crt(&tg).unwrap();
            assert_eq!(r.value, 1);
            assert!(r.optimal);
            assert_eq!(crossing_count(&tg, &r.witness).unwrap(), 1);
            assert!(r.witness.is_layout_of(&tg).unwrap());
            assert!(planar_layout(&tg).is_none());
        }
    }

    #[test]
    fn reversed_parallel_edges_cross_in_all_pairs() {
        use crate::model::{Tanglegram, Tree, TreeSpec};
        let n = 6;
        let labels = |p: &str| (1..=n).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
        fn cat(ls: &[String]) -> TreeSpec {
            if ls.len() == 1 {
                TreeSpec::leaf(ls[0].clone())
            } else {
                TreeSpec::branch(TreeSpec::leaf(ls[0].clone()), cat(&ls[1..]))
            }
        }
        let l = labels("l");
        let r = labels("r");
        let left = Tree::from_spec(&cat(&l)).unwrap();
        let right = Tree::from_spec(&cat(&r)).unwrap();
        let pairs: Vec<(String, String)> =
            (0..n).map(|i| (l[i].clone(), r[i].clone())).collect();
        let tg = Tanglegram::new(left, right, &pairs).unwrap();
        let aligned = LayoutRep {
            left_order: l.clone(),
            right_order: r.clone(),
        };
        assert_eq!(crossing_count(&tg, &aligned).unwrap(), 0);
        let reversed = LayoutRep {
            left_order: l.clone(),
            right_order: r.iter().rev().cloned().collect(),
        };
        assert_eq!(crossing_count(&tg, &reversed).unwrap(), n * (n - 1) / 2);
        assert_eq!(
            crossing_pairs(&tg, &reversed).unwrap().len(),
            n * (n - 1) / 2
        );
    }

    #[test]
    fn restriction_keeps_relative_order_and_planarity() {
        let k1 = build_family(Family::K1, 0).unwrap();
        let natural = LayoutRep::natural(&k1);
        let all = restrict_layout(&k1, &natural, &[0, 1, 2, 3]).unwrap();
        assert_eq!(all, natural);
        // The two straight edges of the balanced fixture form a planar pair.
        let sub = restrict_layout(&k1, &natural, &[0, 3]).unwrap();
        assert_eq!(sub.left_order, ["l1", "l4"].map(String::from).to_vec());
        assert_eq!(sub.right_order, ["r1", "r4"].map(String::from).to_vec());
        assert!(matches!(
            restrict_layout(&k1, &natural, &[9]),
            Err(LayoutError::UnknownEdge(9))
        ));
    }

    #[test]
    fn size_cap_is_enforced_and_adjustable() {
        let tg = crate::gen::random_tanglegram(19, 5).unwrap();
        assert!(matches!(
            exact_crt(&tg),
            Err(LayoutError::SizeOverCap { n: 19, cap: 18 })
        ));
        let opts = CrtOptions {
            budget: Some(1),
            size_cap: 32,
        };
        let r = exact_crt_with(&tg, &opts).unwrap();
        assert!(!r.optimal);
        assert_eq!(crossing_count(&tg, &r.witness).unwrap(), r.value);
    }
}
