//! Tanglegram generation: seeded random instances, exhaustive small-size
//! enumeration, and the named structured families.
//!
//! Random trees are grown by the leaf-insertion process: starting from a
//! single leaf under the root, each new leaf subdivides a uniformly random
//! edge (equivalently, a uniformly random non-root node is picked and a new
//! branching vertex is spliced in above it). The matching is a uniform random
//! bijection via Fisher-Yates. All randomness comes from ChaCha8 seeded with
//! the caller's 64-bit seed, and every sample is drawn as a `u64`, so output
//! is identical across platforms and reruns.
//!
//! Enumeration lists every (left shape, right shape, matching permutation)
//! triple exactly once: shapes are the unordered rooted binary tree shapes
//! (1, 1, 1, 2, 3, 6 of them for 1..=6 leaves), and permutations run in
//! lexicographic order, so the stream order is deterministic and indexable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{ModelError, Tanglegram, Tree, TreeSpec, NO_NODE};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("tanglegram size must be at least 1")]
    SizeZero,
    #[error("enumeration supports sizes up to {max}, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("block size must be at least 1 for this family")]
    BadBlockSize,
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Largest size [`enumerate_tanglegrams`] accepts.
pub const ENUMERATION_MAX: usize = 6;

fn label_run(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Grows a random tree over `labels` by uniform leaf insertion.
fn random_tree(labels: &[String], rng: &mut ChaCha8Rng) -> Tree {
    let n = labels.len();
    let mut parent = vec![NO_NODE, 0];
    let mut children = vec![[1, NO_NODE], [NO_NODE; 2]];
    let mut tlabels = vec![String::new(), labels[0].clone()];
    for label in &labels[1..n] {
        // Uniform non-root node = uniform edge (each edge is keyed by its
        // lower endpoint).
        let v = 1 + (rng.gen_range(0..(parent.len() as u64 - 1)) as usize);
        let b = parent.len();
        let f = b + 1;
        let p = parent[v] as usize;
        let slot = if children[p][0] == v as u32 { 0 } else { 1 };
        children[p][slot] = b as u32;
        parent.push(parent[v]);
        children.push([v as u32, f as u32]);
        tlabels.push(String::new());
        parent[v] = b as u32;
        parent.push(b as u32);
        children.push([NO_NODE; 2]);
        tlabels.push(label.clone());
    }
    Tree::from_arrays(parent, children, tlabels).expect("leaf insertion keeps the tree valid")
}

/// Generates a random tanglegram of size `n`, deterministically per seed.
///
/// Both tree shapes come from the uniform leaf-insertion process and the
/// matching is a uniform bijection. Left leaves are labeled `l1..ln`, right
/// leaves `r1..rn`; matching edge `i` joins `l(i+1)` to its random partner.
pub fn random_tanglegram(n: usize, seed: u64) -> Result<Tanglegram, GenError> {
    if n == 0 {
        return Err(GenError::SizeZero);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let left_labels = label_run("l", n);
    let right_labels = label_run("r", n);
    let left = random_tree(&left_labels, &mut rng);
    let right = random_tree(&right_labels, &mut rng);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=(i as u64)) as usize;
        perm.swap(i, j);
    }
    let pairs: Vec<(String, String)> = (0..n)
        .map(|i| (left_labels[i].clone(), right_labels[perm[i]].clone()))
        .collect();
    Ok(Tanglegram::new(left, right, &pairs)?)
}

/// Unordered rooted binary tree shape (labels not yet assigned).
#[derive(Debug, Clone, PartialEq, Eq)]
enum RawShape {
    Leaf,
    Branch(Box<RawShape>, Box<RawShape>),
}

impl RawShape {
    fn code(&self) -> String {
        match self {
            RawShape::Leaf => "x".into(),
            RawShape::Branch(a, b) => {
                let (ca, cb) = (a.code(), b.code());
                let (lo, hi) = if ca <= cb { (ca, cb) } else { (cb, ca) };
                format!("({lo}{hi})")
            }
        }
    }

    /// Assigns `labels` to leaves in depth-first order.
    fn to_spec(&self, labels: &[String]) -> TreeSpec {
        fn go(s: &RawShape, labels: &[String], next: &mut usize) -> TreeSpec {
            match s {
                RawShape::Leaf => {
                    let l = labels[*next].clone();
                    *next += 1;
                    TreeSpec::Leaf(l)
                }
                RawShape::Branch(a, b) => {
                    let sa = go(a, labels, next);
                    let sb = go(b, labels, next);
                    TreeSpec::branch(sa, sb)
                }
            }
        }
        let mut next = 0;
        go(self, labels, &mut next)
    }
}

/// All unordered shapes with `n` leaves, deduplicated by canonical code.
fn shapes(n: usize) -> Vec<RawShape> {
    let mut by_size: Vec<Vec<RawShape>> = vec![Vec::new(), vec![RawShape::Leaf]];
    for k in 2..=n {
        let mut out: Vec<RawShape> = Vec::new();
        let mut seen: Vec<String> = Vec::new();
        for i in 1..k {
            for a in by_size[i].clone() {
                for b in &by_size[k - i] {
                    let s = RawShape::Branch(Box::new(a.clone()), Box::new(b.clone()));
                    let c = s.code();
                    if !seen.contains(&c) {
                        seen.push(c);
                        out.push(s);
                    }
                }
            }
        }
        by_size.push(out);
    }
    by_size.swap_remove(n)
}

/// Lazy, index-addressable stream of all size-`n` tanglegrams: one per
/// (left shape, right shape, matching permutation) triple.
#[derive(Debug, Clone)]
pub struct TanglegramEnumeration {
    n: usize,
    shapes: Vec<RawShape>,
    perms: Vec<Vec<usize>>,
}

impl TanglegramEnumeration {
    /// Total number of triples: `shapes(n)^2 * n!`.
    pub fn len(&self) -> usize {
        self.shapes.len() * self.shapes.len() * self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Builds the tanglegram at stream position `index`.
    pub fn get(&self, index: usize) -> Option<Tanglegram> {
        if index >= self.len() {
            return None;
        }
        let nf = self.perms.len();
        let ns = self.shapes.len();
        let perm = &self.perms[index % nf];
        let rs = &self.shapes[(index / nf) % ns];
        let ls = &self.shapes[index / (nf * ns)];
        let left_labels = label_run("l", self.n);
        let right_labels = label_run("r", self.n);
        let left = Tree::from_spec(&ls.to_spec(&left_labels)).unwrap();
        let right = Tree::from_spec(&rs.to_spec(&right_labels)).unwrap();
        let pairs: Vec<(String, String)> = (0..self.n)
            .map(|i| (left_labels[i].clone(), right_labels[perm[i]].clone()))
            .collect();
        Some(Tanglegram::new(left, right, &pairs).unwrap())
    }

    pub fn iter(&self) -> impl Iterator<Item = Tanglegram> + '_ {
        (0..self.len()).map(|i| self.get(i).unwrap())
    }
}

/// Enumerates every size-`n` tanglegram as a restartable stream; `n` is
/// capped at [`ENUMERATION_MAX`]. Isomorphic triples are not deduplicated.
pub fn enumerate_tanglegrams(n: usize) -> Result<TanglegramEnumeration, GenError> {
    if n == 0 {
        return Err(GenError::SizeZero);
    }
    if n > ENUMERATION_MAX {
        return Err(GenError::TooLarge {
            n,
            max: ENUMERATION_MAX,
        });
    }
    let shapes = shapes(n);
    let mut perms = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        perms.push(cur.clone());
        // Classic lexicographic successor; stops after the last permutation.
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    Ok(TanglegramEnumeration { n, shapes, perms })
}

/// The named structured families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Size-4 pair of balanced trees with the two middle edges swapped; the
    /// smaller of the two 1-crossing-critical tanglegrams.
    K1,
    /// Size-4 pair of caterpillars matched outer-to-inner; the other
    /// 1-crossing-critical tanglegram.
    K2,
    /// A K1 block stacked above a planar caterpillar block of size `m`;
    /// exactly one cross-responsible set, `m + 1` subdivided K33s in the
    /// associated graph.
    T1,
    /// Four caterpillar blocks of size `m` per side, wired like K1 at block
    /// level; tangle crossing number `m^2`.
    T2,
}

impl std::str::FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "K1" => Ok(Family::K1),
            "K2" => Ok(Family::K2),
            "T1" => Ok(Family::T1),
            "T2" => Ok(Family::T2),
            _ => Err(GenError::UnknownFamily(s.to_string())),
        }
    }
}

/// Caterpillar over `labels`: each internal vertex has a leaf first child,
/// except the deepest which has two leaves.
fn caterpillar(labels: &[String]) -> TreeSpec {
    if labels.len() == 1 {
        return TreeSpec::leaf(labels[0].clone());
    }
    TreeSpec::branch(
        TreeSpec::leaf(labels[0].clone()),
        caterpillar(&labels[1..]),
    )
}

fn balanced4(labels: &[String]) -> TreeSpec {
    TreeSpec::branch(
        TreeSpec::branch(
            TreeSpec::leaf(labels[0].clone()),
            TreeSpec::leaf(labels[1].clone()),
        ),
        TreeSpec::branch(
            TreeSpec::leaf(labels[2].clone()),
            TreeSpec::leaf(labels[3].clone()),
        ),
    )
}

/// Builds a named family fixture. `m` is the block size for T1/T2 and is
/// ignored for K1/K2.
pub fn build_family(family: Family, m: usize) -> Result<Tanglegram, GenError> {
    match family {
        Family::K1 => {
            let l = label_run("l", 4);
            let r = label_run("r", 4);
            let left = Tree::from_spec(&balanced4(&l))?;
            let right = Tree::from_spec(&balanced4(&r))?;
            let pairs = [(0, 0), (1, 2), (2, 1), (3, 3)]
                .map(|(a, b)| (l[a].clone(), r[b].clone()));
            Ok(Tanglegram::new(left, right, &pairs)?)
        }
        Family::K2 => {
            let l = label_run("l", 4);
            let r = label_run("r", 4);
            let left = Tree::from_spec(&caterpillar(&l))?;
            let right = Tree::from_spec(&caterpillar(&r))?;
            let pairs = [(0, 3), (1, 1), (2, 2), (3, 0)]
                .map(|(a, b)| (l[a].clone(), r[b].clone()));
            Ok(Tanglegram::new(left, right, &pairs)?)
        }
        Family::T1 => {
            if m == 0 {
                return Err(GenError::BadBlockSize);
            }
            let l = label_run("l", 4 + m);
            let r = label_run("r", 4 + m);
            let left = Tree::from_spec(&TreeSpec::branch(
                balanced4(&l[..4]),
                caterpillar(&l[4..]),
            ))?;
            let right = Tree::from_spec(&TreeSpec::branch(
                balanced4(&r[..4]),
                caterpillar(&r[4..]),
            ))?;
            let mut pairs: Vec<(String, String)> = [(0, 0), (1, 2), (2, 1), (3, 3)]
                .map(|(a, b)| (l[a].clone(), r[b].clone()))
                .to_vec();
            for i in 4..4 + m {
                pairs.push((l[i].clone(), r[i].clone()));
            }
            Ok(Tanglegram::new(left, right, &pairs)?)
        }
        Family::T2 => {
            if m == 0 {
                return Err(GenError::BadBlockSize);
            }
            let l = label_run("l", 4 * m);
            let r = label_run("r", 4 * m);
            let block =
                |ls: &[String], i: usize| caterpillar(&ls[(i - 1) * m..i * m]);
            let side = |ls: &[String]| {
                TreeSpec::branch(
                    TreeSpec::branch(block(ls, 1), block(ls, 2)),
                    TreeSpec::branch(block(ls, 3), block(ls, 4)),
                )
            };
            let left = Tree::from_spec(&side(&l))?;
            let right = Tree::from_spec(&side(&r))?;
            // Left block i pairs with right block wire[i-1], identically
            // within the block: the K1 pattern at block level.
            let wire = [1usize, 3, 2, 4];
            let mut pairs = Vec::with_capacity(4 * m);
            for i in 1..=4 {
                for j in 0..m {
                    pairs.push((
                        l[(i - 1) * m + j].clone(),
                        r[(wire[i - 1] - 1) * m + j].clone(),
                    ));
                }
            }
            Ok(Tanglegram::new(left, right, &pairs)?)
        }
    }
}
