//! Builds a certified one-crossing layout for a tanglegram whose matching
//! carries exactly one cross-responsible set.
//!
//! The construction removes one edge of the critical copy (plus, in one
//! subcase, the bundle of outside edges scarring a middle leaf edge), lays
//! the reduced tanglegram out without crossings, flips it into a normal
//! orientation, and splices the removed leaves back between fixed anchors.
//! Exactly one crossing remains, between a pair of edges known in advance;
//! the certificate is re-verified against the full tanglegram before it is
//! returned.

use std::fmt;

use thiserror::Error;

use crate::detect::{
    cross_responsible_sets, scar_type, validate_obstruction_lemmas, CrossResponsibleSet,
    DetectError, Kind,
};
use crate::layout::{crossing_pairs, planar_layout, LayoutError, LayoutRep};
use crate::model::{induce_subtanglegram, EdgeId, ModelError, Tanglegram};

/// Errors from one-crossing certificate construction.
#[derive(Debug, Error)]
pub enum ConstructError {
    /// The tanglegram does not carry exactly one cross-responsible set.
    #[error("expected exactly one cross-responsible set, found {count}")]
    NotUnique { count: usize },
    /// An outside edge breaks a structural rule the construction relies on;
    /// `rule` names the failed check.
    #[error("structural rule {rule} violated: {detail}")]
    RuleViolated { rule: &'static str, detail: String },
    /// Splice anchors are not adjacent in the base sequence.
    #[error("anchors {after} and {before} are not adjacent")]
    NonAdjacentAnchors { after: String, before: String },
    /// A step contradicted a property the construction guarantees; reaching
    /// this is a bug.
    #[error("internal construction step failed: {0}")]
    StepFailed(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Detect(#[from] DetectError),
}

/// Which construction branch produced a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructCase {
    /// Balanced copy: one cherry leaf reinserted per side.
    K1,
    /// Caterpillar copy with no middle-scarred outside edges.
    K2MEmpty,
    /// Caterpillar copy whose middle bundle scars the left middle leaf edge.
    K2MOnD1,
    /// Caterpillar copy whose middle bundle scars the right middle leaf edge.
    K2MOnD2,
}

impl fmt::Display for ConstructCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstructCase::K1 => "K1",
            ConstructCase::K2MEmpty => "K2-M-empty",
            ConstructCase::K2MOnD1 => "K2-M-on-d1",
            ConstructCase::K2MOnD2 => "K2-M-on-d2",
        })
    }
}

/// A layout with exactly one crossing, the pair of matching edges that
/// cross, the construction branch taken, and the splice steps performed.
#[derive(Debug, Clone)]
pub struct OneCrossCertificate {
    pub layout: LayoutRep,
    pub crossing_pair: (EdgeId, EdgeId),
    pub case: ConstructCase,
    pub trace: Vec<String>,
}

fn position(base: &[String], label: &str) -> Result<usize, ConstructError> {
    base.iter()
        .position(|l| l == label)
        .ok_or_else(|| ConstructError::StepFailed(format!("label {label} missing from order")))
}

fn adjacent_gap(base: &[String], after: &str, before: &str) -> Result<usize, ConstructError> {
    let a = position(base, after)?;
    let b = position(base, before)?;
    if b != a + 1 {
        return Err(ConstructError::NonAdjacentAnchors {
            after: after.to_string(),
            before: before.to_string(),
        });
    }
    Ok(b)
}

/// Inserts `new_leaf` between the anchors `after` and `before`, which must
/// be adjacent in `base`.
pub fn insert_leaf_order(
    base: &[String],
    new_leaf: &str,
    after: &str,
    before: &str,
) -> Result<Vec<String>, ConstructError> {
    let gap = adjacent_gap(base, after, before)?;
    let mut out = base.to_vec();
    out.insert(gap, new_leaf.to_string());
    Ok(out)
}

/// Splices a whole segment into the gap between the adjacent anchors
/// `after` and `before`.
pub fn insert_segment_order(
    base: &[String],
    segment: &[String],
    after: &str,
    before: &str,
) -> Result<Vec<String>, ConstructError> {
    let gap = adjacent_gap(base, after, before)?;
    let mut out = base.to_vec();
    out.splice(gap..gap, segment.iter().cloned());
    Ok(out)
}

fn ordered(a: EdgeId, b: EdgeId) -> (EdgeId, EdgeId) {
    (a.min(b), a.max(b))
}

/// Flips both orders top to bottom unless `later` already sits below
/// `earlier` in the left order.
fn align(
    d: &mut LayoutRep,
    later: &str,
    earlier: &str,
    trace: &mut Vec<String>,
) -> Result<(), ConstructError> {
    if position(&d.left_order, later)? < position(&d.left_order, earlier)? {
        d.left_order.reverse();
        d.right_order.reverse();
        trace.push("flipped the crossing-free layout top to bottom".into());
    }
    Ok(())
}

/// Checks that `labels` occur consecutively, in order, in `order`.
fn expect_run(order: &[String], labels: &[&str]) -> Result<(), ConstructError> {
    let start = position(order, labels[0])?;
    for (k, lab) in labels.iter().enumerate() {
        if order.get(start + k).map(String::as_str) != Some(*lab) {
            return Err(ConstructError::StepFailed(format!(
                "expected the run {labels:?} in a crossing-free layout, broken at {lab}"
            )));
        }
    }
    Ok(())
}

fn verify(
    tg: &Tanglegram,
    layout: &LayoutRep,
    pair: (EdgeId, EdgeId),
) -> Result<(), ConstructError> {
    if !layout.is_layout_of(tg)? {
        return Err(ConstructError::StepFailed(
            "final orders are not consistent leaf orders".into(),
        ));
    }
    let pairs = crossing_pairs(tg, layout)?;
    if pairs != [pair] {
        return Err(ConstructError::StepFailed(format!(
            "expected the single crossing {pair:?}, found {pairs:?}"
        )));
    }
    Ok(())
}

/// Builds a one-crossing layout for a tanglegram with exactly one
/// cross-responsible set. Inputs with zero sets are planar and refused, as
/// are inputs with two or more sets; both errors name the actual count.
pub fn one_crossing_layout(tg: &Tanglegram) -> Result<OneCrossCertificate, ConstructError> {
    let sets = cross_responsible_sets(tg);
    if sets.len() != 1 {
        return Err(ConstructError::NotUnique { count: sets.len() });
    }
    let x = &sets[0];
    if let Some(v) = validate_obstruction_lemmas(tg, x).into_iter().next() {
        return Err(ConstructError::RuleViolated {
            rule: v.rule,
            detail: v.detail,
        });
    }
    let mut trace = Vec::new();
    let (layout, pair, case) = match x.kind {
        Kind::K1 => balanced_case(tg, x, &mut trace)?,
        Kind::K2 => caterpillar_case(tg, x, &mut trace)?,
    };
    verify(tg, &layout, pair)?;
    Ok(OneCrossCertificate {
        layout,
        crossing_pair: pair,
        case,
        trace,
    })
}

type Built = (LayoutRep, (EdgeId, EdgeId), ConstructCase);

/// Balanced copy: drop the cherry edge `e1`, lay the rest out flat, flip so
/// `e2` sits below `e4`, then put `e1`'s leaves back beside their cherry
/// partners. The single crossing is `(e1, e3)`.
fn balanced_case(
    tg: &Tanglegram,
    x: &CrossResponsibleSet,
    trace: &mut Vec<String>,
) -> Result<Built, ConstructError> {
    let host = |role: &str| x.labeling.edge_with_role(role).expect("labeled role");
    let lam = |role: &str| {
        let (l, r) = tg.edge_labels(host(role));
        (l.to_string(), r.to_string())
    };
    let (l1, r1) = lam("e1");
    let (l2, r2) = lam("e2");
    let (l3, r3) = lam("e3");
    let (l4, r4) = lam("e4");
    let e1 = host("e1");
    let keep: Vec<EdgeId> = (0..tg.size()).filter(|&e| e != e1).collect();
    let sub = induce_subtanglegram(tg, &keep)?;
    let mut d = planar_layout(&sub).ok_or_else(|| {
        ConstructError::StepFailed("the reduced tanglegram admits no planar layout".into())
    })?;
    trace.push(format!(
        "removed edge {e1} and laid the remaining {} edges out without crossings",
        keep.len()
    ));
    align(&mut d, &l2, &l4, trace)?;
    // Outside edges cannot enter the region between the two cherries, so the
    // surviving copy leaves sit together, in this orientation.
    expect_run(&d.left_order, &[&l4, &l3, &l2])?;
    expect_run(&d.right_order, &[&r4, &r3, &r2])?;
    let left = insert_leaf_order(&d.left_order, &l1, &l3, &l2)?;
    trace.push(format!("inserted left leaf {l1} between {l3} and {l2}"));
    let right = insert_leaf_order(&d.right_order, &r1, &r4, &r3)?;
    trace.push(format!("inserted right leaf {r1} between {r4} and {r3}"));
    let layout = LayoutRep {
        left_order: left,
        right_order: right,
    };
    Ok((layout, ordered(e1, host("e3")), ConstructCase::K1))
}

/// Caterpillar copy: sort the outside edges by scar type, then either
/// reinsert `x` alone or pull the whole middle bundle out with it. A bundle
/// on the right middle leaf edge is handled by mirroring, running the
/// left-bundle routine, and mirroring back.
fn caterpillar_case(
    tg: &Tanglegram,
    x: &CrossResponsibleSet,
    trace: &mut Vec<String>,
) -> Result<Built, ConstructError> {
    let mut on_d1 = Vec::new();
    let mut on_d2 = Vec::new();
    for m in 0..tg.size() {
        if x.edges.contains(&m) {
            continue;
        }
        match scar_type(tg, x, m)? {
            (l, r) if l == "d1" && r == "f2" => on_d1.push(m),
            (l, r) if l == "f1" && r == "d2" => on_d2.push(m),
            _ => {}
        }
    }
    if on_d2.is_empty() {
        return caterpillar_build(tg, x, &on_d1, trace);
    }
    // The validators guarantee at most one middle side is populated, so the
    // mirror turns this into a left-bundle instance.
    let mir = tg.mirror();
    let sets = cross_responsible_sets(&mir);
    if sets.len() != 1 {
        return Err(ConstructError::StepFailed(format!(
            "mirroring changed the set count to {}",
            sets.len()
        )));
    }
    let xm = &sets[0];
    let mut bundle = Vec::new();
    for m in 0..mir.size() {
        if xm.edges.contains(&m) {
            continue;
        }
        let (l, r) = scar_type(&mir, xm, m)?;
        if l == "d1" && r == "f2" {
            bundle.push(m);
        }
    }
    if bundle != on_d2 {
        return Err(ConstructError::StepFailed(
            "the mirrored bundle does not match the original".into(),
        ));
    }
    trace.push("mirrored the tanglegram so the bundle scars the left middle leaf edge".into());
    let (mlay, mpair, _) = caterpillar_build(&mir, xm, &bundle, trace)?;
    let layout = LayoutRep {
        left_order: mlay.right_order,
        right_order: mlay.left_order,
    };
    trace.push("swapped the finished orders back to the original sides".into());
    Ok((layout, mpair, ConstructCase::K2MOnD2))
}

/// The two left-bundle subcases. With an empty bundle, `x` alone is removed
/// and reinserted; the crossing is `(x, y)`. With a nonempty bundle, the
/// bundle travels with `x` as one block laid out flat on its own; the
/// crossing is `(x, u2)`.
fn caterpillar_build(
    tg: &Tanglegram,
    x: &CrossResponsibleSet,
    bundle: &[EdgeId],
    trace: &mut Vec<String>,
) -> Result<Built, ConstructError> {
    let host = |role: &str| x.labeling.edge_with_role(role).expect("labeled role");
    let lam = |role: &str| {
        let (l, r) = tg.edge_labels(host(role));
        (l.to_string(), r.to_string())
    };
    let (xl, xr) = lam("x");
    let (yl, yr) = lam("y");
    let (u1l, u1r) = lam("u1");
    let (u2l, u2r) = lam("u2");
    let x_e = host("x");
    let keep: Vec<EdgeId> = (0..tg.size())
        .filter(|e| *e != x_e && !bundle.contains(e))
        .collect();
    let sub = induce_subtanglegram(tg, &keep)?;
    let mut d = planar_layout(&sub).ok_or_else(|| {
        ConstructError::StepFailed("the reduced tanglegram admits no planar layout".into())
    })?;
    trace.push(format!(
        "removed edge {x_e} and the {} bundle edges, laid the remaining {} edges out without crossings",
        bundle.len(),
        keep.len()
    ));
    align(&mut d, &u1l, &u2l, trace)?;
    // Outside edges cannot enter the region around the surviving copy edges,
    // so their leaves sit together, in this orientation on both sides.
    expect_run(&d.left_order, &[&u2l, &yl, &u1l])?;
    expect_run(&d.right_order, &[&u2r, &yr, &u1r])?;
    if bundle.is_empty() {
        let left = insert_leaf_order(&d.left_order, &xl, &u2l, &yl)?;
        trace.push(format!("inserted left leaf {xl} between {u2l} and {yl}"));
        let right = insert_leaf_order(&d.right_order, &xr, &yr, &u1r)?;
        trace.push(format!("inserted right leaf {xr} between {yr} and {u1r}"));
        let layout = LayoutRep {
            left_order: left,
            right_order: right,
        };
        return Ok((layout, ordered(x_e, host("y")), ConstructCase::K2MEmpty));
    }
    // Lay the bundle out flat together with x, y, u1; flipped so u1 sits
    // below x, its left order reads (x, bundle, y, u1) and its right order
    // (x, bundle, y, u1), giving the two bundle segments to splice.
    let mut star_edges: Vec<EdgeId> = vec![x_e, host("y"), host("u1")];
    star_edges.extend_from_slice(bundle);
    star_edges.sort_unstable();
    let star = induce_subtanglegram(tg, &star_edges)?;
    let mut ds = planar_layout(&star).ok_or_else(|| {
        ConstructError::StepFailed("the bundle block admits no planar layout".into())
    })?;
    trace.push(format!(
        "laid the bundle out without crossings beside edges {x_e}, {}, {}",
        host("y"),
        host("u1")
    ));
    align(&mut ds, &u1l, &xl, trace)?;
    let n = ds.left_order.len();
    expect_run(&ds.left_order, &[&xl])?;
    expect_run(&ds.right_order, &[&xr])?;
    if position(&ds.left_order, &xl)? != 0 || position(&ds.right_order, &xr)? != 0 {
        return Err(ConstructError::StepFailed(
            "the bundle block does not start at the removed edge".into(),
        ));
    }
    expect_run(&ds.left_order[n - 2..], &[&yl, &u1l])?;
    expect_run(&ds.right_order[n - 2..], &[&yr, &u1r])?;
    let seg_left = ds.left_order[..n - 2].to_vec();
    let seg_right = ds.right_order[1..n - 2].to_vec();
    let left = insert_segment_order(&d.left_order, &seg_left, &u2l, &yl)?;
    trace.push(format!(
        "spliced {} left leaves between {u2l} and {yl}",
        seg_left.len()
    ));
    let mut right = insert_segment_order(&d.right_order, &seg_right, &u2r, &yr)?;
    trace.push(format!(
        "spliced {} right leaves between {u2r} and {yr}",
        seg_right.len()
    ));
    let at = position(&right, &u2r)?;
    right.insert(at, xr.clone());
    trace.push(format!("inserted right leaf {xr} directly above {u2r}"));
    let layout = LayoutRep {
        left_order: left,
        right_order: right,
    };
    Ok((layout, ordered(x_e, host("u2")), ConstructCase::K2MOnD1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{build_family, Family};
    use crate::layout::{crossing_count, exact_crt};
    use crate::model::{Tanglegram, Tree, TreeSpec};

    fn leaf(s: &str) -> TreeSpec {
        TreeSpec::leaf(s)
    }

    fn branch(a: TreeSpec, b: TreeSpec) -> TreeSpec {
        TreeSpec::branch(a, b)
    }

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn middle_bundle_fixture() -> Tanglegram {
        let left = Tree::from_spec(&branch(
            leaf("l1"),
            branch(
                branch(leaf("m1"), leaf("l2")),
                branch(leaf("l3"), leaf("l4")),
            ),
        ))
        .unwrap();
        let right = Tree::from_spec(&branch(
            leaf("r1"),
            branch(
                leaf("r2"),
                branch(branch(leaf("m2"), leaf("r3")), leaf("r4")),
            ),
        ))
        .unwrap();
        let pairs = [
            ("l1", "r4"),
            ("l2", "r2"),
            ("l3", "r3"),
            ("l4", "r1"),
            ("m1", "m2"),
        ]
        .map(|(a, b)| (a.to_string(), b.to_string()));
        Tanglegram::new(left, right, &pairs).unwrap()
    }

    #[test]
    fn case_names() {
        assert_eq!(ConstructCase::K1.to_string(), "K1");
        assert_eq!(ConstructCase::K2MEmpty.to_string(), "K2-M-empty");
        assert_eq!(ConstructCase::K2MOnD1.to_string(), "K2-M-on-d1");
        assert_eq!(ConstructCase::K2MOnD2.to_string(), "K2-M-on-d2");
    }

    #[test]
    fn insert_between_adjacent_anchors() {
        let base = strings(&["a", "b"]);
        let out = insert_leaf_order(&base, "c", "a", "b").unwrap();
        assert_eq!(out, strings(&["a", "c", "b"]));
    }

    #[test]
    fn insert_rejects_non_adjacent_anchors() {
        let base = strings(&["a", "b", "c"]);
        let err = insert_leaf_order(&base, "z", "a", "c").unwrap_err();
        assert!(matches!(err, ConstructError::NonAdjacentAnchors { .. }));
        let err = insert_leaf_order(&base, "z", "b", "a").unwrap_err();
        assert!(matches!(err, ConstructError::NonAdjacentAnchors { .. }));
    }

    #[test]
    fn segment_splice_fills_the_gap() {
        let base = strings(&["a", "b"]);
        let seg = strings(&["x", "y"]);
        let out = insert_segment_order(&base, &seg, "a", "b").unwrap();
        assert_eq!(out, strings(&["a", "x", "y", "b"]));
    }

    #[test]
    fn balanced_fixture_certificate() {
        let tg = build_family(Family::K1, 0).unwrap();
        let cert = one_crossing_layout(&tg).unwrap();
        assert_eq!(cert.case, ConstructCase::K1);
        assert_eq!(cert.crossing_pair, (0, 3));
        assert_eq!(cert.layout.left_order, strings(&["l3", "l4", "l1", "l2"]));
        assert_eq!(cert.layout.right_order, strings(&["r2", "r1", "r4", "r3"]));
        assert_eq!(crossing_count(&tg, &cert.layout).unwrap(), 1);
        assert_eq!(exact_crt(&tg).unwrap().value, 1);
        assert!(!cert.trace.is_empty());
    }

    #[test]
    fn caterpillar_fixture_certificate() {
        let tg = build_family(Family::K2, 0).unwrap();
        let cert = one_crossing_layout(&tg).unwrap();
        assert_eq!(cert.case, ConstructCase::K2MEmpty);
        assert_eq!(cert.crossing_pair, (1, 2));
        assert_eq!(cert.layout.left_order, strings(&["l1", "l2", "l3", "l4"]));
        assert_eq!(cert.layout.right_order, strings(&["r4", "r3", "r2", "r1"]));
        assert_eq!(exact_crt(&tg).unwrap().value, 1);
    }

    #[test]
    fn block_family_certificates() {
        for m in 1..=3 {
            let tg = build_family(Family::T1, m).unwrap();
            let cert = one_crossing_layout(&tg).unwrap();
            assert_eq!(cert.case, ConstructCase::K1);
            assert_eq!(cert.crossing_pair, (0, 3));
            assert_eq!(crossing_count(&tg, &cert.layout).unwrap(), 1);
            assert_eq!(exact_crt(&tg).unwrap().value, 1);
        }
    }

    #[test]
    fn left_bundle_certificate() {
        let tg = middle_bundle_fixture();
        let cert = one_crossing_layout(&tg).unwrap();
        assert_eq!(cert.case, ConstructCase::K2MOnD1);
        assert_eq!(cert.crossing_pair, (0, 1));
        assert_eq!(
            cert.layout.left_order,
            strings(&["l1", "l2", "m1", "l3", "l4"])
        );
        assert_eq!(
            cert.layout.right_order,
            strings(&["r2", "r4", "m2", "r3", "r1"])
        );
        assert_eq!(exact_crt(&tg).unwrap().value, 1);
    }

    #[test]
    fn right_bundle_certificate() {
        let tg = middle_bundle_fixture().mirror();
        let cert = one_crossing_layout(&tg).unwrap();
        assert_eq!(cert.case, ConstructCase::K2MOnD2);
        assert_eq!(cert.crossing_pair, (0, 1));
        assert_eq!(
            cert.layout.left_order,
            strings(&["r2", "r4", "m2", "r3", "r1"])
        );
        assert_eq!(
            cert.layout.right_order,
            strings(&["l1", "l2", "m1", "l3", "l4"])
        );
        assert_eq!(exact_crt(&tg).unwrap().value, 1);
    }

    #[test]
    fn planar_input_is_refused_with_count_zero() {
        let labels: Vec<String> = (1..=5).map(|i| format!("v{i}")).collect();
        let spec = labels
            .iter()
            .rev()
            .map(|s| leaf(s))
            .reduce(|acc, l| branch(l, acc))
            .unwrap();
        let left = Tree::from_spec(&spec).unwrap();
        let right = left.clone();
        let pairs: Vec<(String, String)> =
            labels.iter().map(|s| (s.clone(), s.clone())).collect();
        let tg = Tanglegram::new(left, right, &pairs).unwrap();
        let err = one_crossing_layout(&tg).unwrap_err();
        assert_eq!(
            err.to_string(),
            "expected exactly one cross-responsible set, found 0"
        );
    }

    #[test]
    fn two_copies_are_refused_with_count_two() {
        let bal = |p: [&str; 4]| {
            branch(
                branch(leaf(p[0]), leaf(p[1])),
                branch(leaf(p[2]), leaf(p[3])),
            )
        };
        let left = Tree::from_spec(&branch(
            bal(["a1", "a2", "a3", "a4"]),
            bal(["b1", "b2", "b3", "b4"]),
        ))
        .unwrap();
        let right = Tree::from_spec(&branch(
            bal(["c1", "c2", "c3", "c4"]),
            bal(["d1", "d2", "d3", "d4"]),
        ))
        .unwrap();
        let pairs = [
            ("a1", "c1"),
            ("a2", "c3"),
            ("a3", "c2"),
            ("a4", "c4"),
            ("b1", "d1"),
            ("b2", "d3"),
            ("b3", "d2"),
            ("b4", "d4"),
        ]
        .map(|(a, b)| (a.to_string(), b.to_string()));
        let tg = Tanglegram::new(left, right, &pairs).unwrap();
        assert_eq!(cross_responsible_sets(&tg).len(), 2);
        let err = one_crossing_layout(&tg).unwrap_err();
        assert!(matches!(err, ConstructError::NotUnique { count: 2 }));
    }
}
