//! Reads and writes the three-line tanglegram text format, the two-line
//! layout format, and renders layouts as SVG documents.
//!
//! A tanglegram file holds the left tree in Newick-style nesting ending in
//! ';' on one line, the right tree on the next, and the matching as
//! comma-separated "leftLabel-rightLabel" pairs on the third. '#' starts a
//! comment, blank lines are skipped, and LF or CRLF line ends are accepted.
//! Labels are nonempty runs of `[A-Za-z0-9_]`. The degree-one root stub is
//! implicit in the text and materialized on parse. Serialization is the
//! exact inverse, so serialize-parse round trips are byte identical.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::layout::{crossing_pairs, LayoutError, LayoutRep};
use crate::model::{ModelError, Tanglegram, Tree, TreeSpec};

/// Errors from parsing, serialization, and rendering. Lines and columns are
/// 1-based and refer to the raw input text.
#[derive(Debug, Error)]
pub enum IoError {
    #[error("syntax error at line {line}, column {col}: {detail}")]
    Syntax {
        line: usize,
        col: usize,
        detail: String,
    },
    #[error("non-binary node at line {line}, column {col}")]
    NonBinary { line: usize, col: usize },
    #[error("duplicate leaf label {label:?} at line {line}, column {col}")]
    DuplicateLabel {
        line: usize,
        col: usize,
        label: String,
    },
    #[error("matching is not perfect: {0}")]
    MatchingNotPerfect(String),
    #[error("layout orders are not consistent with the tanglegram")]
    InconsistentLayout,
    #[error("internal rendering error: {0}")]
    Internal(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

/// Numbered content lines: comment suffixes stripped, blank lines dropped.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let line = line.trim_end();
        if !line.is_empty() {
            out.push((i + 1, line));
        }
    }
    out
}

struct Cursor<'a> {
    line: usize,
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: usize, text: &'a str) -> Cursor<'a> {
        Cursor {
            line,
            s: text.as_bytes(),
            pos: 0,
        }
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn syntax(&self, detail: &str) -> IoError {
        IoError::Syntax {
            line: self.line,
            col: self.col(),
            detail: detail.to_string(),
        }
    }

    fn expect(&mut self, b: u8, detail: &str) -> Result<(), IoError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(detail))
        }
    }

    fn at_end(&self) -> bool {
        self.pos == self.s.len()
    }

    fn label(&mut self) -> Result<String, IoError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric() || b == b'_') {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.syntax("expected a leaf label"));
        }
        Ok(String::from_utf8(self.s[start..self.pos].to_vec()).expect("ascii run"))
    }
}

fn parse_node(c: &mut Cursor, seen: &mut HashSet<String>) -> Result<TreeSpec, IoError> {
    if c.peek() == Some(b'(') {
        c.pos += 1;
        let a = parse_node(c, seen)?;
        match c.peek() {
            Some(b',') => c.pos += 1,
            Some(b')') => {
                return Err(IoError::NonBinary {
                    line: c.line,
                    col: c.col(),
                })
            }
            _ => return Err(c.syntax("expected ','")),
        }
        let b = parse_node(c, seen)?;
        match c.peek() {
            Some(b')') => {
                c.pos += 1;
                Ok(TreeSpec::branch(a, b))
            }
            Some(b',') => Err(IoError::NonBinary {
                line: c.line,
                col: c.col(),
            }),
            _ => Err(c.syntax("expected ')'")),
        }
    } else {
        let col = c.col();
        let label = c.label()?;
        if !seen.insert(label.clone()) {
            return Err(IoError::DuplicateLabel {
                line: c.line,
                col,
                label,
            });
        }
        Ok(TreeSpec::leaf(label))
    }
}

fn parse_tree_line(line: usize, text: &str) -> Result<TreeSpec, IoError> {
    let mut c = Cursor::new(line, text);
    let mut seen = HashSet::new();
    let spec = parse_node(&mut c, &mut seen)?;
    c.expect(b';', "expected ';'")?;
    if !c.at_end() {
        return Err(c.syntax("unexpected trailing text"));
    }
    Ok(spec)
}

fn parse_matching_line(line: usize, text: &str) -> Result<Vec<(String, String)>, IoError> {
    let mut c = Cursor::new(line, text);
    let mut pairs = Vec::new();
    loop {
        let l = c.label()?;
        c.expect(b'-', "expected '-'")?;
        let r = c.label()?;
        pairs.push((l, r));
        if c.peek() == Some(b',') {
            c.pos += 1;
        } else {
            break;
        }
    }
    if !c.at_end() {
        return Err(c.syntax("unexpected trailing text"));
    }
    Ok(pairs)
}

/// Parses the three-line tanglegram format into a validated tanglegram.
pub fn parse_tanglegram(text: &str) -> Result<Tanglegram, IoError> {
    let lines = content_lines(text);
    if lines.len() != 3 {
        let line = lines.last().map_or(1, |&(n, _)| n);
        return Err(IoError::Syntax {
            line,
            col: 1,
            detail: format!(
                "expected 3 content lines (left tree, right tree, matching), found {}",
                lines.len()
            ),
        });
    }
    let left = Tree::from_spec(&parse_tree_line(lines[0].0, lines[0].1)?)?;
    let right = Tree::from_spec(&parse_tree_line(lines[1].0, lines[1].1)?)?;
    let pairs = parse_matching_line(lines[2].0, lines[2].1)?;
    Tanglegram::new(left, right, &pairs).map_err(|e| match e {
        ModelError::MatchingNotPerfect(s) => IoError::MatchingNotPerfect(s),
        ModelError::UnknownLabel(s) => {
            IoError::MatchingNotPerfect(format!("label {s:?} is not a leaf of its tree"))
        }
        other => IoError::Model(other),
    })
}

fn write_spec(spec: &TreeSpec, out: &mut String) {
    match spec {
        TreeSpec::Leaf(label) => out.push_str(label),
        TreeSpec::Branch(a, b) => {
            out.push('(');
            write_spec(a, out);
            out.push(',');
            write_spec(b, out);
            out.push(')');
        }
    }
}

/// Serializes a tanglegram to the three-line format, LF line ends.
pub fn serialize_tanglegram(tg: &Tanglegram) -> String {
    let mut out = String::new();
    write_spec(&tg.left().to_spec(), &mut out);
    out.push_str(";\n");
    write_spec(&tg.right().to_spec(), &mut out);
    out.push_str(";\n");
    for e in 0..tg.size() {
        if e > 0 {
            out.push(',');
        }
        let (l, r) = tg.edge_labels(e);
        out.push_str(l);
        out.push('-');
        out.push_str(r);
    }
    out.push('\n');
    out
}

/// Parses the two-line layout format: comma-separated left order,
/// comma-separated right order, top to bottom.
pub fn parse_layout(text: &str) -> Result<LayoutRep, IoError> {
    let lines = content_lines(text);
    if lines.len() != 2 {
        let line = lines.last().map_or(1, |&(n, _)| n);
        return Err(IoError::Syntax {
            line,
            col: 1,
            detail: format!(
                "expected 2 content lines (left order, right order), found {}",
                lines.len()
            ),
        });
    }
    let parse_order = |line: usize, text: &str| -> Result<Vec<String>, IoError> {
        let mut c = Cursor::new(line, text);
        let mut order = vec![c.label()?];
        while c.peek() == Some(b',') {
            c.pos += 1;
            order.push(c.label()?);
        }
        if !c.at_end() {
            return Err(c.syntax("unexpected trailing text"));
        }
        Ok(order)
    };
    Ok(LayoutRep {
        left_order: parse_order(lines[0].0, lines[0].1)?,
        right_order: parse_order(lines[1].0, lines[1].1)?,
    })
}

/// Serializes a layout to the two-line format, LF line ends.
pub fn serialize_layout(rep: &LayoutRep) -> String {
    format!(
        "{}\n{}\n",
        rep.left_order.join(","),
        rep.right_order.join(",")
    )
}

/// Sign of the cross product (b - a) x (c - a).
fn orient(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> i64 {
    ((b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)).signum()
}

fn segments_cross(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> bool {
    orient(a, b, c) * orient(a, b, d) < 0 && orient(c, d, a) * orient(c, d, b) < 0
}

/// Per-node y coordinate and edge height for one tree, leaves pinned to
/// their layout positions and internal nodes at child midpoints.
fn place(t: &Tree, order: &[String]) -> (Vec<i64>, Vec<i64>) {
    let mut pos = std::collections::HashMap::new();
    for (i, label) in order.iter().enumerate() {
        pos.insert(label.as_str(), i as i64);
    }
    let mut pre = Vec::with_capacity(t.num_nodes());
    let mut stack = vec![t.root()];
    while let Some(v) = stack.pop() {
        pre.push(v);
        for c in t.children(v) {
            stack.push(c);
        }
    }
    let mut y = vec![0i64; t.num_nodes()];
    let mut h = vec![0i64; t.num_nodes()];
    // Reverse preorder visits children before parents.
    for &v in pre.iter().rev() {
        if t.is_leaf(v) {
            y[v as usize] = 100 + 60 * pos[t.label(v)];
        } else {
            let kids: Vec<_> = t.children(v).collect();
            y[v as usize] = kids.iter().map(|&c| y[c as usize]).sum::<i64>() / kids.len() as i64;
            h[v as usize] = 1 + kids.iter().map(|&c| h[c as usize]).max().unwrap();
        }
    }
    (y, h)
}

/// Renders the layout as a deterministic SVG document: both trees drawn
/// flat, straight matching segments, crossing edges highlighted, and a
/// caption with the crossing count. The count is recomputed geometrically
/// from the matching segments before it is written.
pub fn render_svg(tg: &Tanglegram, rep: &LayoutRep) -> Result<String, IoError> {
    if !rep.is_layout_of(tg)? {
        return Err(IoError::InconsistentLayout);
    }
    let (ly, lh) = place(tg.left(), &rep.left_order);
    let (ry, rh) = place(tg.right(), &rep.right_order);
    let lroot = tg.left().root();
    let rroot = tg.right().root();
    let hl = lh[lroot as usize] - 1;
    let hr = rh[rroot as usize] - 1;
    let xl = 60 + 40 * hl.max(0);
    let xr = xl + 280;
    let lx = |v: u32| -> i64 {
        if v == lroot {
            20
        } else {
            xl - 40 * lh[v as usize]
        }
    };
    let rx = |v: u32| -> i64 {
        if v == rroot {
            xr + 40 * hr.max(0) + 40
        } else {
            xr + 40 * rh[v as usize]
        }
    };
    let width = rx(rroot) + 40;
    let rows = rep.left_order.len().max(rep.right_order.len()) as i64;
    let height = 100 + 60 * (rows - 1) + 60;

    let pairs = crossing_pairs(tg, rep)?;
    let mut crossing_edges = HashSet::new();
    for &(a, b) in &pairs {
        crossing_edges.insert(a);
        crossing_edges.insert(b);
    }
    // The drawing must agree with the count it advertises: recheck the
    // matching segments geometrically.
    let lpos = |label: &str| rep.left_order.iter().position(|l| l == label).unwrap();
    let rpos = |label: &str| rep.right_order.iter().position(|l| l == label).unwrap();
    let seg: Vec<((i64, i64), (i64, i64))> = (0..tg.size())
        .map(|e| {
            let (l, r) = tg.edge_labels(e);
            (
                (xl, 100 + 60 * lpos(l) as i64),
                (xr, 100 + 60 * rpos(r) as i64),
            )
        })
        .collect();
    let mut geometric = 0usize;
    for i in 0..seg.len() {
        for j in i + 1..seg.len() {
            if segments_cross(seg[i].0, seg[i].1, seg[j].0, seg[j].1) {
                geometric += 1;
            }
        }
    }
    if geometric != pairs.len() {
        return Err(IoError::Internal(format!(
            "geometric crossing recount {geometric} disagrees with the layout count {}",
            pairs.len()
        )));
    }

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">"
    );
    svg.push_str(
        "<style>line.t{stroke:#333;stroke-width:2}line.m{stroke:#888;stroke-width:2}\
         line.m.x{stroke:#d33;stroke-width:3}text{font-family:monospace;font-size:12px;\
         fill:#333}</style>\n",
    );
    let tree_lines = |t: &Tree, x: &dyn Fn(u32) -> i64, y: &[i64], svg: &mut String| {
        for v in 0..t.num_nodes() as u32 {
            for c in t.children(v) {
                let _ = writeln!(
                    svg,
                    "<line class=\"t\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                    x(v),
                    y[v as usize],
                    x(c),
                    y[c as usize]
                );
            }
        }
    };
    tree_lines(tg.left(), &lx, &ly, &mut svg);
    tree_lines(tg.right(), &rx, &ry, &mut svg);
    for (e, s) in seg.iter().enumerate() {
        let class = if crossing_edges.contains(&e) {
            "m x"
        } else {
            "m"
        };
        let _ = writeln!(
            svg,
            "<line class=\"{class}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            s.0 .0, s.0 .1, s.1 .0, s.1 .1
        );
    }
    for (i, label) in rep.left_order.iter().enumerate() {
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\">{label}</text>",
            xl + 6,
            100 + 60 * i as i64 - 4
        );
    }
    for (i, label) in rep.right_order.iter().enumerate() {
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{label}</text>",
            xr - 6,
            100 + 60 * i as i64 - 4
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"20\" y=\"{}\">crossings: {}</text>",
        height - 20,
        pairs.len()
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{build_family, random_tanglegram, Family};

    const K1_TEXT: &str = "((l1,l2),(l3,l4));\n((r1,r2),(r3,r4));\nl1-r1,l2-r3,l3-r2,l4-r4\n";

    #[test]
    fn fixture_string_parses_and_round_trips() {
        let tg = parse_tanglegram(K1_TEXT).unwrap();
        assert_eq!(serialize_tanglegram(&tg), K1_TEXT);
        let fixture = build_family(Family::K1, 0).unwrap();
        assert_eq!(serialize_tanglegram(&fixture), K1_TEXT);
    }

    #[test]
    fn single_leaf_form_parses() {
        let tg = parse_tanglegram("a;\nb;\na-b\n").unwrap();
        assert_eq!(tg.size(), 1);
        assert_eq!(serialize_tanglegram(&tg), "a;\nb;\na-b\n");
    }

    #[test]
    fn comments_blank_lines_and_crlf_are_accepted() {
        let text = "# fixture\r\n((l1,l2),(l3,l4));\r\n\r\n((r1,r2),(r3,r4)); # right\r\n\
                    l1-r1,l2-r3,l3-r2,l4-r4\r\n";
        let tg = parse_tanglegram(text).unwrap();
        assert_eq!(serialize_tanglegram(&tg), K1_TEXT);
    }

    #[test]
    fn unary_and_ternary_nodes_are_non_binary() {
        let err = parse_tanglegram("(a);\nb;\na-b\n").unwrap_err();
        assert!(matches!(err, IoError::NonBinary { line: 1, col: 3 }));
        let err = parse_tanglegram("(a,b,c);\n(x,(y,z));\na-x,b-y,c-z\n").unwrap_err();
        assert!(matches!(err, IoError::NonBinary { line: 1, col: 5 }));
    }

    #[test]
    fn duplicate_label_is_reported_with_position() {
        let err = parse_tanglegram("((a,a),(b,c));\n(w,(x,(y,z)));\na-w,b-x,c-y\n").unwrap_err();
        match err {
            IoError::DuplicateLabel { line, col, label } => {
                assert_eq!((line, col, label.as_str()), (1, 5, "a"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn imperfect_matchings_are_rejected() {
        let text = "((l1,l2),(l3,l4));\n((r1,r2),(r3,r4));\nl1-r1,l2-r3,l3-r2,l4-r2\n";
        assert!(matches!(
            parse_tanglegram(text).unwrap_err(),
            IoError::MatchingNotPerfect(_)
        ));
        let text = "((l1,l2),(l3,l4));\n((r1,r2),(r3,r4));\nl1-r1,l2-r3,l3-r2\n";
        assert!(matches!(
            parse_tanglegram(text).unwrap_err(),
            IoError::MatchingNotPerfect(_)
        ));
        let text = "((l1,l2),(l3,l4));\n((r1,r2),(r3,r4));\nl1-r1,l2-r3,l3-r2,l9-r4\n";
        assert!(matches!(
            parse_tanglegram(text).unwrap_err(),
            IoError::MatchingNotPerfect(_)
        ));
    }

    #[test]
    fn syntax_errors_carry_line_and_column() {
        let err = parse_tanglegram("((l1,l2);\nb;\nl1-b\n").unwrap_err();
        assert!(matches!(err, IoError::Syntax { line: 1, col: 9, .. }));
        let err = parse_tanglegram("a; x\nb;\na-b\n").unwrap_err();
        assert!(matches!(err, IoError::Syntax { line: 1, col: 3, .. }));
        let err = parse_tanglegram("a;\nb;\n").unwrap_err();
        assert!(matches!(err, IoError::Syntax { .. }));
    }

    #[test]
    fn random_tanglegrams_round_trip_byte_identically() {
        for n in 1..=8 {
            for seed in 0..5 {
                let tg = random_tanglegram(n, seed).unwrap();
                let text = serialize_tanglegram(&tg);
                let back = parse_tanglegram(&text).unwrap();
                assert_eq!(serialize_tanglegram(&back), text);
            }
        }
    }

    #[test]
    fn layout_files_round_trip() {
        let rep = parse_layout("l1,l2\nr2,r1\n").unwrap();
        assert_eq!(rep.left_order, vec!["l1", "l2"]);
        assert_eq!(rep.right_order, vec!["r2", "r1"]);
        assert_eq!(serialize_layout(&rep), "l1,l2\nr2,r1\n");
        assert!(matches!(
            parse_layout("l1,l2\n").unwrap_err(),
            IoError::Syntax { .. }
        ));
    }

    #[test]
    fn renderer_highlights_the_single_crossing() {
        let tg = build_family(Family::K1, 0).unwrap();
        let rep = LayoutRep {
            left_order: ["l3", "l4", "l1", "l2"].map(String::from).to_vec(),
            right_order: ["r2", "r1", "r4", "r3"].map(String::from).to_vec(),
        };
        let svg = render_svg(&tg, &rep).unwrap();
        assert!(svg.contains("crossings: 1"));
        assert_eq!(svg.matches("class=\"m x\"").count(), 2);
        assert_eq!(render_svg(&tg, &rep).unwrap(), svg);
    }

    #[test]
    fn renderer_leaves_planar_layouts_unhighlighted() {
        let tg = parse_tanglegram("(a,(b,(c,d)));\n(a,(b,(c,d)));\na-a,b-b,c-c,d-d\n").unwrap();
        let svg = render_svg(&tg, &LayoutRep::natural(&tg)).unwrap();
        assert!(svg.contains("crossings: 0"));
        assert_eq!(svg.matches("class=\"m x\"").count(), 0);
    }

    #[test]
    fn renderer_rejects_inconsistent_orders() {
        let tg = build_family(Family::K1, 0).unwrap();
        let rep = LayoutRep {
            left_order: ["l1", "l3", "l2", "l4"].map(String::from).to_vec(),
            right_order: ["r1", "r2", "r3", "r4"].map(String::from).to_vec(),
        };
        assert!(matches!(
            render_svg(&tg, &rep).unwrap_err(),
            IoError::InconsistentLayout
        ));
    }
}
