//! Plain-text graph interchange format ("tgf v1").
//!
//! Line 1: `n m`. Then `m` lines `u v label` with 0-based vertex ids and the
//! label printed as a decimal that round-trips through `f64` (up to 17
//! significant digits). Edge lines appear in ascending label order. The
//! parser enforces every graph invariant, including that order.

use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{TemporalEdge, TemporalGraph, TimeLabel, VertexId};

/// Serialize in tgf v1 form. Labels use the shortest decimal that parses
/// back to the identical `f64`.
pub fn to_tgf(g: &TemporalGraph) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", g.n(), g.m()));
    for e in g.edges() {
        out.push_str(&format!("{} {} {}\n", e.u, e.v, e.label));
    }
    out
}

/// Parse tgf v1 text. Rejects bad counts, malformed fields, out-of-range
/// ids, labels outside `[0, 1]`, duplicate pairs or labels, and edge lines
/// out of ascending label order.
pub fn from_tgf(text: &str) -> Result<TemporalGraph> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty input"))?;
    let mut it = header.split_whitespace();
    let n: usize = parse_field(it.next(), 1, "vertex count")?;
    let m: usize = parse_field(it.next(), 1, "edge count")?;
    if it.next().is_some() {
        return Err(parse_err(1, "trailing fields after `n m`"));
    }

    let mut edges = Vec::with_capacity(m);
    let mut prev_label: Option<TimeLabel> = None;
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        if edges.len() == m {
            return Err(parse_err(lineno, "more edge lines than declared"));
        }
        let mut it = line.split_whitespace();
        let u: u32 = parse_field(it.next(), lineno, "source id")?;
        let v: u32 = parse_field(it.next(), lineno, "target id")?;
        let label: f64 = parse_field(it.next(), lineno, "label")?;
        if it.next().is_some() {
            return Err(parse_err(lineno, "trailing fields after `u v label`"));
        }
        let label = TimeLabel::new(label)?;
        if prev_label.is_some_and(|p| p >= label) {
            return Err(Error::Unsorted);
        }
        prev_label = Some(label);
        edges.push(TemporalEdge::new(VertexId(u), VertexId(v), label)?);
    }
    if edges.len() != m {
        return Err(parse_err(
            0,
            format!("expected {m} edge lines, found {}", edges.len()),
        ));
    }
    TemporalGraph::new(n, edges)
}

pub fn write_tgf(g: &TemporalGraph, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_tgf(g))?;
    Ok(())
}

pub fn read_tgf(path: impl AsRef<Path>) -> Result<TemporalGraph> {
    from_tgf(&std::fs::read_to_string(path)?)
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_field<T: std::str::FromStr>(
    field: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T> {
    let raw = field.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    raw.parse()
        .map_err(|_| parse_err(line, format!("bad {what}: {raw:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TimeWindow;

    #[test]
    fn roundtrip_preserves_graph() {
        let text = "4 4\n0 1 0.1\n1 2 0.2\n2 3 0.3\n0 3 0.4\n";
        let g = from_tgf(text).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.m(), 4);
        assert_eq!(to_tgf(&g), text);
    }

    #[test]
    fn roundtrip_is_exact_for_awkward_floats() {
        // Shortest-decimal printing must round-trip bit-exactly.
        let vals = [1.0 / 3.0, 2e-17, 0.1 + 0.2, 5.551115123125783e-17, 1.0];
        let edges: Vec<TemporalEdge> = vals
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                TemporalEdge::new(
                    VertexId(i as u32),
                    VertexId(i as u32 + 1),
                    TimeLabel::new(t).unwrap(),
                )
                .unwrap()
            })
            .collect();
        let g = TemporalGraph::new(6, edges).unwrap();
        let back = from_tgf(&to_tgf(&g)).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn parser_rejects_malformed_input() {
        assert!(from_tgf("").is_err());
        assert!(from_tgf("2\n").is_err());
        // Declared two edges, provided one.
        assert!(from_tgf("3 2\n0 1 0.5\n").is_err());
        // Labels out of order.
        assert!(matches!(
            from_tgf("3 2\n0 1 0.5\n1 2 0.25\n"),
            Err(Error::Unsorted)
        ));
        // Duplicate pair.
        assert!(from_tgf("2 2\n0 1 0.25\n1 0 0.5\n").is_err());
        // Label out of range.
        assert!(from_tgf("2 1\n0 1 1.25\n").is_err());
        // Vertex out of range.
        assert!(from_tgf("2 1\n0 7 0.25\n").is_err());
        // Junk field.
        assert!(from_tgf("2 1\n0 x 0.25\n").is_err());
    }

    #[test]
    fn file_helpers_roundtrip() {
        let g = from_tgf("3 2\n0 1 0.25\n1 2 0.5\n").unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.tgf");
        write_tgf(&g, &path).unwrap();
        assert_eq!(read_tgf(&path).unwrap(), g);

        // Windows survive the trip too.
        let r = g.restrict_window(TimeWindow::from_f64(0.0, 0.3).unwrap());
        assert_eq!(r.m(), 1);
    }
}
