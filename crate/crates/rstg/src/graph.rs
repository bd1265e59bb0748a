//! Temporal graphs with a single time label per edge.
//!
//! A temporal graph here is a simple undirected graph on vertices `0..n`
//! where every edge carries one finite label in `[0, 1]` and all labels are
//! pairwise distinct. Edges are kept sorted by label; most algorithms in the
//! crate are single ascending passes over that order.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Dense vertex index in `[0, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

/// Finite time label in `[0, 1]`. Validated on construction, so ordering is
/// total and `Eq` is sound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TimeLabel(f64);

impl TimeLabel {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || !(0.0..=1.0).contains(&value) {
            return Err(Error::BadLabel(value));
        }
        Ok(TimeLabel(value))
    }

    /// Internal constructor for values already known to be valid labels.
    pub(crate) fn new_unchecked(value: f64) -> Self {
        debug_assert!(value.is_finite() && (0.0..=1.0).contains(&value));
        TimeLabel(value)
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// Reflection `t -> 1 - t`. Exact (and an involution) whenever the label
    /// is a multiple of 2^-53, which holds for every label the samplers in
    /// this crate produce.
    pub fn reflected(self) -> TimeLabel {
        TimeLabel(1.0 - self.0)
    }
}

impl Eq for TimeLabel {}

impl PartialOrd for TimeLabel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TimeLabel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Display for TimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Undirected labelled edge, stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TemporalEdge {
    pub u: VertexId,
    pub v: VertexId,
    pub label: TimeLabel,
}

impl TemporalEdge {
    pub fn new(u: VertexId, v: VertexId, label: TimeLabel) -> Result<Self> {
        if u == v {
            return Err(Error::SelfLoop(u.0));
        }
        let (u, v) = if u.0 < v.0 { (u, v) } else { (v, u) };
        Ok(TemporalEdge { u, v, label })
    }

    /// Given one endpoint, the other one. Panics if `w` is not an endpoint.
    pub fn other(&self, w: VertexId) -> VertexId {
        if w == self.u {
            self.v
        } else {
            debug_assert_eq!(w, self.v);
            self.u
        }
    }

    pub fn touches(&self, w: VertexId) -> bool {
        self.u == w || self.v == w
    }
}

/// Inclusive label interval `[a, b]` with `a <= b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TimeWindow {
    a: TimeLabel,
    b: TimeLabel,
}

impl TimeWindow {
    pub fn new(a: TimeLabel, b: TimeLabel) -> Result<Self> {
        if a > b {
            return Err(Error::BadWindow {
                a: a.get(),
                b: b.get(),
            });
        }
        Ok(TimeWindow { a, b })
    }

    pub fn from_f64(a: f64, b: f64) -> Result<Self> {
        Self::new(TimeLabel::new(a)?, TimeLabel::new(b)?)
    }

    /// The whole label range `[0, 1]`.
    pub fn full() -> Self {
        TimeWindow {
            a: TimeLabel(0.0),
            b: TimeLabel(1.0),
        }
    }

    #[inline]
    pub fn a(&self) -> TimeLabel {
        self.a
    }

    #[inline]
    pub fn b(&self) -> TimeLabel {
        self.b
    }

    #[inline]
    pub fn contains(&self, t: TimeLabel) -> bool {
        self.a <= t && t <= self.b
    }

    /// Window seen through the `t -> 1 - t` reflection: `[1-b, 1-a]`.
    pub fn reflected(&self) -> TimeWindow {
        TimeWindow {
            a: self.b.reflected(),
            b: self.a.reflected(),
        }
    }
}

/// Walk through a temporal graph with strictly increasing labels.
#[derive(Clone, Debug, PartialEq)]
pub struct TemporalPath {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<TemporalEdge>,
}

/// Simple temporal graph on `n` vertices; see the module docs for invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct TemporalGraph {
    n: usize,
    edges: Vec<TemporalEdge>,
}

impl TemporalGraph {
    /// Build a graph from an arbitrary edge list. Edges are sorted by label;
    /// endpoint range, self-loops, duplicate vertex pairs and duplicate
    /// labels are all rejected.
    pub fn new(n: usize, edges: Vec<TemporalEdge>) -> Result<Self> {
        for e in &edges {
            if e.u == e.v {
                return Err(Error::SelfLoop(e.u.0));
            }
            for w in [e.u, e.v] {
                if w.idx() >= n {
                    return Err(Error::VertexOutOfRange { id: w.0, n });
                }
            }
        }
        let mut pairs: Vec<u64> = edges
            .iter()
            .map(|e| {
                let (u, v) = if e.u.0 < e.v.0 { (e.u, e.v) } else { (e.v, e.u) };
                (u.0 as u64) << 32 | v.0 as u64
            })
            .collect();
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge {
                u: (w[0] >> 32) as u32,
                v: w[0] as u32,
            });
        }
        Self::from_simple_edges(n, edges)
    }

    /// Like [`TemporalGraph::new`] but the caller guarantees the vertex pairs
    /// are pairwise distinct (the samplers visit each pair at most once).
    pub(crate) fn from_simple_edges(n: usize, mut edges: Vec<TemporalEdge>) -> Result<Self> {
        for e in &mut edges {
            if e.u.0 > e.v.0 {
                std::mem::swap(&mut e.u, &mut e.v);
            }
        }
        edges.sort_unstable_by(|a, b| a.label.cmp(&b.label));
        if let Some(w) = edges.windows(2).find(|w| w[0].label == w[1].label) {
            return Err(Error::DuplicateLabel(w[0].label.get()));
        }
        Ok(TemporalGraph { n, edges })
    }

    /// Internal constructor for edge lists already sorted with all
    /// invariants known to hold.
    pub(crate) fn from_sorted_unchecked(n: usize, edges: Vec<TemporalEdge>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0].label < w[1].label));
        debug_assert!(edges.iter().all(|e| e.u.0 < e.v.0 && e.v.idx() < n));
        TemporalGraph { n, edges }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges in ascending label order.
    #[inline]
    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    /// True iff the graph has an edge `{u, v}` with exactly this label.
    pub fn contains_edge(&self, u: VertexId, v: VertexId, label: TimeLabel) -> bool {
        let Ok(i) = self
            .edges
            .binary_search_by(|e| e.label.cmp(&label))
        else {
            return false;
        };
        let e = &self.edges[i];
        let (u, v) = if u.0 < v.0 { (u, v) } else { (v, u) };
        e.u == u && e.v == v
    }

    /// Subgraph with exactly the edges whose labels lie in `w` (inclusive).
    /// The vertex set is unchanged.
    pub fn restrict_window(&self, w: TimeWindow) -> TemporalGraph {
        let edges = self
            .edges
            .iter()
            .filter(|e| w.contains(e.label))
            .copied()
            .collect();
        TemporalGraph { n: self.n, edges }
    }

    /// Subgraph induced by `verts`, reindexed densely. The returned mapping
    /// lists the original id of each new vertex in ascending order.
    pub fn induced_subgraph(&self, verts: &[VertexId]) -> Result<InducedSubgraph> {
        let mut keep: Vec<VertexId> = verts.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&bad) = keep.iter().find(|v| v.idx() >= self.n) {
            return Err(Error::VertexOutOfRange {
                id: bad.0,
                n: self.n,
            });
        }
        let mut new_id = vec![u32::MAX; self.n];
        for (i, v) in keep.iter().enumerate() {
            new_id[v.idx()] = i as u32;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| new_id[e.u.idx()] != u32::MAX && new_id[e.v.idx()] != u32::MAX)
            .map(|e| TemporalEdge {
                u: VertexId(new_id[e.u.idx()]),
                v: VertexId(new_id[e.v.idx()]),
                label: e.label,
            })
            .collect();
        Ok(InducedSubgraph {
            graph: TemporalGraph {
                n: keep.len(),
                edges,
            },
            vertex_map: keep,
        })
    }

    /// Reflect every label through `t -> 1 - t`, reversing the time order.
    /// Temporal paths of the result are exactly the reversed paths of `self`.
    pub fn reverse_time(&self) -> TemporalGraph {
        let edges: Vec<TemporalEdge> = self
            .edges
            .iter()
            .rev()
            .map(|e| TemporalEdge {
                u: e.u,
                v: e.v,
                label: e.label.reflected(),
            })
            .collect();
        debug_assert!(edges.windows(2).all(|w| w[0].label < w[1].label));
        TemporalGraph {
            n: self.n,
            edges,
        }
    }

    /// Check that `path` is a temporal path of this graph: consecutive
    /// vertices joined by the listed edges, every edge present with exactly
    /// the listed label, labels strictly increasing. A single vertex with no
    /// edges is a valid path.
    pub fn is_temporal_path(&self, path: &TemporalPath) -> bool {
        if path.vertices.is_empty() || path.vertices.len() != path.edges.len() + 1 {
            return false;
        }
        if path.vertices.iter().any(|v| v.idx() >= self.n) {
            return false;
        }
        for (i, e) in path.edges.iter().enumerate() {
            let (a, b) = (path.vertices[i], path.vertices[i + 1]);
            if !(e.touches(a) && e.touches(b)) || a == b {
                return false;
            }
            if !self.contains_edge(a, b, e.label) {
                return false;
            }
            if i > 0 && path.edges[i - 1].label >= e.label {
                return false;
            }
        }
        true
    }
}

/// Result of [`TemporalGraph::induced_subgraph`]: the reindexed graph plus
/// the dense-to-original vertex mapping.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: TemporalGraph,
    /// `vertex_map[new] = old`, ascending in `old`.
    pub vertex_map: Vec<VertexId>,
}

impl InducedSubgraph {
    pub fn original_id(&self, new: VertexId) -> VertexId {
        self.vertex_map[new.idx()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(u: u32, v: u32, t: f64) -> TemporalEdge {
        TemporalEdge::new(VertexId(u), VertexId(v), TimeLabel::new(t).unwrap()).unwrap()
    }

    /// 4-cycle a(0) b(1) c(2) d(3) with ascending labels around the cycle.
    pub(crate) fn cycle4() -> TemporalGraph {
        TemporalGraph::new(
            4,
            vec![edge(0, 1, 0.1), edge(1, 2, 0.2), edge(2, 3, 0.3), edge(3, 0, 0.4)],
        )
        .unwrap()
    }

    #[test]
    fn construction_sorts_by_label() {
        let g = TemporalGraph::new(3, vec![edge(1, 2, 0.9), edge(0, 1, 0.2)]).unwrap();
        let labels: Vec<f64> = g.edges().iter().map(|e| e.label.get()).collect();
        assert_eq!(labels, vec![0.2, 0.9]);
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 2);
    }

    #[test]
    fn construction_rejects_invalid() {
        assert!(matches!(
            TemporalGraph::new(2, vec![edge(0, 1, 0.5), edge(1, 0, 0.7)]),
            Err(Error::DuplicateEdge { .. })
        ));
        assert!(matches!(
            TemporalGraph::new(3, vec![edge(0, 1, 0.5), edge(1, 2, 0.5)]),
            Err(Error::DuplicateLabel(_))
        ));
        assert!(matches!(
            TemporalGraph::new(2, vec![edge(0, 5, 0.5)]),
            Err(Error::VertexOutOfRange { .. })
        ));
        assert!(TimeLabel::new(1.5).is_err());
        assert!(TimeLabel::new(f64::NAN).is_err());
        assert!(TemporalEdge::new(VertexId(3), VertexId(3), TimeLabel::new(0.5).unwrap()).is_err());
    }

    #[test]
    fn restrict_window_keeps_inclusive_bounds() {
        let g = cycle4();
        let w = TimeWindow::from_f64(0.15, 0.35).unwrap();
        let r = g.restrict_window(w);
        let labels: Vec<f64> = r.edges().iter().map(|e| e.label.get()).collect();
        assert_eq!(labels, vec![0.2, 0.3]);
        assert_eq!(r.n(), 4);

        // Window endpoints are kept.
        let w = TimeWindow::from_f64(0.2, 0.3).unwrap();
        assert_eq!(g.restrict_window(w).m(), 2);
    }

    #[test]
    fn induced_subgraph_reindexes_densely() {
        let g = cycle4();
        let sub = g
            .induced_subgraph(&[VertexId(0), VertexId(1)])
            .unwrap();
        assert_eq!(sub.graph.n(), 2);
        assert_eq!(sub.graph.m(), 1);
        let e = sub.graph.edges()[0];
        assert_eq!((e.u, e.v), (VertexId(0), VertexId(1)));
        assert_eq!(e.label.get(), 0.1);
        assert_eq!(sub.original_id(VertexId(1)), VertexId(1));

        // No chord between a and c.
        let sub = g
            .induced_subgraph(&[VertexId(0), VertexId(2)])
            .unwrap();
        assert_eq!(sub.graph.m(), 0);

        assert!(g.induced_subgraph(&[VertexId(9)]).is_err());
    }

    #[test]
    fn reverse_time_reflects_labels() {
        let g = cycle4();
        let r = g.reverse_time();
        let labels: Vec<f64> = r.edges().iter().map(|e| e.label.get()).collect();
        assert_eq!(labels, vec![0.6, 0.7, 0.8, 0.9]);
        // a-b@0.1 becomes a-b@0.9.
        let last = r.edges()[3];
        assert_eq!((last.u, last.v, last.label.get()), (VertexId(0), VertexId(1), 0.9));
    }

    #[test]
    fn reverse_time_is_involutive_on_grid_labels() {
        // Labels that are multiples of 2^-53 reflect exactly; the samplers
        // only ever emit such labels.
        let snap = |t: f64| (t * (1u64 << 53) as f64).round() / (1u64 << 53) as f64;
        let g = TemporalGraph::new(
            3,
            vec![
                edge(0, 1, snap(0.37)),
                edge(1, 2, snap(2e-9)),
                edge(0, 2, snap(0.75)),
            ],
        )
        .unwrap();
        assert_eq!(g.reverse_time().reverse_time(), g);
    }

    #[test]
    fn path_check_requires_increasing_labels() {
        let g = cycle4();
        let ok = TemporalPath {
            vertices: vec![VertexId(0), VertexId(1), VertexId(2)],
            edges: vec![edge(0, 1, 0.1), edge(1, 2, 0.2)],
        };
        assert!(g.is_temporal_path(&ok));

        // d -> a -> b decreases: 0.4 then 0.1.
        let bad = TemporalPath {
            vertices: vec![VertexId(3), VertexId(0), VertexId(1)],
            edges: vec![edge(3, 0, 0.4), edge(0, 1, 0.1)],
        };
        assert!(!g.is_temporal_path(&bad));

        // Wrong label for an existing pair.
        let bad = TemporalPath {
            vertices: vec![VertexId(0), VertexId(1)],
            edges: vec![edge(0, 1, 0.15)],
        };
        assert!(!g.is_temporal_path(&bad));

        let trivial = TemporalPath {
            vertices: vec![VertexId(2)],
            edges: vec![],
        };
        assert!(g.is_temporal_path(&trivial));
    }

    #[test]
    fn window_reflection_swaps_bounds() {
        let w = TimeWindow::from_f64(0.2, 0.5).unwrap();
        let r = w.reflected();
        assert_eq!((r.a().get(), r.b().get()), (0.5, 0.8));
        assert!(TimeWindow::from_f64(0.6, 0.2).is_err());
    }
}
