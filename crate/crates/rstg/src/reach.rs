//! Temporal reachability: earliest-arrival ("foremost") forests grown from a
//! source set, waiting-time instrumentation for the growth process, and a
//! streaming all-pairs arrival oracle.
//!
//! A vertex u reaches v when some path traverses edges with strictly
//! increasing labels from u to v; the arrival time is the last label used.
//! The forest grower returns, for every reachable vertex, a path arriving as
//! early as possible.

use serde::Serialize;

use crate::bitset::{iter_bits, BitMatrix};
use crate::error::{Error, Result};
use crate::graph::{TemporalGraph, TimeLabel, TimeWindow, VertexId};
use crate::theory;

/// How `foremost_forest` selects edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForestMode {
    /// Repeatedly re-scan for the smallest-label extension edge. The obvious
    /// reference procedure; O(m) per added vertex.
    Literal,
    /// Single ascending pass adding any edge with exactly one reached
    /// endpoint. Equivalent because a previously reached endpoint always has
    /// arrival strictly below the current label (labels are distinct).
    Sweep,
}

/// One growth step: edge number `k`, the newly reached vertex, its tree
/// parent, and the edge label (which is also the arrival time `Y_k`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ForestEdge {
    pub k: usize,
    pub vertex: VertexId,
    pub parent: VertexId,
    pub label: TimeLabel,
}

/// Earliest-arrival forest for a source set. Each tree is rooted at one
/// source; every reached non-source vertex appears exactly once in `added`,
/// in the order the growth process acquired it.
#[derive(Clone, Debug)]
pub struct ForemostForest {
    n: usize,
    sources: Vec<VertexId>,
    added: Vec<ForestEdge>,
    /// Arrival per vertex: sources use -1 internally so a first hop may use
    /// any label; unreached is NaN.
    link_time: Vec<f64>,
    parent: Vec<u32>,
    root: Vec<u32>,
}

impl ForemostForest {
    /// Sorted, deduplicated source set.
    pub fn sources(&self) -> &[VertexId] {
        &self.sources
    }

    /// Growth steps in acquisition order; labels are non-decreasing.
    pub fn added(&self) -> &[ForestEdge] {
        &self.added
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn reached(&self, v: VertexId) -> bool {
        !self.link_time[v.idx()].is_nan()
    }

    pub fn reached_count(&self) -> usize {
        self.sources.len() + self.added.len()
    }

    /// All reached vertices in ascending id order.
    pub fn reached_vertices(&self) -> Vec<VertexId> {
        (0..self.n as u32)
            .map(VertexId)
            .filter(|&v| self.reached(v))
            .collect()
    }

    /// Arrival time of the earliest path from the sources; 0 for sources
    /// themselves, None if unreached.
    pub fn arrival(&self, v: VertexId) -> Option<f64> {
        let t = self.link_time[v.idx()];
        if t.is_nan() {
            None
        } else {
            Some(t.max(0.0))
        }
    }

    /// Tree parent of a reached non-source vertex.
    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        let p = self.parent[v.idx()];
        if p == u32::MAX {
            None
        } else {
            Some(VertexId(p))
        }
    }

    /// The source whose tree contains `v`.
    pub fn component_of(&self, v: VertexId) -> Option<VertexId> {
        let r = self.root[v.idx()];
        if r == u32::MAX {
            None
        } else {
            Some(VertexId(r))
        }
    }
}

/// Waiting-time sequence of a forest growth: increments `X_k` between
/// consecutive arrivals, their capped versions `min(X_k, c_k)`, and capped
/// prefix sums. Indexing starts at `k = |S|`; the cap is finite only on the
/// index range `[s, n-s-1]` (and for n >= 16), infinite elsewhere.
#[derive(Clone, Debug, Serialize)]
pub struct WaitingTimes {
    /// Index of the first entry: k = number of sources.
    pub start_k: usize,
    pub x: Vec<f64>,
    pub x_capped: Vec<f64>,
    pub y_capped: Vec<f64>,
    /// Truncation constants aligned with `x`; infinite outside the capped range.
    pub caps: Vec<f64>,
}

impl WaitingTimes {
    fn from_added(n: usize, s: usize, added: &[ForestEdge]) -> Self {
        let mut x = Vec::with_capacity(added.len());
        let mut caps = Vec::with_capacity(added.len());
        let mut prev = 0.0;
        for e in added {
            let y = e.label.get();
            x.push(y - prev);
            prev = y;
            let k = e.k;
            let cap = if n >= 16 && k >= s && k + s + 1 <= n {
                theory::truncation_constant(k, n, s).unwrap_or(f64::INFINITY)
            } else {
                f64::INFINITY
            };
            caps.push(cap);
        }
        let x_capped: Vec<f64> = x.iter().zip(&caps).map(|(&x, &c)| x.min(c)).collect();
        let mut y_capped = Vec::with_capacity(x.len());
        let mut acc = 0.0;
        for &v in &x_capped {
            acc += v;
            y_capped.push(acc);
        }
        WaitingTimes {
            start_k: s,
            x,
            x_capped,
            y_capped,
            caps,
        }
    }

    /// Largest k (exclusive of caps) the capped analysis covers: `n - s - 1`.
    pub fn capped_range_end(&self, n: usize) -> usize {
        n.saturating_sub(self.start_k + 1)
    }
}

fn check_sources(g: &TemporalGraph, sources: &[VertexId]) -> Result<Vec<VertexId>> {
    if sources.is_empty() {
        return Err(Error::EmptySources);
    }
    let mut s: Vec<VertexId> = sources.to_vec();
    s.sort_unstable();
    s.dedup();
    if let Some(&bad) = s.iter().find(|v| v.idx() >= g.n()) {
        return Err(Error::VertexOutOfRange {
            id: bad.0,
            n: g.n(),
        });
    }
    Ok(s)
}

fn grow(
    g: &TemporalGraph,
    sources: &[VertexId],
    window: TimeWindow,
    mode: ForestMode,
) -> Result<ForemostForest> {
    let sources = check_sources(g, sources)?;
    let n = g.n();
    let mut link_time = vec![f64::NAN; n];
    let mut parent = vec![u32::MAX; n];
    let mut root = vec![u32::MAX; n];
    for &s in &sources {
        link_time[s.idx()] = -1.0;
        root[s.idx()] = s.0;
    }
    let edges: Vec<(u32, u32, f64)> = g
        .edges()
        .iter()
        .filter(|e| window.contains(e.label))
        .map(|e| (e.u.0, e.v.0, e.label.get()))
        .collect();

    let mut added: Vec<ForestEdge> = Vec::new();
    let mut k = sources.len();
    let mut attach = |inside: u32,
                      outside: u32,
                      t: f64,
                      k: usize,
                      link_time: &mut [f64],
                      parent: &mut [u32],
                      root: &mut [u32]| {
        link_time[outside as usize] = t;
        parent[outside as usize] = inside;
        root[outside as usize] = root[inside as usize];
        added.push(ForestEdge {
            k,
            vertex: VertexId(outside),
            parent: VertexId(inside),
            label: TimeLabel::new_unchecked(t),
        });
    };

    match mode {
        ForestMode::Sweep => {
            for &(u, v, t) in &edges {
                let ur = !link_time[u as usize].is_nan();
                let vr = !link_time[v as usize].is_nan();
                if ur == vr {
                    continue;
                }
                let (inside, outside) = if ur { (u, v) } else { (v, u) };
                // Ascending processing guarantees t > arrival(inside).
                debug_assert!(t > link_time[inside as usize]);
                attach(inside, outside, t, k, &mut link_time, &mut parent, &mut root);
                k += 1;
            }
        }
        ForestMode::Literal => loop {
            // Edges are sorted ascending, so the first extension edge found
            // is the argmin-label one.
            let mut chosen: Option<(u32, u32, f64)> = None;
            for &(u, v, t) in &edges {
                let ur = !link_time[u as usize].is_nan();
                let vr = !link_time[v as usize].is_nan();
                if ur == vr {
                    continue;
                }
                let (inside, outside) = if ur { (u, v) } else { (v, u) };
                if t > link_time[inside as usize] {
                    chosen = Some((inside, outside, t));
                    break;
                }
            }
            let Some((inside, outside, t)) = chosen else {
                break;
            };
            attach(inside, outside, t, k, &mut link_time, &mut parent, &mut root);
            k += 1;
        },
    }

    Ok(ForemostForest {
        n,
        sources,
        added,
        link_time,
        parent,
        root,
    })
}

/// Grow an earliest-arrival forest from `sources` inside `window` and report
/// the waiting-time sequence of the growth. Both modes return identical
/// output; `Sweep` is the fast path.
pub fn foremost_forest(
    g: &TemporalGraph,
    sources: &[VertexId],
    window: TimeWindow,
    mode: ForestMode,
) -> Result<(ForemostForest, WaitingTimes)> {
    let forest = grow(g, sources, window, mode)?;
    let wt = WaitingTimes::from_added(g.n(), forest.sources.len(), forest.added());
    Ok((forest, wt))
}

/// All-pairs reachability with arrival times. Memory is `n^2` floats; use
/// [`all_pairs_reach`] when only the boolean matrix is needed.
pub fn all_pairs_arrival(g: &TemporalGraph, window: TimeWindow) -> ReachMatrix {
    closure(g, window, true)
}

/// All-pairs reachability, boolean only (`n^2/8` bytes).
pub fn all_pairs_reach(g: &TemporalGraph, window: TimeWindow) -> ReachMatrix {
    closure(g, window, false)
}

fn closure(g: &TemporalGraph, window: TimeWindow, want_arrivals: bool) -> ReachMatrix {
    let n = g.n();
    let mut rows = BitMatrix::identity(n);
    let mut arrivals = if want_arrivals {
        let mut a = vec![f64::NAN; n * n];
        for v in 0..n {
            a[v * n + v] = 0.0;
        }
        Some(a)
    } else {
        None
    };

    for e in g.edges() {
        if !window.contains(e.label) {
            continue;
        }
        let (u, v, t) = (e.u.idx(), e.v.idx(), e.label.get());
        let (ru, rv) = rows.two_rows_mut(u, v);
        match &mut arrivals {
            None => {
                for w in 0..ru.len() {
                    let (a, b) = (ru[w], rv[w]);
                    ru[w] = a | b;
                    rv[w] = b | a;
                }
            }
            Some(arr) => {
                for w in 0..ru.len() {
                    let (a, b) = (ru[w], rv[w]);
                    let new_u = b & !a;
                    let new_v = a & !b;
                    ru[w] = a | b;
                    rv[w] = b | a;
                    for bit in iter_bits(&[new_u]) {
                        arr[(w * 64 + bit) * n + u] = t;
                    }
                    for bit in iter_bits(&[new_v]) {
                        arr[(w * 64 + bit) * n + v] = t;
                    }
                }
            }
        }
    }
    ReachMatrix { n, rows, arrivals }
}

/// Reachability matrix. Rows are indexed by *target*: `row(v)` is the packed
/// set of vertices that reach `v`. Reflexive by convention (arrival 0).
#[derive(Clone, Debug)]
pub struct ReachMatrix {
    n: usize,
    rows: BitMatrix,
    arrivals: Option<Vec<f64>>,
}

impl ReachMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// True iff `u` reaches `v` (always true for `u == v`).
    pub fn reaches(&self, u: VertexId, v: VertexId) -> bool {
        self.rows.get(v.idx(), u.idx())
    }

    /// Earliest arrival of a temporal path from `u` to `v`, if any. Requires
    /// the matrix to have been built with arrivals.
    pub fn arrival(&self, u: VertexId, v: VertexId) -> Option<f64> {
        let arr = self
            .arrivals
            .as_ref()
            .expect("matrix built without arrival times");
        let t = arr[u.idx() * self.n + v.idx()];
        if t.is_nan() {
            None
        } else {
            Some(t)
        }
    }

    /// Packed "who reaches v" row.
    pub fn coreach_row(&self, v: VertexId) -> &[u64] {
        self.rows.row(v.idx())
    }

    /// |{u : u reaches v}|.
    pub fn coreach_count(&self, v: VertexId) -> usize {
        self.rows.row_count(v.idx())
    }

    /// |{v : u reaches v}| for every u at once.
    pub fn reach_counts(&self) -> Vec<usize> {
        self.rows.column_counts()
    }

    pub fn is_source(&self, u: VertexId) -> bool {
        self.rows.column_count(u.idx()) == self.n
    }

    pub fn is_temporally_connected(&self) -> bool {
        self.rows.is_all_set()
    }

    pub(crate) fn rows(&self) -> &BitMatrix {
        &self.rows
    }
}

/// Vertices reachable from `v` inside `window` (including `v`), ascending.
pub fn reach_set(g: &TemporalGraph, v: VertexId, window: TimeWindow) -> Result<Vec<VertexId>> {
    Ok(grow(g, &[v], window, ForestMode::Sweep)?.reached_vertices())
}

/// Vertices that reach `v` inside `window` (including `v`), ascending.
/// Computed as the reach set of `v` in the time-reflected graph.
pub fn coreach_set(g: &TemporalGraph, v: VertexId, window: TimeWindow) -> Result<Vec<VertexId>> {
    reach_set(&g.reverse_time(), v, window.reflected())
}

/// True iff `v` reaches every vertex.
pub fn is_temporal_source(g: &TemporalGraph, v: VertexId) -> Result<bool> {
    Ok(reach_set(g, v, TimeWindow::full())?.len() == g.n())
}

/// True iff every vertex is a temporal source.
pub fn is_temporally_connected(g: &TemporalGraph) -> bool {
    all_pairs_reach(g, TimeWindow::full()).is_temporally_connected()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{TemporalEdge, TemporalGraph};

    fn edge(u: u32, v: u32, t: f64) -> TemporalEdge {
        TemporalEdge::new(VertexId(u), VertexId(v), TimeLabel::new(t).unwrap()).unwrap()
    }

    /// a(0) b(1) c(2) d(3) cycle with labels 0.1, 0.2, 0.3, 0.4.
    fn cycle4() -> TemporalGraph {
        TemporalGraph::new(
            4,
            vec![edge(0, 1, 0.1), edge(1, 2, 0.2), edge(2, 3, 0.3), edge(3, 0, 0.4)],
        )
        .unwrap()
    }

    fn ids(v: &[u32]) -> Vec<VertexId> {
        v.iter().map(|&x| VertexId(x)).collect()
    }

    #[test]
    fn forest_from_a_walks_the_cycle() {
        let g = cycle4();
        for mode in [ForestMode::Literal, ForestMode::Sweep] {
            let (f, wt) = foremost_forest(&g, &ids(&[0]), TimeWindow::full(), mode).unwrap();
            let ys: Vec<f64> = f.added().iter().map(|e| e.label.get()).collect();
            assert_eq!(ys, vec![0.1, 0.2, 0.3]);
            let vs: Vec<u32> = f.added().iter().map(|e| e.vertex.0).collect();
            assert_eq!(vs, vec![1, 2, 3]);
            assert_eq!(f.added()[0].k, 1, "numbering starts at |S|");
            for (got, want) in wt.x.iter().zip([0.1, 0.1, 0.1]) {
                assert!((got - want).abs() < 1e-12);
            }
            // n < 16: caps are infinite, capped = raw.
            assert_eq!(wt.x_capped, wt.x);
            for (got, want) in wt.y_capped.iter().zip(&ys) {
                assert!((got - want).abs() < 1e-12);
            }
            assert_eq!(f.arrival(VertexId(0)), Some(0.0));
            assert_eq!(f.arrival(VertexId(3)), Some(0.3));
        }
    }

    #[test]
    fn forest_from_c_skips_the_stale_edge() {
        let g = cycle4();
        for mode in [ForestMode::Literal, ForestMode::Sweep] {
            let (f, _) = foremost_forest(&g, &ids(&[2]), TimeWindow::full(), mode).unwrap();
            let steps: Vec<(u32, f64)> = f
                .added()
                .iter()
                .map(|e| (e.vertex.0, e.label.get()))
                .collect();
            // a-b@0.1 is never usable: b is only reached at 0.2.
            assert_eq!(steps, vec![(1, 0.2), (3, 0.3), (0, 0.4)]);
        }
    }

    #[test]
    fn forest_from_everything_is_empty() {
        let g = cycle4();
        let (f, wt) =
            foremost_forest(&g, &ids(&[0, 1, 2, 3]), TimeWindow::full(), ForestMode::Literal)
                .unwrap();
        assert!(f.added().is_empty());
        assert!(wt.x.is_empty());
        assert_eq!(f.reached_count(), 4);
    }

    #[test]
    fn forest_components_track_roots() {
        let g = cycle4();
        let (f, _) =
            foremost_forest(&g, &ids(&[0, 2]), TimeWindow::full(), ForestMode::Sweep).unwrap();
        assert_eq!(f.component_of(VertexId(1)), Some(VertexId(0)));
        assert_eq!(f.component_of(VertexId(3)), Some(VertexId(2)));
        assert_eq!(f.component_of(VertexId(0)), Some(VertexId(0)));
        assert_eq!(f.parent(VertexId(3)), Some(VertexId(2)));
        assert_eq!(f.parent(VertexId(0)), None);
    }

    #[test]
    fn forest_rejects_bad_sources() {
        let g = cycle4();
        assert!(matches!(
            foremost_forest(&g, &[], TimeWindow::full(), ForestMode::Sweep),
            Err(Error::EmptySources)
        ));
        assert!(foremost_forest(&g, &ids(&[9]), TimeWindow::full(), ForestMode::Sweep).is_err());
    }

    #[test]
    fn oracle_matches_hand_enumeration_on_cycle() {
        let g = cycle4();
        let m = all_pairs_arrival(&g, TimeWindow::full());
        // d reaches d, c (one hop at 0.3) and a (one hop at 0.4), then is
        // stuck: no incident label exceeds either arrival.
        let d = VertexId(3);
        let reach_d: Vec<u32> = (0..4)
            .filter(|&x| m.reaches(d, VertexId(x)))
            .collect();
        assert_eq!(reach_d, vec![0, 2, 3]);
        assert_eq!(m.arrival(d, VertexId(0)), Some(0.4));
        assert_eq!(m.arrival(d, VertexId(2)), Some(0.3));
        // Non-transitivity: d->a, a->b, but not d->b.
        assert!(m.reaches(d, VertexId(0)));
        assert!(m.reaches(VertexId(0), VertexId(1)));
        assert!(!m.reaches(d, VertexId(1)));
        // Reflexive at time zero.
        assert_eq!(m.arrival(d, d), Some(0.0));
    }

    #[test]
    fn oracle_on_empty_graph_is_identity() {
        let g = TemporalGraph::new(5, vec![]).unwrap();
        let m = all_pairs_arrival(&g, TimeWindow::full());
        for u in 0..5u32 {
            for v in 0..5u32 {
                assert_eq!(m.reaches(VertexId(u), VertexId(v)), u == v);
            }
        }
        assert!(!m.is_temporally_connected());
        let g1 = TemporalGraph::new(1, vec![]).unwrap();
        assert!(is_temporally_connected(&g1));
    }

    #[test]
    fn reach_and_coreach_sets_on_cycle() {
        let g = cycle4();
        let w = TimeWindow::full();
        assert_eq!(reach_set(&g, VertexId(0), w).unwrap(), ids(&[0, 1, 2, 3]));
        // b is reached by a (0.1 then done), by c (single edge at 0.2), not by d.
        assert_eq!(coreach_set(&g, VertexId(1), w).unwrap(), ids(&[0, 1, 2]));
        // Empty window: just the vertex itself.
        let empty = TimeWindow::from_f64(0.95, 0.99).unwrap();
        assert_eq!(reach_set(&g, VertexId(0), empty).unwrap(), ids(&[0]));
    }

    #[test]
    fn coreach_agrees_with_matrix_rows() {
        let g = cycle4();
        let m = all_pairs_reach(&g, TimeWindow::full());
        for v in 0..4u32 {
            let v = VertexId(v);
            let from_rows: Vec<VertexId> = (0..4u32)
                .map(VertexId)
                .filter(|&u| m.reaches(u, v))
                .collect();
            assert_eq!(coreach_set(&g, v, TimeWindow::full()).unwrap(), from_rows);
        }
    }

    #[test]
    fn sources_on_cycle() {
        let g = cycle4();
        let srcs: Vec<u32> = (0..4u32)
            .filter(|&v| is_temporal_source(&g, VertexId(v)).unwrap())
            .collect();
        assert_eq!(srcs, vec![0, 1, 2]);
        assert!(!is_temporally_connected(&g));

        let k2 = TemporalGraph::new(2, vec![edge(0, 1, 0.5)]).unwrap();
        assert!(is_temporally_connected(&k2));
    }

    #[test]
    fn window_restricts_growth() {
        let g = cycle4();
        let w = TimeWindow::from_f64(0.15, 0.35).unwrap();
        let (f, _) = foremost_forest(&g, &ids(&[1]), w, ForestMode::Sweep).unwrap();
        // Only b-c@0.2 and c-d@0.3 are inside the window.
        assert_eq!(f.reached_vertices(), ids(&[1, 2, 3]));
    }

    #[test]
    fn first_hop_ignores_window_independent_zero_label() {
        // An edge labelled exactly 0.0 is usable as a first hop but not as a
        // continuation after an arrival at 0.0.
        let g = TemporalGraph::new(
            3,
            vec![edge(0, 1, 0.0), edge(1, 2, 0.25)],
        )
        .unwrap();
        let m = all_pairs_arrival(&g, TimeWindow::full());
        assert_eq!(m.arrival(VertexId(0), VertexId(1)), Some(0.0));
        assert_eq!(m.arrival(VertexId(0), VertexId(2)), Some(0.25));
        let (f, _) =
            foremost_forest(&g, &ids(&[0]), TimeWindow::full(), ForestMode::Literal).unwrap();
        assert_eq!(f.arrival(VertexId(2)), Some(0.25));
    }

    #[test]
    fn capped_waits_use_truncation_constants_at_scale() {
        // n >= 16 activates finite caps on [s, n-s-1].
        let n = 24usize;
        let mut edges = Vec::new();
        // Path 0-1-2-...-23 with ascending labels.
        for i in 0..n - 1 {
            edges.push(edge(i as u32, i as u32 + 1, (i as f64 + 1.0) / n as f64));
        }
        let g = TemporalGraph::new(n, edges).unwrap();
        let (_, wt) =
            foremost_forest(&g, &ids(&[0]), TimeWindow::full(), ForestMode::Sweep).unwrap();
        assert_eq!(wt.start_k, 1);
        for (i, e) in wt.x.iter().enumerate() {
            let k = 1 + i;
            if k <= n - 2 {
                let c = crate::theory::truncation_constant(k, n, 1).unwrap();
                assert_eq!(wt.caps[i], c);
                assert!(wt.x_capped[i] <= c + 1e-15);
                assert!(wt.x_capped[i] <= *e);
            } else {
                assert!(wt.caps[i].is_infinite());
            }
        }
        // Capped prefix never exceeds the raw prefix.
        let mut y = 0.0;
        for (i, &xi) in wt.x.iter().enumerate() {
            y += xi;
            assert!(wt.y_capped[i] <= y + 1e-12);
        }
    }
}
