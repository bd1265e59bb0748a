//! Largest open and closed temporally connected components.
//!
//! A vertex set Z is an *open* component when every ordered pair in Z is
//! connected by a temporal path that may leave Z, so membership is a pairwise
//! condition and open components are exactly the cliques of the mutual-reach
//! graph. A *closed* component requires the connecting paths to stay inside
//! the induced subgraph, which is not pairwise; we compute it exactly by
//! subset enumeration at tiny n and by an iterative peeling heuristic at
//! experiment scale.

use serde::Serialize;

use crate::bitset::{iter_bits, test_bit, BitMatrix};
use crate::error::{Error, Result};
use crate::graph::{TemporalGraph, TimeWindow, VertexId};
use crate::reach::{all_pairs_reach, ReachMatrix};

/// Default vertex cap for the branch-and-bound open-component solver.
pub const OPEN_EXACT_CAP_DEFAULT: usize = 64;
/// Default vertex cap for the subset-enumeration closed-component solver.
pub const CLOSED_EXACT_CAP_DEFAULT: usize = 16;

/// Symmetric graph with u ~ v iff u and v reach each other inside the
/// window. Loops are excluded.
#[derive(Clone, Debug)]
pub struct MutualReachGraph {
    n: usize,
    adj: BitMatrix,
}

impl MutualReachGraph {
    pub fn from_reach(reach: &ReachMatrix) -> Self {
        let n = reach.n();
        // Row v of the reach matrix is "who reaches v"; its transpose row v
        // is "whom v reaches". The conjunction is the mutual relation.
        let mut adj = reach.rows().transpose();
        for v in 0..n {
            let (t, r) = (adj.row_mut(v), reach.rows().row(v));
            for w in 0..t.len() {
                t[w] &= r[w];
            }
        }
        for v in 0..n {
            adj.clear(v, v);
        }
        MutualReachGraph { n, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj.get(u.idx(), v.idx())
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj.row_count(v.idx())
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.adj.row_count(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Edge list with u < v, ascending.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in iter_bits(self.adj.row(u)) {
                if u < v {
                    out.push((VertexId(u as u32), VertexId(v as u32)));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.adj.row_count(v)).sum::<usize>() / 2
    }

    fn neighbors(&self, v: usize) -> &[u64] {
        self.adj.row(v)
    }

    /// Adjacency packed into one word per vertex; only possible for n <= 64.
    fn adjacency_u64(&self) -> Option<Vec<u64>> {
        if self.n > 64 {
            return None;
        }
        Some((0..self.n).map(|v| self.adj.row(v).first().copied().unwrap_or(0)).collect())
    }

    /// Number of colors used by a greedy proper coloring in degree-descending
    /// order (ties by id). Any proper coloring uses at least as many colors
    /// as the largest clique, so the count is an upper bound on it.
    pub fn greedy_coloring_bound(&self) -> usize {
        if self.n == 0 {
            return 0;
        }
        let mut order: Vec<usize> = (0..self.n).collect();
        let degs = self.degrees();
        order.sort_by_key(|&v| (usize::MAX - degs[v], v));
        let mut color = vec![usize::MAX; self.n];
        let mut used = vec![false; self.n + 1];
        let mut max_color = 0;
        for &v in &order {
            for u in iter_bits(self.neighbors(v)) {
                if color[u] != usize::MAX {
                    used[color[u]] = true;
                }
            }
            let c = (0..).find(|&c| !used[c]).unwrap();
            color[v] = c;
            max_color = max_color.max(c);
            for u in iter_bits(self.neighbors(v)) {
                if color[u] != usize::MAX {
                    used[color[u]] = false;
                }
            }
        }
        max_color + 1
    }
}

/// Build the mutual-reach graph of `g` restricted to `window`.
pub fn mutual_reach_graph(g: &TemporalGraph, window: TimeWindow) -> MutualReachGraph {
    MutualReachGraph::from_reach(&all_pairs_reach(g, window))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Open,
    Closed,
}

/// A certified component estimate: `lower_set` passes the corresponding
/// verifier, and no component of its kind exceeds `upper_bound`.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentEstimate {
    pub kind: ComponentKind,
    pub lower_set: Vec<VertexId>,
    pub upper_bound: usize,
    pub method: String,
}

impl ComponentEstimate {
    pub fn size_lower(&self) -> usize {
        self.lower_set.len()
    }
}

fn mask_to_ids(mask: u64) -> Vec<VertexId> {
    (0..64).filter(|&b| mask >> b & 1 == 1).map(VertexId).collect()
}

/// Branch and bound with a greedy-coloring pruning bound. `cand` vertices are
/// all adjacent to everything in `current`.
fn bnb_clique(adj: &[u64], current: u64, cand: u64, best: &mut u64) {
    if cand == 0 {
        if current.count_ones() > best.count_ones() {
            *best = current;
        }
        return;
    }
    // Color the candidates greedily; a clique inside cand needs one vertex
    // per color class, so color number bounds extension size.
    let mut order: Vec<(u32, u32)> = Vec::with_capacity(cand.count_ones() as usize);
    let mut uncolored = cand;
    let mut color = 0u32;
    while uncolored != 0 {
        color += 1;
        let mut avail = uncolored;
        while avail != 0 {
            let v = avail.trailing_zeros();
            let vb = 1u64 << v;
            order.push((v, color));
            uncolored &= !vb;
            avail &= !(vb | adj[v as usize]);
        }
    }
    let mut p = cand;
    for &(v, color) in order.iter().rev() {
        if current.count_ones() + color <= best.count_ones() {
            return;
        }
        let vb = 1u64 << v;
        bnb_clique(adj, current | vb, p & adj[v as usize], best);
        p &= !vb;
    }
}

/// Maximum open component by exact maximum clique over the mutual-reach
/// graph. Refuses n > cap; cap itself cannot exceed 64.
pub fn largest_open_exact(
    g: &TemporalGraph,
    window: TimeWindow,
    cap: usize,
) -> Result<ComponentEstimate> {
    if cap > 64 {
        return Err(Error::domain("open exact solver is limited to 64 vertices"));
    }
    if g.n() > cap {
        return Err(Error::domain(format!(
            "n = {} exceeds exact-solver cap {cap}",
            g.n()
        )));
    }
    let m = mutual_reach_graph(g, window);
    if m.n() == 0 {
        return Ok(ComponentEstimate {
            kind: ComponentKind::Open,
            lower_set: vec![],
            upper_bound: 0,
            method: "exact_bnb".into(),
        });
    }
    let adj = m.adjacency_u64().expect("n <= 64");
    let full = if m.n() == 64 { u64::MAX } else { (1u64 << m.n()) - 1 };
    let mut best = 0u64;
    bnb_clique(&adj, 0, full, &mut best);
    let lower_set = mask_to_ids(best);
    Ok(ComponentEstimate {
        kind: ComponentKind::Open,
        upper_bound: lower_set.len(),
        lower_set,
        method: "exact_bnb".into(),
    })
}

struct Masked {
    words: usize,
    bits: Vec<u64>,
}

impl Masked {
    fn empty(n: usize) -> Self {
        Masked {
            words: n.div_ceil(64),
            bits: vec![0; n.div_ceil(64)],
        }
    }

    fn remove(&mut self, v: usize) {
        self.bits[v / 64] &= !(1u64 << (v % 64));
    }

    fn and_assign(&mut self, row: &[u64]) {
        for w in 0..self.words {
            self.bits[w] &= row[w];
        }
    }
}

/// Greedy clique with one swap-improvement pass over the mutual-reach graph.
/// Seed is the max-degree vertex; extension always takes the max-degree
/// candidate adjacent to all members. Ties break to the smaller id.
fn greedy_clique(m: &MutualReachGraph) -> Vec<usize> {
    let n = m.n();
    if n == 0 {
        return vec![];
    }
    let degs = m.degrees();
    let pick = |cand: &Masked| -> Option<usize> {
        let mut best: Option<usize> = None;
        for v in iter_bits(&cand.bits) {
            if best.map_or(true, |b| degs[v] > degs[b]) {
                best = Some(v);
            }
        }
        best
    };

    let seed = (0..n).max_by_key(|&v| (degs[v], usize::MAX - v)).unwrap();
    let mut clique = vec![seed];
    let mut cand = Masked::empty(n);
    cand.bits.copy_from_slice(m.neighbors(seed));
    while let Some(v) = pick(&cand) {
        clique.push(v);
        cand.remove(v);
        cand.and_assign(m.neighbors(v));
    }

    // One swap pass: dropping one member sometimes admits two replacements.
    let snapshot = clique.clone();
    for &u in &snapshot {
        if !clique.contains(&u) {
            continue;
        }
        let mut cand = Masked::empty(n);
        cand.bits = vec![u64::MAX; cand.words];
        for &x in clique.iter().filter(|&&x| x != u) {
            cand.and_assign(m.neighbors(x));
        }
        for &x in &clique {
            cand.remove(x);
        }
        // Tail bits beyond n are never set in adjacency rows, so the initial
        // all-ones mask is safe once one neighbor row is folded in; a
        // singleton clique keeps it, so trim explicitly.
        if clique.len() == 1 {
            for b in n..cand.words * 64 {
                cand.remove(b);
            }
        }
        let mut swap: Option<(usize, usize)> = None;
        'outer: for w1 in iter_bits(&cand.bits) {
            for w2 in iter_bits(&cand.bits) {
                if w2 > w1 && test_bit(m.neighbors(w1), w2) {
                    swap = Some((w1, w2));
                    break 'outer;
                }
            }
        }
        if let Some((w1, w2)) = swap {
            clique.retain(|&x| x != u);
            clique.push(w1);
            clique.push(w2);
            // Re-extend greedily from the improved clique.
            let mut cand = Masked::empty(n);
            cand.bits.copy_from_slice(m.neighbors(clique[0]));
            for &x in &clique[1..] {
                cand.and_assign(m.neighbors(x));
            }
            while let Some(v) = pick(&cand) {
                clique.push(v);
                cand.remove(v);
                cand.and_assign(m.neighbors(v));
            }
        }
    }
    clique.sort_unstable();
    clique
}

/// Certified open-component bounds at experiment scale: greedy clique below,
/// min(coloring count, max over v of |reach(v) ∩ coreach(v)|) above.
pub fn largest_open_bounds(g: &TemporalGraph, window: TimeWindow) -> ComponentEstimate {
    let m = mutual_reach_graph(g, window);
    let lower: Vec<VertexId> = greedy_clique(&m)
        .into_iter()
        .map(|v| VertexId(v as u32))
        .collect();
    // |reach(v) ∩ coreach(v)| is the mutual degree plus v itself.
    let reach_bound = if m.n() == 0 { 0 } else { m.max_degree() + 1 };
    let upper = m.greedy_coloring_bound().min(reach_bound).max(lower.len());
    ComponentEstimate {
        kind: ComponentKind::Open,
        lower_set: lower,
        upper_bound: upper,
        method: "greedy_clique/coloring".into(),
    }
}

/// True iff every ordered pair of `s` is connected by a temporal path that
/// stays inside the induced subgraph, within `window`.
pub fn verify_closed(g: &TemporalGraph, s: &[VertexId], window: TimeWindow) -> Result<bool> {
    if s.is_empty() {
        return Err(Error::EmptySources);
    }
    let sub = g.induced_subgraph(s)?;
    Ok(all_pairs_reach(&sub.graph, window).is_temporally_connected())
}

/// Maximum closed component by checking every vertex subset. Refuses n > cap;
/// cap itself cannot exceed 20 (the loop is 2^n).
pub fn largest_closed_exact_tiny(
    g: &TemporalGraph,
    window: TimeWindow,
    cap: usize,
) -> Result<ComponentEstimate> {
    if cap > 20 {
        return Err(Error::domain("subset enumeration is limited to 20 vertices"));
    }
    let n = g.n();
    if n > cap {
        return Err(Error::domain(format!("n = {n} exceeds enumeration cap {cap}")));
    }
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .filter(|e| window.contains(e.label))
        .map(|e| (e.u.idx(), e.v.idx()))
        .collect();
    let closed_ok = |mask: u32| -> bool {
        let mut rows = [0u32; 20];
        let mut mv = mask;
        while mv != 0 {
            let v = mv.trailing_zeros() as usize;
            rows[v] = 1 << v;
            mv &= mv - 1;
        }
        for &(u, v) in &edges {
            if mask >> u & 1 == 1 && mask >> v & 1 == 1 {
                let (a, b) = (rows[u], rows[v]);
                rows[u] = a | b;
                rows[v] = b | a;
            }
        }
        let mut mv = mask;
        while mv != 0 {
            let v = mv.trailing_zeros() as usize;
            if rows[v] & mask != mask {
                return false;
            }
            mv &= mv - 1;
        }
        true
    };
    let mut best: u32 = 0;
    for mask in 1u32..1 << n {
        if mask.count_ones() > best.count_ones() && closed_ok(mask) {
            best = mask;
        }
    }
    let lower_set: Vec<VertexId> = (0..n as u32).filter(|&v| best >> v & 1 == 1).map(VertexId).collect();
    Ok(ComponentEstimate {
        kind: ComponentKind::Closed,
        upper_bound: lower_set.len(),
        lower_set,
        method: "exact_subsets".into(),
    })
}

/// Closed-component lower bound by iterative peeling, with the removal order
/// exposed. Each round runs all-pairs reachability inside the surviving
/// induced subgraph; the vertex with the most failures (as source plus as
/// target, ties to the smaller id) is removed until the rest verifies closed.
pub fn largest_closed_peel_trace(
    g: &TemporalGraph,
    window: TimeWindow,
) -> (ComponentEstimate, Vec<VertexId>) {
    let n = g.n();
    let upper = largest_open_bounds(g, window).upper_bound;
    if n == 0 {
        return (
            ComponentEstimate {
                kind: ComponentKind::Closed,
                lower_set: vec![],
                upper_bound: 0,
                method: "peel".into(),
            },
            vec![],
        );
    }
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .filter(|e| window.contains(e.label))
        .map(|e| (e.u.idx(), e.v.idx()))
        .collect();
    let mut member = vec![true; n];
    let mut count = n;
    let mut removed = Vec::new();
    loop {
        // Reachability restricted to the surviving members, on original ids.
        let mut rows = BitMatrix::new(n);
        for v in 0..n {
            if member[v] {
                rows.set(v, v);
            }
        }
        for &(u, v) in &edges {
            if member[u] && member[v] {
                let (ru, rv) = rows.two_rows_mut(u, v);
                for w in 0..ru.len() {
                    let (a, b) = (ru[w], rv[w]);
                    ru[w] = a | b;
                    rv[w] = b | a;
                }
            }
        }
        let cols = rows.column_counts();
        let mut worst = 0usize;
        let mut worst_v = usize::MAX;
        for v in 0..n {
            if !member[v] {
                continue;
            }
            let fails = (count - rows.row_count(v)) + (count - cols[v]);
            if fails > worst {
                worst = fails;
                worst_v = v;
            }
        }
        if worst == 0 {
            break;
        }
        member[worst_v] = false;
        count -= 1;
        removed.push(VertexId(worst_v as u32));
    }
    let lower_set: Vec<VertexId> = (0..n as u32).filter(|&v| member[v as usize]).map(VertexId).collect();
    (
        ComponentEstimate {
            kind: ComponentKind::Closed,
            upper_bound: upper.max(lower_set.len()),
            lower_set,
            method: "peel".into(),
        },
        removed,
    )
}

/// Closed-component lower bound by iterative peeling.
pub fn largest_closed_peel(g: &TemporalGraph, window: TimeWindow) -> ComponentEstimate {
    largest_closed_peel_trace(g, window).0
}
