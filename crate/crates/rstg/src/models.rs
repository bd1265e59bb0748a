//! Seeded samplers for random temporal graphs.
//!
//! Two equivalent models are provided: uniform independent labels kept while
//! `label <= p` (on an arbitrary base graph), and an edge-permutation variant
//! on a static binomial graph. Labels are never rescaled after dropping the
//! `> p` tail, so a sample "is" the time interval `[0, p]` of the full
//! process and windows compose across phases without bookkeeping.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{TemporalEdge, TemporalGraph, TimeLabel, VertexId};

/// Named RNG stream: a master seed plus a stream index. Equal pairs replay
/// the identical byte sequence, and distinct indices give independent
/// streams, so parallel trials stay reproducible regardless of scheduling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        RngStream {
            master_seed,
            stream_index,
        }
    }

    /// Instantiate the generator for this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// Sampler parameters: vertex count and edge-retention probability (equally,
/// the time budget `p`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub n: usize,
    pub p: f64,
}

impl ModelParams {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("need n >= 1"));
        }
        check_probability(p)?;
        Ok(ModelParams { n, p })
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !p.is_finite() || !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

enum BaseRepr {
    /// All pairs.
    Complete,
    /// Exactly these pairs (canonical `u < v`, sorted).
    Explicit(Vec<(u32, u32)>),
    /// All pairs except these (canonical `u < v`, sorted).
    Complement(Vec<(u32, u32)>),
}

/// Simple undirected base graph for the uniform-label model. The complete
/// and complement representations stay implicit so a near-complete base on
/// tens of thousands of vertices never materializes its pair list.
pub struct BaseGraph {
    n: usize,
    repr: BaseRepr,
}

impl BaseGraph {
    pub fn complete(n: usize) -> Self {
        BaseGraph {
            n,
            repr: BaseRepr::Complete,
        }
    }

    /// Base graph with exactly the given pairs. Rejects self-loops,
    /// out-of-range endpoints and duplicate pairs.
    pub fn from_edges(n: usize, edges: Vec<(u32, u32)>) -> Result<Self> {
        let pairs = canonical_pairs(n, edges)?;
        Ok(BaseGraph {
            n,
            repr: BaseRepr::Explicit(pairs),
        })
    }

    /// Complete graph minus the `revealed` pairs.
    pub fn complement_of(n: usize, revealed: Vec<(u32, u32)>) -> Result<Self> {
        let pairs = canonical_pairs(n, revealed)?;
        Ok(BaseGraph {
            n,
            repr: BaseRepr::Complement(pairs),
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        let all = self.n * self.n.saturating_sub(1) / 2;
        match &self.repr {
            BaseRepr::Complete => all,
            BaseRepr::Explicit(e) => e.len(),
            BaseRepr::Complement(e) => all - e.len(),
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        match &self.repr {
            BaseRepr::Complete => deg.fill(self.n.saturating_sub(1)),
            BaseRepr::Explicit(edges) => {
                for &(u, v) in edges {
                    deg[u as usize] += 1;
                    deg[v as usize] += 1;
                }
            }
            BaseRepr::Complement(edges) => {
                deg.fill(self.n.saturating_sub(1));
                for &(u, v) in edges {
                    deg[u as usize] -= 1;
                    deg[v as usize] -= 1;
                }
            }
        }
        deg
    }

    /// Minimum degree δ(G). Zero for the empty-vertex-set graph.
    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    /// Maximum degree Δ(G).
    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Pairs in canonical row-major order: (0,1), (0,2), ..., (1,2), ...
    /// The samplers rely on this fixed order for reproducibility.
    pub fn edge_pairs(&self) -> BasePairs<'_> {
        BasePairs {
            n: self.n as u32,
            u: 0,
            v: 0,
            repr: &self.repr,
            cursor: 0,
        }
    }
}

fn canonical_pairs(n: usize, edges: Vec<(u32, u32)>) -> Result<Vec<(u32, u32)>> {
    let mut pairs = Vec::with_capacity(edges.len());
    for (u, v) in edges {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if u as usize >= n || v as usize >= n {
            return Err(Error::VertexOutOfRange { id: u.max(v), n });
        }
        pairs.push(if u < v { (u, v) } else { (v, u) });
    }
    pairs.sort_unstable();
    if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateEdge {
            u: w[0].0,
            v: w[0].1,
        });
    }
    Ok(pairs)
}

/// Iterator over base pairs in canonical order.
pub struct BasePairs<'a> {
    n: u32,
    u: u32,
    v: u32,
    repr: &'a BaseRepr,
    cursor: usize,
}

impl Iterator for BasePairs<'_> {
    type Item = (u32, u32);

    fn next(&mut self) -> Option<(u32, u32)> {
        match self.repr {
            BaseRepr::Explicit(edges) => {
                let out = edges.get(self.cursor).copied();
                self.cursor += 1;
                out
            }
            BaseRepr::Complete => self.next_dense(),
            BaseRepr::Complement(skip) => loop {
                let pair = self.next_dense()?;
                // Both sequences are sorted, so a single forward cursor
                // suffices to recognize revealed pairs.
                while self.cursor < skip.len() && skip[self.cursor] < pair {
                    self.cursor += 1;
                }
                if self.cursor < skip.len() && skip[self.cursor] == pair {
                    continue;
                }
                return Some(pair);
            },
        }
    }
}

impl BasePairs<'_> {
    fn next_dense(&mut self) -> Option<(u32, u32)> {
        self.v += 1;
        if self.v >= self.n {
            self.u += 1;
            self.v = self.u + 1;
        }
        if self.v >= self.n {
            None
        } else {
            Some((self.u, self.v))
        }
    }
}

/// Uniform label in (0, 1). The zero draw (probability 2^-53) is rejected so
/// `p = 0` yields an exactly empty graph and reflected labels stay below 1.
/// All outputs are multiples of 2^-53.
fn draw_label<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let t: f64 = rng.gen();
        if t != 0.0 {
            return t;
        }
    }
}

/// Uniform-label model on an arbitrary base graph: every base edge draws an
/// independent uniform label and edges with `label > p` are dropped. Labels
/// are kept as drawn (not rescaled).
pub fn sample_fp_of_g<R: Rng>(base: &BaseGraph, p: f64, rng: &mut R) -> Result<TemporalGraph> {
    check_probability(p)?;
    let mut edges: Vec<TemporalEdge> = Vec::new();
    for (u, v) in base.edge_pairs() {
        let t = draw_label(rng);
        if t <= p {
            edges.push(TemporalEdge {
                u: VertexId(u),
                v: VertexId(v),
                label: TimeLabel::new_unchecked(t),
            });
        }
    }
    edges.sort_unstable_by(|a, b| a.label.cmp(&b.label));
    resolve_duplicate_labels(&mut edges, p, rng);
    Ok(TemporalGraph::from_sorted_unchecked(base.n(), edges))
}

/// Replace duplicate labels by fresh draws. With 53-bit labels a collision
/// is astronomically unlikely; the loop exists so the sampler is total.
fn resolve_duplicate_labels<R: Rng>(edges: &mut Vec<TemporalEdge>, p: f64, rng: &mut R) {
    loop {
        let mut dup_at: Vec<usize> = Vec::new();
        for i in 1..edges.len() {
            if edges[i].label == edges[i - 1].label {
                dup_at.push(i);
            }
        }
        if dup_at.is_empty() {
            return;
        }
        let mut removed = false;
        for &i in &dup_at {
            let t = draw_label(rng);
            if t <= p {
                edges[i].label = TimeLabel::new_unchecked(t);
            } else {
                // The redraw fell outside the retained range; drop the edge.
                edges[i].label = TimeLabel::new_unchecked(1.0);
                removed = true;
            }
        }
        if removed {
            edges.retain(|e| e.label.get() < 1.0);
        }
        edges.sort_unstable_by(|a, b| a.label.cmp(&b.label));
    }
}

/// The classic random simple temporal graph: uniform labels on the complete
/// graph, truncated at `p`. Identical code path to
/// [`sample_fp_of_g`] with a complete base.
pub fn sample_fnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<TemporalGraph> {
    sample_fp_of_g(&BaseGraph::complete(n), p, rng)
}

/// Permutation variant: draw a static binomial graph, order its edges by a
/// uniform random permutation, and embed rank `i` (1-based) at label
/// `(i - 0.5)/m`. Distributionally equivalent to the uniform-label model
/// for every property that ignores absolute label values.
pub fn sample_rstg_permutation<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<TemporalGraph> {
    let base = sample_gnp(n, p, rng)?;
    let mut pairs: Vec<(u32, u32)> = base.edge_pairs().collect();
    pairs.shuffle(rng);
    let m = pairs.len() as f64;
    let edges = pairs
        .into_iter()
        .enumerate()
        .map(|(i, (u, v))| TemporalEdge {
            u: VertexId(u),
            v: VertexId(v),
            label: TimeLabel::new_unchecked((i as f64 + 0.5) / m),
        })
        .collect();
    Ok(TemporalGraph::from_sorted_unchecked(n, edges))
}

/// Distribution-identical fast path for [`sample_fnp`] at small `p`: only
/// the retained edges are generated, via geometric skips over the canonical
/// row-major pair order. Retained labels are uniform multiples of 2^-53 in
/// (0, p], which is exactly the dense sampler's conditional label law, so
/// the output graph has the same distribution (though a given rng state
/// yields a different instance than [`sample_fnp`]). Cost is O(retained)
/// instead of O(n^2).
pub fn sample_fnp_sparse<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<TemporalGraph> {
    ModelParams::new(n, p)?;
    const GRID: f64 = (1u64 << 53) as f64;
    // Labels are k * 2^-53 with 1 <= k <= max_k; retention probability is
    // exactly max_k / 2^53, matching `label <= p` on the label grid.
    let max_k = (p * GRID).floor() as u64;
    if max_k == 0 {
        return TemporalGraph::new(n, vec![]);
    }
    let q = max_k as f64 / GRID;
    let total: u64 = n as u64 * (n as u64 - 1) / 2;
    let ln_miss = (-q).ln_1p();
    let mut edges: Vec<TemporalEdge> = Vec::new();
    // Pair cursor in row-major order: (u, u+1), (u, u+2), ..., (u+1, u+2), ...
    let (mut u, mut v) = (0u64, 1u64);
    let mut idx: u64 = 0;
    while idx < total {
        if q < 1.0 {
            let draw: f64 = rng.gen();
            let skip_f = ((1.0 - draw).ln() / ln_miss).floor();
            if skip_f >= (total - idx) as f64 {
                break;
            }
            let mut skip = skip_f as u64;
            idx += skip;
            // Advance the (u, v) cursor by `skip` pairs.
            loop {
                let row_left = n as u64 - v;
                if skip < row_left {
                    v += skip;
                    break;
                }
                skip -= row_left;
                u += 1;
                v = u + 1;
            }
        }
        let k = rng.gen_range(1..=max_k);
        edges.push(TemporalEdge {
            u: VertexId(u as u32),
            v: VertexId(v as u32),
            label: TimeLabel::new_unchecked(k as f64 / GRID),
        });
        idx += 1;
        v += 1;
        if v >= n as u64 {
            u += 1;
            v = u + 1;
        }
    }
    edges.sort_unstable_by(|a, b| a.label.cmp(&b.label));
    resolve_duplicate_labels(&mut edges, p, rng);
    Ok(TemporalGraph::from_sorted_unchecked(n, edges))
}

/// Static binomial graph: each pair present independently with probability `p`.
pub fn sample_gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<BaseGraph> {
    check_probability(p)?;
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for pair in BaseGraph::complete(n).edge_pairs() {
        if rng.gen::<f64>() < p {
            edges.push(pair);
        }
    }
    Ok(BaseGraph {
        n,
        repr: BaseRepr::Explicit(edges),
    })
}

/// `K_n` minus the revealed pairs; the base graph used after an adaptive
/// phase has already looked at (and must no longer reuse) some pairs.
pub fn complement_base(n: usize, revealed: Vec<(u32, u32)>) -> Result<BaseGraph> {
    BaseGraph::complement_of(n, revealed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_base_counts() {
        let b = BaseGraph::complete(5);
        assert_eq!(b.edge_count(), 10);
        assert_eq!(b.min_degree(), 4);
        assert_eq!(b.max_degree(), 4);
        let pairs: Vec<_> = b.edge_pairs().collect();
        assert_eq!(pairs.len(), 10);
        assert_eq!(pairs[0], (0, 1));
        assert_eq!(pairs[9], (3, 4));
        assert!(pairs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn complement_base_examples() {
        let b = complement_base(4, vec![]).unwrap();
        assert_eq!(b.edge_count(), 6);

        let b = complement_base(4, vec![(0, 1)]).unwrap();
        assert_eq!(b.edge_count(), 5);
        assert_eq!(b.min_degree(), 2);
        assert_eq!(b.max_degree(), 3);
        let pairs: Vec<_> = b.edge_pairs().collect();
        assert!(!pairs.contains(&(0, 1)));
        assert_eq!(pairs.len(), 5);

        let all: Vec<_> = BaseGraph::complete(4).edge_pairs().collect();
        let b = complement_base(4, all).unwrap();
        assert_eq!(b.edge_count(), 0);
        assert_eq!(b.edge_pairs().count(), 0);

        assert!(complement_base(3, vec![(0, 0)]).is_err());
        assert!(complement_base(3, vec![(0, 5)]).is_err());
        assert!(complement_base(3, vec![(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn fp_of_g_edge_cases() {
        let mut rng = RngStream::new(7, 0).rng();
        let g = sample_fnp(10, 0.0, &mut rng).unwrap();
        assert_eq!((g.n(), g.m()), (10, 0));

        let g = sample_fnp(1, 0.7, &mut rng).unwrap();
        assert_eq!((g.n(), g.m()), (1, 0));

        let g = sample_fp_of_g(&BaseGraph::complete(3), 1.0, &mut rng).unwrap();
        assert_eq!(g.m(), 3);
        let mut labels: Vec<f64> = g.edges().iter().map(|e| e.label.get()).collect();
        labels.dedup();
        assert_eq!(labels.len(), 3);
        assert!(labels.iter().all(|&t| 0.0 < t && t < 1.0));

        assert!(sample_fnp(5, -0.1, &mut rng).is_err());
        assert!(sample_fnp(5, 1.1, &mut rng).is_err());
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = sample_fnp(40, 0.5, &mut RngStream::new(123, 9).rng()).unwrap();
        let b = sample_fnp(40, 0.5, &mut RngStream::new(123, 9).rng()).unwrap();
        assert_eq!(a, b);

        let c = sample_fnp(40, 0.5, &mut RngStream::new(123, 10).rng()).unwrap();
        assert_ne!(a, c);
        let d = sample_fnp(40, 0.5, &mut RngStream::new(124, 9).rng()).unwrap();
        assert_ne!(a, d);
    }

    #[test]
    fn stream_independence_smoke() {
        // Edge counts from paired streams should be essentially uncorrelated.
        let trials = 200;
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for i in 0..trials {
            let x = sample_fnp(30, 0.4, &mut RngStream::new(555, i).rng())
                .unwrap()
                .m() as f64;
            let y = sample_fnp(30, 0.4, &mut RngStream::new(555, i + 10_000).rng())
                .unwrap()
                .m() as f64;
            xs.push(x);
            ys.push(y);
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let (mx, my) = (mean(&xs), mean(&ys));
        let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let vx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let vy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
        let r = cov / (vx * vy).sqrt();
        assert!(r.abs() < 0.2, "correlation {r}");
    }

    #[test]
    fn retained_count_is_binomial_scale() {
        // K_200 has 19900 pairs; at p=0.1 every draw should land within 4
        // sigma of the mean.
        let (m, p): (f64, f64) = (19_900.0, 0.1);
        let sigma = (m * p * (1.0 - p)).sqrt();
        for seed in 0..100 {
            let g = sample_fnp(200, p, &mut RngStream::new(42, seed).rng()).unwrap();
            assert!(
                (g.m() as f64 - m * p).abs() <= 4.0 * sigma,
                "seed {seed}: count {}",
                g.m()
            );
        }
    }

    #[test]
    fn single_edge_label_is_uniform() {
        let mut sum = 0.0;
        let trials = 10_000u64;
        for seed in 0..trials {
            let g = sample_fnp(2, 1.0, &mut RngStream::new(9, seed).rng()).unwrap();
            assert_eq!(g.m(), 1);
            sum += g.edges()[0].label.get();
        }
        let mean = sum / trials as f64;
        assert!((mean - 0.5).abs() < 0.02, "mean label {mean}");
    }

    #[test]
    fn permutation_model_basics() {
        // n=2: empty or a single edge at exactly 0.5.
        for seed in 0..20 {
            let g = sample_rstg_permutation(2, 0.5, &mut RngStream::new(3, seed).rng()).unwrap();
            assert!(g.m() == 0 || (g.m() == 1 && g.edges()[0].label.get() == 0.5));
        }

        let g = sample_rstg_permutation(30, 0.6, &mut RngStream::new(4, 0).rng()).unwrap();
        let m = g.m() as f64;
        for (i, e) in g.edges().iter().enumerate() {
            assert_eq!(e.label.get(), (i as f64 + 0.5) / m);
        }
    }

    #[test]
    fn gnp_extremes() {
        let mut rng = RngStream::new(11, 0).rng();
        assert_eq!(sample_gnp(20, 0.0, &mut rng).unwrap().edge_count(), 0);
        let k = sample_gnp(20, 1.0, &mut rng).unwrap();
        assert_eq!(k.edge_count(), 190);
        assert_eq!(k.min_degree(), 19);
    }

    #[test]
    fn sparse_sampler_extremes() {
        let mut rng = RngStream::new(21, 0).rng();
        assert_eq!(sample_fnp_sparse(50, 0.0, &mut rng).unwrap().m(), 0);
        // p = 1 keeps every pair; labels are distinct, ascending, on-grid.
        let g = sample_fnp_sparse(30, 1.0, &mut rng).unwrap();
        assert_eq!(g.m(), 435);
        for w in g.edges().windows(2) {
            assert!(w[0].label < w[1].label);
        }
        assert_eq!(g.reverse_time().reverse_time(), g);
        assert!(sample_fnp_sparse(0, 0.5, &mut rng).is_err());
    }

    #[test]
    fn sparse_sampler_retained_count_is_binomial_scale() {
        let (m, p): (f64, f64) = (19_900.0, 0.1);
        let sigma = (m * p * (1.0 - p)).sqrt();
        for seed in 0..100 {
            let g = sample_fnp_sparse(200, p, &mut RngStream::new(22, seed).rng()).unwrap();
            assert!(
                (g.m() as f64 - m * p).abs() <= 4.0 * sigma,
                "seed {seed}: count {}",
                g.m()
            );
        }
    }

    #[test]
    fn sparse_sampler_covers_first_and_last_pairs_uniformly() {
        // Off-by-one errors in the skip cursor would bias the boundary pairs.
        let (n, p, trials) = (30usize, 0.2, 4000);
        let (mut first, mut last) = (0usize, 0usize);
        for seed in 0..trials {
            let g = sample_fnp_sparse(n, p, &mut RngStream::new(23, seed).rng()).unwrap();
            let has = |a: u32, b: u32| {
                g.edges().iter().any(|e| (e.u.0, e.v.0) == (a, b))
            };
            first += has(0, 1) as usize;
            last += has(28, 29) as usize;
        }
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        for (name, count) in [("first", first), ("last", last)] {
            let freq = count as f64 / trials as f64;
            assert!((freq - p).abs() <= 4.5 * sigma, "{name} pair freq {freq}");
        }
    }

    #[test]
    fn sparse_sampler_labels_live_in_the_truncated_range() {
        let p = 0.3;
        let mut sum = 0.0;
        let mut count = 0usize;
        for seed in 0..200 {
            let g = sample_fnp_sparse(100, p, &mut RngStream::new(24, seed).rng()).unwrap();
            for e in g.edges() {
                let t = e.label.get();
                assert!(t > 0.0 && t <= p);
                sum += t;
                count += 1;
            }
        }
        let mean = sum / count as f64;
        assert!((mean - p / 2.0).abs() < 0.005, "mean label {mean}");
    }

    #[test]
    fn sparse_and_dense_samplers_agree_in_distribution() {
        let (n, p) = (60usize, 0.15);
        let trials = 300;
        let mean = |sparse: bool| -> f64 {
            (0..trials)
                .map(|seed| {
                    let mut rng = RngStream::new(25 + sparse as u64, seed).rng();
                    let g = if sparse {
                        sample_fnp_sparse(n, p, &mut rng).unwrap()
                    } else {
                        sample_fnp(n, p, &mut rng).unwrap()
                    };
                    g.m() as f64
                })
                .sum::<f64>()
                / trials as f64
        };
        let expect = 1770.0 * p;
        let sigma = (1770.0 * p * (1.0 - p)).sqrt();
        let tol = 4.0 * sigma / (trials as f64).sqrt();
        assert!((mean(true) - expect).abs() <= tol, "sparse mean {}", mean(true));
        assert!((mean(false) - expect).abs() <= tol, "dense mean {}", mean(false));
    }
}
