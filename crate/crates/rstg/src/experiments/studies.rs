//! Focused Monte Carlo studies around earliest-arrival forest growth:
//! waiting-time concentration, target-set reachability on dense bases, the
//! pair/source/connectivity threshold ladder, and the distribution of the
//! vertex a growing forest acquires at a fixed checkpoint.

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::graph::{TimeWindow, VertexId};
use crate::models::{sample_fnp, sample_fnp_sparse, sample_fp_of_g, sample_gnp, BaseGraph, RngStream};
use crate::reach::{all_pairs_reach, foremost_forest, ForestMode};
use crate::theory;

/// Per-trial deviation maxima of the capped arrival sequence against the
/// exact expected-arrival sum and its logarithmic estimate.
///
/// Deviations are tracked on the index range `[s, n-s-1]` where the
/// truncation constants are finite; when that range is empty (2s >= n) the
/// deviation vectors are empty and no trials are run.
#[derive(Clone, Debug, Serialize)]
pub struct WaitingTimeSummary {
    pub n: usize,
    pub s: usize,
    pub trials: usize,
    /// max_k |Yhat_k - sum_{i=s}^{k} 1/(i(n-i)+1)|, one entry per trial.
    pub max_dev_exact: Vec<f64>,
    /// Same maxima against the logarithmic estimate of that sum.
    pub max_dev_log: Vec<f64>,
}

impl WaitingTimeSummary {
    /// Fraction of trials whose exact-sum deviation stays within `window`.
    /// Vacuously 1 when the tracked range was empty.
    pub fn fraction_exact_within(&self, window: f64) -> f64 {
        fraction_within(&self.max_dev_exact, window)
    }

    /// Fraction of trials whose log-estimate deviation stays within `window`.
    pub fn fraction_log_within(&self, window: f64) -> f64 {
        fraction_within(&self.max_dev_log, window)
    }
}

fn fraction_within(devs: &[f64], window: f64) -> f64 {
    if devs.is_empty() {
        return 1.0;
    }
    devs.iter().filter(|&&d| d <= window).count() as f64 / devs.len() as f64
}

/// Grow a forest from a random `s`-set on a fully labelled complete graph,
/// `trials` times, and record how far the capped arrival sequence strays
/// from its expected trajectory.
pub fn run_waiting_time_study(
    n: usize,
    s: usize,
    trials: usize,
    master_seed: u64,
) -> Result<WaitingTimeSummary> {
    if n < 2 {
        return Err(Error::domain(format!("waiting-time study needs n >= 2, got {n}")));
    }
    if s < 1 || s > n {
        return Err(Error::domain(format!("source count must be in [1, {n}], got {s}")));
    }
    if trials < 1 {
        return Err(Error::domain("trials must be at least 1"));
    }
    if 2 * s >= n {
        // Tracked index range [s, n-s-1] is empty.
        return Ok(WaitingTimeSummary {
            n,
            s,
            trials,
            max_dev_exact: Vec::new(),
            max_dev_log: Vec::new(),
        });
    }

    let devs: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<(f64, f64)> {
            let mut rng = RngStream::new(master_seed, trial as u64).rng();
            let g = sample_fnp(n, 1.0, &mut rng)?;
            let sources: Vec<VertexId> = sample_indices(&mut rng, n, s)
                .iter()
                .map(|i| VertexId(i as u32))
                .collect();
            let (_, wt) = foremost_forest(&g, &sources, TimeWindow::full(), ForestMode::Sweep)?;
            let mut dev_exact = 0.0f64;
            let mut dev_log = 0.0f64;
            for k in s..=n - s - 1 {
                // On a complete base the forest always completes, so entry
                // k - s exists for every k below n.
                let y = wt.y_capped[k - s];
                dev_exact = dev_exact.max((y - theory::harmonic_sum(s, k, n)?).abs());
                let est = theory::harmonic_sum_estimate(s, k, n)?.value;
                dev_log = dev_log.max((y - est).abs());
            }
            Ok((dev_exact, dev_log))
        })
        .collect::<Result<_>>()?;

    Ok(WaitingTimeSummary {
        n,
        s,
        trials,
        max_dev_exact: devs.iter().map(|d| d.0).collect(),
        max_dev_log: devs.iter().map(|d| d.1).collect(),
    })
}

/// Removal budget per vertex that keeps the base's minimum degree at or
/// above `n - (log n)^2`.
fn removal_budget(n: usize) -> usize {
    let b = (n as f64).ln().powi(2) - 1.0;
    (b.max(0.0).floor() as usize).min(n.saturating_sub(1))
}

/// Complete graph minus a sparse random graph whose maximum degree stays
/// under [`removal_budget`], so the result has minimum degree at least
/// `n - (log n)^2`. Removals are drawn at density `(log n)^2 / 2n` and an
/// edge is dropped from the removal set if it would overrun either
/// endpoint's budget (rare at that density).
fn dense_base_with_random_holes<R: Rng>(n: usize, rng: &mut R) -> Result<BaseGraph> {
    let budget = removal_budget(n);
    if budget == 0 {
        return Ok(BaseGraph::complete(n));
    }
    let q = ((n as f64).ln().powi(2) / (2.0 * n as f64)).min(1.0);
    let revealed = sample_gnp(n, q, rng)?;
    let mut deg = vec![0usize; n];
    let mut kept = Vec::new();
    for (u, v) in revealed.edge_pairs() {
        if deg[u as usize] < budget && deg[v as usize] < budget {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
            kept.push((u, v));
        }
    }
    BaseGraph::complement_of(n, kept)
}

/// Fraction of trials in which a forest grown from a random `s_size`-set
/// reaches a random `t_size`-set, on a dense random base (complete minus a
/// low-degree random graph) labelled at budget `p`. Sources count as
/// reached, so with `p = 0` this measures overlap frequency.
pub fn run_target_set_study(
    n: usize,
    s_size: usize,
    t_size: usize,
    p: f64,
    trials: usize,
    master_seed: u64,
) -> Result<f64> {
    if s_size < 1 || s_size > n || t_size < 1 || t_size > n {
        return Err(Error::domain(format!(
            "set sizes must be in [1, {n}], got |S|={s_size} |T|={t_size}"
        )));
    }
    if trials < 1 {
        return Err(Error::domain("trials must be at least 1"));
    }

    let hits: usize = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<usize> {
            let mut rng = RngStream::new(master_seed, trial as u64).rng();
            let base = dense_base_with_random_holes(n, &mut rng)?;
            let sources: Vec<VertexId> = sample_indices(&mut rng, n, s_size)
                .iter()
                .map(|i| VertexId(i as u32))
                .collect();
            let targets = sample_indices(&mut rng, n, t_size);
            let g = sample_fp_of_g(&base, p, &mut rng)?;
            let (forest, _) = foremost_forest(&g, &sources, TimeWindow::full(), ForestMode::Sweep)?;
            Ok(targets.iter().any(|t| forest.reached(VertexId(t as u32))) as usize)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;

    Ok(hits as f64 / trials as f64)
}

/// Empirical probability curves over a `c`-grid (p = c log n / n) for three
/// nested events, with the grid points where each curve crosses one half.
#[derive(Clone, Debug, Serialize)]
pub struct LadderResult {
    pub n: usize,
    pub trials: usize,
    pub c_grid: Vec<f64>,
    /// P(vertex 0 reaches vertex 1).
    pub pair_curve: Vec<f64>,
    /// P(vertex 0 reaches everything).
    pub source_curve: Vec<f64>,
    /// P(every vertex reaches everything).
    pub tc_curve: Vec<f64>,
    pub c_pair: f64,
    pub c_source: f64,
    pub c_tc: f64,
}

/// First grid point where the curve reaches 0.5, linearly interpolated from
/// the previous point; clipped to the grid ends when the curve starts at or
/// above 0.5 or never gets there.
fn crossing_at_half(c: &[f64], curve: &[f64]) -> f64 {
    match curve.iter().position(|&p| p >= 0.5) {
        None => c[c.len() - 1],
        Some(0) => c[0],
        Some(j) => {
            let (c0, c1) = (c[j - 1], c[j]);
            let (p0, p1) = (curve[j - 1], curve[j]);
            c0 + (0.5 - p0) * (c1 - c0) / (p1 - p0)
        }
    }
}

/// Estimate where pair reachability, single-source reachability and full
/// temporal connectivity each become more likely than not, as multiples of
/// log n / n.
pub fn run_threshold_ladder(
    n: usize,
    c_grid: &[f64],
    trials: usize,
    master_seed: u64,
) -> Result<LadderResult> {
    if n < 2 {
        return Err(Error::domain(format!("ladder needs n >= 2, got {n}")));
    }
    if trials < 1 {
        return Err(Error::domain("trials must be at least 1"));
    }
    if c_grid.len() < 2 || c_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain("c grid must be strictly increasing with >= 2 points"));
    }
    if c_grid[0] > 0.5 || c_grid[c_grid.len() - 1] < 4.0 {
        return Err(Error::domain("c grid must span [0.5, 4] to bracket all three crossings"));
    }

    let jobs: Vec<(usize, usize)> = (0..c_grid.len())
        .flat_map(|i_c| (0..trials).map(move |t| (i_c, t)))
        .collect();
    let outcomes: Vec<(bool, bool, bool)> = jobs
        .par_iter()
        .map(|&(i_c, trial)| -> Result<(bool, bool, bool)> {
            let stream = (i_c * trials + trial) as u64;
            let mut rng = RngStream::new(master_seed, stream).rng();
            let p = (c_grid[i_c] * (n as f64).ln() / n as f64).min(1.0);
            let g = sample_fnp_sparse(n, p, &mut rng)?;
            let m = all_pairs_reach(&g, TimeWindow::full());
            Ok((
                m.reaches(VertexId(0), VertexId(1)),
                m.is_source(VertexId(0)),
                m.is_temporally_connected(),
            ))
        })
        .collect::<Result<_>>()?;

    let mut pair_curve = vec![0.0; c_grid.len()];
    let mut source_curve = vec![0.0; c_grid.len()];
    let mut tc_curve = vec![0.0; c_grid.len()];
    for (&(i_c, _), &(pair, src, tc)) in jobs.iter().zip(&outcomes) {
        pair_curve[i_c] += pair as usize as f64;
        source_curve[i_c] += src as usize as f64;
        tc_curve[i_c] += tc as usize as f64;
    }
    for curve in [&mut pair_curve, &mut source_curve, &mut tc_curve] {
        for v in curve.iter_mut() {
            *v /= trials as f64;
        }
    }

    Ok(LadderResult {
        n,
        trials,
        c_grid: c_grid.to_vec(),
        c_pair: crossing_at_half(c_grid, &pair_curve),
        c_source: crossing_at_half(c_grid, &source_curve),
        c_tc: crossing_at_half(c_grid, &tc_curve),
        pair_curve,
        source_curve,
        tc_curve,
    })
}

/// Base graph for the checkpoint-vertex study.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UniformityBase {
    /// Complete base: non-source vertices are exchangeable, so the
    /// checkpoint vertex is exactly uniform over them.
    Complete,
    /// Complete base minus the fixed matching {0,1}, {2,3}, ...; breaks
    /// exact exchangeability (a vertex whose partner is already inside is
    /// slightly disadvantaged) while staying nearly uniform.
    MinusMatching,
}

impl std::str::FromStr for UniformityBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complete" => Ok(UniformityBase::Complete),
            "minus-matching" => Ok(UniformityBase::MinusMatching),
            other => Err(Error::domain(format!("unknown uniformity base {other:?}"))),
        }
    }
}

/// Empirical distribution of the vertex added at a fixed growth checkpoint.
#[derive(Clone, Debug, Serialize)]
pub struct UniformityResult {
    pub n: usize,
    pub s_size: usize,
    pub checkpoint_k: usize,
    pub trials: usize,
    /// counts[u - s_size] = trials whose checkpoint vertex was u.
    pub counts: Vec<u64>,
    /// max_u |freq(u) - 1/(n-s)| * (n-s).
    pub max_scaled_deviation: f64,
    /// Upper tail probability of the chi-square statistic against the
    /// uniform law on the n - s non-source vertices.
    pub chi_square_p: f64,
}

/// Distribution of the vertex that joins the forest when it grows from
/// `checkpoint_k` to `checkpoint_k + 1` reached vertices, grown from the
/// fixed source set {0, ..., s_size-1} on a fully labelled base.
///
/// Growth on a fully labelled base depends only on the relative order of
/// the labels, so each trial is simulated by drawing a uniform random edge
/// order lazily (amortized via an undo log) instead of materializing a
/// labelled graph; the equivalence is asserted in this module's tests.
pub fn run_added_vertex_uniformity(
    n: usize,
    s_size: usize,
    trials: usize,
    checkpoint_k: usize,
    base: UniformityBase,
    master_seed: u64,
) -> Result<UniformityResult> {
    if trials < 1 {
        return Err(Error::domain("trials must be at least 1"));
    }
    if s_size < 1 || 2 * s_size > n {
        return Err(Error::domain(format!(
            "source count must be in [1, n/2], got {s_size} at n={n}"
        )));
    }
    if checkpoint_k < s_size || checkpoint_k + s_size + 1 > n {
        return Err(Error::domain(format!(
            "checkpoint must lie in [{}, {}], got {checkpoint_k}",
            s_size,
            n - s_size - 1
        )));
    }
    let m = n * (n - 1) / 2;
    if m > u32::MAX as usize {
        return Err(Error::domain(format!("n = {n} is too large for the pair encoding")));
    }

    let threads = rayon::current_num_threads().max(1);
    let chunk = trials.div_ceil(threads * 4).max(1);
    let ranges: Vec<(usize, usize)> = (0..trials)
        .step_by(chunk)
        .map(|a| (a, (a + chunk).min(trials)))
        .collect();
    let counts = ranges
        .par_iter()
        .map(|&(a, b)| uniformity_range(n, s_size, checkpoint_k, base, master_seed, a..b))
        .try_reduce(
            || vec![0u64; n - s_size],
            |mut x, y| {
                for (xi, yi) in x.iter_mut().zip(&y) {
                    *xi += yi;
                }
                Ok(x)
            },
        )?;

    let width = (n - s_size) as f64;
    let expected = trials as f64 / width;
    let mut max_scaled_deviation = 0.0f64;
    let mut stat = 0.0f64;
    for &c in &counts {
        let diff = c as f64 - expected;
        max_scaled_deviation = max_scaled_deviation.max((diff / trials as f64 * width).abs());
        stat += diff * diff / expected;
    }
    let dof = width - 1.0;
    let chi_square_p = ChiSquared::new(dof)
        .expect("dof >= 1 by the domain checks")
        .sf(stat);

    Ok(UniformityResult {
        n,
        s_size,
        checkpoint_k,
        trials,
        counts,
        max_scaled_deviation,
        chi_square_p,
    })
}

/// Pair id -> (u, v) decode table for the canonical row-major order.
fn pair_rows(n: usize) -> Vec<usize> {
    let mut row_start = Vec::with_capacity(n);
    let mut acc = 0;
    for u in 0..n {
        row_start.push(acc);
        acc += n - 1 - u;
    }
    row_start
}

fn uniformity_range(
    n: usize,
    s_size: usize,
    checkpoint_k: usize,
    base: UniformityBase,
    master_seed: u64,
    range: std::ops::Range<usize>,
) -> Result<Vec<u64>> {
    let m = n * (n - 1) / 2;
    let row_start = pair_rows(n);
    let mut perm: Vec<u32> = (0..m as u32).collect();
    let mut in_forest = vec![false; n];
    in_forest[..s_size].fill(true);
    let mut counts = vec![0u64; n - s_size];
    let mut undo: Vec<(usize, usize)> = Vec::new();
    let mut added: Vec<usize> = Vec::new();

    for trial in range {
        let mut rng = RngStream::new(master_seed, trial as u64).rng();
        let mut size = s_size;
        let mut hit = None;
        for j in 0..m {
            let r = rng.gen_range(j..m);
            perm.swap(j, r);
            undo.push((j, r));
            let id = perm[j] as usize;
            let u = row_start.partition_point(|&start| start <= id) - 1;
            let v = u + 1 + (id - row_start[u]);
            let gone = match base {
                UniformityBase::Complete => false,
                UniformityBase::MinusMatching => v == u + 1 && u % 2 == 0,
            };
            if gone {
                continue;
            }
            let newcomer = match (in_forest[u], in_forest[v]) {
                (true, false) => v,
                (false, true) => u,
                _ => continue,
            };
            in_forest[newcomer] = true;
            added.push(newcomer);
            if size == checkpoint_k {
                hit = Some(newcomer);
                break;
            }
            size += 1;
        }
        match hit {
            Some(v) => counts[v - s_size] += 1,
            None => {
                return Err(Error::domain(format!(
                    "growth stalled before checkpoint {checkpoint_k} on trial {trial}"
                )))
            }
        }
        for &(j, r) in undo.iter().rev() {
            perm.swap(j, r);
        }
        for &v in &added {
            in_forest[v] = false;
        }
        undo.clear();
        added.clear();
    }
    Ok(counts)
}
