//! Randomized cross-validation of the reachability machinery. Every engine
//! that answers "who reaches whom" is checked against an independent
//! fixpoint relaxation, the two forest growth modes are checked against
//! each other, and the clique search behind the component bounds is checked
//! against subset enumeration on small instances.

use std::path::PathBuf;

use rand::Rng;
use serde::Serialize;

use crate::components::{
    largest_closed_exact_tiny, largest_closed_peel, largest_open_bounds, largest_open_exact,
    mutual_reach_graph, MutualReachGraph,
};
use crate::components::verify_closed;
use crate::error::{Error, Result};
use crate::graph::{TemporalEdge, TemporalGraph, TimeLabel, TimeWindow, VertexId};
use crate::io;
use crate::models::{sample_fnp, sample_fnp_sparse, RngStream};
use crate::reach::{all_pairs_arrival, coreach_set, foremost_forest, reach_set, ForestMode};

/// Outcome of a self-test run. `instances` counts only the random
/// instances; the fixed regressions run unconditionally.
#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub instances: usize,
    pub checks: usize,
    pub failures: Vec<String>,
    /// tgf dump of the first failing instance, if any check failed.
    pub dump_path: Option<PathBuf>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Checker {
    master_seed: u64,
    checks: usize,
    failures: Vec<String>,
    dump_path: Option<PathBuf>,
}

impl Checker {
    fn new(master_seed: u64) -> Self {
        Checker {
            master_seed,
            checks: 0,
            failures: Vec::new(),
            dump_path: None,
        }
    }

    fn check(&mut self, ok: bool, g: &TemporalGraph, ctx: &str, what: &str) {
        self.checks += 1;
        if ok {
            return;
        }
        if self.failures.is_empty() {
            let path =
                std::env::temp_dir().join(format!("selftest-fail-{}.tgf", self.master_seed));
            if io::write_tgf(g, &path).is_ok() {
                self.dump_path = Some(path);
            }
        }
        self.failures.push(format!("{ctx}: {what}"));
    }
}

/// Earliest arrivals by repeated relaxation until fixpoint, processing the
/// edge list in *descending* label order so convergence does not depend on
/// the single-pass ascending argument the production closure uses. Row
/// layout matches the closure: entry `u*n + v` is the arrival from u to v,
/// `-1` on the diagonal, infinity when unreachable.
fn fixpoint_arrivals(g: &TemporalGraph, window: TimeWindow) -> Vec<f64> {
    let n = g.n();
    let mut a = vec![f64::INFINITY; n * n];
    for u in 0..n {
        a[u * n + u] = -1.0;
    }
    let mut edges: Vec<(usize, usize, f64)> = g
        .edges()
        .iter()
        .filter(|e| window.contains(e.label))
        .map(|e| (e.u.idx(), e.v.idx(), e.label.get()))
        .collect();
    edges.reverse();
    loop {
        let mut changed = false;
        for &(x, y, t) in &edges {
            for u in 0..n {
                if a[u * n + x] < t && t < a[u * n + y] {
                    a[u * n + y] = t;
                    changed = true;
                }
                if a[u * n + y] < t && t < a[u * n + x] {
                    a[u * n + x] = t;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    a
}

fn brute_force_clique(m: &MutualReachGraph) -> usize {
    let n = m.n();
    let mut best = 0usize;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let ok = members.iter().enumerate().all(|(i, &u)| {
            members[i + 1..]
                .iter()
                .all(|&v| m.is_edge(VertexId(u as u32), VertexId(v as u32)))
        });
        if ok {
            best = size;
        }
    }
    best
}

fn run_instance<R: Rng>(
    ck: &mut Checker,
    g: &TemporalGraph,
    window: TimeWindow,
    rng: &mut R,
    ctx: &str,
) -> Result<()> {
    let n = g.n();
    let m = all_pairs_arrival(g, window);

    let oracle = fixpoint_arrivals(g, window);
    let mut agree = true;
    for u in 0..n {
        for v in 0..n {
            let got = m.arrival(VertexId(u as u32), VertexId(v as u32));
            let want = oracle[u * n + v];
            let want = want.is_finite().then_some(want.max(0.0));
            agree &= got == want;
        }
    }
    ck.check(agree, g, ctx, "closure arrivals equal the fixpoint relaxation");

    let k = rng.gen_range(1..=n.min(3));
    let sources: Vec<VertexId> = rand::seq::index::sample(rng, n, k)
        .iter()
        .map(|i| VertexId(i as u32))
        .collect();
    let (fa, wa) = foremost_forest(g, &sources, window, ForestMode::Literal)?;
    let (fb, wb) = foremost_forest(g, &sources, window, ForestMode::Sweep)?;
    ck.check(fa.added() == fb.added(), g, ctx, "growth modes add identical edges");
    ck.check(
        wa.x == wb.x && wa.y_capped == wb.y_capped,
        g,
        ctx,
        "growth modes report identical waiting times",
    );

    let mut min_ok = true;
    for v in 0..n {
        let v = VertexId(v as u32);
        let best = sources
            .iter()
            .filter_map(|&s| m.arrival(s, v))
            .fold(f64::INFINITY, f64::min);
        min_ok &= fb.arrival(v) == best.is_finite().then_some(best);
    }
    ck.check(
        min_ok,
        g,
        ctx,
        "forest arrivals equal the minimum over per-source closure arrivals",
    );

    let mono = fb.added().iter().all(|e| {
        fb.sources().contains(&e.parent)
            || e.label.get() > fb.arrival(e.parent).unwrap_or(f64::INFINITY)
    });
    ck.check(mono, g, ctx, "labels strictly increase along forest paths");

    let probe = VertexId(rng.gen_range(0..n as u32));
    let rs = reach_set(g, probe, window)?;
    let want_rs: Vec<VertexId> = (0..n as u32)
        .map(VertexId)
        .filter(|&v| m.reaches(probe, v))
        .collect();
    ck.check(rs == want_rs, g, ctx, "reach set equals the closure row");
    let cs = coreach_set(g, probe, window)?;
    let want_cs: Vec<VertexId> = (0..n as u32)
        .map(VertexId)
        .filter(|&v| m.reaches(v, probe))
        .collect();
    ck.check(cs == want_cs, g, ctx, "coreach set equals the closure column");

    let mg = mutual_reach_graph(g, window);
    let exact = largest_open_exact(g, window, 64)?;
    let bounds = largest_open_bounds(g, window);
    ck.check(
        bounds.size_lower() <= exact.size_lower() && exact.size_lower() <= bounds.upper_bound,
        g,
        ctx,
        "open bounds bracket the exact clique size",
    );
    let witness_ok = exact.lower_set.iter().enumerate().all(|(i, &u)| {
        exact.lower_set[i + 1..].iter().all(|&v| mg.is_edge(u, v))
    });
    ck.check(witness_ok, g, ctx, "exact witness is pairwise mutually reaching");
    if n <= 12 {
        ck.check(
            brute_force_clique(&mg) == exact.size_lower(),
            g,
            ctx,
            "branch-and-bound matches subset enumeration",
        );
    }

    let peel = largest_closed_peel(g, window);
    ck.check(
        verify_closed(g, &peel.lower_set, window)?,
        g,
        ctx,
        "peel witness is temporally connected in its induced subgraph",
    );
    ck.check(
        peel.size_lower() <= exact.size_lower(),
        g,
        ctx,
        "closed lower bound cannot exceed the open exact size",
    );
    Ok(())
}

fn edge(u: u32, v: u32, t: f64) -> TemporalEdge {
    TemporalEdge::new(VertexId(u), VertexId(v), TimeLabel::new(t).unwrap()).unwrap()
}

fn fixed_regressions(ck: &mut Checker) -> Result<()> {
    let full = TimeWindow::full();

    let lone = TemporalGraph::new(1, vec![])?;
    let mut rng = RngStream::new(ck.master_seed, u64::MAX).rng();
    run_instance(ck, &lone, full, &mut rng, "fixture single-vertex")?;

    let pair = TemporalGraph::new(2, vec![edge(0, 1, 0.5)])?;
    run_instance(ck, &pair, full, &mut rng, "fixture single-edge")?;
    let cold = all_pairs_arrival(&pair, TimeWindow::from_f64(0.6, 1.0)?);
    ck.check(
        !cold.is_temporally_connected(),
        &pair,
        "fixture single-edge",
        "a window excluding the only edge disconnects the pair",
    );

    // One undirected edge carries a temporal path both ways, so a 4-cycle
    // labelled around is richer than a directed intuition suggests: vertex
    // 3 still reaches 2 via the late edge, and 0 via the wrap-around one.
    let cyc = TemporalGraph::new(
        4,
        vec![edge(0, 1, 0.1), edge(1, 2, 0.2), edge(2, 3, 0.3), edge(3, 0, 0.4)],
    )?;
    run_instance(ck, &cyc, full, &mut rng, "fixture cycle")?;
    let name = "fixture cycle";
    let rs3: Vec<u32> = reach_set(&cyc, VertexId(3), full)?.iter().map(|v| v.0).collect();
    ck.check(rs3 == vec![0, 2, 3], &cyc, name, "reach set of vertex 3 is {0,2,3}");
    let cs1: Vec<u32> = coreach_set(&cyc, VertexId(1), full)?.iter().map(|v| v.0).collect();
    ck.check(cs1 == vec![0, 1, 2], &cyc, name, "coreach set of vertex 1 is {0,1,2}");
    let m = all_pairs_arrival(&cyc, full);
    let sources: Vec<u32> = (0..4u32).filter(|&v| m.is_source(VertexId(v))).collect();
    ck.check(sources == vec![0, 1, 2], &cyc, name, "temporal sources are {0,1,2}");
    ck.check(
        largest_open_exact(&cyc, full, 64)?.size_lower() == 3,
        &cyc,
        name,
        "largest open component has 3 vertices",
    );
    ck.check(
        largest_closed_exact_tiny(&cyc, full, 20)?.size_lower() == 2,
        &cyc,
        name,
        "largest closed component has 2 vertices",
    );
    Ok(())
}

/// Run the fixed regressions plus `instances` random instances with sizes
/// drawn from `n_range` (inclusive) and p from {0.1, ..., 1.0}. Alternates
/// between the dense and the sparse sampler and exercises both full and
/// restricted windows. Any failure embeds the offending instance as a tgf
/// dump for triage.
pub fn run_oracle_selftest(
    instances: usize,
    n_range: (usize, usize),
    master_seed: u64,
) -> Result<SelftestReport> {
    let (lo, hi) = n_range;
    if lo < 1 || lo > hi {
        return Err(Error::domain(format!("bad instance size range [{lo}, {hi}]")));
    }
    if hi > 64 {
        return Err(Error::domain("instance sizes above 64 exceed the exact clique solver"));
    }

    let mut ck = Checker::new(master_seed);
    fixed_regressions(&mut ck)?;
    for i in 0..instances {
        let mut rng = RngStream::new(master_seed, i as u64).rng();
        let n = rng.gen_range(lo..=hi);
        let p = 0.1 * rng.gen_range(1..=10) as f64;
        let g = if i % 2 == 0 {
            sample_fnp(n, p, &mut rng)?
        } else {
            sample_fnp_sparse(n, p, &mut rng)?
        };
        let window = if i % 3 == 0 {
            let a = 0.5 * rng.gen::<f64>();
            let b = (a + 0.5 * rng.gen::<f64>()).min(1.0);
            TimeWindow::from_f64(a, b)?
        } else {
            TimeWindow::full()
        };
        let ctx = format!("instance {i} (n={n}, p={p:.1})");
        run_instance(&mut ck, &g, window, &mut rng, &ctx)?;
    }
    Ok(SelftestReport {
        instances,
        checks: ck.checks,
        failures: ck.failures,
        dump_path: ck.dump_path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixpoint_oracle_hand_check() {
        let g = TemporalGraph::new(3, vec![edge(0, 1, 0.3), edge(1, 2, 0.5)]).unwrap();
        let a = fixpoint_arrivals(&g, TimeWindow::full());
        assert_eq!(a[0 * 3 + 2], 0.5);
        assert_eq!(a[0 * 3 + 1], 0.3);
        // The path back runs 2 -> 1 -> 0 only with decreasing labels, so it
        // does not exist; the single-hop 2 -> 1 does.
        assert_eq!(a[2 * 3 + 1], 0.5);
        assert_eq!(a[2 * 3 + 0], f64::INFINITY);
        // Cutting the first edge severs the two-hop path.
        let cut = fixpoint_arrivals(&g, TimeWindow::from_f64(0.4, 1.0).unwrap());
        assert_eq!(cut[0 * 3 + 2], f64::INFINITY);
        assert_eq!(cut[1 * 3 + 2], 0.5);
    }

    #[test]
    fn selftest_passes_on_random_instances() {
        let r = run_oracle_selftest(60, (1, 24), 1234).unwrap();
        assert!(r.passed(), "failures: {:?}", r.failures);
        assert_eq!(r.instances, 60);
        assert!(r.checks > 60 * 5);
        assert!(r.dump_path.is_none());
    }

    #[test]
    fn selftest_rejects_bad_ranges() {
        assert!(run_oracle_selftest(1, (0, 5), 0).is_err());
        assert!(run_oracle_selftest(1, (6, 5), 0).is_err());
        assert!(run_oracle_selftest(1, (5, 65), 0).is_err());
    }

    #[test]
    fn checker_records_failures_and_dumps_the_instance() {
        let g = TemporalGraph::new(2, vec![edge(0, 1, 0.25)]).unwrap();
        let mut ck = Checker::new(987654321);
        ck.check(true, &g, "ctx", "fine");
        assert!(ck.failures.is_empty() && ck.dump_path.is_none());
        ck.check(false, &g, "ctx", "broken");
        assert_eq!(ck.failures, vec!["ctx: broken".to_string()]);
        let dump = ck.dump_path.clone().expect("dump written");
        let back = io::read_tgf(&dump).unwrap();
        assert_eq!(back, g);
        std::fs::remove_file(dump).ok();
    }
}
