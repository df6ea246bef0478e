//! Synchronous push&pull.
//!
//! Two constructions of the same process:
//!
//! * [`run_sync_round_based`] plays the protocol directly: each round every
//!   vertex calls a uniform random neighbour, and all pushes and pulls are
//!   resolved against the informed set as it stood at the start of the round.
//! * [`run_sync_clock_based`] drives the calls from per-pair exponential
//!   clocks `Z_{u,v}` / `Z'_{u,v}` of rate `1/deg(u)`. Clock `Z` of a pair is
//!   switched off and `Z'` switched on once either endpoint is informed, which
//!   lets the run record the coupling variables `T_{u,v}` (rounds until `u`
//!   next calls `v`) and `X_{u,v}` (time from `Z'_{u,v}` switching on until
//!   its first ring).
//!
//! The merged ring process at a vertex has rate 1, so the clocks at `u` are
//! represented by one Exponential(1) time increment per round plus a uniform
//! choice of which pair rang.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::rng::{exponential, uniform_index};
use crate::shortest_path::dijkstra;

/// Hard cap on simulated rounds; hitting it indicates a bug.
pub const ROUND_CAP: u64 = 1_000_000_000;

const UNINFORMED: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct SyncOutcome {
    /// Round in which each vertex learnt the rumour (0 for the start vertex).
    pub informed_round: Vec<u64>,
    /// `S(G, s)`: the round in which the last vertex was informed.
    pub spread_time: u64,
    pub parent: Vec<Option<VertexId>>,
}

/// Per directed edge `(u, v)` (indexed by the graph's directed edge id):
/// the activation round `q_{uv}`, the round gap `T_{u,v}` and the clock time
/// `X_{u,v}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTrace {
    pub q: Vec<u64>,
    pub t: Vec<u64>,
    pub x: Vec<f64>,
}

impl CouplingTrace {
    pub fn t_pair(&self, g: &Graph, u: usize, v: usize) -> Option<u64> {
        g.edge_id(u, v).map(|e| self.t[e])
    }

    pub fn x_pair(&self, g: &Graph, u: usize, v: usize) -> Option<f64> {
        g.edge_id(u, v).map(|e| self.x[e])
    }
}

/// Tracks, per vertex, how many neighbours are still uninformed. A vertex can
/// only change anything by calling if it disagrees with some neighbour, so
/// vertices outside that boundary may be skipped without changing the law.
struct Boundary {
    uninformed_nbrs: Vec<u32>,
}

impl Boundary {
    fn new(g: &Graph) -> Self {
        Boundary {
            uninformed_nbrs: (0..g.n()).map(|u| g.degree(u) as u32).collect(),
        }
    }

    #[inline]
    fn relevant(&self, g: &Graph, u: usize, informed: bool) -> bool {
        if informed {
            self.uninformed_nbrs[u] > 0
        } else {
            (self.uninformed_nbrs[u] as usize) < g.degree(u)
        }
    }
}

/// Plays the synchronous protocol round by round.
///
/// Only vertices on the informed/uninformed boundary draw a call each round;
/// the calls of every other vertex cannot change the informed set.
pub fn run_sync_round_based<R: Rng + ?Sized>(
    g: &Graph,
    s: VertexId,
    rng: &mut R,
) -> Result<SyncOutcome> {
    g.check_vertex(s)?;
    let n = g.n();
    let s = s.index();
    let mut informed_round = vec![UNINFORMED; n];
    let mut parent = vec![None; n];
    let mut boundary = Boundary::new(g);
    let mut in_active = vec![false; n];
    let mut active = Vec::new();

    informed_round[s] = 0;
    let mut informed = 1usize;
    for &v in g.neighbours(s) {
        boundary.uninformed_nbrs[v as usize] -= 1;
        active.push(v as usize);
        in_active[v as usize] = true;
    }
    active.push(s);
    in_active[s] = true;

    let mut round = 0u64;
    let mut newly = Vec::new();
    while informed < n {
        round += 1;
        if round > ROUND_CAP {
            return Err(Error::RuntimeCap(ROUND_CAP));
        }
        // informed at the start of this round <=> informed_round < round
        for &u in &active {
            let v = g.neighbours(u)[uniform_index(rng, g.degree(u))] as usize;
            let u_knows = informed_round[u] < round;
            let v_knows = informed_round[v] < round;
            let (to, from) = match (u_knows, v_knows) {
                (true, false) => (v, u),
                (false, true) => (u, v),
                _ => continue,
            };
            if informed_round[to] == UNINFORMED {
                informed_round[to] = round;
                parent[to] = Some(VertexId::from(from));
                newly.push(to);
            }
        }
        informed += newly.len();
        for w in newly.drain(..) {
            for &x in g.neighbours(w) {
                let x = x as usize;
                boundary.uninformed_nbrs[x] -= 1;
                if !in_active[x] {
                    in_active[x] = true;
                    active.push(x);
                }
            }
            if !in_active[w] {
                in_active[w] = true;
                active.push(w);
            }
        }
        active.retain(|&u| {
            let keep = boundary.relevant(g, u, informed_round[u] != UNINFORMED);
            in_active[u] = keep;
            keep
        });
    }

    Ok(SyncOutcome { informed_round, spread_time: round, parent })
}

/// Runs the dual-clock construction and returns the outcome together with
/// the realised coupling variables for every ordered adjacent pair.
///
/// After the rumour has reached everyone, rounds continue (for the vertices
/// that still need them) until every `Z'` clock has rung once, so `T` and `X`
/// are defined for all pairs.
pub fn run_sync_clock_based<R: Rng + ?Sized>(
    g: &Graph,
    s: VertexId,
    rng: &mut R,
) -> Result<(SyncOutcome, CouplingTrace)> {
    g.check_vertex(s)?;
    let n = g.n();
    let m = g.directed_edge_count();
    let s = s.index();

    // time shown by the clocks located at each vertex
    let mut clock = vec![0.0f64; n];
    let mut q = vec![UNINFORMED; m];
    let mut alpha = vec![0.0f64; m];
    let mut t = vec![0u64; m];
    let mut x = vec![f64::NAN; m];
    let mut pending: Vec<usize> = (0..n).map(|u| g.degree(u)).collect();
    let mut total_pending = m;

    let mut informed_round = vec![UNINFORMED; n];
    let mut parent = vec![None; n];
    let mut calls = vec![0usize; n];

    let activate = |w: usize,
                    round: u64,
                    clock: &[f64],
                    q: &mut [u64],
                    alpha: &mut [f64]| {
        for e in g.edge_ids(w) {
            for (pair, owner) in [(e, w), (g.reverse_edge(e), g.target(e))] {
                if q[pair] == UNINFORMED {
                    q[pair] = round;
                    alpha[pair] = clock[owner];
                }
            }
        }
    };

    informed_round[s] = 0;
    let mut informed = 1usize;
    activate(s, 0, &clock, &mut q, &mut alpha);

    let mut round = 0u64;
    let mut spread_time = 0u64;
    let mut newly = Vec::new();
    while informed < n || total_pending > 0 {
        round += 1;
        if round > ROUND_CAP {
            return Err(Error::RuntimeCap(ROUND_CAP));
        }
        let spreading = informed < n;
        for u in 0..n {
            if !spreading && pending[u] == 0 {
                continue;
            }
            clock[u] += exponential(rng, 1.0);
            let e = g.edge_ids(u).start + uniform_index(rng, g.degree(u));
            calls[u] = e;
            // a ring of Z'_{u,v}: first one after activation fixes T and X
            if q[e] != UNINFORMED && x[e].is_nan() {
                x[e] = clock[u] - alpha[e];
                t[e] = round - q[e];
                pending[u] -= 1;
                total_pending -= 1;
            }
        }
        if !spreading {
            continue;
        }
        for (u, &e) in calls.iter().enumerate() {
            let v = g.target(e);
            let u_knows = informed_round[u] < round;
            let v_knows = informed_round[v] < round;
            let (to, from) = match (u_knows, v_knows) {
                (true, false) => (v, u),
                (false, true) => (u, v),
                _ => continue,
            };
            if informed_round[to] == UNINFORMED {
                informed_round[to] = round;
                parent[to] = Some(VertexId::from(from));
                newly.push(to);
            }
        }
        informed += newly.len();
        for w in newly.drain(..) {
            activate(w, round, &clock, &mut q, &mut alpha);
        }
        if informed == n {
            spread_time = round;
        }
    }

    Ok((
        SyncOutcome { informed_round, spread_time, parent },
        CouplingTrace { q, t, x },
    ))
}

/// True iff `T[u,v] <= c_log * ln(n) + c_x * X[u,v]` for every ordered pair.
pub fn check_t_x_coupling(trace: &CouplingTrace, c_log: f64, c_x: f64, n: usize) -> bool {
    let log_n = (n as f64).ln();
    trace
        .t
        .iter()
        .zip(&trace.x)
        .all(|(&t, &x)| (t as f64) <= c_log * log_n + c_x * x)
}

/// `max_v min_{γ: s→v} Σ_{xy∈γ} min{T[x,y], T[y,x]}`, computed as the
/// eccentricity of `s` under those edge weights.
pub fn maxmin_t_bound(g: &Graph, s: VertexId, trace: &CouplingTrace) -> u64 {
    let dist = dijkstra(g, s.index(), |e| trace.t[e].min(trace.t[g.reverse_edge(e)]));
    dist.into_iter().max().unwrap_or(0)
}

/// Checks the pathwise inequality `S <= max-min of T` for one run.
pub fn check_s_maxmin_bound(
    g: &Graph,
    s: VertexId,
    outcome: &SyncOutcome,
    trace: &CouplingTrace,
) -> bool {
    outcome.spread_time <= maxmin_t_bound(g, s, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle_graph, k2, path_graph, star, DiamondLayout};
    use crate::rng::trial_rng;

    fn assert_well_formed(g: &Graph, s: VertexId, out: &SyncOutcome) {
        assert_eq!(out.informed_round[s.index()], 0);
        assert!(out.informed_round.iter().all(|&r| r != UNINFORMED));
        assert_eq!(out.spread_time, *out.informed_round.iter().max().unwrap());
        assert!(out.spread_time >= g.eccentricity(s) as u64);
        for v in 0..g.n() {
            match out.parent[v] {
                None => assert_eq!(v, s.index()),
                Some(p) => {
                    assert!(g.is_adjacent(v, p.index()));
                    assert!(out.informed_round[p.index()] < out.informed_round[v]);
                }
            }
        }
    }

    #[test]
    fn k2_takes_one_round() {
        let g = k2();
        for trial in 0..50 {
            let out = run_sync_round_based(&g, VertexId(0), &mut trial_rng(1, trial)).unwrap();
            assert_eq!(out.spread_time, 1);
            let (out, trace) = run_sync_clock_based(&g, VertexId(0), &mut trial_rng(1, trial)).unwrap();
            assert_eq!(out.spread_time, 1);
            assert_eq!(trace.t, vec![1, 1]);
            assert!(trace.x.iter().all(|&x| x > 0.0));
            assert!(check_t_x_coupling(&trace, 3.0, 3.0, 2));
            assert!(check_s_maxmin_bound(&g, VertexId(0), &out, &trace));
            assert_eq!(maxmin_t_bound(&g, VertexId(0), &trace), 1);
        }
    }

    #[test]
    fn star_from_centre_takes_one_round() {
        let g = star(30).unwrap();
        for trial in 0..20 {
            let out = run_sync_round_based(&g, VertexId(0), &mut trial_rng(2, trial)).unwrap();
            assert_eq!(out.spread_time, 1);
            let (out, _) = run_sync_clock_based(&g, VertexId(0), &mut trial_rng(2, trial)).unwrap();
            assert_eq!(out.spread_time, 1);
        }
    }

    #[test]
    fn diamonds_need_at_least_two_rounds_per_diamond() {
        let layout = DiamondLayout::new(4, 3, 0).unwrap();
        let g = layout.build().unwrap();
        for trial in 0..200 {
            let out = run_sync_round_based(&g, VertexId(0), &mut trial_rng(3, trial)).unwrap();
            assert!(out.spread_time >= 8);
            assert_well_formed(&g, VertexId(0), &out);
        }
    }

    #[test]
    fn outcomes_are_well_formed() {
        let fixtures = [
            (path_graph(6).unwrap(), VertexId(2)),
            (cycle_graph(7).unwrap(), VertexId(0)),
            (star(9).unwrap(), VertexId(4)),
            (DiamondLayout::new(3, 4, 5).unwrap().build().unwrap(), VertexId(0)),
        ];
        for (g, s) in &fixtures {
            for trial in 0..100 {
                let out = run_sync_round_based(g, *s, &mut trial_rng(4, trial)).unwrap();
                assert_well_formed(g, *s, &out);
                let (out, trace) = run_sync_clock_based(g, *s, &mut trial_rng(5, trial)).unwrap();
                assert_well_formed(g, *s, &out);
                assert!(trace.t.iter().all(|&t| t >= 1));
                assert!(trace.x.iter().all(|&x| x > 0.0));
                for e in 0..g.directed_edge_count() {
                    assert_eq!(trace.q[e], trace.q[g.reverse_edge(e)]);
                    let (u, v) = (g.directed_edges().nth(e).unwrap().0, g.target(e));
                    let q = out.informed_round[u].min(out.informed_round[v]);
                    assert_eq!(trace.q[e], q);
                }
                assert!(check_s_maxmin_bound(g, *s, &out, &trace));
            }
        }
    }

    #[test]
    fn path3_from_middle_bound_is_max_of_edge_minima() {
        let g = path_graph(3).unwrap();
        for trial in 0..100 {
            let (out, trace) = run_sync_clock_based(&g, VertexId(1), &mut trial_rng(6, trial)).unwrap();
            let left = trace.t_pair(&g, 1, 0).unwrap().min(trace.t_pair(&g, 0, 1).unwrap());
            let right = trace.t_pair(&g, 1, 2).unwrap().min(trace.t_pair(&g, 2, 1).unwrap());
            assert_eq!(maxmin_t_bound(&g, VertexId(1), &trace), left.max(right));
            assert!(out.spread_time <= left.max(right));
        }
    }

    #[test]
    fn coupling_check_is_monotone_in_constants() {
        let g = cycle_graph(6).unwrap();
        let (_, trace) = run_sync_clock_based(&g, VertexId(0), &mut trial_rng(7, 0)).unwrap();
        assert!(!check_t_x_coupling(&trace, 0.0, 0.0, 6));
        assert!(check_t_x_coupling(&trace, 1e6, 0.0, 6));
    }

    #[test]
    fn rejects_bad_start() {
        let g = k2();
        assert!(run_sync_round_based(&g, VertexId(2), &mut trial_rng(0, 0)).is_err());
        assert!(run_sync_clock_based(&g, VertexId(2), &mut trial_rng(0, 0)).is_err());
    }
}
