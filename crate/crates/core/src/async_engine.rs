//! Asynchronous push&pull.
//!
//! [`run_async_event_driven`] simulates the rate-1 Poisson clocks directly
//! with a priority queue of next-ring times. [`fpp_spread_time`] evaluates the
//! same spread time as a first-passage-percolation max-min over independent
//! directed weights `Y[u,v] ~ Exp(rate 1/deg(u))`, and
//! [`fpp_spread_time_hop_limited`] restricts that max-min to paths of at most
//! `L` edges.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::io::Write;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::rng::{exponential, uniform_index};
use crate::shortest_path::dijkstra;

/// Event budget for the event-driven engine.
pub const EVENT_CAP: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct AsyncOutcome {
    /// Time at which each vertex learnt the rumour (0 for the start vertex).
    pub informed_time: Vec<f64>,
    /// `A(G, s)`.
    pub spread_time: f64,
    pub parent: Vec<Option<VertexId>>,
}

/// Next ring of a vertex clock; ordered so that `BinaryHeap` pops the
/// earliest ring first.
#[derive(Debug, Clone, Copy)]
struct Ring {
    time: f64,
    vertex: u32,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ring {}

impl PartialOrd for Ring {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ring {
    fn cmp(&self, other: &Self) -> Ordering {
        other.time.total_cmp(&self.time).then_with(|| other.vertex.cmp(&self.vertex))
    }
}

/// Simulates the asynchronous protocol until every vertex is informed.
pub fn run_async_event_driven<R: Rng + ?Sized>(
    g: &Graph,
    s: VertexId,
    rng: &mut R,
) -> Result<AsyncOutcome> {
    run_event_driven(g, s, None, rng)
}

/// Runs the asynchronous protocol from `s` and returns the time at which
/// `target` is informed.
pub fn async_time_to_inform<R: Rng + ?Sized>(
    g: &Graph,
    s: VertexId,
    target: VertexId,
    rng: &mut R,
) -> Result<f64> {
    g.check_vertex(target)?;
    let out = run_event_driven(g, s, Some(target.index()), rng)?;
    Ok(out.informed_time[target.index()])
}

// Rings of a vertex whose neighbours all share its state have no effect. Such
// a vertex is left unscheduled; when it next matters its clock is restarted
// from the current time, which is exact by memorylessness.
fn run_event_driven<R: Rng + ?Sized>(
    g: &Graph,
    s: VertexId,
    stop_at: Option<usize>,
    rng: &mut R,
) -> Result<AsyncOutcome> {
    g.check_vertex(s)?;
    let n = g.n();
    let s = s.index();
    let mut informed_time = vec![f64::INFINITY; n];
    let mut parent = vec![None; n];
    let mut uninformed_nbrs: Vec<u32> = (0..n).map(|u| g.degree(u) as u32).collect();
    let mut scheduled = vec![false; n];
    let mut heap = BinaryHeap::new();

    let relevant = |u: usize, informed_time: &[f64], uninformed_nbrs: &[u32]| {
        if informed_time[u].is_finite() {
            uninformed_nbrs[u] > 0
        } else {
            (uninformed_nbrs[u] as usize) < g.degree(u)
        }
    };

    informed_time[s] = 0.0;
    let mut informed = 1usize;
    for &v in g.neighbours(s) {
        uninformed_nbrs[v as usize] -= 1;
    }
    for u in std::iter::once(s).chain(g.neighbours(s).iter().map(|&v| v as usize)) {
        scheduled[u] = true;
        heap.push(Ring { time: exponential(rng, 1.0), vertex: u as u32 });
    }

    let mut events = 0u64;
    let mut now = 0.0;
    while informed < n && stop_at.is_none_or(|t| !informed_time[t].is_finite()) {
        let Some(Ring { time, vertex }) = heap.pop() else {
            unreachable!("a connected graph always has a scheduled boundary vertex");
        };
        events += 1;
        if events > EVENT_CAP {
            return Err(Error::RuntimeCap(EVENT_CAP));
        }
        now = time;
        let x = vertex as usize;
        scheduled[x] = false;
        if !relevant(x, &informed_time, &uninformed_nbrs) {
            continue;
        }
        let y = g.neighbours(x)[uniform_index(rng, g.degree(x))] as usize;
        let (to, from) = match (informed_time[x].is_finite(), informed_time[y].is_finite()) {
            (true, false) => (Some(y), x),
            (false, true) => (Some(x), y),
            _ => (None, x),
        };
        if let Some(w) = to {
            informed_time[w] = now;
            parent[w] = Some(VertexId::from(from));
            informed += 1;
            for &z in g.neighbours(w) {
                let z = z as usize;
                uninformed_nbrs[z] -= 1;
                if !scheduled[z] && relevant(z, &informed_time, &uninformed_nbrs) {
                    scheduled[z] = true;
                    heap.push(Ring { time: now + exponential(rng, 1.0), vertex: z as u32 });
                }
            }
        }
        for u in [x].into_iter().chain(to) {
            if !scheduled[u] && relevant(u, &informed_time, &uninformed_nbrs) {
                scheduled[u] = true;
                heap.push(Ring { time: now + exponential(rng, 1.0), vertex: u as u32 });
            }
        }
    }

    let spread_time = if informed == n { now } else { f64::INFINITY };
    Ok(AsyncOutcome { informed_time, spread_time, parent })
}

/// Independent weights `Y[u,v] ~ Exp(rate 1/deg(u))` on every directed edge,
/// indexed by directed edge id.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedEdgeWeights {
    pub values: Vec<f64>,
}

impl DirectedEdgeWeights {
    pub fn new(g: &Graph, values: Vec<f64>) -> Result<Self> {
        if values.len() != g.directed_edge_count() {
            return Err(Error::ParameterOutOfRange(format!(
                "expected {} directed weights, got {}",
                g.directed_edge_count(),
                values.len()
            )));
        }
        if let Some(w) = values.iter().find(|w| w.is_nan() || **w <= 0.0) {
            return Err(Error::ParameterOutOfRange(format!("weight {w} is not positive")));
        }
        Ok(DirectedEdgeWeights { values })
    }

    /// Builds weights from a function of the ordered pair `(u, v)`.
    pub fn from_fn(g: &Graph, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let values = g.directed_edges().map(|(u, v, _)| f(u, v)).collect();
        Self::new(g, values)
    }

    pub fn get(&self, g: &Graph, u: usize, v: usize) -> Option<f64> {
        g.edge_id(u, v).map(|e| self.values[e])
    }

    /// Symmetric weight `min{Y[x,y], Y[y,x]}` of the undirected edge under `e`.
    #[inline]
    pub fn edge_min(&self, g: &Graph, e: usize) -> f64 {
        self.values[e].min(self.values[g.reverse_edge(e)])
    }

    /// Writes one `u v y` line per directed edge.
    pub fn dump<W: Write>(&self, g: &Graph, mut w: W) -> Result<()> {
        for (u, v, e) in g.directed_edges() {
            writeln!(w, "{u} {v} {}", self.values[e])?;
        }
        Ok(())
    }
}

pub fn sample_edge_weights<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> DirectedEdgeWeights {
    let values = g
        .directed_edges()
        .map(|(u, _, _)| exponential(rng, g.degree(u) as f64))
        .collect();
    DirectedEdgeWeights { values }
}

/// `max_v min_{γ: s→v} Σ_{xy∈γ} min{Y[x,y], Y[y,x]}` by Dijkstra.
pub fn fpp_spread_time(g: &Graph, s: VertexId, w: &DirectedEdgeWeights) -> f64 {
    dijkstra(g, s.index(), |e| w.edge_min(g, e))
        .into_iter()
        .fold(0.0, f64::max)
}

/// Result of the hop-limited max-min: either a finite time or "some vertex
/// has no admissible path".
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HopLimitedTime {
    Finite(f64),
    Unreachable,
}

impl HopLimitedTime {
    pub fn is_finite(&self) -> bool {
        matches!(self, HopLimitedTime::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            HopLimitedTime::Finite(t) => Some(t),
            HopLimitedTime::Unreachable => None,
        }
    }
}

impl PartialOrd for HopLimitedTime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use HopLimitedTime::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.partial_cmp(b),
            (Finite(_), Unreachable) => Some(Ordering::Less),
            (Unreachable, Finite(_)) => Some(Ordering::Greater),
            (Unreachable, Unreachable) => Some(Ordering::Equal),
        }
    }
}

impl fmt::Display for HopLimitedTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HopLimitedTime::Finite(t) => write!(f, "{t}"),
            HopLimitedTime::Unreachable => write!(f, "inf"),
        }
    }
}

/// `A_L`: the max-min restricted to walks of at most `max_hops` edges,
/// computed by `max_hops` synchronous relaxation sweeps.
pub fn fpp_spread_time_hop_limited(
    g: &Graph,
    s: VertexId,
    w: &DirectedEdgeWeights,
    max_hops: usize,
) -> Result<HopLimitedTime> {
    if max_hops == 0 {
        return Err(Error::ParameterOutOfRange("hop limit must be at least 1".into()));
    }
    let n = g.n();
    let mut dist: Vec<Option<f64>> = vec![None; n];
    dist[s.index()] = Some(0.0);
    let mut next = dist.clone();
    for _ in 0..max_hops.min(n - 1) {
        let mut changed = false;
        for (u, v, e) in g.directed_edges() {
            if let Some(du) = dist[u] {
                let cand = du + w.edge_min(g, e);
                if next[v].is_none_or(|cur| cand < cur) {
                    next[v] = Some(cand);
                    changed = true;
                }
            }
        }
        dist.copy_from_slice(&next);
        if !changed {
            break;
        }
    }
    let mut worst = 0.0f64;
    for d in dist {
        match d {
            Some(d) => worst = worst.max(d),
            None => return Ok(HopLimitedTime::Unreachable),
        }
    }
    Ok(HopLimitedTime::Finite(worst))
}
