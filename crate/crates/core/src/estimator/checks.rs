//! Monte Carlo checks of the string-of-diamonds bounds, the restart argument
//! for the synchronous spread time, and a diagnostic for the main comparison
//! inequality.

use serde::Serialize;

use super::analytic::{diamond_a_band, diamond_s_bounds, y_lower_threshold, y_tail_bound};
use super::{run_trials, sample_spread_times, Engine, Execution, Protocol, TrialSummary};
use crate::async_engine::async_time_to_inform;
use crate::error::{Error, Result};
use crate::graph::{DiamondLayout, Graph, VertexId};
use crate::stats;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YCheck {
    pub k: u32,
    pub mean: f64,
    pub std_error: f64,
    pub threshold: f64,
    /// Empirical `Pr[Y <= t]` at `t = 1/(3√k)`.
    pub tail_prob: f64,
    pub tail_std_error: f64,
    pub tail_bound: f64,
    pub mean_ok: bool,
    pub tail_ok: bool,
}

impl YCheck {
    pub fn passes(&self) -> bool {
        self.mean_ok && self.tail_ok
    }
}

/// Estimates the crossing time `Y` of a single diamond `S_{1,k,0}` (time for
/// `v_1` to learn the rumour from `v_0`) and compares it with the lower
/// bound and the tail bound.
pub fn y_lower_bound_check(k: u32, trials: u64, seed: u64, exec: Execution) -> Result<YCheck> {
    if k < 2 {
        return Err(Error::ParameterOutOfRange(format!("diamond width must be >= 2, got {k}")));
    }
    let layout = DiamondLayout::new(1, k as usize, 0)?;
    let g = layout.build()?;
    let (s, target) = (layout.hub(0), layout.hub(1));
    let ys = run_trials(trials, seed, exec, |rng, _| async_time_to_inform(&g, s, target, rng))?;
    let mean = stats::mean(&ys);
    let std_error = stats::std_error(&ys);
    let threshold = y_lower_threshold(k);
    let t = 1.0 / (3.0 * (k as f64).sqrt());
    let hits: Vec<f64> = ys.iter().map(|&y| if y <= t { 1.0 } else { 0.0 }).collect();
    let tail_prob = stats::mean(&hits);
    let tail_std_error = stats::std_error(&hits);
    let tail_bound = y_tail_bound(k, t);
    Ok(YCheck {
        k,
        mean,
        std_error,
        threshold,
        tail_prob,
        tail_std_error,
        tail_bound,
        mean_ok: mean >= threshold - 3.0 * std_error,
        tail_ok: tail_prob <= tail_bound + 3.0 * tail_std_error,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartRow {
    pub i: u32,
    pub prob: f64,
    pub std_error: f64,
    pub bound: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestartCheck {
    pub median: f64,
    pub summary: TrialSummary,
    pub rows: Vec<RestartRow>,
    pub mean_ok: bool,
}

impl RestartCheck {
    pub fn passes(&self) -> bool {
        self.mean_ok && self.rows.iter().all(|r| r.ok)
    }
}

/// With `M` the empirical median of the synchronous spread time, checks
/// `Pr[S > iM] <= 2^{-i}` for `i = 1..=5` and `E[S] <= 2M`, each up to three
/// standard errors.
pub fn restart_median_check(g: &Graph, s: VertexId, trials: u64, seed: u64, exec: Execution) -> Result<RestartCheck> {
    if trials < 1000 {
        return Err(Error::ParameterOutOfRange(format!("restart check needs >= 1000 trials, got {trials}")));
    }
    let samples = sample_spread_times(Engine::SyncRoundBased, g, s, trials, seed, exec)?;
    let summary = TrialSummary::from_samples(Protocol::Sync, &samples, seed)?;
    let median = summary.median;
    let rows = (1..=5u32)
        .map(|i| {
            let level = i as f64 * median;
            let hits: Vec<f64> = samples.iter().map(|&x| if x > level { 1.0 } else { 0.0 }).collect();
            let prob = stats::mean(&hits);
            let std_error = stats::std_error(&hits);
            let bound = 0.5f64.powi(i as i32);
            RestartRow { i, prob, std_error, bound, ok: prob <= bound + 3.0 * std_error }
        })
        .collect();
    let mean_ok = summary.mean <= 2.0 * median + 3.0 * summary.std_error;
    Ok(RestartCheck { median, summary, rows, mean_ok })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiamondCheck {
    pub layout: DiamondLayout,
    pub sync: TrialSummary,
    pub asynchronous: TrialSummary,
    pub s_bounds: (u64, u64),
    pub a_band: (f64, f64),
    pub sync_ok: bool,
    pub async_ok: bool,
}

/// Estimates both spread times of `S_{m,k,l}` from `v_0` and compares them
/// with `[2m, 4m+1]` and with the asynchronous band, up to three standard
/// errors.
pub fn diamond_check(layout: DiamondLayout, trials: u64, seed: u64, exec: Execution) -> Result<DiamondCheck> {
    let g = layout.build()?;
    let s = layout.hub(0);
    let sync = super::estimate_with(Engine::SyncRoundBased, &g, s, trials, seed, exec)?;
    let asynchronous = super::estimate_with(Engine::AsyncEventDriven, &g, s, trials, seed ^ 0x5eed, exec)?;
    let s_bounds = diamond_s_bounds(layout.m);
    let a_band = diamond_a_band(layout.m, layout.k as u32, g.n());
    let slack = 3.0 * sync.std_error;
    let sync_ok = sync.mean >= s_bounds.0 as f64 - slack && sync.mean <= s_bounds.1 as f64 + slack;
    let slack = 3.0 * asynchronous.std_error;
    let async_ok = asynchronous.mean >= a_band.0 - slack && asynchronous.mean <= a_band.1 + slack;
    Ok(DiamondCheck { layout, sync, asynchronous, s_bounds, a_band, sync_ok, async_ok })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GapVerdict {
    /// `E[A] <= E[S] + ln n` within three pooled standard errors.
    Holds,
    /// Exceeds the `ln n` slack but not `2 ln n`; the constant is unspecified.
    Flagged,
    Violated,
}

/// Compares `E[A]` with `E[S] + ln n`.
pub fn async_sync_gap(sync: &TrialSummary, asynchronous: &TrialSummary, n: usize) -> GapVerdict {
    let pooled = (sync.std_error.powi(2) + asynchronous.std_error.powi(2)).sqrt();
    let excess = asynchronous.mean - sync.mean - 3.0 * pooled;
    let log_n = (n as f64).ln();
    if excess <= log_n {
        GapVerdict::Holds
    } else if excess <= 2.0 * log_n {
        GapVerdict::Flagged
    } else {
        GapVerdict::Violated
    }
}

/// Both sides of the comparison inequality for user-chosen constants:
/// `lhs = Pr[S > C(t + t^{2/3} n^{1/3} ln n)]` and
/// `rhs = Pr[A > t] + C n^{-K}`. Diagnostic only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub threshold: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn comparison_illustration(
    g: &Graph,
    s: VertexId,
    t: f64,
    c: f64,
    k_exp: f64,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<ComparisonReport> {
    if t < 1.0 {
        return Err(Error::ParameterOutOfRange(format!("t must be >= 1, got {t}")));
    }
    let n = g.n() as f64;
    let threshold = c * (t + t.powf(2.0 / 3.0) * n.cbrt() * n.ln());
    let sync = sample_spread_times(Engine::SyncRoundBased, g, s, trials, seed, exec)?;
    let asy = sample_spread_times(Engine::AsyncEventDriven, g, s, trials, seed ^ 0x5eed, exec)?;
    let frac = |xs: &[f64], level: f64| xs.iter().filter(|&&x| x > level).count() as f64 / xs.len() as f64;
    Ok(ComparisonReport {
        threshold,
        lhs: frac(&sync, threshold),
        rhs: frac(&asy, t) + c * n.powf(-k_exp),
    })
}
