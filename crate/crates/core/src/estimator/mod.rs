//! Monte Carlo harness over the spread-time engines.
//!
//! Trial `i` of an experiment with seed `seed` always consumes stream
//! `trial_rng(seed, i)`, so a summary is bit-identical whether trials run
//! sequentially or on the rayon pool.

mod analytic;
mod checks;
mod fit;

pub use analytic::*;
pub use checks::*;
pub use fit::*;

use serde::Serialize;

use crate::async_engine::{fpp_spread_time, run_async_event_driven, sample_edge_weights};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::rng::{trial_rng, TrialRng};
use crate::stats;
use crate::sync_engine::{run_sync_clock_based, run_sync_round_based};

pub const DEFAULT_TRIALS: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Sync,
    Async,
}

impl Protocol {
    pub fn name(self) -> &'static str {
        match self {
            Protocol::Sync => "sync",
            Protocol::Async => "async",
        }
    }

    /// The engine used when only the protocol is named.
    pub fn default_engine(self) -> Engine {
        match self {
            Protocol::Sync => Engine::SyncRoundBased,
            Protocol::Async => Engine::AsyncEventDriven,
        }
    }
}

impl std::str::FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sync" => Ok(Protocol::Sync),
            "async" => Ok(Protocol::Async),
            _ => Err(Error::ParameterOutOfRange(format!("unknown protocol {s:?} (sync|async)"))),
        }
    }
}

/// A concrete construction of one of the two spread times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    SyncRoundBased,
    SyncClockBased,
    AsyncEventDriven,
    /// First-passage-percolation max-min over freshly sampled weights.
    AsyncFpp,
}

impl Engine {
    pub fn protocol(self) -> Protocol {
        match self {
            Engine::SyncRoundBased | Engine::SyncClockBased => Protocol::Sync,
            Engine::AsyncEventDriven | Engine::AsyncFpp => Protocol::Async,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Engine::SyncRoundBased => "sync-rounds",
            Engine::SyncClockBased => "sync-clocks",
            Engine::AsyncEventDriven => "async-events",
            Engine::AsyncFpp => "async-fpp",
        }
    }

    /// One spread-time sample.
    pub fn sample(self, g: &Graph, s: VertexId, rng: &mut TrialRng) -> Result<f64> {
        Ok(match self {
            Engine::SyncRoundBased => run_sync_round_based(g, s, rng)?.spread_time as f64,
            Engine::SyncClockBased => run_sync_clock_based(g, s, rng)?.0.spread_time as f64,
            Engine::AsyncEventDriven => run_async_event_driven(g, s, rng)?.spread_time,
            Engine::AsyncFpp => fpp_spread_time(g, s, &sample_edge_weights(g, rng)),
        })
    }
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sync" | "sync-rounds" => Ok(Engine::SyncRoundBased),
            "sync-clocks" => Ok(Engine::SyncClockBased),
            "async" | "async-events" => Ok(Engine::AsyncEventDriven),
            "async-fpp" => Ok(Engine::AsyncFpp),
            _ => Err(Error::ParameterOutOfRange(format!(
                "unknown protocol/engine {s:?} (sync|sync-clocks|async|async-fpp)"
            ))),
        }
    }
}

/// How independent trials are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

/// Runs `trial(rng, i)` for `i in 0..trials`, each on its own stream, and
/// returns the results in trial order.
pub fn run_trials<T, F>(trials: u64, seed: u64, exec: Execution, trial: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut TrialRng, u64) -> Result<T> + Sync,
{
    let one = |i: u64| trial(&mut trial_rng(seed, i), i);
    match exec {
        Execution::Sequential => (0..trials).map(one).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..trials).into_par_iter().map(one).collect()
        }
    }
}

/// Per-trial spread times of `engine` on `(g, s)`.
pub fn sample_spread_times(
    engine: Engine,
    g: &Graph,
    s: VertexId,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<Vec<f64>> {
    g.check_vertex(s)?;
    run_trials(trials, seed, exec, |rng, _| engine.sample(g, s, rng))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSummary {
    pub protocol: Protocol,
    pub trials: u64,
    pub mean: f64,
    #[serde(rename = "stderr")]
    pub std_error: f64,
    pub median: f64,
    pub q05: f64,
    pub q95: f64,
    pub seed: u64,
}

impl TrialSummary {
    pub fn from_samples(protocol: Protocol, samples: &[f64], seed: u64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::ParameterOutOfRange("at least one trial is required".into()));
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(TrialSummary {
            protocol,
            trials: samples.len() as u64,
            mean: stats::mean(samples),
            std_error: stats::std_error(samples),
            median: stats::nearest_rank(&sorted, 0.5),
            q05: stats::nearest_rank(&sorted, 0.05),
            q95: stats::nearest_rank(&sorted, 0.95),
            seed,
        })
    }

    /// `|mean - other.mean| <= k * pooled standard error`.
    pub fn agrees_with(&self, other: &TrialSummary, k: f64) -> bool {
        stats::means_agree(self.mean, self.std_error, other.mean, other.std_error, k)
    }
}

pub fn estimate(engine: Engine, g: &Graph, s: VertexId, trials: u64, seed: u64) -> Result<TrialSummary> {
    estimate_with(engine, g, s, trials, seed, Execution::default())
}

pub fn estimate_with(
    engine: Engine,
    g: &Graph,
    s: VertexId,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<TrialSummary> {
    if trials == 0 {
        return Err(Error::ParameterOutOfRange("at least one trial is required".into()));
    }
    let samples = sample_spread_times(engine, g, s, trials, seed, exec)?;
    TrialSummary::from_samples(engine.protocol(), &samples, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{k2, star};

    #[test]
    fn sync_k2_is_exactly_one() {
        let s = estimate(Engine::SyncRoundBased, &k2(), VertexId(0), 500, 1).unwrap();
        assert_eq!((s.mean, s.std_error, s.median, s.q05, s.q95), (1.0, 0.0, 1.0, 1.0, 1.0));
        assert_eq!(s.protocol, Protocol::Sync);
        assert_eq!(s.trials, 500);
    }

    #[test]
    fn sync_star_from_centre_is_exactly_one() {
        let s = estimate(Engine::SyncRoundBased, &star(100).unwrap(), VertexId(0), 200, 2).unwrap();
        assert_eq!(s.mean, 1.0);
    }

    #[test]
    fn async_k2_mean_is_one_half() {
        // A(K2) is the first ring of two rate-1 clocks: Exp(2), mean 1/2
        let s = estimate(Engine::AsyncEventDriven, &k2(), VertexId(0), 100_000, 3).unwrap();
        assert!((s.mean - 0.5).abs() <= 3.0 * s.std_error, "{s:?}");
        assert!(s.q05 <= s.median && s.median <= s.q95);
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(estimate(Engine::AsyncFpp, &k2(), VertexId(0), 0, 1).is_err());
        assert!(estimate(Engine::AsyncFpp, &k2(), VertexId(5), 10, 1).is_err());
    }

    #[test]
    fn execution_modes_agree_bitwise() {
        let g = star(12).unwrap();
        for engine in [Engine::SyncRoundBased, Engine::SyncClockBased, Engine::AsyncEventDriven, Engine::AsyncFpp] {
            let a = estimate_with(engine, &g, VertexId(3), 300, 9, Execution::Sequential).unwrap();
            let b = estimate_with(engine, &g, VertexId(3), 300, 9, Execution::default()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn parses_names() {
        assert_eq!("sync".parse::<Protocol>().unwrap(), Protocol::Sync);
        assert!("both".parse::<Protocol>().is_err());
        assert_eq!("async-fpp".parse::<Engine>().unwrap(), Engine::AsyncFpp);
        assert_eq!("async".parse::<Engine>().unwrap(), Engine::AsyncEventDriven);
    }
}
