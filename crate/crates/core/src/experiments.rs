//! Size sweeps over graph families: the synchronous/asynchronous ratio on
//! the tight string-of-diamonds family, and the exponent-pair constructions.

use serde::Serialize;

use crate::catalog::GraphSpec;
use crate::error::{Error, Result};
use crate::estimator::{estimate_with, fit_exponent, Engine, Execution, ExponentFit, TrialSummary};
use crate::graph::{Graph, VertexId};

/// A graph family indexed by a target vertex count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `S_{m,k,0}` with `k ≈ (n/ln n)^{2/3}` and `m ≈ (n-1)/(k+1)`, which
    /// makes `m ≈ n^{1/3}(ln n)^{2/3}`; maximises the spread-time ratio.
    TightDiamonds,
    Star,
    /// Construction realising the exponent pair `(alpha, beta)`.
    Attainable { alpha: f64, beta: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub spec: GraphSpec,
    pub start: VertexId,
    /// Set when a parameter had to be clamped (e.g. `k` raised to 2).
    pub flag: Option<String>,
}

impl Family {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "diamonds-tight" | "diamonds" => Ok(Family::TightDiamonds),
            "star" => Ok(Family::Star),
            _ => Err(Error::ParameterOutOfRange(format!(
                "unknown family {name:?} (diamonds-tight|star)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::TightDiamonds => "diamonds-tight",
            Family::Star => "star",
            Family::Attainable { .. } => "attainable",
        }
    }

    pub fn member(&self, n: usize) -> Result<Member> {
        match *self {
            Family::Star => Ok(Member { spec: GraphSpec::Star(n), start: VertexId(0), flag: None }),
            Family::TightDiamonds => {
                if n < 8 {
                    return Err(Error::ParameterOutOfRange(format!("family size {n} too small")));
                }
                let nf = n as f64;
                let k = ((nf / nf.ln()).powf(2.0 / 3.0).round() as usize).max(2);
                let m = (((nf - 1.0) / (k + 1) as f64).round() as usize).max(1);
                Ok(Member { spec: GraphSpec::Diamonds { m, k, l: 0 }, start: VertexId(0), flag: None })
            }
            Family::Attainable { alpha, beta } => attainable_member(n, alpha, beta),
        }
    }
}

/// `0 <= alpha <= 1` and `alpha <= beta <= 1/3 + 2 alpha / 3`.
pub fn check_attainable(alpha: f64, beta: f64) -> Result<()> {
    const EPS: f64 = 1e-12;
    let ok = (-EPS..=1.0 + EPS).contains(&alpha) && beta >= alpha - EPS && beta <= 1.0 / 3.0 + 2.0 * alpha / 3.0 + EPS;
    if ok {
        Ok(())
    } else {
        Err(Error::InfeasiblePair { alpha, beta })
    }
}

fn attainable_member(n: usize, alpha: f64, beta: f64) -> Result<Member> {
    check_attainable(alpha, beta)?;
    if beta <= 1e-12 {
        return Ok(Member { spec: GraphSpec::Star(n), start: VertexId(0), flag: None });
    }
    let nf = n as f64;
    let m = ((nf.powf(beta) / 2.0).floor() as usize).max(1);
    let raw_k = nf.powf(2.0 * beta - 2.0 * alpha).floor() as usize;
    let (k, flag) = if raw_k < 2 {
        (2, Some(format!("k={raw_k} raised to 2")))
    } else {
        (raw_k, None)
    };
    let used = m * (k + 1) + 1;
    if used > n {
        return Err(Error::ParameterOutOfRange(format!(
            "n={n} too small for alpha={alpha}, beta={beta}: m={m}, k={k} need {used} vertices"
        )));
    }
    Ok(Member { spec: GraphSpec::Diamonds { m, k, l: n - used }, start: VertexId(0), flag })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub n: usize,
    pub graph: String,
    pub params: String,
    pub trials: u64,
    pub mean_sync: f64,
    pub stderr_sync: f64,
    pub mean_async: f64,
    pub stderr_async: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub family: Family,
    pub rows: Vec<CompareRow>,
    pub ratio_fit: ExponentFit,
}

fn both_protocols(
    g: &Graph,
    s: VertexId,
    trials: u64,
    seed: u64,
    async_engine: Engine,
    exec: Execution,
) -> Result<(TrialSummary, TrialSummary)> {
    let sync = estimate_with(Engine::SyncRoundBased, g, s, trials, seed, exec)?;
    let asy = estimate_with(async_engine, g, s, trials, seed ^ 0x5eed, exec)?;
    Ok((sync, asy))
}

/// Estimates `E[S]`, `E[A]` and their ratio for each size, and fits the
/// log-log slope of the ratio against the vertex count.
pub fn compare(
    family: Family,
    sizes: &[usize],
    trials: u64,
    seed: u64,
    async_engine: Engine,
    exec: Execution,
) -> Result<CompareReport> {
    if sizes.len() < 3 {
        return Err(Error::RequiresFamily(3));
    }
    let mut rows = Vec::with_capacity(sizes.len());
    for (i, &n) in sizes.iter().enumerate() {
        let member = family.member(n)?;
        let g = member.spec.build()?;
        let (sync, asy) = both_protocols(&g, member.start, trials, seed.wrapping_add(i as u64), async_engine, exec)?;
        rows.push(CompareRow {
            n: g.n(),
            graph: member.spec.name().to_string(),
            params: member.spec.params(),
            trials,
            mean_sync: sync.mean,
            stderr_sync: sync.std_error,
            mean_async: asy.mean,
            stderr_async: asy.std_error,
            ratio: sync.mean / asy.mean,
        });
    }
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.ratio)).collect();
    let ratio_fit = fit_exponent(&points)?;
    Ok(CompareReport { family, rows, ratio_fit })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttainRow {
    pub alpha_target: f64,
    pub beta_target: f64,
    pub n: usize,
    pub graph: String,
    pub params: String,
    pub trials: u64,
    pub mean_sync: f64,
    pub stderr_sync: f64,
    pub mean_async: f64,
    pub stderr_async: f64,
    pub flag: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttainFitRow {
    pub alpha_target: f64,
    pub beta_target: f64,
    pub alpha_fit: f64,
    pub beta_fit: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttainabilityReport {
    pub rows: Vec<AttainRow>,
    pub alpha_fit: ExponentFit,
    pub beta_fit: ExponentFit,
}

impl AttainabilityReport {
    pub fn fit_row(&self) -> AttainFitRow {
        AttainFitRow {
            alpha_target: self.rows[0].alpha_target,
            beta_target: self.rows[0].beta_target,
            alpha_fit: self.alpha_fit.slope,
            beta_fit: self.beta_fit.slope,
        }
    }
}

/// Builds the construction for `(alpha, beta)` at each size, estimates both
/// spread times and fits both exponents.
pub fn attainability(
    alpha: f64,
    beta: f64,
    sizes: &[usize],
    trials: u64,
    seed: u64,
    async_engine: Engine,
    exec: Execution,
) -> Result<AttainabilityReport> {
    check_attainable(alpha, beta)?;
    if sizes.len() < 3 {
        return Err(Error::RequiresFamily(3));
    }
    let family = Family::Attainable { alpha, beta };
    let mut rows = Vec::with_capacity(sizes.len());
    for (i, &n) in sizes.iter().enumerate() {
        let member = family.member(n)?;
        let g = member.spec.build()?;
        let (sync, asy) = both_protocols(&g, member.start, trials, seed.wrapping_add(i as u64), async_engine, exec)?;
        rows.push(AttainRow {
            alpha_target: alpha,
            beta_target: beta,
            n: g.n(),
            graph: member.spec.name().to_string(),
            params: member.spec.params(),
            trials,
            mean_sync: sync.mean,
            stderr_sync: sync.std_error,
            mean_async: asy.mean,
            stderr_async: asy.std_error,
            flag: member.flag.unwrap_or_default(),
        });
    }
    let alpha_fit = fit_exponent(&rows.iter().map(|r| (r.n as f64, r.mean_async)).collect::<Vec<_>>())?;
    let beta_fit = fit_exponent(&rows.iter().map(|r| (r.n as f64, r.mean_sync)).collect::<Vec<_>>())?;
    Ok(AttainabilityReport { rows, alpha_fit, beta_fit })
}
