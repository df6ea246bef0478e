//! CSV writers for simulation, path and sweep results.

use std::io::Write;

use serde::Serialize;

use crate::catalog::GraphSpec;
use crate::error::Result;
use crate::estimator::TrialSummary;
use crate::experiments::{AttainFitRow, AttainRow, CompareReport, CompareRow};
use crate::path_analysis::QSumRow;

/// One line of the `simulate` output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub graph: String,
    pub params: String,
    pub protocol: String,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub mean: f64,
    pub stderr: f64,
    pub median: f64,
    pub q05: f64,
    pub q95: f64,
}

impl SummaryRow {
    pub fn new(spec: &GraphSpec, n: usize, summary: &TrialSummary) -> Self {
        SummaryRow {
            graph: spec.name().to_string(),
            params: spec.params(),
            protocol: summary.protocol.name().to_string(),
            n,
            trials: summary.trials,
            seed: summary.seed,
            mean: summary.mean,
            stderr: summary.std_error,
            median: summary.median,
            q05: summary.q05,
            q95: summary.q95,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialRow {
    pub trial: u64,
    pub spread_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct FitRow<'a> {
    family: &'a str,
    slope: f64,
    intercept: f64,
    r_squared: f64,
}

pub fn write_rows<W: Write, T: Serialize>(out: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summaries<W: Write>(out: W, rows: &[SummaryRow]) -> Result<()> {
    write_rows(out, rows)
}

pub fn write_trials<W: Write>(out: W, samples: &[f64]) -> Result<()> {
    let rows: Vec<TrialRow> = samples
        .iter()
        .enumerate()
        .map(|(i, &spread_time)| TrialRow { trial: i as u64, spread_time })
        .collect();
    write_rows(out, &rows)
}

pub fn write_path_rows<W: Write>(out: W, rows: &[QSumRow]) -> Result<()> {
    write_rows(out, rows)
}

/// Per-size rows, a blank line, then the ratio fit.
pub fn write_compare<W: Write>(mut out: W, report: &CompareReport) -> Result<()> {
    write_rows::<_, CompareRow>(&mut out, &report.rows)?;
    writeln!(out)?;
    let fit = FitRow {
        family: report.family.name(),
        slope: report.ratio_fit.slope,
        intercept: report.ratio_fit.intercept,
        r_squared: report.ratio_fit.r_squared,
    };
    write_rows(&mut out, &[fit])
}

/// Per-size rows for every pair, a blank line, then one fit row per pair.
pub fn write_attainability<W: Write>(mut out: W, rows: &[AttainRow], fits: &[AttainFitRow]) -> Result<()> {
    write_rows(&mut out, rows)?;
    writeln!(out)?;
    write_rows(&mut out, fits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::Protocol;

    #[test]
    fn summary_header() {
        let s = TrialSummary::from_samples(Protocol::Sync, &[1.0, 2.0, 3.0], 7).unwrap();
        let row = SummaryRow::new(&GraphSpec::Diamonds { m: 1, k: 2, l: 0 }, 4, &s);
        let mut buf = Vec::new();
        write_summaries(&mut buf, &[row]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "graph,params,protocol,n,trials,seed,mean,stderr,median,q05,q95");
        assert!(lines.next().unwrap().starts_with("diamonds,m=1 k=2 l=0,sync,4,3,7,2"));
    }

    #[test]
    fn trial_and_path_headers() {
        let mut buf = Vec::new();
        write_trials(&mut buf, &[1.5, 2.0]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "trial,spread_time\n0,1.5\n1,2.0\n");
        let mut buf = Vec::new();
        let row = QSumRow { len: 2, num_paths: 3, sum_q: 0.5, bound: 9.0, holds: true };
        write_path_rows(&mut buf, &[row]).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("L,num_paths,sum_q,bound,holds\n2,3,0.5,9.0,true"));
    }
}
