//! Argument handling and command implementations for the `pushpull` binary.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use pushpull::estimator::{async_sync_gap, diamond_check, sample_spread_times, GapVerdict, TrialSummary};
use pushpull::experiments::{attainability, compare, Family};
use pushpull::path_analysis::{segment_type_q_sum, sum_q_over_length, walk_sum, DEFAULT_CAP};
use pushpull::report::{self, SummaryRow};
use pushpull::{DiamondLayout, Engine, Error, Execution, GraphSpec, VertexId};

#[derive(Debug, Parser)]
#[command(name = "pushpull", version, about = "Push&pull rumour spreading experiments")]
#[command(args_override_self = true)]
pub struct Cli {
    /// key=value file supplying default flag values; flags given on the
    /// command line take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the spread time of one protocol on one graph.
    Simulate(SimulateArgs),
    /// Sweep a graph family and fit the exponent of E[S]/E[A].
    Compare(CompareArgs),
    /// Check both spread times of a string of diamonds against their bounds.
    Diamonds(DiamondsArgs),
    /// Exhaustive simple-path sums for a small graph.
    Paths(PathsArgs),
    /// Build the construction for an exponent pair and fit both exponents.
    Attainability(AttainabilityArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run trials on a single thread.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Graph spec, e.g. star:100, diamonds:3,4,5, edgelist:graph.txt
    #[arg(long)]
    pub graph: String,
    #[arg(long, default_value_t = 0)]
    pub start: usize,
    /// sync, async, or an engine name (sync-rounds, sync-clocks, async-events, async-fpp)
    #[arg(long, default_value = "sync")]
    pub protocol: String,
    /// Also write one (trial, spread_time) row per trial to this file.
    #[arg(long)]
    pub per_trial: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Family name: diamonds-tight or star.
    #[arg(long, default_value = "diamonds-tight")]
    pub graph: String,
    /// Comma-separated list of at least three sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub family: Vec<usize>,
    /// Asynchronous engine: async (event-driven) or async-fpp.
    #[arg(long, default_value = "async")]
    pub protocol: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct DiamondsArgs {
    /// diamonds:m,k[,l]
    #[arg(long)]
    pub graph: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct PathsArgs {
    #[arg(long)]
    pub graph: String,
    /// Path length; every length 1..n-1 when omitted.
    #[arg(long = "L")]
    pub len: Option<usize>,
    /// Maximum number of enumerated paths (or walks) per row.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AttainabilityArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
    pub family: Vec<usize>,
    #[arg(long, default_value = "async")]
    pub protocol: String,
    #[command(flatten)]
    pub common: Common,
}

const CONFIG_KEYS: &[&str] = &[
    "graph", "start", "protocol", "trials", "seed", "out", "L", "family", "alpha", "beta", "cap", "per-trial",
    "sequential",
];

/// Reads `key=value` lines into flag arguments. Blank lines and `#`
/// comments are skipped.
pub fn config_args(text: &str, path: &Path) -> Result<Vec<OsString>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("{}:{}: expected key=value, got {line:?}", path.display(), i + 1);
        };
        let (key, value) = (key.trim(), value.trim());
        if !CONFIG_KEYS.contains(&key) {
            bail!("{}:{}: unknown key {key:?} (expected one of {})", path.display(), i + 1, CONFIG_KEYS.join(", "));
        }
        if key == "sequential" {
            match value {
                "true" => out.push(OsString::from("--sequential")),
                "false" => {}
                _ => bail!("{}:{}: sequential must be true or false", path.display(), i + 1),
            }
            continue;
        }
        out.push(OsString::from(format!("--{key}")));
        out.push(OsString::from(value));
    }
    Ok(out)
}

/// Splices config-file flags in front of the command-line flags so that the
/// latter override them.
fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let pos = args.iter().position(|a| a == "--config");
    let inline = args.iter().position(|a| a.to_string_lossy().starts_with("--config="));
    let (path, rest) = match (pos, inline) {
        (Some(i), _) => {
            let path = args.get(i + 1).ok_or_else(|| anyhow!("--config needs a file path"))?.clone();
            let mut rest = args.clone();
            rest.drain(i..i + 2);
            (PathBuf::from(path), rest)
        }
        (None, Some(i)) => {
            let path = args[i].to_string_lossy()["--config=".len()..].to_string();
            let mut rest = args.clone();
            rest.remove(i);
            (PathBuf::from(path), rest)
        }
        (None, None) => return Ok(args),
    };
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading config {}", path.display()))?;
    let extra = config_args(&text, &path)?;
    // program name, subcommand, config flags, remaining flags
    let sub = rest
        .iter()
        .skip(1)
        .position(|a| !a.to_string_lossy().starts_with('-'))
        .map(|p| p + 1)
        .ok_or_else(|| anyhow!("missing subcommand"))?;
    let mut out: Vec<OsString> = rest[..=sub].to_vec();
    out.extend(extra);
    out.extend_from_slice(&rest[sub + 1..]);
    Ok(out)
}

fn open_out<'a>(path: Option<&Path>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(stdout),
    })
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn async_engine(name: &str) -> Result<Engine> {
    let engine: Engine = name.parse()?;
    if engine.protocol() != pushpull::Protocol::Async {
        bail!("{name:?} is not an asynchronous engine");
    }
    Ok(engine)
}

/// Parses `args` (including the program name), runs the command and returns
/// whether every asserted check passed. Progress and verdicts go to
/// `stderr`; CSV goes to `--out` or `stdout`.
pub fn run(args: Vec<OsString>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<bool> {
    let args = expand_config(args)?;
    let cli = Cli::try_parse_from(args)?;
    match cli.command {
        Command::Simulate(a) => simulate(a, stdout, stderr),
        Command::Compare(a) => cmd_compare(a, stdout, stderr),
        Command::Diamonds(a) => diamonds(a, stdout, stderr),
        Command::Paths(a) => paths(a, stdout, stderr),
        Command::Attainability(a) => cmd_attainability(a, stdout, stderr),
    }
}

fn simulate(a: SimulateArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<bool> {
    let spec: GraphSpec = a.graph.parse()?;
    let g = spec.build()?;
    let engine: Engine = a.protocol.parse()?;
    let start = VertexId::from(a.start);
    g.check_vertex(start)?;
    let c = &a.common;
    let samples = sample_spread_times(engine, &g, start, c.trials, c.seed, execution(c.sequential))?;
    let summary = TrialSummary::from_samples(engine.protocol(), &samples, c.seed)?;
    writeln!(stderr, "seed={} engine={} graph={spec} n={}", c.seed, engine.name(), g.n())?;
    report::write_summaries(open_out(c.out.as_deref(), stdout)?, &[SummaryRow::new(&spec, g.n(), &summary)])?;
    if let Some(path) = &a.per_trial {
        let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        report::write_trials(BufWriter::new(f), &samples)?;
    }
    Ok(true)
}

fn cmd_compare(a: CompareArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<bool> {
    let family = Family::parse(&a.graph)?;
    let engine = async_engine(&a.protocol)?;
    let c = &a.common;
    let r = compare(family, &a.family, c.trials, c.seed, engine, execution(c.sequential))?;
    writeln!(
        stderr,
        "seed={} family={} ratio slope={:.4} r2={:.4}",
        c.seed,
        family.name(),
        r.ratio_fit.slope,
        r.ratio_fit.r_squared
    )?;
    report::write_compare(open_out(c.out.as_deref(), stdout)?, &r)?;
    Ok(true)
}

fn diamonds(a: DiamondsArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<bool> {
    let spec: GraphSpec = a.graph.parse()?;
    let GraphSpec::Diamonds { m, k, l } = spec else {
        bail!("diamonds needs a diamonds:m,k[,l] graph, got {spec}");
    };
    let layout = DiamondLayout::new(m, k, l)?;
    let c = &a.common;
    let check = diamond_check(layout, c.trials, c.seed, execution(c.sequential))?;
    let n = layout.vertex_count();
    let gap = async_sync_gap(&check.sync, &check.asynchronous, n);
    writeln!(stderr, "seed={} graph={spec}", c.seed)?;
    writeln!(
        stderr,
        "sync  mean={:.4} stderr={:.4} bracket=[{}, {}] {}",
        check.sync.mean,
        check.sync.std_error,
        check.s_bounds.0,
        check.s_bounds.1,
        verdict(check.sync_ok)
    )?;
    writeln!(
        stderr,
        "async mean={:.4} stderr={:.4} band=[{:.4}, {:.4}] {}",
        check.asynchronous.mean,
        check.asynchronous.std_error,
        check.a_band.0,
        check.a_band.1,
        verdict(check.async_ok)
    )?;
    writeln!(stderr, "gap E[A] - E[S] vs ln n: {gap:?}")?;
    let rows = [SummaryRow::new(&spec, n, &check.sync), SummaryRow::new(&spec, n, &check.asynchronous)];
    report::write_summaries(open_out(c.out.as_deref(), stdout)?, &rows)?;
    Ok(check.sync_ok && check.async_ok && gap != GapVerdict::Violated)
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

/// Number of vertices used as centres in the walk-sum spot checks.
const SPOT_CENTRES: usize = 16;

fn paths(a: PathsArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<bool> {
    let spec: GraphSpec = a.graph.parse()?;
    let g = spec.build()?;
    let lens: Vec<usize> = match a.len {
        Some(l) => vec![l],
        None => (1..g.n()).collect(),
    };
    let guidance = |e: Error| match e {
        Error::CapExceeded(cap) => anyhow!("{e}; raise --cap above {cap} or pick a smaller --L / graph"),
        e => e.into(),
    };
    let mut rows = Vec::with_capacity(lens.len());
    for len in lens {
        rows.push(sum_q_over_length(&g, len, a.cap).map_err(guidance)?);
    }
    let mut ok = rows.iter().all(|r| r.holds);

    let mut spot_failures = 0;
    let mut spot_total = 0;
    for x in (0..g.n()).take(SPOT_CENTRES).map(VertexId::from) {
        for lm in 0..=2 {
            for lp in 0..=2 {
                let walks = walk_sum(&g, x, lm, lp, a.cap).map_err(guidance)?;
                let paths = segment_type_q_sum(&g, x, lm, lp)?;
                spot_total += 1;
                if (walks - 1.0).abs() > 1e-9 || paths > walks + 1e-12 {
                    spot_failures += 1;
                    writeln!(stderr, "walk-sum check failed at x={x} type ({lm},{lp}): walks={walks} paths={paths}")?;
                }
            }
        }
    }
    ok &= spot_failures == 0;
    writeln!(
        stderr,
        "graph={spec} n={} rows={} all_hold={} walk_sum_checks={}/{}",
        g.n(),
        rows.len(),
        rows.iter().all(|r| r.holds),
        spot_total - spot_failures,
        spot_total
    )?;
    report::write_path_rows(open_out(a.out.as_deref(), stdout)?, &rows)?;
    Ok(ok)
}

fn cmd_attainability(a: AttainabilityArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<bool> {
    let engine = async_engine(&a.protocol)?;
    let c = &a.common;
    let r = attainability(a.alpha, a.beta, &a.family, c.trials, c.seed, engine, execution(c.sequential))?;
    for row in r.rows.iter().filter(|r| !r.flag.is_empty()) {
        writeln!(stderr, "n={}: {}", row.n, row.flag)?;
    }
    writeln!(
        stderr,
        "seed={} alpha target={} fit={:.4}; beta target={} fit={:.4}",
        c.seed, a.alpha, r.alpha_fit.slope, a.beta, r.beta_fit.slope
    )?;
    report::write_attainability(open_out(c.out.as_deref(), stdout)?, &r.rows, &[r.fit_row()])?;
    Ok(true)
}

/// Entry point shared by the binary: exit code 0 iff no error and every
/// asserted check passed.
pub fn main_with_args(args: Vec<OsString>) -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    match run(args, &mut out, &mut err) {
        Ok(true) => 0,
        Ok(false) => {
            let _ = writeln!(err, "one or more checks failed");
            1
        }
        Err(e) => match e.downcast_ref::<clap::Error>() {
            Some(ce) => {
                let _ = ce.print();
                ce.exit_code()
            }
            None => {
                let _ = writeln!(err, "error: {e:#}");
                1
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines() {
        let args = config_args("# c\ngraph = star:10\n\ntrials=5\nsequential=true\n", Path::new("c.cfg")).unwrap();
        assert_eq!(args, ["--graph", "star:10", "--trials", "5", "--sequential"]);
        let e = config_args("graph star", Path::new("c.cfg")).unwrap_err().to_string();
        assert!(e.contains("c.cfg:1"), "{e}");
        let e = config_args("\nbogus=1", Path::new("c.cfg")).unwrap_err().to_string();
        assert!(e.contains("c.cfg:2") && e.contains("bogus"), "{e}");
    }

    #[test]
    fn async_engine_names() {
        assert_eq!(async_engine("async").unwrap(), Engine::AsyncEventDriven);
        assert_eq!(async_engine("async-fpp").unwrap(), Engine::AsyncFpp);
        assert!(async_engine("sync").is_err());
    }
}
