use std::path::Path;
use std::process::{Command, Output};

use pushpull::estimator::diamond_a_band;

fn pushpull(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pushpull")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Column `name` of the first data row of a CSV text.
fn field(csv: &str, name: &str) -> String {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap_or_else(|| panic!("no column {name}"));
    row[i].to_string()
}

#[test]
fn simulate_star_sync_is_one_round() {
    let o = pushpull(&["simulate", "--graph", "star:100", "--start", "0", "--protocol", "sync", "--trials", "100"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("graph,params,protocol,n,trials,seed,mean,stderr,median,q05,q95\n"));
    assert_eq!(field(&out, "mean").parse::<f64>().unwrap(), 1.0);
    assert!(stderr(&o).contains("seed=0"));
}

#[test]
fn simulate_diamonds_async_in_band() {
    let o = pushpull(&[
        "simulate", "--graph", "diamonds:3,4,5", "--start", "0", "--protocol", "async", "--trials", "10000", "--seed", "5",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let mean: f64 = field(&out, "mean").parse().unwrap();
    let se: f64 = field(&out, "stderr").parse().unwrap();
    let (lo, hi) = diamond_a_band(3, 4, 21);
    assert!(mean >= lo - 3.0 * se && mean <= hi + 3.0 * se, "{mean} not in [{lo}, {hi}]");
}

#[test]
fn disconnected_edge_list_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("foo.txt");
    std::fs::write(&path, "4 2\n0 1\n2 3\n").unwrap();
    let spec = format!("edgelist:{}", path.display());
    let o = pushpull(&["simulate", "--graph", &spec]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("disconnected"), "{}", stderr(&o));
}

#[test]
fn malformed_edge_list_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "3 2\n0 1\n1 x\n").unwrap();
    let o = pushpull(&["simulate", "--graph", &format!("edgelist:{}", path.display())]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn per_trial_rows() {
    let dir = tempfile::tempdir().unwrap();
    let trials = dir.path().join("trials.csv");
    let o = pushpull(&[
        "simulate", "--graph", "cycle:6", "--trials", "7", "--per-trial", trials.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&trials).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "trial,spread_time");
    assert_eq!(lines.len(), 8);
}

#[test]
fn paths_rows() {
    let o = pushpull(&["paths", "--graph", "cycle:5", "--L", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().next().unwrap(), "L,num_paths,sum_q,bound,holds");
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..3], &["2", "10", "2.5"]);
    assert!((row[3].parse::<f64>().unwrap() - 2955.62).abs() < 0.01);
    assert_eq!(row[4], "true");

    let o = pushpull(&["paths", "--graph", "k2", "--L", "1"]);
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(row.starts_with("1,2,2.0,"), "{row}");

    let o = pushpull(&["paths", "--graph", "diamonds:2,3,0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 9);
    assert!(out.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn paths_cap_is_reported_with_guidance() {
    let o = pushpull(&["paths", "--graph", "complete:8", "--L", "7", "--cap", "100"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("--cap"), "{}", stderr(&o));
}

#[test]
fn compare_needs_a_family() {
    let o = pushpull(&["compare", "--graph", "star", "--family", "100", "--trials", "10"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("at least 3 sizes"), "{}", stderr(&o));
}

#[test]
fn compare_star_slope_is_small() {
    let o = pushpull(&["compare", "--graph", "star", "--family", "1000,10000,100000", "--trials", "50"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let fit = out.split("\n\n").nth(1).unwrap();
    assert!(fit.starts_with("family,slope,intercept,r_squared"));
    let slope: f64 = field(fit, "slope").parse().unwrap();
    assert!(slope.abs() < 0.15, "{slope}");
}

#[test]
fn diamonds_command_checks_bounds() {
    let o = pushpull(&["diamonds", "--graph", "diamonds:3,4,5", "--trials", "2000"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("bracket=[6, 13] ok"));
    assert_eq!(stdout(&o).lines().count(), 3);
    let o = pushpull(&["diamonds", "--graph", "star:5"]);
    assert!(!o.status.success());
}

#[test]
fn attainability_rejects_infeasible_pairs() {
    let o = pushpull(&["attainability", "--alpha", "0", "--beta", "0.5"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("not attainable"), "{}", stderr(&o));
    let o = pushpull(&["attainability", "--alpha", "-0.5", "--beta", "0"]);
    assert!(!o.status.success());
}

#[test]
fn attainability_flags_clamped_width() {
    let third = (1.0f64 / 3.0).to_string();
    let o = pushpull(&[
        "attainability", "--alpha", &third, "--beta", &third, "--family", "1000,3000,10000", "--trials", "50",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("raised to 2"));
    let out = stdout(&o);
    let fit = out.split("\n\n").nth(1).unwrap();
    assert!(fit.starts_with("alpha_target,beta_target,alpha_fit,beta_fit"));
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    write(&cfg, "# star run\ngraph = star:30\ntrials = 20\nseed = 9\nprotocol = async\n");
    let o = pushpull(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(field(&out, "trials"), "20");
    assert_eq!(field(&out, "seed"), "9");
    assert_eq!(field(&out, "protocol"), "async");

    let o = pushpull(&["simulate", "--config", cfg.to_str().unwrap(), "--trials", "5", "--protocol", "sync"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(field(&out, "trials"), "5");
    assert_eq!(field(&out, "protocol"), "sync");

    write(&cfg, "graph = star:30\ntrails = 20\n");
    let o = pushpull(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("run.cfg:2"), "{}", stderr(&o));
}

#[test]
fn seeded_runs_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, extra: &[&str]| {
        let out = dir.path().join(name);
        let mut args = vec!["simulate", "--graph", "diamonds:2,3,1", "--protocol", "async", "--trials", "500", "--seed", "42"];
        args.extend_from_slice(extra);
        args.extend_from_slice(&["--out", out.to_str().unwrap()]);
        let o = pushpull(&args);
        assert!(o.status.success(), "{}", stderr(&o));
        std::fs::read(out).unwrap()
    };
    let a = run("a.csv", &[]);
    let b = run("b.csv", &[]);
    let c = run("c.csv", &["--sequential"]);
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn unknown_protocol_and_start_fail() {
    assert!(!pushpull(&["simulate", "--graph", "k2", "--protocol", "gossip"]).status.success());
    assert!(!pushpull(&["simulate", "--graph", "k2", "--start", "5"]).status.success());
    assert!(!pushpull(&["simulate", "--graph", "k2", "--trials", "0"]).status.success());
}
