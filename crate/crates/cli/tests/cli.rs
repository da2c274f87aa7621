use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use attnet::network::{CompetitionNetwork, NetworkDocument};
use attnet::spectral::SpectralSummary;
use attnet_cli::commands::load_network;
use attnet_cli::RunConfig;
use tempfile::TempDir;

fn attnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_attnet")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no `{key}` in\n{report}"))
        .to_string()
}

fn out_flag(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

#[test]
fn generate_twice_gives_identical_files() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for d in [&a, &b] {
        let o = attnet(&["generate", "--seed", "5", "--kind", "heterogeneous", "--out", &out_flag(d.path())]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let fa = fs::read(a.path().join("network.json")).unwrap();
    assert_eq!(fa, fs::read(b.path().join("network.json")).unwrap());
}

#[test]
fn generated_file_loads_back_exactly() {
    let dir = TempDir::new().unwrap();
    let o = attnet(&["generate", "--seed", "11", "--nodes", "9", "--out", &out_flag(dir.path())]);
    assert!(o.status.success());
    let loaded = load_network(&dir.path().join("network.json")).unwrap();
    let cfg = RunConfig {
        seed: 11,
        network: attnet_cli::config::NetworkSection {
            nodes: 9,
            ..Default::default()
        },
        ..RunConfig::default()
    };
    let direct = attnet::network::generate(&cfg.generator_spec()).unwrap();
    assert_eq!(loaded.weights(), direct.weights());
    assert_eq!(loaded.profiles(), direct.profiles());
}

#[test]
fn dense_summary_lambda_within_degree_bounds() {
    let dir = TempDir::new().unwrap();
    let o = attnet(&["generate", "--kind", "dense", "--nodes", "12", "--out", &out_flag(dir.path())]);
    let lambda: f64 = field(&stdout(&o), "lambda").parse().unwrap();
    let net = load_network(&dir.path().join("network.json")).unwrap();
    let d = net.degrees();
    let (lo, hi) = d.iter().fold((f64::MAX, f64::MIN), |(l, h), x| (l.min(*x), h.max(*x)));
    assert!(lo <= lambda + 1e-12 && lambda <= hi + 1e-12);
}

fn write_network(dir: &Path, net: &CompetitionNetwork) -> String {
    let path = dir.join("input.json");
    fs::write(&path, NetworkDocument::from_network(net).to_json()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn simulate_uniform_complete_matches_prediction() {
    let dir = TempDir::new().unwrap();
    let input = write_network(dir.path(), &CompetitionNetwork::uniform_complete(10, 0.4).unwrap());
    let o = attnet(&["simulate", &input, "--out", &out_flag(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = stdout(&o);
    assert_eq!(field(&report, "steady_reached"), "true");
    let gap: f64 = field(&report, "relative_gap").parse().unwrap();
    assert!(gap <= 1e-3, "{gap}");
    let csv = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("time,a_1,"));
}

#[test]
fn short_run_reports_not_steady() {
    let dir = TempDir::new().unwrap();
    let input = write_network(dir.path(), &CompetitionNetwork::uniform_complete(4, 0.2).unwrap());
    fs::write(dir.path().join("run.toml"), "[sim]\nt_max = 0.5\n").unwrap();
    let config = dir.path().join("run.toml");
    let o = attnet(&["simulate", &input, "--config", config.to_str().unwrap(), "--out", &out_flag(dir.path())]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "steady_reached"), "false");
}

#[test]
fn raw_matrix_without_profiles_simulates() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("raw.json");
    fs::write(&input, r#"{"n_nodes": 3, "weights": [[0, 0.5, 0.2], [0.5, 0, 0.1], [0.2, 0.1, 0]]}"#).unwrap();
    let o = attnet(&["simulate", input.to_str().unwrap(), "--out", &out_flag(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn malformed_network_reports_location_and_exit_2() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("bad.json");
    fs::write(&input, "{\n  \"n_nodes\": 3,\n  \"weights\": [[0, 1], oops]\n}").unwrap();
    let o = attnet(&["simulate", input.to_str().unwrap(), "--out", &out_flag(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.json") && err.contains("line 3"), "{err}");
}

#[test]
fn exit_codes_for_config_and_io_errors() {
    let dir = TempDir::new().unwrap();
    let bad_cfg = dir.path().join("bad.toml");
    fs::write(&bad_cfg, "[model]\nzeta = -1.0\n").unwrap();
    assert_eq!(attnet(&["generate", "--config", bad_cfg.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("absent.toml");
    assert_eq!(attnet(&["generate", "--config", missing.to_str().unwrap()]).status.code(), Some(4));
    assert_eq!(attnet(&["generate", "--kind", "lattice"]).status.code(), Some(2));
    // a regular file where the output directory should go
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let o = attnet(&["generate", "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn divergent_simulation_exits_3() {
    let dir = TempDir::new().unwrap();
    let input = write_network(dir.path(), &CompetitionNetwork::uniform_complete(3, 0.1).unwrap());
    fs::write(dir.path().join("run.toml"), "[sim]\ndt = 50.0\nt_max = 5000.0\n[model]\nr = 5.0\n").unwrap();
    let config = dir.path().join("run.toml");
    let o = attnet(&["simulate", &input, "--config", config.to_str().unwrap(), "--out", &out_flag(dir.path())]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn scan_writes_one_row_per_ordered_pair() {
    let dir = TempDir::new().unwrap();
    let o = attnet(&["scan", "--nodes", "7", "--kind", "dense", "--seed", "3", "--out", &out_flag(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("scan.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], attnet::report::SCAN_SCHEMA);
    assert_eq!(lines[1], attnet::report::SCAN_COLUMNS.join(","));
    assert_eq!(lines.len(), 2 + 7 * 6);
    assert!(lines[2..].iter().all(|l| l.split(',').count() == 13));
}

#[test]
fn sweep_respects_flags_and_thread_count() {
    let run = |threads: &str| {
        let dir = TempDir::new().unwrap();
        let args = [
            "sweep", "--nodes", "6", "--instances", "2", "--sigma-max", "0.5", "--seed", "4", "--threads", threads,
            "--out", &out_flag(dir.path()),
        ];
        let o = attnet(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        fs::read_to_string(dir.path().join("sweep.csv")).unwrap()
    };
    let one = run("1");
    assert_eq!(one, run("3"));
    let rows: Vec<&str> = one.lines().skip(2).collect();
    // three kinds, σ ∈ {0, 0.1, …, 0.5}
    assert_eq!(rows.len(), 3 * 6);
    assert!(rows.iter().all(|r| r.split(',').nth(2) == Some("2")));
}

#[test]
fn fixed_point_from_values_and_network() {
    let o = attnet(&["fixed-point", "--lambda", "4", "--mu", "1"]);
    let report = stdout(&o);
    // K ζ / (1 + ζ μ λ) with K = 1, ζ = 0.5
    assert_eq!(field(&report, "A"), "0.16666666666666666");
    assert_eq!(field(&report, "B"), "0.3333333333333333");

    let dir = TempDir::new().unwrap();
    let net = CompetitionNetwork::uniform_complete(5, 0.25).unwrap();
    let input = write_network(dir.path(), &net);
    let report = stdout(&attnet(&["fixed-point", &input]));
    let s = SpectralSummary::of(&net).unwrap();
    assert_eq!(field(&report, "lambda"), attnet::output::fmt_num(s.lambda));
}

#[test]
fn config_file_round_trip() {
    let mut cfg = RunConfig::default();
    cfg.seed = 123_456_789;
    cfg.threads = 2;
    cfg.out = "results/run-1".into();
    cfg.network.kind = attnet::NetworkKind::Heterogeneous;
    cfg.network.dense_fraction = 0.1 + 0.2;
    cfg.model.zeta = 1.0 / 3.0;
    cfg.sim.steady_tol = 2.5e-11;
    cfg.sweep.kinds = vec![attnet::NetworkKind::Dense];
    cfg.sweep.sigma_step = 0.05;
    let text = cfg.emit().unwrap();
    assert_eq!(RunConfig::parse(&text).unwrap(), cfg);

    let dir = TempDir::new().unwrap();
    let path = dir.path().join("run.toml");
    fs::write(&path, &text).unwrap();
    assert_eq!(RunConfig::load(Some(&path)).unwrap(), cfg);
}
