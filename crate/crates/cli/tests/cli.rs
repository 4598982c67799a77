use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gsign::simgen::{build_covariance, draw_sample, CovarianceSpec, Distribution};
use gsign::StreamKey;

fn gsign(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsign"))
        .args(args)
        .env_remove("GSIGN_THREADS")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = gsign(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn fails(args: &[&str]) -> String {
    let out = gsign(args);
    assert_eq!(out.status.code(), Some(1), "{args:?} should fail");
    String::from_utf8(out.stderr).unwrap()
}

fn sample(n: usize, p: usize, shift: f64, seed: u64) -> Vec<Vec<f64>> {
    let cov = build_covariance(&CovarianceSpec::ar(), p).unwrap();
    let mut mean = vec![0.0; p];
    mean[0] = shift;
    let x = draw_sample(
        Distribution::Mvg,
        &mean,
        &cov,
        n,
        &mut StreamKey::new(seed).rng(),
    )
    .unwrap();
    x.rows().map(<[f64]>::to_vec).collect()
}

fn write_csv(path: &Path, header: Option<&str>, rows: impl IntoIterator<Item = String>) {
    let mut text = header.map(|h| format!("{h}\n")).unwrap_or_default();
    for r in rows {
        text.push_str(&r);
        text.push('\n');
    }
    fs::write(path, text).unwrap();
}

fn numeric(rows: &[Vec<f64>]) -> impl Iterator<Item = String> + '_ {
    rows.iter()
        .map(|r| r.iter().map(f64::to_string).collect::<Vec<_>>().join(","))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Fixture {
    dir: tempfile::TempDir,
}

impl Fixture {
    fn new() -> Self {
        Self {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

#[test]
fn test_one_writes_result_json() {
    let f = Fixture::new();
    let data = f.path("x.csv");
    write_csv(&data, None, numeric(&sample(30, 6, 1.0, 1)));
    let text = ok(&[
        "test-one",
        "--data",
        s(&data),
        "--scaling",
        "l2",
        "--kernel",
        "linear",
        "--B",
        "200",
        "--alpha",
        "0.05",
        "--seed",
        "7",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in [
        "statistic",
        "p_value",
        "B",
        "seed",
        "method",
        "alpha",
        "reject",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["B"], 200);
    assert_eq!(v["reject"], true);
    assert_eq!(
        text,
        ok(&["test-one", "--data", s(&data), "--B", "200", "--seed", "7"])
    );
}

#[test]
fn test_one_subtracts_mu0() {
    let f = Fixture::new();
    let data = f.path("x.csv");
    let rows: Vec<Vec<f64>> = sample(30, 4, 0.0, 2)
        .into_iter()
        .map(|r| r.iter().map(|v| v + 10.0).collect())
        .collect();
    write_csv(&data, None, numeric(&rows));
    let mu0 = f.path("mu0.txt");
    fs::write(&mu0, "10\n10\n10\n10\n").unwrap();
    let shifted: serde_json::Value =
        serde_json::from_str(&ok(&["test-one", "--data", s(&data), "--B", "99"])).unwrap();
    let centered: serde_json::Value = serde_json::from_str(&ok(&[
        "test-one",
        "--data",
        s(&data),
        "--mu0",
        s(&mu0),
        "--B",
        "99",
    ]))
    .unwrap();
    assert_eq!(shifted["reject"], true);
    assert!(centered["p_value"].as_f64().unwrap() > shifted["p_value"].as_f64().unwrap());
}

#[test]
fn missing_file_names_path() {
    let err = fails(&["test-one", "--data", "/nonexistent/data.csv"]);
    assert!(err.contains("/nonexistent/data.csv"), "{err}");
}

#[test]
fn dimension_sized_polynomial_degree_runs() {
    let f = Fixture::new();
    let data = f.path("x.csv");
    write_csv(&data, None, numeric(&sample(12, 300, 0.0, 3)));
    let text = ok(&[
        "test-one",
        "--data",
        s(&data),
        "--scaling",
        "l1",
        "--kernel",
        "poly",
        "--a",
        "4",
        "--b",
        "p",
        "--B",
        "50",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v["statistic"].as_f64().unwrap().is_finite());
}

#[test]
fn test_two_from_two_files() {
    let f = Fixture::new();
    let (a, b) = (f.path("a.csv"), f.path("b.csv"));
    write_csv(&a, None, numeric(&sample(60, 8, 0.0, 4)));
    write_csv(&b, None, numeric(&sample(40, 8, 0.0, 5)));
    let v: serde_json::Value = serde_json::from_str(&ok(&[
        "test-two",
        "--data1",
        s(&a),
        "--data2",
        s(&b),
        "--B",
        "200",
        "--seed",
        "1",
    ]))
    .unwrap();
    assert_eq!(v["method"], "label_permutation");
    assert!(v["p_value"].as_f64().unwrap() > 0.0);
}

#[test]
fn test_two_by_quantile_of_scores() {
    let f = Fixture::new();
    let data = f.path("scored.csv");
    let rows = sample(100, 5, 0.0, 6);
    let lines = rows.iter().enumerate().map(|(i, r)| {
        let shift = if i >= 50 { 3.0 } else { 0.0 };
        let cells: Vec<String> = r.iter().map(|v| (v + shift).to_string()).collect();
        format!("{i},{}", cells.join(","))
    });
    write_csv(&data, Some("score,g1,g2,g3,g4,g5"), lines);
    let v: serde_json::Value = serde_json::from_str(&ok(&[
        "test-two",
        "--data",
        s(&data),
        "--score-column",
        "score",
        "--quantile",
        "10",
        "--B",
        "99",
    ]))
    .unwrap();
    assert_eq!(v["reject"], true);
}

#[test]
fn test_two_rejects_one_class_file() {
    let f = Fixture::new();
    let data = f.path("one.csv");
    write_csv(
        &data,
        Some("g,x,y"),
        ["a,1,2", "a,2,3", "a,3,1"].map(String::from),
    );
    let err = fails(&["test-two", "--data", s(&data), "--label-column", "g"]);
    assert!(err.contains("two classes"), "{err}");
}

fn labeled(f: &Fixture, classes: &[(&str, f64)], per_class: usize) -> PathBuf {
    let path = f.path("labeled.csv");
    let p = 10;
    let mut lines = Vec::new();
    for (k, &(name, shift)) in classes.iter().enumerate() {
        for r in sample(per_class, p, shift, 100 + k as u64) {
            let cells: Vec<String> = r.iter().map(f64::to_string).collect();
            lines.push(format!("{name},{}", cells.join(",")));
        }
    }
    let header = std::iter::once("digit".to_string())
        .chain((0..p).map(|j| format!("x{j}")))
        .collect::<Vec<_>>()
        .join(",");
    write_csv(&path, Some(&header), lines);
    path
}

#[test]
fn pairwise_separated_classes_hit_floor() {
    let f = Fixture::new();
    let data = labeled(&f, &[("a", 5.0), ("b", -5.0), ("c", 0.0)], 30);
    let text = ok(&[
        "pairwise",
        "--data",
        s(&data),
        "--label-column",
        "digit",
        "--B",
        "199",
    ]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "class,a,b,c");
    for (i, line) in lines[1..].iter().enumerate() {
        let cells: Vec<f64> = line
            .split(',')
            .skip(1)
            .map(|c| c.parse().unwrap())
            .collect();
        for (j, &p) in cells.iter().enumerate() {
            let expected = if i == j { 1.0 } else { 1.0 / 200.0 };
            assert!((p - expected).abs() < 1e-12, "({i},{j}) = {p}");
        }
    }
}

#[test]
fn pairwise_single_class_fails() {
    let f = Fixture::new();
    let data = labeled(&f, &[("a", 0.0)], 5);
    fails(&["pairwise", "--data", s(&data), "--label-column", "digit"]);
}

#[test]
fn simulate_flags_and_config_agree() {
    let f = Fixture::new();
    let config = f.path("scenario.json");
    fs::write(
        &config,
        r#"{
  "distribution": "t3",
  "covariance": {"kind": "sar"},
  "design": {"kind": "two_sample", "n1": 12, "n2": 8, "mean2": {"kind": "sparse"}},
  "p": 9,
  "deltas": [0, 2],
  "test": {"scaling": "linf", "kernel": {"kind": "polynomial", "a": 1, "b": 2}, "B": 60, "alpha": 0.1},
  "replications": 10,
  "master_seed": 5
}"#,
    )
    .unwrap();
    let from_file = ok(&["simulate", "--config", s(&config), "-q"]);
    let from_flags = ok(&[
        "simulate",
        "-q",
        "--distribution",
        "t3",
        "--covariance",
        "sar",
        "--n1",
        "12",
        "--n2",
        "8",
        "--mean",
        "sparse",
        "--p",
        "9",
        "--deltas",
        "0,2",
        "--scaling",
        "linf",
        "--kernel",
        "poly",
        "--a",
        "1",
        "--b",
        "2",
        "--B",
        "60",
        "--alpha",
        "0.1",
        "--replications",
        "10",
        "--seed",
        "5",
    ]);
    assert_eq!(from_file, from_flags);
    assert!(from_file.starts_with("delta,rejections,replications,power,se\n"));
}

#[test]
fn simulate_output_is_independent_of_threads() {
    let f = Fixture::new();
    let (one, four) = (f.path("one.csv"), f.path("four.csv"));
    let args = [
        "simulate",
        "--n",
        "20",
        "--p",
        "15",
        "--distribution",
        "t3",
        "--deltas",
        "0,0.3",
        "--replications",
        "12",
        "--B",
        "50",
        "--oracle",
        "30",
        "-q",
    ];
    let run = |threads: &str, out: &Path| {
        let mut a = args.to_vec();
        a.extend(["--threads", threads, "--out", s(out)]);
        ok(&a);
    };
    run("1", &one);
    run("4", &four);
    assert_eq!(fs::read(&one).unwrap(), fs::read(&four).unwrap());
    let text = fs::read_to_string(&one).unwrap();
    assert!(text
        .lines()
        .next()
        .unwrap()
        .ends_with("on_rejections,on_power,on_se"));
}

#[test]
fn bundled_configs_load() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut count = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        ok(&[
            "simulate",
            "--config",
            s(&path),
            "--p",
            "6",
            "--replications",
            "1",
            "--B",
            "5",
            "--deltas",
            "0",
            "-q",
        ]);
        count += 1;
    }
    assert_eq!(count, 20);
}

#[test]
fn oracle_writes_statistics() {
    let text = ok(&["oracle", "--n", "10", "--p", "4", "--draws", "25"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "statistic");
    assert_eq!(lines.len(), 26);
}

#[test]
fn oracle_reads_draw_count_from_table_config() {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/table1_sparse_ar_desk.json");
    let a = ok(&["oracle", "--config", s(&config), "--p", "5", "--draws", "7"]);
    assert_eq!(a.lines().count(), 8);
}

#[test]
fn unknown_config_key_fails() {
    let f = Fixture::new();
    let config = f.path("bad.json");
    fs::write(&config, r#"{"data": "x.csv", "resample": 10}"#).unwrap();
    let err = fails(&["test-one", "--config", s(&config)]);
    assert!(err.contains("resample"), "{err}");
}

#[test]
fn help_lists_defaults() {
    for cmd in ["test-one", "test-two", "pairwise", "simulate", "oracle"] {
        let help = ok(&[cmd, "--help"]);
        for needle in [
            "[default: 1000]",
            "[default: 0.05]",
            "n^(-8/p)",
            "--B",
            "--b",
        ] {
            assert!(help.contains(needle), "{cmd} help lacks {needle}");
        }
    }
}
