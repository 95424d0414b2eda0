use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rankcomp::complementarity::full_matrix;
use rankcomp::scoreset::{load_long_table, parse_profiles};
use rankcomp::Ingestion;

const PROFILES: &str = r#"
[[metric]]
id = "H:fluency"
orientation = "higher_better"

[[metric]]
id = "ter"
orientation = "lower_better"
release_date = "2006-01-01"
"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rankcomp"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn desk_rows() -> Vec<String> {
    let mut rows = Vec::new();
    let scores = [
        ("H:fluency", [[4.0, 2.0, 5.0], [3.0, 1.0, 2.0]]),
        ("ter", [[0.3, 0.6, 0.1], [0.5, 0.4, 0.2]]),
    ];
    for (metric, by_system) in scores {
        for (s, row) in by_system.iter().enumerate() {
            for (u, v) in row.iter().enumerate() {
                rows.push(format!("desk,{metric},sys{s},u{u},{v}"));
            }
        }
    }
    rows
}

fn write_inputs(dir: &Path, rows: &[String]) -> (PathBuf, PathBuf) {
    let table = dir.join("scores.csv");
    let profiles = dir.join("profiles.toml");
    fs::write(&table, format!("dataset,metric,system,utterance,score\n{}\n", rows.join("\n"))).unwrap();
    fs::write(&profiles, PROFILES).unwrap();
    (table, profiles)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_complete_table() {
    let tmp = tempfile::tempdir().unwrap();
    let (table, profiles) = write_inputs(tmp.path(), &desk_rows());
    let o = run(&["validate", "--input", s(&table), "--profiles", s(&profiles)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("M=2 N=2 K=3"), "{}", stdout(&o));
}

#[test]
fn validate_missing_cell_strict_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let mut rows = desk_rows();
    rows.retain(|r| r != "desk,ter,sys1,u2,0.2");
    let (table, profiles) = write_inputs(tmp.path(), &rows);
    let o = run(&["validate", "--input", s(&table), "--profiles", s(&profiles)]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("ter") && err.contains("sys1") && err.contains("u2"), "{err}");

    let o = run(&["validate", "--input", s(&table), "--profiles", s(&profiles), "--drop-incomplete"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("M=2 N=2 K=2"));
    assert!(stdout(&o).contains("dropped utterances: u2"));
}

#[test]
fn malformed_inputs_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let (table, profiles) = write_inputs(tmp.path(), &desk_rows());
    fs::write(&table, "metric,system,score\nter,a,1\n").unwrap();
    let o = run(&["validate", "--input", s(&table), "--profiles", s(&profiles)]);
    assert_eq!(o.status.code(), Some(2));

    let missing = tmp.path().join("nope.csv");
    let o = run(&["complementarity", "--input", s(&missing), "--profiles", s(&profiles), "--out", s(tmp.path())]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["validate", "--input", s(&table)]);
    assert_eq!(o.status.code(), Some(2), "usage errors share the input exit code");
}

#[test]
fn complementarity_csv_matches_library() {
    let tmp = tempfile::tempdir().unwrap();
    let (table, profiles) = write_inputs(tmp.path(), &desk_rows());
    let out = tmp.path().join("out");
    let o = run(&["complementarity", "--input", s(&table), "--profiles", s(&profiles), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let parsed = parse_profiles(PROFILES).unwrap();
    let (tensor, _) = load_long_table(&table, &parsed, Ingestion::Strict).unwrap();
    let expected = full_matrix(&tensor).unwrap().to_csv();
    let written = fs::read_to_string(out.join("complementarity.csv")).unwrap();
    let (meta, body) = written.split_once('\n').unwrap();
    assert!(meta.starts_with("# rankcomp version="));
    assert_eq!(body, expected);

    // two metrics: one colored off-diagonal pair, drawn twice
    let svg = fs::read_to_string(out.join("heatmap.svg")).unwrap();
    let c = full_matrix(&tensor).unwrap().values[0][1];
    let colored = format!("fill=\"{}\"", rankcomp::plot::ramp(c));
    assert!(c > 0.0);
    assert_eq!(svg.matches(&colored).count(), 2);
    assert!(svg.contains("stroke=\"red\""));

    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("group_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["meta"]["seed"], 0);
    assert_eq!(summary["groups"]["cross"]["mean"].as_f64().unwrap(), c);
}

#[test]
fn identical_metrics_give_zero_matrix() {
    let tmp = tempfile::tempdir().unwrap();
    let rows: Vec<String> = desk_rows()
        .into_iter()
        .filter(|r| r.contains("H:fluency"))
        .flat_map(|r| [r.clone(), r.replace("H:fluency", "copy")])
        .collect();
    let (table, profiles) = write_inputs(tmp.path(), &rows);
    fs::write(&profiles, "[[metric]]\nid = \"H:fluency\"\norientation = \"higher_better\"\n\n[[metric]]\nid = \"copy\"\norientation = \"higher_better\"\n").unwrap();
    let out = tmp.path().join("out");
    let o = run(&["complementarity", "--input", s(&table), "--profiles", s(&profiles), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(out.join("complementarity.csv")).unwrap();
    let body: Vec<&str> = csv.lines().skip(2).collect();
    assert_eq!(body, vec!["H:fluency,0,0", "copy,0,0"]);
}

fn synth_inputs(dir: &Path) -> (PathBuf, PathBuf) {
    let data = dir.join("data");
    let o = run(&[
        "synth", "--out", s(&data), "--seed", "3", "--systems", "4", "--utterances", "15", "--humans", "3",
        "--automatics", "4",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    (data.join("scores.csv"), data.join("profiles.toml"))
}

#[test]
fn structure_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let (table, profiles) = synth_inputs(tmp.path());
    let out = tmp.path().join("s");
    let o = run(&[
        "structure", "--input", s(&table), "--profiles", s(&profiles), "--out", s(&out), "--level", "utterance",
        "--threshold", "0.8",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let emb = fs::read_to_string(out.join("embedding.csv")).unwrap();
    let lines: Vec<&str> = emb.lines().collect();
    assert_eq!(lines[1], "metric,x,y,cluster,kind");
    assert_eq!(lines.len(), 2 + 7);
    assert!(lines.iter().any(|l| l.ends_with(",human")));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("structure.json")).unwrap()).unwrap();
    let ratios: Vec<f64> = doc["explained_ratio"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert!((ratios.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    assert!(doc["effective_dimension"].as_u64().unwrap() >= 1);
    let svg = fs::read_to_string(out.join("scatter.svg")).unwrap();
    assert_eq!(svg.matches("class=\"human\"").count(), 3);

    let o = run(&["structure", "--input", s(&table), "--profiles", s(&profiles), "--out", s(&out), "--threshold", "2"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn predict_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let (table, profiles) = synth_inputs(tmp.path());
    let out = tmp.path().join("p");
    let o = run(&[
        "predict", "--input", s(&table), "--profiles", s(&profiles), "--out", s(&out), "--rounds", "10",
        "--folds", "3", "--alphas", "1,0.1,0",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("predictions.json")).unwrap()).unwrap();
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 3 * 3);
    assert!(reports.iter().all(|r| r["fold_tau"].as_array().unwrap().len() == 3));
    assert!(reports.iter().all(|r| r["mode"] == "raw_scores"));
    let ratio = fs::read_to_string(out.join("mse_ratio.csv")).unwrap();
    assert_eq!(ratio.lines().count(), 2 + 3 * 3);
    let path = fs::read_to_string(out.join("lasso_path.csv")).unwrap();
    // 3 targets x 3 alphas x 6 features
    assert_eq!(path.lines().count(), 2 + 3 * 3 * 6);
    assert!(out.join("timeline.csv").exists());

    let o = run(&[
        "predict", "--input", s(&table), "--profiles", s(&profiles), "--out", s(&out), "--alphas", "0,1",
    ]);
    assert_eq!(o.status.code(), Some(3), "ascending grid is rejected");
}

#[test]
fn kemeny_audit_reports_bound() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("k");
    let o = run(&["kemeny-audit", "--out", s(&out), "--samples", "300", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("kemeny_audit.json")).unwrap()).unwrap();
    assert!(doc["max_ratio"].as_f64().unwrap() <= 5.0);
    assert_eq!(doc["violations"].as_array().unwrap().len(), 0);
    assert_eq!(doc["meta"]["seed"], 5);

    let o = run(&["kemeny-audit", "--out", s(&out), "--max-items", "11"]);
    assert_eq!(o.status.code(), Some(3));
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn seed_and_config_change_the_hash() {
    let tmp = tempfile::tempdir().unwrap();
    let (table, profiles) = synth_inputs(tmp.path());
    let hash = |extra: &[&str], name: &str| {
        let out = tmp.path().join(name);
        let mut args = vec!["structure", "--input", s(&table), "--profiles", s(&profiles), "--out", s(&out)];
        args.extend_from_slice(extra);
        assert_eq!(run(&args).status.code(), Some(0));
        let doc: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out.join("structure.json")).unwrap()).unwrap();
        doc["meta"]["config_hash"].as_str().unwrap().to_owned()
    };
    let base = hash(&[], "a");
    assert_eq!(base, hash(&[], "b"));
    assert_ne!(base, hash(&["--seed", "1"], "c"));
    assert_ne!(base, hash(&["--standardize"], "d"));
    // output paths are not part of the configuration
    assert_eq!(base, hash(&[], "elsewhere"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let (table, profiles) = synth_inputs(tmp.path());
    let io = ["--input", s(&table), "--profiles", s(&profiles)];
    let commands: Vec<Vec<&str>> = vec![
        [&["complementarity"][..], &io].concat(),
        [&["structure", "--seed", "2"][..], &io].concat(),
        [&["predict", "--rounds", "5", "--folds", "3", "--alphas", "0.5,0"][..], &io].concat(),
        vec!["kemeny-audit", "--samples", "200"],
        vec!["synth", "--utterances", "5"],
    ];
    for (i, cmd) in commands.iter().enumerate() {
        let a = tmp.path().join(format!("run{i}a"));
        let b = tmp.path().join(format!("run{i}b"));
        for dir in [&a, &b] {
            let mut args = cmd.clone();
            args.extend(["--out", s(dir)]);
            let o = run(&args);
            assert_eq!(o.status.code(), Some(0), "{cmd:?}: {}", String::from_utf8_lossy(&o.stderr));
        }
        let (fa, fb) = (files(&a), files(&b));
        assert!(!fa.is_empty());
        assert_eq!(fa, fb, "{cmd:?}");
    }
}
