use std::process::{Command, Output};

use serde_json::Value;

fn sais(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sais"))
        .args(args)
        .env_remove("SAIS_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = sais(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn list_prints_26_rows_in_order() {
    let o = sais(&["list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 27);
    assert!(lines[1].starts_with("1,Beale,2,"));
    assert!(lines[17].starts_with("17,Sphere,30,"));
    assert!(lines[26].starts_with("26,Ackley,30,"));
}

#[test]
fn smallest_legal_run_produces_a_record() {
    let v = json(&[
        "run",
        "--problem",
        "3",
        "--algo",
        "sais",
        "--pop",
        "3",
        "--iters",
        "1",
        "--trials",
        "1",
    ]);
    assert_eq!(v["schema_version"], "1");
    let row = &v["rows"][0];
    assert_eq!(row["problem_name"], "Matyas");
    assert_eq!(row["pop"], 3);
    assert_eq!(row["trials"], 1);
    // three initial evaluations; groups of one leave only parasitism active
    assert_eq!(row["mean_evals"], 4.0);
}

#[test]
fn csv_header_is_fixed() {
    let o = sais(&[
        "run",
        "--problem",
        "matyas",
        "--pop",
        "30",
        "--iters",
        "5",
        "--trials",
        "2",
    ]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).lines().next().unwrap(),
        "problem_index,problem_name,algorithm,mask,pop,iters,trials,seed,tolerance,\
         success_rate,iter_mean,iter_std,fitness_mean,fitness_std,mean_evals"
    );
}

#[test]
fn zero_success_exits_cleanly_with_na() {
    let o = sais(&[
        "run",
        "--problem",
        "19",
        "--pop",
        "30",
        "--iters",
        "10",
        "--trials",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row: Vec<_> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[9], "0.0");
    assert_eq!(row[10], "n/a");
    assert_eq!(row[11], "n/a");
}

#[test]
fn csv_and_json_carry_identical_values() {
    let args = [
        "sweep",
        "--problem",
        "shubert",
        "--pairs",
        "20:50,40:25",
        "--trials",
        "4",
        "--seed",
        "9",
    ];
    let csv_out = stdout(&sais(&args));
    let v = json(&args);
    let mut reader = csv::Reader::from_reader(csv_out.as_bytes());
    let header = reader.headers().unwrap().clone();
    let rows: Vec<_> = reader.records().map(Result::unwrap).collect();
    let json_rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), json_rows.len());
    for (rec, jrow) in rows.iter().zip(json_rows) {
        for (name, cell) in header.iter().zip(rec.iter()) {
            let j = &jrow[name];
            match j {
                Value::Null => assert_eq!(cell, "n/a", "{name}"),
                Value::String(s) => assert_eq!(cell, s, "{name}"),
                Value::Number(n) => {
                    let c: f64 = cell.parse().unwrap();
                    assert_eq!(c, n.as_f64().unwrap(), "{name}");
                }
                other => panic!("unexpected {other}"),
            }
        }
    }
}

#[test]
fn budget_violation_exits_2() {
    let o = sais(&[
        "sweep",
        "--problem",
        "3",
        "--pairs",
        "100:100",
        "--budget",
        "2.5e7",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("100:100"));
}

#[test]
fn empty_pairs_exit_2() {
    assert_eq!(
        sais(&["sweep", "--problem", "3", "--pairs", ""])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        sais(&["run", "--problem", "3", "--pop", "x"]).status.code(),
        Some(2)
    );
    assert_eq!(
        sais(&["run", "--problem", "nope", "--pop", "3", "--iters", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        sais(&["run", "--problem", "3", "--iters", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        sais(&["run", "--problem", "3", "--pop", "2", "--iters", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        sais(&[
            "run",
            "--problem",
            "3",
            "--pop",
            "9",
            "--iters",
            "1",
            "--mask",
            "x"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn missing_config_file_is_a_runtime_error() {
    let o = sais(&["run", "--config", "/nonexistent/spec.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bad_pair_fails_before_any_trial_runs() {
    // budget checking happens before any trial runs, so a bad pair appended
    // to the canonical list must fail fast
    let o = sais(&[
        "sweep",
        "--problem",
        "3",
        "--budget",
        "25000000",
        "--pairs",
        "50:500000,500:50000,5000:5000,50000:500,7:7",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("7:7"));
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("spec.json");
    std::fs::write(
        &cfg,
        r#"{"problem": "booth", "population_size": 12, "trials": 2}"#,
    )
    .unwrap();
    let v = json(&[
        "run",
        "--problem",
        "3",
        "--pop",
        "30",
        "--iters",
        "4",
        "--config",
        cfg.to_str().unwrap(),
    ]);
    let row = &v["rows"][0];
    assert_eq!(row["problem_name"], "Booth");
    assert_eq!(row["pop"], 12);
    assert_eq!(row["iters"], 4);
    assert_eq!(row["trials"], 2);
}

#[test]
fn output_dir_env_and_curves_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_sais"))
        .args([
            "ablate",
            "--problem",
            "2",
            "--pop",
            "30",
            "--iters",
            "6",
            "--trials",
            "2",
        ])
        .args(["--out", "summary.csv", "--curves", "curves.csv"])
        .env("SAIS_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 5);
    let curves = std::fs::read_to_string(dir.path().join("curves.csv")).unwrap();
    let lines: Vec<_> = curves.lines().collect();
    assert_eq!(lines[0], "config_id,iteration,mean_best_fitness");
    assert_eq!(lines.len(), 1 + 4 * 6);
    assert!(lines[1].starts_with("2:sais:all:p30:i6,1,"));
}

#[test]
fn ablate_single_trial_curves_equal_run_curves() {
    let v = json(&[
        "ablate",
        "--problem",
        "13",
        "--pop",
        "30",
        "--iters",
        "8",
        "--trials",
        "1",
        "--seed",
        "4",
    ]);
    let run = json(&[
        "run",
        "--problem",
        "13",
        "--pop",
        "30",
        "--iters",
        "8",
        "--trials",
        "1",
        "--seed",
        "4",
        "--mask",
        "parasitism",
        "--per-trial",
    ]);
    let best = run["trials"][0]["best_fitness"].as_f64().unwrap();
    let curves = v["curves"].as_array().unwrap();
    let last = curves
        .iter()
        .rfind(|c| c["config_id"] == "13:sais:parasitism:p30:i8")
        .unwrap();
    assert_eq!(last["mean_best_fitness"].as_f64().unwrap(), best);
}

#[test]
fn compare_reports_cost_ratio_of_three() {
    let v = json(&[
        "compare",
        "--problem",
        "5",
        "--pop",
        "300",
        "--iters",
        "5",
        "--trials",
        "2",
        "--tolerance",
        "1e-300",
    ]);
    let ratio = v["cost"]["ratio"].as_f64().unwrap();
    assert!((ratio - 3.0).abs() < 1e-12, "{ratio}");
    assert_eq!(v["rows"][1]["algorithm"], "sos");
    assert_eq!(v["rows"][1]["mask"], Value::Null);
}

#[test]
fn thread_count_does_not_change_json() {
    let base = [
        "run",
        "--problem",
        "shubert",
        "--pop",
        "30",
        "--iters",
        "20",
        "--trials",
        "6",
        "--seed",
        "3",
        "--format",
        "json",
        "--per-trial",
    ];
    let one = sais(&[&base[..], &["--threads", "1"]].concat());
    let many = sais(&[&base[..], &["--threads", "4"]].concat());
    assert!(one.status.success() && many.status.success());
    assert_eq!(one.stdout, many.stdout);
}
