use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shapeinv")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "structured-text"]);
    let out = run(&all);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), doc)
}

#[test]
fn list_counts_families_and_models() {
    let (code, doc) = json(&["list"]);
    assert_eq!(code, 0);
    let fams = doc["families"].as_array().unwrap();
    assert_eq!(fams.iter().filter(|f| f["dim"] == 2).count(), 17);
    assert_eq!(fams.iter().filter(|f| f["dim"] == 3).count(), 7);
    assert_eq!(doc["models"].as_array().unwrap().len(), 9);

    let (_, doc) = json(&["list", "--dim", "3"]);
    assert_eq!(doc["families"].as_array().unwrap().len(), 7);
    assert_eq!(doc["config"]["dim"], 3);

    let csv = String::from_utf8(run(&["list", "--format", "csv"]).stdout).unwrap();
    assert_eq!(csv.lines().count(), 1 + 24 + 9);
}

#[test]
fn verify_family_examples() {
    let (code, doc) = json(&["verify", "--family", "W17", "--omega", "2", "--mu", "1", "--kappa", "1.5"]);
    assert_eq!(code, 0);
    let c = doc["report"]["fitted"]["c_kappa"].as_f64().unwrap();
    assert!((c - 2.0).abs() < 1e-9, "{c}");
    assert_eq!(doc["config"]["tol"], 1e-9);
    assert_eq!(doc["status"], "pass");

    assert_eq!(run(&["verify", "--family", "W7", "--r2", "3", "--r3", "4", "--omega", "5"]).status.code(), Some(0));
    let bad = run(&["verify", "--family", "W7", "--r2", "3", "--r3", "4", "--omega", "6"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("r2² + r3² = ω²"));
}

#[test]
fn negative_values_and_tolerance_exit() {
    let (code, doc) = json(&["verify", "--family", "W1", "--mu", "-0.4", "--kappa", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["params"]["mu"], -0.4);
    // a tolerance far below rounding makes the same check fail with exit 1
    assert_eq!(run(&["verify", "--family", "W1", "--mu", "-0.4", "--tol", "1e-30"]).status.code(), Some(1));
}

#[test]
fn verify_model_reports_both_signs() {
    let (code, doc) = json(&["verify", "--model", "vector3d", "--j", "2"]);
    assert_eq!(code, 0);
    assert!(doc["reduction"]["max_deviation"].as_f64().unwrap() < 1e-10);
    assert!(doc["reduction_plus"]["max_deviation"].as_f64().unwrap() > 1e-3);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["spectrum"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--model", "nothing"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--model", "scarf", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--model", "scarf", "--eps", "0.1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--family", "W1", "--model", "scarf"]).status.code(), Some(2));
}

#[test]
fn scarf_spectrum_reports_bound_levels() {
    let (code, doc) = json(&["spectrum", "--model", "scarf", "--kappa", "-3", "--omega", "2", "--levels", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["report"]["bound_levels"], 2);
    assert!(!doc["report"]["notes"].as_array().unwrap().is_empty());
    let gap = doc["report"]["gaps"][1].as_f64().unwrap();
    assert!((gap - 40.0 / 9.0).abs() < 2e-3, "{gap}");
}

#[test]
fn memory_budget_is_a_numerical_failure() {
    let out = run(&["spectrum", "--model", "scarf", "--n-points", "5000", "--max-unknowns", "1000"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn ladder_oscillator_overlap() {
    let (code, doc) = json(&["ladder", "--model", "oscillatorA", "--n", "1"]);
    assert_eq!(code, 0);
    assert!(doc["overlap"].as_f64().unwrap() > 0.999);
    assert!((doc["energy"].as_f64().unwrap() - 2.0).abs() < 2e-3);
    assert_eq!(doc["rungs"].as_array().unwrap().len(), 2);
}

#[test]
fn ladder_without_ground_state_lists_rungs() {
    let (code, doc) = json(&["ladder", "--model", "hydrogenlike", "--n", "2"]);
    assert_eq!(code, 3);
    assert_eq!(doc["rungs"].as_array().unwrap().len(), 3);
    assert!(doc["error"].as_str().unwrap().contains("ground state"));
}

#[test]
fn ladder_zero_exports_ground_state() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ground.csv");
    let out = run(&["ladder", "--model", "oscillatorA", "--n", "0", "--states", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,ground_re_1,ground_im_1,ground_re_2,ground_im_2"));
    assert_eq!(lines.count(), 2000);
}

#[test]
fn structured_output_is_deterministic() {
    let args = ["spectrum", "--model", "tanhexp", "--levels", "3", "--format", "structured-text"];
    let a = run(&args).stdout;
    let b = run(&args).stdout;
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let doc: Value = serde_json::from_slice(&a).unwrap();
    // defaults are written back into the report
    for key in ["n_points", "xmin", "xmax", "tol", "levels", "kappa", "mu", "lambda", "max_unknowns"] {
        assert!(doc["config"].get(key).is_some(), "{key}");
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# scarf run\nmodel = scarf\nkappa = -3\nlevels = 2\nformat = structured-text\n").unwrap();
    let report = dir.path().join("report.json");
    let out = run(&["spectrum", "--config", cfg.to_str().unwrap(), "--levels", "3", "--output", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["config"]["levels"], 3);
    assert_eq!(doc["config"]["kappa"], -3.0);
    assert_eq!(doc["report"]["eigenvalues"].as_array().unwrap().len(), 3);

    std::fs::write(&cfg, "model = scarf\nfamily = W1\n").unwrap();
    assert_eq!(run(&["spectrum", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn csv_uses_plain_header_and_round_trip_floats() {
    let out = run(&["spectrum", "--model", "tanhexp", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("level,eigenvalue,gap,raw_0,raw_1,analytic_gap,deviation"));
    for line in lines {
        for field in line.split(',').skip(1) {
            let v: f64 = field.parse().unwrap();
            assert_eq!(format!("{v:?}"), field);
        }
    }
}
