use heisweil_cli::{run, EXIT_FAILED, EXIT_OK, EXIT_USAGE};
use serde_json::Value;
use std::path::PathBuf;

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("heisweil-cli-{}-{name}", std::process::id()))
}

fn run_args(args: &[&str]) -> i32 {
    run(std::iter::once("heisweil").chain(args.iter().copied()))
}

fn run_to_file(args: &[&str], name: &str) -> (i32, String) {
    let path = tmp(name);
    let p = path.to_str().unwrap().to_string();
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--output", &p]);
    let code = run_args(&full);
    let text = std::fs::read_to_string(&path).unwrap_or_default();
    let _ = std::fs::remove_file(&path);
    (code, text)
}

#[test]
fn full_run_at_three_passes() {
    let (code, text) = run_to_file(&["verify", "all", "--p", "3", "--ell", "1"], "all3.json");
    assert_eq!(code, EXIT_OK, "{text}");
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["suite"], "all");
    assert!(v["checks"].as_u64().unwrap() > 50);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    assert_eq!(v["config"]["p"], 3);
    assert_eq!(v["config"]["K"], 4);
    assert_eq!(v["seed"], 0);
}

#[test]
fn weil_dump_has_one_matrix_per_symplectic_element() {
    let (code, text) = run_to_file(&["weil", "dump", "--p", "3", "--ell", "1", "--zeta", "1"], "weil.json");
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&text).unwrap();
    let imgs = v["sp_images"].as_array().unwrap();
    assert_eq!(imgs.len(), 24);
    assert_eq!(imgs[0]["image"].as_array().unwrap().len(), 3);
    assert_eq!(v["conductor"], 12);
    assert!(imgs[0]["image"][0][0]["coeffs"].is_array());
}

#[test]
fn guards_and_bad_arguments_exit_with_two() {
    assert_eq!(run_args(&["verify", "weil", "--p", "11", "--ell", "1", "--mode", "exhaustive"]), EXIT_USAGE);
    assert_eq!(run_args(&["verify", "nonsense"]), EXIT_USAGE);
    assert_eq!(run_args(&["verify", "heisenberg", "--p", "9"]), EXIT_USAGE);
    assert_eq!(run_args(&["verify", "heisenberg", "--format", "xml"]), EXIT_USAGE);
    assert_eq!(run_args(&["verify", "sqrt", "--K", "2", "--k0", "3"]), EXIT_USAGE);
    assert_eq!(run_args(&["frobnicate"]), EXIT_USAGE);
    assert_eq!(run_args(&["sqrt", "--n", "1", "--matrix", "[[2]]"]), EXIT_USAGE);
    assert_eq!(run_args(&["--help"]), EXIT_OK);
}

#[test]
fn identical_configurations_give_identical_reports() {
    let args = ["verify", "weil", "--p", "5", "--mode", "sampled", "--samples", "50", "--seed", "7"];
    let (c1, a) = run_to_file(&args, "det1.json");
    let (c2, b) = run_to_file(&args, "det2.json");
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    let strip = |s: &str| s.lines().filter(|l| !l.contains("\"output\"")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&a), strip(&b));
    let (_, x) = run_to_file(&["verify", "sqrt", "--p", "5", "--seed", "3", "--format", "csv"], "det.csv");
    let (_, y) = run_to_file(&["verify", "sqrt", "--p", "5", "--seed", "3", "--format", "csv"], "det.csv");
    assert_eq!(x, y);
    assert!(x.starts_with("suite,check,passed,witness\n"));
}

#[test]
fn square_root_command() {
    let (code, text) = run_to_file(&["sqrt", "--n", "1", "--p", "3", "--K", "4", "--k0", "1", "--matrix", "[[4]]"], "sqrt.json");
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["root"]["entries"], serde_json::json!([[79]]));
    assert_eq!(v["residual_levels"], serde_json::json!([0, 1, 3]));
    let (code, text) = run_to_file(&["sqrt", "--n", "2", "--p", "5", "--K", "3", "--matrix", "[[6,5],[10,1]]"], "sqrt2.json");
    assert_eq!(code, EXIT_OK, "{text}");
    assert_eq!(run_args(&["sqrt", "verify", "--p", "3"]), EXIT_OK);
}

#[test]
fn table_group_files_round_trip() {
    let (code, text) = run_to_file(&["mackey", "dump", "--group", "D12"], "d12.json");
    assert_eq!(code, EXIT_OK);
    let path = tmp("table.json");
    std::fs::write(&path, &text).unwrap();
    let p = path.to_str().unwrap();
    let (code, report) = run_to_file(&["mackey", "verify", "--table", p], "table-report.json");
    assert_eq!(code, EXIT_OK, "{report}");
    let v: Value = serde_json::from_str(&report).unwrap();
    assert!(v["checks"].as_u64().unwrap() >= 2);
    std::fs::write(&path, r#"{"order": 2, "table": [[0, 1], [1, 1]]}"#).unwrap();
    assert_eq!(run_args(&["mackey", "verify", "--table", p]), EXIT_USAGE);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(run_args(&["mackey", "dump", "--group", "nope"]), EXIT_USAGE);
}

#[test]
fn mackey_scopes() {
    assert_eq!(run_args(&["mackey", "verify", "--suite", "all", "--output", tmp("m.json").to_str().unwrap()]), EXIT_OK);
    let _ = std::fs::remove_file(tmp("m.json"));
    assert_eq!(run_args(&["mackey", "verify", "--suite", "bogus"]), EXIT_USAGE);
}

#[test]
fn dumps_of_groups_and_representations() {
    let (code, text) = run_to_file(&["heisenberg", "dump", "--p", "3"], "h.json");
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["elements"].as_array().unwrap().len(), 27);
    assert_eq!(v["special_isomorphisms"].as_array().unwrap().len(), 9);
    let (code, text) = run_to_file(&["reps", "dump", "--p", "3", "--zeta", "2", "--model", "plus"], "r.json");
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 27);
    assert_eq!(run_args(&["reps", "dump", "--zeta", "3"]), EXIT_USAGE);
}

#[test]
fn per_suite_verbs_match_verify() {
    for suite in ["heisenberg", "reps", "weil", "sqrt"] {
        let (a_code, a) = run_to_file(&[suite, "verify", "--p", "3"], "verb.json");
        let (b_code, b) = run_to_file(&["verify", suite, "--p", "3"], "verb.json");
        assert_eq!((a_code, b_code), (EXIT_OK, EXIT_OK));
        assert_eq!(a, b);
    }
    assert_ne!(EXIT_FAILED, EXIT_OK);
}
