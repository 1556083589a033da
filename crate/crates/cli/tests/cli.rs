use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nwsteiner")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn random_instance(dir: &TempDir, seed: &str, extra: &[&str]) -> String {
    let file = path(dir, &format!("random-{seed}.json"));
    let mut args = vec!["generate", "random", "--seed", seed, "--output", &file];
    args.extend_from_slice(extra);
    let out = run(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    file
}

#[test]
fn solve_then_verify_dual() {
    let dir = TempDir::new().unwrap();
    for seed in ["1", "2", "3", "4"] {
        let inst = random_instance(&dir, seed, &["--n", "7", "--demands", "2"]);
        let cert = path(&dir, &format!("cert-{seed}.json"));
        let out = run(&["solve", "pcsf", &inst, "--certificate", &cert]);
        assert_eq!(code(&out), 0);
        assert!(Path::new(&cert).exists());
        let out = run(&["verify", "dual", &cert, &inst]);
        assert_eq!(code(&out), 0, "{}", stdout(&out));
    }
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = TempDir::new().unwrap();
    let inst = random_instance(&dir, "11", &["--n", "6", "--demands", "2"]);
    let cert = path(&dir, "cert.json");
    assert_eq!(code(&run(&["solve", "pcsf", &inst, "--certificate", &cert])), 0);
    let mut json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    json["objective"] = serde_json::Value::String("1000".into());
    fs::write(&cert, json.to_string()).unwrap();
    assert_eq!(code(&run(&["verify", "dual", &cert, &inst])), 1);
}

#[test]
fn solver_stays_within_the_guarantee_of_the_oracle() {
    let dir = TempDir::new().unwrap();
    let inst = random_instance(&dir, "5", &["--n", "8", "--demands", "3"]);
    let solved: serde_json::Value = serde_json::from_slice(&run(&["--format", "json", "solve", "pcsf", &inst]).stdout).unwrap();
    let exact: serde_json::Value = serde_json::from_slice(&run(&["--format", "json", "oracle", "pcsf", &inst]).stdout).unwrap();
    let value = |v: &serde_json::Value, key: &str| -> f64 {
        let text = v[key].as_str().unwrap();
        match text.split_once('/') {
            Some((a, b)) => a.parse::<f64>().unwrap() / b.parse::<f64>().unwrap(),
            None => text.parse().unwrap(),
        }
    };
    // 2 H(6) = 4.9
    assert!(value(&solved, "objective") <= 4.9 * value(&exact, "optimum") + 1e-9);
    assert!(value(&solved, "objective") >= value(&exact, "optimum"));
}

#[test]
fn generated_instances_are_deterministic() {
    let first = run(&["generate", "random", "--seed", "9", "--n", "10", "--demands", "3"]);
    let second = run(&["generate", "random", "--seed", "9", "--n", "10", "--demands", "3"]);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    assert_ne!(first.stdout, run(&["generate", "random", "--seed", "10", "--n", "10", "--demands", "3"]).stdout);
}

#[test]
fn gap_flow_verification() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "gap.json");
    let out = run(&["--format", "json", "generate", "gap", "--B", "10", "--k", "10", "--output", &file]);
    assert_eq!(code(&out), 0);
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["fractional_value"], "100/19");
    assert_eq!(summary["flow_valid"], true);
    let exact = run(&["oracle", "budgeted", &file, "--root", "r", "--max-vertices", "40"]);
    assert!(stdout(&exact).starts_with("optimum 1\n"), "{}", stdout(&exact));
    assert_eq!(code(&run(&["verify", "flow", "--B", "10", "--k", "10"])), 0);
    assert_eq!(code(&run(&["verify", "flow", "--B", "4", "--k", "3", "--scale", "2"])), 1);
}

#[test]
fn satnw_from_dimacs() {
    let dir = TempDir::new().unwrap();
    let cnf = path(&dir, "f.cnf");
    fs::write(&cnf, "c tiny\np cnf 2 2\n1 2 0\n-1 0\n").unwrap();
    let inst = path(&dir, "gadget.json");
    assert_eq!(code(&run(&["generate", "satnw", "--cnf", &cnf, "--epsilon", "1/2", "--K", "3", "--output", &inst])), 0);
    let out = run(&["oracle", "networth", &inst, "--root", "r", "--max-vertices", "24"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("3/2"), "{}", stdout(&out));
}

#[test]
fn bench_writes_csv() {
    let dir = TempDir::new().unwrap();
    let csv = path(&dir, "gap.csv");
    assert_eq!(code(&run(&["bench", "--suite", "gap-sweep", "--seeds", "2..=4", "--output", &csv])), 0);
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "seed,k,fractional,integral,gap,flow,ok,detail");
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("4,4,16/7,1,16/7,true,true"));
    let again = run(&["bench", "--suite", "gap-sweep", "--seeds", "2..=4"]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn budgeted_and_reductions() {
    let dir = TempDir::new().unwrap();
    let inst = random_instance(&dir, "21", &["--n", "7", "--prize", "0..5"]);
    let out = run(&["--format", "json", "solve", "budgeted", &inst, "--budget", "6", "--unrooted"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let tree: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(tree["vertices"].is_array());
    let out = run(&["reduce", "ksteiner-to-kmst", &inst, "--k", "2", "--terminals", "v0,v1,v2", "--solve"]);
    assert_eq!(code(&out), 0, "{}{}", stdout(&out), String::from_utf8_lossy(&out.stderr));
    let out = run(&["reduce", "quota-to-ksteiner", &inst, "--quota", "4", "--epsilon", "1/4", "--solve"]);
    assert!(matches!(code(&out), 0 | 1), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    // usage errors
    assert_eq!(code(&run(&["solve", "pcsf"])), 2);
    assert_eq!(code(&run(&["bench", "--suite", "nope", "--seeds", "0..2"])), 2);
    let inst = random_instance(&dir, "4", &["--n", "20"]);
    assert_eq!(code(&run(&["solve", "budgeted", &inst, "--budget", "5", "--epsilon", "3"])), 2);
    // oracle limit
    assert_eq!(code(&run(&["oracle", "budgeted", &inst, "--budget", "6", "--max-vertices", "10"])), 3);
    // infeasible
    let tiny = path(&dir, "tiny.json");
    fs::write(&tiny, r#"{"vertices":[{"id":"a","cost":"5"}],"edges":[]}"#).unwrap();
    assert_eq!(code(&run(&["solve", "budgeted", &tiny, "--budget", "1", "--unrooted"])), 1);
}
