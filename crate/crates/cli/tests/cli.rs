use std::fs;
use std::process::{Command, Output};

use nilhsp::reduction::ExplicitGroup;
use nilhsp::GroupSpec;

fn nilhsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilhsp")).args(args).env_remove("HSP_MAX_GROUP_ORDER").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gen_group_writes_a_valid_deterministic_group_file() {
    let a = nilhsp(&["gen-group", "--p", "3", "--m", "2", "--d", "1", "--seed", "7"]);
    let b = nilhsp(&["gen-group", "--p", "3", "--m", "2", "--d", "1", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let g = GroupSpec::parse(&stdout(&a)).unwrap();
    assert_eq!((g.m(), g.d()), (2, 1));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let o = nilhsp(&["gen-group", "--p", "5", "--m", "3", "--d", "2", "--seed", "1", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(GroupSpec::parse(&fs::read_to_string(&path).unwrap()).unwrap().d(), 2);
}

#[test]
fn gen_group_rejects_bad_parameters() {
    assert_eq!(nilhsp(&["gen-group", "--p", "3", "--m", "2", "--d", "2"]).status.code(), Some(2));
    assert_eq!(nilhsp(&["gen-group", "--p", "4", "--m", "2", "--d", "1"]).status.code(), Some(2));
    assert_eq!(nilhsp(&["gen-group", "--p", "3"]).status.code(), Some(2));
}

#[test]
fn solve_quadsys_verifies_and_reports_preconditions() {
    let dir = tempfile::tempdir().unwrap();
    let ones = dir.path().join("ones.txt");
    fs::write(&ones, "3 1 6\n1 1 1 1 1 1\n").unwrap();
    let o = nilhsp(&["solve-quadsys", "--in", ones.to_str().unwrap(), "--verify"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let mut lines = out.lines();
    let j: Vec<u64> = lines.next().unwrap().split_whitespace().map(|x| x.parse().unwrap()).collect();
    assert_eq!(j.len(), 6);
    assert!(j.iter().any(|&x| x != 0));
    assert_eq!(lines.next(), Some("OK"));

    let short = dir.path().join("short.txt");
    fs::write(&short, "3 1 5\n1 1 1 1 1\n").unwrap();
    assert_eq!(nilhsp(&["solve-quadsys", "--in", short.to_str().unwrap()]).status.code(), Some(3));

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "3 1 6\n1 1 x\n").unwrap();
    assert_eq!(nilhsp(&["solve-quadsys", "--in", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(nilhsp(&["solve-quadsys", "--in", "/nonexistent"]).status.code(), Some(2));
}

#[test]
fn solve_quadsys_large_prime() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sys.txt");
    let row: Vec<String> = (0..18).map(|i| ((i * 7919 + 13) % 9973).to_string()).collect();
    let row2: Vec<String> = (0..18).map(|i| ((i * i * 31 + 5) % 9973).to_string()).collect();
    fs::write(&path, format!("9973 2 18\n{}\n{}\n", row.join(" "), row2.join(" "))).unwrap();
    let o = nilhsp(&["solve-quadsys", "--in", path.to_str().unwrap(), "--verify", "--seed", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("OK\n"));
}

#[test]
fn run_hsp_matches_and_is_deterministic() {
    let args =
        ["run-hsp", "--p", "3", "--m", "2", "--d", "1", "--order", "p", "--trials", "50", "--seed", "4", "--json"];
    let a = nilhsp(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = nilhsp(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["summary"]["matched"], 50);
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 50);
    assert!(records.iter().all(|r| r["match"] == true && r["oracle_order"] == 3 && r.get("wall_ms").is_none()));
}

#[test]
fn run_hsp_trivial_subgroup_and_group_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    fs::write(&path, GroupSpec::heisenberg(nilhsp::Prime::new(3).unwrap()).unwrap().to_text()).unwrap();
    let o = nilhsp(&["run-hsp", "--group-file", path.to_str().unwrap(), "--order", "1", "--trials", "5", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["records"].as_array().unwrap().iter().all(|r| r["recovered_order"] == 1));
    assert_eq!(v["config"]["fixed_group"], true);
}

#[test]
fn run_hsp_respects_the_group_order_bound() {
    let o = Command::new(env!("CARGO_BIN_EXE_nilhsp"))
        .args(["run-hsp", "--p", "5", "--m", "3", "--d", "2"])
        .env("HSP_MAX_GROUP_ORDER", "1000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_nilhsp"))
        .args(["run-hsp", "--p", "3", "--m", "2", "--d", "1"])
        .env("HSP_MAX_GROUP_ORDER", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn run_reduction_on_tables() {
    let dir = tempfile::tempdir().unwrap();
    let heis =
        ExplicitGroup::from_group_spec(&GroupSpec::heisenberg(nilhsp::Prime::new(3).unwrap()).unwrap(), 100).unwrap();
    let g = ExplicitGroup::direct_product(&heis, &ExplicitGroup::cyclic(5).unwrap()).unwrap();
    let path = dir.path().join("t.txt");
    fs::write(&path, g.to_text()).unwrap();
    for solver in ["brute", "quantum"] {
        let o = nilhsp(&[
            "run-reduction",
            "--table-file",
            path.to_str().unwrap(),
            "--hidden",
            "5,1",
            "--solver",
            solver,
            "--json",
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["match"], true);
        let orders: Vec<u64> = v["sylow"].as_array().unwrap().iter().map(|s| s["order"].as_u64().unwrap()).collect();
        assert_eq!(orders, vec![27, 5]);
        if solver == "quantum" {
            assert!(v["quantum_calls"].as_u64().unwrap() > 0);
        }
    }

    let modular = dir.path().join("m.txt");
    fs::write(&modular, ExplicitGroup::modular(3).unwrap().to_text()).unwrap();
    let o = nilhsp(&["run-reduction", "--table-file", modular.to_str().unwrap(), "--seed", "2", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["sylow"][0]["exponent_subgroup_order"], 9);
    assert_eq!(v["sylow"][0]["hall_property"], true);

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "2\n0 1\n1 1\n").unwrap();
    assert_eq!(nilhsp(&["run-reduction", "--table-file", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(
        nilhsp(&["run-reduction", "--table-file", modular.to_str().unwrap(), "--hidden", "99"]).status.code(),
        Some(2)
    );
}

#[test]
fn bench_hsp_suite_emits_json() {
    let o = nilhsp(&["bench", "--suite", "hsp", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 4);
}
