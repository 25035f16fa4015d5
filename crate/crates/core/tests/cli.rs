use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use sdual_core::catalog::{generate_all_graphs, GraphFilter};
use sdual_core::cli::formats::{parse_graph6, to_graph6};

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("sdual-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, body: &str) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, body).unwrap();
        p.to_str().unwrap().to_string()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn sdual(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdual"))
        .args(args)
        .output()
        .unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn td_on_p4() {
    let s = Scratch::new("td");
    let p4 = s.file("p4.txt", "0 1\n1 2\n2 3\n");
    let out = sdual(&["td", "--in", &p4]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema"], "sd-report/1");
    assert_eq!(r["items"][0]["value"], 3);
    assert_eq!(r["items"][0]["verified"], true);
    assert!(r.get("wall_time_ms").is_none());
}

#[test]
fn missing_input_exits_2() {
    let out = sdual(&["td", "--in", "/nonexistent/missing.g6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read"));
    assert_eq!(sdual(&["td"]).status.code(), Some(2));
    assert_eq!(sdual(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn malformed_graph6_reports_offset() {
    let s = Scratch::new("bad");
    let bad = s.file("bad.g6", "A_\nA`\n");
    let out = sdual(&["td", "--in", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("byte 4"));
}

#[test]
fn duality_fixture_passes() {
    let s = Scratch::new("dual");
    let k3 = s.file("k3.g6", "Bw\n");
    let out = sdual(&[
        "dual-verify",
        "--generate",
        "5",
        "--connected",
        "--max-degree",
        "3",
        "--min-n",
        "1",
        "--forbid",
        &k3,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["pass"], true);
    assert_eq!(r["summary"]["provenance"]["p"], 3);
}

#[test]
fn failed_verdict_exits_1() {
    let s = Scratch::new("fail");
    let k3 = s.file("k3.g6", "Bw\n");
    // K_3 maps to itself, so it cannot serve as a dual for Forb(K_3)
    let out = sdual(&[
        "dual-verify",
        "--generate",
        "4",
        "--connected",
        "--forbid",
        &k3,
        "--dual-graph",
        &k3,
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["pass"], false);
}

#[test]
fn built_dual_can_be_reloaded() {
    let s = Scratch::new("reload");
    let k3 = s.file("k3.g6", "Bw\n");
    let dual = s.0.join("dual.g6");
    let dual = dual.to_str().unwrap();
    let base = [
        "--generate",
        "5",
        "--connected",
        "--min-n",
        "1",
        "--forbid",
        &k3,
    ];
    let mut args = vec!["dual-build"];
    args.extend(base);
    args.extend(["--emit-dual", dual]);
    assert_eq!(sdual(&args).status.code(), Some(0));
    let mut args = vec!["dual-verify"];
    args.extend(base);
    args.extend(["--dual-graph", dual]);
    assert_eq!(sdual(&args).status.code(), Some(0));
}

#[test]
fn report_goes_to_out_file() {
    let s = Scratch::new("out");
    let out_path = s.0.join("r.json");
    let out_path = out_path.to_str().unwrap();
    let out = sdual(&["grad", "--generate", "3", "--rank", "0", "--out", out_path]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    assert_eq!(r["items"].as_array().unwrap().len(), 8);
}

#[test]
fn timing_is_opt_in() {
    let r = report(&sdual(&["orient", "--generate", "3", "--timing"]));
    assert!(r["wall_time_ms"].is_u64());
}

#[test]
fn power_command() {
    let s = Scratch::new("power");
    let k2 = s.file("k2.g6", "A_\n");
    let k3 = s.file("k3.g6", "Bw\n");
    let out = sdual(&["power", "--base", &k2, "--template", &k3, "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["summary"]["order"], 12);
    assert_eq!(r["summary"]["order_formula"], "12");
    let out = sdual(&[
        "power",
        "--base",
        &k3,
        "--template",
        &k3,
        "--p",
        "2",
        "--cap",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn centered_verify_with_coloring_file() {
    let s = Scratch::new("centered");
    let c4 = s.file("c4.txt", "0 1\n1 2\n2 3\n3 0\n");
    let col = s.file("c4.col", "1 2 1 2\n");
    let out = sdual(&[
        "centered-verify",
        "--in",
        &c4,
        "--coloring",
        &col,
        "--p",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        report(&out)["items"][0]["counterexample"],
        serde_json::json!([0, 1, 2, 3])
    );
    let out = sdual(&[
        "centered-verify",
        "--in",
        &c4,
        "--coloring",
        &col,
        "--p",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn odd_power_experiment_with_dual_claim() {
    let out = sdual(&[
        "experiment-odd-power",
        "--generate",
        "6",
        "--connected",
        "--min-n",
        "1",
        "--p",
        "3",
        "--claim-from-dual",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["summary"]["within_claim"], true);
    assert!(r["items"]
        .as_array()
        .unwrap()
        .iter()
        .any(|i| i["skipped"] == true));
}

#[test]
fn exhaustive_flag_fails_on_heuristics() {
    let s = Scratch::new("exh");
    let p20: String = (0..19).map(|i| format!("{i} {}\n", i + 1)).collect();
    let f = s.file("p20.txt", &p20);
    assert_eq!(sdual(&["grad", "--in", &f]).status.code(), Some(0));
    assert_eq!(
        sdual(&["grad", "--in", &f, "--exhaustive"]).status.code(),
        Some(1)
    );
}

#[test]
fn graph6_round_trip_on_small_graphs() {
    for g in generate_all_graphs(7, &GraphFilter::default()).unwrap() {
        let s = to_graph6(&g);
        assert_eq!(parse_graph6(&s).unwrap(), g);
        assert_eq!(to_graph6(&parse_graph6(&s).unwrap()), s);
    }
}
