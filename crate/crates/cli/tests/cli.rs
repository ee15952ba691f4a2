use std::process::{Command, Output};

use serde_json::Value;

fn tiet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tiet")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn monoid_check_reports_membership() {
    let out = tiet(&["monoid", "check", "--matrix", "0,2,1;2,3,5;3,0,5"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["e3n_member"], true);
    assert_eq!(v["det"], 1);
    assert_eq!(v["seed"], 0);
}

#[test]
fn iet_classify_degenerate() {
    let v = json(&tiet(&["iet", "classify", "--params", "1,sqrt2,2"]));
    assert_eq!(v["class"], "Degenerate");
    assert_eq!(v["K"], -1);
    assert_eq!(v["L"], 2);
}

#[test]
fn iet_code_text_and_approx() {
    let exact = tiet(&["iet", "code", "--params", "1,sqrt2,sqrt2", "--x0", "1/2", "--range", "-5:5", "--format", "text"]);
    assert_eq!(String::from_utf8_lossy(&exact.stdout).trim().len(), 12);
    let approx = tiet(&[
        "iet", "code", "--params", "1,1.41421356237,1.41421356237", "--x0", "0.5", "--range", "-5:5", "--format", "text",
        "--approx", "1e-9",
    ]);
    assert_eq!(exact.stdout, approx.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(tiet(&["iet", "classify", "--params", "1,sqrt2,x"]).status.code(), Some(64));
    assert_eq!(tiet(&["nosuch"]).status.code(), Some(64));
    let domain = tiet(&["iet", "classify", "--params", "1,sqrt2,sqrt3"]);
    assert_eq!(domain.status.code(), Some(65));
    let err: Value = serde_json::from_slice(&domain.stderr).unwrap();
    assert!(err["error"].is_string() && err["message"].is_string());
    assert_eq!(tiet(&["monoid", "enum", "--bound", "9"]).status.code(), Some(65));
}

#[test]
fn preserve_exit_status_follows_verdict() {
    let small = ["--trials", "2", "--window", "4000", "--flen", "8"];
    let good = tiet(&[&["preserve", "test", "--morphism", "A->AC;B->BC;C->C"][..], &small].concat());
    assert_eq!(good.status.code(), Some(0));
    assert_eq!(json(&good)["verdict"], "Consistent");
    let bad = tiet(&[&["preserve", "test", "--morphism", "A->AB;B->BC;C->C"][..], &small].concat());
    assert_eq!(bad.status.code(), Some(2));
    assert!(json(&bad)["witness"].as_str().unwrap().contains("factor"));
}

#[test]
fn identical_config_identical_bytes() {
    let args = ["capset", "qbound", "--eps", "sqrt2/3", "--eta", "sqrt2/5", "--triples", "20", "--seed", "7"];
    let a = tiet(&args);
    let b = tiet(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 7);
}

#[test]
fn capset_outputs() {
    let csv = tiet(&["capset", "gen", "--params", "1,sqrt2,sqrt2", "--range", "0:10", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("n,t_exact,t_approx,gap\n0,0,"));
    let svg = tiet(&["capset", "selfsim", "--morphism", "0->10;1->110", "--gaps", "40", "--format", "svg"]);
    assert!(String::from_utf8(svg.stdout).unwrap().starts_with("<svg"));
    let renorm = json(&tiet(&["capset", "renorm", "--eps", "sqrt2/4", "--eta", "sqrt2/8"]));
    assert_eq!(renorm["equal"], true);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("tiet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("members.csv");
    let out = tiet(&["monoid", "enum", "--bound", "1", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 7);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn every_subcommand_has_help() {
    let groups: [(&str, &[&str]); 6] = [
        ("iet", &["code", "classify", "sigma", "complexity"]),
        ("word", &["complexity", "factors", "balance", "densities", "distance"]),
        ("morph", &["info", "apply", "compose", "fixed", "perron"]),
        ("monoid", &["check", "enum", "spectrum", "degeneracy"]),
        ("capset", &["gen", "dualcheck", "scale", "renorm", "qbound", "pn", "selfsim"]),
        ("preserve", &["test", "dichotomy", "thmb", "transport", "fixed"]),
    ];
    for (g, subs) in groups {
        assert!(tiet(&[g, "--help"]).status.success());
        for s in subs {
            let out = tiet(&[g, s, "--help"]);
            assert!(out.status.success(), "{g} {s}");
            assert!(String::from_utf8_lossy(&out.stdout).contains("Usage"));
        }
    }
    assert!(tiet(&["repro", "--help"]).status.success());
}

#[test]
fn repro_subset_passes() {
    let out = tiet(&["repro", "--only", "2,5,9", "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 3);
}

#[test]
fn word_and_morph_commands() {
    let v = json(&tiet(&["word", "complexity", "--word", "CAB|ACBAC", "--nmax", "3"]));
    assert_eq!(v["complexity"][0], 3);
    let v = json(&tiet(&["morph", "info", "--morphism", "A->B;B->BCB;C->CAC"]));
    assert_eq!(v["det"], "1");
    assert_eq!(v["primitivity"]["primitive"], true);
    let v = json(&tiet(&["preserve", "transport", "--matrix", "0,1,0;0,2,1;1,0,2", "--params", "1,sqrt2,2"]));
    assert_eq!(v["symbolic"], "(γ, α+2β, β+2γ)");
    let v = json(&tiet(&["monoid", "degeneracy", "--matrix", "1,0,1;1,1,2;0,1,1"]));
    assert_eq!((v["K1"].as_str(), v["L1"].as_str()), (Some("2"), Some("0")));
}
