use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cantor_forge::geometry::PointSet;
use cantor_forge::spanner::SpannerGraph;
use cantor_forge::tsp::TspReductionOutput;

fn forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cantor-forge"))
        .args(args)
        .env("CANTOR_FORGE_LOG", "off")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_points(p: &Path) -> PointSet {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn generator_counts() {
    let dir = tempfile::tempdir().unwrap();
    for (args, want) in [
        (vec!["gen", "crossbar", "--k", "2"], 56),
        (vec!["gen", "carpet", "--k", "2"], 64),
        (vec!["gen", "grid", "--n", "4"], 16),
    ] {
        let out = path(dir.path(), "p.json");
        let mut a = args.clone();
        a.extend(["--out", s(&out)]);
        let o = forge(&a);
        assert_eq!(code(&o), 0, "{args:?}: {}", stderr(&o));
        assert_eq!(read_points(&out).len(), want, "{args:?}");
    }
}

#[test]
fn stdout_output_and_formats() {
    let o = forge(&["gen", "grid", "--n", "3", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let body = String::from_utf8(o.stdout).unwrap();
    assert_eq!(body.lines().filter(|l| !l.is_empty()).count(), 9, "{body}");
    let o = forge(&["gen", "carpet", "--k", "1", "--format", "svg"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("<svg"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&forge(&["frobnicate"])), 2);
    assert_eq!(code(&forge(&["gen", "crossbar"])), 2);
    assert_eq!(code(&forge(&["gen", "crossbar", "--k", "2", "--l", "4"])), 2);
    let missing = path(dir.path(), "missing.json");
    assert_eq!(code(&forge(&["spanner", "greedy", "--in", s(&missing)])), 2);
    assert_eq!(code(&forge(&["--help"])), 0);
}

#[test]
fn verification_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let pts = path(dir.path(), "grid.json");
    let g = path(dir.path(), "g.json");
    assert_eq!(code(&forge(&["gen", "grid", "--n", "5", "--out", s(&pts)])), 0);
    assert_eq!(
        code(&forge(&[
            "spanner",
            "greedy",
            "--in",
            s(&pts),
            "--c",
            "2",
            "--out",
            s(&g)
        ])),
        0
    );
    let rep = path(dir.path(), "r.json");
    let ok = forge(&["verify", "spanner", "--graph", s(&g), "--c", "2", "--out", s(&rep)]);
    assert_eq!(code(&ok), 0, "{}", stderr(&ok));
    let bad = forge(&["verify", "spanner", "--graph", s(&g), "--c", "1", "--out", s(&rep)]);
    assert_eq!(code(&bad), 1);
    assert!(stderr(&bad).contains("FAIL"));
}

#[test]
fn budget_exhaustion_exits_3() {
    let o = forge(&["verify", "csp-equiv", "--count", "4", "--budget", "1"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
}

#[test]
fn csp_equivalence_suite() {
    let o = forge(&[
        "verify",
        "csp-equiv",
        "--seed",
        "7",
        "--count",
        "100",
        "--n",
        "2",
        "--delta-max",
        "3",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stderr(&o).contains("100/100 equivalent"), "{}", stderr(&o));
}

#[test]
fn spanner_minor_treedec_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let (pts, g, cert, td, chk) = (
        path(dir.path(), "f.json"),
        path(dir.path(), "g.json"),
        path(dir.path(), "cert.json"),
        path(dir.path(), "td.json"),
        path(dir.path(), "chk.json"),
    );
    assert_eq!(code(&forge(&["gen", "crossbar", "--k", "3", "--out", s(&pts)])), 0);
    assert_eq!(code(&forge(&["spanner", "greedy", "--in", s(&pts), "--out", s(&g)])), 0);
    let o = forge(&["minor", "--graph", s(&g), "--out", s(&cert)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = forge(&[
        "verify",
        "minor",
        "--graph",
        s(&g),
        "--cert",
        s(&cert),
        "--out",
        s(&chk),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = forge(&["treedec", "--graph", s(&g), "--out", s(&td)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = forge(&["verify", "treedec", "--graph", s(&g), "--td", s(&td), "--out", s(&chk)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));

    let carpet = path(dir.path(), "carpet.json");
    assert_eq!(code(&forge(&["spanner", "carpet", "--k", "2", "--out", s(&carpet)])), 0);
    let o = forge(&["treedec", "--graph", s(&carpet), "--carpet", "--out", s(&td)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let graph: SpannerGraph = serde_json::from_str(&std::fs::read_to_string(&carpet).unwrap()).unwrap();
    assert!(graph.is_connected());
}

#[test]
fn tsp_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let xc = path(dir.path(), "xc.json");
    std::fs::write(&xc, r#"{"m": 3, "sets": [[0, 1], [2], [1, 2]]}"#).unwrap();
    let out = path(dir.path(), "tsp.json");
    let o = forge(&["reduce", "xc-to-tsp", "--in", s(&xc), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(path(dir.path(), "tsp.json.report.json").exists());
    let inst: TspReductionOutput = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(inst.xc.m, 3);
    let rep = path(dir.path(), "rep.json");
    let o = forge(&["verify", "tsp-structure", "--in", s(&out), "--out", s(&rep)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let tsp = path(dir.path(), "x.tsp");
    let o = forge(&["export", "tsplib", "--in", s(&out), "--out", s(&tsp)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let body = std::fs::read_to_string(&tsp).unwrap();
    assert!(body.contains(&format!("DIMENSION : {}", inst.points.len())));
    assert!(path(dir.path(), "x.tsp.sidecar.json").exists());
}

#[test]
fn csp_to_balls_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let csp = path(dir.path(), "csp.json");
    let balls = path(dir.path(), "balls.json");
    let sol = path(dir.path(), "sol.json");
    assert_eq!(
        code(&forge(&[
            "gen",
            "csp",
            "--n",
            "2",
            "--delta",
            "2",
            "--seed",
            "3",
            "--out",
            s(&csp)
        ])),
        0
    );
    let o = forge(&["reduce", "csp-to-balls", "--in", s(&csp), "--out", s(&balls)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = forge(&["solve", "balls", "--in", s(&balls), "--out", s(&sol)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = forge(&["solve", "csp", "--in", s(&csp), "--out", s(&sol)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, args: &[&str]| -> Vec<u8> {
        let out = path(dir.path(), name);
        let mut a = args.to_vec();
        a.extend(["--out", s(&out)]);
        assert_eq!(code(&forge(&a)), 0, "{args:?}");
        std::fs::read(&out).unwrap()
    };
    for args in [
        vec!["gen", "csp", "--n", "3", "--delta", "3", "--seed", "11"],
        vec!["gen", "crossbar", "--l", "5", "--v", "3", "--k", "2"],
        vec!["spanner", "carpet", "--k", "2"],
    ] {
        assert_eq!(run("a", &args), run("b", &args), "{args:?}");
    }
    let pts = path(dir.path(), "f.json");
    assert_eq!(code(&forge(&["gen", "crossbar", "--k", "3", "--out", s(&pts)])), 0);
    let dim = [
        "dim",
        "estimate",
        "--in",
        s(&pts),
        "--ladder",
        "geometric",
        "--seed",
        "5",
    ];
    assert_eq!(run("d1", &dim), run("d2", &dim));
}

#[test]
fn json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let pts = path(dir.path(), "p.json");
    assert_eq!(
        code(&forge(&["gen", "carpet", "--k", "2", "--box-points", "--out", s(&pts)])),
        0
    );
    let text = std::fs::read_to_string(&pts).unwrap();
    let p: PointSet = serde_json::from_str(&text).unwrap();
    assert_eq!(p.to_json(), text.trim_end());
    let g = path(dir.path(), "g.json");
    assert_eq!(code(&forge(&["spanner", "greedy", "--in", s(&pts), "--out", s(&g)])), 0);
    let text = std::fs::read_to_string(&g).unwrap();
    let graph: SpannerGraph = serde_json::from_str(&text).unwrap();
    assert_eq!(graph.to_json(), text.trim_end());
    assert_eq!(graph.points(), &p);
}
