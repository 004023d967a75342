use std::path::Path;
use std::process::Command;

use rho_carroll::dsl::{self, Output};
use rho_carroll::report::Status;

const BIN: &str = env!("CARGO_BIN_EXE_rho-carroll");

fn session(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/sessions").join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(BIN)
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn values(report: &dsl::Report) -> Vec<(&str, &str)> {
    report
        .outputs
        .iter()
        .filter_map(|o| match o {
            Output::Value { source, value, .. } => Some((source.as_str(), value.as_str())),
            _ => None,
        })
        .collect()
}

#[test]
fn quantum_plane_session_passes() {
    let r = dsl::run(&session("quantum_plane.rc"), 0, None).unwrap();
    assert_eq!(r.count(Status::Fail), 0, "{}", r.to_text());
    assert_eq!(r.count(Status::Uncertified), 0);
    assert!(r.checks().any(|c| c.check == "kernel exactness" && c.status == Status::Pass));
    let v = values(&r);
    assert!(v.contains(&("flow dy y order=3", "y*(1 + t + 1/2*t^2 + 1/6*t^3)")), "{v:?}");
    assert!(v.contains(&("eval x*y - q*y*x", "0")));
    assert!(v.contains(&("curvature C dx, dy, dx", "0")));
}

#[test]
fn corrupted_metric_fails_with_witness() {
    let r = dsl::run(&session("corrupted_metric.rc"), 0, None).unwrap();
    assert_eq!(r.exit_code(), 1);
    let c = r.checks().find(|c| c.check == "kernel containment").unwrap();
    assert_eq!(c.status, Status::Fail);
    assert_eq!(c.witness.as_ref().unwrap().expr, "x");
}

#[test]
fn golden_reports_are_byte_identical() {
    let (code, text, _) = cli(&["check", "examples/sessions/quantum_plane.rc", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(text, include_str!("golden/quantum_plane.txt"));
    let (_, records, _) = cli(&["check", "examples/sessions/quantum_plane.rc", "--seed", "7", "--format", "records"]);
    assert_eq!(records, include_str!("golden/quantum_plane.records"));
}

#[test]
fn reports_depend_only_on_session_and_seed() {
    for name in ["torus.rc", "superdomain.rc", "levi_civita.rc"] {
        let src = session(name);
        let a = dsl::run(&src, 99, None).unwrap();
        let b = dsl::run(&src, 99, None).unwrap();
        assert_eq!(a.to_records(), b.to_records(), "{name}");
        assert_eq!(a.exit_code(), 0, "{name}: {}", a.to_text());
    }
}

#[test]
fn records_are_well_formed() {
    let (code, out, _) = cli(&["check", "examples/sessions/corrupted_metric.rc", "--format", "records"]);
    assert_eq!(code, 1);
    let lines: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines[0]["record"], "meta");
    assert_eq!(lines[0]["schema"], "rho-carroll.report.v1");
    assert_eq!(lines.last().unwrap()["record"], "summary");
    for rec in lines.iter().filter(|r| r["record"] == "check") {
        for key in ["line", "check", "target", "status", "witness", "note"] {
            assert!(rec.get(key).is_some(), "{rec}: missing {key}");
        }
        if rec["status"] == "fail" {
            assert!(rec["witness"]["expr"].is_string(), "{rec}");
        }
    }
    let fails = lines.iter().filter(|r| r["status"] == "fail").count() as u64;
    assert_eq!(lines.last().unwrap()["fail"], fails);
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("rho-carroll-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.rc");
    std::fs::write(&bad, "use builtin quantum_plane\neval x*\n").unwrap();
    let (code, _, err) = cli(&["check", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("2:8"), "{err}");
    let unknown = dir.join("unknown.rc");
    std::fs::write(&unknown, "use builtin quantum_plane\neval dz(x)\n").unwrap();
    let (code, _, err) = cli(&["check", unknown.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown name `dz`"), "{err}");
    assert_eq!(cli(&["check", "no/such/file.rc"]).0, 2);
    assert_eq!(cli(&["frobnicate"]).0, 2);
    assert_eq!(cli(&["catalog", "build", "nope"]).0, 2);
}

#[test]
fn eval_and_catalog_commands() {
    let (code, out, _) = cli(&["eval", "-a", "quantum_plane", "y*x"]);
    assert_eq!((code, out.trim()), (0, "q^-1*x*y"));
    let (_, out, _) = cli(&["eval", "-a", "r22_super", "theta2*theta1"]);
    assert_eq!(out.trim(), "-theta1*theta2");
    let (_, out, _) = cli(&["eval", "-a", "nc_torus", "[du, dv]"]);
    assert!(out.contains("u -> 0"), "{out}");
    let (code, out, _) = cli(&["catalog", "list"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), rho_carroll::builtins::CATALOG.len());
    let (code, out, _) = cli(&["catalog", "build", "quantum_plane"]);
    assert_eq!(code, 0);
    assert!(out.contains("carroll QP: sigma = dy"), "{out}");
}

#[test]
fn repl_shares_the_evaluator() {
    let mut child = Command::new(BIN)
        .arg("repl")
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child
        .stdin
        .take()
        .unwrap()
        .write_all(session("quantum_plane.rc").as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("y*(1 + t + 1/2*t^2 + 1/6*t^3)"), "{text}");
    assert!(!text.contains("[fail]"), "{text}");
    assert_eq!(out.status.code(), Some(0));
}
