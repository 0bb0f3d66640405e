use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn strel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strel"))
        .args(args)
        .env("STREL_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write_fixture(name: &str, dir: &Path) {
    let out = strel(&[
        "--fixture",
        name,
        "--out",
        p(dir),
        "--nodes",
        "8",
        "--samples",
        "30",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn vars(dir: &Path) -> String {
    dir.join("vars.txt").display().to_string()
}

fn run_mode(dir: &Path, out: &Path, formula: &str, mode: &str, extra: &[&str]) -> Output {
    let vars = vars(dir);
    let formula = dir.join(formula);
    let graph = dir.join("graph.csv");
    let locations = dir.join("locations.csv");
    let signal = dir.join("signal.csv");
    let mut args = vec![
        "--mode",
        mode,
        "--formula-file",
        p(&formula),
        "--graph",
        p(&graph),
        "--locations",
        p(&locations),
        "--undirected",
        "--signal",
        p(&signal),
        "--vars",
        &vars,
        "--out",
        p(out),
    ];
    args.extend_from_slice(extra);
    strel(&args)
}

#[test]
fn fixture_files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture("rezzato", dir.path());
    for f in [
        "graph.csv",
        "locations.csv",
        "signal.csv",
        "vars.txt",
        "p1.strel",
        "p2.strel",
        "README.md",
    ] {
        assert!(dir.path().join(f).is_file(), "missing {f}");
    }
}

#[test]
fn online_and_offline_outputs_match() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture("zigbee", dir.path());
    for semantics in ["robust", "boolean"] {
        let mut outputs = Vec::new();
        for mode in ["offline", "online"] {
            let out = dir.path().join(format!("{mode}-{semantics}"));
            let r = run_mode(
                dir.path(),
                &out,
                "phi1.strel",
                mode,
                &["--semantics", semantics],
            );
            assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
            outputs.push(fs::read_to_string(out.join("output.csv")).unwrap());
        }
        assert_eq!(outputs[0], outputs[1], "{semantics}");
    }
    assert!(dir.path().join("online-robust/trace.csv").is_file());
    assert!(dir.path().join("online-robust/summary.json").is_file());
}

#[test]
fn shuffled_runs_converge_with_different_traces() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture("afc-like", dir.path());
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for (out, seed) in [(&a, "1"), (&b, "2")] {
        let r = run_mode(
            dir.path(),
            out,
            "afc.strel",
            "online-shuffled",
            &["--seed", seed],
        );
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    }
    let read = |d: &Path, f: &str| fs::read_to_string(d.join(f)).unwrap();
    assert_eq!(read(&a, "output.csv"), read(&b, "output.csv"));
    let order = |d: &Path| -> Vec<String> {
        read(d, "trace.csv")
            .lines()
            .skip(1)
            .map(|l| l.split(',').next().unwrap().to_string())
            .collect()
    };
    assert_ne!(order(&a), order(&b));

    let json = dir.path().join("json");
    let r = run_mode(
        dir.path(),
        &json,
        "afc.strel",
        "online",
        &["--format", "json"],
    );
    assert!(r.status.success());
    let summary: serde_json::Value = serde_json::from_str(&read(&json, "summary.json")).unwrap();
    assert_eq!(summary["mode"], "online");
    assert!(json.join("output.json").is_file());
}

#[test]
fn syntax_error_exits_with_1() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture("rezzato", dir.path());
    fs::write(dir.path().join("bad.strel"), "F[0,3] (NO2 < ").unwrap();
    let r = run_mode(
        dir.path(),
        &dir.path().join("o"),
        "bad.strel",
        "offline",
        &[],
    );
    assert_eq!(r.status.code(), Some(1));
    let err = String::from_utf8_lossy(&r.stderr);
    assert!(err.contains("bad.strel:1:"), "{err}");
}

#[test]
fn refinement_violation_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture("rezzato", dir.path());
    let mut signal = fs::read_to_string(dir.path().join("signal.csv")).unwrap();
    signal.push_str("0.25,0.5,0,0,1000,1001\n");
    fs::write(dir.path().join("signal.csv"), signal).unwrap();
    let r = run_mode(dir.path(), &dir.path().join("o"), "p1.strel", "online", &[]);
    assert_eq!(
        r.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&r.stderr)
    );
}

#[test]
fn configuration_errors_exit_with_3() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture("rezzato", dir.path());
    let r = run_mode(
        dir.path(),
        &dir.path().join("o"),
        "p1.strel",
        "online-shuffled",
        &[],
    );
    assert_eq!(r.status.code(), Some(3));
    assert_eq!(strel(&["--mode", "sideways"]).status.code(), Some(3));
    assert_eq!(
        strel(&["--signal", "/nonexistent.csv"]).status.code(),
        Some(3)
    );
}
