use std::path::Path;
use std::process::{Command, Output};

use fjsched::io::{parse_instance, parse_rational, ReportDoc};
use fjsched::{canonicalize, makespan, validate};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fjsched"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn generate(dir: &Path, name: &str, extra: &[&str]) {
    let mut args = vec!["generate", "-o", name];
    args.extend_from_slice(extra);
    ok(dir, &args);
}

#[test]
fn exit_codes_follow_the_error_kind() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    generate(d, "three.json", &["--procs", "3", "--tasks", "4"]);
    assert_eq!(
        run(d, &["solve", "three.json", "--algorithm", "q2"])
            .status
            .code(),
        Some(2)
    );
    let limited = run(
        d,
        &[
            "solve",
            "three.json",
            "--algorithm",
            "oracle",
            "--limits",
            "max_tasks=2",
        ],
    );
    assert_eq!(limited.status.code(), Some(3));
    assert_eq!(
        run(d, &["solve", "missing.json", "--algorithm", "q2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(d, &["solve", "three.json", "--algorithm", "nope"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn reports_validate_after_a_round_trip_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    generate(
        d,
        "inst.json",
        &["--procs", "2", "--tasks", "5", "--seed", "4"],
    );
    let inst = parse_instance(&std::fs::read_to_string(d.join("inst.json")).unwrap()).unwrap();
    for alg in ["oracle", "bipartite", "q2", "epas"] {
        let file = format!("{alg}.json");
        ok(d, &["solve", "inst.json", "--algorithm", alg, "-o", &file]);
        let doc = ReportDoc::parse(&std::fs::read_to_string(d.join(&file)).unwrap()).unwrap();
        let schedule = canonicalize(&inst, &doc.schedule.to_placement(&inst).unwrap()).unwrap();
        assert!(validate(&inst, &schedule).is_empty());
        assert_eq!(makespan(&inst, &schedule), doc.makespan.0);
        assert!(ok(d, &["validate", "inst.json", &file]).starts_with("valid: makespan"));
    }
}

#[test]
fn tampered_reports_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    generate(
        d,
        "inst.json",
        &["--procs", "2", "--tasks", "3", "--seed", "8"],
    );
    ok(
        d,
        &["solve", "inst.json", "--algorithm", "q2", "-o", "r.json"],
    );
    let text = std::fs::read_to_string(d.join("r.json")).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["makespan"] = serde_json::Value::from("1/1000");
    std::fs::write(d.join("bad.json"), doc.to_string()).unwrap();
    let out = run(d, &["validate", "inst.json", "bad.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("violation"));
}

#[test]
fn epas_report_carries_its_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    generate(
        d,
        "inst.json",
        &[
            "--procs",
            "2",
            "--tasks",
            "4",
            "--cost-mode",
            "random",
            "--speeds",
            "1,2",
        ],
    );
    let text = ok(
        d,
        &[
            "solve",
            "inst.json",
            "--algorithm",
            "epas",
            "--epsilon",
            "1/3",
        ],
    );
    let doc = ReportDoc::parse(&text).unwrap();
    assert_eq!(doc.guarantee.kind, "ratio");
    assert_eq!(
        doc.guarantee.bound.map(|b| b.0),
        Some(parse_rational("27/2").unwrap())
    );
    assert!(doc.notes.contains_key("gamma"));
}

#[test]
fn compare_writes_seven_columns_and_honours_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let mut names = Vec::new();
    for seed in 0..6 {
        let name = format!("i{seed}.json");
        let procs = (2 + seed % 3).to_string();
        let seed = seed.to_string();
        generate(
            d,
            &name,
            &["--procs", &procs, "--tasks", "4", "--seed", &seed],
        );
        names.push(name);
    }
    let mut args = vec!["compare"];
    args.extend(names.iter().map(String::as_str));
    args.push("--no-timing");
    let csv = ok(d, &args);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("instance,algorithm,makespan,oracle,gap,certificate_honored,ms")
    );
    let mut honored = 0;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 7, "{line}");
        assert_eq!(cells[6], "0.000");
        if !cells[2].is_empty() {
            assert_eq!(cells[5], "true", "{line}");
            honored += 1;
        }
    }
    assert!(honored >= 6);
}

#[test]
fn convert_shifts_deadlines_with_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    generate(d, "inst.json", &["--procs", "3", "--tasks", "3"]);
    let a = ok(
        d,
        &[
            "convert",
            "inst.json",
            "--t-max",
            "20",
            "--src",
            "0",
            "--sink",
            "1",
        ],
    );
    let b = ok(
        d,
        &[
            "convert",
            "inst.json",
            "--t-max",
            "25",
            "--src",
            "0",
            "--sink",
            "1",
        ],
    );
    let da = fjsched::io::parse_rtd(&a).unwrap();
    let db = fjsched::io::parse_rtd(&b).unwrap();
    for (x, y) in da.tasks.iter().zip(&db.tasks) {
        assert_eq!(x.r, y.r);
        assert_eq!(y.d.clone() - x.d.clone(), parse_rational("5").unwrap());
    }
}
