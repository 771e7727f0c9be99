use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_algossip"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn data_rows(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
}

#[test]
fn gossip_happy_path_writes_ten_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = run(&[
        "gossip", "--topology", "ring", "--n", "32", "--q", "2", "--algo", "exchange", "--time", "async",
        "--trials", "10", "--seed", "1", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&out).unwrap();
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(
        header,
        "trial,n,q,topology,algo,time_model,T,R,messages_sent,helpful_received,helpful_node_transmissions,capped"
    );
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 10);
    for (k, row) in rows.iter().enumerate() {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f.len(), 12);
        assert_eq!(f[0], k.to_string());
        let t: f64 = f[6].parse().unwrap();
        let r: f64 = f[7].parse().unwrap();
        assert_eq!(r, t / 32.0);
        assert_eq!(f[9], (32 * 31).to_string());
        assert_eq!(f[11], "false");
    }
    assert!(!csv.contains('\r'));
}

#[test]
fn usage_errors_exit_one_with_one_line() {
    let cases: [(&[&str], &str); 4] = [
        (&["gossip", "--topology", "barbell", "--n", "9"], "barbell requires even n"),
        (&["gossip", "--topology", "ring", "--n", "8", "--q", "4"], "q must be prime"),
        (&["gossip", "--topology", "ring", "--n", "8", "--graph", "g.txt"], "cannot be used with"),
        (&["gossip", "--topology", "ring", "--n", "8", "--frobnicate"], "--frobnicate"),
    ];
    for (args, msg) in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let e = stderr(&o);
        assert!(e.contains(msg), "{args:?}: {e}");
        assert_eq!(e.trim_end().lines().count(), 1, "{e}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn invalid_domains_are_usage_errors() {
    for args in [
        &["gossip", "--topology", "ring", "--n", "8", "--time", "async", "--drop-duplicate-round-msgs"][..],
        &["gossip", "--topology", "ring", "--n", "8", "--trials", "0"],
        &["queue", "--system", "tree", "--topology", "star", "--n", "8", "--service", "geom", "--p", "1.5"],
        &["queue", "--system", "line", "--topology", "star", "--n", "8", "--service", "exp", "--p", "1", "--arrivals", "poisson:2"],
        &["queue", "--system", "tree", "--topology", "star", "--n", "8", "--service", "exp", "--p", "1", "--root", "8"],
        &["bounds", "--check", "nonsense"],
    ] {
        assert_eq!(run(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn cap_hit_is_runtime_error_but_csv_is_complete() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("capped.csv");
    let o = run(&[
        "gossip", "--topology", "star", "--n", "16", "--algo", "push", "--time", "sync", "--trials", "3",
        "--max-timeslots", "50", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cap"));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(data_rows(&csv).len(), 3);
    assert!(data_rows(&csv).iter().all(|r| r.ends_with(",true")));
}

#[test]
fn unwritable_output_is_io_error_and_leaves_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing/sub/x.csv");
    let o = run(&["gossip", "--topology", "ring", "--n", "8", "--trials", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!out.exists());
}

#[test]
fn graph_file_input_and_missing_file() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("tri angle.txt");
    std::fs::write(&g, "# a triangle with a tail\nn 4\n0 1\n1 2\n2 0\n2 3\n").unwrap();
    let out = dir.path().join("g.csv");
    let o = run(&["gossip", "--graph", g.to_str().unwrap(), "--trials", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.contains("graph: n=4 edges=4"));
    assert!(data_rows(&csv).iter().all(|r| r.split(',').nth(3) == Some("file")));
    let replay = run(&["replay", out.to_str().unwrap()]);
    assert_eq!(replay.status.code(), Some(0), "{}", stderr(&replay));

    let o = run(&["gossip", "--graph", dir.path().join("nope.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    std::fs::write(&g, "n 3\n0 0\n").unwrap();
    let o = run(&["gossip", "--graph", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("self-loop"));
}

#[test]
fn fixtures_replay_identically_across_worker_counts() {
    let mut seen = 0;
    for entry in std::fs::read_dir(fixtures()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("csv") {
            continue;
        }
        seen += 1;
        for workers in ["1", "3"] {
            let dir = tempfile::tempdir().unwrap();
            let regen = dir.path().join("regen.csv");
            let o = run(&["replay", path.to_str().unwrap(), "--workers", workers, "--out", regen.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0), "{}: {}", path.display(), stderr(&o));
            assert_eq!(std::fs::read(&regen).unwrap(), std::fs::read(&path).unwrap());
        }
    }
    assert!(seen >= 6);
}

#[test]
fn tampered_seed_is_detected() {
    let original = std::fs::read_to_string(fixtures().join("gossip_ring.csv")).unwrap();
    let tampered = original.replacen("--seed 7", "--seed 8", 1);
    assert_ne!(tampered, original);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.csv");
    std::fs::write(&p, tampered).unwrap();
    let o = run(&["replay", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("differs"));
}

#[test]
fn version_mismatch_is_reported() {
    let original = std::fs::read_to_string(fixtures().join("queue_tree.csv")).unwrap();
    let first = original.lines().next().unwrap();
    let old = original.replacen(first, "# algossip 0.0.1", 1);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("old.csv");
    std::fs::write(&p, old).unwrap();
    let o = run(&["replay", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("version mismatch"));
}

#[test]
fn output_is_independent_of_workers() {
    let a = run(&["gossip", "--topology", "barbell", "--n", "12", "--trials", "9", "--workers", "1"]);
    let b = run(&["gossip", "--topology", "barbell", "--n", "12", "--trials", "9", "--workers", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sweep_writes_csv_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let rep = dir.path().join("r.txt");
    let o = run(&[
        "sweep", "--topology", "ring", "--n", "16,8,12", "--trials", "6", "--out", out.to_str().unwrap(),
        "--report", rep.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.contains("--n 8,12,16"));
    let ns: Vec<&str> = data_rows(&csv).iter().map(|r| r.split(',').next().unwrap()).collect();
    assert_eq!(ns, ["8", "12", "16"]);
    let report = std::fs::read_to_string(&rep).unwrap();
    assert!(report.contains("slope=") && report.contains("ci95="));
}

#[test]
fn queue_systems_run() {
    for system in ["tree", "tree-level", "line", "line-all-back"] {
        let o = run(&[
            "queue", "--system", system, "--topology", "barbell", "--n", "8", "--service", "geom", "--p", "0.5",
            "--trials", "5",
        ]);
        assert_eq!(o.status.code(), Some(0), "{system}: {}", stderr(&o));
        let csv = String::from_utf8(o.stdout).unwrap();
        assert_eq!(data_rows(&csv).len(), 5);
        assert!(data_rows(&csv).iter().all(|r| r.split(',').nth(1) == Some(system)));
    }
}

#[test]
fn bounds_rows_hold() {
    let o = run(&["bounds", "--check", "geomexp", "--samples", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = String::from_utf8(o.stdout).unwrap();
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 100);
    assert!(rows.iter().all(|r| r.ends_with(",lower,true")));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let v = run(&["--version"]);
    assert_eq!(v.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&v.stdout).contains(env!("CARGO_PKG_VERSION")));
}
