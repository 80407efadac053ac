use std::process::Command;

fn dsssp() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dsssp"))
}

#[test]
fn generate_then_replay_with_stats() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.trace");
    let out = dsssp()
        .args(["generate", "--kind", "uniform-random", "--n", "30", "--m", "80", "--w", "16", "--seed", "7"])
        .arg("--out")
        .arg(&trace)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(text.starts_with("n 30 w 16"));

    for algo in ["dijkstra-naive", "es-exact", "wses-layered"] {
        let stats = dir.path().join(format!("{algo}.csv"));
        let out = dsssp()
            .args(["replay", "--algo", algo, "--epsilon", "1/5", "--verify", "--trace"])
            .arg(&trace)
            .arg("--stats")
            .arg(&stats)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let stdout = String::from_utf8(out.stdout).unwrap();
        assert!(stdout.contains("violations 0"));
        let queries = std::fs::read_to_string(&stats).unwrap();
        assert!(queries.starts_with("op_index,vertex,reported,oracle,ratio\n"));
        assert!(queries.lines().count() > 1);
        let counters = std::fs::read_to_string(dir.path().join(format!("{algo}.counters.csv"))).unwrap();
        assert!(counters.starts_with("counter,value\n"));
    }
}

#[test]
fn replay_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.trace");
    std::fs::write(&trace, "n 4 w 5\n# square\ne 0 1 1\ne 1 2 2\ne 2 3 5\ne 0 3 4\nq 2\nd 0 1\nq 2\ni 0 3 5\nq 3\n").unwrap();
    let run = || {
        dsssp()
            .args(["replay", "--algo", "wses-layered", "--verify", "--trace"])
            .arg(&trace)
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("bad.trace");
    std::fs::write(&trace, "n 3 w 4\ne 0 1 2\nd 1 2\n").unwrap();
    let out = dsssp().args(["replay", "--trace"]).arg(&trace).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = dsssp().args(["generate", "--kind", "heavy-dense", "--n", "50", "--m", "10"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
