use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn schnyder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schnyder")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_fixtures() {
    for f in ["k4.tri", "f5.tri", "k4.real", "f5.real"] {
        let o = schnyder(&["validate", path(&data(f))]);
        assert_eq!(o.status.code(), Some(0), "{f}");
        assert!(stdout(&o).starts_with("OK"));
    }
}

#[test]
fn exit_codes_separate_invalid_from_malformed() {
    let dir = tempfile::tempdir().unwrap();
    let bad_tri = dir.path().join("bad.tri");
    std::fs::write(&bad_tri, "n 4\nouter 0 1 2\nrot 0: 1 3 2\nrot 1: 2 3 0\nrot 2: 0 3 1\nrot 3: 2 1 0\n").unwrap();
    assert_eq!(schnyder(&["validate", path(&bad_tri)]).status.code(), Some(1));

    let garbage = dir.path().join("garbage.tri");
    std::fs::write(&garbage, "n four\n").unwrap();
    assert_eq!(schnyder(&["validate", path(&garbage)]).status.code(), Some(2));

    let wrong_colors = dir.path().join("wrong.real");
    let k4 = std::fs::read_to_string(data("k4.real")).unwrap();
    std::fs::write(&wrong_colors, k4.replace("edge 3 1 1", "edge 3 1 2").replace("edge 3 2 2", "edge 3 2 1")).unwrap();
    assert_eq!(schnyder(&["validate", path(&wrong_colors)]).status.code(), Some(1));

    assert_eq!(schnyder(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(schnyder(&["validate", "/definitely/missing.tri"]).status.code(), Some(2));
}

#[test]
fn realize_round_trips_through_validate() {
    let dir = tempfile::tempdir().unwrap();
    let o = schnyder(&["realize", path(&data("f5.tri"))]);
    assert_eq!(o.status.code(), Some(0));
    let out = dir.path().join("f5.real");
    std::fs::write(&out, o.stdout).unwrap();
    assert_eq!(schnyder(&["validate", path(&out)]).status.code(), Some(0));
}

#[test]
fn static_and_dynamic_replay_agree() {
    let dir = tempfile::tempdir().unwrap();
    let fin = dir.path().join("dyn.real");
    let a = schnyder(&["apply", path(&data("f5.real")), path(&data("flip1.script"))]);
    let d = schnyder(&["dyn", path(&data("f5.real")), path(&data("flip1.script")), "--final", path(&fin)]);
    assert_eq!((a.status.code(), d.status.code()), (Some(0), Some(0)));
    assert_eq!(stdout(&a), std::fs::read_to_string(&fin).unwrap());
    assert_eq!(String::from_utf8(a.stderr).unwrap(), stdout(&d));

    let queries = stdout(&d);
    assert!(queries.contains("coords 3 = 1 1 2\n"));
    assert!(queries.contains("coords 4 = 2 1 1\n"));
    assert!(queries.contains("depth 2 4 = 1\n"));

    let applied = dir.path().join("applied.real");
    std::fs::write(&applied, a.stdout).unwrap();
    assert_eq!(schnyder(&["validate", path(&applied)]).status.code(), Some(0));
}

#[test]
fn failing_step_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("bad.script");
    std::fs::write(&script, "cflip 3 0 4 1\n").unwrap();
    for cmd in ["apply", "dyn"] {
        let o = schnyder(&[cmd, path(&data("f5.real")), path(&script)]);
        assert_eq!(o.status.code(), Some(1), "{cmd}");
    }
    std::fs::write(&script, "cflip 3 0\n").unwrap();
    assert_eq!(schnyder(&["apply", path(&data("f5.real")), path(&script)]).status.code(), Some(2));
}

#[test]
fn flipgraph_reports_connected() {
    let o = schnyder(&["flipgraph", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|&h| h == "connected").unwrap();
    assert_eq!(row[col], "true");
    assert_eq!(schnyder(&["flipgraph", "--n", "5", "--sequential"]).stdout, o.stdout);
}

#[test]
fn distance_script_replays_to_target() {
    let dir = tempfile::tempdir().unwrap();
    let a = schnyder(&["apply", path(&data("f5.real")), path(&data("flip1.script"))]);
    let target = dir.path().join("target.real");
    std::fs::write(&target, &a.stdout).unwrap();
    let d = schnyder(&["distance", path(&data("f5.real")), path(&target)]);
    assert_eq!(d.status.code(), Some(0));
    let text = stdout(&d);
    assert!(text.ends_with("# length 1\n"));
    let script = dir.path().join("path.script");
    std::fs::write(&script, &text).unwrap();
    let replay = schnyder(&["apply", path(&data("f5.real")), path(&script)]);
    assert_eq!(replay.stdout, a.stdout);
}

#[test]
fn svg_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (x, y) = (dir.path().join("x.svg"), dir.path().join("y.svg"));
    for out in [&x, &y] {
        assert_eq!(schnyder(&["svg", path(&data("f5.real")), path(out), "--scale", "10"]).status.code(), Some(0));
    }
    let svg = std::fs::read_to_string(&x).unwrap();
    assert_eq!(svg, std::fs::read_to_string(&y).unwrap());
    assert_eq!(svg.matches("<line").count(), 9);
}

#[test]
fn bench_prints_csv() {
    let o = schnyder(&["bench", "--n", "16,32", "--ops", "50", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,ops,total_ms,ns_per_op");
    assert!(lines[1].starts_with("16,50,") && lines[2].starts_with("32,50,"));
    assert_eq!(schnyder(&["bench", "--n", "3"]).status.code(), Some(2));
}
