use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use l6n1_core::format::split_records;
use l6n1_core::{parse_diagram, parse_projection};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn l6n1(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_l6n1"))
        .args(args)
        .env_remove("L6N1_MAX_CROSSINGS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_reports_pairwise_crossing() {
    let o = l6n1(&["check", path(&fixture("p1_krupp.proj"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pairwise crossing"));

    let o = l6n1(&["check", path(&fixture("red_green_apart.proj"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not pairwise crossing"));
}

#[test]
fn parse_errors_exit_two_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.proj");
    let mut text = std::fs::read_to_string(fixture("p1_krupp.proj")).unwrap();
    text.push_str("edge 12 0 1 B\n");
    std::fs::write(&bad, text).unwrap();
    let o = l6n1(&["check", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));

    assert_eq!(l6n1(&["check", path(&dir.path().join("missing"))]).status.code(), Some(2));
    assert_eq!(l6n1(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn resolve_fixture_gives_verified_six_crossing_diagram() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p2.dia");
    let o = l6n1(&["resolve", path(&fixture("p2_nonkrupp.proj")), "-o", path(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("over ")).count(), 6);
    parse_diagram(&text).unwrap();

    let o = l6n1(&["verify", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("l6n1 yes"));
    assert!(stdout(&o).contains("linking"));
}

#[test]
fn verify_rejects_other_links() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p1.dia");
    let o = l6n1(&["resolve", path(&fixture("p1_krupp.proj")), "-o", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    // Flipping a single crossing changes the link.
    let text = std::fs::read_to_string(&out).unwrap();
    let flipped: String = text
        .lines()
        .map(|l| match l {
            "over 0 0" => "over 0 1".to_string(),
            "over 0 1" => "over 0 0".to_string(),
            l => l.to_string(),
        })
        .map(|l| l + "\n")
        .collect();
    std::fs::write(&out, flipped).unwrap();
    let o = l6n1(&["verify", path(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("l6n1 no"));
}

#[test]
fn enumerate_counts_and_streams() {
    let o = l6n1(&["enumerate", "--vertices", "6", "--pairwise-crossing", "--count-only"]);
    assert_eq!(stdout(&o), "2\n");

    let o = l6n1(&["enumerate", "--vertices", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let records = split_records(&stdout(&o));
    let count = l6n1(&["enumerate", "--vertices", "5", "--count-only"]);
    assert_eq!(records.len().to_string() + "\n", stdout(&count));
    for r in &records {
        assert_eq!(parse_projection(r).unwrap().vertex_count(), 5);
    }

    assert_eq!(l6n1(&["enumerate", "--vertices", "9"]).status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic_and_reparse() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("r.proj");
    let a = l6n1(&["random", "--vertices", "12", "--seed", "7"]);
    let b = l6n1(&["random", "--vertices", "12", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    std::fs::write(&input, &a.stdout).unwrap();
    assert_eq!(parse_projection(&stdout(&a)).unwrap().vertex_count(), 12);

    let (t1, t2) = (dir.path().join("t1"), dir.path().join("t2"));
    let r1 = l6n1(&["reduce", path(&input), "--trace", path(&t1)]);
    let r2 = l6n1(&["reduce", path(&input), "--trace", path(&t2)]);
    assert_eq!(r1.status.code(), Some(0));
    assert_eq!(r1.stdout, r2.stdout);
    assert_eq!(std::fs::read(&t1).unwrap(), std::fs::read(&t2).unwrap());
    let reduced = parse_projection(&stdout(&r1)).unwrap();
    assert_eq!(reduced.vertex_count(), 6);

    let s1 = l6n1(&["resolve", path(&input)]);
    let s2 = l6n1(&["resolve", path(&input)]);
    assert_eq!(s1.status.code(), Some(0));
    assert_eq!(s1.stdout, s2.stdout);
    assert_eq!(parse_diagram(&stdout(&s1)).unwrap().projection().vertex_count(), 12);
}

#[test]
fn crossing_cap_comes_from_flag_or_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.dia");
    let o = l6n1(&["resolve", path(&fixture("p1_krupp.proj")), "-o", path(&out)]);
    assert_eq!(o.status.code(), Some(0));

    let o = Command::new(env!("CARGO_BIN_EXE_l6n1"))
        .args(["verify", path(&out)])
        .env("L6N1_MAX_CROSSINGS", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cap"));

    let o = Command::new(env!("CARGO_BIN_EXE_l6n1"))
        .args(["verify", path(&out), "--max-crossings", "6"])
        .env("L6N1_MAX_CROSSINGS", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn invariants_dump() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.dia");
    l6n1(&["resolve", path(&fixture("p2_nonkrupp.proj")), "-o", path(&out)]);
    let o = l6n1(&["invariants", path(&out), "--linking"]);
    let text = stdout(&o);
    let lk: Vec<i64> = text
        .lines()
        .find_map(|l| l.strip_prefix("linking "))
        .unwrap()
        .split(' ')
        .map(|x| x.parse::<i64>().unwrap().abs())
        .collect();
    assert_eq!(lk, [1, 1, 1]);
    assert!(!text.contains("jones"));

    let o = l6n1(&["invariants", path(&out), "--jones", "--t"]);
    let jones = stdout(&o);
    let reference = [
        "jones 1*t^2 + 1*t^4 + 2*t^6\n",
        "jones 2*t^0 + 1*t^2 + 1*t^4\n",
        "jones 1*t^-4 + 1*t^-2 + 2*t^0\n",
        "jones 2*t^-6 + 1*t^-4 + 1*t^-2\n",
    ];
    assert!(reference.contains(&jones.as_str()), "{jones}");
}

#[test]
fn reads_standard_input() {
    let text = std::fs::read(fixture("p2_nonkrupp.proj")).unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_l6n1"))
        .args(["check", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&text).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
}
