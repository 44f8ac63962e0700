use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SQUARE: &str = "agp-polygon 1\nouter 4\n0 0\n1 0\n1 1\n0 1\n";
const ELL: &str = "agp-polygon 1\nouter 6\n0 0\n2 0\n2 1\n1 1\n1 2\n0 2\n";

fn agp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_agp"))
        .args(args)
        .env_remove("AGP_TIME_LIMIT")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn put(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn solve_square() {
    let d = tempfile::tempdir().unwrap();
    let f = put(d.path(), "square.poly", SQUARE);
    let o = agp(&["solve", &f]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("status ProvenOptimal"));
    assert!(s.contains("lower_bound 1\nupper_bound 1\n"));
}

#[test]
fn solve_comb_with_vertex_guards() {
    let d = tempfile::tempdir().unwrap();
    let f = d.path().join("comb.poly").to_string_lossy().into_owned();
    assert_eq!(code(&agp(&["gen", "comb", "-n", "4", "-o", &f])), 0);
    let stats = d.path().join("stats.csv").to_string_lossy().into_owned();
    let o = agp(&["solve", &f, "--guards", "vertex", "--stats", &stats]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("upper_bound 4\n"));
    let csv = fs::read_to_string(&stats).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().contains(",ProvenOptimal,4,4,"));
}

#[test]
fn tiny_time_limit() {
    let d = tempfile::tempdir().unwrap();
    let f = d.path().join("big.poly").to_string_lossy().into_owned();
    assert_eq!(code(&agp(&["gen", "simple", "-n", "200", "--seed", "1", "-o", &f])), 0);
    let o = agp(&["solve", &f, "--time-limit", "0.001"]);
    assert_eq!(code(&o), 2);
    let s = stdout(&o);
    assert!(s.contains("status TimeLimit"));
    let get = |k: &str| -> i64 {
        s.lines().find_map(|l| l.strip_prefix(k)).unwrap().trim().parse().unwrap()
    };
    assert!(get("lower_bound") <= get("upper_bound"));
    assert!(get("upper_bound") <= 200 / 3);
}

#[test]
fn exit_codes() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&agp(&["solve"])), 64);
    assert_eq!(code(&agp(&["solve", "x.poly", "--guards", "edge"])), 64);
    assert_eq!(code(&agp(&["frobnicate"])), 64);
    let missing = d.path().join("nope.poly").to_string_lossy().into_owned();
    assert_eq!(code(&agp(&["solve", &missing])), 66);
    let bad = put(d.path(), "bad.poly", "agp-polygon 1\nouter 4\n0 0\n1 0\n");
    assert_eq!(code(&agp(&["solve", &bad])), 1);
    assert_eq!(code(&agp(&["--help"])), 0);
}

#[test]
fn time_limit_from_environment() {
    let d = tempfile::tempdir().unwrap();
    let f = put(d.path(), "square.poly", SQUARE);
    let o = Command::new(env!("CARGO_BIN_EXE_agp"))
        .args(["solve", &f])
        .env("AGP_TIME_LIMIT", "-1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 64);
}

#[test]
fn bench_suite() {
    let d = tempfile::tempdir().unwrap();
    let suite = d.path().join("suite");
    fs::create_dir(&suite).unwrap();
    for i in 0..5 {
        put(&suite, &format!("square-{i}.poly"), SQUARE);
    }
    let out = d.path().join("a.csv").to_string_lossy().into_owned();
    let o = agp(&["bench", suite.to_str().unwrap(), "-o", &out]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("100.0%"));
    let a = fs::read_to_string(&out).unwrap();
    assert_eq!(a.lines().count(), 6);
    assert!(a.starts_with("schema_version,instance,class,n,config,status"));

    put(&suite, "broken-0.poly", "agp-polygon 1\nouter 5\n0 0\n");
    let o = agp(&["bench", suite.to_str().unwrap(), "-o", &out]);
    assert_eq!(code(&o), 0);
    let a = fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = a.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows[0].starts_with("1,broken-0.poly,broken,,") && rows[0].contains(",Error,"));
    assert_eq!(rows.iter().filter(|r| r.contains(",ProvenOptimal,")).count(), 5);

    let out2 = d.path().join("b.csv").to_string_lossy().into_owned();
    assert_eq!(code(&agp(&["bench", suite.to_str().unwrap(), "-o", &out2, "--jobs", "2"])), 0);
    assert_eq!(fs::read(&out).unwrap(), fs::read(&out2).unwrap());
}

#[test]
fn render_solution() {
    let d = tempfile::tempdir().unwrap();
    let f = put(d.path(), "ell.poly", ELL);
    let sol = put(
        d.path(),
        "ell.sol",
        "status Feasible\nlower_bound 1\nupper_bound 1\niterations 1\nguards 1\n2 0 1\n",
    );
    let svg = d.path().join("ell.svg").to_string_lossy().into_owned();
    let o = agp(&["render", &f, "--solution", &sol, "--vis", "--arrangement", "-o", &svg]);
    assert_eq!(code(&o), 0);
    let s = fs::read_to_string(&svg).unwrap();
    assert_eq!(s.matches("class=\"guard\"").count(), 1);
    assert_eq!(s.matches("class=\"vis\"").count(), 1);
    assert_eq!(s.matches("class=\"face\"").count(), 2);

    let out = d.path().join("solved.svg").to_string_lossy().into_owned();
    let solf = d.path().join("solved.sol").to_string_lossy().into_owned();
    assert_eq!(code(&agp(&["solve", &f, "--svg", &out, "--solution", &solf])), 0);
    assert!(fs::read_to_string(&out).unwrap().contains("class=\"guard\""));
    assert!(fs::read_to_string(&solf).unwrap().starts_with("status ProvenOptimal"));
}
