use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nsp-bench")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn demo_separation_prints_both_modes() {
    let o = run(&["demo-separation", "--n", "8"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<Vec<u64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r[1] == 0));
    assert!(rows[2..].windows(2).all(|w| w[1][2] > w[0][2]));
}

#[test]
fn solve_prints_a_schedule_and_reports_unsat() {
    let dir = tempfile::tempdir().unwrap();
    let sat = dir.path().join("sat.txt");
    fs::write(&sat, "3 4 1\n1\n2\n1\n2\n").unwrap();
    let o = run(&["solve", sat.to_str().unwrap(), "--mode", "clex-seq", "--seq", "1,2,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let matrix: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(matrix.len(), 3);
    assert!(matrix.iter().all(|l| l.len() == 4));

    let unsat = dir.path().join("unsat.txt");
    fs::write(&unsat, "1 3 1\n1\n1\n1\n").unwrap();
    let o = run(&["solve", unsat.to_str().unwrap(), "--mode", "among-lex", "--seq", "0,1,2"]);
    assert_eq!(o.status.code(), Some(1));

    let shifts = dir.path().join("shifts.txt");
    fs::write(&shifts, "3 3 3\n1 0 1\n1 1 0\n0 1 1\n").unwrap();
    let o = run(&["solve", shifts.to_str().unwrap(), "--mode", "clex-regular", "--preset", "break12"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["solve"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "/nonexistent", "--mode", "clex-seq"]).status.code(), Some(2));
    let o = run(&["bench", "--generate", "1", "--seq", "3,2,4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn bench_all_modes_in_one_table() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("runs.csv");
    let o = run(&[
        "bench", "--generate", "2", "--nurses", "4", "--days", "6", "--demand", "1,2", "--seq", "1,2,3",
        "--mode", "all", "--nodes", "5000", "--out", csv.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    for mode in ["among-lex", "seq-lex", "clex-seq"] {
        assert!(text.contains(mode), "{text}");
    }
    let runs = fs::read_to_string(&csv).unwrap();
    assert!(runs.starts_with("config,instance,outcome,nodes,backtracks,ms\n"));
    assert_eq!(runs.lines().count(), 1 + 3 * 2);
}

#[test]
fn generate_then_compile_product() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["generate", "--seed", "3", "--nurses", "25", "--days", "7", "--shifts", "--demand", "2,8"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("25 7 3\n"));
    let o = run(&["generate", "--count", "3", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 3);

    let o = run(&["compile-product", "--preset", "break12"]);
    assert!(o.status.success());
    let product: clex::regular::Dfa = stdout(&o).parse().unwrap();
    assert!(product.accepts(&[0, 0, 1, 3]));
    assert!(!product.accepts(&[1, 0, 0, 0]));
}
