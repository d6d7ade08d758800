use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lmimw::generators::{extremal_tree, random_tree};
use lmimw::oracle::lmw_bruteforce;

fn lmimw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lmimw")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn lmw_of_extremal_two_is_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_temp(&dir, "e2.txt", &extremal_tree(2).unwrap().to_edge_list());
    let out = lmimw(&["lmw", s(&f)]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "2\n");
    assert_eq!(stdout(&lmimw(&["lmw", s(&f), "--root", "5"])), "2\n");
}

#[test]
fn layout_output_verifies_against_lmw() {
    let dir = tempfile::tempdir().unwrap();
    let tree = random_tree(300, 11).unwrap();
    let f = write_temp(&dir, "t.txt", &tree.to_edge_list());
    let width = stdout(&lmimw(&["lmw", s(&f)]));
    let layout = lmimw(&["layout", s(&f)]);
    assert!(layout.status.success());
    let text = stdout(&layout);
    assert_eq!(text.lines().next().unwrap(), width.trim());
    let l = write_temp(&dir, "l.txt", &text);
    let ok = lmimw(&["verify", s(&f), s(&l), "--expect", width.trim()]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert_eq!(stdout(&ok), width);

    // the bare permutation line is accepted too
    let bare = write_temp(&dir, "bare.txt", text.lines().nth(1).unwrap());
    let wrong = (width.trim().parse::<usize>().unwrap() + 1).to_string();
    let bad = lmimw(&["verify", s(&f), s(&bare), "--expect", &wrong]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn per_cut_lists_every_cut() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_temp(&dir, "p.txt", "0 1\n1 2\n2 3\n3 4\n");
    // after 0 and 4 the edges 0-1 and 4-3 form an induced matching; after
    // 0, 4, 1 the edges 1-2 and 4-3 do, since 2-3 does not cross
    let l = write_temp(&dir, "l.txt", "0 4 1 2 3\n");
    let out = lmimw(&["verify", s(&f), s(&l), "--per-cut"]);
    assert_eq!(stdout(&out), "cut 1 1\ncut 2 2\ncut 3 2\ncut 4 1\n2\n");
}

#[test]
fn oracle_agrees_and_respects_the_guard() {
    let dir = tempfile::tempdir().unwrap();
    let small = random_tree(12, 5).unwrap();
    let f = write_temp(&dir, "s.txt", &small.to_edge_list());
    let expected = lmw_bruteforce(&small).unwrap();
    assert_eq!(stdout(&lmimw(&["oracle", s(&f)])), format!("{expected}\n"));
    assert_eq!(stdout(&lmimw(&["lmw", s(&f)])), format!("{expected}\n"));

    let big = write_temp(&dir, "b.txt", &random_tree(17, 5).unwrap().to_edge_list());
    assert_eq!(lmimw(&["oracle", s(&big)]).status.code(), Some(3));
    let raised = Command::new(env!("CARGO_BIN_EXE_lmimw"))
        .args(["oracle", s(&big)])
        .env("LMIMW_ORACLE_GUARD", "17")
        .output()
        .unwrap();
    assert!(raised.status.success());
}

#[test]
fn labels_dump() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_temp(&dir, "star.txt", "0 1\n0 2\n0 3\n");
    assert_eq!(stdout(&lmimw(&["labels", s(&f)])), "0: (1,t.0)\n1: (0,t.0)\n2: (0,t.0)\n3: (0,t.0)\n");
    let verbose = stdout(&lmimw(&["labels", s(&f), "--verbose"]));
    assert!(verbose.starts_with("0: (1@0,t.0)\n"));
}

#[test]
fn gen_writes_parseable_edge_lists() {
    for args in [
        vec!["gen", "path", "5"],
        vec!["gen", "star", "4"],
        vec!["gen", "caterpillar", "3", "2"],
        vec!["gen", "kary", "2", "3"],
        vec!["gen", "random", "40", "--seed", "9"],
        vec!["gen", "extremal", "3"],
    ] {
        let out = lmimw(&args);
        assert!(out.status.success(), "{args:?}");
        lmimw::Tree::parse_edge_list(&stdout(&out)).unwrap();
    }
    assert_eq!(stdout(&lmimw(&["gen", "star", "3"])), "3\n0 1\n0 2\n");
    let a = stdout(&lmimw(&["gen", "random", "30", "--seed", "4"]));
    assert_eq!(a, stdout(&lmimw(&["gen", "random", "30", "--seed", "4"])));
}

#[test]
fn bench_prints_csv() {
    let out = lmimw(&["bench", "--sizes", "50,200", "--trials", "2", "--seed", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,millis,lmw_max"));
    for (line, n) in lines.zip([50, 200]) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[0], n.to_string());
        cols[1].parse::<f64>().unwrap();
        cols[2].parse::<usize>().unwrap();
    }
}

#[test]
fn bad_input_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cyc = write_temp(&dir, "c.txt", "0 1\n1 2\n2 0\n");
    let out = lmimw(&["lmw", s(&cyc)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cycle"));
    assert_eq!(lmimw(&["lmw", "/nonexistent/tree.txt"]).status.code(), Some(1));
    assert_eq!(lmimw(&["frobnicate"]).status.code(), Some(1));
    let f = write_temp(&dir, "p.txt", "0 1\n1 2\n");
    let l = write_temp(&dir, "l.txt", "0 0 1\n");
    assert_eq!(lmimw(&["verify", s(&f), s(&l)]).status.code(), Some(1));
    assert_eq!(lmimw(&["lmw", s(&f), "--root", "9"]).status.code(), Some(1));
}
