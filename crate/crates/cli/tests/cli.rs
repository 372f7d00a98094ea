use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_xbwtrie"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, content: &[u8]) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, content).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn figure_input(dir: &TempDir) -> PathBuf {
    write(dir, "fig.txt", b"b\nbb\nbcba\nbcbc\n")
}

fn binary_strings(height: usize) -> Vec<u8> {
    let mut out = Vec::new();
    for i in 0..1u32 << height {
        for j in (0..height).rev() {
            out.push(if i >> j & 1 == 0 { b'a' } else { b'b' });
        }
        out.push(b'\n');
    }
    out
}

#[test]
fn build_and_count_figure() {
    let dir = TempDir::new().unwrap();
    let input = figure_input(&dir);
    let index = dir.path().join("fig.idx");
    let o = run(&["build", s(&input), "--output", s(&index)]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("n=7 sigma=3 r=6 "));
    assert!(stdout(&o).contains("payload fid: "));

    let o = run(&["count", s(&index), "b", "cb", "zz", ""]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "b\t3\ncb\t1\nzz\t0\n\t7\n");

    let o = run(&["count", s(&index), "b", r"b\x00"]);
    assert!(!o.status.success());
    assert_eq!(stdout(&o), "b\t3\n");
    assert!(String::from_utf8_lossy(&o.stderr).contains("pattern contains sentinel"));

    let patterns = write(&dir, "patterns.txt", b"bc\nc\n");
    let o = run(&["count", s(&index), "--patterns-file", s(&patterns), "--format", "json-lines"]);
    assert_eq!(stdout(&o), "{\"count\":2,\"pattern\":\"bc\"}\n{\"count\":2,\"pattern\":\"c\"}\n");
}

#[test]
fn every_mode_answers_alike() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "words.txt", b"banana\nbandana\ncabana\nanna\nnab\n");
    let mut answers = Vec::new();
    for mode in ["plain", "fid", "id", "fixed-block", "auto"] {
        let index = dir.path().join(format!("{mode}.idx"));
        let o = run(&["build", s(&input), "-o", s(&index), "--mode", mode, "--block-size", "7"]);
        assert!(o.status.success(), "{mode}");
        let o = run(&["count", s(&index), "a", "an", "ana", "nab", "bandana", "x"]);
        answers.push(stdout(&o));
    }
    assert!(answers.windows(2).all(|w| w[0] == w[1]));
    assert_eq!(answers[0], "a\t11\nan\t5\nana\t4\nnab\t1\nbandana\t1\nx\t0\n");
}

#[test]
fn build_single_node_and_errors() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "empty-line.txt", b"\n");
    let index = dir.path().join("one.idx");
    let o = run(&["build", s(&input), "-o", s(&index)]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("n=1 sigma=0 r=0 "));

    let o = run(&["build", "/nonexistent/input.txt", "-o", s(&index)]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot read"));

    let all_bytes: Vec<u8> = (0..=255u8).filter(|&b| b != b'\n').chain(*b"\n\n").collect();
    let input = write(&dir, "all.txt", &all_bytes);
    let o = run(&["build", s(&input), "-o", s(&index)]);
    assert!(o.status.success());

    let bad = write(&dir, "bad.idx", b"XBWT\x01\x00garbage");
    let o = run(&["count", s(&bad), "a"]);
    assert!(!o.status.success());
}

#[test]
fn stats_reports() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "binary.txt", &binary_strings(6));
    let o = run(&["stats", s(&input), "--k", "2", "--format", "tsv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("n\t-\t127\n"));
    assert!(out.contains("r\t-\t64\n"));
    assert!(out.contains("leaf_runs\t-\t32\n"));
    assert!(!out.contains("\tfail\t"));

    let fig = figure_input(&dir);
    let index = dir.path().join("fig.idx");
    run(&["build", s(&fig), "-o", s(&index)]);
    for path in [&fig, &index] {
        let o = run(&["stats", s(path), "--k", "2"]);
        assert!(o.status.success());
        assert!(stdout(&o).contains("run_bound_k2"));
    }
    let tsv = stdout(&run(&["stats", s(&index), "--format", "tsv"]));
    let json = stdout(&run(&["stats", s(&index), "--format", "json-lines"]));
    assert_eq!(tsv.lines().count(), json.lines().count());
    assert!(json.lines().all(|l| l.starts_with('{') && l.ends_with('}')));

    let single = write(&dir, "single.txt", b"\n");
    let o = run(&["stats", s(&single), "--format", "tsv"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("H_wc\t-\t0\n"));
}

#[test]
fn enumerate_counts() {
    let o = run(&["enumerate", "7", "1,3,2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "formula\t735\nmatrices/n\t735\ntries\t735\nequal\n");
    let o = run(&["enumerate", "1", "0"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("formula\t1\n"));
    let o = run(&["enumerate", "3", "2,2"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("infeasible: sum != n-1"));
    let o = run(&["enumerate", "8", "2,2,3", "--cap", "10"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("enumeration too large"));
}

#[test]
fn verify_sweeps() {
    let o = run(&["verify", "--max-n", "8", "--max-sigma", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("8\t3\t36\t43263\t346104\t0\n"));
    assert!(out.ends_with("checked 164/164 distributions, 0 failed: pass\n"));
    let o = bin()
        .args(["verify", "--max-n", "8", "--max-sigma", "3"])
        .env("XBWTRIE_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(stdout(&o), out);

    let o = run(&["verify", "--max-n", "1", "--max-sigma", "1"]);
    assert!(o.status.success());
    let o = run(&["verify", "--max-n", "8", "--max-sigma", "3", "--cap", "100"]);
    assert!(!o.status.success());
}

#[cfg(unix)]
#[test]
fn interrupted_verify_prints_partial_summary() {
    use std::time::Duration;
    let child = bin()
        .args(["verify", "--max-n", "11", "--max-sigma", "3"])
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    std::thread::sleep(Duration::from_millis(1500));
    Command::new("kill").args(["-INT", &child.id().to_string()]).status().unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(!o.status.success());
    assert!(stdout(&o).contains("interrupted"), "{}", stdout(&o));
}

#[test]
fn dump_layouts() {
    let dir = TempDir::new().unwrap();
    let o = run(&["dump", s(&figure_input(&dir))]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "0000100\n1101000\n0100100\nD: 0 1 -1 0 1 -1 -1\nL: 0 1 0 0 1 0 -1\n\
         colex: 1 6 2 3 5 4 7\nxbwt: {b} {} {b,c} {} {a,c} {b} {}\n\
         B_a: 0000100\nB_b: 1010010\nB_c: 0010100\n"
    );
    let o = run(&["dump", s(&write(&dir, "single.txt", b"\n"))]);
    assert_eq!(stdout(&o), "D: -1\nL: -1\ncolex: 1\nxbwt: {}\n");
    let o = run(&["dump", s(&write(&dir, "h1.txt", b"a\nb\n"))]);
    assert!(stdout(&o).starts_with("100\n100\nD: 1 -1 -1\nL: 1 0 -1\n"));
}

#[test]
fn output_flag_and_determinism() {
    let dir = TempDir::new().unwrap();
    let input = figure_input(&dir);
    let out = dir.path().join("report.tsv");
    let o = run(&["stats", s(&input), "--format", "tsv", "--output", s(&out)]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let first = std::fs::read(&out).unwrap();
    run(&["stats", s(&input), "--format", "tsv", "--output", s(&out)]);
    assert_eq!(std::fs::read(&out).unwrap(), first);

    let a = dir.path().join("a.idx");
    let b = dir.path().join("b.idx");
    run(&["build", s(&input), "-o", s(&a)]);
    run(&["build", s(&input), "-o", s(&b)]);
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}
