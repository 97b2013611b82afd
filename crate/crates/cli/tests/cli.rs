//! End-to-end tests of the binary: exit codes, report fields, file
//! outputs, and report reproducibility.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rrobust::Digraph;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rrobust"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn field<'a>(report: &'a str, key: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{}: ", key)))
        .unwrap_or_else(|| panic!("missing field {} in:\n{}", key, report))
}

fn strip_duration(report: &str) -> String {
    report
        .lines()
        .filter(|l| !l.starts_with("duration_seconds:"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn write_graph(dir: &Path, name: &str, g: &Digraph) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, g.write_edge_list()).unwrap();
    path
}

fn complete(n: usize) -> Digraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b {
                edges.push((a, b));
            }
        }
    }
    Digraph::from_edges(n, &edges).unwrap()
}

fn star(n: usize) -> Digraph {
    let mut edges = Vec::new();
    for leaf in 1..n {
        edges.push((0, leaf));
        edges.push((leaf, 0));
    }
    Digraph::from_edges(n, &edges).unwrap()
}

fn two_cliques(half: usize) -> Digraph {
    let mut edges = Vec::new();
    for base in [0, half] {
        for i in 0..half {
            for j in 0..half {
                if i != j {
                    edges.push((base + i, base + j));
                }
            }
        }
    }
    Digraph::from_edges(2 * half, &edges).unwrap()
}

#[test]
fn gen_writes_reproducible_graph_and_truth_files() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "gen", "--n", "12", "--size-a", "4", "--size-b", "4", "--rbar", "2", "--seed", "5", "-o",
        "p.edges",
    ];
    let out = run_in(dir.path(), &args);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let graph_bytes = std::fs::read(dir.path().join("p.edges")).unwrap();
    let truth_text = std::fs::read_to_string(dir.path().join("p.edges.truth")).unwrap();
    let g = Digraph::parse_edge_list(std::str::from_utf8(&graph_bytes).unwrap()).unwrap();
    assert_eq!(g.n(), 12);
    let (truth, rbar) = rrobust::generators::parse_ground_truth(&truth_text, 12).unwrap();
    assert_eq!(rbar, 2);
    assert!(truth.is_valid_for(12));
    // ground truth matches the graph: every A vertex has exactly rbar
    // in-neighbors outside A
    for v in truth.a.iter() {
        assert_eq!(g.outside_count(v, &truth.a), 2);
    }

    // same seed, second directory: byte-identical outputs
    let dir2 = tempfile::tempdir().unwrap();
    let out2 = run_in(dir2.path(), &args);
    assert_eq!(out2.status.code(), Some(0));
    assert_eq!(graph_bytes, std::fs::read(dir2.path().join("p.edges")).unwrap());
    assert_eq!(
        truth_text,
        std::fs::read_to_string(dir2.path().join("p.edges.truth")).unwrap()
    );
}

#[test]
fn degree_flags_star_and_passes_k6() {
    let dir = tempfile::tempdir().unwrap();
    write_graph(dir.path(), "star.edges", &star(6));
    write_graph(dir.path(), "k6.edges", &complete(6));

    let out = run_in(dir.path(), &["degree", "--graph", "star.edges", "--r", "1", "--delta", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let rep = stdout(&out);
    assert_eq!(field(&rep, "assumption_holds"), "false");
    assert_eq!(field(&rep, "d_min"), "1");
    assert_eq!(field(&rep, "witness_vertex"), "1");
    assert_eq!(field(&rep, "witness_a"), "1");

    let out = run_in(dir.path(), &["degree", "--graph", "k6.edges", "--r", "1", "--delta", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(field(&stdout(&out), "assumption_holds"), "true");
}

#[test]
fn exact_reports_witnesses_and_max() {
    let dir = tempfile::tempdir().unwrap();
    write_graph(dir.path(), "split.edges", &two_cliques(3));
    write_graph(dir.path(), "k6.edges", &complete(6));

    let out = run_in(dir.path(), &["exact", "--graph", "split.edges", "--r", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let rep = stdout(&out);
    assert_eq!(field(&rep, "robust"), "false");
    assert_eq!(field(&rep, "witness_a"), "0 1 2");
    assert_eq!(field(&rep, "witness_b"), "3 4 5");

    let out = run_in(dir.path(), &["exact", "--graph", "k6.edges", "--max"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(field(&stdout(&out), "max_robustness"), "3");

    // 14 vertices exceed the enumeration guard without --force
    write_graph(dir.path(), "k14.edges", &complete(14));
    let out = run_in(dir.path(), &["exact", "--graph", "k14.edges", "--r", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--force"));

    let out = run_in(dir.path(), &["exact", "--graph", "k6.edges"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn test_command_verdicts_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["gen", "--n", "200", "--size-a", "70", "--size-b", "70", "--rbar", "10", "--seed", "3",
          "-o", "planted.edges"],
    );
    assert_eq!(out.status.code(), Some(0));
    write_graph(dir.path(), "k12.edges", &complete(12));
    write_graph(dir.path(), "star.edges", &star(8));

    // planted instance at r = rbar + 1 rejects with a bounded witness
    let out = run_in(
        dir.path(),
        &["test", "--graph", "planted.edges", "--r", "11", "--delta", "30", "--seed", "7"],
    );
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    let rep = stdout(&out);
    assert_eq!(field(&rep, "verdict"), "reject");
    assert_eq!(field(&rep, "witness_kind"), "sampled");
    assert!(field(&rep, "witness_r").parse::<usize>().unwrap() <= 41);

    // robust graph accepts
    let out = run_in(
        dir.path(),
        &["test", "--graph", "k12.edges", "--r", "2", "--delta", "4", "--seed", "1"],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(field(&stdout(&out), "verdict"), "accept");

    // degree precondition failure without --arbitrary: exit 3 plus hint
    let out = run_in(
        dir.path(),
        &["test", "--graph", "star.edges", "--r", "1", "--delta", "1"],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("--arbitrary"));

    // with --arbitrary the low-degree vertex is the witness
    let out = run_in(
        dir.path(),
        &["test", "--graph", "star.edges", "--r", "1", "--delta", "1", "--arbitrary"],
    );
    assert_eq!(out.status.code(), Some(1));
    let rep = stdout(&out);
    assert_eq!(field(&rep, "witness_kind"), "degree");
    assert_eq!(field(&rep, "refuted_level"), "4");
}

#[test]
fn reports_are_reproducible_modulo_duration() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["gen", "--n", "200", "--size-a", "70", "--size-b", "70", "--rbar", "10", "--seed", "9",
          "-o", "p.edges"],
    );
    assert_eq!(out.status.code(), Some(0));

    let args = ["test", "--graph", "p.edges", "--r", "11", "--delta", "30", "--seed", "21"];
    let a = run_in(dir.path(), &args);
    let b = run_in(dir.path(), &args);
    assert_eq!(strip_duration(&stdout(&a)), strip_duration(&stdout(&b)));

    // worker count must not change the report either
    let mut w1 = args.to_vec();
    w1.extend(["--workers", "1"]);
    let mut w8 = args.to_vec();
    w8.extend(["--workers", "8"]);
    let a = run_in(dir.path(), &w1);
    let b = run_in(dir.path(), &w8);
    assert_eq!(strip_duration(&stdout(&a)), strip_duration(&stdout(&b)));
}

#[test]
fn interval_brackets_k12() {
    let dir = tempfile::tempdir().unwrap();
    write_graph(dir.path(), "k12.edges", &complete(12));
    let out = run_in(
        dir.path(),
        &["interval", "--graph", "k12.edges", "--delta", "2", "--beta", "1", "--sigma", "1/10",
          "--seed", "4"],
    );
    assert_eq!(out.status.code(), Some(0));
    let rep = stdout(&out);
    let lo: usize = field(&rep, "lo").parse().unwrap();
    let hi: usize = field(&rep, "hi").parse().unwrap();
    assert!(lo <= 6 && 6 <= hi);
    assert!(hi - lo <= 4);
}

#[test]
fn bad_inputs_exit_with_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.edges"), "2 1\n0 0").unwrap();
    let out = run_in(dir.path(), &["degree", "--graph", "bad.edges", "--r", "1", "--delta", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("self-loop"));

    let out = run_in(dir.path(), &["degree", "--graph", "missing.edges", "--r", "1", "--delta", "0"]);
    assert_eq!(out.status.code(), Some(2));

    // fig3 without settings
    let out = run_in(dir.path(), &["fig3", "-o", "x.csv"]);
    assert_eq!(out.status.code(), Some(2));

    // clap usage errors also exit 2
    let out = run_in(dir.path(), &["test", "--graph", "missing.edges"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fig3_single_setting_smoke() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["fig3", "--rbar-list", "4", "--seed", "2", "-o", "one.csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("one.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("setting,rbar,threshold,detected_r,seconds"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("rbar4_size70,4,35,"), "{}", row);
    assert_eq!(lines.next(), None);
}
