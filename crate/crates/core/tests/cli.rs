use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn fca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fca")).args(args).output().expect("running fca")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn enumerate_prints_count_for_both_engines() {
    let input = fixture("table1.cxt");
    for engine in ["horizontal", "vertical"] {
        for width in ["32", "64"] {
            let o = fca(&["enumerate", "-i", input.to_str().unwrap(), "--engine", engine, "--width", width]);
            assert!(o.status.success());
            assert!(stdout(&o).starts_with("10 concepts"), "{}", stdout(&o));
        }
    }
}

#[test]
fn enumerate_writes_golden_text_and_tree() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.txt");
    let tree = dir.path().join("t.json");
    for name in ["table1", "table3"] {
        for engine in ["horizontal", "vertical"] {
            let input = fixture(&format!("{name}.cxt"));
            let o = fca(&[
                "enumerate",
                "-i",
                input.to_str().unwrap(),
                "--engine",
                engine,
                "-o",
                out.to_str().unwrap(),
                "--tree",
                tree.to_str().unwrap(),
            ]);
            assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
            let golden = std::fs::read_to_string(fixture(&format!("{name}.concepts.txt"))).unwrap();
            assert_eq!(std::fs::read_to_string(&out).unwrap(), golden, "{name} {engine}");
            let doc: fca_core::io::ConceptTreeDocument =
                serde_json::from_str(&std::fs::read_to_string(&tree).unwrap()).unwrap();
            assert!(doc.is_well_formed());
            // the vertical engine never builds the empty extent
            let built = if engine == "vertical" { 9 } else { 10 };
            assert_eq!(doc.nodes.len(), built);
            assert_eq!(doc.context.source, format!("{name}.cxt"));
        }
    }
}

#[test]
fn enumerate_reads_every_input_format() {
    for name in ["table1.cxt", "table1.dat", "table1.csv"] {
        let input = fixture(name);
        let o = fca(&["enumerate", "-i", input.to_str().unwrap()]);
        assert!(o.status.success(), "{name}");
        assert!(stdout(&o).starts_with("10 concepts"));
    }
}

#[test]
fn concept_list_on_stdout_moves_stats_to_stderr() {
    let input = fixture("table1.cxt");
    let o = fca(&["enumerate", "-i", input.to_str().unwrap(), "-o", "-"]);
    assert_eq!(stdout(&o).lines().count(), 10);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("10 concepts"));
}

#[test]
fn verify_passes_on_fixture_and_batch() {
    let input = fixture("table1.cxt");
    let o = fca(&["verify", "-i", input.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = fca(&["verify", "--trials", "200", "--max-dim", "12", "--seed", "42"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("ok: 200 random 12x12"));
}

#[test]
fn transpose_twice_restores_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let once = dir.path().join("t.cxt");
    let twice = dir.path().join("tt.cxt");
    let input = fixture("table1.cxt");
    assert!(fca(&["transpose", "-i", input.to_str().unwrap(), "-o", once.to_str().unwrap()]).status.success());
    let t = std::fs::read_to_string(&once).unwrap();
    assert!(t.starts_with("B\n\n5\n6\n\na1\n"));
    assert!(fca(&["transpose", "-i", once.to_str().unwrap(), "-o", twice.to_str().unwrap()]).status.success());
    assert_eq!(std::fs::read(&twice).unwrap(), std::fs::read(&input).unwrap());
}

#[test]
fn transpose_converts_formats() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.dat");
    let input = fixture("table1.cxt");
    assert!(fca(&["transpose", "-i", input.to_str().unwrap(), "-o", out.to_str().unwrap()]).status.success());
    // object a1 of the transpose holds objects 2 and 3
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().next(), Some("1 2"));
}

#[test]
fn bench_reports_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.jsonl");
    let input = fixture("table1.cxt");
    let o = fca(&[
        "bench",
        "-i",
        input.to_str().unwrap(),
        "--transposed",
        "--repeats",
        "2",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("dataset"));
    let lines: Vec<serde_json::Value> = std::fs::read_to_string(&report)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[0]["dataset"], "table1");
    assert_eq!(lines[4]["dataset"], "table1^T");
    assert!(lines.iter().all(|l| l["concepts"] == 10 && l["outcome"] == "ok"));
}

#[test]
fn bench_records_budget_exhaustion() {
    let input = fixture("table1.cxt");
    let o = fca(&["bench", "-i", input.to_str().unwrap(), "--json", "--repeats", "1", "--budget-bytes", "16"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("\"engine\":\"horizontal\"") && text.contains("\"outcome\":\"budget-exhausted\""));
    assert!(text.contains("\"engine\":\"vertical\""));
}

#[test]
fn errors_exit_nonzero_with_message() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cxt");
    std::fs::write(&bad, "B\n\n1\n2\n\ng\nm\nn\nX\n").unwrap();
    let o = fca(&["enumerate", "-i", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 9") && err.contains("row 1"), "{err}");

    let unknown = dir.path().join("x.bin");
    std::fs::write(&unknown, "").unwrap();
    assert_eq!(fca(&["enumerate", "-i", unknown.to_str().unwrap()]).status.code(), Some(2));
    let ok_with_format = fca(&["enumerate", "-i", unknown.to_str().unwrap(), "--format", "fimi"]);
    assert!(ok_with_format.status.success());
}

#[test]
fn repeated_runs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("table3.cxt");
    let mut outputs = Vec::new();
    for i in 0..2 {
        let tree = dir.path().join(format!("t{i}.json"));
        let o = fca(&["enumerate", "-i", input.to_str().unwrap(), "-o", "-", "--tree", tree.to_str().unwrap(), "--tree-extents"]);
        outputs.push((o.stdout, std::fs::read(&tree).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
}
