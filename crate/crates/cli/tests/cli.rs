use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mdl-dfa"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn mdl-dfa")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_sample(dir: &Path, name: &str, n: usize, words: &[&str]) -> String {
    let path = dir.join(name);
    let mut text = format!("{n} {}\n", words.len());
    for w in words {
        text += w;
        text.push('\n');
    }
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const PARITY_DFA: &str = "2 2 0 1\n0 0 0\n0 1 1\n1 0 1\n1 1 0\n";

#[test]
fn encode_parity_machine_to_ten_bits() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("parity.dfa");
    fs::write(&f, PARITY_DFA).unwrap();
    let o = run(&["encode-dfa", "--in", f.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim().len(), 10);
}

#[test]
fn decode_inverts_encode_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let texts = [PARITY_DFA, "1 2 0 1\n0 0 0\n0 1 0\n", "3 2 2 2\n0 0 1\n0 1 2\n1 0 0\n1 1 1\n2 0 2\n2 1 0\n"];
    for (i, text) in texts.iter().enumerate() {
        let src = dir.path().join(format!("m{i}.dfa"));
        let enc = dir.path().join(format!("m{i}.bits"));
        let dec = dir.path().join(format!("m{i}.out.dfa"));
        fs::write(&src, text).unwrap();
        assert!(run(&["encode-dfa", "--in", src.to_str().unwrap(), "--out", enc.to_str().unwrap()]).status.success());
        assert!(fs::read_to_string(&enc).unwrap().starts_with("# {"));
        assert!(run(&["decode-dfa", "--in", enc.to_str().unwrap(), "--out", dec.to_str().unwrap()]).status.success());
        let round: String = fs::read_to_string(&dec).unwrap().lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
        assert_eq!(round, *text);
    }
}

#[test]
fn induce_writes_a_trace_with_config() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_sample(dir.path(), "d.txt", 4, &["0000", "0011", "0101", "0110", "1001", "1010", "1100", "1111"]);
    let trace = dir.path().join("out.csv");
    let o = run(&["induce", "--data", &data, "--n", "4", "--alpha", "400", "--rule", "safe", "--trace", trace.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&trace).unwrap();
    let mut lines = csv.lines();
    let preamble: serde_json::Value = serde_json::from_str(lines.next().unwrap().trim_start_matches("# ")).unwrap();
    assert_eq!(preamble["config"]["rule"], "safe");
    assert_eq!(preamble["config"]["alpha"], 400.0);
    assert!(preamble["version"].is_string());
    assert_eq!(lines.next().unwrap(), "step,q,s,program_bits,data_bits,total,deficiency_lower_bound,coder");
    assert!(lines.count() >= 1);
}

#[test]
fn dovetail_and_direct_emit_jsonl() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_sample(dir.path(), "d.txt", 3, &["000", "011", "101", "110"]);
    for mode in ["dovetail", "direct"] {
        let trace = dir.path().join(format!("{mode}.jsonl"));
        let o = run(&[mode, "--data", &data, "--alpha", "32", "--trace", trace.to_str().unwrap()]);
        assert!(o.status.success());
        let text = fs::read_to_string(&trace).unwrap();
        let head: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(head["mode"], mode);
        assert_eq!(head["terminated"], "exhausted");
    }
}

#[test]
fn outputs_do_not_depend_on_threads() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_sample(dir.path(), "d.txt", 3, &["001", "010", "100", "111"]);
    let mut outs = Vec::new();
    for threads in ["1", "3"] {
        let trace = dir.path().join(format!("t{threads}.csv"));
        let o = run(&["--threads", threads, "dovetail", "--data", &data, "--alpha", "40", "--trace", trace.to_str().unwrap()]);
        assert!(o.status.success());
        outs.push(fs::read(&trace).unwrap());
    }
    // the trace path differs, so compare everything after the preamble
    let body = |b: &[u8]| String::from_utf8(b.to_vec()).unwrap().lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&outs[0]), body(&outs[1]));
}

#[test]
fn parity_experiment_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(&["experiment", "parity", "--n", "16", "--seed", "7", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["name"], "parity");
    assert_eq!(report["config"]["seed"], 7);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    let again = dir.path().join("again.json");
    run(&["experiment", "parity", "--n", "16", "--seed", "7", "--out", again.to_str().unwrap()]);
    let strip = |p: &Path| fs::read_to_string(p).unwrap().replace(p.to_str().unwrap(), "");
    assert_eq!(strip(&out), strip(&again));
}

#[test]
fn oscillation_and_lemma1_run() {
    let o = run(&["experiment", "oscillation", "--n", "90"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("[PASS] shortest coding rejects M_30->M_60"));
    let o = run(&["experiment", "lemma1"]);
    assert!(o.status.success());
    assert!(!stdout(&o).contains("[FAIL]"));
}

#[test]
fn structfn_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let data = write_sample(dir.path(), "d.txt", 3, &["000", "011", "101"]);
    let csv = dir.path().join("t.csv");
    let json = dir.path().join("t.json");
    let o = run(&["structfn", "--data", &data, "--out", csv.to_str().unwrap(), "--json", json.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("alpha,lambda"));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["config"]["class"], "dfa");
    assert!(!doc["table"]["rows"].as_array().unwrap().is_empty());
}

#[test]
fn rank_and_unrank() {
    let o = run(&["rank", "--l", "8", "--members", "1,3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rank"], "8");
    let o = run(&["rank", "--l", "8", "--d", "2", "--unrank", "8"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["members"], serde_json::json!([1, 3]));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["induce"]).status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    let o = run(&["experiment", "oscillation", "--n", "100"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error: domain error"));

    let dir = tempfile::tempdir().unwrap();
    let dup = dir.path().join("dup.txt");
    fs::write(&dup, "2 2\n01\n01\n").unwrap();
    assert_eq!(run(&["induce", "--data", dup.to_str().unwrap(), "--alpha", "10"]).status.code(), Some(2));
    let data = write_sample(dir.path(), "d.txt", 3, &["000"]);
    assert_eq!(run(&["induce", "--data", &data, "--n", "4", "--alpha", "10"]).status.code(), Some(2));
}
