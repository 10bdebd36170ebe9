use std::io::Write;
use std::process::{Command, Stdio};

use fairsack::{run_args, Outcome};
use proptest::prelude::*;
use serde_json::Value;

fn run(args: &[&str]) -> Outcome {
    run_args(std::iter::once("fairsack").chain(args.iter().copied()), &mut std::io::empty())
}

fn bin(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_fairsack"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn table_is_byte_stable() {
    let first = bin(&["table", "--tplus1", "12"], "");
    let second = bin(&["table", "--total", "11"], "");
    assert_eq!(first.0, 0);
    assert_eq!(first, second);
    assert_eq!(first.1, include_str!("golden/table12.txt"));
}

#[test]
fn binary_exit_codes() {
    let (code, out, err) = bin(&["verify", "-"], r#"{"dice": [[0,1],[0,1]]}"#);
    assert_eq!(code, 1);
    assert!(out.contains("\"total_collisions\""));
    assert!(err.contains("not fair"));
    let (code, out, _) = bin(&["enumerate", "--total", "11", "--oracle", "--jobs", "2"], "");
    assert_eq!(code, 0);
    assert!(out.ends_with("count: 11, oracle: agree\n"));
    let (code, _, err) = bin(&["construct", "--blocks", "[{1}]"], "");
    assert_eq!(code, 2);
    assert!(err.contains("--a"));
    assert_eq!(bin(&["enumerate", "--total", "3", "--bound", "0"], "").0, 2);
}

#[test]
fn reads_files() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "[[0,1,6,7],[0,2,4]]").unwrap();
    let path = file.path().to_str().unwrap();
    let out = run(&["decompose", path]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let d: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(d["a"], serde_json::json!([2, 3, 2]));
    assert_eq!(d["blocks"], serde_json::json!([[1, 3], [2]]));
    assert_eq!(d["die_order"], serde_json::json!([0, 1]));
}

#[test]
fn enumerated_json_round_trips() {
    for t in [0u64, 11, 23, 35] {
        let total = t.to_string();
        let out = run(&["enumerate", "--total", &total, "--json"]);
        assert_eq!(out.code, 0);
        let doc: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(doc["t"], t);
        let sacks = doc["sacks"].as_array().unwrap();
        assert_eq!(doc["count"], sacks.len());
        for s in sacks {
            let text = s.to_string();
            let verified = run(&["verify", &text]);
            assert_eq!(verified.code, 0, "{text}");
            let decomposed: Value = serde_json::from_str(&run(&["decompose", &text]).stdout).unwrap();
            assert_eq!(decomposed["a"], s["a"]);
            assert_eq!(decomposed["blocks"], s["blocks"]);
        }
    }
}

proptest! {
    #[test]
    fn constructed_json_round_trips(
        factors in prop::collection::vec(2u64..=5, 1..=4),
        labels in prop::collection::vec(0usize..3, 4),
    ) {
        let a = factors.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut seen: Vec<usize> = Vec::new();
        for (h, &l) in labels[..factors.len()].iter().enumerate() {
            match seen.iter().position(|&x| x == l) {
                Some(g) => blocks[g].push(h + 1),
                None => {
                    seen.push(l);
                    blocks.push(vec![h + 1]);
                }
            }
        }
        let blocks: Vec<String> = blocks
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        let blocks = format!("[{}]", blocks.join(","));
        let built = run(&["construct", "--a", &a, "--blocks", &blocks]);
        prop_assert_eq!(built.code, 0, "{}", built.stderr);
        let sack: Value = serde_json::from_str(&built.stdout).unwrap();

        let verified = run(&["verify", &built.stdout]);
        prop_assert_eq!(verified.code, 0);
        let report: Value = serde_json::from_str(&verified.stdout).unwrap();
        prop_assert_eq!(&report["fair"], &Value::Bool(true));

        // atomizing keeps the total
        let atoms = run(&["atomize", &built.stdout]);
        prop_assert_eq!(atoms.code, 0);
        let atoms: Value = serde_json::from_str(&atoms.stdout).unwrap();
        prop_assert_eq!(&atoms["t"], &sack["t"]);

        let canonical = run(&["construct", "--a", &a, "--blocks", &blocks, "--canonicalize"]);
        let canonical: Value = serde_json::from_str(&canonical.stdout).unwrap();
        prop_assert_eq!(&canonical["dice"], &sack["dice"]);
        let decomposed: Value =
            serde_json::from_str(&run(&["decompose", &built.stdout]).stdout).unwrap();
        prop_assert_eq!(&decomposed["a"], &canonical["a"]);
        prop_assert_eq!(&decomposed["blocks"], &canonical["blocks"]);
    }
}
