use std::fs;
use std::process::Command;

use levelscope_cli::code;
use levelscope_cli::record::{CsvRow, RunRecord};
use levelscope_cli::sweep::{sweep_to_file, SweepFamily, SweepPlan};
use proptest::prelude::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_levelscope"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn level_command() {
    let (c, out, _) = run(&["level", "--prime", "11", "--poly", "y^2*z^3-x^5-2*z^5"]);
    assert_eq!(c, 0);
    assert!(out.contains("level: 2"), "{out}");
    assert!(out.contains("J_1 = (z^2, x*z, x^3)"), "{out}");

    let (c, out, _) = run(&[
        "level",
        "--prime",
        "13",
        "--poly",
        "y^2*z^3-x^5-2*z^5",
        "--json",
    ]);
    assert_eq!(c, 0);
    let r: RunRecord = serde_json::from_str(out.trim()).unwrap();
    assert_eq!((r.level, r.capped), (Some(4), false));
}

#[test]
fn exit_codes() {
    let cases: [(&[&str], u8); 6] = [
        (
            &[
                "level",
                "--prime",
                "13",
                "--poly",
                "y^2*z^3-x^5-2*z^5",
                "--max-e",
                "2",
            ],
            code::CAPPED,
        ),
        (&["level", "--prime", "9", "--poly", "x"], code::INPUT),
        (&["level", "--prime", "11", "--poly", "x^(3)"], code::INPUT),
        (
            &["level", "--prime", "11", "--poly", "x^2 + y"],
            code::INPUT,
        ),
        (
            &["classify", "--prime", "5", "--h", "x^3 + x^2"],
            code::INVALID_CURVE,
        ),
        (
            &["classify", "--prime", "13", "--h", "x^5+2", "--genus", "3"],
            code::INVALID_CURVE,
        ),
    ];
    for (args, expected) in cases {
        let (c, _, err) = run(args);
        assert_eq!(c, expected as i32, "{args:?}: {err}");
    }
    let (c, _, _) = run(&[
        "sweep",
        "--family",
        "mu_x",
        "--genus",
        "2",
        "--primes",
        "7..11",
        "--out",
        "/nonexistent-dir/s.csv",
    ]);
    assert_eq!(c, code::IO as i32);
}

#[test]
fn classify_command() {
    let (c, out, _) = run(&["classify", "--prime", "13", "--h", "x^5+x"]);
    assert_eq!(c, 0);
    assert!(out.contains("class: superspecial"), "{out}");
    assert!(out.contains("heuristic"), "{out}");
    let (_, out, _) = run(&["classify", "--prime", "13", "--h", "x^5+2", "--json"]);
    let r: RunRecord = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(r.class.as_deref(), Some("supersingular"));
    assert_eq!((r.p_rank, r.bound), (Some(0), Some(3)));
    let (_, out, _) = run(&["classify", "--prime", "11", "--h", "x^5+2"]);
    assert!(
        out.contains("class: ordinary") && out.contains("p-rank: 2"),
        "{out}"
    );
}

#[test]
fn report_command_passes() {
    let (c, out, _) = run(&["paper-report"]);
    assert_eq!(c, 0, "{out}");
    assert!(!out.contains("FAIL"));
}

fn random_plan() -> SweepPlan {
    SweepPlan {
        family: SweepFamily::Random,
        genus: 2,
        primes: (11, 17),
        count: 6,
        seed: 7,
        ..SweepPlan::default()
    }
}

#[test]
fn sweep_output_is_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    for ext in ["csv", "jsonl"] {
        let files: Vec<Vec<u8>> = [1usize, 2, 3]
            .iter()
            .map(|&jobs| {
                let path = dir.path().join(format!("j{jobs}.{ext}"));
                sweep_to_file(&random_plan(), &path, false, jobs).unwrap();
                fs::read(&path).unwrap()
            })
            .collect();
        assert_eq!(files[0], files[1]);
        assert_eq!(files[0], files[2]);
    }
}

#[test]
fn resume_is_idempotent_and_completes_partial_files() {
    let dir = tempfile::tempdir().unwrap();
    for ext in ["csv", "jsonl"] {
        let path = dir.path().join(format!("s.{ext}"));
        let first = sweep_to_file(&random_plan(), &path, false, 0).unwrap();
        assert_eq!(first.computed, 18);
        let full = fs::read_to_string(&path).unwrap();

        let again = sweep_to_file(&random_plan(), &path, true, 0).unwrap();
        assert_eq!((again.computed, again.reused), (0, 18));
        assert_eq!(fs::read_to_string(&path).unwrap(), full);

        // drop every other record, then resume
        let kept: String = full
            .lines()
            .enumerate()
            .filter(|(i, _)| *i == 0 && ext == "csv" || i % 2 == 1)
            .map(|(_, l)| format!("{l}\n"))
            .collect();
        fs::write(&path, kept).unwrap();
        let resumed = sweep_to_file(&random_plan(), &path, true, 0).unwrap();
        assert!(resumed.computed > 0 && resumed.reused > 0);
        assert_eq!(fs::read_to_string(&path).unwrap(), full);
    }
}

#[test]
fn resume_rejects_malformed_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.jsonl");
    fs::write(&path, "{\"prime\": 11}\n").unwrap();
    let err = sweep_to_file(&random_plan(), &path, true, 1).unwrap_err();
    assert_eq!(err.exit_code(), code::INPUT);
}

#[test]
fn family_sweep_via_binary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mu.csv");
    let (c, out, _) = run(&[
        "sweep",
        "--family",
        "mu_x",
        "--genus",
        "2",
        "--mu",
        "1",
        "--primes",
        "7..100",
        "--out",
        path.to_str().unwrap(),
        "--jobs",
        "2",
    ]);
    assert_eq!(c, 0, "{out}");
    let mut rd = csv::Reader::from_path(&path).unwrap();
    let rows: Vec<CsvRow> = rd.deserialize().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 22);
    for r in rows {
        let expect = r.prime % 8 == 5 || r.prime % 8 == 7;
        assert_eq!(
            r.class.as_deref() == Some("superspecial"),
            expect,
            "p={}",
            r.prime
        );
        assert!(r.level >= r.bound, "p={}", r.prime);
    }
}

fn arb_opt_string() -> impl Strategy<Value = Option<String>> {
    proptest::option::of("[ -~]{0,12}")
}

prop_compose! {
    fn arb_record()(
        prime in 3u64..1000,
        genus in proptest::option::of(1u32..7),
        h in arb_opt_string(),
        poly in "[ -~]{0,20}",
        level in proptest::option::of(1u32..9),
        capped: bool,
        chain in proptest::collection::vec(proptest::collection::vec("[a-z^*0-9 ]{1,8}", 0..4), 0..4),
        rank_c in proptest::option::of(0usize..7),
        p_rank in proptest::option::of(0usize..7),
        nilpotency in proptest::option::of(0u32..7),
        class in arb_opt_string(),
        bound in proptest::option::of(2u32..9),
        ms in 0.0f64..1e9,
        seed in arb_opt_string(),
    ) -> RunRecord {
        RunRecord {
            prime, genus, h, poly, level, capped, chain, rank_c, p_rank, nilpotency, class,
            bound, ms, version: "0.1.0".into(), seed,
        }
    }
}

proptest! {
    #[test]
    fn json_records_roundtrip(r in arb_record()) {
        let s = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(serde_json::from_str::<RunRecord>(&s).unwrap(), r);
    }

    #[test]
    fn csv_rows_roundtrip(r in arb_record()) {
        // empty strings and None share the empty cell; compare non-empty ones
        prop_assume!(r.h.as_deref() != Some("") && r.class.as_deref() != Some("") && r.seed.as_deref() != Some(""));
        let row = CsvRow::from(&r);
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(&row).unwrap();
        let bytes = w.into_inner().unwrap();
        let mut rd = csv::Reader::from_reader(bytes.as_slice());
        let back: CsvRow = rd.deserialize().next().unwrap().unwrap();
        prop_assert_eq!(back, row);
    }
}
