use std::process::Command;

use fdl_cli::records::*;
use fdl_cli::{run, EXIT_FALSIFIED, EXIT_HORIZON, EXIT_OK, EXIT_USAGE};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn fdl(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["fdl"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = fdl(args);
    assert_eq!(code, EXIT_OK, "{args:?}: {err}");
    out
}

fn round_trip<T: Serialize + DeserializeOwned>(json: &str) {
    let value: T = serde_json::from_str(json).unwrap();
    let mut again = serde_json::to_string_pretty(&value).unwrap();
    again.push('\n');
    assert_eq!(again, json);
}

#[test]
fn autocorrelation_output() {
    assert_eq!(
        ok(&["cor", "10100101"]),
        "word,bits,value,s\n10100101,10000101,133,3\n"
    );
    assert!(ok(&["cor", "1"]).ends_with("\n1,1,1,0\n"));
    assert!(ok(&["cor", "--word", "1111"]).contains(",1111,15,3"));
}

#[test]
fn profile_output() {
    let out = ok(&["profile", "1000"]);
    assert!(out.contains("\nper,4\n"));
    assert!(out.contains("\nI,\n"));
    let out = ok(&["profile", "HTHTHHHTHTH"]);
    assert!(out.contains("\nI,5 3 1\n"));
    assert!(out.contains("\nT,5:0 3:0 1:2\n"));
}

#[test]
fn series_rows() {
    let out = ok(&["series", "11", "--horizon", "6"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,a,h,H,P_hit,P_surv,P_ret");
    assert_eq!(lines[1], "0,1,0,0,0,1,");
    assert_eq!(lines[3], "2,3,1,-1,0.25,0.75,");
    assert_eq!(lines[4], "3,5,1,1,0.125,0.625,0.125");
    let coarse = ok(&["series", "11", "--horizon", "6", "--precision", "2"]);
    assert!(coarse.contains("\n5,13,3,1,0.09,0.41,0.03\n"));
}

#[test]
fn compare_outputs() {
    let out = ok(&["compare", "11", "10"]);
    assert!(out.contains("crossing at N=7,11,10,7,5,2,true,1,true"));
    let out = ok(&["compare", "10", "11"]);
    assert!(out.contains(",7,"));
    let out = ok(&["compare", "1010", "0101"]);
    assert!(out.contains("identical curves (equal autocorrelation)"));
}

#[test]
fn partition_rows() {
    assert_eq!(
        ok(&["partition", "--q", "2", "--k", "4"]),
        "k,begin,end\n4,20,26\n"
    );
    let out = ok(&["partition", "--k", "2..3"]);
    assert_eq!(out, "k,begin,end\n2,7,7\n3,12,13\n");
}

#[test]
fn classes_and_towers() {
    let out = ok(&["classes", "--k", "3"]);
    assert_eq!(out.lines().count(), 4);
    assert!(out.contains("\n100,4,0,3,4,001\n"));
    let out = ok(&["towers", "--k", "3"]);
    assert!(out.contains("\n0,001,100,0,3,true\n"));
    assert!(out.contains("\n2,000,111,2,1,false\n"));
}

#[test]
fn schedule_output() {
    let out = ok(&["schedule", "--k", "2", "--horizon", "40"]);
    assert!(
        out.starts_with("start,end,word,autocorrelation\n0,5,01,10\n5,40,00,11\n\nhole,survival\n")
    );
}

#[test]
fn simulate_is_seeded() {
    let args = [
        "simulate",
        "11",
        "--trials",
        "20000",
        "--horizon",
        "30",
        "--seed",
        "4",
    ];
    let a = ok(&args);
    assert_eq!(a, ok(&args));
    assert!(a.starts_with("t,observed,exact,within\n0,"));
    let tent = ok(&[
        "simulate",
        "11",
        "--trials",
        "20000",
        "--horizon",
        "30",
        "--kernel",
        "tent",
        "--format",
        "json",
    ]);
    let record: SimulateRecord = serde_json::from_str(&tent).unwrap();
    assert!(record.consistent);
    assert_eq!(record.kernel, "tent");
}

#[test]
fn small_check_reports_known_failures() {
    let (code, out, err) = fdl(&["oracle-check", "--k", "4"]);
    assert_eq!(code, EXIT_FALSIFIED);
    assert!(err.contains("return growth"));
    assert!(out.contains("\nnormalisation,true,"));
    let (code, _, _) = fdl(&["oracle-check", "--k", "3"]);
    assert_eq!(code, EXIT_FALSIFIED);
    let (code, _, _) = fdl(&["oracle-check", "--k", "2"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn json_round_trips() {
    round_trip::<CorRecord>(&ok(&["cor", "0110", "--format", "json"]));
    round_trip::<ProfileRecord>(&ok(&["profile", "10100101", "--format", "json"]));
    round_trip::<SeriesRecord>(&ok(&[
        "series",
        "101",
        "--format",
        "json",
        "--horizon",
        "80",
    ]));
    round_trip::<CompareRecord>(&ok(&["compare", "1010", "1000", "--format", "json"]));
    round_trip::<CompareRecord>(&ok(&["compare", "110", "011", "--format", "json"]));
    round_trip::<ClassesRecord>(&ok(&["classes", "--k", "4", "--format", "json"]));
    round_trip::<PartitionRecord>(&ok(&["partition", "--k", "2..5", "--format", "json"]));
    round_trip::<TowersRecord>(&ok(&["towers", "--k", "4", "--format", "json"]));
    round_trip::<ScheduleRecord>(&ok(&["schedule", "--k", "3", "--format", "json"]));
    round_trip::<SimulateRecord>(&ok(&[
        "simulate", "10", "--trials", "500", "--format", "json",
    ]));
    let (_, check, _) = fdl(&["oracle-check", "--k", "3", "--format", "json"]);
    round_trip::<CheckRecord>(&check);
}

#[test]
fn big_integers_are_strings() {
    let json = ok(&["series", "1010", "--format", "json", "--horizon", "200"]);
    let record: SeriesRecord = serde_json::from_str(&json).unwrap();
    let last = record.rows.last().unwrap();
    assert!(last.a.len() > 40);
    assert!(json.contains(&format!("\"a\": \"{}\"", last.a)));
}

#[test]
fn thread_count_does_not_change_output() {
    for args in [
        vec!["partition", "--k", "3..6", "--format", "json"],
        vec![
            "simulate",
            "1000",
            "--trials",
            "70000",
            "--horizon",
            "60",
            "--seed",
            "8",
        ],
        vec!["oracle-check", "--k", "5"],
    ] {
        let mut one = args.clone();
        one.extend(["--threads", "1"]);
        let mut four = args.clone();
        four.extend(["--threads", "4"]);
        assert_eq!(fdl(&one).1, fdl(&four).1, "{args:?}");
    }
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("fdl-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p.csv");
    let (code, out, _) = fdl(&["partition", "--k", "4", "--output", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "k,begin,end\n4,20,26\n"
    );
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn error_exit_codes() {
    assert_eq!(
        fdl(&["compare", "11", "10", "--horizon", "8"]).0,
        EXIT_HORIZON
    );
    assert_eq!(fdl(&["cor"]).0, EXIT_USAGE);
    assert_eq!(fdl(&["nonsense"]).0, EXIT_USAGE);
    assert_eq!(fdl(&["series", "11", "--horizon", "3"]).0, EXIT_USAGE);
    assert_eq!(fdl(&["cor", "12", "--q", "2"]).0, EXIT_USAGE);
    assert_eq!(fdl(&["classes", "--k", "2..4"]).0, EXIT_USAGE);
    assert_eq!(fdl(&["partition", "--k", "0"]).0, EXIT_USAGE);
    assert_eq!(fdl(&["simulate", "11", "--trials", "0"]).0, EXIT_USAGE);
    assert_eq!(fdl(&["cor", "11", "--threads", "0"]).0, EXIT_USAGE);
    assert_eq!(fdl(&["--help"]).0, EXIT_OK);
}

#[test]
fn binary_exit_codes_and_env_threads() {
    let bin = env!("CARGO_BIN_EXE_fdl");
    let status = Command::new(bin)
        .args(["compare", "11", "10", "--horizon", "8"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_HORIZON));
    let status = Command::new(bin).args(["profile"]).status().unwrap();
    assert_eq!(status.code(), Some(EXIT_USAGE));
    let out = Command::new(bin)
        .args(["partition", "--k", "4"])
        .env("FPL_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "k,begin,end\n4,20,26\n"
    );
    let out = Command::new(bin)
        .args(["cor", "11"])
        .env("FPL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
}
