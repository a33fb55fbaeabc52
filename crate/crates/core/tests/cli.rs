use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fschar"))
        .args(args)
        .env_remove("FSCHAR_JOBS")
        .output()
        .expect("binary runs")
}

fn run_jobs(jobs: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fschar"))
        .args(args)
        .env("FSCHAR_JOBS", jobs)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn char_a1_csv_row() {
    let o = run(&[
        "char", "--family", "A", "--rank", "1", "--m", "1", "--k", "0", "--weight", "2", "--qmax", "6", "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2, 0,0,0,0,1,1,2\n");
}

#[test]
fn char_d4_trivial_weight() {
    let o = run(&[
        "char", "--family", "D", "--rank", "4", "--target", "gamma:u2", "--weight", "0,0,0,0", "--qmax", "5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0,0,0,0, 1,0,0,0,0,0\n");
}

#[test]
fn char_chain_violation_is_zero_row() {
    let o = run(&[
        "char", "--family", "A", "--rank", "3", "--m", "2", "--weight", "2,1,0", "--qmax", "5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2,1,0, 0,0,0,0,0,0\n");
}

#[test]
fn char_json_carries_decimal_strings() {
    let o = run(&[
        "char", "--rank", "1", "--weight", "2", "--qmax", "6", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["weight"], serde_json::json!([2]));
    assert_eq!(v["coeffs"][6], "2");
}

#[test]
fn csv_and_json_agree_on_a_grid() {
    let base = [
        "char", "--family", "A", "--rank", "2", "--m", "1", "--grid", "2", "--qmax", "10",
    ];
    let csv = stdout(&run(&[&base[..], &["--format", "csv"]].concat()));
    let json = stdout(&run(&[&base[..], &["--format", "json"]].concat()));
    let from_json: Vec<String> = json
        .lines()
        .map(|l| {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            let w: Vec<String> = v["weight"].as_array().unwrap().iter().map(|x| x.to_string()).collect();
            let c: Vec<&str> = v["coeffs"]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_str().unwrap())
                .collect();
            format!("{}, {}", w.join(","), c.join(","))
        })
        .collect();
    assert_eq!(csv.lines().collect::<Vec<_>>(), from_json);
    assert!(!from_json.is_empty());
}

#[test]
fn enum_lists_basis() {
    let o = run(&[
        "enum", "--family", "A", "--rank", "1", "--k", "0", "--weight", "1", "--dmax", "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["degree"], 1);
    assert_eq!(lines[1]["degree"], 2);

    let o = run(&["enum", "--rank", "1", "--weight", "0", "--dmax", "2"]);
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn enum_character_matches_char() {
    for (fam, rank, m, w) in [("A", "3", "2", "1,2,1"), ("D", "4", "1", "2,2,1,1")] {
        let common = [
            "--family", fam, "--rank", rank, "--m", m, "--weight", w, "--qmax", "12", "--format", "csv",
        ];
        let a = stdout(&run(&[&["char"][..], &common[..]].concat()));
        let b = stdout(&run(&[&["enum", "--character"][..], &common[..]].concat()));
        assert_eq!(a, b, "{fam}{rank} {w}");
    }
}

#[test]
fn verify_suites_pass() {
    let o = run(&[
        "verify",
        "a-formula",
        "--rank",
        "2",
        "--m",
        "1",
        "--bound",
        "2",
        "--qmax",
        "15",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["suite"], "a-formula");
    assert_eq!(v["failures"], serde_json::json!([]));
    assert_eq!(v["max_discrepancy"], "0");

    let o = run(&["verify", "d4-split", "--dmax", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["failures"], serde_json::json!([]));
}

#[test]
fn corrupted_relation_exits_one() {
    let o = run(&[
        "verify",
        "a-recurrence",
        "--rank",
        "3",
        "--bound",
        "1",
        "--qmax",
        "10",
        "--corrupted",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_ne!(v["max_discrepancy"], "0");
    assert!(!v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(
        run(&["char", "--rank", "1", "--weight", "1", "--qmax", "201"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["char", "--rank", "1", "--grid", "7"]).status.code(), Some(2));
    assert_eq!(run(&["char", "--rank", "1"]).status.code(), Some(2));
    assert_eq!(
        run(&["char", "--rank", "2", "--k", "3", "--weight", "1,1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["char", "--family", "D", "--rank", "7", "--weight", "0,0,0,0,0,0,0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn output_independent_of_jobs() {
    let args = [
        "char", "--family", "D", "--rank", "4", "--target", "gamma:b3", "--grid", "2", "--qmax", "15",
    ];
    let one = run_jobs("1", &args);
    let four = run_jobs("4", &args);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);

    let args = ["verify", "d4-formula", "--bound", "2", "--qmax", "12"];
    assert_eq!(run_jobs("1", &args).stdout, run_jobs("3", &args).stdout);
}
