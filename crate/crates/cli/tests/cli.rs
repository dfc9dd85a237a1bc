use std::process::{Command, Output};

use psix_core::extrema::primorial_stream;
use psix_core::SieveTables;
use psix_cli::emit::round15;

fn psix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psix"))
        .args(args)
        .env_remove("PSIX_THREADS")
        .output()
        .expect("spawn psix")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_psi_emits_one_row_per_prime() {
    let o = psix(&["verify-psi", "--plimit", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "k,p_k,log_N,psi_ratio,loglog_N,threshold,margin"
    );
    assert_eq!(lines.count(), 25);
    assert!(!text.contains('\r'));
}

#[test]
fn invalid_parameters_exit_2() {
    assert_eq!(psix(&["verify-psi", "--plimit", "0"]).status.code(), Some(2));
    assert_eq!(psix(&["tail-sum", "--x", "53"]).status.code(), Some(2));
    assert_eq!(psix(&["loglog-gap", "--kmax", "0"]).status.code(), Some(2));
    assert_eq!(psix(&["progression", "--x", "30", "--q", "4", "--a", "2"]).status.code(), Some(2));
    assert_eq!(psix(&["bogus"]).status.code(), Some(2));
    assert_eq!(psix(&["--threads", "0", "constants"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_2() {
    let o = psix(&["tail-sum", "--x", "10", "--output", "/nonexistent/dir/out.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot open output"));
}

#[test]
fn tail_sum_row() {
    let o = psix(&["tail-sum", "--x", "10"]);
    assert_eq!(stdout(&o), "x,numerator,denominator\n10,3,10\n");
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("jumps.csv");
    let o = psix(&["jumps", "--kmax", "50", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        stdout(&psix(&["jumps", "--kmax", "50"]))
    );
}

#[test]
fn fixed_headers() {
    let cases: &[(&[&str], &str)] = &[
        (&["squarefree", "--x", "100"], "x,Q,main,residual,scaled_half,scaled_quarter"),
        (&["mertens", "--x", "100"], "x,sum,main,residual"),
        (&["classify", "--x", "100"], "x,above,below,x_over_logx"),
    ];
    for (args, header) in cases {
        let o = psix(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&o).lines().next().unwrap(), *header);
    }
}

#[test]
fn csv_round_trips_library_records() {
    let text = stdout(&psix(&["verify-psi", "--plimit", "10000"]));
    let t = SieveTables::build(10_000).unwrap();
    let records: Vec<_> = primorial_stream(10_000, &t).unwrap().collect();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), records.len());
    for (row, r) in rows.iter().zip(&records) {
        let f = |i: usize| row[i].parse::<f64>().unwrap();
        assert_eq!(row[0].parse::<u64>().unwrap(), r.k);
        assert_eq!(row[1].parse::<u64>().unwrap(), r.p_k);
        assert_eq!(f(2), round15(r.log_n));
        assert_eq!(f(3), round15(r.psi_ratio));
        assert_eq!(f(4), round15(r.loglog_n));
        assert_eq!(f(5), round15(r.threshold));
        assert_eq!(f(6), round15(r.margin));
    }
}

#[test]
fn json_objects_share_keys() {
    let o = psix(&["verify-psi", "--plimit", "30", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 10);
    let keys: Vec<Vec<&String>> = arr
        .iter()
        .map(|o| o.as_object().unwrap().keys().collect())
        .collect();
    assert!(keys.windows(2).all(|w| w[0] == w[1]));
    assert_eq!(arr[1]["psi_ratio"], 2.0);
}

#[test]
fn output_independent_of_thread_count() {
    for args in [
        &["extremes", "--x", "200000"][..],
        &["classify", "--x", "200000", "--step", "20000"],
        &["dist-tail", "--x", "200000", "--t", "1.5,2,2.5,3"],
        &["verify-psi", "--plimit", "100000"],
    ] {
        let one = psix(&[args, &["--threads", "1"]].concat());
        let four = Command::new(env!("CARGO_BIN_EXE_psix"))
            .args(args)
            .env("PSIX_THREADS", "4")
            .output()
            .unwrap();
        assert_eq!(one.status.code(), Some(0));
        assert_eq!(one.stdout, four.stdout, "{args:?}");
    }
}

#[test]
fn dusart_reports_below_validity_without_failing() {
    let o = psix(&["dusart", "--x", "1000,10000000"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("1000,below-validity,"));
    assert!(text.contains("10000000,holds,"));
}

#[test]
fn gap_check_violations_are_reported_not_failed() {
    let o = psix(&["gap-check", "--plimit", "200"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().nth(1).unwrap().starts_with("200,false,"));
}

#[test]
fn every_subcommand_runs() {
    let runs: &[&[&str]] = &[
        &["sieve-info", "--limit", "1000"],
        &["harmonic", "--x", "1000", "--step", "100"],
        &["mertens", "--x", "1000", "--quantity", "euler"],
        &["progression", "--x", "1000", "--q", "3", "--a", "2", "--step", "500"],
        &["oscillation", "--x", "1000", "--step", "250"],
        &["b1", "--plimit", "10000"],
        &["loglog-gap", "--kmax", "20"],
        &["classify", "--x", "50", "--records"],
        &["constants"],
    ];
    for args in runs {
        let o = psix(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).lines().count() >= 2);
    }
}
