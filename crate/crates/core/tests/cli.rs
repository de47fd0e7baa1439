use std::process::Command;

use heiskern::kernels::folland_closed;
use heiskern::verify::{run_suite, Suite};
use heiskern::Point;

fn heiskern(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_heiskern"))
        .args(args)
        .env("HEISKERN_LOG", "quiet")
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn field(record: &str, key: &str) -> String {
    record
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{}=", key)))
        .unwrap_or_else(|| panic!("no {} in {}", key, record))
        .to_string()
}

#[test]
fn eval_folland_closed_example() {
    let (code, out, _) = heiskern(&["eval", "folland", "--n", "1", "--z", "1:0", "--tau", "0", "--method", "closed"]);
    assert_eq!(code, 0);
    let value: f64 = field(&out, "value").parse().unwrap();
    assert!((value - 0.636_619_772_4).abs() < 1e-10);
    assert_eq!(field(&out, "method"), "closed");
    // printed with 17 significant digits: parses back to the computed value
    let exact = folland_closed(&Point::from_real(&[1.0], &[0.0], 0.0).unwrap(), 1).unwrap();
    assert_eq!(value, exact);
}

#[test]
fn eval_folland_integral_falls_back_at_z_zero() {
    let (code, out, _) = heiskern(&["eval", "folland", "--n", "1", "--z", "0:0", "--tau", "2", "--method", "integral"]);
    assert_eq!(code, 0);
    let value: f64 = field(&out, "value").parse().unwrap();
    assert!((value - 0.318_309_886_2).abs() < 1e-10);
    assert!(out.contains("note=\"closed-form fallback (z=0)\""), "{}", out);
}

#[test]
fn eval_methods_agree() {
    let mut values = Vec::new();
    for method in ["closed", "integral", "green"] {
        let (code, out, _) = heiskern(&["eval", "folland", "--n", "2", "--z", "0.6:0.2;-0.3:0.1", "--tau", "-0.7", "--method", method]);
        assert_eq!(code, 0, "{}", out);
        values.push(field(&out, "value").parse::<f64>().unwrap());
    }
    assert!(((values[1] - values[0]) / values[0]).abs() < 1e-6);
    assert!(((values[2] - values[0]) / values[0]).abs() < 1e-6);
}

#[test]
fn eval_resolvent_prints_complex_value() {
    let (code, out, _) = heiskern(&["eval", "resolvent", "--n", "1", "--zeta", "-1:0", "--z", "1:0", "--tau", "0"]);
    assert_eq!(code, 0);
    let re: f64 = field(&out, "value_re").parse().unwrap();
    assert!((re + 0.117_807_091_871_325_39).abs() < 1e-6);
    let (code, _, err) = heiskern(&["eval", "resolvent", "--n", "1", "--zeta", "1:0", "--z", "1:0", "--tau", "0"]);
    assert_eq!(code, 2, "{}", err);
}

#[test]
fn usage_errors_exit_with_one_line() {
    for args in [
        &["frobnicate"][..],
        &["eval", "folland", "--n", "1"],
        &["eval", "folland", "--n", "1", "--z", "1:0:0", "--tau", "0"],
        &["verify", "--suite", "nonsense"],
        &["sweep", "--n", ""],
    ] {
        let (code, out, err) = heiskern(args);
        assert_eq!(code, 2, "{:?}: {}", args, err);
        assert!(out.is_empty());
        assert_eq!(err.trim_end().lines().count(), 1, "{:?}: {}", args, err);
    }
}

#[test]
fn verify_chain_is_deterministic_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let json = dir.path().join("a.json");
    let (code, out, _) = heiskern(&["verify", "--suite", "chain", "--seed", "42", "--out", a.to_str().unwrap(), "--json", json.to_str().unwrap()]);
    assert_eq!(code, 0, "{}", out);
    assert!(out.contains("0 failed, 0 errors"));
    let (code, _, _) = heiskern(&["verify", "--suite", "chain", "--seed", "42", "--out", b.to_str().unwrap()]);
    assert_eq!(code, 0);
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());

    // every number in the CSV round-trips to the report it came from
    let reports = run_suite(Suite::Chain, 42).reports;
    let mut rdr = csv::Reader::from_reader(&bytes[..]);
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, heiskern::verify::CSV_COLUMNS);
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), reports.len());
    for (row, rep) in rows.iter().zip(&reports) {
        assert_eq!(&row[0], rep.identity_id);
        assert_eq!(row[2].parse::<f64>().unwrap(), rep.lhs.re);
        assert_eq!(row[4].parse::<f64>().unwrap(), rep.rhs.re);
        assert_eq!(row[6].parse::<f64>().unwrap(), rep.abs_residual);
        assert_eq!(row[7].parse::<f64>().unwrap(), rep.rel_residual);
        assert_eq!(row[9].parse::<bool>().unwrap(), rep.pass);
    }
    let parsed: Vec<heiskern::verify::VerificationReport> = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(parsed, reports);
    // a different seed draws different parameters
    let c = dir.path().join("c.csv");
    heiskern(&["verify", "--suite", "chain", "--seed", "7", "--out", c.to_str().unwrap()]);
    assert_ne!(bytes, std::fs::read(&c).unwrap());
}

#[test]
fn sweep_writes_the_fixed_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let (code, _, err) = heiskern(&["sweep", "--n", "1,2", "--zmag", "0.5,1", "--tau", "0,-1.5", "--fast", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{}", err);
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["n", "zmag", "tau", "closed", "integral", "abs_err", "rel_err", "evaluations", "seconds"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 8);
    assert_eq!((&rows[1][0], &rows[1][1], &rows[1][2]), ("1", "5.0000000000000000e-1", "-1.5000000000000000e0"));
    for row in &rows {
        assert!(row[6].parse::<f64>().unwrap() <= 1e-6);
    }
}
