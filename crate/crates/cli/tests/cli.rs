use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qsphere(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsphere"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .env_remove("QSPHERE_OUT")
        .env_remove("SOURCE_DATE_EPOCH")
        .output()
        .expect("binary runs")
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/report.schema.json");
    let schema: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(str::to_string)
        .collect()
}

#[test]
fn passing_run_writes_valid_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsphere(
        dir.path(),
        &[
            "--q",
            "0.5,0.8",
            "--lmax",
            "21/2",
            "--suite",
            "relations,structure,spectrum",
            "--format",
            "json",
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let validator = schema();
    let mut count = 0;
    for entry in fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        let report: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        let errors: Vec<String> = validator
            .iter_errors(&report)
            .map(|e| e.to_string())
            .collect();
        assert!(errors.is_empty(), "{}: {errors:?}", path.display());
        assert_eq!(report["verdict"], "PASS");
        assert_eq!(report["config"]["seed"], "0");
        count += 1;
    }
    assert_eq!(count, 6);
    let relations: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("relations-q0.5.json")).unwrap())
            .unwrap();
    assert_eq!(
        relations["convention"],
        "coproduct=k-right;antipode=k-right;ladder=e-lowers;twist=0;T=J·k^1"
    );
    assert!(relations["generated_at"].is_null());
}

#[test]
fn schema_rejects_malformed_reports() {
    let validator = schema();
    let bad = serde_json::json!({"schema_version": 2, "suite": "relations"});
    assert!(!validator.is_valid(&bad));
}

#[test]
fn classical_q_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsphere(dir.path(), &["--q", "1.0", "--suite", "commutant-mod-kq"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("decay suites require q < 1"));
    assert!(!dir.path().join("commutant-mod-kq-q1.json").exists());
}

#[test]
fn classical_q_is_fine_for_the_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsphere(dir.path(), &["--q", "1", "--suite", "spectrum"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("spectrum-q1.json").exists());
}

#[test]
fn literal_index_fails_relations() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsphere(
        dir.path(),
        &[
            "--q",
            "0.5",
            "--paper-literal-index",
            "--suite",
            "relations",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("FAIL relations"), "{stdout}");
}

#[test]
fn empty_selection_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsphere(dir.path(), &["--suite", ""]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn bad_arguments_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["--lmax", "11"][..],
        &["--lmax", "21/4"],
        &["--suite", "nonsense"],
        &["--d-profile", "cubic"],
        &["--q", "1.5", "--suite", "relations"],
        &["--q", "abc"],
        &["--margin", "0", "--suite", "relations"],
        &[
            "--q",
            "0.5",
            "--lmax",
            "13/2",
            "--suite",
            "first-order-mod-kq",
        ],
        &["--format", "xml"],
    ] {
        let out = qsphere(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn csv_reports_have_frozen_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsphere(
        dir.path(),
        &[
            "--q",
            "0.5",
            "--suite",
            "relations,commutant-mod-kq",
            "--format",
            "csv",
            "--random-pairs",
            "3",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let header = "suite,q,l_max,convention,verdict,kind,name,value,relation,tolerance,pass,band,rate,log_prefactor,residual,rate_threshold,residual_threshold,samples,status,note";
    let rel = lines(&dir.path().join("relations-q0.5.csv"));
    assert_eq!(rel[0], header);
    assert_eq!(rel.len(), 5);
    assert!(rel[1].starts_with("relations,0.5,21/2,"));
    let kq = lines(&dir.path().join("commutant-mod-kq-q0.5.csv"));
    assert_eq!(kq[0], header);
    assert_eq!(kq.iter().filter(|l| l.contains(",fit,")).count(), 12);
}

#[test]
fn out_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_qsphere"))
        .args(["--q", "0.5", "--suite", "spectrum"])
        .env("QSPHERE_OUT", dir.path())
        .env("SOURCE_DATE_EPOCH", "0")
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("spectrum-q0.5.json")).unwrap())
            .unwrap();
    assert_eq!(report["generated_at"], "1970-01-01T00:00:00Z");
}

#[test]
fn dump_spectrum_at_smallest_truncation() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsphere(
        dir.path(),
        &["--q", "0.5", "--lmax", "3/2", "dump", "spectrum"],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        lines(&dir.path().join("dump-spectrum-q0.5.csv")),
        [
            "eigenvalue,multiplicity",
            "-2.0,4",
            "-1.0,2",
            "1.0,2",
            "2.0,4"
        ]
    );
}

#[test]
fn dump_block_norms_of_lq() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsphere(
        dir.path(),
        &[
            "--q",
            "0.5",
            "--lmax",
            "7/2",
            "dump",
            "block-norms",
            "--operator",
            "Lq",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let rows = lines(&dir.path().join("dump-block-norms-Lq-q0.5.csv"));
    assert_eq!(rows[0], "operator,l_row,l_col,norm");
    assert_eq!(rows.len(), 1 + 16);
    for row in &rows[1..] {
        let f: Vec<&str> = row.split(',').collect();
        let (lr, lc, norm): (f64, f64, f64) = (
            f[1].parse().unwrap(),
            f[2].parse().unwrap(),
            f[3].parse().unwrap(),
        );
        let expect = if lr == lc { 0.5f64.powf(lr) } else { 0.0 };
        assert!((norm - expect).abs() < 1e-14, "{row}");
    }
}

#[test]
fn dump_operator_writes_every_entry() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsphere(
        dir.path(),
        &[
            "--q",
            "0.5",
            "--lmax",
            "3/2",
            "dump",
            "operator",
            "--operator",
            "a*b - b*a",
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = lines(&dir.path().join("dump-operator-a_b___b_a-q0.5.csv"));
    assert_eq!(rows[0], "row,col,re,im");
    assert_eq!(rows.len(), 1 + 144);
    let bad = qsphere(
        dir.path(),
        &["--q", "0.5", "dump", "operator", "--operator", "a +"],
    );
    assert_eq!(bad.status.code(), Some(2));
}
