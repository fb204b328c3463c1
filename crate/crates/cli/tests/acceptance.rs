//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Tolerances are pinned here, not taken from the library.

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use qsphere::axioms::{
    check_bounded_commutators, check_commutant_failure, check_commutant_mod_kq, check_equivariance,
    check_first_order_mod_kq, check_spectrum_and_dimension, check_structure_identities,
    profile_outcome, relation_residuals, CompressionRule, KqCriterion, KqStatus,
    VerificationReport,
};
use qsphere::qcore::half_int;
use qsphere::spectral::{
    calibrate_conventions, default_candidates, ConventionChoice, DiracProfile, IndexReading,
    SpectralData, CALIBRATION_TOL,
};
use qsphere::{HilbertSpec, QParam};

const QS: [f64; 3] = [0.3, 0.5, 0.8];
const RELATIONS_TOL: f64 = 1e-10;
const EQUIVARIANCE_TOL: f64 = 1e-9;
const STRUCTURE_TOL: f64 = 1e-12;
const NONVANISHING_TOL: f64 = 1e-3;
const STABILITY_TOL: f64 = 1e-6;
const KQ_RATE_FACTOR: f64 = 0.9;
const KQ_MAX_RESIDUAL: f64 = 0.5;
const SPECTRUM_TOL: f64 = 1e-10;
const DIMENSION_TOL: f64 = 0.05;
/// Recorded on the first verified run at q = 0.5.
const COMMUTANT_BASELINE: f64 = 0.303666711599;
const BASELINE_TOL: f64 = 1e-9;

type Outcome = Result<(bool, String), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn q(v: f64) -> QParam {
    QParam::new(v).unwrap()
}

fn convention(qv: f64) -> Result<ConventionChoice, String> {
    calibrate_conventions(q(qv), &default_candidates(), CALIBRATION_TOL).map_err(|e| e.to_string())
}

fn data(qv: f64, l2: i32, profile: &DiracProfile, choice: &ConventionChoice) -> SpectralData {
    SpectralData::new(
        HilbertSpec::new(half_int(l2)).unwrap(),
        q(qv),
        profile.clone(),
        IndexReading::Corrected,
        choice.clone(),
    )
    .unwrap()
}

fn ladder(qv: f64, profile: &DiracProfile, choice: &ConventionChoice) -> Vec<SpectralData> {
    [21, 31, 41]
        .iter()
        .map(|&l2| data(qv, l2, profile, choice))
        .collect()
}

fn max_item(report: &VerificationReport) -> f64 {
    report.items.iter().map(|i| i.value).fold(0.0, f64::max)
}

fn item<'a>(report: &'a VerificationReport, prefix: &str) -> &'a qsphere::axioms::ReportItem {
    report
        .items
        .iter()
        .find(|i| i.name.starts_with(prefix))
        .expect("item present")
}

fn relations() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for qv in QS {
        let d = data(qv, 21, &DiracProfile::standard(), &convention(qv)?);
        for (_, r) in
            relation_residuals(&d, CompressionRule::default()).map_err(|e| e.to_string())?
        {
            worst = worst.max(r);
        }
    }
    let elapsed = start.elapsed();
    Ok((
        worst < RELATIONS_TOL && elapsed < Duration::from_secs(10),
        format!("max residual {worst:.3e} < {RELATIONS_TOL:e}, {elapsed:.2?} < 10s"),
    ))
}

fn equivariance() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut ids = Vec::new();
    for qv in QS {
        let choice = convention(qv)?;
        ids.push(choice.candidate.id());
        let report = check_equivariance(
            &data(qv, 21, &DiracProfile::standard(), &choice),
            CompressionRule::default(),
        )
        .map_err(|e| e.to_string())?;
        if report.items.len() != 9 {
            return Ok((
                false,
                format!("{} residuals instead of 9", report.items.len()),
            ));
        }
        worst = worst.max(max_item(&report));
    }
    ids.dedup();
    Ok((
        worst < EQUIVARIANCE_TOL,
        format!(
            "max residual {worst:.3e} < {EQUIVARIANCE_TOL:e}, unique convention {}",
            ids.join(" | ")
        ),
    ))
}

fn structure() -> Outcome {
    let mut worst: f64 = 0.0;
    for qv in QS {
        let d = data(qv, 21, &DiracProfile::standard(), &convention(qv)?);
        worst = worst.max(max_item(
            &check_structure_identities(&d).map_err(|e| e.to_string())?,
        ));
    }
    Ok((
        worst < STRUCTURE_TOL,
        format!("max residual {worst:.3e} < {STRUCTURE_TOL:e}"),
    ))
}

fn commutant_failure() -> Outcome {
    let report = check_commutant_failure(
        &ladder(0.5, &DiracProfile::standard(), &convention(0.5)?),
        CompressionRule::default(),
    )
    .map_err(|e| e.to_string())?;
    let norms: Vec<f64> = report
        .items
        .iter()
        .filter(|i| i.name.starts_with("max"))
        .map(|i| i.value)
        .collect();
    let drift = report
        .items
        .iter()
        .filter(|i| i.name.starts_with("stability"))
        .map(|i| i.value)
        .fold(0.0, f64::max);
    let smallest = norms.iter().copied().fold(f64::INFINITY, f64::min);
    let off_baseline = norms
        .iter()
        .map(|n| (n - COMMUTANT_BASELINE).abs())
        .fold(0.0, f64::max);
    Ok((
        norms.len() == 3 && smallest >= NONVANISHING_TOL && drift < STABILITY_TOL && off_baseline < BASELINE_TOL,
        format!(
            "norm {smallest:.12} >= {NONVANISHING_TOL:e}, drift {drift:.1e} < {STABILITY_TOL:e}, baseline {COMMUTANT_BASELINE} within {BASELINE_TOL:e}"
        ),
    ))
}

fn decay() -> Outcome {
    let start = Instant::now();
    let criterion = KqCriterion {
        rate_factor: KQ_RATE_FACTOR,
        max_residual: KQ_MAX_RESIDUAL,
        ..KqCriterion::default()
    };
    let d = data(0.5, 41, &DiracProfile::standard(), &convention(0.5)?);
    let rule = CompressionRule::default();
    let mut parts = Vec::new();
    let mut pass = true;
    for report in [
        check_commutant_mod_kq(&d, rule, &criterion, 0, 50).map_err(|e| e.to_string())?,
        check_first_order_mod_kq(&d, rule, &criterion, 0, 50).map_err(|e| e.to_string())?,
    ] {
        let passing = report
            .fits
            .iter()
            .filter(|f| f.status == KqStatus::Pass)
            .count();
        let worst_rate = report
            .fits
            .iter()
            .filter_map(|f| f.rate)
            .fold(f64::NEG_INFINITY, f64::max);
        let worst_residual = report
            .fits
            .iter()
            .filter_map(|f| f.residual)
            .fold(0.0, f64::max);
        pass &= report.verdict.is_pass() && report.fits.len() == 59 && passing == 59;
        parts.push(format!(
            "{} {passing}/59 (worst rate {worst_rate:.3} <= {:.3}, residual {worst_residual:.3} < {KQ_MAX_RESIDUAL})",
            report.suite,
            criterion.rate_threshold(q(0.5))
        ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(300);
    Ok((pass, format!("{}, {elapsed:.1?} < 300s", parts.join("; "))))
}

fn uniqueness() -> Outcome {
    let choice = convention(0.5)?;
    let rule = CompressionRule::default();
    let criterion = KqCriterion::default();
    let square = profile_outcome(
        &ladder(0.5, &DiracProfile::square(), &choice),
        rule,
        &criterion,
    )
    .map_err(|e| e.to_string())?;
    let affine = DiracProfile::Polynomial(vec![0.0, 5.0]);
    let scaled = profile_outcome(&ladder(0.5, &affine, &choice), rule, &criterion)
        .map_err(|e| e.to_string())?;
    Ok((
        !square.decay_pass && !square.bounded_pass && scaled.decay_pass && scaled.bounded_pass,
        format!(
            "square: decay {}, bounded {} (drift {:.2e}); 5(l+1/2): decay {}, bounded {} (drift {:.2e})",
            square.decay_pass, square.bounded_pass, square.max_drift, scaled.decay_pass, scaled.bounded_pass, scaled.max_drift
        ),
    ))
}

fn boundedness() -> Outcome {
    let mut worst: f64 = 0.0;
    for qv in QS {
        let report = check_bounded_commutators(
            &ladder(qv, &DiracProfile::standard(), &convention(qv)?),
            CompressionRule::default(),
        )
        .map_err(|e| e.to_string())?;
        worst = worst.max(
            report
                .items
                .iter()
                .filter(|i| i.name.contains("change"))
                .map(|i| i.value)
                .fold(0.0, f64::max),
        );
    }
    Ok((
        worst < STABILITY_TOL,
        format!("max change {worst:.2e} < {STABILITY_TOL:e} over 21/2, 31/2, 41/2"),
    ))
}

fn spectrum() -> Outcome {
    let start = Instant::now();
    let report = check_spectrum_and_dimension(&DiracProfile::standard(), 20, 0.5)
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let exact = item(&report, "|D| spectrum").value;
    let dim = item(&report, "|d - 2|").value;
    Ok((
        exact < SPECTRUM_TOL && dim <= DIMENSION_TOL && elapsed < Duration::from_secs(1),
        format!("|D| at 3/2 off by {exact:.1e} < {SPECTRUM_TOL:e}, |d - 2| = {dim:.4} <= {DIMENSION_TOL}, {elapsed:.2?} < 1s"),
    ))
}

fn cli(out: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qsphere"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("SOURCE_DATE_EPOCH")
        .output()
        .expect("binary runs")
}

fn typo_sentinel() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = cli(
        dir.path(),
        &[
            "--q",
            "0.5",
            "--paper-literal-index",
            "--suite",
            "relations",
        ],
    );
    let text =
        fs::read_to_string(dir.path().join("relations-q0.5.json")).map_err(|e| e.to_string())?;
    let report: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    Ok((
        out.status.code() == Some(1) && report["verdict"] == "FAIL",
        format!(
            "exit {:?}, verdict {}",
            out.status.code(),
            report["verdict"]
        ),
    ))
}

fn determinism() -> Outcome {
    let args = [
        "--q", "0.5", "--lmax", "21/2", "--suite", "all", "--format", "json",
    ];
    let dirs = [
        tempfile::tempdir().map_err(|e| e.to_string())?,
        tempfile::tempdir().map_err(|e| e.to_string())?,
    ];
    for d in &dirs {
        let out = cli(d.path(), &args);
        if out.status.code() != Some(0) {
            return Ok((false, format!("run exited {:?}", out.status.code())));
        }
    }
    let mut names: Vec<_> = fs::read_dir(dirs[0].path())
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    let identical = names
        .iter()
        .all(|n| fs::read(dirs[0].path().join(n)).ok() == fs::read(dirs[1].path().join(n)).ok());
    Ok((
        identical && names.len() == 9,
        format!("{} reports, byte-identical: {identical}", names.len()),
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("algebra relations", relations),
        ("equivariance and unique calibration", equivariance),
        ("structure identities", structure),
        ("commutant failure is stable", commutant_failure),
        ("commutators decay modulo K_q", decay),
        ("uniqueness contrapositive", uniqueness),
        ("bounded commutators", boundedness),
        ("spectrum and dimension", spectrum),
        ("literal index fails relations", typo_sentinel),
        ("deterministic reports", determinism),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let (pass, detail) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!(
            "acceptance {:>2} {} {name}: {detail}",
            n + 1,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
