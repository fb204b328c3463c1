//! The individual verification suites.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::kq::{KqCriterion, KqOutcome, KqStatus};
use super::report::{FitRecord, ReportItem, VerificationReport};
use super::{
    CompressionRule, EQUIVARIANCE_TOL, NONVANISHING_TOL, RELATION_TOL, STABILITY_TOL, STRUCTURE_TOL,
};
use crate::algebra::{random_element, AlgebraElement, Generator, HopfGenerator};
use crate::error::{Error, Result};
use crate::hilbert::HilbertSpec;
use crate::operators::{anticommutator, commutator, conjugate_by, eig_hermitian, LinearOperator};
use crate::qcore::half_int;
use crate::spectral::{
    build_dirac, equivariance_residuals, j_equivariance_residuals, DiracProfile, SpectralData,
};

fn report_for(suite: &str, data: &SpectralData, rule: CompressionRule) -> VerificationReport {
    let mut r = VerificationReport::new(suite, data.q.get(), data.spec.l_max(), rule.margin);
    r.convention = Some(data.convention.id());
    r
}

const RELATION_NAMES: [&str; 4] = [
    "b a - q² a b",
    "a* b - q² b a*",
    "a* a + b² - 1",
    "q² a a* + q⁻² b² - q²",
];

/// The four defining relations on the compression for words of length 2.
pub fn relation_residuals(
    data: &SpectralData,
    rule: CompressionRule,
) -> Result<Vec<(&'static str, f64)>> {
    let cut = rule.cut(data.spec, 2)?;
    data.algebra()
        .relations()
        .iter()
        .zip(RELATION_NAMES)
        .map(|(r, name)| Ok((name, data.pi.represent(r)?.compress(cut).norm()?)))
        .collect()
}

pub fn check_relations(data: &SpectralData, rule: CompressionRule) -> Result<VerificationReport> {
    let mut report = report_for("relations", data, rule);
    for (name, value) in relation_residuals(data, rule)? {
        report.push(ReportItem::below(name, value, RELATION_TOL));
    }
    Ok(report)
}

pub fn check_equivariance(
    data: &SpectralData,
    rule: CompressionRule,
) -> Result<VerificationReport> {
    let mut report = report_for("equivariance", data, rule);
    let cut = rule.cut(data.spec, 1)?;
    let residuals = equivariance_residuals(
        &data.pi,
        &data.rho,
        &data.algebra(),
        data.convention.candidate.coproduct,
        cut,
    )?;
    for (h, g, value) in residuals {
        report.push(ReportItem::below(
            format!("({}, {})", h.name(), g),
            value,
            EQUIVARIANCE_TOL,
        ));
    }
    Ok(report)
}

pub fn check_structure_identities(data: &SpectralData) -> Result<VerificationReport> {
    let mut report = report_for("structure", data, CompressionRule::default());
    let id = LinearOperator::identity(data.spec);
    let d = &data.dirac;
    let gamma = &data.gamma;
    let j = &data.j;

    let j2 = j.square().add(&id)?.norm()?;
    report.push(ReportItem::below("J² + 1", j2, STRUCTURE_TOL));
    // γJ = -Jγ  ⇔  JγJ⁻¹ = -γ
    let gj = conjugate_by(j, gamma)?.add(gamma)?.norm()?;
    report.push(ReportItem::below("γJ + Jγ", gj, STRUCTURE_TOL));
    let dg = anticommutator(d, gamma)?.norm()?;
    report.push(ReportItem::below("Dγ + γD", dg, STRUCTURE_TOL));
    let jd = conjugate_by(j, d)?.sub(d)?.norm()?;
    report.push(ReportItem::below("JD - DJ", jd, STRUCTURE_TOL));
    for h in [HopfGenerator::K, HopfGenerator::E, HopfGenerator::F] {
        let c = commutator(d, data.rho.generator(h))?.norm()?;
        report.push(ReportItem::below(
            format!("[D, ρ({})]", h.name()),
            c,
            STRUCTURE_TOL,
        ));
    }
    let jeq = j_equivariance_residuals(
        &data.rho,
        j,
        data.convention.candidate.coproduct,
        data.convention.t_power,
    )?;
    for (h, r) in jeq {
        report.push(
            ReportItem::below(
                format!("ρ({0}) T - T ρ(S {0})*", h.name()),
                r,
                STRUCTURE_TOL,
            )
            .with_note(format!(
                "T = J·ρ(k)^{}, relative to ‖ρ({})‖",
                data.convention.t_power,
                h.name()
            )),
        );
    }
    Ok(report)
}

/// `[π(x), J π(y) J⁻¹]`.
pub fn commutant_operator(
    data: &SpectralData,
    x: &AlgebraElement,
    y: &AlgebraElement,
) -> Result<LinearOperator> {
    let px = data.pi.represent(x)?;
    let jy = conjugate_by(&data.j, &data.pi.represent(y)?)?;
    commutator(&px, &jy)
}

/// `[J π(x) J⁻¹, [D, π(y)]]`.
pub fn first_order_operator(
    data: &SpectralData,
    x: &AlgebraElement,
    y: &AlgebraElement,
) -> Result<LinearOperator> {
    let jx = conjugate_by(&data.j, &data.pi.represent(x)?)?;
    let dy = commutator(&data.dirac, &data.pi.represent(y)?)?;
    commutator(&jx, &dy)
}

/// All nine ordered pairs of generators, labelled `(x, y)`.
pub fn generator_pairs() -> Vec<(String, AlgebraElement, AlgebraElement)> {
    let mut out = Vec::new();
    for x in Generator::ALL {
        for y in Generator::ALL {
            out.push((
                format!("({x}, {y})"),
                AlgebraElement::generator(x),
                AlgebraElement::generator(y),
            ));
        }
    }
    out
}

/// `count` reproducible pairs of random elements, each with up to two terms
/// of word length at most three.
pub fn random_pairs(seed: u64, count: usize) -> Vec<(String, AlgebraElement, AlgebraElement)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let x = random_element(&mut rng, 2, 3);
            let y = random_element(&mut rng, 2, 3);
            (format!("random #{k}"), x, y)
        })
        .collect()
}

/// Largest compressed `‖[π(x), Jπ(y)J⁻¹]‖` over generator pairs, with its label.
pub fn commutant_failure_norm(data: &SpectralData, rule: CompressionRule) -> Result<(String, f64)> {
    let cut = rule.cut(data.spec, 2)?;
    let norms = generator_pairs()
        .into_par_iter()
        .map(|(label, x, y)| {
            Ok((
                label,
                commutant_operator(data, &x, &y)?.compress(cut).norm()?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(norms
        .into_iter()
        .fold((String::new(), f64::NEG_INFINITY), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        }))
}

pub fn check_commutant_failure(
    ladder: &[SpectralData],
    rule: CompressionRule,
) -> Result<VerificationReport> {
    let first = ladder.first().ok_or_else(|| {
        Error::InvalidConfig("commutant suite needs at least one truncation".into())
    })?;
    let mut report = report_for("commutant-failure", first, rule);
    let mut norms = Vec::new();
    for data in ladder {
        let (label, value) = commutant_failure_norm(data, rule)?;
        report.push(
            ReportItem::at_least(
                format!("max ‖[π(x), Jπ(y)J⁻¹]‖ at L = {}", data.spec.l_max()),
                value,
                NONVANISHING_TOL,
            )
            .with_note(format!("attained at {label}")),
        );
        norms.push((data.spec.l_max(), value));
    }
    for w in norms.windows(2) {
        report.push(ReportItem::below(
            format!("stability {} → {}", w[0].0, w[1].0),
            (w[1].1 - w[0].1).abs(),
            STABILITY_TOL,
        ));
    }
    Ok(report)
}

/// Evaluates the criterion for each pair in parallel; order is preserved.
/// Outcomes may be [`KqStatus::Insufficient`] when a pair's compression
/// leaves too few levels.
pub fn decay_outcomes(
    data: &SpectralData,
    rule: CompressionRule,
    criterion: &KqCriterion,
    pairs: &[(String, AlgebraElement, AlgebraElement)],
    build: fn(&SpectralData, &AlgebraElement, &AlgebraElement) -> Result<LinearOperator>,
) -> Result<Vec<(String, KqOutcome)>> {
    pairs
        .par_iter()
        .map(|(label, x, y)| {
            let w = (x.word_length() + y.word_length()) as u32;
            let cut = rule.cut(data.spec, w)?;
            let op = build(data, x, y)?.compress(cut);
            Ok((label.clone(), criterion.evaluate(&op, data.q)?))
        })
        .collect()
}

/// Generator pairs must have enough levels; random pairs that do not are
/// recorded as insufficient and counted in a report item.
fn decay_report(
    suite: &str,
    data: &SpectralData,
    rule: CompressionRule,
    criterion: &KqCriterion,
    seed: u64,
    random: usize,
    build: fn(&SpectralData, &AlgebraElement, &AlgebraElement) -> Result<LinearOperator>,
) -> Result<VerificationReport> {
    let mut report = report_for(suite, data, rule);
    for (label, outcome) in decay_outcomes(data, rule, criterion, &generator_pairs(), build)? {
        report.push_fit(FitRecord::from_outcome(label, &outcome.require_samples()?));
    }
    if random > 0 {
        let outcomes = decay_outcomes(data, rule, criterion, &random_pairs(seed, random), build)?;
        let skipped: Vec<&str> = outcomes
            .iter()
            .filter(|(_, o)| o.status == KqStatus::Insufficient)
            .map(|(label, _)| label.as_str())
            .collect();
        let evaluated = outcomes.len() - skipped.len();
        let mut item =
            ReportItem::at_least("random pairs with enough levels", evaluated as f64, 1.0);
        if !skipped.is_empty() {
            item = item.with_note(format!(
                "too few levels after compression: {}",
                skipped.join(", ")
            ));
        }
        report.push(item);
        for (label, outcome) in outcomes {
            report.push_fit(FitRecord::from_outcome(label, &outcome));
        }
    }
    Ok(report)
}

/// `[π(x), Jπ(y)J⁻¹] ∈ K_q` for generator pairs and `random` seeded pairs.
pub fn check_commutant_mod_kq(
    data: &SpectralData,
    rule: CompressionRule,
    criterion: &KqCriterion,
    seed: u64,
    random: usize,
) -> Result<VerificationReport> {
    decay_report(
        "commutant-mod-kq",
        data,
        rule,
        criterion,
        seed,
        random,
        commutant_operator,
    )
}

/// `[Jπ(x)J⁻¹, [D, π(y)]] ∈ K_q` for generator pairs and `random` seeded pairs.
pub fn check_first_order_mod_kq(
    data: &SpectralData,
    rule: CompressionRule,
    criterion: &KqCriterion,
    seed: u64,
    random: usize,
) -> Result<VerificationReport> {
    decay_report(
        "first-order-mod-kq",
        data,
        rule,
        criterion,
        seed,
        random,
        first_order_operator,
    )
}

/// Compressed `‖[D, π(x)]‖` for `x = a, a*, b` at one truncation.
pub fn dirac_commutator_norms(
    data: &SpectralData,
    rule: CompressionRule,
) -> Result<Vec<(Generator, f64)>> {
    let cut = rule.cut(data.spec, 1)?;
    Generator::ALL
        .par_iter()
        .map(|&g| {
            Ok((
                g,
                commutator(&data.dirac, data.pi.generator(g))?
                    .compress(cut)
                    .norm()?,
            ))
        })
        .collect()
}

/// Largest change of `‖[D, π(x)]‖` between successive truncations, per generator.
pub fn boundedness_drift(
    ladder: &[SpectralData],
    rule: CompressionRule,
) -> Result<Vec<(Generator, Vec<f64>)>> {
    let per_size = ladder
        .iter()
        .map(|d| dirac_commutator_norms(d, rule))
        .collect::<Result<Vec<_>>>()?;
    Ok(Generator::ALL
        .iter()
        .enumerate()
        .map(|(i, &g)| (g, per_size.iter().map(|row| row[i].1).collect()))
        .collect())
}

pub fn check_bounded_commutators(
    ladder: &[SpectralData],
    rule: CompressionRule,
) -> Result<VerificationReport> {
    if ladder.len() < 3 {
        return Err(Error::InvalidConfig(
            "boundedness needs at least three truncation sizes".into(),
        ));
    }
    let mut report = report_for("bounded-commutators", &ladder[0], rule);
    let sizes: Vec<String> = ladder.iter().map(|d| d.spec.l_max().to_string()).collect();
    for (g, norms) in boundedness_drift(ladder, rule)? {
        let listing: Vec<String> = norms.iter().map(|n| format!("{n:.12}")).collect();
        for (k, w) in norms.windows(2).enumerate() {
            report.push(
                ReportItem::below(
                    format!("‖[D, π({g})]‖ change {} → {}", sizes[k], sizes[k + 1]),
                    (w[1] - w[0]).abs(),
                    STABILITY_TOL,
                )
                .with_note(format!("norms {}", listing.join(", "))),
            );
        }
    }
    let unit = commutator(&ladder[0].dirac, &LinearOperator::identity(ladder[0].spec))?.norm()?;
    report.push(ReportItem::at_most("‖[D, 1]‖", unit, 0.0));
    Ok(report)
}

/// Lower end of the counting-function fit window.
pub const DEFAULT_SPECTRUM_K: u32 = 20;
/// Upper end of the counting-function fit window.
pub const SPECTRUM_LAMBDA_MAX: u32 = 200;

/// `N(Λ) = #{eigenvalues of D with |λ| ≤ Λ}`, counted with multiplicity
/// `2(2l + 1)` per level, for levels up to `level_cap`.
pub fn counting_function(profile: &DiracProfile, lambda: f64, level_cap: usize) -> u64 {
    (0..level_cap)
        .map(|k| half_int(2 * k as i32 + 1))
        .filter(|&l| profile.eval(l).abs() <= lambda)
        .map(|l| 2 * (l.twice() as u64 + 1))
        .sum()
}

/// Slope of `ln N(Λ)` against `ln Λ` over integer `Λ ∈ [lo, hi]`.
pub fn counting_dimension(profile: &DiracProfile, lo: u32, hi: u32) -> f64 {
    let cap = 4 * hi as usize + 8;
    let pts: Vec<(f64, f64)> = (lo.max(1)..=hi)
        .filter_map(|lam| {
            let n = counting_function(profile, f64::from(lam), cap);
            (n > 0).then(|| (f64::from(lam).ln(), (n as f64).ln()))
        })
        .collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return 0.0;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

pub fn check_spectrum_and_dimension(
    profile: &DiracProfile,
    k: u32,
    q: f64,
) -> Result<VerificationReport> {
    if k < DEFAULT_SPECTRUM_K {
        return Err(Error::InvalidConfig(format!(
            "spectrum fit window must start at K >= {DEFAULT_SPECTRUM_K}, got {k}"
        )));
    }
    let small = HilbertSpec::new(half_int(3))?;
    let mut report = VerificationReport::new("spectrum", q, small.l_max(), 0);
    let d = build_dirac(small, profile);

    // |D| at L = 3/2 against |d_l| with multiplicity 2(2l+1)
    let mut got: Vec<f64> = eig_hermitian(d.matrix())?.iter().map(|x| x.abs()).collect();
    got.sort_by(f64::total_cmp);
    let mut expect: Vec<f64> = small
        .levels()
        .iter()
        .flat_map(|&l| std::iter::repeat_n(profile.eval(l).abs(), 2 * (l.twice() as usize + 1)))
        .collect();
    expect.sort_by(f64::total_cmp);
    let deviation = got
        .iter()
        .zip(&expect)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let listing: Vec<String> = got.iter().map(|x| format!("{x:.6}")).collect();
    report.push(
        ReportItem::below(
            "|D| spectrum at L = 3/2 vs 4k multiplicities",
            deviation,
            1e-10,
        )
        .with_note(format!("|D| = {{{}}}", listing.join(", "))),
    );

    let n10 = counting_function(profile, 10.0, 64);
    report.push(
        ReportItem::at_most("|N(10) - 2·10·11|", (n10 as f64 - 220.0).abs(), 0.0)
            .with_note(format!("N(10) = {n10}")),
    );

    let dim = counting_dimension(profile, k, SPECTRUM_LAMBDA_MAX);
    report.push(
        ReportItem::at_most("|d - 2|", (dim - 2.0).abs(), 0.05).with_note(format!(
            "d = {dim:.6} from Λ ∈ [{k}, {SPECTRUM_LAMBDA_MAX}]"
        )),
    );

    // (1 + D²)^{-1/2} on the levels with |d_l| ≤ Λ_max must fall to zero
    let resolvent: Vec<f64> = (0..4 * SPECTRUM_LAMBDA_MAX as i32)
        .map(|k| profile.eval(half_int(2 * k + 1)))
        .map(|x| (1.0 + x * x).powf(-0.5))
        .collect();
    let tail = resolvent.iter().rev().take(8).copied().fold(0.0, f64::max);
    report.push(
        ReportItem::below("tail of (1 + D²)^(-1/2)", tail, 1e-2)
            .with_note(format!("over the last 8 of {} levels", resolvent.len())),
    );
    report.echo("d_profile", profile);
    report.echo("spectrum_k", k);
    Ok(report)
}

/// Which verdict a profile is expected to produce in the uniqueness scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCase {
    pub profile: DiracProfile,
    /// `true` for profiles equivalent to the default up to rescaling and an
    /// odd constant.
    pub admissible: bool,
}

/// Default, three affine-equivalent profiles and two violators.
pub fn default_profile_cases() -> Vec<ProfileCase> {
    let case = |p: DiracProfile, admissible| ProfileCase {
        profile: p,
        admissible,
    };
    vec![
        case(DiracProfile::standard(), true),
        case(DiracProfile::Polynomial(vec![0.0, 5.0]), true),
        case(DiracProfile::Polynomial(vec![-2.0, 5.0]), true),
        case(DiracProfile::Polynomial(vec![3.0, -2.0]), true),
        case(DiracProfile::square(), false),
        case(DiracProfile::Alternating, false),
    ]
}

/// First-order decay and boundedness outcomes for one profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileOutcome {
    pub decay_pass: bool,
    pub worst_rate: Option<f64>,
    pub worst_residual: f64,
    pub bounded_pass: bool,
    pub max_drift: f64,
}

/// Runs the first-order generator-pair decay check on the largest truncation of
/// the ladder and the boundedness check over the whole ladder.
pub fn profile_outcome(
    ladder: &[SpectralData],
    rule: CompressionRule,
    criterion: &KqCriterion,
) -> Result<ProfileOutcome> {
    let top = ladder
        .last()
        .ok_or_else(|| Error::InvalidConfig("empty truncation ladder".into()))?;
    let outcomes = decay_outcomes(
        top,
        rule,
        criterion,
        &generator_pairs(),
        first_order_operator,
    )?
    .into_iter()
    .map(|(label, o)| Ok((label, o.require_samples()?)))
    .collect::<Result<Vec<_>>>()?;
    let decay_pass = outcomes.iter().all(|(_, o)| o.passes());
    let worst_rate = outcomes
        .iter()
        .filter_map(|(_, o)| o.worst_rate())
        .fold(None, |acc: Option<f64>, r| {
            Some(acc.map_or(r, |a| a.max(r)))
        });
    let worst_residual = outcomes
        .iter()
        .map(|(_, o)| o.max_residual)
        .fold(0.0, f64::max);
    let drift = boundedness_drift(ladder, rule)?;
    let max_drift = drift
        .iter()
        .flat_map(|(_, norms)| norms.windows(2).map(|w| (w[1] - w[0]).abs()))
        .fold(0.0, f64::max);
    Ok(ProfileOutcome {
        decay_pass,
        worst_rate,
        worst_residual,
        bounded_pass: max_drift < STABILITY_TOL,
        max_drift,
    })
}

/// `ladder_for(profile)` builds the truncation ladder for one profile.
pub fn uniqueness_scan(
    cases: &[ProfileCase],
    rule: CompressionRule,
    criterion: &KqCriterion,
    ladder_for: impl Fn(&DiracProfile) -> Result<Vec<SpectralData>>,
) -> Result<VerificationReport> {
    let mut report: Option<VerificationReport> = None;
    let admissible = cases.iter().filter(|c| c.admissible).count();
    if admissible < 2 || cases.len() - admissible < 2 {
        return Err(Error::InvalidConfig(
            "uniqueness scan needs the default, an affine variant and at least two violators"
                .into(),
        ));
    }
    for case in cases {
        let ladder = ladder_for(&case.profile)?;
        let r = report.get_or_insert_with(|| {
            let top = ladder.last().expect("non-empty ladder");
            let mut r = report_for("uniqueness", top, rule);
            r.l_max = top.spec.l_max().to_string();
            r
        });
        let out = profile_outcome(&ladder, rule, criterion)?;
        let failed = u32::from(!out.decay_pass) + u32::from(!out.bounded_pass);
        let note = format!(
            "first-order decay {} (worst rate {}, threshold {:.4}, max residual {:.3}); boundedness {} (max drift {:.3e})",
            if out.decay_pass { "pass" } else { "fail" },
            out.worst_rate.map_or("-".into(), |x| format!("{x:.4}")),
            criterion.rate_threshold(ladder[0].q),
            out.worst_residual,
            if out.bounded_pass { "pass" } else { "fail" },
            out.max_drift,
        );
        let item = if case.admissible {
            ReportItem::at_most(
                format!("criteria failed by {} (admissible)", case.profile),
                f64::from(failed),
                0.0,
            )
        } else {
            ReportItem::at_least(
                format!("criteria failed by {} (violator)", case.profile),
                f64::from(failed),
                1.0,
            )
        };
        r.push(item.with_note(note));
    }
    report.ok_or_else(|| Error::InvalidConfig("empty profile set".into()))
}

/// `‖π(x)π(y) - π(normal_form(xy))‖` on the compression for the words' total length.
pub fn faithfulness_residual(
    data: &SpectralData,
    rule: CompressionRule,
    x: &AlgebraElement,
    y: &AlgebraElement,
) -> Result<f64> {
    let w = (x.word_length() + y.word_length()) as u32;
    let cut = rule.cut(data.spec, w)?;
    let lhs = data.pi.represent(x)?.compose(&data.pi.represent(y)?)?;
    let rhs = data.pi.represent(&data.algebra().multiply(x, y))?;
    lhs.sub(&rhs)?.compress(cut).norm()
}
