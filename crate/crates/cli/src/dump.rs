use anyhow::{bail, Result};
use qsphere::algebra::{parse_element, HopfGenerator};
use qsphere::operators::{block_norms, eig_hermitian};
use qsphere::spectral::{
    build_dirac, build_j, build_pi, calibrate_conventions, default_candidates, CALIBRATION_TOL,
};
use qsphere::{HilbertSpec, LinearOperator, QParam};
use serde::Serialize;

use crate::args::{DumpKind, Options};
use crate::output::{q_tag, say, write_table};

/// Eigenvalues closer than this (relative to their size) share a row.
const EIGEN_GROUP_TOL: f64 = 1e-9;
/// Grouped eigenvalues are written rounded to this many decimals.
const EIGEN_DECIMALS: i32 = 12;

#[derive(Debug, Serialize)]
struct SpectrumRow {
    eigenvalue: f64,
    multiplicity: usize,
}

#[derive(Debug, Serialize)]
struct BlockRow<'a> {
    operator: &'a str,
    l_row: f64,
    l_col: f64,
    norm: f64,
}

#[derive(Debug, Serialize)]
struct EntryRow {
    row: usize,
    col: usize,
    re: f64,
    im: f64,
}

fn group_eigenvalues(sorted: &[f64]) -> Vec<SpectrumRow> {
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for &x in sorted {
        match groups.last_mut() {
            Some(g) if (x - g[0]).abs() <= EIGEN_GROUP_TOL * x.abs().max(1.0) => g.push(x),
            _ => groups.push(vec![x]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let scale = 10f64.powi(EIGEN_DECIMALS);
            let mean = g.iter().sum::<f64>() / g.len() as f64;
            SpectrumRow {
                eigenvalue: (mean * scale).round() / scale,
                multiplicity: g.len(),
            }
        })
        .collect()
}

/// Resolves an operator name, or represents an algebra element.
fn named_operator(
    name: &str,
    spec: HilbertSpec,
    q: QParam,
    opts: &Options,
) -> Result<LinearOperator> {
    let hopf = match name {
        "D" => return Ok(build_dirac(spec, &opts.d_profile)),
        "gamma" => return Ok(spec.grading()),
        "Lq" => return Ok(spec.lq_operator(q)),
        "J" => {
            return Ok(LinearOperator::from_matrix(
                spec,
                build_j(spec)?.unitary_part().clone(),
            )?)
        }
        "k" => Some(HopfGenerator::K),
        "k^-1" | "k_inv" => Some(HopfGenerator::KInv),
        "e" => Some(HopfGenerator::E),
        "f" => Some(HopfGenerator::F),
        _ => None,
    };
    if let Some(h) = hopf {
        let choice = calibrate_conventions(q, &default_candidates(), CALIBRATION_TOL)?;
        let rho = qsphere::spectral::build_rho(spec, q, &choice.candidate);
        return Ok(rho.generator(h).clone());
    }
    let x = parse_element(name)?;
    Ok(build_pi(spec, q, opts.reading()).represent(&x)?)
}

/// Keeps file names portable for operator ids like `a^*` or `a*b - b^2`.
fn file_id(name: &str) -> String {
    let id: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    if id.trim_matches('_').is_empty() {
        "op".into()
    } else {
        id
    }
}

pub fn dump(opts: &Options, what: DumpKind, operator: &str) -> Result<()> {
    let spec = HilbertSpec::new(opts.lmax)?;
    if opts.q.is_empty() {
        bail!("no q given");
    }
    for &qv in &opts.q {
        let q = QParam::new(qv)?;
        let tag = q_tag(qv);
        let path = match what {
            DumpKind::Spectrum => {
                let dirac = build_dirac(spec, &opts.d_profile);
                let rows = group_eigenvalues(&eig_hermitian(dirac.matrix())?);
                write_table(
                    &opts.out,
                    &format!("dump-spectrum-{tag}.csv"),
                    &["eigenvalue", "multiplicity"],
                    rows,
                )?
            }
            DumpKind::BlockNorms => {
                let op = named_operator(operator, spec, q, opts)?;
                let rows = block_norms(&op)?.into_iter().map(|b| BlockRow {
                    operator,
                    l_row: b.l_row.value(),
                    l_col: b.l_col.value(),
                    norm: b.norm,
                });
                write_table(
                    &opts.out,
                    &format!("dump-block-norms-{}-{tag}.csv", file_id(operator)),
                    &["operator", "l_row", "l_col", "norm"],
                    rows,
                )?
            }
            DumpKind::Operator => {
                let op = named_operator(operator, spec, q, opts)?;
                let m = op.matrix();
                let n = spec.dim();
                let rows = (0..n).flat_map(|row| {
                    (0..n).map(move |col| EntryRow {
                        row,
                        col,
                        re: m[(row, col)].re,
                        im: m[(row, col)].im,
                    })
                });
                write_table(
                    &opts.out,
                    &format!("dump-operator-{}-{tag}.csv", file_id(operator)),
                    &["row", "col", "re", "im"],
                    rows,
                )?
            }
        };
        say(format_args!("wrote {}", path.display()));
    }
    Ok(())
}
