use anyhow::Result;
use qsphere::axioms::run_suite;

use crate::args::Options;
use crate::output::{generated_at, say, write_report};

/// Runs every (suite, q) pair and writes one report each. Returns whether
/// every verdict passed; configuration problems are errors and are caught
/// before any suite runs.
pub fn run(opts: &Options) -> Result<bool> {
    let suites = opts.suites()?;
    let runs: Vec<_> = opts.q.iter().map(|&q| opts.settings(q)).collect();
    for settings in &runs {
        for &suite in &suites {
            settings.validate(suite)?;
        }
    }
    let stamp = generated_at()?;
    let mut all_pass = true;
    for settings in &runs {
        for &suite in &suites {
            let mut report = run_suite(suite, settings)?;
            report.generated_at = stamp.clone();
            let path = write_report(&opts.out, &report, opts.format)?;
            say(format_args!(
                "{} {suite} q={} L_max={} -> {}",
                report.verdict,
                settings.q,
                settings.l_max,
                path.display()
            ));
            for failure in report.failures() {
                say(format_args!("    {failure}"));
            }
            all_pass &= report.verdict.is_pass();
        }
    }
    Ok(all_pass)
}
