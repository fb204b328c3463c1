use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qsphere::axioms::{RunSettings, SuiteId};
use qsphere::spectral::{DiracProfile, IndexReading};
use qsphere::HalfInt;

#[derive(Debug, Parser)]
#[command(
    name = "qsphere",
    version,
    about = "Verification suites for the truncated spectral geometry of the equatorial quantum sphere"
)]
pub struct Cli {
    #[command(flatten)]
    pub opts: Options,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the selected suites (the default).
    Run,
    /// Write plot-ready CSV tables.
    Dump {
        what: DumpKind,
        /// D, gamma, Lq, J, k, k^-1, e, f, or an algebra element such as `a*b - b^2`.
        #[arg(long, default_value = "D")]
        operator: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DumpKind {
    Spectrum,
    BlockNorms,
    Operator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Args)]
pub struct Options {
    /// Deformation parameters, comma separated.
    #[arg(
        long = "q",
        global = true,
        value_delimiter = ',',
        default_value = "0.3,0.5,0.8"
    )]
    pub q: Vec<f64>,
    /// Truncation level, as `p/2` or a decimal ending in .5.
    #[arg(long, global = true, default_value = "21/2")]
    pub lmax: HalfInt,
    /// Comma separated suite ids, or `all`; an empty list runs nothing.
    #[arg(long, global = true, default_value = "all")]
    pub suite: String,
    /// standard, square, alternating, or poly:c0,c1,... in powers of l + 1/2.
    #[arg(long = "d-profile", global = true, default_value = "standard")]
    pub d_profile: DiracProfile,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, global = true, env = "QSPHERE_OUT", default_value = "reports")]
    pub out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Use the |l-1, m> target in the third term of π(a).
    #[arg(long = "paper-literal-index", global = true)]
    pub paper_literal_index: bool,
    /// Levels trimmed per unit of word length before asserting identities.
    #[arg(long, global = true, default_value_t = 1)]
    pub margin: u32,
    /// Seeded random word pairs added to the decay suites.
    #[arg(long = "random-pairs", global = true, default_value_t = 50)]
    pub random_pairs: usize,
    /// Lower end of the counting-function fit window.
    #[arg(long = "spectrum-k", global = true, default_value_t = qsphere::axioms::DEFAULT_SPECTRUM_K)]
    pub spectrum_k: u32,
}

impl Options {
    pub fn suites(&self) -> qsphere::Result<Vec<SuiteId>> {
        let list = self.suite.trim();
        if list == "all" {
            return Ok(SuiteId::ALL.to_vec());
        }
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect()
    }

    pub fn reading(&self) -> IndexReading {
        if self.paper_literal_index {
            IndexReading::PaperLiteral
        } else {
            IndexReading::Corrected
        }
    }

    pub fn settings(&self, q: f64) -> RunSettings {
        RunSettings {
            margin: self.margin,
            profile: self.d_profile.clone(),
            reading: self.reading(),
            seed: self.seed,
            random_pairs: self.random_pairs,
            spectrum_k: self.spectrum_k,
            ..RunSettings::new(q, self.lmax)
        }
    }
}
