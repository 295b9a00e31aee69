//! Command-line surface.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::commands;
use crate::config::Format;
use crate::error::{LabError, LabResult};
use crate::report::Report;

#[derive(Debug, Parser)]
#[command(name = "ustlab", version, about = "Seeded Monte Carlo lab for unions of uniform spanning trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Law of the overlap M of k uniform trees of K_n versus Po(k(k-1)).
    TvPoisson(TvPoissonArgs),
    /// Spanning-tree count of a graph, with Cayley and Grimmett references.
    Count(CountArgs),
    /// Effective resistance and tree-inclusion probability of a vertex pair.
    Resistance(ResistanceArgs),
    /// Moments and upper tail of the tree count of G(n, m).
    Moments(MomentsArgs),
    /// Log tree counts along coupled nested G(n, p) graphs.
    Lil(LilArgs),
    /// Dump uniform spanning trees of a graph.
    Sample(SampleArgs),
    /// Run the built-in oracle checks.
    Selftest(SelftestArgs),
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Master seed. Never read from the environment.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub shards: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Record wall-clock time in the report (breaks byte-determinism).
    #[arg(long)]
    pub timing: bool,
}

/// Exactly one graph source.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct GraphSource {
    /// Complete graph K_N.
    #[arg(long, value_name = "N")]
    pub complete: Option<usize>,
    /// G(N, P), drawn from --seed.
    #[arg(long, num_args = 2, value_names = ["N", "P"])]
    pub gnp: Option<Vec<String>>,
    /// G(N, M), drawn from --seed.
    #[arg(long, num_args = 2, value_names = ["N", "M"])]
    pub gnm: Option<Vec<String>>,
    /// Edge-list file: an "n m" header, then m lines "a b".
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TvPoissonArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Regime exponent for the second bound, in (0, 1/11).
    #[arg(long, default_value_t = 0.09)]
    pub alpha: f64,
    /// Constant c of the slack c·n^(11 alpha - 1) in the second bound.
    #[arg(long, default_value_t = 1.0)]
    pub slack_c: f64,
    /// Fail unless the TV distance is below this.
    #[arg(long, value_name = "TV")]
    pub assert_tv_below: Option<f64>,
    /// Fail unless every pmf value is within 4 standard errors of the first bound.
    #[arg(long)]
    pub assert_claim1: bool,
    /// As --assert-claim1, for the second bound inside its regime.
    #[arg(long)]
    pub assert_claim2: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub source: GraphSource,
    /// Fail unless the count is at most Grimmett's bound.
    #[arg(long)]
    pub assert_grimmett: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct ResistanceArgs {
    #[command(flatten)]
    pub source: GraphSource,
    /// The vertex pair.
    #[arg(long, num_args = 2, value_names = ["A", "B"], required = true)]
    pub edge: Vec<usize>,
    /// Fail unless the inclusion probability is at most the two-path bound.
    #[arg(long)]
    pub assert_two_path: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
#[group(id = "density", required = true, multiple = false, args = ["m", "p"])]
pub struct MomentsArgs {
    #[arg(long)]
    pub n: usize,
    /// Edge count of G(n, m).
    #[arg(long)]
    pub m: Option<usize>,
    /// Edge density; m = round(p·C(n,2)).
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Draws for the overlap law and for direct sampling.
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Importance-sampled overlap draws (default: --trials).
    #[arg(long)]
    pub tilted_trials: Option<u64>,
    /// Tail threshold K as a multiple of the calibrated constant.
    #[arg(long, default_value_t = 2.0)]
    pub big_k_factor: f64,
    /// Refuse to run outside the dense regime.
    #[arg(long)]
    pub verify: bool,
    /// Fail unless the estimates agree within this many combined standard errors.
    #[arg(long, value_name = "SIGMAS")]
    pub assert_agree: Option<f64>,
    /// Fail unless the tail frequency is within 4 standard errors of the Markov bound.
    #[arg(long)]
    pub assert_markov: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct LilArgs {
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 2)]
    pub grid_base: u32,
    #[arg(long, default_value_t = 16)]
    pub n_min: usize,
    #[arg(long, default_value_t = 1024)]
    pub n_max: usize,
    /// Independent coupled sources.
    #[arg(long, default_value_t = 20)]
    pub sources: u64,
    /// Tail start for maxima and correlations.
    #[arg(long, default_value_t = 64)]
    pub n_tail: usize,
    /// Size of the independent CLT draws.
    #[arg(long)]
    pub clt_n: Option<usize>,
    /// Number of CLT draws (0 skips them).
    #[arg(long, default_value_t = 0)]
    pub clt_trials: u64,
    /// Fail unless |residual| ≤ B everywhere and the band does not widen.
    #[arg(long, value_name = "B")]
    pub assert_band: Option<f64>,
    /// Fail unless the correlation exceeds R at every n ≥ n_tail.
    #[arg(long, value_name = "R")]
    pub assert_correlation: Option<f64>,
    /// Fail unless the restrictions are nested.
    #[arg(long)]
    pub assert_coupling: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub source: GraphSource,
    /// Number of independent trees.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    #[command(flatten)]
    pub common: Common,
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::TvPoisson(a) => &a.common,
            Command::Count(a) => &a.common,
            Command::Resistance(a) => &a.common,
            Command::Moments(a) => &a.common,
            Command::Lil(a) => &a.common,
            Command::Sample(a) => &a.common,
            Command::Selftest(a) => &a.common,
        }
    }
}

/// Builds the report for a parsed command line.
pub fn build_report(command: &Command) -> LabResult<Report> {
    let common = command.common();
    if common.shards == 0 {
        return Err(LabError::usage("--shards must be positive"));
    }
    let start = Instant::now();
    let mut report = match command {
        Command::TvPoisson(a) => commands::tv_poisson(a),
        Command::Count(a) => commands::count(a),
        Command::Resistance(a) => commands::resistance(a),
        Command::Moments(a) => commands::moments(a),
        Command::Lil(a) => commands::lil(a),
        Command::Sample(a) => commands::sample(a),
        Command::Selftest(a) => commands::selftest(a),
    }?;
    if common.timing {
        report.wall_clock_seconds = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}

/// Renders and writes the report; returns the process exit code.
pub fn run(cli: &Cli) -> u8 {
    let common = cli.command.common();
    let (report, code) = match build_report(&cli.command) {
        Ok(r) => {
            let code = u8::from(!r.passed());
            (Some(r), code)
        }
        Err(e) => {
            eprintln!("ustlab: {e}");
            let code = e.exit_code();
            // runtime failures still leave a report behind
            let report = (code == 1).then(|| commands::error_report(&cli.command, &e));
            (report, code)
        }
    };
    if let Some(report) = report {
        let text = match common.format {
            Format::Json => Ok(report.render_json()),
            Format::Csv => report.render_csv(),
        };
        let written = text.and_then(|t| match &common.output {
            Some(path) => fs::write(path, t).map_err(|source| LabError::Io {
                path: path.clone(),
                source,
            }),
            None => {
                print!("{t}");
                Ok(())
            }
        });
        if let Err(e) = written {
            eprintln!("ustlab: {e}");
            return 1;
        }
    }
    code
}
