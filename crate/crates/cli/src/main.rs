use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use verma_ext::commands;
use verma_ext::config::{parse_subset, resolve_cache_dir, CACHE_ENV};
use verma_ext::{CliError, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "verma-ext", version)]
#[command(about = "V(x,y) subspaces, R-polynomials and their verification for finite Weyl groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the elements of W with lengths and reduced words.
    Enumerate(Common),
    /// Print R_{y,x} and the coefficient of q in the signed polynomial.
    Rpoly {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
    },
    /// Print V(x,y) and, with --singular, its singular images.
    Vspace {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
    },
    /// Run all verification suites.
    Verify(Common),
    /// Write dimension, subspace, summary and R-polynomial files.
    Report(Common),
}

#[derive(Debug, Args)]
struct Pair {
    /// Reduced word for x, comma-separated 0-based indices ("" or "e" for the identity).
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Reduced word for y.
    #[arg(long, allow_hyphen_values = true)]
    y: String,
}

#[derive(Debug, Args)]
struct Common {
    /// Type descriptor such as B3 or A1xA2.
    #[arg(long = "type")]
    type_descriptor: String,
    /// Singular subset S_lambda as 0-based indices; repeat for several ("" is the empty set).
    #[arg(long)]
    singular: Vec<String>,
    #[arg(long, default_value = "text")]
    format: String,
    /// Cache directory (default: $VERMA_EXT_CACHE, then .verma-ext-cache).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Largest group order accepted.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value = "smallest")]
    descent_policy: String,
    /// Worker threads, 0 for automatic.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

impl Common {
    fn config(&self) -> Result<RunConfig, CliError> {
        let desc = self
            .type_descriptor
            .parse()
            .map_err(|e: verma_ext_core::Error| CliError::Usage(e.to_string()))?;
        let mut cfg = RunConfig::new(desc);
        if !self.singular.is_empty() {
            cfg.singular_subsets = Some(
                self.singular
                    .iter()
                    .map(|s| parse_subset(s))
                    .collect::<Result<_, _>>()?,
            );
        }
        cfg.output_format = self.format.parse()?;
        cfg.cache_dir = resolve_cache_dir(
            self.cache_dir.as_deref(),
            std::env::var(CACHE_ENV).ok().as_deref(),
        );
        if let Some(b) = self.budget {
            cfg.budget = b;
        }
        cfg.descent_policy = self
            .descent_policy
            .parse()
            .map_err(|e: verma_ext_core::Error| CliError::Usage(e.to_string()))?;
        cfg.parallelism = self.jobs;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(command: Command) -> Result<String, CliError> {
    let common = match &command {
        Command::Enumerate(c) | Command::Verify(c) | Command::Report(c) => c,
        Command::Rpoly { common, .. } | Command::Vspace { common, .. } => common,
    };
    let cfg = common.config()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(|| match &command {
        Command::Enumerate(_) => commands::cmd_enumerate(&cfg),
        Command::Rpoly { pair, .. } => commands::cmd_rpoly(&cfg, &pair.x, &pair.y),
        Command::Vspace { pair, .. } => commands::cmd_vspace(&cfg, &pair.x, &pair.y),
        Command::Verify(_) => {
            let (report, computed) = commands::run_verify(&cfg)?;
            eprintln!("rpoly_computed={computed}");
            let out = commands::render_report(&report, cfg.output_format);
            if report.passed() {
                Ok(out)
            } else {
                print!("{out}");
                Err(CliError::Verification(report.failing_suites().join(",")))
            }
        }
        Command::Report(_) => {
            let outcome = commands::run_report(&cfg)?;
            Ok(commands::render_outcome(&outcome, cfg.output_format))
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
