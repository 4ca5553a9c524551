use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cuntz_cli::grammar::{load_model, ModelSpec};
use cuntz_cli::run::{alpha_command, rank_command, reverify, CapParams, RunConfig, RunResult, Suite};
use cuntz_cli::{run, CliError};
use cuntz_core::CuModel;

#[derive(Parser)]
#[command(
    name = "cu",
    version,
    about = "Exact checks on abstract Cuntz semigroups over finite caps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checker suites on a model.
    Check(CheckArgs),
    /// Compute α(f) and report whether f is realized.
    Alpha(AlphaArgs),
    /// Print the rank function of an element.
    Rank(RankArgs),
    /// Render a stored JSON report and re-verify it against the library.
    Report(ReportArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Model file (text or JSON), inline description, or built-in name.
    #[arg(long, default_value = "nbar")]
    model: String,
    /// Cap ceiling (an integer) or bound element.
    #[arg(long)]
    cap: Option<String>,
    /// Ceiling on finite values in the cap.
    #[arg(long, env = "CU_DEFAULT_CAP", default_value_t = 4)]
    ceiling: u32,
    /// Denominator of soft values and grid functionals.
    #[arg(long, default_value_t = cuntz_core::cap::DEFAULT_DENOMINATOR)]
    denominator: u32,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Seed for sampled quantifier ranges.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sample size used when a range is too large to enumerate.
    #[arg(long, default_value_t = 20_000)]
    samples: usize,
    /// Bound on searched multiplicities.
    #[arg(long, default_value_t = 16)]
    n_bound: u64,
}

impl Common {
    fn cap_params(&self) -> CapParams {
        let (bound, ceiling) = match self.cap.as_deref().map(|c| (c, c.trim().parse::<u32>())) {
            Some((_, Ok(n))) => (None, n),
            Some((c, Err(_))) => (Some(c.to_string()), self.ceiling),
            None => (None, self.ceiling),
        };
        CapParams {
            bound,
            ceiling,
            denominator: self.denominator,
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    common: Common,
    /// Suites to run, in order (comma separated or repeated).
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    suite: Vec<Suite>,
    #[arg(long, default_value_t = 2)]
    k: u64,
    #[arg(long, default_value_t = 2)]
    n: u64,
    /// m values for m-comparison (comma separated).
    #[arg(long, value_delimiter = ',')]
    m: Vec<u32>,
    /// γ for local weak (m, γ)-comparison.
    #[arg(long)]
    gamma: Option<String>,
    /// Order unit for comparison and interpolation (default: all ones).
    #[arg(long)]
    u: Option<String>,
    /// Restrict divisibility to one element.
    #[arg(long)]
    x: Option<String>,
}

#[derive(Args)]
struct AlphaArgs {
    #[command(flatten)]
    common: Common,
    /// Rank function: one value per point or basis functional.
    #[arg(long)]
    f: String,
}

#[derive(Args)]
struct RankArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    x: String,
}

#[derive(Args)]
struct ReportArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn resolve_model(arg: &str) -> Result<(ModelSpec, CuModel), CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        return load_model(&read(path)?);
    }
    let t = arg.trim_start();
    if t.starts_with("model") || t.starts_with('{') {
        return load_model(arg);
    }
    let spec = ModelSpec::Builtin { name: arg.to_string() };
    let model = spec.build().map_err(CliError::Semantic)?;
    Ok((spec, model))
}

fn emit(format: Format, text: String, json: String) {
    match format {
        Format::Text => print!("{text}"),
        Format::Json => println!("{json}"),
    }
}

fn execute(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Check(a) => {
            let (spec, _) = resolve_model(&a.common.model)?;
            let cfg = RunConfig {
                model: spec,
                suites: a.suite,
                cap: a.common.cap_params(),
                k: a.k,
                n: a.n,
                m: a.m,
                gamma: a.gamma,
                u: a.u,
                x: a.x,
                seed: a.common.seed,
                samples: a.common.samples,
                n_bound: a.common.n_bound,
                jobs: a.common.jobs,
            };
            let result = run(&cfg)?;
            emit(a.common.format, result.render_text(), result.to_json());
            Ok(result.status.code())
        }
        Command::Alpha(a) => {
            let (_, model) = resolve_model(&a.common.model)?;
            let cap = a.common.cap_params().build(&model)?;
            let out = alpha_command(&model, &a.f, &cap)?;
            emit(
                a.common.format,
                out.render_text(),
                serde_json::to_string_pretty(&out).expect("serializable"),
            );
            Ok(out.status().code())
        }
        Command::Rank(a) => {
            let (_, model) = resolve_model(&a.common.model)?;
            let out = rank_command(&model, &a.x)?;
            emit(
                a.common.format,
                out.render_text(),
                serde_json::to_string_pretty(&out).expect("serializable"),
            );
            Ok(0)
        }
        Command::Report(a) => {
            let stored: RunResult =
                serde_json::from_str(&read(&a.file)?).map_err(|e| CliError::Report(e.to_string()))?;
            let issues = reverify(&stored)?;
            let mut text = stored.render_text();
            if issues.is_empty() {
                text.push_str(&format!(
                    "re-verified: {} suite result(s) reproduced\n",
                    stored.results.len()
                ));
            }
            for i in &issues {
                text.push_str(&format!("mismatch: {i}\n"));
            }
            emit(a.format, text, stored.to_json());
            Ok(if issues.is_empty() { stored.status.code() } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 3 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
