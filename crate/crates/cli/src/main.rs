//! `spice` — run audit campaigns, analyze logs, reproduce the published
//! numbers, and draw figures.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spice_core::analysis::{analyze_records, AnalysisOptions};
use spice_core::corpus::{build_trial_matrix, load_corpus, Question, QuestionTemplates};
use spice_core::report::{svg::write_figures, write_analysis_outputs};
use spice_core::reproduce::{check_ids, render_text, run_checks, ReproduceOptions};
use spice_core::runner::{read_log, run_campaign, CampaignOptions, ParseMode, RunConfig};

const EXIT_USAGE: u8 = 1;
const EXIT_CHECK_FAILURE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "spice",
    version,
    about = "Disposition audit harness: YES/NO re-engagement probes over tone-labeled transcripts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a trial campaign against a chat endpoint, resuming from the log.
    Run(RunArgs),
    /// Analyze a trial log and write tables, a markdown report, and JSON.
    Analyze(AnalyzeArgs),
    /// Recompute every statistic derivable from the published aggregates and
    /// compare against the published values.
    ReproducePaper(ReproduceArgs),
    /// Draw SVG figures from a previously written analysis directory.
    Plot(PlotArgs),
    /// Corpus utilities.
    Corpus(CorpusArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Endpoint/model/decoding configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Stimulus corpus (one JSON record per line).
    #[arg(long)]
    corpus: PathBuf,
    /// Trial log to append to (created if missing).
    #[arg(long)]
    log: PathBuf,
    /// Question templates (TOML); defaults are built in.
    #[arg(long)]
    templates: Option<PathBuf>,
    /// Override the parse mode from the config.
    #[arg(long, value_parser = clap::value_parser!(ParseMode))]
    parse_mode: Option<ParseMode>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Trial log to analyze.
    #[arg(long)]
    log: PathBuf,
    /// Output directory for tables and the report.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Cluster bootstrap replicates.
    #[arg(long = "boot-b", default_value_t = 1000)]
    boot_b: u32,
    /// Cluster permutation replicates.
    #[arg(long = "perm-b", default_value_t = 1999)]
    perm_b: u32,
    /// Posterior simulation draws.
    #[arg(long, default_value_t = 10_000)]
    draws: u32,
    /// Freeze the full-data design effect across resamples.
    #[arg(long)]
    freeze_deff: bool,
    /// Resample clusters within tone strata.
    #[arg(long)]
    stratified: bool,
}

#[derive(Args)]
struct ReproduceArgs {
    /// List check ids without computing anything.
    #[arg(long)]
    list: bool,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    draws: u32,
    #[arg(long = "perm-b", default_value_t = 1999)]
    perm_b: u32,
    #[arg(long = "boot-b", default_value_t = 1000)]
    boot_b: u32,
}

#[derive(Args)]
struct PlotArgs {
    /// Directory holding report.json from `analyze`; figures land there too.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CorpusArgs {
    #[command(subcommand)]
    command: CorpusCommand,
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// Validate a corpus file and print per-tone counts.
    Validate {
        #[arg(long)]
        corpus: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version as "errors" with successful exit.
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::ReproducePaper(args) => cmd_reproduce(args),
        Command::Plot(args) => cmd_plot(args),
        Command::Corpus(args) => match args.command {
            CorpusCommand::Validate { corpus } => cmd_corpus_validate(&corpus),
        },
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// Map error chains onto the documented exit codes: config/usage problems
/// are 1, I/O problems are 3.
fn exit_code_for(error: &anyhow::Error) -> u8 {
    use spice_core::{CorpusError, RunnerError};
    for cause in error.chain() {
        if let Some(runner) = cause.downcast_ref::<RunnerError>() {
            return match runner {
                RunnerError::ConfigInvalid(_) | RunnerError::ManifestMismatch(_) => EXIT_USAGE,
                RunnerError::ConfigIo(_) | RunnerError::LogIo(_) => EXIT_IO,
                _ => EXIT_IO,
            };
        }
        if let Some(corpus) = cause.downcast_ref::<CorpusError>() {
            return match corpus {
                CorpusError::Missing(_) | CorpusError::Io(_) => EXIT_IO,
                _ => EXIT_USAGE,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return EXIT_IO;
        }
    }
    EXIT_USAGE
}

fn cmd_run(args: RunArgs) -> anyhow::Result<ExitCode> {
    let config = RunConfig::load(&args.config)?;
    let corpus = load_corpus(&args.corpus)?;
    let templates = match &args.templates {
        Some(path) => QuestionTemplates::load(path)?,
        None => QuestionTemplates::default(),
    };
    let matrix = build_trial_matrix(&corpus, &config.models, &Question::ALL)?;
    let parse_mode = args.parse_mode.unwrap_or(config.parse_mode);
    let options = CampaignOptions {
        parallelism: config.parallelism,
        parse_mode,
        config_hash: config.content_hash(),
    };
    let summary = run_campaign(
        &matrix,
        &corpus,
        &templates,
        &config.decoding,
        &config.endpoint,
        &args.log,
        &options,
    )?;
    if summary.executed == 0 {
        println!("0 new trials (log already complete for this matrix)");
    } else {
        println!(
            "{} new trials executed, {} skipped as already logged",
            summary.executed, summary.skipped
        );
    }
    for counts in &summary.per_question {
        let total = counts.compliant + counts.noncompliant;
        println!(
            "{}: {}/{} compliant",
            counts.question, counts.compliant, total
        );
    }
    if !summary.failed.is_empty() {
        eprintln!("{} trials failed and will retry on rerun:", summary.failed.len());
        for (trial_id, message) in &summary.failed {
            eprintln!("  {trial_id}: {message}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_analyze(args: AnalyzeArgs) -> anyhow::Result<ExitCode> {
    let records = read_log(&args.log)?;
    if records.is_empty() {
        anyhow::bail!("log {} holds no records", args.log.display());
    }
    let options = AnalysisOptions {
        seed: args.seed,
        permutation_replicates: args.perm_b,
        bootstrap_replicates: args.boot_b,
        draws: args.draws,
        freeze_design_effect: args.freeze_deff,
        stratified_bootstrap: args.stratified,
        ..AnalysisOptions::default()
    };
    let report = analyze_records(&records, &options);
    let written = write_analysis_outputs(&report, &args.out)?;
    println!(
        "analyzed {} records -> {} files under {}",
        records.len(),
        written.len(),
        args.out.display()
    );
    for section in [
        ("tone_spice", report.tone_spice.skipped.as_ref()),
        ("clustering", report.clustering.skipped.as_ref()),
        ("permutation", report.permutation.skipped.as_ref()),
        ("glm", report.glm.skipped.as_ref()),
        ("sign_tests", report.sign_tests.skipped.as_ref()),
        ("loio", report.loio.skipped.as_ref()),
        ("bootstrap", report.bootstrap.skipped.as_ref()),
        ("bayes", report.bayes.skipped.as_ref()),
    ] {
        if let (name, Some(reason)) = section {
            println!("section {name} skipped: {reason}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_reproduce(args: ReproduceArgs) -> anyhow::Result<ExitCode> {
    if args.list {
        for id in check_ids() {
            println!("{id}");
        }
        return Ok(ExitCode::SUCCESS);
    }
    let results = run_checks(&ReproduceOptions {
        seed: args.seed,
        draws: args.draws,
        permutation_replicates: args.perm_b,
        bootstrap_replicates: args.boot_b,
    })?;
    print!("{}", render_text(&results));
    if results.iter().all(|r| r.pass) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(EXIT_CHECK_FAILURE))
    }
}

fn cmd_plot(args: PlotArgs) -> anyhow::Result<ExitCode> {
    let report_path = args.out.join("report.json");
    if !report_path.exists() {
        anyhow::bail!(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!(
                "missing {} (run `spice analyze --out {}` first)",
                report_path.display(),
                args.out.display()
            ),
        ));
    }
    let text = std::fs::read_to_string(&report_path)?;
    let report: spice_core::analysis::AnalysisReport = serde_json::from_str(&text)?;
    match write_figures(&report, &args.out) {
        Ok(written) => {
            for path in written {
                println!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(missing) => anyhow::bail!("figures incomplete: {missing}"),
    }
}

fn cmd_corpus_validate(path: &Path) -> anyhow::Result<ExitCode> {
    let corpus = load_corpus(path)?;
    println!("{} interactions", corpus.len());
    for (tone, count) in corpus.tone_counts() {
        println!("  {tone}: {count}");
    }
    Ok(ExitCode::SUCCESS)
}
