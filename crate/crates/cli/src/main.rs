use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod io;

use config::{ModelKind, PipelineConfig, UsageError, WindowSpec};

#[derive(Parser, Debug)]
#[command(name = "revstream", version, about = "Revert detection over wiki review streams")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// TOML pipeline configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Global seed; every stochastic stage derives its own from it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Only print errors.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normalize and vectorize raw review events into daily records.
    Preprocess {
        #[arg(long)]
        events: Option<PathBuf>,
        #[arg(long)]
        stopwords: Option<PathBuf>,
        #[arg(long)]
        bad_words: Option<PathBuf>,
        #[arg(long)]
        reverted_words: Option<PathBuf>,
        #[arg(long)]
        lexicon: Option<PathBuf>,
    },
    /// Rank correlation, forest importances and feature selection.
    Analyze {
        #[arg(long)]
        daily: Option<PathBuf>,
        #[arg(long)]
        cv_folds: Option<usize>,
    },
    /// Oversample reverts and merge them into a balanced stream.
    Balance {
        #[arg(long)]
        daily: Option<PathBuf>,
        #[arg(long)]
        count: Option<usize>,
    },
    /// Prequential evaluation of an online classifier.
    Stream {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        model: Option<ModelKind>,
        #[arg(long, value_enum)]
        eval_window: Option<WindowSpec>,
        #[arg(long)]
        warmup: Option<usize>,
    },
    /// Explain checkpointed predictions for stream positions.
    Explain {
        /// Zero-based position in the stream; repeatable.
        #[arg(long = "sample", required = true)]
        samples: Vec<usize>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
}

/// Failed precondition on otherwise well-formed input.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct PreconditionError(pub String);

fn exit_code(err: &anyhow::Error) -> u8 {
    use revstream::Error as E;
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return 2;
        }
        if cause.is::<PreconditionError>() {
            return 4;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::Io(_) => 1,
                E::Unsorted(_) | E::NotTrained | E::EmptyInput(_) | E::ConstantInput(_) => 4,
                _ => 3,
            };
        }
        if cause.is::<std::io::Error>() {
            return 1;
        }
    }
    1
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut cfg = PipelineConfig::load(cli.common.config.as_deref())?;
    if let Some(seed) = cli.common.seed {
        cfg.seed = seed;
    }
    if let Some(dir) = cli.common.out_dir {
        cfg.out_dir = dir;
    }
    let quiet = cli.common.quiet;
    match cli.command {
        Command::Preprocess {
            events,
            stopwords,
            bad_words,
            reverted_words,
            lexicon,
        } => {
            let p = &mut cfg.paths;
            p.events = events.or(p.events.take());
            p.stopwords = stopwords.or(p.stopwords.take());
            p.bad_words = bad_words.or(p.bad_words.take());
            p.reverted_words = reverted_words.or(p.reverted_words.take());
            p.lexicon = lexicon.or(p.lexicon.take());
            commands::preprocess::run(&cfg, quiet)
        }
        Command::Analyze { daily, cv_folds } => {
            if daily.is_some() {
                cfg.paths.daily = daily;
            }
            if let Some(k) = cv_folds {
                cfg.analysis.cv_folds = k;
            }
            commands::analyze::run(&cfg, quiet)
        }
        Command::Balance { daily, count } => {
            if daily.is_some() {
                cfg.paths.daily = daily;
            }
            if let Some(c) = count {
                cfg.synth.count = c;
            }
            commands::balance::run(&cfg, quiet)
        }
        Command::Stream {
            input,
            model,
            eval_window,
            warmup,
        } => {
            if input.is_some() {
                cfg.paths.balanced = input;
            }
            if let Some(m) = model {
                cfg.stream.model = m;
            }
            if let Some(w) = eval_window {
                cfg.stream.eval_window = w;
            }
            if let Some(w) = warmup {
                cfg.stream.warmup = w;
            }
            commands::stream::run(&cfg, quiet)
        }
        Command::Explain {
            samples,
            input,
            checkpoint,
        } => {
            if input.is_some() {
                cfg.paths.balanced = input;
            }
            if checkpoint.is_some() {
                cfg.paths.checkpoint = checkpoint;
            }
            commands::explain::run(&cfg, &samples, quiet)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.common.quiet { "error" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
