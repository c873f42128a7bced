//! `procsim` command line: render generator families, build a gallery and
//! matching trials from it, run matchers, report accuracy, and serve the
//! session API for human matching.

pub mod config;
pub mod error;
pub mod generate;
pub mod harness;
pub mod serve;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use procsim::families;
use procsim::manifest::ManifestEntry;
use procsim::matchkit::{DecoyPolicy, Evaluator, Mode};
use procsim::params::GeneratorSpec;

use config::{check_dims, parse_size, Config};
use error::CliError;
use harness::{EvalOptions, Matcher, ReportFilter, TrialsOptions};

#[derive(Debug, Parser)]
#[command(name = "procsim", version, about = "Procedural image generators and a multiple-choice matching harness")]
pub struct Cli {
    /// JSON config file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render one image plus a JSON sidecar with its spec.
    Generate {
        family: String,
        /// JSON object of parameter overrides.
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// WIDTHxHEIGHT.
        #[arg(long, value_parser = parse_size)]
        size: Option<(usize, usize)>,
        /// Output PNG; defaults to OUTPUT_DIR/FAMILY-sSEED.png.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Render several seeds of every enabled family and write a manifest.
    Gallery {
        #[arg(long, default_value_t = 2)]
        per_family: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_parser = parse_size)]
        size: Option<(usize, usize)>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Assemble matching trials from a manifest.
    Trials {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, short, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value = "color")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "other-families")]
        decoys: DecoyArg,
        #[arg(long)]
        seed: Option<u64>,
        /// Trials file; defaults to trials.json next to the manifest.
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Truths file; defaults to truths.json next to the trials file.
        #[arg(long)]
        truths: Option<PathBuf>,
    },
    /// Answer every trial with a matcher and append to the results log.
    Eval {
        #[arg(long)]
        trials: PathBuf,
        /// Defaults to manifest.json next to the trials file.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "perceptual")]
        matcher: Matcher,
        /// Present images in this mode instead of each trial's own.
        #[arg(long)]
        mode: Option<Mode>,
        #[arg(long)]
        results: PathBuf,
        /// Seed for the random matcher.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        judge_endpoint: Option<String>,
        #[arg(long)]
        judge_timeout_ms: Option<u64>,
        #[arg(long)]
        judge_retries: Option<u32>,
        #[arg(long)]
        judge_concurrency: Option<usize>,
    },
    /// Score a results log against the truths file.
    Report {
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        truths: PathBuf,
        /// Only answers from this serve session.
        #[arg(long)]
        session: Option<String>,
        #[arg(long, value_enum)]
        evaluator: Option<EvaluatorArg>,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Serve the human matching API.
    Serve {
        #[arg(long)]
        trials: PathBuf,
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        results: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        bind: String,
        /// Directory of UI assets served at `/`.
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
    /// List the generator families and their parameters.
    Families,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DecoyArg {
    OtherFamilies,
    SameFamily,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EvaluatorArg {
    Perceptual,
    External,
    Human,
    Random,
}

impl From<EvaluatorArg> for Evaluator {
    fn from(e: EvaluatorArg) -> Self {
        match e {
            EvaluatorArg::Perceptual => Evaluator::Perceptual,
            EvaluatorArg::External => Evaluator::External,
            EvaluatorArg::Human => Evaluator::Human,
            EvaluatorArg::Random => Evaluator::Random,
        }
    }
}

fn sibling(of: &Path, name: &str) -> PathBuf {
    of.parent().map(|d| d.join(name)).unwrap_or_else(|| PathBuf::from(name))
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    let mut cfg = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Generate {
            family,
            params,
            seed,
            size,
            out,
        } => {
            families::family(&family)?;
            let seed = seed.unwrap_or(cfg.seed);
            let (w, h) = size.unwrap_or((cfg.width, cfg.height));
            check_dims(w, h)?;
            let spec = GeneratorSpec {
                params: generate::read_params(params.as_deref())?,
                family,
                seed,
            };
            let out = out.unwrap_or_else(|| {
                cfg.output_dir
                    .join(format!("{}.png", ManifestEntry::image_id(&spec.family, seed)))
            });
            let path = generate::generate(&spec, w, h, &out)?;
            println!("{}", path.display());
        }
        Command::Gallery {
            per_family,
            seed,
            size,
            out,
        } => {
            let (w, h) = size.unwrap_or((cfg.width, cfg.height));
            check_dims(w, h)?;
            let out = out.unwrap_or_else(|| cfg.output_dir.join("gallery"));
            let names = cfg.enabled_families();
            let path = generate::gallery(&names, per_family, seed.unwrap_or(cfg.seed), w, h, &out)?;
            println!("{}", path.display());
        }
        Command::Trials {
            manifest,
            n,
            mode,
            decoys,
            seed,
            out,
            truths,
        } => {
            let out = out.unwrap_or_else(|| sibling(&manifest, "trials.json"));
            let truths = truths.unwrap_or_else(|| sibling(&out, "truths.json"));
            let opts = TrialsOptions {
                n,
                mode,
                decoys: match decoys {
                    DecoyArg::OtherFamilies => DecoyPolicy::OtherFamilies,
                    DecoyArg::SameFamily => DecoyPolicy::SameFamily,
                },
                seed: seed.unwrap_or(cfg.seed),
            };
            harness::make_trials(&manifest, &opts, &out, &truths)?;
            println!("{}", out.display());
            println!("{}", truths.display());
        }
        Command::Eval {
            trials,
            manifest,
            matcher,
            mode,
            results,
            seed,
            judge_endpoint,
            judge_timeout_ms,
            judge_retries,
            judge_concurrency,
        } => {
            if let Some(v) = judge_endpoint {
                cfg.judge.endpoint = v;
            }
            if let Some(v) = judge_timeout_ms {
                cfg.judge.timeout_ms = v;
            }
            if let Some(v) = judge_retries {
                cfg.judge.retries = v;
            }
            if let Some(v) = judge_concurrency {
                cfg.judge.concurrency = v;
            }
            cfg.validate()?;
            let manifest = manifest.unwrap_or_else(|| sibling(&trials, "manifest.json"));
            let opts = EvalOptions {
                matcher,
                mode,
                seed: seed.unwrap_or(cfg.seed),
                judge: &cfg.judge,
            };
            let n = harness::eval(&trials, &manifest, &results, &opts)?;
            println!("{n} answers appended to {}", results.display());
        }
        Command::Report {
            results,
            truths,
            session,
            evaluator,
            json,
        } => {
            let filter = ReportFilter {
                session,
                evaluator: evaluator.map(Into::into),
            };
            let report = harness::report(&results, &truths, &filter)?;
            print!("{report}");
            if let Some(p) = json {
                let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
                text.push('\n');
                std::fs::write(&p, text).map_err(|e| CliError::Unwritable(format!("{}: {e}", p.display())))?;
            }
        }
        Command::Serve {
            trials,
            manifest,
            results,
            port,
            bind,
            static_dir,
        } => {
            let manifest = manifest.unwrap_or_else(|| sibling(&trials, "manifest.json"));
            serve::serve(&serve::ServeOptions {
                trials,
                manifest,
                results,
                bind,
                port,
                static_dir,
            })?;
        }
        Command::Families => {
            for f in families::families() {
                println!("{:<12} {}", f.name, f.summary);
                for p in f.schema {
                    println!("    {:<20} {}", p.name, p.doc);
                }
            }
        }
    }
    Ok(())
}

/// Parses arguments, runs, and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
