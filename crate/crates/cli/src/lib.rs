//! The `subwin` command line, callable in-process through [`run`].

mod commands;
mod config;
mod load;
mod output;
mod svg;
mod systems;

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use subwin_core::classify::ProfileStore;
use subwin_core::corpus::Subset;
use subwin_core::profile::{Averaging, ProfileOptions};
use subwin_core::sterm::WeightScheme;
use subwin_core::window::PScope;

use commands::Outcome;
use config::RunConfig;
use load::FormatArg;
use systems::SystemName;

#[derive(Parser)]
#[command(name = "subwin", version, about = "Significant text windows under special-term systems")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// TOML or JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Analyse all, even-indexed or odd-indexed documents (0-based).
    #[arg(long, global = true, value_parser = parse_subset)]
    subset: Option<Subset>,
    /// Corpus file format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Auto)]
    format: FormatArg,
    /// Window length.
    #[arg(long, global = true)]
    omega: Option<usize>,
    /// Significance level; a window is significant when its tail is below it.
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Estimate the S-term probability per_document or per_corpus.
    #[arg(long, global = true, value_parser = parse_scope)]
    p_scope: Option<PScope>,
    /// Subject dictionary, one term per line.
    #[arg(long, global = true)]
    dictionary: Option<PathBuf>,
    /// Stopword list for `-nostop` systems; a built-in English list otherwise.
    #[arg(long, global = true)]
    stoplist: Option<PathBuf>,
    /// Tab-separated map from corpus tags to construct labels.
    #[arg(long, global = true)]
    tagmap: Option<PathBuf>,
    /// Fewest windows a construct needs to be reported.
    #[arg(long, global = true)]
    min_support: Option<usize>,
    /// Points on each location curve.
    #[arg(long, global = true)]
    n_points: Option<usize>,
    /// Print nothing but errors.
    #[arg(long, short, global = true)]
    quiet: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Bi,
    Idf,
}

#[derive(Clone, Copy, ValueEnum)]
enum AveragingArg {
    Micro,
    Macro,
}

#[derive(Subcommand)]
enum Command {
    /// Documents, tokens and types per field.
    Census { corpora: Vec<PathBuf> },
    /// Term weights against the combined corpora and the resulting S-terms.
    Sterms {
        #[arg(long, value_enum, default_value_t = SchemeArg::Bi)]
        scheme: SchemeArg,
        #[arg(long)]
        cutoff: Option<f64>,
        corpora: Vec<PathBuf>,
    },
    /// Every window with its binomial tail probability.
    Windows {
        #[arg(long, default_value = "title")]
        system: SystemName,
        corpora: Vec<PathBuf>,
    },
    /// SC, WWD and Q per system, with location curves.
    Profile {
        #[arg(long = "system", default_value = "title")]
        systems: Vec<SystemName>,
        #[arg(long, value_enum, default_value_t = AveragingArg::Micro)]
        averaging: AveragingArg,
        /// Exponent on SC in Q.
        #[arg(long, default_value_t = 1.0)]
        sc_weight: f64,
        /// Exponent on WWD in Q.
        #[arg(long, default_value_t = 1.0)]
        wwd_weight: f64,
        #[arg(long)]
        no_curves: bool,
        corpora: Vec<PathBuf>,
    },
    /// Significant windows per 100 windows along the fulltext.
    Curve {
        #[arg(long = "system", default_value = "title")]
        systems: Vec<SystemName>,
        corpora: Vec<PathBuf>,
    },
    /// Pr(row | column) between the significant windows of several systems.
    Overlap {
        #[arg(long = "system", required = true, num_args = 1..)]
        systems: Vec<SystemName>,
        corpora: Vec<PathBuf>,
    },
    /// Type/token ratios, cubic fits and a one-way ANOVA across corpora.
    Ttr { corpora: Vec<PathBuf> },
    /// Weight of evidence of tag sequences for significance.
    Grammar {
        #[arg(long)]
        system: Option<SystemName>,
        corpora: Vec<PathBuf>,
    },
    /// Theory/practice discrimination of tag sequences.
    Deltatp {
        #[arg(long)]
        system: Option<SystemName>,
        corpora: Vec<PathBuf>,
    },
    /// Nearest stored discipline profile.
    Classify {
        /// Profile store (JSON).
        #[arg(long)]
        store: PathBuf,
        /// Build the store from the given labelled corpora instead.
        #[arg(long)]
        build: bool,
        /// Classify each document on its own.
        #[arg(long)]
        per_document: bool,
        corpora: Vec<PathBuf>,
    },
    /// Every analysis, as one output directory.
    ReportAll {
        /// Also build a profile store at this path under the output directory.
        #[arg(long)]
        store: Option<PathBuf>,
        corpora: Vec<PathBuf>,
    },
    /// False-positive rate of the test on random S-token placement.
    Simulate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        windows: usize,
        #[arg(long, default_value_t = 0.1)]
        p: f64,
        /// Test against the observed S fraction rather than the generating p.
        #[arg(long)]
        estimate_p: bool,
    },
}

fn parse_subset(s: &str) -> Result<Subset, String> {
    s.parse().map_err(|_| format!("`{s}` is not one of all, even, odd"))
}

fn parse_scope(s: &str) -> Result<PScope, String> {
    s.parse().map_err(|_| format!("`{s}` is not one of per_document, per_corpus"))
}

/// A bad combination of arguments, reported like a parse error.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage_error(msg: impl fmt::Display) -> anyhow::Error {
    UsageError(msg.to_string()).into()
}

fn run_config(g: &Global) -> anyhow::Result<RunConfig> {
    let mut cfg = match &g.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(v) = g.omega {
        cfg.omega = v;
    }
    if let Some(v) = g.alpha {
        cfg.alpha = v;
    }
    if let Some(v) = g.p_scope {
        cfg.p_scope = v;
    }
    if let Some(v) = g.subset {
        cfg.subset = v;
    }
    if let Some(v) = &g.dictionary {
        cfg.dictionary = Some(v.clone());
    }
    if let Some(v) = &g.stoplist {
        cfg.stoplist = Some(v.clone());
    }
    if let Some(v) = &g.tagmap {
        cfg.tagmap = Some(v.clone());
    }
    if let Some(v) = g.min_support {
        cfg.min_support = v;
    }
    if let Some(v) = g.n_points {
        cfg.n_points = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Argument combinations that can be rejected before any corpus is read.
fn check_usage(cfg: &RunConfig, systems: &[SystemName], n_corpora: usize) -> anyhow::Result<()> {
    if n_corpora == 0 {
        return Err(usage_error("no corpus files given"));
    }
    for s in systems {
        match s {
            SystemName::Dictionary if cfg.dictionary.is_none() => {
                return Err(usage_error(
                    "the dictionary system needs a dictionary file (--dictionary or `dictionary` in the config)",
                ));
            }
            SystemName::Weighted(scheme) if n_corpora < 2 => {
                return Err(usage_error(format!(
                    "the {scheme} system weights terms against other corpora; give at least two"
                )));
            }
            _ => {}
        }
    }
    Ok(())
}

fn grammar_system(cfg: &RunConfig, arg: &Option<SystemName>) -> anyhow::Result<SystemName> {
    match arg {
        Some(s) => Ok(s.clone()),
        None => cfg.grammar_system.parse().context("grammar_system in the config"),
    }
}

fn dispatch(cli: &Cli, cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let g = &cli.global;
    let read = |paths: &[PathBuf]| load::read_corpora(paths, g.format, cfg.subset);
    match &cli.command {
        Command::Census { corpora } => {
            check_usage(cfg, &[], corpora.len())?;
            commands::census(&read(corpora)?)
        }
        Command::Sterms { scheme, cutoff, corpora } => {
            let scheme = match scheme {
                SchemeArg::Bi => WeightScheme::Bi,
                SchemeArg::Idf => WeightScheme::Idf,
            };
            check_usage(cfg, &[SystemName::Weighted(scheme)], corpora.len())?;
            commands::sterms(cfg, &read(corpora)?, scheme, *cutoff)
        }
        Command::Windows { system, corpora } => {
            check_usage(cfg, std::slice::from_ref(system), corpora.len())?;
            commands::windows(cfg, &read(corpora)?, system)
        }
        Command::Profile { systems, averaging, sc_weight, wwd_weight, no_curves, corpora } => {
            check_usage(cfg, systems, corpora.len())?;
            let args = commands::ProfileArgs {
                options: ProfileOptions {
                    averaging: match averaging {
                        AveragingArg::Micro => Averaging::Micro,
                        AveragingArg::Macro => Averaging::Macro,
                    },
                    alpha_exp: *sc_weight,
                    beta_exp: *wwd_weight,
                },
                with_curves: !no_curves,
            };
            commands::profile(cfg, &read(corpora)?, systems, &args)
        }
        Command::Curve { systems, corpora } => {
            check_usage(cfg, systems, corpora.len())?;
            commands::curve(cfg, &read(corpora)?, systems)
        }
        Command::Overlap { systems, corpora } => {
            check_usage(cfg, systems, corpora.len())?;
            if systems.len() < 2 {
                return Err(usage_error("overlap needs at least two --system values"));
            }
            commands::overlap(cfg, &read(corpora)?, systems)
        }
        Command::Ttr { corpora } => {
            check_usage(cfg, &[], corpora.len())?;
            commands::ttr(cfg, &read(corpora)?)
        }
        Command::Grammar { system, corpora } => {
            let system = grammar_system(cfg, system)?;
            check_usage(cfg, std::slice::from_ref(&system), corpora.len())?;
            commands::grammar(cfg, &read(corpora)?, &system)
        }
        Command::Deltatp { system, corpora } => {
            let system = grammar_system(cfg, system)?;
            check_usage(cfg, std::slice::from_ref(&system), corpora.len())?;
            if corpora.len() < 2 {
                return Err(usage_error("deltatp needs at least one theory and one practice corpus"));
            }
            commands::deltatp(cfg, &read(corpora)?, &system)
        }
        Command::Classify { store, build, per_document, corpora } => {
            check_usage(cfg, &[], corpora.len())?;
            let inputs = read(corpora)?;
            if *build {
                let built = commands::build_store(cfg, &inputs)?;
                let mut bytes = Vec::new();
                built.write(&mut bytes)?;
                let mut bundle = output::Bundle::new();
                bundle.add(store_path(&g.out, store), bytes);
                let summary = format!("stored {} profiles: {}\n", built.profiles.len(), labels(&built));
                return Ok(Outcome { bundle, summary });
            }
            let file = std::fs::File::open(store).with_context(|| format!("opening profile store {}", store.display()))?;
            let loaded = ProfileStore::read(std::io::BufReader::new(file))
                .with_context(|| format!("reading profile store {}", store.display()))?;
            commands::classify(cfg, &loaded, &inputs, *per_document)
        }
        Command::ReportAll { store, corpora } => {
            check_usage(cfg, &[], corpora.len())?;
            let inputs = read(corpora)?;
            let mut outcome = commands::report_all(cfg, &inputs)?;
            if let Some(store) = store {
                let built = commands::build_store(cfg, &inputs)?;
                let mut bytes = Vec::new();
                built.write(&mut bytes)?;
                outcome.bundle.add(store.clone(), bytes);
            }
            Ok(outcome)
        }
        Command::Simulate { seed, windows, p, estimate_p } => {
            Ok(commands::simulate(cfg, *seed, *windows, *p, *estimate_p)?.0)
        }
    }
}

/// Store paths are relative to the working directory; the bundle is written
/// under `--out`, so the path is rebased to come out in the same place.
fn store_path(out: &Path, store: &Path) -> PathBuf {
    if store.is_absolute() {
        return store.to_path_buf();
    }
    match std::env::current_dir() {
        Ok(cwd) => cwd.join(store),
        Err(_) => out.join(store),
    }
}

fn labels(store: &ProfileStore) -> String {
    store.profiles.iter().map(|p| p.label.as_str()).collect::<Vec<_>>().join(", ")
}

/// Runs the command line `args` (program name first) and returns the
/// process exit code: 0 on success, 1 on a failed analysis, 2 on bad usage.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code() as u8;
        }
    };
    let result = run_config(&cli.global).and_then(|cfg| dispatch(&cli, &cfg)).and_then(|outcome| {
        let written = outcome.bundle.commit(&cli.global.out)?;
        Ok((outcome.summary, written))
    });
    match result {
        Ok((summary, written)) => {
            if !cli.global.quiet {
                print!("{summary}");
                println!("wrote {} files under {}", written.len(), cli.global.out.display());
            }
            0
        }
        Err(e) => match e.downcast_ref::<UsageError>() {
            Some(u) => {
                let _ = Cli::command().error(ErrorKind::ArgumentConflict, u).print();
                2
            }
            None => {
                eprintln!("error: {e:#}");
                1
            }
        },
    }
}
