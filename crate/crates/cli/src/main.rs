use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use partite_cli::load::{read_text, write_text};
use partite_cli::request::{DInput, LineInput, OrderedInput, SolverChoice, Variant};
use partite_cli::{certify, load_json, parse_category, recheck, CliError, Recheck, Request};
use partite_core::fincat::dot::{cocone_to_dot, diagram_to_dot};
use partite_core::fincat::{colimit, CategoryTag, Diagram};
use partite_core::verdict::Mode;
use partite_core::{Config, OutputFormat};

/// Finite-category colimits, Hales–Jewett searches and partite Ramsey
/// constructions, with re-checkable JSON certificates.
#[derive(Parser)]
#[command(name = "partite", version, about)]
#[command(after_help = "Exit status: 0 success or claim holds, 1 claim refuted, 2 error.")]
struct Cli {
    /// JSON configuration (caps, seed, trials); defaults apply to missing keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override the configured RNG seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for coloring scans (0 = one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Override the configured output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanArg {
    Exhaustive,
    Sampled,
}

#[derive(Args)]
struct Output {
    /// Write the certificate here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Least N such that every coloring of P^N has a monochromatic line.
    HjSearch {
        #[arg(long)]
        alphabet: usize,
        #[arg(long)]
        colors: usize,
        #[arg(long, default_value_t = 4)]
        nmax: usize,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: ScanArg,
        #[command(flatten)]
        output: Output,
    },
    /// List Hom(from, to) in a category.
    HomEnum {
        /// Fin, FinOp, FinLE, FinLEStarOp or HJ:<alphabet size>.
        #[arg(long, value_parser = parse_category)]
        cat: CategoryTag,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Decide C -> (B)^A_r.
    VerifyRamsey {
        #[arg(long, value_parser = parse_category)]
        cat: CategoryTag,
        #[arg(long = "A")]
        a: usize,
        #[arg(long = "B")]
        b: usize,
        #[arg(long = "C")]
        c: usize,
        #[arg(short, default_value_t = 2)]
        r: usize,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: ScanArg,
        /// Where to write a refuting coloring (default: next to --out).
        #[arg(long)]
        counterexample: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Colimit of a diagram in Fin or FinOp.
    Colimit {
        #[arg(long)]
        diagram: PathBuf,
        /// Also check universality against every cocone with apex up to this size.
        #[arg(long)]
        apex_bound: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Colimit of the line diagram of an i0-instance.
    ColimitBlock {
        #[arg(long)]
        input: PathBuf,
        /// Dimension N; overrides the instance's `n`.
        #[arg(long)]
        n: Option<usize>,
        /// Check the cocone invariants, the homomorphism legs and relation reflection.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Build Z -> (Y)^X_r among blocks and check its resolver.
    PartiteLemma {
        #[arg(long)]
        instance: PathBuf,
        #[arg(short, default_value_t = 2)]
        r: usize,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: ScanArg,
        #[command(flatten)]
        output: Output,
    },
    /// Run the partite construction over a category of orders.
    PartiteConstruction {
        #[arg(long)]
        instance: PathBuf,
        #[arg(short, default_value_t = 2)]
        r: usize,
        /// auto, or size=<m> to verify a supplied witness size.
        #[arg(long, default_value = "auto")]
        solver: SolverChoice,
        /// Seeded random colorings fed to the resolver (default: sampleTrials).
        #[arg(long)]
        trials: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Ordered structures via the partite construction.
    Solecki {
        #[arg(long)]
        variant: Variant,
        #[arg(long)]
        instance: PathBuf,
        #[arg(short, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value = "auto")]
        solver: SolverChoice,
        #[arg(long)]
        trials: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Re-derive a certificate and compare it byte for byte.
    Recheck { certificate: PathBuf },
    /// DOT rendering of a diagram, optionally with its colimit cocone.
    ExportDot {
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long)]
        with_colimit: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_config(cli: &Cli) -> anyhow::Result<Config> {
    let mut config: Config = match &cli.config {
        Some(p) => load_json(p)?,
        None => Config::default(),
    };
    if let Some(seed) = cli.seed {
        config.rng_seed = seed;
    }
    if let Some(t) = cli.threads {
        config.threads = t;
    }
    if let Some(f) = cli.format {
        config.output_format = match f {
            Format::Json => OutputFormat::Json,
            Format::Dot => OutputFormat::Dot,
            Format::Text => OutputFormat::Text,
        };
    }
    config.validate().map_err(CliError::from)?;
    Ok(config)
}

fn scan(arg: ScanArg, config: &Config) -> Mode {
    match arg {
        ScanArg::Exhaustive => Mode::Exhaustive,
        ScanArg::Sampled => Mode::Sampled {
            trials: config.sample_trials,
            seed: config.rng_seed,
        },
    }
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}"))
}

fn emit(request: Request, config: Config, out: Option<&Path>, counterexample: Option<&Path>) -> anyhow::Result<u8> {
    let format = config.output_format;
    if format == OutputFormat::Dot {
        return Err(CliError::Argument(format!("{} has no DOT rendering", request.name())).into());
    }
    let (cert, report) = certify(request, config)?;
    let text = cert.render();
    if let Some(p) = out {
        write_text(p, &text)?;
    }
    if let Some(cx) = &report.counterexample {
        let target = counterexample
            .map(Path::to_path_buf)
            .or_else(|| out.map(|o| sibling(o, "counterexample.json")));
        if let Some(t) = target {
            let mut body = serde_json::to_string_pretty(cx)?;
            body.push('\n');
            write_text(&t, &body)?;
            eprintln!("counterexample written to {}", t.display());
        }
    }
    match (format, out) {
        (OutputFormat::Json, None) => print!("{text}"),
        _ => println!("{}: {}", report.outcome, report.summary),
    }
    Ok(report.outcome.exit_code() as u8)
}

fn line_input(path: &Path, n: Option<usize>) -> anyhow::Result<LineInput> {
    let mut input: LineInput = load_json(path)?;
    if n.is_some() {
        input.n = n;
    }
    Ok(input)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let config = load_config(&cli)?;
    if config.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let trials = |t: Option<usize>| t.unwrap_or(config.sample_trials);
    let (request, output, cx) = match cli.command {
        Command::HjSearch {
            alphabet,
            colors,
            nmax,
            mode,
            output,
        } => (
            Request::HjSearch {
                alphabet,
                colors,
                nmax,
                scan: scan(mode, &config),
            },
            output,
            None,
        ),
        Command::HomEnum { cat, from, to, output } => (
            Request::HomEnum {
                category: cat,
                from,
                to,
            },
            output,
            None,
        ),
        Command::VerifyRamsey {
            cat,
            a,
            b,
            c,
            r,
            mode,
            counterexample,
            output,
        } => (
            Request::VerifyRamsey {
                category: cat,
                a,
                b,
                c,
                r,
                scan: scan(mode, &config),
            },
            output,
            counterexample,
        ),
        Command::Colimit {
            diagram,
            apex_bound,
            output,
        } => {
            let diagram: Diagram = load_json(&diagram)?;
            if config.output_format == OutputFormat::Dot {
                let c = colimit(&diagram).map_err(CliError::from)?;
                print!("{}", cocone_to_dot(&diagram, &c));
                return Ok(0);
            }
            (Request::Colimit { diagram, apex_bound }, output, None)
        }
        Command::ColimitBlock {
            input,
            n,
            verify,
            output,
        } => (
            Request::ColimitBlock {
                instance: line_input(&input, n)?,
                verify,
            },
            output,
            None,
        ),
        Command::PartiteLemma {
            instance,
            r,
            mode,
            output,
        } => (
            Request::PartiteLemma {
                instance: line_input(&instance, None)?,
                r,
                scan: scan(mode, &config),
            },
            output,
            None,
        ),
        Command::PartiteConstruction {
            instance,
            r,
            solver,
            trials: t,
            output,
        } => {
            let instance: DInput = load_json(&instance)?;
            (
                Request::PartiteConstruction {
                    instance,
                    r,
                    solver,
                    trials: trials(t),
                    seed: config.rng_seed,
                },
                output,
                None,
            )
        }
        Command::Solecki {
            variant,
            instance,
            r,
            solver,
            trials: t,
            output,
        } => {
            let instance: OrderedInput = load_json(&instance)?;
            (
                Request::Solecki {
                    variant,
                    instance,
                    r,
                    solver,
                    trials: trials(t),
                    seed: config.rng_seed,
                },
                output,
                None,
            )
        }
        Command::Recheck { certificate } => {
            let text = read_text(&certificate)?;
            return match recheck(&certificate.display().to_string(), &text)? {
                Recheck::Identical => {
                    println!("recheck: identical");
                    Ok(0)
                }
                Recheck::Differs { line } => {
                    println!("recheck: re-derived certificate differs at line {line}");
                    Ok(1)
                }
            };
        }
        Command::ExportDot {
            diagram,
            with_colimit,
            out,
        } => {
            let d: Diagram = load_json(&diagram)?;
            let dot = if with_colimit {
                cocone_to_dot(&d, &colimit(&d).map_err(CliError::from)?)
            } else {
                diagram_to_dot(&d)
            };
            match out {
                Some(p) => write_text(&p, &dot)?,
                None => print!("{dot}"),
            }
            return Ok(0);
        }
    };
    emit(request, config, output.out.as_deref(), cx.as_deref())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let code = e.downcast_ref::<CliError>().map_or("Error", CliError::code);
            eprintln!("error[{code}]: {e:#}");
            ExitCode::from(2)
        }
    }
}
