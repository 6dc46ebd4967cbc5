use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use solab_cli::{render, run, Level, OutputFormat, RunConfig, DEFAULT_SEED};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputArg {
    Json,
    Csv,
    Pretty,
}

impl From<OutputArg> for OutputFormat {
    fn from(value: OutputArg) -> Self {
        match value {
            OutputArg::Json => OutputFormat::Json,
            OutputArg::Csv => OutputFormat::Csv,
            OutputArg::Pretty => OutputFormat::Pretty,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LevelArg {
    Smoke,
    Desk,
    Deep,
}

impl From<LevelArg> for Level {
    fn from(value: LevelArg) -> Self {
        match value {
            LevelArg::Smoke => Level::Smoke,
            LevelArg::Desk => Level::Desk,
            LevelArg::Deep => Level::Deep,
        }
    }
}

/// Finite group solubility scans, generation probabilities over cosets, and
/// exact counting checks.
#[derive(Debug, Parser)]
#[command(name = "solab", version, about)]
struct Cli {
    /// Seed for every randomized computation.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputArg::Json)]
    output: OutputArg,

    /// Shorthand for --output csv.
    #[arg(long, global = true)]
    csv: bool,

    /// Preset scaling exhaustive ceilings: degree caps 6/8/9 and coset
    /// ceilings 1000/100000/500000.
    #[arg(long, global = true, value_enum, default_value_t = LevelArg::Desk)]
    level: LevelArg,

    /// Worker threads for parallel scans; defaults to all cores.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SampleArgs {
    /// Monte Carlo sample count.
    #[arg(long)]
    samples: Option<u64>,

    /// Confidence for interval estimates, strictly between 0 and 1.
    #[arg(long)]
    confidence: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Probability over the coset that a pair generates an insoluble group.
    Pins {
        /// Degree of the alternating socle.
        #[arg(long)]
        n: usize,
        /// First element as 1-indexed cycle text, for example "(1 2)(3 4)".
        #[arg(long)]
        a: String,
        /// Which coset of the alternating group to scan: even or odd.
        #[arg(long, default_value = "even")]
        coset: String,
        /// Scan the whole coset instead of sampling.
        #[arg(long)]
        exact: bool,
        /// Coset-size ceiling for exact scans; defaults to the level preset.
        #[arg(long)]
        ceiling: Option<u64>,
        #[command(flatten)]
        sampling: SampleArgs,
    },

    /// Exact minimum insolubility probability over classes and cosets.
    Eta {
        /// Degree or inclusive range, for example 5 or 5..7.
        #[arg(long)]
        n: String,
        /// Accepted for symmetry with pins; eta is always exact.
        #[arg(long)]
        exact: bool,
        /// Coset-size ceiling; defaults to the level preset.
        #[arg(long)]
        ceiling: Option<u64>,
    },

    /// Monte Carlo insolubility probability in a wreath product coset.
    Wreath {
        /// Base construction for each block, for example alt5.
        #[arg(long)]
        s: String,
        /// Number of blocks.
        #[arg(long)]
        m: usize,
        /// Top block permutation of `a`; defaults to the full block cycle.
        #[arg(long = "a-top")]
        a_top: Option<String>,
        /// Top block permutation of `b`; defaults to the identity.
        #[arg(long = "b-top")]
        b_top: Option<String>,
        #[command(flatten)]
        sampling: SampleArgs,
    },

    /// Exhaustive verification suites; nonzero exit on any failed equality.
    Verify {
        #[command(subcommand)]
        which: VerifyCmd,
    },

    /// Rate of permutations whose cycle through point 1 is long and
    /// totient-rich.
    LambdaRate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta1: Option<f64>,
        #[arg(long)]
        delta2: Option<f64>,
        /// Enumerate instead of sampling (small degrees only).
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        sampling: SampleArgs,
    },

    /// Probability that a uniform even-coset element leaves the group
    /// intransitive.
    Nontrans {
        #[arg(long)]
        n: usize,
        /// Generators as cycle texts separated by semicolons.
        #[arg(long)]
        gens: Option<String>,
        /// Coset representative; defaults to the identity.
        #[arg(long)]
        rho: Option<String>,
        /// Enumerate the whole coset (degree at most 8).
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        sampling: SampleArgs,
    },

    /// Count of m in [delta1*n, n] with phi(m) >= delta2*m.
    TotientCount {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        delta1: Option<f64>,
        #[arg(long)]
        delta2: Option<f64>,
    },

    /// Empirical density of n with n >= t*phi(n).
    Bt {
        /// Threshold, or a comma-separated list of thresholds.
        #[arg(long)]
        t: String,
        #[arg(long)]
        limit: Option<usize>,
    },

    /// Fixed-point bounds for affine semilinear maps on small fields.
    Fpagl {
        /// Largest prime power to scan.
        #[arg(long = "q-max")]
        q_max: Option<u64>,
    },

    /// Exact solubilizer enumeration in a named construction.
    Solubilizer {
        /// Construction name: alt<n>, sym<n>, alt<n>^2:swap, alt<n>wrC<m>.
        #[arg(long)]
        group: String,
        /// Element as cycle text, or `swap` for the canonical outer element.
        #[arg(long)]
        g: String,
        /// Verdict reuse across cycle-type keys: off (exact) or advisory.
        #[arg(long, default_value = "off")]
        cache: String,
        /// Group-order ceiling; defaults to the level preset.
        #[arg(long)]
        ceiling: Option<u64>,
    },

    /// Solubilizer density against the (1 - eta)^t bound along a normal
    /// chain.
    Crucial {
        #[arg(long)]
        construction: String,
        /// Element as cycle text, or `swap` for the canonical outer element.
        #[arg(long)]
        g: String,
        /// Insolubility level as p/q, or from-eta-exact:<n> to compute it.
        #[arg(long)]
        eta: String,
        /// Enumeration ceiling; defaults to the level preset.
        #[arg(long)]
        ceiling: Option<u64>,
    },

    /// Replay a saved key-value config file.
    Run {
        /// Path to a file written in the `key = value` format.
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyCmd {
    /// Telescoping factorial sum against its closed form.
    FactorialIdentity {
        #[arg(long = "n-max")]
        n_max: Option<u64>,
    },
    /// Permutations with no cycle inside a distinguished subset.
    Iota {
        #[arg(long = "omega-max")]
        omega_max: Option<usize>,
    },
    /// Setwise stabilizer counts split by inner cycle support.
    Kappa {
        #[arg(long = "omega-max")]
        omega_max: Option<usize>,
    },
    /// Distinguished k-cycle counts and their lower bound.
    Facile {
        #[arg(long = "n-max")]
        n_max: Option<usize>,
    },
    /// Uniform fiber sizes of the forward-cycle projection.
    Fact1 {
        #[arg(long = "omega-max")]
        omega_max: Option<usize>,
    },
    /// Projected orbit partitions on random instances.
    Fact2 {
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        instances: Option<u64>,
    },
    /// Generation probability over two alternating cosets.
    TwoCoset {
        #[arg(long)]
        n: Option<usize>,
    },
    /// Chain criterion acceptance and rejection cases.
    Ccent,
    /// Every suite above with level-scaled defaults.
    All,
}

fn set_opt(config: &mut RunConfig, key: &str, value: Option<impl std::fmt::Display>) {
    if let Some(v) = value {
        config.params.insert(key.to_string(), v.to_string());
    }
}

fn set_flag(config: &mut RunConfig, key: &str, value: bool) {
    if value {
        config.params.insert(key.to_string(), "true".to_string());
    }
}

fn set_sampling(config: &mut RunConfig, sampling: &SampleArgs) {
    set_opt(config, "samples", sampling.samples);
    set_opt(config, "confidence", sampling.confidence);
}

fn to_run_config(cli: &Cli) -> Result<RunConfig> {
    let mut config = RunConfig::new("");
    config.seed = cli.seed;
    config.output = if cli.csv {
        OutputFormat::Csv
    } else {
        cli.output.into()
    };
    config.level = cli.level.into();
    config.workers = cli.workers;
    match &cli.command {
        Command::Pins {
            n,
            a,
            coset,
            exact,
            ceiling,
            sampling,
        } => {
            config.command = "pins".into();
            config.params.insert("n".into(), n.to_string());
            config.params.insert("a".into(), a.clone());
            config.params.insert("coset".into(), coset.clone());
            set_flag(&mut config, "exact", *exact);
            set_opt(&mut config, "ceiling", *ceiling);
            set_sampling(&mut config, sampling);
        }
        Command::Eta { n, exact, ceiling } => {
            config.command = "eta".into();
            config.params.insert("n".into(), n.clone());
            set_flag(&mut config, "exact", *exact);
            set_opt(&mut config, "ceiling", *ceiling);
        }
        Command::Wreath {
            s,
            m,
            a_top,
            b_top,
            sampling,
        } => {
            config.command = "wreath".into();
            config.params.insert("s".into(), s.clone());
            config.params.insert("m".into(), m.to_string());
            set_opt(&mut config, "a-top", a_top.as_ref());
            set_opt(&mut config, "b-top", b_top.as_ref());
            set_sampling(&mut config, sampling);
        }
        Command::Verify { which } => {
            config.command = "verify".into();
            let name = match which {
                VerifyCmd::FactorialIdentity { n_max } => {
                    set_opt(&mut config, "n-max", *n_max);
                    "factorial-identity"
                }
                VerifyCmd::Iota { omega_max } => {
                    set_opt(&mut config, "omega-max", *omega_max);
                    "iota"
                }
                VerifyCmd::Kappa { omega_max } => {
                    set_opt(&mut config, "omega-max", *omega_max);
                    "kappa"
                }
                VerifyCmd::Facile { n_max } => {
                    set_opt(&mut config, "n-max", *n_max);
                    "facile"
                }
                VerifyCmd::Fact1 { omega_max } => {
                    set_opt(&mut config, "omega-max", *omega_max);
                    "fact1"
                }
                VerifyCmd::Fact2 { degree, instances } => {
                    set_opt(&mut config, "degree", *degree);
                    set_opt(&mut config, "instances", *instances);
                    "fact2"
                }
                VerifyCmd::TwoCoset { n } => {
                    set_opt(&mut config, "n", *n);
                    "two-coset"
                }
                VerifyCmd::Ccent => "ccent",
                VerifyCmd::All => "all",
            };
            config.params.insert("which".into(), name.to_string());
        }
        Command::LambdaRate {
            n,
            delta1,
            delta2,
            exact,
            sampling,
        } => {
            config.command = "lambda-rate".into();
            config.params.insert("n".into(), n.to_string());
            set_opt(&mut config, "delta1", *delta1);
            set_opt(&mut config, "delta2", *delta2);
            set_flag(&mut config, "exact", *exact);
            set_sampling(&mut config, sampling);
        }
        Command::Nontrans {
            n,
            gens,
            rho,
            exact,
            sampling,
        } => {
            config.command = "nontrans".into();
            config.params.insert("n".into(), n.to_string());
            set_opt(&mut config, "gens", gens.as_ref());
            set_opt(&mut config, "rho", rho.as_ref());
            set_flag(&mut config, "exact", *exact);
            set_sampling(&mut config, sampling);
        }
        Command::TotientCount { n, delta1, delta2 } => {
            config.command = "totient-count".into();
            config.params.insert("n".into(), n.to_string());
            set_opt(&mut config, "delta1", *delta1);
            set_opt(&mut config, "delta2", *delta2);
        }
        Command::Bt { t, limit } => {
            config.command = "bt".into();
            config.params.insert("t".into(), t.clone());
            set_opt(&mut config, "limit", *limit);
        }
        Command::Fpagl { q_max } => {
            config.command = "fpagl".into();
            set_opt(&mut config, "q-max", *q_max);
        }
        Command::Solubilizer {
            group,
            g,
            cache,
            ceiling,
        } => {
            config.command = "solubilizer".into();
            config.params.insert("group".into(), group.clone());
            config.params.insert("g".into(), g.clone());
            config.params.insert("cache".into(), cache.clone());
            set_opt(&mut config, "ceiling", *ceiling);
        }
        Command::Crucial {
            construction,
            g,
            eta,
            ceiling,
        } => {
            config.command = "crucial".into();
            config
                .params
                .insert("construction".into(), construction.clone());
            config.params.insert("g".into(), g.clone());
            config.params.insert("eta".into(), eta.clone());
            set_opt(&mut config, "ceiling", *ceiling);
        }
        Command::Run { config: path } => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config file {}", path.display()))?;
            return RunConfig::from_text(&text);
        }
    }
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match to_run_config(&cli) {
        Ok(config) => config,
        Err(error) => {
            eprintln!("error: {error:#}");
            return ExitCode::from(2);
        }
    };
    match run(&config).and_then(|out| Ok((render(&out)?, out.passed))) {
        Ok((text, passed)) => {
            print!("{text}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(2)
        }
    }
}
