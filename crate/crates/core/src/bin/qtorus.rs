use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;

use qtorus::oracle::Budget;
use qtorus::verify::{self, SuiteOptions};
use qtorus::{analyze, lattice, Config, Error, SeriesFile, SeriesRing, SkewSeries};

#[derive(Parser)]
#[command(name = "qtorus", version, about = "Structure of q-commutative power and Laurent series rings at roots of unity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full structure report.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        /// Write the JSON report here (`-` for stdout instead of the text report).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// PI degree and image cardinality.
    PiDegree {
        #[arg(long)]
        config: PathBuf,
    },
    /// HNF basis of the central sublattice, one row per line.
    CenterBasis {
        #[arg(long)]
        config: PathBuf,
    },
    /// Product of two series files.
    Mul {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-sided inverse modulo J^precision.
    Invert {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        precision: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Whether every monomial of a series is central.
    IsCentral {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        input: PathBuf,
    },
    /// Compare a brute-force enumeration with the lattice computation.
    Oracle {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        check: OracleCheck,
        /// Box radius for `kernel` (defaults to ell).
        #[arg(long)]
        box_radius: Option<u64>,
    },
    /// Run the randomized invariant suite on one or more configs.
    Verify {
        #[arg(long, required = true)]
        config: Vec<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleCheck {
    Image,
    Kernel,
    Diagonal,
}

/// A domain error, reported on stderr with exit code 1.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn load_config(path: &Path) -> std::result::Result<Config, Failure> {
    Config::load(path).map_err(|e| match e {
        Error::Io { .. } | Error::Config { .. } => Failure(e.to_string()),
        e => Failure(format!("{}: {e}", path.display())),
    })
}

fn load_ring(path: &Path) -> std::result::Result<SeriesRing, Failure> {
    let config = load_config(path)?;
    config.ring().map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_series(ring: &SeriesRing, path: &Path) -> std::result::Result<SkewSeries, Failure> {
    let text = read_text(path)?;
    let file: SeriesFile = serde_json::from_str(&text)
        .map_err(|e| Failure(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column())))?;
    ring.from_file(&file).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn emit_series(ring: &SeriesRing, f: &SkewSeries, out: Option<&Path>) -> Outcome {
    let mut text = serde_json::to_string(&ring.to_file(f)).expect("series file serializes");
    text.push('\n');
    match out {
        Some(p) => write_text(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Analyze { config, json } => {
            let cfg = load_config(&config)?;
            let report = analyze(&cfg).map_err(|e| Failure(format!("{}: {e}", config.display())))?;
            match json.as_deref() {
                Some(p) if p == Path::new("-") => {
                    print!("{}", report.to_json());
                    for w in &report.warnings {
                        eprintln!("warning: {w}");
                    }
                }
                Some(p) => {
                    write_text(p, &report.to_json())?;
                    print!("{report}");
                }
                None => print!("{report}"),
            }
        }
        Command::PiDegree { config } => {
            let ring = load_ring(&config)?;
            let d = lattice::pi_degree(ring.cd())?;
            println!("{d}");
            eprintln!("h = {}", lattice::image_cardinality(ring.cd()));
        }
        Command::CenterBasis { config } => {
            let ring = load_ring(&config)?;
            for row in lattice::kernel_lattice(ring.cd()).rows() {
                let cols: Vec<String> = row.iter().map(i64::to_string).collect();
                println!("{}", cols.join(" "));
            }
        }
        Command::Mul { config, lhs, rhs, out } => {
            let ring = load_ring(&config)?;
            let f = load_series(&ring, &lhs)?;
            let g = load_series(&ring, &rhs)?;
            emit_series(&ring, &ring.mul(&f, &g)?, out.as_deref())?;
        }
        Command::Invert { config, input, precision, out } => {
            let ring = load_ring(&config)?;
            let f = load_series(&ring, &input)?;
            emit_series(&ring, &ring.invert(&f, precision)?, out.as_deref())?;
        }
        Command::IsCentral { config, input } => {
            let ring = load_ring(&config)?;
            let f = load_series(&ring, &input)?;
            println!("{}", ring.is_central(&f)?);
        }
        Command::Oracle { config, check, box_radius } => {
            let ring = load_ring(&config)?;
            let cd = ring.cd();
            let budget = Budget::from_env()?;
            match check {
                OracleCheck::Image => {
                    verify::check_image_oracle(cd, budget)?;
                    println!("image cardinality agrees: h = {}", lattice::image_cardinality(cd));
                }
                OracleCheck::Diagonal => {
                    verify::check_diagonal_oracle(cd, budget)?;
                    let v = lattice::positive_diagonal_decision(cd);
                    println!("positive-diagonal verdict agrees: {}", v.is_positive_diagonal);
                }
                OracleCheck::Kernel => {
                    let r = box_radius.unwrap_or(cd.ell());
                    let count = verify::check_kernel_box(cd, r, budget)?;
                    let central = qtorus::oracle::brute_central_support(cd, r, budget)?.len();
                    println!("kernel membership agrees on {count} points of box radius {r} ({central} central)");
                }
            }
        }
        Command::Verify { config, seed } => {
            let opts = SuiteOptions { budget: Budget::from_env()?, ..Default::default() };
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let mut failed = 0;
            for path in &config {
                let cfg = load_config(path)?;
                println!("{}", path.display());
                let outcomes = verify::run_suite(&cfg, &mut rng, &opts)
                    .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
                for o in &outcomes {
                    println!("  {o}");
                }
                failed += outcomes.iter().filter(|o| o.failed()).count();
            }
            if failed > 0 {
                return Err(Failure(format!("{failed} check(s) failed")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
