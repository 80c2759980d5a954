use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ffcs::experiments::{self, Experiment, ExperimentConfig, ExperimentError, OrientationSetting};
use ffcs::field::Field;
use ffcs::format;
use ffcs::matrix::FieldVector;
use ffcs::noisy::{NoiseModel, NoisyOptions, NoisyScheme};
use ffcs::sensing::{SchemeOptions, SensingScheme, SparseSignal};

#[derive(Parser)]
#[command(name = "ffcs", version, about = "Compressive sensing over finite fields")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    Rows,
    Columns,
}

#[derive(clap::Args)]
struct RunArgs {
    /// TOML experiment config; defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker thread cap.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum)]
    orientation: Option<OrientationArg>,
}

#[derive(Subcommand)]
enum Verb {
    /// Print field parameters and the power table for small fields.
    FieldInfo {
        #[arg(long)]
        q: u64,
    },
    /// Construct a sensing scheme and write it to a file.
    BuildScheme {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: usize,
        /// Lift degree override.
        #[arg(long)]
        s: Option<u32>,
        /// `worstcase:DELTA` or `qsymmetric:LAMBDA` for a noise-protected scheme.
        #[arg(long)]
        noise: Option<String>,
        #[arg(long, default_value_t = 1.5)]
        rate_margin: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Measure a signal file with a scheme.
    Measure {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        signal: PathBuf,
        /// Add noise drawn from the scheme's model with this seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recover a signal from a measurement file.
    Recover {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        measurements: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    Sweep(RunArgs),
    Saturation(RunArgs),
    Track(RunArgs),
    Noise(RunArgs),
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Config(m) => Failure::Config(m),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn rt(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.verb) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn parse_noise(spec: &str) -> Result<NoiseModel, Failure> {
    let (kind, value) = spec
        .split_once(':')
        .ok_or_else(|| Failure::Config(format!("bad noise spec {spec:?}")))?;
    let v: f64 = value
        .parse()
        .map_err(|_| Failure::Config(format!("bad noise parameter {value:?}")))?;
    match kind {
        "worstcase" => Ok(NoiseModel::WorstCase { delta: v }),
        "qsymmetric" => Ok(NoiseModel::QSymmetric { lambda: v }),
        _ => Err(Failure::Config(format!("unknown noise model {kind:?}"))),
    }
}

enum AnyScheme {
    Plain(SensingScheme),
    Noisy(NoisyScheme),
}

fn load_scheme(path: &Path) -> Result<AnyScheme, Failure> {
    let text = fs::read_to_string(path).map_err(|e| rt(format!("{}: {e}", path.display())))?;
    let noisy = text.lines().nth(4).is_some_and(|l| l.starts_with("outer"));
    if noisy {
        Ok(AnyScheme::Noisy(format::read_noisy_scheme(text.as_bytes()).map_err(rt)?))
    } else {
        Ok(AnyScheme::Plain(format::read_scheme(text.as_bytes()).map_err(rt)?))
    }
}

fn read_vector(path: &Path) -> Result<Vec<u32>, Failure> {
    let f = fs::File::open(path).map_err(|e| rt(format!("{}: {e}", path.display())))?;
    format::read_vector(BufReader::new(f)).map_err(rt)
}

fn create(path: &Path) -> Result<BufWriter<fs::File>, Failure> {
    Ok(BufWriter::new(fs::File::create(path).map_err(|e| rt(format!("{}: {e}", path.display())))?))
}

fn dispatch(verb: Verb) -> Result<(), Failure> {
    match verb {
        Verb::FieldInfo { q } => {
            let f = Field::of_order(q).map_err(|e| Failure::Config(e.to_string()))?;
            println!("q = {} = {}^{}", f.order(), f.characteristic(), f.degree());
            println!("primitive polynomial (constant term first): {:?}", f.prim_poly());
            if f.order() <= 64 {
                println!("{:>6}  {:>6}  coordinates", "power", "index");
                for e in 0..f.group_order() {
                    let a = f.alpha_pow(e as i64);
                    println!("{e:>6}  {a:>6}  {:?}", f.digits(a));
                }
            }
            Ok(())
        }
        Verb::BuildScheme { q, n, b, s, noise, rate_margin, out } => {
            let inner = SensingScheme::build_with(q, n, b, SchemeOptions { lift_degree: s })
                .map_err(|e| Failure::Config(e.to_string()))?;
            let w = create(&out)?;
            match noise {
                None => format::write_scheme(w, &inner).map_err(rt)?,
                Some(spec) => {
                    let model = parse_noise(&spec)?;
                    let scheme = NoisyScheme::from_inner(inner, model, NoisyOptions { rate_margin })
                        .map_err(|e| Failure::Config(e.to_string()))?;
                    format::write_noisy_scheme(w, &scheme).map_err(rt)?;
                }
            }
            Ok(())
        }
        Verb::Measure { scheme, signal, seed, out } => {
            let x = SparseSignal::from_dense(&read_vector(&signal)?);
            let y = match load_scheme(&scheme)? {
                AnyScheme::Plain(s) => s.measure(&x).map_err(rt)?,
                AnyScheme::Noisy(s) => match seed {
                    Some(seed) => s.measure_noisy(&x, &s.model(), seed).map_err(rt)?,
                    None => s.measure(&x).map_err(rt)?,
                },
            };
            format::write_dense(create(&out)?, y.as_slice()).map_err(rt)
        }
        Verb::Recover { scheme, measurements, out } => {
            let y = read_vector(&measurements)?;
            let x = match load_scheme(&scheme)? {
                AnyScheme::Plain(s) => {
                    let y = FieldVector::new(s.base_field(), y).map_err(rt)?;
                    s.recover(&y).map_err(rt)?
                }
                AnyScheme::Noisy(s) => {
                    let y = FieldVector::new(s.inner().base_field(), y).map_err(rt)?;
                    s.recover_noisy(&y).map_err(rt)?
                }
            };
            let mut w = create(&out)?;
            format::write_sparse(&mut w, &x).map_err(rt)?;
            w.flush().map_err(rt)
        }
        Verb::Sweep(args) => run_experiment(args, &[Experiment::RecoverySweep]),
        Verb::Saturation(args) => run_experiment(args, &[Experiment::MeasurementSaturation]),
        Verb::Track(args) => run_experiment(args, &[Experiment::TrackSynthetic, Experiment::TrackCsv]),
        Verb::Noise(args) => run_experiment(args, &[Experiment::NoiseSuite]),
    }
}

fn run_experiment(args: RunArgs, allowed: &[Experiment]) -> Result<(), Failure> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::defaults(allowed[0]),
    };
    if !allowed.contains(&cfg.experiment) {
        return Err(Failure::Config(format!(
            "config is for {:?}, this verb runs {:?}",
            cfg.experiment, allowed
        )));
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = args.out {
        cfg.out = out;
    }
    if let Some(o) = args.orientation {
        cfg.orientation = match o {
            OrientationArg::Rows => OrientationSetting::Rows,
            OrientationArg::Columns => OrientationSetting::Columns,
        };
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = args.workers {
        if w == 0 {
            return Err(Failure::Config("--workers must be positive".into()));
        }
        pool = pool.num_threads(w);
    }
    let pool = pool.build().map_err(rt)?;
    let written = pool.install(|| experiments::run(&cfg))?;
    for p in written {
        println!("{}", p.display());
    }
    Ok(())
}
