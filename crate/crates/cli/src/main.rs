//! Command-line runner: modulus certification, transform evaluation,
//! seminorm estimation, boundary extension, and the experiment suites,
//! all exchanged through CSV grids and JSON configs.
//!
//! Exit codes: 0 success, 1 validation error, 2 numerical/resolution
//! error, 64 unknown subcommand.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use beurling_core::extension::extend_for_domain;
use beurling_core::geometry::{DomainSpec, PlanarDomain, Square};
use beurling_core::grid::GridFunction;
use beurling_core::harness::{run_experiment, ExperimentConfig, ExperimentKind};
use beurling_core::moduli::Modulus;
use beurling_core::seminorms::{
    bloch_seminorm_sided, campanato_seminorm_with_centers, lipschitz_seminorm, ArgmaxSite,
    CenterRule, CollarSide, SeminormEstimate,
};
use beurling_core::transform::{beurling_spectral, restricted_beurling, TransformMethod};
use beurling_core::{Complex64, Error};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "beurling",
    about = "Restricted Beurling transform toolkit: transforms, seminorms, extensions, experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify a modulus of continuity: Dini integral, almost-decreasing
    /// constant, weak-regularity constant.
    CheckModulus(CheckModulusArgs),
    /// Apply the (restricted) transform to a grid function.
    Transform(TransformArgs),
    /// Estimate a weighted seminorm of a grid function.
    Seminorm(SeminormArgs),
    /// Extend a function from a domain to a larger box by boundary reflection.
    Extend(ExtendArgs),
    /// Run one of the experiment suites and write its ratio report.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Power,
    Log,
    Tabulated,
}

#[derive(Args)]
struct ModulusSource {
    /// Modulus as a JSON file (alternative to --family).
    #[arg(long, value_name = "FILE", conflicts_with = "family")]
    modulus: Option<PathBuf>,
    /// Built-in family: power t^alpha or log (1 - ln t)^-(1+beta), or a
    /// tabulated set of knots.
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// Exponent for --family power.
    #[arg(long)]
    alpha: Option<f64>,
    /// Exponent offset for --family log.
    #[arg(long)]
    beta: Option<f64>,
    /// JSON file with [[t, omega], ...] knots for --family tabulated.
    #[arg(long, value_name = "FILE")]
    knots: Option<PathBuf>,
    /// Domain cap T (largest argument the modulus is defined at).
    #[arg(long)]
    cap: Option<f64>,
}

impl ModulusSource {
    fn build(&self) -> Result<Modulus, Error> {
        if let Some(path) = &self.modulus {
            return Modulus::from_json(&read_text(path)?);
        }
        match self.family {
            Some(FamilyArg::Power) => {
                let alpha = self
                    .alpha
                    .ok_or_else(|| Error::Parse("--family power needs --alpha".into()))?;
                match self.cap {
                    Some(cap) => Modulus::power_with_cap(alpha, cap),
                    None => Modulus::power(alpha),
                }
            }
            Some(FamilyArg::Log) => {
                let beta = self
                    .beta
                    .ok_or_else(|| Error::Parse("--family log needs --beta".into()))?;
                match self.cap {
                    Some(cap) => Modulus::log_with_cap(beta, cap),
                    None => Modulus::log_family(beta),
                }
            }
            Some(FamilyArg::Tabulated) => {
                let path = self
                    .knots
                    .as_ref()
                    .ok_or_else(|| Error::Parse("--family tabulated needs --knots".into()))?;
                let knots: Vec<[f64; 2]> = serde_json::from_str(&read_text(path)?)
                    .map_err(|e| Error::Parse(format!("knots file: {e}")))?;
                Modulus::tabulated(knots)
            }
            None => Err(Error::Parse(
                "a modulus is required: --modulus FILE or --family ...".into(),
            )),
        }
    }
}

#[derive(Args)]
struct CheckModulusArgs {
    #[command(flatten)]
    modulus: ModulusSource,
    /// Exponent for the almost-decreasing probe of omega(t)/t^epsilon.
    #[arg(long, default_value_t = 0.75)]
    epsilon: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Spectral,
    Direct,
}

#[derive(Args)]
struct TransformArgs {
    /// Input grid function (CSV).
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Output grid function (CSV).
    #[arg(long, value_name = "FILE")]
    output: PathBuf,
    /// Evaluation route.
    #[arg(long, value_enum, default_value = "spectral")]
    method: MethodArg,
    /// Zero-padding factor for the spectral route.
    #[arg(long, default_value_t = 4)]
    pad: usize,
    /// Exclusion radius for the direct route (defaults to 2h).
    #[arg(long)]
    exclusion: Option<f64>,
    /// Domain JSON; when given, the transform is restricted to the domain.
    #[arg(long, value_name = "FILE")]
    domain: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeminormKind {
    Campanato,
    Lipschitz,
    Bloch,
}

#[derive(Clone, Copy, ValueEnum)]
enum CenterArg {
    Mean,
    Median,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Interior,
    Exterior,
    Both,
}

#[derive(Args)]
struct SeminormArgs {
    /// Which seminorm to estimate.
    #[arg(value_enum)]
    kind: SeminormKind,
    /// Input grid function (CSV).
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    #[command(flatten)]
    modulus: ModulusSource,
    /// Domain JSON; required for bloch, optional restriction otherwise.
    #[arg(long, value_name = "FILE")]
    domain: Option<PathBuf>,
    /// Oscillation exponent for campanato (1 or 2).
    #[arg(long, default_value_t = 1)]
    p: u8,
    /// Number of dyadic scales below the box side for campanato.
    #[arg(long, default_value_t = 4)]
    depth: u32,
    /// Shifted lattices per axis and scale for campanato.
    #[arg(long, default_value_t = 2)]
    shifts: u32,
    /// Center statistic for campanato squares.
    #[arg(long, value_enum, default_value = "mean")]
    centers: CenterArg,
    /// Collar bounds (boundary distances) for bloch.
    #[arg(long, requires = "collar_max")]
    collar_min: Option<f64>,
    #[arg(long, requires = "collar_min")]
    collar_max: Option<f64>,
    /// Which side of the boundary the bloch collar lives on.
    #[arg(long, value_enum, default_value = "interior")]
    side: SideArg,
    /// Write the per-scale breakdown (CSV) here.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExtendArgs {
    /// Input grid function (CSV), sampled on a box containing the domain.
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Domain JSON to reflect across.
    #[arg(long, value_name = "FILE")]
    domain: PathBuf,
    /// Side of the output box, centered with the input grid.
    #[arg(long)]
    target_side: f64,
    /// Output grid function (CSV).
    #[arg(long, value_name = "FILE")]
    output: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Suite: invariance, lift, bloch, embedding, or decomposition.
    kind: String,
    /// Experiment configuration (JSON).
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
    /// Ratio report destination (CSV).
    #[arg(long, value_name = "FILE")]
    output: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::InvalidSubcommand => 64,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::CheckModulus(args) => check_modulus(args),
        Command::Transform(args) => transform(args),
        Command::Seminorm(args) => seminorm(args),
        Command::Extend(args) => extend(args),
        Command::Experiment(args) => experiment(args),
    }
}

/// Print a stdout line, ending quietly if the reader has gone away
/// (e.g. the output is piped into `head`): Rust ignores SIGPIPE, so an
/// unchecked `println!` would panic on EPIPE instead.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let mut out = std::io::stdout().lock();
        if writeln!(out, $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

fn with_path(e: std::io::Error, path: &PathBuf) -> Error {
    Error::Io(std::io::Error::new(
        e.kind(),
        format!("{}: {e}", path.display()),
    ))
}

fn read_text(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| with_path(e, path))
}

fn write_text(path: &PathBuf, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| with_path(e, path))
}

fn load_domain(path: &PathBuf) -> Result<PlanarDomain, Error> {
    DomainSpec::from_json(&read_text(path)?)?.build()
}

fn check_modulus(args: CheckModulusArgs) -> Result<(), Error> {
    let m = args.modulus.build()?;
    let report = m.check_regular(args.epsilon)?;
    say!("dini_value={}", report.dini_value);
    say!("epsilon={}", report.epsilon);
    say!("almost_dec_constant={}", report.almost_dec_constant);
    say!("weak_constant={}", report.weak_constant);
    say!("is_regular={}", report.is_regular);
    Ok(())
}

fn transform(args: TransformArgs) -> Result<(), Error> {
    let f = GridFunction::load(&args.input)?;
    let out = match (&args.domain, args.method) {
        (Some(path), method) => {
            let d = load_domain(path)?;
            let method = match method {
                MethodArg::Spectral => TransformMethod::Spectral { pad_factor: args.pad },
                MethodArg::Direct => TransformMethod::Direct {
                    exclusion_radius: args.exclusion,
                },
            };
            restricted_beurling(&d, &f, method)?
        }
        (None, MethodArg::Spectral) => beurling_spectral(&f, args.pad)?,
        (None, MethodArg::Direct) => {
            return Err(Error::Parse(
                "the direct route needs --domain (it evaluates at interior cells only)".into(),
            ));
        }
    };
    out.save(&args.output)?;
    say!(
        "transformed n={} box side {} -> {}",
        out.n(),
        out.bounding_box().side,
        args.output.display()
    );
    Ok(())
}

fn print_estimate(label: &str, est: &SeminormEstimate, output: Option<&PathBuf>) -> Result<(), Error> {
    say!("{label}={}", est.value);
    let witness = match est.argmax {
        ArgmaxSite::None => None,
        ArgmaxSite::Square(q) => Some(q.center),
        ArgmaxSite::Point(z) => Some(z),
        ArgmaxSite::Pair(z, w) => Some(0.5 * (z + w)),
    };
    if let Some(z) = witness {
        say!("argmax={},{}", z.re, z.im);
    }
    if let Some(path) = output {
        write_text(path, &est.per_scale_csv())?;
    }
    Ok(())
}

fn seminorm(args: SeminormArgs) -> Result<(), Error> {
    let f = GridFunction::load(&args.input)?;
    let m = args.modulus.build()?;
    let domain = args.domain.as_ref().map(load_domain).transpose()?;
    match args.kind {
        SeminormKind::Campanato => {
            let rule = match args.centers {
                CenterArg::Mean => CenterRule::Mean,
                CenterArg::Median => CenterRule::Median,
            };
            let est = campanato_seminorm_with_centers(
                &f,
                &m,
                args.p,
                domain.as_ref(),
                args.depth,
                args.shifts,
                rule,
            )?;
            print_estimate("campanato", &est, args.output.as_ref())
        }
        SeminormKind::Lipschitz => {
            let n = f.n();
            let mut samples = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    let z = f.cell_center(i, j);
                    if domain.as_ref().map_or(true, |d| d.contains(z)) {
                        samples.push((z, f.get(i, j)));
                    }
                }
            }
            let est = lipschitz_seminorm(&samples, &m)?;
            print_estimate("lipschitz", &est, args.output.as_ref())
        }
        SeminormKind::Bloch => {
            let d = domain.ok_or_else(|| {
                Error::Parse("bloch needs --domain (the collar is measured from its boundary)".into())
            })?;
            let collar = match (args.collar_min, args.collar_max) {
                (Some(a), Some(b)) => (a, b),
                _ => (4.0 * f.spacing(), 0.25 * d.r_min()),
            };
            let side = match args.side {
                SideArg::Interior => CollarSide::Interior,
                SideArg::Exterior => CollarSide::Exterior,
                SideArg::Both => CollarSide::Both,
            };
            let est = bloch_seminorm_sided(&f, &d, &m, collar, side)?;
            print_estimate("bloch", &est, args.output.as_ref())
        }
    }
}

fn extend(args: ExtendArgs) -> Result<(), Error> {
    let f = GridFunction::load(&args.input)?;
    let d = load_domain(&args.domain)?;
    let target = Square::new(
        Complex64::new(f.bounding_box().center.re, f.bounding_box().center.im),
        args.target_side,
    );
    let ext = extend_for_domain(&d, &f, target)?;
    ext.save(&args.output)?;
    say!(
        "extended to n={} box side {} -> {}",
        ext.n(),
        ext.bounding_box().side,
        args.output.display()
    );
    Ok(())
}

fn experiment(args: ExperimentArgs) -> Result<(), Error> {
    let kind = ExperimentKind::from_str(&args.kind)?;
    let cfg = ExperimentConfig::from_json(&read_text(&args.config)?)?;
    let report = run_experiment(kind, &cfg)?;
    write_text(&args.output, &report.to_csv())?;
    say!(
        "rows={} max_ratio={} all_finite={} -> {}",
        report.rows.len(),
        report.max_ratio(),
        report.all_finite,
        args.output.display()
    );
    Ok(())
}
