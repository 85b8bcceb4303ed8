//! Subcommand definitions and their implementations.
//!
//! Exit-code contract: 0 success, 1 failed verification, 2 invalid flags or
//! parameters, 3 unwritable output path.

use std::fmt::Display;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use slitmodes::num_complex::Complex64;

use slitmodes::montecarlo::{self, SamplerConfig};
use slitmodes::verify::{self, FaultInjection, VerifyLevel};
use slitmodes::{
    beta_from_angle, correlations, dark_shares, decompose, states, Beta, CouplingConfig,
    QuantumSource, SlitGeometry, DEFAULT_N_MAX,
};

use crate::output::{write_output, Field, Format, OutputRecord, Provenance};

/// Detector-oriented bright/dark mode toolkit for single-slit diffraction.
#[derive(Debug, Parser)]
#[command(name = "slitmodes", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical diffraction profile over a uniform angle grid.
    Pattern(PatternArgs),
    /// Mode coefficients, weights, and dark shares at one angle.
    Decompose(DecomposeArgs),
    /// First- and second-order correlation functions for a source.
    Correlate(CorrelateArgs),
    /// Run the built-in invariant and oracle suites.
    Verify(VerifyArgs),
    /// Seeded Monte Carlo sampling of detections or g2.
    Sample(SampleArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output path; stdout when omitted. Files are written atomically.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Omit the provenance block (tool version, timestamp, seed echo) so
    /// identical runs produce byte-identical files.
    #[arg(long)]
    pub no_provenance: bool,
}

#[derive(Debug, Args)]
pub struct PatternArgs {
    /// Slit width b, meters.
    #[arg(long)]
    pub slit_width: f64,
    /// Wavelength lambda, meters.
    #[arg(long)]
    pub wavelength: f64,
    /// Left edge of the angle grid, radians.
    #[arg(long, allow_negative_numbers = true)]
    pub theta_min: f64,
    /// Right edge of the angle grid, radians.
    #[arg(long, allow_negative_numbers = true)]
    pub theta_max: f64,
    /// Number of grid points (>= 2), endpoints included.
    #[arg(long)]
    pub points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AngleSpec {
    /// Dimensionless beta; mutually exclusive with the physical triple.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Slit width b, meters (with --wavelength and --theta).
    #[arg(long)]
    pub slit_width: Option<f64>,
    /// Wavelength lambda, meters.
    #[arg(long)]
    pub wavelength: Option<f64>,
    /// Detection angle, radians.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub angle: AngleSpec,
    /// Truncation: modes n in [-nmax, nmax].
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    pub nmax: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    /// Source: `single`, `fock:N`, or `coherent:RE,IM`.
    #[arg(long)]
    pub source: String,
    #[command(flatten)]
    pub angle: AngleSpec,
    /// Detector coupling strength g.
    #[arg(long, default_value_t = 1.0)]
    pub coupling: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Quick,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    /// Conjugate the coefficients feeding the Fock-state constructor.
    FlipPhase,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite size: quick (sub-second) or full (adds the large sweeps).
    #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
    pub level: LevelArg,
    /// Deliberately corrupt one code path to prove the suite can fail.
    #[arg(long, value_enum)]
    pub inject_fault: Option<FaultArg>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Observable {
    /// Histogram of detection angles.
    Pattern,
    /// Empirical g2 with its standard error.
    G2,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// What to estimate.
    #[arg(long, value_enum, default_value_t = Observable::Pattern)]
    pub observable: Observable,
    /// Source: `single`, `fock:N`, or `coherent:RE,IM`.
    #[arg(long)]
    pub source: String,
    /// Number of detection events to draw (>= 1).
    #[arg(long)]
    pub shots: u64,
    /// RNG seed; equal seeds reproduce outputs bit for bit.
    #[arg(long)]
    pub seed: u64,
    /// Histogram bins (pattern mode).
    #[arg(long, default_value_t = 201)]
    pub bins: usize,
    /// Left edge of the sampled angle range, radians (pattern mode).
    #[arg(long, default_value_t = -0.5, allow_negative_numbers = true)]
    pub theta_min: f64,
    /// Right edge of the sampled angle range, radians (pattern mode).
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub theta_max: f64,
    #[command(flatten)]
    pub angle: AngleSpec,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Errors mapped to process exit codes by `main`.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2.
    Usage(String),
    /// Exit 3.
    Output(String),
}

fn usage(err: impl Display) -> CliError {
    CliError::Usage(err.to_string())
}

type CmdResult = Result<u8, CliError>;

pub fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Pattern(args) => run_pattern(args),
        Command::Decompose(args) => run_decompose(args),
        Command::Correlate(args) => run_correlate(args),
        Command::Verify(args) => run_verify(args),
        Command::Sample(args) => run_sample(args),
    }
}

fn parse_source(text: &str) -> Result<QuantumSource, CliError> {
    if text == "single" {
        return Ok(QuantumSource::SinglePhoton);
    }
    if let Some(rest) = text.strip_prefix("fock:") {
        let photons: u32 = rest
            .parse()
            .map_err(|_| usage(format!("bad photon number in --source {text}")))?;
        return QuantumSource::fock(photons)
            .ok_or_else(|| usage("fock source needs at least one photon"));
    }
    if let Some(rest) = text.strip_prefix("coherent:") {
        let (re, im) = rest
            .split_once(',')
            .ok_or_else(|| usage(format!("--source {text} must be coherent:RE,IM")))?;
        let re: f64 = re
            .parse()
            .map_err(|_| usage(format!("bad real part in --source {text}")))?;
        let im: f64 = im
            .parse()
            .map_err(|_| usage(format!("bad imaginary part in --source {text}")))?;
        if !(re.is_finite() && im.is_finite()) {
            return Err(usage("coherent amplitude must be finite"));
        }
        return Ok(QuantumSource::Coherent(Complex64::new(re, im)));
    }
    Err(usage(format!(
        "unknown --source {text}; expected single, fock:N, or coherent:RE,IM"
    )))
}

/// Resolves the two angle-flag styles to a beta, plus the geometry when the
/// physical triple was given (some sources need the slit width).
fn resolve_angle(spec: &AngleSpec) -> Result<(Beta, Option<SlitGeometry>), CliError> {
    let physical = (spec.slit_width, spec.wavelength, spec.theta);
    match (spec.beta, physical) {
        (Some(beta), (None, None, None)) => Ok((Beta::new(beta).map_err(usage)?, None)),
        (None, (Some(b), Some(lambda), Some(theta))) => {
            let geom = SlitGeometry::new(b, lambda).map_err(usage)?;
            let beta = beta_from_angle(&geom, theta).map_err(usage)?;
            Ok((beta, Some(geom)))
        }
        (Some(_), _) => Err(usage(
            "--beta conflicts with --slit-width/--wavelength/--theta; pick one style",
        )),
        _ => Err(usage(
            "specify either --beta or all of --slit-width, --wavelength, --theta",
        )),
    }
}

/// Geometry for sources whose photon number involves the slit width.
fn geometry_for(src: &QuantumSource, geom: Option<SlitGeometry>) -> Result<SlitGeometry, CliError> {
    match (src, geom) {
        (_, Some(geom)) => Ok(geom),
        (QuantumSource::Coherent(_), None) => Err(usage(
            "a coherent source carries |alpha|^2 * b photons; give the physical \
             --slit-width/--wavelength/--theta instead of --beta",
        )),
        // Single-photon and Fock totals never involve the slit width.
        (_, None) => Ok(SlitGeometry::new(1.0, 1.0).expect("unit geometry is valid")),
    }
}

fn param(key: &str, value: impl Display) -> (String, String) {
    (key.to_string(), value.to_string())
}

fn emit(record: OutputRecord, output: &OutputArgs) -> CmdResult {
    let text = record.render(output.format);
    write_output(&text, output.out.as_deref())
        .map_err(|e| CliError::Output(format!("cannot write output: {e}")))?;
    Ok(0)
}

fn provenance(output: &OutputArgs, seed: Option<u64>) -> Option<Provenance> {
    if output.no_provenance {
        None
    } else {
        Some(Provenance::now(seed))
    }
}

fn run_pattern(args: PatternArgs) -> CmdResult {
    if args.points < 2 {
        return Err(usage("--points must be at least 2"));
    }
    if !args.theta_min.is_finite()
        || !args.theta_max.is_finite()
        || args.theta_min >= args.theta_max
    {
        return Err(usage("--theta-min must be below --theta-max"));
    }
    let geom = SlitGeometry::new(args.slit_width, args.wavelength).map_err(usage)?;
    let span = args.theta_max - args.theta_min;
    let steps = (args.points - 1) as f64;
    let grid: Vec<f64> = (0..args.points)
        .map(|i| args.theta_min + span * i as f64 / steps)
        .collect();
    let rows = slitmodes::pattern(&geom, &grid)
        .map_err(usage)?
        .into_iter()
        .map(|p| {
            vec![
                Field::Float(p.theta),
                Field::Float(p.beta),
                Field::Float(p.intensity),
            ]
        })
        .collect();

    emit(
        OutputRecord {
            command: "pattern".into(),
            parameters: vec![
                param("slit_width", args.slit_width),
                param("wavelength", args.wavelength),
                param("theta_min", args.theta_min),
                param("theta_max", args.theta_max),
                param("points", args.points),
            ],
            columns: vec!["theta", "beta", "intensity"],
            rows,
            footer: vec![],
            provenance: provenance(&args.output, None),
        },
        &args.output,
    )
}

fn run_decompose(args: DecomposeArgs) -> CmdResult {
    let (beta, _) = resolve_angle(&args.angle)?;
    let dec = decompose(beta, args.nmax).map_err(usage)?;
    let shares = dark_shares(&dec).ok();

    let rows = dec
        .iter()
        .map(|(n, c)| {
            let share = match &shares {
                Some(map) if n.0 != 0 => Field::Float(map[&n]),
                _ => Field::Empty,
            };
            vec![
                Field::Int(i64::from(n.0)),
                Field::Float(c.re),
                Field::Float(c.im),
                Field::Float(c.norm_sqr()),
                share,
            ]
        })
        .collect();

    emit(
        OutputRecord {
            command: "decompose".into(),
            parameters: vec![param("beta", beta.value()), param("nmax", args.nmax)],
            columns: vec!["n", "re", "im", "weight", "dark_share"],
            rows,
            footer: vec![
                (
                    "captured_weight".into(),
                    Field::Float(dec.captured_weight()),
                ),
                ("tail_bound".into(), Field::Float(dec.tail_bound())),
            ],
            provenance: provenance(&args.output, None),
        },
        &args.output,
    )
}

fn run_correlate(args: CorrelateArgs) -> CmdResult {
    let src = parse_source(&args.source)?;
    let (beta, geom) = resolve_angle(&args.angle)?;
    let geom = geometry_for(&src, geom)?;
    let cfg = CouplingConfig::new(args.coupling).map_err(usage)?;

    let result = correlations::evaluate(&src, beta, &geom, &cfg);
    let g2_field = match result.g2 {
        Some(v) => Field::Float(v),
        None => Field::Text("undefined".into()),
    };

    emit(
        OutputRecord {
            command: "correlate".into(),
            parameters: vec![
                param("source", &args.source),
                param("beta", beta.value()),
                param("coupling", args.coupling),
            ],
            columns: vec!["g1", "g2", "mean_total_photons", "bright_mode_population"],
            rows: vec![vec![
                Field::Float(result.g1),
                g2_field,
                Field::Float(states::mean_total_photons(&src, &geom)),
                Field::Float(states::bright_mode_population(&src, beta, &geom)),
            ]],
            footer: vec![],
            provenance: provenance(&args.output, None),
        },
        &args.output,
    )
}

fn run_verify(args: VerifyArgs) -> CmdResult {
    let level = match args.level {
        LevelArg::Quick => VerifyLevel::Quick,
        LevelArg::Full => VerifyLevel::Full,
    };
    let fault = args
        .inject_fault
        .map(|FaultArg::FlipPhase| FaultInjection::FlipCoefficientPhase);
    let report = verify::run_verification(level, fault);

    let rows = report
        .checks
        .iter()
        .map(|c| {
            vec![
                Field::Text(c.name.clone()),
                Field::Float(c.residual),
                Field::Float(c.tolerance),
                Field::Text(if c.passed { "pass" } else { "fail" }.into()),
            ]
        })
        .collect();

    let failures = report.failures();
    let record = OutputRecord {
        command: "verify".into(),
        parameters: vec![
            param("level", format!("{:?}", args.level).to_lowercase()),
            param(
                "inject_fault",
                args.inject_fault
                    .map_or("none".to_string(), |FaultArg::FlipPhase| {
                        "flip-phase".to_string()
                    }),
            ),
        ],
        columns: vec!["check", "residual", "tolerance", "status"],
        rows,
        footer: vec![
            ("checks".into(), Field::UInt(report.checks.len() as u64)),
            ("failures".into(), Field::UInt(failures as u64)),
        ],
        provenance: provenance(&args.output, None),
    };
    let text = record.render(args.output.format);
    write_output(&text, args.output.out.as_deref())
        .map_err(|e| CliError::Output(format!("cannot write report: {e}")))?;
    eprintln!(
        "verify: {}/{} checks passed ({:?})",
        report.checks.len() - failures,
        report.checks.len(),
        level
    );
    Ok(if failures == 0 { 0 } else { 1 })
}

fn run_sample(args: SampleArgs) -> CmdResult {
    let src = parse_source(&args.source)?;
    match args.observable {
        Observable::Pattern => sample_pattern_mode(&args, &src),
        Observable::G2 => sample_g2_mode(&args, &src),
    }
}

fn sample_pattern_mode(args: &SampleArgs, _src: &QuantumSource) -> CmdResult {
    // The angular density is the bright probability for every source; the
    // source flag is echoed into the parameters for provenance only.
    let (slit_width, wavelength) = match (args.angle.slit_width, args.angle.wavelength) {
        (Some(b), Some(l)) => (b, l),
        _ => {
            return Err(usage(
                "pattern sampling needs --slit-width and --wavelength",
            ))
        }
    };
    let geom = SlitGeometry::new(slit_width, wavelength).map_err(usage)?;
    let cfg = SamplerConfig::new(
        args.seed,
        args.shots,
        args.theta_min,
        args.theta_max,
        args.bins,
    )
    .map_err(usage)?;
    let hist = montecarlo::sample_pattern(&geom, &cfg).map_err(usage)?;

    let rows = hist
        .counts()
        .iter()
        .enumerate()
        .map(|(i, &count)| {
            vec![
                Field::Float(hist.bin_edges()[i]),
                Field::Float(hist.bin_edges()[i + 1]),
                Field::UInt(count),
            ]
        })
        .collect();

    emit(
        OutputRecord {
            command: "sample".into(),
            parameters: vec![
                param("observable", "pattern"),
                param("source", &args.source),
                param("slit_width", slit_width),
                param("wavelength", wavelength),
                param("theta_min", args.theta_min),
                param("theta_max", args.theta_max),
                param("bins", args.bins),
                param("shots", args.shots),
                param("seed", args.seed),
            ],
            columns: vec!["theta_lo", "theta_hi", "count"],
            rows,
            footer: vec![("total".into(), Field::UInt(hist.total()))],
            provenance: provenance(&args.output, Some(args.seed)),
        },
        &args.output,
    )
}

fn sample_g2_mode(args: &SampleArgs, src: &QuantumSource) -> CmdResult {
    let (beta, geom) = resolve_angle(&args.angle)?;
    let geom = geometry_for(src, geom)?;
    // Binning flags are irrelevant here; feed the validator something sane.
    let cfg = SamplerConfig::new(args.seed, args.shots, -0.5, 0.5, 1).map_err(usage)?;
    let est = montecarlo::sample_g2_detailed(src, beta, &geom, &cfg).map_err(usage)?;

    emit(
        OutputRecord {
            command: "sample".into(),
            parameters: vec![
                param("observable", "g2"),
                param("source", &args.source),
                param("beta", beta.value()),
                param("shots", args.shots),
                param("seed", args.seed),
            ],
            columns: vec!["g2", "stderr", "shots"],
            rows: vec![vec![
                Field::Float(est.g2),
                Field::Float(est.stderr),
                Field::UInt(est.shots),
            ]],
            footer: vec![],
            provenance: provenance(&args.output, Some(args.seed)),
        },
        &args.output,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn source_parsing() {
        assert!(matches!(
            parse_source("single"),
            Ok(QuantumSource::SinglePhoton)
        ));
        assert!(matches!(parse_source("fock:3"), Ok(QuantumSource::Fock(n)) if n.get() == 3));
        match parse_source("coherent:1.5,-0.25") {
            Ok(QuantumSource::Coherent(a)) => assert_eq!(a, Complex64::new(1.5, -0.25)),
            other => panic!("{other:?}"),
        }
        for bad in [
            "fock:0",
            "fock:x",
            "coherent:1",
            "thermal",
            "coherent:inf,0",
        ] {
            assert!(parse_source(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn angle_styles_are_exclusive() {
        let both = AngleSpec {
            beta: Some(1.0),
            slit_width: Some(1.0),
            wavelength: Some(1.0),
            theta: Some(0.0),
        };
        assert!(resolve_angle(&both).is_err());
        let neither = AngleSpec {
            beta: None,
            slit_width: None,
            wavelength: None,
            theta: Some(0.1),
        };
        assert!(resolve_angle(&neither).is_err());
    }
}
