//! `ffrate`: flip-flop lifetime calculations from the command line.
//!
//! Subcommands map one-to-one onto the library operations: single rates,
//! angular sweeps, orientation maps, concentration scans, the sampling
//! oracles, decay-trace fitting, and registry inspection. Output goes to
//! stdout (or `--out`, never both) as JSON records or gnuplot-ready CSV;
//! warnings and errors go to stderr. Identical flags and seed give
//! byte-identical output.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or validation error,
//! 3 non-converged computation (a failed oracle check or decay fit).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use ffrate_core::fit::{dominant_time, fit_decay, DecayTrace, DEFAULT_T1_OPT_S, MAX_COMPONENTS};
use ffrate_core::oracle::{
    pair_element_bruteforce, random_placement_sum, xi_monte_carlo, OracleConfig, PlacementConfig,
};
use ffrate_core::rate::{
    angular_sweep, concentration_scan, flipflop_rate, lifetime_map, MapQuery, MapResult,
    RateQuery, RateResult, ScanOrientation, ScanQuery, ScanResult, SweepQuery, SweepResult,
    DEFAULT_LAYERS,
};
use ffrate_core::registry::{builtin_registry, Registry, SweepFrame};
use ffrate_core::spin::{deg_to_rad, FieldSpec};

#[derive(Parser)]
#[command(
    name = "ffrate",
    version,
    about = "Flip-flop lifetimes of anisotropic spin-1/2 dopants",
    max_term_width = 100
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Registry JSON path ($FFRATE_REGISTRY as fallback; builtin set otherwise)
    #[arg(long, global = true, value_name = "PATH")]
    registry: Option<PathBuf>,
    /// Output encoding; defaults to json for single records, csv for tables
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the output to a file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Seed for the sampling subcommands
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Lattice-sum ball radius in unit cells
    #[arg(long, global = true, default_value_t = DEFAULT_LAYERS)]
    layers: u32,
    /// Linewidth in MHz (default: the material's registry value)
    #[arg(long, global = true, value_name = "MHZ")]
    gamma: Option<f64>,
    /// Linewidth range for lifetime bands, e.g. 2.8:6.0
    #[arg(long, global = true, value_name = "LO:HI", value_parser = parse_gamma_range)]
    gamma_range: Option<GammaRange>,
    /// Suppress warnings on stderr
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy)]
struct GammaRange([f64; 2]);

fn parse_gamma_range(s: &str) -> Result<GammaRange, String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, got {s:?}"))?;
    let parse = |part: &str| {
        part.trim()
            .parse::<f64>()
            .map_err(|e| format!("bad linewidth {part:?}: {e}"))
    };
    Ok(GammaRange([parse(lo)?, parse(hi)?]))
}

#[derive(Clone, Copy)]
struct GTriple([f64; 3]);

fn parse_g3(s: &str) -> Result<GTriple, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected GX,GY,GZ, got {s:?}"));
    }
    let mut g = [0.0; 3];
    for (slot, part) in g.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|e| format!("bad g-factor {part:?}: {e}"))?;
    }
    Ok(GTriple(g))
}

#[derive(Clone, Copy)]
struct GridSpec {
    phi_points: usize,
    theta_points: usize,
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let (phi, theta) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected PHIxTHETA point counts, got {s:?}"))?;
    let parse = |part: &str, axis: &str| {
        let n: usize = part
            .trim()
            .parse()
            .map_err(|e| format!("bad {axis} point count {part:?}: {e}"))?;
        if n < 2 {
            return Err(format!("{axis} needs at least 2 points, got {n}"));
        }
        Ok(n)
    };
    Ok(GridSpec {
        phi_points: parse(phi, "phi")?,
        theta_points: parse(theta, "theta")?,
    })
}

#[derive(Clone, Copy, ValueEnum)]
enum PlaneArg {
    /// Sweep the azimuth at 90 degrees polar angle
    D1d2,
    /// Sweep the polar angle at zero azimuth
    Ac,
}

impl From<PlaneArg> for SweepFrame {
    fn from(p: PlaneArg) -> Self {
        match p {
            PlaneArg::D1d2 => SweepFrame::D1D2Phi,
            PlaneArg::Ac => SweepFrame::AcTheta,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Flip-flop rate and lifetime at one field orientation
    Rate(RateArgs),
    /// Lifetime versus field angle within the material's sweep plane
    Sweep(SweepArgs),
    /// Lifetime over the full sphere of field orientations
    Map(MapArgs),
    /// Lifetime versus dopant concentration at fixed orientation
    Concscan(ConcscanArgs),
    /// Independent cross-checks of the closed forms
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Multi-exponential fit of a decay-trace CSV
    Fit(FitArgs),
    /// Inspect the material registry
    #[command(subcommand)]
    Materials(MaterialsCommand),
}

#[derive(Args)]
struct RateArgs {
    /// Registry material name
    #[arg(long)]
    material: String,
    /// Dopant concentration in ppm
    #[arg(long, value_name = "PPM")]
    conc: f64,
    /// Field magnitude in mT
    #[arg(long, value_name = "MT", default_value_t = 0.3)]
    field: f64,
    /// Field azimuth in the crystal frame, degrees
    #[arg(long, value_name = "DEG", default_value_t = 0.0, allow_negative_numbers = true)]
    phi: f64,
    /// Field polar angle in the crystal frame, degrees
    #[arg(long, value_name = "DEG", default_value_t = 0.0, allow_negative_numbers = true)]
    theta: f64,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    material: String,
    #[arg(long, value_name = "PPM")]
    conc: f64,
    #[arg(long, value_name = "MT", default_value_t = 0.3)]
    field: f64,
    /// First sweep angle, degrees
    #[arg(long, value_name = "DEG", default_value_t = 0.0, allow_negative_numbers = true)]
    start: f64,
    /// Last sweep angle, degrees
    #[arg(long, value_name = "DEG", default_value_t = 180.0, allow_negative_numbers = true)]
    stop: f64,
    /// Angle increment, degrees
    #[arg(long, value_name = "DEG", default_value_t = 1.0)]
    step: f64,
    /// Restate the sweep plane; errors if the material disagrees
    #[arg(long, value_enum)]
    plane: Option<PlaneArg>,
}

#[derive(Args)]
struct MapArgs {
    #[arg(long)]
    material: String,
    #[arg(long, value_name = "PPM")]
    conc: f64,
    #[arg(long, value_name = "MT", default_value_t = 0.3)]
    field: f64,
    /// Grid as PHIxTHETA point counts over [0,360] x [0,180] degrees
    #[arg(long, value_parser = parse_grid, default_value = "181x91")]
    grid: GridSpec,
}

#[derive(Args)]
struct ConcscanArgs {
    #[arg(long)]
    material: String,
    /// Lowest concentration, ppm
    #[arg(long, value_name = "PPM")]
    lo: f64,
    /// Highest concentration, ppm
    #[arg(long, value_name = "PPM")]
    hi: f64,
    /// Number of log-spaced concentrations
    #[arg(long, default_value_t = 30)]
    points: usize,
    #[arg(long, value_name = "MT", default_value_t = 0.3)]
    field: f64,
    /// Field azimuth, degrees (default: the longest-lived sweep orientation)
    #[arg(long, value_name = "DEG", requires = "theta", allow_negative_numbers = true)]
    phi: Option<f64>,
    /// Field polar angle, degrees
    #[arg(long, value_name = "DEG", requires = "phi", allow_negative_numbers = true)]
    theta: Option<f64>,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Monte-Carlo orientation variance against the closed form
    Xi(XiArgs),
    /// Brute-force operator matrix element against the closed form
    Pair(PairArgs),
    /// Random-placement partner sum against the lattice model
    Placement(PlacementArgs),
}

#[derive(Args)]
struct XiArgs {
    /// Principal g-factors
    #[arg(long, value_name = "GX,GY,GZ", value_parser = parse_g3)]
    g: GTriple,
    /// Effective-field polar angle in the principal frame, degrees
    #[arg(long, value_name = "DEG", default_value_t = 0.0, allow_negative_numbers = true)]
    theta: f64,
    /// Effective-field azimuth in the principal frame, degrees
    #[arg(long, value_name = "DEG", default_value_t = 0.0, allow_negative_numbers = true)]
    phi: f64,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
}

#[derive(Args)]
struct PairArgs {
    #[arg(long, value_name = "GX,GY,GZ", value_parser = parse_g3)]
    g: GTriple,
    #[arg(long, value_name = "DEG", default_value_t = 0.0, allow_negative_numbers = true)]
    theta: f64,
    #[arg(long, value_name = "DEG", default_value_t = 0.0, allow_negative_numbers = true)]
    phi: f64,
    /// Pair-separation polar angle in the principal frame, degrees
    #[arg(long, value_name = "DEG", default_value_t = 90.0, allow_negative_numbers = true)]
    pair_theta: f64,
    /// Pair-separation azimuth in the principal frame, degrees
    #[arg(long, value_name = "DEG", default_value_t = 0.0, allow_negative_numbers = true)]
    pair_phi: f64,
}

#[derive(Args)]
struct PlacementArgs {
    /// Take the spin density from a registry material at this concentration
    #[arg(long, requires = "conc", conflicts_with = "density")]
    material: Option<String>,
    #[arg(long, value_name = "PPM", requires = "material")]
    conc: Option<f64>,
    /// Spin density in 1/m^3, given directly
    #[arg(long, value_name = "PER_M3", required_unless_present = "material")]
    density: Option<f64>,
    /// Expected partner count inside the sampling box
    #[arg(long, default_value_t = 2000.0)]
    partners: f64,
    #[arg(long, default_value_t = 200)]
    realizations: u32,
}

#[derive(Args)]
struct FitArgs {
    /// Decay-trace CSV (t_s,delta_alpha_l), or - for stdin
    #[arg(long, value_name = "PATH")]
    input: String,
    /// Fixed pool lifetime in ms
    #[arg(long, value_name = "MS", default_value_t = DEFAULT_T1_OPT_S * 1e3)]
    t1_ms: f64,
    /// Largest component count to try
    #[arg(long, default_value_t = MAX_COMPONENTS)]
    max_components: usize,
}

#[derive(Subcommand)]
enum MaterialsCommand {
    /// Names of every registry material
    List,
    /// Full registry record of one material (always JSON)
    Show { name: String },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let usage_ok = matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = err.print();
            return if usage_ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let registry = load_registry(cli.global.registry.as_deref())?;
    let global = &cli.global;
    match cli.command {
        Command::Rate(args) => {
            let result = flipflop_rate(
                &registry,
                &RateQuery {
                    material: args.material,
                    concentration_ppm: args.conc,
                    field: FieldSpec {
                        magnitude_mt: args.field,
                        phi_deg: args.phi,
                        theta_deg: args.theta,
                    },
                    gamma_mhz: global.gamma,
                    gamma_range_mhz: global.gamma_range.map(|r| r.0),
                    layers: global.layers,
                },
            )?;
            warn_all(global, &result.warnings);
            emit(global, &render_rate(&result, format_or(global, Format::Json))?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep(args) => {
            let result = angular_sweep(
                &registry,
                &SweepQuery {
                    material: args.material,
                    concentration_ppm: args.conc,
                    b_mt: args.field,
                    start_deg: args.start,
                    stop_deg: args.stop,
                    step_deg: args.step,
                    gamma_mhz: global.gamma,
                    gamma_range_mhz: global.gamma_range.map(|r| r.0),
                    layers: global.layers,
                    plane: args.plane.map(SweepFrame::from),
                },
            )?;
            emit(global, &render_sweep(&result, format_or(global, Format::Csv))?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Map(args) => {
            let result = lifetime_map(
                &registry,
                &MapQuery {
                    material: args.material,
                    concentration_ppm: args.conc,
                    b_mt: args.field,
                    phi_step_deg: 360.0 / (args.grid.phi_points - 1) as f64,
                    theta_step_deg: 180.0 / (args.grid.theta_points - 1) as f64,
                    gamma_mhz: global.gamma,
                    layers: global.layers,
                },
            )?;
            emit(global, &render_map(&result, format_or(global, Format::Csv))?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Concscan(args) => {
            let orientation = match (args.phi, args.theta) {
                (Some(phi_deg), Some(theta_deg)) => ScanOrientation::Fixed { phi_deg, theta_deg },
                _ => ScanOrientation::Best,
            };
            let result = concentration_scan(
                &registry,
                &ScanQuery {
                    material: args.material,
                    conc_lo_ppm: args.lo,
                    conc_hi_ppm: args.hi,
                    points: args.points,
                    b_mt: args.field,
                    gamma_mhz: global.gamma,
                    layers: global.layers,
                    orientation,
                },
            )?;
            emit(global, &render_scan(&result, format_or(global, Format::Csv))?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle(cmd) => run_oracle(global, &registry, cmd),
        Command::Fit(args) => run_fit(global, &args),
        Command::Materials(cmd) => {
            let text = match cmd {
                MaterialsCommand::List => match format_or(global, Format::Csv) {
                    Format::Csv => {
                        let mut s = String::new();
                        for name in registry.list() {
                            s.push_str(name);
                            s.push('\n');
                        }
                        s
                    }
                    Format::Json => json_line(&registry.list())?,
                },
                MaterialsCommand::Show { name } => json_line(registry.get_required(&name)?)?,
            };
            emit(global, &text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_oracle(
    global: &GlobalArgs,
    registry: &Registry,
    cmd: OracleCommand,
) -> anyhow::Result<ExitCode> {
    match cmd {
        OracleCommand::Xi(args) => {
            let report = xi_monte_carlo(
                args.g.0,
                deg_to_rad(args.theta),
                deg_to_rad(args.phi),
                &OracleConfig {
                    samples: args.samples,
                    seed: global.seed,
                },
            )?;
            let pass = report.pass;
            let text = match format_or(global, Format::Json) {
                Format::Json => json_line(&report)?,
                Format::Csv => {
                    let mut s = String::from("estimate,std_error,analytic,z_score,samples,seed,pass\n");
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{},{}",
                        fmt_f64(report.estimate),
                        fmt_f64(report.std_error),
                        fmt_f64(report.analytic),
                        fmt_f64(report.z_score),
                        report.samples,
                        report.seed,
                        report.pass
                    );
                    s
                }
            };
            emit(global, &text)?;
            if !pass {
                warn(global, "Monte-Carlo estimate is more than 3 standard errors from the closed form");
            }
            Ok(exit_unless(pass))
        }
        OracleCommand::Pair(args) => {
            let g = args.g.0;
            let theta = deg_to_rad(args.theta);
            let phi = deg_to_rad(args.phi);
            let pair_theta = deg_to_rad(args.pair_theta);
            let pair_phi = deg_to_rad(args.pair_phi);
            let u = [
                pair_theta.sin() * pair_phi.cos(),
                pair_theta.sin() * pair_phi.sin(),
                pair_theta.cos(),
            ];
            let closed = ffrate_core::coupling::matrix_element_a(g, theta, phi, pair_theta, pair_phi)
                - ffrate_core::coupling::matrix_element_b(g, theta, phi);
            let brute = pair_element_bruteforce(g, theta, phi, u);
            let abs_error = ((brute.re - closed).powi(2) + brute.im.powi(2)).sqrt();
            let rel_error = abs_error / closed.abs().max(1.0);
            let pass = rel_error < 1e-10;
            let text = match format_or(global, Format::Json) {
                Format::Json => json_line(&serde_json::json!({
                    "g": g,
                    "theta_deg": args.theta,
                    "phi_deg": args.phi,
                    "pair_theta_deg": args.pair_theta,
                    "pair_phi_deg": args.pair_phi,
                    "closed_form": closed,
                    "bruteforce_re": brute.re,
                    "bruteforce_im": brute.im,
                    "abs_error": abs_error,
                    "rel_error": rel_error,
                    "pass": pass,
                }))?,
                Format::Csv => {
                    let mut s = String::from("closed_form,bruteforce_re,bruteforce_im,abs_error,rel_error,pass\n");
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{pass}",
                        fmt_f64(closed),
                        fmt_f64(brute.re),
                        fmt_f64(brute.im),
                        fmt_f64(abs_error),
                        fmt_f64(rel_error)
                    );
                    s
                }
            };
            emit(global, &text)?;
            if !pass {
                warn(global, "brute-force element disagrees with the closed form");
            }
            Ok(exit_unless(pass))
        }
        OracleCommand::Placement(args) => {
            let n_s = match (&args.material, args.conc, args.density) {
                (Some(name), Some(conc), None) => {
                    registry.get_required(name)?.spin_density(conc)?.n_s_per_m3
                }
                (None, None, Some(density)) => density,
                _ => unreachable!("clap enforces material+conc xor density"),
            };
            let summary = random_placement_sum(
                n_s,
                &PlacementConfig::for_density(n_s, args.partners, args.realizations, global.seed),
            )?;
            let text = match format_or(global, Format::Json) {
                Format::Json => json_line(&summary)?,
                Format::Csv => {
                    let mut s = String::from(
                        "mean,median,iqr_lo,iqr_hi,realizations,expected_partners,lattice_reference,seed\n",
                    );
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{},{},{}",
                        fmt_f64(summary.mean),
                        fmt_f64(summary.median),
                        fmt_f64(summary.iqr[0]),
                        fmt_f64(summary.iqr[1]),
                        summary.realizations,
                        fmt_f64(summary.expected_partners),
                        fmt_f64(summary.lattice_reference),
                        summary.seed
                    );
                    s
                }
            };
            emit(global, &text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_fit(global: &GlobalArgs, args: &FitArgs) -> anyhow::Result<ExitCode> {
    let text = if args.input == "-" {
        std::io::read_to_string(std::io::stdin()).context("reading trace from stdin")?
    } else {
        std::fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input))?
    };
    let trace = DecayTrace::from_csv_str(&text)?;
    let fit = fit_decay(&trace, args.t1_ms * 1e-3, args.max_components)?;
    let dominant = dominant_time(&fit);
    let converged = fit.converged;
    let rendered = match format_or(global, Format::Json) {
        Format::Json => json_line(&serde_json::json!({ "fit": fit, "dominant": dominant }))?,
        Format::Csv => {
            let mut s = String::from("amplitude,tau_s,unreliable\n");
            for c in &fit.components {
                let _ = writeln!(s, "{},{},{}", fmt_f64(c.amplitude), fmt_f64(c.tau_s), c.unreliable);
            }
            s
        }
    };
    emit(global, &rendered)?;
    if !converged {
        warn(global, "fit did not reach the convergence target within the component budget");
    }
    Ok(exit_unless(converged))
}

fn exit_unless(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}

fn load_registry(flag: Option<&std::path::Path>) -> anyhow::Result<Registry> {
    let path = flag
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("FFRATE_REGISTRY").map(PathBuf::from));
    match path {
        Some(path) => {
            Registry::load(&path).with_context(|| format!("loading registry {}", path.display()))
        }
        None => Ok(builtin_registry().clone()),
    }
}

fn format_or(global: &GlobalArgs, default: Format) -> Format {
    global.format.unwrap_or(default)
}

fn warn(global: &GlobalArgs, message: &str) {
    if !global.quiet {
        eprintln!("warning: {message}");
    }
}

fn warn_all(global: &GlobalArgs, warnings: &[String]) {
    for w in warnings {
        warn(global, w);
    }
}

/// Data goes to exactly one sink: `--out` if given, stdout otherwise.
fn emit(global: &GlobalArgs, text: &str) -> anyhow::Result<()> {
    match &global.out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn json_line<T: serde::Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Shortest text that parses back to the same f64, with exponent notation
/// outside [1e-4, 1e16) so extreme magnitudes stay compact.
fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if v.is_finite() && v != 0.0 && !(1e-4..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// Infinite lifetimes (zero rate) print as `inf` in CSV; JSON uses null.
fn opt_f64(v: Option<f64>) -> String {
    match v {
        Some(v) => fmt_f64(v),
        None => "inf".to_string(),
    }
}

fn render_rate(result: &RateResult, format: Format) -> anyhow::Result<String> {
    Ok(match format {
        Format::Json => json_line(result)?,
        Format::Csv => {
            let mut s = String::from(
                "g_eff,theta_eff_deg,phi_eff_deg,splitting_hz,xi,n_s_per_m3,lattice_coefficient,gamma_mhz,r_per_s,t_ff_s,t_low_s,t_high_s\n",
            );
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                fmt_f64(result.g_eff),
                fmt_f64(result.theta_eff_deg),
                fmt_f64(result.phi_eff_deg),
                fmt_f64(result.splitting_hz),
                fmt_f64(result.xi),
                fmt_f64(result.n_s_per_m3),
                fmt_f64(result.lattice_coefficient),
                fmt_f64(result.gamma_mhz),
                fmt_f64(result.r_per_s),
                opt_f64(result.t_ff_s),
                opt_f64(result.t_low_s),
                opt_f64(result.t_high_s),
            );
            s
        }
    })
}

fn render_sweep(result: &SweepResult, format: Format) -> anyhow::Result<String> {
    Ok(match format {
        Format::Json => json_line(result)?,
        Format::Csv => {
            let banded = result.gamma_range_mhz.is_some();
            let mut s = String::from(if banded {
                "angle_deg,t_ff_s,t_low_s,t_high_s\n"
            } else {
                "angle_deg,t_ff_s\n"
            });
            for p in &result.points {
                if banded {
                    let _ = writeln!(
                        s,
                        "{},{},{},{}",
                        fmt_f64(p.angle_deg),
                        opt_f64(p.t_ff_s),
                        opt_f64(p.t_low_s),
                        opt_f64(p.t_high_s)
                    );
                } else {
                    let _ = writeln!(s, "{},{}", fmt_f64(p.angle_deg), opt_f64(p.t_ff_s));
                }
            }
            s
        }
    })
}

fn render_map(result: &MapResult, format: Format) -> anyhow::Result<String> {
    Ok(match format {
        Format::Json => json_line(result)?,
        Format::Csv => {
            let mut s = String::from("phi_deg,theta_deg,t_ff_s\n");
            for (i, &theta) in result.theta_deg.iter().enumerate() {
                for (j, &phi) in result.phi_deg.iter().enumerate() {
                    let _ = writeln!(
                        s,
                        "{},{},{}",
                        fmt_f64(phi),
                        fmt_f64(theta),
                        opt_f64(result.t_ff_s[i][j])
                    );
                }
            }
            s
        }
    })
}

fn render_scan(result: &ScanResult, format: Format) -> anyhow::Result<String> {
    Ok(match format {
        Format::Json => json_line(result)?,
        Format::Csv => {
            let mut s = String::from("conc_ppm,t_ff_s\n");
            for p in &result.points {
                let _ = writeln!(s, "{},{}", fmt_f64(p.concentration_ppm), opt_f64(p.t_ff_s));
            }
            s
        }
    })
}
