//! Batch command-line interface.
//!
//! Every computation in the library is reachable from one of six
//! subcommands (`dispersion`, `zak`, `winding`, `phase-diagram`, `gamma`,
//! `walk`). Outputs are deterministic CSV tables and binary PGM images with
//! JSON sidecar metadata; identical invocations produce byte-identical
//! files. A `--config` file of `key=value` lines overrides command-line
//! flags, which lets batch drivers pin parameters centrally.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;

use crate::error::Error;
use crate::evolution::{
    classical_baseline, evolve, scaling_exponent, symmetric_spin, AngleProfile, StepConvention,
    WalkState,
};
use crate::output::{format_float, normalize_grayscale, write_csv, write_pgm, Sidecar};
use crate::spdc::{
    coupling_grid, joint_position_map, CouplingGrid, PhaseConvention, PhaseSign, PumpEnvelope,
};
use crate::topology::{
    phase_diagram, phi_difference, tangent_ratio, winding_number, zak_phase, WindingCell,
};
use crate::walk::{bloch_vector, brillouin_sample, dispersion, relative_phase, Quasimomentum, WalkAngles};

const EXIT_HELP: &str = "Exit status:\n  \
    0  success\n  \
    2  I/O failure or invalid usage\n  \
    3  degeneracy (gap closure, undefined phase, non-quantized winding)\n  \
    4  coupling-grid failure\n  \
    5  lattice overflow";

#[derive(Parser, Debug)]
#[command(
    name = "splitstep",
    version,
    about = "Split-step quantum walk: band topology, pair coupling and spreading",
    after_help = EXIT_HELP
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Momentum samples per axis (defaults depend on the subcommand).
    #[arg(long, global = true)]
    pub num_k: Option<usize>,

    /// CSV output path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// PGM image output path; a .json sidecar is written next to it.
    #[arg(long, global = true)]
    pub pgm: Option<PathBuf>,

    /// Seed recorded in output metadata; reserved for sampling helpers.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// File of key=value lines; entries override command-line flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Band structure on a momentum grid: E(k), Bloch vector, planar phase.
    Dispersion {
        #[arg(long, allow_negative_numbers = true)]
        theta1: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        theta2: Option<f64>,
    },
    /// Zak phases with the phase-difference diagnostic and winding number.
    Zak {
        #[arg(long, allow_negative_numbers = true)]
        theta1: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        theta2: Option<f64>,
    },
    /// Winding number of the planar Bloch angle across the zone.
    Winding {
        #[arg(long, allow_negative_numbers = true)]
        theta1: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        theta2: Option<f64>,
    },
    /// Winding-number map over a rectangle of coin angles.
    PhaseDiagram {
        #[arg(long, allow_negative_numbers = true)]
        theta1_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        theta1_max: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        theta2_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        theta2_max: Option<f64>,
        /// Grid points per angle axis.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Pair-coupling grid |Γ(k_s, k_i)|² with optional position-space map.
    Gamma {
        /// Figure preset (1a..1d, 2a..2d); overrides the physics flags.
        #[arg(long)]
        fig: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        theta1: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        theta2: Option<f64>,
        /// Idler coin angles; default to the signal angles.
        #[arg(long, allow_negative_numbers = true)]
        idler_theta1: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        idler_theta2: Option<f64>,
        #[arg(long, value_enum)]
        envelope: Option<EnvelopeArg>,
        /// Gaussian width in radians of total momentum.
        #[arg(long, allow_negative_numbers = true)]
        sigma: Option<f64>,
        /// Gaussian center in radians of total momentum.
        #[arg(long, allow_negative_numbers = true)]
        center: Option<f64>,
        /// Sublattice-1 pump amplitude.
        #[arg(long, allow_negative_numbers = true)]
        e1: Option<f64>,
        /// Sublattice-2 pump amplitude.
        #[arg(long, allow_negative_numbers = true)]
        e2: Option<f64>,
        /// Overall coupling constant γ.
        #[arg(long, allow_negative_numbers = true)]
        gamma0: Option<f64>,
        #[arg(long, value_enum)]
        phase_sign: Option<PhaseSignArg>,
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
        /// CSV path for the joint position-space correlation map.
        #[arg(long)]
        position_out: Option<PathBuf>,
        /// PGM path for the joint position-space correlation map.
        #[arg(long)]
        position_pgm: Option<PathBuf>,
    },
    /// Real-space evolution: spreading statistics and bound-state weight.
    Walk {
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, value_enum)]
        profile: Option<ProfileArg>,
        #[arg(long, allow_negative_numbers = true)]
        theta1: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        theta2: Option<f64>,
        /// θ₁ for x < 0 under the boundary profile.
        #[arg(long, allow_negative_numbers = true)]
        theta1_left: Option<f64>,
        /// θ₁ for x ≥ 0 under the boundary profile.
        #[arg(long, allow_negative_numbers = true)]
        theta1_right: Option<f64>,
        #[arg(long, value_enum)]
        convention: Option<WalkConventionArg>,
        /// Initial spin: symmetric, h, v, or re,im,re,im.
        #[arg(long)]
        spin: Option<String>,
        /// Radius for the reported origin-weight fraction.
        #[arg(long)]
        radius: Option<usize>,
        /// Append the classical √N baseline column.
        #[arg(long)]
        classical: bool,
        #[arg(long)]
        fit_min: Option<usize>,
        #[arg(long)]
        fit_max: Option<usize>,
        /// Lattice half extent; sized automatically when omitted.
        #[arg(long)]
        half_extent: Option<usize>,
        /// CSV path for the final position distribution.
        #[arg(long)]
        dist: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnvelopeArg {
    Constant,
    Gaussian,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseSignArg {
    Correlated,
    Anticorrelated,
}

impl From<PhaseSignArg> for PhaseSign {
    fn from(v: PhaseSignArg) -> Self {
        match v {
            PhaseSignArg::Correlated => PhaseSign::Correlated,
            PhaseSignArg::Anticorrelated => PhaseSign::Anticorrelated,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConventionArg {
    AbsSum,
    Product,
}

impl From<ConventionArg> for PhaseConvention {
    fn from(v: ConventionArg) -> Self {
        match v {
            ConventionArg::AbsSum => PhaseConvention::AbsSum,
            ConventionArg::Product => PhaseConvention::Product,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileArg {
    Homogeneous,
    Boundary,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkConventionArg {
    Half,
    Full,
}

impl From<WalkConventionArg> for StepConvention {
    fn from(v: WalkConventionArg) -> Self {
        match v {
            WalkConventionArg::Half => StepConvention::HalfStep,
            WalkConventionArg::Full => StepConvention::FullStep,
        }
    }
}

/// Parameter panel for one of the named coupling-efficiency figures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigurePreset {
    pub name: &'static str,
    pub theta1: f64,
    pub theta2: f64,
    /// Gaussian pump width, or None for the constant pump.
    pub gaussian_sigma: Option<f64>,
    pub phase_sign: PhaseSign,
}

/// All eight figure presets; both arms share the same coin angles, unit
/// pump amplitudes and γ = 1 under the AbsSum convention.
pub fn figure_presets() -> [FigurePreset; 8] {
    use std::f64::consts::PI;
    let narrow = 0.001;
    let wide = 9.0 * PI / 20.0;
    [
        FigurePreset {
            name: "1a",
            theta1: 0.01,
            theta2: narrow,
            gaussian_sigma: Some(10.0),
            phase_sign: PhaseSign::Correlated,
        },
        FigurePreset {
            name: "1b",
            theta1: 0.01,
            theta2: narrow,
            gaussian_sigma: Some(10.0),
            phase_sign: PhaseSign::Anticorrelated,
        },
        FigurePreset {
            name: "1c",
            theta1: 0.01,
            theta2: narrow,
            gaussian_sigma: Some(500.0),
            phase_sign: PhaseSign::Correlated,
        },
        FigurePreset {
            name: "1d",
            theta1: 0.01,
            theta2: narrow,
            gaussian_sigma: Some(500.0),
            phase_sign: PhaseSign::Anticorrelated,
        },
        FigurePreset {
            name: "2a",
            theta1: 0.01,
            theta2: wide,
            gaussian_sigma: None,
            phase_sign: PhaseSign::Correlated,
        },
        FigurePreset {
            name: "2b",
            theta1: 0.01,
            theta2: narrow,
            gaussian_sigma: None,
            phase_sign: PhaseSign::Correlated,
        },
        FigurePreset {
            name: "2c",
            theta1: 0.01,
            theta2: wide,
            gaussian_sigma: None,
            phase_sign: PhaseSign::Anticorrelated,
        },
        FigurePreset {
            name: "2d",
            theta1: 0.01,
            theta2: narrow,
            gaussian_sigma: None,
            phase_sign: PhaseSign::Anticorrelated,
        },
    ]
}

pub fn figure_preset(name: &str) -> Option<FigurePreset> {
    figure_presets().iter().find(|p| p.name == name).copied()
}

/// A diagnostic plus the exit status it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn io(context: &str, err: std::io::Error) -> Self {
        Self {
            code: 2,
            message: format!("{context}: {err}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::GapClosure { .. }
            | Error::PhaseUndefined { .. }
            | Error::DegenerateOverlap { .. }
            | Error::NonQuantized { .. }
            | Error::InsufficientData { .. } => 3,
            Error::GridDegenerate { .. } | Error::InvalidGrid => 4,
            Error::EdgeOverflow { .. } => 5,
            Error::InvalidParameter(_) => 2,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

/// Parse arguments from the environment, run, and return the exit status.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => 0,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

fn execute(mut cli: Cli) -> Result<(), Failure> {
    let overrides = match &cli.config {
        Some(path) => read_config(path)?,
        None => Vec::new(),
    };
    apply_overrides(&mut cli, &overrides)?;
    let ctx = GlobalArgs {
        num_k: cli.num_k,
        out: cli.out.clone(),
        pgm: cli.pgm.clone(),
        seed: cli.seed,
    };
    match cli.command {
        Command::Dispersion { theta1, theta2 } => run_dispersion(&ctx, theta1, theta2),
        Command::Zak { theta1, theta2 } => run_zak(&ctx, theta1, theta2),
        Command::Winding { theta1, theta2 } => run_winding(&ctx, theta1, theta2),
        Command::PhaseDiagram {
            theta1_min,
            theta1_max,
            theta2_min,
            theta2_max,
            grid,
        } => run_phase_diagram(&ctx, theta1_min, theta1_max, theta2_min, theta2_max, grid),
        Command::Gamma {
            fig,
            theta1,
            theta2,
            idler_theta1,
            idler_theta2,
            envelope,
            sigma,
            center,
            e1,
            e2,
            gamma0,
            phase_sign,
            convention,
            position_out,
            position_pgm,
        } => run_gamma(
            &ctx,
            GammaArgs {
                fig,
                theta1,
                theta2,
                idler_theta1,
                idler_theta2,
                envelope,
                sigma,
                center,
                e1,
                e2,
                gamma0,
                phase_sign,
                convention,
                position_out,
                position_pgm,
            },
        ),
        Command::Walk {
            steps,
            profile,
            theta1,
            theta2,
            theta1_left,
            theta1_right,
            convention,
            spin,
            radius,
            classical,
            fit_min,
            fit_max,
            half_extent,
            dist,
        } => run_walk(
            &ctx,
            WalkArgs {
                steps,
                profile,
                theta1,
                theta2,
                theta1_left,
                theta1_right,
                convention,
                spin,
                radius,
                classical,
                fit_min,
                fit_max,
                half_extent,
                dist,
            },
        ),
    }
}

struct GlobalArgs {
    num_k: Option<usize>,
    out: Option<PathBuf>,
    pgm: Option<PathBuf>,
    seed: Option<u64>,
}

impl GlobalArgs {
    fn num_k_or(&self, default: usize) -> usize {
        self.num_k.unwrap_or(default)
    }

    fn require_out(&self, command: &str) -> Result<&PathBuf, Failure> {
        self.out
            .as_ref()
            .ok_or_else(|| Failure::usage(format!("{command} requires --out <path>")))
    }
}

fn require<T>(value: Option<T>, what: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::usage(format!("missing required flag {what}")))
}

fn finite_angle(value: f64, what: &str) -> Result<f64, Failure> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Failure::usage(format!("{what} must be finite, got {value}")))
    }
}

// -------------------------------------------------------------------------
// config-file overrides

fn read_config(path: &Path) -> Result<Vec<(String, String)>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::io(&format!("cannot read config {}", path.display()), e))?;
    let mut entries = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Failure::usage(format!(
                "config {}:{}: expected key=value, got {line:?}",
                path.display(),
                lineno + 1
            ))
        })?;
        entries.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(entries)
}

fn parse_as<T: FromStr>(key: &str, value: &str) -> Result<T, Failure>
where
    T::Err: std::fmt::Display,
{
    value
        .parse::<T>()
        .map_err(|e| Failure::usage(format!("config key {key}: {e}")))
}

fn parse_enum<T: ValueEnum + Clone>(key: &str, value: &str) -> Result<T, Failure> {
    T::from_str(value, true).map_err(|e| Failure::usage(format!("config key {key}: {e}")))
}

/// Apply key=value overrides on top of the parsed flags. Config entries win
/// over flags; unknown keys are usage errors.
fn apply_overrides(cli: &mut Cli, entries: &[(String, String)]) -> Result<(), Failure> {
    for (key, value) in entries {
        let consumed = apply_global(cli, key, value)? || apply_command(&mut cli.command, key, value)?;
        if !consumed {
            return Err(Failure::usage(format!(
                "config key {key:?} is not recognized by this subcommand"
            )));
        }
    }
    Ok(())
}

fn apply_global(cli: &mut Cli, key: &str, value: &str) -> Result<bool, Failure> {
    match key {
        "num-k" => cli.num_k = Some(parse_as(key, value)?),
        "out" => cli.out = Some(PathBuf::from(value)),
        "pgm" => cli.pgm = Some(PathBuf::from(value)),
        "seed" => cli.seed = Some(parse_as(key, value)?),
        _ => return Ok(false),
    }
    Ok(true)
}

fn apply_command(command: &mut Command, key: &str, value: &str) -> Result<bool, Failure> {
    match command {
        Command::Dispersion { theta1, theta2 }
        | Command::Zak { theta1, theta2 }
        | Command::Winding { theta1, theta2 } => match key {
            "theta1" => *theta1 = Some(parse_as(key, value)?),
            "theta2" => *theta2 = Some(parse_as(key, value)?),
            _ => return Ok(false),
        },
        Command::PhaseDiagram {
            theta1_min,
            theta1_max,
            theta2_min,
            theta2_max,
            grid,
        } => match key {
            "theta1-min" => *theta1_min = Some(parse_as(key, value)?),
            "theta1-max" => *theta1_max = Some(parse_as(key, value)?),
            "theta2-min" => *theta2_min = Some(parse_as(key, value)?),
            "theta2-max" => *theta2_max = Some(parse_as(key, value)?),
            "grid" => *grid = Some(parse_as(key, value)?),
            _ => return Ok(false),
        },
        Command::Gamma {
            fig,
            theta1,
            theta2,
            idler_theta1,
            idler_theta2,
            envelope,
            sigma,
            center,
            e1,
            e2,
            gamma0,
            phase_sign,
            convention,
            position_out,
            position_pgm,
        } => match key {
            "fig" => *fig = Some(value.to_string()),
            "theta1" => *theta1 = Some(parse_as(key, value)?),
            "theta2" => *theta2 = Some(parse_as(key, value)?),
            "idler-theta1" => *idler_theta1 = Some(parse_as(key, value)?),
            "idler-theta2" => *idler_theta2 = Some(parse_as(key, value)?),
            "envelope" => *envelope = Some(parse_enum(key, value)?),
            "sigma" => *sigma = Some(parse_as(key, value)?),
            "center" => *center = Some(parse_as(key, value)?),
            "e1" => *e1 = Some(parse_as(key, value)?),
            "e2" => *e2 = Some(parse_as(key, value)?),
            "gamma0" => *gamma0 = Some(parse_as(key, value)?),
            "phase-sign" => *phase_sign = Some(parse_enum(key, value)?),
            "convention" => *convention = Some(parse_enum(key, value)?),
            "position-out" => *position_out = Some(PathBuf::from(value)),
            "position-pgm" => *position_pgm = Some(PathBuf::from(value)),
            _ => return Ok(false),
        },
        Command::Walk {
            steps,
            profile,
            theta1,
            theta2,
            theta1_left,
            theta1_right,
            convention,
            spin,
            radius,
            classical,
            fit_min,
            fit_max,
            half_extent,
            dist,
        } => match key {
            "steps" => *steps = Some(parse_as(key, value)?),
            "profile" => *profile = Some(parse_enum(key, value)?),
            "theta1" => *theta1 = Some(parse_as(key, value)?),
            "theta2" => *theta2 = Some(parse_as(key, value)?),
            "theta1-left" => *theta1_left = Some(parse_as(key, value)?),
            "theta1-right" => *theta1_right = Some(parse_as(key, value)?),
            "convention" => *convention = Some(parse_enum(key, value)?),
            "spin" => *spin = Some(value.to_string()),
            "radius" => *radius = Some(parse_as(key, value)?),
            "classical" => *classical = parse_as(key, value)?,
            "fit-min" => *fit_min = Some(parse_as(key, value)?),
            "fit-max" => *fit_max = Some(parse_as(key, value)?),
            "half-extent" => *half_extent = Some(parse_as(key, value)?),
            "dist" => *dist = Some(PathBuf::from(value)),
            _ => return Ok(false),
        },
    }
    Ok(true)
}

// -------------------------------------------------------------------------
// subcommand bodies

fn run_dispersion(ctx: &GlobalArgs, theta1: Option<f64>, theta2: Option<f64>) -> Result<(), Failure> {
    let theta1 = finite_angle(require(theta1, "--theta1")?, "--theta1")?;
    let theta2 = finite_angle(require(theta2, "--theta2")?, "--theta2")?;
    let angles = WalkAngles::new(theta1, theta2);
    let num_k = ctx.num_k_or(256);
    let out = ctx.require_out("dispersion")?;

    let header: Vec<String> = ["k", "energy", "nx", "ny", "nz", "phi", "flag"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut rows = Vec::with_capacity(num_k);
    for j in 0..num_k {
        let k = Quasimomentum::new(brillouin_sample(j, num_k));
        let energy = dispersion(angles, k);
        // flag bit 1: gap closed, bit 2: planar phase undefined
        let mut flag = 0u8;
        let (nx, ny, nz) = match bloch_vector(angles, k) {
            Ok(n) => (format_float(n.nx), format_float(n.ny), format_float(n.nz)),
            Err(_) => {
                flag |= 1;
                (String::new(), String::new(), String::new())
            }
        };
        let phi = match relative_phase(angles, k) {
            Ok(p) => format_float(p),
            Err(_) => {
                flag |= 2;
                String::new()
            }
        };
        rows.push(vec![
            format_float(k.radians()),
            format_float(energy.radians()),
            nx,
            ny,
            nz,
            phi,
            flag.to_string(),
        ]);
    }
    write_csv(out, &header, &rows).map_err(|e| Failure::io("cannot write dispersion CSV", e))?;
    Ok(())
}

/// Text report for the `zak` subcommand; also used by the tests.
pub fn zak_report(angles: WalkAngles, num_k: usize) -> crate::error::Result<String> {
    let zak = zak_phase(angles, num_k)?;
    let diff = phi_difference(angles)?;
    let winding = winding_number(angles, num_k)?;
    Ok(format!(
        "theta1 = {}\ntheta2 = {}\nnum_k = {}\nzak_plus = {}\nzak_minus = {}\nzak_total = {}\n\
         phi_difference = {}\ntan_ratio = {}\nwinding = {}\nwinding_residual = {}\n",
        format_float(angles.theta1()),
        format_float(angles.theta2()),
        num_k,
        format_float(zak.zak_plus),
        format_float(zak.zak_minus),
        format_float(zak.zak_total),
        format_float(diff),
        format_float(tangent_ratio(angles)),
        winding.w,
        format_float(winding.residual),
    ))
}

fn run_zak(ctx: &GlobalArgs, theta1: Option<f64>, theta2: Option<f64>) -> Result<(), Failure> {
    let theta1 = finite_angle(require(theta1, "--theta1")?, "--theta1")?;
    let theta2 = finite_angle(require(theta2, "--theta2")?, "--theta2")?;
    let report = zak_report(WalkAngles::new(theta1, theta2), ctx.num_k_or(1024))?;
    print!("{report}");
    Ok(())
}

fn run_winding(ctx: &GlobalArgs, theta1: Option<f64>, theta2: Option<f64>) -> Result<(), Failure> {
    let theta1 = finite_angle(require(theta1, "--theta1")?, "--theta1")?;
    let theta2 = finite_angle(require(theta2, "--theta2")?, "--theta2")?;
    let res = winding_number(WalkAngles::new(theta1, theta2), ctx.num_k_or(512))?;
    println!("winding = {}", res.w);
    println!("residual = {}", format_float(res.residual));
    println!("samples = {}", res.samples);
    Ok(())
}

fn run_phase_diagram(
    ctx: &GlobalArgs,
    theta1_min: Option<f64>,
    theta1_max: Option<f64>,
    theta2_min: Option<f64>,
    theta2_max: Option<f64>,
    grid: Option<usize>,
) -> Result<(), Failure> {
    use std::f64::consts::FRAC_PI_2;
    let t1 = (
        theta1_min.unwrap_or(-FRAC_PI_2),
        theta1_max.unwrap_or(FRAC_PI_2),
    );
    let t2 = (
        theta2_min.unwrap_or(-FRAC_PI_2),
        theta2_max.unwrap_or(FRAC_PI_2),
    );
    let grid = grid.unwrap_or(33);
    let num_k = ctx.num_k_or(256);
    let out = ctx.require_out("phase-diagram")?;
    let pd = phase_diagram(t1, t2, grid, num_k)?;

    // CSV matrix: boundary cells stay empty
    let mut header = vec!["theta1".to_string()];
    header.extend(pd.theta2_values.iter().map(|&t| format_float(t)));
    let mut rows = Vec::with_capacity(grid);
    for (i1, &t1v) in pd.theta1_values.iter().enumerate() {
        let mut row = vec![format_float(t1v)];
        for i2 in 0..pd.theta2_values.len() {
            row.push(match pd.cell(i1, i2) {
                WindingCell::Winding(w) => w.to_string(),
                WindingCell::Boundary => String::new(),
            });
        }
        rows.push(row);
    }
    write_csv(out, &header, &rows).map_err(|e| Failure::io("cannot write phase-diagram CSV", e))?;

    if let Some(pgm_path) = &ctx.pgm {
        // gray levels: w = -1, 0, +1 at 64/128/192; boundary is white
        let pixels: Vec<u8> = pd
            .cells
            .iter()
            .map(|cell| match cell {
                WindingCell::Winding(-1) => 64,
                WindingCell::Winding(0) => 128,
                WindingCell::Winding(1) => 192,
                WindingCell::Winding(_) => 32,
                WindingCell::Boundary => 255,
            })
            .collect();
        write_pgm(pgm_path, grid, grid, &pixels)
            .map_err(|e| Failure::io("cannot write phase-diagram PGM", e))?;
        let mut sidecar = Sidecar::new("phase-diagram");
        sidecar
            .set("theta1_min", format_float(t1.0))
            .set("theta1_max", format_float(t1.1))
            .set("theta2_min", format_float(t2.0))
            .set("theta2_max", format_float(t2.1))
            .set("grid", grid.to_string())
            .set("num_k", num_k.to_string())
            .set("levels", "w=-1:64 w=0:128 w=+1:192 boundary:255")
            .set("layout", "row-major, row = theta1 index");
        if let Some(seed) = ctx.seed {
            sidecar.set("seed", seed.to_string());
        }
        sidecar
            .write(sidecar_path(pgm_path))
            .map_err(|e| Failure::io("cannot write phase-diagram sidecar", e))?;
    }
    Ok(())
}

struct GammaArgs {
    fig: Option<String>,
    theta1: Option<f64>,
    theta2: Option<f64>,
    idler_theta1: Option<f64>,
    idler_theta2: Option<f64>,
    envelope: Option<EnvelopeArg>,
    sigma: Option<f64>,
    center: Option<f64>,
    e1: Option<f64>,
    e2: Option<f64>,
    gamma0: Option<f64>,
    phase_sign: Option<PhaseSignArg>,
    convention: Option<ConventionArg>,
    position_out: Option<PathBuf>,
    position_pgm: Option<PathBuf>,
}

fn sidecar_path(pgm: &Path) -> PathBuf {
    PathBuf::from(format!("{}.json", pgm.display()))
}

fn run_gamma(ctx: &GlobalArgs, args: GammaArgs) -> Result<(), Failure> {
    use crate::spdc::SpdcConfig;

    let e1 = args.e1.unwrap_or(1.0);
    let e2 = args.e2.unwrap_or(1.0);
    let gamma0 = args.gamma0.unwrap_or(1.0);
    let center = args.center.unwrap_or(0.0);

    let (signal, idler, envelope, phase_sign, convention, preset_name) = match &args.fig {
        Some(name) => {
            let preset = figure_preset(name)
                .ok_or_else(|| Failure::usage(format!("unknown figure preset {name:?}")))?;
            let angles = WalkAngles::new(preset.theta1, preset.theta2);
            let envelope = match preset.gaussian_sigma {
                Some(sigma) => PumpEnvelope::gaussian_centered(e1, e2, sigma, center),
                None => PumpEnvelope::constant(e1, e2),
            };
            (
                angles,
                angles,
                envelope,
                preset.phase_sign,
                args.convention.map(Into::into).unwrap_or(PhaseConvention::AbsSum),
                Some(preset.name.to_string()),
            )
        }
        None => {
            let theta1 = finite_angle(require(args.theta1, "--theta1 (or --fig)")?, "--theta1")?;
            let theta2 = finite_angle(require(args.theta2, "--theta2 (or --fig)")?, "--theta2")?;
            let signal = WalkAngles::new(theta1, theta2);
            let idler = WalkAngles::new(
                args.idler_theta1.unwrap_or(theta1),
                args.idler_theta2.unwrap_or(theta2),
            );
            let envelope = match args.envelope.unwrap_or(EnvelopeArg::Constant) {
                EnvelopeArg::Constant => PumpEnvelope::constant(e1, e2),
                EnvelopeArg::Gaussian => {
                    let sigma = require(args.sigma, "--sigma (gaussian envelope)")?;
                    if !(sigma.is_finite() && sigma > 0.0) {
                        return Err(Failure::usage(format!(
                            "--sigma must be a positive finite width, got {sigma}"
                        )));
                    }
                    PumpEnvelope::gaussian_centered(e1, e2, sigma, center)
                }
            };
            (
                signal,
                idler,
                envelope,
                args.phase_sign
                    .map(Into::into)
                    .unwrap_or(PhaseSign::Correlated),
                args.convention
                    .map(Into::into)
                    .unwrap_or(PhaseConvention::AbsSum),
                None,
            )
        }
    };

    if !(gamma0.is_finite() && gamma0 > 0.0) {
        return Err(Failure::usage(format!(
            "--gamma0 must be a positive finite coupling, got {gamma0}"
        )));
    }
    let cfg = SpdcConfig::new(signal, idler, phase_sign, gamma0, convention);
    let num_k = ctx.num_k_or(256);
    let out = ctx.require_out("gamma")?;

    let grid = coupling_grid(&cfg, &envelope, num_k)?;
    write_grid_csv(out, &grid).map_err(|e| Failure::io("cannot write gamma CSV", e))?;

    let describe = |sidecar: &mut Sidecar| {
        sidecar
            .set("signal_theta1", format_float(signal.theta1()))
            .set("signal_theta2", format_float(signal.theta2()))
            .set("idler_theta1", format_float(idler.theta1()))
            .set("idler_theta2", format_float(idler.theta2()))
            .set(
                "envelope",
                match envelope.kind {
                    crate::spdc::EnvelopeKind::Constant => "constant",
                    crate::spdc::EnvelopeKind::Gaussian => "gaussian",
                },
            )
            .set("sigma", format_float(envelope.sigma))
            .set("sigma_units", "radians of total momentum, same units as k")
            .set("center", format_float(envelope.center))
            .set("e1", format_float(e1))
            .set("e2", format_float(e2))
            .set("gamma0", format_float(gamma0))
            .set(
                "phase_sign",
                match phase_sign {
                    PhaseSign::Correlated => "correlated",
                    PhaseSign::Anticorrelated => "anticorrelated",
                },
            )
            .set(
                "convention",
                match convention {
                    PhaseConvention::AbsSum => "abs-sum",
                    PhaseConvention::Product => "product",
                },
            )
            .set("num_k", num_k.to_string())
            .set("invalid_cells", grid.invalid_cells.to_string())
            .set(
                "layout",
                "row-major, row = k_s index; pixel (0,0) at (k_s, k_i) = (-pi, -pi)",
            );
        if let Some(name) = &preset_name {
            sidecar.set("preset", name.clone());
        }
        if let Some(seed) = ctx.seed {
            sidecar.set("seed", seed.to_string());
        }
    };

    if let Some(pgm_path) = &ctx.pgm {
        let magnitudes = grid.magnitude_squared();
        let (pixels, min, max) = normalize_grayscale(&magnitudes);
        write_pgm(pgm_path, num_k, num_k, &pixels)
            .map_err(|e| Failure::io("cannot write gamma PGM", e))?;
        let mut sidecar = Sidecar::new("gamma");
        describe(&mut sidecar);
        sidecar.normalization_min = Some(min);
        sidecar.normalization_max = Some(max);
        sidecar
            .write(sidecar_path(pgm_path))
            .map_err(|e| Failure::io("cannot write gamma sidecar", e))?;
    }

    if args.position_out.is_some() || args.position_pgm.is_some() {
        let map = joint_position_map(&grid)?;
        if let Some(path) = &args.position_out {
            let mut header = vec!["x_s".to_string()];
            header.extend(map.sites.iter().map(|x| x.to_string()));
            let mut rows = Vec::with_capacity(map.num_k);
            for (i, x) in map.sites.iter().enumerate() {
                let mut row = vec![x.to_string()];
                row.extend((0..map.num_k).map(|j| format_float(map.value(i, j))));
                rows.push(row);
            }
            write_csv(path, &header, &rows)
                .map_err(|e| Failure::io("cannot write position-map CSV", e))?;
        }
        if let Some(path) = &args.position_pgm {
            let (pixels, min, max) = normalize_grayscale(&map.values);
            write_pgm(path, map.num_k, map.num_k, &pixels)
                .map_err(|e| Failure::io("cannot write position-map PGM", e))?;
            let mut sidecar = Sidecar::new("gamma position-map");
            describe(&mut sidecar);
            sidecar.normalization_min = Some(min);
            sidecar.normalization_max = Some(max);
            sidecar
                .write(sidecar_path(path))
                .map_err(|e| Failure::io("cannot write position-map sidecar", e))?;
        }
    }
    Ok(())
}

fn write_grid_csv(path: &Path, grid: &CouplingGrid) -> std::io::Result<()> {
    let mut header = vec!["k_s".to_string()];
    header.extend(grid.k_values.iter().map(|&k| format_float(k)));
    let mag = grid.magnitude_squared();
    let m = grid.num_k;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![format_float(grid.k_values[i])];
        row.extend((0..m).map(|j| format_float(mag[i * m + j])));
        rows.push(row);
    }
    write_csv(path, &header, &rows)
}

struct WalkArgs {
    steps: Option<usize>,
    profile: Option<ProfileArg>,
    theta1: Option<f64>,
    theta2: Option<f64>,
    theta1_left: Option<f64>,
    theta1_right: Option<f64>,
    convention: Option<WalkConventionArg>,
    spin: Option<String>,
    radius: Option<usize>,
    classical: bool,
    fit_min: Option<usize>,
    fit_max: Option<usize>,
    half_extent: Option<usize>,
    dist: Option<PathBuf>,
}

fn parse_spin(spec: &str) -> Result<[C64; 2], Failure> {
    match spec {
        "symmetric" => Ok(symmetric_spin()),
        "h" => Ok([C64::new(1.0, 0.0), C64::new(0.0, 0.0)]),
        "v" => Ok([C64::new(0.0, 0.0), C64::new(1.0, 0.0)]),
        other => {
            let parts: Vec<&str> = other.split(',').collect();
            if parts.len() != 4 {
                return Err(Failure::usage(format!(
                    "--spin must be symmetric, h, v, or re,im,re,im; got {other:?}"
                )));
            }
            let mut vals = [0.0; 4];
            for (slot, part) in vals.iter_mut().zip(&parts) {
                *slot = part
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Failure::usage(format!("--spin component {part:?}: {e}")))?;
            }
            Ok([C64::new(vals[0], vals[1]), C64::new(vals[2], vals[3])])
        }
    }
}

fn run_walk(ctx: &GlobalArgs, args: WalkArgs) -> Result<(), Failure> {
    let steps = require(args.steps, "--steps")?;
    let convention: StepConvention = args
        .convention
        .unwrap_or(WalkConventionArg::Half)
        .into();
    let profile = match args.profile.unwrap_or(ProfileArg::Homogeneous) {
        ProfileArg::Homogeneous => {
            let theta1 = finite_angle(require(args.theta1, "--theta1")?, "--theta1")?;
            let theta2 = finite_angle(require(args.theta2, "--theta2")?, "--theta2")?;
            AngleProfile::Homogeneous(WalkAngles::new(theta1, theta2))
        }
        ProfileArg::Boundary => {
            let left = finite_angle(require(args.theta1_left, "--theta1-left")?, "--theta1-left")?;
            let right =
                finite_angle(require(args.theta1_right, "--theta1-right")?, "--theta1-right")?;
            let theta2 = finite_angle(require(args.theta2, "--theta2")?, "--theta2")?;
            AngleProfile::boundary(left, right, theta2)
        }
    };
    let spin = parse_spin(args.spin.as_deref().unwrap_or("symmetric"))?;
    let auto_extent = match convention {
        StepConvention::HalfStep => 2 * steps + 3,
        StepConvention::FullStep => 4 * steps + 3,
    };
    let half_extent = args.half_extent.unwrap_or(auto_extent);
    let out = ctx.require_out("walk")?;

    let initial = WalkState::localized(half_extent, spin)?;
    let stats = evolve(&initial, &profile, steps, convention)?;

    let mut header: Vec<String> = ["step", "sigma", "mean"].iter().map(|s| s.to_string()).collect();
    if args.classical {
        header.push("classical_sigma".to_string());
    }
    let mut rows = Vec::with_capacity(stats.len());
    for s in &stats {
        let mut row = vec![
            s.step_count.to_string(),
            format_float(s.sigma),
            format_float(s.mean),
        ];
        if args.classical {
            let sigma = if s.step_count == 0 {
                0.0
            } else {
                classical_baseline(s.step_count).sigma
            };
            row.push(format_float(sigma));
        }
        rows.push(row);
    }
    write_csv(out, &header, &rows).map_err(|e| Failure::io("cannot write walk CSV", e))?;

    let fit_min = args.fit_min.unwrap_or_else(|| (steps / 2).max(1));
    let fit_max = args.fit_max.unwrap_or(steps);
    match scaling_exponent(&stats, (fit_min, fit_max)) {
        Ok(slope) => println!("scaling_exponent = {}", format_float(slope)),
        Err(_) => println!("scaling_exponent = undefined (insufficient data)"),
    }

    if matches!(profile, AngleProfile::Boundary { .. }) {
        let radius = args.radius.unwrap_or(5) as i64;
        let last = stats.last().expect("evolve returns at least one record");
        let l = half_extent as i64;
        let fraction: f64 = last
            .distribution
            .iter()
            .enumerate()
            .filter(|(i, _)| (*i as i64 - l).abs() <= radius)
            .map(|(_, p)| p)
            .sum();
        println!("bound_fraction(radius={radius}) = {}", format_float(fraction));
    }

    if let Some(path) = &args.dist {
        let last = stats.last().expect("evolve returns at least one record");
        let header = vec!["x".to_string(), "p".to_string()];
        let l = half_extent as i64;
        let rows: Vec<Vec<String>> = last
            .distribution
            .iter()
            .enumerate()
            .map(|(i, p)| vec![(i as i64 - l).to_string(), format_float(*p)])
            .collect();
        write_csv(path, &header, &rows)
            .map_err(|e| Failure::io("cannot write distribution CSV", e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_table_is_complete_and_distinct() {
        let presets = figure_presets();
        assert_eq!(presets.len(), 8);
        for name in ["1a", "1b", "1c", "1d", "2a", "2b", "2c", "2d"] {
            assert!(figure_preset(name).is_some(), "missing preset {name}");
        }
        assert!(figure_preset("3a").is_none());
    }

    #[test]
    fn spin_presets_parse() {
        let sym = parse_spin("symmetric").unwrap();
        assert!((sym[0].norm_sqr() + sym[1].norm_sqr() - 1.0).abs() < 1e-12);
        let h = parse_spin("h").unwrap();
        assert_eq!(h[0], C64::new(1.0, 0.0));
        let custom = parse_spin("0.6,0,0,0.8").unwrap();
        assert_eq!(custom[0], C64::new(0.6, 0.0));
        assert_eq!(custom[1], C64::new(0.0, 0.8));
        assert!(parse_spin("1,2,3").is_err());
    }

    #[test]
    fn command_line_parses_with_global_flags_after_subcommand() {
        let cli = Cli::try_parse_from([
            "splitstep",
            "zak",
            "--theta1",
            "0.4",
            "--theta2",
            "0.001",
            "--num-k",
            "128",
        ])
        .unwrap();
        assert_eq!(cli.num_k, Some(128));
    }
}
