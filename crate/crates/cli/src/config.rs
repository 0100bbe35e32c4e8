//! Command-line flags, the optional JSON config file, and their merge.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use squeezelab::fock::FockConfig;
use squeezelab::montecarlo::{Scheme, TrajectoryConfig};
use squeezelab::{Grid, SweepAxis, SystemParams};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "squeezelab", version, about = "Squeezed light from atoms in a lossy cavity beyond the RWA")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Intracavity quadrature variances along one parameter axis.
    #[command(allow_negative_numbers = true)]
    Variances {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Output squeezing spectra over a frequency range.
    #[command(allow_negative_numbers = true)]
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Frequencies as start:stop:steps [γ].
        #[arg(long, value_name = "RANGE")]
        omega_range: Option<String>,
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
    },
    /// Intracavity photon number at one point or along an axis.
    #[command(allow_negative_numbers = true)]
    PhotonNumber {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Locate the superradiant critical coupling by bisection in U₀.
    #[command(allow_negative_numbers = true)]
    QptScan {
        #[command(flatten)]
        common: Common,
        /// Upper end of the bisection bracket [γ].
        #[arg(long)]
        u0_max: Option<f64>,
        /// Bracket width at which bisection stops [γ].
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Monte-Carlo moments (and optionally spectra) against the analytic results.
    #[command(allow_negative_numbers = true)]
    McValidate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        mc: McArgs,
        /// Also estimate output spectra at these frequencies.
        #[arg(long, value_name = "RANGE")]
        omega_range: Option<String>,
    },
    /// Fock-space steady state against the closed form, over a truncation list.
    #[command(allow_negative_numbers = true)]
    OracleValidate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        fock: FockArgs,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Variances { .. } => "variances",
            Command::Spectrum { .. } => "spectrum",
            Command::PhotonNumber { .. } => "photon-number",
            Command::QptScan { .. } => "qpt-scan",
            Command::McValidate { .. } => "mc-validate",
            Command::OracleValidate { .. } => "oracle-validate",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Variances { common, .. }
            | Command::Spectrum { common, .. }
            | Command::PhotonNumber { common, .. }
            | Command::QptScan { common, .. }
            | Command::McValidate { common, .. }
            | Command::OracleValidate { common, .. } => common,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodArg {
    Rederived,
    AsPrinted,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeArg {
    Heun,
    EulerMaruyama,
}

#[derive(Debug, Default, Args)]
pub struct Common {
    /// JSON config file; flags take precedence over its values.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Write here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Cavity frequency [γ].
    #[arg(long)]
    pub omega_c: Option<f64>,
    /// Atomic transition frequency [γ].
    #[arg(long)]
    pub omega_eg: Option<f64>,
    /// Collective dispersive coupling Ω₀²/ω_eg [γ].
    #[arg(long, conflicts_with = "omega_0")]
    pub u0: Option<f64>,
    /// Collective vacuum Rabi frequency [γ].
    #[arg(long)]
    pub omega_0: Option<f64>,
    /// Cavity field decay rate.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Diamagnetic strength relative to U₀.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Quadrature phase [rad].
    #[arg(long)]
    pub theta: Option<f64>,
}

#[derive(Debug, Default, Args)]
pub struct SweepArgs {
    #[arg(long, value_name = "RANGE", group = "axis")]
    pub omega_c_range: Option<String>,
    #[arg(long, value_name = "RANGE", group = "axis")]
    pub u0_range: Option<String>,
    #[arg(long, value_name = "RANGE", group = "axis")]
    pub alpha_range: Option<String>,
}

#[derive(Debug, Default, Args)]
pub struct McArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub n_traj: Option<usize>,
    /// Integration step [1/γ].
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub t_burn: Option<f64>,
    #[arg(long)]
    pub t_sample: Option<f64>,
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,
}

#[derive(Debug, Default, Args)]
pub struct FockArgs {
    /// Ascending truncations, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n_max: Option<Vec<usize>>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub leak_tolerance: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub command: Option<String>,
    #[serde(default)]
    pub params: FileParams,
    pub theta: Option<f64>,
    pub sweep: Option<FileSweep>,
    pub omega_range: Option<String>,
    pub method: Option<MethodArg>,
    pub u0_max: Option<f64>,
    pub tol: Option<f64>,
    #[serde(default)]
    pub mc: FileMc,
    #[serde(default)]
    pub fock: FileFock,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileParams {
    pub omega_c: Option<f64>,
    pub omega_eg: Option<f64>,
    pub u0: Option<f64>,
    pub omega_0: Option<f64>,
    pub gamma: Option<f64>,
    pub alpha: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileSweep {
    pub axis: SweepAxis,
    pub range: String,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileMc {
    pub seed: Option<u64>,
    pub n_traj: Option<usize>,
    pub dt: Option<f64>,
    pub t_burn: Option<f64>,
    pub t_sample: Option<f64>,
    pub scheme: Option<SchemeArg>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileFock {
    pub n_max: Option<Vec<usize>>,
    pub tolerance: Option<f64>,
    pub leak_tolerance: Option<f64>,
}

pub const DEFAULT_OMEGA_C: f64 = 1.0;
pub const DEFAULT_OMEGA_EG: f64 = 10.0;
pub const DEFAULT_GAMMA: f64 = 1.0;
pub const DEFAULT_N_MAX: [usize; 5] = [16, 24, 32, 48, 64];

pub fn load_file(path: &Path, command: &str) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::ConfigParse(format!("cannot read {}: {e}", path.display())))?;
    let file: FileConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::ConfigParse(format!("{}: {e}", path.display())))?;
    if let Some(c) = &file.command {
        if c != command {
            return Err(CliError::ConfigParse(format!(
                "config file is for command '{c}', not '{command}'"
            )));
        }
    }
    Ok(file)
}

/// Physical inputs after merging flags over file values over defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedParams {
    pub omega_c: f64,
    pub omega_eg: f64,
    pub coupling: Coupling,
    pub gamma: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    U0(f64),
    Omega0(f64),
}

impl ResolvedParams {
    pub fn resolve(common: &Common, file: &FileParams) -> Self {
        let coupling = match (common.u0, common.omega_0) {
            (Some(u0), _) => Coupling::U0(u0),
            (None, Some(o)) => Coupling::Omega0(o),
            (None, None) => match (file.u0, file.omega_0) {
                (Some(u0), _) => Coupling::U0(u0),
                (None, Some(o)) => Coupling::Omega0(o),
                (None, None) => Coupling::U0(0.0),
            },
        };
        Self {
            omega_c: common.omega_c.or(file.omega_c).unwrap_or(DEFAULT_OMEGA_C),
            omega_eg: common.omega_eg.or(file.omega_eg).unwrap_or(DEFAULT_OMEGA_EG),
            coupling,
            gamma: common.gamma.or(file.gamma).unwrap_or(DEFAULT_GAMMA),
            alpha: common.alpha.or(file.alpha).unwrap_or(0.0),
        }
    }

    pub fn build(&self) -> squeezelab::Result<SystemParams> {
        match self.coupling {
            Coupling::U0(u0) => {
                SystemParams::from_dispersive_coupling(self.omega_c, self.omega_eg, u0, self.gamma, self.alpha)
            }
            Coupling::Omega0(o) => squeezelab::build_params(self.omega_c, self.omega_eg, o, self.gamma, self.alpha),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        map.insert("omega_c".into(), self.omega_c.into());
        map.insert("omega_eg".into(), self.omega_eg.into());
        match self.coupling {
            Coupling::U0(u0) => map.insert("u0".into(), u0.into()),
            Coupling::Omega0(o) => map.insert("omega_0".into(), o.into()),
        };
        map.insert("gamma".into(), self.gamma.into());
        map.insert("alpha".into(), self.alpha.into());
        serde_json::Value::Object(map)
    }
}

pub fn parse_grid(text: &str, what: &str) -> Result<Grid, CliError> {
    text.parse()
        .map_err(|e| CliError::ConfigParse(format!("{what}: {e}")))
}

/// Sweep from flags, else from the file.
pub fn resolve_sweep(args: &SweepArgs, file: &FileConfig) -> Result<Option<(SweepAxis, Grid)>, CliError> {
    let flag = [
        (SweepAxis::OmegaC, &args.omega_c_range),
        (SweepAxis::U0, &args.u0_range),
        (SweepAxis::Alpha, &args.alpha_range),
    ]
    .into_iter()
    .find_map(|(axis, text)| text.as_ref().map(|t| (axis, t.clone())));
    let chosen = flag.or_else(|| file.sweep.as_ref().map(|s| (s.axis, s.range.clone())));
    chosen
        .map(|(axis, text)| Ok((axis, parse_grid(&text, &format!("{}_range", axis.name()))?)))
        .transpose()
}

pub fn resolve_mc(args: &McArgs, file: &FileMc) -> TrajectoryConfig {
    let base = TrajectoryConfig::default();
    let scheme = match args.scheme.or(file.scheme) {
        Some(SchemeArg::Heun) => Scheme::Heun,
        Some(SchemeArg::EulerMaruyama) => Scheme::EulerMaruyama,
        None => base.scheme,
    };
    TrajectoryConfig {
        dt: args.dt.or(file.dt).unwrap_or(base.dt),
        t_burn: args.t_burn.or(file.t_burn).unwrap_or(base.t_burn),
        t_sample: args.t_sample.or(file.t_sample).unwrap_or(base.t_sample),
        n_traj: args.n_traj.or(file.n_traj).unwrap_or(base.n_traj),
        seed: args.seed.or(file.seed).unwrap_or(base.seed),
        scheme,
    }
}

pub fn resolve_fock(args: &FockArgs, file: &FileFock) -> (Vec<usize>, FockConfig) {
    let base = FockConfig::default();
    let list = args.n_max.clone().or_else(|| file.n_max.clone()).unwrap_or_else(|| DEFAULT_N_MAX.to_vec());
    let config = FockConfig {
        n_max: *list.last().unwrap_or(&base.n_max),
        tolerance: args.tolerance.or(file.tolerance).unwrap_or(base.tolerance),
        leak_tolerance: args.leak_tolerance.or(file.leak_tolerance).unwrap_or(base.leak_tolerance),
    };
    (list, config)
}
