//! Run configuration: global flags, an optional `key=value` file, defaults.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use dipchain_core::{ChainSpec, DipoleOrientation, SolveMethod, SolveOptions, ZMode};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZModeArg {
    Paper,
    Equation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Direct,
    GaussSeidel,
    Sor,
}

impl From<ZModeArg> for ZMode {
    fn from(z: ZModeArg) -> Self {
        match z {
            ZModeArg::Paper => ZMode::Paper,
            ZModeArg::Equation => ZMode::Equation,
        }
    }
}

impl From<SolverArg> for SolveMethod {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Direct => SolveMethod::Direct,
            SolverArg::GaussSeidel => SolveMethod::GaussSeidel,
            SolverArg::Sor => SolveMethod::Sor,
        }
    }
}

/// Parses an angle that carries its unit: `90deg`, `90°` or `1.5708rad`.
pub fn parse_angle(raw: &str) -> Result<f64, String> {
    let s = raw.trim();
    let (number, to_rad) = if let Some(n) = s.strip_suffix("deg") {
        (n, true)
    } else if let Some(n) = s.strip_suffix('°') {
        (n, true)
    } else if let Some(n) = s.strip_suffix("rad") {
        (n, false)
    } else {
        return Err(format!("angle '{raw}' needs a unit suffix (deg, ° or rad)"));
    };
    let x: f64 = number
        .trim()
        .parse()
        .map_err(|_| format!("angle '{raw}' is not a number"))?;
    if !x.is_finite() {
        return Err(format!("angle '{raw}' is not finite"));
    }
    Ok(if to_rad { x.to_radians() } else { x })
}

fn parse_couplings(raw: &str) -> Result<Vec<f64>, String> {
    raw.split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .map_err(|_| format!("coupling '{c}' is not a number"))
        })
        .collect()
}

/// Flags shared by every subcommand. Each one may also come from `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// Flat key=value file using the long flag names as keys.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub n_atoms: Option<usize>,
    #[arg(long, global = true)]
    pub spacing_nm: Option<f64>,
    #[arg(long, global = true)]
    pub wavelength_nm: Option<f64>,
    /// Normalized polarizability; repeat the flag or give a comma list.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub coupling: Vec<f64>,
    /// Dipole polar angle, e.g. `90deg`.
    #[arg(long, global = true, value_parser = parse_angle, allow_hyphen_values = true)]
    pub theta_d: Option<f64>,
    #[arg(long, global = true, value_parser = parse_angle, allow_hyphen_values = true)]
    pub phi_d: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub z_mode: Option<ZModeArg>,
    #[arg(long, global = true, value_enum)]
    pub solver: Option<SolverArg>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub max_sweeps: Option<usize>,
    #[arg(long, global = true)]
    pub relax: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Compare against the built-in amplitude table; exit 3 on mismatch.
    #[arg(long, global = true)]
    pub check: bool,
}

const FILE_KEYS: &[&str] = &[
    "n-atoms",
    "spacing-nm",
    "wavelength-nm",
    "coupling",
    "theta-d",
    "phi-d",
    "z-mode",
    "solver",
    "tol",
    "max-sweeps",
    "relax",
    "format",
    "output",
    "check",
];

/// Reads `key=value` lines; `#` starts a comment, blank lines are skipped.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("line {}: expected key=value", n + 1)))?;
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        if !FILE_KEYS.contains(&key.as_str()) {
            return Err(CliError::config(format!(
                "line {}: unknown key '{key}'",
                n + 1
            )));
        }
        map.insert(key, v.trim().to_owned());
    }
    Ok(map)
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n_atoms: usize,
    pub spacing_nm: f64,
    pub wavelength_nm: f64,
    /// Sorted ascending, without duplicates.
    pub couplings: Vec<f64>,
    pub theta_d: Option<f64>,
    pub phi_d: f64,
    pub z_mode: ZMode,
    pub options: SolveOptions,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub check: bool,
}

fn pick<T>(
    flag: Option<T>,
    file: &BTreeMap<String, String>,
    key: &str,
    parse: impl Fn(&str) -> Result<T, String>,
) -> Result<Option<T>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match file.get(key) {
        Some(raw) => parse(raw)
            .map(Some)
            .map_err(|e| CliError::config(format!("{key}: {e}"))),
        None => Ok(None),
    }
}

fn from_str<T: std::str::FromStr>(raw: &str) -> Result<T, String> {
    raw.parse().map_err(|_| format!("cannot parse '{raw}'"))
}

fn enum_value<T: ValueEnum>(raw: &str) -> Result<T, String> {
    T::from_str(raw, false)
}

impl RunConfig {
    /// Merges flags over the config file over defaults and validates.
    ///
    /// `default_couplings` applies only when neither source names a coupling.
    pub fn resolve(args: &GlobalArgs, default_couplings: &[f64]) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => read_config_file(path)?,
            None => BTreeMap::new(),
        };
        let flag_couplings = (!args.coupling.is_empty()).then(|| args.coupling.clone());
        let mut couplings = pick(flag_couplings, &file, "coupling", parse_couplings)?
            .unwrap_or_else(|| default_couplings.to_vec());
        if couplings.is_empty() {
            return Err(CliError::config("coupling list is empty"));
        }
        couplings.sort_by(f64::total_cmp);
        couplings.dedup();

        let defaults = SolveOptions::default();
        let method: Option<SolverArg> = pick(args.solver, &file, "solver", enum_value)?;
        let n_atoms = pick(args.n_atoms, &file, "n-atoms", from_str)?.unwrap_or(629);
        let options = SolveOptions {
            method: method.map_or(SolveOptions::for_size(n_atoms).method, Into::into),
            tolerance: pick(args.tol, &file, "tol", from_str)?.unwrap_or(defaults.tolerance),
            max_sweeps: pick(args.max_sweeps, &file, "max-sweeps", from_str)?
                .unwrap_or(defaults.max_sweeps),
            relaxation: pick(args.relax, &file, "relax", from_str)?.unwrap_or(defaults.relaxation),
        };
        options
            .validate()
            .map_err(|e| CliError::config(e.to_string()))?;

        let check = args.check
            || pick(None, &file, "check", |s| match s {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                _ => Err(format!("'{s}' is not a boolean")),
            })?
            .unwrap_or(false);

        let cfg = RunConfig {
            n_atoms,
            spacing_nm: pick(args.spacing_nm, &file, "spacing-nm", from_str)?.unwrap_or(1.0),
            wavelength_nm: pick(args.wavelength_nm, &file, "wavelength-nm", from_str)?
                .unwrap_or(628.0),
            couplings,
            theta_d: pick(args.theta_d, &file, "theta-d", parse_angle)?,
            phi_d: pick(args.phi_d, &file, "phi-d", parse_angle)?.unwrap_or(0.0),
            z_mode: pick(args.z_mode, &file, "z-mode", enum_value::<ZModeArg>)?
                .map_or(ZMode::Paper, Into::into),
            options,
            format: pick(args.format, &file, "format", enum_value)?.unwrap_or(Format::Csv),
            output: pick(args.output.clone(), &file, "output", |s| {
                Ok(PathBuf::from(s))
            })?,
            check,
        };
        cfg.chains()?;
        cfg.orientation()?;
        Ok(cfg)
    }

    /// One chain per coupling, in coupling order.
    pub fn chains(&self) -> Result<Vec<ChainSpec>, CliError> {
        self.couplings
            .iter()
            .map(|&c| ChainSpec::new(self.n_atoms, self.spacing_nm, self.wavelength_nm, c))
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::config(e.to_string()))
    }

    /// Dipole orientation; `theta_d` defaults to perpendicular to the chain.
    pub fn orientation(&self) -> Result<DipoleOrientation, CliError> {
        DipoleOrientation::new(
            self.theta_d.unwrap_or(std::f64::consts::FRAC_PI_2),
            self.phi_d,
        )
        .map_err(|e| CliError::config(e.to_string()))
    }

    pub fn solver_name(&self) -> &'static str {
        match self.options.method {
            SolveMethod::Direct => "direct",
            SolveMethod::GaussSeidel => "gauss-seidel",
            SolveMethod::Sor => "sor",
        }
    }

    pub fn z_mode_name(&self) -> &'static str {
        match self.z_mode {
            ZMode::Paper => "paper",
            ZMode::Equation => "equation",
        }
    }
}
