//! The five subcommands. Each builds a [`Table`]; sweeps over couplings run
//! in parallel and are stitched back together in coupling order.

use std::f64::consts::PI;

use clap::{Subcommand, ValueEnum};
use rayon::prelude::*;

use dipchain_core::analytic::{infinite_chain, one_neighbor, two_neighbor};
use dipchain_core::emission::{angular_intensity, pattern_integral, rotation_angle};
use dipchain_core::golden::{self, NUMERIC_TOLERANCE};
use dipchain_core::quadrature::SphereGrid;
use dipchain_core::solver::{extract_amplitudes, solve_mode};
use dipchain_core::{
    AmplitudeProfile, ChainSpec, DipoleOrientation, EmissionReport, FieldProfile,
    IntensityPrefactor, ModeSpec, Polarization, ReferenceScales, SolveMethod, SolveOptions,
    Warning, ZMode,
};

use crate::config::{parse_angle, RunConfig};
use crate::error::CliError;
use crate::table::{Table, Value};

/// Couplings swept by the lifetime profile when none are given.
const LIFETIME_DEMO_COUPLINGS: [f64; 3] = [0.1, 0.3, 0.5];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolarizationArg {
    Perpendicular,
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PrefactorArg {
    DecayRate,
    TransverseSquared,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Mode function at every atom for one incident plane wave.
    ModeProfile {
        /// Polar angle of the propagation direction.
        #[arg(long, default_value = "90deg", value_parser = parse_angle, allow_hyphen_values = true)]
        theta: f64,
        /// Azimuth of the propagation direction.
        #[arg(long, default_value = "180deg", value_parser = parse_angle, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, value_enum, default_value_t = PolarizationArg::Perpendicular)]
        polarization: PolarizationArg,
    },
    /// End, next-to-end and mid-chain amplitude factors per coupling.
    AmplitudeTable,
    /// Decay rate and lifetime of an excited atom at every chain position.
    LifetimeProfile {
        /// Free-space lifetime; adds an absolute lifetime column.
        #[arg(long)]
        free_lifetime: Option<f64>,
        /// Free-space radiative shift; adds an absolute shift column.
        #[arg(long, allow_hyphen_values = true)]
        free_shift: Option<f64>,
    },
    /// Rotation of the emission pattern against the dipole angle.
    RotationCurve {
        #[arg(long, default_value = "0deg", value_parser = parse_angle, allow_hyphen_values = true)]
        start: f64,
        #[arg(long, default_value = "90deg", value_parser = parse_angle, allow_hyphen_values = true)]
        end: f64,
        #[arg(long, default_value_t = 91)]
        steps: usize,
    },
    /// Angular photon distribution of one emitter, in the chain and free.
    AngularPattern {
        /// 1-based emitter index; defaults to mid-chain.
        #[arg(long)]
        atom: Option<usize>,
        #[arg(long, default_value_t = 19)]
        polar_steps: usize,
        #[arg(long, default_value_t = 36)]
        azimuth_steps: usize,
        #[arg(long, value_enum, default_value_t = PrefactorArg::DecayRate)]
        prefactor: PrefactorArg,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::ModeProfile { .. } => "mode-profile",
            Command::AmplitudeTable => "amplitude-table",
            Command::LifetimeProfile { .. } => "lifetime-profile",
            Command::RotationCurve { .. } => "rotation-curve",
            Command::AngularPattern { .. } => "angular-pattern",
        }
    }

    pub fn default_couplings(&self) -> Vec<f64> {
        match self {
            Command::AmplitudeTable => golden::AMPLITUDE_TABLE.iter().map(|r| r.coupling).collect(),
            Command::LifetimeProfile { .. } => LIFETIME_DEMO_COUPLINGS.to_vec(),
            Command::ModeProfile { .. } => vec![0.4],
            Command::RotationCurve { .. } | Command::AngularPattern { .. } => vec![0.1],
        }
    }
}

pub struct Outcome {
    pub table: Table,
    /// Golden comparisons that failed under `--check`.
    pub check_failures: Vec<String>,
}

pub fn execute(command: &Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut check_failures = Vec::new();
    let mut table = match command {
        Command::ModeProfile {
            theta,
            phi,
            polarization,
        } => mode_profile(cfg, *theta, *phi, *polarization)?,
        Command::AmplitudeTable => amplitude_table(cfg, &mut check_failures)?,
        Command::LifetimeProfile {
            free_lifetime,
            free_shift,
        } => {
            let scales = ReferenceScales::new(*free_lifetime, *free_shift)
                .map_err(|e| CliError::config(e.to_string()))?;
            lifetime_profile(cfg, &scales)?
        }
        Command::RotationCurve { start, end, steps } => rotation_curve(cfg, *start, *end, *steps)?,
        Command::AngularPattern {
            atom,
            polar_steps,
            azimuth_steps,
            prefactor,
        } => {
            let prefactor = match prefactor {
                PrefactorArg::DecayRate => IntensityPrefactor::DecayRate,
                PrefactorArg::TransverseSquared => IntensityPrefactor::TransverseSquared,
            };
            angular_pattern(cfg, *atom, *polar_steps, *azimuth_steps, prefactor)?
        }
    };
    if cfg.check && !matches!(command, Command::AmplitudeTable) {
        table.set_meta("check", "no golden data for this command");
    }
    Ok(Outcome {
        table,
        check_failures,
    })
}

/// Result of one coupling value: its rows, notes and warnings.
struct Section {
    rows: Vec<Vec<Value>>,
    notes: Vec<String>,
    warnings: Vec<Warning>,
    meta: Vec<(String, String)>,
}

impl Section {
    fn new() -> Self {
        Section {
            rows: Vec::new(),
            notes: Vec::new(),
            warnings: Vec::new(),
            meta: Vec::new(),
        }
    }
}

fn sweep<F>(cfg: &RunConfig, table: &mut Table, f: F) -> Result<(), CliError>
where
    F: Fn(&ChainSpec) -> Result<Section, CliError> + Sync,
{
    let chains = cfg.chains()?;
    let sections = chains.par_iter().map(&f).collect::<Result<Vec<_>, _>>()?;
    let mut notes = Vec::new();
    let mut warnings = Vec::new();
    for s in sections {
        for row in s.rows {
            table.push(row);
        }
        notes.extend(s.notes);
        for w in s.warnings {
            let text = describe(&w);
            if !warnings.contains(&text) {
                warnings.push(text);
            }
        }
        for (k, v) in s.meta {
            table.set_meta(k, v);
        }
    }
    if !warnings.is_empty() {
        table.set_meta("warnings", warnings.join("; "));
    }
    if !notes.is_empty() {
        table.set_meta("notes", notes.join("; "));
    }
    Ok(())
}

fn describe(w: &Warning) -> String {
    match w {
        Warning::LargeRetardation { ka0 } => {
            format!("ka0={ka0} is large; dropped retardation terms may matter")
        }
        Warning::Extrapolated { coupling } => {
            format!("C={coupling} is outside the fitted range of the closed forms")
        }
    }
}

fn header(cfg: &RunConfig, command: &str, columns: &[&str]) -> Table {
    let mut t = Table::new(command, columns);
    t.set_meta("n_atoms", cfg.n_atoms);
    t.set_meta("spacing_nm", cfg.spacing_nm);
    t.set_meta("wavelength_nm", cfg.wavelength_nm);
    let cs: Vec<String> = cfg.couplings.iter().map(f64::to_string).collect();
    t.set_meta("couplings", cs.join(","));
    t.set_meta("z_mode", cfg.z_mode_name());
    t.set_meta("solver", cfg.solver_name());
    t
}

fn direct(options: &SolveOptions) -> SolveOptions {
    SolveOptions {
        method: SolveMethod::Direct,
        ..*options
    }
}

fn retry_note(chain: &ChainSpec) -> String {
    format!(
        "C={}: iterative solve did not converge, retried with the direct solver",
        chain.coupling()
    )
}

/// Amplitude extraction with the direct-solver fallback.
fn amplitudes(
    chain: &ChainSpec,
    cfg: &RunConfig,
    z_mode: ZMode,
    notes: &mut Vec<String>,
) -> Result<AmplitudeProfile, CliError> {
    let prof = extract_amplitudes(chain, &cfg.options, z_mode)?;
    if prof.converged() {
        return Ok(prof);
    }
    notes.push(retry_note(chain));
    Ok(extract_amplitudes(chain, &direct(&cfg.options), z_mode)?)
}

fn field(
    chain: &ChainSpec,
    mode: &ModeSpec,
    cfg: &RunConfig,
    notes: &mut Vec<String>,
) -> Result<FieldProfile, CliError> {
    let prof = solve_mode(chain, mode, &cfg.options)?;
    if prof.converged() {
        return Ok(prof);
    }
    notes.push(retry_note(chain));
    Ok(solve_mode(chain, mode, &direct(&cfg.options))?)
}

fn mode_profile(
    cfg: &RunConfig,
    theta: f64,
    phi: f64,
    polarization: PolarizationArg,
) -> Result<Table, CliError> {
    let pol = match polarization {
        PolarizationArg::Perpendicular => Polarization::Perpendicular,
        PolarizationArg::Parallel => Polarization::Parallel,
    };
    let mode =
        ModeSpec::with_azimuth(theta, phi, pol).map_err(|e| CliError::config(e.to_string()))?;
    let mut table = header(
        cfg,
        "mode-profile",
        &[
            "coupling", "j", "z_nm", "re_fx", "im_fx", "re_fy", "im_fy", "re_fz", "im_fz",
        ],
    );
    table.set_meta("theta_rad", theta);
    table.set_meta("phi_rad", phi);
    table.set_meta(
        "polarization",
        match pol {
            Polarization::Perpendicular => "perpendicular",
            Polarization::Parallel => "parallel",
        },
    );
    sweep(cfg, &mut table, |chain| {
        let mut s = Section::new();
        let prof = field(chain, &mode, cfg, &mut s.notes)?;
        s.warnings = prof.warnings.clone();
        for (i, f) in prof.values.iter().enumerate() {
            let j = i + 1;
            s.rows.push(vec![
                chain.coupling().into(),
                j.into(),
                chain.z_nm(j)?.into(),
                f[0].re.into(),
                f[0].im.into(),
                f[1].re.into(),
                f[1].im.into(),
                f[2].re.into(),
                f[2].im.into(),
            ]);
        }
        Ok(s)
    })?;
    Ok(table)
}

const AMPLITUDE_COLUMNS: [&str; 9] = [
    "one_t1", "one_t2", "one_t0", "two_t1", "two_t2", "two_t0", "num_t1", "num_t2", "num_t0",
];

fn amplitude_table(cfg: &RunConfig, failures: &mut Vec<String>) -> Result<Table, CliError> {
    if cfg.n_atoms < 3 {
        return Err(CliError::config("amplitude-table needs at least 3 atoms"));
    }
    let mut columns = vec!["coupling"];
    columns.extend(AMPLITUDE_COLUMNS);
    let full: Vec<String> = AMPLITUDE_COLUMNS
        .iter()
        .map(|c| format!("{c}_full"))
        .collect();
    columns.extend(full.iter().map(String::as_str));
    columns.push("inf_t0_full");
    if cfg.check {
        columns.extend(["check", "check_max_dev"]);
    }
    let mut table = header(cfg, "amplitude-table", &columns);
    table.set_meta("mid_index", cfg.chains()?[0].mid_index());
    if cfg.check {
        table.set_meta("check_tolerance", NUMERIC_TOLERANCE);
    }

    let check = cfg.check;
    let mut found = Vec::new();
    sweep(cfg, &mut table, |chain| {
        let c = chain.coupling();
        let mut s = Section::new();
        let one = one_neighbor(c).ok();
        let two = two_neighbor(c).ok();
        let inf = infinite_chain(c).ok();
        for (name, ok) in [
            ("one-neighbour", one.is_some()),
            ("two-neighbour", two.is_some()),
        ] {
            if !ok {
                s.notes
                    .push(format!("C={c}: {name} closed form has a pole here"));
            }
        }
        for a in [&one, &two].into_iter().flatten() {
            s.warnings.extend(a.warnings());
        }
        // Only T^x is tabulated, so the longitudinal solve is skipped.
        let prof = amplitudes(chain, cfg, ZMode::Paper, &mut s.notes)?;
        s.warnings.extend(prof.warnings.iter().copied());
        let numeric = [
            prof.tx[0].re,
            prof.tx[1].re,
            prof.tx[chain.mid_index() - 1].re,
        ];
        let cells: [Option<f64>; 9] = [
            one.and_then(|a| a.t1),
            one.and_then(|a| a.t2),
            one.map(|a| a.t0),
            two.and_then(|a| a.t1),
            two.and_then(|a| a.t2),
            two.map(|a| a.t0),
            Some(numeric[0]),
            Some(numeric[1]),
            Some(numeric[2]),
        ];
        let mut row: Vec<Value> = vec![c.into()];
        row.extend(
            cells
                .iter()
                .map(|v| v.map_or(Value::Text(String::new()), |x| Value::Fixed(x, 3))),
        );
        row.extend(
            cells
                .iter()
                .map(|v| v.map_or(Value::Text(String::new()), Value::Num)),
        );
        row.push(inf.map_or(Value::Text(String::new()), |a| Value::Num(a.t0)));
        if check {
            match golden::row(c) {
                Some(g) => {
                    let dev = numeric
                        .iter()
                        .zip(&g.numeric)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                    let pass = dev <= NUMERIC_TOLERANCE;
                    row.push(if pass { "pass" } else { "fail" }.into());
                    row.push(dev.into());
                    if !pass {
                        s.meta.push((
                            format!("check_failure@{c}"),
                            format!("numeric deviates by {dev} from {:?}", g.numeric),
                        ));
                    }
                }
                None => {
                    row.push("n/a".into());
                    row.push(Value::Text(String::new()));
                }
            }
        }
        s.rows.push(row);
        Ok(s)
    })?;
    for (k, v) in &table.meta {
        if k.starts_with("check_failure@") {
            found.push(format!("{k}: {v}"));
        }
    }
    failures.extend(found);
    Ok(table)
}

fn lifetime_profile(cfg: &RunConfig, scales: &ReferenceScales) -> Result<Table, CliError> {
    let o = cfg.orientation()?;
    let mut columns = vec![
        "coupling",
        "j",
        "z_nm",
        "tx_re",
        "tx_im",
        "tz_re",
        "tz_im",
        "rate_ratio",
        "lifetime_ratio",
        "shift_ratio",
        "gamma_rad",
    ];
    if scales.free_space_lifetime().is_some() {
        columns.push("lifetime");
    }
    if scales.free_space_shift().is_some() {
        columns.push("shift");
    }
    let mut table = header(cfg, "lifetime-profile", &columns);
    table.set_meta("theta_d_rad", o.theta_d());
    table.set_meta("phi_d_rad", o.phi_d());
    sweep(cfg, &mut table, |chain| {
        let mut s = Section::new();
        let prof = amplitudes(chain, cfg, cfg.z_mode, &mut s.notes)?;
        s.warnings = prof.warnings.clone();
        for j in 1..=prof.len() {
            let [tx, _, tz] = prof.at(j)?;
            let rep = EmissionReport::from_profile(&prof, j, &o)?;
            let mut row: Vec<Value> = vec![
                chain.coupling().into(),
                j.into(),
                chain.z_nm(j)?.into(),
                tx.re.into(),
                tx.im.into(),
                tz.re.into(),
                tz.im.into(),
                rep.rate_ratio.into(),
                rep.lifetime_ratio.into(),
                rep.shift_ratio.into(),
                rep.gamma.into(),
            ];
            if let Some(v) = scales.lifetime(rep.lifetime_ratio) {
                row.push(v.into());
            }
            if let Some(v) = scales.shift(rep.shift_ratio) {
                row.push(v.into());
            }
            s.rows.push(row);
        }
        Ok(s)
    })?;
    Ok(table)
}

/// Evenly spaced grid from `start` to `end`, both included.
fn grid(start: f64, end: f64, steps: usize) -> Vec<f64> {
    match steps {
        1 => vec![start],
        _ => (0..steps)
            .map(|i| start + (end - start) * i as f64 / (steps - 1) as f64)
            .collect(),
    }
}

fn rotation_curve(cfg: &RunConfig, start: f64, end: f64, steps: usize) -> Result<Table, CliError> {
    if steps == 0 {
        return Err(CliError::config("rotation-curve needs at least one step"));
    }
    let angles = grid(start, end, steps);
    let orientations = angles
        .iter()
        .map(|&t| DipoleOrientation::new(t, cfg.phi_d))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::config(e.to_string()))?;
    let columns = [
        "coupling",
        "r",
        "theta_d_deg",
        "theta_d_rad",
        "cos_gamma",
        "gamma_deg",
        "gamma_rad",
    ];
    let mut table = header(cfg, "rotation-curve", &columns);
    let curve = |c: Value, r: f64| -> Result<Vec<Vec<Value>>, CliError> {
        orientations
            .iter()
            .map(|o| {
                let g = rotation_angle(o, r)?;
                Ok(vec![
                    c.clone(),
                    r.into(),
                    o.theta_d().to_degrees().into(),
                    o.theta_d().into(),
                    g.cos().into(),
                    g.to_degrees().into(),
                    g.into(),
                ])
            })
            .collect()
    };
    match cfg.z_mode {
        ZMode::Paper => {
            // r = T^z / T^x = -2 independent of the coupling.
            table.set_meta("couplings", "");
            for row in curve(Value::Text(String::new()), -2.0)? {
                table.push(row);
            }
        }
        ZMode::Equation => {
            sweep(cfg, &mut table, |chain| {
                let mut s = Section::new();
                let prof = amplitudes(chain, cfg, ZMode::Equation, &mut s.notes)?;
                s.warnings = prof.warnings.clone();
                let [tx, _, tz] = prof.at(chain.mid_index())?;
                let r = (tz / tx).re;
                s.meta
                    .push((format!("r@{}", chain.coupling()), r.to_string()));
                s.rows = curve(chain.coupling().into(), r)?;
                Ok(s)
            })?;
        }
    }
    Ok(table)
}

fn angular_pattern(
    cfg: &RunConfig,
    atom: Option<usize>,
    polar_steps: usize,
    azimuth_steps: usize,
    prefactor: IntensityPrefactor,
) -> Result<Table, CliError> {
    if polar_steps < 2 || azimuth_steps == 0 {
        return Err(CliError::config(
            "angular-pattern needs at least 2 polar and 1 azimuth steps",
        ));
    }
    let o = cfg.orientation()?;
    let first = cfg.chains()?[0];
    let atom = atom.unwrap_or(first.mid_index());
    first
        .check_index(atom)
        .map_err(|e| CliError::config(e.to_string()))?;
    let mut table = header(
        cfg,
        "angular-pattern",
        &["coupling", "theta_deg", "phi_deg", "in_chain", "free_space"],
    );
    table.set_meta("atom", atom);
    table.set_meta("theta_d_rad", o.theta_d());
    table.set_meta("phi_d_rad", o.phi_d());
    table.set_meta(
        "prefactor",
        match prefactor {
            IntensityPrefactor::DecayRate => "decay-rate",
            IntensityPrefactor::TransverseSquared => "transverse-squared",
        },
    );
    let sphere = SphereGrid::default();
    sweep(cfg, &mut table, |chain| {
        let c = chain.coupling();
        let mut s = Section::new();
        let prof = amplitudes(chain, cfg, cfg.z_mode, &mut s.notes)?;
        s.warnings = prof.warnings.clone();
        let rep = EmissionReport::from_profile(&prof, atom, &o)?;
        let [tx, _, tz] = prof.at(atom)?;
        let tx_eff = tx.norm();
        let tz_eff = (tz / tx).re * tx_eff;
        for i in 0..polar_steps {
            let theta = PI * i as f64 / (polar_steps - 1) as f64;
            for k in 0..azimuth_steps {
                let phi = 2.0 * PI * k as f64 / azimuth_steps as f64;
                let dir = [
                    theta.sin() * phi.cos(),
                    theta.sin() * phi.sin(),
                    theta.cos(),
                ];
                s.rows.push(vec![
                    c.into(),
                    (180.0 * i as f64 / (polar_steps - 1) as f64).into(),
                    (360.0 * k as f64 / azimuth_steps as f64).into(),
                    angular_intensity(&o, tx_eff, tz_eff, &dir, 1.0, prefactor).into(),
                    angular_intensity(&o, 1.0, 1.0, &dir, 1.0, prefactor).into(),
                ]);
            }
        }
        let integral = pattern_integral(&o, tx_eff, tz_eff, prefactor, &sphere);
        s.meta = vec![
            (format!("pattern_scale@{c}"), rep.pattern_scale.to_string()),
            (format!("rate_ratio@{c}"), rep.rate_ratio.to_string()),
            (
                format!("sphere_integral_over_8pi_3@{c}"),
                integral.to_string(),
            ),
            (format!("gamma_rad@{c}"), rep.gamma.to_string()),
            (format!("gamma_deg@{c}"), rep.gamma.to_degrees().to_string()),
        ];
        Ok(s)
    })?;
    Ok(table)
}
