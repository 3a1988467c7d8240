//! Single-emitter observables from the amplitude factors.
//!
//! With amplitude factors `T^x` (transverse) and `T^z` (along the chain), an
//! emitter with unit dipole `u_d` couples to the local modes through the
//! vector `V = (T^x u_x, T^x u_y, T^z u_z)`. Everything here follows from it:
//!
//! * decay rate relative to free space: `|V|^2 = (T^x)^2 sin^2(theta_d) + (T^z)^2 cos^2(theta_d)`,
//!   with the radiative shift `Delta / Delta_1` in lockstep;
//! * angular intensity: `|V|^2 [1 - (u'_d . s)^2]` with `u'_d = V / |V|`;
//! * rotation of the pattern: `cos(gamma) = u_d . u'_d`.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::chain::{ChainSpec, DipoleOrientation};
use crate::error::Error;
use crate::quadrature::SphereGrid;
use crate::solver::{AmplitudeProfile, ChainOperator, SolveOptions};
use crate::vector::{dot, Vec3};
use crate::Result;

/// Overall prefactor of the in-chain angular intensity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum IntensityPrefactor {
    /// `|V|^2`; integrates to the decay rate for every orientation.
    #[default]
    DecayRate,
    /// `(T^x)^2`, the literal printed prefactor. Equal to `|V|^2` only for a
    /// dipole perpendicular to the chain.
    TransverseSquared,
}

/// `tau_1 / tau(r_j)` for real amplitude factors.
pub fn rate_ratio(tx: f64, tz: f64, orientation: &DipoleOrientation) -> f64 {
    let (s, c) = sin_cos_sq(orientation);
    tx * tx * s + tz * tz * c
}

/// Same as [`rate_ratio`] with modulus-squared complex amplitudes.
pub fn rate_ratio_complex(tx: Complex64, tz: Complex64, orientation: &DipoleOrientation) -> f64 {
    let (s, c) = sin_cos_sq(orientation);
    tx.norm_sqr() * s + tz.norm_sqr() * c
}

/// `tau / tau_1`; infinite for a dark emitter.
pub fn lifetime_ratio(rate_ratio: f64) -> f64 {
    if rate_ratio > 0.0 {
        1.0 / rate_ratio
    } else {
        f64::INFINITY
    }
}

fn sin_cos_sq(o: &DipoleOrientation) -> (f64, f64) {
    let s = libm::sin(o.theta_d());
    let c = libm::cos(o.theta_d());
    (s * s, c * c)
}

/// Quadrature estimate of the decay-rate ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureEstimate {
    pub rate_ratio: f64,
    pub polar_nodes: usize,
    pub azimuth_nodes: usize,
    /// All underlying linear solves converged.
    pub converged: bool,
}

/// Decay-rate ratio from the angular integral
/// `(3 / 8 pi) sum_lambda integral |u_d . E_lambda|^2 dOmega`,
/// with the mode amplitudes re-solved for every polar node.
pub fn rate_ratio_quadrature(
    chain: &ChainSpec,
    atom_index: usize,
    orientation: &DipoleOrientation,
    options: &SolveOptions,
    grid: &SphereGrid,
) -> Result<QuadratureEstimate> {
    chain.check_index(atom_index)?;
    let op = ChainOperator::new(chain, options, true)?;
    let u = orientation.unit_vector();
    let step = 2.0 * PI / grid.azimuth_nodes() as f64;
    let mut converged = true;
    let mut total = 0.0;
    for (theta, w) in grid.polar_angles().zip(grid.polar_weights()) {
        let amps = op.amplitudes_at(theta)?;
        converged &= amps.reports.iter().all(|r| r.converged);
        let tt = amps.transverse[atom_index - 1];
        let tz = amps.longitudinal[atom_index - 1];
        let (st, ct) = (libm::sin(theta), libm::cos(theta));
        let ring: f64 = grid
            .azimuths()
            .map(|phi| {
                let (sp, cp) = (libm::sin(phi), libm::cos(phi));
                let perp = tt * (u[0] * sp - u[1] * cp);
                let par = tt * (-ct) * (u[0] * cp + u[1] * sp) + tz * (st * u[2]);
                perp.norm_sqr() + par.norm_sqr()
            })
            .sum();
        total += w * ring * step;
    }
    Ok(QuadratureEstimate {
        rate_ratio: 3.0 / (8.0 * PI) * total,
        polar_nodes: grid.polar_nodes(),
        azimuth_nodes: grid.azimuth_nodes(),
        converged,
    })
}

/// Inversion `<sigma_3>(t) = -1 + (1 + sigma3_initial) exp(-t / tau)`.
///
/// The upper-level population is `(1 + value) / 2`.
pub fn excited_population(t_over_tau: f64, sigma3_initial: f64) -> f64 {
    // Same as -1 + (1 + s) e^{-t}, exact at t = 0.
    sigma3_initial * libm::exp(-t_over_tau) + libm::expm1(-t_over_tau)
}

/// Upper-level population `(1 + sigma_3) / 2`.
pub fn upper_population(t_over_tau: f64, sigma3_initial: f64) -> f64 {
    0.5 * (1.0 + excited_population(t_over_tau, sigma3_initial))
}

/// `u'_d = (sin cos, sin sin, r cos) / sqrt(sin^2 + r^2 cos^2)`, `r = T^z / T^x`.
pub fn effective_dipole(orientation: &DipoleOrientation, ratio_r: f64) -> Result<Vec3> {
    let u = orientation.unit_vector();
    let v = [u[0], u[1], ratio_r * u[2]];
    let n2 = dot(&v, &v);
    if n2.is_nan() || n2 <= 1e-300 || n2.is_infinite() {
        return Err(Error::DegenerateDipole);
    }
    let n = libm::sqrt(n2);
    Ok([v[0] / n, v[1] / n, v[2] / n])
}

/// Angle between the bare and the effective dipole, `acos(u_d . u'_d)`.
pub fn rotation_angle(orientation: &DipoleOrientation, ratio_r: f64) -> Result<f64> {
    let cos_gamma = rotation_cosine(orientation, ratio_r)?;
    Ok(libm::acos(cos_gamma))
}

/// `cos(gamma)`, clamped to `[-1, 1]`.
pub fn rotation_cosine(orientation: &DipoleOrientation, ratio_r: f64) -> Result<f64> {
    let u = orientation.unit_vector();
    let up = effective_dipole(orientation, ratio_r)?;
    Ok(dot(&u, &up).clamp(-1.0, 1.0))
}

fn coupling_vector(orientation: &DipoleOrientation, tx: f64, tz: f64) -> Vec3 {
    let u = orientation.unit_vector();
    [tx * u[0], tx * u[1], tz * u[2]]
}

/// Relative intensity emitted along `direction_s` (physical constants
/// factored out).
pub fn angular_intensity(
    orientation: &DipoleOrientation,
    tx: f64,
    tz: f64,
    direction_s: &Vec3,
    upper_population: f64,
    prefactor: IntensityPrefactor,
) -> f64 {
    let v = coupling_vector(orientation, tx, tz);
    let v2 = dot(&v, &v);
    let vs = dot(&v, direction_s);
    // |V|^2 [1 - (u'.s)^2] = |V|^2 - (V.s)^2
    let shaped = v2 - vs * vs;
    match prefactor {
        IntensityPrefactor::DecayRate => upper_population * shaped,
        IntensityPrefactor::TransverseSquared => {
            if v2 > 0.0 {
                upper_population * tx * tx * shaped / v2
            } else {
                0.0
            }
        }
    }
}

/// `(3 / 8 pi) integral I(s) dOmega` at unit upper population.
pub fn pattern_integral(
    orientation: &DipoleOrientation,
    tx: f64,
    tz: f64,
    prefactor: IntensityPrefactor,
    grid: &SphereGrid,
) -> f64 {
    let total = grid.integrate(|theta, phi| {
        let st = libm::sin(theta);
        let s = [st * libm::cos(phi), st * libm::sin(phi), libm::cos(theta)];
        angular_intensity(orientation, tx, tz, &s, 1.0, prefactor)
    });
    3.0 / (8.0 * PI) * total
}

/// Observables of one emitter position and dipole orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionReport {
    /// 1-based.
    pub atom_index: usize,
    /// `tau_1 / tau`.
    pub rate_ratio: f64,
    /// `tau / tau_1`.
    pub lifetime_ratio: f64,
    /// `Delta / Delta_1`.
    pub shift_ratio: f64,
    pub gamma: f64,
    pub effective_dipole: Vec3,
    /// `|V|^2`.
    pub pattern_scale: f64,
}

impl EmissionReport {
    /// From real amplitude factors at one atom.
    pub fn from_amplitudes(
        atom_index: usize,
        tx: f64,
        tz: f64,
        orientation: &DipoleOrientation,
    ) -> Result<Self> {
        if tx == 0.0 {
            return Err(Error::DegenerateDipole);
        }
        let rate = rate_ratio(tx, tz, orientation);
        let r = tz / tx;
        Ok(EmissionReport {
            atom_index,
            rate_ratio: rate,
            lifetime_ratio: lifetime_ratio(rate),
            shift_ratio: rate,
            gamma: rotation_angle(orientation, r)?,
            effective_dipole: effective_dipole(orientation, r)?,
            pattern_scale: rate,
        })
    }

    /// From a (possibly complex) amplitude profile; rates use `|T|^2` and the
    /// pattern direction uses `Re(T^z / T^x)`.
    pub fn from_profile(
        profile: &AmplitudeProfile,
        atom_index: usize,
        orientation: &DipoleOrientation,
    ) -> Result<Self> {
        let [tx, _, tz] = profile.at(atom_index)?;
        if tx.norm() == 0.0 {
            return Err(Error::DegenerateDipole);
        }
        let rate = rate_ratio_complex(tx, tz, orientation);
        let r = (tz / tx).re;
        Ok(EmissionReport {
            atom_index,
            rate_ratio: rate,
            lifetime_ratio: lifetime_ratio(rate),
            shift_ratio: rate,
            gamma: rotation_angle(orientation, r)?,
            effective_dipole: effective_dipole(orientation, r)?,
            pattern_scale: rate,
        })
    }

    pub fn is_dark(&self) -> bool {
        self.rate_ratio <= 0.0
    }
}
