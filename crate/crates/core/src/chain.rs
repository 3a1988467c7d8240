//! Chain geometry, field modes, dipole orientation and validation.
//!
//! Atoms are numbered from 1 in every public API. Atom `j` sits on the
//! negative z-axis at `z_j = -a0 (j - 1)`, so the chain starts at the origin
//! and extends towards `-z`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::Error;
use crate::vector::{dot, Vec3};
use crate::Result;

/// Above this retardation parameter the nearest-neighbour closed forms lose
/// their `O(ka0)` accuracy.
pub const KA0_WARNING_THRESHOLD: f64 = 0.1;

/// Upper edge of the coupling range the closed forms are tabulated for.
pub const COUPLING_VALIDITY_LIMIT: f64 = 0.5;

/// Non-fatal conditions attached to results.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Warning {
    /// `ka0` above [`KA0_WARNING_THRESHOLD`]; dropped `O(ka0)` terms may matter.
    LargeRetardation { ka0: f64 },
    /// Closed-form amplitudes evaluated outside `C in [0, 0.5]`.
    Extrapolated { coupling: f64 },
}

/// Riemann zeta function at 3 (Apéry's constant).
///
/// Summed with the central-binomial series
/// `zeta(3) = 5/2 * sum_{n>=1} (-1)^(n+1) / (n^3 * binom(2n, n))`,
/// which gains a factor of about four per term.
pub fn riemann_zeta3() -> f64 {
    let mut sum = 0.0;
    let mut binom = 1.0_f64;
    let mut sign = 1.0;
    for n in 1..=40u32 {
        let nf = f64::from(n);
        binom *= (2.0 * nf) * (2.0 * nf - 1.0) / (nf * nf);
        sum += sign / (nf * nf * nf * binom);
        sign = -sign;
    }
    2.5 * sum
}

/// Geometry and material of a uniform chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    n_atoms: usize,
    spacing_nm: f64,
    wavelength_nm: f64,
    coupling: f64,
}

impl ChainSpec {
    /// `coupling` is the normalized polarizability `C = alpha / a0^3`.
    pub fn new(n_atoms: usize, spacing_nm: f64, wavelength_nm: f64, coupling: f64) -> Result<Self> {
        if n_atoms == 0 {
            return Err(Error::InvalidParameter {
                name: "n_atoms",
                value: 0.0,
                reason: "a chain needs at least one atom",
            });
        }
        positive("spacing_nm", spacing_nm)?;
        positive("wavelength_nm", wavelength_nm)?;
        if !(coupling >= 0.0 && coupling.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "coupling",
                value: coupling,
                reason: "must be finite and non-negative",
            });
        }
        Ok(ChainSpec {
            n_atoms,
            spacing_nm,
            wavelength_nm,
            coupling,
        })
    }

    /// Fig. 1 geometry: 629 atoms, 1 nm apart, 628 nm light.
    pub fn reference(coupling: f64) -> Result<Self> {
        ChainSpec::new(629, 1.0, 628.0, coupling)
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn spacing_nm(&self) -> f64 {
        self.spacing_nm
    }

    pub fn wavelength_nm(&self) -> f64 {
        self.wavelength_nm
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// Same geometry, different polarizability.
    pub fn with_coupling(&self, coupling: f64) -> Result<Self> {
        ChainSpec::new(self.n_atoms, self.spacing_nm, self.wavelength_nm, coupling)
    }

    /// Free-space wavenumber in 1/nm.
    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength_nm
    }

    /// Dimensionless retardation parameter `k a0`.
    pub fn ka0(&self) -> f64 {
        2.0 * PI * self.spacing_nm / self.wavelength_nm
    }

    /// The atom used for "far from the ends" reporting: `ceil(N / 2)`.
    pub fn mid_index(&self) -> usize {
        self.n_atoms.div_ceil(2)
    }

    pub fn warnings(&self) -> Vec<Warning> {
        let mut out = Vec::new();
        let ka0 = self.ka0();
        if ka0 > KA0_WARNING_THRESHOLD {
            out.push(Warning::LargeRetardation { ka0 });
        }
        out
    }

    pub fn check_index(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.n_atoms {
            Err(Error::IndexOutOfRange {
                index: j,
                n_atoms: self.n_atoms,
            })
        } else {
            Ok(())
        }
    }

    /// z coordinate of atom `j` in nm.
    pub fn z_nm(&self, j: usize) -> Result<f64> {
        self.check_index(j)?;
        Ok(self.spacing_nm * (1.0 - j as f64))
    }
}

/// Position of atom `j` (1-based) in nm.
pub fn atom_position(chain: &ChainSpec, j: usize) -> Result<Vec3> {
    Ok([0.0, 0.0, chain.z_nm(j)?])
}

/// `(sin, cos)` of a polar angle, exact at the equator so that vectors in
/// the transverse plane carry no spurious z component.
fn polar_sin_cos(theta: f64) -> (f64, f64) {
    if theta == PI / 2.0 {
        (1.0, 0.0)
    } else {
        (libm::sin(theta), libm::cos(theta))
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and strictly positive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    Perpendicular,
    Parallel,
}

/// One incident plane-wave mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec {
    theta: f64,
    phi: f64,
    polarization: Polarization,
}

impl ModeSpec {
    /// Mode in the `phi = pi` plane, where the problem is usually posed.
    pub fn new(theta: f64, polarization: Polarization) -> Result<Self> {
        ModeSpec::with_azimuth(theta, PI, polarization)
    }

    pub fn with_azimuth(theta: f64, phi: f64, polarization: Polarization) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: theta,
                reason: "must lie in [0, pi]",
            });
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::InvalidParameter {
                name: "phi",
                value: phi,
                reason: "must lie in [0, 2 pi)",
            });
        }
        Ok(ModeSpec {
            theta,
            phi,
            polarization,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn polarization(&self) -> Polarization {
        self.polarization
    }

    /// Propagation direction `s`.
    pub fn direction(&self) -> Vec3 {
        let (st, ct) = polar_sin_cos(self.theta);
        if self.phi == PI {
            return [-st, 0.0, ct];
        }
        let (sp, cp) = (libm::sin(self.phi), libm::cos(self.phi));
        [st * cp, st * sp, ct]
    }

    pub fn e_perpendicular(&self) -> Vec3 {
        if self.phi == PI {
            return [0.0, 1.0, 0.0];
        }
        [libm::sin(self.phi), -libm::cos(self.phi), 0.0]
    }

    pub fn e_parallel(&self) -> Vec3 {
        let (st, ct) = polar_sin_cos(self.theta);
        if self.phi == PI {
            return [ct, 0.0, st];
        }
        let (sp, cp) = (libm::sin(self.phi), libm::cos(self.phi));
        [-ct * cp, -ct * sp, st]
    }

    pub fn polarization_vector(&self) -> Vec3 {
        match self.polarization {
            Polarization::Perpendicular => self.e_perpendicular(),
            Polarization::Parallel => self.e_parallel(),
        }
    }

    /// `k s . r_j` divided by `k`: the path difference `cos(theta) * z_j` in nm.
    pub fn path_nm(&self, z_nm: f64) -> f64 {
        dot(&self.direction(), &[0.0, 0.0, z_nm])
    }
}

/// Orientation of the emitter's transition dipole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleOrientation {
    theta_d: f64,
    phi_d: f64,
}

impl DipoleOrientation {
    pub fn new(theta_d: f64, phi_d: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta_d) {
            return Err(Error::InvalidParameter {
                name: "theta_d",
                value: theta_d,
                reason: "must lie in [0, pi]",
            });
        }
        if !phi_d.is_finite() {
            return Err(Error::InvalidParameter {
                name: "phi_d",
                value: phi_d,
                reason: "must be finite",
            });
        }
        Ok(DipoleOrientation { theta_d, phi_d })
    }

    /// Dipole perpendicular to the chain.
    pub fn transverse() -> Self {
        DipoleOrientation {
            theta_d: PI / 2.0,
            phi_d: 0.0,
        }
    }

    pub fn theta_d(&self) -> f64 {
        self.theta_d
    }

    pub fn phi_d(&self) -> f64 {
        self.phi_d
    }

    pub fn unit_vector(&self) -> Vec3 {
        let (st, ct) = polar_sin_cos(self.theta_d);
        let (sp, cp) = (libm::sin(self.phi_d), libm::cos(self.phi_d));
        [st * cp, st * sp, ct]
    }
}

/// Free-space reference values that turn ratios into absolute quantities.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReferenceScales {
    free_space_lifetime: Option<f64>,
    free_space_shift: Option<f64>,
}

impl ReferenceScales {
    pub fn new(free_space_lifetime: Option<f64>, free_space_shift: Option<f64>) -> Result<Self> {
        if let Some(t) = free_space_lifetime {
            positive("free_space_lifetime", t)?;
        }
        if let Some(d) = free_space_shift {
            positive("free_space_shift", d)?;
        }
        Ok(ReferenceScales {
            free_space_lifetime,
            free_space_shift,
        })
    }

    pub fn free_space_lifetime(&self) -> Option<f64> {
        self.free_space_lifetime
    }

    pub fn free_space_shift(&self) -> Option<f64> {
        self.free_space_shift
    }

    /// Absolute lifetime `tau = tau1 * (tau / tau1)`.
    pub fn lifetime(&self, lifetime_ratio: f64) -> Option<f64> {
        self.free_space_lifetime.map(|t| t * lifetime_ratio)
    }

    /// Absolute shift `Delta = Delta1 * (Delta / Delta1)`.
    pub fn shift(&self, shift_ratio: f64) -> Option<f64> {
        self.free_space_shift.map(|d| d * shift_ratio)
    }
}
