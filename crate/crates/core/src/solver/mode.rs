use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::dense::LuFactors;
use super::system::{assemble, coupling_row, free_field_factor, ScalarSystem};
use super::{solve, Component, SolveMethod, SolveOptions, SolveReport};
use crate::chain::{ChainSpec, ModeSpec, Polarization, Warning};
use crate::vector::CVec3;
use crate::Result;

/// Mode function sampled at every atom of the chain.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldProfile {
    /// `f_j` for `j = 1..=N`, stored 0-based.
    pub values: Vec<CVec3>,
    pub mode: ModeSpec,
    pub chain: ChainSpec,
    /// One report per Cartesian component, in x, y, z order.
    pub reports: [SolveReport; 3],
    pub warnings: Vec<Warning>,
}

impl FieldProfile {
    pub fn converged(&self) -> bool {
        self.reports.iter().all(|r| r.converged)
    }

    /// `f_j` for a 1-based atom index.
    pub fn at(&self, j: usize) -> Result<CVec3> {
        self.chain.check_index(j)?;
        Ok(self.values[j - 1])
    }
}

/// Solves the three component systems of one mode.
pub fn solve_mode(
    chain: &ChainSpec,
    mode: &ModeSpec,
    options: &SolveOptions,
) -> Result<FieldProfile> {
    options.validate()?;
    let n = chain.n_atoms();
    let mut values = alloc::vec![[Complex64::new(0.0, 0.0); 3]; n];
    let mut reports = [SolveReport {
        converged: true,
        sweeps_used: 0,
        final_residual: 0.0,
        method_used: options.method,
    }; 3];
    for component in Component::ALL {
        let system = assemble(chain, mode, component);
        let (f, report) = solve(&system, options)?;
        for (slot, v) in values.iter_mut().zip(f) {
            slot[component.axis()] = v;
        }
        reports[component.axis()] = report;
    }
    Ok(FieldProfile {
        values,
        mode: *mode,
        chain: *chain,
        reports,
        warnings: chain.warnings(),
    })
}

/// How the longitudinal amplitude `T^z` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZMode {
    /// `T^z = -2 T^x`, the relation quoted for the optical range.
    Paper,
    /// `T^z` from the z-row of the coupled equations themselves.
    Equation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AmplitudeMethod {
    Numeric,
    OneNeighbor,
    TwoNeighbor,
    InfiniteChain,
}

/// Per-atom amplitude factors `T_j = f_j / (e_lambda E_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeProfile {
    pub tx: Vec<Complex64>,
    pub ty: Vec<Complex64>,
    pub tz: Vec<Complex64>,
    pub method: AmplitudeMethod,
    pub z_mode: ZMode,
    pub reports: Vec<SolveReport>,
    pub warnings: Vec<Warning>,
}

impl AmplitudeProfile {
    pub fn len(&self) -> usize {
        self.tx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tx.is_empty()
    }

    pub fn converged(&self) -> bool {
        self.reports.iter().all(|r| r.converged)
    }

    /// `(T^x, T^y, T^z)` at a 1-based atom index.
    pub fn at(&self, j: usize) -> Result<[Complex64; 3]> {
        if j == 0 || j > self.len() {
            return Err(crate::Error::IndexOutOfRange {
                index: j,
                n_atoms: self.len(),
            });
        }
        Ok([self.tx[j - 1], self.ty[j - 1], self.tz[j - 1]])
    }
}

/// Coupling operators of one chain with their factorizations cached.
///
/// The transverse (x and y share it) and longitudinal matrices do not depend
/// on the mode, so one factorization serves every angle.
#[derive(Debug, Clone)]
pub struct ChainOperator {
    chain: ChainSpec,
    options: SolveOptions,
    transverse: Vec<Complex64>,
    longitudinal: Vec<Complex64>,
    transverse_lu: Option<LuFactors>,
    longitudinal_lu: Option<LuFactors>,
}

/// Amplitude factors of every atom for one propagation angle.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleAmplitudes {
    pub theta: f64,
    /// Shared by the x and y components.
    pub transverse: Vec<Complex64>,
    pub longitudinal: Vec<Complex64>,
    pub reports: [SolveReport; 2],
}

impl ChainOperator {
    /// Prepares the operator; with the direct method the transverse matrix is
    /// factored now and the longitudinal one only if `longitudinal` is set.
    pub fn new(chain: &ChainSpec, options: &SolveOptions, longitudinal: bool) -> Result<Self> {
        options.validate()?;
        let transverse = coupling_row(Component::X, chain);
        let longitudinal_row = coupling_row(Component::Z, chain);
        let n = chain.n_atoms();
        let (transverse_lu, longitudinal_lu) = if options.method == SolveMethod::Direct {
            let t = LuFactors::factor(super::system::dense_from_row(&transverse), n)?;
            let l = if longitudinal {
                Some(LuFactors::factor(
                    super::system::dense_from_row(&longitudinal_row),
                    n,
                )?)
            } else {
                None
            };
            (Some(t), l)
        } else {
            (None, None)
        };
        Ok(ChainOperator {
            chain: *chain,
            options: *options,
            transverse,
            longitudinal: longitudinal_row,
            transverse_lu,
            longitudinal_lu,
        })
    }

    pub fn chain(&self) -> &ChainSpec {
        &self.chain
    }

    /// Solves an assembled system, reusing a cached factorization if present.
    pub fn solve_system(&self, system: &ScalarSystem) -> Result<(Vec<Complex64>, SolveReport)> {
        let lu = match system.component {
            Component::X | Component::Y => self.transverse_lu.as_ref(),
            Component::Z => self.longitudinal_lu.as_ref(),
        };
        match lu {
            Some(lu) if system.is_driven() => {
                let f = lu.solve(&system.rhs)?;
                let report = SolveReport {
                    converged: true,
                    sweeps_used: 0,
                    final_residual: system.residual(&f),
                    method_used: SolveMethod::Direct,
                };
                Ok((f, report))
            }
            _ => solve(system, &self.options),
        }
    }

    fn scalar_system(&self, component: Component, theta: f64) -> Result<ScalarSystem> {
        let ka0 = self.chain.ka0();
        let rhs = (1..=self.chain.n_atoms())
            .map(|j| free_field_factor(j, theta, ka0))
            .collect();
        let row = match component {
            Component::Z => self.longitudinal.clone(),
            _ => self.transverse.clone(),
        };
        Ok(ScalarSystem {
            component,
            rhs,
            coupling_row: row,
            chain: self.chain,
            mode: ModeSpec::new(theta, Polarization::Parallel)?,
        })
    }

    /// Transverse and longitudinal amplitude factors for propagation angle
    /// `theta`, obtained by driving each system with the bare phase `E_j`.
    pub fn amplitudes_at(&self, theta: f64) -> Result<AngleAmplitudes> {
        let mut reports = [SolveReport {
            converged: true,
            sweeps_used: 0,
            final_residual: 0.0,
            method_used: self.options.method,
        }; 2];
        let mut out = [Vec::new(), Vec::new()];
        for (k, component) in [Component::X, Component::Z].into_iter().enumerate() {
            let system = self.scalar_system(component, theta)?;
            let (f, report) = self.solve_system(&system)?;
            out[k] = f.iter().zip(&system.rhs).map(|(f, e)| f / e).collect();
            reports[k] = report;
        }
        let [transverse, longitudinal] = out;
        Ok(AngleAmplitudes {
            theta,
            transverse,
            longitudinal,
            reports,
        })
    }
}

// Every extraction angle has a unit polarization component, so rhs_j = E_j.
fn divide_by_phase(f: &[Complex64], system: &ScalarSystem) -> Vec<Complex64> {
    f.iter().zip(&system.rhs).map(|(f, e)| f / e).collect()
}

/// Numerically extracted amplitude factors.
///
/// `T^y` comes from the perpendicular mode at `theta = pi/2`, `T^x` from the
/// parallel mode at `theta = 0` (where the z system is undriven) and, in
/// [`ZMode::Equation`], `T^z` from the parallel mode at `theta = pi/2`.
pub fn extract_amplitudes(
    chain: &ChainSpec,
    options: &SolveOptions,
    z_mode: ZMode,
) -> Result<AmplitudeProfile> {
    let op = ChainOperator::new(chain, options, z_mode == ZMode::Equation)?;
    let mut reports = Vec::with_capacity(3);

    let perp = ModeSpec::new(PI / 2.0, Polarization::Perpendicular)?;
    let sys_y = assemble(chain, &perp, Component::Y);
    let (fy, rep) = op.solve_system(&sys_y)?;
    reports.push(rep);
    let ty = divide_by_phase(&fy, &sys_y);

    let along = ModeSpec::new(0.0, Polarization::Parallel)?;
    let sys_x = assemble(chain, &along, Component::X);
    let (fx, rep) = op.solve_system(&sys_x)?;
    reports.push(rep);
    let tx = divide_by_phase(&fx, &sys_x);

    let tz = match z_mode {
        ZMode::Paper => tx.iter().map(|t| t * -2.0).collect(),
        ZMode::Equation => {
            let across = ModeSpec::new(PI / 2.0, Polarization::Parallel)?;
            let sys_z = assemble(chain, &across, Component::Z);
            let (fz, rep) = op.solve_system(&sys_z)?;
            reports.push(rep);
            divide_by_phase(&fz, &sys_z)
        }
    };

    Ok(AmplitudeProfile {
        tx,
        ty,
        tz,
        method: AmplitudeMethod::Numeric,
        z_mode,
        reports,
        warnings: chain.warnings(),
    })
}
