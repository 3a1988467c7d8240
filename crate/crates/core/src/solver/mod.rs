//! Coupled local-field equations of the chain.
//!
//! Projected on the Cartesian axes, the vector equations for the mode
//! function decouple into three scalar systems `(I - C) f = b` with a
//! symmetric Toeplitz coupling matrix. Two solvers are provided: dense LU
//! (the default, robust for every coupling) and Gauss–Seidel/SOR sweeps.

mod dense;
mod iterative;
mod mode;
mod system;
#[cfg(feature = "std")]
mod toeplitz;

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

pub use self::dense::{LuFactors, SINGULAR_RELATIVE_PIVOT};
pub use self::mode::{
    extract_amplitudes, solve_mode, AmplitudeMethod, AmplitudeProfile, ChainOperator, FieldProfile,
    ZMode,
};
pub use self::system::{assemble, coupling_coefficient, free_field_factor, ScalarSystem};
#[cfg(feature = "std")]
pub use self::toeplitz::ToeplitzOperator;

use crate::error::Error;
use crate::Result;

/// Chains up to this size default to the dense solver.
pub const DIRECT_SIZE_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    X,
    Y,
    Z,
}

impl Component {
    pub const ALL: [Component; 3] = [Component::X, Component::Y, Component::Z];

    pub fn axis(self) -> usize {
        match self {
            Component::X => 0,
            Component::Y => 1,
            Component::Z => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveMethod {
    Direct,
    GaussSeidel,
    Sor,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub method: SolveMethod,
    /// Max-norm change between successive iterates that ends the sweeps.
    pub tolerance: f64,
    pub max_sweeps: usize,
    /// SOR relaxation factor in `(0, 2]`; Gauss–Seidel always uses 1.
    pub relaxation: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            method: SolveMethod::Direct,
            tolerance: 1e-10,
            max_sweeps: 100_000,
            relaxation: 1.0,
        }
    }
}

impl SolveOptions {
    /// Defaults for a chain of `n_atoms`: dense up to [`DIRECT_SIZE_LIMIT`].
    pub fn for_size(n_atoms: usize) -> Self {
        let method = if n_atoms <= DIRECT_SIZE_LIMIT {
            SolveMethod::Direct
        } else {
            SolveMethod::GaussSeidel
        };
        SolveOptions {
            method,
            ..SolveOptions::default()
        }
    }

    pub fn gauss_seidel() -> Self {
        SolveOptions {
            method: SolveMethod::GaussSeidel,
            ..SolveOptions::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidOptions("tolerance must be positive"));
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidOptions("max_sweeps must be at least 1"));
        }
        if !(self.relaxation > 0.0 && self.relaxation <= 2.0) {
            return Err(Error::InvalidOptions("relaxation must lie in (0, 2]"));
        }
        Ok(())
    }

    fn effective_relaxation(&self) -> f64 {
        match self.method {
            SolveMethod::Sor => self.relaxation,
            _ => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveReport {
    pub converged: bool,
    pub sweeps_used: usize,
    /// Max-norm of `(I - C) f - b`.
    pub final_residual: f64,
    pub method_used: SolveMethod,
}

impl SolveReport {
    fn trivial(method: SolveMethod) -> Self {
        SolveReport {
            converged: true,
            sweeps_used: 0,
            final_residual: 0.0,
            method_used: method,
        }
    }
}

/// Dense solve of `(I - C) f = b`.
pub fn solve_direct(system: &ScalarSystem) -> Result<(Vec<Complex64>, SolveReport)> {
    let n = system.len();
    if !system.is_driven() {
        return Ok((
            vec![Complex64::new(0.0, 0.0); n],
            SolveReport::trivial(SolveMethod::Direct),
        ));
    }
    let lu = LuFactors::factor(system.dense_matrix(), n)?;
    let f = lu.solve(&system.rhs)?;
    let report = SolveReport {
        converged: true,
        sweeps_used: 0,
        final_residual: system.residual(&f),
        method_used: SolveMethod::Direct,
    };
    Ok((f, report))
}

/// Gauss–Seidel (or SOR) solve of `(I - C) f = b`.
///
/// Non-convergence is reported through [`SolveReport::converged`], not as
/// an error; the last iterate is returned.
pub fn solve_iterative(
    system: &ScalarSystem,
    options: &SolveOptions,
) -> Result<(Vec<Complex64>, SolveReport)> {
    options.validate()?;
    let method = match options.method {
        SolveMethod::Sor => SolveMethod::Sor,
        _ => SolveMethod::GaussSeidel,
    };
    let out = iterative::sweep(
        &system.coupling_row,
        &system.rhs,
        options.tolerance,
        options.max_sweeps,
        options.effective_relaxation(),
    );
    let final_residual = system.residual(&out.solution);
    let report = SolveReport {
        converged: out.converged,
        sweeps_used: out.sweeps,
        final_residual,
        method_used: method,
    };
    Ok((out.solution, report))
}

/// Dispatches on [`SolveOptions::method`].
pub fn solve(
    system: &ScalarSystem,
    options: &SolveOptions,
) -> Result<(Vec<Complex64>, SolveReport)> {
    options.validate()?;
    match options.method {
        SolveMethod::Direct => solve_direct(system),
        SolveMethod::GaussSeidel | SolveMethod::Sor => solve_iterative(system, options),
    }
}
