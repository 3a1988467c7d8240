use core::fmt;

/// Everything that can go wrong inside the simulator.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A chain, mode or orientation parameter is outside its physical domain.
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    /// A 1-based atom index outside `1..=n_atoms`.
    IndexOutOfRange { index: usize, n_atoms: usize },
    /// Coupling between an atom and itself was requested.
    ZeroSeparation,
    /// Solver options that cannot drive a solve.
    InvalidOptions(&'static str),
    /// The dense elimination met a pivot below the singularity threshold.
    ///
    /// For the chain this means the coupling sits on a collective resonance.
    Singular {
        row: usize,
        pivot: f64,
        threshold: f64,
    },
    /// A closed-form expression was evaluated at (or next to) its pole.
    Pole { coupling: f64, pole: f64 },
    /// The effective dipole collapses to the zero vector.
    DegenerateDipole,
    /// Right-hand side length does not match the system size.
    DimensionMismatch { expected: usize, found: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter {
                name,
                value,
                reason,
            } => write!(f, "invalid {name} = {value}: {reason}"),
            Error::IndexOutOfRange { index, n_atoms } => {
                write!(f, "atom index {index} outside 1..={n_atoms}")
            }
            Error::ZeroSeparation => f.write_str("self-coupling (separation 0) is undefined"),
            Error::InvalidOptions(msg) => write!(f, "invalid solver options: {msg}"),
            Error::Singular {
                row,
                pivot,
                threshold,
            } => write!(
                f,
                "system is singular or resonant: pivot {pivot:e} at row {row} below {threshold:e}"
            ),
            Error::Pole { coupling, pole } => {
                write!(
                    f,
                    "coupling {coupling} is at the pole {pole} of the closed form"
                )
            }
            Error::DegenerateDipole => f.write_str("effective dipole vector vanishes"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "expected {expected} entries, found {found}")
            }
        }
    }
}

impl core::error::Error for Error {}
