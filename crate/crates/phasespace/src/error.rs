//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Grid construction rejected the requested axes or counts.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// Two fields that must share a grid (and hbar) do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A point lies outside the domain of the field it is evaluated on.
    #[error("point ({p}, {q}) outside the field domain")]
    OutOfDomain { p: f64, q: f64 },

    /// Non-finite value where a finite one is required.
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    /// Odd cat with zero displacement has zero norm.
    #[error("degenerate cat state: odd superposition requires a nonzero displacement")]
    DegenerateCat,

    /// A field violates |pi*hbar*W| <= 1 beyond the clamping window.
    #[error("unphysical field: pi*hbar*W = {value} exceeds 1 beyond tolerance")]
    UnphysicalField { value: f64 },

    /// Conditioning on a measurement outcome whose probability is below the floor.
    #[error("impossible outcome: probability {probability:.3e} below floor {floor:.1e}")]
    ImpossibleOutcome { probability: f64, floor: f64 },

    /// State support escapes the grid; enlarge the domain.
    #[error(
        "field support escapes the grid (boundary tail mass {tail_mass:.3e}); \
         enlarge the domain to half-width >= {suggested_half_width:.3}"
    )]
    DomainOverflow {
        tail_mass: f64,
        suggested_half_width: f64,
    },

    /// Threshold search bracket does not straddle the positivity crossing.
    #[error("threshold bracket [0, {t_hi}] not sign-changing: min at t_hi is {min_at_hi:.3e}")]
    BracketNotSignChanging { t_hi: f64, min_at_hi: f64 },

    /// Zero-size Monte Carlo request.
    #[error("sample size must be positive")]
    EmptySample,

    /// Requested displacement exceeds what the Fock truncation can represent.
    #[error("truncation bound violated: |chord|^2/(2*hbar) = {amplitude:.1} vs dim {dim}")]
    TruncationExceeded { amplitude: f64, dim: usize },

    /// A Fock-space trace carries an imaginary residue beyond tolerance.
    #[error("truncation failure: imaginary residue {residue:.3e} above {limit:.1e}")]
    ImaginaryResidue { residue: f64, limit: f64 },

    /// Density-matrix validation failure.
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    /// Gaussian-mixture quadrature did not converge at the maximum order.
    #[error("dephasing quadrature under-resolved: residual {residual:.3e} at order {order}")]
    QuadratureUnderResolved { residual: f64, order: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed field/record file.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
