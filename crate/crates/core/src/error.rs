use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not unitary: ||u^H u - I||_F = {defect:.3e}")]
    NotUnitary { defect: f64 },

    #[error("matrix is not Hermitian: ||h - h^H||_F = {defect:.3e}")]
    NotHermitian { defect: f64 },

    #[error("numerical nullity {nullity} != 1 at tolerance {tol:.3e}")]
    RankDeficiency { nullity: usize, tol: f64 },

    #[error("eigenphase tracking lost at k = {k}: best overlap {overlap:.3}")]
    Tracking { k: f64, overlap: f64 },

    #[error("degenerate crossing near k0 = {k0}: tracks {} and {} reach 1 within {gap:.3e}", tracks.0, tracks.1)]
    DegenerateCrossing {
        k0: f64,
        tracks: (usize, usize),
        gap: f64,
    },

    #[error("eigenvalue speed vanishes at k0 = {k0}: |<v|U'|v>| = {speed:.3e}")]
    ZeroSpeed { k0: f64, speed: f64 },

    #[error("k0 = {k0} is not a crossing: ||(U(k0) - I) v|| = {residual:.3e}")]
    NotACrossing { k0: f64, residual: f64 },

    #[error("adaptive quadrature exceeded depth {depth} on [{a}, {b}]")]
    Quadrature { a: f64, b: f64, depth: usize },

    #[error("test function mass {outside_mass:.3e} lies outside the measure range")]
    Truncation {
        outside_mass: f64,
        partial: Complex64,
    },

    #[error("|h(1, k)| = {abs_h1:.3e} at k = {k}: too close to a crossing")]
    NearSingular { k: f64, abs_h1: f64 },

    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors raised because the family violates the simple-zero /
    /// non-zero-speed hypotheses (as opposed to bad input or I/O).
    pub fn is_hypothesis_violation(&self) -> bool {
        matches!(
            self,
            Error::RankDeficiency { .. }
                | Error::DegenerateCrossing { .. }
                | Error::ZeroSpeed { .. }
                | Error::NotACrossing { .. }
                | Error::NearSingular { .. }
        )
    }
}
