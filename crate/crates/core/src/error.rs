//! Error types, one enum per subsystem.

use thiserror::Error;

/// Measure / distribution / quantile validation failures.
#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("total mass is {total}, expected 1 within {tol}")]
    Mass { total: f64, tol: f64 },
    #[error("atom {index}: weight {weight} outside (0, 1]")]
    AtomWeight { index: usize, weight: f64 },
    #[error("atom {index}: location is not finite")]
    AtomLocation { index: usize },
    #[error("segment {index}: endpoints not increasing (t_lo {t_lo} >= t_hi {t_hi})")]
    SegmentOrder { index: usize, t_lo: f64, t_hi: f64 },
    #[error("segment {index}: negative density value")]
    SegmentDensity { index: usize },
    #[error("segment {index}: overlaps the previous segment")]
    SegmentOverlap { index: usize },
    #[error("segment {index}: non-finite endpoint or density")]
    SegmentValue { index: usize },
    #[error("measure is empty: no atoms and no segments")]
    Empty,
    #[error("distribution function does not reach 1 (final value {top})")]
    CdfIncomplete { top: f64 },
    #[error("quantile integration bounds out of order: s0 {s0} > s1 {s1}")]
    BadIntegrationRange { s0: f64, s1: f64 },
    #[error("argument outside [0, 1): {value}")]
    BadUnitArgument { value: f64 },
    #[error("json measure: {0}")]
    Json(String),
}

/// Matrix-side validation and numeric failures.
#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,
    #[error("not conjugate-symmetric at ({i},{j}): defect {defect}")]
    NotHermitian { i: usize, j: usize, defect: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error(
        "Jacobi eigensolver did not converge in {sweeps} sweeps; off-diagonal residual {residual}"
    )]
    EighNoConvergence { sweeps: usize, residual: f64 },
    #[error("not a projection: {check} defect {defect} exceeds {tol}")]
    NotProjection { check: &'static str, defect: f64, tol: f64 },
    #[error("rank {rank} out of range for dimension {dim}")]
    RankOutOfRange { rank: usize, dim: usize },
    #[error("eigenvalue index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("json matrix: {0}")]
    Json(String),
}

/// Projection-lattice certificate failures: a named hypothesis or
/// postcondition of a family construction did not hold.
#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("rank hypothesis failed at level {level}: need rank >= {needed}, have {actual}")]
    RankHypothesis { level: usize, needed: usize, actual: usize },
    #[error("ordering hypothesis failed: {what} (defect {defect})")]
    Ordering { what: String, defect: f64 },
    #[error("orthogonality hypothesis failed between members {i} and {j} (defect {defect})")]
    Orthogonality { i: usize, j: usize, defect: f64 },
    #[error("family member {index} has rank {actual}, target {target}")]
    MemberRank { index: usize, actual: usize, target: usize },
    #[error("argument shape: {0}")]
    Shape(String),
    #[error("postcondition failed after construction: {what} (defect {defect})")]
    Postcondition { what: String, defect: f64 },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Verifier-level failures (argument and hypothesis problems, not
/// verification verdicts, which are reported in `VerificationReport`).
#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("spectrum has merged atoms (multiplicity {multiplicity} at {location}); perturb first")]
    DegenerateSpectrum { location: f64, multiplicity: usize },
    #[error("spectral interval [{t0}, {t1}) selects no eigenvalues")]
    EmptyInterval { t0: f64, t1: f64 },
    #[error("trace {delta} is not an integer multiple of 1/{n}")]
    Granularity { delta: f64, n: usize },
    #[error("interval list malformed: {0}")]
    BadIntervals(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}
