//! Centralized numeric tolerances.
//!
//! Every threshold used for validation and pass/fail decisions lives here,
//! with one source of truth per category:
//!
//! | constant | used for |
//! |----------|----------|
//! | `MASS` | measure mass and monotonicity validation |
//! | `ANALYTIC` | analytic identities (round trips, total integrals, witness attainment) |
//! | `CONSTRUCTION` | projection-family construction checks (ordering, orthogonality) |
//! | `OPTIMALITY` | min/max comparisons between sampled and exact values |
//!
//! The ladder `CONSTRUCTION` (1e-9) vs `OPTIMALITY` (1e-8) leaves a decade of
//! slack between build noise and pass/fail decisions.
//!
//! The `f64` values are authoritative; for narrower scalars the generic
//! accessors floor each tolerance at a small multiple of the type epsilon so
//! the corresponding checks stay meaningful.

use crate::scalar::Real;

/// Measure mass and monotonicity validation.
pub const MASS: f64 = 1e-12;

/// Hermitian conjugate-symmetry validation (max-entry).
pub const HERMITIAN_SYM: f64 = 1e-12;

/// Projection invariants: idempotence, self-adjointness, trace = rank/n.
pub const PROJECTION: f64 = 1e-10;

/// Analytic identities: round trips, total integrals, witness attainment.
pub const ANALYTIC: f64 = 1e-10;

/// Eigendecomposition residual bound, relative to the matrix magnitude.
pub const EIGH_RESIDUAL: f64 = 1e-9;

/// Jacobi sweep convergence: off-diagonal Frobenius mass below this times the
/// Frobenius norm of the input.
pub const JACOBI_OFFDIAG: f64 = 1e-13;

/// Jacobi iteration cap, in full sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalue merge tolerance for atom formation is
/// `ATOM_MERGE_REL * (1 + max_abs(a))`.
pub const ATOM_MERGE_REL: f64 = 1e-9;

/// Projection-construction checks: ordering, orthogonality, commutation.
pub const CONSTRUCTION: f64 = 1e-9;

/// Optimality comparisons between sampled candidates and exact values.
pub const OPTIMALITY: f64 = 1e-8;

/// Witness attainment of the exact value.
pub const WITNESS: f64 = 1e-10;

/// Rank determination after join/meet: singular-value threshold is
/// `RANK_SV_REL * n`.
pub const RANK_SV_REL: f64 = 1e-8;

/// Matched families: max-entry distance between the two family sums.
pub const FAMILY_SUM: f64 = 1e-8;

/// Perturbation used to split degenerate spectra.
pub const PERTURB_EPS: f64 = 1e-7;

#[inline]
fn floored<T: Real>(value: f64, eps_multiple: f64) -> T {
    T::cast(value).max(T::epsilon() * T::cast(eps_multiple))
}

/// `MASS` for the scalar `T`.
#[inline]
pub fn mass<T: Real>() -> T {
    floored(MASS, 32.0)
}

/// `HERMITIAN_SYM` for the scalar `T`.
#[inline]
pub fn hermitian_sym<T: Real>() -> T {
    floored(HERMITIAN_SYM, 32.0)
}

/// `PROJECTION` for the scalar `T`.
#[inline]
pub fn projection<T: Real>() -> T {
    floored(PROJECTION, 64.0)
}

/// `ANALYTIC` for the scalar `T`.
#[inline]
pub fn analytic<T: Real>() -> T {
    floored(ANALYTIC, 64.0)
}

/// `JACOBI_OFFDIAG` for the scalar `T`.
#[inline]
pub fn jacobi_offdiag<T: Real>() -> T {
    floored(JACOBI_OFFDIAG, 16.0)
}

/// `CONSTRUCTION` for the scalar `T`.
#[inline]
pub fn construction<T: Real>() -> T {
    floored(CONSTRUCTION, 128.0)
}

/// `OPTIMALITY` for the scalar `T`.
#[inline]
pub fn optimality<T: Real>() -> T {
    floored(OPTIMALITY, 256.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_accessors_match_pinned_constants() {
        assert_eq!(mass::<f64>(), MASS);
        assert_eq!(analytic::<f64>(), ANALYTIC);
        assert_eq!(construction::<f64>(), CONSTRUCTION);
        assert_eq!(optimality::<f64>(), OPTIMALITY);
    }

    #[test]
    fn f32_accessors_are_floored_at_epsilon_scale() {
        assert!(mass::<f32>() >= f32::EPSILON);
        assert!(construction::<f32>() > 1e-9f32);
    }
}
