//! Majorization order on quantile functions, the Lidskii partial-sum
//! inequality for sums of Hermitian matrices, and the eigenvalue domination
//! implied by the operator order.

use crate::error::VerifyError;
use crate::measures::{sum_step_quantiles, Quantile};
use crate::report::{Tolerances, VerificationReport};
use crate::scalar::{neumaier_sum, Real};
use crate::spectra::{eigh, normalized_trace_re, Hermitian};
use crate::tol;

/// Outcome of a majorization comparison with its margins.
#[derive(Debug, Clone, Copy)]
pub struct MajorizationCheck<T> {
    pub holds: bool,
    /// min over checked s of (integral of x - integral of y) on [0, s];
    /// nonnegative when x majorizes y.
    pub min_margin: T,
    /// integral of x - integral of y over [0, 1); must vanish.
    pub total_gap: T,
    /// s attaining the minimal margin.
    pub worst_s: T,
}

/// Does `x` majorize `y`: partial integrals of x dominate those of y at
/// every breakpoint of either function, with equal totals. Between
/// breakpoints both partial integrals are polynomial in s, so for the step
/// quantiles compared here the extremes sit at breakpoints and breakpoint
/// checking is exhaustive.
pub fn majorizes<T: Real>(x: &Quantile<T>, y: &Quantile<T>) -> MajorizationCheck<T> {
    let eps = tol::analytic::<T>();
    let mut grid: Vec<T> = x.cuts().iter().chain(y.cuts().iter()).copied().collect();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();

    let mut min_margin = T::infinity();
    let mut worst_s = T::zero();
    for &s in grid.iter() {
        if s <= T::zero() {
            continue;
        }
        let gx = x.integral(T::zero(), s).expect("grid point in range");
        let gy = y.integral(T::zero(), s).expect("grid point in range");
        let margin = gx - gy;
        if margin < min_margin {
            min_margin = margin;
            worst_s = s;
        }
    }
    let total_gap = x.integral(T::zero(), T::one()).unwrap() - y.integral(T::zero(), T::one()).unwrap();
    MajorizationCheck {
        holds: min_margin >= -eps && total_gap.abs() <= eps,
        min_margin,
        total_gap,
        worst_s,
    }
}

/// Lidskii partial-sum inequality: the quantile of a+b majorizes the sum of
/// the quantiles of a and b, with equal total integrals tau(a) + tau(b).
pub fn lidskii_check<T: Real>(
    a: &Hermitian<T>,
    b: &Hermitian<T>,
    seed: u64,
) -> Result<VerificationReport, VerifyError> {
    if a.dim() != b.dim() {
        return Err(VerifyError::Matrix(crate::error::MatrixError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        }));
    }
    let n = a.dim();
    let sum = a.add(b)?;
    let ea = eigh(a)?;
    let eb = eigh(b)?;
    let es = eigh(&sum)?;
    let qa = Quantile::from_sorted_values(&ea.values);
    let qb = Quantile::from_sorted_values(&eb.values);
    let qs = Quantile::from_sorted_values(&es.values);
    let q_sum = sum_step_quantiles(&qa, &qb).expect("step quantiles");

    let check = majorizes(&qs, &q_sum);
    let trace_gap = (normalized_trace_re(sum.matrix())
        - normalized_trace_re(a.matrix())
        - normalized_trace_re(b.matrix()))
    .abs();
    let pass =
        check.holds && trace_gap <= tol::analytic::<T>() && check.total_gap.abs() <= tol::analytic::<T>();
    let exact = neumaier_sum(es.values.iter().copied()) / T::cast(n as f64);
    Ok(VerificationReport {
        theorem: "lidskii".into(),
        n,
        params: String::new(),
        exact: exact.to_f64().unwrap(),
        witness: "ascending eigenvalue partial sums".into(),
        best_sample: Some(check.min_margin.to_f64().unwrap()),
        margin: check.min_margin.to_f64().unwrap(),
        pass,
        hypothesis_met: true,
        seed,
        trials: 0,
        tolerances: Tolerances::default(),
        notes: vec![format!(
            "total integral gap {:e}; worst partial-sum margin at s={}",
            check.total_gap.to_f64().unwrap(),
            check.worst_s.to_f64().unwrap()
        )],
    })
}

/// Operator-order domination: when b - a is positive semidefinite, the
/// sorted eigenvalues dominate pairwise. An indefinite b - a gates the
/// check off instead of failing it.
pub fn domination_check<T: Real>(
    a: &Hermitian<T>,
    b: &Hermitian<T>,
    seed: u64,
) -> Result<VerificationReport, VerifyError> {
    if a.dim() != b.dim() {
        return Err(VerifyError::Matrix(crate::error::MatrixError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        }));
    }
    let n = a.dim();
    let diff = b.sub(a)?;
    let ed = eigh(&diff)?;
    let min_diff_eig = ed.values[0];
    let psd = min_diff_eig >= -tol::analytic::<T>();
    if !psd {
        return Ok(VerificationReport {
            theorem: "domination".into(),
            n,
            params: String::new(),
            exact: 0.0,
            witness: "none (b - a indefinite)".into(),
            best_sample: None,
            margin: min_diff_eig.to_f64().unwrap(),
            pass: true,
            hypothesis_met: false,
            seed,
            trials: 0,
            tolerances: Tolerances::default(),
            notes: vec![format!(
                "hypothesis-not-met: min eigenvalue of b - a is {:e}",
                min_diff_eig.to_f64().unwrap()
            )],
        });
    }
    let ea = eigh(a)?;
    let eb = eigh(b)?;
    let mut margin = T::infinity();
    for (x, y) in ea.values.iter().zip(&eb.values) {
        margin = margin.min(*y - *x);
    }
    let pass = margin >= -tol::construction::<T>();
    Ok(VerificationReport {
        theorem: "domination".into(),
        n,
        params: String::new(),
        exact: 0.0,
        witness: "sorted eigenvalue comparison".into(),
        best_sample: Some(margin.to_f64().unwrap()),
        margin: margin.to_f64().unwrap(),
        pass,
        hypothesis_met: true,
        seed,
        trials: 0,
        tolerances: Tolerances::default(),
        notes: vec![],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gaussian_matrix;
    use crate::rng::{derive_seed, rng_from};
    use crate::spectra::random_hermitian;

    #[test]
    fn majorization_is_reflexive() {
        let q = Quantile::<f64>::from_sorted_values(&[1.0, 2.0, 5.0]);
        let c = majorizes(&q, &q);
        assert!(c.holds);
        assert!(c.min_margin.abs() < 1e-15);
    }

    #[test]
    fn constant_mean_majorizes_any_equal_mean_quantile() {
        // Ascending partial integrals of y accumulate its smallest values
        // first, so they never exceed s * mean: the constant wins at every s.
        let y = Quantile::<f64>::from_sorted_values(&[0.0, 1.0, 5.0]);
        let mean = 2.0;
        let x = Quantile::from_sorted_values(&[mean, mean, mean]);
        assert!(majorizes(&x, &y).holds);
        let reverse = majorizes(&y, &x);
        assert!(!reverse.holds);
        assert!(reverse.min_margin < -1e-10);
    }

    #[test]
    fn spread_pair_partial_sums() {
        // tau-normalized diag(1,3) vs diag(0,4): the (1,3) quantile majorizes
        // the (0,4) one fails; direction is (1,3) majorized... partial sums:
        // 1/2*1 >= 1/2*0 and totals equal, so X_{(1,3)} majorizes X_{(0,4)}.
        let x13 = Quantile::<f64>::from_sorted_values(&[1.0, 3.0]);
        let x04 = Quantile::from_sorted_values(&[0.0, 4.0]);
        let c = majorizes(&x13, &x04);
        assert!(c.holds, "margin {:?}", c.min_margin);
        assert!((c.total_gap).abs() < 1e-15);
    }

    #[test]
    fn lidskii_zero_perturbation_is_equality() {
        let a = random_hermitian::<f64>(5, 3);
        let b = Hermitian::diag(&[0.0; 5]);
        let r = lidskii_check(&a, &b, 0).unwrap();
        assert!(r.pass);
        assert!(r.margin.abs() < 1e-12);
    }

    #[test]
    fn lidskii_commuting_diagonals() {
        let a = Hermitian::diag(&[1.0, 5.0, -2.0]);
        let b = Hermitian::diag(&[0.5, -1.0, 4.0]);
        let r = lidskii_check(&a, &b, 0).unwrap();
        assert!(r.pass);
        // direct partial-sum oracle on sorted vectors
        let mut sums: Vec<f64> = vec![1.0 + 0.5, 5.0 - 1.0, -2.0 + 4.0]; // diagonal sums
        sums.sort_by(f64::total_cmp);
        let mut la = [1.0, 5.0, -2.0];
        let mut lb = [0.5, -1.0, 4.0];
        la.sort_by(f64::total_cmp);
        lb.sort_by(f64::total_cmp);
        for j in 1..=3 {
            let lhs: f64 = sums[..j].iter().sum();
            let rhs: f64 = la[..j].iter().sum::<f64>() + lb[..j].iter().sum::<f64>();
            assert!(lhs + 1e-12 >= rhs);
        }
    }

    #[test]
    fn lidskii_random_pairs() {
        for t in 0..25u64 {
            let a = random_hermitian::<f64>(8, derive_seed(21, t));
            let b = random_hermitian::<f64>(8, derive_seed(22, t));
            let r = lidskii_check(&a, &b, t).unwrap();
            assert!(r.pass, "lidskii failed at trial {t}: margin {}", r.margin);
        }
    }

    #[test]
    fn domination_rank_one_update() {
        for t in 0..25u64 {
            let a = random_hermitian::<f64>(6, derive_seed(31, t));
            let mut rng = rng_from(derive_seed(32, t));
            let c = gaussian_matrix::<f64, _>(&mut rng, 6, 1);
            let bump = c.mul(&c.adjoint());
            let b = Hermitian::new(a.matrix().add(&bump).hermitize()).unwrap();
            let r = domination_check(&a, &b, t).unwrap();
            assert!(r.hypothesis_met);
            assert!(r.pass, "domination failed at trial {t}: margin {}", r.margin);
        }
    }

    #[test]
    fn domination_equal_matrices_zero_margin() {
        let a = random_hermitian::<f64>(5, 77);
        let r = domination_check(&a, &a, 0).unwrap();
        assert!(r.pass && r.hypothesis_met);
        assert!(r.margin.abs() < 1e-12);
    }

    #[test]
    fn domination_indefinite_gates() {
        let a = Hermitian::diag(&[0.0, 0.0]);
        let b = Hermitian::diag(&[1.0, -1.0]);
        let r = domination_check(&a, &b, 0).unwrap();
        assert!(!r.hypothesis_met);
        assert!(r.pass);
    }
}
