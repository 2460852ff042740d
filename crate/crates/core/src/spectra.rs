//! Hermitian matrices with normalized trace tau = Tr/n: eigendecomposition,
//! spectral measures, spectral projections, partial eigenvalue sums, and the
//! max-trace characterization of the distribution function.
//!
//! The eigensolver is a cyclic Jacobi iteration on the complex Hermitian
//! matrix. Every rotation reduces the off-diagonal Frobenius mass, so the
//! method is unconditionally convergent; dimensions here are small enough
//! that its O(n^3)-per-sweep cost is irrelevant.

use crate::error::MatrixError;
use crate::linalg::{projector_from_basis, CMat};
use crate::measures::{
    cdf_of, partial_quantile_integral, quantile_of, Atom, CompactMeasure,
};
use crate::rng::rng_from;
use crate::scalar::Real;
use crate::tol;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

/// Self-adjoint complex matrix. Construction validates conjugate symmetry
/// and then symmetrizes exactly, so downstream code sees `a = a*` to the bit.
#[derive(Debug, Clone, PartialEq)]
pub struct Hermitian<T: Real> {
    mat: CMat<T>,
}

impl<T: Real> Hermitian<T> {
    pub fn new(mat: CMat<T>) -> Result<Self, MatrixError> {
        if !mat.is_square() {
            return Err(MatrixError::NotSquare { rows: mat.rows(), cols: mat.cols() });
        }
        if mat.rows() == 0 {
            return Err(MatrixError::EmptyMatrix);
        }
        let n = mat.rows();
        let eps = tol::hermitian_sym::<T>();
        for i in 0..n {
            for j in 0..n {
                let d = (mat[(i, j)] - mat[(j, i)].conj()).norm();
                if d > eps {
                    return Err(MatrixError::NotHermitian {
                        i,
                        j,
                        defect: d.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
        }
        Ok(Hermitian { mat: mat.hermitize() })
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[T]) -> Self {
        Hermitian { mat: CMat::diag(values) }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.mat
    }

    pub fn add(&self, rhs: &Hermitian<T>) -> Result<Self, MatrixError> {
        if self.dim() != rhs.dim() {
            return Err(MatrixError::DimensionMismatch { left: self.dim(), right: rhs.dim() });
        }
        Ok(Hermitian { mat: self.mat.add(&rhs.mat) })
    }

    pub fn sub(&self, rhs: &Hermitian<T>) -> Result<Self, MatrixError> {
        if self.dim() != rhs.dim() {
            return Err(MatrixError::DimensionMismatch { left: self.dim(), right: rhs.dim() });
        }
        Ok(Hermitian { mat: self.mat.sub(&rhs.mat) })
    }
}

/// Normalized trace Tr/n of a square matrix.
pub fn normalized_trace<T: Real>(m: &CMat<T>) -> Complex<T> {
    let n = T::cast(m.rows() as f64);
    m.trace().scale(T::one() / n)
}

/// Real part of the normalized trace; intended for products that are real by
/// self-adjointness (tau(ap) with a Hermitian, p a projection).
pub fn normalized_trace_re<T: Real>(m: &CMat<T>) -> T {
    normalized_trace(m).re
}

/// tau(a p) evaluated without forming the product matrix.
pub fn tau_product<T: Real>(a: &CMat<T>, b: &CMat<T>) -> T {
    a.trace_product(b).re / T::cast(a.rows() as f64)
}

/// tau(a p) where p projects onto the span of orthonormal columns `basis`:
/// sum of Rayleigh quotients over the basis, divided by n.
pub fn tau_on_basis<T: Real>(a: &CMat<T>, basis: &CMat<T>) -> T {
    let n = a.rows();
    let mut total = T::zero();
    for c in 0..basis.cols() {
        let mut quad = T::zero();
        for i in 0..n {
            let mut av = Complex::new(T::zero(), T::zero());
            for j in 0..n {
                av = av + a[(i, j)] * basis[(j, c)];
            }
            quad += (basis[(i, c)].conj() * av).re;
        }
        total += quad;
    }
    total / T::cast(n as f64)
}

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and the
/// matching unitary of column eigenvectors.
#[derive(Debug, Clone)]
pub struct Eigendecomposition<T: Real> {
    pub values: Vec<T>,
    pub vectors: CMat<T>,
}

impl<T: Real> Eigendecomposition<T> {
    /// Orthonormal basis for the eigenvalue indices in `range` (0-based,
    /// half-open).
    pub fn basis_for(&self, range: std::ops::Range<usize>) -> CMat<T> {
        let n = self.vectors.rows();
        let mut out = CMat::zeros(n, range.len());
        for (c, j) in range.enumerate() {
            out.set_col(c, &self.vectors.col(j));
        }
        out
    }
}

fn offdiag_fro<T: Real>(m: &CMat<T>) -> T {
    let n = m.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One complex Jacobi rotation zeroing the (p, q) entry.
fn jacobi_rotate<T: Real>(m: &mut CMat<T>, v: &mut CMat<T>, p: usize, q: usize) {
    let n = m.rows();
    let apq = m[(p, q)];
    let r = apq.norm();
    if r.is_zero() {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // An entry at rounding level relative to its diagonal pair carries no
    // information, and a subnormal |a_pq| would overflow 1/r and the zeta
    // ratio below. Flush it and move on.
    let negligible = r <= (app.abs() + aqq.abs()) * T::epsilon() * T::cast(0.5)
        || r <= T::min_positive_value() / T::epsilon();
    if negligible {
        m[(p, q)] = Complex::new(T::zero(), T::zero());
        m[(q, p)] = Complex::new(T::zero(), T::zero());
        return;
    }
    // Unitary restricted to (p, q): diag(1, e^{-i phi}) times a real rotation,
    // where phi is the phase of a_pq.
    let phase = apq.scale(T::one() / r); // e^{i phi}
    let zeta = (aqq - app) / (r + r);
    let t = if zeta.is_zero() {
        T::one()
    } else {
        let sign = if zeta > T::zero() { T::one() } else { -T::one() };
        sign / (zeta.abs() + (T::one() + zeta * zeta).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;

    let w11 = Complex::new(c, T::zero());
    let w12 = Complex::new(s, T::zero());
    let w21 = phase.conj().scale(-s); // -s e^{-i phi}
    let w22 = phase.conj().scale(c); //  c e^{-i phi}

    // columns: A <- A W
    for i in 0..n {
        let aip = m[(i, p)];
        let aiq = m[(i, q)];
        m[(i, p)] = aip * w11 + aiq * w21;
        m[(i, q)] = aip * w12 + aiq * w22;
    }
    // rows: A <- W* A
    for j in 0..n {
        let apj = m[(p, j)];
        let aqj = m[(q, j)];
        m[(p, j)] = apj * w11.conj() + aqj * w21.conj();
        m[(q, j)] = apj * w12.conj() + aqj * w22.conj();
    }
    // analytic values on the rotated pair
    m[(p, q)] = Complex::new(T::zero(), T::zero());
    m[(q, p)] = Complex::new(T::zero(), T::zero());
    m[(p, p)] = Complex::new(app - t * r, T::zero());
    m[(q, q)] = Complex::new(aqq + t * r, T::zero());

    // V <- V W
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * w11 + viq * w21;
        v[(i, q)] = vip * w12 + viq * w22;
    }
}

/// Cyclic Jacobi eigendecomposition. Eigenvalues ascend; `vectors` columns
/// are the matching orthonormal eigenvectors.
pub fn eigh<T: Real>(a: &Hermitian<T>) -> Result<Eigendecomposition<T>, MatrixError> {
    let n = a.dim();
    let mut m = a.matrix().clone();
    let mut v = CMat::identity(n);

    // Scale to unit magnitude by an exact power of two so underflow cannot
    // produce subnormal intermediates on reasonably scaled inputs.
    let max_abs = m.max_abs();
    let scale = if max_abs.is_zero() {
        T::one()
    } else {
        T::cast(2.0).powi(max_abs.log2().ceil().to_i32().unwrap_or(0))
    };
    m = m.scale(T::one() / scale);
    let norm = m.fro_norm();
    let threshold = tol::jacobi_offdiag::<T>() * norm;

    if n > 1 && !norm.is_zero() {
        let mut converged = false;
        for _sweep in 0..tol::JACOBI_MAX_SWEEPS {
            if offdiag_fro(&m) <= threshold {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in (p + 1)..n {
                    jacobi_rotate(&mut m, &mut v, p, q);
                }
            }
        }
        if !converged {
            let residual = offdiag_fro(&m);
            // a NaN residual must also land here, hence the negated compare
            if !(residual <= threshold) {
                return Err(MatrixError::EighNoConvergence {
                    sweeps: tol::JACOBI_MAX_SWEEPS,
                    residual: residual.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).expect("finite eigenvalues"));
    let values: Vec<T> = order.iter().map(|&i| m[(i, i)].re * scale).collect();
    let mut vectors = CMat::zeros(n, n);
    for (c, &i) in order.iter().enumerate() {
        vectors.set_col(c, &v.col(i));
    }
    Ok(Eigendecomposition { values, vectors })
}

/// Hermitian idempotent with cached rank and an orthonormal basis of its
/// range; the optimization variable of every minmax functional here.
#[derive(Debug, Clone)]
pub struct Projection<T: Real> {
    mat: CMat<T>,
    basis: CMat<T>,
    rank: usize,
}

impl<T: Real> Projection<T> {
    /// Build from orthonormal columns spanning the range.
    pub fn from_basis(basis: CMat<T>) -> Self {
        let rank = basis.cols();
        let mat = projector_from_basis(&basis);
        Projection { mat, basis, rank }
    }

    /// Validate an arbitrary matrix as a projection and recover its range
    /// basis from the eigendecomposition.
    pub fn from_matrix(mat: CMat<T>) -> Result<Self, MatrixError> {
        let h = Hermitian::new(mat.clone())?;
        let eig = eigh(&h)?;
        let half = T::cast(0.5);
        let rank = eig.values.iter().filter(|&&x| x > half).count();
        let n = h.dim();
        let basis = eig.basis_for(n - rank..n);
        let p = Projection { mat, basis, rank };
        p.validate()?;
        Ok(p)
    }

    pub fn zero(n: usize) -> Self {
        Projection { mat: CMat::zeros(n, n), basis: CMat::zeros(n, 0), rank: 0 }
    }

    pub fn identity(n: usize) -> Self {
        Projection { mat: CMat::identity(n), basis: CMat::identity(n), rank: n }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.mat
    }

    pub fn basis(&self) -> &CMat<T> {
        &self.basis
    }

    /// tau(p) = rank/n.
    pub fn tau(&self) -> T {
        T::cast(self.rank as f64) / T::cast(self.dim() as f64)
    }

    /// 1 - p.
    pub fn complement(&self) -> Result<Projection<T>, MatrixError> {
        let n = self.dim();
        Projection::from_matrix(CMat::identity(n).sub(&self.mat))
    }

    /// Max-entry defect of `self <= other` (zero iff range(self) is inside
    /// range(other)): || self - other * self ||_max.
    pub fn below_defect(&self, other: &Projection<T>) -> T {
        self.mat.sub(&other.mat.mul(&self.mat)).max_abs()
    }

    pub fn is_below(&self, other: &Projection<T>, tol: T) -> bool {
        self.below_defect(other) <= tol
    }

    /// Projection invariants: self-adjoint and idempotent within 1e-10
    /// (max-entry), normalized trace equal to rank/n within 1e-10.
    pub fn validate(&self) -> Result<(), MatrixError> {
        let eps = tol::projection::<T>();
        let sym = self.mat.max_hermitian_defect();
        if sym > eps {
            return Err(MatrixError::NotProjection {
                check: "self-adjoint",
                defect: sym.to_f64().unwrap_or(f64::NAN),
                tol: tol::PROJECTION,
            });
        }
        let idem = self.mat.mul(&self.mat).sub(&self.mat).max_abs();
        if idem > eps {
            return Err(MatrixError::NotProjection {
                check: "idempotent",
                defect: idem.to_f64().unwrap_or(f64::NAN),
                tol: tol::PROJECTION,
            });
        }
        let tr = normalized_trace(&self.mat);
        let want = self.tau();
        let d = ((tr.re - want) * (tr.re - want) + tr.im * tr.im).sqrt();
        if d > eps {
            return Err(MatrixError::NotProjection {
                check: "trace = rank/n",
                defect: d.to_f64().unwrap_or(f64::NAN),
                tol: tol::PROJECTION,
            });
        }
        Ok(())
    }
}

/// Eigendecomposition plus merged-atom bookkeeping for one matrix.
pub struct Spectrum<T: Real> {
    pub eig: Eigendecomposition<T>,
    /// (first index, multiplicity) of each merged eigenvalue cluster.
    pub clusters: Vec<(usize, usize)>,
    merge_tol: T,
}

impl<T: Real> Spectrum<T> {
    pub fn of(a: &Hermitian<T>) -> Result<Self, MatrixError> {
        let eig = eigh(a)?;
        let merge_tol =
            T::cast(tol::ATOM_MERGE_REL) * (T::one() + a.matrix().max_abs());
        let mut clusters: Vec<(usize, usize)> = Vec::new();
        for i in 0..eig.values.len() {
            match clusters.last_mut() {
                Some((first, mult))
                    if eig.values[i] - eig.values[*first + *mult - 1] < merge_tol =>
                {
                    *mult += 1;
                }
                _ => clusters.push((i, 1)),
            }
        }
        Ok(Spectrum { eig, clusters, merge_tol })
    }

    pub fn is_distinct(&self) -> bool {
        self.clusters.iter().all(|&(_, m)| m == 1)
    }

    pub fn merge_tolerance(&self) -> T {
        self.merge_tol
    }

    /// First merged cluster with multiplicity > 1, if any.
    pub fn first_degenerate(&self) -> Option<(T, usize)> {
        self.clusters
            .iter()
            .find(|&&(_, m)| m > 1)
            .map(|&(i, m)| (self.eig.values[i], m))
    }
}

/// Spectral distribution of a Hermitian matrix: one atom of weight
/// multiplicity/n per merged eigenvalue cluster.
pub fn spectral_distribution<T: Real>(a: &Hermitian<T>) -> Result<CompactMeasure<T>, MatrixError> {
    let spectrum = Spectrum::of(a)?;
    let n = T::cast(a.dim() as f64);
    let atoms: Vec<Atom<T>> = spectrum
        .clusters
        .iter()
        .map(|&(first, mult)| Atom {
            location: spectrum.eig.values[first],
            weight: T::cast(mult as f64) / n,
        })
        .collect();
    CompactMeasure::from_atoms(atoms).map_err(|e| MatrixError::Json(e.to_string()))
}

/// Spectral projection 1_{[t0, t1)}(a): the projection onto the span of
/// eigenvectors with eigenvalue in the half-open interval. Unbounded ends
/// are expressed with infinities.
pub fn spectral_projection<T: Real>(
    a: &Hermitian<T>,
    t0: T,
    t1: T,
) -> Result<Projection<T>, MatrixError> {
    let eig = eigh(a)?;
    let lo = eig.values.partition_point(|&x| x < t0);
    let hi = eig.values.partition_point(|&x| x < t1);
    Ok(Projection::from_basis(eig.basis_for(lo..hi)))
}

/// Partial eigenvalue average: integral of the spectral quantile over [0, s].
/// At s = j/n this is the average of the j smallest eigenvalues.
pub fn kyfan_value<T: Real>(a: &Hermitian<T>, s: T) -> Result<T, MatrixError> {
    let measure = spectral_distribution(a)?;
    let q = quantile_of(&cdf_of(&measure)).map_err(|e| MatrixError::Json(e.to_string()))?;
    partial_quantile_integral(&q, T::zero(), s).map_err(|e| MatrixError::Json(e.to_string()))
}

/// Value and witness of the max-trace characterization of the distribution:
/// among projections with `p a p >= t p` on their range, the spectral
/// projection 1_{[t, inf)}(a) has the largest trace, namely 1 - F_a(t).
pub struct MaxTraceWitness<T: Real> {
    /// 1 - F_a(t).
    pub value: T,
    pub witness: Projection<T>,
}

pub fn bv_max_trace<T: Real>(a: &Hermitian<T>, t: T) -> Result<MaxTraceWitness<T>, MatrixError> {
    let eig = eigh(a)?;
    let n = a.dim();
    let lo = eig.values.partition_point(|&x| x < t);
    let witness = Projection::from_basis(eig.basis_for(lo..n));
    let value = T::cast((n - lo) as f64) / T::cast(n as f64);
    Ok(MaxTraceWitness { value, witness })
}

/// Split a degenerate spectrum by adding diag(eps, 2 eps, ..., n eps) in the
/// eigenbasis of `a`.
pub fn perturb_distinct<T: Real>(a: &Hermitian<T>, eps: T) -> Result<Hermitian<T>, MatrixError> {
    let eig = eigh(a)?;
    let n = a.dim();
    let shifts: Vec<T> = (1..=n).map(|k| eps * T::cast(k as f64)).collect();
    let d = CMat::diag(&shifts);
    let delta = eig.vectors.mul(&d).mul(&eig.vectors.adjoint());
    Hermitian::new(a.matrix().add(&delta).hermitize())
}

/// Reproducible Gaussian Hermitian matrix: off-diagonal entries complex
/// normal with variance 1/n, real diagonal with variance 1/n.
pub fn random_hermitian<T: Real>(n: usize, seed: u64) -> Hermitian<T> {
    let mut rng = rng_from(seed);
    let sd_off = (T::one() / T::cast(2.0 * n as f64)).sqrt();
    let sd_diag = (T::one() / T::cast(n as f64)).sqrt();
    let mut m = CMat::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex::new(T::std_normal(&mut rng) * sd_diag, T::zero());
        for j in (i + 1)..n {
            let z = Complex::new(
                T::std_normal(&mut rng) * sd_off,
                T::std_normal(&mut rng) * sd_off,
            );
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    Hermitian::new(m).expect("construction is exactly hermitian")
}

/// Haar-distributed-enough random unitary: orthonormalized Gaussian columns.
pub fn random_unitary<T: Real>(n: usize, seed: u64) -> CMat<T> {
    let mut rng = rng_from(seed);
    let g = crate::linalg::gaussian_matrix::<T, _>(&mut rng, n, n);
    let cols: Vec<_> = (0..n).map(|j| g.col(j)).collect();
    let q = crate::linalg::orthonormalize(n, &cols, T::cast(1e-12));
    assert_eq!(q.cols(), n, "gaussian columns span the space");
    q
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
}

/// Parse the JSON matrix format `{"dim": n, "re": [[...]], "im": [[...]]}`;
/// `im` may be omitted for real matrices.
pub fn hermitian_from_json<T: Real>(text: &str) -> Result<Hermitian<T>, MatrixError> {
    let raw: MatrixJson = serde_json::from_str(text).map_err(|e| MatrixError::Json(e.to_string()))?;
    let n = raw.dim;
    let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
    if !shape_ok(&raw.re) || raw.im.as_ref().is_some_and(|im| !shape_ok(im)) {
        return Err(MatrixError::Json(format!("expected {n}x{n} entries")));
    }
    let mat = CMat::from_fn(n, n, |i, j| {
        let re = T::cast(raw.re[i][j]);
        let im = raw.im.as_ref().map(|im| T::cast(im[i][j])).unwrap_or_else(T::zero);
        Complex::new(re, im)
    });
    Hermitian::new(mat)
}

/// Serialize a matrix to the JSON matrix format.
pub fn matrix_to_json<T: Real>(m: &CMat<T>) -> String {
    let n = m.rows();
    let raw = MatrixJson {
        dim: n,
        re: (0..n)
            .map(|i| (0..n).map(|j| m[(i, j)].re.to_f64().unwrap()).collect())
            .collect(),
        im: Some(
            (0..n)
                .map(|i| (0..n).map(|j| m[(i, j)].im.to_f64().unwrap()).collect())
                .collect(),
        ),
    };
    serde_json::to_string_pretty(&raw).expect("matrix serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn herm(vals: &[f64]) -> Hermitian<f64> {
        Hermitian::diag(vals)
    }

    #[test]
    fn eigh_diagonal_sorts_ascending() {
        let e = eigh(&herm(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn eigh_pauli_x() {
        let m = CMat::<f64>::from_fn(2, 2, |i, j| {
            if i != j {
                Complex::new(1.0, 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        });
        let e = eigh(&Hermitian::new(m).unwrap()).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_complex_entries() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2
        let m = CMat::<f64>::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => Complex::new(0.0, 1.0),
            (1, 0) => Complex::new(0.0, -1.0),
            _ => Complex::new(1.0, 0.0),
        });
        let e = eigh(&Hermitian::new(m).unwrap()).unwrap();
        assert!(e.values[0].abs() < 1e-14);
        assert!((e.values[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_random_residual_oracle() {
        let a = random_hermitian::<f64>(5, 77);
        let e = eigh(&a).unwrap();
        // residual ||aV - V Lambda||_max < 1e-9 * ||a||_max
        let av = a.matrix().mul(&e.vectors);
        let vl = e.vectors.mul(&CMat::diag(&e.values));
        let res = av.sub(&vl).max_abs();
        assert!(res < 1e-9 * a.matrix().max_abs().max(1.0), "residual {res}");
        // unitarity
        let gram = e.vectors.adjoint().mul(&e.vectors);
        assert!(gram.sub(&CMat::identity(5)).max_abs() < 1e-10);
    }

    #[test]
    fn normalized_trace_examples() {
        assert_eq!(normalized_trace_re(&CMat::<f64>::identity(4)), 1.0);
        assert_eq!(normalized_trace_re(herm(&[1.0, 2.0, 3.0]).matrix()), 2.0);
        let mut basis = CMat::<f64>::zeros(4, 1);
        basis[(0, 0)] = Complex::new(1.0, 0.0);
        let p = Projection::from_basis(basis);
        assert_eq!(normalized_trace_re(p.matrix()), 0.25);
    }

    #[test]
    fn spectral_distribution_atoms() {
        let m = spectral_distribution(&herm(&[1.0, 2.0, 3.0])).unwrap();
        let atoms = m.atoms();
        assert_eq!(atoms.len(), 3);
        for (a, want) in atoms.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a.location - want).abs() < 1e-12);
            assert!((a.weight - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn spectral_distribution_merges_multiplicity() {
        let m = spectral_distribution(&herm(&[1.0, 1.0, 1.0, 1.0])).unwrap();
        assert_eq!(m.atoms().len(), 1);
        assert_eq!(m.atoms()[0].weight, 1.0);
        let m = spectral_distribution(&herm(&[0.0, 0.0, 1.0, 1.0])).unwrap();
        assert_eq!(m.atoms().len(), 2);
        assert!((m.atoms()[0].weight - 0.5).abs() < 1e-12);
    }

    #[test]
    fn spectral_projection_selects_eigenvalues() {
        let a = herm(&[1.0, 2.0, 3.0]);
        let p = spectral_projection(&a, 1.5, 3.0).unwrap();
        assert_eq!(p.rank(), 1);
        assert!((p.matrix()[(1, 1)].re - 1.0).abs() < 1e-12);
        assert!(p.matrix()[(0, 0)].norm() < 1e-12);

        let full = spectral_projection(&a, f64::NEG_INFINITY, f64::INFINITY).unwrap();
        assert_eq!(full.rank(), 3);
        let empty = spectral_projection(&a, 10.0, 20.0).unwrap();
        assert_eq!(empty.rank(), 0);
    }

    #[test]
    fn kyfan_value_examples() {
        let a = herm(&[1.0, 2.0, 3.0]);
        assert!((kyfan_value(&a, 2.0 / 3.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((kyfan_value(&a, 1.0).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(kyfan_value(&a, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn bv_max_trace_examples() {
        let a = herm(&[1.0, 2.0, 3.0]);
        let w = bv_max_trace(&a, 2.0).unwrap();
        assert!((w.value - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(w.witness.rank(), 2);

        let low = bv_max_trace(&a, 0.0).unwrap();
        assert_eq!(low.witness.rank(), 3);
        assert_eq!(low.value, 1.0);
        let high = bv_max_trace(&a, 4.0).unwrap();
        assert_eq!(high.witness.rank(), 0);
        assert_eq!(high.value, 0.0);
    }

    #[test]
    fn perturbation_splits_degenerate_spectrum() {
        let a = herm(&[1.0, 1.0, 2.0]);
        assert!(!Spectrum::of(&a).unwrap().is_distinct());
        let b = perturb_distinct(&a, 1e-7).unwrap();
        assert!(Spectrum::of(&b).unwrap().is_distinct());
        // limit as eps -> 0: partial sums converge to the unperturbed ones
        let mut prev_err = f64::INFINITY;
        for eps in [1e-5, 1e-6, 1e-7] {
            let b = perturb_distinct(&a, eps).unwrap();
            let v = kyfan_value(&b, 2.0 / 3.0).unwrap();
            let err = (v - 2.0 / 3.0).abs();
            assert!(err <= prev_err * 1.01);
            prev_err = err;
        }
    }

    #[test]
    fn random_hermitian_is_reproducible() {
        let a = random_hermitian::<f64>(6, 42);
        let b = random_hermitian::<f64>(6, 42);
        assert_eq!(a.matrix(), b.matrix());
        assert!(a.matrix().max_hermitian_defect() == 0.0);
        let c = random_hermitian::<f64>(6, 43);
        assert_ne!(a.matrix(), c.matrix());
    }

    #[test]
    fn projection_validation_catches_non_idempotent() {
        let m = CMat::diag(&[0.5f64, 0.0]);
        assert!(Projection::from_matrix(m).is_err());
    }

    #[test]
    fn projection_from_matrix_recovers_rank() {
        let a = random_hermitian::<f64>(5, 9);
        let e = eigh(&a).unwrap();
        let basis = e.basis_for(0..2);
        let p = Projection::from_basis(basis);
        p.validate().unwrap();
        let q = Projection::from_matrix(p.matrix().clone()).unwrap();
        assert_eq!(q.rank(), 2);
        assert!((q.tau() - 0.4).abs() < 1e-14);
    }

    #[test]
    fn matrix_json_round_trip() {
        let a = random_hermitian::<f64>(4, 5);
        let text = matrix_to_json(a.matrix());
        let b: Hermitian<f64> = hermitian_from_json(&text).unwrap();
        assert!(a.matrix().sub(b.matrix()).max_abs() < 1e-15);
        // im defaults to zero
        let real = hermitian_from_json::<f64>(r#"{"dim":2,"re":[[1.0,0.5],[0.5,2.0]]}"#).unwrap();
        assert_eq!(real.matrix()[(0, 1)].im, 0.0);
    }

    #[test]
    fn f32_eigh_smoke() {
        let a = random_hermitian::<f32>(4, 11);
        let e = eigh(&a).unwrap();
        let av = a.matrix().mul(&e.vectors);
        let vl = e.vectors.mul(&CMat::diag(&e.values));
        assert!(av.sub(&vl).max_abs() < 1e-4);
    }
}
