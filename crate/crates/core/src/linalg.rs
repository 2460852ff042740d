//! Small dense complex matrices.
//!
//! Everything in this crate runs at modest dimensions (n <= 64 in the
//! acceptance battery), so a plain row-major `Vec<Complex<T>>` with O(n^3)
//! kernels is the right tool; no external linear-algebra backend is used.

use crate::scalar::Real;
use num_complex::Complex;
use rand::Rng;

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMat<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> std::fmt::Debug for CMat<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "CMat {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows.min(8) {
            for j in 0..self.cols.min(8) {
                let z = self[(i, j)];
                write!(f, " {:+.3e}{:+.3e}i", z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl<T: Real> std::ops::Index<(usize, usize)> for CMat<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> std::ops::IndexMut<(usize, usize)> for CMat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> CMat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: vec![Complex::new(T::zero(), T::zero()); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = Complex::new(*v, T::zero());
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re.is_zero() && a.im.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + rhs[(i, j)])
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - rhs[(i, j)])
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].scale(s))
    }

    /// max_{ij} |a_ij| (complex modulus).
    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a.max(b)).sqrt()
    }

    pub fn fro_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt()
    }

    pub fn trace(&self) -> Complex<T> {
        assert!(self.is_square());
        let mut t = Complex::new(T::zero(), T::zero());
        for i in 0..self.rows {
            t = t + self[(i, i)];
        }
        t
    }

    /// (a + a*)/2.
    pub fn hermitize(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()).scale(T::cast(0.5))
        })
    }

    pub fn max_hermitian_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm_sqr().sqrt();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn col(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[Complex<T>]) {
        assert_eq!(v.len(), self.rows);
        for (i, x) in v.iter().enumerate() {
            self[(i, j)] = *x;
        }
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows);
        Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                rhs[(i, j - self.cols)]
            }
        })
    }

    /// tr(self * rhs) without forming the product.
    pub fn trace_product(&self, rhs: &Self) -> Complex<T> {
        assert_eq!(self.cols, rhs.rows);
        assert_eq!(self.rows, rhs.cols);
        let mut t = Complex::new(T::zero(), T::zero());
        for i in 0..self.rows {
            for j in 0..self.cols {
                t = t + self[(i, j)] * rhs[(j, i)];
            }
        }
        t
    }
}

/// <x, y> = sum conj(x_i) y_i.
pub fn inner<T: Real>(x: &[Complex<T>], y: &[Complex<T>]) -> Complex<T> {
    let mut s = Complex::new(T::zero(), T::zero());
    for (a, b) in x.iter().zip(y) {
        s = s + a.conj() * *b;
    }
    s
}

pub fn vec_norm<T: Real>(x: &[Complex<T>]) -> T {
    x.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt()
}

/// Orthonormalize `cols` by modified Gram-Schmidt with one re-orthogonalization
/// pass, dropping columns whose residual norm falls below `drop_tol`.
/// Returns the kept columns as an n x k basis matrix.
pub fn orthonormalize<T: Real>(n: usize, cols: &[Vec<Complex<T>>], drop_tol: T) -> CMat<T> {
    let mut basis: Vec<Vec<Complex<T>>> = Vec::new();
    for cand in cols {
        assert_eq!(cand.len(), n);
        let mut v = cand.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = inner(b, &v);
                for i in 0..n {
                    v[i] = v[i] - b[i] * c;
                }
            }
        }
        let norm = vec_norm(&v);
        if norm > drop_tol {
            let inv = T::one() / norm;
            for z in v.iter_mut() {
                *z = z.scale(inv);
            }
            basis.push(v);
        }
    }
    let mut out = CMat::zeros(n, basis.len());
    for (j, b) in basis.iter().enumerate() {
        out.set_col(j, b);
    }
    out
}

/// Basis of range(p) orthogonal to range(q), assuming range(q) is contained
/// in range(p): project the q-part out of p's basis and re-orthonormalize.
pub fn complement_within<T: Real>(p_basis: &CMat<T>, q_basis: &CMat<T>) -> CMat<T> {
    let n = p_basis.rows();
    let mut cands: Vec<Vec<Complex<T>>> = Vec::with_capacity(p_basis.cols());
    for j in 0..p_basis.cols() {
        let mut v = p_basis.col(j);
        for b in 0..q_basis.cols() {
            let bc = q_basis.col(b);
            let c = inner(&bc, &v);
            for i in 0..n {
                v[i] = v[i] - bc[i] * c;
            }
        }
        cands.push(v);
    }
    // Candidates inside range(q) project to rounding-level residuals; any
    // residual above this threshold carries a genuine new direction. A large
    // threshold would be wrong: a needed direction can be spread across
    // candidates with per-column residual as small as sqrt(1/m).
    orthonormalize(n, &cands, T::cast(1e-6))
}

/// B * B^* for an orthonormal basis B.
pub fn projector_from_basis<T: Real>(basis: &CMat<T>) -> CMat<T> {
    let n = basis.rows();
    let k = basis.cols();
    let mut p = CMat::zeros(n, n);
    for c in 0..k {
        for i in 0..n {
            let bi = basis[(i, c)];
            for j in 0..n {
                p[(i, j)] = p[(i, j)] + bi * basis[(j, c)].conj();
            }
        }
    }
    p
}

/// B^* A B.
pub fn compress<T: Real>(a: &CMat<T>, basis: &CMat<T>) -> CMat<T> {
    basis.adjoint().mul(&a.mul(basis))
}

/// Cholesky-based positive-definiteness test for a Hermitian matrix.
/// Returns true iff all pivots stay strictly positive.
pub fn is_positive_definite<T: Real>(a: &CMat<T>) -> bool {
    assert!(a.is_square());
    let n = a.rows();
    let mut l = CMat::<T>::zeros(n, n);
    for k in 0..n {
        let mut d = a[(k, k)].re;
        for j in 0..k {
            d = d - l[(k, j)].norm_sqr();
        }
        if d <= T::zero() || !d.is_finite() {
            return false;
        }
        let dk = d.sqrt();
        l[(k, k)] = Complex::new(dk, T::zero());
        let inv = T::one() / dk;
        for i in (k + 1)..n {
            let mut s = a[(i, k)];
            for j in 0..k {
                s = s - l[(i, j)] * l[(k, j)].conj();
            }
            l[(i, k)] = s.scale(inv);
        }
    }
    true
}

/// Complex matrix with independent standard-normal real and imaginary parts.
pub fn gaussian_matrix<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat<T> {
    CMat::from_fn(rows, cols, |_, _| Complex::new(T::std_normal(rng), T::std_normal(rng)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from;

    #[test]
    fn matmul_matches_hand_computation() {
        // [[1, i],[0, 2]] * [[1, 0],[1, 1]] = [[1+i, i],[2, 2]]
        let a = CMat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => Complex::new(1.0, 0.0),
            (0, 1) => Complex::new(0.0, 1.0),
            (1, 1) => Complex::new(2.0, 0.0),
            _ => Complex::new(0.0, 0.0),
        });
        let b = CMat::from_fn(2, 2, |i, j| {
            if (i, j) == (0, 1) {
                Complex::new(0.0, 0.0)
            } else {
                Complex::new(1.0, 0.0)
            }
        });
        let c = a.mul(&b);
        assert_eq!(c[(0, 0)], Complex::new(1.0, 1.0));
        assert_eq!(c[(0, 1)], Complex::new(0.0, 1.0));
        assert_eq!(c[(1, 0)], Complex::new(2.0, 0.0));
        assert_eq!(c[(1, 1)], Complex::new(2.0, 0.0));
    }

    #[test]
    fn orthonormalize_produces_orthonormal_columns() {
        let mut rng = rng_from(7);
        let g: CMat<f64> = gaussian_matrix(&mut rng, 6, 4);
        let cols: Vec<_> = (0..4).map(|j| g.col(j)).collect();
        let q = orthonormalize(6, &cols, 1e-12);
        assert_eq!(q.cols(), 4);
        let gram = q.adjoint().mul(&q);
        let defect = gram.sub(&CMat::identity(4)).max_abs();
        assert!(defect < 1e-13, "gram defect {defect}");
    }

    #[test]
    fn orthonormalize_drops_dependent_columns() {
        let c0 = vec![Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)];
        let c1 = vec![Complex::new(2.0, 0.0), Complex::new(0.0, 0.0)];
        let q = orthonormalize(2, &[c0, c1], 1e-10);
        assert_eq!(q.cols(), 1);
    }

    #[test]
    fn cholesky_detects_definiteness() {
        let pd = CMat::diag(&[1.0, 2.0, 0.5]);
        assert!(is_positive_definite(&pd));
        let indef = CMat::diag(&[1.0, -1e-12, 0.5]);
        assert!(!is_positive_definite(&indef));
    }

    #[test]
    fn trace_product_agrees_with_mul_trace() {
        let mut rng = rng_from(3);
        let a: CMat<f64> = gaussian_matrix(&mut rng, 5, 5);
        let b: CMat<f64> = gaussian_matrix(&mut rng, 5, 5);
        let t1 = a.trace_product(&b);
        let t2 = a.mul(&b).trace();
        assert!((t1 - t2).norm() < 1e-12);
    }
}
