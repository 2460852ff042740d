//! Lattice operations on projections (join, meet, interpolation) and the
//! constructive orthogonal-family algorithms behind the Wielandt bound.
//!
//! Join and meet are computed spectrally from p + q: eigenvectors with
//! eigenvalue above the rank threshold span range(p) + range(q); those with
//! eigenvalue near 2 span the intersection. The family constructions follow
//! the inductive recipes exactly and re-verify their own postconditions
//! before returning, since downstream certificates chain through them.

use crate::error::LatticeError;
use crate::linalg::{complement_within, gaussian_matrix, orthonormalize, CMat};
use crate::rng::rng_from;
use crate::scalar::Real;
use crate::spectra::{eigh, Hermitian, Projection};
use crate::tol;
use rand::Rng;

fn check_same_dim<T: Real>(p: &Projection<T>, q: &Projection<T>) -> Result<(), LatticeError> {
    if p.dim() != q.dim() {
        return Err(LatticeError::DimensionMismatch { left: p.dim(), right: q.dim() });
    }
    Ok(())
}

fn rank_threshold<T: Real>(n: usize) -> T {
    T::cast(tol::RANK_SV_REL) * T::cast(n as f64)
}

/// p v q: orthogonal projection onto range(p) + range(q).
pub fn join<T: Real>(p: &Projection<T>, q: &Projection<T>) -> Result<Projection<T>, LatticeError> {
    check_same_dim(p, q)?;
    let n = p.dim();
    let sum = Hermitian::new(p.matrix().add(q.matrix()))?;
    let eig = eigh(&sum)?;
    let lo = eig.values.partition_point(|&x| x <= rank_threshold::<T>(n));
    Ok(Projection::from_basis(eig.basis_for(lo..n)))
}

/// p ^ q: orthogonal projection onto range(p) n range(q).
pub fn meet<T: Real>(p: &Projection<T>, q: &Projection<T>) -> Result<Projection<T>, LatticeError> {
    check_same_dim(p, q)?;
    let n = p.dim();
    let sum = Hermitian::new(p.matrix().add(q.matrix()))?;
    let eig = eigh(&sum)?;
    let cut = T::cast(2.0) - rank_threshold::<T>(n);
    let lo = eig.values.partition_point(|&x| x <= cut);
    Ok(Projection::from_basis(eig.basis_for(lo..n)))
}

/// Reproducible random rank-k projection: orthonormalized Gaussian columns.
pub fn random_projection<T: Real>(
    n: usize,
    k: usize,
    seed: u64,
) -> Result<Projection<T>, LatticeError> {
    let mut rng = rng_from(seed);
    random_projection_with(n, k, &mut rng)
}

/// As [`random_projection`], drawing from a caller-provided RNG.
pub fn random_projection_with<T: Real, R: Rng + ?Sized>(
    n: usize,
    k: usize,
    rng: &mut R,
) -> Result<Projection<T>, LatticeError> {
    if k > n {
        return Err(LatticeError::Shape(format!("rank {k} exceeds dimension {n}")));
    }
    if k == 0 {
        return Ok(Projection::zero(n));
    }
    loop {
        let g = gaussian_matrix::<T, _>(rng, n, k);
        let cols: Vec<_> = (0..k).map(|j| g.col(j)).collect();
        let basis = orthonormalize(n, &cols, T::cast(1e-8));
        if basis.cols() == k {
            return Ok(Projection::from_basis(basis));
        }
        // dependent Gaussian draw; probability zero, resample
    }
}

/// Random rank-k sub-projection of r, uniform over range(r).
pub fn random_subprojection<T: Real, R: Rng + ?Sized>(
    r: &Projection<T>,
    k: usize,
    rng: &mut R,
) -> Result<Projection<T>, LatticeError> {
    if k > r.rank() {
        return Err(LatticeError::Shape(format!(
            "requested rank {k} exceeds rank {} of the ambient projection",
            r.rank()
        )));
    }
    if k == 0 {
        return Ok(Projection::zero(r.dim()));
    }
    let m = r.rank();
    let coeff = gaussian_matrix::<T, _>(rng, m, k);
    let ambient = r.basis().mul(&coeff);
    let cols: Vec<_> = (0..k).map(|j| ambient.col(j)).collect();
    let basis = orthonormalize(r.dim(), &cols, T::cast(1e-8));
    if basis.cols() != k {
        return random_subprojection(r, k, rng);
    }
    Ok(Projection::from_basis(basis))
}

/// Orthonormal basis of the orthogonal complement of range(p).
pub fn complement_basis<T: Real>(p: &Projection<T>) -> CMat<T> {
    let n = p.dim();
    let mut cands: Vec<Vec<num_complex::Complex<T>>> =
        (0..p.rank()).map(|j| p.basis().col(j)).collect();
    let eye = CMat::<T>::identity(n);
    for j in 0..n {
        cands.push(eye.col(j));
    }
    // small drop threshold: a missing direction can hide in identity columns
    // with residual as small as sqrt(1/n)
    let full = orthonormalize(n, &cands, T::cast(1e-6));
    assert_eq!(full.cols(), n, "identity columns complete any orthonormal set");
    let mut out = CMat::zeros(n, n - p.rank());
    for c in p.rank()..n {
        out.set_col(c - p.rank(), &full.col(c));
    }
    out
}

/// Extend an ascending chain: p plus `added` random directions from its
/// complement.
pub fn extend_projection_randomly<T: Real, R: Rng + ?Sized>(
    p: &Projection<T>,
    added: usize,
    rng: &mut R,
) -> Result<Projection<T>, LatticeError> {
    let n = p.dim();
    if p.rank() + added > n {
        return Err(LatticeError::Shape(format!(
            "cannot extend rank {} by {added} in dimension {n}",
            p.rank()
        )));
    }
    if added == 0 {
        return Ok(p.clone());
    }
    let comp = complement_basis(p);
    let coeff = gaussian_matrix::<T, _>(rng, comp.cols(), added);
    let extra = comp.mul(&coeff);
    let mut cols: Vec<_> = (0..p.rank()).map(|j| p.basis().col(j)).collect();
    for j in 0..added {
        cols.push(extra.col(j));
    }
    let basis = orthonormalize(n, &cols, T::cast(1e-8));
    if basis.cols() != p.rank() + added {
        return extend_projection_randomly(p, added, rng);
    }
    Ok(Projection::from_basis(basis))
}

/// Interpolation f with e <= f <= r and rank(f) = target_rank, extending
/// range(e) by the leading eigendirections of r - e.
pub fn interpolate_projection<T: Real>(
    e: &Projection<T>,
    r: &Projection<T>,
    target_rank: usize,
) -> Result<Projection<T>, LatticeError> {
    check_same_dim(e, r)?;
    let ctol = tol::construction::<T>();
    let below = e.below_defect(r);
    if below > ctol {
        return Err(LatticeError::Ordering {
            what: "e <= r".to_string(),
            defect: below.to_f64().unwrap_or(f64::NAN),
        });
    }
    if target_rank < e.rank() || target_rank > r.rank() {
        return Err(LatticeError::Shape(format!(
            "target rank {target_rank} outside [{}, {}]",
            e.rank(),
            r.rank()
        )));
    }
    if target_rank == e.rank() {
        return Ok(e.clone());
    }
    let n = e.dim();
    let need = target_rank - e.rank();
    let diff = Hermitian::new(r.matrix().sub(e.matrix()).hermitize())?;
    let eig = eigh(&diff)?;
    // r - e is itself a projection when e <= r, so the top eigenvalues are 1.
    let lead = eig.basis_for(n - need..n);
    for j in 0..need {
        let lambda = eig.values[n - need + j];
        if lambda < T::cast(0.5) {
            return Err(LatticeError::Postcondition {
                what: format!("extension eigenvalue {j} of r - e is {lambda}, expected near 1"),
                defect: (T::one() - lambda).to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let mut cols: Vec<_> = (0..e.rank()).map(|j| e.basis().col(j)).collect();
    for j in 0..need {
        cols.push(lead.col(j));
    }
    let basis = orthonormalize(n, &cols, T::cast(0.5));
    if basis.cols() != target_rank {
        return Err(LatticeError::Postcondition {
            what: "interpolation basis lost rank".to_string(),
            defect: (target_rank - basis.cols()) as f64,
        });
    }
    let f = Projection::from_basis(basis);
    let d1 = e.below_defect(&f).max(f.below_defect(r));
    if d1 > ctol {
        return Err(LatticeError::Postcondition {
            what: "e <= f <= r".to_string(),
            defect: d1.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(f)
}

/// Sum of a mutually orthogonal family as a projection.
pub fn orthogonal_sum<T: Real>(family: &[Projection<T>]) -> Result<Projection<T>, LatticeError> {
    if family.is_empty() {
        return Err(LatticeError::Shape("empty family".to_string()));
    }
    let n = family[0].dim();
    let ctol = tol::construction::<T>();
    for (i, a) in family.iter().enumerate() {
        for (j, b) in family.iter().enumerate().skip(i + 1) {
            let d = a.matrix().mul(b.matrix()).max_abs();
            if d > ctol {
                return Err(LatticeError::Orthogonality {
                    i,
                    j,
                    defect: d.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
    }
    let mut cols = Vec::new();
    for p in family {
        for j in 0..p.rank() {
            cols.push(p.basis().col(j));
        }
    }
    let total: usize = family.iter().map(|p| p.rank()).sum();
    let basis = orthonormalize(n, &cols, T::cast(0.5));
    if basis.cols() != total {
        return Err(LatticeError::Postcondition {
            what: "orthogonal family sum lost rank".to_string(),
            defect: (total - basis.cols()) as f64,
        });
    }
    Ok(Projection::from_basis(basis))
}

fn validate_family_inputs<T: Real>(
    nested_upper: &[Projection<T>],
    seeds: &[Projection<T>],
    target_ranks: &[usize],
) -> Result<(), LatticeError> {
    let k = nested_upper.len();
    if k == 0 || target_ranks.len() != k || seeds.len() + 1 != k {
        return Err(LatticeError::Shape(format!(
            "expected k upper bounds, k targets and k-1 seed projections; got {k}, {}, {}",
            target_ranks.len(),
            seeds.len()
        )));
    }
    let ctol = tol::construction::<T>();
    for w in nested_upper.windows(2) {
        let d = w[1].below_defect(&w[0]);
        if d > ctol {
            return Err(LatticeError::Ordering {
                what: "upper bounds must descend".to_string(),
                defect: d.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let mut tail = 0usize;
    for j in (0..k).rev() {
        tail += target_ranks[j];
        if nested_upper[j].rank() < tail {
            return Err(LatticeError::RankHypothesis {
                level: j,
                needed: tail,
                actual: nested_upper[j].rank(),
            });
        }
    }
    for (j, s) in seeds.iter().enumerate() {
        if s.rank() != target_ranks[j] {
            return Err(LatticeError::MemberRank {
                index: j,
                actual: s.rank(),
                target: target_ranks[j],
            });
        }
        let d = s.below_defect(&nested_upper[j]);
        if d > ctol {
            return Err(LatticeError::Ordering {
                what: format!("seed projection {j} below its upper bound"),
                defect: d.to_f64().unwrap_or(f64::NAN),
            });
        }
        for (i, other) in seeds.iter().enumerate().take(j) {
            let d = s.matrix().mul(other.matrix()).max_abs();
            if d > ctol {
                return Err(LatticeError::Orthogonality {
                    i,
                    j,
                    defect: d.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
    }
    Ok(())
}

/// Given descending upper bounds r_1 >= ... >= r_k with rank(r_j) at least
/// the tail sum of targets, and an orthogonal partial family q'_1..q'_{k-1}
/// with q'_j <= r_j, produce a mutually orthogonal family q_1..q_k with
/// q_j <= r_j, rank(q_j) = target_ranks[j] and sum q_j >= sum q'_j.
///
/// Induction: the tail problem is solved first; its sum joined with q'_1 is
/// interpolated up to the full target rank inside r_1, and q_1 is the
/// orthogonal complement of the tail sum inside that interpolant.
pub fn complete_orthogonal_family<T: Real>(
    nested_upper: &[Projection<T>],
    seeds: &[Projection<T>],
    target_ranks: &[usize],
) -> Result<Vec<Projection<T>>, LatticeError> {
    validate_family_inputs(nested_upper, seeds, target_ranks)?;
    let family = build_family(nested_upper, seeds, target_ranks)?;
    verify_family(nested_upper, seeds, target_ranks, &family)?;
    Ok(family)
}

fn build_family<T: Real>(
    nested_upper: &[Projection<T>],
    seeds: &[Projection<T>],
    target_ranks: &[usize],
) -> Result<Vec<Projection<T>>, LatticeError> {
    let k = nested_upper.len();
    let n = nested_upper[0].dim();
    if k == 1 {
        let q = interpolate_projection(&Projection::zero(n), &nested_upper[0], target_ranks[0])?;
        return Ok(vec![q]);
    }
    let tail = build_family(&nested_upper[1..], &seeds[1..], &target_ranks[1..])?;
    let tail_sum = orthogonal_sum(&tail)?;
    let e = join(&tail_sum, &seeds[0])?;
    let total: usize = target_ranks.iter().sum();
    let f = interpolate_projection(&e, &nested_upper[0], total)?;
    let head_basis = complement_within(f.basis(), tail_sum.basis());
    if head_basis.cols() != target_ranks[0] {
        return Err(LatticeError::Postcondition {
            what: "head complement rank".to_string(),
            defect: (target_ranks[0] as f64) - head_basis.cols() as f64,
        });
    }
    let mut family = vec![Projection::from_basis(head_basis)];
    family.extend(tail);
    Ok(family)
}

fn verify_family<T: Real>(
    nested_upper: &[Projection<T>],
    seeds: &[Projection<T>],
    target_ranks: &[usize],
    family: &[Projection<T>],
) -> Result<(), LatticeError> {
    let ctol = tol::construction::<T>();
    for (j, q) in family.iter().enumerate() {
        q.validate()?;
        if q.rank() != target_ranks[j] {
            return Err(LatticeError::MemberRank {
                index: j,
                actual: q.rank(),
                target: target_ranks[j],
            });
        }
        let d = q.below_defect(&nested_upper[j]);
        if d > ctol {
            return Err(LatticeError::Postcondition {
                what: format!("member {j} below its upper bound"),
                defect: d.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let sum = orthogonal_sum(family)?;
    if !seeds.is_empty() {
        let seed_sum = orthogonal_sum(seeds)?;
        let d = seed_sum.below_defect(&sum);
        if d > ctol {
            return Err(LatticeError::Postcondition {
                what: "family sum dominates seed sum".to_string(),
                defect: d.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(())
}

/// Two orthogonal families of equal prescribed ranks with equal sums: q_j
/// below the descending chain r_j, and q~_j below the ascending chain p_j.
///
/// The trace hypothesis `rank(p_m) + rank(r_j) - n >= sum of targets j..=m`
/// is what the Kaplansky bound needs to keep every meet large enough.
pub fn matched_families<T: Real>(
    ascending: &[Projection<T>],
    descending: &[Projection<T>],
    target_ranks: &[usize],
) -> Result<(Vec<Projection<T>>, Vec<Projection<T>>), LatticeError> {
    let k = ascending.len();
    if k == 0 || descending.len() != k || target_ranks.len() != k {
        return Err(LatticeError::Shape(format!(
            "expected equal-length chains and targets; got {k}, {}, {}",
            descending.len(),
            target_ranks.len()
        )));
    }
    let n = ascending[0].dim();
    let ctol = tol::construction::<T>();
    for w in ascending.windows(2) {
        let d = w[0].below_defect(&w[1]);
        if d > ctol {
            return Err(LatticeError::Ordering {
                what: "p-chain must ascend".to_string(),
                defect: d.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    for w in descending.windows(2) {
        let d = w[1].below_defect(&w[0]);
        if d > ctol {
            return Err(LatticeError::Ordering {
                what: "r-chain must descend".to_string(),
                defect: d.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    for m in 0..k {
        let mut window = 0usize;
        for j in (0..=m).rev() {
            window += target_ranks[j];
            let have = ascending[m].rank() as isize + descending[j].rank() as isize - n as isize;
            if have < window as isize {
                return Err(LatticeError::RankHypothesis {
                    level: j,
                    needed: window,
                    actual: have.max(0) as usize,
                });
            }
        }
    }
    let (q, qt) = build_matched(ascending, descending, target_ranks)?;
    // postconditions: valid members, prescribed ranks, orthogonality, equal sums
    let sum_q = orthogonal_sum(&q)?;
    let sum_qt = orthogonal_sum(&qt)?;
    let d = sum_q.matrix().sub(sum_qt.matrix()).max_abs();
    if d > T::cast(tol::FAMILY_SUM) {
        return Err(LatticeError::Postcondition {
            what: "matched family sums equal".to_string(),
            defect: d.to_f64().unwrap_or(f64::NAN),
        });
    }
    for (j, (a, b)) in q.iter().zip(&qt).enumerate() {
        a.validate()?;
        b.validate()?;
        if a.rank() != target_ranks[j] || b.rank() != target_ranks[j] {
            return Err(LatticeError::MemberRank {
                index: j,
                actual: a.rank().min(b.rank()),
                target: target_ranks[j],
            });
        }
        let da = a.below_defect(&descending[j]);
        let db = b.below_defect(&ascending[j]);
        if da.max(db) > ctol {
            return Err(LatticeError::Postcondition {
                what: format!("matched member {j} below its chain"),
                defect: da.max(db).to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok((q, qt))
}

fn build_matched<T: Real>(
    ascending: &[Projection<T>],
    descending: &[Projection<T>],
    target_ranks: &[usize],
) -> Result<(Vec<Projection<T>>, Vec<Projection<T>>), LatticeError> {
    let k = ascending.len();
    if k == 1 {
        let cap = meet(&ascending[0], &descending[0])?;
        if cap.rank() < target_ranks[0] {
            return Err(LatticeError::RankHypothesis {
                level: 0,
                needed: target_ranks[0],
                actual: cap.rank(),
            });
        }
        let q = interpolate_projection(&Projection::zero(ascending[0].dim()), &cap, target_ranks[0])?;
        return Ok((vec![q.clone()], vec![q]));
    }
    let (q_prefix, qt_prefix) =
        build_matched(&ascending[..k - 1], &descending[..k - 1], &target_ranks[..k - 1])?;
    let prefix_sum = orthogonal_sum(&q_prefix)?;
    let top = &ascending[k - 1];
    let mut capped: Vec<Projection<T>> = Vec::with_capacity(k);
    for (j, r) in descending.iter().enumerate() {
        let l = meet(r, top)?;
        let mut need = 0usize;
        for t in &target_ranks[j..] {
            need += t;
        }
        if l.rank() < need {
            return Err(LatticeError::RankHypothesis { level: j, needed: need, actual: l.rank() });
        }
        capped.push(l);
    }
    let family = complete_orthogonal_family(&capped, &q_prefix, target_ranks)?;
    let family_sum = orthogonal_sum(&family)?;
    let last_basis = complement_within(family_sum.basis(), prefix_sum.basis());
    if last_basis.cols() != target_ranks[k - 1] {
        return Err(LatticeError::Postcondition {
            what: "matched tail complement rank".to_string(),
            defect: (target_ranks[k - 1] as f64) - last_basis.cols() as f64,
        });
    }
    let mut qt = qt_prefix;
    qt.push(Projection::from_basis(last_basis));
    Ok((family, qt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_seed;
    use crate::spectra::random_hermitian;

    fn coord_proj(n: usize, idx: &[usize]) -> Projection<f64> {
        let mut basis = CMat::zeros(n, idx.len());
        for (c, &i) in idx.iter().enumerate() {
            basis[(i, c)] = num_complex::Complex::new(1.0, 0.0);
        }
        Projection::from_basis(basis)
    }

    #[test]
    fn join_of_orthogonal_rank_ones_is_their_sum() {
        let p = coord_proj(4, &[0]);
        let q = coord_proj(4, &[2]);
        let j = join(&p, &q).unwrap();
        assert_eq!(j.rank(), 2);
        let want = p.matrix().add(q.matrix());
        assert!(j.matrix().sub(&want).max_abs() < 1e-10);
    }

    #[test]
    fn join_is_idempotent() {
        let p = random_projection::<f64>(5, 2, 3).unwrap();
        let j = join(&p, &p).unwrap();
        assert_eq!(j.rank(), 2);
        assert!(j.matrix().sub(p.matrix()).max_abs() < 1e-9);
    }

    #[test]
    fn join_of_spanning_rank_ones_is_identity() {
        let p = random_projection::<f64>(2, 1, 10).unwrap();
        let q = random_projection::<f64>(2, 1, 11).unwrap();
        let j = join(&p, &q).unwrap();
        assert_eq!(j.rank(), 2);
        assert!(j.matrix().sub(&CMat::identity(2)).max_abs() < 1e-9);
    }

    #[test]
    fn meet_examples() {
        let p = random_projection::<f64>(5, 3, 4).unwrap();
        let m = meet(&p, &p).unwrap();
        assert_eq!(m.rank(), 3);
        assert!(m.matrix().sub(p.matrix()).max_abs() < 1e-9);

        let a = coord_proj(4, &[0, 1]);
        let b = coord_proj(4, &[2, 3]);
        assert_eq!(meet(&a, &b).unwrap().rank(), 0);

        // absorption: p <= q implies meet = p
        let small = coord_proj(4, &[1]);
        let big = coord_proj(4, &[0, 1, 3]);
        let m = meet(&small, &big).unwrap();
        assert!(m.matrix().sub(small.matrix()).max_abs() < 1e-9);
    }

    #[test]
    fn meet_equals_dual_join() {
        for seed in 0..20u64 {
            let n = 2 + (seed as usize % 5);
            let p =
                random_projection::<f64>(n, seed as usize % (n + 1), derive_seed(5, seed)).unwrap();
            let q = random_projection::<f64>(n, (seed as usize + 1) % (n + 1), derive_seed(6, seed))
                .unwrap();
            let direct = meet(&p, &q).unwrap();
            let dual = join(&p.complement().unwrap(), &q.complement().unwrap())
                .unwrap()
                .complement()
                .unwrap();
            assert!(
                direct.matrix().sub(dual.matrix()).max_abs() < 1e-9,
                "duality defect at seed {seed}"
            );
        }
    }

    #[test]
    fn random_projection_edges() {
        let z = random_projection::<f64>(4, 0, 1).unwrap();
        assert_eq!(z.rank(), 0);
        assert!(z.matrix().max_abs() == 0.0);
        let i = random_projection::<f64>(4, 4, 1).unwrap();
        assert_eq!(i.rank(), 4);
        assert!(i.matrix().sub(&CMat::identity(4)).max_abs() < 1e-12);
        let p = random_projection::<f64>(4, 2, 9).unwrap();
        assert!((p.tau() - 0.5).abs() < 1e-12);
        assert!(random_projection::<f64>(4, 5, 1).is_err());
    }

    #[test]
    fn interpolate_endpoints_and_midpoint() {
        let e = coord_proj(4, &[0]);
        let r = coord_proj(4, &[0, 1, 2]);
        let same = interpolate_projection(&e, &r, 1).unwrap();
        assert!(same.matrix().sub(e.matrix()).max_abs() < 1e-12);
        let full = interpolate_projection(&e, &r, 3).unwrap();
        assert!(full.matrix().sub(r.matrix()).max_abs() < 1e-9);

        let f =
            interpolate_projection(&Projection::<f64>::zero(4), &Projection::identity(4), 2)
                .unwrap();
        assert_eq!(f.rank(), 2);
        f.validate().unwrap();
    }

    #[test]
    fn interpolate_rejects_bad_order() {
        let e = coord_proj(4, &[0, 1]);
        let r = coord_proj(4, &[1, 2]);
        assert!(matches!(
            interpolate_projection(&e, &r, 2),
            Err(LatticeError::Ordering { .. })
        ));
    }

    #[test]
    fn complete_family_base_case() {
        let fam =
            complete_orthogonal_family::<f64>(&[Projection::identity(4)], &[], &[2]).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam[0].rank(), 2);
    }

    #[test]
    fn complete_family_two_levels() {
        // r_1 = I, r_2 = diag(1,1,1,0), seed q'_1 = diag(0,0,0,1)
        let r1 = Projection::identity(4);
        let r2 = coord_proj(4, &[0, 1, 2]);
        let seed = coord_proj(4, &[3]);
        let fam = complete_orthogonal_family(&[r1, r2.clone()], &[seed.clone()], &[1, 1]).unwrap();
        assert_eq!(fam.len(), 2);
        assert!(fam[1].is_below(&r2, 1e-9));
        // family sum dominates the seed
        let sum = orthogonal_sum(&fam).unwrap();
        assert!(seed.is_below(&sum, 1e-9));
    }

    #[test]
    fn complete_family_random_nested_spectral() {
        for trial in 0..5u64 {
            let a = random_hermitian::<f64>(8, derive_seed(100, trial));
            let eig = eigh(&a).unwrap();
            // descending spectral chain with ranks 8 >= 5 >= 3
            let r1 = Projection::from_basis(eig.basis_for(0..8));
            let r2 = Projection::from_basis(eig.basis_for(3..8));
            let r3 = Projection::from_basis(eig.basis_for(5..8));
            let targets = [2usize, 2, 3];
            let mut rng = rng_from(derive_seed(101, trial));
            let q2 = random_subprojection(&r2, 2, &mut rng).unwrap();
            let rest = meet(&r1, &q2.complement().unwrap()).unwrap();
            let q1 = random_subprojection(&rest, 2, &mut rng).unwrap();
            let fam = complete_orthogonal_family(&[r1, r2, r3], &[q1.clone(), q2.clone()], &targets)
                .unwrap();
            let sum = orthogonal_sum(&fam).unwrap();
            for (s, q) in [(&q1, "q1"), (&q2, "q2")] {
                assert!(s.is_below(&sum, 1e-9), "{q} not dominated at trial {trial}");
            }
        }
    }

    #[test]
    fn complete_family_infeasible_rank_is_certificate_error() {
        // rank(r_1) = 1 < 2 = sum of targets
        let r1 = coord_proj(4, &[0]);
        let r2 = coord_proj(4, &[0]);
        let err =
            complete_orthogonal_family::<f64>(&[r1, r2], &[coord_proj(4, &[0])], &[1, 1])
                .unwrap_err();
        assert!(matches!(err, LatticeError::RankHypothesis { level: 0, needed: 2, actual: 1 }));
    }

    #[test]
    fn matched_families_base_case() {
        let p = coord_proj(4, &[0, 1, 2]);
        let r = coord_proj(4, &[1, 2, 3]);
        let (q, qt) = matched_families(&[p.clone()], &[r.clone()], &[2]).unwrap();
        assert_eq!(q[0].rank(), 2);
        assert!(q[0].matrix().sub(qt[0].matrix()).max_abs() < 1e-12);
        assert!(q[0].is_below(&p, 1e-9));
        assert!(q[0].is_below(&r, 1e-9));
    }

    #[test]
    fn matched_families_infeasible() {
        // rank(p)+rank(r)-n = 1+1-4 < 1
        let p = coord_proj(4, &[0]);
        let r = coord_proj(4, &[3]);
        let err = matched_families(&[p], &[r], &[1]).unwrap_err();
        assert!(matches!(err, LatticeError::RankHypothesis { .. }));
    }

    #[test]
    fn kaplansky_bound_smoke() {
        for seed in 0..50u64 {
            let n = 2 + (seed as usize % 7);
            let kr = seed as usize % (n + 1);
            let ke = (3 * seed as usize + 1) % (n + 1);
            let r = random_projection::<f64>(n, kr, derive_seed(7, seed)).unwrap();
            let e = random_projection::<f64>(n, ke, derive_seed(8, seed)).unwrap();
            let cap = meet(&r, &e.complement().unwrap()).unwrap();
            assert!(
                cap.rank() as isize >= r.rank() as isize - e.rank() as isize,
                "kaplansky violated: n={n} rank r={kr} rank e={ke} got {}",
                cap.rank()
            );
        }
    }
}
