//! Cross-cutting invariants of the spectral machinery: unitary invariance,
//! partition consistency of spectral projections, maximality of the
//! max-trace witness, compression consistency of the conditional minimum,
//! and the exhaustive coordinate-projection oracle for partial sums.

use spectral_minmax::lattice::random_projection_with;
use spectral_minmax::linalg::{compress, is_positive_definite, CMat};
use spectral_minmax::measures::{cdf_of, quantile_of};
use spectral_minmax::rng::{derive_seed, rng_from};
use spectral_minmax::spectra::{
    eigh, kyfan_value, random_hermitian, random_unitary, spectral_distribution,
    spectral_projection, Hermitian,
};
use spectral_minmax::verify::verify_conditional_min;

#[test]
fn spectral_distribution_is_unitarily_invariant() {
    let a = random_hermitian::<f64>(6, 17);
    let base = spectral_distribution(&a).unwrap();
    for t in 0..100u64 {
        let u = random_unitary::<f64>(6, derive_seed(900, t));
        let conj = Hermitian::new(u.mul(a.matrix()).mul(&u.adjoint()).hermitize()).unwrap();
        let rotated = spectral_distribution(&conj).unwrap();
        assert_eq!(base.atoms().len(), rotated.atoms().len());
        for (x, y) in base.atoms().iter().zip(rotated.atoms()) {
            assert!(
                (x.location - y.location).abs() < 1e-9,
                "atom moved by {:e} under conjugation",
                (x.location - y.location).abs()
            );
            assert!((x.weight - y.weight).abs() < 1e-12);
        }
    }
}

#[test]
fn spectral_projections_partition_to_identity() {
    let a = random_hermitian::<f64>(7, 21);
    let eig = eigh(&a).unwrap();
    // cut the spectrum into three disjoint half-open intervals
    let cuts = [
        f64::NEG_INFINITY,
        (eig.values[1] + eig.values[2]) / 2.0,
        (eig.values[4] + eig.values[5]) / 2.0,
        f64::INFINITY,
    ];
    let parts: Vec<_> = cuts
        .windows(2)
        .map(|w| spectral_projection(&a, w[0], w[1]).unwrap())
        .collect();
    let mut total = CMat::<f64>::zeros(7, 7);
    for (i, p) in parts.iter().enumerate() {
        total = total.add(p.matrix());
        for q in parts.iter().skip(i + 1) {
            let cross = p.matrix().mul(q.matrix()).max_abs();
            assert!(cross < 1e-9, "projections of disjoint intervals overlap: {cross:e}");
        }
        // each commutes with a
        let comm = p.matrix().mul(a.matrix()).sub(&a.matrix().mul(p.matrix())).max_abs();
        assert!(comm < 1e-9, "spectral projection does not commute: {comm:e}");
    }
    assert!(total.sub(&CMat::identity(7)).max_abs() < 1e-9);
}

#[test]
fn max_trace_witness_is_maximal() {
    // every projection with larger trace admits a vector below the threshold
    let a = random_hermitian::<f64>(6, 23);
    let eig = eigh(&a).unwrap();
    let t = (eig.values[2] + eig.values[3]) / 2.0; // three eigenvalues above
    let witness_rank = 3usize;
    let mut rng = rng_from(41);
    for trial in 0..1000usize {
        let rank = witness_rank + 1 + (trial % (6 - witness_rank - 1));
        let p = random_projection_with::<f64, _>(6, rank, &mut rng).unwrap();
        let b = compress(a.matrix(), p.basis());
        let shifted = b.sub(&CMat::diag(&vec![t - 1e-9; rank]));
        assert!(
            !is_positive_definite(&shifted),
            "trial {trial}: rank-{rank} projection satisfied the corner bound"
        );
    }
}

#[test]
fn kyfan_value_matches_exhaustive_diagonal_minimum() {
    // ascending diagonal matrices, all j, n <= 6: enumerate all C(n, j)
    // coordinate projections
    for n in 2..=6usize {
        let values: Vec<f64> = (0..n).map(|k| (k as f64) - 1.3).collect();
        let a = Hermitian::diag(&values);
        for j in 1..=n {
            let mut best = f64::INFINITY;
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize != j {
                    continue;
                }
                let s: f64 = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| values[i]).sum();
                best = best.min(s / n as f64);
            }
            let got = kyfan_value(&a, j as f64 / n as f64).unwrap();
            assert!(
                (got - best).abs() < 1e-12,
                "n={n} j={j}: quantile route {got} vs exhaustive {best}"
            );
        }
    }
}

#[test]
fn conditional_min_is_compression_consistent() {
    // computing inside the compressed corner with the renormalized trace and
    // scaling back matches the full-space value
    let a = random_hermitian::<f64>(8, 31);
    let eig = eigh(&a).unwrap();
    let t0 = (eig.values[2] + eig.values[3]) / 2.0;
    let t1 = (eig.values[4] + eig.values[5]) / 2.0;
    let full = verify_conditional_min(&a, t0, t1, 200, 3).unwrap();

    let tail_basis = eig.basis_for(3..8);
    let corner = Hermitian::new(compress(a.matrix(), &tail_basis).hermitize()).unwrap();
    let corner_eig = eigh(&corner).unwrap();
    // the corner spectrum is the tail of the full spectrum
    for (x, y) in corner_eig.values.iter().zip(&eig.values[3..]) {
        assert!((x - y).abs() < 1e-10);
    }
    // bottom two corner eigenvalues, renormalized trace tau/tau(r0)
    let m = corner_eig.values.len() as f64;
    let corner_value: f64 = corner_eig.values[..2].iter().sum::<f64>() / m;
    let unnormalized = corner_value * (m / 8.0);
    assert!(
        (unnormalized - full.exact).abs() < 1e-10,
        "corner route {unnormalized} vs full {}",
        full.exact
    );
}

#[test]
fn quantile_route_and_eigenvalue_route_agree_on_random_matrices() {
    for t in 0..20u64 {
        let n = 3 + (t as usize % 6);
        let a = random_hermitian::<f64>(n, derive_seed(700, t));
        let eig = eigh(&a).unwrap();
        let q = quantile_of(&cdf_of(&spectral_distribution(&a).unwrap())).unwrap();
        for j in 1..=n {
            let via_eig: f64 = eig.values[..j].iter().sum::<f64>() / n as f64;
            let via_q = q.integral(0.0, j as f64 / n as f64).unwrap();
            assert!((via_eig - via_q).abs() < 1e-10);
        }
    }
}
