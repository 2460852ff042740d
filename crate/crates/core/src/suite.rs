//! The acceptance battery: one function per criterion, each returning a
//! structured report, plus the full-suite runner with a determinism
//! criterion that reruns the battery and compares the serialized reports
//! byte for byte (timing excluded).
//!
//! Everything is driven by a single suite seed; all matrices, thresholds
//! and trial seeds derive from it, so two runs with the same seed produce
//! identical reports.

use crate::lattice::{
    complete_orthogonal_family, extend_projection_randomly, matched_families, meet,
    random_projection_with, random_subprojection,
};
use crate::linalg::{compress, gaussian_matrix, is_positive_definite, CMat};
use crate::majorization::{domination_check, lidskii_check};
use crate::measures::{
    cdf_of, discretize, quantile_of, Atom, CompactMeasure, DensitySegment,
    SEMICIRCLE_DEFAULT_PANELS,
};
use crate::rng::{derive_seed, map_trials, rng_from};
use crate::spectra::{
    eigh, random_hermitian, spectral_distribution, tau_on_basis, Hermitian, Projection, Spectrum,
};
use crate::verify::{validate_intervals, verify_courant_fischer, verify_wielandt};
use crate::{tol, Hermitian64};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Runtime budgets (seconds) for the criteria that pin one.
const RUNTIME_LIMIT_S: [(usize, f64); 4] = [(1, 60.0), (2, 30.0), (3, 120.0), (4, 120.0)];

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CriterionReport {
    pub id: usize,
    pub name: String,
    pub pass: bool,
    /// Number of individual checks evaluated.
    pub checks: usize,
    /// First few failure descriptions, if any.
    pub failures: Vec<String>,
    /// Informational lines (counts, extreme margins).
    pub details: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub pass: bool,
    pub criteria: Vec<CriterionReport>,
    /// Wall-clock seconds per criterion; excluded from determinism
    /// comparisons and from `canonical_json`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_s: Option<Vec<f64>>,
}

impl SuiteReport {
    /// Serialized form with the timing field stripped; two runs with the
    /// same seed must agree on this byte for byte.
    pub fn canonical_json(&self) -> String {
        let mut clone = self.clone();
        clone.timing_s = None;
        serde_json::to_string_pretty(&clone).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable pass/fail table, one line per criterion.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for (idx, c) in self.criteria.iter().enumerate() {
            let time = self
                .timing_s
                .as_ref()
                .and_then(|t| t.get(idx))
                .map(|s| format!(" ({s:.2}s)"))
                .unwrap_or_default();
            out.push_str(&format!(
                "criterion {} [{}]: {}{} — {} checks{}\n",
                c.id,
                c.name,
                if c.pass { "PASS" } else { "FAIL" },
                time,
                c.checks,
                if c.failures.is_empty() {
                    String::new()
                } else {
                    format!("; first failure: {}", c.failures[0])
                }
            ));
        }
        out.push_str(&format!("suite: {}\n", if self.pass { "PASS" } else { "FAIL" }));
        out
    }
}

struct Checker {
    checks: usize,
    failures: Vec<String>,
    details: Vec<String>,
}

impl Checker {
    fn new() -> Self {
        Checker { checks: 0, failures: Vec::new(), details: Vec::new() }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 16 {
            self.failures.push(msg());
        } else if !ok {
            // keep counting without flooding the report
            self.failures.truncate(16);
        }
    }

    fn note(&mut self, msg: String) {
        self.details.push(msg);
    }

    fn into_report(self, id: usize, name: &str) -> CriterionReport {
        CriterionReport {
            id,
            name: name.to_string(),
            pass: self.failures.is_empty(),
            checks: self.checks,
            failures: self.failures,
            details: self.details,
        }
    }
}

/// The shared 50-matrix ensemble: sizes cycle over 2..=8, spectra with
/// merged eigenvalue clusters are skipped deterministically.
pub fn ensemble(seed: u64) -> Vec<Hermitian64> {
    (0..50usize)
        .map(|i| {
            let n = 2 + (i % 7);
            let mut stream = 1000 + i as u64;
            loop {
                let a = random_hermitian::<f64>(n, derive_seed(seed, stream));
                if Spectrum::of(&a).map(|s| s.is_distinct()).unwrap_or(false) {
                    return a;
                }
                stream += 7919;
            }
        })
        .collect()
}

fn c3_matrix(seed: u64, n: usize) -> Hermitian64 {
    let mut stream = 2000 + n as u64;
    loop {
        let a = random_hermitian::<f64>(n, derive_seed(seed, stream));
        if Spectrum::of(&a).map(|s| s.is_distinct()).unwrap_or(false) {
            return a;
        }
        stream += 7919;
    }
}

fn c4_configs() -> Vec<(usize, Vec<(usize, usize)>)> {
    vec![
        (4, vec![(1, 1), (3, 3)]),
        (6, vec![(1, 2), (4, 4)]),
        (8, vec![(2, 3), (6, 7)]),
        (6, vec![(1, 1), (3, 3), (5, 6)]),
    ]
}

fn c4_matrix(seed: u64, idx: usize, n: usize) -> Hermitian64 {
    let mut stream = 3000 + (idx * 16 + n) as u64;
    loop {
        let a = random_hermitian::<f64>(n, derive_seed(seed, stream));
        if Spectrum::of(&a).map(|s| s.is_distinct()).unwrap_or(false) {
            return a;
        }
        stream += 7919;
    }
}

fn c6_pair(seed: u64, t: usize) -> (Hermitian64, Hermitian64) {
    (
        random_hermitian::<f64>(8, derive_seed(seed, 6000 + 2 * t as u64)),
        random_hermitian::<f64>(8, derive_seed(seed, 6001 + 2 * t as u64)),
    )
}

fn c7_pair(seed: u64, t: usize, indefinite: bool) -> (Hermitian64, Hermitian64) {
    let a = random_hermitian::<f64>(6, derive_seed(seed, 7000 + 4 * t as u64));
    let mut rng = rng_from(derive_seed(seed, 7001 + 4 * t as u64));
    let c = gaussian_matrix::<f64, _>(&mut rng, 6, 1);
    let mut bump = c.mul(&c.adjoint());
    if indefinite {
        let d = gaussian_matrix::<f64, _>(&mut rng, 6, 1);
        bump = bump.sub(&d.mul(&d.adjoint()));
    }
    let b = Hermitian::new(a.matrix().add(&bump).hermitize()).expect("hermitian by construction");
    (a, b)
}

/// Criterion 1: partial eigenvalue sums as minima over projections.
pub fn criterion_1(seed: u64) -> CriterionReport {
    let started = std::time::Instant::now();
    let mut ck = Checker::new();
    let trials = 10_000usize;
    let mut relaxed_hypothesis_held = 0usize;
    let mut relaxed_hypothesis_failed = 0usize;

    for (mi, a) in ensemble(seed).iter().enumerate() {
        let n = a.dim();
        let eig = eigh(a).expect("ensemble spectra converge");
        let values = &eig.values;
        let nn = n as f64;
        let partial: Vec<f64> = (0..=n)
            .map(|m| values[..m].iter().sum::<f64>() / nn)
            .collect();

        // exhaustive coordinate minima by subset size, one scan per matrix
        let mut min_by_size = vec![f64::INFINITY; n + 1];
        for mask in 0u32..(1u32 << n) {
            let size = mask.count_ones() as usize;
            let mut s = 0.0;
            for (i, v) in values.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    s += v;
                }
            }
            min_by_size[size] = min_by_size[size].min(s / nn);
        }

        for j in 1..=n {
            let exact = partial[j];
            // spec oracle: exhaustive rank-exactly-j coordinate minimum
            ck.check((min_by_size[j] - exact).abs() <= tol::ANALYTIC, || {
                format!("matrix {mi}: exhaustive rank-{j} coordinate min misses partial sum")
            });
            // witness attains within 1e-10 through the matrix route
            let witness_value = tau_on_basis(a.matrix(), &eig.basis_for(0..j));
            ck.check((witness_value - exact).abs() <= tol::WITNESS, || {
                format!("matrix {mi}: witness value off by {:e}", (witness_value - exact).abs())
            });

            // equality-constrained random sampling: never beats the partial sum
            let eq_min = map_trials(trials, |t| {
                let mut rng = rng_from(derive_seed(seed, 10_000 + (mi * 64 + j) as u64 * 100_003 + t as u64));
                let p = random_projection_with::<f64, _>(n, j, &mut rng).expect("valid rank");
                tau_on_basis(a.matrix(), p.basis())
            })
            .into_iter()
            .fold(f64::INFINITY, f64::min);
            ck.check(eq_min >= exact - tol::CONSTRUCTION, || {
                format!(
                    "matrix {mi} j={j}: rank-exactly-j sample {eq_min:.12} beats partial {exact:.12}"
                )
            });

            // relaxed rank constraint: the true optimum over rank >= j
            let relaxed_exact =
                (j..=n).map(|m| partial[m]).fold(f64::INFINITY, f64::min);
            let relaxed_coord =
                (j..=n).map(|m| min_by_size[m]).fold(f64::INFINITY, f64::min);
            ck.check((relaxed_coord - relaxed_exact).abs() <= tol::ANALYTIC, || {
                format!("matrix {mi} j={j}: relaxed coordinate min disagrees with window optimum")
            });
            if (relaxed_exact - exact).abs() <= tol::ANALYTIC {
                relaxed_hypothesis_held += 1;
            } else {
                relaxed_hypothesis_failed += 1;
            }
            let ge_min = map_trials(trials, |t| {
                let mut rng = rng_from(derive_seed(seed, 20_000 + (mi * 64 + j) as u64 * 100_003 + t as u64));
                let rank = j + (t % (n - j + 1));
                let p = random_projection_with::<f64, _>(n, rank, &mut rng).expect("valid rank");
                tau_on_basis(a.matrix(), p.basis())
            })
            .into_iter()
            .fold(f64::INFINITY, f64::min);
            ck.check(ge_min >= relaxed_exact - tol::CONSTRUCTION, || {
                format!(
                    "matrix {mi} j={j}: rank>=j sample {ge_min:.12} beats window optimum {relaxed_exact:.12}"
                )
            });
        }
    }
    ck.note(format!(
        "relaxed-rank hypothesis (optimum at rank j) held on {relaxed_hypothesis_held} of {} (matrix, j) pairs; on the rest the sound window optimum was enforced",
        relaxed_hypothesis_held + relaxed_hypothesis_failed
    ));
    let elapsed = started.elapsed().as_secs_f64();
    for (id, limit) in RUNTIME_LIMIT_S {
        if id == 1 {
            ck.check(elapsed < limit, || format!("runtime {elapsed:.1}s exceeds {limit}s"));
        }
    }
    ck.into_report(1, "ky fan partial sums")
}

/// Deterministic spread of 20 thresholds per matrix, nudged off the
/// spectrum so every margin is decisive.
fn thresholds(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let lo = values[0] - 0.5;
    let hi = values[n - 1] + 0.5;
    let scale = 1.0 + values.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    (0..20)
        .map(|k| {
            let mut t = lo + (hi - lo) * (k as f64) / 19.0;
            // keep a safe distance from every eigenvalue
            if let Some(&near) = values
                .iter()
                .find(|&&v| (v - t).abs() < 1e-6 * scale)
            {
                let idx = values.iter().position(|&v| v == near).unwrap();
                let gap_hi = if idx + 1 < n { values[idx + 1] } else { near + 1.0 };
                t = (near + gap_hi) / 2.0;
            }
            t
        })
        .collect()
}

/// Criterion 2: the max-trace characterization of the distribution.
pub fn criterion_2(seed: u64) -> CriterionReport {
    let started = std::time::Instant::now();
    let mut ck = Checker::new();
    let violations_per_threshold = 1000usize;
    let mut vacuous = 0usize;

    for (mi, a) in ensemble(seed).iter().enumerate() {
        let n = a.dim();
        let eig = eigh(a).expect("converges");
        let f = cdf_of(&spectral_distribution(a).expect("distinct"));
        for (ti, &t) in thresholds(&eig.values).iter().enumerate() {
            let lo = eig.values.partition_point(|&x| x < t);
            let rank_w = n - lo;
            // value = 1 - F_a(t) through the measure route
            let value = rank_w as f64 / n as f64;
            ck.check((value - (1.0 - f.eval(t))).abs() <= tol::ANALYTIC, || {
                format!("matrix {mi} threshold {ti}: witness trace differs from 1 - F(t)")
            });
            // witness satisfies pap >= tp on its range within 1e-9
            if rank_w > 0 {
                let wb = eig.basis_for(lo..n);
                let compressed = compress(a.matrix(), &wb);
                let shift = CMat::diag(&vec![t - tol::CONSTRUCTION; rank_w]);
                ck.check(is_positive_definite(&compressed.sub(&shift)), || {
                    format!("matrix {mi} threshold {ti}: witness violates the corner bound")
                });
            }
            // every larger-trace projection violates the corner bound
            if rank_w == n {
                vacuous += 1;
                continue;
            }
            let results = map_trials(violations_per_threshold, |v| {
                let mut rng = rng_from(derive_seed(
                    seed,
                    30_000 + ((mi * 32 + ti) as u64) * 1_000_003 + v as u64,
                ));
                let rank = rank_w + 1 + (v % (n - rank_w));
                let p = random_projection_with::<f64, _>(n, rank, &mut rng).expect("valid rank");
                let compressed = compress(a.matrix(), p.basis());
                let shift = CMat::diag(&vec![t - tol::CONSTRUCTION; rank]);
                is_positive_definite(&compressed.sub(&shift))
            });
            let surviving = results.into_iter().filter(|&ok| ok).count();
            ck.check(surviving == 0, || {
                format!(
                    "matrix {mi} threshold {ti}: {surviving} larger-trace projections satisfied the corner bound"
                )
            });
        }
    }
    ck.note(format!("{vacuous} thresholds below the spectrum (no larger trace exists)"));
    let elapsed = started.elapsed().as_secs_f64();
    ck.check(elapsed < 30.0, || format!("runtime {elapsed:.1}s exceeds 30s"));
    ck.into_report(2, "max-trace distribution characterization")
}

/// Criterion 3: the window identity over all (i, j).
pub fn criterion_3(seed: u64) -> CriterionReport {
    let started = std::time::Instant::now();
    let mut ck = Checker::new();
    for n in 3..=8usize {
        let a = c3_matrix(seed, n);
        for i in 1..=n {
            for j in 1..=(n - i + 1) {
                let r = verify_courant_fischer(&a, i, j, 200, 25, derive_seed(seed, (n * 100 + i * 10 + j) as u64))
                    .expect("verifier runs");
                ck.check(r.pass, || {
                    format!("n={n} i={i} j={j}: {}", r.notes.first().cloned().unwrap_or_default())
                });
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    ck.check(elapsed < 120.0, || format!("runtime {elapsed:.1}s exceeds 120s"));
    ck.into_report(3, "courant-fischer-weyl windows")
}

/// Brute-force oracle: minimum over coordinate chains in the eigenbasis of
/// the maximal disjoint coordinate-family value. Exponential; n <= 6 only.
fn wielandt_coordinate_oracle(values: &[f64], intervals: &[(usize, usize)]) -> f64 {
    let n = values.len();
    let k = intervals.len();
    let his: Vec<usize> = intervals.iter().map(|&(_, hi)| hi).collect();
    let lens: Vec<usize> = intervals.iter().map(|&(lo, hi)| hi - lo + 1).collect();

    fn best_assignment(
        values: &[f64],
        sets: &[u32],
        lens: &[usize],
        level: usize,
        used: u32,
    ) -> Option<f64> {
        if level == sets.len() {
            return Some(0.0);
        }
        let avail = sets[level] & !used;
        let want = lens[level];
        if (avail.count_ones() as usize) < want {
            return None;
        }
        let idx: Vec<usize> = (0..values.len()).filter(|i| avail & (1 << i) != 0).collect();
        let mut best: Option<f64> = None;
        let mut choose = vec![0usize; want];
        fn rec(
            values: &[f64],
            sets: &[u32],
            lens: &[usize],
            level: usize,
            used: u32,
            idx: &[usize],
            choose: &mut [usize],
            start: usize,
            depth: usize,
            best: &mut Option<f64>,
        ) {
            if depth == choose.len() {
                let mut mask = used;
                let mut sum = 0.0;
                for &c in choose.iter() {
                    mask |= 1 << idx[c];
                    sum += values[idx[c]];
                }
                if let Some(rest) = best_assignment(values, sets, lens, level + 1, mask) {
                    let total = sum + rest;
                    if best.map(|b| total > b).unwrap_or(true) {
                        *best = Some(total);
                    }
                }
                return;
            }
            for c in start..idx.len() {
                choose[depth] = c;
                rec(values, sets, lens, level, used, idx, choose, c + 1, depth + 1, best);
            }
        }
        rec(values, sets, lens, level, used, &idx, &mut choose, 0, 0, &mut best);
        best
    }

    let mut best_chain = f64::INFINITY;
    let total_codes = (k as u64 + 1).pow(n as u32);
    for code in 0..total_codes {
        // digit d < k: index belongs to S_{d}..S_{k-1}; d == k: unused
        let mut digits = vec![0usize; n];
        let mut c = code;
        for d in digits.iter_mut() {
            *d = (c % (k as u64 + 1)) as usize;
            c /= k as u64 + 1;
        }
        let mut sets = vec![0u32; k];
        for (i, &d) in digits.iter().enumerate() {
            for (jj, set) in sets.iter_mut().enumerate() {
                if d <= jj {
                    *set |= 1 << i;
                }
            }
        }
        if sets
            .iter()
            .zip(&his)
            .any(|(set, &hi)| (set.count_ones() as usize) < hi)
        {
            continue;
        }
        if let Some(v) = best_assignment(values, &sets, &lens, 0, 0) {
            best_chain = best_chain.min(v / n as f64);
        }
    }
    best_chain
}

/// Criterion 4: disjoint spectral windows, chains and matched certificates.
pub fn criterion_4(seed: u64) -> CriterionReport {
    let started = std::time::Instant::now();
    let mut ck = Checker::new();
    for (idx, (n, intervals)) in c4_configs().into_iter().enumerate() {
        let a = c4_matrix(seed, idx, n);
        let eig = eigh(&a).expect("converges");
        let exact: f64 = intervals
            .iter()
            .flat_map(|&(lo, hi)| eig.values[lo - 1..hi].iter())
            .sum::<f64>()
            / n as f64;
        validate_intervals(&intervals, n).expect("configs are valid");
        if n <= 6 {
            let oracle = wielandt_coordinate_oracle(&eig.values, &intervals);
            ck.check((oracle - exact).abs() <= tol::ANALYTIC, || {
                format!(
                    "config {idx}: coordinate-chain oracle {oracle:.12} misses exact {exact:.12}"
                )
            });
        }
        let r = verify_wielandt(&a, &intervals, 100, 100, derive_seed(seed, 4000 + idx as u64))
            .expect("verifier runs");
        ck.check(r.pass, || {
            format!("config {idx}: {}", r.notes.first().cloned().unwrap_or_default())
        });
        ck.check((r.exact - exact).abs() <= tol::ANALYTIC, || {
            format!("config {idx}: verifier exact value disagrees")
        });
    }
    let elapsed = started.elapsed().as_secs_f64();
    ck.check(elapsed < 120.0, || format!("runtime {elapsed:.1}s exceeds 120s"));
    ck.into_report(4, "wielandt disjoint windows")
}

/// Criterion 5: projection algebra (rank bound, family constructions,
/// certificate errors on infeasible instances).
pub fn criterion_5(seed: u64) -> CriterionReport {
    let mut ck = Checker::new();

    // rank inequality on 10^3 random pairs, exact in integer arithmetic
    for t in 0..1000usize {
        let mut rng = rng_from(derive_seed(seed, 50_000 + t as u64));
        let n = 2 + (t % 7);
        let kr = rng.gen_range(0..=n);
        let ke = rng.gen_range(0..=n);
        let r = random_projection_with::<f64, _>(n, kr, &mut rng).expect("valid");
        let e = random_projection_with::<f64, _>(n, ke, &mut rng).expect("valid");
        let cap = meet(&r, &e.complement().expect("projection")).expect("meet");
        ck.check(cap.rank() as isize >= kr as isize - ke as isize, || {
            format!("rank bound failed: n={n} rank r={kr} rank e={ke} meet={}", cap.rank())
        });
    }

    // 100 feasible nested-family instances
    for t in 0..100usize {
        let mut rng = rng_from(derive_seed(seed, 51_000 + t as u64));
        let n = 8;
        let a = random_hermitian::<f64>(n, derive_seed(seed, 52_000 + t as u64));
        let eig = eigh(&a).expect("converges");
        let k = 2 + (t % 2);
        // ascending window starts with room for each target
        let mut cuts = Vec::with_capacity(k);
        let mut lens = Vec::with_capacity(k);
        let mut lo = 1usize;
        for jj in 0..k {
            let len = 1 + (t + jj) % 2;
            let remaining: usize = (jj + 1..k).map(|x| 1 + (t + x) % 2).sum();
            let max_lo = n - remaining - len + 1;
            let pick = lo.min(max_lo) + (t % 2).min(max_lo.saturating_sub(lo.min(max_lo)));
            cuts.push(pick);
            lens.push(len);
            lo = pick + len;
        }
        let uppers: Vec<Projection<f64>> = cuts
            .iter()
            .map(|&c| Projection::from_basis(eig.basis_for(c - 1..n)))
            .collect();
        let mut seeds_fam: Vec<Projection<f64>> = Vec::new();
        for jj in 0..k - 1 {
            let window = Projection::from_basis(eig.basis_for(cuts[jj] - 1..cuts[jj] - 1 + lens[jj]));
            seeds_fam.push(
                random_subprojection(&window, lens[jj], &mut rng).expect("window has the rank"),
            );
        }
        match complete_orthogonal_family(&uppers, &seeds_fam, &lens) {
            Ok(fam) => {
                // postconditions are self-verified; spot-check the sum bound
                let sum = crate::lattice::orthogonal_sum(&fam).expect("orthogonal");
                for s in &seeds_fam {
                    ck.check(s.is_below(&sum, tol::CONSTRUCTION), || {
                        format!("instance {t}: seed projection not dominated")
                    });
                }
            }
            Err(e) => ck.check(false, || format!("feasible instance {t} rejected: {e}")),
        }
    }

    // 100 feasible matched-family instances
    for t in 0..100usize {
        let mut rng = rng_from(derive_seed(seed, 53_000 + t as u64));
        let n = 8;
        let a = random_hermitian::<f64>(n, derive_seed(seed, 54_000 + t as u64));
        let eig = eigh(&a).expect("converges");
        let intervals: Vec<(usize, usize)> =
            if t % 2 == 0 { vec![(1, 2), (5, 5)] } else { vec![(2, 2), (4, 5), (7, 8)] };
        let lens: Vec<usize> = intervals.iter().map(|&(lo, hi)| hi - lo + 1).collect();
        let descending: Vec<Projection<f64>> = intervals
            .iter()
            .map(|&(lo, _)| Projection::from_basis(eig.basis_for(lo - 1..n)))
            .collect();
        let mut ascending: Vec<Projection<f64>> = Vec::new();
        let mut prev_rank = 0usize;
        for &(_, hi) in &intervals {
            let rank = rng.gen_range(hi.max(prev_rank)..=n);
            let p = match ascending.last() {
                None => random_projection_with::<f64, _>(n, rank, &mut rng).expect("valid"),
                Some(prev) => {
                    extend_projection_randomly(prev, rank - prev_rank, &mut rng).expect("extends")
                }
            };
            prev_rank = rank;
            ascending.push(p);
        }
        match matched_families(&ascending, &descending, &lens) {
            Ok((q, qt)) => {
                let sq = crate::lattice::orthogonal_sum(&q).expect("orthogonal");
                let sqt = crate::lattice::orthogonal_sum(&qt).expect("orthogonal");
                ck.check(
                    sq.matrix().sub(sqt.matrix()).max_abs() <= tol::FAMILY_SUM,
                    || format!("instance {t}: matched family sums differ"),
                );
            }
            Err(e) => ck.check(false, || format!("feasible matched instance {t} rejected: {e}")),
        }
    }

    // infeasible instances raise certificate errors, never malformed output
    for t in 0..20usize {
        let n = 4 + (t % 4);
        // nested-family: rank(r_1) one short of the target total
        let mut basis = CMat::<f64>::zeros(n, 1);
        basis[(0, 0)] = num_complex::Complex::new(1.0, 0.0);
        let short = Projection::from_basis(basis);
        let err = complete_orthogonal_family(
            &[short.clone(), short.clone()],
            &[short.clone()],
            &[1, 1],
        );
        ck.check(
            matches!(err, Err(crate::error::LatticeError::RankHypothesis { .. })),
            || format!("infeasible nested instance {t} did not raise the certificate error"),
        );
        // matched: rank(p)+rank(r)-n short by one
        let mut rng = rng_from(derive_seed(seed, 55_000 + t as u64));
        let p = random_projection_with::<f64, _>(n, 1, &mut rng).expect("valid");
        let r = random_projection_with::<f64, _>(n, n - 1, &mut rng).expect("valid");
        let err = matched_families(&[p], &[r], &[1]);
        ck.check(
            matches!(err, Err(crate::error::LatticeError::RankHypothesis { .. })),
            || format!("infeasible matched instance {t} did not raise the certificate error"),
        );
    }

    ck.into_report(5, "projection algebra")
}

/// Criterion 6: partial-sum majorization for sums of Hermitian matrices.
pub fn criterion_6(seed: u64) -> CriterionReport {
    let mut ck = Checker::new();
    for t in 0..200usize {
        let (a, b) = c6_pair(seed, t);
        match lidskii_check(&a, &b, derive_seed(seed, 60_000 + t as u64)) {
            Ok(r) => ck.check(r.pass, || format!("pair {t}: margin {:e}", r.margin)),
            Err(e) => ck.check(false, || format!("pair {t}: {e}")),
        }
    }
    ck.into_report(6, "lidskii majorization")
}

/// Criterion 7: eigenvalue domination under the operator order.
pub fn criterion_7(seed: u64) -> CriterionReport {
    let mut ck = Checker::new();
    for t in 0..200usize {
        let (a, b) = c7_pair(seed, t, false);
        match domination_check(&a, &b, derive_seed(seed, 70_000 + t as u64)) {
            Ok(r) => {
                ck.check(r.hypothesis_met, || format!("psd pair {t} gated unexpectedly"));
                ck.check(r.pass, || format!("pair {t}: margin {:e}", r.margin));
            }
            Err(e) => ck.check(false, || format!("pair {t}: {e}")),
        }
    }
    let mut gated = 0usize;
    for t in 0..20usize {
        let (a, b) = c7_pair(seed, 1000 + t, true);
        match domination_check(&a, &b, derive_seed(seed, 71_000 + t as u64)) {
            Ok(r) => {
                if !r.hypothesis_met {
                    gated += 1;
                }
                ck.check(!r.hypothesis_met, || {
                    format!("indefinite pair {t} was not gated (min eig defect {:e})", r.margin)
                });
                ck.check(r.pass, || format!("indefinite pair {t} reported failure"));
            }
            Err(e) => ck.check(false, || format!("indefinite pair {t}: {e}")),
        }
    }
    ck.note(format!("{gated}/20 indefinite pairs gated"));
    ck.into_report(7, "operator-order domination")
}

fn measure_invariant_failures(m: &CompactMeasure<f64>, label: &str) -> (usize, Vec<String>) {
    let mut checks = 0usize;
    let mut failures = Vec::new();
    let f = cdf_of(m);
    let q = match quantile_of(&f) {
        Ok(q) => q,
        Err(e) => return (1, vec![format!("{label}: quantile construction failed: {e}")]),
    };
    let (alpha, beta) = m.support();
    let scale = 1.0 + alpha.abs().max(beta.abs());

    // round trip at non-atom grid points
    let width = (beta - alpha).max(1e-6);
    let mut grid: Vec<f64> = (0..=256)
        .map(|i| alpha - 0.1 * width + 1.2 * width * (i as f64) / 256.0)
        .collect();
    for bp in f.breakpoints() {
        grid.push(bp.t - 1e-3 * width);
        grid.push(bp.t + 1e-3 * width);
    }
    let atom_locs: Vec<f64> = m.atoms().iter().map(|a| a.location).collect();
    for &t in &grid {
        if atom_locs.iter().any(|&c| (c - t).abs() < 1e-8 * scale) {
            continue;
        }
        checks += 1;
        let lhs = q.mass_below(t);
        let rhs = f.eval(t);
        if (lhs - rhs).abs() > tol::ANALYTIC && failures.len() < 8 {
            failures.push(format!(
                "{label}: round trip off by {:e} at t={t}",
                (lhs - rhs).abs()
            ));
        }
    }

    // total integral equals the first moment
    checks += 1;
    let total = q.integral(0.0, 1.0).expect("in range");
    if (total - m.mean()).abs() > tol::ANALYTIC {
        failures.push(format!(
            "{label}: total integral {total} vs mean {} (gap {:e})",
            m.mean(),
            (total - m.mean()).abs()
        ));
    }

    // monotone coupling and range bound
    let mut prev = f64::NEG_INFINITY;
    for i in 0..=1000 {
        let s = i as f64 / 1000.0 * (1.0 - 1e-12);
        let x = q.eval(s);
        checks += 1;
        if x < prev - 1e-15 && failures.len() < 8 {
            failures.push(format!("{label}: quantile not monotone at s={s}"));
        }
        prev = x;
        if !(alpha..=beta).contains(&x) && failures.len() < 8 {
            failures.push(format!("{label}: quantile value {x} outside support"));
        }
    }
    (checks, failures)
}

fn random_mixed_measure(seed: u64) -> CompactMeasure<f64> {
    let mut rng = rng_from(seed);
    loop {
        let n_atoms = rng.gen_range(0..=4usize);
        let n_segments = rng.gen_range(0..=3usize);
        if n_atoms == 0 && n_segments == 0 {
            continue;
        }
        let mut atoms: Vec<(f64, f64)> = (0..n_atoms)
            .map(|_| (rng.gen_range(-3.0..3.0), rng.gen_range(0.1..1.0)))
            .collect();
        // lay segments left to right with positive gaps
        let mut segments: Vec<(f64, f64, f64, f64)> = Vec::new();
        let mut cursor = rng.gen_range(-3.0..-1.0);
        for _ in 0..n_segments {
            let gap = rng.gen_range(0.05..0.5);
            let width = rng.gen_range(0.1..1.2);
            let d0 = rng.gen_range(0.0..1.0);
            let d1 = rng.gen_range(0.0..1.0);
            segments.push((cursor + gap, cursor + gap + width, d0, d1));
            cursor += gap + width;
        }
        let mut total: f64 = atoms.iter().map(|a| a.1).sum();
        total += segments
            .iter()
            .map(|s| (s.2 + s.3) * 0.5 * (s.1 - s.0))
            .sum::<f64>();
        if total < 1e-6 {
            continue;
        }
        for a in atoms.iter_mut() {
            a.1 /= total;
        }
        let segments: Vec<DensitySegment<f64>> = segments
            .iter()
            .map(|&(t0, t1, d0, d1)| DensitySegment {
                t_lo: t0,
                t_hi: t1,
                d_lo: d0 / total,
                d_hi: d1 / total,
            })
            .collect();
        let atoms: Vec<Atom<f64>> = atoms
            .iter()
            .map(|&(l, w)| Atom { location: l, weight: w })
            .collect();
        match CompactMeasure::new(atoms, segments) {
            Ok(m) => return m,
            Err(_) => continue,
        }
    }
}

/// Criterion 8: quantile construction and change-of-variable invariants.
pub fn criterion_8(seed: u64) -> CriterionReport {
    let mut ck = Checker::new();

    let run = |m: &CompactMeasure<f64>, label: &str, ck: &mut Checker| {
        let (checks, failures) = measure_invariant_failures(m, label);
        ck.checks += checks;
        for f in failures {
            ck.check(false, || f.clone());
        }
    };

    let uniform = CompactMeasure::<f64>::uniform(0.0, 1.0).expect("valid");
    run(&uniform, "uniform", &mut ck);
    let semi = CompactMeasure::<f64>::semicircle(SEMICIRCLE_DEFAULT_PANELS).expect("valid");
    run(&semi, "semicircle", &mut ck);

    // atomic spectra from the matrix criteria
    for (i, a) in ensemble(seed).iter().enumerate() {
        let m = spectral_distribution(a).expect("distinct");
        run(&m, &format!("ensemble[{i}]"), &mut ck);
    }
    for n in 3..=8usize {
        let m = spectral_distribution(&c3_matrix(seed, n)).expect("distinct");
        run(&m, &format!("cf n={n}"), &mut ck);
    }
    for (idx, (n, _)) in c4_configs().into_iter().enumerate() {
        let m = spectral_distribution(&c4_matrix(seed, idx, n)).expect("distinct");
        run(&m, &format!("wielandt config {idx}"), &mut ck);
    }
    for t in 0..200usize {
        let (a, b) = c6_pair(seed, t);
        for (tag, h) in [("a", &a), ("b", &b)] {
            if let Ok(m) = spectral_distribution(h) {
                run(&m, &format!("lidskii {t}{tag}"), &mut ck);
            }
        }
        let (a, b) = c7_pair(seed, t, false);
        for (tag, h) in [("a", &a), ("b", &b)] {
            if let Ok(m) = spectral_distribution(h) {
                run(&m, &format!("domination {t}{tag}"), &mut ck);
            }
        }
    }
    // 50 random mixed measures
    for t in 0..50usize {
        let m = random_mixed_measure(derive_seed(seed, 80_000 + t as u64));
        run(&m, &format!("mixed[{t}]"), &mut ck);
    }

    // semicircle partial integral against the closed form
    let closed_form = -4.0 / (3.0 * std::f64::consts::PI);
    let q = quantile_of(&cdf_of(&semi)).expect("valid");
    let half = q.integral(0.0, 0.5).expect("in range");
    ck.check((half - closed_form).abs() < 1e-4, || {
        format!("semicircle half integral {half} vs {closed_form}")
    });
    ck.note(format!(
        "semicircle half-integral error {:e} at {} panels",
        (half - closed_form).abs(),
        SEMICIRCLE_DEFAULT_PANELS
    ));

    // discretization error halves from n to 2n
    let err_at = |n: usize| -> f64 {
        let d = discretize(&semi, n).expect("valid");
        let qd = quantile_of(&cdf_of(&d)).expect("valid");
        (qd.integral(0.0, 0.5).expect("in range") - closed_form).abs()
    };
    let mut errs = Vec::new();
    for n in [64usize, 128, 256, 512] {
        errs.push((n, err_at(n)));
    }
    for w in errs.windows(2) {
        let ((n0, e0), (_, e1)) = (w[0], w[1]);
        ck.check(e1 <= 0.5 * e0 + 1e-12, || {
            format!("discretization error did not halve from n={n0}: {e0:e} -> {e1:e}")
        });
    }
    ck.note(format!(
        "discretization errors: {}",
        errs.iter().map(|(n, e)| format!("n={n}: {e:.3e}")).collect::<Vec<_>>().join(", ")
    ));

    ck.into_report(8, "quantile construction and change of variable")
}

/// Criteria 1..=8 with per-criterion wall times.
pub fn run_criteria(seed: u64) -> SuiteReport {
    let runners: Vec<fn(u64) -> CriterionReport> = vec![
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
    ];
    let mut criteria = Vec::with_capacity(9);
    let mut timing = Vec::with_capacity(9);
    for r in runners {
        let started = std::time::Instant::now();
        criteria.push(r(seed));
        timing.push(started.elapsed().as_secs_f64());
    }
    let pass = criteria.iter().all(|c| c.pass);
    SuiteReport { seed, pass, criteria, timing_s: Some(timing) }
}

/// Full battery: criteria 1..=8 plus the determinism criterion, which
/// reruns the battery with the same seed and compares the canonical
/// serialized reports byte for byte.
pub fn run_full(seed: u64) -> SuiteReport {
    let started = std::time::Instant::now();
    let first = run_criteria(seed);
    let second = run_criteria(seed);
    let identical = first.canonical_json() == second.canonical_json();
    let mut criteria = first.criteria.clone();
    let mut timing = first.timing_s.clone().unwrap_or_default();
    criteria.push(CriterionReport {
        id: 9,
        name: "determinism".to_string(),
        pass: identical,
        checks: 1,
        failures: if identical {
            vec![]
        } else {
            vec!["rerun with the same seed produced different reports".to_string()]
        },
        details: vec!["battery rerun and compared byte for byte (timing stripped)".to_string()],
    });
    timing.push(started.elapsed().as_secs_f64());
    let pass = criteria.iter().all(|c| c.pass);
    SuiteReport { seed, pass, criteria, timing_s: Some(timing) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds_avoid_the_spectrum() {
        let values = vec![-1.0, -0.5, 0.0, 0.7];
        for t in thresholds(&values) {
            for &v in &values {
                assert!((t - v).abs() > 1e-7, "threshold {t} too close to {v}");
            }
        }
    }

    #[test]
    fn coordinate_oracle_on_diagonal_matrix() {
        // eigenvalues 1..6, windows {2} and {5}: exact (2+5)/6
        let values: Vec<f64> = (1..=6).map(|x| x as f64).collect();
        let oracle = wielandt_coordinate_oracle(&values, &[(2, 2), (5, 5)]);
        assert!((oracle - 7.0 / 6.0).abs() < 1e-12, "oracle {oracle}");
    }

    #[test]
    fn mixed_measures_are_valid() {
        for t in 0..10u64 {
            let m = random_mixed_measure(derive_seed(9, t));
            assert!((m.total_mass() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ensemble_is_deterministic_and_distinct() {
        let a = ensemble(42);
        let b = ensemble(42);
        assert_eq!(a.len(), 50);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.matrix(), y.matrix());
        }
    }
}
