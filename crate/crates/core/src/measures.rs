//! Compactly supported probability measures on the real line, their
//! left-continuous distribution functions, and right-continuous quantile
//! functions on [0,1).
//!
//! A measure is a finite list of atoms plus piecewise-linear density
//! segments. The distribution function of such a measure is piecewise
//! quadratic with jumps at atoms; its generalized inverse
//! `X(s) = inf{t : F(t) > s}` is represented exactly as plateaus (one per
//! atom) and inverse-quadratic arcs (one per density panel). All integrals
//! are evaluated in closed form, so identities like
//! `integral of X over [0,1) = mean of the measure` hold to rounding error,
//! not to a discretization tolerance.

use crate::error::MeasureError;
use crate::scalar::{neumaier_sum, Real};
use crate::tol;
use serde::{Deserialize, Serialize};

/// Point mass: `weight` at `location`, weight in (0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom<T> {
    pub location: T,
    pub weight: T,
}

/// Density panel, linear between `(t_lo, d_lo)` and `(t_hi, d_hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySegment<T> {
    pub t_lo: T,
    pub t_hi: T,
    pub d_lo: T,
    pub d_hi: T,
}

impl<T: Real> DensitySegment<T> {
    pub fn mass(&self) -> T {
        (self.d_lo + self.d_hi) * (self.t_hi - self.t_lo) * T::cast(0.5)
    }

    /// First moment of the panel: integral of t * density(t).
    pub fn moment(&self) -> T {
        let h = self.t_hi - self.t_lo;
        self.t_lo * self.mass() + h * h * (self.d_lo + T::cast(2.0) * self.d_hi) / T::cast(6.0)
    }

    fn density_at(&self, t: T) -> T {
        let w = (t - self.t_lo) / (self.t_hi - self.t_lo);
        self.d_lo + (self.d_hi - self.d_lo) * w
    }
}

/// Compactly supported probability measure: atoms + piecewise-linear
/// density segments, total mass 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CompactMeasure<T> {
    atoms: Vec<Atom<T>>,
    segments: Vec<DensitySegment<T>>,
    support: (T, T),
}

impl<T: Real> CompactMeasure<T> {
    /// Validating constructor. Atoms with exactly equal locations are
    /// merged; segments must be disjoint (touching endpoints allowed).
    /// Reports the first violation with its input index.
    pub fn new(
        atoms: Vec<Atom<T>>,
        segments: Vec<DensitySegment<T>>,
    ) -> Result<Self, MeasureError> {
        for (i, a) in atoms.iter().enumerate() {
            if !a.location.is_finite() {
                return Err(MeasureError::AtomLocation { index: i });
            }
            if !(a.weight > T::zero() && a.weight <= T::one() + tol::mass::<T>())
                || !a.weight.is_finite()
            {
                return Err(MeasureError::AtomWeight {
                    index: i,
                    weight: a.weight.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        for (i, s) in segments.iter().enumerate() {
            if !(s.t_lo.is_finite() && s.t_hi.is_finite() && s.d_lo.is_finite() && s.d_hi.is_finite())
            {
                return Err(MeasureError::SegmentValue { index: i });
            }
            if s.t_lo >= s.t_hi {
                return Err(MeasureError::SegmentOrder {
                    index: i,
                    t_lo: s.t_lo.to_f64().unwrap_or(f64::NAN),
                    t_hi: s.t_hi.to_f64().unwrap_or(f64::NAN),
                });
            }
            if s.d_lo < T::zero() || s.d_hi < T::zero() {
                return Err(MeasureError::SegmentDensity { index: i });
            }
        }
        if atoms.is_empty() && segments.is_empty() {
            return Err(MeasureError::Empty);
        }

        let mut atoms = atoms;
        atoms.sort_by(|a, b| a.location.partial_cmp(&b.location).unwrap());
        let mut merged: Vec<Atom<T>> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if last.location == a.location => last.weight += a.weight,
                _ => merged.push(a),
            }
        }

        let mut order: Vec<usize> = (0..segments.len()).collect();
        order.sort_by(|&i, &j| segments[i].t_lo.partial_cmp(&segments[j].t_lo).unwrap());
        let mut sorted_segments: Vec<DensitySegment<T>> = Vec::with_capacity(segments.len());
        for (k, &i) in order.iter().enumerate() {
            if k > 0 {
                let prev = &sorted_segments[k - 1];
                if segments[i].t_lo < prev.t_hi {
                    return Err(MeasureError::SegmentOverlap { index: i });
                }
            }
            sorted_segments.push(segments[i]);
        }

        let mass = neumaier_sum(
            merged
                .iter()
                .map(|a| a.weight)
                .chain(sorted_segments.iter().map(|s| s.mass())),
        );
        if (mass - T::one()).abs() > tol::mass::<T>() {
            return Err(MeasureError::Mass {
                total: mass.to_f64().unwrap_or(f64::NAN),
                tol: tol::MASS,
            });
        }

        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for a in &merged {
            lo = lo.min(a.location);
            hi = hi.max(a.location);
        }
        for s in &sorted_segments {
            lo = lo.min(s.t_lo);
            hi = hi.max(s.t_hi);
        }

        Ok(CompactMeasure { atoms: merged, segments: sorted_segments, support: (lo, hi) })
    }

    /// Purely atomic measure from (location, weight) pairs.
    pub fn from_atoms(atoms: Vec<Atom<T>>) -> Result<Self, MeasureError> {
        Self::new(atoms, Vec::new())
    }

    /// Unit mass at a single point.
    pub fn point_mass(location: T) -> Self {
        Self::from_atoms(vec![Atom { location, weight: T::one() }]).expect("point mass is valid")
    }

    /// Uniform distribution on [a, b].
    pub fn uniform(a: T, b: T) -> Result<Self, MeasureError> {
        let d = T::one() / (b - a);
        Self::new(Vec::new(), vec![DensitySegment { t_lo: a, t_hi: b, d_lo: d, d_hi: d }])
    }

    /// Standard semicircle distribution on [-2, 2], sampled as a
    /// piecewise-linear density on `panels` panels and renormalized to
    /// total mass exactly 1. Default panel count used by the library is
    /// [`SEMICIRCLE_DEFAULT_PANELS`].
    pub fn semicircle(panels: usize) -> Result<Self, MeasureError> {
        assert!(panels >= 2, "semicircle needs at least 2 panels");
        let two = T::cast(2.0);
        let inv_two_pi = T::one() / (two * T::cast(std::f64::consts::PI));
        let grid: Vec<T> = (0..=panels)
            .map(|i| T::cast(-2.0) + T::cast(4.0) * T::cast(i as f64) / T::cast(panels as f64))
            .collect();
        let density: Vec<T> = grid
            .iter()
            .map(|&t| {
                let r = (T::cast(4.0) - t * t).max(T::zero());
                r.sqrt() * inv_two_pi
            })
            .collect();
        let mut segments: Vec<DensitySegment<T>> = (0..panels)
            .map(|i| DensitySegment {
                t_lo: grid[i],
                t_hi: grid[i + 1],
                d_lo: density[i],
                d_hi: density[i + 1],
            })
            .collect();
        let raw_mass = neumaier_sum(segments.iter().map(|s| s.mass()));
        let scale = T::one() / raw_mass;
        for s in segments.iter_mut() {
            s.d_lo = s.d_lo * scale;
            s.d_hi = s.d_hi * scale;
        }
        Self::new(Vec::new(), segments)
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    pub fn segments(&self) -> &[DensitySegment<T>] {
        &self.segments
    }

    /// Support bounds (alpha, beta).
    pub fn support(&self) -> (T, T) {
        self.support
    }

    pub fn total_mass(&self) -> T {
        neumaier_sum(
            self.atoms
                .iter()
                .map(|a| a.weight)
                .chain(self.segments.iter().map(|s| s.mass())),
        )
    }

    /// First moment, computed directly from atoms and segments.
    pub fn mean(&self) -> T {
        neumaier_sum(
            self.atoms
                .iter()
                .map(|a| a.location * a.weight)
                .chain(self.segments.iter().map(|s| s.moment())),
        )
    }
}

/// One breakpoint of a distribution function: left and right limits at `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfBreakpoint<T> {
    pub t: T,
    pub left: T,
    pub right: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum CdfPiece<T> {
    Flat,
    /// Density linear from `d_lo` to `d_hi` across the interval.
    Quad { d_lo: T, d_hi: T },
}

/// Left-continuous non-decreasing distribution function with an explicit
/// breakpoint list; `eval(t)` returns the measure of `(-inf, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cdf<T> {
    breakpoints: Vec<CdfBreakpoint<T>>,
    pieces: Vec<CdfPiece<T>>,
    support: (T, T),
}

impl<T: Real> Cdf<T> {
    pub fn breakpoints(&self) -> &[CdfBreakpoint<T>] {
        &self.breakpoints
    }

    pub fn support(&self) -> (T, T) {
        self.support
    }

    /// mu((-inf, t)); left-continuous by construction.
    pub fn eval(&self, t: T) -> T {
        let bps = &self.breakpoints;
        if t <= bps[0].t {
            return T::zero();
        }
        let last = bps.len() - 1;
        if t > bps[last].t {
            return T::one().min(bps[last].right);
        }
        // Last breakpoint with bps[i].t < t; t may equal bps[i+1].t.
        let i = bps.partition_point(|bp| bp.t < t) - 1;
        if bps[i + 1].t == t {
            return bps[i + 1].left;
        }
        match self.pieces[i] {
            CdfPiece::Flat => bps[i].right,
            CdfPiece::Quad { d_lo, d_hi } => {
                let h = bps[i + 1].t - bps[i].t;
                let dt = t - bps[i].t;
                let c = (d_hi - d_lo) / h;
                bps[i].right + d_lo * dt + c * dt * dt * T::cast(0.5)
            }
        }
    }

    /// Internal consistency: monotone values, left <= right, ends at 0 and 1.
    pub fn validate(&self) -> Result<(), MeasureError> {
        let eps = tol::mass::<T>();
        let mut prev = T::zero();
        for bp in &self.breakpoints {
            if bp.left < prev - eps || bp.right < bp.left - eps {
                return Err(MeasureError::CdfIncomplete {
                    top: bp.right.to_f64().unwrap_or(f64::NAN),
                });
            }
            prev = bp.right;
        }
        let first = self.breakpoints.first().unwrap();
        let last = self.breakpoints.last().unwrap();
        if first.left.abs() > eps || (last.right - T::one()).abs() > eps {
            return Err(MeasureError::CdfIncomplete {
                top: last.right.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }
}

/// Distribution function of a measure.
pub fn cdf_of<T: Real>(measure: &CompactMeasure<T>) -> Cdf<T> {
    // Split segments at interior atom locations so each piece is either a
    // single density panel or flat, with atoms only at piece boundaries.
    let mut panels: Vec<DensitySegment<T>> = Vec::new();
    for s in measure.segments() {
        let mut cur = *s;
        for a in measure.atoms() {
            if a.location > cur.t_lo && a.location < cur.t_hi {
                let d_mid = cur.density_at(a.location);
                panels.push(DensitySegment {
                    t_lo: cur.t_lo,
                    t_hi: a.location,
                    d_lo: cur.d_lo,
                    d_hi: d_mid,
                });
                cur = DensitySegment {
                    t_lo: a.location,
                    t_hi: cur.t_hi,
                    d_lo: d_mid,
                    d_hi: cur.d_hi,
                };
            }
        }
        panels.push(cur);
    }

    let mut ts: Vec<T> = Vec::new();
    for a in measure.atoms() {
        ts.push(a.location);
    }
    for p in &panels {
        ts.push(p.t_lo);
        ts.push(p.t_hi);
    }
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ts.dedup();

    let atom_weight = |t: T| -> T {
        measure
            .atoms()
            .iter()
            .find(|a| a.location == t)
            .map(|a| a.weight)
            .unwrap_or_else(T::zero)
    };
    let panel_starting_at = |t: T| -> Option<&DensitySegment<T>> {
        panels.iter().find(|p| p.t_lo == t)
    };

    let mut breakpoints: Vec<CdfBreakpoint<T>> = Vec::with_capacity(ts.len());
    let mut pieces: Vec<CdfPiece<T>> = Vec::with_capacity(ts.len().saturating_sub(1));
    let mut acc = T::zero();
    for (idx, &t) in ts.iter().enumerate() {
        let left = acc;
        let right = left + atom_weight(t);
        breakpoints.push(CdfBreakpoint { t, left, right });
        acc = right;
        if idx + 1 < ts.len() {
            match panel_starting_at(t) {
                Some(p) => {
                    pieces.push(CdfPiece::Quad { d_lo: p.d_lo, d_hi: p.d_hi });
                    acc = acc + p.mass();
                }
                None => pieces.push(CdfPiece::Flat),
            }
        }
    }

    Cdf { breakpoints, pieces, support: measure.support() }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum QuantilePiece<T> {
    /// Plateau at `x` (an atom of the measure).
    Const { x: T },
    /// Exact inverse of a quadratic CDF piece over one density panel.
    Arc { t0: T, t1: T, d0: T, d1: T },
}

impl<T: Real> QuantilePiece<T> {
    fn x_at(&self, u: T) -> T {
        match *self {
            QuantilePiece::Const { x } => x,
            QuantilePiece::Arc { t0, t1, d0, d1 } => {
                if u <= T::zero() {
                    return t0;
                }
                let h = t1 - t0;
                let c = (d1 - d0) / h;
                let disc = (d0 * d0 + T::cast(2.0) * c * u).max(T::zero());
                let denom = d0 + disc.sqrt();
                if denom <= T::zero() {
                    return t0;
                }
                (t0 + T::cast(2.0) * u / denom).min(t1)
            }
        }
    }

    /// Integral of X over [ua, ub] in local coordinates.
    fn integral(&self, ua: T, ub: T) -> T {
        match *self {
            QuantilePiece::Const { x } => x * (ub - ua),
            QuantilePiece::Arc { t0, t1, d0, d1 } => {
                let h = t1 - t0;
                let c = (d1 - d0) / h;
                let xa = self.x_at(ua);
                let xb = self.x_at(ub);
                // integral of t * rho(t) over [xa, xb], rho(t) = d0 + c (t - t0)
                let lin = d0 - c * t0;
                let sq = (xb + xa) * (xb - xa) * T::cast(0.5);
                let cub = (xb - xa) * (xb * xb + xa * xb + xa * xa) / T::cast(3.0);
                lin * sq + c * cub
            }
        }
    }

    /// Mass of {X < t} inside this piece (piece length `len`).
    fn mass_below(&self, t: T, len: T) -> T {
        match *self {
            QuantilePiece::Const { x } => {
                if x < t {
                    len
                } else {
                    T::zero()
                }
            }
            QuantilePiece::Arc { t0, t1, d0, d1 } => {
                if t <= t0 {
                    T::zero()
                } else if t >= t1 {
                    len
                } else {
                    let h = t1 - t0;
                    let c = (d1 - d0) / h;
                    let dt = t - t0;
                    (d0 * dt + c * dt * dt * T::cast(0.5)).min(len)
                }
            }
        }
    }

    fn fully_below(&self, t: T) -> bool {
        match *self {
            QuantilePiece::Const { x } => x < t,
            QuantilePiece::Arc { t1, .. } => t1 <= t,
        }
    }
}

/// Right-continuous non-decreasing quantile function on [0,1), the
/// generalized inverse `X(s) = inf{t : F(t) > s}` of a distribution function.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantile<T> {
    /// Piece boundaries in s; first is 0, last is 1.
    cuts: Vec<T>,
    pieces: Vec<QuantilePiece<T>>,
    support: (T, T),
}

impl<T: Real> Quantile<T> {
    /// X(s). Arguments below 0 clamp to 0; arguments at or above 1 return
    /// the upper support bound.
    pub fn eval(&self, s: T) -> T {
        if s >= T::one() {
            return self.support.1;
        }
        let s = s.max(T::zero());
        // Right continuity: s on a cut belongs to the piece starting there.
        let j = match self.cuts.partition_point(|&c| c <= s) {
            0 => 0,
            k => (k - 1).min(self.pieces.len() - 1),
        };
        self.pieces[j].x_at(s - self.cuts[j])
    }

    /// Piece boundaries with their quantile values: (s, X(s)).
    pub fn breakpoints(&self) -> Vec<(T, T)> {
        self.cuts[..self.cuts.len() - 1]
            .iter()
            .zip(&self.pieces)
            .map(|(&s, p)| (s, p.x_at(T::zero())))
            .collect()
    }

    pub fn support(&self) -> (T, T) {
        self.support
    }

    /// Exact integral of X over [s0, s1).
    pub fn integral(&self, s0: T, s1: T) -> Result<T, MeasureError> {
        if s0 > s1 {
            return Err(MeasureError::BadIntegrationRange {
                s0: s0.to_f64().unwrap_or(f64::NAN),
                s1: s1.to_f64().unwrap_or(f64::NAN),
            });
        }
        if s0 < T::zero() || s1 > T::one() {
            return Err(MeasureError::BadUnitArgument {
                value: if s0 < T::zero() { s0 } else { s1 }.to_f64().unwrap_or(f64::NAN),
            });
        }
        let mut terms: Vec<T> = Vec::new();
        for (j, piece) in self.pieces.iter().enumerate() {
            let c0 = self.cuts[j];
            let c1 = self.cuts[j + 1];
            let lo = s0.max(c0);
            let hi = s1.min(c1);
            if hi > lo {
                terms.push(piece.integral(lo - c0, hi - c0));
            }
        }
        Ok(neumaier_sum(terms))
    }

    /// Lebesgue measure of {s : X(s) < t}, the pushforward check; computed
    /// from the piece structure, not by sampling.
    pub fn mass_below(&self, t: T) -> T {
        let j = self.pieces.partition_point(|p| p.fully_below(t));
        if j == self.pieces.len() {
            return T::one();
        }
        let len = self.cuts[j + 1] - self.cuts[j];
        self.cuts[j] + self.pieces[j].mass_below(t, len)
    }

    /// Step quantile of an atomic distribution given ascending values with
    /// equal weights: X(s) = values[floor(s * len)].
    pub fn from_sorted_values(values: &[T]) -> Self {
        assert!(!values.is_empty());
        debug_assert!(values.windows(2).all(|w| w[0] <= w[1]), "values must ascend");
        let n = values.len();
        let cuts: Vec<T> = (0..=n)
            .map(|j| {
                if j == n {
                    T::one()
                } else {
                    T::cast(j as f64) / T::cast(n as f64)
                }
            })
            .collect();
        let pieces = values.iter().map(|&x| QuantilePiece::Const { x }).collect();
        Quantile { cuts, pieces, support: (values[0], values[n - 1]) }
    }

    pub fn is_step(&self) -> bool {
        self.pieces.iter().all(|p| matches!(p, QuantilePiece::Const { .. }))
    }

    /// Piece boundaries in s, from 0 to 1 inclusive.
    pub fn cuts(&self) -> &[T] {
        &self.cuts
    }
}

/// Pointwise sum of two step quantiles, built by merging their breakpoint
/// lists; defined only for piecewise-constant quantiles (atomic measures).
pub fn sum_step_quantiles<T: Real>(x: &Quantile<T>, y: &Quantile<T>) -> Option<Quantile<T>> {
    if !x.is_step() || !y.is_step() {
        return None;
    }
    let mut cuts: Vec<T> = x.cuts.iter().chain(y.cuts.iter()).copied().collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let pieces: Vec<QuantilePiece<T>> = cuts[..cuts.len() - 1]
        .iter()
        .map(|&s| QuantilePiece::Const { x: x.eval(s) + y.eval(s) })
        .collect();
    let support = (x.support.0 + y.support.0, x.support.1 + y.support.1);
    Some(Quantile { cuts, pieces, support })
}

/// Quantile function of a distribution function.
pub fn quantile_of<T: Real>(cdf: &Cdf<T>) -> Result<Quantile<T>, MeasureError> {
    cdf.validate()?;
    let top = cdf.breakpoints().last().unwrap().right;
    if (top - T::one()).abs() > tol::mass::<T>() {
        return Err(MeasureError::CdfIncomplete { top: top.to_f64().unwrap_or(f64::NAN) });
    }

    let mut cuts: Vec<T> = vec![T::zero()];
    let mut pieces: Vec<QuantilePiece<T>> = Vec::new();
    let push = |pieces: &mut Vec<QuantilePiece<T>>, cuts: &mut Vec<T>, end: T, piece| {
        let start = *cuts.last().unwrap();
        if end > start {
            pieces.push(piece);
            cuts.push(end);
        }
    };
    let bps = cdf.breakpoints();
    for (i, bp) in bps.iter().enumerate() {
        if bp.right > bp.left {
            push(&mut pieces, &mut cuts, bp.right, QuantilePiece::Const { x: bp.t });
        }
        if i + 1 < bps.len() {
            if let CdfPiece::Quad { d_lo, d_hi } = cdf.pieces[i] {
                let next_left = bps[i + 1].left;
                push(
                    &mut pieces,
                    &mut cuts,
                    next_left,
                    QuantilePiece::Arc { t0: bp.t, t1: bps[i + 1].t, d0: d_lo, d1: d_hi },
                );
            }
        }
    }
    // Absorb the <= mass-tolerance gap at the top into the last piece.
    *cuts.last_mut().unwrap() = T::one();
    Ok(Quantile { cuts, pieces, support: cdf.support() })
}

/// m({s : X(s) < t}) on a grid; identical to evaluating the distribution
/// function the quantile came from.
pub fn cdf_from_quantile<T: Real>(q: &Quantile<T>, t_grid: &[T]) -> Vec<T> {
    t_grid.iter().map(|&t| q.mass_below(t)).collect()
}

/// Integral of X over [s0, s1).
pub fn partial_quantile_integral<T: Real>(
    q: &Quantile<T>,
    s0: T,
    s1: T,
) -> Result<T, MeasureError> {
    q.integral(s0, s1)
}

/// Midpoint discretization: n atoms of weight 1/n at X((j + 1/2)/n).
/// Atoms landing on the same plateau merge. The quantile of the result
/// converges to X in L^1 as n grows when the measure has no atoms.
pub fn discretize<T: Real>(
    measure: &CompactMeasure<T>,
    n: usize,
) -> Result<CompactMeasure<T>, MeasureError> {
    assert!(n >= 1);
    let q = quantile_of(&cdf_of(measure))?;
    let w = T::one() / T::cast(n as f64);
    let atoms: Vec<Atom<T>> = (0..n)
        .map(|j| {
            let s = (T::cast(j as f64) + T::cast(0.5)) * w;
            Atom { location: q.eval(s), weight: w }
        })
        .collect();
    CompactMeasure::from_atoms(atoms)
}

#[derive(Serialize, Deserialize)]
struct MeasureJson {
    #[serde(default)]
    atoms: Vec<(f64, f64)>,
    #[serde(default)]
    segments: Vec<(f64, f64, f64, f64)>,
}

/// Parse the JSON measure format
/// `{"atoms": [[loc, weight], ...], "segments": [[t_lo, t_hi, d_lo, d_hi], ...]}`.
pub fn measure_from_json<T: Real>(text: &str) -> Result<CompactMeasure<T>, MeasureError> {
    let raw: MeasureJson =
        serde_json::from_str(text).map_err(|e| MeasureError::Json(e.to_string()))?;
    let atoms = raw
        .atoms
        .iter()
        .map(|&(l, w)| Atom { location: T::cast(l), weight: T::cast(w) })
        .collect();
    let segments = raw
        .segments
        .iter()
        .map(|&(t0, t1, d0, d1)| DensitySegment {
            t_lo: T::cast(t0),
            t_hi: T::cast(t1),
            d_lo: T::cast(d0),
            d_hi: T::cast(d1),
        })
        .collect();
    CompactMeasure::new(atoms, segments)
}

/// Serialize a measure to the JSON measure format.
pub fn measure_to_json<T: Real>(measure: &CompactMeasure<T>) -> String {
    let raw = MeasureJson {
        atoms: measure
            .atoms()
            .iter()
            .map(|a| (a.location.to_f64().unwrap(), a.weight.to_f64().unwrap()))
            .collect(),
        segments: measure
            .segments()
            .iter()
            .map(|s| {
                (
                    s.t_lo.to_f64().unwrap(),
                    s.t_hi.to_f64().unwrap(),
                    s.d_lo.to_f64().unwrap(),
                    s.d_hi.to_f64().unwrap(),
                )
            })
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("measure serializes")
}

/// Default panel count for the semicircle generator.
pub const SEMICIRCLE_DEFAULT_PANELS: usize = 4096;

#[cfg(test)]
mod tests {
    use super::*;

    fn q_of<T: Real>(m: &CompactMeasure<T>) -> Quantile<T> {
        quantile_of(&cdf_of(m)).unwrap()
    }

    #[test]
    fn point_mass_cdf_steps_at_location() {
        let m = CompactMeasure::<f64>::point_mass(0.0);
        let f = cdf_of(&m);
        assert_eq!(f.eval(-1.0), 0.0);
        assert_eq!(f.eval(0.0), 0.0);
        assert_eq!(f.eval(1e-12), 1.0);
        assert_eq!(f.eval(5.0), 1.0);
    }

    #[test]
    fn uniform_cdf_is_identity_on_unit_interval() {
        let m = CompactMeasure::<f64>::uniform(0.0, 1.0).unwrap();
        let f = cdf_of(&m);
        for t in [0.0, 0.25, 0.3, 0.5, 0.99, 1.0] {
            assert!((f.eval(t) - t).abs() < 1e-15, "F({t}) = {}", f.eval(t));
        }
    }

    #[test]
    fn two_atom_cdf_left_continuity() {
        let m = CompactMeasure::<f64>::from_atoms(vec![
            Atom { location: 0.0, weight: 0.5 },
            Atom { location: 1.0, weight: 0.5 },
        ])
        .unwrap();
        let f = cdf_of(&m);
        assert_eq!(f.eval(0.5), 0.5);
        assert_eq!(f.eval(1.0), 0.5);
        assert_eq!(f.eval(1.0 + 1e-9), 1.0);
    }

    #[test]
    fn uniform_quantile_is_identity() {
        let m = CompactMeasure::<f64>::uniform(0.0, 1.0).unwrap();
        let q = q_of(&m);
        for s in [0.0, 0.1, 0.25, 0.5, 0.77, 0.999] {
            assert!((q.eval(s) - s).abs() < 1e-15);
        }
    }

    #[test]
    fn point_mass_quantile_is_constant() {
        let m = CompactMeasure::<f64>::point_mass(3.5);
        let q = q_of(&m);
        for s in [0.0, 0.2, 0.9999] {
            assert_eq!(q.eval(s), 3.5);
        }
    }

    #[test]
    fn two_atom_quantile_steps_at_half() {
        let m = CompactMeasure::<f64>::from_atoms(vec![
            Atom { location: 0.0, weight: 0.5 },
            Atom { location: 1.0, weight: 0.5 },
        ])
        .unwrap();
        let q = q_of(&m);
        assert_eq!(q.eval(0.0), 0.0);
        assert_eq!(q.eval(0.49), 0.0);
        assert_eq!(q.eval(0.5), 1.0); // right continuity at the cut
        assert_eq!(q.eval(0.99), 1.0);
    }

    #[test]
    fn pushforward_of_uniform_quantile() {
        let m = CompactMeasure::<f64>::uniform(0.0, 1.0).unwrap();
        let q = q_of(&m);
        let vals = cdf_from_quantile(&q, &[0.3]);
        assert!((vals[0] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn pushforward_of_constant_quantile_strict_inequality() {
        let m = CompactMeasure::<f64>::point_mass(2.0);
        let q = q_of(&m);
        let vals = cdf_from_quantile(&q, &[2.0, 2.0 + 1e-12]);
        assert_eq!(vals[0], 0.0);
        assert_eq!(vals[1], 1.0);
    }

    #[test]
    fn pushforward_of_two_step_quantile() {
        let m = CompactMeasure::<f64>::from_atoms(vec![
            Atom { location: 0.0, weight: 0.5 },
            Atom { location: 1.0, weight: 0.5 },
        ])
        .unwrap();
        let q = q_of(&m);
        assert_eq!(cdf_from_quantile(&q, &[1.0])[0], 0.5);
    }

    #[test]
    fn triangle_area_partial_integral() {
        let m = CompactMeasure::<f64>::uniform(0.0, 1.0).unwrap();
        let q = q_of(&m);
        let v = partial_quantile_integral(&q, 0.0, 0.5).unwrap();
        assert!((v - 0.125).abs() < 1e-15);
    }

    #[test]
    fn spectral_three_atom_partial_integral() {
        // diag(1,2,3) spectral measure: integral over [0, 2/3] is (1+2)/3.
        let m = CompactMeasure::<f64>::from_atoms(vec![
            Atom { location: 1.0, weight: 1.0 / 3.0 },
            Atom { location: 2.0, weight: 1.0 / 3.0 },
            Atom { location: 3.0, weight: 1.0 / 3.0 },
        ])
        .unwrap();
        let q = q_of(&m);
        let v = partial_quantile_integral(&q, 0.0, 2.0 / 3.0).unwrap();
        assert!((v - 1.0).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn linear_density_mean_is_exact() {
        // density 2t on [0,1]: mean = 2/3, quantile = sqrt(s)
        let m = CompactMeasure::<f64>::new(
            Vec::new(),
            vec![DensitySegment { t_lo: 0.0, t_hi: 1.0, d_lo: 0.0, d_hi: 2.0 }],
        )
        .unwrap();
        assert!((m.mean() - 2.0 / 3.0).abs() < 1e-15);
        let q = q_of(&m);
        assert!((q.eval(0.25) - 0.5).abs() < 1e-15);
        let total = partial_quantile_integral(&q, 0.0, 1.0).unwrap();
        assert!((total - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn discretize_uniform_midpoints() {
        let m = CompactMeasure::<f64>::uniform(0.0, 1.0).unwrap();
        let d = discretize(&m, 2).unwrap();
        let atoms = d.atoms();
        assert_eq!(atoms.len(), 2);
        assert!((atoms[0].location - 0.25).abs() < 1e-15);
        assert!((atoms[1].location - 0.75).abs() < 1e-15);
        assert!((atoms[0].weight - 0.5).abs() < 1e-15);
    }

    #[test]
    fn discretize_point_mass_merges_to_one_atom() {
        let m = CompactMeasure::<f64>::point_mass(1.5);
        let d = discretize(&m, 7).unwrap();
        assert_eq!(d.atoms().len(), 1);
        assert!((d.atoms()[0].weight - 1.0).abs() < 1e-12);
    }

    #[test]
    fn semicircle_partial_integral_close_to_closed_form() {
        let m = CompactMeasure::<f64>::semicircle(4096).unwrap();
        let q = q_of(&m);
        let v = partial_quantile_integral(&q, 0.0, 0.5).unwrap();
        let exact = -4.0 / (3.0 * std::f64::consts::PI);
        assert!((v - exact).abs() < 1e-4, "got {v}, want {exact}");
        // total integral = mean = 0 by symmetry
        let total = partial_quantile_integral(&q, 0.0, 1.0).unwrap();
        assert!(total.abs() < 1e-12);
    }

    #[test]
    fn discretize_semicircle_symmetric_atoms() {
        let m = CompactMeasure::<f64>::semicircle(4096).unwrap();
        let d = discretize(&m, 4).unwrap();
        let a = d.atoms();
        assert_eq!(a.len(), 4);
        assert!((a[0].location + a[3].location).abs() < 1e-9);
        assert!((a[1].location + a[2].location).abs() < 1e-9);
    }

    #[test]
    fn mass_validation_names_defect() {
        let err = CompactMeasure::<f64>::from_atoms(vec![Atom { location: 0.0, weight: 0.5 }])
            .unwrap_err();
        assert!(matches!(err, MeasureError::Mass { .. }));
        let err = CompactMeasure::<f64>::new(
            vec![Atom { location: 0.0, weight: -0.5 }],
            Vec::new(),
        )
        .unwrap_err();
        assert!(matches!(err, MeasureError::AtomWeight { index: 0, .. }));
    }

    #[test]
    fn overlapping_segments_rejected_with_index() {
        let err = CompactMeasure::<f64>::new(
            Vec::new(),
            vec![
                DensitySegment { t_lo: 0.0, t_hi: 1.0, d_lo: 0.5, d_hi: 0.5 },
                DensitySegment { t_lo: 0.5, t_hi: 1.5, d_lo: 0.5, d_hi: 0.5 },
            ],
        )
        .unwrap_err();
        assert!(matches!(err, MeasureError::SegmentOverlap { index: 1 }));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"atoms": [[0.0, 0.25]], "segments": [[1.0, 2.0, 0.75, 0.75]]}"#;
        let m: CompactMeasure<f64> = measure_from_json(text).unwrap();
        assert_eq!(m.atoms().len(), 1);
        assert_eq!(m.segments().len(), 1);
        let again: CompactMeasure<f64> = measure_from_json(&measure_to_json(&m)).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn json_reports_first_violation() {
        let text = r#"{"atoms": [[0.0, 0.5], [1.0, 2.0]]}"#;
        let err = measure_from_json::<f64>(text).unwrap_err();
        assert!(matches!(err, MeasureError::AtomWeight { index: 1, .. }));
    }

    #[test]
    fn mixed_measure_atom_inside_segment() {
        // atom 1/2 at 0.5 inside a uniform density of mass 1/2 on [0,1]
        let m = CompactMeasure::<f64>::new(
            vec![Atom { location: 0.5, weight: 0.5 }],
            vec![DensitySegment { t_lo: 0.0, t_hi: 1.0, d_lo: 0.5, d_hi: 0.5 }],
        )
        .unwrap();
        let f = cdf_of(&m);
        assert!((f.eval(0.5) - 0.25).abs() < 1e-15);
        assert!((f.eval(0.5 + 1e-12) - 0.75).abs() < 1e-12);
        let q = q_of(&m);
        // plateau of width 1/2 at x = 0.5 spanning s in [0.25, 0.75)
        assert_eq!(q.eval(0.3), 0.5);
        assert_eq!(q.eval(0.74), 0.5);
        let total = partial_quantile_integral(&q, 0.0, 1.0).unwrap();
        assert!((total - m.mean()).abs() < 1e-14);
    }

    #[test]
    fn f32_lane_smoke() {
        let m = CompactMeasure::<f32>::uniform(0.0, 1.0).unwrap();
        let q = quantile_of(&cdf_of(&m)).unwrap();
        assert!((q.eval(0.5) - 0.5).abs() < 1e-6);
    }
}
