//! Numerical checks: vanishing and interpolation on lattice points, growth
//! profiles, F² quadrature, truncated reconstruction and the Bargmann bridge.
//!
//! Grid scans run in parallel over the first real coordinate. Partial results
//! are gathered in index order and combined sequentially, so every reduction
//! is independent of the thread count.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::builders::{BoundFn, LatticeFn};
use crate::cjson::{complex, complex_vec};
use crate::error::{domain, Error, Result};
use crate::lattice::ComplexLattice;
use crate::weierstrass::{log_normalized_magnitude, norm_sqr, EntireFn, LogComplex, SigmaEvaluator};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VanishingReport {
    pub lattice_radius: f64,
    pub checked_points: usize,
    pub max_normalized_residual: f64,
    #[serde(with = "complex_vec")]
    pub worst_point: Vec<Complex64>,
}

impl VanishingReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_normalized_residual < tol
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterpolationReport {
    pub lattice_radius: f64,
    pub checked_points: usize,
    pub origin_value: LogComplex,
    /// Largest `|F(λ)| e^{-π|λ|²/2} / |F(0)|` over `λ ≠ 0`.
    pub max_offorigin_residual: f64,
    /// The same without dividing by `|F(0)|`.
    pub max_offorigin_absolute: f64,
    #[serde(with = "complex_vec")]
    pub worst_point: Vec<Complex64>,
}

impl InterpolationReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_offorigin_residual < tol
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthProfile {
    pub radii: Vec<f64>,
    /// Sup of `|F(z)| e^{-π|z|²/2}` over grid points with `r - step ≤ |z| ≤ r`.
    pub sup_normalized: Vec<f64>,
    pub grid_step: f64,
}

impl GrowthProfile {
    pub fn max(&self) -> f64 {
        self.sup_normalized.iter().copied().fold(0.0, f64::max)
    }

    /// Profile value at radius `r`, if `r` was sampled.
    pub fn at(&self, r: f64) -> Option<f64> {
        self.radii.iter().position(|x| (x - r).abs() < 1e-12).map(|i| self.sup_normalized[i])
    }
}

fn check_radius(radius: f64) -> Result<()> {
    if !(radius > 0.0 && radius.is_finite()) {
        return domain(format!("radius must be positive and finite, got {radius}"));
    }
    Ok(())
}

fn check_step(step: f64) -> Result<()> {
    if !(step > 0.0 && step <= 0.25) {
        return domain(format!("grid step must lie in (0, 0.25], got {step}"));
    }
    Ok(())
}

fn check_dims<F: EntireFn + ?Sized>(f: &F, lat: &ComplexLattice) -> Result<()> {
    if f.dim() != lat.dim() {
        return domain(format!("function has d = {} but lattice has d = {}", f.dim(), lat.dim()));
    }
    Ok(())
}

/// Log normalized magnitudes at the given points, evaluated in parallel and
/// returned in input order.
fn log_values<F: EntireFn + ?Sized>(f: &F, pts: &[Vec<Complex64>]) -> Vec<f64> {
    pts.par_iter().map(|p| log_normalized_magnitude(f, p)).collect()
}

/// Index of the first maximum.
fn argmax(v: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, x) in v.iter().enumerate() {
        if best.is_none_or(|b| *x > v[b]) {
            best = Some(i);
        }
    }
    best
}

/// Normalized magnitude at every lattice point with `|λ| ≤ radius`.
pub fn check_vanishing<F: EntireFn + ?Sized>(f: &F, lat: &ComplexLattice, radius: f64) -> Result<VanishingReport> {
    check_radius(radius)?;
    check_dims(f, lat)?;
    let pts = lat.lattice_points_in_ball(radius);
    let vals = log_values(f, &pts);
    let i = argmax(&vals).expect("the origin is always in the ball");
    Ok(VanishingReport {
        lattice_radius: radius,
        checked_points: pts.len(),
        max_normalized_residual: vals[i].exp(),
        worst_point: pts[i].clone(),
    })
}

/// Origin value and normalized magnitudes at the nonzero lattice points.
pub fn check_interpolating<F: EntireFn + ?Sized>(
    f: &F,
    lat: &ComplexLattice,
    radius: f64,
) -> Result<InterpolationReport> {
    check_radius(radius)?;
    check_dims(f, lat)?;
    let origin = vec![Complex64::new(0.0, 0.0); f.dim()];
    let origin_value = f.eval(&origin);
    if origin_value.is_zero() {
        return Err(Error::OriginValueZero);
    }
    let pts: Vec<Vec<Complex64>> =
        lat.lattice_points_in_ball(radius).into_iter().filter(|p| norm_sqr(p) > 0.0).collect();
    let vals = log_values(f, &pts);
    let (abs, worst) = match argmax(&vals) {
        Some(i) => (vals[i].exp(), pts[i].clone()),
        None => (0.0, origin),
    };
    Ok(InterpolationReport {
        lattice_radius: radius,
        checked_points: pts.len() + 1,
        origin_value,
        max_offorigin_residual: (vals.iter().copied().fold(f64::NEG_INFINITY, f64::max) - origin_value.log_mag).exp(),
        max_offorigin_absolute: abs,
        worst_point: worst,
    })
}

/// Where grid points sit: at `m·step` or at cell centres `(m + 1/2)·step`.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Placement {
    Node,
    Centre,
}

impl Placement {
    /// Squared distance key: `|x|² = key·unit` with `unit = step²` or `step²/4`.
    fn key(self, m: i64) -> u64 {
        match self {
            Placement::Node => (m * m) as u64,
            Placement::Centre => ((2 * m + 1) * (2 * m + 1)) as u64,
        }
    }

    fn coord(self, m: i64, step: f64) -> f64 {
        match self {
            Placement::Node => m as f64 * step,
            Placement::Centre => (m as f64 + 0.5) * step,
        }
    }

    fn unit(self, step: f64) -> f64 {
        match self {
            Placement::Node => step * step,
            Placement::Centre => step * step / 4.0,
        }
    }

    /// Smallest range of `m` containing every index with `key(m) ≤ hi`.
    fn range(self, hi: u64) -> std::ops::RangeInclusive<i64> {
        let r = (hi as f64).sqrt() as i64 + 1;
        -r..=r
    }
}

fn key_bounds(lo_norm: f64, hi_norm: f64, unit: f64) -> (u64, u64) {
    let lo = if lo_norm <= 0.0 { 0 } else { (lo_norm / unit - 1e-9).ceil().max(0.0) as u64 };
    let hi = (hi_norm / unit + 1e-9).floor().max(0.0) as u64;
    (lo, hi)
}

/// Visits every integer vector in `Z^n` whose key lies in `[lo, hi]`.
/// Work is split on the first index; one accumulator per first index is
/// returned in increasing index order.
fn scan<A, I, V>(n: usize, place: Placement, lo: u64, hi: u64, init: I, visit: V) -> Vec<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &[i64]) + Sync,
{
    fn rec<A>(
        place: Placement,
        m: &mut Vec<i64>,
        n: usize,
        partial: u64,
        lo: u64,
        hi: u64,
        acc: &mut A,
        visit: &(impl Fn(&mut A, &[i64]) + Sync),
    ) {
        if m.len() == n {
            if partial >= lo {
                visit(acc, m);
            }
            return;
        }
        for x in place.range(hi - partial) {
            let k = partial + place.key(x);
            if k > hi {
                continue;
            }
            m.push(x);
            rec(place, m, n, k, lo, hi, acc, visit);
            m.pop();
        }
    }
    let firsts: Vec<i64> = place.range(hi).filter(|x| place.key(*x) <= hi).collect();
    firsts
        .par_iter()
        .map(|&x0| {
            let mut acc = init();
            let mut m = Vec::with_capacity(n);
            m.push(x0);
            rec(place, &mut m, n, place.key(x0), lo, hi, &mut acc, &visit);
            acc
        })
        .collect()
}

fn to_point(place: Placement, m: &[i64], step: f64) -> Vec<Complex64> {
    m.chunks(2).map(|p| Complex64::new(place.coord(p[0], step), place.coord(p[1], step))).collect()
}

fn default_radii(max_radius: f64) -> Vec<f64> {
    let mut radii: Vec<f64> = (1..=max_radius.floor() as i64).map(|r| r as f64).collect();
    if radii.last().is_none_or(|r| *r < max_radius) {
        radii.push(max_radius);
    }
    radii
}

/// Per-shell suprema at radii `1, 2, ..., ⌊max_radius⌋` (and `max_radius`
/// itself when it is not an integer).
pub fn estimate_growth<F: EntireFn + ?Sized>(f: &F, max_radius: f64, grid_step: f64) -> Result<GrowthProfile> {
    check_radius(max_radius)?;
    growth_at(f, &default_radii(max_radius), grid_step)
}

/// Per-shell suprema at the given radii by direct evaluation on the grid.
pub fn growth_at<F: EntireFn + ?Sized>(f: &F, radii: &[f64], grid_step: f64) -> Result<GrowthProfile> {
    check_step(grid_step)?;
    for r in radii {
        check_radius(*r)?;
    }
    let place = Placement::Node;
    let unit = place.unit(grid_step);
    let n = 2 * f.dim();
    let sup = radii
        .iter()
        .map(|&r| {
            let lo_r = (r - grid_step).max(0.0);
            let (lo, hi) = key_bounds(lo_r * lo_r, r * r, unit);
            let parts = scan(n, place, lo, hi, || f64::NEG_INFINITY, |acc, m| {
                let v = log_normalized_magnitude(f, &to_point(place, m, grid_step));
                if v > *acc {
                    *acc = v;
                }
            });
            parts.into_iter().fold(f64::NEG_INFINITY, f64::max).exp()
        })
        .collect();
    Ok(GrowthProfile { radii: radii.to_vec(), sup_normalized: sup, grid_step })
}

/// Log normalized magnitude of a one-variable function on the node grid
/// `{m·step : |m|² ≤ hi}`, reduced to the maximum per key.
fn max_by_key(f: &BoundFn, hi: u64, step: f64) -> Vec<f64> {
    let place = Placement::Node;
    let parts = scan(2, place, 0, hi, Vec::new, |acc: &mut Vec<(u64, f64)>, m| {
        let key = place.key(m[0]) + place.key(m[1]);
        acc.push((key, log_normalized_magnitude(f, &to_point(place, m, step))));
    });
    let mut table = vec![f64::NEG_INFINITY; hi as usize + 1];
    for (k, v) in parts.into_iter().flatten() {
        let slot = &mut table[k as usize];
        if v > *slot {
            *slot = v;
        }
    }
    table
}

/// Same grid and shells as [`growth_at`], for a two-variable function that
/// factors as `F₁(z₁)·F₂(z₂)`. The 4-d sup over a shell is the max of
/// `n₁(a) + n₂(b)` over pairs of 2-d grid points whose keys add up to a key in
/// the shell, which only needs the per-key maxima of each factor.
pub fn growth_at_split(parts: [&BoundFn; 2], radii: &[f64], grid_step: f64) -> Result<GrowthProfile> {
    check_step(grid_step)?;
    for r in radii {
        check_radius(*r)?;
    }
    if parts.iter().any(|p| p.f.dim != 1) {
        return domain("split growth needs two one-variable factors");
    }
    let place = Placement::Node;
    let unit = place.unit(grid_step);
    let rmax = radii.iter().copied().fold(0.0, f64::max);
    let (_, top) = key_bounds(0.0, rmax * rmax, unit);
    let t0 = max_by_key(parts[0], top, grid_step);
    let t1 = max_by_key(parts[1], top, grid_step);
    let sup = radii
        .iter()
        .map(|&r| {
            let lo_r = (r - grid_step).max(0.0);
            let (lo, hi) = key_bounds(lo_r * lo_r, r * r, unit);
            let mut best = f64::NEG_INFINITY;
            for ka in 0..=hi {
                let a = t0[ka as usize];
                if a == f64::NEG_INFINITY {
                    continue;
                }
                for kb in lo.saturating_sub(ka)..=hi - ka {
                    let v = a + t1[kb as usize];
                    if v > best {
                        best = v;
                    }
                }
            }
            best.exp()
        })
        .collect();
    Ok(GrowthProfile { radii: radii.to_vec(), sup_normalized: sup, grid_step })
}

/// Growth profile of a [`LatticeFn`], using the split scan when the function
/// factors over its two coordinates.
pub fn lattice_fn_growth_at(f: &LatticeFn, ev: &SigmaEvaluator, radii: &[f64], grid_step: f64) -> Result<GrowthProfile> {
    if f.dim == 2 {
        if let Some(parts) = f.split_coordinates() {
            let b0 = parts[0].bind(ev);
            let b1 = parts[1].bind(ev);
            return growth_at_split([&b0, &b1], radii, grid_step);
        }
    }
    growth_at(&f.bind(ev), radii, grid_step)
}

pub fn lattice_fn_growth(f: &LatticeFn, ev: &SigmaEvaluator, max_radius: f64, grid_step: f64) -> Result<GrowthProfile> {
    check_radius(max_radius)?;
    lattice_fn_growth_at(f, ev, &default_radii(max_radius), grid_step)
}

/// Midpoint rule for `∫_{|z| ≤ radius} |F(z)|² e^{-π|z|²} dz` over cells of
/// side `grid_step` whose centres lie in the ball.
pub fn f2_quadrature<F: EntireFn + ?Sized>(f: &F, radius: f64, grid_step: f64) -> Result<f64> {
    check_radius(radius)?;
    check_step(grid_step)?;
    let place = Placement::Centre;
    let (_, hi) = key_bounds(0.0, radius * radius, place.unit(grid_step));
    let parts = scan(2 * f.dim(), place, 0, hi, || 0.0f64, |acc, m| {
        *acc += (2.0 * log_normalized_magnitude(f, &to_point(place, m, grid_step))).exp();
    });
    let cell = grid_step.powi(2 * f.dim() as i32);
    Ok(parts.into_iter().sum::<f64>() * cell)
}

/// Squared normalized magnitudes of a one-variable function on the centre
/// grid, summed per key.
fn sum_by_key(f: &BoundFn, hi: u64, step: f64) -> Vec<f64> {
    let place = Placement::Centre;
    let parts = scan(2, place, 0, hi, Vec::new, |acc: &mut Vec<(u64, f64)>, m| {
        let key = place.key(m[0]) + place.key(m[1]);
        acc.push((key, (2.0 * log_normalized_magnitude(f, &to_point(place, m, step))).exp()));
    });
    let mut table = vec![0.0; hi as usize + 1];
    for (k, v) in parts.into_iter().flatten() {
        table[k as usize] += v;
    }
    table
}

/// [`f2_quadrature`] for `F₁(z₁)·F₂(z₂)`: the ball sum becomes
/// `Σ_a w₁(a) Σ_{key(b) ≤ K - key(a)} w₂(b)`, computed with prefix sums.
pub fn f2_quadrature_split(parts: [&BoundFn; 2], radius: f64, grid_step: f64) -> Result<f64> {
    check_radius(radius)?;
    check_step(grid_step)?;
    let place = Placement::Centre;
    let (_, hi) = key_bounds(0.0, radius * radius, place.unit(grid_step));
    let s0 = sum_by_key(parts[0], hi, grid_step);
    let s1 = sum_by_key(parts[1], hi, grid_step);
    let mut prefix = Vec::with_capacity(s1.len());
    let mut run = 0.0;
    for v in &s1 {
        run += v;
        prefix.push(run);
    }
    let total: f64 = (0..=hi).map(|ka| s0[ka as usize] * prefix[(hi - ka) as usize]).sum();
    Ok(total * grid_step.powi(4))
}

pub fn lattice_fn_f2(f: &LatticeFn, ev: &SigmaEvaluator, radius: f64, grid_step: f64) -> Result<f64> {
    if f.dim == 2 {
        if let Some(parts) = f.split_coordinates() {
            let b0 = parts[0].bind(ev);
            let b1 = parts[1].bind(ev);
            return f2_quadrature_split([&b0, &b1], radius, grid_step);
        }
    }
    f2_quadrature(&f.bind(ev), radius, grid_step)
}

/// Weight on the sample `F(λ)` in the reconstruction sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleWeight {
    /// `e^{-π|λ|²}`; reproduces constants.
    #[default]
    Full,
    /// `e^{-π|λ|²/2}`.
    Half,
}

/// `vol(Λ) Σ_{|λ| ≤ R} F(λ) e^{πλ̄·z} G(z - λ) w(λ)` with `vol(Λ) = |det A|²`
/// and `G` interpolating for the adjoint lattice, `G(0) = 1`.
pub fn lagrange_reconstruct<S, G>(
    samples_of: &S,
    g: &G,
    lat: &ComplexLattice,
    z: &[Complex64],
    trunc_radius: f64,
) -> Result<Complex64>
where
    S: Fn(&[Complex64]) -> Complex64 + Sync,
    G: EntireFn + ?Sized,
{
    lagrange_reconstruct_with(samples_of, g, lat, z, trunc_radius, SampleWeight::Full)
}

pub fn lagrange_reconstruct_with<S, G>(
    samples_of: &S,
    g: &G,
    lat: &ComplexLattice,
    z: &[Complex64],
    trunc_radius: f64,
    weight: SampleWeight,
) -> Result<Complex64>
where
    S: Fn(&[Complex64]) -> Complex64 + Sync,
    G: EntireFn + ?Sized,
{
    check_dims(g, lat)?;
    if z.len() != lat.dim() {
        return domain(format!("point has {} coordinates but the lattice has d = {}", z.len(), lat.dim()));
    }
    let zn = norm_sqr(z).sqrt();
    if !(trunc_radius >= zn + 2.0) {
        return domain(format!("truncation radius {trunc_radius} must be at least |z| + 2 = {}", zn + 2.0));
    }
    let vol = lat.det().norm_sqr();
    let wfac = match weight {
        SampleWeight::Full => 1.0,
        SampleWeight::Half => 0.5,
    };
    let pts = lat.lattice_points_in_ball(trunc_radius);
    let terms: Vec<Complex64> = pts
        .par_iter()
        .map(|lam| {
            let sample = LogComplex::from_complex(samples_of(lam));
            if sample.is_zero() {
                return Complex64::new(0.0, 0.0);
            }
            let diff: Vec<Complex64> = z.iter().zip(lam).map(|(a, b)| a - b).collect();
            let gv = g.eval(&diff);
            let phase: Complex64 = lam.iter().zip(z).map(|(l, x)| l.conj() * x).sum();
            let e = LogComplex::exp(PI * phase - wfac * PI * norm_sqr(lam));
            (sample * e * gv).to_complex()
        })
        .collect();
    Ok(terms.into_iter().sum::<Complex64>() * vol)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionTrace {
    #[serde(with = "complex_vec")]
    pub z: Vec<Complex64>,
    #[serde(with = "complex")]
    pub reference: Complex64,
    pub radii: Vec<f64>,
    #[serde(with = "complex_vec")]
    pub values: Vec<Complex64>,
    pub errors: Vec<f64>,
    pub weight: SampleWeight,
}

impl ReconstructionTrace {
    pub fn final_error(&self) -> f64 {
        self.errors.last().copied().unwrap_or(f64::NAN)
    }

    /// Whether each error is at most the previous one, allowing slack of
    /// twice `floor` for rounding noise.
    pub fn non_increasing(&self, floor: f64) -> bool {
        self.errors.windows(2).all(|w| w[1] <= w[0] + 2.0 * floor)
    }

    pub fn non_decreasing(&self) -> bool {
        self.errors.windows(2).all(|w| w[1] >= w[0])
    }
}

/// Reconstruction at several truncation radii with errors against `reference`.
pub fn reconstruction_trace<S, G>(
    samples_of: &S,
    g: &G,
    lat: &ComplexLattice,
    z: &[Complex64],
    radii: &[f64],
    reference: Complex64,
    weight: SampleWeight,
) -> Result<ReconstructionTrace>
where
    S: Fn(&[Complex64]) -> Complex64 + Sync,
    G: EntireFn + ?Sized,
{
    let mut values = Vec::with_capacity(radii.len());
    for r in radii {
        values.push(lagrange_reconstruct_with(samples_of, g, lat, z, *r, weight)?);
    }
    let errors = values.iter().map(|v| (v - reference).norm()).collect();
    Ok(ReconstructionTrace { z: z.to_vec(), reference, radii: radii.to_vec(), values, errors, weight })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BargmannReport {
    #[serde(with = "complex_vec")]
    pub lambda: Vec<Complex64>,
    /// `|⟨φ, π_λ φ⟩|` by quadrature of the real-variable integral.
    pub quadrature: f64,
    /// `2^{-d/4} |Bφ(λ)| e^{-π|λ|²/2}`.
    pub closed_form: f64,
}

impl BargmannReport {
    pub fn discrepancy(&self) -> f64 {
        (self.quadrature - self.closed_form).abs()
    }
}

/// `∫ e^{-πx²} e^{-2πiηx} e^{-π(x-ξ)²} dx` by the trapezoid rule with `n`
/// panels per unit length on a window where the integrand is below 1e-300.
fn gabor_integral_1d(xi: f64, eta: f64, per_unit: usize) -> Complex64 {
    let centre = xi / 2.0;
    let half = 12.0;
    let panels = (2.0 * half) as usize * per_unit;
    let h = 2.0 * half / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=panels {
        let x = centre - half + k as f64 * h;
        let w = if k == 0 || k == panels { 0.5 } else { 1.0 };
        let mag = (-PI * x * x - PI * (x - xi) * (x - xi)).exp();
        acc += Complex64::from_polar(mag, -2.0 * PI * eta * x) * w;
    }
    acc * h
}

/// `Bφ` for the unnormalized Gaussian `φ(x) = e^{-π|x|²}`:
/// `2^{d/4} ∫ φ(x) e^{2πx·z - π|x|² - πz·z/2} dx = 2^{-d/4}`.
pub fn bargmann_of_gaussian(z: &[Complex64]) -> Complex64 {
    Complex64::new(2f64.powf(-(z.len() as f64) / 4.0), 0.0)
}

/// `|⟨φ, π_λ φ⟩|` for `φ(x) = e^{-π|x|²}` and `π_λ φ(x) = e^{2πiη·x} φ(x - ξ)`,
/// `λ = ξ + iη`, by quadrature and by the Bargmann transform.
pub fn bargmann_coefficient(lambda: &[Complex64]) -> Result<BargmannReport> {
    if lambda.is_empty() {
        return domain("λ must have at least one coordinate");
    }
    let mut coarse = Complex64::new(1.0, 0.0);
    let mut fine = Complex64::new(1.0, 0.0);
    for l in lambda {
        coarse *= gabor_integral_1d(l.re, l.im, 32);
        fine *= gabor_integral_1d(l.re, l.im, 64);
    }
    let gap = (coarse - fine).norm();
    if gap > 1e-12 * fine.norm().max(1e-300) && gap > 1e-300 {
        return Err(Error::Resource {
            what: format!("Gabor coefficient quadrature did not settle (change {gap:e})"),
            bound: "64 panels per unit".into(),
        });
    }
    let d = lambda.len() as f64;
    let closed = 2f64.powf(-d / 4.0) * bargmann_of_gaussian(lambda).norm() * (-PI * norm_sqr(lambda) / 2.0).exp();
    Ok(BargmannReport { lambda: lambda.to_vec(), quadrature: fine.norm(), closed_form: closed })
}
