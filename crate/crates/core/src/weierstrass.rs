//! Weierstrass σ for the lattice Z[i], evaluated in the log domain.
//!
//! The fast path reduces `z = z0 + λ` with `λ` the nearest Gaussian integer
//! and uses
//!
//! ```text
//! σ(z0 + λ) = ε(λ) e^{π λ̄ (z0 + λ/2)} σ(z0),   ε(m+in) = (-1)^{m+n+mn}
//! ```
//!
//! On the cell |Re z0|, |Im z0| ≤ 1/2 the value comes from the θ₁ series
//! with nome `q = e^{-π}`. [`ProductOracle`] evaluates the defining product
//! directly and is kept independent of the fast path.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};
pub use crate::logc::{wrap_phase, LogComplex};

const THETA_TERMS: usize = 7;

/// Evaluates σ and τ = σ(z)/z for Z[i].
#[derive(Clone, Debug)]
pub struct SigmaEvaluator {
    truncation_order: usize,
    snap_tol: f64,
    // 2(-1)^n q^{(n+1/2)^2}
    theta_coef: [f64; THETA_TERMS],
    // θ₁'(0) / π
    theta_prime: f64,
}

impl Default for SigmaEvaluator {
    fn default() -> Self {
        Self::new(60, 1e-12).expect("default parameters are valid")
    }
}

impl SigmaEvaluator {
    /// `truncation_order` is the radius used by [`Self::oracle`]; the fast path
    /// itself is exact up to rounding.
    pub fn new(truncation_order: usize, snap_tol: f64) -> Result<Self> {
        if truncation_order < 1 {
            return domain(format!("truncation order must be positive, got {truncation_order}"));
        }
        if !(snap_tol > 0.0 && snap_tol < 0.25) {
            return domain(format!("snap tolerance must lie in (0, 0.25), got {snap_tol}"));
        }
        let q = (-PI).exp();
        let mut theta_coef = [0.0; THETA_TERMS];
        let mut theta_prime = 0.0;
        for (n, c) in theta_coef.iter_mut().enumerate() {
            let e = (n as f64 + 0.5).powi(2);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            *c = 2.0 * sign * q.powf(e);
            theta_prime += *c * (2 * n + 1) as f64;
        }
        Ok(SigmaEvaluator { truncation_order, snap_tol, theta_coef, theta_prime })
    }

    /// Like [`Self::new`] but also checks the fast path against the product
    /// oracle on a fixed set of points before returning.
    pub fn validated(truncation_order: usize, snap_tol: f64) -> Result<Self> {
        let ev = Self::new(truncation_order, snap_tol)?;
        let pts: Vec<Complex64> = [
            (0.5, 0.5),
            (0.3, -0.2),
            (1.7, 0.4),
            (-2.2, 1.1),
            (0.1, 3.4),
            (2.6, -2.9),
        ]
        .iter()
        .map(|&(a, b)| Complex64::new(a, b))
        .collect();
        let err = ev.max_oracle_error(&ev.oracle(), &pts);
        if err > 1e-8 {
            return domain(format!("σ fast path disagrees with product oracle: relative error {err:e}"));
        }
        Ok(ev)
    }

    pub fn truncation_order(&self) -> usize {
        self.truncation_order
    }

    pub fn snap_tol(&self) -> f64 {
        self.snap_tol
    }

    pub fn oracle(&self) -> ProductOracle {
        ProductOracle::new(self.truncation_order)
    }

    /// Largest relative deviation `|σ_fast/σ_oracle - 1|` over `points`.
    pub fn max_oracle_error(&self, oracle: &ProductOracle, points: &[Complex64]) -> f64 {
        points
            .iter()
            .map(|&z| {
                let a = self.sigma(z);
                let b = oracle.eval(z);
                relative_gap(a, b)
            })
            .fold(0.0, f64::max)
    }

    fn cell(&self, z0: Complex64) -> Complex64 {
        // σ(z0) = e^{π z0²/2} θ₁(π z0) / θ₁'(0), θ₁'(0) counted per unit of v
        let v = z0 * PI;
        let mut th = Complex64::new(0.0, 0.0);
        for (n, &c) in self.theta_coef.iter().enumerate().rev() {
            th += (v * (2 * n + 1) as f64).sin() * c;
        }
        (z0 * z0 * (PI / 2.0)).exp() * th / (self.theta_prime * PI)
    }

    fn reduce(z: Complex64) -> (i64, i64, Complex64) {
        let m = z.re.round();
        let n = z.im.round();
        (m as i64, n as i64, Complex64::new(z.re - m, z.im - n))
    }

    fn lift(m: i64, n: i64, z0: Complex64) -> LogComplex {
        let lam = Complex64::new(m as f64, n as f64);
        let w = lam.conj() * (z0 + lam * 0.5) * PI;
        let odd = (m + n + m * n).rem_euclid(2) == 1;
        let e = LogComplex::exp(w);
        if odd {
            e.neg()
        } else {
            e
        }
    }

    pub fn sigma(&self, z: Complex64) -> LogComplex {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return LogComplex::new(f64::NAN, f64::NAN);
        }
        let (m, n, z0) = Self::reduce(z);
        if z0.norm() <= self.snap_tol {
            return LogComplex::ZERO;
        }
        Self::lift(m, n, z0) * LogComplex::from_complex(self.cell(z0))
    }

    /// σ(z)/z with τ(0) = 1.
    pub fn tau(&self, z: Complex64) -> LogComplex {
        let (m, n, z0) = Self::reduce(z);
        if m == 0 && n == 0 {
            if z0.re == 0.0 && z0.im == 0.0 {
                return LogComplex::ONE;
            }
            return LogComplex::from_complex(self.cell(z0) / z0);
        }
        self.sigma(z) / LogComplex::from_complex(z)
    }

    /// Distance from `z` to the nearest Gaussian integer.
    pub fn lattice_distance(z: Complex64) -> f64 {
        Self::reduce(z).2.norm()
    }
}

fn relative_gap(a: LogComplex, b: LogComplex) -> f64 {
    if a.is_zero() && b.is_zero() {
        return 0.0;
    }
    if a.is_zero() || b.is_zero() {
        return f64::INFINITY;
    }
    let r = a / b;
    (r.to_complex() - Complex64::new(1.0, 0.0)).norm()
}

/// Direct evaluation of the Weierstrass product for Z[i].
///
/// `raw` multiplies all factors with 0 < |λ| ≤ N. `eval` adds the exact
/// contribution of the annulus N < |λ| ≤ M through the power sums
/// Σ λ^{-4k}, which is valid for |z| well inside N.
#[derive(Clone, Debug)]
pub struct ProductOracle {
    order: usize,
    outer: usize,
    power_sums: Vec<Complex64>,
}

const ANNULUS_TERMS: usize = 6;

impl ProductOracle {
    pub fn new(order: usize) -> Self {
        Self::with_outer(order, order.max(1) * 64)
    }

    pub fn with_outer(order: usize, outer: usize) -> Self {
        let outer = outer.max(order);
        let power_sums = annulus_power_sums(order, outer);
        ProductOracle { order, outer, power_sums }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn outer(&self) -> usize {
        self.outer
    }

    fn log_raw(z: Complex64, order: usize) -> Option<Complex64> {
        let r = order as i64;
        let r2 = r * r;
        if z.re == 0.0 && z.im == 0.0 {
            return None;
        }
        let mut acc = z.ln();
        for a in -r..=r {
            let mut row = Complex64::new(0.0, 0.0);
            for b in -r..=r {
                let n2 = a * a + b * b;
                if n2 == 0 || n2 > r2 {
                    continue;
                }
                let u = z / Complex64::new(a as f64, b as f64);
                let one_minus = Complex64::new(1.0, 0.0) - u;
                if one_minus.re == 0.0 && one_minus.im == 0.0 {
                    return None;
                }
                row += one_minus.ln() + u + u * u * 0.5;
            }
            acc += row;
        }
        Some(acc)
    }

    /// Truncated product over 0 < |λ| ≤ `order`.
    pub fn raw(&self, z: Complex64) -> LogComplex {
        Self::raw_at(z, self.order)
    }

    pub fn raw_at(z: Complex64, order: usize) -> LogComplex {
        match Self::log_raw(z, order) {
            Some(w) => LogComplex::exp(w),
            None => LogComplex::ZERO,
        }
    }

    /// Truncated product with the annulus correction applied.
    pub fn eval(&self, z: Complex64) -> LogComplex {
        let Some(mut w) = Self::log_raw(z, self.order) else {
            return LogComplex::ZERO;
        };
        // log Π(1-u)e^{u+u²/2} = -Σ_{j≥3} u^j/j; only j ≡ 0 mod 4 survives the symmetric sum
        let z4 = z.powi(4);
        let mut zp = z4;
        for (k, s) in self.power_sums.iter().enumerate() {
            let j = 4.0 * (k + 1) as f64;
            w -= zp * *s / j;
            zp *= z4;
        }
        LogComplex::exp(w)
    }

    /// Relative change of the raw product when the order is doubled.
    pub fn tail_estimate(&self, z: Complex64) -> f64 {
        relative_gap(Self::raw_at(z, self.order), Self::raw_at(z, 2 * self.order))
    }
}

fn annulus_power_sums(inner: usize, outer: usize) -> Vec<Complex64> {
    let r_in = (inner * inner) as i64;
    let r_out = (outer * outer) as i64;
    let o = outer as i64;
    let mut sums = [Complex64::new(0.0, 0.0); ANNULUS_TERMS];
    // λ ↦ iλ permutes Z[i]\{0} and fixes λ^{-4k}; sum over re > 0, im ≥ 0 and multiply by 4
    for a in 1..=o {
        let mut row = vec![Complex64::new(0.0, 0.0); ANNULUS_TERMS];
        for b in 0..=o {
            let n2 = a * a + b * b;
            if n2 > r_out {
                break;
            }
            if n2 <= r_in {
                continue;
            }
            let inv = Complex64::new(1.0, 0.0) / Complex64::new(a as f64, b as f64);
            let inv4 = inv.powi(4);
            let mut p = inv4;
            for s in row.iter_mut() {
                *s += p;
                p *= inv4;
            }
        }
        for (s, r) in sums.iter_mut().zip(row) {
            *s += r;
        }
    }
    sums.iter().map(|s| *s * 4.0).collect()
}

/// A scalar entire function of one complex variable.
pub trait ScalarFn: Sync {
    fn eval(&self, w: Complex64) -> LogComplex;
}

#[derive(Clone, Copy, Debug)]
pub struct Sigma<'a>(pub &'a SigmaEvaluator);

#[derive(Clone, Copy, Debug)]
pub struct Tau<'a>(pub &'a SigmaEvaluator);

impl ScalarFn for Sigma<'_> {
    fn eval(&self, w: Complex64) -> LogComplex {
        self.0.sigma(w)
    }
}

impl ScalarFn for Tau<'_> {
    fn eval(&self, w: Complex64) -> LogComplex {
        self.0.tau(w)
    }
}

impl<F: Fn(Complex64) -> LogComplex + Sync> ScalarFn for F {
    fn eval(&self, w: Complex64) -> LogComplex {
        self(w)
    }
}

/// `β_ζ f(w) = e^{π ζ̄ w - π|ζ|²/2} f(w - ζ)`.
#[derive(Clone, Copy, Debug)]
pub struct FockShift<F> {
    pub zeta: Complex64,
    pub inner: F,
}

pub fn fock_shift<F: ScalarFn>(zeta: Complex64, f: F) -> FockShift<F> {
    FockShift { zeta, inner: f }
}

/// The exponential multiplier of β_ζ at `w`.
pub fn fock_multiplier(zeta: Complex64, w: Complex64) -> LogComplex {
    LogComplex::exp(zeta.conj() * w * PI - zeta.norm_sqr() * (PI / 2.0))
}

impl<F: ScalarFn> ScalarFn for FockShift<F> {
    fn eval(&self, w: Complex64) -> LogComplex {
        self.inner.eval(w - self.zeta) * fock_multiplier(self.zeta, w)
    }
}

/// An entire function on C^d.
pub trait EntireFn: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, z: &[Complex64]) -> LogComplex;
}

/// Lifts a [`ScalarFn`] to a one-variable [`EntireFn`].
#[derive(Clone, Copy, Debug)]
pub struct OneVar<F>(pub F);

impl<F: ScalarFn> EntireFn for OneVar<F> {
    fn dim(&self) -> usize {
        1
    }
    fn eval(&self, z: &[Complex64]) -> LogComplex {
        self.0.eval(z[0])
    }
}

/// Wraps a closure over C^d.
pub struct FnEntire<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[Complex64]) -> LogComplex + Sync> FnEntire<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnEntire { dim, f }
    }
}

impl<F: Fn(&[Complex64]) -> LogComplex + Sync> EntireFn for FnEntire<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, z: &[Complex64]) -> LogComplex {
        (self.f)(z)
    }
}

pub fn norm_sqr(z: &[Complex64]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum()
}

/// `ln(|f(z)| e^{-π|z|²/2})`, `-inf` at exact zeros.
pub fn log_normalized_magnitude<F: EntireFn + ?Sized>(f: &F, z: &[Complex64]) -> f64 {
    let v = f.eval(z);
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    v.log_mag - PI * norm_sqr(z) / 2.0
}

/// `|f(z)| e^{-π|z|²/2}`.
pub fn normalized_magnitude<F: EntireFn + ?Sized>(f: &F, z: &[Complex64]) -> f64 {
    log_normalized_magnitude(f, z).exp()
}
