//! Symbolic entire functions built from shifted σ/τ factors, and the
//! constructions that produce them: tensor products, sublattice-based σ_Λ
//! and τ_Λ, the failure families and the hexagonal presets.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cjson::{complex, complex_vec};
use crate::error::{domain, Error, Result};
use crate::lattice::{c, partition_cosets, Axis, CMatrix, ComplexLattice, CosetPartition, E1Rule, SublatticeSpec};
use crate::weierstrass::{fock_multiplier, EntireFn, LogComplex, SigmaEvaluator};
use crate::zi::GaussInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Sigma,
    Tau,
}

/// What a factor is for; used for zero attribution and for ablations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Unshifted factor in the first (or second) sublattice coordinate.
    Lead,
    /// Shifted factor in the first sublattice coordinate (an E₁ coset).
    FirstAxisShift,
    /// Shifted factor in the second sublattice coordinate (an E₂ coset).
    SecondAxisShift,
    /// Extra factor of τ_Λ for a nonzero E₀ coset.
    BaseCosetExtra,
    /// τ factor along `⟨z, b₂⟩/‖b₂‖²` that removes the points `l·b₂`, l ≠ 0.
    Completion,
    Tensor,
    Preset,
}

/// `β_ζ f(ℓ(z))` with `ℓ(z) = Σ row_j z_j + offset` and `f ∈ {σ, τ}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub kind: Kind,
    #[serde(with = "complex_vec")]
    pub row: Vec<Complex64>,
    #[serde(with = "complex")]
    pub offset: Complex64,
    #[serde(with = "complex")]
    pub shift: Complex64,
    pub role: Role,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coset: Option<GaussInt>,
}

impl Factor {
    pub fn new(kind: Kind, row: Vec<Complex64>, shift: Complex64, role: Role) -> Self {
        Factor { kind, row, offset: c(0.0, 0.0), shift, role, coset: None }
    }

    pub fn argument(&self, z: &[Complex64]) -> Complex64 {
        self.row.iter().zip(z).map(|(w, x)| w * x).sum::<Complex64>() + self.offset
    }

    pub fn eval(&self, ev: &SigmaEvaluator, z: &[Complex64]) -> LogComplex {
        let w = self.argument(z);
        let inner = w - self.shift;
        let base = match self.kind {
            Kind::Sigma => ev.sigma(inner),
            Kind::Tau => ev.tau(inner),
        };
        if self.shift == c(0.0, 0.0) {
            base
        } else {
            base * fock_multiplier(self.shift, w)
        }
    }

    /// Coordinates the factor depends on.
    pub fn support(&self) -> Vec<usize> {
        self.row.iter().enumerate().filter(|(_, w)| **w != c(0.0, 0.0)).map(|(j, _)| j).collect()
    }
}

/// `exp(Σ linear_j z_j + constant)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prefactor {
    #[serde(with = "complex_vec")]
    pub linear: Vec<Complex64>,
    #[serde(with = "complex")]
    pub constant: Complex64,
}

impl Prefactor {
    pub fn unit(d: usize) -> Self {
        Prefactor { linear: vec![c(0.0, 0.0); d], constant: c(0.0, 0.0) }
    }

    pub fn eval(&self, z: &[Complex64]) -> LogComplex {
        LogComplex::exp(self.linear.iter().zip(z).map(|(w, x)| w * x).sum::<Complex64>() + self.constant)
    }
}

/// A product of Fock-shifted σ/τ factors times an exponential prefactor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeFn {
    pub dim: usize,
    pub factors: Vec<Factor>,
    pub prefactor: Prefactor,
    pub meta: String,
}

impl LatticeFn {
    /// The constant function 1 on C^d.
    pub fn one(d: usize) -> Self {
        LatticeFn { dim: d, factors: vec![], prefactor: Prefactor::unit(d), meta: "one".into() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return domain("function dimension must be positive");
        }
        if self.prefactor.linear.len() != self.dim {
            return domain(format!(
                "prefactor has {} coefficients but dim is {}",
                self.prefactor.linear.len(),
                self.dim
            ));
        }
        for (i, f) in self.factors.iter().enumerate() {
            if f.row.len() != self.dim {
                return domain(format!("factor {i} has a row of length {} but dim is {}", f.row.len(), self.dim));
            }
        }
        Ok(())
    }

    pub fn eval(&self, ev: &SigmaEvaluator, z: &[Complex64]) -> LogComplex {
        let mut acc = self.prefactor.eval(z);
        for f in &self.factors {
            let v = f.eval(ev, z);
            if v.is_zero() {
                return LogComplex::ZERO;
            }
            acc = acc * v;
        }
        acc
    }

    pub fn bind<'a>(&'a self, ev: &'a SigmaEvaluator) -> BoundFn<'a> {
        BoundFn { f: self, ev }
    }

    pub fn count(&self, role: Role) -> usize {
        self.factors.iter().filter(|f| f.role == role).count()
    }

    /// Indices of factors that are exact zeros at `z`.
    pub fn zero_factors(&self, ev: &SigmaEvaluator, z: &[Complex64]) -> Vec<usize> {
        self.factors.iter().enumerate().filter(|(_, f)| f.eval(ev, z).is_zero()).map(|(i, _)| i).collect()
    }

    pub fn without_role(&self, role: Role) -> LatticeFn {
        let mut g = self.clone();
        g.factors.retain(|f| f.role != role);
        g.meta = format!("{} without {role:?}", self.meta);
        g
    }

    /// `z ↦ F(diag(scale)·z)`.
    pub fn pullback_diag(&self, scale: &[f64]) -> Result<LatticeFn> {
        if scale.len() != self.dim {
            return domain(format!("expected {} scale factors, got {}", self.dim, scale.len()));
        }
        let mut g = self.clone();
        for f in g.factors.iter_mut() {
            for (w, s) in f.row.iter_mut().zip(scale) {
                *w *= *s;
            }
        }
        for (w, s) in g.prefactor.linear.iter_mut().zip(scale) {
            *w *= *s;
        }
        Ok(g)
    }

    /// `F / F(0)`, so that the origin value is 1.
    pub fn normalized_at_origin(&self, ev: &SigmaEvaluator) -> Result<LatticeFn> {
        let v = self.eval(ev, &vec![c(0.0, 0.0); self.dim]);
        if v.is_zero() {
            return Err(Error::OriginValueZero);
        }
        let mut g = self.clone();
        g.prefactor.constant -= c(v.log_mag, v.phase);
        Ok(g)
    }

    /// When every factor depends on at most one coordinate, returns `d`
    /// one-variable functions `F_j` with `F(z) = Π F_j(z_j)`.
    pub fn split_coordinates(&self) -> Option<Vec<LatticeFn>> {
        let d = self.dim;
        let mut parts: Vec<LatticeFn> = (0..d)
            .map(|j| LatticeFn {
                dim: 1,
                factors: vec![],
                prefactor: Prefactor {
                    linear: vec![self.prefactor.linear[j]],
                    constant: if j == 0 { self.prefactor.constant } else { c(0.0, 0.0) },
                },
                meta: format!("{} [coordinate {j}]", self.meta),
            })
            .collect();
        for f in &self.factors {
            let sup = f.support();
            if sup.len() > 1 {
                return None;
            }
            let j = sup.first().copied().unwrap_or(0);
            let mut g = f.clone();
            g.row = vec![f.row[j]];
            parts[j].factors.push(g);
        }
        Some(parts)
    }
}

/// A [`LatticeFn`] paired with an evaluator.
#[derive(Clone, Copy)]
pub struct BoundFn<'a> {
    pub f: &'a LatticeFn,
    pub ev: &'a SigmaEvaluator,
}

impl EntireFn for BoundFn<'_> {
    fn dim(&self) -> usize {
        self.f.dim
    }
    fn eval(&self, z: &[Complex64]) -> LogComplex {
        self.f.eval(self.ev, z)
    }
}

fn inverse_of(a: &CMatrix) -> Result<CMatrix> {
    ComplexLattice::new(a.clone()).map(|l| l.inverse().clone())
}

fn tensor(a: &CMatrix, kind: Kind, label: &str) -> Result<LatticeFn> {
    let inv = inverse_of(a)?;
    let d = a.nrows();
    let factors = (0..d)
        .map(|i| Factor::new(kind, inv.row(i).iter().copied().collect(), c(0.0, 0.0), Role::Tensor))
        .collect();
    Ok(LatticeFn { dim: d, factors, prefactor: Prefactor::unit(d), meta: label.into() })
}

/// `σ_0(A^{-1} z)` with `σ_0(w) = Π σ(w_j)`.
pub fn tensor_sigma(a: &CMatrix) -> Result<LatticeFn> {
    tensor(a, Kind::Sigma, "tensor sigma")
}

/// `τ_0(A^{-1} z)` with `τ_0(w) = Π τ(w_j)`.
pub fn tensor_tau(a: &CMatrix) -> Result<LatticeFn> {
    tensor(a, Kind::Tau, "tensor tau")
}

/// `F_0(z) = Π σ(γ_j z_j)/z_j` for the diagonal `γ` of an upper-triangular `S`.
pub fn interpolant_known(s: &CMatrix) -> Result<LatticeFn> {
    let d = s.nrows();
    if !s.is_square() || d == 0 {
        return domain("S must be a nonempty square matrix");
    }
    for i in 0..d {
        for j in 0..i {
            if s[(i, j)] != c(0.0, 0.0) {
                return domain(format!("S must be upper triangular, entry ({i}, {j}) is {}", s[(i, j)]));
            }
        }
    }
    let mut log_const = 0.0;
    let mut factors = Vec::with_capacity(d);
    for j in 0..d {
        let g = s[(j, j)];
        if g.im != 0.0 || !(g.re > 0.0) {
            return domain(format!("diagonal entry γ_{} = {g} must be real and positive", j + 1));
        }
        // σ(γw)/w = γ·τ(γw)
        log_const += g.re.ln();
        let mut row = vec![c(0.0, 0.0); d];
        row[j] = g;
        factors.push(Factor::new(Kind::Tau, row, c(0.0, 0.0), Role::Tensor));
    }
    Ok(LatticeFn {
        dim: d,
        factors,
        prefactor: Prefactor { linear: vec![c(0.0, 0.0); d], constant: c(log_const, 0.0) },
        meta: "known interpolant".into(),
    })
}

struct SublatticeGeometry {
    ab_inv: CMatrix,
    ab: CMatrix,
    a: GaussInt,
    c: GaussInt,
    delta: GaussInt,
}

fn geometry(lat: &ComplexLattice, spec: &SublatticeSpec, part: &CosetPartition) -> Result<SublatticeGeometry> {
    if lat.dim() != 2 || spec.dim() != 2 {
        return domain(format!(
            "sublattice constructions need d = 2 (lattice d = {}, B is {}x{})",
            lat.dim(),
            spec.dim(),
            spec.dim()
        ));
    }
    part.validate(spec)?;
    let ab = lat.generator() * spec.complex_matrix();
    let ab_inv = inverse_of(&ab)?;
    let [a, cc, _, _] = spec.entries()?;
    Ok(SublatticeGeometry { ab_inv, ab, a: a.clone(), c: cc.clone(), delta: spec.delta().clone() })
}

fn ratio(num: &GaussInt, den: &GaussInt) -> Complex64 {
    num.to_complex() / den.to_complex()
}

fn shifted_factors(g: &SublatticeGeometry, part: &CosetPartition) -> Vec<Factor> {
    let p1: Vec<Complex64> = g.ab_inv.row(0).iter().copied().collect();
    let p2: Vec<Complex64> = g.ab_inv.row(1).iter().copied().collect();
    let mut out = Vec::new();
    for eta in &part.e1 {
        // p₁(B^{-1}(0, η)) = -cη/Δ
        let zeta = -ratio(&(&g.c * eta), &g.delta);
        let mut f = Factor::new(Kind::Sigma, p1.clone(), zeta, Role::FirstAxisShift);
        f.coset = Some(eta.clone());
        out.push(f);
    }
    for eta in &part.e2 {
        // p₂(B^{-1}(0, η)) = aη/Δ
        let zeta = ratio(&(&g.a * eta), &g.delta);
        let mut f = Factor::new(Kind::Sigma, p2.clone(), zeta, Role::SecondAxisShift);
        f.coset = Some(eta.clone());
        out.push(f);
    }
    out
}

/// Sigma-type function for `Λ = A·Z[i]²` built from the sublattice `A·B·Z[i]²`:
/// an unshifted σ on the axis of `part`, one Fock-shifted σ per E₁ tag on the
/// first sublattice coordinate and one per E₂ tag on the second.
pub fn build_sigma_lambda(lat: &ComplexLattice, spec: &SublatticeSpec, part: &CosetPartition) -> Result<LatticeFn> {
    let g = geometry(lat, spec, part)?;
    let lead_row = match part.axis {
        Axis::First => 0,
        Axis::Second => 1,
    };
    let mut factors = vec![Factor::new(
        Kind::Sigma,
        g.ab_inv.row(lead_row).iter().copied().collect(),
        c(0.0, 0.0),
        Role::Lead,
    )];
    factors.extend(shifted_factors(&g, part));
    Ok(LatticeFn {
        dim: 2,
        factors,
        prefactor: Prefactor::unit(2),
        meta: format!("sigma_lambda B={:?} axis={:?}", spec.matrix(), part.axis),
    })
}

/// Convention for `⟨z, w⟩` in the τ_Λ extra factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InnerProduct {
    /// `Σ z_j conj(w_j)`.
    #[default]
    Hermitian,
    /// `Σ z_j w_j`.
    Bilinear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TauOptions {
    pub inner: InnerProduct,
    /// Include `τ(⟨z, b₂⟩/‖b₂‖²)`. Without it the function does not vanish at `l·b₂`.
    pub completion: bool,
}

impl Default for TauOptions {
    fn default() -> Self {
        TauOptions { inner: InnerProduct::Hermitian, completion: true }
    }
}

pub fn build_tau_lambda(lat: &ComplexLattice, spec: &SublatticeSpec, part: &CosetPartition) -> Result<LatticeFn> {
    build_tau_lambda_with(lat, spec, part, TauOptions::default())
}

/// Interpolating function for `Λ`: τ on the first sublattice coordinate, the
/// shifted σ factors of [`build_sigma_lambda`], one factor
/// `β_{rζ}σ(⟨z, b₂⟩/‖b₂‖²)` per nonzero `r = cδ/Δ` with δ ∈ E₀, and the
/// completion factor.
pub fn build_tau_lambda_with(
    lat: &ComplexLattice,
    spec: &SublatticeSpec,
    part: &CosetPartition,
    opts: TauOptions,
) -> Result<LatticeFn> {
    if part.axis != Axis::First {
        return domain("τ_Λ is defined for partitions on the first axis");
    }
    let g = geometry(lat, spec, part)?;
    for eta in &part.e1 {
        if (&g.c * eta).exact_div(&g.delta)?.is_some() {
            return domain(format!("E₁ tag {eta}: cη/Δ is a Gaussian integer, so τ_Λ(0) = 0"));
        }
    }
    for eta in &part.e2 {
        if (&g.a * eta).exact_div(&g.delta)?.is_some() {
            return domain(format!("E₂ tag {eta}: aη/Δ is a Gaussian integer, so τ_Λ(0) = 0"));
        }
    }
    let mut factors = vec![Factor::new(
        Kind::Tau,
        g.ab_inv.row(0).iter().copied().collect(),
        c(0.0, 0.0),
        Role::Lead,
    )];
    factors.extend(shifted_factors(&g, part));

    let b2: Vec<Complex64> = g.ab.column(1).iter().copied().collect();
    let n2: f64 = b2.iter().map(|x| x.norm_sqr()).sum();
    let covector: Vec<Complex64> = match opts.inner {
        InnerProduct::Hermitian => b2.iter().map(|x| x.conj() / n2).collect(),
        InnerProduct::Bilinear => b2.iter().map(|x| x / n2).collect(),
    };
    let nonzero_e0: Vec<&GaussInt> = part.e0.iter().filter(|d| !d.is_zero()).collect();
    if !nonzero_e0.is_empty() {
        let step = g.delta.exact_div(&g.c)?.ok_or_else(|| {
            Error::Domain(format!("Δ/c is not a Gaussian integer: Δ = {}, c = {}", g.delta, g.c))
        })?;
        let shift_vec = lat.point(&[GaussInt::zero(), step]);
        let b3: Vec<Complex64> = b2.iter().zip(&shift_vec).map(|(x, y)| x + y).collect();
        let zeta: Complex64 = b3.iter().zip(&covector).map(|(x, w)| x * w).sum();
        for delta in nonzero_e0 {
            let r = (&g.c * delta)
                .exact_div(&g.delta)?
                .ok_or_else(|| Error::Domain(format!("E₀ tag {delta}: cδ/Δ is not a Gaussian integer")))?;
            let rz = r.to_complex() * zeta;
            if SigmaEvaluator::lattice_distance(rz) <= 1e-9 {
                return domain(format!("E₀ tag {delta}: rζ = {rz} lies in Z[i], so τ_Λ(0) = 0"));
            }
            let mut f = Factor::new(Kind::Sigma, covector.clone(), rz, Role::BaseCosetExtra);
            f.coset = Some(delta.clone());
            factors.push(f);
        }
    }
    if opts.completion {
        factors.push(Factor::new(Kind::Tau, covector, c(0.0, 0.0), Role::Completion));
    }
    Ok(LatticeFn {
        dim: 2,
        factors,
        prefactor: Prefactor::unit(2),
        meta: format!("tau_lambda B={:?} inner={:?}", spec.matrix(), opts.inner),
    })
}

/// A lattice with its sublattice data and sigma-type function.
#[derive(Clone, Debug)]
pub struct Family {
    pub lattice: ComplexLattice,
    pub spec: SublatticeSpec,
    pub partition: CosetPartition,
    pub sigma: LatticeFn,
}

impl Family {
    pub fn tau(&self) -> Result<LatticeFn> {
        build_tau_lambda(&self.lattice, &self.spec, &self.partition)
    }
}

fn upper_lattice(beta: Complex64, gamma: f64) -> Result<ComplexLattice> {
    ComplexLattice::from_rows(&[vec![c(1.0, 0.0), beta], vec![c(0.0, 0.0), c(gamma, 0.0)]])
}

/// `Λ = [[1, 1/q], [0, γ]]·Z[i]²` with `γ² = 1 - 1/|q|²` and
/// `B = [[1, -q̄], [0, |q|²]]`, so that `AB = diag(1, γ|q|²)`.
pub fn family_fail(q: &GaussInt) -> Result<Family> {
    let nq = q.norm();
    let nq_i: i64 = nq.clone().try_into().map_err(|_| Error::Domain(format!("|q|² too large for q = {q}")))?;
    if nq_i < 2 {
        return domain(format!("family needs |q|² ≥ 2, got q = {q} with |q|² = {nq}"));
    }
    let nqf = nq_i as f64;
    let gamma = (1.0 - 1.0 / nqf).sqrt();
    let lattice = upper_lattice(c(1.0, 0.0) / q.to_complex(), gamma)?;
    let spec = SublatticeSpec::new(vec![
        vec![GaussInt::one(), -q.conj()],
        vec![GaussInt::zero(), GaussInt::from_int(nq)],
    ])?;
    let partition = partition_cosets(&spec, Axis::First, &E1Rule::AllToE2)?;
    let mut sigma = build_sigma_lambda(&lattice, &spec, &partition)?;
    sigma.meta = format!("fail q={q}");
    Ok(Family { lattice, spec, partition, sigma })
}

/// `Λ = [[1, p/q], [0, γ]]·Z[i]²` with `γ² = 1 - 1/q²`, `B = [[1, -p], [0, q]]`
/// and E₀ = {0}.
pub fn family_rational(p: i64, q: i64) -> Result<Family> {
    if q < 2 {
        return domain(format!("family needs q ≥ 2, got q = {q}"));
    }
    if p.gcd(&q) != 1 {
        return domain(format!("p and q must be coprime, got gcd({p}, {q}) = {}", p.gcd(&q)));
    }
    let qf = q as f64;
    let gamma = (1.0 - 1.0 / (qf * qf)).sqrt();
    let lattice = upper_lattice(c(p as f64 / qf, 0.0), gamma)?;
    let spec = SublatticeSpec::from_i64(&[&[(1, 0), (-p, 0)], &[(0, 0), (q, 0)]])?;
    let reps: Vec<GaussInt> = spec.coset_reps()?.into_iter().map(|(_, d)| d).collect();
    let (e0, e2): (Vec<GaussInt>, Vec<GaussInt>) = reps.into_iter().partition(GaussInt::is_zero);
    let partition = CosetPartition { e0, e1: vec![], e2, axis: Axis::First };
    let mut sigma = build_sigma_lambda(&lattice, &spec, &partition)?;
    sigma.meta = format!("rational p={p} q={q}");
    Ok(Family { lattice, spec, partition, sigma })
}

/// `Λ' = diag(α, β)·Λ_q` and `F(D^{-1} z)` for the failure family `Λ_q`.
pub fn family_scaled(alpha: f64, beta: f64, q: &GaussInt) -> Result<(ComplexLattice, LatticeFn)> {
    if !(alpha >= 1.0 && beta >= 1.0) {
        return domain(format!("scaling needs α, β ≥ 1, got α = {alpha}, β = {beta}"));
    }
    let fam = family_fail(q)?;
    let lattice = fam.lattice.scaled_rows(&[alpha, beta])?;
    let mut f = fam.sigma.pullback_diag(&[1.0 / alpha, 1.0 / beta])?;
    if alpha != 1.0 || beta != 1.0 {
        f.meta = format!("{} scaled α={alpha} β={beta}", fam.sigma.meta);
    }
    Ok((lattice, f))
}

/// Closed-form functions for the hexagonal lattice `[[1, 1/2], [0, √3/2]]·Z[i]²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HexPreset {
    /// `σ(z₁) Π_ζ σ(z₂/√3 - ζ)·e^{π(1-i)z₂/√3}`, ζ ∈ {1/2, i/2, (1+i)/2}.
    N1,
    /// The same product with the prefactor `e^{2π(1-i)z₂}`.
    N1Printed,
    /// `σ(z₁)/z₁ Π_ζ σ(z₂/√3 - ζ)·e^{π(1-i)z₂/√3}`, ζ ∈ {1/6, i/6, (1+i)/6}.
    N2,
}

pub fn hexagonal_preset(which: HexPreset) -> (ComplexLattice, LatticeFn) {
    let s3 = 3f64.sqrt();
    let (lead, offsets, lin, meta) = match which {
        HexPreset::N1 => (Kind::Sigma, 0.5, c(PI / s3, -PI / s3), "hexagonal n1"),
        HexPreset::N1Printed => (Kind::Sigma, 0.5, c(2.0 * PI, -2.0 * PI), "hexagonal n1 printed prefactor"),
        HexPreset::N2 => (Kind::Tau, 1.0 / 6.0, c(PI / s3, -PI / s3), "hexagonal n2"),
    };
    let mut factors = vec![Factor::new(lead, vec![c(1.0, 0.0), c(0.0, 0.0)], c(0.0, 0.0), Role::Preset)];
    for z in [c(offsets, 0.0), c(0.0, offsets), c(offsets, offsets)] {
        let mut f = Factor::new(Kind::Sigma, vec![c(0.0, 0.0), c(1.0 / s3, 0.0)], c(0.0, 0.0), Role::Preset);
        f.offset = -z;
        factors.push(f);
    }
    let f = LatticeFn {
        dim: 2,
        factors,
        prefactor: Prefactor { linear: vec![c(0.0, 0.0), lin], constant: c(0.0, 0.0) },
        meta: meta.into(),
    };
    (ComplexLattice::hexagonal(), f)
}
