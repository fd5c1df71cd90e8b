//! Complex lattices `A·Z[i]^d`, basis reduction, sublattices `A·B·Z[i]^d`
//! and their coset representatives.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::cjson::complex_rows;
use crate::error::{domain, Error, Result};
use crate::zi::{divides, gcd_all, GaussInt};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Default cap on the number of coefficient vectors scanned by [`ComplexLattice::reduce`].
pub const REDUCE_BUDGET: usize = 4_000_000;

/// `Λ = A·Z[i]^d` with invertible complex generator `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexLattice {
    generator: CMatrix,
    inverse: CMatrix,
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    dim: usize,
    #[serde(with = "complex_rows")]
    generator: Vec<Vec<Complex64>>,
}

impl Serialize for ComplexLattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeJson { dim: self.dim(), generator: matrix_rows(&self.generator) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexLattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = LatticeJson::deserialize(d)?;
        if j.generator.len() != j.dim {
            return Err(serde::de::Error::custom(format!(
                "generator has {} rows but dim is {}",
                j.generator.len(),
                j.dim
            )));
        }
        ComplexLattice::from_rows(&j.generator).map_err(serde::de::Error::custom)
    }
}

pub fn matrix_rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

pub fn matrix_from_rows(rows: &[Vec<Complex64>]) -> Result<CMatrix> {
    let n = rows.len();
    if n == 0 {
        return domain("matrix must have at least one row");
    }
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return domain(format!("matrix must be square: {n} rows but a row of length {}", r.len()));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl ComplexLattice {
    pub fn new(generator: CMatrix) -> Result<Self> {
        if !generator.is_square() || generator.nrows() == 0 {
            return domain(format!(
                "generator must be a nonempty square matrix, got {}x{}",
                generator.nrows(),
                generator.ncols()
            ));
        }
        if generator.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return domain("generator has non-finite entries");
        }
        let det = generator.determinant();
        let scale = generator.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if det.norm() <= 1e-14 * scale.powi(generator.nrows() as i32) {
            return domain(format!("generator is singular (|det A| = {:e})", det.norm()));
        }
        let inverse = generator
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Domain("generator is singular".into()))?;
        Ok(ComplexLattice { generator, inverse })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        Self::new(matrix_from_rows(rows)?)
    }

    /// The square lattice `Z[i]^d`.
    pub fn standard(d: usize) -> Self {
        Self::new(CMatrix::identity(d, d)).expect("identity is invertible")
    }

    /// `[[1, 1/2], [0, √3/2]]·Z[i]²`.
    pub fn hexagonal() -> Self {
        Self::from_rows(&[vec![c(1.0, 0.0), c(0.5, 0.0)], vec![c(0.0, 0.0), c(3f64.sqrt() / 2.0, 0.0)]])
            .expect("hexagonal generator is invertible")
    }

    pub fn dim(&self) -> usize {
        self.generator.nrows()
    }

    pub fn generator(&self) -> &CMatrix {
        &self.generator
    }

    pub fn inverse(&self) -> &CMatrix {
        &self.inverse
    }

    pub fn det(&self) -> Complex64 {
        self.generator.determinant()
    }

    /// Points per unit volume of `R^{2d}`: `|det A|^{-2}`.
    pub fn density(&self) -> f64 {
        1.0 / self.det().norm_sqr()
    }

    /// `(A*)^{-1}·Z[i]^d`.
    pub fn adjoint(&self) -> ComplexLattice {
        ComplexLattice { generator: self.inverse.adjoint(), inverse: self.generator.adjoint() }
    }

    pub fn scaled_rows(&self, diag: &[f64]) -> Result<ComplexLattice> {
        if diag.len() != self.dim() {
            return domain(format!("expected {} scale factors, got {}", self.dim(), diag.len()));
        }
        let mut g = self.generator.clone();
        for (i, s) in diag.iter().enumerate() {
            g.row_mut(i).scale_mut(*s);
        }
        ComplexLattice::new(g)
    }

    pub fn point(&self, k: &[GaussInt]) -> Vec<Complex64> {
        let kc: Vec<Complex64> = k.iter().map(GaussInt::to_complex).collect();
        self.apply(&kc)
    }

    pub fn point_i64(&self, k: &[(i64, i64)]) -> Vec<Complex64> {
        let kc: Vec<Complex64> = k.iter().map(|&(a, b)| c(a as f64, b as f64)).collect();
        self.apply(&kc)
    }

    fn apply(&self, k: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim();
        (0..d).map(|i| (0..d).map(|j| self.generator[(i, j)] * k[j]).sum()).collect()
    }

    /// `A^{-1} z`.
    pub fn coefficients(&self, z: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim();
        (0..d).map(|i| (0..d).map(|j| self.inverse[(i, j)] * z[j]).sum()).collect()
    }

    /// Whether `A^{-1} z` is within `tol` of a Gaussian-integer vector.
    pub fn contains(&self, z: &[Complex64], tol: f64) -> bool {
        self.coefficients(z)
            .iter()
            .all(|k| (k.re - k.re.round()).abs() <= tol && (k.im - k.im.round()).abs() <= tol)
    }

    /// Lattice points with `|λ| ≤ radius`, ordered lexicographically in the
    /// coefficient vector `k = (Re k₁, Im k₁, Re k₂, ...)`.
    pub fn lattice_points_in_ball(&self, radius: f64) -> Vec<Vec<Complex64>> {
        self.lattice_coeffs_in_ball(radius).into_iter().map(|(_, p)| p).collect()
    }

    pub fn lattice_coeffs_in_ball(&self, radius: f64) -> Vec<(Vec<(i64, i64)>, Vec<Complex64>)> {
        if radius.is_nan() || radius < 0.0 {
            return Vec::new();
        }
        let d = self.dim();
        let bounds: Vec<i64> = (0..d)
            .map(|i| {
                let row: f64 = (0..d).map(|j| self.inverse[(i, j)].norm_sqr()).sum::<f64>().sqrt();
                (row * radius * (1.0 + 1e-12) + 1e-9).floor() as i64
            })
            .collect();
        let r2 = radius * radius * (1.0 + 1e-12);
        let mut out = Vec::new();
        for_each_box_vector(&bounds, |k| {
            let p = self.point_i64(k);
            let n2: f64 = p.iter().map(|z| z.norm_sqr()).sum();
            if n2 <= r2 {
                out.push((k.to_vec(), p));
            }
        });
        out
    }

    pub fn reduce(&self) -> Result<ReducedForm> {
        self.reduce_with_budget(REDUCE_BUDGET)
    }

    /// Minkowski reduction by exhaustive short-vector enumeration, followed by
    /// QR with positive diagonal and size reduction of `S`.
    pub fn reduce_with_budget(&self, budget: usize) -> Result<ReducedForm> {
        let d = self.dim();
        if d > 3 {
            return domain(format!("reduction supports d ≤ 3, got d = {d}"));
        }
        // cheap pairwise reduction first so the exhaustive box stays small
        let (pre, w0) = pairwise_reduce(&self.generator);
        let base = ComplexLattice::new(pre)?;
        let col_norm2 = |m: &CMatrix, j: usize| m.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>();
        let mut r2 = (0..d).map(|j| col_norm2(&base.generator, j)).fold(0.0, f64::max) * (1.0 + 1e-9);
        let chosen = loop {
            let bound = r2.sqrt();
            let bounds: Vec<i64> = (0..d)
                .map(|i| {
                    let row: f64 = (0..d).map(|j| base.inverse[(i, j)].norm_sqr()).sum::<f64>().sqrt();
                    (row * bound + 1e-9).floor() as i64
                })
                .collect();
            let volume: f64 = bounds.iter().map(|b| ((2 * b + 1) as f64).powi(2)).product();
            if volume > budget as f64 {
                return Err(Error::Resource {
                    what: "short-vector enumeration box".into(),
                    bound: format!("{volume:.0} coefficient vectors > budget {budget}"),
                });
            }
            let cands = short_candidates(&base, &w0, &bounds, r2);
            if let Some(ch) = greedy_basis(&cands, d)? {
                break ch;
            }
            r2 *= 4.0;
        };
        // candidates are already expressed in the coefficients of the original generator
        let w: Vec<Vec<GaussInt>> = (0..d)
            .map(|i| (0..d).map(|j| GaussInt::new(chosen[j][i].0, chosen[j][i].1)).collect())
            .collect();
        let wc = CMatrix::from_fn(d, d, |i, j| w[i][j].to_complex());
        let m = &self.generator * &wc;
        let (u, s) = gram_schmidt(&m);
        let mut form = ReducedForm { unitary: u, upper: s, basis_change: w };
        form.size_reduce();
        Ok(form)
    }
}

/// Calls `f` on every vector of `d` Gaussian integers with `|Re|, |Im| ≤ bounds[j]`,
/// in lexicographic order.
pub fn for_each_box_vector(bounds: &[i64], mut f: impl FnMut(&[(i64, i64)])) {
    let d = bounds.len();
    let mut k: Vec<(i64, i64)> = bounds.iter().map(|&b| (-b, -b)).collect();
    if d == 0 {
        return;
    }
    loop {
        f(&k);
        let mut j = d;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            let b = bounds[j];
            if k[j].1 < b {
                k[j].1 += 1;
                break;
            }
            k[j].1 = -b;
            if k[j].0 < b {
                k[j].0 += 1;
                break;
            }
            k[j].0 = -b;
        }
    }
}

/// Repeated pairwise size reduction and sorting by length. Returns `A·W0` and `W0`.
fn pairwise_reduce(a: &CMatrix) -> (CMatrix, Vec<Vec<GaussInt>>) {
    let d = a.nrows();
    let mut m = a.clone();
    let mut w: Vec<Vec<(i64, i64)>> =
        (0..d).map(|i| (0..d).map(|j| if i == j { (1, 0) } else { (0, 0) }).collect()).collect();
    for _ in 0..200 {
        let mut changed = false;
        // insertion sort that only moves a column past a clearly longer one
        let mut order: Vec<usize> = (0..d).collect();
        for i in 1..d {
            let mut j = i;
            while j > 0 && m.column(order[j]).norm() < m.column(order[j - 1]).norm() * (1.0 - 1e-9) {
                order.swap(j, j - 1);
                j -= 1;
            }
        }
        if order.iter().enumerate().any(|(i, &o)| i != o) {
            m = CMatrix::from_fn(d, d, |i, j| m[(i, order[j])]);
            w = (0..d).map(|i| (0..d).map(|j| w[i][order[j]]).collect()).collect();
            changed = true;
        }
        for j in 0..d {
            for k in 0..d {
                if j == k {
                    continue;
                }
                let bj = m.column(j).clone_owned();
                let nj: f64 = bj.iter().map(|z| z.norm_sqr()).sum();
                let bk = m.column(k).clone_owned();
                let nk: f64 = bk.iter().map(|z| z.norm_sqr()).sum();
                let x: Complex64 = bj.iter().zip(bk.iter()).map(|(p, q)| p.conj() * q).sum::<Complex64>() / nj;
                let mu = (x.re.round() as i64, x.im.round() as i64);
                if mu == (0, 0) {
                    continue;
                }
                let muc = c(mu.0 as f64, mu.1 as f64);
                let nb = &bk - &bj * muc;
                if nb.iter().map(|z| z.norm_sqr()).sum::<f64>() < nk * (1.0 - 1e-12) {
                    m.set_column(k, &nb);
                    for row in w.iter_mut() {
                        let (p, q) = row[j];
                        row[k].0 -= mu.0 * p - mu.1 * q;
                        row[k].1 -= mu.0 * q + mu.1 * p;
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let wg = w.iter().map(|r| r.iter().map(|&(x, y)| GaussInt::new(x, y)).collect()).collect();
    (m, wg)
}

struct Candidate {
    norm2: f64,
    k: Vec<(i64, i64)>,
}

fn short_candidates(lat: &ComplexLattice, w0: &[Vec<GaussInt>], bounds: &[i64], r2: f64) -> Vec<Candidate> {
    let d = w0.len();
    let w0i: Vec<Vec<(i64, i64)>> =
        w0.iter().map(|r| r.iter().map(|g| g.to_i64_pair().expect("small basis change")).collect()).collect();
    let mut cands = Vec::new();
    for_each_box_vector(bounds, |k| {
        let p = lat.point_i64(k);
        let n2: f64 = p.iter().map(|z| z.norm_sqr()).sum();
        if n2 > r2 {
            return;
        }
        let orig: Vec<(i64, i64)> = (0..d)
            .map(|i| {
                (0..d).fold((0, 0), |(x, y), l| {
                    let (a, b) = w0i[i][l];
                    (x + a * k[l].0 - b * k[l].1, y + a * k[l].1 + b * k[l].0)
                })
            })
            .collect();
        // one representative per line through 0: first nonzero entry in re > 0, im ≥ 0
        match orig.iter().find(|&&(a, b)| a != 0 || b != 0) {
            Some(&(a, b)) if a > 0 && b >= 0 => {}
            _ => return,
        }
        cands.push(Candidate { norm2: n2, k: orig });
    });
    cands.sort_by(|a, b| a.norm2.partial_cmp(&b.norm2).unwrap_or(Ordering::Equal));
    // ties in length are broken by small coefficients, then larger leading entries
    let mut start = 0;
    while start < cands.len() {
        let base = cands[start].norm2;
        let mut end = start + 1;
        while end < cands.len() && cands[end].norm2 - base <= 1e-9 * base.max(1e-300) {
            end += 1;
        }
        cands[start..end].sort_by(|a, b| {
            let l1 = |k: &[(i64, i64)]| k.iter().map(|&(x, y)| x.abs() + y.abs()).sum::<i64>();
            l1(&a.k).cmp(&l1(&b.k)).then_with(|| b.k.cmp(&a.k))
        });
        start = end;
    }
    cands
}

fn greedy_basis(cands: &[Candidate], d: usize) -> Result<Option<Vec<Vec<(i64, i64)>>>> {
    let mut chosen: Vec<Vec<(i64, i64)>> = Vec::new();
    for _ in 0..d {
        let mut found = None;
        for cand in cands {
            let mut cols = chosen.clone();
            cols.push(cand.k.clone());
            if extends_to_basis(&cols)? {
                found = Some(cand.k.clone());
                break;
            }
        }
        match found {
            Some(k) => chosen.push(k),
            None => return Ok(None),
        }
    }
    Ok(Some(chosen))
}

/// Columns `cols` (each of length d) extend to a Z[i]-basis iff the gcd of
/// their maximal minors is a unit.
fn extends_to_basis(cols: &[Vec<(i64, i64)>]) -> Result<bool> {
    let d = cols[0].len();
    let j = cols.len();
    let mut minors = Vec::new();
    for rows in subsets(d, j) {
        let m: Vec<Vec<GaussInt>> = rows
            .iter()
            .map(|&r| cols.iter().map(|col| GaussInt::new(col[r].0, col[r].1)).collect())
            .collect();
        minors.push(det_gauss(&m));
    }
    if minors.iter().all(GaussInt::is_zero) {
        return Ok(false);
    }
    Ok(gcd_all(minors.iter())?.is_unit())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Determinant by cofactor expansion; intended for d ≤ 3.
pub fn det_gauss(m: &[Vec<GaussInt>]) -> GaussInt {
    let n = m.len();
    match n {
        0 => GaussInt::one(),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {
            let mut acc = GaussInt::zero();
            for j in 0..n {
                let minor: Vec<Vec<GaussInt>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = &m[0][j] * &det_gauss(&minor);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

fn gram_schmidt(m: &CMatrix) -> (CMatrix, CMatrix) {
    let d = m.nrows();
    let mut u = CMatrix::zeros(d, d);
    let mut s = CMatrix::zeros(d, d);
    for j in 0..d {
        let mut v = m.column(j).clone_owned();
        for i in 0..j {
            let ui = u.column(i);
            let proj: Complex64 = ui.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            s[(i, j)] = proj;
            v -= ui * proj;
        }
        let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        s[(j, j)] = c(nv, 0.0);
        u.set_column(j, &(v / c(nv, 0.0)));
    }
    (u, s)
}

/// `A·W = U·S` with `W` unimodular over Z[i], `U` unitary and `S` upper
/// triangular with positive diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedForm {
    pub unitary: CMatrix,
    pub upper: CMatrix,
    pub basis_change: Vec<Vec<GaussInt>>,
}

fn round_outside(x: f64) -> i64 {
    if x.abs() > 0.5 * (1.0 + 1e-12) {
        x.round() as i64
    } else {
        0
    }
}

impl ReducedForm {
    fn size_reduce(&mut self) {
        let d = self.upper.nrows();
        for k in 1..d {
            for j in (0..k).rev() {
                let x = self.upper[(j, k)] / self.upper[(j, j)].re;
                let mu = (round_outside(x.re), round_outside(x.im));
                if mu == (0, 0) {
                    continue;
                }
                let muc = c(mu.0 as f64, mu.1 as f64);
                let mug = GaussInt::new(mu.0, mu.1);
                for i in 0..=j {
                    let v = self.upper[(i, j)];
                    self.upper[(i, k)] -= muc * v;
                }
                for row in self.basis_change.iter_mut() {
                    let v = &mug * &row[j];
                    row[k] = &row[k] - &v;
                }
            }
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.upper.nrows()).map(|j| self.upper[(j, j)].re).collect()
    }

    /// The lattice `S·Z[i]^d`.
    pub fn lattice(&self) -> Result<ComplexLattice> {
        ComplexLattice::new(self.upper.clone())
    }

    pub fn basis_change_complex(&self) -> CMatrix {
        let d = self.basis_change.len();
        CMatrix::from_fn(d, d, |i, j| self.basis_change[i][j].to_complex())
    }
}

/// `Γ = A·B·Z[i]^d` described by the integer matrix `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SublatticeSpec {
    b: Vec<Vec<GaussInt>>,
    delta_det: GaussInt,
    gcd_first_row: GaussInt,
}

impl SublatticeSpec {
    pub fn new(b: Vec<Vec<GaussInt>>) -> Result<Self> {
        let n = b.len();
        if n == 0 || b.iter().any(|r| r.len() != n) {
            return domain("B must be a nonempty square matrix");
        }
        if n > 3 {
            return domain(format!("sublattice matrices of size {n} are not supported (d ≤ 3)"));
        }
        let delta_det = det_gauss(&b);
        if delta_det.is_zero() {
            return domain("B is singular (det B = 0)");
        }
        let gcd_first_row = gcd_all(b[0].iter())?;
        Ok(SublatticeSpec { b, delta_det, gcd_first_row })
    }

    pub fn from_i64(rows: &[&[(i64, i64)]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&(x, y)| GaussInt::new(x, y)).collect()).collect())
    }

    pub fn identity(d: usize) -> Self {
        let b = (0..d)
            .map(|i| (0..d).map(|j| if i == j { GaussInt::one() } else { GaussInt::zero() }).collect())
            .collect();
        Self::new(b).expect("identity is invertible")
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn matrix(&self) -> &[Vec<GaussInt>] {
        &self.b
    }

    pub fn delta(&self) -> &GaussInt {
        &self.delta_det
    }

    pub fn gamma(&self) -> &GaussInt {
        &self.gcd_first_row
    }

    pub fn index(&self) -> BigInt {
        self.delta_det.norm()
    }

    pub fn complex_matrix(&self) -> CMatrix {
        let d = self.dim();
        CMatrix::from_fn(d, d, |i, j| self.b[i][j].to_complex())
    }

    fn require_two(&self) -> Result<()> {
        if self.dim() != 2 {
            return domain(format!("operation requires d = 2, got d = {}", self.dim()));
        }
        Ok(())
    }

    /// Entries of `B = [[a, c], [b, d]]`.
    pub fn entries(&self) -> Result<[&GaussInt; 4]> {
        self.require_two()?;
        Ok([&self.b[0][0], &self.b[0][1], &self.b[1][0], &self.b[1][1]])
    }

    /// Whether `v ∈ B·Z[i]^d`, by exact arithmetic on `adj(B)·v`.
    pub fn contains(&self, v: &[GaussInt]) -> Result<bool> {
        let [a, cc, b, d] = self.entries()?;
        let x = &(d * &v[0]) - &(cc * &v[1]);
        let y = &(a * &v[1]) - &(b * &v[0]);
        Ok(divides(&self.delta_det, &x)? && divides(&self.delta_det, &y)?)
    }

    /// Representatives of `Z[i]²/B·Z[i]²` as pairs `(δ₁, δ₂)` with
    /// `δ₁ ∈ γQ` and `δ₂ ∈ (Δ/γ)Q`, `Q = [0,1) + i[0,1)`.
    pub fn coset_reps(&self) -> Result<Vec<(GaussInt, GaussInt)>> {
        self.require_two()?;
        let g = self.gcd_first_row.clone();
        let second = self
            .delta_det
            .exact_div(&g)?
            .ok_or_else(|| Error::Domain("Δ/γ is not a Gaussian integer".into()))?;
        let first = square_points(&g);
        let rest = square_points(&second);
        let mut out = Vec::with_capacity(first.len() * rest.len());
        for d1 in &first {
            for d2 in &rest {
                out.push((d1.clone(), d2.clone()));
            }
        }
        Ok(out)
    }
}

/// `wQ ∩ Z[i]`, sorted by (re, im).
pub fn square_points(w: &GaussInt) -> Vec<GaussInt> {
    let n = w.norm();
    let span = w.re.abs() + w.im.abs();
    let wc = w.conj();
    let mut out = Vec::new();
    let mut x = -span.clone();
    while x <= span {
        let mut y = -span.clone();
        while y <= span {
            let g = GaussInt::new(x.clone(), y.clone());
            let p = &g * &wc;
            if !p.re.is_negative() && !p.im.is_negative() && p.re < n && p.im < n {
                out.push(g);
            }
            y += 1;
        }
        x += 1;
    }
    if w.is_zero() {
        out.clear();
    }
    out.sort_by(|a, b| (&a.re, &a.im).cmp(&(&b.re, &b.im)));
    out
}

/// Which divisibility test defines E₀: `Δ | cδ` (lead factor on the first
/// coordinate) or `Δ | aδ` (lead factor on the second).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    First,
    Second,
}

/// How tags outside E₀ are split between E₁ and E₂.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum E1Rule {
    #[default]
    AllToE2,
    AllToE1,
    /// The listed tags go to E₁, the others to E₂.
    Select(Vec<GaussInt>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetPartition {
    pub e0: Vec<GaussInt>,
    pub e1: Vec<GaussInt>,
    pub e2: Vec<GaussInt>,
    pub axis: Axis,
}

impl CosetPartition {
    /// Whether tag `δ` lies in E₀ by the exact test for `axis`.
    pub fn in_e0(spec: &SublatticeSpec, axis: Axis, delta: &GaussInt) -> Result<bool> {
        let [a, cc, _, _] = spec.entries()?;
        let coef = match axis {
            Axis::First => cc,
            Axis::Second => a,
        };
        divides(spec.delta(), &(coef * delta))
    }

    /// Checks disjointness, coverage of the representative set and the E₀ condition.
    pub fn validate(&self, spec: &SublatticeSpec) -> Result<()> {
        if !spec.gamma().is_unit() {
            return domain(format!("partition requires |gcd(a, c)| = 1, got gcd {}", spec.gamma()));
        }
        let reps: Vec<GaussInt> = spec.coset_reps()?.into_iter().map(|(_, d2)| d2).collect();
        let mut all: Vec<&GaussInt> = self.e0.iter().chain(&self.e1).chain(&self.e2).collect();
        all.sort();
        let before = all.len();
        all.dedup();
        if all.len() != before {
            return domain("partition classes are not disjoint");
        }
        let mut want: Vec<&GaussInt> = reps.iter().collect();
        want.sort();
        if all != want {
            return domain(format!(
                "partition does not cover the {} coset representatives exactly ({} tags given)",
                reps.len(),
                all.len()
            ));
        }
        for d in &self.e0 {
            if !Self::in_e0(spec, self.axis, d)? {
                let what = match self.axis {
                    Axis::First => "c·δ",
                    Axis::Second => "a·δ",
                };
                return domain(format!("E₀ tag {d}: Δ = {} does not divide {what}", spec.delta()));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.e0.len() + self.e1.len() + self.e2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Splits the representatives into E₀ = {δ : Δ/c | δ} (or Δ/a for
/// [`Axis::Second`]) and E₁, E₂ according to `rule`.
pub fn partition_cosets(spec: &SublatticeSpec, axis: Axis, rule: &E1Rule) -> Result<CosetPartition> {
    let [a, cc, _, _] = spec.entries()?;
    if !spec.gamma().is_unit() {
        return domain(format!("partition requires |gcd(a, c)| = 1, got gcd {}", spec.gamma()));
    }
    let (coef, name) = match axis {
        Axis::First => (cc, "c"),
        Axis::Second => (a, "a"),
    };
    // coef = 0 puts every tag in E₀, which is the Δ | coef·δ reading
    let divisor = if coef.is_zero() {
        None
    } else {
        match spec.delta().exact_div(coef)? {
            Some(q) => Some(q),
            None => {
                return domain(format!(
                    "Δ/{name} is not a Gaussian integer: Δ = {}, {name} = {coef}",
                    spec.delta()
                ))
            }
        }
    };
    let mut part = CosetPartition { e0: vec![], e1: vec![], e2: vec![], axis };
    for (_, d) in spec.coset_reps()? {
        let in0 = match &divisor {
            None => true,
            Some(q) => divides(q, &d)?,
        };
        if in0 {
            part.e0.push(d);
            continue;
        }
        let to_e1 = match rule {
            E1Rule::AllToE2 => false,
            E1Rule::AllToE1 => true,
            E1Rule::Select(list) => list.contains(&d),
        };
        if to_e1 {
            part.e1.push(d);
        } else {
            part.e2.push(d);
        }
    }
    Ok(part)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(a: i64, b: i64) -> GaussInt {
        GaussInt::new(a, b)
    }

    fn op_norm_inv(m: &CMatrix) -> f64 {
        let inv = m.clone().try_inverse().unwrap();
        inv.singular_values().max()
    }

    #[test]
    fn density_examples() {
        assert_eq!(ComplexLattice::standard(2).density(), 1.0);
        assert!((ComplexLattice::hexagonal().density() - 4.0 / 3.0).abs() < 1e-14);
        let l = ComplexLattice::from_rows(&[vec![c(0.8, 0.0)]]).unwrap();
        assert!((l.density() - 1.5625).abs() < 1e-14);
    }

    #[test]
    fn singular_generator_rejected() {
        let r = ComplexLattice::from_rows(&[vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(0.5, 0.0), c(1.0, 0.0)]]);
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn adjoint_examples() {
        let id = ComplexLattice::standard(2).adjoint();
        assert!((id.generator() - CMatrix::identity(2, 2)).norm() < 1e-15);
        let a = ComplexLattice::from_rows(&[vec![c(2.5, 0.0)]]).unwrap().adjoint();
        assert!((a.generator()[(0, 0)] - c(0.4, 0.0)).norm() < 1e-15);
        let h = ComplexLattice::hexagonal();
        let prod = h.adjoint().generator() * h.generator().adjoint();
        assert!((prod - CMatrix::identity(2, 2)).norm() < 1e-12);
        let twice = h.adjoint().adjoint();
        assert!((twice.generator() - h.generator()).norm() < 1e-12);
    }

    #[test]
    fn ball_examples() {
        assert_eq!(ComplexLattice::standard(1).lattice_points_in_ball(1.0).len(), 5);
        assert_eq!(ComplexLattice::standard(2).lattice_points_in_ball(1.0).len(), 9);
        let h = ComplexLattice::hexagonal();
        let pts = h.lattice_points_in_ball(2.0);
        let mut brute = 0;
        for_each_box_vector(&[4, 4], |k| {
            let p = h.point_i64(k);
            if p.iter().map(|z| z.norm_sqr()).sum::<f64>() <= 4.0 * (1.0 + 1e-12) {
                brute += 1;
            }
        });
        assert_eq!(pts.len(), brute);
        let coeffs: Vec<_> = h.lattice_coeffs_in_ball(2.0).into_iter().map(|(k, _)| k).collect();
        let mut sorted = coeffs.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(coeffs, sorted);
    }

    #[test]
    fn reduce_hexagonal_is_identity() {
        let h = ComplexLattice::hexagonal();
        let r = h.reduce().unwrap();
        assert!((&r.unitary - CMatrix::identity(2, 2)).norm() < 1e-12);
        assert!((&r.upper - h.generator()).norm() < 1e-12);
    }

    #[test]
    fn reduce_swaps_columns() {
        let l = ComplexLattice::from_rows(&[vec![c(2.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]).unwrap();
        let r = l.reduce().unwrap();
        assert!((r.diagonal()[0] - 1.0).abs() < 1e-14 && (r.diagonal()[1] - 2.0).abs() < 1e-14);
        assert!(r.upper[(0, 1)].norm() < 1e-14);
    }

    fn check_reduced(l: &ComplexLattice, r: &ReducedForm) {
        let d = l.dim();
        let u = &r.unitary;
        assert!((u.adjoint() * u - CMatrix::identity(d, d)).norm() < 1e-12);
        let w = r.basis_change_complex();
        assert!((w.determinant().norm() - 1.0).abs() < 1e-9);
        assert!((l.generator() * &w - u * &r.upper).norm() < 1e-10);
        for j in 0..d {
            assert!(r.upper[(j, j)].im == 0.0 && r.upper[(j, j)].re > 0.0);
            for i in (j + 1)..d {
                assert!(r.upper[(i, j)].norm() == 0.0);
            }
            for k in (j + 1)..d {
                let s = r.upper[(j, k)];
                let h = r.upper[(j, j)].re / 2.0 * (1.0 + 1e-9);
                assert!(s.re.abs() <= h && s.im.abs() <= h, "{s} vs {h}");
            }
        }
        let norms: Vec<f64> = (0..d).map(|j| r.upper.column(j).norm()).collect();
        for j in 1..d {
            assert!(norms[j - 1] <= norms[j] * (1.0 + 1e-9));
        }
        assert!((r.lattice().unwrap().density() - l.density()).abs() < 1e-9 * l.density());
    }

    #[test]
    fn reduce_shear() {
        let l = ComplexLattice::from_rows(&[vec![c(1.0, 0.0), c(0.9, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]).unwrap();
        let r = l.reduce().unwrap();
        check_reduced(&l, &r);
        assert!(r.upper[(0, 1)].re.abs() <= 0.5);
        // every column of A·W lies in Λ
        let aw = l.generator() * r.basis_change_complex();
        for j in 0..2 {
            let col: Vec<Complex64> = aw.column(j).iter().copied().collect();
            assert!(l.contains(&col, 1e-9));
        }
        // no basis from a coefficient box |k| ≤ 4 has smaller ‖A'^{-1}‖
        let best = op_norm_inv(&r.upper);
        let mut vs = Vec::new();
        for_each_box_vector(&[2, 2], |k| vs.push(k.to_vec()));
        for k1 in &vs {
            for k2 in &vs {
                let m = CMatrix::from_fn(2, 2, |i, j| {
                    let k = if j == 0 { k1 } else { k2 };
                    c(k[i].0 as f64, k[i].1 as f64)
                });
                if (m.determinant().norm() - 1.0).abs() > 1e-9 {
                    continue;
                }
                let alt = l.generator() * m;
                assert!(best <= op_norm_inv(&alt) * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn reduce_three_dim_and_budget() {
        let l = ComplexLattice::from_rows(&[
            vec![c(1.0, 0.0), c(0.7, 0.3), c(2.2, -0.4)],
            vec![c(0.0, 0.0), c(1.1, 0.0), c(0.9, 0.9)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.3, 0.0)],
        ])
        .unwrap();
        check_reduced(&l, &l.reduce().unwrap());
        assert!(matches!(l.reduce_with_budget(10), Err(Error::Resource { .. })));
        assert!(ComplexLattice::standard(4).reduce().is_err());
    }

    #[test]
    fn spec_matrix_examples() {
        let s = SublatticeSpec::from_i64(&[&[(1, 0), (-2, 0)], &[(0, 0), (4, 0)]]).unwrap();
        let reps = s.coset_reps().unwrap();
        assert_eq!(reps.len(), 16);
        assert!(reps.iter().all(|(d1, d2)| d1.is_zero() && (0..4).contains(&d2.to_i64_pair().unwrap().0)
            && (0..4).contains(&d2.to_i64_pair().unwrap().1)));
        let id = SublatticeSpec::identity(2);
        assert_eq!(id.coset_reps().unwrap(), vec![(g(0, 0), g(0, 0))]);
        assert!(SublatticeSpec::from_i64(&[&[(1, 0), (2, 0)], &[(2, 0), (4, 0)]]).is_err());
    }

    #[test]
    fn general_gcd_reps_are_complete() {
        // first-row gcd 1+i, so δ₁ takes two values
        let s = SublatticeSpec::from_i64(&[&[(2, 0), (1, 1)], &[(1, 0), (3, 0)]]).unwrap();
        let reps = s.coset_reps().unwrap();
        assert_eq!(BigInt::from(reps.len()), s.index());
        for_each_box_vector(&[5, 5], |k| {
            let kv = [g(k[0].0, k[0].1), g(k[1].0, k[1].1)];
            let hits = reps
                .iter()
                .filter(|(a, b)| s.contains(&[&kv[0] - a, &kv[1] - b]).unwrap())
                .count();
            assert_eq!(hits, 1);
        });
    }

    #[test]
    fn partition_examples() {
        let s = SublatticeSpec::from_i64(&[&[(1, 0), (-2, 0)], &[(0, 0), (4, 0)]]).unwrap();
        let p = partition_cosets(&s, Axis::First, &E1Rule::AllToE2).unwrap();
        assert_eq!(p.e0, vec![g(0, 0), g(0, 2), g(2, 0), g(2, 2)]);
        assert_eq!((p.e1.len(), p.e2.len()), (0, 12));
        p.validate(&s).unwrap();
        let p1 = partition_cosets(&s, Axis::First, &E1Rule::Select(vec![g(1, 0)])).unwrap();
        assert_eq!(p1.e1, vec![g(1, 0)]);
        p1.validate(&s).unwrap();

        let id = partition_cosets(&SublatticeSpec::identity(2), Axis::First, &E1Rule::AllToE2).unwrap();
        assert_eq!((id.e0.len(), id.e1.len(), id.e2.len()), (1, 0, 0));

        let s13 = SublatticeSpec::from_i64(&[&[(1, 0), (-1, 0)], &[(0, 0), (3, 0)]]).unwrap();
        let p13 = partition_cosets(&s13, Axis::First, &E1Rule::AllToE2).unwrap();
        assert_eq!(p13.e0, vec![g(0, 0)]);
        assert_eq!(p13.e2.len(), 8);

        let s25 = SublatticeSpec::from_i64(&[&[(1, 0), (-2, 0)], &[(0, 0), (5, 0)]]).unwrap();
        let err = partition_cosets(&s25, Axis::First, &E1Rule::AllToE2).unwrap_err();
        assert!(err.to_string().contains("Δ/c"), "{err}");
        let second = partition_cosets(&s25, Axis::Second, &E1Rule::AllToE2).unwrap();
        assert_eq!(second.e0, vec![g(0, 0)]);
    }

    #[test]
    fn validate_rejects_broken_partitions() {
        let s = SublatticeSpec::from_i64(&[&[(1, 0), (-2, 0)], &[(0, 0), (4, 0)]]).unwrap();
        let mut p = partition_cosets(&s, Axis::First, &E1Rule::AllToE2).unwrap();
        let moved = p.e2.pop().unwrap();
        assert!(p.validate(&s).is_err());
        p.e0.push(moved);
        assert!(p.validate(&s).is_err());
    }

    proptest! {
        #[test]
        fn density_invariant_under_basis_change(a in -2i64..3, b in -2i64..3, m in -2i64..3, n in -2i64..3) {
            // V = [[1, a+bi], [0, 1]]·[[1, 0], [m+ni, 1]] is unimodular
            let v1 = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(a as f64, b as f64), c(0.0, 0.0), c(1.0, 0.0)]);
            let v2 = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(m as f64, n as f64), c(1.0, 0.0)]);
            let h = ComplexLattice::hexagonal();
            let l = ComplexLattice::new(h.generator() * v1 * v2).unwrap();
            prop_assert!((l.density() - h.density()).abs() < 1e-9);
            let r = l.reduce().unwrap();
            prop_assert!((r.lattice().unwrap().density() - h.density()).abs() < 1e-9);
            prop_assert!((r.diagonal()[0] - 1.0).abs() < 1e-9);
        }

        #[test]
        fn square_points_count(a in -6i64..7, b in -6i64..7) {
            prop_assume!(a != 0 || b != 0);
            let w = g(a, b);
            prop_assert_eq!(BigInt::from(square_points(&w).len()), w.norm());
        }
    }
}
