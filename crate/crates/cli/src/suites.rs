//! Verification suites and reproduction bundles.

use std::fmt::Write as _;
use std::path::PathBuf;

use focklat_core::builders::{
    family_fail, hexagonal_preset, interpolant_known, tensor_sigma, tensor_tau, HexPreset, LatticeFn,
};
use focklat_core::lattice::{c, CMatrix, ComplexLattice};
use focklat_core::verify::{
    check_interpolating, check_vanishing, lattice_fn_f2, lattice_fn_growth, lattice_fn_growth_at,
    reconstruction_trace, GrowthProfile, InterpolationReport, ReconstructionTrace, SampleWeight, VanishingReport,
};
use focklat_core::{Error, GaussInt, SigmaEvaluator};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::{Format, RunConfig};

pub const VANISH_TOL: f64 = 1e-8;
pub const INTERP_TOL: f64 = 1e-8;
/// A profile counts as growing when its outer half exceeds its inner half by this factor.
pub const GROWTH_FACTOR: f64 = 10.0;
pub const F2_TOL: f64 = 1e-6;
pub const RECON_CONST_TOL: f64 = 1e-3;
pub const RECON_LINEAR_TOL: f64 = 5e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Vanish,
    Interp,
    Growth,
    F2,
    Reconstruct,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Vanish => "vanish",
            Suite::Interp => "interp",
            Suite::Growth => "growth",
            Suite::F2 => "f2",
            Suite::Reconstruct => "reconstruct",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Bundle {
    ThmFail,
    WeakSampling,
    Hexagonal,
}

pub struct Outcome {
    pub pass: bool,
    pub files: Vec<PathBuf>,
    pub message: String,
}

pub struct Ctx {
    pub cfg: RunConfig,
    pub ev: SigmaEvaluator,
}

impl Ctx {
    pub fn new(cfg: RunConfig) -> Result<Self, String> {
        let ev = SigmaEvaluator::validated(cfg.sigma_truncation, cfg.snap_tol).map_err(|e| e.to_string())?;
        Ok(Ctx { cfg, ev })
    }

    fn write(&self, name: &str, ext: &str, body: &str) -> Result<PathBuf, String> {
        std::fs::create_dir_all(&self.cfg.output_dir)
            .map_err(|e| format!("cannot create {}: {e}", self.cfg.output_dir.display()))?;
        let path = self.cfg.output_dir.join(format!("{name}.{ext}"));
        std::fs::write(&path, body).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        Ok(path)
    }

    fn ext(&self) -> &'static str {
        match self.cfg.format {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf, String> {
        let mut s = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
        s.push('\n');
        self.write(name, "json", &s)
    }

    fn write_report<T: Serialize>(&self, name: &str, value: &T, csv: impl FnOnce() -> String) -> Result<PathBuf, String> {
        match self.cfg.format {
            Format::Json => self.write_json(name, value),
            Format::Csv => self.write(name, self.ext(), &csv()),
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    suite: Suite,
    function: &'a str,
    pass: bool,
    threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostic: Option<String>,
    config: &'a RunConfig,
    report: Option<T>,
}

fn complex_cell(z: Complex64) -> String {
    format!("{},{}", z.re, z.im)
}

fn vanish(ctx: &Ctx, f: &LatticeFn, lat: &ComplexLattice, radius: f64) -> Result<VanishingReport, String> {
    check_vanishing(&f.bind(&ctx.ev), lat, radius).map_err(|e| e.to_string())
}

fn interp(ctx: &Ctx, f: &LatticeFn, lat: &ComplexLattice, radius: f64) -> Result<Option<InterpolationReport>, String> {
    match check_interpolating(&f.bind(&ctx.ev), lat, radius) {
        Ok(r) => Ok(Some(r)),
        Err(Error::OriginValueZero) => Ok(None),
        Err(e) => Err(e.to_string()),
    }
}

/// Outer half of the profile against the inner half.
fn growth_ratio(p: &GrowthProfile) -> f64 {
    let rmax = p.radii.iter().copied().fold(0.0, f64::max);
    let (mut inner, mut outer) = (0.0f64, 0.0f64);
    for (r, s) in p.radii.iter().zip(&p.sup_normalized) {
        if *r <= rmax / 2.0 {
            inner = inner.max(*s);
        } else {
            outer = outer.max(*s);
        }
    }
    if inner == 0.0 {
        if outer == 0.0 { 1.0 } else { f64::INFINITY }
    } else {
        outer / inner
    }
}

fn reconstruction_points(d: usize) -> Vec<Vec<Complex64>> {
    [c(0.3, 0.2), c(0.5, 0.0), c(-0.7, 0.45), c(0.1, -0.6), c(1.1, 0.9)]
        .iter()
        .map(|z| {
            let mut v = vec![c(0.0, 0.0); d];
            v[0] = *z;
            v
        })
        .collect()
}

#[derive(Serialize)]
struct ReconstructionReport {
    weight: SampleWeight,
    constant: Vec<ReconstructionTrace>,
    linear: Vec<ReconstructionTrace>,
}

fn reconstruct(ctx: &Ctx, g: &LatticeFn, lat: &ComplexLattice, radius: f64) -> Result<ReconstructionReport, String> {
    let g = g.normalized_at_origin(&ctx.ev).map_err(|e| format!("reconstruction kernel: {e}"))?;
    let gb = g.bind(&ctx.ev);
    let radii = [radius / 2.0, 0.75 * radius, radius];
    let onef = |_: &[Complex64]| c(1.0, 0.0);
    let first = |l: &[Complex64]| l[0];
    let mut constant = Vec::new();
    let mut linear = Vec::new();
    for z in reconstruction_points(lat.dim()) {
        let trace = |f: &(dyn Fn(&[Complex64]) -> Complex64 + Sync), want: Complex64| {
            reconstruction_trace(&f, &gb, lat, &z, &radii, want, SampleWeight::Full).map_err(|e| e.to_string())
        };
        constant.push(trace(&onef, c(1.0, 0.0))?);
        linear.push(trace(&first, z[0])?);
    }
    Ok(ReconstructionReport { weight: SampleWeight::Full, constant, linear })
}

fn reconstruction_passes(r: &ReconstructionReport) -> bool {
    r.constant.iter().all(|t| t.final_error() < RECON_CONST_TOL && t.non_increasing(1e-14))
        && r.linear.iter().all(|t| t.final_error() < RECON_LINEAR_TOL && t.non_increasing(1e-14))
}

fn trace_csv(out: &mut String, label: &str, traces: &[ReconstructionTrace]) {
    for t in traces {
        for ((r, v), e) in t.radii.iter().zip(&t.values).zip(&t.errors) {
            let _ = writeln!(out, "{label},{},{r},{},{e}", complex_cell(t.z[0]), complex_cell(*v));
        }
    }
}

fn plot_file(p: &GrowthProfile) -> String {
    let mut s = String::from("# radius sup_normalized\n");
    for (r, v) in p.radii.iter().zip(&p.sup_normalized) {
        let _ = writeln!(s, "{r} {v}");
    }
    s
}

/// Runs one suite and writes its report (and, for growth, a plot file).
pub fn verify(ctx: &Ctx, f: &LatticeFn, lat: &ComplexLattice, stem: &str, suite: Suite) -> Result<Outcome, String> {
    if f.dim != lat.dim() {
        return Err(format!("function has d = {} but lattice has d = {}", f.dim, lat.dim()));
    }
    let cfg = &ctx.cfg;
    let radius = cfg.max_radius;
    let name = format!("{stem}.{}", suite.name());
    let mut files = Vec::new();
    let (pass, message) = match suite {
        Suite::Vanish => {
            let r = vanish(ctx, f, lat, radius)?;
            let pass = r.passes(VANISH_TOL);
            let msg = format!(
                "vanish: {} lattice points, max normalized residual {:e} (threshold {VANISH_TOL:e})",
                r.checked_points, r.max_normalized_residual
            );
            let env = Envelope { suite, function: &f.meta, pass, threshold: VANISH_TOL, diagnostic: None, config: cfg, report: Some(&r) };
            files.push(ctx.write_report(&name, &env, || {
                format!(
                    "lattice_radius,checked_points,max_normalized_residual,pass\n{},{},{},{pass}\n",
                    r.lattice_radius, r.checked_points, r.max_normalized_residual
                )
            })?);
            (pass, msg)
        }
        Suite::Interp => {
            let r = interp(ctx, f, lat, radius)?;
            let (pass, msg, diag) = match &r {
                Some(r) => {
                    let pass = r.passes(INTERP_TOL);
                    let msg = format!(
                        "interp: |F(0)| = {:e}, max off-origin residual {:e} relative to |F(0)| (threshold {INTERP_TOL:e})",
                        r.origin_value.abs(),
                        r.max_offorigin_residual
                    );
                    (pass, msg, None)
                }
                None => (false, "interp: origin value zero, the function cannot be interpolating".to_string(), Some("origin value zero".to_string())),
            };
            let env = Envelope { suite, function: &f.meta, pass, threshold: INTERP_TOL, diagnostic: diag, config: cfg, report: r.as_ref() };
            files.push(ctx.write_report(&name, &env, || match &r {
                Some(r) => format!(
                    "lattice_radius,checked_points,origin_log_mag,origin_phase,max_offorigin_residual,max_offorigin_absolute,pass\n{},{},{},{},{},{},{pass}\n",
                    r.lattice_radius,
                    r.checked_points,
                    r.origin_value.log_mag,
                    r.origin_value.phase,
                    r.max_offorigin_residual,
                    r.max_offorigin_absolute
                ),
                None => "lattice_radius,diagnostic,pass\n".to_string() + &format!("{radius},origin value zero,false\n"),
            })?);
            (pass, msg)
        }
        Suite::Growth => {
            let p = lattice_fn_growth(f, &ctx.ev, radius, cfg.grid_step).map_err(|e| e.to_string())?;
            let ratio = growth_ratio(&p);
            let pass = ratio <= GROWTH_FACTOR;
            let msg = format!(
                "growth: sup over r ≤ {radius} is {:e}; outer/inner half ratio {ratio:e} (threshold {GROWTH_FACTOR})",
                p.max()
            );
            let env = Envelope { suite, function: &f.meta, pass, threshold: GROWTH_FACTOR, diagnostic: None, config: cfg, report: Some(&p) };
            files.push(ctx.write_report(&name, &env, || {
                let mut s = String::from("radius,sup_normalized\n");
                for (r, v) in p.radii.iter().zip(&p.sup_normalized) {
                    let _ = writeln!(s, "{r},{v}");
                }
                s
            })?);
            files.push(ctx.write(&format!("{stem}.growth"), "dat", &plot_file(&p))?);
            (pass, msg)
        }
        Suite::F2 => {
            let half = lattice_fn_f2(f, &ctx.ev, radius / 2.0, cfg.grid_step).map_err(|e| e.to_string())?;
            let full = lattice_fn_f2(f, &ctx.ev, radius, cfg.grid_step).map_err(|e| e.to_string())?;
            let inc = (full - half).abs();
            let pass = inc <= F2_TOL * full.abs().max(1.0);
            #[derive(Serialize)]
            struct F2Report {
                radii: [f64; 2],
                integrals: [f64; 2],
                increment: f64,
            }
            let r = F2Report { radii: [radius / 2.0, radius], integrals: [half, full], increment: inc };
            let env = Envelope { suite, function: &f.meta, pass, threshold: F2_TOL, diagnostic: None, config: cfg, report: Some(&r) };
            files.push(ctx.write_report(&name, &env, || {
                format!("radius,integral\n{},{half}\n{radius},{full}\n", radius / 2.0)
            })?);
            (pass, format!("f2: integral {full:e} at r = {radius}, increment from r = {} is {inc:e}", radius / 2.0))
        }
        Suite::Reconstruct => {
            let r = reconstruct(ctx, f, lat, radius)?;
            let pass = reconstruction_passes(&r);
            let worst_c = r.constant.iter().map(ReconstructionTrace::final_error).fold(0.0, f64::max);
            let worst_l = r.linear.iter().map(ReconstructionTrace::final_error).fold(0.0, f64::max);
            let env = Envelope { suite, function: &f.meta, pass, threshold: RECON_CONST_TOL, diagnostic: None, config: cfg, report: Some(&r) };
            files.push(ctx.write_report(&name, &env, || {
                let mut s = String::from("function,z_re,z_im,radius,value_re,value_im,error\n");
                trace_csv(&mut s, "constant", &r.constant);
                trace_csv(&mut s, "linear", &r.linear);
                s
            })?);
            (pass, format!("reconstruct: max error constant {worst_c:e}, linear {worst_l:e} at r = {radius}"))
        }
    };
    Ok(Outcome { pass, files, message })
}

#[derive(Serialize)]
pub struct Row {
    pub check: String,
    pub value: f64,
    pub threshold: f64,
    /// What the construction is expected to do: `pass`, or `fail` for negative controls.
    pub expect: &'static str,
    pub outcome: &'static str,
}

fn row(check: impl Into<String>, value: f64, threshold: f64, passed: bool, expect_pass: bool) -> Row {
    Row {
        check: check.into(),
        value,
        threshold,
        expect: if expect_pass { "pass" } else { "fail" },
        outcome: if passed { "pass" } else { "fail" },
    }
}

fn fail_families() -> [(GaussInt, &'static str); 3] {
    [(GaussInt::new(2, 0), "2"), (GaussInt::new(1, 1), "1+i"), (GaussInt::new(2, 1), "2+i")]
}

fn thm_fail(ctx: &Ctx) -> Result<Vec<Row>, String> {
    let mut rows = Vec::new();
    let radii: Vec<f64> = (1..=8).map(f64::from).collect();
    let err = |e: Error| e.to_string();
    for (q, label) in fail_families() {
        let fam = family_fail(&q).map_err(err)?;
        let v = vanish(ctx, &fam.sigma, &fam.lattice, 4.0)?;
        rows.push(row(format!("fail q={label} vanish r=4"), v.max_normalized_residual, VANISH_TOL, v.passes(VANISH_TOL), true));
        let p = lattice_fn_growth_at(&fam.sigma, &ctx.ev, &radii, ctx.cfg.grid_step).map_err(err)?;
        let ratio = p.sup_normalized[7] / p.sup_normalized[3];
        rows.push(row(format!("fail q={label} growth p(8)/p(4)"), ratio, 1.1, (ratio - 1.0).abs() <= 0.1, true));
        ctx.write_json(&format!("thm-fail.q{}.growth", crate::presets::slug(label)), &p)?;
    }
    let th = tensor_sigma(ComplexLattice::hexagonal().generator()).map_err(err)?;
    let p = lattice_fn_growth_at(&th, &ctx.ev, &[4.0, 8.0], ctx.cfg.grid_step).map_err(err)?;
    let ratio = p.sup_normalized[1] / p.sup_normalized[0];
    rows.push(row("tensor hexagonal growth p(8)/p(4)", ratio, 1.1, (ratio - 1.0).abs() <= 0.1, false));
    Ok(rows)
}

fn hexagonal(ctx: &Ctx) -> Result<Vec<Row>, String> {
    let mut rows = Vec::new();
    let err = |e: Error| e.to_string();
    let radii: Vec<f64> = (1..=6).map(f64::from).collect();
    let growth = |f: &LatticeFn| -> Result<f64, String> {
        Ok(growth_ratio(&lattice_fn_growth_at(f, &ctx.ev, &radii, ctx.cfg.grid_step).map_err(err)?))
    };
    for (label, which, expect_bounded) in [
        ("preset n1", HexPreset::N1, true),
        ("preset n1 printed prefactor", HexPreset::N1Printed, false),
    ] {
        let (lat, f) = hexagonal_preset(which);
        let v = vanish(ctx, &f, &lat, 4.0)?;
        rows.push(row(format!("{label} vanish r=4"), v.max_normalized_residual, VANISH_TOL, v.passes(VANISH_TOL), true));
        let g = growth(&f)?;
        rows.push(row(format!("{label} growth outer/inner"), g, GROWTH_FACTOR, g <= GROWTH_FACTOR, expect_bounded));
    }
    let fam = family_fail(&GaussInt::new(2, 0)).map_err(err)?;
    let v = vanish(ctx, &fam.sigma, &fam.lattice, 4.0)?;
    rows.push(row("general q=2 vanish r=4", v.max_normalized_residual, VANISH_TOL, v.passes(VANISH_TOL), true));
    let g = growth(&fam.sigma)?;
    rows.push(row("general q=2 growth outer/inner", g, GROWTH_FACTOR, g <= GROWTH_FACTOR, true));
    let th = tensor_sigma(ComplexLattice::hexagonal().generator()).map_err(err)?;
    let g = growth(&th)?;
    rows.push(row("tensor hexagonal growth outer/inner", g, GROWTH_FACTOR, g <= GROWTH_FACTOR, false));
    let tau = fam.tau().map_err(err)?;
    let (_, n2) = hexagonal_preset(HexPreset::N2);
    for (label, f) in [("general q=2 tau", &tau), ("preset n2", &n2)] {
        let r = interp(ctx, f, &fam.lattice, 4.0)?;
        let value = r.as_ref().map_or(f64::INFINITY, |r| r.max_offorigin_residual);
        rows.push(row(format!("{label} interp r=4"), value, INTERP_TOL, value < INTERP_TOL, true));
    }
    Ok(rows)
}

fn weak_sampling(ctx: &Ctx) -> Result<Vec<Row>, String> {
    let mut rows = Vec::new();
    let err = |e: Error| e.to_string();
    for gamma in [0.8, 1.0] {
        let lat = ComplexLattice::new(CMatrix::from_element(1, 1, c(gamma, 0.0))).map_err(err)?;
        let g = interpolant_known(&CMatrix::from_element(1, 1, c(gamma, 0.0))).map_err(err)?;
        let r = reconstruct(ctx, &g, &lat, 8.0)?;
        ctx.write_json(&format!("weak-sampling.gamma{gamma}"), &r)?;
        let worst_c = r.constant.iter().map(ReconstructionTrace::final_error).fold(0.0, f64::max);
        let worst_l = r.linear.iter().map(ReconstructionTrace::final_error).fold(0.0, f64::max);
        if gamma < 1.0 {
            rows.push(row("gamma=0.8 constant error r=8", worst_c, RECON_CONST_TOL, worst_c < RECON_CONST_TOL, true));
            rows.push(row("gamma=0.8 linear error r=8", worst_l, RECON_LINEAR_TOL, worst_l < RECON_LINEAR_TOL, true));
            let mono = r.constant.iter().chain(&r.linear).all(|t| t.non_increasing(1e-14));
            rows.push(row("gamma=0.8 error non-increasing 4,6,8", f64::from(u8::from(mono)), 1.0, mono, true));
        } else {
            let nondec = r.constant.iter().chain(&r.linear).all(ReconstructionTrace::non_decreasing);
            rows.push(row("gamma=1 error non-decreasing 4,6,8", worst_c.max(worst_l), 0.0, nondec, true));
        }
    }
    // which sample weight reproduces constants
    let lat = ComplexLattice::new(CMatrix::from_element(1, 1, c(0.8, 0.0))).map_err(err)?;
    let g = tensor_tau(&CMatrix::from_element(1, 1, c(1.25, 0.0))).map_err(err)?;
    for (label, w, expect) in [("weight exp(-pi|l|^2)", SampleWeight::Full, true), ("weight exp(-pi|l|^2/2)", SampleWeight::Half, false)] {
        let t = reconstruction_trace(&|_: &[Complex64]| c(1.0, 0.0), &g.bind(&ctx.ev), &lat, &[c(0.3, 0.2)], &[8.0], c(1.0, 0.0), w)
            .map_err(err)?;
        rows.push(row(format!("{label} reproduces constants"), t.final_error(), RECON_CONST_TOL, t.final_error() < RECON_CONST_TOL, expect));
    }
    Ok(rows)
}

/// Runs a bundle and writes its summary table. Passes when every row behaves as expected.
pub fn repro(ctx: &Ctx, bundle: Bundle) -> Result<Outcome, String> {
    let (name, rows) = match bundle {
        Bundle::ThmFail => ("thm-fail", thm_fail(ctx)?),
        Bundle::WeakSampling => ("weak-sampling", weak_sampling(ctx)?),
        Bundle::Hexagonal => ("hexagonal", hexagonal(ctx)?),
    };
    let pass = rows.iter().all(|r| r.expect == r.outcome);
    let summary = format!("{name}.summary");
    let file = ctx.write_report(&summary, &rows, || {
        let mut s = String::from("check,value,threshold,expect,outcome\n");
        for r in &rows {
            let _ = writeln!(s, "{},{},{},{},{}", r.check, r.value, r.threshold, r.expect, r.outcome);
        }
        s
    })?;
    let mut message = String::new();
    for r in &rows {
        let flag = if r.expect == r.outcome { "ok" } else { "MISMATCH" };
        let _ = writeln!(message, "{flag:8} {:48} value {:e} (expect {}, got {})", r.check, r.value, r.expect, r.outcome);
    }
    Ok(Outcome { pass, files: vec![file], message })
}
