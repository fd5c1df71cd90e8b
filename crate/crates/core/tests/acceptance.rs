//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero when an outcome differs from the recorded expectation.
//!
//! Two criteria are recorded as failing (see `KNOWN_FAILING`). Their lines
//! still say FAIL; the suite only tolerates them so that the rest of the
//! workspace tests stay meaningful, and it flags them if they start passing.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use focklat_core::builders::{
    family_fail, hexagonal_preset, interpolant_known, tensor_sigma, tensor_tau, HexPreset, LatticeFn,
};
use focklat_core::lattice::{c, CMatrix, ComplexLattice, SublatticeSpec};
use focklat_core::verify::{
    bargmann_coefficient, check_interpolating, check_vanishing, growth_at, lattice_fn_f2, lattice_fn_growth_at,
    reconstruction_trace, SampleWeight,
};
use focklat_core::weierstrass::{normalized_magnitude, FnEntire, ProductOracle};
use focklat_core::zi::{divides, gcd_gaussian};
use focklat_core::{GaussInt, SigmaEvaluator};
use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria whose failure is analysed and expected.
/// 6: the closed-form two-variable interpolating preset with offsets 1/6 does
///    not vanish on the hexagonal lattice (for example at (1/2, √3/2)).
/// 8: for γ = 1 the truncated reconstruction of the test functions converges
///    to rounding level, so its error does not stay non-decreasing.
const KNOWN_FAILING: &[u32] = &[6, 8];

const VANISH_TOL: f64 = 1e-8;
const INTERP_TOL: f64 = 1e-8;
const GROWTH_BAND: f64 = 0.10;

/// Frozen sup of `|F(z)| e^{-π|z|²/2}` over the step-0.25 grid, r ≤ 8.
const C_FAIL_2: f64 = 1.128_498_947_869_657_9e-7;
const C_FAIL_1_I: f64 = 3.922_458_355_777_821e-2;
const C_FAIL_2_I: f64 = 3.529_380_000_559_37e-12;
/// Same for the hexagonal product preset, r ≤ 6.
const C_HEX_N1: f64 = 7.196_217_782_237_686e-2;

struct Outcome {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn run(id: u32, name: &'static str, budget: Duration, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let t = Instant::now();
    let (ok, detail) = f();
    let elapsed = t.elapsed();
    let in_time = elapsed <= budget;
    let detail = if in_time { detail } else { format!("{detail}; over time budget {budget:?}") };
    Outcome { id, name, pass: ok && in_time, detail, elapsed }
}

fn g(a: i64, b: i64) -> GaussInt {
    GaussInt::new(a, b)
}

fn norm_i(z: &GaussInt) -> i64 {
    z.norm().try_into().unwrap()
}

/// `a | b` by enumerating every candidate quotient.
fn brute_divides(a: &GaussInt, b: &GaussInt) -> bool {
    if a.is_zero() {
        return b.is_zero();
    }
    let (na, nb) = (norm_i(a), norm_i(b));
    if nb % na != 0 {
        return false;
    }
    let bound = ((nb / na) as f64).sqrt() as i64 + 1;
    for x in -bound..=bound {
        for y in -bound..=bound {
            if &(a * &g(x, y)) == b {
                return true;
            }
        }
    }
    false
}

fn random_gauss(rng: &mut ChaCha8Rng) -> GaussInt {
    loop {
        let (x, y) = (rng.gen_range(-10i64..=10), rng.gen_range(-10i64..=10));
        if x * x + y * y <= 100 && (x, y) != (0, 0) {
            return g(x, y);
        }
    }
}

fn criterion_1() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut bad = 0usize;
    let mut divisible = 0usize;
    for _ in 0..500 {
        let (a, b) = (random_gauss(&mut rng), random_gauss(&mut rng));
        let fast = divides(&a, &b).unwrap();
        if fast {
            divisible += 1;
        }
        if fast != brute_divides(&a, &b) {
            bad += 1;
        }
        let d = gcd_gaussian(&a, &b).unwrap();
        let mut best = 0;
        for x in -10i64..=10 {
            for y in -10i64..=10 {
                let e = g(x, y);
                if !e.is_zero() && brute_divides(&e, &a) && brute_divides(&e, &b) {
                    best = best.max(norm_i(&e));
                }
            }
        }
        if !(brute_divides(&d, &a) && brute_divides(&d, &b) && norm_i(&d) == best) {
            bad += 1;
        }
    }
    (bad == 0, format!("500 pairs, {divisible} divisible, {bad} disagreements"))
}

fn criterion_2() -> (bool, String) {
    let cases: Vec<(&str, SublatticeSpec)> = vec![
        ("[[1,-2],[0,4]]", SublatticeSpec::from_i64(&[&[(1, 0), (-2, 0)], &[(0, 0), (4, 0)]]).unwrap()),
        ("[[1,-1],[0,3]]", SublatticeSpec::from_i64(&[&[(1, 0), (-1, 0)], &[(0, 0), (3, 0)]]).unwrap()),
        ("[[1,-2],[0,5]]", SublatticeSpec::from_i64(&[&[(1, 0), (-2, 0)], &[(0, 0), (5, 0)]]).unwrap()),
        ("[[2+i,1],[0,3]]", SublatticeSpec::from_i64(&[&[(2, 1), (1, 0)], &[(0, 0), (3, 0)]]).unwrap()),
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for (label, spec) in cases {
        let reps = spec.coset_reps().unwrap();
        let want: BigInt = spec.delta().norm();
        let card_ok = BigInt::from(reps.len()) == want;
        let side = (spec.delta().to_complex().norm()).ceil() as i64;
        let mut scan_ok = true;
        let mut scanned = 0usize;
        for a in -side..side {
            for b in -side..side {
                for x in -side..side {
                    for y in -side..side {
                        let v = [g(a, b), g(x, y)];
                        let hits = reps
                            .iter()
                            .filter(|(d1, d2)| spec.contains(&[&v[0] - d1, &v[1] - d2]).unwrap())
                            .count();
                        scanned += 1;
                        if hits != 1 {
                            scan_ok = false;
                        }
                    }
                }
            }
        }
        ok &= card_ok && scan_ok;
        notes.push(format!("{label}: {} reps, {scanned} vectors {}", reps.len(), if scan_ok { "ok" } else { "BAD" }));
    }
    (ok, notes.join("; "))
}

fn criterion_3(ev: &SigmaEvaluator) -> (bool, String) {
    let oracle = ProductOracle::new(60);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut worst = 0.0f64;
    let mut pts = Vec::new();
    while pts.len() < 200 {
        let z = c(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        if z.norm() <= 5.0 {
            pts.push(z);
        }
    }
    for z in &pts {
        let a = ev.sigma(*z);
        let b = oracle.eval(*z);
        let rel = ((a / b).to_complex() - c(1.0, 0.0)).norm();
        worst = worst.max(rel);
    }
    // periodicity is checked on the oracle, which does not use the quasi-periodic reduction
    let f = FnEntire::new(1, |z: &[Complex64]| oracle.eval(z[0]));
    let mut period = 0.0f64;
    for z in pts.iter().take(50) {
        let base = normalized_magnitude(&f, &[*z]);
        for l in [c(1.0, 0.0), c(0.0, 1.0), c(1.0, 1.0), c(2.0, -3.0)] {
            let moved = normalized_magnitude(&f, &[z + l]);
            period = period.max((moved / base - 1.0).abs());
        }
    }
    (
        worst <= 1e-8 && period <= 1e-8,
        format!("max relative error vs product oracle {worst:.2e}, periodicity defect {period:.2e}"),
    )
}

fn profile_within(f: &LatticeFn, ev: &SigmaEvaluator, radii: &[f64], frozen: f64) -> (bool, f64) {
    let p = lattice_fn_growth_at(f, ev, radii, 0.25).unwrap();
    let m = p.max();
    (m <= frozen * (1.0 + GROWTH_BAND), m)
}

fn criterion_4(ev: &SigmaEvaluator) -> (bool, String) {
    let (hex, n1) = hexagonal_preset(HexPreset::N1);
    let fam = family_fail(&g(2, 0)).unwrap();
    let v1 = check_vanishing(&n1.bind(ev), &hex, 4.0).unwrap();
    let v2 = check_vanishing(&fam.sigma.bind(ev), &fam.lattice, 4.0).unwrap();
    let radii = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
    let (g1, m1) = profile_within(&n1, ev, &radii, C_HEX_N1);
    let (g2, m2) = profile_within(&fam.sigma, ev, &radii, C_FAIL_2);
    let (_, printed) = hexagonal_preset(HexPreset::N1Printed);
    let pp = lattice_fn_growth_at(&printed, ev, &radii, 0.25).unwrap();
    let ok = v1.passes(VANISH_TOL) && v2.passes(VANISH_TOL) && v1.checked_points >= 48 && g1 && g2;
    (
        ok,
        format!(
            "preset: {} pts residual {:.1e}, sup {m1:.4e} (C* {C_HEX_N1:.4e}); general q=2: residual {:.1e}, sup {m2:.4e} (C* {C_FAIL_2:.4e}); printed prefactor control sup {:.2e}",
            v1.checked_points,
            v1.max_normalized_residual,
            v2.max_normalized_residual,
            pp.max()
        ),
    )
}

fn criterion_5(ev: &SigmaEvaluator) -> (bool, String) {
    let mut ok = true;
    let mut notes = Vec::new();
    for (q, frozen) in [(g(2, 0), C_FAIL_2), (g(1, 1), C_FAIL_1_I), (g(2, 1), C_FAIL_2_I)] {
        let fam = family_fail(&q).unwrap();
        let v = check_vanishing(&fam.sigma.bind(ev), &fam.lattice, 4.0).unwrap();
        let p = lattice_fn_growth_at(&fam.sigma, ev, &[4.0, 8.0], 0.25).unwrap();
        let (p4, p8) = (p.sup_normalized[0], p.sup_normalized[1]);
        let ratio = p8 / p4;
        let frozen_ok = (p.max() / frozen - 1.0).abs() <= GROWTH_BAND;
        let this = v.passes(VANISH_TOL) && (ratio - 1.0).abs() <= GROWTH_BAND && frozen_ok;
        ok &= this;
        notes.push(format!("q={q}: residual {:.1e}, p(8)/p(4) = {ratio:.4}", v.max_normalized_residual));
    }
    let th = tensor_sigma(ComplexLattice::hexagonal().generator()).unwrap();
    let p = growth_at(&th.bind(ev), &[4.0, 8.0], 0.25).unwrap();
    let ratio = p.sup_normalized[1] / p.sup_normalized[0];
    ok &= ratio >= PI.exp();
    notes.push(format!("tensor control p(8)/p(4) = {ratio:.2e}"));
    (ok, notes.join("; "))
}

fn criterion_6(ev: &SigmaEvaluator) -> (bool, String) {
    let fam = family_fail(&g(2, 0)).unwrap();
    let t = fam.tau().unwrap();
    let general = check_interpolating(&t.bind(ev), &fam.lattice, 4.0);
    let (hex, n2) = hexagonal_preset(HexPreset::N2);
    let preset = check_interpolating(&n2.bind(ev), &hex, 4.0);
    let describe = |r: &focklat_core::Result<focklat_core::verify::InterpolationReport>| match r {
        Ok(r) => format!("|F(0)| = {:.3e}, residual {:.2e}", r.origin_value.abs(), r.max_offorigin_residual),
        Err(e) => e.to_string(),
    };
    let pass = |r: &focklat_core::Result<focklat_core::verify::InterpolationReport>| {
        r.as_ref().is_ok_and(|r| !r.origin_value.is_zero() && r.passes(INTERP_TOL))
    };
    (
        pass(&general) && pass(&preset),
        format!("general q=2: {}; closed-form preset: {}", describe(&general), describe(&preset)),
    )
}

fn criterion_7(ev: &SigmaEvaluator) -> (bool, String) {
    let t08 = tensor_tau(&CMatrix::from_element(1, 1, c(1.25, 0.0))).unwrap();
    let t1 = tensor_tau(&CMatrix::identity(1, 1)).unwrap();
    let inc = |f: &LatticeFn| lattice_fn_f2(f, ev, 12.0, 0.25).unwrap() - lattice_fn_f2(f, ev, 6.0, 0.25).unwrap();
    let (a, b) = (inc(&t08), inc(&t1));
    (a.abs() < 1e-6 && b > 1e-3, format!("increment 6→12: τ(0.8z) {a:.2e}, τ(z) {b:.3e}"))
}

fn criterion_8(ev: &SigmaEvaluator) -> (bool, String) {
    let points = [c(0.3, 0.2), c(0.5, 0.0), c(-0.7, 0.45), c(0.1, -0.6), c(1.1, 0.9)];
    let radii = [4.0, 6.0, 8.0];
    let onef = |_: &[Complex64]| c(1.0, 0.0);
    let idf = |l: &[Complex64]| l[0];

    let lat = ComplexLattice::new(CMatrix::from_element(1, 1, c(0.8, 0.0))).unwrap();
    let gfun = interpolant_known(&CMatrix::from_element(1, 1, c(0.8, 0.0)))
        .unwrap()
        .normalized_at_origin(ev)
        .unwrap();
    let gb = gfun.bind(ev);
    let mut sub_ok = true;
    let (mut worst_c, mut worst_l) = (0.0f64, 0.0f64);
    for z in points {
        let tc = reconstruction_trace(&onef, &gb, &lat, &[z], &radii, c(1.0, 0.0), SampleWeight::Full).unwrap();
        let tl = reconstruction_trace(&idf, &gb, &lat, &[z], &radii, z, SampleWeight::Full).unwrap();
        worst_c = worst_c.max(tc.final_error());
        worst_l = worst_l.max(tl.final_error());
        sub_ok &= tc.final_error() < 1e-3 && tl.final_error() < 5e-3;
        sub_ok &= tc.non_increasing(1e-14) && tl.non_increasing(1e-14);
    }

    // which sample weight reproduces constants
    let z = [points[0]];
    let weights = [SampleWeight::Full, SampleWeight::Half];
    let good: Vec<SampleWeight> = weights
        .into_iter()
        .filter(|w| {
            reconstruction_trace(&onef, &gb, &lat, &z, &[8.0], c(1.0, 0.0), *w).unwrap().final_error() < 1e-3
        })
        .collect();
    let weight_ok = good == [SampleWeight::Full];

    let lat1 = ComplexLattice::standard(1);
    let g1 = tensor_tau(&CMatrix::identity(1, 1)).unwrap();
    let g1b = g1.bind(ev);
    let mut gamma1_nondecreasing = true;
    let mut gamma1_final = 0.0f64;
    for z in points {
        let tc = reconstruction_trace(&onef, &g1b, &lat1, &[z], &radii, c(1.0, 0.0), SampleWeight::Full).unwrap();
        let tl = reconstruction_trace(&idf, &g1b, &lat1, &[z], &radii, z, SampleWeight::Full).unwrap();
        gamma1_nondecreasing &= tc.non_decreasing() && tl.non_decreasing();
        gamma1_final = gamma1_final.max(tc.final_error()).max(tl.final_error());
    }
    (
        sub_ok && weight_ok && gamma1_nondecreasing,
        format!(
            "γ=0.8: max error const {worst_c:.1e}, linear {worst_l:.1e}, monotone {sub_ok}; constants reproduced by weight {good:?}; γ=1 non-decreasing {gamma1_nondecreasing} (max error at R=8 {gamma1_final:.1e})"
        ),
    )
}

fn criterion_9() -> (bool, String) {
    let mut worst = 0.0f64;
    let mut ok = true;
    for l in [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(1.0, 1.0)] {
        match bargmann_coefficient(&[l]) {
            Ok(r) => worst = worst.max(r.discrepancy()),
            Err(_) => ok = false,
        }
    }
    (ok && worst < 1e-6, format!("max |quadrature - closed form| = {worst:.1e}"))
}

fn main() -> ExitCode {
    let ev = SigmaEvaluator::validated(60, 1e-12).expect("evaluator self-check");
    let s = Duration::from_secs;
    let outcomes = vec![
        run(1, "Gaussian gcd and divisibility", s(1), criterion_1),
        run(2, "coset representatives", s(5), criterion_2),
        run(3, "sigma evaluator vs product oracle", s(30), || criterion_3(&ev)),
        run(4, "hexagonal model", s(120), || criterion_4(&ev)),
        run(5, "failure family growth", s(300), || criterion_5(&ev)),
        run(6, "interpolation", s(120), || criterion_6(&ev)),
        run(7, "F2 membership boundary", s(60), || criterion_7(&ev)),
        run(8, "weak reconstruction", s(120), || criterion_8(&ev)),
        run(9, "Bargmann bridge", s(10), criterion_9),
    ];
    let mut unexpected = 0;
    println!();
    for o in &outcomes {
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        let known = KNOWN_FAILING.contains(&o.id);
        let note = match (o.pass, known) {
            (false, true) => " [known failure]",
            (true, true) => " [unexpected pass: update KNOWN_FAILING]",
            (false, false) => " [unexpected failure]",
            (true, false) => "",
        };
        if o.pass == known {
            unexpected += 1;
        }
        println!(
            "criterion {} {}: {verdict}{note} ({:.2}s) {}",
            o.id,
            o.name,
            o.elapsed.as_secs_f64(),
            o.detail
        );
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    println!("acceptance: {passed}/{} criteria pass, {unexpected} unexpected outcomes", outcomes.len());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
