//! Named constructions and JSON build specs.

use std::collections::BTreeMap;
use std::path::Path;

use focklat_core::builders::{
    build_sigma_lambda, build_tau_lambda, family_fail, family_rational, family_scaled, hexagonal_preset,
    interpolant_known, tensor_sigma, tensor_tau, Family, HexPreset, LatticeFn,
};
use focklat_core::lattice::{c, partition_cosets, Axis, CMatrix, CVector, ComplexLattice, E1Rule, SublatticeSpec};
use focklat_core::GaussInt;
use serde::Deserialize;

pub struct Built {
    pub name: String,
    pub lattice: ComplexLattice,
    pub function: LatticeFn,
    /// Lattice on which `function` interpolates, when it differs from `lattice`.
    pub adjoint: Option<ComplexLattice>,
}

pub const PRESET_HELP: &str = "hexagonal-n1, hexagonal-n1-printed, hexagonal-n2, fail:q=<gaussint>, \
corun:p=<int>,q=<int>, cormany:a=<real>,b=<real>,q=<gaussint>, tensor:identity<d>, tensor:hexagonal, \
tensor:<lattice.json>, known:<g1>[,<g2>...]; append -tau to fail, corun and tensor for the interpolating variant \
(fail-tau:q=2)";

fn params(body: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for item in body.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| format!("expected key=value, got {item:?}"))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn take<'a>(p: &'a BTreeMap<String, String>, key: &str, preset: &str) -> Result<&'a str, String> {
    p.get(key).map(String::as_str).ok_or_else(|| format!("preset {preset:?} needs parameter {key}="))
}

fn gauss(s: &str) -> Result<GaussInt, String> {
    s.parse::<GaussInt>().map_err(|e| e.to_string())
}

fn real(key: &str, s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|_| format!("{key} must be a real number, got {s:?}"))
}

fn int(key: &str, s: &str) -> Result<i64, String> {
    s.parse::<i64>().map_err(|_| format!("{key} must be an integer, got {s:?}"))
}

fn file_stem(path: &str) -> String {
    let stem = Path::new(path).file_stem().and_then(|s| s.to_str()).unwrap_or("input");
    stem.strip_suffix(".lattice").unwrap_or(stem).to_string()
}

/// File-safe name for a preset string.
pub fn slug(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' }).collect()
}

fn read_lattice(path: &str) -> Result<ComplexLattice, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    serde_json::from_str(&text).map_err(|e| format!("malformed lattice JSON in {path}: {e}"))
}

fn from_family(name: String, fam: Family, tau: bool) -> Result<Built, String> {
    let function = if tau { fam.tau().map_err(|e| e.to_string())? } else { fam.sigma };
    Ok(Built { name, lattice: fam.lattice, function, adjoint: None })
}

/// Builds a preset, or reads a JSON build spec when `spec` names an existing `.json` file.
pub fn build(spec: &str) -> Result<Built, String> {
    if spec.ends_with(".json") {
        return build_from_file(spec);
    }
    let name = slug(spec);
    let (head, body) = spec.split_once(':').unwrap_or((spec, ""));
    let (head, tau) = match head.strip_suffix("-tau") {
        Some(h) => (h, true),
        None => (head, false),
    };
    let err = |e: focklat_core::Error| e.to_string();
    match head {
        "hexagonal-n1" | "hexagonal-n1-printed" | "hexagonal-n2" if body.is_empty() && !tau => {
            let which = match head {
                "hexagonal-n1" => HexPreset::N1,
                "hexagonal-n1-printed" => HexPreset::N1Printed,
                _ => HexPreset::N2,
            };
            let (lattice, function) = hexagonal_preset(which);
            Ok(Built { name, lattice, function, adjoint: None })
        }
        "fail" => {
            let p = params(body)?;
            let q = gauss(take(&p, "q", spec)?)?;
            from_family(name, family_fail(&q).map_err(err)?, tau)
        }
        "corun" => {
            let p = params(body)?;
            let pv = int("p", take(&p, "p", spec)?)?;
            let qv = int("q", take(&p, "q", spec)?)?;
            from_family(name, family_rational(pv, qv).map_err(err)?, tau)
        }
        "cormany" if !tau => {
            let p = params(body)?;
            let a = real("a", take(&p, "a", spec)?)?;
            let b = real("b", take(&p, "b", spec)?)?;
            let q = gauss(take(&p, "q", spec)?)?;
            let (lattice, function) = family_scaled(a, b, &q).map_err(err)?;
            Ok(Built { name, lattice, function, adjoint: None })
        }
        "tensor" => {
            let lattice = if let Some(d) = body.strip_prefix("identity") {
                let d: usize = d.parse().map_err(|_| format!("tensor:identity<d> needs a dimension, got {body:?}"))?;
                if d == 0 {
                    return Err("tensor:identity<d> needs d ≥ 1".into());
                }
                ComplexLattice::standard(d)
            } else if body == "hexagonal" {
                ComplexLattice::hexagonal()
            } else if body.is_empty() {
                return Err(format!("preset {spec:?} needs identity<d>, hexagonal or a lattice file"));
            } else {
                read_lattice(body)?
            };
            let function = if tau { tensor_tau(lattice.generator()) } else { tensor_sigma(lattice.generator()) }
                .map_err(err)?;
            let name = if body.ends_with(".json") { format!("tensor{}_{}", if tau { "-tau" } else { "" }, file_stem(body)) } else { name };
            Ok(Built { name, lattice, function, adjoint: None })
        }
        "known" if !tau => {
            let gammas: Vec<f64> = body
                .split(',')
                .map(|s| real("γ", s.trim()))
                .collect::<Result<_, _>>()?;
            let s = CMatrix::from_diagonal(&CVector::from_iterator(gammas.len(), gammas.iter().map(|x| c(*x, 0.0))));
            let function = interpolant_known(&s).map_err(err)?;
            let lattice = ComplexLattice::new(s).map_err(err)?;
            let adjoint = lattice.adjoint();
            Ok(Built { name, lattice, function, adjoint: Some(adjoint) })
        }
        _ => Err(format!("unknown preset {spec:?}; expected one of: {PRESET_HELP}")),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BuildSpec {
    lattice: ComplexLattice,
    /// Sublattice matrix `B`; without it the tensor construction is used.
    #[serde(default)]
    sublattice: Option<Vec<Vec<GaussInt>>>,
    #[serde(default = "default_axis")]
    axis: Axis,
    /// Tags to place in E₁; every other tag outside E₀ goes to E₂.
    #[serde(default)]
    e1: Vec<GaussInt>,
    #[serde(default)]
    function: FunctionKind,
}

fn default_axis() -> Axis {
    Axis::First
}

#[derive(Deserialize, Default, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum FunctionKind {
    #[default]
    Sigma,
    Tau,
}

fn build_from_file(path: &str) -> Result<Built, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let spec: BuildSpec = serde_json::from_str(&text).map_err(|e| format!("malformed build spec in {path}: {e}"))?;
    let err = |e: focklat_core::Error| e.to_string();
    let function = match spec.sublattice {
        None => match spec.function {
            FunctionKind::Sigma => tensor_sigma(spec.lattice.generator()),
            FunctionKind::Tau => tensor_tau(spec.lattice.generator()),
        }
        .map_err(err)?,
        Some(b) => {
            let sub = SublatticeSpec::new(b).map_err(err)?;
            let rule = if spec.e1.is_empty() { E1Rule::AllToE2 } else { E1Rule::Select(spec.e1) };
            let part = partition_cosets(&sub, spec.axis, &rule).map_err(err)?;
            match spec.function {
                FunctionKind::Sigma => build_sigma_lambda(&spec.lattice, &sub, &part),
                FunctionKind::Tau => build_tau_lambda(&spec.lattice, &sub, &part),
            }
            .map_err(err)?
        }
    };
    Ok(Built { name: file_stem(path), lattice: spec.lattice, function, adjoint: None })
}
