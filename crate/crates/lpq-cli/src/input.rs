//! Problem-file schema and validation.
//!
//! One JSON problem per invocation. Unknown fields are rejected, and every
//! numeric field is validated against the library preconditions before any
//! computation runs.

use lpq::cylinder::CylinderSpec;
use lpq::hardy::HardyProblem;
use lpq::surface::SurfaceSpec;
use lpq::types::{make_exponents, Exponents, Interval, Tolerances};
use lpq::{parse_symfun, SymFun};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Num(f64),
    Word(String),
}

impl Bound {
    fn resolve(&self) -> Result<f64, String> {
        match self {
            Bound::Num(x) => Ok(*x),
            Bound::Word(w) if w == "inf" => Ok(f64::INFINITY),
            Bound::Word(w) => Err(format!("unrecognized endpoint {w:?} (use a number or \"inf\")")),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_doublings: Option<u32>,
    pub divergence_growth: Option<f64>,
    pub sup_grid_points: Option<u32>,
}

/// The on-disk problem description. Field applicability depends on `kind`:
/// `hardy`/`interval` use `v0`, `v1`, `interval`; `cylinder` adds `f`, `n`,
/// `j` and the pairing assertion; `surface` uses `f`, `n`, `j`; `oracle`
/// uses `f`, `interval`; `sweep` uses `n`, `j` and the three value grids.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema_version: String,
    pub kind: String,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub v0: Option<String>,
    pub v1: Option<String>,
    pub f: Option<String>,
    pub interval: Option<(Bound, Bound)>,
    pub n: Option<u32>,
    pub j: Option<u32>,
    pub fiber_pairing_nontrivial: Option<bool>,
    pub p_values: Option<Vec<f64>>,
    pub q_values: Option<Vec<f64>>,
    pub alpha_values: Option<Vec<f64>>,
    pub tolerances: Option<ToleranceOverrides>,
}

/// A fully validated problem ready to run.
pub struct Validated {
    pub file: ProblemFile,
    pub kind: Kind,
    pub tolerances: Tolerances,
}

pub enum Kind {
    Hardy(HardyProblem),
    Interval(HardyProblem),
    Cylinder(CylinderSpec),
    Surface(SurfaceSpec),
    Oracle { f: SymFun, interval: Interval },
    Sweep(SweepSpec),
}

pub struct SweepSpec {
    pub n: u32,
    pub j: u32,
    pub p_values: Vec<f64>,
    pub q_values: Vec<f64>,
    pub alpha_values: Vec<f64>,
}

fn need<T: Clone>(field: &Option<T>, name: &str, kind: &str) -> Result<T, String> {
    field
        .clone()
        .ok_or_else(|| format!("kind {kind:?} requires the field {name:?}"))
}

fn reject<T>(field: &Option<T>, name: &str, kind: &str) -> Result<(), String> {
    if field.is_some() {
        Err(format!("field {name:?} does not apply to kind {kind:?}"))
    } else {
        Ok(())
    }
}

fn exponents(file: &ProblemFile) -> Result<Exponents, String> {
    let p = need(&file.p, "p", &file.kind)?;
    let q = need(&file.q, "q", &file.kind)?;
    make_exponents(p, q).map_err(|e| e.to_string())
}

fn interval_of(file: &ProblemFile) -> Result<Interval, String> {
    let (lo, hi) = need(&file.interval, "interval", &file.kind)?;
    let (lo, hi) = (lo.resolve()?, hi.resolve()?);
    Interval::forward(lo, hi).map_err(|e| e.to_string())
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<ProblemFile, String> {
        let file: ProblemFile =
            serde_json::from_str(text).map_err(|e| format!("invalid problem file: {e}"))?;
        if file.schema_version != "1" {
            return Err(format!(
                "unsupported schema_version {:?} (expected \"1\")",
                file.schema_version
            ));
        }
        Ok(file)
    }

    /// Validates all fields against the module preconditions and builds the
    /// library-side problem.
    pub fn validate(self, expected_kind: &str) -> Result<Validated, String> {
        if self.kind != expected_kind {
            return Err(format!(
                "the input file has kind {:?} but the {expected_kind:?} command was invoked",
                self.kind
            ));
        }
        let mut tolerances = Tolerances::default();
        if let Some(o) = &self.tolerances {
            if let Some(x) = o.rel_tol {
                tolerances.rel_tol = x;
            }
            if let Some(x) = o.abs_tol {
                tolerances.abs_tol = x;
            }
            if let Some(x) = o.max_doublings {
                tolerances.max_doublings = x;
            }
            if let Some(x) = o.divergence_growth {
                tolerances.divergence_growth = x;
            }
            if let Some(x) = o.sup_grid_points {
                tolerances.sup_grid_points = x;
            }
        }
        tolerances.validate().map_err(|e| e.to_string())?;

        let kind = match self.kind.as_str() {
            k @ ("hardy" | "interval") => {
                reject(&self.f, "f", k)?;
                reject(&self.n, "n", k)?;
                reject(&self.j, "j", k)?;
                reject(&self.fiber_pairing_nontrivial, "fiber_pairing_nontrivial", k)?;
                reject(&self.p_values, "p_values", k)?;
                let exps = exponents(&self)?;
                let interval = interval_of(&self)?;
                let v0 = parse_symfun(&need(&self.v0, "v0", k)?, interval)
                    .map_err(|e| e.to_string())?;
                let v1 = parse_symfun(&need(&self.v1, "v1", k)?, interval)
                    .map_err(|e| e.to_string())?;
                let problem =
                    HardyProblem::new(exps, interval, v0, v1).map_err(|e| e.to_string())?;
                if k == "hardy" {
                    Kind::Hardy(problem)
                } else {
                    Kind::Interval(problem)
                }
            }
            k @ "cylinder" => {
                reject(&self.v0, "v0", k)?;
                reject(&self.v1, "v1", k)?;
                reject(&self.p_values, "p_values", k)?;
                let exps = exponents(&self)?;
                let interval = interval_of(&self)?;
                let warp = parse_symfun(&need(&self.f, "f", k)?, interval)
                    .map_err(|e| e.to_string())?;
                let spec = CylinderSpec::new(
                    warp,
                    interval,
                    need(&self.n, "n", k)?,
                    need(&self.j, "j", k)?,
                    exps,
                    self.fiber_pairing_nontrivial.unwrap_or(false),
                )
                .map_err(|e| e.to_string())?;
                Kind::Cylinder(spec)
            }
            k @ "surface" => {
                reject(&self.v0, "v0", k)?;
                reject(&self.v1, "v1", k)?;
                reject(&self.interval, "interval", k)?;
                reject(&self.fiber_pairing_nontrivial, "fiber_pairing_nontrivial", k)?;
                reject(&self.p_values, "p_values", k)?;
                let exps = exponents(&self)?;
                let domain = Interval::forward(0.0, f64::INFINITY).unwrap();
                let profile = parse_symfun(&need(&self.f, "f", k)?, domain)
                    .map_err(|e| e.to_string())?;
                let spec = SurfaceSpec::new(
                    profile,
                    need(&self.n, "n", k)?,
                    need(&self.j, "j", k)?,
                    exps,
                )
                .map_err(|e| e.to_string())?;
                Kind::Surface(spec)
            }
            k @ "oracle" => {
                reject(&self.v0, "v0", k)?;
                reject(&self.v1, "v1", k)?;
                reject(&self.p, "p", k)?;
                reject(&self.q, "q", k)?;
                let interval = interval_of(&self)?;
                let f = parse_symfun(&need(&self.f, "f", k)?, interval)
                    .map_err(|e| e.to_string())?;
                Kind::Oracle { f, interval }
            }
            k @ "sweep" => {
                reject(&self.v0, "v0", k)?;
                reject(&self.v1, "v1", k)?;
                reject(&self.f, "f", k)?;
                reject(&self.p, "p", k)?;
                reject(&self.q, "q", k)?;
                reject(&self.interval, "interval", k)?;
                Kind::Sweep(SweepSpec {
                    n: need(&self.n, "n", k)?,
                    j: need(&self.j, "j", k)?,
                    p_values: need(&self.p_values, "p_values", k)?,
                    q_values: need(&self.q_values, "q_values", k)?,
                    alpha_values: need(&self.alpha_values, "alpha_values", k)?,
                })
            }
            other => return Err(format!("unknown kind {other:?}")),
        };
        Ok(Validated {
            file: self,
            kind,
            tolerances,
        })
    }
}
