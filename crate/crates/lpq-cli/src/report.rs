//! Report assembly: every command emits the same top-level key set in a
//! fixed order, with nulls where a key does not apply.

use crate::input::{Bound, Kind, ProblemFile, SweepSpec, Validated};
use crate::json::Json;
use lpq::cylinder::classify_cylinder;
use lpq::half_interval::classify_interval;
use lpq::hardy::{hardy_constant, ArgmaxTau, HardyProblem, HardyResult, Regime};
use lpq::surface::{classify_surface, SurfaceSpec};
use lpq::symfun::SymFun;
use lpq::types::{ExtendedValue, Interval, LpqError, Side, Tolerances, Verdict};

pub struct Outcome {
    pub report: Json,
    /// exit code: 0 ok, 3 when a numeric tolerance failure degraded the
    /// report (validation failures exit 2 before a report exists)
    pub exit: i32,
    /// profile samples for --emit-profile
    pub profile: Vec<(f64, f64)>,
}

fn bound_json(b: &Bound) -> Json {
    match b {
        Bound::Num(x) => Json::num(*x),
        Bound::Word(w) => Json::str(w.clone()),
    }
}

/// Echo of the validated input, re-parseable as a problem file.
fn input_echo(file: &ProblemFile) -> Json {
    let mut fields: Vec<(&str, Json)> = vec![
        ("schema_version", Json::str(file.schema_version.clone())),
        ("kind", Json::str(file.kind.clone())),
    ];
    if let Some(p) = file.p {
        fields.push(("p", Json::num(p)));
    }
    if let Some(q) = file.q {
        fields.push(("q", Json::num(q)));
    }
    if let Some(v) = &file.v0 {
        fields.push(("v0", Json::str(v.clone())));
    }
    if let Some(v) = &file.v1 {
        fields.push(("v1", Json::str(v.clone())));
    }
    if let Some(v) = &file.f {
        fields.push(("f", Json::str(v.clone())));
    }
    if let Some((lo, hi)) = &file.interval {
        fields.push(("interval", Json::Arr(vec![bound_json(lo), bound_json(hi)])));
    }
    if let Some(n) = file.n {
        fields.push(("n", Json::int(n as i64)));
    }
    if let Some(j) = file.j {
        fields.push(("j", Json::int(j as i64)));
    }
    if let Some(b) = file.fiber_pairing_nontrivial {
        fields.push(("fiber_pairing_nontrivial", Json::Bool(b)));
    }
    for (name, values) in [
        ("p_values", &file.p_values),
        ("q_values", &file.q_values),
        ("alpha_values", &file.alpha_values),
    ] {
        if let Some(vs) = values {
            fields.push((name, Json::Arr(vs.iter().map(|x| Json::num(*x)).collect())));
        }
    }
    Json::obj(fields)
}

fn chi_json(r: &Option<HardyResult>) -> Json {
    let Some(r) = r else { return Json::Null };
    let regime = match r.regime {
        Regime::SupForm => "sup",
        Regime::IntegralForm => "integral",
    };
    match r.chi {
        ExtendedValue::Divergent => Json::obj(vec![
            ("tag", Json::str("divergent")),
            ("regime", Json::str(regime)),
            (
                "note",
                r.notes
                    .first()
                    .map(|n| Json::str(n.clone()))
                    .unwrap_or(Json::Null),
            ),
        ]),
        ExtendedValue::Finite { value, error_bound } => {
            let argmax = match r.argmax_tau {
                Some(ArgmaxTau::Interior(t)) => Json::num(t),
                Some(ArgmaxTau::LowerEndpoint) => Json::str("lower-endpoint"),
                Some(ArgmaxTau::UpperEndpoint) => Json::str("upper-endpoint"),
                None => Json::Null,
            };
            Json::obj(vec![
                ("tag", Json::str("finite")),
                ("value", Json::num(value)),
                ("error_bound", Json::num(error_bound)),
                ("regime", Json::str(regime)),
                ("argmax_tau", argmax),
            ])
        }
    }
}

fn extended_json(v: &Option<ExtendedValue>) -> Json {
    match v {
        None => Json::Null,
        Some(ExtendedValue::Divergent) => {
            Json::obj(vec![("tag", Json::str("divergent"))])
        }
        Some(ExtendedValue::Finite { value, error_bound }) => Json::obj(vec![
            ("tag", Json::str("finite")),
            ("value", Json::num(*value)),
            ("error_bound", Json::num(*error_bound)),
        ]),
    }
}

fn verdict_json(name: &str, v: &Verdict) -> Json {
    Json::obj(vec![
        ("name", Json::str(name)),
        ("status", Json::str(v.status.as_str())),
        ("rule", Json::str(v.rule.clone())),
        (
            "evidence",
            Json::Obj(
                v.inputs_echo
                    .iter()
                    .map(|(k, val)| (k.clone(), Json::str(val.clone())))
                    .collect(),
            ),
        ),
    ])
}

/// The fixed top-level report shape.
struct ReportBody {
    chi_forward: Json,
    chi_backward: Json,
    volume: Json,
    f_limit: Json,
    verdicts: Vec<Json>,
    oracle: Json,
    rows: Json,
    exit: i32,
    profile: Vec<(f64, f64)>,
}

impl Default for ReportBody {
    fn default() -> Self {
        ReportBody {
            chi_forward: Json::Null,
            chi_backward: Json::Null,
            volume: Json::Null,
            f_limit: Json::Null,
            verdicts: Vec::new(),
            oracle: Json::Null,
            rows: Json::Null,
            exit: 0,
            profile: Vec::new(),
        }
    }
}

pub fn run(validated: &Validated, profile_csv: Option<&str>) -> Outcome {
    let tol = validated.tolerances;
    let body = match &validated.kind {
        Kind::Hardy(problem) => run_hardy(problem, &tol),
        Kind::Interval(problem) => run_interval(problem, &tol),
        Kind::Cylinder(spec) => run_cylinder(spec, &tol),
        Kind::Surface(spec) => run_surface(spec, &tol),
        Kind::Oracle { f, interval } => run_oracle(f, interval, &tol),
        Kind::Sweep(spec) => run_sweep(spec, &tol),
    };
    let report = Json::obj(vec![
        ("schema_version", Json::str("1")),
        ("input", input_echo(&validated.file)),
        ("chi_forward", body.chi_forward),
        ("chi_backward", body.chi_backward),
        ("volume", body.volume),
        ("f_limit", body.f_limit),
        ("verdicts", Json::Arr(body.verdicts)),
        ("oracle", body.oracle),
        ("rows", body.rows),
        (
            "profile_csv",
            profile_csv.map(Json::str).unwrap_or(Json::Null),
        ),
    ]);
    Outcome {
        report,
        exit: body.exit,
        profile: body.profile,
    }
}

fn run_hardy(problem: &HardyProblem, tol: &Tolerances) -> ReportBody {
    let mut body = ReportBody::default();
    let fwd = hardy_constant(problem, tol);
    let bwd = hardy_constant(&problem.flipped(), tol);
    body.exit = exit_for(&[&fwd, &bwd]);
    let fwd = fwd.ok();
    if let Some(r) = &fwd {
        body.profile = r.profile.clone();
    }
    body.chi_forward = chi_json(&fwd);
    body.chi_backward = chi_json(&bwd.ok());
    body
}

fn run_interval(problem: &HardyProblem, tol: &Tolerances) -> ReportBody {
    let mut body = ReportBody::default();
    match classify_interval(problem, tol) {
        Ok(r) => {
            if let Some(c) = &r.chi_forward {
                body.profile = c.profile.clone();
            }
            body.chi_forward = chi_json(&r.chi_forward);
            body.chi_backward = chi_json(&r.chi_backward);
            body.verdicts = vec![
                verdict_json("h1_relative", &r.h1_relative),
                verdict_json("h1_absolute", &r.h1_absolute),
                verdict_json("h1bar_absolute", &r.h1bar_absolute),
                verdict_json("h1bar_relative", &r.h1bar_relative),
                verdict_json("torsion_absolute", &r.torsion_absolute),
                verdict_json("torsion_relative", &r.torsion_relative),
            ];
            if r.chi_forward.is_none() || r.chi_backward.is_none() {
                body.exit = 3;
            }
        }
        Err(e) => {
            body.exit = exit_for_err(&e);
        }
    }
    body
}

fn run_cylinder(spec: &lpq::cylinder::CylinderSpec, tol: &Tolerances) -> ReportBody {
    let mut body = ReportBody::default();
    match classify_cylinder(spec, tol) {
        Ok(r) => {
            body.chi_forward = chi_json(&r.chi_forward);
            body.chi_backward = chi_json(&r.chi_backward);
            body.verdicts = vec![
                verdict_json("hj_relative", &r.hj_relative),
                verdict_json("torsion", &r.torsion),
            ];
            if spec.fiber_pairing_nontrivial
                && (r.chi_forward.is_none() || r.chi_backward.is_none())
            {
                body.exit = 3;
            }
        }
        Err(e) => body.exit = exit_for_err(&e),
    }
    body
}

fn run_surface(spec: &SurfaceSpec, tol: &Tolerances) -> ReportBody {
    let mut body = ReportBody::default();
    match classify_surface(spec, tol) {
        Ok(r) => {
            if let Some(c) = &r.chi0 {
                body.profile = c.profile.clone();
            }
            body.chi_forward = chi_json(&r.chi0);
            body.chi_backward = chi_json(&r.chi_inf);
            body.volume = extended_json(&r.volume);
            body.f_limit = Json::str(r.f_limit.as_str());
            body.verdicts = vec![
                verdict_json("torsion_j", &r.torsion_j),
                verdict_json("torsion_all_degrees", &r.torsion_all_degrees),
            ];
            if r.chi0.is_none() || r.chi_inf.is_none() || r.volume.is_none() {
                body.exit = 3;
            }
        }
        Err(e) => body.exit = exit_for_err(&e),
    }
    body
}

fn run_oracle(f: &SymFun, interval: &Interval, tol: &Tolerances) -> ReportBody {
    let mut body = ReportBody::default();
    let decision = |side: Side| -> Json {
        match f.integral_converges(side) {
            Ok(d) => Json::obj(vec![
                (
                    "tag",
                    Json::str(if d.converges() { "converges" } else { "diverges" }),
                ),
                ("dominant_term", Json::str(format!("{}", d.dominant_term))),
                ("reason", Json::str(d.reason)),
            ]),
            Err(e) => Json::obj(vec![("error", Json::str(e.to_string()))]),
        }
    };
    let integral = match lpq::quad::improper_integral(f, interval, tol) {
        Ok(r) => extended_json(&Some(r.outcome)),
        Err(e) => {
            body.exit = exit_for_err(&e);
            Json::Null
        }
    };
    body.oracle = Json::obj(vec![
        ("lower", decision(Side::Lower)),
        ("upper", decision(Side::Upper)),
        ("integral", integral),
    ]);
    body
}

fn run_sweep(spec: &SweepSpec, tol: &Tolerances) -> ReportBody {
    let mut body = ReportBody::default();
    let mut rows = Vec::new();
    for &p in &spec.p_values {
        for &q in &spec.q_values {
            for &alpha in &spec.alpha_values {
                rows.push(sweep_cell(spec, p, q, alpha, tol));
            }
        }
    }
    body.rows = Json::Arr(rows);
    body
}

/// One sweep cell over the power-law profile `f = t^alpha`; failures are
/// recorded in the row and never abort the sweep.
fn sweep_cell(spec: &SweepSpec, p: f64, q: f64, alpha: f64, tol: &Tolerances) -> Json {
    let mut fields = vec![
        ("p", Json::num(p)),
        ("q", Json::num(q)),
        ("alpha", Json::num(alpha)),
    ];
    let exps = match lpq::make_exponents(p, q) {
        Ok(e) => e,
        Err(e) => {
            fields.push(("status", Json::str("out-of-scope")));
            fields.push(("detail", Json::str(e.to_string())));
            return Json::Obj(
                fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            );
        }
    };
    let domain = Interval::forward(0.0, f64::INFINITY).unwrap();
    let profile = if alpha == 0.0 {
        SymFun::constant(1.0, domain)
    } else {
        SymFun::monomial(1.0, alpha, 0.0, 0.0, domain)
    };
    let surface = profile
        .map_err(|e| e.to_string())
        .and_then(|f| SurfaceSpec::new(f, spec.n, spec.j, exps).map_err(|e| e.to_string()))
        .and_then(|s| classify_surface(&s, tol).map_err(|e| e.to_string()));
    match surface {
        Ok(r) => {
            let chi_tag = |c: &Option<HardyResult>| match c {
                None => Json::str("failed"),
                Some(h) if h.chi.is_divergent() => Json::str("divergent"),
                Some(h) => Json::str(format!(
                    "finite({})",
                    crate::json::sig12(h.chi.value().unwrap_or(f64::NAN))
                )),
            };
            fields.push(("status", Json::str("ok")));
            fields.push(("chi0", chi_tag(&r.chi0)));
            fields.push(("chi_inf", chi_tag(&r.chi_inf)));
            fields.push(("f_limit", Json::str(r.f_limit.as_str())));
            fields.push(("torsion_j", Json::str(r.torsion_j.status.as_str())));
            fields.push(("torsion_j_rule", Json::str(r.torsion_j.rule.clone())));
            fields.push((
                "torsion_all_degrees",
                Json::str(r.torsion_all_degrees.status.as_str()),
            ));
        }
        Err(e) => {
            fields.push(("status", Json::str("invalid")));
            fields.push(("detail", Json::str(e)));
        }
    }
    Json::Obj(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

fn exit_for(results: &[&Result<HardyResult, LpqError>]) -> i32 {
    for r in results {
        if let Err(e) = r {
            return exit_for_err(e);
        }
    }
    0
}

fn exit_for_err(e: &LpqError) -> i32 {
    match e {
        LpqError::TolFailure(_) => 3,
        _ => 2,
    }
}

/// Human-readable rendering of a report.
pub fn to_table(report: &Json) -> String {
    let mut out = String::new();
    fn walk(j: &Json, prefix: &str, out: &mut String) {
        match j {
            Json::Obj(fields) => {
                for (k, v) in fields {
                    let path = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(v, &path, out);
                }
            }
            Json::Arr(items) => {
                if items.is_empty() {
                    out.push_str(&format!("{prefix}: []\n"));
                }
                for (i, item) in items.iter().enumerate() {
                    walk(item, &format!("{prefix}[{i}]"), out);
                }
            }
            Json::Null => out.push_str(&format!("{prefix}: -\n")),
            Json::Bool(b) => out.push_str(&format!("{prefix}: {b}\n")),
            Json::Num(s) => out.push_str(&format!("{prefix}: {s}\n")),
            Json::Str(s) => out.push_str(&format!("{prefix}: {s}\n")),
        }
    }
    walk(report, "", &mut out);
    out
}
