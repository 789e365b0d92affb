//! Triviality classification of the first weighted `L_{p,q}`-cohomology of
//! a half-interval `[a, b)`.
//!
//! Everything reduces to the two Hardy constants of the weight pair and two
//! endpoint integrals:
//!
//! * relative (to `{a}`) nonreduced `H¹` vanishes iff `χ(a,b) < ∞`;
//! * absolute nonreduced `H¹` vanishes iff `χ(a,b) < ∞` or `χ(b,a) < ∞`;
//! * absolute reduced `H̄¹` always vanishes;
//! * relative reduced `H̄¹` vanishes iff `∫ v1^(-q') = ∞` or `∫ v0^p < ∞`,
//!   and when it does not vanish it is one-dimensional;
//! * torsion is nontrivial exactly when coboundaries fail to be closed,
//!   which the rules above decide in every case.
//!
//! These are equivalences, so `Unknown` appears only when a numeric
//! finiteness decision fails.

use crate::hardy::{hardy_constant, HardyProblem, HardyResult};
use crate::quad::improper_integral;
use crate::types::{
    ExtendedValue, Interval, Orientation, Result, Tolerances, Verdict, VerdictStatus,
};

pub const RULE_RELATIVE_H1: &str = "relative-h1-hardy-criterion";
pub const RULE_ABSOLUTE_H1: &str = "absolute-h1-two-sided-criterion";
pub const RULE_REDUCED_ABSOLUTE: &str = "reduced-absolute-vanishing";
pub const RULE_REDUCED_RELATIVE: &str = "reduced-relative-integral-criterion";
pub const RULE_REDUCED_RELATIVE_DIM: &str = "reduced-relative-dimension-one";
pub const RULE_TORSION_ABSOLUTE: &str = "absolute-torsion-via-reduced-vanishing";
pub const RULE_TORSION_RELATIVE: &str = "relative-torsion-nonclosed-coboundaries";
pub const RULE_TORSION_RELATIVE_DIM: &str = "relative-torsion-dimension-argument";

/// Full classification of one weighted half-interval problem.
#[derive(Debug, Clone)]
pub struct IntervalReport {
    pub h1_relative: Verdict,
    pub h1_absolute: Verdict,
    pub h1bar_absolute: Verdict,
    pub h1bar_relative: Verdict,
    pub torsion_absolute: Verdict,
    pub torsion_relative: Verdict,
    /// `true` when the relative reduced space is nontrivial, hence
    /// isomorphic to the real line.
    pub h1bar_relative_dim_one: bool,
    pub chi_forward: Option<HardyResult>,
    pub chi_backward: Option<HardyResult>,
    pub v1_conj_integral: Option<ExtendedValue>,
    pub v0_p_integral: Option<ExtendedValue>,
}

fn tag(v: &Option<HardyResult>) -> String {
    match v {
        None => "failed".to_string(),
        Some(r) => match r.chi {
            ExtendedValue::Divergent => "divergent".to_string(),
            ExtendedValue::Finite { value, .. } => format!("finite({value:.6e})"),
        },
    }
}

fn int_tag(v: &Option<ExtendedValue>) -> String {
    match v {
        None => "failed".to_string(),
        Some(ExtendedValue::Divergent) => "divergent".to_string(),
        Some(ExtendedValue::Finite { value, .. }) => format!("finite({value:.6e})"),
    }
}

fn status_from_flags(trivial: Option<bool>) -> VerdictStatus {
    match trivial {
        Some(true) => VerdictStatus::Trivial,
        Some(false) => VerdictStatus::Nontrivial,
        None => VerdictStatus::Unknown,
    }
}

/// The two Hardy constants (forward and reversed orientation), `None` on
/// numeric failure.
fn both_constants(
    problem: &HardyProblem,
    tol: &Tolerances,
) -> (Option<HardyResult>, Option<HardyResult>) {
    let fwd = hardy_constant(problem, tol).ok();
    let bwd = hardy_constant(&problem.flipped(), tol).ok();
    (fwd, bwd)
}

fn finite_flag(r: &Option<HardyResult>) -> Option<bool> {
    r.as_ref().map(|h| h.chi.is_finite())
}

/// Nonreduced `H¹`, relative (to the left endpoint) and absolute.
pub fn classify_h1(problem: &HardyProblem, tol: &Tolerances) -> Result<(Verdict, Verdict)> {
    let (fwd, bwd) = both_constants(problem, tol);
    Ok(h1_verdicts(&fwd, &bwd))
}

fn h1_verdicts(fwd: &Option<HardyResult>, bwd: &Option<HardyResult>) -> (Verdict, Verdict) {
    let echo = vec![
        ("chi_forward".to_string(), tag(fwd)),
        ("chi_backward".to_string(), tag(bwd)),
    ];
    let relative = Verdict::new(
        status_from_flags(finite_flag(fwd)),
        RULE_RELATIVE_H1,
        echo.clone(),
    );
    // absolute: trivial iff either constant is finite
    let absolute_flag = match (finite_flag(fwd), finite_flag(bwd)) {
        (Some(true), _) | (_, Some(true)) => Some(true),
        (Some(false), Some(false)) => Some(false),
        _ => None,
    };
    let absolute = Verdict::new(status_from_flags(absolute_flag), RULE_ABSOLUTE_H1, echo);
    (relative, absolute)
}

/// Reduced `H̄¹`: absolute (always trivial), relative, and the
/// one-dimensionality flag for the nontrivial relative case.
pub fn classify_reduced(
    problem: &HardyProblem,
    tol: &Tolerances,
) -> Result<(Verdict, Verdict, bool)> {
    let (i1, i0) = defining_integrals(problem, tol);
    Ok(reduced_verdicts(&i1, &i0))
}

/// `∫ v1^(-q')` and `∫ v0^p` over the whole interval.
fn defining_integrals(
    problem: &HardyProblem,
    tol: &Tolerances,
) -> (Option<ExtendedValue>, Option<ExtendedValue>) {
    let range = Interval {
        lo: problem.interval.lo,
        hi: problem.interval.hi,
        orientation: Orientation::Forward,
    };
    let w1 = problem.v1.pow_weight(-problem.exps.q_conj);
    let w0 = problem.v0.pow_weight(problem.exps.p);
    let i1 = improper_integral(&w1, &range, tol).ok().map(|r| r.outcome);
    let i0 = improper_integral(&w0, &range, tol).ok().map(|r| r.outcome);
    (i1, i0)
}

fn reduced_verdicts(
    i1: &Option<ExtendedValue>,
    i0: &Option<ExtendedValue>,
) -> (Verdict, Verdict, bool) {
    let absolute = Verdict::new(VerdictStatus::Trivial, RULE_REDUCED_ABSOLUTE, Vec::new());
    let echo = vec![
        ("v1_conj_integral".to_string(), int_tag(i1)),
        ("v0_p_integral".to_string(), int_tag(i0)),
    ];
    // trivial iff ∫ v1^(-q') diverges or ∫ v0^p converges
    let relative_flag = match (i1, i0) {
        (Some(ExtendedValue::Divergent), _) => Some(true),
        (_, Some(ExtendedValue::Finite { .. })) => Some(true),
        (Some(ExtendedValue::Finite { .. }), Some(ExtendedValue::Divergent)) => Some(false),
        _ => None,
    };
    let nontrivial = relative_flag == Some(false);
    let rule = if nontrivial {
        RULE_REDUCED_RELATIVE_DIM
    } else {
        RULE_REDUCED_RELATIVE
    };
    let relative = Verdict::new(status_from_flags(relative_flag), rule, echo);
    (absolute, relative, nontrivial)
}

/// Torsion `T¹`, absolute and relative.
pub fn classify_torsion(problem: &HardyProblem, tol: &Tolerances) -> Result<(Verdict, Verdict)> {
    let report = classify_interval(problem, tol)?;
    Ok((report.torsion_absolute, report.torsion_relative))
}

fn torsion_verdicts(
    h1_relative: &Verdict,
    h1_absolute: &Verdict,
    h1bar_relative: &Verdict,
) -> (Verdict, Verdict) {
    // absolute reduced cohomology vanishes, so absolute torsion and
    // absolute nonreduced cohomology coincide
    let absolute = Verdict::new(
        h1_absolute.status,
        RULE_TORSION_ABSOLUTE,
        h1_absolute.inputs_echo.clone(),
    );
    let mut echo = h1_relative.inputs_echo.clone();
    echo.push((
        "h1bar_relative".to_string(),
        h1bar_relative.status.as_str().to_string(),
    ));
    let relative = match (h1_relative.status, h1bar_relative.status) {
        // closed coboundary space: no torsion
        (VerdictStatus::Trivial, _) => {
            Verdict::new(VerdictStatus::Trivial, RULE_TORSION_RELATIVE, echo)
        }
        // nonreduced nontrivial while the reduced space vanishes: the
        // coboundaries are dense but not closed
        (VerdictStatus::Nontrivial, VerdictStatus::Trivial) => {
            Verdict::new(VerdictStatus::Nontrivial, RULE_TORSION_RELATIVE, echo)
        }
        // both nontrivial: the nonreduced space is one-dimensional and
        // already distinguishes the reduced class, so the closure of the
        // coboundaries adds nothing
        (VerdictStatus::Nontrivial, VerdictStatus::Nontrivial) => {
            Verdict::new(VerdictStatus::Trivial, RULE_TORSION_RELATIVE_DIM, echo)
        }
        _ => Verdict::unknown(RULE_TORSION_RELATIVE, echo),
    };
    (absolute, relative)
}

/// Runs all six classifications and assembles the report.
pub fn classify_interval(problem: &HardyProblem, tol: &Tolerances) -> Result<IntervalReport> {
    let (fwd, bwd) = both_constants(problem, tol);
    let (h1_relative, h1_absolute) = h1_verdicts(&fwd, &bwd);
    let (i1, i0) = defining_integrals(problem, tol);
    let (h1bar_absolute, h1bar_relative, dim_one) = reduced_verdicts(&i1, &i0);
    let (torsion_absolute, torsion_relative) =
        torsion_verdicts(&h1_relative, &h1_absolute, &h1bar_relative);
    Ok(IntervalReport {
        h1_relative,
        h1_absolute,
        h1bar_absolute,
        h1bar_relative,
        torsion_absolute,
        torsion_relative,
        h1bar_relative_dim_one: dim_one,
        chi_forward: fwd,
        chi_backward: bwd,
        v1_conj_integral: i1,
        v0_p_integral: i0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfun::SymFun;
    use crate::types::{make_exponents, Interval};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn problem(lo: f64, hi: f64, delta: f64) -> HardyProblem {
        let e = make_exponents(2.0, 2.0).unwrap();
        let iv = Interval::forward(lo, hi).unwrap();
        let w = SymFun::monomial(1.0, 0.0, 0.0, delta, iv).unwrap();
        HardyProblem::new(e, iv, w.clone(), w).unwrap()
    }

    fn statuses(r: &IntervalReport) -> [VerdictStatus; 6] {
        [
            r.h1_relative.status,
            r.h1_absolute.status,
            r.h1bar_absolute.status,
            r.h1bar_relative.status,
            r.torsion_absolute.status,
            r.torsion_relative.status,
        ]
    }

    #[test]
    fn unit_weights_on_finite_interval_all_trivial() {
        use VerdictStatus::*;
        let r = classify_interval(&problem(0.0, 1.0, 0.0), &tol()).unwrap();
        assert_eq!(statuses(&r), [Trivial; 6]);
        assert!(!r.h1bar_relative_dim_one);
    }

    #[test]
    fn unit_weights_on_halfline() {
        use VerdictStatus::*;
        let r = classify_interval(&problem(0.0, f64::INFINITY, 0.0), &tol()).unwrap();
        assert_eq!(
            statuses(&r),
            [Nontrivial, Nontrivial, Trivial, Trivial, Nontrivial, Nontrivial]
        );
    }

    #[test]
    fn exponential_weights_on_halfline() {
        use VerdictStatus::*;
        // v0 = v1 = e^t: χ(0,∞) diverges, χ(∞,0) = 1/2 finite,
        // ∫ v1^(-2) = 1/2 < ∞ while ∫ v0^2 = ∞.
        let r = classify_interval(&problem(0.0, f64::INFINITY, 1.0), &tol()).unwrap();
        assert_eq!(
            statuses(&r),
            [Nontrivial, Trivial, Trivial, Nontrivial, Trivial, Trivial]
        );
        assert!(r.h1bar_relative_dim_one);
        assert_eq!(r.torsion_relative.rule, RULE_TORSION_RELATIVE_DIM);
        // the decisive backward constant
        let chi = r.chi_backward.unwrap().chi.value().unwrap();
        assert!((chi - 0.5).abs() < 1e-6, "chi backward = {chi}");
    }

    #[test]
    fn half_open_example_with_growing_weight() {
        use VerdictStatus::*;
        // v0 = v1 = e^(t/2): relative H¹ nontrivial, absolute trivial
        let r = classify_interval(&problem(0.0, f64::INFINITY, 0.5), &tol()).unwrap();
        assert_eq!(r.h1_relative.status, Nontrivial);
        assert_eq!(r.h1_absolute.status, Trivial);
        assert_eq!(r.torsion_absolute.status, Trivial);
    }

    #[test]
    fn absolute_reduced_always_trivial() {
        for p in [
            problem(0.0, 1.0, 0.0),
            problem(0.0, f64::INFINITY, 0.0),
            problem(0.0, f64::INFINITY, 1.0),
            problem(1.0, f64::INFINITY, -1.0),
            problem(0.0, 2.5, -0.5),
        ] {
            let r = classify_interval(&p, &tol()).unwrap();
            assert_eq!(r.h1bar_absolute.status, VerdictStatus::Trivial);
            // consistency: absolute torsion mirrors absolute H¹
            assert_eq!(r.torsion_absolute.status, r.h1_absolute.status);
            // relative reduced nontrivial forces the dim-1 flag
            if r.h1bar_relative.status == VerdictStatus::Nontrivial {
                assert!(r.h1bar_relative_dim_one);
            }
            // equivalence: relative H¹ verdict mirrors forward finiteness
            let fwd_finite = r.chi_forward.as_ref().unwrap().chi.is_finite();
            assert_eq!(
                r.h1_relative.status == VerdictStatus::Trivial,
                fwd_finite
            );
        }
    }
}
