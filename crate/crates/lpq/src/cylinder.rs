//! Degree-`j` classification for the warped cylinder `[a, b) ×_f Y` with an
//! `n`-dimensional fiber.
//!
//! The cylinder reduces to a weighted half-interval problem with the powered
//! warp weights `f^(n/p - j + 1)` and `f^(n/q - j + 1)`. The reduction needs
//! one piece of data about the fiber: a closed form `φ` of degree `j - 1`,
//! `p`- and `q`-integrable, that pairs nontrivially with some closed
//! compactly supported form. The caller asserts this as a boolean (compact
//! fibers with nontrivial de Rham cohomology in degree `j - 1` qualify, e.g.
//! spheres for `j = 1` and `j = n + 1`).
//!
//! The resulting criteria are sufficient only: a divergent forward constant
//! forces nontrivial relative cohomology, both constants divergent force
//! nontrivial torsion and infinite dimension, but finite constants leave the
//! verdict `Unknown`.

use crate::hardy::{hardy_constant, HardyProblem, HardyResult};
use crate::symfun::SymFun;
use crate::types::{
    Exponents, Interval, LpqError, Result, Tolerances, Verdict, VerdictStatus,
};

pub const RULE_CYL_RELATIVE: &str = "cylinder-relative-hardy-sufficient";
pub const RULE_CYL_TORSION: &str = "cylinder-torsion-two-sided-sufficient";
pub const RULE_CYL_NO_CONVERSE: &str = "cylinder-no-converse-available";
pub const RULE_CYL_NO_HYPOTHESIS: &str = "cylinder-fiber-pairing-not-asserted";

/// A warped-cylinder classification problem.
#[derive(Debug, Clone)]
pub struct CylinderSpec {
    /// The warping function `f`.
    pub warp: SymFun,
    pub interval: Interval,
    /// Fiber dimension `n ≥ 1`.
    pub fiber_dim: u32,
    /// Form degree `j`, `1 ≤ j ≤ n + 1`.
    pub degree: u32,
    pub exps: Exponents,
    /// Caller-asserted hypothesis: some closed `(j-1)`-form on the fiber,
    /// `p`- and `q`-integrable, pairs nontrivially with a closed compactly
    /// supported form.
    pub fiber_pairing_nontrivial: bool,
}

impl CylinderSpec {
    pub fn new(
        warp: SymFun,
        interval: Interval,
        fiber_dim: u32,
        degree: u32,
        exps: Exponents,
        fiber_pairing_nontrivial: bool,
    ) -> Result<Self> {
        if fiber_dim < 1 {
            return Err(LpqError::Validation("fiber dimension must be >= 1".into()));
        }
        if degree < 1 || degree > fiber_dim + 1 {
            return Err(LpqError::Validation(format!(
                "degree j = {degree} outside 1..={}",
                fiber_dim + 1
            )));
        }
        let d = warp.domain();
        if d.lo > interval.lo || d.hi < interval.hi {
            return Err(LpqError::Validation(
                "warp function not defined on the whole interval".into(),
            ));
        }
        Ok(CylinderSpec {
            warp,
            interval,
            fiber_dim,
            degree,
            exps,
            fiber_pairing_nontrivial,
        })
    }

    /// Weight exponents `n/p - j + 1` and `n/q - j + 1`.
    pub fn weight_exponents(&self) -> (f64, f64) {
        let n = self.fiber_dim as f64;
        let j = self.degree as f64;
        (n / self.exps.p - j + 1.0, n / self.exps.q - j + 1.0)
    }
}

/// Classification outcome for one cylinder problem.
#[derive(Debug, Clone)]
pub struct CylinderReport {
    pub weight0: SymFun,
    pub weight1: SymFun,
    pub chi_forward: Option<HardyResult>,
    pub chi_backward: Option<HardyResult>,
    /// Relative (to the `a`-slice) cohomology in degree `j`.
    pub hj_relative: Verdict,
    pub torsion: Verdict,
    /// Set when nontrivial torsion forces infinite dimension.
    pub hj_dim_infinite: bool,
}

/// The powered warp weights `(f^(n/p - j + 1), f^(n/q - j + 1))`.
pub fn cylinder_weights(spec: &CylinderSpec) -> Result<(SymFun, SymFun)> {
    let (e0, e1) = spec.weight_exponents();
    let w0 = spec.warp.power(e0).or_else(|_| Ok::<_, LpqError>(spec.warp.pow_weight(e0)))?;
    let w1 = spec.warp.power(e1).or_else(|_| Ok::<_, LpqError>(spec.warp.pow_weight(e1)))?;
    Ok((w0, w1))
}

fn chi_tag(r: &Option<HardyResult>) -> String {
    match r {
        None => "failed".to_string(),
        Some(h) if h.chi.is_divergent() => "divergent".to_string(),
        Some(h) => format!("finite({:.6e})", h.chi.value().unwrap_or(f64::NAN)),
    }
}

/// Applies the sufficient conditions in degree `j`.
pub fn classify_cylinder(spec: &CylinderSpec, tol: &Tolerances) -> Result<CylinderReport> {
    let (weight0, weight1) = cylinder_weights(spec)?;

    if !spec.fiber_pairing_nontrivial {
        // nothing can be concluded without the pairing hypothesis
        let echo = vec![(
            "fiber_pairing_nontrivial".to_string(),
            "false".to_string(),
        )];
        return Ok(CylinderReport {
            weight0,
            weight1,
            chi_forward: None,
            chi_backward: None,
            hj_relative: Verdict::unknown(RULE_CYL_NO_HYPOTHESIS, echo.clone()),
            torsion: Verdict::unknown(RULE_CYL_NO_HYPOTHESIS, echo),
            hj_dim_infinite: false,
        });
    }

    let forward = HardyProblem::new(
        spec.exps,
        spec.interval,
        weight0.clone(),
        weight1.clone(),
    )?;
    let fwd = hardy_constant(&forward, tol).ok();
    let bwd = hardy_constant(&forward.flipped(), tol).ok();
    let echo = vec![
        ("chi_forward".to_string(), chi_tag(&fwd)),
        ("chi_backward".to_string(), chi_tag(&bwd)),
    ];

    let fwd_divergent = fwd.as_ref().map(|r| r.chi.is_divergent());
    let bwd_divergent = bwd.as_ref().map(|r| r.chi.is_divergent());

    let hj_relative = match fwd_divergent {
        Some(true) => Verdict::new(VerdictStatus::Nontrivial, RULE_CYL_RELATIVE, echo.clone()),
        // the criterion is sufficient only, so a finite constant proves
        // nothing about the cylinder
        Some(false) => Verdict::unknown(RULE_CYL_NO_CONVERSE, echo.clone()),
        None => Verdict::unknown(RULE_CYL_RELATIVE, echo.clone()),
    };
    let (torsion, dim_infinite) = match (fwd_divergent, bwd_divergent) {
        (Some(true), Some(true)) => (
            Verdict::new(VerdictStatus::Nontrivial, RULE_CYL_TORSION, echo),
            true,
        ),
        (Some(false), _) | (_, Some(false)) => {
            (Verdict::unknown(RULE_CYL_NO_CONVERSE, echo), false)
        }
        _ => (Verdict::unknown(RULE_CYL_TORSION, echo), false),
    };

    Ok(CylinderReport {
        weight0,
        weight1,
        chi_forward: fwd,
        chi_backward: bwd,
        hj_relative,
        torsion,
        hj_dim_infinite: dim_infinite,
    })
}
