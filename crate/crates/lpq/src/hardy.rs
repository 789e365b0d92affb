//! The weighted Hardy constant `χ_{p,q}(α, β, v0, v1)` in both regimes,
//! its τ-profile, divergence witnesses, and the extremal-test-function
//! lower bound on the best inequality constant.
//!
//! For `p ≥ q` the constant is the supremum over interior `τ` of the
//! two-factor product
//!
//! ```text
//! (∫_τ^β v0^p)^(1/p) * (∫_α^τ v1^(-q'))^(1/q')
//! ```
//!
//! and for `p < q` it is the iterated integral
//!
//! ```text
//! ( ∫_α^β ( (∫_α^τ v1^(-q'))^(p-1) * ∫_τ^β v0^p )^(q/(q-p)) v1^(-q')(τ) dτ )^((q-p)/(pq))
//! ```
//!
//! The orientation of the underlying interval selects which endpoint plays
//! the role of `α`. Finiteness is decided symbolically whenever the weights
//! (or their declared asymptotics) allow it; the quadrature engine supplies
//! values and, for numeric inputs, heuristic decisions with evidence.

use crate::quad::{improper_integral, Cumulative, IntegralResult};
use crate::symfun::asym::{Asym, AsymLimit, LocalVar};
use crate::symfun::SymFun;
use crate::types::{
    Exponents, ExtendedValue, Interval, LpqError, Orientation, Result, Side, Tolerances,
};

/// A weighted Hardy problem: exponents, an oriented interval, and the two
/// positive weights.
#[derive(Debug, Clone)]
pub struct HardyProblem {
    pub exps: Exponents,
    pub interval: Interval,
    pub v0: SymFun,
    pub v1: SymFun,
}

impl HardyProblem {
    pub fn new(exps: Exponents, interval: Interval, v0: SymFun, v1: SymFun) -> Result<Self> {
        for (name, w) in [("v0", &v0), ("v1", &v1)] {
            let d = w.domain();
            if d.lo > interval.lo || d.hi < interval.hi {
                return Err(LpqError::Validation(format!(
                    "weight {name} is not defined on the whole interval [{}, {})",
                    interval.lo, interval.hi
                )));
            }
        }
        Ok(HardyProblem {
            exps,
            interval,
            v0,
            v1,
        })
    }

    /// Same problem with the opposite orientation.
    pub fn flipped(&self) -> Self {
        HardyProblem {
            exps: self.exps,
            interval: self.interval.flipped(),
            v0: self.v0.clone(),
            v1: self.v1.clone(),
        }
    }
}

/// Which of the two defining formulas produced the constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `p >= q`: supremum of the two-factor profile.
    SupForm,
    /// `p < q`: iterated integral.
    IntegralForm,
}

/// Location of the profile supremum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArgmaxTau {
    Interior(f64),
    /// The supremum is approached in the limit at the lower endpoint.
    LowerEndpoint,
    /// The supremum is approached in the limit at the upper endpoint.
    UpperEndpoint,
}

/// Outcome of a Hardy-constant computation.
#[derive(Debug, Clone)]
pub struct HardyResult {
    pub chi: ExtendedValue,
    pub regime: Regime,
    /// Profile samples `(τ, value)` (supremum form only).
    pub profile: Vec<(f64, f64)>,
    /// Where the supremum was found (supremum form only).
    pub argmax_tau: Option<ArgmaxTau>,
    /// Human-readable diagnostics: which rule decided, divergence evidence.
    pub notes: Vec<String>,
}

impl HardyResult {
    fn divergent(regime: Regime, note: String, profile: Vec<(f64, f64)>) -> Self {
        HardyResult {
            chi: ExtendedValue::Divergent,
            regime,
            profile,
            argmax_tau: None,
            notes: vec![note],
        }
    }
}

/// Orientation-resolved engine: `w0 = v0^p` is integrated toward the β end,
/// `w1 = v1^(-q')` from the α end.
pub(crate) struct Engine {
    pub exps: Exponents,
    pub interval: Interval,
    pub w0: SymFun,
    pub w1: SymFun,
    pub alpha: Side,
    pub beta: Side,
    pub tol: Tolerances,
}

impl Engine {
    pub fn new(problem: &HardyProblem, tol: &Tolerances) -> Result<Self> {
        tol.validate()?;
        let w0 = problem.v0.pow_weight(problem.exps.p);
        let w1 = problem.v1.pow_weight(-problem.exps.q_conj);
        Ok(Self::from_powered(
            problem.exps,
            problem.interval,
            w0,
            w1,
            tol,
        ))
    }

    /// Engine over already-powered weights (`w0 = v0^p`, `w1 = v1^(-q')`).
    pub fn from_powered(
        exps: Exponents,
        interval: Interval,
        w0: SymFun,
        w1: SymFun,
        tol: &Tolerances,
    ) -> Self {
        let (alpha, beta) = match interval.orientation {
            Orientation::Forward => (Side::Lower, Side::Upper),
            Orientation::Reversed => (Side::Upper, Side::Lower),
        };
        Engine {
            exps,
            interval,
            w0,
            w1,
            alpha,
            beta,
            tol: *tol,
        }
    }

    fn tol(&self) -> &Tolerances {
        &self.tol
    }

    /// Quadrature tolerance for profile factors: the absolute floor is
    /// dropped far below the user's, because a factor of magnitude 1e-80
    /// may be multiplied by one of magnitude 1e+80 and its *relative*
    /// accuracy is what survives.
    fn qtol(&self) -> Tolerances {
        Tolerances {
            abs_tol: self.tol.abs_tol.min(1e-280),
            ..self.tol
        }
    }

    /// Tolerance for the cached inner integrals feeding an outer quadrature:
    /// two orders tighter, so the noise they imprint on the outer integrand
    /// sits well below the outer convergence demand.
    fn inner_tol(&self) -> Tolerances {
        Tolerances {
            rel_tol: (self.tol.rel_tol * 1e-2).max(1e-13),
            ..self.qtol()
        }
    }

    /// A reference interior point separating the two endpoint regions.
    fn ref_point(&self) -> f64 {
        let iv = &self.interval;
        if iv.is_unbounded() {
            iv.lo + iv.lo.abs().max(1.0)
        } else {
            0.5 * (iv.lo + iv.hi)
        }
    }

    fn side_range(&self, side: Side) -> Interval {
        let m = self.ref_point();
        let iv = &self.interval;
        match side {
            Side::Lower => Interval {
                lo: iv.lo,
                hi: m,
                orientation: Orientation::Forward,
            },
            Side::Upper => Interval {
                lo: m,
                hi: iv.hi,
                orientation: Orientation::Forward,
            },
        }
    }

    /// Improper integral of `w` over the sub-range touching `side`.
    fn end_integral(&self, w: &SymFun, side: Side) -> Result<IntegralResult> {
        improper_integral(w, &self.side_range(side), &self.qtol())
    }

    /// `∫_α^τ w1`.
    pub fn head1(&self, tau: f64) -> Result<ExtendedValue> {
        let range = match self.alpha {
            Side::Lower => Interval {
                lo: self.interval.lo,
                hi: tau,
                orientation: Orientation::Forward,
            },
            Side::Upper => Interval {
                lo: tau,
                hi: self.interval.hi,
                orientation: Orientation::Forward,
            },
        };
        Ok(improper_integral(&self.w1, &range, &self.qtol())?.outcome)
    }

    /// `∫_τ^β w0`.
    pub fn tail0(&self, tau: f64) -> Result<ExtendedValue> {
        let range = match self.beta {
            Side::Upper => Interval {
                lo: tau,
                hi: self.interval.hi,
                orientation: Orientation::Forward,
            },
            Side::Lower => Interval {
                lo: self.interval.lo,
                hi: tau,
                orientation: Orientation::Forward,
            },
        };
        Ok(improper_integral(&self.w0, &range, &self.qtol())?.outcome)
    }

    /// Value under the supremum at `τ`.
    pub fn profile(&self, tau: f64) -> Result<ExtendedValue> {
        let tail = self.tail0(tau)?;
        let head = self.head1(tau)?;
        Ok(combine_profile(&self.exps, tail, head))
    }

    /// Leading behavior of the vanishing head `∫_α^τ w1` as `τ → α`.
    fn head_vanishing_asym(&self) -> Option<Asym> {
        self.w1.endpoint_asym(self.alpha).primitive_vanishing()
    }

    /// Leading behavior of the vanishing tail `∫_τ^β w0` as `τ → β`.
    fn tail_vanishing_asym(&self) -> Option<Asym> {
        self.w0.endpoint_asym(self.beta).primitive_vanishing()
    }

    /// Limit of the profile as `τ → β`: the tail factor vanishes while the
    /// head factor tends to the total head integral (finite or not).
    fn profile_limit_at_beta(&self) -> Option<AsymLimit> {
        let ta = self.tail_vanishing_asym()?;
        let w1b = self.w1.endpoint_asym(self.beta);
        if w1b.integral_converges() {
            // head bounded, tail → 0
            return Some(AsymLimit::Zero);
        }
        let hb = w1b.primitive_growing()?;
        Some(
            ta.powf(1.0 / self.exps.p)
                .mul(&hb.powf(1.0 / self.exps.q_conj))
                .limit(),
        )
    }

    /// Limit of the profile as `τ → α`.
    fn profile_limit_at_alpha(&self) -> Option<AsymLimit> {
        let ha = self.head_vanishing_asym()?;
        let w0a = self.w0.endpoint_asym(self.alpha);
        if w0a.integral_converges() {
            return Some(AsymLimit::Zero);
        }
        let ta = w0a.primitive_growing()?;
        Some(
            ta.powf(1.0 / self.exps.p)
                .mul(&ha.powf(1.0 / self.exps.q_conj))
                .limit(),
        )
    }

    fn geometric_side(&self, side: Side) -> ArgmaxTau {
        match side {
            Side::Lower => ArgmaxTau::LowerEndpoint,
            Side::Upper => ArgmaxTau::UpperEndpoint,
        }
    }

    /// Supremum form (`p >= q`).
    pub fn sup_form(&self) -> Result<HardyResult> {
        let regime = Regime::SupForm;
        // structural divergence: a weight not integrable on its own side
        let tail_total = self.end_integral(&self.w0, self.beta)?;
        if tail_total.outcome.is_divergent() {
            return Ok(HardyResult::divergent(
                regime,
                format!(
                    "divergent: v0^p is not integrable toward the β endpoint (partials {:?})",
                    compact(&tail_total.cutoff_history)
                ),
                Vec::new(),
            ));
        }
        let head_total = self.end_integral(&self.w1, self.alpha)?;
        if head_total.outcome.is_divergent() {
            return Ok(HardyResult::divergent(
                regime,
                format!(
                    "divergent: v1^(-q') is not integrable at the α endpoint (partials {:?})",
                    compact(&head_total.cutoff_history)
                ),
                Vec::new(),
            ));
        }
        // endpoint limits of the profile; a limit outside the representable
        // asymptotic family would make any grid supremum unsound
        let lim_beta = self.profile_limit_at_beta();
        let lim_alpha = self.profile_limit_at_alpha();
        if lim_beta.is_none() || lim_alpha.is_none() {
            return Err(LpqError::TolFailure(
                "endpoint profile asymptotics outside the decidable family".into(),
            ));
        }
        for (side, lim) in [(self.beta, lim_beta), (self.alpha, lim_alpha)] {
            if lim == Some(AsymLimit::Infinite) {
                let mut r = HardyResult::divergent(
                    regime,
                    format!(
                        "divergent: the profile tends to infinity toward the {} endpoint",
                        side_label(self.geometric_side(side))
                    ),
                    Vec::new(),
                );
                r.argmax_tau = Some(self.geometric_side(side));
                return Ok(r);
            }
        }

        // numeric supremum over the interior grid with golden-section polish
        let grid = tau_grid(&self.interval, self.tol().sup_grid_points as usize);
        let mut samples: Vec<(f64, f64)> = Vec::with_capacity(grid.len());
        let mut best: Option<(usize, f64)> = None;
        for &tau in grid.iter() {
            let value = match self.profile(tau) {
                Ok(ExtendedValue::Finite { value, .. }) if value.is_finite() => value,
                Ok(ExtendedValue::Finite { .. }) => continue,
                Ok(ExtendedValue::Divergent) => {
                    // interior divergence surfaced by the numeric heuristics
                    return Ok(HardyResult::divergent(
                        regime,
                        format!("divergent: profile factor infinite at τ = {tau}"),
                        samples,
                    ));
                }
                Err(_) => continue,
            };
            let i = samples.len();
            samples.push((tau, value));
            if best.map_or(true, |(_, b)| value > b) {
                best = Some((i, value));
            }
        }
        let (best_idx, best_value) = best
            .ok_or_else(|| LpqError::TolFailure("no profile sample could be evaluated".into()))?;

        // golden-section refinement on the bracket around the best sample
        let lo_b = if best_idx > 0 {
            samples[best_idx - 1].0
        } else {
            samples[best_idx].0
        };
        let hi_b = if best_idx + 1 < samples.len() {
            samples[best_idx + 1].0
        } else {
            samples[best_idx].0
        };
        let (tau_star, refined) = self.golden_max(lo_b, hi_b, best_value);

        let mut chi = refined.max(best_value);
        let mut argmax = ArgmaxTau::Interior(if refined >= best_value {
            tau_star
        } else {
            samples[best_idx].0
        });
        let mut notes = vec!["supremum located on the interior grid".to_string()];
        for (side, lim) in [(self.alpha, lim_alpha), (self.beta, lim_beta)] {
            if let Some(AsymLimit::Finite(c)) = lim {
                // ties go to the endpoint marker: a limit equal to the
                // interior maximum means the supremum is only approached
                if c >= chi * (1.0 - 1e-9) {
                    chi = chi.max(c);
                    argmax = self.geometric_side(side);
                    notes = vec![format!(
                        "supremum approached in the limit toward the {} endpoint",
                        side_label(argmax)
                    )];
                }
            }
        }
        let err = 2.0 * self.tol().rel_tol * chi + self.tol().abs_tol;
        Ok(HardyResult {
            chi: ExtendedValue::finite(chi, err),
            regime,
            profile: samples,
            argmax_tau: Some(argmax),
            notes,
        })
    }

    /// Golden-section maximization of the profile on `[a, b]`.
    fn golden_max(&self, a: f64, b: f64, floor: f64) -> (f64, f64) {
        const INV_PHI: f64 = 0.618_033_988_749_894_9;
        let (mut lo, mut hi) = (a, b);
        let eval = |tau: f64| -> f64 {
            match self.profile(tau) {
                Ok(ExtendedValue::Finite { value, .. }) => value,
                _ => f64::NEG_INFINITY,
            }
        };
        let mut x1 = hi - INV_PHI * (hi - lo);
        let mut x2 = lo + INV_PHI * (hi - lo);
        let mut f1 = eval(x1);
        let mut f2 = eval(x2);
        for _ in 0..80 {
            if (hi - lo).abs() <= 1e-7 * lo.abs().max(hi.abs()).max(1e-6) {
                break;
            }
            if f1 > f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - INV_PHI * (hi - lo);
                f1 = eval(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + INV_PHI * (hi - lo);
                f2 = eval(x2);
            }
        }
        let (tau, value) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
        if value.is_finite() {
            (tau, value.max(floor))
        } else {
            (0.5 * (a + b), floor)
        }
    }

    /// Integral form (`p < q`).
    pub fn integral_form(&self) -> Result<HardyResult> {
        let regime = Regime::IntegralForm;
        let e = &self.exps;
        let outer_pow = e.q / (e.q - e.p);
        let chi_pow = (e.q - e.p) / (e.p * e.q);

        let tail_total = self.end_integral(&self.w0, self.beta)?;
        if tail_total.outcome.is_divergent() {
            return Ok(HardyResult::divergent(
                regime,
                "divergent: v0^p is not integrable toward the β endpoint".into(),
                Vec::new(),
            ));
        }
        let head_total = self.end_integral(&self.w1, self.alpha)?;
        if head_total.outcome.is_divergent() {
            return Ok(HardyResult::divergent(
                regime,
                "divergent: v1^(-q') is not integrable at the α endpoint".into(),
                Vec::new(),
            ));
        }

        // symbolic decision for the outer integral at both endpoints
        let theta_beta = self.theta_asym_at(self.beta, outer_pow);
        let theta_alpha = self.theta_asym_at(self.alpha, outer_pow);
        for (side, asym) in [(self.beta, theta_beta), (self.alpha, theta_alpha)] {
            if let Some(a) = asym {
                if !a.integral_converges() {
                    return Ok(HardyResult::divergent(
                        regime,
                        format!(
                            "divergent: outer integrand not integrable toward the {} endpoint",
                            side_label(self.geometric_side(side))
                        ),
                        Vec::new(),
                    ));
                }
            }
        }

        // numeric evaluation of the outer integral with cached inner
        // partial integrals, rescaled by the largest sampled log magnitude
        let outer = self.outer_integral(outer_pow, theta_alpha, theta_beta)?;
        match outer {
            ExtendedValue::Divergent => Ok(HardyResult::divergent(
                regime,
                "divergent: the outer integral grew without bound".into(),
                Vec::new(),
            )),
            ExtendedValue::Finite { value, error_bound } => {
                let chi = value.powf(chi_pow);
                let err = if value > 0.0 {
                    chi * chi_pow.abs() * (error_bound / value) + self.tol().abs_tol
                } else {
                    self.tol().abs_tol
                };
                Ok(HardyResult {
                    chi: ExtendedValue::finite(chi, err),
                    regime,
                    profile: Vec::new(),
                    argmax_tau: None,
                    notes: vec!["integral form evaluated on a shared adaptive mesh".into()],
                })
            }
        }
    }

    /// Leading behavior of the outer integrand
    /// `Θ(τ) = (head1^(p-1) tail0)^(q/(q-p)) w1(τ)` toward one endpoint.
    fn theta_asym_at(&self, side: Side, outer_pow: f64) -> Option<Asym> {
        let e = &self.exps;
        let w1_here = self.w1.endpoint_asym(side);
        let head_factor = if side == self.alpha {
            self.head_vanishing_asym()?
        } else {
            let w1b = self.w1.endpoint_asym(side);
            if w1b.integral_converges() {
                Asym::constant(1.0, w1_here.local)
            } else {
                w1b.primitive_growing()?
            }
        };
        let tail_factor = if side == self.beta {
            self.tail_vanishing_asym()?
        } else {
            let w0a = self.w0.endpoint_asym(side);
            if w0a.integral_converges() {
                Asym::constant(1.0, w1_here.local)
            } else {
                w0a.primitive_growing()?
            }
        };
        Some(
            head_factor
                .powf(e.p - 1.0)
                .mul(&tail_factor)
                .powf(outer_pow)
                .mul(&w1_here),
        )
    }

    /// Numeric outer integral for the integral form.
    fn outer_integral(
        &self,
        outer_pow: f64,
        theta_alpha: Option<Asym>,
        theta_beta: Option<Asym>,
    ) -> Result<ExtendedValue> {
        let e = self.exps;
        let iv = self.interval;
        let tol = self.qtol();

        // cached inner integrals, tighter than the outer demand
        let inner = self.inner_tol();
        let head = HeadFun::new(&self.w1, &iv, self.alpha, &inner)?;
        let tail = HeadFun::new(&self.w0, &iv, self.beta, &inner)?;
        let w1 = self.w1.clone();

        let ln_theta = move |tau: f64| -> f64 {
            let h = head.value(tau);
            let t = tail.value(tau);
            if !(h > 0.0) || !(t > 0.0) {
                return f64::NEG_INFINITY;
            }
            outer_pow * ((e.p - 1.0) * h.ln() + t.ln()) + w1.ln_eval(tau)
        };

        // log-magnitude normalization so large outer powers cannot overflow
        let probe = tau_grid(&iv, 48);
        let mut shift = f64::NEG_INFINITY;
        for &tau in &probe {
            let v = ln_theta(tau);
            if v.is_finite() && v > shift {
                shift = v;
            }
        }
        if !shift.is_finite() {
            return Err(LpqError::TolFailure(
                "outer integrand could not be sampled".into(),
            ));
        }

        let local_at = |side: Side| {
            if side == Side::Upper && iv.is_unbounded() {
                LocalVar::TowardInfinity
            } else {
                LocalVar::TowardZero
            }
        };
        let geo = |side: Side, a: Option<Asym>| {
            a.map(|x| x.scale_coeff((-shift).exp()))
                .unwrap_or_else(|| Asym::constant(1.0, local_at(side)))
        };
        let (lower_asym, upper_asym) = match self.alpha {
            Side::Lower => (geo(Side::Lower, theta_alpha), geo(Side::Upper, theta_beta)),
            Side::Upper => (geo(Side::Lower, theta_beta), geo(Side::Upper, theta_alpha)),
        };
        let range = Interval {
            lo: iv.lo,
            hi: iv.hi,
            orientation: Orientation::Forward,
        };
        let integrand = SymFun::numeric(
            range,
            move |tau| (ln_theta(tau) - shift).exp(),
            lower_asym,
            upper_asym,
            None,
        );
        let result = improper_integral(&integrand, &range, &tol)?;
        Ok(match result.outcome {
            ExtendedValue::Divergent => ExtendedValue::Divergent,
            ExtendedValue::Finite { value, error_bound } => {
                ExtendedValue::finite(value * shift.exp(), error_bound * shift.exp())
            }
        })
    }
}

fn side_label(a: ArgmaxTau) -> &'static str {
    match a {
        ArgmaxTau::LowerEndpoint => "lower",
        ArgmaxTau::UpperEndpoint => "upper",
        ArgmaxTau::Interior(_) => "interior",
    }
}

fn compact(history: &[(f64, f64)]) -> Vec<(f64, f64)> {
    if history.len() <= 4 {
        history.to_vec()
    } else {
        vec![
            history[0],
            history[history.len() / 2],
            history[history.len() - 1],
        ]
    }
}

/// Combines the two profile factors.
fn combine_profile(exps: &Exponents, tail: ExtendedValue, head: ExtendedValue) -> ExtendedValue {
    match (tail, head) {
        (
            ExtendedValue::Finite {
                value: t,
                error_bound: te,
            },
            ExtendedValue::Finite {
                value: h,
                error_bound: he,
            },
        ) => {
            let t = t.max(0.0);
            let h = h.max(0.0);
            let value = t.powf(1.0 / exps.p) * h.powf(1.0 / exps.q_conj);
            let rel = if t > 0.0 && h > 0.0 {
                te / t / exps.p + he / h / exps.q_conj
            } else {
                0.0
            };
            ExtendedValue::finite(value, value * rel)
        }
        _ => ExtendedValue::Divergent,
    }
}

/// Log-spaced grid over the interior, clustered toward both endpoints.
fn tau_grid(interval: &Interval, n: usize) -> Vec<f64> {
    let n = n.max(8);
    let mut grid = Vec::with_capacity(n + 1);
    if interval.is_unbounded() {
        let scale = interval.lo.abs().max(1.0);
        for k in 0..n {
            let x = -7.0 + 14.0 * (k as f64) / ((n - 1) as f64);
            grid.push(interval.lo + scale * 10f64.powf(x));
        }
    } else {
        let span = interval.hi - interval.lo;
        let m = (n / 2).max(4);
        for k in 0..m {
            let d = 10f64.powf(-7.0 * (k as f64) / ((m - 1) as f64)) / 2.0;
            grid.push(interval.lo + span * d);
            grid.push(interval.hi - span * d);
        }
    }
    grid.sort_by(|a, b| a.total_cmp(b));
    grid.dedup();
    grid.retain(|&t| t > interval.lo && t < interval.hi);
    grid
}

/// Cached evaluator of a one-sided integral: from the `Lower` end it yields
/// `∫_lo^τ w`, from the `Upper` end `∫_τ^hi w`.
///
/// Values near the far end of the covered range are recomputed directly
/// instead of by subtraction from the prefix, which would cancel
/// catastrophically exactly where downstream formulas amplify relative
/// error.
struct HeadFun {
    w: SymFun,
    iv: Interval,
    prefix: f64,
    cum: Cumulative,
    from_lower: bool,
    tol: Tolerances,
    direct: std::sync::Mutex<std::collections::BTreeMap<u64, f64>>,
}

impl HeadFun {
    fn new(w: &SymFun, iv: &Interval, end: Side, tol: &Tolerances) -> Result<Self> {
        let base = if iv.is_unbounded() {
            iv.lo + iv.lo.abs().max(1.0)
        } else {
            0.5 * (iv.lo + iv.hi)
        };
        let range = match end {
            Side::Lower => Interval {
                lo: iv.lo,
                hi: base,
                orientation: Orientation::Forward,
            },
            Side::Upper => Interval {
                lo: base,
                hi: iv.hi,
                orientation: Orientation::Forward,
            },
        };
        let prefix = improper_integral(w, &range, tol)?
            .outcome
            .value()
            .ok_or_else(|| LpqError::TolFailure("one-sided prefix integral diverged".into()))?;
        Ok(HeadFun {
            w: w.clone(),
            iv: *iv,
            prefix,
            cum: Cumulative::new(w.clone(), base, *tol),
            from_lower: end == Side::Lower,
            tol: *tol,
            direct: std::sync::Mutex::new(std::collections::BTreeMap::new()),
        })
    }

    /// Direct one-sided integral, bypassing the cumulative subtraction.
    fn direct_value(&self, tau: f64) -> f64 {
        if let Some(v) = self.direct.lock().unwrap().get(&tau.to_bits()) {
            return *v;
        }
        let range = if self.from_lower {
            Interval {
                lo: self.iv.lo,
                hi: tau,
                orientation: Orientation::Forward,
            }
        } else {
            Interval {
                lo: tau,
                hi: self.iv.hi,
                orientation: Orientation::Forward,
            }
        };
        let v = match improper_integral(&self.w, &range, &self.tol) {
            Ok(r) => r.outcome.value().unwrap_or(f64::NAN),
            Err(_) => f64::NAN,
        };
        self.direct.lock().unwrap().insert(tau.to_bits(), v);
        v
    }

    /// One-sided integral up to `τ`, clamped below at zero.
    fn value(&self, tau: f64) -> f64 {
        let gap = match self.cum.value(tau) {
            Ok(v) => v,
            Err(_) => return f64::NAN,
        };
        let v = if self.from_lower {
            // ∫_lo^τ = ∫_lo^base + ∫_base^τ
            self.prefix + gap
        } else {
            // ∫_τ^hi = ∫_base^hi - ∫_base^τ
            self.prefix - gap
        };
        // heavy cancellation against the prefix: recompute directly
        if v < 0.2 * self.prefix {
            let d = self.direct_value(tau);
            if d.is_finite() {
                return d.max(0.0);
            }
        }
        v.max(0.0)
    }
}

/// The expression under the supremum of the `p ≥ q` regime at `τ`, with
/// divergence encoded as [`ExtendedValue::Divergent`].
pub fn profile(problem: &HardyProblem, tau: f64, tol: &Tolerances) -> Result<ExtendedValue> {
    if problem.exps.p < problem.exps.q {
        return Err(LpqError::RegimeError(format!(
            "the profile is defined for p >= q (got p = {}, q = {})",
            problem.exps.p, problem.exps.q
        )));
    }
    if !(tau > problem.interval.lo && tau < problem.interval.hi) {
        return Err(LpqError::DomainError(format!(
            "τ = {tau} is not interior to [{}, {})",
            problem.interval.lo, problem.interval.hi
        )));
    }
    Engine::new(problem, tol)?.profile(tau)
}

/// The Hardy constant of the problem, in the regime selected by the
/// exponents (ties route to the supremum form).
pub fn hardy_constant(problem: &HardyProblem, tol: &Tolerances) -> Result<HardyResult> {
    let engine = Engine::new(problem, tol)?;
    if problem.exps.sup_form() {
        engine.sup_form()
    } else {
        engine.integral_form()
    }
}

/// Hardy constant over already-powered weights `w0 = v0^p`, `w1 = v1^(-q')`,
/// for callers whose formulas supply the powered integrands directly.
pub fn hardy_constant_powered(
    exps: Exponents,
    interval: Interval,
    w0: SymFun,
    w1: SymFun,
    tol: &Tolerances,
) -> Result<HardyResult> {
    tol.validate()?;
    let engine = Engine::from_powered(exps, interval, w0, w1, tol);
    if exps.sup_form() {
        engine.sup_form()
    } else {
        engine.integral_form()
    }
}

/// Ratio `LHS/RHS` of the Hardy inequality for the extremal candidate
/// `g_τ = v1^(-q') 1_[α,τ]`; a certified lower bound on the best constant.
pub fn extremal_ratio(problem: &HardyProblem, tau: f64, tol: &Tolerances) -> Result<f64> {
    if problem.exps.p < problem.exps.q {
        return Err(LpqError::RegimeError(
            "the extremal candidate is used in the p >= q regime".into(),
        ));
    }
    if !(tau >= problem.interval.lo && tau < problem.interval.hi) {
        return Err(LpqError::DomainError(format!("τ = {tau} outside the interval")));
    }
    let engine = Engine::new(problem, tol)?;
    let e = engine.exps;

    let mass = match engine.head1(tau)? {
        ExtendedValue::Divergent => {
            return Err(LpqError::DegenerateTestFunction(
                "∫_α^τ v1^(-q') diverges".into(),
            ))
        }
        ExtendedValue::Finite { value, .. } => value,
    };
    if mass <= 0.0 {
        return Ok(0.0);
    }
    // plugging g_τ into the right side collapses to the head integral:
    // |v1 g_τ|^q = v1^(-q'), so RHS = mass^(1/q)
    let rhs = mass.powf(1.0 / e.q);

    // LHS^p = ∫ over the ramp region of w0(σ) head1(σ)^p dσ
    //         + (∫_τ^β w0) mass^p over the plateau
    let head = HeadFun::new(&engine.w1, &engine.interval, engine.alpha, &engine.inner_tol())?;
    let w0 = engine.w0.clone();
    let p = e.p;
    let ln_integrand = move |s: f64| -> f64 {
        let h = head.value(s);
        if !(h > 0.0) {
            return f64::NEG_INFINITY;
        }
        w0.ln_eval(s) + p * h.ln()
    };
    let ramp_range = match engine.alpha {
        Side::Lower => Interval {
            lo: engine.interval.lo,
            hi: tau,
            orientation: Orientation::Forward,
        },
        Side::Upper => Interval {
            lo: tau,
            hi: engine.interval.hi,
            orientation: Orientation::Forward,
        },
    };
    // declared behavior of w0 * head^p at the α end; regular elsewhere
    let alpha_asym = engine
        .head_vanishing_asym()
        .map(|h| engine.w0.endpoint_asym(engine.alpha).mul(&h.powf(e.p)));
    let (lower_asym, upper_asym) = match engine.alpha {
        Side::Lower => (
            alpha_asym.unwrap_or_else(|| Asym::constant(1.0, LocalVar::TowardZero)),
            Asym::constant(1.0, LocalVar::TowardZero),
        ),
        Side::Upper => {
            let local = if engine.interval.is_unbounded() {
                LocalVar::TowardInfinity
            } else {
                LocalVar::TowardZero
            };
            (
                Asym::constant(1.0, LocalVar::TowardZero),
                alpha_asym.unwrap_or_else(|| Asym::constant(1.0, local)),
            )
        }
    };
    let ramp_fun = SymFun::numeric(
        ramp_range,
        move |s| ln_integrand(s).exp(),
        lower_asym,
        upper_asym,
        None,
    );
    let ramp_value = match improper_integral(&ramp_fun, &ramp_range, &engine.qtol())?.outcome {
        ExtendedValue::Divergent => return Ok(f64::INFINITY),
        ExtendedValue::Finite { value, .. } => value,
    };
    let plateau = match engine.tail0(tau)? {
        ExtendedValue::Divergent => return Ok(f64::INFINITY),
        ExtendedValue::Finite { value, .. } => value,
    };
    let lhs = (ramp_value + plateau * mass.powf(e.p)).powf(1.0 / e.p);
    Ok(lhs / rhs)
}

/// A verified divergence witness: `h ≥ 0` with `∫ |v1 h|^q` finite while
/// `∫ v0^p |∫_α^τ h|^p dτ` diverges.
#[derive(Debug, Clone)]
pub struct DivergenceWitness {
    pub h: SymFun,
    pub rhs_integral: f64,
    pub lhs_divergence_evidence: Vec<(f64, f64)>,
}

/// Candidate grid for the witness search: `h(t) = t^s (ln t)^m`.
#[derive(Debug, Clone)]
pub struct WitnessGrid {
    pub s_values: Vec<f64>,
    pub m_values: Vec<f64>,
}

impl Default for WitnessGrid {
    fn default() -> Self {
        WitnessGrid {
            s_values: (0..=6).map(|k| -0.5 * k as f64).collect(),
            m_values: vec![0.0, -1.0, -2.0, 1.0],
        }
    }
}

/// Searches the candidate family for a function realizing the divergence of
/// the Hardy constant.
pub fn divergence_witness(problem: &HardyProblem, tol: &Tolerances) -> Result<DivergenceWitness> {
    divergence_witness_with_grid(problem, tol, &WitnessGrid::default())
}

pub fn divergence_witness_with_grid(
    problem: &HardyProblem,
    tol: &Tolerances,
    grid: &WitnessGrid,
) -> Result<DivergenceWitness> {
    if !problem.v0.is_symbolic() || !problem.v1.is_symbolic() {
        return Err(LpqError::Validation(
            "witness construction needs symbolic weights".into(),
        ));
    }
    let chi = hardy_constant(problem, tol)?;
    if chi.chi.is_finite() {
        return Err(LpqError::Validation(
            "precondition violated: the Hardy constant is finite, no witness exists".into(),
        ));
    }
    let engine = Engine::new(problem, tol)?;
    let iv = engine.interval;
    let logs_allowed = iv.lo >= 1.0;

    for &m in &grid.m_values {
        if m != 0.0 && !logs_allowed {
            continue;
        }
        for &s in &grid.s_values {
            let domain = Interval {
                lo: iv.lo,
                hi: iv.hi,
                orientation: Orientation::Forward,
            };
            let h = match SymFun::monomial(1.0, s, m, 0.0, domain) {
                Ok(h) => h,
                Err(_) => continue,
            };
            if let Some(w) = verify_witness(&engine, &h, tol) {
                return Ok(w);
            }
        }
    }
    Err(LpqError::WitnessNotFound)
}

/// Checks both defining integrals for one candidate.
fn verify_witness(engine: &Engine, h: &SymFun, tol: &Tolerances) -> Option<DivergenceWitness> {
    let iv = engine.interval;
    let q = engine.exps.q;
    let range = Interval {
        lo: iv.lo,
        hi: iv.hi,
        orientation: Orientation::Forward,
    };

    // v1 = w1^(-1/q'), so |v1 h|^q = w1^(-q/q') h^q
    let v1_pow_q = engine.w1.pow_weight(-q / engine.exps.q_conj);
    let rhs_fun = v1_pow_q.mul(&h.pow_weight(q)).ok()?;
    // the first invariant must hold symbolically (dominant asymptotics)
    if !rhs_fun.endpoint_asym(Side::Upper).integral_converges()
        || !rhs_fun.endpoint_asym(Side::Lower).integral_converges()
    {
        return None;
    }
    let rhs_value = improper_integral(&rhs_fun, &range, tol).ok()?.outcome.value()?;

    // the primitive of h from the α end must be finite for interior τ
    let h_alpha = h.endpoint_asym(engine.alpha);
    if !h_alpha.integral_converges() {
        return None;
    }
    // second invariant: w0 * P^p diverges, decided on composed asymptotics
    let p = engine.exps.p;
    let lambda_beta = {
        let h_beta = h.endpoint_asym(engine.beta);
        let primitive = if h_beta.integral_converges() {
            Asym::constant(1.0, h_beta.local)
        } else {
            h_beta.primitive_growing()?
        };
        engine.w0.endpoint_asym(engine.beta).mul(&primitive.powf(p))
    };
    let lambda_alpha = {
        let primitive = h_alpha.primitive_vanishing()?;
        engine.w0.endpoint_asym(engine.alpha).mul(&primitive.powf(p))
    };
    if lambda_beta.integral_converges() && lambda_alpha.integral_converges() {
        return None;
    }

    // numeric divergence evidence for the outer integral
    let head = HeadFun::new(h, &iv, engine.alpha, tol).ok()?;
    let w0 = engine.w0.clone();
    let ln_lambda = move |tau: f64| -> f64 {
        let pm = head.value(tau);
        if !(pm > 0.0) {
            return f64::NEG_INFINITY;
        }
        w0.ln_eval(tau) + p * pm.ln()
    };
    let (lower_asym, upper_asym) = match engine.alpha {
        Side::Lower => (lambda_alpha, lambda_beta),
        Side::Upper => (lambda_beta, lambda_alpha),
    };
    let lambda_fun = SymFun::numeric(
        range,
        move |tau| ln_lambda(tau).exp(),
        lower_asym,
        upper_asym,
        None,
    );
    let outer = improper_integral(&lambda_fun, &range, tol).ok()?;
    if !outer.outcome.is_divergent() {
        return None;
    }
    Some(DivergenceWitness {
        h: h.clone(),
        rhs_integral: rhs_value,
        lhs_divergence_evidence: outer.cutoff_history,
    })
}
