//! Symbolic function family with exact asymptotic calculus.
//!
//! The family is the smallest class closed under the operations the Hardy
//! machinery needs (pointwise powers, products, reciprocals of powers):
//! positive sums of monomials `c * t^alpha * (ln t)^gamma * exp(delta*t)`.
//! Every member admits an exact convergence decision for its improper
//! integrals, which is the ground truth the numeric engine is tested
//! against. Functions outside the family (square-root slope densities,
//! arc-length pullbacks) enter as numeric evaluators with *declared*
//! endpoint asymptotics; the engine never infers asymptotics from samples.

pub mod asym;
mod monomial;
mod parse;

pub use monomial::{Monomial, SignedMonomial};
pub use parse::parse_symfun;

use crate::types::{Interval, LpqError, Result, Side};
use asym::{Asym, LocalVar};
use std::sync::Arc;

type EvalFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Kind of representation behind a [`SymFun`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymFunKind {
    Symbolic,
    NumericWithDeclaredAsymptotics,
}

#[derive(Clone)]
enum Repr {
    Symbolic(Vec<Monomial>),
    Numeric {
        eval: EvalFn,
        lower: Asym,
        upper: Asym,
        derivative: Option<EvalFn>,
    },
}

/// A positive function on a half-open interval, either an exact sum of
/// monomials or a numeric evaluator with declared endpoint asymptotics.
#[derive(Clone)]
pub struct SymFun {
    domain: Interval,
    repr: Repr,
}

impl std::fmt::Debug for SymFun {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.repr {
            Repr::Symbolic(_) => write!(f, "SymFun[{}] on [{}, {})", self, self.domain.lo, self.domain.hi),
            Repr::Numeric { .. } => write!(
                f,
                "SymFun[numeric] on [{}, {})",
                self.domain.lo, self.domain.hi
            ),
        }
    }
}

impl std::fmt::Display for SymFun {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.repr {
            Repr::Symbolic(terms) => {
                for (i, m) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{m}")?;
                }
                Ok(())
            }
            Repr::Numeric { .. } => write!(f, "<numeric>"),
        }
    }
}

impl SymFun {
    /// Builds a symbolic function from monomial terms, validating positivity
    /// and the domain restrictions that keep every factor real and positive.
    pub fn from_monomials(terms: Vec<Monomial>, domain: Interval) -> Result<Self> {
        if terms.is_empty() {
            return Err(LpqError::Validation("function needs at least one term".into()));
        }
        for m in &terms {
            if !(m.coeff > 0.0) || !m.coeff.is_finite() {
                return Err(LpqError::Validation(format!(
                    "term coefficient must be positive and finite, got {}",
                    m.coeff
                )));
            }
            if m.gamma != 0.0 && domain.lo < 1.0 {
                return Err(LpqError::Validation(
                    "terms with a (ln t) factor need a domain inside [1, inf)".into(),
                ));
            }
            if m.alpha != 0.0 && domain.lo < 0.0 {
                return Err(LpqError::Validation(
                    "terms with a t^alpha factor need a domain inside [0, inf)".into(),
                ));
            }
        }
        Ok(SymFun {
            domain,
            repr: Repr::Symbolic(terms),
        })
    }

    pub fn monomial(coeff: f64, alpha: f64, gamma: f64, delta: f64, domain: Interval) -> Result<Self> {
        Self::from_monomials(vec![Monomial::new(coeff, alpha, gamma, delta)], domain)
    }

    pub fn constant(c: f64, domain: Interval) -> Result<Self> {
        Self::from_monomials(vec![Monomial::constant(c)], domain)
    }

    /// Numeric evaluator with declared endpoint asymptotics and an optional
    /// derivative callback.
    pub fn numeric(
        domain: Interval,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        lower: Asym,
        upper: Asym,
        derivative: Option<EvalFn>,
    ) -> Self {
        debug_assert_eq!(lower.local, LocalVar::TowardZero);
        debug_assert_eq!(
            upper.local,
            if domain.is_unbounded() {
                LocalVar::TowardInfinity
            } else {
                LocalVar::TowardZero
            }
        );
        SymFun {
            domain,
            repr: Repr::Numeric {
                eval: Arc::new(eval),
                lower,
                upper,
                derivative,
            },
        }
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn kind(&self) -> SymFunKind {
        match self.repr {
            Repr::Symbolic(_) => SymFunKind::Symbolic,
            Repr::Numeric { .. } => SymFunKind::NumericWithDeclaredAsymptotics,
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self.repr, Repr::Symbolic(_))
    }

    /// Symbolic terms, if any.
    pub fn terms(&self) -> Option<&[Monomial]> {
        match &self.repr {
            Repr::Symbolic(t) => Some(t),
            Repr::Numeric { .. } => None,
        }
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        let ok = t >= self.domain.lo && (t < self.domain.hi || t == self.domain.hi && self.domain.hi.is_finite());
        if ok {
            Ok(())
        } else {
            Err(LpqError::DomainError(format!(
                "t = {t} outside [{}, {})",
                self.domain.lo, self.domain.hi
            )))
        }
    }

    /// Value at `t` inside the domain.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        Ok(self.eval_unchecked(t))
    }

    pub(crate) fn eval_unchecked(&self, t: f64) -> f64 {
        match &self.repr {
            Repr::Symbolic(terms) => terms.iter().map(|m| m.eval(t)).sum(),
            Repr::Numeric { eval, .. } => eval(t),
        }
    }

    /// `ln f(t)`, stable against overflow for symbolic members.
    pub(crate) fn ln_eval(&self, t: f64) -> f64 {
        match &self.repr {
            Repr::Symbolic(terms) => {
                if terms.len() == 1 {
                    return terms[0].ln_eval(t);
                }
                let logs: Vec<f64> = terms.iter().map(|m| m.ln_eval(t)).collect();
                let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                if !m.is_finite() {
                    return m;
                }
                m + logs.iter().map(|l| (l - m).exp()).sum::<f64>().ln()
            }
            Repr::Numeric { eval, .. } => eval(t).ln(),
        }
    }

    /// Leading behavior at one endpoint of the domain.
    pub(crate) fn endpoint_asym(&self, side: Side) -> Asym {
        match &self.repr {
            Repr::Numeric { lower, upper, .. } => match side {
                Side::Lower => *lower,
                Side::Upper => *upper,
            },
            Repr::Symbolic(terms) => self.symbolic_asym(terms, side),
        }
    }

    fn symbolic_asym(&self, terms: &[Monomial], side: Side) -> Asym {
        match side {
            Side::Upper => {
                if self.domain.is_unbounded() {
                    dominant(terms.iter().map(|m| m.asym_at_infinity()))
                } else {
                    let hi = self.domain.hi;
                    Asym::constant(
                        terms.iter().map(|m| m.eval(hi)).sum(),
                        LocalVar::TowardZero,
                    )
                }
            }
            Side::Lower => {
                let lo = self.domain.lo;
                if lo == 0.0 {
                    // gamma = 0 here by construction; exp(delta t) -> 1.
                    dominant(terms.iter().map(|m| m.asym_at_zero()))
                } else if lo == 1.0 && terms.iter().any(|m| m.gamma != 0.0) {
                    // ln t ~ (t - 1) near 1, so a (ln t)^gamma factor behaves
                    // like u^gamma in u = t - 1.
                    dominant(terms.iter().map(|m| {
                        Asym::new(
                            m.coeff * m.delta.exp(),
                            0.0,
                            m.gamma,
                            0.0,
                            LocalVar::TowardZero,
                        )
                    }))
                } else {
                    Asym::constant(
                        terms.iter().map(|m| m.eval(lo)).sum(),
                        LocalVar::TowardZero,
                    )
                }
            }
        }
    }

    /// The dominant symbolic term near an endpoint (for decision echoes).
    pub(crate) fn dominant_term(&self, side: Side) -> Option<Monomial> {
        let terms = self.terms()?;
        let best = match side {
            Side::Upper if self.domain.is_unbounded() => terms
                .iter()
                .max_by(|a, b| {
                    a.asym_at_infinity()
                        .dominates(&b.asym_at_infinity())
                })?,
            Side::Lower if self.domain.lo == 0.0 => terms
                .iter()
                .max_by(|a, b| a.asym_at_zero().dominates(&b.asym_at_zero()))?,
            _ => terms.first()?,
        };
        Some(*best)
    }

    /// Pointwise `s`-th power.
    ///
    /// Single-term symbolic members stay symbolic (exponents scale
    /// linearly); multi-term members stay symbolic only for positive integer
    /// powers. General real powers of sums are kept numeric — use
    /// [`SymFun::pow_weight`] for that fallback.
    pub fn power(&self, s: f64) -> Result<SymFun> {
        match &self.repr {
            Repr::Symbolic(terms) if terms.len() == 1 => {
                SymFun::from_monomials(vec![terms[0].powf(s)], self.domain)
            }
            Repr::Symbolic(_) => {
                if s >= 1.0 && s == s.trunc() && s <= 16.0 {
                    let mut acc = self.clone();
                    for _ in 1..(s as u32) {
                        acc = acc.mul(self)?;
                    }
                    Ok(acc)
                } else {
                    Err(LpqError::MultiTermPower(s))
                }
            }
            Repr::Numeric {
                eval,
                lower,
                upper,
                ..
            } => {
                let eval = eval.clone();
                Ok(SymFun::numeric(
                    self.domain,
                    move |t| eval(t).powf(s),
                    lower.powf(s),
                    upper.powf(s),
                    None,
                ))
            }
        }
    }

    /// `s`-th power with a numeric fallback for multi-term members: the
    /// value is `f(t)^s` and the declared asymptotics are the dominant
    /// term's, raised to `s` (valid because all terms are positive).
    pub fn pow_weight(&self, s: f64) -> SymFun {
        match self.power(s) {
            Ok(f) => f,
            Err(_) => {
                let this = self.clone();
                let lower = self.endpoint_asym(Side::Lower).powf(s);
                let upper = self.endpoint_asym(Side::Upper).powf(s);
                SymFun::numeric(
                    self.domain,
                    move |t| this.eval_unchecked(t).powf(s),
                    lower,
                    upper,
                    None,
                )
            }
        }
    }

    /// Pointwise product. Symbolic times symbolic stays symbolic.
    pub fn mul(&self, other: &SymFun) -> Result<SymFun> {
        if self.domain.lo != other.domain.lo || self.domain.hi != other.domain.hi {
            return Err(LpqError::Validation(
                "cannot multiply functions with different domains".into(),
            ));
        }
        match (&self.repr, &other.repr) {
            (Repr::Symbolic(a), Repr::Symbolic(b)) => {
                let mut terms = Vec::with_capacity(a.len() * b.len());
                for x in a {
                    for y in b {
                        terms.push(x.mul(y));
                    }
                }
                SymFun::from_monomials(terms, self.domain)
            }
            _ => {
                let f = self.clone();
                let g = other.clone();
                let lower = self
                    .endpoint_asym(Side::Lower)
                    .mul(&other.endpoint_asym(Side::Lower));
                let upper = self
                    .endpoint_asym(Side::Upper)
                    .mul(&other.endpoint_asym(Side::Upper));
                Ok(SymFun::numeric(
                    self.domain,
                    move |t| f.eval_unchecked(t) * g.eval_unchecked(t),
                    lower,
                    upper,
                    None,
                ))
            }
        }
    }

    /// Derivative as a signed numeric evaluator with the termwise-derived
    /// leading behavior at each endpoint.
    pub fn derivative(&self) -> Result<DerivFun> {
        match &self.repr {
            Repr::Symbolic(terms) => {
                let signed: Vec<SignedMonomial> =
                    terms.iter().flat_map(|m| m.derivative_terms()).collect();
                let merged = merge_signed(signed);
                let upper = if self.domain.is_unbounded() {
                    dominant_signed_at_infinity(&merged)
                } else {
                    let hi = self.domain.hi;
                    let v: f64 = merged.iter().map(|s| s.eval(hi)).sum();
                    Some(Asym::constant(v, LocalVar::TowardZero))
                };
                let constant = if merged.is_empty() {
                    Some(0.0)
                } else if merged.len() == 1 && merged[0].scale_key() == (0.0, 0.0, 0.0) {
                    Some(merged[0].coeff)
                } else {
                    None
                };
                let eval_terms = merged.clone();
                Ok(DerivFun {
                    eval: Arc::new(move |t| eval_terms.iter().map(|s| s.eval(t)).sum()),
                    upper,
                    constant,
                })
            }
            Repr::Numeric { derivative, .. } => match derivative {
                Some(d) => Ok(DerivFun {
                    eval: d.clone(),
                    upper: None,
                    constant: None,
                }),
                None => Err(LpqError::MissingDerivative),
            },
        }
    }

    /// Exact convergence decision for the improper integral of `self` near
    /// one endpoint. Symbolic members only — numeric members route through
    /// the quadrature engine.
    pub fn integral_converges(&self, at: Side) -> Result<ConvergenceDecision> {
        if !self.is_symbolic() {
            return Err(LpqError::Validation(
                "exact convergence decisions need a symbolic function".into(),
            ));
        }
        let asym = self.endpoint_asym(at);
        let converges = asym.integral_converges();
        let dominant_term = self.dominant_term(at).unwrap_or(Monomial::constant(
            if asym.coeff.is_finite() { asym.coeff } else { 1.0 },
        ));
        let reason = describe_decision(&asym, at, self.domain, converges);
        Ok(ConvergenceDecision {
            tag: if converges {
                Convergence::Converges
            } else {
                Convergence::Diverges
            },
            dominant_term,
            reason,
        })
    }
}

fn describe_decision(asym: &Asym, at: Side, domain: Interval, converges: bool) -> String {
    let endpoint = match at {
        Side::Lower => format!("{}", domain.lo),
        Side::Upper => {
            if domain.is_unbounded() {
                "inf".to_string()
            } else {
                format!("{}", domain.hi)
            }
        }
    };
    let verdict = if converges { "converges" } else { "diverges" };
    match asym.local {
        LocalVar::TowardInfinity => format!(
            "{verdict} at {endpoint}: dominant scale exp({}*t) * t^{} * (ln t)^{}",
            asym.rate, asym.pow, asym.log_pow
        ),
        LocalVar::TowardZero => format!(
            "{verdict} at {endpoint}: dominant scale u^{} * |ln u|^{} in u = t - {endpoint}",
            asym.pow, asym.log_pow
        ),
    }
}

/// Merge signed monomials with identical scale, dropping cancellations.
fn merge_signed(mut terms: Vec<SignedMonomial>) -> Vec<SignedMonomial> {
    let mut out: Vec<SignedMonomial> = Vec::new();
    while let Some(t) = terms.pop() {
        if let Some(existing) = out.iter_mut().find(|e| e.scale_key() == t.scale_key()) {
            existing.coeff += t.coeff;
        } else {
            out.push(t);
        }
    }
    out.retain(|t| t.coeff != 0.0);
    out
}

fn dominant_signed_at_infinity(terms: &[SignedMonomial]) -> Option<Asym> {
    if terms.is_empty() {
        return Some(Asym::constant(0.0, LocalVar::TowardInfinity));
    }
    let best = terms.iter().max_by(|a, b| {
        let ka = Asym::new(1.0, a.delta, a.alpha, a.gamma, LocalVar::TowardInfinity);
        let kb = Asym::new(1.0, b.delta, b.alpha, b.gamma, LocalVar::TowardInfinity);
        ka.dominates(&kb)
    })?;
    Some(Asym::new(
        best.coeff,
        best.delta,
        best.alpha,
        best.gamma,
        LocalVar::TowardInfinity,
    ))
}

fn dominant(asyms: impl Iterator<Item = Asym>) -> Asym {
    let mut collected: Vec<Asym> = Vec::new();
    for a in asyms {
        if let Some(existing) = collected
            .iter_mut()
            .find(|e| e.dominates(&a) == std::cmp::Ordering::Equal)
        {
            existing.coeff += a.coeff;
        } else {
            collected.push(a);
        }
    }
    collected
        .into_iter()
        .max_by(|a, b| a.dominates(b))
        .expect("nonempty terms")
}

/// Signed derivative evaluator; `upper` is the dominant leading behavior of
/// `f'` toward the upper end (None when unavailable for numeric members).
#[derive(Clone)]
pub struct DerivFun {
    pub eval: EvalFn,
    pub(crate) upper: Option<Asym>,
    constant: Option<f64>,
}

impl DerivFun {
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    /// The constant value of the derivative when it is constant.
    pub fn constant_value(&self) -> Option<f64> {
        self.constant
    }

    /// True when the derivative is identically zero (constant function).
    pub fn is_zero(&self) -> bool {
        self.constant == Some(0.0)
    }

    /// Dominant leading behavior toward the upper end of the domain, when
    /// derivable.
    pub(crate) fn upper_asym(&self) -> Option<Asym> {
        self.upper
    }
}

/// Convergence tag of an improper integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convergence {
    Converges,
    Diverges,
}

/// Exact decision with the dominant term it was based on.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceDecision {
    pub tag: Convergence,
    pub dominant_term: Monomial,
    pub reason: String,
}

impl ConvergenceDecision {
    pub fn converges(&self) -> bool {
        self.tag == Convergence::Converges
    }
}
