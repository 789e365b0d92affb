//! Shared helpers for the integration suites: numeric-kind copies of
//! symbolic functions and an independently-derived finiteness oracle for
//! single-monomial Hardy problems.
//!
//! Compiled into each test binary separately, so not every binary uses
//! every item.
#![allow(dead_code)]

use lpq::hardy::HardyProblem;
use lpq::symfun::asym::{Asym, LocalVar};
use lpq::symfun::{Monomial, SymFun};
use lpq::types::{make_exponents, Exponents, Interval};
use rand::rngs::StdRng;
use rand::Rng;

/// Left endpoint of all randomized suites; chosen strictly above 1 so every
/// monomial is regular there.
pub const SUITE_LO: f64 = 2.0;

/// A numeric-kind copy of a single-monomial function on `[SUITE_LO, ∞)`,
/// with honestly declared endpoint asymptotics derived from the monomial.
pub fn numeric_copy(f: &SymFun) -> SymFun {
    let domain = f.domain();
    assert!(domain.lo >= 1.0 && domain.is_unbounded());
    let terms = f.terms().expect("symbolic input").to_vec();
    assert_eq!(terms.len(), 1);
    let m = terms[0];
    let lower = Asym::constant(m.eval(domain.lo), LocalVar::TowardZero);
    let upper = Asym::new(m.coeff, m.delta, m.alpha, m.gamma, LocalVar::TowardInfinity);
    SymFun::numeric(domain, move |t| m.eval(t), lower, upper, None)
}

/// Scale triple `(rate, pow, log_pow)` describing growth toward infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scale(pub f64, pub f64, pub f64);

impl Scale {
    fn snap(x: f64) -> f64 {
        if x.abs() < 1e-12 {
            0.0
        } else {
            x
        }
    }

    pub fn components(&self) -> [f64; 3] {
        [Self::snap(self.0), Self::snap(self.1), Self::snap(self.2)]
    }

    /// `∫^∞` of a quantity with this leading scale converges?
    pub fn integral_converges(&self) -> bool {
        let [r, a, g] = self.components();
        if r != 0.0 {
            return r < 0.0;
        }
        if a != -1.0 {
            return a < -1.0;
        }
        g < -1.0
    }

    /// Leading scale of the convergent tail `∫_τ^∞`.
    pub fn tail(&self) -> Scale {
        let [r, a, g] = self.components();
        if r < 0.0 {
            Scale(r, a, g)
        } else {
            // a < -1 by the generator's margin
            Scale(0.0, a + 1.0, g)
        }
    }

    /// Leading scale of the divergent primitive `∫^τ`.
    pub fn grow(&self) -> Scale {
        let [r, a, g] = self.components();
        if r > 0.0 {
            Scale(r, a, g)
        } else {
            // a > -1 by the generator's margin
            Scale(0.0, a + 1.0, g)
        }
    }

    pub fn scaled(&self, s: f64) -> Scale {
        Scale(self.0 * s, self.1 * s, self.2 * s)
    }

    pub fn plus(&self, other: &Scale) -> Scale {
        Scale(self.0 + other.0, self.1 + other.1, self.2 + other.2)
    }

    /// Sign of the leading nonzero component: +1 grows, -1 decays, 0 flat.
    pub fn growth_sign(&self) -> i32 {
        for c in self.components() {
            if c > 0.0 {
                return 1;
            }
            if c < 0.0 {
                return -1;
            }
        }
        0
    }

    /// First nonzero component has at least this magnitude (margin away
    /// from undecidable borderlines)?
    pub fn decisive(&self, margin: f64) -> bool {
        for c in self.components() {
            if c != 0.0 {
                return c.abs() >= margin;
            }
        }
        true
    }
}

/// A randomized single-monomial Hardy problem on `[SUITE_LO, ∞)` together
/// with the closed-form finiteness decision, derived independently of the
/// library's asymptotic engine.
#[derive(Debug, Clone)]
pub struct MonomialOracle {
    pub exps: Exponents,
    pub v0: Monomial,
    pub v1: Monomial,
    pub finite: bool,
}

impl MonomialOracle {
    /// Draws a problem whose decision quantities are safely away from the
    /// borderlines that finitely many samples cannot resolve. Returns
    /// `None` when the draw must be rejected.
    pub fn draw(rng: &mut StdRng, sup_regime: bool) -> Option<MonomialOracle> {
        let (p, q) = if sup_regime {
            let q = rng.gen_range(1.1..3.0);
            (q + rng.gen_range(0.0..1.5), q)
        } else {
            let p = rng.gen_range(1.1..2.8);
            (p, p + rng.gen_range(0.3..1.8))
        };
        let exps = make_exponents(p, q).ok()?;
        let deltas = [-1.0, 0.0, 1.0];
        let v0 = Monomial::new(
            rng.gen_range(0.3..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            deltas[rng.gen_range(0..3)],
        );
        let v1 = Monomial::new(
            rng.gen_range(0.3..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            deltas[rng.gen_range(0..3)],
        );
        // powered-weight scales at infinity
        let w0 = Scale(p * v0.delta, p * v0.alpha, p * v0.gamma);
        let w1 = Scale(
            -exps.q_conj * v1.delta,
            -exps.q_conj * v1.alpha,
            -exps.q_conj * v1.gamma,
        );
        // margins: power exponents away from the -1 borderline
        for s in [&w0, &w1] {
            let [r, a, _] = s.components();
            if r == 0.0 && (a + 1.0).abs() < 0.3 {
                return None;
            }
        }
        let finite = if sup_regime {
            Self::sup_finite(&exps, &w0, &w1)?
        } else {
            Self::integral_finite(&exps, &w0, &w1)?
        };
        Some(MonomialOracle {
            exps,
            v0,
            v1,
            finite,
        })
    }

    /// `p >= q`: the tail weight must be integrable at infinity and the
    /// profile limit there must not blow up (the finite endpoint is regular
    /// and contributes nothing).
    fn sup_finite(exps: &Exponents, w0: &Scale, w1: &Scale) -> Option<bool> {
        if !w0.integral_converges() {
            return Some(false);
        }
        if w1.integral_converges() {
            // head bounded, tail vanishes: profile -> 0
            return Some(true);
        }
        let limit = w0
            .tail()
            .scaled(1.0 / exps.p)
            .plus(&w1.grow().scaled(1.0 / exps.q_conj));
        if !limit.decisive(0.05) {
            return None;
        }
        Some(limit.growth_sign() <= 0)
    }

    /// `p < q`: the tail weight must be integrable at infinity and the
    /// outer integrand must be integrable there too.
    fn integral_finite(exps: &Exponents, w0: &Scale, w1: &Scale) -> Option<bool> {
        if !w0.integral_converges() {
            return Some(false);
        }
        let head = if w1.integral_converges() {
            Scale(0.0, 0.0, 0.0)
        } else {
            w1.grow()
        };
        let outer_pow = exps.q / (exps.q - exps.p);
        let theta = head
            .scaled(exps.p - 1.0)
            .plus(&w0.tail())
            .scaled(outer_pow)
            .plus(w1);
        // margins: the outer integrand must be clearly decaying/growing and
        // clear of the -1 power borderline for the doubling heuristic
        let [r, a, _] = theta.components();
        if r == 0.0 && (a + 1.0).abs() < 0.25 {
            return None;
        }
        if !theta.decisive(0.05) {
            return None;
        }
        Some(theta.integral_converges())
    }

    pub fn domain(&self) -> Interval {
        Interval::forward(SUITE_LO, f64::INFINITY).unwrap()
    }

    /// The problem with symbolic weights.
    pub fn problem(&self) -> HardyProblem {
        let d = self.domain();
        let v0 = SymFun::from_monomials(vec![self.v0], d).unwrap();
        let v1 = SymFun::from_monomials(vec![self.v1], d).unwrap();
        HardyProblem::new(self.exps, d, v0, v1).unwrap()
    }

    /// The same problem with numeric-kind weight copies.
    pub fn numeric_problem(&self) -> HardyProblem {
        let d = self.domain();
        let v0 = SymFun::from_monomials(vec![self.v0], d).unwrap();
        let v1 = SymFun::from_monomials(vec![self.v1], d).unwrap();
        HardyProblem::new(self.exps, d, numeric_copy(&v0), numeric_copy(&v1)).unwrap()
    }
}
