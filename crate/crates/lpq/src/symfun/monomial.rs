//! The power–log–exponential monomial `c * t^alpha * (ln t)^gamma * exp(delta*t)`.

use super::asym::{Asym, LocalVar};

/// One asymptotic monomial. The coefficient is strictly positive; sums of
/// monomials stay positive wherever each factor is defined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    /// Power exponent of `t`.
    pub alpha: f64,
    /// Power exponent of `ln t`.
    pub gamma: f64,
    /// Coefficient of `t` in the exponential factor.
    pub delta: f64,
}

impl Monomial {
    pub fn new(coeff: f64, alpha: f64, gamma: f64, delta: f64) -> Self {
        Monomial {
            coeff,
            alpha,
            gamma,
            delta,
        }
    }

    pub fn constant(c: f64) -> Self {
        Monomial::new(c, 0.0, 0.0, 0.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut v = self.coeff;
        if self.alpha != 0.0 {
            v *= t.powf(self.alpha);
        }
        if self.gamma != 0.0 {
            v *= t.ln().powf(self.gamma);
        }
        if self.delta != 0.0 {
            v *= (self.delta * t).exp();
        }
        v
    }

    /// `ln` of the monomial value, stable where `eval` would over/underflow.
    pub fn ln_eval(&self, t: f64) -> f64 {
        let mut v = self.coeff.ln();
        if self.alpha != 0.0 {
            v += self.alpha * t.ln();
        }
        if self.gamma != 0.0 {
            v += self.gamma * t.ln().ln();
        }
        v + self.delta * t
    }

    /// Pointwise power: exponents scale linearly.
    pub fn powf(&self, s: f64) -> Monomial {
        Monomial {
            coeff: self.coeff.powf(s),
            alpha: self.alpha * s,
            gamma: self.gamma * s,
            delta: self.delta * s,
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            coeff: self.coeff * other.coeff,
            alpha: self.alpha + other.alpha,
            gamma: self.gamma + other.gamma,
            delta: self.delta + other.delta,
        }
    }

    /// Signed product-rule expansion of the derivative.
    pub fn derivative_terms(&self) -> Vec<SignedMonomial> {
        let mut out = Vec::new();
        if self.alpha != 0.0 {
            out.push(SignedMonomial {
                coeff: self.coeff * self.alpha,
                alpha: self.alpha - 1.0,
                gamma: self.gamma,
                delta: self.delta,
            });
        }
        if self.gamma != 0.0 {
            out.push(SignedMonomial {
                coeff: self.coeff * self.gamma,
                alpha: self.alpha - 1.0,
                gamma: self.gamma - 1.0,
                delta: self.delta,
            });
        }
        if self.delta != 0.0 {
            out.push(SignedMonomial {
                coeff: self.coeff * self.delta,
                alpha: self.alpha,
                gamma: self.gamma,
                delta: self.delta,
            });
        }
        out
    }

    /// Behavior toward `+∞`.
    pub fn asym_at_infinity(&self) -> Asym {
        Asym::new(
            self.coeff,
            self.delta,
            self.alpha,
            self.gamma,
            LocalVar::TowardInfinity,
        )
    }

    /// Behavior toward `0+` (the exponential factor tends to 1; `gamma` must
    /// be zero for domains reaching down to 0, which construction enforces).
    pub fn asym_at_zero(&self) -> Asym {
        Asym::new(self.coeff, 0.0, self.alpha, self.gamma, LocalVar::TowardZero)
    }
}

impl std::fmt::Display for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.coeff != 1.0 || (self.alpha == 0.0 && self.gamma == 0.0 && self.delta == 0.0) {
            parts.push(fmt_coeff(self.coeff));
        }
        if self.alpha != 0.0 {
            parts.push(if self.alpha == 1.0 {
                "t".to_string()
            } else {
                format!("t^{}", fmt_coeff(self.alpha))
            });
        }
        if self.gamma != 0.0 {
            parts.push(if self.gamma == 1.0 {
                "(ln t)".to_string()
            } else {
                format!("(ln t)^{}", fmt_coeff(self.gamma))
            });
        }
        if self.delta != 0.0 {
            parts.push(format!("exp({}*t)", fmt_coeff(self.delta)));
        }
        write!(f, "{}", parts.join(" * "))
    }
}

fn fmt_coeff(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

/// Monomial with a sign-carrying coefficient; derivatives live here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedMonomial {
    pub coeff: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl SignedMonomial {
    pub fn eval(&self, t: f64) -> f64 {
        Monomial {
            coeff: 1.0,
            alpha: self.alpha,
            gamma: self.gamma,
            delta: self.delta,
        }
        .eval(t)
            * self.coeff
    }

    pub fn scale_key(&self) -> (f64, f64, f64) {
        (self.delta, self.alpha, self.gamma)
    }
}
