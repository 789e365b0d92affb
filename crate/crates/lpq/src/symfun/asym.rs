//! Leading-order endpoint behavior and exact convergence rules.
//!
//! Every quantity this crate reasons about symbolically — weights, their
//! powers, partial integrals of weights — has a leading-order description
//! `coeff * e^(rate*u) * u^pow * (ln u)^log_pow * (ln ln u)^loglog_pow`
//! in a local coordinate `u` that either tends to `+∞` or to `0+` at the
//! endpoint under study. Products, powers, limits, and improper-integral
//! convergence are all decided on this representation.

/// Direction of the local coordinate at the endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalVar {
    /// `u -> +∞` (right endpoint at infinity).
    TowardInfinity,
    /// `u -> 0+` (finite endpoint approached from inside; log powers are
    /// taken of `|ln u|`).
    TowardZero,
}

/// `coeff * e^(rate*u) * u^pow * L^log_pow * (ln L)^loglog_pow` where
/// `L = ln u` toward infinity and `L = |ln u|` toward zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Asym {
    pub coeff: f64,
    pub rate: f64,
    pub pow: f64,
    pub log_pow: f64,
    pub loglog_pow: f64,
    pub local: LocalVar,
}

/// Outcome of a limit along the local coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AsymLimit {
    Zero,
    Finite(f64),
    Infinite,
}

impl Asym {
    pub fn new(coeff: f64, rate: f64, pow: f64, log_pow: f64, local: LocalVar) -> Self {
        Asym {
            coeff,
            rate,
            pow,
            log_pow,
            loglog_pow: 0.0,
            local,
        }
    }

    /// Constant behavior (the function tends to `c > 0` at the endpoint).
    pub fn constant(c: f64, local: LocalVar) -> Self {
        Asym::new(c, 0.0, 0.0, 0.0, local)
    }

    pub fn mul(&self, other: &Asym) -> Asym {
        debug_assert_eq!(self.local, other.local);
        Asym {
            coeff: self.coeff * other.coeff,
            rate: self.rate + other.rate,
            pow: self.pow + other.pow,
            log_pow: self.log_pow + other.log_pow,
            loglog_pow: self.loglog_pow + other.loglog_pow,
            local: self.local,
        }
    }

    pub fn powf(&self, s: f64) -> Asym {
        Asym {
            coeff: self.coeff.powf(s),
            rate: self.rate * s,
            pow: self.pow * s,
            log_pow: self.log_pow * s,
            loglog_pow: self.loglog_pow * s,
            local: self.local,
        }
    }

    pub fn scale_coeff(&self, c: f64) -> Asym {
        Asym {
            coeff: self.coeff * c,
            ..*self
        }
    }

    /// Normalized copy: exponents within 1e-9 of the decision thresholds 0
    /// and -1 are snapped onto them, so that exponent arithmetic that
    /// cancels exactly in the reals (like `δ/p + (-δ)/p`) also cancels
    /// here. All decision procedures run on this form.
    fn norm(&self) -> Asym {
        fn snap(x: f64) -> f64 {
            if x.abs() < 1e-9 {
                0.0
            } else if (x + 1.0).abs() < 1e-9 {
                -1.0
            } else {
                x
            }
        }
        Asym {
            coeff: self.coeff,
            rate: if self.rate.abs() < 1e-9 { 0.0 } else { self.rate },
            pow: snap(self.pow),
            log_pow: snap(self.log_pow),
            loglog_pow: snap(self.loglog_pow),
            local: self.local,
        }
    }

    /// Growth key: lexicographically positive means the quantity tends to
    /// `+∞`, negative means it tends to `0`, zero means it tends to `coeff`.
    fn growth_key(&self) -> [f64; 4] {
        let n = self.norm();
        match self.local {
            LocalVar::TowardInfinity => [n.rate, n.pow, n.log_pow, n.loglog_pow],
            // e^(rate*u) -> 1 as u -> 0+, so `rate` never decides; u^pow
            // blows up for pow < 0; |ln u| blows up, so log powers keep
            // their sign.
            LocalVar::TowardZero => [-n.pow, n.log_pow, n.loglog_pow, 0.0],
        }
    }

    /// Limit of the described quantity at the endpoint.
    pub fn limit(&self) -> AsymLimit {
        for k in self.growth_key() {
            if k > 0.0 {
                return AsymLimit::Infinite;
            }
            if k < 0.0 {
                return AsymLimit::Zero;
            }
        }
        AsymLimit::Finite(self.coeff)
    }

    /// Compares leading growth; `Greater` means `self` dominates at the
    /// endpoint.
    pub fn dominates(&self, other: &Asym) -> std::cmp::Ordering {
        debug_assert_eq!(self.local, other.local);
        let a = self.growth_key();
        let b = other.growth_key();
        for i in 0..4 {
            if a[i] > b[i] {
                return std::cmp::Ordering::Greater;
            }
            if a[i] < b[i] {
                return std::cmp::Ordering::Less;
            }
        }
        std::cmp::Ordering::Equal
    }

    /// Exact convergence of the improper integral `∫ self du` at the
    /// endpoint: toward infinity this is the integral over `[U, ∞)`, toward
    /// zero over `(0, U]`.
    pub fn integral_converges(&self) -> bool {
        let n = self.norm();
        match n.local {
            LocalVar::TowardInfinity => {
                if n.rate != 0.0 {
                    return n.rate < 0.0;
                }
                power_scale_converges(n.pow, n.log_pow, n.loglog_pow)
            }
            LocalVar::TowardZero => {
                // ∫_0 u^a |ln u|^g du: substitute u = e^{-s}.
                power_scale_converges(-n.pow - 2.0, n.log_pow, n.loglog_pow)
            }
        }
    }

    /// Leading behavior of the convergent tail `T(u) = ∫_u^∞ self` (toward
    /// infinity) or `T(u) = ∫_0^u self` (toward zero). Returns `None` when
    /// the integral diverges or the leading order leaves the representable
    /// family.
    pub fn primitive_vanishing(&self) -> Option<Asym> {
        if !self.integral_converges() {
            return None;
        }
        let n = self.norm();
        match n.local {
            LocalVar::TowardInfinity => {
                if n.rate < 0.0 {
                    // ∫_u^∞ c e^{r t} t^a .. dt ~ c e^{r u} u^a .. / (-r)
                    Some(n.scale_coeff(1.0 / -n.rate))
                } else if n.pow != -1.0 {
                    // pow < -1 here
                    Some(Asym {
                        coeff: n.coeff / (-n.pow - 1.0),
                        rate: 0.0,
                        pow: n.pow + 1.0,
                        log_pow: n.log_pow,
                        loglog_pow: n.loglog_pow,
                        local: n.local,
                    })
                } else if n.log_pow != -1.0 {
                    // ∫ u^{-1} (ln u)^g: g < -1
                    Some(Asym {
                        coeff: n.coeff / (-n.log_pow - 1.0),
                        rate: 0.0,
                        pow: 0.0,
                        log_pow: n.log_pow + 1.0,
                        loglog_pow: n.loglog_pow,
                        local: n.local,
                    })
                } else if n.loglog_pow < -1.0 {
                    Some(Asym {
                        coeff: n.coeff / (-n.loglog_pow - 1.0),
                        rate: 0.0,
                        pow: 0.0,
                        log_pow: 0.0,
                        loglog_pow: n.loglog_pow + 1.0,
                        local: n.local,
                    })
                } else {
                    None
                }
            }
            LocalVar::TowardZero => {
                if n.pow != -1.0 {
                    // pow > -1: ∫_0^u c t^a |ln t|^g dt ~ c u^{a+1} |ln u|^g / (a+1)
                    Some(Asym {
                        coeff: n.coeff / (n.pow + 1.0),
                        rate: 0.0,
                        pow: n.pow + 1.0,
                        log_pow: n.log_pow,
                        loglog_pow: n.loglog_pow,
                        local: n.local,
                    })
                } else if n.log_pow != -1.0 {
                    // log_pow < -1: ∫_0^u t^{-1}|ln t|^g ~ |ln u|^{g+1}/(-g-1)
                    Some(Asym {
                        coeff: n.coeff / (-n.log_pow - 1.0),
                        rate: 0.0,
                        pow: 0.0,
                        log_pow: n.log_pow + 1.0,
                        loglog_pow: n.loglog_pow,
                        local: n.local,
                    })
                } else {
                    None
                }
            }
        }
    }

    /// Leading behavior of the divergent primitive `P(u) = ∫_ref^u self`
    /// (toward infinity) or `P(u) = ∫_u^ref self` (toward zero). Returns
    /// `None` when the integral converges at the endpoint or the leading
    /// order is not representable.
    pub fn primitive_growing(&self) -> Option<Asym> {
        if self.integral_converges() {
            return None;
        }
        let n = self.norm();
        match n.local {
            LocalVar::TowardInfinity => {
                if n.rate > 0.0 {
                    Some(n.scale_coeff(1.0 / n.rate))
                } else if n.rate < 0.0 {
                    None
                } else if n.pow != -1.0 {
                    // pow > -1
                    Some(Asym {
                        coeff: n.coeff / (n.pow + 1.0),
                        rate: 0.0,
                        pow: n.pow + 1.0,
                        log_pow: n.log_pow,
                        loglog_pow: n.loglog_pow,
                        local: n.local,
                    })
                } else if n.log_pow != -1.0 {
                    // log_pow > -1
                    Some(Asym {
                        coeff: n.coeff / (n.log_pow + 1.0),
                        rate: 0.0,
                        pow: 0.0,
                        log_pow: n.log_pow + 1.0,
                        loglog_pow: n.loglog_pow,
                        local: n.local,
                    })
                } else if n.loglog_pow == 0.0 {
                    // ∫ du / (u ln u) ~ ln ln u
                    Some(Asym {
                        coeff: n.coeff,
                        rate: 0.0,
                        pow: 0.0,
                        log_pow: 0.0,
                        loglog_pow: 1.0,
                        local: n.local,
                    })
                } else {
                    None
                }
            }
            LocalVar::TowardZero => {
                if n.pow != -1.0 {
                    // pow < -1: ∫_u^ref t^a ~ u^{a+1}/(-a-1)
                    Some(Asym {
                        coeff: n.coeff / (-n.pow - 1.0),
                        rate: 0.0,
                        pow: n.pow + 1.0,
                        log_pow: n.log_pow,
                        loglog_pow: n.loglog_pow,
                        local: n.local,
                    })
                } else if n.log_pow != -1.0 {
                    // log_pow > -1: ~ |ln u|^{g+1}/(g+1)
                    Some(Asym {
                        coeff: n.coeff / (n.log_pow + 1.0),
                        rate: 0.0,
                        pow: 0.0,
                        log_pow: n.log_pow + 1.0,
                        loglog_pow: n.loglog_pow,
                        local: n.local,
                    })
                } else {
                    None
                }
            }
        }
    }

}

/// Convergence of `∫^∞ u^pow (ln u)^g (ln ln u)^l du`.
fn power_scale_converges(pow: f64, log_pow: f64, loglog_pow: f64) -> bool {
    if pow != -1.0 {
        return pow < -1.0;
    }
    if log_pow != -1.0 {
        return log_pow < -1.0;
    }
    loglog_pow < -1.0
}
