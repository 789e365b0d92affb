//! Property suites: randomized agreement between the exact symbolic
//! decisions and the numeric engine, and structural invariants of the
//! Hardy machinery.

use lpq::hardy::{hardy_constant, HardyProblem};
use lpq::quad::improper_integral;
use lpq::symfun::{Monomial, SymFun};
use lpq::types::{make_exponents, Interval, Side, Tolerances};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

mod support;
use support::{numeric_copy, MonomialOracle};

fn fast_tol() -> Tolerances {
    Tolerances {
        rel_tol: 1e-7,
        sup_grid_points: 48,
        ..Tolerances::default()
    }
}

/// Exact convergence decisions vs the cutoff-doubling heuristic on
/// numeric-kind copies of random single monomials over [2, ∞).
#[test]
fn quad_heuristic_agrees_with_symbolic_decisions() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let domain = Interval::forward(2.0, f64::INFINITY).unwrap();
    let tol = fast_tol();
    let mut checked = 0;
    while checked < 60 {
        let alpha: f64 = rng.gen_range(-3.0..3.0);
        let gamma: f64 = rng.gen_range(-3.0..3.0);
        let delta: f64 = *[-1.0, 0.0, 1.0].get(rng.gen_range(0..3)).unwrap();
        // keep clear of the power borderline, where finitely many samples
        // cannot decide
        if delta == 0.0 && (alpha + 1.0).abs() < 0.3 {
            continue;
        }
        let coeff = rng.gen_range(0.2..5.0);
        let m = Monomial::new(coeff, alpha, gamma, delta);
        let f = SymFun::from_monomials(vec![m], domain).unwrap();
        let exact = f.integral_converges(Side::Upper).unwrap().converges();

        let numeric = numeric_copy(&f);
        let heuristic = improper_integral(&numeric, &domain, &tol)
            .unwrap_or_else(|e| panic!("inconclusive for {m:?}: {e}"));
        assert_eq!(
            heuristic.outcome.is_finite(),
            exact,
            "disagreement for {m:?}"
        );
        checked += 1;
    }
}

/// The library's Hardy tag (symbolic route) vs an independently hand-coded
/// finiteness oracle, fifty problems per regime.
#[test]
fn hardy_tags_match_closed_form_oracle_per_regime() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    let tol = fast_tol();
    for sup_regime in [true, false] {
        let mut checked = 0;
        while checked < 50 {
            let Some(case) = MonomialOracle::draw(&mut rng, sup_regime) else {
                continue;
            };
            let problem = case.problem();
            let got = hardy_constant(&problem, &tol)
                .unwrap_or_else(|e| panic!("failed on {case:?}: {e}"))
                .chi
                .is_finite();
            assert_eq!(got, case.finite, "symbolic route disagrees on {case:?}");
            checked += 1;
        }
    }
}

/// Reversed-orientation constants equal forward constants of the reflected
/// weights t -> lo + hi - t (finite intervals).
#[test]
fn reflection_invariance() {
    let tol = Tolerances::default();
    let (lo, hi) = (0.0, 2.0);
    let iv_rev = Interval::reversed(lo, hi).unwrap();
    let iv_fwd = Interval::forward(lo, hi).unwrap();
    for (p, q, d0, d1) in [
        (2.0, 2.0, 0.7, -0.4),
        (3.0, 2.0, -1.1, 0.9),
        (2.0, 3.5, 0.5, 0.5),
    ] {
        let e = make_exponents(p, q).unwrap();
        let v0 = SymFun::monomial(1.3, 0.0, 0.0, d0, iv_rev).unwrap();
        let v1 = SymFun::monomial(0.8, 0.0, 0.0, d1, iv_rev).unwrap();
        let reversed = HardyProblem::new(e, iv_rev, v0.clone(), v1.clone()).unwrap();
        let chi_rev = hardy_constant(&reversed, &tol).unwrap().chi;

        // reflected weights as numeric members (the reflection leaves the
        // monomial family)
        let reflect = move |w: SymFun| {
            let at_lo = w.evaluate(hi).unwrap();
            let at_hi = w.evaluate(lo).unwrap();
            SymFun::numeric(
                iv_fwd,
                move |t| w.evaluate(lo + hi - t).unwrap_or(f64::NAN),
                lpq::Asym::constant(at_lo, lpq::LocalVar::TowardZero),
                lpq::Asym::constant(at_hi, lpq::LocalVar::TowardZero),
                None,
            )
        };
        let forward = HardyProblem::new(e, iv_fwd, reflect(v0), reflect(v1)).unwrap();
        let chi_fwd = hardy_constant(&forward, &tol).unwrap().chi;
        assert_eq!(chi_rev.is_finite(), chi_fwd.is_finite());
        if let (Some(a), Some(b)) = (chi_rev.value(), chi_fwd.value()) {
            assert!(
                (a - b).abs() <= 1e-6 * a.abs().max(1e-12),
                "p={p}, q={q}: reversed {a} vs reflected {b}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Conjugation is an involution on the exponent pair.
    #[test]
    fn conjugate_involution(p in 1.01f64..50.0, q in 1.01f64..50.0) {
        let e = make_exponents(p, q).unwrap();
        let back = make_exponents(e.p_conj, e.q_conj).unwrap();
        prop_assert!((back.p_conj - p).abs() <= 1e-9 * p);
        prop_assert!((back.q_conj - q).abs() <= 1e-9 * q);
    }

    /// Partial integrals are additive over adjacent ranges.
    #[test]
    fn partial_integral_additivity(
        a in 0.1f64..2.0,
        gap1 in 0.1f64..3.0,
        gap2 in 0.1f64..3.0,
        alpha in -0.9f64..2.0,
        delta in -1.0f64..0.5,
    ) {
        let domain = Interval::forward(0.0, f64::INFINITY).unwrap();
        let f = SymFun::monomial(1.0, alpha, 0.0, delta, domain).unwrap();
        let tol = Tolerances::default();
        let (b, c) = (a + gap1, a + gap1 + gap2);
        let whole = lpq::quad::partial_integral(&f, a, c, &tol).unwrap();
        let split = lpq::quad::partial_integral(&f, a, b, &tol).unwrap()
            + lpq::quad::partial_integral(&f, b, c, &tol).unwrap();
        prop_assert!((whole - split).abs() <= 1e-8 * whole.abs().max(1e-9));
    }

    /// Powers compose: (f^s1)^s2 = f^(s1 s2) pointwise.
    #[test]
    fn power_composition(
        s1 in -2.5f64..2.5,
        s2 in -2.5f64..2.5,
        alpha in -2.0f64..2.0,
        t in 2.0f64..50.0,
    ) {
        let domain = Interval::forward(1.5, f64::INFINITY).unwrap();
        let f = SymFun::monomial(1.7, alpha, 1.0, -0.3, domain).unwrap();
        let a = f.power(s1).unwrap().power(s2).unwrap();
        let b = f.power(s1 * s2).unwrap();
        let va = a.evaluate(t).unwrap();
        let vb = b.evaluate(t).unwrap();
        prop_assert!((va - vb).abs() <= 1e-8 * vb.abs().max(1e-300));
    }
}
