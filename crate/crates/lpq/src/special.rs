//! Sphere volumes via exact half-integer Gamma evaluation.

use crate::types::{LpqError, Result};

/// Gamma(k/2) for a positive integer `k`, by the recursion
/// Gamma(x+1) = x Gamma(x) from Gamma(1/2) = sqrt(pi) and Gamma(1) = 1.
fn gamma_half(k: u32) -> f64 {
    debug_assert!(k >= 1);
    let mut x = if k % 2 == 0 { 1.0 } else { 0.5 };
    let mut g = if k % 2 == 0 {
        1.0
    } else {
        std::f64::consts::PI.sqrt()
    };
    while 2.0 * x + 0.5 < k as f64 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Volume (surface measure) `s_n = 2 pi^((n+1)/2) / Gamma((n+1)/2)` of the
/// unit n-sphere in R^(n+1).
pub fn sphere_volume(n: u32) -> Result<f64> {
    if n < 1 {
        return Err(LpqError::Validation(format!(
            "sphere dimension must be >= 1, got {n}"
        )));
    }
    let half = (n + 1) as f64 / 2.0;
    Ok(2.0 * std::f64::consts::PI.powf(half) / gamma_half(n + 1))
}
