//! Parser for the textual function grammar
//! `coeff * t^alpha * (ln t)^gamma * exp(delta*t)`, with `+` between terms.

use super::monomial::Monomial;
use super::SymFun;
use crate::types::{Interval, LpqError, Result};

/// Parses a function in the textual grammar onto the given domain.
///
/// Accepted factors, joined with `*` inside a term and `+` between terms:
/// a positive number, `t` or `t^a`, `(ln t)` or `(ln t)^g`, and
/// `exp(d*t)` (shorthands `exp(t)`, `exp(-t)`). Exponents may be negative
/// and may be parenthesized, e.g. `t^(-2)`.
pub fn parse_symfun(src: &str, domain: Interval) -> Result<SymFun> {
    let mut terms = Vec::new();
    for chunk in split_top_level_plus(src) {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            return Err(err(src, "empty term"));
        }
        terms.push(parse_term(chunk, src)?);
    }
    SymFun::from_monomials(terms, domain)
}

/// Splits on `+` outside parentheses.
fn split_top_level_plus(src: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in src.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '+' if depth == 0 => {
                out.push(&src[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&src[start..]);
    out
}

fn err(src: &str, what: &str) -> LpqError {
    LpqError::Validation(format!("cannot parse function {src:?}: {what}"))
}

fn parse_term(term: &str, src: &str) -> Result<Monomial> {
    let mut coeff = 1.0f64;
    let mut alpha: Option<f64> = None;
    let mut gamma: Option<f64> = None;
    let mut delta: Option<f64> = None;
    let mut saw_number = false;

    for factor in split_top_level_star(term) {
        let f = factor.trim();
        if f.is_empty() {
            return Err(err(src, "empty factor"));
        }
        if let Some(rest) = f.strip_prefix("exp") {
            let inner = strip_parens(rest.trim()).ok_or_else(|| err(src, "exp needs (…)"))?;
            if delta.is_some() {
                return Err(err(src, "duplicate exp factor"));
            }
            delta = Some(parse_exp_argument(inner, src)?);
        } else if f == "t" || f.starts_with("t^") {
            if alpha.is_some() {
                return Err(err(src, "duplicate t factor"));
            }
            alpha = Some(if f == "t" {
                1.0
            } else {
                parse_exponent(&f[2..], src)?
            });
        } else if let Some(rest) = strip_log_head(f) {
            if gamma.is_some() {
                return Err(err(src, "duplicate (ln t) factor"));
            }
            gamma = Some(if rest.is_empty() {
                1.0
            } else if let Some(e) = rest.strip_prefix('^') {
                parse_exponent(e, src)?
            } else {
                return Err(err(src, "bad (ln t) factor"));
            });
        } else if let Ok(x) = parse_number(f) {
            if x <= 0.0 {
                return Err(err(src, "coefficients must be positive"));
            }
            coeff *= x;
            saw_number = true;
        } else {
            return Err(err(src, &format!("unrecognized factor {f:?}")));
        }
    }

    if !saw_number && alpha.is_none() && gamma.is_none() && delta.is_none() {
        return Err(err(src, "empty term"));
    }
    Ok(Monomial::new(
        coeff,
        alpha.unwrap_or(0.0),
        gamma.unwrap_or(0.0),
        delta.unwrap_or(0.0),
    ))
}

fn split_top_level_star(term: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in term.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '*' if depth == 0 => {
                out.push(&term[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&term[start..]);
    out
}

/// `"(ln t)..."` -> suffix after the closing paren.
fn strip_log_head(f: &str) -> Option<&str> {
    let rest = f.strip_prefix('(')?;
    let rest = rest.trim_start();
    let rest = rest.strip_prefix("ln")?;
    let rest = rest.trim_start();
    let rest = rest.strip_prefix('t')?;
    let rest = rest.trim_start();
    let rest = rest.strip_prefix(')')?;
    Some(rest.trim())
}

fn strip_parens(f: &str) -> Option<&str> {
    let rest = f.strip_prefix('(')?;
    let rest = rest.strip_suffix(')')?;
    Some(rest.trim())
}

/// Argument of `exp(...)`: `d*t`, `t`, or `-t`.
fn parse_exp_argument(inner: &str, src: &str) -> Result<f64> {
    if inner == "t" {
        return Ok(1.0);
    }
    if inner == "-t" {
        return Ok(-1.0);
    }
    let (num, var) = inner
        .split_once('*')
        .ok_or_else(|| err(src, "exp argument must be d*t, t, or -t"))?;
    if var.trim() != "t" {
        return Err(err(src, "exp argument must be d*t"));
    }
    parse_number(num.trim()).map_err(|_| err(src, "bad exp coefficient"))
}

fn parse_exponent(s: &str, src: &str) -> Result<f64> {
    let s = s.trim();
    let body = strip_parens(s).unwrap_or(s);
    parse_number(body.trim()).map_err(|_| err(src, &format!("bad exponent {s:?}")))
}

fn parse_number(s: &str) -> std::result::Result<f64, std::num::ParseFloatError> {
    // accept simple fractions like 4/3 as a convenience
    if let Some((a, b)) = s.split_once('/') {
        let a: f64 = a.trim().parse()?;
        let b: f64 = b.trim().parse()?;
        return Ok(a / b);
    }
    s.trim().parse()
}
