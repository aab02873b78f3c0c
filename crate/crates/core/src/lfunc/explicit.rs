use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eval::log_deriv;
use super::zeros::{ZeroList, ZeroPoint};
use crate::arith::{for_each_prime_in, SIEVE_CAPACITY};
use crate::characters::Character;
use crate::error::{require, Error, Result};
use crate::mollifier::lambda_x_weight;

const TRIVIAL_TERMS: u32 = 50;
const HEIGHT_MARGIN: f64 = 50.0;
const SERIES_TAIL: f64 = 1e-14;

/// σ_{t,χ} = 1/2 + 2·max over zeros near t of max(β − 1/2, η/log x).
pub fn sigma_t_chi(t: f64, zeros: &[ZeroPoint], x: f64, eta: f64) -> Result<f64> {
    require(eta >= 1.0, "η ≥ 1")?;
    require(x >= 2.0, "x ≥ 2")?;
    let lx = x.ln();
    let floor = eta / lx;
    let m = zeros
        .iter()
        .filter(|z| z.beta >= 0.5 && (t - z.gamma).abs() <= x.powf(3.0 * (z.beta - 0.5)) / lx)
        .map(|z| (z.beta - 0.5).max(floor))
        .fold(floor, f64::max);
    Ok(0.5 + 2.0 * m)
}

/// Σ_{n<N} Λ_x(n) χ(n) n^{−s}, walking prime powers below N.
fn smoothed_sum(s: Complex64, character: &Character<'_>, x: f64, limit: u64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    if limit < 3 {
        return acc;
    }
    for_each_prime_in(2, limit - 1, |p| {
        let lp = (p as f64).ln();
        let mut pk = p;
        while pk < limit {
            let n = pk as f64;
            let w = lambda_x_weight(n, x);
            if w != 0.0 {
                acc += character.value(pk) * (lp * w) * (-s * n.ln()).exp();
            }
            match pk.checked_mul(p) {
                Some(v) => pk = v,
                None => break,
            }
        }
    });
    acc
}

/// First integer at or above x³.
fn cube_limit(x: f64) -> u64 {
    (x * x * x).ceil() as u64
}

/// Σ_{n<x³} Λ_x(n) χ(n) n^{−s}.
///
/// For Re s > 1 the sum stops once Σ_{n>N} Λ(n)n^{−σ} ≤ 1.04σN^{1−σ}/(σ−1)
/// falls below 1e−14.
pub fn smoothed_dirichlet_sum(s: Complex64, character: &Character<'_>, x: f64) -> Result<Complex64> {
    require(x >= 1.0, "x ≥ 1")?;
    let mut limit = cube_limit(x);
    if s.re > 1.0 {
        let sm1 = s.re - 1.0;
        let n = (1.04 * s.re / (sm1 * SERIES_TAIL)).powf(1.0 / sm1);
        if n < limit as f64 {
            limit = n.ceil() as u64;
        }
    }
    if limit as usize > SIEVE_CAPACITY {
        return Err(Error::Capacity(format!("the Λ_x sum needs n < {limit}")));
    }
    Ok(smoothed_sum(s, character, x, limit))
}

/// r(x, t) = Σ_{n<x³} Λ_x(n) χ(n) n^{−s̃} at s̃ = σ_{t,χ} + it.
///
/// The sum is empty when x³ ≤ 2, so no σ_{t,χ} is needed there.
pub fn dirichlet_remainder(t: f64, character: &Character<'_>, x: f64, eta: f64, zeros: &[ZeroPoint]) -> Result<Complex64> {
    require(x >= 1.0, "x ≥ 1")?;
    if x * x * x <= 2.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let sigma = sigma_t_chi(t, zeros, x, eta)?;
    let limit = cube_limit(x);
    if limit as usize > SIEVE_CAPACITY {
        return Err(Error::Capacity(format!("x³ = {} exceeds the sieve capacity", x * x * x)));
    }
    Ok(smoothed_sum(Complex64::new(sigma, t), character, x, limit))
}

/// Smoothing kernel x^{w}(1 − x^{w})²/(−w)³ at w = ρ − s.
fn kernel(w: Complex64, lx: f64) -> Complex64 {
    let xw = (w * lx).exp();
    let one_minus = 1.0 - xw;
    xw * one_minus * one_minus / (-w * -w * -w)
}

/// Both sides of the smoothed explicit formula for L′/L.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExplicitResidual {
    pub residual: f64,
    pub truncation_bound: f64,
    pub log_derivative: Complex64,
    pub dirichlet_part: Complex64,
    pub trivial_part: Complex64,
    pub zero_part: Complex64,
    pub zeros_used: usize,
    pub height: f64,
}

/// |L′/L(s) − RHS| with the zero sum cut at the list's symmetric height T and
/// the trivial zeros cut after 50 terms.
pub fn explicit_formula_residual(s: Complex64, character: &Character<'_>, x: f64, zeros: &ZeroList) -> Result<ExplicitResidual> {
    require(x >= 2.0, "x ≥ 2")?;
    if zeros.modulus != character.modulus() || zeros.character != character.index() {
        return Err(Error::Domain("zero list belongs to a different character".into()));
    }
    if !zeros.validated || !zeros.suspects.is_empty() {
        return Err(Error::Domain("zero list is not validated".into()));
    }
    let t = s.im;
    let height = (-zeros.t_lo).min(zeros.t_hi);
    require(height >= t.abs() + HEIGHT_MARGIN, "zeros up to height T ≥ |Im s| + 50")?;
    let a = character.parity() as f64;
    for m in 0..TRIVIAL_TERMS {
        if (s + 2.0 * m as f64 + a).norm() < 1e-12 {
            return Err(Error::Domain(format!("s = {s} is a trivial zero")));
        }
    }
    let lhs = log_deriv(s, character)?;
    let lx = x.ln();
    let dirichlet_part = -smoothed_dirichlet_sum(s, character, x)?;
    let trivial_part: Complex64 =
        (0..TRIVIAL_TERMS).map(|m| kernel(Complex64::new(-2.0 * m as f64 - a, 0.0) - s, lx)).sum::<Complex64>() / (lx * lx);
    let used: Vec<f64> = zeros.ordinates.iter().copied().filter(|g| g.abs() <= height).collect();
    let zero_part: Complex64 = used.iter().map(|&g| kernel(Complex64::new(0.5, g) - s, lx)).sum::<Complex64>() / (lx * lx);
    let rhs = dirichlet_part + trivial_part + zero_part;
    let xf = x.powf(0.5 - s.re);
    let q = character.modulus() as f64;
    let density = ((q * (height + t.abs()) / (2.0 * PI)).ln() + 1.0) / PI;
    let zero_tail = xf * (1.0 + xf).powi(2) * density / (height - t.abs()).powi(2) / (lx * lx);
    let w = 2.0 * TRIVIAL_TERMS as f64 + a + s.re;
    let trivial_tail = x.powf(-w) * (1.0 + x.powf(-w)).powi(2) / ((w - 1.0).powi(2) * 2.0 * lx * lx);
    Ok(ExplicitResidual {
        residual: (lhs - rhs).norm(),
        truncation_bound: zero_tail + trivial_tail,
        log_derivative: lhs,
        dirichlet_part,
        trivial_part,
        zero_part,
        zeros_used: used.len(),
        height,
    })
}
