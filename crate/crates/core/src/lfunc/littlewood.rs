use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{integrate, Quadrature};
use crate::error::{require, Result};

const EDGE_SHIFT: f64 = 1e-4;
const TAIL: f64 = 1e-15;

/// Both sides of the Littlewood-type identity for f(s) = 1 − a·2^{−s}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LittlewoodCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub zeros: usize,
    pub t1: f64,
    pub t2: f64,
}

fn log_abs_f(a: f64, s: Complex64) -> f64 {
    let w = -a * (-s * LN_2).exp();
    0.5 * (2.0 * w.re + w.norm_sqr()).ln_1p()
}

/// Compares the zero sum with the two boundary integrals, 8 panels per unit.
pub fn littlewood_identity_check(a: f64, sigma_p: f64, t1: f64, t2: f64) -> Result<LittlewoodCheck> {
    littlewood_identity_check_with(a, sigma_p, t1, t2, 8)
}

/// As `littlewood_identity_check` with a chosen number of quadrature panels per unit length.
pub fn littlewood_identity_check_with(a: f64, sigma_p: f64, t1: f64, t2: f64, panels: usize) -> Result<LittlewoodCheck> {
    require(a > 0.0, "a > 0")?;
    require(t2 - t1 > PI / LN_2, "t₂ − t₁ > π/log 2")?;
    require(panels >= 1, "at least one panel per unit")?;
    let beta = a.log2();
    let period = 2.0 * PI / LN_2;
    let on_edge = |t: f64| {
        let k = (t / period).round();
        beta >= sigma_p && (t - k * period).abs() < 1e-12
    };
    let (t1, t2) = if on_edge(t1) || on_edge(t2) { (t1 + EDGE_SHIFT, t2 + EDGE_SHIFT) } else { (t1, t2) };
    let len = t2 - t1;
    let mut lhs = 0.0;
    let mut zeros = 0;
    if beta >= sigma_p {
        let k_lo = (t1 / period).ceil() as i64;
        let k_hi = (t2 / period).floor() as i64;
        for k in k_lo..=k_hi {
            let gamma = k as f64 * period;
            lhs += (PI * (gamma - t1) / len).sin() * (PI * (beta - sigma_p) / len).sinh();
            zeros += 1;
        }
        lhs *= 2.0 * len;
    }
    let quad = Quadrature::new(1e-14, 1e-13);
    let vertical_panels = ((len * panels as f64).ceil() as usize).max(1);
    let mut vertical = 0.0;
    for i in 0..vertical_panels {
        let lo = t1 + len * i as f64 / vertical_panels as f64;
        let hi = t1 + len * (i + 1) as f64 / vertical_panels as f64;
        vertical += integrate(|t: f64| (PI * (t - t1) / len).sin() * log_abs_f(a, Complex64::new(sigma_p, t)), lo, hi, &quad).value;
    }
    // |log|f|| ≤ 2a2^{−σ} once a2^{−σ} ≤ 1/2, so the sinh-weighted tail is explicit.
    let decay = LN_2 - PI / len;
    let start = sigma_p.max(a.log2() + 1.0);
    let tail_at = |end: f64| 4.0 * a * (-PI * sigma_p / len).exp() * ((PI / len - LN_2) * end).exp() / decay;
    let mut end = start + 1.0;
    while tail_at(end) > TAIL {
        end += 1.0;
    }
    let horizontal_panels = (((end - sigma_p) * panels as f64).ceil() as usize).max(1);
    let mut horizontal = 0.0;
    for i in 0..horizontal_panels {
        let lo = sigma_p + (end - sigma_p) * i as f64 / horizontal_panels as f64;
        let hi = sigma_p + (end - sigma_p) * (i + 1) as f64 / horizontal_panels as f64;
        horizontal += integrate(
            |s: f64| {
                (PI * (s - sigma_p) / len).sinh()
                    * (log_abs_f(a, Complex64::new(s, t1)) + log_abs_f(a, Complex64::new(s, t2)))
            },
            lo,
            hi,
            &quad,
        )
        .value;
    }
    Ok(LittlewoodCheck { lhs, rhs: vertical + horizontal, zeros, t1, t2 })
}
