use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::eval::{l_value, l_value_with_derivative, FamilyEvaluator};
use crate::arith::special::ln_gamma_right;
use crate::arith::{integrate, Quadrature};
use crate::characters::{Character, CharacterFamily};
use crate::error::{require, Error, Result};

/// Right end of the σ-integral; beyond it the principal logarithm is exact.
pub const SIGMA_CUT: f64 = 8.0;
/// Half-width used when t sits on a zero ordinate.
pub const COLLISION_OFFSET: f64 = 1e-6;
/// Newton distance |L/L′| below which t counts as a zero ordinate.
pub const COLLISION_DISTANCE: f64 = 1e-8;
const MAX_HEIGHT: f64 = 100.0;

/// One value of S(t, χ) with its integration diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArgumentSample {
    pub t: f64,
    pub s: f64,
    /// (1/π)·Im log L(8 + it), the part beyond the integration range.
    pub tail: f64,
    pub quadrature_error: f64,
    /// Difference between the raw quadrature and the nearest value consistent
    /// with the endpoint arguments.
    pub branch_correction: f64,
    pub evaluations: usize,
    /// Estimated distance |L/L′| from 1/2 + it to the nearest zero.
    pub nearest_zero: f64,
    pub averaged: bool,
    pub converged: bool,
}

fn principal(x: f64) -> f64 {
    x - 2.0 * PI * (x / (2.0 * PI)).round()
}

fn direct(t: f64, character: &Character<'_>) -> Result<ArgumentSample> {
    let top = l_value(Complex64::new(SIGMA_CUT, t), character)?;
    let tail = top.arg();
    let (l_half, d_half) = l_value_with_derivative(Complex64::new(0.5, t), character)?;
    let nearest_zero = if d_half.norm() > 0.0 { l_half.norm() / d_half.norm() } else { f64::INFINITY };
    let quad = Quadrature::new(1e-11, 1e-11);
    let mut failure = None;
    let r = integrate(
        |sigma: f64| match l_value_with_derivative(Complex64::new(sigma, t), character) {
            Ok((l, d)) => (d / l).im,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        0.5,
        SIGMA_CUT,
        &quad,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    // The integral equals arg L(8+it) − arg L(1/2+it) up to a multiple of 2π.
    let chord = principal(tail - l_half.arg());
    let snapped = chord + 2.0 * PI * ((r.value - chord) / (2.0 * PI)).round();
    let branch_correction = r.value - snapped;
    Ok(ArgumentSample {
        t,
        s: (tail - snapped) / PI,
        tail: tail / PI,
        quadrature_error: r.error,
        branch_correction,
        evaluations: r.evaluations + 2,
        nearest_zero,
        averaged: false,
        converged: r.converged && branch_correction.abs() < 0.1,
    })
}

/// S(t, χ) = −(1/π) ∫_{1/2}^∞ Im L′/L(σ + it, χ) dσ.
///
/// On a zero ordinate the value is the mean of S(t ± 1e−6).
pub fn s_of_t(t: f64, character: &Character<'_>) -> Result<ArgumentSample> {
    if character.is_principal() {
        return Err(Error::Unsupported("S(t) of the principal character".into()));
    }
    require(t.abs() <= MAX_HEIGHT, "|t| ≤ 100")?;
    let (l, d) = l_value_with_derivative(Complex64::new(0.5, t), character)?;
    let distance = if d.norm() > 0.0 { l.norm() / d.norm() } else { f64::INFINITY };
    if distance >= COLLISION_DISTANCE {
        return direct(t, character);
    }
    let lo = direct(t - COLLISION_OFFSET, character)?;
    let hi = direct(t + COLLISION_OFFSET, character)?;
    Ok(ArgumentSample {
        t,
        s: 0.5 * (lo.s + hi.s),
        tail: 0.5 * (lo.tail + hi.tail),
        quadrature_error: lo.quadrature_error.max(hi.quadrature_error),
        branch_correction: lo.branch_correction.abs().max(hi.branch_correction.abs()),
        evaluations: lo.evaluations + hi.evaluations,
        nearest_zero: distance,
        averaged: true,
        converged: lo.converged && hi.converged,
    })
}

/// S̃(t, χ) = S(t, χ) + S(t, χ̄).
pub fn s_tilde(t: f64, character: &Character<'_>) -> Result<f64> {
    let a = s_of_t(t, character)?;
    let b = s_of_t(t, &character.conjugate())?;
    Ok(a.s + b.s)
}

/// (1/2π) ∫_{−t}^{t} Γ′/Γ(1/4 + 𝔞/2 + iu/2) du in closed form.
pub fn digamma_term(t: f64, parity: u8) -> f64 {
    let z = Complex64::new(0.25 + 0.5 * parity as f64, 0.5 * t);
    2.0 / PI * ln_gamma_right(z).im
}

/// N(t, χ) = (t/π) log(q/π) + S̃(t, χ) + digamma term, given S̃.
pub fn n_formula_from(t: f64, q: u64, parity: u8, s_tilde: f64) -> f64 {
    t / PI * (q as f64 / PI).ln() + s_tilde + digamma_term(t, parity)
}

/// Zeros with |γ| ≤ t predicted by the counting formula.
pub fn n_formula(t: f64, character: &Character<'_>) -> Result<f64> {
    require(t > 0.0, "t > 0")?;
    Ok(n_formula_from(t, character.modulus(), character.parity(), s_tilde(t, character)?))
}

/// σ-nodes for horizontal phase tracking from 8 down to 1/2.
fn tracking_nodes() -> Vec<f64> {
    let mut v: Vec<f64> = (0..=24).map(|i| SIGMA_CUT - 0.25 * i as f64).collect();
    v.extend((1..=30).map(|i| 2.0 - 0.05 * i as f64));
    v
}

fn track_char(t: f64, character: &Character<'_>, sig: &[f64], vals: &[Complex64]) -> Result<f64> {
    fn seg(t: f64, ch: &Character<'_>, a: f64, la: Complex64, b: f64, lb: Complex64, depth: u32) -> Result<f64> {
        let d = (lb / la).arg();
        if d.abs() <= PI / 4.0 {
            return Ok(d);
        }
        if depth > 40 {
            return Err(Error::NearSingular { modulus: la.norm().min(lb.norm()) });
        }
        let m = 0.5 * (a + b);
        let lm = l_value(Complex64::new(m, t), ch)?;
        Ok(seg(t, ch, a, la, m, lm, depth + 1)? + seg(t, ch, m, lm, b, lb, depth + 1)?)
    }
    let mut phase = vals[0].arg();
    for k in 0..sig.len() - 1 {
        phase += seg(t, character, sig[k], vals[k], sig[k + 1], vals[k + 1], 0)?;
    }
    Ok(phase / PI)
}

/// S(t, χ) for every character of a family by tracking arg L from σ = 8 to 1/2.
///
/// Entry 0 (principal) is None. Characters with t on a zero ordinate fall back
/// to the averaged single-character evaluation.
pub fn family_s(ev: &FamilyEvaluator<'_>, t: f64) -> Result<Vec<Option<f64>>> {
    require(t.abs() <= MAX_HEIGHT, "|t| ≤ 100")?;
    let family: &CharacterFamily = ev.family();
    let sig = tracking_nodes();
    let mut rows: Vec<Vec<Complex64>> = vec![Vec::with_capacity(sig.len()); family.len()];
    let mut last_d = Vec::new();
    for (k, &s) in sig.iter().enumerate() {
        let z = Complex64::new(s, t);
        let vals = if k + 1 == sig.len() {
            let (l, d) = ev.values_with_derivative(z)?;
            last_d = d;
            l
        } else {
            ev.values(z)?
        };
        for (row, v) in rows.iter_mut().zip(vals) {
            row.push(v);
        }
    }
    let chars: Vec<_> = family.characters().collect();
    chars
        .par_iter()
        .map(|ch| {
            if ch.is_principal() {
                return Ok(None);
            }
            let row = &rows[ch.index()];
            let l = row[row.len() - 1];
            let d = last_d[ch.index()];
            if l.norm() < COLLISION_DISTANCE * d.norm() {
                return s_of_t(t, ch).map(|a| Some(a.s));
            }
            track_char(t, ch, &sig, row).map(Some)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::build_family;
    use crate::lfunc::zeros::{critical_zeros, critical_zeros_window};

    #[test]
    fn real_character_at_zero() {
        let f = build_family(3).unwrap();
        let ch = f.character(1).unwrap();
        for i in 0..=100 {
            let sigma = 0.5 + 0.075 * i as f64;
            let l = l_value(Complex64::new(sigma, 0.0), &ch).unwrap();
            assert!(l.re > 0.0 && l.im == 0.0);
        }
        let s = s_of_t(0.0, &ch).unwrap();
        assert!(s.s.abs() < 1e-12, "{s:?}");
    }

    #[test]
    fn conjugation() {
        for q in [5u64, 7] {
            let f = build_family(q).unwrap();
            for ch in f.non_principal() {
                for t in [0.5, 1.0] {
                    let a = s_of_t(t, &ch).unwrap();
                    let b = s_of_t(-t, &ch.conjugate()).unwrap();
                    assert!((a.s + b.s).abs() < 1e-8);
                    assert!(a.converged && a.branch_correction.abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn counting_formula_mod_eleven() {
        let f = build_family(11).unwrap();
        for ch in f.non_principal() {
            let t = 5.0;
            let z = critical_zeros_window(&ch, -t, t).unwrap();
            let n = n_formula(t, &ch).unwrap();
            assert!((n - z.ordinates.len() as f64).abs() < 1e-6, "{} {n} {}", ch.index(), z.ordinates.len());
        }
    }

    #[test]
    fn jumps_at_zeros() {
        for q in [5u64, 7] {
            let f = build_family(q).unwrap();
            let ch = f.character(1).unwrap();
            let z = critical_zeros(&ch, 20.0).unwrap();
            for &g in z.ordinates.iter().take(3) {
                let below = s_of_t(g - 1e-5, &ch).unwrap().s;
                let above = s_of_t(g + 1e-5, &ch).unwrap().s;
                // Away from the jump S decreases at rate (1/2π) log(qt/2π).
                let drift = 2e-5 * (q as f64 * g / (2.0 * PI)).ln() / (2.0 * PI);
                assert!((above - below - 1.0).abs() < 1e-6 + drift, "{q} {g} {}", above - below);
                let on = s_of_t(g, &ch).unwrap();
                assert!(on.averaged);
                assert!((on.s - 0.5 * (above + below)).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn family_matches_single() {
        let f = build_family(13).unwrap();
        let ev = FamilyEvaluator::new(&f);
        for t in [0.3, 4.0, 17.5] {
            let all = family_s(&ev, t).unwrap();
            assert!(all[0].is_none());
            for ch in f.non_principal() {
                let single = s_of_t(t, &ch).unwrap().s;
                assert!((all[ch.index()].unwrap() - single).abs() < 1e-9, "{t} {}", ch.index());
            }
        }
    }

    #[test]
    fn digamma_term_small_t() {
        // The term is o(1) as t → 0.
        assert!(digamma_term(1e-8, 0).abs() < 1e-7);
        let h = 1e-5;
        let z = Complex64::new(0.25, 1.0);
        let psi = crate::arith::digamma(z).unwrap();
        let fd = (digamma_term(2.0 + h, 0) - digamma_term(2.0 - h, 0)) / (2.0 * h);
        assert!((fd - psi.re / PI).abs() < 1e-8);
    }
}
