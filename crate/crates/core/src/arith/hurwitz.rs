use num_complex::Complex64;

use super::special::BERNOULLI_EVEN;
use crate::error::{Error, Result};

/// (2j)! for j = 1..=12.
const EVEN_FACTORIALS: [f64; 12] = [
    2.0,
    24.0,
    720.0,
    40320.0,
    3_628_800.0,
    479_001_600.0,
    87_178_291_200.0,
    20_922_789_888_000.0,
    6_402_373_705_728_000.0,
    2_432_902_008_176_640_000.0,
    1_124_000_727_777_607_680_000.0,
    620_448_401_733_239_439_360_000.0,
];

/// ζ(s, a) and, when requested, ∂ζ/∂s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HurwitzValue {
    pub value: Complex64,
    pub derivative: Option<Complex64>,
}

/// Hurwitz zeta ζ(s, a) = Σ_{k≥0} (k + a)^{−s} for Re s > 0, a ∈ (0, 1].
pub fn hurwitz_zeta(s: Complex64, a: f64, want_derivative: bool) -> Result<HurwitzValue> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole("s = 1".into()));
    }
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::Domain(format!("Hurwitz parameter a must lie in (0, 1], got {a}")));
    }
    if !(s.re > 0.0) || s.im.abs() > 1e4 {
        return Err(Error::Domain(format!("Hurwitz zeta needs Re s > 0 and |Im s| ≤ 1e4, got {s}")));
    }
    let shift = shift_for(s);
    if want_derivative {
        let (v, d) = hurwitz_with_derivative(s, a, shift);
        Ok(HurwitzValue { value: v, derivative: Some(d) })
    } else {
        Ok(HurwitzValue { value: hurwitz_value(s, a, shift), derivative: None })
    }
}

/// Number of direct terms so that a + N ≥ max(20, 2|Im s|).
pub(crate) fn shift_for(s: Complex64) -> usize {
    20f64.max(2.0 * s.im.abs()).ceil() as usize
}

/// w^{1−s}/(s−1) and its s-derivative, or with `regular` the same minus the
/// pole 1/(s−1), which stays finite at s = 1.
fn leading(s: Complex64, lw: f64, regular: bool) -> (Complex64, Complex64) {
    let sm1 = s - 1.0;
    let z = -sm1 * lw;
    if !regular {
        let lead = z.exp() / sm1;
        return (lead, -lead * (lw + sm1.inv()));
    }
    if z.norm() < 1e-2 {
        // (e^z − 1)/(s − 1) = −lw Σ z^k/(k+1)!, derivative lw² Σ (k+1) z^k/(k+2)!
        let (mut v, mut d) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        let mut zk = Complex64::new(1.0, 0.0);
        let mut fact = 1.0;
        for k in 0..8 {
            fact *= (k + 1) as f64;
            v += zk / fact;
            d += zk * ((k + 1) as f64 / (fact * (k + 2) as f64));
            zk *= z;
        }
        return (-lw * v, lw * lw * d);
    }
    let e = z.exp();
    let v = (e - 1.0) / sm1;
    let d = (-lw * e * sm1 - (e - 1.0)) / (sm1 * sm1);
    (v, d)
}

fn euler_maclaurin(s: Complex64, a: f64, n: usize, regular: bool, want_derivative: bool) -> (Complex64, Complex64) {
    let mut head = Complex64::new(0.0, 0.0);
    let mut dhead = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let l = (a + k as f64).ln();
        let t = (-s * l).exp();
        head += t;
        if want_derivative {
            dhead -= t * l;
        }
    }
    let w = a + n as f64;
    let lw = w.ln();
    let w_s = (-s * lw).exp();
    let (lead, dlead) = leading(s, lw, regular);
    let mut tail = lead + w_s * 0.5;
    let mut dtail = dlead - w_s * (0.5 * lw);
    let inv_w2 = 1.0 / (w * w);
    let mut pw = w_s / w;
    let mut p = s;
    let mut dp = Complex64::new(1.0, 0.0);
    for j in 0..12 {
        let c = BERNOULLI_EVEN[j] / EVEN_FACTORIALS[j];
        tail += p * pw * c;
        let m = 2.0 * j as f64 + 1.0;
        let f1 = s + m;
        let f2 = s + m + 1.0;
        if want_derivative {
            dtail += (dp - p * lw) * pw * c;
            dp = dp * f1 * f2 + p * (f1 + f2);
        }
        p *= f1 * f2;
        pw *= inv_w2;
    }
    (head + tail, dhead + dtail)
}

/// Euler–Maclaurin value with `n` direct terms. Valid well beyond Re s > 0.
pub(crate) fn hurwitz_value(s: Complex64, a: f64, n: usize) -> Complex64 {
    euler_maclaurin(s, a, n, false, false).0
}

/// Value and s-derivative together.
pub(crate) fn hurwitz_with_derivative(s: Complex64, a: f64, n: usize) -> (Complex64, Complex64) {
    euler_maclaurin(s, a, n, false, true)
}

/// ζ(s, a) − 1/(s − 1), finite at s = 1. Character sums with Σχ(a) = 0 are
/// unchanged by the subtraction.
pub(crate) fn hurwitz_regular(s: Complex64, a: f64, n: usize) -> Complex64 {
    euler_maclaurin(s, a, n, true, false).0
}

/// ζ(s, a) − 1/(s − 1) and its s-derivative ζ′(s, a) + 1/(s − 1)².
pub(crate) fn hurwitz_regular_with_derivative(s: Complex64, a: f64, n: usize) -> (Complex64, Complex64) {
    euler_maclaurin(s, a, n, true, true)
}
