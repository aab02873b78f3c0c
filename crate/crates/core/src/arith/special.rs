use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::real::Real;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// B_2, B_4, ..., B_24.
pub(crate) const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

const SHIFT_RADIUS: f64 = 15.0;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Principal branch of log Γ(z) for Re z > 0, continuous in z.
pub fn ln_gamma_complex(z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0) {
        return Err(Error::Domain(format!("log-gamma needs Re z > 0, got {z}")));
    }
    Ok(ln_gamma_right(z))
}

pub(crate) fn ln_gamma_right(mut z: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    while z.norm() < SHIFT_RADIUS {
        shift += z.ln();
        z += 1.0;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut corr = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for (j, b) in BERNOULLI_EVEN.iter().take(10).enumerate() {
        let m = 2.0 * (j as f64 + 1.0);
        corr += pow * (b / (m * (m - 1.0)));
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + corr - shift
}

/// log Γ(x) for real x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("log-gamma needs x > 0, got {x}")));
    }
    Ok(ln_gamma_right(Complex64::new(x, 0.0)).re)
}

/// Γ(x) for real x > 0.
pub fn gamma(x: f64) -> Result<f64> {
    Ok(ln_gamma(x)?.exp())
}

/// ψ(z) = Γ'/Γ(z) for Re z > 0.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0) {
        return Err(Error::Domain(format!("digamma needs Re z > 0, got {z}")));
    }
    Ok(digamma_right(z))
}

pub(crate) fn digamma_right(mut z: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    while z.norm() < SHIFT_RADIUS {
        shift += z.inv();
        z += 1.0;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut corr = Complex64::new(0.0, 0.0);
    let mut pow = inv2;
    for (j, b) in BERNOULLI_EVEN.iter().take(10).enumerate() {
        corr += pow * (b / (2.0 * (j as f64 + 1.0)));
        pow *= inv2;
    }
    z.ln() - inv * 0.5 - corr - shift
}

/// ζ(k) for integer k ≥ 2.
fn zeta_int(k: u32) -> f64 {
    let s = k as f64;
    let n = 10.0f64;
    let head: f64 = (1..10).map(|m| (m as f64).powf(-s)).sum();
    // Euler–Maclaurin tail from n.
    let mut tail = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    let mut rising = s;
    let mut fact = 2.0;
    for (j, b) in BERNOULLI_EVEN.iter().take(8).enumerate() {
        let m = 2 * j + 1;
        tail += b / fact * rising * n.powf(-s - m as f64);
        rising *= (s + m as f64) * (s + m as f64 + 1.0);
        fact *= ((m + 2) * (m + 3)) as f64;
    }
    head + tail
}

/// (Γ(1+v) − 1)/v for |v| < 1/2, with the v → 0 limit −γ.
fn gamma1pm1_over_v(v: f64) -> f64 {
    if v == 0.0 {
        return -EULER_GAMMA;
    }
    let mut lg = -EULER_GAMMA * v;
    let mut pow = -v;
    for k in 2..80u32 {
        pow *= -v;
        let term = zeta_int(k) / k as f64 * pow;
        lg += term;
        if term.abs() < 1e-18 * lg.abs().max(1e-300) {
            break;
        }
    }
    lg.exp_m1() / v
}

/// Γ(v, u) = ∫_u^∞ z^{v−1} e^{−z} dz for v ≥ 0, u ≥ 0.
pub fn upper_incomplete_gamma(v: f64, u: f64) -> Result<f64> {
    if !(v >= 0.0) || !(u >= 0.0) {
        return Err(Error::Domain(format!("incomplete gamma needs v, u ≥ 0, got ({v}, {u})")));
    }
    if v == 0.0 && u == 0.0 {
        return Err(Error::Divergence("Γ(0, 0) diverges".into()));
    }
    if u == 0.0 {
        return gamma(v);
    }
    if u >= v + 1.0 {
        return Ok(continued_fraction(v, u));
    }
    if v < 0.5 {
        return Ok(small_v_series(v, u));
    }
    let lower = lower_series(v, u);
    Ok(gamma(v)? - lower)
}

fn continued_fraction(v: f64, u: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = u + 1.0 - v;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -(i as f64) * (i as f64 - v);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-u + v * u.ln()).exp() * h
}

fn lower_series(v: f64, u: f64) -> f64 {
    let mut ap = v;
    let mut term = 1.0 / v;
    let mut sum = term;
    for _ in 0..10_000 {
        ap += 1.0;
        term *= u / ap;
        sum += term;
        if term.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    sum * (-u + v * u.ln()).exp()
}

fn small_v_series(v: f64, u: f64) -> f64 {
    let lnu = u.ln();
    let head = gamma1pm1_over_v(v) - if v == 0.0 { lnu } else { (v * lnu).exp_m1() / v };
    let mut term = 1.0;
    let mut sum = 0.0;
    for n in 1..200 {
        term *= -u / n as f64;
        let add = term / (v + n as f64);
        sum += add;
        if add.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    head - (v * lnu).exp() * sum
}

/// Γ(v, u) in the generic scalar type.
///
/// Integral v ≥ 1 uses the finite closed form at full working precision;
/// other orders fall back to the double-precision kernel, which is refused
/// when the scalar carries more precision than a double.
pub fn upper_incomplete_gamma_real<R: Real>(v: &R, u: &R) -> Result<R> {
    let vf = v.to_f64();
    if vf >= 1.0 && vf.fract() == 0.0 && vf <= 170.0 {
        let n = vf as u32;
        let mut term = u.lit(1.0);
        let mut sum = u.lit(1.0);
        for j in 1..n {
            term = term * u.clone() / u.lit(j as f64);
            sum = sum + term.clone();
        }
        let fact = (1..n).fold(u.lit(1.0), |acc, j| acc * u.lit(j as f64));
        return Ok(fact * (-u.clone()).exp() * sum);
    }
    if u.epsilon() < f64::EPSILON {
        return Err(Error::Unsupported(format!(
            "extended-precision incomplete gamma needs a positive integral order, got {vf}"
        )));
    }
    Ok(u.lit(upper_incomplete_gamma(vf, u.to_f64())?))
}
