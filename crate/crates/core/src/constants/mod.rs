//! Closed-form constants and bound formulas, generic over the scalar type.

mod optimize;
mod pipeline;

pub use optimize::{
    golden_section, leading_density_coefficient, minimize_scalar, optimize_d_parameters, window_ratio, DOptimum,
    ScalarMinimum,
};
pub use pipeline::{
    constants_report, density_bound_report, optimize_report, ConstantEntry, ConstantsReport, ConstantsRequest,
};

use crate::arith::{integrate, primes_up_to, upper_incomplete_gamma_real, Quadrature};
use crate::arith::primes::prime_zeta_over;
use crate::error::{require, Error, Result};
use crate::real::Real;

/// The headline constant bounding |E[S(t, χ)]|.
pub const C0: f64 = 982.0;
/// Headline parameter choices.
pub const HEADLINE_ETA: f64 = 1.156;
pub const HEADLINE_DELTA: f64 = 0.16;
pub const HEADLINE_EPS: f64 = 0.25;
pub const HEADLINE_KAPPA: f64 = 0.1249;
/// Window ratio 2a/τ used in the zero-density coefficient.
pub const HEADLINE_WINDOW_RATIO: f64 = 0.82579;

/// A(η), B₁(η), B₂(η).
#[derive(Debug, Clone, PartialEq)]
pub struct EtaConstants<R> {
    pub eta: R,
    pub a: R,
    pub b1: R,
    pub b2: R,
}

pub fn eta_constants<R: Real>(eta: &R) -> Result<EtaConstants<R>> {
    require(eta.to_f64() >= 1.0, "η ≥ 1")?;
    let one = eta.lit(1.0);
    let five = eta.lit(5.0);
    let six = eta.lit(6.0);
    let pi = eta.pi();
    let e_eta = eta.exp();
    let e_neg = (-eta.clone()).exp();
    let sq = (one.clone() + e_neg.clone()) * (one.clone() + e_neg.clone());
    let eta2 = eta.clone() * eta.clone();
    let eta3 = eta2.clone() * eta.clone();
    let den_a = six.clone() * eta2 - five.clone() * sq.clone() * e_neg;
    let den_b = six.clone() * eta3.clone() * e_eta.clone() - five.clone() * sq.clone() * eta.clone();
    require(den_a.to_f64() > 0.0 && den_b.to_f64() > 0.0, "6η²e^η > 5(1+e^{−η})² and 6η² > 5(1+e^{−η})²e^{−η}")?;
    let a = five.clone() * sq.clone() / den_a;
    let b1 = (five.clone() * sq.clone() + (five.clone() * pi.clone() + one.clone()) * six * eta3.clone() * e_eta.clone())
        / den_b.clone();
    let b2 = (five * sq * (one + eta.clone()) + eta.lit(30.0) * pi * eta3 * e_eta) / (eta.lit(2.0) * den_b);
    Ok(EtaConstants { eta: eta.clone(), a, b1, b2 })
}

/// e^{1/4}(e−1)(−3/(2(e−1)) + 4e/(e−1)²) = 6.199…
pub fn mollifier_mean_constant<R: Real>(like: &R) -> R {
    let e = like.lit(1.0).exp();
    let em1 = e.clone() - like.lit(1.0);
    let bracket = -like.lit(3.0) / (like.lit(2.0) * em1.clone()) + like.lit(4.0) * e / (em1.clone() * em1.clone());
    like.lit(0.25).exp() * em1 * bracket
}

/// 4.79 + 4.12/(4e^{3η}/δ − 1.73).
fn density_prefactor<R: Real>(eta: &R, delta: &R) -> R {
    eta.dec("4.79") + eta.dec("4.12") / (eta.lit(4.0) * (eta.lit(3.0) * eta.clone()).exp() / delta.clone() - eta.dec("1.73"))
}

/// C(η, δ, r, v), the moment constant for (σ_{t,χ} − 1/2)^v x^{r(σ_{t,χ}−1/2)}.
pub fn big_c<R: Real>(eta: &R, delta: &R, r: &R, v: &R) -> Result<R> {
    let (ef, df, rf, vf) = (eta.to_f64(), delta.to_f64(), r.to_f64(), v.to_f64());
    require(ef >= 1.0, "η ≥ 1")?;
    require(rf >= 0.0 && vf >= 0.0, "r ≥ 0 and v ≥ 0")?;
    require(df > 0.0, "δ > 0")?;
    let two = eta.lit(2.0);
    let bound = two.clone() / (two.clone() * r.clone() + eta.lit(3.0));
    require(*delta < bound, "δ < 2/(2r+3)")?;
    let w = two.clone() / delta.clone() - two.clone() * r.clone() - eta.lit(3.0);
    let u = eta.clone() * w.clone();
    let pow = |b: &R, e: &R| if e.to_f64() == 0.0 { b.lit(1.0) } else { b.powf(e) };
    let head = pow(&(two.clone() * eta.clone()), v) * (two.clone() * eta.clone() * r.clone()).exp();
    let t1 = pow(eta, v) * (-(u.clone())).exp() / delta.clone();
    let t2 = if vf == 0.0 {
        eta.lit(0.0)
    } else {
        v.clone() * upper_incomplete_gamma_real(v, &u)? / (delta.clone() * pow(&w, v))
    };
    let v1 = v.clone() + eta.lit(1.0);
    let t3 = if rf == 0.0 {
        eta.lit(0.0)
    } else {
        two.clone() * r.clone() * upper_incomplete_gamma_real(&v1, &u)? / (delta.clone() * pow(&w, &v1))
    };
    Ok(head + pow(&two, &v1) * density_prefactor(eta, delta) * (t1 + t2 + t3))
}

/// Second factor of h(k): the bound on the tapered integral with damping Δ.
pub fn h_second_factor<R: Real>(delta: &R) -> R {
    let d = delta.clone();
    if d.to_f64() < 0.5 {
        // Σ_{n≥4} c_n Δ^{n−4} e^{−6Δ}/8 with the numerator's Taylor coefficients.
        let six = d.lit(6.0);
        let mut sum = d.lit(0.0);
        let mut dpow = d.lit(1.0);
        // 6^{n-2}/(n-2)!, 6^{n-1}/(n-1)!, 6^n/n! at n = 4
        let mut a2 = d.lit(18.0);
        let mut a1 = d.lit(36.0);
        let mut a0 = d.lit(54.0);
        for n in 4..200u32 {
            let c = d.lit(2.0) * a2.clone() + d.lit(4.0) * a1.clone() + d.lit(3.0) * a0.clone();
            let term = c * dpow.clone();
            sum = sum + term.clone();
            if term.abs().to_f64() < d.epsilon() * 1e-3 * sum.abs().to_f64() {
                break;
            }
            dpow = dpow * d.clone();
            a2 = a2 * six.clone() / d.lit((n - 1) as f64);
            a1 = a1 * six.clone() / d.lit(n as f64);
            a0 = a0 * six.clone() / d.lit((n + 1) as f64);
        }
        return sum * (-(d.lit(6.0) * d.clone())).exp() / d.lit(8.0);
    }
    let d2 = d.clone() * d.clone();
    let d3 = d2.clone() * d.clone();
    let e6 = (d.lit(6.0) * d.clone()).exp();
    let num = (d.lit(2.0) * d2.clone() + d.lit(4.0) * d.clone() + d.lit(3.0)) * e6.clone()
        - d.lit(192.0) * d3
        - d.lit(80.0) * d2.clone()
        - d.lit(22.0) * d.clone()
        - d.lit(3.0);
    num / (d.lit(8.0) * d2.clone() * d2 * e6)
}

/// The bracket minimized in h(k), raised to 1/(2k).
pub fn h_objective<R: Real>(delta: &R, k: u32) -> R {
    let two_k = 2 * k as i32;
    let f = delta.dec("8.68").powi(two_k);
    let g = h_second_factor(delta).powi(two_k);
    let damp = (-delta.clone()).exp();
    let inner = (delta.lit(1.0) - damp.clone()) * f + damp * g;
    inner.powf(&delta.lit(1.0 / two_k as f64))
}

/// h(k) and its minimizing Δ over [1e−6, 50].
pub fn h_of_k<R: Real>(k: u32, like: &R) -> Result<(R, R)> {
    require((1..=8).contains(&k), "1 ≤ k ≤ 8")?;
    let lo = like.dec("0.000001");
    let hi = like.lit(50.0);
    // Coarse bracket first, then golden section at working precision.
    let n = 200;
    let mut best = 0usize;
    let mut best_v = f64::INFINITY;
    let step = (hi.clone() - lo.clone()) / like.lit(n as f64);
    for i in 0..=n {
        let x = lo.clone() + step.clone() * like.lit(i as f64);
        let v = h_objective(&x, k).to_f64();
        if v < best_v {
            best_v = v;
            best = i;
        }
    }
    let a = lo.clone() + step.clone() * like.lit(best.saturating_sub(1) as f64);
    let b = lo.clone() + step * like.lit((best + 1).min(n) as f64);
    let (x, v) = golden_section(|d: &R| h_objective(d, k), a, b);
    Ok((v, x))
}

/// ∫₀³ w(u)² u (1+u)² du for the Λ_x taper w, i.e. 29136/3360 < 8.68.
pub fn f_x_integral_constant<R: Real>(like: &R) -> R {
    like.lit(29136.0) / like.lit(3360.0)
}

/// The same constant by quadrature of the three branches.
pub fn f_x_integral_quadrature() -> f64 {
    let taper = |u: f64| {
        if u <= 1.0 {
            1.0
        } else if u <= 2.0 {
            ((3.0 - u).powi(2) - 2.0 * (2.0 - u).powi(2)) / 2.0
        } else {
            (3.0 - u).powi(2) / 2.0
        }
    };
    let q = Quadrature::new(1e-14, 1e-14);
    [(0.0, 1.0), (1.0, 2.0), (2.0, 3.0)]
        .iter()
        .map(|&(a, b)| integrate(|u: f64| taper(u).powi(2) * u * (1.0 + u).powi(2), a, b, &q).value)
        .sum()
}

/// Σ_{ℓ=3}^{500} ζ_P(ℓ/2)/ℓ + 1/499 + 1/500, each ζ_P taken at its rigorous upper bound.
pub fn prime_zeta_tail_constant() -> PrimeZetaTail {
    let limit = 10_000_000;
    let primes = primes_up_to(limit);
    let mut partial = 0.0;
    let mut first = 0.0;
    for ell in 3..=500u32 {
        let z = prime_zeta_over(ell as f64 / 2.0, &primes, limit).upper / ell as f64;
        if ell == 3 {
            first = z;
        }
        partial += z;
    }
    PrimeZetaTail { partial, total: partial + 1.0 / 499.0 + 1.0 / 500.0, leading_term: first }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimeZetaTail {
    pub partial: f64,
    pub total: f64,
    /// ζ_P(3/2)/3.
    pub leading_term: f64,
}

/// log 3 − (3/4) log 2.
pub fn a6_constant<R: Real>(like: &R) -> R {
    like.lit(3.0).ln() - like.lit(0.75) * like.lit(2.0).ln()
}

/// Mertens-sum counterpart of the a6 constant at x:
/// Σ_{x≤p<x²} 1/(4p) + Σ_{x²≤p<x³} 1/p.
pub fn a6_mertens_check(x: u64) -> f64 {
    use crate::arith::prime_sum_between;
    let x2 = x * x;
    let x3 = x2 * x;
    0.25 * prime_sum_between(x, x2, |p| 1.0 / p) + prime_sum_between(x2, x3, |p| 1.0 / p)
}

/// Parameters of the D pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct DParams<R> {
    pub eta: R,
    pub delta: R,
    pub kappa: R,
    pub k: u32,
    pub eps: R,
}

impl DParams<f64> {
    pub fn headline() -> Self {
        DParams { eta: HEADLINE_ETA, delta: HEADLINE_DELTA, kappa: HEADLINE_KAPPA, k: 1, eps: HEADLINE_EPS }
    }
}

impl<R: Real> DParams<R> {
    pub fn validate(&self) -> Result<()> {
        let eps = self.eps.to_f64();
        require(self.k >= 1, "k ≥ 1")?;
        require(self.k <= 8, "k ≤ 8")?;
        require(self.eta.to_f64() >= 1.0, "η ≥ 1")?;
        require(eps > 0.0 && eps <= 0.25, "0 < ε ≤ 1/4")?;
        require(self.kappa.to_f64() > 0.0, "0 < κ")?;
        require(self.kappa < self.eps.clone() / self.eps.lit(2.0), "κ < ε/2")?;
        require(self.delta.to_f64() > 0.0, "0 < δ")?;
        let bound = self.delta.lit(2.0) / self.delta.lit((8 * self.k + 3) as f64);
        require(self.delta < bound, "δ < 2/(8k+3)")?;
        Ok(())
    }
}

/// The bracket of D before raising to the 2k-th power and dividing by π^{2k}.
pub fn d_bracket<R: Real>(p: &DParams<R>, h: &R) -> Result<R> {
    p.validate()?;
    let k = p.k as f64;
    let et = eta_constants(&p.eta)?;
    let like = &p.eta;
    let c_hi = big_c(&p.eta, &p.delta, &like.lit(4.0 * k), &like.lit(4.0 * k))?;
    let c_lo = big_c(&p.eta, &p.delta, &like.lit(0.0), &like.lit(2.0 * k))?;
    let c_hi_root = c_hi.powf(&like.lit(1.0 / (4.0 * k)));
    let c_lo_root = c_lo.powf(&like.lit(1.0 / (2.0 * k)));
    let one = like.lit(1.0);
    let first = (et.b1.clone() + (-(like.lit(2.0) * p.eta.clone())).exp()) * c_hi_root * h.sqrt();
    let second = like.lit(1.5) * (one + et.b1) * c_lo_root.clone();
    let third = et.b2 * c_lo_root * (like.lit(1.25) - p.eps.clone()) / (p.delta.clone() * p.kappa.clone());
    let literals = like.dec("0.12").sqrt() + like.dec("0.53") + like.dec("0.58").sqrt();
    Ok(first + second + third + literals)
}

/// D(η, δ, κ, k, ε).
pub fn big_d<R: Real>(p: &DParams<R>) -> Result<R> {
    let (h, _) = h_of_k(p.k, &p.eta)?;
    big_d_with_h(p, &h)
}

/// D with h(k) supplied, for callers that evaluate many parameter points.
pub fn big_d_with_h<R: Real>(p: &DParams<R>, h: &R) -> Result<R> {
    let b = d_bracket(p, h)?;
    let two_k = 2 * p.k as i32;
    Ok(b.powi(two_k) / p.eta.pi().powi(two_k))
}

/// (2/π) q^{3/88−1} + √D(1.156, 0.16, κ, 1, 1/4).
pub fn c0_pipeline<R: Real>(kappa: &R, q: &R) -> Result<R> {
    require(kappa.to_f64() > 0.0 && kappa.to_f64() < 0.125, "0 < κ < 1/8")?;
    require(q.to_f64() >= 3.0, "q ≥ 3")?;
    let p = DParams {
        eta: kappa.dec("1.156"),
        delta: kappa.dec("0.16"),
        kappa: kappa.clone(),
        k: 1,
        eps: kappa.lit(0.25),
    };
    let d = big_d(&p)?;
    let q_term = kappa.lit(2.0) / kappa.pi() * q.powf(&(kappa.lit(3.0) / kappa.lit(88.0) - kappa.lit(1.0)));
    Ok(q_term + d.sqrt())
}

/// 2κ(4.79 + 4.12/(4e^{3η}/δ − 1.73)).
pub fn f_eta_kappa_delta<R: Real>(eta: &R, kappa: &R, delta: &R) -> R {
    kappa.lit(2.0) * kappa.clone() * density_prefactor(eta, delta)
}

/// Full and simplified zero-density coefficients at window length τ = (t₂−t₁) log q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityCoefficients {
    pub full: f64,
    pub simplified: f64,
    pub a: f64,
    pub b: f64,
}

pub fn zero_density_coefficients(kappa: f64, tau: f64) -> Result<DensityCoefficients> {
    use std::f64::consts::PI;
    require(kappa > 0.0 && kappa <= 0.125, "0 < κ ≤ 1/8")?;
    require(tau >= 1.73 / kappa, "τ ≥ 1.73/κ")?;
    require(1.8258 * tau > PI / kappa, "1.8258τ > π/κ")?;
    let b = 1.0 / (2.0 * kappa);
    let a = HEADLINE_WINDOW_RATIO * tau / 2.0;
    let w = tau + 2.0 * a;
    let sine = (PI / 2.0 * 2.0 * a / w).sin();
    let inner = w / (PI * tau) + 1.0 / (2.0 * (2.0 - PI / (kappa * w)) * kappa * tau);
    let full = 6.20 * (2.0 * b * kappa).exp() / (2.0 * PI * b * sine) * inner;
    let simplified = 4.79 * kappa + 4.12 / (2.0 * tau - 1.73 / kappa);
    Ok(DensityCoefficients { full, simplified, a, b })
}

/// Coefficient of the second term of the full density bound once 2bκ = 1 and
/// 2a/τ is fixed: 6.20e/(2π sin(πu/(2(1+u)))).
pub fn second_density_coefficient(u: f64) -> f64 {
    use std::f64::consts::{E, PI};
    6.20 * E / (2.0 * PI * (PI * u / (2.0 * (1.0 + u))).sin())
}

/// ∫₀^{3β/50} sin²(2πy)/y dy, panel by panel.
pub fn sine_square_integral(beta: f64) -> f64 {
    let top = 3.0 * beta / 50.0;
    if top <= 0.0 {
        return 0.0;
    }
    let q = Quadrature::new(1e-15, 1e-14);
    let f = |y: f64| if y == 0.0 { 0.0 } else { (2.0 * std::f64::consts::PI * y).sin().powi(2) / y };
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut a = 0.0;
    while a < top {
        let b = (a + 1.0).min(top);
        let v = integrate(f, a, b, &q).value - comp;
        let t = sum + v;
        comp = (t - sum) - v;
        sum = t;
        a = b;
    }
    sum
}

/// (2C₀ + (√2/π)·√(∫₀^{3β/50} sin²(2πy)/y dy))².
pub fn mean_square_bound(beta: f64) -> Result<f64> {
    require(beta >= 0.0, "β ≥ 0")?;
    let root = (2.0f64).sqrt() / std::f64::consts::PI * sine_square_integral(beta).sqrt();
    Ok((2.0 * C0 + root).powi(2))
}

/// (2β − 2C₀)² / (4β² − 8C₀β + mean_square_bound(β)).
pub fn proportion_lower_bound(beta: f64) -> Result<f64> {
    if !(beta > C0) {
        return Err(Error::Constraint(format!("requires β > C₀ = {C0}, got {beta}")));
    }
    let num = (2.0 * beta - 2.0 * C0).powi(2);
    let den = 4.0 * beta * beta - 8.0 * C0 * beta + mean_square_bound(beta)?;
    Ok(num / den)
}
