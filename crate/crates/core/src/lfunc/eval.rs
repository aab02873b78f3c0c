use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::arith::hurwitz::{
    hurwitz_regular, hurwitz_regular_with_derivative, hurwitz_value, hurwitz_with_derivative, shift_for,
};
use crate::arith::special::ln_gamma_right;
use crate::characters::{gauss_sum, Character, CharacterFamily, GaussData};
use crate::error::{Error, Result};

/// Largest |Im s| accepted by the evaluators.
pub const MAX_HEIGHT: f64 = 1e3;
/// |L| below this multiple of the rounding scale is treated as a zero.
pub const ZERO_GUARD: f64 = 1e-13;

const MIN_SIGMA: f64 = -1.0;
const MAX_SIGMA: f64 = 60.0;

fn check_point(s: Complex64) -> Result<()> {
    if !(s.re >= MIN_SIGMA && s.re <= MAX_SIGMA) || !(s.im.abs() <= MAX_HEIGHT) {
        return Err(Error::Domain(format!(
            "L-function evaluation needs {MIN_SIGMA} ≤ Re s ≤ {MAX_SIGMA} and |Im s| ≤ {MAX_HEIGHT}, got {s}"
        )));
    }
    Ok(())
}

fn principal_pole(s: Complex64) -> Result<()> {
    if (s - 1.0).norm() < 1e-14 {
        return Err(Error::Pole("s = 1 for the principal character".into()));
    }
    Ok(())
}

fn q_pow(q: f64, s: Complex64) -> Complex64 {
    (-s * q.ln()).exp()
}

/// L(s, χ) = q^{−s} Σ_a χ(a) ζ(s, a/q).
pub fn l_value(s: Complex64, character: &Character<'_>) -> Result<Complex64> {
    check_point(s)?;
    let q = character.modulus() as f64;
    let n = shift_for(s);
    if character.is_principal() {
        principal_pole(s)?;
        return Ok((1.0 - q_pow(q, s)) * hurwitz_value(s, 1.0, n));
    }
    let sum: Complex64 = (1..character.modulus())
        .map(|a| character.value(a) * hurwitz_regular(s, a as f64 / q, n))
        .sum();
    Ok(q_pow(q, s) * sum)
}

/// L(s, χ) together with L′(s, χ).
pub fn l_value_with_derivative(s: Complex64, character: &Character<'_>) -> Result<(Complex64, Complex64)> {
    check_point(s)?;
    let q = character.modulus() as f64;
    let lq = q.ln();
    let n = shift_for(s);
    if character.is_principal() {
        principal_pole(s)?;
        let (z, dz) = hurwitz_with_derivative(s, 1.0, n);
        let qs = q_pow(q, s);
        return Ok(((1.0 - qs) * z, (1.0 - qs) * dz + qs * lq * z));
    }
    let (v, d) = (1..character.modulus())
        .map(|a| {
            let (z, dz) = hurwitz_regular_with_derivative(s, a as f64 / q, n);
            let c = character.value(a);
            (c * z, c * dz)
        })
        .fold((Complex64::default(), Complex64::default()), |acc, x| (acc.0 + x.0, acc.1 + x.1));
    let qs = q_pow(q, s);
    Ok((qs * v, qs * (d - lq * v)))
}

/// Size of the partial sums that cancel down to L, so that rounding is
/// about 1e−16 of it.
fn rounding_scale(s: Complex64, q: u64) -> f64 {
    let w = shift_for(s) as f64 + 1.0;
    let qf = q as f64;
    (qf.powf(-s.re) * (qf - 1.0) * (1.0 + w.powf(1.0 - s.re))).max(1.0)
}

/// L′/L(s, χ), refusing points where |L| < 1e−13 relative to the rounding scale.
pub fn log_deriv(s: Complex64, character: &Character<'_>) -> Result<Complex64> {
    let (l, d) = l_value_with_derivative(s, character)?;
    if l.norm() < ZERO_GUARD * rounding_scale(s, character.modulus()) {
        return Err(Error::NearSingular { modulus: l.norm() });
    }
    Ok(d / l)
}

/// Evaluates every character of a family at one point through a single
/// length-(q−1) transform over discrete-log order.
pub struct FamilyEvaluator<'a> {
    family: &'a CharacterFamily,
    fft: Arc<dyn Fft<f64>>,
    shifts: Vec<f64>,
}

impl<'a> FamilyEvaluator<'a> {
    pub fn new(family: &'a CharacterFamily) -> Self {
        let n = family.len();
        let fft = FftPlanner::new().plan_fft_inverse(n);
        let q = family.modulus() as f64;
        let shifts = (0..n).map(|m| family.residue_of_log(m) as f64 / q).collect();
        FamilyEvaluator { family, fft, shifts }
    }

    pub fn family(&self) -> &'a CharacterFamily {
        self.family
    }

    fn transform(&self, mut buf: Vec<Complex64>) -> Vec<Complex64> {
        self.fft.process(&mut buf);
        buf
    }

    /// Restores the pole part removed from every Hurwitz term in the principal
    /// slot; at s = 1 that slot is infinite.
    fn principal_slot(&self, s: Complex64, v: &mut [Complex64], d: Option<&mut [Complex64]>) {
        let sm1 = s - 1.0;
        let count = self.shifts.len() as f64;
        if sm1.norm() == 0.0 {
            v[0] = Complex64::new(f64::INFINITY, 0.0);
            if let Some(d) = d {
                d[0] = Complex64::new(f64::INFINITY, 0.0);
            }
            return;
        }
        v[0] += count / sm1;
        if let Some(d) = d {
            d[0] -= count / (sm1 * sm1);
        }
    }

    /// L(s, χ_j) for all j; entry 0 is the principal character, infinite at s = 1.
    pub fn values(&self, s: Complex64) -> Result<Vec<Complex64>> {
        check_point(s)?;
        let n = shift_for(s);
        let h: Vec<Complex64> = self.shifts.par_iter().map(|&a| hurwitz_regular(s, a, n)).collect();
        let qs = q_pow(self.family.modulus() as f64, s);
        let mut v = self.transform(h);
        self.principal_slot(s, &mut v, None);
        Ok(v.into_iter().map(|x| x * qs).collect())
    }

    /// (L, L′) for all characters.
    pub fn values_with_derivative(&self, s: Complex64) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        check_point(s)?;
        let n = shift_for(s);
        let (h, dh): (Vec<Complex64>, Vec<Complex64>) =
            self.shifts.par_iter().map(|&a| hurwitz_regular_with_derivative(s, a, n)).unzip();
        let q = self.family.modulus() as f64;
        let qs = q_pow(q, s);
        let mut v = self.transform(h);
        let mut d = self.transform(dh);
        self.principal_slot(s, &mut v, Some(&mut d));
        let lq = q.ln();
        let l: Vec<Complex64> = v.iter().map(|x| x * qs).collect();
        let dl = v.iter().zip(&d).map(|(x, y)| qs * (y - lq * x)).collect();
        Ok((l, dl))
    }
}

/// Gauss data for every character, principal slot left empty.
pub fn family_gauss_data(family: &CharacterFamily) -> Vec<Option<GaussData>> {
    family.characters().map(|c| gauss_sum(&c).ok()).collect()
}

/// Λ(s, χ) stored as exp(lnpre)·l so its argument can be tracked continuously.
///
/// Points left of the critical line are represented through the functional
/// equation, with `left` set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Completed {
    pub lnpre: Complex64,
    pub l: Complex64,
    pub left: bool,
}

impl Completed {
    pub fn value(&self) -> Complex64 {
        self.lnpre.exp() * self.l
    }
}

/// log of (q/π)^{(s+𝔞)/2} Γ((s+𝔞)/2), for Re s > −𝔞.
pub fn ln_prefactor(s: Complex64, q: u64, parity: u8) -> Complex64 {
    let z = (s + parity as f64) / 2.0;
    z * (q as f64 / PI).ln() + ln_gamma_right(z)
}

/// Places a right-half value (at 1 − s̄ when `left`) into the completed form.
pub fn assemble(s_right_l: Complex64, s_right: Complex64, q: u64, parity: u8, epsilon: Complex64, left: bool) -> Completed {
    let lnpre = ln_prefactor(s_right, q, parity);
    if left {
        Completed { lnpre: Complex64::new(0.0, epsilon.arg()) + lnpre.conj(), l: s_right_l.conj(), left }
    } else {
        Completed { lnpre, l: s_right_l, left }
    }
}

/// The point where L is actually evaluated for a completed value at s.
pub fn evaluation_point(s: Complex64) -> (Complex64, bool) {
    if s.re < 0.5 {
        (Complex64::new(1.0 - s.re, s.im), true)
    } else {
        (s, false)
    }
}

/// Λ(s, χ) for a non-principal character.
pub fn completed_value(s: Complex64, character: &Character<'_>, gauss: &GaussData) -> Result<Completed> {
    let (p, left) = evaluation_point(s);
    let l = l_value(p, character)?;
    Ok(assemble(l, p, character.modulus(), character.parity(), gauss.epsilon, left))
}

/// Phase of the rotation e^{iθ(t)} that makes e^{iθ}L(1/2+it) real.
pub fn rotation_phase(t: f64, q: u64, parity: u8, epsilon: Complex64) -> f64 {
    ln_prefactor(Complex64::new(0.5, t), q, parity).im - 0.5 * epsilon.arg()
}

/// Z(t) = e^{iθ(t)} L(1/2 + it), real up to rounding.
pub fn rotated_value(t: f64, character: &Character<'_>, gauss: &GaussData) -> Result<Complex64> {
    let l = l_value(Complex64::new(0.5, t), character)?;
    let theta = rotation_phase(t, character.modulus(), character.parity(), gauss.epsilon);
    Ok(Complex64::from_polar(1.0, theta) * l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::for_each_prime_in;
    use crate::characters::build_family;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn family_values_at_one() {
        let f = build_family(5).unwrap();
        let ev = FamilyEvaluator::new(&f);
        let one = Complex64::new(1.0, 0.0);
        let v = ev.values(one).unwrap();
        assert!(v[0].re.is_infinite());
        // L(1, (·/5)) = 2 log φ/√5.
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((v[2].re - 2.0 * golden.ln() / 5f64.sqrt()).abs() < 1e-13, "{}", v[2]);
        for ch in f.non_principal() {
            let single = l_value(one, &ch).unwrap();
            assert!((v[ch.index()] - single).norm() < 1e-13);
        }
        let near = ev.values(Complex64::new(1.0 + 1e-3, 0.0)).unwrap();
        let exact = (1.0 - 5f64.powf(-1.001)) * 1000.577_288_476_011_6;
        assert!((near[0].re - exact).abs() < 1e-8 * exact, "{}", near[0]);
    }

    #[test]
    fn conjugation_symmetry() {
        let f = build_family(7).unwrap();
        let s = c(0.7, 3.0);
        for ch in f.non_principal() {
            let a = l_value(s, &ch).unwrap();
            let b = l_value(s.conj(), &ch.conjugate()).unwrap().conj();
            assert!((a - b).norm() < 1e-11);
            let a = log_deriv(s, &ch).unwrap();
            let b = log_deriv(s.conj(), &ch.conjugate()).unwrap().conj();
            assert!((a - b).norm() < 1e-11);
        }
    }

    #[test]
    fn l_two_mod_three() {
        let f = build_family(3).unwrap();
        let ch = f.character(1).unwrap();
        let mut sum = 0.0;
        for n in 1..10_000_000u64 {
            let v = match n % 3 {
                1 => 1.0,
                2 => -1.0,
                _ => 0.0,
            };
            sum += v / (n as f64 * n as f64);
        }
        // Alternating blocks: the tail after a full period is below 1/N².
        let l = l_value(c(2.0, 0.0), &ch).unwrap();
        assert!((l.re - sum).abs() < 1e-13, "{l} {sum}");
        assert!(l.im.abs() < 1e-15);
    }

    #[test]
    fn euler_product() {
        let f = build_family(11).unwrap();
        for ch in f.non_principal() {
            let s = c(2.0, 1.5);
            let mut prod = Complex64::new(1.0, 0.0);
            for_each_prime_in(2, 100_000, |p| {
                prod /= 1.0 - ch.value(p) * (-s * (p as f64).ln()).exp();
            });
            let l = l_value(s, &ch).unwrap();
            assert!((l - prod).norm() < 1e-8, "{} {}", ch.index(), (l - prod).norm());
        }
    }

    #[test]
    fn log_deriv_dirichlet_series() {
        let f = build_family(5).unwrap();
        let tables = crate::arith::sieve(1_000_000).unwrap();
        for ch in f.non_principal() {
            let s = c(3.0, 0.0);
            let series: Complex64 = (2..=1_000_000usize)
                .filter_map(|n| {
                    let lam = tables.von_mangoldt(n);
                    (lam != 0.0).then(|| -ch.value(n as u64) * lam * (-s * (n as f64).ln()).exp())
                })
                .sum();
            assert!((log_deriv(s, &ch).unwrap() - series).norm() < 1e-8);
        }
    }

    #[test]
    fn log_deriv_finite_difference() {
        let f = build_family(7).unwrap();
        let h = 1e-6;
        let s = c(2.0, 1.0);
        for ch in f.characters() {
            let lp = l_value(s + h, &ch).unwrap().ln();
            let lm = l_value(s - h, &ch).unwrap().ln();
            let fd = (lp - lm) / (2.0 * h);
            assert!((fd - log_deriv(s, &ch).unwrap()).norm() < 1e-8);
        }
    }

    #[test]
    fn zero_guard() {
        let f = build_family(3).unwrap();
        let ch = f.character(1).unwrap();
        // Odd character mod 3 has a trivial zero at s = −1.
        match log_deriv(c(-1.0, 0.0), &ch) {
            Err(Error::NearSingular { modulus }) => assert!(modulus < 1e-9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn principal_character() {
        let f = build_family(5).unwrap();
        let ch = f.character(0).unwrap();
        assert!(matches!(l_value(c(1.0, 0.0), &ch), Err(Error::Pole(_))));
        let l = l_value(c(2.0, 0.0), &ch).unwrap();
        assert!((l.re - (1.0 - 1.0 / 25.0) * PI * PI / 6.0).abs() < 1e-14);
    }

    #[test]
    fn family_matches_single() {
        let f = build_family(13).unwrap();
        let ev = FamilyEvaluator::new(&f);
        for s in [c(0.5, 7.0), c(2.0, -3.0), c(-0.5, 20.0), c(8.0, 1.0)] {
            let (all, dall) = ev.values_with_derivative(s).unwrap();
            let plain = ev.values(s).unwrap();
            for ch in f.characters() {
                let (l, d) = l_value_with_derivative(s, &ch).unwrap();
                let scale = 1.0 + l.norm();
                assert!((all[ch.index()] - l).norm() < 1e-12 * scale, "{s} {}", ch.index());
                assert!((plain[ch.index()] - l).norm() < 1e-12 * scale);
                assert!((dall[ch.index()] - d).norm() < 1e-11 * (1.0 + d.norm()));
            }
        }
    }

    #[test]
    fn functional_equation() {
        let f = build_family(11).unwrap();
        for ch in f.non_principal() {
            let g = gauss_sum(&ch).unwrap();
            for s in [c(0.3, 2.0), c(-0.8, 15.0), c(0.1, -4.0)] {
                let q = 11u64;
                // Γ(z) = Γ(z+1)/z keeps the prefactor defined left of the line.
                let z = (s + ch.parity() as f64) / 2.0;
                let pre = z * (q as f64 / PI).ln() + ln_gamma_right(z + 1.0) - z.ln();
                let lhs = completed_value(s, &ch, &g).unwrap().value();
                let rhs = pre.exp() * l_value(s, &ch).unwrap();
                assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()), "{s} {lhs} {rhs}");
            }
        }
    }
}
