//! The character group modulo a prime, realized through discrete logarithms.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::arith::primes_up_to;
use crate::error::{require, Error, Result};

/// All Dirichlet characters modulo a prime q.
///
/// Character j sends g^m to e^{2πi jm/(q−1)} for the stored primitive root g.
/// Values are kept as exponents mod q−1 and only turned into complex numbers
/// through the shared root table.
#[derive(Debug, Clone)]
pub struct CharacterFamily {
    q: u64,
    generator: u64,
    /// ind[a] = m with g^m ≡ a, for 1 ≤ a < q.
    ind: Vec<u32>,
    /// pow[m] = g^m mod q.
    pow: Vec<u32>,
    roots: Vec<Complex64>,
}

/// A handle on one character of a family.
#[derive(Debug, Clone, Copy)]
pub struct Character<'a> {
    family: &'a CharacterFamily,
    index: usize,
}

/// Gauss sum and root number of a non-principal character.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussData {
    pub tau: Complex64,
    pub epsilon: Complex64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn primitive_root(q: u64) -> u64 {
    let n = q - 1;
    let factors: Vec<u64> = primes_up_to((n as f64).sqrt() as usize + 1)
        .into_iter()
        .map(|p| p as u64)
        .filter(|p| n.is_multiple_of(*p))
        .chain({
            let mut m = n;
            for p in primes_up_to((n as f64).sqrt() as usize + 1) {
                while m.is_multiple_of(p as u64) {
                    m /= p as u64;
                }
            }
            (m > 1).then_some(m)
        })
        .collect();
    (2..q).find(|&g| factors.iter().all(|&p| pow_mod(g, n / p, q) != 1)).unwrap_or(1)
}

/// e^{2πi m/n}, exact at quarter turns.
fn unit_root(m: u64, n: u64) -> Complex64 {
    if (4 * m).is_multiple_of(n) {
        return match 4 * m / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * m as f64 / n as f64)
}

/// Build the full family of characters modulo the prime q.
pub fn build_family(q: u64) -> Result<CharacterFamily> {
    if q == 2 || !is_prime(q) {
        return Err(Error::Domain(format!("modulus must be an odd prime, got {q}")));
    }
    if q > 100_000 {
        return Err(Error::Capacity(format!("modulus {q} exceeds 100000")));
    }
    let g = primitive_root(q);
    let n = (q - 1) as usize;
    let mut ind = vec![0u32; q as usize];
    let mut pow = vec![0u32; n];
    let mut x = 1u64;
    for m in 0..n {
        pow[m] = x as u32;
        ind[x as usize] = m as u32;
        x = x * g % q;
    }
    let mut roots: Vec<Complex64> = (0..n as u64).map(|m| unit_root(m, n as u64)).collect();
    for m in 1..n / 2 + 1 {
        roots[n - m] = roots[m].conj();
    }
    Ok(CharacterFamily { q, generator: g, ind, pow, roots })
}

impl CharacterFamily {
    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// q − 1 characters, index 0 principal.
    pub fn len(&self) -> usize {
        (self.q - 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn character(&self, index: usize) -> Result<Character<'_>> {
        if index >= self.len() {
            return Err(Error::Domain(format!("character index {index} out of range for q = {}", self.q)));
        }
        Ok(Character { family: self, index })
    }

    pub fn characters(&self) -> impl Iterator<Item = Character<'_>> {
        (0..self.len()).map(move |index| Character { family: self, index })
    }

    pub fn non_principal(&self) -> impl Iterator<Item = Character<'_>> {
        self.characters().skip(1)
    }

    /// Discrete logarithm of n to the family's generator, None when q | n.
    pub fn discrete_log(&self, n: u64) -> Option<u32> {
        let r = n % self.q;
        (r != 0).then(|| self.ind[r as usize])
    }

    /// g^m mod q.
    pub fn residue_of_log(&self, m: usize) -> u64 {
        self.pow[m % self.len()] as u64
    }

    /// e^{2πi m/(q−1)}.
    pub fn root(&self, m: u64) -> Complex64 {
        self.roots[(m % (self.q - 1)) as usize]
    }

    /// Σ_χ χ(n), which is q − 1 when n ≡ 1 and 0 otherwise.
    pub fn orthogonality_sum(&self, n: u64) -> Complex64 {
        match self.discrete_log(n) {
            None => Complex64::new(0.0, 0.0),
            Some(m) => (0..self.len() as u64).map(|j| self.root(j * m as u64)).sum(),
        }
    }
}

impl<'a> Character<'a> {
    pub fn family(&self) -> &'a CharacterFamily {
        self.family
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn modulus(&self) -> u64 {
        self.family.q
    }

    pub fn is_principal(&self) -> bool {
        self.index == 0
    }

    /// 𝔞 = (1 − χ(−1))/2.
    pub fn parity(&self) -> u8 {
        (self.index % 2) as u8
    }

    pub fn order(&self) -> u64 {
        let n = self.family.q - 1;
        n / gcd(self.index as u64, n)
    }

    pub fn is_real(&self) -> bool {
        self.order() <= 2
    }

    pub fn conjugate(&self) -> Character<'a> {
        let n = self.family.len();
        Character { family: self.family, index: (n - self.index) % n }
    }

    /// Exponent e with χ(n) = e^{2πi e/(q−1)}, None when q | n.
    pub fn value_index(&self, n: u64) -> Option<u64> {
        let m = self.family.discrete_log(n)? as u64;
        Some(self.index as u64 * m % (self.family.q - 1))
    }

    pub fn value(&self, n: u64) -> Complex64 {
        match self.value_index(n) {
            Some(e) => self.family.root(e),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// χ(n) for n = 0..q as a dense vector.
    pub fn values(&self) -> Vec<Complex64> {
        (0..self.family.q).map(|n| self.value(n)).collect()
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// τ(χ) = Σ χ(a) e^{2πia/q} and ε(χ) = τ/(i^𝔞 √q).
pub fn gauss_sum(character: &Character<'_>) -> Result<GaussData> {
    if character.is_principal() {
        return Err(Error::Unsupported("Gauss data of the principal character".into()));
    }
    let q = character.modulus();
    let tau: Complex64 = (1..q)
        .map(|a| character.value(a) * Complex64::from_polar(1.0, 2.0 * PI * a as f64 / q as f64))
        .sum();
    let i_a = if character.parity() == 1 { Complex64::new(0.0, 1.0) } else { Complex64::new(1.0, 0.0) };
    let epsilon = tau / (i_a * (q as f64).sqrt());
    Ok(GaussData { tau, epsilon })
}

/// Outcome of the twisted prime moment comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistedMoment {
    pub lhs: f64,
    pub rhs: f64,
    /// lhs ≤ rhs.
    pub holds: bool,
    /// A bound that orthogonality does guarantee: (q−1)/(q−2)·k!·rhs, doubled when ℓ = 2.
    pub relaxed_rhs: f64,
}

/// Compare (q−2)^{−1} Σ_{χ≠χ₀} |Σ_{p≤y} a_p χ(p^ℓ) p^{−σ}|^{2k} with (Σ |a_p|² p^{−2σ})^k.
///
/// `coefficients[i]` multiplies the i-th prime ≤ y.
pub fn twisted_prime_moment(
    family: &CharacterFamily,
    y: f64,
    coefficients: &[Complex64],
    sigma: f64,
    k: u32,
    ell: u32,
) -> Result<TwistedMoment> {
    require(k >= 1, "k ≥ 1")?;
    require(ell == 1 || ell == 2, "ℓ ∈ {1, 2}")?;
    require(y >= 2.0, "2 ≤ y")?;
    let q = family.modulus() as f64;
    require(y <= q.powf(1.0 / k as f64) * (1.0 + 1e-12), "y ≤ q^{1/k}")?;
    let primes = primes_up_to(y.floor() as usize);
    if coefficients.len() != primes.len() {
        return Err(Error::Domain(format!(
            "expected {} coefficients for the primes up to {y}, got {}",
            primes.len(),
            coefficients.len()
        )));
    }
    let weights: Vec<(Option<u64>, Complex64)> = primes
        .iter()
        .zip(coefficients)
        .map(|(&p, &a)| {
            let m = family.discrete_log(p as u64).map(|m| m as u64 * ell as u64);
            (m, a * (p as f64).powf(-sigma))
        })
        .collect();
    let n = family.len() as u64;
    let total: f64 = (1..n)
        .map(|j| {
            let s: Complex64 = weights
                .iter()
                .filter_map(|&(m, w)| m.map(|m| w * family.root(j * m % n)))
                .sum();
            s.norm_sqr().powi(k as i32)
        })
        .sum();
    let lhs = total / (q - 2.0);
    let base: f64 = weights.iter().map(|(_, w)| w.norm_sqr()).sum();
    let rhs = base.powi(k as i32);
    let k_fact: f64 = (1..=k).map(|i| i as f64).product();
    let relaxed_rhs = (q - 1.0) / (q - 2.0) * k_fact * rhs * if ell == 2 { 2.0 } else { 1.0 };
    Ok(TwistedMoment { lhs, rhs, holds: lhs <= rhs, relaxed_rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_moduli() {
        for q in [0, 1, 2, 4, 9, 100] {
            assert!(build_family(q).is_err(), "q={q}");
        }
    }

    #[test]
    fn mod_three() {
        let f = build_family(3).unwrap();
        assert_eq!(f.len(), 2);
        let chi = f.character(1).unwrap();
        assert_eq!(chi.value(2), Complex64::new(-1.0, 0.0));
        assert_eq!(chi.parity(), 1);
        let g = gauss_sum(&chi).unwrap();
        assert!((g.tau - Complex64::new(0.0, 3f64.sqrt())).norm() < 1e-14);
    }

    #[test]
    fn mod_five_structure() {
        let f = build_family(5).unwrap();
        let np: Vec<_> = f.non_principal().collect();
        assert_eq!(np.len(), 3);
        assert!(np.iter().all(|c| 4 % c.order() == 0));
        assert_eq!(np.iter().filter(|c| c.is_real()).count(), 1);
    }

    #[test]
    fn multiplicative_and_orthogonal() {
        for q in [7u64, 11, 101, 499] {
            let f = build_family(q).unwrap();
            for chi in f.characters() {
                let s: Complex64 = (1..q).map(|a| chi.value(a)).sum();
                let want = if chi.is_principal() { (q - 1) as f64 } else { 0.0 };
                assert!((s - want).norm() < 1e-9);
                for a in 1..q.min(30) {
                    for b in 1..q.min(30) {
                        assert!((chi.value(a * b) - chi.value(a) * chi.value(b)).norm() < 1e-12);
                    }
                }
                assert_eq!(chi.parity() as f64, (1.0 - chi.value(q - 1).re) / 2.0);
                let conj = chi.conjugate();
                for a in 1..q {
                    assert!((conj.value(a) - chi.value(a).conj()).norm() < 1e-15);
                }
            }
            for n in 1..(2 * q) {
                let s = f.orthogonality_sum(n);
                let want = if n % q == 1 { (q - 1) as f64 } else { 0.0 };
                assert!((s - want).norm() < 1e-9, "q={q} n={n}");
            }
        }
    }

    #[test]
    fn gauss_sums() {
        for q in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            let f = build_family(q).unwrap();
            for chi in f.non_principal() {
                let g = gauss_sum(&chi).unwrap();
                assert!((g.tau.norm() - (q as f64).sqrt()).abs() < 1e-10);
                let gb = gauss_sum(&chi.conjugate()).unwrap();
                assert!((g.epsilon * gb.epsilon - 1.0).norm() < 1e-10);
                assert!((gb.epsilon - g.epsilon.conj()).norm() < 1e-10);
            }
            assert!(gauss_sum(&f.character(0).unwrap()).is_err());
        }
    }

    #[test]
    fn twisted_equality_case() {
        let f = build_family(5).unwrap();
        let m = twisted_prime_moment(&f, 2.0, &[Complex64::new(1.0, 0.0)], 0.5, 1, 1).unwrap();
        assert!((m.lhs - 0.5).abs() <= 4.0 * f64::EPSILON && (m.rhs - 0.5).abs() <= 4.0 * f64::EPSILON);
        let z = twisted_prime_moment(&f, 2.0, &[Complex64::new(0.0, 0.0)], 0.5, 1, 1).unwrap();
        assert_eq!((z.lhs, z.rhs), (0.0, 0.0));
        assert!(twisted_prime_moment(&f, 3.0, &[Complex64::new(1.0, 0.0); 2], 0.5, 2, 1).is_err());
    }
}
