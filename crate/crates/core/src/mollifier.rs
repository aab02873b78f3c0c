//! Möbius-type mollifier coefficients, gcd double sums and the smoothed
//! von Mangoldt weight.

use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::{primes_up_to, sieve, SievedTables, EULER_GAMMA};
use crate::characters::Character;
use crate::error::{require, Error, Result};

/// Above this many coefficients the gcd sums use the divisor rearrangement.
pub const DIRECT_GCD_LIMIT: usize = 20_000;

/// λ_n(ξ) for 1 ≤ n < ξ².
#[derive(Debug, Clone)]
pub struct MollifierTable {
    xi: f64,
    /// lambda[n - 1] = λ_n.
    lambda: Vec<f64>,
    tables: SievedTables,
}

/// Number of integers n ≥ 1 with n < bound.
fn count_below(bound: f64) -> usize {
    let c = bound.ceil();
    (c as usize).saturating_sub(1)
}

pub fn build_mollifier(xi: f64) -> Result<MollifierTable> {
    require(xi > 1.0, "ξ > 1")?;
    let len = count_below(xi * xi);
    if len > crate::arith::SIEVE_CAPACITY {
        return Err(Error::Capacity(format!("ξ² = {} exceeds the sieve capacity", xi * xi)));
    }
    let tables = sieve(len.max(1))?;
    let log_xi = xi.ln();
    let lambda = (1..=len)
        .map(|n| {
            let mu = tables.mobius(n) as f64;
            let nf = n as f64;
            if nf <= xi {
                mu
            } else {
                mu * (xi * xi / nf).ln() / log_xi
            }
        })
        .collect();
    Ok(MollifierTable { xi, lambda, tables })
}

impl MollifierTable {
    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// Coefficient count, ⌈ξ²⌉ − 1.
    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    /// λ_n, zero outside 1 ≤ n < ξ².
    pub fn coefficient(&self, n: usize) -> f64 {
        if n == 0 || n > self.lambda.len() {
            0.0
        } else {
            self.lambda[n - 1]
        }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.lambda
    }

    pub fn tables(&self) -> &SievedTables {
        &self.tables
    }
}

/// Upper-branch weight log(ξ²/n)/log ξ, used to check agreement at n = ξ.
pub fn lambda_upper_weight(n: f64, xi: f64) -> f64 {
    (xi * xi / n).ln() / xi.ln()
}

/// Result of an exact sum together with the predicted main term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumComparison {
    pub exact: f64,
    pub main_term: f64,
}

/// M_ℓ(r, x) = Σ_{n<x, (n,r)=1} μ(n)/n · log^ℓ(x/n) and its predicted main term.
pub fn m_ell_sum(ell: u32, r: u64, x: f64) -> Result<SumComparison> {
    require(ell == 1 || ell == 2, "ℓ ∈ {1, 2}")?;
    require(r >= 1, "r ≥ 1")?;
    require(x > 1.0, "x > 1")?;
    let len = count_below(x).max(1);
    let tables = sieve(len.max(r as usize).max(2))?;
    let factors: Vec<u64> = tables_factors(&tables, r);
    let lx = x.ln();
    let mut exact = 0.0;
    for n in 1..=len {
        let mu = tables.mobius(n);
        if mu == 0 || factors.iter().any(|&p| (n as u64).is_multiple_of(p)) {
            continue;
        }
        exact += mu as f64 / n as f64 * (lx - (n as f64).ln()).powi(ell as i32);
    }
    let euler_factor: f64 = factors.iter().map(|&p| 1.0 / (1.0 - 1.0 / p as f64)).product();
    let shift: f64 = factors.iter().map(|&p| (p as f64).ln() / (p as f64 - 1.0)).sum();
    let fact = if ell == 2 { 2.0 } else { 1.0 };
    let main_term = fact * (lx - EULER_GAMMA - shift).powi(ell as i32 - 1) * euler_factor;
    Ok(SumComparison { exact, main_term })
}

fn tables_factors(tables: &SievedTables, r: u64) -> Vec<u64> {
    if (r as usize) <= tables.limit() {
        tables.prime_factors(r as usize).into_iter().map(|p| p as u64).collect()
    } else {
        trial_factors(r)
    }
}

fn trial_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The three weighted gcd double sums over λ_{n₁}λ_{n₂}/(n₁n₂)·gcd(n₁,n₂).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcdSums {
    /// Plain weight: predicted 1/log ξ.
    pub s_gcd: f64,
    /// Extra factor log n₁: predicted 1.
    pub s_log_n: f64,
    /// Extra factor log gcd(n₁,n₂): predicted 3/2.
    pub s_log_gcd: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcdMethod {
    /// Every pair (n₁, n₂).
    Direct,
    /// Σ_r φ(r)(Σ_{r|n} λ_n/n)², and the φ′ analogue.
    Rearranged,
}

/// Evaluate the gcd sums, directly when ξ² ≤ 10^5 and by rearrangement above.
pub fn gcd_double_sums(xi: f64) -> Result<GcdSums> {
    let table = build_mollifier(xi)?;
    let method = if table.len() <= DIRECT_GCD_LIMIT { GcdMethod::Direct } else { GcdMethod::Rearranged };
    Ok(gcd_double_sums_with(&table, method))
}

pub fn gcd_double_sums_with(table: &MollifierTable, method: GcdMethod) -> GcdSums {
    match method {
        GcdMethod::Direct => gcd_direct(table),
        GcdMethod::Rearranged => gcd_rearranged(table),
    }
}

fn binary_gcd(mut a: u32, mut b: u32) -> u32 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

#[derive(Default, Clone, Copy)]
struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

fn gcd_direct(table: &MollifierTable) -> GcdSums {
    // Only squarefree n carry weight.
    let support: Vec<(u32, f64, f64)> = table
        .lambda
        .iter()
        .enumerate()
        .filter(|(_, &l)| l != 0.0)
        .map(|(i, &l)| ((i + 1) as u32, l / (i + 1) as f64, ((i + 1) as f64).ln()))
        .collect();
    let logs: Vec<f64> = (0..=table.len()).map(|n| if n == 0 { 0.0 } else { (n as f64).ln() }).collect();
    let rows: Vec<[f64; 4]> = (0..support.len())
        .into_par_iter()
        .map(|i| {
            let (n1, w1, l1) = support[i];
            let mut plain = Kahan::default();
            let mut with_log = Kahan::default();
            let mut log_n2 = Kahan::default();
            for (j, &(n2, w2, l2)) in support.iter().enumerate().skip(i) {
                let g = binary_gcd(n1, n2);
                let mult = if j == i { 1.0 } else { 2.0 };
                let base = mult * w2 * g as f64;
                plain.add(base);
                with_log.add(base * logs[g as usize]);
                // log n₁ + log n₂ symmetrized over the pair
                log_n2.add(base * if j == i { l2 } else { 0.5 * (l1 + l2) });
            }
            [w1 * plain.sum, w1 * with_log.sum, w1 * log_n2.sum, 0.0]
        })
        .collect();
    let mut s = [Kahan::default(), Kahan::default(), Kahan::default()];
    for r in rows {
        for k in 0..3 {
            s[k].add(r[k]);
        }
    }
    GcdSums { s_gcd: s[0].sum, s_log_gcd: s[1].sum, s_log_n: s[2].sum }
}

fn gcd_rearranged(table: &MollifierTable) -> GcdSums {
    let len = table.len();
    let t = &table.tables;
    let mut a = vec![0.0; len + 1];
    let mut b = vec![0.0; len + 1];
    for (i, &l) in table.lambda.iter().enumerate() {
        if l == 0.0 {
            continue;
        }
        let n = i + 1;
        let w = l / n as f64;
        let wl = w * (n as f64).ln();
        for r in t.divisors(n) {
            a[r] += w;
            b[r] += wl;
        }
    }
    let mut s = [Kahan::default(), Kahan::default(), Kahan::default()];
    for r in 1..=len {
        if a[r] == 0.0 && b[r] == 0.0 {
            continue;
        }
        let phi = t.totient(r) as f64;
        s[0].add(phi * a[r] * a[r]);
        s[1].add(phi * a[r] * b[r]);
        s[2].add(phi_prime_closed(t, r) * a[r] * a[r]);
    }
    GcdSums { s_gcd: s[0].sum, s_log_n: s[1].sum, s_log_gcd: s[2].sum }
}

fn phi_prime_closed(t: &SievedTables, r: usize) -> f64 {
    let shift: f64 = t.prime_factors(r).iter().map(|&p| (p as f64).ln() / (p as f64 - 1.0)).sum();
    t.totient(r) as f64 * ((r as f64).ln() + shift)
}

/// φ′(r) = φ(r)(log r + Σ_{p|r} log p/(p−1)).
pub fn phi_prime(tables: &SievedTables, r: usize) -> Result<f64> {
    if r == 0 || r > tables.limit() {
        return Err(Error::Capacity(format!("φ′({r}) needs r within the sieved range")));
    }
    Ok(phi_prime_closed(tables, r))
}

/// φ′(r) from its definition r·Σ_{d|r} μ(d)/d·log(r/d).
pub fn phi_prime_definitional(tables: &SievedTables, r: usize) -> Result<f64> {
    if r == 0 || r > tables.limit() {
        return Err(Error::Capacity(format!("φ′({r}) needs r within the sieved range")));
    }
    let rf = r as f64;
    Ok(rf * tables
        .divisors(r)
        .into_iter()
        .map(|d| tables.mobius(d) as f64 / d as f64 * (rf / d as f64).ln())
        .sum::<f64>())
}

/// ψ(s, χ) = Σ_{n<ξ²} λ_n χ(n) n^{−s}.
pub fn psi_value(s: Complex64, character: &Character<'_>, table: &MollifierTable) -> Complex64 {
    table
        .lambda
        .iter()
        .enumerate()
        .filter(|(_, &l)| l != 0.0)
        .map(|(i, &l)| {
            let n = (i + 1) as u64;
            character.value(n) * l * (-s * (n as f64).ln()).exp()
        })
        .sum()
}

/// Taper applied to Λ(n) at y = n: 1 up to x, two quadratic-log pieces up to x³.
pub fn lambda_x_weight(y: f64, x: f64) -> f64 {
    let lx = x.ln();
    let ly = y.ln();
    let denom = 2.0 * lx * lx;
    if y <= x {
        1.0
    } else if y <= x * x {
        let a = 3.0 * lx - ly;
        let b = 2.0 * lx - ly;
        (a * a - 2.0 * b * b) / denom
    } else if y < x * x * x {
        let a = 3.0 * lx - ly;
        a * a / denom
    } else {
        0.0
    }
}

/// Λ_x(n) tabulated for 1 ≤ n < x³.
#[derive(Debug, Clone)]
pub struct SmoothedVonMangoldt {
    x: f64,
    /// values[n] = Λ_x(n); slot 0 unused.
    values: Vec<f64>,
}

impl SmoothedVonMangoldt {
    pub fn new(x: f64) -> Result<Self> {
        require(x >= 2.0, "x ≥ 2")?;
        let len = count_below(x * x * x);
        if len > crate::arith::SIEVE_CAPACITY {
            return Err(Error::Capacity(format!("x³ = {} exceeds the sieve capacity", x * x * x)));
        }
        let tables = sieve(len.max(1))?;
        let mut values = vec![0.0; len + 1];
        for (n, v) in values.iter_mut().enumerate().skip(2) {
            let lam = tables.von_mangoldt(n);
            if lam != 0.0 {
                *v = lam * lambda_x_weight(n as f64, x);
            }
        }
        Ok(SmoothedVonMangoldt { x, values })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn value(&self, n: usize) -> f64 {
        self.values.get(n).copied().unwrap_or(0.0)
    }

    /// Pairs (n, Λ_x(n)) with non-zero weight, n ascending.
    pub fn support(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values.iter().enumerate().filter(|(_, &v)| v != 0.0).map(|(n, &v)| (n, v))
    }
}

/// Λ_x(n) for a single n, without building a table.
pub fn smoothed_lambda(n: u64, x: f64) -> f64 {
    if n < 2 || n as f64 >= x * x * x {
        return 0.0;
    }
    let p = trial_factors(n);
    if p.len() != 1 {
        return 0.0;
    }
    (p[0] as f64).ln() * lambda_x_weight(n as f64, x)
}

/// Σ_p log p/(p(p−1)) = 0.75536661...
pub fn prime_log_constant() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| {
        let limit = 10_000_000usize;
        let mut acc = Kahan::default();
        for p in primes_up_to(limit).into_iter().rev() {
            let pf = p as f64;
            acc.add(pf.ln() / (pf * (pf - 1.0)));
        }
        // Σ_{p>P} log p/p² ≈ ∫_P^∞ dθ(u)/u² ≈ 1/P.
        acc.sum + 1.0 / limit as f64
    })
}

/// Σ_{r≤x} μ(r)²/φ(r) against log x + γ₀ + Σ_p log p/(p(p−1)).
pub fn totient_reciprocal_sum(x: f64) -> Result<SumComparison> {
    require(x >= 1.0, "x ≥ 1")?;
    let len = x.floor() as usize;
    let tables = sieve(len)?;
    let mut acc = Kahan::default();
    for r in 1..=len {
        if tables.mobius(r) != 0 {
            acc.add(1.0 / tables.totient(r) as f64);
        }
    }
    Ok(SumComparison { exact: acc.sum, main_term: x.ln() + EULER_GAMMA + prime_log_constant() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::build_family;

    #[test]
    fn xi_two() {
        let t = build_mollifier(2.0).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.coefficient(1), 1.0);
        assert_eq!(t.coefficient(2), -1.0);
        assert!((t.coefficient(3) + (4.0f64 / 3.0).ln() / 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn lower_branch_is_mobius() {
        let t = build_mollifier(100.0).unwrap();
        for n in 1..=100 {
            assert_eq!(t.coefficient(n), t.tables().mobius(n) as f64);
        }
        assert!(t.coefficients().iter().all(|l| l.abs() <= 1.0));
        assert_eq!(lambda_upper_weight(100.0, 100.0), 1.0);
        let near_top = (0.999f64 * 1e4).floor();
        assert!(lambda_upper_weight(near_top, 100.0) < 3e-4);
    }

    #[test]
    fn m_ell_examples() {
        let m = m_ell_sum(1, 2, 1.5).unwrap();
        assert!((m.exact - 1.5f64.ln()).abs() < 1e-15);
        let m = m_ell_sum(1, 1, 1e6).unwrap();
        assert!((m.exact - 1.0).abs() < 0.2 && m.main_term == 1.0);
        for x in [1e4, 1e5, 1e6] {
            let m = m_ell_sum(2, 1, x).unwrap();
            assert!((m.exact - m.main_term).abs() < 1.0, "x={x}: {m:?}");
        }
    }

    #[test]
    fn gcd_sums_small_exhaustive() {
        let t = build_mollifier(2.0).unwrap();
        let mut s = [0.0; 3];
        for n1 in 1..=3usize {
            for n2 in 1..=3usize {
                let mut g = n1;
                let mut h = n2;
                while h != 0 {
                    (g, h) = (h, g % h);
                }
                let w = t.coefficient(n1) * t.coefficient(n2) / (n1 * n2) as f64 * g as f64;
                s[0] += w;
                s[1] += w * (n1 as f64).ln();
                s[2] += w * (g as f64).ln();
            }
        }
        for method in [GcdMethod::Direct, GcdMethod::Rearranged] {
            let r = gcd_double_sums_with(&t, method);
            assert!((r.s_gcd - s[0]).abs() < 1e-14);
            assert!((r.s_log_n - s[1]).abs() < 1e-14);
            assert!((r.s_log_gcd - s[2]).abs() < 1e-14);
        }
    }

    #[test]
    fn gcd_methods_agree() {
        for xi in [2.5, 7.3, 31.0, 60.0] {
            let t = build_mollifier(xi).unwrap();
            let d = gcd_double_sums_with(&t, GcdMethod::Direct);
            let r = gcd_double_sums_with(&t, GcdMethod::Rearranged);
            assert!((d.s_gcd - r.s_gcd).abs() < 1e-9, "{xi}");
            assert!((d.s_log_n - r.s_log_n).abs() < 1e-9, "{xi}");
            assert!((d.s_log_gcd - r.s_log_gcd).abs() < 1e-9, "{xi}");
        }
    }

    #[test]
    fn phi_prime_forms() {
        let t = sieve(10_000).unwrap();
        assert_eq!(phi_prime(&t, 1).unwrap(), 0.0);
        for p in [2usize, 3, 5, 7] {
            let want = p as f64 * (p as f64).ln();
            assert!((phi_prime(&t, p).unwrap() - want).abs() < 1e-12);
            assert!((phi_prime_definitional(&t, p).unwrap() - want).abs() < 1e-12);
        }
        let s: f64 = t.divisors(12).into_iter().map(|d| phi_prime(&t, d).unwrap()).sum();
        assert!((s - 12.0 * 12f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn psi_conjugation() {
        let f = build_family(7).unwrap();
        let t = build_mollifier(3.0).unwrap();
        let s = Complex64::new(0.6, 2.0);
        for chi in f.characters() {
            let a = psi_value(s, &chi, &t);
            let b = psi_value(s.conj(), &chi.conjugate(), &t).conj();
            assert!((a - b).norm() < 1e-12);
        }
        let tiny = build_mollifier(1.4).unwrap();
        assert_eq!(tiny.len(), 1);
        assert_eq!(psi_value(s, &f.character(3).unwrap(), &tiny), Complex64::new(1.0, 0.0));
        assert!(matches!(build_mollifier(1.0), Err(Error::Constraint(_))));
    }

    #[test]
    fn lambda_x_breakpoints() {
        for x in [10.0f64, 100.0] {
            assert_eq!(lambda_x_weight(x, x), 1.0);
            let hi = lambda_x_weight(x * (1.0 + 1e-13), x);
            assert!((hi - 1.0).abs() < 1e-12);
            let x2 = x * x;
            assert!((lambda_x_weight(x2, x) - 0.5).abs() < 1e-12);
            assert!((lambda_x_weight(x2 * (1.0 + 1e-13), x) - 0.5).abs() < 1e-12);
            assert!(lambda_x_weight(x2 * x * (1.0 - 1e-13), x) < 1e-12);
            assert!((lambda_x_weight(x.powf(2.5), x) - 0.125).abs() < 1e-12);
        }
        let sv = SmoothedVonMangoldt::new(10.0).unwrap();
        assert_eq!(sv.value(7), 7f64.ln());
        assert!((sv.value(100) - 0.0).abs() == 0.0);
        assert!((smoothed_lambda(97, 10.0) - sv.value(97)).abs() < 1e-15);
        assert_eq!(sv.value(999), 0.0);
    }

    #[test]
    fn totient_sum() {
        assert_eq!(totient_reciprocal_sum(1.0).unwrap().exact, 1.0);
        let c = prime_log_constant();
        assert!((c - 0.755_366_610_9).abs() < 1e-8, "{c}");
        let r = totient_reciprocal_sum(1e6).unwrap();
        assert!((r.exact - r.main_term).abs() < 1e-2);
    }
}
