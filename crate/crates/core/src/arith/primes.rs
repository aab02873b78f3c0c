use super::sieve::{for_each_prime_in, primes_up_to};
use crate::error::{Error, Result};

/// Bracket on ζ_P(s) = Σ_p p^{−s}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimeZeta {
    /// Sum over p ≤ prime_limit.
    pub lower: f64,
    /// Partial sum plus a rigorous bound on the omitted primes.
    pub upper: f64,
}

impl PrimeZeta {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// Bound on Σ_{p > P} p^{−s} from π(x) < 1.25506 x / log x.
fn tail_bound(s: f64, limit: f64) -> f64 {
    1.25506 * s / ((s - 1.0) * limit.ln()) * limit.powf(1.0 - s)
}

/// ζ_P(s) bracketed by the partial sum over p ≤ prime_limit and a tail bound.
pub fn prime_zeta(s: f64, prime_limit: usize) -> Result<PrimeZeta> {
    if !(s > 1.0) {
        return Err(Error::Divergence(format!("prime zeta diverges for s = {s} ≤ 1")));
    }
    if prime_limit < 2 {
        return Err(Error::Domain("prime limit must be at least 2".into()));
    }
    let primes = primes_up_to(prime_limit);
    Ok(prime_zeta_over(s, &primes, prime_limit))
}

/// Same as [`prime_zeta`] over a precomputed ascending prime list ending at or below `limit`.
pub fn prime_zeta_over(s: f64, primes: &[usize], limit: usize) -> PrimeZeta {
    let mut sum = 0.0;
    let mut cut = limit as f64;
    for &p in primes {
        let pf = p as f64;
        sum += (-s * pf.ln()).exp();
        // Stop once the remaining tail cannot move a double.
        if pf > 100.0 && tail_bound(s, pf) < 1e-18 * sum {
            cut = pf;
            break;
        }
    }
    PrimeZeta { lower: sum, upper: sum + tail_bound(s, cut.max(17.0)) }
}

/// Σ_{lo ≤ p < hi} f(p) over primes with a segmented sieve.
pub fn prime_sum_between(lo: u64, hi: u64, f: impl Fn(f64) -> f64) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for_each_prime_in(lo, hi, |p| {
        let y = f(p as f64) - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    });
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_p_two() {
        let z = prime_zeta(2.0, 10_000_000).unwrap();
        assert!(z.lower >= 0.4522 && z.upper <= 0.4523, "{z:?}");
    }

    #[test]
    fn direct_sum_at_four() {
        let z = prime_zeta(4.0, 10_000).unwrap();
        let direct: f64 = primes_up_to(10_000).iter().map(|&p| (p as f64).powi(-4)).sum();
        assert!((z.lower - direct).abs() < 1e-10);
    }

    #[test]
    fn dominated_by_two_for_large_s() {
        let z = prime_zeta(60.0, 1000).unwrap();
        assert!((z.upper / 2f64.powi(-60) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn divergence() {
        assert!(matches!(prime_zeta(1.0, 100), Err(Error::Divergence(_))));
    }

    #[test]
    fn mertens_constant() {
        let x: f64 = 1e6;
        let s = prime_sum_between(2, x as u64 + 1, |p| 1.0 / p);
        assert!((s - x.ln().ln() - 0.2615).abs() < 0.05);
    }
}
