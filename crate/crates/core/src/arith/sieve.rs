use crate::error::{Error, Result};

/// Largest table `sieve` will build.
pub const SIEVE_CAPACITY: usize = 100_000_000;

/// Arithmetic functions tabulated on `1..=limit`.
///
/// Index `n` holds the value at `n`; slot 0 is unused.
#[derive(Debug, Clone)]
pub struct SievedTables {
    limit: usize,
    spf: Vec<u32>,
    mobius: Vec<i8>,
    totient: Vec<u32>,
}

/// Build the tables with a linear sieve.
pub fn sieve(limit: usize) -> Result<SievedTables> {
    if limit == 0 || limit > SIEVE_CAPACITY {
        return Err(Error::Capacity(format!("sieve limit {limit} outside 1..={SIEVE_CAPACITY}")));
    }
    let mut spf = vec![0u32; limit + 1];
    let mut mobius = vec![0i8; limit + 1];
    let mut totient = vec![0u32; limit + 1];
    let mut primes: Vec<u32> = Vec::new();
    mobius[1] = 1;
    totient[1] = 1;
    if limit >= 1 {
        spf[1] = 1;
    }
    for n in 2..=limit {
        if spf[n] == 0 {
            spf[n] = n as u32;
            primes.push(n as u32);
            mobius[n] = -1;
            totient[n] = n as u32 - 1;
        }
        let sn = spf[n];
        for &p in &primes {
            let m = n * p as usize;
            if p > sn || m > limit {
                break;
            }
            spf[m] = p;
            if p == sn {
                mobius[m] = 0;
                totient[m] = totient[n] * p;
            } else {
                mobius[m] = -mobius[n];
                totient[m] = totient[n] * (p - 1);
            }
        }
    }
    Ok(SievedTables { limit, spf, mobius, totient })
}

impl SievedTables {
    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn mobius(&self, n: usize) -> i8 {
        self.mobius[n]
    }

    pub fn totient(&self, n: usize) -> u64 {
        self.totient[n] as u64
    }

    pub fn smallest_prime_factor(&self, n: usize) -> usize {
        self.spf[n] as usize
    }

    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && self.spf[n] as usize == n
    }

    /// log p when n is a power of the prime p, else 0.
    pub fn von_mangoldt(&self, n: usize) -> f64 {
        match self.prime_power_base(n) {
            Some(p) => (p as f64).ln(),
            None => 0.0,
        }
    }

    /// The prime p with n = p^k, k ≥ 1.
    pub fn prime_power_base(&self, n: usize) -> Option<usize> {
        if n < 2 {
            return None;
        }
        let p = self.spf[n] as usize;
        let mut m = n;
        while m.is_multiple_of(p) {
            m /= p;
        }
        (m == 1).then_some(p)
    }

    /// Mobius values μ(1..=limit) as a slice indexed from 0 = μ(1).
    pub fn mobius_slice(&self) -> &[i8] {
        &self.mobius[1..]
    }

    /// Distinct prime factors of n in increasing order.
    pub fn prime_factors(&self, mut n: usize) -> Vec<usize> {
        let mut out = Vec::new();
        while n > 1 {
            let p = self.spf[n] as usize;
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        out
    }

    /// All divisors of n, unsorted.
    pub fn divisors(&self, n: usize) -> Vec<usize> {
        let mut divs = vec![1usize];
        let mut m = n;
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs
    }

    pub fn primes(&self) -> impl Iterator<Item = usize> + '_ {
        (2..=self.limit).filter(move |&n| self.spf[n] as usize == n)
    }
}

/// Primes up to `limit` by a plain Eratosthenes bitmap.
pub fn primes_up_to(limit: usize) -> Vec<usize> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for n in 2..=limit {
        if !composite[n] {
            out.push(n);
            let mut m = n * n;
            while m <= limit {
                composite[m] = true;
                m += n;
            }
        }
    }
    out
}

/// Visit every prime in `[lo, hi)` in increasing order using a segmented sieve.
pub fn for_each_prime_in(lo: u64, hi: u64, mut visit: impl FnMut(u64)) {
    if hi <= 2 || lo >= hi {
        return;
    }
    let root = (hi as f64).sqrt() as u64 + 1;
    let base = primes_up_to(root as usize);
    let seg = 1u64 << 18;
    let mut start = lo.max(2);
    let mut mark = vec![false; seg as usize];
    while start < hi {
        let end = (start + seg).min(hi);
        mark.iter_mut().for_each(|m| *m = false);
        for &p in &base {
            let p = p as u64;
            if p * p >= end {
                break;
            }
            let mut m = (start.div_ceil(p) * p).max(p * p);
            while m < end {
                mark[(m - start) as usize] = true;
                m += p;
            }
        }
        for n in start..end {
            if !mark[(n - start) as usize] {
                visit(n);
            }
        }
        start = end;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_mobius(mut n: usize) -> i8 {
        let mut mu = 1i8;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return 0;
                }
                mu = -mu;
            }
            p += 1;
        }
        if n > 1 {
            mu = -mu;
        }
        mu
    }

    #[test]
    fn base_case() {
        let t = sieve(1).unwrap();
        assert_eq!(t.mobius(1), 1);
        assert_eq!(t.von_mangoldt(1), 0.0);
        assert!(sieve(0).is_err());
        assert!(sieve(SIEVE_CAPACITY + 1).is_err());
    }

    #[test]
    fn small_values() {
        let t = sieve(12).unwrap();
        assert_eq!(t.mobius(12), 0);
        assert_eq!(t.mobius(6), 1);
        assert_eq!(t.von_mangoldt(8), 2f64.ln());
        assert_eq!(t.von_mangoldt(6), 0.0);
        assert_eq!(t.totient(12), 4);
        assert_eq!(t.totient(11), 10);
    }

    #[test]
    fn divisor_identities() {
        let t = sieve(3000).unwrap();
        for n in 1..=3000usize {
            let divs = t.divisors(n);
            let mu_sum: i64 = divs.iter().map(|&d| t.mobius(d) as i64).sum();
            assert_eq!(mu_sum, (n == 1) as i64, "n={n}");
            if n >= 2 {
                let lam: f64 = divs.iter().map(|&d| t.von_mangoldt(d)).sum();
                assert!((lam - (n as f64).ln()).abs() <= 1e-12 * (n as f64).ln());
            }
            let phi_sum: u64 = divs.iter().map(|&d| t.totient(d)).sum();
            assert_eq!(phi_sum, n as u64);
        }
    }

    #[test]
    fn million_against_trial_division() {
        let t = sieve(1_000_000).unwrap();
        let mut state = 12345u64;
        for _ in 0..1000 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let n = 1 + (state >> 33) as usize % 1_000_000;
            assert_eq!(t.mobius(n), trial_mobius(n), "n={n}");
        }
    }

    #[test]
    fn segmented_matches_plain() {
        let plain: Vec<u64> = primes_up_to(200_000).into_iter().map(|p| p as u64).filter(|&p| p >= 1000).collect();
        let mut seg = Vec::new();
        for_each_prime_in(1000, 200_001, |p| seg.push(p));
        assert_eq!(plain, seg);
    }
}
