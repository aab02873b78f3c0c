use std::time::Instant;

use num_complex::Complex64;

use super::{check_modulus, mean, CharacterSums, ExperimentReport, ExperimentRow};
use crate::characters::build_family;
use crate::error::{require, Error, Result};
use crate::lfunc::FamilyEvaluator;
use crate::mollifier::{build_mollifier, gcd_double_sums};

/// Ceiling for the normalized gcd-sum deviations.
pub const CONVERGENCE_BOUND: f64 = 20.0;
const MAX_XI_SQUARED: f64 = 1e7;

/// The three gcd double sums against their limits 1/log ξ, 1 and 3/2.
///
/// Deviations are multiplied by log ξ/log log ξ, which is only defined for ξ > e.
pub fn mollifier_convergence(xis: &[f64]) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut rep = ExperimentReport::new(
        "mollifier",
        "normalized deviations stay below 20",
        &["xi"],
        &["s_gcd", "s_log_n", "s_log_gcd", "dev_gcd", "dev_log_n", "dev_log_gcd"],
    );
    rep.param("points", xis.len());
    rep.notes.push("deviations: |S·log ξ − 1|, |S − 1|, |S − 3/2|, each times log ξ/log log ξ".into());
    for &xi in xis {
        if xi * xi > MAX_XI_SQUARED {
            return Err(Error::Capacity(format!("ξ² = {} exceeds 10^7", xi * xi)));
        }
        let sums = gcd_double_sums(xi)?;
        let l = xi.ln();
        let raw = [(sums.s_gcd * l - 1.0).abs(), (sums.s_log_n - 1.0).abs(), (sums.s_log_gcd - 1.5).abs()];
        let norm = (xi > std::f64::consts::E).then(|| l / l.ln());
        let devs: Vec<Option<f64>> = raw.iter().map(|d| norm.map(|n| d * n)).collect();
        let stat = norm.map(|_| devs.iter().flatten().copied().fold(0.0, f64::max));
        let mut extras: Vec<_> = [sums.s_gcd, sums.s_log_n, sums.s_log_gcd].into_iter().map(Into::into).collect();
        extras.extend(devs.into_iter().map(Into::into));
        rep.push(ExperimentRow {
            modulus: None,
            keys: vec![xi.into()],
            statistic: stat,
            bound: CONVERGENCE_BOUND,
            flagged: stat.is_some_and(|s| s >= CONVERGENCE_BOUND),
            extras,
        });
    }
    rep.runtime = start.elapsed();
    Ok(rep)
}

/// (q−2)^{−1} Σ_{χ≠χ₀} (|L·ψ|² − 1) at s = σ + it against 6.20·ξ^{1−2σ}.
pub fn psi_mean_square(q: u64, xi: f64, sigma: f64, t: f64) -> Result<ExperimentReport> {
    let start = Instant::now();
    check_modulus(q)?;
    require(q >= 5, "q ≥ 5")?;
    require(sigma > 0.5 && sigma <= 2.0, "1/2 < σ ≤ 2")?;
    require(t.abs() <= 100.0, "|t| ≤ 100")?;
    let family = build_family(q)?;
    let table = build_mollifier(xi)?;
    let s = Complex64::new(sigma, t);
    let l = FamilyEvaluator::new(&family).values(s)?;
    let psi = CharacterSums::new(&family).sum(
        table
            .coefficients()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(i, &c)| {
                let n = (i + 1) as u64;
                (n, c * (-s * (n as f64).ln()).exp())
            }),
    );
    let stat = mean(family.non_principal().map(|ch| (l[ch.index()] * psi[ch.index()]).norm_sqr() - 1.0));
    let bound = 6.20 * xi.powf(1.0 - 2.0 * sigma);
    let mut rep = ExperimentReport::new("psi-mean-square", "6.20·ξ^{1−2σ}", &["xi", "sigma", "t"], &["coefficients"]);
    rep.moduli.push(q);
    rep.param("q", q);
    rep.notes.push("the estimate is asymptotic in q; a flagged row is data, not a failure".into());
    rep.push(ExperimentRow {
        modulus: Some(q),
        keys: vec![xi.into(), sigma.into(), t.into()],
        statistic: Some(stat),
        bound,
        flagged: !stat.is_finite() || stat >= bound,
        extras: vec![table.len().into()],
    });
    rep.runtime = start.elapsed();
    Ok(rep)
}
