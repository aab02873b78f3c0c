use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{check_modulus, ExperimentReport, ExperimentRow};
use crate::characters::build_family;
use crate::constants::C0;
use crate::error::{require, Result};
use crate::lfunc::eval::rotation_phase;
use crate::lfunc::zeros::base_step;
use crate::lfunc::{
    critical_zeros_window, family_counts_for, family_gauss_data, refine_root, rotated_value, FamilyEvaluator, Rect,
};
use crate::report::{format_float, Cell};

/// Scaled heights at which the cumulative fraction is reported.
pub const SURVEY_FRACTIONS: [f64; 4] = [0.25, 1.0, 2.0, 5.0];
const MAX_HEIGHT: f64 = 100.0;
const ROOT_WIDTH: f64 = 1e-10;
const BIN: f64 = 0.25;

/// Default scan height max(30, 40·2π/log q), capped at the supported 100.
pub fn survey_height(q: u64) -> f64 {
    (40.0 * 2.0 * PI / (q as f64).ln()).max(30.0).min(MAX_HEIGHT)
}

struct Bracket {
    a: f64,
    za: f64,
    b: f64,
    zb: f64,
    /// Grid index of b.
    top: usize,
}

#[derive(Debug, Clone, Copy)]
struct FirstZero {
    gamma: Option<f64>,
    method: &'static str,
    validated: bool,
}

/// Lowest nonnegative zero ordinate of every non-principal character, scaled by
/// log q/2π and paired with its conjugate.
pub fn first_zero_survey(q: u64, t_max: Option<f64>) -> Result<ExperimentReport> {
    let start = Instant::now();
    check_modulus(q)?;
    let family = build_family(q)?;
    let mut limit = t_max.unwrap_or_else(|| survey_height(q));
    require(limit > 0.0 && limit <= MAX_HEIGHT, "0 < T ≤ 100")?;
    let initial = limit;
    let ev = FamilyEvaluator::new(&family);
    let gauss = family_gauss_data(&family);
    let n = family.len();
    let chars: Vec<_> = family.non_principal().collect();
    let step = base_step(q);
    let z_at = |t: f64| -> Result<Vec<f64>> {
        let vals = ev.values(Complex64::new(0.5, t))?;
        Ok((0..n)
            .map(|j| match &gauss[j] {
                Some(g) => {
                    let theta = rotation_phase(t, q, family.character(j).map(|c| c.parity()).unwrap_or(0), g.epsilon);
                    (Complex64::from_polar(1.0, theta) * vals[j]).re
                }
                None => f64::NAN,
            })
            .collect())
    };

    let mut grid = vec![0.0];
    let mut prev = z_at(0.0)?;
    let mut brackets: Vec<Option<Bracket>> = (0..n).map(|_| None).collect();
    let mut missing = chars.len();
    let mut doubled = false;
    let mut i = 0usize;
    loop {
        let t = ((i + 1) as f64 * step).min(limit);
        let cur = z_at(t)?;
        i += 1;
        grid.push(t);
        for ch in &chars {
            let j = ch.index();
            if brackets[j].is_none() && (prev[j] < 0.0) != (cur[j] < 0.0) {
                brackets[j] = Some(Bracket { a: grid[i - 1], za: prev[j], b: t, zb: cur[j], top: i });
                missing -= 1;
            }
        }
        prev = cur;
        if missing == 0 {
            break;
        }
        if t >= limit {
            if doubled || limit >= MAX_HEIGHT {
                break;
            }
            doubled = true;
            limit = (2.0 * limit).min(MAX_HEIGHT);
        }
    }

    // Argument-principle check below the first grid point past each sign change.
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (j, b) in brackets.iter().enumerate() {
        if let Some(b) = b {
            groups.entry(b.top).or_default().push(j);
        }
    }
    let mut counts = vec![None; n];
    for (top, members) in &groups {
        let rect = Rect::new(-1.0, 2.0, 0.0, grid[*top])?;
        for (j, c) in family_counts_for(&ev, &gauss, rect, members)? {
            counts[j] = c.ok();
        }
    }

    let firsts: Vec<FirstZero> = (0..n)
        .into_par_iter()
        .map(|j| -> Result<FirstZero> {
            let Some(br) = &brackets[j] else {
                return Ok(FirstZero { gamma: None, method: "none", validated: false });
            };
            let ch = family.character(j)?;
            let g = gauss[j].as_ref().expect("non-principal");
            if counts[j] == Some(1) {
                let f = |t: f64| rotated_value(t, &ch, g).map(|z| z.re);
                let (root, _) = refine_root(f, br.a, br.za, br.b, br.zb, ROOT_WIDTH)?;
                return Ok(FirstZero { gamma: Some(root), method: "grid", validated: true });
            }
            let list = critical_zeros_window(&ch, 0.0, br.b)?;
            Ok(FirstZero { gamma: list.first_nonnegative(), method: "scan", validated: list.validated })
        })
        .collect::<Result<_>>()?;

    let lq = (q as f64).ln();
    let scale = lq / (2.0 * PI);
    let mut rep = ExperimentReport::new(
        "first-zeros",
        "C₀ = 982 on the family minimum of the scaled first height",
        &["character", "conjugate"],
        &["first_zero", "conjugate_first_zero", "method", "validated"],
    );
    rep.moduli.push(q);
    rep.param("q", q);
    rep.param("T", limit);
    rep.notes.push("scaled height = min over χ, χ̄ of the lowest nonnegative ordinate, times log q/(2π)".into());
    if doubled {
        rep.notes.push(format!("scan height doubled from {}", format_float(initial)));
    }
    let mut scaled = Vec::new();
    for ch in &chars {
        let j = ch.index();
        let c = (n - j) % n;
        let (own, other) = (firsts[j], firsts[c]);
        let lowest = match (own.gamma, other.gamma) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let stat = lowest.map(|g| g * scale);
        if let Some(s) = stat {
            scaled.push(s);
        }
        rep.push(ExperimentRow {
            modulus: Some(q),
            keys: vec![j.into(), c.into()],
            statistic: stat,
            bound: C0,
            flagged: stat.is_none() || !own.validated || stat.is_some_and(|s| s >= C0),
            extras: vec![own.gamma.into(), other.gamma.into(), own.method.into(), own.validated.into()],
        });
    }
    let total = chars.len() as f64;
    let min = scaled.iter().copied().fold(f64::INFINITY, f64::min);
    rep.summary.push(("min_scaled".into(), if scaled.is_empty() { Cell::Empty } else { min.into() }));
    for b in SURVEY_FRACTIONS {
        let frac = scaled.iter().filter(|&&s| s < b).count() as f64 / total;
        rep.summary.push((format!("fraction_below_{}", format_float(b)), frac.into()));
    }
    rep.summary.push(("histogram".into(), histogram(&scaled).into()));
    rep.summary.push(("flagged".into(), rep.flagged().into()));
    rep.runtime = start.elapsed();
    Ok(rep)
}

/// Counts per bin of width 1/4 on [0, 5), then the overflow, as "lo:count" pairs.
fn histogram(values: &[f64]) -> String {
    let bins = (5.0 / BIN) as usize;
    let mut counts = vec![0usize; bins + 1];
    for &v in values {
        let k = ((v / BIN).floor().max(0.0) as usize).min(bins);
        counts[k] += 1;
    }
    counts
        .iter()
        .enumerate()
        .map(|(k, c)| format!("{}:{c}", format_float(k as f64 * BIN)))
        .collect::<Vec<_>>()
        .join(" ")
}
