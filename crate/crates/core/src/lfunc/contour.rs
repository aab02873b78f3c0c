use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::eval::{assemble, completed_value, evaluation_point, Completed, FamilyEvaluator};
use crate::characters::{Character, GaussData};
use crate::error::{Error, Result};

/// |L| at a boundary node below which the contour is considered to touch a zero.
pub const BOUNDARY_GUARD: f64 = 1e-12;
const MAX_SPLIT_DEPTH: u32 = 40;

/// Axis-parallel rectangle [σ_lo, σ_hi] × [t_lo, t_hi].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    pub t_lo: f64,
    pub t_hi: f64,
}

impl Rect {
    pub fn new(sigma_lo: f64, sigma_hi: f64, t_lo: f64, t_hi: f64) -> Result<Self> {
        if !(sigma_lo < sigma_hi && t_lo < t_hi) {
            return Err(Error::Domain(format!("degenerate rectangle [{sigma_lo}, {sigma_hi}] × [{t_lo}, {t_hi}]")));
        }
        Ok(Rect { sigma_lo, sigma_hi, t_lo, t_hi })
    }

    /// Counter-clockwise boundary nodes, first node repeated at the end.
    pub fn boundary(&self, step: f64) -> Vec<Complex64> {
        let corners = [
            Complex64::new(self.sigma_lo, self.t_lo),
            Complex64::new(self.sigma_hi, self.t_lo),
            Complex64::new(self.sigma_hi, self.t_hi),
            Complex64::new(self.sigma_lo, self.t_hi),
        ];
        let mut nodes = Vec::new();
        for k in 0..4 {
            let a = corners[k];
            let b = corners[(k + 1) % 4];
            let mut n = ((b - a).norm() / step).ceil().max(2.0) as usize;
            // Keep a node exactly on the critical line when an edge crosses it.
            if a.im == b.im && (a.re - 0.5) * (b.re - 0.5) < 0.0 {
                n += n % 2;
            }
            nodes.extend((0..n).map(|i| a + (b - a) * (i as f64 / n as f64)));
        }
        nodes.push(corners[0]);
        nodes
    }
}

/// Node spacing that keeps the phase of Λ changing slowly along the boundary.
pub fn contour_step(q: u64, t_max: f64) -> f64 {
    let rate = 0.5 * (q as f64 * (t_max.abs() + 3.0) / (2.0 * PI)).ln();
    (PI / 8.0) / rate.max(1.0)
}

fn principal(x: f64) -> f64 {
    x - 2.0 * PI * (x / (2.0 * PI)).round()
}

/// Argument change of Λ between two nearby points.
pub fn increment(a: &Completed, b: &Completed) -> f64 {
    let d = (b.lnpre - a.lnpre).im + (b.l / a.l).arg();
    if a.left != b.left {
        principal(d)
    } else {
        d
    }
}

fn guard(c: &Completed) -> Result<()> {
    let m = c.l.norm();
    if m < BOUNDARY_GUARD {
        Err(Error::NearSingular { modulus: m })
    } else {
        Ok(())
    }
}

fn segment<F>(a: Complex64, fa: &Completed, b: Complex64, fb: &Completed, eval: &F, depth: u32, evals: &mut usize) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Completed>,
{
    let d = increment(fa, fb);
    if d.abs() <= PI / 4.0 {
        return Ok(d);
    }
    if depth >= MAX_SPLIT_DEPTH {
        return Err(Error::NearSingular { modulus: fa.l.norm().min(fb.l.norm()) });
    }
    let m = (a + b) * 0.5;
    let fm = eval(m)?;
    *evals += 1;
    guard(&fm)?;
    Ok(segment(a, fa, m, &fm, eval, depth + 1, evals)? + segment(m, &fm, b, fb, eval, depth + 1, evals)?)
}

/// Total phase change along a closed polyline with known node values.
pub fn track<F>(nodes: &[Complex64], values: &[Completed], eval: &F) -> Result<(f64, usize)>
where
    F: Fn(Complex64) -> Result<Completed>,
{
    let mut evals = 0;
    let mut total = 0.0;
    for v in values {
        guard(v)?;
    }
    for k in 0..nodes.len() - 1 {
        total += segment(nodes[k], &values[k], nodes[k + 1], &values[k + 1], eval, 0, &mut evals)?;
    }
    Ok((total, evals))
}

/// Winding number of a closed polyline's phase.
pub fn winding(total: f64) -> Result<i64> {
    let w = total / (2.0 * PI);
    let n = w.round();
    if (w - n).abs() > 1e-3 {
        return Err(Error::Numeric(format!("argument change {total} is not a multiple of 2π")));
    }
    Ok(n as i64)
}

/// Result of an argument-principle count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourCount {
    pub count: i64,
    pub rect: Rect,
    pub evaluations: usize,
}

/// Number of zeros of Λ(·, χ) inside the rectangle.
pub fn count_in_rect(character: &Character<'_>, gauss: &GaussData, rect: Rect) -> Result<ContourCount> {
    let step = contour_step(character.modulus(), rect.t_lo.abs().max(rect.t_hi.abs()));
    let nodes = rect.boundary(step);
    let eval = |s: Complex64| completed_value(s, character, gauss);
    let values = nodes.iter().map(|&s| eval(s)).collect::<Result<Vec<_>>>()?;
    let (total, extra) = track(&nodes, &values, &eval)?;
    Ok(ContourCount { count: winding(total)?, rect, evaluations: nodes.len() + extra })
}

/// Retry with edges pushed outward by 1e−6 when the boundary grazes a zero.
pub fn count_with_perturbation(character: &Character<'_>, gauss: &GaussData, rect: Rect) -> Result<ContourCount> {
    let mut r = rect;
    let mut last = None;
    for attempt in 0..=3 {
        match count_in_rect(character, gauss, r) {
            Err(e @ Error::NearSingular { .. }) => {
                last = Some(e);
                let d = 1e-6 * (attempt + 1) as f64;
                r = Rect { sigma_lo: rect.sigma_lo - d, sigma_hi: rect.sigma_hi + d, t_lo: rect.t_lo - d, t_hi: rect.t_hi + d };
            }
            other => return other,
        }
    }
    Err(last.unwrap_or(Error::Numeric("contour perturbation failed".into())))
}

/// Zero counts for every non-principal character of a family on one rectangle.
///
/// Node values come from the family transform; each character then refines
/// its own steep segments.
pub fn family_counts(ev: &FamilyEvaluator<'_>, gauss: &[Option<GaussData>], rect: Rect) -> Result<Vec<Option<Result<i64>>>> {
    let all: Vec<usize> = ev.family().non_principal().map(|c| c.index()).collect();
    let mut out: Vec<Option<Result<i64>>> = (0..ev.family().len()).map(|_| None).collect();
    for (j, r) in family_counts_for(ev, gauss, rect, &all)? {
        out[j] = Some(r);
    }
    Ok(out)
}

/// As [`family_counts`], restricted to the listed non-principal characters.
pub fn family_counts_for(
    ev: &FamilyEvaluator<'_>,
    gauss: &[Option<GaussData>],
    rect: Rect,
    indices: &[usize],
) -> Result<Vec<(usize, Result<i64>)>> {
    let family = ev.family();
    let q = family.modulus();
    let step = contour_step(q, rect.t_lo.abs().max(rect.t_hi.abs()));
    let nodes = rect.boundary(step);
    let mut chars = Vec::with_capacity(indices.len());
    for &j in indices {
        let ch = family.character(j)?;
        let g = gauss.get(j).and_then(Option::as_ref).ok_or_else(|| {
            Error::Unsupported(format!("character {j} has no Gauss data (principal or out of range)"))
        })?;
        chars.push((ch, g));
    }
    let mut table: Vec<Vec<Completed>> = vec![Vec::with_capacity(nodes.len()); chars.len()];
    for &s in &nodes {
        let (p, left) = evaluation_point(s);
        let vals = ev.values(p)?;
        for ((ch, g), row) in chars.iter().zip(table.iter_mut()) {
            row.push(assemble(vals[ch.index()], p, q, ch.parity(), g.epsilon, left));
        }
    }
    Ok(chars
        .par_iter()
        .zip(table.par_iter())
        .map(|((ch, g), values)| {
            let eval = |s: Complex64| completed_value(s, ch, g);
            (ch.index(), track(&nodes, values, &eval).and_then(|(total, _)| winding(total)))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{build_family, gauss_sum};
    use crate::lfunc::eval::family_gauss_data;

    #[test]
    fn boundary_is_closed() {
        let r = Rect::new(-1.0, 2.0, 0.0, 5.0).unwrap();
        let nodes = r.boundary(0.3);
        assert_eq!(nodes.first(), nodes.last());
        assert!(nodes.iter().any(|z| z.re == 0.5 && z.im == 0.0));
        assert!(Rect::new(1.0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn empty_and_full_counts() {
        let f = build_family(7).unwrap();
        let ch = f.character(1).unwrap();
        let g = gauss_sum(&ch).unwrap();
        let r = Rect::new(1.1, 2.0, 0.0, 30.0).unwrap();
        assert_eq!(count_in_rect(&ch, &g, r).unwrap().count, 0);
        let r = Rect::new(-1.0, 2.0, -30.0, 30.0).unwrap();
        let n = count_in_rect(&ch, &g, r).unwrap().count;
        assert!(n > 10);
    }

    #[test]
    fn family_agrees_with_single() {
        let f = build_family(11).unwrap();
        let ev = FamilyEvaluator::new(&f);
        let gauss = family_gauss_data(&f);
        let r = Rect::new(-1.0, 2.0, 0.0, 20.0).unwrap();
        let counts = family_counts(&ev, &gauss, r).unwrap();
        assert!(counts[0].is_none());
        for ch in f.non_principal() {
            let single = count_in_rect(&ch, gauss[ch.index()].as_ref().unwrap(), r).unwrap().count;
            assert_eq!(counts[ch.index()].clone().unwrap().unwrap(), single);
        }
    }
}
