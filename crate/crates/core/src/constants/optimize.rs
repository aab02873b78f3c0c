use rayon::prelude::*;

use super::{big_d_with_h, h_of_k, DParams, HEADLINE_KAPPA};
use crate::error::Result;
use crate::real::Real;

/// Golden-section search on [a, b] to the working precision of `R`.
pub fn golden_section<R: Real>(f: impl Fn(&R) -> R, mut a: R, mut b: R) -> (R, R) {
    let invphi = (a.lit(5.0).sqrt() - a.lit(1.0)) / a.lit(2.0);
    let tol = a.epsilon().sqrt() * (1.0 + b.to_f64().abs());
    let mut c = b.clone() - invphi.clone() * (b.clone() - a.clone());
    let mut d = a.clone() + invphi.clone() * (b.clone() - a.clone());
    let mut fc = f(&c);
    let mut fd = f(&d);
    for _ in 0..400 {
        if (b.clone() - a.clone()).to_f64() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c.clone();
            fd = fc;
            c = b.clone() - invphi.clone() * (b.clone() - a.clone());
            fc = f(&c);
        } else {
            a = c;
            c = d.clone();
            fc = fd;
            d = a.clone() + invphi.clone() * (b.clone() - a.clone());
            fd = f(&d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Minimizer found by [`minimize_scalar`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarMinimum {
    pub x: f64,
    pub value: f64,
    /// The 64-point scan saw more than one local minimum.
    pub multimodal: bool,
}

/// Scan 64 points, then golden-section refine around the best one.
///
/// When the scan shows several local minima each is refined and the best
/// result is returned with `multimodal` set.
pub fn minimize_scalar(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> ScalarMinimum {
    assert!(lo < hi, "empty bracket");
    let n = 64;
    let h = (hi - lo) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| lo + h * i as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let minima: Vec<usize> = (0..n)
        .filter(|&i| (i == 0 || ys[i] <= ys[i - 1]) && (i == n - 1 || ys[i] <= ys[i + 1]))
        .collect();
    let refine = |i: usize| {
        let mut a = xs[i.saturating_sub(1)];
        let mut b = xs[(i + 1).min(n - 1)];
        let invphi = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = b - invphi * (b - a);
        let mut d = a + invphi * (b - a);
        let (mut fc, mut fd) = (f(c), f(d));
        while b - a > tol {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - invphi * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + invphi * (b - a);
                fd = f(d);
            }
        }
        let x = 0.5 * (a + b);
        let candidates = [(x, f(x)), (xs[i], ys[i])];
        candidates.into_iter().min_by(|p, q| p.1.total_cmp(&q.1)).unwrap()
    };
    let best = minima
        .iter()
        .map(|&i| refine(i))
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .expect("at least one scan minimum");
    ScalarMinimum { x: best.0, value: best.1, multimodal: minima.len() > 1 }
}

/// (1+u)/sin(πu/(2(1+u))) scaled to the density leading coefficient.
pub fn leading_density_coefficient(u: f64) -> f64 {
    use std::f64::consts::{E, PI};
    6.20 * E * (1.0 + u) / (PI * PI * (PI * u / (2.0 * (1.0 + u))).sin())
}

/// The optimal window ratio 2a/τ, about 0.82579.
pub fn window_ratio() -> ScalarMinimum {
    minimize_scalar(leading_density_coefficient, 0.05, 1.0, 1e-12)
}

/// Result of the (η, δ) search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DOptimum {
    pub eta: f64,
    pub delta: f64,
    /// √D at the optimum.
    pub value: f64,
    pub evaluations: usize,
}

/// Grid search over (η, δ) ∈ [1, 3] × (0, 2/(8k+3)) for the smallest √D, then
/// Nelder–Mead refinement. κ is fixed at 0.1249.
pub fn optimize_d_parameters(k: u32, eps: f64) -> Result<DOptimum> {
    let (h, _) = h_of_k(k, &1.0f64)?;
    let kappa = HEADLINE_KAPPA;
    let dmax = 2.0 / (8 * k + 3) as f64;
    let root = |eta: f64, delta: f64| -> f64 {
        let p = DParams { eta, delta, kappa, k, eps };
        big_d_with_h(&p, &h).map(f64::sqrt).unwrap_or(f64::INFINITY)
    };
    DParams { eta: 1.0, delta: dmax / 2.0, kappa, k, eps }.validate()?;
    let (ne, nd) = (100, 50);
    let cells: Vec<(f64, f64, f64)> = (0..ne * nd)
        .into_par_iter()
        .map(|i| {
            let eta = 1.0 + 2.0 * (i / nd) as f64 / (ne - 1) as f64;
            let delta = dmax * ((i % nd) as f64 + 0.5) / nd as f64;
            (eta, delta, root(eta, delta))
        })
        .collect();
    let start = cells
        .iter()
        .copied()
        .min_by(|a, b| a.2.total_cmp(&b.2))
        .expect("non-empty grid");
    let mut evaluations = cells.len();
    let f = |p: [f64; 2]| {
        if p[0] < 1.0 || p[1] <= 0.0 || p[1] >= dmax {
            f64::INFINITY
        } else {
            root(p[0], p[1])
        }
    };
    let (best, value, used) = nelder_mead(f, [start.0, start.1], [2.0 / 99.0, dmax / 50.0], 1e-12);
    evaluations += used;
    Ok(DOptimum { eta: best[0], delta: best[1], value, evaluations })
}

fn nelder_mead(f: impl Fn([f64; 2]) -> f64, x0: [f64; 2], step: [f64; 2], ftol: f64) -> ([f64; 2], f64, usize) {
    let mut simplex = [x0, [x0[0] + step[0], x0[1]], [x0[0], x0[1] + step[1]]];
    let mut vals = simplex.map(&f);
    let mut evals = 3;
    for _ in 0..2000 {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        simplex = order.map(|i| simplex[i]);
        vals = order.map(|i| vals[i]);
        let spread = simplex.iter().skip(1).map(|p| (p[0] - simplex[0][0]).abs().max((p[1] - simplex[0][1]).abs())).fold(0.0, f64::max);
        if (vals[2] - vals[0]).abs() <= ftol * vals[0].abs() && spread < 1e-9 {
            break;
        }
        let c = [(simplex[0][0] + simplex[1][0]) / 2.0, (simplex[0][1] + simplex[1][1]) / 2.0];
        let at = |t: f64| [c[0] + t * (simplex[2][0] - c[0]), c[1] + t * (simplex[2][1] - c[1])];
        let xr = at(-1.0);
        let fr = f(xr);
        evals += 1;
        if fr < vals[0] {
            let xe = at(-2.0);
            let fe = f(xe);
            evals += 1;
            (simplex[2], vals[2]) = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < vals[1] {
            (simplex[2], vals[2]) = (xr, fr);
        } else {
            let xc = if fr < vals[2] { at(-0.5) } else { at(0.5) };
            let fc = f(xc);
            evals += 1;
            if fc < vals[2].min(fr) {
                (simplex[2], vals[2]) = (xc, fc);
            } else {
                for i in 1..3 {
                    simplex[i] = [
                        simplex[0][0] + 0.5 * (simplex[i][0] - simplex[0][0]),
                        simplex[0][1] + 0.5 * (simplex[i][1] - simplex[0][1]),
                    ];
                    vals[i] = f(simplex[i]);
                    evals += 1;
                }
            }
        }
    }
    let i = (0..3).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    (simplex[i], vals[i], evals)
}
