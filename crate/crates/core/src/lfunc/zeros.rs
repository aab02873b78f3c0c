use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::contour::{count_with_perturbation, Rect};
use super::eval::rotated_value;
use crate::characters::{gauss_sum, Character, GaussData};
use crate::error::{require, Error, Result};

/// Bracket width at which a critical zero counts as located.
pub const ZERO_WIDTH: f64 = 1e-10;
/// Largest |Im Z| tolerated on the scan grid.
pub const REALITY_TOLERANCE: f64 = 1e-9;
const REFINEMENT_ROUNDS: u32 = 3;
const SUSPECT_SIDE: f64 = 1e-4;
const MAX_HEIGHT: f64 = 100.0;

/// A zero β + iγ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroPoint {
    pub beta: f64,
    pub gamma: f64,
}

/// A small box suspected of holding a zero off the critical line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OffCriticalBox {
    pub beta: f64,
    pub gamma: f64,
    pub half_side: f64,
    pub count: i64,
}

/// Critical zeros of one L-function in a window, with their validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroList {
    pub modulus: u64,
    pub character: usize,
    pub t_lo: f64,
    pub t_hi: f64,
    pub ordinates: Vec<f64>,
    pub width: f64,
    pub contour_count: i64,
    pub discrepancy: i64,
    pub validated: bool,
    pub rounds: u32,
    pub max_imaginary: f64,
    pub suspects: Vec<OffCriticalBox>,
}

impl ZeroList {
    pub fn points(&self) -> Vec<ZeroPoint> {
        self.ordinates.iter().map(|&gamma| ZeroPoint { beta: 0.5, gamma }).collect()
    }

    /// Number of ordinates in [lo, hi].
    pub fn count_between(&self, lo: f64, hi: f64) -> usize {
        self.ordinates.iter().filter(|&&g| g >= lo && g <= hi).count()
    }

    /// Lowest ordinate with γ ≥ 0, if any.
    pub fn first_nonnegative(&self) -> Option<f64> {
        self.ordinates.iter().copied().find(|&g| g >= 0.0)
    }

    /// Distance from t to the closest ordinate.
    pub fn nearest(&self, t: f64) -> Option<f64> {
        self.ordinates.iter().map(|g| (g - t).abs()).min_by(f64::total_cmp)
    }
}

/// Grid spacing used by the first scan round.
pub fn base_step(q: u64) -> f64 {
    2.0 * PI / (q as f64).ln() / 20.0
}

/// Shrinks a sign-change bracket of f to width ≤ `width` (Illinois variant of regula falsi).
pub fn refine_root<F>(f: F, mut a: f64, mut fa: f64, mut b: f64, mut fb: f64, width: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut side = 0i8;
    for it in 0..400 {
        if (b - a).abs() <= width {
            break;
        }
        let x = if it % 8 == 7 {
            0.5 * (a + b)
        } else {
            let x = (a * fb - b * fa) / (fb - fa);
            if x.is_finite() && x > a.min(b) && x < a.max(b) {
                x
            } else {
                0.5 * (a + b)
            }
        };
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok((x, 0.0));
        }
        if (fx > 0.0) == (fb > 0.0) {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        } else {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        }
    }
    let w = (b - a).abs();
    if w > width {
        return Err(Error::Numeric(format!("root bracket stalled at width {w:e}")));
    }
    Ok((0.5 * (a + b), w))
}

struct Scan {
    ordinates: Vec<f64>,
    width: f64,
    max_imaginary: f64,
}

fn scan(character: &Character<'_>, gauss: &GaussData, lo: f64, hi: f64, step: f64) -> Result<Scan> {
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    let grid: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    let mut values = Vec::with_capacity(grid.len());
    let mut max_imaginary = 0f64;
    for &t in &grid {
        let z = rotated_value(t, character, gauss)?;
        max_imaginary = max_imaginary.max(z.im.abs());
        values.push(z.re);
    }
    let re_z = |t: f64| rotated_value(t, character, gauss).map(|z| z.re);
    let mut ordinates = Vec::new();
    let mut width = 0f64;
    for i in 0..grid.len() {
        if values[i] == 0.0 {
            ordinates.push(grid[i]);
            continue;
        }
        if i + 1 < grid.len() && values[i] * values[i + 1] < 0.0 {
            let (t, w) = refine_root(re_z, grid[i], values[i], grid[i + 1], values[i + 1], ZERO_WIDTH)?;
            ordinates.push(t);
            width = width.max(w);
        }
    }
    Ok(Scan { ordinates, width, max_imaginary })
}

fn locate_suspects(character: &Character<'_>, gauss: &GaussData, rect: Rect, out: &mut Vec<OffCriticalBox>) -> Result<()> {
    let count = count_with_perturbation(character, gauss, rect)?.count;
    if count == 0 {
        return Ok(());
    }
    let ds = rect.sigma_hi - rect.sigma_lo;
    let dt = rect.t_hi - rect.t_lo;
    if ds.max(dt) <= SUSPECT_SIDE {
        out.push(OffCriticalBox {
            beta: 0.5 * (rect.sigma_lo + rect.sigma_hi),
            gamma: 0.5 * (rect.t_lo + rect.t_hi),
            half_side: 0.5 * ds.max(dt),
            count,
        });
        return Ok(());
    }
    let sm = if ds > SUSPECT_SIDE { 0.5 * (rect.sigma_lo + rect.sigma_hi) } else { rect.sigma_hi };
    let tm = if dt > SUSPECT_SIDE { 0.5 * (rect.t_lo + rect.t_hi) } else { rect.t_hi };
    for (s0, s1) in [(rect.sigma_lo, sm), (sm, rect.sigma_hi)] {
        for (t0, t1) in [(rect.t_lo, tm), (tm, rect.t_hi)] {
            if s1 > s0 && t1 > t0 {
                locate_suspects(character, gauss, Rect { sigma_lo: s0, sigma_hi: s1, t_lo: t0, t_hi: t1 }, out)?;
            }
        }
    }
    Ok(())
}

/// Critical zeros with 0 ≤ γ ≤ T.
pub fn critical_zeros(character: &Character<'_>, t_max: f64) -> Result<ZeroList> {
    require(t_max > 0.0, "T > 0")?;
    critical_zeros_window(character, 0.0, t_max)
}

/// Critical zeros with t_lo ≤ γ ≤ t_hi, validated by the argument principle on
/// [−1, 2] × [t_lo, t_hi].
pub fn critical_zeros_window(character: &Character<'_>, t_lo: f64, t_hi: f64) -> Result<ZeroList> {
    if character.is_principal() {
        return Err(Error::Unsupported("zero scans of the principal character".into()));
    }
    require(t_lo < t_hi, "t_lo < t_hi")?;
    require(t_lo.abs() <= MAX_HEIGHT && t_hi.abs() <= MAX_HEIGHT, "|t| ≤ 100")?;
    let gauss = gauss_sum(character)?;
    let counted = count_with_perturbation(character, &gauss, Rect::new(-1.0, 2.0, t_lo, t_hi)?)?;
    let (lo, hi) = (counted.rect.t_lo, counted.rect.t_hi);
    let mut step = base_step(character.modulus());
    let mut round = 0;
    loop {
        let s = scan(character, &gauss, lo, hi, step)?;
        let discrepancy = counted.count - s.ordinates.len() as i64;
        if discrepancy == 0 || round == REFINEMENT_ROUNDS {
            let mut suspects = Vec::new();
            if discrepancy != 0 {
                let right = Rect::new(0.5 + 1e-3, 2.0, lo, hi)?;
                locate_suspects(character, &gauss, right, &mut suspects)?;
            }
            return Ok(ZeroList {
                modulus: character.modulus(),
                character: character.index(),
                t_lo: lo,
                t_hi: hi,
                validated: discrepancy == 0 && s.max_imaginary < REALITY_TOLERANCE,
                ordinates: s.ordinates,
                width: s.width,
                contour_count: counted.count,
                discrepancy,
                rounds: round,
                max_imaginary: s.max_imaginary,
                suspects,
            });
        }
        round += 1;
        step /= 4.0;
    }
}

/// The rectangle holding every zero with β ≥ σ₀ and t₁ ≤ γ ≤ t₂.
pub fn region_rect(sigma0: f64, t1: f64, t2: f64) -> Result<Rect> {
    require((-1.0..50.0).contains(&sigma0), "−1 ≤ σ₀ < 50")?;
    require(t1 < t2, "t₁ < t₂")?;
    require(t1.abs() <= MAX_HEIGHT && t2.abs() <= MAX_HEIGHT, "|t| ≤ 100")?;
    Rect::new(sigma0, (sigma0 + 1.0).max(2.0), t1, t2)
}

/// Zeros with β ≥ σ₀ and t₁ ≤ γ ≤ t₂, counted on [σ₀, max(2, σ₀+1)] × [t₁, t₂].
pub fn zero_count_region(character: &Character<'_>, sigma0: f64, t1: f64, t2: f64) -> Result<i64> {
    if character.is_principal() {
        return Err(Error::Unsupported("zero counts of the principal character".into()));
    }
    let rect = region_rect(sigma0, t1, t2)?;
    let gauss = gauss_sum(character)?;
    Ok(count_with_perturbation(character, &gauss, rect)?.count)
}

/// Z(t) on a caller-supplied grid, for plotting and diagnostics.
pub fn rotated_samples(character: &Character<'_>, ts: &[f64]) -> Result<Vec<Complex64>> {
    let g = gauss_sum(character)?;
    ts.iter().map(|&t| rotated_value(t, character, &g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::build_family;
    use rand::{Rng, SeedableRng};

    #[test]
    fn first_zero_mod_three() {
        let f = build_family(3).unwrap();
        let z = critical_zeros(&f.character(1).unwrap(), 12.0).unwrap();
        assert!(z.validated, "{z:?}");
        let g = z.first_nonnegative().unwrap();
        assert!(g > 8.03 && g < 8.05, "{g}");
        assert!((g - 8.039_737_155_681_4).abs() < 1e-9, "{g}");
        assert!(z.width <= 1e-9);
    }

    #[test]
    fn rotated_function_is_real() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for q in [5u64, 7, 11] {
            let f = build_family(q).unwrap();
            for ch in f.non_principal() {
                let ts: Vec<f64> = (0..100).map(|_| rng.gen_range(-100.0..100.0)).collect();
                for z in rotated_samples(&ch, &ts).unwrap() {
                    assert!(z.im.abs() < 1e-9, "{q} {z}");
                }
            }
        }
    }

    #[test]
    fn count_mod_seven() {
        let f = build_family(7).unwrap();
        for ch in f.non_principal() {
            let z = critical_zeros(&ch, 50.0).unwrap();
            assert!(z.validated);
            assert_eq!(z.ordinates.len() as i64, z.contour_count);
            assert!(z.ordinates.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn region_counts() {
        let f = build_family(11).unwrap();
        let ch = f.character(1).unwrap();
        assert_eq!(zero_count_region(&ch, 0.6, 0.0, 30.0).unwrap(), 0);
        let z = critical_zeros(&ch, 30.0).unwrap();
        let g = z.ordinates[0];
        let next = z.ordinates[1];
        let n = zero_count_region(&ch, 0.5 - 1e-3, 0.5 * g, 0.5 * (g + next)).unwrap();
        assert_eq!(n, 1);
        assert_eq!(zero_count_region(&ch, 0.5 - 1e-3, g + 0.1, g + 0.1 + 1e-6).unwrap(), 0);
    }

    #[test]
    fn reflection_pairs() {
        let f = build_family(13).unwrap();
        let ch = f.character(1).unwrap();
        let a = critical_zeros(&ch, 30.0).unwrap();
        let b = critical_zeros_window(&ch.conjugate(), -30.0, 0.0).unwrap();
        let mut reflected: Vec<f64> = b.ordinates.iter().map(|g| -g).collect();
        reflected.sort_by(f64::total_cmp);
        assert_eq!(a.ordinates.len(), reflected.len());
        for (x, y) in a.ordinates.iter().zip(&reflected) {
            assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn refine_root_brackets() {
        let (x, w) = refine_root(|x| Ok(x * x - 2.0), 0.0, -2.0, 2.0, 2.0, 1e-12).unwrap();
        assert!((x - 2f64.sqrt()).abs() < 1e-12 && w <= 1e-12);
        let (x, _) = refine_root(|x| Ok((x - 1.0).powi(3)), 0.0, -1.0, 3.0, 8.0, 1e-12).unwrap();
        assert!((x - 1.0).abs() < 1e-12);
    }
}
