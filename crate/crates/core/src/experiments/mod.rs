//! Desk-scale studies that set each bound next to its measured counterpart.

mod mollify;
mod survey;
mod sweeps;

use std::sync::Arc;
use std::time::Duration;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub use mollify::{mollifier_convergence, psi_mean_square, CONVERGENCE_BOUND};
pub use survey::{first_zero_survey, survey_height, SURVEY_FRACTIONS};
pub use sweeps::{
    approximation_experiment, average_s_experiment, density_empirics, density_preconditions, mean_square_experiment,
    DensityWindow,
};

use crate::characters::CharacterFamily;
use crate::error::{require, Result};
use crate::report::{Cell, Meta, Report};

/// Largest modulus swept exhaustively.
pub const MAX_MODULUS: u64 = 2000;

/// One measured statistic beside its bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub modulus: Option<u64>,
    pub keys: Vec<Cell>,
    pub statistic: Option<f64>,
    pub bound: f64,
    pub flagged: bool,
    pub extras: Vec<Cell>,
}

impl ExperimentRow {
    pub fn slack(&self) -> Option<f64> {
        self.statistic.map(|s| self.bound - s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub name: String,
    pub moduli: Vec<u64>,
    pub parameters: Vec<(String, Cell)>,
    pub bound_note: String,
    pub key_columns: Vec<String>,
    pub extra_columns: Vec<String>,
    pub rows: Vec<ExperimentRow>,
    pub summary: Vec<(String, Cell)>,
    pub notes: Vec<String>,
    pub seed: Option<u64>,
    /// Wall time, kept out of the serialized form so output stays byte-stable.
    pub runtime: Duration,
}

impl ExperimentReport {
    fn new(name: &str, bound_note: &str, keys: &[&str], extras: &[&str]) -> Self {
        ExperimentReport {
            name: name.into(),
            moduli: Vec::new(),
            parameters: Vec::new(),
            bound_note: bound_note.into(),
            key_columns: keys.iter().map(|s| s.to_string()).collect(),
            extra_columns: extras.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
            notes: Vec::new(),
            seed: None,
            runtime: Duration::ZERO,
        }
    }

    fn param(&mut self, name: &str, v: impl Into<Cell>) {
        self.parameters.push((name.into(), v.into()));
    }

    fn push(&mut self, row: ExperimentRow) {
        debug_assert_eq!(row.keys.len(), self.key_columns.len());
        debug_assert_eq!(row.extras.len(), self.extra_columns.len());
        self.rows.push(row);
    }

    pub fn flagged(&self) -> usize {
        self.rows.iter().filter(|r| r.flagged).count()
    }

    pub fn column(&self, name: &str) -> Option<Vec<Cell>> {
        let table = self.to_report();
        let i = table.columns.iter().position(|c| c == name)?;
        Some(table.rows.into_iter().map(|mut r| r.swap_remove(i)).collect())
    }

    pub fn to_report(&self) -> Report {
        let mut meta = Meta::new(&self.name);
        meta.seed = self.seed;
        meta.parameters = self.parameters.clone();
        meta.parameters.push(("moduli".into(), Cell::Text(join(&self.moduli))));
        meta.summary = self.summary.clone();
        meta.notes = std::iter::once(format!("bound: {}", self.bound_note)).chain(self.notes.iter().cloned()).collect();
        let mut columns = vec!["modulus".to_owned()];
        columns.extend(self.key_columns.iter().cloned());
        columns.extend(["statistic", "bound", "slack", "flagged"].map(String::from));
        columns.extend(self.extra_columns.iter().cloned());
        let mut report = Report::new(meta, columns);
        for r in &self.rows {
            let mut cells = vec![Cell::from(r.modulus)];
            cells.extend(r.keys.iter().cloned());
            cells.extend([r.statistic.into(), r.bound.into(), r.slack().into(), r.flagged.into()]);
            cells.extend(r.extras.iter().cloned());
            report.push(cells).expect("row width matches the declared columns");
        }
        report
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

fn check_modulus(q: u64) -> Result<()> {
    require(q <= MAX_MODULUS, "q ≤ 2000")
}

/// Σ_n c_n χ_j(n) for every character j at once: coefficients are bucketed by
/// the discrete log of n and pushed through the family transform.
pub(crate) struct CharacterSums<'a> {
    family: &'a CharacterFamily,
    fft: Arc<dyn Fft<f64>>,
}

impl<'a> CharacterSums<'a> {
    pub(crate) fn new(family: &'a CharacterFamily) -> Self {
        let fft = FftPlanner::new().plan_fft_inverse(family.len());
        CharacterSums { family, fft }
    }

    pub(crate) fn sum(&self, terms: impl IntoIterator<Item = (u64, Complex64)>) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.family.len()];
        for (n, c) in terms {
            if let Some(m) = self.family.discrete_log(n) {
                buf[m as usize] += c;
            }
        }
        self.fft.process(&mut buf);
        buf
    }
}

fn mean(v: impl IntoIterator<Item = f64>) -> f64 {
    let (s, n) = v.into_iter().fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        s / n as f64
    }
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
}
