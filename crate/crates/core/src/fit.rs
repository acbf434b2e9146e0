//! Extraction of the two-body C₆ coefficient from tabulated decay widths.
//!
//! The model is Γ = C₆x with x = ρ⁻⁶, a straight line through the origin.
//! Ab initio widths carry relative error bars, so each row is weighted by
//! 1/σᵢ² with σᵢ ∝ xᵢ. The weighted least-squares solution is then the mean
//! of Γᵢρᵢ⁶. Unweighted least squares would let the two or three shortest
//! distances decide the answer, since x spans orders of magnitude.
//!
//! Only rows with ρ ≥ `rho_min_fit` enter, so short-range data where the
//! mediator or overlap effects matter can be excluded.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{IcdError, Result};
use crate::rates::{CoefficientSource, RateCoefficients};
use crate::units::c6_from_ev_a6;

pub const ESTIMATOR: &str = "wls-through-origin-in-rho^-6, weights rho^12";

/// Widths (eV) against donor–acceptor distance (Å).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthDataset {
    pub rows: Vec<(f64, f64)>,
    pub source: String,
}

#[derive(Debug, Deserialize)]
struct WidthRecord {
    #[serde(rename = "rho_AA")]
    rho: f64,
    #[serde(rename = "width_eV")]
    width: f64,
}

impl WidthDataset {
    pub fn new(rows: Vec<(f64, f64)>, source: impl Into<String>) -> Result<Self> {
        for (i, &(rho, w)) in rows.iter().enumerate() {
            if !(rho.is_finite() && rho > 0.0) {
                return Err(IcdError::Format(format!("row {i}: distance {rho} must be positive")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(IcdError::Format(format!("row {i}: width {w} must be positive")));
            }
            if i > 0 && rho <= rows[i - 1].0 {
                return Err(IcdError::Format(format!("row {i}: distances must be strictly increasing")));
            }
        }
        Ok(WidthDataset { rows, source: source.into() })
    }

    /// Reads the two-column `rho_AA,width_eV` CSV format.
    pub fn read_csv<R: Read>(input: R, source: impl Into<String>) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(input);
        let headers = reader.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["rho_AA", "width_eV"] {
            return Err(IcdError::Format(format!(
                "expected header `rho_AA,width_eV`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut rows = Vec::new();
        for rec in reader.deserialize::<WidthRecord>() {
            let rec = rec?;
            rows.push((rec.rho, rec.width));
        }
        Self::new(rows, source)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_csv(file, path.display().to_string())
    }

    pub fn to_csv_string(&self) -> String {
        let mut s = String::from("rho_AA,width_eV\n");
        for (rho, w) in &self.rows {
            s.push_str(&format!("{rho:e},{w:e}\n"));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct C6Fit {
    /// SI coefficients; C₂ is left unknown.
    pub coefficients: RateCoefficients,
    pub c6_ev_a6: f64,
    /// Root-mean-square residual of the fitted rows (eV).
    pub rms_residual_ev: f64,
    pub n_used: usize,
    pub rho_min_used: f64,
    pub rho_max_used: f64,
    pub rho_min_fit: f64,
    pub estimator: String,
    pub source: String,
}

pub fn fit_c6(data: &WidthDataset, rho_min_fit: f64) -> Result<C6Fit> {
    let selected: Vec<(f64, f64)> = data.rows.iter().copied().filter(|&(rho, _)| rho >= rho_min_fit).collect();
    if selected.len() < 2 {
        return Err(IcdError::InvalidRequest(format!(
            "C6 fit needs at least 2 rows with rho >= {rho_min_fit} A, found {}",
            selected.len()
        )));
    }
    let c6 = selected.iter().map(|&(rho, w)| w * rho.powi(6)).sum::<f64>() / selected.len() as f64;
    if !(c6 > 0.0) {
        return Err(IcdError::InvalidRequest(format!("fitted C6 = {c6:e} is not positive")));
    }
    let rss: f64 = selected.iter().map(|&(rho, w)| (w - c6 * rho.powi(-6)).powi(2)).sum();
    Ok(C6Fit {
        coefficients: RateCoefficients {
            c6: c6_from_ev_a6(c6),
            c2: None,
            source: CoefficientSource::Fitted,
        },
        c6_ev_a6: c6,
        rms_residual_ev: (rss / selected.len() as f64).sqrt(),
        n_used: selected.len(),
        rho_min_used: selected[0].0,
        rho_max_used: selected[selected.len() - 1].0,
        rho_min_fit,
        estimator: ESTIMATOR.to_string(),
        source: data.source.clone(),
    })
}
