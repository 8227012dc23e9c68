//! Almost periods, strong Bragg peaks, and the inequality tying the two
//! together through the autocorrelation:
//!
//! `|e^{2 pi i k.t} - 1| sqrt(I(k)) <= 2 (eta(0) - eta(t))`
//!
//! for an uncolored FLC set with autocorrelation coefficients `eta` and Bragg
//! intensities `I`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::correlations::AutocorrelationMeasure;
use crate::diffraction::DiffractionEstimate;
use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-2;

/// Support displacements `t` with `eta(0) - eta(t) < eps`.
pub fn almost_periods(ac: &AutocorrelationMeasure, eps: f64) -> Result<Vec<Vec<f64>>> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {eps}")));
    }
    let zero = ac.at_zero();
    Ok(ac
        .entries()
        .iter()
        .filter(|e| zero - e.value < eps)
        .map(|e| e.displacement.clone())
        .collect())
}

/// Wave vectors whose intensity exceeds `a`.
pub fn bragg_peaks_above(diff: &DiffractionEstimate, a: f64) -> Result<Vec<Vec<f64>>> {
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!("threshold must be positive, got {a}")));
    }
    Ok(diff
        .entries()
        .iter()
        .filter(|e| e.intensity > a)
        .map(|e| e.k.clone())
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityRow {
    pub k: Vec<f64>,
    pub t: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub rows: Vec<InequalityRow>,
    pub tolerance: f64,
}

impl InequalityReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn violations(&self) -> impl Iterator<Item = &InequalityRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn min_slack(&self) -> f64 {
        self.rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min)
    }
}

/// Evaluates both sides of the inequality on the grid `ks x ts`, rows ordered
/// by `k` then `t` as given.
///
/// Both inputs must come from the same point set with unit weights; every `k`
/// must be present in `diff`.
pub fn verify_inequality(
    ac: &AutocorrelationMeasure,
    diff: &DiffractionEstimate,
    ks: &[Vec<f64>],
    ts: &[Vec<f64>],
    tolerance: f64,
) -> Result<InequalityReport> {
    if !ac.weights().is_unit() || diff.weights().iter().any(|&w| w != 1.0) {
        return Err(Error::WeightedInput);
    }
    if ac.weights().len() != 1 || diff.weights().len() != 1 {
        return Err(Error::WeightedInput);
    }
    if diff.source().is_some_and(|s| s != ac.source()) {
        return Err(Error::MismatchedSources);
    }
    if !(tolerance >= 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be non-negative, got {tolerance}")));
    }
    let d = ac.dimension();
    let intensities = ks
        .iter()
        .map(|k| {
            if k.len() != d || ts.iter().any(|t| t.len() != d) {
                return Err(Error::InvalidParameter("dimension mismatch in k or t".into()));
            }
            diff.intensity_at(k)
                .ok_or_else(|| Error::InvalidParameter(format!("no intensity at k = {k:?}")))
        })
        .collect::<Result<Vec<f64>>>()?;
    let eta0 = ac.at_zero();
    let rows = ks
        .par_iter()
        .zip(intensities)
        .flat_map_iter(|(k, intensity)| {
            ts.iter().map(move |t| {
                let phase: f64 = k.iter().zip(t).map(|(a, b)| a * b).sum();
                let lhs = (Complex64::from_polar(1.0, 2.0 * PI * phase) - 1.0).norm()
                    * intensity.max(0.0).sqrt();
                let rhs = 2.0 * (eta0 - ac.value_at(t));
                let slack = rhs - lhs;
                InequalityRow {
                    k: k.clone(),
                    t: t.clone(),
                    lhs,
                    rhs,
                    slack,
                    pass: slack >= -tolerance,
                }
            })
        })
        .collect();
    Ok(InequalityReport { rows, tolerance })
}
