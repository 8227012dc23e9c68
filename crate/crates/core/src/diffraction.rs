//! Diffraction intensities: normalized exponential sums, Cesaro means of the
//! autocorrelation, and closed forms for the model and substitution systems.
//!
//! Transforms use the kernel `e^{-2 pi i y x}`; the exponential sum over the
//! points uses `e^{+2 pi i k x}`. Only squared moduli are compared, so the two
//! conventions never meet in a result.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlations::AutocorrelationMeasure;
use crate::error::{Error, Result};
use crate::generators::CutProjectScheme;
use crate::pointset::{max_norm_dist, ColoredPointSet, WeightSystem, Window};
use crate::sum::{ComplexKahanSum, KahanSum};
use crate::MATCH_TOLERANCE;

/// Fourier estimates below zero but above this are rounding and get clamped.
pub const NEGATIVE_CLAMP: f64 = 1e-9;

/// Closed-form intensities below this count as extinct.
pub const EXTINCTION_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExponentialSum,
    FourierOfAutocorrelation,
    ClosedForm,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ExponentialSum => "exponential-sum",
            Method::FourierOfAutocorrelation => "fourier-of-autocorrelation",
            Method::ClosedForm => "closed-form",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffractionEntry {
    pub k: Vec<f64>,
    pub intensity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffractionEstimate {
    entries: Vec<DiffractionEntry>,
    method: Method,
    /// Window edge for exponential sums, lag cutoff for Fourier estimates.
    scale_used: f64,
    weights: Vec<f64>,
    #[serde(skip)]
    source: Option<u64>,
}

impl DiffractionEstimate {
    pub fn new(
        entries: Vec<DiffractionEntry>,
        method: Method,
        scale_used: f64,
        weights: &WeightSystem,
        source: Option<u64>,
    ) -> Self {
        Self {
            entries,
            method,
            scale_used,
            weights: weights.weights().to_vec(),
            source,
        }
    }

    pub fn entries(&self) -> &[DiffractionEntry] {
        &self.entries
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn scale_used(&self) -> f64 {
        self.scale_used
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Fingerprint of the point set the estimate came from, if any.
    pub fn source(&self) -> Option<u64> {
        self.source
    }

    pub fn intensity_at(&self, k: &[f64]) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| max_norm_dist(&e.k, k) <= MATCH_TOLERANCE)
            .map(|e| e.intensity)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `(1 / vol) * sum over points of w(color) e^{2 pi i k.x}` over the whole
/// window. Its squared modulus estimates the Bragg intensity at `k`.
pub fn bombieri_taylor_amplitude(
    points: &ColoredPointSet,
    w: &WeightSystem,
    k: &[f64],
) -> Result<Complex64> {
    w.check(points.num_colors())?;
    if k.len() != points.dimension() {
        return Err(Error::InvalidParameter(format!(
            "wave vector has dimension {}, points have {}",
            k.len(),
            points.dimension()
        )));
    }
    let volume = points.window().volume();
    if !(volume > 0.0) {
        return Err(Error::InvalidParameter("window has zero volume".into()));
    }
    let mut sum = ComplexKahanSum::new();
    for i in 0..points.len() {
        let weight = w.weight(points.color(i));
        if weight != 0.0 {
            let phase = 2.0 * PI * dot(k, points.position(i));
            sum.add(Complex64::from_polar(weight, phase));
        }
    }
    Ok(sum.value() / volume)
}

/// Squared exponential-sum amplitudes at every wave vector in `ks`.
pub fn exponential_sum_diffraction(
    points: &ColoredPointSet,
    w: &WeightSystem,
    ks: &[Vec<f64>],
) -> Result<DiffractionEstimate> {
    let entries = ks
        .par_iter()
        .map(|k| {
            let a = bombieri_taylor_amplitude(points, w, k)?;
            Ok(DiffractionEntry {
                k: k.clone(),
                intensity: a.norm_sqr(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiffractionEstimate::new(
        entries,
        Method::ExponentialSum,
        points.window().edge(),
        w,
        Some(points.fingerprint()),
    ))
}

/// Mean squared amplitude over `samples` sub-windows of half the edge placed
/// uniformly at random inside the realization, a stand-in for the square mean
/// over translates.
pub fn square_mean_intensity(
    points: &ColoredPointSet,
    w: &WeightSystem,
    k: &[f64],
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let window = points.window();
    let edge = window.edge() / 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lowers: Vec<Vec<f64>> = (0..samples)
        .map(|_| window.lower().iter().map(|lo| lo + rng.gen::<f64>() * edge).collect())
        .collect();
    let values = lowers
        .into_par_iter()
        .map(|lower| {
            let sub = points.restricted_to(&Window::from_lower(lower, edge)?)?;
            Ok(bombieri_taylor_amplitude(&sub, w, k)?.norm_sqr())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.into_iter().collect::<KahanSum>().value() / samples as f64)
}

/// Upper bound on the number of distinct displacements an FLC set with
/// separation `r` can show within `lag` in dimension `d`; more than this
/// is taken to mean the support is effectively dense.
fn flc_cluster_bound(lag: f64, r: f64, d: usize) -> f64 {
    64.0 * (2.0 * lag / r + 1.0).powi(d as i32)
}

/// Pure-point intensity at `k` extracted from the autocorrelation by the
/// Cesaro (Fejer) mean of its Fourier partial sums up to `T = max_lag`.
///
/// For integer-supported autocorrelations this is
/// `(1/(T+1)) * sum_{|t| <= T} (1 - |t|/(T+1)) eta(t) e^{-2 pi i k t}`; for
/// general support the weights are `prod_j (1 - |t_j|/T)` and the normalization
/// is `T^d`. Both equal the Bragg intensity in the limit and are non-negative
/// for a positive definite autocorrelation.
pub fn bragg_from_autocorrelation(ac: &AutocorrelationMeasure, k: &[f64]) -> Result<f64> {
    let d = ac.dimension();
    if k.len() != d {
        return Err(Error::InvalidParameter("wave vector dimension mismatch".into()));
    }
    let clusters = ac.entries().len();
    let bound = flc_cluster_bound(ac.max_lag(), ac.separation(), d);
    if clusters as f64 > bound {
        return Err(Error::NonFiniteLocalComplexity {
            clusters,
            bound: bound as usize,
        });
    }
    let integer = ac.has_integer_support()
        || (d == 1
            && ac
                .entries()
                .iter()
                .all(|e| (e.displacement[0] - e.displacement[0].round()).abs() <= MATCH_TOLERANCE));
    let (cutoff, norm) = if integer {
        let t = ac.max_lag().floor() + 1.0;
        (t, t)
    } else {
        let t = ac.max_lag();
        (t, t.powi(d as i32))
    };
    if !(cutoff > 0.0) {
        return Err(Error::InvalidParameter("autocorrelation has zero lag range".into()));
    }
    let mut sum = KahanSum::new();
    for e in ac.entries() {
        let taper: f64 = e
            .displacement
            .iter()
            .map(|t| (1.0 - t.abs() / cutoff).max(0.0))
            .product();
        if taper > 0.0 {
            sum.add(taper * e.value * (2.0 * PI * dot(k, &e.displacement)).cos());
        }
    }
    let value = sum.value() / norm;
    if value < -NEGATIVE_CLAMP {
        return Err(Error::NegativeIntensity {
            k: k.to_vec(),
            value,
        });
    }
    Ok(value.max(0.0))
}

pub fn autocorrelation_diffraction(
    ac: &AutocorrelationMeasure,
    ks: &[Vec<f64>],
) -> Result<DiffractionEstimate> {
    let entries = ks
        .par_iter()
        .map(|k| {
            Ok(DiffractionEntry {
                k: k.clone(),
                intensity: bragg_from_autocorrelation(ac, k)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiffractionEstimate::new(
        entries,
        Method::FourierOfAutocorrelation,
        ac.max_lag(),
        ac.weights(),
        Some(ac.source()),
    ))
}

/// `integral over [lo, hi) of e^{-2 pi i y x} dx`.
pub fn window_ft(lo: f64, hi: f64, y: f64) -> Complex64 {
    if y.abs() < 1e-12 {
        return Complex64::new(hi - lo, 0.0);
    }
    let e = |x: f64| Complex64::from_polar(1.0, -2.0 * PI * y * x);
    (e(lo) - e(hi)) / Complex64::new(0.0, 2.0 * PI * y)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BraggPeak {
    pub indices: (i64, i64),
    /// Physical position of the peak.
    pub k: f64,
    /// Internal coordinate of the dual lattice vector.
    pub internal: f64,
    pub intensity: f64,
}

/// Closed-form Bragg intensity of the model set at the dual lattice vector
/// with integer coordinates `(p, q)`.
///
/// The intensity is `|1_{sW}^(k_int)|^2 / covol^2`, which for a unit-covolume
/// lattice is `s^2 |1_W^(s k_int)|^2`; the covolume factor makes the value at
/// the origin equal to the squared density.
pub fn model_set_bragg(scheme: &CutProjectScheme, (p, q): (i64, i64)) -> BraggPeak {
    let (k, internal) = scheme.dual_point(p, q);
    let (lo, hi) = scheme.scaled_window();
    let covol = scheme.covolume();
    BraggPeak {
        indices: (p, q),
        k,
        internal,
        intensity: window_ft(lo, hi, internal).norm_sqr() / (covol * covol),
    }
}

/// Dual lattice peaks with `|p|, |q| <= max_index` and `lo < k <= hi`,
/// strongest first.
pub fn model_set_peaks(
    scheme: &CutProjectScheme,
    max_index: i64,
    (lo, hi): (f64, f64),
) -> Vec<BraggPeak> {
    let mut peaks: Vec<BraggPeak> = (-max_index..=max_index)
        .flat_map(|p| (-max_index..=max_index).map(move |q| (p, q)))
        .map(|pq| model_set_bragg(scheme, pq))
        .filter(|b| b.k > lo && b.k <= hi)
        .collect();
    peaks.sort_by(|a, b| {
        b.intensity
            .total_cmp(&a.intensity)
            .then(a.k.total_cmp(&b.k))
    });
    peaks
}

/// Window scales at which the peak `(p, q)` goes extinct: the zeros of the
/// window transform, `s = j / (len(W) |k_int|)` for `j = 1..=count`.
pub fn extinction_scales(scheme: &CutProjectScheme, (p, q): (i64, i64), count: usize) -> Vec<f64> {
    let (_, internal) = scheme.dual_point(p, q);
    let (lo, hi) = scheme.window();
    if internal.abs() < 1e-12 {
        return Vec::new();
    }
    (1..=count)
        .map(|j| j as f64 / ((hi - lo) * internal.abs()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtinctionRow {
    pub indices: (i64, i64),
    pub k: f64,
    pub scale: f64,
    pub intensity: f64,
    pub extinct: bool,
}

/// Closed-form intensities over a grid of dual vectors and window scales.
/// Scales must be positive; `s = 0` has no model set.
pub fn extinction_scan(
    scheme: &CutProjectScheme,
    indices: &[(i64, i64)],
    scales: &[f64],
) -> Result<Vec<ExtinctionRow>> {
    let mut rows = Vec::with_capacity(indices.len() * scales.len());
    for &pq in indices {
        for &s in scales {
            let peak = model_set_bragg(&scheme.with_scale(s)?, pq);
            rows.push(ExtinctionRow {
                indices: pq,
                k: peak.k,
                scale: s,
                intensity: peak.intensity,
                extinct: peak.intensity < EXTINCTION_THRESHOLD,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KnownSystem {
    ThueMorse,
    RudinShapiro,
    Periodic4,
}

impl FromStr for KnownSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thue_morse" | "thue-morse" | "tm" => Ok(Self::ThueMorse),
            "rudin_shapiro" | "rudin-shapiro" | "rs" => Ok(Self::RudinShapiro),
            "periodic4" => Ok(Self::Periodic4),
            other => Err(Error::InvalidParameter(format!("unknown system tag {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContinuousComponent {
    None,
    Singular,
    AbsolutelyContinuous,
}

impl fmt::Display for ContinuousComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContinuousComponent::None => "none",
            ContinuousComponent::Singular => "singular",
            ContinuousComponent::AbsolutelyContinuous => "absolutely-continuous",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedForm {
    pub pure_point: f64,
    pub continuous: ContinuousComponent,
}

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() <= MATCH_TOLERANCE
}

/// Known diffraction of the two-letter systems on unit tiles: the Bragg
/// intensity at `k` and the type of the continuous part.
///
/// Thue-Morse and Rudin-Shapiro carry `((w_a + w_b)/2)^2` on the integers, with
/// the rest of the mass singular continuous or Lebesgue respectively. The
/// period-4 example has peaks on `Z/4` with the squared one-period amplitude.
pub fn closed_form_diffraction(system: KnownSystem, w: &WeightSystem, k: f64) -> Result<ClosedForm> {
    w.check(2)?;
    let (wa, wb) = (w.weights()[0], w.weights()[1]);
    let mixed = wa != wb;
    Ok(match system {
        KnownSystem::ThueMorse | KnownSystem::RudinShapiro => ClosedForm {
            pure_point: if near_integer(k) { ((wa + wb) / 2.0).powi(2) } else { 0.0 },
            continuous: match (mixed, system) {
                (false, _) => ContinuousComponent::None,
                (true, KnownSystem::ThueMorse) => ContinuousComponent::Singular,
                _ => ContinuousComponent::AbsolutelyContinuous,
            },
        },
        KnownSystem::Periodic4 => {
            let pure_point = if near_integer(4.0 * k) {
                let e = |x: f64| Complex64::from_polar(1.0, -2.0 * PI * k * x);
                ((wa * e(0.0) + wa * e(2.0) + wb * e(3.0)) / 4.0).norm_sqr()
            } else {
                0.0
            };
            ClosedForm {
                pure_point,
                continuous: ContinuousComponent::None,
            }
        }
    })
}

pub fn closed_form_estimate(
    system: KnownSystem,
    w: &WeightSystem,
    ks: &[f64],
) -> Result<DiffractionEstimate> {
    let entries = ks
        .iter()
        .map(|&k| {
            Ok(DiffractionEntry {
                k: vec![k],
                intensity: closed_form_diffraction(system, w, k)?.pure_point,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiffractionEstimate::new(entries, Method::ClosedForm, f64::INFINITY, w, None))
}
