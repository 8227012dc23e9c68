//! Weighted autocorrelations, higher-order correlations and pattern
//! frequencies.
//!
//! Every window average here uses an eroded window: the observation cube is
//! shrunk by the largest lag on every side, so each counted point has its
//! whole neighbourhood inside the data. An `(n+1)`-point configuration is
//! counted from each of its `n+1` points in turn and the counts averaged,
//! which makes the pair correlation exactly symmetric, `eta(-t) = eta(t)`.

use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::SequenceWindow;
use crate::pointset::{
    empirical_intensity, max_norm_dist, ColoredPoint, ColoredPointSet, IntensityReport,
    WeightSystem, Window,
};
use crate::sum::KahanSum;
use crate::MATCH_TOLERANCE;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AutocorrelationEntry {
    pub displacement: Vec<f64>,
    /// Exact lattice displacement, for sets that carry lattice coordinates.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<[i64; 2]>,
    pub value: f64,
}

/// Atomic autocorrelation `t -> eta^w(t)` of a finite realization.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrelationMeasure {
    entries: Vec<AutocorrelationEntry>,
    dimension: usize,
    radius_used: f64,
    max_lag: f64,
    weights: WeightSystem,
    intensity: f64,
    separation: f64,
    integer_support: bool,
    source: u64,
}

impl AutocorrelationMeasure {
    /// Entries sorted by displacement.
    pub fn entries(&self) -> &[AutocorrelationEntry] {
        &self.entries
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Edge of the window the averages were taken over.
    pub fn radius_used(&self) -> f64 {
        self.radius_used
    }

    pub fn max_lag(&self) -> f64 {
        self.max_lag
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }

    /// Weighted intensity of the source set on its full window.
    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    /// True for sequence autocorrelations, whose lags are integers by
    /// construction.
    pub fn has_integer_support(&self) -> bool {
        self.integer_support
    }

    pub fn source(&self) -> u64 {
        self.source
    }

    /// `eta(t)`, zero off the support.
    pub fn value_at(&self, t: &[f64]) -> f64 {
        let idx = self.entries.partition_point(|e| e.displacement[0] < t[0] - MATCH_TOLERANCE);
        self.entries[idx..]
            .iter()
            .take_while(|e| e.displacement[0] <= t[0] + MATCH_TOLERANCE)
            .find(|e| max_norm_dist(&e.displacement, t) <= MATCH_TOLERANCE)
            .map_or(0.0, |e| e.value)
    }

    pub fn at_zero(&self) -> f64 {
        self.value_at(&vec![0.0; self.dimension])
    }
}

#[derive(Debug, Clone)]
struct Offset {
    t: Vec<f64>,
    lattice: Option<[i64; 2]>,
}

impl Offset {
    fn float(t: Vec<f64>) -> Self {
        Self { t, lattice: None }
    }

    fn minus(&self, other: &Offset) -> Offset {
        Offset {
            t: self.t.iter().zip(&other.t).map(|(a, b)| a - b).collect(),
            lattice: match (self.lattice, other.lattice) {
                (Some(a), Some(b)) => Some([a[0] - b[0], a[1] - b[1]]),
                _ => None,
            },
        }
    }

    fn negated(&self) -> Offset {
        Offset {
            t: self.t.iter().map(|v| -v).collect(),
            lattice: self.lattice.map(|[a, b]| [-a, -b]),
        }
    }
}

/// Window averages of products of weights over an eroded window.
struct InnerAverager<'a> {
    points: &'a ColoredPointSet,
    w: &'a WeightSystem,
    inner: Window,
    anchors: Vec<usize>,
}

impl<'a> InnerAverager<'a> {
    fn new(points: &'a ColoredPointSet, w: &'a WeightSystem, erosion: f64) -> Result<Self> {
        w.check(points.num_colors())?;
        let edge = points.window().edge();
        if !(erosion >= 0.0 && erosion.is_finite()) {
            return Err(Error::InvalidParameter(format!("lag must be non-negative, got {erosion}")));
        }
        let inner = points
            .window()
            .eroded(erosion)
            .ok_or(Error::LagExceedsWindow { lag: erosion, edge })?;
        let anchors = points
            .first_coord_range(inner.lower()[0], inner.upper(0))
            .filter(|&i| inner.contains(points.position(i)))
            .collect();
        Ok(Self {
            points,
            w,
            inner,
            anchors,
        })
    }

    /// `sum over anchors x of w(x) * prod_j w(x + offsets[j])`, zero when any
    /// `x + offsets[j]` is not a point.
    fn configuration_sum(&self, offsets: &[Offset]) -> f64 {
        let p = self.points;
        let d = p.dimension();
        let mut cursors = vec![0usize; offsets.len()];
        let mut target = vec![0.0; d];
        let mut total = KahanSum::new();
        'anchor: for &i in &self.anchors {
            let x = p.position(i);
            let mut product = self.w.weight(p.color(i));
            for (off, cursor) in offsets.iter().zip(cursors.iter_mut()) {
                for k in 0..d {
                    target[k] = x[k] + off.t[k];
                }
                let lo = target[0] - MATCH_TOLERANCE;
                while *cursor < p.len() && p.first_coord(*cursor) < lo {
                    *cursor += 1;
                }
                let want = match (off.lattice, p.lattice_coords(i)) {
                    (Some(delta), Some(base)) => Some([base[0] + delta[0], base[1] + delta[1]]),
                    _ => None,
                };
                let mut found = None;
                let mut j = *cursor;
                while j < p.len() && p.first_coord(j) <= target[0] + MATCH_TOLERANCE {
                    if max_norm_dist(p.position(j), &target) <= MATCH_TOLERANCE
                        && want.is_none_or(|c| p.lattice_coords(j) == Some(c))
                    {
                        found = Some(j);
                        break;
                    }
                    j += 1;
                }
                match found {
                    Some(j) => product *= self.w.weight(p.color(j)),
                    None => continue 'anchor,
                }
            }
            total.add(product);
        }
        total.value()
    }

    /// Average of the configuration count over the choice of reference point,
    /// divided by the eroded volume.
    fn reanchored_average(&self, tuple: &[Offset]) -> f64 {
        let n = tuple.len();
        let mut sums = Vec::with_capacity(n + 1);
        sums.push(self.configuration_sum(tuple));
        for j in 0..n {
            let pivot = &tuple[j];
            let mut offsets = Vec::with_capacity(n);
            offsets.push(pivot.negated());
            for (i, t) in tuple.iter().enumerate() {
                if i != j {
                    offsets.push(t.minus(pivot));
                }
            }
            sums.push(self.configuration_sum(&offsets));
        }
        let total: f64 = sums.iter().sum();
        total / (n as f64 + 1.0) / self.inner.volume()
    }
}

fn is_lex_negative(v: &[i64]) -> bool {
    v.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0)
}

/// Single-linkage merge of displacement representatives closer than the
/// matching tolerance, axis by axis.
fn merge_close(mut reps: Vec<Vec<f64>>, axis: usize) -> Vec<Vec<f64>> {
    if reps.is_empty() || axis >= reps[0].len() {
        return reps.into_iter().take(1).collect();
    }
    reps.sort_by(|a, b| a[axis].total_cmp(&b[axis]));
    let mut out = Vec::new();
    let mut group: Vec<Vec<f64>> = Vec::new();
    for r in reps {
        if let Some(last) = group.last() {
            if r[axis] - last[axis] > MATCH_TOLERANCE {
                out.extend(merge_close(std::mem::take(&mut group), axis + 1));
            }
        }
        group.push(r);
    }
    out.extend(merge_close(group, axis + 1));
    out
}

/// Weighted autocorrelation coefficients for all displacements up to
/// `max_lag` in max-norm.
///
/// `eta(t) = (1 / vol) * sum over x in the eroded window with x + t in the set
/// of w(x) w(x + t)`, averaged with the count for `-t`.
pub fn autocorrelation(
    points: &ColoredPointSet,
    w: &WeightSystem,
    max_lag: f64,
) -> Result<AutocorrelationMeasure> {
    let avg = InnerAverager::new(points, w, max_lag)?;
    let d = points.dimension();
    let lattice = points.has_lattice_coords();

    // canonical displacements (the lexicographically non-negative one of each
    // +-t pair), keyed by exact lattice displacement or by a 1e-9 grid cell
    let mut support: HashMap<Vec<i64>, Vec<f64>> = HashMap::new();
    let mut key = vec![0i64; if lattice { 2 } else { d }];
    let mut disp = vec![0.0; d];
    for &i in &avg.anchors {
        let x = points.position(i);
        for j in points.first_coord_range(x[0] - max_lag, x[0] + max_lag) {
            let y = points.position(j);
            if max_norm_dist(x, y) > max_lag {
                continue;
            }
            for k in 0..d {
                disp[k] = y[k] - x[k];
            }
            let flip = if lattice {
                let (a, b) = (points.lattice_coords(i).unwrap(), points.lattice_coords(j).unwrap());
                key[0] = b[0] - a[0];
                key[1] = b[1] - a[1];
                disp[0] < 0.0
            } else {
                for k in 0..d {
                    key[k] = (disp[k] / MATCH_TOLERANCE).round() as i64;
                }
                is_lex_negative(&key)
            };
            if flip {
                key.iter_mut().for_each(|c| *c = -*c);
                disp.iter_mut().for_each(|c| *c = -*c);
            }
            if !support.contains_key(key.as_slice()) {
                support.insert(key.clone(), disp.clone());
            }
        }
    }

    let offsets: Vec<Offset> = if lattice {
        let mut v: Vec<Offset> = support
            .into_iter()
            .map(|(k, t)| Offset {
                t,
                lattice: Some([k[0], k[1]]),
            })
            .collect();
        v.sort_by(|a, b| a.t[0].total_cmp(&b.t[0]).then(a.lattice.cmp(&b.lattice)));
        v
    } else {
        let mut reps: Vec<Vec<f64>> = support.into_values().collect();
        reps.sort_by(|a, b| lex_cmp(a, b));
        merge_close(reps, 0).into_iter().map(Offset::float).collect()
    };

    let values: Vec<f64> = offsets
        .par_iter()
        .map(|off| avg.reanchored_average(std::slice::from_ref(off)))
        .collect();

    let mut entries = Vec::with_capacity(2 * offsets.len());
    for (off, value) in offsets.iter().zip(values) {
        let is_zero = off.t.iter().all(|&c| c.abs() <= MATCH_TOLERANCE)
            && off.lattice.is_none_or(|l| l == [0, 0]);
        entries.push(AutocorrelationEntry {
            displacement: off.t.clone(),
            lattice: off.lattice,
            value,
        });
        if !is_zero {
            let neg = off.negated();
            entries.push(AutocorrelationEntry {
                displacement: neg.t,
                lattice: neg.lattice,
                value,
            });
        }
    }
    entries.sort_by(|a, b| lex_cmp(&a.displacement, &b.displacement));

    let intensity = empirical_intensity(points, w)?.weighted;
    Ok(AutocorrelationMeasure {
        entries,
        dimension: d,
        radius_used: avg.inner.edge(),
        max_lag,
        weights: w.clone(),
        intensity,
        separation: points.separation(),
        integer_support: false,
        source: points.fingerprint(),
    })
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Fingerprint of a symbol sequence, comparable with
/// [`ColoredPointSet::fingerprint`] only for equality.
pub fn sequence_fingerprint(seq: &SequenceWindow) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    seq.symbols().hash(&mut h);
    seq.alphabet_size().hash(&mut h);
    h.finish()
}

/// `eta(k) = (1 / (L - k)) * sum_i w(z_i) w(z_{i+k})` over every index pair
/// available in a sequence of length `L`, for `|k| <= max_k`.
pub fn sequence_autocorrelation(
    seq: &SequenceWindow,
    w: &WeightSystem,
    max_k: usize,
) -> Result<AutocorrelationMeasure> {
    w.check(seq.alphabet_size())?;
    let len = seq.len();
    if 2 * max_k >= len {
        return Err(Error::LagExceedsWindow {
            lag: max_k as f64,
            edge: len as f64,
        });
    }
    let weights: Vec<f64> = seq.symbols().iter().map(|&c| w.weight(c)).collect();
    let values: Vec<f64> = (0..=max_k)
        .into_par_iter()
        .map(|k| {
            let s: KahanSum = weights[..len - k]
                .iter()
                .zip(&weights[k..])
                .map(|(a, b)| a * b)
                .collect();
            s.value() / (len - k) as f64
        })
        .collect();
    let mut entries = Vec::with_capacity(2 * max_k + 1);
    for k in (1..=max_k).rev() {
        entries.push(AutocorrelationEntry {
            displacement: vec![-(k as f64)],
            lattice: None,
            value: values[k],
        });
    }
    for (k, &value) in values.iter().enumerate() {
        entries.push(AutocorrelationEntry {
            displacement: vec![k as f64],
            lattice: None,
            value,
        });
    }
    let intensity = weights.iter().copied().collect::<KahanSum>().value() / len as f64;
    Ok(AutocorrelationMeasure {
        entries,
        dimension: 1,
        radius_used: len as f64,
        max_lag: max_k as f64,
        weights: w.clone(),
        intensity,
        separation: 0.5,
        integer_support: true,
        source: sequence_fingerprint(seq),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationEntry {
    pub tuple: Vec<Vec<f64>>,
    pub value: f64,
}

/// `(n+1)`-point correlation values at a list of displacement tuples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationTensor {
    pub order: usize,
    pub entries: Vec<CorrelationEntry>,
    pub radius_used: f64,
    pub weights: Vec<f64>,
}

/// `(n+1)`-point correlations: the window average of
/// `w(x) * prod_i w(x + t_i)` for each tuple `(t_1, ..., t_n)`.
///
/// The window is eroded by `max_lag`, which must bound every `|t_i|` and every
/// `|t_i - t_j|` in max-norm so that counting from any point of the
/// configuration stays inside the data.
pub fn npoint_correlation(
    points: &ColoredPointSet,
    w: &WeightSystem,
    tuples: &[Vec<Vec<f64>>],
    n: usize,
    max_lag: f64,
) -> Result<CorrelationTensor> {
    if n == 0 {
        return Err(Error::InvalidParameter("order n must be at least 1".into()));
    }
    let avg = InnerAverager::new(points, w, max_lag)?;
    let d = points.dimension();
    for tuple in tuples {
        if tuple.len() != n || tuple.iter().any(|t| t.len() != d) {
            return Err(Error::InvalidParameter(format!(
                "expected {n} displacements of dimension {d}, got {tuple:?}"
            )));
        }
        let zero = vec![0.0; d];
        let mut reach = 0.0f64;
        for (i, a) in tuple.iter().enumerate() {
            reach = reach.max(max_norm_dist(a, &zero));
            for b in &tuple[i + 1..] {
                reach = reach.max(max_norm_dist(a, b));
            }
        }
        if reach > max_lag {
            return Err(Error::LagExceedsWindow {
                lag: reach,
                edge: points.window().edge(),
            });
        }
    }
    let entries = tuples
        .par_iter()
        .map(|tuple| {
            let offsets: Vec<Offset> = tuple.iter().cloned().map(Offset::float).collect();
            CorrelationEntry {
                tuple: tuple.clone(),
                value: avg.reanchored_average(&offsets),
            }
        })
        .collect();
    Ok(CorrelationTensor {
        order: n,
        entries,
        radius_used: avg.inner.edge(),
        weights: w.weights().to_vec(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Closure {
    Open,
    Closed,
}

/// A finite colored pattern anchored at the origin, matched up to a cube of
/// half-edge `epsilon`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    anchors: ColoredPointSet,
    epsilon: f64,
    closure: Closure,
}

impl Pattern {
    pub fn new(anchors: Vec<ColoredPoint>, epsilon: f64, closure: Closure) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
        }
        let Some(first) = anchors.first() else {
            return Err(Error::InvalidParameter("a pattern needs at least one point".into()));
        };
        let d = first.position.len();
        let reach = anchors
            .iter()
            .flat_map(|p| p.position.iter().map(|v| v.abs()))
            .fold(0.0, f64::max);
        let mut separation = f64::INFINITY;
        for (i, a) in anchors.iter().enumerate() {
            for b in &anchors[i + 1..] {
                if a.position.len() == b.position.len() {
                    separation = separation.min(max_norm_dist(&a.position, &b.position));
                }
            }
        }
        if !(separation > 0.0) {
            return Err(Error::InvalidParameter("pattern points must be distinct".into()));
        }
        let separation = if separation.is_finite() { separation } else { 1.0 };
        let num_colors = anchors.iter().map(|p| p.color).max().unwrap_or(1).max(1) as usize;
        let window = Window::centered(d, 2.0 * reach + 2.0);
        let set = ColoredPointSet::new(num_colors, separation, window, anchors)?;
        if set.find(&vec![0.0; d], 0.0).is_none() {
            return Err(Error::InvalidParameter("pattern must contain the origin".into()));
        }
        Ok(Self {
            anchors: set,
            epsilon,
            closure,
        })
    }

    pub fn anchors(&self) -> &ColoredPointSet {
        &self.anchors
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }

    /// Largest anchor coordinate plus the tolerance.
    pub fn reach(&self) -> f64 {
        let zero = vec![0.0; self.anchors.dimension()];
        (0..self.anchors.len())
            .map(|i| max_norm_dist(self.anchors.position(i), &zero))
            .fold(0.0, f64::max)
            + self.epsilon
    }
}

/// Frequency of `pattern`: the number of points `x` per unit volume such that
/// every anchor `(f, c)` has a point of color `c` within the tolerance cube
/// around `x + f`.
pub fn pattern_frequency(points: &ColoredPointSet, pattern: &Pattern) -> Result<f64> {
    let anchors = pattern.anchors();
    if anchors.dimension() != points.dimension() {
        return Err(Error::InvalidParameter("pattern dimension mismatch".into()));
    }
    if anchors.num_colors() > points.num_colors() {
        return Err(Error::ColorOutOfRange {
            color: anchors.num_colors() as u32,
            num_colors: points.num_colors(),
        });
    }
    let edge = points.window().edge();
    let reach = pattern.reach();
    if reach > edge / 4.0 {
        return Err(Error::PatternTooLarge { reach, edge });
    }
    let inner = points
        .window()
        .eroded(reach)
        .ok_or(Error::PatternTooLarge { reach, edge })?;
    let eps = pattern.epsilon();
    let within = |dist: f64| match pattern.closure() {
        Closure::Open => dist < eps,
        Closure::Closed => dist <= eps,
    };
    let d = points.dimension();
    let mut hits = 0usize;
    for i in points.first_coord_range(inner.lower()[0], inner.upper(0)) {
        let x = points.position(i);
        if !inner.contains(x) {
            continue;
        }
        let matched = (0..anchors.len()).all(|a| {
            let f = anchors.position(a);
            let c = anchors.color(a);
            points
                .first_coord_range(x[0] + f[0] - eps, x[0] + f[0] + eps)
                .any(|j| {
                    points.color(j) == c && {
                        let y = points.position(j);
                        let dist = (0..d)
                            .map(|k| ((y[k] - x[k]) - f[k]).abs())
                            .fold(0.0, f64::max);
                        within(dist)
                    }
                })
        });
        if matched {
            hits += 1;
        }
    }
    Ok(hits as f64 / inner.volume())
}

/// `d_j = sum_k w_k^j c_k` for `j = 1..=m`.
pub fn forward_moments(c: &[f64], w: &WeightSystem) -> Vec<f64> {
    (1..=w.len() as i32)
        .map(|j| {
            w.weights()
                .iter()
                .zip(c)
                .map(|(wk, ck)| wk.powi(j) * ck)
                .collect::<KahanSum>()
                .value()
        })
        .collect()
}

/// Solves `sum_k w_k^j c_k = d_j`, `j = 1..=m`, for `c` by Gaussian elimination
/// with partial pivoting. The weights must be non-zero and pairwise distinct.
pub fn solve_color_intensities(diagonal_moments: &[f64], w: &WeightSystem) -> Result<Vec<f64>> {
    let m = w.len();
    if diagonal_moments.len() != m {
        return Err(Error::InvalidParameter(format!(
            "need {m} moments for {m} weights, got {}",
            diagonal_moments.len()
        )));
    }
    let ws = w.weights();
    let scale = ws.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    for (i, &a) in ws.iter().enumerate() {
        if a == 0.0 {
            return Err(Error::SingularWeightSystem(format!("weight {} is zero", i + 1)));
        }
        for &b in &ws[i + 1..] {
            if (a - b).abs() <= 1e-12 * scale {
                return Err(Error::SingularWeightSystem(format!("weight {a} is repeated")));
            }
        }
    }
    let a = nalgebra::DMatrix::from_fn(m, m, |j, k| ws[k].powi(j as i32 + 1));
    let b = nalgebra::DVector::from_column_slice(diagonal_moments);
    let c = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::SingularWeightSystem("zero pivot".into()))?;
    Ok(c.iter().copied().collect())
}

/// Recovers per-color intensities from the diagonal values of the
/// `2..=m+1`-point correlations alone. Those equal
/// `sum_i w_i^n (w_i I_i)` for `n = 1..=m`, a Vandermonde system in
/// `w_i I_i`.
pub fn color_intensities_from_correlations(
    points: &ColoredPointSet,
    w: &WeightSystem,
) -> Result<IntensityReport> {
    w.check(points.num_colors())?;
    let m = w.len();
    let d = points.dimension();
    let moments = (1..=m)
        .map(|n| {
            let tensor = npoint_correlation(points, w, &[vec![vec![0.0; d]; n]], n, 0.0)?;
            Ok(tensor.entries[0].value)
        })
        .collect::<Result<Vec<f64>>>()?;
    let c = solve_color_intensities(&moments, w)?;
    let per_color: Vec<f64> = c.iter().zip(w.weights()).map(|(ci, wi)| ci / wi).collect();
    let weighted = per_color.iter().zip(w.weights()).map(|(i, wi)| i * wi).sum();
    Ok(IntensityReport {
        per_color,
        weighted,
        radius_used: points.window().edge(),
    })
}
