//! Colored point sets, weight systems, counting functions and intensities.
//!
//! A [`ColoredPointSet`] is a finite realization of a colored point set inside
//! a half-open observation cube. Points are stored sorted lexicographically by
//! position, so range queries along the first axis are binary searches.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::KahanSum;

/// Colors are numbered `1..=num_colors`.
pub type Color = u32;

#[derive(Debug, Clone, PartialEq)]
pub struct ColoredPoint {
    pub position: Vec<f64>,
    pub color: Color,
}

impl ColoredPoint {
    pub fn new(position: Vec<f64>, color: Color) -> Self {
        Self { position, color }
    }

    /// A point on the line.
    pub fn at(x: f64, color: Color) -> Self {
        Self {
            position: vec![x],
            color,
        }
    }
}

/// Half-open cube `[lower, lower + edge)^d`.
///
/// Generators use cubes centered at the origin, `lower = -edge/2`. Translated
/// sets carry their window along.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Window {
    lower: Vec<f64>,
    edge: f64,
}

impl Window {
    pub fn centered(dimension: usize, edge: f64) -> Self {
        Self {
            lower: vec![-edge / 2.0; dimension],
            edge,
        }
    }

    pub fn from_lower(lower: Vec<f64>, edge: f64) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::InvalidPointSet("window dimension must be positive".into()));
        }
        if !(edge >= 0.0 && edge.is_finite()) || lower.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPointSet(format!(
                "window must have a finite lower corner and edge >= 0, got edge {edge}"
            )));
        }
        Ok(Self { lower, edge })
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn edge(&self) -> f64 {
        self.edge
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self, axis: usize) -> f64 {
        self.lower[axis] + self.edge
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower.iter().map(|l| l + self.edge / 2.0).collect()
    }

    pub fn is_centered(&self) -> bool {
        self.lower.iter().all(|&l| l == -self.edge / 2.0)
    }

    #[inline]
    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(&self.lower)
            .all(|(&xi, &lo)| xi >= lo && xi < lo + self.edge)
    }

    pub fn volume(&self) -> f64 {
        self.edge.powi(self.dimension() as i32)
    }

    /// Shrinks the cube by `by` on every side; `None` if nothing is left.
    pub fn eroded(&self, by: f64) -> Option<Window> {
        let edge = self.edge - 2.0 * by;
        if edge > 0.0 {
            Some(Window {
                lower: self.lower.iter().map(|l| l + by).collect(),
                edge,
            })
        } else {
            None
        }
    }

    pub fn translated(&self, t: &[f64]) -> Window {
        Window {
            lower: self.lower.iter().zip(t).map(|(l, ti)| l + ti).collect(),
            edge: self.edge,
        }
    }

    /// True if `other` lies inside this window.
    pub fn covers(&self, other: &Window) -> bool {
        (0..self.dimension())
            .all(|j| other.lower[j] >= self.lower[j] && other.upper(j) <= self.upper(j))
    }
}

/// A finite colored point set inside a window.
///
/// Invariants maintained by every constructor: colors lie in
/// `1..=num_colors`, coordinates are finite, every point lies in the window
/// and positions are strictly increasing in lexicographic order. Uniform
/// discreteness at the recorded separation is a property of the generators
/// and is checked by [`validate_uniform_discreteness`].
#[derive(Debug, Clone, PartialEq)]
pub struct ColoredPointSet {
    dimension: usize,
    num_colors: usize,
    separation: f64,
    window: Window,
    coords: Vec<f64>,
    colors: Vec<Color>,
    lattice: Option<Vec<[i64; 2]>>,
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

impl ColoredPointSet {
    pub fn new(
        num_colors: usize,
        separation: f64,
        window: Window,
        points: Vec<ColoredPoint>,
    ) -> Result<Self> {
        let entries = points.into_iter().map(|p| (p, None)).collect();
        Self::build(num_colors, separation, window, entries, false)
    }

    /// Like [`ColoredPointSet::new`], additionally recording exact integer
    /// lattice coordinates for every point (used by cut-and-project sets).
    pub fn with_lattice_coords(
        num_colors: usize,
        separation: f64,
        window: Window,
        points: Vec<(ColoredPoint, [i64; 2])>,
    ) -> Result<Self> {
        let entries = points.into_iter().map(|(p, c)| (p, Some(c))).collect();
        Self::build(num_colors, separation, window, entries, true)
    }

    pub fn empty(num_colors: usize, separation: f64, window: Window) -> Result<Self> {
        Self::new(num_colors, separation, window, Vec::new())
    }

    fn build(
        num_colors: usize,
        separation: f64,
        window: Window,
        mut entries: Vec<(ColoredPoint, Option<[i64; 2]>)>,
        with_lattice: bool,
    ) -> Result<Self> {
        if num_colors == 0 {
            return Err(Error::InvalidPointSet("at least one color is required".into()));
        }
        if !(separation > 0.0 && separation.is_finite()) {
            return Err(Error::InvalidPointSet(format!(
                "separation must be positive, got {separation}"
            )));
        }
        let d = window.dimension();
        for (p, _) in &entries {
            if p.position.len() != d {
                return Err(Error::InvalidPointSet(format!(
                    "point of dimension {} in a {d}-dimensional window",
                    p.position.len()
                )));
            }
            if p.position.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidPointSet("non-finite coordinate".into()));
            }
            if p.color == 0 || p.color as usize > num_colors {
                return Err(Error::ColorOutOfRange {
                    color: p.color,
                    num_colors,
                });
            }
            if !window.contains(&p.position) {
                return Err(Error::InvalidPointSet(format!(
                    "point {:?} outside the window",
                    p.position
                )));
            }
        }
        entries.sort_by(|a, b| lex_cmp(&a.0.position, &b.0.position));
        for pair in entries.windows(2) {
            if lex_cmp(&pair[0].0.position, &pair[1].0.position) == Ordering::Equal {
                return Err(Error::InvalidPointSet(format!(
                    "duplicate position {:?}",
                    pair[0].0.position
                )));
            }
        }
        let mut coords = Vec::with_capacity(entries.len() * d);
        let mut colors = Vec::with_capacity(entries.len());
        let mut lattice = with_lattice.then(|| Vec::with_capacity(entries.len()));
        for (p, c) in entries {
            coords.extend_from_slice(&p.position);
            colors.push(p.color);
            if let Some(l) = lattice.as_mut() {
                l.push(c.expect("lattice coordinates present"));
            }
        }
        Ok(Self {
            dimension: d,
            num_colors,
            separation,
            window,
            coords,
            colors,
            lattice,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    #[inline]
    pub fn position(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dimension..(i + 1) * self.dimension]
    }

    #[inline]
    pub fn color(&self, i: usize) -> Color {
        self.colors[i]
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    #[inline]
    pub fn lattice_coords(&self, i: usize) -> Option<[i64; 2]> {
        self.lattice.as_ref().map(|l| l[i])
    }

    pub fn has_lattice_coords(&self) -> bool {
        self.lattice.is_some()
    }

    /// Positions along the first axis; for one-dimensional sets these are all
    /// the coordinates, in increasing order.
    pub fn first_coords(&self) -> impl Iterator<Item = f64> + '_ {
        self.coords.iter().step_by(self.dimension).copied()
    }

    pub fn points(&self) -> Vec<ColoredPoint> {
        (0..self.len())
            .map(|i| ColoredPoint::new(self.position(i).to_vec(), self.color(i)))
            .collect()
    }

    #[inline]
    pub(crate) fn first_coord(&self, i: usize) -> f64 {
        self.coords[i * self.dimension]
    }

    /// Indices whose first coordinate lies in the closed interval `[lo, hi]`.
    pub fn first_coord_range(&self, lo: f64, hi: f64) -> Range<usize> {
        let start = self.partition_first(|x| x < lo);
        let end = self.partition_first(|x| x <= hi);
        start..end.max(start)
    }

    fn partition_first<P: Fn(f64) -> bool>(&self, pred: P) -> usize {
        let (mut lo, mut hi) = (0usize, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if pred(self.first_coord(mid)) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Index of a point within max-norm distance `tol` of `x`.
    pub fn find(&self, x: &[f64], tol: f64) -> Option<usize> {
        self.first_coord_range(x[0] - tol, x[0] + tol)
            .find(|&i| max_norm_dist(self.position(i), x) <= tol)
    }

    /// Stable content hash, used to tie estimates to the set they came from.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.dimension.hash(&mut h);
        self.num_colors.hash(&mut h);
        self.separation.to_bits().hash(&mut h);
        self.window.edge.to_bits().hash(&mut h);
        for l in &self.window.lower {
            l.to_bits().hash(&mut h);
        }
        for c in &self.coords {
            c.to_bits().hash(&mut h);
        }
        self.colors.hash(&mut h);
        h.finish()
    }

    /// The set translated by `t`, window included.
    pub fn translated(&self, t: &[f64]) -> Self {
        assert_eq!(t.len(), self.dimension, "translation dimension mismatch");
        let coords = self
            .coords
            .chunks(self.dimension)
            .flat_map(|p| p.iter().zip(t).map(|(x, ti)| x + ti))
            .collect();
        Self {
            coords,
            window: self.window.translated(t),
            ..self.clone()
        }
    }

    /// The points lying in `sub`, with `sub` as the new window. `sub` must lie
    /// inside the current window, since nothing is known outside of it.
    pub fn restricted_to(&self, sub: &Window) -> Result<Self> {
        if sub.dimension() != self.dimension || !self.window.covers(sub) {
            return Err(Error::WindowUnderflow);
        }
        let keep: Vec<usize> = self
            .first_coord_range(sub.lower()[0], sub.upper(0))
            .filter(|&i| sub.contains(self.position(i)))
            .collect();
        Ok(self.select(&keep, sub.clone(), self.num_colors, None))
    }

    fn select(
        &self,
        keep: &[usize],
        window: Window,
        num_colors: usize,
        recolor: Option<Color>,
    ) -> Self {
        let mut coords = Vec::with_capacity(keep.len() * self.dimension);
        let mut colors = Vec::with_capacity(keep.len());
        for &i in keep {
            coords.extend_from_slice(self.position(i));
            colors.push(recolor.unwrap_or(self.colors[i]));
        }
        Self {
            dimension: self.dimension,
            num_colors,
            separation: self.separation,
            window,
            coords,
            colors,
            lattice: self
                .lattice
                .as_ref()
                .map(|l| keep.iter().map(|&i| l[i]).collect()),
        }
    }
}

#[inline]
pub(crate) fn max_norm_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Scattering strengths, one per color.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSystem {
    weights: Vec<f64>,
}

impl WeightSystem {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter(
                "weights must be a non-empty vector of finite numbers".into(),
            ));
        }
        Ok(Self { weights })
    }

    /// All weights equal to one.
    pub fn unit(num_colors: usize) -> Self {
        Self {
            weights: vec![1.0; num_colors],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    #[inline]
    pub fn weight(&self, color: Color) -> f64 {
        self.weights[color as usize - 1]
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            weights: self.weights.iter().map(|w| c * w).collect(),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0)
    }

    pub fn check(&self, num_colors: usize) -> Result<()> {
        if self.weights.len() != num_colors {
            return Err(Error::WeightMismatch {
                expected: num_colors,
                got: self.weights.len(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntensityReport {
    pub per_color: Vec<f64>,
    pub weighted: f64,
    pub radius_used: f64,
}

/// A bounded function with compact support, evaluated by [`count`].
pub trait TestFunction {
    /// Half-open box `[lo, hi)` outside of which the function vanishes.
    /// `None` means the function is identically zero.
    fn support(&self) -> Option<(Vec<f64>, Vec<f64>)>;
    fn eval(&self, x: &[f64]) -> f64;
}

/// Indicator of the half-open box `[lo, hi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Indicator {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Indicator {
    pub fn interval(lo: f64, hi: f64) -> Self {
        Self {
            lo: vec![lo],
            hi: vec![hi],
        }
    }
}

impl TestFunction for Indicator {
    fn support(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        Some((self.lo.clone(), self.hi.clone()))
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let inside = x
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&xi, (&lo, &hi))| xi >= lo && xi < hi);
        if inside {
            1.0
        } else {
            0.0
        }
    }
}

/// The zero function.
#[derive(Debug, Clone, Copy)]
pub struct ZeroFunction;

impl TestFunction for ZeroFunction {
    fn support(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        None
    }

    fn eval(&self, _x: &[f64]) -> f64 {
        0.0
    }
}

/// An arbitrary closure together with a box containing its support.
pub struct SupportedFn<F> {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub f: F,
}

impl<F: Fn(&[f64]) -> f64> TestFunction for SupportedFn<F> {
    fn support(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        Some((self.lo.clone(), self.hi.clone()))
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let inside = x
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&xi, (&lo, &hi))| xi >= lo && xi < hi);
        if inside {
            (self.f)(x)
        } else {
            0.0
        }
    }
}

/// True iff no open cube of edge `separation` holds two points, i.e. all
/// pairwise max-norm distances are at least the separation.
pub fn validate_uniform_discreteness(points: &ColoredPointSet) -> bool {
    let r = points.separation();
    for i in 0..points.len() {
        let xi = points.position(i);
        for j in i + 1..points.len() {
            if points.first_coord(j) - xi[0] >= r {
                break;
            }
            if max_norm_dist(xi, points.position(j)) < r {
                return false;
            }
        }
    }
    true
}

/// Weighted counting function `N^w_f = sum over (x, i) of w_i f(x)`.
pub fn count(points: &ColoredPointSet, f: &dyn TestFunction, w: &WeightSystem) -> Result<f64> {
    w.check(points.num_colors())?;
    let Some((lo, hi)) = f.support() else {
        return Ok(0.0);
    };
    if lo.len() != points.dimension() || hi.len() != points.dimension() {
        return Err(Error::InvalidParameter("test function dimension mismatch".into()));
    }
    let window = points.window();
    let inside = (0..points.dimension()).all(|j| lo[j] >= window.lower()[j] && hi[j] <= window.upper(j));
    if !inside {
        return Err(Error::WindowUnderflow);
    }
    let mut total = KahanSum::new();
    for i in points.first_coord_range(lo[0], hi[0]) {
        let v = f.eval(points.position(i));
        if v != 0.0 {
            total.add(w.weight(points.color(i)) * v);
        }
    }
    Ok(total.value())
}

/// The points of one color, as a single-color set.
pub fn restrict_color(points: &ColoredPointSet, color: Color) -> Result<ColoredPointSet> {
    if color == 0 || color as usize > points.num_colors() {
        return Err(Error::ColorOutOfRange {
            color,
            num_colors: points.num_colors(),
        });
    }
    let keep: Vec<usize> = (0..points.len())
        .filter(|&i| points.color(i) == color)
        .collect();
    Ok(points.select(&keep, points.window().clone(), 1, Some(1)))
}

/// Forgets colors. Positions are distinct by construction, so the union is
/// never ambiguous.
pub fn flatten(points: &ColoredPointSet) -> ColoredPointSet {
    let keep: Vec<usize> = (0..points.len()).collect();
    points.select(&keep, points.window().clone(), 1, Some(1))
}

/// Points per unit volume of each color in the window, and their weighted sum.
pub fn empirical_intensity(points: &ColoredPointSet, w: &WeightSystem) -> Result<IntensityReport> {
    w.check(points.num_colors())?;
    let m = points.num_colors();
    let edge = points.window().edge();
    let volume = points.window().volume();
    if points.is_empty() || volume <= 0.0 {
        return Ok(IntensityReport {
            per_color: vec![0.0; m],
            weighted: 0.0,
            radius_used: edge,
        });
    }
    let mut counts = vec![0usize; m];
    for &c in points.colors() {
        counts[c as usize - 1] += 1;
    }
    let per_color: Vec<f64> = counts.iter().map(|&c| c as f64 / volume).collect();
    let weighted = per_color
        .iter()
        .zip(w.weights())
        .map(|(i, wi)| wi * i)
        .collect::<KahanSum>()
        .value();
    Ok(IntensityReport {
        per_color,
        weighted,
        radius_used: edge,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(points: &[(f64, Color)], m: usize, r: f64, edge: f64) -> ColoredPointSet {
        ColoredPointSet::new(
            m,
            r,
            Window::centered(1, edge),
            points.iter().map(|&(x, c)| ColoredPoint::at(x, c)).collect(),
        )
        .unwrap()
    }

    fn integers(edge: f64) -> ColoredPointSet {
        let pts: Vec<(f64, Color)> = (-(edge as i64)..=(edge as i64))
            .map(|n| (n as f64, 1))
            .filter(|&(x, _)| x >= -edge / 2.0 && x < edge / 2.0)
            .collect();
        line(&pts, 1, 1.0, edge)
    }

    #[test]
    fn points_are_sorted_on_construction() {
        let s = line(&[(2.0, 1), (-1.0, 2), (0.5, 1)], 2, 0.5, 8.0);
        let xs: Vec<f64> = s.first_coords().collect();
        assert_eq!(xs, vec![-1.0, 0.5, 2.0]);
        assert_eq!(s.colors(), &[2, 1, 1]);
    }

    #[test]
    fn rejects_duplicates_colors_and_window_violations() {
        let w = Window::centered(1, 4.0);
        let dup = vec![ColoredPoint::at(0.0, 1), ColoredPoint::at(0.0, 2)];
        assert!(ColoredPointSet::new(2, 1.0, w.clone(), dup).is_err());
        let bad_color = vec![ColoredPoint::at(0.0, 3)];
        assert!(matches!(
            ColoredPointSet::new(2, 1.0, w.clone(), bad_color),
            Err(Error::ColorOutOfRange { color: 3, .. })
        ));
        // the window is half-open: the upper face is excluded
        let outside = vec![ColoredPoint::at(2.0, 1)];
        assert!(ColoredPointSet::new(1, 1.0, w.clone(), outside).is_err());
        let lower_face = vec![ColoredPoint::at(-2.0, 1)];
        assert!(ColoredPointSet::new(1, 1.0, w, lower_face).is_ok());
    }

    #[test]
    fn uniform_discreteness_examples() {
        assert!(validate_uniform_discreteness(&integers(10.0)));
        let close = line(&[(0.0, 1), (0.4, 1)], 1, 0.5, 4.0);
        assert!(!validate_uniform_discreteness(&close));
        let exact = line(&[(0.0, 1), (0.5, 1)], 1, 0.5, 4.0);
        assert!(validate_uniform_discreteness(&exact));
    }

    #[test]
    fn uniform_discreteness_in_the_plane_uses_max_norm() {
        let w = Window::centered(2, 10.0);
        let pts = vec![
            ColoredPoint::new(vec![0.0, 0.0], 1),
            ColoredPoint::new(vec![0.5, 3.0], 1),
        ];
        let s = ColoredPointSet::new(1, 1.0, w.clone(), pts).unwrap();
        assert!(validate_uniform_discreteness(&s));
        let pts = vec![
            ColoredPoint::new(vec![0.0, 0.0], 1),
            ColoredPoint::new(vec![0.5, 0.9], 1),
        ];
        let s = ColoredPointSet::new(1, 1.0, w, pts).unwrap();
        assert!(!validate_uniform_discreteness(&s));
    }

    #[test]
    fn count_weights_and_window_underflow() {
        let s = line(&[(0.0, 1), (2.0, 1), (3.0, 2), (4.0, 1)], 2, 1.0, 20.0);
        let f = Indicator::interval(0.0, 4.0);
        let both = WeightSystem::new(vec![1.0, 1.0]).unwrap();
        let a_only = WeightSystem::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(count(&s, &f, &both).unwrap(), 3.0);
        assert_eq!(count(&s, &f, &a_only).unwrap(), 2.0);
        assert_eq!(count(&s, &ZeroFunction, &both).unwrap(), 0.0);
        let wide = Indicator::interval(-20.0, 4.0);
        assert!(matches!(count(&s, &wide, &both), Err(Error::WindowUnderflow)));
    }

    #[test]
    fn restrict_and_flatten() {
        let s = line(&[(0.0, 1), (1.0, 2)], 2, 1.0, 8.0);
        let flat = flatten(&s);
        assert_eq!(flat.num_colors(), 1);
        assert_eq!(flat.first_coords().collect::<Vec<_>>(), vec![0.0, 1.0]);
        let b = restrict_color(&s, 2).unwrap();
        assert_eq!(b.first_coords().collect::<Vec<_>>(), vec![1.0]);
        assert_eq!(b.colors(), &[1]);
        assert!(restrict_color(&s, 3).is_err());
        assert!(restrict_color(&s, 0).is_err());

        let single = integers(6.0);
        assert_eq!(restrict_color(&single, 1).unwrap(), single);
        assert_eq!(flatten(&single), single);

        let empty = ColoredPointSet::empty(2, 1.0, Window::centered(1, 4.0)).unwrap();
        assert!(restrict_color(&empty, 1).unwrap().is_empty());
    }

    #[test]
    fn intensity_of_integers_is_exact() {
        let z = integers(50.0);
        let report = empirical_intensity(&z, &WeightSystem::unit(1)).unwrap();
        assert_eq!(report.per_color, vec![1.0]);
        assert_eq!(report.weighted, 1.0);
        assert_eq!(report.radius_used, 50.0);

        let empty = ColoredPointSet::empty(2, 1.0, Window::centered(1, 4.0)).unwrap();
        let report = empirical_intensity(&empty, &WeightSystem::unit(2)).unwrap();
        assert_eq!(report.per_color, vec![0.0, 0.0]);
        assert_eq!(report.weighted, 0.0);
    }

    #[test]
    fn translation_carries_the_window() {
        let z = integers(10.0);
        let t = z.translated(&[0.25]);
        assert_eq!(t.window().lower(), &[-4.75]);
        assert_eq!(
            empirical_intensity(&z, &WeightSystem::unit(1)).unwrap(),
            empirical_intensity(&t, &WeightSystem::unit(1)).unwrap()
        );
        assert_ne!(z.fingerprint(), t.fingerprint());
    }

    #[test]
    fn restricted_to_subwindow() {
        let z = integers(20.0);
        let sub = z.window().eroded(3.0).unwrap();
        let r = z.restricted_to(&sub).unwrap();
        assert_eq!(r.len(), 14);
        assert!(z.restricted_to(&Window::centered(1, 40.0)).is_err());
    }

    #[test]
    fn find_with_tolerance() {
        let z = integers(10.0);
        assert_eq!(z.find(&[2.0 + 1e-12], 1e-9).map(|i| z.position(i)[0]), Some(2.0));
        assert_eq!(z.find(&[2.5], 1e-9), None);
    }
}
