//! Point-set generators: substitution sequences and their suspensions,
//! cut-and-project model sets, and periodic sets.

use crate::error::{Error, Result};
use crate::pointset::{Color, ColoredPoint, ColoredPointSet, Window};

/// The golden ratio.
pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;

/// A substitution rule on the alphabet `1..=alphabet_size`, with tile lengths
/// used when the fixed point is suspended on the line.
#[derive(Debug, Clone, PartialEq)]
pub struct SubstitutionSystem {
    alphabet_size: usize,
    rules: Vec<Vec<Color>>,
    tile_lengths: Vec<f64>,
    seed: Color,
}

impl SubstitutionSystem {
    /// `rules[a - 1]` is the image of letter `a`.
    pub fn new(rules: Vec<Vec<Color>>, tile_lengths: Vec<f64>, seed: Color) -> Result<Self> {
        let m = rules.len();
        if m == 0 {
            return Err(Error::InvalidSubstitution("empty alphabet".into()));
        }
        for (a, word) in rules.iter().enumerate() {
            if word.is_empty() {
                return Err(Error::InvalidSubstitution(format!(
                    "rule for letter {} is empty",
                    a + 1
                )));
            }
            if let Some(&bad) = word.iter().find(|&&c| c == 0 || c as usize > m) {
                return Err(Error::InvalidSubstitution(format!(
                    "rule for letter {} uses letter {bad} outside 1..={m}",
                    a + 1
                )));
            }
        }
        if tile_lengths.len() != m || tile_lengths.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::InvalidSubstitution(format!(
                "need {m} positive tile lengths, got {tile_lengths:?}"
            )));
        }
        if seed == 0 || seed as usize > m {
            return Err(Error::InvalidSubstitution(format!("seed {seed} outside 1..={m}")));
        }
        let system = Self {
            alphabet_size: m,
            rules,
            tile_lengths,
            seed,
        };
        if !system.is_primitive() {
            return Err(Error::InvalidSubstitution("substitution is not primitive".into()));
        }
        Ok(system)
    }

    /// `a -> ab`, `b -> ba`, seeded with `a`.
    pub fn thue_morse() -> Self {
        Self::new(vec![vec![1, 2], vec![2, 1]], vec![1.0, 1.0], 1).expect("valid rules")
    }

    /// Four-letter Rudin-Shapiro substitution. Letters `1, 2, 3, 4` stand for
    /// `1, 2, 1bar, 2bar`: `1 -> 1 2bar`, `2 -> 1bar 2bar`, `1bar -> 1bar 2`,
    /// `2bar -> 1 2`, seeded with `1`.
    pub fn rudin_shapiro() -> Self {
        Self::new(
            vec![vec![1, 4], vec![3, 4], vec![3, 2], vec![1, 2]],
            vec![1.0; 4],
            1,
        )
        .expect("valid rules")
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn rules(&self) -> &[Vec<Color>] {
        &self.rules
    }

    pub fn tile_lengths(&self) -> &[f64] {
        &self.tile_lengths
    }

    pub fn seed(&self) -> Color {
        self.seed
    }

    /// Some power of the substitution matrix is strictly positive. Powers are
    /// checked up to Wielandt's bound `(m - 1)^2 + 1`, which is sharp.
    pub fn is_primitive(&self) -> bool {
        let m = self.alphabet_size;
        let mut base = vec![vec![false; m]; m];
        for (a, word) in self.rules.iter().enumerate() {
            for &c in word {
                base[a][c as usize - 1] = true;
            }
        }
        let mut power = base.clone();
        for _ in 0..(m - 1) * (m - 1) + 1 {
            if power.iter().all(|row| row.iter().all(|&x| x)) {
                return true;
            }
            let mut next = vec![vec![false; m]; m];
            for i in 0..m {
                for k in 0..m {
                    if power[i][k] {
                        for j in 0..m {
                            next[i][j] |= base[k][j];
                        }
                    }
                }
            }
            power = next;
        }
        false
    }

    /// One application of the substitution to a word.
    pub fn apply(&self, word: &[Color]) -> Vec<Color> {
        word.iter()
            .flat_map(|&c| self.rules[c as usize - 1].iter().copied())
            .collect()
    }
}

/// A finite stretch of a symbolic sequence. `origin` is the index of the
/// symbol that sits at position zero; symbols before it have negative index.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceWindow {
    symbols: Vec<Color>,
    origin: usize,
    alphabet_size: usize,
}

impl SequenceWindow {
    /// Symbols indexed from zero.
    pub fn new(symbols: Vec<Color>, alphabet_size: usize) -> Result<Self> {
        Self::with_origin(symbols, alphabet_size, 0)
    }

    pub fn with_origin(symbols: Vec<Color>, alphabet_size: usize, origin: usize) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::InvalidParameter("alphabet size must be positive".into()));
        }
        if let Some(&bad) = symbols
            .iter()
            .find(|&&c| c == 0 || c as usize > alphabet_size)
        {
            return Err(Error::ColorOutOfRange {
                color: bad,
                num_colors: alphabet_size,
            });
        }
        if origin > symbols.len() {
            return Err(Error::InvalidParameter(format!(
                "origin {origin} beyond the {} symbols",
                symbols.len()
            )));
        }
        Ok(Self {
            symbols,
            origin,
            alphabet_size,
        })
    }

    /// Parses letters `a`, `b`, ... as colors `1`, `2`, ...
    pub fn from_letters(letters: &str, alphabet_size: usize) -> Result<Self> {
        let symbols = letters
            .chars()
            .map(|ch| {
                if ch.is_ascii_lowercase() {
                    Ok(ch as u32 - 'a' as u32 + 1)
                } else {
                    Err(Error::InvalidParameter(format!("unexpected letter {ch:?}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(symbols, alphabet_size)
    }

    pub fn to_letters(&self) -> String {
        self.symbols
            .iter()
            .map(|&c| char::from_u32('a' as u32 + c - 1).unwrap_or('?'))
            .collect()
    }

    pub fn symbols(&self) -> &[Color] {
        &self.symbols
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Relative frequency of every letter.
    pub fn letter_frequencies(&self) -> Vec<f64> {
        let mut counts = vec![0usize; self.alphabet_size];
        for &c in &self.symbols {
            counts[c as usize - 1] += 1;
        }
        let n = self.symbols.len().max(1) as f64;
        counts.into_iter().map(|c| c as f64 / n).collect()
    }
}

/// Prefix of the one-sided fixed point of `system` starting with its seed,
/// truncated to exactly `min_length` symbols.
///
/// The returned window puts its origin in the middle of the prefix, so the
/// suspension covers both sides of zero.
pub fn substitution_fixed_point(
    system: &SubstitutionSystem,
    min_length: usize,
) -> Result<SequenceWindow> {
    if min_length == 0 {
        return Err(Error::InvalidParameter("min_length must be at least 1".into()));
    }
    let seed = system.seed;
    let seed_rule = &system.rules[seed as usize - 1];
    if seed_rule[0] != seed {
        return Err(Error::SeedNotSelfProlongable(format!(
            "the image of {seed} does not begin with {seed}"
        )));
    }
    if seed_rule.len() == 1 {
        if system.alphabet_size == 1 {
            let symbols = vec![seed; min_length];
            return SequenceWindow::with_origin(symbols, 1, min_length / 2);
        }
        return Err(Error::SeedNotSelfProlongable(format!(
            "the image of {seed} is {seed} alone, iteration does not grow"
        )));
    }

    // blocks[a] holds s^g(a) for the current generation g
    let mut blocks: Vec<Vec<Color>> = (1..=system.alphabet_size as Color).map(|a| vec![a]).collect();
    while blocks[seed as usize - 1].len() < min_length {
        blocks = system
            .rules
            .iter()
            .map(|rule| {
                let len = rule.iter().map(|&b| blocks[b as usize - 1].len()).sum();
                let mut out = Vec::with_capacity(len);
                for &b in rule {
                    out.extend_from_slice(&blocks[b as usize - 1]);
                }
                out
            })
            .collect();
    }
    let mut symbols = std::mem::take(&mut blocks[seed as usize - 1]);
    symbols.truncate(min_length);
    SequenceWindow::with_origin(symbols, system.alphabet_size, min_length / 2)
}

/// Collapses the four-letter Rudin-Shapiro alphabet to two letters:
/// unbarred letters become `a`, barred letters become `b`.
pub fn reduce_rudin_shapiro(seq: &SequenceWindow) -> Result<SequenceWindow> {
    if seq.alphabet_size != 4 {
        return Err(Error::InvalidParameter(format!(
            "expected the 4-letter alphabet, got {} letters",
            seq.alphabet_size
        )));
    }
    let symbols = seq
        .symbols
        .iter()
        .map(|&c| match c {
            1 | 2 => Ok(1),
            3 | 4 => Ok(2),
            other => Err(Error::UnexpectedSymbol(other)),
        })
        .collect::<Result<Vec<_>>>()?;
    SequenceWindow::with_origin(symbols, 2, seq.origin)
}

/// Rescales tile lengths so that the mean tile length under the given letter
/// frequencies is one.
pub fn normalized_tile_lengths(lengths: &[f64], frequencies: &[f64]) -> Result<Vec<f64>> {
    if lengths.len() != frequencies.len() {
        return Err(Error::InvalidParameter(
            "lengths and frequencies differ in size".into(),
        ));
    }
    let mean: f64 = lengths.iter().zip(frequencies).map(|(l, f)| l * f).sum();
    if !(mean > 0.0) {
        return Err(Error::InvalidParameter("mean tile length must be positive".into()));
    }
    Ok(lengths.iter().map(|l| l / mean).collect())
}

/// Places symbol `n` of the sequence at `t + S_n`, where `S_n` is the signed
/// total length of the tiles between the origin and symbol `n`.
///
/// The window is exactly the stretch covered by the tiles, so every symbol
/// of the sequence lands in it. The separation is half the shortest tile.
pub fn suspend(seq: &SequenceWindow, lengths: &[f64], t: f64) -> Result<ColoredPointSet> {
    let m = seq.alphabet_size;
    if lengths.len() != m || lengths.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
        return Err(Error::InvalidParameter(format!(
            "need {m} positive tile lengths, got {lengths:?}"
        )));
    }
    let tile = |c: Color| lengths[c as usize - 1];
    let n = seq.symbols.len();
    let mut offsets = vec![0.0; n];
    let mut s = 0.0;
    for i in seq.origin..n {
        offsets[i] = s;
        s += tile(seq.symbols[i]);
    }
    let end = s;
    let mut s = 0.0;
    for i in (0..seq.origin).rev() {
        s -= tile(seq.symbols[i]);
        offsets[i] = s;
    }
    let start = if n == 0 { 0.0 } else { offsets[0] };
    let separation = lengths.iter().copied().fold(f64::INFINITY, f64::min) / 2.0;
    let window = Window::from_lower(vec![t + start], end - start)?;
    let points = offsets
        .iter()
        .zip(&seq.symbols)
        .map(|(&o, &c)| ColoredPoint::at(t + o, c))
        .collect();
    ColoredPointSet::new(m, separation, window, points)
}

/// A planar lattice with a window in internal space.
///
/// Lattice points are `n * basis[0] + m * basis[1]`; the first coordinate of
/// each row is physical, the second internal. The acceptance window is
/// `[scale * lo, scale * hi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CutProjectScheme {
    basis: [[f64; 2]; 2],
    window: (f64, f64),
    scale: f64,
}

impl CutProjectScheme {
    pub fn new(basis: [[f64; 2]; 2], window: (f64, f64), scale: f64) -> Result<Self> {
        let det = basis[0][0] * basis[1][1] - basis[0][1] * basis[1][0];
        if !det.is_finite() || det.abs() < 1e-12 || basis.iter().flatten().any(|v| !v.is_finite())
        {
            return Err(Error::DegenerateBasis(det));
        }
        if !(window.0 < window.1) || !window.0.is_finite() || !window.1.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "window [{}, {}) is empty",
                window.0, window.1
            )));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale must be positive, got {scale}")));
        }
        Ok(Self {
            basis,
            window,
            scale,
        })
    }

    /// Rows `(1, 1)` and `(tau, 1 - tau)` with window `[-1/2, 1/2)`.
    pub fn fibonacci() -> Self {
        Self::new(
            [[1.0, 1.0], [GOLDEN_RATIO, 1.0 - GOLDEN_RATIO]],
            (-0.5, 0.5),
            1.0,
        )
        .expect("valid scheme")
    }

    pub fn with_scale(&self, scale: f64) -> Result<Self> {
        Self::new(self.basis, self.window, scale)
    }

    pub fn with_window(&self, lo: f64, hi: f64) -> Result<Self> {
        Self::new(self.basis, (lo, hi), self.scale)
    }

    pub fn basis(&self) -> [[f64; 2]; 2] {
        self.basis
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn determinant(&self) -> f64 {
        self.basis[0][0] * self.basis[1][1] - self.basis[0][1] * self.basis[1][0]
    }

    pub fn covolume(&self) -> f64 {
        self.determinant().abs()
    }

    pub fn scaled_window(&self) -> (f64, f64) {
        (self.scale * self.window.0, self.scale * self.window.1)
    }

    pub fn window_length(&self) -> f64 {
        self.window.1 - self.window.0
    }

    /// Physical and internal coordinates of the lattice point `(n, m)`.
    #[inline]
    pub fn lattice_point(&self, n: i64, m: i64) -> (f64, f64) {
        let (n, m) = (n as f64, m as f64);
        (
            n * self.basis[0][0] + m * self.basis[1][0],
            n * self.basis[0][1] + m * self.basis[1][1],
        )
    }

    /// The dual lattice point with integer pairing `(p, q)` against the two
    /// basis vectors, as (physical, internal) coordinates.
    pub fn dual_point(&self, p: i64, q: i64) -> (f64, f64) {
        let [[a, b], [c, d]] = self.basis;
        let det = self.determinant();
        let (p, q) = (p as f64, q as f64);
        // solve basis * k = (p, q)
        ((d * p - b * q) / det, (a * q - c * p) / det)
    }

    /// Expected density of the model set: window length over covolume.
    pub fn density(&self) -> f64 {
        self.scale * self.window_length() / self.covolume()
    }
}

/// The model set `{ physical(t) : t in L, internal(t) in scale * W }` inside the
/// centered window of edge `edge`, with exact lattice coordinates attached.
///
/// The lattice is enumerated row by row: for each `n` the two window
/// conditions bound `m` to an interval, and only that interval is visited.
pub fn model_set(scheme: &CutProjectScheme, edge: f64) -> Result<ColoredPointSet> {
    if !(edge > 0.0 && edge.is_finite()) {
        return Err(Error::InvalidParameter(format!("window edge must be positive, got {edge}")));
    }
    let window = Window::centered(1, edge);
    let (p0, p1) = (window.lower()[0], window.upper(0));
    let (i0, i1) = scheme.scaled_window();
    let [[a, c], [b, d]] = scheme.basis;
    // physical = a n + b m, internal = c n + d m
    let det = a * d - b * c;
    let corner_n = |phys: f64, int: f64| (d * phys - b * int) / det;
    let corners = [
        corner_n(p0, i0),
        corner_n(p0, i1),
        corner_n(p1, i0),
        corner_n(p1, i1),
    ];
    let n_lo = corners.iter().copied().fold(f64::INFINITY, f64::min).floor() as i64 - 1;
    let n_hi = corners.iter().copied().fold(f64::NEG_INFINITY, f64::max).ceil() as i64 + 1;

    let mut entries = Vec::new();
    for n in n_lo..=n_hi {
        let nf = n as f64;
        let mut m_lo = f64::NEG_INFINITY;
        let mut m_hi = f64::INFINITY;
        let mut feasible = true;
        for (offset, coef, lo, hi) in [(a * nf, b, p0, p1), (c * nf, d, i0, i1)] {
            if coef == 0.0 {
                feasible &= offset >= lo && offset < hi;
            } else {
                let (u, v) = ((lo - offset) / coef, (hi - offset) / coef);
                m_lo = m_lo.max(u.min(v));
                m_hi = m_hi.min(u.max(v));
            }
        }
        if !feasible || m_lo > m_hi {
            continue;
        }
        for m in (m_lo.floor() as i64 - 1)..=(m_hi.ceil() as i64 + 1) {
            let (phys, int) = scheme.lattice_point(n, m);
            if phys >= p0 && phys < p1 && int >= i0 && int < i1 {
                entries.push((ColoredPoint::at(phys, 1), [n, m]));
            }
        }
    }

    let mut xs: Vec<f64> = entries.iter().map(|(p, _)| p.position[0]).collect();
    xs.sort_by(f64::total_cmp);
    let min_gap = xs
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let separation = if min_gap.is_finite() && min_gap > 0.0 {
        min_gap
    } else if min_gap == 0.0 {
        return Err(Error::InvalidPointSet(
            "projection is not injective on the enumerated lattice points".into(),
        ));
    } else {
        edge
    };
    ColoredPointSet::with_lattice_coords(1, separation, window, entries)
}

/// The periodic set `{ base + n * period }` for every `(base, color)` in the
/// motif, inside the centered window of edge `edge`.
pub fn periodic(
    motif: &[(f64, Color)],
    period: f64,
    num_colors: usize,
    separation: f64,
    edge: f64,
) -> Result<ColoredPointSet> {
    if !(period > 0.0 && edge > 0.0) {
        return Err(Error::InvalidParameter(
            "period and window edge must be positive".into(),
        ));
    }
    let window = Window::centered(1, edge);
    let (lo, hi) = (window.lower()[0], window.upper(0));
    let mut points = Vec::new();
    for &(base, color) in motif {
        let first = ((lo - base) / period).floor() as i64 - 1;
        let last = ((hi - base) / period).ceil() as i64 + 1;
        for n in first..=last {
            let x = base + n as f64 * period;
            if x >= lo && x < hi {
                points.push(ColoredPoint::at(x, color));
            }
        }
    }
    ColoredPointSet::new(num_colors, separation, window, points)
}

/// Two colors with period four: `a` at residues 0 and 2, `b` at residue 3.
pub fn periodic_example(edge: f64) -> Result<ColoredPointSet> {
    periodic(&[(0.0, 1), (2.0, 1), (3.0, 2)], 4.0, 2, 1.0, edge)
}

/// The integers, one color.
pub fn integer_lattice(edge: f64) -> Result<ColoredPointSet> {
    periodic(&[(0.0, 1)], 1.0, 1, 1.0, edge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointset::{count, validate_uniform_discreteness, Indicator, WeightSystem};

    #[test]
    fn thue_morse_prefix() {
        let seq = substitution_fixed_point(&SubstitutionSystem::thue_morse(), 16).unwrap();
        assert_eq!(seq.to_letters(), "abbabaabbaababba");
        assert_eq!(seq.origin(), 8);
    }

    #[test]
    fn thue_morse_truncates_to_requested_length() {
        let seq = substitution_fixed_point(&SubstitutionSystem::thue_morse(), 11).unwrap();
        assert_eq!(seq.to_letters(), "abbabaabbaa");
    }

    #[test]
    fn rudin_shapiro_prefix_and_reduction() {
        let seq = substitution_fixed_point(&SubstitutionSystem::rudin_shapiro(), 4).unwrap();
        // 1 2bar 1 2
        assert_eq!(seq.symbols(), &[1, 4, 1, 2]);
        let reduced = reduce_rudin_shapiro(&seq).unwrap();
        assert_eq!(reduced.to_letters(), "abaa");
        assert_eq!(reduced.origin(), seq.origin());
    }

    #[test]
    fn reduction_edge_cases() {
        let unbarred = SequenceWindow::new(vec![1, 2, 2, 1], 4).unwrap();
        assert_eq!(reduce_rudin_shapiro(&unbarred).unwrap().to_letters(), "aaaa");
        let empty = SequenceWindow::new(vec![], 4).unwrap();
        assert!(reduce_rudin_shapiro(&empty).unwrap().is_empty());
        let two = SequenceWindow::new(vec![1, 2], 2).unwrap();
        assert!(reduce_rudin_shapiro(&two).is_err());
    }

    #[test]
    fn constant_substitution() {
        let system = SubstitutionSystem::new(vec![vec![1]], vec![1.0], 1).unwrap();
        let seq = substitution_fixed_point(&system, 7).unwrap();
        assert_eq!(seq.symbols(), &[1; 7]);
    }

    #[test]
    fn seed_must_prolong_itself() {
        let system = SubstitutionSystem::new(vec![vec![2, 1], vec![1, 2]], vec![1.0, 1.0], 1).unwrap();
        assert!(matches!(
            substitution_fixed_point(&system, 8),
            Err(Error::SeedNotSelfProlongable(_))
        ));
    }

    #[test]
    fn primitivity() {
        assert!(SubstitutionSystem::thue_morse().is_primitive());
        assert!(SubstitutionSystem::rudin_shapiro().is_primitive());
        // a -> a, b -> ab is not primitive
        assert!(SubstitutionSystem::new(vec![vec![1], vec![1, 2]], vec![1.0, 1.0], 2).is_err());
        // Fibonacci a -> ab, b -> a needs the second power
        assert!(SubstitutionSystem::new(vec![vec![1, 2], vec![1]], vec![1.0, 1.0], 1).is_ok());
    }

    #[test]
    fn fixed_point_is_invariant() {
        for system in [SubstitutionSystem::thue_morse(), SubstitutionSystem::rudin_shapiro()] {
            let seq = substitution_fixed_point(&system, 512).unwrap();
            let image = system.apply(seq.symbols());
            assert_eq!(&image[..512], seq.symbols());
        }
    }

    #[test]
    fn thue_morse_letter_frequencies() {
        for len in [100usize, 1000, 4097] {
            let seq = substitution_fixed_point(&SubstitutionSystem::thue_morse(), len).unwrap();
            for f in seq.letter_frequencies() {
                assert!((f - 0.5).abs() <= 2.0 / len as f64);
            }
        }
    }

    #[test]
    fn suspension_with_unit_tiles() {
        let seq = SequenceWindow::from_letters("abba", 2).unwrap();
        let s = suspend(&seq, &[1.0, 1.0], 0.0).unwrap();
        assert_eq!(s.first_coords().collect::<Vec<_>>(), vec![0.0, 1.0, 2.0, 3.0]);
        assert_eq!(s.colors(), &[1, 2, 2, 1]);
        assert_eq!(s.window().lower(), &[0.0]);
        assert_eq!(s.window().edge(), 4.0);
        assert_eq!(s.separation(), 0.5);
    }

    #[test]
    fn suspension_with_unequal_tiles() {
        let seq = SequenceWindow::from_letters("ab", 2).unwrap();
        let s = suspend(&seq, &[1.0, 2.0], 0.0).unwrap();
        assert_eq!(s.first_coords().collect::<Vec<_>>(), vec![0.0, 1.0]);
        // next tile boundary at 3
        assert_eq!(s.window().upper(0), 3.0);
    }

    #[test]
    fn suspension_places_origin_at_offset() {
        let seq = SequenceWindow::with_origin(vec![1, 2, 2, 1], 2, 2).unwrap();
        let s = suspend(&seq, &[1.0, 3.0], 0.5).unwrap();
        assert_eq!(s.first_coords().collect::<Vec<_>>(), vec![-3.5, -2.5, 0.5, 3.5]);
        let base = suspend(&seq, &[1.0, 3.0], 0.0).unwrap();
        assert_eq!(base.translated(&[0.5]), s);
    }

    #[test]
    fn tile_length_normalization() {
        let l = normalized_tile_lengths(&[2.0, 4.0], &[0.5, 0.5]).unwrap();
        assert_eq!(l, vec![2.0 / 3.0, 4.0 / 3.0]);
    }

    #[test]
    fn periodic_example_small_window() {
        let s = periodic_example(8.0).unwrap();
        assert_eq!(
            s.first_coords().collect::<Vec<_>>(),
            vec![-4.0, -2.0, -1.0, 0.0, 2.0, 3.0]
        );
        assert_eq!(s.colors(), &[1, 1, 2, 1, 1, 2]);
        assert!(validate_uniform_discreteness(&s));
    }

    #[test]
    fn periodic_example_residues_and_counts() {
        for periods in 1..20 {
            let s = periodic_example(4.0 * periods as f64).unwrap();
            assert_eq!(s.len(), 3 * periods);
            for x in s.first_coords() {
                assert!([0, 2, 3].contains(&(x as i64).rem_euclid(4)));
            }
        }
    }

    #[test]
    fn periodic_example_counts_on_an_interval() {
        let s = periodic_example(40.0).unwrap();
        let f = Indicator::interval(0.0, 4.0);
        assert_eq!(count(&s, &f, &WeightSystem::unit(2)).unwrap(), 3.0);
        let b = crate::pointset::restrict_color(&s, 2).unwrap();
        assert!(b.first_coords().all(|x| (x as i64).rem_euclid(4) == 3));
    }

    #[test]
    fn identity_scheme_gives_integers() {
        let scheme = CutProjectScheme::new([[1.0, 0.0], [0.0, 1.0]], (-0.5, 0.5), 1.0).unwrap();
        let s = model_set(&scheme, 21.0).unwrap();
        let expected: Vec<f64> = (-10..=10).map(|n| n as f64).collect();
        assert_eq!(s.first_coords().collect::<Vec<_>>(), expected);
        assert!(s.has_lattice_coords());
    }

    #[test]
    fn degenerate_schemes_are_rejected() {
        assert!(matches!(
            CutProjectScheme::new([[1.0, 2.0], [2.0, 4.0]], (-0.5, 0.5), 1.0),
            Err(Error::DegenerateBasis(_))
        ));
        assert!(CutProjectScheme::new([[1.0, 0.0], [0.0, 1.0]], (0.5, 0.5), 1.0).is_err());
    }

    #[test]
    fn tiny_window_is_empty() {
        let scheme = CutProjectScheme::fibonacci().with_scale(1e-12).unwrap();
        let s = model_set(&scheme, 50.0).unwrap();
        // only the origin survives a window that shrinks to {0}
        assert!(s.len() <= 1);
        let shifted = CutProjectScheme::fibonacci()
            .with_window(0.25, 0.75)
            .unwrap()
            .with_scale(1e-12)
            .unwrap();
        assert!(model_set(&shifted, 50.0).unwrap().is_empty());
    }

    #[test]
    fn fibonacci_model_set_density_gaps_and_discreteness() {
        let scheme = CutProjectScheme::fibonacci();
        let s = model_set(&scheme, 2000.0).unwrap();
        let density = s.len() as f64 / 2000.0;
        assert!((density - scheme.density()).abs() < 5e-3, "{density}");
        assert!(validate_uniform_discreteness(&s));

        let xs: Vec<f64> = s.first_coords().collect();
        let mut gaps: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        gaps.sort_by(f64::total_cmp);
        gaps.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        assert!(gaps.len() <= 3, "gaps {gaps:?}");

        // the minimal gap is already stable at a smaller window
        let small = model_set(&scheme, 200.0).unwrap();
        assert!((small.separation() - s.separation()).abs() < 1e-9);
    }

    #[test]
    fn model_set_lattice_coords_match_positions() {
        let scheme = CutProjectScheme::fibonacci();
        let s = model_set(&scheme, 100.0).unwrap();
        for i in 0..s.len() {
            let [n, m] = s.lattice_coords(i).unwrap();
            let (phys, int) = scheme.lattice_point(n, m);
            assert_eq!(phys, s.position(i)[0]);
            assert!((-0.5..0.5).contains(&int));
        }
    }

    #[test]
    fn dual_points_pair_to_integers() {
        let scheme = CutProjectScheme::fibonacci();
        for (p, q) in [(1, 0), (0, 1), (3, -2), (-5, 8)] {
            let (kx, ky) = scheme.dual_point(p, q);
            let b = scheme.basis();
            assert!((b[0][0] * kx + b[0][1] * ky - p as f64).abs() < 1e-12);
            assert!((b[1][0] * kx + b[1][1] * ky - q as f64).abs() < 1e-12);
        }
    }
}
