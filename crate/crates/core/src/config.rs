//! JSON experiment descriptions.
//!
//! ```json
//! {
//!   "generator": {"kind": "periodic4", "edge": 4000},
//!   "weights": [1, 1],
//!   "max_lag": 8,
//!   "k_grid": "0:1:0.25"
//! }
//! ```

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::correlations::{Closure, Pattern};
use crate::diffraction::KnownSystem;
use crate::error::{Error, Result};
use crate::generators::{
    integer_lattice, model_set, normalized_tile_lengths, periodic_example, reduce_rudin_shapiro,
    substitution_fixed_point, suspend, CutProjectScheme, SequenceWindow, SubstitutionSystem,
};
use crate::pointset::{ColoredPoint, ColoredPointSet, WeightSystem};

fn unit_tiles() -> Vec<f64> {
    vec![1.0, 1.0]
}

fn yes() -> bool {
    true
}

fn one() -> f64 {
    1.0
}

fn first_letter() -> u32 {
    1
}

fn fibonacci_window() -> (f64, f64) {
    CutProjectScheme::fibonacci().window()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    ThueMorse {
        length: usize,
        #[serde(default = "unit_tiles")]
        tile_lengths: Vec<f64>,
        #[serde(default)]
        offset: f64,
    },
    /// Two-letter Rudin-Shapiro sequence (the four-letter one when `reduce`
    /// is false).
    RudinShapiro {
        length: usize,
        #[serde(default = "unit_tiles")]
        tile_lengths: Vec<f64>,
        #[serde(default)]
        offset: f64,
        #[serde(default = "yes")]
        reduce: bool,
    },
    /// Cut-and-project set; the Fibonacci lattice when `basis` is omitted.
    ModelSet {
        edge: f64,
        #[serde(default)]
        basis: Option<[[f64; 2]; 2]>,
        #[serde(default = "fibonacci_window")]
        window: (f64, f64),
        #[serde(default = "one")]
        scale: f64,
    },
    Periodic4 {
        edge: f64,
    },
    Integers {
        edge: f64,
    },
    Substitution {
        rules: Vec<Vec<u32>>,
        tile_lengths: Vec<f64>,
        length: usize,
        #[serde(default = "first_letter")]
        seed: u32,
        #[serde(default)]
        offset: f64,
        /// Rescale tile lengths so the mean tile length is one.
        #[serde(default)]
        normalize: bool,
    },
}

impl GeneratorSpec {
    /// The symbolic sequence behind substitution generators, `None` for the
    /// geometric ones.
    pub fn sequence(&self) -> Option<Result<SequenceWindow>> {
        match self {
            GeneratorSpec::ThueMorse { length, .. } => {
                Some(substitution_fixed_point(&SubstitutionSystem::thue_morse(), *length))
            }
            GeneratorSpec::RudinShapiro { length, reduce, .. } => Some(
                substitution_fixed_point(&SubstitutionSystem::rudin_shapiro(), *length).and_then(
                    |s| if *reduce { reduce_rudin_shapiro(&s) } else { Ok(s) },
                ),
            ),
            GeneratorSpec::Substitution {
                rules,
                tile_lengths,
                length,
                seed,
                ..
            } => Some(
                SubstitutionSystem::new(rules.clone(), tile_lengths.clone(), *seed)
                    .and_then(|sys| substitution_fixed_point(&sys, *length)),
            ),
            _ => None,
        }
    }

    pub fn generate(&self) -> Result<ColoredPointSet> {
        match self {
            GeneratorSpec::ThueMorse {
                tile_lengths,
                offset,
                ..
            }
            | GeneratorSpec::RudinShapiro {
                tile_lengths,
                offset,
                ..
            } => {
                let seq = self.sequence().expect("substitution generator")?;
                let lengths = if seq.alphabet_size() == 4 && tile_lengths.len() == 2 {
                    vec![tile_lengths[0], tile_lengths[1], tile_lengths[0], tile_lengths[1]]
                } else {
                    tile_lengths.clone()
                };
                suspend(&seq, &lengths, *offset)
            }
            GeneratorSpec::Substitution {
                tile_lengths,
                offset,
                normalize,
                ..
            } => {
                let seq = self.sequence().expect("substitution generator")?;
                let lengths = if *normalize {
                    normalized_tile_lengths(tile_lengths, &seq.letter_frequencies())?
                } else {
                    tile_lengths.clone()
                };
                suspend(&seq, &lengths, *offset)
            }
            GeneratorSpec::ModelSet {
                edge,
                basis,
                window,
                scale,
            } => {
                let basis = basis.unwrap_or_else(|| CutProjectScheme::fibonacci().basis());
                model_set(&CutProjectScheme::new(basis, *window, *scale)?, *edge)
            }
            GeneratorSpec::Periodic4 { edge } => periodic_example(*edge),
            GeneratorSpec::Integers { edge } => integer_lattice(*edge),
        }
    }

    /// Closed-form system matching this generator, if there is one.
    pub fn known_system(&self) -> Option<KnownSystem> {
        match self {
            GeneratorSpec::ThueMorse { .. } => Some(KnownSystem::ThueMorse),
            GeneratorSpec::RudinShapiro { reduce: true, .. } => Some(KnownSystem::RudinShapiro),
            GeneratorSpec::Periodic4 { .. } => Some(KnownSystem::Periodic4),
            _ => None,
        }
    }
}

/// Evenly spaced values `lo, lo + step, ...` up to `hi` inclusive, written
/// `lo:hi:step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.lo + i as f64 * self.step).collect()
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidParameter(format!("grid must be lo:hi:step, got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let nums = parts
            .iter()
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<Vec<f64>>>()?;
        let (lo, hi, step) = (nums[0], nums[1], nums[2]);
        if !(step > 0.0) || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(bad());
        }
        if (hi - lo) / step > 1e7 {
            return Err(Error::InvalidParameter(format!("grid {s:?} has too many points")));
        }
        Ok(Grid { lo, hi, step })
    }
}

impl TryFrom<String> for Grid {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Grid> for String {
    fn from(g: Grid) -> String {
        format!("{}:{}:{}", g.lo, g.hi, g.step)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternSpec {
    /// `(position, color)` pairs; must include position 0.
    pub points: Vec<(f64, u32)>,
    pub epsilon: f64,
    #[serde(default = "open")]
    pub closure: Closure,
}

fn open() -> Closure {
    Closure::Open
}

impl PatternSpec {
    pub fn build(&self) -> Result<Pattern> {
        let anchors = self
            .points
            .iter()
            .map(|&(x, c)| ColoredPoint::at(x, c))
            .collect();
        Pattern::new(anchors, self.epsilon, self.closure)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub generator: Option<GeneratorSpec>,
    /// Point-set file to read instead of generating.
    pub input: Option<PathBuf>,
    pub weights: Option<Vec<f64>>,
    pub max_lag: Option<f64>,
    /// Correlate the symbol sequence (integer lags) rather than the points.
    pub sequence: bool,
    pub k_list: Option<Vec<f64>>,
    pub k_grid: Option<Grid>,
    pub t_list: Option<Vec<f64>>,
    pub t_grid: Option<Grid>,
    /// Displacement tuples for n-point correlations, all of the same length.
    pub tuples: Option<Vec<Vec<f64>>>,
    pub pattern: Option<PatternSpec>,
    pub epsilon: Option<f64>,
    pub threshold: Option<f64>,
    pub tolerance: Option<f64>,
    pub method: Option<String>,
    pub system: Option<KnownSystem>,
    /// Number of random sub-windows for square-mean intensities.
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub json: bool,
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: Option<f64>| match v {
            Some(x) if !(x > 0.0 && x.is_finite()) => Err(Error::InvalidParameter(format!(
                "{name} must be positive and finite, got {x}"
            ))),
            _ => Ok(()),
        };
        positive("epsilon", self.epsilon)?;
        positive("threshold", self.threshold)?;
        if let Some(lag) = self.max_lag {
            if !(lag >= 0.0 && lag.is_finite()) {
                return Err(Error::InvalidParameter(format!("max_lag must be non-negative, got {lag}")));
            }
        }
        if let Some(t) = self.tolerance {
            if !(t >= 0.0) {
                return Err(Error::InvalidParameter(format!("tolerance must be non-negative, got {t}")));
            }
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidParameter("threads must be at least 1".into()));
        }
        if self.samples == Some(0) {
            return Err(Error::InvalidParameter("samples must be at least 1".into()));
        }
        if let Some(w) = &self.weights {
            WeightSystem::new(w.clone())?;
        }
        if let Some(tuples) = &self.tuples {
            if let Some(first) = tuples.first() {
                if first.is_empty() || tuples.iter().any(|t| t.len() != first.len()) {
                    return Err(Error::InvalidParameter(
                        "tuples must be non-empty and of equal length".into(),
                    ));
                }
            }
        }
        if let Some(GeneratorSpec::ModelSet { edge, .. } | GeneratorSpec::Periodic4 { edge } | GeneratorSpec::Integers { edge }) =
            &self.generator
        {
            positive("edge", Some(*edge))?;
        }
        if self.generator.is_some() && self.input.is_some() {
            return Err(Error::InvalidParameter("give either generator or input, not both".into()));
        }
        Ok(())
    }

    /// Explicit list and grid values together, list first.
    pub fn k_values(&self) -> Vec<f64> {
        merge_values(&self.k_list, &self.k_grid)
    }

    pub fn t_values(&self) -> Vec<f64> {
        merge_values(&self.t_list, &self.t_grid)
    }
}

fn merge_values(list: &Option<Vec<f64>>, grid: &Option<Grid>) -> Vec<f64> {
    let mut v = list.clone().unwrap_or_default();
    if let Some(g) = grid {
        v.extend(g.values());
    }
    v
}
