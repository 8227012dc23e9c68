//! `aperiodica`: generate colored point sets and compute their correlations
//! and diffraction from the command line.
//!
//! Exit codes: 0 on success, 1 on usage or configuration errors, 2 when a
//! verification (the `verify` suite or an inequality sweep) fails.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use aperiodica::analysis::{almost_periods, bragg_peaks_above, verify_inequality, DEFAULT_TOLERANCE};
use aperiodica::config::{ExperimentConfig, GeneratorSpec, Grid, PatternSpec};
use aperiodica::correlations::{
    autocorrelation, npoint_correlation, pattern_frequency, sequence_autocorrelation, Closure,
};
use aperiodica::diffraction::{
    autocorrelation_diffraction, closed_form_estimate, exponential_sum_diffraction,
    model_set_peaks, square_mean_intensity, DiffractionEntry, DiffractionEstimate, Method,
};
use aperiodica::generators::CutProjectScheme;
use aperiodica::io;
use aperiodica::reproduce;
use aperiodica::{flatten, ColoredPointSet, WeightSystem};

const THREADS_ENV: &str = "APERIODICA_THREADS";

#[derive(Parser)]
#[command(name = "aperiodica", version, about = "Correlations and diffraction of aperiodic point sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated point set in the text format.
    Generate(Common),
    /// Weighted autocorrelation coefficients, or almost periods with --epsilon.
    Autocorrelate(Common),
    /// Higher-order correlations at displacement tuples.
    Npoint(Common),
    /// Diffraction intensities at a list or grid of wave vectors.
    Diffract(Common),
    /// Frequency of a colored pattern.
    Freq(Common),
    /// Check the autocorrelation/diffraction inequality on a (k, t) grid.
    Inequality(Common),
    /// Run the reproduction suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    ThueMorse,
    RudinShapiro,
    ModelSet,
    Periodic4,
    Integers,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    ExponentialSum,
    Fourier,
    ClosedForm,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON experiment config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Point-set file to read instead of generating one.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Generator kind (shorthand for a config generator).
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    /// Window edge for geometric generators.
    #[arg(long)]
    edge: Option<f64>,
    /// Sequence length for substitution generators.
    #[arg(long)]
    length: Option<usize>,
    /// Window scale for model sets.
    #[arg(long)]
    scale: Option<f64>,
    /// Comma-separated weights, one per color.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    weights: Option<Vec<f64>>,
    #[arg(long)]
    max_lag: Option<f64>,
    /// Correlate the symbol sequence with integer lags.
    #[arg(long)]
    sequence: bool,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    k_list: Option<Vec<f64>>,
    /// Wave vector grid lo:hi:step.
    #[arg(long, allow_hyphen_values = true)]
    k_grid: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    t_list: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    t_grid: Option<String>,
    /// Displacement tuples, `;` between tuples and `,` within, e.g. "2,4;1,3".
    #[arg(long, allow_hyphen_values = true)]
    tuples: Option<String>,
    /// Pattern points as position:color pairs, e.g. "0:1,1:2".
    #[arg(long, allow_hyphen_values = true)]
    pattern: Option<String>,
    /// Pattern tolerance, or the almost-period threshold for autocorrelate.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Use a closed tolerance cube for patterns.
    #[arg(long)]
    closed: bool,
    /// Keep only diffraction entries above this intensity.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Average squared amplitudes over this many random half-size sub-windows.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Emit JSON with metadata instead of CSV.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run only this check.
    #[arg(long)]
    only: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
}

/// An error that maps to exit code 2.
#[derive(Debug)]
struct VerificationFailed(String);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for VerificationFailed {}

fn parse_tuples(text: &str) -> Result<Vec<Vec<f64>>> {
    text.split(';')
        .map(|tuple| {
            tuple
                .split(',')
                .map(|v| v.trim().parse::<f64>().with_context(|| format!("bad tuple value {v:?}")))
                .collect()
        })
        .collect()
}

fn parse_pattern(text: &str) -> Result<Vec<(f64, u32)>> {
    text.split(',')
        .map(|pair| {
            let (x, c) = pair
                .split_once(':')
                .ok_or_else(|| anyhow!("pattern entries are position:color, got {pair:?}"))?;
            Ok((x.trim().parse()?, c.trim().parse()?))
        })
        .collect()
}

impl Common {
    /// Config file (if any) with the flags applied on top.
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(path) => ExperimentConfig::from_path(path)
                .with_context(|| format!("reading config {}", path.display()))?,
            None => ExperimentConfig::default(),
        };
        if let Some(kind) = self.kind {
            let edge = self.edge.unwrap_or(1000.0);
            let length = self.length.unwrap_or(1 << 12);
            c.generator = Some(match kind {
                Kind::ThueMorse => GeneratorSpec::ThueMorse {
                    length,
                    tile_lengths: vec![1.0, 1.0],
                    offset: 0.0,
                },
                Kind::RudinShapiro => GeneratorSpec::RudinShapiro {
                    length,
                    tile_lengths: vec![1.0, 1.0],
                    offset: 0.0,
                    reduce: true,
                },
                Kind::ModelSet => GeneratorSpec::ModelSet {
                    edge,
                    basis: None,
                    window: CutProjectScheme::fibonacci().window(),
                    scale: self.scale.unwrap_or(1.0),
                },
                Kind::Periodic4 => GeneratorSpec::Periodic4 { edge },
                Kind::Integers => GeneratorSpec::Integers { edge },
            });
            c.input = None;
        } else if self.edge.is_some() || self.length.is_some() || self.scale.is_some() {
            match c.generator.as_mut() {
                Some(
                    GeneratorSpec::Periodic4 { edge } | GeneratorSpec::Integers { edge },
                ) => *edge = self.edge.unwrap_or(*edge),
                Some(GeneratorSpec::ModelSet { edge, scale, .. }) => {
                    *edge = self.edge.unwrap_or(*edge);
                    *scale = self.scale.unwrap_or(*scale);
                }
                Some(
                    GeneratorSpec::ThueMorse { length, .. }
                    | GeneratorSpec::RudinShapiro { length, .. }
                    | GeneratorSpec::Substitution { length, .. },
                ) => *length = self.length.unwrap_or(*length),
                None => bail!("--edge, --length and --scale need a generator (--kind or config)"),
            }
        }
        if let Some(path) = &self.input {
            c.input = Some(path.clone());
            c.generator = None;
        }
        macro_rules! take {
            ($($field:ident),*) => {$(
                if self.$field.is_some() {
                    c.$field = self.$field.clone();
                }
            )*};
        }
        take!(weights, max_lag, k_list, t_list, epsilon, threshold, tolerance, samples, seed, output, threads);
        if let Some(g) = &self.k_grid {
            c.k_grid = Some(g.parse::<Grid>()?);
        }
        if let Some(g) = &self.t_grid {
            c.t_grid = Some(g.parse::<Grid>()?);
        }
        if let Some(t) = &self.tuples {
            c.tuples = Some(parse_tuples(t)?);
        }
        if let Some(p) = &self.pattern {
            let epsilon = self
                .epsilon
                .or(c.pattern.as_ref().map(|p| p.epsilon))
                .ok_or_else(|| anyhow!("--pattern needs --epsilon"))?;
            c.pattern = Some(PatternSpec {
                points: parse_pattern(p)?,
                epsilon,
                closure: Closure::Open,
            });
        }
        if self.closed {
            if let Some(p) = c.pattern.as_mut() {
                p.closure = Closure::Closed;
            }
        }
        if let Some(m) = self.method {
            c.method = Some(
                match m {
                    MethodArg::ExponentialSum => "exponential-sum",
                    MethodArg::Fourier => "fourier",
                    MethodArg::ClosedForm => "closed-form",
                }
                .into(),
            );
        }
        c.sequence |= self.sequence;
        c.json |= self.json;
        c.validate()?;
        Ok(c)
    }
}

fn load_points(c: &ExperimentConfig) -> Result<ColoredPointSet> {
    if let Some(path) = &c.input {
        let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        return Ok(io::read_point_set(BufReader::new(file))?);
    }
    let generator = c
        .generator
        .as_ref()
        .ok_or_else(|| anyhow!("no point set: give --input, --kind or a config generator"))?;
    Ok(generator.generate()?)
}

fn weights_for(c: &ExperimentConfig, num_colors: usize) -> Result<WeightSystem> {
    let w = match &c.weights {
        Some(w) => WeightSystem::new(w.clone())?,
        None => WeightSystem::unit(num_colors),
    };
    w.check(num_colors)?;
    Ok(w)
}

fn open_output(c: &ExperimentConfig) -> Result<Box<dyn Write>> {
    Ok(match &c.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn setup_threads(requested: Option<usize>) -> Result<()> {
    let from_env = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(
            v.parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| anyhow!("{THREADS_ENV} must be a positive integer, got {v:?}"))?,
        ),
        Err(_) => None,
    };
    if let Some(n) = from_env.or(requested) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    Ok(())
}

fn cmd_generate(c: &ExperimentConfig) -> Result<()> {
    let points = load_points(c)?;
    let mut out = open_output(c)?;
    io::write_point_set(&mut out, &points)?;
    out.flush()?;
    Ok(())
}

fn cmd_autocorrelate(c: &ExperimentConfig) -> Result<()> {
    let max_lag = c.max_lag.ok_or_else(|| anyhow!("autocorrelate needs --max-lag"))?;
    let ac = if c.sequence {
        let seq = c
            .generator
            .as_ref()
            .and_then(|g| g.sequence())
            .ok_or_else(|| anyhow!("--sequence needs a substitution generator"))??;
        sequence_autocorrelation(&seq, &weights_for(c, seq.alphabet_size())?, max_lag.floor() as usize)?
    } else {
        let points = load_points(c)?;
        autocorrelation(&points, &weights_for(c, points.num_colors())?, max_lag)?
    };
    let mut out = open_output(c)?;
    if let Some(eps) = c.epsilon {
        let periods = almost_periods(&ac, eps)?;
        if c.json {
            io::write_json(&mut out, &periods)?;
        } else {
            writeln!(out, "t")?;
            for t in periods {
                writeln!(out, "{}", t.iter().map(f64::to_string).collect::<Vec<_>>().join(","))?;
            }
        }
    } else if c.json {
        io::write_json(&mut out, &io::autocorrelation_json(&ac))?;
    } else {
        io::write_autocorrelation_csv(&mut out, &ac)?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_npoint(c: &ExperimentConfig) -> Result<()> {
    let tuples = c.tuples.clone().ok_or_else(|| anyhow!("npoint needs --tuples"))?;
    let n = tuples.first().map_or(0, Vec::len);
    if n == 0 {
        bail!("npoint needs at least one non-empty tuple");
    }
    let points = load_points(c)?;
    let w = weights_for(c, points.num_colors())?;
    let tuples: Vec<Vec<Vec<f64>>> = tuples
        .into_iter()
        .map(|t| t.into_iter().map(|v| vec![v]).collect())
        .collect();
    let reach = tuples
        .iter()
        .flat_map(|t| t.iter().flat_map(|a| t.iter().map(move |b| (a[0] - b[0]).abs()).chain([a[0].abs()])))
        .fold(0.0, f64::max);
    let tensor = npoint_correlation(&points, &w, &tuples, n, c.max_lag.unwrap_or(reach))?;
    let mut out = open_output(c)?;
    if c.json {
        io::write_json(&mut out, &io::correlation_json(&tensor))?;
    } else {
        io::write_correlation_csv(&mut out, &tensor)?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_diffract(c: &ExperimentConfig) -> Result<()> {
    let ks = c.k_values();
    if ks.is_empty() {
        bail!("diffract needs --k-list or --k-grid");
    }
    let method = c.method.as_deref().unwrap_or("exponential-sum");
    let diff = match method {
        "exponential-sum" => {
            let points = load_points(c)?;
            let w = weights_for(c, points.num_colors())?;
            let kv: Vec<Vec<f64>> = ks.iter().map(|&k| vec![k]).collect();
            match c.samples {
                None => exponential_sum_diffraction(&points, &w, &kv)?,
                Some(samples) => {
                    let seed = c.seed.ok_or_else(|| anyhow!("--samples needs --seed"))?;
                    let entries = kv
                        .iter()
                        .map(|k| {
                            Ok(DiffractionEntry {
                                k: k.clone(),
                                intensity: square_mean_intensity(&points, &w, k, samples, seed)?,
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    DiffractionEstimate::new(
                        entries,
                        Method::ExponentialSum,
                        points.window().edge() / 2.0,
                        &w,
                        Some(points.fingerprint()),
                    )
                }
            }
        }
        "fourier" => {
            let max_lag = c.max_lag.ok_or_else(|| anyhow!("the fourier method needs --max-lag"))?;
            let kv: Vec<Vec<f64>> = ks.iter().map(|&k| vec![k]).collect();
            let ac = if c.sequence {
                let seq = c
                    .generator
                    .as_ref()
                    .and_then(|g| g.sequence())
                    .ok_or_else(|| anyhow!("--sequence needs a substitution generator"))??;
                sequence_autocorrelation(&seq, &weights_for(c, seq.alphabet_size())?, max_lag.floor() as usize)?
            } else {
                let points = load_points(c)?;
                autocorrelation(&points, &weights_for(c, points.num_colors())?, max_lag)?
            };
            autocorrelation_diffraction(&ac, &kv)?
        }
        "closed-form" => match &c.generator {
            Some(GeneratorSpec::ModelSet {
                basis,
                window,
                scale,
                ..
            }) => {
                let basis = basis.unwrap_or_else(|| CutProjectScheme::fibonacci().basis());
                let scheme = CutProjectScheme::new(basis, *window, *scale)?;
                let lo = ks.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = ks.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let mut peaks = model_set_peaks(&scheme, 12, (lo, hi));
                peaks.sort_by(|a, b| a.k.total_cmp(&b.k));
                let entries = peaks
                    .iter()
                    .map(|p| DiffractionEntry {
                        k: vec![p.k],
                        intensity: p.intensity,
                    })
                    .collect();
                DiffractionEstimate::new(entries, Method::ClosedForm, f64::INFINITY, &WeightSystem::unit(1), None)
            }
            other => {
                let system = c
                    .system
                    .or_else(|| other.as_ref().and_then(|g| g.known_system()))
                    .ok_or_else(|| anyhow!("no closed form known for this generator"))?;
                closed_form_estimate(system, &weights_for(c, 2)?, &ks)?
            }
        },
        other => bail!("unknown method {other:?}"),
    };
    let diff = match c.threshold {
        Some(a) => {
            let keep = bragg_peaks_above(&diff, a)?;
            let entries = diff
                .entries()
                .iter()
                .filter(|e| keep.contains(&e.k))
                .cloned()
                .collect();
            DiffractionEstimate::new(
                entries,
                diff.method(),
                diff.scale_used(),
                &WeightSystem::new(diff.weights().to_vec())?,
                diff.source(),
            )
        }
        None => diff,
    };
    let mut out = open_output(c)?;
    if c.json {
        io::write_json(&mut out, &io::diffraction_json(&diff))?;
    } else {
        io::write_diffraction_csv(&mut out, &diff)?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_freq(c: &ExperimentConfig) -> Result<()> {
    let spec = c.pattern.as_ref().ok_or_else(|| anyhow!("freq needs --pattern and --epsilon"))?;
    let pattern = spec.build()?;
    let points = load_points(c)?;
    let f = pattern_frequency(&points, &pattern)?;
    let mut out = open_output(c)?;
    if c.json {
        io::write_json(&mut out, &serde_json::json!({"pattern": spec, "frequency": f}))?;
    } else {
        writeln!(out, "epsilon,closure,frequency")?;
        let closure = match spec.closure {
            Closure::Open => "open",
            Closure::Closed => "closed",
        };
        writeln!(out, "{},{closure},{f}", spec.epsilon)?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_inequality(c: &ExperimentConfig) -> Result<()> {
    if c.weights.as_ref().is_some_and(|w| w.iter().any(|&v| v != 1.0)) {
        return Err(aperiodica::Error::WeightedInput.into());
    }
    let ks = c.k_values();
    if ks.is_empty() {
        bail!("inequality needs --k-list or --k-grid");
    }
    let points = flatten(&load_points(c)?);
    let w = WeightSystem::unit(1);
    let mut ts = c.t_values();
    let ac = if ts.is_empty() {
        let lag = c.max_lag.ok_or_else(|| anyhow!("inequality needs --t-list, --t-grid or --max-lag"))?;
        let ac = autocorrelation(&points, &w, lag)?;
        ts = ac
            .entries()
            .iter()
            .map(|e| e.displacement[0])
            .filter(|&t| t > 0.0)
            .take(20)
            .collect();
        ac
    } else {
        let lag = ts.iter().fold(0.0f64, |a, t| a.max(t.abs()));
        autocorrelation(&points, &w, c.max_lag.unwrap_or(lag).max(lag))?
    };
    let kv: Vec<Vec<f64>> = ks.iter().map(|&k| vec![k]).collect();
    let tv: Vec<Vec<f64>> = ts.iter().map(|&t| vec![t]).collect();
    let diff = exponential_sum_diffraction(&points, &w, &kv)?;
    let report = verify_inequality(&ac, &diff, &kv, &tv, c.tolerance.unwrap_or(DEFAULT_TOLERANCE))?;
    let mut out = open_output(c)?;
    if c.json {
        io::write_json(&mut out, &report)?;
    } else {
        io::write_inequality_csv(&mut out, &report)?;
    }
    out.flush()?;
    let bad = report.violations().count();
    if bad > 0 {
        return Err(VerificationFailed(format!("{bad} of {} rows violate the inequality", report.rows.len())).into());
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<()> {
    let ids: Vec<u32> = match args.only {
        Some(id) if (1..=reproduce::CHECK_COUNT).contains(&id) => vec![id],
        Some(id) => bail!("no check {id}; checks are numbered 1..={}", reproduce::CHECK_COUNT),
        None => (1..=reproduce::CHECK_COUNT).collect(),
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut failed = Vec::new();
    for id in ids {
        let outcome = reproduce::run_check(id, args.seed);
        writeln!(out, "[{}] {} {}", if outcome.pass { "PASS" } else { "FAIL" }, outcome.id, outcome.title)?;
        for line in &outcome.lines {
            writeln!(out, "    {line}")?;
        }
        out.flush()?;
        if !outcome.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        writeln!(out, "all checks passed")?;
        Ok(())
    } else {
        Err(VerificationFailed(format!("checks failed: {failed:?}")).into())
    }
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Verify(args) => {
            setup_threads(args.threads)?;
            cmd_verify(args)
        }
        Command::Generate(common)
        | Command::Autocorrelate(common)
        | Command::Npoint(common)
        | Command::Diffract(common)
        | Command::Freq(common)
        | Command::Inequality(common) => {
            let c = common.resolve()?;
            setup_threads(c.threads)?;
            match &cli.command {
                Command::Generate(_) => cmd_generate(&c),
                Command::Autocorrelate(_) => cmd_autocorrelate(&c),
                Command::Npoint(_) => cmd_npoint(&c),
                Command::Diffract(_) => cmd_diffract(&c),
                Command::Freq(_) => cmd_freq(&c),
                Command::Inequality(_) => cmd_inequality(&c),
                Command::Verify(_) => unreachable!(),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<VerificationFailed>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
