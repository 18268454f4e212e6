//! Random earth models, their simulated 45-channel measurements, the
//! rescaling of every variable onto `[0.5, 1.5]`, splits and persistence.

use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channels::{simulate_all, MeasurementPair, NUM_CHANNELS};
use crate::em::{EarthModel5, ForwardConfig, ToolState};
use crate::error::{Error, Result};
use crate::textio::{parse_pair, Header, TextTable};

/// Model parameters plus dip.
pub const NUM_INPUTS: usize = 6;
/// Attenuation and phase for every channel.
pub const NUM_MEASUREMENTS: usize = 2 * NUM_CHANNELS;
pub const PARAM_NAMES: [&str; 5] = ["rho_h", "rho_u", "rho_l", "d_u", "d_l"];

const DATASET_FORMAT: &str = "acqdesign-dataset";
const NORMALIZATION_FORMAT: &str = "acqdesign-normalization";
const SCHEMA_VERSION: u32 = 1;

/// Column index of channel `id`'s attenuation in the flat measurement vector;
/// the phase follows at `+1`.
pub fn attenuation_column(id: usize) -> usize {
    2 * id
}

/// Parameter-space box the models are drawn from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingRanges {
    /// Resistivity bounds (ohm m), log-uniform.
    pub rho: (f64, f64),
    /// Boundary-distance bounds (m), log-uniform.
    pub distance: (f64, f64),
    /// Tool dip bounds (degrees), uniform.
    pub dip: (f64, f64),
}

impl Default for SamplingRanges {
    fn default() -> Self {
        Self {
            rho: (1.0, 1.0e3),
            distance: (1.0e-2, 10.0),
            dip: (82.0, 96.0),
        }
    }
}

impl SamplingRanges {
    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in [("rho", self.rho), ("distance", self.distance)] {
            if !(lo > 0.0 && lo < hi && hi.is_finite()) {
                return Err(Error::Config(format!("{name} range ({lo}, {hi}) must be positive and increasing")));
            }
        }
        let (lo, hi) = self.dip;
        if !(0.0..180.0).contains(&lo) || !(lo < hi && hi < 180.0) {
            return Err(Error::Config(format!("dip range ({lo}, {hi}) must be increasing inside [0, 180)")));
        }
        Ok(())
    }

    /// Bounds of input variable `i` (parameters in the fixed order, then dip).
    pub fn input_bounds(&self, i: usize) -> (f64, f64) {
        match i {
            0..=2 => self.rho,
            3 | 4 => self.distance,
            _ => self.dip,
        }
    }

    pub fn draw(&self, rng: &mut impl Rng) -> (EarthModel5, ToolState) {
        let log_uniform = |rng: &mut dyn rand::RngCore, (lo, hi): (f64, f64)| {
            let (a, b) = (lo.log10(), hi.log10());
            10f64.powf(rng.gen_range(a..=b))
        };
        let rho_h = log_uniform(rng, self.rho);
        let rho_u = log_uniform(rng, self.rho);
        let rho_l = log_uniform(rng, self.rho);
        let d_u = log_uniform(rng, self.distance);
        let d_l = log_uniform(rng, self.distance);
        let dip = rng.gen_range(self.dip.0..=self.dip.1);
        let model = EarthModel5 {
            rho_h,
            rho_u,
            rho_l,
            d_u,
            d_l,
        };
        let tool = ToolState { midpoint_tvd: 0.0, dip };
        (model, tool)
    }
}

/// Seeded draw of `n` models and tool states.
pub fn sample_models(n: usize, ranges: &SamplingRanges, seed: u64) -> Vec<(EarthModel5, ToolState)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| ranges.draw(&mut rng)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub model: EarthModel5,
    pub tool: ToolState,
    pub measurements: Vec<MeasurementPair>,
}

impl SampleRecord {
    pub fn simulate(model: EarthModel5, tool: ToolState, config: &ForwardConfig) -> Result<Self> {
        let measurements = simulate_all(&model, &tool, config)?;
        if measurements
            .iter()
            .any(|m| !(m.attenuation.is_finite() && m.phase_difference.is_finite()))
        {
            return Err(Error::Domain("non-finite measurement".into()));
        }
        Ok(Self {
            model,
            tool,
            measurements,
        })
    }

    pub fn inputs(&self) -> [f64; NUM_INPUTS] {
        let p = self.model.to_array();
        [p[0], p[1], p[2], p[3], p[4], self.tool.dip]
    }

    pub fn flat_measurements(&self) -> Vec<f64> {
        self.measurements
            .iter()
            .flat_map(|m| [m.attenuation, m.phase_difference])
            .collect()
    }
}

/// Output of [`generate`].
#[derive(Debug, Clone)]
pub struct Generated {
    pub records: Vec<SampleRecord>,
    /// Number of draws replaced after a forward failure.
    pub resampled: usize,
}

const MAX_RESAMPLES: u64 = 64;

/// Simulates every model in parallel on `workers` threads. A model whose
/// forward evaluation fails is replaced by a fresh draw from a stream keyed
/// on `(seed, index)`, so the output does not depend on the worker count.
pub fn generate(
    models: &[(EarthModel5, ToolState)],
    ranges: &SamplingRanges,
    seed: u64,
    workers: usize,
    config: &ForwardConfig,
) -> Result<Generated> {
    let resampled = AtomicUsize::new(0);
    let work = |(i, &(model, tool)): (usize, &(EarthModel5, ToolState))| -> Result<SampleRecord> {
        model.validate()?;
        let mut current = (model, tool);
        for attempt in 0..=MAX_RESAMPLES {
            match SampleRecord::simulate(current.0, current.1, config) {
                Ok(rec) => return Ok(rec),
                Err(e) if attempt < MAX_RESAMPLES => {
                    log::debug!("sample {i}: {e}; resampling");
                    resampled.fetch_add(1, Ordering::Relaxed);
                    let stream = seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (attempt + 1).rotate_left(48);
                    current = ranges.draw(&mut ChaCha8Rng::seed_from_u64(stream));
                }
                Err(e) => return Err(e),
            }
        }
        unreachable!("loop returns on the final attempt")
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let records = pool.install(|| models.par_iter().enumerate().map(work).collect::<Result<Vec<_>>>())?;
    let resampled = resampled.into_inner();
    if resampled > 0 {
        log::warn!("{resampled} samples were resampled after forward failures");
    }
    Ok(Generated { records, resampled })
}

/// A simulated dataset with the metadata needed to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub seed: u64,
    pub ranges: SamplingRanges,
    pub resampled: usize,
    pub records: Vec<SampleRecord>,
}

impl Dataset {
    /// Draws and simulates `n` samples.
    pub fn build(n: usize, ranges: SamplingRanges, seed: u64, workers: usize, config: &ForwardConfig) -> Result<Self> {
        ranges.validate()?;
        if n == 0 {
            return Err(Error::Config("dataset size must be at least 1".into()));
        }
        let models = sample_models(n, &ranges, seed);
        let generated = generate(&models, &ranges, seed, workers, config)?;
        Ok(Self {
            seed,
            ranges,
            resampled: generated.resampled,
            records: generated.records,
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// The first `n` records (the draw order is already random).
    pub fn truncated(&self, n: usize) -> Self {
        Self {
            records: self.records[..n.min(self.len())].to_vec(),
            ..self.clone()
        }
    }

    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            records: indices.iter().map(|&i| self.records[i].clone()).collect(),
            ..self.clone()
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        let mut header = Header::new(DATASET_FORMAT, SCHEMA_VERSION);
        header
            .set("channels", NUM_CHANNELS)
            .set("samples", self.len())
            .set("seed", self.seed)
            .set("rho_range", format!("{},{}", self.ranges.rho.0, self.ranges.rho.1))
            .set("distance_range", format!("{},{}", self.ranges.distance.0, self.ranges.distance.1))
            .set("dip_range", format!("{},{}", self.ranges.dip.0, self.ranges.dip.1))
            .set("resampled", self.resampled);
        header.write_to(&mut out)?;
        writeln!(out, "{}", column_names().join(","))?;
        for rec in &self.records {
            let mut line = String::with_capacity(2048);
            for v in rec.inputs().into_iter().chain(rec.flat_measurements()) {
                if !line.is_empty() {
                    line.push(',');
                }
                line.push_str(&v.to_string());
            }
            writeln!(out, "{line}")?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let table = TextTable::read(path)?;
        table.check_format(DATASET_FORMAT, SCHEMA_VERSION)?;
        let channels: usize = table.require_parsed("channels")?;
        if channels != NUM_CHANNELS {
            return Err(Error::SchemaMismatch(format!(
                "file has {channels} channels, this build expects {NUM_CHANNELS}"
            )));
        }
        if table.columns != column_names() {
            return Err(Error::SchemaMismatch("column layout differs from the expected one".into()));
        }
        let pair = |key: &str| -> Result<(f64, f64)> {
            parse_pair(table.require(key)?).ok_or_else(|| Error::parse(path, 1, format!("bad range in '{key}'")))
        };
        let ranges = SamplingRanges {
            rho: pair("rho_range")?,
            distance: pair("distance_range")?,
            dip: pair("dip_range")?,
        };
        let mut records = Vec::with_capacity(table.rows.len());
        for (lineno, line) in &table.rows {
            let v = table.numbers(*lineno, line)?;
            let model = EarthModel5::new(v[0], v[1], v[2], v[3], v[4])
                .map_err(|e| Error::parse(path, *lineno, e.to_string()))?;
            let tool = ToolState::new(0.0, v[5]).map_err(|e| Error::parse(path, *lineno, e.to_string()))?;
            let measurements = v[NUM_INPUTS..]
                .chunks(2)
                .map(|c| MeasurementPair {
                    attenuation: c[0],
                    phase_difference: c[1],
                })
                .collect();
            records.push(SampleRecord {
                model,
                tool,
                measurements,
            });
        }
        let declared: usize = table.require_parsed("samples")?;
        if declared != records.len() {
            return Err(Error::parse(
                path,
                table.rows.last().map_or(1, |r| r.0),
                format!("header declares {declared} samples, found {}", records.len()),
            ));
        }
        Ok(Self {
            seed: table.require_parsed("seed")?,
            ranges,
            resampled: table.require_parsed("resampled")?,
            records,
        })
    }
}

pub fn column_names() -> Vec<String> {
    let mut names: Vec<String> = PARAM_NAMES.iter().map(|s| s.to_string()).collect();
    names.push("dip".into());
    for id in 0..NUM_CHANNELS {
        names.push(format!("c{id}_att"));
        names.push(format!("c{id}_pha"));
    }
    names
}

/// Rescaling family of a variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    /// Angles, attenuations and phase differences.
    Linear,
    /// Resistivities and distances: logarithm first.
    LogLinear,
}

impl Category {
    fn name(self) -> &'static str {
        match self {
            Category::Linear => "linear",
            Category::LogLinear => "log-linear",
        }
    }
}

/// Affine map of one variable (or its natural log) onto `[0.5, 1.5]`.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableScale {
    pub name: String,
    pub category: Category,
    pub min: f64,
    pub max: f64,
}

impl VariableScale {
    pub fn new(name: impl Into<String>, category: Category, min: f64, max: f64) -> Result<Self> {
        let name = name.into();
        if !(min < max && min.is_finite() && max.is_finite()) {
            return Err(Error::Config(format!("{name}: need min < max, got ({min}, {max})")));
        }
        if category == Category::LogLinear && min <= 0.0 {
            return Err(Error::Config(format!("{name}: log-linear bounds must be positive")));
        }
        Ok(Self {
            name,
            category,
            min,
            max,
        })
    }

    fn transformed_bounds(&self) -> (f64, f64) {
        match self.category {
            Category::Linear => (self.min, self.max),
            Category::LogLinear => (self.min.ln(), self.max.ln()),
        }
    }

    /// Normalized value and whether it had to be clamped into range.
    pub fn normalize(&self, value: f64) -> Result<(f64, bool)> {
        let t = match self.category {
            Category::Linear => value,
            Category::LogLinear if value > 0.0 => value.ln(),
            Category::LogLinear => {
                return Err(Error::Domain(format!("{}: log-linear value {value} is not positive", self.name)))
            }
        };
        if !t.is_finite() {
            return Err(Error::Domain(format!("{}: non-finite value {value}", self.name)));
        }
        let (lo, hi) = self.transformed_bounds();
        let clamped = t.clamp(lo, hi);
        Ok((0.5 + (clamped - lo) / (hi - lo), clamped != t))
    }

    pub fn denormalize(&self, y: f64) -> f64 {
        let (lo, hi) = self.transformed_bounds();
        let t = lo + (y - 0.5) * (hi - lo);
        match self.category {
            Category::Linear => t,
            Category::LogLinear => t.exp(),
        }
    }
}

/// Scales for the six inputs and the 90 measurement scalars.
#[derive(Debug)]
pub struct NormalizationSpec {
    pub inputs: Vec<VariableScale>,
    pub measurements: Vec<VariableScale>,
    clamped: AtomicUsize,
}

impl Clone for NormalizationSpec {
    fn clone(&self) -> Self {
        Self {
            inputs: self.inputs.clone(),
            measurements: self.measurements.clone(),
            clamped: AtomicUsize::new(self.clamped_count()),
        }
    }
}

impl PartialEq for NormalizationSpec {
    fn eq(&self, other: &Self) -> bool {
        self.inputs == other.inputs && self.measurements == other.measurements
    }
}

impl NormalizationSpec {
    pub fn new(inputs: Vec<VariableScale>, measurements: Vec<VariableScale>) -> Result<Self> {
        if inputs.len() != NUM_INPUTS {
            return Err(Error::Arity {
                expected: NUM_INPUTS,
                got: inputs.len(),
            });
        }
        if measurements.len() != NUM_MEASUREMENTS {
            return Err(Error::Arity {
                expected: NUM_MEASUREMENTS,
                got: measurements.len(),
            });
        }
        Ok(Self {
            inputs,
            measurements,
            clamped: AtomicUsize::new(0),
        })
    }

    /// Inputs from the sampling box; measurement bounds from the given
    /// (training) records, one pair per scalar column.
    pub fn fit(ranges: &SamplingRanges, records: &[SampleRecord]) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::Config("cannot fit normalization on an empty set".into()));
        }
        let mut inputs = Vec::with_capacity(NUM_INPUTS);
        for (i, name) in PARAM_NAMES.iter().enumerate() {
            let (lo, hi) = ranges.input_bounds(i);
            inputs.push(VariableScale::new(*name, Category::LogLinear, lo, hi)?);
        }
        inputs.push(VariableScale::new("dip", Category::Linear, ranges.dip.0, ranges.dip.1)?);

        let names = column_names();
        let mut lo = vec![f64::INFINITY; NUM_MEASUREMENTS];
        let mut hi = vec![f64::NEG_INFINITY; NUM_MEASUREMENTS];
        for rec in records {
            for (k, v) in rec.flat_measurements().into_iter().enumerate() {
                lo[k] = lo[k].min(v);
                hi[k] = hi[k].max(v);
            }
        }
        let measurements = (0..NUM_MEASUREMENTS)
            .map(|k| {
                let (mut a, mut b) = (lo[k], hi[k]);
                if b - a < 1e-9 {
                    // Constant column: centre it in a unit-wide window.
                    a -= 0.5;
                    b += 0.5;
                }
                VariableScale::new(names[NUM_INPUTS + k].clone(), Category::Linear, a, b)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(inputs, measurements)
    }

    /// Number of values clamped into range since construction.
    pub fn clamped_count(&self) -> usize {
        self.clamped.load(Ordering::Relaxed)
    }

    fn apply(&self, scale: &VariableScale, v: f64) -> Result<f64> {
        let (y, clamped) = scale.normalize(v)?;
        if clamped {
            self.clamped.fetch_add(1, Ordering::Relaxed);
        }
        Ok(y)
    }

    pub fn normalize_inputs(&self, raw: &[f64; NUM_INPUTS]) -> Result<[f64; NUM_INPUTS]> {
        let mut out = [0.0; NUM_INPUTS];
        for i in 0..NUM_INPUTS {
            out[i] = self.apply(&self.inputs[i], raw[i])?;
        }
        Ok(out)
    }

    pub fn denormalize_params(&self, y: &[f64]) -> Result<EarthModel5> {
        if y.len() != 5 {
            return Err(Error::Arity { expected: 5, got: y.len() });
        }
        let p: Vec<f64> = (0..5).map(|i| self.inputs[i].denormalize(y[i])).collect();
        EarthModel5::new(p[0], p[1], p[2], p[3], p[4])
    }

    pub fn normalize_measurement(&self, column: usize, v: f64) -> Result<f64> {
        self.apply(&self.measurements[column], v)
    }

    pub fn denormalize_measurement(&self, column: usize, y: f64) -> f64 {
        self.measurements[column].denormalize(y)
    }

    pub fn save(&self, path: &Path, seed: u64, ranges: &SamplingRanges) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        let mut header = Header::new(NORMALIZATION_FORMAT, SCHEMA_VERSION);
        header
            .set("seed", seed)
            .set("rho_range", format!("{},{}", ranges.rho.0, ranges.rho.1))
            .set("distance_range", format!("{},{}", ranges.distance.0, ranges.distance.1))
            .set("dip_range", format!("{},{}", ranges.dip.0, ranges.dip.1))
            .set("measurement_bounds", "per-channel");
        header.write_to(&mut out)?;
        writeln!(out, "name,category,min,max")?;
        for s in self.inputs.iter().chain(&self.measurements) {
            writeln!(out, "{},{},{},{}", s.name, s.category.name(), s.min, s.max)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let table = TextTable::read(path)?;
        table.check_format(NORMALIZATION_FORMAT, SCHEMA_VERSION)?;
        let mut scales = Vec::with_capacity(table.rows.len());
        for (lineno, line) in &table.rows {
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 4 {
                return Err(Error::parse(path, *lineno, "expected name,category,min,max"));
            }
            let category = match f[1] {
                "linear" => Category::Linear,
                "log-linear" => Category::LogLinear,
                other => return Err(Error::parse(path, *lineno, format!("unknown category '{other}'"))),
            };
            let num = |s: &str| s.parse::<f64>().map_err(|_| Error::parse(path, *lineno, format!("'{s}' is not a number")));
            scales.push(
                VariableScale::new(f[0], category, num(f[2])?, num(f[3])?)
                    .map_err(|e| Error::parse(path, *lineno, e.to_string()))?,
            );
        }
        if scales.len() != NUM_INPUTS + NUM_MEASUREMENTS {
            return Err(Error::SchemaMismatch(format!(
                "normalization lists {} variables, expected {}",
                scales.len(),
                NUM_INPUTS + NUM_MEASUREMENTS
            )));
        }
        let measurements = scales.split_off(NUM_INPUTS);
        Self::new(scales, measurements)
    }
}

/// Index sets of the three partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSplit {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
}

pub const DEFAULT_FRACTIONS: (f64, f64, f64) = (0.8, 0.1, 0.1);

/// Seeded shuffle of `0..n`, then partition by `fractions`.
pub fn split(n: usize, fractions: (f64, f64, f64), seed: u64) -> Result<DatasetSplit> {
    let (a, b, c) = fractions;
    if [a, b, c].iter().any(|f| !(0.0..=1.0).contains(f)) || ((a + b + c) - 1.0).abs() > 1e-9 {
        return Err(Error::Config(format!("split fractions {fractions:?} must be in [0, 1] and sum to 1")));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n_train = ((n as f64) * a).round() as usize;
    let n_val = (((n as f64) * b).round() as usize).min(n - n_train);
    let validation = idx[n_train..n_train + n_val].to_vec();
    let test = idx[n_train + n_val..].to_vec();
    idx.truncate(n_train);
    Ok(DatasetSplit {
        train: idx,
        validation,
        test,
    })
}
