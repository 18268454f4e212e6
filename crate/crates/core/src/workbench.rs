//! Evaluation tooling: cross-plots, piecewise-1D curtain formations,
//! trajectory inversion, and plot-data emission.

use std::io::Write;
use std::path::Path;

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channels::{simulate_channel, ChannelId, ChannelSpec, MeasurementPair};
use crate::dataset::{attenuation_column, NormalizationSpec, SampleRecord, SamplingRanges, PARAM_NAMES};
use crate::designer::{channel_score, r2, r2_statistic};
use crate::em::{EarthModel5, ForwardConfig, ToolState};
use crate::error::{Error, Result};
use crate::neural::{Matrices, TrainedInverse};
use crate::textio::{fingerprint, Header, TextTable};

/// Short fingerprint of a channel system, echoed in emitted headers.
pub fn system_hash(system: &[ChannelId]) -> String {
    let bytes: Vec<u8> = system.iter().flat_map(|c| (c.0 as u64).to_le_bytes()).collect();
    format!("{:016x}", fingerprint(bytes))
}

/// Paired (truth, prediction) values with their R^2.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossPlotSeries {
    pub name: String,
    pub truth: Vec<f64>,
    pub predicted: Vec<f64>,
    pub r2: Option<f64>,
}

impl CrossPlotSeries {
    pub fn new(name: impl Into<String>, truth: Vec<f64>, predicted: Vec<f64>) -> Result<Self> {
        if truth.len() != predicted.len() {
            return Err(Error::Arity {
                expected: truth.len(),
                got: predicted.len(),
            });
        }
        let r2 = if truth.is_empty() { None } else { r2_statistic(&truth, &predicted) };
        Ok(Self {
            name: name.into(),
            truth,
            predicted,
            r2,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossPlotTable {
    pub label: String,
    pub series: Vec<CrossPlotSeries>,
    /// Averaged channel score for type-1 tables.
    pub score: Option<f64>,
}

/// Type 1: measurements re-simulated on the inverted models against the
/// originals, for one channel.
pub fn crossplot_type1(
    channel: ChannelId,
    truth: &[SampleRecord],
    resimulated: &[Vec<MeasurementPair>],
    wrap_flagged: bool,
) -> Result<CrossPlotTable> {
    let spec = ChannelSpec::from_id(channel)?;
    if truth.len() != resimulated.len() {
        return Err(Error::Arity {
            expected: truth.len(),
            got: resimulated.len(),
        });
    }
    let att = CrossPlotSeries::new(
        "attenuation_db",
        truth.iter().map(|r| r.measurements[channel.0].attenuation).collect(),
        resimulated.iter().map(|r| r[channel.0].attenuation).collect(),
    )?;
    let pha = CrossPlotSeries::new(
        "phase_deg",
        truth.iter().map(|r| r.measurements[channel.0].phase_difference).collect(),
        resimulated.iter().map(|r| r[channel.0].phase_difference).collect(),
    )?;
    let (ra, rp) = r2(channel, truth, resimulated);
    Ok(CrossPlotTable {
        label: format!("type1 {}", spec.name()),
        series: vec![att, pha],
        score: channel_score(ra, rp, wrap_flagged),
    })
}

/// Type 2: inverted model parameter against the truth. Resistivities and
/// distances are compared in log10.
pub fn crossplot_type2(truth: &[SampleRecord], predicted: &[EarthModel5], parameter: usize) -> Result<CrossPlotTable> {
    if parameter >= 5 {
        return Err(Error::Range(format!("parameter index {parameter} outside 0..5")));
    }
    if truth.len() != predicted.len() {
        return Err(Error::Arity {
            expected: truth.len(),
            got: predicted.len(),
        });
    }
    let series = CrossPlotSeries::new(
        format!("log10_{}", PARAM_NAMES[parameter]),
        truth.iter().map(|r| r.model.to_array()[parameter].log10()).collect(),
        predicted.iter().map(|m| m.to_array()[parameter].log10()).collect(),
    )?;
    Ok(CrossPlotTable {
        label: format!("type2 {}", PARAM_NAMES[parameter]),
        series: vec![series],
        score: None,
    })
}

/// Writes a table as `series,truth,predicted` rows.
pub fn emit_table(table: &CrossPlotTable, path: &Path, seed: u64, system: &[ChannelId]) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    let mut h = Header::new("acqdesign-crossplot", 1);
    h.set("label", &table.label).set("seed", seed).set("system_hash", system_hash(system));
    if let Some(s) = table.score {
        h.set("score", s);
    }
    for s in &table.series {
        h.set(&format!("r2_{}", s.name), s.r2.map_or("undefined".to_string(), |v| v.to_string()));
    }
    h.write_to(&mut out)?;
    writeln!(out, "series,truth,predicted")?;
    for s in &table.series {
        for (t, p) in s.truth.iter().zip(&s.predicted) {
            writeln!(out, "{},{t},{p}", s.name)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Reads a table written by [`emit_table`].
pub fn read_table(path: &Path) -> Result<CrossPlotTable> {
    let table = TextTable::read(path)?;
    table.check_format("acqdesign-crossplot", 1)?;
    let mut series: Vec<(String, Vec<f64>, Vec<f64>)> = Vec::new();
    for (lineno, line) in &table.rows {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 3 {
            return Err(Error::parse(path, *lineno, "expected series,truth,predicted"));
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| Error::parse(path, *lineno, format!("'{s}' is not a number")));
        let (t, p) = (num(f[1])?, num(f[2])?);
        match series.iter_mut().find(|s| s.0 == f[0]) {
            Some(s) => {
                s.1.push(t);
                s.2.push(p);
            }
            None => series.push((f[0].to_string(), vec![t], vec![p])),
        }
    }
    Ok(CrossPlotTable {
        label: table.require("label")?.to_string(),
        score: table.header.get("score").and_then(|s| s.parse().ok()),
        series: series
            .into_iter()
            .map(|(n, t, p)| CrossPlotSeries::new(n, t, p))
            .collect::<Result<_>>()?,
    })
}

/// One column of a curtain: three layers, TVD increasing downward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurtainColumn {
    pub hd: f64,
    pub boundary_tvd_upper: f64,
    pub boundary_tvd_lower: f64,
    pub rho_u: f64,
    pub rho_h: f64,
    pub rho_l: f64,
}

/// Piecewise-1D formation along a horizontal section.
#[derive(Debug, Clone, PartialEq)]
pub struct CurtainModel {
    pub columns: Vec<CurtainColumn>,
}

/// Fault in a generated curtain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fault {
    pub hd: f64,
    /// Vertical displacement of both boundaries past the fault (m, down positive).
    pub throw: f64,
    /// Resistivity of the bottom layer past the fault.
    pub rho_l_after: f64,
}

impl CurtainModel {
    pub fn new(columns: Vec<CurtainColumn>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::Config("curtain needs at least one column".into()));
        }
        for (i, c) in columns.iter().enumerate() {
            if !(c.rho_u > 0.0 && c.rho_h > 0.0 && c.rho_l > 0.0) {
                return Err(Error::InvalidModel(format!("column {i}: resistivities must be positive")));
            }
            if !(c.boundary_tvd_upper < c.boundary_tvd_lower) {
                return Err(Error::InvalidModel(format!("column {i}: upper boundary must lie above the lower one")));
            }
            if i > 0 && !(c.hd > columns[i - 1].hd) {
                return Err(Error::InvalidModel(format!("column {i}: horizontal distance must increase")));
            }
        }
        Ok(Self { columns })
    }

    /// Laterally uniform three-layer formation.
    pub fn uniform(length: f64, spacing: f64, column: CurtainColumn) -> Result<Self> {
        let n = (length / spacing).round() as usize + 1;
        Self::new((0..n).map(|i| CurtainColumn { hd: i as f64 * spacing, ..column }).collect())
    }

    /// Resistive host over a conductive layer, cut by faults that displace
    /// both boundaries and change the bottom-layer resistivity.
    pub fn faulted(length: f64, spacing: f64, base: CurtainColumn, faults: &[Fault]) -> Result<Self> {
        let n = (length / spacing).round() as usize + 1;
        let columns = (0..n)
            .map(|i| {
                let hd = i as f64 * spacing;
                let mut c = CurtainColumn { hd, ..base };
                for f in faults.iter().filter(|f| hd >= f.hd) {
                    c.boundary_tvd_upper += f.throw;
                    c.boundary_tvd_lower += f.throw;
                    c.rho_l = f.rho_l_after;
                }
                c
            })
            .collect();
        Self::new(columns)
    }

    /// Column governing horizontal position `hd` (nearest grid column).
    pub fn column_at(&self, hd: f64) -> Result<&CurtainColumn> {
        let first = self.columns[0].hd;
        let last = self.columns[self.columns.len() - 1].hd;
        if !(hd >= first && hd <= last) {
            return Err(Error::Range(format!("position {hd} m outside curtain [{first}, {last}]")));
        }
        let idx = self.columns.partition_point(|c| c.hd < hd);
        let pick = match idx {
            0 => 0,
            i if i >= self.columns.len() => self.columns.len() - 1,
            i if (self.columns[i].hd - hd) < (hd - self.columns[i - 1].hd) => i,
            i => i - 1,
        };
        Ok(&self.columns[pick])
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        Header::new("acqdesign-curtain", 1).write_to(&mut out)?;
        writeln!(out, "hd,boundary_tvd_upper,boundary_tvd_lower,rho_u,rho_h,rho_l")?;
        for c in &self.columns {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                c.hd, c.boundary_tvd_upper, c.boundary_tvd_lower, c.rho_u, c.rho_h, c.rho_l
            )?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let table = TextTable::read(path)?;
        table.check_format("acqdesign-curtain", 1)?;
        let mut columns = Vec::with_capacity(table.rows.len());
        for (lineno, line) in &table.rows {
            let v = table.numbers(*lineno, line)?;
            if v.len() != 6 {
                return Err(Error::parse(path, *lineno, "expected six fields"));
            }
            columns.push(CurtainColumn {
                hd: v[0],
                boundary_tvd_upper: v[1],
                boundary_tvd_lower: v[2],
                rho_u: v[3],
                rho_h: v[4],
                rho_l: v[5],
            });
        }
        Self::new(columns)
    }
}

/// Local three-layer snapshot seen from TVD `tvd` in `column`, with boundary
/// distances clipped to `ranges`. Above (below) the host layer the tool sees
/// a homogeneous half-space over (under) the nearest boundary.
pub fn local_model(column: &CurtainColumn, tvd: f64, ranges: &SamplingRanges) -> Result<EarthModel5> {
    let (dmin, dmax) = ranges.distance;
    let clip = |d: f64| d.clamp(dmin, dmax);
    let (rho_h, rho_u, rho_l, d_u, d_l) = if tvd < column.boundary_tvd_upper {
        (column.rho_u, column.rho_u, column.rho_h, dmax, clip(column.boundary_tvd_upper - tvd))
    } else if tvd > column.boundary_tvd_lower {
        (column.rho_l, column.rho_h, column.rho_l, clip(tvd - column.boundary_tvd_lower), dmax)
    } else {
        (
            column.rho_h,
            column.rho_u,
            column.rho_l,
            clip(tvd - column.boundary_tvd_upper),
            clip(column.boundary_tvd_lower - tvd),
        )
    };
    EarthModel5::new(rho_h, rho_u, rho_l, d_u, d_l)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub hd: f64,
    pub tvd: f64,
    pub dip: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
}

impl Trajectory {
    pub fn new(points: Vec<TrajectoryPoint>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if !(82.0..=96.0).contains(&p.dip) {
                return Err(Error::Domain(format!("point {i}: dip {} outside [82, 96]", p.dip)));
            }
            if i > 0 && !(p.hd > points[i - 1].hd) {
                return Err(Error::Domain(format!("point {i}: horizontal distance must increase")));
            }
        }
        Ok(Self { points })
    }

    /// Logging positions every `spacing` metres with the dip following
    /// `dip_at(hd)`; TVD is integrated from the dip (90 deg is horizontal).
    pub fn integrate(start_hd: f64, length: f64, spacing: f64, start_tvd: f64, dip_at: impl Fn(f64) -> f64) -> Result<Self> {
        let n = (length / spacing).round() as usize + 1;
        let mut tvd = start_tvd;
        let mut points = Vec::with_capacity(n);
        for i in 0..n {
            let hd = start_hd + i as f64 * spacing;
            let dip = dip_at(hd);
            if i > 0 {
                // Mid-point rule on dTVD/dHD = cot(dip).
                let mid = dip_at(hd - 0.5 * spacing).to_radians();
                tvd += spacing * mid.cos() / mid.sin();
            }
            points.push(TrajectoryPoint { hd, tvd, dip });
        }
        Self::new(points)
    }

    /// Straight horizontal section at fixed TVD with a small tool-axis
    /// wobble of `amplitude` degrees around horizontal.
    pub fn level_with_wobble(start_hd: f64, length: f64, spacing: f64, tvd: f64, amplitude: f64, period: f64) -> Result<Self> {
        let n = (length / spacing).round() as usize + 1;
        Self::new(
            (0..n)
                .map(|i| {
                    let hd = start_hd + i as f64 * spacing;
                    TrajectoryPoint {
                        hd,
                        tvd,
                        dip: 90.0 + amplitude * (2.0 * std::f64::consts::PI * hd / period).sin(),
                    }
                })
                .collect(),
        )
    }
}

/// A formation with the well path drilled through it.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelProblem {
    pub name: &'static str,
    pub curtain: CurtainModel,
    pub trajectory: Trajectory,
}

/// Length of the generated sections (m).
pub const SECTION_LENGTH: f64 = 540.0;

/// Host column shared by the generated formations: 3.5 m resistive layer
/// under a shale, above a conductive bed, landed at TVD 1000 m.
pub const BASE_COLUMN: CurtainColumn = CurtainColumn {
    hd: 0.0,
    boundary_tvd_upper: 998.0,
    boundary_tvd_lower: 1001.5,
    rho_u: 10.0,
    rho_h: 100.0,
    rho_l: 2.0,
};

/// Fault positions of [`ModelProblem::faulted`].
pub const FAULTS: [Fault; 2] = [
    Fault {
        hd: 180.0,
        throw: 0.8,
        rho_l_after: 8.0,
    },
    Fault {
        hd: 360.0,
        throw: -1.2,
        rho_l_after: 3.0,
    },
];

impl ModelProblem {
    /// Laterally uniform formation, level well with a +-2 deg tool-axis wobble.
    pub fn uniform(spacing: f64) -> Result<Self> {
        Ok(Self {
            name: "uniform",
            curtain: CurtainModel::uniform(SECTION_LENGTH, spacing, BASE_COLUMN)?,
            trajectory: Trajectory::level_with_wobble(0.0, SECTION_LENGTH, spacing, 1000.0, 2.0, 90.0)?,
        })
    }

    /// Resistive layer over a conductive one, cut by the two [`FAULTS`].
    pub fn faulted(spacing: f64) -> Result<Self> {
        Ok(Self {
            name: "faulted",
            curtain: CurtainModel::faulted(SECTION_LENGTH, spacing, BASE_COLUMN, &FAULTS)?,
            trajectory: gentle_trajectory(spacing)?,
        })
    }

    /// Conductive layer between two resistive ones, with undulating boundaries.
    pub fn sandwich(spacing: f64) -> Result<Self> {
        let n = (SECTION_LENGTH / spacing).round() as usize + 1;
        let tau = 2.0 * std::f64::consts::PI;
        let columns = (0..n)
            .map(|i| {
                let hd = i as f64 * spacing;
                CurtainColumn {
                    hd,
                    boundary_tvd_upper: 998.5 + 0.5 * (tau * hd / SECTION_LENGTH).sin(),
                    boundary_tvd_lower: 1001.5 + 0.7 * (tau * hd / 300.0 + 1.0).sin(),
                    rho_u: 50.0,
                    rho_h: 5.0,
                    rho_l: 200.0,
                }
            })
            .collect();
        Ok(Self {
            name: "sandwich",
            curtain: CurtainModel::new(columns)?,
            trajectory: gentle_trajectory(spacing)?,
        })
    }

    pub fn by_name(name: &str, spacing: f64) -> Result<Self> {
        match name {
            "uniform" => Self::uniform(spacing),
            "faulted" => Self::faulted(spacing),
            "sandwich" => Self::sandwich(spacing),
            other => Err(Error::Config(format!("unknown formation '{other}' (uniform, faulted, sandwich)"))),
        }
    }
}

/// Near-horizontal well with a slow +-0.15 deg dip oscillation.
fn gentle_trajectory(spacing: f64) -> Result<Trajectory> {
    Trajectory::integrate(0.0, SECTION_LENGTH, spacing, 1000.0, |hd| {
        90.0 + 0.15 * (2.0 * std::f64::consts::PI * hd / 270.0).sin()
    })
}

/// Per-position inversion result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionPrediction {
    pub point: TrajectoryPoint,
    pub truth: EarthModel5,
    pub predicted: EarthModel5,
}

/// What an inversion sees at one logging position.
pub struct LocalSample<'a> {
    pub truth: &'a EarthModel5,
    pub tool: &'a ToolState,
    /// Attenuation and phase of the system channels, in system order.
    pub measurements: &'a [f64],
}

/// Inverts every trajectory position. The local 1D model is simulated with
/// the true forward on `system`, then handed to `invert`.
pub fn invert_trajectory(
    curtain: &CurtainModel,
    trajectory: &Trajectory,
    system: &[ChannelId],
    ranges: &SamplingRanges,
    simulation: &ForwardConfig,
    invert: &(dyn Fn(&LocalSample) -> Result<EarthModel5> + Sync),
) -> Result<Vec<PositionPrediction>> {
    let specs = system.iter().map(|&c| ChannelSpec::from_id(c)).collect::<Result<Vec<_>>>()?;
    trajectory
        .points
        .par_iter()
        .map(|p| {
            let column = curtain.column_at(p.hd)?;
            let truth = local_model(column, p.tvd, ranges)?;
            let tool = ToolState::new(p.tvd, p.dip)?;
            let mut measurements = Vec::with_capacity(2 * specs.len());
            for spec in &specs {
                let m = simulate_channel(&truth, &tool, spec, simulation)?;
                measurements.extend([m.attenuation, m.phase_difference]);
            }
            let predicted = invert(&LocalSample {
                truth: &truth,
                tool: &tool,
                measurements: &measurements,
            })?;
            Ok(PositionPrediction {
                point: *p,
                truth,
                predicted,
            })
        })
        .collect()
}

/// Inversion through a trained inverse network.
pub fn surrogate_inversion<'a>(
    inverse: &'a TrainedInverse,
    norm: &'a NormalizationSpec,
) -> impl Fn(&LocalSample) -> Result<EarthModel5> + Sync + 'a {
    move |s: &LocalSample| {
        let mut row = Vec::with_capacity(s.measurements.len() + 1);
        for (k, id) in inverse.channels.iter().enumerate() {
            let col = attenuation_column(id.0);
            row.push(norm.normalize_measurement(col, s.measurements[2 * k])?);
            row.push(norm.normalize_measurement(col + 1, s.measurements[2 * k + 1])?);
        }
        row.push(norm.inputs[5].normalize(s.tool.dip)?.0);
        let y = inverse.net.forward_eval(&row)?;
        let clamped: Vec<f64> = y.iter().map(|v| v.clamp(0.5, 1.5)).collect();
        norm.denormalize_params(&clamped)
    }
}

/// Writes per-position truth and prediction.
pub fn emit_curtain(predictions: &[PositionPrediction], path: &Path, seed: u64, system: &[ChannelId]) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    let mut h = Header::new("acqdesign-trajectory-inversion", 1);
    h.set("seed", seed)
        .set("system_hash", system_hash(system))
        .set("system", system.iter().map(|c| c.0.to_string()).collect::<Vec<_>>().join(";"));
    h.write_to(&mut out)?;
    let names: Vec<String> = PARAM_NAMES
        .iter()
        .flat_map(|p| [format!("true_{p}"), format!("pred_{p}")])
        .collect();
    writeln!(out, "hd,tvd,dip,{}", names.join(","))?;
    for p in predictions {
        let t = p.truth.to_array();
        let q = p.predicted.to_array();
        let vals: Vec<String> = (0..5).flat_map(|i| [t[i].to_string(), q[i].to_string()]).collect();
        writeln!(out, "{},{},{},{}", p.point.hd, p.point.tvd, p.point.dip, vals.join(","))?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a file written by [`emit_curtain`].
pub fn read_curtain_predictions(path: &Path) -> Result<Vec<PositionPrediction>> {
    let table = TextTable::read(path)?;
    table.check_format("acqdesign-trajectory-inversion", 1)?;
    table
        .rows
        .iter()
        .map(|(lineno, line)| {
            let v = table.numbers(*lineno, line)?;
            if v.len() != 13 {
                return Err(Error::parse(path, *lineno, "expected 13 fields"));
            }
            let model = |o: usize| EarthModel5::new(v[3 + o], v[5 + o], v[7 + o], v[9 + o], v[11 + o]);
            Ok(PositionPrediction {
                point: TrajectoryPoint {
                    hd: v[0],
                    tvd: v[1],
                    dip: v[2],
                },
                truth: model(0).map_err(|e| Error::parse(path, *lineno, e.to_string()))?,
                predicted: model(1).map_err(|e| Error::parse(path, *lineno, e.to_string()))?,
            })
        })
        .collect()
}

/// Positions of the `count` strongest steps of `series`, at least
/// `separation` apart, in increasing order. A step at `i` is the difference
/// between the means of the `window` values from `i` on and the `window`
/// values before it; `window = 1` compares neighbours.
pub fn detect_transitions(series: &[f64], count: usize, window: usize, separation: usize) -> Vec<usize> {
    let w = window.max(1);
    if series.len() < 2 * w {
        return Vec::new();
    }
    let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    let mut steps: Vec<(usize, f64)> = (w..=series.len() - w)
        .map(|i| (i, (mean(&series[i..i + w]) - mean(&series[i - w..i])).abs()))
        .collect();
    steps.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut picked: Vec<usize> = Vec::new();
    for (i, _) in steps {
        if picked.len() == count {
            break;
        }
        if picked.iter().all(|&p| p.abs_diff(i) >= separation) {
            picked.push(i);
        }
    }
    picked.sort_unstable();
    picked
}

/// Synthetic data with a two-valued inverse: every measurement is symmetric
/// in the first normalized parameter about 1, so `p0 = 1 + a` and `1 - a`
/// are indistinguishable. The other parameters are observed directly.
pub fn two_branch_forward(p: &[f64]) -> [f64; 6] {
    let fold = 0.5 + 4.0 * (p[0] - 1.0) * (p[0] - 1.0);
    [fold, p[1], p[2], p[3], p[4], 0.5 * (fold + p[1])]
}

/// `n` samples of [`two_branch_forward`] with normalized parameters drawn
/// uniformly from `[0.5, 1.5]` and a constant normalized dip.
pub fn two_branch_matrices(n: usize, seed: u64) -> Matrices {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inputs = Array2::zeros((n, 6));
    let mut measurements = Array2::zeros((n, 6));
    for i in 0..n {
        let p: Vec<f64> = (0..5).map(|_| rng.gen_range(0.5..=1.5)).collect();
        inputs.row_mut(i).assign(&Array1::from(vec![p[0], p[1], p[2], p[3], p[4], 1.0]));
        measurements.row_mut(i).assign(&Array1::from(two_branch_forward(&p).to_vec()));
    }
    Matrices { inputs, measurements }
}
