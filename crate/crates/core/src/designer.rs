//! Greedy growth of the acquisition system: train surrogates on the current
//! channel set, re-simulate every channel on the inverted validation models,
//! and add the worst-correlated channel until all clear the threshold.

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::channels::{catalog, phase_wrap_flag, simulate_all, ChannelId, MeasurementPair, DEFAULT_WRAP_BAND, NUM_CHANNELS};
use crate::dataset::{NormalizationSpec, SampleRecord};
use crate::em::{EarthModel5, ForwardConfig, ToolState};
use crate::error::{Error, Result};
use crate::neural::{
    checkpoint_header, composed_misfit, train_forward, train_inverse, LossKind, Matrices, TrainConfig, TrainedForward,
    TrainedInverse,
};

/// `1 - SS_res / SS_tot`, or `None` when the truth has no variance.
pub fn r2_statistic(truth: &[f64], predicted: &[f64]) -> Option<f64> {
    assert_eq!(truth.len(), predicted.len(), "paired samples");
    let n = truth.len() as f64;
    let mean = truth.iter().sum::<f64>() / n;
    let ss_tot: f64 = truth.iter().map(|t| (t - mean) * (t - mean)).sum();
    if !(ss_tot > 0.0) {
        return None;
    }
    let ss_res: f64 = truth.iter().zip(predicted).map(|(t, p)| (t - p) * (t - p)).sum();
    Some(1.0 - ss_res / ss_tot)
}

/// Averaged score of one channel; wrap-flagged channels use attenuation only.
/// `None` when no component has usable variance.
pub fn channel_score(r2_attenuation: Option<f64>, r2_phase: Option<f64>, wrap_flagged: bool) -> Option<f64> {
    match (r2_attenuation, r2_phase, wrap_flagged) {
        (Some(a), _, true) => Some(a),
        (Some(a), Some(p), false) => Some(0.5 * (a + p)),
        (Some(a), None, false) => Some(a),
        (None, Some(p), false) => Some(p),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct R2Entry {
    pub channel: ChannelId,
    pub r2_attenuation: Option<f64>,
    pub r2_phase: Option<f64>,
    pub wrap_flagged: bool,
    pub score: Option<f64>,
    pub in_system: bool,
}

/// Scores of every catalog channel for one inverted validation set.
#[derive(Debug, Clone, PartialEq)]
pub struct R2Report {
    pub entries: Vec<R2Entry>,
}

impl R2Report {
    /// Lowest-scoring channel outside the system; ties go to the lowest id.
    pub fn worst_candidate(&self) -> Option<(ChannelId, f64)> {
        self.worst(|e| !e.in_system)
    }

    /// Lowest score over all channels.
    pub fn worst_overall(&self) -> Option<(ChannelId, f64)> {
        self.worst(|_| true)
    }

    fn worst(&self, keep: impl Fn(&R2Entry) -> bool) -> Option<(ChannelId, f64)> {
        self.entries
            .iter()
            .filter(|e| keep(e))
            .filter_map(|e| e.score.map(|s| (e.channel, s)))
            .fold(None, |best: Option<(ChannelId, f64)>, (c, s)| match best {
                Some((_, b)) if b <= s => best,
                _ => Some((c, s)),
            })
    }

    pub fn entry(&self, id: ChannelId) -> &R2Entry {
        &self.entries[id.0]
    }
}

/// True measurements of every channel for each predicted model.
pub fn resimulate(models: &[EarthModel5], tools: &[ToolState], config: &ForwardConfig) -> Result<Vec<Vec<MeasurementPair>>> {
    if models.len() != tools.len() {
        return Err(Error::Arity {
            expected: tools.len(),
            got: models.len(),
        });
    }
    models
        .par_iter()
        .zip(tools)
        .map(|(m, t)| simulate_all(m, t, config))
        .collect()
}

/// Attenuation and phase R^2 of one channel.
pub fn r2(channel: ChannelId, truth: &[SampleRecord], resimulated: &[Vec<MeasurementPair>]) -> (Option<f64>, Option<f64>) {
    let pick = |rows: &mut dyn Iterator<Item = MeasurementPair>| -> (Vec<f64>, Vec<f64>) {
        rows.map(|m| (m.attenuation, m.phase_difference)).unzip()
    };
    let (ta, tp) = pick(&mut truth.iter().map(|r| r.measurements[channel.0]));
    let (pa, pp) = pick(&mut resimulated.iter().map(|r| r[channel.0]));
    (r2_statistic(&ta, &pa), r2_statistic(&tp, &pp))
}

/// Wrap flags of every channel from the true validation phases.
pub fn wrap_flags(truth: &[SampleRecord], band: f64) -> Vec<bool> {
    (0..NUM_CHANNELS)
        .map(|c| {
            let phases: Vec<f64> = truth.iter().map(|r| r.measurements[c].phase_difference).collect();
            phase_wrap_flag(&phases, band)
        })
        .collect()
}

pub fn report(
    truth: &[SampleRecord],
    predicted: &[EarthModel5],
    system: &[ChannelId],
    flags: &[bool],
    config: &ForwardConfig,
) -> Result<R2Report> {
    let tools: Vec<ToolState> = truth.iter().map(|r| r.tool).collect();
    let resim = resimulate(predicted, &tools, config)?;
    Ok(report_from_resimulated(truth, &resim, system, flags))
}

pub fn report_from_resimulated(
    truth: &[SampleRecord],
    resimulated: &[Vec<MeasurementPair>],
    system: &[ChannelId],
    flags: &[bool],
) -> R2Report {
    let entries = catalog()
        .into_iter()
        .map(|spec| {
            let (a, p) = r2(spec.id, truth, resimulated);
            let flagged = flags[spec.id.0];
            R2Entry {
                channel: spec.id,
                r2_attenuation: a,
                r2_phase: p,
                wrap_flagged: flagged,
                score: channel_score(a, p, flagged),
                in_system: system.contains(&spec.id),
            }
        })
        .collect();
    R2Report { entries }
}

/// Produces inverted validation models for a given channel system.
pub trait Inverter {
    fn fit_predict(&mut self, system: &[ChannelId], iteration: usize) -> Result<Vec<EarthModel5>>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignConfig {
    pub threshold: f64,
    /// Validation models scored per iteration.
    pub validation_subsample: usize,
    pub wrap_band: f64,
    pub forward: TrainConfig,
    pub inverse: TrainConfig,
    pub simulation: ForwardConfig,
}

impl Default for DesignConfig {
    fn default() -> Self {
        Self {
            threshold: 0.8,
            validation_subsample: 2000,
            wrap_band: DEFAULT_WRAP_BAND,
            forward: TrainConfig::forward_default(),
            inverse: TrainConfig::inverse_default(),
            simulation: ForwardConfig::any_layer(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub system: Vec<ChannelId>,
    pub report: R2Report,
    pub worst: Option<(ChannelId, f64)>,
    pub added: Option<ChannelId>,
    pub checkpoints: Vec<PathBuf>,
    pub seconds: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DesignHistory {
    pub iterations: Vec<IterationRecord>,
}

#[derive(Debug)]
pub enum StopReason {
    /// The worst candidate reached the threshold.
    Threshold,
    /// Every channel is in the system.
    Exhausted,
    /// Training or simulation failed; the history up to that point is kept.
    Failed(Error),
}

#[derive(Debug)]
pub struct DesignOutcome {
    pub system: Vec<ChannelId>,
    pub history: DesignHistory,
    pub stop: StopReason,
}

/// Algorithm 1. `truth` is the validation subsample the inverter predicts.
pub fn design(
    initial: ChannelId,
    truth: &[SampleRecord],
    inverter: &mut dyn Inverter,
    config: &DesignConfig,
) -> Result<DesignOutcome> {
    if initial.0 >= NUM_CHANNELS {
        return Err(Error::Range(format!("initial channel {initial} not in the catalog")));
    }
    if truth.is_empty() {
        return Err(Error::Config("empty validation set".into()));
    }
    let flags = wrap_flags(truth, config.wrap_band);
    let mut system = vec![initial];
    let mut history = DesignHistory::default();
    for iteration in 1..=NUM_CHANNELS {
        let started = std::time::Instant::now();
        let step = inverter
            .fit_predict(&system, iteration)
            .and_then(|predicted| report(truth, &predicted, &system, &flags, &config.simulation));
        let report = match step {
            Ok(r) => r,
            Err(e) => {
                return Ok(DesignOutcome {
                    system,
                    history,
                    stop: StopReason::Failed(e),
                })
            }
        };
        let worst = report.worst_candidate();
        let added = worst.filter(|&(_, s)| s < config.threshold).map(|(c, _)| c);
        log::info!(
            "iteration {iteration}: system {:?}, worst candidate {:?}",
            system.iter().map(|c| c.0).collect::<Vec<_>>(),
            worst
        );
        history.iterations.push(IterationRecord {
            iteration,
            system: system.clone(),
            report,
            worst,
            added,
            checkpoints: Vec::new(),
            seconds: started.elapsed().as_secs_f64(),
        });
        match (worst, added) {
            (None, _) => {
                return Ok(DesignOutcome {
                    system,
                    history,
                    stop: StopReason::Exhausted,
                })
            }
            (Some(_), None) => {
                return Ok(DesignOutcome {
                    system,
                    history,
                    stop: StopReason::Threshold,
                })
            }
            (Some(_), Some(c)) => {
                debug_assert!(!system.contains(&c));
                system.push(c);
            }
        }
    }
    Ok(DesignOutcome {
        system,
        history,
        stop: StopReason::Exhausted,
    })
}

/// The two-step neural pipeline as an [`Inverter`].
pub struct SurrogateInverter<'a> {
    pub train: &'a [SampleRecord],
    pub validation: &'a [SampleRecord],
    pub norm: &'a NormalizationSpec,
    pub forward: TrainConfig,
    pub inverse: TrainConfig,
    /// Where per-iteration checkpoints go, if anywhere.
    pub checkpoint_dir: Option<PathBuf>,
    pub last: Option<(TrainedForward, TrainedInverse)>,
    pub saved: Vec<PathBuf>,
}

impl<'a> SurrogateInverter<'a> {
    pub fn new(
        train: &'a [SampleRecord],
        validation: &'a [SampleRecord],
        norm: &'a NormalizationSpec,
        config: &DesignConfig,
    ) -> Self {
        Self {
            train,
            validation,
            norm,
            forward: config.forward.clone(),
            inverse: config.inverse.clone(),
            checkpoint_dir: None,
            last: None,
            saved: Vec::new(),
        }
    }
}

/// Trains the forward surrogate and then the inverse on a channel system.
pub fn train_pair(
    train: &Matrices,
    validation: Option<&Matrices>,
    system: &[ChannelId],
    forward: &TrainConfig,
    inverse: &TrainConfig,
) -> Result<(TrainedForward, TrainedInverse)> {
    let f = train_forward(train, validation, system, forward)?;
    let i = train_inverse(train, validation, &f, inverse)?;
    if let Some(v) = validation {
        log::info!(
            "channels {:?}: forward val loss {:.5}, composed val misfit {:.5}",
            system.iter().map(|c| c.0).collect::<Vec<_>>(),
            f.history.validation.last().copied().unwrap_or(f64::NAN),
            composed_misfit(&i, &f, v, LossKind::Mae)?
        );
    }
    Ok((f, i))
}

/// Predicted physical models, projected into the normalized sampling box.
pub fn invert_records(
    inverse: &TrainedInverse,
    norm: &NormalizationSpec,
    data: &Matrices,
) -> Result<Vec<EarthModel5>> {
    let mut p = inverse.predict_normalized(data.inverse_inputs().view())?;
    p.mapv_inplace(|v| v.clamp(0.5, 1.5));
    p.rows()
        .into_iter()
        .map(|r| norm.denormalize_params(r.as_slice().expect("row-major")))
        .collect()
}

impl Inverter for SurrogateInverter<'_> {
    fn fit_predict(&mut self, system: &[ChannelId], iteration: usize) -> Result<Vec<EarthModel5>> {
        let train = Matrices::build(self.train, self.norm, system)?;
        let val = Matrices::build(self.validation, self.norm, system)?;
        let (f, i) = train_pair(&train, Some(&val), system, &self.forward, &self.inverse)?;
        if let Some(dir) = &self.checkpoint_dir {
            std::fs::create_dir_all(dir)?;
            for (kind, net, seed) in [("forward", &f.net, self.forward.seed), ("inverse", &i.net, self.inverse.seed)] {
                let path = dir.join(format!("iter{iteration:02}_{kind}.txt"));
                net.save(&path, &checkpoint_header(kind, system, "normalization.txt", seed))?;
                self.saved.push(path);
            }
        }
        let predicted = invert_records(&i, self.norm, &val)?;
        self.last = Some((f, i));
        Ok(predicted)
    }
}

/// Retrains on the full training split and scores every channel.
pub fn final_retrain(
    system: &[ChannelId],
    train: &[SampleRecord],
    validation: &[SampleRecord],
    norm: &NormalizationSpec,
    config: &DesignConfig,
) -> Result<(TrainedForward, TrainedInverse, R2Report)> {
    let t = Matrices::build(train, norm, system)?;
    let v = Matrices::build(validation, norm, system)?;
    let (f, i) = train_pair(&t, Some(&v), system, &config.forward, &config.inverse)?;
    let predicted = invert_records(&i, norm, &v)?;
    let flags = wrap_flags(validation, config.wrap_band);
    let r = report(validation, &predicted, system, &flags, &config.simulation)?;
    Ok((f, i, r))
}

impl DesignHistory {
    /// One row per iteration: system, added channel and every channel score.
    pub fn write_csv(&self, path: &Path, seed: u64) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "# format=acqdesign-design-history")?;
        writeln!(out, "# schema_version=1")?;
        writeln!(out, "# seed={seed}")?;
        let scores: Vec<String> = (0..NUM_CHANNELS).map(|c| format!("score_c{c}")).collect();
        writeln!(out, "iteration,system,worst_channel,worst_score,added,seconds,{}", scores.join(","))?;
        for it in &self.iterations {
            let system: Vec<String> = it.system.iter().map(|c| c.0.to_string()).collect();
            let (wc, ws) = it.worst.map_or((String::new(), String::new()), |(c, s)| (c.0.to_string(), s.to_string()));
            let added = it.added.map_or(String::new(), |c| c.0.to_string());
            let row: Vec<String> = it
                .report
                .entries
                .iter()
                .map(|e| e.score.map_or(String::new(), |s| s.to_string()))
                .collect();
            writeln!(
                out,
                "{},{},{wc},{ws},{added},{:.3},{}",
                it.iteration,
                system.join(";"),
                it.seconds,
                row.join(",")
            )?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Long-format detail of a report.
pub fn write_report_csv(report: &R2Report, path: &Path, label: &str) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "# format=acqdesign-r2-report")?;
    writeln!(out, "# schema_version=1")?;
    writeln!(out, "# label={label}")?;
    writeln!(out, "channel,name,in_system,wrap_flagged,r2_attenuation,r2_phase,score")?;
    let fmt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
    for (e, spec) in report.entries.iter().zip(catalog()) {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            e.channel,
            spec.name(),
            e.in_system,
            e.wrap_flagged,
            fmt(e.r2_attenuation),
            fmt(e.r2_phase),
            fmt(e.score)
        )?;
    }
    out.flush()?;
    Ok(())
}
