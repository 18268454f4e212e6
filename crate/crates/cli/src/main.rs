mod config;
mod manifest;

use std::path::{Path, PathBuf};
use std::time::Instant;

use acqdesign::channels::{parse_channel, write_catalog_csv, ChannelId};
use acqdesign::dataset::{split, Dataset, DatasetSplit, NormalizationSpec, SampleRecord, DEFAULT_FRACTIONS, PARAM_NAMES};
use acqdesign::designer::{
    design, final_retrain, invert_records, resimulate, wrap_flags, write_report_csv, StopReason, SurrogateInverter,
};
use acqdesign::neural::{
    checkpoint_channels, checkpoint_header, train_forward, train_inverse, train_inverse_data_misfit, Matrices, Mlp,
    TrainedForward, TrainedInverse,
};
use acqdesign::workbench::{
    crossplot_type1, crossplot_type2, emit_curtain, emit_table, invert_trajectory, surrogate_inversion, CurtainModel,
    ModelProblem, Trajectory,
};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;
use crate::manifest::Manifest;

/// Design minimal borehole-resistivity acquisition systems with neural
/// surrogates of a layered-earth EM simulator.
#[derive(Parser)]
#[command(name = "acqdesign", version)]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// More log output (repeat for debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a dataset of random three-layer models over all 45 channels.
    GenData(GenData),
    /// Train the forward surrogate on a channel system.
    TrainForward(TrainForwardArgs),
    /// Train an inverse network, through a frozen forward or by direct regression.
    TrainInverse(TrainInverseArgs),
    /// Grow an acquisition system greedily until every channel scores above the threshold.
    Design(DesignArgs),
    /// Retrain on the full training split for a fixed system and score every channel.
    Retrain(RetrainArgs),
    /// Invert logging positions along a well path through a curtain formation.
    Invert(InvertArgs),
    /// Emit cross-plot tables (type 1: measurements, type 2: model parameters).
    Crossplot(CrossplotArgs),
}

#[derive(Args)]
struct OutDir {
    /// Directory for all outputs of this run.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct GenData {
    #[command(flatten)]
    out: OutDir,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct DataInput {
    /// Dataset written by gen-data.
    #[arg(long)]
    data: PathBuf,
    /// Seed of the train/validation/test split.
    #[arg(long)]
    split_seed: Option<u64>,
}

#[derive(Args)]
struct TrainForwardArgs {
    #[command(flatten)]
    out: OutDir,
    #[command(flatten)]
    input: DataInput,
    /// Comma-separated channel ids or names.
    #[arg(long, default_value = "0")]
    channels: String,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct TrainInverseArgs {
    #[command(flatten)]
    out: OutDir,
    #[command(flatten)]
    input: DataInput,
    /// Frozen forward checkpoint (its channel list is reused).
    #[arg(long, required_unless_present = "baseline")]
    forward: Option<PathBuf>,
    /// Train by direct regression of parameters instead (needs --channels).
    #[arg(long)]
    baseline: bool,
    #[arg(long, default_value = "0")]
    channels: String,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct DesignArgs {
    #[command(flatten)]
    out: OutDir,
    #[command(flatten)]
    input: DataInput,
    /// Starting channel, by id or name.
    #[arg(long)]
    initial_channel: Option<String>,
    /// Averaged R^2 every channel must reach.
    #[arg(long)]
    threshold: Option<f64>,
    /// Samples of the dataset used for design (the leading ones).
    #[arg(long)]
    design_samples: Option<usize>,
    /// Seed of the split and both networks.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct RetrainArgs {
    #[command(flatten)]
    out: OutDir,
    #[command(flatten)]
    input: DataInput,
    /// Channel system: comma-separated ids/names, or a system.txt from design.
    #[arg(long)]
    system: String,
}

#[derive(Args)]
struct InvertArgs {
    #[command(flatten)]
    out: OutDir,
    #[arg(long)]
    inverse: PathBuf,
    #[arg(long)]
    normalization: PathBuf,
    /// Built-in formation: uniform, faulted or sandwich.
    #[arg(long, default_value = "faulted", conflicts_with = "curtain")]
    formation: String,
    /// Curtain geometry file; the well is then level at --tvd.
    #[arg(long)]
    curtain: Option<PathBuf>,
    #[arg(long, default_value_t = 1000.0)]
    tvd: f64,
    #[arg(long)]
    spacing: Option<f64>,
}

#[derive(Args)]
struct CrossplotArgs {
    #[command(flatten)]
    out: OutDir,
    #[command(flatten)]
    input: DataInput,
    #[arg(long)]
    inverse: PathBuf,
    #[arg(long)]
    normalization: PathBuf,
    /// 1 (measurements) or 2 (model parameters).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    kind: u8,
    /// Restrict type 1 to one channel.
    #[arg(long)]
    channel: Option<String>,
    /// Validation models to use.
    #[arg(long)]
    samples: Option<usize>,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "info",
        1 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let config = RunConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::GenData(a) => gen_data(config, a),
        Command::TrainForward(a) => train_forward_cmd(config, a),
        Command::TrainInverse(a) => train_inverse_cmd(config, a),
        Command::Design(a) => design_cmd(config, a),
        Command::Retrain(a) => retrain_cmd(config, a),
        Command::Invert(a) => invert_cmd(config, a),
        Command::Crossplot(a) => crossplot_cmd(config, a),
    }
}

fn parse_channels(list: &str) -> Result<Vec<ChannelId>> {
    let mut out: Vec<ChannelId> = Vec::new();
    for item in list.split(',').filter(|s| !s.trim().is_empty()) {
        let id = parse_channel(item)?.id;
        if out.contains(&id) {
            bail!("channel {id} listed twice");
        }
        out.push(id);
    }
    if out.is_empty() {
        bail!("no channels given");
    }
    Ok(out)
}

/// Reads a system either inline or from a file with one id per line.
fn read_system(spec: &str) -> Result<Vec<ChannelId>> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        let ids: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
        parse_channels(&ids.join(","))
    } else {
        parse_channels(spec)
    }
}

struct Prepared {
    dataset: Dataset,
    split: DatasetSplit,
    train: Vec<SampleRecord>,
    validation: Vec<SampleRecord>,
    norm: NormalizationSpec,
}

fn prepare(input: &DataInput, config: &RunConfig, limit: Option<usize>, manifest: &mut Manifest) -> Result<Prepared> {
    let mut dataset = Dataset::load(&input.data).with_context(|| format!("loading {}", input.data.display()))?;
    manifest.input("data", &input.data)?;
    if let Some(n) = limit {
        if n < dataset.len() {
            dataset = dataset.truncated(n);
        }
    }
    let seed = input.split_seed.unwrap_or(config.design.split_seed);
    manifest.set("split_seed", seed).set("samples_used", dataset.len());
    let split = split(dataset.len(), DEFAULT_FRACTIONS, seed)?;
    let train = dataset.subset(&split.train).records;
    let validation = dataset.subset(&split.validation).records;
    let norm = NormalizationSpec::fit(&dataset.ranges, &train)?;
    Ok(Prepared {
        dataset,
        split,
        train,
        validation,
        norm,
    })
}

fn save_normalization(p: &Prepared, dir: &Path, manifest: &mut Manifest) -> Result<PathBuf> {
    let path = dir.join("normalization.txt");
    p.norm.save(&path, p.dataset.seed, &p.dataset.ranges)?;
    manifest.output(&path)?;
    Ok(path)
}

fn save_net(net: &Mlp, kind: &str, channels: &[ChannelId], seed: u64, dir: &Path, name: &str, m: &mut Manifest) -> Result<PathBuf> {
    let path = dir.join(name);
    net.save(&path, &checkpoint_header(kind, channels, "normalization.txt", seed))?;
    m.output(&path)?;
    Ok(path)
}

fn gen_data(mut config: RunConfig, a: GenData) -> Result<()> {
    let mut m = Manifest::start("gen-data", &a.out.out_dir)?;
    if let Some(v) = a.samples {
        config.data.samples = v;
    }
    if let Some(v) = a.seed {
        config.data.seed = v;
    }
    if let Some(v) = a.workers {
        config.data.workers = v;
    }
    m.config(&config);
    let ds = Dataset::build(
        config.data.samples,
        config.ranges()?,
        config.data.seed,
        config.data.workers,
        &config.simulation()?,
    )?;
    let path = a.out.out_dir.join("dataset.csv");
    ds.save(&path)?;
    m.output(&path)?;
    let cat = a.out.out_dir.join("channels.csv");
    write_catalog_csv(&cat)?;
    m.output(&cat)?;
    m.set("data_seed", config.data.seed).set("resampled", ds.resampled);
    log::info!("wrote {} samples ({} resampled) to {}", ds.len(), ds.resampled, path.display());
    m.finish()
}

fn train_forward_cmd(config: RunConfig, a: TrainForwardArgs) -> Result<()> {
    let mut m = Manifest::start("train-forward", &a.out.out_dir)?;
    let mut cfg = config.forward_train()?;
    cfg.epochs = a.epochs.unwrap_or(cfg.epochs);
    cfg.seed = a.seed.unwrap_or(cfg.seed);
    m.config(&config).set("forward_seed", cfg.seed).set("forward_epochs", cfg.epochs);
    let channels = parse_channels(&a.channels)?;
    let p = prepare(&a.input, &config, None, &mut m)?;
    save_normalization(&p, &a.out.out_dir, &mut m)?;
    let train = Matrices::build(&p.train, &p.norm, &channels)?;
    let val = Matrices::build(&p.validation, &p.norm, &channels)?;
    let f = train_forward(&train, Some(&val), &channels, &cfg)?;
    save_net(&f.net, "forward", &channels, cfg.seed, &a.out.out_dir, "forward.txt", &mut m)?;
    let loss = a.out.out_dir.join("forward_loss.csv");
    f.history.write_csv(&loss)?;
    m.output(&loss)?;
    m.finish()
}

fn load_trained(path: &Path) -> Result<(Mlp, Vec<ChannelId>, u64)> {
    let (net, header) = Mlp::load(path).with_context(|| format!("loading {}", path.display()))?;
    let channels = checkpoint_channels(&header)?;
    let seed = header.get("seed").and_then(|s| s.parse().ok()).unwrap_or(0);
    Ok((net, channels, seed))
}

fn train_inverse_cmd(config: RunConfig, a: TrainInverseArgs) -> Result<()> {
    let mut m = Manifest::start("train-inverse", &a.out.out_dir)?;
    let mut cfg = config.inverse_train()?;
    cfg.epochs = a.epochs.unwrap_or(cfg.epochs);
    cfg.seed = a.seed.unwrap_or(cfg.seed);
    m.config(&config).set("inverse_seed", cfg.seed).set("inverse_epochs", cfg.epochs);
    let p = prepare(&a.input, &config, None, &mut m)?;
    save_normalization(&p, &a.out.out_dir, &mut m)?;
    let (inverse, kind) = if a.baseline {
        let channels = parse_channels(&a.channels)?;
        let train = Matrices::build(&p.train, &p.norm, &channels)?;
        let val = Matrices::build(&p.validation, &p.norm, &channels)?;
        (train_inverse_data_misfit(&train, Some(&val), &channels, &cfg)?, "inverse-baseline")
    } else {
        let path = a.forward.as_deref().expect("clap requires --forward");
        m.input("forward", path)?;
        let (net, channels, _) = load_trained(path)?;
        let frozen = TrainedForward {
            net,
            channels: channels.clone(),
            history: Default::default(),
        };
        let train = Matrices::build(&p.train, &p.norm, &channels)?;
        let val = Matrices::build(&p.validation, &p.norm, &channels)?;
        (train_inverse(&train, Some(&val), &frozen, &cfg)?, "inverse")
    };
    save_net(&inverse.net, kind, &inverse.channels, cfg.seed, &a.out.out_dir, "inverse.txt", &mut m)?;
    let loss = a.out.out_dir.join("inverse_loss.csv");
    inverse.history.write_csv(&loss)?;
    m.output(&loss)?;
    m.finish()
}

fn design_cmd(mut config: RunConfig, a: DesignArgs) -> Result<()> {
    let started = Instant::now();
    let mut m = Manifest::start("design", &a.out.out_dir)?;
    if let Some(v) = a.initial_channel {
        config.design.initial_channel = v;
    }
    if let Some(v) = a.threshold {
        config.design.threshold = v;
    }
    if let Some(v) = a.design_samples {
        config.design.design_samples = v;
    }
    if let Some(seed) = a.seed {
        config.design.split_seed = seed;
        config.forward.seed = Some(seed);
        config.inverse.seed = Some(seed.wrapping_add(1));
    }
    let cfg = config.design_config()?;
    let initial = parse_channel(&config.design.initial_channel)?.id;
    m.config(&config)
        .set("initial_channel", initial)
        .set("threshold", cfg.threshold)
        .set("forward_seed", cfg.forward.seed)
        .set("inverse_seed", cfg.inverse.seed);
    let p = prepare(&a.input, &config, Some(config.design.design_samples), &mut m)?;
    save_normalization(&p, &a.out.out_dir, &mut m)?;
    let subsample = &p.validation[..cfg.validation_subsample.min(p.validation.len())];
    m.set("validation_subsample", subsample.len());

    let mut inverter = SurrogateInverter::new(&p.train, subsample, &p.norm, &cfg);
    let checkpoints = a.out.out_dir.join("checkpoints");
    inverter.checkpoint_dir = Some(checkpoints);
    let outcome = design(initial, subsample, &mut inverter, &cfg)?;

    let history = a.out.out_dir.join("history.csv");
    outcome.history.write_csv(&history, config.design.split_seed)?;
    m.output(&history)?;
    for it in &outcome.history.iterations {
        let path = a.out.out_dir.join(format!("r2_iter{:02}.csv", it.iteration));
        write_report_csv(&it.report, &path, &format!("iteration {}", it.iteration))?;
        m.output(&path)?;
    }
    for path in inverter.saved.clone() {
        m.output(&path)?;
    }
    if let Some((f, i)) = &inverter.last {
        save_net(&f.net, "forward", &f.channels, cfg.forward.seed, &a.out.out_dir, "final_forward.txt", &mut m)?;
        save_net(&i.net, "inverse", &i.channels, cfg.inverse.seed, &a.out.out_dir, "final_inverse.txt", &mut m)?;
    }
    let system_path = a.out.out_dir.join("system.txt");
    let lines: Vec<String> = outcome.system.iter().map(|c| c.0.to_string()).collect();
    std::fs::write(&system_path, lines.join("\n") + "\n")?;
    m.output(&system_path)?;

    let stop = match &outcome.stop {
        StopReason::Threshold => "threshold".to_string(),
        StopReason::Exhausted => "exhausted".to_string(),
        StopReason::Failed(e) => format!("failed: {e}"),
    };
    let last = outcome.history.iterations.last();
    m.set("stop", &stop)
        .set("iterations", outcome.history.iterations.len())
        .set("system", lines.join(";"))
        .set("final_worst_candidate", last.and_then(|l| l.worst).map_or("none".into(), |(c, s)| format!("{c}:{s}")))
        .set(
            "final_worst_overall",
            last.and_then(|l| l.report.worst_overall()).map_or("none".into(), |(c, s)| format!("{c}:{s}")),
        )
        .set("design_seconds", started.elapsed().as_secs_f64());
    log::info!("design stopped ({stop}) with system {:?}", lines);
    m.finish()?;
    if let StopReason::Failed(e) = outcome.stop {
        bail!("design aborted: {e}");
    }
    Ok(())
}

fn retrain_cmd(config: RunConfig, a: RetrainArgs) -> Result<()> {
    let mut m = Manifest::start("retrain", &a.out.out_dir)?;
    let cfg = config.design_config()?;
    let system = read_system(&a.system)?;
    m.config(&config)
        .set("system", system.iter().map(|c| c.0.to_string()).collect::<Vec<_>>().join(";"))
        .set("forward_seed", cfg.forward.seed)
        .set("inverse_seed", cfg.inverse.seed);
    let p = prepare(&a.input, &config, None, &mut m)?;
    save_normalization(&p, &a.out.out_dir, &mut m)?;
    let (f, i, report) = final_retrain(&system, &p.train, &p.validation, &p.norm, &cfg)?;
    save_net(&f.net, "forward", &system, cfg.forward.seed, &a.out.out_dir, "forward.txt", &mut m)?;
    save_net(&i.net, "inverse", &system, cfg.inverse.seed, &a.out.out_dir, "inverse.txt", &mut m)?;
    let path = a.out.out_dir.join("final_r2.csv");
    write_report_csv(&report, &path, "final")?;
    m.output(&path)?;
    if let Some((c, s)) = report.worst_overall() {
        m.set("final_worst_overall", format!("{c}:{s}"));
    }
    m.set("test_samples", p.split.test.len());
    m.finish()
}

fn load_inverse(path: &Path, norm_path: &Path, m: &mut Manifest) -> Result<(TrainedInverse, NormalizationSpec)> {
    m.input("inverse", path)?;
    m.input("normalization", norm_path)?;
    let (net, channels, _) = load_trained(path)?;
    let norm = NormalizationSpec::load(norm_path)?;
    if net.inputs() != 2 * channels.len() + 1 || net.outputs() != 5 {
        bail!("{} is not an inverse network for {} channels", path.display(), channels.len());
    }
    Ok((
        TrainedInverse {
            net,
            channels,
            history: Default::default(),
        },
        norm,
    ))
}

fn invert_cmd(config: RunConfig, a: InvertArgs) -> Result<()> {
    let mut m = Manifest::start("invert", &a.out.out_dir)?;
    let spacing = a.spacing.unwrap_or(config.trajectory.spacing);
    let (inverse, norm) = load_inverse(&a.inverse, &a.normalization, &mut m)?;
    let problem = match &a.curtain {
        Some(path) => {
            m.input("curtain", path)?;
            let curtain = CurtainModel::load(path)?;
            let first = curtain.columns[0].hd;
            let length = curtain.columns[curtain.columns.len() - 1].hd - first;
            ModelProblem {
                name: "custom",
                trajectory: Trajectory::integrate(first, length, spacing, a.tvd, |_| 90.0)?,
                curtain,
            }
        }
        None => ModelProblem::by_name(&a.formation, spacing)?,
    };
    m.config(&config).set("formation", problem.name).set("spacing", spacing);
    let geometry = a.out.out_dir.join("curtain.csv");
    problem.curtain.save(&geometry)?;
    m.output(&geometry)?;
    let ranges = config.ranges()?;
    let predictions = invert_trajectory(
        &problem.curtain,
        &problem.trajectory,
        &inverse.channels,
        &ranges,
        &config.simulation()?,
        &surrogate_inversion(&inverse, &norm),
    )?;
    let out = a.out.out_dir.join("trajectory_inversion.csv");
    emit_curtain(&predictions, &out, config.data.seed, &inverse.channels)?;
    m.output(&out)?;
    m.finish()
}

fn crossplot_cmd(config: RunConfig, a: CrossplotArgs) -> Result<()> {
    let mut m = Manifest::start("crossplot", &a.out.out_dir)?;
    m.config(&config).set("kind", a.kind);
    let (inverse, norm) = load_inverse(&a.inverse, &a.normalization, &mut m)?;
    let p = prepare(&a.input, &config, None, &mut m)?;
    let n = a.samples.unwrap_or(config.design.validation_subsample).min(p.validation.len());
    let truth = &p.validation[..n];
    let data = Matrices::build(truth, &norm, &inverse.channels)?;
    let predicted = invert_records(&inverse, &norm, &data)?;
    let seed = config.data.seed;
    if a.kind == 1 {
        let tools: Vec<_> = truth.iter().map(|r| r.tool).collect();
        let resim = resimulate(&predicted, &tools, &config.simulation()?)?;
        let flags = wrap_flags(truth, config.design.wrap_band);
        let channels = match &a.channel {
            Some(c) => vec![parse_channel(c)?.id],
            None => (0..acqdesign::channels::NUM_CHANNELS).map(ChannelId).collect(),
        };
        for c in channels {
            let table = crossplot_type1(c, truth, &resim, flags[c.0])?;
            let path = a.out.out_dir.join(format!("crossplot1_c{:02}.csv", c.0));
            emit_table(&table, &path, seed, &inverse.channels)?;
            m.output(&path)?;
        }
    } else {
        for (k, name) in PARAM_NAMES.iter().enumerate() {
            let table = crossplot_type2(truth, &predicted, k)?;
            let path = a.out.out_dir.join(format!("crossplot2_{name}.csv"));
            emit_table(&table, &path, seed, &inverse.channels)?;
            m.output(&path)?;
        }
    }
    m.finish()
}
