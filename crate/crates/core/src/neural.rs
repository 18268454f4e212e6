//! Fully connected networks with hand-written backpropagation, and the three
//! training procedures: forward surrogate, inverse through the frozen
//! surrogate, and the direct data-misfit inverse baseline.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};

use ndarray::{concatenate, s, Array1, Array2, ArrayView2, Axis, Zip};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::ChannelId;
use crate::dataset::{attenuation_column, NormalizationSpec, SampleRecord};
use crate::em::EarthModel5;
use crate::error::{Error, Result};
use crate::textio::{fingerprint_f64, Header};

const CHECKPOINT_FORMAT: &str = "acqdesign-network";
const CHECKPOINT_VERSION: u32 = 1;

/// Normalized values the networks were trained on live in `[0.5, 1.5]`;
/// evaluation inputs outside this band are counted as out of domain.
pub const DOMAIN_BAND: (f64, f64) = (0.25, 1.75);

/// Multilayer perceptron: tanh hidden layers, identity output.
#[derive(Debug)]
pub struct Mlp {
    /// `weights[l]` has shape `(inputs, outputs)` of layer `l`.
    pub weights: Vec<Array2<f64>>,
    pub biases: Vec<Array1<f64>>,
    out_of_domain: AtomicUsize,
}

impl Clone for Mlp {
    fn clone(&self) -> Self {
        Self {
            weights: self.weights.clone(),
            biases: self.biases.clone(),
            out_of_domain: AtomicUsize::new(self.out_of_domain_count()),
        }
    }
}

impl PartialEq for Mlp {
    fn eq(&self, other: &Self) -> bool {
        self.weights == other.weights && self.biases == other.biases
    }
}

/// Per-parameter gradient (or optimizer moment), shaped like an [`Mlp`].
#[derive(Debug, Clone, PartialEq)]
pub struct Grads {
    pub weights: Vec<Array2<f64>>,
    pub biases: Vec<Array1<f64>>,
}

impl Grads {
    fn zeros_like(net: &Mlp) -> Self {
        Self {
            weights: net.weights.iter().map(|w| Array2::zeros(w.raw_dim())).collect(),
            biases: net.biases.iter().map(|b| Array1::zeros(b.raw_dim())).collect(),
        }
    }
}

/// Activations recorded during a forward pass.
pub struct Tape {
    /// `layers[0]` is the input; `layers[l + 1]` the output of layer `l`.
    layers: Vec<Array2<f64>>,
}

impl Tape {
    pub fn output(&self) -> &Array2<f64> {
        self.layers.last().expect("tape has the input at least")
    }
}

impl Mlp {
    /// Glorot-uniform weights, zero biases.
    pub fn new(sizes: &[usize], seed: u64) -> Result<Self> {
        if sizes.len() < 2 || sizes.iter().any(|&n| n == 0) {
            return Err(Error::Config(format!("invalid layer sizes {sizes:?}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for pair in sizes.windows(2) {
            let limit = (6.0 / (pair[0] + pair[1]) as f64).sqrt();
            weights.push(Array2::from_shape_fn((pair[0], pair[1]), |_| rng.gen_range(-limit..limit)));
            biases.push(Array1::zeros(pair[1]));
        }
        Ok(Self::from_parts(weights, biases).expect("conformant by construction"))
    }

    pub fn from_parts(weights: Vec<Array2<f64>>, biases: Vec<Array1<f64>>) -> Result<Self> {
        if weights.is_empty() || weights.len() != biases.len() {
            return Err(Error::Config("need one bias vector per weight matrix".into()));
        }
        for l in 0..weights.len() {
            if biases[l].len() != weights[l].ncols() {
                return Err(Error::Arity {
                    expected: weights[l].ncols(),
                    got: biases[l].len(),
                });
            }
            if l > 0 && weights[l].nrows() != weights[l - 1].ncols() {
                return Err(Error::Arity {
                    expected: weights[l - 1].ncols(),
                    got: weights[l].nrows(),
                });
            }
        }
        if weights.iter().flatten().chain(biases.iter().flatten()).any(|v| !v.is_finite()) {
            return Err(Error::Config("network parameters must be finite".into()));
        }
        Ok(Self {
            weights,
            biases,
            out_of_domain: AtomicUsize::new(0),
        })
    }

    /// Layer widths, input first.
    pub fn sizes(&self) -> Vec<usize> {
        std::iter::once(self.weights[0].nrows())
            .chain(self.weights.iter().map(|w| w.ncols()))
            .collect()
    }

    pub fn inputs(&self) -> usize {
        self.weights[0].nrows()
    }

    pub fn outputs(&self) -> usize {
        self.weights.last().expect("nonempty").ncols()
    }

    pub fn parameter_count(&self) -> usize {
        self.weights.iter().map(|w| w.len()).sum::<usize>() + self.biases.iter().map(|b| b.len()).sum::<usize>()
    }

    /// Fingerprint of every parameter bit pattern.
    pub fn checksum(&self) -> u64 {
        fingerprint_f64(self.weights.iter().flatten().chain(self.biases.iter().flatten()).copied())
    }

    /// Number of evaluated input values that fell outside [`DOMAIN_BAND`].
    pub fn out_of_domain_count(&self) -> usize {
        self.out_of_domain.load(Ordering::Relaxed)
    }

    fn check_arity(&self, x: &ArrayView2<f64>) -> Result<()> {
        if x.ncols() != self.inputs() {
            return Err(Error::Arity {
                expected: self.inputs(),
                got: x.ncols(),
            });
        }
        Ok(())
    }

    pub fn forward_eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        let row = ArrayView2::from_shape((1, x.len()), x).expect("row shape");
        Ok(self.predict(row)?.into_raw_vec_and_offset().0)
    }

    /// Batch evaluation, one sample per row.
    pub fn predict(&self, x: ArrayView2<f64>) -> Result<Array2<f64>> {
        self.check_arity(&x)?;
        let outside = x.iter().filter(|v| !(DOMAIN_BAND.0..=DOMAIN_BAND.1).contains(*v)).count();
        if outside > 0 {
            self.out_of_domain.fetch_add(outside, Ordering::Relaxed);
        }
        let mut a = x.to_owned();
        let last = self.weights.len() - 1;
        for (l, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            a = a.dot(w) + b;
            if l < last {
                a.mapv_inplace(f64::tanh);
            }
        }
        Ok(a)
    }

    pub fn forward_cached(&self, x: Array2<f64>) -> Result<Tape> {
        self.check_arity(&x.view())?;
        let mut layers = Vec::with_capacity(self.weights.len() + 1);
        layers.push(x);
        let last = self.weights.len() - 1;
        for (l, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            let mut z = layers[l].dot(w) + b;
            if l < last {
                z.mapv_inplace(f64::tanh);
            }
            layers.push(z);
        }
        Ok(Tape { layers })
    }

    /// Reverse pass from `d_out = dL/d(output)`. Returns parameter gradients
    /// (unless `with_params` is false) and `dL/d(input)`.
    pub fn backward(&self, tape: &Tape, d_out: Array2<f64>, with_params: bool) -> (Option<Grads>, Array2<f64>) {
        let n = self.weights.len();
        let mut grads = with_params.then(|| Grads::zeros_like(self));
        let mut delta = d_out;
        for l in (0..n).rev() {
            if l < n - 1 {
                // tanh' = 1 - a^2, with a the stored activation.
                Zip::from(&mut delta).and(&tape.layers[l + 1]).for_each(|d, &a| *d *= 1.0 - a * a);
            }
            if let Some(g) = grads.as_mut() {
                g.weights[l] = tape.layers[l].t().dot(&delta);
                g.biases[l] = delta.sum_axis(Axis(0));
            }
            delta = delta.dot(&self.weights[l].t());
        }
        (grads, delta)
    }

    /// Loss and its exact gradient over a batch.
    pub fn gradient(&self, x: ArrayView2<f64>, target: ArrayView2<f64>, loss: LossKind) -> Result<(f64, Grads)> {
        if x.nrows() == 0 {
            return Err(Error::Config("empty batch".into()));
        }
        if target.dim() != (x.nrows(), self.outputs()) {
            return Err(Error::Arity {
                expected: self.outputs(),
                got: target.ncols(),
            });
        }
        let tape = self.forward_cached(x.to_owned())?;
        let (value, d_out) = loss.evaluate(tape.output().view(), target);
        let (grads, _) = self.backward(&tape, d_out, true);
        Ok((value, grads.expect("requested")))
    }

    pub fn save(&self, path: &Path, header: &Header) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        let mut h = header.clone();
        h.set("format", CHECKPOINT_FORMAT)
            .set("schema_version", CHECKPOINT_VERSION)
            .set(
                "layers",
                self.sizes().iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","),
            )
            .set("checksum", format!("{:016x}", self.checksum()));
        h.write_to(&mut out)?;
        for (l, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            writeln!(out, "layer {l} {} {}", w.nrows(), w.ncols())?;
            for row in w.rows() {
                writeln!(out, "{}", join(row.iter()))?;
            }
            writeln!(out, "{}", join(b.iter()))?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a checkpoint; returns the network and its header.
    pub fn load(path: &Path) -> Result<(Self, Header)> {
        let reader = BufReader::new(std::fs::File::open(path)?);
        let mut header = Header::default();
        let mut lines = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if let Some(meta) = line.strip_prefix('#') {
                let (k, v) = meta
                    .trim()
                    .split_once('=')
                    .ok_or_else(|| Error::parse(path, i + 1, "header line is not key=value"))?;
                header.set(k.trim(), v.trim());
            } else if !line.trim().is_empty() {
                lines.push((i + 1, line));
            }
        }
        match (header.get("format"), header.get("schema_version")) {
            (Some(CHECKPOINT_FORMAT), Some(v)) if v == CHECKPOINT_VERSION.to_string() => {}
            _ => return Err(Error::SchemaMismatch(format!("{} is not a version-{CHECKPOINT_VERSION} network", path.display()))),
        }
        let numbers = |lineno: usize, text: &str, expect: usize| -> Result<Array1<f64>> {
            let v = text
                .split(',')
                .map(|f| f.trim().parse::<f64>().map_err(|_| Error::parse(path, lineno, format!("'{f}' is not a number"))))
                .collect::<Result<Vec<_>>>()?;
            if v.len() != expect {
                return Err(Error::parse(path, lineno, format!("expected {expect} values, found {}", v.len())));
            }
            Ok(Array1::from(v))
        };
        let mut it = lines.into_iter();
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        while let Some((lineno, line)) = it.next() {
            let f: Vec<&str> = line.split_whitespace().collect();
            let (rows, cols) = match f.as_slice() {
                ["layer", _, r, c] => (
                    r.parse::<usize>().map_err(|_| Error::parse(path, lineno, "bad row count"))?,
                    c.parse::<usize>().map_err(|_| Error::parse(path, lineno, "bad column count"))?,
                ),
                _ => return Err(Error::parse(path, lineno, "expected 'layer <index> <rows> <cols>'")),
            };
            let mut w = Array2::zeros((rows, cols));
            for r in 0..rows {
                let (ln, text) = it.next().ok_or_else(|| Error::parse(path, lineno, "truncated layer"))?;
                w.row_mut(r).assign(&numbers(ln, &text, cols)?);
            }
            let (ln, text) = it.next().ok_or_else(|| Error::parse(path, lineno, "missing bias line"))?;
            biases.push(numbers(ln, &text, cols)?);
            weights.push(w);
        }
        let net = Self::from_parts(weights, biases)?;
        if let Some(sum) = header.get("checksum") {
            if sum != format!("{:016x}", net.checksum()) {
                return Err(Error::SchemaMismatch(format!("{}: checksum mismatch", path.display())));
            }
        }
        Ok((net, header))
    }
}

fn join<'a>(values: impl Iterator<Item = &'a f64>) -> String {
    values.map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LossKind {
    /// Mean absolute error.
    #[default]
    Mae,
    /// Mean squared error.
    Mse,
}

impl LossKind {
    /// Mean loss over every entry and its derivative w.r.t. `pred`.
    pub fn evaluate(self, pred: ArrayView2<f64>, target: ArrayView2<f64>) -> (f64, Array2<f64>) {
        let count = pred.len() as f64;
        let diff = &pred - &target;
        match self {
            LossKind::Mae => {
                let value = diff.iter().map(|d| d.abs()).sum::<f64>() / count;
                let grad = diff.mapv(|d| if d > 0.0 { 1.0 / count } else if d < 0.0 { -1.0 / count } else { 0.0 });
                (value, grad)
            }
            LossKind::Mse => {
                let value = diff.iter().map(|d| d * d).sum::<f64>() / count;
                (value, diff.mapv(|d| 2.0 * d / count))
            }
        }
    }
}

/// Optimizer and schedule settings.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub hidden: Vec<usize>,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    /// Cosine decay from `learning_rate` down to this fraction of it.
    pub final_lr_fraction: f64,
    pub seed: u64,
    pub loss: LossKind,
}

impl TrainConfig {
    pub fn forward_default() -> Self {
        Self {
            hidden: vec![64; 3],
            epochs: 300,
            batch_size: 256,
            learning_rate: 1e-3,
            final_lr_fraction: 0.0,
            seed: 1,
            loss: LossKind::Mae,
        }
    }

    pub fn inverse_default() -> Self {
        Self {
            hidden: vec![128; 5],
            epochs: 600,
            ..Self::forward_default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 || self.batch_size == 0 {
            return Err(Error::Config("epochs and batch size must be at least 1".into()));
        }
        if !(self.learning_rate > 0.0) || !(0.0..=1.0).contains(&self.final_lr_fraction) {
            return Err(Error::Config("learning rate must be positive, final fraction in [0, 1]".into()));
        }
        Ok(())
    }

    fn layer_sizes(&self, inputs: usize, outputs: usize) -> Vec<usize> {
        std::iter::once(inputs).chain(self.hidden.iter().copied()).chain([outputs]).collect()
    }
}

/// Adam with bias correction.
struct Adam {
    m: Grads,
    v: Grads,
    t: i32,
}

impl Adam {
    const B1: f64 = 0.9;
    const B2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    fn new(net: &Mlp) -> Self {
        Self {
            m: Grads::zeros_like(net),
            v: Grads::zeros_like(net),
            t: 0,
        }
    }

    fn step(&mut self, net: &mut Mlp, g: &Grads, lr: f64) {
        self.t += 1;
        let c1 = 1.0 - Self::B1.powi(self.t);
        let c2 = 1.0 - Self::B2.powi(self.t);
        let update = |p: &mut f64, m: &mut f64, v: &mut f64, g: f64| {
            *m = Self::B1 * *m + (1.0 - Self::B1) * g;
            *v = Self::B2 * *v + (1.0 - Self::B2) * g * g;
            *p -= lr * (*m / c1) / ((*v / c2).sqrt() + Self::EPS);
        };
        for l in 0..net.weights.len() {
            Zip::from(&mut net.weights[l])
                .and(&mut self.m.weights[l])
                .and(&mut self.v.weights[l])
                .and(&g.weights[l])
                .for_each(|p, m, v, &g| update(p, m, v, g));
            Zip::from(&mut net.biases[l])
                .and(&mut self.m.biases[l])
                .and(&mut self.v.biases[l])
                .and(&g.biases[l])
                .for_each(|p, m, v, &g| update(p, m, v, g));
        }
    }
}

/// Per-epoch mean training loss and (optional) validation loss.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LossHistory {
    pub train: Vec<f64>,
    pub validation: Vec<f64>,
}

impl LossHistory {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "epoch,train_loss,validation_loss")?;
        for (e, t) in self.train.iter().enumerate() {
            let v = self.validation.get(e).map_or(String::new(), |v| v.to_string());
            writeln!(out, "{},{t},{v}", e + 1)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn final_train(&self) -> f64 {
        self.train.last().copied().unwrap_or(f64::NAN)
    }
}

/// Shared minibatch loop. `step` returns the batch loss and gradient.
fn fit(
    net: &mut Mlp,
    samples: usize,
    config: &TrainConfig,
    mut step: impl FnMut(&Mlp, &[usize]) -> Result<(f64, Grads)>,
    mut validate: impl FnMut(&Mlp) -> Result<Option<f64>>,
) -> Result<LossHistory> {
    config.validate()?;
    if samples == 0 {
        return Err(Error::Config("no training samples".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5eed_0f_ba7c4);
    let mut order: Vec<usize> = (0..samples).collect();
    let mut adam = Adam::new(net);
    let batches = samples.div_ceil(config.batch_size);
    let total_steps = (config.epochs * batches) as f64;
    let mut history = LossHistory::default();
    let mut done = 0usize;
    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        let mut acc = 0.0;
        for batch in order.chunks(config.batch_size) {
            let (loss, grads) = step(net, batch)?;
            if !loss.is_finite() {
                return Err(Error::TrainingFailure { epoch, loss });
            }
            let progress = done as f64 / total_steps;
            let decay = 0.5 * (1.0 + (std::f64::consts::PI * progress).cos());
            let lr = config.learning_rate * (config.final_lr_fraction + (1.0 - config.final_lr_fraction) * decay);
            adam.step(net, &grads, lr);
            acc += loss * batch.len() as f64;
            done += 1;
        }
        let mean = acc / samples as f64;
        history.train.push(mean);
        if let Some(v) = validate(net)? {
            if !v.is_finite() {
                return Err(Error::TrainingFailure { epoch, loss: v });
            }
            history.validation.push(v);
        }
        if epoch % 50 == 0 || epoch == config.epochs {
            log::debug!("epoch {epoch}: train {mean:.6}");
        }
    }
    Ok(history)
}

fn rows(m: &Array2<f64>, idx: &[usize]) -> Array2<f64> {
    m.select(Axis(0), idx)
}

/// Normalized training matrices for a channel subset.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrices {
    /// `(n, 6)`: five parameters then dip.
    pub inputs: Array2<f64>,
    /// `(n, 2 |channels|)`: attenuation, phase per channel in system order.
    pub measurements: Array2<f64>,
}

impl Matrices {
    pub fn build(records: &[SampleRecord], norm: &NormalizationSpec, channels: &[ChannelId]) -> Result<Self> {
        let n = records.len();
        let mut inputs = Array2::zeros((n, 6));
        let mut measurements = Array2::zeros((n, 2 * channels.len()));
        for (i, rec) in records.iter().enumerate() {
            let x = norm.normalize_inputs(&rec.inputs())?;
            inputs.row_mut(i).assign(&Array1::from(x.to_vec()));
            for (k, id) in channels.iter().enumerate() {
                let m = rec.measurements[id.0];
                let col = attenuation_column(id.0);
                measurements[[i, 2 * k]] = norm.normalize_measurement(col, m.attenuation)?;
                measurements[[i, 2 * k + 1]] = norm.normalize_measurement(col + 1, m.phase_difference)?;
            }
        }
        Ok(Self { inputs, measurements })
    }

    pub fn len(&self) -> usize {
        self.inputs.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dip(&self) -> ArrayView2<'_, f64> {
        self.inputs.slice(s![.., 5..6])
    }

    /// Inverse-network input: measurements followed by dip.
    pub fn inverse_inputs(&self) -> Array2<f64> {
        concatenate![Axis(1), self.measurements, self.dip()]
    }
}

/// Forward surrogate: normalized (parameters, dip) to normalized measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedForward {
    pub net: Mlp,
    pub channels: Vec<ChannelId>,
    pub history: LossHistory,
}

/// Inverse network: normalized (measurements, dip) to normalized parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedInverse {
    pub net: Mlp,
    pub channels: Vec<ChannelId>,
    pub history: LossHistory,
}

fn check_channels(channels: &[ChannelId], data: &Matrices) -> Result<()> {
    if channels.is_empty() {
        return Err(Error::Config("at least one channel is required".into()));
    }
    if data.measurements.ncols() != 2 * channels.len() {
        return Err(Error::Arity {
            expected: 2 * channels.len(),
            got: data.measurements.ncols(),
        });
    }
    Ok(())
}

pub fn train_forward(
    train: &Matrices,
    validation: Option<&Matrices>,
    channels: &[ChannelId],
    config: &TrainConfig,
) -> Result<TrainedForward> {
    check_channels(channels, train)?;
    let mut net = Mlp::new(&config.layer_sizes(6, 2 * channels.len()), config.seed)?;
    let history = fit(
        &mut net,
        train.len(),
        config,
        |net, batch| {
            net.gradient(
                rows(&train.inputs, batch).view(),
                rows(&train.measurements, batch).view(),
                config.loss,
            )
        },
        |net| {
            validation
                .map(|v| Ok(config.loss.evaluate(net.predict(v.inputs.view())?.view(), v.measurements.view()).0))
                .transpose()
        },
    )?;
    Ok(TrainedForward {
        net,
        channels: channels.to_vec(),
        history,
    })
}

impl TrainedForward {
    /// Normalized measurements predicted for normalized inputs.
    pub fn predict(&self, inputs: ArrayView2<f64>) -> Result<Array2<f64>> {
        self.net.predict(inputs)
    }
}

impl TrainedInverse {
    /// Normalized parameters from normalized (measurements, dip) rows.
    pub fn predict_normalized(&self, inverse_inputs: ArrayView2<f64>) -> Result<Array2<f64>> {
        self.net.predict(inverse_inputs)
    }

    /// Physical earth models for a normalized data set.
    pub fn predict_models(&self, data: &Matrices, norm: &NormalizationSpec) -> Result<Vec<EarthModel5>> {
        let p = self.predict_normalized(data.inverse_inputs().view())?;
        p.rows()
            .into_iter()
            .map(|r| norm.denormalize_params(r.as_slice().expect("row-major")))
            .collect()
    }
}

/// Normalized box the surrogates are trained on.
pub const BOX: (f64, f64) = (0.5, 1.5);

/// Composition `F(P(I(m, dip)), dip)` where `P` projects onto [`BOX`], so the
/// surrogate never sees inputs it was not trained on. Returns the measurement
/// misfit, a penalty on the distance of `I` outside the box (which carries
/// the gradient the projection removes) and, on request, the gradients of
/// their sum.
fn composed_loss(
    inverse: &Mlp,
    forward: &Mlp,
    inverse_in: Array2<f64>,
    dip: ArrayView2<f64>,
    target: ArrayView2<f64>,
    loss: LossKind,
    with_grads: bool,
) -> Result<(f64, f64, Option<Grads>)> {
    let tape_i = inverse.forward_cached(inverse_in)?;
    let raw = tape_i.output();
    let projected = raw.mapv(|v| v.clamp(BOX.0, BOX.1));
    let count = raw.len() as f64;
    let penalty = raw.iter().map(|v| (BOX.0 - v).max(0.0) + (v - BOX.1).max(0.0)).sum::<f64>() / count;
    let forward_in = concatenate![Axis(1), projected, dip];
    let tape_f = forward.forward_cached(forward_in)?;
    let (value, d_out) = loss.evaluate(tape_f.output().view(), target);
    if !with_grads {
        return Ok((value, penalty, None));
    }
    let (_, d_forward_in) = forward.backward(&tape_f, d_out, false);
    let mut d_params = d_forward_in.slice(s![.., ..5]).to_owned();
    Zip::from(&mut d_params).and(raw).for_each(|d, &v| {
        if v < BOX.0 {
            *d = -1.0 / count;
        } else if v > BOX.1 {
            *d = 1.0 / count;
        }
    });
    let (grads, _) = inverse.backward(&tape_i, d_params, true);
    Ok((value, penalty, grads))
}

/// Measurement misfit `|F(P(I(m))) - m|` of an inverse through a surrogate.
pub fn composed_misfit(inverse: &TrainedInverse, forward: &TrainedForward, data: &Matrices, loss: LossKind) -> Result<f64> {
    Ok(composed_loss(
        &inverse.net,
        &forward.net,
        data.inverse_inputs(),
        data.dip(),
        data.measurements.view(),
        loss,
        false,
    )?
    .0)
}

/// Trains the inverse through the frozen forward surrogate.
pub fn train_inverse(
    train: &Matrices,
    validation: Option<&Matrices>,
    frozen: &TrainedForward,
    config: &TrainConfig,
) -> Result<TrainedInverse> {
    check_channels(&frozen.channels, train)?;
    let checksum = frozen.net.checksum();
    let inputs = train.inverse_inputs();
    let mut net = Mlp::new(&config.layer_sizes(2 * frozen.channels.len() + 1, 5), config.seed)?;
    let history = fit(
        &mut net,
        train.len(),
        config,
        |net, batch| {
            let (value, penalty, grads) = composed_loss(
                net,
                &frozen.net,
                rows(&inputs, batch),
                rows(&train.inputs, batch).slice(s![.., 5..6]),
                rows(&train.measurements, batch).view(),
                config.loss,
                true,
            )?;
            Ok((value + penalty, grads.expect("requested")))
        },
        |net| {
            validation
                .map(|v| {
                    composed_loss(net, &frozen.net, v.inverse_inputs(), v.dip(), v.measurements.view(), config.loss, false)
                        .map(|r| r.0)
                })
                .transpose()
        },
    )?;
    assert_eq!(frozen.net.checksum(), checksum, "forward surrogate must stay frozen");
    Ok(TrainedInverse {
        net,
        channels: frozen.channels.clone(),
        history,
    })
}

/// Direct regression from measurements to parameters (data-misfit baseline).
pub fn train_inverse_data_misfit(
    train: &Matrices,
    validation: Option<&Matrices>,
    channels: &[ChannelId],
    config: &TrainConfig,
) -> Result<TrainedInverse> {
    check_channels(channels, train)?;
    let inputs = train.inverse_inputs();
    let targets = train.inputs.slice(s![.., ..5]).to_owned();
    let mut net = Mlp::new(&config.layer_sizes(2 * channels.len() + 1, 5), config.seed)?;
    let history = fit(
        &mut net,
        train.len(),
        config,
        |net, batch| net.gradient(rows(&inputs, batch).view(), rows(&targets, batch).view(), config.loss),
        |net| {
            validation
                .map(|v| {
                    let p = net.predict(v.inverse_inputs().view())?;
                    Ok(config.loss.evaluate(p.view(), v.inputs.slice(s![.., ..5])).0)
                })
                .transpose()
        },
    )?;
    Ok(TrainedInverse {
        net,
        channels: channels.to_vec(),
        history,
    })
}

/// Header describing a trained network for its checkpoint.
pub fn checkpoint_header(kind: &str, channels: &[ChannelId], normalization: &str, seed: u64) -> Header {
    let mut h = Header::default();
    h.set("kind", kind)
        .set("channels", channels.iter().map(|c| c.0.to_string()).collect::<Vec<_>>().join(","))
        .set("normalization", normalization)
        .set("seed", seed);
    h
}

/// Channel list stored in a checkpoint header.
pub fn checkpoint_channels(header: &Header) -> Result<Vec<ChannelId>> {
    let raw = header
        .get("channels")
        .ok_or_else(|| Error::SchemaMismatch("checkpoint lacks a channel list".into()))?;
    raw.split(',')
        .map(|c| {
            c.trim()
                .parse::<usize>()
                .map(ChannelId)
                .map_err(|_| Error::SchemaMismatch(format!("bad channel id '{c}'")))
        })
        .collect()
}
