//! End-to-end acceptance gates. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero when any criterion fails.
//!
//! The desk-scale design run (criterion 9) takes well over the test budget,
//! so by default it is checked from the artifacts of a recorded CLI run in
//! `results/desk`. Set `ACQDESIGN_DESK_DIR` to check another run directory.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use acqdesign::channels::*;
use acqdesign::dataset::*;
use acqdesign::designer::*;
use acqdesign::em::*;
use acqdesign::neural::*;
use acqdesign::workbench::*;
use acqdesign::Result;
use ndarray::{s, Array2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_model(rng: &mut ChaCha8Rng) -> EarthModel5 {
    SamplingRanges::default().draw(rng).0
}

/// 1. Homogeneous layered response against the closed-form whole space.
fn forward_kernel_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let started = Instant::now();
    let mut worst: f64 = 0.0;
    let mut evaluations = 0;
    for _ in 0..50 {
        let rho = 10f64.powf(rng.gen_range(0.0..3.0));
        let d = random_model(&mut rng);
        let model = EarthModel5::homogeneous(rho, d.d_u, d.d_l).unwrap();
        let tool = ToolState::new(0.0, rng.gen_range(82.0..96.0)).unwrap();
        for inst in &INSTRUMENTS {
            for &tx in inst.transmitters {
                for &rx in inst.receivers {
                    let got = layered_coupling_between(&model, &tool, tx, rx, inst.frequency, &ForwardConfig::any_layer())
                        .map_err(|e| e.to_string())?;
                    let want = whole_space_coupling(rho, inst.frequency, [0.0, 0.0, rx - tx]).map_err(|e| e.to_string())?;
                    worst = worst.max(got.relative_error(&want));
                    evaluations += 1;
                }
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    check(
        worst < 1e-6 && secs < 10.0,
        format!("{evaluations} pairs, max rel err {worst:.2e} (< 1e-6), {secs:.2} s (< 10 s)"),
    )
}

/// 2. Symmetrized-directional and geosignal channels vanish when the
/// formation is mirror-symmetric about a horizontal tool.
fn mirror_symmetry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let tool = ToolState::new(0.0, 90.0).unwrap();
    let (mut att, mut pha): (f64, f64) = (0.0, 0.0);
    for _ in 0..50 {
        let m = random_model(&mut rng);
        let model = EarthModel5::new(m.rho_h, m.rho_u, m.rho_u, m.d_u, m.d_u).unwrap();
        let all = simulate_all(&model, &tool, &ForwardConfig::any_layer()).map_err(|e| e.to_string())?;
        for spec in catalog() {
            if matches!(spec.component, ComponentKind::Geosignal | ComponentKind::SymmetrizedDirectional) {
                att = att.max(all[spec.id.0].attenuation.abs());
                pha = pha.max(all[spec.id.0].phase_difference.abs());
            }
        }
    }
    check(
        att <= 1e-6 && pha <= 1e-6,
        format!("50 models x 10 channels, max |att| {att:.2e} dB, max |phase| {pha:.2e} deg (<= 1e-6)"),
    )
}

/// 3. Digital filter against adaptive Gauss-Kronrod quadrature.
fn dual_integration() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let adaptive = ForwardConfig::any_layer().with_integrator(Integrator::adaptive());
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (model, tool) = SamplingRanges::default().draw(&mut rng);
        let inst = &INSTRUMENTS[rng.gen_range(0..INSTRUMENTS.len())];
        let tx = inst.transmitters[rng.gen_range(0..inst.transmitters.len())];
        let rx = inst.receivers[rng.gen_range(0..inst.receivers.len())];
        let a = layered_coupling_between(&model, &tool, tx, rx, inst.frequency, &ForwardConfig::any_layer())
            .map_err(|e| e.to_string())?;
        let b = layered_coupling_between(&model, &tool, tx, rx, inst.frequency, &adaptive).map_err(|e| e.to_string())?;
        worst = worst.max(a.relative_error(&b));
    }
    check(worst < 1e-6, format!("100 evaluations, max rel diff {worst:.2e} (< 1e-6)"))
}

/// 4. Attenuation and phase against an independent evaluation of the
/// definition, plus hand-computed wrapping cases.
fn attenuation_phase_formula() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let wrap = |deg: f64| {
        let w = (deg + 180.0).rem_euclid(360.0) - 180.0;
        if w == -180.0 {
            180.0
        } else {
            w
        }
    };
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let m1 = Complex64::from_polar(10f64.powf(rng.gen_range(-8.0..2.0)), rng.gen_range(-PI..PI));
        let m2 = Complex64::from_polar(10f64.powf(rng.gen_range(-8.0..2.0)), rng.gen_range(-PI..PI));
        let got = attenuation_phase(m1, m2).map_err(|e| e.to_string())?;
        let att = 20.0 * (m1.norm() / m2.norm()).log10();
        let pha = wrap((m1.arg() - m2.arg()) * 180.0 / PI);
        worst = worst.max((got.attenuation - att).abs().max((got.phase_difference - pha).abs()));
    }
    let one = Complex64::new(1.0, 0.0);
    let e = std::f64::consts::E;
    let cases = [
        (Complex64::new(e, 0.0), one, 20.0 * std::f64::consts::LOG10_E, 0.0),
        (Complex64::from_polar(1.0, 1.0), one, 0.0, 180.0 / PI),
        (Complex64::from_polar(1.0, 190f64.to_radians()), one, 0.0, -170.0),
        (Complex64::from_polar(1.0, 170f64.to_radians()), Complex64::from_polar(1.0, -20f64.to_radians()), 0.0, -170.0),
        (Complex64::new(-1.0, 0.0), one, 0.0, 180.0),
        (Complex64::new(-2.0, -0.0), one, 20.0 * 2f64.log10(), 180.0),
    ];
    for (m1, m2, att, pha) in cases {
        let got = attenuation_phase(m1, m2).map_err(|e| e.to_string())?;
        worst = worst.max((got.attenuation - att).abs().max((got.phase_difference - pha).abs()));
        if !(got.phase_difference > -180.0 && got.phase_difference <= 180.0) {
            return Err(format!("phase {} outside (-180, 180]", got.phase_difference));
        }
    }
    check(worst < 1e-9, format!("10000 random + 6 fixed cases, max abs deviation {worst:.2e}"))
}

/// 5. Normalization round trip for both variable categories.
fn normalization_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let scales = [
        VariableScale::new("rho", Category::LogLinear, 1.0, 1e3).unwrap(),
        VariableScale::new("distance", Category::LogLinear, 1e-2, 10.0).unwrap(),
        VariableScale::new("dip", Category::Linear, 82.0, 96.0).unwrap(),
        VariableScale::new("phase", Category::Linear, -180.0, 180.0).unwrap(),
    ];
    let mut worst: f64 = 0.0;
    for scale in &scales {
        for _ in 0..100_000 {
            let v = match scale.category {
                Category::LogLinear => (rng.gen_range(scale.min.ln()..=scale.max.ln())).exp().clamp(scale.min, scale.max),
                Category::Linear => rng.gen_range(scale.min..=scale.max),
            };
            let (y, clamped) = scale.normalize(v).map_err(|e| e.to_string())?;
            if clamped || !(0.5..=1.5).contains(&y) {
                return Err(format!("{}: {v} normalized to {y}", scale.name));
            }
            let back = scale.denormalize(y);
            let denom = match scale.category {
                Category::LogLinear => v.abs(),
                Category::Linear => v.abs().max(scale.max.abs().max(scale.min.abs())),
            };
            worst = worst.max((back - v).abs() / denom);
        }
    }
    check(
        worst <= 1e-12,
        format!("4 x 1e5 values (log-linear and linear), max rel err {worst:.2e} (<= 1e-12)"),
    )
}

fn gradient_worst(sizes: &[usize]) -> f64 {
    let net = Mlp::new(sizes, 42).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let x = Array2::from_shape_fn((5, sizes[0]), |_| rng.gen_range(0.5..1.5));
    let y = Array2::from_shape_fn((5, *sizes.last().unwrap()), |_| rng.gen_range(0.5..1.5));
    let (_, grads) = net.gradient(x.view(), y.view(), LossKind::Mse).unwrap();
    let loss = |n: &Mlp| LossKind::Mse.evaluate(n.predict(x.view()).unwrap().view(), y.view()).0;
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let l = rng.gen_range(0..net.weights.len());
        let mut plus = net.clone();
        let mut minus = net.clone();
        let analytic = if rng.gen_bool(0.8) {
            let (r, c) = (rng.gen_range(0..net.weights[l].nrows()), rng.gen_range(0..net.weights[l].ncols()));
            plus.weights[l][[r, c]] += h;
            minus.weights[l][[r, c]] -= h;
            grads.weights[l][[r, c]]
        } else {
            let i = rng.gen_range(0..net.biases[l].len());
            plus.biases[l][i] += h;
            minus.biases[l][i] -= h;
            grads.biases[l][i]
        };
        let numeric = (loss(&plus) - loss(&minus)) / (2.0 * h);
        worst = worst.max((numeric - analytic).abs() / numeric.abs().max(analytic.abs()).max(1e-3));
    }
    worst
}

/// 6. Backpropagation against central differences.
fn gradient_check() -> Outcome {
    let a = gradient_worst(&[6, 16, 16, 10]);
    let b = gradient_worst(&[15, 32, 32, 32, 5]);
    check(
        a <= 1e-4 && b <= 1e-4,
        format!("100 coords each, [6,16,16,10] {a:.2e}, [15,32,32,32,5] {b:.2e} (<= 1e-4)"),
    )
}

/// 7. R^2 against a textbook two-pass evaluation.
fn r2_brute_force() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let t: Vec<f64> = (0..20).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let p: Vec<f64> = t.iter().map(|v| v + rng.gen_range(-0.7..0.7)).collect();
    let n = t.len() as f64;
    let mean = t.iter().sum::<f64>() / n;
    let ss_tot: f64 = t.iter().map(|v| (v - mean) * (v - mean)).sum();
    let ss_res: f64 = t.iter().zip(&p).map(|(a, b)| (a - b) * (a - b)).sum();
    let brute = 1.0 - ss_res / ss_tot;
    let got = r2_statistic(&t, &p).ok_or("undefined R2")?;
    let perfect = r2_statistic(&t, &t).ok_or("undefined R2")?;
    let mean_pred = r2_statistic(&t, &vec![mean; t.len()]).ok_or("undefined R2")?;
    check(
        (got - brute).abs() <= 1e-12 && perfect == 1.0 && mean_pred == 0.0,
        format!("|diff| {:.2e}, perfect {perfect}, mean {mean_pred}", (got - brute).abs()),
    )
}

struct Oracle<'a>(&'a [SampleRecord]);

impl Inverter for Oracle<'_> {
    fn fit_predict(&mut self, _: &[ChannelId], _: usize) -> Result<Vec<EarthModel5>> {
        Ok(self.0.iter().map(|r| r.model).collect())
    }
}

/// Truth with one parameter zeroed in normalized units and projected back
/// into the box, i.e. pinned to its lower bound.
struct Crippled<'a>(&'a [SampleRecord], usize);

impl Inverter for Crippled<'_> {
    fn fit_predict(&mut self, _: &[ChannelId], _: usize) -> Result<Vec<EarthModel5>> {
        let lower = SamplingRanges::default().input_bounds(self.1).0;
        self.0
            .iter()
            .map(|r| {
                let mut p = r.model.to_array();
                p[self.1] = lower;
                EarthModel5::from_array(p)
            })
            .collect()
    }
}

/// 8. Greedy loop mechanics.
fn designer_mechanics() -> Outcome {
    let truth = Dataset::build(60, SamplingRanges::default(), 108, 1, &ForwardConfig::any_layer())
        .map_err(|e| e.to_string())?
        .records;
    let cfg = DesignConfig::default();
    let oracle = design(ChannelId(0), &truth, &mut Oracle(&truth), &cfg).map_err(|e| e.to_string())?;
    let scores_one = oracle.history.iterations[0]
        .report
        .entries
        .iter()
        .all(|e| e.score.map_or(true, |s| (s - 1.0).abs() < 1e-12));
    let oracle_ok = matches!(oracle.stop, StopReason::Threshold) && oracle.system.len() == 1 && scores_one;

    let mut crippled_ok = true;
    let mut sizes = Vec::new();
    for parameter in 0..5 {
        let out = design(ChannelId(0), &truth, &mut Crippled(&truth, parameter), &cfg).map_err(|e| e.to_string())?;
        let mut dedup = out.system.clone();
        dedup.sort();
        dedup.dedup();
        let iterations = out.history.iterations.len();
        crippled_ok &= out.system.len() >= 2 && dedup.len() == out.system.len() && iterations - 1 <= 44;
        sizes.push(out.system.len());
    }
    check(
        oracle_ok && crippled_ok,
        format!("oracle: size {} all scores 1 = {scores_one}; crippled system sizes per parameter {sizes:?}", oracle.system.len()),
    )
}

fn desk_dir() -> PathBuf {
    std::env::var_os("ACQDESIGN_DESK_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../results/desk"))
}

fn manifest(path: &Path) -> std::result::Result<BTreeMap<String, String>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(text
        .lines()
        .filter_map(|l| l.strip_prefix("# "))
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect())
}

fn field<'a>(m: &'a BTreeMap<String, String>, key: &str) -> std::result::Result<&'a str, String> {
    m.get(key).map(String::as_str).ok_or(format!("manifest has no {key}"))
}

fn score_of(entry: &str) -> std::result::Result<f64, String> {
    entry
        .rsplit(':')
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or(format!("bad score entry '{entry}'"))
}

/// 9. Recorded desk-scale run: seeded 30k dataset, threshold 0.8 from the
/// coaxial short LWD channel.
fn desk_run() -> Outcome {
    let dir = desk_dir();
    let gen = manifest(&dir.join("manifest-gen-data.txt"))?;
    let des = manifest(&dir.join("manifest-design.txt"))?;
    let samples: usize = field(&des, "samples_used")?.parse().map_err(|_| "bad samples_used")?;
    let threshold: f64 = field(&des, "threshold")?.parse().map_err(|_| "bad threshold")?;
    let initial = field(&des, "initial_channel")?;
    let stop = field(&des, "stop")?;
    // Every channel counts, including those already in the system.
    let worst = score_of(field(&des, "final_worst_overall")?)?;
    let worst_candidate = score_of(field(&des, "final_worst_candidate")?)?;
    let seconds: f64 = field(&gen, "elapsed_seconds")?.parse::<f64>().map_err(|_| "bad elapsed")?
        + field(&des, "elapsed_seconds")?.parse::<f64>().map_err(|_| "bad elapsed")?;
    let system = field(&des, "system")?;
    println!("      selected sequence: [{}]", system.replace(';', ", "));
    println!("      reference sequence: [0, 32, 5, 4, 36, 23, 2] (qualitative only)");
    let setup_ok = samples == 30_000 && threshold == 0.8 && initial == "0" && field(&gen, "data_seed").is_ok();
    check(
        setup_ok && stop == "threshold" && worst >= 0.8 && seconds < 7200.0,
        format!(
            "{samples} samples, threshold {threshold}, start {initial}: stop {stop}, worst candidate {worst_candidate:.4}, \
             worst channel overall {worst:.4} (>= 0.8), \
             wall clock {seconds:.0} s (< 7200 s)"
        ),
    )
}

/// 10. Baseline data-misfit regression averages the two branches; the
/// surrogate pipeline still reproduces the measurements.
fn non_uniqueness() -> Outcome {
    let train = two_branch_matrices(8000, 110);
    let test = two_branch_matrices(2000, 111);
    let channels = [ChannelId(0), ChannelId(1), ChannelId(2)];
    let cfg = TrainConfig {
        hidden: vec![64, 64],
        epochs: 200,
        seed: 10,
        ..TrainConfig::forward_default()
    };
    // Fraction of two-branch samples (|p0 - 1| >= 0.25) whose baseline
    // prediction sits within 20% of the branch mean 1.
    let collapse_of = |loss: LossKind| -> std::result::Result<(usize, usize), String> {
        let cfg = TrainConfig { loss, ..cfg.clone() };
        let baseline = train_inverse_data_misfit(&train, None, &channels, &cfg).map_err(|e| e.to_string())?;
        let pred = baseline.predict_normalized(test.inverse_inputs().view()).map_err(|e| e.to_string())?;
        let (mut branch, mut collapsed) = (0, 0);
        for i in 0..test.len() {
            if (test.inputs[[i, 0]] - 1.0).abs() >= 0.25 {
                branch += 1;
                collapsed += usize::from((pred[[i, 0]] - 1.0).abs() <= 0.2);
            }
        }
        Ok((collapsed, branch))
    };
    // The averaging argument is about the l2 misfit; the l1 figure is reported
    // for information.
    let (collapsed, branch) = collapse_of(LossKind::Mse)?;
    let (collapsed_l1, _) = collapse_of(LossKind::Mae)?;
    let collapse = collapsed as f64 / branch as f64;

    let forward = train_forward(&train, None, &channels, &cfg).map_err(|e| e.to_string())?;
    let inverse = train_inverse(&train, None, &forward, &TrainConfig { seed: 11, ..cfg.clone() }).map_err(|e| e.to_string())?;
    let mut p = inverse.predict_normalized(test.inverse_inputs().view()).map_err(|e| e.to_string())?;
    p.mapv_inplace(|v| v.clamp(0.5, 1.5));
    let mut worst_r2 = f64::INFINITY;
    for col in 0..6 {
        let truth: Vec<f64> = test.measurements.slice(s![.., col]).to_vec();
        let composed: Vec<f64> = p.rows().into_iter().map(|r| two_branch_forward(r.as_slice().unwrap())[col]).collect();
        worst_r2 = worst_r2.min(r2_statistic(&truth, &composed).ok_or("undefined R2")?);
    }
    check(
        collapse > 0.5 && worst_r2 >= 0.95,
        format!(
            "l2 baseline: {collapsed}/{branch} = {:.1}% two-branch samples within 20% of the branch mean (> 50%) \
             [l1 baseline: {collapsed_l1}/{branch}]; pipeline composed min R2 {worst_r2:.4} (>= 0.95)",
            100.0 * collapse
        ),
    )
}

fn load_desk_inverse() -> std::result::Result<(TrainedInverse, NormalizationSpec), String> {
    let dir = desk_dir();
    let (net, header) = Mlp::load(&dir.join("final_inverse.txt")).map_err(|e| e.to_string())?;
    let channels = checkpoint_channels(&header).map_err(|e| e.to_string())?;
    let norm = NormalizationSpec::load(&dir.join("normalization.txt")).map_err(|e| e.to_string())?;
    Ok((
        TrainedInverse {
            net,
            channels,
            history: LossHistory::default(),
        },
        norm,
    ))
}

fn normalized_params(norm: &NormalizationSpec, m: &EarthModel5) -> [f64; 5] {
    let a = m.to_array();
    std::array::from_fn(|i| norm.inputs[i].normalize(a[i]).map(|r| r.0).unwrap_or(f64::NAN))
}

/// 11. Trajectory inversion with the recorded desk-run network.
fn trajectory_inversion() -> Outcome {
    let (inverse, norm) = load_desk_inverse()?;
    let ranges = SamplingRanges::default();
    let simulation = ForwardConfig::any_layer();
    let invert = surrogate_inversion(&inverse, &norm);
    let system = inverse.channels.clone();

    // Validation error per parameter on fresh models from the sampling box.
    let holdout = sample_models(1000, &ranges, 1111);
    let mut mae = [0.0; 5];
    for (model, tool) in &holdout {
        let mut measurements = Vec::new();
        for id in &system {
            let m = simulate_channel(model, tool, &ChannelSpec::from_id(*id).unwrap(), &simulation).map_err(|e| e.to_string())?;
            measurements.extend([m.attenuation, m.phase_difference]);
        }
        let predicted = invert(&LocalSample {
            truth: model,
            tool,
            measurements: &measurements,
        })
        .map_err(|e| e.to_string())?;
        let (t, p) = (normalized_params(&norm, model), normalized_params(&norm, &predicted));
        for k in 0..5 {
            mae[k] += (t[k] - p[k]).abs() / holdout.len() as f64;
        }
    }

    let uniform = ModelProblem::uniform(1.0).map_err(|e| e.to_string())?;
    let preds = invert_trajectory(&uniform.curtain, &uniform.trajectory, &system, &ranges, &simulation, &invert)
        .map_err(|e| e.to_string())?;
    let mut spread = [0.0; 5];
    for k in 0..5 {
        let residual: Vec<f64> = preds
            .iter()
            .map(|p| normalized_params(&norm, &p.predicted)[k] - normalized_params(&norm, &p.truth)[k])
            .collect();
        let mean = residual.iter().sum::<f64>() / residual.len() as f64;
        spread[k] = (residual.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / residual.len() as f64).sqrt();
    }
    let uniform_ok = (0..5).all(|k| spread[k] <= 2.0 * mae[k]);

    let faulted = ModelProblem::faulted(1.0).map_err(|e| e.to_string())?;
    let preds = invert_trajectory(&faulted.curtain, &faulted.trajectory, &system, &ranges, &simulation, &invert)
        .map_err(|e| e.to_string())?;
    let rho_l: Vec<f64> = preds.iter().map(|p| p.predicted.rho_l.ln()).collect();
    let found = detect_transitions(&rho_l, FAULTS.len(), 5, 20);
    let expected: Vec<usize> = FAULTS.iter().map(|f| f.hd.round() as usize).collect();
    let faulted_ok = found.len() == expected.len() && found.iter().zip(&expected).all(|(a, b)| a.abs_diff(*b) <= 5);

    let fmt = |v: &[f64; 5]| v.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join("/");
    check(
        uniform_ok && faulted_ok,
        format!(
            "system {:?}; uniform spread {} vs 2x val MAE {} ({PARAM_NAMES:?}); faults at {expected:?}, found {found:?} (within 5)",
            system.iter().map(|c| c.0).collect::<Vec<_>>(),
            fmt(&spread),
            fmt(&mae.map(|m| 2.0 * m)),
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("forward kernel homogeneous oracle", forward_kernel_oracle),
        ("mirror symmetry of directional channels", mirror_symmetry),
        ("filter vs adaptive quadrature", dual_integration),
        ("attenuation/phase definition", attenuation_phase_formula),
        ("normalization round trip", normalization_round_trip),
        ("backprop gradient check", gradient_check),
        ("R2 brute-force equivalence", r2_brute_force),
        ("designer loop mechanics", designer_mechanics),
        ("desk-scale design run", desk_run),
        ("two-branch non-uniqueness", non_uniqueness),
        ("trajectory inversion", trajectory_inversion),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != i + 1) {
            continue;
        }
        let started = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail} [{secs:.1} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {detail} [{secs:.1} s]", i + 1);
            }
        }
    }
    println!("acceptance: {} criteria, {failed} failed", only.map_or(criteria.len(), |_| 1));
    if failed > 0 {
        std::process::exit(1);
    }
}
