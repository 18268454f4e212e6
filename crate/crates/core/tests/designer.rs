use acqdesign::channels::{ChannelId, NUM_CHANNELS};
use acqdesign::dataset::{Dataset, SampleRecord, SamplingRanges};
use acqdesign::designer::*;
use acqdesign::em::{EarthModel5, ForwardConfig};
use acqdesign::workbench::crossplot_type1;
use acqdesign::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn validation(n: usize) -> Vec<SampleRecord> {
    Dataset::build(n, SamplingRanges::default(), 31, 1, &ForwardConfig::any_layer())
        .unwrap()
        .records
}

/// Two-pass R^2 written independently of the library version.
fn brute_r2(t: &[f64], p: &[f64]) -> f64 {
    let n = t.len() as f64;
    let sum_sq: f64 = t.iter().map(|v| v * v).sum();
    let mean = t.iter().sum::<f64>() / n;
    let ss_tot = sum_sq - n * mean * mean;
    let mut ss_res = 0.0;
    for i in 0..t.len() {
        ss_res += (t[i] - p[i]).powi(2);
    }
    1.0 - ss_res / ss_tot
}

#[test]
fn r2_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let t: Vec<f64> = (0..20).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let p: Vec<f64> = t.iter().map(|v| v + rng.gen_range(-1.0..1.0)).collect();
        let r = r2_statistic(&t, &p).unwrap();
        assert!((r - brute_r2(&t, &p)).abs() < 1e-12);
    }
    let t: Vec<f64> = (0..20).map(|i| i as f64).collect();
    assert_eq!(r2_statistic(&t, &t), Some(1.0));
    let mean = vec![9.5; 20];
    assert!(r2_statistic(&t, &mean).unwrap().abs() < 1e-15);
    assert_eq!(r2_statistic(&[2.0; 5], &[1.0; 5]), None);
}

#[test]
fn channel_score_rules() {
    assert_eq!(channel_score(Some(0.9), Some(0.5), false), Some(0.7));
    assert_eq!(channel_score(Some(0.9), Some(-3.0), true), Some(0.9));
    assert_eq!(channel_score(None, Some(0.4), false), Some(0.4));
    assert_eq!(channel_score(None, None, false), None);
}

/// Returns the true validation models.
struct Oracle<'a>(&'a [SampleRecord]);

impl Inverter for Oracle<'_> {
    fn fit_predict(&mut self, _: &[ChannelId], _: usize) -> Result<Vec<EarthModel5>> {
        Ok(self.0.iter().map(|r| r.model).collect())
    }
}

/// Truth with one parameter pinned to the middle of its range (normalized
/// value 1) until the system holds `heal_at` channels.
struct Crippled<'a> {
    truth: &'a [SampleRecord],
    parameter: usize,
    heal_at: usize,
}

impl Inverter for Crippled<'_> {
    fn fit_predict(&mut self, system: &[ChannelId], _: usize) -> Result<Vec<EarthModel5>> {
        let mid = [31.622776601683793, 31.622776601683793, 31.622776601683793, 0.31622776601683794, 0.31622776601683794];
        Ok(self
            .truth
            .iter()
            .map(|r| {
                let mut p = r.model.to_array();
                if system.len() < self.heal_at {
                    p[self.parameter] = mid[self.parameter];
                }
                EarthModel5::from_array(p).unwrap()
            })
            .collect())
    }
}

struct FailsAt(usize, Vec<EarthModel5>);

impl Inverter for FailsAt {
    fn fit_predict(&mut self, _: &[ChannelId], iteration: usize) -> Result<Vec<EarthModel5>> {
        if iteration == self.0 {
            return Err(Error::TrainingFailure {
                epoch: 3,
                loss: f64::NAN,
            });
        }
        Ok(self.1.clone())
    }
}

#[test]
fn oracle_inverter_stops_immediately() {
    let truth = validation(40);
    let out = design(ChannelId(0), &truth, &mut Oracle(&truth), &DesignConfig::default()).unwrap();
    assert!(matches!(out.stop, StopReason::Threshold));
    assert_eq!(out.system, vec![ChannelId(0)]);
    assert_eq!(out.history.iterations.len(), 1);
    let report = &out.history.iterations[0].report;
    assert!(report.entries.iter().all(|e| e.score.map_or(true, |s| (s - 1.0).abs() < 1e-12)));
}

#[test]
fn crippled_inverter_grows_the_system() {
    let truth = validation(40);
    let cfg = DesignConfig::default();
    let run = |heal_at| {
        let mut inv = Crippled {
            truth: &truth,
            parameter: 3,
            heal_at,
        };
        design(ChannelId(0), &truth, &mut inv, &cfg).unwrap()
    };
    let healed = run(3);
    assert!(matches!(healed.stop, StopReason::Threshold));
    assert_eq!(healed.system.len(), 3);

    let never = run(usize::MAX);
    let added = never.system.len() - 1;
    assert!(added >= 1 && added <= NUM_CHANNELS - 1);
    assert!(never.history.iterations.len() <= NUM_CHANNELS);
    let mut sorted = never.system.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), never.system.len(), "no channel is added twice");
    // Each addition is the worst candidate of its iteration.
    for it in &never.history.iterations {
        if let Some(c) = it.added {
            let (w, s) = it.worst.unwrap();
            assert_eq!(w, c);
            assert!(s < cfg.threshold);
            assert!(!it.report.entry(c).in_system);
        }
    }

    // Deterministic given the same inputs.
    let again = run(usize::MAX);
    assert_eq!(again.system, never.system);
    for (a, b) in again.history.iterations.iter().zip(&never.history.iterations) {
        assert_eq!(a.report, b.report);
    }
}

#[test]
fn failures_keep_the_partial_history() {
    let truth = validation(20);
    let wrong: Vec<EarthModel5> = truth.iter().map(|_| EarthModel5::homogeneous(10.0, 1.0, 1.0).unwrap()).collect();
    let out = design(ChannelId(4), &truth, &mut FailsAt(2, wrong), &DesignConfig::default()).unwrap();
    assert!(matches!(out.stop, StopReason::Failed(Error::TrainingFailure { .. })));
    assert_eq!(out.history.iterations.len(), 1);
    assert_eq!(out.system.len(), 2);
    assert!(design(ChannelId(45), &truth, &mut Oracle(&truth), &DesignConfig::default()).is_err());
}

#[test]
fn crossplot_scores_match_the_designer() {
    let truth = validation(30);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let predicted: Vec<EarthModel5> = truth
        .iter()
        .map(|r| {
            let p = r.model.to_array().map(|v| v * rng.gen_range(0.8..1.25));
            EarthModel5::from_array(p).unwrap()
        })
        .collect();
    let tools: Vec<_> = truth.iter().map(|r| r.tool).collect();
    let resim = resimulate(&predicted, &tools, &ForwardConfig::any_layer()).unwrap();
    let flags = wrap_flags(&truth, 10.0);
    let rep = report_from_resimulated(&truth, &resim, &[ChannelId(0)], &flags);
    for e in &rep.entries {
        let table = crossplot_type1(e.channel, &truth, &resim, e.wrap_flagged).unwrap();
        match (table.score, e.score) {
            (Some(a), Some(b)) => assert!((a - b).abs() < 1e-12),
            (a, b) => assert_eq!(a, b),
        }
    }
}
