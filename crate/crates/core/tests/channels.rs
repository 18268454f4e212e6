use acqdesign::channels::*;
use acqdesign::dataset::{sample_models, SamplingRanges};
use acqdesign::em::{EarthModel5, ForwardConfig, ToolState, MU0};
use acqdesign::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn id_of(instrument: usize, component: ComponentKind) -> usize {
    instrument * NUM_COMPONENTS + component.index()
}

/// Coaxial whole-space coupling written out by hand: 2 (1 - ikr) e^{ikr} / (4 pi r^3).
fn coaxial(rho: f64, freq: f64, r: f64) -> Complex64 {
    let k = (Complex64::i() * 2.0 * std::f64::consts::PI * freq * MU0 / rho).sqrt();
    let ikr = Complex64::i() * k * r;
    2.0 * (1.0 - ikr) * ikr.exp() / (4.0 * std::f64::consts::PI * r.powi(3))
}

#[test]
fn homogeneous_lwd_zz_matches_closed_form() {
    for rho in [1.0, 20.0, 500.0] {
        let model = EarthModel5::homogeneous(rho, 3.0, 3.0).unwrap();
        let tool = ToolState::new(0.0, 90.0).unwrap();
        let all = simulate_all(&model, &tool, &ForwardConfig::default()).unwrap();
        for (inst, spec) in INSTRUMENTS.iter().enumerate().take(3) {
            let tx = spec.transmitters[1].abs();
            let near = coaxial(rho, spec.frequency, tx - 0.1016);
            let far = coaxial(rho, spec.frequency, tx + 0.1016);
            let ratio = (near / far).ln();
            let att = 20.0 * std::f64::consts::LOG10_E * ratio.re;
            let pha = ratio.im.to_degrees();
            let got = all[id_of(inst, ComponentKind::Zz)];
            assert!((got.attenuation - att).abs() < 1e-6 * att.abs().max(1.0), "{rho} {inst}");
            assert!((got.phase_difference - pha).abs() < 1e-6 * pha.abs().max(1.0), "{rho} {inst}");
        }
    }
}

#[test]
fn directional_channels_vanish_in_homogeneous_media() {
    let model = EarthModel5::homogeneous(13.0, 2.0, 2.0).unwrap();
    for dip in [84.0, 90.0, 95.0] {
        let tool = ToolState::new(0.0, dip).unwrap();
        let all = simulate_all(&model, &tool, &ForwardConfig::any_layer()).unwrap();
        for inst in 0..NUM_INSTRUMENTS {
            for comp in [
                ComponentKind::Geosignal,
                ComponentKind::SymmetrizedDirectional,
                ComponentKind::AntisymmetrizedDirectional,
            ] {
                let m = all[id_of(inst, comp)];
                assert!(m.attenuation.abs() < 1e-8 && m.phase_difference.abs() < 1e-6, "{inst} {comp:?} {m:?}");
            }
        }
    }
}

#[test]
fn symmetrized_channels_vanish_for_mirror_symmetric_formations() {
    let model = EarthModel5::new(50.0, 3.0, 3.0, 1.2, 1.2).unwrap();
    let tool = ToolState::new(0.0, 90.0).unwrap();
    let all = simulate_all(&model, &tool, &ForwardConfig::any_layer()).unwrap();
    for inst in 0..NUM_INSTRUMENTS {
        for comp in [ComponentKind::Geosignal, ComponentKind::SymmetrizedDirectional] {
            let m = all[id_of(inst, comp)];
            assert!(m.attenuation.abs() < 1e-6 && m.phase_difference.abs() < 1e-5, "{inst} {comp:?} {m:?}");
        }
    }
    // An asymmetric formation does produce a directional response.
    let skewed = EarthModel5::new(50.0, 3.0, 3.0, 0.5, 4.0).unwrap();
    let all = simulate_all(&skewed, &tool, &ForwardConfig::any_layer()).unwrap();
    assert!(all[id_of(0, ComponentKind::Geosignal)].attenuation.abs() > 1e-3);
}

#[test]
fn catalog_is_consistent() {
    let cat = catalog();
    assert_eq!(cat.len(), NUM_CHANNELS);
    let mut names: Vec<String> = cat.iter().map(|c| c.name()).collect();
    for (i, c) in cat.iter().enumerate() {
        assert_eq!(c.id.0, i);
        assert_eq!(parse_channel(&c.name()).unwrap().id, c.id);
        assert_eq!(parse_channel(&i.to_string()).unwrap().id, c.id);
    }
    names.sort();
    names.dedup();
    assert_eq!(names.len(), NUM_CHANNELS);
    assert!(matches!(ChannelSpec::from_id(ChannelId(45)), Err(Error::Range(_))));
    assert!(parse_channel("nope/zz").is_err());
    assert_eq!(parse_channel("deep-azimuthal-short/yy").unwrap().id, ChannelId(29));
}

#[test]
fn degenerate_division_is_reported() {
    let h = acqdesign::em::CouplingTensor::zeros();
    assert!(matches!(
        raw_component(&h, ComponentKind::HarmonicAnisotropy),
        Err(Error::DivisionDegeneracy(_))
    ));
    assert!(matches!(
        attenuation_phase(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
        Err(Error::DivisionDegeneracy(_))
    ));
}

#[test]
fn deep_azimuthal_short_yy_straddles_the_branch_cut() {
    let ranges = SamplingRanges::default();
    let cfg = ForwardConfig::any_layer();
    let models = sample_models(400, &ranges, 11);
    let yy = ChannelSpec::from_id(ChannelId(29)).unwrap();
    let zz = ChannelSpec::from_id(ChannelId(0)).unwrap();
    let mut yy_phase = Vec::new();
    let mut zz_phase = Vec::new();
    for (m, t) in &models {
        yy_phase.push(simulate_channel(m, t, &yy, &cfg).unwrap().phase_difference);
        zz_phase.push(simulate_channel(m, t, &zz, &cfg).unwrap().phase_difference);
    }
    assert!(phase_wrap_flag(&yy_phase, DEFAULT_WRAP_BAND));
    assert!(!phase_wrap_flag(&zz_phase, DEFAULT_WRAP_BAND));
}

fn complex() -> impl Strategy<Value = Complex64> {
    (0.01f64..100.0, -3.1f64..3.1).prop_map(|(r, th)| Complex64::from_polar(r, th))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn attenuation_is_additive(a in complex(), b in complex(), c in complex()) {
        let ab = attenuation_phase(a, b).unwrap();
        let bc = attenuation_phase(b, c).unwrap();
        let ac = attenuation_phase(a, c).unwrap();
        prop_assert!((ab.attenuation + bc.attenuation - ac.attenuation).abs() < 1e-9);
        prop_assert!(wrap_degrees(ab.phase_difference + bc.phase_difference - ac.phase_difference).abs() < 1e-9);
    }

    #[test]
    fn phases_are_wrapped(a in complex(), b in complex(), turns in -5i32..5) {
        let m = attenuation_phase(a, b).unwrap();
        prop_assert!(m.phase_difference > -180.0 && m.phase_difference <= 180.0);
        let w = wrap_degrees(m.phase_difference + 360.0 * turns as f64);
        prop_assert!((w - m.phase_difference).abs() < 1e-9);
    }

    #[test]
    fn compensation_is_order_free(a in -40.0f64..40.0, b in -40.0f64..40.0, p in -179.0f64..179.0, q in -179.0f64..179.0) {
        let x = MeasurementPair { attenuation: a, phase_difference: p };
        let y = MeasurementPair { attenuation: b, phase_difference: q };
        let xy = compensate(&[x, y]);
        let yx = compensate(&[y, x]);
        prop_assert!((xy.attenuation - yx.attenuation).abs() < 1e-12);
        prop_assert!(wrap_degrees(xy.phase_difference - yx.phase_difference).abs() < 1e-9);
        let xx = compensate(&[x, x]);
        prop_assert!((xx.attenuation - a).abs() < 1e-12);
        prop_assert!(wrap_degrees(xx.phase_difference - p).abs() < 1e-9);
    }

    #[test]
    fn homogeneous_symmetric_pairs_agree(rho in 1.0f64..1000.0, dip in 82.0f64..96.0) {
        // In a homogeneous medium both transmitters of a compensated pair see the same thing.
        let model = EarthModel5::homogeneous(rho, 5.0, 5.0).unwrap();
        let tool = ToolState::new(0.0, dip).unwrap();
        let t = instrument_tensors(&model, &tool, &INSTRUMENTS[0], &ForwardConfig::default()).unwrap();
        for r in 0..2 {
            prop_assert!(t[0][r].relative_error(&t[1][r]) < 1e-10);
        }
    }
}
