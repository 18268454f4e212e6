//! The 45 measurement channels (instrument x component) and their
//! attenuation / phase-difference synthesis.
//!
//! Couplings are taken in a pair frame whose z axis points from the
//! transmitter towards its receivers; x stays in the vertical plane. For the
//! LWD pairs this makes the two symmetric transmitters see mirror-identical
//! geometries in a horizontal well, so directional components do not cancel
//! when the pair is compensated.

use std::fmt;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::em::{layered_coupling_between, CouplingTensor, EarthModel5, ForwardConfig, ToolState, X, Y, Z};
use crate::error::{Error, Result};

pub const NUM_INSTRUMENTS: usize = 5;
pub const NUM_COMPONENTS: usize = 9;
pub const NUM_CHANNELS: usize = NUM_INSTRUMENTS * NUM_COMPONENTS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InstrumentKind {
    ConventionalLwd,
    DeepAzimuthal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstrumentSpec {
    pub kind: InstrumentKind,
    pub spacing: &'static str,
    /// Transmitter positions along the tool axis (m).
    pub transmitters: &'static [f64],
    /// Receiver positions along the tool axis (m).
    pub receivers: &'static [f64],
    pub frequency: f64,
}

impl InstrumentSpec {
    pub fn name(&self) -> String {
        let kind = match self.kind {
            InstrumentKind::ConventionalLwd => "lwd",
            InstrumentKind::DeepAzimuthal => "deep-azimuthal",
        };
        format!("{kind}-{}", self.spacing)
    }
}

pub const INSTRUMENTS: [InstrumentSpec; NUM_INSTRUMENTS] = [
    InstrumentSpec {
        kind: InstrumentKind::ConventionalLwd,
        spacing: "short",
        transmitters: &[-0.4064, 0.4064],
        receivers: &[-0.1016, 0.1016],
        frequency: 2.0e6,
    },
    InstrumentSpec {
        kind: InstrumentKind::ConventionalLwd,
        spacing: "medium",
        transmitters: &[-0.8128, 0.8128],
        receivers: &[-0.1016, 0.1016],
        frequency: 5.0e5,
    },
    InstrumentSpec {
        kind: InstrumentKind::ConventionalLwd,
        spacing: "long",
        transmitters: &[-1.2192, 1.2192],
        receivers: &[-0.1016, 0.1016],
        frequency: 2.5e5,
    },
    InstrumentSpec {
        kind: InstrumentKind::DeepAzimuthal,
        spacing: "short",
        transmitters: &[-12.0],
        receivers: &[0.0],
        frequency: 2.4e4,
    },
    InstrumentSpec {
        kind: InstrumentKind::DeepAzimuthal,
        spacing: "long",
        transmitters: &[-12.0],
        receivers: &[13.0],
        frequency: 2.0e3,
    },
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentKind {
    Zz,
    Xx,
    Yy,
    XxYyZzSum,
    Geosignal,
    SymmetrizedDirectional,
    AntisymmetrizedDirectional,
    HarmonicResistivity,
    HarmonicAnisotropy,
}

impl ComponentKind {
    pub const ALL: [ComponentKind; NUM_COMPONENTS] = [
        ComponentKind::Zz,
        ComponentKind::Xx,
        ComponentKind::Yy,
        ComponentKind::XxYyZzSum,
        ComponentKind::Geosignal,
        ComponentKind::SymmetrizedDirectional,
        ComponentKind::AntisymmetrizedDirectional,
        ComponentKind::HarmonicResistivity,
        ComponentKind::HarmonicAnisotropy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ComponentKind::Zz => "zz",
            ComponentKind::Xx => "xx",
            ComponentKind::Yy => "yy",
            ComponentKind::XxYyZzSum => "xxyyzz+",
            ComponentKind::Geosignal => "geosignal",
            ComponentKind::SymmetrizedDirectional => "symmetrized-directional",
            ComponentKind::AntisymmetrizedDirectional => "antisymmetrized-directional",
            ComponentKind::HarmonicResistivity => "harmonic-resistivity",
            ComponentKind::HarmonicAnisotropy => "harmonic-anisotropy",
        }
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&c| c == self).expect("listed")
    }
}

/// Stable channel identifier `0..45`: `instrument * 9 + component`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChannelId(pub usize);

impl fmt::Display for ChannelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub id: ChannelId,
    pub instrument: usize,
    pub component: ComponentKind,
}

impl ChannelSpec {
    pub fn from_id(id: ChannelId) -> Result<Self> {
        if id.0 >= NUM_CHANNELS {
            return Err(Error::Range(format!("channel id {} outside 0..{NUM_CHANNELS}", id.0)));
        }
        Ok(Self {
            id,
            instrument: id.0 / NUM_COMPONENTS,
            component: ComponentKind::ALL[id.0 % NUM_COMPONENTS],
        })
    }

    pub fn instrument_spec(&self) -> &'static InstrumentSpec {
        &INSTRUMENTS[self.instrument]
    }

    pub fn name(&self) -> String {
        format!("{}/{}", self.instrument_spec().name(), self.component.name())
    }
}

/// All 45 channels: instruments in table order, components in table order.
pub fn catalog() -> Vec<ChannelSpec> {
    (0..NUM_CHANNELS)
        .map(|i| ChannelSpec::from_id(ChannelId(i)).expect("in range"))
        .collect()
}

/// Looks a channel up by id or by its `instrument/component` name.
pub fn parse_channel(text: &str) -> Result<ChannelSpec> {
    if let Ok(id) = text.trim().parse::<usize>() {
        return ChannelSpec::from_id(ChannelId(id));
    }
    catalog()
        .into_iter()
        .find(|c| c.name() == text.trim())
        .ok_or_else(|| Error::Range(format!("unknown channel '{text}'")))
}

pub fn write_catalog_csv(path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "id,instrument,spacing,frequency_hz,component")?;
    for c in catalog() {
        let inst = c.instrument_spec();
        let kind = match inst.kind {
            InstrumentKind::ConventionalLwd => "conventional-lwd",
            InstrumentKind::DeepAzimuthal => "deep-azimuthal",
        };
        writeln!(out, "{},{kind},{},{},{}", c.id, inst.spacing, inst.frequency, c.component.name())?;
    }
    out.flush()?;
    Ok(())
}

fn checked_div(num: Complex64, den: Complex64, term: &'static str) -> Result<Complex64> {
    if den.norm() == 0.0 || !den.norm().is_finite() {
        return Err(Error::DivisionDegeneracy(term));
    }
    Ok(num / den)
}

/// Complex measured component of one coupling tensor.
pub fn raw_component(h: &CouplingTensor, component: ComponentKind) -> Result<Complex64> {
    let (zz, xx, yy) = (h[(Z, Z)], h[(X, X)], h[(Y, Y)]);
    let (zx, xz) = (h[(Z, X)], h[(X, Z)]);
    let value = match component {
        ComponentKind::Zz => zz,
        ComponentKind::Xx => xx,
        ComponentKind::Yy => yy,
        ComponentKind::XxYyZzSum => xx + yy + zz,
        ComponentKind::Geosignal => checked_div(zz - zx, zz + zx, "H_zz + H_zx")?,
        ComponentKind::SymmetrizedDirectional => {
            checked_div(zz + zx, zz - zx, "H_zz - H_zx")? * checked_div(zz - xz, zz + xz, "H_zz + H_xz")?
        }
        ComponentKind::AntisymmetrizedDirectional => {
            checked_div(zz + zx, zz - zx, "H_zz - H_zx")? * checked_div(zz + xz, zz - xz, "H_zz - H_xz")?
        }
        ComponentKind::HarmonicResistivity => checked_div(xx + yy, 2.0 * zz, "2 H_zz")?,
        ComponentKind::HarmonicAnisotropy => checked_div(xx, yy, "H_yy")?,
    };
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::DivisionDegeneracy("non-finite component"));
    }
    Ok(value)
}

/// Attenuation (dB) and phase difference (degrees) of a receiver pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementPair {
    pub attenuation: f64,
    pub phase_difference: f64,
}

/// Maps an angle in degrees onto `(-180, 180]`.
pub fn wrap_degrees(angle: f64) -> f64 {
    let mut a = angle % 360.0;
    if a > 180.0 {
        a -= 360.0;
    } else if a <= -180.0 {
        a += 360.0;
    }
    a
}

/// `ln(m1 / m2)` split into `20 log10(e) ln|m1/m2|` dB and
/// `(180 / pi) (ph(m1) - ph(m2))` degrees, the latter wrapped to `(-180, 180]`.
pub fn attenuation_phase(m1: Complex64, m2: Complex64) -> Result<MeasurementPair> {
    if m1.norm() == 0.0 {
        return Err(Error::DivisionDegeneracy("first receiver signal"));
    }
    if m2.norm() == 0.0 {
        return Err(Error::DivisionDegeneracy("second receiver signal"));
    }
    let log_ratio = (m1 / m2).ln();
    let attenuation = 20.0 * std::f64::consts::LOG10_E * log_ratio.re;
    let phase_difference = wrap_degrees(log_ratio.im.to_degrees());
    Ok(MeasurementPair {
        attenuation,
        phase_difference,
    })
}

/// Compensation: arithmetic mean of attenuations, circular mean of phases.
pub fn compensate(pairs: &[MeasurementPair]) -> MeasurementPair {
    let n = pairs.len() as f64;
    let attenuation = pairs.iter().map(|p| p.attenuation).sum::<f64>() / n;
    let (s, c) = pairs.iter().fold((0.0, 0.0), |(s, c), p| {
        let (ps, pc) = p.phase_difference.to_radians().sin_cos();
        (s + ps, c + pc)
    });
    MeasurementPair {
        attenuation,
        phase_difference: wrap_degrees(f64::atan2(s, c).to_degrees()),
    }
}

/// Tool-frame tensor re-expressed in the pair frame (z from transmitter to receivers).
fn pair_frame(tensor: CouplingTensor, tx: f64, receivers: &[f64]) -> CouplingTensor {
    let centre = receivers.iter().sum::<f64>() / receivers.len() as f64;
    if centre >= tx {
        tensor
    } else {
        // Half-turn about the tool x axis: y -> -y, z -> -z.
        tensor.rotated(&[[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]])
    }
}

/// Pair-frame tensors per transmitter and receiver: `[tx][rx]`.
pub fn instrument_tensors(
    model: &EarthModel5,
    tool: &ToolState,
    instrument: &InstrumentSpec,
    config: &ForwardConfig,
) -> Result<Vec<Vec<CouplingTensor>>> {
    instrument
        .transmitters
        .iter()
        .map(|&tx| {
            // Near receiver first.
            let mut receivers = instrument.receivers.to_vec();
            receivers.sort_by(|a, b| (a - tx).abs().total_cmp(&(b - tx).abs()));
            receivers
                .iter()
                .map(|&rx| {
                    let t = layered_coupling_between(model, tool, tx, rx, instrument.frequency, config)?;
                    Ok(pair_frame(t, tx, instrument.receivers))
                })
                .collect()
        })
        .collect()
}

/// Measurement of one component from precomputed instrument tensors.
pub fn measure_component(
    instrument: &InstrumentSpec,
    tensors: &[Vec<CouplingTensor>],
    component: ComponentKind,
) -> Result<MeasurementPair> {
    match instrument.kind {
        InstrumentKind::ConventionalLwd => {
            let per_tx = tensors
                .iter()
                .map(|rx| {
                    let near = raw_component(&rx[0], component)?;
                    let far = raw_component(&rx[1], component)?;
                    attenuation_phase(near, far)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(compensate(&per_tx))
        }
        InstrumentKind::DeepAzimuthal => {
            let m = raw_component(&tensors[0][0], component)?;
            attenuation_phase(m, Complex64::new(1.0, 0.0))
        }
    }
}

/// All nine components of one instrument.
pub fn simulate_instrument(
    model: &EarthModel5,
    tool: &ToolState,
    instrument: &InstrumentSpec,
    config: &ForwardConfig,
) -> Result<[MeasurementPair; NUM_COMPONENTS]> {
    let tensors = instrument_tensors(model, tool, instrument, config)?;
    let mut out = [MeasurementPair {
        attenuation: 0.0,
        phase_difference: 0.0,
    }; NUM_COMPONENTS];
    for (slot, component) in out.iter_mut().zip(ComponentKind::ALL) {
        *slot = measure_component(instrument, &tensors, component)?;
    }
    Ok(out)
}

/// All 45 channels, in catalog order.
pub fn simulate_all(model: &EarthModel5, tool: &ToolState, config: &ForwardConfig) -> Result<Vec<MeasurementPair>> {
    let mut out = Vec::with_capacity(NUM_CHANNELS);
    for instrument in &INSTRUMENTS {
        out.extend(simulate_instrument(model, tool, instrument, config)?);
    }
    Ok(out)
}

pub fn simulate_channel(
    model: &EarthModel5,
    tool: &ToolState,
    channel: &ChannelSpec,
    config: &ForwardConfig,
) -> Result<MeasurementPair> {
    let instrument = channel.instrument_spec();
    let tensors = instrument_tensors(model, tool, instrument, config)?;
    measure_component(instrument, &tensors, channel.component)
}

pub const DEFAULT_WRAP_BAND: f64 = 10.0;

/// True when phase samples sit within `band` degrees of both +180 and -180,
/// i.e. the channel straddles the branch cut.
pub fn phase_wrap_flag(samples: &[f64], band: f64) -> bool {
    if samples.len() < 2 {
        return false;
    }
    let near_plus = samples.iter().any(|&p| p >= 180.0 - band);
    let near_minus = samples.iter().any(|&p| p <= -180.0 + band);
    near_plus && near_minus
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn catalog_layout() {
        let cat = catalog();
        assert_eq!(cat.len(), 45);
        assert_eq!(cat[0].instrument, 0);
        assert_eq!(cat[0].component, ComponentKind::Zz);
        assert_eq!(cat[0].name(), "lwd-short/zz");
        let mut seen = std::collections::HashSet::new();
        for ch in &cat {
            assert!(seen.insert((ch.instrument, ch.component)));
        }
        assert_eq!(cat[3 * 9 + 5].name(), "deep-azimuthal-short/symmetrized-directional");
        assert!(ChannelSpec::from_id(ChannelId(45)).is_err());
    }

    #[test]
    fn channel_lookup_by_name_and_id() {
        assert_eq!(parse_channel("0").unwrap().id, ChannelId(0));
        assert_eq!(parse_channel("deep-azimuthal-long/zz").unwrap().id, ChannelId(36));
        assert!(parse_channel("nope").is_err());
    }

    #[test]
    fn attenuation_phase_definition() {
        let m2 = c(0.3, -1.7);
        let same = attenuation_phase(m2, m2).unwrap();
        assert_eq!((same.attenuation, same.phase_difference), (0.0, 0.0));
        let decade = attenuation_phase(m2 * 10.0, m2).unwrap();
        assert_relative_eq!(decade.attenuation, 20.0, epsilon = 1e-12);
        assert!(decade.phase_difference.abs() < 1e-12);
        let quad = attenuation_phase(m2 * c(0.0, 1.0), m2).unwrap();
        assert!(quad.attenuation.abs() < 1e-12);
        assert_relative_eq!(quad.phase_difference, 90.0, epsilon = 1e-12);
        // Explicit factors: 20 log10(e) per neper, 180/pi per radian.
        let m1 = c(2.0, 0.0) * c(0.0, 0.5).exp();
        let p = attenuation_phase(m1, c(1.0, 0.0)).unwrap();
        assert_relative_eq!(p.attenuation, 2f64.ln() * 20.0 * std::f64::consts::E.log10(), epsilon = 1e-12);
        assert_relative_eq!(p.phase_difference, 0.5 * 180.0 / std::f64::consts::PI, epsilon = 1e-12);
    }

    #[test]
    fn phase_is_wrapped_into_half_open_interval() {
        let p = attenuation_phase(c(-1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(p.phase_difference, 180.0);
        let p = attenuation_phase(c(-1.0, -0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(p.phase_difference, 180.0);
        let p = attenuation_phase(c(0.0, 1.0), c(0.0, -1.0)).unwrap();
        assert_eq!(p.phase_difference, 180.0);
        assert_eq!(wrap_degrees(-180.0), 180.0);
        assert_eq!(wrap_degrees(540.0), 180.0);
        assert_relative_eq!(wrap_degrees(-190.0), 170.0);
    }

    #[test]
    fn zero_signal_is_degenerate() {
        assert!(matches!(attenuation_phase(c(0.0, 0.0), c(1.0, 0.0)), Err(Error::DivisionDegeneracy(_))));
        assert!(matches!(attenuation_phase(c(1.0, 0.0), c(0.0, 0.0)), Err(Error::DivisionDegeneracy(_))));
    }

    #[test]
    fn component_formulas() {
        let mut t = CouplingTensor::zeros();
        t.h[X][X] = c(1.0, 0.5);
        t.h[Y][Y] = c(2.0, -0.5);
        t.h[Z][Z] = c(-3.0, 1.0);
        t.h[Z][X] = c(0.2, 0.1);
        t.h[X][Z] = c(-0.1, 0.3);
        let sum = raw_component(&t, ComponentKind::XxYyZzSum).unwrap();
        let parts: Complex64 = [ComponentKind::Xx, ComponentKind::Yy, ComponentKind::Zz]
            .iter()
            .map(|&k| raw_component(&t, k).unwrap())
            .sum();
        assert_eq!(sum, parts);
        let (zz, zx, xz) = (t.h[Z][Z], t.h[Z][X], t.h[X][Z]);
        let geo = raw_component(&t, ComponentKind::Geosignal).unwrap();
        assert!((geo - (zz - zx) / (zz + zx)).norm() < 1e-15);
        let sym = raw_component(&t, ComponentKind::SymmetrizedDirectional).unwrap();
        assert!((sym - (zz + zx) / (zz - zx) * (zz - xz) / (zz + xz)).norm() < 1e-15);
        let anti = raw_component(&t, ComponentKind::AntisymmetrizedDirectional).unwrap();
        assert!((anti - (zz + zx) / (zz - zx) * (zz + xz) / (zz - xz)).norm() < 1e-15);
        let hr = raw_component(&t, ComponentKind::HarmonicResistivity).unwrap();
        assert!((hr - (t.h[X][X] + t.h[Y][Y]) / (2.0 * zz)).norm() < 1e-15);
        let ha = raw_component(&t, ComponentKind::HarmonicAnisotropy).unwrap();
        assert!((ha - t.h[X][X] / t.h[Y][Y]).norm() < 1e-15);
    }

    #[test]
    fn vanishing_denominator_names_the_term() {
        let mut t = CouplingTensor::zeros();
        t.h[Z][Z] = c(1.0, 0.0);
        t.h[Z][X] = c(-1.0, 0.0);
        match raw_component(&t, ComponentKind::Geosignal) {
            Err(Error::DivisionDegeneracy(term)) => assert_eq!(term, "H_zz + H_zx"),
            other => panic!("{other:?}"),
        }
        assert!(raw_component(&CouplingTensor::zeros(), ComponentKind::HarmonicAnisotropy).is_err());
    }

    #[test]
    fn circular_mean_handles_the_branch_cut() {
        let a = MeasurementPair {
            attenuation: 1.0,
            phase_difference: 179.0,
        };
        let b = MeasurementPair {
            attenuation: 3.0,
            phase_difference: -179.0,
        };
        let m = compensate(&[a, b]);
        assert_relative_eq!(m.attenuation, 2.0);
        assert_relative_eq!(m.phase_difference.abs(), 180.0, epsilon = 1e-9);
    }

    #[test]
    fn wrap_flag() {
        assert!(!phase_wrap_flag(&[-30.0, 0.0, 12.0, 30.0], DEFAULT_WRAP_BAND));
        assert!(phase_wrap_flag(&[179.0, -179.0], DEFAULT_WRAP_BAND));
        assert!(!phase_wrap_flag(&[179.0, 175.0], DEFAULT_WRAP_BAND));
        assert!(!phase_wrap_flag(&[179.0], DEFAULT_WRAP_BAND));
        assert!(phase_wrap_flag(&[165.0, -165.0, 0.0], 20.0));
    }

    #[test]
    fn homogeneous_geometry_gives_trivial_ratio_components() {
        let model = EarthModel5::homogeneous(1.0, 5.0, 5.0).unwrap();
        let tool = ToolState::horizontal();
        let cfg = ForwardConfig::default();
        let ch = parse_channel("lwd-short/zz").unwrap();
        let inst = ch.instrument_spec();
        let tensors = instrument_tensors(&model, &tool, inst, &cfg).unwrap();
        let single: Vec<MeasurementPair> = tensors
            .iter()
            .map(|rx| {
                attenuation_phase(
                    raw_component(&rx[0], ComponentKind::Zz).unwrap(),
                    raw_component(&rx[1], ComponentKind::Zz).unwrap(),
                )
                .unwrap()
            })
            .collect();
        let compensated = simulate_channel(&model, &tool, &ch, &cfg).unwrap();
        assert_relative_eq!(compensated.attenuation, single[0].attenuation, max_relative = 1e-10);
        assert_relative_eq!(compensated.phase_difference, single[0].phase_difference, max_relative = 1e-10);

        for name in ["deep-azimuthal-short/geosignal", "deep-azimuthal-long/symmetrized-directional"] {
            let p = simulate_channel(&model, &tool, &parse_channel(name).unwrap(), &cfg).unwrap();
            assert!(p.attenuation.abs() < 1e-9 && p.phase_difference.abs() < 1e-9, "{name}: {p:?}");
        }
        let ha = simulate_channel(&model, &tool, &parse_channel("lwd-long/harmonic-anisotropy").unwrap(), &cfg).unwrap();
        assert!(ha.attenuation.abs() < 1e-9);
    }
}
