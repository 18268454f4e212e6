use std::f64::consts::PI;

use num_complex::Complex64;

use super::hankel::{transform, BesselOrder, Integrator};
use super::kernel::{Emission, Mode, Spectral, Stack};
use super::{whole_space_coupling, AntennaPlacement, CouplingTensor, EarthModel5, ForwardConfig, ToolState};
use crate::error::{Error, Result};

/// How the source-layer direct wave enters the response.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum DirectTerm {
    /// Added in closed form; integrals carry only the scattered field.
    ClosedForm,
    /// Included in the Sommerfeld integrals.
    Spectral,
}

/// Below this horizontal separation the antennas are treated as coaxial.
const AXIAL_EPS: f64 = 1e-8;

/// Formation-frame tensor `H[a][b]` for a source at `src` and receiver at
/// `rcv` (formation coordinates, Z up, origin at the tool midpoint).
pub(crate) fn formation_tensor(
    stack: &Stack,
    src: [f64; 3],
    rcv: [f64; 3],
    integrator: Integrator,
    direct: DirectTerm,
) -> Result<CouplingTensor> {
    let dx = rcv[0] - src[0];
    let dy = rcv[1] - src[1];
    let rho = dx.hypot(dy);
    let axial = rho < AXIAL_EPS;
    let (cx, cy) = if axial { (1.0, 0.0) } else { (dx / rho, dy / rho) };

    let z_src = src[2];
    let z_rcv = rcv[2];
    let src_layer = stack.layer_of(z_src);
    let rcv_layer = stack.layer_of(z_rcv);
    let with_incident = direct == DirectTerm::Spectral || src_layer != rcv_layer;

    let kernel = |lambda: f64| -> [Complex64; 7] {
        let sp = Spectral::new(stack, lambda, z_src);
        let us = sp.u[src_layer];
        let half_inv_u = 0.5 / us;
        let vertical = Emission {
            up: half_inv_u,
            down: half_inv_u,
        };
        let horizontal = Emission {
            up: Complex64::new(-0.5, 0.0),
            down: Complex64::new(0.5, 0.0),
        };
        let [te_v, te_h] = sp.solve(Mode::Te, [vertical, horizontal]);
        let [tm_h] = sp.solve(Mode::Tm, [vertical]);
        let eval = |em: &Emission, amps| {
            if with_incident {
                sp.total(em, amps, rcv_layer, z_rcv)
            } else {
                sp.scattered(amps, rcv_layer, z_rcv)
            }
        };
        let (fz, dfz) = eval(&vertical, &te_v);
        let (ft, dft) = eval(&horizontal, &te_h);
        let (q, _) = eval(&vertical, &tm_h);
        [
            lambda * lambda * fz,
            lambda * ft,
            lambda * dfz,
            dft,
            dft / lambda,
            q,
            q / lambda,
        ]
    };

    use BesselOrder::{One, Zero};
    let orders = [Zero, One, One, Zero, One, Zero, One];
    let integrator = match integrator {
        Integrator::Adaptive(mut s) => {
            let scale = 20.0 * stack.max_wavenumber() + if axial { 0.0 } else { 2.0 / rho };
            s.extrapolation_start = s.extrapolation_start.max(scale);
            Integrator::Adaptive(s)
        }
        Integrator::DigitalFilter if axial => Integrator::Adaptive(super::hankel::QuadratureSettings {
            extrapolation_start: 20.0 * stack.max_wavenumber(),
            ..Default::default()
        }),
        other => other,
    };
    let r_eval = if axial { 0.0 } else { rho };
    let raw = transform(r_eval, orders, kernel, integrator)?;
    let s = raw.map(|v| v / (2.0 * PI));

    let a = s[0];
    let b = s[1];
    let c = s[2];
    let d = s[3];
    let (e, hq) = if axial { (0.5 * d, 0.5 * s[5]) } else { (s[4] / rho, s[6] / rho) };
    let g = s[5];

    let rhat = [cx, cy];
    let k2 = stack.k2[src_layer];
    // Second-derivative operator of a radial transform:
    // d_i d_j Phi = -rhat_i rhat_j S0 + (2 rhat_i rhat_j - delta_ij) S1 / rho.
    let hess = |s0: Complex64, s1_over_rho: Complex64, i: usize, j: usize| {
        let delta = if i == j { 1.0 } else { 0.0 };
        -s0 * (rhat[i] * rhat[j]) + s1_over_rho * (2.0 * rhat[i] * rhat[j] - delta)
    };
    let psi = |i: usize, j: usize| hess(g, hq, i, j);

    let mut out = CouplingTensor::zeros();
    // Horizontal source components.
    for m in 0..2 {
        let mut m_t = [0.0; 2];
        m_t[m] = 1.0;
        let proj = m_t[0] * rhat[0] + m_t[1] * rhat[1];
        out.h[m][2] = -b * proj;
        for i in 0..2 {
            let te = hess(d, e, i, m);
            let tm = match (i, m) {
                (0, 0) => -k2 * psi(1, 1),
                (0, 1) => k2 * psi(0, 1),
                (1, 0) => k2 * psi(0, 1),
                _ => -k2 * psi(0, 0),
            };
            out.h[m][i] = te + tm;
        }
    }
    // Vertical source.
    out.h[2][2] = a;
    out.h[2][0] = -c * rhat[0];
    out.h[2][1] = -c * rhat[1];

    if direct == DirectTerm::ClosedForm && src_layer == rcv_layer {
        let rho_layer = 1.0 / stack.sigma[src_layer];
        let offset = [rcv[0] - src[0], rcv[1] - src[1], rcv[2] - src[2]];
        out = out + whole_space_coupling(rho_layer, stack.freq, offset)?;
    }
    Ok(out)
}

fn check_placement(
    model: &EarthModel5,
    placement: AntennaPlacement,
    antenna: &'static str,
    z: f64,
) -> Result<()> {
    if placement == AntennaPlacement::HostOnly && !(z > -model.d_l && z < model.d_u) {
        return Err(Error::OutOfLayer {
            antenna,
            offset: z,
            lower: -model.d_l,
            upper: model.d_u,
        });
    }
    Ok(())
}

/// Tool-frame coupling between a transmitter and a receiver at signed
/// positions along the tool axis (relative to the tool midpoint).
pub fn layered_coupling_between(
    model: &EarthModel5,
    tool: &ToolState,
    tx_along: f64,
    rx_along: f64,
    freq: f64,
    config: &ForwardConfig,
) -> Result<CouplingTensor> {
    model.validate()?;
    if !(freq > 0.0 && freq.is_finite()) {
        return Err(Error::Domain(format!("frequency {freq} must be positive")));
    }
    if tx_along == rx_along {
        return Err(Error::DegenerateGeometry("transmitter and receiver coincide".into()));
    }
    let src = tool.point(tx_along);
    let rcv = tool.point(rx_along);
    check_placement(model, config.placement, "transmitter", src[2])?;
    check_placement(model, config.placement, "receiver", rcv[2])?;
    let stack = Stack::new(model, freq);
    let formation = formation_tensor(&stack, src, rcv, config.integrator, DirectTerm::ClosedForm)?;
    let tensor = formation.rotated(&tool.axes());
    if !tensor.is_finite() {
        return Err(Error::IntegrationFailure { residual: f64::NAN });
    }
    Ok(tensor)
}

/// Tool-frame coupling for a transmitter/receiver pair centred on the tool
/// midpoint, `spacing` being the signed Tx -> Rx offset along the tool axis.
pub fn layered_coupling(
    model: &EarthModel5,
    tool: &ToolState,
    spacing: f64,
    freq: f64,
    config: &ForwardConfig,
) -> Result<CouplingTensor> {
    layered_coupling_between(model, tool, -0.5 * spacing, 0.5 * spacing, freq, config)
}

/// Formation-frame coupling (X, Y horizontal, Z up, origin at the tool
/// midpoint) between arbitrary transmitter and receiver positions. Antennas
/// may sit in any layer.
pub fn formation_coupling(
    model: &EarthModel5,
    freq: f64,
    src: [f64; 3],
    rcv: [f64; 3],
    integrator: Integrator,
) -> Result<CouplingTensor> {
    model.validate()?;
    if !(freq > 0.0 && freq.is_finite()) {
        return Err(Error::Domain(format!("frequency {freq} must be positive")));
    }
    if src == rcv {
        return Err(Error::DegenerateGeometry("transmitter and receiver coincide".into()));
    }
    formation_tensor(&Stack::new(model, freq), src, rcv, integrator, DirectTerm::ClosedForm)
}
