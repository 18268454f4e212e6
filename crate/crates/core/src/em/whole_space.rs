use std::f64::consts::PI;

use num_complex::Complex64;

use super::layered::{formation_tensor, DirectTerm};
use super::{kernel::Stack, wavenumber_sq, CouplingTensor, EarthModel5, Integrator};
use crate::error::{Error, Result};

fn check_inputs(rho: f64, freq: f64, offset: [f64; 3]) -> Result<f64> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidModel(format!("resistivity {rho} must be positive")));
    }
    if !(freq >= 0.0 && freq.is_finite()) {
        return Err(Error::Domain(format!("frequency {freq} must be non-negative")));
    }
    let r = (offset[0] * offset[0] + offset[1] * offset[1] + offset[2] * offset[2]).sqrt();
    if !(r > 0.0) {
        return Err(Error::DegenerateGeometry("transmitter and receiver coincide".into()));
    }
    Ok(r)
}

/// Closed-form field of a unit magnetic dipole in a homogeneous conductive
/// whole space, `H = (k^2 + grad div) (m e^{ikR} / 4 pi R)`, expressed in
/// whatever frame `offset` (receiver minus transmitter) is given in.
pub fn whole_space_coupling(rho: f64, freq: f64, offset: [f64; 3]) -> Result<CouplingTensor> {
    let r = check_inputs(rho, freq, offset)?;
    let k2 = wavenumber_sq(rho, freq);
    let k = k2.sqrt();
    let ikr = Complex64::new(0.0, 1.0) * k * r;
    let g = ikr.exp() / (4.0 * PI * r * r * r);
    let diag = k2 * r * r + ikr - 1.0;
    let radial = 3.0 - 3.0 * ikr - k2 * r * r;
    let unit = offset.map(|c| c / r);
    let mut out = CouplingTensor::zeros();
    for i in 0..3 {
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            out.h[i][j] = g * (diag * delta + radial * (unit[i] * unit[j]));
        }
    }
    Ok(out)
}

/// The same whole-space tensor evaluated through its Sommerfeld-integral
/// representation (offset in the formation frame, Z vertical). Used to
/// validate the spectral machinery against the closed form. The offset needs
/// a vertical component: at equal heights the spectral integrand of the
/// direct wave does not decay.
pub fn whole_space_coupling_spectral(
    rho: f64,
    freq: f64,
    offset: [f64; 3],
    integrator: Integrator,
) -> Result<CouplingTensor> {
    check_inputs(rho, freq, offset)?;
    if freq == 0.0 {
        return Err(Error::Domain("spectral form needs a positive frequency".into()));
    }
    if offset[2] == 0.0 {
        return Err(Error::DegenerateGeometry("spectral form needs a vertical offset".into()));
    }
    let model = EarthModel5::homogeneous(rho, 1.0, 1.0)?;
    let stack = Stack::new(&model, freq);
    formation_tensor(&stack, [0.0; 3], offset, integrator, DirectTerm::Spectral)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn static_limit_along_axis() {
        let h = whole_space_coupling(1.0, 1e-9, [0.0, 0.0, 1.0]).unwrap();
        assert!((h.h[2][2].re - 1.0 / (2.0 * PI)).abs() < 1e-9);
        assert!((h.h[0][0].re + 1.0 / (4.0 * PI)).abs() < 1e-9);
        for (i, j) in [(0, 1), (0, 2), (1, 2), (1, 0), (2, 0), (2, 1)] {
            assert!(h.h[i][j].norm() < 1e-12);
        }
    }

    #[test]
    fn tensor_is_symmetric() {
        let h = whole_space_coupling(3.0, 5e5, [0.3, -0.7, 1.1]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(h.h[i][j], h.h[j][i]);
            }
        }
    }

    #[test]
    fn zero_separation_is_degenerate() {
        assert!(matches!(
            whole_space_coupling(1.0, 1e3, [0.0; 3]),
            Err(Error::DegenerateGeometry(_))
        ));
    }
}
