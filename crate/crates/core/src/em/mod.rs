//! Semi-analytic magnetic-dipole responses of a three-layer isotropic 1D earth.
//!
//! The earth is a host layer bounded above and below by half-spaces. Fields
//! are computed in a formation frame (X, Y horizontal, Z up) by splitting each
//! dipole into TE/TM spectral potentials, solving the 1D boundary problem per
//! horizontal wavenumber, and transforming back with Sommerfeld integrals.
//! The direct wave inside the source layer is added in closed form.
//!
//! Tool frame: z along the tool axis, x in the vertical plane (pointing up at
//! dip = 90 deg), y horizontal-transverse. Dipoles rotate with the tool.

mod filter_coeffs;
pub mod hankel;
pub mod kernel;
mod layered;
mod whole_space;

use std::f64::consts::PI;
use std::ops::{Add, Index, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use hankel::{sommerfeld_integral, BesselOrder, Integrator, QuadratureSettings};
pub use kernel::{reflection_coefficients, WavenumberKernel};
pub use layered::{formation_coupling, layered_coupling, layered_coupling_between};
pub use whole_space::{whole_space_coupling, whole_space_coupling_spectral};

/// Vacuum permeability (H/m).
pub const MU0: f64 = 4.0e-7 * PI;

/// Squared wavenumber `k^2 = i * omega * mu0 * sigma` of a conductive medium
/// (time dependence `exp(-i omega t)`, displacement currents neglected).
pub fn wavenumber_sq(rho: f64, freq: f64) -> Complex64 {
    Complex64::new(0.0, 2.0 * PI * freq * MU0 / rho)
}

/// Skin depth `sqrt(2 / (omega mu0 sigma))` in metres.
pub fn skin_depth(rho: f64, freq: f64) -> f64 {
    (2.0 * rho / (2.0 * PI * freq * MU0)).sqrt()
}

/// Five-parameter three-layer earth snapshot around the tool midpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EarthModel5 {
    pub rho_h: f64,
    pub rho_u: f64,
    pub rho_l: f64,
    pub d_u: f64,
    pub d_l: f64,
}

impl EarthModel5 {
    pub fn new(rho_h: f64, rho_u: f64, rho_l: f64, d_u: f64, d_l: f64) -> Result<Self> {
        let model = Self {
            rho_h,
            rho_u,
            rho_l,
            d_u,
            d_l,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn homogeneous(rho: f64, d_u: f64, d_l: f64) -> Result<Self> {
        Self::new(rho, rho, rho, d_u, d_l)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, rho) in [
            ("rho_h", self.rho_h),
            ("rho_u", self.rho_u),
            ("rho_l", self.rho_l),
        ] {
            if !(rho.is_finite() && rho > 0.0) {
                return Err(Error::InvalidModel(format!("{name} = {rho} must be positive and finite")));
            }
        }
        for (name, d) in [("d_u", self.d_u), ("d_l", self.d_l)] {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::InvalidModel(format!("{name} = {d} must be positive and finite")));
            }
        }
        Ok(())
    }

    /// Parameters in the fixed order `[rho_h, rho_u, rho_l, d_u, d_l]`.
    pub fn to_array(&self) -> [f64; 5] {
        [self.rho_h, self.rho_u, self.rho_l, self.d_u, self.d_l]
    }

    pub fn from_array(p: [f64; 5]) -> Result<Self> {
        Self::new(p[0], p[1], p[2], p[3], p[4])
    }
}

/// Logging position: midpoint depth and tool-axis dip (degrees, 90 = horizontal).
/// Azimuthal rotation of the tool is fixed at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToolState {
    pub midpoint_tvd: f64,
    pub dip: f64,
}

impl ToolState {
    pub fn new(midpoint_tvd: f64, dip: f64) -> Result<Self> {
        if !(0.0..180.0).contains(&dip) {
            return Err(Error::Domain(format!("dip {dip} deg outside [0, 180)")));
        }
        Ok(Self { midpoint_tvd, dip })
    }

    pub fn horizontal() -> Self {
        Self {
            midpoint_tvd: 0.0,
            dip: 90.0,
        }
    }

    /// Tool axes expressed in the formation frame (X, Y horizontal, Z up):
    /// `[x_tool, y_tool, z_tool]`.
    pub fn axes(&self) -> [[f64; 3]; 3] {
        let alpha = (self.dip - 90.0).to_radians();
        let (s, c) = alpha.sin_cos();
        [[-s, 0.0, c], [0.0, -1.0, 0.0], [c, 0.0, s]]
    }

    /// Formation-frame position of a point at signed distance `along` on the tool axis.
    pub fn point(&self, along: f64) -> [f64; 3] {
        let z = self.axes()[2];
        [along * z[0], along * z[1], along * z[2]]
    }
}

/// Magnetic coupling tensor `h[i][j]`: receiver component `j` due to a unit
/// dipole transmitter oriented along `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingTensor {
    pub h: [[Complex64; 3]; 3],
}

/// Tensor component indices.
pub const X: usize = 0;
pub const Y: usize = 1;
pub const Z: usize = 2;

impl CouplingTensor {
    pub fn zeros() -> Self {
        Self {
            h: [[Complex64::new(0.0, 0.0); 3]; 3],
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                out.h[i][j] = self.h[j][i];
            }
        }
        out
    }

    /// Re-expresses the tensor in a rotated frame whose axes (given in the
    /// current frame) are the rows of `axes`.
    pub fn rotated(&self, axes: &[[f64; 3]; 3]) -> Self {
        let mut out = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Complex64::new(0.0, 0.0);
                for a in 0..3 {
                    for b in 0..3 {
                        acc += self.h[a][b] * (axes[i][a] * axes[j][b]);
                    }
                }
                out.h[i][j] = acc;
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.h
            .iter()
            .flatten()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `||self - other||_F / ||other||_F`.
    pub fn relative_error(&self, reference: &Self) -> f64 {
        (*self - *reference).frobenius_norm() / reference.frobenius_norm()
    }

    pub fn is_finite(&self) -> bool {
        self.h.iter().flatten().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

impl Index<(usize, usize)> for CouplingTensor {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.h[i][j]
    }
}

impl Add for CouplingTensor {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for i in 0..3 {
            for j in 0..3 {
                self.h[i][j] += rhs.h[i][j];
            }
        }
        self
    }
}

impl Sub for CouplingTensor {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..3 {
            for j in 0..3 {
                self.h[i][j] -= rhs.h[i][j];
            }
        }
        self
    }
}

impl Mul<f64> for CouplingTensor {
    type Output = Self;

    fn mul(mut self, rhs: f64) -> Self {
        for row in self.h.iter_mut() {
            for v in row.iter_mut() {
                *v *= rhs;
            }
        }
        self
    }
}

/// Where transmitter and receiver may sit relative to the host layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AntennaPlacement {
    /// Both antennas must lie strictly inside the host layer.
    #[default]
    HostOnly,
    /// Antennas may sit in any of the three layers (not exactly on an interface
    /// when the receiver and transmitter are in different layers).
    AnyLayer,
}

/// Forward-solver settings.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ForwardConfig {
    pub integrator: Integrator,
    pub placement: AntennaPlacement,
}

impl ForwardConfig {
    pub fn any_layer() -> Self {
        Self {
            placement: AntennaPlacement::AnyLayer,
            ..Self::default()
        }
    }

    pub fn with_integrator(mut self, integrator: Integrator) -> Self {
        self.integrator = integrator;
        self
    }
}
