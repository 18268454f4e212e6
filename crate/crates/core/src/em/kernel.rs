//! Spectral-domain (fixed horizontal wavenumber) solution of the 1D
//! three-layer boundary problem for TE and TM potentials.
//!
//! Layers are indexed 0 (upper half-space), 1 (host), 2 (lower half-space).
//! Vertical coordinates are measured upward from the tool midpoint, so the
//! host occupies `(-d_l, d_u)`.
//!
//! TE potential `f = H_z`: `f` and `f'` are continuous across interfaces.
//! TM potential `q = sigma E_z`: `q` and `q' / sigma` are continuous.

use num_complex::Complex64;

use super::{wavenumber_sq, EarthModel5};

pub const UPPER: usize = 0;
pub const HOST: usize = 1;
pub const LOWER: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Te,
    Tm,
}

/// Electrical description of the three-layer stack at one frequency.
#[derive(Debug, Clone, Copy)]
pub struct Stack {
    pub freq: f64,
    pub sigma: [f64; 3],
    pub k2: [Complex64; 3],
    pub z_top: f64,
    pub z_bot: f64,
}

impl Stack {
    pub fn new(model: &EarthModel5, freq: f64) -> Self {
        let rho = [model.rho_u, model.rho_h, model.rho_l];
        Self {
            freq,
            sigma: rho.map(|r| 1.0 / r),
            k2: rho.map(|r| wavenumber_sq(r, freq)),
            z_top: model.d_u,
            z_bot: -model.d_l,
        }
    }

    /// Layer containing height `z`; points exactly on an interface belong to the host.
    pub fn layer_of(&self, z: f64) -> usize {
        if z > self.z_top {
            UPPER
        } else if z < self.z_bot {
            LOWER
        } else {
            HOST
        }
    }

    pub fn vertical_wavenumbers(&self, lambda: f64) -> [Complex64; 3] {
        self.k2.map(|k2| vertical_wavenumber(lambda, k2))
    }

    /// Largest `|k|` in the stack.
    pub fn max_wavenumber(&self) -> f64 {
        self.k2.iter().map(|k2| k2.norm().sqrt()).fold(0.0, f64::max)
    }

    fn weights(&self, mode: Mode) -> [f64; 3] {
        match mode {
            Mode::Te => [1.0; 3],
            // Only ratios matter; normalise by the host to keep entries O(1).
            Mode::Tm => self.sigma.map(|s| s / self.sigma[HOST]),
        }
    }
}

/// `u = sqrt(lambda^2 - k^2)` on the branch `Re(u) >= 0`.
pub fn vertical_wavenumber(lambda: f64, k2: Complex64) -> Complex64 {
    let u = (Complex64::new(lambda * lambda, 0.0) - k2).sqrt();
    if u.re < 0.0 {
        -u
    } else {
        u
    }
}

/// Interface reflection coefficients seen from the host layer, plus the
/// vertical wavenumbers, at one horizontal wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavenumberKernel {
    pub lambda: f64,
    /// Vertical wavenumbers of `[upper, host, lower]`.
    pub u: [Complex64; 3],
    /// Upgoing host wave reflected at the upper interface.
    pub te_upper: Complex64,
    /// Downgoing host wave reflected at the lower interface.
    pub te_lower: Complex64,
    pub tm_upper: Complex64,
    pub tm_lower: Complex64,
}

/// Single-interface coefficient for a wave incident from medium `inc` onto `trans`.
pub fn fresnel(u_inc: Complex64, u_trans: Complex64, p_inc: f64, p_trans: f64) -> Complex64 {
    (u_inc * p_trans - u_trans * p_inc) / (u_inc * p_trans + u_trans * p_inc)
}

pub fn reflection_coefficients(model: &EarthModel5, lambda: f64, freq: f64) -> WavenumberKernel {
    let stack = Stack::new(model, freq);
    let u = stack.vertical_wavenumbers(lambda);
    let s = stack.sigma;
    WavenumberKernel {
        lambda,
        u,
        te_upper: fresnel(u[HOST], u[UPPER], 1.0, 1.0),
        te_lower: fresnel(u[HOST], u[LOWER], 1.0, 1.0),
        tm_upper: fresnel(u[HOST], u[UPPER], s[HOST], s[UPPER]),
        tm_lower: fresnel(u[HOST], u[LOWER], s[HOST], s[LOWER]),
    }
}

/// Whole-space wave pattern radiated by a source at `z_src` in layer `src`:
/// `A_up exp(-u (z - z_src))` above and `A_down exp(-u (z_src - z))` below.
#[derive(Debug, Clone, Copy)]
pub struct Emission {
    pub up: Complex64,
    pub down: Complex64,
}

impl Emission {
    /// Value and z-derivative of the incident wave at `z`.
    fn incident(&self, u: Complex64, z: f64, z_src: f64) -> (Complex64, Complex64) {
        if z > z_src {
            let e = self.up * (-u * (z - z_src)).exp();
            (e, -u * e)
        } else if z < z_src {
            let e = self.down * (-u * (z_src - z)).exp();
            (e, u * e)
        } else {
            // On the source plane: average of the two one-sided limits.
            let v = 0.5 * (self.up + self.down);
            let d = 0.5 * u * (self.down - self.up);
            (v, d)
        }
    }
}

/// Homogeneous-solution amplitudes `[b0, a1, b1, a2]` for one emission:
///
/// * upper: `b0 exp(-u0 (z - z_top))`
/// * host: `a1 exp(-u1 (z_top - z)) + b1 exp(-u1 (z - z_bot))`
/// * lower: `a2 exp(-u2 (z_bot - z))`
#[derive(Debug, Clone, Copy)]
pub struct Amplitudes(pub [Complex64; 4]);

/// Per-wavenumber 1D problem for a fixed source height.
pub struct Spectral<'a> {
    stack: &'a Stack,
    pub lambda: f64,
    pub u: [Complex64; 3],
    pub src_layer: usize,
    pub z_src: f64,
}

impl<'a> Spectral<'a> {
    pub fn new(stack: &'a Stack, lambda: f64, z_src: f64) -> Self {
        Self {
            stack,
            lambda,
            u: stack.vertical_wavenumbers(lambda),
            src_layer: stack.layer_of(z_src),
            z_src,
        }
    }

    /// Solves the four interface conditions for each emission in `emissions`.
    pub fn solve<const M: usize>(&self, mode: Mode, emissions: [Emission; M]) -> [Amplitudes; M] {
        let st = self.stack;
        let p = st.weights(mode);
        let u = self.u;
        let thickness = st.z_top - st.z_bot;
        let e = (-u[HOST] * thickness).exp();
        let g0 = u[UPPER] / p[UPPER];
        let g1 = u[HOST] / p[HOST];
        let g2 = u[LOWER] / p[LOWER];
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);

        // Rows: continuity of value and weighted derivative at top, then bottom.
        let matrix = [
            [one, -one, -e, zero],
            [-g0, -g1, g1 * e, zero],
            [zero, e, one, -one],
            [zero, g1 * e, -g1, -g2],
        ];

        let us = u[self.src_layer];
        let ps = p[self.src_layer];
        emissions.map(|em| {
            // (incident value, weighted derivative) of the source-layer wave
            // at each interface, with the side it is seen from.
            let inc = |z: f64| {
                let (v, d) = em.incident(us, z, self.z_src);
                (v, d / ps)
            };
            let mut rhs = [zero; 4];
            // Top interface: layer 0 (above) minus layer 1 (below).
            if self.src_layer == UPPER || self.src_layer == HOST {
                let (v, d) = inc(st.z_top);
                let sign = if self.src_layer == UPPER { -1.0 } else { 1.0 };
                rhs[0] += v * sign;
                rhs[1] += d * sign;
            }
            // Bottom interface: layer 1 (above) minus layer 2 (below).
            if self.src_layer == HOST || self.src_layer == LOWER {
                let (v, d) = inc(st.z_bot);
                let sign = if self.src_layer == HOST { -1.0 } else { 1.0 };
                rhs[2] += v * sign;
                rhs[3] += d * sign;
            }
            Amplitudes(solve4(matrix, rhs))
        })
    }

    /// Scattered (homogeneous) part of the potential and its z-derivative at
    /// `z` in layer `layer`.
    pub fn scattered(&self, amps: &Amplitudes, layer: usize, z: f64) -> (Complex64, Complex64) {
        let st = self.stack;
        let [b0, a1, b1, a2] = amps.0;
        let u = self.u;
        match layer {
            UPPER => {
                let v = b0 * (-u[UPPER] * (z - st.z_top)).exp();
                (v, -u[UPPER] * v)
            }
            HOST => {
                let down = a1 * (-u[HOST] * (st.z_top - z)).exp();
                let up = b1 * (-u[HOST] * (z - st.z_bot)).exp();
                (down + up, u[HOST] * (down - up))
            }
            _ => {
                let v = a2 * (-u[LOWER] * (st.z_bot - z)).exp();
                (v, u[LOWER] * v)
            }
        }
    }

    /// Total potential and derivative (incident wave included when the
    /// receiver shares the source layer).
    pub fn total(&self, em: &Emission, amps: &Amplitudes, layer: usize, z: f64) -> (Complex64, Complex64) {
        let (mut v, mut d) = self.scattered(amps, layer, z);
        if layer == self.src_layer {
            let (vi, di) = em.incident(self.u[layer], z, self.z_src);
            v += vi;
            d += di;
        }
        (v, d)
    }
}

/// Gaussian elimination with partial pivoting for a 4x4 complex system.
fn solve4(mut a: [[Complex64; 4]; 4], mut b: [Complex64; 4]) -> [Complex64; 4] {
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .expect("non-empty range");
        a.swap(col, pivot);
        b.swap(col, pivot);
        let diag = a[col][col];
        for row in col + 1..4 {
            let factor = a[row][col] / diag;
            if factor.norm() == 0.0 {
                continue;
            }
            for k in col..4 {
                let t = a[col][k];
                a[row][k] -= factor * t;
            }
            let t = b[col];
            b[row] -= factor * t;
        }
    }
    let mut x = [Complex64::new(0.0, 0.0); 4];
    for row in (0..4).rev() {
        let mut acc = b[row];
        for k in row + 1..4 {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    x
}
