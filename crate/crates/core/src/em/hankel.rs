//! Sommerfeld (Hankel-type) integrals `int_0^inf f(l) J_n(l r) l dl`.
//!
//! Two independent evaluation paths: a 201-point digital filter (fast, used
//! for data generation) and adaptive Gauss-Kronrod quadrature over
//! half-period intervals with Wynn-epsilon extrapolation of the partial sums
//! (slow, used as a cross-check).

use std::f64::consts::PI;

use num_complex::Complex64;

use super::filter_coeffs::{BASE, J0_WEIGHTS, J1_WEIGHTS};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselOrder {
    Zero,
    One,
}

impl BesselOrder {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            BesselOrder::Zero => libm::j0(x),
            BesselOrder::One => libm::j1(x),
        }
    }

    fn filter_weights(self) -> &'static [f64; 201] {
        match self {
            BesselOrder::Zero => &J0_WEIGHTS,
            BesselOrder::One => &J1_WEIGHTS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    /// Upper bound on the number of half-period intervals.
    pub max_intervals: usize,
    /// Partial sums are only extrapolated beyond this wavenumber; set it past
    /// any non-asymptotic structure of the kernel.
    pub extrapolation_start: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            max_intervals: 200_000,
            extrapolation_start: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Integrator {
    #[default]
    DigitalFilter,
    Adaptive(QuadratureSettings),
}

impl Integrator {
    pub fn adaptive() -> Self {
        Integrator::Adaptive(QuadratureSettings::default())
    }
}

/// `int_0^inf f(l) J_order(l r) l dl`.
pub fn sommerfeld_integral<F>(
    kernel: F,
    order: BesselOrder,
    radial_distance: f64,
    integrator: Integrator,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if !(radial_distance >= 0.0) {
        return Err(Error::DegenerateGeometry(format!(
            "radial distance {radial_distance} must be non-negative"
        )));
    }
    let [v] = transform(radial_distance, [order], |l| [kernel(l)], integrator)?;
    Ok(v)
}

/// Vector form of [`sommerfeld_integral`]: one kernel evaluation per node
/// feeds `N` integrals with individual Bessel orders.
pub(crate) fn transform<const N: usize, F>(
    r: f64,
    orders: [BesselOrder; N],
    kernel: F,
    integrator: Integrator,
) -> Result<[Complex64; N]>
where
    F: Fn(f64) -> [Complex64; N],
{
    match integrator {
        Integrator::DigitalFilter if r > 0.0 => Ok(filter(r, orders, kernel)),
        Integrator::DigitalFilter => adaptive(r, orders, kernel, QuadratureSettings::default()),
        Integrator::Adaptive(settings) => adaptive(r, orders, kernel, settings),
    }
}

fn filter<const N: usize, F>(r: f64, orders: [BesselOrder; N], kernel: F) -> [Complex64; N]
where
    F: Fn(f64) -> [Complex64; N],
{
    let mut acc = [Complex64::new(0.0, 0.0); N];
    for (i, &b) in BASE.iter().enumerate() {
        let lambda = b / r;
        let values = kernel(lambda);
        for k in 0..N {
            acc[k] += values[k] * (lambda * orders[k].filter_weights()[i]);
        }
    }
    for v in acc.iter_mut() {
        *v /= r;
    }
    acc
}

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

type Vector<const N: usize> = [Complex64; N];

fn zero<const N: usize>() -> Vector<N> {
    [Complex64::new(0.0, 0.0); N]
}

/// One GK15 panel: returns (Kronrod estimate, |Kronrod - Gauss| per component).
fn gk15<const N: usize>(a: f64, b: f64, f: &impl Fn(f64) -> Vector<N>) -> (Vector<N>, [f64; N]) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kron = zero::<N>();
    let mut gauss = zero::<N>();
    for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let nodes: &[f64] = if x == 0.0 { &[0.0] } else { &[-1.0, 1.0] };
        for &sign in nodes {
            let v = f(centre + sign * half * x);
            for k in 0..N {
                kron[k] += v[k] * wk;
                if i % 2 == 1 {
                    gauss[k] += v[k] * WG[i / 2];
                }
            }
        }
    }
    let mut err = [0.0; N];
    for k in 0..N {
        kron[k] *= half;
        gauss[k] *= half;
        err[k] = (kron[k] - gauss[k]).norm();
    }
    (kron, err)
}

/// Adaptive bisection of one panel until every component meets
/// `err <= tol * (|value| + floor)`.
fn panel<const N: usize>(
    a: f64,
    b: f64,
    f: &impl Fn(f64) -> Vector<N>,
    tol: f64,
    floor: &[f64; N],
    depth: u32,
) -> Vector<N> {
    let (value, err) = gk15(a, b, f);
    let ok = (0..N).all(|k| err[k] <= tol * (value[k].norm() + floor[k]));
    if ok || depth >= 40 {
        return value;
    }
    let mid = 0.5 * (a + b);
    let left = panel(a, mid, f, tol, floor, depth + 1);
    let right = panel(mid, b, f, tol, floor, depth + 1);
    let mut out = zero::<N>();
    for k in 0..N {
        out[k] = left[k] + right[k];
    }
    out
}

/// Wynn epsilon extrapolation of a scalar sequence of partial sums.
fn wynn_epsilon(sums: &[Complex64]) -> Complex64 {
    let n = sums.len();
    if n < 3 {
        return *sums.last().expect("non-empty");
    }
    // Columns eps_{-1} = 0, eps_0 = sums; keep the even columns.
    let mut prev = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut cur: Vec<Complex64> = sums.to_vec();
    let mut best = sums[n - 1];
    let mut col = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            if diff.norm() == 0.0 || !diff.re.is_finite() || !diff.im.is_finite() {
                return best;
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        col += 1;
        prev = cur;
        cur = next;
        if col % 2 == 0 {
            best = *cur.last().expect("non-empty");
        }
    }
    best
}

fn adaptive<const N: usize, F>(
    r: f64,
    orders: [BesselOrder; N],
    kernel: F,
    settings: QuadratureSettings,
) -> Result<Vector<N>>
where
    F: Fn(f64) -> Vector<N>,
{
    let integrand = |l: f64| {
        let mut v = kernel(l);
        for k in 0..N {
            v[k] *= l * orders[k].eval(l * r);
        }
        v
    };
    let tol = settings.rel_tol;

    // Panel width: a half period of the Bessel oscillation, or a growing
    // panel when r = 0 and the integrand does not oscillate.
    let mut width = if r > 0.0 {
        PI / r
    } else {
        settings.extrapolation_start.max(1.0) / 4.0
    };

    let mut sum = zero::<N>();
    let mut history: Vec<Vector<N>> = Vec::new();
    let mut last_extrapolated: Option<Vector<N>> = None;
    let mut quiet_panels = 0;
    let mut stable_extrapolations = 0;
    let mut a = 0.0;
    let mut residual = f64::INFINITY;

    for _ in 0..settings.max_intervals {
        let b = a + width;
        let mut floor = [0.0; N];
        let scale = sum.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for k in 0..N {
            floor[k] = sum[k].norm().max(1e-3 * scale);
        }
        let piece = panel(a, b, &integrand, 0.05 * tol, &floor, 0);
        for k in 0..N {
            sum[k] += piece[k];
        }
        let scale = sum.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let floor_abs = 1e-3 * scale;

        let small = (0..N).all(|k| piece[k].norm() <= tol * (sum[k].norm() + floor_abs));
        quiet_panels = if small { quiet_panels + 1 } else { 0 };
        if quiet_panels >= 4 && b > settings.extrapolation_start {
            return Ok(sum);
        }
        residual = (0..N)
            .map(|k| piece[k].norm() / (sum[k].norm() + floor_abs).max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);

        if r > 0.0 {
            history.push(sum);
            if history.len() > 40 {
                history.remove(0);
            }
            if b > settings.extrapolation_start && history.len() >= 8 {
                let mut extrapolated = zero::<N>();
                for k in 0..N {
                    let seq: Vec<Complex64> = history.iter().map(|s| s[k]).collect();
                    extrapolated[k] = wynn_epsilon(&seq);
                }
                if let Some(prev) = last_extrapolated {
                    let scale = extrapolated.iter().map(|v| v.norm()).fold(0.0, f64::max);
                    let change = (0..N)
                        .map(|k| {
                            (extrapolated[k] - prev[k]).norm()
                                / (extrapolated[k].norm() + 1e-3 * scale).max(f64::MIN_POSITIVE)
                        })
                        .fold(0.0, f64::max);
                    residual = residual.min(change);
                    stable_extrapolations = if change <= tol { stable_extrapolations + 1 } else { 0 };
                    if stable_extrapolations >= 3 {
                        return Ok(extrapolated);
                    }
                }
                last_extrapolated = Some(extrapolated);
            }
        } else if a > settings.extrapolation_start {
            width *= 1.5;
        }
        a = b;
    }
    Err(Error::IntegrationFailure { residual })
}
