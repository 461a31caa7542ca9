//! Parameter triples, geometric constants and special kernels.
//!
//! Everything downstream is driven by an admissible triple `(N, s, p)` with
//! `s*p > N`. This module also houses the two radial kernels `Phi` and `Psi`
//! obtained by integrating the singular interaction `|x-y|^{-(N+sp)}` over
//! spheres, the explicit constant
//! `theta = omega_N * sup_{T>1} (T-1)^N / ((T-1)^s + T^s)^p`, and the
//! constant `K_{p,N}` normalizing the `s -> 1` limit of Gagliardo energies.

use crate::error::CoreError;
use crate::integrate::{self, QuadResult};
use crate::Result;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Admissible parameter triple `(N, s, p)` with `s*p > N`, `0 < s <= 1`,
/// `1 < p < inf`.
///
/// `s = 1` is accepted by the constructor; operations that only support the
/// fractional range reject it individually.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracParams {
    dim: u32,
    s: f64,
    p: f64,
}

impl FracParams {
    pub fn new(dim: u32, s: f64, p: f64) -> Result<Self> {
        if dim == 0 {
            return Err(CoreError::InvalidParams("dimension must be >= 1".into()));
        }
        if !(s > 0.0 && s <= 1.0) || !s.is_finite() {
            return Err(CoreError::InvalidParams(format!(
                "order s = {s} outside (0, 1]"
            )));
        }
        if !(p > 1.0) || !p.is_finite() {
            return Err(CoreError::InvalidParams(format!(
                "exponent p = {p} outside (1, inf)"
            )));
        }
        if s * p <= dim as f64 {
            return Err(CoreError::InvalidParams(format!(
                "s*p = {} <= N = {dim}: outside the Morrey regime",
                s * p
            )));
        }
        Ok(Self { dim, s, p })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }
    pub fn s(&self) -> f64 {
        self.s
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    /// The product `s*p`.
    pub fn sp(&self) -> f64 {
        self.s * self.p
    }
    /// `s*p - N > 0`, the distance to the admissibility boundary.
    pub fn gap(&self) -> f64 {
        self.s * self.p - self.dim as f64
    }
    pub fn is_local(&self) -> bool {
        self.s == 1.0
    }

    /// Rejects the local case for operations on the purely fractional path.
    pub fn require_fractional(&self) -> Result<()> {
        if self.is_local() {
            Err(CoreError::Unsupported(
                "s = 1 is the local case; use the gradient form".into(),
            ))
        } else {
            Ok(())
        }
    }

    /// Geometry of the unit ball in dimension `N`.
    pub fn geometry(&self) -> GeometryConstants {
        GeometryConstants::new(self.dim)
    }
}

/// Hölder exponent `alpha_{s,p} = s - N/p`, strictly inside `(0, 1)` for
/// admissible parameters.
pub fn holder_exponent(params: FracParams) -> f64 {
    params.s() - params.dim() as f64 / params.p()
}

/// Volume of the unit ball and measure of the unit sphere in dimension `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryConstants {
    pub omega_n: f64,
    pub sphere_measure: f64,
}

impl GeometryConstants {
    pub fn new(dim: u32) -> Self {
        let omega_n = unit_ball_volume(dim);
        Self {
            omega_n,
            sphere_measure: dim as f64 * omega_n,
        }
    }
}

/// `omega_N = pi^{N/2} / Gamma(N/2 + 1)` evaluated through the two-step
/// recurrence `omega_N = 2*pi/N * omega_{N-2}` seeded with `omega_0 = 1`,
/// `omega_1 = 2`, so the low dimensions come out exact.
pub fn unit_ball_volume(dim: u32) -> f64 {
    match dim {
        0 => 1.0,
        1 => 2.0,
        n => 2.0 * PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// Hausdorff measure of the sphere `S^k` embedded in `R^{k+1}`.
pub fn sphere_surface(k: u32) -> f64 {
    (k as f64 + 1.0) * unit_ball_volume(k + 1)
}

// Lanczos coefficients, g = 7, 9 terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function by the Lanczos rational approximation (relative accuracy
/// well below `1e-13` on the positive axis); used to cross-check the ball
/// volume recurrence and for general real arguments.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection formula
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS[0];
        for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

/// Value of a kernel evaluation together with the quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelEval {
    pub value: f64,
    pub estimated_error: f64,
}

impl KernelEval {
    fn from_quad(q: QuadResult, scale: f64) -> Self {
        Self {
            value: scale * q.value,
            estimated_error: scale.abs() * q.error,
        }
    }
}

/// The kernel `Phi_{N,sp}(r)` for `0 <= r < 1`:
///
/// * `N = 1`: `(1-r)^{-(1+sp)} + (1+r)^{-(1+sp)}` in closed form,
/// * `N >= 2`: `|S^{N-2}| * int_{-1}^{1} (1-t^2)^{(N-3)/2} (1 - 2tr + r^2)^{-(N+sp)/2} dt`,
///   with the endpoint weight at `N = 2` removed by `t = sin(u)`.
pub fn phi_kernel(params: FracParams, r: f64) -> Result<KernelEval> {
    if !(0.0..1.0).contains(&r) {
        return Err(CoreError::Domain(format!(
            "phi kernel requires 0 <= r < 1, got {r}"
        )));
    }
    let sp = params.sp();
    match params.dim() {
        1 => {
            let value = (1.0 - r).powf(-(1.0 + sp)) + (1.0 + r).powf(-(1.0 + sp));
            Ok(KernelEval {
                value,
                estimated_error: value * 4.0 * f64::EPSILON,
            })
        }
        2 => {
            let expo = -(2.0 + sp) / 2.0;
            let q = integrate::adaptive_default(
                |u| (1.0 - 2.0 * u.sin() * r + r * r).powf(expo),
                -PI / 2.0,
                PI / 2.0,
            );
            Ok(KernelEval::from_quad(q, sphere_surface(0)))
        }
        n => {
            let nf = n as f64;
            let wexp = (nf - 3.0) / 2.0;
            let expo = -(nf + sp) / 2.0;
            let q = integrate::adaptive_default(
                |t| (1.0 - t * t).powf(wexp) * (1.0 - 2.0 * t * r + r * r).powf(expo),
                -1.0,
                1.0,
            );
            Ok(KernelEval::from_quad(q, sphere_surface(n - 2)))
        }
    }
}

/// The two-radius kernel `Psi_{N,sp}(rho, r)` obtained by integrating
/// `|x-y|^{-(N+sp)}` over a sphere: symmetric in its arguments and related to
/// `Phi` by `Psi(rho, r) = rho^{-(N+sp)} Phi(r/rho)`.
///
/// The diagonal `rho = r` is rejected: there the angular integral diverges.
pub fn psi_kernel(params: FracParams, rho: f64, r: f64) -> Result<KernelEval> {
    if !(rho > 0.0 && r > 0.0) {
        return Err(CoreError::Domain(format!(
            "psi kernel requires positive radii, got ({rho}, {r})"
        )));
    }
    if (rho - r).abs() <= 1e-9 * (rho + r) {
        return Err(CoreError::Domain(format!(
            "psi kernel near-diagonal: |rho - r| = {} with rho + r = {}",
            (rho - r).abs(),
            rho + r
        )));
    }
    let sp = params.sp();
    match params.dim() {
        1 => {
            let value = (rho - r).abs().powf(-(1.0 + sp)) + (rho + r).powf(-(1.0 + sp));
            Ok(KernelEval {
                value,
                estimated_error: value * 4.0 * f64::EPSILON,
            })
        }
        2 => {
            let d2 = (rho - r) * (rho - r);
            let expo = -(2.0 + sp) / 2.0;
            let q = integrate::adaptive_default(
                |u| (d2 + 2.0 * rho * r * (1.0 - u.sin())).powf(expo),
                -PI / 2.0,
                PI / 2.0,
            );
            Ok(KernelEval::from_quad(q, sphere_surface(0)))
        }
        n => {
            let nf = n as f64;
            let wexp = (nf - 3.0) / 2.0;
            let d2 = (rho - r) * (rho - r);
            let expo = -(nf + sp) / 2.0;
            let q = integrate::adaptive_default(
                |t| (1.0 - t * t).powf(wexp) * (d2 + 2.0 * rho * r * (1.0 - t)).powf(expo),
                -1.0,
                1.0,
            );
            Ok(KernelEval::from_quad(q, sphere_surface(n - 2)))
        }
    }
}

/// Result of the one-dimensional maximization defining `theta`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ThetaResult {
    pub value: f64,
    /// The interior maximizer `T* > 1`.
    pub maximizer: f64,
}

// Log of the theta objective at T = 1 + 10^x. Working in logs keeps the
// tails finite over the full bracketing range x in [-9, 9].
fn theta_log_objective(x: f64, dim: f64, s: f64, p: f64) -> f64 {
    let ln10 = std::f64::consts::LN_10;
    let tm1 = 10f64.powf(x);
    dim * x * ln10 - p * (tm1.powf(s) + (1.0 + tm1).powf(s)).ln()
}

/// The explicit constant
/// `theta_{N,s,p} = omega_N * sup_{T>1} (T-1)^N / ((T-1)^s + T^s)^p`.
///
/// A coarse scan of `log10(T-1)` over `[-9, 9]` brackets the maximum (and
/// aborts if more than one significant local maximum shows up, since
/// unimodality is not guaranteed a priori); golden-section refines inside
/// the bracket.
pub fn theta_constant(params: FracParams) -> Result<ThetaResult> {
    params.require_fractional()?;
    let dim = params.dim() as f64;
    let (s, p) = (params.s(), params.p());
    let obj = |x: f64| theta_log_objective(x, dim, s, p);

    const SCAN: usize = 4001;
    let lo = -9.0;
    let hi = 9.0;
    let step = (hi - lo) / (SCAN - 1) as f64;
    let values: Vec<f64> = (0..SCAN).map(|i| obj(lo + i as f64 * step)).collect();
    let (imax, &vmax) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap();
    if imax == 0 || imax == SCAN - 1 {
        return Err(CoreError::Numeric(format!(
            "theta objective maximal at the scan boundary (log10(T-1) = {})",
            lo + imax as f64 * step
        )));
    }
    // Multi-peak detection: a second strict local maximum within a factor
    // 1e3 of the global one, away from the global bracket, aborts.
    let cutoff = vmax - 1e3f64.ln();
    for i in 1..SCAN - 1 {
        if (i as i64 - imax as i64).abs() <= 2 {
            continue;
        }
        if values[i] > values[i - 1] && values[i] > values[i + 1] && values[i] >= cutoff {
            return Err(CoreError::Numeric(format!(
                "theta objective has multiple local maxima (second peak near \
                 log10(T-1) = {:.6})",
                lo + i as f64 * step
            )));
        }
    }

    // Golden-section refinement.
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut a = lo + (imax - 1) as f64 * step;
    let mut b = lo + (imax + 1) as f64 * step;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = obj(c);
    let mut fd = obj(d);
    while b - a > 1e-13 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = obj(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = obj(d);
        }
    }
    let x_star = 0.5 * (a + b);
    let value = unit_ball_volume(params.dim()) * obj(x_star).exp();
    if !value.is_finite() || value <= 0.0 {
        return Err(CoreError::Numeric(format!(
            "theta evaluated to {value} at T-1 = 1e{x_star}"
        )));
    }
    Ok(ThetaResult {
        value,
        maximizer: 1.0 + 10f64.powf(x_star),
    })
}

/// The constant `K_{p,N} = (1/p) * int_{S^{N-1}} |<w, e_1>| dH^{N-1}(w)`
/// normalizing the `s -> 1` limit `(1-s)[u]^p_{W^{s,p}} -> K_{p,N} [u]^p_{W^{1,p}}`.
///
/// Closed form for `N <= 3`; for higher dimensions the angular integral is
/// reduced to one dimension and evaluated by quadrature.
pub fn bbm_constant(params: FracParams) -> f64 {
    let p = params.p();
    match params.dim() {
        1 => 2.0 / p,
        2 => 4.0 / p,
        3 => 2.0 * PI / p,
        n => {
            let nf = n as f64;
            let q = integrate::adaptive_default(
                |phi| phi.cos() * phi.sin().powf(nf - 2.0),
                0.0,
                PI / 2.0,
            );
            sphere_surface(n - 2) * 2.0 * q.value / p
        }
    }
}

/// Constant of the localized Morrey inequality on a ball, given a positive
/// estimate of `Lambda_{s,p}(B_1(0))`:
/// `4^{(4N+1)/p} * (2^{N+2p} / (omega_N * lambda))^{1/p}`.
pub fn localized_morrey_constant(params: FracParams, lambda_b1: f64) -> Result<f64> {
    if !(lambda_b1 > 0.0) || !lambda_b1.is_finite() {
        return Err(CoreError::Domain(format!(
            "localized Morrey constant needs lambda > 0, got {lambda_b1}"
        )));
    }
    let n = params.dim() as f64;
    let p = params.p();
    let omega = unit_ball_volume(params.dim());
    let a = 4f64.powf((4.0 * n + 1.0) / p);
    let b = (2f64.powf(n + 2.0 * p) / (omega * lambda_b1)).powf(1.0 / p);
    Ok(a * b)
}
