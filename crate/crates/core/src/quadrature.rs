//! Gagliardo seminorms of radial profiles and of grid functions.
//!
//! Two evaluation routes are provided and kept independent on purpose:
//!
//! * `gagliardo_radial` — the double radial integral against the kernel
//!   `Psi`, reduced to nested one-dimensional quadratures by the change of
//!   variables `r = rho * t`, plus the closed-form inside–outside tail. This
//!   is the accurate route for radial trial functions on all of `R^N`.
//! * `gagliardo_grid` — the discrete pair sum over a uniform box grid with
//!   midpoint weights for distant pairs and the exact linear-interpolant
//!   integral for the adjacent band. This is the route the variational
//!   solver optimizes, and it deliberately counts only in-box interactions
//!   (free truncation). `grid_zero_extension_tail` supplies the closed-form
//!   complement for comparisons against the radial route.

use crate::error::CoreError;
use crate::integrate;
use crate::params::{self, FracParams};
use crate::power::PowKind;
use crate::sum::Neumaier;
use crate::Result;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

/// Width of the near-diagonal band `1 - t < EPS_BAND` in the reduced inner
/// integral, where the profile difference is replaced by its first-order
/// modulus and integrated in closed form.
const EPS_BAND: f64 = 1e-4;

/// Default per-axis cap for two-dimensional pair sums (O(n^4) pairs).
pub const GRID_2D_CAP: usize = 257;

/// How a seminorm was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeminormMethod {
    Radial,
    PairSum,
    Gradient,
}

/// A Gagliardo (or gradient) seminorm value; `raised_to_p` is the primary
/// quantity, `value` its `p`-th root.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SeminormResult {
    pub value: f64,
    pub raised_to_p: f64,
    pub method: SeminormMethod,
    pub estimated_error: f64,
}

impl SeminormResult {
    fn new(raised_to_p: f64, p: f64, method: SeminormMethod, err: f64) -> Self {
        Self {
            value: raised_to_p.powf(1.0 / p),
            raised_to_p,
            method,
            estimated_error: err,
        }
    }
}

/// A compactly supported radial function given by its profile `u(|x|)`.
#[derive(Clone)]
pub struct RadialProfile {
    profile: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    support_radius: f64,
    holder_seminorm: Option<f64>,
}

impl std::fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialProfile")
            .field("support_radius", &self.support_radius)
            .field("holder_seminorm", &self.holder_seminorm)
            .finish()
    }
}

impl RadialProfile {
    pub fn new(
        profile: impl Fn(f64) -> f64 + Send + Sync + 'static,
        support_radius: f64,
    ) -> Result<Self> {
        if !(support_radius > 0.0) || !support_radius.is_finite() {
            return Err(CoreError::Domain(format!(
                "support radius must be positive, got {support_radius}"
            )));
        }
        Ok(Self {
            profile: Arc::new(profile),
            support_radius,
            holder_seminorm: None,
        })
    }

    pub fn with_holder_seminorm(mut self, value: f64) -> Self {
        self.holder_seminorm = Some(value);
        self
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn holder_seminorm(&self) -> Option<f64> {
        self.holder_seminorm
    }

    /// Profile value, clamped to zero outside the support.
    pub fn eval(&self, r: f64) -> f64 {
        if r >= self.support_radius {
            0.0
        } else {
            (self.profile)(r)
        }
    }
}

/// A piecewise-multilinear function on a uniform box grid `[-L, L]^dim`
/// (shifted by `origin` along every axis), `dim` in {1, 2}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    dim: usize,
    half_width: f64,
    nodes_per_axis: usize,
    origin: f64,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(dim: usize, half_width: f64, nodes_per_axis: usize, values: Vec<f64>) -> Result<Self> {
        Self::with_origin(dim, half_width, nodes_per_axis, 0.0, values)
    }

    pub fn with_origin(
        dim: usize,
        half_width: f64,
        nodes_per_axis: usize,
        origin: f64,
        values: Vec<f64>,
    ) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(CoreError::Domain(format!("grid dimension must be 1 or 2, got {dim}")));
        }
        if nodes_per_axis < 3 {
            return Err(CoreError::Domain(format!(
                "need at least 3 nodes per axis, got {nodes_per_axis}"
            )));
        }
        if !(half_width > 0.0) {
            return Err(CoreError::Domain(format!("box half-width must be positive, got {half_width}")));
        }
        let expect = if dim == 1 { nodes_per_axis } else { nodes_per_axis * nodes_per_axis };
        if values.len() != expect {
            return Err(CoreError::Domain(format!(
                "value vector has length {}, expected {expect}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::Domain("grid values must be finite".into()));
        }
        Ok(Self { dim, half_width, nodes_per_axis, origin, values })
    }

    /// Sample a function of the coordinates on the grid.
    pub fn from_fn(
        dim: usize,
        half_width: f64,
        nodes_per_axis: usize,
        f: impl Fn(&[f64]) -> f64,
    ) -> Result<Self> {
        let n = nodes_per_axis;
        let h = 2.0 * half_width / (n as f64 - 1.0);
        let values = match dim {
            1 => (0..n).map(|i| f(&[-half_width + i as f64 * h])).collect(),
            2 => {
                let mut v = Vec::with_capacity(n * n);
                for i in 0..n {
                    for j in 0..n {
                        v.push(f(&[-half_width + i as f64 * h, -half_width + j as f64 * h]));
                    }
                }
                v
            }
            d => return Err(CoreError::Domain(format!("grid dimension must be 1 or 2, got {d}"))),
        };
        Self::new(dim, half_width, nodes_per_axis, values)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn half_width(&self) -> f64 {
        self.half_width
    }
    pub fn nodes_per_axis(&self) -> usize {
        self.nodes_per_axis
    }
    pub fn origin(&self) -> f64 {
        self.origin
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.nodes_per_axis as f64 - 1.0)
    }

    /// Coordinate of node `i` along one axis.
    pub fn axis_coord(&self, i: usize) -> f64 {
        self.origin - self.half_width + i as f64 * self.spacing()
    }

    /// Flat index of a 2-D node.
    pub fn index2(&self, i: usize, j: usize) -> usize {
        i * self.nodes_per_axis + j
    }

    /// Coordinates of the node with flat index `k`.
    pub fn node_coords(&self, k: usize) -> Vec<f64> {
        match self.dim {
            1 => vec![self.axis_coord(k)],
            _ => vec![
                self.axis_coord(k / self.nodes_per_axis),
                self.axis_coord(k % self.nodes_per_axis),
            ],
        }
    }

    /// Index of the node closest to coordinate `x` along one axis.
    pub fn nearest_axis_index(&self, x: f64) -> usize {
        let raw = (x - (self.origin - self.half_width)) / self.spacing();
        raw.round().clamp(0.0, (self.nodes_per_axis - 1) as f64) as usize
    }

    /// The same nodal values on a `lambda`-dilated box (`u(x) -> u(x/lambda)`
    /// carried by the grid `[-lambda L, lambda L]`).
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        Self::with_origin(
            self.dim,
            self.half_width * lambda,
            self.nodes_per_axis,
            self.origin * lambda,
            self.values.clone(),
        )
    }
}

/// Precomputed pair-sum weights for a given parameter triple and grid shape.
///
/// One-dimensional weights depend only on the index lag; the adjacent lag
/// carries the exact double integral of the kernel against a linear
/// interpolant (a Beta-type closed form), distant lags the midpoint value
/// `h^{2N} / |x_i - x_j|^{N + sp}`. In 2-D the two edge-adjacent constants
/// are computed once by nested quadrature of the per-axis linear surrogate.
#[derive(Debug, Clone)]
pub struct PairWeights {
    dim: usize,
    n: usize,
    h: f64,
    p: f64,
    pub(crate) pow: PowKind,
    /// 1-D: weight per lag. 2-D: weight per (di, dj) lag pair, flattened.
    lag: Vec<f64>,
    local: bool,
}

impl PairWeights {
    pub fn new(params: FracParams, grid: &GridFunction) -> Result<Self> {
        if grid.dim() == 2 && grid.nodes_per_axis() > GRID_2D_CAP {
            return Err(CoreError::Domain(format!(
                "2-D pair sums capped at {GRID_2D_CAP} nodes per axis (requested {}); \
                 use PairWeights::new_unchecked to override",
                grid.nodes_per_axis()
            )));
        }
        Self::new_unchecked(params, grid)
    }

    /// Same as [`PairWeights::new`] without the 2-D size cap.
    pub fn new_unchecked(params: FracParams, grid: &GridFunction) -> Result<Self> {
        let n = grid.nodes_per_axis();
        let h = grid.spacing();
        let p = params.p();
        let s = params.s();
        let sp = params.sp();
        let dim = grid.dim();
        if params.dim() as usize != dim {
            return Err(CoreError::Domain(format!(
                "parameter dimension {} does not match grid dimension {dim}",
                params.dim()
            )));
        }
        let pow = PowKind::of(p);

        if params.is_local() {
            if dim != 1 {
                return Err(CoreError::Unsupported(
                    "local case s = 1 is implemented for 1-D grids only".into(),
                ));
            }
            // Nearest-neighbour gradient energy:
            //   E = h^{1-p} * sum_i |u_{i+1} - u_i|^p
            // written as an ordered pair sum (each interval counted twice).
            let mut lag = vec![0.0; n];
            lag[1] = 0.5 * h.powf(1.0 - p);
            return Ok(Self { dim, n, h, p, pow, lag, local: true });
        }

        match dim {
            1 => {
                // beta = p - 1 - sp; exact adjacent-band weight per ordered pair.
                let beta = p - 1.0 - sp;
                let b1 = beta + 1.0; // = p(1-s) > 0
                let b2 = beta + 2.0;
                let adj = h.powf(1.0 - sp) * (f64::exp_m1(b2 * std::f64::consts::LN_2))
                    / (b1 * b2);
                let mut lag = vec![0.0; n];
                if n > 1 {
                    lag[1] = adj;
                }
                for (k, w) in lag.iter_mut().enumerate().skip(2) {
                    *w = h * h / (k as f64 * h).powf(1.0 + sp);
                }
                Ok(Self { dim, n, h, p, pow, lag, local: false })
            }
            2 => {
                let scale = h.powf(2.0 - sp);
                let c_edge = edge_surrogate_constant(s, p, sp);
                let c_diag = diag_surrogate_constant(s, p, sp);
                let adj = scale * (c_edge + 0.25 * c_diag);
                let mut lag = vec![0.0; n * n];
                for di in 0..n {
                    for dj in 0..n {
                        if di == 0 && dj == 0 {
                            continue;
                        }
                        lag[di * n + dj] = if di + dj == 1 {
                            adj
                        } else {
                            let d2 = (di * di + dj * dj) as f64;
                            scale * d2.powf(-(2.0 + sp) / 2.0)
                        };
                    }
                }
                Ok(Self { dim, n, h, p, pow, lag, local: false })
            }
            d => Err(CoreError::Domain(format!("unsupported grid dimension {d}"))),
        }
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }
    pub fn exponent(&self) -> f64 {
        self.p
    }
    pub fn is_local(&self) -> bool {
        self.local
    }
    pub fn nodes_per_axis(&self) -> usize {
        self.n
    }
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Weight of the ordered node pair with flat indices `(a, b)`.
    #[inline]
    pub fn weight(&self, a: usize, b: usize) -> f64 {
        match self.dim {
            1 => self.lag[a.abs_diff(b)],
            _ => {
                let (ia, ja) = (a / self.n, a % self.n);
                let (ib, jb) = (b / self.n, b % self.n);
                self.lag[ia.abs_diff(ib) * self.n + ja.abs_diff(jb)]
            }
        }
    }

    #[inline]
    pub(crate) fn lag_weight_1d(&self, lag: usize) -> f64 {
        self.lag[lag]
    }
}

// C_edge: exact kernel integral over two edge-adjacent unit cells against
// the per-axis linear surrogate |x1 - y1|^p, in units of h^{2 - sp}.
fn edge_surrogate_constant(_s: f64, p: f64, sp: f64) -> f64 {
    let q = (2.0 + sp) / 2.0;
    let inner = |y: f64| {
        integrate::adaptive(
            |x: f64| (1.0 - (x - 1.0).abs()) * x.powf(p) * (x * x + y * y).powf(-q),
            0.0,
            2.0,
            1e-10,
            1e-300,
            2000,
        )
        .value
    };
    2.0 * integrate::adaptive(|y: f64| (1.0 - y) * inner(y), 0.0, 1.0, 1e-9, 1e-300, 2000).value
}

// C_diag: same-cell contribution, split evenly among the four edge
// neighbours of the cell.
fn diag_surrogate_constant(_s: f64, p: f64, sp: f64) -> f64 {
    let q = (2.0 + sp) / 2.0;
    let inner = |y: f64| {
        2.0 * integrate::adaptive(
            |x: f64| (1.0 - x) * x.powf(p) * (x * x + y * y).powf(-q),
            0.0,
            1.0,
            1e-10,
            1e-300,
            2000,
        )
        .value
    };
    2.0 * integrate::adaptive(|y: f64| (1.0 - y) * inner(y), 0.0, 1.0, 1e-9, 1e-300, 2000).value
}

fn check_fractional_grid(params: FracParams, u: &GridFunction) -> Result<()> {
    if params.dim() as usize != u.dim() {
        return Err(CoreError::Domain(format!(
            "parameter dimension {} does not match grid dimension {}",
            params.dim(),
            u.dim()
        )));
    }
    Ok(())
}

/// Discrete Gagliardo energy of a grid function: the deterministic
/// compensated pair sum `sum_{i != j} w_ij |u_i - u_j|^p` over the box.
///
/// Pairs outside the box do not interact (free truncation); see
/// [`grid_zero_extension_tail`] for the zero-extension complement.
pub fn gagliardo_grid(params: FracParams, u: &GridFunction) -> Result<SeminormResult> {
    let w = PairWeights::new(params, u)?;
    Ok(gagliardo_grid_with_weights(&w, u))
}

/// Pair-sum energy with precomputed weights (also used by the solver).
pub fn gagliardo_grid_with_weights(w: &PairWeights, u: &GridFunction) -> SeminormResult {
    let vals = u.values();
    let m = vals.len();
    let pow = w.pow;
    // Row-parallel partial sums, reduced in fixed index order.
    let rows: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|a| {
            let mut acc = Neumaier::new();
            let ua = vals[a];
            for b in (a + 1)..m {
                let wt = w.weight(a, b);
                if wt != 0.0 {
                    acc.add(2.0 * wt * pow.abs_pow(ua - vals[b]));
                }
            }
            acc.total()
        })
        .collect();
    let mut total = Neumaier::new();
    for r in &rows {
        total.add(*r);
    }
    let raised = total.total();
    let err = f64::EPSILON * raised.abs() * (m as f64).sqrt();
    let method = if w.is_local() { SeminormMethod::Gradient } else { SeminormMethod::PairSum };
    SeminormResult::new(raised, w.exponent(), method, err)
}

/// Pair sum restricted to node pairs inside the closed ball
/// `|x - center| <= radius`; the ball must sit inside the grid box.
pub fn local_gagliardo_grid(
    params: FracParams,
    u: &GridFunction,
    center: &[f64],
    radius: f64,
) -> Result<SeminormResult> {
    check_fractional_grid(params, u)?;
    if center.len() != u.dim() {
        return Err(CoreError::Domain(format!(
            "center has {} coordinates for a {}-D grid",
            center.len(),
            u.dim()
        )));
    }
    let tol = 1e-12 * u.half_width();
    for &c in center {
        if (c - u.origin()).abs() + radius > u.half_width() + tol {
            return Err(CoreError::Domain(format!(
                "ball of radius {radius} at {center:?} escapes the grid box"
            )));
        }
    }
    let w = PairWeights::new(params, u)?;
    let idx = ball_nodes(u, center, radius);
    Ok(local_energy_with_weights(&w, u, &idx))
}

/// Indices of grid nodes inside the closed ball.
pub(crate) fn ball_nodes(u: &GridFunction, center: &[f64], radius: f64) -> Vec<usize> {
    let m = u.values().len();
    let r2 = radius * radius * (1.0 + 1e-12);
    (0..m)
        .filter(|&k| {
            let xs = u.node_coords(k);
            let d2: f64 = xs.iter().zip(center).map(|(x, c)| (x - c) * (x - c)).sum();
            d2 <= r2
        })
        .collect()
}

pub(crate) fn local_energy_with_weights(
    w: &PairWeights,
    u: &GridFunction,
    nodes: &[usize],
) -> SeminormResult {
    let vals = u.values();
    let pow = w.pow;
    let rows: Vec<f64> = (0..nodes.len())
        .into_par_iter()
        .map(|ai| {
            let a = nodes[ai];
            let ua = vals[a];
            let mut acc = Neumaier::new();
            for &b in &nodes[ai + 1..] {
                let wt = w.weight(a, b);
                if wt != 0.0 {
                    acc.add(2.0 * wt * pow.abs_pow(ua - vals[b]));
                }
            }
            acc.total()
        })
        .collect();
    let mut total = Neumaier::new();
    for r in &rows {
        total.add(*r);
    }
    let raised = total.total();
    let err = f64::EPSILON * raised.abs() * (nodes.len() as f64).sqrt();
    SeminormResult::new(raised, w.exponent(), SeminormMethod::PairSum, err)
}

/// Closed-form interaction of the zero-extended grid function with the box
/// exterior: `2 * sum_i m_i |u_i|^p * int_{R^N \ box} |x_i - y|^{-N-sp} dy`.
///
/// Together with [`gagliardo_grid`] this approximates the full-space
/// seminorm of the zero extension. Fails if the function is nonzero at a
/// boundary node (the zero extension then has an infinite seminorm).
pub fn grid_zero_extension_tail(params: FracParams, u: &GridFunction) -> Result<SeminormResult> {
    params.require_fractional()?;
    check_fractional_grid(params, u)?;
    let sp = params.sp();
    let p = params.p();
    let pow = PowKind::of(p);
    let n = u.nodes_per_axis();
    let h = u.spacing();
    let l = u.half_width();
    let mut acc = Neumaier::new();
    match u.dim() {
        1 => {
            for i in 0..n {
                let ui = u.values()[i];
                if ui == 0.0 {
                    continue;
                }
                if i == 0 || i == n - 1 {
                    return Err(CoreError::Numeric(
                        "zero-extension tail divergent: nonzero value at a boundary node".into(),
                    ));
                }
                let x = u.axis_coord(i) - u.origin();
                let t = ((l - x).powf(-sp) + (l + x).powf(-sp)) / sp;
                acc.add(2.0 * h * pow.abs_pow(ui) * t);
            }
        }
        _ => {
            // Half-plane slabs in closed form, overlapping corners removed
            // by a direct product-substituted midpoint rule.
            let c_slab = slab_angular_constant(sp);
            for k in 0..u.values().len() {
                let uk = u.values()[k];
                if uk == 0.0 {
                    continue;
                }
                let xs = u.node_coords(k);
                let a1 = l - (xs[0] - u.origin());
                let a2 = l + (xs[0] - u.origin());
                let b1 = l - (xs[1] - u.origin());
                let b2 = l + (xs[1] - u.origin());
                if a1.min(a2).min(b1.min(b2)) <= 0.5 * h {
                    return Err(CoreError::Numeric(
                        "zero-extension tail divergent: nonzero value at a boundary node".into(),
                    ));
                }
                let slabs = c_slab / sp
                    * (a1.powf(-sp) + a2.powf(-sp) + b1.powf(-sp) + b2.powf(-sp));
                let corners = corner_integral(a1, b1, sp)
                    + corner_integral(a1, b2, sp)
                    + corner_integral(a2, b1, sp)
                    + corner_integral(a2, b2, sp);
                acc.add(2.0 * h * h * pow.abs_pow(uk) * (slabs - corners));
            }
        }
    }
    let raised = acc.total();
    if !raised.is_finite() {
        return Err(CoreError::Numeric("zero-extension tail overflowed".into()));
    }
    Ok(SeminormResult::new(raised, p, SeminormMethod::PairSum, raised * 1e-6))
}

// int_R (1 + t^2)^{-(2+sp)/2} dt = sqrt(pi) Gamma((1+sp)/2) / Gamma((2+sp)/2)
fn slab_angular_constant(sp: f64) -> f64 {
    std::f64::consts::PI.sqrt() * params::gamma((1.0 + sp) / 2.0)
        / params::gamma((2.0 + sp) / 2.0)
}

// Corner integral int_{a>A} int_{b>B} (a^2 + b^2)^{-(2+sp)/2} da db via the
// substitution a = A/v, b = B/w mapping to (0,1]^2; fixed midpoint rule.
fn corner_integral(big_a: f64, big_b: f64, sp: f64) -> f64 {
    const M: usize = 64;
    let q = (2.0 + sp) / 2.0;
    let mut acc = 0.0;
    for i in 0..M {
        let v = (i as f64 + 0.5) / M as f64;
        for j in 0..M {
            let w = (j as f64 + 0.5) / M as f64;
            let a = big_a / v;
            let b = big_b / w;
            acc += (a * a + b * b).powf(-q) * (big_a / (v * v)) * (big_b / (w * w));
        }
    }
    acc / (M * M) as f64
}

/// Hölder seminorm of a grid function: the maximum of
/// `|u_i - u_j| / |x_i - x_j|^alpha` over distinct node pairs, with the
/// attaining pair (lexicographically smallest on ties). A constant function
/// returns `(0, (0, 0))`.
pub fn holder_seminorm_grid(alpha: f64, u: &GridFunction) -> Result<(f64, (usize, usize))> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(CoreError::Domain(format!("Hölder order {alpha} outside (0, 1]")));
    }
    let vals = u.values();
    let m = vals.len();
    // Precompute coordinates once; the scan is O(m^2).
    let coords: Vec<(f64, f64)> = (0..m)
        .map(|k| {
            let c = u.node_coords(k);
            (c[0], if u.dim() == 2 { c[1] } else { 0.0 })
        })
        .collect();
    let rows: Vec<(f64, usize, usize)> = (0..m)
        .into_par_iter()
        .map(|a| {
            let (xa, ya) = coords[a];
            let ua = vals[a];
            let mut best = (f64::NEG_INFINITY, a, a);
            for b in (a + 1)..m {
                let (xb, yb) = coords[b];
                let d2 = (xa - xb) * (xa - xb) + (ya - yb) * (ya - yb);
                let ratio = (ua - vals[b]).abs() / d2.sqrt().powf(alpha);
                if ratio > best.0 {
                    best = (ratio, a, b);
                }
            }
            best
        })
        .collect();
    let mut value = 0.0;
    let mut pair = (0usize, 0usize);
    let mut found = false;
    for (v, a, b) in rows {
        if a == b {
            continue;
        }
        if v > value || (!found && v > 0.0) {
            value = v;
            pair = (a, b);
            found = true;
        }
    }
    if !found {
        return Ok((0.0, (0, 0)));
    }
    Ok((value, pair))
}

/// Largest translated difference quotient
/// `max_h sum_i h_cell^N |u(x_i + h) - u(x_i)|^p / |h|^{sp}` over the given
/// shifts (zero extension outside the box). One-dimensional grids only;
/// every shift must be an integer multiple of the grid spacing.
pub fn difference_quotient_sup(
    params: FracParams,
    u: &GridFunction,
    shifts: &[f64],
) -> Result<f64> {
    check_fractional_grid(params, u)?;
    if u.dim() != 1 {
        return Err(CoreError::Unsupported(
            "difference quotients are implemented for 1-D grids".into(),
        ));
    }
    let h = u.spacing();
    let sp = params.sp();
    let pow = PowKind::of(params.p());
    let n = u.nodes_per_axis();
    let vals = u.values();
    let mut best: f64 = 0.0;
    for &shift in shifts {
        let k = (shift / h).round();
        if (shift - k * h).abs() > 1e-9 * h.max(shift.abs()) || k == 0.0 {
            return Err(CoreError::Domain(format!(
                "shift {shift} is not a nonzero multiple of the grid spacing {h}"
            )));
        }
        let k = k as i64;
        let mut acc = Neumaier::new();
        // zero extension: nodes whose shifted partner leaves the box pair
        // against 0, and exterior nodes pair against in-box values.
        for i in 0..n as i64 {
            let j = i + k;
            let ui = vals[i as usize];
            let uj = if (0..n as i64).contains(&j) { vals[j as usize] } else { 0.0 };
            acc.add(pow.abs_pow(uj - ui));
        }
        // exterior points x with x + shift inside the box
        for j in 0..n as i64 {
            let i = j - k;
            if !(0..n as i64).contains(&i) {
                acc.add(pow.abs_pow(vals[j as usize]));
            }
        }
        let quotient = h * acc.total() / (k.unsigned_abs() as f64 * h).powf(sp);
        best = best.max(quotient);
    }
    Ok(best)
}

/// Gagliardo seminorms `[u]_{W^{beta,p}}` of one grid function along an
/// increasing list of exponents `p`, all of order `beta`.
pub fn seminorm_p_limit(beta: f64, u: &GridFunction, p_list: &[f64]) -> Result<Vec<f64>> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(CoreError::Domain(format!("order beta = {beta} outside (0, 1)")));
    }
    let mut out = Vec::with_capacity(p_list.len());
    for &p in p_list {
        let params = FracParams::new(u.dim() as u32, beta, p)?;
        out.push(gagliardo_grid(params, u)?.value);
    }
    Ok(out)
}

/// Local gradient seminorm `(int |u'|^p)^{1/p}` of a 1-D grid function,
/// piecewise-linear exact.
pub fn gradient_seminorm_grid(p: f64, u: &GridFunction) -> Result<SeminormResult> {
    if u.dim() != 1 {
        return Err(CoreError::Unsupported(
            "gradient seminorm implemented for 1-D grids".into(),
        ));
    }
    let h = u.spacing();
    let pow = PowKind::of(p);
    let mut acc = Neumaier::new();
    let vals = u.values();
    for i in 0..vals.len() - 1 {
        acc.add(pow.abs_pow(vals[i + 1] - vals[i]));
    }
    let raised = acc.total() * h.powf(1.0 - p);
    Ok(SeminormResult::new(raised, p, SeminormMethod::Gradient, raised * 1e-14))
}

/// Full-space Gagliardo energy `[u]^p_{W^{s,p}(R^N)}` of a compactly
/// supported radial profile.
///
/// Inside–inside is reduced by `r = rho t` to
/// `2 |S^{N-1}| int_0^R rho^{N-1-sp} int_0^1 |u(rho) - u(rho t)|^p t^{N-1} Phi(t) dt drho`,
/// the band `1 - t < 1e-4` integrating the first-order modulus against the
/// kernel's singular part in closed form; inside–outside uses the exact
/// radial tail of `|x-y|^{-N-sp}` over the support exterior.
pub fn gagliardo_radial(params: FracParams, u: &RadialProfile) -> Result<SeminormResult> {
    params.require_fractional()?;
    let n = params.dim();
    let nf = n as f64;
    let sp = params.sp();
    let p = params.p();
    let pow = PowKind::of(p);
    let big_r = u.support_radius();
    let sphere = params::sphere_surface(n - 1);

    // Phi(t) with memoization for N >= 2 (closed form for N = 1).
    let memo: RefCell<HashMap<u64, f64>> = RefCell::new(HashMap::new());
    let phi = |t: f64| -> f64 {
        if n == 1 {
            (1.0 - t).powf(-(1.0 + sp)) + (1.0 + t).powf(-(1.0 + sp))
        } else {
            if let Some(&v) = memo.borrow().get(&t.to_bits()) {
                return v;
            }
            let v = params::phi_kernel(params, t).map(|k| k.value).unwrap_or(f64::NAN);
            memo.borrow_mut().insert(t.to_bits(), v);
            v
        }
    };

    // Coefficient of the (1-t)^{-1-sp} blow-up of Phi, matched at the band edge.
    let k_hat = if n == 1 {
        1.0
    } else {
        EPS_BAND.powf(1.0 + sp) * phi(1.0 - EPS_BAND)
    };

    let inner = |rho: f64| -> f64 {
        let u_rho = u.eval(rho);
        let regular = integrate::adaptive(
            |t| {
                let diff = u_rho - u.eval(rho * t);
                pow.abs_pow(diff) * t.powf(nf - 1.0) * phi(t)
            },
            0.0,
            1.0 - EPS_BAND,
            1e-9,
            1e-300,
            1500,
        )
        .value;
        // First-order modulus on the band.
        let slope = (u_rho - u.eval(rho * (1.0 - EPS_BAND))).abs() / (rho * EPS_BAND);
        let band = pow.abs_pow(rho * slope) * k_hat * EPS_BAND.powf(p - sp) / (p - sp);
        regular + band
    };

    let inside = 2.0
        * sphere
        * integrate::adaptive(
            |rho| rho.powf(nf - 1.0 - sp) * inner(rho),
            0.0,
            big_r,
            1e-8,
            1e-300,
            1200,
        )
        .value;

    let tail = if n == 1 {
        4.0 / sp
            * integrate::adaptive(
                |rho| {
                    pow.abs_pow(u.eval(rho))
                        * ((big_r - rho).powf(-sp) + (big_r + rho).powf(-sp))
                },
                0.0,
                big_r,
                1e-9,
                1e-300,
                1500,
            )
            .value
    } else {
        // Tail(rho) = rho^{-sp} * int_0^{rho/R} w^{sp-1} Phi(w) dw
        let g_of = |z: f64| -> f64 {
            integrate::adaptive(|w| w.powf(sp - 1.0) * phi(w), 0.0, z, 1e-8, 1e-300, 800).value
        };
        2.0 * sphere
            * integrate::adaptive(
                |rho| {
                    let v = pow.abs_pow(u.eval(rho));
                    if v == 0.0 {
                        0.0
                    } else {
                        rho.powf(nf - 1.0 - sp) * v * g_of(rho / big_r)
                    }
                },
                0.0,
                big_r,
                1e-7,
                1e-300,
                600,
            )
            .value
    };

    let raised = inside + tail;
    if !raised.is_finite() || raised > 1e280 {
        return Err(CoreError::Numeric(format!(
            "radial Gagliardo energy diverged (inside = {inside}, tail = {tail})"
        )));
    }
    Ok(SeminormResult::new(
        raised,
        p,
        SeminormMethod::Radial,
        raised.abs() * 1e-6,
    ))
}

/// Hölder seminorm of a radial profile: for radial functions the supremum of
/// `|u(x) - u(y)| / |x-y|^alpha` is attained on a common ray, so a dense
/// two-point scan of the profile with local refinement near the argmax
/// suffices in every dimension.
pub fn holder_seminorm_radial(alpha: f64, u: &RadialProfile, samples: usize) -> f64 {
    let big_r = u.support_radius();
    let m = samples.max(64);
    let grid: Vec<f64> = (0..=m).map(|i| big_r * i as f64 / m as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&r| u.eval(r)).collect();
    let scan = |xs: &[f64], vs: &[f64]| -> (f64, usize, usize) {
        let mut best = (0.0, 0, 0);
        for a in 0..xs.len() {
            for b in (a + 1)..xs.len() {
                let ratio = (vs[a] - vs[b]).abs() / (xs[b] - xs[a]).powf(alpha);
                if ratio > best.0 {
                    best = (ratio, a, b);
                }
            }
        }
        best
    };
    let (mut best, ia, ib) = scan(&grid, &vals);
    // 10x subsampling around the detected argmax.
    let lo = grid[ia.saturating_sub(1)];
    let hi = grid[(ib + 1).min(m)];
    let fine_m = 10 * (ib - ia + 2).min(m);
    let fine: Vec<f64> = (0..=fine_m)
        .map(|i| lo + (hi - lo) * i as f64 / fine_m as f64)
        .collect();
    let fvals: Vec<f64> = fine.iter().map(|&r| u.eval(r)).collect();
    let (refined, _, _) = scan(&fine, &fvals);
    if refined > best {
        best = refined;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(dim: u32, s: f64, p: f64) -> FracParams {
        FracParams::new(dim, s, p).unwrap()
    }

    fn ramp(l: f64, n: usize) -> GridFunction {
        GridFunction::from_fn(1, l, n, |x| x[0].clamp(0.0, 1.0)).unwrap()
    }

    #[test]
    fn constant_grid_function_has_zero_energy() {
        let u = GridFunction::from_fn(1, 2.0, 65, |_| 3.25).unwrap();
        let r = gagliardo_grid(params(1, 0.8, 2.0), &u).unwrap();
        assert_eq!(r.raised_to_p, 0.0);
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn rejects_tiny_grids() {
        assert!(GridFunction::new(1, 1.0, 2, vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn seminorm_value_is_pth_root() {
        let u = ramp(4.0, 129);
        let pr = params(1, 0.8, 3.0);
        let r = gagliardo_grid(pr, &u).unwrap();
        assert_relative_eq!(r.value, r.raised_to_p.powf(1.0 / 3.0), max_relative = 1e-14);
    }

    #[test]
    fn ramp_energy_first_order_richardson() {
        // Oracle: Richardson ratio across n-doubling. The observed order of
        // the pair-sum scheme on the ramp is ~1 (kink-dominated).
        let pr = params(1, 0.8, 2.0);
        let e: Vec<f64> = [513usize, 1025, 2049]
            .iter()
            .map(|&n| gagliardo_grid(pr, &ramp(4.0, n)).unwrap().raised_to_p)
            .collect();
        let ratio = (e[1] - e[0]) / (e[2] - e[1]);
        assert!(
            (1.5..6.0).contains(&ratio),
            "Richardson ratio {ratio} outside the first/second-order window; e = {e:?}"
        );
    }

    #[test]
    fn scale_covariance() {
        // u(x/lambda) on the dilated grid multiplies the energy by
        // lambda^{N - sp}.
        let pr = params(1, 0.8, 2.0);
        let u = GridFunction::from_fn(1, 2.0, 513, |x| (1.0 - x[0] * x[0]).max(0.0)).unwrap();
        let e1 = gagliardo_grid(pr, &u).unwrap().raised_to_p;
        let u2 = u.dilate(2.0).unwrap();
        let e2 = gagliardo_grid(pr, &u2).unwrap().raised_to_p;
        let lambda: f64 = 2.0;
        let predicted = e1 * lambda.powf(1.0 - pr.sp());
        assert_relative_eq!(e2, predicted, max_relative = 1e-3);
    }

    #[test]
    fn translation_invariance_integer_cells() {
        let pr = params(1, 0.75, 2.0);
        let n = 257;
        let u1 = GridFunction::from_fn(1, 4.0, n, |x| (1.0 - x[0].abs()).max(0.0)).unwrap();
        let h = u1.spacing();
        let shift = 7.0 * h;
        let u2 =
            GridFunction::from_fn(1, 4.0, n, |x| (1.0 - (x[0] - shift).abs()).max(0.0)).unwrap();
        let e1 = gagliardo_grid(pr, &u1).unwrap().raised_to_p;
        let e2 = gagliardo_grid(pr, &u2).unwrap().raised_to_p;
        assert_relative_eq!(e1, e2, max_relative = 1e-12);
    }

    #[test]
    fn reflection_symmetry() {
        let pr = params(1, 0.75, 2.0);
        let u1 = GridFunction::from_fn(1, 3.0, 201, |x| (x[0] - 0.3).clamp(0.0, 1.0)).unwrap();
        let mut rev = u1.values().to_vec();
        rev.reverse();
        let u2 = GridFunction::new(1, 3.0, 201, rev).unwrap();
        let e1 = gagliardo_grid(pr, &u1).unwrap().raised_to_p;
        let e2 = gagliardo_grid(pr, &u2).unwrap().raised_to_p;
        assert_relative_eq!(e1, e2, max_relative = 1e-13);
    }

    #[test]
    fn local_ball_covering_box_reproduces_full_sum() {
        let pr = params(1, 0.8, 2.0);
        let u = ramp(2.0, 101);
        let full = gagliardo_grid(pr, &u).unwrap().raised_to_p;
        let local = local_gagliardo_grid(pr, &u, &[0.0], 2.0).unwrap().raised_to_p;
        assert_relative_eq!(full, local, max_relative = 1e-12);
    }

    #[test]
    fn local_ball_monotone_in_radius_and_empty_ball() {
        let pr = params(1, 0.8, 2.0);
        let u = ramp(2.0, 101);
        let h = u.spacing();
        let tiny = local_gagliardo_grid(pr, &u, &[0.37 * h], 0.4 * h).unwrap();
        assert_eq!(tiny.raised_to_p, 0.0);
        let mut last = 0.0;
        for &r in &[0.25, 0.5, 1.0, 1.5, 2.0] {
            let e = local_gagliardo_grid(pr, &u, &[0.0], r).unwrap().raised_to_p;
            assert!(e >= last);
            last = e;
        }
        assert!(local_gagliardo_grid(pr, &u, &[1.5], 1.0).is_err());
    }

    #[test]
    fn holder_of_constant_is_zero_with_sentinel() {
        let u = GridFunction::from_fn(1, 1.0, 33, |_| 2.0).unwrap();
        let (v, pair) = holder_seminorm_grid(0.5, &u).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(pair, (0, 0));
    }

    #[test]
    fn holder_of_ramp_approaches_closed_form() {
        // u = clamp(x, 0, 1) with alpha = 1 - 1/p: the ratio
        // |x - y|^{1/p} over the ramp maximizes at the full unit segment.
        let p = 2.0;
        let alpha = 1.0 - 1.0 / p;
        for &n in &[129usize, 513] {
            let u = ramp(2.0, n);
            let (v, (a, b)) = holder_seminorm_grid(alpha, &u).unwrap();
            assert!((v - 1.0).abs() < 2.0 / n as f64, "v = {v} at n = {n}");
            let xa = u.axis_coord(a);
            let xb = u.axis_coord(b);
            assert!(xa.abs() < 2.0 / n as f64 && (xb - 1.0).abs() < 2.0 / n as f64,
                "argmax pair ({xa}, {xb})");
        }
    }

    #[test]
    fn difference_quotient_zero_function_and_disjoint_shift() {
        let pr = params(1, 0.8, 2.0);
        let zero = GridFunction::from_fn(1, 2.0, 65, |_| 0.0).unwrap();
        assert_eq!(difference_quotient_sup(pr, &zero, &[zero.spacing()]).unwrap(), 0.0);

        // bump supported well inside a box; a shift of the full box width
        // makes the translated copies disjoint:
        //   sum = 2 * h * sum |u_i|^p / shift^{sp}
        let u = GridFunction::from_fn(1, 2.0, 129, |x| (1.0 - x[0] * x[0]).max(0.0).powi(2))
            .unwrap();
        let h = u.spacing();
        let shift = 4.0;
        let got = difference_quotient_sup(pr, &u, &[shift]).unwrap();
        let direct: f64 = u.values().iter().map(|v| v * v).sum::<f64>() * 2.0 * h
            / shift.powf(pr.sp());
        assert_relative_eq!(got, direct, max_relative = 1e-12);
        // non-commensurate shift rejected
        assert!(difference_quotient_sup(pr, &u, &[1.5 * h]).is_err());
    }

    #[test]
    fn p_limit_of_constant_is_zero() {
        let u = GridFunction::from_fn(1, 1.0, 65, |_| 1.0).unwrap();
        let vals = seminorm_p_limit(0.5, &u, &[4.0, 8.0]).unwrap();
        assert!(vals.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn p_limit_approaches_grid_holder_seminorm() {
        let u = GridFunction::from_fn(1, 2.0, 257, |x| (1.0 - x[0] * x[0]).max(0.0).powi(2))
            .unwrap();
        let beta = 0.5;
        let vals = seminorm_p_limit(beta, &u, &[4.0, 8.0, 16.0, 32.0]).unwrap();
        let (holder, _) = holder_seminorm_grid(beta, &u).unwrap();
        let last = vals.last().unwrap();
        assert!(
            (last / holder - 1.0).abs() < 0.10,
            "p-limit {last} vs Hölder {holder}"
        );
        // distance to the Hölder value shrinks over the last two exponents
        let d2 = (vals[2] - holder).abs();
        let d3 = (vals[3] - holder).abs();
        assert!(d3 <= d2 + 1e-12, "no monotone trend: {vals:?} vs {holder}");
    }

    #[test]
    fn radial_zero_profile() {
        let pr = params(1, 0.75, 2.0);
        let u = RadialProfile::new(|_| 0.0, 1.0).unwrap();
        let r = gagliardo_radial(pr, &u).unwrap();
        assert_eq!(r.raised_to_p, 0.0);
    }

    #[test]
    fn radial_matches_brute_double_integral_1d() {
        // Independent oracle: 2-D trapezoid over (-R, R)^2 of the smooth
        // bump (1 - r^2)^2 plus the closed-form exterior tail.
        let pr = params(1, 0.75, 2.0);
        let sp = pr.sp();
        let u = |x: f64| {
            let r = x.abs();
            if r >= 1.0 { 0.0 } else { (1.0 - r * r) * (1.0 - r * r) }
        };
        let m = 1600usize;
        let h = 2.0 / m as f64;
        let mut acc = 0.0f64;
        for i in 0..m {
            let x = -1.0 + (i as f64 + 0.5) * h;
            for j in 0..m {
                if i == j {
                    continue;
                }
                let y = -1.0 + (j as f64 + 0.5) * h;
                acc += (u(x) - u(y)).powi(2) / (x - y).abs().powf(1.0 + sp) * h * h;
            }
        }
        // diagonal band correction: cells i == j contribute
        // ~ |u'(x)|^2 * h^{3-sp} * 2/((2-sp)(3-sp)) each
        let mut diag = 0.0;
        for i in 0..m {
            let x = -1.0 + (i as f64 + 0.5) * h;
            let du = if x.abs() < 1.0 { -4.0 * x * (1.0 - x * x) } else { 0.0 };
            diag += du * du * h.powf(3.0 - sp) * 2.0 / ((2.0 - sp) * (3.0 - sp));
        }
        let tail = {
            let mut t = 0.0;
            for i in 0..m {
                let x = -1.0 + (i as f64 + 0.5) * h;
                t += u(x).powi(2) * ((1.0 - x).powf(-sp) + (1.0 + x).powf(-sp)) / sp * h;
            }
            2.0 * t
        };
        let oracle = acc + diag + tail;
        let profile = RadialProfile::new(
            |r| if r >= 1.0 { 0.0 } else { (1.0 - r * r) * (1.0 - r * r) },
            1.0,
        )
        .unwrap();
        let got = gagliardo_radial(pr, &profile).unwrap().raised_to_p;
        assert_relative_eq!(got, oracle, max_relative = 3e-3);
    }

    #[test]
    fn radial_agrees_with_grid_plus_tail_on_smooth_bump() {
        let pr = params(1, 0.75, 2.0);
        let profile = RadialProfile::new(
            |r| if r >= 1.0 { 0.0 } else { (1.0 - r * r) * (1.0 - r * r) },
            1.0,
        )
        .unwrap();
        let radial = gagliardo_radial(pr, &profile).unwrap().raised_to_p;
        let u = GridFunction::from_fn(1, 1.5, 4097, |x| {
            let r = x[0].abs();
            if r >= 1.0 { 0.0 } else { (1.0 - r * r) * (1.0 - r * r) }
        })
        .unwrap();
        let grid = gagliardo_grid(pr, &u).unwrap().raised_to_p
            + grid_zero_extension_tail(pr, &u).unwrap().raised_to_p;
        assert_relative_eq!(radial, grid, max_relative = 6e-3);
    }

    #[test]
    fn radial_holder_scan_on_cone() {
        // 1-Lipschitz cone: [u]_{C^{0,1}} = 1.
        let cone = RadialProfile::new(|r| (1.0 - r).max(0.0), 1.0).unwrap();
        let v = holder_seminorm_radial(1.0, &cone, 512);
        assert_relative_eq!(v, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn two_dim_constant_zero_and_cap() {
        let pr = params(2, 0.8, 3.0);
        let u = GridFunction::from_fn(2, 1.0, 17, |_| 1.5).unwrap();
        let r = gagliardo_grid(pr, &u).unwrap();
        assert_eq!(r.raised_to_p, 0.0);
        let big = GridFunction::from_fn(2, 1.0, 300, |_| 0.0).unwrap();
        assert!(gagliardo_grid(pr, &big).is_err());
    }

    #[test]
    fn two_dim_scale_covariance() {
        let pr = params(2, 0.8, 3.0);
        let u = GridFunction::from_fn(2, 1.5, 49, |x| {
            (1.0 - (x[0] * x[0] + x[1] * x[1])).max(0.0)
        })
        .unwrap();
        let e1 = gagliardo_grid(pr, &u).unwrap().raised_to_p;
        let u2 = u.dilate(2.0).unwrap();
        let e2 = gagliardo_grid(pr, &u2).unwrap().raised_to_p;
        let lambda: f64 = 2.0;
        assert_relative_eq!(e2, e1 * lambda.powf(2.0 - pr.sp()), max_relative = 1e-3);
    }
}
