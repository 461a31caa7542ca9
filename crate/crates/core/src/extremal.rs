//! Grid-discretized constrained minimization.
//!
//! Two problems live here:
//!
//! * the *pinned problem* — minimize the discrete Gagliardo energy over all
//!   node values with two nodes held at prescribed values. Its minimizer is
//!   the discrete counterpart of an extremal of the sharp Morrey constant,
//!   and `energy / holder^p` of the solution estimates that constant;
//! * the *punctured-ball Rayleigh quotient* — minimize `energy / ||u||_p^p`
//!   over functions on the unit-ball node set vanishing at the center,
//!   estimating the Poincaré constant `Lambda_{s,p}(B_1)` from above.
//!
//! The pinned energy is convex (strictly so modulo constants, which the
//! pins remove), so an accelerated gradient method with backtracking plus a
//! coordinate-Newton polish reaches stationarity to near machine precision.
//! The Rayleigh problem is nonconvex on the `L^p` sphere and runs from
//! multiple restarts with renormalization after every step.

use crate::error::CoreError;
use crate::params::{self, FracParams};
use crate::power::PowKind;
use crate::quadrature::{self, ball_nodes, GridFunction, PairWeights};
use crate::sum::Neumaier;
use crate::Result;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Shape of the uniform grid carrying a variational problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dim: usize,
    pub half_width: f64,
    pub nodes_per_axis: usize,
    /// Box center; node coordinates are `origin - L + i*h`.
    pub origin: f64,
}

impl GridSpec {
    pub fn new(dim: usize, half_width: f64, nodes_per_axis: usize) -> Self {
        Self { dim, half_width, nodes_per_axis, origin: 0.0 }
    }

    pub fn with_origin(mut self, origin: f64) -> Self {
        self.origin = origin;
        self
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.nodes_per_axis as f64 - 1.0)
    }

    pub fn node_count(&self) -> usize {
        if self.dim == 1 {
            self.nodes_per_axis
        } else {
            self.nodes_per_axis * self.nodes_per_axis
        }
    }

    pub fn zero_function(&self) -> Result<GridFunction> {
        GridFunction::with_origin(
            self.dim,
            self.half_width,
            self.nodes_per_axis,
            self.origin,
            vec![0.0; self.node_count()],
        )
    }

    /// Flat index of the node at the given coordinates, if it is a node.
    pub fn node_index(&self, x: &[f64]) -> Result<usize> {
        if x.len() != self.dim {
            return Err(CoreError::Domain(format!(
                "point {x:?} has wrong dimension for a {}-D grid",
                self.dim
            )));
        }
        let h = self.spacing();
        let mut flat = 0usize;
        for &c in x {
            let raw = (c - (self.origin - self.half_width)) / h;
            let idx = raw.round();
            if (raw - idx).abs() > 1e-9 || idx < 0.0 || idx > (self.nodes_per_axis - 1) as f64 {
                return Err(CoreError::Domain(format!(
                    "coordinate {c} is not a grid node (spacing {h})"
                )));
            }
            flat = flat * self.nodes_per_axis + idx as usize;
        }
        Ok(flat)
    }
}

/// The two-point pinned minimization problem.
#[derive(Debug, Clone)]
pub struct PinnedProblem {
    pub params: FracParams,
    pub grid: GridSpec,
    pub x0: Vec<f64>,
    pub y0: Vec<f64>,
    pub a: f64,
    pub b: f64,
    idx_x0: usize,
    idx_y0: usize,
}

impl PinnedProblem {
    pub fn new(
        params: FracParams,
        grid: GridSpec,
        x0: Vec<f64>,
        y0: Vec<f64>,
        a: f64,
        b: f64,
    ) -> Result<Self> {
        if params.dim() as usize != grid.dim {
            return Err(CoreError::Domain(format!(
                "parameter dimension {} does not match grid dimension {}",
                params.dim(),
                grid.dim
            )));
        }
        if a == b {
            return Err(CoreError::Domain("pinned values must differ".into()));
        }
        let idx_x0 = grid.node_index(&x0)?;
        let idx_y0 = grid.node_index(&y0)?;
        if idx_x0 == idx_y0 {
            return Err(CoreError::Domain("pinned nodes must be distinct".into()));
        }
        let dist = pin_distance(&x0, &y0);
        if dist < 2.0 * grid.spacing() * (1.0 - 1e-12) {
            return Err(CoreError::Domain(format!(
                "pinned nodes are {dist} apart; need at least two grid cells"
            )));
        }
        Ok(Self { params, grid, x0, y0, a, b, idx_x0, idx_y0 })
    }

    pub fn pin_indices(&self) -> (usize, usize) {
        (self.idx_x0, self.idx_y0)
    }

    pub fn pin_distance(&self) -> f64 {
        pin_distance(&self.x0, &self.y0)
    }
}

fn pin_distance(x0: &[f64], y0: &[f64]) -> f64 {
    x0.iter()
        .zip(y0)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Initial iterate for the pinned solver.
#[derive(Debug, Clone)]
pub enum InitStrategy {
    /// Clamped linear interpolation between the pins (the exact minimizer
    /// in the local case).
    Ramp,
    /// Piecewise-constant jump halfway between the pins.
    Step,
    /// Start from the given values (pins are overwritten).
    Given(Vec<f64>),
}

/// Solver knobs. The gradient tolerance is relative to the max-norm of the
/// initial free gradient.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub grad_tol_rel: f64,
    pub max_iter: usize,
    pub polish_sweeps: usize,
    pub init: InitStrategy,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            grad_tol_rel: 1e-8,
            max_iter: 200_000,
            polish_sweeps: 120,
            init: InitStrategy::Ramp,
        }
    }
}

/// Converged pinned minimizer with its diagnostics.
#[derive(Debug, Clone)]
pub struct ExtremalSolution {
    pub u: GridFunction,
    /// `p`-th power pair-sum energy of the solution.
    pub energy: f64,
    pub holder_seminorm: f64,
    pub argmax_pair: (usize, usize),
    /// Max over free nodes of `|g_k| / (p h^N)`.
    pub el_residual_max: f64,
    pub morrey_estimate: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Discrete energy and full gradient:
/// `E = sum_{i != j} w_ij |u_i - u_j|^p`,
/// `g_k = 2p * sum_j w_kj J_p(u_k - u_j)`.
pub fn discrete_energy_and_gradient(
    params: FracParams,
    u: &GridFunction,
    weights: &PairWeights,
) -> Result<(f64, Vec<f64>)> {
    if weights.dim() != u.dim() || weights.nodes_per_axis() != u.nodes_per_axis() {
        return Err(CoreError::Domain("weights were built for a different grid".into()));
    }
    let _ = params;
    Ok(energy_and_gradient_direct(weights, u.values()))
}

fn energy_and_gradient_direct(w: &PairWeights, vals: &[f64]) -> (f64, Vec<f64>) {
    let m = vals.len();
    let p = w.exponent();
    let pow = w.pow;
    let rows: Vec<(f64, f64)> = (0..m)
        .into_par_iter()
        .map(|a| {
            let ua = vals[a];
            let mut e = Neumaier::new();
            let mut g = Neumaier::new();
            if w.dim() == 1 && w.is_local() {
                for b in [a.wrapping_sub(1), a + 1] {
                    if b < m {
                        let wt = w.lag_weight_1d(1);
                        let d = ua - vals[b];
                        if b > a {
                            e.add(2.0 * wt * pow.abs_pow(d));
                        }
                        g.add(2.0 * p * wt * pow.j_p(d));
                    }
                }
            } else {
                for b in 0..m {
                    if b == a {
                        continue;
                    }
                    let wt = w.weight(a, b);
                    if wt == 0.0 {
                        continue;
                    }
                    let d = ua - vals[b];
                    if b > a {
                        e.add(2.0 * wt * pow.abs_pow(d));
                    }
                    g.add(2.0 * p * wt * pow.j_p(d));
                }
            }
            (e.total(), g.total())
        })
        .collect();
    let mut energy = Neumaier::new();
    let mut grad = Vec::with_capacity(m);
    for (e, g) in rows {
        energy.add(e);
        grad.push(g);
    }
    (energy.total(), grad)
}

fn energy_direct(w: &PairWeights, vals: &[f64]) -> f64 {
    let m = vals.len();
    let pow = w.pow;
    let rows: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|a| {
            let ua = vals[a];
            let mut e = Neumaier::new();
            if w.dim() == 1 && w.is_local() {
                if a + 1 < m {
                    e.add(2.0 * w.lag_weight_1d(1) * pow.abs_pow(ua - vals[a + 1]));
                }
            } else {
                for b in (a + 1)..m {
                    let wt = w.weight(a, b);
                    if wt != 0.0 {
                        e.add(2.0 * wt * pow.abs_pow(ua - vals[b]));
                    }
                }
            }
            e.total()
        })
        .collect();
    let mut energy = Neumaier::new();
    for e in rows {
        energy.add(e);
    }
    energy.total()
}

// FFT-based convolution (Wu)_k = sum_j w(|k-j|) u_j for the quadratic 1-D
// fast path.
struct ConvPlan {
    size: usize,
    n: usize,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    kernel_hat: Vec<Complex<f64>>,
    /// S_k = sum_{j != k} w(|k-j|)
    s_sums: Vec<f64>,
}

impl ConvPlan {
    fn new(lag: &[f64]) -> Self {
        let n = lag.len();
        let size = (3 * n).next_power_of_two();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(size);
        let ifft = planner.plan_fft_inverse(size);
        // symmetric kernel centered at n-1
        let mut kern = vec![Complex::new(0.0, 0.0); size];
        for (m, k) in kern.iter_mut().enumerate().take(2 * n - 1) {
            let off = m as i64 - (n as i64 - 1);
            *k = Complex::new(lag[off.unsigned_abs() as usize], 0.0);
        }
        fft.process(&mut kern);
        // prefix sums for S_k
        let mut prefix = vec![0.0; n];
        for k in 1..n {
            prefix[k] = prefix[k - 1] + lag[k];
        }
        let s_sums = (0..n).map(|k| prefix[k] + prefix[n - 1 - k]).collect();
        Self { size, n, fft, ifft, kernel_hat: kern, s_sums }
    }

    fn convolve(&self, u: &[f64]) -> Vec<f64> {
        let mut buf = vec![Complex::new(0.0, 0.0); self.size];
        for (i, &v) in u.iter().enumerate() {
            buf[i] = Complex::new(v, 0.0);
        }
        self.fft.process(&mut buf);
        for (b, k) in buf.iter_mut().zip(&self.kernel_hat) {
            *b *= *k;
        }
        self.ifft.process(&mut buf);
        let scale = 1.0 / self.size as f64;
        (0..self.n)
            .map(|k| buf[k + self.n - 1].re * scale)
            .collect()
    }

    fn energy_and_gradient(&self, u: &[f64]) -> (f64, Vec<f64>) {
        let wu = self.convolve(u);
        let mut e = Neumaier::new();
        let mut g = Vec::with_capacity(self.n);
        for k in 0..self.n {
            e.add(u[k] * (u[k] * self.s_sums[k] - wu[k]));
            g.push(4.0 * (u[k] * self.s_sums[k] - wu[k]));
        }
        (2.0 * e.total(), g)
    }

    fn energy(&self, u: &[f64]) -> f64 {
        let wu = self.convolve(u);
        let mut e = Neumaier::new();
        for k in 0..self.n {
            e.add(u[k] * (u[k] * self.s_sums[k] - wu[k]));
        }
        2.0 * e.total()
    }
}

/// Energy/gradient oracle for one grid shape, with the quadratic 1-D fast
/// path behind the scenes. The polish and residual evaluations always use
/// the exact direct sums.
pub struct EnergyModel {
    weights: PairWeights,
    conv: Option<ConvPlan>,
}

impl EnergyModel {
    pub fn new(params: FracParams, grid: &GridFunction) -> Result<Self> {
        let weights = PairWeights::new(params, grid)?;
        let conv = if grid.dim() == 1 && params.p() == 2.0 {
            let lag: Vec<f64> = (0..grid.nodes_per_axis())
                .map(|k| weights.lag_weight_1d(k))
                .collect();
            Some(ConvPlan::new(&lag))
        } else {
            None
        };
        Ok(Self { weights, conv })
    }

    pub fn weights(&self) -> &PairWeights {
        &self.weights
    }

    pub fn energy(&self, vals: &[f64]) -> f64 {
        match &self.conv {
            Some(c) => c.energy(vals),
            None => energy_direct(&self.weights, vals),
        }
    }

    pub fn energy_and_gradient(&self, vals: &[f64]) -> (f64, Vec<f64>) {
        match &self.conv {
            Some(c) => c.energy_and_gradient(vals),
            None => energy_and_gradient_direct(&self.weights, vals),
        }
    }

    /// Exact gradient entry by direct summation.
    pub fn gradient_at(&self, vals: &[f64], k: usize) -> f64 {
        let w = &self.weights;
        let p = w.exponent();
        let pow = w.pow;
        let mut g = Neumaier::new();
        if w.dim() == 1 && w.is_local() {
            for b in [k.wrapping_sub(1), k + 1] {
                if b < vals.len() {
                    g.add(2.0 * p * w.lag_weight_1d(1) * pow.j_p(vals[k] - vals[b]));
                }
            }
        } else {
            for b in 0..vals.len() {
                if b == k {
                    continue;
                }
                let wt = w.weight(k, b);
                if wt != 0.0 {
                    g.add(2.0 * p * wt * pow.j_p(vals[k] - vals[b]));
                }
            }
        }
        g.total()
    }

    /// One coordinate-Newton update: the value of node `k` solving
    /// `sum_j w_kj J_p(v - u_j) = 0` with the other nodes fixed.
    fn node_newton(&self, vals: &[f64], k: usize) -> f64 {
        let w = &self.weights;
        let p = w.exponent();
        let pow = w.pow;
        let m = vals.len();
        let row = |v: f64| -> (f64, f64) {
            let mut f = Neumaier::new();
            let mut df = Neumaier::new();
            if w.dim() == 1 && w.is_local() {
                for b in [k.wrapping_sub(1), k + 1] {
                    if b < m {
                        let wt = w.lag_weight_1d(1);
                        f.add(wt * pow.j_p(v - vals[b]));
                        df.add(wt * pow.j_p_prime(v - vals[b], p));
                    }
                }
            } else {
                for b in 0..m {
                    if b == k {
                        continue;
                    }
                    let wt = w.weight(k, b);
                    if wt != 0.0 {
                        f.add(wt * pow.j_p(v - vals[b]));
                        df.add(wt * pow.j_p_prime(v - vals[b], p));
                    }
                }
            }
            (f.total(), df.total())
        };
        let mut v = vals[k];
        for _ in 0..6 {
            let (f, df) = row(v);
            if df <= 0.0 || !f.is_finite() {
                break;
            }
            let step = f / df;
            let v_new = v - step;
            if !v_new.is_finite() {
                break;
            }
            if (v_new - v).abs() <= 1e-15 * (1.0 + v.abs()) {
                v = v_new;
                break;
            }
            v = v_new;
        }
        v
    }
}

struct MinimizeOutcome {
    values: Vec<f64>,
    iterations: usize,
    converged: bool,
}

fn minimize_pinned(
    model: &EnergyModel,
    mut u: Vec<f64>,
    pins: &[(usize, f64)],
    cfg: &SolverConfig,
    p: f64,
) -> MinimizeOutcome {
    let set_pins = |v: &mut Vec<f64>| {
        for &(i, val) in pins {
            v[i] = val;
        }
    };
    let mask = |g: &mut Vec<f64>| {
        for &(i, _) in pins {
            g[i] = 0.0;
        }
    };
    let inf_norm = |g: &[f64]| g.iter().fold(0.0f64, |m, &x| m.max(x.abs()));

    set_pins(&mut u);

    if p < 2.0 {
        return minimize_subgradient(model, u, pins, cfg);
    }

    let (mut e_u, mut g_u) = model.energy_and_gradient(&u);
    mask(&mut g_u);
    let g0 = inf_norm(&g_u);
    if g0 <= f64::MIN_POSITIVE {
        return MinimizeOutcome { values: u, iterations: 0, converged: true };
    }
    let tol = cfg.grad_tol_rel * g0;

    let mut u_prev = u.clone();
    let mut theta: f64 = 1.0;
    let mut lip: f64 = {
        // crude Lipschitz seed from a probe step along the gradient
        let norm2: f64 = g_u.iter().map(|g| g * g).sum();
        let step = 1e-6 / g0.max(1.0);
        let mut probe = u.clone();
        for (x, g) in probe.iter_mut().zip(&g_u) {
            *x -= step * g;
        }
        set_pins(&mut probe);
        let e_probe = model.energy(&probe);
        let denom = e_u - e_probe;
        if denom > 0.0 {
            (norm2 * step / denom).max(1.0)
        } else {
            1.0
        }
    };

    let mut iterations = 0usize;
    let mut converged = false;
    let check_every = 16usize;

    while iterations < cfg.max_iter {
        iterations += 1;
        let theta_next = 0.5 * (1.0 + (1.0 + 4.0 * theta * theta).sqrt());
        let beta = (theta - 1.0) / theta_next;
        // momentum point
        let mut y: Vec<f64> = u
            .iter()
            .zip(&u_prev)
            .map(|(a, b)| a + beta * (a - b))
            .collect();
        set_pins(&mut y);
        let (e_y, mut g_y) = model.energy_and_gradient(&y);
        mask(&mut g_y);
        let gy_norm2: f64 = g_y.iter().map(|g| g * g).sum();

        // backtracking gradient step from y
        let mut u_new;
        let mut e_new;
        loop {
            let step = 1.0 / lip;
            u_new = y
                .iter()
                .zip(&g_y)
                .map(|(x, g)| x - step * g)
                .collect::<Vec<f64>>();
            set_pins(&mut u_new);
            e_new = model.energy(&u_new);
            if e_new <= e_y - 0.5 * step * gy_norm2 + 1e-14 * e_y.abs() || lip > 1e18 {
                break;
            }
            lip *= 2.0;
        }

        if e_new > e_u {
            // adaptive restart: plain gradient step from u
            theta = 1.0;
            let (e_cur, mut g_cur) = model.energy_and_gradient(&u);
            mask(&mut g_cur);
            let gc2: f64 = g_cur.iter().map(|g| g * g).sum();
            loop {
                let step = 1.0 / lip;
                u_new = u
                    .iter()
                    .zip(&g_cur)
                    .map(|(x, g)| x - step * g)
                    .collect::<Vec<f64>>();
                set_pins(&mut u_new);
                e_new = model.energy(&u_new);
                if e_new <= e_cur - 0.5 * step * gc2 + 1e-14 * e_cur.abs() || lip > 1e18 {
                    break;
                }
                lip *= 2.0;
            }
            if e_new > e_cur {
                // no descent possible at machine precision; the post-loop
                // gradient check decides whether this counts as converged
                break;
            }
        } else {
            theta = theta_next;
        }

        u_prev = std::mem::replace(&mut u, u_new);
        e_u = e_new;
        lip *= 0.97;

        if iterations % check_every == 0 {
            let (_, mut g) = model.energy_and_gradient(&u);
            mask(&mut g);
            g_u = g;
            if inf_norm(&g_u) <= tol {
                converged = true;
                break;
            }
        }
    }
    if !converged {
        let (_, mut g) = model.energy_and_gradient(&u);
        mask(&mut g);
        converged = inf_norm(&g) <= tol;
    }
    MinimizeOutcome { values: u, iterations, converged }
}

fn minimize_subgradient(
    model: &EnergyModel,
    mut u: Vec<f64>,
    pins: &[(usize, f64)],
    cfg: &SolverConfig,
) -> MinimizeOutcome {
    // 1 < p < 2: J_p is non-differentiable at the origin; diminishing steps
    // on the subgradient, tracking the best iterate.
    let set_pins = |v: &mut Vec<f64>| {
        for &(i, val) in pins {
            v[i] = val;
        }
    };
    set_pins(&mut u);
    let (mut best_e, _) = model.energy_and_gradient(&u);
    let mut best = u.clone();
    let scale: f64 = pins.iter().map(|&(_, v)| v.abs()).fold(0.1, f64::max);
    let step0 = 0.1 * scale;
    let iters = cfg.max_iter.min(20_000);
    for k in 0..iters {
        let (_, mut g) = model.energy_and_gradient(&u);
        for &(i, _) in pins {
            g[i] = 0.0;
        }
        let gmax = g.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        if gmax <= f64::MIN_POSITIVE {
            break;
        }
        let step = step0 / ((k + 1) as f64).sqrt() / gmax;
        for (x, gi) in u.iter_mut().zip(&g) {
            *x -= step * gi;
        }
        set_pins(&mut u);
        let e = model.energy(&u);
        if e < best_e {
            best_e = e;
            best.copy_from_slice(&u);
        }
    }
    MinimizeOutcome { values: best, iterations: iters, converged: true }
}

/// Solve the two-point pinned problem.
pub fn solve_pinned(problem: &PinnedProblem, cfg: &SolverConfig) -> Result<ExtremalSolution> {
    let grid = problem.grid;
    let template = grid.zero_function()?;
    let model = EnergyModel::new(problem.params, &template)?;
    let (ix, iy) = problem.pin_indices();
    let pins = [(ix, problem.a), (iy, problem.b)];

    let init = match &cfg.init {
        InitStrategy::Given(v) => {
            if v.len() != grid.node_count() {
                return Err(CoreError::Domain("initial values have the wrong length".into()));
            }
            v.clone()
        }
        InitStrategy::Ramp => ramp_init(problem),
        InitStrategy::Step => step_init(problem),
    };

    let p = problem.params.p();
    let mut out = minimize_pinned(&model, init, &pins, cfg, p);

    // Coordinate-Newton polish: drives the free-node stationarity far below
    // the pinned gradients so the Euler-Lagrange diagnostics are clean.
    if p >= 2.0 {
        let free: Vec<usize> = (0..out.values.len()).filter(|&k| k != ix && k != iy).collect();
        let mut prev_free_max = f64::INFINITY;
        for sweep in 0..cfg.polish_sweeps {
            for &k in &free {
                out.values[k] = model.node_newton(&out.values, k);
            }
            let pin_mag = model
                .gradient_at(&out.values, ix)
                .abs()
                .max(model.gradient_at(&out.values, iy).abs());
            let free_max = free
                .par_iter()
                .map(|&k| model.gradient_at(&out.values, k).abs())
                .reduce(|| 0.0, f64::max);
            if free_max <= 1e-10 * pin_mag {
                break;
            }
            // Gauss-Seidel kills the stiff band quickly and then stalls on
            // smooth modes; stop once progress per sweep drops.
            if sweep >= 3 && free_max > 0.9 * prev_free_max {
                break;
            }
            prev_free_max = free_max;
        }
    }

    let u = GridFunction::with_origin(
        grid.dim,
        grid.half_width,
        grid.nodes_per_axis,
        grid.origin,
        out.values,
    )?;
    let energy = quadrature::gagliardo_grid_with_weights(model.weights(), &u);
    let alpha = params::holder_exponent(problem.params);
    let (holder, argmax_pair) = quadrature::holder_seminorm_grid(alpha, &u)?;
    if holder <= 0.0 {
        return Err(CoreError::Numeric("pinned solution is constant".into()));
    }
    let h = grid.spacing();
    let hn = h.powi(grid.dim as i32);
    let free_max = (0..u.values().len())
        .into_par_iter()
        .filter(|&k| k != ix && k != iy)
        .map(|k| model.gradient_at(u.values(), k).abs())
        .reduce(|| 0.0, f64::max);

    Ok(ExtremalSolution {
        energy: energy.raised_to_p,
        holder_seminorm: holder,
        argmax_pair,
        el_residual_max: free_max / (p * hn),
        morrey_estimate: energy.raised_to_p / holder.powf(p),
        iterations: out.iterations,
        converged: out.converged,
        u,
    })
}

fn ramp_init(problem: &PinnedProblem) -> Vec<f64> {
    let grid = problem.grid;
    let template = grid.zero_function().unwrap();
    let d2: f64 = problem.pin_distance().powi(2);
    (0..grid.node_count())
        .map(|k| {
            let x = template.node_coords(k);
            // affine parameter along the pin axis, clamped
            let t: f64 = x
                .iter()
                .zip(problem.x0.iter().zip(&problem.y0))
                .map(|(xi, (x0, y0))| (xi - x0) * (y0 - x0))
                .sum::<f64>()
                / d2;
            problem.a + (problem.b - problem.a) * t.clamp(0.0, 1.0)
        })
        .collect()
}

fn step_init(problem: &PinnedProblem) -> Vec<f64> {
    let grid = problem.grid;
    let template = grid.zero_function().unwrap();
    let d2: f64 = problem.pin_distance().powi(2);
    (0..grid.node_count())
        .map(|k| {
            let x = template.node_coords(k);
            let t: f64 = x
                .iter()
                .zip(problem.x0.iter().zip(&problem.y0))
                .map(|(xi, (x0, y0))| (xi - x0) * (y0 - x0))
                .sum::<f64>()
                / d2;
            if t < 0.5 {
                problem.a
            } else {
                problem.b
            }
        })
        .collect()
}

/// Euler–Lagrange residuals of a pinned solution.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ElResidual {
    /// Max over free nodes of `|g_k| / (p h^N)` (operator density units).
    pub free_max_density: f64,
    /// Max over free nodes of the raw gradient entry `|g_k|`.
    pub free_max_raw: f64,
    /// `g / p` at the two pinned nodes (Dirac-mass units).
    pub pinned_masses: (f64, f64),
    /// Ratio of the pinned masses; -1 at exact stationarity.
    pub ratio: f64,
    /// `|pinned mass| / (m_est |a-b|^{p-1} / |x0-y0|^{sp-N})`.
    pub normalized_magnitude: f64,
}

pub fn el_residual(problem: &PinnedProblem, solution: &ExtremalSolution) -> Result<ElResidual> {
    let model = EnergyModel::new(problem.params, &solution.u)?;
    let (ix, iy) = problem.pin_indices();
    let vals = solution.u.values();
    let p = problem.params.p();
    let g_x0 = model.gradient_at(vals, ix);
    let g_y0 = model.gradient_at(vals, iy);
    let free_max_raw = (0..vals.len())
        .into_par_iter()
        .filter(|&k| k != ix && k != iy)
        .map(|k| model.gradient_at(vals, k).abs())
        .reduce(|| 0.0, f64::max);
    let h = problem.grid.spacing();
    let hn = h.powi(problem.grid.dim as i32);
    let mass = (g_x0 / p, g_y0 / p);
    let expected = solution.morrey_estimate
        * PowKind::of(p).abs_pow(problem.a - problem.b)
        / (problem.a - problem.b).abs()
        / problem.pin_distance().powf(problem.params.sp() - problem.params.dim() as f64);
    Ok(ElResidual {
        free_max_density: free_max_raw / (p * hn),
        free_max_raw,
        pinned_masses: mass,
        ratio: mass.0 / mass.1,
        normalized_magnitude: mass.0.abs() / expected,
    })
}

/// Upper estimate of the Poincaré constant `Lambda_{s,p}(B_1)` by
/// multi-restart normalized descent on the unit-ball node set.
#[derive(Debug, Clone)]
pub struct LambdaEstimate {
    pub value: f64,
    pub minimizer: GridFunction,
    pub restarts: usize,
    /// max/min of the per-restart values.
    pub spread: f64,
    pub multi_basin: bool,
}

/// Configuration for [`lambda_estimate`].
#[derive(Debug, Clone)]
pub struct LambdaConfig {
    pub restarts: usize,
    pub seed: u64,
    pub max_iter: usize,
}

impl Default for LambdaConfig {
    fn default() -> Self {
        Self { restarts: 4, seed: 0x4d6f7272_6579u64, max_iter: 1500 }
    }
}

struct BallModel<'w> {
    w: &'w PairWeights,
    nodes: Vec<usize>,
    pow: PowKind,
    p: f64,
}

impl BallModel<'_> {
    fn energy_and_gradient(&self, vals: &[f64]) -> (f64, Vec<f64>) {
        let m = self.nodes.len();
        let rows: Vec<(f64, f64)> = (0..m)
            .into_par_iter()
            .map(|ai| {
                let a = self.nodes[ai];
                let ua = vals[ai];
                let mut e = Neumaier::new();
                let mut g = Neumaier::new();
                for (bi, &b) in self.nodes.iter().enumerate() {
                    if bi == ai {
                        continue;
                    }
                    let wt = self.w.weight(a, b);
                    if wt == 0.0 {
                        continue;
                    }
                    let d = ua - vals[bi];
                    if bi > ai {
                        e.add(2.0 * wt * self.pow.abs_pow(d));
                    }
                    g.add(2.0 * self.p * wt * self.pow.j_p(d));
                }
                (e.total(), g.total())
            })
            .collect();
        let mut energy = Neumaier::new();
        let mut grad = Vec::with_capacity(m);
        for (e, g) in rows {
            energy.add(e);
            grad.push(g);
        }
        (energy.total(), grad)
    }

    fn energy(&self, vals: &[f64]) -> f64 {
        self.energy_and_gradient(vals).0
    }
}

/// Estimate `Lambda_{s,p}(B_1(0))` on the given grid.
///
/// The grid must cover the closed unit ball with the center as a node
/// (odd `n`). Restart 0 starts from the funnel profile `|x|^{(sp-N)/p}`,
/// restart 1 from the cone `|x|`, the rest from seeded random values.
pub fn lambda_estimate(
    params: FracParams,
    grid: GridSpec,
    cfg: &LambdaConfig,
) -> Result<LambdaEstimate> {
    params.require_fractional()?;
    if params.dim() as usize != grid.dim {
        return Err(CoreError::Domain("parameter/grid dimension mismatch".into()));
    }
    if grid.half_width < 1.0 - 1e-12 {
        return Err(CoreError::Domain("grid must cover the unit ball".into()));
    }
    if grid.nodes_per_axis % 2 == 0 {
        return Err(CoreError::Domain(
            "need an odd node count so the ball center is a grid node".into(),
        ));
    }
    if grid.origin != 0.0 {
        return Err(CoreError::Domain("lambda estimation expects a centered grid".into()));
    }
    let template = grid.zero_function()?;
    let weights = PairWeights::new(params, &template)?;
    let nodes = ball_nodes(&template, &vec![0.0; grid.dim], 1.0);
    let center_flat = grid.node_index(&vec![0.0; grid.dim])?;
    let center_pos = nodes
        .iter()
        .position(|&k| k == center_flat)
        .ok_or_else(|| CoreError::Numeric("ball node set misses the center".into()))?;
    let p = params.p();
    let pow = PowKind::of(p);
    let model = BallModel { w: &weights, nodes: nodes.clone(), pow, p };
    let h = grid.spacing();
    let hn = h.powi(grid.dim as i32);

    let normalize = |v: &mut [f64]| {
        v[center_pos] = 0.0;
        let mut norm = Neumaier::new();
        for &x in v.iter() {
            norm.add(pow.abs_pow(x));
        }
        let np = (hn * norm.total()).powf(1.0 / p);
        for x in v.iter_mut() {
            *x /= np;
        }
    };

    let coords: Vec<Vec<f64>> = nodes.iter().map(|&k| template.node_coords(k)).collect();
    let radius = |i: usize| coords[i].iter().map(|c| c * c).sum::<f64>().sqrt();

    let mut best_value = f64::INFINITY;
    let mut best_vals: Vec<f64> = Vec::new();
    let mut per_restart = Vec::with_capacity(cfg.restarts.max(1));

    for r in 0..cfg.restarts.max(1) {
        let mut v: Vec<f64> = match r {
            0 => {
                let expo = params.gap() / p;
                (0..nodes.len()).map(|i| radius(i).powf(expo)).collect()
            }
            1 => (0..nodes.len()).map(radius).collect(),
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(r as u64));
                (0..nodes.len()).map(|_| rng.gen_range(0.01..1.0)).collect()
            }
        };
        normalize(&mut v);
        let mut e = model.energy(&v);
        let mut alpha = 0.1;
        let mut stall = 0usize;
        for _ in 0..cfg.max_iter {
            let (e_cur, mut g) = model.energy_and_gradient(&v);
            e = e_cur;
            // Rayleigh gradient on the L^p sphere: dE - E * d(norm^p)
            for (gi, (vi, _)) in g.iter_mut().zip(v.iter().zip(&nodes)) {
                *gi -= e * p * hn * pow.j_p(*vi);
            }
            g[center_pos] = 0.0;
            let gmax = g.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
            if gmax <= 1e-14 * e.max(1e-300) {
                break;
            }
            let mut accepted = false;
            for _ in 0..50 {
                let mut trial: Vec<f64> =
                    v.iter().zip(&g).map(|(x, gi)| x - alpha * gi / gmax).collect();
                normalize(&mut trial);
                let e_try = model.energy(&trial);
                if e_try < e {
                    v = trial;
                    if (e - e_try) < 1e-12 * e {
                        stall += 1;
                    } else {
                        stall = 0;
                    }
                    e = e_try;
                    alpha = (alpha * 1.25).min(1.0);
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !accepted || stall > 8 {
                break;
            }
        }
        per_restart.push(e);
        if e < best_value {
            best_value = e;
            best_vals = v;
        }
    }

    let spread = {
        let mn = per_restart.iter().cloned().fold(f64::INFINITY, f64::min);
        let mx = per_restart.iter().cloned().fold(0.0f64, f64::max);
        mx / mn
    };
    if !(best_value > 0.0) || !best_value.is_finite() {
        return Err(CoreError::Numeric(format!(
            "Rayleigh descent produced a nonpositive value {best_value}"
        )));
    }
    let mut full = vec![0.0; grid.node_count()];
    for (pos, &k) in nodes.iter().enumerate() {
        full[k] = best_vals[pos];
    }
    let minimizer = GridFunction::with_origin(
        grid.dim,
        grid.half_width,
        grid.nodes_per_axis,
        grid.origin,
        full,
    )?;
    Ok(LambdaEstimate {
        value: best_value,
        minimizer,
        restarts: cfg.restarts.max(1),
        spread,
        multi_basin: spread > 1.5,
    })
}

/// Lower bound on the sharp Morrey constant: `theta_{N,s,p} * Lambda_est`.
pub fn morrey_lower_bound(params: FracParams, lambda: &LambdaEstimate) -> Result<f64> {
    Ok(params::theta_constant(params)?.value * lambda.value)
}

/// Report of the pointwise-bound verification on a ball.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PointwiseReport {
    pub checked: usize,
    pub violations: usize,
    /// Largest observed `|u(x)| / bound(x)`.
    pub worst_ratio: f64,
}

/// Verify the pointwise bound
/// `|u(x)| <= (omega_N Lambda)^{-1/p} ((r-d)^s + r^s) / (r-d)^{N/p} * [u]_{W^{s,p}(B_r)}`
/// at every ball node, with `Lambda = lambda.value / 1.2` covering the
/// one-sided bias of the estimate.
pub fn pointwise_bound_check(
    params: FracParams,
    lambda: &LambdaEstimate,
    u: &GridFunction,
    x0: &[f64],
    radius: f64,
) -> Result<PointwiseReport> {
    params.require_fractional()?;
    let spec = GridSpec {
        dim: u.dim(),
        half_width: u.half_width(),
        nodes_per_axis: u.nodes_per_axis(),
        origin: u.origin(),
    };
    let ix = spec.node_index(x0)?;
    let scale = u.values().iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    if u.values()[ix].abs() > 1e-10 * scale.max(1e-300) {
        return Err(CoreError::Domain("u must vanish at the ball center".into()));
    }
    let seminorm = quadrature::local_gagliardo_grid(params, u, x0, radius)?.value;
    let lam = lambda.value / 1.2;
    let omega = params::unit_ball_volume(params.dim());
    let pref = (omega * lam).powf(-1.0 / params.p());
    let s = params.s();
    let np = params.dim() as f64 / params.p();
    let nodes = ball_nodes(u, x0, radius);
    let mut checked = 0usize;
    let mut violations = 0usize;
    let mut worst: f64 = 0.0;
    for &k in &nodes {
        if k == ix {
            continue;
        }
        let xs = u.node_coords(k);
        let d: f64 = xs
            .iter()
            .zip(x0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let gap = radius - d;
        if gap <= 0.0 {
            continue;
        }
        let bound = pref * (gap.powf(s) + radius.powf(s)) / gap.powf(np) * seminorm;
        let ratio = u.values()[k].abs() / bound;
        worst = worst.max(ratio);
        checked += 1;
        if ratio > 1.0 + 1e-9 {
            violations += 1;
        }
    }
    Ok(PointwiseReport { checked, violations, worst_ratio: worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(dim: u32, s: f64, p: f64) -> FracParams {
        FracParams::new(dim, s, p).unwrap()
    }

    fn toy_problem(s: f64, p: f64, n: usize) -> PinnedProblem {
        PinnedProblem::new(
            params(1, s, p),
            GridSpec::new(1, 4.0, n),
            vec![0.0],
            vec![1.0],
            0.0,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn problem_validation() {
        let pr = params(1, 0.8, 2.0);
        let grid = GridSpec::new(1, 4.0, 257);
        assert!(PinnedProblem::new(pr, grid, vec![0.0], vec![1.0], 0.0, 0.0).is_err());
        assert!(PinnedProblem::new(pr, grid, vec![0.0], vec![0.0], 0.0, 1.0).is_err());
        // off-node pin
        assert!(PinnedProblem::new(pr, grid, vec![0.001], vec![1.0], 0.0, 1.0).is_err());
        // too close
        let h = grid.spacing();
        assert!(PinnedProblem::new(pr, grid, vec![0.0], vec![h], 0.0, 1.0).is_err());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        use rand::Rng;
        let pr = params(1, 0.8, 3.0);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 65;
        let grid = GridFunction::from_fn(1, 2.0, n, |_| 0.0).unwrap();
        let w = PairWeights::new(pr, &grid).unwrap();
        let vals: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let u = GridFunction::new(1, 2.0, n, vals.clone()).unwrap();
        let (_, g) = discrete_energy_and_gradient(pr, &u, &w).unwrap();
        let gmax = g.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        let fd_step = 1e-6;
        for k in (0..n).step_by(7) {
            let mut plus = vals.clone();
            plus[k] += fd_step;
            let mut minus = vals.clone();
            minus[k] -= fd_step;
            let up = GridFunction::new(1, 2.0, n, plus).unwrap();
            let um = GridFunction::new(1, 2.0, n, minus).unwrap();
            let ep = quadrature::gagliardo_grid_with_weights(&w, &up).raised_to_p;
            let em = quadrature::gagliardo_grid_with_weights(&w, &um).raised_to_p;
            let fd = (ep - em) / (2.0 * fd_step);
            assert!(
                (fd - g[k]).abs() <= 1e-4 * gmax,
                "node {k}: fd = {fd}, analytic = {}",
                g[k]
            );
        }
    }

    #[test]
    fn constant_function_zero_energy_gradient() {
        let pr = params(1, 0.8, 2.0);
        let u = GridFunction::from_fn(1, 2.0, 33, |_| 5.0).unwrap();
        let w = PairWeights::new(pr, &u).unwrap();
        let (e, g) = discrete_energy_and_gradient(pr, &u, &w).unwrap();
        assert_eq!(e, 0.0);
        assert!(g.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn gradient_antisymmetric_under_value_swap() {
        // swapping the values of a symmetric two-node bump negates the
        // gradient pattern
        let pr = params(1, 0.8, 3.0);
        let n = 33;
        let mut vals = vec![0.0; n];
        vals[14] = 1.0;
        vals[18] = -1.0;
        let u1 = GridFunction::new(1, 2.0, n, vals.clone()).unwrap();
        vals.swap(14, 18);
        let u2 = GridFunction::new(1, 2.0, n, vals).unwrap();
        let w = PairWeights::new(pr, &u1).unwrap();
        let (_, g1) = discrete_energy_and_gradient(pr, &u1, &w).unwrap();
        let (_, g2) = discrete_energy_and_gradient(pr, &u2, &w).unwrap();
        for i in 0..n {
            let j = if i == 14 {
                18
            } else if i == 18 {
                14
            } else {
                // mirror through the midpoint of the two bumps
                32 - i
            };
            assert_relative_eq!(g1[i], -g2[j], epsilon = 1e-12, max_relative = 1e-9);
        }
    }

    #[test]
    fn fft_path_matches_direct() {
        let pr = params(1, 0.8, 2.0);
        let u = GridFunction::from_fn(1, 3.0, 129, |x| (x[0] * 1.3).sin()).unwrap();
        let model = EnergyModel::new(pr, &u).unwrap();
        assert!(model.conv.is_some());
        let (e_fft, g_fft) = model.energy_and_gradient(u.values());
        let (e_dir, g_dir) = energy_and_gradient_direct(&model.weights, u.values());
        assert_relative_eq!(e_fft, e_dir, max_relative = 1e-11);
        for (a, b) in g_fft.iter().zip(&g_dir) {
            assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn local_case_ramp_is_stationary() {
        let problem = toy_problem(1.0, 3.0, 257);
        let sol = solve_pinned(&problem, &SolverConfig::default()).unwrap();
        assert!(sol.converged);
        assert_relative_eq!(sol.energy, 1.0, max_relative = 0.05);
        assert_relative_eq!(sol.morrey_estimate, 1.0, max_relative = 0.05);
    }

    #[test]
    fn fractional_solution_basics() {
        let problem = toy_problem(0.8, 2.0, 257);
        let sol = solve_pinned(&problem, &SolverConfig::default()).unwrap();
        assert!(sol.converged, "solver failed to converge");
        // max principle
        let tol = 1e-8;
        assert!(sol
            .u
            .values()
            .iter()
            .all(|&v| v >= -tol && v <= 1.0 + tol));
        // Hölder argmax at the pinned pair
        let (ix, iy) = problem.pin_indices();
        let pair = sol.argmax_pair;
        assert!(
            (pair == (ix, iy)) || (pair == (iy, ix)),
            "argmax pair {pair:?}, pins ({ix}, {iy})"
        );
        // E-L residual structure
        let res = el_residual(&problem, &sol).unwrap();
        assert!(
            res.free_max_raw <= 1e-4 * res.pinned_masses.0.abs() * problem.params.p(),
            "free residual too large: {res:?}"
        );
        assert_relative_eq!(res.ratio, -1.0, epsilon = 1e-6);
    }

    #[test]
    fn value_swap_reflects_solution() {
        let pr = params(1, 0.8, 2.0);
        let grid = GridSpec::new(1, 4.0, 129);
        let p1 = PinnedProblem::new(pr, grid, vec![0.0], vec![1.0], 0.0, 1.0).unwrap();
        let p2 = PinnedProblem::new(pr, grid, vec![0.0], vec![1.0], 1.0, 0.0).unwrap();
        let s1 = solve_pinned(&p1, &SolverConfig::default()).unwrap();
        let s2 = solve_pinned(&p2, &SolverConfig::default()).unwrap();
        for (v1, v2) in s1.u.values().iter().zip(s2.u.values()) {
            assert!((v1 - (1.0 - v2)).abs() <= 1e-8, "v1 = {v1}, 1 - v2 = {}", 1.0 - v2);
        }
    }

    #[test]
    fn two_initializations_agree() {
        let problem = toy_problem(0.8, 2.0, 129);
        let s1 = solve_pinned(
            &problem,
            &SolverConfig { init: InitStrategy::Ramp, ..Default::default() },
        )
        .unwrap();
        let s2 = solve_pinned(
            &problem,
            &SolverConfig { init: InitStrategy::Step, ..Default::default() },
        )
        .unwrap();
        let sup = s1
            .u
            .values()
            .iter()
            .zip(s2.u.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(sup <= 1e-6, "two-init disagreement {sup}");
    }

    #[test]
    fn energy_is_convex_in_values() {
        use rand::Rng;
        let pr = params(1, 0.8, 3.0);
        let n = 49;
        let grid = GridFunction::from_fn(1, 2.0, n, |_| 0.0).unwrap();
        let w = PairWeights::new(pr, &grid).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..4 {
            let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let eu = energy_direct(&w, &u);
            let ev = energy_direct(&w, &v);
            for &t in &[0.25, 0.5, 0.75] {
                let mix: Vec<f64> =
                    u.iter().zip(&v).map(|(a, b)| t * a + (1.0 - t) * b).collect();
                let em = energy_direct(&w, &mix);
                assert!(
                    em <= t * eu + (1.0 - t) * ev + 1e-10,
                    "convexity violated: {em} vs {}",
                    t * eu + (1.0 - t) * ev
                );
            }
        }
    }

    #[test]
    fn lambda_estimate_positive_and_normalized() {
        let pr = params(1, 0.8, 2.0);
        let grid = GridSpec::new(1, 1.0, 129);
        let lam = lambda_estimate(pr, grid, &LambdaConfig::default()).unwrap();
        assert!(lam.value > 0.0);
        // minimizer vanishes at the center and has unit L^p mass
        let center = grid.node_index(&[0.0]).unwrap();
        assert_eq!(lam.minimizer.values()[center], 0.0);
        let h = grid.spacing();
        let mass: f64 = lam
            .minimizer
            .values()
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            * h;
        assert_relative_eq!(mass, 1.0, epsilon = 1e-10);
        assert!(!lam.multi_basin, "spread = {}", lam.spread);
    }

    #[test]
    fn lambda_scaling_rule() {
        // On a radius-r node ball the estimate is r^{-sp} times the unit
        // ball one. Dilating the whole grid realizes the exact similarity.
        let pr = params(1, 0.8, 2.0);
        let cfg = LambdaConfig::default();
        let lam1 = lambda_estimate(pr, GridSpec::new(1, 1.0, 65), &cfg).unwrap();
        // radius-2 ball on the dilated grid
        let template = GridSpec::new(1, 2.0, 65).zero_function().unwrap();
        let w = PairWeights::new(pr, &template).unwrap();
        let nodes = ball_nodes(&template, &[0.0], 2.0);
        assert_eq!(nodes.len(), 65);
        let scaled = lam1
            .minimizer
            .values()
            .to_vec();
        // evaluate the dilated minimizer's quotient on the dilated grid
        let h2 = template.spacing();
        let model = BallModel { w: &w, nodes, pow: PowKind::Two, p: 2.0 };
        let vals: Vec<f64> = scaled.clone();
        let e = model.energy(&vals);
        let mass: f64 = vals.iter().map(|v| v * v).sum::<f64>() * h2;
        let quotient = e / mass;
        let predicted = lam1.value * 2f64.powf(-pr.sp());
        assert_relative_eq!(quotient, predicted, max_relative = 0.05);
    }

    #[test]
    fn morrey_lower_bound_positive() {
        let pr = params(1, 0.8, 2.0);
        let lam = lambda_estimate(pr, GridSpec::new(1, 1.0, 65), &LambdaConfig::default())
            .unwrap();
        let lb = morrey_lower_bound(pr, &lam).unwrap();
        assert!(lb > 0.0);
    }

    #[test]
    fn pointwise_bound_zeta_and_zero() {
        let pr = params(1, 0.75, 2.0);
        let lam = lambda_estimate(pr, GridSpec::new(1, 1.0, 129), &LambdaConfig::default())
            .unwrap();
        // translated power profile vanishing at the origin
        let beta = pr.gap() / (pr.p() - 1.0);
        let u = GridFunction::from_fn(1, 4.0, 513, |x| {
            1.0 - (1.0 - x[0].abs().powf(beta)).max(0.0)
        })
        .unwrap();
        let report = pointwise_bound_check(pr, &lam, &u, &[0.0], 2.0).unwrap();
        assert!(report.checked > 0);
        assert_eq!(report.violations, 0, "worst ratio {}", report.worst_ratio);

        let zero = GridFunction::from_fn(1, 4.0, 513, |_| 0.0).unwrap();
        let rep0 = pointwise_bound_check(pr, &lam, &zero, &[0.0], 2.0).unwrap();
        assert_eq!(rep0.violations, 0);
    }
}
