//! Asymptotic sweeps for the sharp constant and their rate fits.
//!
//! Three regimes are verified at desk scale:
//!
//! * `s` descending to `N/p` — both the lower bound `theta * Lambda` and the
//!   power-profile upper bound decay like `(sp - N)^{p-1}`;
//! * `p` growing to infinity — both `(theta * Lambda)^{1/p}` and the
//!   smoothed-cone upper bound to the power `1/p` approach 1;
//! * `s` increasing to 1 — `(1-s)` times the pinned-solution estimate
//!   approaches `K_{p,N} * m_{1,p}`, and `(1-s)`-scaled Gagliardo energies
//!   approach `K_{p,N}` times the gradient energy.

use crate::error::CoreError;
use crate::extremal::{
    lambda_estimate, solve_pinned, GridSpec, LambdaConfig, PinnedProblem, SolverConfig,
};
use crate::params::{self, FracParams};
use crate::quadrature::{self, GridFunction};
use crate::trial::{self, TrialFunction, TrialKind};
use crate::Result;
use serde::{Deserialize, Serialize};

/// The asymptotic regime a sweep record belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    SDownToNOverP,
    PToInfinity,
    SUpToOne,
    /// Exploratory joint limit `s -> 0`, `p -> inf`, `s*p -> N`; no
    /// pass/fail semantics attached.
    JointBoundary,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::SDownToNOverP => "s-to-boundary",
            Regime::PToInfinity => "p-to-infinity",
            Regime::SUpToOne => "s-to-one",
            Regime::JointBoundary => "joint-boundary",
        };
        f.write_str(s)
    }
}

/// One point of an asymptotic sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRecord {
    pub regime: Regime,
    pub abscissa: f64,
    pub lower: f64,
    pub upper: f64,
    pub extremal_estimate: Option<f64>,
    /// Regime-specific normalization (see the sweep functions).
    pub normalized: f64,
    pub flags: String,
}

/// Ordinary least-squares fit on log-log data.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points_used: usize,
}

/// Fit `ln y = slope * ln x + intercept` by ordinary least squares.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Result<RateFit> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(CoreError::Domain(format!(
            "rate fit needs at least 3 matched points, got {}",
            xs.len()
        )));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(CoreError::Domain("log-log fit requires positive finite data".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(CoreError::Domain("degenerate abscissae in rate fit".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    let ss_tot: f64 = ly.iter().map(|y| (y - my) * (y - my)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(RateFit { slope, intercept, r_squared, points_used: xs.len() })
}

/// Configuration of the boundary sweep (`s` descending to `N/p`).
#[derive(Debug, Clone)]
pub struct BoundaryConfig {
    /// Node count of the Poincaré-constant grid (odd).
    pub lambda_nodes: usize,
    pub lambda: LambdaConfig,
}

impl Default for BoundaryConfig {
    fn default() -> Self {
        Self { lambda_nodes: 513, lambda: LambdaConfig::default() }
    }
}

/// Result of the boundary sweep with the two rate fits.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundarySweep {
    pub records: Vec<SweepRecord>,
    pub fit_lower: RateFit,
    pub fit_upper: RateFit,
}

/// Sweep `s` toward `N/p`: per point the lower bound `theta * Lambda_est`
/// and the power-profile upper bound, with log-log fits of both against
/// `sp - N` over the boundary-adjacent window (gaps below the median).
pub fn sweep_s_to_boundary(
    dim: u32,
    p: f64,
    s_grid: &[f64],
    cfg: &BoundaryConfig,
) -> Result<BoundarySweep> {
    if s_grid.len() < 4 {
        return Err(CoreError::Domain("boundary sweep needs at least 4 points".into()));
    }
    let mut records = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        let pr = FracParams::new(dim, s, p)?;
        let theta = params::theta_constant(pr)?.value;
        let lam = lambda_estimate(pr, GridSpec::new(dim as usize, 1.0, cfg.lambda_nodes), &cfg.lambda)?;
        let lower = theta * lam.value;
        let zeta = trial::zeta_profile(pr)?;
        let upper = quadrature::gagliardo_radial(pr, &zeta)?.raised_to_p;
        let gap = pr.gap();
        let mut flags = String::new();
        if lam.multi_basin {
            flags.push_str("multi-basin;");
        }
        records.push(SweepRecord {
            regime: Regime::SDownToNOverP,
            abscissa: gap,
            lower,
            upper,
            extremal_estimate: None,
            normalized: upper / gap.powf(p - 1.0),
            flags,
        });
    }
    records.sort_by(|a, b| a.abscissa.partial_cmp(&b.abscissa).unwrap());

    let gaps: Vec<f64> = records.iter().map(|r| r.abscissa).collect();
    let window = boundary_window(&gaps);
    let xs: Vec<f64> = window.iter().map(|&i| records[i].abscissa).collect();
    let lo: Vec<f64> = window.iter().map(|&i| records[i].lower).collect();
    let hi: Vec<f64> = window.iter().map(|&i| records[i].upper).collect();
    let fit_lower = fit_loglog(&xs, &lo)?;
    let fit_upper = fit_loglog(&xs, &hi)?;
    let mut sweep = BoundarySweep { records, fit_lower, fit_upper };
    if fit_lower.r_squared < 0.9 || fit_upper.r_squared < 0.9 {
        for r in &mut sweep.records {
            r.flags.push_str("fit-quality;");
        }
    }
    Ok(sweep)
}

// Default fit window: points with gap below the median, padded to >= 3.
fn boundary_window(gaps: &[f64]) -> Vec<usize> {
    let mut sorted = gaps.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
    };
    let mut idx: Vec<usize> = (0..gaps.len()).filter(|&i| gaps[i] < median).collect();
    let mut k = idx.len();
    while idx.len() < 3 && k < gaps.len() {
        idx.push(k);
        k += 1;
    }
    idx
}

/// Configuration of the `p -> inf` sweep.
#[derive(Debug, Clone)]
pub struct PInfinityConfig {
    pub cone_eps: f64,
    pub lambda_nodes: usize,
    pub lambda: LambdaConfig,
}

impl Default for PInfinityConfig {
    fn default() -> Self {
        Self { cone_eps: 0.05, lambda_nodes: 129, lambda: LambdaConfig::default() }
    }
}

/// Sweep `p` upward at fixed `s`: records carry the `1/p`-th roots
/// (`lower = (theta * Lambda)^{1/p}`, `upper = bound^{1/p}`), which both
/// approach 1; `normalized` is their ratio `upper / lower`.
pub fn sweep_p_to_infinity(
    dim: u32,
    s: f64,
    p_grid: &[f64],
    cfg: &PInfinityConfig,
) -> Result<Vec<SweepRecord>> {
    if p_grid.is_empty() {
        return Err(CoreError::Domain("empty p grid".into()));
    }
    let mut ps = p_grid.to_vec();
    ps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if s * ps[0] <= dim as f64 {
        return Err(CoreError::InvalidParams(format!(
            "smallest exponent {} not admissible at s = {s}",
            ps[0]
        )));
    }
    let mut out = Vec::with_capacity(ps.len());
    for &p in &ps {
        let pr = FracParams::new(dim, s, p)?;
        let theta = params::theta_constant(pr)?.value;
        let lam = lambda_estimate(pr, GridSpec::new(dim as usize, 1.0, cfg.lambda_nodes), &cfg.lambda)?;
        let trialf = TrialFunction::new(TrialKind::SmoothCone { eps: cfg.cone_eps }, pr)?;
        let bound = trial::morrey_upper_bound(pr, &trialf)?.bound;
        let lower_root = (theta * lam.value).powf(1.0 / p);
        let upper_root = bound.powf(1.0 / p);
        let mut flags = String::new();
        if lam.multi_basin {
            flags.push_str("multi-basin;");
        }
        out.push(SweepRecord {
            regime: Regime::PToInfinity,
            abscissa: p,
            lower: lower_root,
            upper: upper_root,
            extremal_estimate: None,
            normalized: upper_root / lower_root,
            flags,
        });
    }
    Ok(out)
}

/// Configuration of the `s -> 1` sweep.
#[derive(Debug, Clone)]
pub struct SToOneConfig {
    pub solver_nodes: usize,
    pub box_half_width: f64,
    pub solver: SolverConfig,
    pub lambda_nodes: usize,
    pub lambda: LambdaConfig,
}

impl Default for SToOneConfig {
    fn default() -> Self {
        Self {
            solver_nodes: 2049,
            box_half_width: 4.0,
            solver: SolverConfig::default(),
            lambda_nodes: 257,
            lambda: LambdaConfig::default(),
        }
    }
}

/// Result of the `s -> 1` sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SToOneSweep {
    pub records: Vec<SweepRecord>,
    /// `(1-s) [bump]^p_{W^{s,p}} / (K_{p,N} [bump]^p_{W^{1,p}})` at the
    /// largest swept `s`.
    pub bbm_ratio: f64,
    /// Sup distance between the extremal at the largest `s` and the local
    /// (`s = 1`) extremal over the pinned interval, in units of `|a - b|`.
    pub extremal_sup_distance: f64,
}

/// Sweep `s` upward to at most 0.99 (1-D): per point `(1-s)` times the
/// pinned-solution estimate, normalized by the limit `K_{p,1} * m_{1,p}(R)`.
pub fn sweep_s_to_one(
    p: f64,
    s_grid: &[f64],
    reference_bump: &GridFunction,
    cfg: &SToOneConfig,
) -> Result<SToOneSweep> {
    if s_grid.iter().any(|&s| s > 0.99 + 1e-12) {
        return Err(CoreError::Domain(
            "the s -> 1 sweep caps s at 0.99; adjacent-band step control degrades beyond".into(),
        ));
    }
    if cfg.solver_nodes > 4097 {
        return Err(CoreError::Domain("the s -> 1 sweep caps the grid at 4097 nodes".into()));
    }
    let dim = 1u32;
    let k_limit = params::bbm_constant(FracParams::new(dim, 1.0, p)?); // K_{p,1}
    let m_local = 1.0; // sharp constant of the local 1-D problem
    let mut records = Vec::with_capacity(s_grid.len());
    let mut ss = s_grid.to_vec();
    ss.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let make_problem = |s: f64| -> Result<PinnedProblem> {
        PinnedProblem::new(
            FracParams::new(dim, s, p)?,
            GridSpec::new(1, cfg.box_half_width, cfg.solver_nodes),
            vec![0.0],
            vec![1.0],
            0.0,
            1.0,
        )
    };

    let mut last_solution: Option<crate::extremal::ExtremalSolution> = None;
    for &s in &ss {
        let pr = FracParams::new(dim, s, p)?;
        let problem = make_problem(s)?;
        let sol = solve_pinned(&problem, &cfg.solver)?;
        let theta = params::theta_constant(pr)?.value;
        let lam = lambda_estimate(pr, GridSpec::new(1, 1.0, cfg.lambda_nodes), &cfg.lambda)?;
        let zeta = trial::zeta_profile(pr)?;
        let upper = quadrature::gagliardo_radial(pr, &zeta)?.raised_to_p;
        let mut flags = String::new();
        if !sol.converged {
            flags.push_str("not-converged;");
        }
        let scaled = (1.0 - s) * sol.morrey_estimate;
        records.push(SweepRecord {
            regime: Regime::SUpToOne,
            abscissa: s,
            lower: theta * lam.value,
            upper,
            extremal_estimate: Some(sol.morrey_estimate),
            normalized: scaled / (k_limit * m_local),
            flags,
        });
        if (s - ss[ss.len() - 1]).abs() < 1e-15 {
            last_solution = Some(sol);
        }
    }

    // BBM seminorm check on the reference bump at the largest s.
    let s_last = ss[ss.len() - 1];
    let pr_last = FracParams::new(dim, s_last, p)?;
    let frac_energy = quadrature::gagliardo_grid(pr_last, reference_bump)?.raised_to_p;
    let grad_energy = quadrature::gradient_seminorm_grid(p, reference_bump)?.raised_to_p;
    let bbm_ratio = (1.0 - s_last) * frac_energy / (k_limit * grad_energy);

    // Compare the extremal at the largest s against the local one on the
    // pinned interval.
    let local_problem = PinnedProblem::new(
        FracParams::new(dim, 1.0, p)?,
        GridSpec::new(1, cfg.box_half_width, cfg.solver_nodes),
        vec![0.0],
        vec![1.0],
        0.0,
        1.0,
    )?;
    let local_sol = solve_pinned(&local_problem, &cfg.solver)?;
    let sol_last = last_solution.ok_or_else(|| CoreError::Numeric("empty sweep".into()))?;
    let grid = GridSpec::new(1, cfg.box_half_width, cfg.solver_nodes);
    let (i0, i1) = (grid.node_index(&[0.0])?, grid.node_index(&[1.0])?);
    let (lo, hi) = (i0.min(i1), i0.max(i1));
    let sup = sol_last.u.values()[lo..=hi]
        .iter()
        .zip(&local_sol.u.values()[lo..=hi])
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));

    Ok(SToOneSweep { records, bbm_ratio, extremal_sup_distance: sup })
}

/// Exploratory joint sweep `s -> 0`, `p -> inf` with `s*p -> N`: records
/// only, no pass/fail semantics.
pub fn sweep_joint_boundary(
    dim: u32,
    pairs: &[(f64, f64)],
    cfg: &BoundaryConfig,
) -> Result<Vec<SweepRecord>> {
    let mut out = Vec::with_capacity(pairs.len());
    for &(s, p) in pairs {
        let pr = FracParams::new(dim, s, p)?;
        let theta = params::theta_constant(pr)?.value;
        let lam = lambda_estimate(pr, GridSpec::new(dim as usize, 1.0, cfg.lambda_nodes), &cfg.lambda)?;
        let zeta = trial::zeta_profile(pr)?;
        let upper = quadrature::gagliardo_radial(pr, &zeta)?.raised_to_p;
        out.push(SweepRecord {
            regime: Regime::JointBoundary,
            abscissa: pr.gap(),
            lower: theta * lam.value,
            upper,
            extremal_estimate: None,
            normalized: upper / pr.gap().powf(p - 1.0),
            flags: String::new(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fit_recovers_exact_power_law() {
        let xs: Vec<f64> = (1..=6).map(|k| k as f64 * 0.01).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.5 * x.powf(1.75)).collect();
        let fit = fit_loglog(&xs, &ys).unwrap();
        assert_relative_eq!(fit.slope, 1.75, max_relative = 1e-12);
        assert_relative_eq!(fit.intercept, 3.5f64.ln(), max_relative = 1e-10);
        assert!(fit.r_squared > 1.0 - 1e-12);
        assert_eq!(fit.points_used, 6);
    }

    #[test]
    fn fit_rejects_bad_input() {
        assert!(fit_loglog(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(fit_loglog(&[1.0, 2.0, -3.0], &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn boundary_window_selects_small_gaps() {
        let gaps = [0.01, 0.02, 0.04, 0.08, 0.16, 0.32];
        let w = boundary_window(&gaps);
        assert_eq!(w, vec![0, 1, 2]);
    }

    #[test]
    fn s_to_one_rejects_out_of_range() {
        let bump = GridFunction::from_fn(1, 1.5, 65, |x| (1.0 - x[0] * x[0]).max(0.0)).unwrap();
        let cfg = SToOneConfig { solver_nodes: 65, ..Default::default() };
        assert!(sweep_s_to_one(2.0, &[0.995], &bump, &cfg).is_err());
    }
}
