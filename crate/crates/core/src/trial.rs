//! Trial functions and the upper bounds they induce on the sharp Morrey
//! constant.
//!
//! Every upper bound is a Rayleigh quotient `energy / holder^p` where
//! `energy` is the full-space Gagliardo energy of the trial function and
//! `holder` is either its exact Hölder seminorm (the truncated power profile
//! has seminorm exactly 1) or a two-point lower bound for it (which still
//! yields a valid upper bound on the sharp constant).

use crate::error::CoreError;
use crate::params::{self, FracParams};
use crate::quadrature::{
    self, gagliardo_radial, gradient_seminorm_grid, holder_seminorm_radial, GridFunction,
    RadialProfile,
};
use crate::Result;
use serde::{Deserialize, Serialize};

/// The trial-function family.
#[derive(Clone, Debug)]
pub enum TrialKind {
    /// `x -> (1 - |x|^{(sp-N)/(p-1)})_+`, supported on the unit ball; its
    /// Hölder seminorm of order `alpha_{s,p}` is exactly 1.
    Zeta,
    /// `x -> (1 - (sqrt(eps^2 + |x|^2) - eps))_+`, a 1-Lipschitz smoothed
    /// cone; the quotient uses the two-point denominator
    /// `sqrt(eps^2 + 1) - eps` attained against the origin.
    SmoothCone { eps: f64 },
    /// Local case `s = 1` only: `x -> (1 - |x|^{(p-N)/(p-1)})_+`.
    TruncatedFundamental,
    /// Any compactly supported radial profile.
    CustomBump(RadialProfile),
}

/// A trial function bound to a parameter triple.
#[derive(Clone, Debug)]
pub struct TrialFunction {
    pub kind: TrialKind,
    pub params: FracParams,
}

/// Upper bound record: `bound = energy / holder^p >= m_{s,p}(R^N)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UpperBoundRecord {
    pub description: String,
    /// `p`-th power Gagliardo (or gradient) energy of the trial function.
    pub energy: f64,
    /// Hölder seminorm (or a lower bound for it) used as the denominator.
    pub holder_seminorm: f64,
    pub bound: f64,
}

/// One point of a boundary scan of the power-profile upper bound.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ZetaScanPoint {
    pub s: f64,
    pub energy: f64,
    /// `energy * (1-s) / (sp-N)^{p-1}`; bounded along admissible grids.
    pub bound_ratio: f64,
}

impl TrialFunction {
    pub fn new(kind: TrialKind, params: FracParams) -> Result<Self> {
        match &kind {
            TrialKind::Zeta | TrialKind::SmoothCone { .. } => {
                params.require_fractional()?;
            }
            TrialKind::TruncatedFundamental => {
                if !params.is_local() {
                    return Err(CoreError::Domain(
                        "the truncated fundamental solution is the s = 1 trial".into(),
                    ));
                }
            }
            TrialKind::CustomBump(_) => {}
        }
        if let TrialKind::SmoothCone { eps } = kind {
            if !(eps > 0.0) {
                return Err(CoreError::Domain(format!("smoothing eps must be positive, got {eps}")));
            }
        }
        Ok(Self { kind, params })
    }

    /// The radial profile of this trial function.
    pub fn radial_profile(&self) -> Result<RadialProfile> {
        let params = self.params;
        match &self.kind {
            TrialKind::Zeta => zeta_profile(params),
            TrialKind::SmoothCone { eps } => {
                let eps = *eps;
                let support = (1.0 + 2.0 * eps).sqrt();
                RadialProfile::new(
                    move |r| (1.0 - ((eps * eps + r * r).sqrt() - eps)).max(0.0),
                    support,
                )
            }
            TrialKind::TruncatedFundamental => {
                let expo = (params.p() - params.dim() as f64) / (params.p() - 1.0);
                RadialProfile::new(move |r| (1.0 - r.powf(expo)).max(0.0), 1.0)
            }
            TrialKind::CustomBump(profile) => Ok(profile.clone()),
        }
    }
}

/// The power profile `(1 - |x|^{(sp-N)/(p-1)})_+` with its exponent check.
pub fn zeta_profile(params: FracParams) -> Result<RadialProfile> {
    params.require_fractional()?;
    let beta = params.gap() / (params.p() - 1.0);
    if !(beta > 0.0 && beta < 1.0) {
        return Err(CoreError::InvalidParams(format!(
            "power-profile exponent {beta} outside (0, 1)"
        )));
    }
    Ok(RadialProfile::new(move |r| (1.0 - r.powf(beta)).max(0.0), 1.0)?
        .with_holder_seminorm(1.0))
}

/// Exponent of the power profile, `(sp - N)/(p - 1)`.
pub fn zeta_exponent(params: FracParams) -> f64 {
    params.gap() / (params.p() - 1.0)
}

/// Hölder seminorm of order `alpha_{s,p}` of the power profile: exactly 1.
///
/// The concavity of `t -> t^{(sp-N)/(p-1)}` pushes the two-point ratio to
/// its supremum on the pair (center, boundary), where it equals 1.
pub fn zeta_holder_seminorm(params: FracParams) -> Result<f64> {
    params.require_fractional()?;
    let beta = zeta_exponent(params);
    let alpha = params::holder_exponent(params);
    if !(beta > alpha) {
        return Err(CoreError::Numeric(format!(
            "power-profile exponent {beta} not above the Hölder exponent {alpha}"
        )));
    }
    Ok(1.0)
}

/// Grid cross-check for [`zeta_holder_seminorm`]: sample the profile on a
/// 1-D grid containing the nodes 0 and ±1 and take the discrete Hölder
/// seminorm.
pub fn zeta_holder_grid_check(params: FracParams, nodes: usize) -> Result<f64> {
    let profile = zeta_profile(params)?;
    let alpha = params::holder_exponent(params);
    let u = GridFunction::from_fn(1, 1.5, nodes, |x| profile.eval(x[0].abs()))?;
    Ok(quadrature::holder_seminorm_grid(alpha, &u)?.0)
}

/// Upper bound on the sharp Morrey constant from one trial function.
pub fn morrey_upper_bound(params: FracParams, trial: &TrialFunction) -> Result<UpperBoundRecord> {
    if trial.params != params {
        return Err(CoreError::Domain(
            "trial function was built for different parameters".into(),
        ));
    }
    let alpha = params::holder_exponent(params);
    let (description, energy, holder) = match &trial.kind {
        TrialKind::Zeta => {
            let profile = trial.radial_profile()?;
            let energy = gagliardo_radial(params, &profile)?.raised_to_p;
            ("zeta power profile".to_string(), energy, zeta_holder_seminorm(params)?)
        }
        TrialKind::SmoothCone { eps } => {
            let profile = trial.radial_profile()?;
            let energy = gagliardo_radial(params, &profile)?.raised_to_p;
            // two-point denominator from the pair (e_1, 0)
            let holder = (1.0 + eps * eps).sqrt() - eps;
            (format!("smooth cone (eps = {eps})"), energy, holder)
        }
        TrialKind::TruncatedFundamental => {
            let n = params.dim();
            let nf = n as f64;
            let p = params.p();
            let kappa = (p - nf) / (p - 1.0);
            // exact gradient energy of (1 - r^kappa)_+ on the unit ball
            let energy = kappa.powf(p) * nf * params::unit_ball_volume(n)
                / ((kappa - 1.0) * p + nf);
            let holder = if n == 1 {
                // the tent: the two-point ratio tau^{1/p} maximizes at the
                // unit pair (0, 1)
                1.0
            } else {
                let profile = trial.radial_profile()?;
                holder_seminorm_radial(alpha, &profile, 4096)
            };
            ("truncated fundamental solution".to_string(), energy, holder)
        }
        TrialKind::CustomBump(profile) => {
            let energy = gagliardo_radial(params, profile)?.raised_to_p;
            let holder = match profile.holder_seminorm() {
                Some(h) => h,
                None => holder_seminorm_radial(alpha, profile, 4096),
            };
            ("custom bump".to_string(), energy, holder)
        }
    };
    if !(holder > 0.0) {
        return Err(CoreError::Numeric(
            "trial function has zero Hölder seminorm".into(),
        ));
    }
    let bound = energy / holder.powf(params.p());
    if !bound.is_finite() {
        return Err(CoreError::Numeric(format!("upper bound overflowed: {bound}")));
    }
    Ok(UpperBoundRecord {
        description,
        energy,
        holder_seminorm: holder,
        bound,
    })
}

/// Scan the power-profile energy along a grid of `s` values; the ratio
/// `energy * (1-s) / (sp-N)^{p-1}` stays bounded along admissible grids.
pub fn zeta_bound_scan(dim: u32, p: f64, s_grid: &[f64]) -> Result<Vec<ZetaScanPoint>> {
    let mut out = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        let params = FracParams::new(dim, s, p)?;
        let profile = zeta_profile(params)?;
        let energy = gagliardo_radial(params, &profile)?.raised_to_p;
        out.push(ZetaScanPoint {
            s,
            energy,
            bound_ratio: energy * (1.0 - s) / params.gap().powf(p - 1.0),
        });
    }
    Ok(out)
}

/// Exact gradient energy check helper for the local trial on a grid
/// (used in tests and the battery).
pub fn local_energy_on_grid(p: f64, u: &GridFunction) -> Result<f64> {
    Ok(gradient_seminorm_grid(p, u)?.raised_to_p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(dim: u32, s: f64, p: f64) -> FracParams {
        FracParams::new(dim, s, p).unwrap()
    }

    #[test]
    fn zeta_holder_is_one_and_exponent_dominates() {
        for &(n, s, p) in &[(1u32, 0.75, 2.0), (1, 0.9, 4.0), (2, 0.8, 3.0)] {
            let pr = params(n, s, p);
            assert_eq!(zeta_holder_seminorm(pr).unwrap(), 1.0);
            assert!(zeta_exponent(pr) > params::holder_exponent(pr));
        }
    }

    #[test]
    fn zeta_holder_grid_cross_check() {
        let pr = params(1, 0.75, 2.0);
        let v = zeta_holder_grid_check(pr, 2049).unwrap();
        assert!((v - 1.0).abs() <= 1e-3, "grid Hölder seminorm {v}");
    }

    #[test]
    fn zeta_bound_finite_and_positive() {
        let pr = params(1, 0.75, 2.0);
        let trial = TrialFunction::new(TrialKind::Zeta, pr).unwrap();
        let rec = morrey_upper_bound(pr, &trial).unwrap();
        assert!(rec.bound.is_finite() && rec.bound > 0.0);
        assert_eq!(rec.holder_seminorm, 1.0);
    }

    #[test]
    fn smooth_cone_bound_moderate_at_large_p() {
        let pr = params(1, 0.9, 16.0);
        let trial = TrialFunction::new(TrialKind::SmoothCone { eps: 0.1 }, pr).unwrap();
        let rec = morrey_upper_bound(pr, &trial).unwrap();
        let root = rec.bound.powf(1.0 / 16.0);
        assert!(root > 0.5 && root < 2.0, "bound^(1/p) = {root}");
    }

    #[test]
    fn truncated_fundamental_one_dim() {
        let pr = params(1, 1.0, 3.0);
        let trial = TrialFunction::new(TrialKind::TruncatedFundamental, pr).unwrap();
        let rec = morrey_upper_bound(pr, &trial).unwrap();
        // kappa = 1: the tent, with gradient energy exactly 2
        assert_relative_eq!(rec.energy, 2.0, max_relative = 1e-12);
        assert!(rec.bound >= 1.0);
        // incompatible pairings are rejected
        assert!(TrialFunction::new(TrialKind::TruncatedFundamental, params(1, 0.9, 3.0)).is_err());
        assert!(TrialFunction::new(TrialKind::Zeta, pr).is_err());
    }

    #[test]
    fn zeta_scan_bounded_ratio() {
        let pts = zeta_bound_scan(1, 2.0, &[0.55, 0.6, 0.7, 0.8, 0.9]).unwrap();
        assert!(pts.iter().all(|pt| pt.energy.is_finite() && pt.energy > 0.0));
        let ratios: Vec<f64> = pts.iter().map(|pt| pt.bound_ratio).collect();
        let mn = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let mx = ratios.iter().cloned().fold(0.0f64, f64::max);
        assert!(mx / mn <= 50.0, "bound ratios {ratios:?}");
    }

    #[test]
    fn zeta_energy_blows_up_like_one_over_one_minus_s() {
        let pts = zeta_bound_scan(1, 2.0, &[0.9, 0.95, 0.975]).unwrap();
        let xs: Vec<f64> = pts.iter().map(|pt| (1.0 - pt.s).ln()).collect();
        let ys: Vec<f64> = pts.iter().map(|pt| pt.energy.ln()).collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let slope: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (x - mx) * (y - my))
            .sum::<f64>()
            / xs.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>();
        assert!(
            (-1.3..=-0.7).contains(&slope),
            "log-slope of energy vs log(1-s): {slope}"
        );
    }

    #[test]
    fn smooth_cone_profile_is_one_lipschitz() {
        let pr = params(1, 0.8, 4.0);
        let trial = TrialFunction::new(TrialKind::SmoothCone { eps: 0.05 }, pr).unwrap();
        let profile = trial.radial_profile().unwrap();
        let mut prev = profile.eval(0.0);
        let m = 2000;
        let support = profile.support_radius();
        let dh = support / m as f64;
        for i in 1..=m {
            let cur = profile.eval(i as f64 * dh);
            assert!((cur - prev).abs() <= dh * (1.0 + 1e-9));
            prev = cur;
        }
        assert_relative_eq!(profile.eval(0.0), 1.0, max_relative = 1e-12);
    }
}
