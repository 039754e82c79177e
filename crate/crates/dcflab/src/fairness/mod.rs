//! Short-term fairness: the distribution of other nodes' successes while a
//! tagged node transmits a fixed number of packets.
//!
//! Two regimes are supported, switched on the stage count and tail
//! exponent. With a finite second moment the count is asymptotically
//! Gaussian with variance `(N−1)²·ζ·v_Ω²`. With an unbounded stage count
//! and tail exponent in (1,2) the count mixes a Telecom-process marginal
//! over an α-stable time change and keeps a power right tail.

mod asymp;
mod stable;
mod telecom;

pub use asymp::{asymp_inter_tx, AsympEvaluator};
pub use stable::{c_alpha, stable_pdf_cdf, stable_sample, StableParams};
pub use telecom::{telecom_cdf, telecom_cgf, telecom_variance, TelecomMarginal};

use statrs::function::erf::erf;

use crate::error::{Error, Result};
use crate::params::StageCount;

/// Everything the fairness formulas need about the operating point.
#[derive(Debug, Clone, Copy)]
pub struct FairnessSpec {
    pub n: u32,
    /// Tagged packet count per window.
    pub zeta: u32,
    pub v_omega: f64,
    pub alpha: f64,
    /// Tail prefactor of the per-packet ccdf, treated as constant.
    pub ell: f64,
    /// Slowly-varying constant entering the stable time change.
    pub ell0: f64,
    pub omega_bar: f64,
    /// Scaling constant `{N·Ω̄^{−α}·ℓ}^{1/(α−1)}/ζ` separating the stable
    /// (c→0) and fractional-Brownian (c→∞) ends.
    pub c: f64,
}

impl FairnessSpec {
    /// Full spec for the heavy regime; derives `ell0` and `c`.
    pub fn new(
        n: u32,
        zeta: u32,
        v_omega: f64,
        alpha: f64,
        ell: f64,
        omega_bar: f64,
    ) -> Result<Self> {
        if n < 2 || zeta < 1 {
            return Err(Error::InvalidParams("need N >= 2 and zeta >= 1".into()));
        }
        if !(alpha > 1.0 && alpha < 2.0) {
            return Err(Error::DomainError(format!(
                "heavy regime needs alpha in (1,2), got {alpha}"
            )));
        }
        if !(ell > 0.0) || !(omega_bar > 0.0) {
            return Err(Error::InvalidParams("ell and omega_bar must be positive".into()));
        }
        let c = (n as f64 * omega_bar.powf(-alpha) * ell).powf(1.0 / (alpha - 1.0)) / zeta as f64;
        let ell0 = (ell / c_alpha(alpha)?).powf(1.0 / alpha) / omega_bar;
        Ok(FairnessSpec { n, zeta, v_omega, alpha, ell, ell0, omega_bar, c })
    }

    /// Spec for the Gaussian regime, where only (N, ζ, v_Ω) matter.
    pub fn gaussian(n: u32, zeta: u32, v_omega: f64) -> Self {
        FairnessSpec {
            n,
            zeta,
            v_omega,
            alpha: f64::INFINITY,
            ell: f64::NAN,
            ell0: f64::NAN,
            omega_bar: f64::NAN,
            c: f64::NAN,
        }
    }

    pub fn mean(&self) -> f64 {
        (self.n as f64 - 1.0) * self.zeta as f64
    }

    pub fn gaussian_std(&self) -> f64 {
        (self.n as f64 - 1.0) * (self.zeta as f64).sqrt() * self.v_omega
    }
}

/// Which inter-transmission formula applies at an operating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Gaussian,
    Heavy,
}

/// Dispatch between the Gaussian and heavy-tailed formulas, with a warning
/// string when the caller is outside the clean region of either.
pub fn select_regime(k: StageCount, alpha: f64) -> (Regime, Option<String>) {
    match k {
        StageCount::Finite(_) => (Regime::Gaussian, None),
        StageCount::Infinite => {
            if alpha > 2.0 {
                (Regime::Gaussian, None)
            } else if alpha > 1.0 && alpha < 2.0 {
                (Regime::Heavy, None)
            } else {
                (
                    Regime::Heavy,
                    Some(format!(
                        "alpha = {alpha} at or below 1: no regime is exact, results indicative"
                    )),
                )
            }
        }
    }
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

/// Gaussian-regime inter-transmission pmf at integer `z`: the unit cell
/// around `z` under a normal with mean `(N−1)ζ` and std `(N−1)√ζ·v_Ω`.
pub fn gaussian_inter_tx(z: i64, spec: &FairnessSpec) -> f64 {
    let mu = spec.mean();
    let sd = spec.gaussian_std();
    normal_cdf((z as f64 + 0.5 - mu) / sd) - normal_cdf((z as f64 - 0.5 - mu) / sd)
}

/// Heavy-regime right-tail approximation
/// `P[Z > x] ≈ ζ·{(N−1)·ℓ₀}^α·C_α·x^{−α}`.
pub fn levy_tail_ccdf(x: f64, spec: &FairnessSpec) -> f64 {
    assert!(x > 0.0);
    let nf = spec.n as f64 - 1.0;
    spec.zeta as f64
        * (nf * spec.ell0).powf(spec.alpha)
        * c_alpha(spec.alpha).expect("spec alpha validated")
        * x.powf(-spec.alpha)
}

/// Fit the tail prefactor ℓ from empirical ccdf points, holding the slope
/// at −α: `ℓ = exp(mean(log F^c + α·log x))`. A free fit must first show a
/// power law (R² ≥ 0.95) over the window. Also returns
/// `ℓ₀ = (ℓ/C_α)^{1/α}/Ω̄`.
pub fn estimate_ell(
    ccdf_points: &[(f64, f64)],
    alpha: f64,
    omega_bar: f64,
) -> Result<(f64, f64)> {
    let pts: Vec<(f64, f64)> = ccdf_points
        .iter()
        .filter(|(x, c)| *x > 0.0 && *c > 0.0)
        .map(|&(x, c)| (x.ln(), c.ln()))
        .collect();
    if pts.len() < 10 {
        return Err(Error::InsufficientTrace(format!(
            "{} usable ccdf points, need 10",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept_free = (sy - slope * sx) / n;
    let mean_y = sy / n;
    let ss_res: f64 =
        pts.iter().map(|p| (p.1 - (slope * p.0 + intercept_free)).powi(2)).sum();
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let r2 = 1.0 - ss_res / ss_tot;
    if r2 < 0.95 {
        return Err(Error::PoorFit { r2 });
    }
    let log_ell = pts.iter().map(|p| p.1 + alpha * p.0).sum::<f64>() / n;
    let ell = log_ell.exp();
    let ell0 = (ell / c_alpha(alpha)?).powf(1.0 / alpha) / omega_bar;
    Ok((ell, ell0))
}
