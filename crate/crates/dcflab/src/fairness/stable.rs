//! α-stable law numerics for index in (1, 2]: sampling by the
//! Chambers–Mallows–Stuck transform, density and distribution function by
//! the standard single-integral representation, and the tail constant
//! `C_α`.
//!
//! Parameters follow the common (α, σ, β, μ) convention in which the
//! characteristic function is
//! `exp(iμu − σ^α|u|^α(1 − iβ·sgn(u)·tan(πα/2)))` and μ is the mean.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::quad;

/// Stable-law parameter tuple, α ∈ (1, 2].
#[derive(Debug, Clone, Copy)]
pub struct StableParams {
    pub alpha: f64,
    pub sigma: f64,
    pub beta: f64,
    pub mu: f64,
}

impl StableParams {
    pub fn new(alpha: f64, sigma: f64, beta: f64, mu: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(Error::DomainError(format!("alpha must be in (1,2], got {alpha}")));
        }
        if !(sigma > 0.0) {
            return Err(Error::DomainError("sigma must be positive".into()));
        }
        if !(-1.0..=1.0).contains(&beta) {
            return Err(Error::DomainError("beta must be in [-1,1]".into()));
        }
        Ok(StableParams { alpha, sigma, beta, mu })
    }

    pub fn standard(alpha: f64, beta: f64) -> Result<Self> {
        StableParams::new(alpha, 1.0, beta, 0.0)
    }
}

/// Tail constant `C_α = (α−1)/(Γ(2−α)·sin(π(α−1)/2))`, α ∈ (1, 2).
pub fn c_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::DomainError(format!("C_alpha defined on (1,2), got {alpha}")));
    }
    Ok((alpha - 1.0) / (gamma(2.0 - alpha) * (PI * (alpha - 1.0) / 2.0).sin()))
}

/// `n` i.i.d. stable draws by the Chambers–Mallows–Stuck transform.
pub fn stable_sample(p: &StableParams, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let tan_half = (FRAC_PI_2 * p.alpha).tan();
    let b = (p.beta * tan_half).atan() / p.alpha;
    let s = (1.0 + p.beta * p.beta * tan_half * tan_half).powf(0.5 / p.alpha);
    let inv_alpha = 1.0 / p.alpha;
    let skew_exp = (1.0 - p.alpha) / p.alpha;
    (0..n)
        .map(|_| {
            let v = PI * (rng.random::<f64>() - 0.5);
            let w = (-(1.0 - rng.random::<f64>()).ln()).max(1e-300);
            let cos_v = v.cos().max(1e-300);
            let x = s * (p.alpha * (v + b)).sin() / cos_v.powf(inv_alpha)
                * ((v - p.alpha * (v + b)).cos().max(1e-300) / w).powf(skew_exp);
            p.mu + p.sigma * x
        })
        .collect()
}

/// Density and distribution function at `x`, by quadrature of the
/// single-integral representation (Gaussian closed form at α = 2).
pub fn stable_pdf_cdf(p: &StableParams, x: f64) -> Result<(f64, f64)> {
    // integer-α representations are singular; nudge inside the open interval
    let alpha = if p.alpha > 2.0 - 1e-6 { 2.0 } else { p.alpha };
    if alpha == 2.0 {
        let var = 2.0 * p.sigma * p.sigma;
        let z = (x - p.mu) / var.sqrt();
        let pdf = (-0.5 * z * z).exp() / (2.0 * PI * var).sqrt();
        let cdf = 0.5 * (1.0 + statrs::function::erf::erf(z / std::f64::consts::SQRT_2));
        return Ok((pdf, cdf));
    }
    let std = (x - p.mu) / p.sigma;
    let (pdf_s, cdf_s) = standard_pdf_cdf(alpha, p.beta, std)?;
    Ok((pdf_s / p.sigma, cdf_s))
}

/// Core evaluation for the standard (σ=1, μ=0) law with α ∈ (1,2).
fn standard_pdf_cdf(alpha: f64, beta: f64, x: f64) -> Result<(f64, f64)> {
    if x < 0.0 {
        let (pdf, cdf) = standard_pdf_cdf(alpha, -beta, -x)?;
        return Ok((pdf, 1.0 - cdf));
    }
    let tan_half = (FRAC_PI_2 * alpha).tan();
    let zeta = -beta * tan_half;
    let theta0 = (beta * tan_half).atan() / alpha;
    if x < 1e-11 {
        // value at the shift point
        let pdf = gamma(1.0 + 1.0 / alpha) * theta0.cos()
            / (PI * (1.0 + zeta * zeta).powf(0.5 / alpha));
        let cdf = 0.5 - theta0 / PI;
        return Ok((pdf, cdf));
    }

    let a_exp = alpha / (alpha - 1.0);
    let ln_cos_a0 = (alpha * theta0).cos().ln() / (alpha - 1.0);
    let lo = -theta0;
    let hi = FRAC_PI_2;
    // exponents combined so no inf − inf forms at the interval edges, where
    // the true limits are V → 0 (right) and V → ∞ (left)
    let ln_v = |theta: f64| -> f64 {
        let ct = theta.cos().max(1e-300);
        let st = (alpha * (theta0 + theta)).sin().max(1e-300);
        let c3 = (alpha * theta0 + (alpha - 1.0) * theta).cos().max(1e-300);
        ln_cos_a0 + (a_exp - 1.0) * ct.ln() - a_exp * st.ln() + c3.ln()
    };
    let ln_xa = a_exp * x.ln();

    // split where the exponent crosses 1: V is monotone on the interval
    let cross = {
        let (mut a, mut b) = (lo + 1e-13 * (hi - lo), hi - 1e-13 * (hi - lo));
        let g = |t: f64| ln_xa + ln_v(t);
        if g(a) <= 0.0 {
            a
        } else if g(b) >= 0.0 {
            b
        } else {
            for _ in 0..80 {
                let mid = 0.5 * (a + b);
                if g(mid) > 0.0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            0.5 * (a + b)
        }
    };

    let cdf_integrand = |theta: f64| -> f64 {
        let e = ln_xa + ln_v(theta);
        if e > 690.0 {
            0.0
        } else {
            (-e.exp()).exp()
        }
    };
    let pdf_integrand = |theta: f64| -> f64 {
        let lv = ln_v(theta);
        if !lv.is_finite() {
            return 0.0;
        }
        let g = (ln_xa + lv).exp();
        let arg = lv - g;
        if arg < -700.0 {
            0.0
        } else {
            arg.exp()
        }
    };

    // The integrands are nonnegative; in the superexponentially thin flank
    // the panel error estimates bottom out from roundoff while the value is
    // already relatively converged, so accept those.
    let run = |f: &dyn Fn(f64) -> f64, a: f64, b: f64, ctx: &'static str| -> Result<f64> {
        match quad::adaptive(f, a, b, 1e-280, 1e-9, 768, ctx) {
            Ok(v) => Ok(v),
            Err(Error::QuadratureFailure { estimate, error, .. })
                if error <= 1e-6 * estimate + 1e-16 =>
            {
                Ok(estimate)
            }
            Err(e) => Err(e),
        }
    };
    let quad_split = |f: &dyn Fn(f64) -> f64, ctx: &'static str| -> Result<f64> {
        Ok(run(f, lo, cross, ctx)? + run(f, cross, hi, ctx)?)
    };

    let cdf_int = quad_split(&cdf_integrand, "stable cdf")?;
    let cdf = 1.0 - cdf_int / PI;
    let pdf_int = quad_split(&pdf_integrand, "stable pdf")?;
    let pdf = alpha * x.powf(1.0 / (alpha - 1.0)) / (PI * (alpha - 1.0)) * pdf_int;
    Ok((pdf.max(0.0), cdf.clamp(0.0, 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_alpha_reference_and_domain() {
        // at α = 3/2 the constant collapses to 1/√(2π)
        let c = c_alpha(1.5).unwrap();
        assert!((c - (2.0 * PI).sqrt().recip()).abs() < 1e-12);
        assert!((c - 0.3989422804).abs() < 1e-9);
        assert!(c_alpha(1.0).is_err());
        assert!(c_alpha(2.0).is_err());
        for i in 1..99 {
            let a = 1.0 + i as f64 * 0.01;
            assert!(c_alpha(a).unwrap() > 0.0, "alpha {a}");
        }
    }

    #[test]
    fn c_alpha_limit_toward_one_is_two_over_pi() {
        // grid extrapolation toward the removable endpoint singularity
        let mut last = 0.0;
        for k in 2..=6 {
            let a = 1.0 + 10f64.powi(-k);
            last = c_alpha(a).unwrap();
        }
        assert!((last - 2.0 / PI).abs() < 1e-4, "limit {last}");
    }

    #[test]
    fn alpha_two_is_gaussian() {
        let p = StableParams::new(2.0, 1.3, 0.5, -0.7).unwrap();
        let var: f64 = 2.0 * 1.3 * 1.3;
        for &x in &[-3.0, -0.7, 0.0, 1.0, 4.2] {
            let (pdf, cdf) = stable_pdf_cdf(&p, x).unwrap();
            let z: f64 = (x + 0.7) / var.sqrt();
            let g = (-0.5 * z * z).exp() / (2.0 * PI * var).sqrt();
            assert!((pdf - g).abs() < 1e-8, "pdf at {x}");
            let gc = 0.5 * (1.0 + statrs::function::erf::erf(z / std::f64::consts::SQRT_2));
            assert!((cdf - gc).abs() < 1e-8, "cdf at {x}");
        }
    }

    #[test]
    fn symmetric_law_has_median_at_mu() {
        for &alpha in &[1.2, 1.5, 1.8] {
            let p = StableParams::new(alpha, 2.0, 0.0, 5.0).unwrap();
            let (_, cdf) = stable_pdf_cdf(&p, 5.0).unwrap();
            assert!((cdf - 0.5).abs() < 1e-9, "alpha {alpha}: {cdf}");
            let (d, _) = stable_pdf_cdf(&p, 5.0).unwrap();
            assert!((d - gamma(1.0 + 1.0 / alpha) / (PI * 2.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn density_integrates_to_one() {
        for &(alpha, beta) in &[(1.5, 0.0), (1.5, 1.0), (1.3, 1.0), (1.7, -0.6)] {
            let p = StableParams::standard(alpha, beta).unwrap();
            let body = quad::adaptive(
                |x| stable_pdf_cdf(&p, x).unwrap().0,
                -60.0,
                60.0,
                1e-9,
                0.0,
                2048,
                "pdf mass",
            )
            .unwrap();
            let (_, c_lo) = stable_pdf_cdf(&p, -60.0).unwrap();
            let (_, c_hi) = stable_pdf_cdf(&p, 60.0).unwrap();
            let total = body + c_lo + (1.0 - c_hi);
            assert!((total - 1.0).abs() < 1e-6, "alpha {alpha} beta {beta}: {total}");
        }
    }

    #[test]
    fn cdf_is_monotone_and_tail_is_power() {
        let p = StableParams::standard(1.5, 1.0).unwrap();
        let mut prev = 0.0;
        for i in 0..60 {
            let x = -8.0 + i as f64 * 0.4;
            let (_, c) = stable_pdf_cdf(&p, x).unwrap();
            assert!(c >= prev - 1e-12, "x {x}");
            prev = c;
        }
        // asymptotic right tail: 1 − F(x) → (1+β)·C_α^tail·x^(−α) with
        // C^tail = Γ(α)·sin(πα/2)/π
        let tail_const = 2.0 * gamma(1.5) * (PI * 0.75).sin() / PI;
        for &x in &[50.0, 200.0] {
            let (_, c) = stable_pdf_cdf(&p, x).unwrap();
            let want = tail_const * x.powf(-1.5);
            assert!(
                ((1.0 - c) - want).abs() / want < 0.05,
                "x {x}: {} vs {want}",
                1.0 - c
            );
        }
    }

    #[test]
    fn sampler_alpha_two_is_gaussian() {
        let p = StableParams::new(2.0, 1.0, 0.3, 0.0).unwrap();
        let s = stable_sample(&p, 400_000, 1);
        let n = s.len() as f64;
        let mean = s.iter().sum::<f64>() / n;
        let var = s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        let m4 = s.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
        let kurt = m4 / (var * var);
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 2.0).abs() < 0.02, "var {var}");
        assert!((kurt - 3.0).abs() < 0.05, "kurtosis {kurt}");
    }

    #[test]
    fn sampler_mean_is_mu() {
        let p = StableParams::new(1.5, 1.0, 1.0, 0.0).unwrap();
        let s = stable_sample(&p, 1_000_000, 2);
        let mean = s.iter().sum::<f64>() / s.len() as f64;
        // heavy tails make the sample mean itself wander; generous band
        assert!(mean.abs() < 0.1, "mean {mean}");
    }

    #[test]
    fn sampler_tail_slope_matches_alpha() {
        use crate::estimators::{log_spaced_ccdf, tail_index_fit};
        let p = StableParams::standard(1.5, 1.0).unwrap();
        let mut s = stable_sample(&p, 1_000_000, 3);
        s.sort_by(|a, b| a.total_cmp(b));
        let pts = log_spaced_ccdf(&s, 20.0, 400.0, 40);
        let fit = tail_index_fit(&pts, 10.0, 500.0).unwrap();
        assert!((fit.alpha_hat - 1.5).abs() < 0.1, "alpha_hat {}", fit.alpha_hat);
    }

    #[test]
    fn stability_property_by_quantile_match() {
        // sums of m i.i.d. centred draws match m^{1/α}-scaled singles
        let m = 4usize;
        for &alpha in &[1.3, 1.5, 1.7] {
            let p = StableParams::standard(alpha, 1.0).unwrap();
            let n = 1_000_000usize;
            let raw = stable_sample(&p, n, 7);
            let mut sums: Vec<f64> =
                raw.chunks_exact(m).map(|c| c.iter().sum::<f64>()).collect();
            let mut scaled: Vec<f64> = stable_sample(&p, n / m, 8)
                .into_iter()
                .map(|x| (m as f64).powf(1.0 / alpha) * x)
                .collect();
            sums.sort_by(|a, b| a.total_cmp(b));
            scaled.sort_by(|a, b| a.total_cmp(b));
            for &q in &[0.05, 0.25, 0.5, 0.75, 0.95] {
                let i = (q * sums.len() as f64) as usize;
                let j = (q * scaled.len() as f64) as usize;
                let (a, b) = (sums[i], scaled[j]);
                let spread = sums[(0.75 * sums.len() as f64) as usize]
                    - sums[(0.25 * sums.len() as f64) as usize];
                assert!(
                    (a - b).abs() < 0.02 * spread.max(1.0),
                    "alpha {alpha} q {q}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn cdf_matches_sampler_ks() {
        for &(alpha, beta) in &[(1.5, 1.0), (1.7, 0.0)] {
            let p = StableParams::standard(alpha, beta).unwrap();
            let n = 200_000usize;
            let mut s = stable_sample(&p, n, 11);
            s.sort_by(|a, b| a.total_cmp(b));
            let mut d: f64 = 0.0;
            // scan a quantile grid rather than every sample
            for i in (0..n).step_by(97) {
                let (_, c) = stable_pdf_cdf(&p, s[i]).unwrap();
                let hi = ((i + 1) as f64 / n as f64 - c).abs();
                let lo = (c - i as f64 / n as f64).abs();
                d = d.max(hi.max(lo));
            }
            assert!(d < 0.01, "alpha {alpha} beta {beta}: KS {d}");
        }
    }
}
