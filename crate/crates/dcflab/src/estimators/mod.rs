//! Statistical estimators used to validate the limit behavior of traces:
//! empirical tails, tail-index fits, Hill cross-check, Poissonness report,
//! and the wavelet logscale machinery.

mod wavelet;

pub use wavelet::{
    dwt_details, hurst_estimate, logscale_diagram, suggest_alignment, DwtPyramid, HurstEstimate,
    LogscaleDiagram,
};

use crate::error::{Error, Result};

/// Empirical survival function: one point per distinct sample value `v`,
/// carrying `P[X ≥ v]`. Decreasing in `v`, starts at 1.
pub fn empirical_ccdf(samples: &[f64]) -> Result<Vec<(f64, f64)>> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len() as f64;
    let mut out = Vec::new();
    let mut i = 0usize;
    while i < sorted.len() {
        let v = sorted[i];
        out.push((v, (sorted.len() - i) as f64 / n));
        while i < sorted.len() && sorted[i] == v {
            i += 1;
        }
    }
    Ok(out)
}

/// Survival `P[X > x]` of a sorted sample at each query point.
pub fn ccdf_at(sorted: &[f64], xs: &[f64]) -> Vec<f64> {
    let n = sorted.len() as f64;
    xs.iter()
        .map(|&x| (sorted.len() - sorted.partition_point(|&v| v <= x)) as f64 / n)
        .collect()
}

/// Survival points at `count` log-spaced abscissae spanning [x_lo, x_hi].
pub fn log_spaced_ccdf(sorted: &[f64], x_lo: f64, x_hi: f64, count: usize) -> Vec<(f64, f64)> {
    assert!(x_lo > 0.0 && x_hi > x_lo && count >= 2);
    let l0 = x_lo.ln();
    let l1 = x_hi.ln();
    let xs: Vec<f64> = (0..count)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (count - 1) as f64).exp())
        .collect();
    let cc = ccdf_at(sorted, &xs);
    xs.into_iter().zip(cc).collect()
}

/// Result of a log-log tail fit.
#[derive(Debug, Clone, Copy)]
pub struct TailFit {
    /// Negated slope of log ccdf against log x.
    pub alpha_hat: f64,
    /// Intercept of the fit (log of the tail prefactor).
    pub intercept: f64,
    pub r2: f64,
}

/// Ordinary least squares of `log F^c` on `log x` over the window
/// [x_min, x_max]. Zero-survival points are skipped; at least 20 points
/// must remain.
pub fn tail_index_fit(points: &[(f64, f64)], x_min: f64, x_max: f64) -> Result<TailFit> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, c)| *x >= x_min && *x <= x_max && *c > 0.0 && *x > 0.0)
        .map(|&(x, c)| (x.ln(), c.ln()))
        .collect();
    if pts.len() < 20 {
        return Err(Error::InsufficientTrace(format!(
            "{} usable points in fit window, need 20",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let mean_y = sy / n;
    let ss_res: f64 = pts.iter().map(|p| (p.1 - (slope * p.0 + intercept)).powi(2)).sum();
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let r2 = 1.0 - ss_res / ss_tot;
    if r2 < 0.9 {
        return Err(Error::PoorFit { r2 });
    }
    Ok(TailFit { alpha_hat: -slope, intercept, r2 })
}

/// Hill estimator on the top `k_order` order statistics:
/// `α̂ = k / Σ ln(x_(i)/x_(k))`.
pub fn hill_estimator(samples: &[f64], k_order: usize) -> Result<f64> {
    let n = samples.len();
    if k_order < 2 || k_order >= n {
        return Err(Error::BadTailOrder { k: k_order, n });
    }
    let mut sorted: Vec<f64> = samples.iter().copied().filter(|&x| x > 0.0).collect();
    if k_order >= sorted.len() {
        return Err(Error::BadTailOrder { k: k_order, n: sorted.len() });
    }
    sorted.sort_by(|a, b| b.total_cmp(a));
    let xk = sorted[k_order];
    let sum_log: f64 = sorted[..k_order].iter().map(|&x| (x / xk).ln()).sum();
    if sum_log <= 0.0 {
        return Err(Error::BadTailOrder { k: k_order, n });
    }
    Ok(k_order as f64 / sum_log)
}

/// Self-similarity index implied by a tail exponent in (1,2]: `H = (3−α)/2`.
pub fn hurst_from_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::DomainError(format!("alpha must be in (1,2], got {alpha}")));
    }
    Ok((3.0 - alpha) / 2.0)
}

/// Poissonness report of a merged arrival stream.
#[derive(Debug, Clone, Copy)]
pub struct PoissonReport {
    pub interarrival_cv: f64,
    pub ks_pvalue_exponential: f64,
    pub dispersion_index: f64,
}

/// Inter-arrival CV, Kolmogorov–Smirnov p-value against the exponential at
/// the empirical rate, and the variance-to-mean ratio of counts over
/// consecutive windows of `window` slots.
pub fn poisson_checks(merged_arrivals: &[f64], window: f64) -> Result<PoissonReport> {
    assert!(window > 0.0);
    if merged_arrivals.len() < 16 {
        return Err(Error::InsufficientTrace(format!(
            "{} arrivals, need at least 16",
            merged_arrivals.len()
        )));
    }
    let mut arr = merged_arrivals.to_vec();
    arr.sort_by(|a, b| a.total_cmp(b));
    let ia: Vec<f64> = arr.windows(2).map(|w| w[1] - w[0]).collect();
    let mean = ia.iter().sum::<f64>() / ia.len() as f64;
    let var = ia.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (ia.len() as f64 - 1.0);
    let cv = var.sqrt() / mean;

    // KS against Exp(1/mean)
    let mut sorted_ia = ia.clone();
    sorted_ia.sort_by(|a, b| a.total_cmp(b));
    let n = sorted_ia.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted_ia.iter().enumerate() {
        let fx = 1.0 - (-x / mean).exp();
        let hi = (i as f64 + 1.0) / n - fx;
        let lo = fx - i as f64 / n;
        d = d.max(hi.max(lo));
    }
    let ks_p = kolmogorov_pvalue(d, sorted_ia.len());

    let span = *arr.last().unwrap();
    let n_windows = (span / window).floor() as usize;
    if n_windows < 5 {
        return Err(Error::InsufficientTrace("fewer than 5 count windows".into()));
    }
    let mut counts = vec![0u64; n_windows];
    for &t in &arr {
        let idx = (t / window) as usize;
        if idx < n_windows {
            counts[idx] += 1;
        }
    }
    let cmean = counts.iter().sum::<u64>() as f64 / n_windows as f64;
    let cvar = counts.iter().map(|&c| (c as f64 - cmean).powi(2)).sum::<f64>()
        / (n_windows as f64 - 1.0);

    Ok(PoissonReport {
        interarrival_cv: cv,
        ks_pvalue_exponential: ks_p,
        dispersion_index: cvar / cmean,
    })
}

/// Asymptotic Kolmogorov–Smirnov tail probability with the small-sample
/// effective-n correction.
pub fn kolmogorov_pvalue(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    let mut p = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k as f64 * lambda).powi(2)).exp();
        p += if k % 2 == 1 { 2.0 * term } else { -2.0 * term };
        if term < 1e-16 {
            break;
        }
    }
    p.clamp(0.0, 1.0)
}
