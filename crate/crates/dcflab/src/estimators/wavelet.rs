//! Wavelet logscale diagram and Hurst estimation.
//!
//! A Daubechies pyramid filter bank produces per-octave detail
//! coefficients; octave energies are turned into unbiased log₂ estimates
//! with a digamma correction (the mean of a log-chi-square is not the log
//! of its mean), and the scaling slope over an alignment region gives the
//! Hurst index as `H = (1 + slope)/2`.

use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::gamma::digamma;

use crate::error::{Error, Result};

/// db2 low-pass filter: (1±√3)-type coefficients, 2 vanishing moments.
const DB2: [f64; 4] = [
    0.482962913144534,
    0.836516303737808,
    0.224143868042013,
    -0.129409522551260,
];

const DB3: [f64; 6] = [
    0.332670552950083,
    0.806891509311092,
    0.459877502118491,
    -0.135011020010255,
    -0.085441273882027,
    0.035226291885710,
];

const DB4: [f64; 8] = [
    0.230377813308896,
    0.714846570552915,
    0.630880767929859,
    -0.027983769416860,
    -0.187034811719093,
    0.030841381835561,
    0.032883011666885,
    -0.010597401785069,
];

fn filters(moments: usize) -> Result<(&'static [f64], Vec<f64>)> {
    let h: &[f64] = match moments {
        2 => &DB2,
        3 => &DB3,
        4 => &DB4,
        _ => {
            return Err(Error::DomainError(format!(
                "daubechies filters hard-coded for M in 2..=4, got {moments}"
            )))
        }
    };
    // quadrature mirror: g[i] = (−1)^i · h[L−1−i]
    let g: Vec<f64> = (0..h.len())
        .map(|i| {
            let v = h[h.len() - 1 - i];
            if i % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect();
    Ok((h, g))
}

/// Full pyramid output: detail coefficients per octave plus the final
/// approximation, computed with periodized boundaries.
#[derive(Debug, Clone)]
pub struct DwtPyramid {
    pub details: Vec<Vec<f64>>,
    pub approx: Vec<f64>,
}

/// Pyramid filter bank with Daubechies-M filters (M ∈ {2,3,4}), decimating
/// by two per octave until fewer than two filter lengths remain.
pub fn dwt_details(series: &[f64], moments: usize) -> Result<DwtPyramid> {
    let (h, g) = filters(moments)?;
    let min_len = 2 * h.len();
    if series.len() < min_len {
        return Err(Error::SeriesTooShort { len: series.len(), needed: min_len });
    }
    let mut approx: Vec<f64> = series.to_vec();
    let mut details = Vec::new();
    while approx.len() >= min_len {
        let n = approx.len() & !1; // drop a trailing odd sample
        let half = n / 2;
        let mut d = vec![0.0; half];
        let mut a = vec![0.0; half];
        for t in 0..half {
            let mut sd = 0.0;
            let mut sa = 0.0;
            for (i, (&hi, &gi)) in h.iter().zip(g.iter()).enumerate() {
                let v = approx[(2 * t + i) % n];
                sa += hi * v;
                sd += gi * v;
            }
            d[t] = sd;
            a[t] = sa;
        }
        details.push(d);
        approx = a;
    }
    Ok(DwtPyramid { details, approx })
}

/// Octave-indexed, bias-corrected log₂ wavelet energies with confidence
/// intervals.
#[derive(Debug, Clone)]
pub struct LogscaleDiagram {
    /// Octave indices, 1-based (octave j spans 2^j input samples).
    pub octaves: Vec<u32>,
    /// Bias-corrected log₂ energy per octave.
    pub y: Vec<f64>,
    /// Detail coefficients entering each octave energy (after boundary
    /// discard).
    pub n_coeffs: Vec<usize>,
    /// 95% half-widths, growing with the octave.
    pub ci_halfwidth: Vec<f64>,
    pub wavelet_moments: usize,
}

impl LogscaleDiagram {
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "octave,y,ci_halfwidth,n_coeffs")?;
        for i in 0..self.octaves.len() {
            writeln!(
                w,
                "{},{},{},{}",
                self.octaves[i], self.y[i], self.ci_halfwidth[i], self.n_coeffs[i]
            )?;
        }
        Ok(())
    }

    /// Index of octave j in the arrays.
    fn pos(&self, j: u32) -> Option<usize> {
        self.octaves.iter().position(|&o| o == j)
    }
}

/// Small-sample bias of `log2(mean of n half-chi-squares)`:
/// `(ψ(n/2) − ln(n/2)) / ln 2`, negative and vanishing with n.
fn log2_chi2_bias(n: f64) -> f64 {
    (digamma(n / 2.0) - (n / 2.0).ln()) / std::f64::consts::LN_2
}

/// Variance of the same statistic: `ψ′(n/2) / (ln 2)²`.
fn log2_chi2_var(n: f64) -> f64 {
    trigamma(n / 2.0) / (std::f64::consts::LN_2 * std::f64::consts::LN_2)
}

/// Trigamma by recurrence into the asymptotic region.
fn trigamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 8.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    acc + 1.0 / x + 0.5 * inv2
        + inv2 / x * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 / 30.0)))
}

/// Build the logscale diagram of a series: per-octave detail energies with
/// the log-chi-square bias correction and Gaussian 95% intervals.
/// The first and last 2M coefficients of each octave are excluded from the
/// energy sums to suppress the periodized boundary.
pub fn logscale_diagram(series: &[f64], moments: usize) -> Result<LogscaleDiagram> {
    let pyramid = dwt_details(series, moments)?;
    let discard = 2 * moments;
    let mut octaves = Vec::new();
    let mut y = Vec::new();
    let mut n_coeffs = Vec::new();
    let mut ci = Vec::new();
    for (level, d) in pyramid.details.iter().enumerate() {
        if d.len() < 2 * discard + 8 {
            break;
        }
        let kept = &d[discard..d.len() - discard];
        let n = kept.len();
        let energy = kept.iter().map(|v| v * v).sum::<f64>() / n as f64;
        if energy <= 0.0 {
            break;
        }
        octaves.push(level as u32 + 1);
        y.push(energy.log2() - log2_chi2_bias(n as f64));
        n_coeffs.push(n);
        ci.push(1.96 * log2_chi2_var(n as f64).sqrt());
    }
    if octaves.is_empty() {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            needed: (2 * discard + 8) * 2,
        });
    }
    Ok(LogscaleDiagram { octaves, y, n_coeffs, ci_halfwidth: ci, wavelet_moments: moments })
}

/// Weighted-least-squares slope of the diagram over octaves [j1, j2] and
/// the Hurst estimate `H = (1+s)/2`, with a chi-square alignment p-value.
#[derive(Debug, Clone, Copy)]
pub struct HurstEstimate {
    pub slope: f64,
    pub hurst: f64,
    pub j1: u32,
    pub j2: u32,
    /// Goodness-of-fit of the straight line; below 0.05 the region is not
    /// aligned and the estimate should be treated as rejected.
    pub alignment_pvalue: f64,
}

pub fn hurst_estimate(diagram: &LogscaleDiagram, j1: u32, j2: u32) -> Result<HurstEstimate> {
    if j1 >= j2 {
        return Err(Error::DomainError(format!("need j1 < j2, got ({j1}, {j2})")));
    }
    let (i1, i2) = match (diagram.pos(j1), diagram.pos(j2)) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::DomainError(format!(
                "octaves ({j1}, {j2}) outside diagram range {}..={}",
                diagram.octaves.first().unwrap(),
                diagram.octaves.last().unwrap()
            )))
        }
    };
    let js: Vec<f64> = diagram.octaves[i1..=i2].iter().map(|&j| j as f64).collect();
    let ys = &diagram.y[i1..=i2];
    let ws: Vec<f64> =
        diagram.n_coeffs[i1..=i2].iter().map(|&n| 1.0 / log2_chi2_var(n as f64)).collect();
    let s: f64 = ws.iter().sum();
    let sx: f64 = ws.iter().zip(&js).map(|(w, x)| w * x).sum();
    let sy: f64 = ws.iter().zip(ys).map(|(w, y)| w * y).sum();
    let sxx: f64 = ws.iter().zip(&js).map(|(w, x)| w * x * x).sum();
    let sxy: f64 = ws.iter().zip(&js).zip(ys).map(|((w, x), y)| w * x * y).sum();
    let denom = s * sxx - sx * sx;
    let slope = (s * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / s;

    let npts = js.len();
    let alignment_pvalue = if npts > 2 {
        let q: f64 = ws
            .iter()
            .zip(&js)
            .zip(ys)
            .map(|((w, x), y)| w * (y - slope * x - intercept).powi(2))
            .sum();
        let chi = ChiSquared::new((npts - 2) as f64).unwrap();
        1.0 - chi.cdf(q)
    } else {
        1.0
    };
    Ok(HurstEstimate { slope, hurst: (1.0 + slope) / 2.0, j1, j2, alignment_pvalue })
}

/// Automated alignment-region suggestion: the widest window whose straight
/// line passes the chi-square test, preferring coarse octaves on ties.
pub fn suggest_alignment(diagram: &LogscaleDiagram) -> Option<(u32, u32)> {
    let lo = *diagram.octaves.first()?;
    let hi = *diagram.octaves.last()?;
    if hi - lo < 2 {
        return None;
    }
    let mut best: Option<(u32, u32, f64)> = None;
    for width in (2..=(hi - lo)).rev() {
        for j2 in ((lo + width)..=hi).rev() {
            let j1 = j2 - width;
            if let Ok(est) = hurst_estimate(diagram, j1, j2) {
                if est.alignment_pvalue >= 0.05 {
                    return Some((j1, j2));
                }
                if best.map(|(_, _, p)| est.alignment_pvalue > p).unwrap_or(true) {
                    best = Some((j1, j2, est.alignment_pvalue));
                }
            }
        }
    }
    best.map(|(a, b, _)| (a, b))
}
