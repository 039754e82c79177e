//! Per-packet backoff distribution: exact first and second moments, the
//! convolution density, fractional-moment classification, and the per-slot
//! event distribution.
//!
//! A packet that reaches stage κ accumulates the sum of κ+1 independent
//! stage backoffs; κ itself is geometric in the collision probability,
//! truncated at the highest stage. Two algebraic routes to the second
//! moment are kept deliberately separate (`cv_backoff` via the per-stage
//! delta expansion, `second_moment` via the conditional chain) so each can
//! check the other.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::params::{ProtocolParams, StageCount, MAX_STAGES, REL_TAIL_TOL};

/// Per-stage backoff variance convention: the discrete window value
/// `v_k² = (1/3)·(2b_k+1)/(2b_k−1)`, or its continuous limit 1/3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageVarianceMode {
    Discrete,
    Continuous,
}

impl StageVarianceMode {
    fn vk2_of_window(self, window: f64) -> f64 {
        match self {
            StageVarianceMode::Continuous => 1.0 / 3.0,
            StageVarianceMode::Discrete => (window + 1.0) / (3.0 * (window - 1.0)),
        }
    }
}

/// Incremental per-stage powers of the series weights; keeps deep stage
/// sums free of m^k overflow.
struct StagePowers {
    gamma: f64,
    m: f64,
    /// γ^k
    gk: f64,
    /// (mγ)^k
    mgk: f64,
    /// (m²γ)^k
    m2gk: f64,
    /// 2·b0·m^k, saturating
    window: f64,
}

impl StagePowers {
    fn new(gamma: f64, params: &ProtocolParams) -> Self {
        StagePowers {
            gamma,
            m: params.m,
            gk: 1.0,
            mgk: 1.0,
            m2gk: 1.0,
            window: 2.0 * params.b0 as f64,
        }
    }

    /// `B_k·γ^k` with `B_k = b0·m^k − 1/2`.
    fn bg(&self, b0: f64) -> f64 {
        b0 * self.mgk - 0.5 * self.gk
    }

    /// `B_k²·γ^k`.
    fn b2g(&self, b0: f64) -> f64 {
        b0 * b0 * self.m2gk - b0 * self.mgk + 0.25 * self.gk
    }

    fn advance(&mut self) {
        self.gk *= self.gamma;
        self.mgk *= self.m * self.gamma;
        self.m2gk *= self.m * self.m * self.gamma;
        self.window = (self.window * self.m).min(1e300);
    }
}

/// A possibly-infinite moment. The second moment of the per-packet backoff
/// is finite iff `m²·γ < 1` when the stage count is unbounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MomentValue {
    Finite(f64),
    Infinite,
}

impl MomentValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            MomentValue::Finite(v) => Some(v),
            MomentValue::Infinite => None,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            MomentValue::Finite(v) => v,
            MomentValue::Infinite => f64::INFINITY,
        }
    }
}

/// Summary statistics of the per-packet backoff Ω.
#[derive(Debug, Clone)]
pub struct BackoffStats {
    pub mean: f64,
    pub second_moment: f64,
    pub variance: f64,
    pub cv: f64,
    pub kappa_pmf: Vec<f64>,
}

impl BackoffStats {
    pub fn compute(
        gamma: f64,
        params: &ProtocolParams,
        mode: StageVarianceMode,
    ) -> Result<BackoffStats> {
        let mean = mean_backoff(gamma, params)?;
        let second = second_moment(gamma, params, mode)?;
        let (second_moment, variance, cv) = match second {
            MomentValue::Finite(m2) => {
                let var = (m2 - mean * mean).max(0.0);
                (m2, var, var.sqrt() / mean)
            }
            MomentValue::Infinite => (f64::INFINITY, f64::INFINITY, f64::INFINITY),
        };
        Ok(BackoffStats {
            mean,
            second_moment,
            variance,
            cv,
            kappa_pmf: stage_reach_pmf(gamma, params.k),
        })
    }
}

/// Distribution of the highest stage reached by a packet:
/// `P[κ=k] = γ^k − γ^{k+1}` below K and `γ^K` at K. For an unbounded stage
/// count this is geometric, truncated once the tail is negligible.
pub fn stage_reach_pmf(gamma: f64, k: StageCount) -> Vec<f64> {
    assert!((0.0..1.0).contains(&gamma));
    match k {
        StageCount::Finite(k) => {
            let mut pmf = Vec::with_capacity(k as usize + 1);
            let mut gk = 1.0;
            for _ in 0..k {
                pmf.push(gk * (1.0 - gamma));
                gk *= gamma;
            }
            pmf.push(gk);
            pmf
        }
        StageCount::Infinite => {
            if gamma == 0.0 {
                return vec![1.0];
            }
            let stages = ((REL_TAIL_TOL * (1.0 - gamma)).ln() / gamma.ln()).ceil() as u32;
            let mut pmf = Vec::with_capacity(stages as usize);
            let mut gk = 1.0;
            for _ in 0..stages.min(MAX_STAGES) {
                pmf.push(gk * (1.0 - gamma));
                gk *= gamma;
            }
            pmf
        }
    }
}

/// Mean per-packet backoff `Ω̄ = Σ γ^k·(b0·m^k − 1/2)` in slots.
pub fn mean_backoff(gamma: f64, params: &ProtocolParams) -> Result<f64> {
    assert!((0.0..1.0).contains(&gamma));
    match params.k {
        StageCount::Finite(k) => {
            let b0 = params.b0 as f64;
            let mut total = 0.0;
            let mut gk = 1.0;
            let mut mgk = 1.0;
            for _ in 0..=k {
                total += b0 * mgk - 0.5 * gk;
                gk *= gamma;
                mgk *= params.m * gamma;
            }
            Ok(total)
        }
        StageCount::Infinite => {
            if gamma >= 1.0 / params.m {
                return Err(Error::DivergentSeries { gamma, bound: 1.0 / params.m });
            }
            Ok(params.b0 as f64 / (1.0 - params.m * gamma) - 0.5 / (1.0 - gamma))
        }
    }
}

/// Coefficient of variation of the per-packet backoff via the per-stage
/// delta expansion:
///
/// `v_Ω² = Σ δ_k / (Σ (b0·m^k − 1/2)·γ^k)² − 1`
///
/// with `δ_k = B_k·γ^k·{((m+1)/(m−1) + v_k²)·B_k − k − (2b0−1)/(m−1)}` and
/// `B_k = b0·m^k − 1/2`.
pub fn cv_backoff(
    gamma: f64,
    params: &ProtocolParams,
    mode: StageVarianceMode,
) -> Result<MomentValue> {
    assert!((0.0..1.0).contains(&gamma));
    let m = params.m;
    let b0 = params.b0 as f64;
    let stages = match params.k {
        StageCount::Finite(k) => k + 1,
        StageCount::Infinite => {
            if gamma >= 1.0 / m {
                return Err(Error::DivergentSeries { gamma, bound: 1.0 / m });
            }
            if gamma * m * m >= 1.0 {
                return Ok(MomentValue::Infinite);
            }
            params.series_stages(gamma, m * m)?
        }
    };
    let tilt = (m + 1.0) / (m - 1.0);
    let drift = (2.0 * b0 - 1.0) / (m - 1.0);
    let mut num = 0.0;
    let mut den = 0.0;
    let mut pw = StagePowers::new(gamma, params);
    for k in 0..stages {
        let vk2 = mode.vk2_of_window(pw.window);
        // δ_k = (tilt + v_k²)·B_k²γ^k − (k + drift)·B_kγ^k
        num += (tilt + vk2) * pw.b2g(b0) - (k as f64 + drift) * pw.bg(b0);
        den += pw.bg(b0);
        pw.advance();
    }
    let v2 = num / (den * den) - 1.0;
    Ok(MomentValue::Finite(v2.max(0.0).sqrt()))
}

/// Second moment of the per-packet backoff via the conditional chain over
/// the reached stage:
///
/// `E[Ω²] = Σ_k P[κ=k]·( Σ_{k'≤k} (1+v_{k'}²)/q_{k'}² + 2·Σ_{i<j≤k} 1/(q_i·q_j) )`.
pub fn second_moment(
    gamma: f64,
    params: &ProtocolParams,
    mode: StageVarianceMode,
) -> Result<MomentValue> {
    assert!((0.0..1.0).contains(&gamma));
    let stages = match params.k {
        StageCount::Finite(k) => k + 1,
        StageCount::Infinite => {
            if gamma >= 1.0 / params.m {
                return Err(Error::DivergentSeries { gamma, bound: 1.0 / params.m });
            }
            if gamma * params.m * params.m >= 1.0 {
                return Ok(MomentValue::Infinite);
            }
            params.series_stages(gamma, params.m * params.m)?
        }
    };
    // Reorder the conditional chain by stage index j, each weighted by the
    // reach probability P[κ ≥ j] = γ^j:
    //   E[Ω²] = Σ_j γ^j·( (1+v_j²)·B_j² + 2·B_j·Σ_{i<j} B_i ).
    // The cross product expands into pure geometric pieces so that deep
    // stages never form m^k intermediates.
    let m = params.m;
    let b0 = params.b0 as f64;
    let mut total = 0.0;
    let mut pw = StagePowers::new(gamma, params);
    for j in 0..stages {
        let vj2 = mode.vk2_of_window(pw.window);
        let jf = j as f64;
        // B_j·γ^j·S_{j−1} with S_{j−1} = b0·(m^j−1)/(m−1) − j/2
        let cross = b0 * b0 / (m - 1.0) * (pw.m2gk - pw.mgk) - 0.5 * b0 * jf * pw.mgk
            - 0.5 * b0 / (m - 1.0) * (pw.mgk - pw.gk)
            + 0.25 * jf * pw.gk;
        total += (1.0 + vj2) * pw.b2g(b0) + 2.0 * cross;
        pw.advance();
    }
    Ok(MomentValue::Finite(total))
}

/// Numerical density of the per-packet backoff on a uniform grid.
#[derive(Debug, Clone)]
pub struct DensityGrid {
    pub x: Vec<f64>,
    pub f: Vec<f64>,
    pub cell_width: f64,
}

impl DensityGrid {
    /// Trapezoid integral over the whole grid.
    pub fn total_mass(&self) -> f64 {
        trapezoid(&self.f, self.cell_width)
    }

    /// Trapezoid mean of the grid density.
    pub fn mean(&self) -> f64 {
        let weighted: Vec<f64> =
            self.x.iter().zip(self.f.iter()).map(|(x, f)| x * f).collect();
        trapezoid(&weighted, self.cell_width)
    }

    /// Trapezoid CV of the grid density.
    pub fn cv(&self) -> f64 {
        let mean = self.mean();
        let weighted: Vec<f64> =
            self.x.iter().zip(self.f.iter()).map(|(x, f)| x * x * f).collect();
        let m2 = trapezoid(&weighted, self.cell_width);
        ((m2 - mean * mean).max(0.0)).sqrt() / mean
    }

    /// Two-column CSV (x, f) for plotting.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "x,f")?;
        for (x, f) in self.x.iter().zip(self.f.iter()) {
            writeln!(w, "{x},{f}")?;
        }
        Ok(())
    }
}

fn trapezoid(f: &[f64], h: f64) -> f64 {
    if f.len() < 2 {
        return 0.0;
    }
    let interior: f64 = f[1..f.len() - 1].iter().sum();
    h * (0.5 * (f[0] + f[f.len() - 1]) + interior)
}

/// Grid resolution and truncation controls for `pdf_backoff`.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub cell_width: f64,
    /// Residual stage-reach mass below which further stages are dropped.
    pub mass_tol: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { cell_width: 0.25, mass_tol: 1e-6 }
    }
}

/// Density of Ω under continuous per-stage uniforms, built by iterated
/// direct convolution on the grid.
///
/// Stage-k density is uniform on `[0, 2b_k−1]`; convolving with a uniform is
/// a sliding window of the running cdf, which keeps each stage O(grid).
/// Stages whose reach probability is below `spec.mass_tol` are dropped, so
/// the returned density integrates to 1 minus that truncated mass.
pub fn pdf_backoff(gamma: f64, params: &ProtocolParams, spec: GridSpec) -> Result<DensityGrid> {
    assert!((0.0..1.0).contains(&gamma));
    let h = spec.cell_width;
    let w0 = params.window(0) - 1.0;
    if !(h > 0.0) || h > w0 / 8.0 {
        return Err(Error::GridTooCoarse { cell_width: h, max_allowed: w0 / 8.0 });
    }
    // stages to carry: reach probability γ^k >= mass_tol
    let mut kmax = match params.k {
        StageCount::Finite(k) => k,
        StageCount::Infinite => MAX_STAGES - 1,
    };
    if gamma == 0.0 {
        kmax = 0;
    } else {
        let cut = (spec.mass_tol.ln() / gamma.ln()).floor() as u32;
        kmax = kmax.min(cut);
    }
    let pmf = stage_reach_pmf(gamma, params.k);

    let support: f64 = (0..=kmax).map(|k| params.window(k) - 1.0).sum();
    // two spare cells keep the support edge off the trapezoid boundary
    let n = (support / h).ceil() as usize + 3;
    let x: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();

    // Stage-0 rectangle sampled with a half-cell edge ramp, then
    // renormalized so the trapezoid mass is exactly one; each later stage
    // slides a window of width W_k over the running cdf.
    let mut dens: Vec<f64> = x
        .iter()
        .map(|&xi| ((w0 - xi) / h + 0.5).clamp(0.0, 1.0) / w0)
        .collect();
    let mass0 = trapezoid(&dens, h);
    let mut cdf = vec![0.0; n];
    let mut run = 0.0;
    for i in 1..n {
        run += 0.5 * h * (dens[i - 1] + dens[i]);
        cdf[i] = run;
    }
    for i in 0..n {
        dens[i] /= mass0;
        cdf[i] /= mass0;
    }
    let mut acc: Vec<f64> = dens.iter().map(|d| d * stage_weight(&pmf, 0)).collect();

    for k in 1..=kmax {
        let wk = params.window(k) - 1.0;
        let cells = wk / h;
        let whole = cells.floor() as usize;
        let frac = cells - whole as f64;
        for i in 0..n {
            // F(x - W) by linear interpolation
            let tail = if i >= whole {
                let j = i - whole;
                if frac == 0.0 {
                    cdf[j]
                } else if j == 0 {
                    // x - W < x_0: cdf is 0 below the grid
                    cdf[0] * (1.0 - frac).max(0.0)
                } else {
                    cdf[j] * (1.0 - frac) + cdf[j - 1] * frac
                }
            } else {
                0.0
            };
            dens[i] = (cdf[i] - tail) / wk;
        }
        // rebuild the running cdf and restore exact unit mass
        let mut run = 0.0;
        cdf[0] = 0.0;
        for i in 1..n {
            run += 0.5 * h * (dens[i - 1] + dens[i]);
            cdf[i] = run;
        }
        let mass = cdf[n - 1];
        for i in 0..n {
            dens[i] /= mass;
            cdf[i] /= mass;
        }
        let wk_weight = stage_weight(&pmf, k as usize);
        if wk_weight > 0.0 {
            for i in 0..n {
                acc[i] += wk_weight * dens[i];
            }
        }
    }
    Ok(DensityGrid { x, f: acc, cell_width: h })
}

fn stage_weight(pmf: &[f64], k: usize) -> f64 {
    pmf.get(k).copied().unwrap_or(0.0)
}

/// Complementary cdf of a grid density at `x`, by trapezoid from `x` to the
/// end of the grid.
pub fn ccdf_backoff(density: &DensityGrid, x: f64) -> f64 {
    let h = density.cell_width;
    let n = density.f.len();
    if x <= density.x[0] {
        return density.total_mass().min(1.0);
    }
    if x >= density.x[n - 1] {
        return 0.0;
    }
    let pos = x / h;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    // full cells above i+1, plus the partial cell [x, x_{i+1}]
    let mut total = 0.0;
    for j in (i + 1)..n - 1 {
        total += 0.5 * h * (density.f[j] + density.f[j + 1]);
    }
    let fx = density.f[i] * (1.0 - frac) + density.f[i + 1] * frac;
    total += 0.5 * (h - frac * h) * (fx + density.f[i + 1]);
    total.min(1.0)
}

/// Outcome of the fractional-moment evaluation `E[Ω^c]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FracMoment {
    Finite { value: f64, std_error: f64 },
    Infinite,
}

/// Fractional moment `E[Ω^c]` for an unbounded stage count.
///
/// Classification is analytic: the moment is infinite exactly when
/// `m^c·γ ≥ 1` (c at or past the tail exponent). The finite branch sums
/// `P[κ=k]·E[(Σ_{k'≤k} B_{k'})^c]` with the conditional expectation
/// estimated by Monte Carlo on a common set of stage paths, truncating by
/// ratio test. The reported standard error is taken across paths and so
/// accounts for the correlation between stage terms.
pub fn fractional_moment(
    c: f64,
    gamma: f64,
    params: &ProtocolParams,
    paths: usize,
    seed: u64,
) -> Result<FracMoment> {
    assert!(c >= 0.0);
    assert!(gamma > 0.0 && gamma < 1.0);
    if params.k.is_finite() {
        return Err(Error::InvalidParams(
            "fractional_moment classifies the unbounded-stage regime".into(),
        ));
    }
    if gamma >= 1.0 / params.m {
        return Err(Error::DivergentSeries { gamma, bound: 1.0 / params.m });
    }
    if params.m.powf(c) * gamma >= 1.0 {
        return Ok(FracMoment::Infinite);
    }
    let ratio = params.m.powf(c) * gamma;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut sums = vec![0.0f64; paths];
    let mut totals = vec![0.0f64; paths];
    let mut running_mean = 0.0;
    let mut k = 0u32;
    loop {
        let w = params.window(k) - 1.0;
        for s in sums.iter_mut() {
            *s += rng.random::<f64>() * w;
        }
        let pk = gamma.powi(k as i32) * (1.0 - gamma);
        let mut term = 0.0;
        for (t, s) in totals.iter_mut().zip(sums.iter()) {
            let v = pk * s.powf(c);
            *t += v;
            term += v;
        }
        term /= paths as f64;
        running_mean += term;
        // geometric tail bound on the remaining stage terms
        if k > 2 && term * ratio / (1.0 - ratio) < 1e-6 * running_mean {
            break;
        }
        k += 1;
        if k >= MAX_STAGES {
            break;
        }
    }
    let mean = totals.iter().sum::<f64>() / paths as f64;
    let var = totals.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / (paths as f64 - 1.0);
    Ok(FracMoment::Finite { value: mean, std_error: (var / paths as f64).sqrt() })
}

/// Per-slot event probabilities under independent attempts at rate `p_bar`,
/// and the induced geometric law of per-slot success counts.
#[derive(Debug, Clone, Copy)]
pub struct SlotEventDistribution {
    /// Probability a resolution round is a success (exactly one attempter).
    pub p_success: f64,
    /// Probability a resolution round is a collision (two or more).
    pub p_collision: f64,
    /// Geometric ratio `P_S/(1 − P_C)` of the per-slot success count.
    pub geometric_ratio: f64,
}

impl SlotEventDistribution {
    /// `P[x successes in one slot] = (1 − r)·r^x`.
    pub fn pmf(&self, x: u32) -> f64 {
        (1.0 - self.geometric_ratio) * self.geometric_ratio.powi(x as i32)
    }
}

/// Success/collision split of a slot when each of `n` nodes attempts
/// independently with probability `p_bar`, with busy slots re-resolved in
/// place.
pub fn slot_event_distribution(p_bar: f64, n: u32) -> SlotEventDistribution {
    assert!(p_bar > 0.0 && p_bar < 1.0);
    assert!(n >= 2);
    let nf = n as f64;
    let idle = (1.0 - p_bar).powf(nf);
    let p_success = nf * p_bar * (1.0 - p_bar).powf(nf - 1.0);
    let p_collision = 1.0 - idle - p_success;
    SlotEventDistribution {
        p_success,
        p_collision,
        geometric_ratio: p_success / (1.0 - p_collision),
    }
}
