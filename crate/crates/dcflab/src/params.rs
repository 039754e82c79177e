//! Protocol parameter tuple shared by every module.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Highest backoff stage index: a concrete stage `K`, or unbounded doubling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StageCount {
    Finite(u32),
    Infinite,
}

impl StageCount {
    pub fn is_finite(self) -> bool {
        matches!(self, StageCount::Finite(_))
    }

    /// Finite value if there is one.
    pub fn finite(self) -> Option<u32> {
        match self {
            StageCount::Finite(k) => Some(k),
            StageCount::Infinite => None,
        }
    }
}

impl std::fmt::Display for StageCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StageCount::Finite(k) => write!(f, "{k}"),
            StageCount::Infinite => write!(f, "inf"),
        }
    }
}

/// The 802.11 parameter tuple: multiplicative window factor `m`, half initial
/// contention window `b0` (stage-k window is `2·b0·m^k`), highest stage index
/// `K`, and node count `N`.
///
/// Stage-k attempt probability is `q_k = 2/(2·b0·m^k − 1)`, the inverse of the
/// stage-k mean backoff. Windows need not be integral: `m` is any real > 1.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ProtocolParams {
    pub m: f64,
    pub b0: u32,
    pub k: StageCount,
    pub n: u32,
}

impl ProtocolParams {
    pub fn new(m: f64, b0: u32, k: StageCount, n: u32) -> Result<Self> {
        if !(m > 1.0) || !m.is_finite() {
            return Err(Error::InvalidParams(format!("m must be > 1, got {m}")));
        }
        if b0 < 1 {
            return Err(Error::InvalidParams("b0 must be >= 1".into()));
        }
        if n < 1 {
            return Err(Error::InvalidParams("N must be >= 1".into()));
        }
        Ok(ProtocolParams { m, b0, k, n })
    }

    /// 802.11b defaults: m = 2, initial window 32, K = 6.
    pub fn dot11b(n: u32) -> Self {
        ProtocolParams { m: 2.0, b0: 16, k: StageCount::Finite(6), n }
    }

    /// 802.11a/g defaults: m = 2, initial window 16, K = 6.
    pub fn dot11ag(n: u32) -> Self {
        ProtocolParams { m: 2.0, b0: 8, k: StageCount::Finite(6), n }
    }

    pub fn with_n(mut self, n: u32) -> Self {
        self.n = n;
        self
    }

    pub fn with_k(mut self, k: StageCount) -> Self {
        self.k = k;
        self
    }

    /// Stage-k contention window `2·b0·m^k` (may be non-integral).
    pub fn window(&self, k: u32) -> f64 {
        2.0 * self.b0 as f64 * self.m.powi(k as i32)
    }

    /// Mean stage-k backoff `1/q_k = b0·m^k − 1/2`.
    pub fn stage_mean(&self, k: u32) -> f64 {
        self.b0 as f64 * self.m.powi(k as i32) - 0.5
    }

    /// Stage-k attempt probability `q_k = 2/(2·b0·m^k − 1)`.
    pub fn q(&self, k: u32) -> f64 {
        1.0 / self.stage_mean(k)
    }

    /// Number of stages to carry when summing a stage series weighted by
    /// `gamma^k`: either K+1, or enough that the dropped geometric tail is
    /// below `REL_TAIL_TOL` of the total. `growth` is the per-stage factor of
    /// the summand on top of `gamma` (1, m, or m² depending on the series).
    pub(crate) fn series_stages(&self, gamma: f64, growth: f64) -> Result<u32> {
        match self.k {
            StageCount::Finite(k) => Ok(k + 1),
            StageCount::Infinite => {
                let r = gamma * growth;
                if r >= 1.0 {
                    return Err(Error::DivergentSeries { gamma, bound: 1.0 / growth });
                }
                if r <= 0.0 {
                    return Ok(1);
                }
                // r^n/(1-r) < tol  =>  n > log(tol·(1-r))/log(r)
                let n = ((REL_TAIL_TOL * (1.0 - r)).ln() / r.ln()).ceil();
                Ok((n.max(1.0) as u32).min(MAX_STAGES))
            }
        }
    }
}

/// Relative tail mass below which an infinite stage series is truncated.
pub(crate) const REL_TAIL_TOL: f64 = 1e-12;

/// Hard cap on carried stages, reached only with gamma close to a
/// convergence boundary.
pub(crate) const MAX_STAGES: u32 = 4096;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_tuples() {
        assert!(ProtocolParams::new(1.0, 16, StageCount::Finite(6), 2).is_err());
        assert!(ProtocolParams::new(2.0, 0, StageCount::Finite(6), 2).is_err());
        assert!(ProtocolParams::new(2.0, 16, StageCount::Finite(6), 0).is_err());
        assert!(ProtocolParams::new(1.5, 1, StageCount::Infinite, 1).is_ok());
    }

    #[test]
    fn q_is_a_probability_for_valid_windows() {
        let p = ProtocolParams::dot11b(10);
        for k in 0..=6 {
            let q = p.q(k);
            assert!(q > 0.0 && q <= 1.0, "q_{k} = {q}");
        }
        assert!((p.q(0) - 2.0 / 31.0).abs() < 1e-15);
    }

    #[test]
    fn infinite_series_truncation_respects_boundary() {
        let p = ProtocolParams::new(2.0, 16, StageCount::Infinite, 10).unwrap();
        assert!(p.series_stages(0.5, 2.0).is_err());
        assert!(p.series_stages(0.49, 2.0).is_ok());
        let n = p.series_stages(0.2, 2.0).unwrap();
        // dropped tail of (m*gamma)^k must be tiny relative to the sum
        let r: f64 = 0.4;
        assert!(r.powi(n as i32) / (1.0 - r) < 2.0 * REL_TAIL_TOL / (1.0 - r));
    }
}
