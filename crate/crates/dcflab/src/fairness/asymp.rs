//! Heavy-regime inter-transmission pmf: a Telecom-marginal window
//! probability mixed over an α-stable time change.
//!
//! For each mixing ordinate y the tagged node's ζ-packet epoch dilates to
//! `τ(y) = 1 + ζ^{(1−α)/α}·ℓ₀·y` with y totally skewed stable, and the
//! centred count fluctuation follows the Telecom marginal at time τ(y)/c.
//! The pmf of the others' count z is then
//!
//! `P[z] = ∫ [F_{τ(y)/c}(q₊) − F_{τ(y)/c}(q₋)]·Lv(y) dy`,
//!
//! `q_∓ = −(z ∓ 1/2 − (N−1)ζτ(y))/(ζc)`.
//!
//! Consecutive z windows tile the line, so sums over z ranges telescope to
//! two cdf evaluations per mixing node; the evaluator exploits that for
//! normalization and tail sums.

use crate::error::Result;
use crate::fairness::stable::{stable_pdf_cdf, StableParams};
use crate::fairness::telecom::TelecomMarginal;
use crate::fairness::FairnessSpec;
use crate::quad;

struct MixNode {
    /// Quadrature weight times the stable density at this ordinate.
    weight: f64,
    tau: f64,
    marginal: TelecomMarginal,
}

/// Fixed mixing-quadrature evaluator for one fairness spec. Building it
/// costs one Telecom table per mixing node; evaluations after that are
/// cheap and reusable across the whole z sweep.
pub struct AsympEvaluator {
    spec: FairnessSpec,
    nodes: Vec<MixNode>,
    /// Stable mass not covered by the mixing grid.
    pub truncated_mass: f64,
}

/// Floor on the dilated epoch: below this the window probability is
/// negligible for any nonnegative z and the ordinate is skipped.
const TAU_FLOOR: f64 = 1e-9;

impl AsympEvaluator {
    pub fn new(spec: &FairnessSpec) -> Result<Self> {
        assert!(
            spec.alpha > 1.0 && spec.alpha < 2.0 && spec.c.is_finite(),
            "heavy-regime spec required (build with FairnessSpec::new)"
        );
        let lv = StableParams::standard(spec.alpha, 1.0)?;
        let scale = (spec.zeta as f64).powf((1.0 - spec.alpha) / spec.alpha) * spec.ell0;
        // mixing domain: τ(y) > 0 on the left; right end where the stable
        // tail mass is negligible for a unit-normalized pmf
        let y_tau_floor = (TAU_FLOOR - 1.0) / scale;
        let y_lo = y_tau_floor.max(-40.0);
        let mut y_hi = 40.0f64;
        while 1.0 - stable_pdf_cdf(&lv, y_hi)?.1 > 3e-5 && y_hi < 1e7 {
            y_hi *= 1.6;
        }
        // bulk panels, then geometric panels out to the tail
        let mut edges = Vec::new();
        let bulk_hi = y_hi.min(24.0);
        let n_bulk = 30;
        for i in 0..=n_bulk {
            edges.push(y_lo + (bulk_hi - y_lo) * i as f64 / n_bulk as f64);
        }
        let mut e = bulk_hi;
        while e < y_hi {
            e = (e * 1.5).min(y_hi);
            edges.push(e);
        }
        let mut nodes = Vec::new();
        let mut covered = 0.0;
        for w in edges.windows(2) {
            let (a, b) = (w[0], w[1]);
            let c = 0.5 * (a + b);
            let h = 0.5 * (b - a);
            for (k, (&x, &wk)) in quad::XGK.iter().zip(quad::WGK.iter()).enumerate() {
                let _ = k;
                let ys: &[f64] = if x == 0.0 { &[0.0] } else { &[-x, x] };
                for &sgn in ys {
                    let y = c + h * sgn;
                    let tau = 1.0 + scale * y;
                    if tau <= TAU_FLOOR {
                        continue;
                    }
                    let density = stable_pdf_cdf(&lv, y)?.0;
                    let weight = wk * h * density;
                    covered += weight;
                    if weight < 1e-14 {
                        continue;
                    }
                    nodes.push(MixNode {
                        weight,
                        tau,
                        marginal: TelecomMarginal::new(tau / spec.c, spec.alpha)?,
                    });
                }
            }
        }
        Ok(AsympEvaluator { spec: *spec, nodes, truncated_mass: (1.0 - covered).max(0.0) })
    }

    fn q_edge(&self, z_edge: f64, tau: f64) -> f64 {
        let s = &self.spec;
        -(z_edge - (s.n as f64 - 1.0) * s.zeta as f64 * tau) / (s.zeta as f64 * s.c)
    }

    /// pmf at one count z.
    pub fn pmf(&self, z: i64) -> f64 {
        let z = z as f64;
        self.nodes
            .iter()
            .map(|n| {
                let hi = n.marginal.cdf(self.q_edge(z - 0.5, n.tau));
                let lo = n.marginal.cdf(self.q_edge(z + 0.5, n.tau));
                n.weight * (hi - lo)
            })
            .sum::<f64>()
            .max(0.0)
    }

    /// Total pmf mass over the inclusive range [z_lo, z_hi], telescoped.
    pub fn mass(&self, z_lo: i64, z_hi: i64) -> f64 {
        assert!(z_lo <= z_hi);
        self.nodes
            .iter()
            .map(|n| {
                let hi = n.marginal.cdf(self.q_edge(z_lo as f64 - 0.5, n.tau));
                let lo = n.marginal.cdf(self.q_edge(z_hi as f64 + 0.5, n.tau));
                n.weight * (hi - lo)
            })
            .sum::<f64>()
            .max(0.0)
    }

    /// `P[Z > z]` implied by the pmf, telescoped to one cdf per node.
    pub fn implied_ccdf(&self, z: i64) -> f64 {
        self.nodes
            .iter()
            .map(|n| n.weight * n.marginal.cdf(self.q_edge(z as f64 + 0.5, n.tau)))
            .sum::<f64>()
            .max(0.0)
    }

    /// Mode over a z range, by coarse scan then local refinement.
    pub fn mode_in(&self, z_lo: i64, z_hi: i64, coarse_step: i64) -> i64 {
        let mut best = (z_lo, self.pmf(z_lo));
        let mut z = z_lo;
        while z <= z_hi {
            let p = self.pmf(z);
            if p > best.1 {
                best = (z, p);
            }
            z += coarse_step.max(1);
        }
        let lo = (best.0 - coarse_step).max(z_lo);
        let hi = (best.0 + coarse_step).min(z_hi);
        let fine = (coarse_step / 16).max(1);
        let mut z = lo;
        while z <= hi {
            let p = self.pmf(z);
            if p > best.1 {
                best = (z, p);
            }
            z += fine;
        }
        best.0
    }

    /// First moment over [z_lo, z_hi] computed from the pmf on a stride
    /// grid (probabilities between grid points interpolate linearly enough
    /// for a mean at the stride scales used in tests).
    pub fn mean_in(&self, z_lo: i64, z_hi: i64, stride: i64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        let mut z = z_lo;
        while z <= z_hi {
            let p = self.pmf(z);
            num += z as f64 * p;
            den += p;
            z += stride.max(1);
        }
        num / den
    }
}

/// One-shot heavy-regime pmf at a single z. For sweeps build an
/// [`AsympEvaluator`] once instead.
pub fn asymp_inter_tx(z: i64, spec: &FairnessSpec) -> Result<f64> {
    Ok(AsympEvaluator::new(spec)?.pmf(z))
}
