//! Fixed-point analysis of the single-cell backoff process.
//!
//! Couples the per-node attempt rate (a function of the collision
//! probability through the stage series) with the per-slot collision
//! probability seen by an attempting node, and solves the pair by bisection.
//! Also derives the stage-occupancy distribution and the tail exponent of
//! the per-packet backoff.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{ProtocolParams, StageCount};

/// Solved operating point of the cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixedPointSolution {
    /// Per-attempt collision probability.
    pub gamma: f64,
    /// Per-slot attempt probability of a node.
    pub p_bar: f64,
    /// Tail exponent `−ln γ / ln m`; `f64::INFINITY` when γ = 0.
    pub alpha: f64,
    /// Stage-occupancy distribution over stages 0..=K (truncated when K is
    /// unbounded).
    pub phi: Vec<f64>,
    /// Residual `|γ − (1 − e^{−(N−1)·p̄(γ)})|` at the returned γ.
    pub residual: f64,
}

/// Average per-slot attempt probability at collision probability `gamma`:
/// the ratio of expected attempts per packet to expected backoff slots per
/// packet. Closed geometric forms are used when the stage count is
/// unbounded.
pub fn attempt_rate(gamma: f64, params: &ProtocolParams) -> Result<f64> {
    assert!((0.0..1.0).contains(&gamma), "gamma must be in [0,1)");
    match params.k {
        StageCount::Finite(k) => {
            let b0 = params.b0 as f64;
            let mut num = 0.0;
            let mut den = 0.0;
            let mut gk = 1.0;
            let mut mgk = 1.0; // (m·γ)^k, kept incremental to survive deep stages
            for _ in 0..=k {
                num += gk;
                den += b0 * mgk - 0.5 * gk;
                gk *= gamma;
                mgk *= params.m * gamma;
            }
            Ok(num / den)
        }
        StageCount::Infinite => {
            if gamma >= 1.0 / params.m {
                return Err(Error::DivergentSeries { gamma, bound: 1.0 / params.m });
            }
            let num = 1.0 / (1.0 - gamma);
            let den = params.b0 as f64 / (1.0 - params.m * gamma) - 0.5 / (1.0 - gamma);
            Ok(num / den)
        }
    }
}

/// Probability that an attempt collides when `n − 1` other nodes attempt at
/// rate `p_bar` per slot: `1 − e^{−(N−1)·p̄}`.
pub fn collision_prob(p_bar: f64, n: u32) -> f64 {
    assert!((0.0..=1.0).contains(&p_bar), "p_bar must be in [0,1]");
    assert!(n >= 1);
    1.0 - (-((n - 1) as f64) * p_bar).exp()
}

/// Tail exponent `α = −ln(γ)/ln(m)` of the per-packet backoff distribution.
/// Returns `f64::INFINITY` for γ = 0 (every packet clears at stage 0).
pub fn tail_exponent(gamma: f64, m: f64) -> f64 {
    assert!((0.0..1.0).contains(&gamma));
    assert!(m > 1.0);
    if gamma == 0.0 {
        f64::INFINITY
    } else {
        -gamma.ln() / m.ln()
    }
}

/// Stage-occupancy distribution `φ_k ∝ γ^k/q_k`. For an unbounded stage
/// count the output is truncated once the remaining mass is negligible.
pub fn stage_distribution(gamma: f64, params: &ProtocolParams) -> Result<Vec<f64>> {
    assert!((0.0..1.0).contains(&gamma));
    let stages = params.series_stages(gamma, params.m)?;
    let b0 = params.b0 as f64;
    let mut w = Vec::with_capacity(stages as usize);
    let mut gk = 1.0;
    let mut mgk = 1.0;
    for _ in 0..stages {
        w.push(b0 * mgk - 0.5 * gk);
        gk *= gamma;
        mgk *= params.m * gamma;
    }
    let total: f64 = w.iter().sum();
    for v in &mut w {
        *v /= total;
    }
    Ok(w)
}

/// Solve the coupled fixed point by bisection on γ.
///
/// The attempt rate is non-increasing in γ and the collision map is
/// increasing in p̄, so the composite map is non-increasing and the root is
/// bracketed on [0, γ_hi]: γ_hi = 1 for finite K, and just inside the
/// series convergence boundary 1/m for unbounded K.
pub fn solve_fixed_point(params: &ProtocolParams, tol: f64) -> Result<FixedPointSolution> {
    assert!(tol > 0.0);
    let hi0 = match params.k {
        StageCount::Finite(_) => 1.0 - f64::EPSILON,
        StageCount::Infinite => 1.0 / params.m - 1e-9,
    };
    let excess = |gamma: f64| -> Result<f64> {
        let p = attempt_rate(gamma, params)?;
        Ok(collision_prob(p, params.n) - gamma)
    };

    let mut lo = 0.0_f64;
    let mut hi = hi0;
    let mut best = 0.0;
    let mut best_res = excess(0.0)?.abs();
    const MAX_ITERS: u32 = 200;
    for _ in 0..MAX_ITERS {
        let mid = 0.5 * (lo + hi);
        let e = excess(mid)?;
        if e.abs() < best_res {
            best = mid;
            best_res = e.abs();
        }
        if best_res <= tol || hi - lo < f64::EPSILON * hi.max(1.0) {
            break;
        }
        if e > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if best_res > tol {
        return Err(Error::NoConvergence { best, residual: best_res });
    }
    let gamma = best;
    let p_bar = attempt_rate(gamma, params)?;
    Ok(FixedPointSolution {
        gamma,
        p_bar,
        alpha: tail_exponent(gamma, params.m),
        phi: stage_distribution(gamma, params)?,
        residual: best_res,
    })
}

/// Smallest stage index K₀ at which the solved γ*(K) drops below 1/m, found
/// by scanning K upward. Helper for monotonicity studies.
pub fn locate_k0(params: &ProtocolParams, k_max: u32, tol: f64) -> Result<Option<u32>> {
    for k in 0..=k_max {
        let sol = solve_fixed_point(&params.with_k(StageCount::Finite(k)), tol)?;
        if sol.gamma < 1.0 / params.m {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::REL_TAIL_TOL;
    use proptest::prelude::*;

    /// Independent fixed-point oracle: direct term-by-term summation and 60
    /// interval halvings, sharing no code with the implementation above.
    fn oracle_bisect(m: f64, b0: f64, k: u32, n: u32) -> f64 {
        let pbar = |g: f64| {
            let mut num = 0.0;
            let mut den = 0.0;
            for kk in 0..=k {
                num += g.powi(kk as i32);
                den += (b0 * m.powi(kk as i32) - 0.5) * g.powi(kk as i32);
            }
            num / den
        };
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let g = 1.0 - (-((n - 1) as f64) * pbar(mid)).exp();
            if g > mid {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Frozen output of `oracle_bisect(2, 16, 6, 10)`.
    const GOLDEN_GAMMA_N10: f64 = 0.291773282984;

    #[test]
    fn attempt_rate_at_zero_gamma_is_q0() {
        let p = ProtocolParams::dot11b(10);
        assert_eq!(attempt_rate(0.0, &p).unwrap(), 2.0 / 31.0);
    }

    #[test]
    fn attempt_rate_matches_direct_summation() {
        // gamma = 0.25, m = 2, b0 = 16, K = 6: seven-term oracle
        let mut num = 0.0;
        let mut den = 0.0;
        for k in 0..=6u32 {
            num += 0.25f64.powi(k as i32);
            den += (16.0 * 2f64.powi(k as i32) - 0.5) * 0.25f64.powi(k as i32);
        }
        let p = ProtocolParams::dot11b(10);
        let got = attempt_rate(0.25, &p).unwrap();
        assert!((got - num / den).abs() < 1e-15);
        assert!((got - 0.0428927681).abs() < 1e-9);
        assert!((num - (1.0 - 0.25f64.powi(7)) / 0.75).abs() < 1e-12);
    }

    #[test]
    fn attempt_rate_divergent_at_geometric_boundary() {
        let p = ProtocolParams::new(2.0, 16, StageCount::Infinite, 5).unwrap();
        assert!(matches!(
            attempt_rate(0.5, &p),
            Err(Error::DivergentSeries { .. })
        ));
    }

    #[test]
    fn infinite_k_closed_form_matches_truncated_sum() {
        let p_inf = ProtocolParams::new(2.0, 16, StageCount::Infinite, 5).unwrap();
        let p_big = p_inf.with_k(StageCount::Finite(4000));
        for &g in &[0.05, 0.2, 0.4, 0.49] {
            let a = attempt_rate(g, &p_inf).unwrap();
            let b = attempt_rate(g, &p_big).unwrap();
            assert!((a - b).abs() / a < 1e-12, "gamma={g}: {a} vs {b}");
        }
    }

    #[test]
    fn collision_prob_trivia() {
        assert_eq!(collision_prob(0.7, 1), 0.0);
        assert_eq!(collision_prob(0.0, 50), 0.0);
        let g = collision_prob(0.05, 21);
        assert!((g - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!((g - 0.63212).abs() < 1e-5);
    }

    #[test]
    fn single_node_never_collides() {
        let sol = solve_fixed_point(&ProtocolParams::dot11b(1), 1e-12).unwrap();
        assert_eq!(sol.gamma, 0.0);
        assert_eq!(sol.p_bar, 2.0 / 31.0);
        assert!(sol.alpha.is_infinite());
    }

    #[test]
    fn golden_fixed_point_n10() {
        let oracle = oracle_bisect(2.0, 16.0, 6, 10);
        assert!((oracle - GOLDEN_GAMMA_N10).abs() < 1e-10, "oracle drifted: {oracle}");
        let sol = solve_fixed_point(&ProtocolParams::dot11b(10), 1e-10).unwrap();
        assert!((sol.gamma - GOLDEN_GAMMA_N10).abs() < 1e-9);
        assert!(sol.residual <= 1e-10);
    }

    #[test]
    fn residual_below_tol_across_parameter_grid() {
        for &b0 in &[8u32, 16] {
            for k in 1..=16u32 {
                for n in (2..=100u32).step_by(7) {
                    let p = ProtocolParams::new(2.0, b0, StageCount::Finite(k), n).unwrap();
                    let sol = solve_fixed_point(&p, 1e-10).unwrap();
                    assert!(
                        sol.residual <= 1e-10,
                        "b0={b0} K={k} N={n}: residual {}",
                        sol.residual
                    );
                }
            }
        }
    }

    #[test]
    fn gamma_nonincreasing_in_k_past_k0() {
        for &n in &[5u32, 20, 50] {
            let base = ProtocolParams::dot11b(n);
            let k0 = locate_k0(&base, 16, 1e-12).unwrap().expect("K0 exists");
            let mut prev = f64::INFINITY;
            for k in k0..=16 {
                let sol = solve_fixed_point(&base.with_k(StageCount::Finite(k)), 1e-12).unwrap();
                assert!(sol.gamma < 0.5, "N={n} K={k}: gamma {} not < 1/m", sol.gamma);
                assert!(
                    sol.gamma <= prev + 1e-12,
                    "N={n} K={k}: gamma {} > previous {prev}",
                    sol.gamma
                );
                prev = sol.gamma;
            }
        }
    }

    #[test]
    fn infinite_k_solution_inside_convergence_region() {
        for &n in &[2u32, 10, 50, 100] {
            let p = ProtocolParams::new(2.0, 16, StageCount::Infinite, n).unwrap();
            let sol = solve_fixed_point(&p, 1e-10).unwrap();
            assert!(sol.gamma < 0.5, "N={n}: gamma {}", sol.gamma);
            assert!(sol.alpha > 1.0, "N={n}: alpha {}", sol.alpha);
        }
    }

    #[test]
    fn stage_distribution_at_zero_gamma() {
        let p = ProtocolParams::dot11b(10);
        let phi = stage_distribution(0.0, &p).unwrap();
        assert_eq!(phi[0], 1.0);
        assert!(phi[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn stage_distribution_matches_summation_oracle() {
        let p = ProtocolParams::dot11b(10);
        let phi = stage_distribution(0.25, &p).unwrap();
        let den: f64 = (0..=6)
            .map(|k| (16.0 * 2f64.powi(k) - 0.5) * 0.25f64.powi(k))
            .sum();
        assert!((phi[0] - 15.5 / den).abs() < 1e-15);
        assert!((phi[0] - 0.498659).abs() < 1e-6);
    }

    #[test]
    fn tail_exponent_reference_points() {
        assert!((tail_exponent(0.25, 2.0) - 2.0).abs() < 1e-15);
        assert!((tail_exponent(0.5, 2.0) - 1.0).abs() < 1e-15);
        assert!((tail_exponent(1.0 / 9.0, 3.0) - 2.0).abs() < 1e-14);
        assert!((tail_exponent(0.2, 2.0) - 2.3219).abs() < 1e-4);
        assert!(tail_exponent(0.0, 2.0).is_infinite());
    }

    proptest! {
        #[test]
        fn stage_distribution_normalized(gamma in 0.0..0.95f64, k in 1u32..16) {
            let p = ProtocolParams::new(2.0, 16, StageCount::Finite(k), 10).unwrap();
            let phi = stage_distribution(gamma, &p).unwrap();
            let total: f64 = phi.iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            if gamma > 0.0 {
                prop_assert!(phi.iter().all(|&x| x > 0.0));
            }
        }

        #[test]
        fn attempt_rate_nonincreasing_in_gamma(k in 1u32..12, b0 in 4u32..64) {
            let p = ProtocolParams::new(2.0, b0, StageCount::Finite(k), 10).unwrap();
            let mut prev = f64::INFINITY;
            for i in 0..40 {
                let g = i as f64 * 0.995 / 39.0;
                let rate = attempt_rate(g, &p).unwrap();
                prop_assert!(rate <= prev + 1e-15);
                prev = rate;
            }
        }
    }

    #[test]
    fn truncated_phi_mass_is_tight() {
        let p = ProtocolParams::new(2.0, 16, StageCount::Infinite, 10).unwrap();
        let phi = stage_distribution(0.3, &p).unwrap();
        let total: f64 = phi.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        // tail of the untruncated series beyond the cut is below tolerance
        assert!(*phi.last().unwrap() < REL_TAIL_TOL * 10.0);
    }
}
