//! Sample-path generation for the single-cell backoff process.
//!
//! Two modes are first class. The slot-level mode runs the cell
//! slot-by-slot in backoff time with endogenous collisions, including the
//! reuse of a slot after each success or collision. The renewal mode draws
//! per-packet backoffs i.i.d. from the compound law at a given collision
//! probability and superposes the per-node renewal processes, which is
//! exactly the decoupled picture the analysis works in. Comparing the two
//! makes the decoupling assumption itself testable.

use std::io::{BufRead, Write};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::stage_reach_pmf;
use crate::params::{ProtocolParams, StageCount, MAX_STAGES};

/// How slot-level backoff counters are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CounterMode {
    /// Integer counters on {0, …, 2b_k−1}; simultaneous expiry collides.
    Discrete,
    /// Real counters on [0, 2b_k−1]; the integer part drives the slot
    /// machinery, the real value is kept for per-packet bookkeeping.
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceMode {
    SlotLevel,
    Renewal,
}

/// A point-process record of one run.
#[derive(Debug, Clone)]
pub struct Trace {
    /// Per-node success times in backoff slots, ascending. Slot-level times
    /// are slot indices (ties across and within nodes possible through slot
    /// reuse); renewal times are continuous.
    pub arrivals_per_node: Vec<Vec<f64>>,
    /// Per-node per-packet backoff durations, in packet order.
    pub omega_samples: Vec<Vec<f64>>,
    /// Collisions per attempt in slot-level mode; the driving gamma in
    /// renewal mode.
    pub realized_gamma: f64,
    pub seed: u64,
    pub mode: TraceMode,
    /// Length of the run in backoff slots.
    pub horizon: f64,
}

/// Sidecar metadata serialized next to the CSV trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceMeta {
    pub params: ProtocolParams,
    pub seed: u64,
    pub realized_gamma: f64,
    pub mode: TraceMode,
    pub horizon: f64,
}

impl Trace {
    /// All arrivals pooled and sorted.
    pub fn merged_arrivals(&self) -> Vec<f64> {
        let mut all: Vec<f64> =
            self.arrivals_per_node.iter().flat_map(|a| a.iter().copied()).collect();
        all.sort_by(|a, b| a.total_cmp(b));
        all
    }

    pub fn total_arrivals(&self) -> usize {
        self.arrivals_per_node.iter().map(|a| a.len()).sum()
    }

    /// CSV rows (node_id, arrival_time_slots), nodes in order.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "node_id,arrival_time_slots")?;
        for (id, arrivals) in self.arrivals_per_node.iter().enumerate() {
            for t in arrivals {
                writeln!(w, "{id},{t}")?;
            }
        }
        Ok(())
    }

    /// Rebuild a trace from CSV rows. Backoff samples are not stored in the
    /// CSV; per-node arrival gaps stand in for them where needed.
    pub fn read_csv<R: BufRead>(r: R, meta: &TraceMeta) -> Result<Trace> {
        let mut per_node: Vec<Vec<f64>> = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line.map_err(|e| Error::ParseError(e.to_string()))?;
            if lineno == 0 && line.starts_with("node_id") {
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.splitn(2, ',');
            let id: usize = parts
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::ParseError(format!("bad node id at line {lineno}")))?;
            let t: f64 = parts
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::ParseError(format!("bad time at line {lineno}")))?;
            if per_node.len() <= id {
                per_node.resize(id + 1, Vec::new());
            }
            per_node[id].push(t);
        }
        for a in &mut per_node {
            a.sort_by(|x, y| x.total_cmp(y));
        }
        let omega = per_node
            .iter()
            .map(|a| a.windows(2).map(|w| w[1] - w[0]).collect())
            .collect();
        Ok(Trace {
            arrivals_per_node: per_node,
            omega_samples: omega,
            realized_gamma: meta.realized_gamma,
            seed: meta.seed,
            mode: meta.mode,
            horizon: meta.horizon,
        })
    }
}

struct NodeState {
    stage: u32,
    /// Whole slots left before the counter expires.
    slots_left: u64,
    /// Backoff accumulated by the in-flight packet, in counter units.
    omega_acc: f64,
}

fn draw_counter(rng: &mut ChaCha12Rng, params: &ProtocolParams, stage: u32, mode: CounterMode) -> (u64, f64) {
    match mode {
        CounterMode::Discrete => {
            let w = params.window(stage).round().max(1.0) as u64;
            let c = rng.random_range(0..w);
            (c, c as f64)
        }
        CounterMode::Continuous => {
            let c = rng.random::<f64>() * (params.window(stage) - 1.0);
            (c.floor() as u64, c)
        }
    }
}

fn bump_stage(stage: u32, k: StageCount) -> u32 {
    match k {
        StageCount::Finite(k) => (stage + 1) % (k + 1),
        StageCount::Infinite => (stage + 1).min(MAX_STAGES - 1),
    }
}

/// Slot-level simulation of the whole cell in backoff time.
///
/// Channel activity consumes no backoff time: each slot, every node whose
/// counter has expired attempts; a lone attempter succeeds and returns to
/// stage 0, two or more collide and advance a stage, and the slot is then
/// re-resolved for counters that were redrawn as zero. Idle stretches are
/// skipped in one jump.
pub fn simulate_cell(
    params: &ProtocolParams,
    horizon_slots: u64,
    seed: u64,
    counter_mode: CounterMode,
) -> Trace {
    assert!(horizon_slots > 0);
    let n = params.n as usize;
    let mut rngs: Vec<ChaCha12Rng> = (0..n)
        .map(|i| {
            let mut r = ChaCha12Rng::seed_from_u64(seed);
            r.set_stream(i as u64);
            r
        })
        .collect();
    let mut nodes: Vec<NodeState> = (0..n)
        .map(|i| {
            let (slots, c) = draw_counter(&mut rngs[i], params, 0, counter_mode);
            NodeState { stage: 0, slots_left: slots, omega_acc: c }
        })
        .collect();
    let mut arrivals: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut omegas: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut attempts = 0u64;
    let mut collided = 0u64;
    let mut t = 0u64;
    let mut expired: Vec<usize> = Vec::with_capacity(n);

    while t < horizon_slots {
        // resolve every event chained onto this slot
        loop {
            expired.clear();
            expired.extend((0..n).filter(|&i| nodes[i].slots_left == 0));
            match expired.len() {
                0 => break,
                1 => {
                    let i = expired[0];
                    attempts += 1;
                    arrivals[i].push(t as f64);
                    omegas[i].push(nodes[i].omega_acc);
                    nodes[i].stage = 0;
                    let (slots, c) = draw_counter(&mut rngs[i], params, 0, counter_mode);
                    nodes[i].slots_left = slots;
                    nodes[i].omega_acc = c;
                }
                _ => {
                    for &i in &expired {
                        attempts += 1;
                        collided += 1;
                        nodes[i].stage = bump_stage(nodes[i].stage, params.k);
                        let (slots, c) =
                            draw_counter(&mut rngs[i], params, nodes[i].stage, counter_mode);
                        nodes[i].slots_left = slots;
                        nodes[i].omega_acc += c;
                    }
                }
            }
        }
        // everyone counts down through the idle stretch to the next event
        let jump = nodes.iter().map(|s| s.slots_left).min().unwrap_or(1).max(1);
        for s in &mut nodes {
            s.slots_left -= jump;
        }
        t += jump;
    }

    Trace {
        arrivals_per_node: arrivals,
        omega_samples: omegas,
        realized_gamma: if attempts > 0 { collided as f64 / attempts as f64 } else { 0.0 },
        seed,
        mode: TraceMode::SlotLevel,
        horizon: horizon_slots as f64,
    }
}

fn draw_omega(rng: &mut ChaCha12Rng, gamma: f64, params: &ProtocolParams) -> f64 {
    let kcap = match params.k {
        StageCount::Finite(k) => k,
        StageCount::Infinite => MAX_STAGES - 1,
    };
    let mut total = rng.random::<f64>() * (params.window(0) - 1.0);
    let mut k = 0;
    while k < kcap && rng.random::<f64>() < gamma {
        k += 1;
        total += rng.random::<f64>() * (params.window(k).min(1e300) - 1.0);
    }
    total
}

/// `n` i.i.d. draws of the per-packet backoff: sample the reached stage,
/// then sum one continuous uniform per stage.
pub fn sample_per_packet_backoff(
    gamma: f64,
    params: &ProtocolParams,
    n: usize,
    seed: u64,
) -> Vec<f64> {
    assert!((0.0..1.0).contains(&gamma));
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    (0..n).map(|_| draw_omega(&mut rng, gamma, params)).collect()
}

/// Superpose `params.n` independent stationary renewal processes with
/// inter-arrival law Ω(gamma). Each component starts with an equilibrium
/// residual delay (length-biased interval, uniform position) so the merged
/// process is stationary from slot 0.
pub fn build_renewal_superposition(
    gamma: f64,
    params: &ProtocolParams,
    horizon: f64,
    seed: u64,
) -> Result<Trace> {
    assert!((0.0..1.0).contains(&gamma));
    assert!(horizon > 0.0);
    if params.k == StageCount::Infinite && gamma >= 1.0 / params.m {
        return Err(Error::DivergentSeries { gamma, bound: 1.0 / params.m });
    }
    // upper bound on Ω over the carried stages, for rejection sampling
    let pmf = stage_reach_pmf(gamma, params.k);
    let omega_max: f64 = (0..pmf.len()).map(|k| params.window(k as u32) - 1.0).sum();

    let n = params.n as usize;
    let mut arrivals: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut omegas: Vec<Vec<f64>> = Vec::with_capacity(n);
    for node in 0..n {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(node as u64);
        // equilibrium residual: accept an interval with probability
        // proportional to its length, then land uniformly inside it
        let first = loop {
            let w = draw_omega(&mut rng, gamma, params);
            if rng.random::<f64>() * omega_max < w {
                break rng.random::<f64>() * w;
            }
        };
        let mut node_arrivals = Vec::new();
        let mut node_omegas = Vec::new();
        let mut t = first;
        while t <= horizon {
            node_arrivals.push(t);
            let w = draw_omega(&mut rng, gamma, params);
            node_omegas.push(w);
            t += w;
        }
        // the last drawn gap extends past the horizon
        node_omegas.truncate(node_arrivals.len().saturating_sub(1));
        arrivals.push(node_arrivals);
        omegas.push(node_omegas);
    }
    Ok(Trace {
        arrivals_per_node: arrivals,
        omega_samples: omegas,
        realized_gamma: gamma,
        seed,
        mode: TraceMode::Renewal,
        horizon,
    })
}

/// Others' success counts over consecutive windows in which the tagged node
/// scores `zeta` successes.
pub fn inter_transmission_counts(trace: &Trace, tagged: usize, zeta: u32) -> Result<Vec<u64>> {
    assert!(zeta >= 1);
    let tagged_arr = trace
        .arrivals_per_node
        .get(tagged)
        .ok_or_else(|| Error::InsufficientTrace(format!("no node {tagged}")))?;
    let zeta = zeta as usize;
    if tagged_arr.len() < zeta + 1 {
        return Err(Error::InsufficientTrace(format!(
            "tagged node has {} successes, need at least {}",
            tagged_arr.len(),
            zeta + 1
        )));
    }
    let n_windows = (tagged_arr.len() - 1) / zeta;
    let mut z = vec![0u64; n_windows];
    for (id, arr) in trace.arrivals_per_node.iter().enumerate() {
        if id == tagged {
            continue;
        }
        for (j, zj) in z.iter_mut().enumerate() {
            let lo = tagged_arr[j * zeta];
            let hi = tagged_arr[(j + 1) * zeta];
            let a = arr.partition_point(|&v| v <= lo);
            let b = arr.partition_point(|&v| v <= hi);
            *zj += (b - a) as u64;
        }
    }
    Ok(z)
}

/// Merged arrival counts over consecutive fixed windows spanning the
/// horizon. Every arrival lands in exactly one window.
pub fn count_process(trace: &Trace, window_slots: f64) -> Vec<u64> {
    assert!(window_slots > 0.0);
    let n_windows = (trace.horizon / window_slots).ceil().max(1.0) as usize;
    let mut counts = vec![0u64; n_windows];
    for arrivals in &trace.arrivals_per_node {
        for &t in arrivals {
            let idx = ((t / window_slots) as usize).min(n_windows - 1);
            counts[idx] += 1;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpe::solve_fixed_point;
    use crate::moments::{cv_backoff, mean_backoff, StageVarianceMode};

    #[test]
    fn single_node_never_collides_and_omega_is_stage0() {
        let p = ProtocolParams::dot11b(1);
        let trace = simulate_cell(&p, 200_000, 42, CounterMode::Continuous);
        assert_eq!(trace.realized_gamma, 0.0);
        let om = &trace.omega_samples[0];
        assert!(om.len() > 10_000);
        let mean: f64 = om.iter().sum::<f64>() / om.len() as f64;
        assert!((mean - 15.5).abs() < 0.2, "mean {mean}");
        assert!(om.iter().all(|&x| (0.0..=31.0).contains(&x)));
    }

    #[test]
    fn identical_seeds_reproduce_traces() {
        let p = ProtocolParams::dot11b(8);
        let a = simulate_cell(&p, 100_000, 7, CounterMode::Discrete);
        let b = simulate_cell(&p, 100_000, 7, CounterMode::Discrete);
        assert_eq!(a.arrivals_per_node, b.arrivals_per_node);
        assert_eq!(a.omega_samples, b.omega_samples);
        assert_eq!(a.realized_gamma, b.realized_gamma);
        let c = simulate_cell(&p, 100_000, 8, CounterMode::Discrete);
        assert_ne!(a.arrivals_per_node, c.arrivals_per_node);
    }

    #[test]
    fn discrete_mode_gaps_equal_omega_samples() {
        let p = ProtocolParams::dot11b(5);
        let trace = simulate_cell(&p, 300_000, 3, CounterMode::Discrete);
        for (arr, om) in trace.arrivals_per_node.iter().zip(trace.omega_samples.iter()) {
            assert!(arr.len() > 100);
            // packet j+1 completes at arrival j+1; its backoff is the gap
            for j in 0..arr.len() - 1 {
                assert_eq!(arr[j + 1] - arr[j], om[j + 1], "node gap at packet {j}");
            }
        }
    }

    #[test]
    fn realized_gamma_tracks_fixed_point() {
        let p = ProtocolParams::dot11b(20);
        let sol = solve_fixed_point(&p, 1e-10).unwrap();
        let trace = simulate_cell(&p, 10_000_000, 11, CounterMode::Continuous);
        assert!(
            (trace.realized_gamma - sol.gamma).abs() < 0.02,
            "realized {} vs fixed point {}",
            trace.realized_gamma,
            sol.gamma
        );
    }

    #[test]
    fn empirical_omega_mean_tracks_analytic_law() {
        // moderate contention, where stage-path correlations stay small
        let p = ProtocolParams::dot11b(10);
        let trace = simulate_cell(&p, 6_000_000, 19, CounterMode::Continuous);
        let all: Vec<f64> =
            trace.omega_samples.iter().flat_map(|v| v.iter().copied()).collect();
        assert!(all.len() > 500_000);
        let emp = all.iter().sum::<f64>() / all.len() as f64;
        let analytic = mean_backoff(trace.realized_gamma, &p).unwrap();
        assert!(
            (emp - analytic).abs() / analytic < 0.02,
            "empirical {emp} vs analytic {analytic}"
        );
    }

    #[test]
    fn per_packet_sampler_matches_moments() {
        let p = ProtocolParams::dot11b(10);
        let gamma = 0.2;
        let n = 1_000_000;
        let s = sample_per_packet_backoff(gamma, &p, n, 99);
        let mean_a = mean_backoff(gamma, &p).unwrap();
        let cv_a = cv_backoff(gamma, &p, StageVarianceMode::Continuous)
            .unwrap()
            .finite()
            .unwrap();
        let nf = n as f64;
        let emp_mean = s.iter().sum::<f64>() / nf;
        let m2 = s.iter().map(|x| (x - emp_mean).powi(2)).sum::<f64>() / nf;
        let m3 = s.iter().map(|x| (x - emp_mean).powi(3)).sum::<f64>() / nf;
        let m4 = s.iter().map(|x| (x - emp_mean).powi(4)).sum::<f64>() / nf;
        let emp_cv = m2.sqrt() / emp_mean;
        let se_mean = m2.sqrt() / nf.sqrt();
        assert!((emp_mean - mean_a).abs() < 3.0 * se_mean, "{emp_mean} vs {mean_a}");
        // delta-method standard error of the CV from sample moments
        let var_sd = (m4 - m2 * m2) / (4.0 * m2 * nf);
        let var_mean = m2 / nf;
        let cov_mean_sd = m3 / (2.0 * m2.sqrt() * nf);
        let var_cv = var_sd / (emp_mean * emp_mean) + m2 / emp_mean.powi(4) * var_mean
            - 2.0 * m2.sqrt() / emp_mean.powi(3) * cov_mean_sd;
        let se_cv = var_cv.max(0.0).sqrt();
        assert!(
            (emp_cv - cv_a).abs() < 3.0 * se_cv,
            "{emp_cv} vs {cv_a} (se {se_cv})"
        );
        assert!(s.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn sampler_zero_gamma_is_uniform() {
        let p = ProtocolParams::dot11b(10);
        let s = sample_per_packet_backoff(0.0, &p, 200_000, 5);
        assert!(s.iter().all(|&x| (0.0..31.0).contains(&x)));
        let mean = s.iter().sum::<f64>() / s.len() as f64;
        assert!((mean - 15.5).abs() < 0.1);
    }

    #[test]
    fn renewal_single_process_reproduces_omega_law() {
        let p = ProtocolParams::dot11b(1);
        let gamma = 0.3;
        let trace = build_renewal_superposition(gamma, &p, 2_000_000.0, 21).unwrap();
        let gaps = &trace.omega_samples[0];
        assert!(gaps.len() > 10_000);
        let direct = sample_per_packet_backoff(gamma, &p, gaps.len(), 22);
        // two-sample KS
        let mut a = gaps.clone();
        let mut b = direct;
        a.sort_by(|x, y| x.total_cmp(y));
        b.sort_by(|x, y| x.total_cmp(y));
        let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
        while i < a.len() && j < b.len() {
            if a[i] <= b[j] {
                i += 1;
            } else {
                j += 1;
            }
            let diff = (i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs();
            d = d.max(diff);
        }
        let ne = (a.len() * b.len()) as f64 / (a.len() + b.len()) as f64;
        let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
        let p_value = 2.0 * (1..100).map(|k| {
            (-1.0f64).powi(k as i32 - 1) * (-2.0 * (k as f64 * lambda).powi(2)).exp()
        }).sum::<f64>();
        assert!(p_value > 0.01, "KS d={d} p={p_value}");
    }

    #[test]
    fn renewal_arrivals_strictly_increasing_per_node() {
        let p = ProtocolParams::dot11b(5);
        let trace = build_renewal_superposition(0.4, &p, 100_000.0, 13).unwrap();
        for arr in &trace.arrivals_per_node {
            for w in arr.windows(2) {
                assert!(w[1] > w[0]);
            }
        }
    }

    #[test]
    fn merged_intensity_is_additive() {
        let p = ProtocolParams::dot11b(50);
        let sol = solve_fixed_point(&p, 1e-10).unwrap();
        let obar = mean_backoff(sol.gamma, &p).unwrap();
        let horizon = 60_000.0;
        let trace = build_renewal_superposition(sol.gamma, &p, horizon, 17).unwrap();
        let expected = 50.0 * horizon / obar;
        let got = trace.total_arrivals() as f64;
        // count variance of a stationary renewal superposition ~ N·T·σ²/Ω̄³
        let cv = cv_backoff(sol.gamma, &p, StageVarianceMode::Continuous)
            .unwrap()
            .finite()
            .unwrap();
        let sigma = (expected * cv * cv).sqrt();
        assert!((got - expected).abs() < 4.0 * sigma, "{got} vs {expected} (sigma {sigma})");
    }

    #[test]
    fn stationary_rate_across_quarters() {
        let p = ProtocolParams::dot11b(50);
        let sol = solve_fixed_point(&p, 1e-10).unwrap();
        let obar = mean_backoff(sol.gamma, &p).unwrap();
        let cv = cv_backoff(sol.gamma, &p, StageVarianceMode::Continuous)
            .unwrap()
            .finite()
            .unwrap();
        let horizon = 400_000.0;
        let trace = build_renewal_superposition(sol.gamma, &p, horizon, 29).unwrap();
        let counts = count_process(&trace, horizon / 4.0);
        assert_eq!(counts.len(), 4);
        let expected = 50.0 * horizon / (4.0 * obar);
        let sigma = (expected * cv * cv).sqrt();
        for (i, &c) in counts.iter().enumerate() {
            assert!(
                (c as f64 - expected).abs() < 3.0 * sigma,
                "quarter {i}: {c} vs {expected} (sigma {sigma})"
            );
        }
    }

    #[test]
    fn inter_transmission_counts_basics() {
        let p = ProtocolParams::dot11b(1);
        let trace = build_renewal_superposition(0.2, &p, 500_000.0, 31).unwrap();
        let z = inter_transmission_counts(&trace, 0, 100).unwrap();
        assert!(z.iter().all(|&v| v == 0));

        let trace = Trace {
            arrivals_per_node: vec![vec![1.0, 2.0]],
            omega_samples: vec![vec![]],
            realized_gamma: 0.0,
            seed: 0,
            mode: TraceMode::Renewal,
            horizon: 10.0,
        };
        assert!(matches!(
            inter_transmission_counts(&trace, 0, 100),
            Err(Error::InsufficientTrace(_))
        ));
    }

    #[test]
    fn inter_transmission_mean_matches_population() {
        let p = ProtocolParams::dot11b(10);
        let sol = solve_fixed_point(&p, 1e-10).unwrap();
        let obar = mean_backoff(sol.gamma, &p).unwrap();
        let zeta = 50u32;
        // enough horizon for ~400 windows
        let horizon = 420.0 * zeta as f64 * obar;
        let trace = build_renewal_superposition(sol.gamma, &p, horizon, 37).unwrap();
        let z = inter_transmission_counts(&trace, 0, zeta).unwrap();
        assert!(z.len() >= 300, "only {} windows", z.len());
        let mean = z.iter().sum::<u64>() as f64 / z.len() as f64;
        let expected = 9.0 * zeta as f64;
        assert!((mean - expected).abs() / expected < 0.02, "{mean} vs {expected}");
    }

    #[test]
    fn count_process_partitions_all_arrivals() {
        let p = ProtocolParams::dot11b(10);
        let trace = build_renewal_superposition(0.3, &p, 50_000.0, 41).unwrap();
        let counts = count_process(&trace, 64.0);
        assert_eq!(counts.iter().sum::<u64>() as usize, trace.total_arrivals());
        let single = count_process(&trace, trace.horizon);
        assert_eq!(single.len(), 1);
        assert_eq!(single[0] as usize, trace.total_arrivals());

        let empty = Trace {
            arrivals_per_node: vec![Vec::new()],
            omega_samples: vec![Vec::new()],
            realized_gamma: 0.0,
            seed: 0,
            mode: TraceMode::Renewal,
            horizon: 1000.0,
        };
        assert!(count_process(&empty, 10.0).iter().all(|&c| c == 0));
    }

    #[test]
    fn csv_roundtrip_preserves_arrivals() {
        let p = ProtocolParams::dot11b(4);
        let trace = build_renewal_superposition(0.25, &p, 20_000.0, 51).unwrap();
        let mut buf = Vec::new();
        trace.write_csv(&mut buf).unwrap();
        let meta = TraceMeta {
            params: p,
            seed: trace.seed,
            realized_gamma: trace.realized_gamma,
            mode: trace.mode,
            horizon: trace.horizon,
        };
        let back = Trace::read_csv(std::io::BufReader::new(&buf[..]), &meta).unwrap();
        assert_eq!(back.arrivals_per_node, trace.arrivals_per_node);
    }

    /// The decoupled renewal picture at the 802.11a/g operating point for
    /// two nodes: per-packet CV comes out near 1.
    #[test]
    fn two_node_ag_renewal_cv_near_one() {
        let p = ProtocolParams::dot11ag(2);
        let sol = solve_fixed_point(&p, 1e-10).unwrap();
        let s = sample_per_packet_backoff(sol.gamma, &p, 400_000, 61);
        let mean = s.iter().sum::<f64>() / s.len() as f64;
        let var = s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (s.len() as f64 - 1.0);
        let cv = var.sqrt() / mean;
        assert!((cv - 1.0).abs() < 0.1, "cv {cv}");
    }
}
