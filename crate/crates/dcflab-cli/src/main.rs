//! Command-line front-end: solve the fixed point, sweep backoff moments,
//! generate traces, evaluate fairness pmfs, and run the wavelet analysis.
//!
//! Every command resolves its configuration (flags or `--config file`),
//! echoes it as one canonical JSON line on stdout, and writes outputs under
//! a per-run directory. Reruns with the same config and seed reproduce
//! outputs byte for byte.
//!
//! Exit codes: 0 success, 2 usage or invalid parameters, 3 numeric failure.

use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use dcflab::error::Error as LibError;
use dcflab::estimators::{hurst_estimate, logscale_diagram, suggest_alignment};
use dcflab::fairness::{
    estimate_ell, gaussian_inter_tx, select_regime, AsympEvaluator, FairnessSpec, Regime,
};
use dcflab::fpe::solve_fixed_point;
use dcflab::moments::{
    cv_backoff, mean_backoff, pdf_backoff, GridSpec, MomentValue, StageVarianceMode,
};
use dcflab::simulator::{
    build_renewal_superposition, count_process, sample_per_packet_backoff, simulate_cell,
    CounterMode, Trace, TraceMeta, TraceMode,
};
use dcflab::{ProtocolParams, StageCount};

#[derive(Parser)]
#[command(name = "dcflab", version, about = "Single-cell 802.11 backoff analysis toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve the attempt/collision fixed point and print the solution.
    Fpe(FpeArgs),
    /// Per-packet backoff statistics, swept over N or K, with optional
    /// density grid output.
    Moments(MomentsArgs),
    /// Generate traces (slot-level or renewal superposition).
    Simulate(SimulateArgs),
    /// Inter-transmission probability in the applicable regime.
    Fairness(FairnessArgs),
    /// Logscale diagram and Hurst estimate of a trace or count series.
    Wavelet(WaveletArgs),
}

fn parse_stage_count(s: &str) -> Result<StageCount, String> {
    if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinite") {
        Ok(StageCount::Infinite)
    } else {
        s.parse::<u32>().map(StageCount::Finite).map_err(|e| e.to_string())
    }
}

#[derive(Args, Serialize, Deserialize, Clone)]
struct ProtocolFlags {
    /// Contention-window multiplier.
    #[arg(long, default_value_t = 2.0)]
    m: f64,
    /// Initial contention window (2·b0).
    #[arg(long, default_value_t = 32)]
    cw0: u32,
    /// Highest backoff stage index, or "inf".
    #[arg(long = "K", value_parser = parse_stage_count, default_value = "6")]
    k: StageCount,
    /// Number of nodes.
    #[arg(long = "N", default_value_t = 10)]
    n: u32,
}

impl ProtocolFlags {
    fn params(&self) -> Result<ProtocolParams, CliError> {
        if self.cw0 < 2 || self.cw0 % 2 != 0 {
            return Err(CliError::usage(format!(
                "cw0 must be an even integer >= 2, got {}",
                self.cw0
            )));
        }
        ProtocolParams::new(self.m, self.cw0 / 2, self.k, self.n).map_err(CliError::from)
    }
}

#[derive(Args, Serialize, Deserialize, Clone)]
struct OutFlags {
    /// Output directory (a timestamped subdirectory is created under it
    /// unless --flat is given).
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Write directly into --out without a timestamped subdirectory.
    #[arg(long, default_value_t = false)]
    flat: bool,
}

impl OutFlags {
    fn run_dir(&self, cmd: &str) -> Result<PathBuf, CliError> {
        let dir = if self.flat {
            self.out.clone()
        } else {
            let stamp = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            self.out.join(format!("{cmd}-{stamp}"))
        };
        fs::create_dir_all(&dir).map_err(|e| CliError::io(format!("creating {dir:?}: {e}")))?;
        Ok(dir)
    }
}

#[derive(Args, Serialize, Deserialize, Clone)]
struct FpeArgs {
    #[command(flatten)]
    proto: ProtocolFlags,
    /// Residual tolerance of the bisection.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    out: OutFlags,
    /// Load the full configuration from a previously echoed JSON file.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Clone)]
struct MomentsArgs {
    #[command(flatten)]
    proto: ProtocolFlags,
    /// Sweep N over lo:hi (inclusive), keeping K fixed.
    #[arg(long, value_name = "LO:HI")]
    sweep_n: Option<String>,
    /// Sweep K over lo:hi (inclusive), keeping N fixed.
    #[arg(long, value_name = "LO:HI")]
    sweep_k: Option<String>,
    /// Use this collision probability instead of solving the fixed point.
    #[arg(long)]
    gamma: Option<f64>,
    /// Also write the density grid and ccdf of the per-packet backoff.
    #[arg(long, default_value_t = false)]
    pdf: bool,
    /// Density grid cell width in slots.
    #[arg(long, default_value_t = 0.25)]
    cell: f64,
    #[command(flatten)]
    out: OutFlags,
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Clone)]
struct SimulateArgs {
    #[command(flatten)]
    proto: ProtocolFlags,
    /// slot | renewal
    #[arg(long, default_value = "slot")]
    sim_mode: String,
    /// Horizon in backoff slots.
    #[arg(long, default_value_t = 1_000_000)]
    horizon: u64,
    /// Master seed; replicate r uses stream r.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    replicates: u32,
    /// Renewal mode: drive the backoff law at this collision probability
    /// (defaults to the solved fixed point).
    #[arg(long)]
    gamma: Option<f64>,
    /// Slot-level counter mode: discrete | continuous
    #[arg(long, default_value = "continuous")]
    counter: String,
    #[command(flatten)]
    out: OutFlags,
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Clone)]
struct FairnessArgs {
    #[command(flatten)]
    proto: ProtocolFlags,
    /// Tagged packet count per window.
    #[arg(long, default_value_t = 100)]
    zeta: u32,
    /// Tail prefactor of the per-packet ccdf; estimated by Monte Carlo when
    /// absent and the heavy regime applies.
    #[arg(long)]
    ell: Option<f64>,
    /// Estimate the tail prefactor from this trace CSV instead.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Emit the pmf over [z-lo, z-hi] with this stride.
    #[arg(long)]
    z_lo: Option<i64>,
    #[arg(long)]
    z_hi: Option<i64>,
    #[arg(long, default_value_t = 1)]
    z_step: i64,
    /// Seed for the tail-estimation Monte Carlo.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    out: OutFlags,
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Clone)]
struct WaveletArgs {
    /// Trace CSV (node_id, arrival_time_slots); requires the .meta.json
    /// sidecar next to it.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Plain count series, one value per line.
    #[arg(long)]
    series: Option<PathBuf>,
    /// Count window in slots; default sets the mean count per window to 16.
    #[arg(long)]
    window: Option<f64>,
    /// Daubechies vanishing moments (2..=4).
    #[arg(long, default_value_t = 2)]
    moments: usize,
    #[arg(long)]
    j1: Option<u32>,
    #[arg(long)]
    j2: Option<u32>,
    #[command(flatten)]
    out: OutFlags,
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

struct CliError {
    code: u8,
    msg: String,
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError { code: 2, msg: msg.into() }
    }
    fn numeric(msg: impl Into<String>) -> Self {
        CliError { code: 3, msg: msg.into() }
    }
    fn io(msg: impl Into<String>) -> Self {
        CliError { code: 1, msg: msg.into() }
    }
}

impl From<LibError> for CliError {
    fn from(e: LibError) -> Self {
        match e {
            LibError::InvalidParams(_) | LibError::DomainError(_) | LibError::ParseError(_) => {
                CliError { code: 2, msg: e.to_string() }
            }
            _ => CliError { code: 3, msg: e.to_string() },
        }
    }
}

fn load_config<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let body = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("reading config {path:?}: {e}")))?;
    serde_json::from_str(&body).map_err(|e| CliError::usage(format!("parsing config: {e}")))
}

/// Echo the canonical resolved config on stdout and into the run directory.
fn echo_config<T: Serialize>(cmd: &str, cfg: &T, dir: &Path) -> Result<(), CliError> {
    let line = serde_json::to_string(cfg).expect("config serializes");
    println!("{{\"command\":\"{cmd}\",\"config\":{line}}}");
    fs::write(dir.join("config.json"), format!("{line}\n"))
        .map_err(|e| CliError::io(e.to_string()))?;
    Ok(())
}

fn write_file(dir: &Path, name: &str, body: &[u8]) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    fs::write(&path, body).map_err(|e| CliError::io(format!("writing {path:?}: {e}")))?;
    Ok(path)
}

fn parse_range(s: &str) -> Result<(u32, u32), CliError> {
    let mut it = s.splitn(2, ':');
    let lo = it.next().and_then(|v| v.parse().ok());
    let hi = it.next().and_then(|v| v.parse().ok());
    match (lo, hi) {
        (Some(lo), Some(hi)) if lo <= hi => Ok((lo, hi)),
        _ => Err(CliError::usage(format!("bad range '{s}', expected LO:HI"))),
    }
}

fn cmd_fpe(mut args: FpeArgs) -> Result<(), CliError> {
    if let Some(path) = args.config.take() {
        args = load_config(&path)?;
    }
    let params = args.proto.params()?;
    if args.tol <= 0.0 {
        return Err(CliError::usage("tol must be positive"));
    }
    let dir = args.out.run_dir("fpe")?;
    echo_config("fpe", &args, &dir)?;
    let sol = solve_fixed_point(&params, args.tol).map_err(CliError::from)?;
    let body = serde_json::to_string_pretty(&sol).expect("solution serializes");
    write_file(&dir, "fpe.json", body.as_bytes())?;
    println!("{body}");
    Ok(())
}

fn cmd_moments(mut args: MomentsArgs) -> Result<(), CliError> {
    if let Some(path) = args.config.take() {
        args = load_config(&path)?;
    }
    let base = args.proto.params()?;
    let dir = args.out.run_dir("moments")?;
    echo_config("moments", &args, &dir)?;

    let sweep: Vec<ProtocolParams> = if let Some(range) = &args.sweep_n {
        let (lo, hi) = parse_range(range)?;
        (lo.max(1)..=hi).map(|n| base.with_n(n)).collect()
    } else if let Some(range) = &args.sweep_k {
        let (lo, hi) = parse_range(range)?;
        (lo..=hi).map(|k| base.with_k(StageCount::Finite(k))).collect()
    } else {
        vec![base]
    };

    let mut csv = String::from("n,k,gamma,mean,cv_discrete,cv_continuous\n");
    for p in &sweep {
        let gamma = match args.gamma {
            Some(g) if (0.0..1.0).contains(&g) => g,
            Some(g) => return Err(CliError::usage(format!("gamma {g} outside [0,1)"))),
            None => solve_fixed_point(p, 1e-10).map_err(CliError::from)?.gamma,
        };
        let mean = mean_backoff(gamma, p).map_err(CliError::from)?;
        let vd = cv_backoff(gamma, p, StageVarianceMode::Discrete).map_err(CliError::from)?;
        let vc = cv_backoff(gamma, p, StageVarianceMode::Continuous).map_err(CliError::from)?;
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            p.n,
            p.k,
            gamma,
            mean,
            vd.as_f64(),
            vc.as_f64()
        ));
    }
    write_file(&dir, "moments.csv", csv.as_bytes())?;
    print!("{csv}");

    if args.pdf {
        let p = sweep[0];
        let gamma = match args.gamma {
            Some(g) => g,
            None => solve_fixed_point(&p, 1e-10).map_err(CliError::from)?.gamma,
        };
        let grid = pdf_backoff(gamma, &p, GridSpec { cell_width: args.cell, mass_tol: 1e-6 })
            .map_err(CliError::from)?;
        let mut buf = Vec::new();
        grid.write_csv(&mut buf).map_err(|e| CliError::io(e.to_string()))?;
        write_file(&dir, "pdf.csv", &buf)?;
        let mut ccdf = String::from("x,ccdf\n");
        let mut remaining = grid.total_mass();
        let h = grid.cell_width;
        for i in 0..grid.x.len() {
            ccdf.push_str(&format!("{},{}\n", grid.x[i], remaining.max(0.0)));
            if i + 1 < grid.x.len() {
                remaining -= 0.5 * h * (grid.f[i] + grid.f[i + 1]);
            }
        }
        write_file(&dir, "ccdf.csv", ccdf.as_bytes())?;
    }
    Ok(())
}

fn cmd_simulate(mut args: SimulateArgs) -> Result<(), CliError> {
    if let Some(path) = args.config.take() {
        args = load_config(&path)?;
    }
    let params = args.proto.params()?;
    let dir = args.out.run_dir("simulate")?;
    echo_config("simulate", &args, &dir)?;
    let counter = match args.counter.as_str() {
        "discrete" => CounterMode::Discrete,
        "continuous" => CounterMode::Continuous,
        other => return Err(CliError::usage(format!("unknown counter mode '{other}'"))),
    };
    enum Mode {
        Slot(CounterMode),
        Renewal(f64),
    }
    let mode = match args.sim_mode.as_str() {
        "slot" => Mode::Slot(counter),
        "renewal" => {
            let gamma = match args.gamma {
                Some(g) if (0.0..1.0).contains(&g) => g,
                Some(g) => return Err(CliError::usage(format!("gamma {g} outside [0,1)"))),
                None => solve_fixed_point(&params, 1e-10).map_err(CliError::from)?.gamma,
            };
            Mode::Renewal(gamma)
        }
        other => return Err(CliError::usage(format!("unknown sim mode '{other}'"))),
    };

    let results: Vec<Result<(u32, f64), CliError>> = (0..args.replicates)
        .into_par_iter()
        .map(|rep| {
            // replicate seeds are streams of the master seed, so the count
            // of replicates never changes any one replicate's data
            let seed = args.seed.wrapping_add((rep as u64) << 32);
            let trace = match &mode {
                Mode::Slot(counter) => simulate_cell(&params, args.horizon, seed, *counter),
                Mode::Renewal(gamma) => {
                    build_renewal_superposition(*gamma, &params, args.horizon as f64, seed)
                        .map_err(CliError::from)?
                }
            };
            let mut csv = Vec::new();
            trace.write_csv(&mut csv).map_err(|e| CliError::io(e.to_string()))?;
            let base = format!("trace-{rep}");
            write_file(&dir, &format!("{base}.csv"), &csv)?;
            let meta = TraceMeta {
                params,
                seed,
                realized_gamma: trace.realized_gamma,
                mode: trace.mode,
                horizon: trace.horizon,
            };
            let meta_body = serde_json::to_string_pretty(&meta).expect("meta serializes");
            write_file(&dir, &format!("{base}.meta.json"), meta_body.as_bytes())?;
            Ok((rep, trace.realized_gamma))
        })
        .collect();
    for r in results {
        let (rep, gamma) = r?;
        println!("{{\"replicate\":{rep},\"realized_gamma\":{gamma}}}");
    }
    Ok(())
}

fn cmd_fairness(mut args: FairnessArgs) -> Result<(), CliError> {
    if let Some(path) = args.config.take() {
        args = load_config(&path)?;
    }
    let params = args.proto.params()?;
    if args.zeta < 1 {
        return Err(CliError::usage("zeta must be >= 1"));
    }
    let dir = args.out.run_dir("fairness")?;
    echo_config("fairness", &args, &dir)?;

    let sol = solve_fixed_point(&params, 1e-10).map_err(CliError::from)?;
    let v_omega = cv_backoff(sol.gamma, &params, StageVarianceMode::Discrete)
        .map_err(CliError::from)?
        .as_f64();
    let (regime, warning) = select_regime(params.k, sol.alpha);
    if let Some(w) = &warning {
        eprintln!("warning: {w}");
    }

    let mean = (params.n as f64 - 1.0) * args.zeta as f64;
    let (z_lo, z_hi) = match (args.z_lo, args.z_hi) {
        (Some(a), Some(b)) if a <= b => (a, b),
        (None, None) => ((mean * 0.2) as i64, (mean * 2.5) as i64),
        _ => return Err(CliError::usage("need both z-lo <= z-hi")),
    };
    if args.z_step < 1 {
        return Err(CliError::usage("z-step must be >= 1"));
    }

    let mut csv = String::from("z,probability,accuracy_estimate\n");
    let summary;
    match regime {
        Regime::Gaussian => {
            let spec = FairnessSpec::gaussian(params.n, args.zeta, v_omega);
            let mut z = z_lo;
            while z <= z_hi {
                csv.push_str(&format!("{z},{},0\n", gaussian_inter_tx(z, &spec)));
                z += args.z_step;
            }
            summary = serde_json::json!({
                "regime": "gaussian",
                "gamma": sol.gamma,
                "alpha": sol.alpha,
                "v_omega": v_omega,
                "mean": mean,
                "std": spec.gaussian_std(),
            });
        }
        Regime::Heavy => {
            if !(sol.alpha > 1.0 && sol.alpha < 2.0) {
                return Err(CliError::numeric(format!(
                    "heavy regime needs alpha in (1,2); solved alpha = {}",
                    sol.alpha
                )));
            }
            let obar = mean_backoff(sol.gamma, &params).map_err(CliError::from)?;
            let ell = match (args.ell, &args.trace) {
                (Some(e), _) if e > 0.0 => e,
                (Some(e), _) => return Err(CliError::usage(format!("ell {e} must be > 0"))),
                (None, Some(path)) => estimate_ell_from_trace(path, sol.alpha, obar)?,
                (None, None) => {
                    // Monte Carlo tail of the analytic law at the solved point
                    let mut s =
                        sample_per_packet_backoff(sol.gamma, &params, 2_000_000, args.seed);
                    s.sort_by(|a, b| a.total_cmp(b));
                    let pts = dcflab::estimators::log_spaced_ccdf(
                        &s,
                        s[(0.95 * s.len() as f64) as usize],
                        s[(0.9999 * s.len() as f64) as usize],
                        40,
                    );
                    estimate_ell(&pts, sol.alpha, obar).map_err(CliError::from)?.0
                }
            };
            let spec = FairnessSpec::new(params.n, args.zeta, v_omega, sol.alpha, ell, obar)
                .map_err(CliError::from)?;
            let ev = AsympEvaluator::new(&spec).map_err(CliError::from)?;
            let mut z = z_lo;
            while z <= z_hi {
                csv.push_str(&format!("{z},{},{}\n", ev.pmf(z), ev.truncated_mass));
                z += args.z_step;
            }
            summary = serde_json::json!({
                "regime": "heavy",
                "gamma": sol.gamma,
                "alpha": sol.alpha,
                "v_omega": v_omega,
                "ell": ell,
                "ell0": spec.ell0,
                "c": spec.c,
                "omega_bar": obar,
                "mean": mean,
                "accuracy_estimate": ev.truncated_mass,
            });
        }
    }
    write_file(&dir, "pmf.csv", csv.as_bytes())?;
    let body = serde_json::to_string_pretty(&summary).expect("summary serializes");
    write_file(&dir, "fairness.json", body.as_bytes())?;
    println!("{body}");
    Ok(())
}

fn estimate_ell_from_trace(path: &Path, alpha: f64, obar: f64) -> Result<f64, CliError> {
    let meta = read_meta(path)?;
    let file =
        fs::File::open(path).map_err(|e| CliError::usage(format!("opening {path:?}: {e}")))?;
    let trace = Trace::read_csv(BufReader::new(file), &meta).map_err(CliError::from)?;
    let mut gaps: Vec<f64> =
        trace.omega_samples.iter().flat_map(|v| v.iter().copied()).collect();
    if gaps.len() < 1000 {
        return Err(CliError::usage("trace too small to estimate the tail prefactor"));
    }
    gaps.sort_by(|a, b| a.total_cmp(b));
    let pts = dcflab::estimators::log_spaced_ccdf(
        &gaps,
        gaps[(0.95 * gaps.len() as f64) as usize],
        gaps[(0.9999 * gaps.len() as f64) as usize],
        40,
    );
    Ok(estimate_ell(&pts, alpha, obar).map_err(CliError::from)?.0)
}

fn read_meta(trace_path: &Path) -> Result<TraceMeta, CliError> {
    let meta_path = trace_path.with_extension("meta.json");
    let body = fs::read_to_string(&meta_path)
        .map_err(|e| CliError::usage(format!("reading sidecar {meta_path:?}: {e}")))?;
    serde_json::from_str(&body).map_err(|e| CliError::usage(format!("parsing sidecar: {e}")))
}

fn cmd_wavelet(mut args: WaveletArgs) -> Result<(), CliError> {
    if let Some(path) = args.config.take() {
        args = load_config(&path)?;
    }
    let dir = args.out.run_dir("wavelet")?;
    echo_config("wavelet", &args, &dir)?;

    let counts: Vec<f64> = match (&args.trace, &args.series) {
        (Some(path), None) => {
            let meta = read_meta(path)?;
            let file = fs::File::open(path)
                .map_err(|e| CliError::usage(format!("opening {path:?}: {e}")))?;
            let trace = Trace::read_csv(BufReader::new(file), &meta).map_err(CliError::from)?;
            let window = match args.window {
                Some(w) if w > 0.0 => w,
                Some(w) => return Err(CliError::usage(format!("window {w} must be > 0"))),
                None => {
                    // aim for a mean count of 16 per window
                    16.0 * meta.horizon / trace.total_arrivals().max(1) as f64
                }
            };
            count_process(&trace, window).into_iter().map(|c| c as f64).collect()
        }
        (None, Some(path)) => {
            let body = fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("reading {path:?}: {e}")))?;
            body.lines()
                .filter(|l| !l.trim().is_empty())
                .map(|l| l.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::usage(format!("parsing series: {e}")))?
        }
        _ => return Err(CliError::usage("provide exactly one of --trace or --series")),
    };

    let diag = logscale_diagram(&counts, args.moments).map_err(CliError::from)?;
    let mut buf = Vec::new();
    diag.write_csv(&mut buf).map_err(|e| CliError::io(e.to_string()))?;
    write_file(&dir, "logscale.csv", &buf)?;

    let (j1, j2) = match (args.j1, args.j2) {
        (Some(a), Some(b)) => (a, b),
        (None, None) => suggest_alignment(&diag)
            .ok_or_else(|| CliError::numeric("diagram too short to pick an alignment region"))?,
        _ => return Err(CliError::usage("provide both --j1 and --j2 or neither")),
    };
    let est = hurst_estimate(&diag, j1, j2).map_err(CliError::from)?;
    let body = serde_json::json!({
        "slope": est.slope,
        "hurst": est.hurst,
        "j1": est.j1,
        "j2": est.j2,
        "alignment_pvalue": est.alignment_pvalue,
        "series_len": counts.len(),
    });
    let body = serde_json::to_string_pretty(&body).expect("serializes");
    write_file(&dir, "hurst.json", body.as_bytes())?;
    println!("{body}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Fpe(a) => cmd_fpe(a),
        Cmd::Moments(a) => cmd_moments(a),
        Cmd::Simulate(a) => cmd_simulate(a),
        Cmd::Fairness(a) => cmd_fairness(a),
        Cmd::Wavelet(a) => cmd_wavelet(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError { code, msg }) => {
            let mut stderr = std::io::stderr().lock();
            let _ = writeln!(stderr, "error: {msg}");
            ExitCode::from(code)
        }
    }
}
