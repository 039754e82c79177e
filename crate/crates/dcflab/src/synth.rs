//! Reference process generators used as estimator fixtures: fractional
//! Gaussian noise by circulant embedding, white noise, and Poisson
//! arrivals.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Exp, StandardNormal};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Autocovariance of unit-variance fGn at lag k.
fn fgn_autocov(k: usize, h: f64) -> f64 {
    let k = k as f64;
    let p = 2.0 * h;
    0.5 * ((k + 1.0).powf(p) - 2.0 * k.powf(p) + (k - 1.0).abs().powf(p))
}

/// Fractional Gaussian noise of length `n` with Hurst index `hurst`, unit
/// variance, by circulant embedding of the covariance (exact in
/// distribution when the embedding is nonnegative definite, which holds for
/// fGn with 0 < H < 1).
pub fn fgn(n: usize, hurst: f64, seed: u64) -> Result<Vec<f64>> {
    if !(0.0 < hurst && hurst < 1.0) {
        return Err(Error::DomainError(format!("hurst must be in (0,1), got {hurst}")));
    }
    if n < 2 {
        return Err(Error::EmptyInput);
    }
    let m = 2 * n;
    // first row of the circulant: r_0..r_n, then mirrored r_{n-1}..r_1
    let mut row: Vec<Complex64> = Vec::with_capacity(m);
    for k in 0..=n {
        row.push(Complex64::new(fgn_autocov(k, hurst), 0.0));
    }
    for k in (1..n).rev() {
        row.push(Complex64::new(fgn_autocov(k, hurst), 0.0));
    }
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(m);
    fft.process(&mut row);
    // eigenvalues of the circulant; tiny negative values are rounding
    let eig: Vec<f64> = row
        .iter()
        .map(|c| {
            if c.re < -1e-7 {
                f64::NAN
            } else {
                c.re.max(0.0)
            }
        })
        .collect();
    if eig.iter().any(|v| v.is_nan()) {
        return Err(Error::DomainError("circulant embedding not nonnegative definite".into()));
    }

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let mut spectrum = vec![Complex64::new(0.0, 0.0); m];
    let draw = |rng: &mut ChaCha12Rng| -> f64 { normal.sample(rng) };
    spectrum[0] = Complex64::new(eig[0].sqrt() * draw(&mut rng), 0.0);
    spectrum[n] = Complex64::new(eig[n].sqrt() * draw(&mut rng), 0.0);
    for k in 1..n {
        let s = (eig[k] / 2.0).sqrt();
        let re = s * draw(&mut rng);
        let im = s * draw(&mut rng);
        spectrum[k] = Complex64::new(re, im);
        spectrum[m - k] = Complex64::new(re, -im);
    }
    fft.process(&mut spectrum);
    let scale = 1.0 / (m as f64).sqrt();
    Ok(spectrum[..n].iter().map(|c| c.re * scale).collect())
}

/// Cumulative sum of fGn: fractional Brownian motion samples at integer
/// times.
pub fn fbm(n: usize, hurst: f64, seed: u64) -> Result<Vec<f64>> {
    let noise = fgn(n, hurst, seed)?;
    let mut acc = 0.0;
    Ok(noise
        .into_iter()
        .map(|x| {
            acc += x;
            acc
        })
        .collect())
}

/// i.i.d. standard normal series.
pub fn white_noise(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// Homogeneous Poisson arrival times on [0, horizon].
pub fn poisson_process(rate: f64, horizon: f64, seed: u64) -> Vec<f64> {
    assert!(rate > 0.0 && horizon > 0.0);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let exp = Exp::new(rate).unwrap();
    let mut out = Vec::with_capacity((rate * horizon * 1.1) as usize + 16);
    let mut t: f64 = exp.sample(&mut rng);
    while t <= horizon {
        out.push(t);
        t += exp.sample(&mut rng);
    }
    out
}
