//! Power-law fits of the counting data against the asymptotic laws:
//! |Omega_{N,A}| ~ N^{2 delta_A}, the weighted sums with exponent 2 s_0(w),
//! and the thickened counts with exponent 2 delta_A - gamma/2.

use serde::Serialize;

use crate::counting::{
    enumerate_complex_parallel, enumerate_real_parallel, ComplexAlphabet, CountTable,
    ThickenedWindow,
};
use crate::error::{Error, Result};

/// Ordinary least squares on (log N, log count).
#[derive(Debug, Clone, Serialize)]
pub struct PowerLawFit {
    pub slope: f64,
    pub intercept: f64,
    /// Residual standard error of the log-log regression.
    pub stderr: f64,
    pub n_min: u64,
    pub n_max: u64,
    pub points: usize,
}

impl PowerLawFit {
    /// The fitted count at n, exp(intercept) * n^slope.
    pub fn predict(&self, n: u64) -> f64 {
        (self.intercept + self.slope * (n as f64).ln()).exp()
    }
}

/// Least-squares fit of log(count) against log(N); samples with zero count
/// are dropped, and at least three positive samples are required.
pub fn fit_exponent(samples: &[(u64, u64)]) -> Result<PowerLawFit> {
    let pts: Vec<(u64, f64, f64)> = samples
        .iter()
        .filter(|&&(_, c)| c > 0)
        .map(|&(n, c)| (n, (n as f64).ln(), (c as f64).ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} positive samples, need at least 3",
            pts.len()
        )));
    }
    let k = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let mean_y = pts.iter().map(|p| p.2).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.1 - mean_x) * (p.1 - mean_x)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.1 - mean_x) * (p.2 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ssr: f64 = pts
        .iter()
        .map(|p| {
            let r = p.2 - (intercept + slope * p.1);
            r * r
        })
        .sum();
    let stderr = (ssr / (k - 2.0)).sqrt();
    Ok(PowerLawFit {
        slope,
        intercept,
        stderr,
        n_min: pts.iter().map(|p| p.0).min().expect("nonempty"),
        n_max: pts.iter().map(|p| p.0).max().expect("nonempty"),
        points: pts.len(),
    })
}

/// Ratios of a cumulative function against N^{2 s0}; stabilization of the
/// sequence estimates the constant in front of the power law.
pub fn ratio_series(
    cumulative: impl Fn(u64) -> f64,
    s0_w: f64,
    n_grid: &[u64],
) -> Vec<(u64, f64)> {
    n_grid
        .iter()
        .map(|&n| (n, cumulative(n) / (n as f64).powf(2.0 * s0_w)))
        .collect()
}

/// Psi_w(N) / N^{2 s0(w)} over the grid, with Psi_w(N) the cumulative
/// weighted count. The sequence should stabilize at the (unknown) constant
/// B(w); only stabilization is ever asserted.
pub fn estimate_b(table: &CountTable, w: f64, s0_w: f64, n_grid: &[u64]) -> Vec<(u64, f64)> {
    ratio_series(|n| table.weighted_up_to(n, w), s0_w, n_grid)
}

/// One row of the smoothing experiment.
#[derive(Debug, Clone, Serialize)]
pub struct SmoothingRecord {
    pub n: u64,
    /// floor(N * eps(N)), the window width.
    pub window_floor: u64,
    /// |Sigma_{N,A}|.
    pub sigma: u64,
    /// |Sigma_{N,A}(eps)|.
    pub thickened: u64,
    /// |Omega_{N,A}|.
    pub omega: u64,
    /// thickened / (2 floor(N eps) N^{2 delta - 1}); None for a degenerate
    /// window (floor = 0).
    pub ratio: Option<f64>,
}

/// Thickened-count fit against the predicted exponent 2 delta_A - gamma/2,
/// with the window-size law floor(N eps) ~ N^{1 - gamma/2} fitted alongside.
#[derive(Debug, Clone, Serialize)]
pub struct SmoothingReport {
    pub gamma: f64,
    pub delta: f64,
    pub records: Vec<SmoothingRecord>,
    pub fitted: PowerLawFit,
    pub window_fit: Option<PowerLawFit>,
    pub predicted_exponent: f64,
}

/// Runs the smoothing experiment for digit bound A: enumerates once up to
/// max(n_grid), forms the window [N - floor(N eps), N] for each N with
/// eps = N^{-gamma/2}, and fits the thickened counts. `delta` is the
/// Hausdorff dimension delta_A from the spectral solver.
pub fn smoothing_experiment(
    a_bound: u64,
    gamma: f64,
    n_grid: &[u64],
    delta: f64,
) -> Result<SmoothingReport> {
    if n_grid.is_empty() {
        return Err(Error::InsufficientData("empty N grid".into()));
    }
    if !(gamma > 0.0) {
        return Err(Error::BadWindow(format!("gamma = {gamma} must be > 0")));
    }
    let max_n = *n_grid.iter().max().expect("nonempty grid");
    let table = enumerate_real_parallel(a_bound, max_n);
    let mut records = Vec::with_capacity(n_grid.len());
    let mut thick_samples = Vec::with_capacity(n_grid.len());
    let mut window_samples = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let window = ThickenedWindow::new(n, gamma)?;
        let floor = window.floor_n_eps();
        let thickened = table.thickened_count(&window)?;
        let sigma = table.count(n);
        let omega = table.total_up_to(n);
        let ratio = if floor > 0 {
            Some(thickened as f64 / (2.0 * floor as f64 * (n as f64).powf(2.0 * delta - 1.0)))
        } else {
            None
        };
        records.push(SmoothingRecord {
            n,
            window_floor: floor,
            sigma,
            thickened,
            omega,
            ratio,
        });
        thick_samples.push((n, thickened));
        window_samples.push((n, floor));
    }
    let fitted = fit_exponent(&thick_samples)?;
    let window_fit = fit_exponent(&window_samples).ok();
    Ok(SmoothingReport {
        gamma,
        delta,
        records,
        fitted,
        window_fit,
        predicted_exponent: 2.0 * delta - gamma / 2.0,
    })
}

/// Fit of log |Omega_{N,A_d}| against log N over the grid. Counts are keyed
/// by squared height, so the slope estimates the dimension delta_{A_d}
/// directly; stability across sub-ranges is the only acceptance signal.
pub fn complex_exponent_fit(alphabet: &ComplexAlphabet, n_grid: &[u64]) -> Result<PowerLawFit> {
    if n_grid.is_empty() {
        return Err(Error::InsufficientData("empty N grid".into()));
    }
    let max_n = *n_grid.iter().max().expect("nonempty grid");
    let table = enumerate_complex_parallel(alphabet, max_n);
    let samples: Vec<(u64, u64)> = n_grid.iter().map(|&n| (n, table.total_up_to(n))).collect();
    fit_exponent(&samples)
}

/// JSON report shape for the CLI: {fit: {slope, stderr, range}, prediction,
/// samples: [...]}.
#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub fit: FitSummary,
    pub prediction: f64,
    pub samples: Vec<(u64, u64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitSummary {
    pub slope: f64,
    pub stderr: f64,
    pub range: (u64, u64),
}

impl FitReport {
    pub fn new(fit: &PowerLawFit, prediction: f64, samples: Vec<(u64, u64)>) -> FitReport {
        FitReport {
            fit: FitSummary {
                slope: fit.slope,
                stderr: fit.stderr,
                range: (fit.n_min, fit.n_max),
            },
            prediction,
            samples,
        }
    }
}

/// CSV of (N, count, predicted) rows for external plotting.
pub fn fit_csv(samples: &[(u64, u64)], fit: &PowerLawFit) -> String {
    let mut out = String::from("n,count,predicted\n");
    for &(n, c) in samples {
        out.push_str(&format!("{n},{c},{}\n", fit.predict(n)));
    }
    out
}

/// Dyadic grid 2^lo..=2^hi.
pub fn dyadic_grid(lo: u32, hi: u32) -> Vec<u64> {
    (lo..=hi).map(|k| 1u64 << k).collect()
}
