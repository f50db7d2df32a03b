//! Timing harness for the fidelity routes.
//!
//! Each timed call evaluates one method on a fixed full-rank pair drawn
//! from the configured seed. Warm-up calls are discarded; the remaining
//! wall-clock samples are summarised. The headline number is the ratio of
//! the classic sandwich median to the product-eigenvalue median.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fidelity::{fidelity, FidelityMethod};
use crate::states::{random_density, DensityMatrix, StateSeed};

/// Dimensions at or above this enter the scaling fit.
pub const SCALING_MIN_DIM: usize = 64;

/// Allowed drift of the value returned by repeated timed calls.
pub const SANITY_TOL: f64 = 1e-12;

/// Header line of the CSV output.
pub const CSV_HEADER: &str = "dim,method,median_s,min_s,mean_s,stddev_s,reps";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub dims: Vec<usize>,
    pub reps: usize,
    pub warmup_reps: usize,
    pub master_seed: u64,
    pub methods: Vec<FidelityMethod>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            dims: vec![64, 128, 256, 512],
            reps: 10,
            warmup_reps: 2,
            master_seed: 0,
            methods: vec![FidelityMethod::Classic, FidelityMethod::ProductEig],
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.dims.iter().any(|&n| n < 2) {
            return Err(Error::Domain(
                "dims must be a nonempty list of sizes >= 2".into(),
            ));
        }
        if self.dims.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("dims must be strictly ascending".into()));
        }
        if self.reps < 3 {
            return Err(Error::Domain(format!(
                "reps must be at least 3, got {}",
                self.reps
            )));
        }
        if self.warmup_reps < 1 {
            return Err(Error::Domain("warmup must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Domain("no methods selected".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingStats {
    pub median: f64,
    pub min: f64,
    pub mean: f64,
    /// Sample standard deviation.
    pub stddev: f64,
    pub reps: usize,
    /// Fidelity value returned by the timed calls.
    pub value: f64,
}

impl TimingStats {
    fn from_samples(samples: &[f64], value: f64) -> Self {
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let k = sorted.len();
        let median = if k % 2 == 1 {
            sorted[k / 2]
        } else {
            0.5 * (sorted[k / 2 - 1] + sorted[k / 2])
        };
        let mean = samples.iter().sum::<f64>() / k as f64;
        let var = if k > 1 {
            samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (k - 1) as f64
        } else {
            0.0
        };
        Self {
            median,
            min: sorted[0],
            mean,
            stddev: var.sqrt(),
            reps: k,
            value,
        }
    }
}

/// The benchmark pair for dimension `n`: two independent full-rank states
/// from the two halves of `seed`.
pub fn bench_pair(n: usize, seed: StateSeed) -> Result<(DensityMatrix, DensityMatrix)> {
    let (a, b) = seed.split();
    Ok((random_density(n, n, a)?, random_density(n, n, b)?))
}

fn bench_seed(master_seed: u64, n: usize) -> StateSeed {
    StateSeed::new(master_seed, n as u64)
}

fn time_pair(
    method: FidelityMethod,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    reps: usize,
    warmup: usize,
) -> Result<TimingStats> {
    for _ in 0..warmup {
        fidelity(rho, sigma, method)?;
    }
    let mut value = None;
    let mut samples = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        let r = fidelity(rho, sigma, method)?;
        let elapsed = start.elapsed().as_secs_f64();
        if elapsed <= 0.0 {
            return Err(Error::Clock(format!(
                "{} at n={} reported a zero duration",
                method,
                rho.dim()
            )));
        }
        let first = *value.get_or_insert(r.raw_value);
        let drift = (r.raw_value - first).abs();
        if drift.is_nan() || drift > SANITY_TOL {
            return Err(Error::Reproducibility(format!(
                "{} at n={} returned {} then {}",
                method,
                rho.dim(),
                first,
                r.raw_value
            )));
        }
        samples.push(elapsed);
    }
    Ok(TimingStats::from_samples(
        &samples,
        value.unwrap_or(f64::NAN),
    ))
}

/// Times `method` on the seeded pair of dimension `n`.
pub fn time_method(
    method: FidelityMethod,
    n: usize,
    reps: usize,
    warmup_reps: usize,
    seed: StateSeed,
) -> Result<TimingStats> {
    let (rho, sigma) = bench_pair(n, seed)?;
    time_pair(method, &rho, &sigma, reps, warmup_reps)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchEntry {
    pub dim: usize,
    pub method: FidelityMethod,
    pub stats: TimingStats,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Speedup {
    pub dim: usize,
    /// Classic median over product-eigenvalue median.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub method: FidelityMethod,
    /// Least-squares slope of `ln median` against `ln dim`; `None` with
    /// fewer than two dimensions at or above [`SCALING_MIN_DIM`].
    pub exponent: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub threads: usize,
    /// `single-threaded` or `multi-threaded`.
    pub mode: String,
    pub entries: Vec<BenchEntry>,
    pub speedups: Vec<Speedup>,
    pub scaling: Vec<ScalingFit>,
}

impl BenchReport {
    pub fn stats(&self, dim: usize, method: FidelityMethod) -> Option<&TimingStats> {
        self.entries
            .iter()
            .find(|e| e.dim == dim && e.method == method)
            .map(|e| &e.stats)
    }

    pub fn speedup(&self, dim: usize) -> Option<f64> {
        self.speedups.iter().find(|s| s.dim == dim).map(|s| s.ratio)
    }

    pub fn scaling_exponent(&self, method: FidelityMethod) -> Option<f64> {
        self.scaling
            .iter()
            .find(|s| s.method == method)
            .and_then(|s| s.exponent)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for e in &self.entries {
            let s = &e.stats;
            let _ = writeln!(
                out,
                "{},{},{:e},{:e},{:e},{:e},{}",
                e.dim, e.method, s.median, s.min, s.mean, s.stddev, s.reps
            );
        }
        out
    }
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 || x.len() != y.len() {
        return None;
    }
    let k = x.len() as f64;
    let mx = x.iter().sum::<f64>() / k;
    let my = y.iter().sum::<f64>() / k;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    Some(sxy / sxx)
}

/// Sets the worker count used by the dense kernels. `0` and `1` both mean
/// sequential. Returns the effective count.
pub fn configure_threads(threads: usize) -> usize {
    if threads <= 1 {
        faer::set_global_parallelism(faer::Par::Seq);
        1
    } else {
        faer::set_global_parallelism(faer::Par::rayon(threads));
        threads
    }
}

/// Current worker count of the dense kernels.
pub fn current_threads() -> usize {
    faer::get_global_parallelism().degree()
}

pub fn mode_label(threads: usize) -> &'static str {
    if threads <= 1 {
        "single-threaded"
    } else {
        "multi-threaded"
    }
}

/// Times every configured method at every dimension and derives speedups
/// and scaling exponents.
pub fn speedup_report(config: &BenchConfig) -> Result<BenchReport> {
    config.validate()?;
    let mut entries = Vec::new();
    for &n in &config.dims {
        let (rho, sigma) = bench_pair(n, bench_seed(config.master_seed, n))?;
        for &method in &config.methods {
            let stats = time_pair(method, &rho, &sigma, config.reps, config.warmup_reps)?;
            entries.push(BenchEntry {
                dim: n,
                method,
                stats,
            });
        }
    }

    let median = |n: usize, m: FidelityMethod| {
        entries
            .iter()
            .find(|e| e.dim == n && e.method == m)
            .map(|e| e.stats.median)
    };
    let speedups = config
        .dims
        .iter()
        .filter_map(|&n| {
            let c = median(n, FidelityMethod::Classic)?;
            let e = median(n, FidelityMethod::ProductEig)?;
            Some(Speedup {
                dim: n,
                ratio: c / e,
            })
        })
        .collect();
    let scaling = config
        .methods
        .iter()
        .map(|&m| {
            let (x, y): (Vec<f64>, Vec<f64>) = config
                .dims
                .iter()
                .filter(|&&n| n >= SCALING_MIN_DIM)
                .filter_map(|&n| median(n, m).map(|t| ((n as f64).ln(), t.ln())))
                .unzip();
            ScalingFit {
                method: m,
                exponent: fit_slope(&x, &y),
            }
        })
        .collect();

    Ok(BenchReport {
        config: config.clone(),
        threads: current_threads(),
        mode: mode_label(current_threads()).to_string(),
        entries,
        speedups,
        scaling,
    })
}
