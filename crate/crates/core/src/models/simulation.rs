//! Exact-step simulation of model drivers on a time grid.
//!
//! Path `p` draws from the ChaCha8 stream `p` of the generator keyed by the
//! seed, so a path's values depend only on `(spec, grid, seed, p)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, invalid, Result};

/// Resampling attempts before a mean-reverting step is clamped to the box.
pub const MAX_REJECTIONS: u32 = 64;

/// Times are matched to grid points within this absolute distance.
pub const GRID_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum DriverSpec {
    /// `M_0 = 1`, `M_{t+Δ} = M_t exp(σ√Δ Z - σ²Δ/2)`.
    Gbm { sigma: f64 },
    /// Standard Brownian motion started at 0.
    Brownian,
    /// `dX = k(θ - X) dt + vol dW` per coordinate, kept inside
    /// `[lower, upper]` by resampling steps that leave it.
    MeanReverting { k: f64, theta: Vec<f64>, vol: f64, lower: Vec<f64>, upper: Vec<f64>, x0: Vec<f64> },
}

impl DriverSpec {
    pub fn dim(&self) -> usize {
        match self {
            DriverSpec::Gbm { .. } | DriverSpec::Brownian => 1,
            DriverSpec::MeanReverting { theta, .. } => theta.len(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            DriverSpec::Gbm { sigma } if !(*sigma >= 0.0 && sigma.is_finite()) => {
                Err(invalid(format!("GBM volatility must be >= 0, got {sigma}")))
            }
            DriverSpec::MeanReverting { k, theta, vol, lower, upper, x0 } => {
                let d = theta.len();
                if d == 0 || lower.len() != d || upper.len() != d || x0.len() != d {
                    return Err(invalid("mean-reverting driver dimensions disagree"));
                }
                if !(*k >= 0.0 && k.is_finite() && *vol >= 0.0 && vol.is_finite()) {
                    return Err(invalid("mean-reverting driver needs k >= 0 and vol >= 0"));
                }
                if (0..d).any(|i| !(lower[i] <= x0[i] && x0[i] <= upper[i])) {
                    return Err(invalid(format!("initial state {x0:?} lies outside the box")));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn initial(&self, out: &mut [f64]) {
        match self {
            DriverSpec::Gbm { .. } => out[0] = 1.0,
            DriverSpec::Brownian => out[0] = 0.0,
            DriverSpec::MeanReverting { x0, .. } => out.copy_from_slice(x0),
        }
    }

    fn step<R: Rng>(&self, prev: &[f64], dt: f64, rng: &mut R, out: &mut [f64]) {
        match self {
            DriverSpec::Gbm { sigma } => {
                let z: f64 = rng.sample(StandardNormal);
                out[0] = prev[0] * (sigma * dt.sqrt() * z - 0.5 * sigma * sigma * dt).exp();
            }
            DriverSpec::Brownian => {
                let z: f64 = rng.sample(StandardNormal);
                out[0] = prev[0] + dt.sqrt() * z;
            }
            DriverSpec::MeanReverting { k, theta, vol, lower, upper, .. } => {
                let decay = (-k * dt).exp();
                let sd = if *k > 0.0 {
                    vol * (-(-2.0 * k * dt).exp_m1() / (2.0 * k)).sqrt()
                } else {
                    vol * dt.sqrt()
                };
                for i in 0..theta.len() {
                    let mean = theta[i] + (prev[i] - theta[i]) * decay;
                    let mut attempts = 0;
                    out[i] = loop {
                        let z: f64 = rng.sample(StandardNormal);
                        let x = mean + sd * z;
                        if (lower[i] <= x && x <= upper[i]) || attempts == MAX_REJECTIONS {
                            break x.max(lower[i]).min(upper[i]);
                        }
                        attempts += 1;
                    };
                }
            }
        }
    }
}

/// Generator for path `path_index` under `seed`.
pub fn path_rng(seed: u64, path_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path_index);
    rng
}

/// `0, step, 2·step, ..., end`, with the step shrunk so it divides `end`.
pub fn uniform_times(end: f64, step: f64) -> Result<Vec<f64>> {
    if !(end > 0.0 && end.is_finite() && step > 0.0 && step.is_finite()) {
        return Err(domain(format!("need end > 0 and step > 0, got end={end}, step={step}")));
    }
    let n = (end / step - 1e-9).ceil().max(1.0) as usize;
    Ok((0..=n).map(|i| if i == n { end } else { end * i as f64 / n as f64 }).collect())
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() || times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(domain("time grid must be non-empty, finite and >= 0"));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(domain("time grid must be strictly increasing"));
    }
    Ok(())
}

/// Simulates path `path_index` into `out`, laid out as `times.len()` rows of
/// `spec.dim()` values.
pub fn simulate_path(spec: &DriverSpec, times: &[f64], seed: u64, path_index: u64, out: &mut [f64]) -> Result<()> {
    spec.validate()?;
    check_times(times)?;
    let d = spec.dim();
    if out.len() != d * times.len() {
        return Err(domain(format!("output buffer holds {} values, need {}", out.len(), d * times.len())));
    }
    let mut rng = path_rng(seed, path_index);
    spec.initial(&mut out[..d]);
    // The driver starts at time 0; a grid starting later takes one step first.
    if times[0] > 0.0 {
        let start = out[..d].to_vec();
        spec.step(&start, times[0], &mut rng, &mut out[..d]);
    }
    for j in 1..times.len() {
        let (done, rest) = out.split_at_mut(j * d);
        spec.step(&done[(j - 1) * d..], times[j] - times[j - 1], &mut rng, &mut rest[..d]);
    }
    Ok(())
}

/// Sequential ensemble generation.
pub fn simulate_paths(spec: &DriverSpec, times: &[f64], n_paths: usize, seed: u64) -> Result<PathEnsemble> {
    if n_paths == 0 {
        return Err(domain("need at least one path"));
    }
    let row = spec.dim() * times.len();
    let mut values = vec![0.0; row * n_paths];
    for (p, chunk) in values.chunks_mut(row.max(1)).enumerate() {
        simulate_path(spec, times, seed, p as u64, chunk)?;
    }
    PathEnsemble::from_parts(times.to_vec(), n_paths, spec.dim(), values, seed)
}

/// Sample paths of a `dim`-dimensional process on a common time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble {
    times: Vec<f64>,
    n_paths: usize,
    dim: usize,
    values: Vec<f64>,
    seed: u64,
}

impl PathEnsemble {
    /// `values` is path-major: path, then time, then coordinate.
    pub fn from_parts(times: Vec<f64>, n_paths: usize, dim: usize, values: Vec<f64>, seed: u64) -> Result<Self> {
        check_times(&times)?;
        if n_paths == 0 || dim == 0 || values.len() != n_paths * times.len() * dim {
            return Err(domain(format!(
                "ensemble shape mismatch: {} values for {n_paths} paths x {} times x {dim}",
                values.len(),
                times.len()
            )));
        }
        Ok(PathEnsemble { times, n_paths, dim, values, seed })
    }

    /// `n_paths` scalar paths with values `value(path, t)`.
    pub fn deterministic<F: Fn(usize, f64) -> f64>(times: Vec<f64>, n_paths: usize, value: F) -> Result<Self> {
        let mut values = Vec::with_capacity(n_paths * times.len());
        for p in 0..n_paths {
            values.extend(times.iter().map(|&t| value(p, t)));
        }
        Self::from_parts(times, n_paths, 1, values, 0)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn n_paths(&self) -> usize {
        self.n_paths
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn path(&self, p: usize) -> &[f64] {
        let row = self.times.len() * self.dim;
        &self.values[p * row..(p + 1) * row]
    }

    pub fn state(&self, p: usize, j: usize) -> &[f64] {
        let start = (p * self.times.len() + j) * self.dim;
        &self.values[start..start + self.dim]
    }

    /// Index of the grid point at `t`.
    pub fn time_index(&self, t: f64) -> Result<usize> {
        let j = self.times.partition_point(|&s| s < t - GRID_MATCH_TOL);
        if j < self.times.len() && (self.times[j] - t).abs() <= GRID_MATCH_TOL {
            Ok(j)
        } else {
            Err(domain(format!("t={t} is not on the simulation grid")))
        }
    }

    /// Scalar ensemble `f(t_j, state)` on the same grid.
    pub fn map<F: Fn(f64, &[f64]) -> Result<f64>>(&self, f: F) -> Result<PathEnsemble> {
        let mut values = Vec::with_capacity(self.n_paths * self.times.len());
        for p in 0..self.n_paths {
            for (j, &t) in self.times.iter().enumerate() {
                values.push(f(t, self.state(p, j))?);
            }
        }
        Self::from_parts(self.times.clone(), self.n_paths, 1, values, self.seed)
    }

    /// Every `stride`-th grid point, always keeping the first.
    pub fn subsample(&self, stride: usize) -> Result<PathEnsemble> {
        if stride == 0 {
            return Err(domain("stride must be >= 1"));
        }
        let keep: Vec<usize> = (0..self.times.len()).step_by(stride).collect();
        let mut values = Vec::with_capacity(self.n_paths * keep.len() * self.dim);
        for p in 0..self.n_paths {
            for &j in &keep {
                values.extend_from_slice(self.state(p, j));
            }
        }
        let times = keep.iter().map(|&j| self.times[j]).collect();
        Self::from_parts(times, self.n_paths, self.dim, values, self.seed)
    }
}
