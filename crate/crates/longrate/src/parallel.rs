//! Rayon front ends for path simulation and Monte Carlo pricing.
//!
//! Path `p` always draws from stream `p` of the seed, so every function here
//! returns exactly what its sequential counterpart in `longrate_core` returns,
//! whatever the thread count. Per-path samples are collected in path order and
//! summed pairwise.

use longrate_core::models::{
    exchange_indices, floating_leg_sample, price_sample, simulate_path, DriverSpec, McEstimate, PathEnsemble,
    StateModel,
};
use longrate_core::{Result, TenorGrid};
use rayon::prelude::*;

/// Parallel [`longrate_core::models::simulate_paths`].
pub fn simulate_paths_par(spec: &DriverSpec, times: &[f64], n_paths: usize, seed: u64) -> Result<PathEnsemble> {
    let row = spec.dim() * times.len();
    let mut values = vec![0.0; row * n_paths];
    values
        .par_chunks_mut(row.max(1))
        .enumerate()
        .try_for_each(|(p, chunk)| simulate_path(spec, times, seed, p as u64, chunk))?;
    PathEnsemble::from_parts(times.to_vec(), n_paths, spec.dim(), values, seed)
}

/// Runs `sample` on path `p` alone, for `p` in `0..n_paths`, without keeping
/// the ensemble in memory.
fn streamed<F>(spec: &DriverSpec, times: &[f64], n_paths: usize, seed: u64, sample: F) -> Result<Vec<f64>>
where
    F: Fn(&PathEnsemble) -> Result<f64> + Sync,
{
    let row = spec.dim() * times.len();
    (0..n_paths)
        .into_par_iter()
        .map(|p| {
            let mut buf = vec![0.0; row];
            simulate_path(spec, times, seed, p as u64, &mut buf)?;
            sample(&PathEnsemble::from_parts(times.to_vec(), 1, spec.dim(), buf, seed)?)
        })
        .collect()
}

fn single_path(spec: &DriverSpec, times: &[f64], seed: u64) -> Result<PathEnsemble> {
    let mut buf = vec![0.0; spec.dim() * times.len()];
    simulate_path(spec, times, seed, 0, &mut buf)?;
    PathEnsemble::from_parts(times.to_vec(), 1, spec.dim(), buf, seed)
}

/// [`longrate_core::models::mc_price`] over `n_paths` paths of `spec`.
pub fn mc_price_par<M: StateModel + Sync + ?Sized>(
    model: &M,
    spec: &DriverSpec,
    times: &[f64],
    n_paths: usize,
    seed: u64,
    maturity: f64,
) -> Result<McEstimate> {
    let j = single_path(spec, times, seed)?.time_index(maturity)?;
    let samples = streamed(spec, times, n_paths, seed, |e| price_sample(model, e, 0, j))?;
    Ok(McEstimate::from_samples(&samples))
}

/// [`longrate_core::models::mc_floating_leg`] over `n_paths` paths of `spec`.
#[allow(clippy::too_many_arguments)]
pub fn mc_floating_leg_par<M: StateModel + Sync + ?Sized>(
    model: &M,
    spec: &DriverSpec,
    times: &[f64],
    n_paths: usize,
    seed: u64,
    grid: &TenorGrid,
    n: usize,
    fd_step: f64,
) -> Result<McEstimate> {
    let idx = exchange_indices(model, &single_path(spec, times, seed)?, grid, n)?;
    let samples = streamed(spec, times, n_paths, seed, |e| floating_leg_sample(model, e, &idx, 0, fd_step))?;
    Ok(McEstimate::from_samples(&samples))
}
