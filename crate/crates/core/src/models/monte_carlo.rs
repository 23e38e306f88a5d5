//! State-price-density Monte Carlo for the models.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::curve::Curve;
use crate::error::{domain, Result};
use crate::models::fh_integral::FhIntegralModel;
use crate::models::flesaker_hughston::FhRationalModel;
use crate::models::linear_rational::LinearRationalModel;
use crate::models::simulation::PathEnsemble;
use crate::numeric::mean_and_std_error;
use crate::rates::short_rate_fd;
use crate::time::TenorGrid;

/// A model whose prices are functions of a simulated driver state.
pub trait StateModel {
    /// Dimension of the driver state.
    fn state_dim(&self) -> usize;
    fn state_price_density(&self, state: &[f64], t: f64) -> Result<f64>;
    /// `P(t,T)` given the driver state at `t`.
    fn state_price(&self, state: &[f64], t: f64, maturity: f64) -> Result<f64>;
}

impl StateModel for FhRationalModel {
    fn state_dim(&self) -> usize {
        1
    }
    fn state_price_density(&self, state: &[f64], t: f64) -> Result<f64> {
        FhRationalModel::state_price_density(self, state[0], t)
    }
    fn state_price(&self, state: &[f64], t: f64, maturity: f64) -> Result<f64> {
        self.price(state[0], t, maturity)
    }
}

impl StateModel for FhIntegralModel {
    fn state_dim(&self) -> usize {
        1
    }
    fn state_price_density(&self, state: &[f64], t: f64) -> Result<f64> {
        FhIntegralModel::state_price_density(self, state[0], t)
    }
    fn state_price(&self, state: &[f64], t: f64, maturity: f64) -> Result<f64> {
        self.price(state[0], t, maturity)
    }
}

impl StateModel for LinearRationalModel {
    fn state_dim(&self) -> usize {
        self.dim()
    }
    fn state_price_density(&self, state: &[f64], t: f64) -> Result<f64> {
        LinearRationalModel::state_price_density(self, state, t)
    }
    fn state_price(&self, state: &[f64], t: f64, maturity: f64) -> Result<f64> {
        self.price(state, t, maturity)
    }
}

/// The curve of a [`StateModel`] with its driver frozen at `state`.
#[derive(Debug, Clone, Copy)]
pub struct StateCurve<'a, M: ?Sized> {
    pub model: &'a M,
    pub state: &'a [f64],
}

impl<M: StateModel + ?Sized> Curve for StateCurve<'_, M> {
    fn price(&self, t: f64, maturity: f64) -> Result<f64> {
        self.model.state_price(self.state, t, maturity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub n_paths: usize,
}

impl McEstimate {
    pub fn from_samples(samples: &[f64]) -> Self {
        let (estimate, std_error) = mean_and_std_error(samples);
        McEstimate { estimate, std_error, n_paths: samples.len() }
    }

    /// `|estimate - target| <= k·SE`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.estimate - target).abs() <= k * self.std_error
    }
}

fn check_dim<M: StateModel + ?Sized>(model: &M, ensemble: &PathEnsemble) -> Result<()> {
    if ensemble.dim() != model.state_dim() {
        return Err(domain(format!(
            "ensemble has dimension {}, model needs {}",
            ensemble.dim(),
            model.state_dim()
        )));
    }
    Ok(())
}

/// `A_{t_j} / A_{t_0}` on path `p`.
pub fn price_sample<M: StateModel + ?Sized>(model: &M, ensemble: &PathEnsemble, p: usize, j: usize) -> Result<f64> {
    let times = ensemble.times();
    let a0 = model.state_price_density(ensemble.state(p, 0), times[0])?;
    Ok(model.state_price_density(ensemble.state(p, j), times[j])? / a0)
}

/// Per-path `A_T / A_0`.
pub fn mc_price_samples<M: StateModel + ?Sized>(model: &M, ensemble: &PathEnsemble, maturity: f64) -> Result<Vec<f64>> {
    check_dim(model, ensemble)?;
    let j = ensemble.time_index(maturity)?;
    (0..ensemble.n_paths()).map(|p| price_sample(model, ensemble, p, j)).collect()
}

/// Estimate of `P(t_0, T)` with `t_0` the first grid time.
pub fn mc_price<M: StateModel + ?Sized>(model: &M, ensemble: &PathEnsemble, maturity: f64) -> Result<McEstimate> {
    Ok(McEstimate::from_samples(&mc_price_samples(model, ensemble, maturity)?))
}

/// Grid indices of `T_0, ..., T_n` on the ensemble grid.
pub fn exchange_indices<M: StateModel + ?Sized>(
    model: &M,
    ensemble: &PathEnsemble,
    grid: &TenorGrid,
    n: usize,
) -> Result<Vec<usize>> {
    check_dim(model, ensemble)?;
    (0..=n)
        .map(|i| {
            let date = grid.date(i).ok_or_else(|| domain(format!("tenor grid ends before T_{i}")))?;
            ensemble
                .time_index(date)
                .map_err(|_| domain(format!("T_{i} = {date} is not on the simulation grid")))
        })
        .collect()
}

/// Discounted floating payments `Σ_i (A_{T_i}/A_0)(exp(∫_{T_{i-1}}^{T_i} r) - 1)`
/// on path `p`, with `idx` from [`exchange_indices`].
///
/// The short rate is the finite difference with step `fd_step` on the curve
/// at each grid state, integrated by the trapezoid rule on the ensemble grid.
pub fn floating_leg_sample<M: StateModel + ?Sized>(
    model: &M,
    ensemble: &PathEnsemble,
    idx: &[usize],
    p: usize,
    fd_step: f64,
) -> Result<f64> {
    let times = ensemble.times();
    let a0 = model.state_price_density(ensemble.state(p, 0), times[0])?;
    let rate = |j: usize| short_rate_fd(&StateCurve { model, state: ensemble.state(p, j) }, times[j], fd_step);
    let mut total = 0.0;
    let mut left = rate(idx[0])?;
    for w in idx.windows(2) {
        let mut integral = 0.0;
        for j in w[0]..w[1] {
            let right = rate(j + 1)?;
            integral += 0.5 * (left + right) * (times[j + 1] - times[j]);
            left = right;
        }
        let a = model.state_price_density(ensemble.state(p, w[1]), times[w[1]])?;
        total += a / a0 * integral.exp_m1();
    }
    Ok(total)
}

/// Per-path discounted floating payments, see [`floating_leg_sample`].
pub fn mc_floating_leg_samples<M: StateModel + ?Sized>(
    model: &M,
    ensemble: &PathEnsemble,
    grid: &TenorGrid,
    n: usize,
    fd_step: f64,
) -> Result<Vec<f64>> {
    let idx = exchange_indices(model, ensemble, grid, n)?;
    (0..ensemble.n_paths()).map(|p| floating_leg_sample(model, ensemble, &idx, p, fd_step)).collect()
}

/// Estimate of `Σ_i E[exp(-∫_{t_0}^{T_i} r) δ_i L̄(T_{i-1}, T_i)]`, which
/// telescopes to `P(t_0, T_0) - P(t_0, T_n)`.
pub fn mc_floating_leg<M: StateModel + ?Sized>(
    model: &M,
    ensemble: &PathEnsemble,
    grid: &TenorGrid,
    n: usize,
    fd_step: f64,
) -> Result<McEstimate> {
    Ok(McEstimate::from_samples(&mc_floating_leg_samples(model, ensemble, grid, n, fd_step)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::fh_integral::VolSpec;
    use crate::models::simulation::{simulate_paths, uniform_times, DriverSpec};
    use crate::rates::DEFAULT_FD_STEP;
    use approx::assert_relative_eq;

    #[test]
    fn deterministic_model_prices_exactly() {
        let m = FhRationalModel::exponential(0.02, 0.05, 0.0).unwrap();
        let e = simulate_paths(&DriverSpec::Gbm { sigma: 0.0 }, &uniform_times(5.0, 0.5).unwrap(), 20, 1).unwrap();
        let est = mc_price(&m, &e, 5.0).unwrap();
        assert_relative_eq!(est.estimate, m.price(1.0, 0.0, 5.0).unwrap(), max_relative = 1e-14);
        assert_eq!(est.std_error, 0.0);
        assert!(mc_price(&m, &e, 5.1).is_err());
    }

    #[test]
    fn fh_mc_price_matches_closed_form() {
        let m = FhRationalModel::exponential(0.02, 0.05, 0.2).unwrap();
        let e = simulate_paths(&DriverSpec::Gbm { sigma: 0.2 }, &[0.0, 1.0], 100_000, 5).unwrap();
        let est = mc_price(&m, &e, 1.0).unwrap();
        assert!(est.within(m.price(1.0, 0.0, 1.0).unwrap(), 3.0), "{est:?}");
    }

    #[test]
    fn zero_rate_floating_leg_vanishes() {
        let lr = LinearRationalModel::one_factor(0.1, 0.5, 1.0, 0.0, (0.0, 1.0), 0.05).unwrap();
        let e = simulate_paths(&lr.driver(&[0.5]).unwrap(), &uniform_times(3.0, 0.25).unwrap(), 4, 1).unwrap();
        let grid = TenorGrid::uniform(0.0, 1.0).unwrap();
        let est = mc_floating_leg(&lr, &e, &grid, 3, DEFAULT_FD_STEP).unwrap();
        assert!(est.estimate.abs() < 1e-12, "{est:?}");
    }

    #[test]
    fn flat_equivalent_floating_leg_telescopes() {
        let m = FhIntegralModel::exponential(0.05, VolSpec::Constant(0.0)).unwrap();
        let e = simulate_paths(&DriverSpec::Brownian, &uniform_times(3.0, 1.0 / 250.0).unwrap(), 2, 1).unwrap();
        let grid = TenorGrid::uniform(0.0, 1.0).unwrap();
        // Zero volatility: the Brownian state does not enter any price.
        let est = mc_floating_leg(&m, &e, &grid, 3, DEFAULT_FD_STEP).unwrap();
        assert!((est.estimate - 0.13929202357494222).abs() < 1e-7, "{est:?}");
    }

    #[test]
    fn misaligned_grid_is_an_error() {
        let lr = LinearRationalModel::one_factor(0.1, 0.5, 1.0, 1.0, (0.0, 1.0), 0.05).unwrap();
        let e = simulate_paths(&lr.driver(&[0.5]).unwrap(), &uniform_times(2.0, 0.3).unwrap(), 2, 1).unwrap();
        let grid = TenorGrid::uniform(0.0, 1.0).unwrap();
        assert!(mc_floating_leg(&lr, &e, &grid, 2, DEFAULT_FD_STEP).is_err());
    }
}
