//! Term-structure models, driver simulation and Monte Carlo pricing.

pub mod fh_integral;
pub mod flesaker_hughston;
pub mod linear_rational;
pub mod monte_carlo;
pub mod simulation;

pub use fh_integral::{FhIntegralCurve, FhIntegralModel, VolSpec};
pub use flesaker_hughston::{DecaySpec, FhRationalCurve, FhRationalModel};
pub use linear_rational::{LinearRationalCurve, LinearRationalModel};
pub use monte_carlo::{
    exchange_indices, floating_leg_sample, mc_floating_leg, mc_price, price_sample, McEstimate, StateCurve,
    StateModel,
};
pub use simulation::{simulate_path, simulate_paths, uniform_times, DriverSpec, PathEnsemble};
