//! Term-structure analytics on zero-coupon curves.
//!
//! The crate computes finite-horizon rates (spot yield, simple rate, short
//! rate, OIS par rate, compounded overnight rate) on any [`Curve`], evaluates
//! the infinite annuity `S∞ = Σ δ_i P(t, T_i)` with a geometric tail bound,
//! and classifies the long-term yield, long bond, long-term swap rate and
//! long-term simple rate of a curve. The Flesaker-Hughston and linear-rational
//! models come with exact-step path simulation and a state-price-density Monte
//! Carlo pricer, and [`ucp`] estimates uniform-on-compacts convergence
//! probabilities from path ensembles.
//!
//! The crate is `no_std` and only needs `alloc`. IO, configuration and
//! parallel ensemble generation live in the `longrate` companion crate.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

// `num_traits::Float` supplies float math without std; with std linked in
// (tests, std dependents) inherent methods win and the import goes unused.
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod curve;
pub mod error;
pub mod longterm;
pub mod models;
pub mod numeric;
pub mod rates;
pub mod regimes;
pub mod time;
pub mod ucp;

pub use curve::{Curve, ExplodingCurve, FlatCurve, GaussianCurve, PowerCurve, SyntheticCurve};
pub use error::{Error, Result};
pub use longterm::{LimitEstimate, LongTermClass, LongTermConfig, LongTermReport, TruncatedSum};
pub use rates::{
    annuity_sn, compounded_overnight, ois_par_rate, short_rate_fd, spot_simple, spot_yield,
    DEFAULT_FD_STEP,
};
pub use time::{ShortRatePath, TenorGrid, Time};
