//! Regime classification of curves, the regime tables and the two-swap
//! arbitrage construction.

pub mod arbitrage;
pub mod corpus;
pub mod tables;

pub use arbitrage::{arbitrage_payoffs, leg_payoffs, Orientation, SwapPortfolio};
pub use corpus::{corpus, AnyCurve, CorpusCurve, Family};
pub use tables::{table_check, ClassSet, RegimeRow, Slot, Verdict};

use crate::curve::Curve;
use crate::error::Result;
use crate::longterm::{long_bond, long_term_simple, long_term_swap_rate, long_term_yield, LongTermConfig, LongTermReport};
use crate::time::TenorGrid;

/// `(ℓ, P, R, L)` for `curve` at `t`, with `R` computed on `grid`.
pub fn classify_curve<C: Curve + ?Sized>(
    curve: &C,
    t: f64,
    grid: &TenorGrid,
    cfg: &LongTermConfig,
) -> Result<LongTermReport> {
    let (swap, sum) = long_term_swap_rate(curve, t, grid, cfg)?;
    Ok(LongTermReport {
        ell: long_term_yield(curve, t, cfg)?,
        long_bond: long_bond(curve, t, cfg)?,
        swap,
        simple: long_term_simple(curve, t, cfg)?,
        horizon_used: cfg.horizons.last().copied().unwrap_or(0.0),
        sum,
    })
}
