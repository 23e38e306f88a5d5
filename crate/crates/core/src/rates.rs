//! Finite-horizon rates on a curve.

use alloc::format;

#[allow(unused_imports)]
use num_traits::Float;

use crate::curve::Curve;
use crate::error::{domain, Result};
use crate::time::{ShortRatePath, TenorGrid};

/// Step used by [`short_rate_fd`] when callers have no better choice.
pub const DEFAULT_FD_STEP: f64 = 1e-6;

fn require_before(t: f64, maturity: f64) -> Result<f64> {
    if !(t < maturity) {
        return Err(domain(format!("rate needs t < T, got t={t}, T={maturity}")));
    }
    Ok(maturity - t)
}

/// Continuously compounded spot rate `Y(t,T) = -log P(t,T) / (T-t)`.
pub fn spot_yield<C: Curve + ?Sized>(curve: &C, t: f64, maturity: f64) -> Result<f64> {
    let tau = require_before(t, maturity)?;
    Ok(-curve.price(t, maturity)?.ln() / tau)
}

/// Simple spot rate `L(t,T) = (1/P(t,T) - 1) / (T-t)`.
pub fn spot_simple<C: Curve + ?Sized>(curve: &C, t: f64, maturity: f64) -> Result<f64> {
    let tau = require_before(t, maturity)?;
    Ok((1.0 / curve.price(t, maturity)? - 1.0) / tau)
}

/// Short rate as the one-sided difference `Y(t, t+h)`; the bias is `O(h)`.
pub fn short_rate_fd<C: Curve + ?Sized>(curve: &C, t: f64, h: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(domain(format!("finite-difference step must be > 0, got {h}")));
    }
    spot_yield(curve, t, t + h)
}

fn check_first_date(t: f64, grid: &TenorGrid) -> Result<()> {
    let first = grid.date(1).ok_or_else(|| domain("tenor grid has no exchange dates"))?;
    if t > first {
        return Err(domain(format!("annuity needs t <= T_1, got t={t}, T_1={first}")));
    }
    Ok(())
}

/// Annuity `S_n(t) = Σ_{i=1..n} δ_i P(t, T_i)`.
pub fn annuity_sn<C: Curve + ?Sized>(curve: &C, t: f64, grid: &TenorGrid, n: usize) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    check_first_date(t, grid)?;
    let mut sum = 0.0;
    for i in 1..=n {
        let (date, accrual) = grid
            .date(i)
            .zip(grid.accrual(i))
            .ok_or_else(|| domain(format!("tenor grid ends before T_{i}")))?;
        sum += accrual * curve.price(t, date)?;
    }
    Ok(sum)
}

/// OIS par rate with `T_0 = t`: `(1 - P(t, T_n)) / S_n(t)`.
pub fn ois_par_rate<C: Curve + ?Sized>(curve: &C, t: f64, grid: &TenorGrid, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(domain("par rate needs at least one exchange"));
    }
    let annuity = annuity_sn(curve, t, grid, n)?;
    let last = grid.date(n).ok_or_else(|| domain(format!("tenor grid ends before T_{n}")))?;
    Ok((1.0 - curve.price(t, last)?) / annuity)
}

/// Compounded overnight rate `(exp(∫_a^b r ds) - 1) / (b - a)`.
pub fn compounded_overnight(path: &ShortRatePath, a: f64, b: f64) -> Result<f64> {
    let span = require_before(a, b)?;
    Ok(path.integral(a, b)?.exp_m1() / span)
}
