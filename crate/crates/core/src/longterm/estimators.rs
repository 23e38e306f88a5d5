use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::classify::classify_ladder;
use super::truncation::{sum_to_tolerance, TruncatedSum};
use super::{LimitEstimate, LongTermClass, LongTermConfig};
use crate::curve::Curve;
use crate::error::{domain, Result};
use crate::time::TenorGrid;

fn check_horizons(horizons: &[f64]) -> Result<()> {
    if horizons.len() < 2
        || horizons.iter().any(|h| !(*h > 0.0 && h.is_finite()))
        || horizons.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(domain(format!("horizons must be >= 2 increasing positive times, got {horizons:?}")));
    }
    Ok(())
}

fn ladder<C: Curve + ?Sized, F: Fn(f64, f64) -> f64>(curve: &C, t: f64, cfg: &LongTermConfig, f: F) -> Result<Vec<f64>> {
    check_horizons(&cfg.horizons)?;
    cfg.horizons.iter().map(|&tau| Ok(f(curve.price(t, t + tau)?, tau))).collect()
}

/// Long bond: the ladder of `P(t, t+τ)`.
pub fn long_bond<C: Curve + ?Sized>(curve: &C, t: f64, cfg: &LongTermConfig) -> Result<LimitEstimate> {
    Ok(classify_ladder(&ladder(curve, t, cfg, |p, _| p)?, cfg))
}

/// Long-term yield from the secant forward rates of `-log P(t, t+τ)` between
/// successive ladder points. These share the limit of `Y(t, t+τ)` and drop
/// the `O(1/τ)` offset a constant factor in `P` leaves in the yield itself.
pub fn long_term_yield<C: Curve + ?Sized>(curve: &C, t: f64, cfg: &LongTermConfig) -> Result<LimitEstimate> {
    let logs = ladder(curve, t, cfg, |p, _| -p.ln())?;
    let h = &cfg.horizons;
    let forwards: Vec<f64> = (1..h.len()).map(|i| (logs[i] - logs[i - 1]) / (h[i] - h[i - 1])).collect();
    Ok(classify_ladder(&forwards, cfg))
}

/// Long-term simple rate. When the long bond explodes this is `(0, Zero)`.
/// When `τ·L(t,t+τ) = 1/P - 1` settles on the ladder, `L` is `O(1/τ)` and
/// also `(0, Zero)`; otherwise the ladder of `L` itself is classified.
pub fn long_term_simple<C: Curve + ?Sized>(curve: &C, t: f64, cfg: &LongTermConfig) -> Result<LimitEstimate> {
    if long_bond(curve, t, cfg)?.class == LongTermClass::PlusInfinity {
        return Ok(LimitEstimate::zero());
    }
    let scaled = ladder(curve, t, cfg, |p, _| 1.0 / p - 1.0)?;
    if classify_ladder(&scaled, cfg).value.is_some() {
        return Ok(LimitEstimate::zero());
    }
    let raw: Vec<f64> = scaled.iter().zip(&cfg.horizons).map(|(s, tau)| s / tau).collect();
    Ok(classify_ladder(&raw, cfg))
}

/// Long-term swap rate and the annuity sum behind it.
///
/// A converged sum gives `1/S∞`. A divergent sum gives zero when the long
/// bond is finite; otherwise the par rates `(1 - P(t,T_n))/S_n(t)` are
/// followed until their last five changes fall below the stabilisation
/// tolerance, and `Undetermined` is returned if they never do.
pub fn long_term_swap_rate<C: Curve + ?Sized>(
    curve: &C,
    t: f64,
    grid: &TenorGrid,
    cfg: &LongTermConfig,
) -> Result<(LimitEstimate, TruncatedSum)> {
    let sum = sum_to_tolerance(curve, t, grid, cfg.sum_tol, cfg.n_max)?;
    if sum.converged {
        return Ok((LimitEstimate::new(Some(1.0 / sum.value), LongTermClass::FinitePositive), sum));
    }
    match long_bond(curve, t, cfg)?.class {
        LongTermClass::Zero | LongTermClass::FinitePositive => return Ok((LimitEstimate::zero(), sum)),
        _ => {}
    }
    let mut annuity = 0.0;
    let mut recent = [f64::NAN; 6];
    for n in 1..=cfg.n_max {
        let (Some(date), Some(accrual)) = (grid.date(n), grid.accrual(n)) else {
            break;
        };
        let p = curve.price(t, date)?;
        annuity += accrual * p;
        let r = (1.0 - p) / annuity;
        if !r.is_finite() {
            break;
        }
        recent[n % 6] = r;
        if n >= 6 && (1..6).all(|j| (recent[(n - j + 1) % 6] - recent[(n - j) % 6]).abs() < cfg.stabilization_tol) {
            return Ok((LimitEstimate::new(Some(r), LongTermClass::of_finite(r, cfg.class_tol)), sum));
        }
    }
    Ok((LimitEstimate::undetermined(), sum))
}

/// Tail estimate of `P(t, T_n) / S_n(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KRatio {
    pub value: f64,
    pub n_used: usize,
    /// The last five changes were below `1e-12`.
    pub settled: bool,
    /// The ratio at `n_used`, before any extrapolation.
    pub last: f64,
}

const K_SETTLE: f64 = 1e-12;

/// Follows `P(t, T_n) / S_n(t)` up to `n_max`. A settled sequence returns its
/// last value; otherwise the estimate is `2ρ(N) - ρ(N/2)`, which removes a
/// `1/n` term. The result is clamped to `[0, 1]`.
pub fn bond_sum_ratio_k<C: Curve + ?Sized>(curve: &C, t: f64, grid: &TenorGrid, n_max: usize) -> Result<KRatio> {
    if n_max < 2 {
        return Err(domain("k-ratio needs n_max >= 2"));
    }
    let mut ratios: Vec<f64> = Vec::new();
    let mut annuity = 0.0;
    for n in 1..=n_max {
        let (Some(date), Some(accrual)) = (grid.date(n), grid.accrual(n)) else {
            break;
        };
        let p = curve.price(t, date)?;
        annuity += accrual * p;
        let r = p / annuity;
        if !r.is_finite() {
            break;
        }
        ratios.push(r);
        let m = ratios.len();
        if m >= 6 && (m - 5..m).all(|i| (ratios[i] - ratios[i - 1]).abs() < K_SETTLE) {
            return Ok(KRatio { value: r.clamp(0.0, 1.0), n_used: m, settled: true, last: r });
        }
    }
    let m = ratios.len();
    if m < 2 {
        return Err(domain("k-ratio sequence has fewer than two finite terms"));
    }
    let last = ratios[m - 1];
    let half = ratios[m / 2 - 1];
    let value = (2.0 * last - half).clamp(0.0, 1.0);
    Ok(KRatio { value, n_used: m, settled: false, last })
}
