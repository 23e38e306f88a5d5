use crate::curve::Curve;
use crate::error::{domain, Result};
use crate::time::TenorGrid;

/// How a truncated sum behaved at the point it stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumGrowth {
    /// Terms shrink geometrically; the tail bound applies.
    Geometric,
    /// Terms neither shrink geometrically nor grow: the partial sums grow
    /// roughly linearly.
    Linear,
    /// Terms grow.
    Explosive,
}

/// Partial sum of `Σ δ_i P(t, T_i)` with a bound on the remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedSum {
    pub value: f64,
    pub n_used: usize,
    /// Geometric tail bound; infinite when no bound applies.
    pub tail_bound: f64,
    pub converged: bool,
    /// Ratio of the last two terms.
    pub last_ratio: f64,
    pub growth: SumGrowth,
}

const WINDOW: usize = 5;

/// Sums `δ_i P(t, T_i)` until `last·ρ/(1-ρ) <= tol`, where `ρ` is the
/// largest of the last five term ratios and all five are below one.
/// Stops unconverged at `n_max` or when the sum stops being finite.
pub fn sum_to_tolerance<C: Curve + ?Sized>(
    curve: &C,
    t: f64,
    grid: &TenorGrid,
    tol: f64,
    n_max: usize,
) -> Result<TruncatedSum> {
    if !(tol > 0.0) {
        return Err(domain("sum tolerance must be > 0"));
    }
    let mut sum = 0.0;
    let mut prev = f64::NAN;
    let mut ratios = [f64::NAN; WINDOW];
    let mut below = 0usize;
    let mut last_ratio = f64::NAN;
    let mut n_used = 0;
    let mut overflowed = false;
    for i in 1..=n_max {
        let (Some(date), Some(accrual)) = (grid.date(i), grid.accrual(i)) else {
            break;
        };
        let term = accrual * curve.price(t, date)?;
        let next = sum + term;
        if !next.is_finite() {
            overflowed = true;
            break;
        }
        sum = next;
        n_used = i;
        if i > 1 {
            let r = if prev == 0.0 { 0.0 } else { term / prev };
            ratios[(i - 2) % WINDOW] = r;
            last_ratio = r;
            below = if r < 1.0 { below + 1 } else { 0 };
            if below >= WINDOW {
                let rho = ratios.iter().copied().fold(0.0, f64::max);
                let bound = term * rho / (1.0 - rho);
                if bound <= tol {
                    return Ok(TruncatedSum {
                        value: sum,
                        n_used,
                        tail_bound: bound,
                        converged: true,
                        last_ratio,
                        growth: SumGrowth::Geometric,
                    });
                }
            }
        }
        prev = term;
    }
    let growth = if overflowed || last_ratio > 1.0 {
        SumGrowth::Explosive
    } else if below >= WINDOW && last_ratio < 1.0 - 1e-9 {
        SumGrowth::Geometric
    } else {
        SumGrowth::Linear
    };
    Ok(TruncatedSum { value: sum, n_used, tail_bound: f64::INFINITY, converged: false, last_ratio, growth })
}
