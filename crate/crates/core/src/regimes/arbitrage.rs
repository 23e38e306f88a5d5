//! Payoffs of two opposite long-term swaps entered at different times.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::rates::compounded_overnight;
use crate::time::ShortRatePath;

/// Agreement required between leg-by-leg and closed-form payoffs.
pub const CANCELLATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Pay fixed `R_t` from `t`, receive fixed `R_s` from `s`.
    PayerThenReceiver,
    /// Receive fixed `R_t` from `t`, pay fixed `R_s` from `s`.
    ReceiverThenPayer,
}

/// Two swaps on the tenor `T_i = s + iδ`, `i = 1..m`, with `t < s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapPortfolio {
    pub t: f64,
    pub s: f64,
    pub rate_t: f64,
    pub rate_s: f64,
    pub delta: f64,
    pub notional: f64,
    pub m: usize,
    pub orientation: Orientation,
}

impl SwapPortfolio {
    pub fn validate(&self) -> Result<()> {
        if !(self.t >= 0.0 && self.t < self.s && self.s.is_finite()) {
            return Err(domain(format!("need 0 <= t < s, got t={}, s={}", self.t, self.s)));
        }
        if !(self.delta > 0.0 && self.delta.is_finite() && self.notional > 0.0 && self.notional.is_finite()) {
            return Err(domain("accrual and notional must be finite and > 0"));
        }
        if !(self.rate_t.is_finite() && self.rate_s.is_finite()) {
            return Err(domain("swap rates must be finite"));
        }
        if self.m == 0 {
            return Err(domain("need at least one exchange"));
        }
        Ok(())
    }

    /// `T_i`, `i = 0..=m`.
    pub fn dates(&self) -> Vec<f64> {
        (0..=self.m).map(|i| self.s + i as f64 * self.delta).collect()
    }

    /// `δN(R_s - R_t)`, sign flipped for the receiver-first orientation.
    pub fn closed_form_payoff(&self) -> f64 {
        let sign = match self.orientation {
            Orientation::PayerThenReceiver => 1.0,
            Orientation::ReceiverThenPayer => -1.0,
        };
        let dn = self.delta * self.notional;
        sign * (dn * self.rate_s - dn * self.rate_t)
    }
}

/// Per-exchange payoffs recomputed from the floating and fixed legs of both
/// swaps for the given floating rates.
pub fn leg_payoffs(p: &SwapPortfolio, floating: &[f64]) -> Result<Vec<f64>> {
    p.validate()?;
    if floating.len() != p.m {
        return Err(domain(format!("need {} floating rates, got {}", p.m, floating.len())));
    }
    let dn = p.delta * p.notional;
    Ok(floating
        .iter()
        .map(|&l| {
            // Each swap's net cash flow to the holder at T_i.
            let first = dn * (l - p.rate_t);
            let second = dn * (p.rate_s - l);
            match p.orientation {
                Orientation::PayerThenReceiver => first + second,
                Orientation::ReceiverThenPayer => -first - second,
            }
        })
        .collect())
}

/// The payoffs `H_i`, after checking that the floating legs cancel for the
/// supplied floating rates.
pub fn arbitrage_payoffs(p: &SwapPortfolio, floating: &[f64]) -> Result<Vec<f64>> {
    let expected = p.closed_form_payoff();
    let legs = leg_payoffs(p, floating)?;
    let scale = p.delta * p.notional * (1.0 + floating.iter().fold(0.0f64, |a, l| a.max(l.abs())));
    for (i, h) in legs.iter().enumerate() {
        let err = (h - expected).abs();
        if err > CANCELLATION_TOL * scale.max(1.0) {
            return Err(Error::Numerical {
                what: format!("floating legs do not cancel at exchange {}", i + 1),
                tolerance: CANCELLATION_TOL,
                achieved: err,
            });
        }
    }
    Ok(alloc::vec![expected; p.m])
}

/// Compounded overnight rates over each accrual period of `p`.
pub fn overnight_rates(p: &SwapPortfolio, path: &ShortRatePath) -> Result<Vec<f64>> {
    let dates = p.dates();
    dates.windows(2).map(|w| compounded_overnight(path, w[0], w[1])).collect()
}
