//! Discount curves `P(t, T)`.

use alloc::boxed::Box;
use alloc::format;
use alloc::sync::Arc;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{domain, invalid, Result};

/// A zero-coupon bond price surface `P(t, T)` for `0 <= t <= T`.
///
/// Implementations return `1` at `T = t` and a positive finite price
/// elsewhere. `t > T` is an error, never an extrapolation.
pub trait Curve {
    fn price(&self, t: f64, maturity: f64) -> Result<f64>;
}

impl<C: Curve + ?Sized> Curve for &C {
    fn price(&self, t: f64, maturity: f64) -> Result<f64> {
        (**self).price(t, maturity)
    }
}

impl<C: Curve + ?Sized> Curve for Box<C> {
    fn price(&self, t: f64, maturity: f64) -> Result<f64> {
        (**self).price(t, maturity)
    }
}

impl<C: Curve + ?Sized> Curve for Arc<C> {
    fn price(&self, t: f64, maturity: f64) -> Result<f64> {
        (**self).price(t, maturity)
    }
}

/// Validates `0 <= t <= maturity` and returns the time to maturity.
pub fn time_to_maturity(t: f64, maturity: f64) -> Result<f64> {
    if !(t.is_finite() && maturity.is_finite()) || t < 0.0 {
        return Err(domain(format!("need finite 0 <= t <= T, got t={t}, T={maturity}")));
    }
    if t > maturity {
        return Err(domain(format!("curve evaluated with t={t} > T={maturity}")));
    }
    Ok(maturity - t)
}

/// `P(t,T) = exp(-r (T-t))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatCurve {
    pub rate: f64,
}

impl FlatCurve {
    pub fn new(rate: f64) -> Result<Self> {
        if !rate.is_finite() {
            return Err(invalid("flat rate must be finite"));
        }
        Ok(FlatCurve { rate })
    }
}

impl Curve for FlatCurve {
    fn price(&self, t: f64, maturity: f64) -> Result<f64> {
        let tau = time_to_maturity(t, maturity)?;
        Ok((-self.rate * tau).exp())
    }
}

/// `P(t,T) = a + (1-a) exp(-λ (T-t))`, a curve whose long bond is `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticCurve {
    pub floor: f64,
    pub lambda: f64,
}

impl SyntheticCurve {
    pub fn new(floor: f64, lambda: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&floor) {
            return Err(invalid(format!("synthetic floor a must be in [0, 1), got {floor}")));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(invalid(format!("synthetic decay must be > 0, got {lambda}")));
        }
        Ok(SyntheticCurve { floor, lambda })
    }
}

impl Curve for SyntheticCurve {
    fn price(&self, t: f64, maturity: f64) -> Result<f64> {
        let tau = time_to_maturity(t, maturity)?;
        Ok(self.floor + (1.0 - self.floor) * (-self.lambda * tau).exp())
    }
}

/// `P(t,T) = exp(λ (T-t))`: bond prices that grow without bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExplodingCurve {
    pub lambda: f64,
}

impl ExplodingCurve {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(invalid(format!("exploding rate must be > 0, got {lambda}")));
        }
        Ok(ExplodingCurve { lambda })
    }
}

impl Curve for ExplodingCurve {
    fn price(&self, t: f64, maturity: f64) -> Result<f64> {
        let tau = time_to_maturity(t, maturity)?;
        Ok((self.lambda * tau).exp())
    }
}

/// `P(t,T) = exp(-c (T-t)^2)`: the yield `c (T-t)` grows without bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianCurve {
    pub curvature: f64,
}

impl GaussianCurve {
    pub fn new(curvature: f64) -> Result<Self> {
        if !(curvature > 0.0 && curvature.is_finite()) {
            return Err(invalid(format!("gaussian curvature must be > 0, got {curvature}")));
        }
        Ok(GaussianCurve { curvature })
    }
}

impl Curve for GaussianCurve {
    fn price(&self, t: f64, maturity: f64) -> Result<f64> {
        let tau = time_to_maturity(t, maturity)?;
        Ok((-self.curvature * tau * tau).exp())
    }
}

/// The bond sequence `P(t, T_n) = 1 + x^n` on a uniform grid of spacing `unit`
/// anchored at `t`.
///
/// The exponent is the exchange index `(T - t) / unit`; at `T = t` the price is
/// pinned to 1. It exists for the bond-to-annuity ratio check and is not an
/// arbitrage-free curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerCurve {
    pub base: f64,
    pub unit: f64,
}

impl PowerCurve {
    pub fn new(base: f64, unit: f64) -> Result<Self> {
        if !(base > 0.0 && base.is_finite()) {
            return Err(invalid(format!("power base must be > 0, got {base}")));
        }
        if !(unit > 0.0 && unit.is_finite()) {
            return Err(invalid(format!("power unit must be > 0, got {unit}")));
        }
        Ok(PowerCurve { base, unit })
    }
}

impl Curve for PowerCurve {
    fn price(&self, t: f64, maturity: f64) -> Result<f64> {
        let tau = time_to_maturity(t, maturity)?;
        if tau == 0.0 {
            return Ok(1.0);
        }
        Ok(1.0 + self.base.powf(tau / self.unit))
    }
}
