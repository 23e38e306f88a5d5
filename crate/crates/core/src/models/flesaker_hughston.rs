//! Rational Flesaker-Hughston model `P(t,T) = (f(T) + g(T) M_t) / (f(t) + g(t) M_t)`.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::curve::{time_to_maturity, Curve};
use crate::error::{domain, invalid, Result};

/// A strictly positive, non-increasing function of time with finite grid sums.
#[derive(Debug, Clone, PartialEq)]
pub enum DecaySpec {
    /// `exp(-rate·t)`.
    Exponential { rate: f64 },
    /// Log-linear interpolation through `(knots[j], values[j])` with
    /// `knots[0] = 0`, continued by `exp(-tail_rate·(t - last knot))`.
    Tabulated { knots: Vec<f64>, values: Vec<f64>, tail_rate: f64 },
}

impl DecaySpec {
    pub fn exponential(rate: f64) -> Result<Self> {
        let s = DecaySpec::Exponential { rate };
        s.validate()?;
        Ok(s)
    }

    pub fn tabulated(knots: Vec<f64>, values: Vec<f64>, tail_rate: f64) -> Result<Self> {
        let s = DecaySpec::Tabulated { knots, values, tail_rate };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DecaySpec::Exponential { rate } => {
                if !(*rate > 0.0 && rate.is_finite()) {
                    return Err(invalid(format!("exponential decay rate must be > 0, got {rate}")));
                }
            }
            DecaySpec::Tabulated { knots, values, tail_rate } => {
                if knots.is_empty() || knots.len() != values.len() {
                    return Err(invalid("tabulated decay needs matching, non-empty knots and values"));
                }
                if knots[0] != 0.0 {
                    return Err(invalid("tabulated decay must start at t = 0"));
                }
                if knots.windows(2).any(|w| !(w[1] > w[0])) || !knots[knots.len() - 1].is_finite() {
                    return Err(invalid("tabulated knots must be finite and strictly increasing"));
                }
                if values.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                    return Err(invalid("tabulated values must be finite and > 0"));
                }
                if values.windows(2).any(|w| w[1] > w[0]) {
                    return Err(invalid("tabulated values must be non-increasing"));
                }
                // A positive tail rate makes the grid sums finite.
                if !(*tail_rate > 0.0 && tail_rate.is_finite()) {
                    return Err(invalid(format!("tabulated tail rate must be > 0, got {tail_rate}")));
                }
            }
        }
        Ok(())
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            DecaySpec::Exponential { rate } => (-rate * t).exp(),
            DecaySpec::Tabulated { knots, values, tail_rate } => {
                let last = knots.len() - 1;
                if t >= knots[last] {
                    return values[last] * (-tail_rate * (t - knots[last])).exp();
                }
                let j = knots.partition_point(|&k| k <= t) - 1;
                let w = (t - knots[j]) / (knots[j + 1] - knots[j]);
                (values[j].ln() * (1.0 - w) + values[j + 1].ln() * w).exp()
            }
        }
    }

    /// `Σ_{i>n} f(start + iδ)`, exact for the exponential part of the decay.
    pub fn grid_tail(&self, start: f64, delta: f64, n: usize) -> f64 {
        let first = start + (n + 1) as f64 * delta;
        match self {
            DecaySpec::Exponential { rate } => (-rate * first).exp() / -(-rate * delta).exp_m1(),
            DecaySpec::Tabulated { knots, tail_rate, .. } => {
                let last = knots[knots.len() - 1];
                let mut sum = 0.0;
                let mut i = n + 1;
                let mut date = first;
                while date < last {
                    sum += self.value(date);
                    i += 1;
                    date = start + i as f64 * delta;
                }
                sum + self.value(date) / -(-tail_rate * delta).exp_m1()
            }
        }
    }

    /// Exponential decay rate as `t → ∞`.
    pub fn asymptotic_rate(&self) -> f64 {
        match self {
            DecaySpec::Exponential { rate } => *rate,
            DecaySpec::Tabulated { tail_rate, .. } => *tail_rate,
        }
    }
}

/// Flesaker-Hughston model with `A_t = f(t) + g(t) M_t` and a geometric
/// Brownian driver `M` started at 1.
#[derive(Debug, Clone, PartialEq)]
pub struct FhRationalModel {
    f: DecaySpec,
    g: DecaySpec,
    sigma: f64,
}

impl FhRationalModel {
    pub fn new(f: DecaySpec, g: DecaySpec, sigma: f64) -> Result<Self> {
        f.validate()?;
        g.validate()?;
        if let (DecaySpec::Exponential { rate: a }, DecaySpec::Exponential { rate: b }) = (&f, &g) {
            if !(a < b) {
                return Err(invalid(format!("need 0 < alpha < beta, got alpha={a}, beta={b}")));
            }
        }
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(invalid(format!("driver volatility must be finite and >= 0, got {sigma}")));
        }
        Ok(FhRationalModel { f, g, sigma })
    }

    /// `f(t) = e^{-αt}`, `g(t) = e^{-βt}`.
    pub fn exponential(alpha: f64, beta: f64, sigma: f64) -> Result<Self> {
        Self::new(DecaySpec::exponential(alpha)?, DecaySpec::exponential(beta)?, sigma)
    }

    pub fn f(&self) -> &DecaySpec {
        &self.f
    }

    pub fn g(&self) -> &DecaySpec {
        &self.g
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `(α, β)` when both functions are exponential.
    pub fn exponential_rates(&self) -> Option<(f64, f64)> {
        match (&self.f, &self.g) {
            (DecaySpec::Exponential { rate: a }, DecaySpec::Exponential { rate: b }) => Some((*a, *b)),
            _ => None,
        }
    }

    /// State price density `f(t) + g(t) m`.
    pub fn state_price_density(&self, m: f64, t: f64) -> Result<f64> {
        check_state(m)?;
        Ok(self.f.value(t) + self.g.value(t) * m)
    }

    /// Bond price given `M_t = m`.
    pub fn price(&self, m: f64, t: f64, maturity: f64) -> Result<f64> {
        check_state(m)?;
        let tau = time_to_maturity(t, maturity)?;
        if tau == 0.0 {
            return Ok(1.0);
        }
        let num = self.f.value(maturity) + self.g.value(maturity) * m;
        let den = self.f.value(t) + self.g.value(t) * m;
        Ok(num / den)
    }

    /// The curve seen with the driver frozen at `m`.
    pub fn curve(&self, m: f64) -> Result<FhRationalCurve> {
        check_state(m)?;
        Ok(FhRationalCurve { model: self.clone(), m })
    }
}

fn check_state(m: f64) -> Result<()> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(domain(format!("driver state must be finite and > 0, got {m}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FhRationalCurve {
    model: FhRationalModel,
    m: f64,
}

impl FhRationalCurve {
    pub fn model(&self) -> &FhRationalModel {
        &self.model
    }

    pub fn state(&self) -> f64 {
        self.m
    }
}

impl Curve for FhRationalCurve {
    fn price(&self, t: f64, maturity: f64) -> Result<f64> {
        self.model.price(self.m, t, maturity)
    }
}
