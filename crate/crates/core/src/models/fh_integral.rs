//! Integral Flesaker-Hughston model with `A_t = ∫_t^∞ φ(s) M(t,s) ds` and a
//! family of exponential martingales `M(t,s) = exp(σ(s) W_t - σ(s)² t / 2)`
//! sharing one Brownian driver `W`.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::curve::{time_to_maturity, Curve};
use crate::error::{domain, invalid, Result};
use crate::numeric::adaptive_simpson;

/// Quadrature is carried out on `[t, t + CUTOFF_SCALE / α_min]`.
pub const CUTOFF_SCALE: f64 = 60.0;
/// Relative tolerance of each integral.
pub const QUAD_TOL: f64 = 1e-10;
const MAX_DEPTH: u32 = 48;

/// Volatility of the martingale indexed by `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VolSpec {
    Constant(f64),
    /// `σ(s) = sigma0 · exp(-kappa·s)`.
    Decaying { sigma0: f64, kappa: f64 },
}

impl VolSpec {
    pub fn at(&self, s: f64) -> f64 {
        match *self {
            VolSpec::Constant(v) => v,
            VolSpec::Decaying { sigma0, kappa } => sigma0 * (-kappa * s).exp(),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            VolSpec::Constant(v) => v >= 0.0 && v.is_finite(),
            VolSpec::Decaying { sigma0, kappa } => {
                sigma0 >= 0.0 && sigma0.is_finite() && kappa >= 0.0 && kappa.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(format!("volatility must be finite and non-negative, got {self:?}")))
        }
    }
}

/// `φ(s) = Σ_j w_j α_j e^{-α_j s}` with `w_j, α_j > 0`, so that
/// `∫_T^∞ φ = Σ_j w_j e^{-α_j T}` is available in closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct FhIntegralModel {
    weights: Vec<(f64, f64)>,
    vol: VolSpec,
    q_convergence_assumed: bool,
    alpha_min: f64,
}

impl FhIntegralModel {
    /// Mixture of `(weight, rate)` pairs.
    pub fn new(weights: Vec<(f64, f64)>, vol: VolSpec, q_convergence_assumed: bool) -> Result<Self> {
        if weights.is_empty() {
            return Err(invalid("weight function needs at least one exponential term"));
        }
        for &(w, a) in &weights {
            if !(w > 0.0 && w.is_finite() && a > 0.0 && a.is_finite()) {
                return Err(invalid(format!("weight terms need w > 0 and rate > 0, got ({w}, {a})")));
            }
        }
        vol.validate()?;
        let alpha_min = weights.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        Ok(FhIntegralModel { weights, vol, q_convergence_assumed, alpha_min })
    }

    /// `φ(s) = α e^{-αs}`.
    pub fn exponential(alpha: f64, vol: VolSpec) -> Result<Self> {
        Self::new(alloc::vec![(1.0, alpha)], vol, true)
    }

    pub fn weights(&self) -> &[(f64, f64)] {
        &self.weights
    }

    pub fn vol(&self) -> VolSpec {
        self.vol
    }

    pub fn alpha_min(&self) -> f64 {
        self.alpha_min
    }

    /// Whether `Q_n → Q` in ucp is taken as given for this model.
    pub fn q_convergence_assumed(&self) -> bool {
        self.q_convergence_assumed
    }

    pub fn phi(&self, s: f64) -> f64 {
        self.weights.iter().map(|&(w, a)| w * a * (-a * s).exp()).sum()
    }

    /// `∫_T^∞ φ(s) ds`.
    pub fn phi_tail(&self, from: f64) -> f64 {
        self.weights.iter().map(|&(w, a)| w * (-a * from).exp()).sum()
    }

    /// `∫_a^b φ(s) ds` without cancellation for short intervals.
    pub fn phi_between(&self, a: f64, b: f64) -> f64 {
        self.weights.iter().map(|&(w, r)| -w * (-r * a).exp() * (-r * (b - a)).exp_m1()).sum()
    }

    /// `M(t,s)` given `W_t = w`.
    pub fn martingale(&self, w: f64, t: f64, s: f64) -> f64 {
        let v = self.vol.at(s);
        (v * w - 0.5 * v * v * t).exp()
    }

    fn deterministic(&self) -> bool {
        match self.vol {
            VolSpec::Constant(v) => v == 0.0,
            VolSpec::Decaying { sigma0, .. } => sigma0 == 0.0,
        }
    }

    fn cutoff(&self, t: f64) -> f64 {
        t + CUTOFF_SCALE / self.alpha_min
    }

    /// `∫_a^b φ(s) M(t,s) ds` to relative accuracy [`QUAD_TOL`].
    fn integral(&self, w: f64, t: f64, a: f64, b: f64) -> Result<f64> {
        if b <= a {
            return Ok(0.0);
        }
        if self.deterministic() {
            return Ok(self.phi_between(a, b));
        }
        let f = |s: f64| self.phi(s) * self.martingale(w, t, s);
        // Eight-panel Simpson sets the scale for the absolute tolerance.
        let n = 8;
        let h = (b - a) / n as f64;
        let mut rough = f(a) + f(b);
        for i in 1..n {
            rough += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
        }
        rough *= h / 3.0;
        let scale = rough.abs().max(f64::MIN_POSITIVE);
        adaptive_simpson(&f, a, b, QUAD_TOL * scale, MAX_DEPTH)
    }

    /// `∫_a^∞ φ(s) M(t,s) ds`, quadrature up to the cutoff plus a tail that
    /// freezes `M` at the cutoff.
    fn integral_to_infinity(&self, w: f64, t: f64, a: f64) -> Result<f64> {
        let cut = self.cutoff(t);
        if a >= cut {
            return Ok(self.martingale(w, t, a) * self.phi_tail(a));
        }
        let body = self.integral(w, t, a, cut)?;
        Ok(body + self.martingale(w, t, cut) * self.phi_tail(cut))
    }

    /// Numerator and the part of the denominator before `T`.
    fn pieces(&self, w: f64, t: f64, maturity: f64) -> Result<(f64, f64)> {
        let cut = self.cutoff(t);
        let num = self.integral_to_infinity(w, t, maturity)?;
        let head = if maturity <= cut {
            self.integral(w, t, t, maturity)?
        } else {
            self.integral(w, t, t, cut)?
                + self.martingale(w, t, cut) * self.phi_between(cut, maturity)
        };
        Ok((num, head))
    }

    /// State price density `A_t` given `W_t = w`.
    pub fn state_price_density(&self, w: f64, t: f64) -> Result<f64> {
        check_state(w, t)?;
        self.integral_to_infinity(w, t, t)
    }

    /// Bond price given `W_t = w`. Computed as `num / (head + num)` so short
    /// maturities keep full relative accuracy in `1 - P`.
    pub fn price(&self, w: f64, t: f64, maturity: f64) -> Result<f64> {
        check_state(w, t)?;
        let tau = time_to_maturity(t, maturity)?;
        if tau == 0.0 {
            return Ok(1.0);
        }
        let (num, head) = self.pieces(w, t, maturity)?;
        let p = num / (head + num);
        if !(p > 0.0 && p.is_finite()) {
            return Err(crate::Error::Numerical {
                what: format!("integral bond price at t={t}, T={maturity} is {p}"),
                tolerance: QUAD_TOL,
                achieved: f64::NAN,
            });
        }
        Ok(p)
    }

    /// The curve seen with `W_t = w`.
    pub fn curve(&self, w: f64) -> Result<FhIntegralCurve> {
        if !w.is_finite() {
            return Err(domain(format!("driver state must be finite, got {w}")));
        }
        Ok(FhIntegralCurve { model: self.clone(), w })
    }
}

fn check_state(w: f64, t: f64) -> Result<()> {
    if !w.is_finite() || !(t >= 0.0 && t.is_finite()) {
        return Err(domain(format!("need finite driver state and t >= 0, got w={w}, t={t}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FhIntegralCurve {
    model: FhIntegralModel,
    w: f64,
}

impl FhIntegralCurve {
    pub fn model(&self) -> &FhIntegralModel {
        &self.model
    }

    pub fn state(&self) -> f64 {
        self.w
    }
}

impl Curve for FhIntegralCurve {
    fn price(&self, t: f64, maturity: f64) -> Result<f64> {
        self.model.price(self.w, t, maturity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::FlatCurve;
    use crate::rates::{short_rate_fd, DEFAULT_FD_STEP};
    use alloc::vec;
    use approx::assert_relative_eq;

    #[test]
    fn deterministic_case_is_flat() {
        let m = FhIntegralModel::exponential(0.03, VolSpec::Constant(0.0)).unwrap();
        assert_eq!(m.price(0.0, 4.0, 4.0).unwrap(), 1.0);
        assert_relative_eq!(m.price(0.0, 0.0, 10.0).unwrap(), 0.7408182206817179, max_relative = 1e-13);
        let flat = FlatCurve::new(0.03).unwrap();
        for (t, tt) in [(0.0, 0.5), (2.0, 30.0), (5.0, 400.0)] {
            assert_relative_eq!(m.price(0.0, t, tt).unwrap(), flat.price(t, tt).unwrap(), max_relative = 1e-12);
        }
    }

    #[test]
    fn quadrature_matches_closed_form_with_constant_vol() {
        // With constant σ the martingale does not depend on s and cancels.
        let m = FhIntegralModel::new(vec![(1.0, 0.03)], VolSpec::Constant(0.25), true).unwrap();
        for (w, t, tt) in [(0.7, 1.0, 3.0), (-1.2, 2.0, 50.0), (0.1, 0.0, 200.0)] {
            assert_relative_eq!(m.price(w, t, tt).unwrap(), (-0.03f64 * (tt - t)).exp(), max_relative = 1e-9);
        }
    }

    #[test]
    fn short_rate_stays_accurate() {
        let m = FhIntegralModel::exponential(0.04, VolSpec::Decaying { sigma0: 0.2, kappa: 0.1 }).unwrap();
        let c = m.curve(0.3).unwrap();
        let r = short_rate_fd(&c, 1.0, DEFAULT_FD_STEP).unwrap();
        // r_t = φ(t) M(t,t) / A_t.
        let exact = m.phi(1.0) * m.martingale(0.3, 1.0, 1.0) / m.state_price_density(0.3, 1.0).unwrap();
        assert!((r - exact).abs() < 1e-6, "{r} vs {exact}");
    }

    #[test]
    fn mixture_prices_lie_between_components() {
        let m = FhIntegralModel::new(vec![(0.5, 0.02), (0.5, 0.08)], VolSpec::Constant(0.0), true).unwrap();
        let p = m.price(0.0, 0.0, 20.0).unwrap();
        assert_relative_eq!(p, 0.5 * (-0.4f64).exp() + 0.5 * (-1.6f64).exp(), max_relative = 1e-13);
        assert!(FhIntegralModel::new(vec![(0.0, 0.02)], VolSpec::Constant(0.1), true).is_err());
        assert!(FhIntegralModel::new(vec![], VolSpec::Constant(0.1), true).is_err());
    }
}
