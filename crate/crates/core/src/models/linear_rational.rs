//! Linear-rational model: `A_t = e^{-αt} (φ + ψᵀX_t)` with a mean-reverting
//! factor `dX_t = k(θ - X_t) dt + dM_t` confined to a box `E`.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::curve::{time_to_maturity, Curve};
use crate::error::{domain, invalid, Result};
use crate::models::simulation::DriverSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearRationalModel {
    k: f64,
    theta: Vec<f64>,
    phi: f64,
    psi: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    vol: f64,
    alpha: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl LinearRationalModel {
    /// `vol` is the per-coordinate volatility of the Gaussian martingale part.
    pub fn new(
        k: f64,
        theta: Vec<f64>,
        phi: f64,
        psi: Vec<f64>,
        lower: Vec<f64>,
        upper: Vec<f64>,
        vol: f64,
    ) -> Result<Self> {
        let d = theta.len();
        if d == 0 || psi.len() != d || lower.len() != d || upper.len() != d {
            return Err(invalid("theta, psi and box bounds need the same non-zero dimension"));
        }
        if !(k >= 0.0 && k.is_finite()) {
            return Err(invalid(format!("mean-reversion speed must be >= 0, got {k}")));
        }
        if !(vol >= 0.0 && vol.is_finite()) {
            return Err(invalid(format!("factor volatility must be >= 0, got {vol}")));
        }
        let all = theta.iter().chain(&psi).chain(&lower).chain(&upper);
        if !phi.is_finite() || all.clone().any(|v| !v.is_finite()) {
            return Err(invalid("model parameters must be finite"));
        }
        for i in 0..d {
            if !(lower[i] <= upper[i]) {
                return Err(invalid(format!("box coordinate {i} has lower > upper")));
            }
            if !(lower[i] <= theta[i] && theta[i] <= upper[i]) {
                return Err(invalid(format!("theta[{i}] = {} lies outside the box", theta[i])));
            }
        }
        let mut model = LinearRationalModel { k, theta, phi, psi, lower, upper, vol, alpha: 0.0 };
        model.alpha = model.corner_alpha()?;
        Ok(model)
    }

    /// One-factor model on `E = [box.0, box.1]`.
    pub fn one_factor(k: f64, theta: f64, phi: f64, psi: f64, bounds: (f64, f64), vol: f64) -> Result<Self> {
        Self::new(k, alloc::vec![theta], phi, alloc::vec![psi], alloc::vec![bounds.0], alloc::vec![bounds.1], vol)
    }

    /// `sup_E k ψᵀ(θ - x) / (φ + ψᵀx)`. The objective is monotone in each
    /// coordinate, so the supremum sits on one of the `2^d` corners.
    fn corner_alpha(&self) -> Result<f64> {
        let d = self.dim();
        if d >= 32 {
            return Err(invalid("corner enumeration supports fewer than 32 factors"));
        }
        let mut corner = alloc::vec![0.0; d];
        let mut best = f64::NEG_INFINITY;
        for mask in 0u32..(1u32 << d) {
            for (i, c) in corner.iter_mut().enumerate() {
                *c = if mask >> i & 1 == 1 { self.upper[i] } else { self.lower[i] };
            }
            let den = self.phi + dot(&self.psi, &corner);
            if !(den > 0.0) {
                return Err(invalid(format!("phi + psi'x = {den} is not positive at corner {corner:?}")));
            }
            let num: f64 = self.psi.iter().zip(&self.theta).zip(&corner).map(|((p, th), x)| p * (th - x)).sum();
            best = best.max(self.k * num / den);
        }
        // θ ∈ E gives the value 0, so only rounding can push this below zero.
        Ok(best.max(0.0))
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    pub fn bounds(&self) -> (&[f64], &[f64]) {
        (&self.lower, &self.upper)
    }

    pub fn vol(&self) -> f64 {
        self.vol
    }

    /// `y = φ + ψᵀθ`.
    pub fn y(&self) -> f64 {
        self.phi + dot(&self.psi, &self.theta)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    fn check_state(&self, x: &[f64]) -> Result<()> {
        if !self.contains(x) {
            return Err(domain(format!("state {x:?} lies outside the box")));
        }
        Ok(())
    }

    /// `φ + ψᵀx`.
    pub fn level(&self, x: &[f64]) -> Result<f64> {
        self.check_state(x)?;
        Ok(self.phi + dot(&self.psi, x))
    }

    /// `ψᵀ(x - θ)`.
    pub fn deviation(&self, x: &[f64]) -> Result<f64> {
        self.check_state(x)?;
        Ok(self.psi.iter().zip(x.iter().zip(&self.theta)).map(|(p, (v, th))| p * (v - th)).sum())
    }

    pub fn state_price_density(&self, x: &[f64], t: f64) -> Result<f64> {
        Ok((-self.alpha * t).exp() * self.level(x)?)
    }

    pub fn price(&self, x: &[f64], t: f64, maturity: f64) -> Result<f64> {
        let level = self.level(x)?;
        let tau = time_to_maturity(t, maturity)?;
        if tau == 0.0 {
            return Ok(1.0);
        }
        let dev = self.deviation(x)?;
        Ok((self.y() * (-self.alpha * tau).exp() + dev * (-(self.alpha + self.k) * tau).exp()) / level)
    }

    pub fn curve(&self, x: &[f64]) -> Result<LinearRationalCurve> {
        self.check_state(x)?;
        Ok(LinearRationalCurve { model: self.clone(), x: x.to_vec() })
    }

    /// Factor dynamics started at `x0`.
    pub fn driver(&self, x0: &[f64]) -> Result<DriverSpec> {
        self.check_state(x0)?;
        Ok(DriverSpec::MeanReverting {
            k: self.k,
            theta: self.theta.clone(),
            vol: self.vol,
            lower: self.lower.clone(),
            upper: self.upper.clone(),
            x0: x0.to_vec(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearRationalCurve {
    model: LinearRationalModel,
    x: Vec<f64>,
}

impl LinearRationalCurve {
    pub fn model(&self) -> &LinearRationalModel {
        &self.model
    }

    pub fn state(&self) -> &[f64] {
        &self.x
    }
}

impl Curve for LinearRationalCurve {
    fn price(&self, t: f64, maturity: f64) -> Result<f64> {
        self.model.price(&self.x, t, maturity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::{short_rate_fd, DEFAULT_FD_STEP};
    use alloc::vec;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn base() -> LinearRationalModel {
        LinearRationalModel::one_factor(0.1, 0.5, 1.0, 1.0, (0.0, 1.0), 0.05).unwrap()
    }

    #[test]
    fn alpha_examples() {
        assert_relative_eq!(base().alpha(), 0.05, max_relative = 1e-15);
        let flat_psi = LinearRationalModel::one_factor(0.1, 0.5, 1.0, 0.0, (0.0, 1.0), 0.05).unwrap();
        assert_eq!(flat_psi.alpha(), 0.0);
        let frozen = LinearRationalModel::one_factor(0.0, 0.5, 1.0, 1.0, (0.0, 1.0), 0.05).unwrap();
        assert_eq!(frozen.alpha(), 0.0);
    }

    #[test]
    fn alpha_two_factor_corner() {
        let m = LinearRationalModel::new(
            0.2, vec![0.5, 0.5], 1.0, vec![1.0, 2.0], vec![0.0, 0.0], vec![1.0, 1.0], 0.05,
        )
        .unwrap();
        // Corner (0, 0): 0.2 · (0.5 + 1.0) / 1.
        assert_relative_eq!(m.alpha(), 0.3, max_relative = 1e-15);
    }

    #[test]
    fn positivity_violation_is_invalid() {
        assert!(LinearRationalModel::one_factor(0.1, 0.5, 1.0, -2.0, (0.0, 1.0), 0.05).is_err());
        assert!(LinearRationalModel::one_factor(0.1, 1.5, 1.0, 1.0, (0.0, 1.0), 0.05).is_err());
    }

    #[test]
    fn price_examples() {
        let m = base();
        assert_relative_eq!(m.price(&[0.8], 0.0, 2.0).unwrap(), 0.8775008851435865, max_relative = 1e-14);
        assert_relative_eq!(m.price(&[0.5], 1.0, 4.0).unwrap(), (-0.15f64).exp(), max_relative = 1e-14);
        assert_eq!(m.price(&[0.2], 3.0, 3.0).unwrap(), 1.0);
        assert!(m.price(&[1.2], 0.0, 1.0).is_err());
    }

    #[test]
    fn density_examples() {
        let m = base();
        assert_eq!(m.state_price_density(&[0.5], 0.0).unwrap(), 1.5);
        assert_relative_eq!(m.state_price_density(&[0.5], 1.0).unwrap(), 1.426844136751071, max_relative = 1e-14);
    }

    proptest! {
        #[test]
        fn short_rate_non_negative_in_box(x in 0.0f64..=1.0, t in 0.0f64..30.0, k in 0.0f64..1.0, psi in 0.0f64..3.0) {
            let m = LinearRationalModel::one_factor(k, 0.5, 1.0, psi, (0.0, 1.0), 0.05).unwrap();
            let r = short_rate_fd(&m.curve(&[x]).unwrap(), t, DEFAULT_FD_STEP).unwrap();
            prop_assert!(r >= -1e-6 * 1e-3, "{}", r);
        }
    }
}
