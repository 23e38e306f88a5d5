use alloc::format;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{domain, Result};
use crate::models::linear_rational::LinearRationalModel;

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(domain(format!("{name} must be finite and > 0, got {v}")));
    }
    Ok(())
}

/// Geometric sum `Σ_{i>=1} e^{-rate·δ·i} = 1/(e^{rate·δ} - 1)`.
fn geometric_inf(rate: f64, delta: f64) -> f64 {
    1.0 / (rate * delta).exp_m1()
}

/// Exponential Flesaker-Hughston limits on a uniform grid anchored at `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FhClosedForms {
    pub alpha_inf: f64,
    pub beta_inf: f64,
    /// `S∞(t) = δ (F + G m) / (f(t) + g(t) m)`.
    pub s_inf: f64,
    pub swap_rate: f64,
}

/// `f(t) = e^{-αt}`, `g(t) = e^{-βt}`, `M_t = m`, exchange dates `t + iδ`.
pub fn fh_exponential_closed_forms(alpha: f64, beta: f64, delta: f64, m: f64, t: f64) -> Result<FhClosedForms> {
    check_positive("alpha", alpha)?;
    check_positive("delta", delta)?;
    check_positive("m", m)?;
    if !(alpha < beta && beta.is_finite()) {
        return Err(domain(format!("need alpha < beta, got alpha={alpha}, beta={beta}")));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(domain(format!("t must be finite and >= 0, got {t}")));
    }
    let alpha_inf = geometric_inf(alpha, delta);
    let beta_inf = geometric_inf(beta, delta);
    let (f, g) = ((-alpha * t).exp(), (-beta * t).exp());
    let s_inf = delta * (f * alpha_inf + g * beta_inf * m) / (f + g * m);
    Ok(FhClosedForms { alpha_inf, beta_inf, s_inf, swap_rate: 1.0 / s_inf })
}

/// Linear-rational limits on a uniform grid anchored at `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrClosedForms {
    /// `Σ_{i>=1} e^{-αδi}`; infinite when `α = 0`.
    pub alpha_inf: f64,
    /// `Σ_{i>=1} e^{-(α+k)δi}`.
    pub beta_inf: f64,
    pub s_inf: f64,
    /// `1/S∞`, and 0 when the sum diverges.
    pub swap_rate: f64,
    pub converged: bool,
}

/// Closed forms from the scalars `α`, `k`, `y = φ + ψᵀθ`, `ψᵀ(x - θ)` and
/// `φ + ψᵀx`, without deriving `α` from a box.
pub fn lr_closed_forms_explicit(
    alpha: f64,
    k: f64,
    y: f64,
    deviation: f64,
    level: f64,
    delta: f64,
) -> Result<LrClosedForms> {
    check_positive("delta", delta)?;
    check_positive("phi + psi'x", level)?;
    if !(alpha >= 0.0 && k >= 0.0 && alpha.is_finite() && k.is_finite()) {
        return Err(domain(format!("need finite alpha, k >= 0, got alpha={alpha}, k={k}")));
    }
    let alpha_inf = if alpha > 0.0 { geometric_inf(alpha, delta) } else { f64::INFINITY };
    let beta_inf = if alpha + k > 0.0 { geometric_inf(alpha + k, delta) } else { f64::INFINITY };
    if alpha == 0.0 {
        return Ok(LrClosedForms { alpha_inf, beta_inf, s_inf: f64::INFINITY, swap_rate: 0.0, converged: false });
    }
    // With k = 0 both sums coincide and the bracket collapses to y + ψᵀ(x-θ).
    let bracket = if k == 0.0 { (y + deviation) * alpha_inf } else { y * alpha_inf + deviation * beta_inf };
    let s_inf = delta * bracket / level;
    Ok(LrClosedForms { alpha_inf, beta_inf, s_inf, swap_rate: 1.0 / s_inf, converged: true })
}

/// Closed forms for `model` at state `x`.
pub fn lr_closed_forms(model: &LinearRationalModel, x: &[f64], t: f64, delta: f64) -> Result<LrClosedForms> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(domain(format!("t must be finite and >= 0, got {t}")));
    }
    let level = model.level(x)?;
    let deviation = model.deviation(x)?;
    lr_closed_forms_explicit(model.alpha(), model.k(), model.y(), deviation, level, delta)
}
