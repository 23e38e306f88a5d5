//! Seeded parameter draws for the built-in curve families.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::curve::{Curve, ExplodingCurve, FlatCurve, GaussianCurve, SyntheticCurve};
use crate::error::Result;
use crate::models::fh_integral::{FhIntegralCurve, FhIntegralModel, VolSpec};
use crate::models::flesaker_hughston::{DecaySpec, FhRationalCurve, FhRationalModel};
use crate::models::linear_rational::{LinearRationalCurve, LinearRationalModel};
use crate::models::simulation::path_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Flat,
    Synthetic,
    Exploding,
    Gaussian,
    FhExponential,
    FhTabulated,
    FhIntegral,
    LinearRational,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Flat,
        Family::Synthetic,
        Family::Exploding,
        Family::Gaussian,
        Family::FhExponential,
        Family::FhTabulated,
        Family::FhIntegral,
        Family::LinearRational,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Flat => "flat",
            Family::Synthetic => "synthetic",
            Family::Exploding => "exploding",
            Family::Gaussian => "gaussian",
            Family::FhExponential => "fh_exponential",
            Family::FhTabulated => "fh_tabulated",
            Family::FhIntegral => "fh_integral",
            Family::LinearRational => "linear_rational",
        }
    }
}

/// A curve drawn from one of the families.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyCurve {
    Flat(FlatCurve),
    Synthetic(SyntheticCurve),
    Exploding(ExplodingCurve),
    Gaussian(GaussianCurve),
    FhRational(FhRationalCurve),
    FhIntegral(FhIntegralCurve),
    LinearRational(LinearRationalCurve),
}

impl Curve for AnyCurve {
    fn price(&self, t: f64, maturity: f64) -> Result<f64> {
        match self {
            AnyCurve::Flat(c) => c.price(t, maturity),
            AnyCurve::Synthetic(c) => c.price(t, maturity),
            AnyCurve::Exploding(c) => c.price(t, maturity),
            AnyCurve::Gaussian(c) => c.price(t, maturity),
            AnyCurve::FhRational(c) => c.price(t, maturity),
            AnyCurve::FhIntegral(c) => c.price(t, maturity),
            AnyCurve::LinearRational(c) => c.price(t, maturity),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusCurve {
    pub family: Family,
    /// `key=value` pairs separated by `;`.
    pub params: String,
    /// Time at which the curve is classified.
    pub t: f64,
    pub curve: AnyCurve,
}

fn lognormal<R: Rng>(rng: &mut R, sigma: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    (sigma * z - 0.5 * sigma * sigma).exp()
}

/// Decreasing table on knots `0, 10, 30, 60` continued at `tail_rate`.
fn random_table<R: Rng>(rng: &mut R, tail_rate: f64) -> Result<DecaySpec> {
    let knots = vec![0.0, 10.0, 30.0, 60.0];
    let mut values = vec![1.0];
    for w in knots.windows(2) {
        let r: f64 = rng.random_range(0.005..0.1);
        let prev = values[values.len() - 1];
        values.push(prev * (-r * (w[1] - w[0])).exp());
    }
    DecaySpec::tabulated(knots, values, tail_rate)
}

/// One parameter draw from `family`. Linear-rational draws are repeated until
/// `α` lies in `[0.015, 0.25]`.
pub fn draw<R: Rng>(family: Family, rng: &mut R) -> Result<CorpusCurve> {
    let (params, t, curve) = match family {
        Family::Flat => {
            let r = rng.random_range(0.015..0.15);
            (format!("r={r}"), 0.0, AnyCurve::Flat(FlatCurve::new(r)?))
        }
        Family::Synthetic => {
            let a = rng.random_range(0.05..0.95);
            let l = rng.random_range(0.1..2.0);
            (format!("a={a};lambda={l}"), 0.0, AnyCurve::Synthetic(SyntheticCurve::new(a, l)?))
        }
        Family::Exploding => {
            let l = rng.random_range(0.01..0.4);
            (format!("lambda={l}"), 0.0, AnyCurve::Exploding(ExplodingCurve::new(l)?))
        }
        Family::Gaussian => {
            let c = rng.random_range(3e-5..2e-4);
            (format!("c={c}"), 0.0, AnyCurve::Gaussian(GaussianCurve::new(c)?))
        }
        Family::FhExponential => {
            let alpha = rng.random_range(0.015..0.08);
            let beta = alpha + rng.random_range(0.02..0.1);
            let m = lognormal(rng, 0.5);
            let model = FhRationalModel::exponential(alpha, beta, 0.5)?;
            (format!("alpha={alpha};beta={beta};m={m}"), 0.0, AnyCurve::FhRational(model.curve(m)?))
        }
        Family::FhTabulated => {
            let alpha = rng.random_range(0.015..0.08);
            let beta = alpha + rng.random_range(0.02..0.1);
            let f = random_table(rng, alpha)?;
            let g = random_table(rng, beta)?;
            let m = lognormal(rng, 0.5);
            let model = FhRationalModel::new(f, g, 0.5)?;
            (format!("tail_f={alpha};tail_g={beta};m={m}"), 0.0, AnyCurve::FhRational(model.curve(m)?))
        }
        Family::FhIntegral => {
            let alpha = rng.random_range(0.015..0.08);
            let sigma0 = rng.random_range(0.0..0.3);
            let kappa = rng.random_range(0.05..0.5);
            // Classified at t = 1 with W_1 ~ N(0, 1).
            let w: f64 = rng.sample(StandardNormal);
            let model = FhIntegralModel::exponential(alpha, VolSpec::Decaying { sigma0, kappa })?;
            (
                format!("alpha={alpha};sigma0={sigma0};kappa={kappa};w1={w}"),
                1.0,
                AnyCurve::FhIntegral(model.curve(w)?),
            )
        }
        Family::LinearRational => loop {
            let d = if rng.random_bool(0.5) { 1 } else { 2 };
            let k = rng.random_range(0.1..0.5);
            let phi = rng.random_range(0.5..2.0);
            let theta: Vec<f64> = (0..d).map(|_| rng.random_range(0.3..0.7)).collect();
            let psi: Vec<f64> = (0..d).map(|_| rng.random_range(0.5..2.0)).collect();
            let x: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..1.0)).collect();
            let model = LinearRationalModel::new(k, theta.clone(), phi, psi.clone(), vec![0.0; d], vec![1.0; d], 0.05)?;
            if (0.015..=0.25).contains(&model.alpha()) {
                let params = format!("k={k};phi={phi};theta={theta:?};psi={psi:?};x={x:?};alpha={}", model.alpha());
                break (params, 0.0, AnyCurve::LinearRational(model.curve(&x)?));
            }
        },
    };
    Ok(CorpusCurve { family, params, t, curve })
}

/// `per_family` draws from every family; family `i` uses stream `i` of `seed`.
pub fn corpus(seed: u64, per_family: usize) -> Result<Vec<CorpusCurve>> {
    let mut out = Vec::with_capacity(per_family * Family::ALL.len());
    for (i, family) in Family::ALL.into_iter().enumerate() {
        let mut rng = path_rng(seed, i as u64);
        for _ in 0..per_family {
            out.push(draw(family, &mut rng)?);
        }
    }
    Ok(out)
}
