//! Small numerical kernels shared by the models and estimators.

use alloc::format;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Pairwise (tree) summation. The result depends only on the order of `xs`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Sample mean and standard error of the mean.
pub fn mean_and_std_error(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = pairwise_sum(xs) / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    // Two-pass variance; squares are summed pairwise too.
    let mut sq = alloc::vec::Vec::with_capacity(n);
    sq.extend(xs.iter().map(|x| (x - mean) * (x - mean)));
    let var = pairwise_sum(&sq) / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, max_depth: u32) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut worst = 0.0;
    let value = simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth, &mut worst);
    if !value.is_finite() {
        return Err(Error::Numerical {
            what: format!("quadrature on [{a}, {b}] produced a non-finite value"),
            tolerance: tol,
            achieved: f64::INFINITY,
        });
    }
    if worst > tol {
        return Err(Error::Numerical {
            what: format!("adaptive Simpson on [{a}, {b}] hit depth {max_depth}"),
            tolerance: tol,
            achieved: worst,
        });
    }
    Ok(value)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    worst: &mut f64,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    if depth == 0 {
        let err = delta.abs() / 15.0;
        if err > *worst {
            *worst = err;
        }
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, worst)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, worst)
}
