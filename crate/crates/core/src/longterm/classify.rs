use alloc::vec::Vec;


use super::{LimitEstimate, LongTermClass, LongTermConfig};

fn median(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let m = v.len();
    if m % 2 == 1 {
        v[m / 2]
    } else {
        0.5 * (v[m / 2 - 1] + v[m / 2])
    }
}

/// Classifies the tail of a ladder of values ordered by horizon.
///
/// * `PlusInfinity` when a value is `+∞`, or the last three values increase
///   and either the last is at least `slope_factor` times the ladder median,
///   or the increments exceed `class_tol` without shrinking.
/// * The mean of the last quartile (at least two points) when those values
///   agree within `class_tol`, classed by sign with a zero band of `class_tol`.
/// * `Undetermined` otherwise.
pub fn classify_ladder(values: &[f64], cfg: &LongTermConfig) -> LimitEstimate {
    let m = values.len();
    if m < 2 {
        return LimitEstimate::undetermined();
    }
    if values.iter().any(|v| v.is_nan() || *v == f64::NEG_INFINITY) {
        return LimitEstimate::undetermined();
    }
    if values.iter().any(|v| v.is_infinite()) {
        return LimitEstimate::plus_infinity();
    }
    let tol = cfg.class_tol;
    if m >= 3 {
        let (a, b, c) = (values[m - 3], values[m - 2], values[m - 1]);
        if a < b && b < c {
            let med = median(values);
            if c >= cfg.slope_factor * med.abs() && c > tol {
                return LimitEstimate::plus_infinity();
            }
            let (d1, d2) = (b - a, c - b);
            if d1 > tol && d2 >= d1 {
                return LimitEstimate::plus_infinity();
            }
        }
    }
    let q = 2.max(m.div_ceil(4));
    let tail = &values[m - q..];
    let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= tol {
        let mean = tail.iter().sum::<f64>() / q as f64;
        return LimitEstimate::new(Some(mean), LongTermClass::of_finite(mean, tol));
    }
    LimitEstimate::undetermined()
}
