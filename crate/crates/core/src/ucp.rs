//! Estimators for uniform-on-compacts convergence in probability.
//!
//! Running suprema and infima are taken over the grid points of the
//! ensembles, which bounds the continuous-time quantities from below.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{domain, Result};
use crate::models::flesaker_hughston::FhRationalModel;
use crate::models::simulation::{PathEnsemble, GRID_MATCH_TOL};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959963984540054;

/// Estimated probability of a path event at sequence index `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UcpEstimate {
    pub n: usize,
    /// `ε` for convergence, `M` for divergence.
    pub threshold: f64,
    pub t_horizon: f64,
    pub probability: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub half_width: f64,
    pub n_samples: usize,
    pub hits: usize,
}

impl UcpEstimate {
    pub fn from_counts(n: usize, threshold: f64, t_horizon: f64, hits: usize, n_samples: usize) -> Self {
        let (ci_low, ci_high) = wilson_interval(hits, n_samples, Z_95);
        UcpEstimate {
            n,
            threshold,
            t_horizon,
            probability: hits as f64 / n_samples as f64,
            ci_low,
            ci_high,
            half_width: 0.5 * (ci_high - ci_low),
            n_samples,
            hits,
        }
    }
}

/// Wilson score interval for `hits` successes out of `n`.
pub fn wilson_interval(hits: usize, n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = hits as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let spread = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((centre - spread).max(0.0), (centre + spread).min(1.0))
}

/// The limit a sequence is compared against.
#[derive(Clone, Copy)]
pub enum UcpTarget<'a> {
    /// Paired path by path with the sequence.
    Ensemble(&'a PathEnsemble),
    /// `value(path, t)`.
    Function(&'a dyn Fn(usize, f64) -> f64),
}

fn horizon_len(e: &PathEnsemble, t_horizon: f64) -> Result<usize> {
    if !(t_horizon >= e.times()[0]) {
        return Err(domain(format!("horizon {t_horizon} precedes the grid start {}", e.times()[0])));
    }
    Ok(e.times().partition_point(|&s| s <= t_horizon + GRID_MATCH_TOL))
}

fn check_scalar(e: &PathEnsemble) -> Result<()> {
    if e.dim() != 1 {
        return Err(domain(format!("ucp estimators need scalar paths, got dimension {}", e.dim())));
    }
    Ok(())
}

fn check_pair(a: &PathEnsemble, b: &PathEnsemble) -> Result<()> {
    check_scalar(a)?;
    check_scalar(b)?;
    if a.n_paths() != b.n_paths() {
        return Err(domain(format!("path counts differ: {} vs {}", a.n_paths(), b.n_paths())));
    }
    let same = a.times().len() == b.times().len()
        && a.times().iter().zip(b.times()).all(|(x, y)| (x - y).abs() <= GRID_MATCH_TOL);
    if !same {
        return Err(domain("ensembles are on different time grids"));
    }
    Ok(())
}

/// Per-path `sup_{s<=t} |X^n_s - X_s|` over grid points.
pub fn sup_deviations(seq: &PathEnsemble, target: UcpTarget<'_>, t_horizon: f64) -> Result<Vec<f64>> {
    check_scalar(seq)?;
    if let UcpTarget::Ensemble(limit) = target {
        check_pair(seq, limit)?;
    }
    let len = horizon_len(seq, t_horizon)?;
    let times = seq.times();
    Ok((0..seq.n_paths())
        .map(|p| {
            let xs = seq.path(p);
            (0..len)
                .map(|j| {
                    let limit = match target {
                        UcpTarget::Ensemble(e) => e.path(p)[j],
                        UcpTarget::Function(f) => f(p, times[j]),
                    };
                    (xs[j] - limit).abs()
                })
                .fold(0.0, |acc: f64, d| if d.is_nan() { f64::INFINITY } else { acc.max(d) })
        })
        .collect())
}

/// Fraction of paths with `sup_{s<=t} |X^n_s - X_s| > ε`.
pub fn ucp_convergence_prob(
    seq: &PathEnsemble,
    target: UcpTarget<'_>,
    epsilon: f64,
    t_horizon: f64,
    n: usize,
) -> Result<UcpEstimate> {
    if !(epsilon > 0.0) {
        return Err(domain("epsilon must be > 0"));
    }
    let sups = sup_deviations(seq, target, t_horizon)?;
    let hits = sups.iter().filter(|&&d| d > epsilon).count();
    Ok(UcpEstimate::from_counts(n, epsilon, t_horizon, hits, sups.len()))
}

/// Fraction of paths with `inf_{s<=t} X^n_s > M`.
pub fn ucp_divergence_prob(seq: &PathEnsemble, threshold: f64, t_horizon: f64, n: usize) -> Result<UcpEstimate> {
    check_scalar(seq)?;
    let len = horizon_len(seq, t_horizon)?;
    let hits = (0..seq.n_paths())
        .filter(|&p| seq.path(p)[..len].iter().all(|&x| x > threshold))
        .count();
    Ok(UcpEstimate::from_counts(n, threshold, t_horizon, hits, seq.n_paths()))
}

/// Least-squares non-increasing fit (pool adjacent violators).
pub fn isotonic_non_increasing(values: &[f64]) -> Vec<f64> {
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(values.len());
    for &v in values {
        blocks.push((v, 1));
        while blocks.len() >= 2 {
            let (b, nb) = blocks[blocks.len() - 1];
            let (a, na) = blocks[blocks.len() - 2];
            if a >= b {
                break;
            }
            blocks.pop();
            let total = na + nb;
            *blocks.last_mut().unwrap() = ((a * na as f64 + b * nb as f64) / total as f64, total);
        }
    }
    blocks.into_iter().flat_map(|(v, k)| core::iter::repeat_n(v, k)).collect()
}

/// Whether the non-increasing fit stays inside every estimate's interval.
pub fn non_increasing_within_ci(estimates: &[UcpEstimate]) -> bool {
    let probs: Vec<f64> = estimates.iter().map(|e| e.probability).collect();
    let fit = isotonic_non_increasing(&probs);
    estimates.iter().zip(&fit).all(|(e, f)| e.ci_low - 1e-15 <= *f && *f <= e.ci_high + 1e-15)
}

/// Prefix sums `S_n(s) = δ (F_n + G_n M_s) / (f(s) + g(s) M_s)` on a uniform
/// tenor `T_i = start + iδ`, for each `n` in `ns` and the limit `S∞`.
///
/// `driver` holds paths of `M` on times `s <= T_1`.
pub fn fh_annuity_ensembles(
    model: &FhRationalModel,
    start: f64,
    delta: f64,
    driver: &PathEnsemble,
    ns: &[usize],
) -> Result<(Vec<PathEnsemble>, PathEnsemble)> {
    check_scalar(driver)?;
    if !(delta > 0.0) {
        return Err(domain("delta must be > 0"));
    }
    let last_time = driver.times()[driver.times().len() - 1];
    if last_time > start + delta + GRID_MATCH_TOL {
        return Err(domain(format!("driver grid ends at {last_time}, after T_1 = {}", start + delta)));
    }
    let (f, g) = (model.f(), model.g());
    let f_inf = f.grid_tail(start, delta, 0);
    let g_inf = g.grid_tail(start, delta, 0);
    let limit = driver.map(|s, m| Ok(delta * (f_inf + g_inf * m[0]) / (f.value(s) + g.value(s) * m[0])))?;
    let mut seqs = Vec::with_capacity(ns.len());
    for &n in ns {
        let f_n = f_inf - f.grid_tail(start, delta, n);
        let g_n = g_inf - g.grid_tail(start, delta, n);
        seqs.push(driver.map(|s, m| Ok(delta * (f_n + g_n * m[0]) / (f.value(s) + g.value(s) * m[0])))?);
    }
    Ok((seqs, limit))
}

/// Smallest `n` with `δ max(F_tail(n)/f(t_h), G_tail(n)/g(t_h)) <= ε`.
///
/// The tail `S∞ - S_n` is a weighted mean of `δ F_tail/f(s)` and
/// `δ G_tail/g(s)`, and `f`, `g` are non-increasing, so the bound holds on
/// every path and every `s <= t_h`.
pub fn fh_predicted_n_star(model: &FhRationalModel, start: f64, delta: f64, t_horizon: f64, epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0 && delta > 0.0) {
        return Err(domain("epsilon and delta must be > 0"));
    }
    let (fh, gh) = (model.f().value(t_horizon), model.g().value(t_horizon));
    let bound = |n: usize| {
        delta * (model.f().grid_tail(start, delta, n) / fh).max(model.g().grid_tail(start, delta, n) / gh)
    };
    let mut hi = 1usize;
    while bound(hi) > epsilon {
        hi *= 2;
        if hi > 1 << 40 {
            return Err(domain("tail bound does not reach epsilon"));
        }
    }
    let mut lo = 0usize;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if bound(mid) <= epsilon {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(if bound(lo) <= epsilon { lo } else { hi })
}

/// One row of [`continuity_harness`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarnessRow {
    pub n: usize,
    pub epsilon: f64,
    pub x: UcpEstimate,
    pub y: UcpEstimate,
    pub output: UcpEstimate,
    pub mean_sup_x: f64,
    pub mean_sup_y: f64,
    pub mean_sup_output: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarnessReport {
    pub rows: Vec<HarnessRow>,
    /// Output probabilities are non-increasing within their intervals
    /// wherever both input probabilities are.
    pub consistent: bool,
}

fn zip_map<F: Fn(f64, f64) -> f64>(f: &F, x: &PathEnsemble, y: &PathEnsemble) -> Result<PathEnsemble> {
    check_pair(x, y)?;
    let values = x.values().iter().zip(y.values()).map(|(a, b)| f(*a, *b)).collect();
    PathEnsemble::from_parts(x.times().to_vec(), x.n_paths(), 1, values, x.seed())
}

fn mean(xs: &[f64]) -> f64 {
    crate::numeric::pairwise_sum(xs) / xs.len() as f64
}

/// Compares `f(X^n, Y^n)` with `f(X, Y)` for each `n`, next to the input
/// deviations. `epsilons` holds one threshold per `n`, or a single one.
#[allow(clippy::too_many_arguments)]
pub fn continuity_harness<F: Fn(f64, f64) -> f64>(
    f: F,
    seq_x: &[PathEnsemble],
    seq_y: &[PathEnsemble],
    ns: &[usize],
    limit_x: &PathEnsemble,
    limit_y: &PathEnsemble,
    epsilons: &[f64],
    t_horizon: f64,
) -> Result<HarnessReport> {
    let m = ns.len();
    if seq_x.len() != m || seq_y.len() != m || !(epsilons.len() == m || epsilons.len() == 1) {
        return Err(domain("sequences, indices and epsilon schedule need matching lengths"));
    }
    let limit_out = zip_map(&f, limit_x, limit_y)?;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let eps = if epsilons.len() == 1 { epsilons[0] } else { epsilons[i] };
        let out = zip_map(&f, &seq_x[i], &seq_y[i])?;
        let sx = sup_deviations(&seq_x[i], UcpTarget::Ensemble(limit_x), t_horizon)?;
        let sy = sup_deviations(&seq_y[i], UcpTarget::Ensemble(limit_y), t_horizon)?;
        let so = sup_deviations(&out, UcpTarget::Ensemble(&limit_out), t_horizon)?;
        let count = |v: &[f64]| v.iter().filter(|&&d| d > eps).count();
        let paths = sx.len();
        rows.push(HarnessRow {
            n: ns[i],
            epsilon: eps,
            x: UcpEstimate::from_counts(ns[i], eps, t_horizon, count(&sx), paths),
            y: UcpEstimate::from_counts(ns[i], eps, t_horizon, count(&sy), paths),
            output: UcpEstimate::from_counts(ns[i], eps, t_horizon, count(&so), paths),
            mean_sup_x: mean(&sx),
            mean_sup_y: mean(&sy),
            mean_sup_output: mean(&so),
        });
    }
    let inputs_fall = |a: &HarnessRow, b: &HarnessRow| {
        b.x.probability <= a.x.probability && b.y.probability <= a.y.probability
    };
    let mut consistent = true;
    let mut start = 0;
    for i in 1..=m {
        if i == m || !inputs_fall(&rows[i - 1], &rows[i]) {
            let run: Vec<UcpEstimate> = rows[start..i].iter().map(|r| r.output).collect();
            consistent &= non_increasing_within_ci(&run);
            start = i;
        }
    }
    Ok(HarnessReport { rows, consistent })
}

/// Paths that equal `value` everywhere.
pub fn constant_paths(times: &[f64], n_paths: usize, value: f64) -> Result<PathEnsemble> {
    PathEnsemble::from_parts(times.to_vec(), n_paths, 1, vec![value; n_paths * times.len()], 0)
}
