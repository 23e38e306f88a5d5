//! Times in years, tenor grids and piecewise-constant short-rate paths.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{domain, Result};

/// A point in time measured in years. Always finite and non-negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Time(f64);

impl Time {
    pub const ZERO: Time = Time(0.0);

    pub fn new(years: f64) -> Result<Self> {
        if years.is_finite() && years >= 0.0 {
            Ok(Time(years))
        } else {
            Err(domain(format!("time must be finite and >= 0, got {years}")))
        }
    }

    pub fn years(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Time {
    type Error = crate::Error;

    fn try_from(years: f64) -> Result<Self> {
        Time::new(years)
    }
}

impl From<Time> for f64 {
    fn from(t: Time) -> f64 {
        t.0
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Dates {
    Uniform { delta: f64 },
    Explicit(Vec<f64>),
}

/// Exchange dates `T_0 < T_1 < T_2 < ...` with accruals `δ_i = T_i - T_{i-1}`.
///
/// Every accrual lies strictly inside the spacing bounds `(c, C)`. A uniform
/// grid is unbounded (`T_i = start + i·delta` for every `i`); an explicit grid
/// ends at its last date.
#[derive(Debug, Clone, PartialEq)]
pub struct TenorGrid {
    start: Time,
    dates: Dates,
    min_spacing: f64,
    max_spacing: f64,
}

impl TenorGrid {
    /// Uniform grid anchored at `start`. Spacing bounds are `(δ/2, 2δ)`.
    pub fn uniform(start: f64, delta: f64) -> Result<Self> {
        let start = Time::new(start)?;
        if !(delta.is_finite() && delta > 0.0) {
            return Err(domain(format!("grid spacing must be > 0, got {delta}")));
        }
        Ok(TenorGrid {
            start,
            dates: Dates::Uniform { delta },
            min_spacing: 0.5 * delta,
            max_spacing: 2.0 * delta,
        })
    }

    /// Explicit dates `T_1 < ... < T_m` after `start = T_0`, each accrual
    /// strictly between `min_spacing` and `max_spacing`.
    pub fn explicit(
        start: f64,
        dates: Vec<f64>,
        min_spacing: f64,
        max_spacing: f64,
    ) -> Result<Self> {
        let start = Time::new(start)?;
        if !(min_spacing > 0.0 && min_spacing < max_spacing && max_spacing.is_finite()) {
            return Err(domain(format!(
                "spacing bounds need 0 < c < C, got c={min_spacing}, C={max_spacing}"
            )));
        }
        if dates.is_empty() {
            return Err(domain("explicit tenor grid needs at least one date"));
        }
        let mut prev = start.years();
        for (i, &d) in dates.iter().enumerate() {
            let gap = d - prev;
            if !(gap > min_spacing && gap < max_spacing) {
                return Err(domain(format!(
                    "accrual {} = {gap} outside ({min_spacing}, {max_spacing})",
                    i + 1
                )));
            }
            prev = d;
        }
        Ok(TenorGrid {
            start,
            dates: Dates::Explicit(dates),
            min_spacing,
            max_spacing,
        })
    }

    /// `T_0`.
    pub fn start(&self) -> f64 {
        self.start.years()
    }

    /// Spacing for uniform grids.
    pub fn uniform_delta(&self) -> Option<f64> {
        match self.dates {
            Dates::Uniform { delta } => Some(delta),
            Dates::Explicit(_) => None,
        }
    }

    /// Number of exchange dates after `T_0`; `None` when unbounded.
    pub fn len(&self) -> Option<usize> {
        match &self.dates {
            Dates::Uniform { .. } => None,
            Dates::Explicit(d) => Some(d.len()),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn spacing_bounds(&self) -> (f64, f64) {
        (self.min_spacing, self.max_spacing)
    }

    /// `T_i`; `T_0` is the start. `None` past the end of an explicit grid.
    pub fn date(&self, i: usize) -> Option<f64> {
        if i == 0 {
            return Some(self.start());
        }
        match &self.dates {
            Dates::Uniform { delta } => Some(self.start() + i as f64 * delta),
            Dates::Explicit(d) => d.get(i - 1).copied(),
        }
    }

    /// `δ_i = T_i - T_{i-1}` for `i >= 1`.
    pub fn accrual(&self, i: usize) -> Option<f64> {
        if i == 0 {
            return None;
        }
        match &self.dates {
            Dates::Uniform { delta } => {
                self.date(i)?;
                Some(*delta)
            }
            Dates::Explicit(_) => Some(self.date(i)? - self.date(i - 1)?),
        }
    }

    /// Same grid shape starting at `start`; explicit grids shift every date.
    pub fn reanchored(&self, start: f64) -> Result<Self> {
        match &self.dates {
            Dates::Uniform { delta } => TenorGrid::uniform(start, *delta),
            Dates::Explicit(d) => {
                let shift = start - self.start();
                TenorGrid::explicit(
                    start,
                    d.iter().map(|x| x + shift).collect(),
                    self.min_spacing,
                    self.max_spacing,
                )
            }
        }
    }
}

/// Instantaneous short rate, piecewise constant on the intervals of `times`.
///
/// `values[j]` applies on `(times[j], times[j+1]]` (left-continuous), and the
/// first value also at `times[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortRatePath {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl ShortRatePath {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() < 2 || values.len() + 1 != times.len() {
            return Err(domain(format!(
                "short-rate path needs n+1 times for n values, got {} times and {} values",
                times.len(),
                values.len()
            )));
        }
        if times.iter().any(|t| !t.is_finite() || *t < 0.0)
            || times.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(domain("short-rate path times must be finite, >= 0 and strictly increasing"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(domain("short-rate values must be finite"));
        }
        Ok(ShortRatePath { times, values })
    }

    /// Constant rate on `[a, b]`.
    pub fn constant(rate: f64, a: f64, b: f64) -> Result<Self> {
        Self::new(alloc::vec![a, b], alloc::vec![rate])
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn covers(&self, a: f64, b: f64) -> bool {
        a >= self.times[0] && b <= self.times[self.times.len() - 1]
    }

    pub fn rate_at(&self, t: f64) -> Result<f64> {
        if !self.covers(t, t) {
            return Err(domain(format!("t={t} outside the short-rate path")));
        }
        // First interval whose right end is >= t.
        let j = self.times[1..].partition_point(|&right| right < t);
        Ok(self.values[j.min(self.values.len() - 1)])
    }

    /// Exact `∫_a^b r_s ds` for the piecewise-constant path.
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        if !(a <= b) || !self.covers(a, b) {
            return Err(domain(format!(
                "[{a}, {b}] not covered by short-rate path on [{}, {}]",
                self.times[0],
                self.times[self.times.len() - 1]
            )));
        }
        let mut total = 0.0;
        for (j, &r) in self.values.iter().enumerate() {
            let lo = self.times[j].max(a);
            let hi = self.times[j + 1].min(b);
            if hi > lo {
                total += r * (hi - lo);
            }
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn time_rejects_negative_and_nan() {
        assert!(Time::new(-1e-9).is_err());
        assert!(Time::new(f64::NAN).is_err());
        assert!(Time::new(f64::INFINITY).is_err());
        assert_eq!(Time::new(2.5).unwrap().years(), 2.5);
    }

    #[test]
    fn uniform_grid_dates_and_accruals() {
        let g = TenorGrid::uniform(1.0, 0.5).unwrap();
        assert_eq!(g.date(0), Some(1.0));
        assert_eq!(g.date(4), Some(3.0));
        assert_eq!(g.accrual(7), Some(0.5));
        assert_eq!(g.len(), None);
        let (c, cap) = g.spacing_bounds();
        assert!(c < 0.5 && 0.5 < cap);
    }

    #[test]
    fn explicit_grid_enforces_spacing_bounds() {
        assert!(TenorGrid::explicit(0.0, vec![1.0, 2.0, 3.5], 0.5, 2.0).is_ok());
        assert!(TenorGrid::explicit(0.0, vec![1.0, 1.2], 0.5, 2.0).is_err());
        assert!(TenorGrid::explicit(0.0, vec![1.0, 4.0], 0.5, 2.0).is_err());
        assert!(TenorGrid::explicit(0.0, vec![1.0, 0.5], 0.1, 2.0).is_err());
        let g = TenorGrid::explicit(0.0, vec![1.0, 2.0, 3.5], 0.5, 2.0).unwrap();
        assert_eq!(g.accrual(3), Some(1.5));
        assert_eq!(g.date(4), None);
    }

    #[test]
    fn short_rate_integral_is_exact_on_pieces() {
        let p = ShortRatePath::new(vec![0.0, 0.5, 1.0], vec![0.02, 0.04]).unwrap();
        assert!((p.integral(0.0, 1.0).unwrap() - 0.03).abs() < 1e-16);
        assert!((p.integral(0.25, 0.75).unwrap() - 0.015).abs() < 1e-16);
        assert!(p.integral(0.0, 1.5).is_err());
    }

    #[test]
    fn short_rate_is_left_continuous() {
        let p = ShortRatePath::new(vec![0.0, 0.5, 1.0], vec![0.02, 0.04]).unwrap();
        assert_eq!(p.rate_at(0.0).unwrap(), 0.02);
        assert_eq!(p.rate_at(0.5).unwrap(), 0.02);
        assert_eq!(p.rate_at(0.5000001).unwrap(), 0.04);
        assert_eq!(p.rate_at(1.0).unwrap(), 0.04);
    }
}
