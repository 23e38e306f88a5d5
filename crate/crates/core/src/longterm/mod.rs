//! Infinite annuity sums and long-maturity limits of rates on a curve.

mod classify;
mod closed_forms;
mod estimators;
mod truncation;

use alloc::vec;
use alloc::vec::Vec;

pub use classify::classify_ladder;
pub use closed_forms::{
    fh_exponential_closed_forms, lr_closed_forms, lr_closed_forms_explicit, FhClosedForms, LrClosedForms,
};
pub use estimators::{
    bond_sum_ratio_k, long_bond, long_term_simple, long_term_swap_rate, long_term_yield, KRatio,
};
pub use truncation::{sum_to_tolerance, SumGrowth, TruncatedSum};

/// Five-way classification of a limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LongTermClass {
    Zero,
    FinitePositive,
    FiniteNegative,
    PlusInfinity,
    Undetermined,
}

impl LongTermClass {
    pub const ALL: [LongTermClass; 5] = [
        LongTermClass::Zero,
        LongTermClass::FinitePositive,
        LongTermClass::FiniteNegative,
        LongTermClass::PlusInfinity,
        LongTermClass::Undetermined,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LongTermClass::Zero => "Zero",
            LongTermClass::FinitePositive => "FinitePositive",
            LongTermClass::FiniteNegative => "FiniteNegative",
            LongTermClass::PlusInfinity => "PlusInfinity",
            LongTermClass::Undetermined => "Undetermined",
        }
    }

    /// Class of a finite value given the zero band `class_tol`.
    pub fn of_finite(value: f64, class_tol: f64) -> Self {
        if value.abs() <= class_tol {
            LongTermClass::Zero
        } else if value > 0.0 {
            LongTermClass::FinitePositive
        } else {
            LongTermClass::FiniteNegative
        }
    }
}

impl core::fmt::Display for LongTermClass {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A limit value, when one is available, and its class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEstimate {
    pub value: Option<f64>,
    pub class: LongTermClass,
}

impl LimitEstimate {
    pub fn new(value: Option<f64>, class: LongTermClass) -> Self {
        LimitEstimate { value, class }
    }

    pub fn undetermined() -> Self {
        LimitEstimate { value: None, class: LongTermClass::Undetermined }
    }

    pub fn plus_infinity() -> Self {
        LimitEstimate { value: None, class: LongTermClass::PlusInfinity }
    }

    pub fn zero() -> Self {
        LimitEstimate { value: Some(0.0), class: LongTermClass::Zero }
    }
}

/// Truncation and classification settings.
#[derive(Debug, Clone, PartialEq)]
pub struct LongTermConfig {
    /// Tail bound that stops the annuity sum.
    pub sum_tol: f64,
    /// Maximum number of annuity terms.
    pub n_max: usize,
    /// Absolute agreement required over the last quartile of the ladder, and
    /// the half-width of the zero band.
    pub class_tol: f64,
    /// A still-increasing ladder whose last value exceeds this multiple of
    /// the ladder median is classified as divergent.
    pub slope_factor: f64,
    /// Largest change over the last five par rates for the sequence to count
    /// as settled.
    pub stabilization_tol: f64,
    /// Times to maturity `T - t` at which rates are evaluated.
    pub horizons: Vec<f64>,
}

impl Default for LongTermConfig {
    fn default() -> Self {
        LongTermConfig {
            sum_tol: 1e-10,
            n_max: 100_000,
            class_tol: 1e-4,
            slope_factor: 10.0,
            stabilization_tol: 1e-10,
            horizons: vec![50.0, 100.0, 200.0, 400.0, 800.0, 1600.0],
        }
    }
}

/// Long-term yield `ℓ`, long bond `P`, long-term swap rate `R` and long-term
/// simple rate `L` of one curve.
#[derive(Debug, Clone, PartialEq)]
pub struct LongTermReport {
    pub ell: LimitEstimate,
    pub long_bond: LimitEstimate,
    pub swap: LimitEstimate,
    pub simple: LimitEstimate,
    /// Longest time to maturity on the ladder.
    pub horizon_used: f64,
    /// The annuity sum behind `swap`.
    pub sum: TruncatedSum,
}

#[cfg(test)]
mod tests;
