//! Experiment configuration: one JSON document, see
//! `schema/experiment.schema.json`. Unknown keys are rejected at every level.

use std::path::{Path, PathBuf};

use longrate_core::models::{DecaySpec, FhIntegralModel, FhRationalModel, LinearRationalModel, VolSpec};
use longrate_core::{
    Curve, ExplodingCurve, FlatCurve, GaussianCurve, LongTermConfig, PowerCurve, SyntheticCurve, TenorGrid,
};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::RunError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Required by every command except `regimes` and `arbitrage`.
    pub model: Option<ModelConfig>,
    /// Valuation time.
    #[serde(default)]
    pub t: f64,
    /// Maturity for `price`.
    pub maturity: Option<f64>,
    #[serde(default)]
    pub grid: GridConfig,
    /// Times to maturity of the long-term ladder.
    pub horizons: Option<Vec<f64>>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub mc: McConfig,
    #[serde(default)]
    pub ucp: UcpConfig,
    #[serde(default)]
    pub regimes: RegimesConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ModelConfig {
    Flat(FlatParams),
    Synthetic(SyntheticParams),
    Exploding(ExplodingParams),
    Gaussian(GaussianParams),
    Power(PowerParams),
    FhRational(FhRationalParams),
    FhIntegral(FhIntegralParams),
    LinearRational(LinearRationalParams),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlatParams {
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticParams {
    pub floor: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplodingParams {
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianParams {
    pub curvature: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerParams {
    pub base: f64,
    #[serde(default = "one")]
    pub unit: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FhRationalParams {
    pub f: DecayConfig,
    pub g: DecayConfig,
    /// Volatility of the GBM driver `M`.
    #[serde(default)]
    pub sigma: f64,
    /// State `M_t`. Monte Carlo paths start from this value at time 0.
    #[serde(default = "one")]
    pub m: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DecayConfig {
    Exponential { rate: f64 },
    Tabulated { knots: Vec<f64>, values: Vec<f64>, tail_rate: f64 },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FhIntegralParams {
    /// Exponential mixture `φ(s) = Σ w_j α_j e^{-α_j s}`.
    pub weights: Vec<MixtureTerm>,
    pub vol: VolConfig,
    /// Records that the truncated kernels are assumed to converge.
    #[serde(default)]
    pub q_convergence_assumed: bool,
    /// Brownian state `W_t`.
    #[serde(default)]
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureTerm {
    pub weight: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum VolConfig {
    Constant { sigma: f64 },
    Decaying { sigma0: f64, kappa: f64 },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearRationalParams {
    pub k: f64,
    pub theta: Vec<f64>,
    pub phi: f64,
    pub psi: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    #[serde(default)]
    pub vol: f64,
    /// State `X_t`; defaults to `theta`.
    pub x: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// Uniform accrual, used when `dates` is absent.
    #[serde(default = "one")]
    pub delta: f64,
    /// Rows of the `rates` ladder on a uniform grid.
    #[serde(default = "default_grid_n")]
    pub n_max: usize,
    /// Explicit dates `T_1 < T_2 < ...` after `T_0 = t`.
    pub dates: Option<Vec<f64>>,
    pub min_spacing: Option<f64>,
    pub max_spacing: Option<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { delta: 1.0, n_max: default_grid_n(), dates: None, min_spacing: None, max_spacing: None }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub sum_tol: f64,
    pub sum_n_max: usize,
    pub class_tol: f64,
    pub slope_factor: f64,
    pub stabilization_tol: f64,
    pub fd_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let d = LongTermConfig::default();
        Tolerances {
            sum_tol: d.sum_tol,
            sum_n_max: d.n_max,
            class_tol: d.class_tol,
            slope_factor: d.slope_factor,
            stabilization_tol: d.stabilization_tol,
            fd_step: longrate_core::DEFAULT_FD_STEP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct McConfig {
    pub n_paths: usize,
    pub seed: u64,
    pub time_step: f64,
    /// Bond maturity checked by `mc-check`.
    pub maturity: f64,
    /// Exchanges in the floating-leg check.
    pub n_exchanges: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig { n_paths: 10_000, seed: 0, time_step: 0.02, maturity: 1.0, n_exchanges: 4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UcpMode {
    Convergence,
    Divergence,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct UcpConfig {
    pub mode: UcpMode,
    pub n_paths: usize,
    pub seed: u64,
    pub time_step: f64,
    pub t_horizon: f64,
    pub epsilon: f64,
    /// Level `M` for divergence mode.
    pub threshold: f64,
    /// Indices `n`; a default ladder is used when absent.
    pub ns: Option<Vec<usize>>,
}

impl Default for UcpConfig {
    fn default() -> Self {
        UcpConfig {
            mode: UcpMode::Convergence,
            n_paths: 10_000,
            seed: 0,
            time_step: 0.02,
            t_horizon: 1.0,
            epsilon: 1e-3,
            threshold: 100.0,
            ns: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RegimesConfig {
    pub seed: u64,
    pub per_family: usize,
}

impl Default for RegimesConfig {
    fn default() -> Self {
        RegimesConfig { seed: 0, per_family: 50 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// CSV destination; `--out` takes precedence.
    pub path: Option<PathBuf>,
}

fn one() -> f64 {
    1.0
}

fn default_grid_n() -> usize {
    200
}

/// A parsed config together with the SHA-256 of its source text.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub sha256: String,
}

impl LoadedConfig {
    pub fn from_path(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_str(&text)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn from_str(text: &str) -> Result<Self, RunError> {
        let config: ExperimentConfig = serde_json::from_str(text).map_err(|e| RunError::Config(e.to_string()))?;
        config.validate()?;
        Ok(LoadedConfig { config, sha256: sha256_hex(text.as_bytes()) })
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn field(name: &str, ok: bool, msg: &str) -> Result<(), RunError> {
    if ok {
        Ok(())
    } else {
        Err(RunError::Config(format!("{name}: {msg}")))
    }
}

fn finite(name: &str, x: f64) -> Result<(), RunError> {
    field(name, x.is_finite(), "must be a finite number")
}

fn positive(name: &str, x: f64) -> Result<(), RunError> {
    field(name, x.is_finite() && x > 0.0, "must be finite and > 0")
}

fn model_err(e: longrate_core::Error) -> RunError {
    RunError::Config(format!("model: {e}"))
}

impl ExperimentConfig {
    /// Range checks that serde cannot express, plus a trial build of the
    /// model and grid so parameter errors surface before any computation.
    pub fn validate(&self) -> Result<(), RunError> {
        field("t", self.t.is_finite() && self.t >= 0.0, "must be finite and >= 0")?;
        if let Some(m) = self.maturity {
            field("maturity", m.is_finite() && m >= self.t, "must be finite and >= t")?;
        }
        positive("grid.delta", self.grid.delta)?;
        field("grid.n_max", self.grid.n_max >= 1, "must be >= 1")?;
        if let Some(dates) = &self.grid.dates {
            field("grid.dates", !dates.is_empty(), "must not be empty")?;
            field("grid.min_spacing", self.grid.min_spacing.is_some(), "required with grid.dates")?;
            field("grid.max_spacing", self.grid.max_spacing.is_some(), "required with grid.dates")?;
        }
        self.tenor_grid().map_err(|e| RunError::Config(format!("grid: {e}")))?;
        if let Some(h) = &self.horizons {
            field(
                "horizons",
                h.len() >= 2 && h.iter().all(|x| x.is_finite() && *x > 0.0) && h.windows(2).all(|w| w[0] < w[1]),
                "must hold at least two increasing positive times",
            )?;
        }
        let tol = &self.tolerances;
        positive("tolerances.sum_tol", tol.sum_tol)?;
        field("tolerances.sum_n_max", tol.sum_n_max >= 2, "must be >= 2")?;
        positive("tolerances.class_tol", tol.class_tol)?;
        field("tolerances.slope_factor", tol.slope_factor.is_finite() && tol.slope_factor > 1.0, "must be > 1")?;
        positive("tolerances.stabilization_tol", tol.stabilization_tol)?;
        positive("tolerances.fd_step", tol.fd_step)?;
        field("mc.n_paths", self.mc.n_paths >= 2, "must be >= 2")?;
        positive("mc.time_step", self.mc.time_step)?;
        positive("mc.maturity", self.mc.maturity)?;
        field("mc.n_exchanges", self.mc.n_exchanges >= 1, "must be >= 1")?;
        field("ucp.n_paths", self.ucp.n_paths >= 1, "must be >= 1")?;
        positive("ucp.time_step", self.ucp.time_step)?;
        positive("ucp.t_horizon", self.ucp.t_horizon)?;
        positive("ucp.epsilon", self.ucp.epsilon)?;
        finite("ucp.threshold", self.ucp.threshold)?;
        if let Some(ns) = &self.ucp.ns {
            field("ucp.ns", !ns.is_empty() && ns.iter().all(|&n| n >= 1), "must hold indices >= 1")?;
        }
        field("regimes.per_family", self.regimes.per_family >= 1, "must be >= 1")?;
        if let Some(model) = &self.model {
            model.build().map_err(model_err)?;
        }
        Ok(())
    }

    pub fn model(&self) -> Result<&ModelConfig, RunError> {
        self.model.as_ref().ok_or_else(|| RunError::Config("model: required by this command".into()))
    }

    /// Tenor grid anchored at `t`.
    pub fn tenor_grid(&self) -> longrate_core::Result<TenorGrid> {
        match &self.grid.dates {
            Some(dates) => TenorGrid::explicit(
                self.t,
                dates.clone(),
                self.grid.min_spacing.unwrap_or(f64::NAN),
                self.grid.max_spacing.unwrap_or(f64::NAN),
            ),
            None => TenorGrid::uniform(self.t, self.grid.delta),
        }
    }

    /// Number of grid dates used by ladder outputs.
    pub fn grid_len(&self) -> usize {
        self.grid.dates.as_ref().map_or(self.grid.n_max, Vec::len)
    }

    pub fn long_term(&self) -> LongTermConfig {
        let tol = &self.tolerances;
        let mut cfg = LongTermConfig {
            sum_tol: tol.sum_tol,
            n_max: tol.sum_n_max,
            class_tol: tol.class_tol,
            slope_factor: tol.slope_factor,
            stabilization_tol: tol.stabilization_tol,
            ..LongTermConfig::default()
        };
        if let Some(h) = &self.horizons {
            cfg.horizons = h.clone();
        }
        cfg
    }
}

impl DecayConfig {
    pub fn build(&self) -> longrate_core::Result<DecaySpec> {
        match self {
            DecayConfig::Exponential { rate } => DecaySpec::exponential(*rate),
            DecayConfig::Tabulated { knots, values, tail_rate } => {
                DecaySpec::tabulated(knots.clone(), values.clone(), *tail_rate)
            }
        }
    }
}

impl VolConfig {
    pub fn build(&self) -> VolSpec {
        match *self {
            VolConfig::Constant { sigma } => VolSpec::Constant(sigma),
            VolConfig::Decaying { sigma0, kappa } => VolSpec::Decaying { sigma0, kappa },
        }
    }
}

/// A model built from its config block.
#[derive(Debug, Clone)]
pub enum BuiltModel {
    Flat(FlatCurve),
    Synthetic(SyntheticCurve),
    Exploding(ExplodingCurve),
    Gaussian(GaussianCurve),
    Power(PowerCurve),
    FhRational { model: FhRationalModel, m: f64 },
    FhIntegral { model: FhIntegralModel, w: f64 },
    LinearRational { model: LinearRationalModel, x: Vec<f64> },
}

impl ModelConfig {
    pub fn family(&self) -> &'static str {
        match self {
            ModelConfig::Flat(_) => "flat",
            ModelConfig::Synthetic(_) => "synthetic",
            ModelConfig::Exploding(_) => "exploding",
            ModelConfig::Gaussian(_) => "gaussian",
            ModelConfig::Power(_) => "power",
            ModelConfig::FhRational(_) => "fh_rational",
            ModelConfig::FhIntegral(_) => "fh_integral",
            ModelConfig::LinearRational(_) => "linear_rational",
        }
    }

    pub fn build(&self) -> longrate_core::Result<BuiltModel> {
        Ok(match self {
            ModelConfig::Flat(p) => BuiltModel::Flat(FlatCurve::new(p.rate)?),
            ModelConfig::Synthetic(p) => BuiltModel::Synthetic(SyntheticCurve::new(p.floor, p.lambda)?),
            ModelConfig::Exploding(p) => BuiltModel::Exploding(ExplodingCurve::new(p.lambda)?),
            ModelConfig::Gaussian(p) => BuiltModel::Gaussian(GaussianCurve::new(p.curvature)?),
            ModelConfig::Power(p) => BuiltModel::Power(PowerCurve::new(p.base, p.unit)?),
            ModelConfig::FhRational(p) => {
                let model = FhRationalModel::new(p.f.build()?, p.g.build()?, p.sigma)?;
                model.curve(p.m)?;
                BuiltModel::FhRational { model, m: p.m }
            }
            ModelConfig::FhIntegral(p) => {
                let weights = p.weights.iter().map(|w| (w.weight, w.rate)).collect();
                let model = FhIntegralModel::new(weights, p.vol.build(), p.q_convergence_assumed)?;
                model.curve(p.w)?;
                BuiltModel::FhIntegral { model, w: p.w }
            }
            ModelConfig::LinearRational(p) => {
                let model = LinearRationalModel::new(
                    p.k,
                    p.theta.clone(),
                    p.phi,
                    p.psi.clone(),
                    p.lower.clone(),
                    p.upper.clone(),
                    p.vol,
                )?;
                let x = p.x.clone().unwrap_or_else(|| p.theta.clone());
                model.curve(&x)?;
                BuiltModel::LinearRational { model, x }
            }
        })
    }
}

impl BuiltModel {
    /// The curve at the configured state.
    pub fn curve(&self) -> longrate_core::Result<Box<dyn Curve + Send + Sync>> {
        Ok(match self {
            BuiltModel::Flat(c) => Box::new(*c),
            BuiltModel::Synthetic(c) => Box::new(*c),
            BuiltModel::Exploding(c) => Box::new(*c),
            BuiltModel::Gaussian(c) => Box::new(*c),
            BuiltModel::Power(c) => Box::new(*c),
            BuiltModel::FhRational { model, m } => Box::new(model.curve(*m)?),
            BuiltModel::FhIntegral { model, w } => Box::new(model.curve(*w)?),
            BuiltModel::LinearRational { model, x } => Box::new(model.curve(x)?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig, RunError> {
        LoadedConfig::from_str(text).map(|c| c.config)
    }

    #[test]
    fn minimal_flat() {
        let c = parse(r#"{"model": {"family": "flat", "rate": 0.05}}"#).unwrap();
        assert_eq!(c.model, Some(ModelConfig::Flat(FlatParams { rate: 0.05 })));
        assert_eq!(c.grid.delta, 1.0);
        assert_eq!(c.long_term(), LongTermConfig::default());
    }

    #[test]
    fn unknown_keys_rejected_at_every_level() {
        for text in [
            r#"{"model": {"family": "flat", "rate": 0.05}, "extra": 1}"#,
            r#"{"model": {"family": "flat", "rate": 0.05, "r": 1}}"#,
            r#"{"mc": {"paths": 10}}"#,
            r#"{"model": {"family": "fh_rational", "f": {"kind": "exponential", "rate": 0.02, "x": 0},
                          "g": {"kind": "exponential", "rate": 0.05}}}"#,
        ] {
            let err = parse(text).unwrap_err();
            assert!(matches!(err, RunError::Config(ref m) if m.contains("unknown field")), "{err}");
        }
    }

    #[test]
    fn unknown_family_rejected() {
        assert!(matches!(parse(r#"{"model": {"family": "vasicek"}}"#), Err(RunError::Config(_))));
    }

    #[test]
    fn field_level_messages() {
        let err = parse(r#"{"model": {"family": "flat", "rate": 0.05}, "grid": {"delta": -1}}"#).unwrap_err();
        assert!(err.to_string().contains("grid.delta"), "{err}");
        let err = parse(r#"{"mc": {"time_step": 0}}"#).unwrap_err();
        assert!(err.to_string().contains("mc.time_step"), "{err}");
        let err = parse(r#"{"horizons": [100, 50]}"#).unwrap_err();
        assert!(err.to_string().contains("horizons"), "{err}");
        let err = parse(
            r#"{"model": {"family": "fh_rational", "f": {"kind": "exponential", "rate": 0.05},
                          "g": {"kind": "exponential", "rate": 0.02}}}"#,
        )
        .unwrap_err();
        assert!(err.to_string().starts_with("config error: model:"), "{err}");
    }

    #[test]
    fn explicit_grid_needs_spacing_bounds() {
        let err = parse(r#"{"grid": {"dates": [1, 2, 3]}}"#).unwrap_err();
        assert!(err.to_string().contains("grid.min_spacing"), "{err}");
        let c = parse(r#"{"grid": {"dates": [1, 2, 3], "min_spacing": 0.5, "max_spacing": 2}}"#).unwrap();
        assert_eq!(c.grid_len(), 3);
    }

    #[test]
    fn hash_tracks_source_text() {
        let a = LoadedConfig::from_str(r#"{"t": 0}"#).unwrap();
        let b = LoadedConfig::from_str(r#"{"t": 0}"#).unwrap();
        let c = LoadedConfig::from_str(r#"{"t": 0.0}"#).unwrap();
        assert_eq!(a.sha256, b.sha256);
        assert_ne!(a.sha256, c.sha256);
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn lr_state_defaults_to_theta() {
        let c = parse(
            r#"{"model": {"family": "linear_rational", "k": 0.1, "theta": [0.5], "phi": 1, "psi": [1],
                          "lower": [0], "upper": [1], "vol": 0.05}}"#,
        )
        .unwrap();
        let BuiltModel::LinearRational { model, x } = c.model().unwrap().build().unwrap() else { panic!() };
        assert_eq!(x, vec![0.5]);
        assert!((model.alpha() - 0.05).abs() < 1e-15);
    }
}
