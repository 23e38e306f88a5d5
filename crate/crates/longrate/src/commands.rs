//! The seven subcommands. Each returns a [`Table`] plus a status; writing the
//! table is left to [`crate::run`].

use longrate_core::longterm::{
    bond_sum_ratio_k, fh_exponential_closed_forms, lr_closed_forms, LimitEstimate, LongTermClass,
};
use longrate_core::models::{
    uniform_times, DriverSpec, FhRationalModel, McEstimate, PathEnsemble, StateCurve, StateModel,
};
use longrate_core::regimes::{
    arbitrage_payoffs, classify_curve, corpus, leg_payoffs, Orientation, SwapPortfolio,
};
use longrate_core::regimes::arbitrage::overnight_rates;
use longrate_core::ucp::{
    fh_annuity_ensembles, fh_predicted_n_star, non_increasing_within_ci, ucp_convergence_prob,
    ucp_divergence_prob, UcpEstimate, UcpTarget,
};
use longrate_core::{annuity_sn, ois_par_rate, spot_simple, spot_yield, Curve, ShortRatePath, TenorGrid};
use rayon::prelude::*;

use crate::config::{BuiltModel, ExperimentConfig, ModelConfig, UcpMode};
use crate::output::{num, opt_num, Table};
use crate::parallel::{mc_floating_leg_par, mc_price_par, simulate_paths_par};
use crate::RunError;

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Ok,
    /// A limit could not be classified.
    Undetermined(String),
    /// The run finished but a check it performs did not hold.
    Failed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub table: Table,
    pub seed: Option<u64>,
    pub status: Status,
}

impl Output {
    fn ok(table: Table, seed: Option<u64>) -> Self {
        Output { table, seed, status: Status::Ok }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArbitrageArgs {
    pub t: f64,
    pub s: f64,
    pub rate_t: f64,
    pub rate_s: f64,
    pub delta: f64,
    pub notional: f64,
    pub m: usize,
    pub orientation: Orientation,
    /// Random floating-rate paths the payoffs are checked against.
    pub paths: usize,
    pub seed: u64,
}

fn config_err(msg: impl Into<String>) -> RunError {
    RunError::Config(msg.into())
}

fn built(cfg: &ExperimentConfig) -> Result<(&ModelConfig, BuiltModel), RunError> {
    let model = cfg.model()?;
    Ok((model, model.build()?))
}

/// `P(t, T)` at the configured state. `t` and `maturity` override the config.
pub fn price(cfg: &ExperimentConfig, t: Option<f64>, maturity: Option<f64>) -> Result<Output, RunError> {
    let (model, built) = built(cfg)?;
    let t = t.unwrap_or(cfg.t);
    let maturity = maturity
        .or(cfg.maturity)
        .ok_or_else(|| config_err("maturity: required by price (config key or --maturity)"))?;
    if !(t.is_finite() && t >= 0.0 && maturity.is_finite() && maturity >= t) {
        return Err(config_err(format!("maturity: need 0 <= t <= maturity, got t={t}, maturity={maturity}")));
    }
    let p = built.curve()?.price(t, maturity)?;
    let mut table = Table::new(&["family", "t", "maturity", "price"]);
    table.push(vec![model.family().into(), num(t), num(maturity), num(p)]);
    Ok(Output::ok(table, None))
}

/// Price, spot yield, simple rate and OIS par rate at each grid date.
pub fn rates(cfg: &ExperimentConfig) -> Result<Output, RunError> {
    let (_, built) = built(cfg)?;
    let curve = built.curve()?;
    let grid = cfg.tenor_grid()?;
    let mut table = Table::new(&["n", "date", "accrual", "price", "yield", "simple", "par_rate"]);
    for n in 1..=cfg.grid_len() {
        let (Some(date), Some(accrual)) = (grid.date(n), grid.accrual(n)) else { break };
        table.push(vec![
            n.to_string(),
            num(date),
            num(accrual),
            num(curve.price(cfg.t, date)?),
            num(spot_yield(&*curve, cfg.t, date)?),
            num(spot_simple(&*curve, cfg.t, date)?),
            num(ois_par_rate(&*curve, cfg.t, &grid, n)?),
        ]);
    }
    Ok(Output::ok(table, None))
}

/// Closed-form `(ℓ, S∞, R)`, each present when the model has one.
type ClosedForms = (Option<f64>, Option<f64>, Option<f64>);

fn closed_forms(built: &BuiltModel, cfg: &ExperimentConfig) -> Result<ClosedForms, RunError> {
    let Some(delta) = cfg.grid.dates.is_none().then_some(cfg.grid.delta) else {
        return Ok((None, None, None));
    };
    Ok(match built {
        BuiltModel::Flat(c) => {
            let r = c.rate;
            let growth = (r * delta).exp_m1();
            (Some(r), Some(delta / growth), Some(growth / delta))
        }
        BuiltModel::FhRational { model, m } => match model.exponential_rates() {
            Some((alpha, beta)) => {
                let cf = fh_exponential_closed_forms(alpha, beta, delta, *m, cfg.t)?;
                (Some(alpha), Some(cf.s_inf), Some(cf.swap_rate))
            }
            None => (None, None, None),
        },
        BuiltModel::LinearRational { model, x } => {
            let cf = lr_closed_forms(model, x, cfg.t, delta)?;
            (Some(model.alpha()), Some(cf.s_inf), Some(cf.swap_rate))
        }
        _ => (None, None, None),
    })
}

fn limit_row(table: &mut Table, name: &str, est: &LimitEstimate, closed: Option<f64>) {
    let err = est.value.zip(closed).map(|(v, c)| (v - c).abs());
    table.push(vec![name.into(), opt_num(est.value), est.class.to_string(), opt_num(closed), opt_num(err)]);
}

/// `ℓ`, long bond, `R`, `L`, the annuity sum and the bond/annuity ratio.
pub fn longterm(cfg: &ExperimentConfig) -> Result<Output, RunError> {
    let (_, built) = built(cfg)?;
    let curve = built.curve()?;
    let grid = cfg.tenor_grid()?;
    let lt = cfg.long_term();
    let report = classify_curve(&*curve, cfg.t, &grid, &lt)?;
    let k = bond_sum_ratio_k(&*curve, cfg.t, &grid, lt.n_max)?;
    let (ell_cf, s_inf_cf, swap_cf) = closed_forms(&built, cfg)?;

    let mut table = Table::new(&["quantity", "value", "class", "closed_form", "abs_error"]);
    limit_row(&mut table, "ell", &report.ell, ell_cf);
    limit_row(&mut table, "long_bond", &report.long_bond, None);
    limit_row(&mut table, "swap_rate", &report.swap, swap_cf);
    limit_row(&mut table, "simple_rate", &report.simple, None);
    let sum = &report.sum;
    let sum_value = sum.converged.then_some(sum.value);
    table.push(vec![
        "s_inf".into(),
        opt_num(sum_value),
        if sum.converged { "converged" } else { "diverged" }.into(),
        opt_num(s_inf_cf),
        opt_num(sum_value.zip(s_inf_cf).map(|(v, c)| (v - c).abs())),
    ]);
    table.push(vec![
        "k_ratio".into(),
        num(k.value),
        if k.settled { "settled" } else { "extrapolated" }.into(),
        String::new(),
        String::new(),
    ]);
    table.note("sum_terms", sum.n_used);
    table.note("sum_tail_bound", num(sum.tail_bound));
    table.note("horizon_used", num(report.horizon_used));

    let undetermined: Vec<&str> = [
        ("ell", report.ell),
        ("long_bond", report.long_bond),
        ("swap_rate", report.swap),
        ("simple_rate", report.simple),
    ]
    .iter()
    .filter(|(_, e)| e.class == LongTermClass::Undetermined)
    .map(|(n, _)| *n)
    .collect();
    let status = if undetermined.is_empty() {
        Status::Ok
    } else {
        Status::Undetermined(format!(
            "no stable limit on the horizon ladder {:?} for {}",
            lt.horizons,
            undetermined.join(", ")
        ))
    };
    Ok(Output { table, seed: None, status })
}

/// FH rational pricing with the GBM driver started at `m` rather than 1.
struct ScaledFh<'a> {
    model: &'a FhRationalModel,
    m: f64,
}

impl StateModel for ScaledFh<'_> {
    fn state_dim(&self) -> usize {
        1
    }
    fn state_price_density(&self, state: &[f64], t: f64) -> longrate_core::Result<f64> {
        self.model.state_price_density(self.m * state[0], t)
    }
    fn state_price(&self, state: &[f64], t: f64, maturity: f64) -> longrate_core::Result<f64> {
        self.model.price(self.m * state[0], t, maturity)
    }
}

fn mc_rows<M: StateModel + Sync>(
    model: &M,
    driver: &DriverSpec,
    x0: &[f64],
    cfg: &ExperimentConfig,
) -> Result<Table, RunError> {
    let mc = &cfg.mc;
    let grid = cfg.tenor_grid()?;
    let n = mc.n_exchanges;
    let last = grid
        .date(n)
        .ok_or_else(|| config_err(format!("mc.n_exchanges: grid has fewer than {n} dates")))?;
    let times = uniform_times(last.max(mc.maturity), mc.time_step)?;
    let curve = StateCurve { model, state: x0 };

    let price = mc_price_par(model, driver, &times, mc.n_paths, mc.seed, mc.maturity)
        .map_err(|e| config_err(format!("mc.maturity: {e}")))?;
    let price_target = curve.price(0.0, mc.maturity)?;
    let leg = mc_floating_leg_par(model, driver, &times, mc.n_paths, mc.seed, &grid, n, cfg.tolerances.fd_step)
        .map_err(|e| config_err(format!("mc.time_step: {e}")))?;
    let leg_target = curve.price(0.0, grid.start())? - curve.price(0.0, last)?;

    let mut table = Table::new(&["check", "maturity", "estimate", "std_error", "target", "z_score", "within_3se"]);
    let mut push = |name: &str, maturity: f64, est: McEstimate, target: f64| {
        let z = (est.estimate - target) / est.std_error;
        table.push(vec![
            name.into(),
            num(maturity),
            num(est.estimate),
            num(est.std_error),
            num(target),
            num(z),
            est.within(target, 3.0).to_string(),
        ]);
    };
    push("price", mc.maturity, price, price_target);
    push("floating_leg", last, leg, leg_target);
    table.note("n_paths", mc.n_paths);
    table.note("time_steps", times.len() - 1);
    Ok(table)
}

/// Monte Carlo bond price and floating leg from time 0 against their exact
/// values. Paths start at the configured state, except for `fh_integral`
/// whose Brownian state is 0 at time 0.
pub fn mc_check(cfg: &ExperimentConfig) -> Result<Output, RunError> {
    let (model_cfg, built) = built(cfg)?;
    let table = match &built {
        BuiltModel::FhRational { model, m } => {
            let driver = DriverSpec::Gbm { sigma: model.sigma() };
            mc_rows(&ScaledFh { model, m: *m }, &driver, &[1.0], cfg)?
        }
        BuiltModel::FhIntegral { model, .. } => mc_rows(model, &DriverSpec::Brownian, &[0.0], cfg)?,
        BuiltModel::LinearRational { model, x } => mc_rows(model, &model.driver(x)?, x, cfg)?,
        _ => {
            return Err(config_err(format!(
                "model.family: mc-check needs a stochastic model, got {}",
                model_cfg.family()
            )))
        }
    };
    Ok(Output::ok(table, Some(cfg.mc.seed)))
}

fn default_ns(cap: Option<usize>) -> Vec<usize> {
    let mut ns = Vec::new();
    let mut decade = 1;
    while ns.len() < 12 {
        for step in [1, 2, 5] {
            ns.push(step * decade);
        }
        decade *= 10;
    }
    match cap {
        Some(c) => {
            ns.retain(|&n| n < c);
            ns.push(c);
            ns
        }
        None => ns.into_iter().take(10).collect(),
    }
}

fn ucp_table(estimates: &[UcpEstimate]) -> Table {
    let mut table = Table::new(&["n", "epsilon_or_M", "probability", "ci_low", "ci_high", "n_samples"]);
    for e in estimates {
        table.push(vec![
            e.n.to_string(),
            num(e.threshold),
            num(e.probability),
            num(e.ci_low),
            num(e.ci_high),
            e.n_samples.to_string(),
        ]);
    }
    table
}

/// Annuity prefix sums `S_n(s)` on `[0, t_h]`. FH rational models are
/// simulated; deterministic curves give one path.
fn annuity_paths(
    built: &BuiltModel,
    cfg: &ExperimentConfig,
    ns: &[usize],
) -> Result<(Vec<PathEnsemble>, Option<PathEnsemble>), RunError> {
    let ucp = &cfg.ucp;
    let times = uniform_times(ucp.t_horizon, ucp.time_step)?;
    match built {
        BuiltModel::FhRational { model, m } => {
            if cfg.grid.dates.is_some() {
                return Err(config_err("grid.dates: ucp on FH models needs a uniform grid"));
            }
            let driver = DriverSpec::Gbm { sigma: model.sigma() };
            let paths = simulate_paths_par(&driver, &times, ucp.n_paths, ucp.seed)?.map(|_, s| Ok(m * s[0]))?;
            let (seqs, limit) = fh_annuity_ensembles(model, cfg.t, cfg.grid.delta, &paths, ns)
                .map_err(|e| config_err(format!("ucp.t_horizon: {e}")))?;
            Ok((seqs, Some(limit)))
        }
        BuiltModel::FhIntegral { .. } | BuiltModel::LinearRational { .. } => {
            Err(config_err("model.family: ucp supports deterministic curves and fh_rational"))
        }
        _ => {
            let curve = built.curve()?;
            let grid = cfg.tenor_grid()?;
            let seqs = ns
                .iter()
                .map(|&n| {
                    let values = times.iter().map(|&s| annuity_sn(&*curve, s, &grid, n)).collect::<Result<Vec<_>, _>>()?;
                    Ok(PathEnsemble::from_parts(times.clone(), 1, 1, values, 0)?)
                })
                .collect::<Result<Vec<_>, RunError>>()?;
            Ok((seqs, None))
        }
    }
}

/// Deviation probabilities of the annuity prefix sums: `P(sup |S_n - S∞| > ε)`
/// in convergence mode, `P(inf S_n > M)` in divergence mode.
pub fn ucp(cfg: &ExperimentConfig) -> Result<Output, RunError> {
    let (model_cfg, built) = built(cfg)?;
    let ucp = &cfg.ucp;
    let mut notes = Vec::new();
    let estimates = match ucp.mode {
        UcpMode::Convergence => {
            let BuiltModel::FhRational { model, .. } = &built else {
                return Err(config_err(format!(
                    "ucp.mode: convergence needs family fh_rational, got {}",
                    model_cfg.family()
                )));
            };
            if cfg.grid.dates.is_some() {
                return Err(config_err("grid.dates: ucp on FH models needs a uniform grid"));
            }
            let n_star = fh_predicted_n_star(model, cfg.t, cfg.grid.delta, ucp.t_horizon, ucp.epsilon)?;
            notes.push(("n_star", n_star.to_string()));
            let ns = ucp.ns.clone().unwrap_or_else(|| default_ns(Some(n_star.max(1))));
            let (seqs, limit) = annuity_paths(&built, cfg, &ns)?;
            let limit = limit.expect("FH paths carry their limit");
            let est = ns
                .iter()
                .zip(&seqs)
                .map(|(&n, seq)| ucp_convergence_prob(seq, UcpTarget::Ensemble(&limit), ucp.epsilon, ucp.t_horizon, n))
                .collect::<Result<Vec<_>, _>>()?;
            notes.push(("non_increasing_within_ci", non_increasing_within_ci(&est).to_string()));
            est
        }
        UcpMode::Divergence => {
            let ns = ucp.ns.clone().unwrap_or_else(|| default_ns(None));
            let (seqs, _) = annuity_paths(&built, cfg, &ns)?;
            ns.iter()
                .zip(&seqs)
                .map(|(&n, seq)| ucp_divergence_prob(seq, ucp.threshold, ucp.t_horizon, n))
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    let mut table = ucp_table(&estimates);
    for (k, v) in notes {
        table.note(k, v);
    }
    let seed = matches!(built, BuiltModel::FhRational { .. }).then_some(ucp.seed);
    Ok(Output::ok(table, seed))
}

/// Classifies the built-in corpus and checks every draw against the three
/// regime tables.
pub fn regimes(cfg: &ExperimentConfig) -> Result<Output, RunError> {
    let lt = cfg.long_term();
    let draws = corpus(cfg.regimes.seed, cfg.regimes.per_family)?;
    let delta = cfg.grid.delta;
    let reports = draws
        .par_iter()
        .map(|d| classify_curve(&d.curve, d.t, &TenorGrid::uniform(d.t, delta)?, &lt))
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = Table::new(&[
        "family",
        "params",
        "ell_class",
        "bond_class",
        "swap_class",
        "simple_class",
        "table1",
        "table2",
        "table3",
    ]);
    let mut fails = 0;
    for (d, r) in draws.iter().zip(&reports) {
        let verdicts = longrate_core::regimes::table_check(r);
        fails += verdicts.iter().filter(|v| v.is_fail()).count();
        let mut row = vec![
            d.family.name().to_string(),
            d.params.clone(),
            r.ell.class.to_string(),
            r.long_bond.class.to_string(),
            r.swap.class.to_string(),
            r.simple.class.to_string(),
        ];
        row.extend(verdicts.iter().map(|v| v.label()));
        table.push(row);
    }
    table.note("draws", draws.len());
    table.note("violations", fails);
    let status = if fails == 0 { Status::Ok } else { Status::Failed(format!("{fails} regime table violations")) };
    Ok(Output { table, seed: Some(cfg.regimes.seed), status })
}

/// Short-rate path `r = 0.03 + 0.05 W` on `[a, b]`, from stream `p` of `seed`.
fn random_short_rate(a: f64, b: f64, seed: u64, p: usize) -> Result<ShortRatePath, RunError> {
    let times = uniform_times(b, (b - a) / 500.0)?;
    let start = times.partition_point(|&s| s < a).saturating_sub(1);
    let mut w = vec![0.0; times.len()];
    longrate_core::models::simulate_path(&DriverSpec::Brownian, &times, seed, p as u64, &mut w)?;
    // Piecewise constant: one rate per interval, taken at its left end.
    let rates = w[start..w.len() - 1].iter().map(|w| 0.03 + 0.05 * w).collect();
    Ok(ShortRatePath::new(times[start..].to_vec(), rates)?)
}

/// `H_i` of the two-swap portfolio, confirmed on `paths` random floating
/// paths.
pub fn arbitrage(args: &ArbitrageArgs) -> Result<Output, RunError> {
    let p = SwapPortfolio {
        t: args.t,
        s: args.s,
        rate_t: args.rate_t,
        rate_s: args.rate_s,
        delta: args.delta,
        notional: args.notional,
        m: args.m,
        orientation: args.orientation,
    };
    p.validate().map_err(|e| config_err(format!("arbitrage: {e}")))?;
    if args.paths == 0 {
        return Err(config_err("--paths: must be >= 1"));
    }
    let dates = p.dates();
    let end = dates[dates.len() - 1];
    let mut payoffs = None;
    let mut max_dev: f64 = 0.0;
    for path in 0..args.paths {
        let floating = overnight_rates(&p, &random_short_rate(p.s, end, args.seed, path)?)?;
        let h = arbitrage_payoffs(&p, &floating)?;
        let legs = leg_payoffs(&p, &floating)?;
        max_dev = legs.iter().zip(&h).fold(max_dev, |m, (a, b)| m.max((a - b).abs()));
        payoffs.get_or_insert(h);
    }
    let mut table = Table::new(&["exchange", "date", "payoff"]);
    for (i, h) in payoffs.unwrap_or_default().iter().enumerate() {
        table.push(vec![(i + 1).to_string(), num(dates[i + 1]), num(*h)]);
    }
    table.note("paths", args.paths);
    table.note("max_leg_deviation", num(max_dev));
    Ok(Output::ok(table, Some(args.seed)))
}
