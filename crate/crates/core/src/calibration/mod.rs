//! Least-squares calibration of model parameters to a quote dataset.
//!
//! Each start runs Nelder-Mead in the unconstrained coordinates of
//! [`transform`], restarting the simplex at the incumbent while it keeps
//! improving and budget remains. Starts run concurrently; the winner is the
//! lowest loss, ties going to the lowest start index.

pub mod nelder_mead;
pub mod transform;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market_data::Dataset;
use crate::model::{Model, ModelParams};
use crate::pricing_bs::BsParams;
use crate::pricing_heston::HestonParams;
use crate::pricing_msv::{MsvParams, DEFAULT_ORDER};

pub use nelder_mead::{minimize, Minimum, NelderMeadOptions};
pub use transform::{transform_to_unbounded, untransform};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LossKind {
    #[default]
    Sse,
    Rmse,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationConfig {
    pub model: Model,
    pub loss_kind: LossKind,
    /// Objective evaluations allowed per start.
    pub max_evals: usize,
    pub n_starts: usize,
    pub tolerance: f64,
    pub seed: u64,
    /// Heston only.
    pub feller_penalty_weight: f64,
    /// MSV expansion order.
    pub msv_order: u32,
}

impl CalibrationConfig {
    pub fn new(model: Model) -> Self {
        CalibrationConfig {
            model,
            loss_kind: LossKind::Sse,
            max_evals: 2000,
            n_starts: 3,
            tolerance: 1e-12,
            seed: 0,
            feller_penalty_weight: 0.0,
            msv_order: DEFAULT_ORDER,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_evals < 100 {
            return Err(Error::invalid(format!("max_evals must be >= 100, got {}", self.max_evals)));
        }
        if self.n_starts == 0 {
            return Err(Error::invalid("n_starts must be >= 1"));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::invalid(format!("tolerance must be > 0, got {}", self.tolerance)));
        }
        if !(self.feller_penalty_weight >= 0.0 && self.feller_penalty_weight.is_finite()) {
            return Err(Error::invalid("feller_penalty_weight must be finite and >= 0"));
        }
        if !(2..=4).contains(&self.msv_order) {
            return Err(Error::invalid(format!("msv order must be 2..=4, got {}", self.msv_order)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub params: ModelParams,
    pub loss: f64,
    pub loss_kind: LossKind,
    /// Evaluations spent by the winning start.
    pub n_evals: usize,
    /// Evaluations across all starts.
    pub total_evals: usize,
    pub elapsed_seconds: f64,
    pub start_index: usize,
    pub converged: bool,
}

/// Market-typical centre of the start distribution.
pub fn default_start(model: Model) -> ModelParams {
    match model {
        Model::Bs => ModelParams::Bs(BsParams { sigma: 0.2 }),
        Model::Heston => {
            ModelParams::Heston(HestonParams { v0: 0.04, kappa: 1.5, theta: 0.04, vol_of_vol: 0.5, rho: -0.5 })
        }
        Model::Msv => {
            ModelParams::Msv(MsvParams { sigma0_hat: 0.2, sigma1_hat: 0.1, sigma2_hat: 0.2, lambda: 1.0, k: 0.1 })
        }
    }
}

/// Start point `index`: the default centre for 0, otherwise multiplicative
/// jitter in `[0.5, 1.5]` per log coordinate and `+/- 0.2` on `atanh(rho)`.
pub fn start_point(model: Model, seed: u64, index: usize) -> Vec<f64> {
    let mut x = transform_to_unbounded(&default_start(model)).expect("default start is admissible");
    if index == 0 {
        return x;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    for (i, xi) in x.iter_mut().enumerate() {
        if model == Model::Heston && i == 4 {
            *xi += rng.random_range(-0.2..=0.2);
        } else {
            let factor: f64 = rng.random_range(0.5..=1.5);
            // squared-scale coordinates move by ln(factor^2)
            let power = if model == Model::Msv && i < 3 { 2.0 } else { 1.0 };
            *xi += power * factor.ln();
        }
    }
    x
}

/// Sum of squared price errors over the dataset.
pub fn sse(params: &ModelParams, ds: &Dataset, msv_order: u32) -> Result<f64> {
    if ds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let prices = params.price_quotes(&ds.quotes, msv_order)?;
    Ok(prices.iter().zip(&ds.quotes).map(|(p, q)| (p - q.mid_price).powi(2)).sum())
}

/// Calibration objective: SSE plus the optional Feller penalty for Heston.
pub fn loss(params: &ModelParams, ds: &Dataset, feller_penalty_weight: f64) -> Result<f64> {
    loss_with(params, ds, feller_penalty_weight, LossKind::Sse, DEFAULT_ORDER)
}

fn loss_with(params: &ModelParams, ds: &Dataset, feller_weight: f64, kind: LossKind, order: u32) -> Result<f64> {
    let mut value = sse(params, ds, order)?;
    if kind == LossKind::Rmse {
        value = (value / ds.len() as f64).sqrt();
    }
    if let ModelParams::Heston(h) = params {
        if feller_weight > 0.0 {
            value += feller_weight * h.feller_violation().powi(2);
        }
    }
    Ok(value)
}

struct StartOutcome {
    x: Vec<f64>,
    f: f64,
    n_evals: usize,
    converged: bool,
}

const MAX_RESTARTS: usize = 8;

fn run_start(ds: &Dataset, cfg: &CalibrationConfig, x0: Vec<f64>) -> StartOutcome {
    let objective = |x: &[f64]| -> f64 {
        match untransform(x, cfg.model) {
            Ok(p) => loss_with(&p, ds, cfg.feller_penalty_weight, cfg.loss_kind, cfg.msv_order).unwrap_or(f64::MAX),
            Err(_) => f64::MAX,
        }
    };
    let mut x = x0;
    let mut best = f64::MAX;
    let mut used = 0;
    let mut converged = false;
    let mut step = 0.25;
    for _ in 0..MAX_RESTARTS {
        let remaining = cfg.max_evals.saturating_sub(used);
        if remaining <= transform::dimension(cfg.model) + 1 {
            break;
        }
        let opts = NelderMeadOptions { max_evals: remaining, tolerance: cfg.tolerance, initial_step: step };
        let m = minimize(objective, &x, &opts);
        used += m.n_evals;
        let improvement = best - m.f;
        if m.f < best {
            best = m.f;
            x = m.x;
        }
        converged = m.converged;
        if !m.converged || improvement.abs() < cfg.tolerance {
            break;
        }
        step *= 0.5;
    }
    StartOutcome { x, f: best, n_evals: used, converged }
}

/// Fits `cfg.model` to every quote of `ds`.
pub fn calibrate(ds: &Dataset, cfg: &CalibrationConfig) -> Result<CalibrationResult> {
    cfg.validate()?;
    if ds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let clock = Instant::now();
    let outcomes: Vec<StartOutcome> =
        (0..cfg.n_starts).into_par_iter().map(|i| run_start(ds, cfg, start_point(cfg.model, cfg.seed, i))).collect();
    let total_evals = outcomes.iter().map(|o| o.n_evals).sum();
    let (start_index, best) = outcomes
        .iter()
        .enumerate()
        .filter(|(_, o)| o.f < f64::MAX)
        .min_by(|a, b| a.1.f.total_cmp(&b.1.f).then(a.0.cmp(&b.0)))
        .ok_or_else(|| Error::Calibration(format!("no start produced a finite {} loss", cfg.model)))?;
    let params = untransform(&best.x, cfg.model)?;
    params.validate()?;
    let elapsed_seconds = clock.elapsed().as_secs_f64().max(f64::MIN_POSITIVE);
    Ok(CalibrationResult {
        params,
        loss: best.f,
        loss_kind: cfg.loss_kind,
        n_evals: best.n_evals,
        total_evals,
        elapsed_seconds,
        start_index,
        converged: best.converged,
    })
}
