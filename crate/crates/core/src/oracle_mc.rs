//! Monte-Carlo reference prices used to cross-check the closed-form pricers.
//!
//! Every path (or antithetic pair) draws from its own ChaCha stream selected
//! by `(seed, pair index)`, and partial sums are combined in a fixed block
//! order, so estimates are bit-identical for any thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pricing_bs::call_total_variance;
use crate::pricing_heston::HestonParams;
use crate::pricing_msv::{mean_variance_rate, MsvParams};

/// Pairs (or single paths) accumulated sequentially inside one parallel block.
const BLOCK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub n_paths: usize,
    /// Time steps per year; a contract uses `ceil(steps_per_year * tau)` steps.
    pub steps_per_year: usize,
    pub seed: u64,
    pub antithetic: bool,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig { n_paths: 200_000, steps_per_year: 250, seed: 42, antithetic: true }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_paths < 2 {
            return Err(Error::invalid("n_paths must be >= 2"));
        }
        if self.antithetic && !self.n_paths.is_multiple_of(2) {
            return Err(Error::invalid("n_paths must be even with antithetic sampling"));
        }
        if self.steps_per_year == 0 {
            return Err(Error::invalid("steps_per_year must be >= 1"));
        }
        Ok(())
    }

    pub fn steps_for(&self, tau: f64) -> usize {
        ((self.steps_per_year as f64 * tau).ceil() as usize).max(1)
    }

    fn samples(&self) -> usize {
        if self.antithetic {
            self.n_paths / 2
        } else {
            self.n_paths
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub price: f64,
    pub stderr: f64,
    /// Number of independent samples (antithetic pairs count once).
    pub n_effective: usize,
}

impl McEstimate {
    /// `|price - reference| <= n_sigma * stderr`.
    pub fn agrees_with(&self, reference: f64, n_sigma: f64) -> bool {
        (self.price - reference).abs() <= n_sigma * self.stderr
    }
}

fn stream(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Shifted sums per output: `(sum (x - shift), sum (x - shift)^2)`.
type Moments = Vec<(f64, f64)>;

/// Runs `sample(index, out)` for every sample index and reduces each output slot
/// to a mean and standard error. `shift[j]` centres the sums for slot `j`.
fn estimate<F>(n: usize, shift: &[f64], sample: F) -> Vec<McEstimate>
where
    F: Fn(usize, &mut [f64]) + Sync,
{
    let m = shift.len();
    let blocks: Vec<Moments> = (0..n.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut acc = vec![(0.0, 0.0); m];
            let mut buf = vec![0.0; m];
            for i in b * BLOCK..((b + 1) * BLOCK).min(n) {
                sample(i, &mut buf);
                for j in 0..m {
                    let d = buf[j] - shift[j];
                    acc[j].0 += d;
                    acc[j].1 += d * d;
                }
            }
            acc
        })
        .collect();
    let mut total = vec![(0.0, 0.0); m];
    for block in &blocks {
        for j in 0..m {
            total[j].0 += block[j].0;
            total[j].1 += block[j].1;
        }
    }
    let nf = n as f64;
    total
        .iter()
        .zip(shift)
        .map(|(&(s, s2), &c)| {
            let mean = s / nf;
            let var = ((s2 - s * mean) / (nf - 1.0)).max(0.0);
            McEstimate { price: c + mean, stderr: (var / nf).sqrt(), n_effective: n }
        })
        .collect()
}

fn check_contract(spot: f64, strikes: &[f64], rate: f64, tau: f64) -> Result<()> {
    if !(spot.is_finite() && spot > 0.0 && tau.is_finite() && tau > 0.0 && rate.is_finite()) {
        return Err(Error::invalid(format!("need finite S > 0, tau > 0 (S={spot}, tau={tau}, r={rate})")));
    }
    if strikes.iter().any(|k| !(k.is_finite() && *k >= 0.0)) {
        return Err(Error::invalid("strikes must be finite and >= 0"));
    }
    Ok(())
}

/// Full-truncation Euler simulation of `(ln S, v)`; one estimate per strike
/// from the same paths. A zero strike gives the discounted terminal asset
/// (martingale check).
pub fn mc_heston_calls(
    p: &HestonParams,
    spot: f64,
    strikes: &[f64],
    rate: f64,
    tau: f64,
    cfg: &McConfig,
) -> Result<Vec<McEstimate>> {
    p.validate()?;
    cfg.validate()?;
    check_contract(spot, strikes, rate, tau)?;
    let steps = cfg.steps_for(tau);
    let dt = tau / steps as f64;
    let sqrt_dt = dt.sqrt();
    let discount = (-rate * tau).exp();
    let rho_bar = (1.0 - p.rho * p.rho).sqrt();
    let ln_s0 = spot.ln();
    let forward = spot / discount;
    let shift: Vec<f64> = strikes.iter().map(|k| discount * (forward - k).max(0.0)).collect();

    let simulate = |rng: &mut ChaCha8Rng, sign: f64, normals: &mut Vec<(f64, f64)>, first: bool| -> f64 {
        let mut x = ln_s0;
        let mut v = p.v0;
        for pair in normals.iter_mut().take(steps) {
            if first {
                let z1: f64 = StandardNormal.sample(rng);
                let z2: f64 = StandardNormal.sample(rng);
                *pair = (z1, z2);
            }
            let (z1, z2) = *pair;
            let (z1, z2) = (sign * z1, sign * z2);
            let vp = v.max(0.0);
            let sv = (vp).sqrt() * sqrt_dt;
            x += (rate - 0.5 * vp) * dt + sv * z1;
            v += p.kappa * (p.theta - vp) * dt + p.vol_of_vol * sv * (p.rho * z1 + rho_bar * z2);
        }
        x.exp()
    };

    let antithetic = cfg.antithetic;
    let seed = cfg.seed;
    Ok(estimate(cfg.samples(), &shift, |i, out| {
        let mut rng = stream(seed, i);
        let mut normals = vec![(0.0, 0.0); steps];
        let st = simulate(&mut rng, 1.0, &mut normals, true);
        if antithetic {
            let st2 = simulate(&mut rng, -1.0, &mut normals, false);
            for (o, k) in out.iter_mut().zip(strikes) {
                *o = 0.5 * discount * ((st - k).max(0.0) + (st2 - k).max(0.0));
            }
        } else {
            for (o, k) in out.iter_mut().zip(strikes) {
                *o = discount * (st - k).max(0.0);
            }
        }
    }))
}

pub fn mc_heston_call(
    p: &HestonParams,
    spot: f64,
    strike: f64,
    rate: f64,
    tau: f64,
    cfg: &McConfig,
) -> Result<McEstimate> {
    Ok(mc_heston_calls(p, spot, &[strike], rate, tau, cfg)?[0])
}

/// Exact lognormal terminal draws; unbiased for the Black-Scholes call.
pub fn mc_bs_call(sigma: f64, spot: f64, strike: f64, rate: f64, tau: f64, cfg: &McConfig) -> Result<McEstimate> {
    cfg.validate()?;
    check_contract(spot, &[strike], rate, tau)?;
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::invalid(format!("sigma must be finite and >= 0, got {sigma}")));
    }
    let discount = (-rate * tau).exp();
    let drift = (rate - 0.5 * sigma * sigma) * tau;
    let vol = sigma * tau.sqrt();
    let shift = [discount * (spot * (rate * tau).exp() - strike).max(0.0)];
    let payoff = |z: f64| discount * (spot * (drift + vol * z).exp() - strike).max(0.0);
    let antithetic = cfg.antithetic;
    let seed = cfg.seed;
    Ok(estimate(cfg.samples(), &shift, |i, out| {
        let mut rng = stream(seed, i);
        let z: f64 = StandardNormal.sample(&mut rng);
        out[0] = if antithetic { 0.5 * (payoff(z) + payoff(-z)) } else { payoff(z) };
    })[0])
}

/// Plain Monte-Carlo average of `C_BS(xi * I(tau))` over lognormal `xi` draws.
pub fn mc_msv_mixture(
    p: &MsvParams,
    spot: f64,
    strike: f64,
    rate: f64,
    tau: f64,
    cfg: &McConfig,
) -> Result<McEstimate> {
    p.validate()?;
    cfg.validate()?;
    check_contract(spot, &[strike], rate, tau)?;
    if strike <= 0.0 {
        return Err(Error::invalid("strike must be > 0"));
    }
    let ibar = mean_variance_rate(p, tau)?;
    let discount = (-rate * tau).exp();
    let s2 = p.k.powi(2).ln_1p();
    let s = s2.sqrt();
    let price_at = |z: f64| call_total_variance(spot, strike, discount, (-0.5 * s2 + s * z).exp() * ibar * tau);
    let shift = [price_at(0.0)];
    let antithetic = cfg.antithetic;
    let seed = cfg.seed;
    Ok(estimate(cfg.samples(), &shift, |i, out| {
        let mut rng = stream(seed, i);
        let z: f64 = StandardNormal.sample(&mut rng);
        out[0] = if antithetic { 0.5 * (price_at(z) + price_at(-z)) } else { price_at(z) };
    })[0])
}
