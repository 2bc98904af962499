//! Bijections between admissible parameter sets and unconstrained vectors.
//!
//! | model  | coordinates                                                      |
//! |--------|------------------------------------------------------------------|
//! | bs     | ln sigma                                                         |
//! | heston | ln v0, ln kappa, ln theta, ln vol_of_vol, atanh rho              |
//! | msv    | ln s0^2, ln s1^2, ln s2^2, ln lambda, ln k                       |

use crate::error::{Error, Result};
use crate::model::{Model, ModelParams};
use crate::pricing_bs::BsParams;
use crate::pricing_heston::HestonParams;
use crate::pricing_msv::MsvParams;

// keeps exp() finite and tanh() strictly inside (-1, 1)
const LOG_BOUND: f64 = 300.0;
const ATANH_BOUND: f64 = 18.0;

pub fn dimension(model: Model) -> usize {
    match model {
        Model::Bs => 1,
        Model::Heston | Model::Msv => 5,
    }
}

fn positive_log(name: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x.ln())
    } else {
        Err(Error::invalid(format!("{name} = {x} has no log coordinate (must be > 0)")))
    }
}

pub fn transform_to_unbounded(params: &ModelParams) -> Result<Vec<f64>> {
    params.validate()?;
    Ok(match params {
        ModelParams::Bs(p) => vec![positive_log("sigma", p.sigma)?],
        ModelParams::Heston(p) => vec![
            positive_log("v0", p.v0)?,
            positive_log("kappa", p.kappa)?,
            positive_log("theta", p.theta)?,
            positive_log("vol_of_vol", p.vol_of_vol)?,
            p.rho.atanh(),
        ],
        ModelParams::Msv(p) => vec![
            positive_log("sigma0_hat^2", p.sigma0_hat * p.sigma0_hat)?,
            positive_log("sigma1_hat^2", p.sigma1_hat * p.sigma1_hat)?,
            positive_log("sigma2_hat^2", p.sigma2_hat * p.sigma2_hat)?,
            positive_log("lambda", p.lambda)?,
            positive_log("k", p.k)?,
        ],
    })
}

fn ex(y: f64) -> f64 {
    y.clamp(-LOG_BOUND, LOG_BOUND).exp()
}

/// Inverse of [`transform_to_unbounded`]; any finite vector maps to admissible parameters.
pub fn untransform(x: &[f64], model: Model) -> Result<ModelParams> {
    if x.len() != dimension(model) {
        return Err(Error::invalid(format!("{model} expects {} coordinates, got {}", dimension(model), x.len())));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("unconstrained vector {x:?}")));
    }
    Ok(match model {
        Model::Bs => ModelParams::Bs(BsParams { sigma: ex(x[0]) }),
        Model::Heston => ModelParams::Heston(HestonParams {
            v0: ex(x[0]),
            kappa: ex(x[1]),
            theta: ex(x[2]),
            vol_of_vol: ex(x[3]),
            rho: x[4].clamp(-ATANH_BOUND, ATANH_BOUND).tanh(),
        }),
        Model::Msv => ModelParams::Msv(MsvParams {
            sigma0_hat: ex(0.5 * x[0]),
            sigma1_hat: ex(0.5 * x[1]),
            sigma2_hat: ex(0.5 * x[2]),
            lambda: ex(x[3]),
            k: ex(x[4]),
        }),
    })
}
