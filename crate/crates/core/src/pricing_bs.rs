//! Black-Scholes call pricing on a non-dividend asset, plus derivatives of the
//! call price with respect to the variance rate (up to fourth order).

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Annualised Black-Scholes volatility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BsParams {
    pub sigma: f64,
}

impl BsParams {
    pub fn new(sigma: f64) -> Result<Self> {
        let p = BsParams { sigma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::invalid(format!("sigma must be finite and > 0, got {}", self.sigma)));
        }
        Ok(())
    }
}

/// Standard normal cumulative distribution function.
///
/// Uses the positive-term series for `erf` on `|x|/sqrt(2) <= 3` and the
/// Laplace continued fraction for `erfc` beyond, which keeps the absolute
/// error near machine precision everywhere and the relative error small in
/// the far left tail.
pub fn norm_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let z = x.abs() * FRAC_1_SQRT_2;
    let tail = 0.5 * erfc_nonneg(z);
    if x >= 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

fn erfc_nonneg(z: f64) -> f64 {
    if z <= 3.0 {
        1.0 - erf_series(z)
    } else if z > 27.5 {
        0.0
    } else {
        erfc_continued_fraction(z)
    }
}

// erf(z) = 2/sqrt(pi) e^{-z^2} sum_n (2z^2)^n z / (1*3*...*(2n+1)); every term is positive.
fn erf_series(z: f64) -> f64 {
    let two_z2 = 2.0 * z * z;
    let mut term = z;
    let mut sum = z;
    let mut n = 0.0;
    while term > 1e-17 * sum {
        n += 1.0;
        term *= two_z2 / (2.0 * n + 1.0);
        sum += term;
    }
    FRAC_2_SQRT_PI * (-z * z).exp() * sum
}

// erfc(z) = e^{-z^2}/sqrt(pi) * 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))), modified Lentz.
fn erfc_continued_fraction(z: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = z;
    let mut c = z;
    let mut d = 0.0;
    for n in 1..500 {
        let a = n as f64 * 0.5;
        d = z + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = z + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-z * z).exp() / (PI.sqrt() * f)
}

fn check_contract(spot: f64, strike: f64, rate: f64, tau: f64) -> Result<()> {
    ensure_finite("spot", spot)?;
    ensure_finite("strike", strike)?;
    ensure_finite("rate", rate)?;
    ensure_finite("tau", tau)?;
    if spot <= 0.0 || strike <= 0.0 {
        return Err(Error::invalid(format!("spot and strike must be > 0 (S={spot}, K={strike})")));
    }
    if tau <= 0.0 {
        return Err(Error::invalid(format!("tau must be > 0, got {tau}")));
    }
    Ok(())
}

/// Lower no-arbitrage bound of a call: `max(S - K e^{-r tau}, 0)`.
pub fn call_intrinsic(spot: f64, strike: f64, rate: f64, tau: f64) -> f64 {
    (spot - strike * (-rate * tau).exp()).max(0.0)
}

/// Call price as a function of total variance `w = sigma^2 tau`; inputs are already validated.
pub(crate) fn call_total_variance(spot: f64, strike: f64, discount: f64, w: f64) -> f64 {
    let fwd_strike = strike * discount;
    let intrinsic = (spot - fwd_strike).max(0.0);
    if w <= 0.0 {
        return intrinsic;
    }
    let sw = w.sqrt();
    let d1 = ((spot / fwd_strike).ln() + 0.5 * w) / sw;
    let d2 = d1 - sw;
    let price = spot * norm_cdf(d1) - fwd_strike * norm_cdf(d2);
    price.max(intrinsic).min(spot)
}

/// Black-Scholes call price. `sigma = 0` returns the deterministic payoff limit.
pub fn bs_call(spot: f64, strike: f64, rate: f64, tau: f64, sigma: f64) -> Result<f64> {
    check_contract(spot, strike, rate, tau)?;
    ensure_finite("sigma", sigma)?;
    if sigma < 0.0 {
        return Err(Error::invalid(format!("sigma must be >= 0, got {sigma}")));
    }
    Ok(call_total_variance(spot, strike, (-rate * tau).exp(), sigma * sigma * tau))
}

/// Black-Scholes call price parameterised by the variance rate `v = sigma^2`.
pub fn bs_call_variance(spot: f64, strike: f64, rate: f64, tau: f64, v: f64) -> Result<f64> {
    check_contract(spot, strike, rate, tau)?;
    ensure_finite("variance", v)?;
    if v < 0.0 {
        return Err(Error::invalid(format!("variance rate must be >= 0, got {v}")));
    }
    Ok(call_total_variance(spot, strike, (-rate * tau).exp(), v * tau))
}

/// `order`-th derivative of the call price with respect to the variance rate.
///
/// With log forward moneyness `x = ln(S / (K e^{-r tau}))` and total variance
/// `w = v tau`, the first derivative in `w` is
///
/// ```text
/// dC/dw = A h(w),   A = S e^{-x/2} / (2 sqrt(2 pi)),
///                   h(w) = w^{-1/2} exp(-x^2/(2w) - w/8) = exp(L(w)).
/// ```
///
/// Higher orders follow from `h' = h L'`:
///
/// ```text
/// L'   = -1/(2w) + x^2/(2w^2) - 1/8
/// L''  =  1/(2w^2) - x^2/w^3
/// L''' = -1/w^3 + 3x^2/w^4
/// d2C/dw2 = A h L'
/// d3C/dw3 = A h (L'^2 + L'')
/// d4C/dw4 = A h (L'^3 + 3 L' L'' + L''')
/// ```
///
/// and `d^i C / dv^i = tau^i d^i C / dw^i`.
pub fn bs_variance_derivative(spot: f64, strike: f64, rate: f64, tau: f64, v: f64, order: u32) -> Result<f64> {
    check_contract(spot, strike, rate, tau)?;
    ensure_finite("variance", v)?;
    if v <= 0.0 {
        return Err(Error::invalid(format!("variance rate must be > 0, got {v}")));
    }
    if !(1..=4).contains(&order) {
        return Err(Error::invalid(format!("derivative order must be 1..=4, got {order}")));
    }
    let mut out = [0.0; 4];
    variance_derivatives_into(spot, strike, rate, tau, v, order, &mut out);
    Ok(out[order as usize - 1])
}

/// Fills `out[i-1]` with `d^i C / dv^i` for `i = 1..=max_order`. Inputs must be valid.
pub(crate) fn variance_derivatives_into(
    spot: f64,
    strike: f64,
    rate: f64,
    tau: f64,
    v: f64,
    max_order: u32,
    out: &mut [f64; 4],
) {
    let w = v * tau;
    let x = (spot / strike).ln() + rate * tau;
    let log_ah = spot.ln() - 0.5 * x - 0.5 * x * x / w - 0.125 * w - 0.5 * w.ln();
    let ah = log_ah.exp() / (2.0 * (2.0 * PI).sqrt());
    let x2 = x * x;
    let l1 = -0.5 / w + 0.5 * x2 / (w * w) - 0.125;
    let l2 = 0.5 / (w * w) - x2 / (w * w * w);
    let l3 = -1.0 / (w * w * w) + 3.0 * x2 / (w * w * w * w);
    let dw = [ah, ah * l1, ah * (l1 * l1 + l2), ah * (l1 * l1 * l1 + 3.0 * l1 * l2 + l3)];
    let mut scale = 1.0;
    for i in 0..max_order as usize {
        scale *= tau;
        out[i] = dw[i] * scale;
    }
}
