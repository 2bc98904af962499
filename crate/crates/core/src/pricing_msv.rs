//! Moment-expansion stochastic volatility ("MSV").
//!
//! The variance path is a deterministic term structure scaled by one
//! unit-mean lognormal scalar `xi` with standard deviation `k`:
//!
//! ```text
//! v_t = xi (s0^2 e^{-lambda t} + s1^2 lambda t e^{-lambda t} + s2^2),   xi ~ LN(1, k^2)
//! ```
//!
//! The call price is the expectation of the Black-Scholes price at the
//! time-averaged variance rate `V = xi * I(tau)`, approximated by a Taylor
//! expansion around `E[V] = I(tau)` using the central moments of `xi`.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::model::PriceResult;
use crate::pricing_bs::{call_total_variance, variance_derivatives_into};
use crate::quadrature::{gauss_hermite, MAX_HERMITE_NODES};

/// Highest Taylor order used unless asked otherwise.
pub const DEFAULT_ORDER: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MsvParams {
    pub sigma0_hat: f64,
    pub sigma1_hat: f64,
    pub sigma2_hat: f64,
    pub lambda: f64,
    pub k: f64,
}

impl MsvParams {
    pub fn new(sigma0_hat: f64, sigma1_hat: f64, sigma2_hat: f64, lambda: f64, k: f64) -> Result<Self> {
        let p = MsvParams { sigma0_hat, sigma1_hat, sigma2_hat, lambda, k };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, x) in [
            ("sigma0_hat", self.sigma0_hat),
            ("sigma1_hat", self.sigma1_hat),
            ("sigma2_hat", self.sigma2_hat),
            ("lambda", self.lambda),
            ("k", self.k),
        ] {
            if !(x.is_finite() && x >= 0.0) {
                return Err(Error::invalid(format!("msv {name} must be finite and >= 0, got {x}")));
            }
        }
        if self.sigma0_hat == 0.0 && self.sigma1_hat == 0.0 && self.sigma2_hat == 0.0 {
            return Err(Error::invalid("msv variance term structure is identically zero"));
        }
        Ok(())
    }

    /// Deterministic variance factor at time `t`.
    pub fn variance_factor(&self, t: f64) -> f64 {
        let decay = (-self.lambda * t).exp();
        self.sigma0_hat.powi(2) * decay + self.sigma1_hat.powi(2) * self.lambda * t * decay + self.sigma2_hat.powi(2)
    }
}

/// Mean and central moments of the time-averaged variance rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MsvMoments {
    pub mean_rate: f64,
    pub mu2: f64,
    pub mu3: f64,
    pub mu4: f64,
}

// (1 - e^{-x}) / x
fn decay_average(x: f64) -> f64 {
    if x < 1e-6 {
        1.0 - x / 2.0 + x * x / 6.0
    } else {
        -(-x).exp_m1() / x
    }
}

// (1 - e^{-x}(1 + x)) / x = sum_{n>=2} (-1)^n (n-1) x^{n-1} / n!
fn hump_average(x: f64) -> f64 {
    if x < 0.5 {
        let mut sum = 0.0;
        let mut pow_over_fact = x / 2.0; // x^{n-1} / n! at n = 2
        for n in 2..30 {
            let nf = n as f64;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * (nf - 1.0) * pow_over_fact;
            pow_over_fact *= x / (nf + 1.0);
            if pow_over_fact < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        (1.0 - (-x).exp() * (1.0 + x)) / x
    }
}

/// Time-averaged deterministic variance `I(tau) = (1/tau) int_0^tau factor(t) dt`.
pub fn mean_variance_rate(p: &MsvParams, tau: f64) -> Result<f64> {
    ensure_finite("tau", tau)?;
    if tau <= 0.0 {
        return Err(Error::invalid(format!("tau must be > 0, got {tau}")));
    }
    let x = p.lambda * tau;
    Ok(p.sigma0_hat.powi(2) * decay_average(x) + p.sigma1_hat.powi(2) * hump_average(x) + p.sigma2_hat.powi(2))
}

/// Second, third and fourth central moments of a unit-mean lognormal with standard deviation `k`.
pub fn xi_central_moments(k: f64) -> Result<(f64, f64, f64)> {
    ensure_finite("k", k)?;
    if k < 0.0 {
        return Err(Error::invalid(format!("k must be >= 0, got {k}")));
    }
    let k2 = k * k;
    let k4 = k2 * k2;
    let a = 1.0 + k2;
    let m3 = k4 * (3.0 + k2);
    let m4 = k4 * (a.powi(4) + 2.0 * a.powi(3) + 3.0 * a * a - 3.0);
    Ok((k2, m3, m4))
}

pub fn msv_moments(p: &MsvParams, tau: f64) -> Result<MsvMoments> {
    let mean_rate = mean_variance_rate(p, tau)?;
    let (m2, m3, m4) = xi_central_moments(p.k)?;
    Ok(MsvMoments { mean_rate, mu2: m2 * mean_rate.powi(2), mu3: m3 * mean_rate.powi(3), mu4: m4 * mean_rate.powi(4) })
}

fn check_contract(spot: f64, strike: f64, rate: f64, tau: f64) -> Result<()> {
    for (name, x) in [("spot", spot), ("strike", strike), ("rate", rate), ("tau", tau)] {
        ensure_finite(name, x)?;
    }
    if spot <= 0.0 || strike <= 0.0 || tau <= 0.0 {
        return Err(Error::invalid(format!("need S, K, tau > 0 (S={spot}, K={strike}, tau={tau})")));
    }
    Ok(())
}

/// Taylor-expanded MSV call price truncated after the `order`-th central moment.
pub fn msv_call(p: &MsvParams, spot: f64, strike: f64, rate: f64, tau: f64, order: u32) -> Result<PriceResult> {
    p.validate()?;
    check_contract(spot, strike, rate, tau)?;
    if !(2..=4).contains(&order) {
        return Err(Error::invalid(format!("expansion order must be 2, 3 or 4, got {order}")));
    }
    let m = msv_moments(p, tau)?;
    let base = call_total_variance(spot, strike, (-rate * tau).exp(), m.mean_rate * tau);
    let mut terms = [base, 0.0, 0.0, 0.0];
    if p.k > 0.0 {
        let mut d = [0.0; 4];
        variance_derivatives_into(spot, strike, rate, tau, m.mean_rate, order, &mut d);
        let mus = [m.mu2, m.mu3, m.mu4];
        let factorials = [2.0, 6.0, 24.0];
        for i in 2..=order as usize {
            terms[i - 1] = d[i - 1] * mus[i - 2] / factorials[i - 2];
        }
    }
    let price: f64 = terms.iter().sum();
    if !price.is_finite() {
        return Err(Error::NonFinite(format!("msv expansion terms {terms:?} (k = {})", p.k)));
    }
    Ok(PriceResult {
        price,
        raw_price: price,
        truncation_order: Some(order),
        expansion_terms: Some(terms),
        ..PriceResult::default()
    })
}

/// Relative-to-spot tolerance for Gauss-Hermite self-convergence.
pub const MIXTURE_TOLERANCE: f64 = 1e-9;

/// Exact lognormal mixture `E_xi[C_BS(xi I(tau))]` by Gauss-Hermite quadrature over `ln xi`.
pub fn msv_mixture_oracle(p: &MsvParams, spot: f64, strike: f64, rate: f64, tau: f64) -> Result<PriceResult> {
    p.validate()?;
    check_contract(spot, strike, rate, tau)?;
    let ibar = mean_variance_rate(p, tau)?;
    let discount = (-rate * tau).exp();
    if p.k == 0.0 {
        let price = call_total_variance(spot, strike, discount, ibar * tau);
        return Ok(PriceResult { quadrature_nodes: Some(0), ..PriceResult::exact(price) });
    }
    let s2 = p.k.powi(2).ln_1p();
    let s = s2.sqrt();
    let eval = |n: usize| -> f64 {
        let rule = gauss_hermite(n).expect("hermite ladder");
        rule.nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&t, &w)| {
                let xi = (-0.5 * s2 + SQRT_2 * s * t).exp();
                w * call_total_variance(spot, strike, discount, xi * ibar * tau)
            })
            .sum::<f64>()
            / PI.sqrt()
    };
    let mut n = 64;
    let mut prev = eval(n);
    while n < MAX_HERMITE_NODES {
        n *= 2;
        let next = eval(n);
        if (next - prev).abs() <= MIXTURE_TOLERANCE * spot {
            if !next.is_finite() {
                break;
            }
            return Ok(PriceResult { quadrature_nodes: Some(n), ..PriceResult::exact(next) });
        }
        prev = next;
    }
    Err(Error::NonConvergence(format!("lognormal mixture not converged with {MAX_HERMITE_NODES} nodes (k = {})", p.k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pricing_bs::{bs_call, bs_call_variance};

    /// Adaptive Simpson, used as an independent integration oracle.
    fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
        #[allow(clippy::too_many_arguments)]
        fn rec<F: Fn(f64) -> f64>(
            f: &F,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(lm);
            let frm = f(rm);
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                    + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
            }
        }
        let fa = f(a);
        let fb = f(b);
        let fm = f(0.5 * (a + b));
        rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50)
    }

    #[test]
    fn flat_term_structure() {
        let p = MsvParams::new(0.0, 0.0, 0.2, 3.0, 0.1).unwrap();
        for tau in [0.01, 0.5, 1.0, 7.0] {
            assert!((mean_variance_rate(&p, tau).unwrap() - 0.04).abs() < 1e-16);
        }
    }

    #[test]
    fn small_lambda_limit() {
        let p = MsvParams::new(0.1, 0.3, 0.2, 0.0, 0.1).unwrap();
        assert!((mean_variance_rate(&p, 1.0).unwrap() - 0.05).abs() < 1e-16);
        let p = MsvParams::new(0.1, 0.3, 0.2, 1e-12, 0.1).unwrap();
        assert!((mean_variance_rate(&p, 1.0).unwrap() - 0.05).abs() < 1e-12);
    }

    #[test]
    fn mean_rate_reference_value() {
        let p = MsvParams::new(0.2, 0.0, 0.0, 1.0, 0.0).unwrap();
        let got = mean_variance_rate(&p, 1.0).unwrap();
        assert!((got - 0.04 * (1.0 - (-1.0_f64).exp())).abs() < 1e-16);
        assert!((got - 0.025285).abs() < 1e-6);
    }

    #[test]
    fn mean_rate_matches_numerical_integration_over_decay_range() {
        let p0 = MsvParams::new(0.25, 0.35, 0.15, 1.0, 0.2).unwrap();
        for i in 0..=40 {
            // lambda * tau log-spaced over [1e-8, 50]
            let x = 1e-8 * (50.0e8_f64).powf(i as f64 / 40.0);
            let tau = 0.75;
            let p = MsvParams { lambda: x / tau, ..p0 };
            let exact = mean_variance_rate(&p, tau).unwrap();
            let integral = adaptive_simpson(&|t| p.variance_factor(t), 0.0, tau, 1e-15) / tau;
            assert!(((exact - integral) / integral).abs() < 1e-10, "lambda tau = {x}: {exact} vs {integral}");
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(MsvParams::new(0.0, 0.0, 0.0, 1.0, 0.1).is_err());
        assert!(MsvParams::new(-0.1, 0.0, 0.2, 1.0, 0.1).is_err());
        assert!(MsvParams::new(0.1, 0.0, 0.2, f64::NAN, 0.1).is_err());
        assert!(xi_central_moments(-0.1).is_err());
        let p = MsvParams::new(0.1, 0.1, 0.1, 1.0, 0.1).unwrap();
        assert!(mean_variance_rate(&p, 0.0).is_err());
        assert!(msv_call(&p, 100.0, 100.0, 0.0, 1.0, 5).is_err());
        assert!(msv_call(&p, 100.0, 100.0, 0.0, 1.0, 1).is_err());
    }

    /// Central moments of a unit-mean lognormal from raw moments `E xi^n = (1+k^2)^{n(n-1)/2}`.
    fn raw_moment_oracle(k: f64) -> (f64, f64, f64) {
        let a = 1.0 + k * k;
        let e2 = a;
        let e3 = a.powi(3);
        let e4 = a.powi(6);
        (e2 - 1.0, e3 - 3.0 * e2 + 2.0, e4 - 4.0 * e3 + 6.0 * e2 - 3.0)
    }

    #[test]
    fn central_moments() {
        assert_eq!(xi_central_moments(0.0).unwrap(), (0.0, 0.0, 0.0));
        let (_, m3, _) = xi_central_moments(0.1).unwrap();
        assert!((m3 - 3.01e-4).abs() < 1e-18);
        let (_, _, m4) = xi_central_moments(0.3).unwrap();
        let (_, _, o4) = raw_moment_oracle(0.3);
        assert!(((m4 - o4) / o4).abs() < 1e-12);
    }

    #[test]
    fn moments_scale_homogeneously() {
        let p = MsvParams::new(0.15, 0.1, 0.15, 2.0, 0.2).unwrap();
        let c: f64 = 1.7;
        let q =
            MsvParams { sigma0_hat: c * p.sigma0_hat, sigma1_hat: c * p.sigma1_hat, sigma2_hat: c * p.sigma2_hat, ..p };
        let a = msv_moments(&p, 0.5).unwrap();
        let b = msv_moments(&q, 0.5).unwrap();
        let rel = |x: f64, y: f64| ((x - y) / y).abs();
        assert!(rel(b.mean_rate, a.mean_rate * c.powi(2)) < 1e-14);
        assert!(rel(b.mu2, a.mu2 * c.powi(4)) < 1e-13);
        assert!(rel(b.mu3, a.mu3 * c.powi(6)) < 1e-13);
        assert!(rel(b.mu4, a.mu4 * c.powi(8)) < 1e-13);
        assert!(b.mu4 >= b.mu2 * b.mu2);
        let z = msv_moments(&MsvParams { k: 0.0, ..p }, 0.5).unwrap();
        assert_eq!((z.mu2, z.mu3, z.mu4), (0.0, 0.0, 0.0));
    }

    #[test]
    fn zero_k_reduces_to_black_scholes() {
        let p = MsvParams::new(0.15, 0.1, 0.15, 2.0, 0.0).unwrap();
        let ibar = mean_variance_rate(&p, 0.5).unwrap();
        let bs = bs_call_variance(100.0, 95.0, 0.01, 0.5, ibar).unwrap();
        for order in 2..=4 {
            assert_eq!(msv_call(&p, 100.0, 95.0, 0.01, 0.5, order).unwrap().price, bs);
        }
        assert_eq!(msv_mixture_oracle(&p, 100.0, 95.0, 0.01, 0.5).unwrap().price, bs);
        let flat = MsvParams::new(0.0, 0.0, 0.2, 5.0, 0.0).unwrap();
        let a = msv_call(&flat, 100.0, 110.0, 0.02, 1.3, 4).unwrap().price;
        assert!((a - bs_call(100.0, 110.0, 0.02, 1.3, 0.2).unwrap()).abs() < 1e-13);
    }

    #[test]
    fn expansion_close_to_mixture_on_reference_case() {
        let p = MsvParams::new(0.15, 0.1, 0.15, 2.0, 0.2).unwrap();
        let taylor = msv_call(&p, 100.0, 100.0, 0.01, 0.5, 4).unwrap();
        let exact = msv_mixture_oracle(&p, 100.0, 100.0, 0.01, 0.5).unwrap();
        assert!(((taylor.price - exact.price) / exact.price).abs() < 1e-3);
        assert!(exact.quadrature_nodes.unwrap() >= 64);
        assert_eq!(taylor.truncation_order, Some(4));
    }

    #[test]
    fn mixture_exceeds_deterministic_price_where_convex() {
        // ATM-ish short maturity: C_BS is concave in v near ATM, far OTM it is convex
        let p = MsvParams::new(0.1, 0.1, 0.2, 1.0, 0.25).unwrap();
        let (s, r, t) = (100.0, 0.0, 0.5);
        let ibar = mean_variance_rate(&p, t).unwrap();
        let s2 = (1.0 + p.k * p.k).ln();
        for k in [70.0, 80.0, 125.0, 140.0] {
            // scan convexity over xi in exp(-s^2/2 +/- 6 s)
            let convex = (0..200).all(|i| {
                let y = -0.5 * s2 - 6.0 * s2.sqrt() + 12.0 * s2.sqrt() * i as f64 / 199.0;
                let v = ibar * y.exp();
                bs_variance_derivative_2(s, k, r, t, v) >= 0.0
            });
            let mix = msv_mixture_oracle(&p, s, k, r, t).unwrap().price;
            let det = bs_call_variance(s, k, r, t, ibar).unwrap();
            if convex {
                assert!(mix >= det, "K={k}");
            }
        }
    }

    fn bs_variance_derivative_2(s: f64, k: f64, r: f64, t: f64, v: f64) -> f64 {
        crate::pricing_bs::bs_variance_derivative(s, k, r, t, v, 2).unwrap()
    }
}
