//! Heston call pricing through the two pseudo-probability inversion integrals.
//!
//! Risk-neutral dynamics with zero volatility risk premium:
//!
//! ```text
//! dS = r S dt + sqrt(v) S dW1
//! dv = kappa (theta - v) dt + vol_of_vol sqrt(v) dW2,   dW1 dW2 = rho dt
//! ```
//!
//! The characteristic exponent is evaluated in the rearranged form with
//! `g = (B - d)/(B + d)` and `e^{-d tau}`, which keeps the complex logarithm on
//! its principal branch. `B - d` and `B + d` are both recovered from the exact
//! product `(B - d)(B + d) = vol_of_vol^2 (2 u i phi - phi^2)`, so the
//! expression stays accurate as `vol_of_vol -> 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::model::PriceResult;
use crate::quadrature::{gauss_legendre, MAX_LEGENDRE_NODES};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HestonParams {
    pub v0: f64,
    pub kappa: f64,
    pub theta: f64,
    pub vol_of_vol: f64,
    pub rho: f64,
}

impl HestonParams {
    pub fn new(v0: f64, kappa: f64, theta: f64, vol_of_vol: f64, rho: f64) -> Result<Self> {
        let p = HestonParams { v0, kappa, theta, vol_of_vol, rho };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, x) in
            [("v0", self.v0), ("kappa", self.kappa), ("theta", self.theta), ("vol_of_vol", self.vol_of_vol)]
        {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::invalid(format!("heston {name} must be finite and > 0, got {x}")));
            }
        }
        if !(self.rho.is_finite() && self.rho > -1.0 && self.rho < 1.0) {
            return Err(Error::invalid(format!("heston rho must lie in (-1, 1), got {}", self.rho)));
        }
        Ok(())
    }

    /// `2 kappa theta / vol_of_vol^2`; the variance stays strictly positive when >= 1.
    pub fn feller_ratio(&self) -> f64 {
        2.0 * self.kappa * self.theta / (self.vol_of_vol * self.vol_of_vol)
    }

    /// `max(0, vol_of_vol^2 - 2 kappa theta)`.
    pub fn feller_violation(&self) -> f64 {
        (self.vol_of_vol * self.vol_of_vol - 2.0 * self.kappa * self.theta).max(0.0)
    }
}

/// Which pseudo-probability: `P1` (share measure) or `P2` (risk-neutral exercise).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    P1,
    P2,
}

impl Measure {
    fn u(self) -> f64 {
        match self {
            Measure::P1 => 0.5,
            Measure::P2 => -0.5,
        }
    }
}

/// Left end of the inversion integral; the integrand has a removable singularity at 0.
pub const PHI_MIN: f64 = 1e-8;
/// Initial truncation point of the inversion integral.
pub const PHI_MAX_INITIAL: f64 = 200.0;
const PHI_MAX_CAP: f64 = 200.0 * 1024.0;
/// Integrand modulus that must be reached at the truncation point.
pub const TAIL_TOLERANCE: f64 = 1e-12;
const FIRST_NODES: usize = 64;
/// Node budget; beyond 1024 the rule becomes composite.
pub const MAX_NODES: usize = 16 * MAX_LEGENDRE_NODES;
/// Relative (to spot) price change under node doubling accepted as converged.
pub const SELF_CONVERGENCE: f64 = 1e-9;
/// Allowed excursion of a raw pseudo-probability outside `[0, 1]`.
pub const PROBABILITY_SLACK: f64 = 1e-8;

fn complex_ln_1p(z: Complex64) -> Complex64 {
    // accurate for small |z|
    let re = 0.5 * (2.0 * z.re + z.norm_sqr()).ln_1p();
    let im = z.im.atan2(1.0 + z.re);
    Complex64::new(re, im)
}

/// `C_j + D_j v0` without the `i phi ln S` term.
fn log_cf_core(phi: f64, p: &HestonParams, rate: f64, tau: f64, measure: Measure) -> Complex64 {
    let i = Complex64::i();
    let sigma = p.vol_of_vol;
    let s2 = sigma * sigma;
    let u = measure.u();
    let b = match measure {
        Measure::P1 => p.kappa - p.rho * sigma,
        Measure::P2 => p.kappa,
    };
    let a = p.kappa * p.theta;
    // B = b - rho sigma i phi; w = 2 u i phi - phi^2; d^2 = B^2 - sigma^2 w
    let big_b = Complex64::new(b, -p.rho * sigma * phi);
    let w = Complex64::new(-phi * phi, 2.0 * u * phi);
    let d = (big_b * big_b - s2 * w).sqrt();
    let plus = big_b + d;
    let minus = big_b - d;
    let e = (-d * tau).exp();
    let one_minus_e = Complex64::new(1.0, 0.0) - e;

    // minus_over_s2 = (B - d)/sigma^2, g_over_s2 = g/sigma^2
    let (minus_over_s2, g, g_over_s2) = if plus.norm_sqr() >= minus.norm_sqr() {
        let mos = w / plus;
        let g = mos * s2 / plus;
        (mos, g, mos / plus)
    } else {
        let g = minus / plus;
        (minus / s2, g, g / s2)
    };
    let one_minus_g = Complex64::new(1.0, 0.0) - g;
    let denom = Complex64::new(1.0, 0.0) - g * e;
    // ln[(1 - g e)/(1 - g)] = ln(1 + z), z = g (1 - e)/(1 - g)
    let z = g * one_minus_e / one_minus_g;
    let z_over_s2 = g_over_s2 * one_minus_e / one_minus_g;
    let log_over_s2 = if z.norm() < 1e-8 {
        z_over_s2 * (Complex64::new(1.0, 0.0) - z * 0.5 + z * z / 3.0)
    } else {
        complex_ln_1p(z) / s2
    };
    let c = i * (rate * phi * tau) + a * (minus_over_s2 * tau - 2.0 * log_over_s2);
    let dd = minus_over_s2 * one_minus_e / denom;
    c + dd * p.v0
}

/// Heston characteristic function `f_j(phi) = exp(C_j + D_j v0 + i phi ln S)`.
pub fn heston_cf(phi: f64, p: &HestonParams, spot: f64, rate: f64, tau: f64, measure: Measure) -> Result<Complex64> {
    ensure_finite("phi", phi)?;
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::invalid(format!("tau must be > 0, got {tau}")));
    }
    if phi == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let expo = if phi < 0.0 {
        log_cf_core(-phi, p, rate, tau, measure).conj()
    } else {
        log_cf_core(phi, p, rate, tau, measure)
    } + Complex64::new(0.0, phi * spot.ln());
    let f = expo.exp();
    if !(f.re.is_finite() && f.im.is_finite()) {
        return Err(Error::NonFinite(format!("characteristic function at phi={phi} for {p:?}")));
    }
    Ok(f)
}

/// A pseudo-probability together with its quadrature diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probability {
    /// Value clamped to `[0, 1]`.
    pub value: f64,
    /// Value as integrated.
    pub raw: f64,
    pub nodes: usize,
    pub phi_max: f64,
}

impl Probability {
    /// True when the raw value left `[-slack, 1 + slack]`.
    pub fn out_of_range(&self) -> bool {
        self.raw < -PROBABILITY_SLACK || self.raw > 1.0 + PROBABILITY_SLACK
    }
}

/// Precomputed characteristic-function values for one maturity on one node set.
struct NodeValues {
    phis: Vec<f64>,
    weights: Vec<f64>,
    // f_j(phi) / (i phi) with the ln S phase already removed, j = 1, 2
    f1: Vec<Complex64>,
    f2: Vec<Complex64>,
}

fn cf_over_i_phi(phi: f64, p: &HestonParams, rate: f64, tau: f64, m: Measure) -> Result<Complex64> {
    let f = log_cf_core(phi, p, rate, tau, m).exp();
    if !(f.re.is_finite() && f.im.is_finite()) {
        return Err(Error::NonFinite(format!("characteristic function at phi={phi} for {p:?}")));
    }
    Ok(f / Complex64::new(0.0, phi))
}

/// Gauss-Legendre nodes on `[PHI_MIN, phi_max]`; above the largest single rule the
/// interval is split into equal panels of that size.
fn node_values(p: &HestonParams, rate: f64, tau: f64, n: usize, phi_max: f64) -> Result<NodeValues> {
    let panels = n.div_ceil(MAX_LEGENDRE_NODES).max(1);
    let per_panel = n / panels;
    let rule = gauss_legendre(per_panel).ok_or_else(|| Error::invalid(format!("no {n}-node rule")))?;
    let width = (phi_max - PHI_MIN) / panels as f64;
    let mut out = NodeValues {
        phis: Vec::with_capacity(n),
        weights: Vec::with_capacity(n),
        f1: Vec::with_capacity(n),
        f2: Vec::with_capacity(n),
    };
    for panel in 0..panels {
        let a = PHI_MIN + width * panel as f64;
        let half = 0.5 * width;
        let mid = a + half;
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let phi = mid + half * x;
            out.phis.push(phi);
            out.weights.push(w * half);
            out.f1.push(cf_over_i_phi(phi, p, rate, tau, Measure::P1)?);
            out.f2.push(cf_over_i_phi(phi, p, rate, tau, Measure::P2)?);
        }
    }
    Ok(out)
}

/// Integrals `int Re[e^{-i phi ln(K/S)} f_j/(i phi)]` for one strike, j = 1, 2.
fn integrals(nv: &NodeValues, log_moneyness: f64) -> (f64, f64) {
    let mut i1 = 0.0;
    let mut i2 = 0.0;
    for k in 0..nv.phis.len() {
        let (s, c) = (nv.phis[k] * log_moneyness).sin_cos();
        let rot = Complex64::new(c, -s);
        i1 += nv.weights[k] * (rot * nv.f1[k]).re;
        i2 += nv.weights[k] * (rot * nv.f2[k]).re;
    }
    (i1, i2)
}

fn integrand_envelope(phi: f64, p: &HestonParams, rate: f64, tau: f64) -> Result<f64> {
    let a = cf_over_i_phi(phi, p, rate, tau, Measure::P1)?.norm();
    let b = cf_over_i_phi(phi, p, rate, tau, Measure::P2)?.norm();
    Ok(a.max(b))
}

/// Truncation point: start at 200 and double until the integrand modulus is
/// below [`TAIL_TOLERANCE`].
pub fn truncation_point(p: &HestonParams, rate: f64, tau: f64) -> Result<f64> {
    let mut phi_max = PHI_MAX_INITIAL;
    loop {
        let env = integrand_envelope(phi_max, p, rate, tau)?;
        if env < TAIL_TOLERANCE {
            return Ok(phi_max);
        }
        if phi_max >= PHI_MAX_CAP {
            return Err(Error::NonConvergence(format!(
                "integrand modulus {env:.3e} at phi={phi_max} still above tail tolerance"
            )));
        }
        phi_max *= 2.0;
    }
}

/// Raw `(P1, P2)` for each strike of a maturity slice, plus nodes used.
struct SliceProbabilities {
    p1: Vec<f64>,
    p2: Vec<f64>,
    nodes: usize,
    phi_max: f64,
}

fn check_inputs(p: &HestonParams, spot: f64, rate: f64, tau: f64) -> Result<()> {
    p.validate()?;
    ensure_finite("spot", spot)?;
    ensure_finite("rate", rate)?;
    ensure_finite("tau", tau)?;
    if spot <= 0.0 {
        return Err(Error::invalid(format!("spot must be > 0, got {spot}")));
    }
    if tau <= 0.0 {
        return Err(Error::invalid(format!("tau must be > 0, got {tau}")));
    }
    Ok(())
}

fn slice_probabilities(
    p: &HestonParams,
    spot: f64,
    strikes: &[f64],
    rate: f64,
    tau: f64,
    fixed_nodes: Option<usize>,
) -> Result<SliceProbabilities> {
    check_inputs(p, spot, rate, tau)?;
    for &k in strikes {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::invalid(format!("strike must be finite and > 0, got {k}")));
        }
    }
    let phi_max = truncation_point(p, rate, tau)?;
    let log_m: Vec<f64> = strikes.iter().map(|k| (k / spot).ln()).collect();
    let discount = (-rate * tau).exp();
    let eval = |n: usize| -> Result<(Vec<f64>, Vec<f64>)> {
        let nv = node_values(p, rate, tau, n, phi_max)?;
        Ok(log_m
            .iter()
            .map(|&lm| {
                let (i1, i2) = integrals(&nv, lm);
                (0.5 + i1 / PI, 0.5 + i2 / PI)
            })
            .unzip())
    };
    if let Some(n) = fixed_nodes {
        let (p1, p2) = eval(n)?;
        return Ok(SliceProbabilities { p1, p2, nodes: n, phi_max });
    }
    let price = |p1: &[f64], p2: &[f64]| -> Vec<f64> {
        strikes.iter().zip(p1.iter().zip(p2)).map(|(k, (a, b))| spot * a - k * discount * b).collect()
    };
    let mut n = FIRST_NODES;
    let (mut p1, mut p2) = eval(n)?;
    let mut prices = price(&p1, &p2);
    while n < MAX_NODES {
        n *= 2;
        let (q1, q2) = eval(n)?;
        let next = price(&q1, &q2);
        let change = prices.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        p1 = q1;
        p2 = q2;
        prices = next;
        if change <= SELF_CONVERGENCE * spot {
            return Ok(SliceProbabilities { p1, p2, nodes: n, phi_max });
        }
    }
    Err(Error::NonConvergence(format!("price not self-converged after {MAX_NODES} nodes on [0, {phi_max}]")))
}

fn probability(raw: f64, nodes: usize, phi_max: f64) -> Probability {
    Probability { value: raw.clamp(0.0, 1.0), raw, nodes, phi_max }
}

/// Pseudo-probability `P_j = 1/2 + (1/pi) int_0^inf Re[e^{-i phi ln K} f_j / (i phi)] dphi`.
pub fn heston_pj(
    p: &HestonParams,
    spot: f64,
    strike: f64,
    rate: f64,
    tau: f64,
    measure: Measure,
) -> Result<Probability> {
    let sp = slice_probabilities(p, spot, &[strike], rate, tau, None)?;
    let raw = match measure {
        Measure::P1 => sp.p1[0],
        Measure::P2 => sp.p2[0],
    };
    Ok(probability(raw, sp.nodes, sp.phi_max))
}

#[allow(clippy::too_many_arguments)]
fn assemble(p1: f64, p2: f64, spot: f64, strike: f64, rate: f64, tau: f64, nodes: usize, phi_max: f64) -> PriceResult {
    let discount = (-rate * tau).exp();
    let raw = spot * p1 - strike * discount * p2;
    let lower = (spot - strike * discount).max(0.0);
    PriceResult {
        price: raw.max(lower).min(spot),
        raw_price: raw,
        quadrature_nodes: Some(nodes),
        phi_max: Some(phi_max),
        probabilities: Some((p1, p2)),
        ..PriceResult::default()
    }
}

/// Heston call `S P1 - K e^{-r tau} P2`.
///
/// `price` is clamped to the no-arbitrage band; `raw_price` is the value as
/// integrated.
pub fn heston_call(p: &HestonParams, spot: f64, strike: f64, rate: f64, tau: f64) -> Result<PriceResult> {
    let sp = slice_probabilities(p, spot, &[strike], rate, tau, None)?;
    Ok(assemble(sp.p1[0], sp.p2[0], spot, strike, rate, tau, sp.nodes, sp.phi_max))
}

/// Heston call on a fixed Gauss-Legendre node count, skipping the doubling loop.
pub fn heston_call_with_nodes(
    p: &HestonParams,
    spot: f64,
    strike: f64,
    rate: f64,
    tau: f64,
    nodes: usize,
) -> Result<PriceResult> {
    let sp = slice_probabilities(p, spot, &[strike], rate, tau, Some(nodes))?;
    Ok(assemble(sp.p1[0], sp.p2[0], spot, strike, rate, tau, sp.nodes, sp.phi_max))
}

/// Prices a strike ladder sharing one maturity. The characteristic function is
/// evaluated once per node and reused across strikes; node doubling stops when
/// every strike has self-converged.
pub fn heston_calls(p: &HestonParams, spot: f64, strikes: &[f64], rate: f64, tau: f64) -> Result<Vec<PriceResult>> {
    if strikes.is_empty() {
        return Ok(Vec::new());
    }
    let sp = slice_probabilities(p, spot, strikes, rate, tau, None)?;
    Ok(strikes
        .iter()
        .enumerate()
        .map(|(i, &k)| assemble(sp.p1[i], sp.p2[i], spot, k, rate, tau, sp.nodes, sp.phi_max))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pricing_bs::{bs_call, norm_cdf};

    fn base() -> HestonParams {
        HestonParams::new(0.04, 1.5, 0.04, 0.5, -0.5).unwrap()
    }

    #[test]
    fn rejects_inadmissible_params() {
        assert!(HestonParams::new(0.0, 1.0, 0.04, 0.3, 0.0).is_err());
        assert!(HestonParams::new(0.04, -1.0, 0.04, 0.3, 0.0).is_err());
        assert!(HestonParams::new(0.04, 1.0, 0.04, 0.3, 1.0).is_err());
        assert!(HestonParams::new(0.04, 1.0, 0.04, 0.3, -1.0).is_err());
        assert!(HestonParams::new(0.04, 1.0, 0.04, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn feller_diagnostics() {
        let p = base();
        assert!((p.feller_ratio() - 2.0 * 1.5 * 0.04 / 0.25).abs() < 1e-15);
        assert!((p.feller_violation() - (0.25 - 0.12)).abs() < 1e-15);
    }

    // Frozen from a 40-digit evaluation of the textbook Heston integrals.
    #[test]
    fn matches_high_precision_reference() {
        let cases = [
            (
                (100.0, 100.0, 0.01, 0.5),
                (0.04, 1.5, 0.04, 0.5, -0.5),
                5.4423136806195669729,
                0.61225511551537992441,
                0.56062812313850501069,
            ),
            (
                (100.0, 90.0, 0.02, 1.0),
                (0.09, 2.0, 0.05, 0.3, -0.7),
                16.904766475000282056,
                0.76654660514652565983,
                0.67729913295233255604,
            ),
            (
                (100.0, 110.0, 0.0, 0.25),
                (0.02, 3.0, 0.03, 0.8, -0.3),
                0.30185056645939389148,
                0.069391328898343234383,
                0.060338930212499359517,
            ),
        ];
        for ((s, k, r, t), (v0, ka, th, sg, rho), price, p1, p2) in cases {
            let p = HestonParams::new(v0, ka, th, sg, rho).unwrap();
            let res = heston_call(&p, s, k, r, t).unwrap();
            assert!((res.price - price).abs() < 1e-8 * s, "{} vs {price}", res.price);
            let (a, b) = res.probabilities.unwrap();
            assert!((a - p1).abs() < 1e-9 && (b - p2).abs() < 1e-9);
            let pj = heston_pj(&p, s, k, r, t, Measure::P2).unwrap();
            assert!((pj.value - p2).abs() < 1e-9);
        }
    }

    #[test]
    fn cf_at_origin_and_conjugate_symmetry() {
        let p = base();
        for m in [Measure::P1, Measure::P2] {
            let f = heston_cf(1e-9, &p, 100.0, 0.01, 1.0, m).unwrap();
            assert!((f.norm() - 1.0).abs() < 1e-8);
            for i in 1..=100 {
                let phi = 0.37 * i as f64;
                let a = heston_cf(phi, &p, 100.0, 0.01, 1.0, m).unwrap();
                let b = heston_cf(-phi, &p, 100.0, 0.01, 1.0, m).unwrap();
                assert!((a - b.conj()).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn cf_tends_to_black_scholes_when_vol_of_vol_vanishes() {
        let p = HestonParams::new(0.04, 1.3, 0.04, 1e-7, -0.4).unwrap();
        let (s, r, t, v) = (100.0_f64, 0.02, 0.75, 0.04);
        for phi in [0.5, 1.0, 5.0] {
            for (m, u) in [(Measure::P1, 0.5), (Measure::P2, -0.5)] {
                // log S_T ~ N(ln S + (r + u v) t, v t) under the j-th measure
                let mean = s.ln() + (r + u * v) * t;
                let bs = Complex64::new(-0.5 * phi * phi * v * t, phi * mean).exp();
                let h = heston_cf(phi, &p, s, r, t, m).unwrap();
                assert!((h - bs).norm() < 1e-6, "phi={phi} {m:?}: {h} vs {bs}");
            }
        }
    }

    #[test]
    fn probabilities_reduce_to_normal_cdfs() {
        let p = HestonParams::new(0.04, 2.0, 0.04, 1e-6, -0.3).unwrap();
        let (s, k, r, t) = (100.0_f64, 105.0_f64, 0.01, 0.5_f64);
        let d1 = ((s / k).ln() + (r + 0.02) * t) / (0.2 * t.sqrt());
        let d2 = d1 - 0.2 * t.sqrt();
        let p1 = heston_pj(&p, s, k, r, t, Measure::P1).unwrap();
        let p2 = heston_pj(&p, s, k, r, t, Measure::P2).unwrap();
        assert!((p1.value - norm_cdf(d1)).abs() < 1e-6);
        assert!((p2.value - norm_cdf(d2)).abs() < 1e-6);
        let c = heston_call(&p, s, k, r, t).unwrap();
        assert!((c.price - bs_call(s, k, r, t, 0.2).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn extreme_strikes() {
        let p = base();
        let deep_itm = heston_pj(&p, 100.0, 1e-3, 0.01, 1.0, Measure::P1).unwrap();
        assert!((deep_itm.value - 1.0).abs() < 1e-6);
        let deep_otm = heston_pj(&p, 100.0, 1e4, 0.01, 1.0, Measure::P2).unwrap();
        assert!(deep_otm.value < 1e-6);
        let c = heston_call(&p, 100.0, 1e-6, 0.01, 1.0).unwrap();
        assert!((c.price - 100.0).abs() < 1e-8 * 100.0);
    }

    #[test]
    fn strike_ladder_matches_single_strike_pricing() {
        let p = base();
        let strikes: Vec<f64> = (0..10).map(|i| 80.0 + 5.0 * i as f64).collect();
        let ladder = heston_calls(&p, 100.0, &strikes, 0.01, 0.4).unwrap();
        for (k, res) in strikes.iter().zip(&ladder) {
            let single = heston_call(&p, 100.0, *k, 0.01, 0.4).unwrap();
            assert!((single.price - res.price).abs() < 1e-8 * 100.0);
        }
    }

    #[test]
    fn long_maturity_has_no_branch_jumps() {
        // strongly oscillating exponent at long maturity; textbook form jumps here
        let p = HestonParams::new(0.05, 0.3, 0.2, 1.5, -0.9).unwrap();
        let mut prev: Option<f64> = None;
        for i in 0..40 {
            let k = 60.0 + 2.0 * i as f64;
            let res = heston_call(&p, 100.0, k, 0.0, 15.0).unwrap();
            let (a, b) = res.probabilities.unwrap();
            for x in [a, b] {
                assert!((-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&x), "K={k}: {x}");
            }
            if let Some(pv) = prev {
                assert!(res.raw_price <= pv + 1e-8);
            }
            prev = Some(res.raw_price);
        }
    }
}
