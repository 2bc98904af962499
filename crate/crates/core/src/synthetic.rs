//! Synthetic quote grids priced by a chosen model.

use chrono::NaiveDate;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::market_data::{Dataset, OptionKind, Quote};
use crate::model::ModelParams;
use crate::pricing_msv::DEFAULT_ORDER;

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub label: String,
    pub trade_date: NaiveDate,
    pub spot: f64,
    pub rate: f64,
    pub taus: Vec<f64>,
    pub strikes: Vec<f64>,
}

impl Default for GridSpec {
    /// 10 maturities (0.1 to 1.0 years) by 10 strikes (80 to 125) on spot 100.
    fn default() -> Self {
        GridSpec {
            label: "synthetic".into(),
            trade_date: NaiveDate::from_ymd_opt(2017, 3, 7).expect("valid date"),
            spot: 100.0,
            rate: 0.01,
            taus: (1..=10).map(|i| i as f64 / 10.0).collect(),
            strikes: (0..10).map(|i| 80.0 + 5.0 * i as f64).collect(),
        }
    }
}

/// One quote per `(tau, strike)` pair, mid price equal to the model price.
pub fn synthetic_dataset(params: &ModelParams, grid: &GridSpec) -> Result<Dataset> {
    noisy_synthetic_dataset(params, grid, 0.0, 0)
}

/// As [`synthetic_dataset`] with multiplicative Gaussian noise of relative size
/// `rel_noise` on each mid price (clipped into `[0, spot]`).
pub fn noisy_synthetic_dataset(params: &ModelParams, grid: &GridSpec, rel_noise: f64, seed: u64) -> Result<Dataset> {
    let mut quotes = Vec::with_capacity(grid.taus.len() * grid.strikes.len());
    for (ti, &tau) in grid.taus.iter().enumerate() {
        for (ki, &strike) in grid.strikes.iter().enumerate() {
            quotes.push(Quote {
                quote_id: format!("q{ti:02}{ki:02}"),
                trade_date: grid.trade_date,
                spot: grid.spot,
                strike,
                tau,
                rate: grid.rate,
                mid_price: 0.0,
                kind: OptionKind::Call,
            });
        }
    }
    let mut ds = Dataset::new(grid.label.clone(), quotes)?;
    let prices = params.price_quotes(&ds.quotes, DEFAULT_ORDER)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (q, p) in ds.quotes.iter_mut().zip(prices) {
        let z: f64 = if rel_noise > 0.0 { StandardNormal.sample(&mut rng) } else { 0.0 };
        q.mid_price = (p * (1.0 + rel_noise * z)).clamp(0.0, q.spot);
    }
    Ok(ds)
}
