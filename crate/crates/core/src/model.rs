//! Model tags, tagged parameter sets and the common price result.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market_data::{Dataset, Quote};
use crate::pricing_bs::{bs_call, BsParams};
use crate::pricing_heston::{heston_call, heston_calls, HestonParams};
use crate::pricing_msv::{msv_call, MsvParams, DEFAULT_ORDER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Bs,
    Heston,
    Msv,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::Bs, Model::Heston, Model::Msv];

    pub fn name(self) -> &'static str {
        match self {
            Model::Bs => "bs",
            Model::Heston => "heston",
            Model::Msv => "msv",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Model::Bs => "BS",
            Model::Heston => "Heston",
            Model::Msv => "MSV",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bs" | "black-scholes" => Ok(Model::Bs),
            "heston" => Ok(Model::Heston),
            "msv" => Ok(Model::Msv),
            other => Err(Error::invalid(format!("unknown model '{other}'"))),
        }
    }
}

/// Parameters of any of the three models, tagged by model name.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelParams {
    Bs(BsParams),
    Heston(HestonParams),
    Msv(MsvParams),
}

impl ModelParams {
    pub fn model(&self) -> Model {
        match self {
            ModelParams::Bs(_) => Model::Bs,
            ModelParams::Heston(_) => Model::Heston,
            ModelParams::Msv(_) => Model::Msv,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelParams::Bs(p) => p.validate(),
            ModelParams::Heston(p) => p.validate(),
            ModelParams::Msv(p) => p.validate(),
        }
    }

    /// Price of one call. MSV uses the default fourth-order expansion.
    pub fn price(&self, spot: f64, strike: f64, rate: f64, tau: f64) -> Result<f64> {
        self.price_with_order(spot, strike, rate, tau, DEFAULT_ORDER)
    }

    pub fn price_with_order(&self, spot: f64, strike: f64, rate: f64, tau: f64, order: u32) -> Result<f64> {
        match self {
            ModelParams::Bs(p) => bs_call(spot, strike, rate, tau, p.sigma),
            ModelParams::Heston(p) => heston_call(p, spot, strike, rate, tau).map(|r| r.price),
            ModelParams::Msv(p) => msv_call(p, spot, strike, rate, tau, order).map(|r| r.price),
        }
    }

    /// Prices every quote of `quotes`, in order. Heston quotes sharing
    /// `(spot, rate, tau)` are priced as one strike ladder.
    pub fn price_quotes(&self, quotes: &[Quote], order: u32) -> Result<Vec<f64>> {
        self.validate()?;
        let wrap = |q: &Quote, e: Error| Error::Pricing { quote_id: q.quote_id.clone(), source: Box::new(e) };
        match self {
            ModelParams::Heston(p) => {
                let mut out = Vec::with_capacity(quotes.len());
                let mut start = 0;
                while start < quotes.len() {
                    let head = &quotes[start];
                    let mut end = start + 1;
                    while end < quotes.len()
                        && quotes[end].tau == head.tau
                        && quotes[end].spot == head.spot
                        && quotes[end].rate == head.rate
                    {
                        end += 1;
                    }
                    let strikes: Vec<f64> = quotes[start..end].iter().map(|q| q.strike).collect();
                    let prices =
                        heston_calls(p, head.spot, &strikes, head.rate, head.tau).map_err(|e| wrap(head, e))?;
                    out.extend(prices.into_iter().map(|r| r.price));
                    start = end;
                }
                Ok(out)
            }
            _ => quotes
                .iter()
                .map(|q| self.price_with_order(q.spot, q.strike, q.rate, q.tau, order).map_err(|e| wrap(q, e)))
                .collect(),
        }
    }

    pub fn price_dataset(&self, ds: &Dataset) -> Result<Vec<f64>> {
        self.price_quotes(&ds.quotes, DEFAULT_ORDER)
    }
}

/// A model price plus whatever diagnostics the pricer produced.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PriceResult {
    pub price: f64,
    /// Price before clamping into the no-arbitrage band (equal to `price` for exact pricers).
    pub raw_price: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature_nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probabilities: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation_order: Option<u32>,
    /// Taylor terms `[C_BS, term_2, term_3, term_4]` (unused orders are zero).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expansion_terms: Option<[f64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
}

impl PriceResult {
    pub fn exact(price: f64) -> Self {
        PriceResult { price, raw_price: price, ..Default::default() }
    }
}
