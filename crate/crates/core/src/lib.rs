//! European call pricing under Black-Scholes, Heston and a moment-expansion
//! stochastic volatility model ("MSV"), with least-squares calibration,
//! in/out-of-sample error reporting and Monte-Carlo reference prices.
//!
//! ```
//! use volcal::pricing_bs::bs_call;
//! let c = bs_call(100.0, 100.0, 0.0, 1.0, 0.2).unwrap();
//! assert!((c - 7.9656).abs() < 1e-4);
//! ```

#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod calibration;
pub mod cli;
pub mod error;
pub mod evaluation;
pub mod market_data;
pub mod model;
pub mod oracle_mc;
pub mod pricing_bs;
pub mod pricing_heston;
pub mod pricing_msv;
pub mod quadrature;
pub mod synthetic;

pub use error::{Error, Result};
pub use model::{Model, ModelParams, PriceResult};
