//! Fits MSV to a Heston-generated quote grid and reports the price-space fit.
//!
//! `cargo run --release --example calibration`

use volcal::calibration::{calibrate, CalibrationConfig};
use volcal::evaluation::rmse;
use volcal::pricing_heston::HestonParams;
use volcal::synthetic::{synthetic_dataset, GridSpec};
use volcal::{Model, ModelParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let truth = ModelParams::Heston(HestonParams::new(0.05, 2.0, 0.06, 0.4, -0.6)?);
    let ds = synthetic_dataset(&truth, &GridSpec::default())?;
    for model in [Model::Bs, Model::Msv] {
        let cfg = CalibrationConfig { n_starts: 2, max_evals: 800, seed: 1, ..CalibrationConfig::new(model) };
        let res = calibrate(&ds, &cfg)?;
        let fit = rmse(&res.params.price_dataset(&ds)?, &ds.mid_prices())?;
        println!(
            "{:<6} rmse {fit:.4}  evals {:>4}  {:.3}s  {}",
            model.display_name(),
            res.n_evals,
            res.elapsed_seconds,
            serde_json::to_string(&res.params)?
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
