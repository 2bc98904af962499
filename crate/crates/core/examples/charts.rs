//! Writes the price scatter and error-bar SVGs for an evaluation into a temporary directory.
//!
//! `cargo run --release --example charts`

use volcal::cli::charts::{error_bars_svg, price_scatter_svg, ErrorChartData, PriceChartData};
use volcal::evaluation::{evaluate, ModelFit};
use volcal::pricing_bs::BsParams;
use volcal::pricing_heston::HestonParams;
use volcal::pricing_msv::MsvParams;
use volcal::synthetic::{noisy_synthetic_dataset, GridSpec};
use volcal::ModelParams;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let heston = ModelParams::Heston(HestonParams::new(0.05, 2.0, 0.06, 0.5, -0.7)?);
    let ds = noisy_synthetic_dataset(&heston, &GridSpec::default(), 0.01, 4)?;
    let fits =
        [ModelParams::Bs(BsParams::new(0.23)?), heston, ModelParams::Msv(MsvParams::new(0.22, 0.1, 0.24, 1.5, 0.2)?)]
            .map(|params| ModelFit { params, calib_seconds: None });
    let ev = evaluate(&ds, &fits)?;

    let dir = std::env::temp_dir().join("volcal-charts");
    std::fs::create_dir_all(&dir)?;
    let prices = dir.join("synthetic_prices.svg");
    let errors = dir.join("synthetic_errors.svg");
    std::fs::write(&prices, price_scatter_svg(&PriceChartData::from_evaluation(&ev)?)?)?;
    std::fs::write(&errors, error_bars_svg(&ErrorChartData::from_evaluation(&ev))?)?;
    println!("wrote {} and {}", prices.display(), errors.display());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
