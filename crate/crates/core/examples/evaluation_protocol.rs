//! The full comparison: calibrate BS, Heston and MSV on the in-sample half of a
//! noisy synthetic dataset, then report in- and out-of-sample errors.
//!
//! `cargo run --release --example evaluation_protocol`

use volcal::calibration::CalibrationConfig;
use volcal::cli::render_evaluation;
use volcal::evaluation::run_protocol;
use volcal::pricing_heston::HestonParams;
use volcal::synthetic::{noisy_synthetic_dataset, GridSpec};
use volcal::{Model, ModelParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let truth = ModelParams::Heston(HestonParams::new(0.05, 2.0, 0.06, 0.5, -0.7)?);
    let ds = noisy_synthetic_dataset(&truth, &GridSpec::default(), 0.01, 3)?;
    let budget = CalibrationConfig { n_starts: 2, max_evals: 600, seed: 3, ..CalibrationConfig::new(Model::Bs) };
    let run = run_protocol(&ds, &budget)?;
    print!("{}", render_evaluation(&run.evaluation));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
