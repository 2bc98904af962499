//! Full-truncation Euler Monte Carlo as an independent check of the Heston quadrature.
//!
//! `cargo run --release --example monte_carlo_oracle`

use volcal::oracle_mc::{mc_heston_calls, McConfig};
use volcal::pricing_heston::{heston_calls, HestonParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = HestonParams::new(0.04, 2.0, 0.05, 0.4, -0.6)?;
    let strikes = [90.0, 100.0, 110.0];
    let cfg = McConfig { n_paths: 40_000, ..McConfig::default() };
    let mc = mc_heston_calls(&p, 100.0, &strikes, 0.02, 0.5, &cfg)?;
    let quad = heston_calls(&p, 100.0, &strikes, 0.02, 0.5)?;
    for ((k, m), q) in strikes.iter().zip(&mc).zip(&quad) {
        let z = (m.price - q.price) / m.stderr;
        println!("K={k:>5}  quadrature {:.5}  mc {:.5} +/- {:.5}  ({z:+.2} stderr)", q.price, m.price, m.stderr);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
