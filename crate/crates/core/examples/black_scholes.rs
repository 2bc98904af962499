//! Black-Scholes prices and the variance-rate derivatives used by the MSV expansion.
//!
//! `cargo run --example black_scholes`

use volcal::pricing_bs::{bs_call, bs_variance_derivative, norm_cdf};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (s, r, tau, sigma) = (100.0, 0.01, 0.5, 0.2);
    println!("N(1.96) = {:.12}", norm_cdf(1.96));
    println!("{:>8} {:>12} {:>12} {:>12}", "strike", "call", "dC/dv", "d2C/dv2");
    for k in [80.0, 90.0, 100.0, 110.0, 120.0] {
        let c = bs_call(s, k, r, tau, sigma)?;
        let d1 = bs_variance_derivative(s, k, r, tau, sigma * sigma, 1)?;
        let d2 = bs_variance_derivative(s, k, r, tau, sigma * sigma, 2)?;
        println!("{k:>8} {c:>12.6} {d1:>12.4} {d2:>12.4}");
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
