//! Heston calls by Fourier inversion, with the quadrature diagnostics.
//!
//! `cargo run --example heston_pricing`

use volcal::pricing_heston::{heston_call, heston_calls, HestonParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = HestonParams::new(0.04, 1.5, 0.04, 0.5, -0.5)?;
    println!("Feller ratio 2*kappa*theta/sigma^2 = {:.3}", p.feller_ratio());

    let one = heston_call(&p, 100.0, 100.0, 0.01, 0.5)?;
    let (p1, p2) = one.probabilities.unwrap_or_default();
    println!(
        "ATM 6m call {:.8} (P1 {:.6}, P2 {:.6}, {} nodes on [0, {}])",
        one.price,
        p1,
        p2,
        one.quadrature_nodes.unwrap_or(0),
        one.phi_max.unwrap_or(0.0)
    );

    // one characteristic-function pass prices a whole strike ladder
    let strikes: Vec<f64> = (0..9).map(|i| 80.0 + 5.0 * i as f64).collect();
    for (k, res) in strikes.iter().zip(heston_calls(&p, 100.0, &strikes, 0.01, 1.0)?) {
        println!("K={k:>6}  1y call {:.6}", res.price);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
