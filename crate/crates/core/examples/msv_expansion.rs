//! MSV prices by moment expansion at orders 2-4 against the exact lognormal mixture.
//!
//! `cargo run --example msv_expansion`

use volcal::pricing_msv::{mean_variance_rate, msv_call, msv_mixture_oracle, MsvParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = MsvParams::new(0.25, 0.1, 0.18, 2.0, 0.2)?;
    let (s, r, tau) = (100.0, 0.01, 0.75);
    println!("mean variance rate over {tau}y: {:.6}", mean_variance_rate(&p, tau)?);
    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "K", "order 2", "order 3", "order 4", "mixture");
    for k in [85.0, 95.0, 100.0, 105.0, 115.0] {
        let orders: Vec<f64> =
            (2..=4).map(|o| msv_call(&p, s, k, r, tau, o).map(|x| x.price)).collect::<Result<_, _>>()?;
        let exact = msv_mixture_oracle(&p, s, k, r, tau)?.price;
        println!("{k:>6} {:>12.6} {:>12.6} {:>12.6} {exact:>12.6}", orders[0], orders[1], orders[2]);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
