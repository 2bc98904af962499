//! Runs every example end to end so they cannot rot.

#[allow(dead_code)]
#[path = "../examples/black_scholes.rs"]
mod black_scholes;
#[allow(dead_code)]
#[path = "../examples/calibration.rs"]
mod calibration;
#[allow(dead_code)]
#[path = "../examples/charts.rs"]
mod charts;
#[allow(dead_code)]
#[path = "../examples/evaluation_protocol.rs"]
mod evaluation_protocol;
#[allow(dead_code)]
#[path = "../examples/heston_pricing.rs"]
mod heston_pricing;
#[allow(dead_code)]
#[path = "../examples/monte_carlo_oracle.rs"]
mod monte_carlo_oracle;
#[allow(dead_code)]
#[path = "../examples/msv_expansion.rs"]
mod msv_expansion;
#[allow(dead_code)]
#[path = "../examples/quotes_csv.rs"]
mod quotes_csv;

#[test]
fn black_scholes_runs() {
    black_scholes::run_example().unwrap();
}

#[test]
fn calibration_runs() {
    calibration::run_example().unwrap();
}

#[test]
fn charts_runs() {
    charts::run_example().unwrap();
}

#[test]
fn evaluation_protocol_runs() {
    evaluation_protocol::run_example().unwrap();
}

#[test]
fn heston_pricing_runs() {
    heston_pricing::run_example().unwrap();
}

#[test]
fn monte_carlo_oracle_runs() {
    monte_carlo_oracle::run_example().unwrap();
}

#[test]
fn msv_expansion_runs() {
    msv_expansion::run_example().unwrap();
}

#[test]
fn quotes_csv_runs() {
    quotes_csv::run_example().unwrap();
}
