//! Parsing a quote file and splitting it into in-sample and out-of-sample halves.
//!
//! `cargo run --example quotes_csv`

use volcal::market_data::{parse_quotes, split_in_out};

const QUOTES: &str = "\
quote_id,trade_date,spot,strike,expiry_date,rate,mid_price
c1,2017-03-07,2368.39,2300,2017-04-21,0.0095,84.10
c2,2017-03-07,2368.39,2350,2017-04-21,0.0095,44.05
c3,2017-03-07,2368.39,2400,2017-04-21,0.0095,15.35
c4,2017-03-07,2368.39,2350,2017-06-16,0.0105,67.20
";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ds = parse_quotes(QUOTES)?;
    println!("{}: {} quotes", ds.label, ds.len());
    for q in &ds.quotes {
        println!("  {} K={} tau={:.4}y mid={}", q.quote_id, q.strike, q.tau, q.mid_price);
    }
    let (ins, outs) = split_in_out(&ds)?;
    println!("{} has {} quotes, {} has {}", ins.label, ins.len(), outs.label, outs.len());

    match parse_quotes("quote_id,trade_date,spot,strike,tau_years,rate,mid_price\nbad,2017-03-07,100,90,0.5,0.01,120\n")
    {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
