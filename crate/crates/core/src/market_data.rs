//! Option quote ingestion, validation and the in/out-of-sample split.
//!
//! CSV schema (UTF-8, comma separated, header required):
//!
//! ```text
//! quote_id,trade_date,spot,strike,tau_years,rate,mid_price
//! ```
//!
//! `tau_years` may be replaced by `expiry_date` (ISO-8601), in which case the
//! year fraction is ACT/365 fixed from `trade_date`.

use std::cmp::Ordering;
use std::collections::HashSet;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 7] = ["quote_id", "trade_date", "spot", "strike", "tau_years", "rate", "mid_price"];
const EXPIRY_HEADER: [&str; 7] = ["quote_id", "trade_date", "spot", "strike", "expiry_date", "rate", "mid_price"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptionKind {
    #[default]
    Call,
}

/// One European call quote on a non-dividend asset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quote {
    pub quote_id: String,
    pub trade_date: NaiveDate,
    pub spot: f64,
    pub strike: f64,
    /// Year fraction to expiry.
    pub tau: f64,
    /// Continuously compounded annual rate.
    pub rate: f64,
    pub mid_price: f64,
    #[serde(default)]
    pub kind: OptionKind,
}

impl Quote {
    pub fn validate(&self) -> Result<()> {
        let fail = |message: String| Err(Error::QuoteInvariant { quote_id: self.quote_id.clone(), message });
        for (name, x) in [
            ("spot", self.spot),
            ("strike", self.strike),
            ("tau", self.tau),
            ("rate", self.rate),
            ("mid_price", self.mid_price),
        ] {
            if !x.is_finite() {
                return fail(format!("{name} is not finite"));
            }
        }
        if self.spot <= 0.0 {
            return fail(format!("spot must be > 0, got {}", self.spot));
        }
        if self.strike <= 0.0 {
            return fail(format!("strike must be > 0, got {}", self.strike));
        }
        if self.tau <= 0.0 {
            return fail(format!("tau must be > 0, got {}", self.tau));
        }
        if self.mid_price < 0.0 {
            return fail(format!("mid_price must be >= 0, got {}", self.mid_price));
        }
        if self.mid_price > self.spot {
            return fail(format!("mid_price {} exceeds spot {}", self.mid_price, self.spot));
        }
        Ok(())
    }

    fn canonical_cmp(&self, other: &Quote) -> Ordering {
        self.tau
            .total_cmp(&other.tau)
            .then(self.strike.total_cmp(&other.strike))
            .then_with(|| self.quote_id.cmp(&other.quote_id))
    }
}

/// Quotes of one trade date, kept in canonical order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub label: String,
    pub quotes: Vec<Quote>,
}

impl Dataset {
    /// Validates every quote, checks the shared trade date and unique ids, and sorts canonically.
    pub fn new(label: impl Into<String>, mut quotes: Vec<Quote>) -> Result<Self> {
        if quotes.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let date = quotes[0].trade_date;
        let mut seen = HashSet::new();
        for q in &quotes {
            q.validate()?;
            if q.trade_date != date {
                return Err(Error::QuoteInvariant {
                    quote_id: q.quote_id.clone(),
                    message: format!("trade_date {} differs from {date}", q.trade_date),
                });
            }
            if !seen.insert(q.quote_id.as_str()) {
                return Err(Error::QuoteInvariant {
                    quote_id: q.quote_id.clone(),
                    message: "duplicate quote_id".into(),
                });
            }
        }
        quotes.sort_by(Quote::canonical_cmp);
        Ok(Dataset { label: label.into(), quotes })
    }

    pub fn len(&self) -> usize {
        self.quotes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotes.is_empty()
    }

    pub fn trade_date(&self) -> Option<NaiveDate> {
        self.quotes.first().map(|q| q.trade_date)
    }

    pub fn mid_prices(&self) -> Vec<f64> {
        self.quotes.iter().map(|q| q.mid_price).collect()
    }

    pub fn mean_spot(&self) -> f64 {
        self.quotes.iter().map(|q| q.spot).sum::<f64>() / self.quotes.len() as f64
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Canonical CSV form (`tau_years` header, shortest round-trip floats).
    pub fn to_csv(&self) -> String {
        let mut out = CSV_HEADER.join(",");
        out.push('\n');
        for q in &self.quotes {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                q.quote_id,
                q.trade_date.format("%Y-%m-%d"),
                q.spot,
                q.strike,
                q.tau,
                q.rate,
                q.mid_price
            ));
        }
        out
    }
}

fn parse_field<T: std::str::FromStr>(row: usize, name: &str, raw: &str) -> Result<T> {
    raw.trim().parse().map_err(|_| Error::MalformedRow { row, message: format!("cannot parse {name} from '{raw}'") })
}

fn parse_date(row: usize, name: &str, raw: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(raw.trim(), "%Y-%m-%d")
        .map_err(|_| Error::MalformedRow { row, message: format!("{name} '{raw}' is not YYYY-MM-DD") })
}

/// Parses a quote file. The dataset label defaults to the trade date.
///
/// Row numbers in errors are 1-based file lines (the header is line 1).
pub fn parse_quotes(csv_text: &str) -> Result<Dataset> {
    if csv_text.trim().is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(csv_text.as_bytes());
    let header = reader.headers().map_err(|e| Error::MalformedRow { row: 1, message: e.to_string() })?.clone();
    let names: Vec<&str> = header.iter().collect();
    let uses_expiry = if names == CSV_HEADER {
        false
    } else if names == EXPIRY_HEADER {
        true
    } else {
        return Err(Error::MalformedRow {
            row: 1,
            message: format!(
                "header must be '{}' (or with expiry_date), got '{}'",
                CSV_HEADER.join(","),
                names.join(",")
            ),
        });
    };
    let mut quotes = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| Error::MalformedRow { row, message: e.to_string() })?;
        if record.len() != 7 {
            return Err(Error::MalformedRow { row, message: format!("expected 7 fields, got {}", record.len()) });
        }
        let quote_id = record[0].to_string();
        if quote_id.is_empty() {
            return Err(Error::MalformedRow { row, message: "empty quote_id".into() });
        }
        let trade_date = parse_date(row, "trade_date", &record[1])?;
        let tau = if uses_expiry {
            let expiry = parse_date(row, "expiry_date", &record[4])?;
            (expiry - trade_date).num_days() as f64 / 365.0
        } else {
            parse_field(row, "tau_years", &record[4])?
        };
        let q = Quote {
            quote_id,
            trade_date,
            spot: parse_field(row, "spot", &record[2])?,
            strike: parse_field(row, "strike", &record[3])?,
            tau,
            rate: parse_field(row, "rate", &record[5])?,
            mid_price: parse_field(row, "mid_price", &record[6])?,
            kind: OptionKind::Call,
        };
        q.validate()?;
        quotes.push(q);
    }
    if quotes.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let label = quotes[0].trade_date.format("%Y-%m-%d").to_string();
    Dataset::new(label, quotes)
}

/// Even canonical positions go in-sample, odd positions out-of-sample.
pub fn split_in_out(ds: &Dataset) -> Result<(Dataset, Dataset)> {
    if ds.quotes.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let (ins, outs): (Vec<_>, Vec<_>) = ds.quotes.iter().cloned().enumerate().partition(|(i, _)| i % 2 == 0);
    let strip = |v: Vec<(usize, Quote)>| v.into_iter().map(|(_, q)| q).collect::<Vec<_>>();
    Ok((
        Dataset { label: format!("{}/in", ds.label), quotes: strip(ins) },
        Dataset { label: format!("{}/out", ds.label), quotes: strip(outs) },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_ROW: &str =
        "quote_id,trade_date,spot,strike,tau_years,rate,mid_price\nspx-1,2017-03-07,2366.00,2350,0.0822,0.01,24.85\n";

    #[test]
    fn parses_minimal_file() {
        let ds = parse_quotes(ONE_ROW).unwrap();
        assert_eq!(ds.len(), 1);
        let q = &ds.quotes[0];
        assert_eq!(q.quote_id, "spx-1");
        assert_eq!((q.spot, q.strike, q.tau, q.rate, q.mid_price), (2366.0, 2350.0, 0.0822, 0.01, 24.85));
        assert_eq!(ds.label, "2017-03-07");
    }

    #[test]
    fn reports_offending_row() {
        let text = "quote_id,trade_date,spot,strike,tau_years,rate,mid_price\na,2017-03-07,100,90,0.5,0.01,12\nb,2017-03-07,100,-5,0.5,0.01,1\n";
        match parse_quotes(text) {
            Err(Error::QuoteInvariant { quote_id, .. }) => assert_eq!(quote_id, "b"),
            other => panic!("unexpected {other:?}"),
        }
        let text = "quote_id,trade_date,spot,strike,tau_years,rate,mid_price\na,2017-03-07,100,abc,0.5,0.01,12\n";
        match parse_quotes(text) {
            Err(Error::MalformedRow { row, .. }) => assert_eq!(row, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(parse_quotes(""), Err(Error::EmptyDataset)));
        assert!(matches!(
            parse_quotes("quote_id,trade_date,spot,strike,tau_years,rate,mid_price\n"),
            Err(Error::EmptyDataset)
        ));
        let extra =
            "quote_id,trade_date,spot,strike,tau_years,rate,mid_price,bid\na,2017-03-07,100,90,0.5,0.01,12,11\n";
        assert!(matches!(parse_quotes(extra), Err(Error::MalformedRow { row: 1, .. })));
        let above_spot = "quote_id,trade_date,spot,strike,tau_years,rate,mid_price\na,2017-03-07,100,90,0.5,0.01,101\n";
        assert!(matches!(parse_quotes(above_spot), Err(Error::QuoteInvariant { .. })));
        let mixed = "quote_id,trade_date,spot,strike,tau_years,rate,mid_price\na,2017-03-07,100,90,0.5,0.01,12\nb,2017-03-08,100,90,0.5,0.01,12\n";
        assert!(matches!(parse_quotes(mixed), Err(Error::QuoteInvariant { .. })));
        let dup = "quote_id,trade_date,spot,strike,tau_years,rate,mid_price\na,2017-03-07,100,90,0.5,0.01,12\na,2017-03-07,100,95,0.5,0.01,9\n";
        assert!(matches!(parse_quotes(dup), Err(Error::QuoteInvariant { .. })));
        let short = "quote_id,trade_date,spot,strike,tau_years,rate,mid_price\na,2017-03-07,100,90,0.5,0.01\n";
        assert!(matches!(parse_quotes(short), Err(Error::MalformedRow { row: 2, .. })));
    }

    #[test]
    fn expiry_column_uses_act_365() {
        let text =
            "quote_id,trade_date,spot,strike,expiry_date,rate,mid_price\na,2017-03-07,100,90,2017-04-06,0.01,12\n";
        let ds = parse_quotes(text).unwrap();
        assert!((ds.quotes[0].tau - 30.0 / 365.0).abs() < 1e-15);
    }

    #[test]
    fn split_boundaries() {
        let one = parse_quotes(ONE_ROW).unwrap();
        let (i, o) = split_in_out(&one).unwrap();
        assert_eq!((i.len(), o.len()), (1, 0));
        let empty = Dataset { label: "x".into(), quotes: vec![] };
        assert!(split_in_out(&empty).is_err());
    }
}
