//! Error metrics, per-dataset error reports, BS-vs-stochastic comparison rows
//! and worst-value counts.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::calibration::{calibrate, CalibrationConfig, CalibrationResult};
use crate::error::{Error, Result};
use crate::market_data::{split_in_out, Dataset};
use crate::model::{Model, ModelParams};

fn check_lengths(model: &[f64], market: &[f64]) -> Result<()> {
    if model.len() != market.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} model vs {} market prices",
            model.len(),
            market.len()
        )));
    }
    if model.is_empty() {
        return Err(Error::invalid("no prices to compare"));
    }
    Ok(())
}

/// `|model - market| / market`.
pub fn relative_error(model: f64, market: f64) -> Result<f64> {
    if market.is_nan() || market <= 0.0 {
        return Err(Error::invalid(format!("market price must be > 0 for relative error, got {market}")));
    }
    Ok((model - market).abs() / market)
}

/// Mean relative absolute error, as a plain fraction.
pub fn mrae(model_prices: &[f64], market_prices: &[f64]) -> Result<f64> {
    check_lengths(model_prices, market_prices)?;
    let mut total = 0.0;
    for (&m, &p) in model_prices.iter().zip(market_prices) {
        total += relative_error(m, p)?;
    }
    Ok(total / model_prices.len() as f64)
}

/// Root mean squared price error.
pub fn rmse(model_prices: &[f64], market_prices: &[f64]) -> Result<f64> {
    check_lengths(model_prices, market_prices)?;
    let sse: f64 = model_prices.iter().zip(market_prices).map(|(m, p)| (m - p).powi(2)).sum();
    Ok((sse / model_prices.len() as f64).sqrt())
}

/// 0 when the stochastic model is at least as accurate as Black-Scholes, 1 otherwise.
pub fn compare_dummy(bs_err: f64, sv_err: f64) -> u8 {
    if sv_err <= bs_err {
        0
    } else {
        1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sample {
    In,
    Out,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub quote_id: String,
    pub sample: Sample,
    pub real_price: f64,
    pub bs_price: f64,
    pub sv_price: f64,
    pub bs_err: f64,
    pub sv_err: f64,
    pub dummy: u8,
}

impl ComparisonRow {
    pub fn new(quote_id: impl Into<String>, sample: Sample, real: f64, bs: f64, sv: f64) -> Result<Self> {
        let bs_err = relative_error(bs, real)?;
        let sv_err = relative_error(sv, real)?;
        Ok(ComparisonRow {
            quote_id: quote_id.into(),
            sample,
            real_price: real,
            bs_price: bs,
            sv_price: sv,
            bs_err,
            sv_err,
            dummy: compare_dummy(bs_err, sv_err),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Metric {
    #[serde(rename = "MRAE-I")]
    MraeIn,
    #[serde(rename = "RMSE-I")]
    RmseIn,
    #[serde(rename = "MRAE-O")]
    MraeOut,
    #[serde(rename = "RMSE-O")]
    RmseOut,
}

impl Metric {
    pub fn sample(self) -> Sample {
        match self {
            Metric::MraeIn | Metric::RmseIn => Sample::In,
            Metric::MraeOut | Metric::RmseOut => Sample::Out,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Metric::MraeIn => "MRAE-I",
            Metric::RmseIn => "RMSE-I",
            Metric::MraeOut => "MRAE-O",
            Metric::RmseOut => "RMSE-O",
        }
    }
}

/// One line of the comparison table: a metric on one dataset for BS, Heston and MSV (in that order).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub dataset_label: String,
    pub metric: Metric,
    pub values: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WorstCounts {
    /// Indexed BS, Heston, MSV.
    pub in_sample: [usize; 3],
    pub out_sample: [usize; 3],
}

impl WorstCounts {
    pub fn total(&self) -> usize {
        self.in_sample.iter().chain(&self.out_sample).sum()
    }

    pub fn merge(&mut self, other: &WorstCounts) {
        for i in 0..3 {
            self.in_sample[i] += other.in_sample[i];
            self.out_sample[i] += other.out_sample[i];
        }
    }
}

/// Blames the largest value in each row. Ties blame BS, then Heston, then MSV.
pub fn worst_value_counts(rows: &[MetricRow]) -> Result<WorstCounts> {
    let mut counts = WorstCounts::default();
    for row in rows {
        if row.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite {} value in row for {}",
                row.metric.label(),
                row.dataset_label
            )));
        }
        let mut worst = 0;
        for i in 1..3 {
            if row.values[i] > row.values[worst] {
                worst = i;
            }
        }
        match row.metric.sample() {
            Sample::In => counts.in_sample[worst] += 1,
            Sample::Out => counts.out_sample[worst] += 1,
        }
    }
    Ok(counts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelErrors {
    pub model: Model,
    pub mrae_in: f64,
    pub rmse_in: f64,
    pub mrae_out: f64,
    pub rmse_out: f64,
    /// Absent for Black-Scholes.
    pub calib_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub dataset_label: String,
    /// BS, Heston, MSV in that order.
    pub models: Vec<ModelErrors>,
}

impl ErrorReport {
    pub fn metric_rows(&self) -> Vec<MetricRow> {
        let pick =
            |f: fn(&ModelErrors) -> f64| -> [f64; 3] { [f(&self.models[0]), f(&self.models[1]), f(&self.models[2])] };
        vec![
            MetricRow {
                dataset_label: self.dataset_label.clone(),
                metric: Metric::MraeIn,
                values: pick(|m| m.mrae_in),
            },
            MetricRow {
                dataset_label: self.dataset_label.clone(),
                metric: Metric::RmseIn,
                values: pick(|m| m.rmse_in),
            },
            MetricRow {
                dataset_label: self.dataset_label.clone(),
                metric: Metric::MraeOut,
                values: pick(|m| m.mrae_out),
            },
            MetricRow {
                dataset_label: self.dataset_label.clone(),
                metric: Metric::RmseOut,
                values: pick(|m| m.rmse_out),
            },
        ]
    }

    pub fn model(&self, model: Model) -> Option<&ModelErrors> {
        self.models.iter().find(|m| m.model == model)
    }
}

/// Fitted parameters of one model plus its calibration time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelFit {
    pub params: ModelParams,
    pub calib_seconds: Option<f64>,
}

fn ordered_fits(fits: &[ModelFit]) -> Result<[ModelFit; 3]> {
    let find = |m: Model| -> Result<ModelFit> {
        let mut it = fits.iter().filter(|f| f.params.model() == m);
        let first = it.next().ok_or_else(|| Error::invalid(format!("missing {m} fit")))?;
        if it.next().is_some() {
            return Err(Error::invalid(format!("more than one {m} fit")));
        }
        Ok(*first)
    };
    Ok([find(Model::Bs)?, find(Model::Heston)?, find(Model::Msv)?])
}

fn split_base(label: &str, suffix: &str) -> Option<String> {
    label.strip_suffix(suffix).map(str::to_string)
}

/// Checks that `in_ds`/`out_ds` are the two halves of one split.
fn check_halves(in_ds: &Dataset, out_ds: &Dataset) -> Result<String> {
    let (Some(a), Some(b)) = (split_base(&in_ds.label, "/in"), split_base(&out_ds.label, "/out")) else {
        return Err(Error::invalid(format!("'{}'/'{}' are not in/out halves of a split", in_ds.label, out_ds.label)));
    };
    if a != b {
        return Err(Error::invalid(format!("halves come from different datasets ('{a}' vs '{b}')")));
    }
    let ids: HashSet<&str> = in_ds.quotes.iter().map(|q| q.quote_id.as_str()).collect();
    if let Some(q) = out_ds.quotes.iter().find(|q| ids.contains(q.quote_id.as_str())) {
        return Err(Error::invalid(format!("quote {} appears in both halves", q.quote_id)));
    }
    Ok(a)
}

/// In-sample metrics on `in_ds`, out-of-sample metrics by pricing `out_ds`
/// with the same (in-sample fitted) parameters.
pub fn build_error_report(in_ds: &Dataset, out_ds: &Dataset, fits: &[ModelFit]) -> Result<ErrorReport> {
    let label = check_halves(in_ds, out_ds)?;
    if out_ds.is_empty() {
        return Err(Error::invalid("out-of-sample half is empty"));
    }
    let fits = ordered_fits(fits)?;
    let market_in = in_ds.mid_prices();
    let market_out = out_ds.mid_prices();
    let mut models = Vec::with_capacity(3);
    for fit in fits {
        let pin = fit.params.price_dataset(in_ds)?;
        let pout = fit.params.price_dataset(out_ds)?;
        models.push(ModelErrors {
            model: fit.params.model(),
            mrae_in: mrae(&pin, &market_in)?,
            rmse_in: rmse(&pin, &market_in)?,
            mrae_out: mrae(&pout, &market_out)?,
            rmse_out: rmse(&pout, &market_out)?,
            calib_seconds: if fit.params.model() == Model::Bs { None } else { fit.calib_seconds },
        });
    }
    Ok(ErrorReport { dataset_label: label, models })
}

/// Everything produced for one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub report: ErrorReport,
    pub heston_rows: Vec<ComparisonRow>,
    pub msv_rows: Vec<ComparisonRow>,
    pub worst_counts: WorstCounts,
}

/// Splits `ds`, builds the error report and per-quote comparison rows from fits
/// that were calibrated on the in-sample half.
pub fn evaluate(ds: &Dataset, fits: &[ModelFit]) -> Result<Evaluation> {
    let (in_ds, out_ds) = split_in_out(ds)?;
    let report = build_error_report(&in_ds, &out_ds, fits)?;
    let [bs, heston, msv] = ordered_fits(fits)?;
    let mut heston_rows = Vec::new();
    let mut msv_rows = Vec::new();
    for (half, sample) in [(&in_ds, Sample::In), (&out_ds, Sample::Out)] {
        let pb = bs.params.price_dataset(half)?;
        let ph = heston.params.price_dataset(half)?;
        let pm = msv.params.price_dataset(half)?;
        for (i, q) in half.quotes.iter().enumerate() {
            heston_rows.push(ComparisonRow::new(&q.quote_id, sample, q.mid_price, pb[i], ph[i])?);
            msv_rows.push(ComparisonRow::new(&q.quote_id, sample, q.mid_price, pb[i], pm[i])?);
        }
    }
    let worst_counts = worst_value_counts(&report.metric_rows())?;
    Ok(Evaluation { report, heston_rows, msv_rows, worst_counts })
}

/// Calibration results of a full protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolRun {
    pub calibrations: Vec<CalibrationResult>,
    pub evaluation: Evaluation,
}

/// Calibrates all three models on the in-sample half of `ds` and evaluates them.
/// `base` supplies the optimiser budget; its `model` field is overridden.
pub fn run_protocol(ds: &Dataset, base: &CalibrationConfig) -> Result<ProtocolRun> {
    let (in_ds, _) = split_in_out(ds)?;
    let mut calibrations = Vec::with_capacity(3);
    let mut fits = Vec::with_capacity(3);
    for model in Model::ALL {
        let res = calibrate(&in_ds, &CalibrationConfig { model, ..*base })?;
        fits.push(ModelFit { params: res.params, calib_seconds: Some(res.elapsed_seconds) });
        calibrations.push(res);
    }
    Ok(ProtocolRun { calibrations, evaluation: evaluate(ds, &fits)? })
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.2}")).unwrap_or_else(|| "Nil".into())
}

/// Error-metric table: rows MRAE-I, RMSE-I, Time, MRAE-O, RMSE-O; MRAE shown
/// as a fraction and as a percentage.
pub fn render_report(report: &ErrorReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", report.dataset_label);
    let _ = writeln!(s, "{:<10} {:>14} {:>14} {:>14}", "Metric", "BS", "Heston", "MSV");
    let row = |s: &mut String, name: &str, f: &dyn Fn(&ModelErrors) -> String| {
        let _ = writeln!(
            s,
            "{:<10} {:>14} {:>14} {:>14}",
            name,
            f(&report.models[0]),
            f(&report.models[1]),
            f(&report.models[2])
        );
    };
    row(&mut s, "MRAE-I", &|m| format!("{:.6}", m.mrae_in));
    row(&mut s, "MRAE-I %", &|m| format!("{:.4}", 100.0 * m.mrae_in));
    row(&mut s, "RMSE-I", &|m| format!("{:.6}", m.rmse_in));
    row(&mut s, "Time", &|m| fmt_opt(m.calib_seconds));
    row(&mut s, "MRAE-O", &|m| format!("{:.6}", m.mrae_out));
    row(&mut s, "MRAE-O %", &|m| format!("{:.4}", 100.0 * m.mrae_out));
    row(&mut s, "RMSE-O", &|m| format!("{:.6}", m.rmse_out));
    s
}

/// Per-quote table: real, BS, Heston, MSV prices, then error/error/compare for each stochastic model.
pub fn render_comparison(heston_rows: &[ComparisonRow], msv_rows: &[ComparisonRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<10} {:>4} {:>11} {:>11} {:>11} {:>11} | {:>8} {:>8} {:>3} | {:>8} {:>8} {:>3}",
        "quote", "smp", "Real", "BS", "Heston", "MSV", "BS err", "H err", "cmp", "BS err", "M err", "cmp"
    );
    for (h, m) in heston_rows.iter().zip(msv_rows) {
        let smp = match h.sample {
            Sample::In => "in",
            Sample::Out => "out",
        };
        let _ = writeln!(
            s,
            "{:<10} {:>4} {:>11.4} {:>11.4} {:>11.4} {:>11.4} | {:>8.4} {:>8.4} {:>3} | {:>8.4} {:>8.4} {:>3}",
            h.quote_id,
            smp,
            h.real_price,
            h.bs_price,
            h.sv_price,
            m.sv_price,
            h.bs_err,
            h.sv_err,
            h.dummy,
            m.bs_err,
            m.sv_err,
            m.dummy
        );
    }
    s
}

pub fn render_worst_counts(counts: &WorstCounts) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<8} {:>10} {:>11}", "Model", "In Sample", "Out Sample");
    for (i, m) in Model::ALL.iter().enumerate() {
        let _ = writeln!(s, "{:<8} {:>10} {:>11}", m.display_name(), counts.in_sample[i], counts.out_sample[i]);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round4(x: f64) -> f64 {
        (x * 1e4).round() / 1e4
    }

    #[test]
    fn relative_error_rows_match_published_arithmetic() {
        let bs = mrae(&[2362.80], &[2366.00]).unwrap();
        let heston = mrae(&[2363.32], &[2366.00]).unwrap();
        assert_eq!(round4(bs), 0.0014);
        assert_eq!(round4(heston), 0.0011);
        assert_eq!(compare_dummy(0.0014, 0.0011), 0);
        let row = ComparisonRow::new("spx", Sample::In, 2366.00, 2362.80, 2363.32).unwrap();
        assert_eq!(row.dummy, 0);
    }

    #[test]
    fn metric_basics() {
        let m = [1.0, 2.0, 3.0];
        assert_eq!(mrae(&m, &m).unwrap(), 0.0);
        assert_eq!(rmse(&m, &m).unwrap(), 0.0);
        let shifted: Vec<f64> = m.iter().map(|x| x + 0.25).collect();
        assert!((rmse(&shifted, &m).unwrap() - 0.25).abs() < 1e-15);
        assert!(mrae(&[1.0], &[1.0, 2.0]).is_err());
        assert!(rmse(&[], &[]).is_err());
        assert!(mrae(&[1.0], &[0.0]).is_err());
    }

    #[test]
    fn dummy_rules() {
        assert_eq!(compare_dummy(0.0011, 0.0014), 1);
        assert_eq!(compare_dummy(0.3, 0.3), 0);
    }

    #[test]
    fn worst_counts_rules() {
        let row = |v: [f64; 3], metric| MetricRow { dataset_label: "d".into(), metric, values: v };
        let c = worst_value_counts(&[row([16.18, 0.94, 4.65], Metric::MraeIn)]).unwrap();
        assert_eq!(c.in_sample, [1, 0, 0]);
        let c = worst_value_counts(&[row([1.0, 1.0, 1.0], Metric::RmseOut)]).unwrap();
        assert_eq!(c.out_sample, [1, 0, 0]);
        let c = worst_value_counts(&[row([1.0, 2.0, 2.0], Metric::RmseOut)]).unwrap();
        assert_eq!(c.out_sample, [0, 1, 0]);
        assert!(worst_value_counts(&[row([1.0, f64::NAN, 2.0], Metric::RmseOut)]).is_err());
    }

    #[test]
    fn report_requires_matching_halves() {
        use crate::market_data::parse_quotes;
        let text = "quote_id,trade_date,spot,strike,tau_years,rate,mid_price\na,2017-03-07,100,90,0.5,0.01,12\nb,2017-03-07,100,100,0.5,0.01,6\n";
        let ds = parse_quotes(text).unwrap();
        let (i, o) = split_in_out(&ds).unwrap();
        let fits: Vec<ModelFit> = Model::ALL
            .iter()
            .map(|&m| ModelFit { params: crate::calibration::default_start(m), calib_seconds: Some(1.0) })
            .collect();
        assert!(build_error_report(&i, &o, &fits).is_ok());
        assert!(build_error_report(&o, &i, &fits).is_err());
        assert!(build_error_report(&i, &i.clone().with_label(format!("{}/out", ds.label)), &fits).is_err());
        assert!(build_error_report(&i, &o, &fits[..2]).is_err());
        let r = build_error_report(&i, &o, &fits).unwrap();
        assert_eq!(r.models[0].calib_seconds, None);
        assert_eq!(r.models[1].calib_seconds, Some(1.0));
    }
}
