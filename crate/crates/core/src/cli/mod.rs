//! The `volcal` command line: `price`, `calibrate`, `evaluate`, `simulate`
//! and `report`.
//!
//! Every subcommand validates its flags and inputs before computing, prints
//! either aligned text or JSON (`--format structured`) and maps failures to
//! exit codes: 2 input error, 3 numerical failure, 4 calibration failure.
//! Structured documents are written with shortest round-trip floats and
//! contain no wall-clock values, so reruns with the same inputs and seed are
//! byte-identical. Calibration timings go to a `.timing.json` sidecar.

pub mod charts;

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::calibration::{calibrate, CalibrationConfig, LossKind};
use crate::error::{Error, Result};
use crate::evaluation::{evaluate, render_comparison, render_report, render_worst_counts, rmse, Evaluation, ModelFit};
use crate::market_data::{parse_quotes, split_in_out, Dataset};
use crate::model::{Model, ModelParams, PriceResult};
use crate::oracle_mc::{mc_bs_call, mc_heston_calls, McConfig, McEstimate};
use crate::pricing_bs::call_intrinsic;
use crate::pricing_heston::heston_calls;
use crate::pricing_msv::{msv_call, msv_mixture_oracle, DEFAULT_ORDER};

use charts::{error_bars_svg, price_scatter_svg, ErrorChartData, PriceChartData};

#[derive(Debug, Parser)]
#[command(name = "volcal", version, about = "Price, calibrate and compare BS, Heston and MSV call models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Seed for start jitter (calibrate) or path streams (simulate).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for output files.
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Price every quote of a file with one model.
    Price(PriceArgs),
    /// Fit one model to a quote file.
    Calibrate(CalibrateArgs),
    /// In/out-of-sample error report from three calibrations.
    Evaluate(EvaluateArgs),
    /// Monte-Carlo or mixture oracle against the closed-form price.
    Simulate(SimulateArgs),
    /// SVG charts from evaluation files.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Args)]
pub struct PriceArgs {
    #[arg(long)]
    pub model: Model,
    /// Parameter file: bare parameters or a calibration record.
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long)]
    pub quotes: PathBuf,
    /// MSV expansion order.
    #[arg(long, default_value_t = DEFAULT_ORDER, value_parser = clap::value_parser!(u32).range(2..=4))]
    pub order: u32,
}

#[derive(Debug, Clone, Args)]
pub struct CalibrateArgs {
    #[arg(long)]
    pub model: Model,
    #[arg(long)]
    pub quotes: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub starts: usize,
    /// Objective evaluations per start.
    #[arg(long, default_value_t = 2000)]
    pub max_evals: usize,
    #[arg(long, default_value_t = DEFAULT_ORDER, value_parser = clap::value_parser!(u32).range(2..=4))]
    pub order: u32,
    /// Fit on every quote instead of the in-sample half.
    #[arg(long)]
    pub no_split: bool,
    #[arg(long, default_value_t = 1e-12)]
    pub tolerance: f64,
    /// Heston Feller penalty weight.
    #[arg(long, default_value_t = 0.0)]
    pub feller_weight: f64,
    #[arg(long, value_enum, default_value_t = LossArg::Sse)]
    pub loss: LossArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LossArg {
    Sse,
    Rmse,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub quotes: PathBuf,
    /// One calibration file per model (repeat three times).
    #[arg(long = "params", required = true, num_args = 1..)]
    pub params: Vec<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub model: Model,
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long, default_value_t = 100.0)]
    pub spot: f64,
    /// Strike; repeat for a ladder.
    #[arg(long = "strike", num_args = 1.., default_values_t = [100.0])]
    pub strikes: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub rate: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    #[arg(long, default_value_t = 200_000)]
    pub paths: usize,
    /// Time steps per year.
    #[arg(long, default_value_t = 250)]
    pub steps: usize,
    #[arg(long)]
    pub no_antithetic: bool,
    #[arg(long, default_value_t = DEFAULT_ORDER, value_parser = clap::value_parser!(u32).range(2..=4))]
    pub order: u32,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Evaluation file(s) written by `evaluate`.
    #[arg(long = "evaluation", required = true, num_args = 1..)]
    pub evaluations: Vec<PathBuf>,
}

/// Where a calibration was fitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitScope {
    InSample,
    All,
}

/// Structured output of `calibrate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRecord {
    pub dataset_label: String,
    pub fitted_on: FitScope,
    pub n_quotes: usize,
    pub config: CalibrationConfig,
    pub params: ModelParams,
    pub loss: f64,
    pub rmse: f64,
    pub n_evals: usize,
    pub total_evals: usize,
    pub start_index: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRecord {
    pub model: Model,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceRow {
    pub quote_id: String,
    pub price: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub within_bounds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceOutput {
    pub model: Model,
    pub dataset_label: String,
    pub rows: Vec<PriceRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationRow {
    pub strike: f64,
    /// Closed-form (BS), quadrature (Heston) or Taylor expansion (MSV) price.
    pub reference: f64,
    /// Monte-Carlo estimate (BS, Heston) or mixture quadrature (MSV).
    pub oracle: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    pub delta: f64,
    /// `PASS` when `|delta| <= 3 stderr`; absent for the deterministic MSV oracle.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    pub diagnostics: PriceResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationOutput {
    pub params: ModelParams,
    pub spot: f64,
    pub rate: f64,
    pub tau: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc: Option<McConfig>,
    pub rows: Vec<SimulationRow>,
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Price(a) => cmd_price(a, g, out),
        Command::Calibrate(a) => cmd_calibrate(a, g, out),
        Command::Evaluate(a) => cmd_evaluate(a, g, out),
        Command::Simulate(a) => cmd_simulate(a, g, out),
        Command::Report(a) => cmd_report(a, g, out, err),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|source| Error::Io { path: "<stdout>".into(), source })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

fn output_dir(g: &GlobalOpts) -> Result<PathBuf> {
    let dir = g.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|source| Error::Io { path: dir.display().to_string(), source })?;
    Ok(dir)
}

/// File-name-safe form of a dataset label.
pub fn file_stem(label: &str) -> String {
    label.chars().map(|c| if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') { c } else { '_' }).collect()
}

pub fn load_quotes(path: &Path) -> Result<Dataset> {
    parse_quotes(&read_text(path)?).map_err(|e| match e {
        Error::Io { .. } => e,
        other => Error::invalid(format!("{}: {other}", path.display())),
    })
}

/// Parameters from either a bare parameter document or a calibration record,
/// plus the record when there is one.
pub fn load_params(path: &Path) -> Result<(ModelParams, Option<CalibrationRecord>)> {
    let text = read_text(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    let (params, record) = if value.get("params").is_some() {
        let rec: CalibrationRecord =
            serde_json::from_value(value).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
        (rec.params, Some(rec))
    } else {
        let p: ModelParams =
            serde_json::from_value(value).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
        (p, None)
    };
    params.validate().map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    Ok((params, record))
}

fn expect_model(params: &ModelParams, model: Model, path: &Path) -> Result<()> {
    if params.model() != model {
        return Err(Error::invalid(format!(
            "{} holds {} parameters, expected {model}",
            path.display(),
            params.model()
        )));
    }
    Ok(())
}

/// `calibration_heston.json` -> `calibration_heston.timing.json`.
pub fn timing_path(record_path: &Path) -> PathBuf {
    record_path.with_extension("timing.json")
}

pub fn cmd_price(a: &PriceArgs, g: &GlobalOpts, out: &mut dyn Write) -> Result<()> {
    let (params, _) = load_params(&a.params)?;
    expect_model(&params, a.model, &a.params)?;
    let ds = load_quotes(&a.quotes)?;
    let prices = params.price_quotes(&ds.quotes, a.order)?;
    let rows: Vec<PriceRow> = ds
        .quotes
        .iter()
        .zip(prices)
        .map(|(q, price)| {
            let lower = call_intrinsic(q.spot, q.strike, q.rate, q.tau);
            PriceRow {
                quote_id: q.quote_id.clone(),
                price,
                lower_bound: lower,
                upper_bound: q.spot,
                within_bounds: price >= lower && price <= q.spot,
            }
        })
        .collect();
    let doc = PriceOutput { model: a.model, dataset_label: ds.label.clone(), rows };
    let json = to_json(&doc)?;
    if let Some(dir) = &g.output_dir {
        fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.display().to_string(), source })?;
        write_file(&dir.join(format!("prices_{}_{}.json", a.model, file_stem(&ds.label))), &json)?;
    }
    match g.format {
        Format::Structured => emit(out, &json),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{:<16} {:>14} {:>8}", "quote_id", a.model.display_name(), "bounds");
            for r in &doc.rows {
                let _ = writeln!(
                    s,
                    "{:<16} {:>14.6} {:>8}",
                    r.quote_id,
                    r.price,
                    if r.within_bounds { "ok" } else { "VIOLATED" }
                );
            }
            emit(out, &s)
        }
    }
}

pub fn cmd_calibrate(a: &CalibrateArgs, g: &GlobalOpts, out: &mut dyn Write) -> Result<()> {
    let cfg = CalibrationConfig {
        model: a.model,
        loss_kind: match a.loss {
            LossArg::Sse => LossKind::Sse,
            LossArg::Rmse => LossKind::Rmse,
        },
        max_evals: a.max_evals,
        n_starts: a.starts,
        tolerance: a.tolerance,
        seed: g.seed.unwrap_or(0),
        feller_penalty_weight: a.feller_weight,
        msv_order: a.order,
    };
    cfg.validate()?;
    let dir = output_dir(g)?;
    let ds = load_quotes(&a.quotes)?;
    let (fit_ds, scope) = if a.no_split { (ds, FitScope::All) } else { (split_in_out(&ds)?.0, FitScope::InSample) };
    let res = calibrate(&fit_ds, &cfg)?;
    let prices = res.params.price_quotes(&fit_ds.quotes, cfg.msv_order)?;
    let record = CalibrationRecord {
        dataset_label: fit_ds.label.clone(),
        fitted_on: scope,
        n_quotes: fit_ds.len(),
        config: cfg,
        params: res.params,
        loss: res.loss,
        rmse: rmse(&prices, &fit_ds.mid_prices())?,
        n_evals: res.n_evals,
        total_evals: res.total_evals,
        start_index: res.start_index,
        converged: res.converged,
    };
    let json = to_json(&record)?;
    let path = dir.join(format!("calibration_{}.json", a.model));
    write_file(&path, &json)?;
    let timing = TimingRecord { model: a.model, elapsed_seconds: res.elapsed_seconds };
    write_file(&timing_path(&path), &to_json(&timing)?)?;
    match g.format {
        Format::Structured => emit(out, &json),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "model        {}", a.model.display_name());
            let _ = writeln!(s, "dataset      {} ({} quotes)", record.dataset_label, record.n_quotes);
            let _ = writeln!(s, "params       {}", serde_json::to_string(&record.params)?);
            let _ = writeln!(s, "loss         {:.6e}", record.loss);
            let _ = writeln!(s, "rmse         {:.6e}", record.rmse);
            let _ = writeln!(s, "evaluations  {} (all starts {})", record.n_evals, record.total_evals);
            let _ = writeln!(s, "start        {}", record.start_index);
            let _ = writeln!(s, "converged    {}", record.converged);
            let _ = writeln!(s, "seconds      {:.3}", timing.elapsed_seconds);
            let _ = writeln!(s, "written      {}", path.display());
            emit(out, &s)
        }
    }
}

pub fn cmd_evaluate(a: &EvaluateArgs, g: &GlobalOpts, out: &mut dyn Write) -> Result<()> {
    if a.params.len() != 3 {
        return Err(Error::invalid(format!("evaluate needs one calibration per model, got {} files", a.params.len())));
    }
    let ds = load_quotes(&a.quotes)?;
    let expected_label = format!("{}/in", ds.label);
    let mut fits = Vec::with_capacity(3);
    for path in &a.params {
        let (params, record) = load_params(path)?;
        if let Some(rec) = &record {
            if rec.fitted_on != FitScope::InSample || rec.dataset_label != expected_label {
                return Err(Error::invalid(format!(
                    "{} was fitted on '{}' ({:?}); evaluation needs a fit on '{expected_label}'",
                    path.display(),
                    rec.dataset_label,
                    rec.fitted_on
                )));
            }
        }
        let timing = timing_path(path);
        let calib_seconds =
            if timing.exists() { Some(from_json::<TimingRecord>(&read_text(&timing)?)?.elapsed_seconds) } else { None };
        fits.push(ModelFit { params, calib_seconds });
    }
    let ev = evaluate(&ds, &fits)?;
    let dir = output_dir(g)?;
    let stem = file_stem(&ds.label);
    let json = to_json(&ev)?;
    let text = render_evaluation(&ev);
    write_file(&dir.join(format!("evaluation_{stem}.json")), &json)?;
    write_file(&dir.join(format!("evaluation_{stem}.txt")), &text)?;
    match g.format {
        Format::Structured => emit(out, &json),
        Format::Text => emit(out, &text),
    }
}

/// Error table, per-quote comparison and worst-value counts.
pub fn render_evaluation(ev: &Evaluation) -> String {
    let mut s = render_report(&ev.report);
    s.push('\n');
    s.push_str(&render_comparison(&ev.heston_rows, &ev.msv_rows));
    s.push('\n');
    s.push_str(&render_worst_counts(&ev.worst_counts));
    s
}

fn mc_row(strike: f64, reference: PriceResult, est: McEstimate) -> SimulationRow {
    SimulationRow {
        strike,
        reference: reference.price,
        oracle: est.price,
        stderr: Some(est.stderr),
        delta: est.price - reference.price,
        verdict: Some(if est.agrees_with(reference.price, 3.0) { "PASS" } else { "FAIL" }.into()),
        diagnostics: reference,
    }
}

pub fn cmd_simulate(a: &SimulateArgs, g: &GlobalOpts, out: &mut dyn Write) -> Result<()> {
    let (params, _) = load_params(&a.params)?;
    expect_model(&params, a.model, &a.params)?;
    let cfg = McConfig {
        n_paths: a.paths,
        steps_per_year: a.steps,
        seed: g.seed.unwrap_or(McConfig::default().seed),
        antithetic: !a.no_antithetic,
    };
    cfg.validate()?;
    if a.strikes.is_empty() {
        return Err(Error::invalid("at least one --strike is required"));
    }
    let (rows, mc) = match params {
        ModelParams::Bs(p) => {
            let mut rows = Vec::with_capacity(a.strikes.len());
            for &k in &a.strikes {
                let exact = PriceResult::exact(params.price(a.spot, k, a.rate, a.tau)?);
                rows.push(mc_row(k, exact, mc_bs_call(p.sigma, a.spot, k, a.rate, a.tau, &cfg)?));
            }
            (rows, Some(cfg))
        }
        ModelParams::Heston(p) => {
            let quad = heston_calls(&p, a.spot, &a.strikes, a.rate, a.tau)?;
            let mc = mc_heston_calls(&p, a.spot, &a.strikes, a.rate, a.tau, &cfg)?;
            let rows = a.strikes.iter().zip(quad).zip(mc).map(|((&k, q), m)| mc_row(k, q, m)).collect();
            (rows, Some(cfg))
        }
        ModelParams::Msv(p) => {
            let mut rows = Vec::with_capacity(a.strikes.len());
            for &k in &a.strikes {
                let taylor = msv_call(&p, a.spot, k, a.rate, a.tau, a.order)?;
                let mix = msv_mixture_oracle(&p, a.spot, k, a.rate, a.tau)?;
                rows.push(SimulationRow {
                    strike: k,
                    reference: taylor.price,
                    oracle: mix.price,
                    stderr: None,
                    delta: mix.price - taylor.price,
                    verdict: None,
                    diagnostics: mix,
                });
            }
            (rows, None)
        }
    };
    let doc = SimulationOutput { params, spot: a.spot, rate: a.rate, tau: a.tau, mc, rows };
    let json = to_json(&doc)?;
    if let Some(dir) = &g.output_dir {
        fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.display().to_string(), source })?;
        write_file(&dir.join(format!("simulate_{}.json", a.model)), &json)?;
    }
    match g.format {
        Format::Structured => emit(out, &json),
        Format::Text => {
            let mut s = String::new();
            let _ = write!(s, "{} S={} r={} tau={}", a.model.display_name(), a.spot, a.rate, a.tau);
            if let Some(c) = &doc.mc {
                let _ = write!(
                    s,
                    " paths={} steps/yr={} seed={} antithetic={}",
                    c.n_paths, c.steps_per_year, c.seed, c.antithetic
                );
            }
            s.push('\n');
            let (ref_name, oracle_name) = match a.model {
                Model::Bs => ("closed", "mc"),
                Model::Heston => ("quadrature", "mc"),
                Model::Msv => ("taylor", "mixture"),
            };
            let _ = writeln!(
                s,
                "{:>10} {:>14} {:>14} {:>12} {:>12} {:>8}",
                "strike", ref_name, oracle_name, "stderr", "delta", "check"
            );
            for r in &doc.rows {
                let se = r.stderr.map(|x| format!("{x:.6}")).unwrap_or_else(|| "-".into());
                let verdict = r.verdict.clone().unwrap_or_else(|| "-".into());
                let _ = writeln!(
                    s,
                    "{:>10} {:>14.6} {:>14.6} {:>12} {:>12.3e} {:>8}",
                    r.strike, r.reference, r.oracle, se, r.delta, verdict
                );
            }
            if a.model == Model::Msv {
                for r in &doc.rows {
                    if let Some(n) = r.diagnostics.quadrature_nodes {
                        let _ = writeln!(s, "K={} mixture nodes={n}", r.strike);
                    }
                }
            }
            emit(out, &s)
        }
    }
}

/// Reads an evaluation file holding one evaluation or a list of them.
pub fn load_evaluations(path: &Path) -> Result<Vec<Evaluation>> {
    let text = read_text(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    let parsed =
        if value.is_array() { serde_json::from_value(value) } else { serde_json::from_value(value).map(|e| vec![e]) };
    parsed.map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}

pub fn cmd_report(a: &ReportArgs, g: &GlobalOpts, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let mut evaluations = Vec::new();
    for path in &a.evaluations {
        evaluations.extend(load_evaluations(path)?);
    }
    let evaluations: Vec<Evaluation> = evaluations.into_iter().filter(|e| !e.heston_rows.is_empty()).collect();
    if evaluations.is_empty() {
        let _ = writeln!(err, "warning: no evaluation rows to chart; nothing written");
        return Ok(());
    }
    let dir = output_dir(g)?;
    let mut written = Vec::new();
    for ev in &evaluations {
        let stem = file_stem(&ev.report.dataset_label);
        let prices = dir.join(format!("{stem}_prices.svg"));
        let errors = dir.join(format!("{stem}_errors.svg"));
        write_file(&prices, &price_scatter_svg(&PriceChartData::from_evaluation(ev)?)?)?;
        write_file(&errors, &error_bars_svg(&ErrorChartData::from_evaluation(ev))?)?;
        written.push(prices.display().to_string());
        written.push(errors.display().to_string());
    }
    match g.format {
        Format::Structured => emit(out, &to_json(&written)?),
        Format::Text => emit(out, &written.iter().map(|w| format!("{w}\n")).collect::<String>()),
    }
}
