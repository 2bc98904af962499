//! Static SVG charts for an evaluation: a model-vs-market price scatter and
//! grouped error bars. Each file carries its plotted data as JSON inside
//! `<metadata>` so the picture can be checked against the evaluation file.

use std::fmt::Write as _;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::{Evaluation, ModelErrors, Sample};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 3] = ["#1f77b4", "#d62728", "#2ca02c"];
const SERIES: [&str; 3] = ["BS", "Heston", "MSV"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PricePoint {
    pub quote_id: String,
    pub sample: Sample,
    pub market: f64,
    /// BS, Heston, MSV.
    pub model: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceChartData {
    pub dataset_label: String,
    pub points: Vec<PricePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorChartData {
    pub dataset_label: String,
    pub models: Vec<ModelErrors>,
}

impl PriceChartData {
    pub fn from_evaluation(ev: &Evaluation) -> Result<Self> {
        if ev.heston_rows.len() != ev.msv_rows.len() {
            return Err(Error::invalid("heston and msv comparison rows differ in length"));
        }
        let points = ev
            .heston_rows
            .iter()
            .zip(&ev.msv_rows)
            .map(|(h, m)| {
                if h.quote_id != m.quote_id {
                    return Err(Error::invalid(format!("comparison rows out of step at {}", h.quote_id)));
                }
                Ok(PricePoint {
                    quote_id: h.quote_id.clone(),
                    sample: h.sample,
                    market: h.real_price,
                    model: [h.bs_price, h.sv_price, m.sv_price],
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PriceChartData { dataset_label: ev.report.dataset_label.clone(), points })
    }
}

impl ErrorChartData {
    pub fn from_evaluation(ev: &Evaluation) -> Self {
        ErrorChartData { dataset_label: ev.report.dataset_label.clone(), models: ev.report.models.clone() }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn unescape(s: &str) -> String {
    s.replace("&lt;", "<").replace("&gt;", ">").replace("&amp;", "&")
}

fn header(out: &mut String, title: &str, metadata: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, "<metadata>{}</metadata>", escape(metadata));
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

/// Horizontal legend under the title, clear of both plot areas.
fn legend(out: &mut String) {
    let start = WIDTH / 2.0 - 1.5 * 70.0;
    for (i, (name, color)) in SERIES.iter().zip(COLORS).enumerate() {
        let x = start + 70.0 * i as f64;
        let _ = writeln!(out, r#"<rect x="{x}" y="33" width="10" height="10" fill="{color}"/>"#);
        let _ = writeln!(out, r#"<text x="{}" y="42">{name}</text>"#, x + 14.0);
    }
}

/// Axis range padded by 5% so points never sit on the frame.
fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
        let c = if lo.is_finite() { lo } else { 0.0 };
        return (c - 1.0, c + 1.0);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    left: f64,
    right: f64,
}

impl Frame {
    fn sx(&self, x: f64) -> f64 {
        self.left + (x - self.x0) / (self.x1 - self.x0) * (self.right - self.left)
    }

    fn sy(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }

    fn axes(&self, out: &mut String, x_ticks: bool, x_label: &str, y_label: &str) {
        let (l, r, b, t) = (self.left, self.right, HEIGHT - MARGIN, MARGIN);
        let _ = writeln!(out, r#"<path d="M{l} {t} L{l} {b} L{r} {b}" fill="none" stroke="black"/>"#);
        for i in 0..=4 {
            let f = i as f64 / 4.0;
            let yv = self.y0 + f * (self.y1 - self.y0);
            let y = self.sy(yv);
            let _ =
                writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, l - 4.0, y + 4.0, tick(yv));
            if x_ticks {
                let xv = self.x0 + f * (self.x1 - self.x0);
                let _ = writeln!(
                    out,
                    r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
                    self.sx(xv),
                    b + 16.0,
                    tick(xv)
                );
            }
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
            (l + r) / 2.0,
            HEIGHT - 18.0,
            escape(x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" transform="rotate(-90 {:.2} {:.2})">{}</text>"#,
            l - 50.0,
            HEIGHT / 2.0,
            l - 50.0,
            HEIGHT / 2.0,
            escape(y_label)
        );
    }
}

fn tick(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 100.0 {
        format!("{v:.0}")
    } else if v.abs() >= 1.0 {
        format!("{v:.2}")
    } else {
        format!("{v:.4}")
    }
}

/// Scatter of model price against market price, one colour per model, with the diagonal.
pub fn price_scatter_svg(data: &PriceChartData) -> Result<String> {
    let metadata = serde_json::to_string(data)?;
    let mut out = String::new();
    header(&mut out, &format!("{}: model vs market price", data.dataset_label), &metadata);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in &data.points {
        for v in std::iter::once(p.market).chain(p.model) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    let (lo, hi) = padded(lo, hi);
    let lo = lo.max(0.0);
    let frame = Frame { x0: lo, x1: hi, y0: lo, y1: hi, left: MARGIN + 20.0, right: WIDTH - MARGIN };
    frame.axes(&mut out, true, "market price", "model price");
    let _ = writeln!(
        out,
        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#999" stroke-dasharray="4 3"/>"##,
        frame.sx(lo),
        frame.sy(lo),
        frame.sx(hi),
        frame.sy(hi)
    );
    // BS and MSV often coincide, so each series gets its own marker style
    let styles = [r#"r="4.5" fill-opacity="0.6""#, r#"r="2.5""#, r#"r="3.5" fill="none" stroke-width="1.2""#];
    for (m, (color, style)) in COLORS.iter().zip(styles).enumerate() {
        let _ = writeln!(out, r#"<g fill="{color}" stroke="{color}" stroke-width="0">"#);
        for p in &data.points {
            let _ =
                writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" {style}/>"#, frame.sx(p.market), frame.sy(p.model[m]));
        }
        out.push_str("</g>\n");
    }
    legend(&mut out);
    out.push_str("</svg>\n");
    Ok(out)
}

type Panel = (&'static str, [fn(&ModelErrors) -> f64; 2]);

/// Grouped bars: MRAE in/out on the left panel, RMSE in/out on the right.
pub fn error_bars_svg(data: &ErrorChartData) -> Result<String> {
    if data.models.len() != 3 {
        return Err(Error::invalid(format!("expected three models, got {}", data.models.len())));
    }
    let metadata = serde_json::to_string(data)?;
    let mut out = String::new();
    header(&mut out, &format!("{}: pricing errors", data.dataset_label), &metadata);
    let panels: [Panel; 2] = [("MRAE", [|m| m.mrae_in, |m| m.mrae_out]), ("RMSE", [|m| m.rmse_in, |m| m.rmse_out])];
    let panel_width = (WIDTH - 2.0 * MARGIN) / 2.0;
    for (pi, (name, getters)) in panels.iter().enumerate() {
        let top = data.models.iter().flat_map(|m| getters.iter().map(move |g| g(m))).fold(0.0, f64::max);
        let top = if top > 0.0 && top.is_finite() { top * 1.1 } else { 1.0 };
        let left = MARGIN + pi as f64 * panel_width + 20.0;
        let frame = Frame { x0: 0.0, x1: 2.0, y0: 0.0, y1: top, left, right: left + panel_width - 60.0 };
        frame.axes(&mut out, false, &format!("{name} (in | out)"), name);
        let group = (frame.right - frame.left) / 2.0;
        let bar = group / 4.0;
        for (si, getter) in getters.iter().enumerate() {
            let gx = frame.left + si as f64 * group + bar / 2.0;
            for (mi, m) in data.models.iter().enumerate() {
                let v = getter(m).max(0.0);
                let y = frame.sy(v);
                let _ = writeln!(
                    out,
                    r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                    gx + mi as f64 * bar,
                    y,
                    bar * 0.9,
                    frame.sy(0.0) - y,
                    COLORS[mi]
                );
            }
        }
    }
    legend(&mut out);
    out.push_str("</svg>\n");
    Ok(out)
}

/// Parses the JSON stored in an SVG's `<metadata>` element.
pub fn chart_data_from_svg<T: DeserializeOwned>(svg: &str) -> Result<T> {
    let start = svg.find("<metadata>").ok_or_else(|| Error::invalid("svg has no <metadata>"))? + "<metadata>".len();
    let len = svg[start..].find("</metadata>").ok_or_else(|| Error::invalid("unterminated <metadata>"))?;
    Ok(serde_json::from_str(&unescape(&svg[start..start + len]))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Model;

    fn errors() -> ErrorChartData {
        let m = |model, s: f64| ModelErrors {
            model,
            mrae_in: 0.01 * s,
            rmse_in: 0.3 * s,
            mrae_out: 0.02 * s,
            rmse_out: 0.4 * s,
            calib_seconds: None,
        };
        ErrorChartData {
            dataset_label: "a<b & c".into(),
            models: vec![m(Model::Bs, 3.0), m(Model::Heston, 1.0), m(Model::Msv, 2.0)],
        }
    }

    #[test]
    fn metadata_round_trips_through_escaping() {
        let data = errors();
        let svg = error_bars_svg(&data).unwrap();
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(chart_data_from_svg::<ErrorChartData>(&svg).unwrap(), data);
    }

    #[test]
    fn scatter_handles_single_point() {
        let data = PriceChartData {
            dataset_label: "one".into(),
            points: vec![PricePoint { quote_id: "q".into(), sample: Sample::In, market: 5.0, model: [5.0, 5.0, 5.0] }],
        };
        let svg = price_scatter_svg(&data).unwrap();
        assert!(!svg.contains("NaN"));
        assert_eq!(chart_data_from_svg::<PriceChartData>(&svg).unwrap(), data);
    }
}
