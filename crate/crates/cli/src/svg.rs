//! Hand-written SVG plots: a histogram with a Beta density overlay and the
//! three scaling panels.

use std::fmt::Write as _;

use idealpoly_core::specfun::ln_gamma;
use idealpoly_core::stats::{BetaFit, ScalingFit};

const W: f64 = 360.0;
const H: f64 = 280.0;
const PAD_L: f64 = 52.0;
const PAD_R: f64 = 14.0;
const PAD_T: f64 = 30.0;
const PAD_B: f64 = 40.0;

pub fn beta_pdf(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    ((a - 1.0) * x.ln() + (b - 1.0) * (1.0 - x).ln() + ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b)).exp()
}

/// Maps data coordinates into one panel whose left edge is at `x0`.
struct Panel {
    x0: f64,
    xr: (f64, f64),
    yr: (f64, f64),
}

impl Panel {
    fn px(&self, x: f64) -> f64 {
        self.x0 + PAD_L + (x - self.xr.0) / (self.xr.1 - self.xr.0) * (W - PAD_L - PAD_R)
    }

    fn py(&self, y: f64) -> f64 {
        H - PAD_B - (y - self.yr.0) / (self.yr.1 - self.yr.0) * (H - PAD_T - PAD_B)
    }

    fn frame(&self, out: &mut String, title: &str, xlabel: &str, xticks: &[f64], yticks: &[f64]) {
        let (l, r) = (self.x0 + PAD_L, self.x0 + W - PAD_R);
        let (t, b) = (PAD_T, H - PAD_B);
        let _ = writeln!(out, r#"<rect x="{l:.2}" y="{t:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#, r - l, b - t);
        let _ = writeln!(out, r#"<text x="{:.2}" y="18" text-anchor="middle" font-size="13">{title}</text>"#, (l + r) / 2.0);
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="11">{xlabel}</text>"#, (l + r) / 2.0, H - 6.0);
        for &x in xticks {
            let p = self.px(x);
            let _ = writeln!(out, r#"<line x1="{p:.2}" y1="{b:.2}" x2="{p:.2}" y2="{:.2}" stroke="black"/>"#, b + 4.0);
            let _ = writeln!(out, r#"<text x="{p:.2}" y="{:.2}" text-anchor="middle" font-size="10">{}</text>"#, b + 15.0, tick_label(x));
        }
        for &y in yticks {
            let p = self.py(y);
            let _ = writeln!(out, r#"<line x1="{:.2}" y1="{p:.2}" x2="{l:.2}" y2="{p:.2}" stroke="black"/>"#, l - 4.0);
            let _ =
                writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="10">{}</text>"#, l - 6.0, p + 3.0, tick_label(y));
        }
    }

    fn polyline(&self, out: &mut String, pts: &[(f64, f64)], style: &str) {
        let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y))).collect();
        let _ = writeln!(out, r#"<polyline points="{}" fill="none" {style}/>"#, coords.join(" "));
    }

    fn dots(&self, out: &mut String, pts: &[(f64, f64)], fill: &str) {
        for &(x, y) in pts {
            let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{fill}"/>"#, self.px(x), self.py(y));
        }
    }
}

fn tick_label(v: f64) -> String {
    if (v - v.round()).abs() < 1e-9 {
        format!("{}", v.round())
    } else {
        format!("{v:.2}")
    }
}

/// Tick positions covering `[lo, hi]` with a 1-2-5 step.
fn ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let raw = (hi - lo) / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * step {
        out.push(t);
        t += step;
    }
    out
}

fn document(width: f64, body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{H:.0}\" viewBox=\"0 0 {width:.0} {H:.0}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

/// Density histogram of normalized volumes on `[0, 1]` with the fitted
/// Beta density on top.
pub fn histogram(normalized: &[f64], fit: &BetaFit, bins: usize, title: &str) -> String {
    let bins = bins.max(1);
    let mut counts = vec![0usize; bins];
    for &x in normalized {
        let k = ((x * bins as f64).floor() as isize).clamp(0, bins as isize - 1) as usize;
        counts[k] += 1;
    }
    let width = 1.0 / bins as f64;
    let total = normalized.len().max(1) as f64;
    let heights: Vec<f64> = counts.iter().map(|&c| c as f64 / (total * width)).collect();
    let curve: Vec<(f64, f64)> = (1..400).map(|i| i as f64 / 400.0).map(|x| (x, beta_pdf(x, fit.alpha, fit.beta))).collect();
    let ymax = heights.iter().chain(curve.iter().map(|(_, y)| y)).fold(0.0f64, |m, &y| m.max(y)) * 1.08;
    let panel = Panel { x0: 0.0, xr: (0.0, 1.0), yr: (0.0, ymax.max(1e-9)) };
    let mut body = String::new();
    panel.frame(&mut body, title, "V / Vmax", &ticks(0.0, 1.0, 5), &ticks(0.0, ymax, 5));
    for (k, h) in heights.iter().enumerate() {
        let (x0, x1) = (panel.px(k as f64 * width), panel.px((k + 1) as f64 * width));
        let (y0, y1) = (panel.py(*h), panel.py(0.0));
        let _ = writeln!(
            body,
            r##"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="#9ecae1" stroke="#3182bd" stroke-width="0.5"/>"##,
            x1 - x0,
            y1 - y0
        );
    }
    panel.polyline(&mut body, &curve, r##"stroke="#d62728" stroke-width="2""##);
    let _ = writeln!(
        body,
        r#"<text x="{:.2}" y="{:.2}" font-size="10">Beta({:.2}, {:.2})</text>"#,
        panel.px(0.04),
        PAD_T + 14.0,
        fit.alpha,
        fit.beta
    );
    document(W, &body)
}

/// Three panels: fitted α against n, fitted β against n (both with the
/// regression line), and the mean normalized volume against n with a
/// reference line at ln 2.
pub fn scaling_panels(fit: &ScalingFit) -> String {
    let ns: Vec<f64> = fit.rows.iter().map(|r| r.n as f64).collect();
    let (nlo, nhi) = (ns.iter().cloned().fold(f64::INFINITY, f64::min) - 0.5, ns.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 0.5);
    let mut body = String::new();
    let series = [
        ("alpha", fit.rows.iter().map(|r| (r.n as f64, r.alpha)).collect::<Vec<_>>(), &fit.alpha),
        ("beta", fit.rows.iter().map(|r| (r.n as f64, r.beta)).collect::<Vec<_>>(), &fit.beta),
    ];
    for (i, (name, pts, line)) in series.iter().enumerate() {
        let ymax = pts.iter().map(|p| p.1).fold(0.0f64, f64::max).max(line.slope * nhi + line.intercept) * 1.1;
        let panel = Panel { x0: i as f64 * W, xr: (nlo, nhi), yr: (0.0, ymax) };
        let title = format!("{name} = {:.3} n {:+.3}", line.slope, line.intercept);
        panel.frame(&mut body, &title, "n", &ticks(nlo, nhi, 6), &ticks(0.0, ymax, 5));
        let lo = nlo.max(-line.intercept / line.slope);
        panel.polyline(
            &mut body,
            &[(lo, line.slope * lo + line.intercept), (nhi, line.slope * nhi + line.intercept)],
            r##"stroke="#d62728" stroke-width="1.5""##,
        );
        panel.dots(&mut body, pts, "#1f77b4");
    }
    let panel = Panel { x0: 2.0 * W, xr: (nlo, nhi), yr: (0.5, 0.8) };
    panel.frame(&mut body, "mean V / Vmax", "n", &ticks(nlo, nhi, 6), &ticks(0.5, 0.8, 6));
    let ln2 = std::f64::consts::LN_2;
    panel.polyline(&mut body, &[(nlo, ln2), (nhi, ln2)], r##"stroke="#7f7f7f" stroke-dasharray="4 3""##);
    panel.dots(&mut body, &fit.rows.iter().map(|r| (r.n as f64, r.sample_mean)).collect::<Vec<_>>(), "#1f77b4");
    panel.dots(&mut body, &fit.rows.iter().map(|r| (r.n as f64, r.fitted_mean)).collect::<Vec<_>>(), "#ff7f0e");
    document(3.0 * W, &body)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_pdf_integrates_to_one() {
        let m = 20_000;
        let s: f64 = (0..m).map(|i| beta_pdf((i as f64 + 0.5) / m as f64, 13.0, 6.0)).sum::<f64>() / m as f64;
        assert!((s - 1.0).abs() < 1e-6);
    }

    #[test]
    fn ticks_cover_range() {
        let t = ticks(0.0, 1.0, 5);
        assert_eq!(t.len(), 6);
        assert!(t[0] == 0.0 && (t[5] - 1.0).abs() < 1e-12);
    }
}
