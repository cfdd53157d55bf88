//! Static log-log chart of `K` against `1/δ`, one line per `σ` (geometric mean
//! over seeds) with the dashed reference `K = δ^{-c(σ)}`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use sumprod_core::ExponentReport;

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: f64 = 56.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// `(σ, c(σ), n -> (Σ ln K, count))`.
type Series = (f64, f64, BTreeMap<u64, (f64, usize)>);

pub fn sweep_chart(reports: &[ExponentReport]) -> String {
    // keyed by the bits of σ for ordering
    let mut series: BTreeMap<u64, Series> = BTreeMap::new();
    for r in reports {
        let entry = series
            .entry(r.sigma.to_bits())
            .or_insert((r.sigma, r.c_paper, BTreeMap::new()));
        for p in &r.points {
            let slot = entry.2.entry(p.n).or_insert((0.0, 0));
            slot.0 += p.k.ln();
            slot.1 += 1;
        }
    }
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_max: f64 = 0.0;
    for (_, c, pts) in series.values() {
        for (&n, &(s, k)) in pts {
            let x = (n as f64).log2();
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_max = y_max.max(s / k as f64).max(c * x * std::f64::consts::LN_2);
        }
    }
    if !x_min.is_finite() {
        x_min = 0.0;
        x_max = 1.0;
    }
    if x_max <= x_min {
        x_max = x_min + 1.0;
    }
    let y_max = (y_max * 1.1).max(1e-3);
    let px = |x: f64| MARGIN + (x - x_min) / (x_max - x_min) * (W - 2.0 * MARGIN);
    let py = |y: f64| H - MARGIN - y / y_max * (H - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{l},{t} L{l},{b} L{r},{b}" stroke="black" fill="none"/>"#,
        l = MARGIN,
        t = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">log2(1/δ)</text>"#,
        W / 2.0,
        H - 16.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" transform="rotate(-90 16 {})" text-anchor="middle">ln K</text>"#,
        H / 2.0,
        H / 2.0
    );
    for (i, (sigma, c, pts)) in series.values().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = pts
            .iter()
            .map(|(&n, &(sum, k))| format!("{:.2},{:.2}", px((n as f64).log2()), py(sum / k as f64)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" stroke="{color}" fill="none" stroke-width="1.5"/>"#,
            path.join(" ")
        );
        let y0 = c * x_min * std::f64::consts::LN_2;
        let y1 = c * x_max * std::f64::consts::LN_2;
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-dasharray="4 3"/>"#,
            px(x_min),
            py(y0),
            px(x_max),
            py(y1)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" fill="{color}">σ={sigma}</text>"#,
            W - MARGIN + 4.0,
            MARGIN + 14.0 * i as f64
        );
    }
    s.push_str("</svg>\n");
    s
}
