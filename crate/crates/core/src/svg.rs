//! SVG heatmap with an optional arrow overlay. α runs left to right, Δ bottom
//! to top; masked cells are drawn grey.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::grid::GridResult;

const CELL: f64 = 14.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 55.0;
const BAR_W: f64 = 16.0;
const MASK_FILL: &str = "#bdbdbd";

// viridis, sampled at five stops
const STOPS: [[f64; 3]; 5] = [
    [68.0, 1.0, 84.0],
    [59.0, 82.0, 139.0],
    [33.0, 145.0, 140.0],
    [94.0, 201.0, 98.0],
    [253.0, 231.0, 37.0],
];

fn color(t: f64) -> String {
    let t = t.clamp(0.0, 1.0) * (STOPS.len() - 1) as f64;
    let i = (t.floor() as usize).min(STOPS.len() - 2);
    let f = t - i as f64;
    let c: Vec<u8> = (0..3).map(|k| (STOPS[i][k] + f * (STOPS[i + 1][k] - STOPS[i][k])).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Arrow overlay: unit-vector components along α and Δ, drawn every `stride` cells.
pub struct Arrows<'a> {
    pub ux: &'a GridResult,
    pub uy: &'a GridResult,
    pub stride: usize,
}

pub fn render(g: &GridResult, arrows: Option<&Arrows>) -> Result<String> {
    if let Some(a) = arrows {
        for other in [a.ux, a.uy] {
            if other.spec != g.spec {
                return Err(Error::Domain(format!("vector grid `{}` has a different grid spec from `{}`", other.label, g.label)));
            }
        }
        if a.stride == 0 {
            return Err(Error::Domain("arrow stride must be at least 1".into()));
        }
    }
    let (nx, ny) = (g.spec.rows(), g.spec.cols());
    let (w, h) = (nx as f64 * CELL, ny as f64 * CELL);
    let total_w = MARGIN_L + w + 30.0 + BAR_W + 80.0;
    let total_h = MARGIN_T + h + MARGIN_B;
    let (lo, hi) = (g.min(), g.max());
    let span = if hi > lo { hi - lo } else { 1.0 };
    // cell (row = α index, col = Δ index) -> top-left corner
    let x0 = |row: usize| MARGIN_L + row as f64 * CELL;
    let y0 = |col: usize| MARGIN_T + (ny - 1 - col) as f64 * CELL;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_w:.0}" height="{total_h:.0}" viewBox="0 0 {total_w:.0} {total_h:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<title>{}</title>"#, escape(&g.label));
    let _ = writeln!(s, r#"<g class="heatmap" shape-rendering="crispEdges">"#);
    for row in 0..nx {
        for col in 0..ny {
            let v = g.at(row, col);
            let fill = if v.is_nan() { MASK_FILL.to_string() } else { color((v - lo) / span) };
            let _ = writeln!(
                s,
                r#"<rect x="{:.2}" y="{:.2}" width="{CELL}" height="{CELL}" fill="{fill}"/>"#,
                x0(row),
                y0(col)
            );
        }
    }
    s.push_str("</g>\n");

    if let Some(a) = arrows {
        let len = 0.4 * CELL * a.stride.min(3) as f64;
        let _ = writeln!(s, r#"<g class="arrows" stroke="white" stroke-width="1.2" fill="white">"#);
        for row in (0..nx).step_by(a.stride) {
            for col in (0..ny).step_by(a.stride) {
                let (ux, uy) = (a.ux.at(row, col), a.uy.at(row, col));
                if ux.is_nan() || uy.is_nan() {
                    continue;
                }
                let (cx, cy) = (x0(row) + CELL / 2.0, y0(col) + CELL / 2.0);
                // screen y points down, Δ points up
                let (dx, dy) = (ux * len, -uy * len);
                let (tx, ty) = (cx + dx / 2.0, cy + dy / 2.0);
                let (bx, by) = (cx - dx / 2.0, cy - dy / 2.0);
                let (px, py) = (-dy * 0.25, dx * 0.25);
                let (hx, hy) = (tx - dx * 0.35, ty - dy * 0.35);
                let _ = writeln!(
                    s,
                    r#"<path class="arrow" d="M{bx:.2},{by:.2} L{tx:.2},{ty:.2} M{tx:.2},{ty:.2} L{:.2},{:.2} L{:.2},{:.2} Z"/>"#,
                    hx + px,
                    hy + py,
                    hx - px,
                    hy - py
                );
            }
        }
        s.push_str("</g>\n");
    }

    // frame, ticks and labels
    let _ = writeln!(s, r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{w}" height="{h}" fill="none" stroke="black"/>"#);
    let ticks = |n: usize| -> Vec<usize> {
        let step = n.div_ceil(6).max(1);
        let mut t: Vec<usize> = (0..n).step_by(step).collect();
        if *t.last().unwrap_or(&0) != n - 1 {
            t.push(n - 1);
        }
        t
    };
    for row in ticks(nx) {
        let x = x0(row) + CELL / 2.0;
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            MARGIN_T + h + 15.0,
            trim(g.spec.alpha.value(row))
        );
    }
    for col in ticks(ny) {
        let y = y0(col) + CELL / 2.0 + 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{y:.2}" text-anchor="end">{}</text>"#,
            MARGIN_L - 6.0,
            trim(g.spec.delta.value(col))
        );
    }
    let _ = writeln!(
        s,
        r#"<text class="axis-label" x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">α</text>"#,
        MARGIN_L + w / 2.0,
        MARGIN_T + h + 40.0
    );
    let _ = writeln!(
        s,
        r#"<text class="axis-label" x="18" y="{:.2}" text-anchor="middle" font-size="14" transform="rotate(-90 18 {:.2})">Δ</text>"#,
        MARGIN_T + h / 2.0,
        MARGIN_T + h / 2.0
    );

    // colour bar
    let bx = MARGIN_L + w + 30.0;
    let _ = writeln!(s, r#"<g class="colorbar">"#);
    let steps = 50;
    for i in 0..steps {
        let t = i as f64 / (steps - 1) as f64;
        let y = MARGIN_T + h - (i + 1) as f64 * h / steps as f64;
        let _ = writeln!(s, r#"<rect x="{bx:.2}" y="{y:.2}" width="{BAR_W}" height="{:.2}" fill="{}"/>"#, h / steps as f64 + 0.5, color(t));
    }
    let lab = |v: f64| if v.is_nan() { "masked".to_string() } else { format!("{v:.3e}") };
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, bx + BAR_W + 4.0, MARGIN_T + h, lab(lo));
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, bx + BAR_W + 4.0, MARGIN_T + 10.0, lab(hi));
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

fn trim(x: f64) -> String {
    let t = format!("{x:.3}");
    let t = t.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.into()
    }
}
