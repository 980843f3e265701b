//! Self-contained SVG overlay of rate regions.

use std::fmt::Write;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 70.0;
const FILL_OPACITY: f64 = 0.3;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

pub struct Series<'a> {
    pub name: &'a str,
    pub vertices: &'a [[f64; 2]],
}

/// Step of roughly `span / 5` from the 1-2-5 sequence.
fn tick_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let frac = raw / mag;
    let nice = if frac <= 1.0 {
        1.0
    } else if frac <= 2.0 {
        2.0
    } else if frac <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn decimals(step: f64) -> usize {
    (-step.log10().floor()).max(0.0) as usize
}

fn axis_max(values: impl Iterator<Item = f64>) -> f64 {
    let m = values.fold(0.0, f64::max);
    if m > 1e-12 {
        m * 1.05
    } else {
        1.0
    }
}

pub fn render(series: &[Series<'_>], units: &str) -> String {
    let all = || series.iter().flat_map(|s| s.vertices.iter());
    let xmax = axis_max(all().map(|v| v[0]));
    let ymax = axis_max(all().map(|v| v[1]));
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + x / xmax * pw;
    let sy = |y: f64| TOP + ph - y / ymax * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    // grid and ticks
    for (max, horizontal) in [(xmax, true), (ymax, false)] {
        let step = tick_step(max);
        let prec = decimals(step);
        let mut k = 0;
        loop {
            let v = k as f64 * step;
            if v > max + 1e-12 {
                break;
            }
            if horizontal {
                let x = sx(v);
                let _ = writeln!(
                    s,
                    r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{TOP:.2}" stroke="#e0e0e0"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{v:.prec$}</text>"##,
                    TOP + ph,
                    TOP + ph + 18.0
                );
            } else {
                let y = sy(v);
                let _ = writeln!(
                    s,
                    r##"<line x1="{LEFT:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#e0e0e0"/><text x="{:.2}" y="{:.2}" text-anchor="end">{v:.prec$}</text>"##,
                    LEFT + pw,
                    LEFT - 8.0,
                    y + 4.0
                );
            }
            k += 1;
        }
    }
    let _ = writeln!(
        s,
        r##"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"##
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">R1 ({units} per channel use)</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 20.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" font-size="14" transform="rotate(-90 20 {:.2})">R2 ({units} per channel use)</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        match ser.vertices {
            [] => {}
            [v] => {
                let _ = writeln!(
                    s,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{color}" fill-opacity="{FILL_OPACITY}" stroke="{color}"/>"#,
                    sx(v[0]),
                    sy(v[1])
                );
            }
            vs => {
                let pts: Vec<String> = vs.iter().map(|v| format!("{:.2},{:.2}", sx(v[0]), sy(v[1]))).collect();
                let _ = writeln!(
                    s,
                    r#"<polygon points="{}" fill="{color}" fill-opacity="{FILL_OPACITY}" stroke="{color}" stroke-width="1.5"/>"#,
                    pts.join(" ")
                );
            }
        }
    }

    // legend, top right inside the plot area
    let lx = LEFT + pw - 170.0;
    let _ = writeln!(
        s,
        r##"<rect x="{lx:.2}" y="{:.2}" width="160" height="{:.2}" fill="white" stroke="#808080"/>"##,
        TOP + 10.0,
        10.0 + 20.0 * series.len() as f64
    );
    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = TOP + 20.0 + 20.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{:.2}" y="{:.2}" width="14" height="10" fill="{color}" fill-opacity="{FILL_OPACITY}" stroke="{color}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 8.0,
            y,
            lx + 30.0,
            y + 9.0,
            escape(ser.name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
