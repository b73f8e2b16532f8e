//! Minimal SVG writers for the figure artefacts.

use std::fmt::Write;

const W: f64 = 720.0;
const H: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 4] = ["#4c72b0", "#dd8452", "#55a868", "#c44e52"];

pub struct Point {
    pub label: String,
    pub x: f64,
    pub y: f64,
    /// Bubble size; plain markers when absent.
    pub size: Option<f64>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn header(title: &str) -> String {
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2.0,
        escape(title)
    )
    .unwrap();
    s
}

/// Rounds an axis maximum up to a tidy value.
fn nice_max(v: f64) -> f64 {
    if v <= 0.0 {
        return 1.0;
    }
    let mag = 10f64.powf(v.log10().floor());
    for step in [1.0, 2.0, 2.5, 5.0, 10.0] {
        if v <= step * mag {
            return step * mag;
        }
    }
    10.0 * mag
}

fn axes(s: &mut String, x_label: &str, y_label: &str, y_max: f64) {
    let (x0, y0, x1, y1) = (LEFT, H - BOTTOM, W - RIGHT, TOP);
    writeln!(
        s,
        r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#
    )
    .unwrap();
    for i in 0..=5 {
        let v = y_max * i as f64 / 5.0;
        let y = y0 - (y0 - y1) * i as f64 / 5.0;
        writeln!(
            s,
            r#"<text x="{}" y="{:.1}" text-anchor="end">{}</text>"#,
            x0 - 6.0,
            y + 4.0,
            trim(v)
        )
        .unwrap();
        writeln!(
            s,
            r##"<line x1="{x0}" y1="{y:.1}" x2="{x1}" y2="{y:.1}" stroke="#ddd"/>"##
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        H - 12.0,
        escape(x_label)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    )
    .unwrap();
}

fn trim(v: f64) -> String {
    let s = format!("{v:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn scatter(title: &str, x_label: &str, y_label: &str, points: &[Point]) -> String {
    let mut s = header(title);
    let x_max = nice_max(points.iter().map(|p| p.x).fold(0.0, f64::max) * 1.05);
    let y_max = nice_max(points.iter().map(|p| p.y).fold(0.0, f64::max) * 1.05);
    let size_max = points.iter().filter_map(|p| p.size).fold(0.0, f64::max);
    axes(&mut s, x_label, y_label, y_max);
    let plot_w = W - LEFT - RIGHT;
    let plot_h = H - TOP - BOTTOM;
    for p in points {
        let cx = LEFT + plot_w * p.x / x_max;
        let cy = H - BOTTOM - plot_h * p.y / y_max;
        let r = match p.size {
            Some(v) if size_max > 0.0 => 4.0 + 16.0 * (v / size_max).sqrt(),
            _ => 4.0,
        };
        writeln!(
            s,
            r#"<circle cx="{cx:.1}" cy="{cy:.1}" r="{r:.1}" fill="{}" fill-opacity="0.6"/>"#,
            PALETTE[0]
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
            cx + r + 2.0,
            cy + 4.0,
            escape(&p.label)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

pub fn grouped_bars(
    title: &str,
    y_label: &str,
    series: &[String],
    groups: &[(String, Vec<f64>)],
) -> String {
    let mut s = header(title);
    let y_max = nice_max(
        groups
            .iter()
            .flat_map(|(_, v)| v.iter().copied())
            .fold(0.0, f64::max)
            * 1.05,
    );
    axes(&mut s, "", y_label, y_max);
    let plot_w = W - LEFT - RIGHT;
    let plot_h = H - TOP - BOTTOM;
    let slot = plot_w / groups.len().max(1) as f64;
    let bar = slot * 0.8 / series.len().max(1) as f64;
    for (gi, (label, values)) in groups.iter().enumerate() {
        let gx = LEFT + slot * gi as f64 + slot * 0.1;
        for (si, v) in values.iter().enumerate() {
            let h = plot_h * v / y_max;
            writeln!(
                s,
                r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="{}"/>"#,
                gx + bar * si as f64,
                H - BOTTOM - h,
                bar,
                h,
                PALETTE[si % PALETTE.len()]
            )
            .unwrap();
        }
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            gx + slot * 0.4,
            H - BOTTOM + 14.0,
            escape(label)
        )
        .unwrap();
    }
    for (si, name) in series.iter().enumerate() {
        let y = TOP + 14.0 * si as f64;
        writeln!(
            s,
            r#"<rect x="{}" y="{y}" width="10" height="10" fill="{}"/>"#,
            W - RIGHT - 110.0,
            PALETTE[si % PALETTE.len()]
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{}" y="{}">{}</text>"#,
            W - RIGHT - 95.0,
            y + 9.0,
            escape(name)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}
