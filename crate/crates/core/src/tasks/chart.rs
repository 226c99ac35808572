//! Static SVG grouped bar charts with numeric labels.

use std::fmt::Write;

#[derive(Clone, Debug, PartialEq)]
pub struct BarGroup {
    pub label: String,
    pub values: Vec<f64>,
}

const COLORS: [&str; 4] = ["#4c72b0", "#dd8452", "#55a868", "#c44e52"];
const BAR_W: f64 = 22.0;
const GAP: f64 = 18.0;
const PLOT_H: f64 = 220.0;
const TOP: f64 = 50.0;
const LEFT: f64 = 50.0;

fn escape_xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Values are drawn on a fixed [0, 1] axis; out-of-range values are clipped.
pub fn grouped_bar_chart(title: &str, series: &[&str], groups: &[BarGroup]) -> String {
    let per_group = series.len().max(1) as f64 * BAR_W + GAP;
    let width = LEFT + per_group * groups.len() as f64 + 20.0;
    let height = TOP + PLOT_H + 110.0;
    let base = TOP + PLOT_H;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" font-family="sans-serif" font-size="10">"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{LEFT}" y="20" font-size="14">{}</text>"#,
        escape_xml(title)
    );
    for (i, name) in series.iter().enumerate() {
        let x = LEFT + i as f64 * 90.0;
        let _ = writeln!(
            s,
            r#"<rect x="{x}" y="30" width="10" height="10" fill="{}"/><text x="{}" y="39">{}</text>"#,
            COLORS[i % COLORS.len()],
            x + 14.0,
            escape_xml(name)
        );
    }
    for tick in 0..=4 {
        let v = tick as f64 / 4.0;
        let y = base - v * PLOT_H;
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{y}" x2="{:.1}" y2="{y}" stroke="#ddd"/><text x="{}" y="{}" text-anchor="end">{v:.2}</text>"##,
            width - 20.0,
            LEFT - 4.0,
            y + 3.0
        );
    }
    for (g, group) in groups.iter().enumerate() {
        let x0 = LEFT + GAP / 2.0 + g as f64 * per_group;
        for (i, &v) in group.values.iter().enumerate() {
            let h = v.clamp(0.0, 1.0) * PLOT_H;
            let x = x0 + i as f64 * BAR_W;
            let _ = writeln!(
                s,
                r#"<rect x="{x:.1}" y="{:.1}" width="{:.1}" height="{h:.1}" fill="{}"/><text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="7">{v:.3}</text>"#,
                base - h,
                BAR_W - 2.0,
                COLORS[i % COLORS.len()],
                x + BAR_W / 2.0 - 1.0,
                base - h - 2.0
            );
        }
        let cx = x0 + series.len() as f64 * BAR_W / 2.0;
        let _ = writeln!(
            s,
            r#"<text x="{cx:.1}" y="{:.1}" transform="rotate(45 {cx:.1} {:.1})">{}</text>"#,
            base + 12.0,
            base + 12.0,
            escape_xml(&group.label)
        );
    }
    s.push_str("</svg>\n");
    s
}
