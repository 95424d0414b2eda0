//! Hand-written SVG figures. Output depends only on the inputs: numbers are
//! printed with fixed decimals and elements are emitted in input order.

use std::fmt::Write;

use crate::complementarity::ComplementarityMatrix;

const CELL: f64 = 28.0;
const LABEL_SPACE: f64 = 130.0;

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// White at 0, deep blue at 1.
pub fn ramp(value: f64) -> String {
    let t = if value.is_finite() { value.clamp(0.0, 1.0) } else { 0.0 };
    let channel = |lo: f64| (255.0 + (lo - 255.0) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", channel(8.0), channel(48.0), channel(107.0))
}

fn open(out: &mut String, width: f64, height: f64, comment: Option<&str>) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width:.1} {height:.1}" font-family="sans-serif" font-size="11">"#
    );
    if let Some(c) = comment {
        // `--` is not allowed inside XML comments
        let _ = writeln!(out, "<!-- {} -->", c.replace("--", "- -"));
    }
    let _ = writeln!(out, r#"<rect width="{width:.1}" height="{height:.1}" fill="white"/>"#);
}

/// Heatmap of a complementarity matrix with a red line between the human
/// and automatic blocks. `comment` is embedded verbatim as an XML comment.
pub fn heatmap_svg(matrix: &ComplementarityMatrix, comment: Option<&str>) -> String {
    let n = matrix.len();
    let size = LABEL_SPACE + CELL * n as f64 + 10.0;
    let mut out = String::new();
    open(&mut out, size, size, comment);
    for (i, id) in matrix.metric_ids.iter().enumerate() {
        let y = LABEL_SPACE + CELL * (i as f64 + 0.5);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{y:.1}" text-anchor="end" dominant-baseline="middle">{}</text>"#,
            LABEL_SPACE - 4.0,
            escape(id)
        );
        let x = LABEL_SPACE + CELL * (i as f64 + 0.5);
        let _ = writeln!(
            out,
            r#"<text transform="translate({x:.1},{:.1}) rotate(-60)">{}</text>"#,
            LABEL_SPACE - 4.0,
            escape(id)
        );
    }
    for (i, row) in matrix.values.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let _ = writeln!(
                out,
                r##"<rect x="{:.1}" y="{:.1}" width="{CELL:.1}" height="{CELL:.1}" fill="{}" stroke="#dddddd" stroke-width="0.5"><title>{} / {}: {v:.4}</title></rect>"##,
                LABEL_SPACE + CELL * j as f64,
                LABEL_SPACE + CELL * i as f64,
                ramp(*v),
                escape(&matrix.metric_ids[i]),
                escape(&matrix.metric_ids[j]),
            );
        }
    }
    let h = matrix.human_count();
    if h > 0 && h < n {
        let at = LABEL_SPACE + CELL * h as f64;
        let end = LABEL_SPACE + CELL * n as f64;
        let _ = writeln!(
            out,
            r#"<line class="separator" x1="{at:.1}" y1="{LABEL_SPACE:.1}" x2="{at:.1}" y2="{end:.1}" stroke="red" stroke-width="2"/>"#
        );
        let _ = writeln!(
            out,
            r#"<line class="separator" x1="{LABEL_SPACE:.1}" y1="{at:.1}" x2="{end:.1}" y2="{at:.1}" stroke="red" stroke-width="2"/>"#
        );
    }
    out.push_str("</svg>\n");
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterPoint {
    pub label: String,
    pub x: f64,
    pub y: f64,
    pub cluster: usize,
    pub human: bool,
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22",
];

pub fn cluster_color(cluster: usize) -> &'static str {
    PALETTE[cluster % PALETTE.len()]
}

/// Scatter of a 2-D embedding. Human metrics are drawn as squares,
/// automatic ones as circles; fill encodes the cluster.
pub fn scatter_svg(points: &[ScatterPoint], x_label: &str, y_label: &str, comment: Option<&str>) -> String {
    let (w, h, pad) = (520.0, 420.0, 50.0);
    let range = |f: fn(&ScatterPoint) -> f64| {
        let lo = points.iter().map(f).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() || hi - lo < 1e-12 {
            (lo.min(0.0) - 1.0, hi.max(0.0) + 1.0)
        } else {
            let m = 0.08 * (hi - lo);
            (lo - m, hi + m)
        }
    };
    let (x0, x1) = range(|p| p.x);
    let (y0, y1) = range(|p| p.y);
    let sx = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);

    let mut out = String::new();
    open(&mut out, w, h, comment);
    let _ = writeln!(
        out,
        r##"<rect x="{pad:.1}" y="{pad:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="#999999"/>"##,
        w - 2.0 * pad,
        h - 2.0 * pad
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        w / 2.0,
        h - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text transform="translate(16,{:.1}) rotate(-90)" text-anchor="middle">{}</text>"#,
        h / 2.0,
        escape(y_label)
    );
    for p in points {
        let (cx, cy) = (sx(p.x), sy(p.y));
        let color = cluster_color(p.cluster);
        if p.human {
            let _ = writeln!(
                out,
                r#"<rect class="human" x="{:.2}" y="{:.2}" width="10.00" height="10.00" fill="{color}" stroke="black" stroke-width="1.5"/>"#,
                cx - 5.0,
                cy - 5.0
            );
        } else {
            let _ = writeln!(
                out,
                r#"<circle class="automatic" cx="{cx:.2}" cy="{cy:.2}" r="5.00" fill="{color}"/>"#
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="9">{}</text>"#,
            cx + 7.0,
            cy + 3.0,
            escape(&p.label)
        );
    }
    out.push_str("</svg>\n");
    out
}
