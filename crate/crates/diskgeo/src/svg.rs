//! Minimal SVG writer for polar heatmaps (no external renderer): one filled
//! annular-sector path per raster cell plus an embedded linear color scale.

use std::fmt::Write as _;

pub struct PolarRaster {
    pub n_radial: usize,
    pub n_angular: usize,
    pub r_max: f64,
    /// Row-major `[radial][angular]` cell values; NaN cells are skipped.
    pub values: Vec<f64>,
}

fn color(t: f64) -> (u8, u8, u8) {
    // dark blue -> cyan -> yellow ramp
    let t = t.clamp(0.0, 1.0);
    if t < 0.5 {
        let u = t * 2.0;
        (
            (20.0 + 30.0 * u) as u8,
            (30.0 + 170.0 * u) as u8,
            (90.0 + 140.0 * u) as u8,
        )
    } else {
        let u = (t - 0.5) * 2.0;
        (
            (50.0 + 200.0 * u) as u8,
            (200.0 + 30.0 * u) as u8,
            (230.0 - 180.0 * u) as u8,
        )
    }
}

pub fn render(raster: &PolarRaster, title: &str) -> String {
    let size = 640.0;
    let cx = size / 2.0;
    let cy = size / 2.0;
    let scale = (size / 2.0 - 20.0) / raster.r_max;
    let finite: Vec<f64> = raster
        .values
        .iter()
        .cloned()
        .filter(|v| v.is_finite())
        .collect();
    let lo = finite
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
        .min(0.0);
    let hi = finite
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max)
        .max(lo + 1e-12);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = size as u32 + 120,
        h = size as u32
    );
    let _ = writeln!(
        svg,
        r#"<rect width="100%" height="100%" fill="white"/><text x="10" y="16" font-size="13" font-family="monospace">{title}</text>"#
    );
    for i in 0..raster.n_radial {
        let r0 = raster.r_max * i as f64 / raster.n_radial as f64;
        let r1 = raster.r_max * (i + 1) as f64 / raster.n_radial as f64;
        for j in 0..raster.n_angular {
            let v = raster.values[i * raster.n_angular + j];
            if !v.is_finite() {
                continue;
            }
            let t0 = std::f64::consts::TAU * j as f64 / raster.n_angular as f64;
            let t1 = std::f64::consts::TAU * (j + 1) as f64 / raster.n_angular as f64;
            let (r, g, b) = color((v - lo) / (hi - lo));
            let (x0, y0) = (cx + scale * r0 * t0.cos(), cy - scale * r0 * t0.sin());
            let (x1, y1) = (cx + scale * r1 * t0.cos(), cy - scale * r1 * t0.sin());
            let (x2, y2) = (cx + scale * r1 * t1.cos(), cy - scale * r1 * t1.sin());
            let (x3, y3) = (cx + scale * r0 * t1.cos(), cy - scale * r0 * t1.sin());
            let _ = writeln!(
                svg,
                r#"<path d="M{x0:.2} {y0:.2} L{x1:.2} {y1:.2} A{rr1:.2} {rr1:.2} 0 0 0 {x2:.2} {y2:.2} L{x3:.2} {y3:.2} A{rr0:.2} {rr0:.2} 0 0 1 {x0:.2} {y0:.2} Z" fill="rgb({r},{g},{b})" stroke="none"/>"#,
                rr0 = scale * r0,
                rr1 = scale * r1,
            );
        }
    }
    // color scale with numeric endpoints, so the image is self-describing
    let bar_x = size + 20.0;
    for k in 0..64 {
        let t = k as f64 / 63.0;
        let (r, g, b) = color(t);
        let y = size - 40.0 - (size - 80.0) * t;
        let _ = writeln!(
            svg,
            r#"<rect x="{bar_x:.1}" y="{y:.2}" width="18" height="{:.2}" fill="rgb({r},{g},{b})"/>"#,
            (size - 80.0) / 63.0 + 0.5
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{x}" y="{y0}" font-size="11" font-family="monospace">{hi:.3e}</text><text x="{x}" y="{y1}" font-size="11" font-family="monospace">{lo:.3e}</text>"#,
        x = bar_x - 4.0,
        y0 = 30.0,
        y1 = size - 24.0,
    );
    svg.push_str("</svg>\n");
    svg
}
