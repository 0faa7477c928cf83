//! Static SVG artifacts: an |p - f| heatmap over the bounding box with the
//! region boundary overlaid and the polynomial roots scattered on top.

use num_complex::Complex64;

use crate::engine::TargetFunction;
use crate::poly::{self, ComplexPolynomial};
use crate::region::CompactRegion;

const CANVAS: f64 = 640.0;
const MARGIN: f64 = 40.0;

/// Simple blue -> yellow -> red ramp over [0, 1].
fn ramp(t: f64) -> (u8, u8, u8) {
    let t = t.clamp(0.0, 1.0);
    if t < 0.5 {
        let s = t / 0.5;
        (
            (40.0 + 215.0 * s) as u8,
            (60.0 + 180.0 * s) as u8,
            (150.0 - 100.0 * s) as u8,
        )
    } else {
        let s = (t - 0.5) / 0.5;
        (255, (240.0 - 190.0 * s) as u8, (50.0 - 40.0 * s) as u8)
    }
}

pub fn render_error_heatmap(
    region: &CompactRegion,
    f: &TargetFunction,
    p: &ComplexPolynomial,
    grid: usize,
) -> String {
    let grid = grid.clamp(16, 512);
    let bbox = region.bbox().scaled(1.4);
    let pad = 0.05 * (1.0 + region.diameter());
    let (x0, x1) = (bbox.min_re - pad, bbox.max_re + pad);
    let (y0, y1) = (bbox.min_im - pad, bbox.max_im + pad);
    let span = CANVAS - 2.0 * MARGIN;
    let to_px = |z: Complex64| -> (f64, f64) {
        (
            MARGIN + (z.re - x0) / (x1 - x0) * span,
            // SVG y grows downward.
            MARGIN + (y1 - z.im) / (y1 - y0) * span,
        )
    };

    // Error field on cell centers, log-scaled for contrast.
    let mut values = Vec::with_capacity(grid * grid);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for j in 0..grid {
        for i in 0..grid {
            let z = Complex64::new(
                x0 + (x1 - x0) * (i as f64 + 0.5) / grid as f64,
                y0 + (y1 - y0) * (j as f64 + 0.5) / grid as f64,
            );
            let err = (p.eval(z) - f.eval(z)).norm();
            let v = if err.is_finite() { (err.max(1e-300)).log10() } else { f64::NAN };
            if v.is_finite() {
                lo = lo.min(v);
                hi = hi.max(v);
            }
            values.push(v);
        }
    }
    if !lo.is_finite() || !(hi > lo) {
        lo = -1.0;
        hi = 0.0;
    }

    let mut svg = String::with_capacity(grid * grid * 64);
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{c}\" height=\"{c}\" viewBox=\"0 0 {c} {c}\">\n",
        c = CANVAS as u32
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    let cell = span / grid as f64;
    for j in 0..grid {
        for i in 0..grid {
            let v = values[j * grid + i];
            if !v.is_finite() {
                continue;
            }
            let (r, g, b) = ramp((v - lo) / (hi - lo));
            let x = MARGIN + i as f64 * cell;
            let y = MARGIN + span - (j as f64 + 1.0) * cell;
            svg.push_str(&format!(
                "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{w:.2}\" fill=\"rgb({r},{g},{b})\"/>\n",
                w = cell + 0.5
            ));
        }
    }

    // Region overlay.
    for comp in &region.components {
        let pts = comp.boundary_samples(256);
        let mut d = String::from("M");
        for (k, &z) in pts.iter().enumerate() {
            let (x, y) = to_px(z);
            if k > 0 {
                d.push('L');
            }
            d.push_str(&format!("{x:.2} {y:.2} "));
        }
        d.push('Z');
        svg.push_str(&format!(
            "<path d=\"{d}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n"
        ));
    }
    for fil in &region.filaments {
        let mut d = String::from("M");
        for (k, &z) in fil.points().iter().enumerate() {
            let (x, y) = to_px(z);
            if k > 0 {
                d.push('L');
            }
            d.push_str(&format!("{x:.2} {y:.2} "));
        }
        svg.push_str(&format!(
            "<path d=\"{d}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n"
        ));
    }
    for &z in &region.points {
        let (x, y) = to_px(z);
        svg.push_str(&format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"black\"/>\n"
        ));
    }

    // Root scatter.
    if let Ok(roots) = poly::find_roots(p) {
        for r in roots.roots {
            if r.re < x0 || r.re > x1 || r.im < y0 || r.im > y1 {
                continue;
            }
            let (x, y) = to_px(r);
            svg.push_str(&format!(
                "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"none\" stroke=\"magenta\" stroke-width=\"2\"/>\n"
            ));
        }
    }

    svg.push_str(&format!(
        "<text x=\"{m}\" y=\"{ty}\" font-family=\"monospace\" font-size=\"13\">log10 |p - f| in [{lo:.2}, {hi:.2}]; circles: roots of p</text>\n",
        m = MARGIN,
        ty = CANVAS - 12.0
    ));
    svg.push_str("</svg>\n");
    svg
}
