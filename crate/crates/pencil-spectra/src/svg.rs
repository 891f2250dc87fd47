//! SVG rendering of a [`Portrait`].
//!
//! Legend: resolvent white, M+ blue, M- red, N black markers, Omega0 green
//! markers, S crosses. Raster cells of the point classes use the marker
//! colour. The output has no timestamp, so equal portraits give equal bytes.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::portrait::{CellClass, Portrait};

/// Pixels per cell.
const SCALE: f64 = 2.0;
const LEGEND_WIDTH: f64 = 120.0;

pub fn fill(class: CellClass) -> &'static str {
    match class {
        CellClass::Resolvent => "#ffffff",
        CellClass::MPlus => "#1f4fd6",
        CellClass::MMinus => "#d62728",
        CellClass::N => "#000000",
        CellClass::Omega0 => "#2ca02c",
        CellClass::S => "#7f7f7f",
    }
}

pub fn render(portrait: &Portrait, with_overlays: bool) -> String {
    let g = &portrait.grid;
    let (w, h) = (g.nx as f64 * SCALE, g.ny as f64 * SCALE);
    // cell (i, j) spans [i, i+1] x [ny-1-j, ny-j] in cell units
    let px = |z: Complex64| {
        let x = ((z.re - g.re[0]) / g.dx() + 0.5) * SCALE;
        let y = (g.ny as f64 - ((z.im - g.im[0]) / g.dy() + 0.5)) * SCALE;
        (x, y)
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        w + LEGEND_WIDTH,
        h,
        w + LEGEND_WIDTH,
        h
    );
    let _ = writeln!(s, r##"<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>"##);
    s.push_str("<g id=\"raster\" shape-rendering=\"crispEdges\">\n");
    for j in 0..g.ny {
        let y = (g.ny - 1 - j) as f64 * SCALE;
        let mut i = 0;
        while i < g.nx {
            let class = portrait.cell(i, j).class;
            let start = i;
            while i < g.nx && portrait.cell(i, j).class == class {
                i += 1;
            }
            if class == CellClass::Resolvent {
                continue;
            }
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
                start as f64 * SCALE,
                y,
                (i - start) as f64 * SCALE,
                SCALE,
                fill(class)
            );
        }
    }
    s.push_str("</g>\n");

    // axes through the origin when visible
    let (ox, oy) = px(Complex64::new(0.0, 0.0));
    if (0.0..=w).contains(&ox) {
        let _ = writeln!(s, r##"<line x1="{ox:.3}" y1="0" x2="{ox:.3}" y2="{h}" stroke="#999999" stroke-width="0.5"/>"##);
    }
    if (0.0..=h).contains(&oy) {
        let _ = writeln!(s, r##"<line x1="0" y1="{oy:.3}" x2="{w}" y2="{oy:.3}" stroke="#999999" stroke-width="0.5"/>"##);
    }

    if with_overlays {
        let o = &portrait.overlays;
        s.push_str("<g id=\"overlays\">\n");
        for c in &o.boundary {
            let pts: Vec<String> = c
                .points
                .iter()
                .map(|&z| {
                    let (x, y) = px(z);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            let _ = writeln!(
                s,
                r##"<polyline points="{}" fill="none" stroke="#7a0000" stroke-width="1" stroke-dasharray="3,2"/>"##,
                pts.join(" ")
            );
        }
        for &z in &o.n {
            let (x, y) = px(z);
            let _ = writeln!(s, r##"<circle cx="{x:.3}" cy="{y:.3}" r="3" fill="#000000"/>"##);
        }
        for &z in &o.omega0 {
            let (x, y) = px(z);
            let _ = writeln!(s, r##"<circle cx="{x:.3}" cy="{y:.3}" r="3.5" fill="#2ca02c" stroke="#000000" stroke-width="0.5"/>"##);
        }
        for &z in &o.s {
            let (x, y) = px(z);
            let _ = writeln!(
                s,
                r##"<path d="M{:.3},{:.3}L{:.3},{:.3}M{:.3},{:.3}L{:.3},{:.3}" stroke="#000000" stroke-width="1.5"/>"##,
                x - 4.0,
                y - 4.0,
                x + 4.0,
                y + 4.0,
                x - 4.0,
                y + 4.0,
                x + 4.0,
                y - 4.0
            );
        }
        s.push_str("</g>\n");
    }

    s.push_str("<g id=\"legend\" font-family=\"sans-serif\" font-size=\"10\">\n");
    let lx = w + 10.0;
    for (row, class) in CellClass::ALL.iter().enumerate() {
        let y = 10.0 + 16.0 * row as f64;
        let _ = writeln!(
            s,
            r##"<rect x="{lx}" y="{y}" width="10" height="10" fill="{}" stroke="#000000" stroke-width="0.5"/><text x="{}" y="{}">{}</text>"##,
            fill(*class),
            lx + 16.0,
            y + 9.0,
            class.label()
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::portrait::{trace, Dim, GridSpec};
    use pencil_spectra_core::{DielectricModel, InterfaceProblem};

    #[test]
    fn rendering_is_deterministic_and_run_length_encoded() {
        let p = InterfaceProblem::new(
            DielectricModel::real_constant(2.0).unwrap(),
            DielectricModel::drude(0.8, 1.0).unwrap(),
        )
        .unwrap();
        let g: GridSpec = "-4:4:60,-1.2:0.4:30".parse().unwrap();
        let portrait = trace(&p, &g, Dim::One { k: 3.0 }).unwrap();
        let a = render(&portrait, true);
        assert_eq!(a, render(&portrait, true));
        let rects = a.matches("<rect").count();
        let colored = portrait.cells.iter().filter(|c| c.class != CellClass::Resolvent).count();
        assert!(rects < colored + 8);
        assert!(a.contains("#1f4fd6") && a.contains("#d62728"));
        assert!(!render(&portrait, false).contains("<circle"));
    }
}
