//! Minimal SVG 1.1 writer: polylines and circular markers over an
//! automatically fitted viewBox. Geometry is supplied in mathematical
//! coordinates (y up); the writer flips the y axis once at render time.
//!
//! Plots are a convenience layer; the CSV tables are the data contract.

use crate::table::fmt_f;

enum Element {
    Polyline {
        points: Vec<(f64, f64)>,
        stroke: &'static str,
        width_frac: f64,
    },
    Marker {
        x: f64,
        y: f64,
        radius_frac: f64,
        fill: &'static str,
    },
}

pub struct SvgCanvas {
    elements: Vec<Element>,
}

impl SvgCanvas {
    pub fn new() -> Self {
        SvgCanvas {
            elements: Vec::new(),
        }
    }

    pub fn polyline(&mut self, points: Vec<(f64, f64)>, stroke: &'static str, width_frac: f64) {
        if points.len() >= 2 {
            self.elements.push(Element::Polyline {
                points,
                stroke,
                width_frac,
            });
        }
    }

    pub fn marker(&mut self, x: f64, y: f64, radius_frac: f64, fill: &'static str) {
        self.elements.push(Element::Marker {
            x,
            y,
            radius_frac,
            fill,
        });
    }

    pub fn render(&self) -> String {
        let (mut lo_x, mut hi_x) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut lo_y, mut hi_y) = (f64::INFINITY, f64::NEG_INFINITY);
        let mut visit = |x: f64, y: f64| {
            lo_x = lo_x.min(x);
            hi_x = hi_x.max(x);
            lo_y = lo_y.min(y);
            hi_y = hi_y.max(y);
        };
        for el in &self.elements {
            match el {
                Element::Polyline { points, .. } => {
                    for &(x, y) in points {
                        visit(x, y);
                    }
                }
                Element::Marker { x, y, .. } => visit(*x, *y),
            }
        }
        if !lo_x.is_finite() {
            (lo_x, hi_x, lo_y, hi_y) = (0.0, 1.0, 0.0, 1.0);
        }
        let pad = 0.05 * (hi_x - lo_x).max(hi_y - lo_y).max(1e-12);
        let (lo_x, hi_x) = (lo_x - pad, hi_x + pad);
        let (lo_y, hi_y) = (lo_y - pad, hi_y + pad);
        let span = (hi_x - lo_x).max(hi_y - lo_y);

        let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        out.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"480\" \
             viewBox=\"{} {} {} {}\">\n",
            fmt_f(lo_x),
            fmt_f(-hi_y),
            fmt_f(hi_x - lo_x),
            fmt_f(hi_y - lo_y),
        ));
        for el in &self.elements {
            match el {
                Element::Polyline {
                    points,
                    stroke,
                    width_frac,
                } => {
                    let pts: Vec<String> = points
                        .iter()
                        .map(|&(x, y)| format!("{},{}", fmt_f(x), fmt_f(-y)))
                        .collect();
                    out.push_str(&format!(
                        "  <polyline fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{}\" \
                         points=\"{}\"/>\n",
                        fmt_f(width_frac * span),
                        pts.join(" "),
                    ));
                }
                Element::Marker {
                    x,
                    y,
                    radius_frac,
                    fill,
                } => {
                    out.push_str(&format!(
                        "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fill}\"/>\n",
                        fmt_f(*x),
                        fmt_f(-y),
                        fmt_f(radius_frac * span),
                    ));
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }
}
