//! Minimal hand-rolled SVG output for run renders and benchmark plots.
//! Plain textual SVG keeps the artifacts dependency-free and diffable.

use std::fmt::Write;

/// World-coordinate drawing surface; y grows upward as in the planner's
/// frame, so everything is flipped once here.
pub struct Canvas {
    width: f64,
    height: f64,
    margin: f64,
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
    body: String,
}

impl Canvas {
    pub fn new(width: f64, height: f64, bounds: (f64, f64, f64, f64)) -> Self {
        let (xmin, xmax, ymin, ymax) = bounds;
        Self {
            width,
            height,
            margin: 20.0,
            xmin,
            xmax: if xmax > xmin { xmax } else { xmin + 1.0 },
            ymin,
            ymax: if ymax > ymin { ymax } else { ymin + 1.0 },
            body: String::new(),
        }
    }

    /// Bounding box of a point cloud, padded a little.
    pub fn bounds_of(points: impl Iterator<Item = (f64, f64)>, pad: f64) -> (f64, f64, f64, f64) {
        let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in points {
            b.0 = b.0.min(x);
            b.1 = b.1.max(x);
            b.2 = b.2.min(y);
            b.3 = b.3.max(y);
        }
        (b.0 - pad, b.1 + pad, b.2 - pad, b.3 + pad)
    }

    fn tx(&self, x: f64) -> f64 {
        self.margin + (x - self.xmin) / (self.xmax - self.xmin) * (self.width - 2.0 * self.margin)
    }

    fn ty(&self, y: f64) -> f64 {
        // flip: world y up, SVG y down
        self.height
            - self.margin
            - (y - self.ymin) / (self.ymax - self.ymin) * (self.height - 2.0 * self.margin)
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str, width: f64, opacity: f64) {
        if pts.len() < 2 {
            return;
        }
        let mut d = String::new();
        for (x, y) in pts {
            let _ = write!(d, "{:.2},{:.2} ", self.tx(*x), self.ty(*y));
        }
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width}" stroke-opacity="{opacity}"/>"#,
            d.trim_end()
        );
    }

    pub fn circle(&mut self, x: f64, y: f64, r: f64, fill: &str, opacity: f64) {
        let _ = writeln!(
            self.body,
            r#"<circle cx="{:.2}" cy="{:.2}" r="{r}" fill="{fill}" fill-opacity="{opacity}"/>"#,
            self.tx(x),
            self.ty(y)
        );
    }

    /// Screen-space text, for legends outside the data frame.
    pub fn label(&mut self, px: f64, py: f64, s: &str, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{px:.2}" y="{py:.2}" font-size="11" font-family="sans-serif" fill="{fill}">{s}</text>"#,
        );
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" \
             viewBox=\"0 0 {} {}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.width, self.height, self.width, self.height, self.body
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn emits_wellformed_svg_with_flipped_y() {
        let mut c = Canvas::new(200.0, 100.0, (0.0, 10.0, 0.0, 5.0));
        c.polyline(&[(0.0, 0.0), (10.0, 5.0)], "black", 1.0, 1.0);
        c.circle(5.0, 2.5, 2.0, "red", 0.5);
        let out = c.finish();
        assert!(out.starts_with("<svg"));
        assert!(out.trim_end().ends_with("</svg>"));
        // world origin maps to the bottom-left corner of the data frame
        assert!(out.contains("20.00,80.00"));
    }

    #[test]
    fn bounds_cover_the_cloud() {
        let b = Canvas::bounds_of([(0.0, -1.0), (3.0, 4.0)].into_iter(), 1.0);
        assert_eq!(b, (-1.0, 4.0, -2.0, 5.0));
    }
}
