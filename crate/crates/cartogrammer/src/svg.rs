//! SVG 1.1 output: maps with an optional value-to-area legend, and the pie
//! chart shown before a dataset is turned into a cartogram.

use std::collections::BTreeSet;
use std::fmt::Write;

use cartogram_core::{
    pie_slices, AdditivitySummary, BBox, ColorAssignment, LegendSpec, MapDocument, Point,
    CONFIRMATION_QUESTION,
};

use crate::error::{Error, Result};

pub const MARGIN_PX: f64 = 10.0;
/// Height kept free below the map for the legend.
pub const LEGEND_BAND_PX: f64 = 70.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Canvas {
    pub width: f64,
    pub height: f64,
}

impl Canvas {
    pub fn new(width: f64, height: f64) -> Result<Canvas> {
        if width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite() {
            Ok(Canvas { width, height })
        } else {
            Err(Error::ZeroCanvas)
        }
    }
}

/// Map-to-pixel transform: uniform scale, y flipped, centred in the map area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fit {
    pub scale: f64,
    bbox: BBox,
    ox: f64,
    oy: f64,
    /// Bottom of the map area in pixels; the legend starts below it.
    pub map_bottom: f64,
}

impl Fit {
    pub fn new(bbox: BBox, canvas: Canvas, with_legend: bool) -> Result<Fit> {
        let band = if with_legend { LEGEND_BAND_PX } else { 0.0 };
        let w = canvas.width - 2.0 * MARGIN_PX;
        let h = canvas.height - 2.0 * MARGIN_PX - band;
        if !(w > 0.0 && h > 0.0) {
            return Err(Error::ZeroCanvas);
        }
        let sx = if bbox.width() > 0.0 {
            w / bbox.width()
        } else {
            f64::INFINITY
        };
        let sy = if bbox.height() > 0.0 {
            h / bbox.height()
        } else {
            f64::INFINITY
        };
        let scale = sx.min(sy);
        if !scale.is_finite() {
            return Err(Error::ZeroCanvas);
        }
        Ok(Fit {
            scale,
            bbox,
            ox: MARGIN_PX + 0.5 * (w - bbox.width() * scale),
            oy: MARGIN_PX + 0.5 * (h - bbox.height() * scale),
            map_bottom: MARGIN_PX + h,
        })
    }

    pub fn apply(&self, p: Point) -> Point {
        Point::new(
            self.ox + (p.x - self.bbox.xmin) * self.scale,
            self.oy + (self.bbox.ymax - p.y) * self.scale,
        )
    }
}

pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
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

fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn header(out: &mut String, canvas: Canvas) {
    let (w, h) = (num(canvas.width), num(canvas.height));
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
}

/// Renders the map as one filled path per region, in region order.
///
/// Regions listed in `missing` are filled with the missing-data grey. When a
/// legend is given, its square and label are drawn below the map in legend
/// grey; the map is then fitted above the legend band.
pub fn export_svg(
    map: &MapDocument,
    colors: &ColorAssignment,
    legend: Option<&LegendSpec>,
    missing: &BTreeSet<String>,
    canvas: Canvas,
) -> Result<String> {
    let fit = Fit::new(map.bbox(), canvas, legend.is_some())?;
    let mut out = String::new();
    header(&mut out, canvas);
    out.push_str(
        "<g id=\"regions\" stroke=\"#FFFFFF\" stroke-width=\"0.5\" stroke-linejoin=\"round\">\n",
    );
    let v = map.vertices();
    for region in map.regions() {
        let fill = colors
            .fill_for(&region.id, missing.contains(&region.id))
            .map(|c| c.hex())
            .unwrap_or_else(|| colors.palette().missing.hex());
        let mut d = String::new();
        for p in &region.polygons {
            for ring in std::iter::once(&p.outer).chain(&p.holes) {
                for (k, &i) in ring.iter().enumerate() {
                    let q = fit.apply(v[i]);
                    let _ = write!(
                        d,
                        "{}{},{}",
                        if k == 0 { "M" } else { "L" },
                        num(q.x),
                        num(q.y)
                    );
                }
                d.push('Z');
            }
        }
        let _ = writeln!(
            out,
            "<path id=\"region-{id}\" data-id=\"{id}\" fill=\"{fill}\" fill-rule=\"evenodd\" d=\"{d}\"><title>{name}</title></path>",
            id = escape(&region.id),
            name = escape(&region.name),
        );
    }
    out.push_str("</g>\n");
    if let Some(l) = legend {
        let x = MARGIN_PX;
        let y = fit.map_bottom + 10.0;
        let _ = writeln!(
            out,
            "<g id=\"legend\"><rect x=\"{x}\" y=\"{y}\" width=\"{s}\" height=\"{s}\" fill=\"{c}\"/><text x=\"{tx}\" y=\"{ty}\" fill=\"{c}\" font-family=\"sans-serif\" font-size=\"14\">{label}</text></g>",
            x = num(x),
            y = num(y),
            s = num(l.side_px),
            c = l.color,
            tx = num(x + l.side_px + 8.0),
            ty = num(y + 0.5 * l.side_px + 5.0),
            label = escape(&l.label),
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub const PIE_WIDTH: f64 = 420.0;
pub const PIE_HEIGHT: f64 = 480.0;
const PIE_RADIUS: f64 = 180.0;
const PIE_CENTER: (f64, f64) = (210.0, 280.0);

/// Point on the pie rim at `deg` degrees clockwise from 12 o'clock.
fn rim(deg: f64) -> (f64, f64) {
    let t = deg.to_radians();
    (
        PIE_CENTER.0 + PIE_RADIUS * t.sin(),
        PIE_CENTER.1 - PIE_RADIUS * t.cos(),
    )
}

/// Pie chart of the dataset's shares with the total and the confirmation
/// question above it. Slices run clockwise from 12 o'clock in region order.
pub fn render_pie_svg(summary: &AdditivitySummary, colors: &ColorAssignment) -> String {
    let canvas = Canvas {
        width: PIE_WIDTH,
        height: PIE_HEIGHT,
    };
    let mut out = String::new();
    header(&mut out, canvas);
    let _ = writeln!(
        out,
        "<text x=\"{x}\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}: {}</text>",
        escape(&summary.dataset),
        escape(&summary.formatted_total),
        x = num(PIE_WIDTH / 2.0),
    );
    let _ = writeln!(
        out,
        "<text x=\"{x}\" y=\"56\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}</text>",
        CONFIRMATION_QUESTION,
        x = num(PIE_WIDTH / 2.0),
    );
    out.push_str("<g id=\"slices\" stroke=\"#FFFFFF\" stroke-width=\"1\">\n");
    for s in pie_slices(summary) {
        let fill = colors
            .fill(&s.id)
            .map(|c| c.hex())
            .unwrap_or_else(|| colors.palette().missing.hex());
        let id = escape(&s.id);
        if s.sweep_deg >= 360.0 - 1e-9 {
            let _ = writeln!(
                out,
                "<circle data-id=\"{id}\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fill}\"/>",
                num(PIE_CENTER.0),
                num(PIE_CENTER.1),
                num(PIE_RADIUS)
            );
            continue;
        }
        let (x0, y0) = rim(s.start_deg);
        let (x1, y1) = rim(s.start_deg + s.sweep_deg);
        let large = if s.sweep_deg > 180.0 { 1 } else { 0 };
        let _ = writeln!(
            out,
            "<path data-id=\"{id}\" data-sweep=\"{sweep}\" fill=\"{fill}\" d=\"M{cx},{cy}L{x0},{y0}A{r},{r} 0 {large} 1 {x1},{y1}Z\"/>",
            sweep = s.sweep_deg,
            cx = num(PIE_CENTER.0),
            cy = num(PIE_CENTER.1),
            r = num(PIE_RADIUS),
            x0 = num(x0),
            y0 = num(y0),
            x1 = num(x1),
            y1 = num(y1),
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canvas_must_be_positive() {
        assert!(matches!(Canvas::new(0.0, 100.0), Err(Error::ZeroCanvas)));
        assert!(Canvas::new(10.0, 10.0).is_ok());
    }

    #[test]
    fn fit_preserves_aspect_and_flips_y() {
        let bbox = BBox {
            xmin: 0.0,
            ymin: 0.0,
            xmax: 2.0,
            ymax: 1.0,
        };
        let fit = Fit::new(
            bbox,
            Canvas {
                width: 220.0,
                height: 220.0,
            },
            false,
        )
        .unwrap();
        assert_eq!(fit.scale, 100.0);
        let p = fit.apply(Point::new(0.0, 1.0));
        assert_eq!((p.x, p.y), (10.0, 60.0));
        let q = fit.apply(Point::new(2.0, 0.0));
        assert_eq!((q.x, q.y), (210.0, 160.0));
    }

    #[test]
    fn escaping() {
        assert_eq!(escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
        assert_eq!(num(1.0), "1");
        assert_eq!(num(2.3456), "2.35");
        assert_eq!(num(2.5), "2.5");
        assert_eq!(num(-0.001), "0");
    }
}
