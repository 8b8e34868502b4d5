//! Deterministic SVG output of circles, curves and markers.
//!
//! The document's viewBox is the scene's bounding box grown by 5% per side,
//! with the y axis flipped so that the picture is in mathematical
//! orientation. Stroke widths are screen units (`vector-effect`), so thin
//! and thick lines look the same whatever the coordinate scale.

use std::fmt::Write as _;

use thiserror::Error;

use crate::envelope::CircleFamily;
use crate::geom::Vec2;
use crate::mohr::{FailureLine, MohrCircle};

/// Most family members drawn by [`family_scene`] with the default stride.
pub const MAX_CIRCLES: usize = 60;
const MARGIN: f64 = 0.05;
const WIDTH_PX: f64 = 800.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenderError {
    #[error("scene is empty")]
    Empty,
    #[error("item {index} has non-finite coordinates")]
    NonFinite { index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Thin,
    Thick,
    Dashed,
    Marker,
}

impl Style {
    fn width(self) -> f64 {
        match self {
            Style::Thin | Style::Dashed => 0.5,
            Style::Thick | Style::Marker => 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Circle { center: Vec2, radius: f64 },
    Polyline(Vec<Vec2>),
    Marker(Vec2),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Item {
    pub shape: Shape,
    pub style: Style,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Scene {
    pub items: Vec<Item>,
    pub title: String,
}

impl Scene {
    pub fn new(title: impl Into<String>) -> Self {
        Scene { items: Vec::new(), title: title.into() }
    }

    pub fn circle(mut self, center: Vec2, radius: f64, style: Style) -> Self {
        self.items.push(Item { shape: Shape::Circle { center, radius }, style });
        self
    }

    pub fn polyline(mut self, points: Vec<Vec2>, style: Style) -> Self {
        self.items.push(Item { shape: Shape::Polyline(points), style });
        self
    }

    pub fn marker(mut self, point: Vec2) -> Self {
        self.items.push(Item { shape: Shape::Marker(point), style: Style::Marker });
        self
    }

    pub fn count_circles(&self) -> usize {
        self.items.iter().filter(|i| matches!(i.shape, Shape::Circle { .. })).count()
    }

    pub fn count_polylines(&self) -> usize {
        self.items.iter().filter(|i| matches!(i.shape, Shape::Polyline(_))).count()
    }

    fn validate(&self) -> Result<(), RenderError> {
        if self.items.is_empty() {
            return Err(RenderError::Empty);
        }
        for (index, item) in self.items.iter().enumerate() {
            let finite = match &item.shape {
                Shape::Circle { center, radius } => center.is_finite() && radius.is_finite(),
                Shape::Polyline(pts) => pts.iter().all(|p| p.is_finite()),
                Shape::Marker(p) => p.is_finite(),
            };
            if !finite {
                return Err(RenderError::NonFinite { index });
            }
        }
        Ok(())
    }

    /// Bounding box `(min, max)` of all items.
    pub fn bbox(&self) -> Option<(Vec2, Vec2)> {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut add = |p: Vec2, r: f64| {
            lo = Vec2::new(lo.x.min(p.x - r), lo.y.min(p.y - r));
            hi = Vec2::new(hi.x.max(p.x + r), hi.y.max(p.y + r));
        };
        for item in &self.items {
            match &item.shape {
                Shape::Circle { center, radius } => add(*center, radius.abs()),
                Shape::Polyline(pts) => pts.iter().for_each(|&p| add(p, 0.0)),
                Shape::Marker(p) => add(*p, 0.0),
            }
        }
        (lo.x <= hi.x && lo.y <= hi.y).then_some((lo, hi))
    }
}

/// `(x, y, width, height)` of the flipped viewBox.
pub fn view_box(scene: &Scene) -> Result<(f64, f64, f64, f64), RenderError> {
    scene.validate()?;
    let (lo, hi) = scene.bbox().ok_or(RenderError::Empty)?;
    // a zero extent falls back to a unit box around the centre
    let span = |a: f64, b: f64| if b - a > 0.0 { (a, b) } else { ((a + b) / 2.0 - 0.5, (a + b) / 2.0 + 0.5) };
    let (x0, x1) = span(lo.x, hi.x);
    let (y0, y1) = span(lo.y, hi.y);
    let (mx, my) = (MARGIN * (x1 - x0), MARGIN * (y1 - y0));
    Ok((x0 - mx, -(y1 + my), x1 - x0 + 2.0 * mx, y1 - y0 + 2.0 * my))
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn stroke_attrs(style: Style) -> String {
    let mut s = format!("fill=\"none\" stroke=\"black\" stroke-width=\"{}\" vector-effect=\"non-scaling-stroke\"", style.width());
    if style == Style::Dashed {
        s.push_str(" stroke-dasharray=\"4 3\"");
    }
    s
}

/// Renders the scene as an SVG 1.1 document; identical scenes give identical bytes.
pub fn render_svg(scene: &Scene) -> Result<String, RenderError> {
    let (vx, vy, vw, vh) = view_box(scene)?;
    let mut out = String::new();
    let height_px = (WIDTH_PX * vh / vw).clamp(1.0, 10.0 * WIDTH_PX);
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{:.0}\" viewBox=\"{} {} {} {}\">",
        WIDTH_PX, height_px, vx, vy, vw, vh
    );
    let _ = writeln!(out, "<title>{}</title>", escape(&scene.title));
    out.push_str("<g transform=\"scale(1,-1)\">\n");
    let marker_size = 0.01 * vw.max(vh);
    for item in &scene.items {
        let attrs = stroke_attrs(item.style);
        match &item.shape {
            Shape::Circle { center, radius } => {
                let _ = writeln!(out, "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" {}/>", center.x, center.y, radius.abs(), attrs);
            }
            Shape::Polyline(pts) => {
                let coords: Vec<String> = pts.iter().map(|p| format!("{},{}", p.x, p.y)).collect();
                let _ = writeln!(out, "<polyline points=\"{}\" {}/>", coords.join(" "), attrs);
            }
            Shape::Marker(p) => {
                let d = marker_size;
                let _ = writeln!(
                    out,
                    "<path d=\"M{} {} L{} {} M{} {} L{} {}\" {}/>",
                    p.x - d, p.y - d, p.x + d, p.y + d, p.x - d, p.y + d, p.x + d, p.y - d, attrs
                );
            }
        }
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

/// Stride that draws at most [`MAX_CIRCLES`] of `n` family members.
pub fn default_stride(n: usize) -> usize {
    n.div_ceil(MAX_CIRCLES).max(1)
}

/// Every `stride`-th circle of the family, thin.
pub fn family_scene(family: &CircleFamily, stride: usize, title: impl Into<String>) -> Scene {
    let fd = &family.frontal;
    (0..family.len())
        .step_by(stride.max(1))
        .fold(Scene::new(title), |s, i| s.circle(fd.gamma[i], family.lambda[i], Style::Thin))
}

/// Mohr circles, the fitted line (dashed) and, if given, the curved envelope (thick).
pub fn mohr_scene(circles: &[MohrCircle], line: &FailureLine, envelope: Option<&[Vec2]>) -> Scene {
    let mut scene = circles
        .iter()
        .fold(Scene::new("Mohr failure envelope"), |s, c| s.circle(Vec2::new(c.center_s, 0.0), c.radius_r, Style::Thin));
    let x_max = circles.iter().map(|c| c.center_s + c.radius_r).fold(0.0, f64::max);
    scene = scene.polyline(vec![Vec2::new(0.0, line.tau(0.0)), Vec2::new(x_max, line.tau(x_max))], Style::Dashed);
    if let Some(pts) = envelope {
        scene = scene.polyline(pts.to_vec(), Style::Thick);
    }
    scene
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(svg: &str, tag: &str) -> usize {
        svg.matches(&format!("<{} ", tag)).count()
    }

    #[test]
    fn empty_scene_is_an_error() {
        assert_eq!(render_svg(&Scene::new("empty")), Err(RenderError::Empty));
    }

    #[test]
    fn non_finite_items_are_rejected() {
        let s = Scene::new("x").marker(Vec2::new(0.0, 0.0)).marker(Vec2::new(f64::NAN, 0.0));
        assert_eq!(render_svg(&s), Err(RenderError::NonFinite { index: 1 }));
    }

    #[test]
    fn single_marker_gets_a_unit_box() {
        let s = Scene::new("origin").marker(Vec2::new(0.0, 0.0));
        let (x, y, w, h) = view_box(&s).unwrap();
        assert!((w - 1.1).abs() < 1e-12 && (h - 1.1).abs() < 1e-12);
        assert!((x + w / 2.0).abs() < 1e-12 && (y + h / 2.0).abs() < 1e-12);
    }

    #[test]
    fn view_box_grows_by_five_percent_and_flips() {
        let s = Scene::new("c").circle(Vec2::new(1.0, 2.0), 1.0, Style::Thin);
        let (x, y, w, h) = view_box(&s).unwrap();
        assert!((x - (0.0 - 0.1)).abs() < 1e-12);
        assert!((y - -(3.0 + 0.1)).abs() < 1e-12);
        assert!((w - 2.2).abs() < 1e-12 && (h - 2.2).abs() < 1e-12);
    }

    #[test]
    fn elements_and_styles() {
        let s = Scene::new("a < b")
            .circle(Vec2::new(0.0, 0.0), 1.0, Style::Thin)
            .circle(Vec2::new(1.0, 0.0), 1.0, Style::Dashed)
            .polyline(vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0)], Style::Thick)
            .marker(Vec2::new(0.5, 0.5));
        let svg = render_svg(&s).unwrap();
        assert_eq!(count(&svg, "circle"), 2);
        assert_eq!(count(&svg, "polyline"), 1);
        assert_eq!(count(&svg, "path"), 1);
        assert!(svg.contains("stroke-dasharray=\"4 3\""));
        assert!(svg.contains("stroke-width=\"2\""));
        assert!(svg.contains("stroke-width=\"0.5\""));
        assert!(svg.contains("<title>a &lt; b</title>"));
        assert_eq!(svg, render_svg(&s).unwrap());
    }

    #[test]
    fn stride_caps_circle_count() {
        for n in [1, 59, 60, 61, 2001, 10_000] {
            let k = default_stride(n);
            assert!((0..n).step_by(k).count() <= MAX_CIRCLES, "n = {}", n);
        }
    }
}
