//! Static SVG rendering of sampled limit sets and domains: sample lines as
//! dots, functional kernels as lines, the hull polygon, and the half-space
//! intersection clipped to the viewport. One group element per layer.

use anosov_core::boundary::BoundarySample;
use anosov_core::mat::{self};

use crate::io::fmt17;
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Layer {
    XiPoints,
    EtaLines,
    Hull,
    OmegaOutline,
}

impl Layer {
    pub fn parse(s: &str) -> Result<Layer, CliError> {
        match s {
            "xi_points" => Ok(Layer::XiPoints),
            "eta_lines" => Ok(Layer::EtaLines),
            "hull" => Ok(Layer::Hull),
            "omega_outline" => Ok(Layer::OmegaOutline),
            _ => Err(CliError::Parse(format!("unknown layer {s:?}"))),
        }
    }
}

pub struct RenderSpec {
    pub width: usize,
    pub height: usize,
    pub layers: Vec<Layer>,
}

/// Planar coordinates of the chart slice: an orthonormal pair spanning the
/// complement of the chart covector, with the chart base point as origin.
struct ChartFrame {
    chart: Vec<f64>,
    origin: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
}

impl ChartFrame {
    fn new(chart: &[f64]) -> Result<ChartFrame, CliError> {
        let d = chart.len();
        if d != 3 {
            return Err(CliError::UnsupportedDimension(d));
        }
        let c = mat::unit(chart);
        // base point of the chart plane: chart . origin = 1
        let n2 = mat::dot(&c, &c);
        let origin: Vec<f64> = c.iter().map(|x| x / n2).collect();
        // orthonormal complement via Gram-Schmidt over the standard basis
        let mut cands: Vec<Vec<f64>> = Vec::with_capacity(d + 1);
        cands.push(c.clone());
        for i in 0..d {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            cands.push(e);
        }
        let basis = mat::gram_schmidt(&cands, 1e-9);
        if basis.len() < 3 {
            return Err(CliError::Parse("degenerate chart".into()));
        }
        Ok(ChartFrame {
            chart: c,
            origin,
            u1: basis[1].clone(),
            u2: basis[2].clone(),
        })
    }

    /// Planar coordinates of a projective point, if it meets the chart.
    fn point(&self, v: &[f64]) -> Option<(f64, f64)> {
        let c = mat::dot(&self.chart, v);
        if c.abs() < 1e-12 * mat::norm(v) {
            return None;
        }
        let p: Vec<f64> = v.iter().map(|x| x / c).collect();
        let rel: Vec<f64> = p.iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        Some((mat::dot(&rel, &self.u1), mat::dot(&rel, &self.u2)))
    }

    /// Coefficients (a, b, c) of a functional's kernel line
    /// a x + b y + c = 0 in planar coordinates.
    fn line(&self, f: &[f64]) -> (f64, f64, f64) {
        let a = mat::dot(f, &self.u1);
        let b = mat::dot(f, &self.u2);
        let c = mat::dot(f, &self.origin);
        (a, b, c)
    }
}

/// Clip the convex polygon by the half-plane a x + b y + c >= 0.
fn clip_polygon(poly: &[(f64, f64)], (a, b, c): (f64, f64, f64)) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let n = poly.len();
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let fp = a * p.0 + b * p.1 + c;
        let fq = a * q.0 + b * q.1 + c;
        if fp >= 0.0 {
            out.push(p);
        }
        if (fp > 0.0 && fq < 0.0) || (fp < 0.0 && fq > 0.0) {
            let t = fp / (fp - fq);
            out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
        }
    }
    out
}

/// Render samples (dimension 3, or a coordinate slice chosen upstream) to a
/// standalone SVG document.
pub fn render_svg(
    samples: &[BoundarySample],
    chart: &[f64],
    spec: &RenderSpec,
) -> Result<String, CliError> {
    let frame = ChartFrame::new(chart)?;
    let pts: Vec<(f64, f64)> = samples.iter().filter_map(|s| frame.point(&s.xi)).collect();

    // world window: fit the points with a 15% margin; an empty sample set
    // gets the unit window
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (-1.0_f64, 1.0_f64, -1.0_f64, 1.0_f64);
    if !pts.is_empty() {
        lo_x = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        hi_x = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        lo_y = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        hi_y = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let mx = (hi_x - lo_x).max(1e-6) * 0.15;
        let my = (hi_y - lo_y).max(1e-6) * 0.15;
        lo_x -= mx;
        hi_x += mx;
        lo_y -= my;
        hi_y += my;
    }
    let w = spec.width as f64;
    let h = spec.height as f64;
    let sx = w / (hi_x - lo_x);
    let sy = h / (hi_y - lo_y);
    let to_px = |(x, y): (f64, f64)| ((x - lo_x) * sx, h - (y - lo_y) * sy);

    let mut svg = String::new();
    svg.push_str(r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    svg.push('\n');
    svg.push_str(&format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        spec.width, spec.height, spec.width, spec.height
    ));
    svg.push('\n');

    for layer in &spec.layers {
        match layer {
            Layer::OmegaOutline => {
                // intersect the world window with every half-plane
                let mut poly = vec![(lo_x, lo_y), (hi_x, lo_y), (hi_x, hi_y), (lo_x, hi_y)];
                for s in samples {
                    poly = clip_polygon(&poly, frame.line(&s.eta));
                    if poly.is_empty() {
                        break;
                    }
                }
                svg.push_str("<g id=\"omega_outline\">");
                let path = polygon_path(&poly.iter().map(|&p| to_px(p)).collect::<Vec<_>>());
                svg.push_str(&format!(
                    "<path d=\"{path}\" fill=\"none\" stroke=\"#2b6cb0\" stroke-width=\"1.5\"/>"
                ));
                svg.push_str("</g>\n");
            }
            Layer::Hull => {
                // convex position order: sort by angle around the centroid
                let mut ordered = pts.clone();
                if !ordered.is_empty() {
                    let cx = ordered.iter().map(|p| p.0).sum::<f64>() / ordered.len() as f64;
                    let cy = ordered.iter().map(|p| p.1).sum::<f64>() / ordered.len() as f64;
                    ordered.sort_by(|a, b| {
                        let ta = (a.1 - cy).atan2(a.0 - cx);
                        let tb = (b.1 - cy).atan2(b.0 - cx);
                        ta.partial_cmp(&tb).unwrap()
                    });
                }
                svg.push_str("<g id=\"hull\">");
                let path = polygon_path(&ordered.iter().map(|&p| to_px(p)).collect::<Vec<_>>());
                svg.push_str(&format!(
                    "<path d=\"{path}\" fill=\"#fde68a\" fill-opacity=\"0.4\" stroke=\"#b45309\" stroke-width=\"1\"/>"
                ));
                svg.push_str("</g>\n");
            }
            Layer::EtaLines => {
                svg.push_str("<g id=\"eta_lines\">");
                let window = [(lo_x, lo_y), (hi_x, lo_y), (hi_x, hi_y), (lo_x, hi_y)];
                for s in samples {
                    let (a, b, c) = frame.line(&s.eta);
                    // intersect the kernel line with the window edges
                    let mut ends: Vec<(f64, f64)> = Vec::new();
                    for i in 0..4 {
                        let p = window[i];
                        let q = window[(i + 1) % 4];
                        let fp = a * p.0 + b * p.1 + c;
                        let fq = a * q.0 + b * q.1 + c;
                        let crosses = (fp <= 0.0 && fq >= 0.0) || (fp >= 0.0 && fq <= 0.0);
                        if crosses && (fp - fq).abs() > 1e-300 {
                            let t = fp / (fp - fq);
                            ends.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
                        }
                    }
                    if ends.len() >= 2 {
                        let (x1, y1) = to_px(ends[0]);
                        let (x2, y2) = to_px(ends[1]);
                        svg.push_str(&format!(
                            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#9ca3af\" stroke-width=\"0.5\"/>",
                            fmt17(x1), fmt17(y1), fmt17(x2), fmt17(y2)
                        ));
                    }
                }
                svg.push_str("</g>\n");
            }
            Layer::XiPoints => {
                svg.push_str("<g id=\"xi_points\">");
                for &p in &pts {
                    let (x, y) = to_px(p);
                    svg.push_str(&format!(
                        "<circle cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"#991b1b\"/>",
                        fmt17(x),
                        fmt17(y)
                    ));
                }
                svg.push_str("</g>\n");
            }
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn polygon_path(pts: &[(f64, f64)]) -> String {
    if pts.is_empty() {
        return String::from("M 0 0");
    }
    let mut d = format!("M {} {}", fmt17(pts[0].0), fmt17(pts[0].1));
    for p in &pts[1..] {
        d.push_str(&format!(" L {} {}", fmt17(p.0), fmt17(p.1)));
    }
    d.push_str(" Z");
    d
}
