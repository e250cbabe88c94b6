//! SVG output for genes on a mesh and for frontier scatter plots.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::genes::Gene;
use crate::metrics::MeshContext;
use crate::optimize::ParetoFrontier;

#[derive(Debug, Clone, PartialEq)]
pub struct RenderStyle {
    /// Canvas width in pixels; the height follows the mesh aspect ratio.
    pub width: f64,
    pub margin: f64,
    pub fill: String,
    pub empty: String,
    pub outline: String,
    pub slot: String,
    pub point: String,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            width: 600.0,
            margin: 10.0,
            fill: "#1f4e79".into(),
            empty: "#ffffff".into(),
            outline: "#b0b0b0".into(),
            slot: "#d62728".into(),
            point: "#ff7f0e".into(),
        }
    }
}

impl RenderStyle {
    pub fn validate(&self) -> Result<()> {
        if !(self.width.is_finite() && self.width > 0.0) {
            return Err(Error::Config(format!("canvas width {} must be positive", self.width)));
        }
        if !(self.margin.is_finite() && self.margin >= 0.0 && 2.0 * self.margin < self.width) {
            return Err(Error::Config(format!("margin {} does not fit the canvas", self.margin)));
        }
        let colors = [&self.fill, &self.empty, &self.slot, &self.point];
        for (i, a) in colors.iter().enumerate() {
            if colors[i + 1..].contains(a) {
                return Err(Error::Config(format!("color {a} is used for two roles")));
            }
        }
        Ok(())
    }
}

struct Frame {
    min: [f64; 2],
    scale: f64,
    margin: f64,
    height: f64,
}

impl Frame {
    fn fit(points: &[[f64; 2]], style: &RenderStyle) -> Frame {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in points {
            for k in 0..2 {
                min[k] = min[k].min(p[k]);
                max[k] = max[k].max(p[k]);
            }
        }
        let span = [(max[0] - min[0]).max(1e-300), (max[1] - min[1]).max(1e-300)];
        let inner = style.width - 2.0 * style.margin;
        let scale = inner / span[0];
        Frame {
            min,
            scale,
            margin: style.margin,
            height: span[1] * scale + 2.0 * style.margin,
        }
    }

    // SVG y grows downwards.
    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (
            self.margin + (p[0] - self.min[0]) * self.scale,
            self.height - self.margin - (p[1] - self.min[1]) * self.scale,
        )
    }
}

fn header(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.2}" height="{height:.2}" viewBox="0 0 {width:.2} {height:.2}">"#
    );
}

/// Draws every triangle (enabled ones filled), slot edges as thick strokes
/// and problematic nodes as circles.
pub fn render_gene_svg(ctx: &MeshContext, gene: &Gene, style: &RenderStyle) -> Result<String> {
    style.validate()?;
    ctx.check_gene(gene)?;
    let mesh = ctx.mesh();
    let enabled = ctx.enabled_triangles(gene)?;
    let frame = Frame::fit(mesh.nodes(), style);
    let stroke = (frame.scale * 0.02).clamp(0.5, 2.0);

    let mut out = String::new();
    header(&mut out, style.width, frame.height);
    let _ = writeln!(out, r#"<g id="triangles" stroke="{}" stroke-width="{stroke:.2}">"#, style.outline);
    for (i, tri) in mesh.triangles().iter().enumerate() {
        let pts: Vec<String> = tri
            .iter()
            .map(|&n| {
                let (x, y) = frame.map(mesh.nodes()[n]);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let color = if enabled.bits()[i] { &style.fill } else { &style.empty };
        let _ = writeln!(out, r#"<polygon data-index="{i}" points="{}" fill="{color}"/>"#, pts.join(" "));
    }
    out.push_str("</g>\n");

    if let Gene::Basis(g) = gene {
        let edges = ctx.graph().mesh_edges().unwrap_or(&[]);
        let _ = writeln!(out, r#"<g id="slots" stroke="{}" stroke-width="{:.2}">"#, style.slot, 3.0 * stroke);
        for k in ctx.slot_positions(g)? {
            let [a, b] = edges[k];
            let (x1, y1) = frame.map(mesh.nodes()[a]);
            let (x2, y2) = frame.map(mesh.nodes()[b]);
            let _ = writeln!(
                out,
                r#"<line data-index="{k}" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#
            );
        }
        out.push_str("</g>\n");
    }

    let radius = (frame.scale * 0.08).clamp(2.0, 6.0);
    let _ = writeln!(out, r#"<g id="points" fill="{}">"#, style.point);
    for n in ctx.problematic_nodes(gene)? {
        let (x, y) = frame.map(mesh.nodes()[n]);
        let _ = writeln!(out, r#"<circle data-index="{n}" cx="{x:.3}" cy="{y:.3}" r="{radius:.2}"/>"#);
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

/// Scatter plot of the first two objectives of every record. Non-dominated
/// records are filled, dominated ones drawn as outlines.
pub fn render_frontier_svg(frontier: &ParetoFrontier, style: &RenderStyle) -> Result<String> {
    style.validate()?;
    if frontier.terms.len() < 2 {
        return Err(Error::Config("frontier plot needs at least two objectives".into()));
    }
    let points: Vec<[f64; 2]> = frontier
        .records
        .iter()
        .map(|r| [r.objectives[0], r.objectives[1]])
        .collect();
    if points.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Objective("non-finite objective in frontier".into()));
    }
    // Square plot area regardless of the objective ranges.
    let mut frame = Frame::fit(&points, style);
    let span_y = points.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max)
        - points.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min);
    let inner = style.width - 2.0 * style.margin;
    let span_x = inner / frame.scale;
    frame.height = style.width;
    let sy = inner / span_y.max(1e-300);
    let map = |p: [f64; 2]| {
        (
            style.margin + (p[0] - frame.min[0]) / span_x * inner,
            frame.height - style.margin - (p[1] - frame.min[1]) * sy,
        )
    };

    let mut out = String::new();
    header(&mut out, style.width, frame.height);
    let _ = writeln!(
        out,
        r#"<g id="axes" stroke="{}"><line x1="{m}" y1="{b}" x2="{r}" y2="{b}"/><line x1="{m}" y1="{b}" x2="{m}" y2="{m}"/></g>"#,
        style.outline,
        m = style.margin,
        b = frame.height - style.margin,
        r = style.width - style.margin,
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="10">{} vs {}</text>"#,
        style.margin,
        style.margin,
        frontier.terms[1],
        frontier.terms[0]
    );
    out.push_str("<g id=\"records\">\n");
    for (i, (r, p)) in frontier.records.iter().zip(&points).enumerate() {
        let (x, y) = map(*p);
        let fill = if r.nondominated { style.fill.as_str() } else { "none" };
        let _ = writeln!(
            out,
            r#"<circle data-index="{i}" cx="{x:.3}" cy="{y:.3}" r="4" fill="{fill}" stroke="{}"/>"#,
            style.fill
        );
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genes::{parse_bits, Encoding};
    use crate::mesh::generate_plate;
    use crate::optimize::{pareto_sweep, SweepOptions, TermKind};
    use std::sync::Arc;

    fn count(doc: &roxmltree::Document, tag: &str) -> usize {
        doc.descendants().filter(|n| n.has_tag_name(tag)).count()
    }

    #[test]
    fn gene_svg_structure() {
        let ctx = MeshContext::new(generate_plate(2, 2).unwrap()).unwrap();
        // Two enabled basis functions in diagonal cells, touching at the centre.
        let mut bits = parse_bits(&"0".repeat(ctx.basis_count())).unwrap();
        let edges = ctx.graph().edges().to_vec();
        let k0 = edges.iter().position(|e| *e == [0, 1]).unwrap();
        let k1 = edges.iter().position(|e| *e == [6, 7]).unwrap();
        bits.set(k0, true);
        bits.set(k1, true);
        let gene = Gene::from_bits(Encoding::Basis, bits);
        let svg = render_gene_svg(&ctx, &gene, &RenderStyle::default()).unwrap();
        let doc = roxmltree::Document::parse(&svg).unwrap();
        assert_eq!(count(&doc, "polygon"), 8);
        let filled = doc
            .descendants()
            .filter(|n| n.has_tag_name("polygon") && n.attribute("fill") == Some("#1f4e79"))
            .count();
        assert_eq!(filled, 4);
        assert_eq!(count(&doc, "circle"), 1);
        assert_eq!(count(&doc, "line"), 0);
    }

    #[test]
    fn slots_are_drawn() {
        let ctx = MeshContext::new(generate_plate(2, 1).unwrap()).unwrap();
        let gene = Gene::from_bits(Encoding::Basis, parse_bits("101").unwrap());
        let svg = render_gene_svg(&ctx, &gene, &RenderStyle::default()).unwrap();
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let lines: Vec<_> = doc.descendants().filter(|n| n.has_tag_name("line")).collect();
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].attribute("data-index"), Some("1"));
    }

    #[test]
    fn style_validation() {
        let bad = [
            RenderStyle { width: 0.0, ..Default::default() },
            RenderStyle { margin: 400.0, ..Default::default() },
            RenderStyle { slot: "#1f4e79".into(), ..Default::default() },
        ];
        for style in bad {
            assert!(style.validate().is_err());
        }
        let ctx = MeshContext::new(generate_plate(1, 1).unwrap()).unwrap();
        let wrong = Gene::from_bits(Encoding::Triangle, parse_bits("111").unwrap());
        assert!(render_gene_svg(&ctx, &wrong, &RenderStyle::default()).is_err());
    }

    #[test]
    fn frontier_svg_has_one_marker_per_record() {
        let ctx = Arc::new(MeshContext::new(generate_plate(3, 3).unwrap()).unwrap());
        let a = TermKind::Surrogate.build(ctx.clone(), Encoding::Triangle).unwrap();
        let b = TermKind::RArea.build(ctx.clone(), Encoding::Triangle).unwrap();
        let opts = SweepOptions { budget: 300, ..Default::default() };
        let f = pareto_sweep(a, b, &[0.0, 0.25, 0.5, 0.75, 1.0], 18, &opts).unwrap();
        let svg = render_frontier_svg(&f, &RenderStyle::default()).unwrap();
        let doc = roxmltree::Document::parse(&svg).unwrap();
        assert_eq!(count(&doc, "circle"), 5);
    }
}
