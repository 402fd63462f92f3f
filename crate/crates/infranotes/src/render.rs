//! Deterministic SVG output for a composed page.

use std::fmt::Write;

use infranotes_core::assemble::{Layer, LayerKind, SceneGraph};
use infranotes_core::model::BBox;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SvgStyle {
    pub stroke_width: f64,
    pub margin: f64,
    /// Draw a dashed outline around each mask.
    pub outline_masks: bool,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle { stroke_width: 1.5, margin: 10.0, outline_masks: false }
    }
}

/// Three decimals, with negative zero printed as zero.
fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

fn layer_name(l: &Layer) -> String {
    match l.kind {
        LayerKind::Line => format!("line-{}", l.id),
        LayerKind::Mask => format!("mask-{}", l.id),
    }
}

/// Board coordinates have y up; SVG has y down, so y is negated.
fn rect(out: &mut String, b: &BBox, attrs: &str) {
    let _ = writeln!(
        out,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" {attrs}/>",
        num(b.min_x),
        num(-b.max_y),
        num(b.width()),
        num(b.height())
    );
}

pub fn render_svg(scene: &SceneGraph, style: &SvgStyle) -> String {
    let view = scene.bbox().unwrap_or(BBox::new(0.0, 0.0, 0.0, 0.0));
    let m = style.margin;
    let view = BBox::new(view.min_x - m, view.max_x + m, view.min_y - m, view.max_y + m);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"{}mm\" height=\"{}mm\">",
        num(view.min_x),
        num(-view.max_y),
        num(view.width()),
        num(view.height()),
        num(view.width()),
        num(view.height())
    );
    let _ = writeln!(out, "<title>page {} as of {}</title>", scene.page_id, num(scene.as_of));
    let masked: Vec<&Layer> = scene.layers.iter().filter(|l| !l.holes.is_empty()).collect();
    if !masked.is_empty() {
        out.push_str("<defs>\n");
        for l in masked {
            let _ = writeln!(out, "<mask id=\"hide-{}\" maskUnits=\"userSpaceOnUse\">", layer_name(l));
            rect(&mut out, &view, "fill=\"white\"");
            for h in &l.holes {
                rect(&mut out, h, "fill=\"black\"");
            }
            out.push_str("</mask>\n");
        }
        out.push_str("</defs>\n");
    }
    let _ = writeln!(out, "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"white\"/>", num(view.min_x), num(-view.max_y), num(view.width()), num(view.height()));
    for l in &scene.layers {
        let name = layer_name(l);
        let mask = if l.holes.is_empty() { String::new() } else { format!(" mask=\"url(#hide-{name})\"") };
        let _ = writeln!(
            out,
            "<g id=\"{name}\" data-created=\"{}\"{mask} fill=\"none\" stroke=\"black\" stroke-width=\"{}\" stroke-linecap=\"round\" stroke-linejoin=\"round\">",
            num(l.created_t),
            num(style.stroke_width)
        );
        for s in &l.strokes {
            out.push_str("<polyline points=\"");
            for (i, p) in s.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{},{}", num(p.0), num(-p.1));
            }
            out.push_str("\"/>\n");
        }
        if style.outline_masks && l.kind == LayerKind::Mask {
            rect(&mut out, &l.bbox, "stroke=\"gray\" stroke-width=\"0.5\" stroke-dasharray=\"2 2\"");
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}
