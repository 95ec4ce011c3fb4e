//! SVG pictures of instances, gadgets and realisations.
//!
//! Coordinates stay exact up to this point; they are written as decimals
//! with 9 significant digits. The y axis points up in the pictures.

use std::fmt::Write as _;

use num_traits::ToPrimitive;

use crate::gadgets::{GadgetGeometry, GadgetKind};
use crate::instance::{ImprecisePolyline, Realisation, ShapeKind};
use crate::{Point, Rat};

#[derive(Clone, Debug, PartialEq)]
pub struct RenderOptions {
    /// Space around the bounding box, in instance units. Must be positive.
    pub margin: f64,
    /// Pixels per instance unit.
    pub scale: f64,
    pub region_stroke: f64,
    pub path_stroke: f64,
    pub show_regions: bool,
    pub show_realisation: bool,
    pub show_anchors: bool,
    pub show_pivots: bool,
    /// Draw realisation edges in the false/true state colours when the scene
    /// carries edge classes.
    pub state_colors: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            margin: 2.0,
            scale: 20.0,
            region_stroke: 0.06,
            path_stroke: 0.08,
            show_regions: true,
            show_realisation: true,
            show_anchors: true,
            show_pivots: true,
            state_colors: false,
        }
    }
}

/// What to draw besides the instance's own regions.
#[derive(Clone, Debug, Default)]
pub struct Scene {
    /// Extra region marks drawn like the instance regions (literal regions of
    /// a clause drawn on its own, for instance).
    pub extra_regions: Vec<Point>,
    /// Pivot centres, drawn as X marks.
    pub pivots: Vec<Point>,
    /// Named points, drawn as small dots with a label.
    pub anchors: Vec<(String, Point)>,
    /// Per realisation edge: `Some(false)` for false-state edges,
    /// `Some(true)` for true-state edges.
    pub edge_classes: Vec<Option<bool>>,
}

impl Scene {
    /// The schematic view of a gadget: pivots become X marks, and a disk
    /// clause shows its literal regions.
    pub fn schematic(g: &GadgetGeometry) -> (ImprecisePolyline, Scene) {
        let mut scene = Scene::default();
        let mut keep = vec![true; g.regions.len()];
        let ranges = g.chain_ranges();
        let pivot_chains = match g.kind {
            GadgetKind::PivotDisk | GadgetKind::PivotVSeg => 0,
            _ => 1,
        };
        if pivot_chains > 0 {
            for r in ranges.iter().skip(1) {
                for i in r.clone() {
                    keep[i] = false;
                }
            }
            for (name, p) in &g.anchors {
                if name.starts_with("pivot") && !name.contains('.') {
                    scene.pivots.push(p.clone());
                }
            }
        }
        if g.kind == GadgetKind::ClauseDisk {
            for name in ["x1", "x2", "x3"] {
                scene.extra_regions.push(g.anchors[name].clone());
            }
            for name in ["pivot_left", "pivot_right"] {
                scene.pivots.push(g.anchors[name].clone());
            }
        }
        let regions = g
            .regions
            .iter()
            .zip(&keep)
            .filter(|(_, k)| **k)
            .map(|(r, _)| r.clone())
            .collect();
        let inst = ImprecisePolyline {
            shape: g.shape,
            regions,
        };
        (inst, scene)
    }
}

pub fn render_svg(
    inst: &ImprecisePolyline,
    r: Option<&Realisation>,
    opts: &RenderOptions,
) -> String {
    render_scene(inst, &Scene::default(), r, opts)
}

/// Decimal with 9 significant digits.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return "0".into();
    }
    let mag = v.abs().log10().floor() as i32;
    let digits = (8 - mag).max(0) as usize;
    let rounded = format!("{:.*}", digits, v);
    let s = if rounded.contains('.') {
        rounded
            .trim_end_matches('0')
            .trim_end_matches('.')
            .to_string()
    } else {
        rounded
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn f(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

pub fn render_scene(
    inst: &ImprecisePolyline,
    scene: &Scene,
    r: Option<&Realisation>,
    opts: &RenderOptions,
) -> String {
    assert!(opts.margin > 0.0, "margin must be positive");
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut add = |p: &Point| {
        xs.push(f(&p.x));
        ys.push(f(&p.y));
    };
    inst.regions.iter().for_each(|g| add(&g.center));
    scene.extra_regions.iter().for_each(&mut add);
    scene.pivots.iter().for_each(&mut add);
    scene.anchors.iter().for_each(|(_, p)| add(p));
    if let Some(r) = r {
        r.points.iter().for_each(&mut add);
    }
    let fold = |v: &[f64], init: f64, op: fn(f64, f64) -> f64| v.iter().copied().fold(init, op);
    let pad = opts.margin + 1.0;
    let (x0, x1) = (
        fold(&xs, f64::INFINITY, f64::min) - pad,
        fold(&xs, f64::NEG_INFINITY, f64::max) + pad,
    );
    let (y0, y1) = (
        fold(&ys, f64::INFINITY, f64::min) - pad,
        fold(&ys, f64::NEG_INFINITY, f64::max) + pad,
    );
    let (x0, x1, y0, y1) = if xs.is_empty() {
        (-1.0, 1.0, -1.0, 1.0)
    } else {
        (x0, x1, y0, y1)
    };
    let (w, h) = (x1 - x0, y1 - y0);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
        fmt_num(w * opts.scale),
        fmt_num(h * opts.scale),
        fmt_num(x0),
        fmt_num(-y1),
        fmt_num(w),
        fmt_num(h)
    );
    // Flip y so that the picture has the usual orientation.
    let px = |v: f64| fmt_num(v);
    let py = |v: f64| fmt_num(-v);

    if opts.show_regions {
        let _ = writeln!(
            out,
            "<g id=\"regions\" fill=\"#dde6f0\" fill-opacity=\"0.5\" stroke=\"#49698c\" stroke-width=\"{}\">",
            fmt_num(opts.region_stroke)
        );
        for c in inst
            .regions
            .iter()
            .map(|g| &g.center)
            .chain(scene.extra_regions.iter())
        {
            let (cx, cy) = (f(&c.x), f(&c.y));
            match inst.shape {
                ShapeKind::UnitDisk => {
                    let _ = writeln!(out, "<circle cx=\"{}\" cy=\"{}\" r=\"1\"/>", px(cx), py(cy));
                }
                ShapeKind::UnitSquare => {
                    let _ = writeln!(
                        out,
                        "<rect x=\"{}\" y=\"{}\" width=\"1\" height=\"1\"/>",
                        px(cx - 0.5),
                        py(cy + 0.5)
                    );
                }
                ShapeKind::UnitDiamond => {
                    let _ = writeln!(
                        out,
                        "<polygon points=\"{},{} {},{} {},{} {},{}\"/>",
                        px(cx),
                        py(cy + 1.0),
                        px(cx + 1.0),
                        py(cy),
                        px(cx),
                        py(cy - 1.0),
                        px(cx - 1.0),
                        py(cy)
                    );
                }
                ShapeKind::VSegment => {
                    let _ = writeln!(
                        out,
                        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                        px(cx),
                        py(cy - 1.0),
                        px(cx),
                        py(cy + 1.0)
                    );
                }
            }
        }
        out.push_str("</g>\n");
    }

    if opts.show_pivots && !scene.pivots.is_empty() {
        let _ = writeln!(
            out,
            "<g id=\"pivots\" stroke=\"#222222\" stroke-width=\"{}\">",
            fmt_num(opts.region_stroke * 2.0)
        );
        for p in &scene.pivots {
            let (cx, cy) = (f(&p.x), f(&p.y));
            let d = 0.6;
            let _ = writeln!(
                out,
                "<g class=\"x-mark\"><line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/><line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/></g>",
                px(cx - d),
                py(cy - d),
                px(cx + d),
                py(cy + d),
                px(cx - d),
                py(cy + d),
                px(cx + d),
                py(cy - d)
            );
        }
        out.push_str("</g>\n");
    }

    if opts.show_anchors && !scene.anchors.is_empty() {
        out.push_str(
            "<g id=\"anchors\" fill=\"#7a3b8f\" font-size=\"0.6\" font-family=\"sans-serif\">\n",
        );
        for (name, p) in &scene.anchors {
            let (cx, cy) = (f(&p.x), f(&p.y));
            let _ = writeln!(
                out,
                "<circle cx=\"{}\" cy=\"{}\" r=\"0.12\"/><text x=\"{}\" y=\"{}\">{}</text>",
                px(cx),
                py(cy),
                px(cx + 0.2),
                py(cy + 0.2),
                escape(name)
            );
        }
        out.push_str("</g>\n");
    }

    if let (true, Some(r)) = (opts.show_realisation, r) {
        let pts: Vec<(f64, f64)> = r.points.iter().map(|p| (f(&p.x), f(&p.y))).collect();
        let colored =
            opts.state_colors && scene.edge_classes.len() + 1 == pts.len() && pts.len() > 1;
        let _ = writeln!(
            out,
            "<g id=\"realisation\" fill=\"none\" stroke-width=\"{}\" stroke-linejoin=\"round\">",
            fmt_num(opts.path_stroke)
        );
        if colored {
            // One path per maximal run of edges with the same class.
            let mut start = 0;
            while start + 1 < pts.len() {
                let class = scene.edge_classes[start];
                let mut end = start + 1;
                while end + 1 < pts.len() && scene.edge_classes[end] == class {
                    end += 1;
                }
                let color = match class {
                    Some(false) => "#e8871e",
                    Some(true) => "#2a6fdb",
                    None => "#222222",
                };
                let _ = writeln!(
                    out,
                    "<path stroke=\"{}\" d=\"{}\"/>",
                    color,
                    path_data(&pts[start..=end])
                );
                start = end;
            }
        } else if !pts.is_empty() {
            let _ = writeln!(out, "<path stroke=\"#222222\" d=\"{}\"/>", path_data(&pts));
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

fn path_data(pts: &[(f64, f64)]) -> String {
    let mut d = String::new();
    for (i, (x, y)) in pts.iter().enumerate() {
        let _ = write!(
            d,
            "{}{} {}",
            if i == 0 { "M" } else { " L" },
            fmt_num(*x),
            fmt_num(-*y)
        );
    }
    d
}
