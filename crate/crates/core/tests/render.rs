mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use wspoly::gadgets::{build_gadget, GadgetKind, GadgetParams};
use wspoly::instance::{ImprecisePolyline, Realisation, Region, ShapeKind};
use wspoly::reduction::{assignment_to_realisation, compile, state_scene};
use wspoly::render::{render_scene, render_svg, RenderOptions, Scene};
use wspoly::sat::brute_force_sat;
use wspoly::{pt, rat, Point};

const SHAPES: [ShapeKind; 4] = [
    ShapeKind::UnitDisk,
    ShapeKind::UnitSquare,
    ShapeKind::UnitDiamond,
    ShapeKind::VSegment,
];

/// Element name counts; panics if the text is not well-formed XML.
fn tags(svg: &str) -> BTreeMap<String, usize> {
    let doc = roxmltree::Document::parse(svg).expect("well-formed svg");
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    let mut out = BTreeMap::new();
    for n in doc.descendants().filter(|n| n.is_element()) {
        *out.entry(n.tag_name().name().to_string()).or_default() += 1;
    }
    out
}

fn region_tag(shape: ShapeKind) -> &'static str {
    match shape {
        ShapeKind::UnitDisk => "circle",
        ShapeKind::UnitSquare => "rect",
        ShapeKind::UnitDiamond => "polygon",
        ShapeKind::VSegment => "line",
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn element_counts_depend_only_on_size(s in 0usize..4, a in prop::collection::vec((-20i64..20, -20i64..20, 1i64..4), 2..10), shift in -7i64..7, with_path in any::<bool>()) {
        let shape = SHAPES[s];
        let inst = |d: i64| {
            let regions = a.iter().map(|&(x, y, q)| Region::new(Point::new(rat(x + d, q), rat(y - d, q)))).collect();
            ImprecisePolyline::new(shape, regions).unwrap()
        };
        let (i1, i2) = (inst(0), inst(shift));
        let real = |i: &ImprecisePolyline| Realisation::new(i.regions.iter().map(|r| r.center.clone()).collect());
        let (r1, r2) = (real(&i1), real(&i2));
        let opts = RenderOptions::default();
        let t1 = tags(&render_svg(&i1, with_path.then_some(&r1), &opts));
        let t2 = tags(&render_svg(&i2, with_path.then_some(&r2), &opts));
        prop_assert_eq!(&t1, &t2);
        prop_assert_eq!(t1.get(region_tag(shape)).copied().unwrap_or(0), a.len());
        prop_assert_eq!(t1.get("path").copied().unwrap_or(0), with_path as usize);
    }
}

#[test]
fn hidden_layers_are_omitted() {
    let inst = ImprecisePolyline::new(
        ShapeKind::UnitDisk,
        vec![Region::new(pt(0, 0)), Region::new(pt(3, 0))],
    )
    .unwrap();
    let opts = RenderOptions {
        show_regions: false,
        ..RenderOptions::default()
    };
    assert_eq!(tags(&render_svg(&inst, None, &opts)).get("circle"), None);
}

#[test]
fn gadget_schematics_are_well_formed() {
    for name in [
        "pivot-disk",
        "pivot-vseg",
        "variable",
        "clause-disk",
        "clause-vseg",
        "wire-disk-left",
        "wire-vseg-middle",
    ] {
        let kind = GadgetKind::parse(name).unwrap();
        let (inst, scene) =
            Scene::schematic(&build_gadget(kind, &GadgetParams::standard(kind)).unwrap());
        let t = tags(&render_scene(
            &inst,
            &scene,
            None,
            &RenderOptions::default(),
        ));
        assert!(
            t.get(region_tag(inst.shape)).copied().unwrap_or(0) >= inst.len(),
            "{name}"
        );
    }
}

#[test]
fn state_colours_split_the_path() {
    let (f, lay) = common::fig_example();
    let c = compile(&f, &lay, ShapeKind::VSegment).unwrap();
    let r = assignment_to_realisation(&c, &brute_force_sat(&f).unwrap().unwrap()).unwrap();
    let scene = state_scene(&c, &r).unwrap();
    let opts = RenderOptions {
        state_colors: true,
        ..RenderOptions::default()
    };
    let svg = render_scene(&c.instance, &scene, Some(&r), &opts);
    assert!(tags(&svg)["path"] > 1);
    assert!(svg.contains("#2a6fdb"));
}
