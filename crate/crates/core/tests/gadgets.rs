use proptest::prelude::*;
use wspoly::gadgets::{
    build_gadget, check_gadget_lemma, GadgetKind, GadgetParams, Rotation, WireSide,
};
use wspoly::instance::{CandidateLevel, ShapeKind};
use wspoly::solver::DEFAULT_BUDGET;
use wspoly::weak::{is_weakly_simple, weakly_simple_chains};
use wspoly::{rat, Point, Polyline};

const ALL: [GadgetKind; 11] = [
    GadgetKind::PivotDisk,
    GadgetKind::PivotVSeg,
    GadgetKind::Variable,
    GadgetKind::ClauseDisk,
    GadgetKind::ClauseVSeg,
    GadgetKind::WireDisk(WireSide::Left),
    GadgetKind::WireDisk(WireSide::Middle),
    GadgetKind::WireDisk(WireSide::Right),
    GadgetKind::WireVSeg(WireSide::Left),
    GadgetKind::WireVSeg(WireSide::Middle),
    GadgetKind::WireVSeg(WireSide::Right),
];

fn placed(kind: GadgetKind, t: &Point, rot: &Rotation) -> GadgetParams {
    let mut p = GadgetParams::standard(kind);
    match &mut p {
        GadgetParams::Pivot(q) => {
            q.center = t.clone();
            q.rotation = rot.clone();
        }
        GadgetParams::Variable(q) => q.origin = t.clone(),
        GadgetParams::Clause(q) => q.origin = t.clone(),
        GadgetParams::Wire(q) => q.origin = t.clone(),
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn translation_equivariant(k in 0usize..ALL.len(), x in -50i64..50, y in -50i64..50, d in 1i64..4) {
        let kind = ALL[k];
        let t = Point::new(rat(x, d), rat(y, d));
        let at_origin = build_gadget(kind, &GadgetParams::standard(kind)).unwrap();
        let moved = build_gadget(kind, &placed(kind, &t, &Rotation::identity())).unwrap();
        prop_assert_eq!(moved, at_origin.translated(&t));
    }

    #[test]
    fn disk_pivot_rotation_equivariant(q in 0i32..4, x in -20i64..20, y in -20i64..20) {
        let kind = GadgetKind::PivotDisk;
        let t = Point::new(rat(x, 1), rat(y, 1));
        let rot = Rotation::quarter_turns(q);
        let direct = build_gadget(kind, &placed(kind, &t, &rot)).unwrap();
        let composed = build_gadget(kind, &GadgetParams::standard(kind)).unwrap().rotated(&rot).translated(&t);
        prop_assert_eq!(direct, composed);
    }
}

#[test]
fn rotated_vseg_pivot_is_rejected() {
    let kind = GadgetKind::PivotVSeg;
    assert!(build_gadget(
        kind,
        &placed(kind, &Point::origin(), &Rotation::quarter_turns(1))
    )
    .is_err());
}

/// Every witness a lemma check reports lies in the gadget's regions and is
/// weakly simple, both chain by chain and as one joined polyline.
#[test]
fn lemma_witnesses_are_weakly_simple_realisations() {
    for kind in ALL {
        let g = build_gadget(kind, &GadgetParams::standard(kind)).unwrap();
        let inst = g.instance().unwrap();
        let level = if kind == GadgetKind::Variable {
            CandidateLevel::ExtremesAndCenter
        } else {
            CandidateLevel::Extremes
        };
        let rep = check_gadget_lemma(kind, &GadgetParams::standard(kind), &level, DEFAULT_BUDGET)
            .unwrap();
        assert!(rep.holds, "{rep}");
        assert!(!rep.witnesses.is_empty(), "{}", kind.name());
        for (label, w) in &rep.witnesses {
            let own = &w[..g.regions.len()];
            for (i, p) in own.iter().enumerate() {
                assert!(
                    inst.contains(i, p),
                    "{} {label}: point {i} outside",
                    kind.name()
                );
            }
            let mut chains = Vec::new();
            let mut at = 0;
            for len in g
                .chains
                .iter()
                .copied()
                .chain(std::iter::once(w.len() - g.regions.len()))
            {
                if len > 0 {
                    chains.push(&w[at..at + len]);
                }
                at += len;
            }
            assert!(weakly_simple_chains(&chains), "{} {label}", kind.name());
            if g.chains.len() == 1 && w.len() == g.regions.len() {
                assert!(
                    is_weakly_simple(&Polyline::new(w.clone())),
                    "{} {label}",
                    kind.name()
                );
            }
        }
    }
}

#[test]
fn gadget_shapes() {
    for kind in ALL {
        let g = build_gadget(kind, &GadgetParams::standard(kind)).unwrap();
        assert_eq!(g.shape, kind.shape());
        assert_eq!(g.chains.iter().sum::<usize>(), g.regions.len());
        assert_eq!(GadgetKind::parse(&kind.name()).unwrap(), kind);
    }
    assert_eq!(GadgetKind::ClauseVSeg.shape(), ShapeKind::VSegment);
    assert!(GadgetKind::parse("wire-disk-up").is_err());
}
