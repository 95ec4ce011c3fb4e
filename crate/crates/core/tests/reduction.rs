mod common;

use wspoly::gadgets::{build_gadget, GadgetParams};
use wspoly::instance::{save_instance, CandidateLevel, ShapeKind};
use wspoly::reduction::{
    assignment_to_realisation, compile, halves_touch, map_realisation, region_halves, state_scene,
    to_square_or_diamond, Norm, Part,
};
use wspoly::sat::{all_models, brute_force_sat, Side};
use wspoly::solver::{solve, verify, SolveOutcome, DEFAULT_BUDGET};

const SHAPES: [ShapeKind; 2] = [ShapeKind::UnitDisk, ShapeKind::VSegment];

#[test]
fn compile_is_deterministic() {
    for (f, lay) in [common::fig_example(), common::nested_example()] {
        for shape in SHAPES {
            let a = compile(&f, &lay, shape).unwrap();
            let b = compile(&f, &lay, shape).unwrap();
            assert_eq!(save_instance(&a.instance), save_instance(&b.instance));
            assert_eq!(a.sidecar(), b.sidecar());
        }
    }
}

#[test]
fn placements_partition_the_regions() {
    for shape in SHAPES {
        // Variable gadgets are six regions each; one clause with its wires,
        // pivots and connectors costs what a one-variable formula adds.
        let (f1, l1) = common::random_laminar(0, 1, 1);
        let per_clause = compile(&f1, &l1, shape).unwrap().instance.len() - 6;
        for (name, f, lay) in common::corpus() {
            let c = compile(&f, &lay, shape).unwrap();
            let mut owner = vec![0; c.instance.len()];
            for pl in &c.placements {
                for &i in &pl.regions {
                    owner[i] += 1;
                }
                if let Part::Gadget(kind) = pl.part {
                    let fixed = build_gadget(kind, &GadgetParams::standard(kind))
                        .unwrap()
                        .regions
                        .len();
                    assert_eq!(pl.regions.len(), fixed, "{name}: {}", pl.label);
                }
            }
            assert!(owner.iter().all(|&k| k == 1), "{name}");
            let bound = 6 * f.variable_count + per_clause * f.clauses.len();
            assert!(
                c.instance.len() <= bound,
                "{name}: {} regions",
                c.instance.len()
            );
            for i in c.anchors.values() {
                assert!(*i < c.instance.len());
            }
        }
    }
}

/// Every model of the small fixtures, on both shapes.
#[test]
fn every_model_realises() {
    for (f, lay) in [common::fig_example(), common::nested_example()] {
        for shape in SHAPES {
            let c = compile(&f, &lay, shape).unwrap();
            let models = all_models(&f).unwrap();
            assert!(!models.is_empty());
            for a in models {
                let r = assignment_to_realisation(&c, &a).unwrap();
                assert!(verify(&c.instance, &r).unwrap(), "{a:?}");
                assert!(!halves_touch(&c, &r), "{a:?}");
                let scene = state_scene(&c, &r).unwrap();
                assert_eq!(scene.edge_classes.len(), r.points.len() - 1);
                assert!(scene.edge_classes.iter().any(|e| *e == Some(true)));
            }
        }
    }
}

#[test]
fn both_halves_are_used() {
    let (f, lay) = common::nested_example();
    let c = compile(&f, &lay, ShapeKind::UnitDisk).unwrap();
    let halves = region_halves(&c);
    assert!(halves.contains(&Some(Side::Top)));
    assert!(halves.contains(&Some(Side::Bottom)));
    assert!(halves.contains(&None));
}

#[test]
fn unsatisfiable_iff_no_realisation() {
    for (name, f, lay) in common::corpus().into_iter().take(8) {
        let sat = brute_force_sat(&f).unwrap().is_some();
        let c = compile(&f, &lay, ShapeKind::VSegment).unwrap();
        match solve(&c.instance, &CandidateLevel::Extremes, DEFAULT_BUDGET).unwrap() {
            SolveOutcome::Realisable(r) => {
                assert!(sat, "{name}");
                assert!(verify(&c.instance, &r).unwrap());
            }
            SolveOutcome::NoneOverCandidates => assert!(!sat, "{name}"),
            SolveOutcome::BudgetExceeded(s) => panic!("{name}: budget exhausted at {}", s.nodes),
        }
    }
}

#[test]
fn assignment_realisations_survive_region_changes() {
    let (f, lay) = common::fig_example();
    for shape in SHAPES {
        let c = compile(&f, &lay, shape).unwrap();
        let a = brute_force_sat(&f).unwrap().unwrap();
        let r = assignment_to_realisation(&c, &a).unwrap();
        for norm in [Norm::L1, Norm::Linf] {
            let d = to_square_or_diamond(&c, norm).unwrap();
            assert_eq!(d.instance.len(), c.instance.len());
            assert!(verify(&d.instance, &map_realisation(&r, norm)).unwrap());
        }
    }
}

#[test]
fn falsifying_pins_have_no_realisation() {
    let (f, lay) = common::fig_example();
    let c = compile(&f, &lay, ShapeKind::VSegment).unwrap();
    let a = wspoly::sat::Assignment::new(vec![false; 3]);
    assert!(assignment_to_realisation(&c, &a).is_err());
}
