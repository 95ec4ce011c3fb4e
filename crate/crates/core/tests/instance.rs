use num_traits::Signed;
use proptest::prelude::*;
use wspoly::gadgets::Rotation;
use wspoly::instance::{
    candidate_points, contains, load_instance, load_realisation, save_instance, save_realisation,
    CandidateLevel, ImprecisePolyline, Realisation, Region, ShapeKind,
};
use wspoly::{rat, Point};

const SHAPES: [ShapeKind; 4] = [
    ShapeKind::UnitDisk,
    ShapeKind::UnitSquare,
    ShapeKind::UnitDiamond,
    ShapeKind::VSegment,
];

fn rat_point() -> impl Strategy<Value = Point> {
    (-40i64..=40, -40i64..=40, 1i64..=7, 1i64..=7)
        .prop_map(|(x, y, dx, dy)| Point::new(rat(x, dx), rat(y, dy)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn candidates_lie_in_their_region(c in rat_point(), s in 0usize..4, centre in any::<bool>()) {
        let level = if centre { CandidateLevel::ExtremesAndCenter } else { CandidateLevel::Extremes };
        let r = Region::new(c);
        for p in candidate_points(&r, SHAPES[s], &level, 0).unwrap() {
            prop_assert!(contains(&r, SHAPES[s], &p));
        }
    }

    #[test]
    fn quarter_turn_maps_disk_extremes(c in rat_point(), k in 0i32..4) {
        let rot = Rotation::quarter_turns(k);
        let level = CandidateLevel::Extremes;
        let mut image: Vec<Point> = candidate_points(&Region::new(c.clone()), ShapeKind::UnitDisk, &level, 0)
            .unwrap()
            .iter()
            .map(|p| rot.apply(p))
            .collect();
        let mut direct = candidate_points(&Region::new(rot.apply(&c)), ShapeKind::UnitDisk, &level, 0).unwrap();
        image.sort();
        direct.sort();
        prop_assert_eq!(image, direct);
    }

    #[test]
    fn instance_text_round_trip(s in 0usize..4, cs in prop::collection::vec(rat_point(), 2..12)) {
        let inst = ImprecisePolyline::new(SHAPES[s], cs.into_iter().map(Region::new).collect()).unwrap();
        let text = save_instance(&inst);
        let back = load_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(save_instance(&back), text);
    }

    #[test]
    fn realisation_text_round_trip(ps in prop::collection::vec(rat_point(), 2..12)) {
        let r = Realisation::new(ps);
        let text = save_realisation(&r);
        prop_assert_eq!(load_realisation(&text, None).unwrap(), r);
    }

    #[test]
    fn membership_is_exact(c in rat_point(), d in rat_point()) {
        let r = Region::new(c.clone());
        let v = &d - &c;
        let l1 = v.x.abs() + v.y.abs();
        prop_assert_eq!(contains(&r, ShapeKind::UnitDisk, &d), v.norm2() <= rat(1, 1));
        prop_assert_eq!(contains(&r, ShapeKind::UnitDiamond, &d), l1 <= rat(1, 1));
        prop_assert_eq!(contains(&r, ShapeKind::UnitSquare, &d), v.x.abs() <= rat(1, 2) && v.y.abs() <= rat(1, 2));
        prop_assert_eq!(contains(&r, ShapeKind::VSegment, &d), v.x == rat(0, 1) && v.y.abs() <= rat(1, 1));
    }
}

#[test]
fn single_region_is_rejected() {
    assert!(
        ImprecisePolyline::new(ShapeKind::UnitDisk, vec![Region::new(Point::origin())]).is_err()
    );
    assert!(load_instance("shape disk\n0 0\nshape vseg\n1 1\n").is_err());
}
