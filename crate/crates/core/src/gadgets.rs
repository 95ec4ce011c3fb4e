//! Gadget constructions and exhaustive checks of their defining properties.
//!
//! Every gadget is built in a local frame and then rotated and translated
//! into place. Its regions are grouped into component chains laid end to end
//! in region order; inside a chain consecutive regions are joined by an edge.
//!
//! Frames used here (all at the origin, identity rotation):
//!
//! * pivot: the through edge runs left to right through the origin, the top
//!   component sits above it and the bottom component is the top rotated by a
//!   half turn;
//! * variable: leftmost region at the origin;
//! * clause: top-left corner region at the origin;
//! * wire: the base region (the one next to the variable) at the origin, the
//!   literal region above it. A right wire reaches its literal at `(-a, b)`,
//!   a left wire at `(a, b)`.
//!
//! Disk wires place region 2 at `(1, b + 1)` with pivots at `(0, 1 + b/2)` and
//! `(1 - a/2, b + 1)`. With the base pinned at its top `(0, 1)` these force the
//! literal to its top `(-a, b + 1)`; with the base at its leftmost point the
//! literal can reach its rightmost point `(1 - a, b)`. The middle disk wire has
//! a single pivot at `(0, (b - 1)/2)` and its literal at `(-1, b)`: the false
//! position is the literal's rightmost point, straight above the base.
//!
//! Vertical segment wires follow the same pattern with region 2 at `(2, b)` and
//! pivots at `(1, b/2)` and `(1 - a/2, b)`. The middle one zigzags through an
//! intermediate region at `(2, b/2)` with pivots at `(1, b/4)` and `(1, 3b/4)`,
//! ending at the literal `(0, b)`.
//!
//! The vertical segment pivot keeps the spike of the disk pivot but collapses
//! regions 2, 3 and 5, 6 into two coincident regions at `(0, 4)`. Its arm
//! regions sit at `(-eps, 2)` and `(eps, 2)` so that steep through edges also
//! clear them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::ops::ControlFlow;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{
    on_segment, point_above_tangents, point_in_polygon, tangents_cross_segment, PolygonLocation,
};
use crate::instance::{
    candidate_points, fmt_point, CandidateLevel, ImprecisePolyline, Region, ShapeKind,
};
use crate::solver::{search_chains, SearchStats, SolveOptions};
use crate::{int, rat, Point, Rat, Segment};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WireSide {
    Left,
    Middle,
    Right,
}

impl WireSide {
    pub fn name(self) -> &'static str {
        match self {
            WireSide::Left => "left",
            WireSide::Middle => "middle",
            WireSide::Right => "right",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GadgetKind {
    PivotDisk,
    PivotVSeg,
    Variable,
    ClauseDisk,
    ClauseVSeg,
    WireDisk(WireSide),
    WireVSeg(WireSide),
}

impl GadgetKind {
    pub fn name(self) -> String {
        match self {
            GadgetKind::PivotDisk => "pivot-disk".into(),
            GadgetKind::PivotVSeg => "pivot-vseg".into(),
            GadgetKind::Variable => "variable".into(),
            GadgetKind::ClauseDisk => "clause-disk".into(),
            GadgetKind::ClauseVSeg => "clause-vseg".into(),
            GadgetKind::WireDisk(s) => format!("wire-disk-{}", s.name()),
            GadgetKind::WireVSeg(s) => format!("wire-vseg-{}", s.name()),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let kind = match s {
            "pivot-disk" => GadgetKind::PivotDisk,
            "pivot-vseg" => GadgetKind::PivotVSeg,
            "variable" => GadgetKind::Variable,
            "clause-disk" => GadgetKind::ClauseDisk,
            "clause-vseg" => GadgetKind::ClauseVSeg,
            _ => {
                let side = |t: &str| match t {
                    "left" => Some(WireSide::Left),
                    "middle" => Some(WireSide::Middle),
                    "right" => Some(WireSide::Right),
                    _ => None,
                };
                if let Some(side) = s.strip_prefix("wire-disk-").and_then(side) {
                    GadgetKind::WireDisk(side)
                } else if let Some(side) = s.strip_prefix("wire-vseg-").and_then(side) {
                    GadgetKind::WireVSeg(side)
                } else {
                    return Err(Error::InvalidGadget(format!("unknown gadget kind `{s}`")));
                }
            }
        };
        Ok(kind)
    }

    pub fn shape(self) -> ShapeKind {
        match self {
            GadgetKind::PivotDisk | GadgetKind::ClauseDisk | GadgetKind::WireDisk(_) => {
                ShapeKind::UnitDisk
            }
            GadgetKind::Variable => ShapeKind::UnitDisk,
            _ => ShapeKind::VSegment,
        }
    }
}

/// An exact rotation matrix `[[cos, -sin], [sin, cos]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rotation {
    pub cos: Rat,
    pub sin: Rat,
}

impl Rotation {
    pub fn identity() -> Self {
        Rotation {
            cos: Rat::one(),
            sin: Rat::zero(),
        }
    }

    /// Counterclockwise rotation by `k` quarter turns.
    pub fn quarter_turns(k: i32) -> Self {
        let (c, s) = match k.rem_euclid(4) {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        };
        Rotation {
            cos: int(c),
            sin: int(s),
        }
    }

    /// Rotation with `cos = a/c`, `sin = b/c`; needs `a^2 + b^2 = c^2`.
    pub fn new(cos: Rat, sin: Rat) -> Result<Self> {
        if &cos * &cos + &sin * &sin != Rat::one() {
            return Err(Error::InvalidGadget(
                "rotation matrix is not orthonormal".into(),
            ));
        }
        Ok(Rotation { cos, sin })
    }

    pub fn is_identity(&self) -> bool {
        self.cos.is_one() && self.sin.is_zero()
    }

    pub fn apply(&self, p: &Point) -> Point {
        Point::new(
            &self.cos * &p.x - &self.sin * &p.y,
            &self.sin * &p.x + &self.cos * &p.y,
        )
    }

    pub fn inverse(&self) -> Self {
        Rotation {
            cos: self.cos.clone(),
            sin: -self.sin.clone(),
        }
    }

    pub fn then(&self, next: &Rotation) -> Self {
        Rotation {
            cos: &next.cos * &self.cos - &next.sin * &self.sin,
            sin: &next.sin * &self.cos + &next.cos * &self.sin,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotParams {
    pub center: Point,
    pub rotation: Rotation,
    pub eps: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableParams {
    pub origin: Point,
    pub l: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseParams {
    pub origin: Point,
    /// Pivot eps for the vertical segment clause. `None` picks half the
    /// validated bound.
    pub eps: Option<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WireParams {
    pub origin: Point,
    pub a: Rat,
    pub b: Rat,
    pub side: WireSide,
    /// Pivot eps; `None` picks half the smallest validated bound.
    pub eps: Option<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GadgetParams {
    Pivot(PivotParams),
    Variable(VariableParams),
    Clause(ClauseParams),
    Wire(WireParams),
}

impl GadgetParams {
    /// Parameters used by the command line and the acceptance checks.
    pub fn standard(kind: GadgetKind) -> Self {
        let o = Point::origin();
        match kind {
            GadgetKind::PivotDisk | GadgetKind::PivotVSeg => GadgetParams::Pivot(PivotParams {
                center: o,
                rotation: Rotation::identity(),
                eps: rat(1, 10),
            }),
            GadgetKind::Variable => GadgetParams::Variable(VariableParams {
                origin: o,
                l: int(9),
            }),
            GadgetKind::ClauseDisk | GadgetKind::ClauseVSeg => GadgetParams::Clause(ClauseParams {
                origin: o,
                eps: None,
            }),
            GadgetKind::WireDisk(side) | GadgetKind::WireVSeg(side) => {
                GadgetParams::Wire(WireParams {
                    origin: o,
                    a: int(24),
                    b: int(24),
                    side,
                    eps: None,
                })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetGeometry {
    pub kind: GadgetKind,
    pub shape: ShapeKind,
    pub regions: Vec<Region>,
    /// Lengths of the component chains, in region order.
    pub chains: Vec<usize>,
    pub anchors: BTreeMap<String, Point>,
    /// Named region indices where neighbouring sequences are attached.
    pub splice_slots: BTreeMap<String, usize>,
}

impl GadgetGeometry {
    fn new(kind: GadgetKind) -> Self {
        GadgetGeometry {
            kind,
            shape: kind.shape(),
            regions: Vec::new(),
            chains: Vec::new(),
            anchors: BTreeMap::new(),
            splice_slots: BTreeMap::new(),
        }
    }

    fn push_chain(&mut self, pts: Vec<Point>) {
        self.chains.push(pts.len());
        self.regions.extend(pts.into_iter().map(Region::new));
    }

    /// Append another gadget's regions and anchors, prefixing names.
    fn absorb(&mut self, prefix: &str, g: GadgetGeometry) {
        let off = self.regions.len();
        self.regions.extend(g.regions);
        self.chains.extend(g.chains);
        for (k, v) in g.anchors {
            let name = if k == "center" {
                prefix.to_string()
            } else {
                format!("{prefix}.{k}")
            };
            self.anchors.insert(name, v);
        }
        for (k, v) in g.splice_slots {
            self.splice_slots.insert(format!("{prefix}.{k}"), v + off);
        }
    }

    /// Index ranges of the component chains.
    pub fn chain_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut at = 0;
        self.chains
            .iter()
            .map(|&len| {
                let r = at..at + len;
                at += len;
                r
            })
            .collect()
    }

    pub fn anchor(&self, name: &str) -> Result<&Point> {
        self.anchors
            .get(name)
            .ok_or_else(|| Error::InvalidGadget(format!("missing anchor `{name}`")))
    }

    pub fn slot(&self, name: &str) -> Result<usize> {
        self.splice_slots
            .get(name)
            .copied()
            .ok_or_else(|| Error::InvalidGadget(format!("missing splice slot `{name}`")))
    }

    pub fn map_points(&self, f: impl Fn(&Point) -> Point) -> Self {
        let mut g = self.clone();
        for r in &mut g.regions {
            r.center = f(&r.center);
        }
        for p in g.anchors.values_mut() {
            *p = f(p);
        }
        g
    }

    pub fn translated(&self, t: &Point) -> Self {
        self.map_points(|p| p + t)
    }

    pub fn rotated(&self, r: &Rotation) -> Self {
        self.map_points(|p| r.apply(p))
    }

    /// Mirror image in the x axis.
    pub fn flipped_vertically(&self) -> Self {
        self.map_points(|p| Point::new(p.x.clone(), -p.y.clone()))
    }

    /// All regions as one imprecise polyline (chains joined end to end).
    pub fn instance(&self) -> Result<ImprecisePolyline> {
        ImprecisePolyline::new(self.shape, self.regions.clone())
    }
}

pub fn build_gadget(kind: GadgetKind, params: &GadgetParams) -> Result<GadgetGeometry> {
    match (kind, params) {
        (GadgetKind::PivotDisk | GadgetKind::PivotVSeg, GadgetParams::Pivot(p)) => pivot(kind, p),
        (GadgetKind::Variable, GadgetParams::Variable(p)) => variable(p),
        (GadgetKind::ClauseDisk, GadgetParams::Clause(p)) => {
            Ok(clause_disk().translated(&p.origin))
        }
        (GadgetKind::ClauseVSeg, GadgetParams::Clause(p)) => clause_vseg(p),
        (GadgetKind::WireDisk(side) | GadgetKind::WireVSeg(side), GadgetParams::Wire(p)) => {
            if side != p.side {
                return Err(Error::InvalidGadget(format!(
                    "wire kind is {} but parameters say {}",
                    side.name(),
                    p.side.name()
                )));
            }
            wire(kind, p)
        }
        _ => Err(Error::InvalidGadget(format!(
            "parameters do not fit {}",
            kind.name()
        ))),
    }
}

fn pts(list: &[(Rat, Rat)]) -> Vec<Point> {
    list.iter()
        .map(|(x, y)| Point::new(x.clone(), y.clone()))
        .collect()
}

fn pivot_top(kind: GadgetKind, eps: &Rat) -> Vec<Point> {
    let e = eps.clone();
    let one = Rat::one();
    if kind == GadgetKind::PivotVSeg {
        pts(&[
            (-e.clone(), int(2)),
            (int(0), int(4)),
            (int(0), int(-1)),
            (int(0), int(4)),
            (e, int(2)),
        ])
    } else {
        pts(&[
            (-(&one + &e), int(2)),
            (int(1), int(2)),
            (int(1), int(5)),
            (int(0), int(-1)),
            (int(-1), int(5)),
            (int(-1), int(2)),
            (&one + &e, int(2)),
        ])
    }
}

fn pivot(kind: GadgetKind, p: &PivotParams) -> Result<GadgetGeometry> {
    if !p.eps.is_positive() {
        return Err(Error::InvalidGadget("pivot eps must be positive".into()));
    }
    if kind == GadgetKind::PivotVSeg && !p.rotation.is_identity() {
        return Err(Error::InvalidGadget(
            "a vertical segment pivot cannot be rotated".into(),
        ));
    }
    let top = pivot_top(kind, &p.eps);
    let half = Rotation::quarter_turns(2);
    let bottom: Vec<Point> = top.iter().map(|q| half.apply(q)).collect();
    let n = top.len();
    let mut g = GadgetGeometry::new(kind);
    g.push_chain(top);
    g.push_chain(bottom);
    g.anchors.insert("center".into(), Point::origin());
    g.anchors.insert("axis".into(), Point::new(int(1), int(0)));
    g.splice_slots.insert("top_first".into(), 0);
    g.splice_slots.insert("top_last".into(), n - 1);
    g.splice_slots.insert("bottom_first".into(), n);
    g.splice_slots.insert("bottom_last".into(), 2 * n - 1);
    Ok(g.rotated(&p.rotation).translated(&p.center))
}

fn variable(p: &VariableParams) -> Result<GadgetGeometry> {
    if p.l <= int(8) {
        return Err(Error::InvalidGadget(format!(
            "variable needs l > 8, got {}",
            p.l
        )));
    }
    let mut g = GadgetGeometry::new(GadgetKind::Variable);
    g.push_chain(pts(&[
        (int(0), int(0)),
        (int(8), int(0)),
        (int(5), int(2)),
        (int(5), int(-2)),
        (int(2), int(0)),
        (p.l.clone(), int(0)),
    ]));
    g.anchors.insert("origin".into(), Point::origin());
    // Wire bases go strictly between regions 2 and 6 on the x axis.
    g.anchors
        .insert("wire_zone_start".into(), Point::new(int(10), int(0)));
    g.anchors
        .insert("wire_zone_end".into(), Point::new(&p.l - int(2), int(0)));
    g.splice_slots.insert("first".into(), 0);
    g.splice_slots.insert("last".into(), 5);
    Ok(g.translated(&p.origin))
}

fn clause_disk() -> GadgetGeometry {
    let mut g = GadgetGeometry::new(GadgetKind::ClauseDisk);
    g.push_chain(pts(&[
        (int(0), int(0)),
        (int(0), int(-5)),
        (int(6), int(-5)),
        (int(6), int(0)),
    ]));
    let x2y = rat(-23, 5);
    for (name, x, y) in [
        ("x1", int(1), int(-3)),
        ("x2", int(2), x2y.clone()),
        ("x3", int(5), int(-3)),
    ] {
        g.anchors.insert(name.into(), Point::new(x, y));
    }
    let a = |x: Rat, y: Rat| Point::new(x, y);
    g.anchors.insert("x1_false".into(), a(int(1), int(-2)));
    g.anchors.insert("x2_false".into(), a(int(3), x2y.clone()));
    g.anchors.insert("x3_false".into(), a(int(5), int(-2)));
    g.anchors.insert("x1_true".into(), a(int(0), int(-3)));
    g.anchors.insert("x2_true".into(), a(int(2), rat(-28, 5)));
    g.anchors.insert("x3_true".into(), a(int(6), int(-3)));
    // Schematic positions of the side wires' last pivots.
    g.anchors.insert("pivot_left".into(), a(int(-3), int(-2)));
    g.anchors.insert("pivot_right".into(), a(int(9), int(-2)));
    g.splice_slots.insert("first".into(), 0);
    g.splice_slots.insert("last".into(), 3);
    g
}

fn clause_vseg(p: &ClauseParams) -> Result<GadgetGeometry> {
    let corners = pts(&[
        (int(0), int(0)),
        (int(0), int(-3)),
        (int(4), int(-5)),
        (int(6), int(-5)),
        (int(10), int(-3)),
        (int(10), int(0)),
    ]);
    let centers = [Point::new(int(2), int(-4)), Point::new(int(8), int(-4))];
    let ends = [(1, 2), (3, 4)];
    let eps = match &p.eps {
        Some(e) => e.clone(),
        None => {
            let mut best: Option<Rat> = None;
            for (c, (i, j)) in centers.iter().zip(ends) {
                let probe = pivot(
                    GadgetKind::PivotVSeg,
                    &pivot_at(c.clone(), Rotation::identity(), rat(1, 10)),
                )?;
                let bound = validate_pivot_placement(
                    &probe,
                    &Region::new(corners[i].clone()),
                    &Region::new(corners[j].clone()),
                )?;
                best = Some(best.map_or(bound.clone(), |b: Rat| b.min(bound)));
            }
            best.expect("two pivots") / int(2)
        }
    };
    if !eps.is_positive() {
        return Err(Error::InvalidGadget("pivot eps must be positive".into()));
    }
    let mut g = GadgetGeometry::new(GadgetKind::ClauseVSeg);
    g.push_chain(corners);
    for (k, c) in centers.iter().enumerate() {
        let pg = pivot(
            GadgetKind::PivotVSeg,
            &pivot_at(c.clone(), Rotation::identity(), eps.clone()),
        )?;
        g.absorb(&format!("pivot{}", k + 1), pg);
    }
    let a = |x: i64, y: i64| Point::new(int(x), int(y));
    for (name, x, y) in [("x1", 1, -4), ("x2", 5, -6), ("x3", 9, -4)] {
        g.anchors.insert(name.into(), a(x, y));
        g.anchors.insert(format!("{name}_false"), a(x, y + 1));
        g.anchors.insert(format!("{name}_true"), a(x, y - 1));
    }
    g.splice_slots.insert("first".into(), 0);
    g.splice_slots.insert("last".into(), 5);
    Ok(g.translated(&p.origin))
}

fn pivot_at(center: Point, rotation: Rotation, eps: Rat) -> PivotParams {
    PivotParams {
        center,
        rotation,
        eps,
    }
}

/// Wire layout in the frame of a right wire: the chain of region centres,
/// pivot centres with rotations, and which chain edge each pivot sits on.
struct WireLayout {
    chain: Vec<Point>,
    pivots: Vec<(Point, Rotation, usize)>,
    false_pos: Point,
    true_pos: Point,
}

fn wire_layout(vseg: bool, side: WireSide, a: &Rat, b: &Rat) -> WireLayout {
    let p = |x: Rat, y: Rat| Point::new(x, y);
    let two = int(2);
    let one = Rat::one();
    let quarter = Rotation::quarter_turns(1);
    let id = Rotation::identity;
    let mut lay = match (vseg, side) {
        (false, WireSide::Middle) => WireLayout {
            chain: vec![Point::origin(), p(-one.clone(), b.clone())],
            pivots: vec![(p(int(0), (b - &one) / &two), quarter, 0)],
            false_pos: p(int(0), b.clone()),
            true_pos: p(-one.clone(), b - &one),
        },
        (false, _) => WireLayout {
            chain: vec![
                Point::origin(),
                p(one.clone(), b + &one),
                p(-a.clone(), b.clone()),
            ],
            pivots: vec![
                (p(int(0), &one + b / &two), quarter, 0),
                (p(&one - a / &two, b + &one), id(), 1),
            ],
            false_pos: p(-a.clone(), b + &one),
            true_pos: p(&one - a, b.clone()),
        },
        (true, WireSide::Middle) => WireLayout {
            chain: vec![
                Point::origin(),
                p(two.clone(), b / &two),
                p(int(0), b.clone()),
            ],
            pivots: vec![
                (p(one.clone(), b / int(4)), id(), 0),
                (p(one.clone(), b * int(3) / int(4)), id(), 1),
            ],
            false_pos: p(int(0), b + &one),
            true_pos: p(int(0), b - &one),
        },
        (true, _) => WireLayout {
            chain: vec![
                Point::origin(),
                p(two.clone(), b.clone()),
                p(-a.clone(), b.clone()),
            ],
            pivots: vec![
                (p(one.clone(), b / &two), id(), 0),
                (p(&one - a / &two, b.clone()), id(), 1),
            ],
            false_pos: p(-a.clone(), b + &one),
            true_pos: p(-a.clone(), b - &one),
        },
    };
    if side == WireSide::Left {
        let m = |q: &Point| Point::new(-q.x.clone(), q.y.clone());
        lay.chain = lay.chain.iter().map(m).collect();
        lay.pivots = lay
            .pivots
            .into_iter()
            .map(|(c, r, e)| (m(&c), r, e))
            .collect();
        lay.false_pos = m(&lay.false_pos);
        lay.true_pos = if vseg {
            m(&lay.true_pos)
        } else {
            Point::new(a - &one, b.clone())
        };
    }
    lay
}

fn wire(kind: GadgetKind, p: &WireParams) -> Result<GadgetGeometry> {
    let vseg = matches!(kind, GadgetKind::WireVSeg(_));
    let pkind = if vseg {
        GadgetKind::PivotVSeg
    } else {
        GadgetKind::PivotDisk
    };
    if !p.a.is_positive() || !p.b.is_positive() {
        return Err(Error::InvalidGadget("wire needs a, b > 0".into()));
    }
    let lay = wire_layout(vseg, p.side, &p.a, &p.b);
    let eps = match &p.eps {
        Some(e) => e.clone(),
        None => wire_eps(pkind, &lay)?,
    };
    let mut g = GadgetGeometry::new(kind);
    let n = lay.chain.len();
    g.push_chain(lay.chain);
    for (k, (c, r, _)) in lay.pivots.iter().enumerate() {
        let pg = pivot(pkind, &pivot_at(c.clone(), r.clone(), eps.clone()))?;
        g.absorb(&format!("pivot{}", k + 1), pg);
    }
    g.anchors.insert("base".into(), Point::origin());
    g.anchors
        .insert("literal".into(), g.regions[n - 1].center.clone());
    g.anchors.insert("literal_false".into(), lay.false_pos);
    g.anchors.insert("literal_true".into(), lay.true_pos);
    g.splice_slots.insert("base".into(), 0);
    g.splice_slots.insert("literal".into(), n - 1);
    overlap_audit(&g)?;
    Ok(g.translated(&p.origin))
}

fn wire_eps(pkind: GadgetKind, lay: &WireLayout) -> Result<Rat> {
    let mut best: Option<Rat> = None;
    for (c, r, e) in &lay.pivots {
        let probe = pivot(pkind, &pivot_at(c.clone(), r.clone(), rat(1, 10)))?;
        let bound = validate_pivot_placement(
            &probe,
            &Region::new(lay.chain[*e].clone()),
            &Region::new(lay.chain[e + 1].clone()),
        )?;
        best = Some(best.map_or(bound.clone(), |b: Rat| b.min(bound)));
    }
    Ok(best.expect("wire has a pivot") / int(2))
}

/// The pivot eps a gadget picks when its parameters leave it open: half the
/// smallest validated bound over its pivots. `None` for gadgets without
/// built-in pivots.
pub fn default_eps(kind: GadgetKind, params: &GadgetParams) -> Result<Option<Rat>> {
    match (kind, params) {
        (GadgetKind::WireDisk(side) | GadgetKind::WireVSeg(side), GadgetParams::Wire(p)) => {
            let vseg = matches!(kind, GadgetKind::WireVSeg(_));
            let pkind = if vseg {
                GadgetKind::PivotVSeg
            } else {
                GadgetKind::PivotDisk
            };
            wire_eps(pkind, &wire_layout(vseg, side, &p.a, &p.b)).map(Some)
        }
        (GadgetKind::ClauseVSeg, GadgetParams::Clause(p)) => {
            let g = clause_vseg(&ClauseParams {
                origin: p.origin.clone(),
                eps: None,
            })?;
            let c = g.anchor("pivot1")?;
            // The arm regions sit at (-eps, 2) and (eps, 2) from the centre.
            let arm = &g.regions[6].center;
            Ok(Some(&c.x - &arm.x))
        }
        _ => Ok(None),
    }
}

/// Regions of different components must keep apart: disks by more than their
/// diameter, vertical segments by a positive horizontal gap or a vertical gap
/// over 2. The two halves of one pivot are exempt from each other.
fn overlap_audit(g: &GadgetGeometry) -> Result<()> {
    let ranges = g.chain_ranges();
    // Pivot halves come in consecutive pairs after the first chain.
    let group = |c: usize| if c == 0 { 0 } else { (c + 1) / 2 };
    for (ci, ri) in ranges.iter().enumerate() {
        for (cj, rj) in ranges.iter().enumerate().skip(ci + 1) {
            if group(ci) == group(cj) {
                continue;
            }
            for i in ri.clone() {
                for j in rj.clone() {
                    let (p, q) = (&g.regions[i].center, &g.regions[j].center);
                    let d = q - p;
                    let apart = match g.shape {
                        ShapeKind::VSegment => !d.x.is_zero() || d.y.abs() > int(2),
                        _ => d.norm2() > int(4),
                    };
                    if !apart {
                        return Err(Error::InvalidGadget(format!(
                            "components overlap near ({}) and ({}); increase a or b",
                            fmt_point(p),
                            fmt_point(q)
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Largest eps of the form `2^-k` for which the pivot works with a through
/// edge between the two regions.
///
/// Disk pivots need the endpoints beyond `x = -1` and `x = 1` in the pivot
/// frame, all four common tangents meeting the segment `(0,-5)-(0,5)`, and
/// the four arm points `(-eps, 2)`, `(eps, 2)`, `(eps, -2)`, `(-eps, -2)`
/// strictly beyond the tangents from the centre to the nearer endpoint.
/// Vertical segment pivots need the endpoints on either side of the spike,
/// every line between them meeting `(0,-3)-(0,3)`, and the arm regions clear
/// of every line through the centre and an endpoint.
pub fn validate_pivot_placement(g: &GadgetGeometry, a: &Region, b: &Region) -> Result<Rat> {
    let vseg = match g.kind {
        GadgetKind::PivotDisk => false,
        GadgetKind::PivotVSeg => true,
        k => return Err(Error::InvalidGadget(format!("{} is not a pivot", k.name()))),
    };
    let center = g.anchor("center")?.clone();
    let axis = g.anchor("axis")? - &center;
    let inv = Rotation {
        cos: axis.x,
        sin: -axis.y,
    };
    let local = |p: &Point| inv.apply(&(p - &center));
    let (mut la, mut lb) = (local(&a.center), local(&b.center));
    if la.x > lb.x {
        std::mem::swap(&mut la, &mut lb);
    }
    let one = Rat::one();
    let o = Point::origin();
    let flip = |p: &Point| Point::new(p.x.clone(), -p.y.clone());
    if vseg {
        if !la.x.is_negative() || !lb.x.is_positive() {
            return Err(Error::InvalidGadget(
                "endpoints must lie on either side of the pivot".into(),
            ));
        }
        let ends = |c: &Point| {
            [
                Point::new(c.x.clone(), &c.y + &one),
                Point::new(c.x.clone(), &c.y - &one),
            ]
        };
        let lim = int(3);
        for p in ends(&la) {
            for q in ends(&lb) {
                // Height at x = 0 of the line through p and q.
                let y0 = (&q.x * &p.y - &p.x * &q.y) / (&q.x - &p.x);
                if y0.abs() > lim {
                    return Err(Error::InvalidGadget(
                        "through edge can miss the pivot".into(),
                    ));
                }
            }
        }
        // Arm region points (-eps, 1..3) above every line from the centre to
        // an endpoint of the near region; mirrored for the other three arms.
        let clear = |eps: &Rat| {
            let above = |arm: &Point, c: &Point| {
                ends(c).iter().all(|q| {
                    // y on line(o, q) at arm.x, compared against arm.y.
                    let y = &q.y / &q.x * &arm.x;
                    arm.y > y
                })
            };
            let lo = Point::new(-eps.clone(), one.clone());
            let ro = Point::new(eps.clone(), one.clone());
            above(&lo, &la) && above(&ro, &lb) && above(&ro, &flip(&lb)) && above(&lo, &flip(&la))
        };
        return search_eps(clear);
    }
    if la.x >= -one.clone() || lb.x <= one {
        return Err(Error::InvalidGadget(
            "endpoint regions must lie left of x = -1 and right of x = 1 in the pivot frame".into(),
        ));
    }
    let s = Segment::new(Point::new(int(0), int(-5)), Point::new(int(0), int(5)));
    if !tangents_cross_segment(&la, &lb, &s)? {
        return Err(Error::InvalidGadget(
            "a tangent of the endpoint disks misses the pivot".into(),
        ));
    }
    let two = int(2);
    let clear = |eps: &Rat| {
        let l = Point::new(-eps.clone(), two.clone());
        let r = Point::new(eps.clone(), two.clone());
        let ok = |p: &Point, c: &Point| point_above_tangents(p, &o, c).unwrap_or(false);
        ok(&l, &la) && ok(&r, &lb) && ok(&r, &flip(&lb)) && ok(&l, &flip(&la))
    };
    search_eps(clear)
}

fn search_eps(ok: impl Fn(&Rat) -> bool) -> Result<Rat> {
    let mut eps = Rat::one();
    for _ in 0..64 {
        if ok(&eps) {
            return Ok(eps);
        }
        eps /= int(2);
    }
    Err(Error::InvalidGadget(
        "no positive eps clears the through edge".into(),
    ))
}

/// Outcome of an exhaustive check of a gadget's defining property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub kind: GadgetKind,
    pub level: String,
    /// The property held on the whole enumeration.
    pub holds: bool,
    /// False when the node budget ran out before the enumeration finished.
    pub complete: bool,
    pub nodes: u64,
    /// Assignments of the checked regions that extend to a weakly simple
    /// realisation of the whole gadget.
    pub realisations: u64,
    /// Named counts backing the verdict.
    pub facts: Vec<(String, u64)>,
    /// Labelled witness realisations of the gadget's regions.
    pub witnesses: Vec<(String, Vec<Point>)>,
    pub notes: Vec<String>,
}

impl LemmaReport {
    fn new(kind: GadgetKind, level: &CandidateLevel) -> Self {
        LemmaReport {
            kind,
            level: level_name(level),
            holds: false,
            complete: true,
            nodes: 0,
            realisations: 0,
            facts: Vec::new(),
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn absorb_stats(&mut self, r: &std::result::Result<SearchStats, SearchStats>) {
        let (Ok(s) | Err(s)) = r;
        self.nodes += s.nodes;
        if r.is_err() {
            self.complete = false;
        }
    }

    fn fact(&mut self, name: &str, v: u64) {
        self.facts.push((name.to_string(), v));
    }

    pub fn fact_value(&self, name: &str) -> Option<u64> {
        self.facts.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    /// Structured text: key/value lines, then witness blocks in the
    /// realisation file format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "gadget {}", self.kind.name());
        let _ = writeln!(s, "level {}", self.level);
        let _ = writeln!(s, "holds {}", self.holds);
        let _ = writeln!(s, "complete {}", self.complete);
        let _ = writeln!(s, "nodes {}", self.nodes);
        let _ = writeln!(s, "realisations {}", self.realisations);
        for (k, v) in &self.facts {
            let _ = writeln!(s, "fact {k} {v}");
        }
        for n in &self.notes {
            let _ = writeln!(s, "note {n}");
        }
        for (label, pts) in &self.witnesses {
            let _ = writeln!(s, "# witness {label}");
            for p in pts {
                let _ = writeln!(s, "{}", fmt_point(p));
            }
        }
        s
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub(crate) fn level_name(level: &CandidateLevel) -> String {
    match level {
        CandidateLevel::Extremes => "extremes".into(),
        CandidateLevel::ExtremesAndCenter => "extremes+center".into(),
        CandidateLevel::Custom(_) => "custom".into(),
    }
}

fn gadget_candidates(g: &GadgetGeometry, level: &CandidateLevel) -> Result<Vec<Vec<Point>>> {
    g.regions
        .iter()
        .enumerate()
        .map(|(i, r)| candidate_points(r, g.shape, level, i))
        .collect()
}

/// Distinct assignments of the `keys` regions that extend to a weakly simple
/// realisation of the whole family, each with one full witness. Independent
/// components would otherwise multiply the enumeration.
fn project(
    rep: &mut LemmaReport,
    cands: &[Vec<Point>],
    chains: &[usize],
    keys: &[usize],
    opts: SolveOptions,
) -> Vec<Vec<Point>> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; keys.len()];
    if keys.iter().any(|&k| cands[k].is_empty()) {
        return out;
    }
    loop {
        let mut pinned = cands.to_vec();
        for (slot, &k) in keys.iter().enumerate() {
            pinned[k] = vec![cands[k][idx[slot]].clone()];
        }
        let left = opts.budget.saturating_sub(rep.nodes);
        let mut found = None;
        let res = search_chains(
            &pinned,
            chains,
            SolveOptions {
                budget: left,
                ..opts
            },
            |p| {
                found = Some(p.to_vec());
                ControlFlow::Break(())
            },
        );
        rep.absorb_stats(&res);
        if let Some(w) = found {
            rep.realisations += 1;
            out.push(w);
        }
        if !rep.complete {
            return out;
        }
        let mut slot = 0;
        loop {
            if slot == keys.len() {
                return out;
            }
            idx[slot] += 1;
            if idx[slot] < cands[keys[slot]].len() {
                break;
            }
            idx[slot] = 0;
            slot += 1;
        }
    }
}

pub fn check_gadget_lemma(
    kind: GadgetKind,
    params: &GadgetParams,
    level: &CandidateLevel,
    budget: u64,
) -> Result<LemmaReport> {
    let g = build_gadget(kind, params)?;
    let opts = SolveOptions {
        budget,
        prune: true,
    };
    match kind {
        GadgetKind::PivotDisk | GadgetKind::PivotVSeg => pivot_lemma(&g, level, opts),
        GadgetKind::Variable => variable_lemma(&g, level, opts),
        GadgetKind::ClauseDisk | GadgetKind::ClauseVSeg => clause_lemma(&g, level, opts),
        GadgetKind::WireDisk(_) | GadgetKind::WireVSeg(_) => wire_lemma(&g, level, opts),
    }
}

/// Through edge between regions three units either side of the centre along
/// the pivot axis. Every weakly simple realisation must route it through the
/// centre, and every candidate pair whose segment contains the centre must
/// extend to one.
fn pivot_lemma(
    g: &GadgetGeometry,
    level: &CandidateLevel,
    opts: SolveOptions,
) -> Result<LemmaReport> {
    let mut rep = LemmaReport::new(g.kind, level);
    let center = g.anchor("center")?.clone();
    let axis = g.anchor("axis")? - &center;
    let ends = [
        &center - &axis.scale(&int(3)),
        &center + &axis.scale(&int(3)),
    ];
    let mut cands = gadget_candidates(g, level)?;
    let mut chains = g.chains.clone();
    for (k, e) in ends.iter().enumerate() {
        cands.push(candidate_points(
            &Region::new(e.clone()),
            g.shape,
            level,
            g.regions.len() + k,
        )?);
    }
    chains.push(2);
    let n = g.regions.len();
    let found = project(&mut rep, &cands, &chains, &[n, n + 1], opts);
    let mut through_center = 0u64;
    let mut missing = 0u64;
    let mut seen = BTreeSet::new();
    for w in &found {
        if on_segment(&center, &w[n], &w[n + 1]) {
            through_center += 1;
        } else {
            missing += 1;
            rep.witnesses.push(("misses centre".into(), w.clone()));
        }
        seen.insert((w[n].clone(), w[n + 1].clone()));
    }
    let mut pairs = 0u64;
    let mut unrealised = 0u64;
    for a in &cands[n] {
        for b in &cands[n + 1] {
            if on_segment(&center, a, b) {
                pairs += 1;
                if !seen.contains(&(a.clone(), b.clone())) {
                    unrealised += 1;
                }
            }
        }
    }
    rep.fact("through_center", through_center);
    rep.fact("missing_center", missing);
    rep.fact("center_pairs", pairs);
    rep.fact("center_pairs_unrealised", unrealised);
    if let Some(w) = found.first() {
        rep.witnesses.insert(0, ("first".into(), w.clone()));
    }
    rep.holds = rep.complete && missing == 0 && through_center > 0 && unrealised == 0;
    Ok(rep)
}

/// Side of the 5-6 edge relative to the 3-4 edge: `Some(true)` above.
pub fn variable_state(p: &[Point]) -> Option<bool> {
    use crate::geometry::orientation;
    let s3 = orientation(&p[4], &p[5], &p[2]);
    let s4 = orientation(&p[4], &p[5], &p[3]);
    if s3 <= 0 && s4 <= 0 && (s3, s4) != (0, 0) {
        Some(true)
    } else if s3 >= 0 && s4 >= 0 && (s3, s4) != (0, 0) {
        Some(false)
    } else {
        None
    }
}

fn variable_lemma(
    g: &GadgetGeometry,
    level: &CandidateLevel,
    opts: SolveOptions,
) -> Result<LemmaReport> {
    let mut rep = LemmaReport::new(g.kind, level);
    let cands = gadget_candidates(g, level)?;
    let origin = g.regions[0].center.clone();
    let (mut above, mut below, mut other) = (0u64, 0u64, 0u64);
    let mut wit: BTreeMap<&'static str, Vec<Point>> = BTreeMap::new();
    let res = search_chains(&cands, &g.chains, opts, |p| {
        rep.realisations += 1;
        let local: Vec<Point> = p.iter().map(|q| q - &origin).collect();
        match variable_state(&local) {
            Some(true) => {
                above += 1;
                wit.entry("false-state").or_insert_with(|| p.to_vec());
            }
            Some(false) => {
                below += 1;
                wit.entry("true-state").or_insert_with(|| p.to_vec());
            }
            None => other += 1,
        }
        ControlFlow::Continue(())
    });
    rep.absorb_stats(&res);
    let classes = (above > 0) as u64 + (below > 0) as u64 + (other > 0) as u64;
    rep.fact("classes", classes);
    rep.fact("above", above);
    rep.fact("below", below);
    rep.fact("unclassified", other);
    rep.witnesses = wit.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    rep.holds = rep.complete && classes == 2 && other == 0;
    Ok(rep)
}

/// Which literal false positions a realisation of the corner chain leaves
/// outside the interior of the corner polygon.
pub fn uncovered(g: &GadgetGeometry, corners: &[Point]) -> Result<[bool; 3]> {
    let mut out = [false; 3];
    for (k, name) in ["x1_false", "x2_false", "x3_false"].iter().enumerate() {
        out[k] = point_in_polygon(g.anchor(name)?, corners)? != PolygonLocation::Inside;
    }
    Ok(out)
}

fn clause_lemma(
    g: &GadgetGeometry,
    level: &CandidateLevel,
    opts: SolveOptions,
) -> Result<LemmaReport> {
    let mut rep = LemmaReport::new(g.kind, level);
    let cands = gadget_candidates(g, level)?;
    let nc = g.chains[0];
    let keys: Vec<usize> = (0..nc).collect();
    let found = project(&mut rep, &cands, &g.chains, &keys, opts);
    let mut all_three = 0u64;
    let mut pair_wit: [Option<Vec<Point>>; 3] = [None, None, None];
    for w in &found {
        let u = uncovered(g, &w[..nc])?;
        if u.iter().all(|&b| b) {
            all_three += 1;
            rep.witnesses.push(("uncovers all three".into(), w.clone()));
        }
        for (k, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            if u[i] && u[j] && pair_wit[k].is_none() {
                pair_wit[k] = Some(w.clone());
            }
        }
    }
    rep.fact("all_three_uncovered", all_three);
    let names = ["x1+x2", "x1+x3", "x2+x3"];
    let mut pairs = 0;
    for (k, w) in pair_wit.into_iter().enumerate() {
        rep.fact(&format!("pair_{}", names[k]), w.is_some() as u64);
        if let Some(w) = w {
            pairs += 1;
            rep.witnesses.push((format!("uncovers {}", names[k]), w));
        }
    }
    rep.holds = rep.complete && all_three == 0 && pairs == 3;
    Ok(rep)
}

/// The wire with its base pinned under a fixed horizontal variable edge, one
/// unit above the base centre (false state) or one below (true state).
fn wire_lemma(
    g: &GadgetGeometry,
    level: &CandidateLevel,
    opts: SolveOptions,
) -> Result<LemmaReport> {
    let mut rep = LemmaReport::new(g.kind, level);
    let base = g.anchor("base")?.clone();
    let lit_false = g.anchor("literal_false")?.clone();
    let lit_true = g.anchor("literal_true")?.clone();
    let lit = g.slot("literal")?;
    let reach = int(4);
    let cands = gadget_candidates(g, level)?;
    let mut chains = g.chains.clone();
    chains.insert(0, 2);
    let keys: Vec<usize> = (2..2 + g.chains[0]).collect();
    let mut states = Vec::new();
    for false_state in [true, false] {
        let y = if false_state {
            &base.y + int(1)
        } else {
            &base.y - int(1)
        };
        let mut c = vec![
            vec![Point::new(&base.x - &reach, y.clone())],
            vec![Point::new(&base.x + &reach, y)],
        ];
        c.extend(cands.iter().cloned());
        let found = project(&mut rep, &c, &chains, &keys, opts);
        let (mut at_false, mut at_true, mut elsewhere) = (0u64, 0u64, 0u64);
        let mut wit: BTreeMap<&'static str, Vec<Point>> = BTreeMap::new();
        for w in &found {
            let q = &w[2 + lit];
            let key = if *q == lit_false {
                at_false += 1;
                "literal false"
            } else if *q == lit_true {
                at_true += 1;
                "literal true"
            } else {
                elsewhere += 1;
                "literal elsewhere"
            };
            wit.entry(key).or_insert_with(|| w[2..].to_vec());
        }
        let tag = if false_state { "false" } else { "true" };
        rep.fact(&format!("{tag}_state_literal_false"), at_false);
        rep.fact(&format!("{tag}_state_literal_true"), at_true);
        rep.fact(&format!("{tag}_state_literal_elsewhere"), elsewhere);
        for (k, v) in wit {
            rep.witnesses.push((format!("{tag} state, {k}"), v));
        }
        states.push((at_false, at_true, elsewhere));
    }
    let (f, t) = (states[0], states[1]);
    rep.holds = rep.complete && f.0 > 0 && f.1 == 0 && f.2 == 0 && t.0 > 0 && t.1 > 0;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pt;

    fn centers(g: &GadgetGeometry) -> Vec<Point> {
        g.regions.iter().map(|r| r.center.clone()).collect()
    }

    #[test]
    fn variable_coordinates() {
        let g = build_gadget(
            GadgetKind::Variable,
            &GadgetParams::standard(GadgetKind::Variable),
        )
        .unwrap();
        assert_eq!(
            centers(&g),
            vec![pt(0, 0), pt(8, 0), pt(5, 2), pt(5, -2), pt(2, 0), pt(9, 0)]
        );
        let bad = GadgetParams::Variable(VariableParams {
            origin: pt(0, 0),
            l: int(8),
        });
        assert!(build_gadget(GadgetKind::Variable, &bad).is_err());
    }

    #[test]
    fn pivot_coordinates() {
        let g = build_gadget(
            GadgetKind::PivotDisk,
            &GadgetParams::standard(GadgetKind::PivotDisk),
        )
        .unwrap();
        let e = rat(1, 10);
        let one = Rat::one();
        let p = |x: Rat, y: i64| Point::new(x, int(y));
        let top = vec![
            p(-(&one + &e), 2),
            p(int(1), 2),
            p(int(1), 5),
            p(int(0), -1),
            p(int(-1), 5),
            p(int(-1), 2),
            p(&one + &e, 2),
        ];
        let bottom = vec![
            p(&one + &e, -2),
            p(int(-1), -2),
            p(int(-1), -5),
            p(int(0), 1),
            p(int(1), -5),
            p(int(1), -2),
            p(-(&one + &e), -2),
        ];
        assert_eq!(centers(&g), [top, bottom].concat());
        assert_eq!(g.chains, vec![7, 7]);
    }

    #[test]
    fn clause_coordinates() {
        let g = build_gadget(
            GadgetKind::ClauseVSeg,
            &GadgetParams::standard(GadgetKind::ClauseVSeg),
        )
        .unwrap();
        assert_eq!(
            centers(&g)[..6].to_vec(),
            vec![
                pt(0, 0),
                pt(0, -3),
                pt(4, -5),
                pt(6, -5),
                pt(10, -3),
                pt(10, 0)
            ]
        );
        assert_eq!(g.anchors["pivot1"], pt(2, -4));
        assert_eq!(g.anchors["pivot2"], pt(8, -4));
        assert_eq!(g.anchors["x1"], pt(1, -4));
        assert_eq!(g.anchors["x2"], pt(5, -6));
        assert_eq!(g.anchors["x3"], pt(9, -4));
    }

    #[test]
    fn clause_disk_anchor_identities() {
        let g = build_gadget(
            GadgetKind::ClauseDisk,
            &GadgetParams::standard(GadgetKind::ClauseDisk),
        )
        .unwrap();
        let ext = |name: &str| {
            candidate_points(
                &Region::new(g.anchors[name].clone()),
                ShapeKind::UnitDisk,
                &CandidateLevel::Extremes,
                0,
            )
            .unwrap()
        };
        // top, right, bottom, left
        assert_eq!(g.anchors["x1_false"], ext("x1")[0]);
        assert_eq!(g.anchors["x2_false"], ext("x2")[1]);
        assert_eq!(g.anchors["x3_false"], ext("x3")[0]);
        assert_eq!(g.anchors["x1_true"], ext("x1")[3]);
        assert_eq!(g.anchors["x2_true"], ext("x2")[2]);
        assert_eq!(g.anchors["x3_true"], ext("x3")[1]);
    }

    #[test]
    fn pivot_halves_are_half_turns() {
        let p = PivotParams {
            center: pt(3, -2),
            rotation: Rotation::quarter_turns(1),
            eps: rat(1, 7),
        };
        let g = build_gadget(GadgetKind::PivotDisk, &GadgetParams::Pivot(p)).unwrap();
        let c = pt(3, -2);
        let r = g.chain_ranges();
        for (i, j) in r[0].clone().zip(r[1].clone()) {
            let a = &g.regions[i].center - &c;
            let b = &g.regions[j].center - &c;
            assert_eq!(a, -b);
        }
    }

    #[test]
    fn vseg_pivot_refuses_rotation() {
        let p = PivotParams {
            center: pt(0, 0),
            rotation: Rotation::quarter_turns(1),
            eps: rat(1, 10),
        };
        assert!(build_gadget(GadgetKind::PivotVSeg, &GadgetParams::Pivot(p)).is_err());
    }

    #[test]
    fn pivot_placement_bounds() {
        let g = build_gadget(
            GadgetKind::PivotDisk,
            &GadgetParams::standard(GadgetKind::PivotDisk),
        )
        .unwrap();
        let eps =
            validate_pivot_placement(&g, &Region::new(pt(-3, 0)), &Region::new(pt(3, 0))).unwrap();
        assert!(eps.is_positive());
        let near = Region::new(Point::new(rat(-1, 2), int(0)));
        assert!(validate_pivot_placement(&g, &near, &Region::new(pt(3, 0))).is_err());
        assert!(
            validate_pivot_placement(&g, &Region::new(pt(-10, 20)), &Region::new(pt(10, 20)))
                .is_err()
        );
    }

    #[test]
    fn wire_audit_rejects_cramped_wires() {
        let p = WireParams {
            origin: pt(0, 0),
            a: int(3),
            b: int(3),
            side: WireSide::Right,
            eps: None,
        };
        assert!(build_gadget(
            GadgetKind::WireDisk(WireSide::Right),
            &GadgetParams::Wire(p)
        )
        .is_err());
    }

    #[test]
    fn variable_lemma_extremes() {
        let kind = GadgetKind::Variable;
        let r = check_gadget_lemma(
            kind,
            &GadgetParams::standard(kind),
            &CandidateLevel::Extremes,
            1_000_000,
        )
        .unwrap();
        assert!(r.holds, "{r}");
    }
}
