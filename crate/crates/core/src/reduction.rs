//! Compiling planar monotone 3SAT layouts into a single imprecise polyline.
//!
//! Variables sit on the x axis from left to right, each a variable gadget of
//! its own length. Wire bases are slots inside the variables' wire zones:
//! top slots and bottom slots alternate so the two halves never share a base
//! position. Clauses of the top half are stacked by nesting height.
//!
//! The polyline runs
//!
//! 1. through the variables from left to right,
//! 2. up past the right end and through the top half from right to left,
//! 3. around the left end of the variables and through the bottom half from
//!    left to right.
//!
//! Inside one half every clause is visited by a walk around its three wires:
//! down and up the outside of the right wire, back along the right wire
//! itself, through the room between right and middle wire (and the clauses
//! nested there), along the middle wire, through the other room, along the
//! left wire, around its outside and finally along the clause corners. Each
//! side of every wire edge passes through the pivot component on that side.
//! Connector regions are placed at the corners of this walk, so that every
//! connector keeps at least one unit of clearance from all other regions.
//! The bottom half is built as a top half and mirrored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gadgets::{
    build_gadget, default_eps, variable_state, ClauseParams, GadgetGeometry, GadgetKind,
    GadgetParams, Rotation, VariableParams, WireParams, WireSide,
};
use crate::instance::{
    extreme_offsets, fmt_point, CandidateLevel, ImprecisePolyline, Realisation, Region, ShapeKind,
};
use crate::render::Scene;
use crate::sat::{validate_layout, Assignment, Formula, Layout, LayoutClause, Polarity, Side};
use crate::solver::{solve_with, verify, SolveOptions, SolveOutcome};
use crate::{int, rat, Point, Rat};

/// Spacing of wire bases along a variable.
const SLOT: i64 = 32;
/// Distance from a variable's first region to its first slot.
const ZONE: i64 = 24;
/// Free space between consecutive variables.
const GAP: i64 = 24;
/// Height of the lowest clauses (disks, segments).
const LEVEL0: [i64; 2] = [30, 80];
/// Extra height per nesting level.
const LEVEL: [i64; 2] = [30, 60];
/// Largest scale factor tried before giving up.
const MAX_SCALE: i64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Gadget(GadgetKind),
    /// Regions that only join gadgets.
    Connector,
}

impl Part {
    pub fn name(&self) -> String {
        match self {
            Part::Gadget(k) => k.name(),
            Part::Connector => "connector".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    pub part: Part,
    pub label: String,
    pub origin: Point,
    pub rotation: Rotation,
    /// Mirrored in the x axis (bottom half).
    pub flipped: bool,
    pub params: Option<GadgetParams>,
    /// Half of the construction; `None` for variables and the links between
    /// the halves.
    pub half: Option<Side>,
    /// Rank in the splice order (by first region).
    pub splice: usize,
    /// Indices of the placement's regions in the instance, ascending.
    pub regions: Vec<usize>,
}

/// Target norm of [`to_square_or_diamond`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Norm {
    L1,
    Linf,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledInstance {
    pub instance: ImprecisePolyline,
    pub placements: Vec<Placement>,
    /// Named regions: `x3.r1`..`x3.r6` for the variable regions,
    /// `c2.base1`..`c2.base3` and `c2.lit1`..`c2.lit3` for wire ends.
    pub anchors: BTreeMap<String, usize>,
    pub formula: Formula,
    pub layout: Layout,
    /// Set once the regions were replaced by L1 or L-infinity balls.
    pub norm: Option<Norm>,
    /// Spacing factor the compiler settled on.
    pub scale: i64,
}

impl CompiledInstance {
    pub fn anchor(&self, name: &str) -> Result<usize> {
        self.anchors
            .get(name)
            .copied()
            .ok_or_else(|| Error::Compile(format!("missing anchor `{name}`")))
    }

    /// Region indices of the variable gadget of `var`.
    pub fn variable_regions(&self, var: usize) -> Result<[usize; 6]> {
        let mut out = [0; 6];
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = self.anchor(&format!("x{var}.r{}", k + 1))?;
        }
        Ok(out)
    }

    /// The sidecar text: placements and anchors.
    pub fn sidecar(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# placements: splice part label origin rotation flip half regions"
        );
        let _ = writeln!(out, "shape {}", self.instance.shape.name());
        let _ = writeln!(out, "scale {}", self.scale);
        if let Some(n) = self.norm {
            let _ = writeln!(out, "norm {}", if n == Norm::L1 { "l1" } else { "linf" });
        }
        let mut order: Vec<&Placement> = self.placements.iter().collect();
        order.sort_by_key(|p| p.splice);
        for p in order {
            let half = p.half.map_or("-", |h| h.name());
            let _ = write!(
                out,
                "placement {} {} {} origin {} rot {} {} flip {} half {} regions {}",
                p.splice,
                p.part.name(),
                p.label,
                fmt_point(&p.origin),
                p.rotation.cos,
                p.rotation.sin,
                u8::from(p.flipped),
                half,
                ranges_text(&p.regions)
            );
            match &p.params {
                Some(GadgetParams::Variable(v)) => {
                    let _ = write!(out, " l {}", v.l);
                }
                Some(GadgetParams::Wire(w)) => {
                    let eps = w.eps.as_ref().map_or("-".to_string(), |e| e.to_string());
                    let _ = write!(out, " a {} b {} eps {}", w.a, w.b, eps);
                }
                Some(GadgetParams::Clause(c)) => {
                    if let Some(e) = &c.eps {
                        let _ = write!(out, " eps {e}");
                    }
                }
                _ => {}
            }
            out.push('\n');
        }
        for (name, idx) in &self.anchors {
            let _ = writeln!(out, "anchor {name} {idx}");
        }
        out
    }
}

fn ranges_text(ix: &[usize]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < ix.len() {
        let mut j = i;
        while j + 1 < ix.len() && ix[j + 1] == ix[j] + 1 {
            j += 1;
        }
        parts.push(if i == j {
            ix[i].to_string()
        } else {
            format!("{}-{}", ix[i], ix[j])
        });
        i = j + 1;
    }
    parts.join(",")
}

fn p(x: Rat, y: Rat) -> Point {
    Point::new(x, y)
}

#[derive(Clone, Debug)]
enum Step {
    Conn(Point),
    /// Regions of a placed gadget, by local index, in walk order.
    Run(usize, Vec<usize>),
}

struct Draft {
    part: Part,
    label: String,
    origin: Point,
    flipped: bool,
    params: Option<GadgetParams>,
    half: Option<Side>,
    geom: Option<GadgetGeometry>,
}

#[derive(Clone, Debug)]
struct ClausePlan {
    id: usize,
    /// x coordinates of the left, middle and right wire bases.
    bases: [Rat; 3],
    /// Height of the clause's top edge.
    y: Rat,
    /// x coordinate of the clause's top-left corner.
    ox: Rat,
    room_a: Vec<usize>,
    room_b: Vec<usize>,
    /// Placement indices: clause, left, middle, right wire.
    clause: usize,
    wires: [usize; 3],
}

struct Compiler<'a> {
    f: &'a Formula,
    lay: &'a Layout,
    vseg: bool,
    scale: i64,
    drafts: Vec<Draft>,
    eps: Rat,
    /// Variable origin x and length, indexed by variable.
    var_x: Vec<Rat>,
    var_l: Vec<Rat>,
    plans: Vec<ClausePlan>,
    roots: [Vec<usize>; 2],
}

pub fn compile(f: &Formula, lay: &Layout, shape: ShapeKind) -> Result<CompiledInstance> {
    validate_layout(lay, f)?;
    let vseg = match shape {
        ShapeKind::UnitDisk => false,
        ShapeKind::VSegment => true,
        other => {
            return Err(Error::Compile(format!(
                "compile builds disk or vertical segment instances, not {}",
                other.name()
            )))
        }
    };
    let mut scale = 1;
    loop {
        match Compiler::new(f, lay, vseg, scale).and_then(|c| c.build()) {
            Err(Error::InvalidGadget(_)) if scale < MAX_SCALE => {
                scale *= 2;
            }
            Err(Error::InvalidGadget(msg)) => {
                return Err(Error::Compile(format!(
                    "packing failed at scale {scale}: {msg}"
                )))
            }
            other => return other,
        }
    }
}

impl<'a> Compiler<'a> {
    fn new(f: &'a Formula, lay: &'a Layout, vseg: bool, scale: i64) -> Result<Self> {
        let mut c = Compiler {
            f,
            lay,
            vseg,
            scale,
            drafts: Vec::new(),
            eps: Rat::one(),
            var_x: vec![Rat::zero(); f.variable_count + 1],
            var_l: vec![Rat::zero(); f.variable_count + 1],
            plans: Vec::new(),
            roots: [Vec::new(), Vec::new()],
        };
        c.plan()?;
        Ok(c)
    }

    fn s(&self, v: i64) -> Rat {
        int(v * self.scale)
    }

    /// Slots, variable lengths, clause positions and the gadget drafts.
    fn plan(&mut self) -> Result<()> {
        let n = self.f.variable_count;
        // Slot order per variable and side from a left-to-right walk.
        let mut counts = [vec![0usize; n + 1], vec![0usize; n + 1]];
        let mut slots: BTreeMap<usize, [usize; 3]> = BTreeMap::new();
        for (si, side) in [Side::Top, Side::Bottom].into_iter().enumerate() {
            for root in self.lay.children(side, None) {
                self.assign_slots(root, &mut counts[si], &mut slots);
            }
        }
        let mut x = Rat::zero();
        for &v in &self.lay.order {
            let k = counts[0][v].max(counts[1][v]).max(1) as i64;
            let l = self.s(2 * ZONE + SLOT * k);
            self.var_x[v] = x.clone();
            self.var_l[v] = l.clone();
            x = &x + &l + self.s(GAP);
        }
        for &v in &self.lay.order {
            let params = GadgetParams::Variable(VariableParams {
                origin: p(self.var_x[v].clone(), Rat::zero()),
                l: self.var_l[v].clone(),
            });
            let geom = build_gadget(GadgetKind::Variable, &params)?;
            self.drafts.push(Draft {
                part: Part::Gadget(GadgetKind::Variable),
                label: format!("x{v}"),
                origin: p(self.var_x[v].clone(), Rat::zero()),
                flipped: false,
                params: Some(params),
                half: None,
                geom: Some(geom),
            });
        }
        // Clause plans, children before parents.
        for (si, side) in [Side::Top, Side::Bottom].into_iter().enumerate() {
            let roots: Vec<usize> = self
                .lay
                .children(side, None)
                .into_iter()
                .map(|c| self.plan_clause(c, side, &slots))
                .collect::<Result<_>>()?;
            self.roots[si] = roots;
        }
        self.make_gadgets()
    }

    fn assign_slots(
        &self,
        c: &LayoutClause,
        counts: &mut [usize],
        slots: &mut BTreeMap<usize, [usize; 3]>,
    ) {
        let take = |v: usize, counts: &mut [usize]| {
            counts[v] += 1;
            counts[v] - 1
        };
        let kids = self.lay.children(c.side, Some(c.id));
        let s0 = take(c.legs[0], counts);
        for k in kids.iter().filter(|k| !self.lay.in_right_room(k)) {
            self.assign_slots(k, counts, slots);
        }
        let s1 = take(c.legs[1], counts);
        for k in kids.iter().filter(|k| self.lay.in_right_room(k)) {
            self.assign_slots(k, counts, slots);
        }
        let s2 = take(c.legs[2], counts);
        slots.insert(c.id, [s0, s1, s2]);
    }

    fn slot_x(&self, v: usize, slot: usize, side: Side) -> Rat {
        let shift = if side == Side::Bottom { SLOT / 2 } else { 0 };
        &self.var_x[v] + self.s(ZONE + SLOT * slot as i64 + shift)
    }

    fn plan_clause(
        &mut self,
        c: &LayoutClause,
        side: Side,
        slots: &BTreeMap<usize, [usize; 3]>,
    ) -> Result<usize> {
        let mut room_a = Vec::new();
        let mut room_b = Vec::new();
        let mut height = 0;
        for k in self.lay.children(side, Some(c.id)) {
            let idx = self.plan_clause(k, side, slots)?;
            height = height.max(self.height(idx) + 1);
            if self.lay.in_right_room(k) {
                room_b.push(idx);
            } else {
                room_a.push(idx);
            }
        }
        let s = slots[&c.id];
        let bases = [0, 1, 2].map(|i| self.slot_x(c.legs[i], s[i], side));
        let y = self.s(self.level0()) + self.s(self.level()) * int(height);
        // The middle wire runs straight up to the middle literal.
        let ox = &bases[1] - int(if self.vseg { 5 } else { 3 });
        self.plans.push(ClausePlan {
            id: c.id,
            bases,
            y,
            ox,
            room_a,
            room_b,
            clause: usize::MAX,
            wires: [usize::MAX; 3],
        });
        Ok(self.plans.len() - 1)
    }

    fn level0(&self) -> i64 {
        LEVEL0[self.vseg as usize]
    }

    fn level(&self) -> i64 {
        LEVEL[self.vseg as usize]
    }

    fn height(&self, idx: usize) -> i64 {
        let pl = &self.plans[idx];
        ((&pl.y - self.s(self.level0())) / self.s(self.level()))
            .to_integer()
            .try_into()
            .unwrap_or(0)
    }

    fn wire_params(
        &self,
        pl: &ClausePlan,
        side: WireSide,
        eps: Option<Rat>,
    ) -> (GadgetKind, WireParams) {
        let (lit_dx, lit_dy, mid_dy) = if self.vseg {
            (int(1), int(4), int(6))
        } else {
            (int(1), int(3), rat(23, 5))
        };
        let right_dx = if self.vseg { int(9) } else { int(5) };
        let (i, a, b) = match side {
            WireSide::Left => (0, &pl.ox + &lit_dx - &pl.bases[0], &pl.y - &lit_dy),
            WireSide::Middle => (1, Rat::one(), &pl.y - &mid_dy),
            WireSide::Right => (2, &pl.bases[2] - &pl.ox - &right_dx, &pl.y - &lit_dy),
        };
        let kind = if self.vseg {
            GadgetKind::WireVSeg(side)
        } else {
            GadgetKind::WireDisk(side)
        };
        let params = WireParams {
            origin: p(pl.bases[i].clone(), Rat::zero()),
            a,
            b,
            side,
            eps,
        };
        (kind, params)
    }

    fn make_gadgets(&mut self) -> Result<()> {
        let sides = [WireSide::Left, WireSide::Middle, WireSide::Right];
        // One eps for every pivot: half the smallest validated bound.
        let mut eps: Option<Rat> = None;
        let mut bump = |e: Option<Rat>| {
            if let Some(e) = e {
                eps = Some(match eps.take() {
                    Some(b) if b < e => b,
                    _ => e,
                });
            }
        };
        for pl in &self.plans {
            for side in sides {
                let (kind, wp) = self.wire_params(pl, side, None);
                if !wp.a.is_positive() || !wp.b.is_positive() {
                    return Err(Error::InvalidGadget(format!(
                        "clause {} does not fit its slots",
                        pl.id
                    )));
                }
                bump(default_eps(kind, &GadgetParams::Wire(wp))?);
            }
            if self.vseg {
                let cp = GadgetParams::Clause(ClauseParams {
                    origin: p(pl.ox.clone(), pl.y.clone()),
                    eps: None,
                });
                bump(default_eps(GadgetKind::ClauseVSeg, &cp)?);
            }
        }
        self.eps = eps.unwrap_or_else(|| rat(1, 16));
        let bottom_ids: Vec<usize> = self
            .lay
            .clauses
            .iter()
            .filter(|c| c.side == Side::Bottom)
            .map(|c| c.id)
            .collect();
        for i in 0..self.plans.len() {
            let pl = self.plans[i].clone();
            let half = if bottom_ids.contains(&pl.id) {
                Side::Bottom
            } else {
                Side::Top
            };
            let ckind = if self.vseg {
                GadgetKind::ClauseVSeg
            } else {
                GadgetKind::ClauseDisk
            };
            let cp = GadgetParams::Clause(ClauseParams {
                origin: p(pl.ox.clone(), pl.y.clone()),
                eps: self.vseg.then(|| self.eps.clone()),
            });
            let cg = build_gadget(ckind, &cp)?;
            self.plans[i].clause = self.drafts.len();
            self.drafts.push(Draft {
                part: Part::Gadget(ckind),
                label: format!("c{}", pl.id),
                origin: p(pl.ox.clone(), pl.y.clone()),
                flipped: false,
                params: Some(cp),
                half: Some(half),
                geom: Some(cg.clone()),
            });
            for (k, side) in sides.into_iter().enumerate() {
                let (kind, wp) = self.wire_params(&pl, side, Some(self.eps.clone()));
                let origin = wp.origin.clone();
                let params = GadgetParams::Wire(wp);
                let g = build_gadget(kind, &params)?;
                let lit = g.anchor("literal")?;
                if lit != cg.anchor(&format!("x{}", k + 1))? {
                    return Err(Error::Compile(format!(
                        "wire {} of clause {} misses its literal",
                        side.name(),
                        pl.id
                    )));
                }
                self.plans[i].wires[k] = self.drafts.len();
                self.drafts.push(Draft {
                    part: Part::Gadget(kind),
                    label: format!("c{}.{}", pl.id, side.name()),
                    origin,
                    flipped: false,
                    params: Some(params),
                    half: Some(half),
                    geom: Some(g),
                });
            }
        }
        Ok(())
    }

    fn geom(&self, pl: usize) -> &GadgetGeometry {
        self.drafts[pl].geom.as_ref().expect("gadget draft")
    }

    fn anchor(&self, pl: usize, name: &str) -> Result<Point> {
        self.geom(pl).anchor(name).cloned()
    }

    /// Walk order through one pivot component and the connector points just
    /// outside its two arms. `forward` walks in the direction of the pivot
    /// axis.
    fn comp(
        &self,
        pl: usize,
        chain: usize,
        pivot: &str,
        forward: bool,
    ) -> Result<(Point, Vec<usize>, Point)> {
        let g = self.geom(pl);
        let c = g.anchor(pivot)?.clone();
        let u = g.anchor(&format!("{pivot}.axis"))? - &c;
        let mut locals: Vec<usize> = g.chain_ranges()[chain].clone().collect();
        let behind = |q: &Point| (q - &c).dot(&u).is_negative();
        if behind(&g.regions[locals[0]].center) != forward {
            locals.reverse();
        }
        let lead = |q: &Point| {
            let s = if behind(q) { -3 } else { 3 };
            q + &u.scale(&int(s))
        };
        let entry = lead(&g.regions[locals[0]].center);
        let exit = lead(&g.regions[*locals.last().expect("nonempty chain")].center);
        Ok((entry, locals, exit))
    }

    fn through(
        &self,
        steps: &mut Vec<Step>,
        pl: usize,
        chain: usize,
        pivot: &str,
        forward: bool,
    ) -> Result<(Point, Point)> {
        let (li, locals, lo) = self.comp(pl, chain, pivot, forward)?;
        steps.push(Step::Conn(li.clone()));
        steps.push(Step::Run(pl, locals));
        steps.push(Step::Conn(lo.clone()));
        Ok((li, lo))
    }

    fn dir(&self, pl: usize, i: usize, j: usize) -> Point {
        let g = self.geom(pl);
        &g.regions[j].center - &g.regions[i].center
    }

    /// Segment component on a steep edge with direction `d`. The inner arm
    /// lies between the spike and the edge; its lead runs past the end of the
    /// component and, with `turn`, back to the outer side. Returns the points
    /// before the component, its locals and the points after it.
    fn vcomp(
        &self,
        pl: usize,
        chain: usize,
        pivot: &str,
        d: &Point,
        inner_first: bool,
        turn: bool,
    ) -> Result<(Vec<Point>, Vec<usize>, Vec<Point>)> {
        let g = self.geom(pl);
        let c = g.anchor(pivot)?.clone();
        let mut locals: Vec<usize> = g.chain_ranges()[chain].clone().collect();
        let s = if g.regions[locals[1]].center.y > c.y {
            1
        } else {
            -1
        };
        if d.y.is_zero() || d.x.is_zero() {
            return Err(Error::Compile(format!(
                "pivot {pivot} of {} is not on a steep edge",
                self.drafts[pl].label
            )));
        }
        let si = if (&d.x * &d.y * int(s)).is_positive() {
            1
        } else {
            -1
        };
        let first_inner = (&g.regions[locals[0]].center.x - &c.x).is_positive() == (si > 0);
        if first_inner != inner_first {
            locals.reverse();
        }
        let inner_arm = if inner_first {
            locals[0]
        } else {
            *locals.last().expect("nonempty chain")
        };
        let at = |dx: Rat, dy: i64| p(&c.x + dx, &c.y + int(dy));
        let o = at(int(-3 * si), 3 * s);
        let i = p(g.regions[inner_arm].center.x.clone(), &c.y + int(7 * s));
        let t = at(int(-3 * si), 7 * s);
        let inner = if turn { vec![i, t] } else { vec![i] };
        Ok(if inner_first {
            (inner.into_iter().rev().collect(), locals, vec![o])
        } else {
            (vec![o], locals, inner)
        })
    }

    fn vvisit(
        &self,
        steps: &mut Vec<Step>,
        pl: usize,
        chain: usize,
        pivot: &str,
        d: &Point,
        inner_first: bool,
        turn: bool,
    ) -> Result<()> {
        let (pre, locals, post) = self.vcomp(pl, chain, pivot, d, inner_first, turn)?;
        steps.extend(pre.into_iter().map(Step::Conn));
        steps.push(Step::Run(pl, locals));
        steps.extend(post.into_iter().map(Step::Conn));
        Ok(())
    }

    /// Segment component under or over a horizontal edge, passed from one
    /// side to the other.
    fn hvisit(
        &self,
        steps: &mut Vec<Step>,
        pl: usize,
        chain: usize,
        pivot: &str,
        from_right: bool,
    ) -> Result<()> {
        let g = self.geom(pl);
        let c = g.anchor(pivot)?.clone();
        let mut locals: Vec<usize> = g.chain_ranges()[chain].clone().collect();
        let s = if g.regions[locals[1]].center.y > c.y {
            2
        } else {
            -2
        };
        if (g.regions[locals[0]].center.x > c.x) != from_right {
            locals.reverse();
        }
        let (a, b) = if from_right { (3, -3) } else { (-3, 3) };
        steps.push(Step::Conn(p(&c.x + int(a), &c.y + int(s))));
        steps.push(Step::Run(pl, locals));
        steps.push(Step::Conn(p(&c.x + int(b), &c.y + int(s))));
        Ok(())
    }

    fn entry(&self, i: usize) -> Point {
        let pl = &self.plans[i];
        p(&pl.bases[2] + int(10), &pl.y + int(11))
    }

    fn exit(&self, i: usize) -> Point {
        let pl = &self.plans[i];
        p(&pl.bases[0] - int(13), &pl.y + int(11))
    }

    /// Walk through clause `i` and everything nested in it, from its entry
    /// point on the right to its exit point on the left (top-half frame).
    fn route(&self, i: usize, steps: &mut Vec<Step>) -> Result<()> {
        if self.vseg {
            return self.route_vseg(i, steps);
        }
        let pl = &self.plans[i];
        let [l, m, r] = pl.wires;
        let y = pl.y.clone();
        let [xl, xm, xr] = pl.bases.clone();
        let at = |x: Rat, yy: Rat| Step::Conn(p(x, yy));
        let p1r = self.anchor(r, "pivot1")?;
        let p1l = self.anchor(l, "pivot1")?;

        // Outside of the right wire, going up, then over its corner.
        steps.push(Step::Conn(self.entry(i)));
        steps.push(at(&xr + int(10), &p1r.y - int(6)));
        self.through(steps, r, 2, "pivot1", true)?;
        steps.push(at(&xr + int(3), &y + int(1)));
        self.through(steps, r, 3, "pivot2", false)?;
        // The right wire itself, from the literal down to the variable.
        steps.push(Step::Run(r, vec![2, 1, 0]));
        // Room between right and middle wire.
        self.through(steps, r, 1, "pivot1", true)?;
        steps.push(at(&xr - int(3), &y - int(5)));
        let (_, lo) = self.through(steps, r, 4, "pivot2", false)?;
        if let Some(&first) = pl.room_b.last() {
            steps.push(at(lo.x.clone(), &y - int(11)));
            steps.push(at(self.entry(first).x, &y - int(11)));
            for &k in pl.room_b.iter().rev() {
                self.route(k, steps)?;
            }
        }
        let (mi, _, _) = self.comp(m, 2, "pivot1", false)?;
        steps.push(at(&xm + int(10), mi.y.clone()));
        self.through(steps, m, 2, "pivot1", false)?;
        steps.push(Step::Run(m, vec![0, 1]));
        let (_, mo) = self.through(steps, m, 1, "pivot1", false)?;
        // Room between middle and left wire.
        let mut last = p(&xm - int(10), mo.y.clone());
        steps.push(Step::Conn(last.clone()));
        for &k in pl.room_a.iter().rev() {
            self.route(k, steps)?;
            last = self.exit(k);
        }
        let (li, _, _) = self.comp(l, 4, "pivot2", false)?;
        steps.push(at(last.x.clone(), &y - int(11)));
        steps.push(at(li.x.clone(), &y - int(11)));
        self.through(steps, l, 4, "pivot2", false)?;
        steps.push(at(&xl + int(3), &y - int(5)));
        self.through(steps, l, 2, "pivot1", false)?;
        // The left wire, up to its literal, and around its outside.
        steps.push(Step::Run(l, vec![0, 1, 2]));
        self.through(steps, l, 3, "pivot2", false)?;
        steps.push(at(&xl - int(3), &y + int(1)));
        self.through(steps, l, 1, "pivot1", false)?;
        steps.push(at(&xl - int(10), &p1l.y - int(6)));
        steps.push(at(&xl - int(10), &y + int(7)));
        steps.push(at(&pl.ox - int(2), &y + int(7)));
        // Clause corners and out over the top.
        steps.push(Step::Run(pl.clause, vec![0, 1, 2, 3]));
        steps.push(at(&pl.ox + int(6), &y + int(11)));
        steps.push(Step::Conn(self.exit(i)));
        Ok(())
    }

    fn route_vseg(&self, i: usize, steps: &mut Vec<Step>) -> Result<()> {
        let pl = &self.plans[i];
        let [l, m, r] = pl.wires;
        let cl = pl.clause;
        let y = pl.y.clone();
        let b = &y - int(4);
        let ox = pl.ox.clone();
        let [xl, xm, xr] = pl.bases.clone();
        let at = |x: Rat, yy: Rat| Step::Conn(p(x, yy));
        let (r1, l1) = (self.anchor(r, "pivot1")?, self.anchor(l, "pivot1")?);
        let m1 = self.anchor(m, "pivot1")?;
        let (dr, dl) = (self.dir(r, 0, 1), self.dir(l, 0, 1));
        let (dm1, dm2) = (self.dir(m, 0, 1), self.dir(m, 1, 2));
        let (dp, dq) = (self.dir(cl, 1, 2), self.dir(cl, 3, 4));

        // Outside of the right wire: down, through its lower component and
        // back up over the corner to the literal.
        steps.push(Step::Conn(self.entry(i)));
        steps.push(at(&xr + int(10), &r1.y - int(7)));
        self.vvisit(steps, r, 2, "pivot1", &dr, true, true)?;
        steps.push(at(&xr + int(4), &b + int(3)));
        self.hvisit(steps, r, 3, "pivot2", true)?;
        steps.push(Step::Run(r, vec![2, 1, 0]));
        // Room between right and middle wire.
        self.vvisit(steps, r, 1, "pivot1", &dr, false, true)?;
        steps.push(at(&xr - int(2), &b - int(4)));
        self.hvisit(steps, r, 4, "pivot2", true)?;
        self.vvisit(steps, cl, 4, "pivot2", &dq, false, true)?;
        for &k in pl.room_b.iter().rev() {
            self.route(k, steps)?;
        }
        self.vvisit(steps, m, 3, "pivot2", &dm2, true, true)?;
        self.vvisit(steps, m, 2, "pivot1", &dm1, false, true)?;
        steps.push(Step::Run(m, vec![0, 1, 2]));
        // Room between middle and left wire.
        self.vvisit(steps, cl, 2, "pivot1", &dp, true, false)?;
        self.vvisit(steps, m, 4, "pivot2", &dm2, false, true)?;
        self.vvisit(steps, m, 1, "pivot1", &dm1, true, true)?;
        let mut last = p(&xm - int(10), &m1.y + int(3));
        steps.push(Step::Conn(last.clone()));
        for &k in pl.room_a.iter().rev() {
            self.route(k, steps)?;
            last = self.exit(k);
        }
        steps.push(at(last.x.clone(), &y - int(8)));
        self.hvisit(steps, l, 4, "pivot2", true)?;
        steps.push(at(&xl + int(2), &b - int(4)));
        self.vvisit(steps, l, 1, "pivot1", &dl, true, true)?;
        // The left wire, back over its top and down its outside.
        steps.push(Step::Run(l, vec![0, 1, 2]));
        self.hvisit(steps, l, 3, "pivot2", true)?;
        steps.push(at(&xl - int(4), &b + int(3)));
        self.vvisit(steps, l, 2, "pivot1", &dl, false, true)?;
        steps.push(at(&xl - int(10), &l1.y - int(7)));
        steps.push(at(&xl - int(10), &y + int(7)));
        // Into the clause from above: both upper components share the
        // connector between them.
        let (pre, q_locals, mid) = self.vcomp(cl, 3, "pivot2", &dq, true, false)?;
        steps.push(at(pre[0].x.clone(), &y + int(7)));
        steps.extend(pre.into_iter().map(Step::Conn));
        steps.push(Step::Run(cl, q_locals));
        steps.extend(mid.into_iter().map(Step::Conn));
        let (_, p_locals, post) = self.vcomp(cl, 1, "pivot1", &dp, false, false)?;
        steps.push(Step::Run(cl, p_locals));
        steps.extend(post.into_iter().map(Step::Conn));
        steps.push(Step::Run(cl, (0..6).collect()));
        steps.push(at(&ox + int(10), &y + int(11)));
        steps.push(Step::Conn(self.exit(i)));
        Ok(())
    }

    fn half_steps(&self, si: usize) -> Result<Vec<Step>> {
        let mut steps = Vec::new();
        for &k in self.roots[si].iter().rev() {
            self.route(k, &mut steps)?;
        }
        Ok(steps)
    }

    fn top_of(&self, si: usize) -> Rat {
        let side = if si == 0 { Side::Top } else { Side::Bottom };
        let ids: Vec<usize> = self
            .lay
            .clauses
            .iter()
            .filter(|c| c.side == side)
            .map(|c| c.id)
            .collect();
        self.plans
            .iter()
            .filter(|pl| ids.contains(&pl.id))
            .map(|pl| pl.y.clone())
            .max()
            .unwrap_or_else(Rat::zero)
            + int(20)
    }

    fn build(mut self) -> Result<CompiledInstance> {
        let nvars = self.lay.order.len();
        let mut steps: Vec<Step> = (0..nvars).map(|i| Step::Run(i, (0..6).collect())).collect();
        let last = *self.lay.order.last().expect("at least one variable");
        let x_far = &self.var_x[last] + &self.var_l[last] + self.s(GAP);
        let x_left = -self.s(GAP);
        let (h_top, h_bot) = (self.top_of(0), self.top_of(1));
        let links_at = steps.len();
        steps.push(Step::Conn(p(x_far.clone(), Rat::zero())));
        steps.push(Step::Conn(p(x_far, h_top.clone())));
        let top = self.half_steps(0)?;
        steps.extend(top);
        steps.push(Step::Conn(p(x_left.clone(), h_top)));
        let mut bottom = self.half_steps(1)?;
        if !bottom.is_empty() {
            steps.push(Step::Conn(p(x_left, -h_bot)));
            bottom.reverse();
            for s in &mut bottom {
                match s {
                    Step::Conn(q) => *q = p(q.x.clone(), -q.y.clone()),
                    Step::Run(pl, locals) => {
                        locals.reverse();
                        self.drafts[*pl].flipped = true;
                    }
                }
            }
            steps.extend(bottom);
        }
        for d in &mut self.drafts {
            if d.flipped {
                d.geom = d.geom.take().map(|g| g.flipped_vertically());
                d.origin = p(d.origin.x.clone(), -d.origin.y.clone());
                d.params = d.params.take().map(|params| flip_params(params));
            }
        }
        self.assemble(steps, links_at)
    }

    fn assemble(self, steps: Vec<Step>, links_at: usize) -> Result<CompiledInstance> {
        let mut centers: Vec<Point> = Vec::new();
        let mut owner: Vec<usize> = Vec::new();
        let mut local_to_global: Vec<BTreeMap<usize, usize>> =
            vec![BTreeMap::new(); self.drafts.len()];
        let mut drafts = self.drafts;
        let mut open_link: Option<usize> = None;
        for (si, s) in steps.into_iter().enumerate() {
            match s {
                Step::Conn(q) => {
                    let d = match open_link {
                        Some(d) => d,
                        None => {
                            let half = if si < links_at {
                                None
                            } else {
                                // Links inside a half belong to it; the
                                // passages between halves belong to neither.
                                None
                            };
                            drafts.push(Draft {
                                part: Part::Connector,
                                label: format!("link{}", drafts.len()),
                                origin: q.clone(),
                                flipped: false,
                                params: None,
                                half,
                                geom: None,
                            });
                            local_to_global.push(BTreeMap::new());
                            open_link = Some(drafts.len() - 1);
                            drafts.len() - 1
                        }
                    };
                    let n = local_to_global[d].len();
                    local_to_global[d].insert(n, centers.len());
                    centers.push(q);
                    owner.push(d);
                }
                Step::Run(pl, locals) => {
                    open_link = None;
                    let g = drafts[pl].geom.as_ref().expect("gadget draft");
                    for li in locals {
                        if local_to_global[pl].insert(li, centers.len()).is_some() {
                            return Err(Error::Compile(format!(
                                "region {li} of {} spliced twice",
                                drafts[pl].label
                            )));
                        }
                        centers.push(g.regions[li].center.clone());
                        owner.push(pl);
                    }
                }
            }
        }
        // Every gadget region is spliced exactly once.
        for (d, map) in drafts.iter().zip(&local_to_global) {
            if let Some(g) = &d.geom {
                if map.len() != g.regions.len() {
                    return Err(Error::Compile(format!(
                        "{} has {} regions but {} were spliced",
                        d.label,
                        g.regions.len(),
                        map.len()
                    )));
                }
            }
        }
        // Connector runs that sit between two pieces of the same half
        // belong to that half.
        let mut halves: Vec<Option<Side>> = drafts.iter().map(|d| d.half).collect();
        for (di, d) in drafts.iter().enumerate() {
            if d.part == Part::Connector {
                let idx: Vec<usize> = local_to_global[di].values().copied().collect();
                let before = idx
                    .first()
                    .and_then(|&i| i.checked_sub(1))
                    .map(|i| drafts[owner[i]].half);
                let after = idx
                    .last()
                    .and_then(|&i| owner.get(i + 1))
                    .map(|&o| drafts[o].half);
                if let (Some(Some(a)), Some(Some(b))) = (before, after) {
                    if a == b {
                        halves[di] = Some(a);
                    }
                }
            }
        }
        let shape = if self.vseg {
            ShapeKind::VSegment
        } else {
            ShapeKind::UnitDisk
        };
        let labels: Vec<&str> = drafts.iter().map(|d| d.label.as_str()).collect();
        // A clause and its wires share the literal regions.
        let groups: Vec<&str> = labels
            .iter()
            .map(|l| l.split('.').next().unwrap_or(l))
            .collect();
        let group_of: Vec<&str> = owner.iter().map(|&o| groups[o]).collect();
        audit(&centers, &owner, &group_of, &labels, shape)?;

        let mut placements: Vec<Placement> = drafts
            .iter()
            .enumerate()
            .map(|(di, d)| {
                let mut regions: Vec<usize> = local_to_global[di].values().copied().collect();
                regions.sort_unstable();
                Placement {
                    part: d.part,
                    label: d.label.clone(),
                    origin: d.origin.clone(),
                    rotation: Rotation::identity(),
                    flipped: d.flipped,
                    params: d.params.clone(),
                    half: halves[di],
                    splice: 0,
                    regions,
                }
            })
            .collect();
        let mut order: Vec<usize> = (0..placements.len()).collect();
        order.sort_by_key(|&i| placements[i].regions.first().copied().unwrap_or(usize::MAX));
        for (rank, &i) in order.iter().enumerate() {
            placements[i].splice = rank;
        }

        let mut anchors = BTreeMap::new();
        for (vi, &v) in self.lay.order.iter().enumerate() {
            for k in 0..6 {
                anchors.insert(format!("x{v}.r{}", k + 1), local_to_global[vi][&k]);
            }
        }
        for pl in &self.plans {
            for (k, &w) in pl.wires.iter().enumerate() {
                let g = drafts[w].geom.as_ref().expect("wire");
                let base = g.slot("base")?;
                let lit = g.slot("literal")?;
                anchors.insert(
                    format!("c{}.base{}", pl.id, k + 1),
                    local_to_global[w][&base],
                );
                anchors.insert(format!("c{}.lit{}", pl.id, k + 1), local_to_global[w][&lit]);
            }
            let g = drafts[pl.clause].geom.as_ref().expect("clause");
            anchors.insert(
                format!("c{}.first", pl.id),
                local_to_global[pl.clause][&g.slot("first")?],
            );
            anchors.insert(
                format!("c{}.last", pl.id),
                local_to_global[pl.clause][&g.slot("last")?],
            );
        }

        let instance =
            ImprecisePolyline::new(shape, centers.into_iter().map(Region::new).collect())?;
        Ok(CompiledInstance {
            instance,
            placements,
            anchors,
            formula: self.f.clone(),
            layout: self.lay.clone(),
            norm: None,
            scale: self.scale,
        })
    }
}

fn flip_params(params: GadgetParams) -> GadgetParams {
    let f = |q: Point| p(q.x.clone(), -q.y);
    match params {
        GadgetParams::Wire(mut w) => {
            w.origin = f(w.origin);
            GadgetParams::Wire(w)
        }
        GadgetParams::Clause(mut c) => {
            c.origin = f(c.origin);
            GadgetParams::Clause(c)
        }
        other => other,
    }
}

/// Regions of different placements must be disjoint, apart from the
/// regions a clause shares with its wires.
fn audit(
    centers: &[Point],
    owner: &[usize],
    group: &[&str],
    labels: &[&str],
    shape: ShapeKind,
) -> Result<()> {
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            if group[i] == group[j] {
                continue;
            }
            let d = &centers[j] - &centers[i];
            let apart = match shape {
                ShapeKind::VSegment => !d.x.is_zero() || d.y.abs() > int(2),
                _ => d.norm2() > int(4),
            };
            if !apart {
                return Err(Error::InvalidGadget(format!(
                    "regions {i} ({} of {}) and {j} ({} of {}) overlap",
                    fmt_point(&centers[i]),
                    labels[owner[i]],
                    fmt_point(&centers[j]),
                    labels[owner[j]]
                )));
            }
        }
    }
    Ok(())
}

/// Replace every disk by the L1 ball of the same centre, or (for
/// L-infinity) map the plane by `(x, y) -> ((x - y)/2, (x + y)/2)` and use
/// unit squares. Either way the four extreme points of every disk become the
/// extreme candidates of the new region. Vertical segment instances are
/// accepted too: the diamond contains each segment.
pub fn to_square_or_diamond(c: &CompiledInstance, norm: Norm) -> Result<CompiledInstance> {
    if !matches!(c.instance.shape, ShapeKind::UnitDisk | ShapeKind::VSegment) {
        return Err(Error::Compile(format!(
            "expected a disk or vertical segment instance, got {}",
            c.instance.shape.name()
        )));
    }
    let mut out = c.clone();
    match norm {
        Norm::L1 => out.instance.shape = ShapeKind::UnitDiamond,
        Norm::Linf => {
            out.instance.shape = ShapeKind::UnitSquare;
            for r in &mut out.instance.regions {
                r.center = linf_map(&r.center);
            }
            for pl in &mut out.placements {
                pl.origin = linf_map(&pl.origin);
            }
        }
    }
    out.norm = Some(norm);
    Ok(out)
}

/// The similarity used for L-infinity instances.
pub fn linf_map(q: &Point) -> Point {
    let h = rat(1, 2);
    p((&q.x - &q.y) * &h, (&q.x + &q.y) * &h)
}

/// Carry a realisation of the disk instance over to the instance returned by
/// [`to_square_or_diamond`].
pub fn map_realisation(r: &Realisation, norm: Norm) -> Realisation {
    match norm {
        Norm::L1 => r.clone(),
        Norm::Linf => Realisation::new(r.points.iter().map(linf_map).collect()),
    }
}

/// A weakly simple realisation for a satisfying assignment.
///
/// Every variable gadget is pinned to the state of its variable; the other
/// regions are searched over their extreme points, which the gadget
/// constructions leave enough room for. The result is checked with
/// [`verify`].
pub fn assignment_to_realisation(c: &CompiledInstance, a: &Assignment) -> Result<Realisation> {
    assignment_to_realisation_with(c, a, SolveOptions::default())
}

pub fn assignment_to_realisation_with(
    c: &CompiledInstance,
    a: &Assignment,
    opts: SolveOptions,
) -> Result<Realisation> {
    if a.values.len() != c.formula.variable_count || !c.formula.evaluate(a) {
        return Err(Error::Unsatisfied);
    }
    let level = CandidateLevel::Custom(pinned_candidates(c, a)?);
    match solve_with(&c.instance, &level, opts)? {
        SolveOutcome::Realisable(r) => {
            if !verify(&c.instance, &r)? {
                return Err(Error::Compile(
                    "constructed realisation failed verification".into(),
                ));
            }
            Ok(r)
        }
        SolveOutcome::NoneOverCandidates => Err(Error::Compile(
            "no realisation extends the pinned variable states".into(),
        )),
        SolveOutcome::BudgetExceeded(s) => Err(Error::BudgetExceeded(s.nodes)),
    }
}

/// Extreme candidates everywhere, except that the variable gadgets are
/// pinned to their states. Region 3 takes its bottom point and region 4 its
/// top point; in the false state regions 5 and 6 take their top points and
/// regions 1 and 2 their bottom points, the true state swaps the two pairs.
pub fn pinned_candidates(c: &CompiledInstance, a: &Assignment) -> Result<Vec<Vec<Point>>> {
    let shape = c.instance.shape;
    let mut cands: Vec<Vec<Point>> = c
        .instance
        .regions
        .iter()
        .map(|r| {
            extreme_offsets(shape)
                .iter()
                .map(|o| &r.center + o)
                .collect()
        })
        .collect();
    let map = |q: Point| match c.norm {
        Some(Norm::Linf) => linf_map(&q),
        _ => q,
    };
    for v in 1..=c.formula.variable_count {
        let ix = c.variable_regions(v)?;
        // Undo the L-infinity map to read the regions in the disk frame.
        let center = |i: usize| {
            let q = &c.instance.regions[i].center;
            match c.norm {
                Some(Norm::Linf) => p(&q.x + &q.y, &q.y - &q.x),
                _ => q.clone(),
            }
        };
        let up = if a.value(v) { int(-1) } else { int(1) };
        let pins = [
            (0, -up.clone()),
            (1, -up.clone()),
            (2, int(-1)),
            (3, int(1)),
            (4, up.clone()),
            (5, up),
        ];
        for (k, dy) in pins {
            let q = center(ix[k]);
            cands[ix[k]] = vec![map(p(q.x.clone(), &q.y + dy))];
        }
    }
    Ok(cands)
}

/// The half a region's placement belongs to.
pub fn region_halves(c: &CompiledInstance) -> Vec<Option<Side>> {
    let mut out = vec![None; c.instance.len()];
    for pl in &c.placements {
        for &i in &pl.regions {
            out[i] = pl.half;
        }
    }
    out
}

/// Whether an edge of the top half meets an edge of the bottom half in a
/// realisation. An edge belongs to a half when both its regions do.
pub fn halves_touch(c: &CompiledInstance, r: &Realisation) -> bool {
    let halves = region_halves(c);
    let edges = |side: Side| -> Vec<usize> {
        (0..r.points.len().saturating_sub(1))
            .filter(|&e| halves[e] == Some(side) && halves[e + 1] == Some(side))
            .collect()
    };
    let (top, bottom) = (edges(Side::Top), edges(Side::Bottom));
    top.iter().any(|&e| {
        bottom.iter().any(|&g| {
            crate::geometry::relation(
                &r.points[e],
                &r.points[e + 1],
                &r.points[g],
                &r.points[g + 1],
            ) != crate::geometry::SegmentRelation::Disjoint
        })
    })
}

/// Render scene for a realisation of a compiled instance: wire edges are
/// classed by whether their literal is true in the variables' states.
pub fn state_scene(c: &CompiledInstance, r: &Realisation) -> Result<Scene> {
    let n = r.points.len();
    if n != c.instance.len() {
        return Err(Error::LengthMismatch {
            expected: c.instance.len(),
            got: n,
        });
    }
    let mut value = vec![None; c.formula.variable_count + 1];
    for (v, slot) in value.iter_mut().enumerate().skip(1) {
        let pts: Vec<Point> = c
            .variable_regions(v)?
            .iter()
            .map(|&i| r.points[i].clone())
            .collect();
        // The final edge above the middle pair is the false state.
        *slot = variable_state(&pts).map(|above| !above);
    }
    let mut classes = vec![None; n.saturating_sub(1)];
    for pl in &c.placements {
        let Part::Gadget(GadgetKind::WireDisk(side) | GadgetKind::WireVSeg(side)) = pl.part else {
            continue;
        };
        let Some(id) = pl
            .label
            .strip_prefix('c')
            .and_then(|t| t.split('.').next())
            .and_then(|t| t.parse::<usize>().ok())
        else {
            continue;
        };
        let (Some(lc), Some(fc)) = (c.layout.clause(id), c.formula.clauses.get(id - 1)) else {
            continue;
        };
        let var = lc.legs[side as usize];
        let Some(val) = value[var] else { continue };
        let lit = val == (fc.polarity == Polarity::Positive);
        let mine: BTreeSet<usize> = pl.regions.iter().copied().collect();
        for (e, class) in classes.iter_mut().enumerate() {
            if mine.contains(&e) && mine.contains(&(e + 1)) {
                *class = Some(lit);
            }
        }
    }
    Ok(Scene {
        edge_classes: classes,
        ..Scene::default()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::parse_formula;

    fn example() -> (Formula, Layout) {
        let f = parse_formula("p cnf 3 1\n1 2 3 0\n").unwrap();
        let lay = Layout::trivial(&f).unwrap();
        (f, lay)
    }

    #[test]
    fn single_clause_compiles() {
        let (f, lay) = example();
        let c = compile(&f, &lay, ShapeKind::UnitDisk).unwrap();
        assert_eq!(c.variable_regions(1).unwrap(), [0, 1, 2, 3, 4, 5]);
        let mut seen = vec![0; c.instance.len()];
        for pl in &c.placements {
            for &i in &pl.regions {
                seen[i] += 1;
            }
        }
        assert!(seen.iter().all(|&k| k == 1));
    }

    #[test]
    fn linf_map_sends_diamond_extremes_to_square_corners() {
        let offs = extreme_offsets(ShapeKind::UnitDiamond);
        let mapped: Vec<Point> = offs.iter().map(linf_map).collect();
        assert_eq!(mapped, extreme_offsets(ShapeKind::UnitSquare));
    }

    #[test]
    fn only_disks_and_segments_convert() {
        let (f, lay) = example();
        let c = compile(&f, &lay, ShapeKind::UnitDisk).unwrap();
        let sq = to_square_or_diamond(&c, Norm::Linf).unwrap();
        assert_eq!(sq.instance.shape, ShapeKind::UnitSquare);
        assert!(to_square_or_diamond(&sq, Norm::L1).is_err());
        assert!(sq.sidecar().contains("norm linf"));
    }
}
