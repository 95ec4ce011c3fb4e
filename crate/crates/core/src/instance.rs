//! Regions, imprecise polylines, realisations and their text formats.
//!
//! Instance files look like
//!
//! ```text
//! # comment
//! shape disk
//! 0 0
//! 17/2 -1/3
//! ```
//!
//! with one region centre per line. Realisation files hold one `x y` pair per
//! line. Coordinates are exact rationals written as `num/den` or integers.

use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::{rat, Point, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShapeKind {
    /// Closed disk of radius 1.
    UnitDisk,
    /// Axis-aligned closed square of side 1.
    UnitSquare,
    /// Closed L1 ball of radius 1.
    UnitDiamond,
    /// Closed vertical segment of length 2.
    VSegment,
}

impl ShapeKind {
    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::UnitDisk => "disk",
            ShapeKind::UnitSquare => "square",
            ShapeKind::UnitDiamond => "diamond",
            ShapeKind::VSegment => "vseg",
        }
    }
}

impl FromStr for ShapeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "disk" => Ok(ShapeKind::UnitDisk),
            "square" => Ok(ShapeKind::UnitSquare),
            "diamond" => Ok(ShapeKind::UnitDiamond),
            "vseg" => Ok(ShapeKind::VSegment),
            other => Err(Error::parse(0, format!("unknown shape `{other}`"))),
        }
    }
}

/// A translate of the instance's shape, identified by its centre.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Region {
    pub center: Point,
}

impl Region {
    pub fn new(center: Point) -> Self {
        Region { center }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImprecisePolyline {
    pub shape: ShapeKind,
    pub regions: Vec<Region>,
}

impl ImprecisePolyline {
    pub fn new(shape: ShapeKind, regions: Vec<Region>) -> Result<Self> {
        if regions.len() < 2 {
            return Err(Error::InvalidInstance(format!(
                "need at least 2 regions, got {}",
                regions.len()
            )));
        }
        Ok(ImprecisePolyline { shape, regions })
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn contains(&self, index: usize, p: &Point) -> bool {
        contains(&self.regions[index], self.shape, p)
    }

    /// Candidate points for every region at the given level.
    pub fn candidates(&self, level: &CandidateLevel) -> Result<Vec<Vec<Point>>> {
        if let CandidateLevel::Custom(lists) = level {
            if lists.len() != self.regions.len() {
                return Err(Error::LengthMismatch {
                    expected: self.regions.len(),
                    got: lists.len(),
                });
            }
        }
        (0..self.regions.len())
            .map(|i| candidate_points(&self.regions[i], self.shape, level, i))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realisation {
    pub points: Vec<Point>,
}

impl Realisation {
    pub fn new(points: Vec<Point>) -> Self {
        Realisation { points }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CandidateLevel {
    Extremes,
    ExtremesAndCenter,
    /// Explicit candidate lists, one per region.
    Custom(Vec<Vec<Point>>),
}

pub fn contains(r: &Region, shape: ShapeKind, p: &Point) -> bool {
    let dx = &p.x - &r.center.x;
    let dy = &p.y - &r.center.y;
    match shape {
        ShapeKind::UnitDisk => &dx * &dx + &dy * &dy <= Rat::one(),
        ShapeKind::UnitSquare => {
            let h = rat(1, 2);
            dx.abs() <= h && dy.abs() <= h
        }
        ShapeKind::UnitDiamond => dx.abs() + dy.abs() <= Rat::one(),
        ShapeKind::VSegment => dx.is_zero() && dy.abs() <= Rat::one(),
    }
}

/// Offsets of the extreme candidates from the region centre.
///
/// For disks and diamonds these are the top, right, bottom and leftmost
/// points. Squares arise as 45 degree images of diamonds, so their candidates
/// are the images of those four points: the corners, listed top-left,
/// top-right, bottom-right, bottom-left.
pub fn extreme_offsets(shape: ShapeKind) -> Vec<Point> {
    let p = |x: Rat, y: Rat| Point::new(x, y);
    let (o, z) = (Rat::one(), Rat::zero());
    match shape {
        ShapeKind::UnitDisk | ShapeKind::UnitDiamond => vec![
            p(z.clone(), o.clone()),
            p(o.clone(), z.clone()),
            p(z.clone(), -o.clone()),
            p(-o, z),
        ],
        ShapeKind::UnitSquare => {
            let h = rat(1, 2);
            vec![
                p(-h.clone(), h.clone()),
                p(h.clone(), h.clone()),
                p(h.clone(), -h.clone()),
                p(-h.clone(), -h),
            ]
        }
        ShapeKind::VSegment => vec![p(z.clone(), o.clone()), p(z, -o)],
    }
}

pub fn candidate_points(
    r: &Region,
    shape: ShapeKind,
    level: &CandidateLevel,
    index: usize,
) -> Result<Vec<Point>> {
    match level {
        CandidateLevel::Extremes | CandidateLevel::ExtremesAndCenter => {
            let mut pts: Vec<Point> = extreme_offsets(shape)
                .iter()
                .map(|o| &r.center + o)
                .collect();
            if *level == CandidateLevel::ExtremesAndCenter {
                pts.push(r.center.clone());
            }
            Ok(pts)
        }
        CandidateLevel::Custom(lists) => {
            let list = lists.get(index).ok_or(Error::LengthMismatch {
                expected: index + 1,
                got: lists.len(),
            })?;
            if list.is_empty() {
                return Err(Error::InvalidInstance(format!(
                    "empty candidate list for region {index}"
                )));
            }
            if list.iter().any(|p| !contains(r, shape, p)) {
                return Err(Error::OutsideRegion { index });
            }
            Ok(list.clone())
        }
    }
}

pub(crate) fn parse_rat(s: &str, line: usize) -> Result<Rat> {
    let r = Rat::from_str(s).map_err(|_| Error::parse(line, format!("bad rational `{s}`")))?;
    Ok(r)
}

pub(crate) fn parse_point(text: &str, line: usize) -> Result<Point> {
    let mut it = text.split_whitespace();
    let (Some(x), Some(y), None) = (it.next(), it.next(), it.next()) else {
        return Err(Error::parse(line, format!("expected `x y`, got `{text}`")));
    };
    Ok(Point::new(parse_rat(x, line)?, parse_rat(y, line)?))
}

pub(crate) fn fmt_point(p: &Point) -> String {
    format!("{} {}", p.x, p.y)
}

/// Non-comment, non-blank lines with 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

pub fn save_instance(inst: &ImprecisePolyline) -> String {
    save_instance_scaled(inst, None)
}

/// Serialise with all coordinates multiplied by `unit`. The factor is
/// recorded in the file, so loading undoes it. With `unit = 1/2` a
/// vertical-segment instance is written at unit segment length.
pub fn save_instance_scaled(inst: &ImprecisePolyline, unit: Option<&Rat>) -> String {
    let mut out = format!("shape {}\n", inst.shape.name());
    if let Some(u) = unit {
        let _ = writeln!(out, "unit {u}");
    }
    for r in &inst.regions {
        let c = match unit {
            Some(u) => r.center.scale(u),
            None => r.center.clone(),
        };
        let _ = writeln!(out, "{}", fmt_point(&c));
    }
    out
}

pub fn load_instance(text: &str) -> Result<ImprecisePolyline> {
    let mut lines = content_lines(text);
    let (ln, header) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "empty instance"))?;
    let shape = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["shape", s] => s
            .parse::<ShapeKind>()
            .map_err(|_| Error::parse(ln, format!("unknown shape `{s}`")))?,
        _ => {
            return Err(Error::parse(
                ln,
                "expected `shape <disk|square|diamond|vseg>`",
            ))
        }
    };
    let mut unit: Option<Rat> = None;
    let mut regions = Vec::new();
    for (ln, l) in lines {
        if let Some(rest) = l.strip_prefix("shape") {
            return Err(Error::InvalidInstance(format!(
                "line {ln}: second shape declaration `{}` (mixed shapes)",
                rest.trim()
            )));
        }
        if let Some(rest) = l.strip_prefix("unit ") {
            if !regions.is_empty() || unit.is_some() {
                return Err(Error::parse(ln, "`unit` must precede the regions"));
            }
            let u = parse_rat(rest.trim(), ln)?;
            if !u.is_positive() {
                return Err(Error::parse(ln, "unit must be positive"));
            }
            unit = Some(u);
            continue;
        }
        let mut c = parse_point(l, ln)?;
        if let Some(u) = &unit {
            c = Point::new(&c.x / u, &c.y / u);
        }
        regions.push(Region::new(c));
    }
    ImprecisePolyline::new(shape, regions)
}

pub fn save_realisation(r: &Realisation) -> String {
    let mut out = String::new();
    for p in &r.points {
        let _ = writeln!(out, "{}", fmt_point(p));
    }
    out
}

/// Parse a realisation; with `companion` its length is checked.
pub fn load_realisation(text: &str, companion: Option<&ImprecisePolyline>) -> Result<Realisation> {
    let points = content_lines(text)
        .map(|(ln, l)| parse_point(l, ln))
        .collect::<Result<Vec<_>>>()?;
    if let Some(inst) = companion {
        if inst.len() != points.len() {
            return Err(Error::LengthMismatch {
                expected: inst.len(),
                got: points.len(),
            });
        }
    }
    Ok(Realisation::new(points))
}

/// Custom candidate lists: one line per region, candidates separated by `;`.
pub fn load_candidates(text: &str, inst: &ImprecisePolyline) -> Result<Vec<Vec<Point>>> {
    let lists = content_lines(text)
        .map(|(ln, l)| {
            l.split(';')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| parse_point(t, ln))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if lists.len() != inst.len() {
        return Err(Error::LengthMismatch {
            expected: inst.len(),
            got: lists.len(),
        });
    }
    Ok(lists)
}
