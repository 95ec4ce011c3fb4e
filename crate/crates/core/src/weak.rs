//! Simplicity and weak simplicity of polylines.
//!
//! Weak simplicity is decided combinatorially. Once proper crossings are
//! ruled out, every point where two edges meet is a vertex of one of them, so
//! the image of the polyline is a plane graph on the input vertices. Each
//! polyline edge splits into *pieces* along the image edges it covers, and
//! pieces on the same image edge form a *bundle*. A simple perturbation
//! exists iff every bundle admits a side-by-side order of its pieces such
//! that, around every image vertex, the connections made by the chain (two
//! consecutive pieces meeting at that vertex) form a non-crossing chord
//! diagram. Chain endpoints impose nothing.

use std::collections::HashMap;

use crate::geometry::{on_segment, orientation, relation, Point2, Segment2, SegmentRelation};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polyline<T> {
    pub vertices: Vec<Point2<T>>,
}

impl<T: Scalar> Polyline<T> {
    pub fn new(vertices: Vec<Point2<T>>) -> Self {
        Polyline { vertices }
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn edge(&self, i: usize) -> Segment2<T> {
        Segment2::new(self.vertices[i].clone(), self.vertices[i + 1].clone())
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        Polyline::new(v)
    }
}

/// Position of a vertex relative to the supporting line of a directed edge.
/// `Above` is the left side of the edge direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Above,
    On,
    Below,
    /// The edge has zero length and no supporting line.
    Degenerate,
}

/// Classification of every vertex against every edge's supporting line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderType {
    /// `entries[v][e]`
    pub entries: Vec<Vec<Side>>,
}

impl OrderType {
    pub fn get(&self, vertex: usize, edge: usize) -> Side {
        self.entries[vertex][edge]
    }
}

pub fn order_type<T: Scalar>(p: &Polyline<T>) -> OrderType {
    let n = p.edge_count();
    let entries = p
        .vertices
        .iter()
        .map(|v| {
            (0..n)
                .map(|e| {
                    let a = &p.vertices[e];
                    let b = &p.vertices[e + 1];
                    if a == b {
                        return Side::Degenerate;
                    }
                    match orientation(a, b, v) {
                        1 => Side::Above,
                        -1 => Side::Below,
                        _ => Side::On,
                    }
                })
                .collect()
        })
        .collect();
    OrderType { entries }
}

/// No self-intersection at all apart from consecutive edges sharing their vertex.
pub fn is_simple<T: Scalar>(p: &Polyline<T>) -> bool {
    simple_vertices(&p.vertices)
}

pub(crate) fn simple_vertices<T: Scalar>(v: &[Point2<T>]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let n = v.len() - 1;
    for i in 0..n {
        if v[i] == v[i + 1] {
            return false;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let r = relation(&v[i], &v[i + 1], &v[j], &v[j + 1]);
            let ok = if j == i + 1 {
                r == SegmentRelation::Touch
            } else {
                r == SegmentRelation::Disjoint
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Whether the last edge of `v` keeps the chain simple, given that the rest is.
pub(crate) fn simple_extension<T: Scalar>(v: &[Point2<T>]) -> bool {
    let n = v.len() - 1;
    let (a, b) = (&v[n - 1], &v[n]);
    if a == b {
        return false;
    }
    for j in 0..n - 1 {
        let r = relation(&v[j], &v[j + 1], a, b);
        let ok = if j + 1 == n - 1 {
            r == SegmentRelation::Touch
        } else {
            r == SegmentRelation::Disjoint
        };
        if !ok {
            return false;
        }
    }
    true
}

pub fn is_weakly_simple<T: Scalar>(p: &Polyline<T>) -> bool {
    weakly_simple_chains(&[p.vertices.as_slice()])
}

/// Weak simplicity of a family of open chains, perturbed simultaneously.
pub fn weakly_simple_chains<T: Scalar>(chains: &[&[Point2<T>]]) -> bool {
    let chains: Vec<Vec<Point2<T>>> = chains
        .iter()
        .map(|c| {
            let mut out: Vec<Point2<T>> = Vec::with_capacity(c.len());
            for p in c.iter() {
                if out.last() != Some(p) {
                    out.push(p.clone());
                }
            }
            out
        })
        .filter(|c| c.len() >= 2)
        .collect();
    if chains.is_empty() {
        return true;
    }
    match Image::build(&chains) {
        Some(image) => image.realizable(),
        None => false,
    }
}

struct BBox<T> {
    lo: Point2<T>,
    hi: Point2<T>,
}

impl<T: Scalar> BBox<T> {
    fn of(a: &Point2<T>, b: &Point2<T>) -> Self {
        let (x0, x1) = if a.x <= b.x {
            (&a.x, &b.x)
        } else {
            (&b.x, &a.x)
        };
        let (y0, y1) = if a.y <= b.y {
            (&a.y, &b.y)
        } else {
            (&b.y, &a.y)
        };
        BBox {
            lo: Point2::new(x0.clone(), y0.clone()),
            hi: Point2::new(x1.clone(), y1.clone()),
        }
    }

    fn meets(&self, o: &Self) -> bool {
        self.lo.x <= o.hi.x && o.lo.x <= self.hi.x && self.lo.y <= o.hi.y && o.lo.y <= self.hi.y
    }

    fn contains(&self, p: &Point2<T>) -> bool {
        self.lo.x <= p.x && p.x <= self.hi.x && self.lo.y <= p.y && p.y <= self.hi.y
    }
}

#[allow(dead_code)]
struct Piece {
    from: usize,
    to: usize,
    bundle: usize,
}

struct Bundle {
    lo: usize,
    hi: usize,
    pieces: Vec<usize>,
}

/// A non-crossing requirement between two chords at one vertex.
struct ChordPair {
    vertex: usize,
    a: (usize, usize),
    b: (usize, usize),
}

struct Image {
    pieces: Vec<Piece>,
    bundles: Vec<Bundle>,
    /// Per vertex: bundle id -> offset of its slots in the ccw slot sequence.
    offsets: Vec<HashMap<usize, usize>>,
    pairs: Vec<ChordPair>,
}

impl Image {
    fn build<T: Scalar>(chains: &[Vec<Point2<T>>]) -> Option<Image> {
        let mut edges = Vec::new();
        for c in chains {
            for w in c.windows(2) {
                edges.push((&w[0], &w[1], BBox::of(&w[0], &w[1])));
            }
        }
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                if edges[i].2.meets(&edges[j].2)
                    && relation(edges[i].0, edges[i].1, edges[j].0, edges[j].1)
                        == SegmentRelation::ProperCross
                {
                    return None;
                }
            }
        }

        let mut verts: Vec<&Point2<T>> = chains.iter().flatten().collect();
        verts.sort_by(|a, b| a.partial_cmp(b).expect("unordered scalar"));
        verts.dedup();
        let id_of = |p: &Point2<T>| {
            verts
                .binary_search_by(|q| (*q).partial_cmp(p).expect("unordered scalar"))
                .expect("vertex present")
        };

        let mut pieces = Vec::new();
        let mut bundles: Vec<Bundle> = Vec::new();
        let mut bundle_of: HashMap<(usize, usize), usize> = HashMap::new();
        let mut chords: Vec<Vec<(usize, usize)>> = vec![Vec::new(); verts.len()];
        for c in chains {
            let mut prev: Option<usize> = None;
            for w in c.windows(2) {
                let (a, b) = (&w[0], &w[1]);
                let bb = BBox::of(a, b);
                let dir = b - a;
                let mut on: Vec<(T, usize)> = verts
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| bb.contains(v) && on_segment(v, a, b))
                    .map(|(i, v)| ((*v - a).dot(&dir), i))
                    .collect();
                on.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("unordered scalar"));
                debug_assert_eq!(on.first().map(|x| x.1), Some(id_of(a)));
                for k in 0..on.len() - 1 {
                    let (from, to) = (on[k].1, on[k + 1].1);
                    let key = (from.min(to), from.max(to));
                    let bundle = *bundle_of.entry(key).or_insert_with(|| {
                        bundles.push(Bundle {
                            lo: key.0,
                            hi: key.1,
                            pieces: Vec::new(),
                        });
                        bundles.len() - 1
                    });
                    let id = pieces.len();
                    bundles[bundle].pieces.push(id);
                    pieces.push(Piece { from, to, bundle });
                    if let Some(p) = prev {
                        chords[from].push((p, id));
                    }
                    prev = Some(id);
                }
            }
        }

        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); verts.len()];
        for (i, b) in bundles.iter().enumerate() {
            incident[b.lo].push(i);
            incident[b.hi].push(i);
        }
        let mut offsets = Vec::with_capacity(verts.len());
        for (v, inc) in incident.iter_mut().enumerate() {
            let dir = |b: usize| {
                let other = if bundles[b].lo == v {
                    bundles[b].hi
                } else {
                    bundles[b].lo
                };
                verts[other] - verts[v]
            };
            inc.sort_by(|&x, &y| crate::geometry::compare_angle(&dir(x), &dir(y)));
            let mut map = HashMap::new();
            let mut acc = 0;
            for &b in inc.iter() {
                map.insert(b, acc);
                acc += bundles[b].pieces.len();
            }
            offsets.push(map);
        }

        let mut pairs = Vec::new();
        for (v, cs) in chords.iter().enumerate() {
            for i in 0..cs.len() {
                for j in i + 1..cs.len() {
                    pairs.push(ChordPair {
                        vertex: v,
                        a: cs[i],
                        b: cs[j],
                    });
                }
            }
        }
        Some(Image {
            pieces,
            bundles,
            offsets,
            pairs,
        })
    }

    fn slot(&self, v: usize, piece: usize, rank: &[usize]) -> usize {
        let p = &self.pieces[piece];
        let b = &self.bundles[p.bundle];
        let k = b.pieces.len();
        let r = rank[piece];
        let within = if v == b.lo { k - 1 - r } else { r };
        self.offsets[v][&p.bundle] + within
    }

    fn pair_ok(&self, pair: &ChordPair, rank: &[usize]) -> bool {
        let v = pair.vertex;
        let mut a = (self.slot(v, pair.a.0, rank), self.slot(v, pair.a.1, rank));
        let mut b = (self.slot(v, pair.b.0, rank), self.slot(v, pair.b.1, rank));
        if a.0 > a.1 {
            a = (a.1, a.0);
        }
        if b.0 > b.1 {
            b = (b.1, b.0);
        }
        let inside = |x: usize| a.0 < x && x < a.1;
        inside(b.0) == inside(b.1)
    }

    fn realizable(&self) -> bool {
        let mut rank = vec![0usize; self.pieces.len()];
        for b in &self.bundles {
            for (i, &p) in b.pieces.iter().enumerate() {
                rank[p] = i;
            }
        }
        // Search order: free bundles in order of first appearance in a
        // constraint, so related bundles are assigned together.
        let mut position = vec![usize::MAX; self.bundles.len()];
        let mut order = Vec::new();
        let piece_bundles = |pair: &ChordPair| {
            [pair.a.0, pair.a.1, pair.b.0, pair.b.1].map(|p| self.pieces[p].bundle)
        };
        for pair in &self.pairs {
            for b in piece_bundles(pair) {
                if self.bundles[b].pieces.len() > 1 && position[b] == usize::MAX {
                    position[b] = order.len();
                    order.push(b);
                }
            }
        }
        let mut checks: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
        for (i, pair) in self.pairs.iter().enumerate() {
            let last = piece_bundles(pair)
                .iter()
                .filter(|&&b| position[b] != usize::MAX)
                .map(|&b| position[b])
                .max();
            match last {
                Some(l) => checks[l].push(i),
                None => {
                    if !self.pair_ok(pair, &rank) {
                        return false;
                    }
                }
            }
        }
        self.search(0, &order, &checks, &mut rank)
    }

    fn search(
        &self,
        depth: usize,
        order: &[usize],
        checks: &[Vec<usize>],
        rank: &mut [usize],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let b = &self.bundles[order[depth]];
        let k = b.pieces.len();
        let mut perm: Vec<usize> = (0..k).collect();
        loop {
            for (i, &p) in b.pieces.iter().enumerate() {
                rank[p] = perm[i];
            }
            if checks[depth]
                .iter()
                .all(|&c| self.pair_ok(&self.pairs[c], rank))
                && self.search(depth + 1, order, checks, rank)
            {
                return true;
            }
            if !next_permutation(&mut perm) {
                return false;
            }
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Offsets on a `(2 grid + 1)^2` lattice spanning the square of half-width
/// `radius`, restricted to the closed disk of that radius. Fixed order.
pub fn grid_offsets<T: Scalar>(radius: &T, grid: u32) -> Vec<Point2<T>>
where
    T: std::ops::Div<Output = T>,
{
    let g = grid as i64;
    let step = radius.clone() / T::from_int(g);
    let mut out = Vec::new();
    for i in -g..=g {
        for j in -g..=g {
            if i * i + j * j <= g * g {
                out.push(Point2::new(
                    step.clone() * T::from_int(i),
                    step.clone() * T::from_int(j),
                ));
            }
        }
    }
    out
}

/// Depth-first search for a simple polyline obtained by adding one of
/// `offsets` to each vertex. Prefixes that are already non-simple are cut.
pub fn perturb_with_offsets<T: Scalar>(
    p: &Polyline<T>,
    offsets: &[Point2<T>],
) -> Option<Polyline<T>> {
    fn go<T: Scalar>(src: &[Point2<T>], offsets: &[Point2<T>], cur: &mut Vec<Point2<T>>) -> bool {
        let i = cur.len();
        if i == src.len() {
            return true;
        }
        for o in offsets {
            cur.push(&src[i] + o);
            if (i == 0 || simple_extension(cur)) && go(src, offsets, cur) {
                return true;
            }
            cur.pop();
        }
        false
    }
    if p.vertices.len() < 2 {
        return None;
    }
    let mut cur = Vec::with_capacity(p.vertices.len());
    go(&p.vertices, offsets, &mut cur).then(|| Polyline::new(cur))
}

/// Exhaustive search for a simple perturbation with vertex offsets on a
/// rational grid of the given radius.
pub fn perturbation_oracle(
    p: &crate::Polyline,
    radius: &crate::Rat,
    grid: u32,
) -> Option<crate::Polyline> {
    assert!(grid >= 1, "grid resolution must be positive");
    let offsets = grid_offsets(radius, grid);
    // Same search on a common integer scale when that is exact.
    let lists = [p.vertices.clone(), offsets.clone()];
    let Some(scaled) = crate::solver::to_integer_grid(&lists) else {
        return perturb_with_offsets(p, &offsets);
    };
    let w = perturb_with_offsets(&Polyline::new(scaled[0].clone()), &scaled[1])?;
    let pts = w
        .vertices
        .iter()
        .zip(&scaled[0])
        .zip(&p.vertices)
        .map(|((q, v), orig)| {
            let k = scaled[1]
                .iter()
                .position(|o| &(v + o) == q)
                .expect("witness offset comes from the list");
            orig + &offsets[k]
        })
        .collect();
    Some(Polyline::new(pts))
}
