//! Realisation search over finite candidate sets, and certificate checks.
//!
//! The search assigns regions in polyline order, depth first, trying
//! candidates in their listed order. A prefix is cut as soon as it cannot be
//! part of a weakly simple polyline:
//!
//! * the new edge properly crosses an earlier edge, or
//! * the new edge touches earlier edges and the edges around that contact do
//!   not form a weakly simple family of chains (any sub-family of a weakly
//!   simple polyline is weakly simple).
//!
//! Every cut comes with the set of regions whose choices caused it, which
//! lets the search jump back over regions that had nothing to do with a
//! failure. Complete assignments are accepted only by the exact
//! weak-simplicity test on the whole polyline.

use std::ops::ControlFlow;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::geometry::{relation, Point2, SegmentRelation};
use crate::instance::{CandidateLevel, ImprecisePolyline, Realisation};
use crate::scalar::Scalar;
use crate::weak::{weakly_simple_chains, Polyline};
use crate::{Point, Rat};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SearchStats {
    /// Candidate placements tried.
    pub nodes: u64,
    /// Complete assignments accepted.
    pub witnesses: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Realisable(Realisation),
    NoneOverCandidates,
    BudgetExceeded(SearchStats),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub budget: u64,
    /// Cut failing prefixes. Without it every complete assignment is tested.
    pub prune: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            budget: DEFAULT_BUDGET,
            prune: true,
        }
    }
}

pub fn solve(
    inst: &ImprecisePolyline,
    level: &CandidateLevel,
    budget: u64,
) -> Result<SolveOutcome> {
    solve_with(
        inst,
        level,
        SolveOptions {
            budget,
            prune: true,
        },
    )
}

pub fn solve_with(
    inst: &ImprecisePolyline,
    level: &CandidateLevel,
    opts: SolveOptions,
) -> Result<SolveOutcome> {
    let cands = inst.candidates(level)?;
    let mut found = None;
    let res = search_candidates(&cands, opts, |pts| {
        found = Some(pts.to_vec());
        ControlFlow::Break(())
    });
    Ok(match (res, found) {
        (_, Some(pts)) => SolveOutcome::Realisable(Realisation::new(pts)),
        (Ok(_), None) => SolveOutcome::NoneOverCandidates,
        (Err(stats), None) => SolveOutcome::BudgetExceeded(stats),
    })
}

/// Enumerate weakly simple realisations over explicit candidate lists, in
/// depth-first order, until the visitor breaks. Returns the statistics, or
/// `Err` with the statistics when the node budget ran out.
pub fn search_candidates(
    cands: &[Vec<Point>],
    opts: SolveOptions,
    visit: impl FnMut(&[Point]) -> ControlFlow<()>,
) -> std::result::Result<SearchStats, SearchStats> {
    search_chains(cands, &[cands.len()], opts, visit)
}

/// Like [`search_candidates`], but the regions form several chains laid end
/// to end: `chain_lens` gives their lengths, and no edge joins the last region
/// of one chain to the first of the next. Accepted assignments are those whose
/// chains form a weakly simple family.
pub fn search_chains(
    cands: &[Vec<Point>],
    chain_lens: &[usize],
    opts: SolveOptions,
    mut visit: impl FnMut(&[Point]) -> ControlFlow<()>,
) -> std::result::Result<SearchStats, SearchStats> {
    assert_eq!(
        chain_lens.iter().sum::<usize>(),
        cands.len(),
        "chain lengths must cover the regions"
    );
    let mut live = vec![true; cands.len().saturating_sub(1)];
    let mut at = 0;
    for &len in chain_lens {
        at += len;
        if at > 0 && at < cands.len() {
            live[at - 1] = false;
        }
    }
    if let Some(scaled) = to_integer_grid(cands) {
        let mut map = |idx: &[usize]| {
            let pts: Vec<Point> = idx
                .iter()
                .enumerate()
                .map(|(i, &c)| cands[i][c].clone())
                .collect();
            visit(&pts)
        };
        run(&scaled, &live, opts, &mut map)
    } else {
        let mut map = |idx: &[usize]| {
            let pts: Vec<Point> = idx
                .iter()
                .enumerate()
                .map(|(i, &c)| cands[i][c].clone())
                .collect();
            visit(&pts)
        };
        run(cands, &live, opts, &mut map)
    }
}

/// Clear denominators so the search can run on machine integers. Only used
/// when all scaled coordinates stay below 2^52, which keeps every product the
/// predicates form well inside `i128`.
pub(crate) fn to_integer_grid(cands: &[Vec<Point>]) -> Option<Vec<Vec<Point2<i128>>>> {
    let mut lcm = num_bigint::BigInt::from(1);
    for p in cands.iter().flatten() {
        lcm = lcm.lcm(p.x.denom()).lcm(p.y.denom());
    }
    let limit = num_bigint::BigInt::from(1u64 << 52);
    let conv = |r: &Rat| -> Option<i128> {
        let v = r.numer() * (&lcm / r.denom());
        if v.abs() >= limit {
            None
        } else {
            v.to_i128()
        }
    };
    cands
        .iter()
        .map(|list| {
            list.iter()
                .map(|p| Some(Point2::new(conv(&p.x)?, conv(&p.y)?)))
                .collect::<Option<Vec<_>>>()
        })
        .collect()
}

#[derive(Clone, Debug)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(n: usize) -> Self {
        BitSet(vec![0; n / 64 + 1])
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn union_with(&mut self, o: &BitSet) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a |= b;
        }
    }
    fn fill_below(&mut self, n: usize) {
        for i in 0..n {
            self.insert(i);
        }
    }
}

enum Flow {
    Stop,
    Solved,
    Failed(BitSet),
}

struct Search<'a, T> {
    cands: &'a [Vec<Point2<T>>],
    /// `live[e]` is false where edge `e` (points `e`, `e + 1`) joins two chains.
    live: &'a [bool],
    opts: SolveOptions,
    stats: SearchStats,
    choice: Vec<usize>,
    pts: Vec<Point2<T>>,
    /// For edge `e` (points `e`, `e + 1`): earlier edges it touches, beyond
    /// the shared vertex with its predecessor.
    contacts: Vec<Vec<usize>>,
    /// Reverse of `contacts`.
    later: Vec<Vec<usize>>,
    out_of_budget: bool,
}

fn run<T: Scalar>(
    cands: &[Vec<Point2<T>>],
    live: &[bool],
    opts: SolveOptions,
    visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
) -> std::result::Result<SearchStats, SearchStats> {
    let n = cands.len();
    if n == 0 || cands.iter().any(|c| c.is_empty()) {
        return Ok(SearchStats::default());
    }
    let mut s = Search {
        cands,
        live,
        opts,
        stats: SearchStats::default(),
        choice: Vec::with_capacity(n),
        pts: Vec::with_capacity(n),
        contacts: Vec::with_capacity(n),
        later: vec![Vec::new(); n],
        out_of_budget: false,
    };
    s.dfs(0, visit);
    if s.out_of_budget {
        Err(s.stats)
    } else {
        Ok(s.stats)
    }
}

impl<T: Scalar> Search<'_, T> {
    fn n(&self) -> usize {
        self.cands.len()
    }

    fn dfs(&mut self, k: usize, visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>) -> Flow {
        let n = self.n();
        if k == n {
            if weakly_simple_chains(&self.chains()) {
                self.stats.witnesses += 1;
                return match visit(&self.choice) {
                    ControlFlow::Break(()) => Flow::Stop,
                    ControlFlow::Continue(()) => Flow::Solved,
                };
            }
            let mut all = BitSet::new(n);
            all.fill_below(n);
            return Flow::Failed(all);
        }
        let mut conflict = BitSet::new(n);
        let mut solved = false;
        for c in 0..self.cands[k].len() {
            if self.stats.nodes >= self.opts.budget {
                self.out_of_budget = true;
                return Flow::Stop;
            }
            self.stats.nodes += 1;
            self.choice.push(c);
            self.pts.push(self.cands[k][c].clone());
            let cut = if k > 0 { self.add_edge(k) } else { None };
            let res = match cut {
                Some(cs) => Flow::Failed(cs),
                None => self.dfs(k + 1, visit),
            };
            if k > 0 {
                self.pop_edge(k);
            }
            self.pts.pop();
            self.choice.pop();
            match res {
                Flow::Stop => return Flow::Stop,
                Flow::Solved => solved = true,
                Flow::Failed(cs) => {
                    if !cs.contains(k) && !solved {
                        // This region played no part: jump back.
                        return Flow::Failed(cs);
                    }
                    conflict.union_with(&cs);
                }
            }
        }
        if solved {
            return Flow::Solved;
        }
        conflict.remove(k);
        if !self.opts.prune {
            conflict.fill_below(k);
        }
        Flow::Failed(conflict)
    }

    /// Record the edge ending at point `k` and test the prefix. Returns the
    /// responsible regions when the prefix is hopeless.
    fn add_edge(&mut self, k: usize) -> Option<BitSet> {
        let e = k - 1;
        let mut touching = Vec::new();
        if self.opts.prune && self.live[e] {
            let (a, b) = (&self.pts[k - 1], &self.pts[k]);
            for j in (0..e).filter(|&j| self.live[j]) {
                let r = relation(&self.pts[j], &self.pts[j + 1], a, b);
                match r {
                    SegmentRelation::Disjoint => {}
                    SegmentRelation::ProperCross => {
                        self.contacts.push(Vec::new());
                        let mut cs = BitSet::new(self.n());
                        for i in self.cross_reason([j, j + 1, k - 1, k]) {
                            cs.insert(i);
                        }
                        return Some(cs);
                    }
                    SegmentRelation::Touch if j + 1 == e && self.live[j] => {}
                    _ => touching.push(j),
                }
            }
        }
        for &j in &touching {
            self.later[j].push(e);
        }
        self.contacts.push(touching);
        if self.contacts[e].is_empty() {
            return None;
        }
        self.local_certificate(e)
    }

    /// The endpoints of two properly crossing edges that the crossing depends
    /// on. An endpoint is left out when the edges cross for every candidate
    /// of its region, jointly with the endpoints already left out.
    fn cross_reason(&self, ends: [usize; 4]) -> Vec<usize> {
        let mut free: Vec<usize> = Vec::new();
        for &r in &ends {
            free.push(r);
            if !self.always_cross(&ends, &free) {
                free.pop();
            }
        }
        ends.into_iter().filter(|r| !free.contains(r)).collect()
    }

    fn always_cross(&self, ends: &[usize; 4], free: &[usize]) -> bool {
        let mut idx = vec![0usize; free.len()];
        loop {
            let at = |r: usize| match free.iter().position(|&f| f == r) {
                Some(i) => &self.cands[r][idx[i]],
                None => &self.pts[r],
            };
            if relation(at(ends[0]), at(ends[1]), at(ends[2]), at(ends[3]))
                != SegmentRelation::ProperCross
            {
                return false;
            }
            // Next combination.
            let mut i = 0;
            loop {
                if i == free.len() {
                    return true;
                }
                idx[i] += 1;
                if idx[i] < self.cands[free[i]].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    fn pop_edge(&mut self, k: usize) {
        let e = k - 1;
        if let Some(list) = self.contacts.pop() {
            debug_assert_eq!(self.contacts.len(), e);
            for j in list {
                let popped = self.later[j].pop();
                debug_assert_eq!(popped, Some(e));
            }
        }
    }

    /// Grow a ball around edge `e` in the contact graph until the edges in it
    /// fail weak simplicity (return their regions) or the whole contact
    /// component passes.
    fn local_certificate(&self, e: usize) -> Option<BitSet> {
        let mut seen = vec![false; e + 1];
        seen[e] = true;
        let mut ball = vec![e];
        let mut frontier = vec![e];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &f in &frontier {
                for &g in self.contacts[f].iter().chain(self.later[f].iter()) {
                    if !seen[g] {
                        seen[g] = true;
                        next.push(g);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            ball.extend_from_slice(&next);
            frontier = next;
            if !self.family_ok(&mut ball.clone()) {
                // Shrink to a minimal failing sub-family; the new edge stays.
                let mut core = ball.clone();
                let mut i = 0;
                while i < core.len() {
                    if core[i] == e {
                        i += 1;
                        continue;
                    }
                    let mut trial: Vec<usize> = core
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &g)| g)
                        .collect();
                    if !self.family_ok(&mut trial) {
                        core.remove(i);
                    } else {
                        i += 1;
                    }
                }
                let mut cs = BitSet::new(self.n());
                for &g in &core {
                    cs.insert(g);
                    cs.insert(g + 1);
                }
                return Some(cs);
            }
        }
        None
    }

    fn chains(&self) -> Vec<&[Point2<T>]> {
        let mut out = Vec::new();
        let mut start = 0;
        for (e, &l) in self.live.iter().enumerate() {
            if !l {
                out.push(&self.pts[start..=e]);
                start = e + 1;
            }
        }
        out.push(&self.pts[start..]);
        out
    }

    fn family_ok(&self, edges: &mut [usize]) -> bool {
        edges.sort_unstable();
        let mut runs: Vec<&[Point2<T>]> = Vec::new();
        let mut i = 0;
        while i < edges.len() {
            let start = edges[i];
            let mut end = start;
            while i + 1 < edges.len() && edges[i + 1] == end + 1 && self.live[end] {
                i += 1;
                end += 1;
            }
            runs.push(&self.pts[start..=end + 1]);
            i += 1;
        }
        weakly_simple_chains(&runs)
    }
}

/// Certificate check: every point in its region and the polyline weakly simple.
pub fn verify(inst: &ImprecisePolyline, r: &Realisation) -> Result<bool> {
    if r.points.len() != inst.len() {
        return Err(Error::LengthMismatch {
            expected: inst.len(),
            got: r.points.len(),
        });
    }
    if (0..inst.len()).any(|i| !inst.contains(i, &r.points[i])) {
        return Ok(false);
    }
    Ok(crate::weak::is_weakly_simple(&Polyline::new(
        r.points.clone(),
    )))
}
