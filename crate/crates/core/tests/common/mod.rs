#![allow(dead_code)]

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wspoly::sat::{
    brute_force_sat, parse_formula, parse_layout, validate_layout, Clause, Formula, Layout,
    LayoutClause, Polarity, Side,
};
use wspoly::{Point, Rat, SegmentRelation};

/// Random planar monotone formula with its layout: `m` variables in a
/// shuffled order, up to `max_clauses` clauses, parents chosen as the
/// tightest enclosing room on the same side.
pub fn random_laminar(seed: u64, m: usize, max_clauses: usize) -> (Formula, Layout) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut order: Vec<usize> = (1..=m).collect();
        order.shuffle(&mut rng);
        let k = rng.gen_range(1..=max_clauses);
        let mut clauses = Vec::new();
        let mut lay_clauses = Vec::new();
        for id in 1..=k {
            let mut pos = [0; 3].map(|_| rng.gen_range(0..m));
            pos.sort_unstable();
            let legs = pos.map(|i| order[i]);
            let side = if rng.gen_bool(0.5) {
                Side::Top
            } else {
                Side::Bottom
            };
            let mut vars = legs.to_vec();
            vars.shuffle(&mut rng);
            clauses.push(Clause {
                polarity: if side == Side::Top {
                    Polarity::Positive
                } else {
                    Polarity::Negative
                },
                vars,
            });
            lay_clauses.push(LayoutClause {
                id,
                side,
                parent: None,
                legs,
            });
        }
        let mut lay = Layout {
            order: order.clone(),
            clauses: lay_clauses,
        };
        let pos = lay.positions();
        let span = |c: &LayoutClause| (pos[c.legs[0]], pos[c.legs[1]], pos[c.legs[2]]);
        let parents: Vec<Option<usize>> = lay
            .clauses
            .iter()
            .map(|c| {
                let (s, _, e) = span(c);
                lay.clauses
                    .iter()
                    .filter(|p| p.id != c.id && p.side == c.side)
                    .filter(|p| {
                        let (ps, pm, pe) = span(p);
                        (ps <= s && e <= pm) || (pm <= s && e <= pe)
                    })
                    .min_by_key(|p| (pos[p.legs[2]] - pos[p.legs[0]], p.id))
                    .map(|p| p.id)
            })
            .collect();
        for (c, p) in lay.clauses.iter_mut().zip(parents) {
            c.parent = p;
        }
        let f = Formula {
            variable_count: m,
            clauses,
        };
        if validate_layout(&lay, &f).is_ok() {
            return (f, lay);
        }
    }
}

/// Segment relation from the parametric form: solve `a + s(b-a) = c + t(d-c)`
/// and classify by where the parameters fall.
pub fn parametric_relation(a: &Point, b: &Point, c: &Point, d: &Point) -> SegmentRelation {
    use SegmentRelation::*;
    let r = b - a;
    let q = d - c;
    let det = r.x.clone() * q.y.clone() - r.y.clone() * q.x.clone();
    let w = c - a;
    let unit = |v: &Rat| *v >= Rat::zero() && *v <= Rat::one();
    let open = |v: &Rat| *v > Rat::zero() && *v < Rat::one();
    if !det.is_zero() {
        let s = (w.x.clone() * q.y.clone() - w.y.clone() * q.x.clone()) / det.clone();
        let t = (w.x.clone() * r.y.clone() - w.y.clone() * r.x.clone()) / det;
        return match (unit(&s) && unit(&t), open(&s) && open(&t)) {
            (true, true) => ProperCross,
            (true, false) => Touch,
            _ => Disjoint,
        };
    }
    // Parameter of `p` along the non-degenerate segment `o + v`, if `p` lies
    // on its line.
    let along = |o: &Point, v: &Point, p: &Point| -> Option<Rat> {
        let e = p - o;
        let len2 = v.x.clone() * v.x.clone() + v.y.clone() * v.y.clone();
        let t = (e.x.clone() * v.x.clone() + e.y.clone() * v.y.clone()) / len2;
        (o.x.clone() + v.x.clone() * t.clone() == p.x
            && o.y.clone() + v.y.clone() * t.clone() == p.y)
            .then_some(t)
    };
    match (a == b, c == d) {
        (true, true) => {
            if a == c {
                Touch
            } else {
                Disjoint
            }
        }
        (true, false) => {
            if along(c, &q, a).is_some_and(|t| unit(&t)) {
                Touch
            } else {
                Disjoint
            }
        }
        (false, true) => {
            if along(a, &r, c).is_some_and(|t| unit(&t)) {
                Touch
            } else {
                Disjoint
            }
        }
        (false, false) => {
            let (Some(tc), Some(td)) = (along(a, &r, c), along(a, &r, d)) else {
                return Disjoint;
            };
            let lo = tc.clone().min(td.clone()).max(Rat::zero());
            let hi = tc.max(td).min(Rat::one());
            if lo < hi {
                Overlap
            } else if lo == hi {
                Touch
            } else {
                Disjoint
            }
        }
    }
}

pub fn formula(text: &str) -> Formula {
    parse_formula(text).expect("fixture formula")
}

/// One positive clause over three variables.
pub fn fig_example() -> (Formula, Layout) {
    let f = formula("p cnf 3 1\n1 2 3 0\n");
    let lay = Layout::trivial(&f).unwrap();
    (f, lay)
}

/// `(x or x or x) and (not x or not x or not x)`.
pub fn repeated_unsat() -> (Formula, Layout) {
    let f = formula("p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n");
    let lay = Layout::trivial(&f).unwrap();
    (f, lay)
}

/// Nested clauses on both sides.
pub fn nested_example() -> (Formula, Layout) {
    let f = formula("p cnf 4 3\n1 2 4 0\n2 3 3 0\n-1 -3 -4 0\n");
    let lay = parse_layout(
        "order 1 2 3 4\nclause 1 side=top parent=none legs=1 2 4\nclause 2 side=top parent=1 legs=2 3 3\nclause 3 side=bottom parent=none legs=1 3 4\n",
        &f,
    )
    .unwrap();
    (f, lay)
}

/// The end-to-end corpus: the fixed examples plus random laminar formulas
/// with at most five variables and three clauses, picked to include nested
/// and unsatisfiable cases.
pub fn corpus() -> Vec<(String, Formula, Layout)> {
    let mut out = Vec::new();
    for (name, (f, lay)) in [
        ("fig-example", fig_example()),
        ("repeated-unsat", repeated_unsat()),
        ("nested", nested_example()),
    ] {
        out.push((name.to_string(), f, lay));
    }
    let (mut nested, mut unsat, mut plain) = (0, 0, 0);
    let mut seed = 0u64;
    while nested + unsat + plain < 12 {
        let (f, lay) = random_laminar(seed, 1 + seed as usize % 5, 3);
        let is_nested = lay.clauses.iter().any(|c| c.parent.is_some());
        let is_unsat = brute_force_sat(&f).unwrap().is_none();
        let slot = if is_nested && nested < 4 {
            Some(&mut nested)
        } else if is_unsat && unsat < 2 {
            Some(&mut unsat)
        } else if !is_nested && !is_unsat && plain < 6 {
            Some(&mut plain)
        } else {
            None
        };
        if let Some(n) = slot {
            *n += 1;
            out.push((format!("random-{seed}"), f, lay));
        }
        seed += 1;
    }
    out
}
