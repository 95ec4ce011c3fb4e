//! Monotone 3CNF formulas, their rectilinear layouts and a brute force oracle.
//!
//! Formulas are read from DIMACS CNF. Layouts use a small line format:
//!
//! ```text
//! order 1 2 3
//! clause 1 side=top parent=none legs=1 2 3
//! ```
//!
//! Clause ids are 1-based positions in the formula. The legs name the left,
//! middle and right variable of the clause; their set must equal the clause's
//! variables (short clauses repeat a variable).

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub polarity: Polarity,
    /// 1-based variable indices, repeats allowed.
    pub vars: Vec<usize>,
}

impl Clause {
    pub fn satisfied(&self, a: &Assignment) -> bool {
        let want = self.polarity == Polarity::Positive;
        self.vars.iter().any(|&v| a.values[v - 1] == want)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub variable_count: usize,
    pub clauses: Vec<Clause>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    pub values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    pub fn value(&self, var: usize) -> bool {
        self.values[var - 1]
    }

    pub fn to_text(&self) -> String {
        let lits: Vec<String> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                if b {
                    format!("{}", i + 1)
                } else {
                    format!("-{}", i + 1)
                }
            })
            .collect();
        format!("v {} 0\n", lits.join(" "))
    }
}

impl Formula {
    pub fn evaluate(&self, a: &Assignment) -> bool {
        a.values.len() == self.variable_count && self.clauses.iter().all(|c| c.satisfied(a))
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.variable_count, self.clauses.len());
        for c in &self.clauses {
            let sign = if c.polarity == Polarity::Negative {
                "-"
            } else {
                ""
            };
            for v in &c.vars {
                let _ = write!(s, "{sign}{v} ");
            }
            s.push_str("0\n");
        }
        s
    }
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut pending: Vec<(i64, usize)> = Vec::new();
    let mut pending_line = 0;
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::parse(line_no, "duplicate header"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(Error::parse(line_no, "expected `p cnf <vars> <clauses>`"));
            }
            let m = parts[2]
                .parse()
                .map_err(|_| Error::parse(line_no, "bad variable count"))?;
            let k = parts[3]
                .parse()
                .map_err(|_| Error::parse(line_no, "bad clause count"))?;
            header = Some((m, k));
            continue;
        }
        let (m, _) = header.ok_or_else(|| Error::parse(line_no, "clause before header"))?;
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad literal `{tok}`")))?;
            if lit == 0 {
                clauses.push(make_clause(&pending, pending_line, m)?);
                pending.clear();
                continue;
            }
            if pending.is_empty() {
                pending_line = line_no;
            }
            pending.push((lit, line_no));
        }
    }
    let (m, k) = header.ok_or_else(|| Error::parse(0, "missing `p cnf` header"))?;
    if !pending.is_empty() {
        return Err(Error::parse(pending_line, "clause not terminated by 0"));
    }
    if clauses.len() != k {
        return Err(Error::InvalidFormula(format!(
            "header declares {k} clauses, found {}",
            clauses.len()
        )));
    }
    Ok(Formula {
        variable_count: m,
        clauses,
    })
}

fn make_clause(lits: &[(i64, usize)], line: usize, m: usize) -> Result<Clause> {
    if lits.is_empty() {
        return Err(Error::parse(line, "empty clause"));
    }
    if lits.len() > 3 {
        return Err(Error::parse(
            line,
            format!("clause has {} literals, at most 3 allowed", lits.len()),
        ));
    }
    let positive = lits[0].0 > 0;
    let mut vars = Vec::new();
    for &(lit, l) in lits {
        if (lit > 0) != positive {
            return Err(Error::parse(l, "mixed polarity clause"));
        }
        let v = lit.unsigned_abs() as usize;
        if v > m {
            return Err(Error::parse(
                l,
                format!("variable {v} out of range 1..={m}"),
            ));
        }
        vars.push(v);
    }
    Ok(Clause {
        polarity: if positive {
            Polarity::Positive
        } else {
            Polarity::Negative
        },
        vars,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Top,
    Bottom,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Top => "top",
            Side::Bottom => "bottom",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayoutClause {
    /// 1-based clause index in the formula.
    pub id: usize,
    pub side: Side,
    pub parent: Option<usize>,
    /// Left, middle and right leg variables.
    pub legs: [usize; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    /// Variables from left to right.
    pub order: Vec<usize>,
    pub clauses: Vec<LayoutClause>,
}

impl Layout {
    /// Position of each variable in the left-to-right order, indexed by
    /// variable (entry 0 unused).
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len() + 1];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    pub fn clause(&self, id: usize) -> Option<&LayoutClause> {
        self.clauses.iter().find(|c| c.id == id)
    }

    /// Children of `parent` on `side` (roots when `parent` is `None`),
    /// ordered left to right.
    pub fn children(&self, side: Side, parent: Option<usize>) -> Vec<&LayoutClause> {
        let pos = self.positions();
        let mut out: Vec<&LayoutClause> = self
            .clauses
            .iter()
            .filter(|c| c.side == side && c.parent == parent)
            .collect();
        out.sort_by_key(|c| (pos[c.legs[0]], pos[c.legs[2]], c.id));
        out
    }

    /// Which room of its parent a clause sits in: `false` for the room between
    /// the left and middle leg, `true` for the one between middle and right.
    pub fn in_right_room(&self, c: &LayoutClause) -> bool {
        let pos = self.positions();
        match c.parent.and_then(|p| self.clause(p)) {
            Some(p) => pos[c.legs[0]] >= pos[p.legs[1]] && pos[c.legs[2]] > pos[p.legs[1]],
            None => false,
        }
    }

    pub fn to_text(&self) -> String {
        let order: Vec<String> = self.order.iter().map(|v| v.to_string()).collect();
        let mut s = format!("order {}\n", order.join(" "));
        for c in &self.clauses {
            let parent = c.parent.map_or("none".to_string(), |p| p.to_string());
            let _ = writeln!(
                s,
                "clause {} side={} parent={} legs={} {} {}",
                c.id,
                c.side.name(),
                parent,
                c.legs[0],
                c.legs[1],
                c.legs[2]
            );
        }
        s
    }

    /// The layout used when none is given: variables in index order, every
    /// clause a root on its polarity's side with legs in that order. Valid
    /// only when the clauses' spans do not overlap.
    pub fn trivial(f: &Formula) -> Result<Layout> {
        let order: Vec<usize> = (1..=f.variable_count).collect();
        let clauses = f
            .clauses
            .iter()
            .enumerate()
            .map(|(i, c)| LayoutClause {
                id: i + 1,
                side: if c.polarity == Polarity::Positive {
                    Side::Top
                } else {
                    Side::Bottom
                },
                parent: None,
                legs: padded_legs(&c.vars),
            })
            .collect();
        let lay = Layout { order, clauses };
        validate_layout(&lay, f)?;
        Ok(lay)
    }
}

fn padded_legs(vars: &[usize]) -> [usize; 3] {
    let mut v = vars.to_vec();
    v.sort_unstable();
    match v.len() {
        1 => [v[0], v[0], v[0]],
        2 => [v[0], v[0], v[1]],
        _ => [v[0], v[1], v[2]],
    }
}

pub fn parse_layout(text: &str, f: &Formula) -> Result<Layout> {
    let mut order = None;
    let mut clauses = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("order") => {
                if order.is_some() {
                    return Err(Error::parse(line_no, "duplicate order line"));
                }
                let vs = toks
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| Error::parse(line_no, format!("bad variable `{t}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                order = Some(vs);
            }
            Some("clause") => clauses.push(parse_clause_line(line_no, toks.collect())?),
            Some(other) => {
                return Err(Error::parse(
                    line_no,
                    format!("unknown directive `{other}`"),
                ))
            }
            None => {}
        }
    }
    let order = order.ok_or_else(|| Error::parse(0, "missing order line"))?;
    let lay = Layout { order, clauses };
    validate_layout(&lay, f)?;
    Ok(lay)
}

fn parse_clause_line(line: usize, toks: Vec<&str>) -> Result<LayoutClause> {
    let id = toks
        .first()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::parse(line, "expected clause id"))?;
    let mut side = None;
    let mut parent = None;
    let mut parent_seen = false;
    let mut legs = Vec::new();
    let mut in_legs = false;
    for tok in &toks[1..] {
        if let Some(v) = tok.strip_prefix("side=") {
            in_legs = false;
            side = Some(match v {
                "top" => Side::Top,
                "bottom" => Side::Bottom,
                _ => return Err(Error::parse(line, format!("bad side `{v}`"))),
            });
        } else if let Some(v) = tok.strip_prefix("parent=") {
            in_legs = false;
            parent_seen = true;
            parent = match v {
                "none" => None,
                _ => Some(
                    v.parse()
                        .map_err(|_| Error::parse(line, format!("bad parent `{v}`")))?,
                ),
            };
        } else if let Some(v) = tok.strip_prefix("legs=") {
            in_legs = true;
            legs.extend(v.split(',').filter(|s| !s.is_empty()).map(str::to_string));
        } else if in_legs {
            legs.push(tok.to_string());
        } else {
            return Err(Error::parse(line, format!("unexpected `{tok}`")));
        }
    }
    let side = side.ok_or_else(|| Error::parse(line, "missing side="))?;
    if !parent_seen {
        return Err(Error::parse(line, "missing parent="));
    }
    if legs.len() != 3 {
        return Err(Error::parse(line, "legs= needs exactly three variables"));
    }
    let mut l = [0usize; 3];
    for (k, t) in legs.iter().enumerate() {
        l[k] = t
            .parse()
            .map_err(|_| Error::parse(line, format!("bad leg `{t}`")))?;
    }
    Ok(LayoutClause {
        id,
        side,
        parent,
        legs: l,
    })
}

pub fn validate_layout(lay: &Layout, f: &Formula) -> Result<()> {
    let m = f.variable_count;
    let bad = |msg: String| Err(Error::InvalidLayout(msg));
    let mut sorted = lay.order.clone();
    sorted.sort_unstable();
    if sorted != (1..=m).collect::<Vec<_>>() {
        return bad(format!("order must be a permutation of 1..={m}"));
    }
    let pos = lay.positions();
    let mut seen = BTreeSet::new();
    for c in &lay.clauses {
        if c.id == 0 || c.id > f.clauses.len() {
            return bad(format!("clause id {} out of range", c.id));
        }
        if !seen.insert(c.id) {
            return bad(format!("clause {} listed twice", c.id));
        }
        let fc = &f.clauses[c.id - 1];
        let want = if fc.polarity == Polarity::Positive {
            Side::Top
        } else {
            Side::Bottom
        };
        if c.side != want {
            return bad(format!(
                "clause {} is {} but declared on the {} side",
                c.id,
                if want == Side::Top {
                    "positive"
                } else {
                    "negative"
                },
                c.side.name()
            ));
        }
        if c.legs.iter().any(|&v| v == 0 || v > m) {
            return bad(format!("clause {} has a leg out of range", c.id));
        }
        let legs: BTreeSet<usize> = c.legs.iter().copied().collect();
        let vars: BTreeSet<usize> = fc.vars.iter().copied().collect();
        if legs != vars {
            return bad(format!("clause {} legs do not match its variables", c.id));
        }
        if !(pos[c.legs[0]] <= pos[c.legs[1]] && pos[c.legs[1]] <= pos[c.legs[2]]) {
            return bad(format!(
                "clause {} leg order inconsistent with variable order",
                c.id
            ));
        }
    }
    if seen.len() != f.clauses.len() {
        return bad("every clause needs a layout line".into());
    }
    for c in &lay.clauses {
        let Some(pid) = c.parent else { continue };
        let Some(p) = lay.clause(pid) else {
            return bad(format!("clause {} has unknown parent {pid}", c.id));
        };
        if p.side != c.side {
            return bad(format!(
                "clause {} and its parent lie on different sides",
                c.id
            ));
        }
        let (s, e) = (pos[c.legs[0]], pos[c.legs[2]]);
        let (ps, pm, pe) = (pos[p.legs[0]], pos[p.legs[1]], pos[p.legs[2]]);
        if !((ps <= s && e <= pm) || (pm <= s && e <= pe)) {
            return bad(format!(
                "clause {} does not fit inside a room of clause {pid}",
                c.id
            ));
        }
        // Ancestor cycles.
        let mut at = Some(pid);
        let mut steps = 0;
        while let Some(a) = at {
            if a == c.id || steps > lay.clauses.len() {
                return bad(format!("parent cycle through clause {}", c.id));
            }
            at = lay.clause(a).and_then(|x| x.parent);
            steps += 1;
        }
    }
    for side in [Side::Top, Side::Bottom] {
        let mut parents: Vec<Option<usize>> = vec![None];
        parents.extend(
            lay.clauses
                .iter()
                .filter(|c| c.side == side)
                .map(|c| Some(c.id)),
        );
        for p in parents {
            let kids = lay.children(side, p);
            for w in kids.windows(2) {
                if pos[w[0].legs[2]] > pos[w[1].legs[0]] {
                    return bad(format!("clauses {} and {} interleave", w[0].id, w[1].id));
                }
            }
            // Children of one parent in different rooms never touch; within a
            // room the window check above already applies.
        }
    }
    Ok(())
}

/// Largest formula the brute force oracle accepts.
pub const MAX_BRUTE_FORCE_VARS: usize = 24;

/// First satisfying assignment in the order that tries `true` before `false`
/// for each variable, with variable 1 the most significant.
pub fn brute_force_sat(f: &Formula) -> Result<Option<Assignment>> {
    let m = f.variable_count;
    if m > MAX_BRUTE_FORCE_VARS {
        return Err(Error::BudgetExceeded(1u64 << MAX_BRUTE_FORCE_VARS));
    }
    for k in 0..(1u64 << m) {
        // Bit i of k set means variable i+1 (counted from the most
        // significant end) is false.
        let values = (0..m).map(|i| (k >> (m - 1 - i)) & 1 == 0).collect();
        let a = Assignment::new(values);
        if f.evaluate(&a) {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

/// All satisfying assignments, in the same order as [`brute_force_sat`].
pub fn all_models(f: &Formula) -> Result<Vec<Assignment>> {
    let m = f.variable_count;
    if m > MAX_BRUTE_FORCE_VARS {
        return Err(Error::BudgetExceeded(1u64 << MAX_BRUTE_FORCE_VARS));
    }
    Ok((0..(1u64 << m))
        .map(|k| Assignment::new((0..m).map(|i| (k >> (m - 1 - i)) & 1 == 0).collect()))
        .filter(|a| f.evaluate(a))
        .collect())
}
