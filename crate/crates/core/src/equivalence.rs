//! End-to-end check of the reduction: the SAT oracle against the solver on
//! the compiled instance.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::instance::{save_realisation, CandidateLevel, Realisation, ShapeKind};
use crate::reduction::{assignment_to_realisation_with, compile, CompiledInstance};
use crate::sat::{brute_force_sat, Assignment, Formula, Layout};
use crate::solver::{solve, verify, SolveOptions, SolveOutcome};

/// Verdict of the solver, stripped of its witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveVerdict {
    Realisable,
    NoneOverCandidates,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub shape: ShapeKind,
    pub regions: usize,
    /// Satisfying assignment found by the brute force oracle.
    pub sat: Option<Assignment>,
    pub solve: SolveVerdict,
    /// Witness found by the solver.
    pub solve_witness: Option<Realisation>,
    /// Realisation built from `sat`, with its verification result.
    pub sat_witness: Option<(Realisation, bool)>,
    /// `None` when the solver ran out of budget.
    pub agree: Option<bool>,
}

impl EquivalenceReport {
    pub fn verdict(&self) -> &'static str {
        match self.agree {
            Some(true) => "AGREE",
            Some(false) => "DISAGREE",
            None => "INCONCLUSIVE",
        }
    }

    /// Agreement, and every witness on the SAT side verified.
    pub fn passed(&self) -> bool {
        self.agree == Some(true) && self.sat_witness.as_ref().map_or(true, |(_, ok)| *ok)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "shape {}", self.shape.name());
        let _ = writeln!(s, "regions {}", self.regions);
        match &self.sat {
            Some(a) => {
                let _ = writeln!(s, "sat yes {}", a.to_text().trim());
            }
            None => s.push_str("sat no\n"),
        }
        let solve = match self.solve {
            SolveVerdict::Realisable => "REALISABLE",
            SolveVerdict::NoneOverCandidates => "NONE_OVER_CANDIDATES",
            SolveVerdict::BudgetExceeded => "BUDGET_EXCEEDED",
        };
        let _ = writeln!(s, "solve {solve}");
        if let Some((_, ok)) = &self.sat_witness {
            let _ = writeln!(
                s,
                "sat_witness {}",
                if *ok { "VERIFIED" } else { "INVALID" }
            );
        }
        let _ = writeln!(s, "{}", self.verdict());
        if let Some(r) = &self.solve_witness {
            s.push_str("# solve witness\n");
            s.push_str(&save_realisation(r));
        }
        if let Some((r, _)) = &self.sat_witness {
            s.push_str("# assignment witness\n");
            s.push_str(&save_realisation(r));
        }
        s
    }
}

pub fn equivalence_check(
    f: &Formula,
    lay: &Layout,
    shape: ShapeKind,
    level: &CandidateLevel,
    budget: u64,
) -> Result<EquivalenceReport> {
    let c = compile(f, lay, shape)?;
    equivalence_on(&c, level, budget)
}

/// Same as [`equivalence_check`] on an already compiled instance.
pub fn equivalence_on(
    c: &CompiledInstance,
    level: &CandidateLevel,
    budget: u64,
) -> Result<EquivalenceReport> {
    let sat = brute_force_sat(&c.formula)?;
    let (solve_v, solve_witness) = match solve(&c.instance, level, budget)? {
        SolveOutcome::Realisable(r) => (SolveVerdict::Realisable, Some(r)),
        SolveOutcome::NoneOverCandidates => (SolveVerdict::NoneOverCandidates, None),
        SolveOutcome::BudgetExceeded(_) => (SolveVerdict::BudgetExceeded, None),
    };
    let sat_witness = match &sat {
        Some(a) => {
            let opts = SolveOptions {
                budget,
                prune: true,
            };
            match assignment_to_realisation_with(c, a, opts) {
                Ok(r) => {
                    let ok = verify(&c.instance, &r)?;
                    Some((r, ok))
                }
                Err(Error::Unsatisfied) => return Err(Error::Unsatisfied),
                Err(_) => Some((Realisation::new(Vec::new()), false)),
            }
        }
        None => None,
    };
    let agree = match solve_v {
        SolveVerdict::BudgetExceeded => None,
        v => Some(sat.is_some() == (v == SolveVerdict::Realisable)),
    };
    Ok(EquivalenceReport {
        shape: c.instance.shape,
        regions: c.instance.len(),
        sat,
        solve: solve_v,
        solve_witness,
        sat_witness,
        agree,
    })
}
