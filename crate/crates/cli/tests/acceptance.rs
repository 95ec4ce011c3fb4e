//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness; exits nonzero if any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use wspoly::equivalence::equivalence_check;
use wspoly::gadgets::{build_gadget, check_gadget_lemma, GadgetKind, GadgetParams, WireSide};
use wspoly::geometry::segment_relation;
use wspoly::instance::{CandidateLevel, ImprecisePolyline, Region, ShapeKind};
use wspoly::reduction::{compile, map_realisation, to_square_or_diamond, Norm};
use wspoly::solver::{solve_with, verify, SolveOptions, SolveOutcome, DEFAULT_BUDGET};
use wspoly::weak::{is_weakly_simple, perturbation_oracle};
use wspoly::{pt, rat, Point, Polyline, Segment};

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn within(limit: Duration, took: Duration, o: Outcome) -> Outcome {
    if o.ok && took > limit {
        fail(format!(
            "{} but took {:.1?} (limit {:?})",
            o.detail, took, limit
        ))
    } else {
        o
    }
}

fn grid(lo: i64, hi: i64) -> Vec<Point> {
    (lo..=hi)
        .flat_map(|x| (lo..=hi).map(move |y| pt(x, y)))
        .collect()
}

fn segment_oracle() -> Outcome {
    let pts = grid(-2, 2);
    let segs: Vec<(Point, Point)> = pts
        .iter()
        .flat_map(|a| pts.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    let bad: Vec<String> = segs
        .par_iter()
        .flat_map_iter(|(a, b)| {
            let s = Segment::new(a.clone(), b.clone());
            segs.iter().filter_map(move |(c, d)| {
                let got = segment_relation(&s, &Segment::new(c.clone(), d.clone()));
                let want = common::parametric_relation(a, b, c, d);
                (got != want).then(|| format!("{a:?}-{b:?} vs {c:?}-{d:?}: {got:?} != {want:?}"))
            })
        })
        .collect();
    let n = segs.len() * segs.len();
    match bad.first() {
        None => pass(format!("{n} ordered pairs agree")),
        Some(e) => fail(format!("{} of {n} disagree, first {e}", bad.len())),
    }
}

fn weak_oracle() -> Outcome {
    let pts = grid(0, 2);
    let radius = rat(1, 4);
    let mut polys = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for len in 1..=5 {
        layer = layer
            .iter()
            .flat_map(|p| (0..9).map(move |i| [p.as_slice(), &[i]].concat()))
            .collect();
        if len >= 2 {
            polys.extend(layer.iter().cloned());
        }
    }
    let bad: Vec<String> = polys
        .par_iter()
        .filter_map(|ix| {
            let p = Polyline::new(ix.iter().map(|&i| pts[i].clone()).collect());
            let got = is_weakly_simple(&p);
            let want = perturbation_oracle(&p, &radius, 2).is_some();
            (got != want).then(|| format!("{ix:?}: decided {got}, oracle {want}"))
        })
        .collect();
    match bad.first() {
        None => pass(format!("{} polylines agree", polys.len())),
        Some(e) => fail(format!(
            "{} of {} disagree, first {e}",
            bad.len(),
            polys.len()
        )),
    }
}

fn lemma(
    kinds: &[GadgetKind],
    level: CandidateLevel,
    check: impl Fn(&wspoly::gadgets::LemmaReport) -> Result<(), String>,
) -> Outcome {
    let mut notes = Vec::new();
    for &k in kinds {
        let rep = match check_gadget_lemma(k, &GadgetParams::standard(k), &level, DEFAULT_BUDGET) {
            Ok(r) => r,
            Err(e) => return fail(format!("{}: {e}", k.name())),
        };
        if !rep.complete {
            return fail(format!(
                "{}: budget exhausted after {} nodes",
                k.name(),
                rep.nodes
            ));
        }
        if !rep.holds {
            return fail(format!("{}: lemma does not hold {:?}", k.name(), rep.facts));
        }
        if let Err(e) = check(&rep) {
            return fail(format!("{}: {e}", k.name()));
        }
        notes.push(format!("{} ({} nodes)", k.name(), rep.nodes));
    }
    pass(notes.join(", "))
}

fn fact(rep: &wspoly::gadgets::LemmaReport, name: &str) -> Result<u64, String> {
    rep.fact_value(name)
        .ok_or_else(|| format!("missing fact {name}"))
}

fn expect(
    rep: &wspoly::gadgets::LemmaReport,
    name: &str,
    ok: impl Fn(u64) -> bool,
) -> Result<(), String> {
    let v = fact(rep, name)?;
    if ok(v) {
        Ok(())
    } else {
        Err(format!("{name} = {v}"))
    }
}

fn pivot_lemma() -> Outcome {
    lemma(
        &[GadgetKind::PivotDisk, GadgetKind::PivotVSeg],
        CandidateLevel::Extremes,
        |r| {
            expect(r, "missing_center", |v| v == 0)?;
            expect(r, "through_center", |v| v > 0)
        },
    )
}

fn variable_lemma() -> Outcome {
    lemma(
        &[GadgetKind::Variable],
        CandidateLevel::ExtremesAndCenter,
        |r| {
            expect(r, "classes", |v| v == 2)?;
            expect(r, "unclassified", |v| v == 0)
        },
    )
}

fn clause_lemma() -> Outcome {
    lemma(
        &[GadgetKind::ClauseDisk, GadgetKind::ClauseVSeg],
        CandidateLevel::Extremes,
        |r| {
            expect(r, "all_three_uncovered", |v| v == 0)?;
            for pair in ["pair_x1+x2", "pair_x1+x3", "pair_x2+x3"] {
                expect(r, pair, |v| v > 0)?;
            }
            Ok(())
        },
    )
}

fn wire_lemma() -> Outcome {
    let sides = [WireSide::Left, WireSide::Middle, WireSide::Right];
    let kinds: Vec<GadgetKind> = sides
        .iter()
        .flat_map(|&s| [GadgetKind::WireDisk(s), GadgetKind::WireVSeg(s)])
        .collect();
    lemma(&kinds, CandidateLevel::Extremes, |r| {
        expect(r, "false_state_literal_false", |v| v > 0)?;
        expect(r, "false_state_literal_true", |v| v == 0)?;
        expect(r, "false_state_literal_elsewhere", |v| v == 0)?;
        expect(r, "true_state_literal_false", |v| v > 0)?;
        expect(r, "true_state_literal_true", |v| v > 0)
    })
}

/// Witnesses of criterion 7, kept for criterion 8: the compiled instance and
/// every realisation that verified against it.
type Witnesses = Vec<(
    String,
    wspoly::reduction::CompiledInstance,
    Vec<wspoly::instance::Realisation>,
)>;

fn end_to_end(keep: &mut Witnesses) -> Outcome {
    let corpus = common::corpus();
    for (name, f, lay) in &corpus {
        for shape in [ShapeKind::UnitDisk, ShapeKind::VSegment] {
            let rep =
                match equivalence_check(f, lay, shape, &CandidateLevel::Extremes, DEFAULT_BUDGET) {
                    Ok(r) => r,
                    Err(e) => return fail(format!("{name}/{}: {e}", shape.name())),
                };
            if !rep.passed() {
                return fail(format!("{name}/{}: {}", shape.name(), rep.verdict()));
            }
            let c = compile(f, lay, shape).expect("compiled above");
            let mut ws = Vec::new();
            if let Some(r) = rep.solve_witness {
                ws.push(r);
            }
            if let Some((r, _)) = rep.sat_witness {
                ws.push(r);
            }
            for r in &ws {
                if !verify(&c.instance, r).unwrap_or(false) {
                    return fail(format!("{name}/{}: witness does not verify", shape.name()));
                }
            }
            keep.push((format!("{name}/{}", shape.name()), c, ws));
        }
    }
    let sat = corpus
        .iter()
        .filter(|(_, f, _)| wspoly::sat::brute_force_sat(f).unwrap().is_some())
        .count();
    pass(format!(
        "{} formulas ({} satisfiable), both shapes AGREE",
        corpus.len(),
        sat
    ))
}

fn monotonicity(keep: &Witnesses) -> Outcome {
    let mut checked = 0;
    for (name, c, ws) in keep {
        for norm in [Norm::L1, Norm::Linf] {
            let d = match to_square_or_diamond(c, norm) {
                Ok(d) => d,
                Err(e) => return fail(format!("{name}: {e}")),
            };
            for r in ws {
                let mapped = map_realisation(r, norm);
                if !verify(&d.instance, &mapped).unwrap_or(false) {
                    return fail(format!(
                        "{name}: witness fails on the {} instance",
                        d.instance.shape.name()
                    ));
                }
                checked += 1;
            }
        }
    }
    if checked == 0 {
        fail("no witnesses to re-verify")
    } else {
        pass(format!(
            "{checked} witness re-verifications on diamonds and squares"
        ))
    }
}

/// Instances of at most eight regions: every gadget that small, eight-region
/// windows of compiled instances and seeded random instances on a small grid.
fn small_instances() -> Vec<(String, ImprecisePolyline)> {
    let mut out = Vec::new();
    for name in [
        "pivot-disk",
        "pivot-vseg",
        "variable",
        "clause-disk",
        "clause-vseg",
    ] {
        let k = GadgetKind::parse(name).unwrap();
        let inst = build_gadget(k, &GadgetParams::standard(k))
            .unwrap()
            .instance()
            .unwrap();
        if inst.len() <= 8 {
            out.push((name.to_string(), inst));
        }
    }
    for (name, f, lay) in common::corpus().into_iter().take(3) {
        for shape in [ShapeKind::UnitDisk, ShapeKind::VSegment] {
            let c = compile(&f, &lay, shape).unwrap();
            for start in (0..c.instance.len().saturating_sub(8)).step_by(37) {
                let regions = c.instance.regions[start..start + 8].to_vec();
                out.push((
                    format!("{name}/{}@{start}", shape.name()),
                    ImprecisePolyline::new(shape, regions).unwrap(),
                ));
            }
        }
    }
    let shapes = [
        ShapeKind::UnitDisk,
        ShapeKind::UnitSquare,
        ShapeKind::UnitDiamond,
        ShapeKind::VSegment,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..400 {
        let shape = shapes[i % shapes.len()];
        let n = rng.gen_range(2..=8);
        let regions = (0..n)
            .map(|_| Region::new(pt(rng.gen_range(-3..=3), rng.gen_range(-3..=3))))
            .collect();
        out.push((
            format!("random-{i}/{}", shape.name()),
            ImprecisePolyline::new(shape, regions).unwrap(),
        ));
    }
    out
}

fn pruning_safety() -> Outcome {
    let insts = small_instances();
    let mut realisable = 0;
    for (name, inst) in &insts {
        for level in [CandidateLevel::Extremes, CandidateLevel::ExtremesAndCenter] {
            let run = |prune| {
                solve_with(
                    inst,
                    &level,
                    SolveOptions {
                        budget: DEFAULT_BUDGET,
                        prune,
                    },
                )
                .unwrap()
            };
            let (a, b) = (run(true), run(false));
            if matches!(a, SolveOutcome::BudgetExceeded(_))
                || matches!(b, SolveOutcome::BudgetExceeded(_))
            {
                return fail(format!("{name}: budget exhausted"));
            }
            if a != b {
                return fail(format!("{name}: pruned {a:?} vs unpruned {b:?}"));
            }
            realisable += matches!(a, SolveOutcome::Realisable(_)) as usize;
        }
    }
    pass(format!(
        "{} instances at two levels, {realisable} realisable runs, identical outcomes",
        insts.len()
    ))
}

fn run_cli(dir: &Path, args: &[&str]) -> Result<(Vec<u8>, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_wspoly"))
        .current_dir(dir)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.stdout, out.stderr))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let (f, lay) = common::nested_example();
    std::fs::write(dir.path().join("f.cnf"), f.to_dimacs()).unwrap();
    std::fs::write(dir.path().join("f.layout"), lay.to_text()).unwrap();
    let mut runs = Vec::new();
    for k in 0..2 {
        let mut bytes = Vec::new();
        for shape in ["disk", "vseg"] {
            let inst = format!("{shape}{k}.inst");
            let real = format!("{shape}{k}.real");
            let steps: [Vec<&str>; 2] = [
                vec![
                    "compile", "f.cnf", "--layout", "f.layout", "--shape", shape, "--out", &inst,
                ],
                vec!["solve", &inst, "--out", &real],
            ];
            for args in &steps {
                match run_cli(dir.path(), args) {
                    Ok((o, e)) => {
                        bytes.extend(o);
                        bytes.extend(e);
                    }
                    Err(e) => return fail(e),
                }
            }
            for file in [inst.clone(), format!("{inst}.sidecar"), real] {
                match std::fs::read(dir.path().join(&file)) {
                    Ok(b) => bytes.extend(b),
                    Err(e) => return fail(format!("{file}: {e}")),
                }
            }
        }
        runs.push(bytes);
    }
    if runs[0] == runs[1] {
        pass(format!(
            "two runs, {} identical bytes of output",
            runs[0].len()
        ))
    } else {
        fail("outputs differ between runs")
    }
}

fn main() {
    let mut keep = Witnesses::new();
    let criteria: Vec<(&str, Duration, Box<dyn FnOnce(&mut Witnesses) -> Outcome>)> = vec![
        (
            "1 segment relation vs parametric oracle",
            Duration::from_secs(60),
            Box::new(|_| segment_oracle()),
        ),
        (
            "2 weak simplicity vs perturbation oracle",
            Duration::from_secs(600),
            Box::new(|_| weak_oracle()),
        ),
        (
            "3 pivot lemma",
            Duration::from_secs(300),
            Box::new(|_| pivot_lemma()),
        ),
        (
            "4 variable lemma",
            Duration::from_secs(60),
            Box::new(|_| variable_lemma()),
        ),
        (
            "5 clause lemma",
            Duration::from_secs(300),
            Box::new(|_| clause_lemma()),
        ),
        (
            "6 wire lemma",
            Duration::from_secs(1800),
            Box::new(|_| wire_lemma()),
        ),
        (
            "7 end-to-end equivalence",
            Duration::from_secs(1800),
            Box::new(end_to_end),
        ),
        (
            "8 observation monotonicity",
            Duration::from_secs(600),
            Box::new(|k| monotonicity(k)),
        ),
        (
            "9 pruning safety",
            Duration::from_secs(600),
            Box::new(|_| pruning_safety()),
        ),
        (
            "10 determinism",
            Duration::from_secs(600),
            Box::new(|_| determinism()),
        ),
    ];
    let mut failed = 0;
    for (name, limit, f) in criteria {
        let t = Instant::now();
        let o = f(&mut keep);
        let took = t.elapsed();
        let o = within(limit, took, o);
        failed += !o.ok as usize;
        println!(
            "{} {name}: {} [{:.1?}]",
            if o.ok { "PASS" } else { "FAIL" },
            o.detail,
            took
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
