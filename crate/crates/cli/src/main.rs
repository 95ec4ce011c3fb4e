//! `wspoly`: compile, solve, verify and draw weakly simple realisation
//! instances.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use wspoly::equivalence::equivalence_check;
use wspoly::gadgets::{build_gadget, check_gadget_lemma, GadgetKind, GadgetParams};
use wspoly::instance::{
    load_candidates, load_instance, load_realisation, save_instance_scaled, save_realisation,
    CandidateLevel, ImprecisePolyline, ShapeKind,
};
use wspoly::reduction::{compile, to_square_or_diamond, CompiledInstance, Norm};
use wspoly::render::{render_scene, RenderOptions, Scene};
use wspoly::sat::{parse_formula, parse_layout, Layout};
use wspoly::solver::{solve, verify, SolveOutcome, DEFAULT_BUDGET};
use wspoly::{rat, Rat};

#[derive(Parser)]
#[command(
    name = "wspoly",
    version,
    about = "Weakly simple realisations of imprecise polylines"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compile a DIMACS formula (and layout) into an instance plus sidecar.
    Compile {
        formula: PathBuf,
        #[arg(long)]
        layout: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "disk")]
        shape: ShapeArg,
        /// Write vertical segments at unit length (coordinates halved).
        #[arg(long)]
        unit_length: bool,
        /// Instance path; the sidecar goes next to it as PATH.sidecar.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search the candidate set of an instance for a weakly simple realisation.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a realisation against an instance.
    Verify {
        instance: PathBuf,
        realisation: PathBuf,
    },
    /// Exhaustively check a gadget's lemma with standard parameters.
    CheckGadget {
        /// pivot-disk, pivot-vseg, variable, clause-disk, clause-vseg,
        /// wire-{disk,vseg}-{left,middle,right}
        kind: String,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the SAT oracle with the solver on the compiled instance.
    Equivalence {
        formula: PathBuf,
        #[arg(long)]
        layout: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "disk")]
        shape: ShapeArg,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw an instance (or a gadget) and optionally a realisation as SVG.
    Render {
        instance: Option<PathBuf>,
        #[arg(long)]
        realisation: Option<PathBuf>,
        /// Draw the schematic of a gadget instead of an instance file.
        #[arg(long, conflicts_with = "instance")]
        gadget: Option<String>,
        #[arg(long)]
        no_regions: bool,
        #[arg(long)]
        no_pivots: bool,
        #[arg(long)]
        no_anchors: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SearchArgs {
    /// extremes, extremes+center or custom=FILE
    #[arg(long, default_value = "extremes")]
    level: String,
    /// Search tree node budget.
    #[arg(long, env = "WSPOLY_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Disk,
    Square,
    Vseg,
}

/// Failure with an exit code: input errors are 2.
struct Fail(u8, anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(2, e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn level(arg: &str, inst: Option<&ImprecisePolyline>) -> Result<CandidateLevel> {
    Ok(match arg {
        "extremes" => CandidateLevel::Extremes,
        "extremes+center" => CandidateLevel::ExtremesAndCenter,
        other => match other.strip_prefix("custom=") {
            Some(file) => {
                let Some(inst) = inst else {
                    bail!("custom candidates need an instance")
                };
                CandidateLevel::Custom(load_candidates(&read(Path::new(file))?, inst)?)
            }
            None => bail!("unknown level `{other}`"),
        },
    })
}

fn compiled(formula: &Path, layout: &Option<PathBuf>, shape: ShapeArg) -> Result<CompiledInstance> {
    let f = parse_formula(&read(formula)?)?;
    let lay = match layout {
        Some(p) => parse_layout(&read(p)?, &f)?,
        None => {
            Layout::trivial(&f).context("no layout given and the default layout does not fit")?
        }
    };
    Ok(match shape {
        ShapeArg::Disk => compile(&f, &lay, ShapeKind::UnitDisk)?,
        ShapeArg::Vseg => compile(&f, &lay, ShapeKind::VSegment)?,
        ShapeArg::Square => {
            to_square_or_diamond(&compile(&f, &lay, ShapeKind::UnitDisk)?, Norm::Linf)?
        }
    })
}

fn run(cmd: Cmd) -> Result<u8, Fail> {
    match cmd {
        Cmd::Compile {
            formula,
            layout,
            shape,
            unit_length,
            out,
        } => {
            let c = compiled(&formula, &layout, shape)?;
            let unit: Option<Rat> =
                (unit_length && c.instance.shape == ShapeKind::VSegment).then(|| rat(1, 2));
            emit(&out, &save_instance_scaled(&c.instance, unit.as_ref()))?;
            if let Some(p) = &out {
                let mut side = p.clone().into_os_string();
                side.push(".sidecar");
                emit(&Some(side.into()), &c.sidecar())?;
            }
            eprintln!("COMPILED {} regions", c.instance.len());
            Ok(0)
        }
        Cmd::Solve {
            instance,
            search,
            out,
        } => {
            let inst = load_instance(&read(&instance)?)?;
            let lv = level(&search.level, Some(&inst))?;
            match solve(&inst, &lv, search.budget)? {
                SolveOutcome::Realisable(r) => {
                    println!("REALISABLE");
                    emit(&out, &save_realisation(&r))?;
                    Ok(0)
                }
                SolveOutcome::NoneOverCandidates => {
                    println!("NONE_OVER_CANDIDATES");
                    Ok(1)
                }
                SolveOutcome::BudgetExceeded(s) => {
                    println!("BUDGET_EXCEEDED {}", s.nodes);
                    Ok(1)
                }
            }
        }
        Cmd::Verify {
            instance,
            realisation,
        } => {
            let inst = load_instance(&read(&instance)?)?;
            let r = load_realisation(&read(&realisation)?, Some(&inst))?;
            if verify(&inst, &r)? {
                println!("VERIFIED");
                Ok(0)
            } else {
                println!("INVALID");
                Ok(1)
            }
        }
        Cmd::CheckGadget { kind, search, out } => {
            let kind = GadgetKind::parse(&kind)?;
            let lv = level(&search.level, None)?;
            let rep = check_gadget_lemma(kind, &GadgetParams::standard(kind), &lv, search.budget)?;
            if out.is_some() {
                emit(&out, &rep.to_text())?;
            }
            let verdict = match (rep.holds, rep.complete) {
                (true, _) => "LEMMA_OK",
                (false, true) => "LEMMA_FAILED",
                (false, false) => "BUDGET_EXCEEDED",
            };
            println!("{verdict}");
            Ok(if rep.holds { 0 } else { 1 })
        }
        Cmd::Equivalence {
            formula,
            layout,
            shape,
            search,
            out,
        } => {
            let f = parse_formula(&read(&formula)?)?;
            let lay = match &layout {
                Some(p) => parse_layout(&read(p)?, &f)?,
                None => Layout::trivial(&f)?,
            };
            let shape = match shape {
                ShapeArg::Disk => ShapeKind::UnitDisk,
                ShapeArg::Vseg => ShapeKind::VSegment,
                ShapeArg::Square => {
                    return Err(Fail(
                        2,
                        anyhow::anyhow!("equivalence compiles disk or vseg instances"),
                    ))
                }
            };
            let lv = level(&search.level, None)?;
            let rep = equivalence_check(&f, &lay, shape, &lv, search.budget)?;
            if out.is_some() {
                emit(&out, &rep.to_text())?;
            }
            println!("{}", rep.verdict());
            Ok(if rep.passed() { 0 } else { 1 })
        }
        Cmd::Render {
            instance,
            realisation,
            gadget,
            no_regions,
            no_pivots,
            no_anchors,
            out,
        } => {
            let (inst, scene) = match (&instance, &gadget) {
                (Some(p), _) => (load_instance(&read(p)?)?, Scene::default()),
                (None, Some(k)) => {
                    let kind = GadgetKind::parse(k)?;
                    Scene::schematic(&build_gadget(kind, &GadgetParams::standard(kind))?)
                }
                (None, None) => {
                    return Err(Fail(
                        2,
                        anyhow::anyhow!("give an instance file or --gadget"),
                    ))
                }
            };
            let r = match &realisation {
                Some(p) => Some(load_realisation(&read(p)?, None)?),
                None => None,
            };
            let opts = RenderOptions {
                show_regions: !no_regions,
                show_pivots: !no_pivots,
                show_anchors: !no_anchors,
                ..RenderOptions::default()
            };
            emit(&out, &render_scene(&inst, &scene, r.as_ref(), &opts))?;
            Ok(0)
        }
    }
}
