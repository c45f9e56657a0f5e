use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use hmlcause::causality::default_bound;
use hmlcause::composition::{
    cross_check_disjunction_lifting, cross_check_single_component, shrink, write_bundle, Instance, LemmaReport,
    Theorem, TheoremReport,
};
use hmlcause::hml::{parse_formula, satisfies, EffectContext, Formula};
use hmlcause::lts::{choice, emit_dot, interleave, parse_aut, to_aut, Lts};
use hmlcause::testkit::{random_instance, GenParams};
use hmlcause::causes;

#[derive(Parser)]
#[command(name = "hmlcause", version, about = "Actual causes of HML effects on labeled transition systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula at the initial state.
    Check { lts: PathBuf, formula: String },
    /// List the causes of an effect.
    Causes {
        lts: PathBuf,
        formula: String,
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Emit the causal projection.
    Project {
        lts: PathBuf,
        formula: String,
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long, value_enum, default_value_t = GraphFormat::Aut)]
        format: GraphFormat,
    },
    /// Emit the interleaving or choice of two systems.
    Compose {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum, default_value_t = Op::Interleave)]
        op: Op,
        #[arg(long, value_enum, default_value_t = GraphFormat::Aut)]
        format: GraphFormat,
    },
    /// Check the composition theorems on one instance or a seeded corpus.
    Verify {
        #[arg(required_unless_present = "random")]
        left: Option<PathBuf>,
        #[arg(required_unless_present = "random")]
        right: Option<PathBuf>,
        #[arg(required_unless_present = "random")]
        phi: Option<String>,
        #[arg(required_unless_present = "random")]
        psi: Option<String>,
        #[arg(long, value_enum, default_value_t = TheoremArg::Disjunction)]
        theorem: TheoremArg,
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long, conflicts_with_all = ["left", "right", "phi", "psi"])]
        random: bool,
        #[arg(long, default_value_t = 0, requires = "random")]
        seed: u64,
        #[arg(long, default_value_t = 100, requires = "random")]
        count: usize,
        /// Write a shrunk bundle for every failing instance under this directory.
        #[arg(long)]
        bundle_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Render a system as Graphviz, dashing the causal transitions of a formula.
    Dot {
        lts: PathBuf,
        formula: Option<String>,
        #[arg(long)]
        bound: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Aut,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Interleave,
    Choice,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TheoremArg {
    Disjunction,
    Conjunction,
    Lemmas,
}

type Result<T> = std::result::Result<T, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(ok) => ExitCode::from(if ok { 0 } else { 1 }),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Check { lts, formula } => {
            let lts = load_lts(&lts)?;
            let f = load_formula(&formula)?;
            let ok = satisfies(&lts, lts.initial(), &f).map_err(|e| e.to_string())?;
            println!("{}", if ok { "satisfied" } else { "not satisfied" });
            Ok(ok)
        }
        Command::Causes { lts, formula, bound, format } => {
            let ctx = context(&lts, &formula)?;
            let k = pick_bound(ctx.lts(), bound);
            let set = causes(&ctx, k);
            if set.immediate {
                eprintln!("note: the effect holds at the initial state; the immediate-effect policy applies");
            }
            match format {
                Format::Json => println!("{}", pretty(&set.to_json())),
                Format::Human => {
                    println!("bound {k}, {}", set.exactness.as_str());
                    if set.is_empty() {
                        println!("no causes");
                    }
                    for c in &set.causes {
                        println!("{c}");
                    }
                }
            }
            Ok(!set.is_empty())
        }
        Command::Project { lts, formula, bound, format } => {
            let ctx = context(&lts, &formula)?;
            let k = pick_bound(ctx.lts(), bound);
            let p = causes(&ctx, k).projection();
            print!("{}", render(&p, format)?);
            Ok(true)
        }
        Command::Compose { left, right, op, format } => {
            let (l, r) = (load_lts(&left)?, load_lts(&right)?);
            let c = match op {
                Op::Interleave => interleave(&l, &r),
                Op::Choice => choice(&l, &r),
            };
            print!("{}", render(&c, format)?);
            Ok(true)
        }
        Command::Dot { lts, formula, bound } => {
            let t = load_lts(&lts)?;
            let highlight = match formula {
                Some(f) => {
                    let ctx = EffectContext::new(t.clone(), load_formula(&f)?).map_err(|e| e.to_string())?;
                    let k = pick_bound(&t, bound);
                    Some(causes(&ctx, k).projection().transitions().collect::<BTreeSet<_>>())
                }
                None => None,
            };
            print!("{}", emit_dot(&t, highlight.as_ref()).map_err(|e| e.to_string())?);
            Ok(true)
        }
        Command::Verify { left, right, phi, psi, theorem, bound, random, seed, count, bundle_dir, format } => {
            let instances: Vec<(String, Instance)> = if random {
                let base = GenParams::with_seed(seed);
                (0..count).map(|i| (format!("instance {i}"), random_instance(&base, i))).collect()
            } else {
                let (l, r) = (load_lts(&left.expect("required"))?, load_lts(&right.expect("required"))?);
                let (f, g) = (load_formula(&phi.expect("required"))?, load_formula(&psi.expect("required"))?);
                vec![("instance".to_string(), Instance::new(l, r, f, g))]
            };
            verify(&instances, theorem, bound, random, bundle_dir.as_deref(), format)
        }
    }
}

enum Outcome {
    Theorem(TheoremReport),
    Lemmas(LemmaReport, LemmaReport),
}

impl Outcome {
    fn holds(&self) -> bool {
        match self {
            Outcome::Theorem(r) => r.verdict.holds(),
            Outcome::Lemmas(a, b) => a.is_clean() && b.is_clean(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Outcome::Theorem(r) => r.to_json(),
            Outcome::Lemmas(a, b) => json!({
                "lifting": { "checked": a.checked, "violations": a.violations },
                "single_component": { "checked": b.checked, "violations": b.violations },
            }),
        }
    }

    fn human(&self) -> String {
        match self {
            Outcome::Theorem(r) => r.to_string(),
            Outcome::Lemmas(a, b) => {
                let mut out = format!(
                    "lifting: {} causes checked, {} violations\nsingle component: {} causes checked, {} violations",
                    a.checked,
                    a.violations.len(),
                    b.checked,
                    b.violations.len()
                );
                for v in a.violations.iter().chain(&b.violations) {
                    out.push_str(&format!("\n  {v}"));
                }
                out
            }
        }
    }
}

fn evaluate(inst: &Instance, theorem: TheoremArg, k: usize) -> Outcome {
    match theorem {
        TheoremArg::Disjunction => Outcome::Theorem(inst.verify(Theorem::Disjunction, k)),
        TheoremArg::Conjunction => Outcome::Theorem(inst.verify(Theorem::Conjunction, k)),
        TheoremArg::Lemmas => Outcome::Lemmas(
            cross_check_disjunction_lifting(inst, k),
            cross_check_single_component(inst, k),
        ),
    }
}

fn verify(
    instances: &[(String, Instance)],
    theorem: TheoremArg,
    bound: Option<usize>,
    quiet_notes: bool,
    bundle_dir: Option<&Path>,
    format: Format,
) -> Result<bool> {
    let mut held = 0;
    let mut rendered = Vec::new();
    for (i, (name, inst)) in instances.iter().enumerate() {
        let composite = inst.composite();
        let k = bound.unwrap_or_else(|| default_bound(&composite));
        if bound.is_none() && !quiet_notes && !composite.is_acyclic() {
            eprintln!("note: the composite is cyclic; results are exact only up to bound {k}");
        }
        let outcome = evaluate(inst, theorem, k);
        if outcome.holds() {
            held += 1;
        } else if let (Some(dir), Outcome::Theorem(_)) = (bundle_dir, &outcome) {
            let small = shrink(inst, |c| !evaluate(c, theorem, k).holds());
            if let Outcome::Theorem(report) = evaluate(&small, theorem, k) {
                let path = dir.join(format!("instance-{i}"));
                write_bundle(&path, &small, &report).map_err(|e| format!("{}: {e}", path.display()))?;
                eprintln!("wrote {}", path.display());
            }
        }
        rendered.push((name, outcome));
    }

    let all = held == instances.len();
    match format {
        Format::Json => {
            let reports: Vec<_> = rendered.iter().map(|(_, o)| o.to_json()).collect();
            let v = if instances.len() == 1 {
                reports.into_iter().next().expect("one report")
            } else {
                json!({ "count": instances.len(), "held": held, "reports": reports })
            };
            println!("{}", pretty(&v));
        }
        Format::Human => {
            if instances.len() == 1 {
                println!("{}", rendered[0].1.human());
            } else {
                for (name, o) in rendered.iter().filter(|(_, o)| !o.holds()) {
                    println!("{name}: {}", o.human());
                }
                println!("{held}/{} hold", instances.len());
            }
        }
    }
    Ok(all)
}

fn load_lts(path: &Path) -> Result<Lts> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_aut(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// A formula given inline, or the contents of the file it names.
fn load_formula(arg: &str) -> Result<Formula> {
    let path = Path::new(arg);
    let text = if path.is_file() {
        fs::read_to_string(path).map_err(|e| format!("{arg}: {e}"))?
    } else {
        arg.to_string()
    };
    parse_formula(text.trim()).map_err(|e| e.to_string())
}

fn context(lts: &Path, formula: &str) -> Result<EffectContext> {
    EffectContext::new(load_lts(lts)?, load_formula(formula)?).map_err(|e| e.to_string())
}

fn pick_bound(lts: &Lts, bound: Option<usize>) -> usize {
    bound.unwrap_or_else(|| {
        let k = default_bound(lts);
        if !lts.is_acyclic() {
            eprintln!("note: the system is cyclic; results are exact only up to bound {k}");
        }
        k
    })
}

fn render(lts: &Lts, format: GraphFormat) -> Result<String> {
    match format {
        GraphFormat::Aut => Ok(to_aut(lts)),
        GraphFormat::Dot => emit_dot(lts, None).map_err(|e| e.to_string()),
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}
