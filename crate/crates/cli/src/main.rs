mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ioml::axioms::{builtin, Catalog};
use ioml::classify::{classify, ClassId};
use ioml::corpus;
use ioml::enumerate::{
    enumerate_models, theorems, verify_on, write_dump, EnumerationTask, Filter, VerifyTask,
    DEFAULT_SIZE_CAP,
};
use ioml::term::{check_formula, parse_formula, BinOp, CheckResult, Interpretation};
use ioml::text::parse_document;
use ioml::transforms::{from_document, translate, write_any, AnyAlgebra, Target};

use report::{Binding, FailingAxiom, Input, ModelEntry, Record, Report, ViolationEntry};

/// Finite-model workbench for implicative involutive BE algebras.
#[derive(Debug, Parser)]
#[command(name = "ioml", version)]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Directory with extra `examples/<id>.alg` files and optional
    /// `axioms.catalog` / `suites.catalog` extensions.
    #[arg(long, global = true, env = "IOML_RESOURCE_DIR", value_name = "DIR")]
    resources: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// A bundled example id (E4.14, E4.22, E5.15, BOOL2, TRIV1).
    #[arg(long)]
    example: Option<String>,
    /// An algebra in the text format.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check catalog axioms, inline formulas or identity suites.
    Check {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        axiom: Vec<String>,
        #[arg(long)]
        formula: Vec<String>,
        #[arg(long)]
        suite: Vec<String>,
    },
    /// Decide membership in every class, or assert membership with --class.
    Classify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        class: Vec<String>,
    },
    /// Print operation tables.
    Tables {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "arrow")]
        op: Vec<TableOp>,
    },
    /// Translate between the arrow, product and lattice signatures.
    Transform {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum)]
        to: TargetArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate all involutive BE algebras of one size.
    Enumerate {
        #[arg(long)]
        size: usize,
        /// Keep only members of these classes.
        #[arg(long)]
        class: Vec<String>,
        /// Keep only models satisfying these axioms.
        #[arg(long)]
        axiom: Vec<String>,
        /// Emit every labeling instead of one model per isomorphism class.
        #[arg(long)]
        labeled: bool,
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
        #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
        size_cap: usize,
        /// Stop with an error after this many search nodes.
        #[arg(long)]
        node_budget: Option<u64>,
        /// Write the models here in the text format.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify registered theorems on every model up to a size.
    Verify {
        /// Theorem ids, or `all`.
        #[arg(long, required = true)]
        theorem: Vec<String>,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
        #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
        size_cap: usize,
        /// Leave the bundled examples out of the universe.
        #[arg(long)]
        no_corpus: bool,
    },
    /// List registered ids.
    List {
        #[arg(value_enum)]
        what: ListWhat,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableOp {
    Arrow,
    Star,
    Cup,
    Cap,
    Odot,
    Oplus,
    Meet,
    Join,
    Leq,
    #[value(name = "leqQ")]
    LeqQ,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TargetArg {
    Arrow,
    Product,
    Lattice,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ListWhat {
    Axioms,
    Suites,
    Classes,
    Theorems,
    Examples,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

struct Loaded {
    label: String,
    algebra: AnyAlgebra,
}

fn load_input(input: &InputArgs, resources: Option<&Path>, report: &mut Report) -> Result<Loaded> {
    let (label, text) = if let Some(id) = &input.example {
        report.inputs.push(Input::Example { id: id.clone() });
        let local = resources.map(|d| d.join("examples").join(format!("{id}.alg")));
        let text = match local.filter(|p| p.is_file()) {
            Some(p) => fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?,
            None => corpus::example_source(id)
                .ok_or_else(|| {
                    let known: Vec<_> = corpus::example_ids().collect();
                    anyhow!("unknown example `{id}` (bundled: {})", known.join(", "))
                })?
                .to_string(),
        };
        (id.clone(), text)
    } else {
        let path = input.file.as_ref().expect("clap requires an input");
        report.inputs.push(Input::File {
            path: path.display().to_string(),
        });
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        (path.display().to_string(), text)
    };
    let doc = parse_document(&text).with_context(|| format!("parsing {label}"))?;
    let label = doc.name().map_or(label, str::to_string);
    let algebra = from_document(&doc).with_context(|| format!("loading {label}"))?;
    Ok(Loaded { label, algebra })
}

fn load_catalog(resources: Option<&Path>) -> Result<Catalog> {
    let mut cat = builtin().clone();
    if let Some(dir) = resources {
        let axioms = dir.join("axioms.catalog");
        if axioms.is_file() {
            cat.extend_axioms(&fs::read_to_string(&axioms)?)
                .with_context(|| format!("in {}", axioms.display()))?;
        }
        let suites = dir.join("suites.catalog");
        if suites.is_file() {
            cat.extend_suites(&fs::read_to_string(&suites)?)
                .with_context(|| format!("in {}", suites.display()))?;
        }
    }
    Ok(cat)
}

fn witness(r: &CheckResult, interp: &(impl Interpretation + ?Sized)) -> Vec<Binding> {
    r.witness
        .iter()
        .flat_map(|w| &w.0)
        .map(|(var, x)| Binding {
            var: var.clone(),
            element: interp.element_name(*x).to_string(),
        })
        .collect()
}

fn check_record(id: String, formula: String, r: &CheckResult, interp: &(impl Interpretation + ?Sized)) -> Record {
    Record::Check {
        id,
        formula,
        holds: r.holds,
        witness: witness(r, interp),
        evaluations: r.evaluations,
    }
}

fn arrow_form(a: &AnyAlgebra) -> Result<ioml::algebra::InvolutiveAlgebra> {
    match translate(a, &Target::Arrow)? {
        AnyAlgebra::Arrow(x) => Ok(x),
        _ => unreachable!("translated to the arrow signature"),
    }
}

fn parse_class(s: &str) -> Result<ClassId> {
    ClassId::from_id(s).ok_or_else(|| {
        let known: Vec<_> = ClassId::ALL.iter().map(|c| c.id()).collect();
        anyhow!("unknown class `{s}` (known: {})", known.join(", "))
    })
}

fn run(cli: &Cli, report: &mut Report) -> Result<()> {
    let resources = cli.resources.as_deref();
    match &cli.command {
        Command::Check {
            input,
            axiom,
            formula,
            suite,
        } => {
            if axiom.is_empty() && formula.is_empty() && suite.is_empty() {
                bail!("nothing to check: give --axiom, --formula or --suite");
            }
            let cat = load_catalog(resources)?;
            let loaded = load_input(input, resources, report)?;
            let interp = loaded.algebra.interpretation();
            for id in axiom {
                let r = cat.check(interp, id)?;
                let text = cat.get(id)?.text.clone();
                report.push(check_record(id.clone(), text, &r, interp));
            }
            for (i, f) in formula.iter().enumerate() {
                let q = parse_formula(f).with_context(|| format!("formula `{f}`"))?;
                let r = check_formula(interp, &q)?;
                report.push(check_record(format!("formula {}", i + 1), q.to_string(), &r, interp));
            }
            for id in suite {
                let s = cat.run_suite(interp, id)?;
                if !s.applicable {
                    let failed: Vec<_> = s
                        .hypotheses
                        .iter()
                        .filter(|h| !h.holds)
                        .filter_map(|h| h.axiom.clone())
                        .collect();
                    report.push(Record::Skipped {
                        id: s.suite.clone(),
                        reason: format!("hypothesis {} fails", failed.join(", ")),
                    });
                }
                for item in &s.items {
                    report.push(check_record(
                        format!("{}/{}", s.suite, item.label),
                        item.formula.clone(),
                        &item.result,
                        interp,
                    ));
                }
            }
        }
        Command::Classify { input, class } => {
            let wanted = class.iter().map(|c| parse_class(c)).collect::<Result<Vec<_>>>()?;
            let loaded = load_input(input, resources, report)?;
            let a = arrow_form(&loaded.algebra)?;
            let r = classify(&a, &loaded.label)?;
            for v in &r.verdicts {
                if !wanted.is_empty() && !wanted.contains(&v.class) {
                    continue;
                }
                if wanted.contains(&v.class) && !v.member {
                    report.exit_status = 1;
                }
                report.push(Record::Class {
                    class: v.class.id().to_string(),
                    name: v.class.name().to_string(),
                    member: v.member,
                    failing: v
                        .failing
                        .iter()
                        .map(|f| FailingAxiom {
                            axiom: f.axiom.clone().unwrap_or_default(),
                            witness: witness(f, &a),
                        })
                        .collect(),
                });
            }
        }
        Command::Tables { input, op } => {
            let loaded = load_input(input, resources, report)?;
            for &op in op {
                report.push(table(&loaded.algebra, op)?);
            }
        }
        Command::Transform { input, to, out } => {
            let loaded = load_input(input, resources, report)?;
            let target = match to {
                TargetArg::Arrow => Target::Arrow,
                TargetArg::Product => Target::Product,
                TargetArg::Lattice => Target::Lattice,
            };
            let t = translate(&loaded.algebra, &target)?;
            let text = write_any(&t, Some(&loaded.label));
            let output = match out {
                Some(p) => {
                    fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
                    Some(p.display().to_string())
                }
                None => None,
            };
            report.push(Record::Transform {
                from: loaded.algebra.signature().id().to_string(),
                to: t.signature().id().to_string(),
                text: output.is_none().then_some(text),
                output,
            });
        }
        Command::Enumerate {
            size,
            class,
            axiom,
            labeled,
            workers,
            size_cap,
            node_budget,
            out,
        } => {
            let filter = Filter {
                classes: class.iter().map(|c| parse_class(c)).collect::<Result<_>>()?,
                axioms: axiom.clone(),
            };
            let mut task = EnumerationTask::new(*size).workers(*workers).filter(filter);
            if *labeled {
                task = task.labeled();
            }
            task.size_cap = *size_cap;
            task.node_budget = *node_budget;
            report.inputs.push(Input::Generated { size: *size });
            let e = enumerate_models(&task)?;
            let output = match out {
                Some(p) => {
                    fs::write(p, write_dump(&e)).with_context(|| format!("writing {}", p.display()))?;
                    Some(p.display().to_string())
                }
                None => None,
            };
            report.push(Record::Enumeration {
                size: e.size,
                modulo_iso: task.modulo_iso,
                workers: task.workers,
                models: e.models.len(),
                unfiltered: e.unfiltered,
                nodes: e.nodes,
                output,
                listing: e
                    .models
                    .iter()
                    .map(|m| ModelEntry {
                        name: m.name.clone(),
                        canonical: m.canonical.hex(),
                    })
                    .collect(),
            });
        }
        Command::Verify {
            theorem,
            max_size,
            workers,
            size_cap,
            no_corpus,
        } => {
            let registry = theorems();
            let selected: Vec<_> = if theorem.iter().any(|t| t == "all") {
                registry.iter().collect()
            } else {
                theorem
                    .iter()
                    .map(|id| {
                        registry
                            .iter()
                            .find(|t| &t.id == id)
                            .ok_or_else(|| anyhow!("unknown theorem `{id}` (see `ioml list theorems`)"))
                    })
                    .collect::<Result<_>>()?
            };
            let task = VerifyTask {
                max_size: *max_size,
                workers: *workers,
                include_corpus: !no_corpus,
                size_cap: *size_cap,
            };
            if task.include_corpus {
                for id in corpus::example_ids() {
                    report.inputs.push(Input::Example { id: id.to_string() });
                }
            }
            for size in 1..=*max_size {
                report.inputs.push(Input::Generated { size });
            }
            let universe = task.universe()?;
            let named: Vec<_> = universe.iter().map(|(n, a)| (n.clone(), a)).collect();
            for t in selected {
                let r = verify_on(&named, t)?;
                report.push(Record::Theorem {
                    id: r.theorem,
                    description: r.description,
                    statements: r.statements,
                    models_examined: r.models_examined,
                    instances: r.instances,
                    violations: r
                        .violations
                        .into_iter()
                        .map(|v| ViolationEntry {
                            model: v.model,
                            statement: v.statement,
                            detail: v.detail,
                        })
                        .collect(),
                    separating: r.separating,
                });
            }
        }
        Command::List { what } => {
            let entries: Vec<Vec<String>> = match what {
                ListWhat::Axioms => load_catalog(resources)?
                    .axioms()
                    .iter()
                    .map(|a| vec![a.id.clone(), a.context.id().to_string(), a.text.clone()])
                    .collect(),
                ListWhat::Suites => load_catalog(resources)?
                    .suites()
                    .iter()
                    .map(|s| {
                        let hyps = if s.hypotheses.is_empty() { "-".to_string() } else { s.hypotheses.join(" & ") };
                        vec![s.id.clone(), format!("{} items", s.items.len()), hyps, s.title.clone()]
                    })
                    .collect(),
                ListWhat::Classes => ClassId::ALL
                    .iter()
                    .map(|c| vec![c.id().to_string(), c.axioms().join(" & "), c.name().to_string()])
                    .collect(),
                ListWhat::Theorems => theorems()
                    .iter()
                    .map(|t| vec![t.id.clone(), t.description.clone()])
                    .collect(),
                ListWhat::Examples => corpus::example_ids()
                    .map(|id| {
                        let e = corpus::load_example(id).expect("bundled examples load");
                        vec![id.to_string(), e.description]
                    })
                    .collect(),
            };
            report.push(Record::Listing {
                what: format!("{what:?}").to_lowercase(),
                entries,
            });
        }
    }
    Ok(())
}

fn table(a: &AnyAlgebra, op: TableOp) -> Result<Record> {
    let bin = match op {
        TableOp::Arrow => Some(BinOp::Arrow),
        TableOp::Cup => Some(BinOp::Cup),
        TableOp::Cap => Some(BinOp::Cap),
        TableOp::Odot => Some(BinOp::Odot),
        TableOp::Oplus => Some(BinOp::Oplus),
        TableOp::Meet => Some(BinOp::Meet),
        TableOp::Join => Some(BinOp::Join),
        TableOp::Star | TableOp::Leq | TableOp::LeqQ => None,
    };
    // meet and join need the lattice form, the rest the arrow or product form
    let translated;
    let interp: &dyn Interpretation = match bin {
        Some(b) if !a.interpretation().supports(b) => {
            let target = if matches!(b, BinOp::Meet | BinOp::Join) {
                Target::Lattice
            } else {
                Target::Arrow
            };
            translated = translate(a, &target)?;
            translated.interpretation()
        }
        _ => a.interpretation(),
    };
    let n = interp.size();
    let elements: Vec<String> = (0..n).map(|x| interp.element_name(x).to_string()).collect();
    let name = |x| interp.element_name(x).to_string();
    let flag = |b: bool| if b { "1" } else { "0" }.to_string();
    let rows: Vec<Vec<String>> = match op {
        TableOp::Star => vec![(0..n).map(|x| name(interp.star(x))).collect()],
        TableOp::Leq => (0..n).map(|x| (0..n).map(|y| flag(interp.leq(x, y))).collect()).collect(),
        TableOp::LeqQ => (0..n).map(|x| (0..n).map(|y| flag(interp.leq_q(x, y))).collect()).collect(),
        _ => {
            let b = bin.expect("binary op");
            (0..n).map(|x| (0..n).map(|y| name(interp.binary(b, x, y))).collect()).collect()
        }
    };
    let op = match op {
        TableOp::LeqQ => "leqQ".to_string(),
        other => format!("{other:?}").to_lowercase(),
    };
    Ok(Record::Table { op, elements, rows })
}

fn shell_quote(arg: &str) -> String {
    let plain = !arg.is_empty()
        && arg.chars().all(|c| c.is_ascii_alphanumeric() || "-_./=:,+@".contains(c));
    if plain {
        arg.to_string()
    } else {
        format!("'{}'", arg.replace('\'', r"'\''"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().skip(1).map(|a| shell_quote(&a)).collect();
    let mut report = Report::new(format!("ioml {}", args.join(" ")).trim_end().to_string());
    let start = Instant::now();
    if let Err(e) = run(&cli, &mut report) {
        report.error = Some(format!("{e:#}"));
        report.exit_status = 2;
    }
    report.timing.elapsed_us = start.elapsed().as_micros() as u64;
    if cli.json {
        println!("{}", report.json());
    } else {
        print!("{}", report.human());
        if let Some(e) = &report.error {
            eprintln!("error: {e}");
        }
    }
    ExitCode::from(report.exit_status)
}
