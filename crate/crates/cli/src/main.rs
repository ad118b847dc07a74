use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use wadge_core::gallery::{antichain, chain, expected_structure, fan, truncated_c_infinity};
use wadge_core::io::{parse_partition, parse_subset, DocumentError, PosetDocument};
use wadge_core::verify::{run_suite, Suite};
use wadge_core::{
    all_partitions, all_subsets, classify, classify_with_witnesses, degree_structure, oracle_level,
    structure_label, wadge_reduces, AlternatingChain, DegreeStructure, FinitePoset, KPartition, Naming,
    ReducibilityKind, SubsetMask,
};

#[derive(Parser)]
#[command(name = "wadge", version, about = "Wadge degrees and difference levels on finite T0 spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// Monotone (continuous) reductions.
    Wadge,
    /// Arbitrary functions.
    Any,
}

impl From<Kind> for ReducibilityKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Wadge => ReducibilityKind::Wadge,
            Kind::Any => ReducibilityKind::AllFunctions,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Size, open-set count, dimension and scattered rank of a space.
    Space {
        doc: PathBuf,
        /// Largest space whose open sets are counted.
        #[arg(long, default_value_t = 16)]
        cap: usize,
        /// Write the Hasse diagram as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Difference-hierarchy level of a subset, with witness chains.
    Classify {
        doc: PathBuf,
        subset: String,
        /// Cross-check against the exhaustive oracle.
        #[arg(long)]
        oracle: bool,
        /// Largest space accepted by the oracle.
        #[arg(long, default_value_t = 8)]
        cap: usize,
    },
    /// A reduction of A to B, printed as `x -> f(x)` lines, or NONE.
    Reduce {
        doc: PathBuf,
        a: String,
        b: String,
        #[arg(long, value_enum, default_value_t = Kind::Wadge)]
        kind: Kind,
    },
    /// Degree structure of a family of subsets.
    Degrees {
        doc: PathBuf,
        /// Subsets; defaults to the document's named sets.
        sets: Vec<String>,
        /// Use every subset of the space.
        #[arg(long, conflicts_with = "sets")]
        all: bool,
        #[arg(long, value_enum, default_value_t = Kind::Wadge)]
        kind: Kind,
        /// Largest space accepted with --all.
        #[arg(long, default_value_t = 6)]
        cap: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Degree structure of a family of k-partitions.
    Partitions {
        doc: PathBuf,
        /// Partitions as color strings in element order, e.g. 0120.
        items: Vec<String>,
        #[arg(short, long)]
        k: usize,
        /// The k constant partitions.
        #[arg(long, conflicts_with_all = ["items", "all"])]
        constants: bool,
        /// Every k-partition of the space.
        #[arg(long, conflicts_with = "items")]
        all: bool,
        #[arg(long, value_enum, default_value_t = Kind::Wadge)]
        kind: Kind,
        /// Largest space accepted with --all.
        #[arg(long, default_value_t = 6)]
        cap: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a property suite over every poset up to a size.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 4)]
        max: usize,
    },
    /// Standard spaces.
    Gallery {
        #[command(subcommand)]
        action: GalleryAction,
    },
}

#[derive(Subcommand)]
enum GalleryAction {
    /// Write a gallery space as a poset document.
    Build {
        /// chain, antichain, c-infinity, fan or expected-structure.
        name: String,
        params: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Cap(String),
    Suite,
}

impl From<wadge_core::Error> for Failure {
    fn from(e: wadge_core::Error) -> Self {
        match e {
            wadge_core::Error::CapExceeded { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        Failure::Input(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("cap exceeded: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Suite) => ExitCode::from(3),
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Space { doc, cap, dot } => cmd_space(&doc, cap, dot.as_deref()),
        Command::Classify { doc, subset, oracle, cap } => cmd_classify(&doc, &subset, oracle, cap),
        Command::Reduce { doc, a, b, kind } => cmd_reduce(&doc, &a, &b, kind.into()),
        Command::Degrees { doc, sets, all, kind, cap, dot, out } => {
            let (space, named) = load(&doc)?;
            let items = if all {
                all_subsets(&space, cap)?
            } else if sets.is_empty() {
                if named.is_empty() {
                    return Err(Failure::Input("no sets given and the document names none".into()));
                }
                named.values().map(|&s| Naming::Set(s)).collect()
            } else {
                sets.iter()
                    .map(|t| parse_subset(&space, &named, t).map(Naming::Set))
                    .collect::<Result<_, _>>()?
            };
            emit_degrees(&space, items, kind.into(), dot.as_deref(), out.as_deref())
        }
        Command::Partitions { doc, items, k, constants, all, kind, cap, dot, out } => {
            let (space, _) = load(&doc)?;
            let items = if constants {
                (0..k)
                    .map(|c| KPartition::constant(&space, k, c).map(Naming::Partition))
                    .collect::<Result<_, _>>()?
            } else if all {
                all_partitions(&space, k, cap)?
            } else if items.is_empty() {
                return Err(Failure::Input("give partitions, --constants or --all".into()));
            } else {
                items
                    .iter()
                    .map(|t| parse_partition(&space, k, t).map(Naming::Partition))
                    .collect::<Result<_, _>>()?
            };
            emit_degrees(&space, items, kind.into(), dot.as_deref(), out.as_deref())
        }
        Command::Verify { suite, max } => cmd_verify(&suite, max),
        Command::Gallery { action: GalleryAction::Build { name, params, out } } => {
            cmd_gallery(&name, &params, out.as_deref())
        }
    }
}

fn load(path: &Path) -> Result<(FinitePoset, BTreeMap<String, SubsetMask>), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let doc = PosetDocument::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(doc.build().map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?)
}

fn write_or_print(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn cmd_space(doc: &Path, cap: usize, dot: Option<&Path>) -> CliResult {
    let (space, _) = load(doc)?;
    println!("elements: {}", space.len());
    if space.len() <= cap {
        println!("opens: {}", space.enumerate_opens().len());
    } else {
        println!("opens: capped");
    }
    println!("dimension: {}", space.dimension());
    println!("scattered rank: {}", space.derivative_trace().scattered_rank());
    if let Some(path) = dot {
        write_or_print(Some(path), &space.to_dot("space"))?;
    }
    Ok(())
}

fn chain_names(space: &FinitePoset, c: &AlternatingChain) -> Vec<String> {
    c.points.iter().map(|&x| space.label(x).to_owned()).collect()
}

fn cmd_classify(doc: &Path, subset: &str, oracle: bool, cap: usize) -> CliResult {
    let (space, named) = load(doc)?;
    let a = parse_subset(&space, &named, subset)?;
    let c = classify_with_witnesses(&space, &a)?;
    let mut report = json!({
        "sigma_rank": c.level.sigma_rank,
        "pi_rank": c.level.pi_rank,
        "label": c.level.label.to_string(),
        "witness_chain_in": chain_names(&space, &c.chain_in),
        "witness_chain_out": chain_names(&space, &c.chain_out),
    });
    if oracle {
        if space.len() > cap {
            return Err(wadge_core::Error::CapExceeded {
                what: "space size for the oracle",
                got: space.len(),
                cap,
            }
            .into());
        }
        let slow = oracle_level(&space, &a, space.len() + 1)?;
        report["oracle_agrees"] = json!(slow == c.level);
    }
    print!("{}", pretty(&report));
    Ok(())
}

fn cmd_reduce(doc: &Path, a: &str, b: &str, kind: ReducibilityKind) -> CliResult {
    let (space, named) = load(doc)?;
    let a = parse_subset(&space, &named, a)?;
    let b = parse_subset(&space, &named, b)?;
    match wadge_reduces(&space, &a, &b, kind)? {
        Some(f) => print!("{}", f.to_lines(&space)),
        None => println!("NONE"),
    }
    Ok(())
}

fn naming_json(space: &FinitePoset, n: &Naming) -> Value {
    match n {
        Naming::Set(s) => json!(s.labels(space)),
        Naming::Partition(p) => json!(p.to_color_string()),
    }
}

fn degrees_report(space: &FinitePoset, d: &DegreeStructure) -> Result<Value, Failure> {
    let classes = d
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let rep = &d.items[c.representative];
            let mut v = json!({
                "class": i,
                "representative": naming_json(space, rep),
                "members": c.members.iter().map(|&m| naming_json(space, &d.items[m])).collect::<Vec<_>>(),
            });
            if let Naming::Set(s) = rep {
                v["level"] = json!(classify(space, s)?.label.to_string());
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>, wadge_core::Error>>()?;
    let label = structure_label(d);
    Ok(json!({
        "kind": d.kind,
        "items": d.items.len(),
        "class_count": d.class_count(),
        "classes": classes,
        "hasse": d.hasse,
        "max_antichain": d.diagnostics.max_antichain,
        "antichain": d.diagnostics.antichain,
        "slo_applicable": d.diagnostics.slo_applicable,
        "slo_violations": d.diagnostics.slo_violations,
        "finitely_very_good": label.finitely_very_good,
        "wqo": label.wqo,
    }))
}

fn emit_degrees(
    space: &FinitePoset,
    items: Vec<Naming>,
    kind: ReducibilityKind,
    dot: Option<&Path>,
    out: Option<&Path>,
) -> CliResult {
    let d = degree_structure(space, items, kind)?;
    if let Some(path) = dot {
        write_or_print(Some(path), &d.to_dot("degrees")?)?;
    }
    write_or_print(out, &pretty(&degrees_report(space, &d)?))
}

fn cmd_verify(name: &str, max: usize) -> CliResult {
    let suite: Suite = name.parse().map_err(Failure::Input)?;
    let report = run_suite(suite, max)?;
    println!("suite: {suite}");
    println!("max size: {max}");
    println!("posets per size: {:?}", report.posets_per_size);
    for f in &report.findings {
        println!("finding: size {} covers {:?}: {}", f.size, f.covers, f.detail);
    }
    if report.passed() {
        println!("PASS");
        Ok(())
    } else {
        println!("FAIL ({} findings)", report.findings.len());
        Err(Failure::Suite)
    }
}

fn cmd_gallery(name: &str, params: &[usize], out: Option<&Path>) -> CliResult {
    let param = || -> Result<usize, Failure> {
        match params {
            [n] => Ok(*n),
            _ => Err(Failure::Input(format!("`{name}` takes one size parameter"))),
        }
    };
    let n = param()?;
    let size = match name {
        "chain" | "antichain" | "c-infinity" => Some(n),
        "expected-structure" => n.checked_mul(2).and_then(|m| m.checked_add(4)),
        "fan" => n.checked_add(1).and_then(|a| a.checked_mul(n.saturating_add(2))).map(|m| m / 2 + 2),
        _ => {
            return Err(Failure::Input(format!(
                "unknown gallery space `{name}` (chain, antichain, c-infinity, fan, expected-structure)"
            )))
        }
    };
    if size.map_or(true, |s| s > wadge_core::MAX_ELEMENTS) {
        return Err(Failure::Input(format!("`{name} {n}` exceeds {} elements", wadge_core::MAX_ELEMENTS)));
    }
    let doc = match name {
        "chain" => PosetDocument::from_poset(&chain(n)),
        "antichain" => PosetDocument::from_poset(&antichain(n)),
        "c-infinity" => PosetDocument::from_poset(&truncated_c_infinity(n)),
        "expected-structure" => PosetDocument::from_poset(&expected_structure(n)),
        _ => {
            let f = fan(n);
            PosetDocument::from_poset(&f.poset).with_sets(&f.poset, &f.named_sets())
        }
    };
    write_or_print(out, &doc.to_json())
}
