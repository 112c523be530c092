use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use pframe::analysis::suite::{has_failures, verify, Suite, TheoremVerdict};
use pframe::analysis::{closed_open_profile, MapAnalysis};
use pframe::congruence::{enumerate_congruence_frame, madden};
use pframe::dot;
use pframe::format::{MapFile, StructureFile};
use pframe::freeframe::enumerate_free_frame;
use pframe::search::{search, SearchOutcome, SearchSpec};
use pframe::selection::{check_axioms, AxiomReport};
use pframe::sframe::validate_sframe;
use pframe::{Capacity, SFrame, SelectionKind};

mod store;

use store::{write_atomic, Store};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] pframe::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("unknown structure `{0}`")]
    UnknownStructure(String),
    #[error("{0}")]
    Usage(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "pframe", version, about = "Finite partial frames: constructions, checks and witness search")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Bound on the number of ideals and congruences enumerated.
    #[arg(long, global = true, default_value_t = 4096)]
    capacity: usize,
    /// Directory of structure files, with derived artifacts cached in
    /// its `cache` subdirectory.
    #[arg(long, global = true)]
    catalog_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum What {
    FreeFrame,
    Congruences,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Full,
    Base,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Aspect {
    Adjoints,
    Closed,
    Open,
    Dense,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Singletons,
    Finite,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the selection axioms and the S-frame conditions of a structure.
    Check { structure: String },
    /// Enumerate the free frame or the congruence frame of a structure.
    Build {
        structure: String,
        what: What,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Analyze a map: adjoints, closedness, openness, density.
    Map {
        /// A map file, or with --madden a structure.
        input: String,
        /// Analyze the Madden quotient map of the given structure.
        #[arg(long)]
        madden: bool,
        #[arg(long, value_enum, value_delimiter = ',')]
        analyze: Vec<Aspect>,
    },
    /// Run the theorem checks and report verdicts.
    Verify {
        structure: Option<String>,
        #[arg(long)]
        catalog: bool,
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
    /// Search small lattices for structures satisfying a predicate.
    Search {
        /// For example "(b) ∧ ¬(a)"; atoms are a, b, c, d, distributive,
        /// complemented, boolean, lattice, full and holds:<theorem>.
        predicate: String,
        #[arg(long, default_value_t = 5)]
        max_size: usize,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [KindArg::Singletons, KindArg::Finite])]
        kinds: Vec<KindArg>,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Export structure files or Hasse diagrams.
    Export {
        #[command(subcommand)]
        target: ExportTarget,
    },
}

#[derive(Subcommand, Debug)]
enum ExportTarget {
    /// Write every built-in structure as a file into a directory.
    Catalog {
        /// Defaults to --catalog-dir.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write one structure as JSON, or as a DOT Hasse diagram.
    Structure {
        structure: String,
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Ctx {
    format: Format,
    cap: Capacity,
    store: Store,
}

impl Ctx {
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) {
        match self.format {
            Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("serializable report")),
            Format::Text => print!("{}", text()),
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Serialize)]
struct CheckReport {
    name: String,
    axioms: AxiomReport,
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    regime: Option<pframe::Regime>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn cmd_check(ctx: &Ctx, reference: &str) -> Result<ExitCode, CliError> {
    let (file, _) = ctx.store.load_file(reference)?;
    let sel = file.selection_function()?;
    let axioms = check_axioms(&sel);
    let validated = validate_sframe(&file.name, sel);
    let report = CheckReport {
        name: file.name.clone(),
        axioms,
        valid: validated.is_ok(),
        regime: validated.as_ref().ok().map(|l| l.regime()),
        error: validated.as_ref().err().map(|e| e.to_string()),
    };
    ctx.emit(&report, || {
        let mut s = format!("{} ({} elements)\n", report.name, file.elements.len());
        for v in &report.axioms.verdicts {
            s += &format!("  {:<6} {}", v.axiom, if v.holds { "holds" } else { "fails" });
            if let Some(w) = &v.witness {
                let sets: Vec<String> = w.iter().map(|set| format!("{{{}}}", set.join(","))).collect();
                s += &format!("  witness {}", sets.join(" "));
            }
            s.push('\n');
        }
        match (&report.regime, &report.error) {
            (Some(r), _) => s += &format!("valid S-frame, regime {r:?}\n"),
            (_, Some(e)) => s += &format!("invalid: {e}\n"),
            _ => {}
        }
        s
    });
    Ok(if report.valid { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

#[derive(Serialize, Deserialize)]
struct BuildReport {
    structure: String,
    what: String,
    size: usize,
    elements: Vec<String>,
    highlighted: BTreeMap<String, Vec<String>>,
    distributive: bool,
    summary: String,
    dot: String,
}

fn build_report(l: &Arc<SFrame>, what: What, cap: Capacity) -> Result<BuildReport, CliError> {
    Ok(match what {
        What::FreeFrame => {
            let ff = enumerate_free_frame(l, cap)?;
            let fr = ff.frame();
            let elements: Vec<String> = fr.elements().map(|i| fr.elem(i).to_string()).collect();
            let principal = ff.principal_indices().iter().map(|&i| elements[i].clone()).collect();
            BuildReport {
                structure: l.name().into(),
                what: "free-frame".into(),
                size: ff.size(),
                summary: format!("{} ideals, {} principal", ff.size(), ff.principal_count()),
                elements,
                highlighted: BTreeMap::from([("principal".to_string(), principal)]),
                distributive: true,
                dot: dot::free_frame_dot(&ff),
            }
        }
        What::Congruences => {
            let cf = enumerate_congruence_frame(l, cap)?;
            let elements: Vec<String> = cf.congruences().iter().map(|t| t.render(l)).collect();
            let pick = |ix: &[usize]| ix.iter().map(|&i| elements[i].clone()).collect::<Vec<_>>();
            let mut image: Vec<usize> = cf.nabla_indices().to_vec();
            image.sort_unstable();
            image.dedup();
            let mut summary = format!("{} congruences; ", cf.size());
            if image.len() == cf.size() {
                summary += "∇ surjective";
            } else {
                summary += &format!("∇ image size {}", image.len());
            }
            if !cf.is_distributive() {
                summary += "; not distributive";
            }
            BuildReport {
                structure: l.name().into(),
                what: "congruences".into(),
                size: cf.size(),
                highlighted: BTreeMap::from([
                    ("nabla".to_string(), pick(cf.nabla_indices())),
                    ("delta".to_string(), pick(cf.delta_indices())),
                ]),
                elements,
                distributive: cf.is_distributive(),
                summary,
                dot: dot::congruence_frame_dot(&cf),
            }
        }
    })
}

fn cmd_build(
    ctx: &Ctx,
    reference: &str,
    what: What,
    dot_path: Option<PathBuf>,
    json_path: Option<PathBuf>,
) -> Result<ExitCode, CliError> {
    let (file, source) = ctx.store.load_file(reference)?;
    let request = format!("{what:?}/{}/{}", ctx.cap.ideals, ctx.cap.congruences);
    let key = Store::cache_key(&source, &request);
    let report = match ctx.store.cached(&key).and_then(|text| serde_json::from_str::<BuildReport>(&text).ok()) {
        Some(r) => r,
        None => {
            let l = Arc::new(file.to_sframe()?);
            let r = build_report(&l, what, ctx.cap)?;
            ctx.store.store(&key, &serde_json::to_string(&r).expect("serializable report"))?;
            r
        }
    };
    if let Some(p) = dot_path {
        write_atomic(&p, &report.dot)?;
    }
    if let Some(p) = json_path {
        write_atomic(&p, &serde_json::to_string_pretty(&report).expect("serializable report"))?;
    }
    ctx.emit(&report, || {
        let mut s = format!("{}: {}\n", report.structure, report.summary);
        for (label, xs) in &report.highlighted {
            s += &format!("  {label}: {}\n", xs.join(" "));
        }
        s += &format!("  all: {}\n", report.elements.join(" "));
        s
    });
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct MapReport {
    domain: String,
    codomain: String,
    map: BTreeMap<String, String>,
    analysis: MapAnalysis,
}

fn cmd_map(ctx: &Ctx, input: &str, use_madden: bool, aspects: &[Aspect]) -> Result<ExitCode, CliError> {
    let h = if use_madden {
        let l = ctx.store.load(input)?;
        let m = madden(&l);
        m.quotient
            .map(|q| q.map)
            .ok_or_else(|| CliError::Usage(format!("the annihilator relation of {} is not an S-congruence", l.name())))?
    } else {
        let file = MapFile::parse(&store::read(std::path::Path::new(input))?)?;
        let dom = ctx.store.load(&file.domain)?;
        let cod = ctx.store.load(&file.codomain)?;
        file.resolve(&dom, &cod)?
    };
    let cf_l = enumerate_congruence_frame(h.domain(), ctx.cap)?;
    let cf_m = enumerate_congruence_frame(h.codomain(), ctx.cap)?;
    let analysis = closed_open_profile(&h, &cf_l, &cf_m);
    let report = MapReport {
        domain: h.domain().name().into(),
        codomain: h.codomain().name().into(),
        map: MapFile::from_map(&h).map,
        analysis,
    };
    let all = aspects.is_empty();
    let want = |a: Aspect| all || aspects.contains(&a);
    ctx.emit(&report, || {
        let a = &report.analysis;
        let mut s = format!("{} -> {}\n", report.domain, report.codomain);
        if want(Aspect::Adjoints) {
            s += &format!("  right adjoint: {}\n  left adjoint: {}\n", yes(a.right_adjoint), yes(a.left_adjoint));
        }
        if want(Aspect::Closed) {
            s += &format!("  closed: {}\n", yes(a.closed));
        }
        if want(Aspect::Open) {
            s += &format!("  open: {}\n", yes(a.open));
        }
        if want(Aspect::Dense) {
            s += &format!("  dense: {}\n  codense: {}\n", yes(a.dense), yes(a.codense));
        }
        for w in &a.witnesses {
            let relevant = match w.split(':').next().unwrap_or("") {
                "not closed" => want(Aspect::Closed),
                "not open" => want(Aspect::Open),
                _ => want(Aspect::Adjoints),
            };
            if relevant {
                s += &format!("  {w}\n");
            }
        }
        s
    });
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(ctx: &Ctx, reference: Option<&str>, catalog: bool, suite: SuiteArg) -> Result<ExitCode, CliError> {
    let mut structures = Vec::new();
    let mut skipped = Vec::new();
    match (reference, catalog) {
        (Some(r), false) => structures.push(ctx.store.load(r)?),
        (None, true) => {
            for file in ctx.store.catalog_files()? {
                match file.to_sframe() {
                    Ok(l) => structures.push(Arc::new(l)),
                    Err(e) => skipped.push(format!("{}: {e}", file.name)),
                }
            }
        }
        _ => return Err(CliError::Usage("give either a structure or --catalog".into())),
    }
    let suite = match suite {
        SuiteArg::Full => Suite::Full,
        SuiteArg::Base => Suite::Base,
        SuiteArg::All => Suite::All,
    };
    let verdicts: Vec<TheoremVerdict> = verify(&structures, ctx.cap, suite)?;
    let failed = has_failures(&verdicts);
    ctx.emit(&verdicts, || {
        let mut s = String::new();
        for l in &skipped {
            s += &format!("skipped {l}\n");
        }
        for v in &verdicts {
            let status = match (v.holds, v.asserted) {
                (true, _) => "holds",
                (false, true) => "FAILS",
                (false, false) => "fails (reported)",
            };
            s += &format!("{:<16} {} [{}] {:?}", status, v.theorem, v.instance, v.regime);
            if let Some(w) = &v.witness {
                s += &format!(": {w}");
            }
            s.push('\n');
        }
        let held = verdicts.iter().filter(|v| v.holds).count();
        s += &format!("{held}/{} verdicts hold; asserted failures: {}\n", verdicts.len(), yes(failed));
        s
    });
    Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn cmd_search(
    ctx: &Ctx,
    predicate: &str,
    max_size: usize,
    kinds: &[KindArg],
    limit: Option<usize>,
) -> Result<ExitCode, CliError> {
    let spec = SearchSpec {
        max_size,
        kinds: kinds
            .iter()
            .map(|k| match k {
                KindArg::Singletons => SelectionKind::Singletons,
                KindArg::Finite => SelectionKind::Finite,
            })
            .collect(),
        predicate: predicate.parse()?,
        limit,
    };
    let outcome: SearchOutcome = search(&spec, ctx.cap)?;
    ctx.emit(&outcome, || {
        let mut s = format!("{}: {}\n", outcome.predicate, outcome.summary());
        for w in &outcome.witnesses {
            let order: Vec<String> = w.structure.le.iter().map(|(x, y)| format!("{x}<{y}")).collect();
            s += &format!("  {} ({:?}): {}\n", w.name, w.regime, order.join(" "));
        }
        s
    });
    Ok(ExitCode::SUCCESS)
}

fn cmd_export(ctx: &Ctx, target: &ExportTarget) -> Result<ExitCode, CliError> {
    match target {
        ExportTarget::Catalog { out } => {
            let dir = out
                .clone()
                .or_else(|| ctx.store.dir().map(|d| d.to_path_buf()))
                .ok_or_else(|| CliError::Usage("export catalog needs --out or --catalog-dir".into()))?;
            let written = ctx.store.export_builtin(&dir)?;
            let names: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
            ctx.emit(&names, || names.iter().map(|n| format!("{n}\n")).collect());
        }
        ExportTarget::Structure { structure, dot, out } => {
            let l = ctx.store.load(structure)?;
            let text = if *dot {
                dot::hasse(&l, &[])
            } else {
                StructureFile::from_sframe(&l).to_json() + "\n"
            };
            match out {
                Some(p) => write_atomic(p, &text)?,
                None => print!("{text}"),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let ctx = Ctx {
        format: cli.format,
        cap: Capacity::uniform(cli.capacity),
        store: Store::new(cli.catalog_dir),
    };
    match &cli.command {
        Command::Check { structure } => cmd_check(&ctx, structure),
        Command::Build { structure, what, dot, json } => cmd_build(&ctx, structure, *what, dot.clone(), json.clone()),
        Command::Map { input, madden, analyze } => cmd_map(&ctx, input, *madden, analyze),
        Command::Verify { structure, catalog, suite } => cmd_verify(&ctx, structure.as_deref(), *catalog, *suite),
        Command::Search { predicate, max_size, kinds, limit } => cmd_search(&ctx, predicate, *max_size, kinds, *limit),
        Command::Export { target } => cmd_export(&ctx, target),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
