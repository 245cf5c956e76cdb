use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use frieze_core::error::FriezeError;
use frieze_core::folding::{enumerate_folded, folded_count_formula, FoldedType};
use frieze_core::frieze::Frieze;
use frieze_core::frieze_a::{apply_a_tag, enumerate_nonzero_a, nonzero_a_count, normalize_a, ATag};
use frieze_core::frieze_d::{
    apply_d_tag, classify_sign_configuration, enumerate_nonzero_d, enumerate_positive_d, nonzero_d_count,
    normalize_d, positive_d_count, DTag,
};
use frieze_core::labeling::SignLabeling;
use frieze_core::oracle::{
    bruteforce_a, bruteforce_d, diff_sets, enumerate_by_seeds, fan_bound_a, fan_bound_d, CartanType,
};
use frieze_core::polygon::{enumerate_triangulations, Triangulation};
use frieze_core::punctured::{enumerate_tagged_triangulations, TaggedTriangulation};
use frieze_core::render::{band_of, svg_frieze, svg_labeling, svg_tagged_triangulation, svg_triangulation};
use frieze_core::ring::Ring;
use frieze_core::verify::{self, Suite};

#[derive(Parser)]
#[command(name = "frieze", version, about = "Enumerate and verify non-zero integral friezes")]
struct Cli {
    /// Worker threads (0 = all cores)
    #[arg(long, global = true, env = "FRIEZE_JOBS", default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the triangulations of an n-gon or punctured n-gon
    Triangulations {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        punctured: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Write every frieze of a type and rank as JSON
    Enumerate {
        #[command(flatten)]
        target: Target,
        /// Only entrywise positive friezes
        #[arg(long)]
        positive: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Compare enumerated counts with the closed formulas
    Count {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = TableFormat::Table)]
        format: TableFormat,
        #[command(flatten)]
        out: Output,
    },
    /// Run verification suites
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Largest polygon for the admissible suite
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long)]
        quick: bool,
        /// Restrict the involution suite to one type (needs --rank)
        #[arg(long = "type")]
        kind: Option<String>,
        #[arg(long)]
        rank: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Cross-check an enumeration against an independent search
    Oracle {
        #[command(flatten)]
        target: Target,
        /// Structural enumeration to compare with (as written by `enumerate`)
        #[arg(long)]
        diff: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Classify a frieze and list its orbit under the sign group
    Orbit {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: Output,
    },
    /// Draw a frieze band, or an SVG of a frieze, triangulation or labeling
    Render {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = RenderFormat::Text)]
        format: RenderFormat,
        /// Periods of the band to print
        #[arg(long, default_value_t = 1)]
        periods: usize,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Clone)]
struct Target {
    /// A, B, C, D or G2
    #[arg(long = "type")]
    kind: String,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long, default_value = "Z")]
    ring: String,
    /// Norm bound for searches
    #[arg(long)]
    bound: Option<u64>,
}

#[derive(Args)]
struct Input {
    /// JSON file; `-` reads stdin
    #[arg(long)]
    input: PathBuf,
    /// Element to take when the file holds a list of friezes
    #[arg(long)]
    index: Option<usize>,
}

#[derive(Args)]
struct Output {
    /// Write here instead of stdout
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum TableFormat {
    Table,
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum RenderFormat {
    Text,
    Svg,
    Json,
}

enum Failure {
    /// exit 1
    Mismatch(String),
    /// exit 2
    Usage(String),
}

impl From<FriezeError> for Failure {
    fn from(e: FriezeError) -> Self {
        match e {
            FriezeError::InvalidInput(_)
            | FriezeError::LengthMismatch { .. }
            | FriezeError::RingMismatch(..)
            | FriezeError::ParityUndefined(..) => Failure::Usage(e.to_string()),
            _ => Failure::Mismatch(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult = Result<bool, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn emit(out: &Output, text: &str) -> Result<(), Failure> {
    match &out.out {
        Some(p) => fs::write(p, text)?,
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            // a closed pipe downstream is not an error of ours
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            r => r?,
        },
    }
    Ok(())
}

fn emit_json(out: &Output, v: &Value) -> Result<(), Failure> {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    emit(out, &s)
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())?
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// The single object an `--input` points at, unwrapping enumeration output.
fn read_item(input: &Input) -> Result<Value, Failure> {
    let v = read_json(&input.input)?;
    let list = match &v {
        Value::Array(items) => Some(items.clone()),
        Value::Object(o) if o.contains_key("friezes") => o["friezes"].as_array().cloned(),
        _ => None,
    };
    match (list, input.index) {
        (Some(items), i) => {
            let i = i.unwrap_or(0);
            items.get(i).cloned().ok_or_else(|| usage(format!("no element {i} in input ({} present)", items.len())))
        }
        (None, Some(_)) => Err(usage("--index given but the input is not a list")),
        (None, None) => Ok(v),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    A,
    D,
    Folded(FoldedType),
}

fn parse_target(t: &Target) -> Result<(Kind, usize, Ring), Failure> {
    let ring: Ring = t.ring.parse().map_err(|e: FriezeError| usage(e.to_string()))?;
    let kind = match t.kind.as_str() {
        "A" => Kind::A,
        "D" => Kind::D,
        other => Kind::Folded(other.parse().map_err(|e: FriezeError| usage(e.to_string()))?),
    };
    let rank = match (kind, t.rank) {
        (Kind::Folded(FoldedType::G2), None | Some(2)) => 2,
        (Kind::Folded(FoldedType::G2), Some(r)) => return Err(usage(format!("G2 has rank 2, not {r}"))),
        (_, Some(r)) => r,
        (_, None) => return Err(usage("--rank is required for this type")),
    };
    let min = match kind {
        Kind::A => 1,
        Kind::D | Kind::Folded(_) => 2,
    };
    if rank < min {
        return Err(usage(format!("rank must be at least {min}")));
    }
    if ring != Ring::Z && kind != Kind::A {
        return Err(usage("only type A can be explored over Zi or Zw"));
    }
    Ok((kind, rank, ring))
}

fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::A => "A",
        Kind::D => "D",
        Kind::Folded(f) => f.name(),
    }
}

fn cmd_triangulations(n: usize, punctured: bool, out: &Output) -> CliResult {
    let list: Vec<Value> = if punctured {
        enumerate_tagged_triangulations(n)?.iter().map(TaggedTriangulation::to_json).collect()
    } else {
        enumerate_triangulations(n)?.iter().map(Triangulation::to_json).collect()
    };
    emit_json(out, &json!({"n": n, "punctured": punctured, "count": list.len(), "triangulations": list}))?;
    Ok(true)
}

fn cmd_enumerate(target: &Target, positive: bool, out: &Output) -> CliResult {
    let (kind, rank, ring) = parse_target(target)?;
    let mut doc = json!({"type": kind_name(kind), "rank": rank, "ring": ring.name()});
    let items: Vec<Value> = match kind {
        Kind::A if ring != Ring::Z => {
            let bound = target.bound.ok_or_else(|| usage("--bound is required over Zi and Zw"))?;
            let found = bruteforce_a(rank + 3, &BigInt::from(bound), ring)?;
            doc["bound"] = json!(bound);
            doc["complete"] = json!(false);
            doc["disclaimer"] = json!(format!(
                "bounded search: every frieze whose fan arcs have norm at most {bound}; friezes outside the box are not listed"
            ));
            found.iter().filter(|f| !positive || f.is_positive()).map(|f| f.to_json()).collect()
        }
        Kind::A => enumerate_nonzero_a(rank + 3, ring)?
            .iter()
            .filter(|f| !positive || f.is_positive())
            .map(|f| f.to_json())
            .collect(),
        Kind::D if positive => enumerate_positive_d(rank)?.iter().map(|f| f.to_json()).collect(),
        Kind::D => enumerate_nonzero_d(rank)?.iter().map(|f| f.to_json()).collect(),
        Kind::Folded(f) => {
            let (s, fs) = enumerate_folded(f, rank)?;
            fs.iter().filter(|g| !positive || g.is_positive()).map(|g| g.to_json(&s)).collect()
        }
    };
    doc["count"] = json!(items.len());
    doc["friezes"] = Value::Array(items);
    emit_json(out, &doc)?;
    Ok(true)
}

struct CountRow {
    name: String,
    formula: u64,
    enumerated: u64,
}

fn cmd_count(target: &Target, format: TableFormat, out: &Output) -> CliResult {
    let (kind, rank, ring) = parse_target(target)?;
    if ring != Ring::Z {
        return Err(usage("counts are only known over Z"));
    }
    let name = format!("{}{rank}", kind_name(kind));
    let rows = match kind {
        Kind::A => {
            let n = rank + 3;
            let all = enumerate_nonzero_a(n, ring)?;
            vec![CountRow { name, formula: nonzero_a_count(n), enumerated: all.len() as u64 }]
        }
        Kind::D => {
            let all = enumerate_nonzero_d(rank)?;
            let pos = all.iter().filter(|f| f.is_positive()).count() as u64;
            vec![
                CountRow { name: name.clone(), formula: nonzero_d_count(rank), enumerated: all.len() as u64 },
                CountRow { name: format!("{name} positive"), formula: positive_d_count(rank), enumerated: pos },
            ]
        }
        Kind::Folded(f) => {
            let (_, fs) = enumerate_folded(f, rank)?;
            vec![CountRow { name, formula: folded_count_formula(f, rank)?, enumerated: fs.len() as u64 }]
        }
    };
    let ok = rows.iter().all(|r| r.formula == r.enumerated);
    let verdict = |r: &CountRow| if r.formula == r.enumerated { "PASS" } else { "FAIL" };
    let text = match format {
        TableFormat::Csv => {
            let mut s = String::from("family,formula,enumerated,match\n");
            for r in &rows {
                s += &format!("{},{},{},{}\n", r.name, r.formula, r.enumerated, r.formula == r.enumerated);
            }
            s
        }
        TableFormat::Table => {
            let mut s = format!("{:<14} {:>10} {:>10}  result\n", "family", "formula", "enumerated");
            for r in &rows {
                s += &format!("{:<14} {:>10} {:>10}  {}\n", r.name, r.formula, r.enumerated, verdict(r));
            }
            s
        }
        TableFormat::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|r| json!({"family": r.name, "formula": r.formula, "enumerated": r.enumerated, "match": r.formula == r.enumerated}))
                .collect();
            serde_json::to_string_pretty(&json!({"pass": ok, "rows": v})).expect("serialisable") + "\n"
        }
    };
    emit(out, &text)?;
    Ok(ok)
}

fn cmd_verify(suite: &str, max_n: Option<usize>, quick: bool, kind: Option<&str>, rank: Option<usize>, out: &Output) -> CliResult {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse().map_err(|e: FriezeError| usage(e.to_string()))?]
    };
    let only = match (kind, rank) {
        (None, None) => None,
        (Some(k @ ("A" | "D")), Some(r)) => Some((k.chars().next().unwrap(), r)),
        (Some(k), Some(_)) => return Err(usage(format!("--type {k} is not supported here; use A or D"))),
        _ => return Err(usage("--type and --rank go together")),
    };
    let report = verify::run(&suites, verify::Options { quick, max_n, only })?;
    emit_json(out, &report.to_json())?;
    Ok(report.pass())
}

fn cmd_oracle(target: &Target, diff: Option<&Path>, out: &Output) -> CliResult {
    let (kind, rank, ring) = parse_target(target)?;
    let bound = target.bound.map(BigInt::from);
    let structural_from_file = |kind: &str| -> Result<Option<Vec<Frieze>>, Failure> {
        let Some(p) = diff else { return Ok(None) };
        let v = read_json(p)?;
        let items = v.get("friezes").and_then(Value::as_array).or(v.as_array()).ok_or_else(|| usage("--diff file holds no friezes"))?;
        let fs = items.iter().map(Frieze::from_json).collect::<Result<Vec<_>, _>>()?;
        if fs.iter().any(|f| f.kind() != kind) {
            return Err(usage("--diff file holds friezes of another type"));
        }
        Ok(Some(fs))
    };
    let report = match kind {
        Kind::A => {
            let n = rank + 3;
            let structural = match structural_from_file("A")? {
                Some(fs) => fs,
                None if ring == Ring::Z => enumerate_nonzero_a(n, ring)?.into_iter().map(Frieze::A).collect(),
                None => return Err(usage("over Zi or Zw pass --diff with the set to compare")),
            };
            let m = match bound {
                Some(m) => m,
                None => fan_bound_a(&structural.iter().filter_map(|f| match f { Frieze::A(a) => Some(a.clone()), _ => None }).collect::<Vec<_>>()),
            };
            let oracle: Vec<Frieze> = bruteforce_a(n, &m, ring)?.into_iter().map(Frieze::A).collect();
            serde_json::to_value(diff_sets(&structural, &oracle, &m)).expect("serialisable")
        }
        Kind::D => {
            let structural = match structural_from_file("D")? {
                Some(fs) => fs,
                None => enumerate_nonzero_d(rank)?.into_iter().map(Frieze::D).collect(),
            };
            let m = match bound {
                Some(m) => m,
                None => fan_bound_d(&structural.iter().filter_map(|f| match f { Frieze::D(d) => Some(d.clone()), _ => None }).collect::<Vec<_>>()),
            };
            let oracle: Vec<Frieze> = bruteforce_d(rank, &m)?.into_iter().map(Frieze::D).collect();
            serde_json::to_value(diff_sets(&structural, &oracle, &m)).expect("serialisable")
        }
        Kind::Folded(f) => {
            if diff.is_some() {
                return Err(usage("--diff applies to types A and D"));
            }
            let cartan = match f {
                FoldedType::B => CartanType::B,
                FoldedType::C => CartanType::C,
                FoldedType::G2 => CartanType::G2,
            };
            let (_, fs) = enumerate_folded(f, rank)?;
            let m = bound.unwrap_or_else(|| {
                fs.iter().flat_map(|g| g.values.iter().map(|x| x.norm())).max().unwrap_or_else(|| BigInt::from(1))
            });
            let seeds = enumerate_by_seeds(cartan, rank, &m, Ring::Z)?;
            json!({
                "pass": seeds.count() == fs.len(),
                "structural": fs.len(),
                "by_seeds": seeds.count(),
                "bound": m.to_string(),
                "missing": [],
                "extra": [],
            })
        }
    };
    let pass = report["pass"].as_bool().unwrap_or(false);
    emit_json(out, &report)?;
    Ok(pass)
}

/// Keeps the first group element reaching each frieze.
fn distinct_images(orbit: Vec<Value>) -> Vec<Value> {
    let mut seen = std::collections::BTreeSet::new();
    orbit.into_iter().filter(|e| seen.insert(e["frieze"].to_string())).collect()
}

fn cmd_orbit(input: &Input, out: &Output) -> CliResult {
    let f = Frieze::from_json(&read_item(input)?)?;
    if !f.is_valid()? {
        return Err(usage("input is not a frieze: a relation fails"));
    }
    let report = match &f {
        Frieze::A(a) => {
            let (p, tag) = normalize_a(a)?;
            let orbit = [ATag::Identity, ATag::Sigma]
                .iter()
                .map(|&t| Ok(json!({"tag": format!("{t:?}").to_lowercase(), "frieze": apply_a_tag(&p, t)?.to_json()})))
                .collect::<Result<Vec<_>, FriezeError>>()?;
            let orbit = distinct_images(orbit);
            json!({
                "type": "A",
                "n": a.n(),
                "tag": format!("{tag:?}").to_lowercase(),
                "positive": p.to_json(),
                "orbit_size": orbit.len(),
                "orbit": orbit,
            })
        }
        Frieze::D(d) => {
            let config = classify_sign_configuration(d)?;
            let (p, tag) = normalize_d(d)?;
            let orbit = DTag::group(d.n())
                .iter()
                .map(|&t| Ok(json!({"tag": t.name(), "frieze": apply_d_tag(&p, t)?.to_json()})))
                .collect::<Result<Vec<_>, FriezeError>>()?;
            let orbit = distinct_images(orbit);
            json!({
                "type": "D",
                "n": d.n(),
                "category": config.category,
                "tag": tag.name(),
                "positive": p.to_json(),
                "orbit_size": orbit.len(),
                "orbit": orbit,
            })
        }
    };
    emit_json(out, &report)?;
    Ok(true)
}

fn cmd_render(input: &Input, format: RenderFormat, periods: usize, out: &Output) -> CliResult {
    let v = read_item(input)?;
    if v.get("type").is_some() {
        let f = Frieze::from_json(&v)?;
        match format {
            RenderFormat::Svg => emit(out, &svg_frieze(&f)?)?,
            RenderFormat::Text => {
                let b = band_of(&f).map_err(|e| usage(e.to_string()))?;
                emit(out, &b.to_text(periods))?
            }
            RenderFormat::Json => {
                let b = band_of(&f).map_err(|e| usage(e.to_string()))?;
                emit_json(out, &b.to_json())?
            }
        }
        return Ok(true);
    }
    if format != RenderFormat::Svg {
        return Err(usage("triangulations and labelings render as --format svg"));
    }
    let svg = if v.get("signs").is_some() {
        svg_labeling(&SignLabeling::from_json(&v)?)
    } else if v.get("punctured").and_then(Value::as_bool) == Some(true) {
        svg_tagged_triangulation(&TaggedTriangulation::from_json(&v)?)
    } else {
        svg_triangulation(&Triangulation::from_json(&v)?)
    };
    emit(out, &svg)?;
    Ok(true)
}

fn run(cli: Cli) -> CliResult {
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
            .map_err(|e| usage(e.to_string()))?;
    }
    match &cli.command {
        Command::Triangulations { n, punctured, out } => cmd_triangulations(*n, *punctured, out),
        Command::Enumerate { target, positive, out } => cmd_enumerate(target, *positive, out),
        Command::Count { target, format, out } => cmd_count(target, *format, out),
        Command::Verify { suite, max_n, quick, kind, rank, out } => {
            cmd_verify(suite, *max_n, *quick, kind.as_deref(), *rank, out)
        }
        Command::Oracle { target, diff, out } => cmd_oracle(target, diff.as_deref(), out),
        Command::Orbit { input, out } => cmd_orbit(input, out),
        Command::Render { input, format, periods, out } => cmd_render(input, *format, *periods, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Mismatch(msg)) => {
            eprintln!("frieze: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("frieze: {msg}");
            ExitCode::from(2)
        }
    }
}
