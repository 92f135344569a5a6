//! Command-line frontend: every library capability as a subcommand, with
//! table, b-file, JSON and DOT outputs.
//!
//! Exit codes: 0 success, 1 invalid flags or inputs, 2 certification
//! refusal (cutoff below the certified bound), 3 resource-guard refusal.
//! All integers inside JSON are decimal strings so values beyond 2^53
//! survive every JSON parser.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::json;

use chutes::bounds::{self, BoundQuery};
use chutes::modgraph;
use chutes::paths::{self, PathError, ProblemParams};
use chutes::rows::{self, RowLimits, RowsError};

/// Largest witness (in edges) the CLI will expand into a label string.
const MAX_RENDERED_EDGES: u64 = 1_000_000;

#[derive(Parser)]
#[command(
    name = "chutes",
    version,
    about = "Row sequences, certified first appearances and power-map graphs \
             for chutes-and-ladders problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate rows and print them one per line
    Rows(RowsCmd),
    /// Flatten rows into the triangle sequence, row-major
    Triangle(TriangleCmd),
    /// Certified first appearances of target integers
    First(FirstCmd),
    /// Cutoff bound for paths between two vertices
    Bound(BoundCmd),
    /// Explicit connecting path between two vertices (d=5, e=2)
    Path(PathCmd),
    /// Power-map graph modulo a prime: components, star shape, DOT export
    Modgraph(ModgraphCmd),
    /// Is the solution set of (d, e, r) all non-multiples of d?
    Maximal(MaximalCmd),
    /// Structural facts about p-1: prime-power base, squarefreeness
    Classify(ClassifyCmd),
}

#[derive(Args)]
struct ParamOpts {
    /// Additive shift d of the up-rule (x+d)^e
    #[arg(short = 'd', long = "shift", default_value_t = 5)]
    d: u64,
    /// Exponent e of the up- and down-rules
    #[arg(short = 'e', long = "exponent", default_value_t = 2)]
    e: u32,
    /// Root r seeding row 1
    #[arg(short = 'r', long = "root", default_value_t = 2)]
    r: u64,
}

impl ParamOpts {
    fn params(&self) -> Result<ProblemParams, CliError> {
        ProblemParams::new(self.d, self.e, self.r).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Args)]
struct OutputOpts {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write to this file instead of standard output; relative paths land
    /// in $CHUTES_OUTPUT_DIR when it is set
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Bfile,
    Json,
    Dot,
}

#[derive(Args)]
struct RowsCmd {
    #[command(flatten)]
    params: ParamOpts,
    /// How many rows to generate
    #[arg(short = 'n', long = "count")]
    count: u32,
    /// Discard up-rule results above this value
    #[arg(long, value_parser = parse_biguint)]
    cutoff: Option<BigUint>,
    /// Override the uncapped row-depth guard
    #[arg(long, default_value_t = 8)]
    row_limit: u32,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct TriangleCmd {
    #[command(flatten)]
    params: ParamOpts,
    #[arg(short = 'n', long = "count")]
    count: u32,
    #[arg(long, value_parser = parse_biguint)]
    cutoff: Option<BigUint>,
    #[arg(long, default_value_t = 8)]
    row_limit: u32,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct FirstCmd {
    #[command(flatten)]
    params: ParamOpts,
    /// Targets: comma-separated integers and inclusive ranges, e.g. 2..99
    #[arg(long, value_parser = parse_targets, value_delimiter = None)]
    targets: Targets,
    /// Search this many rows
    #[arg(long, default_value_t = 150)]
    max_rows: u32,
    /// Override the automatically certified cutoff (must not be below it)
    #[arg(long, value_parser = parse_biguint)]
    cutoff: Option<BigUint>,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct BoundCmd {
    #[command(flatten)]
    params: ParamOpts,
    /// Path start vertex
    #[arg(long, value_parser = parse_biguint)]
    x: BigUint,
    /// Path end vertex
    #[arg(long, value_parser = parse_biguint)]
    y: BigUint,
    /// Half the path-length budget: paths of at most 2*half-length edges
    #[arg(long)]
    half_length: u64,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct PathCmd {
    #[command(flatten)]
    params: ParamOpts,
    #[arg(long, value_parser = parse_biguint)]
    from: BigUint,
    #[arg(long, value_parser = parse_biguint)]
    to: BigUint,
    /// Output format (the witness itself is a JSON object)
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ModgraphCmd {
    /// Prime modulus
    #[arg(short = 'p', long)]
    prime: u64,
    /// Exponent of the power map
    #[arg(short = 'e', long, default_value_t = 2)]
    exponent: u64,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct MaximalCmd {
    #[command(flatten)]
    params: ParamOpts,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct ClassifyCmd {
    /// Prime to classify
    #[arg(short = 'p', long)]
    prime: u64,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Clone)]
struct Targets(Vec<BigUint>);

fn parse_biguint(s: &str) -> Result<BigUint, String> {
    BigUint::from_str(s).map_err(|_| format!("{s:?} is not a nonnegative integer"))
}

fn parse_targets(s: &str) -> Result<Targets, String> {
    let mut targets = Vec::new();
    for item in s.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        if let Some((lo, hi)) = item.split_once("..") {
            let lo: u64 = lo
                .trim()
                .parse()
                .map_err(|_| format!("bad range start {lo:?}"))?;
            let hi: u64 = hi
                .trim()
                .parse()
                .map_err(|_| format!("bad range end {hi:?}"))?;
            if lo > hi {
                return Err(format!("empty range {item:?}"));
            }
            targets.extend((lo..=hi).map(BigUint::from));
        } else {
            targets.push(parse_biguint(item)?);
        }
    }
    if targets.is_empty() {
        return Err("no targets given".to_string());
    }
    let two = BigUint::from(2u32);
    if let Some(bad) = targets.iter().find(|t| **t < two) {
        return Err(format!("target {bad} is below 2"));
    }
    targets.sort();
    targets.dedup();
    Ok(Targets(targets))
}

enum CliError {
    Usage(String),
    Certification(String),
    Resource(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Certification(_) => 2,
            CliError::Resource(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Certification(m) | CliError::Resource(m) => m,
        }
    }
}

impl From<RowsError> for CliError {
    fn from(e: RowsError) -> Self {
        match e {
            RowsError::CutoffTooSmall { .. } => CliError::Certification(e.to_string()),
            RowsError::UncappedDepth { .. } | RowsError::RowTooWide { .. } => {
                CliError::Resource(e.to_string())
            }
        }
    }
}

impl From<PathError> for CliError {
    fn from(e: PathError) -> Self {
        match e {
            PathError::BeltTooLong(_) => CliError::Resource(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<modgraph::ModGraphError> for CliError {
    fn from(e: modgraph::ModGraphError) -> Self {
        match e {
            modgraph::ModGraphError::ModulusTooLarge(..) => CliError::Resource(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                std::process::exit(0);
            }
            let _ = e.print();
            std::process::exit(1);
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Rows(cmd) => run_rows(cmd),
        Command::Triangle(cmd) => run_triangle(cmd),
        Command::First(cmd) => run_first(cmd),
        Command::Bound(cmd) => run_bound(cmd),
        Command::Path(cmd) => run_path(cmd),
        Command::Modgraph(cmd) => run_modgraph(cmd),
        Command::Maximal(cmd) => run_maximal(cmd),
        Command::Classify(cmd) => run_classify(cmd),
    }
}

fn limits_with(row_limit: u32) -> RowLimits {
    RowLimits {
        max_uncapped_rows: row_limit,
        ..RowLimits::default()
    }
}

fn run_rows(cmd: RowsCmd) -> Result<(), CliError> {
    let params = cmd.params.params()?;
    if cmd.count == 0 {
        return Err(CliError::Usage("row count must be at least 1".into()));
    }
    let rows = rows::generate_rows(
        &params,
        cmd.count,
        cmd.cutoff.as_ref(),
        &limits_with(cmd.row_limit),
    )?;
    let rendered = match cmd.out.format {
        Format::Table => {
            let mut out = String::new();
            for row in &rows {
                let entries: Vec<String> = row.entries().iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "{}: {}", row.index(), entries.join(" "));
            }
            out
        }
        Format::Json => {
            let rows_json: Vec<_> = rows
                .iter()
                .map(|row| {
                    json!({
                        "index": row.index().to_string(),
                        "entries": row.entries().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            pretty(&json!({
                "d": params.d().to_string(),
                "e": params.e().to_string(),
                "r": params.r().to_string(),
                "rows": rows_json,
            }))
        }
        _ => return Err(format_unsupported("rows", "table or json")),
    };
    emit(&cmd.out, &rendered)
}

fn run_triangle(cmd: TriangleCmd) -> Result<(), CliError> {
    let params = cmd.params.params()?;
    if cmd.count == 0 {
        return Err(CliError::Usage("row count must be at least 1".into()));
    }
    let terms = rows::emit_triangle(
        &params,
        cmd.count,
        cmd.cutoff.as_ref(),
        &limits_with(cmd.row_limit),
    )?;
    let rendered = match cmd.out.format {
        Format::Table => {
            let mut out = String::new();
            for t in &terms {
                let _ = writeln!(out, "{t}");
            }
            out
        }
        Format::Bfile => {
            let mut out = String::new();
            for (n, t) in terms.iter().enumerate() {
                let _ = writeln!(out, "{} {}", n + 1, t);
            }
            out
        }
        Format::Json => pretty(&json!({
            "terms": terms.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        })),
        Format::Dot => return Err(format_unsupported("triangle", "table, bfile or json")),
    };
    emit(&cmd.out, &rendered)
}

fn run_first(cmd: FirstCmd) -> Result<(), CliError> {
    let params = cmd.params.params()?;
    if cmd.max_rows == 0 {
        return Err(CliError::Usage("max-rows must be at least 1".into()));
    }

    // when the instance is maximal, multiples of d are provably never
    // members; drop them rather than searching for values that cannot occur
    let mut targets = cmd.targets.0.clone();
    if modgraph::is_maximal(&params).maximal {
        let d = BigUint::from(params.d());
        targets.retain(|t| (t % &d) != BigUint::from(0u32));
    }
    if targets.is_empty() {
        return Err(CliError::Usage(
            "every requested target is a multiple of d, hence never a member".into(),
        ));
    }

    let certified = rows::required_cutoff(&params, &targets, cmd.max_rows);
    let cutoff = cmd.cutoff.clone().unwrap_or_else(|| certified.clone());
    let report = rows::first_appearances(&params, &targets, cmd.max_rows, &cutoff)?;

    let rendered = match cmd.out.format {
        Format::Table => {
            let mut out = String::new();
            for fa in report.found.values() {
                let _ = writeln!(out, "{} {}", fa.target, fa.row_index);
            }
            for t in &report.absent {
                let _ = writeln!(out, "# {t}: not found within {} rows", cmd.max_rows);
            }
            out
        }
        Format::Bfile => {
            let mut out = String::new();
            for fa in report.found.values() {
                let _ = writeln!(out, "{} {}", fa.target, fa.row_index);
            }
            out
        }
        Format::Json => {
            let found: Vec<_> = report
                .found
                .values()
                .map(|fa| {
                    json!({
                        "target": fa.target.to_string(),
                        "row": fa.row_index.to_string(),
                        "witness": witness_json(&fa.witness),
                    })
                })
                .collect();
            pretty(&json!({
                "cutoff": cutoff.to_string(),
                "max_rows": cmd.max_rows.to_string(),
                "found": found,
                "absent": report.absent.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            }))
        }
        Format::Dot => return Err(format_unsupported("first", "table, bfile or json")),
    };
    emit(&cmd.out, &rendered)
}

fn witness_json(witness: &paths::PathWitness) -> serde_json::Value {
    json!({
        "start": witness.start().to_string(),
        "labels": witness.labels().to_string(),
    })
}

fn run_bound(cmd: BoundCmd) -> Result<(), CliError> {
    let params = cmd.params.params()?;
    let query = BoundQuery::new(cmd.x.clone(), cmd.y.clone(), cmd.half_length, params)
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let (branches, max): (Vec<(&str, BigUint)>, BigUint) = if params.d() == 5 && params.e() == 2 {
        let b = bounds::putnam_bound_branches(&query);
        (
            vec![
                ("interior", b.interior),
                ("start-step", b.start_step),
                ("end-step", b.end_step),
            ],
            b.max,
        )
    } else {
        let b = bounds::general_bound_branches(&query);
        (
            vec![
                ("belt-through-power", b.belt_through_power),
                ("belt-without-power", b.belt_without_power),
                ("start-step", b.start_step),
                ("end-step", b.end_step),
            ],
            b.max,
        )
    };

    let rendered = match cmd.out.format {
        Format::Table => {
            let mut out = String::new();
            for (name, value) in &branches {
                let _ = writeln!(out, "{name}: {value}");
            }
            let _ = writeln!(out, "max: {max}");
            out
        }
        Format::Json => {
            let mut map = serde_json::Map::new();
            for (name, value) in &branches {
                map.insert((*name).to_string(), json!(value.to_string()));
            }
            pretty(&json!({ "branches": map, "max": max.to_string() }))
        }
        _ => return Err(format_unsupported("bound", "table or json")),
    };
    emit(&cmd.out, &rendered)
}

fn run_path(cmd: PathCmd) -> Result<(), CliError> {
    let params = cmd.params.params()?;
    let witness = paths::connecting_path(&cmd.from, &cmd.to, &params)?;
    let end = paths::validate_path(&witness, &params)?;
    let segments = paths::decompose(witness.labels());

    if witness.edge_count() > MAX_RENDERED_EDGES {
        return Err(CliError::Resource(format!(
            "the connecting path has {} edges, too many to print (limit {})",
            witness.edge_count(),
            MAX_RENDERED_EDGES
        )));
    }

    let rendered = match cmd.format {
        Format::Json => {
            let segs: Vec<_> = segments
                .iter()
                .map(|s| json!({"kind": format!("{:?}", s.kind), "repeat": s.repeat.to_string()}))
                .collect();
            pretty(&json!({
                "witness": witness_json(&witness),
                "segments": segs,
                "end": end.to_string(),
                "edges": witness.edge_count().to_string(),
            }))
        }
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "start: {}", witness.start());
            let _ = writeln!(out, "end: {end}");
            let _ = writeln!(out, "edges: {}", witness.edge_count());
            let segs: Vec<String> = segments.iter().map(|s| s.to_string()).collect();
            let _ = writeln!(out, "segments: {}", segs.join(" "));
            out
        }
        _ => return Err(format_unsupported("path", "json or table")),
    };
    write_out(&cmd.output, &rendered)
}

fn run_modgraph(cmd: ModgraphCmd) -> Result<(), CliError> {
    let analysis = modgraph::analyze(cmd.prime, cmd.exponent)?;
    let rendered = match cmd.out.format {
        Format::Dot => modgraph::build_power_graph(cmd.prime, cmd.exponent)?.to_dot(),
        Format::Json => pretty(&json!({
            "p": analysis.p.to_string(),
            "e": analysis.e.to_string(),
            "rho": analysis.rho.to_string(),
            "formula_count": analysis.formula_count.to_string(),
            "traversal_count": analysis.traversal_count.to_string(),
            "is_connected": analysis.is_connected,
            "is_star": analysis.is_star,
        })),
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "p: {}", analysis.p);
            let _ = writeln!(out, "e: {}", analysis.e);
            let _ = writeln!(out, "rho: {}", analysis.rho);
            let _ = writeln!(out, "components (formula): {}", analysis.formula_count);
            let _ = writeln!(out, "components (traversal): {}", analysis.traversal_count);
            let _ = writeln!(out, "connected: {}", analysis.is_connected);
            let _ = writeln!(out, "star: {}", analysis.is_star);
            out
        }
        Format::Bfile => return Err(format_unsupported("modgraph", "table, json or dot")),
    };
    emit(&cmd.out, &rendered)
}

fn run_maximal(cmd: MaximalCmd) -> Result<(), CliError> {
    let params = cmd.params.params()?;
    let verdict = modgraph::is_maximal(&params);
    let rendered = match cmd.out.format {
        Format::Table => format!("{verdict}\n"),
        Format::Json => pretty(&json!({
            "d": params.d().to_string(),
            "e": params.e().to_string(),
            "r": params.r().to_string(),
            "maximal": verdict.maximal,
            "reason": verdict.failure.as_ref().map(|f| f.to_string()),
        })),
        _ => return Err(format_unsupported("maximal", "table or json")),
    };
    emit(&cmd.out, &rendered)
}

fn run_classify(cmd: ClassifyCmd) -> Result<(), CliError> {
    let c = modgraph::classify_prime(cmd.prime)?;
    let rendered = match cmd.out.format {
        Format::Table => {
            let base = c
                .fermat_like_base
                .map(|q| q.to_string())
                .unwrap_or_else(|| "none".to_string());
            format!(
                "p: {}\nfermat-like base: {}\np-1 squarefree: {}\n",
                cmd.prime, base, c.p_minus_1_squarefree
            )
        }
        Format::Json => pretty(&json!({
            "p": cmd.prime.to_string(),
            "fermat_like_base": c.fermat_like_base.map(|q| q.to_string()),
            "p_minus_1_squarefree": c.p_minus_1_squarefree,
        })),
        _ => return Err(format_unsupported("classify", "table or json")),
    };
    emit(&cmd.out, &rendered)
}

fn format_unsupported(command: &str, supported: &str) -> CliError {
    CliError::Usage(format!("`{command}` supports {supported} output"))
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON rendering cannot fail");
    s.push('\n');
    s
}

fn emit(out: &OutputOpts, content: &str) -> Result<(), CliError> {
    write_out(&out.output, content)
}

fn write_out(output: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match output {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            let path = if path.is_relative() {
                match std::env::var_os("CHUTES_OUTPUT_DIR") {
                    Some(dir) => PathBuf::from(dir).join(path),
                    None => path.clone(),
                }
            } else {
                path.clone()
            };
            std::fs::write(&path, content)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
        }
    }
}
