use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use schottky_core::config::{
    self, DEFAULT_BOUND, DEFAULT_POINT_CAP, DEFAULT_TYPE_CAP, DEFAULT_WORD_CAP,
};
use schottky_core::enumeration::{count_report, enumerate_types, m_g_oracle, Signature};
use schottky_core::freegroup::{rho_diagnostics, rho_from_signature, FreeWord};
use schottky_core::io::{marked_to_json, parse_marked, point_json};
use schottky_core::par::Execution;
use schottky_core::realstructures::{
    conjugacy_experiment, genus2_classes, structure_of_signature_g2, DEFAULT_SEARCH_BUDGET,
    GENUS2_TABLE,
};
use schottky_core::schottky::sample_classical;
use schottky_core::{verify, Error, SpherePoint};

#[derive(Parser)]
#[command(
    name = "schottky",
    version,
    about = "Extended Schottky groups: counts, types, real structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Numeric tolerance, in (0, 1e-3).
    #[arg(long, global = true, default_value_t = config::DEFAULT_TOL)]
    tol: f64,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest rank accepted by enumeration commands.
    #[arg(long, global = true, default_value_t = DEFAULT_BOUND)]
    bound: u32,
    /// Add brute-force columns where available.
    #[arg(long, global = true)]
    oracle: bool,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run on a single thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Number of topological types for each rank in a range such as `0..4`.
    Count { range: String },
    /// List the topological types of a rank.
    Types { g: u32 },
    /// Outer automorphism induced by a signature such as "(0,0,0,2,0;)".
    Rho { signature: String },
    /// Normalized tuple and marked-space coordinates of a marked-group file.
    Zeta { file: PathBuf },
    /// Limit-set sample of a marked-group file.
    Limitset {
        file: PathBuf,
        /// Maximal word length.
        #[arg(long, default_value_t = DEFAULT_WORD_CAP)]
        depth: usize,
        /// Maximal number of words.
        #[arg(long, default_value_t = DEFAULT_POINT_CAP)]
        cap: usize,
    },
    /// The four real structures of rank 2 and the signature table.
    G2,
    /// Conjugacy evidence for the real structures induced by rank-g signatures.
    Conjugacy {
        g: u32,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: usize,
    },
    /// Random classical marked group, in the marked-group file format.
    Sample { g: usize },
    /// Run the acceptance checks; exit status 2 if any fails.
    Verify,
}

enum Failure {
    Usage(String),
    Domain(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(msg) => Failure::Usage(msg),
            other => Failure::Domain(other),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(text) => match emit(&cli, &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(msg) => {
                eprintln!("{msg}");
                ExitCode::from(1)
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Domain(e)) => {
            println!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::from(1)
        }
        Err(Failure::Verification(text)) => {
            let _ = emit(&cli, &text);
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), String> {
    match &cli.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    config::set_tolerance(cli.tol)?;
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match &cli.command {
        Command::Count { range } => cmd_count(cli, range, exec),
        Command::Types { g } => cmd_types(cli, *g),
        Command::Rho { signature } => cmd_rho(cli, signature),
        Command::Zeta { file } => cmd_zeta(cli, file),
        Command::Limitset { file, depth, cap } => cmd_limitset(cli, file, *depth, *cap, exec),
        Command::G2 => cmd_g2(cli),
        Command::Conjugacy { g, budget } => cmd_conjugacy(cli, *g, *budget),
        Command::Sample { g } => cmd_sample(cli, *g, exec),
        Command::Verify => cmd_verify(cli, exec),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn require(cli: &Cli, allowed: &[Format]) -> Result<(), Failure> {
    if allowed.contains(&cli.format) {
        Ok(())
    } else {
        Err(Failure::Usage(
            "output format not available for this command".into(),
        ))
    }
}

fn parse_range(text: &str) -> Result<(u32, u32), Failure> {
    let bad = || {
        Failure::Usage(format!(
            "expected a rank or a range like 0..4, got {text:?}"
        ))
    };
    let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad());
    match text.split_once("..") {
        Some((lo, hi)) => {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let (lo, hi) = (num(lo)?, num(hi)?);
            if lo > hi {
                return Err(bad());
            }
            Ok((lo, hi))
        }
        None => num(text).map(|g| (g, g)),
    }
}

fn cmd_count(cli: &Cli, range: &str, exec: Execution) -> Result<String, Failure> {
    require(cli, &[Format::Json, Format::Csv])?;
    let (lo, hi) = parse_range(range)?;
    if hi > cli.bound {
        return Err(Error::BoundExceeded {
            requested: hi,
            bound: cli.bound,
        }
        .into());
    }
    let mut rows = Vec::new();
    let mut mismatch = false;
    for g in lo..=hi {
        let r = count_report(g);
        let mut row = json!({ "g": g, "m_g": r.m_g, "g0": r.g0, "real_part": r.real_part });
        if cli.oracle {
            let oracle = m_g_oracle(g, cli.bound, exec)?.to_string();
            let matches = oracle == r.m_g;
            mismatch |= !matches;
            row["oracle"] = json!(oracle);
            row["match"] = json!(matches);
        }
        rows.push((row, r));
    }
    let text = match cli.format {
        Format::Csv => {
            let mut s = String::from(if cli.oracle {
                "g,m_g,g0,real_part,oracle,match\n"
            } else {
                "g,m_g,g0,real_part\n"
            });
            for (row, _) in &rows {
                let cols = ["g", "m_g", "g0", "real_part", "oracle", "match"];
                let vals: Vec<String> = cols
                    .iter()
                    .filter_map(|c| row.get(*c))
                    .map(|v| {
                        v.as_str()
                            .map(str::to_string)
                            .unwrap_or_else(|| v.to_string())
                    })
                    .collect();
                s.push_str(&vals.join(","));
                s.push('\n');
            }
            s
        }
        _ => {
            let rows: Vec<Value> = rows
                .into_iter()
                .map(|(mut row, r)| {
                    row["delta_set"] = serde_json::to_value(&r.delta_set).expect("serializable");
                    row
                })
                .collect();
            pretty(&Value::Array(rows))
        }
    };
    if mismatch {
        Err(Failure::Verification(text))
    } else {
        Ok(text)
    }
}

fn cmd_types(cli: &Cli, g: u32) -> Result<String, Failure> {
    require(cli, &[Format::Json, Format::Csv])?;
    let types = enumerate_types(g, cli.bound, DEFAULT_TYPE_CAP)?;
    Ok(match cli.format {
        Format::Csv => {
            let mut s = String::from("signature,factors\n");
            for t in &types {
                let _ = writeln!(s, "\"{}\",{}", t.signature(), t.describe());
            }
            s
        }
        _ => {
            let list: Vec<Value> = types
                .iter()
                .map(|t| {
                    json!({
                        "signature": t.signature().to_string(),
                        "factors": t.describe(),
                        "real_factors": t.real_factors,
                    })
                })
                .collect();
            pretty(&json!({ "g": g, "count": types.len(), "types": list }))
        }
    })
}

fn cmd_rho(cli: &Cli, text: &str) -> Result<String, Failure> {
    require(cli, &[Format::Json, Format::Csv])?;
    let s = Signature::parse(text)?;
    let rho = rho_from_signature(&s)?;
    let diag = rho_diagnostics(&s)?;
    let images: Vec<String> = rho.images().iter().map(FreeWord::to_string).collect();
    Ok(match cli.format {
        Format::Csv => {
            let mut out = String::from("generator,image,table,status\n");
            for (img, line) in images.iter().zip(&diag.lines) {
                let table = serde_json::to_value(&line.table).expect("serializable");
                let status = serde_json::to_value(&line.status).expect("serializable");
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    line.generator,
                    img,
                    compact(&table),
                    compact(&status)
                );
            }
            out
        }
        _ => pretty(&json!({
            "signature": s.to_string(),
            "rank": rho.rank(),
            "images": images,
            "diagnostics": diag,
        })),
    })
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string().replace(',', ";"),
    }
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn cmd_zeta(cli: &Cli, file: &PathBuf) -> Result<String, Failure> {
    require(cli, &[Format::Json, Format::Csv])?;
    let m = parse_marked(&read_file(file)?)?;
    let zeta = m.zeta()?;
    let (normalized, conjugator) = m.normalize()?;
    let g = m.rank();
    let mut names: Vec<String> = (3..=g).map(|j| format!("a{j}")).collect();
    names.extend((1..=g).map(|j| format!("r{j}")));
    names.extend((2..=g).map(|j| format!("s{j}")));
    Ok(match cli.format {
        Format::Csv => {
            let mut s = String::from("name,re,im\n");
            for (n, z) in names.iter().zip(&zeta) {
                let _ = writeln!(s, "{n},{},{}", z.re, z.im);
            }
            s
        }
        _ => {
            let coords: Vec<Value> = names
                .iter()
                .zip(&zeta)
                .map(|(n, z)| json!({ "name": n, "value": [z.re, z.im] }))
                .collect();
            let normalized: Value =
                serde_json::from_str(&marked_to_json(&normalized)).expect("own output");
            pretty(&json!({
                "rank": g,
                "zeta": coords,
                "normalized": normalized["generators"],
                "conjugator": conjugator,
            }))
        }
    })
}

fn cmd_limitset(
    cli: &Cli,
    file: &PathBuf,
    depth: usize,
    cap: usize,
    exec: Execution,
) -> Result<String, Failure> {
    let m = parse_marked(&read_file(file)?)?;
    let points = m.limit_points(depth, cap, exec)?;
    Ok(match cli.format {
        Format::Csv => {
            let mut s = String::from("re,im\n");
            for p in points.iter().filter_map(SpherePoint::to_complex) {
                let _ = writeln!(s, "{},{}", p.re, p.im);
            }
            s
        }
        Format::Svg => svg_scatter(&points),
        Format::Json => {
            let pts: Vec<Value> = points.iter().map(point_json).collect();
            pretty(&json!({ "rank": m.rank(), "depth": depth, "count": pts.len(), "points": pts }))
        }
    })
}

fn svg_scatter(points: &[SpherePoint]) -> String {
    let finite: Vec<(f64, f64)> = points
        .iter()
        .filter_map(SpherePoint::to_complex)
        .map(|z| (z.re, z.im))
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for &(x, y) in &finite {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if finite.is_empty() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let pad = 0.05 * span;
    let size = span + 2.0 * pad;
    let dot = size / 400.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"{} {} {size} {size}\">",
        x0 - pad,
        -(y1 + pad)
    );
    let _ = writeln!(
        s,
        "<rect x=\"{}\" y=\"{}\" width=\"{size}\" height=\"{size}\" fill=\"white\"/>",
        x0 - pad,
        -(y1 + pad)
    );
    for (x, y) in finite {
        let _ = writeln!(
            s,
            "<circle cx=\"{x}\" cy=\"{}\" r=\"{dot}\" fill=\"black\"/>",
            -y
        );
    }
    s.push_str("</svg>\n");
    s
}

fn cmd_g2(cli: &Cli) -> Result<String, Failure> {
    require(cli, &[Format::Json, Format::Csv])?;
    let data = genus2_classes();
    let mut table = Vec::new();
    for (text, expected) in GENUS2_TABLE {
        let s = Signature::parse(text)?;
        let c = structure_of_signature_g2(&s, DEFAULT_SEARCH_BUDGET)?;
        table.push((s, c.class, expected, c.conjugator));
    }
    Ok(match cli.format {
        Format::Csv => {
            let mut s = String::from("class,twist,components,has_real_points\n");
            for c in &data.classes {
                let twist: Vec<String> = c.twist.images().iter().map(FreeWord::to_string).collect();
                let _ = writeln!(
                    s,
                    "{},\"({})\",{},{}",
                    c.class,
                    twist.join("; "),
                    c.components,
                    c.has_real_points
                );
            }
            s.push_str("\nsignature,class\n");
            for (sig, class, _, _) in &table {
                let _ = writeln!(s, "\"{sig}\",{class}");
            }
            s
        }
        _ => {
            let rows: Vec<Value> = table
                .iter()
                .map(|(s, class, expected, conj)| {
                    json!({ "signature": s.to_string(), "class": class, "agrees_with_table": class == expected, "conjugator": conj })
                })
                .collect();
            pretty(&json!({
                "class_count": data.classes.len(),
                "empty_real_part": data.classes.iter().filter(|c| !c.has_real_points).count(),
                "classes": data.classes,
                "order_two_in_out": data.order_two_in_out,
                "signatures": rows,
            }))
        }
    })
}

fn cmd_conjugacy(cli: &Cli, g: u32, budget: usize) -> Result<String, Failure> {
    require(cli, &[Format::Json])?;
    let report = conjugacy_experiment(g, cli.bound, budget)?;
    Ok(pretty(
        &serde_json::to_value(&report).expect("serializable"),
    ))
}

fn cmd_sample(cli: &Cli, g: usize, exec: Execution) -> Result<String, Failure> {
    require(cli, &[Format::Json])?;
    if g == 0 {
        return Err(Failure::Usage("rank must be positive".into()));
    }
    let m = sample_classical(g, 1, cli.seed, exec)
        .pop()
        .expect("one sample")?;
    Ok(marked_to_json(&m) + "\n")
}

fn cmd_verify(cli: &Cli, exec: Execution) -> Result<String, Failure> {
    require(cli, &[Format::Json, Format::Csv])?;
    let outcomes = verify::run_all(cli.seed, exec);
    let all = outcomes.iter().all(|o| o.passed);
    let text = match cli.format {
        Format::Csv => {
            let mut s = String::from("id,name,passed,detail\n");
            for o in &outcomes {
                let _ = writeln!(
                    s,
                    "{},{},{},\"{}\"",
                    o.id,
                    o.name,
                    o.passed,
                    o.detail.replace('"', "'")
                );
            }
            s
        }
        _ => pretty(&json!({ "all_passed": all, "checks": outcomes })),
    };
    if all {
        Ok(text)
    } else {
        Err(Failure::Verification(text))
    }
}
