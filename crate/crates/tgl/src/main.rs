//! Command-line front end for the tanglegram toolkit.
//!
//! Exit codes: 0 success, 1 negative mathematical answer (nonplanar input,
//! failed verification suite), 2 precondition violation, 3 search budget
//! exhausted, 4 I/O or parse error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use tanglegram::construct::{one_crossing_layout, ConstructError};
use tanglegram::detect::{
    associated_graph, cross_responsible_sets, is_planar_graph, is_safe_pair,
};
use tanglegram::gen::{build_family, enumerate_tanglegrams, random_tanglegram, Family};
use tanglegram::io::{
    parse_layout, parse_tanglegram, render_svg, serialize_layout, serialize_tanglegram, IoError,
};
use tanglegram::layout::{crossing_pairs, exact_crt_with, planar_layout, CrtOptions, LayoutRep};
use tanglegram::model::Tanglegram;

const EXIT_NEGATIVE: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "tgl", version, about = "Tanglegram crossing analysis toolkit")]
struct Cli {
    /// Emit a machine-readable JSON document on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the cross-responsible sets with kinds and edge roles.
    Detect {
        /// Tanglegram file.
        file: PathBuf,
    },
    /// Compute the exact crossing number and an optimal witness layout.
    Crt {
        /// Tanglegram file.
        file: PathBuf,
        /// Search budget in branch-and-bound nodes; 0 means unlimited.
        /// Overrides the TGL_BUDGET environment variable.
        #[arg(long)]
        budget: Option<u64>,
        /// Write the witness layout to this file.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print a planar layout, or NONPLANAR with one obstruction.
    Planar {
        /// Tanglegram file.
        file: PathBuf,
        /// Write the layout to this file as well.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Build a certified one-crossing layout (requires exactly one
    /// cross-responsible set).
    Onecross {
        /// Tanglegram file.
        file: PathBuf,
        /// Write the layout to this file.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Render a layout to SVG.
    Render {
        /// Tanglegram file.
        file: PathBuf,
        /// Layout file (two comma-separated label lines).
        #[arg(long)]
        layout: PathBuf,
        /// Output SVG path.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Generate a tanglegram file, random or from a named family.
    Gen {
        /// Leaf count per tree for random generation.
        #[arg(short = 'n', long = "size", value_name = "N")]
        size: Option<usize>,
        /// Random seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Named family instead of random: K1, K2, T1, or T2.
        #[arg(long)]
        family: Option<String>,
        /// Block size for T1/T2.
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Output file.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Run the verification suites and print a pass/fail table.
    Verify {
        /// Exhaustively check all tanglegrams up to this size.
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        /// Number of random instances per sampled suite.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Random seed.
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Sample one size and bin instances by their number of
    /// cross-responsible sets, reporting the maximum crossing number seen
    /// per bin.
    Survey {
        /// Leaf count per tree.
        #[arg(long)]
        size: usize,
        /// Number of random instances.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Random seed.
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: impl Into<String>) -> Failure {
        Failure {
            code,
            msg: msg.into(),
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_IO, format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .map_err(|e| Failure::new(EXIT_IO, format!("cannot write {}: {e}", path.display())))
}

fn load_tanglegram(path: &Path) -> Result<Tanglegram, Failure> {
    parse_tanglegram(&read_file(path)?).map_err(|e| Failure::new(EXIT_IO, e.to_string()))
}

/// Budget resolution: the flag wins, then TGL_BUDGET, then the default;
/// 0 means unlimited.
fn resolve_budget(flag: Option<u64>) -> Result<Option<u64>, Failure> {
    let chosen = match flag {
        Some(n) => Some(n),
        None => match std::env::var("TGL_BUDGET") {
            Ok(s) => Some(s.parse::<u64>().map_err(|_| {
                Failure::new(EXIT_IO, "TGL_BUDGET must be a nonnegative integer")
            })?),
            Err(_) => None,
        },
    };
    Ok(match chosen {
        Some(0) => None,
        Some(n) => Some(n),
        None => CrtOptions::default().budget,
    })
}

fn layout_json(rep: &LayoutRep) -> serde_json::Value {
    json!({ "left": rep.left_order, "right": rep.right_order })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            if cli.json {
                println!(
                    "{}",
                    json!({ "ok": false, "exit": f.code, "error": f.msg })
                );
            } else {
                eprintln!("error: {}", f.msg);
            }
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.cmd {
        Cmd::Detect { file } => cmd_detect(file, cli.json),
        Cmd::Crt { file, budget, out } => cmd_crt(file, *budget, out.as_deref(), cli.json),
        Cmd::Planar { file, out } => cmd_planar(file, out.as_deref(), cli.json),
        Cmd::Onecross { file, out } => cmd_onecross(file, out, cli.json),
        Cmd::Render { file, layout, out } => cmd_render(file, layout, out, cli.json),
        Cmd::Gen {
            size,
            seed,
            family,
            m,
            out,
        } => cmd_gen(*size, *seed, family.as_deref(), *m, out, cli.json),
        Cmd::Verify {
            max_size,
            samples,
            seed,
        } => cmd_verify(*max_size, *samples, *seed, cli.json),
        Cmd::Survey {
            size,
            samples,
            seed,
        } => cmd_survey(*size, *samples, *seed, cli.json),
    }
}

fn cmd_detect(file: &Path, as_json: bool) -> Result<u8, Failure> {
    let tg = load_tanglegram(file)?;
    let sets = cross_responsible_sets(&tg);
    if as_json {
        let rows: Vec<_> = sets
            .iter()
            .map(|s| {
                let roles: BTreeMap<String, String> = s
                    .edges
                    .iter()
                    .map(|&e| {
                        (
                            e.to_string(),
                            s.labeling.role_of(e).unwrap_or("?").to_string(),
                        )
                    })
                    .collect();
                json!({ "edges": s.edges, "kind": s.kind.to_string(), "roles": roles })
            })
            .collect();
        println!(
            "{}",
            json!({ "ok": true, "count": sets.len(), "sets": rows })
        );
    } else {
        println!("{} cross-responsible set(s)", sets.len());
        for s in &sets {
            let roles: Vec<String> = s
                .edges
                .iter()
                .map(|&e| format!("{e}={}", s.labeling.role_of(e).unwrap_or("?")))
                .collect();
            println!(
                "X = {{{}, {}, {}, {}}} kind={} roles {}",
                s.edges[0],
                s.edges[1],
                s.edges[2],
                s.edges[3],
                s.kind,
                roles.join(",")
            );
        }
    }
    Ok(0)
}

fn cmd_crt(
    file: &Path,
    budget: Option<u64>,
    out: Option<&Path>,
    as_json: bool,
) -> Result<u8, Failure> {
    let tg = load_tanglegram(file)?;
    let opts = CrtOptions {
        budget: resolve_budget(budget)?,
        ..CrtOptions::default()
    };
    let res = exact_crt_with(&tg, &opts)
        .map_err(|e| Failure::new(EXIT_PRECONDITION, e.to_string()))?;
    if let Some(path) = out {
        write_file(path, &serialize_layout(&res.witness))?;
    }
    if as_json {
        println!(
            "{}",
            json!({
                "ok": true,
                "value": res.value,
                "optimal": res.optimal,
                "explored": res.explored,
                "witness": layout_json(&res.witness),
            })
        );
    } else {
        let tag = if res.optimal {
            "optimal"
        } else {
            "budget exhausted"
        };
        println!("{} ({tag})", res.value);
        if let Some(path) = out {
            println!("witness written to {}", path.display());
        }
    }
    Ok(if res.optimal { 0 } else { EXIT_BUDGET })
}

fn cmd_planar(file: &Path, out: Option<&Path>, as_json: bool) -> Result<u8, Failure> {
    let tg = load_tanglegram(file)?;
    match planar_layout(&tg) {
        Some(rep) => {
            if let Some(path) = out {
                write_file(path, &serialize_layout(&rep))?;
            }
            if as_json {
                println!(
                    "{}",
                    json!({ "ok": true, "planar": true, "layout": layout_json(&rep) })
                );
            } else {
                print!("{}", serialize_layout(&rep));
            }
            Ok(0)
        }
        None => {
            let sets = cross_responsible_sets(&tg);
            let first = sets.first();
            if as_json {
                println!(
                    "{}",
                    json!({
                        "ok": true,
                        "planar": false,
                        "obstruction": first.map(|s| json!({
                            "edges": s.edges,
                            "kind": s.kind.to_string(),
                        })),
                    })
                );
            } else {
                println!("NONPLANAR");
                if let Some(s) = first {
                    println!(
                        "obstruction: {{{}, {}, {}, {}}} kind={}",
                        s.edges[0], s.edges[1], s.edges[2], s.edges[3], s.kind
                    );
                }
            }
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn cmd_onecross(file: &Path, out: &Path, as_json: bool) -> Result<u8, Failure> {
    let tg = load_tanglegram(file)?;
    let cert = one_crossing_layout(&tg).map_err(|e| match e {
        ConstructError::NotUnique { count } => Failure::new(
            EXIT_PRECONDITION,
            format!("|X|={count}, expected exactly one cross-responsible set"),
        ),
        other => Failure::new(EXIT_PRECONDITION, other.to_string()),
    })?;
    write_file(out, &serialize_layout(&cert.layout))?;
    if as_json {
        println!(
            "{}",
            json!({
                "ok": true,
                "case": cert.case.to_string(),
                "crossing_pair": [cert.crossing_pair.0, cert.crossing_pair.1],
                "trace": cert.trace,
                "out": out.display().to_string(),
            })
        );
    } else {
        println!(
            "case {} crossing pair ({}, {})",
            cert.case, cert.crossing_pair.0, cert.crossing_pair.1
        );
        println!("layout written to {}", out.display());
    }
    Ok(0)
}

fn cmd_render(file: &Path, layout: &Path, out: &Path, as_json: bool) -> Result<u8, Failure> {
    let tg = load_tanglegram(file)?;
    let rep = parse_layout(&read_file(layout)?).map_err(|e| Failure::new(EXIT_IO, e.to_string()))?;
    let svg = render_svg(&tg, &rep).map_err(|e| match e {
        IoError::InconsistentLayout => Failure::new(EXIT_PRECONDITION, e.to_string()),
        other => Failure::new(EXIT_IO, other.to_string()),
    })?;
    write_file(out, &svg)?;
    let crossings = crossing_pairs(&tg, &rep)
        .map_err(|e| Failure::new(EXIT_PRECONDITION, e.to_string()))?
        .len();
    if as_json {
        println!(
            "{}",
            json!({ "ok": true, "crossings": crossings, "out": out.display().to_string() })
        );
    } else {
        println!("wrote {} (crossings: {crossings})", out.display());
    }
    Ok(0)
}

fn cmd_gen(
    size: Option<usize>,
    seed: u64,
    family: Option<&str>,
    m: usize,
    out: &Path,
    as_json: bool,
) -> Result<u8, Failure> {
    let tg = match family {
        Some(name) => {
            let family: Family = name
                .parse()
                .map_err(|e: tanglegram::gen::GenError| Failure::new(EXIT_IO, e.to_string()))?;
            build_family(family, m)
                .map_err(|e| Failure::new(EXIT_PRECONDITION, e.to_string()))?
        }
        None => {
            let n = size.ok_or_else(|| {
                Failure::new(EXIT_PRECONDITION, "either -n or --family is required")
            })?;
            random_tanglegram(n, seed)
                .map_err(|e| Failure::new(EXIT_PRECONDITION, e.to_string()))?
        }
    };
    write_file(out, &serialize_tanglegram(&tg))?;
    if as_json {
        println!(
            "{}",
            json!({ "ok": true, "out": out.display().to_string(), "size": tg.size() })
        );
    } else {
        println!("wrote {} (size {})", out.display(), tg.size());
    }
    Ok(0)
}

struct SuiteRow {
    name: &'static str,
    instances: usize,
    pass: bool,
}

fn cmd_verify(max_size: usize, samples: usize, seed: u64, as_json: bool) -> Result<u8, Failure> {
    // Shared instance pool: everything up to max_size, plus random sizes
    // 6..=10. Each instance is solved once and fed to three suites.
    let mut pool: Vec<Tanglegram> = Vec::new();
    for n in 1..=max_size {
        let en = enumerate_tanglegrams(n)
            .map_err(|e| Failure::new(EXIT_PRECONDITION, e.to_string()))?;
        pool.extend(en.iter());
    }
    for i in 0..samples {
        let n = 6 + i % 5;
        let tg = random_tanglegram(n, seed.wrapping_add(i as u64))
            .map_err(|e| Failure::new(EXIT_PRECONDITION, e.to_string()))?;
        pool.push(tg);
    }
    let mut equivalence = true;
    let mut safe_pairs_respected = true;
    let mut star_agrees = true;
    for tg in &pool {
        let sets = cross_responsible_sets(tg);
        let res = exact_crt_with(tg, &CrtOptions::default())
            .map_err(|e| Failure::new(EXIT_PRECONDITION, e.to_string()))?;
        equivalence &= (res.value >= 1) == !sets.is_empty();
        let crossings = crossing_pairs(tg, &res.witness)
            .map_err(|e| Failure::new(EXIT_PRECONDITION, e.to_string()))?;
        for &(a, b) in &crossings {
            if is_safe_pair(tg, a, b).unwrap_or(false) {
                safe_pairs_respected = false;
            }
        }
        star_agrees &= is_planar_graph(&associated_graph(tg)) == sets.is_empty();
    }
    // Main-theorem suite: random sizes 8..=12, checking every instance with
    // a unique cross-responsible set end to end.
    let mut unique_count = 0usize;
    let mut main_theorem = true;
    for i in 0..samples {
        let n = 8 + i % 5;
        let tg = random_tanglegram(n, seed.wrapping_add(1_000_000 + i as u64))
            .map_err(|e| Failure::new(EXIT_PRECONDITION, e.to_string()))?;
        if cross_responsible_sets(&tg).len() != 1 {
            continue;
        }
        unique_count += 1;
        let ok = match one_crossing_layout(&tg) {
            Ok(cert) => {
                let count = crossing_pairs(&tg, &cert.layout).map(|p| p.len());
                count == Ok(1)
                    && exact_crt_with(&tg, &CrtOptions::default())
                        .map(|r| r.value == 1 && r.optimal)
                        .unwrap_or(false)
            }
            Err(_) => false,
        };
        main_theorem &= ok;
    }
    let rows = [
        SuiteRow {
            name: "kuratowski-equivalence",
            instances: pool.len(),
            pass: equivalence,
        },
        SuiteRow {
            name: "main-theorem",
            instances: unique_count,
            pass: main_theorem,
        },
        SuiteRow {
            name: "safe-pair",
            instances: pool.len(),
            pass: safe_pairs_respected,
        },
        SuiteRow {
            name: "associated-graph",
            instances: pool.len(),
            pass: star_agrees,
        },
    ];
    let all_pass = rows.iter().all(|r| r.pass);
    if as_json {
        let rows: Vec<_> = rows
            .iter()
            .map(|r| json!({ "suite": r.name, "instances": r.instances, "pass": r.pass }))
            .collect();
        println!("{}", json!({ "ok": true, "pass": all_pass, "suites": rows }));
    } else {
        println!("{:<24} {:>9} result", "suite", "instances");
        for r in &rows {
            println!(
                "{:<24} {:>9} {}",
                r.name,
                r.instances,
                if r.pass { "PASS" } else { "FAIL" }
            );
        }
    }
    Ok(if all_pass { 0 } else { EXIT_NEGATIVE })
}

fn cmd_survey(size: usize, samples: usize, seed: u64, as_json: bool) -> Result<u8, Failure> {
    // count, max crt, and whether every max was proven optimal, per bin.
    let mut bins: BTreeMap<usize, (usize, usize, bool)> = BTreeMap::new();
    for i in 0..samples {
        let tg = random_tanglegram(size, seed.wrapping_add(i as u64))
            .map_err(|e| Failure::new(EXIT_PRECONDITION, e.to_string()))?;
        let k = cross_responsible_sets(&tg).len();
        let res = exact_crt_with(&tg, &CrtOptions::default())
            .map_err(|e| Failure::new(EXIT_PRECONDITION, e.to_string()))?;
        let entry = bins.entry(k).or_insert((0, 0, true));
        entry.0 += 1;
        entry.1 = entry.1.max(res.value);
        entry.2 &= res.optimal;
    }
    if as_json {
        let rows: Vec<_> = bins
            .iter()
            .map(|(k, (count, max_crt, optimal))| {
                json!({ "sets": k, "count": count, "max_crt": max_crt, "all_optimal": optimal })
            })
            .collect();
        println!(
            "{}",
            json!({ "ok": true, "size": size, "samples": samples, "bins": rows })
        );
    } else {
        println!("size {size}, {samples} samples");
        for (k, (count, max_crt, optimal)) in &bins {
            println!(
                "|X|={k}: count={count}, max crt={max_crt}{}",
                if *optimal { "" } else { " (bound only)" }
            );
        }
    }
    Ok(0)
}
