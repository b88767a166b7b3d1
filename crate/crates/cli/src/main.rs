//! `eightblocks`: command-line front end.
//!
//! Exit codes: 0 success, 1 other failure, 2 usage error, 3 unreadable or
//! malformed instance, 4 search budget exhausted.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use eightblocks::composability::{
    classify, extract_arrangement, hall_witness, is_composable_matching, solution_set, Classification,
};
use eightblocks::experiments::{
    explore_open_problems, octet_census, octet_census_raw, parse_variety_set, row_scan, run_existence,
    run_max_infeasible, run_min_universal, verify_known_instances, Family,
};
use eightblocks::model::{
    build_existence_model, build_max_infeasible_model, build_min_universal_model, check_assignment,
    decode_dimacs_solution, decode_lp_solution, export_dimacs, export_lp, export_neutral, DomainMode, Model,
};
use eightblocks::search::{SearchOptions, SearchResult, VarOrder, Verdict};
use eightblocks::table::ConwayTable;
use eightblocks::{Instance, Variety};

const EXIT_MALFORMED: u8 = 3;
const EXIT_TIMEOUT: u8 = 4;

#[derive(Parser)]
#[command(name = "eightblocks", version, about = "Colored-cube solids: composability checks and instance searches")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the table of the 30 varieties.
    Table {
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
    },
    /// Decide which solids an instance file can build.
    Check {
        instance: PathBuf,
        /// Print a corner-by-corner arrangement for every buildable solid.
        #[arg(long)]
        certificates: bool,
        /// Print a violating triple subset for every unbuildable solid.
        #[arg(long)]
        witnesses: bool,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Run one of the model searches.
    Search {
        #[command(subcommand)]
        problem: Problem,
        #[command(flatten)]
        common: SearchFlags,
    },
    /// Existence searches over a family of solution sets.
    Explore {
        /// `rows`, `columns`, `size:k`, or sets separated by `;`.
        #[arg(long)]
        family: String,
        #[arg(long, value_enum, default_value_t = Mode::Paper)]
        mode: Mode,
        #[command(flatten)]
        common: SearchFlags,
    },
    /// Exhaustive counts over small instances.
    Census {
        #[command(subcommand)]
        what: CensusKind,
    },
    /// Exhaustive scans over instances on one table row.
    Scan {
        #[command(subcommand)]
        what: ScanKind,
    },
    /// Check the reference instances with both oracles.
    Verify,
    /// Write a model as LP, DIMACS CNF or the neutral text format.
    Export {
        #[command(subcommand)]
        problem: Problem,
        #[arg(long, value_enum, global = true, default_value_t = ExportFormat::Neutral)]
        format: ExportFormat,
        /// Output file instead of standard output.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Read an external solver's solution for a model and re-check it.
    Decode {
        #[command(subcommand)]
        problem: Problem,
        #[arg(long, value_enum, global = true, default_value_t = SolutionFormat::Dimacs)]
        format: SolutionFormat,
        /// Solver output file (required).
        #[arg(long, global = true)]
        solution: Option<PathBuf>,
    },
}

#[derive(Subcommand, Clone)]
enum Problem {
    /// Instances building exactly the given solids.
    Existence {
        /// `all`, `none`, `row:i`, `col:j`, or a list like `(1,2),(1,3)`.
        #[arg(long)]
        solutions: String,
        #[arg(long, value_enum, default_value_t = Mode::Paper)]
        mode: Mode,
    },
    /// Infeasible instances of a given size.
    MaxInfeasible {
        #[arg(long)]
        size: u32,
        #[arg(long, value_enum, default_value_t = Mode::Paper)]
        mode: Mode,
    },
    /// Smallest universal instance.
    MinUniversal,
}

#[derive(Subcommand)]
enum CensusKind {
    /// Solution-set sizes over all instances of eight cubes.
    Octets {
        /// Also write the histogram as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Enumerate every multiset instead of one per symmetry class.
        #[arg(long)]
        raw: bool,
    },
}

#[derive(Subcommand)]
enum ScanKind {
    /// Largest infeasible instance supported on one table row.
    RowInfeasible {
        #[arg(long, default_value_t = 1)]
        row: usize,
    },
}

#[derive(Args, Clone)]
struct SearchFlags {
    /// Worker threads.
    #[arg(long, global = true, env = "EIGHTBLOCKS_JOBS", default_value_t = 1)]
    jobs: usize,
    /// Stop after this many search nodes.
    #[arg(long, global = true)]
    node_budget: Option<u64>,
    /// Stop after this many seconds.
    #[arg(long, global = true)]
    time_budget: Option<f64>,
    /// Leave timings out of the report so runs compare byte for byte.
    #[arg(long, global = true)]
    seedless_deterministic: bool,
    /// Turn off symmetry breaking.
    #[arg(long, global = true)]
    no_symmetry: bool,
    #[arg(long, global = true, value_enum, default_value_t = Order::Heuristic)]
    order: Order,
    /// Progress file; a matching file is resumed.
    #[arg(long, global = true)]
    checkpoint: Option<PathBuf>,
    /// Write the witness to this file.
    #[arg(long, global = true)]
    witness_out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(ValueEnum, Clone, Copy)]
enum TableFormat {
    Text,
    Machine,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy)]
enum Mode {
    Paper,
    Rigorous,
}

#[derive(ValueEnum, Clone, Copy)]
enum Order {
    Heuristic,
    Canonical,
}

#[derive(ValueEnum, Clone, Copy)]
enum ExportFormat {
    Lp,
    Dimacs,
    Neutral,
}

#[derive(ValueEnum, Clone, Copy)]
enum SolutionFormat {
    Lp,
    Dimacs,
}

impl From<Mode> for DomainMode {
    fn from(m: Mode) -> DomainMode {
        match m {
            Mode::Paper => DomainMode::Paper,
            Mode::Rigorous => DomainMode::Rigorous,
        }
    }
}

/// Failure carrying a specific exit code.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn options(flags: &SearchFlags) -> SearchOptions {
    SearchOptions {
        symmetry: !flags.no_symmetry,
        order: match flags.order {
            Order::Heuristic => VarOrder::Heuristic,
            Order::Canonical => VarOrder::Canonical,
        },
        node_budget: flags.node_budget,
        time_budget: flags.time_budget.map(Duration::from_secs_f64),
        jobs: flags.jobs.max(1),
        checkpoint: flags.checkpoint.clone(),
        ..Default::default()
    }
}

fn build(problem: &Problem) -> Result<Model> {
    Ok(match problem {
        Problem::Existence { solutions, mode } => build_existence_model(parse_variety_set(solutions)?, (*mode).into()),
        Problem::MaxInfeasible { size, mode } => build_max_infeasible_model(*size, (*mode).into()),
        Problem::MinUniversal => build_min_universal_model(),
    })
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path).map_err(|e| Exit(EXIT_MALFORMED, format!("{}: {e}", path.display())))?;
    text.parse().map_err(|e| Exit(EXIT_MALFORMED, format!("{}: {e}", path.display())).into())
}

fn set_string(vs: &[Variety]) -> String {
    format!("{{{}}}", vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "))
}

fn table(out: &mut String, format: TableFormat) -> Result<()> {
    let t = ConwayTable::build();
    match format {
        TableFormat::Machine => write!(out, "{t}")?,
        TableFormat::Text => {
            for v in Variety::all() {
                let triples: Vec<String> = v.triples().iter().map(|x| x.to_string()).collect();
                writeln!(out, "{v} {} mirror {} triples {}", v.canonical_coloring(), v.mirror(), triples.join(" "))?;
            }
        }
    }
    Ok(())
}

fn check(out: &mut String, path: &Path, certificates: bool, witnesses: bool, format: ReportFormat) -> Result<()> {
    let x = read_instance(path)?;
    let solutions = solution_set(&x);
    let class = classify(&solutions);
    if format == ReportFormat::Json {
        let json = serde_json::json!({
            "size": x.size(),
            "classification": class.to_string(),
            "solutions": solutions,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&json)?)?;
        return Ok(());
    }
    match class {
        Classification::Partial => writeln!(out, "{} solids, size {}", solutions.len(), x.size())?,
        c => writeln!(out, "{c}, size {}", x.size())?,
    }
    writeln!(out, "solution set {}", set_string(&solutions))?;
    for t in Variety::all() {
        if certificates && is_composable_matching(&x, t) {
            write!(out, "{}", extract_arrangement(&x, t)?)?;
        }
        if witnesses {
            if let Some(w) = hall_witness(&x, t) {
                let triples: Vec<String> = w.triples.iter().map(|x| x.to_string()).collect();
                writeln!(out, "no {t}: triples {} touch only {} cubes", triples.join(" "), w.adjacent_cube_count)?;
            }
        }
    }
    Ok(())
}

fn report(out: &mut String, result: &SearchResult, flags: &SearchFlags) -> Result<()> {
    match flags.format {
        ReportFormat::Json => {
            let mut value = serde_json::to_value(result)?;
            if flags.seedless_deterministic {
                value["stats"].as_object_mut().map(|o| o.remove("wall_time"));
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
        }
        ReportFormat::Text => {
            write!(out, "{result}")?;
            if !flags.seedless_deterministic {
                writeln!(out, "wall time {:.3}s", result.stats.wall_time.as_secs_f64())?;
            }
        }
    }
    if let (Some(path), Some(x)) = (&flags.witness_out, result.verdict.witness()) {
        std::fs::write(path, x.to_string()).with_context(|| format!("writing {}", path.display()))?;
    }
    if result.verdict == Verdict::Timeout {
        return Err(Exit(EXIT_TIMEOUT, "search budget exhausted".into()).into());
    }
    Ok(())
}

fn search(out: &mut String, problem: &Problem, flags: &SearchFlags) -> Result<()> {
    let opts = options(flags);
    let result = match problem {
        Problem::Existence { solutions, mode } => run_existence(parse_variety_set(solutions)?, (*mode).into(), &opts)?,
        Problem::MaxInfeasible { size, mode } => run_max_infeasible(*size, (*mode).into(), &opts)?,
        Problem::MinUniversal => run_min_universal(&opts)?,
    };
    report(out, &result, flags)
}

fn write_out(out: &mut String, text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            write!(out, "{text}")?;
            Ok(())
        }
    }
}

fn run(out: &mut String, cli: Cli) -> Result<()> {
    match cli.command {
        Command::Table { format } => table(out, format)?,
        Command::Check { instance, certificates, witnesses, format } => {
            check(out, &instance, certificates, witnesses, format)?
        }
        Command::Search { problem, common } => search(out, &problem, &common)?,
        Command::Explore { family, mode, common } => {
            let family: Family = family.parse()?;
            let r = explore_open_problems(&family, mode.into(), &options(&common))?;
            match common.format {
                ReportFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&r)?)?,
                ReportFormat::Text => write!(out, "{r}")?,
            }
        }
        Command::Census { what: CensusKind::Octets { csv, raw } } => {
            let csv_text = if raw {
                let rows = octet_census_raw();
                let mut text = String::from("solutions,orbits,raw\n");
                for r in &rows {
                    writeln!(out, "{:>9} {:>10}", r.solutions, r.raw)?;
                    text.push_str(&format!("{},,{}\n", r.solutions, r.raw));
                }
                text
            } else {
                let c = octet_census();
                write!(out, "{c}")?;
                c.to_csv()
            };
            if let Some(p) = csv {
                std::fs::write(&p, csv_text).with_context(|| format!("writing {}", p.display()))?;
            }
        }
        Command::Scan { what: ScanKind::RowInfeasible { row } } => write!(out, "{}", row_scan(row)?)?,
        Command::Verify => write!(out, "{}", verify_known_instances()?)?,
        Command::Export { problem, format, output } => {
            let m = build(&problem)?;
            let text = match format {
                ExportFormat::Lp => export_lp(&m)?,
                ExportFormat::Dimacs => export_dimacs(&m),
                ExportFormat::Neutral => export_neutral(&m),
            };
            write_out(out, &text, output.as_deref())?;
        }
        Command::Decode { problem, format, solution } => {
            let Some(solution) = solution else {
                return Err(Exit(2, "decode needs --solution <file>".into()).into());
            };
            let m = build(&problem)?;
            let text = std::fs::read_to_string(&solution).with_context(|| format!("reading {}", solution.display()))?;
            let x = match format {
                SolutionFormat::Dimacs => decode_dimacs_solution(&m, &text)?,
                SolutionFormat::Lp => Some(decode_lp_solution(&text)?),
            };
            match x {
                None => writeln!(out, "UNSAT")?,
                Some(x) => {
                    let violations = check_assignment(&m, &x).violations;
                    write!(out, "{x}")?;
                    writeln!(out, "size {} solution set {}", x.size(), set_string(&solution_set(&x)))?;
                    if let Some(v) = violations.first() {
                        bail!("solution violates the model: {v}");
                    }
                    writeln!(out, "satisfies model {}", m.name)?;
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(&mut out, cli);
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(out.as_bytes()).and_then(|()| stdout.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = match e.downcast_ref::<Exit>() {
                Some(Exit(code, _)) => *code,
                None => match e.downcast_ref::<eightblocks::Error>() {
                    Some(eightblocks::Error::MalformedInstance(_)) => EXIT_MALFORMED,
                    Some(eightblocks::Error::InvalidInput(_)) => 2,
                    _ => 1,
                },
            };
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
