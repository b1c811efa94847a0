//! `qclets` command-line front end.
//!
//! Exit statuses:
//!
//! | status | meaning |
//! |-------:|---------|
//! | 0  | success, or clean verdict |
//! | 1  | other failure |
//! | 2  | usage error |
//! | 10 | structures found (dirty verdict) |
//! | 11 | construction search exhausted |
//! | 12 | time or instance budget exceeded |
//! | 13 | malformed input file |
//! | 14 | I/O failure |

mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qclets::design::{self, DesignResult, DesignSpec};
use qclets::lets::{DbParams, StructureDb, TargetRange};
use qclets::plan::{build_exhaustive_plan, exhaustive_char_table, targeted_plan, SearchPlan};
use qclets::qc::{bfs_girth, lift_matrix, walk_girth, ExponentMatrix, TannerGraph};
use qclets::search::{exhaustive_enumerate, ClassCounts, SearchConfig};
use qclets::sim::{self, DecoderConfig, StopRule};

use config::{ConstructFile, Mode};

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_FOUND: u8 = 10;
pub const EXIT_EXHAUSTED: u8 = 11;
pub const EXIT_BUDGET: u8 = 12;
pub const EXIT_PARSE: u8 = 13;
pub const EXIT_IO: u8 = 14;

#[derive(Parser)]
#[command(
    name = "qclets",
    version,
    about = "Trapping-set-aware QC-LDPC construction and auditing"
)]
struct Cli {
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate LETS structures and write the database.
    DbBuild(DbArgs),
    /// Build a targeted (or exhaustive) search plan.
    Plan(PlanArgs),
    /// Construct an exponent matrix free of the targeted structures.
    Construct(ConstructArgs),
    /// Audit a matrix: girth by two methods and exhaustive counts.
    Verify(AuditArgs),
    /// Count LETS instances per class and write CSV.
    Enumerate(AuditArgs),
    /// Girth of a lifted matrix.
    Girth(GirthArgs),
    /// Frame error rate of a lifted matrix under quantized min-sum.
    Simulate(SimArgs),
    /// Per-class counts of QC-admissible and all structures.
    Table1(Table1Args),
}

#[derive(Args)]
struct DbArgs {
    #[arg(long)]
    dv: usize,
    #[arg(long)]
    girth: usize,
    /// Target rectangles, e.g. `10:3;12:2`.
    #[arg(long)]
    range: String,
    /// Largest `b` kept for out-of-range parents (default `b_max + 2 dv`).
    #[arg(long)]
    b_max_search: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long)]
    dv: usize,
    #[arg(long)]
    girth: usize,
    #[arg(long)]
    range: String,
    /// Reuse a database written by `db-build`.
    #[arg(long)]
    db: Option<PathBuf>,
    /// Plan that reaches every in-range structure, for counting.
    #[arg(long)]
    exhaustive: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructArgs {
    /// TOML file with the same keys as the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long)]
    girth: Option<usize>,
    #[arg(long)]
    range: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long)]
    lifting: Option<u32>,
    #[arg(long)]
    n_min: Option<u32>,
    #[arg(long)]
    n_max: Option<u32>,
    #[arg(long)]
    b_max: Option<usize>,
    #[arg(long)]
    a_cap: Option<usize>,
    /// Time budget per lifting degree.
    #[arg(long)]
    budget_secs: Option<u64>,
    /// Candidates tried per column visit before backtracking.
    #[arg(long)]
    column_cap: Option<usize>,
    /// Random seed; one is generated and printed when absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Exponent matrix output.
    #[arg(short, long)]
    output: PathBuf,
    /// Construction report (TOML); defaults to the output path with a
    /// `.report.toml` suffix.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    /// Exponent matrix file.
    matrix: PathBuf,
    /// Girth the structure database assumes.
    #[arg(long)]
    girth: usize,
    #[arg(long)]
    range: String,
    #[arg(long)]
    budget_secs: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GirthArgs {
    matrix: PathBuf,
    /// Longest cycle length searched.
    #[arg(long, default_value_t = qclets::qc::DEFAULT_GIRTH_CAP)]
    cap: u32,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SimArgs {
    matrix: PathBuf,
    /// Eb/N0 points in dB, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    snr: Vec<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 100)]
    min_errors: u64,
    #[arg(long, default_value_t = 10_000_000)]
    max_frames: u64,
    #[arg(long, default_value_t = 100)]
    max_iters: usize,
    /// Largest error support classified into `(a, b)`.
    #[arg(long, default_value_t = 12)]
    a_cap: usize,
    /// FER CSV output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Failure-class CSV output.
    #[arg(long)]
    failures: Option<PathBuf>,
}

#[derive(Args)]
struct Table1Args {
    #[arg(long)]
    dv: usize,
    #[arg(long)]
    girth: usize,
    #[arg(long)]
    range: String,
    /// Number of edge colours available (rows of the base graph).
    #[arg(long)]
    colors: Option<usize>,
    /// List every class, not only those with inadmissible structures.
    #[arg(long)]
    all: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Failure with its exit status.
#[derive(Debug)]
enum Failure {
    Core(qclets::Error),
    Io(PathBuf, std::io::Error),
    Config(PathBuf, String),
    Usage(String),
}

impl Failure {
    fn status(&self) -> u8 {
        use qclets::Error as E;
        match self {
            Failure::Core(E::Parse { .. } | E::Shape { .. } | E::EntryOutOfRange { .. } | E::Version(_)) => EXIT_PARSE,
            Failure::Core(E::InvalidArgument(_)) | Failure::Usage(_) => EXIT_USAGE,
            Failure::Core(E::Exhausted) => EXIT_EXHAUSTED,
            Failure::Core(E::BudgetExceeded(_)) => EXIT_BUDGET,
            Failure::Core(_) => EXIT_FAILURE,
            Failure::Io(..) => EXIT_IO,
            Failure::Config(..) => EXIT_PARSE,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(p, e) => write!(f, "{}: {e}", p.display()),
            Failure::Config(p, e) => write!(f, "{}: {e}", p.display()),
            Failure::Usage(m) => f.write_str(m),
        }
    }
}

impl From<qclets::Error> for Failure {
    fn from(e: qclets::Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.max(1))
        .build_global();
    if let Err(e) = pool {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_FAILURE);
    }
    let res = match cli.cmd {
        Command::DbBuild(a) => db_build(a),
        Command::Plan(a) => plan(a),
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Enumerate(a) => enumerate(a),
        Command::Girth(a) => girth(a),
        Command::Simulate(a) => simulate(a),
        Command::Table1(a) => table1(a),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

/// Writes `text` to `path`, or to stdout when no path is given.
fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_matrix(path: &Path) -> Result<ExponentMatrix, Failure> {
    Ok(read(path)?.parse()?)
}

fn parse_range(s: &str) -> Result<TargetRange, Failure> {
    Ok(s.parse()?)
}

fn seed_or_fresh(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random();
        println!("seed {s}");
        s
    })
}

fn search_config(budget_secs: Option<u64>) -> SearchConfig {
    match budget_secs {
        Some(s) => SearchConfig::default().with_time_limit(Duration::from_secs(s)),
        None => SearchConfig::default(),
    }
}

fn db_build(a: DbArgs) -> Outcome {
    let range = parse_range(&a.range)?;
    let mut params = DbParams::for_range(a.dv, a.girth, &range);
    if let Some(b) = a.b_max_search {
        params.b_max_search = b;
    }
    let db = StructureDb::build(&params)?;
    if let Some(p) = &a.output {
        write(p, &db.to_text())?;
        println!("{} structures in {} classes", db.len(), db.classes().len());
    } else {
        print!("{}", db.to_text());
    }
    Ok(0)
}

fn plan(a: PlanArgs) -> Outcome {
    let range = parse_range(&a.range)?;
    let db = match &a.db {
        Some(p) => StructureDb::from_text(&read(p)?)?,
        None => StructureDb::build(&DbParams::for_range(a.dv, a.girth, &range))?,
    };
    if db.dv != a.dv || db.girth != a.girth {
        return Err(Failure::Usage(format!(
            "database is for dv={} g={}, not dv={} g={}",
            db.dv, db.girth, a.dv, a.girth
        )));
    }
    let (plan, table) = if a.exhaustive {
        let plan = build_exhaustive_plan(&db, &range)?;
        let table = exhaustive_char_table(&db, &plan);
        (plan, table)
    } else {
        let plan = targeted_plan(&db, &range)?;
        let table = plan.char_table();
        (plan, table)
    };
    if let Some(p) = &a.output {
        write(p, &plan.to_text())?;
        print_plan_summary(&plan);
        print!("{}", table.render_grid());
        for (e, n) in table.cost_report() {
            println!("{e} {n}");
        }
    } else {
        print!("{}", plan.to_text());
    }
    Ok(0)
}

fn print_plan_summary(plan: &SearchPlan) {
    let roots: Vec<String> = plan.root_lengths().iter().map(usize::to_string).collect();
    println!(
        "{} nodes, {} targets, root cycle lengths {}",
        plan.nodes.len(),
        plan.targets().len(),
        roots.join(",")
    );
}

#[derive(Serialize)]
struct ConstructReport {
    mode: String,
    rows: usize,
    cols: usize,
    girth_required: usize,
    ranges: String,
    lifting: u32,
    a_max: Option<usize>,
    seed: u64,
    girth: String,
    candidates_tried: u64,
    girth_rejections: u64,
    lets_rejections: u64,
    backtracks: u64,
    elapsed_secs: f64,
    /// A re-entered column draws a fresh candidate order.
    reshuffle_on_reentry: bool,
    /// Lifting degrees below the result: `infeasible` or `timed-out`.
    below: Vec<(u32, String)>,
}

fn construct(a: ConstructArgs) -> Outcome {
    let file = match &a.config {
        Some(p) => ConstructFile::parse(&read(p)?).map_err(|e| Failure::Config(p.clone(), e.to_string()))?,
        None => ConstructFile::default(),
    };
    let c = file.overlay(ConstructFile {
        rows: a.rows,
        cols: a.cols,
        girth: a.girth,
        ranges: a.range,
        mode: a.mode,
        lifting: a.lifting,
        n_min: a.n_min,
        n_max: a.n_max,
        b_max: a.b_max,
        a_cap: a.a_cap,
        budget_secs: a.budget_secs,
        column_cap: a.column_cap,
        seed: a.seed,
    });
    let need = |name: &str| Failure::Usage(format!("missing `{name}`"));
    let rows = c.rows.ok_or_else(|| need("rows"))?;
    let cols = c.cols.ok_or_else(|| need("cols"))?;
    let g0 = c.girth.ok_or_else(|| need("girth"))?;
    let mode = c.mode.unwrap_or(Mode::Fixed);
    let ranges = match (&c.ranges, mode) {
        (Some(r), _) => parse_range(r)?,
        (None, Mode::MaxA) => TargetRange::rect(g0 / 2, c.b_max.ok_or_else(|| need("b_max"))?),
        (None, _) => return Err(need("ranges")),
    };
    let seed = seed_or_fresh(c.seed);
    let mut spec = DesignSpec::new(rows, cols, g0, ranges, c.lifting.unwrap_or(1), seed);
    if let Some(s) = c.budget_secs {
        spec.time_budget = Duration::from_secs(s);
    }
    spec.column_cap = c.column_cap;

    let mut below = Vec::new();
    let mut a_max = None;
    let result: DesignResult = match mode {
        Mode::Fixed => {
            spec.lifting = c.lifting.ok_or_else(|| need("lifting"))?;
            let plan = qclets::plan::plan_for_range(rows, g0, &spec.ranges)?;
            design::construct_fixed_n(&spec, &plan)?
        }
        Mode::MinN => {
            let n_min = c.n_min.ok_or_else(|| need("n_min"))?;
            let n_max = c.n_max.ok_or_else(|| need("n_max"))?;
            let r = design::solve_problem_a(&spec, n_min, n_max)?;
            below = r
                .below
                .iter()
                .map(|(n, o)| {
                    let o = match o {
                        design::NOutcome::Infeasible => "infeasible",
                        design::NOutcome::TimedOut => "timed-out",
                    };
                    (*n, o.to_string())
                })
                .collect();
            r.result
        }
        Mode::MaxA => {
            spec.lifting = c.lifting.ok_or_else(|| need("lifting"))?;
            let b_max = c.b_max.ok_or_else(|| need("b_max"))?;
            let a_cap = c.a_cap.ok_or_else(|| need("a_cap"))?;
            let (am, r) = design::solve_problem_b(&spec, b_max, a_cap)?;
            spec.ranges = TargetRange::rect(am, b_max);
            a_max = Some(am);
            r
        }
    };
    let report = ConstructReport {
        mode: format!("{mode:?}"),
        rows,
        cols,
        girth_required: g0,
        ranges: spec.ranges.to_string(),
        lifting: result.matrix.lifting(),
        a_max,
        seed,
        girth: result.girth.to_string(),
        candidates_tried: result.stats.candidates_tried,
        girth_rejections: result.stats.girth_rejections,
        lets_rejections: result.stats.lets_rejections,
        backtracks: result.stats.backtracks,
        elapsed_secs: result.stats.elapsed.as_secs_f64(),
        reshuffle_on_reentry: true,
        below,
    };
    let report_path = a.report.unwrap_or_else(|| {
        let mut p = a.output.clone().into_os_string();
        p.push(".report.toml");
        PathBuf::from(p)
    });
    write(&a.output, &result.matrix.to_string())?;
    write(
        &report_path,
        &toml::to_string(&report).map_err(|e| Failure::Config(report_path.clone(), e.to_string()))?,
    )?;
    println!(
        "N={} {} after {} candidates ({} backtracks) in {:.1}s",
        report.lifting, report.girth, report.candidates_tried, report.backtracks, report.elapsed_secs
    );
    print!("{}", result.matrix);
    Ok(0)
}

#[derive(Serialize)]
struct VerifyReport {
    walk_girth: String,
    bfs_girth: String,
    girth_required: usize,
    ranges: String,
    clean: bool,
    counts: Vec<(usize, usize, u64)>,
}

fn verify(a: AuditArgs) -> Outcome {
    let p = read_matrix(&a.matrix)?;
    let range = parse_range(&a.range)?;
    let r = design::verify(&p, a.girth, &range, &search_config(a.budget_secs))?;
    let report = VerifyReport {
        walk_girth: r.walk_girth.to_string(),
        bfs_girth: r.bfs_girth.to_string(),
        girth_required: a.girth,
        ranges: range.to_string(),
        clean: r.clean,
        counts: r.counts.counts.iter().map(|(&(x, y), &n)| (x, y, n)).collect(),
    };
    let text = toml::to_string(&report).map_err(|e| Failure::Usage(e.to_string()))?;
    if let Some(out) = &a.output {
        write(out, &text)?;
        println!("{} ({})", if r.clean { "clean" } else { "dirty" }, r.walk_girth);
        print_nonzero(&r.counts);
    } else {
        print!("{text}");
    }
    Ok(if r.clean { 0 } else { EXIT_FOUND })
}

fn print_nonzero(c: &ClassCounts) {
    for (&(x, y), &n) in &c.counts {
        if n > 0 {
            println!("({x},{y}) {n}");
        }
    }
}

/// Structure database matching the variable degree of `t`.
fn db_for(t: &TannerGraph, girth: usize, range: &TargetRange) -> Result<StructureDb, Failure> {
    let dv = t
        .var_degree()
        .ok_or_else(|| Failure::Usage("graph is not variable-regular".into()))?;
    Ok(StructureDb::build(&DbParams::for_range(dv, girth, range))?)
}

fn enumerate(a: AuditArgs) -> Outcome {
    let p = read_matrix(&a.matrix)?;
    let range = parse_range(&a.range)?;
    let t = lift_matrix(&p);
    let db = db_for(&t, a.girth, &range)?;
    let counts = exhaustive_enumerate(&t, &db, &range, &search_config(a.budget_secs))?;
    emit(a.output.as_deref(), &counts.to_csv())?;
    if a.output.is_some() {
        print_nonzero(&counts);
    }
    Ok(if counts.is_clean() { 0 } else { EXIT_FOUND })
}

fn girth(a: GirthArgs) -> Outcome {
    let p = read_matrix(&a.matrix)?;
    let wg = walk_girth(&p, a.cap);
    let bg = bfs_girth(&lift_matrix(&p), a.cap);
    if wg != bg {
        return Err(Failure::Core(qclets::Error::InvalidArgument(format!(
            "girth methods disagree: walks {wg}, BFS {bg}"
        ))));
    }
    if let Some(out) = &a.output {
        write(out, &format!("method,girth\nwalk,{wg}\nbfs,{bg}\n"))?;
    }
    println!("{wg}");
    Ok(0)
}

fn simulate(a: SimArgs) -> Outcome {
    let p = read_matrix(&a.matrix)?;
    let t = lift_matrix(&p);
    let seed = seed_or_fresh(a.seed);
    let stop = StopRule {
        min_errors: a.min_errors,
        max_frames: a.max_frames,
    };
    let cfg = DecoderConfig {
        max_iters: a.max_iters,
        ..DecoderConfig::default()
    };
    let mut results = Vec::new();
    for &snr in &a.snr {
        let r = sim::fer_point(&t, snr, &stop, &cfg, seed, a.a_cap)?;
        if a.output.is_some() {
            println!(
                "{snr} dB: {} errors in {} frames, FER {:.3e}",
                r.errors, r.frames, r.fer
            );
        }
        results.push(r);
    }
    emit(a.output.as_deref(), &sim::results_csv(&results))?;
    if let Some(f) = &a.failures {
        write(f, &sim::failures_csv(&results))?;
    }
    Ok(0)
}

fn table1(a: Table1Args) -> Outcome {
    let range = parse_range(&a.range)?;
    let mut db = StructureDb::build(&DbParams::for_range(a.dv, a.girth, &range))?;
    if let Some(m) = a.colors {
        db = db.qc_filter(m);
    }
    let text = if a.all {
        let mut s = String::from("a,b,root,admissible,all\n");
        for ((x, y), roots) in db.class_summary() {
            if range.contains(x, y) {
                for (k, (q, n)) in roots {
                    s.push_str(&format!("{x},{y},{k},{q},{n}\n"));
                }
            }
        }
        s
    } else {
        db.render_table1(&range)
    };
    emit(a.output.as_deref(), &text)?;
    Ok(0)
}
