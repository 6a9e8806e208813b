//! `planar-recolor`: plans, verification, oracles and corpus generation.
//!
//! Exit codes: 0 ok, 1 verdict failed or sequence violation, 2 unreadable or
//! malformed input, 3 precondition violated or bad parameters, 4 independent
//! set search exhausted, 5 internal error, 6 oracle state space too large.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use recolor_core::color::{Color, ColorSet, Coloring, ListAssignment, Vertex};
use recolor_core::format::{parse_coloring, parse_lists, parse_sequence, write_coloring};
use recolor_core::generate::{generate, random_coloring, Family};
use recolor_core::kernel::{apply_sequence, CheckMode, Constraints};
use recolor_core::oracle::{reconfig_diameter, reconfig_distance, Diameter, OracleError, Reach, DEFAULT_STATE_CAP};
use recolor_core::pipeline::{mode_name, recolor_planar_with, PipelineError, RecolorPlan, SearchLimits};
use recolor_core::plane::PlaneGraph;
use recolor_core::scene::Mode;

const EXIT_VERDICT: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_SEARCH: u8 = 4;
const EXIT_INTERNAL: u8 = 5;
const EXIT_STATE_SPACE: u8 = 6;

#[derive(Debug)]
struct Failure {
    code: u8,
    msg: String,
}

fn failure(code: u8, msg: impl Into<String>) -> Failure {
    Failure { code, msg: msg.into() }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let code = match e {
            PipelineError::PreconditionViolated(_) => EXIT_PRECONDITION,
            PipelineError::SearchExhausted(_) => EXIT_SEARCH,
            _ => EXIT_INTERNAL,
        };
        failure(code, e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let code = match e {
            OracleError::StateSpaceTooLarge { .. } => EXIT_STATE_SPACE,
            OracleError::BadInput(_) => EXIT_PRECONDITION,
        };
        failure(code, e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "planar-recolor", version, about = "Recoloring plans between proper colorings of planar graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    General,
    TriangleFree,
}

#[derive(Args)]
struct ModeFlags {
    #[arg(long, value_enum, default_value = "general")]
    mode: ModeArg,
    /// Shorthand for `--mode triangle-free`.
    #[arg(long)]
    triangle_free: bool,
    /// Number of colors; defaults to 10 (general) or 7 (triangle-free).
    #[arg(long)]
    k: Option<Color>,
}

impl ModeFlags {
    fn mode(&self) -> Mode {
        match (self.triangle_free, self.mode) {
            (true, _) | (_, ModeArg::TriangleFree) => Mode::TriangleFree,
            _ => Mode::General,
        }
    }

    fn k(&self) -> Color {
        self.k.unwrap_or(match self.mode() {
            Mode::General => 10,
            Mode::TriangleFree => 7,
        })
    }
}

#[derive(Args)]
struct SearchFlags {
    /// Randomized restarts of the independent-set search.
    #[arg(long, default_value_t = SearchLimits::default().restarts)]
    search_restarts: usize,
    /// Node budget of the exhaustive independent-set search.
    #[arg(long, default_value_t = SearchLimits::default().node_budget)]
    search_nodes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SearchFlags {
    fn limits(&self) -> SearchLimits {
        SearchLimits { restarts: self.search_restarts, node_budget: self.search_nodes, seed: self.seed }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Plan a recoloring from ALPHA to BETA and check it.
    Solve {
        graph: PathBuf,
        alpha: PathBuf,
        beta: PathBuf,
        #[command(flatten)]
        mode: ModeFlags,
        #[command(flatten)]
        search: SearchFlags,
        /// Write the plan here instead of standard output.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Replay a sequence (or plan) from START and report the first violation.
    Verify {
        graph: PathBuf,
        start: PathBuf,
        sequence: PathBuf,
        /// Colors must lie in each vertex's list from this file.
        #[arg(long)]
        lists: Option<PathBuf>,
        /// Colors must lie in 1..=k.
        #[arg(long)]
        k: Option<Color>,
        #[arg(long)]
        once_only: bool,
        /// Comma-separated vertices whose steps must come last.
        #[arg(long, value_delimiter = ',')]
        late: Vec<Vertex>,
        /// Each vertex may be recolored at most twice.
        #[arg(long)]
        max_twice: bool,
        /// The replay must end at this coloring.
        #[arg(long)]
        end: Option<PathBuf>,
    },
    /// Exact reconfiguration distance by breadth-first search.
    OracleDistance {
        graph: PathBuf,
        alpha: PathBuf,
        beta: PathBuf,
        #[arg(long)]
        k: Color,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        state_cap: usize,
    },
    /// Exact diameter of the reconfiguration graph.
    OracleDiameter {
        graph: PathBuf,
        #[arg(long)]
        k: Color,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        state_cap: usize,
    },
    /// Generate embedded graphs of a family.
    Gen {
        /// grid, cycle, wheel, stacked-triangulation, random-planar,
        /// random-triangle-free or pdn.
        family: String,
        /// Size: grid side, cycle length, wheel rim, vertex count.
        #[arg(long)]
        n: usize,
        /// Clique parameter for pdn.
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of graphs, with seeds seed, seed+1, ...
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Single output file (count 1), or directory (count > 1).
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Also write random proper K-colorings `<stem>.alpha` and `<stem>.beta`.
        #[arg(long, value_name = "K")]
        colorings: Option<Color>,
    },
    /// Solve every `*.graph` in a directory and report lengths against budgets.
    Bench {
        corpus: PathBuf,
        #[command(flatten)]
        mode: ModeFlags,
        #[command(flatten)]
        search: SearchFlags,
        /// Exact distances are computed up to this many colorings.
        #[arg(long, default_value_t = 200_000)]
        state_cap: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| failure(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| failure(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<PlaneGraph, Failure> {
    PlaneGraph::parse(&read(path)?).map_err(|e| failure(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load_coloring(path: &Path, n: usize) -> Result<Coloring, Failure> {
    parse_coloring(&read(path)?, n).map_err(|e| failure(EXIT_PARSE, format!("{}: {e}", path.display())))
}

/// One benchmark or solve outcome.
struct RunReport {
    id: String,
    n: usize,
    m: usize,
    mode: Mode,
    budget: Option<usize>,
    length: Option<usize>,
    oracle_distance: Option<usize>,
    wall_ms: f64,
    verdict: Result<(), Failure>,
}

impl RunReport {
    fn line(&self) -> String {
        let opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
        let verdict = match &self.verdict {
            Ok(()) => "pass".to_string(),
            Err(f) => format!("FAIL (exit {}): {}", f.code, f.msg),
        };
        format!(
            "{}: n={} m={} mode={} length={} budget={} distance={} time={:.1}ms {verdict}",
            self.id,
            self.n,
            self.m,
            mode_name(self.mode),
            opt(self.length),
            opt(self.budget),
            opt(self.oracle_distance),
            self.wall_ms
        )
    }
}

/// Plans and checks one instance. Returns the plan when the verdict passes.
fn solve_instance(
    id: &str,
    g: &PlaneGraph,
    alpha: &Coloring,
    beta: &Coloring,
    flags: &ModeFlags,
    limits: SearchLimits,
    state_cap: Option<usize>,
) -> (RunReport, Option<RecolorPlan>) {
    let t = Instant::now();
    let mut report = RunReport {
        id: id.to_string(),
        n: g.vertex_count(),
        m: g.edge_count(),
        mode: flags.mode(),
        budget: None,
        length: None,
        oracle_distance: None,
        wall_ms: 0.0,
        verdict: Ok(()),
    };
    let result = recolor_planar_with(g, alpha, beta, flags.k(), flags.mode(), limits);
    report.wall_ms = t.elapsed().as_secs_f64() * 1e3;
    let plan = match result {
        Ok(p) => p,
        Err(e) => {
            report.verdict = Err(e.into());
            return (report, None);
        }
    };
    report.budget = Some(plan.budget);
    report.length = Some(plan.total_length);
    if let Err(e) = plan.verify(g.graph(), alpha, beta) {
        report.verdict = Err(failure(EXIT_VERDICT, format!("replay failed: {e}")));
    } else if !plan.within_budget() {
        report.verdict = Err(failure(EXIT_VERDICT, "plan exceeds its budget"));
    }
    if let Some(cap) = state_cap {
        if let Ok(Reach::Distance(d)) = reconfig_distance(g.graph(), flags.k(), alpha, beta, cap) {
            report.oracle_distance = Some(d);
            if d > plan.total_length {
                report.verdict = Err(failure(EXIT_INTERNAL, "plan shorter than the exact distance"));
            }
        }
    }
    let ok = report.verdict.is_ok();
    (report, ok.then_some(plan))
}

fn cmd_solve(
    graph: &Path,
    alpha: &Path,
    beta: &Path,
    flags: &ModeFlags,
    search: &SearchFlags,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let g = load_graph(graph)?;
    let a = load_coloring(alpha, g.universe())?;
    let b = load_coloring(beta, g.universe())?;
    let (report, plan) = solve_instance(&graph.display().to_string(), &g, &a, &b, flags, search.limits(), None);
    eprintln!("{}", report.line());
    let plan = match (report.verdict, plan) {
        (Ok(()), Some(p)) => p,
        (Err(f), _) => return Err(f),
        (Ok(()), None) => return Err(failure(EXIT_INTERNAL, "no plan")),
    };
    match out {
        Some(path) => write(path, &plan.to_text()),
        None => {
            print!("{}", plan.to_text());
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    graph: &Path,
    start: &Path,
    sequence: &Path,
    lists: Option<&Path>,
    k: Option<Color>,
    once_only: bool,
    late: &[Vertex],
    max_twice: bool,
    end: Option<&Path>,
) -> Result<(), Failure> {
    let g = load_graph(graph)?;
    let n = g.universe();
    let phi = load_coloring(start, n)?;
    let seq = parse_sequence(&read(sequence)?, n).map_err(|e| failure(EXIT_PARSE, format!("{}: {e}", sequence.display())))?;
    let mut allowed = match lists {
        Some(p) => Some(parse_lists(&read(p)?, n).map_err(|e| failure(EXIT_PARSE, format!("{}: {e}", p.display())))?),
        None => None,
    };
    if let Some(k) = k {
        let range = ColorSet::range(k);
        allowed = Some(match allowed {
            Some(l) => ListAssignment(l.0.iter().map(|s| s.intersection(&range)).collect()),
            None => ListAssignment::uniform(n, range),
        });
    }
    if let Some(&v) = late.iter().find(|&&v| v >= n) {
        return Err(failure(EXIT_PARSE, format!("late vertex {v} out of range")));
    }
    let mut late_mask = vec![false; n];
    for &v in late {
        late_mask[v] = true;
    }
    let c = Constraints {
        lists: allowed.as_ref(),
        once_only,
        late_set: (!late.is_empty()).then_some(&late_mask[..]),
        max_per_vertex: max_twice.then_some(2),
    };
    if let Some(l) = &allowed {
        if let Some(v) = g.vertices().find(|&v| !l.get(v).contains(phi.get(v))) {
            return Err(failure(EXIT_VERDICT, format!("start color of vertex {v} is not allowed")));
        }
    }
    let last = apply_sequence(g.graph(), &phi, &seq, &c, CheckMode::Incremental)
        .map_err(|e| failure(EXIT_VERDICT, format!("violation: {e}")))?;
    if let Some(p) = end {
        let want = load_coloring(p, n)?;
        if let Some(v) = g.vertices().find(|&v| last.get(v) != want.get(v)) {
            return Err(failure(
                EXIT_VERDICT,
                format!("replay ends with color {} at vertex {v}, expected {}", last.get(v), want.get(v)),
            ));
        }
    }
    println!("ok: {} steps", seq.len());
    Ok(())
}

fn cmd_oracle_distance(graph: &Path, alpha: &Path, beta: &Path, k: Color, cap: usize) -> Result<(), Failure> {
    let g = load_graph(graph)?;
    let a = load_coloring(alpha, g.universe())?;
    let b = load_coloring(beta, g.universe())?;
    match reconfig_distance(g.graph(), k, &a, &b, cap)? {
        Reach::Distance(d) => println!("{d}"),
        Reach::Unreachable => println!("unreachable"),
    }
    Ok(())
}

fn cmd_oracle_diameter(graph: &Path, k: Color, cap: usize) -> Result<(), Failure> {
    let g = load_graph(graph)?;
    match reconfig_diameter(g.graph(), k, cap)? {
        Diameter::Finite(d) => println!("{d}"),
        Diameter::Disconnected => println!("disconnected"),
    }
    Ok(())
}

fn is_triangle_free(g: &PlaneGraph) -> bool {
    g.graph().is_triangle_free()
}

fn graph_text(family: Family, n: usize, d: usize, seed: u64, g: &PlaneGraph) -> String {
    format!(
        "# family {} n {n} d {d} seed {seed} triangle-free {}\n{}",
        family.name(),
        if is_triangle_free(g) { "yes" } else { "no" },
        g.to_text()
    )
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    family: &str,
    n: usize,
    d: usize,
    seed: u64,
    count: usize,
    out: Option<&Path>,
    colorings: Option<Color>,
) -> Result<(), Failure> {
    let family = Family::parse(family).ok_or_else(|| {
        let names: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
        failure(EXIT_PRECONDITION, format!("unknown family {family:?}; expected one of {}", names.join(", ")))
    })?;
    if count == 0 {
        return Err(failure(EXIT_PRECONDITION, "count must be positive"));
    }
    if count > 1 && out.is_none() {
        return Err(failure(EXIT_PRECONDITION, "several graphs need an output directory"));
    }
    if count > 1 {
        let dir = out.expect("checked");
        fs::create_dir_all(dir).map_err(|e| failure(EXIT_PARSE, format!("{}: {e}", dir.display())))?;
    }
    for i in 0..count {
        let s = seed + i as u64;
        let g = generate(family, n, d, s).map_err(|e| failure(EXIT_PRECONDITION, e.to_string()))?;
        let text = graph_text(family, n, d, s, &g);
        let path = match out {
            Some(dir) if count > 1 => dir.join(format!("{}-n{n}-s{s}.graph", family.name())),
            Some(file) => file.to_path_buf(),
            None => {
                print!("{text}");
                continue;
            }
        };
        write(&path, &text)?;
        if let Some(k) = colorings {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            for ext in ["alpha", "beta"] {
                let phi = random_coloring(g.graph(), k, &mut rng)
                    .ok_or_else(|| failure(EXIT_PRECONDITION, format!("no proper {k}-coloring found")))?;
                write(&path.with_extension(ext), &write_coloring(&phi))?;
            }
        }
    }
    Ok(())
}

/// Colorings for a corpus instance: `<stem>.alpha` / `<stem>.beta` when
/// present, otherwise random ones seeded by `seed` and the instance id.
fn instance_colorings(path: &Path, g: &PlaneGraph, k: Color, seed: u64) -> Result<(Coloring, Coloring), Failure> {
    let (a, b) = (path.with_extension("alpha"), path.with_extension("beta"));
    if a.exists() && b.exists() {
        return Ok((load_coloring(&a, g.universe())?, load_coloring(&b, g.universe())?));
    }
    let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let hash = id.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ hash);
    let mut draw = || {
        random_coloring(g.graph(), k, &mut rng).ok_or_else(|| failure(EXIT_PRECONDITION, format!("{id}: no proper {k}-coloring found")))
    };
    Ok((draw()?, draw()?))
}

fn cmd_bench(corpus: &Path, flags: &ModeFlags, search: &SearchFlags, state_cap: usize, csv: Option<&Path>) -> Result<(), Failure> {
    let entries = fs::read_dir(corpus).map_err(|e| failure(EXIT_PARSE, format!("{}: {e}", corpus.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "graph"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(failure(EXIT_PRECONDITION, format!("no *.graph files in {}", corpus.display())));
    }
    let mut reports = Vec::new();
    for path in &files {
        let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let loaded = load_graph(path).and_then(|g| instance_colorings(path, &g, flags.k(), search.seed).map(|c| (g, c)));
        let report = match loaded {
            Ok((g, (a, b))) => solve_instance(&id, &g, &a, &b, flags, search.limits(), Some(state_cap)).0,
            Err(f) => RunReport {
                id,
                n: 0,
                m: 0,
                mode: flags.mode(),
                budget: None,
                length: None,
                oracle_distance: None,
                wall_ms: 0.0,
                verdict: Err(f),
            },
        };
        reports.push(report);
    }
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    let failed: Vec<&RunReport> = reports.iter().filter(|r| r.verdict.is_err()).collect();
    for r in &reports {
        println!("{}", r.line());
    }
    let ratios: Vec<f64> = reports
        .iter()
        .filter_map(|r| r.length.map(|l| l as f64 / r.n.max(1) as f64))
        .collect();
    let worst = ratios.iter().copied().fold(0.0, f64::max);
    println!(
        "{} instances, {} passed, {} failed, max length/n = {worst:.2}",
        reports.len(),
        reports.len() - failed.len(),
        failed.len()
    );
    if let Some(path) = csv {
        write_csv(path, &reports).map_err(|e| failure(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    }
    match failed.first() {
        None => Ok(()),
        Some(_) => Err(failure(EXIT_VERDICT, format!("{} instances failed", failed.len()))),
    }
}

fn write_csv(path: &Path, reports: &[RunReport]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["id", "n", "m", "mode", "budget", "length", "oracle_distance", "wall_ms", "verdict", "exit_code", "message"])?;
    let opt = |x: Option<usize>| x.map_or(String::new(), |v| v.to_string());
    for r in reports {
        let (verdict, code, msg) = match &r.verdict {
            Ok(()) => ("pass", String::from("0"), String::new()),
            Err(f) => ("fail", f.code.to_string(), f.msg.clone()),
        };
        w.write_record([
            r.id.clone(),
            r.n.to_string(),
            r.m.to_string(),
            mode_name(r.mode).to_string(),
            opt(r.budget),
            opt(r.length),
            opt(r.oracle_distance),
            format!("{:.3}", r.wall_ms),
            verdict.to_string(),
            code,
            msg,
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { graph, alpha, beta, mode, search, out } => {
            cmd_solve(&graph, &alpha, &beta, &mode, &search, out.as_deref())
        }
        Command::Verify { graph, start, sequence, lists, k, once_only, late, max_twice, end } => cmd_verify(
            &graph,
            &start,
            &sequence,
            lists.as_deref(),
            k,
            once_only,
            &late,
            max_twice,
            end.as_deref(),
        ),
        Command::OracleDistance { graph, alpha, beta, k, state_cap } => {
            cmd_oracle_distance(&graph, &alpha, &beta, k, state_cap)
        }
        Command::OracleDiameter { graph, k, state_cap } => cmd_oracle_diameter(&graph, k, state_cap),
        Command::Gen { family, n, d, seed, count, out, colorings } => {
            cmd_gen(&family, n, d, seed, count, out.as_deref(), colorings)
        }
        Command::Bench { corpus, mode, search, state_cap, csv } => {
            cmd_bench(&corpus, &mode, &search, state_cap, csv.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
