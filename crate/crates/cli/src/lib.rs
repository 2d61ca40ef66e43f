//! Command-line front end for the `graphqfi` library.
//!
//! Every subcommand parses its inputs, calls into the library and formats
//! the result; no numerics live here.

mod output;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use graphqfi::counting::{empirical_census, metrology_bound, stabilizer_state_count};
use graphqfi::graph::{build_bundle, bundled_cycle, bundled_star, make_family, parse_graph, partition, Family};
use graphqfi::measurement::{expectation_curve, precision_curve, synthesize_plan};
use graphqfi::noise::{
    qfi_dephasing_approx, qfi_dephasing_exact, qfi_erasure_average_exact, qfi_erasure_cyclic_formula, qfi_erasure_pattern,
    qfi_erasure_single_avg_formula, qfi_erasure_star_formula, ErasurePattern,
};
use graphqfi::oracle::{apply_dephasing, apply_twin_clifford, graph_state_vector, qfi_mixed, qfi_pure};
use graphqfi::verify::{closed_twin_vertices, erasure_oracle_partial_trace, run_suite, Suite};
use graphqfi::{qfi_graph, qfi_graph_lc, Graph};

pub use output::{emit_csv, format_number, format_short, parse_grid, SweepRecord, CSV_HEADER};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    File { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Core(#[from] graphqfi::Error),
    #[error("empty sweep")]
    EmptySweep,
    #[error("unsorted sweep")]
    UnsortedSweep,
    #[error("non-finite value in sweep: {0}")]
    NotFinite(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "graphqfi", version, about = "Quantum Fisher information of graph and stabilizer states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Where the graph comes from: a JSON file or a family spec such as
/// `star:10`, `grid:2,3`, `bstar:6,20` or `bcycle:5,24`.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// Graph JSON file: {"n": int, "edges": [[i, j], ...]}.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Built-in family, name:params.
    #[arg(long)]
    family: Option<String>,
}

#[derive(Args, Debug)]
struct Sink {
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Label for the graph_id column.
    #[arg(long)]
    id: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormulaKind {
    /// Single-erasure average from the class data (e = 1 only).
    Single,
    /// Bundled star with --bundles k.
    Star,
    /// Bundled cycle with --bundles k.
    Cyclic,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Noiseless QFI.
    Qfi {
        #[command(flatten)]
        source: Source,
        /// Also report the value after the true-twin local Clifford.
        #[arg(long)]
        lc: bool,
        /// Also evaluate with the dense state-vector oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Open and closed neighbourhood classes.
    Partition {
        #[command(flatten)]
        source: Source,
    },
    /// Replace each base vertex by a bundle and write the graph JSON.
    Bundle {
        #[command(flatten)]
        base: BundleBase,
        /// Bundle sizes, one per base vertex.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// QFI under iid dephasing over a probability grid.
    Dephase {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        sink: Sink,
        /// start:stop:step
        #[arg(long)]
        p_grid: String,
        /// Closed form (default when no method is selected).
        #[arg(long)]
        exact: bool,
        /// Small-p approximation.
        #[arg(long)]
        approx: bool,
        /// Dense density-matrix oracle (n <= 10).
        #[arg(long)]
        oracle: bool,
    },
    /// QFI after erasures: one pattern (--sites) or averages for e = 1..=e_max.
    Erase {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        sink: Sink,
        /// Average over every pattern of each size up to this.
        #[arg(long, conflicts_with = "sites")]
        e_max: Option<usize>,
        /// A single erasure pattern.
        #[arg(long, value_delimiter = ',')]
        sites: Option<Vec<usize>>,
        /// Exact average by enumeration (default).
        #[arg(long)]
        average: bool,
        /// Family formula for the average.
        #[arg(long, value_enum)]
        formula: Option<FormulaKind>,
        /// Bundle count for --formula star|cyclic.
        #[arg(long)]
        bundles: Option<usize>,
        /// Partial-trace oracle, averaged over patterns.
        #[arg(long)]
        oracle: bool,
    },
    /// Synthesize a local measurement and simulate it.
    Measure {
        #[command(flatten)]
        source: Source,
        /// θ grid, start:stop:step (θ = 0 is uninformative).
        #[arg(long, default_value = "0.01:0.05:0.01")]
        thetas: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare closed forms against the oracle.
    Verify {
        /// Suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
    /// Stabilizer-state counts and the large-QFI lower bound.
    Count {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Also run the exhaustive census (n <= 3) with this QFI threshold.
        #[arg(long)]
        census: Option<f64>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct BundleBase {
    /// Base graph JSON file.
    #[arg(long)]
    base: Option<PathBuf>,
    /// Base graph family, name:params.
    #[arg(long)]
    base_family: Option<String>,
}

/// Parse `argv` (program name first), run the subcommand and return the
/// exit status: 0 success, 1 input error, 2 verification failure.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::File { path: path.to_path_buf(), source })
}

fn family_graph(spec: &str) -> Result<Graph, CliError> {
    let (name, params) = spec.split_once(':').ok_or_else(|| CliError::Usage(format!("family {spec:?} is not name:params")))?;
    let params: Vec<usize> = params
        .split(',')
        .map(|p| p.trim().parse().map_err(|_| CliError::Usage(format!("bad family parameter {p:?}"))))
        .collect::<Result<_, _>>()?;
    let bundled = |f: fn(usize, usize) -> graphqfi::Result<graphqfi::graph::BundledGraph>| match params[..] {
        [k, j] => Ok(f(k, j)?.graph),
        _ => Err(CliError::Usage(format!("{name} takes k,j"))),
    };
    match name {
        "bstar" => bundled(bundled_star),
        "bcycle" => bundled(bundled_cycle),
        _ => Ok(make_family(name.parse::<Family>()?, &params)?),
    }
}

fn load(graph: &Option<PathBuf>, family: &Option<String>) -> Result<(Graph, String), CliError> {
    match (graph, family) {
        (Some(path), _) => {
            let id = path.file_stem().map_or_else(|| "graph".into(), |s| s.to_string_lossy().into_owned());
            Ok((parse_graph(&read_file(path)?)?, id))
        }
        (None, Some(spec)) => Ok((family_graph(spec)?, spec.replace([':', ','], "_"))),
        (None, None) => Err(CliError::Usage("a graph source is required".into())),
    }
}

fn load_source(s: &Source) -> Result<(Graph, String), CliError> {
    load(&s.graph, &s.family)
}

fn write_target(path: &Option<PathBuf>, out: &mut dyn Write, body: impl FnOnce(&mut dyn Write) -> Result<(), CliError>) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut buf = Vec::new();
            body(&mut buf)?;
            fs::write(p, buf).map_err(|source| CliError::File { path: p.clone(), source })
        }
        None => body(out),
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Qfi { source, lc, oracle } => {
            let (g, _) = load_source(&source)?;
            writeln!(out, "Q = {}", format_short(qfi_graph(&g)?.value))?;
            if lc {
                writeln!(out, "Q_LC = {}", format_short(qfi_graph_lc(&g)?.value))?;
            }
            if oracle {
                let psi = graph_state_vector(&g)?;
                writeln!(out, "Q_oracle = {}", format_short(qfi_pure(&psi)))?;
                if lc {
                    let boosted = apply_twin_clifford(&psi, &closed_twin_vertices(&g))?;
                    writeln!(out, "Q_LC_oracle = {}", format_short(qfi_pure(&boosted)))?;
                }
            }
            Ok(())
        }
        Command::Partition { source } => {
            let (g, _) = load_source(&source)?;
            let p = partition(&g);
            let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
            writeln!(out, "n = {}", p.n)?;
            for c in &p.open_classes {
                writeln!(out, "open {{{}}} N = {{{}}}", list(&c.members), list(&c.shared_neighborhood))?;
            }
            for c in &p.closed_classes {
                writeln!(out, "closed {{{}}} N = {{{}}}", list(&c.members), list(&c.shared_neighborhood))?;
            }
            writeln!(out, "sum v^2 = {}", p.open_square_sum())?;
            writeln!(out, "sum u^2 = {}", p.closed_square_sum())?;
            Ok(())
        }
        Command::Bundle { base, sizes, out: path } => {
            let (g, _) = load(&base.base, &base.base_family)?;
            let b = build_bundle(&g, &sizes)?;
            write_target(&path, out, |w| Ok(writeln!(w, "{}", b.graph.to_json())?))
        }
        Command::Dephase { source, sink, p_grid, exact, approx, oracle } => {
            let (g, default_id) = load_source(&source)?;
            let id = sink.id.unwrap_or(default_id);
            let grid = parse_grid(&p_grid)?;
            let exact = exact || !(approx || oracle);
            let psi = if oracle { Some(graph_state_vector(&g)?) } else { None };
            let all: Vec<usize> = (0..g.n()).collect();
            let mut records = Vec::new();
            for &p in &grid {
                if exact {
                    let v = qfi_dephasing_exact(&g, p)?;
                    records.push(SweepRecord::new(p, v.value, v.method.tag(), &id));
                }
                if approx {
                    let v = qfi_dephasing_approx(&g, p)?;
                    records.push(SweepRecord::new(p, v.value, v.method.tag(), &id));
                }
                if let Some(psi) = &psi {
                    let v = qfi_mixed(&apply_dephasing(psi, p)?, &all)?;
                    records.push(SweepRecord::new(p, v, "oracle", &id));
                }
            }
            write_target(&sink.out, out, |w| emit_csv(&records, w))
        }
        Command::Erase { source, sink, e_max, sites, average, formula, bundles, oracle } => {
            let (g, default_id) = load_source(&source)?;
            let id = sink.id.unwrap_or(default_id);
            let records = match (sites, e_max) {
                (Some(sites), _) => {
                    let pat = ErasurePattern::new(g.n(), &sites)?;
                    let e = pat.len() as f64;
                    let v = qfi_erasure_pattern(&g, &pat)?;
                    let mut r = vec![SweepRecord::new(e, v.value, v.method.tag(), &id)];
                    if oracle {
                        r.push(SweepRecord::new(e, erasure_oracle_partial_trace(&g, &pat)?, "oracle", &id));
                    }
                    r
                }
                (None, Some(e_max)) => erase_sweep(&g, &id, e_max, average || (formula.is_none() && !oracle), formula, bundles, oracle)?,
                (None, None) => return Err(CliError::Usage("erase needs --sites or --e-max".into())),
            };
            write_target(&sink.out, out, |w| emit_csv(&records, w))
        }
        Command::Measure { source, thetas, out: path } => {
            let (g, _) = load_source(&source)?;
            let plan = synthesize_plan(&g)?;
            let thetas = parse_grid(&thetas)?;
            let values = expectation_curve(&plan, &thetas)?;
            let precision = precision_curve(&plan, &thetas)?;
            writeln!(out, "observable = {}", plan.observable())?;
            writeln!(out, "extended = {}", plan.is_extended())?;
            if plan.is_extended() {
                let edges: Vec<String> = plan.graph().edges().iter().map(|(i, j)| format!("[{i},{j}]")).collect();
                writeln!(out, "graph = {}", edges.join(" "))?;
            }
            writeln!(out, "Q = {}", format_short(plan.target_qfi()))?;
            writeln!(out, "theta domain = {}", format_number(plan.theta_domain()))?;
            write_target(&path, out, |w| {
                let mut text = String::from("theta,expectation,precision\n");
                for ((t, v), d) in thetas.iter().zip(&values).zip(&precision) {
                    text.push_str(&format!("{},{},{}\n", format_number(*t), format_number(*v), format_number(*d)));
                }
                Ok(w.write_all(text.as_bytes())?)
            })
        }
        Command::Verify { suite, max_n } => {
            let suites: Vec<Suite> = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse()?] };
            let mut failed = Vec::new();
            for s in suites {
                let report = run_suite(s, max_n)?;
                writeln!(out, "{report}")?;
                if !report.passed() {
                    failed.push(s.name());
                }
            }
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Verification(failed.join(", ")))
            }
        }
        Command::Count { n, epsilon, census } => {
            let total = stabilizer_state_count(n);
            writeln!(out, "N_{n} = {} (~{})", total, total.scientific(6))?;
            if let Some(eps) = epsilon {
                let b = metrology_bound(n, eps)?;
                writeln!(out, "k = {}", b.k)?;
                writeln!(out, "bound (full) = {} (~{})", b.full, b.full.scientific(6))?;
                writeln!(out, "bound (simple) = {} (~{})", b.simple, b.simple.scientific(6))?;
            }
            if let Some(threshold) = census {
                let c = empirical_census(n as usize, threshold)?;
                writeln!(out, "census total = {}", c.total)?;
                writeln!(out, "census with Q >= {} = {}", format_short(threshold), c.above_threshold)?;
            }
            Ok(())
        }
    }
}

fn erase_sweep(
    g: &Graph,
    id: &str,
    e_max: usize,
    average: bool,
    formula: Option<FormulaKind>,
    bundles: Option<usize>,
    oracle: bool,
) -> Result<Vec<SweepRecord>, CliError> {
    let n = g.n();
    if e_max == 0 || e_max > n {
        return Err(CliError::Usage(format!("--e-max must lie in 1..={n}")));
    }
    let k = || bundles.ok_or_else(|| CliError::Usage("--formula star|cyclic needs --bundles".into()));
    let mut records = Vec::new();
    for e in 1..=e_max {
        let ef = e as f64;
        if average {
            records.push(SweepRecord::new(ef, qfi_erasure_average_exact(g, e)?, "erasure-average", id));
        }
        match formula {
            Some(FormulaKind::Single) if e == 1 => {
                records.push(SweepRecord::new(ef, qfi_erasure_single_avg_formula(g)?, "single-formula", id));
            }
            Some(FormulaKind::Single) => {}
            Some(FormulaKind::Star) => records.push(SweepRecord::new(ef, qfi_erasure_star_formula(n, k()?, e)?, "star-formula", id)),
            Some(FormulaKind::Cyclic) => {
                records.push(SweepRecord::new(ef, qfi_erasure_cyclic_formula(n, k()?, e)?, "cyclic-formula", id))
            }
            None => {}
        }
        if oracle {
            let mut total = 0.0;
            let mut count = 0usize;
            for_each_pattern(n, e, |sites| {
                let pat = ErasurePattern::new(n, sites)?;
                total += erasure_oracle_partial_trace(g, &pat)?;
                count += 1;
                Ok(())
            })?;
            records.push(SweepRecord::new(ef, total / count as f64, "oracle", id));
        }
    }
    Ok(records)
}

fn for_each_pattern(
    n: usize,
    e: usize,
    mut visit: impl FnMut(&[usize]) -> Result<(), CliError>,
) -> Result<(), CliError> {
    fn rec(
        start: usize,
        n: usize,
        e: usize,
        cur: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> Result<(), CliError>,
    ) -> Result<(), CliError> {
        if cur.len() == e {
            return visit(cur);
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, e, cur, visit)?;
            cur.pop();
        }
        Ok(())
    }
    rec(0, n, e, &mut Vec::with_capacity(e), &mut visit)
}
