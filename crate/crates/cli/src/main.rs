use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use templex::genex::{self, GenexOptions, CYCLE_CAP_ENV};
use templex::ingest::{self, BramahConfig, SimulationConfig, System, Trajectory};
use templex::{fixtures, homology, tmv, AnalysisReport, CellComplex, Error, Itinerary, PoincareMode, Templex};

macro_rules! out {
    ($($t:tt)*) => { writeln!(io::stdout().lock(), $($t)*)? };
}

macro_rules! out_raw {
    ($($t:tt)*) => { write!(io::stdout().lock(), $($t)*)? };
}

#[derive(Parser)]
#[command(name = "templex", version, about = "Homology and generatex invariants of templexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integer homology and orientability of a complex (or a templex's complex).
    Homology {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Templex inspection.
    #[command(subcommand)]
    Templex(TemplexCommand),
    /// Generatex classes, orders, stripexes and bonds.
    Genex {
        file: PathBuf,
        #[command(flatten)]
        genex: GenexArgs,
        #[arg(long)]
        json: bool,
    },
    /// Time-ordered decomposition of an itinerary into generatex labels.
    Tmv {
        templex: PathBuf,
        itinerary: PathBuf,
        #[command(flatten)]
        genex: GenexArgs,
        /// Write the step series χ(t) as CSV.
        #[arg(long, value_name = "CSV")]
        plot: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Changes in the set of active generatex classes over sliding windows.
    Tipping {
        templex: PathBuf,
        itinerary: PathBuf,
        #[arg(long)]
        window: f64,
        #[arg(long)]
        stride: f64,
        #[command(flatten)]
        genex: GenexArgs,
        #[arg(long)]
        json: bool,
    },
    /// Integrate the Rössler or Lorenz system with fixed-step RK4.
    Simulate {
        #[arg(long, value_enum)]
        system: SystemName,
        #[arg(long, default_value_t = 1000.0)]
        duration: f64,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
        #[arg(long, default_value_t = 100.0)]
        transient: f64,
        #[arg(long, default_value_t = 1)]
        sample_every: usize,
        /// Trajectory CSV; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the itinerary on the bundled templex's flow partition.
        #[arg(long, value_name = "CSV")]
        itinerary: Option<PathBuf>,
    },
    /// Time-delay embedding of one column of a trajectory CSV.
    Embed {
        input: PathBuf,
        #[arg(long)]
        tau: usize,
        #[arg(long)]
        dim: usize,
        /// 1-based state column.
        #[arg(long, default_value_t = 1)]
        column: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Best-effort templex construction from a trajectory.
    Build {
        input: PathBuf,
        #[arg(long)]
        cells: usize,
        #[arg(long, default_value_t = 2)]
        dimension: usize,
        #[arg(long)]
        skip_dimension_check: bool,
        #[arg(long, default_value_t = 1)]
        min_transitions: usize,
        /// Templex JSON.
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_name = "CSV")]
        itinerary: Option<PathBuf>,
        #[arg(long, value_name = "JSON")]
        charts: Option<PathBuf>,
    },
    /// Full report: homology, loci, classes, bonds and, with an itinerary, TMV statistics.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        itinerary: Option<PathBuf>,
        #[command(flatten)]
        genex: GenexArgs,
        #[arg(long)]
        json: bool,
    },
    /// Run the named checks against the bundled fixtures.
    Fixtures {
        #[arg(long)]
        filter: Option<String>,
        /// Read fixtures from this directory instead of the bundled copies.
        #[arg(long)]
        dir: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Export the generatex multigraph as DOT or the full analysis as JSON.
    Export {
        file: PathBuf,
        #[arg(long, conflicts_with = "json", required_unless_present = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        genex: GenexArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum TemplexCommand {
    /// Digraph size, junction loci and Poincaré edges.
    Info {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct GenexArgs {
    /// Poincaré-edge detection.
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    mode: Mode,
    /// Maximum number of elementary cycles to enumerate.
    #[arg(long, env = CYCLE_CAP_ENV)]
    cap: Option<usize>,
}

impl GenexArgs {
    fn options(&self) -> anyhow::Result<GenexOptions> {
        let mut o = GenexOptions { mode: self.mode.into(), ..GenexOptions::default() };
        if let Some(cap) = self.cap {
            if cap == 0 {
                return Err(Error::InvalidParameter("cycle cap must be positive".into()).into());
            }
            o.cap = cap;
        }
        Ok(o)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Auto,
    Complex,
    Digraph,
}

impl From<Mode> for PoincareMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Auto => PoincareMode::Auto,
            Mode::Complex => PoincareMode::Complex,
            Mode::Digraph => PoincareMode::Digraph,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemName {
    Rossler,
    Lorenz,
}

fn load_templex(path: &Path) -> anyhow::Result<Templex> {
    Templex::load(path).with_context(|| format!("reading {}", path.display()))
}

fn load_itinerary(path: &Path) -> anyhow::Result<Itinerary> {
    Itinerary::load_csv(path).with_context(|| format!("reading {}", path.display()))
}

/// Accepts a bare complex or a templex carrying one.
fn load_complex(path: &Path) -> anyhow::Result<CellComplex> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(Error::from).with_context(|| format!("reading {}", path.display()))?;
    if value.get("cells").is_some() {
        return CellComplex::from_json_value(value).with_context(|| format!("reading {}", path.display()));
    }
    let t = Templex::from_json_value(value).with_context(|| format!("reading {}", path.display()))?;
    t.complex.ok_or_else(|| {
        anyhow::Error::from(Error::Schema { location: "complex".into(), message: "templex has no complex".into() })
            .context(format!("reading {}", path.display()))
    })
}

fn writer(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).map_err(Error::from).with_context(|| format!("writing {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn print_json(v: &impl serde::Serialize) -> anyhow::Result<()> {
    out!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn decompose(t: &Templex, itinerary: &Path, opts: &GenexOptions) -> anyhow::Result<(genex::GeneratexAnalysis, templex::TmvDecomposition)> {
    let a = genex::analyze(t, opts)?;
    let it = load_itinerary(itinerary)?;
    let d = tmv::label_trajectory(&it, &t.digraph, &a.classes, &a.poincare_edges)
        .with_context(|| format!("labelling {}", itinerary.display()))?;
    Ok((a, d))
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Homology { file, json } => {
            let k = load_complex(&file)?;
            let groups = homology::homology(&k)?;
            let table = homology::betti_table(&k)?;
            if json {
                print_json(&json!({ "groups": groups, "betti_table": table }))?;
            } else {
                for g in &groups {
                    out!("H{} = {}", g.k, g);
                }
                out!("betti: {table}");
                if let Some(w) = &table.witness {
                    out!("non-orientability witness: {w}");
                }
            }
        }
        Command::Templex(TemplexCommand::Info { file, mode, json }) => {
            let t = load_templex(&file)?;
            let loci = if t.has_binding() { t.junction_loci()? } else { Vec::new() };
            let edges = t.poincare_edges_with(mode.into())?;
            if json {
                print_json(&json!({
                    "nodes": t.digraph.nodes(),
                    "edges": t.digraph.edges(),
                    "bound": t.has_binding(),
                    "loci": loci,
                    "poincare_edges": edges.iter().map(ToString::to_string).collect::<Vec<_>>(),
                }))?;
            } else {
                out!("digraph: {} nodes, {} edges", t.digraph.len(), t.digraph.edges().len());
                match &t.complex {
                    Some(k) => out!("complex: dimension {}, {} top-cells", k.dimension(), k.top_cells().len()),
                    None => out!("complex: none"),
                }
                for l in &loci {
                    let cells: Vec<String> = l.cells.iter().map(ToString::to_string).collect();
                    out!("locus {{{}}} {}: in {{{}}} out {{{}}}", cells.join(", "), l.kind, l.ingoing.join(", "), l.outgoing.join(", "));
                }
                let shown: Vec<String> = edges.iter().map(ToString::to_string).collect();
                out!("Poincaré edges: {}", shown.join(" "));
            }
        }
        Command::Genex { file, genex: g, json } => {
            let t = load_templex(&file)?;
            let a = genex::analyze(&t, &g.options()?)?;
            if json {
                print_json(&a)?;
            } else {
                let mut r = AnalysisReport::build(&t, &a)?;
                r.homology = None;
                r.orientable = None;
                out_raw!("{r}");
            }
        }
        Command::Tmv { templex, itinerary, genex: g, plot, json } => {
            let t = load_templex(&templex)?;
            let (a, d) = decompose(&t, &itinerary, &g.options()?)?;
            if let Some(p) = plot {
                d.write_step_csv(writer(Some(&p))?)?;
            }
            if json {
                print_json(&json!({ "decomposition": d, "stats": tmv::tmv_stats(&d) }))?;
            } else {
                out_raw!("{}", AnalysisReport::build(&t, &a)?.with_tmv(&d));
            }
        }
        Command::Tipping { templex, itinerary, window, stride, genex: g, json } => {
            let t = load_templex(&templex)?;
            let (_, d) = decompose(&t, &itinerary, &g.options()?)?;
            let timeline = tmv::tipping_timeline(&d, window, stride)?;
            if json {
                print_json(&timeline)?;
            } else {
                let names = |s: &std::collections::BTreeSet<usize>| s.iter().map(|k| format!("G{k}")).collect::<Vec<_>>().join(" ");
                for w in &timeline.windows {
                    out!("[{}, {}] {}", w.start, w.end, names(&w.active));
                }
                for e in &timeline.events {
                    out!("event at {}: {{{}}} → {{{}}}", e.time, names(&e.before), names(&e.after));
                }
                if timeline.events.is_empty() {
                    out!("no tipping events");
                }
            }
        }
        Command::Simulate { system, duration, dt, transient, sample_every, output, itinerary } => {
            let system = match system {
                SystemName::Rossler => System::rossler(),
                SystemName::Lorenz => System::lorenz(),
            };
            let cfg = SimulationConfig { transient, sample_every, ..SimulationConfig::new(system, duration, dt) };
            let traj = ingest::simulate(&cfg)?;
            eprintln!("{}", serde_json::to_string(&cfg)?);
            traj.write_csv(writer(output.as_deref())?)?;
            if let Some(p) = itinerary {
                let assignment = match system {
                    System::Rossler { .. } => ingest::rossler_partition(&traj)?,
                    System::Lorenz { .. } => ingest::lorenz_partition(&traj)?,
                };
                assignment.to_itinerary()?.write_csv(writer(Some(&p))?)?;
            }
        }
        Command::Embed { input, tau, dim, column, output } => {
            let traj = Trajectory::load_csv(&input).with_context(|| format!("reading {}", input.display()))?;
            if column == 0 || column > traj.dim() {
                bail!(Error::InvalidParameter(format!("column {column} outside 1..={}", traj.dim())));
            }
            let e = ingest::delay_embed(&traj.column(column - 1), tau, dim)?;
            eprintln!("{}", json!({ "source": input, "column": column, "tau": tau, "dim": dim }));
            let times = traj.times[..e.len()].to_vec();
            Trajectory::new(times, e.points)?.write_csv(writer(output.as_deref())?)?;
        }
        Command::Build { input, cells, dimension, skip_dimension_check, min_transitions, output, itinerary, charts } => {
            let traj = Trajectory::load_csv(&input).with_context(|| format!("reading {}", input.display()))?;
            let cfg = BramahConfig {
                dimension,
                check_dimension: !skip_dimension_check,
                min_transitions,
                ..BramahConfig::new(cells)
            };
            let out = ingest::build_bramah(&traj, &cfg)?;
            out.templex.save(&output).with_context(|| format!("writing {}", output.display()))?;
            if let Some(p) = itinerary {
                out.assignment.to_itinerary()?.write_csv(writer(Some(&p))?)?;
            }
            if let Some(p) = charts {
                writeln!(writer(Some(&p))?, "{}", serde_json::to_string_pretty(&out.charts)?)?;
            }
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
        }
        Command::Analyze { file, itinerary, genex: g, json } => {
            let t = load_templex(&file)?;
            let opts = g.options()?;
            let report = match itinerary {
                Some(it) => {
                    let (a, d) = decompose(&t, &it, &opts)?;
                    AnalysisReport::build(&t, &a)?.with_tmv(&d)
                }
                None => AnalysisReport::analyze(&t, &opts)?,
            };
            if json {
                out!("{}", report.to_json());
            } else {
                out_raw!("{report}");
            }
        }
        Command::Fixtures { filter, dir, json } => {
            let results = fixtures::run_checks(filter.as_deref(), dir.as_deref());
            if json {
                print_json(&results)?;
            } else {
                for r in &results {
                    out!("{} {}", if r.passed { "PASS" } else { "FAIL" }, r.name);
                    for line in r.detail.lines() {
                        out!("    {line}");
                    }
                }
            }
            if results.iter().any(|r| !r.passed) {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Export { file, dot, genex: g, output, .. } => {
            let t = load_templex(&file)?;
            let a = genex::analyze(&t, &g.options()?)?;
            let mut w = writer(output.as_deref())?;
            if dot {
                write!(w, "{}", a.multigraph().to_dot())?;
            } else {
                writeln!(w, "{}", serde_json::to_string_pretty(&a)?)?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) {
        return 0;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::CycleCapExceeded { .. }) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let code = exit_code(&e);
            if code != 0 {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(code)
        }
    }
}
