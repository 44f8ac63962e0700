//! `agp`: solve, benchmark, render and generate art gallery instances.

mod bench;
mod render;

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use agp_core::instances::{
    gen_comb, gen_ortho, gen_simple, gen_spike, gen_vonkoch, gen_with_holes, parse_polygon, write_polygon,
};
use agp_core::geometry::Polygon;
use agp_core::pointgen::{GuardMode, InitialStrategy};
use agp_core::solver::{solve, GuardModel, Relaxation, Solution, SolverConfig, Status};
use clap::{Args, Parser, Subcommand, ValueEnum};

use render::{render_svg, RenderOptions};

const EXIT_ERROR: u8 = 1;
const EXIT_NOT_OPTIMAL: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 66;

#[derive(Parser)]
#[command(name = "agp", version, about = "Exact art gallery solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and print bounds and guards.
    Solve {
        input: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write an SVG of the solution.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write a one-row CSV record.
        #[arg(long)]
        stats: Option<PathBuf>,
        /// Write the solution text.
        #[arg(long)]
        solution: Option<PathBuf>,
    },
    /// Solve every instance file in a directory and write CSV records.
    Bench {
        dir: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// CSV output; stdout if omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Fill the timing columns (makes output run dependent).
        #[arg(long)]
        timings: bool,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Draw an instance with an optional solution as SVG.
    Render {
        input: PathBuf,
        /// Solution file as written by `solve --solution`.
        #[arg(long)]
        solution: Option<PathBuf>,
        /// Shade guard visibility regions.
        #[arg(long)]
        vis: bool,
        /// Colour arrangement faces by number of covering guards.
        #[arg(long)]
        arrangement: bool,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Write a generated instance in the canonical format.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        /// Vertex count for simple and orthogonal polygons, teeth or units
        /// for comb and spike, level for von Koch.
        #[arg(long, short, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Holes punched into a simple polygon (kind `holes`).
        #[arg(long, default_value_t = 2)]
        holes: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Comb,
    Simple,
    Ortho,
    Vonkoch,
    Spike,
    Holes,
}

#[derive(Clone, Copy, ValueEnum)]
enum GuardsArg {
    Point,
    Vertex,
}

#[derive(Clone, Copy, ValueEnum)]
enum GuardGenArg {
    AvpVertices,
    AvpInterior,
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

fn parse_init(s: &str) -> Result<InitialStrategy, String> {
    Ok(match s {
        "vertices" => InitialStrategy::JustVertices,
        "convex" => InitialStrategy::ConvexVertices,
        "chwa" => InitialStrategy::ChwaPoints,
        "shadow" => InitialStrategy::ShadowAvps,
        "grid" => InitialStrategy::RegularGrid(5),
        _ => match s.strip_prefix("grid:").map(str::parse::<usize>) {
            Some(Ok(k)) if k > 0 => InitialStrategy::RegularGrid(k),
            _ => return Err("expected vertices, convex, chwa, shadow, grid or grid:K".to_string()),
        },
    })
}

fn parse_secs(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err("expected a positive number of seconds".to_string()),
    }
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, value_enum, default_value = "point")]
    guards: GuardsArg,
    /// Solve the fractional relaxation.
    #[arg(long)]
    fractional: bool,
    /// Initial witnesses: vertices, convex, chwa, shadow, grid or grid:K.
    #[arg(long, value_parser = parse_init)]
    init: Option<InitialStrategy>,
    #[arg(long = "guard-gen", value_enum, default_value = "avp-interior")]
    guard_gen: GuardGenArg,
    /// Seconds.
    #[arg(long, env = "AGP_TIME_LIMIT", default_value = "60", value_parser = parse_secs)]
    time_limit: f64,
    #[arg(long = "max-iter", default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    max_iter: u64,
    #[arg(long, value_enum, default_value = "on")]
    lagrangian: OnOff,
    /// Compute upper bounds every iteration.
    #[arg(long)]
    no_defer: bool,
    /// Only interior witnesses for uncovered regions.
    #[arg(long)]
    no_edge_witnesses: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            guard_model: match self.guards {
                GuardsArg::Point => GuardModel::Point,
                GuardsArg::Vertex => GuardModel::Vertex,
            },
            relaxation: if self.fractional {
                Relaxation::Fractional
            } else {
                Relaxation::Integer
            },
            initial_strategy: self.init,
            guard_mode: match self.guard_gen {
                GuardGenArg::AvpVertices => GuardMode::LightAvpVertices,
                GuardGenArg::AvpInterior => GuardMode::LightAvpInterior,
            },
            time_limit: Duration::from_secs_f64(self.time_limit),
            max_iterations: self.max_iter as usize,
            defer_upper_bound: !self.no_defer,
            use_lagrangian: matches!(self.lagrangian, OnOff::On),
            edge_witnesses: !self.no_edge_witnesses,
            seed: self.seed,
            ..SolverConfig::default()
        }
    }
}

/// An error with its exit code.
struct Failure(u8, String);

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure(EXIT_IO, e.to_string())
    }
}

fn io_err(path: &Path, e: io::Error) -> Failure {
    Failure(EXIT_IO, format!("{}: {e}", path.display()))
}

fn fail(e: impl std::fmt::Display) -> Failure {
    Failure(EXIT_ERROR, e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn write(path: &Path, content: &[u8]) -> Result<(), Failure> {
    fs::write(path, content).map_err(|e| io_err(path, e))
}

fn load(path: &Path) -> Result<Polygon, Failure> {
    parse_polygon(&read(path)?).map_err(|e| Failure(EXIT_ERROR, format!("{}: {e}", path.display())))
}

fn cmd_solve(
    input: &Path,
    args: &SolverArgs,
    svg: Option<&Path>,
    stats: Option<&Path>,
    solution: Option<&Path>,
) -> Result<u8, Failure> {
    let poly = load(input)?;
    let cfg = args.config();
    let sol = solve(&poly, &cfg).map_err(fail)?;
    print!("{}", sol.to_text());
    if let Some(p) = solution {
        write(p, sol.to_text().as_bytes())?;
    }
    if let Some(p) = svg {
        let opts = RenderOptions {
            visibility: true,
            arrangement: false,
        };
        let guards: Vec<_> = sol.guard_points();
        write(p, render_svg(&poly, &guards, opts).map_err(fail)?.as_bytes())?;
    }
    if let Some(p) = stats {
        let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let rec = bench::RunRecord {
            instance: input.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
            class: bench::class_of(&stem),
            n: Some(poly.n()),
            config: bench::config_digest(&cfg),
            solution: Ok(sol.clone()),
        };
        let mut buf = Vec::new();
        bench::write_csv(&mut buf, &[rec], true).map_err(fail)?;
        write(p, &buf)?;
    }
    Ok(if sol.status == Status::ProvenOptimal { 0 } else { EXIT_NOT_OPTIMAL })
}

fn cmd_bench(dir: &Path, args: &SolverArgs, out: Option<&Path>, timings: bool, jobs: usize) -> Result<u8, Failure> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| io_err(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    let cfg = args.config();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(fail)?;
    let records = pool.install(|| bench::run_all(&paths, &cfg));
    let mut buf = Vec::new();
    bench::write_csv(&mut buf, &records, timings).map_err(fail)?;
    match out {
        Some(p) => {
            write(p, &buf)?;
            print!("{}", bench::summary(&records));
        }
        None => {
            io::Write::write_all(&mut io::stdout(), &buf)?;
            eprint!("{}", bench::summary(&records));
        }
    }
    Ok(0)
}

fn cmd_render(input: &Path, solution: Option<&Path>, vis: bool, arrangement: bool, out: &Path) -> Result<u8, Failure> {
    let poly = load(input)?;
    let guards = match solution {
        Some(p) => Solution::from_text(&read(p)?)
            .map_err(|e| Failure(EXIT_ERROR, format!("{}: {e}", p.display())))?
            .guard_points(),
        None => Vec::new(),
    };
    let svg = render_svg(&poly, &guards, RenderOptions { visibility: vis, arrangement }).map_err(fail)?;
    write(out, svg.as_bytes())?;
    Ok(0)
}

fn cmd_gen(kind: GenKind, n: usize, seed: u64, holes: usize, out: Option<&Path>) -> Result<u8, Failure> {
    let poly = match kind {
        GenKind::Comb => Ok(gen_comb(n.max(1))),
        GenKind::Simple => gen_simple(n, seed),
        GenKind::Ortho => gen_ortho(n, seed),
        GenKind::Vonkoch => gen_vonkoch(n, seed),
        GenKind::Spike => gen_spike(n, seed),
        GenKind::Holes => {
            let main = gen_simple(n, seed).map_err(fail)?;
            let shapes = (0..holes as u64)
                .map(|i| gen_simple(6, seed.wrapping_add(1 + i)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(fail)?;
            gen_with_holes(&main, &shapes, seed)
        }
    }
    .map_err(fail)?;
    let text = write_polygon(&poly);
    match out {
        Some(p) => write(p, text.as_bytes())?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Solve {
            input,
            solver,
            svg,
            stats,
            solution,
        } => cmd_solve(&input, &solver, svg.as_deref(), stats.as_deref(), solution.as_deref()),
        Command::Bench {
            dir,
            solver,
            out,
            timings,
            jobs,
        } => cmd_bench(&dir, &solver, out.as_deref(), timings, jobs),
        Command::Render {
            input,
            solution,
            vis,
            arrangement,
            out,
        } => cmd_render(&input, solution.as_deref(), vis, arrangement, &out),
        Command::Gen {
            kind,
            n,
            seed,
            holes,
            out,
        } => cmd_gen(kind, n, seed, holes, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("agp: {msg}");
            ExitCode::from(code)
        }
    }
}
