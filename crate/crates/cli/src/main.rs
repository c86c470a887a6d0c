//! `surfclass`: classify triangulated surfaces given as gluing tables.
//!
//! Exit status: 0 on success or "Yes", 1 on "No" or an invalid surface,
//! 2 on parse, I/O or usage errors, 3 when a metered run exceeds its budget
//! or time limit.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use surface_core::connectivity::count_components;
use surface_core::space::{bench_space, BENCH_SIZES};
use surface_core::{
    boundary_identification_graph, check_surface, classify, default_budget, double_cover, face_dual,
    generate, homeomorphic, normal_form_name, vertex_identification_graph, ConnectivityOracle, Engine, Error,
    FamilySpec, InvariantList, MeteredEngine, MeteredWorkspace, Mutation, SavitchOracle, Triangulation,
    UnionFindOracle,
};

#[derive(Parser, Debug)]
#[command(name = "surfclass", version, about = "Decide homeomorphism of triangulated compact surfaces")]
struct Cli {
    #[arg(long, value_enum, default_value_t = EngineArg::Baseline, global = true)]
    engine: EngineArg,

    #[arg(long, value_enum, default_value_t = OracleArg::Unionfind, global = true)]
    oracle: OracleArg,

    /// Write the metered run's space report (JSON) here.
    #[arg(long, value_name = "PATH", global = true)]
    space_report: Option<PathBuf>,

    /// Seed for commands that randomize (generate, bench-space).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Work-memory budget for the metered engine; 0 means unlimited.
    #[arg(long, value_name = "BITS", global = true)]
    budget_bits: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Baseline,
    Metered,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OracleArg {
    Unionfind,
    Savitch,
    Derand,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum GraphKind {
    Dual,
    #[value(name = "K")]
    K,
    #[value(name = "Kprime")]
    Kprime,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a gluing table; prints one violation per line.
    Check { file: PathBuf },
    /// Print the sorted invariant triple of every component.
    Classify { file: PathBuf },
    /// Invariants of a connected surface, with its normal-form name.
    Invariants { file: PathBuf },
    /// Print "Yes" if the two surfaces are homeomorphic, else "No".
    Homeomorphic { first: PathBuf, second: PathBuf },
    /// Print the orientation double cover as a table.
    DoubleCover { file: PathBuf },
    /// Print an auxiliary graph as `v <n>` followed by `e <a> <b>` lines.
    Graph {
        #[arg(long, value_enum)]
        kind: GraphKind,
        file: PathBuf,
    },
    /// Print a generated triangulation, e.g. `"orientable(2):b=1 + moebius"`.
    Generate { spec: String },
    /// Metered classification of growing spheres; one JSON report per size.
    BenchSpace {
        /// Directory for `space-<n>.json`; reports also go to stdout.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        /// Overall wall-clock limit in seconds.
        #[arg(long)]
        limit_secs: Option<u64>,
    },
}

/// Why a run stopped, mapped onto the exit status.
#[derive(Debug)]
enum Failure {
    Input(anyhow::Error),
    Limit(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(Error::BudgetExceeded { .. } | Error::DeadlineExceeded) => Failure::Limit(e),
            _ => Failure::Input(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::new(e).into()
    }
}

type Outcome = Result<ExitCode, Failure>;

fn read_table(path: &Path) -> anyhow::Result<Triangulation> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Triangulation::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

struct Oracles {
    uf: UnionFindOracle,
    savitch: SavitchOracle,
}

impl Cli {
    fn oracle<'a>(&self, o: &'a Oracles) -> anyhow::Result<&'a dyn ConnectivityOracle> {
        match (self.engine, self.oracle) {
            (_, OracleArg::Derand) => bail!("oracle `derand` is not available in this build; use `savitch`"),
            (EngineArg::Metered, OracleArg::Unionfind) => {
                bail!("the metered engine needs a space-bounded oracle (`--oracle savitch`)")
            }
            (_, OracleArg::Unionfind) => Ok(&o.uf),
            (_, OracleArg::Savitch) => Ok(&o.savitch),
        }
    }

    fn workspace(&self, tri: &Triangulation) -> MeteredWorkspace {
        MeteredWorkspace::new(self.budget_bits.unwrap_or_else(|| default_budget(tri.tape_symbols())))
    }

    fn write_report(&self, ws: &MeteredWorkspace, tri: &Triangulation) -> anyhow::Result<()> {
        if let Some(path) = &self.space_report {
            let json = ws.report(tri.tape_symbols()).to_json();
            fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    }

    /// Classification honouring `--engine`, `--budget-bits` and `--space-report`.
    fn classify(
        &self,
        tri: &Triangulation,
        oracle: &dyn ConnectivityOracle,
    ) -> Result<InvariantList, Failure> {
        match self.engine {
            EngineArg::Baseline => Ok(classify(tri, oracle, Engine::Baseline)?),
            EngineArg::Metered => {
                let ws = self.workspace(tri);
                let result = MeteredEngine::new(oracle).classify(tri, &ws);
                self.write_report(&ws, tri)?;
                Ok(result?)
            }
        }
    }
}

fn invalid(tri: &Triangulation) -> Option<ExitCode> {
    let violations = check_surface(tri).err()?;
    for v in &violations {
        eprintln!("{v}");
    }
    eprintln!("not a valid surface ({} violations)", violations.len());
    Some(ExitCode::from(1))
}

fn run(cli: &Cli) -> Outcome {
    let oracles = Oracles { uf: UnionFindOracle::new(), savitch: SavitchOracle };
    match &cli.command {
        Command::Check { file } => {
            let tri = read_table(file)?;
            let ok = match cli.engine {
                EngineArg::Baseline => check_surface(&tri).is_ok(),
                EngineArg::Metered => {
                    let ws = cli.workspace(&tri);
                    let engine = MeteredEngine::new(cli.oracle(&oracles)?);
                    let ok = engine.check_surface(&surface_core::stream::InputTable::new(&tri), &ws);
                    cli.write_report(&ws, &tri)?;
                    ok?
                }
            };
            if let Err(violations) = check_surface(&tri) {
                for v in violations {
                    println!("{v}");
                }
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Classify { file } => {
            let tri = read_table(file)?;
            let oracle = cli.oracle(&oracles)?;
            if let Some(code) = invalid(&tri) {
                return Ok(code);
            }
            for t in cli.classify(&tri, oracle)?.triples() {
                let name = normal_form_name(*t).map(|n| n.to_string()).unwrap_or_default();
                println!("{} {} {}\t{name}", t.o, t.chi, t.b);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Invariants { file } => {
            let tri = read_table(file)?;
            let oracle = cli.oracle(&oracles)?;
            if let Some(code) = invalid(&tri) {
                return Ok(code);
            }
            let list = cli.classify(&tri, oracle)?;
            let [t] = list.triples() else {
                eprintln!("invariants need a connected surface; this one has {} components", list.len());
                return Ok(ExitCode::from(1));
            };
            let vertices = count_components(oracle, &vertex_identification_graph(&tri))?;
            let name = normal_form_name(*t)?;
            println!("orientable {}", t.o == 0);
            println!("euler_characteristic {}", t.chi);
            println!("boundary_components {}", t.b);
            println!("vertices {vertices}");
            println!("unglued_edges {}", tri.boundary_edge_count());
            println!("triangles {}", tri.triangle_count());
            println!("name {name}");
            if let Some(common) = name.common_name() {
                println!("common_name {common}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Homeomorphic { first, second } => {
            let (a, b) = (read_table(first)?, read_table(second)?);
            let oracle = cli.oracle(&oracles)?;
            for (idx, tri) in [&a, &b].into_iter().enumerate() {
                if let Err(v) = check_surface(tri) {
                    eprintln!("{}", Error::InvalidSurface { input: Some(idx + 1), violations: v.len() });
                    return Ok(ExitCode::from(1));
                }
            }
            let same = match cli.engine {
                EngineArg::Baseline => homeomorphic(&a, &b, oracle, Engine::Baseline)?,
                EngineArg::Metered => cli.classify(&a, oracle)? == cli.classify(&b, oracle)?,
            };
            println!("{}", if same { "Yes" } else { "No" });
            Ok(if same { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::DoubleCover { file } => {
            let tri = read_table(file)?;
            println!("{}", double_cover(&tri));
            Ok(ExitCode::SUCCESS)
        }
        Command::Graph { kind, file } => {
            let tri = read_table(file)?;
            let g = match kind {
                GraphKind::Dual => face_dual(&tri),
                GraphKind::K => vertex_identification_graph(&tri),
                GraphKind::Kprime => boundary_identification_graph(&tri),
            };
            print!("{}", g.to_text());
            Ok(ExitCode::SUCCESS)
        }
        Command::Generate { spec } => {
            let mut spec: FamilySpec = spec.parse()?;
            if let Some(seed) = cli.seed {
                spec = spec.with_mutation(Mutation::Relabel { seed });
            }
            println!("{}", generate(&spec)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::BenchSpace { out_dir, sizes, limit_secs } => {
            if cli.engine != EngineArg::Metered {
                return Err(Failure::Input(anyhow::anyhow!("bench-space needs `--engine metered`")));
            }
            let engine = MeteredEngine::new(cli.oracle(&oracles)?);
            let sizes = sizes.clone().unwrap_or_else(|| BENCH_SIZES.to_vec());
            if let Some(bad) = sizes.iter().find(|&&n| n < 2 || n % 2 != 0) {
                return Err(Failure::Input(anyhow::anyhow!("size {bad} is not an even number >= 2")));
            }
            fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
            let runs = bench_space(
                &sizes,
                &engine,
                cli.budget_bits,
                limit_secs.map(Duration::from_secs),
                cli.seed.unwrap_or(1),
            );
            let mut all_done = true;
            for run in &runs {
                let json = run.to_json();
                let path = out_dir.join(format!("space-{}.json", run.n));
                fs::write(&path, json.clone() + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("{json}");
                all_done &= run.result.is_some();
            }
            Ok(if all_done { ExitCode::SUCCESS } else { ExitCode::from(3) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Limit(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
