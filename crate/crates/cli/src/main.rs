use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use shapereg::genes::parse_bits;
use shapereg::mesh::generate_plate_sized;
use shapereg::optimize::{linear_weights, ParetoFrontier, Strategy, TermKind};
use shapereg::render::{render_frontier_svg, render_gene_svg, RenderStyle};
use shapereg::run::{run_with_context, write_outputs, MeshSource, PlateDims, RunConfig};
use shapereg::{Encoding, Error, Gene, Mesh, MeshContext};

/// Shape-regularity metrics and Pareto search on triangle meshes.
#[derive(Parser)]
#[command(name = "shapereg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a rectangular plate mesh (two triangles per cell).
    GenPlate {
        #[arg(long)]
        nx: usize,
        #[arg(long)]
        ny: usize,
        /// Plate width; defaults to `nx` (unit cells).
        #[arg(long)]
        width: Option<f64>,
        #[arg(long)]
        height: Option<f64>,
        /// Output file; stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Print mesh sizes, or one of the graph matrices as `row col value` lines.
    Inspect {
        #[command(flatten)]
        mesh: MeshArgs,
        #[arg(long, value_enum)]
        matrix: Option<MatrixKind>,
    },
    /// Evaluate every shape parameter of a gene and print the report as JSON.
    Eval {
        #[command(flatten)]
        mesh: MeshArgs,
        /// Gene file: one line of 0/1 characters.
        #[arg(long)]
        gene: PathBuf,
        #[arg(long, value_enum, default_value = "triangle")]
        kind: Kind,
    },
    /// Run a weight sweep described by a JSON config.
    Optimize {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Sweep (1 − w)·term_a + w·term_b over evenly spaced weights.
    Pareto {
        #[command(flatten)]
        mesh: MeshArgs,
        #[arg(long, default_value = "surrogate")]
        term_a: TermKind,
        #[arg(long, default_value = "r_area")]
        term_b: TermKind,
        #[arg(long, default_value_t = 11)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        runs: usize,
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "basis")]
        kind: Kind,
        #[arg(long, value_enum, default_value = "first-improvement")]
        strategy: StrategyArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a gene on its mesh, or a frontier scatter plot, as SVG.
    Render {
        #[command(subcommand)]
        target: RenderTarget,
    },
}

#[derive(Subcommand)]
enum RenderTarget {
    Gene {
        #[command(flatten)]
        mesh: MeshArgs,
        #[arg(long)]
        gene: PathBuf,
        #[arg(long, value_enum, default_value = "triangle")]
        kind: Kind,
        #[command(flatten)]
        style: StyleArgs,
        #[arg(long, short)]
        out: PathBuf,
    },
    Frontier {
        /// A `frontier.json` written by `optimize` or `pareto`.
        #[arg(long)]
        frontier: PathBuf,
        #[command(flatten)]
        style: StyleArgs,
        #[arg(long, short)]
        out: PathBuf,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct MeshArgs {
    /// Mesh file.
    #[arg(long)]
    mesh: Option<PathBuf>,
    /// Unit-cell plate, e.g. `10x10`.
    #[arg(long, value_parser = parse_plate)]
    plate: Option<(usize, usize)>,
}

#[derive(Args)]
struct StyleArgs {
    #[arg(long, default_value_t = 600.0)]
    width: f64,
    #[arg(long, default_value = "#1f4e79")]
    fill: String,
    #[arg(long, default_value = "#ffffff")]
    empty: String,
    #[arg(long, default_value = "#d62728")]
    slot: String,
    #[arg(long, default_value = "#ff7f0e")]
    point: String,
}

impl StyleArgs {
    fn style(&self) -> RenderStyle {
        RenderStyle {
            width: self.width,
            fill: self.fill.clone(),
            empty: self.empty.clone(),
            slot: self.slot.clone(),
            point: self.point.clone(),
            ..RenderStyle::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Triangle,
    Basis,
}

impl From<Kind> for Encoding {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Triangle => Encoding::Triangle,
            Kind::Basis => Encoding::Basis,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    FirstImprovement,
    Steepest,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixKind {
    Incidence,
    Adjacency,
    Degree,
    Homogeneity,
    LineHomogeneity,
    NodeTriangle,
    NodeEdge,
}

fn parse_plate(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once('x').ok_or("expected NXxNY, e.g. 10x10")?;
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

/// Failure class, mapped to the exit code.
enum Failure {
    Input(Error),
    Output(Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Output(_) => 3,
        }
    }
}

type CmdResult = Result<(), Failure>;

trait Classify<T> {
    fn input(self) -> Result<T, Failure>;
    fn output(self) -> Result<T, Failure>;
}

impl<T> Classify<T> for shapereg::Result<T> {
    fn input(self) -> Result<T, Failure> {
        self.map_err(Failure::Input)
    }

    fn output(self) -> Result<T, Failure> {
        self.map_err(Failure::Output)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::GenPlate { nx, ny, width, height, out } => gen_plate(nx, ny, width, height, out),
        Command::Inspect { mesh, matrix } => inspect(&mesh, matrix),
        Command::Eval { mesh, gene, kind } => eval(&mesh, &gene, kind.into()),
        Command::Optimize { config, out, seed } => optimize(&config, &out, seed),
        Command::Pareto {
            mesh,
            term_a,
            term_b,
            steps,
            runs,
            budget,
            seed,
            kind,
            strategy,
            out,
        } => {
            let config = RunConfig {
                schema: 1,
                mesh: mesh_source(&mesh),
                encoding: kind.into(),
                terms: vec![term_a, term_b],
                weights: linear_weights(steps).into_iter().map(|w| vec![1.0 - w, w]).collect(),
                budget,
                seed,
                runs_per_weight: runs,
                pinned: Vec::new(),
                initial_density: 0.5,
                strategy: match strategy {
                    StrategyArg::FirstImprovement => Strategy::FirstImprovement,
                    StrategyArg::Steepest => Strategy::Steepest,
                },
            };
            run_and_write(&config, Path::new("."), &out)
        }
        Command::Render { target } => render(target),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (Failure::Input(e) | Failure::Output(e)) = &failure;
            eprintln!("error: {e}");
            ExitCode::from(failure.code())
        }
    }
}

fn mesh_source(args: &MeshArgs) -> MeshSource {
    match (&args.mesh, args.plate) {
        (Some(path), _) => MeshSource::Path(path.clone()),
        (None, Some((nx, ny))) => MeshSource::Plate(PlateDims { nx, ny, width: None, height: None }),
        (None, None) => unreachable!("clap requires one mesh argument"),
    }
}

fn load_mesh(args: &MeshArgs) -> Result<Mesh, Failure> {
    mesh_source(args).load(Path::new(".")).input()
}

fn load_context(args: &MeshArgs) -> Result<MeshContext, Failure> {
    MeshContext::new(load_mesh(args)?).input()
}

fn load_gene(path: &Path, encoding: Encoding) -> Result<Gene, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(Error::io(path, e)))?;
    Ok(Gene::from_bits(encoding, parse_bits(&text).input()?))
}

fn write_file(path: &Path, contents: &str) -> CmdResult {
    fs::write(path, contents).map_err(|e| Failure::Output(Error::io(path, e)))
}

fn gen_plate(nx: usize, ny: usize, width: Option<f64>, height: Option<f64>, out: Option<PathBuf>) -> CmdResult {
    let mesh = generate_plate_sized(nx, ny, width.unwrap_or(nx as f64), height.unwrap_or(ny as f64)).input()?;
    match out {
        Some(path) => write_file(&path, &mesh.render()),
        None => {
            print!("{}", mesh.render());
            Ok(())
        }
    }
}

fn inspect(args: &MeshArgs, matrix: Option<MatrixKind>) -> CmdResult {
    let ctx = load_context(args)?;
    let text = match matrix {
        None => {
            let mesh = ctx.mesh();
            format!(
                "nodes {}\ntriangles {}\nedges {}\nbasis_functions {}\nline_graph_edges {}\n",
                mesh.node_count(),
                mesh.triangle_count(),
                mesh.edges().len(),
                ctx.basis_count(),
                ctx.line_graph().edge_count()
            )
        }
        Some(MatrixKind::Incidence) => ctx.incidence().to_triplet_text(),
        Some(MatrixKind::Adjacency) => shapereg::graph::adjacency_matrix(ctx.graph()).to_triplet_text(),
        Some(MatrixKind::Degree) => shapereg::graph::degree_matrix(ctx.graph()).to_triplet_text(),
        Some(MatrixKind::Homogeneity) => ctx.homogeneity().to_triplet_text(),
        Some(MatrixKind::LineHomogeneity) => ctx.line_homogeneity().to_triplet_text(),
        Some(MatrixKind::NodeTriangle) => ctx.node_triangle().to_triplet_text(),
        Some(MatrixKind::NodeEdge) => ctx.node_edge().to_triplet_text(),
    };
    print!("{text}");
    Ok(())
}

fn eval(args: &MeshArgs, gene: &Path, encoding: Encoding) -> CmdResult {
    let ctx = load_context(args)?;
    let gene = load_gene(gene, encoding)?;
    let report = ctx.evaluate_all(&gene).input()?;
    println!("{}", serde_json::to_string_pretty(&report).map_err(|e| Failure::Output(e.into()))?);
    Ok(())
}

fn optimize(config_path: &Path, out: &Path, seed: Option<u64>) -> CmdResult {
    let (mut config, base) = RunConfig::load(config_path).input()?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    run_and_write(&config, &base, out)
}

fn run_and_write(config: &RunConfig, base: &Path, out: &Path) -> CmdResult {
    config.validate().input()?;
    let mesh = config.mesh.load(base).input()?;
    let ctx = Arc::new(MeshContext::new(mesh).input()?);
    let frontier = run_with_context(config, ctx).input()?;
    write_outputs(out, config, &frontier).output()?;
    let front = frontier.front();
    println!(
        "{} records, {} on the front, written to {}",
        frontier.records.len(),
        front.len(),
        out.display()
    );
    Ok(())
}

fn render(target: RenderTarget) -> CmdResult {
    match target {
        RenderTarget::Gene { mesh, gene, kind, style, out } => {
            let ctx = load_context(&mesh)?;
            let gene = load_gene(&gene, kind.into())?;
            let svg = render_gene_svg(&ctx, &gene, &style.style()).input()?;
            write_file(&out, &svg)
        }
        RenderTarget::Frontier { frontier, style, out } => {
            let text = fs::read_to_string(&frontier).map_err(|e| Failure::Input(Error::io(&frontier, e)))?;
            let parsed: ParetoFrontier =
                serde_json::from_str(&text).map_err(|e| Failure::Input(e.into()))?;
            let svg = render_frontier_svg(&parsed, &style.style()).input()?;
            write_file(&out, &svg)
        }
    }
}

