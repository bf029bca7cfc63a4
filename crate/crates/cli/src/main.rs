mod svg;

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lsys::curves::{run_definition, sweep_locus, CatalogId, CatalogParams, CatalogRun};
use lsys::dsl::{format_word, parse_with_warnings};
use lsys::rewriting::Derivation;
use lsys::verify::{self, VerifyOptions};
use lsys::{LSystemDefinition, Point};
use serde::Serialize;

use svg::Scene;

/// Parametric L-systems and the curve catalog.
#[derive(Parser)]
#[command(name = "lsys", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in catalog entries.
    List {
        #[arg(long)]
        json: bool,
    },
    /// Run a derivation and print the result.
    Derive(RunArgs),
    /// Run a derivation and draw it as SVG.
    Render(RunArgs),
    /// Check the catalog against the analytic oracles.
    Verify {
        /// Run only properties whose name contains this text.
        #[arg(long)]
        only: Option<String>,
        /// Read catalog sources from DIR/<id>.lsys.
        #[arg(long, value_name = "DIR")]
        catalog_dir: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    String,
    Trace,
    Polyline,
    Svg,
}

#[derive(Args)]
struct RunArgs {
    /// Catalog id or path to a .lsys file.
    source: String,
    /// Run exactly this many derivation steps.
    #[arg(long, conflicts_with = "cycles")]
    steps: Option<usize>,
    /// Number of schedule cycles.
    #[arg(long)]
    cycles: Option<usize>,
    /// Averaging steps per Lane-Riesenfeld cycle.
    #[arg(long)]
    n: Option<usize>,
    /// Curve parameter.
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    /// Parameter spacing for point sweeps.
    #[arg(long, value_name = "DT")]
    grid: Option<f64>,
    /// Control point weights, making the curve rational.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    weights: Option<Vec<f64>>,
    /// Control points as `x,y;x,y;...`.
    #[arg(long, allow_hyphen_values = true)]
    points: Option<String>,
    /// Replace the control points by a random polygon of the same size.
    #[arg(long, conflicts_with = "points")]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Also draw every intermediate polygon.
    #[arg(long)]
    intermediate: bool,
    /// Write output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("off")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::List { json } => list(json)?,
        Command::Derive(args) => {
            let format = args.format.unwrap_or(Format::String);
            derive(&args, format)?
        }
        Command::Render(args) => derive(&args, Format::Svg)?,
        Command::Verify {
            only,
            catalog_dir,
            seed,
        } => {
            return Ok(verify(VerifyOptions {
                only,
                catalog_dir,
                seed,
            }))
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct EntryInfo {
    id: &'static str,
    description: &'static str,
    parameters: &'static [&'static str],
    min_points: usize,
    max_points: Option<usize>,
    closed: bool,
}

fn list(json: bool) -> Result<()> {
    let entries: Vec<EntryInfo> = CatalogId::ALL
        .iter()
        .map(|id| {
            let (min_points, max_points) = id.polygon_size();
            EntryInfo {
                id: id.as_str(),
                description: id.description(),
                parameters: id.parameters(),
                min_points,
                max_points,
                closed: id.is_closed(),
            }
        })
        .collect();
    if json {
        println!("{}", serde_json::to_string_pretty(&entries)?);
        return Ok(());
    }
    for e in entries {
        let points = match e.max_points {
            Some(max) if max == e.min_points => format!("{max} points"),
            _ => format!(">= {} points", e.min_points),
        };
        println!(
            "{:<24} {:<12} {:<11} {}",
            e.id,
            points,
            e.parameters.join(","),
            e.description
        );
    }
    Ok(())
}

fn parse_points(text: &str) -> Result<Vec<Point>> {
    text.split(';')
        .map(|pair| {
            let coords = pair
                .split(',')
                .map(|c| c.trim().parse::<f64>().with_context(|| format!("bad coordinate `{c}`")))
                .collect::<Result<Vec<_>>>()?;
            Ok(Point::from_slice(&coords)?)
        })
        .collect()
}

enum Source {
    Catalog(CatalogId, CatalogParams),
    File(LSystemDefinition),
}

fn load(args: &RunArgs) -> Result<Source> {
    if let Ok(id) = args.source.parse::<CatalogId>() {
        let mut params = id.default_params();
        if let Some(text) = &args.points {
            params.points = parse_points(text)?;
        }
        if let Some(seed) = args.seed {
            params.points = verify::seeded_polygon(seed, params.points.len());
        }
        params.weights = args.weights.clone();
        params.t = args.t.unwrap_or(params.t);
        params.n = args.n.unwrap_or(params.n);
        params.cycles = args.cycles.unwrap_or(params.cycles);
        return Ok(Source::Catalog(id, params));
    }
    let path = PathBuf::from(&args.source);
    if !path.exists() {
        bail!("`{}` is neither a catalog id nor a file", args.source);
    }
    if args.points.is_some() || args.weights.is_some() || args.seed.is_some() {
        bail!("--points, --weights and --seed apply to catalog entries only");
    }
    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let (mut def, warnings) = parse_with_warnings(&text).with_context(|| path.display().to_string())?;
    for w in warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    if let Some(t) = args.t {
        def.set_constant("t", t)?;
    }
    if let Some(n) = args.n {
        def.set_constant("n", n as f64)?;
    }
    if let Some(c) = args.cycles {
        def.set_cycles(c);
    }
    Ok(Source::File(def))
}

fn derive(args: &RunArgs, format: Format) -> Result<()> {
    let source = load(args)?;
    let keep_trace = format == Format::Trace || args.intermediate;
    let run = match (&source, args.steps) {
        (Source::Catalog(id, params), None) => {
            let run = lsys::curves::run_catalog(*id, params, keep_trace)?;
            for w in &run.warnings {
                eprintln!("warning: {w}");
            }
            run
        }
        (Source::Catalog(id, params), Some(steps)) => run_steps(id.definition(params)?, steps, keep_trace)?,
        (Source::File(def), None) => run_definition(def.clone(), keep_trace)?,
        (Source::File(def), Some(steps)) => run_steps(def.clone(), steps, keep_trace)?,
    };
    let text = match format {
        Format::String => format!("{}\n", format_word(&run.derivation.result)),
        Format::Trace => trace_lines(&run.derivation),
        Format::Polyline => run
            .polyline
            .segments
            .iter()
            .map(|(a, b)| format!("{a} {b}\n"))
            .collect(),
        Format::Svg => scene(&source, &run, args)?.render(),
    };
    match &args.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run_steps(definition: LSystemDefinition, steps: usize, keep_trace: bool) -> Result<CatalogRun> {
    let derivation = definition.derive_steps(steps, keep_trace)?;
    let interpreted = definition.interpret(&derivation.result)?;
    let polyline = lsys::curves::extract_polyline(&interpreted)?;
    Ok(CatalogRun {
        definition,
        derivation,
        interpreted,
        polyline,
        warnings: Vec::new(),
    })
}

fn trace_lines(d: &Derivation) -> String {
    let Some(trace) = &d.trace else {
        return format!("0 axiom: {}\n", format_word(&d.result));
    };
    trace
        .iter()
        .map(|s| {
            format!(
                "{} {}: {}\n",
                s.step,
                s.table.as_deref().unwrap_or("axiom"),
                format_word(&s.word)
            )
        })
        .collect()
}

fn scene(source: &Source, run: &CatalogRun, args: &RunArgs) -> Result<Scene> {
    let mut scene = Scene::default();
    let closed = run.definition.axiom.is_circular();
    scene.control = Some(match source {
        Source::Catalog(_, params) => (params.points.clone(), closed),
        Source::File(def) => (svg::word_points(&def.axiom), closed),
    });
    if args.intermediate {
        if let Some(trace) = &run.derivation.trace {
            let inner = trace.len().saturating_sub(1);
            for step in trace.iter().take(inner).skip(1) {
                scene
                    .intermediate
                    .push((svg::word_points(&step.word), step.word.is_circular()));
            }
        }
    }
    let kinds = svg::edge_kinds(&run.derivation.result);
    let tagged = kinds.len() == run.polyline.len() && kinds.iter().any(|k| k != "E");
    for (i, (a, b)) in run.polyline.segments.iter().enumerate() {
        let class = if tagged {
            format!("edge-{}", kinds[i])
        } else {
            String::new()
        };
        scene.segments.push((svg::planar(a), svg::planar(b), class));
    }
    scene.points = svg::state_points(&run.derivation.result);
    if let Source::Catalog(id, params) = source {
        if id.is_point_entry() {
            let step = args.grid.unwrap_or(0.01);
            let locus = sweep_locus(*id, params, step)?;
            scene.points = locus.iter().map(|p| (svg::planar(p), String::new())).collect();
        }
    }
    if scene.segments.is_empty() && scene.points.is_empty() {
        let result = svg::word_points(&run.interpreted);
        scene.points = result.into_iter().map(|p| (p, String::new())).collect();
    }
    Ok(scene)
}

fn verify(opts: VerifyOptions) -> ExitCode {
    let reports = verify::run(&opts);
    if reports.is_empty() {
        eprintln!("error: no property matches `{}`", opts.only.unwrap_or_default());
        return ExitCode::FAILURE;
    }
    for r in &reports {
        println!("{r}");
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    if failed.is_empty() {
        println!("{} properties passed", reports.len());
        ExitCode::SUCCESS
    } else {
        println!("failed: {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
