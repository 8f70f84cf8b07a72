use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use topoplan::channelgraph::to_dot;
use topoplan::clock::BudgetMode;
use topoplan::harness::{
    analyze, read_trajectory, render_svg, run_benchmark, topology_dot, validate_waypoints, write_csv,
    write_trajectory, MetricsTable,
};
use topoplan::planner::{default_config, make_checker, run_planner, Outcome, PlannerConfig, PlannerId};
use topoplan::scene::{parse_scene, Scene};

#[derive(Parser)]
#[command(name = "topoplan", version, about = "Channel-guided planning for elongated objects")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan one scene and write the trajectory.
    Plan {
        scene: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value = "tapom")]
        planner: PlannerId,
        /// Trajectory file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Channel graph in DOT syntax.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Run planners over every scene file in a directory.
    Bench {
        dir: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_delimiter = ',', default_value = "tapom,rrt_connect")]
        planners: Vec<PlannerId>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Topology graph, loops and channels of a scene. No planning.
    Analyze {
        scene: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Re-check a trajectory file at a tenth of its resolution.
    Validate {
        scene: PathBuf,
        trajectory: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON planner config; missing fields take defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    time_limit: Option<f64>,
    /// Charge time per validity check instead of reading the wall clock.
    #[arg(long)]
    check_budget: bool,
}

/// Bad input: exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), InputError> {
    fs::write(path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_scene(path: &Path) -> Result<Scene, InputError> {
    parse_scene(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_config(path: Option<&Path>) -> Result<PlannerConfig, InputError> {
    match path {
        None => Ok(default_config()),
        Some(p) => PlannerConfig::from_json(&read(p)?).map_err(|e| InputError(format!("{}: {e}", p.display()))),
    }
}

fn run_config(args: &RunArgs) -> Result<PlannerConfig, InputError> {
    let mut cfg = load_config(args.config.as_deref())?;
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(t) = args.time_limit {
        cfg.time_limit = t;
    }
    if args.check_budget {
        cfg.budget_mode = BudgetMode::deterministic();
    }
    cfg.validate().map_err(InputError)?;
    Ok(cfg)
}

fn scene_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Plan {
            scene,
            run,
            planner,
            out,
            svg,
            dot,
        } => cmd_plan(&scene, &run, planner, out.as_deref(), svg.as_deref(), dot.as_deref()),
        Command::Bench {
            dir,
            run,
            planners,
            trials,
            csv,
        } => cmd_bench(&dir, &run, &planners, trials, csv.as_deref()),
        Command::Analyze { scene, config, dot } => cmd_analyze(&scene, config.as_deref(), dot.as_deref()),
        Command::Validate {
            scene,
            trajectory,
            config,
        } => cmd_validate(&scene, &trajectory, config.as_deref()),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn cmd_plan(
    scene_path: &Path,
    run: &RunArgs,
    planner: PlannerId,
    out: Option<&Path>,
    svg: Option<&Path>,
    dot: Option<&Path>,
) -> Result<bool, InputError> {
    let scene = load_scene(scene_path)?;
    let cfg = run_config(run)?;
    let result = run_planner(&scene, planner, &cfg);
    let d = &result.diagnostics;
    eprintln!(
        "{planner} seed {}: {} in {:.3} s ({} channels, {} checks)",
        cfg.seed,
        match &result.outcome {
            Outcome::Success(t) => format!("{} waypoints", t.waypoints.len()),
            Outcome::Failure(f) => format!("failed: {f}"),
        },
        result.elapsed,
        d.channel_count,
        d.checks
    );
    if let Outcome::Failure(topoplan::planner::FailureReason::InvalidScene(msg)) = &result.outcome {
        return Err(InputError(format!("{}: {msg}", scene_path.display())));
    }

    if svg.is_some() || dot.is_some() {
        let a = analyze(&scene, &cfg, dot.is_some())?;
        if let Some(p) = svg {
            let waypoints = result.trajectory().map(|t| t.waypoints.as_slice());
            write(p, &render_svg(&scene, &a.extraction.channels, waypoints))?;
        }
        if let Some(p) = dot {
            let text = match &a.graph {
                Ok(g) => to_dot(g, &a.extraction.channels),
                Err(_) => topology_dot(&scene, &a.topology, &a.extraction.channels),
            };
            write(p, &text)?;
        }
    }

    let Some(t) = result.trajectory() else {
        return Ok(false);
    };
    let text = write_trajectory(&scene_name(scene_path), cfg.seed, planner.as_str(), result.elapsed, t);
    match out {
        Some(p) => write(p, &text)?,
        None => print!("{text}"),
    }
    Ok(true)
}

/// Scene files are the `*.json` files of `dir` in name order, skipping
/// `manifest.json`.
fn scene_files(dir: &Path) -> Result<Vec<PathBuf>, InputError> {
    let entries = fs::read_dir(dir).map_err(|e| InputError(format!("{}: {e}", dir.display())))?;
    let mut files = Vec::new();
    for e in entries {
        let p = e?.path();
        let is_json = p.extension().is_some_and(|x| x == "json");
        if is_json && p.file_name().is_some_and(|n| n != "manifest.json") {
            files.push(p);
        }
    }
    files.sort();
    Ok(files)
}

fn cmd_bench(
    dir: &Path,
    run: &RunArgs,
    planners: &[PlannerId],
    trials: usize,
    csv: Option<&Path>,
) -> Result<bool, InputError> {
    let cfg = run_config(run)?;
    let files = scene_files(dir)?;
    if files.is_empty() {
        return Err(InputError(format!("{}: no scene files", dir.display())));
    }
    let mut scenes = Vec::new();
    for f in &files {
        scenes.push((scene_name(f), load_scene(f)?));
    }
    let (records, table) = run_benchmark(&scenes, planners, trials, &cfg)?;
    print_table(&table);
    if let Some(p) = csv {
        let file = fs::File::create(p).map_err(|e| InputError(format!("{}: {e}", p.display())))?;
        write_csv(&records, file)?;
    }
    Ok(true)
}

fn print_table(table: &MetricsTable) {
    println!(
        "{:<16} {:<20} {:>8} {:>9} {:>10}",
        "scene", "planner", "success", "avg_time", "avg_succ"
    );
    for r in &table.rows {
        let succ = r.avg_success_time.map(|t| format!("{t:.3}")).unwrap_or_else(|| "-".into());
        println!(
            "{:<16} {:<20} {:>8.2} {:>9.3} {:>10}",
            r.scene, r.planner, r.success_rate, r.avg_time, succ
        );
    }
}

fn cmd_analyze(scene_path: &Path, config: Option<&Path>, dot: Option<&Path>) -> Result<bool, InputError> {
    let scene = load_scene(scene_path)?;
    let cfg = load_config(config)?;
    let a = analyze(&scene, &cfg, false)?;
    println!(
        "topology: {} nodes, {} edges, {} loops",
        a.topology.nodes.len(),
        a.topology.edges.len(),
        a.loops.len()
    );
    for c in &a.extraction.channels {
        println!(
            "{}: loop [{}] area {:.5} incircle {:.4} thickness {:.4}",
            c.id,
            c.source_loop.ids.join(" "),
            c.area,
            c.incircle_radius,
            c.thickness
        );
    }
    for (i, reason) in &a.extraction.rejected {
        println!("rejected: loop [{}] {reason}", a.loops[*i].ids.join(" "));
    }
    if let Some(p) = dot {
        write(p, &topology_dot(&scene, &a.topology, &a.extraction.channels))?;
    }
    Ok(true)
}

fn cmd_validate(scene_path: &Path, traj_path: &Path, config: Option<&Path>) -> Result<bool, InputError> {
    let scene = load_scene(scene_path)?;
    let cfg = load_config(config)?;
    let file = read_trajectory(&read(traj_path)?).map_err(|e| InputError(format!("{}: {e}", traj_path.display())))?;
    let resolution = if file.resolution > 0.0 { file.resolution } else { cfg.resolution };
    let checker = make_checker(&scene, &cfg).with_resolution(resolution / 10.0);
    match validate_waypoints(&scene, &file.waypoints, &checker) {
        Ok(()) => {
            println!("valid: {} waypoints", file.waypoints.len());
            Ok(true)
        }
        Err(e) => {
            println!("invalid: {e}");
            Ok(false)
        }
    }
}
