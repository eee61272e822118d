use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use harp_core::bench::{run_heuristic_curve, run_success_curve, ExperimentSpec, HeuristicSpec};
use harp_core::critical_regions::{
    estimate_criticality, extract_regions, generate_corpus, import_regions_raster, load_channel_rasters,
    CriticalityField, ExtractParams, FieldBins, ImportParams, PlanCorpus, RegionSet,
};
use harp_core::cspace::io::{self, Scenario};
use harp_core::cspace::RobotSpec;
use harp_core::envs::{EnvKind, EnvSpec};
use harp_core::harp::{HarpConfig, HarpSession, HarpStats};
use harp_core::hl_search::HeuristicTable;
use harp_core::ll_planner::{baseline, BiRrt, Budget, MotionPlanner, PlanStats, PlannerKind, Rrt};
use harp_core::seeding::rng_for;
use harp_core::{CSpace, RobotModel, Trajectory};

#[derive(Parser)]
#[command(name = "harp", version, about = "Abstraction-guided motion planning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Environment generation
    #[command(subcommand)]
    Env(EnvCmd),
    /// Demonstration corpora
    #[command(subcommand)]
    Corpus(CorpusCmd),
    /// Critical-region estimation, extraction and import
    #[command(subcommand)]
    Cr(CrCmd),
    /// Planning queries
    #[command(subcommand)]
    Harp(HarpCmd),
    /// Experiments
    #[command(subcommand)]
    Bench(BenchCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Open,
    Rooms,
    Doorway,
    Zigzag,
}

#[derive(Subcommand)]
enum EnvCmd {
    /// Writes a generated environment as PGM (`.pgm`) or ASCII.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 5.0)]
        size: f64,
        #[arg(long, default_value_t = 0.05)]
        resolution: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        rows: usize,
        #[arg(long, default_value_t = 2)]
        cols: usize,
        #[arg(long, default_value_t = 2)]
        walls: usize,
        #[arg(long, default_value_t = 0.4)]
        door_width: f64,
        #[arg(long, default_value_t = 0.1)]
        wall_thickness: f64,
        #[arg(long, default_value_t = 0.5)]
        gap: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Environment file plus robot description.
#[derive(Args, Clone)]
struct SpaceArgs {
    #[arg(long)]
    map: PathBuf,
    /// Meters per cell for PGM maps.
    #[arg(long)]
    resolution: Option<f64>,
    /// Point2, Rect3, Hinged4 or Car3.
    #[arg(long, default_value = "Point2")]
    robot: String,
    /// Half length and half width, e.g. `0.3,0.06`.
    #[arg(long, value_delimiter = ',')]
    half_extents: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    link_half_extents: Option<Vec<f64>>,
    #[arg(long)]
    wheelbase: Option<f64>,
}

impl SpaceArgs {
    fn load(&self) -> Result<CSpace> {
        let pair = |v: &Option<Vec<f64>>, what: &str| -> Result<Option<[f64; 2]>> {
            match v {
                None => Ok(None),
                Some(v) if v.len() == 2 => Ok(Some([v[0], v[1]])),
                Some(_) => bail!("--{what} takes two comma-separated values"),
            }
        };
        let spec = RobotSpec {
            kind: self.robot.clone(),
            half_extents: pair(&self.half_extents, "half-extents")?,
            link_half_extents: pair(&self.link_half_extents, "link-half-extents")?,
            wheelbase: self.wheelbase,
            angular_weight: None,
        };
        let ws = io::load_workspace(&self.map, self.resolution)?;
        Ok(CSpace::new(ws, RobotModel::from_spec(&spec)?))
    }
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// Solves random queries toward random goals and keeps the successes.
    Generate {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value_t = 50)]
        goals: usize,
        #[arg(long, default_value_t = 2)]
        starts: usize,
        /// Sample budget per demonstration.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum CrCmd {
    /// Per-cell criticality of a corpus.
    Estimate {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 4)]
        cell_factor: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Thresholds a criticality field into regions.
    Extract {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        field: PathBuf,
        #[arg(long, default_value_t = 0.2)]
        threshold: f64,
        #[arg(long, default_value_t = 1)]
        min_cells: usize,
        #[arg(long, default_value_t = 30)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Regions from externally predicted rasters `<prefix>_ch0.pgm`,
    /// `<prefix>_ch1.pgm`, ...
    Import {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        rasters: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
        #[arg(long, default_value_t = 30)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum HarpCmd {
    /// Solves one scenario.
    Solve {
        #[arg(long)]
        scenario: PathBuf,
        /// Region set; required for the harp planner.
        #[arg(long)]
        regions: Option<PathBuf>,
        #[arg(long, default_value = "harp")]
        planner: PlannerKind,
        #[arg(long, conflicts_with = "budget_samples")]
        budget_seconds: Option<f64>,
        #[arg(long)]
        budget_samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Heuristic table to start from and update in place.
        #[arg(long)]
        table: Option<PathBuf>,
        /// HARP configuration JSON.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum BenchCmd {
    /// Solved fraction against budget; writes `<out>.csv` and `<out>.json`.
    Curve {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Overrides the spec's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Solve times across repeated solves while the heuristic learns.
    Heuristic {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Serialize)]
struct SolveReport {
    planner: String,
    success: bool,
    trajectory: Option<Trajectory>,
    stats: PlanStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    harp: Option<HarpStats>,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Env(cmd) => env_cmd(cmd),
        Command::Corpus(cmd) => corpus_cmd(cmd),
        Command::Cr(cmd) => cr_cmd(cmd),
        Command::Harp(cmd) => harp_cmd(cmd),
        Command::Bench(cmd) => bench_cmd(cmd),
    }
}

fn env_cmd(cmd: EnvCmd) -> Result<()> {
    let EnvCmd::Gen {
        kind,
        size,
        resolution,
        seed,
        rows,
        cols,
        walls,
        door_width,
        wall_thickness,
        gap,
        out,
    } = cmd;
    let kind = match kind {
        Kind::Open => EnvKind::Open,
        Kind::Rooms => EnvKind::Rooms {
            rows,
            cols,
            door_width,
            wall_thickness,
        },
        Kind::Doorway => EnvKind::Doorway {
            walls,
            door_width,
            wall_thickness,
        },
        Kind::Zigzag => EnvKind::Zigzag {
            walls,
            gap,
            wall_thickness,
        },
    };
    let ws = EnvSpec {
        kind,
        size,
        resolution,
        seed,
    }
    .build()?;
    io::save_workspace(&out, &ws)?;
    println!(
        "wrote {} ({}x{} cells, {} free)",
        out.display(),
        ws.width_cells(),
        ws.height_cells(),
        ws.free_cell_count()
    );
    Ok(())
}

fn corpus_cmd(cmd: CorpusCmd) -> Result<()> {
    let CorpusCmd::Generate {
        space,
        goals,
        starts,
        samples,
        seed,
        out,
    } = cmd;
    let name = space.map.display().to_string();
    let space = space.load()?;
    let planner: Box<dyn MotionPlanner> = if space.robot().is_holonomic() {
        Box::new(BiRrt::default())
    } else {
        Box::new(Rrt::default())
    };
    let mut rng = rng_for(seed, &[]);
    let corpus = generate_corpus(&space, &name, goals, starts, planner.as_ref(), Budget::samples(samples), &mut rng)?;
    corpus.save(&out)?;
    println!("kept {} of {} plans -> {}", corpus.plans.len(), corpus.attempted, out.display());
    Ok(())
}

fn cr_cmd(cmd: CrCmd) -> Result<()> {
    match cmd {
        CrCmd::Estimate {
            space,
            corpus,
            cell_factor,
            out,
        } => {
            let space = space.load()?;
            let corpus = PlanCorpus::load(&corpus)?;
            let field = estimate_criticality(
                &corpus,
                &space,
                &FieldBins::with_factor(&space, cell_factor),
                space.default_step(),
            )?;
            field.save(&out)?;
            println!("{} plans over {} cells -> {}", field.total_plans, field.grid.len(), out.display());
        }
        CrCmd::Extract {
            space,
            field,
            threshold,
            min_cells,
            samples,
            seed,
            out,
        } => {
            let space = space.load()?;
            let field = CriticalityField::load(&field)?;
            let params = ExtractParams {
                threshold,
                min_cells,
                samples_per_region: samples,
            };
            let regions = extract_regions(&field, &space, &params, &mut rng_for(seed, &[]))?;
            save_regions(&out, Some(field.grid.clone()), regions)?;
        }
        CrCmd::Import {
            space,
            rasters,
            threshold,
            samples,
            seed,
            out,
        } => {
            let space = space.load()?;
            let rasters = load_channel_rasters(&rasters)?;
            let mut params = ImportParams::default_for(&space);
            params.extract.threshold = threshold;
            params.extract.samples_per_region = samples;
            let regions = import_regions_raster(&space, &rasters, &params, &mut rng_for(seed, &[]))?;
            save_regions(&out, None, regions)?;
        }
    }
    Ok(())
}

fn save_regions(
    out: &Path,
    grid: Option<harp_core::critical_regions::FieldGrid>,
    regions: Vec<harp_core::critical_regions::CriticalRegion>,
) -> Result<()> {
    let n = regions.len();
    RegionSet { grid, regions }.save(out)?;
    println!("{n} regions -> {}", out.display());
    Ok(())
}

fn harp_cmd(cmd: HarpCmd) -> Result<()> {
    let HarpCmd::Solve {
        scenario,
        regions,
        planner,
        budget_seconds,
        budget_samples,
        seed,
        table,
        config,
        out,
    } = cmd;
    let loaded = Scenario::load(&scenario)?;
    let (space, query) = (&loaded.space, &loaded.query);
    let budget = match (budget_seconds, budget_samples) {
        (_, Some(n)) => Budget::samples(n),
        (Some(s), None) => Budget::seconds(s),
        (None, None) => Budget::seconds(10.0),
    };
    let mut rng = rng_for(seed, &[]);
    let report = if planner == PlannerKind::Harp {
        let path = regions.context("--regions is required for the harp planner")?;
        let regions = RegionSet::load(&path)?.regions;
        let config: HarpConfig = match config {
            Some(p) => serde_json::from_slice(&io::read_bytes(&p)?)?,
            None => HarpConfig::default(),
        };
        let n = regions.len();
        let mut session = HarpSession::new(space, regions, config)?;
        if let Some(t) = table.as_ref().filter(|t| t.exists()) {
            session.swap_table(HeuristicTable::load(t, n)?)?;
        }
        let r = session.solve(space, query, budget, &mut rng)?;
        if let Some(t) = &table {
            session.table().save(t)?;
        }
        SolveReport {
            planner: planner.name().into(),
            success: r.stats.success,
            stats: PlanStats {
                samples: r.stats.samples,
                collision_checks: r.stats.collision_checks,
                nodes: r.stats.nodes,
                elapsed_seconds: r.stats.wall_seconds,
            },
            trajectory: r.trajectory,
            harp: Some(r.stats),
        }
    } else {
        let o = baseline(planner)?.plan(space, query, budget, &mut rng)?;
        let trajectory = o
            .trajectory
            .filter(|t| t.solves(space, &query.start, &query.goal, space.default_step()));
        SolveReport {
            planner: planner.name().into(),
            success: trajectory.is_some(),
            trajectory,
            stats: o.stats,
            harp: None,
        }
    };
    io::write_bytes(&out, &serde_json::to_vec_pretty(&report)?)?;
    println!(
        "{}: {} in {:.3} s, {} samples -> {}",
        report.planner,
        if report.success { "solved" } else { "unsolved" },
        report.stats.elapsed_seconds,
        report.stats.samples,
        out.display()
    );
    Ok(())
}

fn bench_cmd(cmd: BenchCmd) -> Result<()> {
    match cmd {
        BenchCmd::Curve { spec, out, jobs, seed } => {
            let mut s = ExperimentSpec::load(&spec)?;
            if let Some(seed) = seed {
                s.seed = seed;
            }
            let base = spec.parent().unwrap_or(Path::new("."));
            let table = run_success_curve(&s, base, jobs)?;
            if table.skipped_queries > 0 {
                eprintln!("skipped {} query slots without a certified query", table.skipped_queries);
            }
            let (csv, json) = table.emit(&out)?;
            println!("{} rows -> {}, {}", table.rows.len(), csv.display(), json.display());
        }
        BenchCmd::Heuristic { spec, out, seed } => {
            let mut s: HeuristicSpec = serde_json::from_slice(&io::read_bytes(&spec)?)?;
            if let Some(seed) = seed {
                s.seed = seed;
            }
            let base = spec.parent().unwrap_or(Path::new("."));
            let curve = run_heuristic_curve(&s, base)?;
            let (csv, json) = curve.emit(&out)?;
            println!("{} rows -> {}, {}", curve.rows.len(), csv.display(), json.display());
        }
    }
    Ok(())
}
