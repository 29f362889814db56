//! Command-line front end. Exit codes: 0 all checks pass, 1 a verification
//! failed, 2 input or configuration error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::cd_sets::{cd_grid, identify, parametric_family};
use crate::config::{Overrides, RunConfig};
use crate::error::{Error, Result};
use crate::gaussian_field::{cholesky_psd, covariance_matrix, sample_exact};
use crate::geometry::Point;
use crate::io;
use crate::metrics::{distance_matrix, MetricKind, TreeShape};
use crate::simulation::{radial_plan, river_closure, river_plan, simulate_radial, simulate_river};
use crate::tree_checks::{check_condition_b, is_tree_metric, ultrametric_violation, Verdict};
use crate::verify::{verify_points, Status};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Largest point count `check` accepts without `--force`.
pub const CHECK_CAP: usize = 64;

#[derive(Debug, Parser)]
#[command(name = "rtree-bm", version, about = "Radial and river R-tree metrics and tree-indexed Brownian motion")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// radial, river, euclidean, radial-power:P, radial-linear:C, river-power:P, river-linear:C
    #[arg(long)]
    metric: Option<String>,
    /// EPS for both components, or EPS_ABS,EPS_REL
    #[arg(long, env = "RTREE_BM_TOL")]
    tol: Option<String>,
    /// Flat key = value file; flags and environment take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Sampling {
    #[arg(long, env = "RTREE_BM_SEED")]
    seed: Option<u64>,
    #[arg(long)]
    reps: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Distance computations
    Metric {
        #[command(subcommand)]
        action: MetricAction,
    },
    /// Triangle, four-point, ultrametric and median checks
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
        points: Option<PathBuf>,
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Allow more than 64 points
        #[arg(long)]
        force: bool,
    },
    /// C-set masks
    Cdset {
        #[command(subcommand)]
        action: CdsetAction,
    },
    /// Simulate the tree-indexed Brownian field
    Simulate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long)]
        points: PathBuf,
        /// Where to write the labelled point set used by the river simulator
        #[arg(long)]
        labelled_out: Option<PathBuf>,
    },
    /// Deterministic and Monte-Carlo verification of the simulators
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long)]
        points: PathBuf,
    },
    /// Test whether parametric metrics coincide with the radial or river metric
    Identify {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Subcommand)]
enum MetricAction {
    /// Pairwise distance matrix
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        points: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum CdsetAction {
    /// Membership of C_d(P1,P2) on a grid
    Grid {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        p1: String,
        #[arg(long, allow_hyphen_values = true)]
        p2: String,
        /// xmin,xmax,ymin,ymax,res[,resy]
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        /// Evaluate the defining equation instead of the closed form
        #[arg(long)]
        by_definition: bool,
    },
}

fn resolve(common: &Common, sampling: Option<&Sampling>, grid: Option<String>) -> Result<RunConfig> {
    let over = Overrides {
        metric: common.metric.clone(),
        tol: common.tol.clone(),
        seed: sampling.and_then(|s| s.seed),
        reps: sampling.and_then(|s| s.reps),
        grid,
        out: common.out.clone(),
    };
    RunConfig::resolve(&over, common.config.as_deref())
}

fn with_output<F>(out: Option<&Path>, f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match out {
        Some(path) => {
            let mut w = io::create_output(path)?;
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)
        }
    }
}

fn parse_xy(s: &str) -> Result<Point> {
    let parts: Vec<&str> = s.split(',').collect();
    let coords = parts
        .iter()
        .map(|v| v.trim().parse::<f64>().map_err(|e| Error::Parse(format!("point `{s}`: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    Point::new(coords)
}

fn load_points(path: &Path, kind: MetricKind) -> Result<Vec<Point>> {
    let pts = io::read_points_file(path)?;
    for p in &pts {
        kind.check_point(p)?;
        pts[0].ensure_dim(p.dim())?;
    }
    Ok(pts)
}

fn cmd_metric_eval(common: &Common, points: &Path) -> Result<i32> {
    let cfg = resolve(common, None, None)?;
    let pts = load_points(points, cfg.metric)?;
    let dm = distance_matrix(cfg.metric, &pts, cfg.tol)?;
    with_output(cfg.out.as_deref(), |w| io::write_matrix(w, &dm))?;
    Ok(EXIT_PASS)
}

fn print_verdict(label: &str, v: &Verdict) {
    match v {
        Verdict::Pass => println!("PASS    {label}"),
        Verdict::Fail(r) => println!("FAIL    {label}: {r}"),
    }
}

fn cmd_check(common: &Common, points: Option<&Path>, matrix: Option<&Path>, force: bool) -> Result<i32> {
    let cfg = resolve(common, None, None)?;
    let (dm, pts) = match (points, matrix) {
        (Some(p), _) => {
            let pts = load_points(p, cfg.metric)?;
            (None, Some(pts))
        }
        (None, Some(m)) => (Some(io::read_matrix_file(m, cfg.tol)?), None),
        (None, None) => return Err(Error::Config("one of --points or --matrix is required".into())),
    };
    let n = pts.as_ref().map_or_else(|| dm.as_ref().map_or(0, |d| d.n()), Vec::len);
    if n > CHECK_CAP && !force {
        return Err(Error::Config(format!(
            "{n} points exceed the quadruple-scan cap of {CHECK_CAP}; pass --force to run anyway"
        )));
    }
    let dm = match (dm, &pts) {
        (Some(dm), _) => dm,
        (None, Some(pts)) => distance_matrix(cfg.metric, pts, cfg.tol)?,
        (None, None) => unreachable!("input checked above"),
    };

    let mut violations = Vec::new();
    let tree = is_tree_metric(&dm, cfg.tol);
    print_verdict("triangle inequality and four-point condition", &tree);
    let mut failed = !tree.is_pass();
    violations.extend(tree.violation().cloned());

    // ultrametricity is stronger than a tree metric and only reported
    match ultrametric_violation(&dm, cfg.tol) {
        None => println!("INFO    ultrametric: yes"),
        Some(r) => println!("INFO    ultrametric: no ({r})"),
    }

    match &pts {
        Some(pts) => {
            let b = check_condition_b(cfg.metric, pts, cfg.tol)?;
            print_verdict("median condition", &b);
            failed |= !b.is_pass();
            violations.extend(b.violation().cloned());
        }
        _ => println!("SKIPPED median condition (needs point coordinates)"),
    }
    if let Some(out) = cfg.out.as_deref() {
        io::write_violations(io::create_output(out)?, &violations)?;
    }
    Ok(if failed { EXIT_FAIL } else { EXIT_PASS })
}

fn cmd_cdset_grid(common: &Common, p1: &str, p2: &str, grid: Option<String>, by_definition: bool) -> Result<i32> {
    let cfg = resolve(common, None, grid)?;
    let (p1, p2) = (parse_xy(p1)?, parse_xy(p2)?);
    p1.ensure_dim(2)?;
    p2.ensure_dim(2)?;
    let cells = cd_grid(cfg.metric, &p1, &p2, &cfg.grid, by_definition, cfg.tol)?;
    with_output(cfg.out.as_deref(), |w| io::write_grid(w, &cells))?;
    Ok(EXIT_PASS)
}

fn cmd_simulate(common: &Common, sampling: &Sampling, points: &Path, labelled_out: Option<&Path>) -> Result<i32> {
    let cfg = resolve(common, Some(sampling), None)?;
    let pts = load_points(points, cfg.metric)?;
    let batch = match cfg.metric {
        MetricKind::Radial => simulate_radial(&radial_plan(&pts, cfg.tol)?, cfg.seed, cfg.reps),
        MetricKind::River => {
            let labelled = river_closure(&pts, cfg.tol)?;
            if let Some(path) = labelled_out {
                io::write_points(io::create_output(path)?, &labelled)?;
            }
            simulate_river(&river_plan(&labelled, cfg.tol)?, cfg.seed, cfg.reps)
        }
        kind => {
            let cov = covariance_matrix(kind, &Point::origin(pts[0].dim()), &pts, cfg.tol)?;
            sample_exact(&cholesky_psd(&cov, cov.default_pivot_tol())?, cfg.seed, cfg.reps)
        }
    };
    with_output(cfg.out.as_deref(), |w| io::write_samples(w, &batch))?;
    Ok(EXIT_PASS)
}

fn cmd_verify(common: &Common, sampling: &Sampling, points: &Path) -> Result<i32> {
    let cfg = resolve(common, Some(sampling), None)?;
    let pts = load_points(points, cfg.metric)?;
    let reports = verify_points(cfg.metric, &pts, cfg.seed, cfg.reps, cfg.tol)?;
    let mut text = String::new();
    for r in &reports {
        text.push_str(&format!("{r}\n"));
    }
    text.push_str("Monte-Carlo entries may deviate by 5 standard errors of the covariance estimator\n");
    with_output(cfg.out.as_deref(), |w| Ok(w.write_all(text.as_bytes())?))?;
    Ok(if reports.iter().any(|r| r.status == Status::Fail) { EXIT_FAIL } else { EXIT_PASS })
}

fn cmd_identify(common: &Common) -> Result<i32> {
    let cfg = resolve(common, None, None)?;
    let kinds = match cfg.metric {
        MetricKind::Radial => parametric_family(TreeShape::Radial),
        MetricKind::River => parametric_family(TreeShape::River),
        k => vec![k],
    };
    let mut text = String::from("metric,mismatches,checked,skipped,slope,max_residual,identified\n");
    for kind in kinds {
        let id = identify(kind, cfg.tol)?;
        text.push_str(&format!(
            "{kind},{},{},{},{},{},{}\n",
            id.scan.mismatches.len(),
            id.scan.checked,
            id.scan.skipped,
            id.branch_fit.slope,
            id.branch_fit.max_residual.max(id.axis_fit.map_or(0.0, |f| f.max_residual)),
            id.identified
        ));
    }
    with_output(cfg.out.as_deref(), |w| Ok(w.write_all(text.as_bytes())?))?;
    Ok(EXIT_PASS)
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Metric { action: MetricAction::Eval { common, points } } => cmd_metric_eval(&common, &points),
        Command::Check { common, points, matrix, force } => {
            cmd_check(&common, points.as_deref(), matrix.as_deref(), force)
        }
        Command::Cdset { action: CdsetAction::Grid { common, p1, p2, grid, by_definition } } => {
            cmd_cdset_grid(&common, &p1, &p2, grid, by_definition)
        }
        Command::Simulate { common, sampling, points, labelled_out } => {
            cmd_simulate(&common, &sampling, &points, labelled_out.as_deref())
        }
        Command::Verify { common, sampling, points } => cmd_verify(&common, &sampling, &points),
        Command::Identify { common } => cmd_identify(&common),
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}
