//! `slosh`: meshes container profiles, solves for sloshing modes and
//! reports where the fundamental mode peaks.
//!
//! Exit codes: 0 success, 1 i/o failure, 2 invalid configuration,
//! 3 meshing failure, 4 solver failure.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CliError, CliResult, StudyRun};
use config::{merge, RunConfig};
use output::Report;

#[derive(Parser, Debug)]
#[command(name = "slosh", version, about = "Sloshing modes and high spots of axisymmetric and planar containers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mesh a profile and report element quality.
    Mesh(RunArgs),
    /// Solve for sloshing modes; writes modes.txt and one trace per mode.
    Solve(RunArgs),
    /// Locate the high spot of the fundamental mode.
    Highspot(RunArgs),
    /// Closed-form reference values.
    Oracle {
        #[command(subcommand)]
        which: Oracle,
    },
    /// Fundamental eigenvalue under uniform refinement.
    Convergence {
        #[command(flatten)]
        run: RunArgs,
        /// Number of meshes, each a 4:1 refinement of the last (at least 3).
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Level sets of the fundamental elevation seen from above.
    Contour {
        #[command(flatten)]
        run: RunArgs,
        /// Number of equispaced levels.
        #[arg(long)]
        contours: Option<usize>,
        /// Angular samples of the polar grid.
        #[arg(long)]
        theta: Option<usize>,
        /// Also write contours.svg.
        #[arg(long)]
        svg: bool,
    },
    /// Solve and analyse several configs concurrently, one output
    /// directory per config file.
    Study {
        /// key=value config files.
        #[arg(required = true)]
        configs: Vec<PathBuf>,
        /// Directory for study.csv and the per-run directories.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Mesh resolution applied to every run, overriding the files.
        #[arg(long, allow_negative_numbers = true)]
        res: Option<f64>,
    },
}

#[derive(Subcommand, Debug)]
enum Oracle {
    /// First zero of J1'.
    J1pZero,
    /// Fundamental ν of the unit-radius cylinder of depth h.
    CylNu1 {
        #[arg(long, default_value_t = 1.0)]
        h: f64,
    },
    /// ν = √μ tanh(√μ h) for a cross-section Neumann eigenvalue μ.
    Embed {
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, default_value_t = 1.0)]
        h: f64,
    },
}

/// Options shared by every run; each may also come from `--config`.
#[derive(Args, Debug, Default)]
struct RunArgs {
    /// key=value file; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// cylinder, trough, trapezoid, rect, silo or icefishing.
    #[arg(long)]
    shape: Option<String>,
    /// Domain file instead of a named shape.
    #[arg(long)]
    shape_file: Option<PathBuf>,
    /// Depth (cylinder, trapezoid, rect, icefishing).
    #[arg(long, allow_negative_numbers = true)]
    h: Option<f64>,
    /// Trough overhang.
    #[arg(long, allow_negative_numbers = true)]
    x: Option<f64>,
    /// Trough rise.
    #[arg(long, allow_negative_numbers = true)]
    y: Option<f64>,
    /// Trough wall depth.
    #[arg(long, allow_negative_numbers = true)]
    d: Option<f64>,
    /// Trapezoid top half-width.
    #[arg(long, allow_negative_numbers = true)]
    top: Option<f64>,
    /// Trapezoid bottom half-width.
    #[arg(long, allow_negative_numbers = true)]
    bottom: Option<f64>,
    /// Rectangle width.
    #[arg(long, allow_negative_numbers = true)]
    width: Option<f64>,
    /// Silo radius.
    #[arg(long, allow_negative_numbers = true)]
    radius: Option<f64>,
    /// Silo straight-wall height.
    #[arg(long, allow_negative_numbers = true)]
    straight: Option<f64>,
    /// Silo cap polygon points.
    #[arg(long)]
    cap_points: Option<usize>,
    /// Ice-fishing hole radius.
    #[arg(long, allow_negative_numbers = true)]
    hole: Option<f64>,
    /// Ice-fishing truncation radius.
    #[arg(long, allow_negative_numbers = true)]
    outer: Option<f64>,
    /// Target element size (near the free surface when graded).
    #[arg(long, allow_negative_numbers = true)]
    res: Option<f64>,
    /// Growth of element size with distance from the free surface.
    #[arg(long, allow_negative_numbers = true)]
    grade: Option<f64>,
    /// Largest element size when graded.
    #[arg(long, allow_negative_numbers = true)]
    res_max: Option<f64>,
    /// Azimuthal indices, e.g. 0,1,2.
    #[arg(long)]
    m: Option<String>,
    /// Modes per azimuthal index.
    #[arg(long)]
    k: Option<usize>,
    /// Trace samples across the free surface.
    #[arg(long)]
    samples: Option<usize>,
    /// Distance from a contact point still counted as on the boundary.
    #[arg(long, allow_negative_numbers = true)]
    boundary_tol: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Gravitational acceleration for ω = √(νg).
    #[arg(long, allow_negative_numbers = true)]
    g: Option<f64>,
}

impl RunArgs {
    fn flags(&self) -> Vec<(&'static str, String)> {
        let mut v = Vec::new();
        let mut put = |k: &'static str, s: Option<String>| {
            if let Some(s) = s {
                v.push((k, s));
            }
        };
        let f = |x: Option<f64>| x.map(|x| x.to_string());
        let u = |x: Option<usize>| x.map(|x| x.to_string());
        let p = |x: &Option<PathBuf>| x.as_ref().map(|x| x.display().to_string());
        put("shape", self.shape.clone());
        put("shape_file", p(&self.shape_file));
        put("h", f(self.h));
        put("x", f(self.x));
        put("y", f(self.y));
        put("d", f(self.d));
        put("top", f(self.top));
        put("bottom", f(self.bottom));
        put("width", f(self.width));
        put("radius", f(self.radius));
        put("straight", f(self.straight));
        put("cap_points", u(self.cap_points));
        put("hole", f(self.hole));
        put("outer", f(self.outer));
        put("res", f(self.res));
        put("grade", f(self.grade));
        put("res_max", f(self.res_max));
        put("m", self.m.clone());
        put("k", u(self.k));
        put("samples", u(self.samples));
        put("boundary_tol", f(self.boundary_tol));
        put("out", p(&self.out));
        put("g", f(self.g));
        v
    }

    fn resolve(&self, extra: Vec<(&'static str, String)>) -> CliResult<RunConfig> {
        let mut flags = self.flags();
        flags.extend(extra);
        let map = merge(self.config.as_deref(), flags)?;
        Ok(RunConfig::from_map(&map)?)
    }
}

fn print(r: &Report) {
    let mut out = std::io::stdout().lock();
    let _ = r.write_to(&mut out);
}

fn oracle(which: &Oracle) -> CliResult<Report> {
    let mut r = Report::new();
    match *which {
        Oracle::J1pZero => {
            r.num("j1p_zero", slosh::sloshing::find_j1prime_zero());
        }
        Oracle::CylNu1 { h } => {
            let o = slosh::sloshing::cylinder_oracle(h, 1.0, 0.0, 0.0)?;
            r.num("h", h).num("nu1", o.nu1);
        }
        Oracle::Embed { mu, h } => {
            let nu = slosh::sloshing::neumann_to_sloshing(mu, h)?;
            r.num("mu", mu).num("h", h).num("nu", nu);
        }
    }
    Ok(r)
}

fn study(configs: &[PathBuf], out: &std::path::Path, res: Option<f64>) -> CliResult<Report> {
    let mut runs = Vec::with_capacity(configs.len());
    for path in configs {
        let (name, dir) = commands::study_dir(out, path);
        if runs.iter().any(|r: &StudyRun| r.name == name) {
            return Err(CliError::Config(format!("two study configs are named `{name}`")));
        }
        let mut flags = vec![("out", dir.display().to_string())];
        if let Some(res) = res {
            flags.push(("res", res.to_string()));
        }
        let map = merge(Some(path), flags)?;
        let config = RunConfig::from_map(&map).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        runs.push(StudyRun { name, config });
    }
    let (report, failures) = commands::cmd_study(runs, out)?;
    if let Some((name, first)) = failures.into_iter().next() {
        print(&report);
        return Err(match first {
            CliError::Config(m) => CliError::Config(format!("run `{name}`: {m}")),
            CliError::Mesh(m) => CliError::Mesh(format!("run `{name}`: {m}")),
            CliError::Solve(m) => CliError::Solve(format!("run `{name}`: {m}")),
            CliError::Io(e) => CliError::Io(e),
        });
    }
    Ok(report)
}

fn run(cli: Cli) -> CliResult<Report> {
    match &cli.command {
        Command::Mesh(a) => commands::cmd_mesh(&a.resolve(vec![])?),
        Command::Solve(a) => commands::cmd_solve(&a.resolve(vec![])?),
        Command::Highspot(a) => commands::cmd_highspot(&a.resolve(vec![])?),
        Command::Oracle { which } => oracle(which),
        Command::Convergence { run, levels } => {
            let extra = levels.map(|l| vec![("levels", l.to_string())]).unwrap_or_default();
            commands::cmd_convergence(&run.resolve(extra)?)
        }
        Command::Contour { run, contours, theta, svg } => {
            let mut extra = Vec::new();
            if let Some(c) = contours {
                extra.push(("contours", c.to_string()));
            }
            if let Some(t) = theta {
                extra.push(("theta", t.to_string()));
            }
            if *svg {
                extra.push(("svg", "true".to_string()));
            }
            commands::cmd_contour(&run.resolve(extra)?)
        }
        Command::Study { configs, out, res } => study(configs, out, *res),
    }
}

/// Sizes the global pool from `SLOSH_THREADS` when it is set.
fn init_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("SLOSH_THREADS") else {
        return Ok(());
    };
    let n: usize = match v.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => return Err(CliError::Config(format!("SLOSH_THREADS must be a positive integer, got `{v}`"))),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = init_threads().and_then(|()| run(cli));
    match result {
        Ok(report) => {
            print(&report);
            ExitCode::SUCCESS
        }
        Err(e) => {
            log::debug!("{e:?}");
            eprintln!("slosh: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
