//! Subcommand bodies. Each one computes everything before writing, so a
//! failed run leaves no output behind.

use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use slosh::assembly::AzimuthalIndex;
use slosh::eigen::EigenOptions;
use slosh::geometry::{DomainKind, PlanarDomain};
use slosh::mesh::{triangulate, write_mesh_to, TriMesh};
use slosh::scalar::sig12;
use slosh::sloshing::*;
use slosh::SloshError;

use crate::config::{ConfigError, RunConfig};
use crate::output::{opt_num, write_atomic, Report};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Mesh(String),
    Solve(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Mesh(_) => 3,
            CliError::Solve(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Mesh(m) => write!(f, "meshing failed: {m}"),
            CliError::Solve(m) => write!(f, "solver failed: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<SloshError> for CliError {
    fn from(e: SloshError) -> Self {
        use SloshError::*;
        let msg = e.to_string();
        match e {
            InvalidParameter(_) | Argument(_) | Parse { .. } => CliError::Config(msg),
            InvalidDomain(_) | Meshing(_) | Invariant(_) => CliError::Mesh(msg),
            Io(e) => CliError::Io(e),
            _ => CliError::Solve(msg),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn domain(cfg: &RunConfig) -> CliResult<PlanarDomain<f64>> {
    cfg.domain.build().map_err(|e| match e {
        // A domain file that cannot be read is a configuration problem.
        SloshError::Io(io) => CliError::Config(format!("{}: {io}", cfg.domain.label())),
        other => other.into(),
    })
}

fn mesh(cfg: &RunConfig, d: &PlanarDomain<f64>) -> CliResult<TriMesh<f64>> {
    triangulate(d, cfg.sizing).map_err(|e| match e {
        SloshError::InvalidParameter(m) => CliError::Config(m),
        other => CliError::Mesh(other.to_string()),
    })
}

fn solve(cfg: &RunConfig, mesh: TriMesh<f64>, k: usize) -> CliResult<ModeSet<f64>> {
    let m_list = cfg.m_list_for(mesh.kind);
    Ok(solve_modes_on(Arc::new(mesh), &m_list, k, &EigenOptions::default())?)
}

fn trace_csv(trace: &SurfaceTrace<f64>, w: &mut dyn Write) -> io::Result<()> {
    writeln!(w, "coordinate,amplitude")?;
    for (x, a) in trace.points.iter().zip(&trace.amplitude) {
        writeln!(w, "{},{}", sig12(*x), sig12(*a))?;
    }
    Ok(())
}

pub fn cmd_mesh(cfg: &RunConfig) -> CliResult<Report> {
    let d = domain(cfg)?;
    let m = mesh(cfg, &d)?;
    let q = m.quality();
    let mut r = Report::new();
    r.text("shape", cfg.domain.label())
        .text("kind", d.kind.keyword())
        .text("nodes", m.node_count())
        .text("cells", q.cell_count)
        .text("boundary_edges", m.bedges.len())
        .num("area", m.area())
        .num("min_angle", q.min_angle)
        .num("max_angle", q.max_angle)
        .num("h_min", q.h_min)
        .num("h_max", q.h_max);
    cfg.prepare_out()?;
    write_atomic(&cfg.out.join("mesh.txt"), |w| write_mesh_to(&m, w).map_err(io::Error::other))?;
    r.save(&cfg.out.join("mesh_quality.txt"))?;
    Ok(r)
}

struct Solved {
    kind: DomainKind,
    nodes: usize,
    set: ModeSet<f64>,
    traces: Vec<SurfaceTrace<f64>>,
}

fn solve_and_trace(cfg: &RunConfig) -> CliResult<Solved> {
    let d = domain(cfg)?;
    let m = mesh(cfg, &d)?;
    let nodes = m.node_count();
    let set = solve(cfg, m, cfg.k)?;
    let traces = set.modes.iter().map(|mode| trace_surface(mode, cfg.samples)).collect::<Result<Vec<_>, _>>()?;
    Ok(Solved { kind: d.kind, nodes, set, traces })
}

fn write_solved(cfg: &RunConfig, s: &Solved) -> CliResult<Report> {
    let mut r = Report::new();
    r.text("shape", cfg.domain.label()).text("kind", s.kind.keyword()).text("nodes", s.nodes).num("g", cfg.g);
    r.text("modes", s.set.modes.len()).text("fundamental", s.set.fundamental);
    for (i, mode) in s.set.modes.iter().enumerate() {
        let p = format!("mode.{i}.");
        r.num(format!("{p}nu"), mode.nu)
            .num(format!("{p}omega"), mode.omega(cfg.g))
            .text(format!("{p}m"), mode.m.m())
            .text(format!("{p}index"), mode.index)
            .num(format!("{p}residual"), mode.residual)
            .text(format!("{p}fundamental"), i == s.set.fundamental)
            .text(format!("{p}trace"), format!("trace_{i}.csv"));
    }
    cfg.prepare_out()?;
    for (i, t) in s.traces.iter().enumerate() {
        write_atomic(&cfg.out.join(format!("trace_{i}.csv")), |w| trace_csv(t, w))?;
    }
    r.save(&cfg.out.join("modes.txt"))?;
    Ok(r)
}

pub fn cmd_solve(cfg: &RunConfig) -> CliResult<Report> {
    let solved = solve_and_trace(cfg)?;
    write_solved(cfg, &solved)
}

fn fundamental_trace(cfg: &RunConfig) -> CliResult<(PlanarDomain<f64>, SloshingMode<f64>, SurfaceTrace<f64>)> {
    let d = domain(cfg)?;
    let m = mesh(cfg, &d)?;
    let set = solve(cfg, m, 1)?;
    let mode = set.fundamental_mode().clone();
    let trace = trace_surface(&mode, cfg.samples)?;
    Ok((d, mode, trace))
}

pub fn highspot_report(cfg: &RunConfig, mode: &SloshingMode<f64>, trace: &SurfaceTrace<f64>) -> CliResult<Report> {
    let hs = locate_high_spot(trace, cfg.boundary_tol)?;
    let extent = trace.points.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let mut r = Report::new();
    r.text("shape", cfg.domain.label())
        .num("nu", mode.nu)
        .text("m", mode.m.m())
        .num("location", hs.location)
        .num("location_fraction", hs.location.abs() / extent)
        .num("value", hs.value)
        .text("on_boundary", hs.on_boundary)
        .num("boundary_value", hs.boundary_value)
        .num("peak_ratio", hs.peak_ratio)
        .num("contact_distance", hs.contact_distance)
        .num("boundary_tol", hs.boundary_tol);
    Ok(r)
}

pub fn cmd_highspot(cfg: &RunConfig) -> CliResult<Report> {
    let (_, mode, trace) = fundamental_trace(cfg)?;
    let r = highspot_report(cfg, &mode, &trace)?;
    cfg.prepare_out()?;
    write_atomic(&cfg.out.join("trace_fundamental.csv"), |w| trace_csv(&trace, w))?;
    r.save(&cfg.out.join("highspot.txt"))?;
    Ok(r)
}

pub fn cmd_convergence(cfg: &RunConfig) -> CliResult<Report> {
    let d = domain(cfg)?;
    let m = match cfg.m_list.as_deref() {
        Some([m]) => *m,
        Some(_) => return Err(CliError::Config("convergence takes a single `m`".into())),
        None if d.kind == DomainKind::Axisymmetric => AzimuthalIndex(1),
        None => AzimuthalIndex(0),
    };
    let reference = cfg.domain.reference(m);
    let table = convergence_study(&d, cfg.sizing, cfg.levels, m, reference)?;
    let mut r = Report::new();
    r.text("shape", cfg.domain.label()).text("m", m.m()).text("levels", table.rows.len());
    r.text("reference", opt_num(reference));
    r.text("final_order", opt_num(table.final_order()));
    cfg.prepare_out()?;
    write_atomic(&cfg.out.join("convergence.csv"), |w| {
        writeln!(w, "h,nodes,nu1,error,order")?;
        for row in &table.rows {
            writeln!(w, "{},{},{},{},{}", sig12(row.h), row.nodes, sig12(row.nu1), opt_num(row.error), opt_num(row.order))?;
        }
        Ok(())
    })?;
    r.save(&cfg.out.join("convergence.txt"))?;
    Ok(r)
}

pub fn cmd_contour(cfg: &RunConfig) -> CliResult<Report> {
    let (d, mode, trace) = fundamental_trace(cfg)?;
    let field = elevation_field(&trace, d.kind, cfg.theta)?;
    let grid = surface_grid(&field, d.kind)?;
    let levels = contour_levels(field.min(), field.max(), cfg.contours);
    let sets = extract_contours(&grid, &levels);
    let mut r = Report::new();
    r.text("shape", cfg.domain.label())
        .num("nu", mode.nu)
        .text("m", mode.m.m())
        .num("min", field.min())
        .num("max", field.max())
        .text("levels", sets.len())
        .text("polylines", sets.iter().map(|s| s.lines.len()).sum::<usize>());
    cfg.prepare_out()?;
    write_atomic(&cfg.out.join("contours.csv"), |w| write_contours_csv(&sets, w).map_err(io::Error::other))?;
    if cfg.svg {
        write_atomic(&cfg.out.join("contours.svg"), |w| write_contours_svg(&sets, w).map_err(io::Error::other))?;
    }
    r.save(&cfg.out.join("contours.txt"))?;
    Ok(r)
}

/// One batch entry: a config file and its own output directory.
pub struct StudyRun {
    pub name: String,
    pub config: RunConfig,
}

/// Runs solve and high-spot analysis for every entry concurrently and
/// writes a summary table. Failed runs are listed with their exit codes.
pub fn cmd_study(runs: Vec<StudyRun>, out: &Path) -> CliResult<(Report, Vec<(String, CliError)>)> {
    let results: Vec<CliResult<Report>> = runs
        .par_iter()
        .map(|run| {
            let solved = solve_and_trace(&run.config)?;
            let f = solved.set.fundamental;
            let r = highspot_report(&run.config, &solved.set.modes[f], &solved.traces[f])?;
            write_solved(&run.config, &solved)?;
            r.save(&run.config.out.join("highspot.txt"))?;
            Ok(r)
        })
        .collect();
    std::fs::create_dir_all(out).map_err(|e| CliError::Config(format!("cannot create {}: {e}", out.display())))?;
    let mut failures = Vec::new();
    let mut ok = 0;
    write_atomic(&out.join("study.csv"), |w| {
        writeln!(w, "run,shape,nu,m,location,on_boundary,peak_ratio")?;
        for (run, res) in runs.iter().zip(&results) {
            if let Ok(r) = res {
                let f = |k: &str| r.get(k).unwrap_or_default().to_string();
                writeln!(w, "{},{},{},{},{},{},{}", run.name, f("shape"), f("nu"), f("m"), f("location"), f("on_boundary"), f("peak_ratio"))?;
            }
        }
        Ok(())
    })?;
    for (run, res) in runs.into_iter().zip(results) {
        match res {
            Ok(_) => ok += 1,
            Err(e) => failures.push((run.name, e)),
        }
    }
    let mut r = Report::new();
    r.text("runs", ok + failures.len()).text("succeeded", ok).text("failed", failures.len());
    Ok((r, failures))
}

/// Output directory for a study entry named after its config file.
pub fn study_dir(out: &Path, config: &Path) -> (String, PathBuf) {
    let name = config.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "run".into());
    (name.clone(), out.join(name))
}
