use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

fn slosh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slosh")).args(args).env_remove("SLOSH_THREADS").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn ok(args: &[&str]) -> BTreeMap<String, String> {
    let o = slosh(args);
    assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    kv(&String::from_utf8(o.stdout).unwrap())
}

fn kv(text: &str) -> BTreeMap<String, String> {
    text.lines().filter_map(|l| l.split_once('=')).map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn num(m: &BTreeMap<String, String>, k: &str) -> f64 {
    m[k].parse().unwrap_or_else(|_| panic!("{k} = {}", m[k]))
}

fn csv(path: &Path) -> (String, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    (header, lines.map(|l| l.split(',').map(str::to_string).collect()).collect())
}

fn out_dir(dir: &tempfile::TempDir, name: &str) -> String {
    dir.path().join(name).display().to_string()
}

#[test]
fn oracle_values() {
    let j = ok(&["oracle", "j1p-zero"]);
    assert!((num(&j, "j1p_zero") - 1.8412).abs() < 5e-5);
    let c = ok(&["oracle", "cyl-nu1", "--h", "1"]);
    assert!((num(&c, "nu1") - slosh::sloshing::cylinder_oracle(1.0, 1.0, 0.0, 0.0).unwrap().nu1).abs() < 1e-11);
    let e = ok(&["oracle", "embed", "--mu", "2.4674", "--h", "1"]);
    assert!((num(&e, "nu") - 1.4406).abs() < 1e-4);
}

#[test]
fn mesh_writes_file_and_quality() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_dir(&dir, "m");
    let r = ok(&["mesh", "--shape", "cylinder", "--h", "1", "--res", "0.05", "--out", &out]);
    assert!(num(&r, "min_angle") >= 20.0);
    let saved = kv(&std::fs::read_to_string(dir.path().join("m/mesh_quality.txt")).unwrap());
    assert_eq!(saved, r);
    let mesh: slosh::Mesh = slosh::mesh::read_mesh(dir.path().join("m/mesh.txt")).unwrap();
    assert_eq!(mesh.node_count().to_string(), r["nodes"]);
    assert!(mesh.violations().is_empty());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&slosh(&["mesh", "--shape", "cylinder", "--res", "-1"])), 2);
    assert_eq!(code(&slosh(&["solve", "--res", "0.1"])), 2);
    assert_eq!(code(&slosh(&["solve", "--shape", "cylinder", "--bogus"])), 2);
    assert_eq!(code(&slosh(&["convergence", "--shape", "cylinder", "--res", "0.3", "--levels", "2"])), 2);
    let bowtie = dir.path().join("bad.domain");
    std::fs::write(&bowtie, "domain bowtie planar\nv 0 0\nv 1 1\nv 1 0\nv 0 1\ne 0 1 F\ne 1 2 B\ne 2 3 B\ne 3 0 B\n").unwrap();
    let o = slosh(&["mesh", "--shape-file", bowtie.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not simple"));
}

#[test]
fn failed_runs_leave_no_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_dir(&dir, "s");
    let o = slosh(&["solve", "--shape", "cylinder", "--res", "0.3", "--k", "1000", "--out", &out]);
    assert_eq!(code(&o), 2);
    assert!(!dir.path().join("s").exists() || std::fs::read_dir(dir.path().join("s")).unwrap().count() == 0);
}

#[test]
fn cylinder_solve_reports_fundamental() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_dir(&dir, "s");
    let r = ok(&["solve", "--shape", "cylinder", "--h", "1", "--res", "0.05", "--out", &out]);
    let f = &r["fundamental"];
    assert_eq!(r[&format!("mode.{f}.fundamental")], "true");
    assert_eq!(r[&format!("mode.{f}.m")], "1");
    let exact = slosh::sloshing::cylinder_oracle(1.0, 1.0, 0.0, 0.0).unwrap().nu1;
    let nu = num(&r, &format!("mode.{f}.nu"));
    assert!((nu - exact).abs() < 2e-3 * exact, "{nu} vs {exact}");
    assert!((num(&r, &format!("mode.{f}.omega")) - (nu * 9.81).sqrt()).abs() < 1e-9);
    assert!(num(&r, &format!("mode.{f}.residual")) <= 1e-7);
    let (header, rows) = csv(&dir.path().join("s").join(&r[&format!("mode.{f}.trace")]));
    assert_eq!(header, "coordinate,amplitude");
    assert_eq!(rows.len(), 401);
    let saved = kv(&std::fs::read_to_string(dir.path().join("s/modes.txt")).unwrap());
    assert_eq!(saved, r);
}

#[test]
fn trough_trace_peaks_inside() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_dir(&dir, "t");
    ok(&["solve", "--shape", "trough", "--x", "1", "--y", "1", "--res", "0.05", "--out", &out]);
    let (_, rows) = csv(&dir.path().join("t/trace_0.csv"));
    let vals: Vec<(f64, f64)> = rows.iter().map(|r| (r[0].parse().unwrap(), r[1].parse::<f64>().unwrap().abs())).collect();
    let (lo, hi) = (vals[0].0, vals[vals.len() - 1].0);
    let best = vals.iter().copied().fold((0.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    assert!(best.0 > lo + 0.1 && best.0 < hi - 0.1, "peak at {}", best.0);
}

#[test]
fn high_spot_classifications() {
    let trap = ok(&["highspot", "--shape", "trapezoid", "--top", "1.5", "--bottom", "1", "--h", "1", "--res", "0.08"]);
    assert_eq!(trap["on_boundary"], "true");
    let silo = ok(&["highspot", "--shape", "silo", "--res", "0.05"]);
    assert_eq!(silo["on_boundary"], "false");
    let ice = ok(&["highspot", "--shape", "icefishing", "--res", "0.05", "--grade", "0.3", "--res-max", "2"]);
    let frac = num(&ice, "location_fraction");
    assert!((0.55..=0.80).contains(&frac), "{frac}");
    assert!(num(&ice, "peak_ratio") >= 1.4);
}

#[test]
fn convergence_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_dir(&dir, "c");
    let r = ok(&["convergence", "--shape", "cylinder", "--res", "0.2", "--levels", "4", "--out", &out]);
    assert!(num(&r, "final_order") >= 1.5);
    let (header, rows) = csv(&dir.path().join("c/convergence.csv"));
    assert_eq!(header, "h,nodes,nu1,error,order");
    assert_eq!(rows.len(), 4);

    let out = out_dir(&dir, "r");
    ok(&["convergence", "--shape", "rect", "--res", "0.2", "--levels", "4", "--out", &out]);
    let (_, rows) = csv(&dir.path().join("r/convergence.csv"));
    let errs: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

fn contour_points(path: &Path) -> Vec<(f64, usize, bool, [f64; 2])> {
    let (header, rows) = csv(path);
    assert_eq!(header, "level,line,closed,x,y");
    rows.iter()
        .map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap(), r[2] == "1", [r[3].parse().unwrap(), r[4].parse().unwrap()]))
        .collect()
}

#[test]
fn cylinder_contours_flip_under_rotation() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_dir(&dir, "c");
    let r = ok(&["contour", "--shape", "cylinder", "--res", "0.1", "--m", "1", "--theta", "48", "--out", &out]);
    assert_eq!(r["levels"], "10");
    let pts = contour_points(&dir.path().join("c/contours.csv"));
    assert!(!pts.is_empty());
    for &(level, _, _, [x, y]) in &pts {
        let twin = pts.iter().any(|&(l, _, _, [u, v])| (l + level).abs() < 1e-9 && (u + x).abs() < 1e-9 && (v + y).abs() < 1e-9);
        assert!(twin, "no image of ({x}, {y}) at level {level}");
    }
}

#[test]
fn silo_innermost_contour_is_closed_inside() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_dir(&dir, "c");
    ok(&["contour", "--shape", "silo", "--res", "0.05", "--svg", "--out", &out]);
    let pts = contour_points(&dir.path().join("c/contours.csv"));
    let top = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let inner: Vec<_> = pts.iter().filter(|p| p.0 == top).collect();
    assert!(inner.iter().all(|p| p.2));
    assert!(inner.iter().all(|p| p.3[0].hypot(p.3[1]) < 0.99));
    let svg = std::fs::read_to_string(dir.path().join("c/contours.svg")).unwrap();
    assert!(svg.contains("<path"));
}

#[test]
fn axisymmetric_mode_contours_are_circles() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_dir(&dir, "c");
    ok(&["contour", "--shape", "cylinder", "--res", "0.1", "--m", "0", "--out", &out]);
    let pts = contour_points(&dir.path().join("c/contours.csv"));
    let mut by_line: BTreeMap<(u64, usize), Vec<f64>> = BTreeMap::new();
    for &(level, line, closed, [x, y]) in &pts {
        assert!(closed);
        by_line.entry((level.to_bits(), line)).or_default().push(x.hypot(y));
    }
    for radii in by_line.values() {
        let (lo, hi) = radii.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
        assert!(hi - lo < 5e-3, "radius spread {}", hi - lo);
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# cylinder run\nshape=cylinder\nres=-5\nk=2\n").unwrap();
    let c = cfg.to_str().unwrap();
    assert_eq!(code(&slosh(&["solve", "--config", c])), 2);
    let out = out_dir(&dir, "s");
    let r = ok(&["solve", "--config", c, "--res", "0.2", "--m", "1", "--out", &out]);
    assert_eq!(r["modes"], "2");
    std::fs::write(&cfg, "shape=cylinder\nresolution=0.2\n").unwrap();
    assert_eq!(code(&slosh(&["solve", "--config", c])), 2);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (out_dir(&dir, "a"), out_dir(&dir, "b"));
    ok(&["solve", "--shape", "silo", "--res", "0.1", "--k", "2", "--out", &a]);
    let o = Command::new(env!("CARGO_BIN_EXE_slosh"))
        .args(["solve", "--shape", "silo", "--res", "0.1", "--k", "2", "--out", &b])
        .env("SLOSH_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    for entry in std::fs::read_dir(dir.path().join("a")).unwrap() {
        let name = entry.unwrap().file_name();
        let x = std::fs::read(dir.path().join("a").join(&name)).unwrap();
        let y = std::fs::read(dir.path().join("b").join(&name)).unwrap();
        assert_eq!(x, y, "{name:?} differs");
    }
}

#[test]
fn study_fans_out_per_config() {
    let dir = tempfile::tempdir().unwrap();
    let silo = dir.path().join("silo.cfg");
    let trap = dir.path().join("trap.cfg");
    std::fs::write(&silo, "shape=silo\n").unwrap();
    std::fs::write(&trap, "shape=trapezoid\ntop=1.5\nbottom=1\nh=1\n").unwrap();
    let out = out_dir(&dir, "st");
    let r = ok(&["study", silo.to_str().unwrap(), trap.to_str().unwrap(), "--res", "0.08", "--out", &out]);
    assert_eq!(r["succeeded"], "2");
    let (header, rows) = csv(&dir.path().join("st/study.csv"));
    assert_eq!(header, "run,shape,nu,m,location,on_boundary,peak_ratio");
    assert_eq!(rows[0][0], "silo");
    assert_eq!(rows[0][5], "false");
    assert_eq!(rows[1][0], "trap");
    assert_eq!(rows[1][5], "true");
    assert!(dir.path().join("st/silo/highspot.txt").exists());
    assert!(dir.path().join("st/trap/modes.txt").exists());
    assert_eq!(code(&slosh(&["study", silo.to_str().unwrap(), silo.to_str().unwrap()])), 2);
    assert_eq!(code(&Command::new(env!("CARGO_BIN_EXE_slosh")).args(["oracle", "j1p-zero"]).env("SLOSH_THREADS", "0").output().unwrap()), 2);
}
