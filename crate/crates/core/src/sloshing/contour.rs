//! Level sets of the free-surface elevation by marching triangles.

use std::collections::BTreeMap;
use std::io::Write;

use crate::error::{Result, SloshError};
use crate::geometry::DomainKind;
use crate::scalar::{sig12, Real};

use super::field::ElevationField;

/// Triangulated free surface seen from above, with nodal elevations.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceGrid<T> {
    pub points: Vec<[T; 2]>,
    pub tris: Vec<[usize; 3]>,
    pub values: Vec<T>,
}

/// Builds the top view of an elevation field: a polar grid for
/// axisymmetric modes, a strip of width equal to the span for planar ones.
pub fn surface_grid<T: Real>(field: &ElevationField<T>, kind: DomainKind) -> Result<SurfaceGrid<T>> {
    let nr = field.coords.len();
    if nr < 2 {
        return Err(SloshError::Argument("elevation field needs at least two radial samples".into()));
    }
    let mut points = Vec::new();
    let mut values = Vec::new();
    let mut tris = Vec::new();
    match kind {
        DomainKind::Planar => {
            let half = (field.coords[nr - 1] - field.coords[0]) * T::lit(0.5);
            for y in [-half, half] {
                for (i, &x) in field.coords.iter().enumerate() {
                    points.push([x, y]);
                    values.push(field.values[0][i]);
                }
            }
            for i in 0..nr - 1 {
                tris.push([i, i + 1, nr + i + 1]);
                tris.push([i, nr + i + 1, nr + i]);
            }
        }
        DomainKind::Axisymmetric => {
            let nt = field.thetas.len();
            if nt < 3 {
                return Err(SloshError::Argument("polar grid needs at least 3 angles".into()));
            }
            let centre = field.coords[0] == T::zero();
            let first_ring = usize::from(centre);
            if centre {
                points.push([T::zero(), T::zero()]);
                values.push(field.values[0][0]);
            }
            let ring_start = |i: usize| usize::from(centre) + (i - first_ring) * nt;
            for i in first_ring..nr {
                let r = field.coords[i];
                for (j, &th) in field.thetas.iter().enumerate() {
                    points.push([r * th.cos(), r * th.sin()]);
                    values.push(field.values[j][i]);
                }
            }
            if centre {
                let s = ring_start(1);
                for j in 0..nt {
                    tris.push([0, s + j, s + (j + 1) % nt]);
                }
            }
            for i in first_ring..nr - 1 {
                let (a, b) = (ring_start(i), ring_start(i + 1));
                for j in 0..nt {
                    let j1 = (j + 1) % nt;
                    tris.push([a + j, b + j, b + j1]);
                    tris.push([a + j, b + j1, a + j1]);
                }
            }
        }
    }
    Ok(SurfaceGrid { points, tris, values })
}

/// `n` levels equispaced strictly inside `(min, max)`.
pub fn contour_levels<T: Real>(min: T, max: T, n: usize) -> Vec<T> {
    (1..=n).map(|k| min + (max - min) * T::from_count(k) / T::from_count(n + 1)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Polyline<T> {
    pub points: Vec<[T; 2]>,
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContourSet<T> {
    pub level: T,
    pub lines: Vec<Polyline<T>>,
}

type EdgeKey = (usize, usize);

fn key(a: usize, b: usize) -> EdgeKey {
    (a.min(b), a.max(b))
}

/// Marching triangles; a node counts as above the level when its value is
/// `>=` the level, so no crossing ever sits exactly on a node.
pub fn extract_contours<T: Real>(grid: &SurfaceGrid<T>, levels: &[T]) -> Vec<ContourSet<T>> {
    levels.iter().map(|&level| ContourSet { level, lines: level_lines(grid, level) }).collect()
}

fn level_lines<T: Real>(grid: &SurfaceGrid<T>, level: T) -> Vec<Polyline<T>> {
    let above = |i: usize| grid.values[i] >= level;
    let mut segs: Vec<(EdgeKey, EdgeKey)> = Vec::new();
    for t in &grid.tris {
        let crossing: Vec<EdgeKey> =
            (0..3).map(|e| (t[e], t[(e + 1) % 3])).filter(|&(a, b)| above(a) != above(b)).map(|(a, b)| key(a, b)).collect();
        if crossing.len() == 2 {
            segs.push((crossing[0], crossing[1]));
        }
    }
    let mut at: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
    for (s, &(a, b)) in segs.iter().enumerate() {
        at.entry(a).or_default().push(s);
        at.entry(b).or_default().push(s);
    }
    let point = |(a, b): EdgeKey| {
        let (va, vb) = (grid.values[a], grid.values[b]);
        let t = (level - va) / (vb - va);
        let (pa, pb) = (grid.points[a], grid.points[b]);
        [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]
    };
    let mut used = vec![false; segs.len()];
    let mut lines = Vec::new();
    // Open lines start at edges touched once; what remains is closed.
    let starts: Vec<EdgeKey> = at.iter().filter(|(_, v)| v.len() == 1).map(|(&k, _)| k).collect();
    let walk = |start: EdgeKey, used: &mut Vec<bool>| -> Option<Polyline<T>> {
        let mut keys = vec![start];
        let mut cur = start;
        loop {
            let next = at[&cur].iter().copied().find(|&s| !used[s]);
            let Some(s) = next else { break };
            used[s] = true;
            let (a, b) = segs[s];
            cur = if a == cur { b } else { a };
            keys.push(cur);
        }
        if keys.len() < 2 {
            return None;
        }
        let closed = keys.len() > 2 && keys[0] == keys[keys.len() - 1];
        if closed {
            keys.pop();
        }
        Some(Polyline { points: keys.into_iter().map(point).collect(), closed })
    };
    for s in starts {
        if let Some(l) = walk(s, &mut used) {
            lines.push(l);
        }
    }
    for s in 0..segs.len() {
        if !used[s] {
            if let Some(l) = walk(segs[s].0, &mut used) {
                lines.push(l);
            }
        }
    }
    lines
}

/// CSV with header `level,line,closed,x,y`, one row per vertex.
pub fn write_contours_csv<T: Real, W: Write>(sets: &[ContourSet<T>], mut w: W) -> Result<()> {
    writeln!(w, "level,line,closed,x,y")?;
    let mut id = 0;
    for set in sets {
        for line in &set.lines {
            for p in &line.points {
                writeln!(w, "{},{id},{},{},{}", sig12(set.level), u8::from(line.closed), sig12(p[0]), sig12(p[1]))?;
            }
            id += 1;
        }
    }
    Ok(())
}

/// Standalone SVG, one `<path>` per polyline, `y` pointing up.
pub fn write_contours_svg<T: Real, W: Write>(sets: &[ContourSet<T>], mut w: W) -> Result<()> {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in sets.iter().flat_map(|s| &s.lines).flat_map(|l| &l.points) {
        for c in 0..2 {
            lo[c] = lo[c].min(p[c].to_f64_lossy());
            hi[c] = hi[c].max(p[c].to_f64_lossy());
        }
    }
    if !lo[0].is_finite() {
        lo = [-1.0, -1.0];
        hi = [1.0, 1.0];
    }
    let pad = 0.05 * (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    let (x0, y0) = (lo[0] - pad, -(hi[1] + pad));
    let (wd, ht) = (hi[0] - lo[0] + 2.0 * pad, hi[1] - lo[1] + 2.0 * pad);
    writeln!(w, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#, sig12(x0), sig12(y0), sig12(wd), sig12(ht))?;
    let stroke = sig12(wd.max(ht) / 400.0);
    for set in sets {
        for line in &set.lines {
            let mut d = String::new();
            for (i, p) in line.points.iter().enumerate() {
                let cmd = if i == 0 { 'M' } else { 'L' };
                d.push_str(&format!("{cmd}{} {} ", sig12(p[0]), sig12(-p[1].to_f64_lossy())));
            }
            if line.closed {
                d.push('Z');
            }
            writeln!(
                w,
                r#"<path d="{}" fill="none" stroke="black" stroke-width="{stroke}" data-level="{}"/>"#,
                d.trim_end(),
                sig12(set.level)
            )?;
        }
    }
    writeln!(w, "</svg>")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(amp: impl Fn(f64, f64) -> f64, nr: usize, nt: usize) -> ElevationField<f64> {
        let coords: Vec<f64> = (0..nr).map(|i| i as f64 / (nr - 1) as f64).collect();
        let thetas: Vec<f64> = (0..nt).map(|j| std::f64::consts::TAU * j as f64 / nt as f64).collect();
        let values = thetas.iter().map(|&t| coords.iter().map(|&r| amp(r, t)).collect()).collect();
        ElevationField { coords, thetas, values }
    }

    #[test]
    fn levels_are_interior_and_equispaced() {
        let l = contour_levels(-1.0f64, 1.0, 10);
        assert_eq!(l.len(), 10);
        assert!((l[0] + 1.0 - 2.0 / 11.0).abs() < 1e-15);
        assert!(l.iter().all(|&v| v > -1.0 && v < 1.0));
    }

    #[test]
    fn radial_field_gives_closed_circles() {
        let f = field(|r, _| 1.0 - r * r, 21, 48);
        let g = surface_grid(&f, DomainKind::Axisymmetric).unwrap();
        assert_eq!(g.tris.len(), 48 + 2 * 48 * 19);
        let sets = extract_contours(&g, &contour_levels(0.0, 1.0, 10));
        for s in &sets {
            assert_eq!(s.lines.len(), 1);
            let line = &s.lines[0];
            assert!(line.closed);
            let want = (1.0 - s.level).sqrt();
            for p in &line.points {
                assert!((p[0].hypot(p[1]) - want).abs() < 0.01);
            }
        }
    }

    #[test]
    fn dipole_contours_are_antisymmetric() {
        let f = field(|r, t| r * t.cos(), 11, 32);
        let g = surface_grid(&f, DomainKind::Axisymmetric).unwrap();
        let levels = contour_levels(-1.0, 1.0, 10);
        let sets = extract_contours(&g, &levels);
        for k in 0..5 {
            let (a, b) = (&sets[k], &sets[9 - k]);
            assert!((a.level + b.level).abs() < 1e-12);
            let pa: Vec<_> = a.lines.iter().flat_map(|l| &l.points).collect();
            let pb: Vec<_> = b.lines.iter().flat_map(|l| &l.points).collect();
            assert_eq!(pa.len(), pb.len());
            for p in pa {
                assert!(pb.iter().any(|q| (p[0] + q[0]).abs() < 1e-9 && (p[1] + q[1]).abs() < 1e-9));
            }
        }
    }

    #[test]
    fn planar_strip_and_writers() {
        let f = ElevationField { coords: vec![-1.0f64, 0.0, 1.0], thetas: vec![0.0], values: vec![vec![-1.0, 0.0, 1.0]] };
        let g = surface_grid(&f, DomainKind::Planar).unwrap();
        let sets = extract_contours(&g, &[0.5]);
        assert_eq!(sets[0].lines.len(), 1);
        let line = &sets[0].lines[0];
        assert!(!line.closed);
        assert!(line.points.iter().all(|p| (p[0] - 0.5).abs() < 1e-12));
        let mut csv = Vec::new();
        write_contours_csv(&sets, &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("level,line,closed,x,y\n0.5,0,0,0.5,"));
        let mut svg = Vec::new();
        write_contours_svg(&sets, &mut svg).unwrap();
        let text = String::from_utf8(svg).unwrap();
        assert!(text.starts_with("<svg") && text.contains("<path d=\"M0.5 ") && text.trim_end().ends_with("</svg>"));
    }
}
