//! Conforming triangle meshes of tagged polygonal domains.

mod delaunay;

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Result, SloshError};
use crate::geometry::{validate_domain, validate_geometry, DomainKind, EdgeTag, PlanarDomain, Point2};
use crate::scalar::Real;

use delaunay::{RefineParams, SizeAt};

/// Boundary edge of a mesh, oriented with the domain on its left.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub a: usize,
    pub b: usize,
    pub tag: EdgeTag,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TriMesh<T> {
    pub kind: DomainKind,
    pub nodes: Vec<Point2<T>>,
    /// Counterclockwise node triples.
    pub cells: Vec<[usize; 3]>,
    pub bedges: Vec<BoundaryEdge>,
    /// Longest edge length.
    pub h_max: T,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeshQuality<T> {
    /// Degrees.
    pub min_angle: T,
    /// Degrees.
    pub max_angle: T,
    pub h_max: T,
    pub h_min: T,
    pub cell_count: usize,
}

/// Target element size for mesh generation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Sizing<T> {
    Uniform(T),
    /// `near + rate * dist(p, F)`, capped at `max`; fine along the free
    /// surface and coarsening into the bulk.
    Graded { near: T, rate: T, max: T },
}

impl<T: Real> From<T> for Sizing<T> {
    fn from(h: T) -> Self {
        Sizing::Uniform(h)
    }
}

impl<T: Real> Sizing<T> {
    /// Finest requested size.
    pub fn finest(&self) -> T {
        match *self {
            Sizing::Uniform(h) => h,
            Sizing::Graded { near, .. } => near,
        }
    }

    fn check(&self) -> Result<()> {
        let ok = match *self {
            Sizing::Uniform(h) => h > T::zero() && h.is_finite(),
            Sizing::Graded { near, rate, max } => {
                near > T::zero() && rate >= T::zero() && max >= near && max.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(SloshError::InvalidParameter(format!("bad mesh size {self:?}")))
        }
    }
}

struct SizeField {
    kind: SizeKind,
    surface: Vec<([f64; 2], [f64; 2])>,
}

enum SizeKind {
    Uniform(f64),
    Graded { near: f64, rate: f64, max: f64 },
}

fn point_segment_dist(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dz) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dz * dz;
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dz) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p[0] - a[0] - t * dx).hypot(p[1] - a[1] - t * dz)
}

impl SizeAt for SizeField {
    fn size_at(&self, p: [f64; 2]) -> f64 {
        match self.kind {
            SizeKind::Uniform(h) => h,
            SizeKind::Graded { near, rate, max } => {
                let d = self
                    .surface
                    .iter()
                    .map(|&(a, b)| point_segment_dist(p, a, b))
                    .fold(f64::INFINITY, f64::min);
                if d.is_finite() {
                    (near + rate * d).min(max)
                } else {
                    near
                }
            }
        }
    }
}

const MIN_ANGLE_DEG: f64 = 25.0;
const CUT: usize = usize::MAX;

/// True when reflecting in `x = 0` maps the polygon and its tags onto
/// themselves.
fn is_mirror_symmetric(poly: &[[f64; 2]], tags: &[EdgeTag], diameter: f64) -> bool {
    let n = poly.len();
    let tol = 1e-12 * diameter;
    let close = |p: [f64; 2], q: [f64; 2]| (p[0] - q[0]).abs() <= tol && (p[1] - q[1]).abs() <= tol;
    (0..n).all(|i| {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let (ma, mb) = ([-a[0], a[1]], [-b[0], b[1]]);
        (0..n).any(|j| close(poly[j], mb) && close(poly[(j + 1) % n], ma) && tags[j] == tags[i])
    })
}

/// The part of the polygon with `x >= 0`, with each edge labelled by its
/// source edge or `CUT` for the new edge on `x = 0`. `None` unless the
/// polygon crosses the axis along exactly one cut.
fn half_polygon(poly: &[[f64; 2]], tol: f64) -> Option<(Vec<[f64; 2]>, Vec<usize>)> {
    let n = poly.len();
    let poly: Vec<[f64; 2]> = poly.iter().map(|&[x, z]| [if x.abs() <= tol { 0.0 } else { x }, z]).collect();
    let mut pts: Vec<[f64; 2]> = Vec::new();
    // arrive[k]: label of the edge ending at pts[k].
    let mut arrive: Vec<usize> = Vec::new();
    let push = |p: [f64; 2], label: usize, pts: &mut Vec<[f64; 2]>, arrive: &mut Vec<usize>| {
        if pts.last() != Some(&p) {
            pts.push(p);
            arrive.push(label);
        }
    };
    let crossing = |p: [f64; 2], q: [f64; 2]| {
        if p[0] == 0.0 {
            return p;
        }
        if q[0] == 0.0 {
            return q;
        }
        let t = p[0] / (p[0] - q[0]);
        [0.0, p[1] + t * (q[1] - p[1])]
    };
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        let (pin, qin) = (p[0] >= 0.0, q[0] >= 0.0);
        match (pin, qin) {
            (true, true) => push(q, i, &mut pts, &mut arrive),
            (true, false) => push(crossing(p, q), i, &mut pts, &mut arrive),
            (false, true) => {
                push(crossing(p, q), CUT, &mut pts, &mut arrive);
                push(q, i, &mut pts, &mut arrive);
            }
            (false, false) => {}
        }
    }
    if pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
        let last = arrive.pop().unwrap();
        arrive[0] = last;
    }
    let m = pts.len();
    if m < 3 || arrive.iter().filter(|&&l| l == CUT).count() != 1 {
        return None;
    }
    // Edge k runs pts[k] -> pts[k + 1] and carries arrive[k + 1].
    let labels: Vec<usize> = (0..m).map(|k| arrive[(k + 1) % m]).collect();
    let k = labels.iter().position(|&l| l == CUT).unwrap();
    if pts[k][0] != 0.0 || pts[(k + 1) % m][0] != 0.0 {
        return None;
    }
    Some((pts, labels))
}

type Pieces = (Vec<[f64; 2]>, Vec<[usize; 3]>, Vec<(usize, usize, usize)>);

/// Reflects a half mesh across its cut; cut nodes are shared.
fn mirror(mut points: Vec<[f64; 2]>, cells: Vec<[usize; 3]>, boundary: Vec<(usize, usize, usize)>) -> Pieces {
    for &(a, b, seg) in &boundary {
        if seg == CUT {
            points[a][0] = 0.0;
            points[b][0] = 0.0;
        }
    }
    let half = points.len();
    let mut image = vec![0usize; half];
    for i in 0..half {
        if points[i][0] == 0.0 {
            image[i] = i;
        } else {
            image[i] = points.len();
            points.push([-points[i][0], points[i][1]]);
        }
    }
    let mut all_cells = cells.clone();
    all_cells.extend(cells.iter().map(|&[a, b, c]| [image[a], image[c], image[b]]));
    let kept: Vec<_> = boundary.into_iter().filter(|e| e.2 != CUT).collect();
    let mut all_edges = kept.clone();
    all_edges.extend(kept.iter().map(|&(a, b, seg)| (image[b], image[a], seg)));
    (points, all_cells, all_edges)
}

/// Meshes a container profile; requires a valid domain.
pub fn triangulate<T: Real>(d: &PlanarDomain<T>, sizing: impl Into<Sizing<T>>) -> Result<TriMesh<T>> {
    let violations = validate_domain(d);
    if !violations.is_empty() {
        return Err(SloshError::InvalidDomain(violations));
    }
    mesh_polygon(d, sizing.into())
}

/// Meshes a planar cross-section that need not carry a free surface
/// (e.g. the horizontal section of a cylindrical tank for the Neumann
/// problem).
pub fn triangulate_section<T: Real>(d: &PlanarDomain<T>, sizing: impl Into<Sizing<T>>) -> Result<TriMesh<T>> {
    let mut violations = validate_geometry(d);
    if d.kind != DomainKind::Planar {
        violations.push("cross-section must be planar".into());
    }
    if !violations.is_empty() {
        return Err(SloshError::InvalidDomain(violations));
    }
    mesh_polygon(d, sizing.into())
}

fn mesh_polygon<T: Real>(d: &PlanarDomain<T>, sizing: Sizing<T>) -> Result<TriMesh<T>> {
    sizing.check()?;
    let poly: Vec<[f64; 2]> = d.vertices.iter().map(|p| [p.x.to_f64_lossy(), p.z.to_f64_lossy()]).collect();
    let diameter = d.diameter().to_f64_lossy();
    if sizing.finest().to_f64_lossy() > diameter {
        log::warn!(
            "mesh size {} exceeds domain diameter {diameter}; mesh will be coarse",
            sizing.finest()
        );
    }
    let surface = d
        .edges()
        .filter(|e| e.2 == EdgeTag::F)
        .map(|(a, b, _)| ([a.x.to_f64_lossy(), a.z.to_f64_lossy()], [b.x.to_f64_lossy(), b.z.to_f64_lossy()]))
        .collect();
    let kind = match sizing {
        Sizing::Uniform(h) => SizeKind::Uniform(h.to_f64_lossy()),
        Sizing::Graded { near, rate, max } => SizeKind::Graded {
            near: near.to_f64_lossy(),
            rate: rate.to_f64_lossy(),
            max: max.to_f64_lossy(),
        },
    };
    let field = SizeField { kind, surface };
    // Rough point budget: twice the equilateral count at the finest size.
    let area = d.signed_area().to_f64_lossy().abs();
    let h = sizing.finest().to_f64_lossy();
    let budget = ((8.0 * area / (h * h)) as usize).saturating_add(100_000).min(20_000_000);
    let params = RefineParams { min_angle: MIN_ANGLE_DEG.to_radians(), size: &field, max_points: budget };
    let symmetric = if d.kind == DomainKind::Planar && is_mirror_symmetric(&poly, &d.tags, diameter) {
        half_polygon(&poly, 1e-12 * diameter)
    } else {
        None
    };
    let (points, cells, boundary) = match symmetric {
        Some((half, labels)) => {
            let tri = delaunay::refine_polygon(&half, &params)?;
            let boundary = tri.boundary.iter().map(|&(a, b, seg)| (a, b, labels[seg])).collect();
            mirror(tri.points, tri.cells, boundary)
        }
        None => {
            let tri = delaunay::refine_polygon(&poly, &params)?;
            (tri.points, tri.cells, tri.boundary)
        }
    };

    let mut nodes: Vec<Point2<T>> = points.iter().map(|p| Point2::new(T::lit(p[0]), T::lit(p[1]))).collect();
    let bedges: Vec<BoundaryEdge> =
        boundary.iter().map(|&(a, b, seg)| BoundaryEdge { a, b, tag: d.tags[seg] }).collect();
    // Midpoint splits accumulate rounding; snap F and Axis nodes exactly.
    for e in &bedges {
        for v in [e.a, e.b] {
            match e.tag {
                EdgeTag::F => nodes[v].z = T::zero(),
                EdgeTag::Axis => nodes[v].x = T::zero(),
                EdgeTag::B => {}
            }
        }
    }
    let mut mesh = TriMesh { kind: d.kind, nodes, cells, bedges, h_max: T::zero() };
    mesh.h_max = mesh.longest_edge();
    Ok(mesh)
}

impl<T: Real> TriMesh<T> {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn cell_area(&self, c: usize) -> T {
        let [a, b, d] = self.cells[c].map(|i| self.nodes[i]);
        ((b.x - a.x) * (d.z - a.z) - (b.z - a.z) * (d.x - a.x)) * T::lit(0.5)
    }

    pub fn area(&self) -> T {
        (0..self.cells.len()).map(|c| self.cell_area(c)).sum()
    }

    fn longest_edge(&self) -> T {
        let mut h = T::zero();
        for cell in &self.cells {
            for k in 0..3 {
                h = h.max(self.nodes[cell[k]].dist(&self.nodes[cell[(k + 1) % 3]]));
            }
        }
        h
    }

    /// Sorted, deduplicated nodes touched by boundary edges with `tag`.
    pub fn tagged_nodes(&self, tag: EdgeTag) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .bedges
            .iter()
            .filter(|e| e.tag == tag)
            .flat_map(|e| [e.a, e.b])
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Per-node flag: lies on an edge with `tag`.
    pub fn tag_mask(&self, tag: EdgeTag) -> Vec<bool> {
        let mut m = vec![false; self.nodes.len()];
        for v in self.tagged_nodes(tag) {
            m[v] = true;
        }
        m
    }

    /// Every edge with the cells on either side (`usize::MAX` if none).
    fn edge_map(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut map: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (c, cell) in self.cells.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (cell[k], cell[(k + 1) % 3]);
                map.entry((a.min(b), a.max(b))).or_default().push(c);
            }
        }
        map
    }

    /// Lists every violated mesh invariant; empty means valid.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.nodes.len();
        if self.cells.iter().flatten().chain(self.bedges.iter().flat_map(|e| [&e.a, &e.b])).any(|&v| v >= n) {
            out.push("index: reference to a missing node".into());
            return out;
        }
        if (0..self.cells.len()).any(|c| !(self.cell_area(c) > T::zero())) {
            out.push("orientation: cell with non-positive signed area".into());
        }
        let edges = self.edge_map();
        let mut boundary: BTreeMap<(usize, usize), ()> = BTreeMap::new();
        for (k, cells) in &edges {
            match cells.len() {
                1 => {
                    boundary.insert(*k, ());
                }
                2 => {}
                m => out.push(format!("conformity: edge {k:?} shared by {m} cells")),
            }
        }
        let mut bset: BTreeMap<(usize, usize), ()> = BTreeMap::new();
        for e in &self.bedges {
            if bset.insert((e.a.min(e.b), e.a.max(e.b)), ()).is_some() {
                out.push(format!("conformity: duplicate boundary edge ({}, {})", e.a, e.b));
            }
        }
        if bset.keys().ne(boundary.keys()) {
            out.push("conformity: boundary edges differ from the mesh boundary".into());
        }
        let zero = T::zero();
        for e in &self.bedges {
            match e.tag {
                EdgeTag::F if self.nodes[e.a].z != zero || self.nodes[e.b].z != zero => {
                    out.push("free surface: F node off z=0".into());
                }
                EdgeTag::Axis if self.nodes[e.a].x != zero || self.nodes[e.b].x != zero => {
                    out.push("axis: Axis node off r=0".into());
                }
                EdgeTag::Axis if self.kind == DomainKind::Planar => {
                    out.push("axis: Axis edge in planar mesh".into());
                }
                _ => {}
            }
        }
        let used = {
            let mut u = vec![false; n];
            for &v in self.cells.iter().flatten() {
                u[v] = true;
            }
            u
        };
        if used.iter().any(|&u| !u) {
            out.push("conformity: node not referenced by any cell".into());
        }
        let euler = n as i64 - edges.len() as i64 + self.cells.len() as i64;
        if euler != 1 {
            out.push(format!("euler: V - E + C = {euler}, expected 1"));
        }
        let h = self.longest_edge();
        if (h - self.h_max).abs() > T::epsilon() * T::lit(16.0) * h {
            out.push(format!("h_max: stored {} but longest edge is {h}", self.h_max));
        }
        out.dedup();
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(SloshError::Invariant(v))
        }
    }

    pub fn quality(&self) -> MeshQuality<T> {
        let mut min_angle = T::infinity();
        let mut max_angle = T::zero();
        let mut h_max = T::zero();
        let mut h_min = T::infinity();
        for cell in &self.cells {
            let p = cell.map(|i| self.nodes[i]);
            let len = [p[1].dist(&p[2]), p[2].dist(&p[0]), p[0].dist(&p[1])];
            for k in 0..3 {
                h_max = h_max.max(len[k]);
                h_min = h_min.min(len[k]);
                let (a, b, c) = (len[k], len[(k + 1) % 3], len[(k + 2) % 3]);
                let cos = ((b * b + c * c - a * a) / (T::lit(2.0) * b * c)).max(-T::one()).min(T::one());
                let ang = cos.acos().to_degrees();
                min_angle = min_angle.min(ang);
                max_angle = max_angle.max(ang);
            }
        }
        MeshQuality { min_angle, max_angle, h_max, h_min, cell_count: self.cells.len() }
    }

    /// Splits every cell into four through its edge midpoints.
    pub fn refine_uniform(&self) -> TriMesh<T> {
        let mut nodes = self.nodes.clone();
        let mut mids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut mid = |a: usize, b: usize, nodes: &mut Vec<Point2<T>>| -> usize {
            *mids.entry((a.min(b), a.max(b))).or_insert_with(|| {
                nodes.push(nodes[a].midpoint(&nodes[b]));
                nodes.len() - 1
            })
        };
        let mut cells = Vec::with_capacity(4 * self.cells.len());
        for &[a, b, c] in &self.cells {
            let ab = mid(a, b, &mut nodes);
            let bc = mid(b, c, &mut nodes);
            let ca = mid(c, a, &mut nodes);
            cells.push([a, ab, ca]);
            cells.push([ab, b, bc]);
            cells.push([ca, bc, c]);
            cells.push([ab, bc, ca]);
        }
        let mut bedges = Vec::with_capacity(2 * self.bedges.len());
        for e in &self.bedges {
            let m = mid(e.a, e.b, &mut nodes);
            bedges.push(BoundaryEdge { a: e.a, b: m, tag: e.tag });
            bedges.push(BoundaryEdge { a: m, b: e.b, tag: e.tag });
        }
        let mut out = TriMesh { kind: self.kind, nodes, cells, bedges, h_max: T::zero() };
        out.h_max = out.longest_edge();
        out
    }

    /// Locates the cell containing `p`; returns it with barycentric weights.
    pub fn locate(&self, p: Point2<T>) -> Option<(usize, [T; 3])> {
        let tol = -T::tol(1e-10);
        for (c, cell) in self.cells.iter().enumerate() {
            let [a, b, d] = cell.map(|i| self.nodes[i]);
            let det = (b.x - a.x) * (d.z - a.z) - (b.z - a.z) * (d.x - a.x);
            let l1 = ((p.x - a.x) * (d.z - a.z) - (p.z - a.z) * (d.x - a.x)) / det;
            let l2 = ((b.x - a.x) * (p.z - a.z) - (b.z - a.z) * (p.x - a.x)) / det;
            let l0 = T::one() - l1 - l2;
            if l0 >= tol && l1 >= tol && l2 >= tol {
                return Some((c, [l0, l1, l2]));
            }
        }
        None
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> SloshError {
    SloshError::Parse { line, message: message.into() }
}

fn field<'a, F: std::str::FromStr>(
    toks: &mut impl Iterator<Item = &'a str>,
    line: usize,
    what: &str,
) -> Result<F> {
    let t = toks.next().ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    t.parse().map_err(|_| parse_err(line, format!("bad {what} `{t}`")))
}

/// Parses the ASCII mesh format and checks all mesh invariants.
pub fn parse_mesh<T: Real, R: BufRead>(reader: R) -> Result<TriMesh<T>> {
    let mut kind = None;
    let mut nodes = Vec::new();
    let mut cells = Vec::new();
    let mut bedges = Vec::new();
    let mut pending: Vec<(usize, Vec<usize>)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        match toks.next() {
            Some("mesh") => {
                let k: String = field(&mut toks, lineno, "mesh kind")?;
                kind = Some(k.parse::<DomainKind>().map_err(|e| parse_err(lineno, e))?);
            }
            Some("n") => {
                let x: T = field(&mut toks, lineno, "x")?;
                let z: T = field(&mut toks, lineno, "z")?;
                nodes.push(Point2::new(x, z));
            }
            Some("c") => {
                let ids = [
                    field(&mut toks, lineno, "node index")?,
                    field(&mut toks, lineno, "node index")?,
                    field(&mut toks, lineno, "node index")?,
                ];
                pending.push((lineno, ids.to_vec()));
                cells.push(ids);
            }
            Some("b") => {
                let a = field(&mut toks, lineno, "node index")?;
                let b = field(&mut toks, lineno, "node index")?;
                let tag: String = field(&mut toks, lineno, "tag")?;
                let tag = tag.parse::<EdgeTag>().map_err(|e| parse_err(lineno, e))?;
                pending.push((lineno, vec![a, b]));
                bedges.push(BoundaryEdge { a, b, tag });
            }
            Some(other) => return Err(parse_err(lineno, format!("unknown record `{other}`"))),
            None => {}
        }
        if toks.next().is_some() {
            return Err(parse_err(lineno, "trailing tokens"));
        }
    }
    let kind = kind.ok_or_else(|| parse_err(0, "missing `mesh` header"))?;
    for (lineno, ids) in pending {
        if let Some(bad) = ids.iter().find(|&&i| i >= nodes.len()) {
            return Err(parse_err(lineno, format!("reference to missing node {bad}")));
        }
    }
    let mut mesh = TriMesh { kind, nodes, cells, bedges, h_max: T::zero() };
    mesh.h_max = mesh.longest_edge();
    mesh.validate()?;
    Ok(mesh)
}

pub fn read_mesh<T: Real>(path: impl AsRef<Path>) -> Result<TriMesh<T>> {
    let f = std::fs::File::open(path)?;
    parse_mesh(std::io::BufReader::new(f))
}

/// Writes the ASCII mesh format; coordinates carry 17 significant digits.
pub fn write_mesh_to<T: Real, W: Write>(m: &TriMesh<T>, mut w: W) -> Result<()> {
    writeln!(w, "mesh {}", m.kind)?;
    writeln!(w, "# {} nodes, {} cells, {} boundary edges", m.nodes.len(), m.cells.len(), m.bedges.len())?;
    for p in &m.nodes {
        writeln!(w, "n {:.16e} {:.16e}", p.x, p.z)?;
    }
    for c in &m.cells {
        writeln!(w, "c {} {} {}", c[0], c[1], c[2])?;
    }
    for e in &m.bedges {
        writeln!(w, "b {} {} {}", e.a, e.b, e.tag)?;
    }
    Ok(())
}

pub fn write_mesh<T: Real>(m: &TriMesh<T>, path: impl AsRef<Path>) -> Result<()> {
    let f = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(f);
    write_mesh_to(m, &mut w)?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::*;

    fn unit_square() -> PlanarDomain<f64> {
        make_trapezoid_section(0.5, 0.5, 1.0).unwrap()
    }

    fn two_cell_square() -> TriMesh<f64> {
        TriMesh {
            kind: DomainKind::Planar,
            nodes: vec![
                Point2::new(0.0, -1.0),
                Point2::new(1.0, -1.0),
                Point2::new(1.0, 0.0),
                Point2::new(0.0, 0.0),
            ],
            cells: vec![[0, 1, 2], [0, 2, 3]],
            bedges: vec![
                BoundaryEdge { a: 0, b: 1, tag: EdgeTag::B },
                BoundaryEdge { a: 1, b: 2, tag: EdgeTag::B },
                BoundaryEdge { a: 2, b: 3, tag: EdgeTag::F },
                BoundaryEdge { a: 3, b: 0, tag: EdgeTag::B },
            ],
            h_max: 2f64.sqrt(),
        }
    }

    #[test]
    fn unit_square_mesh() {
        let m = triangulate(&unit_square(), 0.5).unwrap();
        assert!(m.violations().is_empty(), "{:?}", m.violations());
        assert!(m.cells.len() >= 8);
        assert!((m.area() - 1.0).abs() < 1e-12);
        assert!(m.h_max <= 0.75);
    }

    #[test]
    fn cylinder_mesh_quality() {
        let d = make_cylinder_profile(1.0).unwrap();
        let m = triangulate(&d, 0.05).unwrap();
        assert!(m.violations().is_empty(), "{:?}", m.violations());
        let q = m.quality();
        assert!(q.min_angle >= 20.0, "min angle {}", q.min_angle);
        assert!(q.h_max <= 1.5 * 0.05);
        assert!((400..=1500).contains(&m.node_count()), "{} nodes", m.node_count());
        // F and Axis tags carried over.
        assert!(m.tagged_nodes(EdgeTag::F).iter().all(|&v| m.nodes[v].z == 0.0));
        assert!(m.tagged_nodes(EdgeTag::Axis).iter().all(|&v| m.nodes[v].x == 0.0));
    }

    #[test]
    fn all_canonical_shapes_mesh_cleanly() {
        let shapes = [
            make_trough_section(0.1f64, 1.0, 1.0).unwrap(),
            make_trough_section(1.0, 1.0, 1.0).unwrap(),
            make_trough_section(0.0, 1.0, 1.0).unwrap(),
            make_trapezoid_section(1.5, 1.0, 1.0).unwrap(),
            make_trapezoid_section(1.0, 1.5, 1.0).unwrap(),
            make_silo_profile(1.0, 1.0, 16).unwrap(),
            make_icefishing_profile(1.0, 4.0, 4.0).unwrap(),
        ];
        for d in &shapes {
            let m = triangulate(d, 0.1).unwrap();
            assert!(m.violations().is_empty(), "{}: {:?}", d.name, m.violations());
            let q = m.quality();
            assert!(q.min_angle >= 20.0, "{}: min angle {}", d.name, q.min_angle);
            assert!(q.h_max <= 0.15, "{}: h_max {}", d.name, q.h_max);
            let rel = (m.area() - d.signed_area()).abs() / d.signed_area();
            assert!(rel < 1e-12, "{}: area mismatch {rel}", d.name);
        }
    }

    #[test]
    fn graded_mesh_is_fine_near_surface() {
        let d = make_icefishing_profile(1.0, 10.0, 10.0).unwrap();
        let m = triangulate(&d, Sizing::Graded { near: 0.05, rate: 0.3, max: 1.0 }).unwrap();
        assert!(m.violations().is_empty(), "{:?}", m.violations());
        assert!(m.quality().min_angle >= 20.0);
        let f = m.tagged_nodes(EdgeTag::F);
        // Hole of radius 1 resolved at spacing 0.05.
        assert!(f.len() >= 21, "{} F nodes", f.len());
        assert!(m.node_count() < 20_000);
    }

    #[test]
    fn disk_section_meshes() {
        let d = make_disk_section(1.0, 64).unwrap();
        assert!(triangulate(&d, 0.1).is_err());
        let m = triangulate_section(&d, 0.1).unwrap();
        assert!(m.violations().is_empty(), "{:?}", m.violations());
        assert!(m.quality().min_angle >= 20.0);
    }

    #[test]
    fn bowtie_is_rejected() {
        let bowtie = PlanarDomain {
            name: "bowtie".into(),
            kind: DomainKind::Planar,
            vertices: vec![
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 0.0),
                Point2::new(0.0, -1.0),
                Point2::new(1.0, -1.0),
            ],
            tags: vec![EdgeTag::F, EdgeTag::B, EdgeTag::B, EdgeTag::B],
        };
        assert!(matches!(triangulate(&bowtie, 0.1), Err(SloshError::InvalidDomain(_))));
    }

    #[test]
    fn coarse_target_still_meshes() {
        let m = triangulate(&unit_square(), 10.0).unwrap();
        assert!(m.violations().is_empty());
        // Mirrored halves: the four corners plus both ends of the cut.
        assert_eq!(m.node_count(), 6);
    }

    #[test]
    fn symmetric_domains_get_mirror_meshes() {
        for d in [make_trough_section(1.0f64, 1.0, 1.0).unwrap(), make_disk_section(1.0, 40).unwrap()] {
            let m = triangulate_section(&d, 0.15).unwrap();
            assert!(m.violations().is_empty());
            for p in &m.nodes {
                assert!(m.nodes.iter().any(|q| q.x == -p.x && q.z == p.z), "no mirror image of {p:?}");
            }
            assert!((m.area() - d.signed_area()).abs() < 1e-12);
        }
        let silo = make_silo_profile(1.0f64, 1.0, 8).unwrap();
        assert!(triangulate(&silo, 0.2).unwrap().violations().is_empty());
    }

    #[test]
    fn sharp_corners_do_not_cascade() {
        for (a, b, h, size) in [(1.1616624314680453f64, 0.3, 0.3, 0.116), (2.0, 0.3, 0.1, 0.1)] {
            let d = make_trapezoid_section(a, b, h).unwrap();
            let m = triangulate(&d, size).unwrap();
            assert!(m.violations().is_empty());
            assert!(m.node_count() < 400, "{} nodes", m.node_count());
            let f: Vec<f64> = m.tagged_nodes(EdgeTag::F).iter().map(|&i| m.nodes[i].x).collect();
            let closest = f.iter().map(|x| a - x.abs()).filter(|&g| g > 0.0).fold(f64::INFINITY, f64::min);
            assert!(closest > 1e-3, "surface nodes crowd the corner: gap {closest:e}");
        }
    }

    #[test]
    fn triangulation_is_deterministic() {
        let d = make_silo_profile(1.0, 1.0, 16).unwrap();
        let a = triangulate(&d, 0.07).unwrap();
        let b = triangulate(&d, 0.07).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn refinement_counts_and_sizes() {
        let m = two_cell_square();
        assert!(m.violations().is_empty());
        let r = m.refine_uniform();
        assert_eq!(r.cells.len(), 8);
        assert!(r.violations().is_empty());
        let rr = r.refine_uniform();
        assert!((rr.h_max - m.h_max / 4.0).abs() < 1e-15);

        let cyl = triangulate(&make_cylinder_profile(1.0).unwrap(), 0.2).unwrap();
        let rc = cyl.refine_uniform();
        let nf = |m: &TriMesh<f64>| m.bedges.iter().filter(|e| e.tag == EdgeTag::F).count();
        assert_eq!(nf(&rc), 2 * nf(&cyl));
        assert_eq!(rc.cells.len(), 4 * cyl.cells.len());
        assert!(rc.violations().is_empty());
        // Midpoint subdivision yields similar triangles.
        assert!((rc.quality().min_angle - cyl.quality().min_angle).abs() < 1e-9);
        assert!((rc.area() - cyl.area()).abs() < 1e-12 * cyl.area());
    }

    #[test]
    fn quality_of_reference_triangles() {
        let eq = TriMesh {
            kind: DomainKind::Planar,
            nodes: vec![Point2::new(0.0, -1.0), Point2::new(1.0, -1.0), Point2::new(0.5, 3f64.sqrt() / 2.0 - 1.0)],
            cells: vec![[0, 1, 2]],
            bedges: vec![],
            h_max: 1.0,
        };
        let q = eq.quality();
        assert!((q.min_angle - 60.0).abs() < 1e-9 && (q.max_angle - 60.0).abs() < 1e-9);
        let right = TriMesh {
            nodes: vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)],
            ..eq
        };
        let q = right.quality();
        assert!((q.min_angle - 45.0).abs() < 1e-9);
        assert!((q.max_angle - 90.0).abs() < 1e-9);
    }

    #[test]
    fn mesh_round_trip_is_exact() {
        let m = triangulate(&make_silo_profile(1.0, 0.5, 12).unwrap(), 0.1).unwrap();
        let mut buf = Vec::new();
        write_mesh_to(&m, &mut buf).unwrap();
        let back: TriMesh<f64> = parse_mesh(&buf[..]).unwrap();
        assert_eq!(back, m);
        let mut again = Vec::new();
        write_mesh_to(&back, &mut again).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn mesh_parse_errors() {
        let text = "mesh planar\nn 0 0\nn 1 0\nn 0 1\nc 0 1 7\n";
        match parse_mesh::<f64, _>(text.as_bytes()) {
            Err(SloshError::Parse { line, message }) => {
                assert_eq!(line, 5);
                assert!(message.contains("missing node"));
            }
            other => panic!("{other:?}"),
        }
        let text = "mesh planar\nn 0 0\nn 1 0\nn 0 1\nc 0 2 1\nb 0 1 B\nb 1 2 B\nb 2 0 B\n";
        match parse_mesh::<f64, _>(text.as_bytes()) {
            Err(SloshError::Invariant(v)) => assert!(v.iter().any(|s| s.starts_with("orientation")), "{v:?}"),
            other => panic!("{other:?}"),
        }
    }
}
