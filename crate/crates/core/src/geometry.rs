//! Tagged polygonal cross-sections and profiles of containers.
//!
//! Every domain lives in a vertical half-plane with the free surface on
//! `z = 0`. Planar domains are trough cross-sections in `(x, z)`;
//! axisymmetric domains are meridional profiles in `(r, z)` with `r >= 0`
//! that are swept around the `z` axis.

use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Result, SloshError};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Point2<T> {
    /// Horizontal coordinate (`x` for planar, `r` for axisymmetric).
    pub x: T,
    /// Vertical coordinate, pointing upwards.
    pub z: T,
}

impl<T: Real> Point2<T> {
    pub fn new(x: T, z: T) -> Self {
        Self { x, z }
    }

    pub fn dist(&self, o: &Self) -> T {
        (self.x - o.x).hypot(self.z - o.z)
    }

    pub fn midpoint(&self, o: &Self) -> Self {
        let half = T::lit(0.5);
        Self::new((self.x + o.x) * half, (self.z + o.z) * half)
    }

    pub fn cast<U: Real>(&self) -> Point2<U> {
        Point2::new(U::lit(self.x.to_f64_lossy()), U::lit(self.z.to_f64_lossy()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DomainKind {
    Planar,
    Axisymmetric,
}

impl DomainKind {
    pub fn keyword(self) -> &'static str {
        match self {
            DomainKind::Planar => "planar",
            DomainKind::Axisymmetric => "axisym",
        }
    }
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for DomainKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "planar" => Ok(DomainKind::Planar),
            "axisym" | "axisymmetric" => Ok(DomainKind::Axisymmetric),
            other => Err(format!("unknown domain kind `{other}`")),
        }
    }
}

/// Boundary role of a polygon edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeTag {
    /// Free surface.
    F,
    /// Wetted wall.
    B,
    /// Symmetry axis `r = 0` of an axisymmetric profile.
    Axis,
}

impl fmt::Display for EdgeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeTag::F => "F",
            EdgeTag::B => "B",
            EdgeTag::Axis => "Axis",
        })
    }
}

impl FromStr for EdgeTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "F" => Ok(EdgeTag::F),
            "B" => Ok(EdgeTag::B),
            "Axis" => Ok(EdgeTag::Axis),
            other => Err(format!("unknown edge tag `{other}`")),
        }
    }
}

/// Closed polygon with one tag per edge; edge `i` joins vertex `i` to
/// vertex `i + 1` (cyclically).
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarDomain<T> {
    pub name: String,
    pub kind: DomainKind,
    pub vertices: Vec<Point2<T>>,
    pub tags: Vec<EdgeTag>,
}

impl<T: Real> PlanarDomain<T> {
    pub fn edge(&self, i: usize) -> (Point2<T>, Point2<T>) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2<T>, Point2<T>, EdgeTag)> + '_ {
        (0..self.vertices.len()).map(move |i| {
            let (a, b) = self.edge(i);
            (a, b, self.tags[i])
        })
    }

    /// Shoelace area; positive for counterclockwise polygons.
    pub fn signed_area(&self) -> T {
        let n = self.vertices.len();
        let mut acc = T::zero();
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            acc += a.x * b.z - b.x * a.z;
        }
        acc * T::lit(0.5)
    }

    pub fn diameter(&self) -> T {
        let mut d = T::zero();
        for a in &self.vertices {
            for b in &self.vertices {
                d = d.max(a.dist(b));
            }
        }
        d
    }

    pub fn free_surface_length(&self) -> T {
        self.edges()
            .filter(|e| e.2 == EdgeTag::F)
            .map(|(a, b, _)| a.dist(&b))
            .sum()
    }
}

fn positive<T: Real>(name: &str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(SloshError::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

/// Cylindrical mug of unit radius and depth `h`, as an `(r, z)` profile.
pub fn make_cylinder_profile<T: Real>(h: T) -> Result<PlanarDomain<T>> {
    positive("depth h", h)?;
    let (zero, one) = (T::zero(), T::one());
    Ok(PlanarDomain {
        name: "cylinder".into(),
        kind: DomainKind::Axisymmetric,
        vertices: vec![
            Point2::new(zero, -h),
            Point2::new(one, -h),
            Point2::new(one, zero),
            Point2::new(zero, zero),
        ],
        tags: vec![EdgeTag::B, EdgeTag::B, EdgeTag::F, EdgeTag::Axis],
    })
}

/// Hexagonal trough cross-section with unit free-surface half-width.
///
/// The walls run outward-downward from `(±1, 0)` to `(±(1 + x), -y)`, then
/// vertically down by `d`, closed by a flat bottom.
pub fn make_trough_section<T: Real>(x: T, y: T, d: T) -> Result<PlanarDomain<T>> {
    if !(x >= T::zero() && x.is_finite()) {
        return Err(SloshError::InvalidParameter(format!(
            "overhang x must be non-negative, got {x}"
        )));
    }
    positive("rise y", y)?;
    positive("wall depth d", d)?;
    let (zero, one) = (T::zero(), T::one());
    let w = one + x;
    Ok(PlanarDomain {
        name: "trough".into(),
        kind: DomainKind::Planar,
        vertices: vec![
            Point2::new(-w, -y - d),
            Point2::new(w, -y - d),
            Point2::new(w, -y),
            Point2::new(one, zero),
            Point2::new(-one, zero),
            Point2::new(-w, -y),
        ],
        tags: vec![EdgeTag::B, EdgeTag::B, EdgeTag::B, EdgeTag::F, EdgeTag::B, EdgeTag::B],
    })
}

/// Isosceles trapezoid with free surface `[-a_top, a_top]` and bottom
/// `[-a_bot, a_bot]` at depth `h`.
pub fn make_trapezoid_section<T: Real>(a_top: T, a_bot: T, h: T) -> Result<PlanarDomain<T>> {
    positive("a_top", a_top)?;
    positive("a_bot", a_bot)?;
    positive("depth h", h)?;
    Ok(PlanarDomain {
        name: "trapezoid".into(),
        kind: DomainKind::Planar,
        vertices: vec![
            Point2::new(-a_bot, -h),
            Point2::new(a_bot, -h),
            Point2::new(a_top, T::zero()),
            Point2::new(-a_top, T::zero()),
        ],
        tags: vec![EdgeTag::B, EdgeTag::B, EdgeTag::F, EdgeTag::B],
    })
}

/// Dome segments giving the standard 19-edge silo outline (axis excluded).
pub const SILO_CAP_POINTS: usize = 16;

/// Grain-silo profile: a vertical wall of radius `radius` topped by a
/// quarter-circle dome of radius `radius / 2`, filled up into the dome.
///
/// The dome is centred at `(radius / 2, -radius / 2)`, so it meets the free
/// surface `r <= radius / 2` tangentially from below; the polyline with
/// `cap_points` segments makes an interior B–F angle of
/// `180° - 45° / cap_points`.
pub fn make_silo_profile<T: Real>(radius: T, straight: T, cap_points: usize) -> Result<PlanarDomain<T>> {
    positive("radius", radius)?;
    positive("straight wall length", straight)?;
    if cap_points < 4 {
        return Err(SloshError::InvalidParameter(format!(
            "cap_points must be at least 4, got {cap_points}"
        )));
    }
    let zero = T::zero();
    let rho = radius * T::lit(0.5);
    let bottom = -rho - straight;
    let mut vertices = vec![
        Point2::new(zero, bottom),
        Point2::new(radius, bottom),
        Point2::new(radius, -rho),
    ];
    let mut tags = vec![EdgeTag::B, EdgeTag::B];
    let quarter = T::FRAC_PI_2();
    for k in 1..=cap_points {
        let p = if k == cap_points {
            Point2::new(rho, zero)
        } else {
            let t = quarter * T::from_count(k) / T::from_count(cap_points);
            Point2::new(rho + rho * t.cos(), -rho + rho * t.sin())
        };
        vertices.push(p);
        tags.push(EdgeTag::B);
    }
    vertices.push(Point2::new(zero, zero));
    tags.push(EdgeTag::F);
    tags.push(EdgeTag::Axis);
    Ok(PlanarDomain { name: "silo".into(), kind: DomainKind::Axisymmetric, vertices, tags })
}

/// Truncated ice-fishing domain: a hole of radius `hole` in an ice sheet,
/// over a cylinder of radius `outer` and depth `depth`.
pub fn make_icefishing_profile<T: Real>(hole: T, outer: T, depth: T) -> Result<PlanarDomain<T>> {
    positive("hole radius R", hole)?;
    positive("truncation depth H", depth)?;
    if !(outer > hole && outer.is_finite()) {
        return Err(SloshError::InvalidParameter(format!(
            "truncation radius R_out = {outer} must exceed hole radius R = {hole}"
        )));
    }
    let zero = T::zero();
    Ok(PlanarDomain {
        name: "icefishing".into(),
        kind: DomainKind::Axisymmetric,
        vertices: vec![
            Point2::new(zero, -depth),
            Point2::new(outer, -depth),
            Point2::new(outer, zero),
            Point2::new(hole, zero),
            Point2::new(zero, zero),
        ],
        tags: vec![EdgeTag::B, EdgeTag::B, EdgeTag::B, EdgeTag::F, EdgeTag::Axis],
    })
}

/// Regular polygon inscribed in a circle, all edges tagged `B`.
///
/// This is a horizontal cross-section `D` for the planar Neumann problem,
/// not a container profile: it has no free surface and is meshed with
/// [`crate::mesh::triangulate_section`].
pub fn make_disk_section<T: Real>(radius: T, segments: usize) -> Result<PlanarDomain<T>> {
    positive("radius", radius)?;
    if segments < 3 {
        return Err(SloshError::InvalidParameter(format!(
            "disk needs at least 3 segments, got {segments}"
        )));
    }
    let vertices = (0..segments)
        .map(|k| {
            let t = T::TAU() * T::from_count(k) / T::from_count(segments);
            Point2::new(radius * t.cos(), radius * t.sin())
        })
        .collect();
    Ok(PlanarDomain {
        name: "disk".into(),
        kind: DomainKind::Planar,
        vertices,
        tags: vec![EdgeTag::B; segments],
    })
}

/// Named canonical shape with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum ProfileParams<T> {
    Cylinder { depth: T },
    Trough { overhang: T, rise: T, wall_depth: T },
    Trapezoid { top: T, bottom: T, depth: T },
    Silo { radius: T, straight: T, cap_points: usize },
    IceFishing { hole: T, outer: T, depth: T },
}

impl<T: Real> ProfileParams<T> {
    pub fn build(&self) -> Result<PlanarDomain<T>> {
        match *self {
            ProfileParams::Cylinder { depth } => make_cylinder_profile(depth),
            ProfileParams::Trough { overhang, rise, wall_depth } => {
                make_trough_section(overhang, rise, wall_depth)
            }
            ProfileParams::Trapezoid { top, bottom, depth } => make_trapezoid_section(top, bottom, depth),
            ProfileParams::Silo { radius, straight, cap_points } => {
                make_silo_profile(radius, straight, cap_points)
            }
            ProfileParams::IceFishing { hole, outer, depth } => make_icefishing_profile(hole, outer, depth),
        }
    }
}

fn orient<T: Real>(a: Point2<T>, b: Point2<T>, c: Point2<T>) -> T {
    (b.x - a.x) * (c.z - a.z) - (b.z - a.z) * (c.x - a.x)
}

fn on_segment<T: Real>(a: Point2<T>, b: Point2<T>, p: Point2<T>) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.z >= a.z.min(b.z) && p.z <= a.z.max(b.z)
}

fn segments_intersect<T: Real>(a: Point2<T>, b: Point2<T>, c: Point2<T>, d: Point2<T>) -> bool {
    let zero = T::zero();
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > zero && d2 < zero) || (d1 < zero && d2 > zero))
        && ((d3 > zero && d4 < zero) || (d3 < zero && d4 > zero))
    {
        return true;
    }
    (d1 == zero && on_segment(c, d, a))
        || (d2 == zero && on_segment(c, d, b))
        || (d3 == zero && on_segment(a, b, c))
        || (d4 == zero && on_segment(a, b, d))
}

/// Purely geometric checks: closure, simplicity, orientation, tag count.
pub fn validate_geometry<T: Real>(d: &PlanarDomain<T>) -> Vec<String> {
    let mut out = Vec::new();
    let n = d.vertices.len();
    if n < 3 {
        out.push(format!("polygon needs at least 3 vertices, has {n}"));
        return out;
    }
    if d.tags.len() != n {
        out.push(format!("{} edge tags for {} edges", d.tags.len(), n));
    }
    if d.vertices.iter().any(|p| !p.x.is_finite() || !p.z.is_finite()) {
        out.push("non-finite vertex coordinate".into());
        return out;
    }
    let mut simple = true;
    'outer: for i in 0..n {
        let (a, b) = d.edge(i);
        if a == b {
            simple = false;
            break;
        }
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (c, e) = d.edge(j);
            if adjacent {
                // Adjacent edges share one vertex; they may not fold back onto each other.
                let shared = if j == i + 1 { b } else { a };
                let far_i = if j == i + 1 { a } else { b };
                let far_j = if j == i + 1 { e } else { c };
                if orient(far_i, shared, far_j) == T::zero() {
                    let u = (far_i.x - shared.x) * (far_j.x - shared.x)
                        + (far_i.z - shared.z) * (far_j.z - shared.z);
                    if u > T::zero() {
                        simple = false;
                        break 'outer;
                    }
                }
            } else if segments_intersect(a, b, c, e) {
                simple = false;
                break 'outer;
            }
        }
    }
    if !simple {
        out.push("polygon not simple".into());
    } else if d.signed_area() <= T::zero() {
        out.push("polygon not counterclockwise".into());
    }
    out
}

/// Lists every violated domain invariant; empty means valid.
pub fn validate_domain<T: Real>(d: &PlanarDomain<T>) -> Vec<String> {
    let mut out = validate_geometry(d);
    let n = d.vertices.len();
    if n < 3 || d.tags.len() != n {
        return out;
    }
    let zero = T::zero();
    let mut has_f = false;
    let mut has_b = false;
    for (a, b, tag) in d.edges() {
        match tag {
            EdgeTag::F => {
                has_f = true;
                if a.z != zero || b.z != zero {
                    out.push("F edge off z=0".into());
                }
            }
            EdgeTag::B => has_b = true,
            EdgeTag::Axis => {
                if d.kind == DomainKind::Planar {
                    out.push("Axis edge in planar domain".into());
                }
                if a.x != zero || b.x != zero {
                    out.push("Axis edge off r=0".into());
                }
            }
        }
    }
    if !has_f {
        out.push("no F edge".into());
    }
    if !has_b {
        out.push("no B edge".into());
    }
    // Axis edges must form one cyclic run.
    let runs = (0..n)
        .filter(|&i| d.tags[i] == EdgeTag::Axis && d.tags[(i + n - 1) % n] != EdgeTag::Axis)
        .count();
    if runs > 1 {
        out.push("Axis edges not contiguous".into());
    }
    if d.kind == DomainKind::Axisymmetric && d.vertices.iter().any(|p| p.x < zero) {
        out.push("axisymmetric vertex with r < 0".into());
    }
    out.dedup();
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> SloshError {
    SloshError::Parse { line, message: message.into() }
}

fn parse_num<T: Real>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse::<T>()
        .map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

/// Parses the line-oriented domain format (`domain`, `v`, `e` records).
pub fn parse_domain<T: Real, R: BufRead>(reader: R) -> Result<PlanarDomain<T>> {
    let mut header: Option<(String, DomainKind)> = None;
    let mut vertices = Vec::new();
    let mut edges: Vec<(usize, usize, EdgeTag, usize)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        match toks.next() {
            Some("domain") => {
                let name = toks.next().ok_or_else(|| parse_err(lineno, "missing domain name"))?;
                let kind = toks
                    .next()
                    .ok_or_else(|| parse_err(lineno, "missing domain kind"))?
                    .parse::<DomainKind>()
                    .map_err(|e| parse_err(lineno, e))?;
                header = Some((name.to_string(), kind));
            }
            Some("v") => {
                let x = parse_num(toks.next(), lineno, "x")?;
                let z = parse_num(toks.next(), lineno, "z")?;
                vertices.push(Point2::new(x, z));
            }
            Some("e") => {
                let i: usize = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(lineno, "bad edge start index"))?;
                let j: usize = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(lineno, "bad edge end index"))?;
                let tag = toks
                    .next()
                    .ok_or_else(|| parse_err(lineno, "missing edge tag"))?
                    .parse::<EdgeTag>()
                    .map_err(|e| parse_err(lineno, e))?;
                edges.push((i, j, tag, lineno));
            }
            Some(other) => return Err(parse_err(lineno, format!("unknown record `{other}`"))),
            None => {}
        }
        if toks.next().is_some() {
            return Err(parse_err(lineno, "trailing tokens"));
        }
    }
    let (name, kind) = header.ok_or_else(|| parse_err(0, "missing `domain` header"))?;
    let n = vertices.len();
    let mut tags: Vec<Option<EdgeTag>> = vec![None; n];
    for &(i, j, tag, lineno) in &edges {
        if i >= n || j >= n {
            return Err(parse_err(lineno, format!("edge ({i}, {j}) references missing vertex")));
        }
        if j != (i + 1) % n {
            return Err(parse_err(lineno, format!("edge ({i}, {j}) does not join consecutive vertices")));
        }
        tags[i] = Some(tag);
    }
    let tags = tags
        .into_iter()
        .enumerate()
        .map(|(i, t)| t.ok_or_else(|| parse_err(0, format!("edge {i} -> {} missing", (i + 1) % n.max(1)))))
        .collect::<Result<Vec<_>>>()?;
    Ok(PlanarDomain { name, kind, vertices, tags })
}

pub fn read_domain<T: Real>(path: impl AsRef<Path>) -> Result<PlanarDomain<T>> {
    let f = std::fs::File::open(path)?;
    parse_domain(std::io::BufReader::new(f))
}

pub fn write_domain_to<T: Real, W: Write>(d: &PlanarDomain<T>, mut w: W) -> Result<()> {
    writeln!(w, "domain {} {}", d.name, d.kind)?;
    for p in &d.vertices {
        writeln!(w, "v {:.16e} {:.16e}", p.x, p.z)?;
    }
    let n = d.vertices.len();
    for (i, tag) in d.tags.iter().enumerate() {
        writeln!(w, "e {} {} {}", i, (i + 1) % n, tag)?;
    }
    Ok(())
}

pub fn write_domain<T: Real>(d: &PlanarDomain<T>, path: impl AsRef<Path>) -> Result<()> {
    let f = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(f);
    write_domain_to(d, &mut w)?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cylinder_corners() {
        let d = make_cylinder_profile(1.0).unwrap();
        let want = [(0.0, -1.0), (1.0, -1.0), (1.0, 0.0), (0.0, 0.0)];
        for (p, w) in d.vertices.iter().zip(want) {
            assert_eq!((p.x, p.z), w);
        }
        assert_eq!(d.tags[2], EdgeTag::F);
        assert!(validate_domain(&d).is_empty());
        assert!(make_cylinder_profile(0.0).is_err());
    }

    #[test]
    fn trough_shapes() {
        let d = make_trough_section(1.0, 1.0, 1.0).unwrap();
        assert!(validate_domain(&d).is_empty());
        let bottom_half_width = d.vertices.iter().map(|p| p.x).fold(0.0, f64::max);
        let depth = -d.vertices.iter().map(|p| p.z).fold(0.0, f64::min);
        assert_eq!(bottom_half_width, 2.0);
        assert_eq!(depth, 2.0);
        assert_eq!(d.free_surface_length(), 2.0);

        // No overhang: every vertex sits on the rectangle [-1,1] x [-y-d, 0].
        let r = make_trough_section(0.0f64, 0.7, 0.4).unwrap();
        assert!(validate_domain(&r).is_empty());
        assert!(r.vertices.iter().all(|p| p.x.abs() == 1.0));
        assert!((r.signed_area() - 2.0 * 1.1).abs() < 1e-12);

        assert!(validate_domain(&make_trough_section(10.0, 1.0, 1.0).unwrap()).is_empty());
        assert!(make_trough_section(1.0, 0.0, 1.0).is_err());
        assert!(make_trough_section(1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn trapezoid_shapes() {
        let d = make_trapezoid_section(1.5f64, 1.0, 1.0).unwrap();
        assert!(validate_domain(&d).is_empty());
        assert!((d.signed_area() - 2.5).abs() < 1e-12);
        let r = make_trapezoid_section(1.0f64, 1.0, 1.0).unwrap();
        assert!(r.vertices.iter().all(|p| p.x.abs() == 1.0));
        assert!(make_trapezoid_section(0.0, 1.0, 1.0).is_err());
    }

    fn interior_angle_deg(prev: Point2<f64>, at: Point2<f64>, next: Point2<f64>) -> f64 {
        let (ux, uz) = (prev.x - at.x, prev.z - at.z);
        let (vx, vz) = (next.x - at.x, next.z - at.z);
        ((ux * vx + uz * vz) / (ux.hypot(uz) * vx.hypot(vz))).acos().to_degrees()
    }

    #[test]
    fn silo_shapes() {
        let d = make_silo_profile(1.0f64, 1.0, 16).unwrap();
        assert!(validate_domain(&d).is_empty());
        let non_axis = d.tags.iter().filter(|&&t| t != EdgeTag::Axis).count();
        assert_eq!(non_axis, 19);
        let f_half_width = d
            .edges()
            .filter(|e| e.2 == EdgeTag::F)
            .map(|(a, b, _)| a.x.max(b.x))
            .fold(0.0, f64::max);
        let max_r = d.vertices.iter().map(|p| p.x).fold(0.0, f64::max);
        assert!(f_half_width < max_r);
        assert!(make_silo_profile(1.0, 1.0, 2).is_err());

        let d = make_silo_profile(1.0, 0.5, 32).unwrap();
        assert!(validate_domain(&d).is_empty());
        // Contact vertex is the start of the F edge; its predecessor is the last cap point.
        let fi = d.tags.iter().position(|&t| t == EdgeTag::F).unwrap();
        let angle = interior_angle_deg(d.vertices[fi - 1], d.vertices[fi], d.vertices[fi + 1]);
        assert!(angle > 90.0, "B-F angle {angle}");
        assert!((angle - (180.0 - 45.0 / 32.0)).abs() < 1e-9);
    }

    #[test]
    fn icefishing_shapes() {
        let d = make_icefishing_profile(1.0, 10.0, 10.0).unwrap();
        assert!(validate_domain(&d).is_empty());
        assert_eq!(d.free_surface_length(), 1.0);
        assert!(make_icefishing_profile(1.0, 1.0, 10.0).is_err());
        assert!(make_icefishing_profile(1.0, 20.0, 20.0).is_ok());
    }

    #[test]
    fn violations_are_reported() {
        let mut d = make_cylinder_profile(1.0).unwrap();
        d.vertices[2].z = 0.1;
        assert!(validate_domain(&d).contains(&"F edge off z=0".to_string()));

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
        assert_eq!(validate_domain(&bowtie), vec!["polygon not simple".to_string()]);

        let mut cw = make_trapezoid_section(1.5, 1.0, 1.0).unwrap();
        cw.vertices.reverse();
        cw.tags = vec![EdgeTag::F, EdgeTag::B, EdgeTag::B, EdgeTag::B];
        assert!(validate_domain(&cw).contains(&"polygon not counterclockwise".to_string()));

        let mut planar_axis = make_trapezoid_section(1.5, 1.0, 1.0).unwrap();
        planar_axis.tags[3] = EdgeTag::Axis;
        assert!(!validate_domain(&planar_axis).is_empty());
    }

    #[test]
    fn domain_file_round_trip() {
        let d = make_silo_profile(1.0, 0.5, 8).unwrap();
        let mut buf = Vec::new();
        write_domain_to(&d, &mut buf).unwrap();
        let back: PlanarDomain<f64> = parse_domain(&buf[..]).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn domain_file_errors() {
        let text = "domain sq planar\nv 0 -1\nv 1 -1\nv 1 0\nv 0 0\ne 0 1 B\ne 1 2 B\ne 2 3 F\ne 3 9 B\n";
        match parse_domain::<f64, _>(text.as_bytes()) {
            Err(SloshError::Parse { line, .. }) => assert_eq!(line, 9),
            other => panic!("expected parse error, got {other:?}"),
        }
        let text = "# comment\ndomain sq planar\nv 0 -1 # bottom left\nv 1 -1\nv 1 0\nv 0 0\ne 0 1 B\ne 1 2 B\ne 2 3 F\ne 3 0 B\n";
        let d: PlanarDomain<f64> = parse_domain(text.as_bytes()).unwrap();
        assert!(validate_domain(&d).is_empty());
    }

    #[test]
    fn symmetric_constructors_are_mirror_invariant() {
        for d in [
            make_trough_section(0.1, 1.0, 1.0).unwrap(),
            make_trough_section(10.0, 1.0, 1.0).unwrap(),
            make_trapezoid_section(1.0, 1.5, 1.0).unwrap(),
        ] {
            for p in &d.vertices {
                assert!(d.vertices.iter().any(|q| q.x == -p.x && q.z == p.z));
            }
            assert!(d.signed_area() > 0.0);
        }
    }

    #[test]
    fn works_in_single_precision() {
        let d = make_trough_section(1.0f32, 1.0, 1.0).unwrap();
        assert!(validate_domain(&d).is_empty());
        assert_eq!(d.signed_area(), 7.0);
    }
}
