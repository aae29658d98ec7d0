//! Constrained Delaunay refinement of a simple polygon.
//!
//! Works in `f64` regardless of the caller's scalar type. Points are
//! inserted with Lawson flips; polygon edges are recovered by midpoint
//! splitting and then kept as constrained subsegments. Refinement follows
//! Ruppert: encroached or oversized subsegments are split first, then
//! skinny or oversized triangles get their circumcentre inserted.
//! Subsegments at input corners sharper than 60° are split on concentric
//! power-of-two shells, and skinny triangles wedged into such a corner are
//! left alone, which keeps refinement finite for small input angles.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Result, SloshError};

const NONE: usize = usize::MAX;

/// Input corners below this angle get shell splitting.
const ACUTE: f64 = std::f64::consts::FRAC_PI_3;

pub(crate) type P = [f64; 2];

fn orient(a: P, b: P, c: P) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn incircle(a: P, b: P, c: P, d: P) -> f64 {
    let (adx, ady) = (a[0] - d[0], a[1] - d[1]);
    let (bdx, bdy) = (b[0] - d[0], b[1] - d[1]);
    let (cdx, cdy) = (c[0] - d[0], c[1] - d[1]);
    let ad = adx * adx + ady * ady;
    let bd = bdx * bdx + bdy * bdy;
    let cd = cdx * cdx + cdy * cdy;
    adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx)
}

fn dist(a: P, b: P) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn circumcenter(a: P, b: P, c: P) -> P {
    let (bx, by) = (b[0] - a[0], b[1] - a[1]);
    let (cx, cy) = (c[0] - a[0], c[1] - a[1]);
    let d = 2.0 * (bx * cy - by * cx);
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    [a[0] + (cy * b2 - by * c2) / d, a[1] + (bx * c2 - cx * b2) / d]
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Target edge length as a function of position.
pub(crate) trait SizeAt {
    fn size_at(&self, p: P) -> f64;
}

pub(crate) struct RefineParams<'a> {
    /// Triangles with a smaller angle (radians) are split.
    pub min_angle: f64,
    pub size: &'a dyn SizeAt,
    pub max_points: usize,
}

pub(crate) struct Triangulation {
    pub points: Vec<P>,
    pub cells: Vec<[usize; 3]>,
    /// Boundary edges oriented with the domain on the left, with the index
    /// of the polygon edge they came from.
    pub boundary: Vec<(usize, usize, usize)>,
}

enum Located {
    Inside(usize),
    Blocked(usize, usize),
}

struct Cdt {
    pts: Vec<P>,
    tris: Vec<[usize; 3]>,
    nbr: Vec<[usize; 3]>,
    vtri: Vec<usize>,
    segs: BTreeMap<(usize, usize), usize>,
    /// Scale for relative geometric tolerances.
    scale: f64,
    bad_queue: VecDeque<(usize, [usize; 3])>,
    seg_queue: VecDeque<(usize, usize)>,
    refining: bool,
    /// Polygon edge a split point lies on (`NONE` for input vertices).
    on_seg: Vec<usize>,
    /// Acute input vertex shared by polygon edges `s` and `s + 1`, per `s`.
    corner_after: Vec<Option<usize>>,
    acute: Vec<bool>,
}

impl Cdt {
    fn tri_pts(&self, t: usize) -> [P; 3] {
        let [a, b, c] = self.tris[t];
        [self.pts[a], self.pts[b], self.pts[c]]
    }

    fn write_tri(&mut self, t: usize, v: [usize; 3], n: [usize; 3]) {
        if t == self.tris.len() {
            self.tris.push(v);
            self.nbr.push(n);
        } else {
            self.tris[t] = v;
            self.nbr[t] = n;
        }
        for &x in &v {
            self.vtri[x] = t;
        }
    }

    fn replace_nbr(&mut self, t: usize, old: usize, new: usize) {
        if t == NONE {
            return;
        }
        for k in 0..3 {
            if self.nbr[t][k] == old {
                self.nbr[t][k] = new;
                return;
            }
        }
    }

    fn is_constrained(&self, a: usize, b: usize) -> bool {
        self.segs.contains_key(&key(a, b))
    }

    fn add_point(&mut self, p: P) -> usize {
        self.pts.push(p);
        self.vtri.push(NONE);
        self.on_seg.push(NONE);
        self.acute.push(false);
        self.pts.len() - 1
    }

    /// Walks along the straight line from the centroid of `start` to `q`.
    fn locate(&self, start: usize, q: P) -> Located {
        let s = {
            let [a, b, c] = self.tri_pts(start);
            [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
        };
        let mut t = start;
        let mut prev = NONE;
        for _ in 0..(4 * self.tris.len() + 16) {
            let v = self.tris[t];
            let p = self.tri_pts(t);
            let mut next = None;
            let mut fallback = None;
            for i in 0..3 {
                let (a, b) = (p[(i + 1) % 3], p[(i + 2) % 3]);
                if self.nbr[t][i] == prev && prev != NONE {
                    continue;
                }
                if orient(a, b, q) < 0.0 {
                    let o1 = orient(s, q, a);
                    let o2 = orient(s, q, b);
                    if o1 * o2 <= 0.0 {
                        next = Some(i);
                        break;
                    }
                    fallback.get_or_insert(i);
                }
            }
            let Some(i) = next.or(fallback) else {
                return Located::Inside(t);
            };
            let n = self.nbr[t][i];
            if n == NONE || self.is_constrained(v[(i + 1) % 3], v[(i + 2) % 3]) && self.refining {
                return Located::Blocked(t, i);
            }
            prev = t;
            t = n;
        }
        // Degenerate walk; fall back to exhaustive search.
        for t in 0..self.tris.len() {
            let p = self.tri_pts(t);
            if (0..3).all(|i| orient(p[(i + 1) % 3], p[(i + 2) % 3], q) >= 0.0) {
                return Located::Inside(t);
            }
        }
        Located::Blocked(start, 0)
    }

    /// Restores the (constrained) Delaunay property across the edge of `t`
    /// opposite its vertex 0, which is the newly inserted point.
    fn legalize(&mut self, t: usize) {
        let mut stack = vec![t];
        while let Some(t) = stack.pop() {
            let [v, b, c] = self.tris[t];
            let u = self.nbr[t][0];
            if u == NONE || self.is_constrained(b, c) {
                continue;
            }
            let j = (0..3).find(|&k| self.nbr[u][k] == t).expect("mutual neighbours");
            let d = self.tris[u][j];
            if incircle(self.pts[v], self.pts[b], self.pts[c], self.pts[d]) <= 0.0 {
                continue;
            }
            // u = [d, c, b] up to rotation.
            let x = self.nbr[u][(j + 1) % 3]; // across (b, d)
            let y = self.nbr[u][(j + 2) % 3]; // across (d, c)
            debug_assert_eq!(self.tris[u][(j + 1) % 3], c);
            let p = self.nbr[t][1]; // across (c, v)
            let q = self.nbr[t][2]; // across (v, b)
            self.write_tri(t, [v, b, d], [x, u, q]);
            self.write_tri(u, [v, d, c], [y, p, t]);
            self.replace_nbr(x, u, t);
            self.replace_nbr(p, t, u);
            stack.push(t);
            stack.push(u);
        }
    }

    fn after_insert(&mut self, v: usize) {
        if !self.refining {
            return;
        }
        for t in self.triangles_around(v) {
            self.bad_queue.push_back((t, self.tris[t]));
            let k = (0..3).find(|&k| self.tris[t][k] == v).unwrap();
            let (a, b) = (self.tris[t][(k + 1) % 3], self.tris[t][(k + 2) % 3]);
            for (p, q) in [(a, b), (v, a), (b, v)] {
                if self.is_constrained(p, q) {
                    self.seg_queue.push_back((p, q));
                }
            }
        }
    }

    fn insert_in_tri(&mut self, t: usize, v: usize) {
        let [a, b, c] = self.tris[t];
        let [na, nb, nc] = self.nbr[t];
        let t2 = self.tris.len();
        let t3 = t2 + 1;
        self.write_tri(t, [v, b, c], [na, t2, t3]);
        self.write_tri(t2, [v, c, a], [nb, t3, t]);
        self.write_tri(t3, [v, a, b], [nc, t, t2]);
        self.replace_nbr(nb, t, t2);
        self.replace_nbr(nc, t, t3);
        self.legalize(t);
        self.legalize(t2);
        self.legalize(t3);
        self.after_insert(v);
    }

    /// Inserts `v` on the edge of `t` opposite local vertex `i`.
    fn insert_on_edge(&mut self, t: usize, i: usize, v: usize) {
        let a = self.tris[t][i];
        let b = self.tris[t][(i + 1) % 3];
        let c = self.tris[t][(i + 2) % 3];
        let nb = self.nbr[t][(i + 1) % 3]; // across (c, a)
        let nc = self.nbr[t][(i + 2) % 3]; // across (a, b)
        let u = self.nbr[t][i];
        if let Some(seg) = self.segs.remove(&key(b, c)) {
            self.segs.insert(key(b, v), seg);
            self.segs.insert(key(v, c), seg);
        }
        let tb = self.tris.len();
        if u == NONE {
            self.write_tri(t, [v, c, a], [nb, tb, NONE]);
            self.write_tri(tb, [v, a, b], [nc, NONE, t]);
            self.replace_nbr(nc, t, tb);
            self.legalize(t);
            self.legalize(tb);
        } else {
            let j = (0..3).find(|&k| self.nbr[u][k] == t).expect("mutual neighbours");
            let d = self.tris[u][j];
            let uc = self.nbr[u][(j + 1) % 3]; // across (b, d)
            let ub = self.nbr[u][(j + 2) % 3]; // across (d, c)
            let td = tb + 1;
            self.write_tri(t, [v, c, a], [nb, tb, td]);
            self.write_tri(tb, [v, a, b], [nc, u, t]);
            self.write_tri(u, [v, b, d], [uc, td, tb]);
            self.write_tri(td, [v, d, c], [ub, t, u]);
            self.replace_nbr(nc, t, tb);
            self.replace_nbr(ub, u, td);
            self.legalize(t);
            self.legalize(tb);
            self.legalize(u);
            self.legalize(td);
        }
        self.after_insert(v);
    }

    fn triangles_around(&self, v: usize) -> Vec<usize> {
        let t0 = self.vtri[v];
        if t0 == NONE {
            return Vec::new();
        }
        let mut out = vec![t0];
        // One direction: cross the edge (v, next).
        let mut t = t0;
        loop {
            let k = (0..3).find(|&k| self.tris[t][k] == v).unwrap();
            let n = self.nbr[t][(k + 2) % 3];
            if n == NONE {
                break;
            }
            if n == t0 {
                return out;
            }
            out.push(n);
            t = n;
        }
        let mut t = t0;
        loop {
            let k = (0..3).find(|&k| self.tris[t][k] == v).unwrap();
            let n = self.nbr[t][(k + 1) % 3];
            if n == NONE || n == t0 {
                break;
            }
            out.push(n);
            t = n;
        }
        out
    }

    /// Triangle and local index of the vertex opposite edge `(a, b)`.
    fn find_edge(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        for t in self.triangles_around(a) {
            let v = self.tris[t];
            for i in 0..3 {
                let (p, q) = (v[(i + 1) % 3], v[(i + 2) % 3]);
                if (p == a && q == b) || (p == b && q == a) {
                    return Some((t, i));
                }
            }
        }
        None
    }

    /// Inserts a free point; returns `false` if it coincides with a vertex.
    fn insert_point(&mut self, start: usize, q: P) -> std::result::Result<bool, (usize, usize)> {
        let t = match self.locate(start, q) {
            Located::Inside(t) => t,
            Located::Blocked(t, i) => {
                let v = self.tris[t];
                return Err((v[(i + 1) % 3], v[(i + 2) % 3]));
            }
        };
        let p = self.tri_pts(t);
        let v = self.tris[t];
        let eps = 1e-12 * self.scale;
        if p.iter().any(|&x| dist(x, q) <= eps) {
            return Ok(false);
        }
        // Near an edge: insert on it, or report the constrained edge.
        for i in 0..3 {
            let (a, b) = (p[(i + 1) % 3], p[(i + 2) % 3]);
            let len = dist(a, b);
            if orient(a, b, q).abs() <= 1e-10 * len * len {
                if self.refining && self.is_constrained(v[(i + 1) % 3], v[(i + 2) % 3]) {
                    return Err((v[(i + 1) % 3], v[(i + 2) % 3]));
                }
                let nv = self.add_point(q);
                self.insert_on_edge(t, i, nv);
                return Ok(true);
            }
        }
        let nv = self.add_point(q);
        self.insert_in_tri(t, nv);
        Ok(true)
    }

    fn split_segment(&mut self, a: usize, b: usize) {
        let Some((t, i)) = self.find_edge(a, b) else {
            return;
        };
        let seg = self.segs.get(&key(a, b)).copied().unwrap_or(NONE);
        let (pa, pb) = (self.pts[a], self.pts[b]);
        let frac = if self.acute[a] && !self.acute[b] {
            shell_fraction(dist(pa, pb))
        } else if self.acute[b] && !self.acute[a] {
            1.0 - shell_fraction(dist(pa, pb))
        } else {
            0.5
        };
        let m = [pa[0] + frac * (pb[0] - pa[0]), pa[1] + frac * (pb[1] - pa[1])];
        let v = self.add_point(m);
        self.on_seg[v] = seg;
        self.insert_on_edge(t, i, v);
    }

    /// True if `p` and `q` sit on the two edges of one acute input corner.
    fn spans_acute_corner(&self, p: usize, q: usize) -> bool {
        let (s, r) = (self.on_seg[p], self.on_seg[q]);
        if s == NONE || r == NONE || s == r {
            return false;
        }
        let n = self.corner_after.len();
        let adjacent = |x: usize, y: usize| (x + 1) % n == y && self.corner_after[x].is_some();
        adjacent(s, r) || adjacent(r, s)
    }

    fn segment_needs_split(&self, a: usize, b: usize, size: &dyn SizeAt) -> bool {
        let Some((t, i)) = self.find_edge(a, b) else {
            return false;
        };
        let (pa, pb) = (self.pts[a], self.pts[b]);
        let len = dist(pa, pb);
        let mid = [(pa[0] + pb[0]) * 0.5, (pa[1] + pb[1]) * 0.5];
        if len > size.size_at(mid) {
            return true;
        }
        let apex = self.pts[self.tris[t][i]];
        encroaches(pa, pb, apex)
    }
}

/// Split position, as a fraction of `len` measured from the corner, that
/// lands on the power of two nearest `len / 2`.
fn shell_fraction(len: f64) -> f64 {
    let half = 0.5 * len;
    let shell = 2f64.powf(half.log2().round());
    shell / len
}

/// True if `p` lies strictly inside the diametral circle of `(a, b)`.
fn encroaches(a: P, b: P, p: P) -> bool {
    let dot = (a[0] - p[0]) * (b[0] - p[0]) + (a[1] - p[1]) * (b[1] - p[1]);
    let len2 = (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2);
    dot < -1e-10 * len2
}

/// Triangulates the counterclockwise simple polygon `poly` and refines it.
pub(crate) fn refine_polygon(poly: &[P], params: &RefineParams<'_>) -> Result<Triangulation> {
    let n = poly.len();
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in poly {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let c = [(lo[0] + hi[0]) * 0.5, (lo[1] + hi[1]) * 0.5];
    let big = 50.0 * span;
    let mut cdt = Cdt {
        pts: vec![[c[0] - big, c[1] - big], [c[0] + big, c[1] - big], [c[0], c[1] + big]],
        tris: Vec::new(),
        nbr: Vec::new(),
        vtri: vec![NONE; 3],
        segs: BTreeMap::new(),
        scale: span,
        bad_queue: VecDeque::new(),
        seg_queue: VecDeque::new(),
        refining: false,
        on_seg: vec![NONE; 3],
        corner_after: vec![None; n],
        acute: vec![false; 3],
    };
    cdt.write_tri(0, [0, 1, 2], [NONE; 3]);

    let mut ids = Vec::with_capacity(n);
    for p in poly {
        let start = cdt.tris.len() - 1;
        let before = cdt.pts.len();
        match cdt.insert_point(start, *p) {
            Ok(true) => ids.push(before),
            _ => return Err(SloshError::Meshing("duplicate polygon vertex".into())),
        }
    }
    for i in 0..n {
        let (prev, cur, next) = (poly[(i + n - 1) % n], poly[i], poly[(i + 1) % n]);
        let u = [prev[0] - cur[0], prev[1] - cur[1]];
        let w = [next[0] - cur[0], next[1] - cur[1]];
        // Interior angle of a counterclockwise polygon at `cur`.
        let ang = (w[0] * u[1] - w[1] * u[0]).atan2(u[0] * w[0] + u[1] * w[1]);
        let ang = if ang < 0.0 { ang + 2.0 * std::f64::consts::PI } else { ang };
        if ang < ACUTE {
            cdt.acute[ids[i]] = true;
            cdt.corner_after[(i + n - 1) % n] = Some(ids[i]);
        }
    }

    // Recover polygon edges by midpoint splitting until each piece is an edge.
    let mut pending: VecDeque<(usize, usize, usize)> =
        (0..n).map(|i| (ids[i], ids[(i + 1) % n], i)).collect();
    let mut guard = 0usize;
    while let Some((a, b, seg)) = pending.pop_front() {
        guard += 1;
        if guard > params.max_points {
            return Err(SloshError::Meshing("boundary recovery did not terminate".into()));
        }
        if cdt.find_edge(a, b).is_some() {
            cdt.segs.insert(key(a, b), seg);
            continue;
        }
        let m = [(cdt.pts[a][0] + cdt.pts[b][0]) * 0.5, (cdt.pts[a][1] + cdt.pts[b][1]) * 0.5];
        let before = cdt.pts.len();
        match cdt.insert_point(cdt.vtri[a], m) {
            Ok(true) => {
                cdt.on_seg[before] = seg;
                pending.push_back((a, before, seg));
                pending.push_back((before, b, seg));
            }
            _ => return Err(SloshError::Meshing("boundary recovery hit a degenerate point".into())),
        }
    }

    carve(&mut cdt);
    if cdt.tris.is_empty() {
        return Err(SloshError::Meshing("no triangles inside the polygon".into()));
    }

    cdt.refining = true;
    let seg_list: Vec<(usize, usize)> = cdt.segs.keys().copied().collect();
    cdt.seg_queue.extend(seg_list);
    cdt.bad_queue.extend((0..cdt.tris.len()).map(|t| (t, cdt.tris[t])));
    let sin_min = params.min_angle.sin();
    let radius_edge_max = 1.0 / (2.0 * sin_min);

    loop {
        if cdt.pts.len() > params.max_points {
            return Err(SloshError::Meshing(format!(
                "refinement exceeded {} points",
                params.max_points
            )));
        }
        if let Some((a, b)) = cdt.seg_queue.pop_front() {
            if cdt.is_constrained(a, b) && cdt.segment_needs_split(a, b, params.size) {
                cdt.split_segment(a, b);
            }
            continue;
        }
        let Some((t, verts)) = cdt.bad_queue.pop_front() else {
            break;
        };
        if cdt.tris[t] != verts {
            continue;
        }
        let [pa, pb, pc] = cdt.tri_pts(t);
        let (la, lb, lc) = (dist(pb, pc), dist(pc, pa), dist(pa, pb));
        let lmin = la.min(lb).min(lc);
        let lmax = la.max(lb).max(lc);
        let area2 = orient(pa, pb, pc);
        let circ_r = la * lb * lc / (2.0 * area2);
        let centroid = [(pa[0] + pb[0] + pc[0]) / 3.0, (pa[1] + pb[1] + pc[1]) / 3.0];
        let skinny = circ_r / lmin > radius_edge_max;
        let large = lmax > params.size.size_at(centroid);
        if !(skinny || large) {
            continue;
        }
        if !large {
            let v = cdt.tris[t];
            let k = if lmin == la { 0 } else if lmin == lb { 1 } else { 2 };
            if cdt.spans_acute_corner(v[(k + 1) % 3], v[(k + 2) % 3]) {
                continue;
            }
        }
        let cc = circumcenter(pa, pb, pc);
        // Subsegments whose diametral circle would contain the circumcentre.
        let encroached: Vec<(usize, usize)> = cavity_segments(&cdt, t, cc)
            .into_iter()
            .filter(|&(a, b)| encroaches(cdt.pts[a], cdt.pts[b], cc))
            .collect();
        if !encroached.is_empty() {
            for (a, b) in encroached {
                cdt.split_segment(a, b);
            }
            cdt.bad_queue.push_back((t, verts));
            continue;
        }
        match cdt.insert_point(t, cc) {
            Ok(_) => {}
            Err((a, b)) => {
                cdt.split_segment(a, b);
                cdt.bad_queue.push_back((t, verts));
            }
        }
    }

    extract(&cdt)
}

/// Constrained edges on the boundary of the Bowyer–Watson cavity of `p`.
fn cavity_segments(cdt: &Cdt, start: usize, p: P) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut seen = vec![start];
    let mut stack = vec![start];
    while let Some(t) = stack.pop() {
        let v = cdt.tris[t];
        for i in 0..3 {
            let (a, b) = (v[(i + 1) % 3], v[(i + 2) % 3]);
            if cdt.is_constrained(a, b) {
                out.push((a, b));
                continue;
            }
            let n = cdt.nbr[t][i];
            if n == NONE || seen.contains(&n) {
                continue;
            }
            let [x, y, z] = cdt.tri_pts(n);
            if incircle(x, y, z, p) > 0.0 {
                seen.push(n);
                stack.push(n);
            }
        }
    }
    out
}

/// Removes triangles outside the polygon, i.e. those reachable from the
/// bounding triangle without crossing a constrained edge.
fn carve(cdt: &mut Cdt) {
    let nt = cdt.tris.len();
    let mut outside = vec![false; nt];
    let mut stack: Vec<usize> = (0..nt).filter(|&t| cdt.tris[t].iter().any(|&v| v < 3)).collect();
    for &t in &stack {
        outside[t] = true;
    }
    while let Some(t) = stack.pop() {
        let v = cdt.tris[t];
        for i in 0..3 {
            let n = cdt.nbr[t][i];
            if n == NONE || outside[n] || cdt.is_constrained(v[(i + 1) % 3], v[(i + 2) % 3]) {
                continue;
            }
            outside[n] = true;
            stack.push(n);
        }
    }
    let mut remap = vec![NONE; nt];
    let mut count = 0;
    for t in 0..nt {
        if !outside[t] {
            remap[t] = count;
            count += 1;
        }
    }
    let mut tris = Vec::with_capacity(count);
    let mut nbr = Vec::with_capacity(count);
    for t in 0..nt {
        if outside[t] {
            continue;
        }
        tris.push(cdt.tris[t]);
        nbr.push(cdt.nbr[t].map(|n| if n == NONE { NONE } else { remap[n] }));
    }
    cdt.tris = tris;
    cdt.nbr = nbr;
    cdt.vtri = vec![NONE; cdt.pts.len()];
    for (t, v) in cdt.tris.iter().enumerate() {
        for &x in v {
            cdt.vtri[x] = t;
        }
    }
}

fn extract(cdt: &Cdt) -> Result<Triangulation> {
    let mut remap = vec![NONE; cdt.pts.len()];
    let mut points = Vec::new();
    for v in 3..cdt.pts.len() {
        if cdt.vtri[v] != NONE {
            remap[v] = points.len();
            points.push(cdt.pts[v]);
        }
    }
    let cells: Vec<[usize; 3]> = cdt.tris.iter().map(|t| t.map(|v| remap[v])).collect();
    let mut boundary = Vec::new();
    for (t, v) in cdt.tris.iter().enumerate() {
        for i in 0..3 {
            let (a, b) = (v[(i + 1) % 3], v[(i + 2) % 3]);
            if cdt.nbr[t][i] == NONE {
                let seg = *cdt.segs.get(&key(a, b)).ok_or_else(|| {
                    SloshError::Meshing("hull edge is not a polygon edge".into())
                })?;
                boundary.push((remap[a], remap[b], seg));
            }
        }
    }
    boundary.sort_by_key(|&(a, b, s)| (s, a, b));
    Ok(Triangulation { points, cells, boundary })
}
