//! Reduction of the sloshing pencil to the free surface.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Result, SloshError};
use crate::scalar::Real;
use crate::sparse::SparseSym;

use super::cg::{default_max_iter, pcg};
use super::dense::{dense_gen_eig, DenseMatrix};
use super::{pencil_residual, EigPair, EigenOptions};

/// Dirichlet-to-Neumann form `T = S_FF - S_FI S_II⁻¹ S_IF` and free-surface
/// mass `Bf`, both indexed by `fdofs`.
#[derive(Clone, Debug)]
pub struct DtnReduced<T> {
    pub fdofs: Vec<usize>,
    pub t: DenseMatrix<T>,
    pub bf: DenseMatrix<T>,
}

impl<T: Real> DtnReduced<T> {
    pub fn dim(&self) -> usize {
        self.fdofs.len()
    }

    /// Writes `T` then `Bf` in the sparse coordinate format.
    pub fn write_coo<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# dtn")?;
        self.t.to_sparse().write_coo(&mut w)?;
        writeln!(w, "# surface mass")?;
        self.bf.to_sparse().write_coo(&mut w)
    }
}

struct Split {
    fdofs: Vec<usize>,
    idofs: Vec<usize>,
    /// Position of each node in `idofs`, or `usize::MAX`.
    ipos: Vec<usize>,
}

fn split<T: Real>(b: &SparseSym<T>) -> Split {
    let n = b.dim();
    let diag = b.diag();
    let (fdofs, idofs): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| diag[i] > T::zero());
    let mut ipos = vec![usize::MAX; n];
    for (k, &i) in idofs.iter().enumerate() {
        ipos[i] = k;
    }
    Split { fdofs, idofs, ipos }
}

fn interior_part<T: Real>(s: &SparseSym<T>, sp: &Split, node: usize) -> Vec<T> {
    let mut v = vec![T::zero(); sp.idofs.len()];
    for (j, a) in s.row(node) {
        if sp.ipos[j] != usize::MAX {
            v[sp.ipos[j]] = a;
        }
    }
    v
}

fn reduce<T: Real>(s: &SparseSym<T>, b: &SparseSym<T>, tol: T, sp: &Split) -> Result<DtnReduced<T>> {
    let nf = sp.fdofs.len();
    if nf < 2 {
        return Err(SloshError::Argument(format!("{nf} free-surface dofs, need at least 2")));
    }
    let s_ii = s.submatrix(&sp.idofs);
    let cap = default_max_iter(s_ii.dim());
    // Column j of S_II⁻¹ S_IF, solved independently and gathered in order.
    let cols: Vec<Vec<T>> = sp
        .fdofs
        .par_iter()
        .enumerate()
        .map(|(c, &f)| {
            let rhs = interior_part(s, sp, f);
            pcg(&s_ii, &rhs, tol, cap, None::<fn(&mut [T])>)
                .map_err(|e| SloshError::InteriorSolve { column: c, source: Box::new(e) })
        })
        .collect::<Result<_>>()?;
    let mut t = DenseMatrix::zeros(nf);
    for (i, &fi) in sp.fdofs.iter().enumerate() {
        let s_fi = interior_part(s, sp, fi);
        for (j, &fj) in sp.fdofs.iter().enumerate() {
            let corr: T = s_fi.iter().zip(&cols[j]).map(|(&a, &w)| a * w).sum();
            t[(i, j)] = s.get(fi, fj) - corr;
        }
    }
    t.symmetrize();
    let bf = DenseMatrix::from_fn(nf, |i, j| b.get(sp.fdofs[i], sp.fdofs[j]));
    Ok(DtnReduced { fdofs: sp.fdofs.clone(), t, bf })
}

/// Schur complement onto the free-surface dofs, the rows of `B` with a
/// positive diagonal.
pub fn reduce_to_surface<T: Real>(s: &SparseSym<T>, b: &SparseSym<T>, tol: T) -> Result<DtnReduced<T>> {
    if s.dim() != b.dim() {
        return Err(SloshError::Argument("stiffness and surface mass differ in size".into()));
    }
    reduce(s, b, tol, &split(b))
}

pub fn steklov_solve<T: Real>(s: &SparseSym<T>, b: &SparseSym<T>, k: usize, deflate: bool) -> Result<Vec<EigPair<T>>> {
    steklov_solve_with(s, b, k, deflate, &EigenOptions::default())
}

/// `k` smallest sloshing eigenpairs, B-orthonormal, extended harmonically
/// into the interior.
pub fn steklov_solve_with<T: Real>(
    s: &SparseSym<T>,
    b: &SparseSym<T>,
    k: usize,
    deflate: bool,
    opts: &EigenOptions,
) -> Result<Vec<EigPair<T>>> {
    if k == 0 {
        return Err(SloshError::Argument("k must be at least 1".into()));
    }
    if s.dim() != b.dim() {
        return Err(SloshError::Argument("stiffness and surface mass differ in size".into()));
    }
    let sp = split(b);
    let avail = sp.fdofs.len().saturating_sub(deflate as usize);
    if k > avail {
        return Err(SloshError::Argument(format!("requested {k} eigenpairs, {avail} free-surface modes available")));
    }
    let cg_tol = T::tol(opts.cg_tol);
    let red = reduce(s, b, cg_tol, &sp)?;
    let surface = dense_gen_eig(&red.t, &red.bf, deflate, k, T::tol(opts.jacobi_tol))?;

    let s_ii = s.submatrix(&sp.idofs);
    let cap = default_max_iter(s_ii.dim());
    let limit = T::tol(opts.residual_limit);
    surface
        .into_iter()
        .enumerate()
        .map(|(idx, pair)| {
            let n = s.dim();
            let mut x = vec![T::zero(); n];
            for (&f, &v) in sp.fdofs.iter().zip(&pair.vector) {
                x[f] = v;
            }
            // Interior rows: S_II x_I = -S_IF x_F.
            let mut rhs = vec![T::zero(); sp.idofs.len()];
            for (k, &i) in sp.idofs.iter().enumerate() {
                for (j, a) in s.row(i) {
                    if sp.ipos[j] == usize::MAX {
                        rhs[k] -= a * x[j];
                    }
                }
            }
            let xi = pcg(&s_ii, &rhs, cg_tol * T::lit(1e-2).max(T::epsilon()), cap, None::<fn(&mut [T])>)
                .or_else(|_| pcg(&s_ii, &rhs, cg_tol, cap, None::<fn(&mut [T])>))?;
            for (&i, &v) in sp.idofs.iter().zip(&xi) {
                x[i] = v;
            }
            let residual = pencil_residual(s, b, pair.value, &x);
            if !(residual <= limit) {
                return Err(SloshError::Residual {
                    index: idx,
                    residual: residual.to_f64_lossy(),
                    limit: limit.to_f64_lossy(),
                });
            }
            Ok(EigPair { value: pair.value, vector: x, residual })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::*;
    use crate::geometry::*;
    use crate::mesh::{triangulate, BoundaryEdge, TriMesh};

    fn strip(cols: usize) -> TriMesh<f64> {
        // One row of cells under the surface: every node lies on F or the bottom.
        let w = 2.0;
        let mut nodes = Vec::new();
        for z in [-0.2, 0.0] {
            for i in 0..=cols {
                nodes.push(Point2::new(w * i as f64 / cols as f64, z));
            }
        }
        let top = cols + 1;
        let mut cells = Vec::new();
        for i in 0..cols {
            cells.push([i, i + 1, top + i + 1]);
            cells.push([i, top + i + 1, top + i]);
        }
        let mut bedges = Vec::new();
        for i in 0..cols {
            bedges.push(BoundaryEdge { a: i, b: i + 1, tag: EdgeTag::B });
            bedges.push(BoundaryEdge { a: top + i + 1, b: top + i, tag: EdgeTag::F });
        }
        bedges.push(BoundaryEdge { a: cols, b: top + cols, tag: EdgeTag::B });
        bedges.push(BoundaryEdge { a: top, b: 0, tag: EdgeTag::B });
        TriMesh { kind: DomainKind::Planar, nodes, cells, bedges, h_max: 1.0 }
    }

    #[test]
    fn surface_only_mesh_needs_no_schur_term() {
        let m = strip(6);
        let s = assemble_stiffness_planar(&m).unwrap();
        // Pretend the bottom is also free: B supported everywhere, interior empty.
        let mut bb = crate::sparse::TripletBuilder::new(m.node_count());
        for i in 0..m.node_count() {
            bb.add(i, i, 1.0);
        }
        let red = reduce_to_surface(&s, &bb.build(), 1e-10).unwrap();
        assert_eq!(red.dim(), m.node_count());
        for i in 0..red.dim() {
            for j in 0..red.dim() {
                assert_eq!(red.t[(i, j)], s.get(i, j));
            }
        }
    }

    #[test]
    fn dtn_annihilates_constants() {
        let d = make_trough_section(1.0, 1.0, 1.0).unwrap();
        let m = triangulate(&d, 0.2).unwrap();
        let s = assemble_stiffness_planar(&m).unwrap();
        let b = assemble_surface_mass(&m, AzimuthalIndex(0)).unwrap();
        let red = reduce_to_surface(&s, &b, 1e-10).unwrap();
        assert_eq!(red.dim(), m.tagged_nodes(EdgeTag::F).len());
        assert!(red.t.asymmetry() < 1e-10);
        let t1 = red.t.mul_vec(&vec![1.0f64; red.dim()]);
        let scale = red.t.frobenius();
        assert!(t1.iter().all(|v| v.abs() < 1e-8 * scale));
        red.bf.cholesky().unwrap();
    }

    #[test]
    fn rectangle_fundamental_mode() {
        let d = make_trapezoid_section(1.0, 1.0, 1.0).unwrap();
        let m = triangulate(&d, 0.1).unwrap();
        let s = assemble_stiffness_planar(&m).unwrap();
        let b = assemble_surface_mass(&m, AzimuthalIndex(0)).unwrap();
        let pairs = steklov_solve(&s, &b, 3, true).unwrap();
        let exact = std::f64::consts::FRAC_PI_2 * std::f64::consts::FRAC_PI_2.tanh();
        assert!((pairs[0].value - exact).abs() / exact < 0.01, "{}", pairs[0].value);
        for (i, p) in pairs.iter().enumerate() {
            assert!(p.residual <= 1e-7);
            let ones = vec![1.0; m.node_count()];
            assert!(b.bilinear(&ones, &p.vector).abs() <= 1e-8 * crate::scalar::norm(&p.vector));
            let rq = s.bilinear(&p.vector, &p.vector) / b.bilinear(&p.vector, &p.vector);
            assert!((rq - p.value).abs() <= 1e-8 * p.value);
            for q in &pairs[i + 1..] {
                assert!(b.bilinear(&p.vector, &q.vector).abs() < 1e-8);
            }
        }
        assert!(pairs.windows(2).all(|w| w[0].value <= w[1].value));
    }

    #[test]
    fn too_many_modes_is_an_argument_error() {
        let m = strip(4);
        let s = assemble_stiffness_planar(&m).unwrap();
        let b = assemble_surface_mass(&m, AzimuthalIndex(0)).unwrap();
        assert!(matches!(steklov_solve(&s, &b, 5, true), Err(SloshError::Argument(_))));
        assert_eq!(steklov_solve(&s, &b, 4, true).unwrap().len(), 4);
    }
}
