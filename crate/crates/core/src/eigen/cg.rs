//! Jacobi-preconditioned conjugate gradients.

use crate::error::{Result, SloshError};
use crate::scalar::{axpy, dot, norm, Real};
use crate::sparse::SparseSym;

pub const DEFAULT_CG_TOL: f64 = 1e-10;

/// Default iteration cap, `20 n`.
pub fn default_max_iter(n: usize) -> usize {
    (20 * n).max(20)
}

/// Solves `A x = b` for SPD `A` to relative residual `tol`.
pub fn solve_interior<T: Real>(a: &SparseSym<T>, rhs: &[T], tol: T) -> Result<Vec<T>> {
    pcg(a, rhs, tol, default_max_iter(a.dim()), None::<fn(&mut [T])>)
}

pub fn solve_interior_with<T: Real>(a: &SparseSym<T>, rhs: &[T], tol: T, max_iter: usize) -> Result<Vec<T>> {
    pcg(a, rhs, tol, max_iter, None::<fn(&mut [T])>)
}

/// Preconditioned CG. `project`, when given, is applied to every residual;
/// it lets the same loop solve consistent singular systems whose range is
/// the image of the projection.
pub(crate) fn pcg<T: Real, P: Fn(&mut [T])>(
    a: &SparseSym<T>,
    rhs: &[T],
    tol: T,
    max_iter: usize,
    project: Option<P>,
) -> Result<Vec<T>> {
    let n = a.dim();
    assert_eq!(rhs.len(), n, "right-hand side length");
    let mut x = vec![T::zero(); n];
    if n == 0 {
        return Ok(x);
    }
    let mut r = rhs.to_vec();
    if let Some(p) = &project {
        p(&mut r);
    }
    let bnorm = norm(&r);
    if bnorm == T::zero() {
        return Ok(x);
    }
    let inv_diag: Vec<T> = a
        .diag()
        .into_iter()
        .map(|d| if d > T::zero() { d.recip() } else { T::one() })
        .collect();
    let mut z: Vec<T> = r.iter().zip(&inv_diag).map(|(&ri, &di)| ri * di).collect();
    let mut p = z.clone();
    let mut ap = vec![T::zero(); n];
    let mut rz = dot(&r, &z);
    let mut rel = T::one();
    for _ in 0..max_iter {
        a.mul_vec_into(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= T::zero() {
            break;
        }
        let alpha = rz / pap;
        axpy(alpha, &p, &mut x);
        axpy(-alpha, &ap, &mut r);
        if let Some(pr) = &project {
            pr(&mut r);
        }
        rel = norm(&r) / bnorm;
        if rel <= tol {
            return Ok(x);
        }
        for ((zi, &ri), &di) in z.iter_mut().zip(&r).zip(&inv_diag) {
            *zi = ri * di;
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for (pi, &zi) in p.iter_mut().zip(&z) {
            *pi = zi + beta * *pi;
        }
    }
    Err(SloshError::Convergence { iterations: max_iter, residual: rel.to_f64_lossy() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::TripletBuilder;
    use rand::{Rng, SeedableRng};

    /// Gaussian elimination with partial pivoting.
    fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for k in 0..n {
            let piv = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
            a.swap(k, piv);
            b.swap(k, piv);
            for i in k + 1..n {
                let f = a[i][k] / a[k][k];
                for j in k..n {
                    a[i][j] -= f * a[k][j];
                }
                b[i] -= f * b[k];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
            x[i] = (b[i] - s) / a[i][i];
        }
        x
    }

    #[test]
    fn identity_system() {
        let mut b = TripletBuilder::new(3);
        for i in 0..3 {
            b.add(i, i, 1.0);
        }
        let x = solve_interior(&b.build(), &[1.0, 0.0, 0.0], 1e-10).unwrap();
        assert_eq!(x, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn empty_system() {
        let a = TripletBuilder::<f64>::new(0).build();
        assert!(solve_interior(&a, &[], 1e-10).unwrap().is_empty());
    }

    #[test]
    fn random_spd_matches_elimination() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = 10;
            let g: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
            let mut a = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    a[i][j] = (0..n).map(|k| g[k][i] * g[k][j]).sum::<f64>();
                }
                a[i][i] += 0.5;
            }
            let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut tb = TripletBuilder::new(n);
            for i in 0..n {
                for j in 0..n {
                    tb.add(i, j, a[i][j]);
                }
            }
            let x = solve_interior(&tb.build(), &rhs, 1e-12).unwrap();
            let want = dense_solve(a, rhs);
            for (u, v) in x.iter().zip(&want) {
                assert!((u - v).abs() < 1e-8, "{u} vs {v}");
            }
        }
    }

    #[test]
    fn iteration_cap_reports_residual() {
        let mut tb = TripletBuilder::new(50);
        for i in 0..50 {
            tb.add(i, i, 2.0);
            if i + 1 < 50 {
                tb.add(i, i + 1, -1.0);
                tb.add(i + 1, i, -1.0);
            }
        }
        let err = solve_interior_with(&tb.build(), &vec![1.0; 50], 1e-14, 3).unwrap_err();
        match err {
            SloshError::Convergence { iterations, residual } => {
                assert_eq!(iterations, 3);
                assert!(residual > 1e-14);
            }
            e => panic!("unexpected {e}"),
        }
    }
}
