//! Smallest nonzero eigenpairs of the Neumann pencil `S x = μ M x`.
//!
//! Block inverse iteration: each sweep applies the pseudo-inverse of `S`
//! (consistent singular CG with constants projected out) to `M V`, then a
//! Rayleigh–Ritz step on the block. Small systems go straight to the
//! dense solver.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Result, SloshError};
use crate::scalar::{dot, Real};
use crate::sparse::SparseSym;

use super::cg::{default_max_iter, pcg};
use super::dense::{dense_gen_eig, jacobi_eigen, DenseMatrix};
use super::{pencil_residual, EigPair, EigenOptions};

const DENSE_LIMIT: usize = 120;
const EXTRA: usize = 4;

pub fn neumann_solve<T: Real>(s: &SparseSym<T>, m: &SparseSym<T>, k: usize) -> Result<Vec<EigPair<T>>> {
    neumann_solve_with(s, m, k, &EigenOptions::default())
}

pub fn neumann_solve_with<T: Real>(
    s: &SparseSym<T>,
    m: &SparseSym<T>,
    k: usize,
    opts: &EigenOptions,
) -> Result<Vec<EigPair<T>>> {
    let n = s.dim();
    if m.dim() != n {
        return Err(SloshError::Argument("stiffness and mass differ in size".into()));
    }
    if k == 0 || k + 1 > n {
        return Err(SloshError::Argument(format!("requested {k} eigenpairs from {n} dofs")));
    }
    let limit = T::tol(opts.residual_limit);
    if n <= DENSE_LIMIT {
        let pairs = dense_gen_eig(&DenseMatrix::from_sparse(s), &DenseMatrix::from_sparse(m), true, k, T::tol(opts.jacobi_tol))?;
        return pairs
            .into_iter()
            .map(|p| {
                let residual = pencil_residual(s, m, p.value, &p.vector);
                Ok(EigPair { residual, ..p })
            })
            .collect();
    }

    let m1 = m.mul_vec(&vec![T::one(); n]);
    let c11: T = m1.iter().copied().sum();
    let deflate = |v: &mut [T]| {
        let c = dot(&m1, v) / c11;
        v.iter_mut().for_each(|x| *x -= c);
    };
    // The range of S is the zero-sum vectors.
    let zero_sum = |r: &mut [T]| {
        let mean = r.iter().copied().sum::<T>() / T::from_count(r.len());
        r.iter_mut().for_each(|x| *x -= mean);
    };

    let p = (k + EXTRA).min(n - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut block: Vec<Vec<T>> =
        (0..p).map(|_| (0..n).map(|_| T::lit(rng.gen_range(-1.0..1.0))).collect()).collect();
    let cg_tol = T::tol(opts.cg_tol);
    let cap = default_max_iter(n);
    let target = limit * T::lit(1e-2).max(T::epsilon());
    let mut last = (T::zero(), T::infinity());

    for iteration in 0..opts.max_outer {
        for v in block.iter_mut() {
            deflate(v);
        }
        m_orthonormalize(m, &mut block);
        let sv: Vec<Vec<T>> = block.par_iter().map(|v| s.mul_vec(v)).collect();
        let q = block.len();
        let mut sp = DenseMatrix::from_fn(q, |i, j| dot(&block[i], &sv[j]));
        sp.symmetrize();
        let (theta, w) = jacobi_eigen(&sp, T::tol(opts.jacobi_tol))?;
        block = (0..q)
            .map(|j| {
                let mut v = vec![T::zero(); n];
                for (i, bi) in block.iter().enumerate() {
                    let c = w[(i, j)];
                    v.iter_mut().zip(bi).for_each(|(a, &b)| *a += c * b);
                }
                v
            })
            .collect();
        let res: Vec<T> = (0..k).map(|j| pencil_residual(s, m, theta[j], &block[j])).collect();
        let worst = res.iter().copied().fold(T::zero(), T::max);
        last = (theta[k - 1], worst);
        if worst <= target {
            log::debug!("neumann block iteration converged after {iteration} sweeps");
            return Ok((0..k)
                .map(|j| {
                    let mut x = block[j].clone();
                    deflate(&mut x);
                    let nrm = m.bilinear(&x, &x).sqrt();
                    x.iter_mut().for_each(|v| *v /= nrm);
                    EigPair { value: theta[j].max(T::zero()), residual: res[j], vector: x }
                })
                .collect());
        }
        block = block
            .par_iter()
            .map(|v| {
                let rhs = m.mul_vec(v);
                let mut x = pcg(s, &rhs, cg_tol, cap, Some(zero_sum))?;
                deflate(&mut x);
                Ok(x)
            })
            .collect::<Result<_>>()?;
    }
    Err(SloshError::EigenConvergence {
        iterations: opts.max_outer,
        rayleigh: last.0.to_f64_lossy(),
        residual: last.1.to_f64_lossy(),
    })
}

/// Modified Gram–Schmidt in the `M` inner product, applied twice.
fn m_orthonormalize<T: Real>(m: &SparseSym<T>, block: &mut [Vec<T>]) {
    for _ in 0..2 {
        for j in 0..block.len() {
            let mut mv = m.mul_vec(&block[j]);
            for i in 0..j {
                let c = dot(&block[i], &mv);
                let (head, tail) = block.split_at_mut(j);
                tail[0].iter_mut().zip(&head[i]).for_each(|(a, &b)| *a -= c * b);
            }
            mv = m.mul_vec(&block[j]);
            let nrm = dot(&block[j], &mv).sqrt();
            block[j].iter_mut().for_each(|v| *v /= nrm);
        }
    }
}
