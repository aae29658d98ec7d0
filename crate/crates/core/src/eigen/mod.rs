//! Eigensolvers for the discrete sloshing pencil `S x = ν B x` and the
//! Neumann pencil `S x = μ M x`.
//!
//! Deflation of the constant mode, by problem:
//!
//! | problem                  | constant in ker S | deflate |
//! |--------------------------|-------------------|---------|
//! | planar sloshing          | yes               | yes     |
//! | axisymmetric, m = 0      | yes               | yes     |
//! | axisymmetric, m ≥ 1      | no (axis pinned)  | no      |
//! | Neumann                  | yes               | yes     |

mod cg;
mod dense;
mod neumann;
mod steklov;

pub use cg::{default_max_iter, solve_interior, solve_interior_with, DEFAULT_CG_TOL};
pub use dense::{dense_gen_eig, jacobi_eigen, Cholesky, DenseMatrix, DEFAULT_JACOBI_TOL};
pub use neumann::{neumann_solve, neumann_solve_with};
pub use steklov::{reduce_to_surface, steklov_solve, steklov_solve_with, DtnReduced};


use crate::scalar::Real;
use crate::sparse::SparseSym;

/// Eigenvalue, nodal vector and relative residual `‖A x - λ B x‖ / ‖x‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigPair<T> {
    pub value: T,
    pub vector: Vec<T>,
    pub residual: T,
}

/// Tolerances for the solvers; the defaults sit two orders below the
/// accuracy any caller asserts on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenOptions {
    pub cg_tol: f64,
    pub jacobi_tol: f64,
    /// Pairs with a larger residual are rejected.
    pub residual_limit: f64,
    /// Outer iterations of the Neumann subspace iteration.
    pub max_outer: usize,
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self { cg_tol: DEFAULT_CG_TOL, jacobi_tol: DEFAULT_JACOBI_TOL, residual_limit: 1e-7, max_outer: 500, seed: 0x5eed }
    }
}

/// Whether the constant vector must be removed for this problem.
pub fn deflates_constants(kind: crate::geometry::DomainKind, m: crate::assembly::AzimuthalIndex) -> bool {
    kind == crate::geometry::DomainKind::Planar || m.m() == 0
}

/// `‖A x - λ B x‖ / ‖x‖`.
pub fn pencil_residual<T: Real>(a: &SparseSym<T>, b: &SparseSym<T>, lambda: T, x: &[T]) -> T {
    let ax = a.mul_vec(x);
    let bx = b.mul_vec(x);
    let r: T = ax.iter().zip(&bx).map(|(&u, &v)| (u - lambda * v) * (u - lambda * v)).sum();
    let xn: T = x.iter().map(|&v| v * v).sum();
    (r / xn).sqrt()
}
