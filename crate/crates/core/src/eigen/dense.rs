//! Small dense symmetric kernels: Cholesky, cyclic Jacobi and the
//! generalized problem `T x = λ B x` with optional constant deflation.

use std::ops::{Index, IndexMut};

use crate::error::{Result, SloshError};
use crate::scalar::Real;
use crate::sparse::{SparseSym, TripletBuilder};

use super::EigPair;

pub const DEFAULT_JACOBI_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Row-major square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_sparse(a: &SparseSym<T>) -> Self {
        let mut d = Self::zeros(a.dim());
        for i in 0..a.dim() {
            for (j, v) in a.row(i) {
                d[(i, j)] = v;
            }
        }
        d
    }

    pub fn to_sparse(&self) -> SparseSym<T> {
        let mut b = TripletBuilder::new(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self[(i, j)];
                if v != T::zero() {
                    b.add(i, j, v);
                }
            }
        }
        b.build()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.n).map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut c = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..n {
                    c.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        c
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().map(|&v| v * v).sum::<T>().sqrt()
    }

    /// Largest `|a_ij - a_ji|` over `‖A‖_F`.
    pub fn asymmetry(&self) -> T {
        let f = self.frobenius();
        if f == T::zero() {
            return T::zero();
        }
        let mut worst = T::zero();
        for i in 0..self.n {
            for j in i + 1..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst / f
    }

    /// Replaces `A` by `(A + Aᵀ) / 2`.
    pub fn symmetrize(&mut self) {
        let half = T::lit(0.5);
        for i in 0..self.n {
            for j in i + 1..self.n {
                let v = (self[(i, j)] + self[(j, i)]) * half;
                self[(i, j)] = v;
                self[(j, i)] = v;
            }
        }
    }

    /// Lower Cholesky factor; fails on the first non-positive pivot.
    pub fn cholesky(&self) -> Result<Cholesky<T>> {
        let n = self.n;
        let mut l = Self::zeros(n);
        for j in 0..n {
            let mut d = self[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if d <= T::zero() || !d.is_finite() {
                return Err(SloshError::Factorization { pivot: j, value: d.to_f64_lossy() });
            }
            let d = d.sqrt();
            l[(j, j)] = d;
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / d;
            }
        }
        Ok(Cholesky { l })
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

#[derive(Clone, Debug)]
pub struct Cholesky<T> {
    pub l: DenseMatrix<T>,
}

impl<T: Real> Cholesky<T> {
    /// `L⁻¹ b`.
    pub fn solve_lower(&self, b: &[T]) -> Vec<T> {
        let n = self.l.n;
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                let v = self.l[(i, k)] * y[k];
                y[i] -= v;
            }
            y[i] /= self.l[(i, i)];
        }
        y
    }

    /// `L⁻ᵀ b`.
    pub fn solve_upper(&self, b: &[T]) -> Vec<T> {
        let n = self.l.n;
        let mut x = b.to_vec();
        for i in (0..n).rev() {
            for k in i + 1..n {
                let v = self.l[(k, i)] * x[k];
                x[i] -= v;
            }
            x[i] /= self.l[(i, i)];
        }
        x
    }

    /// `Lᵀ x`.
    pub fn mul_upper(&self, x: &[T]) -> Vec<T> {
        let n = self.l.n;
        (0..n).map(|i| (i..n).map(|k| self.l[(k, i)] * x[k]).sum()).collect()
    }

    /// `L⁻¹ A L⁻ᵀ`, symmetrized.
    pub fn congruence(&self, a: &DenseMatrix<T>) -> DenseMatrix<T> {
        let n = self.l.n;
        // Columns of L⁻¹ A, then rows of (L⁻¹ A) L⁻ᵀ = (L⁻¹ (L⁻¹ A)ᵀ)ᵀ.
        let mut half = DenseMatrix::zeros(n);
        for j in 0..n {
            let c = self.solve_lower(&a.column(j));
            for i in 0..n {
                half[(i, j)] = c[i];
            }
        }
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            let r = self.solve_lower(half.row(i));
            for j in 0..n {
                out[(i, j)] = r[j];
            }
        }
        out.symmetrize();
        out
    }
}

/// Cyclic Jacobi on a symmetric matrix. Returns ascending eigenvalues and
/// the matching orthonormal eigenvectors as columns.
pub fn jacobi_eigen<T: Real>(a: &DenseMatrix<T>, tol: T) -> Result<(Vec<T>, DenseMatrix<T>)> {
    let n = a.n;
    let mut a = a.clone();
    let mut v = DenseMatrix::identity(n);
    let scale = a.frobenius();
    let off = |a: &DenseMatrix<T>| {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)] * a[(i, j)];
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    loop {
        let o = off(&a);
        if o <= tol * scale || scale == T::zero() {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(SloshError::Convergence { iterations: sweeps, residual: (o / scale).to_f64_lossy() });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (apq + apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = (t * t + T::one()).sqrt().recip();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vecs = DenseMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok((values, vecs))
}

/// Orthonormal basis of the complement of unit vector `y`, as the trailing
/// `n - 1` columns of the Householder reflector mapping `y` to `±e₀`.
fn complement_basis<T: Real>(y: &[T]) -> Vec<Vec<T>> {
    let n = y.len();
    let sign = if y[0] >= T::zero() { T::one() } else { -T::one() };
    let mut w = y.to_vec();
    w[0] += sign;
    let ww: T = w.iter().map(|&v| v * v).sum();
    (1..n)
        .map(|j| {
            // Column j of H = I - 2 w wᵀ / (wᵀw).
            let f = (w[j] + w[j]) / ww;
            (0..n).map(|i| if i == j { T::one() } else { T::zero() } - f * w[i]).collect()
        })
        .collect()
}

/// `k` smallest eigenpairs of `T x = λ B x` with `B` SPD. With `deflate`,
/// solutions are restricted to `1ᵀ B x = 0`. Vectors are B-orthonormal.
pub fn dense_gen_eig<T: Real>(
    t: &DenseMatrix<T>,
    b: &DenseMatrix<T>,
    deflate: bool,
    k: usize,
    jacobi_tol: T,
) -> Result<Vec<EigPair<T>>> {
    let n = t.dim();
    if b.dim() != n {
        return Err(SloshError::Argument(format!("pencil sizes differ: {} vs {}", n, b.dim())));
    }
    let avail = if deflate { n.saturating_sub(1) } else { n };
    if k == 0 || k > avail {
        return Err(SloshError::Argument(format!("requested {k} eigenpairs, {avail} available")));
    }
    let chol = b.cholesky()?;
    let c = chol.congruence(t);
    let (values, zs): (Vec<T>, Vec<Vec<T>>) = if deflate {
        let mut y = chol.mul_upper(&vec![T::one(); n]);
        let ny = y.iter().map(|&v| v * v).sum::<T>().sqrt();
        y.iter_mut().for_each(|v| *v /= ny);
        let q = complement_basis(&y);
        let cq: Vec<Vec<T>> = q.iter().map(|col| c.mul_vec(col)).collect();
        let m = n - 1;
        let reduced = DenseMatrix::from_fn(m, |i, j| q[i].iter().zip(&cq[j]).map(|(&a, &b)| a * b).sum());
        let mut reduced = reduced;
        reduced.symmetrize();
        let (vals, w) = jacobi_eigen(&reduced, jacobi_tol)?;
        let zs = (0..k)
            .map(|j| {
                let mut z = vec![T::zero(); n];
                for (i, qi) in q.iter().enumerate() {
                    let coef = w[(i, j)];
                    for (zk, &qk) in z.iter_mut().zip(qi) {
                        *zk += coef * qk;
                    }
                }
                z
            })
            .collect();
        (vals, zs)
    } else {
        let (vals, w) = jacobi_eigen(&c, jacobi_tol)?;
        (vals, (0..k).map(|j| w.column(j)).collect())
    };
    let ones = vec![T::one(); n];
    let b1 = b.mul_vec(&ones);
    let one_b_one: T = b1.iter().copied().sum();
    let mut out = Vec::with_capacity(k);
    for (j, z) in zs.into_iter().enumerate() {
        let mut x = chol.solve_upper(&z);
        if deflate {
            let c: T = x.iter().zip(&b1).map(|(&a, &b)| a * b).sum::<T>() / one_b_one;
            x.iter_mut().for_each(|v| *v -= c);
        }
        let bx = b.mul_vec(&x);
        let nrm = x.iter().zip(&bx).map(|(&a, &b)| a * b).sum::<T>().sqrt();
        x.iter_mut().for_each(|v| *v /= nrm);
        let lambda = values[j].max(T::zero());
        let tx = t.mul_vec(&x);
        let r: T = tx
            .iter()
            .zip(&bx)
            .map(|(&a, &b)| {
                let d = a - lambda * b / nrm;
                d * d
            })
            .sum::<T>()
            .sqrt();
        let xn = x.iter().map(|&v| v * v).sum::<T>().sqrt();
        out.push(EigPair { value: lambda, vector: x, residual: r / xn });
    }
    Ok(out)
}
