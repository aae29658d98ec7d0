//! Compressed-row symmetric sparse matrices.

use std::io::{BufRead, Write};

use crate::error::{Result, SloshError};
use crate::scalar::Real;

/// Symmetric matrix in compressed-row storage; both triangles are stored
/// and column indices are sorted within each row.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSym<T> {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<T>,
}

/// Accumulates `(i, j, v)` contributions; duplicates are summed in
/// insertion order, so the result is bit-reproducible.
#[derive(Clone, Debug)]
pub struct TripletBuilder<T> {
    n: usize,
    entries: Vec<(usize, usize, T)>,
}

impl<T: Real> TripletBuilder<T> {
    pub fn new(n: usize) -> Self {
        Self { n, entries: Vec::new() }
    }

    pub fn with_capacity(n: usize, cap: usize) -> Self {
        Self { n, entries: Vec::with_capacity(cap) }
    }

    pub fn add(&mut self, i: usize, j: usize, v: T) {
        debug_assert!(i < self.n && j < self.n);
        self.entries.push((i, j, v));
    }

    pub fn build(mut self) -> SparseSym<T> {
        // Stable sort keeps the per-entry summation order fixed.
        self.entries.sort_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0usize; self.n + 1];
        let mut cols = Vec::with_capacity(self.entries.len());
        let mut vals: Vec<T> = Vec::with_capacity(self.entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in self.entries {
            if last == Some((i, j)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(j);
                vals.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..self.n {
            row_ptr[i + 1] += row_ptr[i];
        }
        SparseSym { n: self.n, row_ptr, cols, vals }
    }
}

impl<T: Real> SparseSym<T> {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&j) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => T::zero(),
        }
    }

    pub fn diag(&self) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn mul_vec_into(&self, x: &[T], y: &mut [T]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = T::zero();
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *yi = acc;
        }
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.n];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// `xᵀ A y`.
    pub fn bilinear(&self, x: &[T], y: &[T]) -> T {
        let ay = self.mul_vec(y);
        x.iter().zip(&ay).map(|(&a, &b)| a * b).sum()
    }

    /// Largest relative asymmetry `|a_ij - a_ji| / max|a|`.
    pub fn asymmetry(&self) -> T {
        let scale = self.vals.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        if scale == T::zero() {
            return T::zero();
        }
        let mut worst = T::zero();
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst / scale
    }

    pub fn is_symmetric(&self, rel_tol: T) -> bool {
        self.asymmetry() <= rel_tol
    }

    /// Turns the rows and columns of `dofs` into identity rows.
    pub fn constrain(&self, dofs: &[bool]) -> SparseSym<T> {
        let mut b = TripletBuilder::with_capacity(self.n, self.nnz());
        for i in 0..self.n {
            if dofs[i] {
                b.add(i, i, T::one());
                continue;
            }
            for (j, v) in self.row(i) {
                if !dofs[j] {
                    b.add(i, j, v);
                }
            }
        }
        b.build()
    }

    /// Zeroes the rows and columns of `dofs`.
    pub fn zero_out(&self, dofs: &[bool]) -> SparseSym<T> {
        let mut b = TripletBuilder::with_capacity(self.n, self.nnz());
        for i in (0..self.n).filter(|&i| !dofs[i]) {
            for (j, v) in self.row(i) {
                if !dofs[j] {
                    b.add(i, j, v);
                }
            }
        }
        b.build()
    }

    /// Principal submatrix on `idx` (in that order).
    pub fn submatrix(&self, idx: &[usize]) -> SparseSym<T> {
        let mut map = vec![usize::MAX; self.n];
        for (k, &i) in idx.iter().enumerate() {
            map[i] = k;
        }
        let mut b = TripletBuilder::new(idx.len());
        for (k, &i) in idx.iter().enumerate() {
            for (j, v) in self.row(i) {
                if map[j] != usize::MAX {
                    b.add(k, map[j], v);
                }
            }
        }
        b.build()
    }

    /// Writes coordinate format: `sym <n> <nnz>` then `i j value` per entry.
    pub fn write_coo<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "sym {} {}", self.n, self.nnz())?;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                writeln!(w, "{i} {j} {v:.16e}")?;
            }
        }
        Ok(())
    }

    pub fn read_coo<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let (n, nnz) = loop {
            let (idx, line) = lines.next().ok_or(SloshError::Parse { line: 0, message: "empty file".into() })?;
            let line = line?;
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.is_empty() || t[0].starts_with('#') {
                continue;
            }
            match t.as_slice() {
                ["sym", n, nnz] => match (n.parse::<usize>(), nnz.parse::<usize>()) {
                    (Ok(n), Ok(nnz)) => break (n, nnz),
                    _ => return Err(SloshError::Parse { line: idx + 1, message: "bad header".into() }),
                },
                _ => return Err(SloshError::Parse { line: idx + 1, message: "expected `sym <n> <nnz>`".into() }),
            }
        };
        let mut b = TripletBuilder::with_capacity(n, nnz);
        let mut count = 0;
        for (idx, line) in lines {
            let line = line?;
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.is_empty() || t[0].starts_with('#') {
                continue;
            }
            let bad = || SloshError::Parse { line: idx + 1, message: format!("bad entry `{line}`") };
            if t.len() != 3 {
                return Err(bad());
            }
            let i: usize = t[0].parse().map_err(|_| bad())?;
            let j: usize = t[1].parse().map_err(|_| bad())?;
            let v: T = t[2].parse().map_err(|_| bad())?;
            if i >= n || j >= n {
                return Err(bad());
            }
            b.add(i, j, v);
            count += 1;
        }
        if count != nnz {
            return Err(SloshError::Parse { line: 0, message: format!("header promises {nnz} entries, found {count}") });
        }
        Ok(b.build())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SparseSym<f64> {
        let mut b = TripletBuilder::new(3);
        b.add(0, 0, 2.0);
        b.add(0, 1, -1.0);
        b.add(1, 0, -1.0);
        b.add(1, 1, 1.0);
        b.add(1, 1, 1.0);
        b.add(2, 2, 3.0);
        b.build()
    }

    #[test]
    fn builder_sums_duplicates() {
        let a = small();
        assert_eq!(a.nnz(), 5);
        assert_eq!(a.get(1, 1), 2.0);
        assert_eq!(a.get(0, 2), 0.0);
        assert_eq!(a.mul_vec(&[1.0, 1.0, 1.0]), vec![1.0, 1.0, 3.0]);
        assert!(a.is_symmetric(1e-14));
    }

    #[test]
    fn constrain_and_submatrix() {
        let a = small();
        let c = a.constrain(&[false, true, false]);
        assert_eq!(c.get(1, 1), 1.0);
        assert_eq!(c.get(0, 1), 0.0);
        assert_eq!(c.nnz(), 3);
        let z = a.zero_out(&[true, false, false]);
        assert_eq!(z.get(0, 0), 0.0);
        assert_eq!(z.nnz(), 2);
        let s = a.submatrix(&[2, 0]);
        assert_eq!(s.get(0, 0), 3.0);
        assert_eq!(s.get(1, 1), 2.0);
        assert_eq!(s.get(0, 1), 0.0);
    }

    #[test]
    fn coo_round_trip() {
        let a = small();
        let mut buf = Vec::new();
        a.write_coo(&mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("sym 3 5\n"));
        let back = SparseSym::<f64>::read_coo(&buf[..]).unwrap();
        assert_eq!(back, a);
    }
}
