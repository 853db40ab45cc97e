//! Exact dense linear algebra: matrices, reduced row-echelon form, kernels
//! and canonical subspaces.
//!
//! A [`Subspace`] always stores the reduced row-echelon basis of its span, so
//! two subspaces are equal exactly when their representations are equal.

use std::fmt;

use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("ragged rows: row {row} has length {found}, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
}

fn check_len(expected: usize, found: usize) -> Result<(), LinalgError> {
    if expected == found {
        Ok(())
    } else {
        Err(LinalgError::DimensionMismatch { expected, found })
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn diagonal(entries: &[F]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is only consulted when `rows` is empty.
    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Result<Self, LinalgError> {
        let ncols = rows.first().map_or(cols, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(LinalgError::Ragged {
                    row: i,
                    expected: ncols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<F>], rows: usize) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            check_len(rows, col.len())?;
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[F]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        self.row_iter().map(<[F]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[F]) -> Result<Vec<F>, LinalgError> {
        check_len(self.cols, v.len())?;
        Ok(self
            .row_iter()
            .map(|row| dot(row, v))
            .collect())
    }

    pub fn matmul(&self, other: &Matrix<F>) -> Result<Matrix<F>, LinalgError> {
        check_len(self.cols, other.rows)?;
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let cell = &mut out[(i, j)];
                        *cell = cell.clone() + a.clone() * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix<F>) -> Result<Matrix<F>, LinalgError> {
        check_len(self.rows, other.rows)?;
        check_len(self.cols, other.cols)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() - b)
                .collect(),
        })
    }

    pub fn scale(&self, s: &F) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * s).collect(),
        }
    }

    /// Reduced row-echelon form with the same shape, plus pivot columns.
    pub fn rref_with_pivots(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("pivot is nonzero");
            for j in c..m.cols {
                let x = m[(r, j)].clone() * &inv;
                m[(r, j)] = x;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let x = m[(i, j)].clone() - factor.clone() * &m[(r, j)];
                    m[(i, j)] = x;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rref(&self) -> Matrix<F> {
        self.rref_with_pivots().0
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// `{x : self * x = 0}`.
    pub fn kernel(&self) -> Subspace<F> {
        let (r, pivots) = self.rref_with_pivots();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let basis = (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![F::zero(); self.cols];
                v[free] = F::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(row, free)].clone();
                }
                v
            })
            .collect::<Vec<_>>();
        Subspace::span_unchecked(basis, self.cols)
    }

    /// Kernel of `self - lambda * id`.
    pub fn eigenspace(&self, lambda: &F) -> Result<Subspace<F>, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let shifted = self.sub(&Matrix::identity(self.rows).scale(lambda))?;
        Ok(shifted.kernel())
    }

    /// Some solution of `self * x = rhs`, or `None` when inconsistent.
    pub fn solve(&self, rhs: &[F]) -> Result<Option<Vec<F>>, LinalgError> {
        check_len(self.rows, rhs.len())?;
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = rhs[i].clone();
        }
        let (r, pivots) = aug.rref_with_pivots();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![F::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Ok(Some(x))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: fmt::Display> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(F::zero(), |acc, (x, y)| acc + x.clone() * y)
}

/// A linear subspace of `F^n`, stored by its reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the given coordinate vectors.
    pub fn from_vectors<V: AsRef<[F]>>(vectors: &[V], ambient: usize) -> Result<Self, LinalgError> {
        for v in vectors {
            check_len(ambient, v.as_ref().len())?;
        }
        Ok(Self::span_unchecked(
            vectors.iter().map(|v| v.as_ref().to_vec()).collect(),
            ambient,
        ))
    }

    /// Span of standard basis vectors with the given indices.
    pub fn coordinate(indices: &[usize], ambient: usize) -> Self {
        let vs: Vec<Vec<F>> = indices.iter().map(|&i| unit(ambient, i)).collect();
        Self::span_unchecked(vs, ambient)
    }

    pub(crate) fn span_unchecked(vectors: Vec<Vec<F>>, ambient: usize) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let m = Matrix::from_rows(vectors, ambient).expect("caller checked lengths");
        let (r, pivots) = m.rref_with_pivots();
        let rank = pivots.len();
        let basis = Matrix {
            rows: rank,
            cols: ambient,
            data: r.data[..rank * ambient].to_vec(),
        };
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// The canonical basis as a matrix (RREF, no zero rows).
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> impl Iterator<Item = &[F]> + '_ {
        self.basis.row_iter()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residue of `v` after eliminating the pivot coordinates.
    pub fn reduce(&self, v: &[F]) -> Result<Vec<F>, LinalgError> {
        check_len(self.ambient, v.len())?;
        let mut r = v.to_vec();
        for (row, &p) in self.pivots.iter().enumerate() {
            if r[p].is_zero() {
                continue;
            }
            let c = r[p].clone();
            for (x, b) in r.iter_mut().zip(self.basis.row(row)) {
                if !b.is_zero() {
                    *x = x.clone() - c.clone() * b;
                }
            }
        }
        Ok(r)
    }

    pub fn contains(&self, v: &[F]) -> Result<bool, LinalgError> {
        Ok(self.reduce(v)?.iter().all(F::is_zero))
    }

    /// Coordinates of `v` in the canonical basis, `None` if `v` lies outside.
    pub fn coordinates(&self, v: &[F]) -> Result<Option<Vec<F>>, LinalgError> {
        if !self.contains(v)? {
            return Ok(None);
        }
        Ok(Some(self.pivots.iter().map(|&p| v[p].clone()).collect()))
    }

    /// The vector with the given coordinates in the canonical basis.
    pub fn combine(&self, coords: &[F]) -> Result<Vec<F>, LinalgError> {
        check_len(self.dim(), coords.len())?;
        let mut v = vec![F::zero(); self.ambient];
        for (c, row) in coords.iter().zip(self.basis_vectors()) {
            if c.is_zero() {
                continue;
            }
            for (x, b) in v.iter_mut().zip(row) {
                *x = x.clone() + c.clone() * b;
            }
        }
        Ok(v)
    }

    pub fn leq(&self, other: &Subspace<F>) -> Result<bool, LinalgError> {
        check_len(other.ambient, self.ambient)?;
        for v in self.basis_vectors() {
            if !other.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// First canonical basis vector of `self` outside `other`.
    pub fn first_outside(&self, other: &Subspace<F>) -> Result<Option<Vec<F>>, LinalgError> {
        check_len(other.ambient, self.ambient)?;
        for v in self.basis_vectors() {
            if !other.contains(v)? {
                return Ok(Some(v.to_vec()));
            }
        }
        Ok(None)
    }

    pub fn sum(&self, other: &Subspace<F>) -> Result<Subspace<F>, LinalgError> {
        check_len(self.ambient, other.ambient)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let vs: Vec<Vec<F>> = self
            .basis_vectors()
            .chain(other.basis_vectors())
            .map(<[F]>::to_vec)
            .collect();
        Ok(Self::span_unchecked(vs, self.ambient))
    }

    /// Intersection via the kernel of `[B1^T | -B2^T]`.
    pub fn intersect(&self, other: &Subspace<F>) -> Result<Subspace<F>, LinalgError> {
        check_len(self.ambient, other.ambient)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ambient));
        }
        let k1 = self.dim();
        let mut columns: Vec<Vec<F>> = self.basis_vectors().map(<[F]>::to_vec).collect();
        columns.extend(
            other
                .basis_vectors()
                .map(|v| v.iter().map(|x| -x.clone()).collect::<Vec<_>>()),
        );
        let system = Matrix::from_columns(&columns, self.ambient)?;
        let kernel = system.kernel();
        let vs = kernel
            .basis_vectors()
            .map(|sol| self.combine(&sol[..k1]))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::span_unchecked(vs, self.ambient))
    }

    /// Indices of standard basis vectors not among the pivots; together with
    /// `self` they span the ambient space.
    pub fn complement_indices(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&i| !is_pivot[i]).collect()
    }
}

impl<F: fmt::Display> fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}: {:?})", self.basis.rows, self.ambient, self.basis)
    }
}

pub fn unit<F: Field>(n: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[i] = F::one();
    v
}

pub fn rref<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    m.rref()
}

pub fn kernel<F: Field>(m: &Matrix<F>) -> Subspace<F> {
    m.kernel()
}

pub fn eigenspace<F: Field>(m: &Matrix<F>, lambda: &F) -> Result<Subspace<F>, LinalgError> {
    m.eigenspace(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Rational, F5};

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn mat(rows: &[&[i64]]) -> Matrix<Rational> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect(), cols)
            .unwrap()
    }

    #[test]
    fn rref_examples() {
        assert_eq!(mat(&[&[2, 4], &[1, 2]]).rref(), mat(&[&[1, 2], &[0, 0]]));
        let id = Matrix::<Rational>::identity(3);
        assert_eq!(id.rref(), id);
        assert_eq!(mat(&[&[0, 1], &[1, 0]]).rref(), mat(&[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::<Rational>::zeros(2, 2).kernel().is_full());
        assert!(Matrix::<Rational>::identity(3).kernel().is_zero());
        let k = mat(&[&[1, 1]]).kernel();
        assert_eq!(k, Subspace::from_vectors(&[vec![q(1), q(-1)]], 2).unwrap());
    }

    #[test]
    fn span_examples() {
        let empty: [Vec<Rational>; 0] = [];
        assert!(Subspace::from_vectors(&empty, 3).unwrap().is_zero());
        let s = Subspace::from_vectors(&[vec![q(1), q(0)], vec![q(2), q(0)]], 2).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis().row(0), &[q(1), q(0)]);
        let s = Subspace::from_vectors(&[vec![q(1), q(1)], vec![q(1), q(-1)]], 2).unwrap();
        assert!(s.is_full());
        assert!(Subspace::from_vectors(&[vec![q(1)]], 2).is_err());
    }

    #[test]
    fn sum_and_intersection() {
        let s = Subspace::from_vectors(&[vec![q(1), q(2), q(3)]], 3).unwrap();
        assert_eq!(s.sum(&Subspace::zero(3)).unwrap(), s);
        let plane = Subspace::<Rational>::full(2);
        let diag = Subspace::from_vectors(&[vec![q(1), q(1)]], 2).unwrap();
        assert_eq!(plane.intersect(&diag).unwrap(), diag);
        assert!(plane.sum(&Subspace::zero(3)).is_err());
        assert!(plane.intersect(&Subspace::zero(3)).is_err());
    }

    #[test]
    fn membership() {
        let z = Subspace::<Rational>::zero(2);
        assert!(z.contains(&[q(0), q(0)]).unwrap());
        let x = Subspace::<Rational>::coordinate(&[0], 2);
        assert!(!x.contains(&[q(0), q(1)]).unwrap());
        assert!(x.contains(&[q(0)]).is_err());
        assert!(x.leq(&Subspace::full(3)).is_err());
    }

    #[test]
    fn eigenspace_examples() {
        let id = Matrix::<Rational>::identity(3);
        assert!(id.eigenspace(&q(1)).unwrap().is_full());
        assert!(Matrix::<Rational>::zeros(3, 3).eigenspace(&q(0)).unwrap().is_full());
        let half = Rational::from_ratio(1, 2).unwrap();
        let d = Matrix::diagonal(&[q(1), half.clone(), q(0)]);
        assert_eq!(d.eigenspace(&half).unwrap(), Subspace::coordinate(&[1], 3));
        assert!(mat(&[&[1, 2]]).eigenspace(&q(0)).is_err());
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = mat(&[&[1, 1], &[1, -1]]);
        let x = a.solve(&[q(3), q(1)]).unwrap().unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        let b = mat(&[&[1, 1], &[2, 2]]);
        assert!(b.solve(&[q(1), q(3)]).unwrap().is_none());
    }

    #[test]
    fn coordinates_round_trip() {
        let s = Subspace::from_vectors(&[vec![q(1), q(1), q(0)], vec![q(0), q(1), q(1)]], 3).unwrap();
        let v = vec![q(2), q(5), q(3)];
        let c = s.coordinates(&v).unwrap().unwrap();
        assert_eq!(s.combine(&c).unwrap(), v);
        assert!(s.coordinates(&[q(0), q(0), q(1)]).unwrap().is_none());
    }

    #[test]
    fn prime_field_kernel() {
        let m = Matrix::from_rows(vec![vec![F5::new(1), F5::new(2)]], 2).unwrap();
        let k = m.kernel();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[F5::new(3), F5::new(1)]).unwrap());
    }
}
