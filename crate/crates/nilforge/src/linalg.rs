//! Exact dense linear algebra over [`Scalar`].

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Vector = Vec<Scalar>;

pub fn zero_vec(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vector {
    let mut v = zero_vec(n);
    v[i] = Scalar::one();
    v
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(c: &Scalar, a: &[Scalar]) -> Vector {
    a.iter().map(|x| c * x).collect()
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut s = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn diag(entries: &[Scalar]) -> Self {
        let mut m = Matrix::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn from_rows(rows: &[Vector]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned());
        }
        Matrix { rows: r, cols: c, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vector], nrows: usize) -> Self {
        let mut m = Matrix::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..nrows {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vector> =
            rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect();
        Matrix::from_rows(&rows)
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(Scalar::is_real)
    }

    pub fn transpose(&self) -> Self {
        let mut m = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(Scalar::conj).collect() }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut m = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        let p = a * b;
                        m[(i, j)] += p;
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: vec_add(&self.data, &o.data) }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: vec_sub(&self.data, &o.data) }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: vec_scale(c, &self.data) }
    }

    pub fn trace(&self) -> Scalar {
        let mut s = Scalar::zero();
        for i in 0..self.rows.min(self.cols) {
            s += &self[(i, i)];
        }
        s
    }

    pub fn commutator(&self, o: &Matrix) -> Matrix {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn is_nilpotent(&self) -> bool {
        let mut p = self.clone();
        for _ in 0..self.rows {
            if p.is_zero() {
                return true;
            }
            p = p.mul(self);
        }
        p.is_zero()
    }

    pub fn flat(&self) -> &[Scalar] {
        &self.data
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &m[(i, j)] - &(&f * &m[(r, j)]);
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = zero_vec(self.cols);
                v[f] = Scalar::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -&r[(row, f)];
                }
                v
            })
            .collect()
    }

    /// Some solution of `A x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vector> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = zero_vec(self.cols);
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Scalar::one();
        }
        let (r, pivots) = aug.rref();
        if n > 0 && (pivots.len() < n || pivots[n - 1] != n - 1) {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    pub fn det(&self) -> Scalar {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else { return Scalar::zero() };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = &det * &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    let v = &m[(i, j)] - &(&f * &m[(c, j)]);
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    /// Row-major strings, used by the JSON matrix format.
    pub fn to_json(&self) -> serde_json::Value {
        let field = if self.is_real() {
            crate::scalar::FieldTag::Rational
        } else {
            crate::scalar::FieldTag::GaussianRational
        };
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| serde_json::Value::Array(self.row(i).iter().map(|s| s.to_json(field)).collect()))
                .collect(),
        )
    }
}

/// Subspace of `F^n` stored by its reduced row echelon basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    pub ambient_dim: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { ambient_dim: n, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Subspace::span(n, &(0..n).map(|i| unit_vec(n, i)).collect::<Vec<_>>())
    }

    pub fn span(n: usize, vectors: &[Vector]) -> Self {
        if vectors.is_empty() {
            return Subspace::zero(n);
        }
        let (r, pivots) = Matrix::from_rows(vectors).rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { ambient_dim: n, basis, pivots }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut r = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if !r[p].is_zero() {
                let f = r[p].clone();
                r = vec_sub(&r, &vec_scale(&f, b));
            }
        }
        is_zero_vec(&r)
    }

    pub fn contains_subspace(&self, o: &Subspace) -> bool {
        o.basis.iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        let coords: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut recon = zero_vec(self.ambient_dim);
        for (c, b) in coords.iter().zip(&self.basis) {
            recon = vec_add(&recon, &vec_scale(c, b));
        }
        (recon == v).then_some(coords)
    }

    /// Echelon complement: unit vectors at the non-pivot columns.
    pub fn echelon_complement(&self) -> Vec<Vector> {
        (0..self.ambient_dim)
            .filter(|c| !self.pivots.contains(c))
            .map(|c| unit_vec(self.ambient_dim, c))
            .collect()
    }

    pub fn sum(&self, o: &Subspace) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(o.basis.iter().cloned());
        Subspace::span(self.ambient_dim, &all)
    }
}
