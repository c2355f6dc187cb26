use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ExactError, RVector, Rational};

/// Dense rows x cols matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<RVector>) -> Result<Self, ExactError> {
        let cols = rows.first().map_or(0, RVector::dim);
        if rows.iter().any(|r| r.dim() != cols) {
            return Err(ExactError::Ragged);
        }
        let n_rows = rows.len();
        let data = rows.into_iter().flat_map(RVector::into_entries).collect();
        Ok(RMatrix { rows: n_rows, cols, data })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| RVector::from_ints(r)).collect())
            .expect("integer rows must be rectangular")
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

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> RVector {
        RVector::new(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn row_slice(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<RVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn column(&self, j: usize) -> RVector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> RMatrix {
        let mut t = RMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RMatrix) -> RMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = RMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// `A x` with `x` as a column vector.
    pub fn mul_vec(&self, x: &RVector) -> RVector {
        assert_eq!(self.cols, x.dim());
        (0..self.rows)
            .map(|i| self.row_slice(i).iter().zip(x.iter()).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `x A` with `x` as a row vector.
    pub fn vec_mul(&self, x: &RVector) -> RVector {
        assert_eq!(self.rows, x.dim());
        let mut out = RVector::zeros(self.cols);
        for i in 0..self.rows {
            if !x[i].is_zero() {
                for j in 0..self.cols {
                    out[j] += &x[i] * self.get(i, j);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &RMatrix) -> RMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &RMatrix) -> RMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> RMatrix {
        RMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// Outer product `u v^T`.
    pub fn outer(u: &RVector, v: &RVector) -> RMatrix {
        let mut m = RMatrix::zeros(u.dim(), v.dim());
        for i in 0..u.dim() {
            for j in 0..v.dim() {
                m.data[i * v.dim() + j] = &u[i] * &v[j];
            }
        }
        m
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row_slice(i).iter().map(Rational::to_f64).collect()).collect()
    }

    /// Reduces to row echelon form in place; returns the pivot columns.
    fn echelonize(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).recip();
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in c..self.cols {
                    let v = self.get(i, j) - &f * self.get(r, j);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        self.clone().echelonize().len()
    }

    pub fn determinant(&self) -> Result<Rational, ExactError> {
        if !self.is_square() {
            return Err(ExactError::NotSquare);
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det *= &pivot;
            let inv = pivot.recip();
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) * &inv;
                for j in c..n {
                    let v = m.get(i, j) - &f * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<RMatrix, ExactError> {
        if !self.is_square() {
            return Err(ExactError::NotSquare);
        }
        let n = self.rows;
        let mut aug = RMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rational::one());
        }
        let pivots = aug.echelonize();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(ExactError::Singular);
        }
        let mut inv = RMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }
}

/// Exact solution of `A x = b` for square or overdetermined `A`.
///
/// Returns [`ExactError::NoSolution`] for inconsistent systems and
/// [`ExactError::Underdetermined`] when the solution is not unique.
pub fn solve(a: &RMatrix, b: &RVector) -> Result<RVector, ExactError> {
    if a.rows() != b.dim() {
        return Err(ExactError::DimensionMismatch { expected: a.rows(), found: b.dim() });
    }
    let (rows, cols) = (a.rows(), a.cols());
    let mut aug = RMatrix::zeros(rows, cols + 1);
    for i in 0..rows {
        for j in 0..cols {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, cols, b[i].clone());
    }
    let pivots = aug.echelonize();
    if pivots.last() == Some(&cols) {
        return Err(ExactError::NoSolution);
    }
    if pivots.len() < cols {
        return Err(ExactError::Underdetermined);
    }
    Ok((0..cols).map(|i| aug.get(i, cols).clone()).collect())
}

pub fn rank(a: &RMatrix) -> usize {
    a.rank()
}

/// Rank of `{p - p0}` over a nonempty point set.
pub fn affine_rank(points: &[RVector]) -> usize {
    let Some((first, rest)) = points.split_first() else {
        return 0;
    };
    if rest.is_empty() {
        return 0;
    }
    let diffs: Vec<RVector> = rest.iter().map(|p| p.sub(first)).collect();
    RMatrix::from_rows(diffs).map(|m| m.rank()).unwrap_or(0)
}

impl fmt::Debug for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl Serialize for RMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.row_vectors().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<RVector>::deserialize(deserializer)?;
        RMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}
