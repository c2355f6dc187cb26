use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use super::Rational;

/// Fixed-length vector of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct RVector(Vec<Rational>);

impl RVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        RVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        RVector(vec![Rational::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        RVector(entries.iter().map(|&x| Rational::from(x)).collect())
    }

    /// `scale * (entries...)`, the layout used for vectors written as `1/q (a b c ...)`.
    pub fn scaled_ints(scale: Rational, entries: &[i64]) -> Self {
        RVector(entries.iter().map(|&x| &scale * Rational::from(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn dot(&self, other: &RVector) -> Rational {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in dot product");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm2(&self) -> Rational {
        self.dot(self)
    }

    pub fn add(&self, other: &RVector) -> RVector {
        assert_eq!(self.dim(), other.dim());
        RVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RVector) -> RVector {
        assert_eq!(self.dim(), other.dim());
        RVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> RVector {
        RVector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> RVector {
        RVector(self.0.iter().map(|a| -a).collect())
    }

    /// In-place `self += s * other`.
    pub fn axpy(&mut self, s: &Rational, other: &RVector) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += s * b;
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(Rational::to_f64).collect()
    }
}

impl Index<usize> for RVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for RVector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl From<Vec<Rational>> for RVector {
    fn from(v: Vec<Rational>) -> Self {
        RVector(v)
    }
}

impl FromIterator<Rational> for RVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        RVector(iter.into_iter().collect())
    }
}

impl fmt::Debug for RVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for RVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
