use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact::{common_denominator, ExactError, RMatrix, RVector, Rational, ScaledVec};
use crate::lattice::Lattice;

/// An exact `n x n` rational matrix acting on column vectors, stored as
/// integer numerators over one positive denominator in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    n: usize,
    den: i64,
    num: Box<[i64]>,
}

impl GroupElement {
    fn canonical(n: usize, mut num: Vec<i64>, mut den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        if den < 0 {
            den = -den;
            num.iter_mut().for_each(|x| *x = -*x);
        }
        let g = num.iter().fold(den, |g, &x| g.gcd(&x));
        if g > 1 {
            den /= g;
            num.iter_mut().for_each(|x| *x /= g);
        }
        GroupElement { n, den, num: num.into_boxed_slice() }
    }

    pub fn identity(n: usize) -> Self {
        let mut num = vec![0; n * n];
        for i in 0..n {
            num[i * n + i] = 1;
        }
        GroupElement { n, den: 1, num: num.into_boxed_slice() }
    }

    /// Integer rows divided by `den`.
    pub fn from_scaled_rows(rows: &[Vec<i64>], den: i64) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self::canonical(n, rows.concat(), den)
    }

    pub fn from_rmatrix(m: &RMatrix) -> Result<Self, ExactError> {
        if !m.is_square() {
            return Err(ExactError::NotSquare);
        }
        let n = m.rows();
        let den = common_denominator(m);
        let den_i: i64 = (&den).try_into().map_err(|_| ExactError::Overflow)?;
        let scale = Rational::from(den);
        let mut num = Vec::with_capacity(n * n);
        for i in 0..n {
            for x in m.row_slice(i) {
                let v = x * &scale;
                num.push(v.numer().try_into().map_err(|_| ExactError::Overflow)?);
            }
        }
        Ok(Self::canonical(n, num, den_i))
    }

    /// Permutation matrix sending `e_a` to `e_{p(a)}`, with `p` given by 1-based cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                images[a - 1] = b - 1;
            }
        }
        Self::from_images(&images)
    }

    /// Permutation matrix sending `e_a` to `e_{images[a]}` (0-based).
    pub fn from_images(images: &[usize]) -> Self {
        let n = images.len();
        let mut num = vec![0; n * n];
        for (a, &b) in images.iter().enumerate() {
            num[b * n + a] = 1;
        }
        GroupElement { n, den: 1, num: num.into_boxed_slice() }
    }

    /// Diagonal matrix negating the listed 1-based coordinates.
    pub fn sign_change(n: usize, coords: &[usize]) -> Self {
        let mut g = Self::identity(n).num.into_vec();
        for &c in coords {
            g[(c - 1) * n + (c - 1)] = -1;
        }
        GroupElement { n, den: 1, num: g.into_boxed_slice() }
    }

    /// Block-diagonal matrix with `copies` copies of `block`.
    pub fn block_diagonal(block: &GroupElement, copies: usize) -> Self {
        let b = block.n;
        let n = b * copies;
        let mut num = vec![0; n * n];
        for c in 0..copies {
            for i in 0..b {
                for j in 0..b {
                    num[(c * b + i) * n + c * b + j] = block.num[i * b + j];
                }
            }
        }
        GroupElement { n, den: block.den, num: num.into_boxed_slice() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn numerators(&self) -> &[i64] {
        &self.num
    }

    pub fn entry(&self, i: usize, j: usize) -> Rational {
        Rational::new(self.num[i * self.n + j], self.den)
    }

    pub fn to_rmatrix(&self) -> RMatrix {
        let mut m = RMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, self.entry(i, j));
            }
        }
        m
    }

    pub fn is_identity(&self) -> bool {
        self.den == 1 && (0..self.n).all(|i| (0..self.n).all(|j| self.num[i * self.n + j] == i64::from(i == j)))
    }

    /// Matrix product `self * other`: apply `other` first.
    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        assert_eq!(self.n, other.n, "dimension mismatch in matrix product");
        let n = self.n;
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            let row = &self.num[i * n..(i + 1) * n];
            let dst = &mut out[i * n..(i + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a != 0 {
                    let src = &other.num[k * n..(k + 1) * n];
                    for (d, &b) in dst.iter_mut().zip(src) {
                        *d += a * b;
                    }
                }
            }
        }
        Self::canonical(n, out, self.den * other.den)
    }

    pub fn transpose(&self) -> GroupElement {
        let n = self.n;
        let mut out = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self.num[i * n + j];
            }
        }
        GroupElement { n, den: self.den, num: out.into_boxed_slice() }
    }

    /// Inverse of an orthogonal matrix.
    pub fn inverse(&self) -> GroupElement {
        debug_assert!(self.is_orthogonal());
        self.transpose()
    }

    pub fn is_orthogonal(&self) -> bool {
        self.mul(&self.transpose()).is_identity()
    }

    /// `M x` for a vector with a common denominator.
    pub fn apply(&self, x: &ScaledVec) -> ScaledVec {
        let n = self.n;
        let xs = x.num();
        let mut out = vec![0i128; n];
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.num[i * n..(i + 1) * n];
            let mut acc = 0i128;
            for (a, b) in row.iter().zip(xs) {
                acc += i128::from(*a) * i128::from(*b);
            }
            *o = acc;
        }
        ScaledVec::from_wide(&out, i128::from(self.den) * i128::from(x.den())).expect("image fits in i64")
    }

    pub fn apply_rvector(&self, x: &RVector) -> RVector {
        self.to_rmatrix().mul_vec(x)
    }

    pub fn apply_f64(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let d = self.den as f64;
        (0..n)
            .map(|i| self.num[i * n..(i + 1) * n].iter().zip(x).map(|(a, b)| *a as f64 * b).sum::<f64>() / d)
            .collect()
    }

    /// True when `M` maps every basis row of the lattice to a lattice vector.
    pub fn preserves(&self, lattice: &Lattice) -> bool {
        if lattice.dim() != self.n {
            return false;
        }
        let m = self.to_rmatrix();
        lattice.basis().row_vectors().iter().all(|b| lattice.contains(&m.mul_vec(b)))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "1/{} [", self.den)?;
        for i in 0..self.n {
            writeln!(f, "  {:?}", &self.num[i * self.n..(i + 1) * self.n])?;
        }
        write!(f, "]")
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rmatrix().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<Rational>> = Vec::deserialize(d)?;
        let m = RMatrix::from_rows(rows.into_iter().map(RVector::new).collect()).map_err(serde::de::Error::custom)?;
        GroupElement::from_rmatrix(&m).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_and_products() {
        let p = GroupElement::from_cycles(4, &[&[1, 2, 3]]);
        let e1 = ScaledVec::from_ints(&[1, 0, 0, 0]);
        assert_eq!(p.apply(&e1), ScaledVec::from_ints(&[0, 1, 0, 0]));
        assert!(p.mul(&p.inverse()).is_identity());
        assert!(p.mul(&p).mul(&p).is_identity());
        let s = GroupElement::sign_change(4, &[2]);
        assert_eq!(s.apply(&ScaledVec::from_ints(&[1, 2, 3, 4])), ScaledVec::from_ints(&[1, -2, 3, 4]));
    }

    #[test]
    fn matrix_round_trip() {
        let h = GroupElement::from_scaled_rows(&[vec![1, 1], vec![1, -1]], 2);
        assert!(!h.is_orthogonal());
        let m = h.to_rmatrix();
        assert_eq!(GroupElement::from_rmatrix(&m).unwrap(), h);
        let json = serde_json::to_string(&h).unwrap();
        assert_eq!(json, r#"[["1/2","1/2"],["1/2","-1/2"]]"#);
        let back: GroupElement = serde_json::from_str(&json).unwrap();
        assert_eq!(back, h);
    }
}
