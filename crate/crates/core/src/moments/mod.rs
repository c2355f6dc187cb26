//! Exact volumes, first moments and second-moment tensors of Voronoi faces by
//! signed pyramid decomposition, and the normalized second moment `G`.
//!
//! Moments of a `d`-face are kept relative to the Lebesgue measure of an
//! affine coordinate system of the face (see [`FaceFrame`]), which keeps them
//! rational. The true moments are the stored ones times `sqrt(gram_det)`.

mod quantizer;
mod recursion;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

pub use quantizer::{isotropy_check, quantizer_constant, QuantizerConstant};
pub use recursion::{face_moments, face_moments_with_apex, hierarchy_moments, region_moments, ClassMoments, FaceFrame};

use crate::exact::{common_denominator, ExactError, RMatrix, RVector, Rational};
use crate::group::GroupElement;

#[derive(Debug, Error)]
pub enum MomentError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no moments for child class {class} of dimension {dim}")]
    MissingChild { dim: usize, class: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("hierarchy stops at dimension {0}")]
    Incomplete(usize),
    #[error("face points do not span a {0}-dimensional affine subspace")]
    Degenerate(usize),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Volume `m0`, first moment `m1 = ∫ x` and second-moment tensor
/// `m2 = ∫ x x^T` of a `dim`-dimensional set in `R^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MomentData {
    pub dim: usize,
    pub m0: Rational,
    pub m1: RVector,
    pub m2: RMatrix,
}

impl MomentData {
    pub fn zero(dim: usize, n: usize) -> Self {
        MomentData { dim, m0: Rational::zero(), m1: RVector::zeros(n), m2: RMatrix::zeros(n, n) }
    }

    /// Unit point mass at `v`.
    pub fn point(v: &RVector) -> Self {
        MomentData { dim: 0, m0: Rational::one(), m1: v.clone(), m2: RMatrix::outer(v, v) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.m1.dim()
    }

    pub fn add_assign(&mut self, other: &MomentData) {
        self.m0 = &self.m0 + &other.m0;
        self.m1 = self.m1.add(&other.m1);
        self.m2 = self.m2.add(&other.m2);
    }

    /// Moments of the image `g S`: `m1 -> g m1` and `m2 -> g m2 g^T`.
    pub fn transported(&self, g: &GroupElement) -> MomentData {
        let mut acc = TransportSum::new(self);
        acc.add(g);
        acc.finish()
    }

    /// `Σ_g` of the moments of `g S` over the given elements.
    pub fn transported_sum<'a>(&self, gs: impl IntoIterator<Item = &'a GroupElement>) -> MomentData {
        let mut acc = TransportSum::new(self);
        for g in gs {
            acc.add(g);
        }
        acc.finish()
    }
}

/// Moments of the pyramid with apex `a` over a base of dimension `d - 1`,
/// parametrized as `x = a + t (y - a)` with `y` in the base and `t` in `[0, 1]`.
/// `s` is the signed height factor: the pyramid's measure is `s t^(d-1) dt`
/// times the base measure.
pub fn pyramid_accumulate(base: &MomentData, apex: &RVector, s: &Rational) -> Result<MomentData, MomentError> {
    let n = base.ambient_dim();
    if apex.dim() != n {
        return Err(MomentError::DimensionMismatch { expected: n, found: apex.dim() });
    }
    let d = base.dim + 1;
    let inv = |k: usize| Rational::new(1, k as i64);
    let b0 = &base.m0;
    let m0 = s * &(b0 * &inv(d));

    let a_b0 = apex.scale(b0);
    let m1_inner = apex.scale(&(b0 * &inv(d))).add(&base.m1.sub(&a_b0).scale(&inv(d + 1)));
    let m1 = m1_inner.scale(s);

    let aa = RMatrix::outer(apex, apex);
    let a_m1 = RMatrix::outer(apex, &base.m1);
    let m1_a = a_m1.transpose();
    let cross = a_m1.add(&m1_a);
    let t1 = aa.scale(&(b0 * &inv(d)));
    let t2 = cross.sub(&aa.scale(&(b0 * &Rational::from(2)))).scale(&inv(d + 1));
    let t3 = base.m2.sub(&cross).add(&aa.scale(b0)).scale(&inv(d + 2));
    let m2 = t1.add(&t2).add(&t3).scale(s);
    Ok(MomentData { dim: d, m0, m1, m2 })
}

/// Sums `g m1` and `g m2 g^T` over many `g` with integer arithmetic, grouped
/// by the denominators of the matrices.
struct TransportSum<'a> {
    base: &'a MomentData,
    count: u64,
    m1_den: BigInt,
    m1_num: Vec<BigInt>,
    m2_den: BigInt,
    m2_num: Vec<BigInt>,
    sums1: BTreeMap<i64, Vec<BigInt>>,
    sums2: BTreeMap<i64, Vec<BigInt>>,
}

impl<'a> TransportSum<'a> {
    fn new(base: &'a MomentData) -> Self {
        let n = base.ambient_dim();
        let m1_den = base.m1.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let m1_num = base.m1.iter().map(|x| (x * &Rational::from(m1_den.clone())).numer().clone()).collect();
        let m2_den = common_denominator(&base.m2);
        let scale = Rational::from(m2_den.clone());
        let m2_num = (0..n * n).map(|k| (base.m2.get(k / n, k % n) * &scale).numer().clone()).collect();
        TransportSum { base, count: 0, m1_den, m1_num, m2_den, m2_num, sums1: BTreeMap::new(), sums2: BTreeMap::new() }
    }

    fn add(&mut self, g: &GroupElement) {
        let n = self.base.ambient_dim();
        let gn = g.numerators();
        let den = g.den();
        self.count += 1;

        let s1 = self.sums1.entry(den).or_insert_with(|| vec![BigInt::zero(); n]);
        for i in 0..n {
            let mut acc = BigInt::zero();
            for k in 0..n {
                let c = gn[i * n + k];
                if c != 0 {
                    acc += &self.m1_num[k] * c;
                }
            }
            s1[i] += acc;
        }

        let mut left = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let c = gn[i * n + k];
                if c == 0 {
                    continue;
                }
                for j in 0..n {
                    let a = &self.m2_num[k * n + j];
                    if !a.is_zero() {
                        left[i * n + j] += a * c;
                    }
                }
            }
        }
        let s2 = self.sums2.entry(den * den).or_insert_with(|| vec![BigInt::zero(); n * n]);
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigInt::zero();
                for k in 0..n {
                    let c = gn[j * n + k];
                    if c != 0 {
                        acc += &left[i * n + k] * c;
                    }
                }
                s2[i * n + j] += acc;
            }
        }
    }

    fn finish(self) -> MomentData {
        let n = self.base.ambient_dim();
        let mut m1 = RVector::zeros(n);
        for (den, v) in &self.sums1 {
            let scale = BigInt::from(*den) * &self.m1_den;
            for i in 0..n {
                m1[i] = &m1[i] + &Rational::new(v[i].clone(), scale.clone());
            }
        }
        let mut m2 = RMatrix::zeros(n, n);
        for (den2, v) in &self.sums2 {
            let scale = BigInt::from(*den2) * &self.m2_den;
            for i in 0..n {
                for j in 0..n {
                    let x = m2.get(i, j) + &Rational::new(v[i * n + j].clone(), scale.clone());
                    m2.set(i, j, x);
                }
            }
        }
        MomentData { dim: self.base.dim, m0: &self.base.m0 * &Rational::from(self.count as i64), m1, m2 }
    }
}
