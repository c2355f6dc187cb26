//! Common-denominator integer vectors.
//!
//! A [`ScaledVec`] is an exact rational vector stored as `num / den` with a
//! single positive denominator and `gcd(num..., den) = 1`. The canonical form
//! makes structural equality coincide with rational equality, so these are the
//! keys of every orbit and vertex map. Arithmetic runs in machine integers
//! (i64 storage, i128 accumulation) and panics on overflow rather than
//! silently wrapping.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ExactError, RMatrix, RVector, Rational};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScaledVec {
    den: i64,
    num: Box<[i64]>,
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

impl ScaledVec {
    pub fn new(mut num: Vec<i64>, mut den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        if den < 0 {
            den = -den;
            num.iter_mut().for_each(|x| *x = -*x);
        }
        let g = num.iter().fold(den, |g, &x| gcd_i64(g, x));
        if g > 1 {
            num.iter_mut().for_each(|x| *x /= g);
            den /= g;
        }
        ScaledVec { den, num: num.into_boxed_slice() }
    }

    /// Builds from i128 parts, failing if the reduced form does not fit in i64.
    pub fn from_wide(num: &[i128], den: i128) -> Result<Self, ExactError> {
        let g = num.iter().fold(den, |g, &x| g.gcd(&x));
        let g = if den < 0 { -g } else { g };
        let den = i64::try_from(den / g).map_err(|_| ExactError::Overflow)?;
        let num = num
            .iter()
            .map(|&x| i64::try_from(x / g).map_err(|_| ExactError::Overflow))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ScaledVec { den, num: num.into_boxed_slice() })
    }

    pub fn from_ints(num: &[i64]) -> Self {
        ScaledVec { den: 1, num: num.to_vec().into_boxed_slice() }
    }

    pub fn zeros(n: usize) -> Self {
        ScaledVec { den: 1, num: vec![0; n].into_boxed_slice() }
    }

    pub fn from_rvector(v: &RVector) -> Result<Self, ExactError> {
        let mut den = BigInt::from(1);
        for x in v.iter() {
            den = den.lcm(x.denom());
        }
        let den_i = den.to_i64().ok_or(ExactError::Overflow)?;
        let num = v
            .iter()
            .map(|x| (x.numer() * (&den / x.denom())).to_i64().ok_or(ExactError::Overflow))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ScaledVec::new(num, den_i))
    }

    pub fn to_rvector(&self) -> RVector {
        self.num.iter().map(|&x| Rational::new(x, self.den)).collect()
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn num(&self) -> &[i64] {
        &self.num
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|&x| x == 0)
    }

    pub fn entry(&self, i: usize) -> Rational {
        Rational::new(self.num[i], self.den)
    }

    /// `sum a_i b_i` of the numerators; the dot product is this over `den * other.den`.
    #[inline]
    pub fn raw_dot(&self, other: &ScaledVec) -> i128 {
        debug_assert_eq!(self.dim(), other.dim());
        self.num.iter().zip(other.num.iter()).map(|(&a, &b)| a as i128 * b as i128).sum()
    }

    pub fn dot(&self, other: &ScaledVec) -> Rational {
        Rational::new(BigInt::from(self.raw_dot(other)), BigInt::from(self.den as i128 * other.den as i128))
    }

    pub fn norm2(&self) -> Rational {
        self.dot(self)
    }

    /// Whether `<self, r> = |r|^2 / 2`, i.e. `self` lies on the bisector of `0` and `r`.
    #[inline]
    pub fn on_bisector(&self, r: &ScaledVec) -> bool {
        2 * r.den as i128 * self.raw_dot(r) == self.den as i128 * r.raw_dot(r)
    }

    /// Sign of `|r|^2 / 2 - <self, r>`: positive on the origin's side of the bisector.
    pub fn bisector_side(&self, r: &ScaledVec) -> i32 {
        let lhs = self.den as i128 * r.raw_dot(r);
        let rhs = 2 * r.den as i128 * self.raw_dot(r);
        (lhs - rhs).signum() as i32
    }

    pub fn neg(&self) -> ScaledVec {
        ScaledVec { den: self.den, num: self.num.iter().map(|x| -x).collect() }
    }

    fn combine(&self, other: &ScaledVec, sign: i64) -> ScaledVec {
        let l = self.den.lcm(&other.den);
        let (fa, fb) = (l / self.den, l / other.den);
        let num = self.num.iter().zip(other.num.iter()).map(|(&a, &b)| a * fa + sign * b * fb).collect();
        ScaledVec::new(num, l)
    }

    pub fn add(&self, other: &ScaledVec) -> ScaledVec {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &ScaledVec) -> ScaledVec {
        self.combine(other, -1)
    }

    pub fn scale(&self, p: i64, q: i64) -> ScaledVec {
        ScaledVec::new(self.num.iter().map(|&x| x * p).collect(), self.den * q)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        let d = self.den as f64;
        self.num.iter().map(|&x| x as f64 / d).collect()
    }

    /// Numerators rescaled to denominator `target` (which must be a multiple of `den`).
    pub fn numerators_over(&self, target: i64) -> Vec<i128> {
        debug_assert_eq!(target % self.den, 0);
        let f = (target / self.den) as i128;
        self.num.iter().map(|&x| x as i128 * f).collect()
    }
}

impl fmt::Debug for ScaledVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den != 1 {
            write!(f, "1/{} ", self.den)?;
        }
        write!(f, "{:?}", self.num)
    }
}

impl Serialize for ScaledVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_rvector().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ScaledVec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = RVector::deserialize(deserializer)?;
        ScaledVec::from_rvector(&v).map_err(serde::de::Error::custom)
    }
}

/// Incremental exact row-echelon basis over the rationals, fed with integer rows.
///
/// Rows are kept primitive (divided by their content) so entries stay small;
/// any i128 overflow switches the whole basis to rational arithmetic.
pub struct EchelonBasis {
    dim: usize,
    rows: Vec<(usize, Vec<i128>)>,
    fallback: Option<Vec<RVector>>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis { dim, rows: Vec::new(), fallback: None }
    }

    pub fn rank(&self) -> usize {
        match &self.fallback {
            Some(rows) => rows.len(),
            None => self.rows.len(),
        }
    }

    /// Adds a row; returns true if it increased the rank.
    pub fn insert(&mut self, row: &[i128]) -> bool {
        debug_assert_eq!(row.len(), self.dim);
        if self.fallback.is_none() {
            match self.reduce_wide(row) {
                Some(None) => return false,
                Some(Some(reduced)) => {
                    let pivot = reduced.iter().position(|&x| x != 0).unwrap();
                    self.rows.push((pivot, reduced));
                    return true;
                }
                None => self.switch_to_fallback(),
            }
        }
        let v: RVector = row.iter().map(|&x| Rational::from(BigInt::from(x))).collect();
        self.insert_rational(v)
    }

    fn reduce_wide(&self, row: &[i128]) -> Option<Option<Vec<i128>>> {
        let mut v = row.to_vec();
        for (pivot, b) in &self.rows {
            let a = v[*pivot];
            if a == 0 {
                continue;
            }
            let p = b[*pivot];
            let g = a.gcd(&p);
            let (fa, fp) = (a / g, p / g);
            let mut content = 0i128;
            for (x, &y) in v.iter_mut().zip(b) {
                *x = x.checked_mul(fp)?.checked_sub(y.checked_mul(fa)?)?;
                content = content.gcd(x);
            }
            if content > 1 {
                v.iter_mut().for_each(|x| *x /= content);
            }
        }
        if v.iter().all(|&x| x == 0) {
            Some(None)
        } else {
            Some(Some(v))
        }
    }

    fn switch_to_fallback(&mut self) {
        let rows = self
            .rows
            .iter()
            .map(|(_, r)| r.iter().map(|&x| Rational::from(BigInt::from(x))).collect())
            .collect();
        self.fallback = Some(rows);
        self.rows.clear();
    }

    fn insert_rational(&mut self, v: RVector) -> bool {
        let rows = self.fallback.as_mut().expect("fallback active");
        let mut candidate = rows.clone();
        candidate.push(v);
        let before = rows.len();
        let m = RMatrix::from_rows(candidate.clone()).expect("rectangular");
        if m.rank() > before {
            *rows = candidate;
            true
        } else {
            false
        }
    }
}

/// Affine rank of a set of points, stopping early once `cap` is reached.
pub fn affine_rank_scaled<'a, I>(points: I, cap: usize) -> usize
where
    I: IntoIterator<Item = &'a ScaledVec>,
{
    let mut iter = points.into_iter();
    let Some(first) = iter.next() else {
        return 0;
    };
    let dim = first.dim();
    let mut basis = EchelonBasis::new(dim);
    for p in iter {
        let l = first.den.lcm(&p.den) as i128;
        let fa = l / first.den as i128;
        let fb = l / p.den as i128;
        let diff: Vec<i128> =
            p.num.iter().zip(first.num.iter()).map(|(&b, &a)| b as i128 * fb - a as i128 * fa).collect();
        basis.insert(&diff);
        if basis.rank() >= cap {
            break;
        }
    }
    basis.rank()
}

/// Rank of a set of vectors.
pub fn rank_scaled<'a, I>(vectors: I) -> usize
where
    I: IntoIterator<Item = &'a ScaledVec>,
{
    let mut basis: Option<EchelonBasis> = None;
    for v in vectors {
        let b = basis.get_or_insert_with(|| EchelonBasis::new(v.dim()));
        let row: Vec<i128> = v.num.iter().map(|&x| x as i128).collect();
        b.insert(&row);
    }
    basis.map_or(0, |b| b.rank())
}

/// Largest absolute numerator, handy for overflow budgeting.
pub fn max_abs_numerator(v: &ScaledVec) -> i64 {
    v.num.iter().map(|x| x.abs()).max().unwrap_or(0)
}

/// Least common multiple of denominators of a rational matrix, as BigInt.
pub fn common_denominator(m: &RMatrix) -> BigInt {
    let mut den = BigInt::from(1);
    for i in 0..m.rows() {
        for x in m.row_slice(i) {
            den = den.lcm(x.denom());
        }
    }
    den.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_and_round_trip() {
        let a = ScaledVec::new(vec![2, -4, 6], 4);
        assert_eq!(a.den(), 2);
        assert_eq!(a.num(), &[1, -2, 3]);
        let b = ScaledVec::new(vec![-1, 2, -3], -2);
        assert_eq!(a, b);
        assert_eq!(ScaledVec::from_rvector(&a.to_rvector()).unwrap(), a);
        assert_eq!(ScaledVec::new(vec![0, 0], 5), ScaledVec::zeros(2));
    }

    #[test]
    fn bisector_test() {
        let r = ScaledVec::from_ints(&[1, 1]);
        assert!(ScaledVec::new(vec![1, 1], 2).on_bisector(&r));
        assert!(ScaledVec::new(vec![2, 0], 2).on_bisector(&r));
        assert!(!ScaledVec::new(vec![1, 0], 2).on_bisector(&r));
        assert_eq!(ScaledVec::zeros(2).bisector_side(&r), 1);
        assert_eq!(ScaledVec::from_ints(&[2, 2]).bisector_side(&r), -1);
    }

    #[test]
    fn ranks() {
        let pts = [ScaledVec::from_ints(&[0, 0, 0]), ScaledVec::from_ints(&[1, 0, 0]), ScaledVec::new(vec![0, 1, 0], 3)];
        assert_eq!(affine_rank_scaled(pts.iter(), 3), 2);
        assert_eq!(affine_rank_scaled(pts.iter().take(1), 3), 0);
        let line = [ScaledVec::from_ints(&[1, 1]), ScaledVec::from_ints(&[2, 2]), ScaledVec::from_ints(&[-3, -3])];
        assert_eq!(affine_rank_scaled(line.iter(), 2), 1);
        assert_eq!(rank_scaled(line.iter()), 1);
    }

    #[test]
    fn echelon_overflow_falls_back() {
        let mut basis = EchelonBasis::new(2);
        let big = i128::MAX / 3;
        assert!(basis.insert(&[big, 1]));
        assert!(basis.insert(&[big - 1, 7]));
        assert!(!basis.insert(&[5, 9]));
        assert_eq!(basis.rank(), 2);
    }
}
