//! Lattices given by a rational generator matrix, with exact closest-point search.
//!
//! The public basis is kept exactly as supplied. Searches run on an internally
//! reduced copy and report coefficients with respect to the public basis.

mod cvp;
mod decode;
mod named;

use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{common_denominator, ExactError, RMatrix, RVector, Rational, ScaledVec};

pub(crate) use cvp::SearchBasis;
pub(crate) use decode::Decoder;
pub use named::{make_lattice, LATTICE_NAMES};

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("unknown lattice name `{0}`")]
    UnknownName(String),
    #[error("lattice `{name}` is not supported: {reason}")]
    Unsupported { name: String, reason: String },
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("expected a vector of length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("cannot read basis file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed basis file: {0}")]
    Json(#[from] serde_json::Error),
}

/// A lattice point with its integer coordinates in the lattice basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub coeffs: Vec<i64>,
    pub coords: RVector,
}

/// Full-rank lattice in `R^n` whose generator rows are rational.
#[derive(Debug, Clone)]
pub struct Lattice {
    name: String,
    basis: RMatrix,
    gram: RMatrix,
    volume: Rational,
    inverse: RMatrix,
    int_basis: Vec<Vec<i64>>,
    basis_den: i64,
    search: SearchBasis,
    decoder: Decoder,
    covering_radius2: Option<Rational>,
}

#[derive(Deserialize)]
struct BasisFile {
    #[serde(default)]
    name: Option<String>,
    basis: Vec<Vec<Rational>>,
    #[serde(default)]
    covering_radius2: Option<Rational>,
}

impl Lattice {
    /// Builds a lattice from generator rows.
    pub fn from_basis(name: impl Into<String>, basis: RMatrix) -> Result<Self, LatticeError> {
        Self::build(name.into(), basis, Decoder::Search, None)
    }

    /// Reads `{"name": ..., "basis": [[...], ...]}` with entries as integers or `"p/q"` strings.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, LatticeError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let file: BasisFile = serde_json::from_str(&text)?;
        let name = file
            .name
            .unwrap_or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
        let rows = file.basis.into_iter().map(RVector::new).collect();
        let basis = RMatrix::from_rows(rows)?;
        Self::build(name, basis, Decoder::Search, file.covering_radius2)
    }

    pub(crate) fn build(
        name: String,
        basis: RMatrix,
        decoder: Decoder,
        covering_radius2: Option<Rational>,
    ) -> Result<Self, LatticeError> {
        if !basis.is_square() || basis.rows() == 0 {
            return Err(LatticeError::InvalidBasis(format!(
                "basis must be a non-empty square matrix, got {}x{}",
                basis.rows(),
                basis.cols()
            )));
        }
        let det = basis.determinant()?;
        if det.is_zero() {
            return Err(LatticeError::InvalidBasis("basis rows are linearly dependent".into()));
        }
        let inverse = basis.inverse()?;
        let gram = basis.mul(&basis.transpose());
        let den = common_denominator(&basis);
        let basis_den = den.to_i64().ok_or(ExactError::Overflow)?;
        let mut int_basis = Vec::with_capacity(basis.rows());
        for i in 0..basis.rows() {
            let row = basis
                .row_slice(i)
                .iter()
                .map(|x| {
                    let scaled = x.as_big() * num_rational::BigRational::from_integer(den.clone());
                    scaled.to_integer().to_i64().ok_or(ExactError::Overflow)
                })
                .collect::<Result<Vec<_>, _>>()?;
            int_basis.push(row);
        }
        let search = SearchBasis::new(&basis.to_f64_rows());
        Ok(Lattice {
            name,
            basis,
            gram,
            volume: det.abs(),
            inverse,
            int_basis,
            basis_den,
            search,
            decoder,
            covering_radius2,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &RMatrix {
        &self.basis
    }

    pub fn gram(&self) -> &RMatrix {
        &self.gram
    }

    pub fn volume(&self) -> &Rational {
        &self.volume
    }

    /// Signed determinant of the basis.
    pub fn determinant(&self) -> Rational {
        self.basis.determinant().expect("basis is square and invertible")
    }

    /// Squared covering radius, when it is known for this lattice.
    pub fn covering_radius2(&self) -> Option<&Rational> {
        self.covering_radius2.as_ref()
    }

    fn check_dim(&self, found: usize) -> Result<(), LatticeError> {
        if found != self.dim() {
            return Err(LatticeError::DimensionMismatch { expected: self.dim(), found });
        }
        Ok(())
    }

    /// The lattice point `coeffs * B`.
    pub fn point(&self, coeffs: &[i64]) -> LatticePoint {
        let coords = self.point_scaled(coeffs).to_rvector();
        LatticePoint { coeffs: coeffs.to_vec(), coords }
    }

    pub(crate) fn point_scaled(&self, coeffs: &[i64]) -> ScaledVec {
        let n = self.dim();
        let mut num = vec![0i128; n];
        for (c, row) in coeffs.iter().zip(&self.int_basis) {
            if *c != 0 {
                for (acc, b) in num.iter_mut().zip(row) {
                    *acc += i128::from(*c) * i128::from(*b);
                }
            }
        }
        ScaledVec::from_wide(&num, i128::from(self.basis_den)).expect("lattice point coordinates fit in i64")
    }

    /// Integer coordinates of `x` when it is a lattice point.
    pub fn coefficients_of(&self, x: &RVector) -> Option<Vec<i64>> {
        if x.dim() != self.dim() {
            return None;
        }
        let c = self.inverse.vec_mul(x);
        c.iter().map(|v| if v.is_integer() { v.numer().to_i64() } else { None }).collect()
    }

    pub fn contains(&self, x: &RVector) -> bool {
        self.coefficients_of(x).is_some()
    }

    pub(crate) fn reduced_to_point(&self, reduced: &[i64]) -> (Vec<i64>, ScaledVec) {
        let coeffs = self.search.to_original(reduced);
        let p = self.point_scaled(&coeffs);
        (coeffs, p)
    }

    /// Every lattice point at minimal distance from `x`, sorted by coefficients.
    pub fn closest_points(&self, x: &RVector) -> Result<Vec<LatticePoint>, LatticeError> {
        self.check_dim(x.dim())?;
        let sx = ScaledVec::from_rvector(x)?;
        let mut out: Vec<LatticePoint> = self
            .closest_scaled(&sx)
            .into_iter()
            .map(|(coeffs, p)| LatticePoint { coeffs, coords: p.to_rvector() })
            .collect();
        out.sort();
        Ok(out)
    }

    /// Exact tie set for a target given with a common denominator.
    pub(crate) fn closest_scaled(&self, x: &ScaledVec) -> Vec<(Vec<i64>, ScaledVec)> {
        let (_, candidates) = self.search.near_minimal(&x.to_f64());
        let points: Vec<(Vec<i64>, ScaledVec)> =
            candidates.iter().map(|c| self.reduced_to_point(c)).collect();
        let dists: Vec<Rational> = points.iter().map(|(_, p)| exact_dist2(x, p)).collect();
        let best = dists.iter().min().cloned().expect("search returns at least one point");
        points.into_iter().zip(dists).filter(|(_, d)| *d == best).map(|(p, _)| p).collect()
    }

    /// Squared distance from `x` to the lattice.
    pub fn distance2(&self, x: &RVector) -> Result<Rational, LatticeError> {
        self.check_dim(x.dim())?;
        let sx = ScaledVec::from_rvector(x)?;
        let (_, p) = &self.closest_scaled(&sx)[0];
        Ok(exact_dist2(&sx, p))
    }

    /// True when the origin is among the closest lattice points to `x`.
    pub fn in_voronoi(&self, x: &RVector) -> Result<bool, LatticeError> {
        self.check_dim(x.dim())?;
        let sx = ScaledVec::from_rvector(x)?;
        Ok(self.in_voronoi_scaled(&sx))
    }

    pub(crate) fn in_voronoi_scaled(&self, x: &ScaledVec) -> bool {
        self.closest_scaled(x).iter().any(|(_, p)| p.is_zero())
    }

    /// Every lattice point within squared distance `radius2` of `x`, inclusive.
    pub fn points_within(&self, x: &RVector, radius2: &Rational) -> Result<Vec<LatticePoint>, LatticeError> {
        self.check_dim(x.dim())?;
        let sx = ScaledVec::from_rvector(x)?;
        let r = radius2.to_f64();
        let slack = r * (1.0 + 1e-9) + 1e-9;
        let mut out: Vec<LatticePoint> = self
            .search
            .within(&sx.to_f64(), slack)
            .iter()
            .map(|c| self.reduced_to_point(c))
            .filter(|(_, p)| exact_dist2(&sx, p) <= *radius2)
            .map(|(coeffs, p)| LatticePoint { coeffs, coords: p.to_rvector() })
            .collect();
        out.sort();
        Ok(out)
    }

    /// Nearest lattice point in floating point. Ties are broken arbitrarily.
    pub fn nearest_point_f64(&self, x: &[f64]) -> Vec<f64> {
        match self.decoder.decode(x) {
            Some(p) => p,
            None => {
                let (_, c) = self.search.closest_one(x);
                self.search.point(&c)
            }
        }
    }

    /// Nearest point by sphere search only, bypassing any structured decoder.
    pub fn nearest_point_search_f64(&self, x: &[f64]) -> Vec<f64> {
        let (_, c) = self.search.closest_one(x);
        self.search.point(&c)
    }

    pub fn basis_f64(&self) -> Vec<Vec<f64>> {
        self.basis.to_f64_rows()
    }
}

/// Exact squared Euclidean distance between two scaled vectors.
pub(crate) fn exact_dist2(a: &ScaledVec, b: &ScaledVec) -> Rational {
    let (da, db) = (i128::from(a.den()), i128::from(b.den()));
    let l = da.lcm(&db);
    let (fa, fb) = (l / da, l / db);
    let mut acc: Option<i128> = Some(0);
    for (x, y) in a.num().iter().zip(b.num()) {
        acc = acc.and_then(|s| {
            let d = (i128::from(*x)).checked_mul(fa)?.checked_sub(i128::from(*y).checked_mul(fb)?)?;
            s.checked_add(d.checked_mul(d)?)
        });
        if acc.is_none() {
            break;
        }
    }
    match acc.and_then(|s| Some((s, l.checked_mul(l)?))) {
        Some((s, l2)) => Rational::new(BigInt::from(s), BigInt::from(l2)),
        None => a.to_rvector().sub(&b.to_rvector()).norm2(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn zn_rounding_and_ties() {
        let z3 = make_lattice("Zn(3)").unwrap();
        assert!(z3.volume().is_one());
        let x = RVector::new(vec![r(1, 5), r(3, 5), r(-2, 5)]);
        let pts = z3.closest_points(&x).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].coords, RVector::from_ints(&[0, 1, 0]));

        let z2 = make_lattice("Z2").unwrap();
        let pts = z2.closest_points(&RVector::new(vec![r(1, 2), r(0, 1)])).unwrap();
        let coords: Vec<_> = pts.iter().map(|p| p.coords.clone()).collect();
        assert_eq!(coords, vec![RVector::from_ints(&[0, 0]), RVector::from_ints(&[1, 0])]);
        assert!(z2.in_voronoi(&RVector::zeros(2)).unwrap());
        assert!(!z2.in_voronoi(&RVector::from_ints(&[2, 0])).unwrap());
    }

    #[test]
    fn membership_and_points() {
        let d4 = make_lattice("D4").unwrap();
        assert!(d4.contains(&RVector::from_ints(&[1, 1, 0, 0])));
        assert!(!d4.contains(&RVector::from_ints(&[1, 0, 0, 0])));
        let p = d4.point(&[1, 0, 0, 0]);
        assert_eq!(d4.coefficients_of(&p.coords), Some(vec![1, 0, 0, 0]));
        let within = d4.points_within(&RVector::zeros(4), &r(2, 1)).unwrap();
        assert_eq!(within.len(), 25);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let z2 = make_lattice("Z2").unwrap();
        assert!(matches!(
            z2.closest_points(&RVector::zeros(3)),
            Err(LatticeError::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn basis_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("hex.json");
        std::fs::write(&path, r#"{"name": "rect", "basis": [[2, 0], ["0", "1/3"]]}"#).unwrap();
        let l = Lattice::from_file(&path).unwrap();
        assert_eq!(l.name(), "rect");
        assert_eq!(*l.volume(), r(2, 3));
        let pts = l.closest_points(&RVector::new(vec![r(1, 1), r(1, 6)])).unwrap();
        assert_eq!(pts.len(), 4);
    }
}
