use std::collections::HashMap;

use super::{pyramid_accumulate, MomentData, MomentError};
use crate::exact::{RMatrix, RVector, Rational};
use crate::faces::{Hierarchy, Region};
use crate::group::GroupElement;

/// Affine coordinates `x = anchor + λ B` of a `d`-face, with `B` the `d x n`
/// matrix of basis rows and the Gram matrix `B B^T`.
#[derive(Debug, Clone)]
pub struct FaceFrame {
    pub anchor: RVector,
    pub basis: RMatrix,
    pub gram_det: Rational,
    gram_inv: RMatrix,
}

impl FaceFrame {
    /// The frame of the whole space: origin and standard basis.
    pub fn standard(n: usize) -> Self {
        FaceFrame { anchor: RVector::zeros(n), basis: RMatrix::identity(n), gram_det: Rational::one(), gram_inv: RMatrix::identity(n) }
    }

    /// A frame of the affine hull of `points`, which must have affine
    /// dimension `dim`. The basis consists of differences from the first point.
    pub fn from_points<I: IntoIterator<Item = RVector>>(points: I, dim: usize) -> Result<Self, MomentError> {
        let mut iter = points.into_iter();
        let anchor = iter.next().ok_or(MomentError::Degenerate(dim))?;
        let n = anchor.dim();
        if dim == n {
            let mut span = Span::default();
            for p in iter {
                span.insert(p.sub(&anchor));
                if span.rank() == n {
                    return Ok(FaceFrame::standard(n));
                }
            }
            return Err(MomentError::Degenerate(dim));
        }
        let mut span = Span::default();
        let mut rows = Vec::with_capacity(dim);
        if dim > 0 {
            for p in iter {
                let diff = p.sub(&anchor);
                if span.insert(diff.clone()) {
                    rows.push(diff);
                    if rows.len() == dim {
                        break;
                    }
                }
            }
        }
        if rows.len() != dim {
            return Err(MomentError::Degenerate(dim));
        }
        Self::from_basis(anchor, rows)
    }

    fn from_basis(anchor: RVector, rows: Vec<RVector>) -> Result<Self, MomentError> {
        let n = anchor.dim();
        if rows.is_empty() {
            return Ok(FaceFrame {
                anchor,
                basis: RMatrix::zeros(0, n),
                gram_det: Rational::one(),
                gram_inv: RMatrix::zeros(0, 0),
            });
        }
        let basis = RMatrix::from_rows(rows)?;
        let gram = basis.mul(&basis.transpose());
        let gram_det = gram.determinant()?;
        let gram_inv = gram.inverse()?;
        Ok(FaceFrame { anchor, basis, gram_det, gram_inv })
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Frame coordinates of the direction `x`.
    pub fn direction_coords(&self, x: &RVector) -> RVector {
        self.gram_inv.mul_vec(&self.basis.mul_vec(x))
    }

    /// Frame coordinates of the point `x` (its orthogonal projection if `x`
    /// lies off the face).
    pub fn coords(&self, x: &RVector) -> RVector {
        self.direction_coords(&x.sub(&self.anchor))
    }

    /// Orthogonal projection of the origin onto the affine hull.
    pub fn origin_projection(&self) -> RVector {
        let lambda = self.coords(&RVector::zeros(self.anchor.dim()));
        self.anchor.add(&self.basis.vec_mul(&lambda))
    }

    /// The frame carried by `g` given as an exact matrix.
    fn transported(&self, g: &RMatrix) -> FaceFrame {
        let basis = if self.dim() == 0 { self.basis.clone() } else { self.basis.mul(&g.transpose()) };
        FaceFrame { anchor: g.mul_vec(&self.anchor), basis, gram_det: self.gram_det.clone(), gram_inv: self.gram_inv.clone() }
    }
}

/// Rows reduced against each other to test linear independence.
#[derive(Default)]
struct Span {
    rows: Vec<(usize, RVector)>,
}

impl Span {
    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, mut x: RVector) -> bool {
        for (p, row) in &self.rows {
            if !x[*p].is_zero() {
                let f = &x[*p] / &row[*p];
                x.axpy(&-f, row);
            }
        }
        match x.iter().position(|c| !c.is_zero()) {
            Some(p) => {
                self.rows.push((p, x));
                true
            }
            None => false,
        }
    }
}

/// Moments of one face class: its frame and its moments relative to the
/// frame's measure.
#[derive(Debug, Clone)]
pub struct ClassMoments {
    pub frame: FaceFrame,
    pub moments: MomentData,
}

impl ClassMoments {
    pub fn point(v: &RVector) -> Self {
        ClassMoments { frame: FaceFrame::from_basis(v.clone(), Vec::new()).expect("empty basis"), moments: MomentData::point(v) }
    }

    /// Squared Euclidean `d`-volume.
    pub fn volume_squared(&self) -> Rational {
        &(&self.moments.m0 * &self.moments.m0) * &self.frame.gram_det
    }
}

/// Moments of the face with the given points and dimension from its child
/// faces, each given as the moments of a class representative and the
/// group element taking it onto the child. The apex is the projection of
/// the origin onto the face.
pub fn face_moments<'a>(
    points: &[RVector],
    dim: usize,
    children: impl IntoIterator<Item = (&'a ClassMoments, &'a GroupElement)>,
) -> Result<ClassMoments, MomentError> {
    let frame = FaceFrame::from_points(points.iter().cloned(), dim)?;
    let apex = frame.origin_projection();
    let interior = interior_point(points.iter().cloned(), dim)?;
    let moments = accumulate(&frame, &apex, &interior, children, false)?;
    Ok(ClassMoments { frame, moments })
}

/// As [`face_moments`] with an arbitrary apex in the affine hull of the face.
pub fn face_moments_with_apex<'a>(
    points: &[RVector],
    dim: usize,
    apex: &RVector,
    children: impl IntoIterator<Item = (&'a ClassMoments, &'a GroupElement)>,
) -> Result<ClassMoments, MomentError> {
    let frame = FaceFrame::from_points(points.iter().cloned(), dim)?;
    let interior = interior_point(points.iter().cloned(), dim)?;
    let moments = accumulate(&frame, apex, &interior, children, false)?;
    Ok(ClassMoments { frame, moments })
}

/// Mean of the first affinely spanning points: a point of the relative interior.
fn interior_point<I: IntoIterator<Item = RVector>>(points: I, dim: usize) -> Result<RVector, MomentError> {
    let mut iter = points.into_iter();
    let first = iter.next().ok_or(MomentError::Degenerate(dim))?;
    let mut sum = first.clone();
    let mut span = Span::default();
    let mut count = 1i64;
    if dim > 0 {
        for p in iter {
            if span.insert(p.sub(&first)) {
                sum = sum.add(&p);
                count += 1;
                if span.rank() == dim {
                    break;
                }
            }
        }
    }
    if span.rank() != dim {
        return Err(MomentError::Degenerate(dim));
    }
    Ok(sum.scale(&Rational::new(1, count)))
}

/// Signed pyramid sum over the children of a face. With `invariant` set, the
/// signed height factor and the pyramid of each child class are computed
/// once and carried to every child by its group element, which is valid
/// when each element fixes both the face and the apex.
fn accumulate<'a>(
    frame: &FaceFrame,
    apex: &RVector,
    interior: &RVector,
    children: impl IntoIterator<Item = (&'a ClassMoments, &'a GroupElement)>,
    invariant: bool,
) -> Result<MomentData, MomentError> {
    let n = apex.dim();
    let d = frame.dim();
    let apex_c = frame.coords(apex);
    let interior_c = frame.coords(interior);
    let mut total = MomentData::zero(d, n);
    let mut grouped: HashMap<*const ClassMoments, (&ClassMoments, Vec<&GroupElement>)> = HashMap::new();
    for (child, g) in children {
        if child.moments.dim + 1 != d {
            return Err(MomentError::DimensionMismatch { expected: d - 1, found: child.moments.dim });
        }
        if invariant {
            grouped.entry(child as *const _).or_insert_with(|| (child, Vec::new())).1.push(g);
            continue;
        }
        let gm = g.to_rmatrix();
        let s = height_factor(frame, &child.frame.transported(&gm), &apex_c, &interior_c)?;
        if s.is_zero() {
            continue;
        }
        let base = child.moments.transported(g);
        total.add_assign(&pyramid_accumulate(&base, apex, &s)?);
    }
    let mut classes: Vec<_> = grouped.into_values().collect();
    classes.sort_by_key(|(c, _)| *c as *const ClassMoments as usize);
    for (child, gs) in classes {
        let gm = gs[0].to_rmatrix();
        let s = height_factor(frame, &child.frame.transported(&gm), &apex_c, &interior_c)?;
        if s.is_zero() {
            continue;
        }
        let pyramid = pyramid_accumulate(&child.moments, apex, &s)?;
        total.add_assign(&pyramid.transported_sum(gs));
    }
    Ok(total)
}

/// `sign(det[T; c - p]) det[T; a - p]` in the frame coordinates of the face,
/// where `T` holds the child's basis rows, `p` its anchor, `a` the apex and
/// `c` an interior point of the face.
fn height_factor(frame: &FaceFrame, child: &FaceFrame, apex_c: &RVector, interior_c: &RVector) -> Result<Rational, MomentError> {
    let p = frame.coords(&child.anchor);
    let mut rows: Vec<RVector> = child.basis.row_vectors().iter().map(|b| frame.direction_coords(b)).collect();
    rows.push(interior_c.sub(&p));
    let inward = RMatrix::from_rows(rows.clone())?.determinant()?;
    if inward.is_zero() {
        return Err(MomentError::Degenerate(frame.dim()));
    }
    *rows.last_mut().expect("non-empty") = apex_c.sub(&p);
    let height = RMatrix::from_rows(rows)?.determinant()?;
    Ok(if inward.is_negative() { -height } else { height })
}

/// Moments of every face class of a complete hierarchy, bottom-up. Level
/// `d` of the result is indexed like level `d` of the hierarchy.
pub fn hierarchy_moments(region: &Region, hierarchy: &Hierarchy) -> Result<Vec<Vec<ClassMoments>>, MomentError> {
    if !hierarchy.is_complete() {
        return Err(MomentError::Incomplete(hierarchy.min_dim));
    }
    let n = hierarchy.dim;
    let mut out: Vec<Vec<ClassMoments>> = Vec::with_capacity(n + 1);
    for d in 0..=n {
        let mut level = Vec::with_capacity(hierarchy.levels[d].len());
        for class in &hierarchy.levels[d] {
            let points = || class.face.vertices().iter().map(|&v| region.store().point(v).to_rvector());
            if d == 0 {
                level.push(ClassMoments::point(&points().next().ok_or(MomentError::Degenerate(0))?));
                continue;
            }
            let below = &out[d - 1];
            let mut links = Vec::with_capacity(class.children.len());
            for link in &class.children {
                let child = below.get(link.class).ok_or(MomentError::MissingChild { dim: d - 1, class: link.class })?;
                links.push((child, &link.transform));
            }
            let frame = FaceFrame::from_points(points(), d)?;
            let apex = frame.origin_projection();
            let interior = interior_point(points(), d)?;
            let invariant = d == n && apex.is_zero();
            let moments = accumulate(&frame, &apex, &interior, links, invariant)?;
            level.push(ClassMoments { frame, moments });
        }
        out.push(level);
    }
    Ok(out)
}

/// Volume, first moment and second-moment tensor of the whole region.
pub fn region_moments(region: &Region, hierarchy: &Hierarchy) -> Result<MomentData, MomentError> {
    let levels = hierarchy_moments(region, hierarchy)?;
    Ok(levels[hierarchy.dim][0].moments.clone())
}
