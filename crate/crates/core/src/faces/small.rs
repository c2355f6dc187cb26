use std::collections::BTreeSet;

use rayon::prelude::*;

use super::region::Region;
use super::store::VertexStore;
use super::FaceError;
use crate::exact::{rank_scaled, solve, RMatrix, RVector, Rational, ScaledVec};
use crate::lattice::Lattice;
use crate::relvec::{relevant_vectors, RelevantVectorSet};

/// Largest dimension accepted by [`enumerate_vertices_small`].
pub const SMALL_DIM_CAP: usize = 4;

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Every vertex of the Voronoi region, found by intersecting the bisectors of
/// each `n`-subset of relevant vectors and keeping the points in the region.
pub fn enumerate_vertices_small(lattice: &Lattice, relvecs: &RelevantVectorSet) -> Result<Vec<RVector>, FaceError> {
    let n = lattice.dim();
    if n > SMALL_DIM_CAP {
        return Err(FaceError::DimensionCap { dim: n, cap: SMALL_DIM_CAP });
    }
    let rs = relvecs.scaled();
    let found: BTreeSet<RVector> = combinations(rs.len(), n)
        .into_par_iter()
        .filter_map(|subset| {
            if rank_scaled(subset.iter().map(|&i| &rs[i])) < n {
                return None;
            }
            let a = RMatrix::from_rows(subset.iter().map(|&i| rs[i].to_rvector()).collect()).ok()?;
            let b: RVector = subset.iter().map(|&i| rs[i].norm2() * Rational::new(1, 2)).collect();
            let x = solve(&a, &b).ok()?;
            lattice.in_voronoi(&x).ok()?.then_some(x)
        })
        .collect();
    Ok(found.into_iter().collect())
}

/// True when `p` lies in the Voronoi region and the lattice points closest to
/// it, other than the origin, span the space.
pub fn verify_vertex(lattice: &Lattice, p: &RVector) -> bool {
    if p.dim() != lattice.dim() {
        return false;
    }
    let Ok(sp) = ScaledVec::from_rvector(p) else {
        return false;
    };
    let closest = lattice.closest_scaled(&sp);
    if !closest.iter().any(|(_, q)| q.is_zero()) {
        return false;
    }
    let others: Vec<ScaledVec> = closest.into_iter().map(|(_, q)| q).filter(|q| !q.is_zero()).collect();
    rank_scaled(others.iter()) == lattice.dim()
}

impl Region {
    /// The complete region of a lattice of dimension at most four.
    pub fn enumerate(lattice: &Lattice) -> Result<Region, FaceError> {
        let relvecs = relevant_vectors(lattice);
        let vertices = enumerate_vertices_small(lattice, &relvecs)?;
        let mut store = VertexStore::new();
        for v in &vertices {
            store.insert_scanning(ScaledVec::from_rvector(v)?, &relvecs);
        }
        Ok(Region::new(lattice.dim(), relvecs, store, true))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combination_counts() {
        assert_eq!(combinations(24, 4).len(), 10626);
        assert_eq!(combinations(3, 3).len(), 1);
        assert!(combinations(2, 3).is_empty());
    }
}
