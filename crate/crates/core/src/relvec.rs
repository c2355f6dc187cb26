//! Relevant vectors: the lattice vectors that define facets of the Voronoi region.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::exact::{Rational, ScaledVec};
use crate::lattice::{Lattice, LatticePoint};

/// All relevant vectors of a lattice, sorted by squared length and then by coordinates.
#[derive(Debug, Clone)]
pub struct RelevantVectorSet {
    vectors: Vec<LatticePoint>,
    scaled: Vec<ScaledVec>,
    norms: Vec<Rational>,
    by_norm: BTreeMap<Rational, usize>,
    index: HashMap<ScaledVec, usize>,
}

/// Squared length and count, as reported by [`RelevantVectorSet::summary`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormCount {
    pub norm2: Rational,
    pub count: usize,
}

impl RelevantVectorSet {
    fn from_parts(mut items: Vec<(LatticePoint, ScaledVec)>) -> Self {
        items.sort_by(|a, b| a.1.norm2().cmp(&b.1.norm2()).then_with(|| a.0.coords.cmp(&b.0.coords)));
        let mut by_norm = BTreeMap::new();
        let mut vectors = Vec::with_capacity(items.len());
        let mut scaled = Vec::with_capacity(items.len());
        let mut norms = Vec::with_capacity(items.len());
        let mut index = HashMap::with_capacity(items.len());
        for (i, (p, s)) in items.into_iter().enumerate() {
            let n2 = s.norm2();
            *by_norm.entry(n2.clone()).or_insert(0) += 1;
            index.insert(s.clone(), i);
            norms.push(n2);
            scaled.push(s);
            vectors.push(p);
        }
        RelevantVectorSet { vectors, scaled, norms, by_norm, index }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[LatticePoint] {
        &self.vectors
    }

    pub fn by_norm(&self) -> &BTreeMap<Rational, usize> {
        &self.by_norm
    }

    pub fn summary(&self) -> Vec<NormCount> {
        self.by_norm.iter().map(|(n, &c)| NormCount { norm2: n.clone(), count: c }).collect()
    }

    pub fn norm2(&self, i: usize) -> &Rational {
        &self.norms[i]
    }

    pub(crate) fn scaled(&self) -> &[ScaledVec] {
        &self.scaled
    }

    pub(crate) fn index_of(&self, v: &ScaledVec) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Position of a vector in this set.
    pub fn position(&self, v: &crate::exact::RVector) -> Option<usize> {
        ScaledVec::from_rvector(v).ok().and_then(|s| self.index_of(&s))
    }
}

/// Enumerates every relevant vector by examining the midpoint of each nonzero
/// coset of `2L`: the coset contributes `±(w - w')` exactly when its midpoint
/// has precisely two closest lattice points `w, w'`.
pub fn relevant_vectors(lattice: &Lattice) -> RelevantVectorSet {
    let n = lattice.dim();
    assert!(n < 63, "midpoint enumeration needs fewer than 63 dimensions");
    let items: Vec<(LatticePoint, ScaledVec)> = (1u64..1u64 << n)
        .into_par_iter()
        .flat_map_iter(|mask| {
            let coeffs: Vec<i64> = (0..n).map(|i| ((mask >> i) & 1) as i64).collect();
            let mid = lattice.point_scaled(&coeffs).scale(1, 2);
            let ties = lattice.closest_scaled(&mid);
            let mut out = Vec::new();
            if let [(ca, pa), (cb, pb)] = ties.as_slice() {
                let r = pa.sub(pb);
                let rc: Vec<i64> = ca.iter().zip(cb).map(|(a, b)| a - b).collect();
                let neg_c: Vec<i64> = rc.iter().map(|c| -c).collect();
                let neg = r.neg();
                out.push((LatticePoint { coeffs: rc, coords: r.to_rvector() }, r));
                out.push((LatticePoint { coeffs: neg_c, coords: neg.to_rvector() }, neg));
            }
            out
        })
        .collect();
    RelevantVectorSet::from_parts(items)
}

/// Squared packing radius (a quarter of the minimal squared length) and kissing number.
pub fn packing_kissing(set: &RelevantVectorSet) -> Option<(Rational, usize)> {
    let (min, &count) = set.by_norm.iter().next()?;
    Some((min * Rational::new(1, 4), count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_lattice;

    #[test]
    fn cubic_lattice() {
        let set = relevant_vectors(&make_lattice("Zn(3)").unwrap());
        assert_eq!(set.len(), 6);
        assert_eq!(set.by_norm().get(&Rational::one()), Some(&6));
        let (p, k) = packing_kissing(&relevant_vectors(&make_lattice("Z2").unwrap())).unwrap();
        assert_eq!((p, k), (Rational::new(1, 4), 4));
    }

    #[test]
    fn d4_roots() {
        let set = relevant_vectors(&make_lattice("D4").unwrap());
        assert_eq!(set.len(), 24);
        assert_eq!(packing_kissing(&set).unwrap(), (Rational::new(1, 2), 24));
    }
}
