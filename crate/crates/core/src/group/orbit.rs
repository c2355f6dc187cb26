use std::collections::HashMap;

use indexmap::IndexSet;
use rayon::prelude::*;

use super::{GroupElement, GroupError};
use crate::exact::{RVector, ScaledVec};

/// The orbit of a base vector, with transformations from the base for the
/// orbit members selected by a storage condition.
#[derive(Debug, Clone)]
pub struct OrbitMap {
    orbit: IndexSet<ScaledVec>,
    transforms: HashMap<u32, GroupElement>,
}

impl OrbitMap {
    pub fn base(&self) -> &ScaledVec {
        &self.orbit[0]
    }

    pub fn len(&self) -> usize {
        self.orbit.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbit.is_empty()
    }

    pub fn contains(&self, v: &ScaledVec) -> bool {
        self.orbit.contains(v)
    }

    pub fn index_of(&self, v: &ScaledVec) -> Option<usize> {
        self.orbit.get_index_of(v)
    }

    pub fn members(&self) -> impl Iterator<Item = &ScaledVec> {
        self.orbit.iter()
    }

    pub fn vectors(&self) -> impl Iterator<Item = RVector> + '_ {
        self.orbit.iter().map(ScaledVec::to_rvector)
    }

    /// A stored `g` with `g * base = v`.
    pub fn transform(&self, v: &ScaledVec) -> Option<&GroupElement> {
        self.index_of(v).and_then(|i| self.transforms.get(&(i as u32)))
    }

    pub fn stored(&self) -> usize {
        self.transforms.len()
    }

    pub fn stored_pairs(&self) -> impl Iterator<Item = (&ScaledVec, &GroupElement)> {
        self.transforms.iter().map(|(&i, g)| (&self.orbit[i as usize], g))
    }
}

/// Breadth-first orbit enumeration. The base always receives the identity;
/// another member `y` receives a transformation only if `condition(y)`.
/// Each round applies every generator to the previous round's new vectors,
/// in parallel, and merges the images in a deterministic order.
pub fn orbit(
    x: &ScaledVec,
    gens: &[GroupElement],
    condition: &(dyn Fn(&ScaledVec) -> bool + Sync),
    cap: usize,
) -> Result<OrbitMap, GroupError> {
    if gens.is_empty() {
        return Err(GroupError::NoGenerators);
    }
    let n = x.dim();
    let mut orbit = IndexSet::new();
    orbit.insert(x.clone());
    let mut transforms = HashMap::new();
    transforms.insert(0u32, GroupElement::identity(n));
    let mut pool: Vec<(u32, GroupElement)> = vec![(0, GroupElement::identity(n))];
    while !pool.is_empty() {
        let images: Vec<Vec<(ScaledVec, usize)>> = pool
            .par_iter()
            .map(|(idx, _)| gens.iter().enumerate().map(|(gi, g)| (g.apply(&orbit[*idx as usize]), gi)).collect())
            .collect();
        let mut new_pool = Vec::new();
        for ((_, h), imgs) in pool.iter().zip(images) {
            for (y, gi) in imgs {
                if orbit.contains(&y) {
                    continue;
                }
                if orbit.len() >= cap {
                    return Err(GroupError::OrbitCap { cap });
                }
                let keep = condition(&y);
                let (idx, _) = orbit.insert_full(y);
                let h2 = gens[gi].mul(h);
                if keep {
                    transforms.insert(idx as u32, h2.clone());
                }
                new_pool.push((idx as u32, h2));
            }
        }
        pool = new_pool;
    }
    Ok(OrbitMap { orbit, transforms })
}
