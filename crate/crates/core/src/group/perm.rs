//! Permutation representations of matrix groups on finite vector sets.

use indexmap::IndexSet;

use super::{GroupElement, GroupError};
use crate::exact::{rank_scaled, ScaledVec};

/// Operations a stabilizer chain needs from its elements.
pub trait Element: Clone + Send + Sync {
    fn image(&self, point: u32) -> u32;
    /// The element that applies `self` first and then `other`.
    fn then(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    fn is_identity(&self) -> bool;
    fn degree(&self) -> usize;
}

/// A permutation of `0..degree`, as a table of images.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Perm(Box<[u32]>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Self {
        Perm(images.into_boxed_slice())
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }
}

impl Element for Perm {
    fn image(&self, point: u32) -> u32 {
        self.0[point as usize]
    }

    fn then(&self, other: &Self) -> Self {
        Perm(self.0.iter().map(|&p| other.0[p as usize]).collect())
    }

    fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p as usize] = i as u32;
        }
        Perm(inv.into_boxed_slice())
    }

    fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &p)| i as u32 == p)
    }

    fn degree(&self) -> usize {
        self.0.len()
    }
}

/// A matrix together with the permutation it induces on an [`Action`] domain.
#[derive(Clone, Debug)]
pub struct Tracked {
    pub perm: Perm,
    pub matrix: GroupElement,
}

impl Element for Tracked {
    fn image(&self, point: u32) -> u32 {
        self.perm.image(point)
    }

    fn then(&self, other: &Self) -> Self {
        Tracked { perm: self.perm.then(&other.perm), matrix: other.matrix.mul(&self.matrix) }
    }

    fn inverse(&self) -> Self {
        Tracked { perm: self.perm.inverse(), matrix: self.matrix.inverse() }
    }

    fn is_identity(&self) -> bool {
        self.perm.is_identity()
    }

    fn degree(&self) -> usize {
        self.perm.degree()
    }
}

/// A finite set of vectors permuted by a matrix group, spanning the whole
/// space so that the permutation action is faithful.
#[derive(Debug, Clone)]
pub struct Action {
    points: IndexSet<ScaledVec>,
}

impl Action {
    /// The union of the orbit of `base` and, if needed, orbits of unit vectors
    /// until the domain spans the space.
    pub fn spanning(gens: &[GroupElement], base: &ScaledVec, cap: usize) -> Result<Self, GroupError> {
        let n = base.dim();
        let mut points: IndexSet<ScaledVec> = IndexSet::new();
        add_orbit(&mut points, gens, base.clone(), cap)?;
        let mut unit = 0;
        while rank_scaled(points.iter()) < n {
            let mut e = vec![0i64; n];
            e[unit] = 1;
            add_orbit(&mut points, gens, ScaledVec::from_ints(&e), cap)?;
            unit += 1;
        }
        Ok(Action { points })
    }

    pub fn degree(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, i: u32) -> &ScaledVec {
        &self.points[i as usize]
    }

    pub fn index_of(&self, v: &ScaledVec) -> Option<u32> {
        self.points.get_index_of(v).map(|i| i as u32)
    }

    /// The permutation induced by `g`, or `None` when `g` does not preserve the domain.
    pub fn perm_of(&self, g: &GroupElement) -> Option<Perm> {
        self.points
            .iter()
            .map(|p| self.index_of(&g.apply(p)))
            .collect::<Option<Vec<u32>>>()
            .map(Perm::from_images)
    }

    pub fn tracked(&self, g: &GroupElement) -> Option<Tracked> {
        self.perm_of(g).map(|perm| Tracked { perm, matrix: g.clone() })
    }
}

fn add_orbit(
    points: &mut IndexSet<ScaledVec>,
    gens: &[GroupElement],
    start: ScaledVec,
    cap: usize,
) -> Result<(), GroupError> {
    if !points.insert(start) {
        return Ok(());
    }
    let mut frontier = vec![points.len() - 1];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for idx in frontier {
            for g in gens {
                let y = g.apply(&points[idx]);
                if points.insert(y) {
                    if points.len() > cap {
                        return Err(GroupError::OrbitCap { cap });
                    }
                    next.push(points.len() - 1);
                }
            }
        }
        frontier = next;
    }
    Ok(())
}
