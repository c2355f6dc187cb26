//! Finite matrix groups acting on lattices: orbits, stabilizers, group orders
//! and classification of vectors into equivalence classes.

mod classify;
mod element;
mod named;
mod orbit;
mod perm;
mod random;
mod schreier;
mod stabilizer;

use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

pub use classify::{
    classify_vectors, classify_vectors_with, inner_product_profile, transformation_set, Classification, Invariant,
};
pub use element::GroupElement;
pub use named::{
    automorphism_generators, bw16_generators, bw16_h, bw16_m1, bw16_m2, bw16_permutations, bw16_s1, bw16_s2,
    bw16_s3, bw16_structured_generators, h4, h4_bar, reflection,
};
pub use orbit::{orbit, OrbitMap};
pub use perm::{Action, Element, Perm, Tracked};
pub use random::{random_element, ProductReplacement};
pub use schreier::Bsgs;
pub use stabilizer::{first_coincidence, stabilizer, GeneratedSubgroup, StabilizerOptions, StabilizerStats, SubgroupElements};

use crate::exact::ScaledVec;

/// Default bound on enumerated orbit sizes.
pub const DEFAULT_ORBIT_CAP: usize = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("no generators given")]
    NoGenerators,
    #[error("orbit exceeds the cap of {cap} vectors")]
    OrbitCap { cap: usize },
    #[error("element does not preserve the permutation domain of the group")]
    NotInGroup,
    #[error("orbit size does not divide the group order")]
    OrbitSizeMismatch,
    #[error("stabilizer incomplete after {draws} random elements")]
    DrawLimit { draws: u64 },
}

/// A matrix group with a faithful permutation action and a stabilizer chain.
#[derive(Debug, Clone)]
pub struct MatrixGroup {
    gens: Vec<GroupElement>,
    action: Arc<Action>,
    chain: Bsgs<Perm>,
}

impl MatrixGroup {
    /// Builds the chain on the permutation action induced on the orbit of
    /// `action_base`, enlarged by orbits of unit vectors until it spans.
    pub fn new(gens: Vec<GroupElement>, action_base: &ScaledVec, cap: usize) -> Result<Self, GroupError> {
        if gens.is_empty() {
            return Err(GroupError::NoGenerators);
        }
        let action = Arc::new(Action::spanning(&gens, action_base, cap)?);
        let perms: Vec<Perm> = gens.iter().map(|g| action.perm_of(g).expect("domain is closed under generators")).collect();
        let chain = Bsgs::new(Perm::identity(action.degree()), &perms);
        Ok(MatrixGroup { gens, action, chain })
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.gens
    }

    pub fn dim(&self) -> usize {
        self.gens[0].dim()
    }

    pub fn action(&self) -> &Arc<Action> {
        &self.action
    }

    pub fn order(&self) -> BigUint {
        self.chain.order()
    }

    pub fn chain(&self) -> &Bsgs<Perm> {
        &self.chain
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.action.perm_of(g).is_some_and(|p| self.chain.contains(&p))
    }

    pub fn random_elements(&self, seed: u64) -> ProductReplacement {
        ProductReplacement::new(&self.gens, seed)
    }

    pub fn orbit(
        &self,
        x: &ScaledVec,
        condition: &(dyn Fn(&ScaledVec) -> bool + Sync),
        cap: usize,
    ) -> Result<OrbitMap, GroupError> {
        orbit(x, &self.gens, condition, cap)
    }

    pub fn stabilizer(
        &self,
        x: &ScaledVec,
        orbit_size: &BigUint,
        options: StabilizerOptions,
    ) -> Result<(GeneratedSubgroup, StabilizerStats), GroupError> {
        stabilizer(x, &self.gens, &self.order(), orbit_size, self.action.clone(), options)
    }

    /// The subgroup generated by `gens`, using this group's action.
    pub fn subgroup(&self, gens: &[GroupElement]) -> Result<GeneratedSubgroup, GroupError> {
        GeneratedSubgroup::from_generators(self.action.clone(), self.dim(), gens)
    }
}

/// Order of the group generated by `gens`.
pub fn group_order(gens: &[GroupElement], action_base: &ScaledVec) -> Result<BigUint, GroupError> {
    Ok(MatrixGroup::new(gens.to_vec(), action_base, DEFAULT_ORBIT_CAP)?.order())
}
