use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::perm::{Action, Tracked};
use super::random::ProductReplacement;
use super::schreier::Bsgs;
use super::{GroupElement, GroupError};
use crate::exact::ScaledVec;

/// A subgroup given by generators, with a stabilizer chain for membership
/// tests and element enumeration.
#[derive(Debug, Clone)]
pub struct GeneratedSubgroup {
    generators: Vec<GroupElement>,
    chain: Bsgs<Tracked>,
    action: Arc<Action>,
}

impl GeneratedSubgroup {
    pub fn trivial(action: Arc<Action>, n: usize) -> Self {
        let id = Tracked { perm: super::Perm::identity(action.degree()), matrix: GroupElement::identity(n) };
        GeneratedSubgroup { generators: Vec::new(), chain: Bsgs::trivial(id), action }
    }

    /// The subgroup generated by `gens`, which must preserve the action domain.
    pub fn from_generators(action: Arc<Action>, n: usize, gens: &[GroupElement]) -> Result<Self, GroupError> {
        let mut s = Self::trivial(action, n);
        for g in gens {
            s.insert(g)?;
        }
        Ok(s)
    }

    /// Adds `g`; returns false if it was already a member.
    pub fn insert(&mut self, g: &GroupElement) -> Result<bool, GroupError> {
        let t = self.action.tracked(g).ok_or(GroupError::NotInGroup)?;
        let added = self.chain.insert(&t);
        if added {
            self.generators.push(g.clone());
        }
        Ok(added)
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn order(&self) -> BigUint {
        self.chain.order()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match self.action.tracked(g) {
            Some(t) => self.chain.contains(&t),
            None => false,
        }
    }

    /// Streams every element exactly once, holding one partial product per chain level.
    pub fn elements(&self) -> SubgroupElements<'_> {
        let trans = self.chain.transversals();
        let n = self.action.point(0).dim();
        SubgroupElements::new(trans, n)
    }
}

/// Iterator over all elements of a [`GeneratedSubgroup`].
pub struct SubgroupElements<'a> {
    trans: Vec<&'a [Tracked]>,
    idx: Vec<usize>,
    prefix: Vec<GroupElement>,
    done: bool,
    identity: GroupElement,
}

impl<'a> SubgroupElements<'a> {
    fn new(trans: Vec<&'a [Tracked]>, n: usize) -> Self {
        let identity = GroupElement::identity(n);
        let mut it = SubgroupElements { idx: vec![0; trans.len()], prefix: Vec::new(), trans, done: false, identity };
        it.rebuild_from(0);
        it
    }

    fn rebuild_from(&mut self, level: usize) {
        self.prefix.truncate(level);
        for l in level..self.trans.len() {
            let prev = if l == 0 { &self.identity } else { &self.prefix[l - 1] };
            let next = prev.mul(&self.trans[l][self.idx[l]].matrix);
            self.prefix.push(next);
        }
    }
}

impl Iterator for SubgroupElements<'_> {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        if self.done {
            return None;
        }
        let current = self.prefix.last().cloned().unwrap_or_else(|| self.identity.clone());
        let mut l = self.trans.len();
        loop {
            if l == 0 {
                self.done = true;
                break;
            }
            l -= 1;
            self.idx[l] += 1;
            if self.idx[l] < self.trans[l].len() {
                self.rebuild_from(l);
                break;
            }
            self.idx[l] = 0;
        }
        Some(current)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        if self.done {
            (0, Some(0))
        } else {
            (1, None)
        }
    }
}

/// Options for the randomized stabilizer search.
#[derive(Debug, Clone, Copy)]
pub struct StabilizerOptions {
    pub seed: u64,
    pub max_draws: u64,
}

impl Default for StabilizerOptions {
    fn default() -> Self {
        StabilizerOptions { seed: 0x5eed, max_draws: 20_000_000 }
    }
}

/// Counters from a stabilizer run.
#[derive(Debug, Clone, Serialize)]
pub struct StabilizerStats {
    pub draws: u64,
    pub first_coincidence: Option<u64>,
    pub coincidences: u64,
}

/// Stabilizer of `x` when the group order and the orbit size of `x` are known:
/// random elements `g` are recorded by their image `g x`, and each repeated
/// image `g x = g' x` yields the stabilizing element `g^-1 g'`. The search ends
/// once the generated subgroup has order `|G| / orbit_size`.
pub fn stabilizer(
    x: &ScaledVec,
    gens: &[GroupElement],
    group_order: &BigUint,
    orbit_size: &BigUint,
    action: Arc<Action>,
    options: StabilizerOptions,
) -> Result<(GeneratedSubgroup, StabilizerStats), GroupError> {
    let (target, rem) = group_order.div_rem(orbit_size);
    if !rem.is_zero() || target.is_zero() {
        return Err(GroupError::OrbitSizeMismatch);
    }
    let n = x.dim();
    let mut stab = GeneratedSubgroup::trivial(action, n);
    let mut stats = StabilizerStats { draws: 0, first_coincidence: None, coincidences: 0 };
    if target.is_one() {
        return Ok((stab, stats));
    }
    let mut seen: HashMap<ScaledVec, GroupElement> = HashMap::new();
    seen.insert(x.clone(), GroupElement::identity(n));
    let mut source = ProductReplacement::new(gens, options.seed);
    while stats.draws < options.max_draws {
        stats.draws += 1;
        let g = source.next_element();
        let image = g.apply(x);
        match seen.get(&image) {
            Some(prev) => {
                stats.coincidences += 1;
                stats.first_coincidence.get_or_insert(stats.draws);
                let gs = g.inverse().mul(prev);
                if !gs.is_identity() && stab.insert(&gs)? && stab.order() == target {
                    return Ok((stab, stats));
                }
            }
            None => {
                seen.insert(image, g);
            }
        }
    }
    Err(GroupError::DrawLimit { draws: options.max_draws })
}

/// Number of random elements drawn until two of them first map `x` to the same image.
pub fn first_coincidence(x: &ScaledVec, gens: &[GroupElement], seed: u64, max_draws: u64) -> Option<u64> {
    let mut seen = std::collections::HashSet::new();
    seen.insert(x.clone());
    let mut source = ProductReplacement::new(gens, seed);
    for draw in 1..=max_draws {
        if !seen.insert(source.next_element().apply(x)) {
            return Some(draw);
        }
    }
    None
}
