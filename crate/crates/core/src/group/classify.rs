use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;

use super::orbit::orbit;
use super::stabilizer::GeneratedSubgroup;
use super::{GroupElement, GroupError};
use crate::exact::{Rational, ScaledVec};

/// A group invariant of a vector: counts of distinct values.
pub type Invariant = Vec<(Rational, usize)>;

/// Partition of a vector set into classes under a group, with one
/// transformation per vector taking its class representative to it.
#[derive(Debug, Clone)]
pub struct Classification {
    vectors: Vec<ScaledVec>,
    index: HashMap<ScaledVec, usize>,
    class_of: Vec<usize>,
    transform: Vec<GroupElement>,
    reps: Vec<usize>,
}

impl Classification {
    pub fn num_classes(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> impl Iterator<Item = &ScaledVec> {
        self.reps.iter().map(|&i| &self.vectors[i])
    }

    pub fn representative(&self, class: usize) -> &ScaledVec {
        &self.vectors[self.reps[class]]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.reps.len()];
        for &c in &self.class_of {
            sizes[c] += 1;
        }
        sizes
    }

    pub fn class_of(&self, v: &ScaledVec) -> Option<usize> {
        self.index.get(v).map(|&i| self.class_of[i])
    }

    pub fn rep_of(&self, v: &ScaledVec) -> Option<&ScaledVec> {
        self.class_of(v).map(|c| self.representative(c))
    }

    /// `g` with `g * rep_of(v) = v`.
    pub fn transform_of(&self, v: &ScaledVec) -> Option<&GroupElement> {
        self.index.get(v).map(|&i| &self.transform[i])
    }

    /// Streams every group element taking `x` to `y`, given the stabilizer of
    /// their common representative; empty when they are inequivalent.
    pub fn transformations<'a>(
        &'a self,
        x: &ScaledVec,
        y: &ScaledVec,
        rep_stabilizer: impl Fn(usize) -> &'a GeneratedSubgroup,
    ) -> Box<dyn Iterator<Item = GroupElement> + 'a> {
        match (self.class_of(x), self.class_of(y)) {
            (Some(cx), Some(cy)) if cx == cy => {
                let gx = self.transform_of(x).expect("classified");
                let gy = self.transform_of(y).expect("classified");
                Box::new(transformation_set(gx, gy, rep_stabilizer(cx)))
            }
            _ => Box::new(std::iter::empty()),
        }
    }
}

/// `g_y g_s g_x^-1` for every `g_s` in the stabilizer, streamed.
pub fn transformation_set<'a>(
    gx: &GroupElement,
    gy: &GroupElement,
    stab: &'a GeneratedSubgroup,
) -> impl Iterator<Item = GroupElement> + 'a {
    let gx_inv = gx.inverse();
    let gy = gy.clone();
    stab.elements().map(move |gs| gy.mul(&gs).mul(&gx_inv))
}

/// Multiset of inner products with a fixed group-invariant vector set. Two
/// vectors with different profiles are inequivalent under any group that
/// preserves the set.
pub fn inner_product_profile(reference: &[ScaledVec], x: &ScaledVec) -> Invariant {
    let mut counts: BTreeMap<i128, usize> = BTreeMap::new();
    let den = reference.iter().fold(1i128, |acc, r| num_integer::lcm(acc, i128::from(r.den())));
    for r in reference {
        let scale = den / i128::from(r.den());
        *counts.entry(x.raw_dot(r) * scale).or_insert(0) += 1;
    }
    let total_den = den * i128::from(x.den());
    let mut out: Invariant = counts
        .into_iter()
        .map(|(k, c)| (Rational::new(num_bigint::BigInt::from(k), num_bigint::BigInt::from(total_den)), c))
        .collect();
    out.push((x.norm2(), usize::MAX));
    out
}

/// Classifies by squared length and orbit enumeration.
pub fn classify_vectors(vectors: &[ScaledVec], gens: &[GroupElement], cap: usize) -> Result<Classification, GroupError> {
    classify_vectors_with(vectors, gens, &|v: &ScaledVec| vec![(v.norm2(), 1)], cap)
}

/// Classifies `vectors`, first separating them by `invariant` and then
/// merging vectors with equal invariants through orbit enumeration (capped).
pub fn classify_vectors_with(
    vectors: &[ScaledVec],
    gens: &[GroupElement],
    invariant: &(dyn Fn(&ScaledVec) -> Invariant + Sync),
    cap: usize,
) -> Result<Classification, GroupError> {
    let mut uniq: Vec<ScaledVec> = Vec::with_capacity(vectors.len());
    let mut index: HashMap<ScaledVec, usize> = HashMap::with_capacity(vectors.len());
    for v in vectors {
        if !index.contains_key(v) {
            index.insert(v.clone(), uniq.len());
            uniq.push(v.clone());
        }
    }
    let invariants: Vec<Invariant> = uniq.par_iter().map(|v| invariant(v)).collect();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut by_inv: HashMap<&Invariant, usize> = HashMap::new();
    for (i, inv) in invariants.iter().enumerate() {
        let g = *by_inv.entry(inv).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }

    let n = uniq.first().map_or(0, ScaledVec::dim);
    let mut class_of = vec![usize::MAX; uniq.len()];
    let mut transform = vec![None; uniq.len()];
    let mut reps = Vec::new();
    for members in &groups {
        if members.len() == 1 {
            class_of[members[0]] = reps.len();
            transform[members[0]] = Some(GroupElement::identity(n));
            reps.push(members[0]);
            continue;
        }
        let member_set: HashSet<&ScaledVec> = members.iter().map(|&i| &uniq[i]).collect();
        for &m in members {
            if class_of[m] != usize::MAX {
                continue;
            }
            let class = reps.len();
            reps.push(m);
            let om = orbit(&uniq[m], gens, &|y: &ScaledVec| member_set.contains(y), cap)?;
            for (y, g) in om.stored_pairs() {
                let yi = index[y];
                if class_of[yi] == usize::MAX {
                    class_of[yi] = class;
                    transform[yi] = Some(g.clone());
                }
            }
        }
    }
    let transform = transform.into_iter().map(|t| t.expect("every vector is assigned")).collect();
    Ok(Classification { vectors: uniq, index, class_of, transform, reps })
}
