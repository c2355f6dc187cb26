use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GroupElement;

/// Pseudo-random group elements by product replacement ("rattle" variant
/// with an accumulator), deterministic for a fixed seed.
#[derive(Debug, Clone)]
pub struct ProductReplacement {
    slots: Vec<GroupElement>,
    acc: GroupElement,
    rng: ChaCha8Rng,
}

const MIN_SLOTS: usize = 10;
const WARMUP: usize = 100;

impl ProductReplacement {
    pub fn new(gens: &[GroupElement], seed: u64) -> Self {
        assert!(!gens.is_empty(), "product replacement needs at least one generator");
        let n = gens[0].dim();
        let count = MIN_SLOTS.max(2 * gens.len());
        let slots = (0..count).map(|i| gens[i % gens.len()].clone()).collect();
        let mut pr = ProductReplacement { slots, acc: GroupElement::identity(n), rng: ChaCha8Rng::seed_from_u64(seed) };
        for _ in 0..WARMUP {
            pr.step();
        }
        pr
    }

    fn step(&mut self) {
        let k = self.slots.len();
        let i = self.rng.random_range(0..k);
        let mut j = self.rng.random_range(0..k - 1);
        if j >= i {
            j += 1;
        }
        let other = if self.rng.random_bool(0.5) { self.slots[j].clone() } else { self.slots[j].inverse() };
        self.slots[i] = if self.rng.random_bool(0.5) { self.slots[i].mul(&other) } else { other.mul(&self.slots[i]) };
        self.acc = self.acc.mul(&self.slots[i]);
    }

    pub fn next_element(&mut self) -> GroupElement {
        self.step();
        self.acc.clone()
    }
}

impl Iterator for ProductReplacement {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        Some(self.next_element())
    }
}

/// One pseudo-random element of the group generated by `gens`.
pub fn random_element(gens: &[GroupElement], seed: u64) -> GroupElement {
    ProductReplacement::new(gens, seed).next_element()
}
