//! Deterministic Schreier–Sims: a base and strong generating set for a
//! permutation group, built incrementally so that generators can be added later.

use num_bigint::BigUint;

use super::perm::Element;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Level<E> {
    base: u32,
    gens: Vec<usize>,
    orbit: Vec<u32>,
    /// Position of each point in `orbit`, or `NONE`.
    pos: Vec<u32>,
    /// `trans[k]` maps `base` to `orbit[k]`.
    trans: Vec<E>,
    trans_inv: Vec<E>,
    /// Number of level generators already paired with each orbit point.
    processed: Vec<usize>,
}

impl<E: Element> Level<E> {
    fn new(base: u32, degree: usize, identity: &E) -> Self {
        let mut pos = vec![NONE; degree];
        pos[base as usize] = 0;
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            pos,
            trans: vec![identity.clone()],
            trans_inv: vec![identity.clone()],
            processed: vec![0],
        }
    }

    /// Extends the orbit after new generators were appended.
    fn extend_orbit(&mut self, strong: &[E]) {
        let mut k = 0;
        while k < self.orbit.len() {
            let p = self.orbit[k];
            for &gi in &self.gens {
                let q = strong[gi].image(p);
                if self.pos[q as usize] == NONE {
                    let t = self.trans[k].then(&strong[gi]);
                    self.pos[q as usize] = self.orbit.len() as u32;
                    self.orbit.push(q);
                    self.trans_inv.push(t.inverse());
                    self.trans.push(t);
                    self.processed.push(0);
                }
            }
            k += 1;
        }
    }
}

/// Stabilizer chain of the group generated by a set of elements.
#[derive(Debug, Clone)]
pub struct Bsgs<E> {
    identity: E,
    strong: Vec<E>,
    levels: Vec<Level<E>>,
}

impl<E: Element> Bsgs<E> {
    pub fn trivial(identity: E) -> Self {
        Bsgs { identity, strong: Vec::new(), levels: Vec::new() }
    }

    pub fn new(identity: E, gens: &[E]) -> Self {
        let mut b = Self::trivial(identity);
        for g in gens {
            b.insert(g);
        }
        b
    }

    pub fn degree(&self) -> usize {
        self.identity.degree()
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn strong_generators(&self) -> &[E] {
        &self.strong
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().map(|l| BigUint::from(l.orbit.len())).product()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Strips `g` through the chain; returns the residue and the level where it stopped.
    pub fn sift(&self, g: &E) -> (E, usize) {
        let mut h = g.clone();
        for (i, level) in self.levels.iter().enumerate() {
            let p = h.image(level.base);
            let k = level.pos[p as usize];
            if k == NONE {
                return (h, i);
            }
            if k != 0 {
                h = h.then(&level.trans_inv[k as usize]);
            }
        }
        let depth = self.levels.len();
        (h, depth)
    }

    pub fn contains(&self, g: &E) -> bool {
        self.sift(g).0.is_identity()
    }

    /// Adds `g` to the generated group. Returns false if it was already a member.
    pub fn insert(&mut self, g: &E) -> bool {
        let (res, depth) = self.sift(g);
        if res.is_identity() {
            return false;
        }
        self.add_strong(res, 0, depth);
        self.complete(depth);
        true
    }

    fn moved_point(g: &E) -> u32 {
        (0..g.degree() as u32).find(|&p| g.image(p) != p).expect("non-identity element moves a point")
    }

    /// Registers `res` as a strong generator for levels `from..=to`, creating a level if needed.
    fn add_strong(&mut self, res: E, from: usize, to: usize) {
        if to == self.levels.len() {
            let b = Self::moved_point(&res);
            self.levels.push(Level::new(b, self.degree(), &self.identity));
        }
        let idx = self.strong.len();
        self.strong.push(res);
        for l in from..=to {
            self.levels[l].gens.push(idx);
            let strong = &self.strong;
            self.levels[l].extend_orbit(strong);
        }
    }

    /// Runs the Schreier–Sims test on levels `top` down to 0 until every
    /// Schreier generator sifts to the identity.
    fn complete(&mut self, top: usize) {
        let mut i = top.min(self.levels.len() - 1) as isize;
        'outer: while i >= 0 {
            let li = i as usize;
            let mut k = 0;
            while k < self.levels[li].orbit.len() {
                while self.levels[li].processed[k] < self.levels[li].gens.len() {
                    let q = self.levels[li].processed[k];
                    let level = &self.levels[li];
                    let s = &self.strong[level.gens[q]];
                    let img = s.image(level.orbit[k]);
                    let j = level.pos[img as usize] as usize;
                    let schreier = level.trans[k].then(s).then(&level.trans_inv[j]);
                    self.levels[li].processed[k] = q + 1;
                    let (res, depth) = self.sift_from(&schreier, li + 1);
                    if !res.is_identity() {
                        self.add_strong(res, li + 1, depth);
                        i = depth as isize;
                        continue 'outer;
                    }
                }
                k += 1;
            }
            i -= 1;
        }
    }

    fn sift_from(&self, g: &E, start: usize) -> (E, usize) {
        let mut h = g.clone();
        for i in start..self.levels.len() {
            let level = &self.levels[i];
            let p = h.image(level.base);
            let k = level.pos[p as usize];
            if k == NONE {
                return (h, i);
            }
            if k != 0 {
                h = h.then(&level.trans_inv[k as usize]);
            }
        }
        (h, self.levels.len())
    }

    /// The transversal of each level, top level first.
    pub fn transversals(&self) -> Vec<&[E]> {
        self.levels.iter().map(|l| l.trans.as_slice()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::super::perm::Perm;
    use super::*;

    fn perm(images: &[u32]) -> Perm {
        Perm::from_images(images.to_vec())
    }

    #[test]
    fn symmetric_groups() {
        let n = 6;
        let cycle: Vec<u32> = (0..n).map(|i| (i + 1) % n).collect();
        let mut swap: Vec<u32> = (0..n).collect();
        swap.swap(0, 1);
        let b = Bsgs::new(Perm::identity(n as usize), &[perm(&cycle), perm(&swap)]);
        assert_eq!(b.order(), BigUint::from(720u32));
        assert!(b.contains(&perm(&[1, 0, 3, 2, 5, 4])));
    }

    #[test]
    fn alternating_and_cyclic() {
        let a = perm(&[1, 2, 0, 3, 4]);
        let c = perm(&[1, 2, 3, 4, 0]);
        let b = Bsgs::new(Perm::identity(5), &[a, c]);
        assert_eq!(b.order(), BigUint::from(60u32));
        assert!(!b.contains(&perm(&[1, 0, 2, 3, 4])));
        let cyc = Bsgs::new(Perm::identity(5), &[perm(&[1, 2, 3, 4, 0])]);
        assert_eq!(cyc.order(), BigUint::from(5u32));
        assert_eq!(Bsgs::new(Perm::identity(3), &[]).order(), BigUint::from(1u32));
    }
}
