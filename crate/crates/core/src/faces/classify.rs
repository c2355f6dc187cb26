use std::collections::HashMap;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use super::equivalence::{find_transformation, signature, FaceSignature};
use super::region::{Face, Region};
use super::symmetry::SymmetryContext;
use crate::group::GroupElement;

/// One equivalence class of faces, represented by the first face seen.
#[derive(Debug, Clone, Serialize)]
pub struct FaceClass {
    pub representative: Face,
    #[serde(serialize_with = "crate::serde_util::opt_display")]
    pub orbit_size: Option<BigUint>,
    pub members_constructed: usize,
}

/// Incremental face classification under one symmetry context.
pub struct FaceClassifier<'a> {
    region: &'a Region,
    ctx: &'a SymmetryContext,
    classes: Vec<FaceClass>,
    by_signature: HashMap<FaceSignature, Vec<usize>>,
}

impl<'a> FaceClassifier<'a> {
    pub fn new(region: &'a Region, ctx: &'a SymmetryContext) -> Self {
        FaceClassifier { region, ctx, classes: Vec::new(), by_signature: HashMap::new() }
    }

    pub fn classes(&self) -> &[FaceClass] {
        &self.classes
    }

    pub fn into_classes(self) -> Vec<FaceClass> {
        self.classes
    }

    /// Class of `face` and a group element taking the class representative to
    /// it. A face inequivalent to all known classes founds a new class.
    pub fn classify(&mut self, face: &Face) -> (usize, GroupElement) {
        let sig = signature(face, self.ctx);
        let candidates = self.by_signature.get(&sig).map(Vec::as_slice).unwrap_or(&[]);
        let hit = candidates.par_iter().find_map_first(|&c| {
            if self.classes[c].representative == *face {
                return Some((c, GroupElement::identity(self.region.dim())));
            }
            find_transformation(self.region, self.ctx, &self.classes[c].representative, face).map(|g| (c, g))
        });
        match hit {
            Some((c, g)) => {
                self.classes[c].members_constructed += 1;
                (c, g)
            }
            None => {
                let c = self.classes.len();
                self.classes.push(FaceClass { representative: face.clone(), orbit_size: None, members_constructed: 1 });
                self.by_signature.entry(sig).or_default().push(c);
                (c, GroupElement::identity(self.region.dim()))
            }
        }
    }
}

/// Classifies faces through a chain of symmetry contexts: each context sees
/// only the representatives left by the previous one, and the final context
/// decides the returned classes. Every context must classify the vertices
/// and normals of the faces it receives.
pub fn classify_faces(region: &Region, chain: &[&SymmetryContext], faces: &[Face]) -> Vec<FaceClass> {
    let mut current: Vec<Face> = faces.to_vec();
    let mut counts: Vec<usize> = vec![1; faces.len()];
    let mut out = Vec::new();
    for ctx in chain {
        let mut classifier = FaceClassifier::new(region, ctx);
        let mut merged: Vec<usize> = Vec::new();
        for (face, &k) in current.iter().zip(&counts) {
            let (c, _) = classifier.classify(face);
            if c == merged.len() {
                merged.push(0);
            }
            merged[c] += k;
        }
        out = classifier.into_classes();
        for (class, &k) in out.iter_mut().zip(&merged) {
            class.members_constructed = k;
        }
        current = out.iter().map(|c| c.representative.clone()).collect();
        counts = merged;
    }
    out
}
