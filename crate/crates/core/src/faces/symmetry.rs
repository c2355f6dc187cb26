use num_bigint::BigUint;

use super::region::Region;
use super::FaceError;
use crate::exact::ScaledVec;
use crate::group::{classify_vectors, GeneratedSubgroup, GroupElement, MatrixGroup, StabilizerOptions, DEFAULT_ORBIT_CAP};

const ROOT: u32 = u32::MAX;
pub(crate) const UNCLASSIFIED: u32 = u32::MAX;

/// Transformations from class representatives, either stored per vector or
/// recovered from a Schreier forest: vector `i` is `gens[step[i]]` applied
/// to `parent[i]`, and a root `i` is `roots[parent[i]]` applied to its
/// class representative.
#[derive(Debug, Clone)]
pub(crate) enum Transforms {
    Stored(Vec<GroupElement>),
    Forest { gens: Vec<GroupElement>, parent: Vec<u32>, step: Vec<u32>, roots: Vec<GroupElement> },
}

impl Transforms {
    fn get(&self, i: u32) -> GroupElement {
        match self {
            Transforms::Stored(t) => t[i as usize].clone(),
            Transforms::Forest { gens, parent, step, roots } => {
                let mut word: Vec<u32> = Vec::new();
                let mut cur = i as usize;
                while step[cur] != ROOT {
                    word.push(step[cur]);
                    cur = parent[cur] as usize;
                }
                let mut g = roots[parent[cur] as usize].clone();
                for &s in word.iter().rev() {
                    g = gens[s as usize].mul(&g);
                }
                g
            }
        }
    }
}

/// Builder for a Schreier forest over a growing vector store.
#[derive(Debug, Clone, Default)]
pub(crate) struct ForestBuilder {
    pub gens: Vec<GroupElement>,
    pub parent: Vec<u32>,
    pub step: Vec<u32>,
    pub roots: Vec<GroupElement>,
    pub class: Vec<u32>,
}

impl ForestBuilder {
    pub fn add_gens(&mut self, gens: &[GroupElement]) -> u32 {
        let offset = self.gens.len() as u32;
        self.gens.extend_from_slice(gens);
        offset
    }

    pub fn push_root(&mut self, class: u32, transform: GroupElement) {
        self.parent.push(self.roots.len() as u32);
        self.step.push(ROOT);
        self.roots.push(transform);
        self.class.push(class);
    }

    pub fn push_child(&mut self, parent: u32, gen: u32) {
        let class = self.class[parent as usize];
        self.parent.push(parent);
        self.step.push(gen);
        self.class.push(class);
    }

    pub fn into_classes(self, reps: Vec<u32>, stabilizers: Vec<GeneratedSubgroup>) -> VectorClasses {
        let ForestBuilder { gens, parent, step, roots, class } = self;
        VectorClasses { class, transforms: Transforms::Forest { gens, parent, step, roots }, reps, stabilizers }
    }
}

/// Classes of the vertices or relevant vectors of a region under a group,
/// indexed like the region's vertex store or relevant vector set.
#[derive(Debug, Clone)]
pub struct VectorClasses {
    pub(crate) class: Vec<u32>,
    pub(crate) transforms: Transforms,
    pub(crate) reps: Vec<u32>,
    pub(crate) stabilizers: Vec<GeneratedSubgroup>,
}

impl VectorClasses {
    pub fn num_classes(&self) -> usize {
        self.reps.len()
    }

    /// Class of vector `i`, or `None` when it was not classified.
    pub fn class_of(&self, i: u32) -> Option<u32> {
        self.class.get(i as usize).copied().filter(|&c| c != UNCLASSIFIED)
    }

    pub fn representative(&self, class: u32) -> u32 {
        self.reps[class as usize]
    }

    /// A group element taking the representative of `i`'s class to `i`.
    pub fn transform(&self, i: u32) -> GroupElement {
        self.transforms.get(i)
    }

    pub fn stabilizer(&self, class: u32) -> &GeneratedSubgroup {
        &self.stabilizers[class as usize]
    }
}

/// Everything equivalence testing needs about a symmetry group acting on a
/// region: its order and the classes, transformations and representative
/// stabilizers of vertices and relevant vectors.
#[derive(Debug, Clone)]
pub struct SymmetryContext {
    pub(crate) label: String,
    pub(crate) order: BigUint,
    pub(crate) vertices: VectorClasses,
    pub(crate) normals: VectorClasses,
}

impl SymmetryContext {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn vertices(&self) -> &VectorClasses {
        &self.vertices
    }

    pub fn normals(&self) -> &VectorClasses {
        &self.normals
    }

    /// Classifies every stored vertex and relevant vector by orbit enumeration.
    /// The region must be complete, so that classes are whole orbits.
    pub fn from_group(region: &Region, group: &MatrixGroup, options: StabilizerOptions) -> Result<Self, FaceError> {
        if !region.is_complete() {
            return Err(FaceError::Unsupported("orbit classification needs the complete vertex set".into()));
        }
        let points: Vec<ScaledVec> = region.store().points().cloned().collect();
        let vertices = classes_by_orbit(&points, group, &[], options)?;
        let normals = classes_by_orbit(region.relvecs().scaled(), group, &[], options)?;
        Ok(SymmetryContext { label: "full".into(), order: group.order(), vertices, normals })
    }
}

/// Classes of a group-invariant vector set by orbit enumeration, with the
/// stabilizer of each representative. A `preferred` vector becomes the
/// representative of its class.
pub(crate) fn classes_by_orbit(
    vectors: &[ScaledVec],
    group: &MatrixGroup,
    preferred: &[ScaledVec],
    options: StabilizerOptions,
) -> Result<VectorClasses, FaceError> {
    let c = classify_vectors(vectors, group.generators(), DEFAULT_ORBIT_CAP)?;
    let position = |v: &ScaledVec| vectors.iter().position(|w| w == v).map(|i| i as u32);
    let mut reps: Vec<u32> = c.representatives().map(|r| position(r).expect("representative is an input")).collect();
    let mut class = Vec::with_capacity(vectors.len());
    let mut transforms = Vec::with_capacity(vectors.len());
    for v in vectors {
        class.push(c.class_of(v).expect("classified") as u32);
        transforms.push(c.transform_of(v).expect("classified").clone());
    }
    for p in preferred {
        let Some(pi) = position(p) else { continue };
        let k = class[pi as usize];
        let shift = transforms[pi as usize].inverse();
        for (t, _) in transforms.iter_mut().zip(&class).filter(|(_, &ci)| ci == k) {
            *t = t.mul(&shift);
        }
        reps[k as usize] = pi;
    }
    let sizes = c.class_sizes();
    let stabilizers = reps
        .iter()
        .zip(&sizes)
        .map(|(&r, &s)| group.stabilizer(&vectors[r as usize], &BigUint::from(s), options).map(|(g, _)| g))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VectorClasses { class, transforms: Transforms::Stored(transforms), reps, stabilizers })
}
