use std::collections::HashSet;

use num_bigint::BigUint;
use rayon::prelude::*;

use super::region::{Face, Region};
use super::store::{tight_set, VertexStore};
use super::symmetry::{classes_by_orbit, ForestBuilder, SymmetryContext};
use super::FaceError;
use crate::bw16::{normal_representatives, vertex_representatives};
use crate::group::{bw16_generators, GroupElement, MatrixGroup, StabilizerOptions, DEFAULT_ORBIT_CAP};
use crate::lattice::make_lattice;
use crate::relvec::{relevant_vectors, RelevantVectorSet};

/// The region of `BW16` restricted to the facets of `n1` and `n2`, with the
/// full automorphism group as symmetry context.
pub struct Bw16Faces {
    pub group: MatrixGroup,
    pub region: Region,
    pub context: SymmetryContext,
    /// The facets of `n1` and `n2`.
    pub facets: Vec<Face>,
}

/// Builds the representative facets of `BW16`.
///
/// The vertices of the facet of a relevant vector `n` are the images
/// `g v_i` with `g^-1 n` tight at a vertex representative `v_i`. For each
/// tight `r` in the class of `n`, the element `t_r^-1` (with `t_r n = r`)
/// gives one such vertex, and the stabilizer of `n` moves it through the
/// rest of its orbit inside the facet. Tight sets are carried along through
/// the induced permutations of the relevant vectors, and transformations
/// from the representatives are kept as a Schreier forest.
pub fn bw16_faces(options: StabilizerOptions, log: &(dyn Fn(&str) + Sync)) -> Result<Bw16Faces, FaceError> {
    let lattice = make_lattice("BW16")?;
    let relvecs = relevant_vectors(&lattice);
    log(&format!("relevant vectors: {}", relvecs.len()));
    let normal_reps = normal_representatives();
    let vertex_reps = vertex_representatives();
    let group = MatrixGroup::new(bw16_generators(), &normal_reps[0].vector, DEFAULT_ORBIT_CAP)?;
    let preferred: Vec<_> = normal_reps.iter().map(|r| r.vector.clone()).collect();
    let normals = classes_by_orbit(relvecs.scaled(), &group, &preferred, options)?;
    log(&format!("relevant vector classes: {}", normals.num_classes()));

    let mut vertex_stabs = Vec::new();
    for r in &vertex_reps {
        let (s, _) = group.stabilizer(&r.vector, &BigUint::from(r.orbit), options)?;
        vertex_stabs.push(s);
    }
    log("vertex stabilizers done");

    let mut store = VertexStore::new();
    let mut forest = ForestBuilder::default();
    let mut vertex_rep_ids = Vec::new();
    let mut rep_tight = Vec::new();
    for (i, r) in vertex_reps.iter().enumerate() {
        let tight = tight_set(&r.vector, &relvecs);
        let (id, new) = store.insert(r.vector.clone(), tight.clone());
        if new {
            forest.push_root(i as u32, GroupElement::identity(16));
        }
        vertex_rep_ids.push(id);
        rep_tight.push(tight);
    }

    let mut facets = Vec::new();
    for nrep in &normal_reps {
        let nid = relvecs.index_of(&nrep.vector).expect("representative is relevant") as u32;
        let stab_gens = normals.stabilizer(normals.class_of(nid).expect("classified")).generators().to_vec();
        let offset = forest.add_gens(&stab_gens);
        let perms = induced_permutations(&stab_gens, &relvecs);
        let mut visited: HashSet<u32> = HashSet::new();
        let mut queue: Vec<u32> = Vec::new();

        for (i, tight) in rep_tight.iter().enumerate() {
            for &r in tight {
                if normals.class_of(r) != normals.class_of(nid) {
                    continue;
                }
                let g = normals.transform(r).inverse();
                let seed = g.apply(&vertex_reps[i].vector);
                debug_assert!(seed.on_bisector(&nrep.vector));
                let seed_tight: Vec<u32> = tight
                    .iter()
                    .map(|&q| relvecs.index_of(&g.apply(&relvecs.scaled()[q as usize])).expect("group maps relevant vectors") as u32)
                    .collect();
                let (id, new) = store.insert(seed, seed_tight);
                if new {
                    forest.push_root(i as u32, g);
                }
                if visited.insert(id) {
                    queue.push(id);
                }
            }
        }

        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for (k, s) in stab_gens.iter().enumerate() {
                let y = s.apply(store.point(x));
                let id = match store.index_of(&y) {
                    Some(id) => id,
                    None => {
                        let tight: Vec<u32> = store.tight(x).iter().map(|&q| perms[k][q as usize]).collect();
                        forest.push_child(x, offset + k as u32);
                        store.insert(y, tight).0
                    }
                };
                if visited.insert(id) {
                    queue.push(id);
                }
            }
        }
        log(&format!("facet of {}: {} vertices", nrep.name, queue.len()));
        queue.sort_unstable();
        facets.push(queue);
    }

    let vertices = forest.into_classes(vertex_rep_ids, vertex_stabs);
    let context = SymmetryContext { label: "full".into(), order: group.order(), vertices, normals };
    let region = Region::new(16, relvecs, store, false);
    let facets = facets
        .into_iter()
        .map(|vs| {
            let normals = region.normals_of(&vs);
            Face::new(15, vs, normals)
        })
        .collect();
    Ok(Bw16Faces { group, region, context, facets })
}

/// For each generator, the permutation it induces on the relevant vectors.
fn induced_permutations(gens: &[GroupElement], relvecs: &RelevantVectorSet) -> Vec<Vec<u32>> {
    gens.iter()
        .map(|g| {
            relvecs
                .scaled()
                .par_iter()
                .map(|r| relvecs.index_of(&g.apply(r)).expect("group maps relevant vectors") as u32)
                .collect()
        })
        .collect()
}
