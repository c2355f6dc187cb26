use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::store::VertexStore;
use crate::exact::{affine_rank_scaled, RVector};
use crate::relvec::RelevantVectorSet;

/// A face of a Voronoi region, given by sorted indices into the region's
/// vertex store and relevant vector set. Faces compare by their vertex sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Face {
    dim: usize,
    vertices: Vec<u32>,
    normals: Vec<u32>,
}

impl Face {
    pub fn new(dim: usize, mut vertices: Vec<u32>, mut normals: Vec<u32>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        normals.sort_unstable();
        normals.dedup();
        Face { dim, vertices, normals }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    /// Relevant vectors whose bisector hyperplanes contain the face.
    pub fn normals(&self) -> &[u32] {
        &self.normals
    }

    pub fn contains_vertex(&self, v: u32) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn has_normal(&self, r: u32) -> bool {
        self.normals.binary_search(&r).is_ok()
    }
}

/// A Voronoi region described by its relevant vectors and a vertex store.
///
/// The store is either the complete vertex set or, for large lattices, the
/// vertices of selected facets. Faces built from a partial store are exact
/// as long as they lie in one of the stored facets.
#[derive(Debug, Clone)]
pub struct Region {
    dim: usize,
    relvecs: RelevantVectorSet,
    store: VertexStore,
    complete: bool,
}

impl Region {
    pub fn new(dim: usize, relvecs: RelevantVectorSet, store: VertexStore, complete: bool) -> Self {
        Region { dim, relvecs, store, complete }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn relvecs(&self) -> &RelevantVectorSet {
        &self.relvecs
    }

    pub fn store(&self) -> &VertexStore {
        &self.store
    }

    pub fn store_mut(&mut self) -> &mut VertexStore {
        &mut self.store
    }

    /// True when the store holds every vertex of the region.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// The region itself as an `n`-face.
    pub fn whole(&self) -> Face {
        Face::new(self.dim, (0..self.store.len() as u32).collect(), Vec::new())
    }

    /// Relevant vectors tight at every listed vertex.
    pub fn normals_of(&self, vertices: &[u32]) -> Vec<u32> {
        let Some((&first, rest)) = vertices.split_first() else {
            return Vec::new();
        };
        let mut common = self.store.tight(first).to_vec();
        for &v in rest {
            let t = self.store.tight(v);
            common.retain(|r| t.binary_search(r).is_ok());
            if common.is_empty() {
                break;
            }
        }
        common
    }

    /// The face spanned by a vertex set, with its dimension and maximal normal set.
    pub fn face_from_vertices(&self, vertices: Vec<u32>) -> Face {
        let dim = affine_rank_scaled(vertices.iter().map(|&v| self.store.point(v)), self.dim);
        let normals = self.normals_of(&vertices);
        Face::new(dim, vertices, normals)
    }

    /// The facet of relevant vector `r`, restricted to the stored vertices.
    pub fn facet(&self, r: u32) -> Face {
        let vertices: Vec<u32> = (0..self.store.len() as u32)
            .into_par_iter()
            .filter(|&v| self.store.tight(v).binary_search(&r).is_ok())
            .collect();
        let normals = self.normals_of(&vertices);
        Face::new(self.dim - 1, vertices, normals)
    }

    /// One facet per relevant vector.
    pub fn facets(&self) -> Vec<Face> {
        (0..self.relvecs.len() as u32).map(|r| self.facet(r)).collect()
    }

    /// The `(d-1)`-faces of a `d`-face: for each relevant vector outside the
    /// face's normals, the face's vertices on its bisector, kept when they
    /// span a `(d-1)`-dimensional affine subspace. Sorted by vertex set.
    pub fn children(&self, face: &Face) -> Vec<Face> {
        if face.dim == 0 {
            return Vec::new();
        }
        let mut buckets: HashMap<u32, Vec<u32>> = HashMap::new();
        for &v in &face.vertices {
            for &r in self.store.tight(v) {
                if !face.has_normal(r) {
                    buckets.entry(r).or_default().push(v);
                }
            }
        }
        let mut groups: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
        for (r, vs) in buckets {
            groups.entry(vs).or_default().push(r);
        }
        let target = face.dim - 1;
        let mut out: Vec<Face> = groups
            .into_par_iter()
            .filter(|(vs, _)| vs.len() > target)
            .filter(|(vs, _)| affine_rank_scaled(vs.iter().map(|&v| self.store.point(v)), target) == target)
            .map(|(vs, mut rs)| {
                rs.extend_from_slice(&face.normals);
                Face::new(target, vs, rs)
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn vertex_vectors(&self, face: &Face) -> Vec<RVector> {
        face.vertices.iter().map(|&v| self.store.point(v).to_rvector()).collect()
    }

    pub fn normal_vectors(&self, face: &Face) -> Vec<RVector> {
        face.normals.iter().map(|&r| self.relvecs.scaled()[r as usize].to_rvector()).collect()
    }
}
