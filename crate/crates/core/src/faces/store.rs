use indexmap::IndexSet;

use crate::exact::ScaledVec;
use crate::relvec::RelevantVectorSet;

/// Vertices of a Voronoi region together with the relevant vectors tight at
/// each of them, stored in one flat array.
#[derive(Debug, Clone, Default)]
pub struct VertexStore {
    points: IndexSet<ScaledVec>,
    offsets: Vec<usize>,
    tight: Vec<u32>,
}

impl VertexStore {
    pub fn new() -> Self {
        VertexStore { points: IndexSet::new(), offsets: vec![0], tight: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: u32) -> &ScaledVec {
        &self.points[i as usize]
    }

    pub fn index_of(&self, v: &ScaledVec) -> Option<u32> {
        self.points.get_index_of(v).map(|i| i as u32)
    }

    /// Sorted indices of the relevant vectors whose bisectors contain vertex `i`.
    pub fn tight(&self, i: u32) -> &[u32] {
        &self.tight[self.offsets[i as usize]..self.offsets[i as usize + 1]]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &ScaledVec> {
        self.points.iter()
    }

    /// Inserts a vertex with its tight set; returns its index and whether it was new.
    pub fn insert(&mut self, v: ScaledVec, mut tight: Vec<u32>) -> (u32, bool) {
        let (i, new) = self.points.insert_full(v);
        if new {
            tight.sort_unstable();
            self.tight.extend_from_slice(&tight);
            self.offsets.push(self.tight.len());
        }
        (i as u32, new)
    }

    /// Inserts a vertex, finding its tight set by scanning all relevant vectors.
    pub fn insert_scanning(&mut self, v: ScaledVec, relvecs: &RelevantVectorSet) -> (u32, bool) {
        if let Some(i) = self.index_of(&v) {
            return (i, false);
        }
        let tight = tight_set(&v, relvecs);
        self.insert(v, tight)
    }
}

/// Indices of the relevant vectors whose bisector hyperplanes contain `v`.
pub fn tight_set(v: &ScaledVec, relvecs: &RelevantVectorSet) -> Vec<u32> {
    relvecs
        .scaled()
        .iter()
        .enumerate()
        .filter(|(_, r)| v.on_bisector(r))
        .map(|(i, _)| i as u32)
        .collect()
}
