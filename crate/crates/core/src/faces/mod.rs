//! Faces of Voronoi regions: vertices, facets, child faces by vertex-set
//! intersection, equivalence of faces under a symmetry group, and the
//! hierarchy of face classes of every dimension.

mod bw16;
mod classify;
mod equivalence;
mod geometry;
mod hierarchy;
mod region;
mod small;
mod store;
mod symmetry;

use thiserror::Error;

pub use bw16::{bw16_faces, Bw16Faces};
pub use classify::{classify_faces, FaceClass, FaceClassifier};
pub use equivalence::{count_transformations, find_transformation, signature, FaceSignature};
pub use geometry::{face_geometry, Angle, FaceGeometry, Shape};
pub use hierarchy::{build_hierarchy, ChildLink, ClassRecord, Hierarchy, HierarchyClass, HierarchyOptions, LevelReport};
pub use region::{Face, Region};
pub use small::{enumerate_vertices_small, verify_vertex, SMALL_DIM_CAP};
pub use store::{tight_set, VertexStore};
pub use symmetry::{SymmetryContext, VectorClasses};

use crate::exact::ExactError;
use crate::group::GroupError;
use crate::lattice::LatticeError;

#[derive(Debug, Error)]
pub enum FaceError {
    #[error("vertex enumeration supports dimension at most {cap}, got {dim}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("inconsistent face data: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
