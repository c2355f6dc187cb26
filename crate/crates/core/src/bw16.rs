//! Reference data for the Barnes–Wall lattice `BW16`: class representatives of
//! relevant vectors and vertices with orbit and stabilizer sizes, facet
//! statistics, face class counts, and the exact second moment.

use crate::exact::{Rational, ScaledVec};

/// Order of the automorphism group.
pub const GROUP_ORDER: u64 = 89_181_388_800;

/// A class representative with its orbit size and stabilizer order.
#[derive(Debug, Clone)]
pub struct Representative {
    pub name: &'static str,
    pub vector: ScaledVec,
    pub norm2: Rational,
    pub orbit: u64,
    pub stabilizer: u64,
}

fn rep(name: &'static str, den: i64, num: [i64; 16], norm2: (i64, i64), orbit: u64, stabilizer: u64) -> Representative {
    Representative { name, vector: ScaledVec::new(num.to_vec(), den), norm2: Rational::new(norm2.0, norm2.1), orbit, stabilizer }
}

/// Representatives `n1` (squared length 2) and `n2` (squared length 3) of the
/// two classes of relevant vectors.
pub fn normal_representatives() -> Vec<Representative> {
    vec![
        rep("n1", 1, [1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0], (2, 1), 4320, 20_643_840),
        rep("n2", 2, [2, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 1, -1, 0], (3, 1), 61440, 1_451_520),
    ]
}

/// Representatives `v1`..`v6` of the six vertex classes.
pub fn vertex_representatives() -> Vec<Representative> {
    vec![
        rep("v1", 2, [1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1], (1, 1), 4320, 20_643_840),
        rep("v2", 12, [9, 3, 3, 3, 1, -1, 1, 1, 1, -1, 3, -1, -3, 3, -3, -3], (10, 9), 66_355_200, 1344),
        rep("v3", 6, [5, 1, -1, -1, -1, 1, 1, -1, 1, -1, 1, -1, 1, 1, 1, 1], (10, 9), 2_211_840, 40320),
        rep("v4", 6, [5, 1, 1, 1, -1, 1, -1, -1, 1, -1, -1, -1, -1, -1, 1, -1], (10, 9), 66_355_200, 1344),
        rep("v5", 6, [5, 1, 1, 1, 1, 1, -1, -1, 1, 1, 1, -1, 1, 1, -1, 1], (10, 9), 66_355_200, 1344),
        rep("v6", 4, [3, 1, 1, 1, 1, 1, 1, -1, 1, 1, 1, -1, 1, -1, -1, -1], (3, 2), 61440, 1_451_520),
    ]
}

/// Total number of vertices of the Voronoi region.
pub const VERTEX_COUNT: u64 = 201_343_200;

/// Vertex and child counts of the facets of `n1` and `n2`.
pub const FACET_VERTICES: [usize; 2] = [1_046_430, 26_160];
pub const FACET_CHILDREN: [usize; 2] = [7704, 828];

/// Number of face classes of each dimension `0..=16`.
pub const FACE_CLASS_COUNTS: [usize; 17] = [6, 23, 58, 168, 441, 867, 1257, 1329, 1023, 566, 253, 96, 35, 12, 5, 2, 1];

/// Exact second moment `U` of the Voronoi region, with volume `1/16`.
pub fn second_moment() -> Rational {
    Rational::new(207_049_815_983i64, 4_287_303_820_800i64)
}

/// Decimal value of the quantizer constant `G = U sqrt(2)`.
pub const QUANTIZER_CONSTANT: f64 = 0.068_297_622_489_318_7;
