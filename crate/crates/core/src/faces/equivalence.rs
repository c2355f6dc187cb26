use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::region::{Face, Region};
use super::symmetry::{SymmetryContext, VectorClasses};
use crate::exact::ScaledVec;
use crate::group::GroupElement;

/// Counts of vertex classes and normal classes of a face. Equivalent faces
/// have equal signatures.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceSignature {
    pub dim: usize,
    pub vertex_classes: Vec<(u32, usize)>,
    pub normal_classes: Vec<(u32, usize)>,
}

fn class_counts(ids: &[u32], classes: &VectorClasses) -> Vec<(u32, usize)> {
    let mut m: BTreeMap<u32, usize> = BTreeMap::new();
    for &i in ids {
        *m.entry(classes.class_of(i).expect("face vectors are classified")).or_insert(0) += 1;
    }
    m.into_iter().collect()
}

pub fn signature(face: &Face, ctx: &SymmetryContext) -> FaceSignature {
    FaceSignature {
        dim: face.dim(),
        vertex_classes: class_counts(face.vertices(), ctx.vertices()),
        normal_classes: class_counts(face.normals(), ctx.normals()),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Kind {
    Vertex,
    Normal,
}

struct Side<'a> {
    region: &'a Region,
    ctx: &'a SymmetryContext,
}

impl Side<'_> {
    fn classes(&self, kind: Kind) -> &VectorClasses {
        match kind {
            Kind::Vertex => self.ctx.vertices(),
            Kind::Normal => self.ctx.normals(),
        }
    }

    fn vector(&self, kind: Kind, i: u32) -> &ScaledVec {
        match kind {
            Kind::Vertex => self.region.store().point(i),
            Kind::Normal => &self.region.relvecs().scaled()[i as usize],
        }
    }

    fn index(&self, kind: Kind, v: &ScaledVec) -> Option<u32> {
        match kind {
            Kind::Vertex => self.region.store().index_of(v),
            Kind::Normal => self.region.relvecs().index_of(v).map(|i| i as u32),
        }
    }

    fn members<'f>(&self, kind: Kind, face: &'f Face) -> &'f [u32] {
        match kind {
            Kind::Vertex => face.vertices(),
            Kind::Normal => face.normals(),
        }
    }

    /// True when `g` maps every listed vector of kind `kind` into `target`.
    fn maps_into(&self, g: &GroupElement, kind: Kind, from: &[u32], target: &[u32]) -> bool {
        from.iter().all(|&d| {
            self.index(kind, &g.apply(self.vector(kind, d))).is_some_and(|j| target.binary_search(&j).is_ok())
        })
    }
}

/// Searches for a group element `g` with `g F = F'`.
///
/// A vector `x` of `F` with the smallest representative stabilizer is chosen
/// (ties broken by the number of vectors of `F'` in its class). Every
/// candidate `g = g_y g_s g_x^-1`, for `y` in `F'` equivalent to `x` and
/// `g_s` stabilizing the representative, is tested on the smaller of the two
/// vector sets of `F`. Returns `None` when no candidate maps `F` onto `F'`.
pub fn find_transformation(region: &Region, ctx: &SymmetryContext, f: &Face, g: &Face) -> Option<GroupElement> {
    search(region, ctx, f, g, true).into_iter().next()
}

/// Number of group elements mapping `F` onto `F'`; for `F' = F` this is the
/// order of the face's stabilizer.
pub fn count_transformations(region: &Region, ctx: &SymmetryContext, f: &Face, g: &Face) -> u64 {
    search(region, ctx, f, g, false).len() as u64
}

fn search(region: &Region, ctx: &SymmetryContext, f: &Face, fp: &Face, first_only: bool) -> Vec<GroupElement> {
    if f.dim() != fp.dim()
        || f.vertices().len() != fp.vertices().len()
        || f.normals().len() != fp.normals().len()
        || signature(f, ctx) != signature(fp, ctx)
    {
        return Vec::new();
    }
    let side = Side { region, ctx };

    let mut best: Option<(BigUint, usize, Kind, u32)> = None;
    for kind in [Kind::Vertex, Kind::Normal] {
        let classes = side.classes(kind);
        let target_counts = class_counts(side.members(kind, fp), classes);
        for &x in side.members(kind, f) {
            let c = classes.class_of(x).expect("classified");
            let stab = classes.stabilizer(c).order();
            let equiv = target_counts.iter().find(|(k, _)| *k == c).map_or(0, |(_, n)| *n);
            let better = match &best {
                None => true,
                Some((s, e, _, _)) => (&stab, equiv) < (s, *e),
            };
            if better {
                best = Some((stab, equiv, kind, x));
            }
        }
    }
    let Some((_, _, kind, x)) = best else {
        return Vec::new();
    };

    let classes = side.classes(kind);
    let cx = classes.class_of(x).expect("classified");
    let ys: Vec<u32> = side.members(kind, fp).iter().copied().filter(|&y| classes.class_of(y) == Some(cx)).collect();
    let gys: Vec<GroupElement> = ys.iter().map(|&y| classes.transform(y)).collect();
    let gx_inv = classes.transform(x).inverse();

    let (dkind, d, dp) = if f.normals().is_empty() || f.vertices().len() <= f.normals().len() {
        (Kind::Vertex, f.vertices(), fp.vertices())
    } else {
        (Kind::Normal, f.normals(), fp.normals())
    };
    let d0 = side.vector(dkind, d[0]);

    let mut hits = Vec::new();
    for gs in classes.stabilizer(cx).elements() {
        let h = gs.mul(&gx_inv);
        let hd0 = h.apply(d0);
        for gy in &gys {
            let img = gy.apply(&hd0);
            if !side.index(dkind, &img).is_some_and(|j| dp.binary_search(&j).is_ok()) {
                continue;
            }
            let g = gy.mul(&h);
            if side.maps_into(&g, dkind, d, dp) {
                assert!(
                    side.maps_into(&g, Kind::Vertex, f.vertices(), fp.vertices())
                        && side.maps_into(&g, Kind::Normal, f.normals(), fp.normals()),
                    "a transformation matching one vector set must match both"
                );
                hits.push(g);
                if first_only {
                    return hits;
                }
            }
        }
    }
    hits
}
