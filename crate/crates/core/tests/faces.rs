use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

use voronoi_forge_core::bw16::{vertex_representatives, FACET_CHILDREN, FACET_VERTICES};
use voronoi_forge_core::exact::{RVector, Rational};
use voronoi_forge_core::faces::{
    build_hierarchy, bw16_faces, classify_faces, count_transformations, enumerate_vertices_small, face_geometry,
    find_transformation, verify_vertex, Face, HierarchyOptions, Region, Shape, SymmetryContext,
};
use voronoi_forge_core::group::{automorphism_generators, MatrixGroup, StabilizerOptions, DEFAULT_ORBIT_CAP};
use voronoi_forge_core::lattice::make_lattice;
use voronoi_forge_core::relvec::relevant_vectors;

fn small(name: &str) -> (Region, SymmetryContext) {
    let l = make_lattice(name).unwrap();
    let region = Region::enumerate(&l).unwrap();
    let (gens, base) = automorphism_generators(&l).unwrap();
    let group = MatrixGroup::new(gens, &base, DEFAULT_ORBIT_CAP).unwrap();
    let ctx = SymmetryContext::from_group(&region, &group, StabilizerOptions::default()).unwrap();
    (region, ctx)
}

#[test]
fn small_vertex_sets() {
    let z2 = make_lattice("Zn(2)").unwrap();
    let v = enumerate_vertices_small(&z2, &relevant_vectors(&z2)).unwrap();
    let expected: BTreeSet<RVector> = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
        .iter()
        .map(|&(a, b)| RVector::new(vec![Rational::new(a, 2), Rational::new(b, 2)]))
        .collect();
    assert_eq!(v.into_iter().collect::<BTreeSet<_>>(), expected);
    for name in ["Zn(3)", "D4"] {
        let l = make_lattice(name).unwrap();
        let count = enumerate_vertices_small(&l, &relevant_vectors(&l)).unwrap().len();
        assert_eq!(count, if name == "D4" { 24 } else { 8 }, "{name}");
    }
    let e8 = make_lattice("E8").unwrap();
    assert!(enumerate_vertices_small(&e8, &relevant_vectors(&e8)).is_err());
}

/// Every point of the region of D4 with coordinates in `(1/2)Z` whose
/// closest lattice points span the space: the brute-force vertex oracle.
#[test]
fn d4_vertices_match_grid_oracle() {
    let d4 = make_lattice("D4").unwrap();
    let mut oracle = BTreeSet::new();
    let vals = [-2i64, -1, 0, 1, 2];
    for a in vals {
        for b in vals {
            for c in vals {
                for d in vals {
                    let p = RVector::new([a, b, c, d].iter().map(|&x| Rational::new(x, 2)).collect());
                    if verify_vertex(&d4, &p) {
                        oracle.insert(p);
                    }
                }
            }
        }
    }
    let found: BTreeSet<RVector> = enumerate_vertices_small(&d4, &relevant_vectors(&d4)).unwrap().into_iter().collect();
    assert_eq!(found, oracle);
}

#[test]
fn vertex_verification() {
    let z2 = make_lattice("Zn(2)").unwrap();
    assert!(verify_vertex(&z2, &RVector::new(vec![Rational::new(1, 2), Rational::new(1, 2)])));
    assert!(!verify_vertex(&z2, &RVector::new(vec![Rational::new(1, 2), Rational::zero()])));
    let bw = make_lattice("BW16").unwrap();
    assert!(!verify_vertex(&bw, &RVector::zeros(16)));
    let norms = [(1, 1), (10, 9), (10, 9), (10, 9), (10, 9), (3, 2)];
    for (r, (p, q)) in vertex_representatives().iter().zip(norms) {
        let v = r.vector.to_rvector();
        assert!(verify_vertex(&bw, &v), "{}", r.name);
        assert_eq!(v.norm2(), Rational::new(p, q), "{}", r.name);
    }
}

#[test]
fn square_facets_and_children() {
    let (region, _) = small("Zn(2)");
    let facets = region.facets();
    assert_eq!(facets.len(), 4);
    for f in &facets {
        assert_eq!(f.vertices().len(), 2);
        assert_eq!(f.normals().len(), 1);
        let kids = region.children(f);
        assert_eq!(kids.len(), 2);
        assert!(kids.iter().all(|k| k.dim() == 0 && k.normals().len() == 2));
    }
    let g = face_geometry(&region, &facets[0]).unwrap();
    assert_eq!(g.edge_lengths2, vec![Rational::one()]);
    let sq = face_geometry(&region, &region.whole()).unwrap();
    assert_eq!(sq.shape, Shape::Square);
    assert_eq!(sq.area2, Some(Rational::one()));
}

/// Face lattice of a polytope by brute force: all vertex subsets cut out by
/// sets of tight normals.
fn brute_force_faces(region: &Region) -> BTreeSet<Vec<u32>> {
    let m = region.relvecs().len();
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << m) {
        let vs: Vec<u32> = (0..region.store().len() as u32)
            .filter(|&v| (0..m as u32).filter(|r| mask >> r & 1 == 1).all(|r| region.store().tight(v).contains(&r)))
            .collect();
        if !vs.is_empty() {
            out.insert(vs);
        }
    }
    out
}

fn recursive_faces(region: &Region) -> BTreeSet<Vec<u32>> {
    let mut out = BTreeSet::new();
    let mut frontier = vec![region.whole()];
    while let Some(f) = frontier.pop() {
        if out.insert(f.vertices().to_vec()) {
            frontier.extend(region.children(&f));
        }
    }
    out
}

#[test]
fn children_match_brute_force_face_lattices() {
    for (name, counts) in [("Zn(3)", vec![8, 12, 6, 1]), ("D4", vec![24, 96, 96, 24, 1])] {
        let (region, _) = small(name);
        let faces = recursive_faces(&region);
        if region.relvecs().len() <= 24 {
            assert_eq!(faces, brute_force_faces(&region), "{name}");
        }
        let mut by_dim = vec![0usize; region.dim() + 1];
        for vs in &faces {
            by_dim[region.face_from_vertices(vs.clone()).dim()] += 1;
        }
        assert_eq!(by_dim, counts, "{name}");
    }
}

#[test]
fn face_invariants_hold() {
    let (region, _) = small("D4");
    let mut frontier = vec![region.whole()];
    let mut seen = HashSet::new();
    while let Some(f) = frontier.pop() {
        if !seen.insert(f.vertices().to_vec()) {
            continue;
        }
        let rebuilt = region.face_from_vertices(f.vertices().to_vec());
        assert_eq!(rebuilt, f);
        for v in region.vertex_vectors(&f) {
            for r in region.normal_vectors(&f) {
                assert_eq!(v.dot(&r) * Rational::from(2), r.norm2());
            }
        }
        frontier.extend(region.children(&f));
    }
}

#[test]
fn transformations_between_faces() {
    let (region, ctx) = small("D4");
    let facets = region.facets();
    let g = find_transformation(&region, &ctx, &facets[0], &facets[0]).unwrap();
    assert!(g.is_orthogonal());
    for f in &facets[1..] {
        let g = find_transformation(&region, &ctx, &facets[0], f).expect("D4 facets are equivalent");
        let mapped: BTreeSet<u32> =
            facets[0].vertices().iter().map(|&v| region.store().index_of(&g.apply(region.store().point(v))).unwrap()).collect();
        assert_eq!(mapped, f.vertices().iter().copied().collect());
    }
    // |Aut(D4)| = 1152 and 24 facets, so each facet has 48 symmetries.
    assert_eq!(count_transformations(&region, &ctx, &facets[0], &facets[0]), 48);
    let edge = &region.children(&region.children(&facets[0])[0])[0];
    assert!(find_transformation(&region, &ctx, &facets[0], edge).is_none());
}

#[test]
fn classification_of_small_hierarchies() {
    for (name, counts) in [("Zn(2)", vec![1, 1, 1]), ("Zn(3)", vec![1, 1, 1, 1]), ("D4", vec![1, 1, 1, 1, 1])] {
        let (region, ctx) = small(name);
        let h = build_hierarchy(&region, &ctx, &HierarchyOptions::default()).unwrap();
        assert_eq!(h.class_counts(), counts, "{name}");
    }
    let (region, ctx) = small("Zn(3)");
    let mut faces = region.children(&region.facets()[0]);
    faces.extend(region.children(&region.facets()[3]));
    let forward = classify_faces(&region, &[&ctx], &faces);
    faces.reverse();
    let backward = classify_faces(&region, &[&ctx], &faces);
    assert_eq!(forward.len(), 1);
    assert_eq!(backward.len(), 1);
    assert_eq!(forward[0].members_constructed, 8);
    let single = classify_faces(&region, &[&ctx], &faces[..1]);
    assert_eq!(single.len(), 1);
}

#[test]
fn checkpoints_resume_to_the_same_hierarchy() {
    let (region, ctx) = small("Zn(3)");
    let dir = tempfile::tempdir().unwrap();
    let opts = HierarchyOptions { checkpoint: Some(dir.path().to_path_buf()), ..Default::default() };
    let first = build_hierarchy(&region, &ctx, &opts).unwrap();
    let resumed_levels = std::sync::Mutex::new(Vec::new());
    let progress = |r: &voronoi_forge_core::faces::LevelReport| {
        if r.resumed {
            resumed_levels.lock().unwrap().push(r.dim);
        }
    };
    let opts = HierarchyOptions { checkpoint: Some(dir.path().to_path_buf()), progress: Some(&progress), ..Default::default() };
    let second = build_hierarchy(&region, &ctx, &opts).unwrap();
    assert_eq!(first.class_counts(), second.class_counts());
    assert_eq!(*resumed_levels.lock().unwrap(), vec![1, 0]);
    for (a, b) in first.levels.iter().zip(&second.levels) {
        for (x, y) in a.iter().zip(b) {
            assert_eq!(x.face, y.face);
            assert_eq!(x.children.len(), y.children.len());
        }
    }
}

#[test]
fn face_geometry_of_polygons() {
    let (region, _) = small("D4");
    let tri: Face = {
        let f = &region.facets()[0];
        region.children(f)[0].clone()
    };
    let g = face_geometry(&region, &tri).unwrap();
    assert_eq!(g.shape, Shape::Equilateral);
    assert!(g.angles.iter().all(|a| a.cos2 == Rational::new(1, 4) && !a.obtuse));
    assert_eq!(g.area2, Some(Rational::new(3, 16) * g.edge_lengths2[0].clone() * g.edge_lengths2[0].clone()));
    assert!(face_geometry(&region, &region.facets()[0]).is_err());
}

#[test]
fn bw16_representative_facets() {
    let t = Instant::now();
    let log = |s: &str| eprintln!("[{:>7.1}s] {s}", t.elapsed().as_secs_f64());
    let bw = bw16_faces(StabilizerOptions::default(), &log).unwrap();
    for (i, facet) in bw.facets.iter().enumerate() {
        assert_eq!(facet.vertices().len(), FACET_VERTICES[i]);
        assert_eq!(facet.normals().len(), 1);
        let kids = bw.region.children(facet);
        log(&format!("facet {i}: {} children", kids.len()));
        assert_eq!(kids.len(), FACET_CHILDREN[i]);
    }
    assert_eq!(bw.region.store().len(), 1_067_070 + extra_representatives(&bw));
    let n1_facet = &bw.facets[0];
    let n2_facet = &bw.facets[1];
    assert!(find_transformation(&bw.region, &bw.context, n1_facet, n2_facet).is_none());
    let g = find_transformation(&bw.region, &bw.context, n1_facet, n1_facet).unwrap();
    assert!(bw.group.contains(&g));
}

/// Vertex representatives that lie on neither representative facet.
fn extra_representatives(bw: &voronoi_forge_core::faces::Bw16Faces) -> usize {
    vertex_representatives()
        .iter()
        .filter(|r| {
            let id = bw.region.store().index_of(&r.vector).unwrap();
            !bw.facets.iter().any(|f| f.contains_vertex(id))
        })
        .count()
}
