use proptest::prelude::*;

use voronoi_forge_core::exact::{RMatrix, RVector, Rational};
use voronoi_forge_core::faces::{build_hierarchy, HierarchyOptions, Region, SymmetryContext};
use voronoi_forge_core::group::{automorphism_generators, GroupElement, MatrixGroup, StabilizerOptions, DEFAULT_ORBIT_CAP};
use voronoi_forge_core::lattice::make_lattice;
use voronoi_forge_core::moments::{
    face_moments, face_moments_with_apex, hierarchy_moments, isotropy_check, quantizer_constant, region_moments, ClassMoments,
    MomentData,
};

fn ints(x: &[i64]) -> RVector {
    RVector::from_ints(x)
}

/// Moments of the simplex with the given vertices, built face by face from
/// its vertices with every proper face treated as its own class.
fn simplex_moments(vertices: &[RVector], apex: Option<&RVector>) -> ClassMoments {
    let d = vertices.len() - 1;
    let id = GroupElement::identity(vertices[0].dim());
    // faces[k] maps each (k+1)-subset, as a bitmask, to its moments.
    let mut faces: Vec<Vec<(u32, ClassMoments)>> = Vec::new();
    faces.push((0..=d).map(|i| (1u32 << i, ClassMoments::point(&vertices[i]))).collect());
    for k in 1..=d {
        let mut level = Vec::new();
        for mask in 0u32..(1 << (d + 1)) {
            if mask.count_ones() as usize != k + 1 {
                continue;
            }
            let points: Vec<RVector> = (0..=d).filter(|i| mask >> i & 1 == 1).map(|i| vertices[i].clone()).collect();
            let children: Vec<(&ClassMoments, &GroupElement)> =
                faces[k - 1].iter().filter(|(m, _)| m & mask == *m).map(|(_, c)| (c, &id)).collect();
            let m = match apex.filter(|_| k == d) {
                Some(a) => face_moments_with_apex(&points, k, a, children).unwrap(),
                None => face_moments(&points, k, children).unwrap(),
            };
            level.push((mask, m));
        }
        faces.push(level);
    }
    faces.pop().unwrap().pop().unwrap().1
}

/// Closed forms for a simplex: `Vol^2 = det(E E^T) / (d!)^2` with `E` the
/// edge vectors from the first vertex, the centroid, and
/// `∫ x x^T = Vol / ((d+1)(d+2)) (Σ v v^T + (Σ v)(Σ v)^T)`.
fn check_simplex_oracle(vertices: &[RVector], m: &ClassMoments) {
    let d = vertices.len() - 1;
    let n = vertices[0].dim();
    let edges: Vec<RVector> = vertices[1..].iter().map(|v| v.sub(&vertices[0])).collect();
    let e = RMatrix::from_rows(edges).unwrap();
    let fact: i64 = (1..=d as i64).product();
    let vol2 = &e.mul(&e.transpose()).determinant().unwrap() / &Rational::from(fact * fact);
    assert_eq!(m.volume_squared(), vol2);

    let m0 = &m.moments.m0;
    let mut sum = RVector::zeros(n);
    let mut outer = RMatrix::zeros(n, n);
    for v in vertices {
        sum = sum.add(v);
        outer = outer.add(&RMatrix::outer(v, v));
    }
    let centroid = sum.scale(&Rational::new(1, d as i64 + 1));
    assert_eq!(m.moments.m1, centroid.scale(m0));
    let expected = outer.add(&RMatrix::outer(&sum, &sum)).scale(&(m0 * &Rational::new(1, ((d + 1) * (d + 2)) as i64)));
    assert_eq!(m.moments.m2, expected);
}

#[test]
fn simplices_match_closed_forms() {
    let tri = [ints(&[1, 0, 0]), ints(&[0, 2, 0]), ints(&[0, 0, 3])];
    check_simplex_oracle(&tri, &simplex_moments(&tri, None));
    let tet = [ints(&[0, 0, 0]), ints(&[2, 0, 1]), ints(&[1, 3, 0]), ints(&[-1, 1, 2])];
    check_simplex_oracle(&tet, &simplex_moments(&tet, None));
    let tet4 = [ints(&[1, 0, 0, 0]), ints(&[0, 1, 0, 1]), ints(&[1, 1, 2, 0]), ints(&[0, -1, 1, 1])];
    check_simplex_oracle(&tet4, &simplex_moments(&tet4, None));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_tetrahedra_match_closed_forms(coords in prop::collection::vec(-4i64..=4, 12)) {
        let vertices: Vec<RVector> = coords.chunks(3).map(ints).collect();
        let e = RMatrix::from_rows(vertices[1..].iter().map(|v| v.sub(&vertices[0])).collect()).unwrap();
        prop_assume!(!e.determinant().unwrap().is_zero());
        check_simplex_oracle(&vertices, &simplex_moments(&vertices, None));
    }
}

#[test]
fn apex_choice_does_not_matter() {
    let tri = [ints(&[1, 0, 0]), ints(&[0, 2, 0]), ints(&[0, 0, 3])];
    let base = simplex_moments(&tri, None);
    for apex in [tri[0].clone(), RVector::new(vec![Rational::new(1, 3), Rational::new(2, 3), Rational::one()]), ints(&[2, -2, 0])] {
        let m = simplex_moments(&tri, Some(&apex));
        assert_eq!(m.moments, base.moments);
    }
    let tet = [ints(&[0, 0, 0]), ints(&[2, 0, 1]), ints(&[1, 3, 0]), ints(&[-1, 1, 2])];
    let base = simplex_moments(&tet, None);
    for apex in [ints(&[5, 5, 5]), ints(&[1, 1, 1]), ints(&[-1, 1, 2])] {
        assert_eq!(simplex_moments(&tet, Some(&apex)).moments, base.moments);
    }
}

fn small(name: &str) -> (Region, SymmetryContext) {
    let l = make_lattice(name).unwrap();
    let region = Region::enumerate(&l).unwrap();
    let (gens, base) = automorphism_generators(&l).unwrap();
    let group = MatrixGroup::new(gens, &base, DEFAULT_ORBIT_CAP).unwrap();
    let ctx = SymmetryContext::from_group(&region, &group, StabilizerOptions::default()).unwrap();
    (region, ctx)
}

fn moments_of(name: &str) -> MomentData {
    let (region, ctx) = small(name);
    let h = build_hierarchy(&region, &ctx, &HierarchyOptions::default()).unwrap();
    region_moments(&region, &h).unwrap()
}

#[test]
fn cubic_regions() {
    let z2 = moments_of("Zn(2)");
    assert_eq!(z2.m0, Rational::one());
    assert!(z2.m1.is_zero());
    assert_eq!(z2.m2.trace(), Rational::new(1, 6));
    assert!(isotropy_check(&z2.m2));

    let z3 = moments_of("Zn(3)");
    assert_eq!(z3.m0, Rational::one());
    assert_eq!(z3.m2, RMatrix::identity(3).scale(&Rational::new(1, 12)));
    let g = quantizer_constant(&z3.m2.trace(), &z3.m0, 3, 16).unwrap();
    assert_eq!(g.coefficient, Some(Rational::new(1, 12)));
}

/// `D4` has volume `|det B| = 2` and `G = 13 / (120 sqrt 2)`, so that the
/// second moment is `U = 4 V^(3/2) G = 13/15`.
#[test]
fn d4_region() {
    let d4 = moments_of("D4");
    let l = make_lattice("D4").unwrap();
    assert_eq!(d4.m0, l.determinant().abs());
    assert_eq!(d4.m0, Rational::from(2));
    assert!(d4.m1.is_zero());
    assert!(isotropy_check(&d4.m2));
    assert_eq!(d4.m2.trace(), Rational::new(13, 15));
    let g = quantizer_constant(&d4.m2.trace(), &d4.m0, 4, 20).unwrap();
    assert!(g.decimal.starts_with("0.07660323"), "{}", g.decimal);
}

#[test]
fn every_class_has_consistent_moments() {
    let (region, ctx) = small("D4");
    let h = build_hierarchy(&region, &ctx, &HierarchyOptions::default()).unwrap();
    let levels = hierarchy_moments(&region, &h).unwrap();
    for (d, level) in levels.iter().enumerate() {
        for (m, class) in level.iter().zip(&h.levels[d]) {
            assert_eq!(m.moments.dim, d);
            assert!(m.moments.m0.is_positive());
            assert!(m.moments.m2.is_symmetric());
            // The first moment is the volume times the centroid, which lies in the face.
            let c = m.moments.m1.scale(&m.moments.m0.recip());
            let p = region.store().point(class.face.vertices()[0]).to_rvector();
            for r in region.normal_vectors(&class.face) {
                assert_eq!(c.dot(&r), p.dot(&r));
            }
        }
    }
    let partial = build_hierarchy(&region, &ctx, &HierarchyOptions { min_dim: 2, ..Default::default() }).unwrap();
    assert!(hierarchy_moments(&region, &partial).is_err());
}
