use voronoi_forge_core::exact::{RMatrix, RVector, Rational};
use voronoi_forge_core::lattice::{make_lattice, Lattice};
use voronoi_forge_core::relvec::{packing_kissing, relevant_vectors};

/// Definition-level oracle: lattice points w with the midpoint w/2 tied
/// exactly between 0 and w, scanning a ball of radius twice the covering radius.
fn brute_force_relevant(l: &Lattice, covering2: &Rational) -> Vec<RVector> {
    let ball = l.points_within(&RVector::zeros(l.dim()), &(covering2 * Rational::from(4))).unwrap();
    let half = Rational::new(1, 2);
    let mut out: Vec<RVector> = ball
        .into_iter()
        .filter(|p| !p.coords.is_zero())
        .filter(|p| {
            let ties = l.closest_points(&p.coords.scale(&half)).unwrap();
            ties.len() == 2 && ties.iter().any(|t| t.coords.is_zero()) && ties.iter().any(|t| t.coords == p.coords)
        })
        .map(|p| p.coords)
        .collect();
    out.sort();
    out
}

fn sorted_coords(l: &Lattice) -> Vec<RVector> {
    let mut v: Vec<_> = relevant_vectors(l).vectors().iter().map(|p| p.coords.clone()).collect();
    v.sort();
    v
}

fn skew_plane() -> Lattice {
    let basis = RMatrix::from_rows(vec![
        RVector::from_ints(&[1, 0]),
        RVector::new(vec![Rational::new(1, 2), Rational::one()]),
    ])
    .unwrap();
    Lattice::from_basis("skew", basis).unwrap()
}

#[test]
fn small_lattices_are_complete() {
    for name in ["Z2", "Z3", "Z4", "D4"] {
        let l = make_lattice(name).unwrap();
        let cov = l.covering_radius2().unwrap().clone();
        assert_eq!(sorted_coords(&l), brute_force_relevant(&l, &cov), "{name}");
    }
    let skew = skew_plane();
    let got = sorted_coords(&skew);
    assert_eq!(got.len(), 6);
    assert_eq!(got, brute_force_relevant(&skew, &Rational::from(2)));
}

#[test]
fn d4_and_e8_counts() {
    let d4 = relevant_vectors(&make_lattice("D4").unwrap());
    assert_eq!(d4.len(), 24);
    assert!(d4.by_norm().keys().all(|k| *k == Rational::from(2)));
    let e8 = relevant_vectors(&make_lattice("E8").unwrap());
    assert_eq!(e8.len(), 240);
    assert_eq!(packing_kissing(&e8).unwrap(), (Rational::new(1, 2), 240));
}

#[test]
fn bw16_counts_soundness_and_symmetry() {
    let bw = make_lattice("BW16").unwrap();
    let set = relevant_vectors(&bw);
    assert_eq!(set.len(), 65_760);
    assert_eq!(set.by_norm().get(&Rational::from(2)), Some(&4320));
    assert_eq!(set.by_norm().get(&Rational::from(3)), Some(&61_440));
    assert_eq!(packing_kissing(&set).unwrap(), (Rational::new(1, 2), 4320));

    let half = Rational::new(1, 2);
    for (i, p) in set.vectors().iter().enumerate() {
        assert!(set.position(&p.coords.neg()).is_some());
        assert_eq!(bw.point(&p.coeffs).coords, p.coords);
        if i % 97 == 0 {
            let ties = bw.closest_points(&p.coords.scale(&half)).unwrap();
            let mut expected = vec![RVector::zeros(16), p.coords.clone()];
            expected.sort();
            let mut got: Vec<_> = ties.into_iter().map(|t| t.coords).collect();
            got.sort();
            assert_eq!(got, expected);
        }
    }
}
