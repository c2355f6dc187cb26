//! Generators of the automorphism groups of the named lattices.

use super::GroupElement;
use crate::exact::ScaledVec;
use crate::lattice::Lattice;

fn h4_rows(last: [i64; 4]) -> GroupElement {
    GroupElement::from_scaled_rows(
        &[vec![1, 1, 1, 1], vec![1, -1, 1, -1], vec![1, 1, -1, -1], last.to_vec()],
        2,
    )
}

/// The 4x4 Hadamard matrix `H4`.
pub fn h4() -> GroupElement {
    h4_rows([1, -1, -1, 1])
}

/// `H4` with its last row negated.
pub fn h4_bar() -> GroupElement {
    h4_rows([-1, 1, 1, -1])
}

/// Block-diagonal matrix with four copies of `H4`.
pub fn bw16_h() -> GroupElement {
    GroupElement::block_diagonal(&h4(), 4)
}

/// The permutation matrices `p1`..`p4` of the Reed–Muller permutation group.
pub fn bw16_permutations() -> [GroupElement; 4] {
    [
        GroupElement::from_cycles(16, &[&[1, 2, 3, 4], &[5, 6, 7, 8], &[9, 10, 11, 12], &[13, 14, 15, 16]]),
        GroupElement::from_cycles(16, &[&[1, 2], &[5, 6], &[9, 10], &[13, 14]]),
        GroupElement::from_cycles(16, &[&[1, 6, 13], &[2, 8], &[3, 9, 12, 5, 15, 14], &[4, 11, 7]]),
        GroupElement::from_cycles(16, &[&[1, 9, 16, 15, 5, 7, 4, 8, 10, 6, 13, 2, 3, 14, 12]]),
    ]
}

/// `M1`, the permutation matrix of `p3`.
pub fn bw16_m1() -> GroupElement {
    let [_, _, p3, _] = bw16_permutations();
    p3
}

/// `M2`, block-diagonal with four copies of `H4` with negated last row.
pub fn bw16_m2() -> GroupElement {
    GroupElement::block_diagonal(&h4_bar(), 4)
}

/// The two matrices `{M1, M2}` that generate the whole automorphism group.
pub fn bw16_generators() -> Vec<GroupElement> {
    vec![bw16_m1(), bw16_m2()]
}

/// Sign-change generators: an even number of the pairs `(x_i, x_{i+1})`, `i` odd.
pub fn bw16_s1() -> Vec<GroupElement> {
    (0..7)
        .map(|k| {
            let a = 2 * k + 1;
            GroupElement::sign_change(16, &[a, a + 1, a + 2, a + 3])
        })
        .collect()
}

/// Sign-change generators: an even number of the joint pairs `(x_i, x_{16-i})`, `i = 1, 3, 5, 7`.
pub fn bw16_s2() -> Vec<GroupElement> {
    let pairs = [[1, 15], [3, 13], [5, 11], [7, 9]];
    (0..3)
        .map(|k| {
            let coords = [pairs[k][0], pairs[k][1], pairs[k + 1][0], pairs[k + 1][1]];
            GroupElement::sign_change(16, &coords)
        })
        .collect()
}

/// The order-2 sign change of `(x_1, x_3, x_5, x_7)`.
pub fn bw16_s3() -> GroupElement {
    GroupElement::sign_change(16, &[1, 3, 5, 7])
}

/// `H`, the sign-change generators and `{p1, p2, p3}`.
pub fn bw16_structured_generators() -> Vec<GroupElement> {
    let [p1, p2, p3, _] = bw16_permutations();
    let mut gens = vec![bw16_h()];
    gens.extend(bw16_s1());
    gens.extend(bw16_s2());
    gens.push(bw16_s3());
    gens.extend([p1, p2, p3]);
    gens
}

/// The reflection `I - 2 r r^T / (r . r)`.
pub fn reflection(r: &ScaledVec) -> GroupElement {
    let num = r.num();
    let n = num.len();
    let nn: i64 = num.iter().map(|x| x * x).sum();
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { nn } else { 0 } - 2 * num[i] * num[j]).collect())
        .collect();
    GroupElement::from_scaled_rows(&rows, nn)
}

fn simple_reflections(roots: &[Vec<i64>], den: i64) -> Vec<GroupElement> {
    roots.iter().map(|r| reflection(&ScaledVec::new(r.clone(), den))).collect()
}

/// Generators of the automorphism group of a named lattice, with a vector
/// whose orbit is a convenient permutation domain.
pub fn automorphism_generators(lattice: &Lattice) -> Option<(Vec<GroupElement>, ScaledVec)> {
    let n = lattice.dim();
    let name = lattice.name();
    let unit = |i: usize| {
        let mut v = vec![0i64; n];
        v[i] = 1;
        v
    };
    match name {
        "BW16" => {
            let mut n1 = vec![0i64; 16];
            n1[0] = 1;
            n1[1] = 1;
            Some((bw16_generators(), ScaledVec::from_ints(&n1)))
        }
        "D4" => {
            let roots = vec![vec![0, 2, -2, 0], vec![0, 0, 2, -2], vec![0, 0, 0, 2], vec![1, -1, -1, -1]];
            Some((simple_reflections(&roots, 2), ScaledVec::from_ints(&[1, 1, 0, 0])))
        }
        "E8" => {
            let mut roots = vec![vec![1, -1, -1, -1, -1, -1, -1, 1]];
            let mut r = vec![0i64; 8];
            r[0] = 2;
            r[1] = 2;
            roots.push(r);
            for i in 0..6 {
                let mut r = vec![0i64; 8];
                r[i] = -2;
                r[i + 1] = 2;
                roots.push(r);
            }
            Some((simple_reflections(&roots, 2), ScaledVec::from_ints(&[1, 1, 0, 0, 0, 0, 0, 0])))
        }
        _ if name.starts_with('Z') && name[1..].parse::<usize>() == Ok(n) => {
            let mut roots: Vec<Vec<i64>> = (0..n.saturating_sub(1))
                .map(|i| {
                    let mut r = vec![0i64; n];
                    r[i] = 1;
                    r[i + 1] = -1;
                    r
                })
                .collect();
            roots.push(unit(n - 1));
            Some((simple_reflections(&roots, 1), ScaledVec::from_ints(&unit(0))))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_lattice;

    #[test]
    fn bw16_generators_preserve_lattice() {
        let bw = make_lattice("BW16").unwrap();
        for g in bw16_generators().iter().chain(&bw16_structured_generators()).chain(&bw16_permutations()) {
            assert!(g.is_orthogonal());
            assert!(g.preserves(&bw));
        }
        assert!(bw16_h().preserves(&bw));
    }

    #[test]
    fn single_pair_reading_of_s2_breaks_the_lattice() {
        let bw = make_lattice("BW16").unwrap();
        assert!(!GroupElement::sign_change(16, &[1, 15]).preserves(&bw));
        assert!(!GroupElement::sign_change(16, &[1, 2]).preserves(&bw));
    }

    #[test]
    fn m1_and_m2_shape() {
        let m1 = bw16_m1();
        let mut e1 = vec![0i64; 16];
        e1[0] = 1;
        let mut e6 = vec![0i64; 16];
        e6[5] = 1;
        assert_eq!(m1.apply(&ScaledVec::from_ints(&e1)), ScaledVec::from_ints(&e6));
        assert!(m1.mul(&m1.inverse()).is_identity());
        let m2 = bw16_m2();
        let hb = h4_bar();
        for b in 0..4 {
            for i in 0..4 {
                for j in 0..16 {
                    let expected = if j / 4 == b { hb.entry(i, j % 4) } else { crate::exact::Rational::zero() };
                    assert_eq!(m2.entry(4 * b + i, j), expected);
                }
            }
        }
    }

    #[test]
    fn small_lattice_generators_preserve_lattice() {
        for name in ["Z3", "D4", "E8"] {
            let l = make_lattice(name).unwrap();
            let (gens, base) = automorphism_generators(&l).unwrap();
            assert!(l.contains(&base.to_rvector()));
            for g in &gens {
                assert!(g.is_orthogonal() && g.preserves(&l), "{name}");
            }
        }
    }
}
