use crate::exact::{RMatrix, RVector, Rational};

use super::{Decoder, Lattice, LatticeError};

/// Names accepted by [`make_lattice`], besides `Zn(k)` for any `k`.
pub const LATTICE_NAMES: &[&str] = &["Zn(n)", "D4", "E8", "BW16"];

/// Builds one of the standard lattices.
///
/// Accepted spellings are case-insensitive: `Zn(3)`, `Z3`, `D4`, `E8` and
/// `BW16` (also `Lambda16`). `A2` is recognized but has no rational basis in
/// orthonormal coordinates, so it is rejected with [`LatticeError::Unsupported`].
pub fn make_lattice(name: &str) -> Result<Lattice, LatticeError> {
    let key = name.trim().to_ascii_lowercase();
    match key.as_str() {
        "a2" => Err(LatticeError::Unsupported {
            name: name.to_string(),
            reason: "A2 has no rational generator matrix in orthonormal coordinates".into(),
        }),
        "d4" => d4(),
        "e8" => e8(),
        "bw16" | "lambda16" | "λ16" => bw16(),
        _ => match parse_zn(&key) {
            Some(n) => zn(n),
            None => Err(LatticeError::UnknownName(name.to_string())),
        },
    }
}

fn parse_zn(key: &str) -> Option<usize> {
    let digits = if let Some(rest) = key.strip_prefix("zn(") {
        rest.strip_suffix(')')?
    } else if let Some(rest) = key.strip_prefix("z^") {
        rest
    } else {
        key.strip_prefix('z')?
    };
    let n: usize = digits.parse().ok()?;
    (1..=64).contains(&n).then_some(n)
}

fn zn(n: usize) -> Result<Lattice, LatticeError> {
    Lattice::build(format!("Z{n}"), RMatrix::identity(n), Decoder::Cubic, Some(Rational::new(n as i64, 4)))
}

fn d4() -> Result<Lattice, LatticeError> {
    let basis = RMatrix::from_int_rows(&[
        vec![-1, -1, 0, 0],
        vec![1, -1, 0, 0],
        vec![0, 1, -1, 0],
        vec![0, 0, 1, -1],
    ]);
    Lattice::build("D4".into(), basis, Decoder::Checkerboard(vec![vec![0.0; 4]]), Some(Rational::one()))
}

fn e8() -> Result<Lattice, LatticeError> {
    let mut rows = vec![RVector::from_ints(&[2, 0, 0, 0, 0, 0, 0, 0])];
    for i in 0..6 {
        let mut v = vec![0i64; 8];
        v[i] = -1;
        v[i + 1] = 1;
        rows.push(RVector::from_ints(&v));
    }
    rows.push(RVector::scaled_ints(Rational::new(1, 2), &[1; 8]));
    let glue = vec![vec![0.0; 8], vec![0.5; 8]];
    Lattice::build("E8".into(), RMatrix::from_rows(rows)?, Decoder::Checkerboard(glue), Some(Rational::one()))
}

/// Rows of the lower block triangular generator matrix, doubled so that every entry is an integer.
const BW16_DOUBLED: [[i64; 16]; 16] = [
    [4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [2, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [2, 2, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [2, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [2, 2, 0, 0, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [2, 0, 2, 0, 2, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [2, 0, 0, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0],
    [2, 2, 0, 0, 0, 0, 0, 0, 2, 2, 0, 0, 0, 0, 0, 0],
    [2, 0, 2, 0, 0, 0, 0, 0, 2, 0, 2, 0, 0, 0, 0, 0],
    [1, 1, 1, 1, 0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0],
    [2, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0],
    [1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0],
    [1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0],
    [1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
];

/// Codewords of the first-order Reed–Muller code of length 16, as 0/1 vectors.
pub(crate) fn reed_muller_1_4() -> Vec<[u8; 16]> {
    (0u32..32)
        .map(|m| {
            let mut w = [0u8; 16];
            for (i, bit) in w.iter_mut().enumerate() {
                let mut b = m & 1;
                for k in 0..4 {
                    if m >> (k + 1) & 1 == 1 {
                        b ^= (i as u32 >> k) & 1;
                    }
                }
                *bit = b as u8;
            }
            w
        })
        .collect()
}

fn bw16() -> Result<Lattice, LatticeError> {
    let half = Rational::new(1, 2);
    let rows = BW16_DOUBLED.iter().map(|r| RVector::scaled_ints(half.clone(), r)).collect();
    let glue = reed_muller_1_4()
        .iter()
        .map(|c| c.iter().map(|&b| f64::from(b) * 0.5).collect())
        .collect();
    Lattice::build("BW16".into(), RMatrix::from_rows(rows)?, Decoder::Checkerboard(glue), Some(Rational::new(3, 2)))
}
