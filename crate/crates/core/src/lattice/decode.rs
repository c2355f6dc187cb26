//! Fast floating-point nearest-point decoders for lattices that are unions of
//! cosets of a checkerboard lattice.

/// Decoder chosen when a lattice is constructed.
#[derive(Debug, Clone)]
pub(crate) enum Decoder {
    /// The integer lattice: round every coordinate.
    Cubic,
    /// A union of translates `g + D_n` over the listed glue vectors.
    Checkerboard(Vec<Vec<f64>>),
    /// No structure known; fall back to sphere search.
    Search,
}

/// Nearest point of `D_n` (integer vectors with even coordinate sum).
pub(crate) fn decode_dn(x: &[f64], out: &mut [f64]) {
    let mut parity = 0i64;
    let mut worst = 0usize;
    let mut worst_err = -1.0;
    for (i, (&xi, o)) in x.iter().zip(out.iter_mut()).enumerate() {
        let r = xi.round();
        *o = r;
        parity += r as i64;
        let err = (xi - r).abs();
        if err > worst_err {
            worst_err = err;
            worst = i;
        }
    }
    if parity.rem_euclid(2) == 1 {
        let xi = x[worst];
        out[worst] += if xi >= out[worst] { 1.0 } else { -1.0 };
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl Decoder {
    /// Nearest lattice point to `x`, or `None` when the caller must search.
    pub(crate) fn decode(&self, x: &[f64]) -> Option<Vec<f64>> {
        match self {
            Decoder::Cubic => Some(x.iter().map(|v| v.round()).collect()),
            Decoder::Checkerboard(glue) => {
                let n = x.len();
                let mut shifted = vec![0.0; n];
                let mut cand = vec![0.0; n];
                let mut best = vec![0.0; n];
                let mut best_d = f64::INFINITY;
                for g in glue {
                    for ((s, xi), gi) in shifted.iter_mut().zip(x).zip(g) {
                        *s = xi - gi;
                    }
                    decode_dn(&shifted, &mut cand);
                    for (c, gi) in cand.iter_mut().zip(g) {
                        *c += gi;
                    }
                    let d = dist2(x, &cand);
                    if d < best_d {
                        best_d = d;
                        best.copy_from_slice(&cand);
                    }
                }
                Some(best)
            }
            Decoder::Search => None,
        }
    }
}
