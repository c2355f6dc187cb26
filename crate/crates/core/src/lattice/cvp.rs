//! Closest-point search.
//!
//! A Schnorr–Euchner depth-first enumeration over an LLL-reduced copy of the
//! basis locates the minimal distance in floating point while collecting every
//! point inside a slightly inflated radius. The candidates are then compared
//! exactly, so the returned tie set is complete and exact.

/// Floating-point search data derived from a basis. Rows of `reduced` are
/// `unimodular * basis`.
#[derive(Debug, Clone)]
pub(crate) struct SearchBasis {
    n: usize,
    reduced: Vec<Vec<f64>>,
    unimodular: Vec<Vec<i64>>,
    /// Squared Gram–Schmidt lengths.
    gs_norm2: Vec<f64>,
    /// `mu[i][j]` for `j < i`.
    mu: Vec<Vec<f64>>,
    /// Gram–Schmidt vectors scaled by `1/|b*_i|^2`, for projecting targets.
    gs_dual: Vec<Vec<f64>>,
}

const REL_SLACK: f64 = 1e-9;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gram_schmidt(rows: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>, Vec<Vec<f64>>) {
    let n = rows.len();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    let mut mu = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut v = rows[i].clone();
        for j in 0..i {
            mu[i][j] = dot(&rows[i], &star[j]) / norms[j];
            for (x, s) in v.iter_mut().zip(&star[j]) {
                *x -= mu[i][j] * s;
            }
        }
        norms.push(dot(&v, &v));
        star.push(v);
    }
    (star, norms, mu)
}

impl SearchBasis {
    pub(crate) fn new(basis: &[Vec<f64>]) -> Self {
        let n = basis.len();
        let mut rows = basis.to_vec();
        let mut unimodular: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        lll_reduce(&mut rows, &mut unimodular, 0.99);
        let (star, gs_norm2, mu) = gram_schmidt(&rows);
        let gs_dual = star
            .iter()
            .zip(&gs_norm2)
            .map(|(s, &nn)| s.iter().map(|x| x / nn).collect())
            .collect();
        SearchBasis { n, reduced: rows, unimodular, gs_norm2, mu, gs_dual }
    }

    /// Converts reduced-basis coefficients into coefficients of the original basis.
    pub(crate) fn to_original(&self, reduced_coeffs: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.n];
        for (i, &c) in reduced_coeffs.iter().enumerate() {
            if c != 0 {
                for (o, &u) in out.iter_mut().zip(&self.unimodular[i]) {
                    *o += c * u;
                }
            }
        }
        out
    }

    pub(crate) fn point(&self, reduced_coeffs: &[i64]) -> Vec<f64> {
        let mut p = vec![0.0; self.n];
        for (i, &c) in reduced_coeffs.iter().enumerate() {
            if c != 0 {
                for (x, b) in p.iter_mut().zip(&self.reduced[i]) {
                    *x += c as f64 * b;
                }
            }
        }
        p
    }

    fn project(&self, x: &[f64]) -> Vec<f64> {
        self.gs_dual.iter().map(|d| dot(d, x)).collect()
    }

    /// All reduced-basis coefficient vectors whose squared distance to `x`
    /// lies within the floating-point slack of the minimum, together with
    /// that minimum.
    pub(crate) fn near_minimal(&self, x: &[f64]) -> (f64, Vec<Vec<i64>>) {
        let y = self.project(x);
        let mut state = SearchState {
            best: f64::INFINITY,
            collect: true,
            found: Vec::new(),
            coeffs: vec![0; self.n],
            scale: self.gs_norm2.iter().cloned().fold(0.0, f64::max),
        };
        self.descend(self.n - 1, 0.0, &y, &mut state);
        let bound = state.bound();
        let found = state.found.into_iter().filter(|(d, _)| *d <= bound).map(|(_, c)| c).collect();
        (state.best, found)
    }

    /// A single closest point (reduced coefficients) and its squared distance.
    pub(crate) fn closest_one(&self, x: &[f64]) -> (f64, Vec<i64>) {
        let y = self.project(x);
        let mut state = SearchState {
            best: f64::INFINITY,
            collect: false,
            found: Vec::new(),
            coeffs: vec![0; self.n],
            scale: 0.0,
        };
        self.descend(self.n - 1, 0.0, &y, &mut state);
        let (d, c) = state.found.pop().expect("search always reaches a leaf");
        (d, c)
    }

    /// All reduced coefficient vectors within squared distance `radius2` of `x`.
    pub(crate) fn within(&self, x: &[f64], radius2: f64) -> Vec<Vec<i64>> {
        let y = self.project(x);
        let mut out = Vec::new();
        let mut coeffs = vec![0i64; self.n];
        self.descend_fixed(self.n - 1, 0.0, &y, radius2, &mut coeffs, &mut out);
        out
    }

    fn center(&self, k: usize, y: &[f64], coeffs: &[i64]) -> f64 {
        let mut c = y[k];
        for j in k + 1..self.n {
            c -= coeffs[j] as f64 * self.mu[j][k];
        }
        c
    }

    fn descend(&self, k: usize, partial: f64, y: &[f64], state: &mut SearchState) {
        let center = self.center(k, y, &state.coeffs);
        let r = self.gs_norm2[k];
        let start = center.round() as i64;
        let mut up = start;
        let mut down = start - 1;
        let mut up_open = true;
        let mut down_open = true;
        while up_open || down_open {
            let du = if up_open { r * (center - up as f64).powi(2) } else { f64::INFINITY };
            let dd = if down_open { r * (center - down as f64).powi(2) } else { f64::INFINITY };
            let (ci, d) = if du <= dd { (up, du) } else { (down, dd) };
            let total = partial + d;
            if total > state.bound() {
                if du <= dd {
                    up_open = false;
                } else {
                    down_open = false;
                }
                continue;
            }
            if du <= dd {
                up += 1;
            } else {
                down -= 1;
            }
            state.coeffs[k] = ci;
            if k == 0 {
                if total < state.best {
                    state.best = total;
                }
                if state.collect {
                    state.found.push((total, state.coeffs.clone()));
                } else if state.found.last().map_or(true, |(b, _)| total < *b) {
                    state.found.clear();
                    state.found.push((total, state.coeffs.clone()));
                }
            } else {
                self.descend(k - 1, total, y, state);
            }
        }
        state.coeffs[k] = 0;
    }

    fn descend_fixed(
        &self,
        k: usize,
        partial: f64,
        y: &[f64],
        radius2: f64,
        coeffs: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        let center = self.center(k, y, coeffs);
        let r = self.gs_norm2[k];
        let span = ((radius2 - partial).max(0.0) / r).sqrt();
        let lo = (center - span).ceil() as i64;
        let hi = (center + span).floor() as i64;
        for ci in lo..=hi {
            let total = partial + r * (center - ci as f64).powi(2);
            if total > radius2 {
                continue;
            }
            coeffs[k] = ci;
            if k == 0 {
                out.push(coeffs.clone());
            } else {
                self.descend_fixed(k - 1, total, y, radius2, coeffs, out);
            }
        }
        coeffs[k] = 0;
    }
}

struct SearchState {
    best: f64,
    collect: bool,
    found: Vec<(f64, Vec<i64>)>,
    coeffs: Vec<i64>,
    scale: f64,
}

impl SearchState {
    fn bound(&self) -> f64 {
        if self.collect {
            self.best * (1.0 + REL_SLACK) + REL_SLACK * self.scale
        } else {
            self.best
        }
    }
}

/// Textbook LLL on rows, tracking the unimodular transform exactly.
fn lll_reduce(rows: &mut [Vec<f64>], unimodular: &mut [Vec<i64>], delta: f64) {
    let n = rows.len();
    if n < 2 {
        return;
    }
    let mut k = 1;
    let (mut _star, mut norms, mut mu) = gram_schmidt(rows);
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        if guard > 100_000 {
            break;
        }
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if q != 0.0 {
                let qi = q as i64;
                let (rj, rk) = (rows[j].clone(), &mut rows[k]);
                for (a, b) in rk.iter_mut().zip(&rj) {
                    *a -= q * b;
                }
                let uj = unimodular[j].clone();
                for (a, b) in unimodular[k].iter_mut().zip(&uj) {
                    *a -= qi * b;
                }
                let (s, nn, m) = gram_schmidt(rows);
                _star = s;
                norms = nn;
                mu = m;
            }
        }
        if norms[k] >= (delta - mu[k][k - 1].powi(2)) * norms[k - 1] {
            k += 1;
        } else {
            rows.swap(k, k - 1);
            unimodular.swap(k, k - 1);
            let (s, nn, m) = gram_schmidt(rows);
            _star = s;
            norms = nn;
            mu = m;
            k = k.saturating_sub(1).max(1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lll_keeps_lattice() {
        let basis = vec![vec![1.0, 0.0], vec![7.0, 1.0]];
        let sb = SearchBasis::new(&basis);
        for (i, row) in sb.reduced.iter().enumerate() {
            let orig = sb.unimodular[i].iter().zip(&basis).fold(vec![0.0; 2], |mut acc, (&c, b)| {
                acc[0] += c as f64 * b[0];
                acc[1] += c as f64 * b[1];
                acc
            });
            assert_eq!(&orig, row);
        }
        assert!(sb.reduced.iter().all(|r| dot(r, r) <= 1.0 + 1e-12));
    }

    #[test]
    fn ties_in_square_lattice() {
        let sb = SearchBasis::new(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
        let (best, pts) = sb.near_minimal(&[0.5, 0.5]);
        assert!((best - 0.5).abs() < 1e-12);
        assert_eq!(pts.len(), 4);
        let (_, one) = sb.closest_one(&[0.2, 0.9]);
        assert_eq!(sb.point(&one), vec![0.0, 1.0]);
        assert_eq!(sb.within(&[0.0, 0.0], 1.0).len(), 5);
    }
}
