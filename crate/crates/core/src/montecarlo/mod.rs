//! Uniform sampling over Voronoi regions and Monte-Carlo estimates of the
//! second moment `U` and the quantizer constant `G`, with the direct variance
//! estimator and a jackknife comparator.
//!
//! Samples are drawn in blocks of [`BLOCK`] from independent ChaCha8 streams
//! indexed by block number, so results depend only on the seed and the
//! sample count, never on the number of worker threads.

mod compare;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use compare::{compare_estimators, direct_variance, jackknife_variance, Comparison, ComparisonRow};

use crate::lattice::Lattice;

/// Samples per random stream.
pub const BLOCK: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McError {
    #[error("at least two samples are needed, got {0}")]
    TooFewSamples(u64),
    #[error("need at least two groups, got {0}")]
    TooFewGroups(usize),
    #[error("{groups} groups do not fit {samples} samples")]
    GroupsExceedSamples { groups: usize, samples: usize },
}

/// A Monte-Carlo estimate of `U` and `G` with estimated variances.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    pub samples: u64,
    pub seed: u64,
    pub u_hat: f64,
    pub var_u_hat: f64,
    pub g_hat: f64,
    pub var_g_hat: f64,
}

impl McEstimate {
    pub fn sd_g(&self) -> f64 {
        self.var_g_hat.sqrt()
    }
}

/// Kahan-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Float basis rows of a lattice, cached for repeated sampling.
pub struct Sampler<'a> {
    lattice: &'a Lattice,
    basis: Vec<Vec<f64>>,
}

impl<'a> Sampler<'a> {
    pub fn new(lattice: &'a Lattice) -> Self {
        Sampler { lattice, basis: lattice.basis_f64() }
    }

    /// A point uniform in the Voronoi region: a uniform point of the
    /// fundamental parallelepiped minus its nearest lattice point.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let n = self.basis.len();
        let mut u = vec![0.0; n];
        for row in &self.basis {
            let t: f64 = rng.random();
            for (ui, b) in u.iter_mut().zip(row) {
                *ui += t * b;
            }
        }
        let p = self.lattice.nearest_point_f64(&u);
        u.iter().zip(&p).map(|(a, b)| a - b).collect()
    }
}

/// One uniform sample of the Voronoi region.
pub fn sample_voronoi<R: Rng>(lattice: &Lattice, rng: &mut R) -> Vec<f64> {
    Sampler::new(lattice).sample(rng)
}

/// The random stream of block `block`.
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Squared norms of `count` samples, in generation order.
pub fn sample_norms2(lattice: &Lattice, count: u64, seed: u64) -> Vec<f64> {
    let sampler = Sampler::new(lattice);
    let blocks = count.div_ceil(BLOCK);
    (0..blocks)
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut rng = block_rng(seed, b);
            let len = BLOCK.min(count - b * BLOCK);
            (0..len)
                .map(|_| sampler.sample(&mut rng).iter().map(|x| x * x).sum::<f64>())
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Sums of `‖x‖^2` and `‖x‖^4` over `count` samples.
fn moment_sums(lattice: &Lattice, count: u64, seed: u64) -> (f64, f64) {
    let sampler = Sampler::new(lattice);
    let blocks = count.div_ceil(BLOCK);
    let partial: Vec<(f64, f64)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b);
            let len = BLOCK.min(count - b * BLOCK);
            let (mut s2, mut s4) = (KahanSum::default(), KahanSum::default());
            for _ in 0..len {
                let r2: f64 = sampler.sample(&mut rng).iter().map(|x| x * x).sum();
                s2.add(r2);
                s4.add(r2 * r2);
            }
            (s2.value(), s4.value())
        })
        .collect();
    let (mut s2, mut s4) = (KahanSum::default(), KahanSum::default());
    for (a, b) in partial {
        s2.add(a);
        s4.add(b);
    }
    (s2.value(), s4.value())
}

/// Estimates `U = ∫ ‖x‖^2` over the Voronoi region from `count` samples as
/// `V` times the sample mean of `‖x‖^2`, its variance with the one-pass
/// unbiased estimator, and `G = U / (n V^(1 + 2/n))` with its variance.
pub fn estimate(lattice: &Lattice, count: u64, seed: u64) -> Result<McEstimate, McError> {
    if count < 2 {
        return Err(McError::TooFewSamples(count));
    }
    let (s2, s4) = moment_sums(lattice, count, seed);
    let nf = count as f64;
    let mean2 = s2 / nf;
    let var_mean = ((s4 / nf - mean2 * mean2) / (nf - 1.0)).max(0.0);
    let v = lattice.volume().to_f64();
    let n = lattice.dim() as f64;
    let norm = n * v.powf(1.0 + 2.0 / n);
    let u_hat = v * mean2;
    let var_u_hat = v * v * var_mean;
    Ok(McEstimate { samples: count, seed, u_hat, var_u_hat, g_hat: u_hat / norm, var_g_hat: var_u_hat / (norm * norm) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_lattice;

    #[test]
    fn kahan_recovers_small_terms() {
        let mut k = KahanSum::default();
        k.add(1.0);
        for _ in 0..10_000 {
            k.add(1e-16);
        }
        assert!((k.value() - (1.0 + 1e-12)).abs() < 1e-15);
    }

    #[test]
    fn streams_are_independent_of_block_scheduling() {
        let z3 = make_lattice("Z3").unwrap();
        let a = sample_norms2(&z3, BLOCK + 10, 7);
        let b = sample_norms2(&z3, 10, 7);
        assert_eq!(&a[..10], &b[..]);
        assert_eq!(a.len() as u64, BLOCK + 10);
        assert!(estimate(&z3, 1, 0).is_err());
    }
}
