use serde::Serialize;

use super::{sample_norms2, KahanSum, McError};
use crate::exact::RMatrix;
use crate::lattice::Lattice;

/// Estimated variance of the sample mean, `Σ (x_i - mean)^2 / (N (N - 1))`.
pub fn direct_variance(samples: &[f64]) -> Result<f64, McError> {
    let n = samples.len();
    if n < 2 {
        return Err(McError::TooFewSamples(n as u64));
    }
    let mean = mean(samples);
    let mut ss = KahanSum::default();
    for x in samples {
        ss.add((x - mean) * (x - mean));
    }
    Ok(ss.value() / (n as f64 * (n as f64 - 1.0)))
}

/// Jackknife estimate of the variance of the sample mean: the sample
/// variance of the means of `groups` contiguous groups, divided by `groups`.
/// Samples beyond the last full group are dropped.
pub fn jackknife_variance(samples: &[f64], groups: usize) -> Result<f64, McError> {
    if groups < 2 {
        return Err(McError::TooFewGroups(groups));
    }
    if groups > samples.len() {
        return Err(McError::GroupsExceedSamples { groups, samples: samples.len() });
    }
    let size = samples.len() / groups;
    let means: Vec<f64> = samples[..size * groups].chunks(size).map(mean).collect();
    direct_variance(&means)
}

fn mean(xs: &[f64]) -> f64 {
    let mut s = KahanSum::default();
    for x in xs {
        s.add(*x);
    }
    s.value() / xs.len() as f64
}

/// Standard deviations of `U_hat` from both estimators in one experiment.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub rep: usize,
    pub u_hat: f64,
    pub direct_sd: f64,
    pub jackknife_sd: f64,
}

/// Repeated experiments comparing the direct and jackknife estimators.
/// Spreads are root-mean-square deviations from the exact standard
/// deviation when it is known (cubic lattices, `n / (180 N)`), and sample
/// standard deviations otherwise.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub lattice: String,
    pub samples: u64,
    pub groups: usize,
    pub reps: usize,
    pub seed: u64,
    pub exact_sd: Option<f64>,
    pub direct_spread: Option<f64>,
    pub jackknife_spread: Option<f64>,
    pub rows: Vec<ComparisonRow>,
}

impl Comparison {
    /// Jackknife spread over direct spread.
    pub fn spread_ratio(&self) -> Option<f64> {
        Some(self.jackknife_spread? / self.direct_spread?)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("rep,u_hat,direct_sd,jackknife_sd\n");
        for r in &self.rows {
            out.push_str(&format!("{},{:e},{:e},{:e}\n", r.rep, r.u_hat, r.direct_sd, r.jackknife_sd));
        }
        out
    }
}

/// Runs `reps` experiments of `samples` samples each. Experiment `k` uses
/// seed `seed + k`. Both estimators are applied to the squared norms and
/// scaled by the volume, as in [`super::estimate`].
pub fn compare_estimators(lattice: &Lattice, samples: u64, groups: usize, reps: usize, seed: u64) -> Result<Comparison, McError> {
    let n = lattice.dim();
    let cubic = *lattice.basis() == RMatrix::identity(n);
    let exact_sd = cubic.then(|| (n as f64 / (180.0 * samples as f64)).sqrt());
    let v = lattice.volume().to_f64();
    let mut rows = Vec::with_capacity(reps);
    for rep in 0..reps {
        let xs = sample_norms2(lattice, samples, seed.wrapping_add(rep as u64));
        rows.push(ComparisonRow {
            rep,
            u_hat: v * mean(&xs),
            direct_sd: v * direct_variance(&xs)?.sqrt(),
            jackknife_sd: v * jackknife_variance(&xs, groups)?.sqrt(),
        });
    }
    let spread = |f: fn(&ComparisonRow) -> f64| -> Option<f64> {
        if rows.len() < 2 {
            return None;
        }
        let vals: Vec<f64> = rows.iter().map(f).collect();
        Some(match exact_sd {
            Some(e) => (vals.iter().map(|v| (v - e) * (v - e)).sum::<f64>() / vals.len() as f64).sqrt(),
            None => direct_variance(&vals).ok()?.sqrt() * (vals.len() as f64).sqrt(),
        })
    };
    let direct_spread = spread(|r| r.direct_sd);
    let jackknife_spread = spread(|r| r.jackknife_sd);
    Ok(Comparison {
        lattice: lattice.name().to_string(),
        samples,
        groups,
        reps,
        seed,
        exact_sd,
        direct_spread,
        jackknife_spread,
        rows,
    })
}
