//! Monte Carlo cross-check through the tridiagonal beta-ensemble models.
//!
//! Gaussian: `H = (1/sqrt 2) tridiag(chi_{beta(N-1)}, ..., chi_beta; N(0,2), ...)`
//! has eigenvalue density proportional to `prod |l_j - l_k|^beta exp(-sum l^2 / 2)`,
//! so `x = l / sqrt(beta)` carries the weight `exp(-beta x^2 / 2)`.
//!
//! Laguerre: with the lower bidiagonal `B`, `B_ii = chi_{beta(a + N - i) + 2}`
//! and `B_{i+1,i} = chi_{beta(N - i)}`, the eigenvalues of `B B^T` carry the
//! weight `l^{beta a / 2} exp(-l / 2)`, so `x = l / beta`.
//!
//! Samples are drawn in fixed-size shards, shard `k` from stream `k` of a
//! ChaCha8 generator seeded with the batch seed. Results therefore do not
//! depend on how many threads run the shards.

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::ensemble::{Ensemble, Family};
use crate::error::{Error, Result};
use crate::normalization::FiniteDensity;
use crate::scaling::ScalingMap;
use crate::tridiag;

/// Matrices per shard.
pub const SHARD_SIZE: usize = 256;
pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_BINS: usize = 60;
/// Bins expecting fewer counts than this are merged before the chi-square test.
pub const MIN_EXPECTED: f64 = 5.0;

fn chi<R: Rng + ?Sized>(rng: &mut R, dof: f64) -> Result<f64> {
    if dof <= 0.0 {
        return Err(Error::RngFailure(format!("chi distribution needs positive degrees of freedom, got {dof}")));
    }
    let g = Gamma::new(dof / 2.0, 2.0).map_err(|e| Error::RngFailure(e.to_string()))?;
    Ok(g.sample(rng).sqrt())
}

/// Eigenvalues of one random matrix of size `n`, in the coordinates of the
/// ensemble's weight, ascending.
pub fn sample_spectrum_with<R: Rng + ?Sized>(ensemble: &Ensemble, n: usize, rng: &mut R) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::Inadmissible("matrix size must be >= 1".into()));
    }
    let beta = ensemble.beta as f64;
    match &ensemble.family {
        Family::Gaussian => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            // N(0, 2) / sqrt 2 is standard normal.
            let diag: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            let off = (1..n).map(|k| Ok(chi(rng, beta * (n - k) as f64)? * s)).collect::<Result<Vec<_>>>()?;
            let ev = tridiag::eigenvalues(&diag, &off)?;
            let root = beta.sqrt();
            Ok(ev.into_iter().map(|l| l / root).collect())
        }
        fam => {
            let a = fam
                .laguerre_a(n)
                .and_then(|a| a.to_f64())
                .ok_or_else(|| Error::Inadmissible("Laguerre exponent is not representable".into()))?;
            let d = (1..=n).map(|i| chi(rng, beta * (a + (n - i) as f64) + 2.0)).collect::<Result<Vec<_>>>()?;
            let e = (1..n).map(|i| chi(rng, beta * (n - i) as f64)).collect::<Result<Vec<_>>>()?;
            let diag: Vec<f64> = (0..n).map(|i| d[i] * d[i] + if i > 0 { e[i - 1] * e[i - 1] } else { 0.0 }).collect();
            let off: Vec<f64> = (0..n - 1).map(|i| d[i] * e[i]).collect();
            let ev = tridiag::eigenvalues(&diag, &off)?;
            Ok(ev.into_iter().map(|l| (l / beta).max(0.0)).collect())
        }
    }
}

/// One spectrum from a fresh generator seeded with `seed`.
pub fn sample_spectrum(ensemble: &Ensemble, n: usize, seed: u64) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_spectrum_with(ensemble, n, &mut rng)
}

/// Eigenvalues of many independent matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub ensemble: String,
    pub beta: u32,
    pub n: usize,
    pub a: Option<f64>,
    pub seed: u64,
    pub samples: usize,
    /// All eigenvalues, `n` per matrix, matrix by matrix.
    pub eigenvalues: Vec<f64>,
    /// Largest eigenvalue of each matrix (unscaled).
    pub largest: Vec<f64>,
    /// One eigenvalue per matrix chosen uniformly at random: an iid sample
    /// from `rho_N / N`.
    pub picked: Vec<f64>,
}

/// Draw `samples` matrices. Shards run on the rayon pool.
pub fn sample_batch(ensemble: &Ensemble, n: usize, samples: usize, seed: u64) -> Result<SampleBatch> {
    let shards = samples.div_ceil(SHARD_SIZE);
    let parts: Vec<(Vec<f64>, Vec<f64>)> = (0..shards)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let count = SHARD_SIZE.min(samples - k * SHARD_SIZE);
            let mut all = Vec::with_capacity(count * n);
            let mut picked = Vec::with_capacity(count);
            for _ in 0..count {
                let ev = sample_spectrum_with(ensemble, n, &mut rng)?;
                picked.push(ev[rng.random_range(0..n)]);
                all.extend(ev);
            }
            Ok((all, picked))
        })
        .collect::<Result<_>>()?;
    let mut eigenvalues = Vec::with_capacity(samples * n);
    let mut picked = Vec::with_capacity(samples);
    for (all, p) in parts {
        eigenvalues.extend(all);
        picked.extend(p);
    }
    let largest = eigenvalues.chunks(n).map(|c| c[n - 1]).collect();
    Ok(SampleBatch {
        ensemble: ensemble.family.kind().to_string(),
        beta: ensemble.beta,
        n,
        a: ensemble.family.laguerre_a(n).and_then(|a| a.to_f64()),
        seed,
        samples,
        eigenvalues,
        largest,
        picked,
    })
}

/// Histogram over the scaled coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// `count / (samples * width)`: estimates the scaled density.
    pub density: Vec<f64>,
    pub samples: usize,
}

impl Histogram {
    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Histogram every eigenvalue of the batch in the scaled coordinate
/// `x = (l - offset) / scale` over `bins` equal bins of `[lo, hi]`.
pub fn edge_histogram(batch: &SampleBatch, map: &ScalingMap, lo: f64, hi: f64, bins: usize) -> Result<Histogram> {
    if !(hi > lo) || bins == 0 {
        return Err(Error::Inadmissible(format!("bad histogram window [{lo}, {hi}] with {bins} bins")));
    }
    let offset = map.offset.to_f64();
    let scale = map.scale.to_f64();
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &l in &batch.eigenvalues {
        let x = (l - offset) / scale;
        if x >= lo && x < hi {
            let k = (((x - lo) / width) as usize).min(bins - 1);
            counts[k] += 1;
        }
    }
    if counts.iter().all(|&c| c == 0) {
        return Err(Error::EmptyWindow);
    }
    let edges = (0..=bins).map(|k| lo + k as f64 * width).collect();
    let norm = batch.samples as f64 * width;
    let density = counts.iter().map(|&c| c as f64 / norm).collect();
    Ok(Histogram { edges, counts, density, samples: batch.samples })
}

/// `Int` of the scaled density over each bin, by 8-panel Simpson.
pub fn bin_integrals(density: &FiniteDensity, map: &ScalingMap, edges: &[f64]) -> Result<Vec<f64>> {
    const PANELS: usize = 8;
    let prec = density.prec();
    let f = |x: f64| -> Result<f64> {
        let s = map.apply(&Float::with_val(prec, x));
        if density.ensemble().family.is_laguerre() && s.is_sign_negative() {
            return Ok(0.0);
        }
        Ok((density.eval(&s)? * &map.scale).to_f64())
    };
    edges
        .windows(2)
        .map(|w| {
            let h = (w[1] - w[0]) / PANELS as f64;
            let mut sum = f(w[0])? + f(w[1])?;
            for k in 1..PANELS {
                sum += f(w[0] + k as f64 * h)? * if k % 2 == 1 { 4.0 } else { 2.0 };
            }
            Ok(sum * h / 3.0)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub merged_bins: usize,
}

/// Pearson chi-square of observed counts against expected counts, after
/// merging neighbouring bins until each expects at least [`MIN_EXPECTED`].
/// No parameter is estimated from the data and the in-window total is not
/// fixed, so the degrees of freedom equal the number of merged bins.
pub fn chi_square(observed: &[u64], expected: &[f64]) -> Result<ChiSquareTest> {
    if observed.len() != expected.len() {
        return Err(Error::GridMismatch);
    }
    let mut merged: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (&o, &e) in observed.iter().zip(expected) {
        acc.0 += o as f64;
        acc.1 += e;
        if acc.1 >= MIN_EXPECTED {
            merged.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.1 > 0.0 || acc.0 > 0.0 {
        match merged.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => merged.push(acc),
        }
    }
    if merged.is_empty() || merged.iter().all(|m| m.1 <= 0.0) {
        return Err(Error::EmptyWindow);
    }
    let statistic: f64 = merged.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let dof = merged.len();
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::DegenerateFit(e.to_string()))?;
    Ok(ChiSquareTest { statistic, dof, p_value: dist.sf(statistic), merged_bins: merged.len() })
}

/// Tabulated CDF of `rho_N / N` on `[lo, hi]`, cumulative Simpson on a
/// uniform grid with linear interpolation between nodes. On the half-line
/// the grid is uniform in `u = sqrt(x)`, which resolves the hard-edge spike.
#[derive(Clone, Debug)]
pub struct DensityCdf {
    nodes: Vec<f64>,
    cdf: Vec<f64>,
    sqrt: bool,
}

impl DensityCdf {
    pub fn new(density: &FiniteDensity, lo: f64, hi: f64, nodes: usize) -> Result<Self> {
        let nodes = nodes.max(3) | 1;
        let prec = density.prec();
        let sqrt = density.ensemble().family.is_laguerre() && lo >= 0.0;
        let (a, b) = if sqrt { (lo.sqrt(), hi.sqrt()) } else { (lo, hi) };
        let h = (b - a) / (nodes - 1) as f64;
        let us: Vec<f64> = (0..nodes).map(|k| a + k as f64 * h).collect();
        let n = density.n() as f64;
        let f: Vec<f64> = us
            .iter()
            .map(|&u| {
                let (x, jac) = if sqrt { (u * u, 2.0 * u) } else { (u, 1.0) };
                Ok(density.eval(&Float::with_val(prec, x))?.to_f64() / n * jac)
            })
            .collect::<Result<_>>()?;
        let mut cdf = vec![0.0; nodes];
        for k in 1..nodes {
            // Simpson over each node pair, trapezoid for the odd midpoints.
            cdf[k] = if k % 2 == 0 {
                cdf[k - 2] + h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k])
            } else {
                cdf[k - 1] + h / 2.0 * (f[k - 1] + f[k])
            };
        }
        Ok(DensityCdf { nodes: us, cdf, sqrt })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let u = if self.sqrt { x.max(0.0).sqrt() } else { x };
        let (lo, hi) = (self.nodes[0], *self.nodes.last().unwrap());
        if u <= lo {
            return 0.0;
        }
        if u >= hi {
            return *self.cdf.last().unwrap();
        }
        let h = self.nodes[1] - self.nodes[0];
        let k = (((u - lo) / h) as usize).min(self.nodes.len() - 2);
        let t = (u - self.nodes[k]) / h;
        self.cdf[k] * (1.0 - t) + self.cdf[k + 1] * t
    }

    pub fn total(&self) -> f64 {
        *self.cdf.last().unwrap()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsTest {
    pub statistic: f64,
    pub p_value: f64,
}

/// Kolmogorov survival function `Q(t) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 t^2)`.
pub fn kolmogorov_sf(t: f64) -> f64 {
    if t < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * t * t).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample Kolmogorov–Smirnov test, with the usual finite-sample
/// correction to the asymptotic p-value.
pub fn ks_test(sample: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KsTest> {
    if sample.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let d = xs.iter().enumerate().fold(0.0f64, |m, (i, &x)| {
        let f = cdf(x);
        m.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    });
    let root = n.sqrt();
    Ok(KsTest { statistic: d, p_value: kolmogorov_sf((root + 0.12 + 0.11 / root) * d) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn same_seed_same_spectrum() {
        let ens = Ensemble::gaussian(4).unwrap();
        assert_eq!(sample_spectrum(&ens, 12, 42).unwrap(), sample_spectrum(&ens, 12, 42).unwrap());
        assert_ne!(sample_spectrum(&ens, 12, 42).unwrap(), sample_spectrum(&ens, 12, 43).unwrap());
    }

    #[test]
    fn batches_do_not_depend_on_the_thread_count() {
        let ens = Ensemble::gaussian(2).unwrap();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let a = one.install(|| sample_batch(&ens, 6, 700, 9).unwrap());
        let b = sample_batch(&ens, 6, 700, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.eigenvalues.len(), 700 * 6);
    }

    #[test]
    fn laguerre_spectra_are_nonnegative() {
        let ens = Ensemble::laguerre_fixed(2, BigRational::from_integer(0.into())).unwrap();
        let batch = sample_batch(&ens, 10, 300, 1).unwrap();
        assert!(batch.eigenvalues.iter().all(|&l| l >= 0.0));
    }

    #[test]
    fn kolmogorov_tail() {
        assert!((kolmogorov_sf(1.36) - 0.0494).abs() < 1e-3);
        assert!((kolmogorov_sf(1.63) - 0.0098).abs() < 1e-3);
        assert_eq!(kolmogorov_sf(0.0), 1.0);
    }

    #[test]
    fn chi_square_merges_sparse_bins() {
        let t = chi_square(&[1, 2, 10, 10, 1], &[1.0, 2.0, 10.0, 10.0, 1.0]).unwrap();
        assert_eq!(t.statistic, 0.0);
        assert_eq!(t.dof, 2);
        assert!((t.p_value - 1.0).abs() < 1e-12);
    }
}
