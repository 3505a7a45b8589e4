mod common;

use betaedge::mc::{edge_histogram, ks_test, sample_batch, DensityCdf};
use betaedge::{Centring, Ensemble, FiniteDensity, ScalingMap};
use common::{gaussian, laguerre, q, rho};

const PREC: u32 = 256;

/// `Int x^k rho_N / N` by Simpson on `[lo, hi]`.
fn moment(d: &FiniteDensity, k: i32, lo: f64, hi: f64) -> f64 {
    let panels = 4000;
    let h = (hi - lo) / panels as f64;
    let f = |x: f64| x.powi(k) * rho(d, x) / d.n() as f64;
    let inner: f64 = (1..panels).map(|j| f(lo + j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(lo) + f(hi) + inner) * h / 3.0
}

fn sample_moment(ens: &Ensemble, n: usize, k: i32, seed: u64) -> (f64, f64) {
    let b = sample_batch(ens, n, 20_000, seed).unwrap();
    let xs: Vec<f64> = b.eigenvalues.iter().map(|x| x.powi(k)).collect();
    // Per-matrix averages are independent; use them for the standard error.
    let per: Vec<f64> = xs.chunks(n).map(|c| c.iter().sum::<f64>() / n as f64).collect();
    let m = per.iter().sum::<f64>() / per.len() as f64;
    let var = per.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (per.len() - 1) as f64;
    (m, (var / per.len() as f64).sqrt())
}

#[test]
fn gaussian_scale_matches_the_exact_second_moment() {
    for n in [5, 10] {
        let ens = gaussian(2);
        let d = FiniteDensity::new(&ens, n, PREC).unwrap();
        let exact = moment(&d, 2, -12.0, 12.0);
        // Closed form: E sum x^2 = N / beta + N (N - 1) / 2.
        assert!((exact - (0.5 + (n - 1) as f64 / 2.0)).abs() < 1e-8);
        let (m, se) = sample_moment(&ens, n, 2, 11);
        assert!((m - exact).abs() < 5.0 * se, "N={n}: {m} vs {exact} (se {se})");
    }
}

#[test]
fn laguerre_scale_matches_the_exact_first_moment() {
    for n in [5, 10] {
        let ens = laguerre(2, q(1, 2));
        let d = FiniteDensity::new(&ens, n, PREC).unwrap();
        let exact = moment(&d, 1, 0.0, 80.0);
        let (m, se) = sample_moment(&ens, n, 1, 12);
        assert!((m - exact).abs() < 5.0 * se, "N={n}: {m} vs {exact} (se {se})");
    }
}

#[test]
fn one_eigenvalue_per_matrix_follows_the_mean_density() {
    for (beta, n) in [(2, 20), (4, 20), (6, 30)] {
        let ens = gaussian(beta);
        let d = FiniteDensity::new(&ens, n, PREC).unwrap();
        let edge = (2.0 * n as f64).sqrt() + 3.0;
        let cdf = DensityCdf::new(&d, -edge, edge, 4001).unwrap();
        assert!((cdf.total() - 1.0).abs() < 1e-6);
        let batch = sample_batch(&ens, n, 10_000, 2024).unwrap();
        let ks = ks_test(&batch.picked, |x| cdf.eval(x)).unwrap();
        assert!(ks.p_value > 0.01, "beta={beta} N={n}: D={} p={}", ks.statistic, ks.p_value);
    }
}

#[test]
fn gaussian_largest_eigenvalue_sits_near_the_edge() {
    let batch = sample_batch(&gaussian(2), 50, 2_000, 5).unwrap();
    let mean = batch.largest.iter().sum::<f64>() / batch.largest.len() as f64;
    // Edge at sqrt(2N) = 10, shifted by the beta = 2 Tracy–Widom mean
    // (-1.7711) times the edge scale 1 / (sqrt 2 N^{1/6}).
    let expected = 10.0 - 1.7711 / (2f64.sqrt() * 50f64.powf(1.0 / 6.0));
    assert!((mean - expected).abs() < 0.05, "{mean} vs {expected}");
}

#[test]
fn histogram_counts_every_eigenvalue_in_the_window() {
    let ens = gaussian(2);
    let batch = sample_batch(&ens, 10, 500, 3).unwrap();
    let map = ScalingMap::for_ensemble(&ens, Centring::Centred, 10, 128).unwrap();
    let h = edge_histogram(&batch, &map, -1e6, 1e6, 10).unwrap();
    assert_eq!(h.total(), 5_000);
    assert!(edge_histogram(&batch, &map, 50.0, 60.0, 10).is_err());
}

#[test]
fn same_seed_same_batch() {
    let ens = laguerre(4, q(0, 1));
    assert_eq!(sample_batch(&ens, 8, 300, 77).unwrap(), sample_batch(&ens, 8, 300, 77).unwrap());
}
