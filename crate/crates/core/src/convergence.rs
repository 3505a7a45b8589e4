//! Finite-size diagnostics of the scaled edge density: successive
//! differences, the `N^(-1/3)` derivative comparison, deviations from the
//! beta = 2 limit, and convergence-rate fits.

use num_traits::Float as Real;
use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normalization::FiniteDensity;
use crate::oracles::limits::rho_limit_beta2;
use crate::scaling::{Centring, ScalingMap};
use crate::table::DensityTable;

/// Rate-fit probe points used when none are given.
pub const DEFAULT_PROBES: [f64; 3] = [-2.0, -1.0, 0.0];

/// Probes where the deviation is below this fraction of its largest
/// magnitude over the grid sit near a zero of the correction and are skipped.
pub const AMPLITUDE_FLOOR: f64 = 1e-3;

/// Deviation curves over an `N`-sweep on a common grid, with the fitted
/// convergence exponent. For successive differences the entry's `N` is the
/// smaller size of the pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrectionSeries {
    pub grid: Vec<f64>,
    pub entries: Vec<(usize, Vec<f64>)>,
    pub fitted_exponent: f64,
    pub fit_residual: f64,
}

/// Slope and RMS residual of a log-log least-squares fit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit<F> {
    pub exponent: F,
    pub residual: F,
}

fn check_grids(a: &DensityTable, b: &DensityTable) -> Result<()> {
    if !a.same_grid(b, 1e-12) {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

/// `(N1^(-2/3) - N2^(-2/3))^(-1) (S1 rho_N1(s) - S2 rho_N2(s))` from two
/// scaled tables, each built with the map of its own `N`. If the scaled
/// density were exactly `L + c N^(-2/3)` the result is `c` everywhere.
pub fn successive_difference(a: &DensityTable, b: &DensityTable) -> Result<Vec<f64>> {
    check_grids(a, b)?;
    let (n1, n2) = (a.meta.n, b.meta.n);
    if n1 == n2 {
        return Err(Error::Inadmissible(format!("successive difference needs two sizes, got N = {n1} twice")));
    }
    let prec = a.values.first().map_or(64, Float::prec).max(64);
    let third = Float::with_val(prec, -2) / 3u32;
    let p1 = Float::with_val(prec, n1 as u32).pow(&third);
    let p2 = Float::with_val(prec, n2 as u32).pow(&third);
    let factor = (p1 - p2).recip();
    Ok(a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (Float::with_val(prec, x - y) * &factor).to_f64())
        .collect())
}

/// The derivative diagnostic and the curve it is compared against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivCheck {
    pub grid: Vec<f64>,
    /// `(N^(1/3) / k#) S (rho_N(s'_x) - rho_N(s_x))`.
    pub diagnostic: Vec<f64>,
    /// `-S d/dx rho_N(s_x) = -S^2 rho_N'(s_x)`.
    pub comparison: Vec<f64>,
    pub k_sharp: f64,
}

/// Compares the uncentred (primed, for fixed Laguerre) and centred scaled
/// densities, normalized by the expected `k# N^(-1/3)` shift, with minus the
/// derivative of the centred one.
pub fn deriv_correction(density: &FiniteDensity, grid: &[Float]) -> Result<DerivCheck> {
    let ens = density.ensemble();
    let n = density.n();
    let prec = density.prec() + 32;
    let centred = ScalingMap::for_ensemble(ens, Centring::Centred, n, prec)?;
    let plain_mode = if matches!(ens.family, crate::ensemble::Family::LaguerreFixed { .. }) {
        Centring::Primed
    } else {
        Centring::Uncentred
    };
    let plain = ScalingMap::for_ensemble(ens, plain_mode, n, prec)?;
    let k = centred.k_sharp()?.clone();
    let s = centred.jacobian().clone();
    let factor = Float::with_val(prec, n as u32).cbrt() / &k * &s;
    let s2 = Float::with_val(prec, s.square_ref());

    let mut diagnostic = Vec::with_capacity(grid.len());
    let mut comparison = Vec::with_capacity(grid.len());
    for x in grid {
        let sc = centred.apply(x);
        let sp = plain.apply(x);
        let diff = Float::with_val(prec, density.eval(&sp)? - density.eval(&sc)?);
        diagnostic.push((diff * &factor).to_f64());
        let d = density.eval_derivative(&sc)?;
        comparison.push((-(d * &s2)).to_f64());
    }
    Ok(DerivCheck {
        grid: grid.iter().map(Float::to_f64).collect(),
        diagnostic,
        comparison,
        k_sharp: k.to_f64(),
    })
}

/// `N^(2/3) (S rho_N(s_x) - (Ai'^2 - x Ai^2))` for a scaled beta = 2 table.
pub fn deviation_from_limit(table: &DensityTable) -> Result<Vec<f64>> {
    if table.meta.beta != 2 {
        return Err(Error::BetaUnsupported(table.meta.beta));
    }
    let prec = table.values.first().map_or(128, Float::prec).max(128);
    let n23 = Float::with_val(prec, table.meta.n as u32).square().cbrt();
    table
        .grid
        .iter()
        .zip(&table.values)
        .map(|(x, v)| {
            let lim = rho_limit_beta2(x, prec)?;
            Ok((Float::with_val(prec, v - lim) * &n23).to_f64())
        })
        .collect()
}

/// Least-squares slope of `log |dev|` against `log N`, with the RMS of the
/// residuals.
pub fn fit_rate<F: Real>(points: &[(F, F)]) -> Result<RateFit<F>> {
    fit_rate_pooled(&[points.to_vec()])
}

/// One common slope fitted to several probe series, each with its own
/// intercept.
pub fn fit_rate_pooled<F: Real>(groups: &[Vec<(F, F)>]) -> Result<RateFit<F>> {
    let mut centred: Vec<(F, F)> = Vec::new();
    for g in groups {
        if g.len() < 3 {
            return Err(Error::DegenerateFit(format!("need at least 3 points, got {}", g.len())));
        }
        for (i, (n, d)) in g.iter().enumerate() {
            if !(*d > F::zero()) || !(*n > F::zero()) {
                return Err(Error::DegenerateFit("deviations and sizes must be positive".into()));
            }
            if g[..i].iter().any(|(m, _)| m == n) {
                return Err(Error::DegenerateFit("repeated N".into()));
            }
        }
        let len = F::from(g.len()).unwrap();
        let logs: Vec<(F, F)> = g.iter().map(|(n, d)| (n.ln(), d.ln())).collect();
        let mx = logs.iter().fold(F::zero(), |s, p| s + p.0) / len;
        let my = logs.iter().fold(F::zero(), |s, p| s + p.1) / len;
        centred.extend(logs.iter().map(|(x, y)| (*x - mx, *y - my)));
    }
    let sxx = centred.iter().fold(F::zero(), |s, (x, _)| s + *x * *x);
    let sxy = centred.iter().fold(F::zero(), |s, (x, y)| s + *x * *y);
    if sxx == F::zero() {
        return Err(Error::DegenerateFit("all N equal".into()));
    }
    let slope = sxy / sxx;
    let sse = centred.iter().fold(F::zero(), |s, (x, y)| {
        let r = *y - slope * *x;
        s + r * r
    });
    let residual = (sse / F::from(centred.len()).unwrap()).sqrt();
    Ok(RateFit { exponent: slope, residual })
}

/// Exponent `p` of the leading correction `c N^p` seen only through
/// differences `d_k = f(N_k) - f(N_{k+1})`.
///
/// Corrections to the scaled edge density come in powers of `N^(-1/3)`, so
/// the model carries the next term as well:
/// `d_k = c (N_k^p - N_{k+1}^p) + e (N_k^q - N_{k+1}^q)` with `q = p - 1/3`.
/// For each trial `p` the amplitudes are the linear least-squares optimum;
/// `p` is found by golden-section search on `[-3, -0.01]`. With
/// `subleading = false` the second term is dropped.
pub fn fit_difference_exponent(ns: &[f64], diffs: &[f64], subleading: bool) -> Result<RateFit<f64>> {
    let unknowns = if subleading { 2 } else { 1 };
    if ns.len() < 3 || diffs.len() + 1 != ns.len() || diffs.len() <= unknowns {
        return Err(Error::DegenerateFit(format!(
            "need more differences than amplitudes and one per consecutive pair, got {} sizes and {} differences",
            ns.len(),
            diffs.len()
        )));
    }
    if ns.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DegenerateFit("repeated N".into()));
    }
    let scale = diffs.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    if scale == 0.0 {
        return Err(Error::DegenerateFit("all differences vanish".into()));
    }
    let d: Vec<f64> = diffs.iter().map(|v| v / scale).collect();
    let basis = |p: f64| -> Vec<f64> { ns.windows(2).map(|w| w[0].powf(p) - w[1].powf(p)).collect() };
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    let sse = |p: f64| -> f64 {
        let u = basis(p);
        let fitted: Vec<f64> = if subleading {
            let v = basis(p - 1.0 / 3.0);
            let (uu, uv, vv) = (dot(&u, &u), dot(&u, &v), dot(&v, &v));
            let (ud, vd) = (dot(&u, &d), dot(&v, &d));
            let det = uu * vv - uv * uv;
            if det.abs() <= 1e-300 {
                return f64::INFINITY;
            }
            let c = (ud * vv - vd * uv) / det;
            let e = (uu * vd - uv * ud) / det;
            u.iter().zip(&v).map(|(a, b)| c * a + e * b).collect()
        } else {
            let c = dot(&u, &d) / dot(&u, &u);
            u.iter().map(|a| c * a).collect()
        };
        d.iter().zip(fitted).map(|(a, b)| (a - b).powi(2)).sum()
    };
    let (mut lo, mut hi) = (-3.0f64, -0.01f64);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (sse(x1), sse(x2));
    while hi - lo > 1e-10 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = sse(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = sse(x2);
        }
    }
    let p = (lo + hi) / 2.0;
    Ok(RateFit { exponent: p, residual: (sse(p) / diffs.len() as f64).sqrt() * scale })
}

/// Limit of `f(N) = L + c N^(-p1) + d N^(-p2)` from three sizes, by solving
/// the 3x3 system exactly.
pub fn richardson_limit(ns: [f64; 3], values: [f64; 3], exponents: [f64; 2]) -> Result<f64> {
    let rows: Vec<[f64; 3]> = ns.iter().map(|n| [1.0, n.powf(-exponents[0]), n.powf(-exponents[1])]).collect();
    let det = |m: &[[f64; 3]]| -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&rows);
    if d == 0.0 || !d.is_finite() {
        return Err(Error::DegenerateFit("Richardson system is singular".into()));
    }
    // Cramer's rule for the first unknown.
    let mut m = rows.clone();
    for (row, v) in m.iter_mut().zip(values) {
        row[0] = v;
    }
    Ok(det(&m) / d)
}

/// Pearson correlation of two equally long samples.
pub fn pearson<F: Real>(a: &[F], b: &[F]) -> Result<F> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::GridMismatch);
    }
    let n = F::from(a.len()).unwrap();
    let ma = a.iter().fold(F::zero(), |s, &x| s + x) / n;
    let mb = b.iter().fold(F::zero(), |s, &x| s + x) / n;
    let (mut sab, mut saa, mut sbb) = (F::zero(), F::zero(), F::zero());
    for (&x, &y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab = sab + dx * dy;
        saa = saa + dx * dx;
        sbb = sbb + dy * dy;
    }
    if saa == F::zero() || sbb == F::zero() {
        return Err(Error::DegenerateFit("constant sample".into()));
    }
    Ok(sab / (saa * sbb).sqrt())
}

/// Index of the grid node nearest `x`.
pub fn nearest_index(grid: &[f64], x: f64) -> Option<usize> {
    grid.iter()
        .enumerate()
        .min_by(|a, b| (a.1 - x).abs().total_cmp(&(b.1 - x).abs()))
        .map(|(i, _)| i)
}

/// Probe indices whose deviation clears the amplitude floor in every curve.
pub fn usable_probes(grid: &[f64], curves: &[&[f64]], probes: &[f64]) -> Vec<usize> {
    probes
        .iter()
        .filter_map(|&x| nearest_index(grid, x))
        .filter(|&i| {
            curves.iter().all(|c| {
                let max = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                c[i].abs() > AMPLITUDE_FLOOR * max
            })
        })
        .collect()
}

impl CorrectionSeries {
    /// Successive differences over consecutive pairs of scaled tables
    /// (ascending `N`), with the exponent fitted from the pooled probes.
    pub fn from_successive(tables: &[DensityTable], probes: &[f64]) -> Result<Self> {
        // Two amplitudes per probe need at least three differences.
        if tables.len() < 4 {
            return Err(Error::DegenerateFit(format!("need at least 4 sizes, got {}", tables.len())));
        }
        let grid = tables[0].grid_f64();
        let mut entries = Vec::new();
        for w in tables.windows(2) {
            entries.push((w[0].meta.n, successive_difference(&w[0], &w[1])?));
        }
        let ns: Vec<f64> = tables.iter().map(|t| t.meta.n as f64).collect();
        // Differences of the scaled density itself at each probe, undoing the prefactor.
        let raw: Vec<Vec<f64>> = tables
            .windows(2)
            .map(|w| w[0].values_f64().iter().zip(w[1].values_f64()).map(|(a, b)| a - b).collect())
            .collect();
        let curves: Vec<&[f64]> = entries.iter().map(|(_, v)| v.as_slice()).collect();
        let idx = usable_probes(&grid, &curves, probes);
        if idx.is_empty() {
            return Err(Error::DegenerateFit("no probe clears the amplitude floor".into()));
        }
        let fits = idx
            .iter()
            .map(|&i| fit_difference_exponent(&ns, &raw.iter().map(|d| d[i]).collect::<Vec<_>>(), true))
            .collect::<Result<Vec<_>>>()?;
        let k = fits.len() as f64;
        Ok(CorrectionSeries {
            grid,
            entries,
            fitted_exponent: fits.iter().map(|f| f.exponent).sum::<f64>() / k,
            fit_residual: fits.iter().map(|f| f.residual).fold(0.0, f64::max),
        })
    }

    /// Raw deviations `f_N - L` with a pooled log-log rate fit at the probes.
    pub fn from_deviations(grid: Vec<f64>, entries: Vec<(usize, Vec<f64>)>, probes: &[f64]) -> Result<Self> {
        let curves: Vec<&[f64]> = entries.iter().map(|(_, v)| v.as_slice()).collect();
        let idx = usable_probes(&grid, &curves, probes);
        if idx.is_empty() {
            return Err(Error::DegenerateFit("no probe clears the amplitude floor".into()));
        }
        let groups: Vec<Vec<(f64, f64)>> = idx
            .iter()
            .map(|&i| entries.iter().map(|(n, v)| (*n as f64, v[i].abs())).collect())
            .collect();
        let fit = fit_rate_pooled(&groups)?;
        Ok(CorrectionSeries { grid, entries, fitted_exponent: fit.exponent, fit_residual: fit.residual })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::TableMeta;

    fn table(n: usize, values: &[f64]) -> DensityTable {
        DensityTable {
            grid: (0..values.len()).map(|k| Float::with_val(128, k as f64 * 0.5)).collect(),
            values: values.iter().map(|&v| Float::with_val(128, v)).collect(),
            meta: TableMeta {
                ensemble: "gaussian".into(),
                beta: 4,
                n,
                a: None,
                alpha_ratio: None,
                scaling: None,
                precision_bits: 128,
                backend: "rational".into(),
                version: "test".into(),
            },
        }
    }

    #[test]
    fn exact_power_law_difference_is_the_coefficient() {
        let c = [0.3, -1.25, 4.0];
        let mk = |n: usize| {
            let v: Vec<f64> = c.iter().map(|c| 0.1 + c * (n as f64).powf(-2.0 / 3.0)).collect();
            table(n, &v)
        };
        for (n1, n2) in [(30, 40), (40, 50), (7, 3)] {
            let d = successive_difference(&mk(n1), &mk(n2)).unwrap();
            for (got, want) in d.iter().zip(c) {
                assert!((got - want).abs() < 1e-12, "{got} vs {want}");
            }
        }
    }

    #[test]
    fn difference_rejects_bad_pairs() {
        let a = table(30, &[1.0, 2.0]);
        assert!(matches!(successive_difference(&a, &a), Err(Error::Inadmissible(_))));
        assert_eq!(successive_difference(&a, &table(40, &[1.0])), Err(Error::GridMismatch));
    }

    #[test]
    fn synthetic_power_law_rate() {
        let pts: Vec<(f64, f64)> = [20.0, 30.0, 40.0, 50.0, 60.0].iter().map(|&n: &f64| (n, 7.0 * n.powf(-2.0 / 3.0))).collect();
        let fit = fit_rate(&pts).unwrap();
        assert!((fit.exponent + 2.0 / 3.0).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
        let pts32: Vec<(f32, f32)> = pts.iter().map(|&(a, b)| (a as f32, b as f32)).collect();
        assert!((fit_rate(&pts32).unwrap().exponent + 2.0 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn rate_fit_rejects_degenerate_input() {
        assert!(matches!(fit_rate(&[(1.0, 1.0), (2.0, 0.5)]), Err(Error::DegenerateFit(_))));
        assert!(matches!(fit_rate(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]), Err(Error::DegenerateFit(_))));
        assert!(matches!(fit_rate(&[(2.0, 1.0), (2.0, 0.5), (3.0, 1.0)]), Err(Error::DegenerateFit(_))));
    }

    #[test]
    fn difference_exponent_recovers_power() {
        let ns = [20.0, 30.0, 40.0, 50.0, 60.0];
        for p in [-1.0 / 3.0, -2.0 / 3.0, -1.0] {
            let f = |n: f64| 0.4 + 2.5 * n.powf(p);
            let d: Vec<f64> = ns.windows(2).map(|w| f(w[0]) - f(w[1])).collect();
            let fit = fit_difference_exponent(&ns, &d, false).unwrap();
            assert!((fit.exponent - p).abs() < 1e-7, "{p}: {}", fit.exponent);
            let g = |n: f64| f(n) - 4.0 * n.powf(p - 1.0 / 3.0);
            let d: Vec<f64> = ns.windows(2).map(|w| g(w[0]) - g(w[1])).collect();
            let fit = fit_difference_exponent(&ns, &d, true).unwrap();
            assert!((fit.exponent - p).abs() < 1e-6, "{p}: {}", fit.exponent);
        }
    }

    #[test]
    fn richardson_is_exact_on_its_ansatz() {
        let f = |n: f64| 0.25 - 0.7 * n.powf(-2.0 / 3.0) + 1.9 / n;
        let ns = [40.0, 50.0, 60.0];
        let l = richardson_limit(ns, ns.map(f), [2.0 / 3.0, 1.0]).unwrap();
        assert!((l - 0.25).abs() < 1e-12);
    }

    #[test]
    fn pearson_basics() {
        let a = [1.0, 2.0, 3.0, 4.0];
        assert!((pearson(&a, &[2.0, 4.0, 6.0, 8.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson(&a, &[-1.0, -2.0, -3.0, -4.0]).unwrap() + 1.0).abs() < 1e-15);
        assert!(pearson(&a, &[1.0, 1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn deviation_needs_beta_two() {
        assert_eq!(deviation_from_limit(&table(30, &[0.1])), Err(Error::BetaUnsupported(4)));
    }
}
