//! The five subcommands. Each returns the tables to emit; work over the
//! requested sizes runs on the rayon pool and is collected in input order.

use betaedge::convergence::{
    deriv_correction, deviation_from_limit, pearson, successive_difference, CorrectionSeries, DEFAULT_PROBES,
};
use betaedge::mc::{bin_integrals, chi_square, edge_histogram, ks_test, sample_batch, DensityCdf};
use betaedge::mp::{parse_decimal, to_decimal};
use betaedge::oracles::{airy_prec, rho_correction_beta2, rho_limit_beta2, CorrectionCase};
use betaedge::scaling::{b_constant, k_sharp};
use betaedge::{scaled_density, DensityTable, Family, FiniteDensity, Mpf, Rational, ScalingMap};
use rayon::prelude::*;
use rug::Float;
use serde_json::json;

use crate::config::{Backend, JobConfig, DEFAULT_REFERENCE_ALPHA};
use crate::error::{CliError, CliResult};
use crate::output::{fmt_f64, Table};

fn progress(cfg: &JobConfig, n: usize) -> impl FnMut(u32, usize) {
    let quiet = cfg.quiet;
    let beta = cfg.beta;
    let mut last = None;
    move |alpha, p| {
        if quiet {
            return;
        }
        if last != Some(alpha) || p % 16 == 0 {
            eprintln!("[N={n}] stage alpha={alpha}/{beta}, step p={p}");
            last = Some(alpha);
        }
    }
}

/// Finite-N density with the configured backend.
pub fn finite_density(cfg: &JobConfig, n: usize) -> CliResult<FiniteDensity> {
    let ens = cfg.ensemble();
    let prec = cfg.precision_bits;
    let pr = progress(cfg, n);
    let d = match cfg.backend {
        Backend::Rational => FiniteDensity::with_backend::<Rational, _>(ens, n, prec, pr),
        Backend::Bigfloat => match prec {
            0..=128 => FiniteDensity::with_backend::<Mpf<128>, _>(ens, n, prec, pr),
            129..=256 => FiniteDensity::with_backend::<Mpf<256>, _>(ens, n, prec, pr),
            257..=512 => FiniteDensity::with_backend::<Mpf<512>, _>(ens, n, prec, pr),
            513..=1024 => FiniteDensity::with_backend::<Mpf<1024>, _>(ens, n, prec, pr),
            _ => FiniteDensity::with_backend::<Mpf<2048>, _>(ens, n, prec, pr),
        },
    }?;
    if !cfg.quiet {
        eprintln!("[N={n}] done");
    }
    Ok(d)
}

fn grid(cfg: &JobConfig) -> Vec<Float> {
    cfg.grid_spec.nodes(cfg.precision_bits)
}

fn map_for(cfg: &JobConfig, n: usize) -> CliResult<Option<ScalingMap>> {
    cfg.centring()
        .map(|c| ScalingMap::for_ensemble(cfg.ensemble(), c, n, cfg.precision_bits).map_err(CliError::from))
        .transpose()
}

fn density_table(cfg: &JobConfig, d: &FiniteDensity, grid: &[Float]) -> CliResult<DensityTable> {
    Ok(match map_for(cfg, d.n())? {
        Some(map) => scaled_density(&map, d, grid)?,
        None => d.table(grid)?,
    })
}

fn distinct_sorted(cfg: &JobConfig) -> CliResult<Vec<usize>> {
    let mut ns = cfg.n.clone();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() != cfg.n.len() {
        return Err(CliError::Config("matrix sizes must be distinct".into()));
    }
    Ok(ns)
}

pub fn density(cfg: &JobConfig) -> CliResult<Vec<Table>> {
    let g = grid(cfg);
    cfg.n
        .par_iter()
        .map(|&n| {
            let d = finite_density(cfg, n)?;
            let t = density_table(cfg, &d, &g)?;
            let column = if t.meta.scaling.is_some() { "scaled_density" } else { "density" };
            let mut table = Table::new(format!("N{n}"), &["x", column]);
            table.meta("table", &t.meta)?;
            table.rows = t.rows(cfg.digits).into_iter().map(|(x, v)| vec![x, v]).collect();
            Ok(table)
        })
        .collect()
}

fn correction_case(family: &Family) -> CorrectionCase {
    match family {
        Family::Gaussian => CorrectionCase::Gaussian,
        Family::LaguerreFixed { .. } => CorrectionCase::LaguerreFixed,
        Family::LaguerreProportional { alpha_ratio } => {
            CorrectionCase::LaguerreProportional { alpha_ratio: alpha_ratio.clone() }
        }
    }
}

pub fn correction(cfg: &JobConfig) -> CliResult<Vec<Table>> {
    if cfg.centring().is_none() {
        return Err(CliError::Config("`correction` needs an edge map; --scaling none is not allowed".into()));
    }
    let ns = distinct_sorted(cfg)?;
    let g = grid(cfg);
    let tables: Vec<DensityTable> = ns
        .par_iter()
        .map(|&n| density_table(cfg, &finite_density(cfg, n)?, &g))
        .collect::<CliResult<_>>()?;

    let mut columns = vec!["x".to_string()];
    let mut curves: Vec<Vec<f64>> = Vec::new();
    for w in tables.windows(2) {
        columns.push(format!("dev_{}_{}", w[0].meta.n, w[1].meta.n));
        curves.push(successive_difference(&w[0], &w[1])?);
    }
    let mut table = Table::with_columns("correction", Vec::new());
    table.meta("sizes", &ns)?;
    table.meta("scaling", tables[0].meta.scaling.as_ref().map(|s| s.case.clone()))?;
    if tables.len() >= 4 {
        let series = CorrectionSeries::from_successive(&tables, &DEFAULT_PROBES)?;
        table.meta(
            "successive_fit",
            json!({ "probes": DEFAULT_PROBES, "exponent": series.fitted_exponent, "residual": series.fit_residual }),
        )?;
    }
    if cfg.beta == 2 {
        let mut raw = Vec::new();
        for t in &tables {
            let dev = deviation_from_limit(t)?;
            let n23 = (t.meta.n as f64).powf(2.0 / 3.0);
            raw.push((t.meta.n, dev.iter().map(|v| v / n23).collect::<Vec<_>>()));
            columns.push(format!("limit_dev_N{}", t.meta.n));
            curves.push(dev);
        }
        let case = correction_case(&cfg.ensemble().family);
        columns.push("rho_correction".into());
        curves.push(
            g.iter()
                .map(|x| Ok(rho_correction_beta2(&case, x, cfg.precision_bits)?.to_f64()))
                .collect::<CliResult<_>>()?,
        );
        if raw.len() >= 3 {
            let series = CorrectionSeries::from_deviations(tables[0].grid_f64(), raw, &DEFAULT_PROBES)?;
            table.meta(
                "limit_fit",
                json!({ "probes": DEFAULT_PROBES, "exponent": series.fitted_exponent, "residual": series.fit_residual }),
            )?;
        }
    }
    table.columns = columns;
    table.rows = g
        .iter()
        .enumerate()
        .map(|(i, x)| {
            std::iter::once(to_decimal(x, cfg.digits)).chain(curves.iter().map(|c| fmt_f64(c[i], cfg.digits))).collect()
        })
        .collect();
    Ok(vec![table])
}

pub fn derivcheck(cfg: &JobConfig) -> CliResult<Vec<Table>> {
    // Fail before the expensive recurrence when the diagnostic is undefined.
    k_sharp(&cfg.ensemble().family, cfg.beta, cfg.precision_bits)?;
    let g = grid(cfg);
    cfg.n
        .par_iter()
        .map(|&n| {
            let d = finite_density(cfg, n)?;
            let c = deriv_correction(&d, &g)?;
            let mut table = Table::new(format!("N{n}"), &["x", "diagnostic", "comparison"]);
            table.meta("table", d.meta())?;
            table.meta("k_sharp", c.k_sharp)?;
            table.meta("pearson", pearson(&c.diagnostic, &c.comparison)?)?;
            table.rows = g
                .iter()
                .zip(c.diagnostic.iter().zip(&c.comparison))
                .map(|(x, (a, b))| vec![to_decimal(x, cfg.digits), fmt_f64(*a, cfg.digits), fmt_f64(*b, cfg.digits)])
                .collect();
            Ok(table)
        })
        .collect()
}

pub fn validate_mc(cfg: &JobConfig) -> CliResult<Vec<Table>> {
    if cfg.centring().is_none() {
        return Err(CliError::Config("`validate-mc` needs an edge map; --scaling none is not allowed".into()));
    }
    let (lo, hi) = cfg.grid_spec.bounds_f64();
    let samples = cfg.samples.expect("set for Monte Carlo");
    let seed = cfg.seed.expect("set for Monte Carlo");
    let bins = cfg.bins.expect("set for Monte Carlo");
    cfg.n
        .iter()
        .map(|&n| {
            let d = finite_density(cfg, n)?;
            let map = map_for(cfg, n)?.expect("checked above");
            let batch = sample_batch(cfg.ensemble(), n, samples, seed)?;
            let hist = edge_histogram(&batch, &map, lo, hi, bins)?;
            let mass = bin_integrals(&d, &map, &hist.edges)?;
            let expected: Vec<f64> = mass.iter().map(|p| p * samples as f64).collect();
            let chi = chi_square(&hist.counts, &expected)?;

            let (min, max) = batch.eigenvalues.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
            let span = max - min;
            let cdf_lo = if cfg.ensemble().family.is_laguerre() { 0.0 } else { min - 0.5 * span };
            let cdf = DensityCdf::new(&d, cdf_lo, max + 0.5 * span, 8001)?;
            let ks = ks_test(&batch.picked, |x| cdf.eval(x))?;

            let mut table = Table::new(format!("N{n}"), &["bin_center", "count", "density_estimate", "exact_density"]);
            table.meta("table", d.meta())?;
            table.meta("scaling", map.meta())?;
            table.meta("samples", samples)?;
            table.meta("seed", seed)?;
            table.meta("chi_square", chi)?;
            table.meta("ks", json!({ "statistic": ks.statistic, "p_value": ks.p_value, "cdf_mass": cdf.total() }))?;
            let width = (hi - lo) / bins as f64;
            table.rows = hist
                .centers()
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    vec![
                        fmt_f64(*c, cfg.digits),
                        hist.counts[i].to_string(),
                        fmt_f64(hist.density[i], cfg.digits),
                        fmt_f64(mass[i] / width, cfg.digits),
                    ]
                })
                .collect();
            Ok(table)
        })
        .collect()
}

pub fn reference(cfg: &JobConfig) -> CliResult<Vec<Table>> {
    let prec = cfg.precision_bits;
    let alpha_text = cfg.alpha.clone().unwrap_or_else(|| DEFAULT_REFERENCE_ALPHA.into());
    let alpha = parse_decimal(&alpha_text)
        .filter(|a| *a > Rational::from_integer(0.into()))
        .ok_or_else(|| CliError::Config(format!("--alpha must be a positive decimal, got `{alpha_text}`")))?;
    let prop = CorrectionCase::LaguerreProportional { alpha_ratio: alpha.clone() };
    let g = grid(cfg);
    let rows: Vec<Vec<String>> = g
        .par_iter()
        .map(|x| {
            let p = airy_prec(x, prec)?;
            let vals = [
                p.ai,
                p.ai_prime,
                rho_limit_beta2(x, prec)?,
                rho_correction_beta2(&CorrectionCase::Gaussian, x, prec)?,
                rho_correction_beta2(&CorrectionCase::LaguerreFixed, x, prec)?,
                rho_correction_beta2(&prop, x, prec)?,
            ];
            Ok(std::iter::once(to_decimal(x, cfg.digits)).chain(vals.iter().map(|v| to_decimal(v, cfg.digits))).collect())
        })
        .collect::<CliResult<_>>()?;
    let mut table = Table::new(
        "reference",
        &["x", "ai", "ai_prime", "rho_limit", "rho_corr_gaussian", "rho_corr_laguerre_fixed", "rho_corr_laguerre_proportional"],
    );
    table.meta("alpha", &alpha_text)?;
    table.meta("b", to_decimal(&b_constant(&alpha, prec), cfg.digits))?;
    table.rows = rows;
    Ok(vec![table])
}
