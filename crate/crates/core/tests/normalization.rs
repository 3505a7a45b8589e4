mod common;

use betaedge::oracles::cd_density;
use betaedge::FiniteDensity;
use common::*;
use rug::Float;

#[test]
fn mass_equals_matrix_size() {
    for beta in [2, 4, 6] {
        for n in 1..=12 {
            let d = FiniteDensity::new(&gaussian(beta), n, 128).unwrap();
            let m = mass(&d);
            assert!((m / n as f64 - 1.0).abs() < 1e-6, "gaussian beta={beta} n={n}: {m}");
        }
    }
    for beta in [2, 4] {
        for n in 1..=12 {
            let d = FiniteDensity::new(&laguerre(beta, q(1, 2)), n, 128).unwrap();
            let m = mass(&d);
            assert!((m / n as f64 - 1.0).abs() < 1e-6, "laguerre beta={beta} n={n}: {m}");
        }
    }
}

#[test]
fn gaussian_density_is_even() {
    let p = 512;
    for beta in [2, 4, 6] {
        let d = FiniteDensity::new(&gaussian(beta), 9, p).unwrap();
        for x in linspace(0.1, 6.0, 25) {
            let plus = d.eval(&Float::with_val(p, x)).unwrap();
            let minus = d.eval(&Float::with_val(p, -x)).unwrap();
            assert_eq!(plus, minus, "beta={beta} x={x}");
        }
    }
}

#[test]
fn positive_inside_the_support() {
    for ens in [gaussian(6), laguerre(4, q(1, 2)), proportional(6, q(10, 1))] {
        let d = FiniteDensity::new(&ens, 10, 256).unwrap();
        let xs = if ens.family.is_laguerre() { linspace(0.01, 150.0, 60) } else { linspace(-8.0, 8.0, 60) };
        for x in xs {
            assert!(d.eval(&Float::with_val(256, x)).unwrap().is_sign_positive());
        }
    }
}

#[test]
fn beta_two_matches_christoffel_darboux() {
    let p = 256;
    for ens in [gaussian(2), laguerre(2, q(0, 1)), laguerre(2, q(1, 2))] {
        for n in [1, 2, 7, 20] {
            let d = FiniteDensity::new(&ens, n, p).unwrap();
            let xs = if ens.family.is_laguerre() {
                linspace(0.05, 4.0 * n as f64 + 12.0, 20)
            } else {
                linspace(-(2.0 * n as f64).sqrt() - 4.0, (2.0 * n as f64).sqrt() + 4.0, 20)
            };
            for x in xs {
                let xf = Float::with_val(p, x);
                let mine = d.eval(&xf).unwrap();
                let cd = cd_density(&ens.family, n, 2, &xf, p).unwrap();
                let rel = (Float::with_val(p, &mine - &cd) / &cd).to_f64().abs();
                assert!(rel < 1e-30, "{ens:?} n={n} x={x}: {rel}");
            }
        }
    }
}

#[test]
fn doubling_precision_changes_nothing_reportable() {
    for ens in [gaussian(6), laguerre(4, q(1, 2))] {
        let lo = FiniteDensity::new(&ens, 20, 256).unwrap();
        let hi = FiniteDensity::new(&ens, 20, 512).unwrap();
        let xs = if ens.family.is_laguerre() { linspace(0.5, 120.0, 30) } else { linspace(-9.0, 9.0, 30) };
        for x in xs {
            let a = lo.eval(&Float::with_val(256, x)).unwrap();
            let b = hi.eval(&Float::with_val(512, x)).unwrap();
            let rel = (Float::with_val(512, &a - &b) / &b).to_f64().abs();
            assert!(rel < 1e-20, "{ens:?} x={x}: {rel}");
        }
    }
}

#[test]
fn small_closed_forms() {
    let pi = std::f64::consts::PI;
    let g1 = FiniteDensity::new(&gaussian(2), 1, 128).unwrap();
    assert!((rho(&g1, 0.0) - 1.0 / pi.sqrt()).abs() < 1e-16);
    let g2 = FiniteDensity::new(&gaussian(2), 2, 128).unwrap();
    let x: f64 = 0.8;
    let want = 2.0 / pi.sqrt() * (-x * x).exp() * (x * x + 0.5);
    assert!((rho(&g2, x) - want).abs() < 1e-15);
    let l1 = FiniteDensity::new(&laguerre(2, q(0, 1)), 1, 128).unwrap();
    assert!((rho(&l1, 0.0) - 1.0).abs() < 1e-16);
    assert!((rho(&l1, 1.3) - (-1.3f64).exp()).abs() < 1e-16);
}
