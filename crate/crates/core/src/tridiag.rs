//! Symmetric tridiagonal eigenproblems by the implicit QL method with
//! Wilkinson shifts.

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (`e[i]` couples rows `i` and `i + 1`), in ascending order.
pub fn eigenvalues(d: &[f64], e: &[f64]) -> Result<Vec<f64>> {
    let mut d = d.to_vec();
    let mut e = off_diagonal(&d, e);
    ql_implicit(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Eigenvalues and the first component of each normalized eigenvector,
/// sorted by eigenvalue. This is all a Gauss rule needs.
pub fn eigen_first_components(d: &[f64], e: &[f64]) -> Result<Vec<(f64, f64)>> {
    let mut d = d.to_vec();
    let mut e = off_diagonal(&d, e);
    let mut z = vec![0.0; d.len()];
    if let Some(z0) = z.first_mut() {
        *z0 = 1.0;
    }
    ql_implicit(&mut d, &mut e, Some(&mut z))?;
    let mut pairs: Vec<(f64, f64)> = d.into_iter().zip(z).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pairs)
}

fn off_diagonal(d: &[f64], e: &[f64]) -> Vec<f64> {
    assert!(e.len() + 1 >= d.len(), "off-diagonal too short");
    let mut out = vec![0.0; d.len()];
    let m = d.len().saturating_sub(1);
    out[..m].copy_from_slice(&e[..m]);
    out
}

/// In-place QL; `e` holds the off-diagonal in `e[0..n-1]` and is destroyed.
/// `z`, when given, is the first row of the accumulated rotation matrix.
fn ql_implicit(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::EigensolverNoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    let f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
