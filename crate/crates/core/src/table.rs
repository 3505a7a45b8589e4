//! Tabulated densities with provenance.

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::mp::to_decimal;

/// Affine edge map recorded next to a table, all values as decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingMeta {
    pub case: String,
    pub offset: String,
    pub scale: String,
    pub b: Option<String>,
    pub k_sharp: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableMeta {
    pub ensemble: String,
    pub beta: u32,
    pub n: usize,
    pub a: Option<String>,
    pub alpha_ratio: Option<String>,
    pub scaling: Option<ScalingMeta>,
    pub precision_bits: u32,
    pub backend: String,
    pub version: String,
}

/// Density values on a grid. When `meta.scaling` is set, `grid` holds the
/// scaled coordinate and `values` the Jacobian-weighted density.
#[derive(Clone, Debug)]
pub struct DensityTable {
    pub grid: Vec<Float>,
    pub values: Vec<Float>,
    pub meta: TableMeta,
}

impl DensityTable {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn grid_f64(&self) -> Vec<f64> {
        self.grid.iter().map(Float::to_f64).collect()
    }

    pub fn values_f64(&self) -> Vec<f64> {
        self.values.iter().map(Float::to_f64).collect()
    }

    /// Rows of `(x, value)` rendered with `digits` significant digits.
    pub fn rows(&self, digits: usize) -> Vec<(String, String)> {
        self.grid
            .iter()
            .zip(&self.values)
            .map(|(x, v)| (to_decimal(x, digits), to_decimal(v, digits)))
            .collect()
    }

    /// True when both tables sit on the same grid to within `tol`.
    pub fn same_grid(&self, other: &DensityTable, tol: f64) -> bool {
        self.grid.len() == other.grid.len()
            && self
                .grid
                .iter()
                .zip(&other.grid)
                .all(|(a, b)| Float::with_val(64, a - b).abs().to_f64() <= tol)
    }
}

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
